//! Dense complex eigensolver: Householder reduction to upper Hessenberg form,
//! single-shift QR iteration to Schur form, then back-substitution for the
//! eigenvectors of the triangular factor.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const MAX_ITER_PER_EIGENVALUE: usize = 30;

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Unitary `q` and upper-triangular `t` with `a = q t q^H`.
pub(crate) struct Schur {
    pub t: DMatrix<Complex64>,
    pub q: DMatrix<Complex64>,
}

pub(crate) fn schur(a: &DMatrix<Complex64>) -> Result<Schur> {
    let n = a.nrows();
    let mut t = a.clone();
    let mut q = DMatrix::<Complex64>::identity(n, n);
    if n > 2 {
        hessenberg(&mut t, &mut q);
    }
    qr_iterate(&mut t, &mut q)?;
    Ok(Schur { t, q })
}

fn hessenberg(a: &mut DMatrix<Complex64>, q: &mut DMatrix<Complex64>) {
    let n = a.nrows();
    for k in 0..n - 2 {
        let tail: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let norm = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * norm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }

        // a <- (I - 2 v v^H) a
        for j in k..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * a[(k + 1 + r, j)])
                .sum();
            for (r, vr) in v.iter().enumerate() {
                a[(k + 1 + r, j)] -= vr * dot * 2.0;
            }
        }
        // a <- a (I - 2 v v^H), q <- q (I - 2 v v^H)
        for m in [&mut *a, &mut *q] {
            for i in 0..n {
                let dot: Complex64 = v
                    .iter()
                    .enumerate()
                    .map(|(r, vr)| m[(i, k + 1 + r)] * vr)
                    .sum();
                for (r, vr) in v.iter().enumerate() {
                    m[(i, k + 1 + r)] -= dot * vr.conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let rho = na.hypot(nb);
    let c = na / rho;
    let s = (a / na) * b.conj() / rho;
    (c, s)
}

fn wilkinson_shift(t: &DMatrix<Complex64>, hi: usize) -> Complex64 {
    let a = t[(hi - 1, hi - 1)];
    let b = t[(hi - 1, hi)];
    let c = t[(hi, hi - 1)];
    let d = t[(hi, hi)];
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let (plus, minus) = (p + disc, p - disc);
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

fn qr_iterate(t: &mut DMatrix<Complex64>, q: &mut DMatrix<Complex64>) -> Result<()> {
    let n = t.nrows();
    if n < 2 {
        return Ok(());
    }
    let budget = MAX_ITER_PER_EIGENVALUE * n;
    let mut total = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = t[(lo, lo - 1)];
            let mut scale = abs1(t[(lo - 1, lo - 1)]) + abs1(t[(lo, lo)]);
            if scale == 0.0 {
                scale = abs1(t[(lo - 1, lo)]) + if lo + 1 <= hi { abs1(t[(lo + 1, lo)]) } else { 0.0 };
            }
            if abs1(sub) <= EPS * scale || abs1(sub) < f64::MIN_POSITIVE {
                t[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            hi -= 1;
            its = 0;
            continue;
        }

        total += 1;
        its += 1;
        if total > budget {
            return Err(Error::NoConvergence { iterations: total });
        }
        let shift = if its % 10 == 0 {
            t[(hi, hi)] + 0.75 * t[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(t, hi)
        };
        qr_step(t, q, lo, hi, shift);
    }
    Ok(())
}

/// One explicit shifted QR sweep on the active window `lo..=hi`, applied as a
/// similarity transform to the whole matrix so `t` converges to Schur form.
fn qr_step(t: &mut DMatrix<Complex64>, q: &mut DMatrix<Complex64>, lo: usize, hi: usize, shift: Complex64) {
    let n = t.nrows();
    for i in lo..=hi {
        t[(i, i)] -= shift;
    }

    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(t[(k, k)], t[(k + 1, k)]);
        for j in k..n {
            let a = t[(k, j)];
            let b = t[(k + 1, j)];
            t[(k, j)] = a * c + s * b;
            t[(k + 1, j)] = -s.conj() * a + b * c;
        }
        t[(k + 1, k)] = Complex64::new(0.0, 0.0);
        rotations.push((k, c, s));
    }

    for &(k, c, s) in &rotations {
        for i in 0..=(k + 1).min(hi) {
            let a = t[(i, k)];
            let b = t[(i, k + 1)];
            t[(i, k)] = a * c + s.conj() * b;
            t[(i, k + 1)] = -s * a + b * c;
        }
        for i in 0..n {
            let a = q[(i, k)];
            let b = q[(i, k + 1)];
            q[(i, k)] = a * c + s.conj() * b;
            q[(i, k + 1)] = -s * a + b * c;
        }
    }

    for i in lo..=hi {
        t[(i, i)] += shift;
    }
}

/// Right eigenvectors (unnormalized) of the Schur factor mapped back through `q`.
pub(crate) fn eigenvectors(schur: &Schur) -> Vec<DVector<Complex64>> {
    let t = &schur.t;
    let n = t.nrows();
    let scale = t.iter().map(|z| abs1(*z)).fold(0.0, f64::max);
    // Floor keeps |d|^2 inside the normal range for complex division.
    let small = 1e-140;
    let big = 1e150;
    let mut vectors = Vec::with_capacity(n);

    for kk in 0..n {
        let lambda = t[(kk, kk)];
        let smin = (EPS * abs1(lambda).max(scale)).max(small);
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[kk] = Complex64::new(1.0, 0.0);
        for i in (0..kk).rev() {
            let s: Complex64 = (i + 1..=kk).map(|j| t[(i, j)] * x[j]).sum();
            let mut d = t[(i, i)] - lambda;
            if abs1(d) < smin {
                d = Complex64::new(smin, 0.0);
            }
            x[i] = -s / d;
            let mag = x[i].norm();
            if mag > big {
                for z in x.iter_mut().take(kk + 1) {
                    *z /= mag;
                }
            }
        }
        let x = DVector::from_vec(x);
        vectors.push(&schur.q * x);
    }
    vectors
}
