use nhssh::spectral::{linspace, mirror_mismatch, sweep_defect_strength, zero_mode_tolerance};
use nhssh::*;
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = LatticeSpec> {
    (2usize..15, 0.1f64..0.9, 0usize..3, 0.0f64..1.6, any::<u32>()).prop_map(|(half, k, variant, s, seed)| {
        let n = 2 * half + 1;
        let m = 1 + seed as usize % half;
        let defect = match variant {
            0 => DefectSpec::none(),
            1 => DefectSpec::asym(m, s),
            _ => DefectSpec::pt(m, s),
        };
        LatticeSpec::clean(n, k, 1.0).with_defect(defect)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn spectrum_mirror_symmetry(spec in spec_strategy()) {
        // Stay clear of exceptional points, where eigenvalues are only
        // accurate to sqrt(eps).
        prop_assume!(!spec.near_critical(0.05));
        let s = eigendecompose(&build_hamiltonian(&spec).unwrap()).unwrap();
        let mismatch = match spec.defect.variant {
            DefectVariant::Pt => mirror_mismatch(&s.eigenvalues, |e| -e.conj()),
            _ => mirror_mismatch(&s.eigenvalues, |e| -e),
        };
        prop_assert!(mismatch < 1e-9, "{mismatch}");
        prop_assert!(s.max_residual() <= 1e-9);
    }

    #[test]
    fn chiral_families_keep_an_exact_zero(spec in spec_strategy()) {
        prop_assume!(spec.defect.variant != DefectVariant::Pt);
        let s = eigendecompose(&build_hamiltonian(&spec).unwrap()).unwrap();
        let near_zero = s.eigenvalues.iter().filter(|e| e.norm() < 1e-8).count();
        prop_assert!(near_zero >= 1);
    }
}

#[test]
fn clean_lattices_have_exactly_one_zero() {
    for half in 1..30 {
        let spec = LatticeSpec::clean(2 * half + 1, 0.5, 1.0);
        let s = eigendecompose(&build_hamiltonian(&spec).unwrap()).unwrap();
        let zeros: Vec<_> = s.eigenvalues.iter().filter(|e| e.norm() < 1e-8).collect();
        assert_eq!(zeros.len(), 1);
        assert!(zeros[0].im.abs() <= 1e-9);
    }
}

#[test]
fn broken_phase_pair_is_conjugate_imaginary() {
    let template = LatticeSpec::clean(25, 0.5, 1.0).with_defect(DefectSpec::asym(5, 0.0));
    let table = sweep_defect_strength(&template, &linspace(1.05, 2.0, 20)).unwrap();
    for row in &table.rows {
        let (a, b) = row.bound_pair().unwrap();
        assert!(a.re.abs() < 1e-8 && b.re.abs() < 1e-8, "{}", row.strength);
        assert!((a.im + b.im).abs() < 1e-9);
        assert!(a.im.abs() > 0.0);
    }
}

#[test]
fn zero_strength_row_matches_clean_spectrum() {
    let clean = LatticeSpec::clean(25, 0.5, 1.0);
    let reference = eigendecompose(&build_hamiltonian(&clean).unwrap()).unwrap();
    for defect in [DefectSpec::asym(5, 0.0), DefectSpec::pt(7, 0.0)] {
        let table = sweep_defect_strength(&clean.with_defect(defect), &[0.0]).unwrap();
        let row = &table.rows[0];
        for (a, b) in row.eigenvalues.iter().zip(&reference.eigenvalues) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}

#[test]
fn sweep_rows_keep_input_order() {
    let template = LatticeSpec::clean(25, 0.5, 1.0).with_defect(DefectSpec::pt(5, 0.0));
    let strengths = [1.2, 0.1, 0.7, 0.0, 1.5];
    let table = sweep_defect_strength(&template, &strengths).unwrap();
    let got: Vec<f64> = table.rows.iter().map(|r| r.strength).collect();
    assert_eq!(got, strengths);
}

#[test]
fn zero_mode_tolerance_scales_with_c() {
    assert_eq!(zero_mode_tolerance(0.5), 1e-8);
    assert_eq!(zero_mode_tolerance(2.0), 2e-8);
}
