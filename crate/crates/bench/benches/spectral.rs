use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nhssh::spectral::{linspace, locate_exceptional_point, sweep_defect_strength};
use nhssh::{build_hamiltonian, eigendecompose, DefectSpec, LatticeSpec};
use nhssh_bench::pt_lattice;

fn eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigendecompose");
    for n in [25, 101] {
        let h = build_hamiltonian(&pt_lattice(n)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| eigendecompose(h).unwrap());
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let template = LatticeSpec::clean(25, 0.5, 1.0).with_defect(DefectSpec::asym(5, 0.0));
    let strengths = linspace(0.0, 1.5, 151);
    let mut group = c.benchmark_group("sweep");
    group.sample_size(20);
    group.bench_function("asym_151", |b| {
        b.iter(|| sweep_defect_strength(&template, &strengths).unwrap());
    });
    group.bench_function("ep_search", |b| {
        b.iter(|| locate_exceptional_point(&template, (0.8, 1.2), 1e-9).unwrap());
    });
    group.finish();
}

criterion_group!(benches, eigen, sweep);
criterion_main!(benches);
