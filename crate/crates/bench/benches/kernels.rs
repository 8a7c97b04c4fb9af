use criterion::{black_box, criterion_group, criterion_main, Criterion};
use std::path::Path;

use lifshitz_core::config::load_material;
use lifshitz_core::{
    cd_coefficient, pp_free_energy_area, AtomModel, CasimirPolder, DielectricModel, Surface,
    ZeroFrequencyPolicy,
};

fn silicon() -> DielectricModel {
    load_material(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/si.toml")).unwrap()
}

fn kernels(c: &mut Criterion) {
    let atom = AtomModel::new(4.7e-29, 0.0).unwrap();
    let glass = DielectricModel::constant(3.81).unwrap();
    let si = silicon();
    let gold = DielectricModel::ideal_metal();

    c.bench_function("cd_coefficient", |b| {
        b.iter(|| cd_coefficient(black_box(3.81)))
    });

    let cp = CasimirPolder::new(atom, &glass, ZeroFrequencyPolicy::NeglectDc);
    c.bench_function("phi_a constant plate", |b| {
        b.iter(|| cp.phi(black_box(0.7), 2e-7, 300.0))
    });
    c.bench_function("free_energy constant plate 300 K", |b| {
        b.iter(|| cp.free_energy(black_box(2e-7), 300.0))
    });
    c.bench_function("free_energy constant plate 3 K", |b| {
        b.iter(|| cp.free_energy(black_box(2e-7), 3.0))
    });

    let screened = CasimirPolder::new(atom, &si, ZeroFrequencyPolicy::Screened);
    c.bench_function("free_energy screened silicon 300 K", |b| {
        b.iter(|| screened.free_energy(black_box(2e-7), 300.0))
    });
    c.bench_function("entropy screened silicon 30 K", |b| {
        b.iter(|| screened.entropy(black_box(2e-7), 30.0))
    });

    c.bench_function("plate-plate ideal metal over silicon", |b| {
        b.iter(|| {
            pp_free_energy_area(
                black_box(2e-7),
                300.0,
                Surface::new(&gold, ZeroFrequencyPolicy::NeglectDc),
                Surface::new(&si, ZeroFrequencyPolicy::NeglectDc),
            )
        })
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
