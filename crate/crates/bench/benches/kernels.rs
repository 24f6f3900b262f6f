use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use potkit::elliptic::{wp, TorusLattice};
use potkit::equilibrium::{equilibrium_measure, fekete_points, CompactSet, Pole};
use potkit::planar_green::{h1_contour, DomainDescriptor};
use potkit::schottky::{capacity_functions, StripDouble};
use potkit::surface::{torus_monopole_green, TorusSpec};
use potkit::vortex::{simulate, Vortex, VortexDomain, VortexSystem};
use potkit::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn elliptic(cr: &mut Criterion) {
    let l = TorusLattice::new(c(0.3, 1.2)).unwrap();
    cr.bench_function("lattice constants", |b| b.iter(|| TorusLattice::new(black_box(c(0.3, 1.2))).unwrap()));
    cr.bench_function("wp", |b| b.iter(|| wp(black_box(c(0.21, 0.37)), &l).unwrap()));
    let spec = TorusSpec::new(c(0.0, 2.0)).unwrap();
    cr.bench_function("torus green", |b| {
        b.iter(|| torus_monopole_green(black_box(c(0.4, 0.9)), c(0.1, 0.2), &spec).unwrap())
    });
}

fn capacity(cr: &mut Criterion) {
    let circle = CompactSet::Circle { r: 1.0 };
    let segment = CompactSet::Segment { length: 2.0 };
    cr.bench_function("fekete circle n=32", |b| b.iter(|| fekete_points(&circle, 32, Pole::Infinity).unwrap()));
    cr.bench_function("fekete segment n=32", |b| b.iter(|| fekete_points(&segment, 32, Pole::Infinity).unwrap()));
    cr.bench_function("equilibrium segment m=128", |b| b.iter(|| equilibrium_measure(&segment, 128).unwrap()));
}

fn planar(cr: &mut Criterion) {
    let d = DomainDescriptor::Disk { r: 1.0 };
    cr.bench_function("h1 contour n=512", |b| b.iter(|| h1_contour(&d, black_box(c(0.3, 0.4)), 512).unwrap()));
    let dbl = StripDouble::new(c(0.0, 2.0), 0.0).unwrap();
    cr.bench_function("strip capacity functions", |b| {
        b.iter(|| capacity_functions(black_box(c(-0.25, 0.5)), &dbl).unwrap())
    });
}

fn vortices(cr: &mut Criterion) {
    let vs = [(c(0.3, 0.1), 1.0), (c(-0.2, 0.4), -0.5), (c(0.0, -0.5), 0.8)];
    let sys =
        VortexSystem::new(VortexDomain::Disk { r: 1.0 }, vs.iter().map(|&(z, gamma)| Vortex { z, gamma }).collect())
            .unwrap();
    cr.bench_function("three disk vortices t=10", |b| b.iter(|| simulate(&sys, 10.0, 1e-10).unwrap()));
}

criterion_group!(benches, elliptic, capacity, planar, vortices);
criterion_main!(benches);
