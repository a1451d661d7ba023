use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ksa_core::bilinears::bilinear_with_symmetry;
use ksa_core::geometry::connection::{curvature_RD, killing_spinor_dimension, AdmissibleConnection};
use ksa_core::geometry::killing::assemble_killing_superalgebra;
use ksa_core::geometry::{model_space, sample_grid, GeometryKind};
use ksa_core::integrability::compute_theta;
use ksa_core::rational::q;
use ksa_core::spencer::{canonical_cocycle, solve_H22};
use ksa_core::superalgebra::{build_deformation, build_flat_model, super_jacobi_check};
use ksa_core::{build_gamma_rep, ModuleChoice, SignatureKind};

fn algebra(c: &mut Criterion) {
    let rep = build_gamma_rep(SignatureKind::Lorentzian11);
    let flat = build_flat_model(&rep, &bilinear_with_symmetry(&rep, -1), ModuleChoice::Full).unwrap();
    let def = build_deformation(&flat, &q(1)).unwrap();
    let cocycle = canonical_cocycle(&flat, &q(1));

    c.bench_function("solve_H22", |b| b.iter(|| solve_H22(black_box(&flat))));
    c.bench_function("super_jacobi_check", |b| b.iter(|| super_jacobi_check(black_box(&def))));
    c.bench_function("compute_theta", |b| b.iter(|| compute_theta(black_box(&cocycle), &flat).unwrap()));
}

fn geometry(c: &mut Criterion) {
    let geom = model_space(GeometryKind::H2, SignatureKind::Riemannian02, 0.5).unwrap();
    let conn = AdmissibleConnection::canonical(geom.clone(), -1);
    let samples = sample_grid(&geom, 9, 0.4);

    c.bench_function("curvature_RD", |b| b.iter(|| curvature_RD(&conn, black_box([0.1, 1.1])).unwrap()));
    c.bench_function("killing_spinor_dimension", |b| {
        b.iter(|| killing_spinor_dimension(&conn, geom.base_point(), black_box(&samples), &[]).unwrap())
    });
    let mut group = c.benchmark_group("slow");
    group.sample_size(10);
    group.bench_function("assemble_killing_superalgebra", |b| b.iter(|| assemble_killing_superalgebra(black_box(&conn)).unwrap()));
    group.finish();
}

criterion_group!(benches, algebra, geometry);
criterion_main!(benches);
