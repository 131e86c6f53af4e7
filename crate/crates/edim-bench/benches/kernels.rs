//! Benchmarks for the three computational kernels: the closed-form sweep,
//! matrix Sylow construction with breadth-first closure, and the minimal
//! faithful representation of an enumerated wreath model.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use edim_core::formulas::{essential_dimension, validate, Family};
use edim_core::gf;
use edim_core::mackey::min_faithful_dim;
use edim_core::wreath::{make_group, WreathVariant};

/// The closed form over every in-gate tuple of a moderately large grid.
fn bench_formula_sweep(c: &mut Criterion) {
    let families = [
        Family::Gl,
        Family::Sl,
        Family::Psl,
        Family::Sp,
        Family::OrthPlus,
        Family::OrthMinus,
        Family::U,
        Family::Su,
        Family::Psu,
    ];
    let fields = [(3u64, 1u32), (2, 2), (5, 1), (7, 1), (3, 2)];
    c.bench_function("formula_sweep_9_families_n_le_12", |b| {
        b.iter(|| {
            let mut total = 0u64;
            for &family in &families {
                for n in 1..=12u64 {
                    for &(p, r) in &fields {
                        for l in [2u64, 3, 5, 7] {
                            if validate(family, n, p, r, l).is_err() {
                                continue;
                            }
                            let ed = essential_dimension(family, n, p, r, l).unwrap();
                            total += ed.value;
                        }
                    }
                }
            }
            black_box(total)
        })
    });
}

/// Explicit Sylow generators for GL_6(F_5) at l = 2 (order 2^16), then the
/// full breadth-first closure of the matrix group.
fn bench_matrix_closure(c: &mut Criterion) {
    c.bench_function("gl6_f5_l2_generators", |b| {
        b.iter(|| black_box(gf::sylow_generators(Family::Gl, 6, 5, 1, 2).unwrap()))
    });
    let model = gf::sylow_generators(Family::Gl, 6, 5, 1, 2).unwrap();
    c.bench_function("gl6_f5_l2_closure_65536", |b| {
        b.iter(|| {
            let order =
                gf::matrix_closure_order(&model.field, model.dim, &model.generators, 1 << 17)
                    .unwrap();
            black_box(order)
        })
    });
}

/// Minimal faithful dimension of the l = 3 wreath model for GL_6(F_7)
/// (3-adic valuation 8, so a group of order 6561).
fn bench_min_faithful(c: &mut Criterion) {
    let group = make_group(3, 1, 6, WreathVariant::Gl).unwrap();
    c.bench_function("min_faithful_wreath_3_s1_m6", |b| {
        b.iter(|| {
            let mf = min_faithful_dim(&group, 1 << 16).unwrap();
            black_box(mf.dim)
        })
    });
}

criterion_group!(benches, bench_formula_sweep, bench_matrix_closure, bench_min_faithful);
criterion_main!(benches);
