use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use morita_bench::{m2_corner, pseudo_random, t2_corner};
use morita_core::context::trace_ideals;
use morita_core::equivalence::{build_catalog, verify_kato_muller, verify_strict_equivalence};
use morita_core::exactlin::Field;
use morita_core::module::{hom_space, tensor_left, LeftModule};
use morita_core::torsion::{localize, TorsionTheory};

fn rref(c: &mut Criterion) {
    let mut g = c.benchmark_group("rref");
    for (name, field, n) in [
        ("gf2", Field::gf2(), 48),
        ("gf5", Field::prime(5).unwrap(), 48),
        ("q", Field::Rationals, 12),
    ] {
        let m = pseudo_random(field, n, n, 1);
        g.bench_with_input(BenchmarkId::new(name, n), &m, |b, m| {
            b.iter(|| black_box(m.rref()))
        });
    }
    g.finish();
}

fn hom_and_tensor(c: &mut Criterion) {
    let ctx = t2_corner();
    let cat = build_catalog(ctx.r(), 4).unwrap();
    let reg = LeftModule::regular(ctx.r().clone());
    c.bench_function("hom_space/T2 catalog<=4 x regular", |b| {
        b.iter(|| {
            for m in cat.modules() {
                black_box(hom_space(m, &reg).unwrap());
            }
        })
    });
    c.bench_function("tensor_left/MN over T2 catalog<=4", |b| {
        b.iter(|| {
            for m in cat.modules() {
                black_box(tensor_left(ctx.mn_module(), m).unwrap());
            }
        })
    });
}

fn catalogs(c: &mut Criterion) {
    let ctx = t2_corner();
    let mut g = c.benchmark_group("build_catalog/T2");
    for d in [2, 3, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| black_box(build_catalog(ctx.r(), d).unwrap()))
        });
    }
    g.finish();
}

fn engines(c: &mut Criterion) {
    let t2 = t2_corner();
    let (i, _) = trace_ideals(&t2).unwrap();
    let theory = TorsionTheory::new(t2.r().clone(), i);
    let reg = LeftModule::regular(t2.r().clone());
    c.bench_function("localize/T2 regular", |b| {
        b.iter(|| black_box(localize(&theory, &reg).unwrap()))
    });

    let (cr, cs) = (
        build_catalog(t2.r(), 3).unwrap(),
        build_catalog(t2.s(), 3).unwrap(),
    );
    c.bench_function("verify_kato_muller/T2 corner<=3", |b| {
        b.iter(|| black_box(verify_kato_muller(&t2, &cr, &cs, 0).unwrap()))
    });

    let m2 = m2_corner();
    let (mr, ms) = (
        build_catalog(m2.r(), 4).unwrap(),
        build_catalog(m2.s(), 2).unwrap(),
    );
    c.bench_function("verify_strict_equivalence/M2 corner", |b| {
        b.iter(|| black_box(verify_strict_equivalence(&m2, &mr, &ms, 0).unwrap()))
    });
}

criterion_group!(benches, rref, hom_and_tensor, catalogs, engines);
criterion_main!(benches);
