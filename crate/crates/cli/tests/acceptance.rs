//! Acceptance suite: one line per criterion, with its runtime bound.
//!
//! Run with `cargo test -p morita-cli --test acceptance`; an optional
//! argument filters criteria by number or name.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use morita_cli::{parse_workspace, Workspace};
use morita_core::algebra::Algebra;
use morita_core::context::{
    compose_contexts, contexts_isomorphic, eta_map, trace_ideals, MoritaContext,
};
use morita_core::equivalence::CatalogOptions;
use morita_core::equivalence::{
    build_catalog, verify_kato_muller, verify_projective_equivalence, verify_strict_equivalence,
    Catalog, Provenance, Report,
};
use morita_core::exactlin::{unit_vector, Basis, Field, Matrix, Scalar, Vector};
use morita_core::graded::{
    build_graded_catalog, graded_closed_test, suspension, verify_graded_kato_muller, GradedContext,
};
use morita_core::module::{
    annihilator, is_isomorphic_with, tensor_bimodules, LeftModule, Submodule,
};
use morita_core::torsion::{
    closed_via_eta, is_closed, is_torsion, is_torsion_free, localize, rel_injective_oracle,
    torsion_submodule, TorsionTheory,
};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn load(name: &str) -> Workspace {
    parse_workspace(&fixture(name)).expect("fixture loads")
}

fn ctx(ws: &Workspace, name: &str) -> MoritaContext {
    ws.context(name).unwrap().context.clone()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn failures(r: &Report) -> String {
    r.failures()
        .take(3)
        .map(|v| format!("{}: {}", v.subject, v.check))
        .collect::<Vec<_>>()
        .join("; ")
}

fn exhaustive(c: &Catalog) -> bool {
    matches!(c.provenance(), Provenance::ExhaustiveUpToDim { .. })
}

/// Every vector of `GF(2)^n`.
fn all_vectors(n: usize) -> Vec<Vector> {
    let f = Field::gf2();
    (0..1u64 << n)
        .map(|bits| {
            (0..n)
                .map(|i| f.from_i64(((bits >> i) & 1) as i64))
                .collect()
        })
        .collect()
}

fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

fn c1_strict_m2() -> Outcome {
    let ws = load("m2_corner.json");
    let g = ctx(&ws, "m2corner");
    let (i, j) = trace_ideals(&g).map_err(|e| e.to_string())?;
    check((i.dim(), j.dim()) == (4, 1), || {
        format!("trace dims ({}, {})", i.dim(), j.dim())
    })?;
    let cr = build_catalog(g.r(), 4).map_err(|e| e.to_string())?;
    let cs = build_catalog(g.s(), 2).map_err(|e| e.to_string())?;
    check(exhaustive(&cr) && exhaustive(&cs), || {
        "catalog not exhaustive".into()
    })?;
    let r = verify_strict_equivalence(&g, &cr, &cs, 0).map_err(|e| e.to_string())?;
    check(r.passed(true), || failures(&r))?;
    Ok(format!(
        "trace dims (4, 1); {} verdicts over {}+{} modules",
        r.verdicts.len(),
        cr.len(),
        cs.len()
    ))
}

/// Brute-force `Hom_R(I, Q)` dimension over `GF(2)`.
fn brute_hom_dim(r: &Algebra, ideal: &Basis, q: &LeftModule) -> usize {
    let (di, dq) = (ideal.dim(), q.dim());
    let mut count = 0u64;
    for images in all_vectors(di * dq) {
        let f = Matrix::from_fn(Field::gf2(), dq, di, |row, col| {
            images[col * dq + row].clone()
        });
        let linear = (0..r.dim()).all(|k| {
            ideal.vectors().iter().enumerate().all(|(b, v)| {
                let rb = r.multiply(&r.basis_vector(k), v);
                let coords = ideal.coordinates(&rb).expect("ideal is closed");
                f.apply(&coords) == q.action(k).apply(&f.column(b))
            })
        });
        count += linear as u64;
    }
    count.trailing_zeros() as usize
}

fn c2_kato_muller_t2() -> Outcome {
    let ws = load("t2_corner.json");
    let g = ctx(&ws, "t2corner");
    let cr = build_catalog(g.r(), 3).map_err(|e| e.to_string())?;
    let cs = build_catalog(g.s(), 3).map_err(|e| e.to_string())?;
    let r = verify_kato_muller(&g, &cr, &cs, 0).map_err(|e| e.to_string())?;
    check(r.passed(true), || failures(&r))?;
    for fact in [
        "I = 2-dim, idempotent (exponent 1)",
        "J = S (dim 1)",
        "localize(R) has dim 1",
    ] {
        check(r.has_fact(fact), || format!("report lacks '{fact}'"))?;
    }

    // Independent oracles for the reported values.
    let alg = g.r().clone();
    let (dm, dn) = (g.m().dim(), g.n().dim());
    let mut images = Vec::new();
    for m in all_vectors(dm) {
        for n in all_vectors(dn) {
            images.push(g.phi_of(&m, &n));
        }
    }
    let i = Basis::span(Field::gf2(), alg.dim(), images);
    check(i.dim() == 2, || format!("oracle I dim {}", i.dim()))?;
    let elems: Vec<Vector> = all_vectors(2)
        .iter()
        .map(|c| i.as_columns().apply(c))
        .collect();
    let sq = Basis::span(
        Field::gf2(),
        alg.dim(),
        elems
            .iter()
            .flat_map(|a| elems.iter().map(|b| alg.multiply(a, b)))
            .collect::<Vec<_>>(),
    );
    check(sq == i, || "oracle: I² ≠ I".into())?;
    let mut js = Vec::new();
    for n in all_vectors(dn) {
        for m in all_vectors(dm) {
            js.push(g.psi_of(&n, &m));
        }
    }
    let j = Basis::span(Field::gf2(), g.s().dim(), js);
    check(j.is_full(), || "oracle: J ≠ S".into())?;

    let reg = LeftModule::regular(alg.clone());
    let torsion: Vec<Vector> = all_vectors(3)
        .into_iter()
        .filter(|x| elems.iter().all(|b| is_zero(&alg.multiply(b, x))))
        .collect();
    let tx = Basis::span(Field::gf2(), 3, torsion);
    let (q, _) = reg.quotient(&Submodule::new(&reg, tx).map_err(|e| e.to_string())?);
    let loc = brute_hom_dim(&alg, &i, &q);
    check(loc == 1, || format!("oracle localize dim {loc}"))?;
    Ok(format!(
        "{} verdicts; oracles: I dim 2, I² = I, J = S, localize(T2) dim 1",
        r.verdicts.len()
    ))
}

fn t2_theory(g: &MoritaContext) -> TorsionTheory {
    let (i, _) = trace_ideals(g).unwrap();
    TorsionTheory::new(g.r().clone(), i)
}

fn c3_closedness_agreement() -> Outcome {
    let ws = load("t2_corner.json");
    let g = ctx(&ws, "t2corner");
    let t = t2_theory(&g);
    let cat = build_catalog(g.r(), 4).map_err(|e| e.to_string())?;
    check(exhaustive(&cat), || "catalog not exhaustive".into())?;
    let reg = LeftModule::regular(g.r().clone());
    let mut disagreements = Vec::new();
    let mut closed = 0;
    for (name, x) in cat.iter() {
        let a = is_closed(&t, x).map_err(|e| e.to_string())?.closed;
        let oracle = rel_injective_oracle(&t, x, &reg, 1 << 20).map_err(|e| e.to_string())?;
        check(!oracle.sampled, || format!("{name}: oracle sampled"))?;
        let b = is_torsion_free(&t, x).map_err(|e| e.to_string())? && oracle.holds;
        let c = closed_via_eta(&g, x).map_err(|e| e.to_string())?;
        if !(a == b && b == c) {
            disagreements.push(format!("{name}: {a}/{b}/{c}"));
        }
        closed += a as usize;
    }
    check(disagreements.is_empty(), || disagreements.join(", "))?;
    Ok(format!(
        "{} modules, {closed} closed, 0 disagreements",
        cat.len()
    ))
}

/// `I · ker η(X) = 0` for every catalog module, on both sides of a context.
fn kernel_is_torsion(g: &MoritaContext, r_dim: usize, s_dim: usize) -> Result<usize, String> {
    let mut checked = 0;
    for (side, d) in [(g.clone(), r_dim), (g.swapped(), s_dim)] {
        let (i, _) = trace_ideals(&side).map_err(|e| e.to_string())?;
        let cat = build_catalog(side.r(), d).map_err(|e| e.to_string())?;
        for (name, x) in cat.iter() {
            let eta = eta_map(&side, x).map_err(|e| e.to_string())?;
            let ker = eta.kernel();
            for b in i.basis().vectors() {
                let act = eta.source.act(b);
                for k in ker.vectors() {
                    check(is_zero(&act.apply(k)), || format!("{name}: I·ker η ≠ 0"))?;
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn c4_kernel_of_eta() -> Outcome {
    let t2 = load("t2_corner.json");
    let m2 = load("m2_corner.json");
    let a = kernel_is_torsion(&ctx(&t2, "t2corner"), 4, 3)?;
    let b = kernel_is_torsion(&ctx(&m2, "m2corner"), 4, 3)?;
    Ok(format!("{} modules (T2 corner {a}, M2 corner {b})", a + b))
}

fn localization_laws(t: &TorsionTheory, cat: &Catalog) -> Result<usize, String> {
    for (name, x) in cat.iter() {
        let loc = localize(t, x).map_err(|e| format!("{name}: {e}"))?;
        let ann = annihilator(x, t.stable());
        check(loc.map.kernel_basis() == *ann.basis(), || {
            format!("{name}: kernel ≠ torsion part")
        })?;
        let image =
            Submodule::new(&loc.module, loc.map.column_space()).map_err(|e| e.to_string())?;
        let (coker, _) = loc.module.quotient(&image);
        check(is_torsion(t, &coker).map_err(|e| e.to_string())?, || {
            format!("{name}: cokernel not torsion")
        })?;
        let again = localize(t, &loc.module).map_err(|e| e.to_string())?;
        let iso = is_isomorphic_with(&again.module, &loc.module, 0).map_err(|e| e.to_string())?;
        check(iso.is_found(), || {
            format!("{name}: localization not idempotent")
        })?;
        check(
            torsion_submodule(t, x).map_err(|e| e.to_string())?.basis() == ann.basis(),
            || format!("{name}: torsion part ≠ Ann(I∞)"),
        )?;
    }
    Ok(cat.len())
}

fn c5_localization_laws() -> Outcome {
    let mut n = 0;
    for (file, name, rd, sd) in [
        ("t2_corner.json", "t2corner", 4, 3),
        ("m2_corner.json", "m2corner", 4, 3),
    ] {
        let ws = load(file);
        let g = ctx(&ws, name);
        let (i, j) = trace_ideals(&g).map_err(|e| e.to_string())?;
        let cr = build_catalog(g.r(), rd).map_err(|e| e.to_string())?;
        let cs = build_catalog(g.s(), sd).map_err(|e| e.to_string())?;
        n += localization_laws(&TorsionTheory::new(g.r().clone(), i), &cr)?;
        n += localization_laws(&TorsionTheory::new(g.s().clone(), j), &cs)?;
    }
    Ok(format!("{n} modules"))
}

/// `φ` and `ψ` of both bracketings agree on all pure basis tensors, under the
/// canonical associativity identification.
fn associative(g: &MoritaContext, d: &MoritaContext, s: &MoritaContext) -> Result<usize, String> {
    let gd = compose_contexts(g, d).map_err(|x| x.to_string())?;
    let ds = compose_contexts(d, s).map_err(|x| x.to_string())?;
    let left = compose_contexts(&gd, s).map_err(|x| x.to_string())?;
    let right = compose_contexts(g, &ds).map_err(|x| x.to_string())?;
    let t = |a, b| {
        tensor_bimodules(a, b)
            .map(|(t, _)| t)
            .map_err(|x| x.to_string())
    };
    // M: (Mg⊗Md)⊗Ms vs Mg⊗(Md⊗Ms); N: Ns⊗(Nd⊗Ng) vs (Ns⊗Nd)⊗Ng.
    let (m_gd, m_ds) = (t(g.m(), d.m())?, t(d.m(), s.m())?);
    let (n_dg, n_sd) = (t(d.n(), g.n())?, t(s.n(), d.n())?);
    let (m_l, m_r) = (t(gd.m(), s.m())?, t(g.m(), ds.m())?);
    let (n_l, n_r) = (t(s.n(), gd.n())?, t(ds.n(), g.n())?);
    let f = Field::gf2();
    let u = |n, i| unit_vector(f, n, i);
    let (dg, dd, ds_) = (g.m().dim(), d.m().dim(), s.m().dim());
    let (eg, ed, es) = (g.n().dim(), d.n().dim(), s.n().dim());
    let mut compared = 0;
    for a in 0..dg {
        for b in 0..dd {
            for c in 0..ds_ {
                let ml = m_l.pure(&m_gd.pure(&u(dg, a), &u(dd, b)), &u(ds_, c));
                let mr = m_r.pure(&u(dg, a), &m_ds.pure(&u(dd, b), &u(ds_, c)));
                for x in 0..es {
                    for y in 0..ed {
                        for z in 0..eg {
                            let nl = n_l.pure(&u(es, x), &n_dg.pure(&u(ed, y), &u(eg, z)));
                            let nr = n_r.pure(&n_sd.pure(&u(es, x), &u(ed, y)), &u(eg, z));
                            check(left.phi_of(&ml, &nl) == right.phi_of(&mr, &nr), || {
                                format!("phi differs at m({a},{b},{c}) n({x},{y},{z})")
                            })?;
                            check(left.psi_of(&nl, &ml) == right.psi_of(&nr, &mr), || {
                                format!("psi differs at n({x},{y},{z}) m({a},{b},{c})")
                            })?;
                            compared += 2;
                        }
                    }
                }
            }
        }
    }
    Ok(compared)
}

fn c6_composition() -> Outcome {
    let ws = load("m2_corner.json");
    let g = ctx(&ws, "m2corner");
    let one_s = MoritaContext::identity(g.s().clone());
    let one_r = MoritaContext::identity(g.r().clone());
    for (label, c) in [
        ("Γ∘1", compose_contexts(&g, &one_s)),
        ("1∘Γ", compose_contexts(&one_r, &g)),
    ] {
        let c = c.map_err(|e| e.to_string())?;
        let found = contexts_isomorphic(&c, &g, 0).map_err(|e| e.to_string())?;
        let iso = found.found().ok_or_else(|| format!("{label} ≇ Γ"))?;
        check(iso.verify(&c, &g), || format!("{label}: witness fails"))?;
    }
    let h = g.swapped();
    let mut compared = 0;
    for (a, b, c) in [
        (&g, &h, &g),
        (&h, &g, &h),
        (&one_r, &g, &h),
        (&g, &one_s, &h),
        (&g, &h, &one_r),
    ] {
        compared += associative(a, b, c)?;
    }
    Ok(format!(
        "Γ∘1 ≅ Γ ≅ 1∘Γ; 5 nested triples, {compared} φ/ψ values equal"
    ))
}

fn c7_projective_side() -> Outcome {
    let ws = load("t2_corner.json");
    let g = ctx(&ws, "t2corner");
    let cr = build_catalog(g.r(), 3).map_err(|e| e.to_string())?;
    let cs = build_catalog(g.s(), 3).map_err(|e| e.to_string())?;
    let r = verify_projective_equivalence(&g, &cr, &cs, 1 << 20, 0).map_err(|e| e.to_string())?;
    check(r.passed(true), || failures(&r))?;
    check(r.verdicts.iter().all(|v| !v.sampled), || {
        "sampled verdict".into()
    })?;
    let class = r
        .facts
        .iter()
        .find(|f| f.starts_with("R side projective class"))
        .cloned()
        .unwrap_or_default();
    Ok(format!("{} verdicts; {class}", r.verdicts.len()))
}

fn c8_graded() -> Outcome {
    let ws = load("t2_corner.json");
    let (_, gc): (String, GradedContext) = ws
        .graded_context("t2corner", None)
        .map_err(|e| e.to_string())?;
    let opts = CatalogOptions::default();
    let cr = build_graded_catalog(&gc.r, 3, &opts).map_err(|e| e.to_string())?;
    let cs = build_graded_catalog(&gc.s, 3, &opts).map_err(|e| e.to_string())?;
    let r = verify_graded_kato_muller(&gc, &cr, &cs, 0).map_err(|e| e.to_string())?;
    check(r.passed(true), || failures(&r))?;
    let group = gc.r.group();
    let gen = (0..group.order())
        .find(|&x| group.label(x) == "g")
        .ok_or("no element g")?;
    let t = t2_theory(&gc.context);
    for (name, x) in cr.iter() {
        let a = graded_closed_test(&t, x).map_err(|e| e.to_string())?;
        let b = graded_closed_test(&t, &suspension(x, gen)).map_err(|e| e.to_string())?;
        check(a == b, || {
            format!("{name}: suspension by g changes closedness")
        })?;
    }
    Ok(format!(
        "{} verdicts; suspension by g preserves all {} verdicts",
        r.verdicts.len(),
        cr.len()
    ))
}

fn random_matrix(field: Field) -> impl Strategy<Value = Matrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(move |(r, c)| {
        proptest::collection::vec((-4i64..=4, 1i64..=4, 0u8..3), r * c).prop_map(move |cells| {
            let mut it = cells.into_iter();
            Matrix::from_fn(field, r, c, |_, _| {
                let (n, d, z) = it.next().unwrap();
                if z == 0 {
                    field.zero()
                } else {
                    field
                        .from_fraction(n, d)
                        .unwrap_or_else(|_| field.from_i64(n))
                }
            })
        })
    })
}

fn c9_linear_algebra() -> Outcome {
    let mut total = 0;
    for field in [Field::gf2(), Field::prime(5).unwrap(), Field::Rationals] {
        let mut runner = TestRunner::new_with_rng(
            Config::with_cases(1000),
            TestRng::deterministic_rng(RngAlgorithm::ChaCha),
        );
        let strat = (random_matrix(field), random_matrix(field));
        for _ in 0..1000 {
            let (a, b) = strat
                .new_tree(&mut runner)
                .map_err(|e| e.to_string())?
                .current();
            let k = a.kernel_basis();
            check(a.rank() + k.dim() == a.cols(), || {
                format!("rank-nullity fails over {field}")
            })?;
            let (r1, p1) = a.rref();
            check(r1.rref() == (r1.clone(), p1), || {
                format!("rref not idempotent over {field}")
            })?;
            let n = a.rows().min(b.rows());
            let u = Basis::span(field, n, a.columns().into_iter().map(|c| c[..n].to_vec()));
            let v = Basis::span(field, n, b.columns().into_iter().map(|c| c[..n].to_vec()));
            check(
                u.sum(&v).dim() + u.intersection(&v).dim() == u.dim() + v.dim(),
                || format!("dimension formula fails over {field}"),
            )?;
            total += 1;
        }
    }
    Ok(format!("{total} random matrices over GF(2), GF(5), Q"))
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}.json"));
        let res = Command::new(env!("CARGO_BIN_EXE_morita"))
            .args([
                "equiv",
                "--context",
                "t2corner",
                "--max-dim",
                "3",
                "--seed",
                "7",
                "--format",
                "machine",
            ])
            .arg("--workspace")
            .arg(fixture("t2_corner.json"))
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        check(res.status.code() == Some(0), || {
            format!("exit {:?}", res.status.code())
        })?;
        let file = std::fs::read(&out).map_err(|e| e.to_string())?;
        check(file == res.stdout, || "--out differs from stdout".into())?;
        outputs.push(res.stdout);
    }
    check(outputs[0] == outputs[1], || "machine reports differ".into())?;
    Ok(format!("two runs, {} identical bytes", outputs[0].len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    bound: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "strict-context equivalence (M2 corner)",
            bound: Duration::from_secs(5),
            run: c1_strict_m2,
        },
        Criterion {
            id: 2,
            name: "quotient-category equivalence (T2 corner)",
            bound: Duration::from_secs(30),
            run: c2_kato_muller_t2,
        },
        Criterion {
            id: 3,
            name: "closedness criteria agree",
            bound: Duration::from_secs(60),
            run: c3_closedness_agreement,
        },
        Criterion {
            id: 4,
            name: "kernel of eta is torsion",
            bound: Duration::from_secs(5),
            run: c4_kernel_of_eta,
        },
        Criterion {
            id: 5,
            name: "localization laws",
            bound: Duration::from_secs(10),
            run: c5_localization_laws,
        },
        Criterion {
            id: 6,
            name: "composition unit and associativity",
            bound: Duration::from_secs(5),
            run: c6_composition,
        },
        Criterion {
            id: 7,
            name: "projective-side equivalence",
            bound: Duration::from_secs(60),
            run: c7_projective_side,
        },
        Criterion {
            id: 8,
            name: "graded equivalence and suspension",
            bound: Duration::from_secs(30),
            run: c8_graded,
        },
        Criterion {
            id: 9,
            name: "exact linear algebra",
            bound: Duration::from_secs(5),
            run: c9_linear_algebra,
        },
        Criterion {
            id: 10,
            name: "deterministic machine reports",
            bound: Duration::from_secs(30),
            run: c10_determinism,
        },
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for c in &criteria {
        let key = format!("{} {}", c.id, c.name);
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|f| key.contains(f.as_str()) || *f == c.id.to_string())
        {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(d) if elapsed <= c.bound => (true, d),
            Ok(d) => (false, format!("{d}; over the time bound")),
            Err(e) => (false, e),
        };
        failed += !pass as usize;
        println!(
            "criterion {:>2} {}: {} — {} ({:.2}s, bound {}s)",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.bound.as_secs()
        );
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
