//! Verification engines for the equivalences induced by a Morita context,
//! run over finite module catalogs.
//!
//! Conventions: `F = M ⊗_S −`, `G = N ⊗_R −`, `F′ = Hom_R(M, −)` and
//! `G′ = Hom_S(N, −)`; the `S` side is checked by running the same code on
//! the swapped context.

mod catalog;
mod report;

pub use catalog::{build_catalog, build_catalog_with, Catalog, CatalogOptions, Provenance};
pub use report::{Report, Summary, Verdict, Witness};

pub(crate) use catalog::{catalog_names, graded_catalog, graded_iso, Grading};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Ideal;
use crate::context::{eta_map, eta_prime_map, is_strict, trace_ideals, CounitMap, MoritaContext};
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::module::{
    annihilator, hom_module, hom_space, ideal_action_image, is_isomorphic_with, same_algebra,
    tensor_left, IsoSearch, LeftModule,
};
use crate::torsion::{is_closed, localize, submodules_below, OracleVerdict, TorsionTheory};

/// Morphism pairs sampled for naturality squares.
pub const NATURALITY_PAIRS: usize = 32;

fn check_catalogs(ctx: &MoritaContext, cat_r: &Catalog, cat_s: &Catalog) -> Result<()> {
    if !same_algebra(cat_r.algebra(), ctx.r()) {
        return Err(Error::AlgebraMismatch(
            "R-side catalog is over another algebra".into(),
        ));
    }
    if !same_algebra(cat_s.algebra(), ctx.s()) {
        return Err(Error::AlgebraMismatch(
            "S-side catalog is over another algebra".into(),
        ));
    }
    Ok(())
}

/// Records context validity; false means the engine should stop.
fn precheck(
    report: &mut Report,
    ctx: &MoritaContext,
    cat_r: &Catalog,
    cat_s: &Catalog,
) -> Result<bool> {
    check_catalogs(ctx, cat_r, cat_s)?;
    report.bound(format!("R-side catalog: {}", cat_r.describe()));
    report.bound(format!("S-side catalog: {}", cat_s.describe()));
    let v = ctx.validate();
    let ok = v.is_valid();
    report.push(Verdict::new("context", "valid Morita context", ok).detail(v.to_string()));
    Ok(ok)
}

fn ideal_fact(name: &str, ring: &str, ideal: &Ideal, t: &TorsionTheory) -> String {
    if ideal.is_whole() {
        format!("{name} = {ring} (dim {})", ideal.dim())
    } else {
        format!("{name} = {}", t.describe())
    }
}

fn theories(ctx: &MoritaContext, report: &mut Report) -> Result<(TorsionTheory, TorsionTheory)> {
    let (i, j) = trace_ideals(ctx)?;
    let ti = TorsionTheory::new(ctx.r().clone(), i.clone());
    let tj = TorsionTheory::new(ctx.s().clone(), j.clone());
    report.fact(ideal_fact("I", "R", &i, &ti));
    report.fact(ideal_fact("J", "S", &j, &tj));
    Ok((ti, tj))
}

fn proper_ideal_detail(name: &str, ring: &str, ideal: &Ideal, dim: usize) -> String {
    format!("{name} ⊊ {ring} (dim {} of {dim})", ideal.dim())
}

fn random_map(h: &[Matrix], rng: &mut ChaCha8Rng) -> Option<Matrix> {
    let first = h.first()?;
    let f = first.field();
    let p = f.order().unwrap_or(7) as i64;
    let mut out = Matrix::zeros(f, first.rows(), first.cols());
    for m in h {
        let c = f.from_i64(rng.gen_range(0..p));
        if !c.is_zero() {
            out = &out + &m.scale(&c);
        }
    }
    Some(if out.is_zero() { first.clone() } else { out })
}

/// Naturality squares of a counit on sampled morphisms between catalog modules.
fn naturality(
    report: &mut Report,
    tag: &str,
    cat: &Catalog,
    maps: &[CounitMap],
    middle_dim: usize,
    symbol: &str,
    seed: u64,
) -> Result<()> {
    let n = cat.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = if n * n <= NATURALITY_PAIRS {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
    } else {
        (0..NATURALITY_PAIRS)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect()
    };
    let mut checked = 0;
    for (a, b) in pairs {
        let h = hom_space(&cat.modules()[a], &cat.modules()[b])?;
        let Some(f) = random_map(h.maps(), &mut rng) else {
            continue;
        };
        let lifted = crate::context::counit_source_map(middle_dim, &maps[a], &maps[b], &f);
        let ok = &f * &maps[a].matrix == &maps[b].matrix * &lifted;
        checked += 1;
        if !ok {
            report.push(
                Verdict::new(
                    format!("{tag}:{} → {tag}:{}", cat.names()[a], cat.names()[b]),
                    format!("naturality of {symbol}"),
                    false,
                )
                .witness("f", &f),
            );
        }
    }
    report.push(
        Verdict::new(
            format!("{tag}:catalog"),
            format!("naturality of {symbol}"),
            true,
        )
        .detail(format!("{checked} sampled morphisms"))
        .sampled(false),
    );
    if report
        .verdicts
        .iter()
        .any(|v| v.check == format!("naturality of {symbol}") && !v.pass)
    {
        if let Some(v) = report.verdicts.last_mut() {
            v.pass = false;
        }
    }
    Ok(())
}

fn counit_side(
    report: &mut Report,
    ctx: &MoritaContext,
    cat: &Catalog,
    tag: &str,
    symbol: &str,
    seed: u64,
) -> Result<()> {
    let mut maps = Vec::with_capacity(cat.len());
    for (name, x) in cat.iter() {
        let eta = eta_map(ctx, x)?;
        let ok = eta.is_invertible();
        let mut v = Verdict::new(format!("{tag}:{name}"), format!("{symbol} invertible"), ok)
            .detail(format!("dim {} → dim {}", eta.source.dim(), x.dim()));
        if !ok || x.dim() <= 4 {
            v = v.witness(symbol, &eta.matrix);
        }
        report.push(v);
        maps.push(eta);
    }
    naturality(report, tag, cat, &maps, ctx.mn().dim(), symbol, seed)
}

/// For a strict context, `η(X)` and `ρ(Y)` are invertible on every catalog
/// module and natural on sampled morphisms.
pub fn verify_strict_equivalence(
    ctx: &MoritaContext,
    cat_r: &Catalog,
    cat_s: &Catalog,
    seed: u64,
) -> Result<Report> {
    let mut report = Report::new("strict context: F and G are inverse equivalences");
    if !precheck(&mut report, ctx, cat_r, cat_s)? {
        return Ok(report);
    }
    let (ti, tj) = theories(ctx, &mut report)?;
    if !is_strict(ctx) {
        let mut v = Verdict::new("context", "strict (I = R and J = S)", false);
        let mut parts = Vec::new();
        if !ti.ideal().is_whole() {
            parts.push(proper_ideal_detail("I", "R", ti.ideal(), ctx.r().dim()));
        }
        if !tj.ideal().is_whole() {
            parts.push(proper_ideal_detail("J", "S", tj.ideal(), ctx.s().dim()));
        }
        v = v.detail(parts.join(", "));
        report.push(v);
        return Ok(report);
    }
    report.push(Verdict::new("context", "strict (I = R and J = S)", true));
    counit_side(&mut report, ctx, cat_r, "R", "η", seed)?;
    counit_side(&mut report, &ctx.swapped(), cat_s, "S", "ρ", seed)?;
    for (name, y) in cat_s.iter() {
        let (_, fy) = tensor_left(ctx.m(), y)?;
        report.fact(format!("F(S:{name}) has dim {}", fy.dim()));
    }
    Ok(report)
}

fn postcondition_verdict(subject: &str, check: &str, e: Error) -> Result<Verdict> {
    match e {
        Error::Postcondition(msg) => Ok(Verdict::new(subject, check, false).detail(msg)),
        e => Err(e),
    }
}

fn iso_verdict(subject: &str, check: &str, search: IsoSearch) -> Verdict {
    match search {
        IsoSearch::Found(g) => Verdict::new(subject, check, true).witness("isomorphism", &g),
        IsoSearch::ProvenNone => {
            Verdict::new(subject, check, false).detail("no isomorphism exists")
        }
        IsoSearch::NotFoundSampled => Verdict::new(subject, check, false)
            .detail("no isomorphism among sampled candidates")
            .sampled(true),
    }
}

/// One side of the quotient-category equivalence: every catalog module is
/// localized if needed, `F′` lands in the closed modules on the other side
/// and `G′F′X ≅ X`.
fn km_side(
    report: &mut Report,
    ctx: &MoritaContext,
    cat: &Catalog,
    here: &TorsionTheory,
    there: &TorsionTheory,
    tag: &str,
    seed: u64,
) -> Result<()> {
    let mut closed_count = 0;
    for (name, x) in cat.iter() {
        let subject = format!("{tag}:{name}");
        let xc = if is_closed(here, x)?.closed {
            closed_count += 1;
            x.clone()
        } else {
            let loc = match localize(here, x) {
                Ok(l) => l,
                Err(e) => {
                    report.push(postcondition_verdict(&subject, "localization laws", e)?);
                    continue;
                }
            };
            report.push(
                Verdict::new(&subject, "localization laws", true)
                    .detail(format!("not closed; localized dim {}", loc.module.dim()))
                    .witness("canonical map", &loc.map),
            );
            // F′ only kills the torsion difference up to J-torsion
            let a = hom_module(ctx.m(), x)?.module;
            let b = hom_module(ctx.m(), &loc.module)?.module;
            match localize(there, &a) {
                Ok(la) => report.push(iso_verdict(
                    &subject,
                    "localized F′(X) ≅ F′(localized X)",
                    is_isomorphic_with(&la.module, &b, seed)?,
                )),
                Err(e) => report.push(postcondition_verdict(
                    &subject,
                    "localized F′(X) ≅ F′(localized X)",
                    e,
                )?),
            }
            loc.module
        };
        let fx = hom_module(ctx.m(), &xc)?;
        let c = is_closed(there, &fx.module)?;
        report.push(
            Verdict::new(&subject, "F′(X) closed", c.closed)
                .detail(format!("dim F′(X) = {}", fx.dim()))
                .witness("α", &c.alpha),
        );
        let unit = eta_prime_map(ctx, &xc)?;
        if unit.is_invertible() {
            report.push(
                Verdict::new(&subject, "G′F′(X) ≅ X", true)
                    .detail("unit is invertible")
                    .witness("unit", &unit.matrix),
            );
        } else {
            let search = is_isomorphic_with(&unit.outer.module, &xc, seed)?;
            report.push(iso_verdict(&subject, "G′F′(X) ≅ X", search));
        }
    }
    report.fact(format!(
        "{tag} side: {closed_count} of {} catalog modules closed",
        cat.len()
    ));
    Ok(())
}

/// The quotient categories by the trace-ideal torsion theories are
/// equivalent via `F′` and `G′`, checked on every catalog module.
pub fn verify_kato_muller(
    ctx: &MoritaContext,
    cat_r: &Catalog,
    cat_s: &Catalog,
    seed: u64,
) -> Result<Report> {
    let mut report =
        Report::new("quotient categories are equivalent via F′ = Hom_R(M,−), G′ = Hom_S(N,−)");
    if !precheck(&mut report, ctx, cat_r, cat_s)? {
        return Ok(report);
    }
    let (ti, tj) = theories(ctx, &mut report)?;
    match localize(&ti, &LeftModule::regular(ctx.r().clone())) {
        Ok(l) => report.fact(format!("localize(R) has dim {}", l.module.dim())),
        Err(e) => report.push(postcondition_verdict("R", "localization laws", e)?),
    }
    km_side(&mut report, ctx, cat_r, &ti, &tj, "R", seed)?;
    km_side(&mut report, &ctx.swapped(), cat_s, &tj, &ti, "S", seed)?;
    Ok(report)
}

/// `M ⊗_S Hom_R(M, X) → X`, `m ⊗ f ↦ f(m)`.
pub fn evaluation_counit(ctx: &MoritaContext, x: &LeftModule) -> Result<Matrix> {
    let hm = hom_module(ctx.m(), x)?;
    let (tp, _) = tensor_left(ctx.m(), &hm.module)?;
    let f = x.field();
    let (dm, dh) = (ctx.m().dim(), hm.dim());
    let mut raw = Matrix::zeros(f, x.dim(), dm * dh);
    for i in 0..dm {
        for (u, map) in hm.space.maps().iter().enumerate() {
            for r in 0..x.dim() {
                raw[(r, i * dh + u)] = map[(r, i)].clone();
            }
        }
    }
    Ok(&raw * tp.section())
}

/// When `φ` is onto, `R`-mod is equivalent to the quotient of `S`-mod:
/// every `X` is closed, `F′(X)` is closed and `F F′(X) → X` is invertible.
pub fn verify_one_epi(
    ctx: &MoritaContext,
    cat_r: &Catalog,
    cat_s: &Catalog,
    seed: u64,
) -> Result<Report> {
    let _ = seed;
    let mut report = Report::new("φ onto: R-mod is equivalent to S-mod modulo J-torsion");
    if !precheck(&mut report, ctx, cat_r, cat_s)? {
        return Ok(report);
    }
    let (ti, tj) = theories(ctx, &mut report)?;
    if !ti.ideal().is_whole() {
        report.push(
            Verdict::new("context", "φ onto (I = R)", false).detail(proper_ideal_detail(
                "I",
                "R",
                ti.ideal(),
                ctx.r().dim(),
            )),
        );
        return Ok(report);
    }
    report.push(Verdict::new("context", "φ onto (I = R)", true));
    for (name, x) in cat_r.iter() {
        let subject = format!("R:{name}");
        report.push(Verdict::new(
            &subject,
            "closed for I",
            is_closed(&ti, x)?.closed,
        ));
        let fx = hom_module(ctx.m(), x)?;
        let c = is_closed(&tj, &fx.module)?;
        report.push(
            Verdict::new(&subject, "F′(X) closed", c.closed)
                .detail(format!("dim F′(X) = {}", fx.dim()))
                .witness("α", &c.alpha),
        );
        let e = evaluation_counit(ctx, x)?;
        report.push(
            Verdict::new(&subject, "F F′(X) → X invertible", e.is_invertible())
                .witness("counit", &e),
        );
    }
    Ok(report)
}

/// Whether every map `P → X/K` lifts to `P → X`, for every catalog `X` and
/// every submodule `K ≤ X` with `I·K = 0`.
pub fn is_i_projective_oracle(
    t: &TorsionTheory,
    p: &LeftModule,
    catalog: &Catalog,
    budget: u64,
) -> Result<OracleVerdict> {
    if !same_algebra(p.algebra(), t.algebra()) || !same_algebra(catalog.algebra(), t.algebra()) {
        return Err(Error::AlgebraMismatch(
            "I-projectivity needs modules over the theory's algebra".into(),
        ));
    }
    if !p.field().is_finite() {
        return Err(Error::RequiresFiniteField);
    }
    let mut sampled = false;
    let mut checked = 0;
    for x in catalog.modules() {
        let ceiling = annihilator(x, t.ideal());
        let (subs, s) = submodules_below(x, &ceiling, budget, 0)?;
        sampled |= s;
        let hx = hom_space(p, x)?;
        for k in &subs {
            checked += 1;
            let (q, proj) = x.quotient(k);
            let pushed: Vec<_> = hx
                .maps()
                .iter()
                .map(|h| (&proj * h).entries().to_vec())
                .collect();
            let system = Matrix::from_columns(p.field(), q.dim() * p.dim(), &pushed);
            for f in hom_space(p, &q)?.maps() {
                if system.solve(f.entries()).is_none() {
                    return Ok(OracleVerdict {
                        holds: false,
                        sampled,
                        checked,
                    });
                }
            }
        }
    }
    Ok(OracleVerdict {
        holds: true,
        sampled,
        checked,
    })
}

#[allow(clippy::too_many_arguments)]
fn projective_side(
    report: &mut Report,
    ctx: &MoritaContext,
    here_cat: &Catalog,
    there_cat: &Catalog,
    here: &TorsionTheory,
    there: &TorsionTheory,
    tag: &str,
    budget: u64,
) -> Result<()> {
    let mut members = Vec::new();
    for (name, p) in here_cat.iter() {
        if ideal_action_image(here.ideal(), p).dim() != p.dim() {
            continue;
        }
        let oracle = is_i_projective_oracle(here, p, here_cat, budget)?;
        if !oracle.holds {
            continue;
        }
        members.push(name.to_string());
        let subject = format!("{tag}:{name}");
        let (_, gp) = tensor_left(ctx.n(), p)?;
        let full = ideal_action_image(there.ideal(), &gp).dim() == gp.dim();
        report.push(
            Verdict::new(&subject, "J·G(P) = G(P)", full)
                .detail(format!("dim G(P) = {}", gp.dim()))
                .sampled(oracle.sampled),
        );
        let back = is_i_projective_oracle(there, &gp, there_cat, budget)?;
        report.push(
            Verdict::new(&subject, "G(P) is J-projective", back.holds)
                .detail(format!("{} quotients checked", back.checked))
                .sampled(back.sampled),
        );
        let eta = eta_map(ctx, p)?;
        report.push(
            Verdict::new(&subject, "F(G(P)) ≅ P", eta.is_invertible())
                .detail("via the counit")
                .witness("counit", &eta.matrix),
        );
    }
    report.fact(format!(
        "{tag} side projective class: [{}]",
        members.join(", ")
    ));
    Ok(())
}

/// The classes of `I`-projective modules with `IP = P` on both sides are
/// exchanged by `F` and `G`.
pub fn verify_projective_equivalence(
    ctx: &MoritaContext,
    cat_r: &Catalog,
    cat_s: &Catalog,
    budget: u64,
    seed: u64,
) -> Result<Report> {
    let _ = seed;
    let mut report = Report::new("I-projective modules with IP = P correspond under F and G");
    if !precheck(&mut report, ctx, cat_r, cat_s)? {
        return Ok(report);
    }
    let (ti, tj) = theories(ctx, &mut report)?;
    projective_side(&mut report, ctx, cat_r, cat_s, &ti, &tj, "R", budget)?;
    projective_side(
        &mut report,
        &ctx.swapped(),
        cat_s,
        cat_r,
        &tj,
        &ti,
        "S",
        budget,
    )?;
    Ok(report)
}
