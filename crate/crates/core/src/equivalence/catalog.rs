//! Module catalogs: one representative per isomorphism class up to a
//! dimension bound, built as iterated extensions by simple modules.
//!
//! Every module of dimension `d` contains a simple submodule `S`, so it is an
//! extension of some `M′` of dimension `d - dim S` by `S`; running over all
//! `M′` from the previous levels and all classes in `Ext¹(M′, S)` reaches every
//! isomorphism class. Gradings ride along as a degree per basis vector and
//! mask the extension cocycles; the ungraded case is the trivial group.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::{quotient_structure, Basis, Matrix, Scalar, Vector};
use crate::module::{
    advance_digits, enumerate_submodules_with_budget, hom_space_supported, same_algebra,
    search_invertible, IsoSearch, LeftModule, SAMPLE_COUNT,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    ExhaustiveUpToDim { max_dim: usize },
    UserSupplied,
    Sampled { max_dim: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct Catalog {
    algebra: Arc<Algebra>,
    modules: Vec<LeftModule>,
    names: Vec<String>,
    provenance: Provenance,
}

impl Catalog {
    pub fn user_supplied(
        algebra: Arc<Algebra>,
        modules: Vec<LeftModule>,
        names: Vec<String>,
    ) -> Result<Self> {
        if modules.len() != names.len() {
            return Err(Error::Dimension("one name per catalog module".into()));
        }
        for (m, n) in modules.iter().zip(&names) {
            if !same_algebra(m.algebra(), &algebra) {
                return Err(Error::AlgebraMismatch(format!(
                    "catalog module {n} is over another algebra"
                )));
            }
            let report = m.validate();
            if !report.is_valid() {
                return Err(Error::Invalid(format!("catalog module {n}: {report}")));
            }
        }
        Ok(Catalog {
            algebra,
            modules,
            names,
            provenance: Provenance::UserSupplied,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn modules(&self) -> &[LeftModule] {
        &self.modules
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LeftModule)> {
        self.names.iter().map(String::as_str).zip(&self.modules)
    }

    /// Human-readable bound, e.g. `exhaustive up to dim 3 (9 modules)`.
    pub fn describe(&self) -> String {
        let n = self.len();
        match self.provenance {
            Provenance::ExhaustiveUpToDim { max_dim } => {
                format!("exhaustive up to dim {max_dim} ({n} modules)")
            }
            Provenance::UserSupplied => format!("user-supplied ({n} modules)"),
            Provenance::Sampled { max_dim, seed } => {
                format!("sampled up to dim {max_dim}, seed {seed} ({n} modules)")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogOptions {
    /// Largest `p^k` enumerated exhaustively (Ext classes, submodules of `R`).
    pub budget: u64,
    /// Fall back to sampling instead of failing when over budget.
    pub allow_sampling: bool,
    pub seed: u64,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions {
            budget: 4096,
            allow_sampling: true,
            seed: 0,
        }
    }
}

pub fn build_catalog(r: &Arc<Algebra>, max_dim: usize) -> Result<Catalog> {
    build_catalog_with(r, max_dim, &CatalogOptions::default())
}

pub fn build_catalog_with(
    r: &Arc<Algebra>,
    max_dim: usize,
    opts: &CatalogOptions,
) -> Result<Catalog> {
    let g = Grading::trivial(r.dim());
    let (graded, sampled) = graded_catalog(r, &g, max_dim, opts)?;
    let names = catalog_names(&graded);
    Ok(Catalog {
        algebra: r.clone(),
        modules: graded.into_iter().map(|(m, _)| m).collect(),
        names,
        provenance: if sampled {
            Provenance::Sampled {
                max_dim,
                seed: opts.seed,
            }
        } else {
            Provenance::ExhaustiveUpToDim { max_dim }
        },
    })
}

pub(crate) fn catalog_names(mods: &[Graded]) -> Vec<String> {
    let mut count = std::collections::BTreeMap::new();
    mods.iter()
        .map(|(m, _)| {
            let k = count.entry(m.dim()).or_insert(0usize);
            *k += 1;
            format!("X{}.{}", m.dim(), *k)
        })
        .collect()
}

/// A module with a group degree per basis vector.
pub(crate) type Graded = (LeftModule, Vec<usize>);

/// Degree data for catalog construction.
#[derive(Clone, Debug)]
pub(crate) struct Grading {
    pub alg_degrees: Vec<usize>,
    pub table: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
}

impl Grading {
    pub fn trivial(dim: usize) -> Self {
        Grading {
            alg_degrees: vec![0; dim],
            table: vec![vec![0]],
            inverse: vec![0],
        }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

/// Degree-preserving isomorphism search.
pub(crate) fn graded_iso(a: &Graded, b: &Graded, seed: u64) -> Result<IsoSearch> {
    let (m, dm) = a;
    let (n, dn) = b;
    if m.dim() != n.dim() || sorted(dm) != sorted(dn) {
        return Ok(IsoSearch::ProvenNone);
    }
    if m.actions() == n.actions() && dm == dn {
        return Ok(IsoSearch::Found(Matrix::identity(m.field(), m.dim())));
    }
    let support = |r: usize, c: usize| dn[r] == dm[c];
    let h = hom_space_supported(m, n, Some(&support))?;
    if h.is_zero() {
        return Ok(IsoSearch::ProvenNone);
    }
    Ok(search_invertible(m.field(), m.dim(), None, h.maps(), seed))
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

fn graded_hom_dim(a: &Graded, b: &Graded) -> Result<usize> {
    let support = |r: usize, c: usize| b.1[r] == a.1[c];
    Ok(hom_space_supported(&a.0, &b.0, Some(&support))?.dim())
}

/// Isomorphism invariants used to skip most searches.
fn invariant(x: &Graded, simples: &[Graded]) -> Result<Vec<usize>> {
    let mut inv = sorted(&x.1);
    inv.extend(x.0.actions().iter().map(Matrix::rank));
    inv.push(graded_hom_dim(x, x)?);
    for s in simples {
        inv.push(graded_hom_dim(s, x)?);
        inv.push(graded_hom_dim(x, s)?);
    }
    Ok(inv)
}

/// Appends `x` unless isomorphic to a kept module; returns whether any
/// comparison was inconclusive.
fn dedupe_push(
    kept: &mut Vec<(Graded, Vec<usize>)>,
    x: Graded,
    inv: Vec<usize>,
    seed: u64,
) -> Result<bool> {
    let mut inconclusive = false;
    for (y, yinv) in kept.iter() {
        if *yinv != inv {
            continue;
        }
        match graded_iso(&x, y, seed)? {
            IsoSearch::Found(_) => return Ok(inconclusive),
            IsoSearch::NotFoundSampled => inconclusive = true,
            IsoSearch::ProvenNone => {}
        }
    }
    kept.push((x, inv));
    Ok(inconclusive)
}

/// Graded simple modules: quotients of the suspensions of `R` by maximal
/// graded left ideals, up to graded isomorphism.
pub(crate) fn graded_simples(
    r: &Arc<Algebra>,
    g: &Grading,
    opts: &CatalogOptions,
) -> Result<(Vec<Graded>, bool)> {
    let reg = LeftModule::regular(r.clone());
    let f = r.field();
    let n = r.dim();
    let subs = enumerate_submodules_with_budget(
        &reg,
        usize::MAX,
        opts.budget.max(crate::module::DEFAULT_ENUMERATION_BUDGET),
    )
    .map_err(|e| match e {
        Error::BudgetExceeded(m) => {
            Error::BudgetExceeded(format!("listing left ideals to find simple modules: {m}"))
        }
        e => e,
    })?;
    let is_graded = |b: &Basis| {
        let total: usize = (0..g.table.len())
            .map(|s| {
                let comp = Basis::span(
                    f,
                    n,
                    (0..n)
                        .filter(|&i| g.alg_degrees[i] == s)
                        .map(|i| crate::exactlin::unit_vector(f, n, i)),
                );
                comp.intersection(b).dim()
            })
            .sum();
        total == b.dim()
    };
    let graded: Vec<&Basis> = subs
        .iter()
        .map(|s| s.basis())
        .filter(|b| is_graded(b) && b.dim() < n)
        .collect();
    let maximal: Vec<&Basis> = graded
        .iter()
        .filter(|b| {
            !graded
                .iter()
                .any(|c| c.dim() > b.dim() && c.contains_subspace(b))
        })
        .copied()
        .collect();
    let mut kept: Vec<(Graded, Vec<usize>)> = Vec::new();
    let mut inconclusive = false;
    for sigma in 0..g.table.len() {
        let shift = g.inverse[sigma];
        for l in &maximal {
            let sub = crate::module::Submodule::new(&reg, (*l).clone())?;
            let (q, _) = reg.quotient(&sub);
            let reps = quotient_structure(n, l).representatives;
            let degrees = reps
                .iter()
                .map(|&i| g.mul(g.alg_degrees[i], shift))
                .collect();
            let x = (q, degrees);
            let inv = invariant(&x, &[])?;
            inconclusive |= dedupe_push(&mut kept, x, inv, opts.seed)?;
        }
    }
    let mut simples: Vec<Graded> = kept.into_iter().map(|(x, _)| x).collect();
    simples.sort_by_key(|(m, d)| (m.dim(), d.clone()));
    Ok((simples, inconclusive))
}

/// Representatives of the extensions `0 → S → E → M′ → 0`, one per class
/// of `Ext¹(M′, S)` (homogeneous of degree identity); sampled over budget.
pub(crate) fn extensions(
    s: &Graded,
    mp: &Graded,
    g: &Grading,
    opts: &CatalogOptions,
) -> Result<(Vec<Graded>, bool)> {
    let (sm, sd) = s;
    let (mm, md) = mp;
    let r = sm.algebra();
    let f = r.field();
    let (ds, dq, dr) = (sm.dim(), mm.dim(), r.dim());
    // variables D_k[row][col] allowed by degree
    let mut var = vec![None; dr * ds * dq];
    let mut nvars = 0;
    for k in 0..dr {
        for row in 0..ds {
            for col in 0..dq {
                if sd[row] == g.mul(g.alg_degrees[k], md[col]) {
                    var[(k * ds + row) * dq + col] = Some(nvars);
                    nvars += 1;
                }
            }
        }
    }
    let v = |k: usize, row: usize, col: usize| var[(k * ds + row) * dq + col];
    let mut eqs: Vec<Vector> = Vec::new();
    let c = r.structure_constants();
    let add = |eq: &mut Vector, idx: Option<usize>, x: &Scalar| {
        if let Some(i) = idx {
            eq[i] += x;
        }
    };
    // D(e_i e_j) = A_S(e_i) D(e_j) + D(e_i) A_M′(e_j)
    for i in 0..dr {
        for j in 0..dr {
            for row in 0..ds {
                for col in 0..dq {
                    let mut eq = vec![f.zero(); nvars];
                    for k in 0..dr {
                        if !c[i][j][k].is_zero() {
                            add(&mut eq, v(k, row, col), &c[i][j][k]);
                        }
                    }
                    for t in 0..ds {
                        let a = &sm.action(i)[(row, t)];
                        if !a.is_zero() {
                            add(&mut eq, v(j, t, col), &-a);
                        }
                    }
                    for t in 0..dq {
                        let a = &mm.action(j)[(t, col)];
                        if !a.is_zero() {
                            add(&mut eq, v(i, row, t), &-a);
                        }
                    }
                    if eq.iter().any(|x| !x.is_zero()) {
                        eqs.push(eq);
                    }
                }
            }
        }
    }
    // D(1) = 0
    for row in 0..ds {
        for col in 0..dq {
            let mut eq = vec![f.zero(); nvars];
            for k in 0..dr {
                let u = &r.unit()[k];
                if !u.is_zero() {
                    add(&mut eq, v(k, row, col), u);
                }
            }
            if eq.iter().any(|x| !x.is_zero()) {
                eqs.push(eq);
            }
        }
    }
    let cocycles = if eqs.is_empty() {
        Basis::full(f, nvars)
    } else {
        Matrix::from_rows(f, nvars, &eqs).kernel_basis()
    };
    // coboundaries D_h(e_k) = A_S(e_k) h - h A_M′(e_k), h degree preserving
    let mut cob: Vec<Vector> = Vec::new();
    for hr in 0..ds {
        for hc in 0..dq {
            if sd[hr] != md[hc] {
                continue;
            }
            let mut h = Matrix::zeros(f, ds, dq);
            h[(hr, hc)] = f.one();
            let mut vec_h = vec![f.zero(); nvars];
            for k in 0..dr {
                let d = &(sm.action(k) * &h) - &(&h * mm.action(k));
                for row in 0..ds {
                    for col in 0..dq {
                        if !d[(row, col)].is_zero() {
                            let idx = v(k, row, col).expect("coboundaries respect degrees");
                            vec_h[idx] = d[(row, col)].clone();
                        }
                    }
                }
            }
            cob.push(
                cocycles
                    .coordinates(&vec_h)
                    .expect("coboundaries are cocycles"),
            );
        }
    }
    let zdim = cocycles.dim();
    let b = Basis::span(f, zdim, cob);
    let q = quotient_structure(zdim, &b);
    let reps: Vec<Vector> = q.section.columns();
    let e = reps.len();
    let p = f.order().ok_or(Error::RequiresFiniteField)?;
    let elements = f.elements().expect("finite field");

    let build = |coeffs: &[usize]| -> Graded {
        let mut zc = vec![f.zero(); zdim];
        for (cf, rep) in coeffs.iter().zip(&reps) {
            if *cf != 0 {
                for (o, x) in zc.iter_mut().zip(rep) {
                    *o += &(&elements[*cf] * x);
                }
            }
        }
        let mut d = vec![f.zero(); nvars];
        for (coef, basis_vec) in zc.iter().zip(cocycles.vectors()) {
            if !coef.is_zero() {
                for (o, x) in d.iter_mut().zip(basis_vec) {
                    *o += &(coef * x);
                }
            }
        }
        let n = ds + dq;
        let action = (0..dr)
            .map(|k| {
                Matrix::from_fn(f, n, n, |row, col| {
                    if row < ds && col < ds {
                        sm.action(k)[(row, col)].clone()
                    } else if row >= ds && col >= ds {
                        mm.action(k)[(row - ds, col - ds)].clone()
                    } else if row < ds {
                        match v(k, row, col - ds) {
                            Some(i) => d[i].clone(),
                            None => f.zero(),
                        }
                    } else {
                        f.zero()
                    }
                })
            })
            .collect();
        let module =
            LeftModule::new(r.clone(), n, action).expect("extension has consistent shapes");
        debug_assert!(module.validate().is_valid());
        let mut degrees = sd.clone();
        degrees.extend(md.iter().copied());
        (module, degrees)
    };

    let total = (p as u128).checked_pow(e as u32).unwrap_or(u128::MAX);
    if total <= opts.budget as u128 {
        let mut out = Vec::new();
        let mut digits = vec![0usize; e];
        loop {
            out.push(build(&digits));
            if !advance_digits(&mut digits, p as usize) {
                break;
            }
        }
        Ok((out, false))
    } else if opts.allow_sampling {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut out = vec![build(&vec![0; e])];
        for _ in 0..SAMPLE_COUNT {
            let digits: Vec<usize> = (0..e).map(|_| rng.gen_range(0..p as usize)).collect();
            out.push(build(&digits));
        }
        Ok((out, true))
    } else {
        Err(Error::BudgetExceeded(format!(
            "{p}^{e} extension classes exceed budget {}",
            opts.budget
        )))
    }
}

/// All graded modules up to `max_dim`, one per graded isomorphism class,
/// ordered by dimension; the flag reports any sampling.
pub(crate) fn graded_catalog(
    r: &Arc<Algebra>,
    g: &Grading,
    max_dim: usize,
    opts: &CatalogOptions,
) -> Result<(Vec<Graded>, bool)> {
    if !r.field().is_finite() {
        return Err(Error::RequiresFiniteField);
    }
    let zero = (LeftModule::zero(r.clone()), Vec::new());
    let mut levels: Vec<Vec<Graded>> = vec![vec![zero]];
    if max_dim == 0 {
        return Ok((levels.remove(0), false));
    }
    let (simples, mut sampled) = graded_simples(r, g, opts)?;
    for d in 1..=max_dim {
        let mut kept: Vec<(Graded, Vec<usize>)> = Vec::new();
        for s in &simples {
            let sd = s.0.dim();
            if sd > d {
                continue;
            }
            for mp in &levels[d - sd] {
                let (exts, ext_sampled) = extensions(s, mp, g, opts)?;
                sampled |= ext_sampled;
                for x in exts {
                    let inv = invariant(&x, &simples)?;
                    sampled |= dedupe_push(&mut kept, x, inv, opts.seed)?;
                }
            }
        }
        levels.push(kept.into_iter().map(|(x, _)| x).collect());
    }
    Ok((levels.into_iter().flatten().collect(), sampled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;
    use crate::module::is_isomorphic;

    #[test]
    fn vector_spaces() {
        let k = Arc::new(Algebra::ground(Field::gf2()));
        let cat = build_catalog(&k, 2).unwrap();
        assert_eq!(
            cat.modules()
                .iter()
                .map(LeftModule::dim)
                .collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        assert_eq!(
            *cat.provenance(),
            Provenance::ExhaustiveUpToDim { max_dim: 2 }
        );
    }

    #[test]
    fn dimension_zero() {
        let t2 = Arc::new(Algebra::upper_triangular(Field::gf2()));
        assert_eq!(build_catalog(&t2, 0).unwrap().len(), 1);
    }

    /// Number of T2-modules of dimension d: a S1 ⊕ b S2 ⊕ c P2, a + b + 2c = d.
    fn t2_count(d: usize) -> usize {
        (0..=d / 2).map(|c| d - 2 * c + 1).sum()
    }

    #[test]
    fn t2_catalog_matches_classification() {
        let t2 = Arc::new(Algebra::upper_triangular(Field::gf2()));
        let cat = build_catalog(&t2, 4).unwrap();
        for d in 0..=4 {
            let n = cat.modules().iter().filter(|m| m.dim() == d).count();
            assert_eq!(n, t2_count(d), "dimension {d}");
        }
        for m in cat.modules() {
            assert!(m.validate().is_valid());
        }
        // pairwise non-isomorphic
        for (i, a) in cat.modules().iter().enumerate() {
            for b in &cat.modules()[i + 1..] {
                assert!(!is_isomorphic(a, b).unwrap().is_found());
            }
        }
        // the nonsplit extension P2 = Re22 appears in dimension 2
        let p2 = cat
            .modules()
            .iter()
            .filter(|m| m.dim() == 2)
            .any(|m| m.actions()[1].rank() == 1);
        assert!(p2);
    }

    #[test]
    fn m2_modules_are_column_powers() {
        let m2 = Arc::new(Algebra::matrix_algebra(Field::gf2(), 2));
        let cat = build_catalog(&m2, 4).unwrap();
        assert_eq!(
            cat.modules()
                .iter()
                .map(LeftModule::dim)
                .collect::<Vec<_>>(),
            vec![0, 2, 4]
        );
    }

    #[test]
    fn gf3_ground_field() {
        let k = Arc::new(Algebra::ground(Field::prime(3).unwrap()));
        assert_eq!(build_catalog(&k, 3).unwrap().len(), 4);
    }

    #[test]
    fn rationals_are_rejected() {
        let k = Arc::new(Algebra::ground(Field::Rationals));
        assert!(matches!(
            build_catalog(&k, 1),
            Err(Error::RequiresFiniteField)
        ));
    }
}
