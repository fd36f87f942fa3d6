//! Algebras and modules graded by a finite group, and the graded version of
//! the quotient-category equivalence.
//!
//! Degrees are group element indices attached to basis vectors; every object
//! here uses homogeneous bases.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::context::{corner_context, trace_ideals, MoritaContext};
use crate::equivalence::{
    catalog_names, graded_catalog, graded_iso, CatalogOptions, Grading, Provenance, Report, Verdict,
};
use crate::error::{Error, Result};
use crate::exactlin::{Basis, Scalar};
use crate::module::{
    hom_space, hom_space_supported, same_algebra, Bimodule, HomModule, HomSpace, IsoSearch,
    LeftModule,
};
use crate::torsion::{closedness_map, torsion_submodule, TorsionTheory};
use crate::validation::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Checks closure, associativity, identity and inverses of `table`.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0
            || table
                .iter()
                .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
        {
            return Err(Error::Grading(
                "group table must be square with entries below its order".into(),
            ));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Grading(format!(
                            "group table is not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::Grading("group table has no identity".into()))?;
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| Error::Grading(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = (0..n)
            .map(|i| {
                if i == identity {
                    "e".to_string()
                } else {
                    format!("g{i}")
                }
            })
            .collect();
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
            labels,
        })
    }

    /// `Z/n` with elements `e, g, g2, …`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let mut g = Self::new(table).expect("cyclic group");
        g.labels = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{i}"),
            })
            .collect();
        g
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(Error::Grading("one label per group element".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Degree of a vector whose support lies in one homogeneous component.
fn vector_degree(v: &[Scalar], degrees: &[usize]) -> Option<usize> {
    let mut deg = None;
    for (x, &d) in v.iter().zip(degrees) {
        if !x.is_zero() {
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
    }
    deg
}

/// Degrees of a basis of homogeneous vectors.
fn basis_degrees(b: &Basis, degrees: &[usize], what: &str) -> Result<Vec<usize>> {
    b.vectors()
        .iter()
        .map(|v| {
            vector_degree(v, degrees)
                .ok_or_else(|| Error::Grading(format!("{what} is not a graded subspace")))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    base: Arc<Algebra>,
    group: FiniteGroup,
    degrees: Vec<usize>,
}

impl GradedAlgebra {
    pub fn new(base: Arc<Algebra>, group: FiniteGroup, degrees: Vec<usize>) -> Result<Self> {
        if degrees.len() != base.dim() || degrees.iter().any(|&d| d >= group.order()) {
            return Err(Error::Grading(
                "one degree (a group element) per algebra basis vector".into(),
            ));
        }
        let g = GradedAlgebra {
            base,
            group,
            degrees,
        };
        let report = g.validate();
        if !report.is_valid() {
            return Err(Error::Grading(report.to_string()));
        }
        Ok(g)
    }

    /// Everything in degree identity.
    pub fn trivial(base: Arc<Algebra>) -> Self {
        let n = base.dim();
        GradedAlgebra {
            base,
            group: FiniteGroup::trivial(),
            degrees: vec![0; n],
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let c = self.base.structure_constants();
        let labels = self.base.labels();
        let d = &self.degrees;
        for i in 0..self.base.dim() {
            for j in 0..self.base.dim() {
                for (k, x) in c[i][j].iter().enumerate() {
                    if !x.is_zero() && d[k] != self.group.mul(d[i], d[j]) {
                        report.violation(format!(
                            "product {}·{} has a component {} outside degree {}",
                            labels[i],
                            labels[j],
                            labels[k],
                            self.group.label(self.group.mul(d[i], d[j]))
                        ));
                    }
                }
            }
        }
        for (k, x) in self.base.unit().iter().enumerate() {
            if !x.is_zero() && d[k] != self.group.identity() {
                report.violation(format!(
                    "unit has a component {} outside the identity degree",
                    labels[k]
                ));
            }
        }
        report
    }

    pub fn base(&self) -> &Arc<Algebra> {
        &self.base
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn is_graded_subspace(&self, b: &Basis) -> bool {
        basis_degrees(b, &self.degrees, "").is_ok()
    }

    fn grading(&self) -> Grading {
        Grading {
            alg_degrees: self.degrees.clone(),
            table: self.group.table().to_vec(),
            inverse: (0..self.group.order()).map(|a| self.group.inv(a)).collect(),
        }
    }

    fn restrict_degrees(&self, b: &Basis, what: &str) -> Result<Vec<usize>> {
        basis_degrees(b, &self.degrees, what)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    grading: Arc<GradedAlgebra>,
    base: LeftModule,
    degrees: Vec<usize>,
}

impl GradedModule {
    pub fn new(grading: Arc<GradedAlgebra>, base: LeftModule, degrees: Vec<usize>) -> Result<Self> {
        if !same_algebra(base.algebra(), grading.base()) {
            return Err(Error::AlgebraMismatch(
                "graded module over a different algebra".into(),
            ));
        }
        if degrees.len() != base.dim() || degrees.iter().any(|&d| d >= grading.group().order()) {
            return Err(Error::Grading("one degree per module basis vector".into()));
        }
        let m = GradedModule {
            grading,
            base,
            degrees,
        };
        let report = m.validate();
        if !report.is_valid() {
            return Err(Error::Grading(report.to_string()));
        }
        Ok(m)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let g = self.grading.group();
        let ad = self.grading.degrees();
        for i in 0..self.base.algebra().dim() {
            let a = self.base.action(i);
            for r in 0..self.base.dim() {
                for c in 0..self.base.dim() {
                    if !a[(r, c)].is_zero() && self.degrees[r] != g.mul(ad[i], self.degrees[c]) {
                        report.violation(format!(
                            "{}·m{c} has a component m{r} outside degree {}",
                            self.base.algebra().labels()[i],
                            g.label(g.mul(ad[i], self.degrees[c]))
                        ));
                    }
                }
            }
        }
        report
    }

    /// `R` with the algebra grading.
    pub fn regular(grading: Arc<GradedAlgebra>) -> Self {
        let base = LeftModule::regular(grading.base().clone());
        let degrees = grading.degrees().to_vec();
        GradedModule {
            grading,
            base,
            degrees,
        }
    }

    pub fn zero(grading: Arc<GradedAlgebra>) -> Self {
        let base = LeftModule::zero(grading.base().clone());
        GradedModule {
            grading,
            base,
            degrees: Vec::new(),
        }
    }

    pub fn grading(&self) -> &Arc<GradedAlgebra> {
        &self.grading
    }

    pub fn base(&self) -> &LeftModule {
        &self.base
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        let mut degrees = self.degrees.clone();
        degrees.extend(&other.degrees);
        GradedModule {
            grading: self.grading.clone(),
            base: self.base.direct_sum(&other.base),
            degrees,
        }
    }

    /// Degree labels, e.g. `(e,g)`.
    pub fn degree_labels(&self) -> String {
        let g = self.grading.group();
        let parts: Vec<&str> = self.degrees.iter().map(|&d| g.label(d)).collect();
        format!("({})", parts.join(","))
    }

    fn as_graded(&self) -> (LeftModule, Vec<usize>) {
        (self.base.clone(), self.degrees.clone())
    }
}

/// `M(σ)` with `M(σ)_λ = M_{λσ}`: a basis vector of degree `λ` gets degree `λσ⁻¹`.
pub fn suspension(m: &GradedModule, sigma: usize) -> GradedModule {
    let g = m.grading.group();
    let inv = g.inv(sigma);
    GradedModule {
        grading: m.grading.clone(),
        base: m.base.clone(),
        degrees: m.degrees.iter().map(|&l| g.mul(l, inv)).collect(),
    }
}

/// `HOM_R(M, N)_σ` for every `σ`: maps with `f(M_λ) ⊆ N_{λσ}`.
pub fn graded_hom(m: &GradedModule, n: &GradedModule) -> Result<Vec<HomSpace>> {
    if m.grading != n.grading {
        return Err(Error::Grading(
            "graded Hom between different gradings".into(),
        ));
    }
    let g = m.grading.group();
    (0..g.order())
        .map(|sigma| {
            let support = |r: usize, c: usize| n.degrees[r] == g.mul(m.degrees[c], sigma);
            hom_space_supported(&m.base, &n.base, Some(&support))
        })
        .collect()
}

/// Degree-preserving isomorphism search.
pub fn graded_isomorphic(m: &GradedModule, n: &GradedModule, seed: u64) -> Result<IsoSearch> {
    if m.grading != n.grading {
        return Err(Error::Grading(
            "graded modules over different gradings".into(),
        ));
    }
    graded_iso(&m.as_graded(), &n.as_graded(), seed)
}

/// A bimodule with degrees, graded over both algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBimodule {
    pub base: Bimodule,
    pub degrees: Vec<usize>,
}

impl GradedBimodule {
    pub fn validate(&self, left: &GradedAlgebra, right: &GradedAlgebra) -> ValidationReport {
        let mut report = ValidationReport::default();
        let g = left.group();
        let d = &self.degrees;
        for (i, a) in self.base.left_actions().iter().enumerate() {
            for r in 0..self.base.dim() {
                for c in 0..self.base.dim() {
                    if !a[(r, c)].is_zero() && d[r] != g.mul(left.degrees()[i], d[c]) {
                        report.violation(format!(
                            "left action of {} is not homogeneous",
                            left.base().labels()[i]
                        ));
                    }
                }
            }
        }
        for (i, a) in self.base.right_actions().iter().enumerate() {
            for r in 0..self.base.dim() {
                for c in 0..self.base.dim() {
                    if !a[(r, c)].is_zero() && d[r] != g.mul(d[c], right.degrees()[i]) {
                        report.violation(format!(
                            "right action of {} is not homogeneous",
                            right.base().labels()[i]
                        ));
                    }
                }
            }
        }
        report.violations.dedup();
        report
    }
}

/// `HOM_R(B, X) = ⊕_σ HOM_σ` as a graded left `T`-module, for a graded
/// `R-T` bimodule `B`.
pub fn graded_hom_module(
    b: &GradedBimodule,
    t: &Arc<GradedAlgebra>,
    x: &GradedModule,
) -> Result<GradedModule> {
    let g = x.grading.group();
    let src = b.base.as_left();
    let mut maps = Vec::new();
    let mut degrees = Vec::new();
    for sigma in 0..g.order() {
        let support = |r: usize, c: usize| x.degrees[r] == g.mul(b.degrees[c], sigma);
        let piece = hom_space_supported(&src, &x.base, Some(&support))?;
        degrees.extend(std::iter::repeat_n(sigma, piece.dim()));
        maps.extend(piece.maps().iter().cloned());
    }
    let space = hom_space(&src, &x.base)?.with_basis(maps)?;
    let hm = HomModule::from_space(&b.base, space)?;
    GradedModule::new(t.clone(), hm.module, degrees)
}

fn stable_graded(t: &TorsionTheory, gr: &GradedAlgebra) -> Result<GradedBimodule> {
    let degrees = gr.restrict_degrees(t.stable().basis(), "the stable ideal")?;
    Ok(GradedBimodule {
        base: t.stable_bimodule().clone(),
        degrees,
    })
}

/// Closed as a graded module: `α: M → HOM_R(I∞, M)` is invertible and maps
/// `M_λ` into `HOM_λ`.
pub fn graded_closed_test(t: &TorsionTheory, m: &GradedModule) -> Result<bool> {
    let ib = stable_graded(t, &m.grading)?;
    let (hm, alpha) = closedness_map(t, &m.base)?;
    let g = m.grading.group();
    let src = ib.base.as_left();
    let pieces: Vec<HomSpace> = (0..g.order())
        .map(|sigma| {
            let support = |r: usize, c: usize| m.degrees[r] == g.mul(ib.degrees[c], sigma);
            hom_space_supported(&src, &m.base, Some(&support))
        })
        .collect::<Result<_>>()?;
    let preserves =
        (0..m.dim()).all(|j| pieces[m.degrees[j]].contains(&hm.element(&alpha.column(j))));
    Ok(preserves && alpha.is_invertible())
}

/// Graded `HOM_R(I∞, M / t̄(M))`.
pub fn graded_localize(t: &TorsionTheory, m: &GradedModule) -> Result<GradedModule> {
    let ib = stable_graded(t, &m.grading)?;
    let torsion = torsion_submodule(t, &m.base)?;
    basis_degrees(torsion.basis(), &m.degrees, "the torsion submodule")?;
    let (q, _) = m.base.quotient(&torsion);
    let reps = crate::exactlin::quotient_structure(m.dim(), torsion.basis()).representatives;
    let qd = reps.iter().map(|&i| m.degrees[i]).collect();
    let qm = GradedModule::new(m.grading.clone(), q, qd)?;
    graded_hom_module(&ib, &m.grading, &qm)
}

/// A Morita context with gradings on both algebras and both bimodules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedContext {
    pub context: MoritaContext,
    pub r: Arc<GradedAlgebra>,
    pub s: Arc<GradedAlgebra>,
    pub m: GradedBimodule,
    pub n: GradedBimodule,
}

impl GradedContext {
    pub fn new(
        context: MoritaContext,
        r: Arc<GradedAlgebra>,
        s: Arc<GradedAlgebra>,
        m_degrees: Vec<usize>,
        n_degrees: Vec<usize>,
    ) -> Result<Self> {
        if !same_algebra(r.base(), context.r()) || !same_algebra(s.base(), context.s()) {
            return Err(Error::AlgebraMismatch(
                "gradings are on other algebras than the context".into(),
            ));
        }
        if r.group() != s.group() {
            return Err(Error::Grading(
                "both algebras must be graded by the same group".into(),
            ));
        }
        if m_degrees.len() != context.m().dim() || n_degrees.len() != context.n().dim() {
            return Err(Error::Grading(
                "one degree per bimodule basis vector".into(),
            ));
        }
        let g = GradedContext {
            m: GradedBimodule {
                base: context.m().clone(),
                degrees: m_degrees,
            },
            n: GradedBimodule {
                base: context.n().clone(),
                degrees: n_degrees,
            },
            context,
            r,
            s,
        };
        let report = g.validate();
        if !report.is_valid() {
            return Err(Error::Grading(report.to_string()));
        }
        Ok(g)
    }

    /// Homogeneity of both bimodules and of `φ`, `ψ` on pure basis tensors.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        report.merge("M", self.m.validate(&self.r, &self.s));
        report.merge("N", self.n.validate(&self.s, &self.r));
        let g = self.r.group();
        let ctx = &self.context;
        let f = ctx.r().field();
        let (dm, dn) = (ctx.m().dim(), ctx.n().dim());
        let unit = |n: usize, i: usize| crate::exactlin::unit_vector(f, n, i);
        for i in 0..dm {
            for j in 0..dn {
                let want = g.mul(self.m.degrees[i], self.n.degrees[j]);
                let v = ctx.phi_of(&unit(dm, i), &unit(dn, j));
                if v.iter()
                    .zip(self.r.degrees())
                    .any(|(x, &d)| !x.is_zero() && d != want)
                {
                    report.violation(format!(
                        "phi(m{i}⊗n{j}) is not homogeneous of degree {}",
                        g.label(want)
                    ));
                }
                let want = g.mul(self.n.degrees[j], self.m.degrees[i]);
                let v = ctx.psi_of(&unit(dn, j), &unit(dm, i));
                if v.iter()
                    .zip(self.s.degrees())
                    .any(|(x, &d)| !x.is_zero() && d != want)
                {
                    report.violation(format!(
                        "psi(n{j}⊗m{i}) is not homogeneous of degree {}",
                        g.label(want)
                    ));
                }
            }
        }
        report
    }

    pub fn swapped(&self) -> GradedContext {
        GradedContext {
            context: self.context.swapped(),
            r: self.s.clone(),
            s: self.r.clone(),
            m: self.n.clone(),
            n: self.m.clone(),
        }
    }

    /// Forgets the grading on `S`, `M` and `N` by regrading with the trivial group.
    pub fn trivial(context: MoritaContext) -> Self {
        let r = Arc::new(GradedAlgebra::trivial(context.r().clone()));
        let s = Arc::new(GradedAlgebra::trivial(context.s().clone()));
        let (dm, dn) = (context.m().dim(), context.n().dim());
        GradedContext::new(context, r, s, vec![0; dm], vec![0; dn])
            .expect("trivial grading is valid")
    }
}

/// The corner context at a homogeneous idempotent of degree identity, with
/// gradings inherited from `R`.
pub fn graded_corner_context(r: Arc<GradedAlgebra>, e: &[Scalar]) -> Result<GradedContext> {
    if e.iter()
        .zip(r.degrees())
        .any(|(x, &d)| !x.is_zero() && d != r.group().identity())
    {
        return Err(Error::Grading(
            "idempotent must be homogeneous of degree identity".into(),
        ));
    }
    let ctx = corner_context(r.base().clone(), e)?;
    let base = r.base();
    let le = base.left_mult(e);
    let re_op = base.right_mult(e);
    let (ere, re, er) = if e == base.unit().as_slice() {
        let full = Basis::full(base.field(), base.dim());
        (full.clone(), full.clone(), full)
    } else {
        (
            (&le * &re_op).column_space(),
            re_op.column_space(),
            le.column_space(),
        )
    };
    let s_deg = r.restrict_degrees(&ere, "eRe")?;
    let m_deg = r.restrict_degrees(&re, "Re")?;
    let n_deg = r.restrict_degrees(&er, "eR")?;
    let s = if same_algebra(ctx.s(), r.base()) {
        r.clone()
    } else {
        Arc::new(GradedAlgebra::new(
            ctx.s().clone(),
            r.group().clone(),
            s_deg,
        )?)
    };
    GradedContext::new(ctx, r, s, m_deg, n_deg)
}

#[derive(Clone, Debug)]
pub struct GradedCatalog {
    grading: Arc<GradedAlgebra>,
    modules: Vec<GradedModule>,
    names: Vec<String>,
    provenance: Provenance,
}

impl GradedCatalog {
    pub fn user_supplied(
        grading: Arc<GradedAlgebra>,
        modules: Vec<GradedModule>,
        names: Vec<String>,
    ) -> Result<Self> {
        if modules.len() != names.len() {
            return Err(Error::Dimension("one name per catalog module".into()));
        }
        if modules.iter().any(|m| *m.grading != *grading) {
            return Err(Error::Grading("catalog modules use another grading".into()));
        }
        Ok(GradedCatalog {
            grading,
            modules,
            names,
            provenance: Provenance::UserSupplied,
        })
    }

    pub fn grading(&self) -> &Arc<GradedAlgebra> {
        &self.grading
    }

    pub fn modules(&self) -> &[GradedModule] {
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

    pub fn iter(&self) -> impl Iterator<Item = (&str, &GradedModule)> {
        self.names.iter().map(String::as_str).zip(&self.modules)
    }

    pub fn describe(&self) -> String {
        let n = self.len();
        match self.provenance {
            Provenance::ExhaustiveUpToDim { max_dim } => {
                format!("graded, exhaustive up to dim {max_dim} ({n} modules)")
            }
            Provenance::UserSupplied => format!("graded, user-supplied ({n} modules)"),
            Provenance::Sampled { max_dim, seed } => {
                format!("graded, sampled up to dim {max_dim}, seed {seed} ({n} modules)")
            }
        }
    }
}

/// One graded module per graded isomorphism class up to `max_dim`.
pub fn build_graded_catalog(
    gr: &Arc<GradedAlgebra>,
    max_dim: usize,
    opts: &CatalogOptions,
) -> Result<GradedCatalog> {
    let (mods, sampled) = graded_catalog(gr.base(), &gr.grading(), max_dim, opts)?;
    let base_names = catalog_names(&mods);
    let modules: Vec<GradedModule> = mods
        .into_iter()
        .map(|(m, d)| GradedModule::new(gr.clone(), m, d))
        .collect::<Result<_>>()?;
    let names = base_names
        .into_iter()
        .zip(&modules)
        .map(|(n, m)| format!("{n}{}", m.degree_labels()))
        .collect();
    Ok(GradedCatalog {
        grading: gr.clone(),
        modules,
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

fn graded_side(
    report: &mut Report,
    gctx: &GradedContext,
    cat: &GradedCatalog,
    here: &TorsionTheory,
    there: &TorsionTheory,
    tag: &str,
    seed: u64,
) -> Result<()> {
    let g = gctx.r.group();
    let mut closed_count = 0;
    for (name, x) in cat.iter() {
        let subject = format!("{tag}:{name}");
        let closed = graded_closed_test(here, x)?;
        let suspended: Vec<bool> = (0..g.order())
            .map(|sigma| graded_closed_test(here, &suspension(x, sigma)))
            .collect::<Result<_>>()?;
        report.push(
            Verdict::new(
                &subject,
                "closedness invariant under suspension",
                suspended.iter().all(|&c| c == closed),
            )
            .detail(if closed { "closed" } else { "not closed" }),
        );
        let xc = if closed {
            closed_count += 1;
            x.clone()
        } else {
            let loc = graded_localize(here, x)?;
            let ok = graded_closed_test(here, &loc)?;
            report.push(
                Verdict::new(&subject, "graded localization is closed", ok)
                    .detail(format!("localized dim {}", loc.dim())),
            );
            loc
        };
        let fx = graded_hom_module(&gctx.m, &gctx.s, &xc)?;
        report.push(
            Verdict::new(
                &subject,
                "F′(X) graded-closed",
                graded_closed_test(there, &fx)?,
            )
            .detail(format!("dim F′(X) = {}", fx.dim())),
        );
        let gfx = graded_hom_module(&gctx.n, &gctx.r, &fx)?;
        let v = match graded_isomorphic(&gfx, &xc, seed)? {
            IsoSearch::Found(iso) => {
                Verdict::new(&subject, "G′F′(X) ≅ X (graded)", true).witness("isomorphism", &iso)
            }
            IsoSearch::ProvenNone => Verdict::new(&subject, "G′F′(X) ≅ X (graded)", false)
                .detail("no graded isomorphism exists"),
            IsoSearch::NotFoundSampled => Verdict::new(&subject, "G′F′(X) ≅ X (graded)", false)
                .detail("no graded isomorphism among sampled candidates")
                .sampled(true),
        };
        report.push(v);
    }
    report.fact(format!(
        "{tag} side: {closed_count} of {} graded catalog modules closed",
        cat.len()
    ));
    Ok(())
}

/// Graded quotient categories are equivalent via graded `F′`, `G′`; closedness
/// is also checked to be invariant under every suspension.
pub fn verify_graded_kato_muller(
    gctx: &GradedContext,
    cat_r: &GradedCatalog,
    cat_s: &GradedCatalog,
    seed: u64,
) -> Result<Report> {
    let mut report = Report::new("graded quotient categories are equivalent via F′ and G′");
    if cat_r.grading != gctx.r || cat_s.grading != gctx.s {
        return Err(Error::Grading(
            "catalogs use other gradings than the context".into(),
        ));
    }
    report.bound(format!("R-side catalog: {}", cat_r.describe()));
    report.bound(format!("S-side catalog: {}", cat_s.describe()));
    let v = gctx.context.validate();
    let gv = gctx.validate();
    let ok = v.is_valid() && gv.is_valid();
    report.push(
        Verdict::new("context", "valid graded Morita context", ok)
            .detail(format!("{v}; grading {gv}")),
    );
    if !ok {
        return Ok(report);
    }
    let (i, j) = trace_ideals(&gctx.context)?;
    let ti = TorsionTheory::new(gctx.r.base().clone(), i);
    let tj = TorsionTheory::new(gctx.s.base().clone(), j);
    report.fact(format!("group of order {}", gctx.r.group().order()));
    report.fact(format!("I = {}", ti.describe()));
    report.fact(format!("J = {}", tj.describe()));
    graded_side(&mut report, gctx, cat_r, &ti, &tj, "R", seed)?;
    graded_side(&mut report, &gctx.swapped(), cat_s, &tj, &ti, "S", seed)?;
    Ok(report)
}

/// `dim M_σ` for every `σ`.
pub fn degree_dimensions(m: &GradedModule) -> Vec<usize> {
    let mut dims = vec![0; m.grading.group().order()];
    for &d in &m.degrees {
        dims[d] += 1;
    }
    dims
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::element;
    use crate::equivalence::{build_catalog, verify_kato_muller};
    use crate::exactlin::{Field, Matrix};
    use crate::torsion::is_closed;

    /// T2 over GF(2) graded by C2 with e12 in degree g.
    fn graded_t2() -> Arc<GradedAlgebra> {
        let a = Arc::new(Algebra::upper_triangular(Field::gf2()));
        Arc::new(GradedAlgebra::new(a, FiniteGroup::cyclic(2), vec![0, 1, 0]).unwrap())
    }

    fn corner(gr: &Arc<GradedAlgebra>) -> GradedContext {
        graded_corner_context(gr.clone(), &element(gr.base(), &[0, 0, 1])).unwrap()
    }

    #[test]
    fn group_axioms() {
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        let c3 = FiniteGroup::cyclic(3);
        assert_eq!(c3.inv(1), 2);
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![0, 1]]).is_err());
    }

    #[test]
    fn bad_grading_is_rejected() {
        let a = Arc::new(Algebra::upper_triangular(Field::gf2()));
        assert!(matches!(
            GradedAlgebra::new(a.clone(), FiniteGroup::cyclic(2), vec![1, 1, 0]),
            Err(Error::Grading(_))
        ));
        let gr = graded_t2();
        let reg = LeftModule::regular(a);
        assert!(GradedModule::new(gr, reg, vec![0, 0, 0]).is_err());
    }

    #[test]
    fn suspension_relabels() {
        let gr = graded_t2();
        let m = GradedModule::regular(gr.clone());
        assert_eq!(suspension(&m, 0), m);
        let s = suspension(&m, 1);
        assert_eq!(s.degrees(), &[1, 0, 1]);
        assert!(s.validate().is_valid());
        assert_eq!(suspension(&s, 1), m);
    }

    #[test]
    fn graded_hom_pieces() {
        let gr = graded_t2();
        let reg = GradedModule::regular(gr.clone());
        let cat = build_graded_catalog(&gr, 2, &CatalogOptions::default()).unwrap();
        for n in cat.modules() {
            let pieces = graded_hom(&reg, n).unwrap();
            let total: usize = pieces.iter().map(HomSpace::dim).sum();
            assert_eq!(total, hom_space(reg.base(), n.base()).unwrap().dim());
            // HOM(R, N)_σ ≅ N_σ
            let dims = degree_dimensions(n);
            for (sigma, p) in pieces.iter().enumerate() {
                assert_eq!(p.dim(), dims[sigma]);
            }
        }
    }

    #[test]
    fn projective_to_simple_is_concentrated() {
        let gr = graded_t2();
        let reg = GradedModule::regular(gr.clone());
        let span = Basis::span(
            Field::gf2(),
            3,
            vec![
                element(gr.base(), &[0, 1, 0]),
                element(gr.base(), &[0, 0, 1]),
            ],
        );
        let sub = crate::module::Submodule::new(reg.base(), span).unwrap();
        let p2 = GradedModule::new(gr.clone(), reg.base().restrict(&sub), vec![1, 0]).unwrap();
        let f = Field::gf2();
        let s2 = LeftModule::new(
            gr.base().clone(),
            1,
            vec![
                Matrix::zeros(f, 1, 1),
                Matrix::zeros(f, 1, 1),
                Matrix::identity(f, 1),
            ],
        )
        .unwrap();
        let s2 = GradedModule::new(gr.clone(), s2, vec![0]).unwrap();
        let dims: Vec<usize> = graded_hom(&p2, &s2)
            .unwrap()
            .iter()
            .map(HomSpace::dim)
            .collect();
        assert_eq!(dims, vec![1, 0]);
    }

    #[test]
    fn graded_closedness() {
        let gr = graded_t2();
        let g = corner(&gr);
        let (i, _) = trace_ideals(&g.context).unwrap();
        let t = TorsionTheory::new(gr.base().clone(), i);
        let cat = build_graded_catalog(&gr, 3, &CatalogOptions::default()).unwrap();
        for m in cat.modules() {
            let graded = graded_closed_test(&t, m).unwrap();
            assert_eq!(graded, is_closed(&t, m.base()).unwrap().closed);
            for sigma in 0..2 {
                assert_eq!(
                    graded_closed_test(&t, &suspension(m, sigma)).unwrap(),
                    graded
                );
            }
        }
    }

    #[test]
    fn graded_catalog_has_both_shifts() {
        let gr = graded_t2();
        let cat = build_graded_catalog(&gr, 1, &CatalogOptions::default()).unwrap();
        // 0 and the two simples, each in two degrees
        assert_eq!(cat.len(), 5);
    }

    #[test]
    fn graded_kato_muller_on_t2() {
        let gr = graded_t2();
        let g = corner(&gr);
        let opts = CatalogOptions::default();
        let cr = build_graded_catalog(&gr, 3, &opts).unwrap();
        let cs = build_graded_catalog(&g.s, 3, &opts).unwrap();
        let r = verify_graded_kato_muller(&g, &cr, &cs, 0).unwrap();
        assert!(r.passed(true), "{r}");
    }

    #[test]
    fn trivial_group_matches_ungraded() {
        let a = Arc::new(Algebra::upper_triangular(Field::gf2()));
        let ctx = corner_context(a.clone(), &element(&a, &[0, 0, 1])).unwrap();
        let g = GradedContext::trivial(ctx.clone());
        let opts = CatalogOptions::default();
        let cr = build_graded_catalog(&g.r, 3, &opts).unwrap();
        let cs = build_graded_catalog(&g.s, 3, &opts).unwrap();
        let graded = verify_graded_kato_muller(&g, &cr, &cs, 0).unwrap();
        let ungraded = verify_kato_muller(
            &ctx,
            &build_catalog(&a, 3).unwrap(),
            &build_catalog(ctx.s(), 3).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!(graded.passed(true), ungraded.passed(true));
        assert_eq!(cr.len(), build_catalog(&a, 3).unwrap().len());
    }
}
