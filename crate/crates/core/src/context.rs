//! Morita contexts `(R, S, M, N, φ, ψ)` and the natural maps they induce.
//!
//! `φ: M ⊗_S N → R` and `ψ: N ⊗_R M → S` are stored as matrices on the
//! computed tensor quotients, so balancing over the middle algebra is built in.

use std::sync::Arc;

use crate::algebra::{Algebra, Ideal};
use crate::error::{Error, Result};
use crate::exactlin::{Basis, Matrix, Scalar, Vector};
use crate::module::{
    hom_module, ideal_action_image, intertwiners, same_algebra, search_invertible,
    tensor_bimodules, tensor_left, Bimodule, HomModule, HomSpace, IsoSearch, LeftModule,
    TensorProduct, EXHAUSTIVE_LIMIT, SAMPLE_COUNT,
};
use crate::validation::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaContext {
    r: Arc<Algebra>,
    s: Arc<Algebra>,
    m: Bimodule,
    n: Bimodule,
    mn: TensorProduct,
    mn_module: Bimodule,
    nm: TensorProduct,
    nm_module: Bimodule,
    phi: Matrix,
    psi: Matrix,
}

impl MoritaContext {
    /// `phi`/`psi` are given on the tensor quotients `M ⊗_S N` and `N ⊗_R M`.
    pub fn new(
        r: Arc<Algebra>,
        s: Arc<Algebra>,
        m: Bimodule,
        n: Bimodule,
        phi: Matrix,
        psi: Matrix,
    ) -> Result<Self> {
        let (mn, mn_module, nm, nm_module) = Self::tensors(&r, &s, &m, &n)?;
        if (phi.rows(), phi.cols()) != (r.dim(), mn.dim()) {
            return Err(Error::Dimension(format!(
                "phi is {}x{}, M⊗N → R needs {}x{}",
                phi.rows(),
                phi.cols(),
                r.dim(),
                mn.dim()
            )));
        }
        if (psi.rows(), psi.cols()) != (s.dim(), nm.dim()) {
            return Err(Error::Dimension(format!(
                "psi is {}x{}, N⊗M → S needs {}x{}",
                psi.rows(),
                psi.cols(),
                s.dim(),
                nm.dim()
            )));
        }
        Ok(MoritaContext {
            r,
            s,
            m,
            n,
            mn,
            mn_module,
            nm,
            nm_module,
            phi,
            psi,
        })
    }

    /// `phi`/`psi` given on the raw product bases (`m * dim N + n`); they
    /// must vanish on the balancing relations.
    pub fn from_raw(
        r: Arc<Algebra>,
        s: Arc<Algebra>,
        m: Bimodule,
        n: Bimodule,
        phi_raw: Matrix,
        psi_raw: Matrix,
    ) -> Result<Self> {
        let (mn, _, nm, _) = Self::tensors(&r, &s, &m, &n)?;
        let phi = push_to_quotient(&phi_raw, &mn, r.dim(), "phi")?;
        let psi = push_to_quotient(&psi_raw, &nm, s.dim(), "psi")?;
        Self::new(r, s, m, n, phi, psi)
    }

    fn tensors(
        r: &Arc<Algebra>,
        s: &Arc<Algebra>,
        m: &Bimodule,
        n: &Bimodule,
    ) -> Result<(TensorProduct, Bimodule, TensorProduct, Bimodule)> {
        if !same_algebra(m.left_algebra(), r) || !same_algebra(m.right_algebra(), s) {
            return Err(Error::AlgebraMismatch("M must be an R-S bimodule".into()));
        }
        if !same_algebra(n.left_algebra(), s) || !same_algebra(n.right_algebra(), r) {
            return Err(Error::AlgebraMismatch("N must be an S-R bimodule".into()));
        }
        let (mn, mn_module) = tensor_bimodules(m, n)?;
        let (nm, nm_module) = tensor_bimodules(n, m)?;
        Ok((mn, mn_module, nm, nm_module))
    }

    /// `(R, R, R, R, mult, mult)`.
    pub fn identity(r: Arc<Algebra>) -> Self {
        let reg = Bimodule::regular(r.clone());
        let f = r.field();
        let d = r.dim();
        let mult = Matrix::from_fn(f, d, d * d, |k, c| {
            r.structure_constants()[c / d][c % d][k].clone()
        });
        Self::from_raw(r.clone(), r, reg.clone(), reg, mult.clone(), mult)
            .expect("identity context is well defined")
    }

    /// Same bimodules with new maps (on the tensor quotients).
    pub fn with_maps(&self, phi: Matrix, psi: Matrix) -> Result<Self> {
        Self::new(
            self.r.clone(),
            self.s.clone(),
            self.m.clone(),
            self.n.clone(),
            phi,
            psi,
        )
    }

    /// `(S, R, N, M, ψ, φ)`.
    pub fn swapped(&self) -> Self {
        MoritaContext {
            r: self.s.clone(),
            s: self.r.clone(),
            m: self.n.clone(),
            n: self.m.clone(),
            mn: self.nm.clone(),
            mn_module: self.nm_module.clone(),
            nm: self.mn.clone(),
            nm_module: self.mn_module.clone(),
            phi: self.psi.clone(),
            psi: self.phi.clone(),
        }
    }

    pub fn r(&self) -> &Arc<Algebra> {
        &self.r
    }

    pub fn s(&self) -> &Arc<Algebra> {
        &self.s
    }

    pub fn m(&self) -> &Bimodule {
        &self.m
    }

    pub fn n(&self) -> &Bimodule {
        &self.n
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn psi(&self) -> &Matrix {
        &self.psi
    }

    /// `M ⊗_S N`.
    pub fn mn(&self) -> &TensorProduct {
        &self.mn
    }

    /// `N ⊗_R M`.
    pub fn nm(&self) -> &TensorProduct {
        &self.nm
    }

    pub fn mn_module(&self) -> &Bimodule {
        &self.mn_module
    }

    pub fn nm_module(&self) -> &Bimodule {
        &self.nm_module
    }

    /// `φ(m ⊗ n)` as an element of `R`.
    pub fn phi_of(&self, m: &[Scalar], n: &[Scalar]) -> Vector {
        self.phi.apply(&self.mn.pure(m, n))
    }

    /// `ψ(n ⊗ m)` as an element of `S`.
    pub fn psi_of(&self, n: &[Scalar], m: &[Scalar]) -> Vector {
        self.psi.apply(&self.nm.pure(n, m))
    }

    fn phi_basis(&self, i: usize, j: usize) -> Vector {
        self.phi.apply(&self.mn.pure_basis(i, j))
    }

    fn psi_basis(&self, j: usize, i: usize) -> Vector {
        self.psi.apply(&self.nm.pure_basis(j, i))
    }

    /// Bimodule-map conditions for φ and ψ and both associativity
    /// identities on every basis triple.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        report.merge("R", self.r.validate());
        report.merge("S", self.s.validate());
        report.merge("M", self.m.validate());
        report.merge("N", self.n.validate());
        if !report.is_valid() {
            return report;
        }
        let check_bimodule_map = |report: &mut ValidationReport,
                                  name: &str,
                                  map: &Matrix,
                                  algebra: &Algebra,
                                  tensor: &Bimodule| {
            for i in 0..algebra.dim() {
                if map * &tensor.left_actions()[i] != algebra.left_basis_mult(i) * map {
                    report.violation(format!(
                        "{name} is not left linear ({})",
                        algebra.labels()[i]
                    ));
                }
                if map * &tensor.right_actions()[i] != algebra.right_basis_mult(i) * map {
                    report.violation(format!(
                        "{name} is not right linear ({})",
                        algebra.labels()[i]
                    ));
                }
            }
        };
        check_bimodule_map(&mut report, "phi", &self.phi, &self.r, &self.mn_module);
        check_bimodule_map(&mut report, "psi", &self.psi, &self.s, &self.nm_module);

        let (dm, dn) = (self.m.dim(), self.n.dim());
        let phis: Vec<Vec<Vector>> = (0..dm)
            .map(|i| (0..dn).map(|j| self.phi_basis(i, j)).collect())
            .collect();
        let psis: Vec<Vec<Vector>> = (0..dn)
            .map(|j| (0..dm).map(|i| self.psi_basis(j, i)).collect())
            .collect();
        // φ(m⊗n)m' = mψ(n⊗m')
        for i in 0..dm {
            for j in 0..dn {
                let left = self.m.act_left(&phis[i][j]);
                for k in 0..dm {
                    let lhs = left.column(k);
                    let rhs = self.m.act_right(&psis[j][k]).column(i);
                    if lhs != rhs {
                        report.violation(format!("eq1 (m{i},n{j},m{k})"));
                    }
                }
            }
        }
        // ψ(n⊗m)n' = nφ(m⊗n')
        for j in 0..dn {
            for i in 0..dm {
                let left = self.n.act_left(&psis[j][i]);
                for k in 0..dn {
                    let lhs = left.column(k);
                    let rhs = self.n.act_right(&phis[i][k]).column(j);
                    if lhs != rhs {
                        report.violation(format!("eq2 (n{j},m{i},n{k})"));
                    }
                }
            }
        }
        report
    }
}

fn push_to_quotient(
    raw: &Matrix,
    tensor: &TensorProduct,
    rows: usize,
    name: &str,
) -> Result<Matrix> {
    if (raw.rows(), raw.cols()) != (rows, tensor.raw_dim()) {
        return Err(Error::Dimension(format!(
            "{name} is {}x{}, expected {}x{} on the raw product basis",
            raw.rows(),
            raw.cols(),
            rows,
            tensor.raw_dim()
        )));
    }
    for rel in tensor.relations().vectors() {
        if raw.apply(rel).iter().any(|x| !x.is_zero()) {
            return Err(Error::Invalid(format!(
                "{name} is not balanced over the middle algebra"
            )));
        }
    }
    Ok(raw * tensor.section())
}

pub fn validate_context(ctx: &MoritaContext) -> ValidationReport {
    ctx.validate()
}

/// `(R, eRe, Re, eR, mult, mult)` for an idempotent `e`.
pub fn corner_context(r: Arc<Algebra>, e: &[Scalar]) -> Result<MoritaContext> {
    if e.len() != r.dim() {
        return Err(Error::Dimension("idempotent has the wrong length".into()));
    }
    if !r.is_idempotent(e) {
        return Err(Error::NotIdempotent(format!("{e:?}")));
    }
    if e == r.unit().as_slice() {
        return Ok(MoritaContext::identity(r));
    }
    let f = r.field();
    let le = r.left_mult(e);
    let re_op = r.right_mult(e);
    let ere = (&le * &re_op).column_space();
    let re = re_op.column_space();
    let er = le.column_space();
    let s = Arc::new(r.on_subspace(&ere, e)?);
    let s_elems: Vec<Vector> = ere.vectors().to_vec();

    let restrict = |op: &Matrix, b: &Basis| crate::module::restrict_operator(op, b);
    let m = Bimodule::new(
        r.clone(),
        s.clone(),
        re.dim(),
        (0..r.dim())
            .map(|i| restrict(r.left_basis_mult(i), &re))
            .collect(),
        s_elems
            .iter()
            .map(|x| restrict(&r.right_mult(x), &re))
            .collect(),
    )?;
    let n = Bimodule::new(
        s.clone(),
        r.clone(),
        er.dim(),
        s_elems
            .iter()
            .map(|x| restrict(&r.left_mult(x), &er))
            .collect(),
        (0..r.dim())
            .map(|i| restrict(r.right_basis_mult(i), &er))
            .collect(),
    )?;
    let (dm, dn) = (re.dim(), er.dim());
    let mut phi_cols = Vec::with_capacity(dm * dn);
    for mv in re.vectors() {
        for nv in er.vectors() {
            phi_cols.push(r.multiply(mv, nv));
        }
    }
    let mut psi_cols = Vec::with_capacity(dm * dn);
    for nv in er.vectors() {
        for mv in re.vectors() {
            let prod = r.multiply(nv, mv);
            psi_cols.push(ere.coordinates(&prod).expect("n m lies in eRe"));
        }
    }
    let phi_raw = Matrix::from_columns(f, r.dim(), &phi_cols);
    let psi_raw = Matrix::from_columns(f, s.dim(), &psi_cols);
    MoritaContext::from_raw(r, s, m, n, phi_raw, psi_raw)
}

/// `I = Im φ ⊆ R` and `J = Im ψ ⊆ S`.
pub fn trace_ideals(ctx: &MoritaContext) -> Result<(Ideal, Ideal)> {
    let i = Ideal::new(&ctx.r, ctx.phi.column_space())?;
    let j = Ideal::new(&ctx.s, ctx.psi.column_space())?;
    Ok((i, j))
}

/// Both trace ideals are the whole algebra.
pub fn is_strict(ctx: &MoritaContext) -> bool {
    ctx.phi.rank() == ctx.r.dim() && ctx.psi.rank() == ctx.s.dim()
}

/// A natural map `T ⊗ X → X` together with its source module.
#[derive(Clone, Debug)]
pub struct CounitMap {
    /// `(M ⊗_S N) ⊗_R X` or `(N ⊗_R M) ⊗_S Y`.
    pub tensor: TensorProduct,
    pub source: LeftModule,
    /// `dim X x dim source`.
    pub matrix: Matrix,
}

impl CounitMap {
    pub fn image(&self) -> Basis {
        self.matrix.column_space()
    }

    pub fn kernel(&self) -> Basis {
        self.matrix.kernel_basis()
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.is_invertible()
    }
}

fn counit(middle: &Bimodule, map: &Matrix, x: &LeftModule) -> Result<CounitMap> {
    let (tensor, source) = tensor_left(middle, x)?;
    let dx = x.dim();
    let f = x.field();
    let t = middle.dim();
    let mut raw = Matrix::zeros(f, dx, t * dx);
    for ti in 0..t {
        let act = x.act(&map.column(ti));
        for xj in 0..dx {
            for r in 0..dx {
                raw[(r, ti * dx + xj)] = act[(r, xj)].clone();
            }
        }
    }
    let matrix = &raw * tensor.section();
    Ok(CounitMap {
        tensor,
        source,
        matrix,
    })
}

/// `η(X): M ⊗_S N ⊗_R X → X`, `m ⊗ n ⊗ x ↦ φ(m ⊗ n) x`.
pub fn eta_map(ctx: &MoritaContext, x: &LeftModule) -> Result<CounitMap> {
    if !same_algebra(x.algebra(), &ctx.r) {
        return Err(Error::AlgebraMismatch("eta needs an R-module".into()));
    }
    counit(&ctx.mn_module, &ctx.phi, x)
}

/// `ρ(Y): N ⊗_R M ⊗_S Y → Y`, `n ⊗ m ⊗ y ↦ ψ(n ⊗ m) y`.
pub fn rho_map(ctx: &MoritaContext, y: &LeftModule) -> Result<CounitMap> {
    if !same_algebra(y.algebra(), &ctx.s) {
        return Err(Error::AlgebraMismatch("rho needs an S-module".into()));
    }
    counit(&ctx.nm_module, &ctx.psi, y)
}

/// `1 ⊗ 1 ⊗ f` between the sources of two counit maps.
pub fn counit_source_map(
    middle_dim: usize,
    from: &CounitMap,
    to: &CounitMap,
    f: &Matrix,
) -> Matrix {
    let id = Matrix::identity(f.field(), middle_dim);
    from.tensor.map_between(&to.tensor, &id, f)
}

/// Naturality square `f ∘ η(X) = η(X') ∘ (1 ⊗ 1 ⊗ f)`.
pub fn eta_is_natural(
    ctx: &MoritaContext,
    x: &LeftModule,
    x2: &LeftModule,
    f: &Matrix,
) -> Result<bool> {
    let a = eta_map(ctx, x)?;
    let b = eta_map(ctx, x2)?;
    let lifted = counit_source_map(ctx.mn_module.dim(), &a, &b, f);
    Ok(f * &a.matrix == &b.matrix * &lifted)
}

/// `f ∘ ρ(Y) = ρ(Y') ∘ (1 ⊗ 1 ⊗ f)`.
pub fn rho_is_natural(
    ctx: &MoritaContext,
    y: &LeftModule,
    y2: &LeftModule,
    f: &Matrix,
) -> Result<bool> {
    let a = rho_map(ctx, y)?;
    let b = rho_map(ctx, y2)?;
    let lifted = counit_source_map(ctx.nm_module.dim(), &a, &b, f);
    Ok(f * &a.matrix == &b.matrix * &lifted)
}

/// A natural map `X → Hom(N', Hom(M', X))` into an iterated Hom module.
#[derive(Clone, Debug)]
pub struct UnitMap {
    /// `Hom_R(M, X)` (as an `S`-module) or `Hom_S(N, Y)` (as an `R`-module).
    pub inner: HomModule,
    /// The iterated Hom module.
    pub outer: HomModule,
    /// `dim outer x dim X`.
    pub matrix: Matrix,
}

impl UnitMap {
    pub fn is_invertible(&self) -> bool {
        self.matrix.is_invertible()
    }
}

/// Generic unit: `x ↦ (b ↦ (a ↦ pairing(a ⊗ b) x))` with `A` the inner
/// Hom source and `B` the outer one.
fn unit(
    inner_source: &Bimodule,
    outer_source: &Bimodule,
    pairing: impl Fn(usize, usize) -> Vector,
    x: &LeftModule,
) -> Result<UnitMap> {
    let inner = hom_module(inner_source, x)?;
    let outer = hom_module(outer_source, &inner.module)?;
    let f = x.field();
    let (da, db, dx) = (inner_source.dim(), outer_source.dim(), x.dim());
    let actions: Vec<Vec<Matrix>> = (0..da)
        .map(|a| (0..db).map(|b| x.act(&pairing(a, b))).collect())
        .collect();
    let mut columns = Vec::with_capacity(dx);
    for xj in 0..dx {
        let mut g_cols = Vec::with_capacity(db);
        for b in 0..db {
            let h = Matrix::from_columns(
                f,
                dx,
                &(0..da)
                    .map(|a| actions[a][b].column(xj))
                    .collect::<Vec<_>>(),
            );
            let c = inner
                .space
                .coordinates(&h)
                .ok_or_else(|| Error::Postcondition("inner map is not a module map".into()))?;
            g_cols.push(c);
        }
        let g = Matrix::from_columns(f, inner.dim(), &g_cols);
        let c = outer
            .space
            .coordinates(&g)
            .ok_or_else(|| Error::Postcondition("outer map is not a module map".into()))?;
        columns.push(c);
    }
    let matrix = Matrix::from_columns(f, outer.dim(), &columns);
    Ok(UnitMap {
        inner,
        outer,
        matrix,
    })
}

/// `η′(X): X → Hom_S(N, Hom_R(M, X))`, `η′(x)(n)(m) = φ(m ⊗ n) x`.
pub fn eta_prime_map(ctx: &MoritaContext, x: &LeftModule) -> Result<UnitMap> {
    if !same_algebra(x.algebra(), &ctx.r) {
        return Err(Error::AlgebraMismatch("eta' needs an R-module".into()));
    }
    unit(&ctx.m, &ctx.n, |m, n| ctx.phi_basis(m, n), x)
}

/// `ρ′(Y): Y → Hom_R(M, Hom_S(N, Y))`, `ρ′(y)(m)(n) = ψ(n ⊗ m) y`.
pub fn rho_prime_map(ctx: &MoritaContext, y: &LeftModule) -> Result<UnitMap> {
    if !same_algebra(y.algebra(), &ctx.s) {
        return Err(Error::AlgebraMismatch("rho' needs an S-module".into()));
    }
    unit(&ctx.n, &ctx.m, |n, m| ctx.psi_basis(n, m), y)
}

/// `Γ ∘ Δ` for an `R-S` context `Γ` and an `S-T` context `Δ`:
/// bimodules `M ⊗_S M′`, `N′ ⊗_S N` with
/// `(m⊗m′)⊗(n′⊗n) ↦ φ(m φ′(m′⊗n′) ⊗ n)` and
/// `(n′⊗n)⊗(m⊗m′) ↦ ψ′(n′ ψ(n⊗m) ⊗ m′)`.
pub fn compose_contexts(g: &MoritaContext, d: &MoritaContext) -> Result<MoritaContext> {
    if !same_algebra(&g.s, &d.r) {
        return Err(Error::AlgebraMismatch(
            "middle algebras of the composed contexts differ".into(),
        ));
    }
    let f = g.r.field();
    let (mm_t, mm) = tensor_bimodules(&g.m, &d.m)?;
    let (nn_t, nn) = tensor_bimodules(&d.n, &g.n)?;
    let (dmm, dnn) = (mm.dim(), nn.dim());

    let mut phi_cols = Vec::with_capacity(dmm * dnn);
    for u in 0..dmm {
        let (i, j) = mm_t.basis_pair(u);
        for w in 0..dnn {
            let (k, l) = nn_t.basis_pair(w);
            let s = d.phi_basis(j, k);
            let m = g.m.act_right(&s).column(i);
            let n = crate::exactlin::unit_vector(f, g.n.dim(), l);
            phi_cols.push(g.phi_of(&m, &n));
        }
    }
    let mut psi_cols = Vec::with_capacity(dmm * dnn);
    for w in 0..dnn {
        let (k, l) = nn_t.basis_pair(w);
        for u in 0..dmm {
            let (i, j) = mm_t.basis_pair(u);
            let s = g.psi_basis(l, i);
            let n2 = d.n.act_right(&s).column(k);
            let m2 = crate::exactlin::unit_vector(f, d.m.dim(), j);
            psi_cols.push(d.psi_of(&n2, &m2));
        }
    }
    let phi_raw = Matrix::from_columns(f, g.r.dim(), &phi_cols);
    let psi_raw = Matrix::from_columns(f, d.s.dim(), &psi_cols);
    MoritaContext::from_raw(g.r.clone(), d.s.clone(), mm, nn, phi_raw, psi_raw)
}

/// Bimodule isomorphisms `u: M → M′`, `v: N → N′` with
/// `φ′ ∘ (u ⊗ v) = φ` and `ψ′ ∘ (v ⊗ u) = ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextIso {
    pub u: Matrix,
    pub v: Matrix,
}

impl ContextIso {
    /// Re-checks every defining condition.
    pub fn verify(&self, a: &MoritaContext, b: &MoritaContext) -> bool {
        let u_ok = self.u.is_invertible() && bimodule_hom(&a.m, &b.m).contains(&self.u);
        let v_ok = self.v.is_invertible() && bimodule_hom(&a.n, &b.n).contains(&self.v);
        u_ok && v_ok
            && &b.phi * &a.mn.map_between(&b.mn, &self.u, &self.v) == a.phi
            && &b.psi * &a.nm.map_between(&b.nm, &self.v, &self.u) == a.psi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContextIsoSearch {
    Found(ContextIso),
    ProvenNone,
    NotFoundSampled,
}

impl ContextIsoSearch {
    pub fn found(&self) -> Option<&ContextIso> {
        match self {
            ContextIsoSearch::Found(iso) => Some(iso),
            _ => None,
        }
    }
}

fn bimodule_hom(a: &Bimodule, b: &Bimodule) -> HomSpace {
    let pairs: Vec<(&Matrix, &Matrix)> = a
        .generator_actions()
        .into_iter()
        .zip(b.generator_actions())
        .collect();
    intertwiners(a.field(), a.dim(), b.dim(), &pairs, None)
}

/// Searches for a [`ContextIso`] between contexts over the same `R`, `S`.
///
/// Candidates `u` are enumerated (or sampled) from the bimodule Hom space
/// and must map `I·M` onto `I′·M′`; for each, the conditions are linear in
/// `v`, and the affine solution space is searched for an invertible `v`.
pub fn contexts_isomorphic(
    a: &MoritaContext,
    b: &MoritaContext,
    seed: u64,
) -> Result<ContextIsoSearch> {
    if !same_algebra(&a.r, &b.r) || !same_algebra(&a.s, &b.s) {
        return Err(Error::AlgebraMismatch(
            "contexts connect different algebras".into(),
        ));
    }
    if a.m.dim() != b.m.dim()
        || a.n.dim() != b.n.dim()
        || a.mn.dim() != b.mn.dim()
        || a.nm.dim() != b.nm.dim()
    {
        return Ok(ContextIsoSearch::ProvenNone);
    }
    let (ia, ja) = trace_ideals(a)?;
    let (ib, jb) = trace_ideals(b)?;
    if ia != ib || ja != jb {
        return Ok(ContextIsoSearch::ProvenNone);
    }
    let f = a.r.field();
    if a.m == b.m && a.n == b.n && a.phi == b.phi && a.psi == b.psi {
        return Ok(ContextIsoSearch::Found(ContextIso {
            u: Matrix::identity(f, a.m.dim()),
            v: Matrix::identity(f, a.n.dim()),
        }));
    }
    let hu = bimodule_hom(&a.m, &b.m);
    let hv = bimodule_hom(&a.n, &b.n);
    if (a.m.dim() > 0 && hu.is_zero()) || (a.n.dim() > 0 && hv.is_zero()) {
        return Ok(ContextIsoSearch::ProvenNone);
    }
    let im_a = ideal_action_image(&ia, &a.m.as_left());
    let im_b = ideal_action_image(&ib, &b.m.as_left());

    let mut sampled = false;
    let u_candidates = invertible_candidates(&hu, a.m.dim(), seed, &mut sampled);
    let target: Vector = a
        .phi
        .entries()
        .iter()
        .chain(a.psi.entries())
        .cloned()
        .collect();
    for u in u_candidates {
        if im_a.basis().image_under(&u) != *im_b.basis() {
            continue;
        }
        // Columns: flattened [φ′(u⊗v_b) | ψ′(v_b⊗u)] for each basis map v_b.
        let cols: Vec<Vector> = hv
            .maps()
            .iter()
            .map(|vb| {
                let p = &b.phi * &a.mn.map_between(&b.mn, &u, vb);
                let q = &b.psi * &a.nm.map_between(&b.nm, vb, &u);
                p.entries().iter().chain(q.entries()).cloned().collect()
            })
            .collect();
        let system = Matrix::from_columns(f, target.len(), &cols);
        let Some(particular) = system.solve(&target) else {
            continue;
        };
        let offset = hv.combination(&particular);
        let directions: Vec<Matrix> = system
            .kernel_basis()
            .vectors()
            .iter()
            .map(|c| hv.combination(c))
            .collect();
        match search_invertible(f, a.n.dim(), Some(&offset), &directions, seed) {
            IsoSearch::Found(v) => {
                let iso = ContextIso { u, v };
                debug_assert!(iso.verify(a, b));
                return Ok(ContextIsoSearch::Found(iso));
            }
            IsoSearch::NotFoundSampled => sampled = true,
            IsoSearch::ProvenNone => {}
        }
    }
    Ok(if sampled {
        ContextIsoSearch::NotFoundSampled
    } else {
        ContextIsoSearch::ProvenNone
    })
}

/// Every invertible element of a Hom space when small enough, otherwise a
/// deterministic sample (setting `sampled`).
fn invertible_candidates(h: &HomSpace, n: usize, seed: u64, sampled: &mut bool) -> Vec<Matrix> {
    let f = h.field();
    let d = h.dim();
    if n == 0 {
        return vec![Matrix::zeros(f, 0, 0)];
    }
    let mut out = Vec::new();
    match f.order() {
        Some(p)
            if (p as u128)
                .checked_pow(d as u32)
                .is_some_and(|t| t <= EXHAUSTIVE_LIMIT as u128) =>
        {
            let elements = f.elements().expect("finite");
            let mut digits = vec![0usize; d];
            while crate::module::advance_digits(&mut digits, p as usize) {
                let coeffs: Vec<Scalar> = digits.iter().map(|&x| elements[x].clone()).collect();
                let m = h.combination(&coeffs);
                if m.is_invertible() {
                    out.push(m);
                }
            }
        }
        _ => {
            use rand::{Rng, SeedableRng};
            *sampled = true;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..SAMPLE_COUNT {
                let coeffs: Vec<Scalar> = (0..d)
                    .map(|_| match f.order() {
                        Some(p) => f.from_i64(rng.gen_range(0..p as i64)),
                        None => f.from_i64(rng.gen_range(-3..=3)),
                    })
                    .collect();
                let m = h.combination(&coeffs);
                if m.is_invertible() && !out.contains(&m) {
                    out.push(m);
                }
            }
        }
    }
    out
}
