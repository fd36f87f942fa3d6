//! The torsion theory attached to a two-sided ideal `I`, computed through its
//! stable power `I∞`: torsion submodules, closed modules and localization.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{stabilize_ideal, Algebra, Ideal};
use crate::context::{eta_map, MoritaContext};
use crate::error::{Error, Result};
use crate::exactlin::{Basis, Matrix, Vector};
use crate::module::{
    annihilator, enumerate_submodules_with_budget, hom_module, hom_space, ideal_action_image,
    restrict_operator, same_algebra, sample_submodules, Bimodule, HomModule, LeftModule, Submodule,
};

/// Submodules tried when an oracle has to sample.
pub const ORACLE_SAMPLES: usize = 256;
/// Upper bound on submodules listed by the oracles.
pub const ORACLE_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionTheory {
    algebra: Arc<Algebra>,
    ideal: Ideal,
    stable: Ideal,
    exponent: usize,
    /// `I∞` as a sub-bimodule of `R`.
    stable_bimodule: Bimodule,
}

impl TorsionTheory {
    pub fn new(algebra: Arc<Algebra>, ideal: Ideal) -> Self {
        let (stable, exponent) = stabilize_ideal(&algebra, &ideal);
        let b = stable.basis();
        let stable_bimodule = Bimodule::new(
            algebra.clone(),
            algebra.clone(),
            b.dim(),
            (0..algebra.dim())
                .map(|i| restrict_operator(algebra.left_basis_mult(i), b))
                .collect(),
            (0..algebra.dim())
                .map(|i| restrict_operator(algebra.right_basis_mult(i), b))
                .collect(),
        )
        .expect("a two-sided ideal is a sub-bimodule");
        TorsionTheory {
            algebra,
            ideal,
            stable,
            exponent,
            stable_bimodule,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// `I∞`.
    pub fn stable(&self) -> &Ideal {
        &self.stable
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    /// `I² = I`, i.e. the torsion class is already closed under extensions.
    pub fn is_idempotent(&self) -> bool {
        self.exponent == 1
    }

    pub fn stable_bimodule(&self) -> &Bimodule {
        &self.stable_bimodule
    }

    fn check(&self, x: &LeftModule) -> Result<()> {
        if same_algebra(x.algebra(), &self.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(
                "module is over a different algebra than the torsion theory".into(),
            ))
        }
    }

    /// One-line summary such as `2-dim, idempotent (exponent 1)`.
    pub fn describe(&self) -> String {
        if self.is_idempotent() {
            format!("{}-dim, idempotent (exponent 1)", self.ideal.dim())
        } else {
            format!(
                "{}-dim, not idempotent (stabilizes at exponent {}, I∞ {}-dim)",
                self.ideal.dim(),
                self.exponent,
                self.stable.dim()
            )
        }
    }
}

/// `t̄(X) = Ann_X(I∞)`.
pub fn torsion_submodule(t: &TorsionTheory, x: &LeftModule) -> Result<Submodule> {
    t.check(x)?;
    Ok(annihilator(x, &t.stable))
}

pub fn is_torsion_free(t: &TorsionTheory, x: &LeftModule) -> Result<bool> {
    Ok(torsion_submodule(t, x)?.is_zero())
}

pub fn is_torsion(t: &TorsionTheory, x: &LeftModule) -> Result<bool> {
    Ok(torsion_submodule(t, x)?.dim() == x.dim())
}

/// `α: X → Hom_R(I∞, X)`, `α(x)(a) = a x`, together with its target.
pub fn closedness_map(t: &TorsionTheory, x: &LeftModule) -> Result<(HomModule, Matrix)> {
    t.check(x)?;
    let hm = hom_module(&t.stable_bimodule, x)?;
    let f = x.field();
    let acts: Vec<Matrix> = t
        .stable
        .basis()
        .vectors()
        .iter()
        .map(|a| x.act(a))
        .collect();
    let mut cols = Vec::with_capacity(x.dim());
    for j in 0..x.dim() {
        let map = Matrix::from_columns(
            f,
            x.dim(),
            &acts.iter().map(|a| a.column(j)).collect::<Vec<_>>(),
        );
        let c = hm
            .space
            .coordinates(&map)
            .ok_or_else(|| Error::Postcondition("α(x) is not a module map".into()))?;
        cols.push(c);
    }
    let alpha = Matrix::from_columns(f, hm.dim(), &cols);
    Ok((hm, alpha))
}

#[derive(Clone, Debug)]
pub struct ClosedTest {
    pub closed: bool,
    /// Matrix of `α`.
    pub alpha: Matrix,
}

/// `X` is closed iff `α` is an isomorphism.
pub fn is_closed(t: &TorsionTheory, x: &LeftModule) -> Result<ClosedTest> {
    let (_, alpha) = closedness_map(t, x)?;
    Ok(ClosedTest {
        closed: alpha.is_invertible(),
        alpha,
    })
}

#[derive(Clone, Debug)]
pub struct Localization {
    /// `Hom_R(I∞, X / t̄(X))`.
    pub module: LeftModule,
    /// `X → module`.
    pub map: Matrix,
    pub torsion: Submodule,
}

/// `Hom_R(I∞, X/t̄(X))` with the canonical map; asserts that the result is
/// closed, that the kernel is `t̄(X)` and that the cokernel is torsion.
pub fn localize(t: &TorsionTheory, x: &LeftModule) -> Result<Localization> {
    let torsion = torsion_submodule(t, x)?;
    let (q, proj) = x.quotient(&torsion);
    let (hm, alpha) = closedness_map(t, &q)?;
    let map = &alpha * &proj;
    let module = hm.module;

    if !is_closed(t, &module)?.closed {
        return Err(Error::Postcondition("localization is not closed".into()));
    }
    if map.kernel_basis() != *torsion.basis() {
        return Err(Error::Postcondition(
            "kernel of the localization map is not the torsion part".into(),
        ));
    }
    let image = Submodule::new(&module, map.column_space()).map_err(|_| {
        Error::Postcondition("image of the localization map is not a submodule".into())
    })?;
    let (coker, _) = module.quotient(&image);
    if !is_torsion(t, &coker)? {
        return Err(Error::Postcondition(
            "cokernel of the localization map is not torsion".into(),
        ));
    }
    Ok(Localization {
        module,
        map,
        torsion,
    })
}

/// Result of a brute-force oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub holds: bool,
    /// Only a sample of submodules was examined.
    pub sampled: bool,
    /// Submodules examined.
    pub checked: usize,
}

/// Submodules of `x` containing `floor`, listed through `x / floor`;
/// sampled when enumeration exceeds the budget.
pub(crate) fn submodules_above(
    x: &LeftModule,
    floor: &Submodule,
    budget: u64,
    seed: u64,
) -> Result<(Vec<Submodule>, bool)> {
    let (q, _) = x.quotient(floor);
    let qs = quotient_basis(x, floor);
    let (subs, sampled) = match enumerate_submodules_with_budget(&q, ORACLE_CAP, budget) {
        Ok(s) => (s, false),
        Err(Error::BudgetExceeded(_)) => (sample_submodules(&q, ORACLE_SAMPLES, seed), true),
        Err(e) => return Err(e),
    };
    let lifted = subs
        .iter()
        .map(|s| {
            let mut vs: Vec<Vector> = floor.basis().vectors().to_vec();
            vs.extend(s.basis().vectors().iter().map(|v| qs.apply(v)));
            Submodule::new(x, Basis::span(x.field(), x.dim(), vs)).expect("preimage of a submodule")
        })
        .collect();
    Ok((lifted, sampled))
}

/// Submodules of `x` contained in `ceiling`; sampled over budget.
pub(crate) fn submodules_below(
    x: &LeftModule,
    ceiling: &Submodule,
    budget: u64,
    seed: u64,
) -> Result<(Vec<Submodule>, bool)> {
    let sub = x.restrict(ceiling);
    let (subs, sampled) = match enumerate_submodules_with_budget(&sub, ORACLE_CAP, budget) {
        Ok(s) => (s, false),
        Err(Error::BudgetExceeded(_)) => (sample_submodules(&sub, ORACLE_SAMPLES, seed), true),
        Err(e) => return Err(e),
    };
    let inc = ceiling.inclusion();
    let pushed = subs
        .iter()
        .map(|s| Submodule::new(x, s.basis().image_under(&inc)).expect("image of a submodule"))
        .collect();
    Ok((pushed, sampled))
}

fn quotient_basis(x: &LeftModule, floor: &Submodule) -> Matrix {
    crate::exactlin::quotient_structure(x.dim(), floor.basis()).section
}

/// Whether every map `X′ → M` extends to `X → M`, over all submodules
/// `X′ ≤ X` with `X/X′` torsion. Those are exactly the submodules containing
/// `I∞X`, so they are listed as preimages of submodules of `X / I∞X`.
pub fn rel_injective_oracle(
    t: &TorsionTheory,
    m: &LeftModule,
    x: &LeftModule,
    budget: u64,
) -> Result<OracleVerdict> {
    t.check(m)?;
    t.check(x)?;
    if !x.field().is_finite() {
        return Err(Error::RequiresFiniteField);
    }
    let floor = ideal_action_image(&t.stable, x);
    let (subs, sampled) = submodules_above(x, &floor, budget, 0)?;
    let hx = hom_space(x, m)?;
    for sub in &subs {
        debug_assert!(is_torsion(t, &x.quotient(sub).0)?);
        let xp = x.restrict(sub);
        let inc = sub.inclusion();
        let restricted: Vec<Vector> = hx
            .maps()
            .iter()
            .map(|g| (g * &inc).entries().to_vec())
            .collect();
        let system = Matrix::from_columns(x.field(), m.dim() * sub.dim(), &restricted);
        for f in hom_space(&xp, m)?.maps() {
            if system.solve(f.entries()).is_none() {
                return Ok(OracleVerdict {
                    holds: false,
                    sampled,
                    checked: subs.len(),
                });
            }
        }
    }
    Ok(OracleVerdict {
        holds: true,
        sampled,
        checked: subs.len(),
    })
}

/// Whether `β ↦ β ∘ η(R)` is a bijection `Hom_R(R, X) → Hom_R(M⊗N⊗R, X)`.
pub fn closed_via_eta(ctx: &MoritaContext, x: &LeftModule) -> Result<bool> {
    let u = LeftModule::regular(ctx.r().clone());
    let eta = eta_map(ctx, &u)?;
    let from = hom_space(&u, x)?;
    let to = hom_space(&eta.source, x)?;
    if from.dim() != to.dim() {
        return Ok(false);
    }
    let cols = from
        .maps()
        .iter()
        .map(|b| {
            to.coordinates(&(b * &eta.matrix))
                .ok_or_else(|| Error::Postcondition("β ∘ η is not a module map".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(x.field(), to.dim(), &cols).is_invertible())
}
