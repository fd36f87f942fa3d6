//! Left, right and bimodules over [`Algebra`]s, given by one action matrix
//! per algebra basis element.

mod hom;
mod iso;
mod submodule;
mod tensor;

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::{combine_matrices, quotient_structure, Basis, Field, Matrix, Scalar};
use crate::validation::ValidationReport;

pub use hom::{hom_module, hom_space, hom_space_supported, intertwiners, HomModule, HomSpace};
pub use iso::{
    is_isomorphic, is_isomorphic_with, search_invertible, IsoSearch, EXHAUSTIVE_LIMIT, SAMPLE_COUNT,
};
pub use submodule::{
    annihilator, enumerate_submodules, enumerate_submodules_with_budget, ideal_action_image,
    sample_submodules, submodule_closure, Submodule, DEFAULT_ENUMERATION_BUDGET,
};
pub use tensor::{tensor_bimodules, tensor_left, tensor_over, TensorProduct};

pub(crate) use submodule::advance as advance_digits;

/// Same algebra, by pointer or by value.
pub fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn check_actions(algebra: &Algebra, dim: usize, action: &[Matrix], side: &str) -> Result<()> {
    if action.len() != algebra.dim() {
        return Err(Error::Dimension(format!(
            "{side} action needs {} matrices, got {}",
            algebra.dim(),
            action.len()
        )));
    }
    for (i, m) in action.iter().enumerate() {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::Dimension(format!(
                "{side} action matrix {i} is {}x{}, expected {dim}x{dim}",
                m.rows(),
                m.cols()
            )));
        }
        if m.field() != algebra.field() {
            return Err(Error::InvalidField(format!("{side} action matrix {i}")));
        }
    }
    Ok(())
}

/// Checks `act(e_i) act(e_j) = act(e_i e_j)` (or the reversed law for right
/// actions) and `act(1) = 1`.
fn action_law_report(
    algebra: &Algebra,
    dim: usize,
    action: &[Matrix],
    right: bool,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let f = algebra.field();
    let labels = algebra.labels();
    let act = |v: &[Scalar]| combine_matrices(f, dim, dim, v, action);
    for i in 0..algebra.dim() {
        for j in 0..algebra.dim() {
            let composed = if right {
                &action[j] * &action[i]
            } else {
                &action[i] * &action[j]
            };
            if composed != act(&algebra.structure_constants()[i][j]) {
                report.violation(format!("action law ({},{})", labels[i], labels[j]));
            }
        }
    }
    if act(algebra.unit()) != Matrix::identity(f, dim) {
        report.violation("unit acts as identity");
    }
    report
}

/// A left module: `action[i]` is the matrix of `m ↦ e_i · m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftModule {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Matrix>,
}

impl LeftModule {
    /// Shape-checked constructor; see [`LeftModule::validate`] for the laws.
    pub fn new(algebra: Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        check_actions(&algebra, dim, &action, "left")?;
        Ok(LeftModule {
            algebra,
            dim,
            action,
        })
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(algebra: Arc<Algebra>) -> Self {
        let action = (0..algebra.dim())
            .map(|i| algebra.left_basis_mult(i).clone())
            .collect();
        let dim = algebra.dim();
        LeftModule {
            algebra,
            dim,
            action,
        }
    }

    pub fn zero(algebra: Arc<Algebra>) -> Self {
        let f = algebra.field();
        let action = (0..algebra.dim()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        LeftModule {
            algebra,
            dim: 0,
            action,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    /// Matrix of `m ↦ a · m` for an arbitrary algebra element.
    pub fn act(&self, a: &[Scalar]) -> Matrix {
        combine_matrices(self.field(), self.dim, self.dim, a, &self.action)
    }

    pub fn validate(&self) -> ValidationReport {
        action_law_report(&self.algebra, self.dim, &self.action, false)
    }

    pub fn direct_sum(&self, other: &LeftModule) -> LeftModule {
        assert!(
            same_algebra(&self.algebra, &other.algebra),
            "direct sum over different algebras"
        );
        let f = self.field();
        let n = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| block_diagonal(f, n, a, b))
            .collect();
        LeftModule {
            algebra: self.algebra.clone(),
            dim: n,
            action,
        }
    }

    /// `self^k`.
    pub fn power(&self, k: usize) -> LeftModule {
        (0..k).fold(LeftModule::zero(self.algebra.clone()), |acc, _| {
            acc.direct_sum(self)
        })
    }

    /// Whether `span` is stable under every action matrix.
    pub fn is_stable(&self, span: &Basis) -> bool {
        span.vectors()
            .iter()
            .all(|v| self.action.iter().all(|a| span.contains(&a.apply(v))))
    }

    /// The submodule as a module in its own (echelon) basis.
    pub fn restrict(&self, sub: &Submodule) -> LeftModule {
        let basis = sub.basis();
        let action = self
            .action
            .iter()
            .map(|a| restrict_operator(a, basis))
            .collect();
        LeftModule {
            algebra: self.algebra.clone(),
            dim: basis.dim(),
            action,
        }
    }

    /// `self / sub` together with the projection matrix.
    pub fn quotient(&self, sub: &Submodule) -> (LeftModule, Matrix) {
        let q = quotient_structure(self.dim, sub.basis());
        let action = self
            .action
            .iter()
            .map(|a| &(&q.projection * a) * &q.section)
            .collect();
        (
            LeftModule {
                algebra: self.algebra.clone(),
                dim: q.quotient_dim,
                action,
            },
            q.projection,
        )
    }

    /// Same module with basis changed by `change` (new coordinates = change · old).
    pub fn transport(&self, change: &Matrix) -> Result<LeftModule> {
        let inv = change
            .inverse()
            .ok_or_else(|| Error::Invalid("change of basis is singular".into()))?;
        let action = self.action.iter().map(|a| &(change * a) * &inv).collect();
        Ok(LeftModule {
            algebra: self.algebra.clone(),
            dim: self.dim,
            action,
        })
    }

    /// View as an `R-k` bimodule with the trivial right action.
    pub fn to_bimodule(&self) -> Bimodule {
        let f = self.field();
        Bimodule {
            left: self.algebra.clone(),
            right: Arc::new(Algebra::ground(f)),
            dim: self.dim,
            left_action: self.action.clone(),
            right_action: vec![Matrix::identity(f, self.dim)],
        }
    }
}

/// A right module: `action[i]` is the matrix of `m ↦ m · e_i`, so that
/// `action(e_j) action(e_i) = action(e_i e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightModule {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Matrix>,
}

impl RightModule {
    pub fn new(algebra: Arc<Algebra>, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        check_actions(&algebra, dim, &action, "right")?;
        Ok(RightModule {
            algebra,
            dim,
            action,
        })
    }

    pub fn regular(algebra: Arc<Algebra>) -> Self {
        let action = (0..algebra.dim())
            .map(|i| algebra.right_basis_mult(i).clone())
            .collect();
        let dim = algebra.dim();
        RightModule {
            algebra,
            dim,
            action,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    pub fn validate(&self) -> ValidationReport {
        action_law_report(&self.algebra, self.dim, &self.action, true)
    }

    /// View as a `k-R` bimodule with the trivial left action.
    pub fn to_bimodule(&self) -> Bimodule {
        let f = self.algebra.field();
        Bimodule {
            left: Arc::new(Algebra::ground(f)),
            right: self.algebra.clone(),
            dim: self.dim,
            left_action: vec![Matrix::identity(f, self.dim)],
            right_action: self.action.clone(),
        }
    }
}

/// An `A-B` bimodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    dim: usize,
    left_action: Vec<Matrix>,
    right_action: Vec<Matrix>,
}

impl Bimodule {
    pub fn new(
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        dim: usize,
        left_action: Vec<Matrix>,
        right_action: Vec<Matrix>,
    ) -> Result<Self> {
        if left.field() != right.field() {
            return Err(Error::InvalidField(
                "left and right algebras differ in field".into(),
            ));
        }
        check_actions(&left, dim, &left_action, "left")?;
        check_actions(&right, dim, &right_action, "right")?;
        Ok(Bimodule {
            left,
            right,
            dim,
            left_action,
            right_action,
        })
    }

    /// `R` as an `R-R` bimodule.
    pub fn regular(algebra: Arc<Algebra>) -> Self {
        let left_action = (0..algebra.dim())
            .map(|i| algebra.left_basis_mult(i).clone())
            .collect();
        let right_action = (0..algebra.dim())
            .map(|i| algebra.right_basis_mult(i).clone())
            .collect();
        Bimodule {
            dim: algebra.dim(),
            left: algebra.clone(),
            right: algebra,
            left_action,
            right_action,
        }
    }

    pub fn left_algebra(&self) -> &Arc<Algebra> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<Algebra> {
        &self.right
    }

    pub fn field(&self) -> Field {
        self.left.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_actions(&self) -> &[Matrix] {
        &self.left_action
    }

    pub fn right_actions(&self) -> &[Matrix] {
        &self.right_action
    }

    pub fn act_left(&self, a: &[Scalar]) -> Matrix {
        combine_matrices(self.field(), self.dim, self.dim, a, &self.left_action)
    }

    pub fn act_right(&self, b: &[Scalar]) -> Matrix {
        combine_matrices(self.field(), self.dim, self.dim, b, &self.right_action)
    }

    pub fn as_left(&self) -> LeftModule {
        LeftModule {
            algebra: self.left.clone(),
            dim: self.dim,
            action: self.left_action.clone(),
        }
    }

    pub fn as_right(&self) -> RightModule {
        RightModule {
            algebra: self.right.clone(),
            dim: self.dim,
            action: self.right_action.clone(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        report.merge(
            "left",
            action_law_report(&self.left, self.dim, &self.left_action, false),
        );
        report.merge(
            "right",
            action_law_report(&self.right, self.dim, &self.right_action, true),
        );
        for (i, l) in self.left_action.iter().enumerate() {
            for (j, r) in self.right_action.iter().enumerate() {
                if l * r != r * l {
                    report.violation(format!(
                        "actions do not commute ({},{})",
                        self.left.labels()[i],
                        self.right.labels()[j]
                    ));
                }
            }
        }
        report
    }

    /// Action matrices for both sides, for intertwiner systems.
    pub(crate) fn generator_actions(&self) -> Vec<&Matrix> {
        self.left
            .generators()
            .iter()
            .map(|&i| &self.left_action[i])
            .chain(
                self.right
                    .generators()
                    .iter()
                    .map(|&i| &self.right_action[i]),
            )
            .collect()
    }
}

pub(crate) fn block_diagonal(f: Field, n: usize, a: &Matrix, b: &Matrix) -> Matrix {
    let k = a.rows();
    Matrix::from_fn(f, n, n, |r, c| {
        if r < k && c < k {
            a[(r, c)].clone()
        } else if r >= k && c >= k {
            b[(r - k, c - k)].clone()
        } else {
            f.zero()
        }
    })
}

/// Matrix of `op` restricted to an invariant subspace, in that subspace's basis.
pub fn restrict_operator(op: &Matrix, basis: &Basis) -> Matrix {
    let cols: Vec<_> = basis
        .vectors()
        .iter()
        .map(|v| {
            basis
                .coordinates(&op.apply(v))
                .expect("subspace is invariant under the operator")
        })
        .collect();
    Matrix::from_columns(op.field(), basis.dim(), &cols)
}
