//! Finite-dimensional associative unital algebras given by structure
//! constants, together with their two-sided ideals.

use crate::error::{Error, Result};
use crate::exactlin::{
    combine, quotient_structure, unit_vector, Basis, Field, Matrix, Scalar, Vector,
};
use crate::validation::ValidationReport;

/// An algebra with basis `e_0, ..., e_{dim-1}`; `mul[i][j]` holds the
/// coordinates of `e_i * e_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Algebra {
    field: Field,
    dim: usize,
    mul: Vec<Vec<Vector>>,
    unit: Vector,
    labels: Vec<String>,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    generators: Vec<usize>,
}

impl Algebra {
    /// Checks tensor shapes only; call [`Algebra::validate`] for the laws.
    pub fn new(field: Field, dim: usize, mul: Vec<Vec<Vector>>, unit: Vector) -> Result<Self> {
        if mul.len() != dim || mul.iter().any(|row| row.len() != dim) {
            return Err(Error::Dimension(format!(
                "structure constants must be {dim}x{dim} coefficient vectors"
            )));
        }
        if mul.iter().flatten().any(|v| v.len() != dim) {
            return Err(Error::Dimension(format!(
                "every product must have {dim} coordinates"
            )));
        }
        if unit.len() != dim {
            return Err(Error::Dimension(format!(
                "unit must have {dim} coordinates"
            )));
        }
        if mul
            .iter()
            .flatten()
            .flatten()
            .chain(&unit)
            .any(|s| !field.contains(s))
        {
            return Err(Error::InvalidField(format!("entries outside {field}")));
        }
        let left = (0..dim)
            .map(|i| Matrix::from_fn(field, dim, dim, |k, j| mul[i][j][k].clone()))
            .collect();
        let right = (0..dim)
            .map(|i| Matrix::from_fn(field, dim, dim, |k, j| mul[j][i][k].clone()))
            .collect();
        let mut algebra = Algebra {
            field,
            dim,
            mul,
            unit,
            labels: (0..dim).map(|i| format!("e{i}")).collect(),
            left,
            right,
            generators: Vec::new(),
        };
        algebra.generators = algebra.find_generators();
        Ok(algebra)
    }

    /// Greedy choice of basis indices that generate the algebra together
    /// with the unit. Falls back to every index when the structure is not
    /// a valid algebra.
    fn find_generators(&self) -> Vec<usize> {
        let all: Vec<usize> = (0..self.dim).collect();
        if self.dim == 0 {
            return all;
        }
        let id = Matrix::identity(self.field, self.dim);
        if self.left_mult(&self.unit) != id || self.right_mult(&self.unit) != id {
            return all;
        }
        let mut chosen: Vec<usize> = Vec::new();
        let mut span = Basis::span(self.field, self.dim, [self.unit.clone()]);
        for i in 0..self.dim {
            if span.is_full() {
                break;
            }
            if span.contains(&self.basis_vector(i)) {
                continue;
            }
            chosen.push(i);
            span = self.subalgebra_span(&chosen);
        }
        if !span.is_full() {
            return all;
        }
        chosen
    }

    /// Span of all words in the given basis elements, including the unit.
    fn subalgebra_span(&self, gens: &[usize]) -> Basis {
        let mut span = Basis::span(self.field, self.dim, [self.unit.clone()]);
        loop {
            let mut grown = span.vectors().to_vec();
            for v in span.vectors() {
                for &g in gens {
                    grown.push(self.left[g].apply(v));
                }
            }
            let next = Basis::span(self.field, self.dim, grown);
            if next.dim() == span.dim() {
                return next;
            }
            span = next;
        }
    }

    /// Basis indices generating the algebra (with the unit). A module map
    /// only has to commute with the action of these.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim, "one label per basis element");
        self.labels = labels;
        self
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: Field) -> Self {
        Self::new(field, 1, vec![vec![vec![field.one()]]], vec![field.one()])
            .expect("ground field shape")
            .with_labels(vec!["1".into()])
    }

    /// `M_n(field)` with basis `E_rc` at index `r * n + c`.
    pub fn matrix_algebra(field: Field, n: usize) -> Self {
        let units: Vec<Matrix> = (0..n * n)
            .map(|i| {
                let mut m = Matrix::zeros(field, n, n);
                m[(i / n, i % n)] = field.one();
                m
            })
            .collect();
        let labels = (0..n * n)
            .map(|i| format!("e{}{}", i / n + 1, i % n + 1))
            .collect();
        Self::from_matrix_basis(field, n, &units)
            .expect("matrix units span a subalgebra")
            .with_labels(labels)
    }

    /// Upper-triangular 2x2 matrices with basis `(e11, e12, e22)`.
    pub fn upper_triangular(field: Field) -> Self {
        let unit = |r, c| {
            let mut m = Matrix::zeros(field, 2, 2);
            m[(r, c)] = field.one();
            m
        };
        Self::from_matrix_basis(field, 2, &[unit(0, 0), unit(0, 1), unit(1, 1)])
            .expect("T2 is a subalgebra")
            .with_labels(vec!["e11".into(), "e12".into(), "e22".into()])
    }

    /// The subalgebra of `M_n` spanned by the given linearly independent
    /// matrices, which must be closed under products and contain the identity.
    pub fn from_matrix_basis(field: Field, n: usize, basis: &[Matrix]) -> Result<Self> {
        let flat = |m: &Matrix| m.entries().to_vec();
        let span = Matrix::from_columns(field, n * n, &basis.iter().map(flat).collect::<Vec<_>>());
        if span.rank() != basis.len() {
            return Err(Error::Invalid("matrix basis is linearly dependent".into()));
        }
        let coords = |m: &Matrix| {
            span.solve(m.entries())
                .ok_or_else(|| Error::Invalid("span of matrices is not closed".into()))
        };
        let mut mul = Vec::with_capacity(basis.len());
        for a in basis {
            let mut row = Vec::with_capacity(basis.len());
            for b in basis {
                row.push(coords(&(a * b))?);
            }
            mul.push(row);
        }
        let unit = coords(&Matrix::identity(field, n))?;
        Self::new(field, basis.len(), mul, unit)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure_constants(&self) -> &[Vec<Vector>] {
        &self.mul
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        unit_vector(self.field, self.dim, i)
    }

    /// Matrix of `x ↦ e_i * x`.
    pub fn left_basis_mult(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    /// Matrix of `x ↦ x * e_i`.
    pub fn right_basis_mult(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn left_mult(&self, a: &[Scalar]) -> Matrix {
        crate::exactlin::combine_matrices(self.field, self.dim, self.dim, a, &self.left)
    }

    pub fn right_mult(&self, a: &[Scalar]) -> Matrix {
        crate::exactlin::combine_matrices(self.field, self.dim, self.dim, a, &self.right)
    }

    pub fn multiply(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        self.left_mult(a).apply(b)
    }

    fn product_of_basis(&self, i: usize, j: usize) -> &Vector {
        &self.mul[i][j]
    }

    /// Associativity on every basis triple plus both unit laws.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.dim == 0 {
            report.note("zero algebra");
            return report;
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.product_of_basis(i, j);
                for k in 0..self.dim {
                    let lhs = self.right[k].apply(ij);
                    let rhs = self.left[i].apply(self.product_of_basis(j, k));
                    if lhs != rhs {
                        report.violation(format!(
                            "associativity ({},{},{})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
        }
        let lu = self.left_mult(&self.unit);
        let ru = self.right_mult(&self.unit);
        let id = Matrix::identity(self.field, self.dim);
        if lu != id {
            report.violation("left unit law");
        }
        if ru != id {
            report.violation("right unit law");
        }
        report
    }

    /// Whether `span` is stable under left and right multiplication.
    pub fn is_two_sided_ideal(&self, span: &Basis) -> bool {
        span.vectors().iter().all(|v| {
            (0..self.dim).all(|i| {
                span.contains(&self.left[i].apply(v)) && span.contains(&self.right[i].apply(v))
            })
        })
    }

    pub fn is_idempotent(&self, e: &[Scalar]) -> bool {
        self.multiply(e, e) == e
    }

    /// Subalgebra on an action-closed subspace, with a chosen unit.
    ///
    /// Used for corner algebras `eRe`, whose unit is `e` rather than `1`.
    pub fn on_subspace(&self, span: &Basis, unit: &[Scalar]) -> Result<Algebra> {
        let d = span.dim();
        let coords = |v: &Vector| {
            span.coordinates(v)
                .ok_or_else(|| Error::Invalid("subspace is not closed under multiplication".into()))
        };
        let vectors = span.vectors();
        let mut mul = Vec::with_capacity(d);
        for a in vectors {
            let mut row = Vec::with_capacity(d);
            for b in vectors {
                row.push(coords(&self.multiply(a, b))?);
            }
            mul.push(row);
        }
        let unit = coords(&unit.to_vec())?;
        Algebra::new(self.field, d, mul, unit)
    }
}

/// A two-sided ideal, carried as a subspace of the algebra's coordinate space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    basis: Basis,
}

impl Ideal {
    /// Wraps `basis` after checking two-sided stability.
    pub fn new(algebra: &Algebra, basis: Basis) -> Result<Self> {
        if basis.ambient_dim() != algebra.dim() {
            return Err(Error::Dimension(
                "ideal lives in a different algebra".into(),
            ));
        }
        if !algebra.is_two_sided_ideal(&basis) {
            return Err(Error::Invalid("subspace is not a two-sided ideal".into()));
        }
        Ok(Ideal { basis })
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Ideal {
            basis: Basis::zero(algebra.field(), algebra.dim()),
        }
    }

    pub fn whole(algebra: &Algebra) -> Self {
        Ideal {
            basis: Basis::full(algebra.field(), algebra.dim()),
        }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_zero()
    }

    pub fn is_whole(&self) -> bool {
        self.basis.is_full()
    }
}

/// Smallest two-sided ideal containing `generators`, by iterating left and
/// right multiplication until the dimension stops growing.
pub fn two_sided_ideal_closure(algebra: &Algebra, generators: &[Vector]) -> Ideal {
    let f = algebra.field();
    let n = algebra.dim();
    let mut span = Basis::span(f, n, generators.iter().cloned());
    loop {
        let mut grown = span.vectors().to_vec();
        for v in span.vectors() {
            for i in 0..n {
                grown.push(algebra.left_basis_mult(i).apply(v));
                grown.push(algebra.right_basis_mult(i).apply(v));
            }
        }
        let next = Basis::span(f, n, grown);
        if next.dim() == span.dim() {
            return Ideal { basis: next };
        }
        span = next;
    }
}

/// `I * J`, the span of all products of basis elements.
pub fn ideal_product(algebra: &Algebra, i: &Ideal, j: &Ideal) -> Ideal {
    let products = i.basis.vectors().iter().flat_map(|v| {
        j.basis
            .vectors()
            .iter()
            .map(move |w| algebra.multiply(v, w))
    });
    Ideal {
        basis: Basis::span(algebra.field(), algebra.dim(), products),
    }
}

/// `I^n` for the least `n` with `I^n = I^{n+1}`, and that `n`.
pub fn stabilize_ideal(algebra: &Algebra, ideal: &Ideal) -> (Ideal, usize) {
    let mut power = ideal.clone();
    let mut exponent = 1;
    loop {
        let next = ideal_product(algebra, &power, ideal);
        if next == power {
            return (power, exponent);
        }
        power = next;
        exponent += 1;
    }
}

/// `A / I` and the projection `A → A/I`.
///
/// `I = A` yields the zero algebra, which [`Algebra::validate`] notes.
pub fn quotient_algebra(algebra: &Algebra, ideal: &Ideal) -> (Algebra, Matrix) {
    let f = algebra.field();
    let q = quotient_structure(algebra.dim(), ideal.basis());
    let reps: Vec<Vector> = q.section.columns();
    let mul = reps
        .iter()
        .map(|a| {
            reps.iter()
                .map(|b| q.projection.apply(&algebra.multiply(a, b)))
                .collect()
        })
        .collect();
    let unit = q.projection.apply(algebra.unit());
    let labels = q
        .representatives
        .iter()
        .map(|&r| algebra.labels()[r].clone())
        .collect();
    let quotient = Algebra::new(f, q.quotient_dim, mul, unit)
        .expect("quotient shapes are consistent")
        .with_labels(labels);
    (quotient, q.projection)
}

/// Coordinates of `Σ c_i e_i` given as integer coefficients.
pub fn element(algebra: &Algebra, coeffs: &[i64]) -> Vector {
    assert_eq!(coeffs.len(), algebra.dim());
    let f = algebra.field();
    combine(
        f,
        algebra.dim(),
        &coeffs.iter().map(|&c| f.from_i64(c)).collect::<Vec<_>>(),
        &(0..algebra.dim())
            .map(|i| algebra.basis_vector(i))
            .collect::<Vec<_>>(),
    )
}
