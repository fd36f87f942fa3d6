//! Exact linear algebra over GF(p) and the rationals.
//!
//! Every subspace is carried in reduced echelon form, so [`Basis`] equality
//! is subspace equality. No floating point is used anywhere.

mod basis;
mod matrix;
mod scalar;

pub use basis::{
    quotient_structure, standard_vectors, subspace_ops, unit_vector, Basis, Quotient,
    SubspaceRelations,
};
pub use matrix::Matrix;
pub use scalar::{Field, Scalar, MAX_PRIME};

/// Column vector of field elements.
pub type Vector = Vec<Scalar>;

/// Free function form of [`Matrix::rref`].
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    m.rref()
}

pub fn kernel_basis(m: &Matrix) -> Basis {
    m.kernel_basis()
}

pub fn solve(a: &Matrix, b: &[Scalar]) -> Option<Vector> {
    a.solve(b)
}

/// `Σ coeffs[i] * vectors[i]`; `n` is the common length.
pub fn combine(field: Field, n: usize, coeffs: &[Scalar], vectors: &[Vector]) -> Vector {
    let mut out = vec![field.zero(); n];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += &(c * x);
            }
        }
    }
    out
}

/// `Σ coeffs[i] * matrices[i]`.
pub fn combine_matrices(
    field: Field,
    rows: usize,
    cols: usize,
    coeffs: &[Scalar],
    matrices: &[Matrix],
) -> Matrix {
    let mut out = Matrix::zeros(field, rows, cols);
    for (c, m) in coeffs.iter().zip(matrices) {
        if c.is_zero() {
            continue;
        }
        out = &out + &m.scale(c);
    }
    out
}

/// Tensor of two vectors with index `i * b.len() + j`.
pub fn kron_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}
