use super::matrix::Matrix;
use super::scalar::{Field, Scalar};
use super::Vector;

/// A subspace of `field^ambient_dim`, stored as the rows of its reduced
/// echelon form. Equal subspaces have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Basis {
    field: Field,
    ambient_dim: usize,
    vectors: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Basis {
    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(
        field: Field,
        ambient_dim: usize,
        vectors: impl IntoIterator<Item = Vector>,
    ) -> Self {
        let rows: Vec<Vector> = vectors.into_iter().collect();
        if rows.is_empty() {
            return Self::zero(field, ambient_dim);
        }
        let (r, pivots) = Matrix::from_rows(field, ambient_dim, &rows).rref();
        let vectors = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Basis {
            field,
            ambient_dim,
            vectors,
            pivots,
        }
    }

    pub fn zero(field: Field, ambient_dim: usize) -> Self {
        Basis {
            field,
            ambient_dim,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Self {
        Self::span(field, ambient_dim, standard_vectors(field, ambient_dim))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `ambient_dim x dim` matrix with the basis vectors as columns.
    pub fn as_columns(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient_dim, &self.vectors)
    }

    /// Coefficients of `v` in this basis, or `None` when `v` is not in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient_dim, "ambient dimension mismatch");
        // Reduced echelon rows are unit vectors on the pivot columns.
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residue = v.to_vec();
        for (c, row) in coords.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residue.iter_mut().zip(row) {
                if !x.is_zero() {
                    *r -= &(c * x);
                }
            }
        }
        residue.iter().all(Scalar::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `other ⊆ self`.
    pub fn contains_subspace(&self, other: &Basis) -> bool {
        other.vectors.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Basis) -> Basis {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        Basis::span(
            self.field,
            self.ambient_dim,
            self.vectors.iter().chain(&other.vectors).cloned(),
        )
    }

    /// Zassenhaus: row-reduce `[[U, U], [V, 0]]`; rows with vanishing left
    /// half carry the intersection in their right half.
    pub fn intersection(&self, other: &Basis) -> Basis {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let n = self.ambient_dim;
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Basis::zero(f, n);
        }
        let mut rows = Vec::new();
        for u in &self.vectors {
            rows.push(u.iter().chain(u.iter()).cloned().collect::<Vector>());
        }
        for v in &other.vectors {
            let mut row = v.clone();
            row.extend(std::iter::repeat_n(f.zero(), n));
            rows.push(row);
        }
        let (r, pivots) = Matrix::from_rows(f, 2 * n, &rows).rref();
        let meet = (0..pivots.len())
            .filter(|&i| pivots[i] >= n)
            .map(|i| r.row(i)[n..].to_vec());
        Basis::span(f, n, meet)
    }

    /// Image of this subspace under a linear map with `ambient_dim` columns.
    pub fn image_under(&self, map: &Matrix) -> Basis {
        Basis::span(
            self.field,
            map.rows(),
            self.vectors.iter().map(|v| map.apply(v)),
        )
    }
}

impl std::fmt::Debug for Basis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Basis<{}>(ambient {}, {:?})",
            self.field, self.ambient_dim, self.vectors
        )
    }
}

pub fn standard_vectors(field: Field, n: usize) -> Vec<Vector> {
    (0..n).map(|i| unit_vector(field, n, i)).collect()
}

pub fn unit_vector(field: Field, n: usize, i: usize) -> Vector {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// Everything [`subspace_ops`] reports about a pair of subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceRelations {
    pub sum: Basis,
    pub intersection: Basis,
    pub equal: bool,
    /// `V ⊆ U`.
    pub contains: bool,
}

pub fn subspace_ops(u: &Basis, v: &Basis) -> SubspaceRelations {
    SubspaceRelations {
        sum: u.sum(v),
        intersection: u.intersection(v),
        equal: u == v,
        contains: u.contains_subspace(v),
    }
}

/// Coordinates for `ambient / span(U)`.
///
/// The quotient basis is the classes of the standard vectors on the
/// non-pivot columns of `U`, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    /// `quotient_dim x ambient_dim`; kernel is `span(U)`.
    pub projection: Matrix,
    /// `ambient_dim x quotient_dim`; `projection * section = 1`.
    pub section: Matrix,
    pub quotient_dim: usize,
    /// Ambient coordinate represented by each quotient basis vector.
    pub representatives: Vec<usize>,
}

pub fn quotient_structure(ambient_dim: usize, u: &Basis) -> Quotient {
    assert_eq!(u.ambient_dim(), ambient_dim, "ambient dimension mismatch");
    let f = u.field();
    let mut pivot_row = vec![None; ambient_dim];
    for (i, &p) in u.pivots().iter().enumerate() {
        pivot_row[p] = Some(i);
    }
    let free: Vec<usize> = (0..ambient_dim)
        .filter(|&c| pivot_row[c].is_none())
        .collect();
    let q = free.len();
    let mut projection = Matrix::zeros(f, q, ambient_dim);
    for (j, &c) in free.iter().enumerate() {
        projection[(j, c)] = f.one();
    }
    for (i, &p) in u.pivots().iter().enumerate() {
        // e_p ≡ e_p - u_i = -(free part of u_i)
        for (j, &c) in free.iter().enumerate() {
            projection[(j, p)] = -&u.vectors()[i][c];
        }
    }
    let mut section = Matrix::zeros(f, ambient_dim, q);
    for (j, &c) in free.iter().enumerate() {
        section[(c, j)] = f.one();
    }
    Quotient {
        projection,
        section,
        quotient_dim: q,
        representatives: free,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Field {
        Field::gf2()
    }

    fn v(f: Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn equal_subspaces() {
        let f = gf2();
        let u = Basis::span(f, 3, vec![v(f, &[1, 1, 0]), v(f, &[0, 1, 1])]);
        let w = Basis::span(f, 3, vec![v(f, &[1, 0, 1]), v(f, &[1, 1, 0])]);
        let rel = subspace_ops(&u, &w);
        assert!(rel.equal && rel.contains);
        assert_eq!(rel.sum, u);
        assert_eq!(rel.intersection, u);
    }

    #[test]
    fn coordinate_axes() {
        let f = gf2();
        let u = Basis::span(f, 2, vec![v(f, &[1, 0])]);
        let w = Basis::span(f, 2, vec![v(f, &[0, 1])]);
        let rel = subspace_ops(&u, &w);
        assert_eq!(rel.sum.dim(), 2);
        assert_eq!(rel.intersection.dim(), 0);
        assert!(!rel.equal && !rel.contains);
    }

    #[test]
    fn gf2_cube_example() {
        let f = gf2();
        let u = Basis::span(f, 3, vec![v(f, &[1, 1, 0]), v(f, &[0, 0, 1])]);
        let w = Basis::span(f, 3, vec![v(f, &[0, 1, 1])]);
        let rel = subspace_ops(&u, &w);
        assert_eq!(rel.intersection.dim(), 0);
        assert_eq!(rel.sum.dim(), 3);
    }

    #[test]
    fn quotient_examples() {
        let f = Field::Rationals;
        let q = quotient_structure(3, &Basis::zero(f, 3));
        assert_eq!(q.projection, Matrix::identity(f, 3));
        let q = quotient_structure(3, &Basis::full(f, 3));
        assert_eq!(q.quotient_dim, 0);
        let u = Basis::span(f, 3, vec![v(f, &[1, 0, 0])]);
        let q = quotient_structure(3, &u);
        assert_eq!(q.quotient_dim, 2);
        assert_eq!(
            q.projection,
            Matrix::from_ints(f, &[&[0, 1, 0], &[0, 0, 1]])
        );
        assert_eq!(&q.projection * &q.section, Matrix::identity(f, 2));
    }

    #[test]
    fn quotient_kernel_is_subspace() {
        let f = Field::prime(5).unwrap();
        let u = Basis::span(f, 4, vec![v(f, &[1, 2, 0, 3]), v(f, &[0, 1, 4, 1])]);
        let q = quotient_structure(4, &u);
        assert_eq!(q.projection.transpose().transpose().kernel_basis(), u);
        assert_eq!(&q.projection * &q.section, Matrix::identity(f, 2));
    }

    #[test]
    fn coordinates_reject_outside_vectors() {
        let f = gf2();
        let u = Basis::span(f, 3, vec![v(f, &[1, 1, 0])]);
        assert_eq!(u.coordinates(&v(f, &[1, 1, 0])), Some(v(f, &[1])));
        assert_eq!(u.coordinates(&v(f, &[1, 0, 0])), None);
    }
}
