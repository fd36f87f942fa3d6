use super::{same_algebra, Bimodule, LeftModule};
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::{
    kron_vectors, quotient_structure, Basis, Field, Matrix, Quotient, Scalar, Vector,
};

/// `M ⊗_R N` as a quotient of the raw product space `field^(dim M · dim N)`,
/// indexed `m * dim N + n`, by the balancing relations.
///
/// Quotient basis vectors are classes of raw pure tensors `e_m ⊗ e_n`, in
/// increasing raw index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorProduct {
    field: Field,
    left_dim: usize,
    right_dim: usize,
    relations: Basis,
    quotient: Quotient,
}

impl TensorProduct {
    /// Relations `(m · r) ⊗ n - m ⊗ (r · n)` for the given right actions on
    /// `M` and left actions on `N` of the same generators `r`.
    pub fn from_actions(
        field: Field,
        left_dim: usize,
        right_dim: usize,
        m_right: &[&Matrix],
        n_left: &[&Matrix],
    ) -> Self {
        let raw = left_dim * right_dim;
        let mut rels: Vec<Vector> = Vec::new();
        for (rm, ln) in m_right.iter().zip(n_left) {
            for i in 0..left_dim {
                let mr = rm.column(i);
                let em = crate::exactlin::unit_vector(field, left_dim, i);
                for j in 0..right_dim {
                    let en = crate::exactlin::unit_vector(field, right_dim, j);
                    let a = kron_vectors(&mr, &en);
                    let b = kron_vectors(&em, &ln.column(j));
                    let rel: Vector = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                    if rel.iter().any(|x| !x.is_zero()) {
                        rels.push(rel);
                    }
                }
            }
        }
        let relations = Basis::span(field, raw, rels);
        let quotient = quotient_structure(raw, &relations);
        TensorProduct {
            field,
            left_dim,
            right_dim,
            relations,
            quotient,
        }
    }

    pub fn dim(&self) -> usize {
        self.quotient.quotient_dim
    }

    pub fn raw_dim(&self) -> usize {
        self.left_dim * self.right_dim
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn relations(&self) -> &Basis {
        &self.relations
    }

    /// `dim tensor x raw_dim`.
    pub fn projection(&self) -> &Matrix {
        &self.quotient.projection
    }

    /// `raw_dim x dim tensor`.
    pub fn section(&self) -> &Matrix {
        &self.quotient.section
    }

    /// Class of `m ⊗ n`.
    pub fn pure(&self, m: &[Scalar], n: &[Scalar]) -> Vector {
        self.quotient.projection.apply(&kron_vectors(m, n))
    }

    /// Class of `e_i ⊗ e_j`.
    pub fn pure_basis(&self, i: usize, j: usize) -> Vector {
        self.quotient.projection.column(i * self.right_dim + j)
    }

    /// The raw pair `(i, j)` whose pure tensor represents quotient basis vector `u`.
    pub fn basis_pair(&self, u: usize) -> (usize, usize) {
        let raw = self.quotient.representatives[u];
        (raw / self.right_dim, raw % self.right_dim)
    }

    /// Descends a map on the raw product space (which must preserve the
    /// relations) to the quotient.
    pub fn descend(&self, raw_op: &Matrix) -> Matrix {
        &(&self.quotient.projection * raw_op) * &self.quotient.section
    }

    /// Matrix of `f ⊗ g` from `self` to `target`.
    pub fn map_between(&self, target: &TensorProduct, f: &Matrix, g: &Matrix) -> Matrix {
        &(&target.quotient.projection * &f.kron(g)) * &self.quotient.section
    }
}

/// `M ⊗_R N` for an `A-R` bimodule `M` and an `R-B` bimodule `N`, with the
/// induced `A-B` bimodule structure.
pub fn tensor_over(r: &Algebra, m: &Bimodule, n: &Bimodule) -> Result<(TensorProduct, Bimodule)> {
    if **m.right_algebra() != *r || **n.left_algebra() != *r {
        return Err(Error::AlgebraMismatch(
            "tensor factors are not modules over the middle algebra".into(),
        ));
    }
    tensor_bimodules(m, n)
}

/// `M ⊗ N` over the common middle algebra, as a bimodule over the outer ones.
pub fn tensor_bimodules(m: &Bimodule, n: &Bimodule) -> Result<(TensorProduct, Bimodule)> {
    if !same_algebra(m.right_algebra(), n.left_algebra()) {
        return Err(Error::AlgebraMismatch("middle algebras differ".into()));
    }
    let f = m.field();
    let middle = m.right_algebra();
    let gens = middle.generators();
    let m_right: Vec<&Matrix> = gens.iter().map(|&g| &m.right_actions()[g]).collect();
    let n_left: Vec<&Matrix> = gens.iter().map(|&g| &n.left_actions()[g]).collect();
    let tp = TensorProduct::from_actions(f, m.dim(), n.dim(), &m_right, &n_left);
    let id_m = Matrix::identity(f, m.dim());
    let id_n = Matrix::identity(f, n.dim());
    let left_action = m
        .left_actions()
        .iter()
        .map(|a| tp.descend(&a.kron(&id_n)))
        .collect();
    let right_action = n
        .right_actions()
        .iter()
        .map(|b| tp.descend(&id_m.kron(b)))
        .collect();
    let module = Bimodule::new(
        m.left_algebra().clone(),
        n.right_algebra().clone(),
        tp.dim(),
        left_action,
        right_action,
    )?;
    Ok((tp, module))
}

/// `M ⊗_R X` for an `A-R` bimodule `M` and a left `R`-module `X`, as a left `A`-module.
pub fn tensor_left(m: &Bimodule, x: &LeftModule) -> Result<(TensorProduct, LeftModule)> {
    let (tp, b) = tensor_bimodules(m, &x.to_bimodule())?;
    Ok((tp, b.as_left()))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::element;
    use crate::module::{RightModule, Submodule};

    fn t2() -> Arc<Algebra> {
        Arc::new(Algebra::upper_triangular(Field::gf2()))
    }

    #[test]
    fn regular_tensor_is_identity() {
        let a = t2();
        let x = LeftModule::regular(a.clone()).power(2);
        let (tp, fx) = tensor_left(&Bimodule::regular(a.clone()), &x).unwrap();
        assert_eq!(tp.dim(), x.dim());
        assert!(fx.validate().is_valid());
        // canonical map r ⊗ x ↦ r x is an isomorphism
        let f = a.field();
        let mut cols = Vec::new();
        for u in 0..tp.dim() {
            let (i, j) = tp.basis_pair(u);
            cols.push(x.act(&a.basis_vector(i)).column(j));
        }
        assert!(Matrix::from_columns(f, x.dim(), &cols).is_invertible());
    }

    #[test]
    fn corner_tensor_is_one_dimensional() {
        // e R ⊗_R R e with e = e22: span{e22} ⊗ span{e12, e22}
        let a = t2();
        let f = a.field();
        let e = element(&a, &[0, 0, 1]);
        let right_reg = RightModule::regular(a.clone()).to_bimodule();
        let left_reg = LeftModule::regular(a.clone());
        let er = Basis::span(f, 3, a.left_mult(&e).columns());
        let re = Basis::span(f, 3, a.right_mult(&e).columns());
        let er_mod = restrict_right(&right_reg, &er);
        let re_mod = left_reg.restrict(&Submodule::new(&left_reg, re).unwrap());
        let (tp, _) = tensor_left(&er_mod, &re_mod).unwrap();
        assert_eq!(tp.dim(), 1);
        let e22 = er.coordinates(&e).unwrap();
        let e22_left = re_mod_coords(&left_reg, &e);
        assert!(tp.pure(&e22, &e22_left).iter().any(|x| !x.is_zero()));
    }

    fn re_mod_coords(left_reg: &LeftModule, e: &[Scalar]) -> Vector {
        let f = left_reg.field();
        let a = left_reg.algebra();
        let re = Basis::span(f, 3, a.right_mult(e).columns());
        re.coordinates(e).unwrap()
    }

    fn restrict_right(b: &Bimodule, span: &Basis) -> Bimodule {
        let right = b
            .right_actions()
            .iter()
            .map(|m| crate::module::restrict_operator(m, span))
            .collect();
        let f = b.field();
        Bimodule::new(
            b.left_algebra().clone(),
            b.right_algebra().clone(),
            span.dim(),
            vec![Matrix::identity(f, span.dim())],
            right,
        )
        .unwrap()
    }

    #[test]
    fn over_the_field_is_ordinary_tensor() {
        let f = Field::prime(3).unwrap();
        let k = Arc::new(Algebra::ground(f));
        let m = LeftModule::regular(k.clone()).power(2).to_bimodule();
        let x = LeftModule::regular(k.clone()).power(3);
        // m is k-k; use it as a right k-module
        let (tp, _) = tensor_left(&m, &x).unwrap();
        assert_eq!(tp.dim(), 6);
    }

    #[test]
    fn mismatched_middle_algebra_is_rejected() {
        let a = t2();
        let k = Arc::new(Algebra::ground(Field::gf2()));
        let m = Bimodule::regular(a.clone());
        assert!(tensor_over(&k, &m, &Bimodule::regular(a)).is_err());
    }
}
