use std::sync::Arc;

use super::{same_algebra, Bimodule, LeftModule};
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::{combine_matrices, Basis, Field, Matrix, Scalar, Vector};

/// A space of linear maps `field^source → field^target`, with a fixed basis.
///
/// Maps are flattened row-major (`f[r][c]` at `r * source + c`) and kept as
/// an echelon [`Basis`] so coordinates are read off pivot entries. A custom
/// basis (for instance homogeneous maps) can replace the echelon one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    field: Field,
    source_dim: usize,
    target_dim: usize,
    span: Basis,
    maps: Vec<Matrix>,
    /// echelon coordinates -> coordinates in `maps`, when `maps` is custom
    to_custom: Option<Matrix>,
}

fn unflatten(field: Field, rows: usize, cols: usize, v: &[Scalar]) -> Matrix {
    Matrix::from_fn(field, rows, cols, |r, c| v[r * cols + c].clone())
}

impl HomSpace {
    fn from_span(field: Field, source_dim: usize, target_dim: usize, span: Basis) -> Self {
        let maps = span
            .vectors()
            .iter()
            .map(|v| unflatten(field, target_dim, source_dim, v))
            .collect();
        HomSpace {
            field,
            source_dim,
            target_dim,
            span,
            maps,
            to_custom: None,
        }
    }

    /// Re-bases this space on the given maps, which must form a basis of it.
    pub fn with_basis(&self, maps: Vec<Matrix>) -> Result<HomSpace> {
        if maps.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "custom basis has {} maps, space has dimension {}",
                maps.len(),
                self.dim()
            )));
        }
        let mut cols = Vec::with_capacity(maps.len());
        for m in &maps {
            let c = self
                .span
                .coordinates(m.entries())
                .ok_or_else(|| Error::Invalid("custom basis map lies outside the space".into()))?;
            cols.push(c);
        }
        let change = Matrix::from_columns(self.field, self.dim(), &cols);
        let to_custom = change
            .inverse()
            .ok_or_else(|| Error::Invalid("custom maps are linearly dependent".into()))?;
        Ok(HomSpace {
            maps,
            to_custom: Some(to_custom),
            ..self.clone()
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn contains(&self, f: &Matrix) -> bool {
        f.rows() == self.target_dim
            && f.cols() == self.source_dim
            && self.span.contains(f.entries())
    }

    /// Coordinates of `f` in the basis [`HomSpace::maps`].
    pub fn coordinates(&self, f: &Matrix) -> Option<Vector> {
        assert_eq!((f.rows(), f.cols()), (self.target_dim, self.source_dim));
        let c = self.span.coordinates(f.entries())?;
        Some(match &self.to_custom {
            Some(t) => t.apply(&c),
            None => c,
        })
    }

    pub fn combination(&self, coeffs: &[Scalar]) -> Matrix {
        combine_matrices(
            self.field,
            self.target_dim,
            self.source_dim,
            coeffs,
            &self.maps,
        )
    }
}

/// Maps `f` with `f · a = b · f` for every `(a, b)` in `pairs`, optionally
/// restricted to entries where `support(row, col)` holds.
pub fn intertwiners(
    field: Field,
    source_dim: usize,
    target_dim: usize,
    pairs: &[(&Matrix, &Matrix)],
    support: Option<&dyn Fn(usize, usize) -> bool>,
) -> HomSpace {
    let (s, t) = (source_dim, target_dim);
    let n = s * t;
    let idx = |r: usize, c: usize| r * s + c;
    let mut rows: Vec<Vector> = Vec::new();
    for (a, b) in pairs {
        for r in 0..t {
            for c in 0..s {
                let mut eq = vec![field.zero(); n];
                let mut nonzero = false;
                for k in 0..s {
                    let x = &a[(k, c)];
                    if !x.is_zero() {
                        eq[idx(r, k)] += x;
                        nonzero = true;
                    }
                }
                for k in 0..t {
                    let y = &b[(r, k)];
                    if !y.is_zero() {
                        eq[idx(k, c)] -= y;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(eq);
                }
            }
        }
    }
    if let Some(support) = support {
        for r in 0..t {
            for c in 0..s {
                if !support(r, c) {
                    let mut eq = vec![field.zero(); n];
                    eq[idx(r, c)] = field.one();
                    rows.push(eq);
                }
            }
        }
    }
    let span = if rows.is_empty() {
        Basis::full(field, n)
    } else {
        Matrix::from_rows(field, n, &rows).kernel_basis()
    };
    HomSpace::from_span(field, s, t, span)
}

/// `Hom_R(M, N)` for left modules over the same algebra.
pub fn hom_space(m: &LeftModule, n: &LeftModule) -> Result<HomSpace> {
    hom_space_supported(m, n, None)
}

/// `Hom_R(M, N)` restricted to maps supported where `support(row, col)` holds.
pub fn hom_space_supported(
    m: &LeftModule,
    n: &LeftModule,
    support: Option<&dyn Fn(usize, usize) -> bool>,
) -> Result<HomSpace> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch(
            "Hom between modules over different algebras".into(),
        ));
    }
    let pairs: Vec<(&Matrix, &Matrix)> = m
        .algebra()
        .generators()
        .iter()
        .map(|&i| (m.action(i), n.action(i)))
        .collect();
    Ok(intertwiners(m.field(), m.dim(), n.dim(), &pairs, support))
}

/// `Hom_R(B, X)` for an `R-T` bimodule `B`, as a left `T`-module via
/// `(t · f)(b) = f(b · t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomModule {
    pub space: HomSpace,
    pub module: LeftModule,
}

pub fn hom_module(b: &Bimodule, x: &LeftModule) -> Result<HomModule> {
    let space = hom_space(&b.as_left(), x)?;
    HomModule::from_space(b, space)
}

impl HomModule {
    /// Builds the `T`-action on an already computed Hom space (possibly with
    /// a custom basis).
    pub fn from_space(b: &Bimodule, space: HomSpace) -> Result<HomModule> {
        let t: &Arc<Algebra> = b.right_algebra();
        let f = space.field();
        let d = space.dim();
        let mut action = Vec::with_capacity(t.dim());
        for i in 0..t.dim() {
            let rb = &b.right_actions()[i];
            let cols: Vec<Vector> = space
                .maps()
                .iter()
                .map(|h| {
                    space.coordinates(&(h * rb)).ok_or_else(|| {
                        Error::Invalid("Hom space is not stable under the right action".into())
                    })
                })
                .collect::<Result<_>>()?;
            action.push(Matrix::from_columns(f, d, &cols));
        }
        let module = LeftModule::new(t.clone(), d, action)?;
        Ok(HomModule { space, module })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The linear map with the given coordinates.
    pub fn element(&self, coords: &[Scalar]) -> Matrix {
        self.space.combination(coords)
    }

    /// Matrix of `h ↦ g ∘ h` from `self` into `target`, where `g: X → X'`.
    pub fn post_compose(&self, target: &HomModule, g: &Matrix) -> Result<Matrix> {
        let cols: Vec<Vector> = self
            .space
            .maps()
            .iter()
            .map(|h| {
                target
                    .space
                    .coordinates(&(g * h))
                    .ok_or_else(|| Error::Invalid("composite is not a module map".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(
            self.space.field(),
            target.dim(),
            &cols,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::element;
    use crate::module::Submodule;

    fn t2() -> Arc<Algebra> {
        Arc::new(Algebra::upper_triangular(Field::gf2()))
    }

    /// One-dimensional module where `e_vertex` acts as 1 and everything else as 0.
    fn simple(a: &Arc<Algebra>, vertex: usize) -> LeftModule {
        let f = a.field();
        let action = (0..3)
            .map(|i| Matrix::from_fn(f, 1, 1, |_, _| if i == vertex { f.one() } else { f.zero() }))
            .collect();
        LeftModule::new(a.clone(), 1, action).unwrap()
    }

    fn re22(a: &Arc<Algebra>) -> LeftModule {
        let reg = LeftModule::regular(a.clone());
        let span = Basis::span(
            a.field(),
            3,
            vec![element(a, &[0, 1, 0]), element(a, &[0, 0, 1])],
        );
        reg.restrict(&Submodule::new(&reg, span).unwrap())
    }

    #[test]
    fn free_module_hom_has_target_dimension() {
        let a = t2();
        let reg = LeftModule::regular(a.clone());
        for n in [simple(&a, 0), simple(&a, 2), re22(&a), reg.clone()] {
            assert_eq!(hom_space(&reg, &n).unwrap().dim(), n.dim());
        }
    }

    #[test]
    fn no_maps_between_distinct_simples() {
        let a = t2();
        assert_eq!(hom_space(&simple(&a, 0), &simple(&a, 2)).unwrap().dim(), 0);
    }

    #[test]
    fn projective_onto_simple() {
        let a = t2();
        let h = hom_space(&re22(&a), &simple(&a, 2)).unwrap();
        assert_eq!(h.dim(), 1);
        // brute force over all 2^2 linear maps GF(2)^2 -> GF(2)
        let f = a.field();
        let p = re22(&a);
        let s2 = simple(&a, 2);
        let mut count = 0;
        for bits in 0..4u8 {
            let m = Matrix::from_fn(f, 1, 2, |_, c| f.from_i64(((bits >> c) & 1) as i64));
            if (0..3).all(|i| &m * p.action(i) == s2.action(i) * &m) {
                count += 1;
            }
        }
        assert_eq!(count, 2); // 2^1 elements
    }

    #[test]
    fn hom_module_coordinates_round_trip() {
        let a = t2();
        let reg = Bimodule::regular(a.clone());
        let x = re22(&a);
        let hm = hom_module(&reg, &x).unwrap();
        assert!(hm.module.validate().is_valid());
        for (i, m) in hm.space.maps().iter().enumerate() {
            let c = hm.space.coordinates(m).unwrap();
            assert!(c.iter().enumerate().all(|(j, v)| v.is_one() == (i == j)));
        }
    }

    #[test]
    fn rejects_mixed_algebras() {
        let a = t2();
        let b = Arc::new(Algebra::ground(Field::gf2()));
        assert!(hom_space(&LeftModule::regular(a), &LeftModule::regular(b)).is_err());
    }
}
