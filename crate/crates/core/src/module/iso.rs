use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::submodule::advance;
use super::{hom_space, LeftModule};
use crate::error::Result;
use crate::exactlin::{Field, Matrix, Scalar};

/// Exhaustive search is used when `p^d` is at most this many candidates.
pub const EXHAUSTIVE_LIMIT: u64 = 4096;
/// Number of pseudorandom candidates tried otherwise.
pub const SAMPLE_COUNT: usize = 512;

/// Outcome of a search for an invertible element of a matrix space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoSearch {
    Found(Matrix),
    /// Every candidate was checked.
    ProvenNone,
    /// Only a sample was checked.
    NotFoundSampled,
}

impl IsoSearch {
    pub fn found(&self) -> Option<&Matrix> {
        match self {
            IsoSearch::Found(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, IsoSearch::Found(_))
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self, IsoSearch::NotFoundSampled)
    }
}

/// Searches `offset + Σ c_i directions[i]` (or the linear span when there is
/// no offset) for an invertible `n x n` matrix.
pub fn search_invertible(
    field: Field,
    n: usize,
    offset: Option<&Matrix>,
    directions: &[Matrix],
    seed: u64,
) -> IsoSearch {
    let d = directions.len();
    let build = |coeffs: &[Scalar]| {
        let mut m = offset
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(field, n, n));
        for (c, dir) in coeffs.iter().zip(directions) {
            if !c.is_zero() {
                m = &m + &dir.scale(c);
            }
        }
        m
    };
    if let Some(p) = field.order() {
        let total = (p as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if total <= EXHAUSTIVE_LIMIT as u128 {
            let elements = field.elements().expect("finite field");
            let mut digits = vec![0usize; d];
            loop {
                let zero_tuple = digits.iter().all(|&x| x == 0);
                if !(zero_tuple && offset.is_none()) {
                    let coeffs: Vec<Scalar> = digits.iter().map(|&x| elements[x].clone()).collect();
                    let candidate = build(&coeffs);
                    if candidate.is_invertible() {
                        return IsoSearch::Found(candidate);
                    }
                }
                if !advance(&mut digits, p as usize) {
                    return IsoSearch::ProvenNone;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLE_COUNT {
        let coeffs: Vec<Scalar> = (0..d)
            .map(|_| match field.order() {
                Some(p) => field.from_i64(rng.gen_range(0..p as i64)),
                None => field.from_i64(rng.gen_range(-3..=3)),
            })
            .collect();
        let candidate = build(&coeffs);
        if candidate.is_invertible() {
            return IsoSearch::Found(candidate);
        }
    }
    IsoSearch::NotFoundSampled
}

pub fn is_isomorphic(m: &LeftModule, n: &LeftModule) -> Result<IsoSearch> {
    is_isomorphic_with(m, n, 0)
}

/// Looks for an invertible intertwiner `M → N` under the exhaustive/sampled
/// search policy; identical modules return the identity.
pub fn is_isomorphic_with(m: &LeftModule, n: &LeftModule, seed: u64) -> Result<IsoSearch> {
    let h = hom_space(m, n)?;
    if m.dim() != n.dim() {
        return Ok(IsoSearch::ProvenNone);
    }
    if m.actions() == n.actions() {
        return Ok(IsoSearch::Found(Matrix::identity(m.field(), m.dim())));
    }
    if h.is_zero() {
        return Ok(IsoSearch::ProvenNone);
    }
    Ok(search_invertible(m.field(), m.dim(), None, h.maps(), seed))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{element, Algebra};
    use crate::exactlin::Basis;
    use crate::module::Submodule;

    fn t2() -> Arc<Algebra> {
        Arc::new(Algebra::upper_triangular(Field::gf2()))
    }

    fn simple(a: &Arc<Algebra>, vertex: usize) -> LeftModule {
        let f = a.field();
        let action = (0..3)
            .map(|i| Matrix::from_fn(f, 1, 1, |_, _| if i == vertex { f.one() } else { f.zero() }))
            .collect();
        LeftModule::new(a.clone(), 1, action).unwrap()
    }

    #[test]
    fn module_is_isomorphic_to_itself() {
        let a = t2();
        let reg = LeftModule::regular(a);
        assert_eq!(
            is_isomorphic(&reg, &reg).unwrap(),
            IsoSearch::Found(Matrix::identity(reg.field(), 3))
        );
    }

    #[test]
    fn different_dimensions_are_not_isomorphic() {
        let a = t2();
        assert_eq!(
            is_isomorphic(&LeftModule::regular(a.clone()), &simple(&a, 0)).unwrap(),
            IsoSearch::ProvenNone
        );
    }

    #[test]
    fn projective_is_not_semisimple() {
        let a = t2();
        let reg = LeftModule::regular(a.clone());
        let span = Basis::span(
            a.field(),
            3,
            vec![element(&a, &[0, 1, 0]), element(&a, &[0, 0, 1])],
        );
        let p = reg.restrict(&Submodule::new(&reg, span).unwrap());
        let ss = simple(&a, 0).direct_sum(&simple(&a, 2));
        assert_eq!(is_isomorphic(&p, &ss).unwrap(), IsoSearch::ProvenNone);
    }

    #[test]
    fn finds_nontrivial_isomorphism() {
        let a = t2();
        let m = simple(&a, 0).direct_sum(&simple(&a, 2));
        let swap = Matrix::from_ints(a.field(), &[&[0, 1], &[1, 0]]);
        let n = m.transport(&swap).unwrap();
        let found = is_isomorphic(&m, &n).unwrap();
        let g = found.found().expect("isomorphic");
        for i in 0..3 {
            assert_eq!(g * m.action(i), n.action(i) * g);
        }
    }

    #[test]
    fn rational_search_samples() {
        let q = Field::Rationals;
        let dirs = vec![
            Matrix::from_ints(q, &[&[1, 0], &[0, 0]]),
            Matrix::from_ints(q, &[&[0, 0], &[0, 1]]),
        ];
        assert!(search_invertible(q, 2, None, &dirs, 0).is_found());
        let singular = vec![Matrix::from_ints(q, &[&[1, 0], &[0, 0]])];
        assert_eq!(
            search_invertible(q, 2, None, &singular, 0),
            IsoSearch::NotFoundSampled
        );
    }
}
