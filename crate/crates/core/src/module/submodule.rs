use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LeftModule;
use crate::algebra::Ideal;
use crate::error::{Error, Result};
use crate::exactlin::{Basis, Matrix, Vector};

/// Largest `p^dim` for which subspaces are enumerated exhaustively
/// (covers dim 6 over GF(2) and dim 4 over GF(3)).
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100;

/// An action-stable subspace of a module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    basis: Basis,
}

impl Submodule {
    pub fn new(parent: &LeftModule, basis: Basis) -> Result<Self> {
        if basis.ambient_dim() != parent.dim() {
            return Err(Error::Dimension(
                "submodule lives in a different space".into(),
            ));
        }
        if !parent.is_stable(&basis) {
            return Err(Error::Invalid(
                "subspace is not stable under the action".into(),
            ));
        }
        Ok(Submodule { basis })
    }

    pub fn zero(parent: &LeftModule) -> Self {
        Submodule {
            basis: Basis::zero(parent.field(), parent.dim()),
        }
    }

    pub fn whole(parent: &LeftModule) -> Self {
        Submodule {
            basis: Basis::full(parent.field(), parent.dim()),
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

    /// `ambient x dim` inclusion matrix.
    pub fn inclusion(&self) -> Matrix {
        self.basis.as_columns()
    }
}

/// `{ x ∈ M | I x = 0 }`.
pub fn annihilator(m: &LeftModule, ideal: &Ideal) -> Submodule {
    let f = m.field();
    let blocks: Vec<Matrix> = ideal.basis().vectors().iter().map(|v| m.act(v)).collect();
    let basis = if blocks.is_empty() {
        Basis::full(f, m.dim())
    } else {
        Matrix::vstack_all(f, m.dim(), &blocks).kernel_basis()
    };
    debug_assert!(m.is_stable(&basis));
    Submodule { basis }
}

/// `I M`, the span of `v · m` over ideal and module basis vectors.
pub fn ideal_action_image(ideal: &Ideal, m: &LeftModule) -> Submodule {
    let f = m.field();
    let mut gens = Vec::new();
    for v in ideal.basis().vectors() {
        gens.extend(m.act(v).columns());
    }
    let basis = Basis::span(f, m.dim(), gens);
    debug_assert!(m.is_stable(&basis));
    Submodule { basis }
}

/// Submodule generated by the given vectors.
pub fn submodule_closure(m: &LeftModule, vectors: &[Vector]) -> Submodule {
    let f = m.field();
    let gens = m.algebra().generators().to_vec();
    let mut span = Basis::span(f, m.dim(), vectors.iter().cloned());
    loop {
        let mut grown = span.vectors().to_vec();
        for v in span.vectors() {
            for &g in &gens {
                grown.push(m.action(g).apply(v));
            }
        }
        let next = Basis::span(f, m.dim(), grown);
        if next.dim() == span.dim() {
            return Submodule { basis: next };
        }
        span = next;
    }
}

pub fn enumerate_submodules(m: &LeftModule, cap: usize) -> Result<Vec<Submodule>> {
    enumerate_submodules_with_budget(m, cap, DEFAULT_ENUMERATION_BUDGET)
}

/// Every submodule exactly once, in echelon order (by dimension, then pivot
/// set, then free entries).
///
/// Fails with [`Error::BudgetExceeded`] when `p^dim > budget` or more than
/// `cap` submodules exist; callers then fall back to [`sample_submodules`].
pub fn enumerate_submodules_with_budget(
    m: &LeftModule,
    cap: usize,
    budget: u64,
) -> Result<Vec<Submodule>> {
    let f = m.field();
    let p = f.order().ok_or(Error::RequiresFiniteField)?;
    let n = m.dim();
    let size = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "{p}^{n} vectors exceeds enumeration budget {budget}"
        )));
    }
    let elements = f.elements().expect("finite field");
    let gens: Vec<&Matrix> = m
        .algebra()
        .generators()
        .iter()
        .map(|&g| m.action(g))
        .collect();
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            // free slots: (row, col) with col > pivot[row] and col not a pivot
            let mut slots = Vec::new();
            for (row, &pc) in pivots.iter().enumerate() {
                for col in pc + 1..n {
                    if !pivots.contains(&col) {
                        slots.push((row, col));
                    }
                }
            }
            let mut digits = vec![0usize; slots.len()];
            loop {
                let mut rows: Vec<Vector> = pivots
                    .iter()
                    .map(|&pc| {
                        let mut v = vec![f.zero(); n];
                        v[pc] = f.one();
                        v
                    })
                    .collect();
                for (&(row, col), &d) in slots.iter().zip(&digits) {
                    rows[row][col] = elements[d].clone();
                }
                let basis = Basis::span(f, n, rows);
                let stable = basis
                    .vectors()
                    .iter()
                    .all(|v| gens.iter().all(|g| basis.contains(&g.apply(v))));
                if stable {
                    if out.len() == cap {
                        return Err(Error::BudgetExceeded(format!("more than {cap} submodules")));
                    }
                    out.push(Submodule { basis });
                }
                if !advance(&mut digits, p as usize) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Deterministic sample of submodules generated by one or two random
/// vectors; always contains `0` and `M`, without duplicates.
pub fn sample_submodules(m: &LeftModule, count: usize, seed: u64) -> Vec<Submodule> {
    let f = m.field();
    let n = m.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Submodule::zero(m), Submodule::whole(m)];
    if n == 0 {
        out.truncate(1);
        return out;
    }
    let modulus = f.order().unwrap_or(7) as i64;
    let random_vector = |rng: &mut ChaCha8Rng| -> Vector {
        (0..n)
            .map(|_| {
                f.from_i64(rng.gen_range(0..modulus) - if f.is_finite() { 0 } else { modulus / 2 })
            })
            .collect()
    };
    for _ in 0..count {
        let k = rng.gen_range(1..=2);
        let vs: Vec<Vector> = (0..k).map(|_| random_vector(&mut rng)).collect();
        let sub = submodule_closure(m, &vs);
        if !out.contains(&sub) {
            out.push(sub);
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Odometer increment in base `base`; false once it wraps around.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{element, two_sided_ideal_closure, Algebra};
    use crate::exactlin::Field;

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

    /// Independent oracle: spans of all subsets of at most `dim` vectors,
    /// filtered by stability under every basis action.
    fn brute_force_submodules(m: &LeftModule) -> HashSet<Basis> {
        let f = m.field();
        let n = m.dim();
        let vectors: Vec<Vector> = (0..(1usize << n))
            .map(|bits| {
                (0..n)
                    .map(|i| f.from_i64(((bits >> i) & 1) as i64))
                    .collect()
            })
            .collect();
        let mut found = HashSet::new();
        let mut stack = vec![(0usize, Vec::<Vector>::new())];
        while let Some((start, chosen)) = stack.pop() {
            let span = Basis::span(f, n, chosen.clone());
            if m.actions()
                .iter()
                .all(|a| span.vectors().iter().all(|v| span.contains(&a.apply(v))))
            {
                found.insert(span);
            }
            if chosen.len() == n {
                continue;
            }
            for i in start..vectors.len() {
                let mut next = chosen.clone();
                next.push(vectors[i].clone());
                stack.push((i + 1, next));
            }
        }
        found
    }

    #[test]
    fn annihilator_examples() {
        let a = t2();
        let reg = LeftModule::regular(a.clone());
        assert_eq!(annihilator(&reg, &Ideal::zero(&a)).dim(), 3);
        assert!(annihilator(&reg, &Ideal::whole(&a)).is_zero());
        let i = two_sided_ideal_closure(&a, &[element(&a, &[0, 0, 1])]);
        let ann = annihilator(&reg, &i);
        assert_eq!(
            ann.basis(),
            &Basis::span(
                a.field(),
                3,
                vec![element(&a, &[1, 0, 0]), element(&a, &[0, 1, 0])]
            )
        );
    }

    #[test]
    fn ideal_image_examples() {
        let a = t2();
        let reg = LeftModule::regular(a.clone());
        assert_eq!(ideal_action_image(&Ideal::whole(&a), &reg).dim(), 3);
        assert!(ideal_action_image(&Ideal::zero(&a), &reg).is_zero());
        let i = two_sided_ideal_closure(&a, &[element(&a, &[0, 0, 1])]);
        assert_eq!(ideal_action_image(&i, &reg).basis(), i.basis());
    }

    #[test]
    fn simple_module_has_two_submodules() {
        let a = t2();
        let subs = enumerate_submodules(&simple(&a, 2), 100).unwrap();
        assert_eq!(subs.len(), 2);
    }

    #[test]
    fn regular_t2_submodules_match_brute_force() {
        // 0, <e11>, <e11+e12>, <e12>, <e11,e12>, <e12,e22>, T2
        let a = t2();
        let reg = LeftModule::regular(a);
        let subs = enumerate_submodules(&reg, 100).unwrap();
        assert_eq!(subs.len(), 7);
        let oracle = brute_force_submodules(&reg);
        assert_eq!(oracle.len(), 7);
        assert!(subs.iter().all(|s| oracle.contains(s.basis())));
    }

    #[test]
    fn doubled_simple_includes_diagonal() {
        let a = t2();
        let s = simple(&a, 0);
        let m = s.direct_sum(&s);
        let subs = enumerate_submodules(&m, 100).unwrap();
        let f = a.field();
        let diag = Basis::span(f, 2, vec![vec![f.one(), f.one()]]);
        assert!(subs.iter().any(|s| s.basis() == &diag));
        assert_eq!(subs.len(), brute_force_submodules(&m).len());
        assert_eq!(subs.len(), 5);
    }

    #[test]
    fn budget_and_cap_are_enforced() {
        let a = t2();
        let big = LeftModule::regular(a.clone()).power(3); // dim 9 over GF(2)
        assert!(matches!(
            enumerate_submodules(&big, 10_000),
            Err(Error::BudgetExceeded(_))
        ));
        let reg = LeftModule::regular(a);
        assert!(matches!(
            enumerate_submodules(&reg, 3),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_stable() {
        let a = t2();
        let m = LeftModule::regular(a).power(2);
        let s1 = sample_submodules(&m, 40, 7);
        let s2 = sample_submodules(&m, 40, 7);
        assert_eq!(s1, s2);
        assert!(s1.iter().all(|s| m.is_stable(s.basis())));
    }
}
