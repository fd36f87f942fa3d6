use morita_core::exactlin::{subspace_ops, Basis, Field, Matrix};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::gf2()),
        Just(Field::prime(5).unwrap()),
        Just(Field::Rationals),
    ]
}

/// Small entries with a bias towards zero so ranks vary.
fn matrix(field: Field, max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        proptest::collection::vec((-3i64..=3, 1i64..=3, 0u8..3), r * c).prop_map(move |cells| {
            let mut it = cells.into_iter();
            Matrix::from_fn(field, r, c, |_, _| {
                let (n, d, z) = it.next().unwrap();
                if z == 0 {
                    field.zero()
                } else {
                    field
                        .from_fraction(n, d)
                        .unwrap_or_else(|_| field.from_i64(n))
                }
            })
        })
    })
}

fn any_matrix() -> impl Strategy<Value = Matrix> {
    field_strategy().prop_flat_map(|f| matrix(f, 6))
}

proptest! {
    #[test]
    fn rank_nullity(a in any_matrix()) {
        let k = a.kernel_basis();
        prop_assert_eq!(a.rank() + k.dim(), a.cols());
        for v in k.vectors() {
            prop_assert!(a.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn rref_is_idempotent(a in any_matrix()) {
        let (r, p) = a.rref();
        let (r2, p2) = r.rref();
        prop_assert_eq!(&r, &r2);
        prop_assert_eq!(p, p2);
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn sum_intersection_formula((a, b) in field_strategy().prop_flat_map(|f| (matrix(f, 5), matrix(f, 5)))) {
        let n = a.rows().min(b.rows());
        let u = Basis::span(a.field(), n, a.columns().into_iter().map(|c| c[..n].to_vec()));
        let v = Basis::span(a.field(), n, b.columns().into_iter().map(|c| c[..n].to_vec()));
        let s = u.sum(&v);
        let i = u.intersection(&v);
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(u.contains_subspace(&i) && v.contains_subspace(&i));
        prop_assert!(s.contains_subspace(&u) && s.contains_subspace(&v));
        let rel = subspace_ops(&u, &v);
        prop_assert_eq!(rel.sum.dim(), s.dim());
    }

    #[test]
    fn solve_round_trip(a in any_matrix(), seed in any::<u64>()) {
        let x0: Vec<_> = (0..a.cols()).map(|i| a.field().from_i64(((seed >> (i % 60)) & 3) as i64)).collect();
        let b = a.apply(&x0);
        let x = a.solve(&b);
        prop_assert!(x.is_some());
        prop_assert_eq!(a.apply(&x.unwrap()), b);
    }

    #[test]
    fn inverse_is_two_sided(a in field_strategy().prop_flat_map(|f| matrix(f, 5))) {
        if let Some(inv) = a.inverse() {
            let id = Matrix::identity(a.field(), a.rows());
            prop_assert_eq!(&(&a * &inv), &id);
            prop_assert_eq!(&(&inv * &a), &id);
        } else {
            prop_assert!(!a.is_square() || a.rank() < a.rows());
        }
    }
}
