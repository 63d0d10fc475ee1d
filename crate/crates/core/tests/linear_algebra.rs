use cdz_core::linalg::{
    kernel_basis, rat, rat_from_str, rat_int, rat_to_string, rational_reconstruct, rref, QMatrix, Rat, SpanningSet,
    Subspace,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = QMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-4i64..=4, c), r).prop_map(move |rows| {
            let rows = rows.into_iter().map(|row| row.into_iter().map(rat_int).collect()).collect();
            QMatrix::from_rows(c, rows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent_and_rank_nullity_holds(m in matrix(5, 6)) {
        let r = rref(&m);
        prop_assert_eq!(&rref(&r.reduced).reduced, &r.reduced);
        let k = kernel_basis(&m);
        prop_assert_eq!(r.rank + k.dim(), m.cols());
        for v in k.basis_vecs() {
            prop_assert!(m.mul_vec(&v).unwrap().iter().all(|x| *x == rat_int(0)));
        }
    }

    #[test]
    fn intersection_and_sum_dimensions(a in matrix(3, 5), b in matrix(3, 5)) {
        prop_assume!(a.cols() == b.cols());
        let (sa, sb) = (Subspace::row_space(&a), Subspace::row_space(&b));
        let sum = sa.sum(&sb).unwrap();
        let int = sa.intersect(&sb).unwrap();
        prop_assert_eq!(sa.dim() + sb.dim(), sum.dim() + int.dim());
        prop_assert!(int.is_subspace_of(&sa).unwrap() && int.is_subspace_of(&sb).unwrap());
        prop_assert!(sa.is_subspace_of(&sum).unwrap());
    }

    #[test]
    fn certificates_replay(m in matrix(5, 4), c in prop::collection::vec(-3i64..=3, 5)) {
        let gens = m.row_vecs();
        let set = SpanningSet::new(m.cols(), &gens).unwrap();
        let mut v = vec![rat_int(0); m.cols()];
        for (ci, g) in c.iter().zip(&gens) {
            for (x, y) in v.iter_mut().zip(g) {
                *x += rat_int(*ci) * y;
            }
        }
        let coords = set.certificate(&v).unwrap().expect("combination lies in the span");
        let mut back = vec![rat_int(0); m.cols()];
        for (ci, g) in coords.iter().zip(&gens) {
            for (x, y) in back.iter_mut().zip(g) {
                *x += ci * y;
            }
        }
        prop_assert_eq!(back, v);
    }

    #[test]
    fn reconstruction_recovers_small_fractions(p in -10_000i64..10_000, q in 1i64..100_000) {
        let x = rat(p, q);
        let noisy = &x + Rat::new(BigInt::from(1), BigInt::from(10).pow(40));
        let tol = Rat::new(BigInt::from(1), BigInt::from(10).pow(30));
        let got = rational_reconstruct(&noisy, &BigInt::from(1_000_000), &tol);
        prop_assert_eq!(got, Some(x));
    }

    #[test]
    fn rational_strings_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let x = rat(p, q);
        prop_assert_eq!(rat_from_str(&rat_to_string(&x)).unwrap(), x);
    }
}

#[test]
fn annihilator_is_orthogonal_complement() {
    let s = Subspace::row_space(&QMatrix::from_i64(&[&[1, 2, 3], &[0, 1, 1]]));
    let ann = s.annihilator();
    assert_eq!(ann.dim(), 1);
    for a in ann.basis_vecs() {
        for b in s.basis_vecs() {
            assert_eq!(cdz_core::linalg::dot(&a, &b), rat_int(0));
        }
    }
}

#[test]
fn out_of_span_has_no_certificate() {
    let set = SpanningSet::new(2, &[vec![rat_int(1), rat_int(1)]]).unwrap();
    assert!(set.certificate(&[rat_int(1), rat_int(0)]).unwrap().is_none());
}
