use num_bigint::{BigInt, BigUint, Sign};
use proptest::prelude::*;

use trimult::closedform::{build_residue_forms, eval_at};
use trimult::exactmath::{isqrt, BigRat, QuadElem};
use trimult::oracle::{self, triangular, xi_for_t, SolutionScanner};
use trimult::params::known_params;
use trimult::recurrence::{build_spec, term_at, SequenceKind};

const FIELDS: [i64; 7] = [2, 3, 5, 6, 7, 10, 13];
const KNOWN_K: [u64; 6] = [2, 3, 5, 8, 10, 13];

fn rat() -> impl Strategy<Value = BigRat> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| BigRat::new(n.into(), d.into()).unwrap())
}

fn quad_in(d: i64) -> impl Strategy<Value = QuadElem> {
    (rat(), rat()).prop_map(move |(p, q)| QuadElem::new(p, q, d.into()).unwrap())
}

fn quad_pair() -> impl Strategy<Value = (QuadElem, QuadElem)> {
    prop::sample::select(FIELDS.to_vec()).prop_flat_map(|d| (quad_in(d), quad_in(d)))
}

/// `y / conj(y)` always has norm one.
fn norm_one() -> impl Strategy<Value = QuadElem> {
    prop::sample::select(FIELDS.to_vec())
        .prop_flat_map(|d| (1i64..=9, 1i64..=9).prop_map(move |(a, b)| (a, b, d)))
        .prop_map(|(a, b, d)| {
            let y = QuadElem::from_ints(a, b, d).unwrap();
            y.div(&y.conj()).unwrap()
        })
}

fn naive_pow(x: &QuadElem, e: u64) -> QuadElem {
    (0..e).fold(QuadElem::one(x.d()), |acc, _| acc.mul(x).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pow_is_additive_on_norm_one(x in norm_one(), a in 0u64..=64, b in 0u64..=64) {
        prop_assert_eq!(x.norm(), BigRat::one());
        prop_assert_eq!(x.pow(a).mul(&x.pow(b)).unwrap(), x.pow(a + b));
    }

    #[test]
    fn norm_is_multiplicative((x, y) in quad_pair()) {
        prop_assert_eq!(x.mul(&y).unwrap().norm(), &x.norm() * &y.norm());
    }

    #[test]
    fn pow_matches_repeated_multiplication((x, _) in quad_pair(), e in 0u64..=32) {
        prop_assert_eq!(x.pow(e), naive_pow(&x, e));
    }

    #[test]
    fn isqrt_brackets_512_bit_inputs(bytes in prop::collection::vec(any::<u8>(), 64)) {
        let n = BigInt::from_bytes_be(Sign::Plus, &bytes);
        let (root, exact) = isqrt(&n).unwrap();
        prop_assert!(&root * &root <= n);
        let next = &root + 1;
        prop_assert!(n < &next * &next);
        prop_assert_eq!(exact, &root * &root == n);
    }

    #[test]
    fn oracle_is_exhaustive(k in 2u64..=60, t_max in 1u64..=20_000) {
        prop_assume!(!oracle::is_square(k));
        let wheel: Vec<u64> = SolutionScanner::new(k, t_max)
            .map(|s| {
                assert!(s.satisfies(k));
                s.t_u64().unwrap()
            })
            .collect();
        prop_assert!(wheel.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(&wheel, &oracle::linear_scan(k, t_max));
    }

    #[test]
    fn xi_for_t_agrees_with_the_scan(k in 2u64..=40, t in 0u64..=5_000) {
        prop_assume!(!oracle::is_square(k));
        let listed = SolutionScanner::new(k, t).any(|s| s.t_u64() == Some(t));
        prop_assert_eq!(xi_for_t(k, &BigUint::from(t)).is_some(), listed);
    }

    #[test]
    fn triangular_reflects(t in 1i64..1000) {
        prop_assert_eq!(triangular(&BigInt::from(-t)), triangular(&BigInt::from(t - 1)));
    }

    #[test]
    fn closed_form_matches_recurrence(
        k in prop::sample::select(KNOWN_K.to_vec()),
        kind in prop::sample::select(SequenceKind::ALL.to_vec()),
        n in 0u64..=200,
    ) {
        let p = known_params(k).unwrap();
        let forms = build_residue_forms(&p, kind).unwrap();
        let spec = build_spec(&p, kind).unwrap();
        prop_assert_eq!(eval_at(&forms, n).unwrap(), term_at(&spec, n as usize));
    }

    #[test]
    fn closed_form_value_identity(k in prop::sample::select(KNOWN_K.to_vec()), n in 0u64..=200) {
        let p = known_params(k).unwrap();
        let tt = eval_at(&build_residue_forms(&p, SequenceKind::TValue).unwrap(), n).unwrap();
        let txi = eval_at(&build_residue_forms(&p, SequenceKind::XiValue).unwrap(), n).unwrap();
        prop_assert_eq!(txi, tt * k);
    }
}
