//! Algebraic property tests for the convolution kernels.

use knap_core::{
    bounded_range_conv, naive_conv, naive_min_conv, naive_power, validate_uncertain, ExtVal,
    MaxPlusVec, UncertainSolution,
};
use proptest::prelude::*;

fn fv(vals: &[i64]) -> MaxPlusVec {
    MaxPlusVec::from_finite(vals).unwrap()
}

fn small_finite_vec() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-8i64..=8, 1..=8)
}

fn small_padded_vec() -> impl Strategy<Value = Vec<ExtVal>> {
    prop::collection::vec(
        prop_oneof![
            3 => (-8i64..=8).prop_map(ExtVal::Finite),
            1 => Just(ExtVal::NegInf),
        ],
        1..=8,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn conv_commutes(a in small_padded_vec(), b in small_padded_vec()) {
        let a = MaxPlusVec::new(a).unwrap();
        let b = MaxPlusVec::new(b).unwrap();
        prop_assert_eq!(naive_conv(&a, &b).unwrap(), naive_conv(&b, &a).unwrap());
        prop_assert_eq!(naive_min_conv(&a, &b).unwrap(), naive_min_conv(&b, &a).unwrap());
    }

    #[test]
    fn conv_associates(a in small_finite_vec(), b in small_finite_vec(), c in small_finite_vec()) {
        let (a, b, c) = (fv(&a), fv(&b), fv(&c));
        let left = naive_conv(&naive_conv(&a, &b).unwrap(), &c).unwrap();
        let right = naive_conv(&a, &naive_conv(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn constant_shift_moves_product(a in small_finite_vec(), b in small_finite_vec(), shift in -50i64..=50) {
        let shifted: Vec<i64> = a.iter().map(|&v| v + shift).collect();
        let base = naive_conv(&fv(&a), &fv(&b)).unwrap();
        let moved = naive_conv(&fv(&shifted), &fv(&b)).unwrap();
        for i in 0..base.len() {
            let want = base.get(i).checked_add(ExtVal::Finite(shift)).unwrap();
            prop_assert_eq!(moved.get(i), want);
        }
    }

    #[test]
    fn ramp_shift_moves_product_by_ramp(a in small_finite_vec(), b in small_finite_vec(), slope in -9i64..=9) {
        let ramp = |v: &[i64]| -> Vec<i64> {
            v.iter().enumerate().map(|(i, &x)| x + slope * i as i64).collect()
        };
        let base = naive_conv(&fv(&a), &fv(&b)).unwrap();
        let moved = naive_conv(&fv(&ramp(&a)), &fv(&ramp(&b))).unwrap();
        for i in 0..base.len() {
            let want = base.get(i).checked_add(ExtVal::Finite(slope * i as i64)).unwrap();
            prop_assert_eq!(moved.get(i), want);
        }
    }

    #[test]
    fn power_of_conv_splits(a in prop::collection::vec(0i64..=6, 1..=5), j in 1u64..=3, k in 1u64..=3) {
        // a^(j+k) = a^j * a^k
        let a = fv(&a);
        let left = naive_power(&a, j + k).unwrap();
        let right = naive_conv(&naive_power(&a, j).unwrap(), &naive_power(&a, k).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn bounded_matches_naive(a in small_padded_vec(), b in small_padded_vec()) {
        let shift_up = |v: Vec<ExtVal>| {
            MaxPlusVec::new(
                v.into_iter()
                    .map(|x| match x {
                        ExtVal::Finite(f) => ExtVal::Finite(f + 8),
                        other => other,
                    })
                    .collect(),
            )
            .unwrap()
        };
        let a = shift_up(a);
        let b = shift_up(b);
        prop_assert_eq!(
            bounded_range_conv(&a, &b, 16).unwrap(),
            naive_conv(&a, &b).unwrap()
        );
    }

    #[test]
    fn universal_certificates_validate_at_span(a in small_finite_vec(), b in small_finite_vec()) {
        // Universal intervals with the full value span as the error are
        // always a valid uncertain solution.
        let av = fv(&a);
        let bv = fv(&b);
        let c = naive_conv(&av, &bv).unwrap();
        let min_pair = a.iter().map(|x| x + b.iter().min().unwrap()).min().unwrap();
        let span = (c.max_finite().unwrap() - min_pair).max(0) as u64;
        let u = UncertainSolution::new(vec![(0, bv.len() as i64 - 1); av.len()], span);
        prop_assert!(validate_uncertain(&av, &bv, &u).unwrap());
    }
}
