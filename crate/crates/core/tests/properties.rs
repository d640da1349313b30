//! Randomized invariants of the arithmetic substrate and the lattice
//! operations.

use num::traits::{One, Zero};
use num::{BigInt, BigRational};
use proptest::prelude::*;

use xld_core::exact::{binomial, IntPoly};
use xld_core::lattice::{canonicalize, compose, decompose, epsilon, LatticeCtx};
use xld_core::stability::{
    hm_weight, torus_stability, MonomialSupport, WeightSupport, WeightSystem,
};

fn poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-20i64..=20, 0..8).prop_map(|v| IntPoly::from_i64s(&v))
}

fn half_integer() -> impl Strategy<Value = BigRational> {
    (-4i64..=16).prop_map(|a| BigRational::new(BigInt::from(a), BigInt::from(2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn poly_mul_commutes(a in poly(), b in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn poly_mul_associates(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }
}

proptest! {
    #[test]
    fn truncation_splits_polynomials(p in poly(), theta in half_integer()) {
        let head = p.truncate_below(&theta);
        let tail = &p - &head;
        prop_assert_eq!(&head + &tail, p.clone());
        // the tail has no exponent below the threshold
        for (m, c) in tail.coeffs().iter().enumerate() {
            if !c.is_zero() {
                prop_assert!(BigRational::from_integer(BigInt::from(m as u64)) >= theta);
            }
        }
    }

    #[test]
    fn pascal_identity(n in 1i64..40, k in 0i64..40) {
        prop_assume!(k > 0 && k < n);
        let lhs = binomial(n, k).unwrap();
        let rhs = binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_form_ignores_relation_shifts(
        raw in prop::collection::vec(-9i64..=9, 6),
        shifts in prop::collection::vec(-5i64..=5, 2),
    ) {
        // (l, d) = (3, 2): add k_i (eps_1 - eps_i) for i = 2, 3
        let ctx = LatticeCtx::new(3, 2).unwrap();
        let mut moved = raw.clone();
        for (i, &k) in shifts.iter().enumerate() {
            for j in 0..2 {
                moved[j] += k;
                moved[(i + 1) * 2 + j] -= k;
            }
        }
        prop_assert_eq!(
            canonicalize(ctx, &raw).unwrap(),
            canonicalize(ctx, &moved).unwrap()
        );
    }

    #[test]
    fn phi_is_superadditive(
        a in prop::collection::vec(-6i64..=6, 6),
        b in prop::collection::vec(-6i64..=6, 6),
    ) {
        let ctx = LatticeCtx::new(2, 3).unwrap();
        let u = canonicalize(ctx, &a).unwrap();
        let v = canonicalize(ctx, &b).unwrap();
        let sum = u.add(&v).unwrap();
        prop_assert!(sum.phi() >= u.phi() + v.phi());
    }

    #[test]
    fn phi_shifts_by_one_along_epsilon(a in prop::collection::vec(-6i64..=6, 6)) {
        let ctx = LatticeCtx::new(2, 3).unwrap();
        let u = canonicalize(ctx, &a).unwrap();
        prop_assert_eq!(u.add(&epsilon(ctx)).unwrap().phi(), u.phi() + 1);
    }

    #[test]
    fn decompose_round_trips(raw in prop::collection::vec(0i64..=6, 6)) {
        // nonnegative entries always lie in the cone
        let ctx = LatticeCtx::new(2, 3).unwrap();
        let u = canonicalize(ctx, &raw).unwrap();
        let (phi, b) = decompose(&u).unwrap();
        prop_assert_eq!(phi, u.phi());
        prop_assert!(b.iter().all(|&x| x >= 0));
        prop_assert_eq!(compose(ctx, phi, &b).unwrap(), u);
    }

    #[test]
    fn one_dimensional_stability_matches_interval_oracle(
        weights in prop::collection::vec(-7i64..=7, 1..8),
    ) {
        // in rank one the hull is the interval [min, max]: 0 lies in its
        // relative interior iff min < 0 < max or the support is {0}
        let support = WeightSupport::from_vectors(
            weights.iter().map(|&w| vec![w]).collect()
        ).unwrap();
        let verdict = torus_stability(&support).unwrap();
        let min = *weights.iter().min().unwrap();
        let max = *weights.iter().max().unwrap();
        let expect_poly = (min < 0 && max > 0) || (min == 0 && max == 0);
        let expect_semi = min <= 0 && max >= 0;
        prop_assert_eq!(verdict.polystable, expect_poly);
        prop_assert_eq!(verdict.semistable, expect_semi);
    }

    #[test]
    fn hm_weight_scales_and_shifts(
        exps in prop::collection::vec(
            prop::collection::vec(0u32..=3, 3).prop_filter("degree 3", |v| v.iter().sum::<u32>() == 3),
            1..6
        ),
        w in prop::collection::vec(-9i64..=9, 3),
        c in 1i64..=5,
    ) {
        let support = MonomialSupport::new(exps).unwrap();
        let weights = WeightSystem::from_i64s(&w);
        let base = hm_weight(&support, &weights).unwrap();

        // positive homogeneity
        let scaled = WeightSystem(
            weights.0.iter().map(|x| x * BigRational::from_integer(BigInt::from(c))).collect()
        );
        prop_assert_eq!(
            hm_weight(&support, &scaled).unwrap(),
            base.clone() * BigRational::from_integer(BigInt::from(c))
        );

        // adding a constant vector adds c * degree
        let shifted = WeightSystem(
            weights.0.iter().map(|x| x + BigRational::from_integer(BigInt::from(c))).collect()
        );
        prop_assert_eq!(
            hm_weight(&support, &shifted).unwrap(),
            base + BigRational::from_integer(BigInt::from(3 * c))
        );
    }
}

#[test]
fn truncation_complement_is_exact_on_one_case() {
    // pinned instance of the split identity
    let p = IntPoly::from_i64s(&[2, -3, 0, 7, 5]);
    let theta = BigRational::new(BigInt::from(5), BigInt::from(2));
    let head = p.truncate_below(&theta);
    assert_eq!(head, IntPoly::from_i64s(&[2, -3, 0]));
    assert_eq!(&head + &(&p - &head), p);
    assert_eq!(BigInt::one(), BigInt::one());
}
