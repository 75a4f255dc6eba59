//! Property-based checks of the exact kernels and float layer.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use subspectra::correlation::carry_set;
use subspectra::fixtures::rsl_substitution;
use subspectra::matrix::RatMat;
use subspectra::numerics::exponential_sum;
use subspectra::rational::{rat, Rat};
use subspectra::SigmaComputer;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn carry_set_characterizes_overflow(q in 2u64..6, p in 1u32..5, frac in 0.0f64..=1.0) {
        let qp = q.pow(p);
        let k = (frac * qp as f64) as u64;
        let set = carry_set(q, p, k).unwrap();
        for j in 0..qp {
            let inside = set.members.contains(&j);
            prop_assert_eq!(inside, j + k >= qp, "q={} p={} k={} j={}", q, p, k, j);
        }
    }

    #[test]
    fn solve_returns_an_actual_solution(
        entries in proptest::collection::vec(-5i64..=5, 9),
        x in proptest::collection::vec(-5i64..=5, 3),
    ) {
        let rows: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
        let a = RatMat::from_int_rows(&rows);
        let xr: Vec<Rat> = x.iter().map(|&v| rat(v)).collect();
        let b = a.mul_vec(&xr);
        // b is consistent by construction. solve answers only when the
        // solution is unique (full column rank), and any answer it gives
        // must actually solve the system.
        let y = a.solve(&b);
        if a.kernel().is_empty() {
            let y = y.expect("unique consistent system");
            prop_assert_eq!(a.mul_vec(&y), b);
        } else if let Some(y) = y {
            prop_assert_eq!(a.mul_vec(&y), b);
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(
        entries in proptest::collection::vec(-3i64..=3, 12),
    ) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
        let a = RatMat::from_int_rows(&rows);
        for v in a.kernel() {
            prop_assert!(v.iter().any(|x| !x.is_zero()));
            prop_assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kron_entries_factor(
        xe in proptest::collection::vec(-2i64..=2, 4),
        ye in proptest::collection::vec(-2i64..=2, 4),
    ) {
        let x = RatMat::from_int_rows(&[xe[..2].to_vec(), xe[2..].to_vec()]);
        let y = RatMat::from_int_rows(&[ye[..2].to_vec(), ye[2..].to_vec()]);
        let k = x.kron(&y);
        for i in 0..4 {
            for j in 0..4 {
                let want = &x[(i / 2, j / 2)] * &y[(i % 2, j % 2)];
                prop_assert_eq!(k[(i, j)].clone(), want);
            }
        }
    }

    #[test]
    fn exponential_sum_is_periodic_in_theta(
        signs in proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 1..64),
        theta in 0.0f64..1.0,
    ) {
        let a = exponential_sum(&signs, theta);
        let b = exponential_sum(&signs, theta + 1.0);
        prop_assert!((a - b).norm() < 1e-6 * signs.len() as f64);
    }
}

proptest! {
    // Each case walks the memoized recursion; keep the count modest.
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sigma_is_a_probability_vector_at_random_shifts(k in 0u64..100_000) {
        let s = rsl_substitution();
        let mut sigma = SigmaComputer::new(&s).unwrap();
        let v = sigma.sigma(k).unwrap();
        prop_assert!(v.iter().all(|x| !x.is_negative()));
        let total = v.iter().fold(Rat::zero(), |acc, x| acc + x.clone());
        prop_assert!(total.is_one());
    }
}
