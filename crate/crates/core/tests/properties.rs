use expodiv_core::arith::{factorize_trial, SpfTable};
use expodiv_core::constants::{
    euler_product, truncated_product_oracle, EulerParams, HalfExp, LocalFactorExpansion,
};
use expodiv_core::expfunc::{
    e_convolve, e_divisors, exp_eval, is_squarefree, ExpFunctionId, MultiplicativeFunctionSpec,
};
use expodiv_core::summatory::{build_table, build_table_segmented, FnId};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

proptest! {
    #[test]
    fn factorization_reconstructs(n in 1u64..1_000_000_000_000) {
        let f = factorize_trial(n).unwrap();
        let product: u64 = f.factors().iter().map(|&(p, a)| p.pow(a)).product();
        prop_assert_eq!(product, n);
    }

    #[test]
    fn e_divisors_share_support(n in 1u64..10_000_000) {
        let f = factorize_trial(n).unwrap();
        for d in e_divisors(&f) {
            prop_assert_eq!(n % d, 0);
            let g = factorize_trial(d).unwrap();
            prop_assert_eq!(g.omega(), f.omega());
            for (&(p, a), &(q, b)) in f.factors().iter().zip(g.factors()) {
                prop_assert_eq!(p, q);
                prop_assert_eq!(a % b, 0);
            }
        }
    }

    #[test]
    fn mu_e_inverts_one(n in 1u64..1_000_000) {
        let f = factorize_trial(n).unwrap();
        let mu_e = MultiplicativeFunctionSpec::exp(ExpFunctionId::MuE);
        let one = MultiplicativeFunctionSpec::one();
        let expected = num::BigRational::from_integer((is_squarefree(n) as i64).into());
        prop_assert_eq!(e_convolve(&mu_e, &one, &f), expected);
    }

    #[test]
    fn log_expansion_agrees_with_oracle(c2 in -0.4f64..0.4, c3 in -0.3f64..0.3) {
        let factor = LocalFactorExpansion::new(
            [(HalfExp::integer(2), c2), (HalfExp::integer(3), c3)],
            HalfExp::integer(3),
            0.0,
        ).unwrap();
        let a = euler_product(&factor, EulerParams::default()).unwrap();
        let b = truncated_product_oracle(&factor, 100_000, HalfExp::integer(3)).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error_estimate + b.error_estimate);
    }
}

#[test]
fn random_spot_checks_against_pointwise() {
    let n = 2_000_000;
    let spf = SpfTable::build(n).unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    for id in ExpFunctionId::ALL {
        let table = build_table(&FnId::Exp(id), n, &spf).unwrap();
        let segmented = build_table_segmented(&FnId::Exp(id), n, 1 << 16).unwrap();
        for _ in 0..1000 {
            let k = rng.gen_range(1..=n);
            let expected = exp_eval(id, &factorize_trial(k).unwrap()).unwrap();
            assert_eq!(table.get(k), expected, "{id} at {k}");
            assert_eq!(segmented.get(k), expected, "{id} at {k}");
        }
    }
}
