use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;

use sievelab::bounds::{quantize, CountKind, CountResult, Regime};
use sievelab::counters::{chen_weight, count_n2, count_s2, count_sk, membership_s, FactorMode, Tables, Weight, Window};
use sievelab::params::{chen_feasible, richert_derive, theta_of};
use sievelab::primes::{PrimeTable, SpfTable};
use sievelab::rational::{k_for_exponent, rat, Threshold};
use sievelab::report::{read_csv, write_csv};

const LIMIT: u64 = 200_000;

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| Tables::new(PrimeTable::sieve(LIMIT + 64).unwrap(), SpfTable::new(LIMIT).unwrap()))
}

fn odd_b() -> impl Strategy<Value = u64> {
    (0u64..32).prop_map(|i| 2 * i + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sk_is_monotone(n in 1u64..LIMIT, dn in 0u64..5_000, b in odd_b(), k in 0u32..5, big_k in 0u32..8) {
        let t = tables();
        let n2 = (n + dn).min(LIMIT);
        for mode in [FactorMode::Multiplicity, FactorMode::Distinct] {
            let c = count_sk(n, b, k, big_k, mode, t).unwrap();
            prop_assert!(c <= count_sk(n2, b, k, big_k, mode, t).unwrap());
            prop_assert!(c <= count_sk(n, b, k, big_k + 1, mode, t).unwrap());
            if k > 0 {
                prop_assert!(c <= count_sk(n, b, k - 1, big_k, mode, t).unwrap());
            }
        }
        // distinct factors never outnumber factors with multiplicity
        prop_assert!(
            count_sk(n, b, k, big_k, FactorMode::Multiplicity, t).unwrap()
                <= count_sk(n, b, k, big_k, FactorMode::Distinct, t).unwrap()
        );
    }

    #[test]
    fn s2_dominates_n2(n in 10u64..LIMIT, b in odd_b(), k in 0u32..6, num in 1i128..33) {
        let t = tables();
        let zexp = rat(num, 100);
        let n2 = count_n2(n, b, k, &zexp, t).unwrap();
        prop_assert!(n2 <= count_s2(n, b, k, &zexp, t).unwrap());
        prop_assert!(count_s2(n, b, k, &zexp, t).unwrap() <= count_sk(n, b, k, 2, FactorMode::Multiplicity, t).unwrap());
    }

    #[test]
    fn threshold_floor_is_exact(n in 1u64..u64::MAX / 2, k in 0u32..20, num in 1i128..12, den in 1i128..12) {
        let e = rat(num, den);
        let Ok(t) = Threshold::reduced_power(n, k, &e) else {
            // rejected only when the power leaves the integer range
            prop_assert!((n as f64 / 2f64.powi(k as i32)).powf(num as f64 / den as f64) > 8.0e18);
            return Ok(());
        };
        // floor^den <= (n/2^k)^num < (floor+1)^den, scaled by 2^(k num) to stay integral
        let (p, q) = (*e.numer() as u32, *e.denom() as u32);
        let lhs = |x: u64| BigUint::from(x).pow(q) << (k * p) as usize;
        let rhs = BigUint::from(n).pow(p);
        prop_assert!(lhs(t.floor) <= rhs);
        prop_assert!(lhs(t.floor + 1) > rhs);
        prop_assert_eq!(t.exact, lhs(t.floor) == rhs);
        prop_assert!(t.exceeded_by(t.floor + 1) && !t.exceeded_by(t.floor));
        prop_assert_eq!(t.at_most(t.floor), t.exact);
        prop_assert_eq!(t.above(t.floor), !t.exact);
    }

    #[test]
    fn k_policy_is_the_largest_power(n in 2u64..u64::MAX, num in 1i128..10, den in 1i128..100) {
        let a = rat(num, den);
        let k = k_for_exponent(n, &a).unwrap();
        let (p, q) = (*a.numer() as u32, *a.denom() as u32);
        let pow2 = |k: u32| BigUint::from(1u8) << (k * q) as usize;
        let rhs = BigUint::from(n).pow(p);
        prop_assert!(pow2(k) <= rhs);
        prop_assert!(pow2(k + 1) > rhs);
    }

    #[test]
    fn chen_weight_is_at_most_one(n in 1u64..LIMIT, z in 2.0f64..20.0, span in 1.0f64..200.0) {
        let w = Window::from_reals(z, z + span).unwrap();
        let spf = &tables().spf;
        let weight = chen_weight(n, &w, spf).unwrap();
        prop_assert!(weight <= Weight::new(1, 1));
        let sifted = n == 1 || w.z.at_most(spf.spf(n));
        if sifted && *weight.numer() > 0 {
            prop_assert!(membership_s(n, &w, spf).unwrap(), "n = {}", n);
        }
    }

    #[test]
    fn feasible_interval_is_nonempty(num in 1i128..1_000_000) {
        let a = rat(num, 10_000_000);
        let f = chen_feasible(&a).unwrap();
        prop_assert!(!f.is_empty());
        prop_assert!(f.contains(&f.lo) && !f.contains(&f.hi));
    }

    #[test]
    fn richert_lambda_identity(k in 3u32..8, eps in 1e-4f64..0.5) {
        let r = richert_derive(k, eps).unwrap();
        prop_assert!((r.lambda_min * (k as f64 + 1.0 - r.u) - 1.0).abs() < 1e-12);
        prop_assert!((r.u * r.alpha * 3.0 - 4.0).abs() < 1e-12 && (r.v * r.alpha - 4.0).abs() < 1e-12);
        prop_assert!(r.lead_constant > 0.0 && r.lead_constant <= r.sharp_constant);
        prop_assert_eq!(r.theta, theta_of(sievelab::rational::to_f64(&r.a), eps).unwrap());
    }

    #[test]
    fn csv_round_trip(
        rows in prop::collection::vec(
            (1u64..u64::MAX, odd_b(), 0u32..64, 0usize..3, prop::option::of(0u32..9), any::<u64>(),
             prop::option::of(1e-300f64..1e300), prop::option::of(0.0f64..1e10), prop::option::of(0.0f64..1e10)),
            0..8,
        )
    ) {
        let rows: Vec<CountResult> = rows
            .into_iter()
            .map(|(n, b, k, kind, big_k, count, bound, err, ratio)| CountResult {
                n,
                b,
                k,
                kind: [CountKind::N2, CountKind::S2, CountKind::SK][kind],
                big_k,
                count,
                bound: bound.map(quantize),
                bound_err: err.map(quantize),
                ratio: ratio.map(quantize),
                regime: Regime::BeyondTheorem,
            })
            .collect();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        prop_assert_eq!(read_csv(&buf[..]).unwrap(), rows);
    }
}
