mod common;

use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

use psni::dyadic::{alpha, binom_nu, binom_parity, exact_binom, nu, BinomialSpec, Valuation};

fn carries(mut a: u64, mut b: u64) -> u32 {
    let (mut carry, mut count) = (0u64, 0u32);
    while a > 0 || b > 0 || carry > 0 {
        let s = (a & 1) + (b & 1) + carry;
        carry = s >> 1;
        count += carry as u32;
        a >>= 1;
        b >>= 1;
    }
    count
}

fn falling_binom(n: u64, k: u64) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for t in 0..k {
        num *= n - t;
        den *= t + 1;
    }
    num / den
}

proptest! {
    #[test]
    fn alpha_recurrences(n in 0u64..(1 << 62)) {
        prop_assert_eq!(alpha(2 * n), alpha(n));
        prop_assert_eq!(alpha(2 * n + 1), alpha(n) + 1);
    }

    #[test]
    fn nu_of_products(a in 1u64..(1 << 30), b in 1u64..(1 << 30)) {
        prop_assert_eq!(nu(a * b).unwrap(), nu(a).unwrap() + nu(b).unwrap());
    }

    #[test]
    fn kummer_counts_carries(m in 0u64..(1 << 40), n in 0u64..(1 << 40)) {
        let (m, n) = (m.max(n), m.min(n));
        prop_assert_eq!(binom_nu(m as i64, n), Valuation::Finite(carries(n, m - n)));
    }

    #[test]
    fn parity_iff_zero_valuation(m in 0u64..(1 << 40), n in 0u64..(1 << 40)) {
        let (m, n) = (m.max(n), m.min(n));
        prop_assert_eq!(binom_parity(m, n), binom_nu(m as i64, n) == Valuation::Finite(0));
    }

    #[test]
    fn negative_index_matches_large_power(k in 1u64..5000, n in 0u64..40, l in 20u32..40) {
        let top = (1u64 << l) - k;
        let exact = common::trailing_zeros_big(&falling_binom(top, n));
        prop_assert_eq!(binom_nu(-(k as i64), n), Valuation::Finite(exact));
    }

    #[test]
    fn exact_matches_falling_product(m in 0u64..3000, n in 0u64..3000) {
        let expected = if n > m { BigUint::ZERO } else { falling_binom(m, n.min(m - n)) };
        prop_assert_eq!(exact_binom(m as i64, n), expected.into());
    }

    #[test]
    fn exact_negative_sign(k in 1u64..200, n in 0u64..200) {
        let v = exact_binom(-(k as i64), n);
        let mag = falling_binom(n + k - 1, n);
        let expected = if n % 2 == 1 { -num_bigint::BigInt::from(mag) } else { mag.into() };
        prop_assert_eq!(v, expected);
    }
}

#[test]
fn spec_display() {
    let s = BinomialSpec::new(-3, 2);
    assert_eq!(s.nu(), Valuation::Finite(1));
    assert_eq!(Valuation::Infinite.to_string(), "inf");
    assert!(nu(0).is_err());
}
