//! Binary and 2-adic arithmetic on integers and binomial coefficients.
//!
//! A binomial coefficient with a negative upper index `-k` stands for the
//! coefficient `C(2^L - k, n)` with `L` large. The two share a 2-adic
//! valuation, so the negative form is the canonical representation and `L`
//! never has to be chosen.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("the 2-adic valuation of 0 is infinite")]
    ZeroValuation,
    #[error("smallest 2-power is only defined for positive arguments")]
    NonPositive,
}

/// A 2-adic valuation. `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// `C(top, bottom)` where a negative `top` means `2^L + top` for large `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinomialSpec {
    pub top: i64,
    pub bottom: u64,
}

impl BinomialSpec {
    pub fn new(top: i64, bottom: u64) -> Self {
        Self { top, bottom }
    }

    pub fn nu(&self) -> Valuation {
        binom_nu(self.top, self.bottom)
    }
}

impl fmt::Display for BinomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({},{})", self.top, self.bottom)
    }
}

/// Number of ones in the binary expansion of `n`.
pub fn alpha(n: u64) -> u32 {
    n.count_ones()
}

fn alpha_wide(n: u128) -> u32 {
    n.count_ones()
}

/// Exponent of 2 in `n`.
pub fn nu(n: u64) -> Result<u32, DyadicError> {
    if n == 0 {
        return Err(DyadicError::ZeroValuation);
    }
    Ok(n.trailing_zeros())
}

/// Valuation of an arbitrary exact integer.
pub fn nu_big(n: &BigInt) -> Valuation {
    match n.magnitude().trailing_zeros() {
        Some(v) => Valuation::Finite(v as u32),
        None => Valuation::Infinite,
    }
}

/// Smallest power of two that is `>= h`.
pub fn p_pow(h: u64) -> Result<u64, DyadicError> {
    if h == 0 {
        return Err(DyadicError::NonPositive);
    }
    Ok(h.next_power_of_two())
}

/// 2-adic valuation of `C(top, bottom)` by Kummer's theorem.
///
/// For `top >= 0` this is `alpha(bottom) + alpha(top - bottom) - alpha(top)`,
/// infinite when `bottom > top`. For `top = -k` it is the valuation of
/// `C(bottom + k - 1, bottom)`.
pub fn binom_nu(top: i64, bottom: u64) -> Valuation {
    let (m, n) = if top >= 0 {
        let m = top as u128;
        if bottom as u128 > m {
            return Valuation::Infinite;
        }
        (m, bottom as u128)
    } else {
        let k = top.unsigned_abs() as u128;
        (bottom as u128 + k - 1, bottom as u128)
    };
    Valuation::Finite(alpha_wide(n) + alpha_wide(m - n) - alpha_wide(m))
}

/// Parity of `C(top, bottom)` for nonnegative arguments (Lucas): odd iff the
/// bits of `bottom` are a subset of the bits of `top`.
pub fn binom_parity(top: u64, bottom: u64) -> bool {
    bottom <= top && bottom & !top == 0
}

/// Exact `C(top, bottom)` with `C(-k, n) = (-1)^n C(n + k - 1, n)`.
pub fn exact_binom(top: i64, bottom: u64) -> BigInt {
    if top >= 0 {
        let m = top as u64;
        if bottom > m {
            return BigInt::zero();
        }
        BigInt::from(binom_unsigned(m, bottom))
    } else {
        let k = top.unsigned_abs();
        let m = bottom
            .checked_add(k - 1)
            .expect("binomial upper index overflows u64");
        let value = BigInt::from(binom_unsigned(m, bottom));
        if bottom % 2 == 1 {
            -value
        } else {
            value
        }
    }
}

/// `sum_j C(h, j) C(-M-h, M-j)` over `0 <= j <= h`. Equals `C(-M, M)`.
///
/// `|C(-M-h, M-j)| = C(2M+h-1-j, M-j)`; successive terms follow from
/// `C(n-1, k-1) = C(n, k) k / n`.
pub fn vandermonde_lhs(h: u32, m: u64) -> BigInt {
    let h = u64::from(h);
    if m == 0 {
        return BigInt::one();
    }
    let mut n = 2 * m + h - 1;
    let mut k = m;
    let mut magnitude = BigInt::from(binom_unsigned(n, k));
    let mut sum = BigInt::zero();
    for j in 0..=h.min(m) {
        let term = exact_binom(h as i64, j) * &magnitude;
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        if k > 0 {
            magnitude = magnitude * k / n;
            n -= 1;
            k -= 1;
        }
    }
    sum
}

const SMALL_BOTTOM: u64 = 48;

fn binom_unsigned(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    if k == 0 {
        return BigUint::one();
    }
    if k <= SMALL_BOTTOM {
        let mut acc = BigUint::one();
        for i in 1..=k {
            acc *= n - k + i;
            acc /= i;
        }
        return acc;
    }
    binom_by_primes(n, k)
}

// Legendre exponents over a sieve, multiplied with a balanced product tree.
fn binom_by_primes(n: u64, k: u64) -> BigUint {
    let limit = usize::try_from(n).expect("binomial too large for this platform");
    let mut composite = vec![false; limit + 1];
    let mut words: Vec<u64> = Vec::new();
    let mut word: u64 = 1;
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        let mut q = p * p;
        while q <= limit {
            composite[q] = true;
            q += p;
        }
        let p = p as u64;
        let mut exp = 0u32;
        let mut pk = p;
        loop {
            exp += (n / pk - k / pk - (n - k) / pk) as u32;
            match pk.checked_mul(p) {
                Some(next) if next <= n => pk = next,
                _ => break,
            }
        }
        for _ in 0..exp {
            match word.checked_mul(p) {
                Some(w) => word = w,
                None => {
                    words.push(word);
                    word = p;
                }
            }
        }
    }
    words.push(word);
    product_tree(words.into_iter().map(BigUint::from).collect())
}

fn product_tree(mut level: Vec<BigUint>) -> BigUint {
    if level.is_empty() {
        return BigUint::one();
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        level = next;
    }
    level.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bit_count_by_division(mut n: u64) -> u32 {
        let mut count = 0;
        while n > 0 {
            count += (n % 2) as u32;
            n /= 2;
        }
        count
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(0), 0);
        assert_eq!(alpha(58), 4);
        assert_eq!(alpha(223), bit_count_by_division(223));
        assert_eq!(alpha(223), 7);
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(1), Ok(0));
        assert_eq!(nu(40), Ok(3));
        assert_eq!(nu(3432), Ok(3));
        assert_eq!(nu(0), Err(DyadicError::ZeroValuation));
    }

    #[test]
    fn p_pow_examples() {
        assert_eq!(p_pow(1), Ok(1));
        assert_eq!(p_pow(3), Ok(4));
        assert_eq!(p_pow(4), Ok(4));
        assert_eq!(p_pow(5), Ok(8));
        assert_eq!(p_pow(0), Err(DyadicError::NonPositive));
    }

    #[test]
    fn binom_nu_examples() {
        assert_eq!(binom_nu(14, 7), Valuation::Finite(3));
        assert_eq!(binom_nu(-3, 2), Valuation::Finite(1));
        assert_eq!(binom_nu(0, 0), Valuation::Finite(0));
        assert_eq!(binom_nu(99, 0), Valuation::Finite(0));
        assert_eq!(binom_nu(-5, 0), Valuation::Finite(0));
        assert_eq!(binom_nu(3, 4), Valuation::Infinite);
        assert_eq!(BinomialSpec::new(14, 7).nu(), Valuation::Finite(3));
    }

    #[test]
    fn infinite_sorts_above_every_finite_value() {
        assert!(Valuation::Infinite > Valuation::Finite(u32::MAX));
        assert_eq!(Valuation::Infinite.finite(), None);
        assert_eq!(Valuation::Infinite.to_string(), "inf");
    }

    #[test]
    fn parity_examples() {
        assert!(binom_parity(9, 0));
        assert!(!binom_parity(2, 1));
        assert!(binom_parity(62, 30));
        assert!(!binom_parity(3, 5));
    }

    #[test]
    fn exact_binom_examples() {
        assert_eq!(exact_binom(4, 2), BigInt::from(6));
        assert_eq!(exact_binom(-3, 2), BigInt::from(6));
        assert_eq!(exact_binom(-3, 3), BigInt::from(-10));
        assert_eq!(exact_binom(14, 7), BigInt::from(3432));
        assert_eq!(exact_binom(5, 9), BigInt::zero());
        assert_eq!(nu_big(&exact_binom(62, 30)), Valuation::Finite(0));
    }

    #[test]
    fn prime_route_matches_multiplicative_route() {
        for (n, k) in [(200u64, 49u64), (200, 100), (1000, 333), (97, 50)] {
            let mut direct = BigUint::one();
            for i in 1..=k {
                direct *= n - k + i;
                direct /= i;
            }
            assert_eq!(binom_by_primes(n, k), direct, "C({n},{k})");
        }
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde_lhs(0, 6), exact_binom(-6, 6));
        assert_eq!(vandermonde_lhs(1, 3), BigInt::from(-10));
        assert_eq!(vandermonde_lhs(2, 5), exact_binom(-5, 5));
    }

    #[test]
    fn alpha_recurrences() {
        for n in 0..5000u64 {
            assert_eq!(alpha(2 * n), alpha(n));
            assert_eq!(alpha(2 * n + 1), alpha(n) + 1);
        }
    }
}
