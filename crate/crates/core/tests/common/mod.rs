#![allow(dead_code)]

use rand::seq::index::sample;
use rand::Rng;

/// Random `M < 2^bits` with exactly `alpha` ones.
pub fn with_alpha<R: Rng>(rng: &mut R, alpha: u32, bits: u32) -> u64 {
    sample(rng, bits as usize, alpha as usize)
        .into_iter()
        .fold(0u64, |m, b| m | (1u64 << b))
}

/// Random `M < 2^bits` with `alpha` ones satisfying `pred`.
pub fn with_alpha_where<R: Rng>(
    rng: &mut R,
    alpha: u32,
    bits: u32,
    pred: impl Fn(u64) -> bool,
) -> u64 {
    loop {
        let m = with_alpha(rng, alpha, bits);
        if pred(m) {
            return m;
        }
    }
}

pub fn trailing_zeros_big(x: &num_bigint::BigUint) -> u32 {
    x.trailing_zeros().map_or(u32::MAX, |t| t as u32)
}
