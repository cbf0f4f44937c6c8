//! Integer lattices and Smith normal form.
//!
//! Membership of `v` in the row span of `A`: with `U A V = D` diagonal,
//! `y A = v` is solvable iff `(v V)_t` is divisible by `d_t` for every
//! pivot and vanishes past the rank.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub struct Snf {
    /// Invariant factors `d_0 | d_1 | ...`, all positive.
    pub diagonal: Vec<BigInt>,
    /// Column transform `V`, `cols x cols`.
    pub v: Vec<Vec<BigInt>>,
    pub cols: usize,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

pub fn smith_normal_form(rows: &[Vec<BigInt>], cols: usize) -> Snf {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let r = a.len();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut diagonal = Vec::new();

    let mut t = 0;
    while t < r.min(cols) {
        let Some((pi, pj)) = min_entry(&a, t, cols) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);

        let mut clean = true;
        for i in t + 1..r {
            if a[i][t].is_zero() {
                continue;
            }
            let q = &a[i][t] / &a[t][t];
            let pivot_row = a[t].clone();
            for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &q * p;
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = &a[t][j] / &a[t][t];
            sub_col(&mut a, j, t, &q);
            sub_col(&mut v, j, t, &q);
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let bad = (t + 1..r).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
        if let Some(i) = bad {
            let row_i = a[i].clone();
            for (x, y) in a[t].iter_mut().zip(&row_i) {
                *x += y;
            }
            continue;
        }
        if a[t][t].is_negative() {
            for row in v.iter_mut() {
                row[t] = -&row[t];
            }
            a[t][t] = -&a[t][t];
        }
        diagonal.push(a[t][t].clone());
        t += 1;
    }
    Snf { diagonal, v, cols }
}

fn min_entry(a: &[Vec<BigInt>], t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().take(cols).skip(t) {
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

// col_j -= q * col_t
fn sub_col(m: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let delta = q * &row[t];
        row[j] -= delta;
    }
}

/// True iff `target` lies in the integer row span of `rows`.
pub fn in_row_span(rows: &[Vec<BigInt>], target: &[BigInt]) -> bool {
    let cols = target.len();
    let snf = smith_normal_form(rows, cols);
    let w: Vec<BigInt> = (0..cols)
        .map(|j| {
            target
                .iter()
                .zip(&snf.v)
                .fold(BigInt::zero(), |acc, (x, row)| acc + x * &row[j])
        })
        .collect();
    w.iter().enumerate().all(|(t, x)| match snf.diagonal.get(t) {
        Some(d) => (x % d).is_zero(),
        None => x.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn invariant_factors_of_small_matrix() {
        // Z^2 / <(2,4),(6,8)>  =  Z/2 + Z/4
        let snf = smith_normal_form(&m(&[&[2, 4], &[6, 8]]), 2);
        assert_eq!(snf.diagonal, v(&[2, 4]));
    }

    #[test]
    fn merged_towers_group() {
        // 16a = c = 16b, 4c = 0 on generators (a, b, c)
        let rel = m(&[&[16, 0, -1], &[0, 16, -1], &[0, 0, 4]]);
        let snf = smith_normal_form(&rel, 3);
        let order: BigInt = snf.diagonal.iter().product();
        assert_eq!(order, BigInt::from(1024));
        assert!(in_row_span(&rel, &v(&[16, -16, 0])));
        assert!(!in_row_span(&rel, &v(&[16, 16, 0])));
        assert!(in_row_span(&rel, &v(&[64, 0, 0])));
        assert!(!in_row_span(&rel, &v(&[32, 0, 0])));
    }

    #[test]
    fn rank_deficient_rows() {
        let rel = m(&[&[2, 0, 0], &[4, 0, 0]]);
        assert!(in_row_span(&rel, &v(&[6, 0, 0])));
        assert!(!in_row_span(&rel, &v(&[0, 1, 0])));
        assert!(!in_row_span(&rel, &v(&[3, 0, 0])));
        assert_eq!(smith_normal_form(&rel, 3).rank(), 1);
    }

    proptest! {
        #[test]
        fn combinations_of_rows_are_members(
            entries in prop::collection::vec(-20i64..20, 12),
            coeffs in prop::collection::vec(-5i64..5, 3),
        ) {
            let rows: Vec<Vec<BigInt>> = entries.chunks(4).map(v).collect();
            let mut target = vec![BigInt::zero(); 4];
            for (row, c) in rows.iter().zip(&coeffs) {
                for (t, x) in target.iter_mut().zip(row) {
                    *t += x * c;
                }
            }
            prop_assert!(in_row_span(&rows, &target));
        }

        #[test]
        fn diagonal_divides_and_order_is_determinant(entries in prop::collection::vec(-9i64..9, 9)) {
            let rows: Vec<Vec<BigInt>> = entries.chunks(3).map(v).collect();
            let snf = smith_normal_form(&rows, 3);
            for w in snf.diagonal.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            let det = det3(&rows);
            if det.is_zero() {
                prop_assert!(snf.rank() < 3);
            } else {
                let prod: BigInt = snf.diagonal.iter().product();
                prop_assert_eq!(prod, det.abs());
            }
        }
    }

    fn det3(a: &[Vec<BigInt>]) -> BigInt {
        &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
            - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
            + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
    }
}
