//! Degree bookkeeping with a symbolic large `L`.
//!
//! Dimensions are `pow * 2^{L+3} + c`. Duality sends `tmf^i(P^{n1} ^ P^{n2})`
//! to `tmf_{-i-2}(P_{-n1-1} ^ P_{-n2-1})`, and 8-fold periodicity moves each
//! bottom cell into `[2, 9]`; the `2^{L+3}` parts must cancel.

use std::fmt;

use super::chart::ChartKey;
use super::ObstructionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DimExpr {
    pub pow: i64,
    pub c: i64,
}

impl DimExpr {
    pub const fn lit(c: i64) -> Self {
        Self { pow: 0, c }
    }

    /// `2^{L+3} + c`.
    pub const fn big(c: i64) -> Self {
        Self { pow: 1, c }
    }

    pub fn is_literal(&self) -> bool {
        self.pow == 0
    }
}

impl fmt::Display for DimExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pow {
            0 => write!(f, "{}", self.c),
            p => {
                if p == 1 {
                    f.write_str("2^(L+3)")?;
                } else {
                    write!(f, "{p}*2^(L+3)")?;
                }
                match self.c {
                    0 => Ok(()),
                    c if c > 0 => write!(f, "+{c}"),
                    c => write!(f, "{c}"),
                }
            }
        }
    }
}

/// An axial map `P^{first} x P^{second} -> P^{target}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AxialTriple {
    pub first: DimExpr,
    pub second: DimExpr,
    pub target: DimExpr,
}

impl fmt::Display for AxialTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P^{} x P^{} -> P^{}", self.first, self.second, self.target)
    }
}

/// The axial map implied by an immersion `P^n` in `R^k`.
pub fn axial_triple(n: u64, k: u64, symmetric: bool) -> AxialTriple {
    let (n, k) = (n as i64, k as i64);
    if symmetric {
        AxialTriple {
            first: DimExpr::lit(n),
            second: DimExpr::lit(n),
            target: DimExpr::lit(k),
        }
    } else {
        AxialTriple {
            first: DimExpr::lit(n),
            second: DimExpr::big(-k - 2),
            target: DimExpr::big(-n - 2),
        }
    }
}

/// Smallest multiple of 8 strictly above the target dimension: the degree of
/// the power of `X` that vanishes in the target but not in the source.
pub fn obstruction_degree(target: DimExpr) -> DimExpr {
    DimExpr {
        pow: target.pow,
        c: 8 * (target.c.div_euclid(8) + 1),
    }
}

/// Upper index of the obstruction sum `sum C(e, i) X_1^i X_2^{e-i}`: `e`
/// itself for a literal degree, `-k` for `e = 2^L - k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub top: i64,
    pub symbolic: bool,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbolic {
            write!(f, "2^L{}", self.top)
        } else {
            write!(f, "{}", self.top)
        }
    }
}

pub fn exponent_of(degree8: DimExpr) -> Result<Exponent, ObstructionError> {
    if degree8.c.rem_euclid(8) != 0 {
        return Err(ObstructionError::Degree(format!("{degree8} is not a multiple of 8")));
    }
    match degree8.pow {
        0 => Ok(Exponent {
            top: degree8.c / 8,
            symbolic: false,
        }),
        1 => Ok(Exponent {
            top: degree8.c / 8,
            symbolic: true,
        }),
        _ => Err(ObstructionError::Degree(format!("unsupported degree {degree8}"))),
    }
}

/// Canonical chart key for `tmf^{degree8}(P^{n1} ^ P^{n2})`.
pub fn reduce_to_chart(
    degree8: DimExpr,
    n1: DimExpr,
    n2: DimExpr,
) -> Result<ChartKey, ObstructionError> {
    if degree8.c.rem_euclid(8) != 0 {
        return Err(ObstructionError::Degree(format!("{degree8} is not a multiple of 8")));
    }
    // bottom cell -n-1; the 2^{L+3} part is absorbed by a 2^L-fold shift
    let normalize = |n: DimExpr| -> (i64, i64, i64) {
        let c = -n.c - 1;
        let shifts = (2 - c).div_euclid(8) + i64::from((2 - c).rem_euclid(8) != 0);
        (c + 8 * shifts, shifts, n.pow)
    };
    let (b1, s1, p1) = normalize(n1);
    let (b2, s2, p2) = normalize(n2);
    if p1 + p2 != degree8.pow {
        return Err(ObstructionError::ResidualL {
            degree: degree8,
            n1,
            n2,
        });
    }
    Ok(ChartKey {
        bottoms: (b1, b2),
        degree: -degree8.c - 2 + 8 * (s1 + s2),
    })
}

/// Range of `i` for which `X_1^i X_2^{e-i}` can be nonzero: `X^j` vanishes
/// on `P^n` once `8j > n`.
pub fn monomial_window(
    exponent: Exponent,
    n1: DimExpr,
    n2: DimExpr,
) -> Result<(i64, i64), ObstructionError> {
    if !n1.is_literal() {
        return Err(ObstructionError::Degree(format!(
            "first factor {n1} must be literal"
        )));
    }
    let hi = n1.c.div_euclid(8);
    let lo = if exponent.symbolic {
        if n2.pow != 1 {
            return Err(ObstructionError::Degree(format!(
                "second factor {n2} must be of the form 2^(L+3)+c"
            )));
        }
        // 8(2^L + top - i) <= 2^{L+3} + c2
        let num = 8 * exponent.top - n2.c;
        num.div_euclid(8) + i64::from(num.rem_euclid(8) != 0)
    } else {
        if !n2.is_literal() {
            return Err(ObstructionError::Degree(format!(
                "second factor {n2} must be literal"
            )));
        }
        (exponent.top - n2.c.div_euclid(8)).max(0)
    };
    let hi = if exponent.symbolic { hi } else { hi.min(exponent.top) };
    Ok((lo.max(0), hi))
}
