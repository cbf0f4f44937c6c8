//! The four conditions behind the large-`alpha(M)` nonimmersions.

use std::fmt;

use super::chart::ChartKey;
use super::chartdb::ChartDb;
use super::degree::{axial_triple, exponent_of, monomial_window, obstruction_degree, reduce_to_chart};
use super::ObstructionError;
use crate::dyadic::{alpha, binom_nu, binom_parity, p_pow, Valuation};
use crate::rules::{check_13_hypothesis, Builtin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant13 {
    /// Parts (b) and (e): `alpha(M) = 4h+2`.
    Be,
    /// `alpha(M) = 4h+3`, `h` odd.
    C,
    /// `alpha(M) = 4h+1`, `h` even.
    D,
}

impl Variant13 {
    pub fn builtin(self) -> Builtin {
        match self {
            Variant13::Be => Builtin::Thm13Be,
            Variant13::C => Builtin::Thm13C,
            Variant13::D => Builtin::Thm13D,
        }
    }

    pub fn required_alpha(self, h: u64) -> u64 {
        match self {
            Variant13::Be => 4 * h + 2,
            Variant13::C => 4 * h + 3,
            Variant13::D => 4 * h + 1,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "b" | "e" | "be" => Some(Variant13::Be),
            "c" => Some(Variant13::C),
            "d" => Some(Variant13::D),
            _ => None,
        }
    }
}

impl fmt::Display for Variant13 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant13::Be => "be",
            Variant13::C => "c",
            Variant13::D => "d",
        })
    }
}

/// A monomial outside `M-h <= i <= M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OuterTerm {
    pub index: i64,
    /// Top dimension left over on the factor that kills `X^i`.
    pub residual: i64,
    /// `X^i` has order dividing `2^order_exponent` there.
    pub order_exponent: u32,
    pub valuation: Valuation,
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub struct FourConditions {
    pub variant: Variant13,
    pub h: u64,
    pub m: u64,
    pub fact: (u64, u64),
    pub top: i64,
    pub target_filtration: u32,
    pub chart: ChartKey,
    pub outer: Vec<OuterTerm>,
    pub intermediate: Vec<(i64, Valuation)>,
    /// Number of `j` with `C(h,j)` odd whose term sits exactly in the target filtration.
    pub odd_terms: usize,
    pub outer_vanish: bool,
    pub intermediate_divisible: bool,
    pub chart_nonzero: bool,
    pub odd_count: bool,
}

impl FourConditions {
    pub fn bits(&self) -> [bool; 4] {
        [
            self.outer_vanish,
            self.intermediate_divisible,
            self.chart_nonzero,
            self.odd_count,
        ]
    }

    pub fn all(&self) -> bool {
        self.bits().iter().all(|b| *b)
    }
}

impl fmt::Display for FourConditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(
            f,
            "variant {} h={} M={}: P^{} in R^{}, target filtration {}, chart {}",
            self.variant, self.h, self.m, self.fact.0, self.fact.1, self.target_filtration, self.chart
        )?;
        writeln!(f, "  (a) outer terms vanish: {}", yn(self.outer_vanish))?;
        for t in self.outer.iter().filter(|t| !t.certified) {
            writeln!(
                f,
                "      i={} order 2^{} nu={}",
                t.index, t.order_exponent, t.valuation
            )?;
        }
        writeln!(f, "  (b) intermediate divisibility: {}", yn(self.intermediate_divisible))?;
        writeln!(f, "  (c) chart nonzero: {}", yn(self.chart_nonzero))?;
        write!(
            f,
            "  (d) odd count: {} ({} terms)",
            yn(self.odd_count),
            self.odd_terms
        )
    }
}

/// Exponent `e` with `2^e X^i = 0` when `8i` is `r` below the top cell:
/// the relation `2^{4j-2} X^i = 0` for `8i` above `n - 8j`.
pub fn factor_order_exponent(residual: i64) -> u32 {
    let j = (residual + 7).div_euclid(8).max(1);
    (4 * j - 2) as u32
}

fn check_hypothesis(h: u64, m: u64, variant: Variant13) -> Result<(), ObstructionError> {
    let fail = |msg: String| Err(ObstructionError::Hypothesis(msg));
    if h == 0 {
        return fail("h must be positive".into());
    }
    let a = alpha(m) as u64;
    if a != variant.required_alpha(h) {
        return fail(format!(
            "variant {variant} with h={h} needs alpha(M) = {}, got alpha({m}) = {a}",
            variant.required_alpha(h)
        ));
    }
    match variant {
        Variant13::Be => {
            if !check_13_hypothesis(m, h).unwrap_or(false) {
                return fail(format!("h={h} exceeds the gap between the two lowest bits of M={m}"));
            }
        }
        Variant13::C | Variant13::D => {
            let parity = if variant == Variant13::C { 1 } else { 0 };
            if h % 2 != parity {
                return fail(format!("variant {variant} needs h {}", if parity == 1 { "odd" } else { "even" }));
            }
            let p = p_pow(h + 1).map_err(|e| ObstructionError::Hypothesis(e.to_string()))?;
            if m % p != 0 {
                return fail(format!("M={m} is not divisible by {p}"));
            }
        }
    }
    Ok(())
}

/// Checks conditions (a)-(d) for the first nonimmersion of the variant.
pub fn check_four_conditions(
    h: u64,
    m: u64,
    variant: Variant13,
    db: &ChartDb,
) -> Result<FourConditions, ObstructionError> {
    check_hypothesis(h, m, variant)?;
    let (_, facts) = variant.builtin().instances(m);
    let fact = *facts
        .first()
        .ok_or_else(|| ObstructionError::Hypothesis(format!("no instance at M={m}")))?;
    let axial = axial_triple(fact.0, fact.1, false);
    let degree = obstruction_degree(axial.target);
    let exponent = exponent_of(degree)?;
    let top = exponent.top;
    let window = monomial_window(exponent, axial.first, axial.second)?;
    let chart = reduce_to_chart(degree, axial.first, axial.second)?;
    let a = alpha(m);
    let target = match variant {
        Variant13::Be => a - 1,
        Variant13::C | Variant13::D => a,
    };

    let (mi, hi) = (m as i64, h as i64);
    let mut outer = Vec::new();
    let mut intermediate = Vec::new();
    for i in window.0..=window.1 {
        let valuation = binom_nu(top, i as u64);
        if (mi - hi..=mi).contains(&i) {
            intermediate.push((i, valuation));
            continue;
        }
        let residual = if i > mi {
            axial.first.c - 8 * i
        } else {
            axial.second.c - 8 * top + 8 * i
        };
        let order_exponent = factor_order_exponent(residual);
        let certified =
            order_exponent <= target || valuation >= Valuation::Finite(order_exponent);
        outer.push(OuterTerm {
            index: i,
            residual,
            order_exponent,
            valuation,
            certified,
        });
    }
    let outer_vanish = outer.iter().all(|t| t.certified);
    let intermediate_divisible = intermediate
        .iter()
        .all(|(_, v)| *v >= Valuation::Finite(target));

    let lookup = db.lookup(chart.bottoms, chart.degree)?;
    let chart_nonzero = lookup.portion.presentation()?.nonzero_in_filtration(target);

    let odd_terms = (0..=h)
        .filter(|&j| binom_parity(h, j))
        .filter(|&j| binom_nu(top, m - j) == Valuation::Finite(target))
        .count();

    Ok(FourConditions {
        variant,
        h,
        m,
        fact,
        top,
        target_filtration: target,
        chart,
        outer,
        intermediate,
        odd_terms,
        outer_vanish,
        intermediate_divisible,
        chart_nonzero,
        odd_count: odd_terms % 2 == 1,
    })
}
