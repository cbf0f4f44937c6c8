use std::fmt;

use super::chart::{ChartKey, ChartPortion};
use super::chartdb::ChartDb;
use super::degree::{
    axial_triple, exponent_of, monomial_window, obstruction_degree, reduce_to_chart, AxialTriple,
    DimExpr, Exponent,
};
use super::ObstructionError;
use crate::dyadic::{alpha, binom_nu, Valuation};
use crate::rules::Part11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Nonzero,
    Zero,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Nonzero => "nonzero",
            Verdict::Zero => "zero",
        })
    }
}

/// One monomial `C(e, i) X_1^i X_2^{e-i}` of an obstruction sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub index: i64,
    pub offset: i64,
    pub valuation: Valuation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub verdict: Verdict,
    /// Filtration of the evaluated element; infinite when it is zero.
    pub filtration: Valuation,
}

#[derive(Debug, Clone)]
pub struct StatementReplay {
    pub fact: (u64, u64),
    pub axial: AxialTriple,
    pub degree: DimExpr,
    pub exponent: Exponent,
    /// Monomials `X_1^i` outside `window` vanish on one of the factors.
    pub window: (i64, i64),
    pub center: i64,
    pub terms: Vec<Term>,
    pub chart: ChartKey,
    pub base_chart: ChartKey,
    pub periods: u32,
    pub mirrored: bool,
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone)]
pub struct ObstructionReport {
    pub part: Part11,
    pub m: u64,
    /// Set when `alpha(M)` is not the one the theorem requires; such
    /// reports are never nonimmersion claims.
    pub exploratory: bool,
    pub statements: Vec<StatementReplay>,
}

impl ObstructionReport {
    pub fn verdict(&self) -> Verdict {
        if self
            .statements
            .iter()
            .all(|s| s.evaluation.verdict == Verdict::Nonzero)
        {
            Verdict::Nonzero
        } else {
            Verdict::Zero
        }
    }
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "part ({}) M={} alpha(M)={}{}",
            self.part.letter(),
            self.m,
            alpha(self.m),
            if self.exploratory { " [exploratory]" } else { "" }
        )?;
        for (i, s) in self.statements.iter().enumerate() {
            writeln!(
                f,
                "statement {}: P^{} in R^{}",
                i + 1,
                s.fact.0,
                s.fact.1
            )?;
            writeln!(f, "  axial: {}", s.axial)?;
            writeln!(f, "  obstruction: X^({}) in degree {}", s.exponent, s.degree)?;
            writeln!(
                f,
                "  window: i in [{}, {}], center {}",
                s.window.0, s.window.1, s.center
            )?;
            writeln!(
                f,
                "  chart: {} (stored {}, periods {}{})",
                s.chart,
                s.base_chart,
                s.periods,
                if s.mirrored { ", mirrored" } else { "" }
            )?;
            for t in &s.terms {
                writeln!(
                    f,
                    "  term i={} offset={:+} nu={}",
                    t.index, t.offset, t.valuation
                )?;
            }
            writeln!(f, "  filtration: {}", s.evaluation.filtration)?;
            writeln!(f, "  verdict: {}", s.evaluation.verdict)?;
        }
        write!(f, "verdict: {}", self.verdict())
    }
}

/// Index `i` of the monomial drawn as the middle tower of the part's chart.
pub fn center_index(part: Part11, m: u64) -> i64 {
    let m = m as i64;
    match part {
        Part11::A | Part11::B => m,
        Part11::C => 2 * m,
        Part11::D => 4 * m,
        Part11::E => 2 * m - 1,
    }
}

fn check_alpha(part: Part11, m: u64) -> Result<(), ObstructionError> {
    let found = alpha(m);
    if found != part.required_alpha() {
        return Err(ObstructionError::WrongAlpha {
            part: part.letter(),
            m,
            expected: part.required_alpha(),
            found,
        });
    }
    Ok(())
}

struct Setup {
    fact: (u64, u64),
    axial: AxialTriple,
    degree: DimExpr,
    exponent: Exponent,
    window: (i64, i64),
    terms: Vec<Term>,
}

fn setup(part: Part11, m: u64, statement: usize) -> Result<Setup, ObstructionError> {
    let (n, k) = part.statements(m)[statement];
    if n <= 0 || k <= n {
        return Err(ObstructionError::Degree(format!(
            "part ({}) at M={m} gives no valid dimensions",
            part.letter()
        )));
    }
    let fact = (n as u64, k as u64);
    let axial = axial_triple(fact.0, fact.1, part == Part11::A);
    let degree = obstruction_degree(axial.target);
    let exponent = exponent_of(degree)?;
    let window = monomial_window(exponent, axial.first, axial.second)?;
    let center = center_index(part, m);
    let terms = (window.0..=window.1)
        .map(|i| Term {
            index: i,
            offset: i - center,
            valuation: binom_nu(exponent.top, i as u64),
        })
        .collect();
    Ok(Setup {
        fact,
        axial,
        degree,
        exponent,
        window,
        terms,
    })
}

/// Tracked monomials of the part's (first) obstruction sum with their
/// 2-adic valuations, offsets relative to [`center_index`].
pub fn obstruction_terms(part: Part11, m: u64) -> Result<Vec<Term>, ObstructionError> {
    check_alpha(part, m)?;
    Ok(setup(part, m, 0)?.terms)
}

/// Evaluates `sum 2^{v} g_offset` in the chart's group.
pub fn evaluate_sum(
    chart: &ChartPortion,
    terms: &[(i64, Valuation)],
) -> Result<Evaluation, ObstructionError> {
    let p = chart.presentation()?;
    let x = p.element(terms)?;
    let filtration = p.filtration(&x);
    Ok(Evaluation {
        verdict: if filtration.is_infinite() {
            Verdict::Zero
        } else {
            Verdict::Nonzero
        },
        filtration,
    })
}

fn replay_statement(
    part: Part11,
    m: u64,
    statement: usize,
    db: &ChartDb,
) -> Result<StatementReplay, ObstructionError> {
    let s = setup(part, m, statement)?;
    let key = reduce_to_chart(s.degree, s.axial.first, s.axial.second)?;
    let lookup = db.lookup(key.bottoms, key.degree)?;
    let offsets: Vec<i64> = s.terms.iter().map(|t| t.offset).collect();
    if offsets != lookup.portion.offsets() {
        return Err(ObstructionError::ChartMismatch {
            key,
            window: offsets,
            towers: lookup.portion.offsets(),
        });
    }
    let pairs: Vec<(i64, Valuation)> = s.terms.iter().map(|t| (t.offset, t.valuation)).collect();
    let evaluation = evaluate_sum(&lookup.portion, &pairs)?;
    Ok(StatementReplay {
        fact: s.fact,
        axial: s.axial,
        degree: s.degree,
        exponent: s.exponent,
        window: s.window,
        center: center_index(part, m),
        terms: s.terms,
        chart: key,
        base_chart: lookup.base,
        periods: lookup.periods,
        mirrored: lookup.mirrored,
        evaluation,
    })
}

fn replay_all(
    part: Part11,
    m: u64,
    db: &ChartDb,
    exploratory: bool,
) -> Result<ObstructionReport, ObstructionError> {
    let statements = (0..part.statements(m).len())
        .map(|s| replay_statement(part, m, s, db))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ObstructionReport {
        part,
        m,
        exploratory,
        statements,
    })
}

/// Replays every nonimmersion of one main-family instance.
pub fn replay_part(part: Part11, m: u64, db: &ChartDb) -> Result<ObstructionReport, ObstructionError> {
    check_alpha(part, m)?;
    replay_all(part, m, db, false)
}

/// Same computation without the `alpha(M)` precondition.
pub fn replay_part_exploratory(
    part: Part11,
    m: u64,
    db: &ChartDb,
) -> Result<ObstructionReport, ObstructionError> {
    replay_all(part, m, db, alpha(m) != part.required_alpha())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valuations(terms: &[Term], offsets: &[i64]) -> Vec<Valuation> {
        offsets
            .iter()
            .map(|o| terms.iter().find(|t| t.offset == *o).unwrap().valuation)
            .collect()
    }

    #[test]
    fn terms_examples() {
        let f = Valuation::Finite;
        let a = obstruction_terms(Part11::A, 7).unwrap();
        assert_eq!(valuations(&a, &[0]), vec![f(3)]);
        let b = obstruction_terms(Part11::B, 63).unwrap();
        assert_eq!(valuations(&b, &[-1, 0]), vec![f(5), f(6)]);
        let d = obstruction_terms(Part11::D, 511).unwrap();
        assert_eq!(valuations(&d, &[-1, 0, 1]), vec![f(10), f(9), f(9)]);
    }

    #[test]
    fn wrong_alpha() {
        assert!(matches!(
            obstruction_terms(Part11::A, 8),
            Err(ObstructionError::WrongAlpha { expected: 3, found: 1, .. })
        ));
        assert!(replay_part(Part11::C, 7, &ChartDb::builtin()).is_err());
    }

    #[test]
    fn part_a_report() {
        let r = replay_part(Part11::A, 7, &ChartDb::builtin()).unwrap();
        assert_eq!(r.verdict(), Verdict::Nonzero);
        let s = &r.statements[0];
        assert_eq!(s.fact, (65, 111));
        assert_eq!(s.chart.bottoms, (6, 6));
        assert_eq!(s.chart.degree, 30);
        // C(14,6) and C(14,8) are odd, so the outer Z/4's carry the sum in filtration 0
        assert_eq!(s.evaluation.filtration, Valuation::Finite(0));
        let middle: Vec<_> = s
            .terms
            .iter()
            .filter(|t| t.offset == 0)
            .map(|t| (t.offset, t.valuation))
            .collect();
        let chart = ChartDb::builtin().lookup((6, 6), 30).unwrap().portion;
        let e = evaluate_sum(&chart, &middle).unwrap();
        assert_eq!(e.filtration, Valuation::Finite(3));
        assert!(r.to_string().contains("verdict: nonzero"));
    }

    #[test]
    fn exploratory_flag() {
        let db = ChartDb::builtin();
        // alpha(15) = 4: not a part a instance
        let r = replay_part_exploratory(Part11::A, 15, &db).unwrap();
        assert!(r.exploratory);
        assert!(!replay_part_exploratory(Part11::A, 7, &db).unwrap().exploratory);
    }

    #[test]
    fn chart_66_30_controls() {
        let db = ChartDb::builtin();
        let d1 = db.lookup((6, 6), 30).unwrap().portion;
        let f = Valuation::Finite;
        let zero = evaluate_sum(&d1, &[(-1, f(2)), (0, f(4)), (1, f(2))]).unwrap();
        assert_eq!(zero.verdict, Verdict::Zero);
        let one = evaluate_sum(&d1, &[(0, f(3))]).unwrap();
        assert_eq!(one.verdict, Verdict::Nonzero);
    }
}
