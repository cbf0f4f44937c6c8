use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::dyadic::{alpha, p_pow};

use super::{RulesError, R_11A, R_11B, R_11C, R_11D, R_11E, R_13BE, R_13C, R_13D, R_ANN, R_DZ, R_JAMES};

/// Parameter record of a generated fact. `m` is the rule's primary parameter
/// (`M`, `m`, `e` or `n` depending on the rule); `statement` selects between
/// the two nonimmersions of a two-part theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    pub m: u64,
    pub h: Option<u64>,
    pub statement: u8,
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}", self.m)?;
        if let Some(h) = self.h {
            write!(f, ",h={h}")?;
        }
        write!(f, ",stmt={}", self.statement)
    }
}

/// `P^n` does not immerse in `R^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NonimmersionFact {
    pub n: u64,
    pub k: u64,
    pub rule_id: Arc<str>,
    pub params: Params,
}

impl fmt::Display for NonimmersionFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P^{} in R^{} ({}, {})", self.n, self.k, self.rule_id, self.params)
    }
}

/// A theorem that produces nonimmersion facts. Plugins for results not
/// encoded here implement the same contract.
pub trait FactGenerator: Send + Sync {
    fn id(&self) -> &str;
    fn source(&self) -> &str;
    /// All facts with `n <= n_max`, in a deterministic order.
    fn facts(&self, n_max: u64) -> Vec<NonimmersionFact>;
    /// Re-derives `(n, k)` from a fact's parameters.
    fn evaluate(&self, params: &Params) -> Option<(u64, u64)>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part11 {
    A,
    B,
    C,
    D,
    E,
}

impl Part11 {
    pub const ALL: [Part11; 5] = [Part11::A, Part11::B, Part11::C, Part11::D, Part11::E];

    /// The value `alpha(M)` the part requires.
    pub fn required_alpha(self) -> u32 {
        match self {
            Part11::A => 3,
            Part11::B => 6,
            Part11::C => 7,
            Part11::D => 9,
            Part11::E => 10,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Part11::A => 'a',
            Part11::B => 'b',
            Part11::C => 'c',
            Part11::D => 'd',
            Part11::E => 'e',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.letter() == c)
    }

    pub fn rule_id(self) -> &'static str {
        match self {
            Part11::A => R_11A,
            Part11::B => R_11B,
            Part11::C => R_11C,
            Part11::D => R_11D,
            Part11::E => R_11E,
        }
    }

    /// The nonimmersions `(n, k)` asserted for `M`, ignoring the alpha
    /// condition.
    pub fn statements(self, m: u64) -> Vec<(i128, i128)> {
        let m = m as i128;
        match self {
            Part11::A => vec![(8 * m + 9, 16 * m - 1)],
            Part11::B => vec![(8 * m + 9, 16 * m - 11)],
            Part11::C => vec![(16 * m + 16, 32 * m - 7), (16 * m + 17, 32 * m - 6)],
            Part11::D => vec![(32 * m + 25, 64 * m - 4), (32 * m + 26, 64 * m - 3)],
            Part11::E => vec![(16 * m + 17, 32 * m - 20), (16 * m + 18, 32 * m - 19)],
        }
    }
}

/// True iff `h <= 2^{e1} - 2^{e0}`, where `e0 < e1` are the positions of the
/// two lowest set bits of `M`.
pub fn check_13_hypothesis(m: u64, h: u64) -> Result<bool, RulesError> {
    if alpha(m) < 2 {
        return Err(RulesError::TooFewBits(m));
    }
    let e0 = m.trailing_zeros();
    let rest = m & (m - 1);
    let e1 = rest.trailing_zeros();
    Ok(h <= (1u64 << e1) - (1u64 << e0))
}

/// The theorems this crate encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `P^{2(m+alpha(m)-1)}` does not immerse in `R^{4m-2alpha(m)}`.
    Ann,
    /// `P^{2^e-1}` in dimension `2^{e+1}-2e-c_e`, `c_e = 3,2,2,4` for `e = 0,1,2,3 mod 4`.
    James,
    /// `alpha(n) = 4`, `n = 10 mod 16`: `P^n` in `R^{2n-9}`.
    Dz,
    Thm11(Part11),
    /// Large-alpha extension of parts (b) and (e).
    Thm13Be,
    /// Large-alpha extension of part (c).
    Thm13C,
    /// Large-alpha extension of part (d).
    Thm13D,
}

impl Builtin {
    pub const ALL: [Builtin; 11] = [
        Builtin::James,
        Builtin::Ann,
        Builtin::Dz,
        Builtin::Thm11(Part11::A),
        Builtin::Thm11(Part11::B),
        Builtin::Thm11(Part11::C),
        Builtin::Thm11(Part11::D),
        Builtin::Thm11(Part11::E),
        Builtin::Thm13Be,
        Builtin::Thm13C,
        Builtin::Thm13D,
    ];

    pub fn rule_id(self) -> &'static str {
        match self {
            Builtin::Ann => R_ANN,
            Builtin::James => R_JAMES,
            Builtin::Dz => R_DZ,
            Builtin::Thm11(p) => p.rule_id(),
            Builtin::Thm13Be => R_13BE,
            Builtin::Thm13C => R_13C,
            Builtin::Thm13D => R_13D,
        }
    }

    /// Facts for one value of the primary parameter, with `h` where used.
    pub fn instances(self, m: u64) -> (Option<u64>, Vec<(u64, u64)>) {
        let a = alpha(m);
        let raw: (Option<u64>, Vec<(i128, i128)>) = match self {
            Builtin::Ann => {
                if m == 0 {
                    (None, vec![])
                } else {
                    let m = m as i128;
                    let a = a as i128;
                    (None, vec![(2 * (m + a - 1), 4 * m - 2 * a)])
                }
            }
            Builtin::James => {
                if m < 4 || m > 62 {
                    (None, vec![])
                } else {
                    let c = [3, 2, 2, 4][(m % 4) as usize];
                    let p = 1i128 << m;
                    (None, vec![(p - 1, 2 * p - 2 * m as i128 - c)])
                }
            }
            Builtin::Dz => {
                if a == 4 && m % 16 == 10 {
                    (None, vec![(m as i128, 2 * m as i128 - 9)])
                } else {
                    (None, vec![])
                }
            }
            Builtin::Thm11(part) => {
                if a == part.required_alpha() {
                    (None, part.statements(m))
                } else {
                    (None, vec![])
                }
            }
            Builtin::Thm13Be => {
                if a >= 6 && a % 4 == 2 {
                    let h = ((a - 2) / 4) as u64;
                    if check_13_hypothesis(m, h).unwrap_or(false) {
                        let (mm, hh) = (m as i128, h as i128);
                        let facts = if h % 2 == 1 {
                            vec![(8 * mm + 8 * hh + 1, 16 * mm - 8 * hh - 3)]
                        } else {
                            vec![
                                (8 * mm + 8 * hh + 1, 16 * mm - 8 * hh - 4),
                                (8 * mm + 8 * hh + 2, 16 * mm - 8 * hh - 3),
                            ]
                        };
                        (Some(h), facts)
                    } else {
                        (None, vec![])
                    }
                } else {
                    (None, vec![])
                }
            }
            Builtin::Thm13C => {
                if a >= 7 && a % 4 == 3 {
                    let h = ((a - 3) / 4) as u64;
                    if h % 2 == 1 && m % p_pow(h + 1).unwrap() == 0 {
                        let (mm, hh) = (m as i128, h as i128);
                        (
                            Some(h),
                            vec![
                                (8 * mm + 8 * hh + 8, 16 * mm - 8 * hh + 1),
                                (8 * mm + 8 * hh + 9, 16 * mm - 8 * hh + 2),
                            ],
                        )
                    } else {
                        (None, vec![])
                    }
                } else {
                    (None, vec![])
                }
            }
            Builtin::Thm13D => {
                if a >= 9 && a % 4 == 1 {
                    let h = ((a - 1) / 4) as u64;
                    if h % 2 == 0 && m % p_pow(h + 1).unwrap() == 0 {
                        let (mm, hh) = (m as i128, h as i128);
                        (
                            Some(h),
                            vec![
                                (8 * mm + 8 * hh + 9, 16 * mm - 8 * hh + 12),
                                (8 * mm + 8 * hh + 10, 16 * mm - 8 * hh + 13),
                            ],
                        )
                    } else {
                        (None, vec![])
                    }
                } else {
                    (None, vec![])
                }
            }
        };
        let facts = raw
            .1
            .into_iter()
            .filter(|&(n, k)| n > 0 && k > n && k <= u64::MAX as i128)
            .map(|(n, k)| (n as u64, k as u64))
            .collect();
        (raw.0, facts)
    }

    // Every template has n >= m (n >= 8M+1 for the theorem families, n = m
    // for R-DZ, n = 2^e - 1 > e for R-James), so m <= n_max suffices.
    fn param_bound(self, n_max: u64) -> u64 {
        match self {
            Builtin::James => 62.min(64 - n_max.leading_zeros() as u64),
            Builtin::Ann => n_max / 2 + 1,
            _ => n_max,
        }
    }
}

impl FactGenerator for Builtin {
    fn id(&self) -> &str {
        self.rule_id()
    }

    fn source(&self) -> &str {
        match self {
            Builtin::Ann => "Davis, Annals 1984",
            Builtin::James => "James",
            Builtin::Dz => "Davis-Zelubowski",
            Builtin::Thm11(_) => "tmf nonimmersions, odd-dimensional factors",
            Builtin::Thm13Be | Builtin::Thm13C | Builtin::Thm13D => {
                "tmf nonimmersions, large alpha(M)"
            }
        }
    }

    fn facts(&self, n_max: u64) -> Vec<NonimmersionFact> {
        let id: Arc<str> = Arc::from(self.rule_id());
        let mut out = Vec::new();
        for m in 1..=self.param_bound(n_max) {
            let (h, facts) = self.instances(m);
            for (statement, (n, k)) in facts.into_iter().enumerate() {
                if n <= n_max {
                    out.push(NonimmersionFact {
                        n,
                        k,
                        rule_id: Arc::clone(&id),
                        params: Params {
                            m,
                            h,
                            statement: statement as u8,
                        },
                    });
                }
            }
        }
        out
    }

    fn evaluate(&self, params: &Params) -> Option<(u64, u64)> {
        let (h, facts) = self.instances(params.m);
        if h != params.h {
            return None;
        }
        facts.get(params.statement as usize).copied()
    }
}

pub fn builtin_rules() -> Vec<Arc<dyn FactGenerator>> {
    Builtin::ALL
        .into_iter()
        .map(|b| Arc::new(b) as Arc<dyn FactGenerator>)
        .collect()
}

/// Every rule available for configuration, keyed by id.
#[derive(Clone)]
pub struct Catalog {
    rules: BTreeMap<String, Arc<dyn FactGenerator>>,
}

impl Catalog {
    pub fn builtin() -> Self {
        let mut rules = BTreeMap::new();
        for r in builtin_rules() {
            rules.insert(r.id().to_string(), r);
        }
        Self { rules }
    }

    /// Adds a rule that is not built in (e.g. a KW or BDM family).
    pub fn register(&mut self, rule: Arc<dyn FactGenerator>) -> Result<(), RulesError> {
        let id = rule.id().to_string();
        if self.rules.contains_key(&id) {
            return Err(RulesError::DuplicateRule(id));
        }
        self.rules.insert(id, rule);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&Arc<dyn FactGenerator>, RulesError> {
        self.rules
            .get(id)
            .ok_or_else(|| RulesError::UnknownRule(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.rules.contains_key(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.rules.keys().map(String::as_str)
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Self::builtin()
    }
}

impl fmt::Debug for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rules.keys()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn facts_of(b: Builtin, n_max: u64) -> Vec<(u64, u64)> {
        b.facts(n_max).into_iter().map(|f| (f.n, f.k)).collect()
    }

    #[test]
    fn smallest_theorem_a_instance() {
        let facts = facts_of(Builtin::Thm11(Part11::A), 120);
        assert_eq!(facts, vec![(65, 111), (97, 175), (113, 207)]);
    }

    #[test]
    fn dz_at_58() {
        assert!(facts_of(Builtin::Dz, 100).contains(&(58, 107)));
    }

    #[test]
    fn james_first_instance() {
        let facts = facts_of(Builtin::James, 100);
        assert_eq!(facts[0], (15, 21));
        // e = 5, 6: c = 2, 2
        assert_eq!(&facts[1..], &[(31, 52), (63, 114)]);
    }

    #[test]
    fn hypothesis_examples() {
        assert!(check_13_hypothesis(63, 1).unwrap());
        assert!(!check_13_hypothesis(63, 2).unwrap());
        assert!(check_13_hypothesis(12, 2).unwrap());
        assert!(matches!(
            check_13_hypothesis(8, 1),
            Err(RulesError::TooFewBits(8))
        ));
    }

    #[test]
    fn evaluate_reproduces_every_fact() {
        for b in Builtin::ALL {
            for f in b.facts(20_000) {
                assert_eq!(b.evaluate(&f.params), Some((f.n, f.k)), "{} {}", f.rule_id, f.params);
                assert!(f.k > f.n);
            }
        }
    }

    #[test]
    fn theorem_a_facts_are_one_mod_eight() {
        assert!(Builtin::Thm11(Part11::A)
            .facts(49_151)
            .iter()
            .all(|f| f.n % 8 == 1));
        assert!(Builtin::Thm11(Part11::C)
            .facts(49_151)
            .iter()
            .all(|f| f.n % 16 == f.params.statement as u64));
    }

    #[test]
    fn duplicate_registration_rejected() {
        let mut c = Catalog::builtin();
        assert!(c.register(Arc::new(Builtin::Dz)).is_err());
    }
}
