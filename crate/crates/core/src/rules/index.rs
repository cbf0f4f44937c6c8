use std::sync::Arc;

use crate::dyadic::alpha;

use super::{Catalog, NonimmersionFact, RuleConfig, RulesError};

struct Column {
    id: Arc<str>,
    facts: Vec<NonimmersionFact>,
    direct: Vec<u64>,
    closure: Vec<u64>,
}

/// Immutable per-`n` view of an enabled catalog up to `n_max`.
///
/// Lookups panic for `n > n_max`.
pub struct FactIndex {
    n_max: u64,
    d: Vec<u64>,
    columns: Vec<Column>,
    k: Vec<u64>,
    source: Vec<Option<u16>>,
}

/// `D(n)` for every `n <= n_max`.
pub fn d_table(n_max: u64) -> Vec<u64> {
    let len = n_max as usize + 1;
    let mut d = vec![0u64; len];
    let mut m = 1u64;
    loop {
        let a = alpha(m) as u64;
        let n = 2 * (m + a - 1);
        if n > n_max {
            // n is not monotone in m, but 2m <= n, so stop once 2m passes n_max
            if 2 * m > n_max {
                break;
            }
        } else {
            let k = 4 * m - 2 * a;
            d[n as usize] = d[n as usize].max(k);
        }
        m += 1;
    }
    for i in 1..len {
        d[i] = d[i].max(d[i - 1]);
    }
    d
}

impl FactIndex {
    pub fn build(catalog: &Catalog, config: &RuleConfig, n_max: u64) -> Result<Self, RulesError> {
        config.validate(catalog)?;
        let len = n_max as usize + 1;
        let mut columns = Vec::new();
        for id in config.ordered_enabled() {
            let rule = catalog.get(id)?;
            let facts = rule.facts(n_max);
            let mut direct = vec![0u64; len];
            for f in &facts {
                let slot = &mut direct[f.n as usize];
                *slot = (*slot).max(f.k);
            }
            let mut closure = direct.clone();
            for i in 1..len {
                closure[i] = closure[i].max(closure[i - 1]);
            }
            columns.push(Column {
                id: Arc::from(id),
                facts,
                direct,
                closure,
            });
        }
        let mut k = vec![0u64; len];
        let mut source = vec![None; len];
        for n in 0..len {
            let best = columns.iter().map(|c| c.closure[n]).max().unwrap_or(0);
            k[n] = best;
            if best > 0 {
                source[n] = columns
                    .iter()
                    .position(|c| c.closure[n] == best)
                    .map(|p| p as u16);
            }
        }
        Ok(Self {
            n_max,
            d: d_table(n_max),
            columns,
            k,
            source,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn d(&self, n: u64) -> u64 {
        self.d[n as usize]
    }

    pub fn k(&self, n: u64) -> u64 {
        self.k[n as usize]
    }

    /// `(K(n), first source)`; the source is `None` only when no enabled
    /// rule has a fact at or below `n`.
    pub fn best(&self, n: u64) -> (u64, Option<&str>) {
        let n = n as usize;
        (
            self.k[n],
            self.source[n].map(|i| &*self.columns[i as usize].id),
        )
    }

    fn column(&self, id: &str) -> Option<&Column> {
        self.columns.iter().find(|c| &*c.id == id)
    }

    /// Closure value of one enabled rule at `n`.
    pub fn closure(&self, id: &str, n: u64) -> Option<u64> {
        self.column(id).map(|c| c.closure[n as usize])
    }

    /// Best `k` among the rule's facts with exactly this `n`.
    pub fn direct(&self, id: &str, n: u64) -> Option<u64> {
        self.column(id)
            .map(|c| c.direct[n as usize])
            .filter(|&k| k > 0)
    }

    pub fn facts(&self, id: &str) -> &[NonimmersionFact] {
        self.column(id).map(|c| c.facts.as_slice()).unwrap_or(&[])
    }

    pub fn all_facts(&self) -> impl Iterator<Item = &NonimmersionFact> {
        self.columns.iter().flat_map(|c| c.facts.iter())
    }

    pub fn enabled(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|c| &*c.id)
    }
}

/// All facts of one built-in rule with `n <= n_max`.
pub fn rule_facts(rule_id: &str, n_max: u64) -> Result<Vec<NonimmersionFact>, RulesError> {
    Ok(Catalog::builtin().get(rule_id)?.facts(n_max))
}

/// Nonimmersion dimension for `P^n` from the 1984 formula, closed upward.
pub fn d_of(n: u64) -> u64 {
    d_table(n)[n as usize]
}

pub fn k_of(n: u64, config: &RuleConfig) -> Result<u64, RulesError> {
    Ok(FactIndex::build(&Catalog::builtin(), config, n)?.k(n))
}

pub fn best_row(n: u64, config: &RuleConfig) -> Result<(u64, Option<String>), RulesError> {
    let idx = FactIndex::build(&Catalog::builtin(), config, n)?;
    let (k, src) = idx.best(n);
    Ok((k, src.map(str::to_string)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{R_ANN, R_DZ, R_11C};

    // max over m of 4m - 2alpha(m) with 2(m + alpha(m) - 1) <= n, by direct scan
    fn d_brute(n: u64) -> u64 {
        (1..=n)
            .filter(|&m| 2 * (m + alpha(m) as u64 - 1) <= n)
            .map(|m| 4 * m - 2 * alpha(m) as u64)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn d_matches_brute_force() {
        let table = d_table(600);
        for n in 2..=600 {
            assert_eq!(table[n as usize], d_brute(n), "n={n}");
        }
    }

    #[test]
    fn d_spot_values() {
        assert_eq!(d_of(58), 98);
        assert_eq!(d_of(59), 98);
        assert_eq!(d_of(60), 106);
        assert_eq!(d_of(61), 106);
        assert_eq!(d_of(3584), 7124);
        assert_eq!(d_of(3587), 7128);
    }

    #[test]
    fn k_spot_values() {
        let cfg = RuleConfig::default();
        assert_eq!(best_row(58, &cfg).unwrap(), (107, Some(R_DZ.to_string())));
        assert_eq!(best_row(3584, &cfg).unwrap(), (7129, Some(R_11C.to_string())));
        assert_eq!(k_of(58, &cfg).unwrap(), 107);
    }

    #[test]
    fn k_dominates_d() {
        let idx = FactIndex::build(&Catalog::builtin(), &RuleConfig::default(), 5000).unwrap();
        for n in 8..=5000 {
            assert!(idx.k(n) >= idx.d(n));
            assert!(idx.k(n) >= idx.k(n - 1));
            assert!(idx.d(n) >= idx.d(n - 1));
        }
    }

    #[test]
    fn ann_only_config_reproduces_d() {
        let idx = FactIndex::build(&Catalog::builtin(), &RuleConfig::only([R_ANN]), 5000).unwrap();
        for n in 8..=5000 {
            assert_eq!(idx.k(n), idx.d(n));
            assert_eq!(idx.best(n).1, Some(R_ANN));
        }
    }

    #[test]
    fn best_row_at_15_is_exhaustive_max() {
        let cfg = RuleConfig::default();
        let catalog = Catalog::builtin();
        let mut best = 0;
        let mut achievers = Vec::new();
        for id in cfg.ordered_enabled() {
            let k = catalog
                .get(id)
                .unwrap()
                .facts(15)
                .iter()
                .map(|f| f.k)
                .max()
                .unwrap_or(0);
            if k > best {
                best = k;
                achievers.clear();
            }
            if k == best {
                achievers.push(id.to_string());
            }
        }
        let (k, src) = best_row(15, &cfg).unwrap();
        assert_eq!(k, best);
        assert_eq!(src.as_deref(), achievers.first().map(String::as_str));
        // D(15) = 20 from m = 6 (P^14); James gives (15, 21)
        assert_eq!((k, src.as_deref()), (21, Some("R-James")));
    }

    #[test]
    fn unknown_rule() {
        assert!(matches!(
            rule_facts("R-KW", 100),
            Err(RulesError::UnknownRule(_))
        ));
    }
}
