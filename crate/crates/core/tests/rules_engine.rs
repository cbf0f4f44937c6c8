use std::collections::BTreeSet;
use std::sync::Arc;

use psni::dyadic::alpha;
use psni::rules::{
    best_row, d_of, Builtin, Catalog, FactGenerator, FactIndex, NonimmersionFact, Params, Part11,
    RuleConfig, RulesError, DEFAULT_PRECEDENCE, R_11B, R_11C, R_13BE, R_13C, R_ANN, R_DZ, R_JAMES,
};

fn brute_d(n: u64) -> u64 {
    (1..=n)
        .filter(|&m| 2 * (m + alpha(m) as u64 - 1) <= n)
        .map(|m| 4 * m - 2 * alpha(m) as u64)
        .max()
        .unwrap_or(0)
}

#[test]
fn d_matches_brute_force() {
    let index = FactIndex::build(&Catalog::builtin(), &RuleConfig::only([R_ANN]), 2000).unwrap();
    for n in 0..=2000 {
        assert_eq!(index.d(n), brute_d(n), "n = {n}");
    }
    // m = 1 gives (2, 2), which is not a fact since k <= n
    for n in 4..=2000 {
        assert_eq!(index.k(n), index.d(n), "Ann-only K(n) must equal D(n) at {n}");
    }
    assert_eq!(d_of(3587), 7128);
}

#[test]
fn k_is_monotone_and_dominates_d() {
    let index = FactIndex::build(&Catalog::builtin(), &RuleConfig::default(), 20000).unwrap();
    for n in 1..=20000 {
        assert!(index.k(n) >= index.k(n - 1));
        if n >= 4 {
            assert!(index.k(n) >= index.d(n));
        }
    }
}

#[test]
fn precedence_breaks_ties() {
    let cfg = RuleConfig::default();
    assert_eq!(best_row(58, &cfg).unwrap(), (107, Some(R_DZ.to_string())));
    assert_eq!(best_row(15, &cfg).unwrap(), (21, Some(R_JAMES.to_string())));
    // the h = 1 case of R-1.3c restates the same fact, so reversing precedence moves the source
    let catalog = Catalog::builtin();
    let text = format!("precedence={}\n", {
        let mut ids: Vec<&str> = DEFAULT_PRECEDENCE.to_vec();
        ids.reverse();
        ids.join(",")
    });
    let rev = RuleConfig::parse(&text, &catalog).unwrap();
    assert_eq!(best_row(3584, &rev).unwrap(), (7129, Some(R_13C.to_string())));
    assert_eq!(best_row(3584, &cfg).unwrap(), (7129, Some(R_11C.to_string())));
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rules.conf");
    std::fs::write(&path, "# theorem rules only\nenable.R-Ann=false\nenable.R-James=false\nenable.R-DZ=false\n").unwrap();
    let catalog = Catalog::builtin();
    let cfg = RuleConfig::load(&path, &catalog).unwrap();
    assert!(!cfg.is_enabled(R_ANN));
    let index = FactIndex::build(&catalog, &cfg, 200).unwrap();
    assert_eq!(index.best(113), (207, Some("R-1.1a")));
    assert!(matches!(
        RuleConfig::load(&dir.path().join("missing"), &catalog),
        Err(RulesError::Io(_))
    ));
    assert!(matches!(
        RuleConfig::parse("enable.R-Zzz=true", &catalog),
        Err(RulesError::UnknownRule(_) | RulesError::Config { .. })
    ));
}

#[test]
fn extension_specializes_to_theorem_11() {
    let n_max = 1 << 20;
    let pairs = |id: &str| -> BTreeSet<(u64, u64)> {
        Catalog::builtin()
            .get(id)
            .unwrap()
            .facts(n_max)
            .iter()
            .map(|f| (f.n, f.k))
            .collect()
    };
    let b11 = pairs(R_11B);
    let c11 = pairs(R_11C);
    let be = Catalog::builtin().get(R_13BE).unwrap().facts(n_max);
    let h1: Vec<_> = be.iter().filter(|f| f.params.h == Some(1)).collect();
    assert!(!h1.is_empty());
    for f in h1 {
        assert!(b11.contains(&(f.n, f.k)), "{f}");
    }
    for f in Catalog::builtin().get(R_13C).unwrap().facts(n_max) {
        if f.params.h == Some(1) {
            assert!(c11.contains(&(f.n, f.k)), "{f}");
        }
    }
}

#[test]
fn evaluate_reproduces_every_fact() {
    let catalog = Catalog::builtin();
    for b in Builtin::ALL {
        for f in b.facts(50000) {
            assert_eq!(b.evaluate(&f.params), Some((f.n, f.k)), "{f}");
            assert!(f.k > f.n);
        }
    }
    assert_eq!(catalog.ids().count(), 11);
}

struct Plugin;

impl FactGenerator for Plugin {
    fn id(&self) -> &str {
        "R-Test"
    }
    fn source(&self) -> &str {
        "test"
    }
    fn facts(&self, n_max: u64) -> Vec<NonimmersionFact> {
        if n_max < 40 {
            return vec![];
        }
        vec![NonimmersionFact {
            n: 40,
            k: 200,
            rule_id: Arc::from("R-Test"),
            params: Params { m: 40, h: None, statement: 0 },
        }]
    }
    fn evaluate(&self, _: &Params) -> Option<(u64, u64)> {
        Some((40, 200))
    }
}

#[test]
fn plugin_rules_participate() {
    let mut catalog = Catalog::builtin();
    catalog.register(Arc::new(Plugin)).unwrap();
    assert!(matches!(
        catalog.register(Arc::new(Plugin)),
        Err(RulesError::DuplicateRule(_))
    ));
    let text = format!("enable.R-Test=true\nprecedence={},R-Test\n", DEFAULT_PRECEDENCE.join(","));
    let cfg = RuleConfig::parse(&text, &catalog).unwrap();
    let index = FactIndex::build(&catalog, &cfg, 100).unwrap();
    assert_eq!(index.best(41), (200, Some("R-Test")));
    assert_eq!(Part11::from_letter('c'), Some(Part11::C));
}
