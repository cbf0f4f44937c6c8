use std::collections::BTreeSet;
use std::path::Path;

use super::{Catalog, RulesError, DEFAULT_PRECEDENCE};

/// Which rules are enabled and their first-source precedence.
///
/// File format, one setting per line, `#` comments:
///
/// ```text
/// enable.R-DZ=false
/// precedence=R-James,R-Ann,R-DZ,...
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleConfig {
    pub enabled: BTreeSet<String>,
    pub precedence: Vec<String>,
}

impl Default for RuleConfig {
    fn default() -> Self {
        Self {
            enabled: DEFAULT_PRECEDENCE.iter().map(|s| s.to_string()).collect(),
            precedence: DEFAULT_PRECEDENCE.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl RuleConfig {
    /// Default precedence with only `ids` enabled.
    pub fn only<I, S>(ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            enabled: ids.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn is_enabled(&self, id: &str) -> bool {
        self.enabled.contains(id)
    }

    /// Enabled ids, earliest source first.
    pub fn ordered_enabled(&self) -> impl Iterator<Item = &str> {
        self.precedence
            .iter()
            .map(String::as_str)
            .filter(|id| self.enabled.contains(*id))
    }

    pub fn rank(&self, id: &str) -> Option<usize> {
        self.precedence.iter().position(|p| p == id)
    }

    pub fn parse(text: &str, catalog: &Catalog) -> Result<Self, RulesError> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| RulesError::Config { line: line_no, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(id) = key.strip_prefix("enable.") {
                if !catalog.contains(id) {
                    return Err(err(format!("unknown rule id `{id}`")));
                }
                match value {
                    "true" => {
                        cfg.enabled.insert(id.to_string());
                    }
                    "false" => {
                        cfg.enabled.remove(id);
                    }
                    other => return Err(err(format!("expected true or false, got `{other}`"))),
                }
            } else if key == "precedence" {
                let ids: Vec<String> = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if let Some(bad) = ids.iter().find(|id| !catalog.contains(id)) {
                    return Err(err(format!("unknown rule id `{bad}`")));
                }
                cfg.precedence = ids;
            } else {
                return Err(err(format!("unknown key `{key}`")));
            }
        }
        cfg.validate(catalog)?;
        Ok(cfg)
    }

    pub fn load(path: &Path, catalog: &Catalog) -> Result<Self, RulesError> {
        Self::parse(&std::fs::read_to_string(path)?, catalog)
    }

    /// Every enabled rule is known and appears exactly once in `precedence`.
    pub fn validate(&self, catalog: &Catalog) -> Result<(), RulesError> {
        if self.enabled.is_empty() {
            return Err(RulesError::InvalidConfig("no rules enabled".into()));
        }
        let mut seen = BTreeSet::new();
        for id in &self.precedence {
            if !seen.insert(id.as_str()) {
                return Err(RulesError::InvalidConfig(format!(
                    "`{id}` listed twice in precedence"
                )));
            }
        }
        for id in &self.enabled {
            if !catalog.contains(id) {
                return Err(RulesError::UnknownRule(id.clone()));
            }
            if !seen.contains(id.as_str()) {
                return Err(RulesError::InvalidConfig(format!(
                    "enabled rule `{id}` missing from precedence"
                )));
            }
        }
        Ok(())
    }
}
