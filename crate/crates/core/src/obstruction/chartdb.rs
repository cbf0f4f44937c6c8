//! Line-oriented chart database.
//!
//! ```text
//! chart <b1>,<b2> deg=<d>
//!   tower offset=<o> filt=<f> height=<h>
//!   merge filt=<f> members=<o1,o2> height=<h>
//!   vanish filt=<f> members=<o1,...>
//! ```
//!
//! Records end at a blank line; `#` starts a comment. A member is a tower
//! offset or `m<k>`, the continuation tower of the chart's `k`-th merge.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::chart::{ChartKey, ChartPortion, ChartRelation, ChartTower, RelationKind, TowerRef};
use super::ObstructionError;

const BUILTIN: &str = include_str!("../../data/charts.db");

/// Stem period of the chart data, and the matching filtration shift.
pub const PERIOD_DEGREE: i64 = 48;
pub const PERIOD_FILTRATION: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartDb {
    charts: Vec<ChartPortion>,
}

/// A resolved lookup: the portion at the requested key and how it was
/// derived from a stored chart.
#[derive(Debug, Clone)]
pub struct Lookup {
    pub portion: ChartPortion,
    pub base: ChartKey,
    pub periods: u32,
    pub mirrored: bool,
}

impl ChartDb {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("embedded chart database is valid")
    }

    pub fn load(path: &Path) -> Result<Self, ObstructionError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn charts(&self) -> &[ChartPortion] {
        &self.charts
    }

    pub fn parse(text: &str) -> Result<Self, ObstructionError> {
        let mut charts: Vec<ChartPortion> = Vec::new();
        let mut open = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| ObstructionError::Parse { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                // comment-only lines do not end a record
                if raw.trim().is_empty() {
                    open = false;
                }
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            let fields: Vec<&str> = words.collect();
            match head {
                "chart" => {
                    let (pair, rest) = fields
                        .split_first()
                        .ok_or_else(|| err("chart needs `<b1>,<b2> deg=<d>`".into()))?;
                    let (b1, b2) = pair
                        .split_once(',')
                        .ok_or_else(|| err(format!("bad bottom pair `{pair}`")))?;
                    let kv = key_values(rest).map_err(&err)?;
                    let bottoms = (parse_int(b1).map_err(&err)?, parse_int(b2).map_err(&err)?);
                    let degree = parse_int(required(&kv, "deg").map_err(&err)?).map_err(&err)?;
                    if charts.iter().any(|c| c.bottoms == bottoms && c.degree == degree) {
                        return Err(err(format!("duplicate chart {bottoms:?} deg {degree}")));
                    }
                    charts.push(ChartPortion {
                        bottoms,
                        degree,
                        towers: Vec::new(),
                        relations: Vec::new(),
                    });
                    open = true;
                }
                "tower" | "merge" | "vanish" => {
                    if !open {
                        return Err(err(format!("`{head}` outside a chart record")));
                    }
                    let chart = charts.last_mut().unwrap();
                    let kv = key_values(&fields).map_err(&err)?;
                    let filt = parse_uint(required(&kv, "filt").map_err(&err)?).map_err(&err)?;
                    match head {
                        "tower" => chart.towers.push(ChartTower {
                            offset: parse_int(required(&kv, "offset").map_err(&err)?)
                                .map_err(&err)?,
                            filt_base: filt,
                            height: parse_uint(required(&kv, "height").map_err(&err)?)
                                .map_err(&err)?,
                        }),
                        "merge" => chart.relations.push(ChartRelation {
                            kind: RelationKind::Merge,
                            filtration: filt,
                            members: parse_members(required(&kv, "members").map_err(&err)?)
                                .map_err(&err)?,
                            continuation_height: parse_uint(
                                required(&kv, "height").map_err(&err)?,
                            )
                            .map_err(&err)?,
                        }),
                        _ => chart.relations.push(ChartRelation {
                            kind: RelationKind::Vanish,
                            filtration: filt,
                            members: parse_members(required(&kv, "members").map_err(&err)?)
                                .map_err(&err)?,
                            continuation_height: 0,
                        }),
                    }
                }
                other => return Err(err(format!("unknown record `{other}`"))),
            }
        }
        for c in &mut charts {
            c.towers.sort_by_key(|t| t.offset);
            c.presentation()?;
        }
        Ok(Self { charts })
    }

    /// Serializes in the file format; `parse(to_text())` round-trips.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.charts.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "chart {},{} deg={}", c.bottoms.0, c.bottoms.1, c.degree);
            for t in &c.towers {
                let _ = writeln!(
                    out,
                    "  tower offset={} filt={} height={}",
                    t.offset, t.filt_base, t.height
                );
            }
            for r in &c.relations {
                let members = r
                    .members
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                match r.kind {
                    RelationKind::Merge => {
                        let _ = writeln!(
                            out,
                            "  merge filt={} members={} height={}",
                            r.filtration, members, r.continuation_height
                        );
                    }
                    RelationKind::Vanish => {
                        let _ = writeln!(out, "  vanish filt={} members={}", r.filtration, members);
                    }
                }
            }
        }
        out
    }

    /// The portion at `(bottoms, degree)`: a stored chart, its mirror for
    /// swapped bottoms, shifted up by whole periods. Never fabricated.
    pub fn lookup(&self, bottoms: (i64, i64), degree: i64) -> Result<Lookup, ObstructionError> {
        let periods_from = |c: &ChartPortion| -> Option<u32> {
            let diff = degree - c.degree;
            (diff >= 0 && diff % PERIOD_DEGREE == 0).then(|| (diff / PERIOD_DEGREE) as u32)
        };
        for c in self.charts.iter().filter(|c| c.bottoms == bottoms) {
            if let Some(j) = periods_from(c) {
                return Ok(Lookup {
                    portion: c.shifted(j),
                    base: c.key(),
                    periods: j,
                    mirrored: false,
                });
            }
        }
        let swapped = (bottoms.1, bottoms.0);
        for c in self.charts.iter().filter(|c| c.bottoms == swapped) {
            if let Some(j) = periods_from(c) {
                return Ok(Lookup {
                    portion: c.mirrored().shifted(j),
                    base: c.key(),
                    periods: j,
                    mirrored: true,
                });
            }
        }
        Err(ObstructionError::UnknownChart(ChartKey { bottoms, degree }))
    }
}

impl Default for ChartDb {
    fn default() -> Self {
        Self::builtin()
    }
}

fn key_values<'a>(fields: &[&'a str]) -> Result<BTreeMap<&'a str, &'a str>, String> {
    let mut kv = BTreeMap::new();
    for f in fields {
        let (k, v) = f
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{f}`"))?;
        if kv.insert(k, v).is_some() {
            return Err(format!("repeated key `{k}`"));
        }
    }
    Ok(kv)
}

fn required<'a>(kv: &BTreeMap<&str, &'a str>, key: &str) -> Result<&'a str, String> {
    kv.get(key).copied().ok_or_else(|| format!("missing `{key}=`"))
}

fn parse_int(s: &str) -> Result<i64, String> {
    s.trim().parse().map_err(|_| format!("bad integer `{s}`"))
}

fn parse_uint(s: &str) -> Result<u32, String> {
    s.trim().parse().map_err(|_| format!("bad nonnegative integer `{s}`"))
}

fn parse_members(s: &str) -> Result<Vec<TowerRef>, String> {
    s.split(',')
        .map(|m| match m.strip_prefix('m') {
            Some(k) => k
                .parse()
                .map(TowerRef::Merge)
                .map_err(|_| format!("bad merge reference `{m}`")),
            None => parse_int(m).map(TowerRef::Base),
        })
        .collect()
}
