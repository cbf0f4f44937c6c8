//! Portions of Adams spectral sequence charts as finitely presented abelian
//! 2-groups.
//!
//! Each tower (and each continuation tower produced by a merge) is a
//! generator `g` with a bottom filtration `b` and a height `h`; its dots are
//! `2^t g` in filtration `b + t` for `t < h`. The defining relation of `g`
//! is `2^h g = sum of the continuation generators of the merges g enters`,
//! so a dot with two h0-lines leaving it maps to the sum of their targets.
//! Filtration `f` is the subgroup generated by all dots in filtration `>= f`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::lattice::{in_row_span, smith_normal_form};
use super::ObstructionError;
use crate::dyadic::Valuation;

/// Reference to a tower from a relation: a filtration-0 tower by monomial
/// offset, or the continuation tower of the `k`-th merge of the portion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TowerRef {
    Base(i64),
    Merge(usize),
}

impl fmt::Display for TowerRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerRef::Base(o) => write!(f, "{o}"),
            TowerRef::Merge(k) => write!(f, "m{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChartTower {
    /// Exponent of `X_1` relative to the center monomial.
    pub offset: i64,
    pub filt_base: u32,
    pub height: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Merge,
    Vanish,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChartRelation {
    pub kind: RelationKind,
    pub filtration: u32,
    pub members: Vec<TowerRef>,
    /// Height of the continuation tower; unused for `Vanish`.
    pub continuation_height: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChartKey {
    pub bottoms: (i64, i64),
    pub degree: i64,
}

impl fmt::Display for ChartKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{}) deg {}",
            self.bottoms.0, self.bottoms.1, self.degree
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartPortion {
    pub bottoms: (i64, i64),
    pub degree: i64,
    pub towers: Vec<ChartTower>,
    pub relations: Vec<ChartRelation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Generator {
    pub filt_base: u32,
    pub height: u32,
}

impl ChartPortion {
    pub fn key(&self) -> ChartKey {
        ChartKey {
            bottoms: self.bottoms,
            degree: self.degree,
        }
    }

    pub fn merges(&self) -> impl Iterator<Item = &ChartRelation> {
        self.relations.iter().filter(|r| r.kind == RelationKind::Merge)
    }

    pub fn vanishes(&self) -> impl Iterator<Item = &ChartRelation> {
        self.relations
            .iter()
            .filter(|r| r.kind == RelationKind::Vanish)
    }

    pub fn offsets(&self) -> Vec<i64> {
        self.towers.iter().map(|t| t.offset).collect()
    }

    /// The same portion `8j` filtrations higher, `48j` stems up.
    pub fn shifted(&self, periods: u32) -> Self {
        let df = 8 * periods;
        Self {
            bottoms: self.bottoms,
            degree: self.degree + 48 * periods as i64,
            towers: self
                .towers
                .iter()
                .map(|t| ChartTower {
                    filt_base: t.filt_base + df,
                    ..*t
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| ChartRelation {
                    filtration: r.filtration + df,
                    ..r.clone()
                })
                .collect(),
        }
    }

    /// The portion for the swapped smash factors: offsets reversed.
    pub fn mirrored(&self) -> Self {
        let flip = |m: &TowerRef| match *m {
            TowerRef::Base(o) => TowerRef::Base(-o),
            TowerRef::Merge(k) => TowerRef::Merge(k),
        };
        let mut towers: Vec<ChartTower> = self
            .towers
            .iter()
            .map(|t| ChartTower {
                offset: -t.offset,
                ..*t
            })
            .collect();
        towers.sort_by_key(|t| t.offset);
        Self {
            bottoms: (self.bottoms.1, self.bottoms.0),
            degree: self.degree,
            towers,
            relations: self
                .relations
                .iter()
                .map(|r| {
                    let mut members: Vec<TowerRef> = r.members.iter().map(flip).collect();
                    members.sort();
                    ChartRelation {
                        members,
                        ..r.clone()
                    }
                })
                .collect(),
        }
    }

    pub fn dot_count(&self) -> u32 {
        self.towers.iter().map(|t| t.height).sum::<u32>()
            + self.merges().map(|m| m.continuation_height).sum::<u32>()
    }

    /// Builds the group presentation, validating the relation structure.
    pub fn presentation(&self) -> Result<Presentation, ObstructionError> {
        let invalid = |msg: String| ObstructionError::InvalidChart {
            key: self.key(),
            msg,
        };
        let mut base_index = BTreeMap::new();
        let mut gens = Vec::new();
        for t in &self.towers {
            if t.height == 0 {
                return Err(invalid(format!("tower {} has height 0", t.offset)));
            }
            if base_index.insert(t.offset, gens.len()).is_some() {
                return Err(invalid(format!("duplicate tower offset {}", t.offset)));
            }
            gens.push(Generator {
                filt_base: t.filt_base,
                height: t.height,
            });
        }
        let n_towers = gens.len();
        let merges: Vec<&ChartRelation> = self.merges().collect();
        for m in &merges {
            if m.continuation_height == 0 {
                return Err(invalid("merge with continuation height 0".into()));
            }
            gens.push(Generator {
                filt_base: m.filtration,
                height: m.continuation_height,
            });
        }
        let resolve = |r: &TowerRef, limit: usize| -> Result<usize, ObstructionError> {
            match *r {
                TowerRef::Base(o) => base_index
                    .get(&o)
                    .copied()
                    .ok_or_else(|| invalid(format!("no tower at offset {o}"))),
                TowerRef::Merge(k) if k < limit => Ok(n_towers + k),
                TowerRef::Merge(k) => Err(invalid(format!("merge reference m{k} out of range"))),
            }
        };

        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
        for (k, m) in merges.iter().enumerate() {
            if m.members.is_empty() {
                return Err(invalid("merge without members".into()));
            }
            for member in &m.members {
                let g = resolve(member, k)?;
                let top = gens[g].filt_base + gens[g].height;
                if top != m.filtration {
                    return Err(invalid(format!(
                        "merge at filtration {} from {member}, whose tower ends below {top}",
                        m.filtration
                    )));
                }
                outgoing[g].push(n_towers + k);
            }
        }
        let mut vanish = Vec::new();
        for v in self.vanishes() {
            let members = v
                .members
                .iter()
                .map(|m| resolve(m, merges.len()))
                .collect::<Result<Vec<_>, _>>()?;
            vanish.push((v.filtration, members));
        }

        let n = gens.len();
        let rows = gens
            .iter()
            .enumerate()
            .map(|(g, gen)| {
                let mut row = vec![BigInt::zero(); n];
                row[g] = BigInt::one() << gen.height;
                for &c in &outgoing[g] {
                    row[c] -= 1;
                }
                row
            })
            .collect();
        let exponent_bound = gens.iter().map(|g| g.height).sum();
        Ok(Presentation {
            key: self.key(),
            gens,
            rows,
            base_index,
            vanish,
            exponent_bound,
        })
    }

    /// Validates the transcription: the group has order `2^dots`, every dot
    /// is nonzero in its own filtration, and every vanish relation holds.
    pub fn check(&self) -> Result<ChartCheck, ObstructionError> {
        let p = self.presentation()?;
        let invalid = |msg: String| ObstructionError::InvalidChart {
            key: self.key(),
            msg,
        };
        let factors = p.invariant_factors();
        if factors.len() != p.gens.len() {
            return Err(invalid("presented group is infinite".into()));
        }
        let order: BigInt = factors.iter().product();
        let dots = self.dot_count();
        if order != BigInt::one() << dots {
            return Err(invalid(format!("group order {order} but {dots} dots drawn")));
        }
        for (g, gen) in p.gens.iter().enumerate() {
            for t in 0..gen.height {
                let x = p.dot(g, t);
                let f = gen.filt_base + t;
                if p.filtration(&x) != Valuation::Finite(f) {
                    return Err(invalid(format!(
                        "dot 2^{t} on generator {g} is not detected in filtration {f}"
                    )));
                }
            }
        }
        let mut vanish_checked = 0;
        for (f, members) in &p.vanish {
            let x = p.vanish_element(*f, members);
            if p.in_filtration(&x, f + 1) {
                vanish_checked += 1;
            } else {
                return Err(invalid(format!(
                    "vanish relation at filtration {f} does not hold"
                )));
            }
        }
        Ok(ChartCheck {
            key: self.key(),
            generators: p.gens.len(),
            dots,
            invariant_factors: factors,
            vanish_checked,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ChartCheck {
    pub key: ChartKey,
    pub generators: usize,
    pub dots: u32,
    pub invariant_factors: Vec<BigInt>,
    pub vanish_checked: usize,
}

impl ChartCheck {
    pub fn group_string(&self) -> String {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| format!("Z/{d}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `Z^gens / rows`, with the filtration by dots.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub key: ChartKey,
    pub gens: Vec<Generator>,
    rows: Vec<Vec<BigInt>>,
    base_index: BTreeMap<i64, usize>,
    vanish: Vec<(u32, Vec<usize>)>,
    // the group order is 2^exponent_bound, so 2^exponent_bound kills everything
    exponent_bound: u32,
}

impl Presentation {
    pub fn generator_of(&self, offset: i64) -> Option<usize> {
        self.base_index.get(&offset).copied()
    }

    fn unit(&self, g: usize, shift: u32) -> Option<Vec<BigInt>> {
        if shift >= self.exponent_bound {
            return None;
        }
        let mut v = vec![BigInt::zero(); self.gens.len()];
        v[g] = BigInt::one() << shift;
        Some(v)
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.gens.len()]
    }

    /// `2^t g`.
    pub fn dot(&self, g: usize, t: u32) -> Vec<BigInt> {
        self.unit(g, t).unwrap_or_else(|| self.zero())
    }

    /// `sum 2^v X_offset`, where `X_offset` is the filtration-0 class whose
    /// tower is drawn from `filt_base` up: `2^v X = 2^{v - filt_base} g`.
    pub fn element(&self, terms: &[(i64, Valuation)]) -> Result<Vec<BigInt>, ObstructionError> {
        let mut x = self.zero();
        for &(offset, v) in terms {
            let g = self
                .generator_of(offset)
                .ok_or(ObstructionError::NoTower { key: self.key, offset })?;
            if let Valuation::Finite(v) = v {
                let base = self.gens[g].filt_base;
                if v < base {
                    return Err(ObstructionError::BelowPortion {
                        key: self.key,
                        offset,
                        valuation: v,
                    });
                }
                if let Some(u) = self.unit(g, v - base) {
                    x[g] += &u[g];
                }
            }
        }
        Ok(x)
    }

    fn vanish_element(&self, f: u32, members: &[usize]) -> Vec<BigInt> {
        let mut x = self.zero();
        for &g in members {
            let shift = f.saturating_sub(self.gens[g].filt_base);
            if let Some(u) = self.unit(g, shift) {
                x[g] += &u[g];
            }
        }
        x
    }

    /// True iff `x` lies in filtration `>= f`.
    pub fn in_filtration(&self, x: &[BigInt], f: u32) -> bool {
        let mut rows = self.rows.clone();
        for (g, gen) in self.gens.iter().enumerate() {
            if let Some(u) = self.unit(g, f.saturating_sub(gen.filt_base)) {
                rows.push(u);
            }
        }
        in_row_span(&rows, x)
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        in_row_span(&self.rows, x)
    }

    /// Highest filtration containing `x`; infinite for zero.
    pub fn filtration(&self, x: &[BigInt]) -> Valuation {
        if self.is_zero(x) {
            return Valuation::Infinite;
        }
        let mut f = 0;
        while self.in_filtration(x, f + 1) {
            f += 1;
        }
        Valuation::Finite(f)
    }

    /// True iff some element sits exactly in filtration `f`.
    pub fn nonzero_in_filtration(&self, f: u32) -> bool {
        self.gens.iter().enumerate().any(|(g, gen)| {
            f >= gen.filt_base
                && f < gen.filt_base + gen.height
                && self.filtration(&self.dot(g, f - gen.filt_base)) == Valuation::Finite(f)
        })
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        smith_normal_form(&self.rows, self.gens.len()).diagonal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(offset: i64, height: u32) -> ChartTower {
        ChartTower {
            offset,
            filt_base: 0,
            height,
        }
    }

    fn merge(filtration: u32, members: &[TowerRef], height: u32) -> ChartRelation {
        ChartRelation {
            kind: RelationKind::Merge,
            filtration,
            members: members.to_vec(),
            continuation_height: height,
        }
    }

    fn chart_66_38() -> ChartPortion {
        ChartPortion {
            bottoms: (6, 6),
            degree: 38,
            towers: vec![tower(-2, 2), tower(-1, 4), tower(0, 4), tower(1, 2)],
            relations: vec![
                merge(4, &[TowerRef::Base(-1), TowerRef::Base(0)], 2),
                ChartRelation {
                    kind: RelationKind::Vanish,
                    filtration: 4,
                    members: vec![TowerRef::Base(-1), TowerRef::Base(0)],
                    continuation_height: 0,
                },
            ],
        }
    }

    #[test]
    fn merged_pair() {
        let chart = chart_66_38();
        let check = chart.check().unwrap();
        assert_eq!(check.dots, 14);
        assert_eq!(check.vanish_checked, 1);
        let p = chart.presentation().unwrap();
        let v = Valuation::Finite;
        let x = p.element(&[(-1, v(5)), (0, v(6))]).unwrap();
        assert_eq!(p.filtration(&x), v(5));
        let y = p.element(&[(-1, v(4)), (0, v(4))]).unwrap();
        assert_eq!(p.filtration(&y), v(5));
        let z = p.element(&[(-2, v(2)), (1, v(2)), (0, v(6))]).unwrap();
        assert!(p.is_zero(&z));
    }

    #[test]
    fn shift_and_mirror() {
        let chart = chart_66_38();
        let up = chart.shifted(1);
        assert_eq!(up.degree, 86);
        assert_eq!(up.towers[0].filt_base, 8);
        assert_eq!(up.relations[0].filtration, 12);
        up.check().unwrap();
        let m = chart.mirrored();
        assert_eq!(m.offsets(), vec![-1, 0, 1, 2]);
        assert_eq!(m.mirrored(), chart);
    }

    #[test]
    fn rejects_merge_below_tower_top() {
        let mut chart = chart_66_38();
        chart.relations[0].filtration = 3;
        assert!(matches!(
            chart.presentation(),
            Err(ObstructionError::InvalidChart { .. })
        ));
    }

    #[test]
    fn rejects_false_vanish() {
        let mut chart = chart_66_38();
        chart.relations[1].members = vec![TowerRef::Base(-1)];
        assert!(chart.check().is_err());
    }

    #[test]
    fn unknown_offset_is_an_error() {
        let p = chart_66_38().presentation().unwrap();
        assert!(matches!(
            p.element(&[(5, Valuation::Finite(0))]),
            Err(ObstructionError::NoTower { offset: 5, .. })
        ));
    }
}
