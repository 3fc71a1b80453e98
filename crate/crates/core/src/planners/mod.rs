//! Plan generators and the primitives they share.
//!
//! A [`Plan`] holds one action per feature, in normalized `[0, 1]` space:
//! either keep the value or move it into a target interval.

mod fpgrowth;
mod thresholds;
mod timelime;
mod xtree;

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use crate::discretize::Interval;
pub use fpgrowth::{frequent_itemsets, maximal_frequent_itemsets, FrequentItemset};
pub use thresholds::{
    fit_alves, fit_oliveira, fit_shatnawi, oliveira_penalty, varl, AlvesRule, AlvesRules,
    OliveiraConfig, OliveiraRule, OliveiraRules, ShatnawiRule, ShatnawiRules, ThresholdStatus,
};
pub use timelime::{
    find_support, hedges_g, precedented_features, timelime_plan, ChangeHistory, FeatureShift,
    PoolEntry, ShiftEntry, SupportOutcome,
};
pub use xtree::{fit_xtree, XTree, XTreeConfig, XTreeNode};

use crate::error::{Error, Result};
use crate::explain::Explanation;
use crate::seed::rng_from;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increase,
    Decrease,
}

impl Direction {
    /// Direction of `to - from`, `None` when equal.
    pub fn between(from: f64, to: f64) -> Option<Direction> {
        if to > from {
            Some(Direction::Increase)
        } else if to < from {
            Some(Direction::Decrease)
        } else {
            None
        }
    }

    pub fn sign(self) -> char {
        match self {
            Direction::Increase => '+',
            Direction::Decrease => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum PlanAction {
    Keep,
    Move {
        interval: Interval,
        direction: Option<Direction>,
    },
}

impl PlanAction {
    pub fn is_move(&self) -> bool {
        matches!(self, PlanAction::Move { .. })
    }

    pub fn interval(&self) -> Option<Interval> {
        match self {
            PlanAction::Keep => None,
            PlanAction::Move { interval, .. } => Some(*interval),
        }
    }

    pub fn direction(&self) -> Option<Direction> {
        match self {
            PlanAction::Keep => None,
            PlanAction::Move { direction, .. } => *direction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlannerKind {
    Random,
    Lime,
    #[serde(rename = "timelime")]
    TimeLime,
    Alves,
    Shatnawi,
    Oliveira,
    #[serde(rename = "xtree")]
    XTree,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 7] = [
        PlannerKind::Random,
        PlannerKind::Lime,
        PlannerKind::TimeLime,
        PlannerKind::Alves,
        PlannerKind::Shatnawi,
        PlannerKind::Oliveira,
        PlannerKind::XTree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Random => "random",
            PlannerKind::Lime => "lime",
            PlannerKind::TimeLime => "timelime",
            PlannerKind::Alves => "alves",
            PlannerKind::Shatnawi => "shatnawi",
            PlannerKind::Oliveira => "oliveira",
            PlannerKind::XTree => "xtree",
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlannerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        PlannerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown planner `{s}` (expected one of random, lime, timelime, alves, shatnawi, oliveira, xtree)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub planner: PlannerKind,
    pub actions: Vec<PlanAction>,
    /// History support of the chosen changes (TimeLIME only, else 0).
    pub support: usize,
    /// Set when the planner fell back to keeping everything for a reason
    /// other than "nothing to change" (empty history, degenerate tree, ...).
    pub note: Option<String>,
}

impl Plan {
    pub fn keep_all(planner: PlannerKind, n_features: usize) -> Self {
        Self {
            planner,
            actions: vec![PlanAction::Keep; n_features],
            support: 0,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn size(&self) -> usize {
        self.actions.iter().filter(|a| a.is_move()).count()
    }

    pub fn n_features(&self) -> usize {
        self.actions.len()
    }

    pub fn changed_features(&self) -> Vec<usize> {
        (0..self.actions.len())
            .filter(|&f| self.actions[f].is_move())
            .collect()
    }
}

/// How an explanation interval is turned into a target interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipMode {
    /// Reflect about 0.5: `[a, b] -> [1 - b, 1 - a]`.
    #[default]
    Mirror,
    /// The larger of `[0, a]` and `[b, 1]`; ties go up.
    Complement,
}

impl FromStr for FlipMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mirror" => Ok(FlipMode::Mirror),
            "complement" => Ok(FlipMode::Complement),
            other => Err(Error::Config(format!("unknown flip mode `{other}`"))),
        }
    }
}

pub fn flip(interval: Interval, mode: FlipMode) -> Interval {
    match mode {
        FlipMode::Mirror => Interval {
            lo: 1.0 - interval.hi,
            hi: 1.0 - interval.lo,
        },
        FlipMode::Complement => {
            if interval.lo > 1.0 - interval.hi {
                Interval { lo: 0.0, hi: interval.lo }
            } else {
                Interval { lo: interval.hi, hi: 1.0 }
            }
        }
    }
}

/// Target and direction for flipping one explanation interval.
pub(crate) fn flipped_action(current: Interval, mode: FlipMode) -> PlanAction {
    let target = flip(current, mode);
    PlanAction::Move {
        interval: target,
        direction: Direction::between(current.midpoint(), target.midpoint()),
    }
}

/// Classical LIME planner: flip every feature whose weight is `>= 0`.
pub fn classical_plan(e: &Explanation, n_features: usize, mode: FlipMode) -> Plan {
    let mut plan = Plan::keep_all(PlannerKind::Lime, n_features);
    for entry in &e.entries {
        if entry.weight >= 0.0 {
            plan.actions[entry.feature] = flipped_action(entry.interval, mode);
        }
    }
    plan
}

/// Moves `n` uniformly chosen features into random sorted intervals.
pub fn random_plan(instance: &[f64], n: usize, seed: u64) -> Result<Plan> {
    let n_features = instance.len();
    if n > n_features {
        return Err(Error::contract(format!(
            "random plan size {n} exceeds {n_features} features"
        )));
    }
    let mut rng = rng_from(seed);
    let mut plan = Plan::keep_all(PlannerKind::Random, n_features);
    let mut chosen = sample(&mut rng, n_features, n).into_vec();
    chosen.sort_unstable();
    for f in chosen {
        let (a, b): (f64, f64) = (rng.random(), rng.random());
        let interval = Interval { lo: a.min(b), hi: a.max(b) };
        plan.actions[f] = PlanAction::Move {
            interval,
            direction: Direction::between(instance[f], interval.midpoint()),
        };
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explain::ExplanationEntry;
    use crate::metrics::Metric;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    fn explanation(ws: &[f64], ivs: &[Interval]) -> Explanation {
        Explanation {
            entries: ws
                .iter()
                .zip(ivs)
                .enumerate()
                .map(|(f, (&weight, &interval))| ExplanationEntry {
                    feature: f,
                    metric: Metric::from_index(f).unwrap(),
                    weight,
                    interval,
                    bin: 0,
                    selection_rank: Some(f),
                })
                .collect(),
            instance: ivs.iter().map(Interval::midpoint).collect(),
            predicted_probability: 0.8,
            predicted_defective: true,
            intercept: 0.0,
            score: 1.0,
        }
    }

    #[test]
    fn mirror_flip() {
        let close = |a: Interval, b: Interval| (a.lo - b.lo).abs() < 1e-12 && (a.hi - b.hi).abs() < 1e-12;
        assert!(close(flip(iv(0.0, 0.3), FlipMode::Mirror), iv(0.7, 1.0)));
        assert!(close(flip(iv(0.4, 0.6), FlipMode::Mirror), iv(0.4, 0.6)));
        let i = iv(0.125, 0.5);
        assert_eq!(flip(flip(i, FlipMode::Mirror), FlipMode::Mirror), i);
    }

    #[test]
    fn complement_flip_takes_larger_side() {
        assert_eq!(flip(iv(0.0, 0.3), FlipMode::Complement), iv(0.3, 1.0));
        assert_eq!(flip(iv(0.8, 1.0), FlipMode::Complement), iv(0.0, 0.8));
        assert_eq!(flip(iv(0.25, 0.75), FlipMode::Complement), iv(0.75, 1.0));
    }

    #[test]
    fn classical_plan_follows_weight_signs() {
        let e = explanation(&[0.2, -0.1, 0.05], &[iv(0.0, 0.2), iv(0.1, 0.5), iv(0.6, 1.0)]);
        let p = classical_plan(&e, 3, FlipMode::Mirror);
        assert_eq!(p.size(), 2);
        let a = p.actions[0].interval().unwrap();
        assert!((a.lo - 0.8).abs() < 1e-12 && (a.hi - 1.0).abs() < 1e-12);
        assert_eq!(p.actions[1], PlanAction::Keep);
        let c = p.actions[2].interval().unwrap();
        assert!(c.lo.abs() < 1e-12 && (c.hi - 0.4).abs() < 1e-12);
        assert_eq!(p.actions[0].direction(), Some(Direction::Increase));
        assert_eq!(p.actions[2].direction(), Some(Direction::Decrease));

        let neg = explanation(&[-1.0; 3], &[iv(0.0, 0.2); 3]);
        assert_eq!(classical_plan(&neg, 3, FlipMode::Mirror).size(), 0);
        let pos = explanation(&[1.0; 20], &[iv(0.0, 0.2); 20]);
        assert_eq!(classical_plan(&pos, 20, FlipMode::Mirror).size(), 20);
    }

    #[test]
    fn random_plan_contract() {
        let x = [0.5; 20];
        assert_eq!(random_plan(&x, 0, 1).unwrap().size(), 0);
        let full = random_plan(&x, 20, 1).unwrap();
        assert_eq!(full.size(), 20);
        assert!(full
            .actions
            .iter()
            .all(|a| a.interval().is_some_and(|i| 0.0 <= i.lo && i.lo <= i.hi && i.hi <= 1.0)));
        assert_eq!(random_plan(&x, 7, 42).unwrap(), random_plan(&x, 7, 42).unwrap());
        assert!(random_plan(&x, 21, 1).is_err());
    }

    #[test]
    fn planner_names_round_trip() {
        for k in PlannerKind::ALL {
            assert_eq!(k.name().parse::<PlannerKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
        assert!("foo".parse::<PlannerKind>().is_err());
    }
}
