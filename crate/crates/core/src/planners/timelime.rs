//! Historical-precedence planning: Hedge's g between two releases, the
//! change history mined from them, and the support search over flips.

use serde::{Deserialize, Serialize};

use super::{flip, Direction, FlipMode, Plan, PlanAction, PlannerKind};
use crate::data::Release;
use crate::discretize::{BinScheme, Interval};
use crate::error::{Error, Result};
use crate::explain::Explanation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftEntry {
    pub m1: f64,
    pub m2: f64,
    pub s1: f64,
    pub s2: f64,
    pub n1: usize,
    pub n2: usize,
    /// `None` when the pooled standard deviation is 0.
    pub g: Option<f64>,
}

impl ShiftEntry {
    /// Builds an entry from summary statistics (`s` are sample SDs).
    pub fn from_stats(m1: f64, s1: f64, n1: usize, m2: f64, s2: f64, n2: usize) -> Self {
        let g = hedges_g(m1, s1, n1, m2, s2, n2);
        Self {
            m1,
            m2,
            s1,
            s2,
            n1,
            n2,
            g,
        }
    }

    pub fn pooled_sd(&self) -> f64 {
        pooled_sd(self.s1, self.n1, self.s2, self.n2)
    }
}

fn pooled_sd(s1: f64, n1: usize, s2: f64, n2: usize) -> f64 {
    let (a, b) = ((n1 as f64 - 1.0), (n2 as f64 - 1.0));
    ((a * s1 * s1 + b * s2 * s2) / (a + b)).sqrt()
}

/// `g = (m1 - m2) / S_pooled`, `None` when `S_pooled` is 0.
pub fn hedges_g(m1: f64, s1: f64, n1: usize, m2: f64, s2: f64, n2: usize) -> Option<f64> {
    let sp = pooled_sd(s1, n1, s2, n2);
    (sp > 0.0 && sp.is_finite()).then(|| (m1 - m2) / sp)
}

/// Per-feature standardized mean difference between two releases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureShift {
    pub entries: Vec<ShiftEntry>,
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

impl FeatureShift {
    /// `m1`/`s1` describe `first`, `m2`/`s2` describe `second`.
    pub fn between(first: &Release, second: &Release) -> Result<Self> {
        if first.len() < 2 || second.len() < 2 {
            return Err(Error::Statistics(
                "Hedge's g needs at least 2 records per release".into(),
            ));
        }
        let n_features = first.records()[0].metrics.len();
        let entries = (0..n_features)
            .map(|f| {
                let (m1, s1) = mean_sd(&first.column(f));
                let (m2, s2) = mean_sd(&second.column(f));
                ShiftEntry::from_stats(m1, s1, first.len(), m2, s2, second.len())
            })
            .collect();
        Ok(Self { entries })
    }

    pub fn g(&self, feature: usize) -> Option<f64> {
        self.entries[feature].g
    }
}

/// Top-`m` features by `|g|`, undefined `g` last, ties to the lower index.
/// Returned in rank order.
pub fn precedented_features(shift: &FeatureShift, m: usize) -> Vec<usize> {
    let key = |f: usize| shift.entries[f].g.map_or(f64::NEG_INFINITY, f64::abs);
    let mut order: Vec<usize> = (0..shift.entries.len()).collect();
    order.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));
    order.truncate(m);
    order
}

/// One itemset of `(feature, direction)` bin changes per file present in
/// both historical releases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeHistory {
    itemsets: Vec<u64>,
    n_features: usize,
}

fn item_bit(feature: usize, direction: Direction) -> u64 {
    let offset = match direction {
        Direction::Increase => 0,
        Direction::Decrease => 1,
    };
    1u64 << (2 * feature + offset)
}

impl ChangeHistory {
    /// Compares the bin of every feature between `older` and `newer` for the
    /// files they share.
    pub fn build(older: &Release, newer: &Release, bins: &BinScheme) -> Result<Self> {
        let n_features = bins.n_features();
        if 2 * n_features > 64 {
            return Err(Error::contract("change history supports at most 32 features"));
        }
        let itemsets = newer
            .records()
            .iter()
            .filter_map(|r| older.get(&r.file_name).map(|o| (o, r)))
            .map(|(o, r)| {
                let mut items = Vec::new();
                for f in 0..n_features {
                    let (b0, b1) = (bins.bin_of(f, o.metrics[f]), bins.bin_of(f, r.metrics[f]));
                    if let Some(d) = Direction::between(b0 as f64, b1 as f64) {
                        items.push((f, d));
                    }
                }
                items
            })
            .collect::<Vec<_>>();
        Self::from_itemsets(n_features, &itemsets)
    }

    pub fn from_itemsets(n_features: usize, itemsets: &[Vec<(usize, Direction)>]) -> Result<Self> {
        if 2 * n_features > 64 {
            return Err(Error::contract("change history supports at most 32 features"));
        }
        let mut out = Vec::with_capacity(itemsets.len());
        for set in itemsets {
            let mut mask = 0u64;
            for &(f, d) in set {
                if f >= n_features {
                    return Err(Error::contract(format!("feature {f} out of range")));
                }
                if mask & (item_bit(f, Direction::Increase) | item_bit(f, Direction::Decrease)) != 0 {
                    return Err(Error::contract(format!("feature {f} repeated in an itemset")));
                }
                mask |= item_bit(f, d);
            }
            out.push(mask);
        }
        Ok(Self {
            itemsets: out,
            n_features,
        })
    }

    pub fn len(&self) -> usize {
        self.itemsets.len()
    }

    /// True when no file changed any bin.
    pub fn is_empty(&self) -> bool {
        self.itemsets.iter().all(|&m| m == 0)
    }

    pub fn itemsets(&self) -> Vec<Vec<(usize, Direction)>> {
        self.itemsets
            .iter()
            .map(|&m| {
                let mut v = Vec::new();
                for f in 0..self.n_features {
                    for d in [Direction::Increase, Direction::Decrease] {
                        if m & item_bit(f, d) != 0 {
                            v.push((f, d));
                        }
                    }
                }
                v
            })
            .collect()
    }

    /// Number of itemsets containing every given change.
    pub fn support(&self, changes: &[(usize, Direction)]) -> usize {
        let mask = changes.iter().fold(0u64, |m, &(f, d)| m | item_bit(f, d));
        self.itemsets.iter().filter(|&&s| s & mask == mask).count()
    }
}

/// A candidate change: move `feature` into `target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub feature: usize,
    pub target: Interval,
    pub direction: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportOutcome {
    /// Chosen pool entries, ascending feature order.
    pub chosen: Vec<PoolEntry>,
    pub support: usize,
    pub empty_history: bool,
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Largest set of pool changes with history support, searching sizes
/// `min(m, |pool|)` down to 1. Within a size the highest support wins, then
/// the lexicographically smallest feature set. No supported set gives an
/// empty outcome with support 0.
pub fn find_support(
    pool: &[PoolEntry],
    precedented: &[usize],
    history: &ChangeHistory,
    m: usize,
) -> Result<SupportOutcome> {
    let mut pool = pool.to_vec();
    pool.sort_by_key(|p| p.feature);
    if pool.windows(2).any(|w| w[0].feature == w[1].feature) {
        return Err(Error::contract("pool contains a feature twice"));
    }
    if let Some(p) = pool.iter().find(|p| !precedented.contains(&p.feature)) {
        return Err(Error::contract(format!(
            "pool feature {} is not precedented",
            p.feature
        )));
    }
    let empty = SupportOutcome {
        chosen: Vec::new(),
        support: 0,
        empty_history: history.is_empty(),
    };
    if history.is_empty() {
        return Ok(empty);
    }
    for size in (1..=m.min(pool.len())).rev() {
        let mut idx: Vec<usize> = (0..size).collect();
        let mut best: Option<(Vec<usize>, usize)> = None;
        loop {
            let changes: Option<Vec<(usize, Direction)>> = idx
                .iter()
                .map(|&i| pool[i].direction.map(|d| (pool[i].feature, d)))
                .collect();
            if let Some(changes) = changes {
                let s = history.support(&changes);
                if s > 0 && best.as_ref().is_none_or(|(_, b)| s > *b) {
                    best = Some((idx.clone(), s));
                }
            }
            if !next_combination(&mut idx, pool.len()) {
                break;
            }
        }
        if let Some((idx, support)) = best {
            return Ok(SupportOutcome {
                chosen: idx.iter().map(|&i| pool[i]).collect(),
                support,
                empty_history: false,
            });
        }
    }
    Ok(empty)
}

/// TimeLIME: flip positive-weight precedented features, then keep the
/// largest combination that history supports.
pub fn timelime_plan(
    e: &Explanation,
    n_features: usize,
    precedented: &[usize],
    history: &ChangeHistory,
    m: usize,
    mode: FlipMode,
) -> Result<Plan> {
    let pool: Vec<PoolEntry> = e
        .entries
        .iter()
        .filter(|en| en.weight >= 0.0 && precedented.contains(&en.feature))
        .map(|en| {
            let target = flip(en.interval, mode);
            PoolEntry {
                feature: en.feature,
                target,
                direction: Direction::between(en.interval.midpoint(), target.midpoint()),
            }
        })
        .collect();
    let outcome = find_support(&pool, precedented, history, m)?;
    let mut plan = Plan::keep_all(PlannerKind::TimeLime, n_features);
    for c in &outcome.chosen {
        plan.actions[c.feature] = PlanAction::Move {
            interval: c.target,
            direction: c.direction,
        };
    }
    plan.support = outcome.support;
    if outcome.empty_history {
        plan = plan.with_note("empty change history");
    }
    Ok(plan)
}
