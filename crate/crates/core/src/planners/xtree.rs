//! XTREE: a multiway entropy tree over discretized features, restricted to
//! the features that occur in maximal frequent itemsets. A plan is the set
//! of conditions separating the instance's branch from the nearest branch
//! with a lower defect probability.

use serde::{Deserialize, Serialize};

use super::fpgrowth::maximal_frequent_itemsets;
use super::{Direction, Plan, PlanAction, PlannerKind};
use crate::data::MetricRecord;
use crate::discretize::BinScheme;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XTreeConfig {
    /// Minimum support of frequent itemsets as a share of the records.
    pub min_support_fraction: f64,
}

impl Default for XTreeConfig {
    fn default() -> Self {
        Self {
            min_support_fraction: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XTreeNode {
    /// `(feature, bin)` conditions from the root to this node.
    pub conditions: Vec<(usize, usize)>,
    pub n_records: usize,
    pub defect_probability: f64,
    /// Feature split on, with `(bin, child index)` pairs ascending by bin.
    pub split: Option<(usize, Vec<(usize, usize)>)>,
}

impl XTreeNode {
    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }

    pub fn depth(&self) -> usize {
        self.conditions.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XTree {
    /// Pre-order; index 0 is the root.
    pub nodes: Vec<XTreeNode>,
    /// Features allowed in splits.
    pub features: Vec<usize>,
    bins: BinScheme,
}

fn entropy(pos: usize, n: usize) -> f64 {
    if n == 0 || pos == 0 || pos == n {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Fits XTREE on (normalized) training records discretized by `bins`.
pub fn fit_xtree(records: &[MetricRecord], bins: &BinScheme, config: &XTreeConfig) -> Result<XTree> {
    if records.is_empty() {
        return Err(Error::Statistics("XTREE needs training records".into()));
    }
    if !(config.min_support_fraction > 0.0 && config.min_support_fraction <= 1.0) {
        return Err(Error::Config("XTREE min support must be in (0, 1]".into()));
    }
    let n_features = bins.n_features();
    let coded: Vec<Vec<usize>> = records
        .iter()
        .map(|r| (0..n_features).map(|f| bins.bin_of(f, r.metrics[f])).collect())
        .collect();

    // Item id = offset of the feature + bin.
    let mut offsets = Vec::with_capacity(n_features);
    let mut next = 0u32;
    for f in 0..n_features {
        offsets.push(next);
        next += bins.n_bins(f) as u32;
    }
    let feature_of = |item: u32| offsets.partition_point(|&o| o <= item) - 1;
    let transactions: Vec<Vec<u32>> = coded
        .iter()
        .map(|c| c.iter().enumerate().map(|(f, &b)| offsets[f] + b as u32).collect())
        .collect();
    let min_support = (config.min_support_fraction * records.len() as f64).ceil().max(1.0) as usize;
    let mut features: Vec<usize> = maximal_frequent_itemsets(&transactions, min_support)
        .iter()
        .flat_map(|s| s.items.iter().map(|&i| feature_of(i)))
        .filter(|&f| bins.is_explainable(f))
        .collect();
    features.sort_unstable();
    features.dedup();

    let labels: Vec<bool> = records.iter().map(MetricRecord::is_defective).collect();
    let min_split = (records.len() as f64).sqrt();
    let mut nodes = Vec::new();
    grow(
        &coded,
        &labels,
        (0..records.len()).collect(),
        Vec::new(),
        &features,
        min_split,
        &mut nodes,
    );
    Ok(XTree {
        nodes,
        features,
        bins: bins.clone(),
    })
}

fn grow(
    coded: &[Vec<usize>],
    labels: &[bool],
    rows: Vec<usize>,
    conditions: Vec<(usize, usize)>,
    features: &[usize],
    min_split: f64,
    nodes: &mut Vec<XTreeNode>,
) -> usize {
    let n = rows.len();
    let pos = rows.iter().filter(|&&r| labels[r]).count();
    let id = nodes.len();
    nodes.push(XTreeNode {
        conditions: conditions.clone(),
        n_records: n,
        defect_probability: pos as f64 / n as f64,
        split: None,
    });
    if (n as f64) < min_split || pos == 0 || pos == n {
        return id;
    }

    // Lowest weighted child entropy; ties to the lower feature index.
    let mut best: Option<(usize, f64, Vec<(usize, Vec<usize>)>)> = None;
    for &f in features.iter().filter(|f| !conditions.iter().any(|c| c.0 == **f)) {
        let mut parts: Vec<(usize, Vec<usize>)> = Vec::new();
        for &r in &rows {
            let b = coded[r][f];
            match parts.iter_mut().find(|p| p.0 == b) {
                Some(p) => p.1.push(r),
                None => parts.push((b, vec![r])),
            }
        }
        if parts.len() < 2 {
            continue;
        }
        parts.sort_by_key(|p| p.0);
        let e: f64 = parts
            .iter()
            .map(|(_, rs)| {
                let p = rs.iter().filter(|&&r| labels[r]).count();
                rs.len() as f64 * entropy(p, rs.len())
            })
            .sum::<f64>()
            / n as f64;
        if best.as_ref().is_none_or(|b| e < b.1 - 1e-12) {
            best = Some((f, e, parts));
        }
    }
    let Some((f, e, parts)) = best else { return id };
    if e >= entropy(pos, n) - 1e-12 {
        return id;
    }
    let mut children = Vec::with_capacity(parts.len());
    for (b, rs) in parts {
        let mut c = conditions.clone();
        c.push((f, b));
        let child = grow(coded, labels, rs, c, features, min_split, nodes);
        children.push((b, child));
    }
    nodes[id].split = Some((f, children));
    id
}

impl XTree {
    pub fn is_degenerate(&self) -> bool {
        self.nodes.len() <= 1
    }

    /// Node where the instance's descent stops (a leaf, or an internal node
    /// with no child for the instance's bin).
    pub fn locate(&self, instance: &[f64]) -> usize {
        let mut cur = 0;
        while let Some((f, children)) = &self.nodes[cur].split {
            let b = self.bins.bin_of(*f, instance[*f]);
            match children.iter().find(|c| c.0 == b) {
                Some(&(_, child)) => cur = child,
                None => break,
            }
        }
        cur
    }

    pub fn plan(&self, instance: &[f64]) -> Plan {
        let n_features = instance.len();
        if self.is_degenerate() {
            return Plan::keep_all(PlannerKind::XTree, n_features).with_note("degenerate tree");
        }
        let current = self.locate(instance);
        let p_now = self.nodes[current].defect_probability;
        let differing = |node: &XTreeNode| -> Vec<(usize, usize)> {
            node.conditions
                .iter()
                .copied()
                .filter(|&(f, b)| self.bins.bin_of(f, instance[f]) != b)
                .collect()
        };
        // Fewest differing conditions, then lowest probability, then
        // shallowest, then tree order.
        let mut best: Option<(usize, usize)> = None;
        for (i, node) in self.nodes.iter().enumerate() {
            if !node.is_leaf() || node.defect_probability >= p_now {
                continue;
            }
            let d = differing(node).len();
            let better = match best {
                None => true,
                Some((bi, bd)) => {
                    let b = &self.nodes[bi];
                    (d, node.defect_probability, node.depth())
                        .partial_cmp(&(bd, b.defect_probability, b.depth()))
                        == Some(std::cmp::Ordering::Less)
                }
            };
            if better {
                best = Some((i, d));
            }
        }
        let mut plan = Plan::keep_all(PlannerKind::XTree, n_features);
        if let Some((i, _)) = best {
            for (f, b) in differing(&self.nodes[i]) {
                let now = self.bins.bin_of(f, instance[f]);
                plan.actions[f] = PlanAction::Move {
                    interval: self.bins.bin_interval(f, b),
                    direction: Direction::between(now as f64, b as f64),
                };
            }
        }
        plan
    }
}
