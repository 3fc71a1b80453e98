//! Random forest of unpruned CART trees (Gini impurity, bootstrap samples,
//! random feature subsets per split), averaged leaf class distributions.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DefectClassifier;
use crate::data::{FeatureVector, MetricRecord};
use crate::error::{Error, Result};
use crate::metrics::N_FEATURES;
use crate::seed::{derive_seed, rng_from};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features examined per split; `None` means `ceil(sqrt(n_features))`.
    pub max_features: Option<usize>,
    pub min_samples_split: usize,
    pub max_depth: Option<usize>,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_features: None,
            min_samples_split: 2,
            max_depth: None,
            seed: 0,
        }
    }
}

impl ForestConfig {
    pub fn features_per_split(&self) -> usize {
        self.max_features
            .unwrap_or_else(|| (N_FEATURES as f64).sqrt().ceil() as usize)
            .clamp(1, N_FEATURES)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        p_defective: f64,
    },
}

/// A fitted tree; `x[feature] <= threshold` goes left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn defect_probability(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { p_defective } => return p_defective,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }
}

struct TreeBuilder<'a, R> {
    xs: &'a [FeatureVector],
    ys: &'a [bool],
    config: &'a ForestConfig,
    rng: R,
    nodes: Vec<Node>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

fn gini_weighted(n: f64, pos: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    let p = pos / n;
    n * 2.0 * p * (1.0 - p)
}

impl<R: Rng> TreeBuilder<'_, R> {
    fn best_split_on(&self, idx: &[usize], feature: usize) -> Option<(f64, f64)> {
        let mut pairs: Vec<(f64, bool)> = idx.iter().map(|&i| (self.xs[i][feature], self.ys[i])).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.first()?.0 == pairs.last()?.0 {
            return None;
        }
        let n = pairs.len() as f64;
        let total_pos = pairs.iter().filter(|p| p.1).count() as f64;
        let mut left_pos = 0.0;
        let mut best: Option<(f64, f64)> = None;
        for i in 0..pairs.len() - 1 {
            if pairs[i].1 {
                left_pos += 1.0;
            }
            let (lo, hi) = (pairs[i].0, pairs[i + 1].0);
            if lo == hi {
                continue;
            }
            let nl = (i + 1) as f64;
            let imp = gini_weighted(nl, left_pos) + gini_weighted(n - nl, total_pos - left_pos);
            if best.is_none_or(|(b, _)| imp < b) {
                let mut t = lo + (hi - lo) / 2.0;
                if t >= hi {
                    t = lo;
                }
                best = Some((imp, t));
            }
        }
        best
    }

    fn find_split(&mut self, idx: &[usize]) -> Option<BestSplit> {
        let mut order: Vec<usize> = (0..N_FEATURES).collect();
        order.shuffle(&mut self.rng);
        let want = self.config.features_per_split();
        let mut visited = 0;
        let mut best: Option<BestSplit> = None;
        for &f in &order {
            if visited >= want && best.is_some() {
                break;
            }
            match self.best_split_on(idx, f) {
                None => continue,
                Some((imp, t)) => {
                    visited += 1;
                    if best.as_ref().is_none_or(|b| imp < b.impurity) {
                        best = Some(BestSplit {
                            feature: f,
                            threshold: t,
                            impurity: imp,
                        });
                    }
                }
            }
        }
        best
    }

    fn build(mut self, sample: Vec<usize>) -> DecisionTree {
        // (node slot, samples, depth)
        let mut stack = vec![(0usize, sample, 0usize)];
        self.nodes.push(Node::Leaf { p_defective: 0.0 });
        while let Some((slot, idx, depth)) = stack.pop() {
            let pos = idx.iter().filter(|&&i| self.ys[i]).count();
            let p = pos as f64 / idx.len() as f64;
            let pure = pos == 0 || pos == idx.len();
            let depth_ok = self.config.max_depth.is_none_or(|d| depth < d);
            let split = if !pure && depth_ok && idx.len() >= self.config.min_samples_split {
                self.find_split(&idx)
            } else {
                None
            };
            match split {
                None => self.nodes[slot] = Node::Leaf { p_defective: p },
                Some(s) => {
                    let (l, r): (Vec<usize>, Vec<usize>) = idx
                        .iter()
                        .partition(|&&i| self.xs[i][s.feature] <= s.threshold);
                    let left = self.nodes.len();
                    self.nodes.push(Node::Leaf { p_defective: 0.0 });
                    let right = self.nodes.len();
                    self.nodes.push(Node::Leaf { p_defective: 0.0 });
                    self.nodes[slot] = Node::Split {
                        feature: s.feature,
                        threshold: s.threshold,
                        left,
                        right,
                    };
                    stack.push((right, r, depth + 1));
                    stack.push((left, l, depth + 1));
                }
            }
        }
        DecisionTree { nodes: self.nodes }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    trees: Vec<DecisionTree>,
    config: ForestConfig,
    /// Set when training data held a single class; the model then predicts
    /// that class with probability 1 everywhere.
    degenerate: Option<bool>,
}

impl ForestModel {
    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn config(&self) -> &ForestConfig {
        &self.config
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate.is_some()
    }
}

impl DefectClassifier for ForestModel {
    fn n_features(&self) -> usize {
        N_FEATURES
    }

    fn defect_probability(&self, instance: &[f64]) -> f64 {
        if let Some(label) = self.degenerate {
            return f64::from(u8::from(label));
        }
        let sum: f64 = self.trees.iter().map(|t| t.defect_probability(instance)).sum();
        (sum / self.trees.len() as f64).clamp(0.0, 1.0)
    }
}

/// Fits a random forest on labelled records (typically post-SMOTE).
pub fn fit_forest(records: &[MetricRecord], config: &ForestConfig) -> Result<ForestModel> {
    if records.len() < 2 {
        return Err(Error::contract("forest training needs at least 2 records"));
    }
    if config.n_trees == 0 {
        return Err(Error::Config("n_trees must be >= 1".into()));
    }
    let xs: Vec<FeatureVector> = records.iter().map(|r| r.metrics).collect();
    let ys: Vec<bool> = records.iter().map(MetricRecord::is_defective).collect();
    let n_pos = ys.iter().filter(|&&y| y).count();
    if n_pos == 0 || n_pos == ys.len() {
        log::warn!("forest trained on a single class; model is constant");
        return Ok(ForestModel {
            trees: Vec::new(),
            config: *config,
            degenerate: Some(n_pos > 0),
        });
    }

    let trees = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_from(derive_seed(config.seed, &[t as u64]));
            let n = xs.len();
            let sample: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            TreeBuilder {
                xs: &xs,
                ys: &ys,
                config,
                rng,
                nodes: Vec::new(),
            }
            .build(sample)
        })
        .collect();
    Ok(ForestModel {
        trees,
        config: *config,
        degenerate: None,
    })
}
