//! FP-growth frequent itemset mining and maximal frequent itemsets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FrequentItemset {
    /// Ascending item ids.
    pub items: Vec<u32>,
    pub support: usize,
}

struct Node {
    item: u32,
    count: usize,
    parent: usize,
    children: Vec<usize>,
}

/// FP-tree over items ranked by descending frequency.
struct FpTree {
    nodes: Vec<Node>,
    /// Frequent items in mining order (least frequent first) with their
    /// node lists.
    header: Vec<(u32, usize, Vec<usize>)>,
}

const ROOT: usize = 0;

impl FpTree {
    /// Builds a tree from weighted transactions, keeping items with total
    /// weight `>= min_support`.
    fn build(transactions: &[(Vec<u32>, usize)], min_support: usize) -> Self {
        let mut freq: HashMap<u32, usize> = HashMap::new();
        for (t, w) in transactions {
            for &i in t {
                *freq.entry(i).or_default() += w;
            }
        }
        let mut ranked: Vec<(u32, usize)> = freq.into_iter().filter(|&(_, c)| c >= min_support).collect();
        // Most frequent first, ties by item id.
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let rank: HashMap<u32, usize> = ranked.iter().enumerate().map(|(r, &(i, _))| (i, r)).collect();

        let mut nodes = vec![Node {
            item: u32::MAX,
            count: 0,
            parent: ROOT,
            children: Vec::new(),
        }];
        let mut node_lists: Vec<Vec<usize>> = vec![Vec::new(); ranked.len()];
        for (t, w) in transactions {
            let mut items: Vec<u32> = t.iter().copied().filter(|i| rank.contains_key(i)).collect();
            items.sort_by_key(|i| rank[i]);
            items.dedup();
            let mut cur = ROOT;
            for item in items {
                let found = nodes[cur].children.iter().copied().find(|&c| nodes[c].item == item);
                cur = match found {
                    Some(c) => {
                        nodes[c].count += w;
                        c
                    }
                    None => {
                        let id = nodes.len();
                        nodes.push(Node {
                            item,
                            count: *w,
                            parent: cur,
                            children: Vec::new(),
                        });
                        nodes[cur].children.push(id);
                        node_lists[rank[&item]].push(id);
                        id
                    }
                };
            }
        }
        let header = ranked
            .iter()
            .zip(node_lists)
            .rev()
            .map(|(&(i, c), l)| (i, c, l))
            .collect();
        Self { nodes, header }
    }

    fn is_empty(&self) -> bool {
        self.header.is_empty()
    }

    /// The items of the tree if it is a single chain, root to leaf.
    fn single_path(&self) -> Option<Vec<(u32, usize)>> {
        let mut path = Vec::new();
        let mut cur = ROOT;
        loop {
            match self.nodes[cur].children.as_slice() {
                [] => return Some(path),
                [c] => {
                    path.push((self.nodes[*c].item, self.nodes[*c].count));
                    cur = *c;
                }
                _ => return None,
            }
        }
    }

    /// Prefix paths (excluding the item) of every node holding `item`.
    fn conditional_base(&self, nodes: &[usize]) -> Vec<(Vec<u32>, usize)> {
        nodes
            .iter()
            .filter_map(|&n| {
                let mut path = Vec::new();
                let mut cur = self.nodes[n].parent;
                while cur != ROOT {
                    path.push(self.nodes[cur].item);
                    cur = self.nodes[cur].parent;
                }
                (!path.is_empty()).then_some((path, self.nodes[n].count))
            })
            .collect()
    }
}

fn weighted(transactions: &[Vec<u32>]) -> Vec<(Vec<u32>, usize)> {
    transactions.iter().map(|t| (t.clone(), 1)).collect()
}

fn sorted(mut items: Vec<u32>) -> Vec<u32> {
    items.sort_unstable();
    items
}

/// Every itemset with support `>= min_support`, sorted by items.
pub fn frequent_itemsets(transactions: &[Vec<u32>], min_support: usize) -> Vec<FrequentItemset> {
    let min_support = min_support.max(1);
    let tree = FpTree::build(&weighted(transactions), min_support);
    let mut out = Vec::new();
    mine_all(&tree, &[], min_support, &mut out);
    out.sort();
    out
}

fn mine_all(tree: &FpTree, suffix: &[u32], min_support: usize, out: &mut Vec<FrequentItemset>) {
    for (item, count, nodes) in &tree.header {
        let mut items = suffix.to_vec();
        items.push(*item);
        out.push(FrequentItemset {
            items: sorted(items.clone()),
            support: *count,
        });
        let cond = FpTree::build(&tree.conditional_base(nodes), min_support);
        if !cond.is_empty() {
            mine_all(&cond, &items, min_support, out);
        }
    }
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

/// Frequent itemsets without a frequent proper superset, sorted by items.
///
/// Mining follows FP-growth but stops early on single-path conditional
/// trees (the whole path is the only maximal candidate) and skips branches
/// whose reachable items are already covered by a found candidate.
pub fn maximal_frequent_itemsets(transactions: &[Vec<u32>], min_support: usize) -> Vec<FrequentItemset> {
    let min_support = min_support.max(1);
    let tree = FpTree::build(&weighted(transactions), min_support);
    let mut candidates: Vec<Vec<u32>> = Vec::new();
    mine_maximal(&tree, &[], min_support, &mut candidates);

    // Longest first so any superset is seen before its subsets.
    candidates.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let mut maximal: Vec<Vec<u32>> = Vec::new();
    for c in candidates {
        if !maximal.iter().any(|m| is_subset(&c, m)) {
            maximal.push(c);
        }
    }
    let mut out: Vec<FrequentItemset> = maximal
        .into_iter()
        .map(|items| {
            let support = transactions.iter().filter(|t| items.iter().all(|i| t.contains(i))).count();
            FrequentItemset { items, support }
        })
        .collect();
    out.sort();
    out
}

fn mine_maximal(tree: &FpTree, suffix: &[u32], min_support: usize, found: &mut Vec<Vec<u32>>) {
    if let Some(path) = tree.single_path() {
        let mut items = suffix.to_vec();
        items.extend(path.iter().map(|p| p.0));
        if !items.is_empty() {
            found.push(sorted(items));
        }
        return;
    }
    for (item, _, nodes) in &tree.header {
        let mut items = suffix.to_vec();
        items.push(*item);
        let cond = FpTree::build(&tree.conditional_base(nodes), min_support);
        let mut reach = items.clone();
        reach.extend(cond.header.iter().map(|h| h.0));
        let reach = sorted(reach);
        if found.iter().any(|f| is_subset(&reach, f)) {
            continue;
        }
        if cond.is_empty() {
            found.push(sorted(items));
        } else {
            mine_maximal(&cond, &items, min_support, found);
        }
    }
}
