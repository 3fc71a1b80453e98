//! Fixture generators and straightforward reference implementations shared
//! by the oracle suites and the acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeSet;

use defect_planning::data::{MetricRecord, Release};
use defect_planning::discretize::{BinScheme, Interval};
use defect_planning::evaluate::Verdict;
use defect_planning::planners::{ChangeHistory, Direction, OliveiraConfig, PlanAction, PoolEntry};
use defect_planning::N_FEATURES;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- itemsets

pub fn random_transactions(rng: &mut ChaCha8Rng) -> (Vec<Vec<u32>>, usize) {
    let n_items = rng.random_range(1..=12u32);
    let n_tx = rng.random_range(0..=30);
    let density = rng.random_range(0.15..0.7);
    let tx: Vec<Vec<u32>> = (0..n_tx)
        .map(|_| (0..n_items).filter(|_| rng.random_bool(density)).collect())
        .collect();
    let min_support = rng.random_range(1..=(n_tx / 3).max(1) + 1);
    (tx, min_support)
}

/// Every subset of the item universe with its support, by bitmask.
pub fn brute_force_frequent(tx: &[Vec<u32>], min_support: usize) -> Vec<(BTreeSet<u32>, usize)> {
    let universe: BTreeSet<u32> = tx.iter().flatten().copied().collect();
    let items: Vec<u32> = universe.into_iter().collect();
    let masks: Vec<u32> = tx
        .iter()
        .map(|t| {
            t.iter()
                .map(|i| 1u32 << items.iter().position(|x| x == i).unwrap())
                .fold(0, |a, b| a | b)
        })
        .collect();
    let mut out = Vec::new();
    for subset in 1u32..(1u32 << items.len()) {
        let support = masks.iter().filter(|&&m| m & subset == subset).count();
        if support >= min_support {
            let set = (0..items.len()).filter(|b| subset >> b & 1 == 1).map(|b| items[b]).collect();
            out.push((set, support));
        }
    }
    out.sort();
    out
}

pub fn brute_force_maximal(tx: &[Vec<u32>], min_support: usize) -> Vec<(BTreeSet<u32>, usize)> {
    let all = brute_force_frequent(tx, min_support);
    let mut out: Vec<_> = all
        .iter()
        .filter(|(s, _)| !all.iter().any(|(t, _)| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect();
    out.sort();
    out
}

// -------------------------------------------------------------------- MDLP

pub fn random_labelled_values(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<bool>) {
    let distinct = rng.random_range(1..=12);
    let n = rng.random_range(2..=40);
    let skew = rng.random_range(0.0..1.0);
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(0..distinct) as f64 * 0.5).collect();
    // Labels loosely follow the value so that some fixtures do split.
    let labels = values
        .iter()
        .map(|v| rng.random_bool(if *v > distinct as f64 * 0.25 { 0.5 + skew / 2.0 } else { 0.5 - skew / 2.0 }))
        .collect();
    (values, labels)
}

fn ent(labels: &[bool]) -> f64 {
    let n = labels.len() as f64;
    let p = labels.iter().filter(|&&b| b).count() as f64 / n;
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    h(p) + h(1.0 - p)
}

fn classes(labels: &[bool]) -> f64 {
    let pos = labels.iter().any(|&b| b);
    let neg = labels.iter().any(|&b| !b);
    if pos && neg {
        2.0
    } else {
        1.0
    }
}

/// MDLP recursion that tries every midpoint between distinct values (not
/// only boundary points) and recomputes entropies from raw label lists.
pub fn exhaustive_mdlp(values: &[f64], labels: &[bool]) -> Vec<f64> {
    let mut cuts = Vec::new();
    mdlp_rec(values, labels, &mut cuts);
    cuts.sort_by(f64::total_cmp);
    cuts
}

fn mdlp_rec(values: &[f64], labels: &[bool], cuts: &mut Vec<f64>) {
    let mut distinct: Vec<f64> = values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 || ent(labels) == 0.0 {
        return;
    }
    let n = values.len() as f64;
    let mut scored = Vec::new();
    for w in distinct.windows(2) {
        let cut = (w[0] + w[1]) / 2.0;
        let left: Vec<bool> = values.iter().zip(labels).filter(|(v, _)| **v <= cut).map(|(_, l)| *l).collect();
        let right: Vec<bool> = values.iter().zip(labels).filter(|(v, _)| **v > cut).map(|(_, l)| *l).collect();
        let e = (left.len() as f64 * ent(&left) + right.len() as f64 * ent(&right)) / n;
        scored.push((cut, ent(labels) - e, left, right));
    }
    let best_gain = scored.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let (cut, gain, left, right) = scored.into_iter().find(|s| s.1 >= best_gain - 1e-12).unwrap();
    let k = classes(labels);
    let delta = (3f64.powf(k) - 2.0).log2()
        - (k * ent(labels) - classes(&left) * ent(&left) - classes(&right) * ent(&right));
    if gain <= ((n - 1.0).log2() + delta) / n {
        return;
    }
    cuts.push(cut);
    let split = |keep: &dyn Fn(f64) -> bool| -> (Vec<f64>, Vec<bool>) {
        values.iter().zip(labels).filter(|(v, _)| keep(**v)).map(|(v, l)| (*v, *l)).unzip()
    };
    let (lv, ll) = split(&|v| v <= cut);
    let (rv, rl) = split(&|v| v > cut);
    mdlp_rec(&lv, &ll, cuts);
    mdlp_rec(&rv, &rl, cuts);
}

// ---------------------------------------------------------------- Oliveira

pub fn random_release(rng: &mut ChaCha8Rng, n: usize) -> Release {
    let records = (0..n)
        .map(|i| {
            let mut m = [0.0; N_FEATURES];
            for (f, v) in m.iter_mut().enumerate() {
                // A mix of small-integer, skewed and constant columns.
                *v = match f % 4 {
                    0 => rng.random_range(0..12) as f64,
                    1 => (rng.random_range(0.0f64..1.0).powi(3) * 400.0).round(),
                    2 => (rng.random_range(0.0..1.0f64) * 100.0).round() / 100.0,
                    _ if f == 19 => 3.0,
                    _ => rng.random_range(1..=4) as f64,
                };
            }
            MetricRecord::new(format!("F{i}"), m, u32::from(rng.random_bool(0.4)) * rng.random_range(1..4))
        })
        .collect();
    Release::new("fixture", records).unwrap()
}

/// numpy "linear" percentile, written out directly.
pub fn linear_percentile(values: &[f64], q: f64) -> f64 {
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    let pos = q / 100.0 * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
}

fn median(values: &[f64]) -> f64 {
    linear_percentile(values, 50.0)
}

/// Full `(p, k)` grid: minimum penalty, then highest `p`, then lowest `k`.
pub fn oliveira_grid(values: &[f64], config: &OliveiraConfig) -> Option<(u32, f64)> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return None;
    }
    let p90 = linear_percentile(values, config.tail_percentile);
    let tail: Vec<f64> = values.iter().copied().filter(|&v| v >= p90).collect();
    let tail_median = median(&tail);
    let mut ks: Vec<f64> = values.to_vec();
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    let mut cands = Vec::new();
    for &p in &config.p_grid {
        for &k in &ks {
            let compliance = values.iter().filter(|&&v| v <= k).count() as f64 / values.len() as f64;
            let pen = (config.compliance - compliance).max(0.0) + (k - tail_median).abs() / (max - min);
            cands.push((pen, p, k));
        }
    }
    let best = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    cands
        .into_iter()
        .filter(|c| c.0 <= best + 1e-12)
        .max_by(|a, b| a.1.cmp(&b.1).then(b.2.total_cmp(&a.2)))
        .map(|c| (c.1, c.2))
}

// ----------------------------------------------------------- find_support

pub struct SupportFixture {
    pub pool: Vec<PoolEntry>,
    pub precedented: Vec<usize>,
    pub itemsets: Vec<Vec<(usize, Direction)>>,
    pub m: usize,
}

fn random_direction(rng: &mut ChaCha8Rng) -> Direction {
    if rng.random_bool(0.5) {
        Direction::Increase
    } else {
        Direction::Decrease
    }
}

pub fn random_support_fixture(rng: &mut ChaCha8Rng) -> SupportFixture {
    let n_features = 8;
    let m = rng.random_range(1..=6);
    let mut features: Vec<usize> = (0..n_features).collect();
    for i in (1..features.len()).rev() {
        features.swap(i, rng.random_range(0..=i));
    }
    let precedented: Vec<usize> = features[..m.min(n_features)].to_vec();
    let mut pool = Vec::new();
    for &feature in &precedented {
        if rng.random_bool(0.8) {
            let direction = if rng.random_bool(0.1) { None } else { Some(random_direction(rng)) };
            pool.push(PoolEntry {
                feature,
                target: Interval { lo: 0.0, hi: 0.5 },
                direction,
            });
        }
    }
    let n_sets = rng.random_range(0..25);
    let mut itemsets = Vec::new();
    for _ in 0..n_sets {
        let mut set = Vec::new();
        for f in 0..n_features {
            if rng.random_bool(0.35) {
                set.push((f, random_direction(rng)));
            }
        }
        itemsets.push(set);
    }
    SupportFixture {
        pool,
        precedented,
        itemsets,
        m,
    }
}

/// Enumerates every subset of the pool: the largest size with a supported
/// plan wins, then the highest support, then the smallest feature list.
pub fn enumerate_support(fx: &SupportFixture) -> (Vec<usize>, usize) {
    let n = fx.pool.len();
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for mask in 1u32..(1u32 << n) {
        let chosen: Vec<&PoolEntry> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| &fx.pool[b]).collect();
        if chosen.len() > fx.m || chosen.iter().any(|p| p.direction.is_none()) {
            continue;
        }
        let support = fx
            .itemsets
            .iter()
            .filter(|set| chosen.iter().all(|p| set.contains(&(p.feature, p.direction.unwrap()))))
            .count();
        if support == 0 {
            continue;
        }
        let mut feats: Vec<usize> = chosen.iter().map(|p| p.feature).collect();
        feats.sort_unstable();
        let better = match &best {
            None => true,
            Some((size, s, f)) => {
                feats.len() > *size || (feats.len() == *size && (support > *s || (support == *s && feats < *f)))
            }
        };
        if better {
            best = Some((feats.len(), support, feats));
        }
    }
    best.map_or((Vec::new(), 0), |(_, s, f)| (f, s))
}

pub fn history_of(fx: &SupportFixture) -> ChangeHistory {
    ChangeHistory::from_itemsets(8, &fx.itemsets).unwrap()
}

// ----------------------------------------------------------------- overlap

pub fn random_cuts(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut c: Vec<f64> = (0..rng.random_range(0..4)).map(|_| rng.random_range(0.05..0.95)).collect();
    c.sort_by(f64::total_cmp);
    c.dedup();
    c
}

/// Per-feature verdict from first principles: a bin is the count of cuts
/// strictly below the value.
pub fn oracle_verdict(action: &PlanAction, cuts: &[f64], y: f64, z: f64) -> Verdict {
    let bin = |v: f64| cuts.iter().filter(|&&c| c < v).count();
    match action {
        PlanAction::Move { interval, .. } if interval.lo <= z && z <= interval.hi => Verdict::TP,
        PlanAction::Move { .. } => Verdict::FP,
        PlanAction::Keep if bin(y) == bin(z) => Verdict::TN,
        PlanAction::Keep => Verdict::FN,
    }
}

pub fn bins_from(cuts: Vec<Vec<f64>>) -> BinScheme {
    BinScheme::new(cuts).unwrap()
}

// --------------------------------------------------------------- tolerance

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

// ------------------------------------------------------------------ suites

/// Agreement count of an oracle suite, with the first disagreement.
pub struct Agreement {
    pub agree: usize,
    pub total: usize,
    pub first_mismatch: Option<String>,
    /// Fixtures whose expected answer is not the empty one.
    pub nontrivial: usize,
}

impl Agreement {
    fn new() -> Self {
        Self { agree: 0, total: 0, first_mismatch: None, nontrivial: 0 }
    }

    fn record(&mut self, ok: bool, nontrivial: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        self.nontrivial += usize::from(nontrivial);
        if ok {
            self.agree += 1;
        } else if self.first_mismatch.is_none() {
            self.first_mismatch = Some(detail());
        }
    }

    pub fn all(&self) -> bool {
        self.agree == self.total && self.total > 0
    }
}

pub fn fp_growth_suite(fixtures: u64) -> Agreement {
    use defect_planning::planners::{frequent_itemsets, maximal_frequent_itemsets};
    let mut a = Agreement::new();
    for seed in 0..fixtures {
        let (tx, min_support) = random_transactions(&mut rng(1000 + seed));
        let as_sets = |v: Vec<defect_planning::planners::FrequentItemset>| {
            let mut out: Vec<(BTreeSet<u32>, usize)> =
                v.into_iter().map(|f| (f.items.into_iter().collect(), f.support)).collect();
            out.sort();
            out
        };
        let all = as_sets(frequent_itemsets(&tx, min_support));
        let max = as_sets(maximal_frequent_itemsets(&tx, min_support));
        let (want_all, want_max) = (brute_force_frequent(&tx, min_support), brute_force_maximal(&tx, min_support));
        a.record(all == want_all && max == want_max, want_max.iter().any(|m| m.0.len() > 1), || {
            format!("seed {seed}: maximal {max:?} vs {want_max:?}")
        });
    }
    a
}

pub fn mdlp_suite(fixtures: u64) -> Agreement {
    use defect_planning::discretize::fayyad_irani;
    let mut a = Agreement::new();
    for seed in 0..fixtures {
        let (values, labels) = random_labelled_values(&mut rng(2000 + seed));
        let got = fayyad_irani(&values, &labels).unwrap();
        let want = exhaustive_mdlp(&values, &labels);
        a.record(got == want, !want.is_empty(), || format!("seed {seed}: {got:?} vs {want:?}"));
    }
    a
}

pub fn oliveira_suite(fixtures: u64) -> Agreement {
    use defect_planning::data::NormalizationMap;
    use defect_planning::planners::fit_oliveira;
    let mut a = Agreement::new();
    let config = OliveiraConfig::default();
    for seed in 0..fixtures {
        let mut r = rng(3000 + seed);
        let n = r.random_range(5..60);
        let release = random_release(&mut r, n);
        let map = NormalizationMap::fit(&[&release]).unwrap();
        let rules = fit_oliveira(&release, &map, &config).unwrap();
        let wants: Vec<_> = (0..N_FEATURES).map(|f| oliveira_grid(&release.column(f), &config)).collect();
        let ok = (0..N_FEATURES).all(|f| rules.rules[f].as_ref().map(|r| (r.p, r.k)) == wants[f]);
        a.record(ok, wants.iter().any(Option::is_some), || format!("seed {seed}"));
    }
    a
}

pub fn find_support_suite(fixtures: u64) -> Agreement {
    use defect_planning::planners::find_support;
    let mut a = Agreement::new();
    for seed in 0..fixtures {
        let fx = random_support_fixture(&mut rng(4000 + seed));
        let out = find_support(&fx.pool, &fx.precedented, &history_of(&fx), fx.m).unwrap();
        let got: Vec<usize> = out.chosen.iter().map(|p| p.feature).collect();
        let want = enumerate_support(&fx);
        a.record((got.clone(), out.support) == want, want.1 > 0, || {
            format!("seed {seed}: {got:?}/{} vs {want:?}", out.support)
        });
    }
    a
}

// --------------------------------------------------------------- real data

/// Per-trial counts published with the datasets: matched files and bugs
/// reduced between the newer and most recent release.
pub const PUBLISHED: [(&str, usize, i64); 9] = [
    ("jedit", 78, 142),
    ("camel1", 210, 261),
    ("camel2", 144, 18),
    ("log4j", 35, -37),
    ("xalan", 385, 148),
    ("ant", 91, 20),
    ("velocity", 138, 177),
    ("poi", 247, 129),
    ("synapse", 58, 32),
];

pub fn manifest_path() -> std::path::PathBuf {
    std::env::var_os("DEFECT_DATA_MANIFEST")
        .map(Into::into)
        .unwrap_or_else(|| {
            let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).ancestors().nth(2).unwrap();
            root.join("data").join("trials.txt")
        })
}

/// The manifest's trials when every release file it names exists.
pub fn real_trials() -> Result<Vec<defect_planning::data::TrialSpec>, String> {
    let path = manifest_path();
    let trials = defect_planning::data::load_manifest(&path).map_err(|e| e.to_string())?;
    let missing: Vec<String> = trials
        .iter()
        .flat_map(|t| [&t.oldest, &t.newer, &t.most_recent])
        .filter(|p| !p.exists())
        .map(|p| p.display().to_string())
        .collect();
    if missing.is_empty() {
        Ok(trials)
    } else {
        Err(format!("{} release CSVs not found (first: {})", missing.len(), missing[0]))
    }
}

// -------------------------------------------------------------- LIME sanity

/// Training records with uniform normalized metrics and coin-flip labels,
/// with bins fitted on them.
pub fn lime_background(seed: u64) -> (Vec<MetricRecord>, BinScheme) {
    let mut r = rng(seed);
    let records: Vec<MetricRecord> = (0..200)
        .map(|i| {
            let mut m = [0.0; N_FEATURES];
            m.iter_mut().for_each(|v| *v = r.random());
            MetricRecord::new(format!("F{i}"), m, u32::from(r.random_bool(0.5)))
        })
        .collect();
    let bins = BinScheme::fit(&records).unwrap();
    (records, bins)
}

/// Largest `|weight|` over explanations of a constant black box.
pub fn lime_constant_max_weight(instances: u64) -> f64 {
    use defect_planning::explain::{explain_instance, BinFrequencies, LimeConfig};
    use defect_planning::learners::ProbabilityFn;
    let (records, bins) = lime_background(70);
    let freq = BinFrequencies::from_records(&records, &bins);
    let model = ProbabilityFn::new(N_FEATURES, |_: &[f64]| 0.6);
    let mut worst: f64 = 0.0;
    for i in 0..instances {
        let mut r = rng(7100 + i);
        let inst: Vec<f64> = (0..N_FEATURES).map(|_| r.random()).collect();
        let cfg = LimeConfig { seed: i, ..Default::default() };
        let e = explain_instance(&model, &inst, &bins, &freq, &cfg).unwrap();
        worst = e.entries.iter().fold(worst, |w, x| w.max(x.weight.abs()));
    }
    worst
}

/// Runs in which a black box that only reacts to one bin of one feature
/// gives that feature the largest `|weight|`.
pub fn lime_indicator_hits(runs: u64) -> usize {
    use defect_planning::explain::{explain_instance, BinFrequencies, LimeConfig};
    use defect_planning::learners::ProbabilityFn;
    let (records, bins) = lime_background(71);
    let freq = BinFrequencies::from_records(&records, &bins);
    let mut hits = 0;
    for run in 0..runs {
        let mut r = rng(7200 + run);
        let target = r.random_range(0..N_FEATURES);
        let inst: Vec<f64> = (0..N_FEATURES).map(|_| r.random()).collect();
        let hot = bins.bin_of(target, inst[target]);
        let b = bins.clone();
        let model = ProbabilityFn::new(N_FEATURES, move |x: &[f64]| {
            if b.bin_of(target, x[target]) == hot {
                0.9
            } else {
                0.1
            }
        });
        let cfg = LimeConfig { seed: run, ..Default::default() };
        let e = explain_instance(&model, &inst, &bins, &freq, &cfg).unwrap();
        let top = e
            .entries
            .iter()
            .max_by(|a, b| a.weight.abs().total_cmp(&b.weight.abs()))
            .map(|x| x.feature);
        hits += usize::from(top == Some(target));
    }
    hits
}
