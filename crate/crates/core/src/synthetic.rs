//! Seeded generator of three-release CK metric histories.
//!
//! Each file carries latent size, complexity and coupling levels plus fixed
//! noise factors; metrics are a deterministic function of them, so files
//! that nobody touches keep identical metrics between releases. Between
//! releases some files are refactored (smaller, simpler) and some grow,
//! with defective files refactored more often. Defects follow a logistic
//! risk of the latent state.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::data::{build_triple, MetricRecord, Release, ReleaseTriple};
use crate::error::{Error, Result};
use crate::metrics::{Metric, N_FEATURES};
use crate::seed::{derive_seed, rng_from};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub n_files: usize,
    pub seed: u64,
    /// Share of files removed and added between releases.
    pub churn: f64,
    /// Refactoring probability of a defective file; clean files use half.
    pub refactor_rate: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_files: 200,
            seed: 0,
            churn: 0.05,
            refactor_rate: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
struct Latent {
    ln_loc: f64,
    complexity: f64,
    coupling: f64,
    dit: u32,
    noc: u32,
    noise: [f64; 12],
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

impl Latent {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        let size = Normal::new(5.0, 0.9).expect("valid normal");
        let unit = Normal::new(0.0, 1.0).expect("valid normal");
        let z1: f64 = unit.sample(rng);
        let z2: f64 = unit.sample(rng);
        let mut noise = [0.0; 12];
        for n in noise.iter_mut() {
            *n = rng.random();
        }
        Self {
            ln_loc: Distribution::<f64>::sample(&size, rng).clamp(1.5, 9.0),
            complexity: (0.8 + 0.5 * z1).exp().clamp(0.3, 12.0),
            coupling: (1.5 + 0.6 * z2).exp().clamp(0.0, 40.0),
            dit: 1 + (rng.random::<f64>().powi(2) * 4.0) as u32,
            noc: if rng.random::<f64>() < 0.8 { 0 } else { rng.random_range(1..6) },
            noise,
        }
    }

    fn risk(&self) -> f64 {
        let eta = -1.2 + 1.1 * (self.ln_loc - 5.0) + 0.8 * self.complexity.ln() + 0.3 * (1.0 + self.coupling).ln();
        1.0 / (1.0 + (-eta).exp())
    }

    fn bugs(&self, rng: &mut ChaCha8Rng) -> u32 {
        if rng.random::<f64>() < self.risk() {
            1 + Poisson::new(1.0).expect("valid poisson").sample(rng) as u32
        } else {
            0
        }
    }

    fn refactor(&mut self, rng: &mut ChaCha8Rng) {
        self.ln_loc = (self.ln_loc - rng.random_range(0.1..0.6)).max(1.5);
        self.complexity = (self.complexity * rng.random_range(0.5..0.9)).max(0.3);
        self.coupling *= rng.random_range(0.6..1.0);
        for i in [0, 1, 4, 11] {
            self.noise[i] = rng.random();
        }
    }

    fn grow(&mut self, rng: &mut ChaCha8Rng) {
        self.ln_loc = (self.ln_loc + rng.random_range(0.05..0.4)).min(9.0);
        self.complexity = (self.complexity * rng.random_range(1.0..1.3)).min(12.0);
        self.coupling *= rng.random_range(1.0..1.3);
        for i in [2, 3] {
            self.noise[i] = rng.random();
        }
    }

    fn metrics(&self) -> [f64; N_FEATURES] {
        let u = &self.noise;
        let loc = self.ln_loc.exp().round().max(1.0);
        let wmc = (loc / 30.0 * (0.7 + 0.6 * u[0])).round().max(1.0);
        let npm = (wmc * (0.5 + 0.4 * u[1])).round();
        let max_cc = (self.complexity * 3.0).round().max(1.0);
        let avg_cc = round2((self.complexity * (0.6 + 0.4 * u[2])).max(1.0).min(max_cc));
        let cbo = self.coupling.round();
        let ca = (cbo * 0.6 * u[3]).round();
        let ce = cbo - ca;
        let rfc = wmc + (2.0 * self.coupling + wmc * (0.5 + u[4])).round();
        let lcom = (wmc * (wmc - 1.0) / 2.0 * 0.8 * u[5]).round();
        let lcom3 = if wmc > 1.0 { round2(1.5 * u[6]) } else { 0.0 };
        let dit = f64::from(self.dit);
        let mfa = if self.dit > 1 { round2(u[7]) } else { 0.0 };
        let dam = round2(u[8]);
        let moa = (u[9] * u[9] * 4.0).round();
        let cam = round2((1.0 / (1.0 + 0.1 * wmc) * (0.8 + 0.4 * u[10])).min(1.0));
        let ic = ((u[11] * 2.0).round()).min(dit - 1.0);
        let cbm = ic * (u[10] * 2.0).round();
        let amc = round2(loc / wmc);

        let mut m = [0.0; N_FEATURES];
        let mut set = |k: Metric, v: f64| m[k.index()] = v;
        set(Metric::Wmc, wmc);
        set(Metric::Dit, dit);
        set(Metric::Noc, f64::from(self.noc));
        set(Metric::Cbo, cbo);
        set(Metric::Rfc, rfc);
        set(Metric::Lcom, lcom);
        set(Metric::Ca, ca);
        set(Metric::Ce, ce);
        set(Metric::Npm, npm);
        set(Metric::Lcom3, lcom3);
        set(Metric::Loc, loc);
        set(Metric::Dam, dam);
        set(Metric::Moa, moa);
        set(Metric::Mfa, mfa);
        set(Metric::Cam, cam);
        set(Metric::Ic, ic);
        set(Metric::Cbm, cbm);
        set(Metric::Amc, amc);
        set(Metric::MaxCc, max_cc);
        set(Metric::AvgCc, avg_cc);
        m
    }
}

fn release(id: &str, files: &[(String, Latent, u32)]) -> Result<Release> {
    let records = files
        .iter()
        .map(|(name, l, bugs)| MetricRecord::new(name.clone(), l.metrics(), *bugs))
        .collect();
    Release::new(id, records)
}

/// Generates the oldest, newer and most recent releases.
pub fn synthetic_releases(config: &SyntheticConfig) -> Result<[Release; 3]> {
    if config.n_files < 10 {
        return Err(Error::Config("synthetic releases need at least 10 files".into()));
    }
    if !(0.0..0.5).contains(&config.churn) || !(0.0..=1.0).contains(&config.refactor_rate) {
        return Err(Error::Config("synthetic churn or refactor rate out of range".into()));
    }
    let mut rng = rng_from(derive_seed(config.seed, &[0x5e]));
    let mut next_id = 0usize;
    let mut fresh = |rng: &mut ChaCha8Rng| {
        next_id += 1;
        let l = Latent::draw(rng);
        let b = l.bugs(rng);
        (format!("org.synth.p{}.Class{next_id:04}", next_id % 7), l, b)
    };
    let mut files: Vec<(String, Latent, u32)> = (0..config.n_files).map(|_| fresh(&mut rng)).collect();
    let mut out = Vec::with_capacity(3);
    out.push(release("synthetic-1", &files)?);
    for version in 2..=3 {
        let n_churn = (config.churn * config.n_files as f64).round() as usize;
        for _ in 0..n_churn {
            let i = rng.random_range(0..files.len());
            files.remove(i);
        }
        for (_, latent, bugs) in files.iter_mut() {
            let p = if *bugs > 0 { config.refactor_rate } else { config.refactor_rate / 2.0 };
            let r: f64 = rng.random();
            if r < p {
                latent.refactor(&mut rng);
            } else if r < p + 0.15 {
                latent.grow(&mut rng);
            }
            *bugs = latent.bugs(&mut rng);
        }
        for _ in 0..n_churn {
            files.push(fresh(&mut rng));
        }
        out.push(release(&format!("synthetic-{version}"), &files)?);
    }
    let [x, y, z]: [Release; 3] = out.try_into().expect("three releases");
    Ok([x, y, z])
}

pub fn synthetic_triple(config: &SyntheticConfig) -> Result<ReleaseTriple> {
    let [x, y, z] = synthetic_releases(config)?;
    build_triple(x, y, z)
}
