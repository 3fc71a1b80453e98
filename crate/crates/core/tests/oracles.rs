//! Reference-implementation agreement for the mining, discretization,
//! threshold and support searches.

mod common;

use common::*;
use defect_planning::data::{MetricRecord, NormalizationMap, Release};
use defect_planning::discretize::Interval;
use defect_planning::evaluate::{overlap, OverlapMode, Verdict};
use defect_planning::planners::{fit_alves, Plan, PlanAction, PlannerKind};
use defect_planning::{Metric, N_FEATURES};
use rand::Rng;

fn report(name: &str, a: &Agreement) {
    assert!(a.all(), "{name}: {}/{} agree; first mismatch {:?}", a.agree, a.total, a.first_mismatch);
    assert!(4 * a.nontrivial >= a.total, "{name}: only {} of {} fixtures are non-trivial", a.nontrivial, a.total);
}

#[test]
fn fp_growth_matches_subset_enumeration() {
    report("fp_growth", &fp_growth_suite(200));
}

#[test]
fn fayyad_irani_matches_exhaustive_mdlp() {
    report("mdlp", &mdlp_suite(200));
}

#[test]
fn oliveira_matches_full_grid() {
    report("oliveira", &oliveira_suite(50));
}

#[test]
fn find_support_matches_plan_enumeration() {
    report("find_support", &find_support_suite(50));
}

#[test]
fn overlap_matches_per_feature_oracle() {
    for seed in 0..100 {
        let mut r = rng(5000 + seed);
        let cuts: Vec<Vec<f64>> = (0..N_FEATURES).map(|_| random_cuts(&mut r)).collect();
        let bins = bins_from(cuts.clone());
        let mut plan = Plan::keep_all(PlannerKind::Random, N_FEATURES);
        for a in plan.actions.iter_mut() {
            if r.random_bool(0.4) {
                let (p, q): (f64, f64) = (r.random(), r.random());
                *a = PlanAction::Move {
                    interval: Interval { lo: p.min(q), hi: p.max(q) },
                    direction: None,
                };
            }
        }
        let y: Vec<f64> = (0..N_FEATURES).map(|_| r.random()).collect();
        // Half the features keep their y value so TN verdicts occur.
        let z: Vec<f64> = y.iter().map(|&v| if r.random_bool(0.5) { v } else { r.random() }).collect();
        let want: Vec<Verdict> = (0..N_FEATURES)
            .map(|f| oracle_verdict(&plan.actions[f], &cuts[f], y[f], z[f]))
            .collect();
        let got = overlap(&plan, &y, &z, &bins, OverlapMode::Matches).unwrap();
        assert_eq!(got.verdicts, want, "seed {seed}");
        let hits = want.iter().filter(|v| matches!(v, Verdict::TP | Verdict::TN)).count();
        assert_eq!(got.score, 100.0 * hits as f64 / N_FEATURES as f64);
        assert_eq!(got.counts.total(), N_FEATURES);

        let tp = want.iter().filter(|v| **v == Verdict::TP).count();
        let misses = want.iter().filter(|v| matches!(v, Verdict::FP | Verdict::FN)).count();
        let jac = overlap(&plan, &y, &z, &bins, OverlapMode::Jaccard).unwrap().score;
        let expected = if tp + misses == 0 { 100.0 } else { 100.0 * tp as f64 / (tp + misses) as f64 };
        assert_eq!(jac, expected);
    }
}

#[test]
fn alves_with_uniform_loc_is_the_empirical_cdf_threshold() {
    for seed in 0..30 {
        let mut r = rng(6000 + seed);
        let n = r.random_range(5..80);
        let records: Vec<MetricRecord> = (0..n)
            .map(|i| {
                let mut m = [0.0; N_FEATURES];
                for v in m.iter_mut() {
                    *v = r.random_range(0..50) as f64;
                }
                m[Metric::Loc.index()] = 100.0;
                MetricRecord::new(format!("F{i}"), m, u32::from(r.random_bool(0.5)))
            })
            .collect();
        let release = Release::new("fixture", records).unwrap();
        let map = NormalizationMap::fit(&[&release]).unwrap();
        let rules = fit_alves(&release, &map, 70.0, 0.05).unwrap();
        for f in 0..N_FEATURES {
            let col = release.column(f);
            // Smallest observed value v with #(x <= v) / n >= 0.7.
            let mut cands = col.clone();
            cands.sort_by(f64::total_cmp);
            let want = cands
                .iter()
                .copied()
                .find(|&v| col.iter().filter(|&&x| x <= v).count() as f64 >= 0.7 * n as f64 - 1e-9)
                .unwrap();
            assert_eq!(rules.rules[f].threshold, want, "seed {seed} feature {f}");
        }
    }
}
