//! Acceptance runner: one PASS/FAIL line per criterion.
//!
//! Criteria 1 to 4 run full-budget campaigns (30 runs each) and take several
//! minutes. The process exits non-zero if any criterion fails.

mod common;

use std::time::Instant;

use hemas::benchmarks::FunctionName;
use hemas::harness::{execute, ExperimentConfig, Preset};
use hemas::stats::{describe, SampleSet, Summary, TestReport};

const RUNS: u64 = 30;
const MASTER_SEED: u64 = 1;

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn report(o: &Outcome, started: Instant) {
    println!(
        "{} [{}] {} -- {} ({:.1?})",
        if o.passed { "PASS" } else { "FAIL" },
        o.id,
        o.title,
        o.detail,
        started.elapsed()
    );
}

fn campaign(preset: Preset, function: FunctionName, dim: usize) -> SampleSet {
    let mut c = ExperimentConfig::from_preset(preset, function, dim);
    c.repetitions = RUNS;
    c.master_seed = MASTER_SEED;
    let finals = execute(&c)
        .unwrap_or_else(|e| panic!("{preset} on {function} {dim}-D failed: {e}"))
        .iter()
        .map(|r| r.final_best_fitness)
        .collect();
    SampleSet::new(preset.as_str(), finals).unwrap()
}

fn summary(s: &SampleSet) -> Summary {
    describe(&s.values).unwrap()
}

type NamedCheck<'a> = (&'a str, fn() -> common::Check);

fn from_checks(id: u32, title: &'static str, checks: &[NamedCheck]) -> Outcome {
    let mut failures = Vec::new();
    for (name, check) in checks {
        if let Err(e) = check() {
            failures.push(format!("{name}: {e}"));
        }
    }
    Outcome {
        id,
        title,
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{} checks hold", checks.len())
        } else {
            failures.join("; ")
        },
    }
}

fn main() {
    let mut outcomes = Vec::new();
    let mut run = |f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        report(&o, t);
        outcomes.push(o);
    };

    run(&mut || {
        from_checks(
            7,
            "benchmark unit values",
            &[("values", common::benchmark_values)],
        )
    });

    run(&mut || {
        let mut o = from_checks(
            6,
            "statistics oracles",
            &[
                ("dunn pair order", common::dunn_order_invariance),
                ("ranks vs brute force, pooled size <= 8", common::ranks_match_oracle),
            ],
        );
        match common::kw_hand_example() {
            Ok(h) => o.detail = format!("H([1,2,3],[4,5,6]) = {h:.4}; {}", o.detail),
            Err(e) => {
                o.passed = false;
                o.detail = format!("kruskal-wallis: {e}; {}", o.detail);
            }
        }
        o
    });

    run(&mut || {
        from_checks(
            5,
            "property suite",
            &[
                ("energy conservation", common::energy_conservation),
                ("budget exactness", common::budget_exactness),
                ("best-so-far monotonicity", common::best_so_far_monotone),
                ("PSO non-degradation", common::pso_non_degradation),
                ("GA elitism", common::ga_elitism),
                ("inert HEMAS equals EMAS", common::inert_hemas_is_emas),
            ],
        )
    });

    run(&mut || {
        let s = summary(&campaign(Preset::Emas, FunctionName::Ackley, 100));
        Outcome {
            id: 1,
            title: "EMAS Ackley 100-D mean final fitness in [4.0, 8.5]",
            passed: (4.0..=8.5).contains(&s.mean),
            detail: format!(
                "mean {:.4}, median {:.4}, sd {:.4}, min {:.4}, max {:.4}",
                s.mean, s.median, s.sd, s.min, s.max
            ),
        }
    });

    let t = Instant::now();
    let groups_300: Vec<SampleSet> = Preset::ALL
        .iter()
        .map(|&p| campaign(p, FunctionName::Ackley, 300))
        .collect();
    println!("     Ackley 300-D campaign, 4 presets x {RUNS} runs ({:.1?})", t.elapsed());
    let report_300 = TestReport::new(&groups_300).unwrap();
    let by_label = |label: &str| summary(groups_300.iter().find(|g| g.label == label).unwrap());

    run(&mut || {
        let (e, h1, h2) = (by_label("emas"), by_label("hemas1"), by_label("hemas2"));
        let p_e = report_300.pair("hemas2", "emas").unwrap().p_unadjusted;
        let p_1 = report_300.pair("hemas2", "hemas1").unwrap().p_unadjusted;
        let beats_emas = h2.median < e.median && p_e < 0.05;
        let beats_h1 = h2.median < h1.median && p_1 < 0.05;
        let tighter = h2.sd < h1.sd;
        Outcome {
            id: 3,
            title: "Ackley 300-D: hemas2 beats emas and hemas1 (Dunn p < 0.05), sd(hemas2) < sd(hemas1)",
            passed: beats_emas && beats_h1 && tighter,
            detail: format!(
                "medians emas {:.4} / hemas1 {:.4} / hemas2 {:.4}; p(hemas2,emas) {:.3e}, p(hemas2,hemas1) {:.3e}; sd hemas1 {:.4}, hemas2 {:.4}",
                e.median, h1.median, h2.median, p_e, p_1, h1.sd, h2.sd
            ),
        }
    });

    run(&mut || {
        let p = report_300.pair("hemas2", "hemas3").unwrap().p_unadjusted;
        Outcome {
            id: 4,
            title: "Ackley 300-D: hemas2 vs hemas3 Dunn p > 0.05",
            passed: p > 0.05,
            detail: format!(
                "p {:.3e}; medians hemas2 {:.4}, hemas3 {:.4}",
                p,
                by_label("hemas2").median,
                by_label("hemas3").median
            ),
        }
    });

    run(&mut || {
        let groups = vec![
            campaign(Preset::Emas, FunctionName::Ackley, 1000),
            campaign(Preset::Hemas1, FunctionName::Ackley, 1000),
        ];
        let report = TestReport::new(&groups).unwrap();
        let (e, h1) = (summary(&groups[0]), summary(&groups[1]));
        let p = report.pair("hemas1", "emas").unwrap().p_unadjusted;
        Outcome {
            id: 2,
            title: "Ackley 1000-D: median(hemas1) < median(emas) with Dunn p < 0.05",
            passed: h1.median < e.median && p < 0.05,
            detail: format!("medians emas {:.4}, hemas1 {:.4}; p {:.3e}", e.median, h1.median, p),
        }
    });

    outcomes.sort_by_key(|o| o.id);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("\nacceptance summary: {passed}/{} criteria passed", outcomes.len());
    for o in &outcomes {
        println!("  {} [{}] {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title);
    }
    if passed != outcomes.len() {
        std::process::exit(1);
    }
}
