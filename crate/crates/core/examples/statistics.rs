//! Descriptive statistics, Kruskal-Wallis and Dunn's test.
//!
//! cargo run --example statistics

use hemas::stats::{describe, kruskal_wallis, mid_ranks, SampleSet, TestReport};

fn main() -> hemas::Result<()> {
    let (ranks, ties) = mid_ranks(&[3.0, 1.0, 3.0, 2.0, 3.0]);
    println!("mid-ranks {ranks:?}, tie groups {ties:?}");

    let kw = kruskal_wallis(&[
        SampleSet::new("a", vec![1.0, 2.0, 3.0])?,
        SampleSet::new("b", vec![4.0, 5.0, 6.0])?,
    ])?;
    println!("H = {:.4}, df = {}, p = {:.4}\n", kw.h, kw.df, kw.p);

    // Three synthetic "algorithms": two similar, one clearly better.
    let spread = |base: f64| -> Vec<f64> {
        (0..30).map(|i| base + ((i * 7919) % 30) as f64 * 0.05).collect()
    };
    let groups = vec![
        SampleSet::new("baseline", spread(6.0))?,
        SampleSet::new("variant", spread(6.1))?,
        SampleSet::new("improved", spread(4.0))?,
    ];
    for g in &groups {
        let s = describe(&g.values)?;
        println!(
            "{:<9} mean {:.3} median {:.3} sd {:.3} min {:.3} max {:.3}",
            g.label, s.mean, s.median, s.sd, s.min, s.max
        );
    }
    let report = TestReport::new(&groups)?;
    println!(
        "\nKruskal-Wallis H = {:.3}, p = {:.3e}",
        report.kruskal_wallis.h, report.kruskal_wallis.p
    );
    for p in &report.pairwise {
        println!(
            "{:>9} vs {:<9} z {:>7.3}  p {:.3e}  bonferroni {:.3e}",
            p.label_a, p.label_b, p.z, p.p_unadjusted, p.p_bonferroni
        );
    }
    Ok(())
}
