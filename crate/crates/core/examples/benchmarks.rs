//! Evaluate the four benchmark functions and watch the budget drain.
//!
//! cargo run --example benchmarks

use hemas::benchmarks::{make_benchmark, EvalBudget, FunctionName};

fn main() -> hemas::Result<()> {
    let dim = 5;
    for name in FunctionName::ALL {
        let f = make_benchmark(name, dim)?;
        let b = f.bounds();
        let origin = vec![0.0; dim];
        let ones = vec![1.0; dim];
        println!(
            "{:<10} domain [{:>9}, {:>8}]  f(0) = {:.3e}  f(1,..,1) = {:.6}  budget {}",
            name.as_str(),
            b.lower,
            b.upper,
            f.value(&origin),
            f.value(&ones),
            f.default_budget().limit()
        );
    }

    // Every checked evaluation costs one unit; the last one fails.
    let f = make_benchmark(FunctionName::Rastrigin, 2)?;
    let mut budget = EvalBudget::new(3);
    for x in [[0.0, 0.0], [1.0, 0.0], [0.5, 0.5], [2.0, 2.0]] {
        match f.evaluate(&x, &mut budget) {
            Ok(v) => println!("rastrigin{x:?} = {v}  (used {}/{})", budget.used(), budget.limit()),
            Err(e) => println!("rastrigin{x:?}: {e}"),
        }
    }

    // Out-of-domain points are rejected without being charged.
    let mut budget = EvalBudget::new(10);
    let err = f.evaluate(&[9.0, 0.0], &mut budget).unwrap_err();
    println!("{err}; used {}", budget.used());
    Ok(())
}
