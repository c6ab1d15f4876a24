//! Majority-class baseline and results-table rows for test sets with the
//! given positive counts.
//!
//!     cargo run --example majority_baseline -- 349 815

use biaslens::eval::{majority_baseline, percent, table_rows, EvalReport};

fn main() -> anyhow::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (positives, total) = match args[..] {
        [p, n] if p <= n && n > 0 => (p, n),
        [] => (349, 815),
        _ => anyhow::bail!("usage: majority_baseline [POSITIVES TOTAL]"),
    };
    let labels: Vec<bool> = (0..total).map(|i| i < positives).collect();
    let majority = majority_baseline(&labels)?;
    println!("positive rate {}", percent(positives as f64 / total as f64));

    // a hypothetical model that recovers 60% of positives with 10% false alarms
    let predicted: Vec<bool> = (0..total)
        .map(|i| if i < positives { i % 5 < 3 } else { (i - positives) % 10 == 0 })
        .collect();
    let model = EvalReport::from_labels(&labels, &predicted)?;
    for row in table_rows("Model", &model, &majority) {
        println!("{:<12} {:>8}", row.row, row.f1);
    }
    Ok(())
}
