//! Draws targets near the equally spaced configuration and counts how many
//! of them lead to certified attractor points.
//!
//! Usage: `cargo run --example density_scan -- [n] [count] [seed]`

use attractor_lab::attractor::density_scan;
use attractor_lab::mp::Precision;

fn main() -> attractor_lab::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = args.first().copied().unwrap_or(2) as u32;
    let count = args.get(1).copied().unwrap_or(20) as usize;
    let seed = args.get(2).copied().unwrap_or(7);
    let report = density_scan(n, count, 100, seed, Precision::digits(60)?)?;
    print!("{}", report.summary_csv());
    println!("certified {} of {count}, distinct {}", report.certified, report.distinct);
    Ok(())
}
