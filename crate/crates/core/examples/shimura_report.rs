//! Tabulates Shimura dimensions against the moduli dimension and lists the
//! degrees where every special subvariety is too small to be met for free.
//!
//! Usage: `cargo run --example shimura_report -- [n_max]`

use attractor_lab::shimura::{counterexample_dimensions, gap_report, GapReport};

fn main() -> attractor_lab::Result<()> {
    let n_max: u32 = std::env::args().nth(1).map(|a| a.parse().expect("integer argument")).unwrap_or(12);
    println!("{}", GapReport::TABLE_HEADER);
    for n in 2..=n_max {
        println!("{}", gap_report(n)?.table_row());
    }
    println!("moduli dimensions with a positive gap: {:?}", counterexample_dimensions(n_max)?);
    Ok(())
}
