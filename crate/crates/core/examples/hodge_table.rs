//! Prints the Hodge numbers of every eigenspace, the genus and the Prym
//! decomposition for a range of cover degrees.
//!
//! Usage: `cargo run --example hodge_table -- [n_max]`

use attractor_lab::curve::{genus, hodge_profile, prym_profile};

fn main() -> attractor_lab::Result<()> {
    let n_max: u32 = std::env::args().nth(1).map(|a| a.parse().expect("integer argument")).unwrap_or(6);
    for n in 2..=n_max {
        let profile = hodge_profile(n)?;
        let rows: Vec<String> = profile.rows.iter().map(|(a, b)| format!("({a},{b})")).collect();
        let prym = prym_profile(n)?;
        let quotients: u32 = prym.quotient_genera.values().sum();
        println!(
            "n={n} genus={} rows={} prym={} quotients={quotients}",
            genus(n)?,
            rows.join(" "),
            prym.prym_dim
        );
    }
    Ok(())
}
