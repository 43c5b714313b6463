//! Embeds a few cyclotomic numbers, recovers them from their decimal
//! expansions alone, and shows that π, e and log 2 are left unrecognized.
//!
//! Usage: `cargo run --example recognize -- [n] [digits]`

use attractor_lab::cyclotomic::{recognize, CycloElement};
use attractor_lab::mp::{pi, Complex, Precision};
use rug::Float;

fn main() -> attractor_lab::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().expect("integer argument"));
    let n = args.next().unwrap_or(5);
    let p = Precision::digits(args.next().unwrap_or(60))?;
    let bits = p.bits();
    let phi = attractor_lab::cyclotomic::totient(n) as usize;

    let samples = [
        CycloElement::zeta_pow(n, 1)?,
        CycloElement::from_ints(n, &(0..phi as i64).map(|k| k - 1).collect::<Vec<_>>())?,
        CycloElement::zeta_pow(n, 1)?.add(&CycloElement::one(n)?).inverse()?,
    ];
    for e in &samples {
        let z = e.embed(1, p)?;
        let found = recognize(&z.value, z.error, n, 100, p)?;
        println!("{} -> {}", e.pretty(), found.map_or("none".into(), |r| r.element.pretty()));
    }
    let controls = [
        ("pi", pi(bits)),
        ("e", Float::with_val(bits, 1).exp()),
        ("log 2", Float::with_val(bits, 2).ln()),
    ];
    for (name, x) in controls {
        let found = recognize(&Complex::from_real(x), 0.0, n, 100, p)?;
        println!("{name} -> {}", found.map_or("none".into(), |r| r.element.pretty()));
    }
    Ok(())
}
