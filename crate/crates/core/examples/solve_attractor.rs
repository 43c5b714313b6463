//! Newton-solves for the Legendre parameter whose period ratio is `i` (the
//! square-lattice curve at λ = 1/2), starting from λ = 0.4, and prints the
//! certificate.
//!
//! Usage: `cargo run --example solve_attractor -- [start] [digits]`

use attractor_lab::attractor::{solve_attractor, AttractorTarget, SolverOptions};
use attractor_lab::curve::PointConfiguration;
use attractor_lab::cyclotomic::CycloElement;
use attractor_lab::mp::{Complex, Precision};

fn main() -> attractor_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let start = args.next().unwrap_or_else(|| "0.4".into());
    let digits: u32 = args.next().map(|a| a.parse().expect("integer argument")).unwrap_or(60);
    let p = Precision::digits(digits)?;
    let initial = PointConfiguration::legendre(Complex::parse(p.bits(), &start, "0")?)?;
    // Entries live in Q(ζ_4) = Q(i): 1 and i.
    let target = AttractorTarget::new(vec![CycloElement::one(4)?, CycloElement::zeta_pow(4, 1)?])?;
    let cert = solve_attractor(&target, &initial, p, SolverOptions::default())?;
    let lambda = &cert.configuration.free()[0];
    println!("lambda = {}", lambda);
    println!("status {}, {} iterations, residual {:.3e}", cert.status, cert.iterations, cert.residual);
    println!("residual trace {:?}", cert.residual_trace);
    Ok(())
}
