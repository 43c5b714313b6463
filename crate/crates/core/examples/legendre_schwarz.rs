//! The degree-2 family is the Legendre family of elliptic curves. Its
//! Schwarz ratio is `i K(1 - λ) / K(λ)`, which this example compares with an
//! AGM evaluation of the complete elliptic integral.
//!
//! Usage: `cargo run --example legendre_schwarz -- [lambda] [digits]`

use attractor_lab::curve::PointConfiguration;
use attractor_lab::mp::{pi, Complex, Precision};
use attractor_lab::periods::schwarz_map;
use rug::Float;

fn complete_k(m: &Float) -> Float {
    let bits = m.prec();
    let mut a = Float::with_val(bits, 1);
    let mut b = Float::with_val(bits, 1 - m).sqrt();
    for _ in 0..200 {
        let next = Float::with_val(bits, &a + &b) / 2u32;
        b = Float::with_val(bits, &a * &b).sqrt();
        a = next;
    }
    pi(bits) / (a * 2u32)
}

fn main() -> attractor_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let lambda = args.next().unwrap_or_else(|| "0.5".into());
    let digits: u32 = args.next().map(|a| a.parse().expect("integer argument")).unwrap_or(60);
    let p = Precision::digits(digits)?;
    let bits = p.bits();
    let lam = Complex::parse(bits, &lambda, "0")?;
    let s = schwarz_map(&PointConfiguration::legendre(lam.clone())?, p)?;
    let ratio = s.values[1].div(&s.values[0]);

    let m = lam.re.clone();
    let expected = Float::with_val(bits, complete_k(&Float::with_val(bits, 1 - &m)) / complete_k(&m));
    let expected = Complex::from_parts(Float::new(bits), expected);
    println!("schwarz ratio  {ratio}");
    println!("agm prediction {expected}");
    println!("difference {:.3e}", (&ratio - &expected).abs_f64());
    Ok(())
}
