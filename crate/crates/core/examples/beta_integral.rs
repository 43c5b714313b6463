//! Integrates `x^{-1/3} (1 - x)^{-1/3}` over `[0, 1]` with the endpoint-aware
//! tanh-sinh engine and compares against `Γ(2/3)^2 / Γ(4/3)`.
//!
//! Usage: `cargo run --example beta_integral -- [digits]`

use std::f64::consts::PI;

use attractor_lab::mp::{pi, Complex, Precision};
use attractor_lab::periods::{integrate_polyline, quadrature_options, Integrand, Polyline};
use rug::Float;

fn main() -> attractor_lab::Result<()> {
    let digits: u32 = std::env::args().nth(1).map(|a| a.parse().expect("integer argument")).unwrap_or(60);
    let p = Precision::digits(digits)?;
    let bits = p.bits();
    let pts = [Complex::zero(bits), Complex::one(bits)];
    let integrand = Integrand { points: &pts, weights: &[1, 1], denom: 3, outputs: &[(0, 1)] };
    let path = Polyline { from: 0, to: 1, interior: &[] };
    let r = integrate_polyline(&integrand, &path, &[0.0, PI], &quadrature_options(p))?;

    let gamma = |x: Float| Float::with_val(bits, x.gamma_ref());
    let beta = gamma(Float::with_val(bits, 2) / 3u32).square() / gamma(Float::with_val(bits, 4) / 3u32);
    // The integrand starts on the principal branch of (x - 1)^{-1/3}.
    let expected = &Complex::from_real(beta) * &Complex::cis(&Float::with_val(bits, -pi(bits) / 3u32));
    let diff = (&r.values[0] - &expected).abs_f64();
    println!("integral = {}", r.values[0]);
    println!("expected = {expected}");
    println!("difference {diff:.3e}, error estimate {:.3e}, deepest level {}", r.error, r.level);
    Ok(())
}
