//! Tanh-sinh nodes on `[0, 1]`.
//!
//! A node at parameter `t` sits at `left = 1 / (1 + e^{-2s})`, with
//! `s = (π/2) sinh t`, and its mirror image at `1 - left`. Both distances to
//! the endpoints are stored directly so that integrands with algebraic
//! endpoint singularities never see the cancellation in `1 - left`.
//!
//! Level 0 uses step 1; level `l > 0` contributes only the odd multiples of
//! `2^-l`, so a sequence of levels can be summed incrementally.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Float;

use crate::mp::pi;

/// One abscissa pair `(left, right)` with `left + right = 1`.
#[derive(Clone, Debug)]
pub struct Node {
    /// Distance from the left endpoint.
    pub left: Float,
    /// Distance from the right endpoint.
    pub right: Float,
    /// Quadrature weight without the step factor.
    pub weight: Float,
    /// Whether this node is the midpoint (it has no mirror image).
    pub center: bool,
}

/// Deepest level ever generated.
pub const MAX_LEVEL: u32 = 10;

/// Endpoint exponents down to `-(1 - 1/SINGULARITY_HEADROOM)` are supported
/// by the stored node range.
const SINGULARITY_HEADROOM: u32 = 16;

/// Nodes of the given level at `bits` of precision, memoized.
pub fn level_nodes(bits: u32, level: u32) -> Arc<Vec<Node>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Vec<Node>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(nodes) = cache.lock().expect("node cache poisoned").get(&(bits, level)) {
        return nodes.clone();
    }
    let nodes = Arc::new(build_level(bits, level));
    cache.lock().expect("node cache poisoned").entry((bits, level)).or_insert(nodes).clone()
}

/// Step size of a level.
pub fn step(level: u32) -> f64 {
    2f64.powi(-(level as i32))
}

fn build_level(bits: u32, level: u32) -> Vec<Node> {
    let half_pi = Float::with_val(bits, pi(bits) / 2u32);
    // Stop once the node is closer to an endpoint than any supported integrand can notice.
    let cutoff_log2 = -((bits + 20) as f64) * SINGULARITY_HEADROOM as f64;
    let denom = 1u64 << level;
    let mut out = Vec::new();
    let mut k: u64 = if level == 0 { 0 } else { 1 };
    loop {
        let t = Float::with_val(bits, k) / denom;
        let s = Float::with_val(bits, t.sinh_ref()) * &half_pi;
        let e = Float::with_val(bits, -(s.clone() * 2u32)).exp();
        let one_plus = Float::with_val(bits, &e + 1u32);
        let left = Float::with_val(bits, one_plus.recip_ref());
        let right = Float::with_val(bits, &e / &one_plus);
        // (π/2) cosh t sech^2 s, halved for the map [-1, 1] -> [0, 1].
        let sech2 = Float::with_val(bits, &e * 4u32) / Float::with_val(bits, one_plus.square_ref());
        let weight = Float::with_val(bits, t.cosh_ref()) * &half_pi * sech2 / 2u32;
        let (_, exp) = right.to_f64_exp();
        let done = (exp as f64) < cutoff_log2;
        out.push(Node { left, right, weight, center: k == 0 });
        if done {
            break;
        }
        k += if level == 0 { 1 } else { 2 };
    }
    out
}

/// Smallest endpoint distance worth sampling for an endpoint behaving like
/// `dist^(-alpha)`: contributions below `2^-(bits + 20)` are dropped.
pub fn endpoint_cutoff(bits: u32, alpha: f64) -> f64 {
    let margin = (1.0 - alpha.max(0.0)).max(1.0 / SINGULARITY_HEADROOM as f64);
    2f64.powf(-((bits + 20) as f64) / margin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(bits: u32, max_level: u32, f: impl Fn(&Float, &Float) -> Float) -> Float {
        let mut total = Float::new(bits);
        for level in 0..=max_level {
            let nodes = level_nodes(bits, level);
            let mut sum = Float::new(bits);
            for node in nodes.iter() {
                sum += Float::with_val(bits, &node.weight * f(&node.left, &node.right));
                if !node.center {
                    sum += Float::with_val(bits, &node.weight * f(&node.right, &node.left));
                }
            }
            total = if level == 0 { sum } else { total / 2u32 + sum * step(level) };
        }
        total
    }

    #[test]
    fn polynomial_integrates_exactly() {
        let bits = 200;
        let v = integrate(bits, 6, |x, _| Float::with_val(bits, x * x));
        assert!((v - Float::with_val(bits, 1) / 3u32).abs().to_f64() < 1e-55);
    }

    #[test]
    fn endpoint_singularity_via_complement() {
        // ∫_0^1 x^{-1/2} (1-x)^{-1/2} dx = π
        let bits = 200;
        let v = integrate(bits, 7, |x, y| {
            let p = Float::with_val(bits, x * y);
            p.sqrt().recip()
        });
        assert!((v - pi(bits)).abs().to_f64() < 1e-50);
    }

    #[test]
    fn cutoff_is_monotone_in_exponent() {
        assert!(endpoint_cutoff(200, 0.5) > endpoint_cutoff(200, 0.9));
        assert_eq!(endpoint_cutoff(200, -1.0), endpoint_cutoff(200, 0.0));
    }
}
