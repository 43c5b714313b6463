//! Integration of multivalued functions `x^a ∏ (x - x_i)^{-b k_i / d}` along
//! polylines, with the branch of every factor continued along the path.
//!
//! The argument of each factor is tracked in `f64` from its value at the path
//! start. Those arguments only select the branch: at every node the value
//! `q = P^{-1/d}` (with `P = ∏ (x - x_i)^{k_i}`) is seeded from them in double
//! precision and then polished by Newton's method for the inverse `d`-th root
//! at full precision. That avoids a multiprecision logarithm and arctangent
//! per factor and node.

use std::f64::consts::PI;

use rug::ops::NegAssign;
use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::mp::Complex;
use crate::quadrature::{endpoint_cutoff, level_nodes, step, MAX_LEVEL};

/// The singular points, their integer multiplicities and the requested outputs.
#[derive(Clone, Debug)]
pub struct Integrand<'a> {
    pub points: &'a [Complex],
    /// Factor `(x - x_i)^{-k_i/d}` for each point.
    pub weights: &'a [i64],
    pub denom: u32,
    /// Each output `(a, b)` integrates `x^a q^b`.
    pub outputs: &'a [(u32, u32)],
}

/// A polyline from `points[from]` to `points[to]` through intermediate vertices.
#[derive(Clone, Debug)]
pub struct Polyline<'a> {
    pub from: usize,
    pub to: usize,
    pub interior: &'a [Complex],
}

/// Integration result: one value per output plus an error estimate.
#[derive(Clone, Debug)]
pub struct PathIntegral {
    pub values: Vec<Complex>,
    pub error: f64,
    /// Deepest quadrature level used on any segment.
    pub level: u32,
}

/// Tuning knobs; the defaults are what every public operation uses.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    /// Target accuracy in decimal digits (relative to `max(1, |value|)`).
    pub digits: u32,
    /// Working precision in bits.
    pub bits: u32,
    /// Paths may not come closer than this to a non-endpoint singularity.
    pub clearance: f64,
    /// Minimum level to reach before the convergence test is trusted.
    pub min_level: u32,
    pub max_level: u32,
}

impl QuadratureOptions {
    pub fn new(digits: u32, bits: u32) -> Self {
        QuadratureOptions { digits, bits, clearance: 1e-12, min_level: 3, max_level: MAX_LEVEL }
    }
}

/// Representative of `theta` modulo 2π closest to `reference`.
pub fn nearest_branch(theta: f64, reference: f64) -> f64 {
    theta + 2.0 * PI * ((reference - theta) / (2.0 * PI)).round()
}

fn to_f64_pair(z: &Complex) -> (f64, f64) {
    z.to_f64()
}

/// Argument of `z / w` in `(-π, π]`, in double precision.
fn arg_ratio(z: (f64, f64), w: (f64, f64)) -> f64 {
    // z * conj(w)
    let re = z.0 * w.0 + z.1 * w.1;
    let im = z.1 * w.0 - z.0 * w.1;
    im.atan2(re)
}

struct Segment {
    a: Complex,
    b: Complex,
    /// The path start coincides with `a` (only for the first piece).
    starts_at: Option<usize>,
    /// The path end coincides with `b` (only for the last piece).
    ends_at: Option<usize>,
}

/// Splits the straight piece `[a, b]` at the foot of any singular point that
/// is much closer to the segment than to its ends.
fn split_segment(seg: Segment, points: &[Complex], opts: &QuadratureOptions, depth: u32, out: &mut Vec<Segment>) -> Result<()> {
    let ab = &seg.b - &seg.a;
    let (dx, dy) = to_f64_pair(&ab);
    let len2 = dx * dx + dy * dy;
    let len = len2.sqrt();
    if len == 0.0 {
        return Err(Error::domain("degenerate path segment of zero length"));
    }
    let mut split: Option<(f64, f64)> = None;
    for (i, p) in points.iter().enumerate() {
        if seg.starts_at == Some(i) || seg.ends_at == Some(i) {
            continue;
        }
        let (px, py) = to_f64_pair(&(p - &seg.a));
        let tau = (px * dx + py * dy) / len2;
        let tc = tau.clamp(0.0, 1.0);
        let dist = ((px - tc * dx).powi(2) + (py - tc * dy).powi(2)).sqrt();
        if dist < opts.clearance {
            return Err(Error::PathTooClose { index: i, distance: dist, clearance: opts.clearance });
        }
        if tau > 0.0 && tau < 1.0 && dist < 0.5 * tau.min(1.0 - tau) * len && split.is_none_or(|s| dist < s.1) {
            split = Some((tau, dist));
        }
    }
    match split {
        Some((tau, _)) if depth < 8 => {
            let foot = &seg.a + &ab.scale_f64(tau);
            split_segment(
                Segment { a: seg.a, b: foot.clone(), starts_at: seg.starts_at, ends_at: None },
                points,
                opts,
                depth + 1,
                out,
            )?;
            split_segment(Segment { a: foot, b: seg.b, starts_at: None, ends_at: seg.ends_at }, points, opts, depth + 1, out)
        }
        _ => {
            out.push(seg);
            Ok(())
        }
    }
}

/// Integrates along `path`, starting from the given factor arguments at the
/// first vertex. `initial_args[from]` is the argument of `x - x_from` along the
/// first segment.
pub fn integrate_polyline(
    integrand: &Integrand<'_>,
    path: &Polyline<'_>,
    initial_args: &[f64],
    opts: &QuadratureOptions,
) -> Result<PathIntegral> {
    let pts = integrand.points;
    assert_eq!(pts.len(), integrand.weights.len());
    assert_eq!(pts.len(), initial_args.len());
    if path.from == path.to && path.interior.is_empty() {
        return Err(Error::domain("path from a point to itself needs a detour"));
    }
    let bits = opts.bits;
    let points: Vec<Complex> = pts.iter().map(|p| p.with_prec(bits)).collect();

    let mut vertices = Vec::with_capacity(path.interior.len() + 2);
    vertices.push(points[path.from].clone());
    vertices.extend(path.interior.iter().map(|v| v.with_prec(bits)));
    vertices.push(points[path.to].clone());

    let mut segments = Vec::new();
    let last = vertices.len() - 2;
    for (k, w) in vertices.windows(2).enumerate() {
        let seg = Segment {
            a: w[0].clone(),
            b: w[1].clone(),
            starts_at: (k == 0).then_some(path.from),
            ends_at: (k == last).then_some(path.to),
        };
        split_segment(seg, &points, opts, 0, &mut segments)?;
    }

    let mut args = initial_args.to_vec();
    let mut totals = vec![Complex::zero(bits); integrand.outputs.len()];
    let mut error = 0.0;
    let mut level = 0;
    for seg in &segments {
        let r = integrate_segment(integrand, &points, seg, &args, opts)?;
        for (t, v) in totals.iter_mut().zip(&r.values) {
            t.add_assign_ref(v);
        }
        error += r.error;
        level = level.max(r.level);
        // Carry the arguments to the far end of the segment.
        let a64 = to_f64_pair(&seg.a);
        let b64 = to_f64_pair(&seg.b);
        for (i, p) in points.iter().enumerate() {
            if seg.starts_at == Some(i) || seg.ends_at == Some(i) {
                continue;
            }
            let p64 = to_f64_pair(p);
            let from = (a64.0 - p64.0, a64.1 - p64.1);
            let to = (b64.0 - p64.0, b64.1 - p64.1);
            args[i] += arg_ratio(to, from);
        }
    }
    Ok(PathIntegral { values: totals, error, level })
}

/// Per-segment data shared by all nodes.
struct SegmentPlan<'a> {
    integrand: &'a Integrand<'a>,
    points: &'a [Complex],
    a: &'a Complex,
    ab: Complex,
    a64: (f64, f64),
    ab64: (f64, f64),
    args: &'a [f64],
    start: Option<usize>,
    end: Option<usize>,
    max_a: u32,
    max_b: u32,
    newton_steps: u32,
}

/// Reusable buffers for one segment, so the node loop does not allocate.
struct Scratch {
    x: Complex,
    diff: Complex,
    num: Complex,
    den: Complex,
    q: Complex,
    t: Complex,
    u: Complex,
    f1: Float,
    f2: Float,
    inv_d: Float,
    xs: Vec<Complex>,
    qs: Vec<Complex>,
    values: Vec<Complex>,
}

impl Scratch {
    fn new(bits: u32, plan: &SegmentPlan<'_>) -> Self {
        let z = Complex::zero(bits);
        Scratch {
            x: z.clone(),
            diff: z.clone(),
            num: z.clone(),
            den: z.clone(),
            q: z.clone(),
            t: z.clone(),
            u: z.clone(),
            f1: Float::new(bits),
            f2: Float::new(bits),
            inv_d: Float::with_val(bits, 1) / plan.integrand.denom,
            xs: vec![z.clone(); plan.max_a as usize + 1],
            qs: vec![z.clone(); plan.max_b as usize + 1],
            values: vec![z; plan.integrand.outputs.len()],
        }
    }
}

/// `z *= w` using two scratch floats.
fn mul_assign(z: &mut Complex, w: &Complex, f1: &mut Float, f2: &mut Float) {
    f1.assign(&z.re * &w.re);
    f2.assign(&z.im * &w.im);
    *f1 -= &*f2;
    f2.assign(&z.re * &w.im);
    z.im *= &w.re;
    z.im += &*f2;
    std::mem::swap(&mut z.re, f1);
}

/// `out = a * b`.
fn mul_into(out: &mut Complex, a: &Complex, b: &Complex, f: &mut Float) {
    out.re.assign(&a.re * &b.re);
    f.assign(&a.im * &b.im);
    out.re -= &*f;
    out.im.assign(&a.re * &b.im);
    f.assign(&a.im * &b.re);
    out.im += &*f;
}

fn set_one(z: &mut Complex) {
    z.re.assign(1);
    z.im.assign(0);
}

impl SegmentPlan<'_> {
    /// Evaluates all outputs `x^a q^b` at the node whose distances to the
    /// segment ends are `l` and `r` (as fractions of the segment), leaving
    /// them in `s.values`.
    fn eval(&self, l: &Float, r: &Float, s: &mut Scratch) {
        let Scratch { x, diff, num, den, q, t, u, f1, f2, inv_d, xs, qs, values } = s;
        x.re.assign(&self.ab.re * l);
        x.im.assign(&self.ab.im * l);
        x.re += &self.a.re;
        x.im += &self.a.im;
        let l64 = l.to_f64();
        let x64 = (self.a64.0 + l64 * self.ab64.0, self.a64.1 + l64 * self.ab64.1);
        let ln_len = 0.5 * (self.ab64.0.powi(2) + self.ab64.1.powi(2)).ln();

        set_one(num);
        set_one(den);
        let mut has_den = false;
        let mut ln_abs = 0.0f64;
        let mut theta = 0.0f64;
        for (i, point) in self.points.iter().enumerate() {
            let k = self.integrand.weights[i];
            if k == 0 {
                continue;
            }
            let (ln_d, arg) = if self.start == Some(i) {
                diff.re.assign(&self.ab.re * l);
                diff.im.assign(&self.ab.im * l);
                (crate::mp::ln_abs_f64(l) + ln_len, self.args[i])
            } else if self.end == Some(i) {
                diff.re.assign(&self.ab.re * r);
                diff.im.assign(&self.ab.im * r);
                diff.re.neg_assign();
                diff.im.neg_assign();
                (crate::mp::ln_abs_f64(r) + ln_len, self.args[i])
            } else {
                diff.re.assign(&x.re - &point.re);
                diff.im.assign(&x.im - &point.im);
                let p64 = point.to_f64();
                let from = (self.a64.0 - p64.0, self.a64.1 - p64.1);
                let here = (x64.0 - p64.0, x64.1 - p64.1);
                (diff.ln_abs_f64(), self.args[i] + arg_ratio(here, from))
            };
            ln_abs += k as f64 * ln_d;
            theta += k as f64 * arg;
            let target = if k > 0 {
                &mut *num
            } else {
                has_den = true;
                &mut *den
            };
            for _ in 0..k.unsigned_abs() {
                mul_assign(target, diff, f1, f2);
            }
        }
        if has_den {
            *num = num.div(den);
        }
        let p = &*num;

        // Seed q = P^{-1/d} in double precision on the tracked branch, then
        // polish with q <- q + q (1 - P q^d) / d.
        let d = self.integrand.denom;
        let log_q = -ln_abs / d as f64;
        let arg_q = -theta / d as f64;
        let e2 = (log_q / std::f64::consts::LN_2).floor();
        let mant = (log_q - e2 * std::f64::consts::LN_2).exp();
        q.re.assign(mant * arg_q.cos());
        q.im.assign(mant * arg_q.sin());
        q.re <<= e2 as i32;
        q.im <<= e2 as i32;
        for _ in 0..self.newton_steps {
            t.clone_from(q);
            for _ in 1..d {
                mul_assign(t, q, f1, f2);
            }
            mul_assign(t, p, f1, f2);
            t.re.neg_assign();
            t.im.neg_assign();
            t.re += 1;
            mul_into(u, q, t, f1);
            u.re *= &*inv_d;
            u.im *= &*inv_d;
            q.re += &u.re;
            q.im += &u.im;
        }

        set_one(&mut xs[0]);
        for k in 1..xs.len() {
            let (head, tail) = xs.split_at_mut(k);
            mul_into(&mut tail[0], &head[k - 1], x, f1);
        }
        set_one(&mut qs[0]);
        for k in 1..qs.len() {
            let (head, tail) = qs.split_at_mut(k);
            mul_into(&mut tail[0], &head[k - 1], q, f1);
        }
        for (v, &(a, b)) in values.iter_mut().zip(self.integrand.outputs) {
            mul_into(v, &xs[a as usize], &qs[b as usize], f1);
        }
    }
}

/// `sum += w * v` for every output.
fn accumulate(sums: &mut [Complex], values: &[Complex], w: &Float, f: &mut Float) {
    for (s, v) in sums.iter_mut().zip(values) {
        f.assign(&v.re * w);
        s.re += &*f;
        f.assign(&v.im * w);
        s.im += &*f;
    }
}

fn integrate_segment(
    integrand: &Integrand<'_>,
    points: &[Complex],
    seg: &Segment,
    args: &[f64],
    opts: &QuadratureOptions,
) -> Result<PathIntegral> {
    let bits = opts.bits;
    let ab = &seg.b - &seg.a;
    let newton_steps = {
        // The double-precision seed is good to roughly 48 bits.
        let mut s = 1;
        let mut acc = 48u32;
        while acc < bits + 8 {
            acc *= 2;
            s += 1;
        }
        s
    };
    let plan = SegmentPlan {
        integrand,
        points,
        a: &seg.a,
        ab64: ab.to_f64(),
        ab,
        a64: seg.a.to_f64(),
        args,
        start: seg.starts_at,
        end: seg.ends_at,
        max_a: integrand.outputs.iter().map(|o| o.0).max().unwrap_or(0),
        max_b: integrand.outputs.iter().map(|o| o.1).max().unwrap_or(0),
        newton_steps,
    };

    // Endpoint exponents decide how close to each end the nodes must go.
    let max_b = plan.max_b as f64;
    let exponent_at = |idx: Option<usize>| -> f64 {
        idx.map_or(0.0, |i| integrand.weights[i] as f64 * max_b / integrand.denom as f64)
    };
    let cut_left = endpoint_cutoff(bits, exponent_at(seg.starts_at));
    let cut_right = endpoint_cutoff(bits, exponent_at(seg.ends_at));

    let m = integrand.outputs.len();
    let mut scratch = Scratch::new(bits, &plan);
    let mut acc = Float::new(bits);
    let mut prev: Option<Vec<Complex>> = None;
    let mut estimate = vec![Complex::zero(bits); m];
    let tol_exp = -(opts.digits as i32 + 5);
    let tol = 10f64.powi(tol_exp);
    for level in 0..=opts.max_level {
        let nodes = level_nodes(bits, level);
        let mut sums = vec![Complex::zero(bits); m];
        for node in nodes.iter() {
            // Node near the right end, then its mirror near the left end; both
            // sit at distance `node.right` from their endpoint.
            let far = node.right.to_f64();
            if far > cut_right || node.center {
                plan.eval(&node.left, &node.right, &mut scratch);
                accumulate(&mut sums, &scratch.values, &node.weight, &mut acc);
            }
            if !node.center && far > cut_left {
                plan.eval(&node.right, &node.left, &mut scratch);
                accumulate(&mut sums, &scratch.values, &node.weight, &mut acc);
            }
        }
        let h = step(level);
        for (e, s) in estimate.iter_mut().zip(sums) {
            *e = if level == 0 { s } else { &e.scale_f64(0.5) + &s.scale_f64(h) };
        }
        if let Some(p) = &prev {
            let scale = estimate.iter().map(Complex::abs_f64).fold(1.0, f64::max) * plan.ab64.0.hypot(plan.ab64.1);
            let diff = estimate.iter().zip(p).map(|(a, b)| (a - b).abs_f64()).fold(0.0, f64::max)
                * plan.ab64.0.hypot(plan.ab64.1);
            if level >= opts.min_level && diff <= tol * scale.max(1.0) {
                let rounding = scale * 2f64.powi(-(bits as i32) + 12);
                let values = estimate.iter().map(|v| v * &plan.ab).collect();
                return Ok(PathIntegral { values, error: diff + rounding, level });
            }
        }
        prev = Some(estimate.clone());
    }
    Err(Error::PrecisionFailure(format!(
        "tanh-sinh did not reach 1e{tol_exp} after {} levels on a segment of length {:.3e}",
        opts.max_level,
        plan.ab64.0.hypot(plan.ab64.1)
    )))
}
