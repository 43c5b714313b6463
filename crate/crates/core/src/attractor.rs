//! Attractor points: configurations whose Schwarz vector is proportional to a
//! vector with entries in a cyclotomic field.
//!
//! Certification recognizes every ratio `S_k / S_pivot` (pivot = entry of
//! largest modulus) as an element of bounded height. For `n = 2` the ratios
//! live in Q(i) rather than Q(ζ_2) = Q, so the certification field has order
//! [`certification_order`]`(2) = 4`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::curve::PointConfiguration;
use crate::cyclotomic::{recognize, CycloElement};
use crate::error::{Error, Result};
use crate::mp::{CMatrix, Complex, Precision};
use crate::periods::{schwarz_derivatives, schwarz_map, schwarz_map_with_reference, SchwarzVector};

/// Order of the cyclotomic field the ratios are certified in.
pub fn certification_order(n: u32) -> u32 {
    if n == 2 {
        4
    } else {
        n
    }
}

/// A target vector `v` for the Schwarz map, defined up to scale.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttractorTarget {
    pub v: Vec<CycloElement>,
}

impl AttractorTarget {
    pub fn new(v: Vec<CycloElement>) -> Result<Self> {
        if v.iter().all(CycloElement::is_zero) {
            return Err(Error::domain("target vector is zero"));
        }
        if v.windows(2).any(|w| w[0].n() != w[1].n()) {
            return Err(Error::domain("target entries lie in different fields"));
        }
        Ok(AttractorTarget { v })
    }

    /// Largest entry height.
    pub fn height(&self) -> u64 {
        self.v.iter().map(CycloElement::height_u64).max().unwrap_or(0)
    }
}

/// Outcome of trying to recognize the Schwarz ratios of a configuration.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub pivot: usize,
    /// Recognized ratios (the pivot entry is 1), or `None` if any failed.
    pub ratios: Option<Vec<CycloElement>>,
    /// Worst `|embed(e_k) - z_k| + err(z_k)`; infinite when recognition failed.
    pub residual: f64,
    pub schwarz: SchwarzVector,
}

impl ResidualReport {
    pub fn is_attractor(&self) -> bool {
        self.ratios.is_some()
    }
}

/// Recognizes the Schwarz ratios of `cfg` with heights at most `height_bound`.
///
/// The reported residual adds the propagated quadrature error to the
/// recognition residual, so it bounds the distance between the exact ratio
/// and its recognized value as long as the error estimates hold.
pub fn attractor_residual(cfg: &PointConfiguration, height_bound: u64, precision: Precision) -> Result<ResidualReport> {
    let cfg = cfg.with_prec(cfg.prec().max(precision.bits()));
    let schwarz = schwarz_map(&cfg, precision)?;
    residual_of(schwarz, certification_order(cfg.n()), height_bound, precision)
}

fn residual_of(schwarz: SchwarzVector, order: u32, height_bound: u64, precision: Precision) -> Result<ResidualReport> {
    let pivot = schwarz.pivot();
    let mut ratios = Vec::new();
    let mut residual = 0.0f64;
    for (k, r) in schwarz.ratios(pivot).into_iter().enumerate() {
        if k == pivot {
            ratios.push(CycloElement::one(order)?);
            continue;
        }
        let found = if r.error <= precision.half_epsilon() {
            recognize(&r.value, r.error, order, height_bound, precision)?
        } else {
            None
        };
        match found {
            Some(rec) => {
                residual = residual.max(rec.residual + r.error);
                ratios.push(rec.element);
            }
            None => return Ok(ResidualReport { pivot, ratios: None, residual: f64::INFINITY, schwarz }),
        }
    }
    Ok(ResidualReport { pivot, ratios: Some(ratios), residual, schwarz })
}

/// Newton iteration limits and tolerances.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Stop once `|S - cT| / |S|` drops below `10^-(digits - slack)`.
    pub slack_digits: u32,
    pub height_bound: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { max_iterations: 40, slack_digits: 4, height_bound: 100 }
    }
}

/// A certified attractor point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttractorCertificate {
    pub schema: String,
    pub n: u32,
    pub field_order: u32,
    pub precision: u32,
    pub height_bound: u64,
    pub configuration: PointConfiguration,
    pub pivot: usize,
    pub ratios: Vec<CycloElement>,
    pub residual: f64,
    /// `certified` when the residual is within `10^(-precision/2)`, else `candidate`.
    pub status: String,
    /// Target the solver was aimed at, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<AttractorTarget>,
    #[serde(default)]
    pub iterations: usize,
    #[serde(default)]
    pub residual_trace: Vec<f64>,
}

pub const CERTIFICATE_SCHEMA: &str = "attractor-cert/1";

impl AttractorCertificate {
    /// Certifies `cfg` directly; fails with `None` if some ratio is not recognized.
    pub fn certify(cfg: &PointConfiguration, height_bound: u64, precision: Precision) -> Result<Option<Self>> {
        let report = attractor_residual(cfg, height_bound, precision)?;
        Ok(report.ratios.map(|ratios| AttractorCertificate {
            schema: CERTIFICATE_SCHEMA.to_string(),
            n: cfg.n(),
            field_order: certification_order(cfg.n()),
            precision: precision.get(),
            height_bound,
            configuration: cfg.clone(),
            pivot: report.pivot,
            ratios,
            status: if report.residual <= precision.half_epsilon() { "certified" } else { "candidate" }.to_string(),
            residual: report.residual,
            target: None,
            iterations: 0,
            residual_trace: Vec::new(),
        }))
    }

    /// Recomputes the residual of the recorded ratios at another precision.
    ///
    /// Returns `None` when the ratios recognized at `precision` differ from
    /// the recorded ones.
    pub fn recheck(&self, precision: Precision) -> Result<Option<f64>> {
        let report = attractor_residual(&self.configuration, self.height_bound, precision)?;
        Ok(match report.ratios {
            Some(r) if r == self.ratios && report.pivot == self.pivot => Some(report.residual),
            _ => None,
        })
    }

    /// Whether the recognized ratios agree with the target's ratios.
    pub fn matches_target(&self) -> bool {
        match &self.target {
            None => false,
            Some(t) => match ratios_of(&t.v, self.pivot) {
                Ok(r) => r == self.ratios,
                Err(_) => false,
            },
        }
    }
}

/// `t_k / t_pivot` exactly.
pub fn ratios_of(target: &[CycloElement], pivot: usize) -> Result<Vec<CycloElement>> {
    let p = target.get(pivot).ok_or_else(|| Error::domain("pivot outside the target"))?;
    target.iter().map(|t| t.div(p)).collect()
}

fn embed_target(target: &[CycloElement], precision: Precision) -> Result<Vec<Complex>> {
    target.iter().map(|t| Ok(t.embed(1, precision)?.value)).collect()
}

fn max_abs(v: &[Complex]) -> f64 {
    v.iter().map(Complex::abs_f64).fold(0.0, f64::max)
}

/// Distance from free coordinate `k` to the nearest other chain point.
fn clearance(cfg: &PointConfiguration, k: usize) -> f64 {
    let chain = cfg.chain(64);
    chain
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k + 1)
        .map(|(_, x)| (x - &chain[k + 1]).abs_f64())
        .fold(f64::INFINITY, f64::min)
}

/// Solves `S(s) = c · embed(target)` for the free coordinates `s` and a scale
/// `c` by a damped Newton iteration, starting at `initial`, then certifies
/// the result.
///
/// Steps are capped at a third of each point's clearance so the branch choice
/// can be continued from one iterate to the next.
pub fn solve_attractor(
    target: &AttractorTarget,
    initial: &PointConfiguration,
    precision: Precision,
    options: SolverOptions,
) -> Result<AttractorCertificate> {
    let n = initial.n();
    let order = certification_order(n);
    let m = 2 * n as usize - 2;
    if target.v.len() != m {
        return Err(Error::domain(format!("target needs {m} entries for n = {n}, got {}", target.v.len())));
    }
    if target.v.iter().any(|t| t.n() != order) {
        return Err(Error::domain(format!("target entries must lie in Q(zeta_{order})")));
    }
    let bits = precision.bits();
    let t = embed_target(&target.v, precision)?;
    let h = 10f64.powf(-(precision.get() as f64) / 3.0);
    let tol = 10f64.powi(-(precision.get() as i32 - options.slack_digits as i32));

    let mut cfg = initial.with_prec(bits);
    let (s, mut reference) = schwarz_map_with_reference(&cfg, None, precision)?;
    // Least-squares scale: c = <T, S> / <T, T>.
    let mut c = {
        let mut num = Complex::zero(bits);
        let mut den = Float::new(bits);
        for (ti, si) in t.iter().zip(&s.values) {
            num.add_mul(&ti.conj(), si);
            den += ti.norm_sqr();
        }
        num.scale(&den.recip())
    };
    let residual_vec = |s: &SchwarzVector, c: &Complex| -> Vec<Complex> {
        s.values.iter().zip(&t).map(|(si, ti)| si - &(c * ti)).collect()
    };
    let mut f = residual_vec(&s, &c);
    let mut rel = max_abs(&f) / max_abs(&s.values);
    let mut trace = vec![rel];

    for iteration in 1..=options.max_iterations {
        if rel <= tol {
            return finish(cfg, target, options, precision, iteration - 1, trace);
        }
        let mut columns = schwarz_derivatives(&cfg, &reference, h, precision)?;
        columns.push(t.iter().map(|x| -x).collect());
        let jac = CMatrix::from_columns(columns);
        let rhs = CMatrix::from_columns(vec![f.iter().map(|x| -x).collect()]);
        let delta = jac.solve(&rhs, 1e-30)?.column(0);

        let cap = (0..m - 1)
            .map(|k| clearance(&cfg, k) / (3.0 * delta[k].abs_f64().max(f64::MIN_POSITIVE)))
            .fold(1.0f64, f64::min);
        let mut lambda = cap;
        let mut accepted = false;
        for _ in 0..12 {
            let lam = Complex::from_f64(bits, lambda, 0.0);
            let candidate = cfg.map_free(|k, z| z + &(&lam * &delta[k]));
            if let Ok(next) = candidate {
                match schwarz_map_with_reference(&next, Some(&reference), precision) {
                    Ok((s_next, r_next)) => {
                        let c_next = &c + &(&lam * &delta[m - 1]);
                        let f_next = residual_vec(&s_next, &c_next);
                        let rel_next = max_abs(&f_next) / max_abs(&s_next.values);
                        if rel_next < rel || lambda < 1e-3 {
                            cfg = next;
                            reference = r_next;
                            c = c_next;
                            f = f_next;
                            rel = rel_next;
                            accepted = true;
                            break;
                        }
                    }
                    Err(Error::PathTooClose { .. } | Error::DegenerateConfiguration(_) | Error::PrecisionFailure(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            lambda /= 2.0;
        }
        trace.push(rel);
        if !accepted {
            return Err(Error::DomainExit { last: Box::new(cfg), iterations: iteration, trace });
        }
    }
    if rel <= tol {
        return finish(cfg, target, options, precision, options.max_iterations, trace);
    }
    Err(Error::NoConvergence { iterations: options.max_iterations, trace })
}

fn finish(
    cfg: PointConfiguration,
    target: &AttractorTarget,
    options: SolverOptions,
    precision: Precision,
    iterations: usize,
    trace: Vec<f64>,
) -> Result<AttractorCertificate> {
    match AttractorCertificate::certify(&cfg, options.height_bound, precision)? {
        Some(mut cert) => {
            cert.target = Some(target.clone());
            cert.iterations = iterations;
            cert.residual_trace = trace;
            Ok(cert)
        }
        None => Err(Error::NoConvergence { iterations, trace }),
    }
}

/// Status of one density-scan target.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStatus {
    Certified,
    Failed,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanOutcome {
    pub index: usize,
    pub target: AttractorTarget,
    pub status: ScanStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub configuration: Option<PointConfiguration>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_target: Option<bool>,
    #[serde(skip)]
    pub certificate: Option<AttractorCertificate>,
    /// Index of the first certified configuration within `1e-10` of this one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinct_id: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub schema: &'static str,
    pub n: u32,
    pub seed: u64,
    pub precision: u32,
    pub height_bound: u64,
    pub base: PointConfiguration,
    pub outcomes: Vec<ScanOutcome>,
    pub certified: usize,
    /// Certified configurations that are pairwise more than `1e-10` apart.
    pub distinct: usize,
}

/// Configurations closer than this count as the same attractor.
pub const DISTINCT_TOLERANCE: f64 = 1e-10;

/// Radius of the ball around the base ratios that targets are drawn from.
const SCAN_RADIUS: f64 = 0.15;

/// Field element `a_0 + a_1 ζ` with denominator `d` closest to `z`.
fn nearest_element(order: u32, z: (f64, f64), d: i64) -> Result<CycloElement> {
    let angle = 2.0 * std::f64::consts::PI / order as f64;
    let a1 = z.1 / angle.sin();
    let a0 = z.0 - a1 * angle.cos();
    let phi = crate::cyclotomic::totient(order) as usize;
    let mut coeffs = vec![Rational::new(); phi];
    coeffs[0] = Rational::from(((a0 * d as f64).round() as i64, d));
    coeffs[1] = Rational::from(((a1 * d as f64).round() as i64, d));
    CycloElement::from_coeffs(order, coeffs)
}

fn embed_f64(e: &CycloElement) -> (f64, f64) {
    let p = Precision::digits(Precision::MIN_DIGITS).expect("minimum precision");
    e.embed(1, p).expect("embedding 1 always exists").value.to_f64()
}

/// Draws a target near the base ratios `base` (pivot entry exactly 1) with
/// every other entry strictly inside the unit disk, so the pivot is preserved.
fn draw_target(rng: &mut ChaCha8Rng, base: &[(f64, f64)], pivot: usize, order: u32, height_bound: u64) -> Result<AttractorTarget> {
    let max_den = height_bound.clamp(2, 20) as i64;
    let mut out = Vec::with_capacity(base.len());
    for (k, &b) in base.iter().enumerate() {
        if k == pivot {
            out.push(CycloElement::one(order)?);
            continue;
        }
        let mut chosen = None;
        for _ in 0..1000 {
            let r = SCAN_RADIUS * rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            let d = rng.gen_range(2..=max_den);
            let e = nearest_element(order, (b.0 + r * theta.cos(), b.1 + r * theta.sin()), d)?;
            let v = embed_f64(&e);
            let modulus = v.0.hypot(v.1);
            let near = (v.0 - b.0).hypot(v.1 - b.1) <= SCAN_RADIUS;
            if near && modulus < 1.0 - 1e-3 && modulus > 1e-3 && e.height_u64() <= height_bound {
                chosen = Some(e);
                break;
            }
        }
        out.push(chosen.ok_or_else(|| Error::domain("no admissible target entry near the base ratio"))?);
    }
    AttractorTarget::new(out)
}

/// Draws `count` distinct targets near the Schwarz ratios of the equally
/// spaced configuration and tries to solve for each.
///
/// Target `i` uses its own ChaCha stream, so reports are reproducible and do
/// not depend on the thread count.
pub fn density_scan(n: u32, count: usize, height_bound: u64, seed: u64, precision: Precision) -> Result<DensityReport> {
    if count == 0 {
        return Err(Error::domain("density scan needs at least one target"));
    }
    let order = certification_order(n);
    let base = PointConfiguration::equally_spaced(n, precision.bits())?;
    let s = schwarz_map(&base, precision)?;
    let pivot = s.pivot();
    let base_ratios: Vec<(f64, f64)> = s.ratios(pivot).iter().map(|r| r.value.to_f64()).collect();

    let mut targets: Vec<AttractorTarget> = Vec::with_capacity(count);
    for index in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let mut t = draw_target(&mut rng, &base_ratios, pivot, order, height_bound)?;
        for _ in 0..100 {
            if !targets.contains(&t) {
                break;
            }
            t = draw_target(&mut rng, &base_ratios, pivot, order, height_bound)?;
        }
        targets.push(t);
    }

    let options = SolverOptions { height_bound, ..SolverOptions::default() };
    let outcomes: Vec<ScanOutcome> = targets
        .into_par_iter()
        .enumerate()
        .map(|(index, target)| match solve_attractor(&target, &base, precision, options) {
            Ok(cert) => ScanOutcome {
                index,
                status: ScanStatus::Certified,
                reason: None,
                iterations: cert.iterations,
                residual: Some(cert.residual),
                matches_target: Some(cert.matches_target()),
                configuration: Some(cert.configuration.clone()),
                certificate: Some(cert),
                distinct_id: None,
                target,
            },
            Err(e) => ScanOutcome {
                index,
                status: ScanStatus::Failed,
                reason: Some(e.to_string()),
                iterations: match &e {
                    Error::DomainExit { iterations, .. } | Error::NoConvergence { iterations, .. } => *iterations,
                    _ => 0,
                },
                residual: None,
                configuration: None,
                matches_target: None,
                certificate: None,
                distinct_id: None,
                target,
            },
        })
        .collect();

    let mut outcomes = outcomes;
    let mut distinct: Vec<PointConfiguration> = Vec::new();
    let mut certified = 0;
    for o in outcomes.iter_mut() {
        if let Some(c) = &o.configuration {
            certified += 1;
            let id = match distinct.iter().position(|d| d.distance(c) <= DISTINCT_TOLERANCE) {
                Some(id) => id,
                None => {
                    distinct.push(c.clone());
                    distinct.len() - 1
                }
            };
            o.distinct_id = Some(id);
        }
    }
    Ok(DensityReport {
        schema: "density-scan/1",
        n,
        seed,
        precision: precision.get(),
        height_bound,
        base,
        certified,
        distinct: distinct.len(),
        outcomes,
    })
}

impl DensityReport {
    /// One line per target:
    /// `index,status,target_height,iterations,residual,matches_target,distinct_id`.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("index,status,target_height,iterations,residual,matches_target,distinct_id\n");
        for o in &self.outcomes {
            let status = match o.status {
                ScanStatus::Certified => "certified",
                ScanStatus::Failed => "failed",
            };
            let residual = o.residual.map(|r| format!("{r:e}")).unwrap_or_default();
            let matches = o.matches_target.map(|m| m.to_string()).unwrap_or_default();
            let id = o.distinct_id.map(|d| d.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{status},{},{},{residual},{matches},{id}\n",
                o.index,
                o.target.height(),
                o.iterations
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec(d: u32) -> Precision {
        Precision::digits(d).unwrap()
    }

    #[test]
    fn square_lattice_is_an_attractor() {
        let p = prec(50);
        let cfg = PointConfiguration::from_f64(2, p.bits(), &[(0.5, 0.0)]).unwrap();
        let cert = AttractorCertificate::certify(&cfg, 10, p).unwrap().expect("λ = 1/2 is CM");
        assert_eq!(cert.ratios.len(), 2);
        let i = CycloElement::zeta_pow(4, 1).unwrap();
        assert!(cert.ratios.contains(&i) || cert.ratios.contains(&i.neg()));
        assert!(cert.residual < 1e-40);
    }

    #[test]
    fn generic_legendre_point_is_not_certified() {
        let p = prec(50);
        let cfg = PointConfiguration::from_f64(2, p.bits(), &[(0.3141, 0.0271)]).unwrap();
        let r = attractor_residual(&cfg, 100, p).unwrap();
        assert!(!r.is_attractor());
        assert!(r.residual.is_infinite());
    }

    #[test]
    fn newton_finds_a_prescribed_ratio() {
        // Lattice ratio τ = 1/2 + 4i/5.
        let p = prec(50);
        let half = Rational::from((1, 2));
        let t1 = CycloElement::from_coeffs(4, vec![half, Rational::from((4, 5))]).unwrap();
        let target = AttractorTarget::new(vec![CycloElement::one(4).unwrap(), t1]).unwrap();
        let start = PointConfiguration::from_f64(2, p.bits(), &[(0.5, 0.0)]).unwrap();
        let cert = solve_attractor(&target, &start, p, SolverOptions::default()).unwrap();
        assert!(cert.matches_target(), "{:?}", cert.ratios);
        assert!(cert.residual < 1e-40);
        // Scaling the target does not move the solution.
        let two = CycloElement::from_ints(4, &[2, 1]).unwrap();
        let scaled = AttractorTarget::new(target.v.iter().map(|t| t.mul(&two)).collect()).unwrap();
        let cert2 = solve_attractor(&scaled, &start, p, SolverOptions::default()).unwrap();
        assert!(cert.configuration.distance(&cert2.configuration) < 1e-40);
    }

    #[test]
    fn certificates_round_trip_through_json() {
        let p = prec(40);
        let cfg = PointConfiguration::from_f64(2, p.bits(), &[(0.5, 0.0)]).unwrap();
        let cert = AttractorCertificate::certify(&cfg, 10, p).unwrap().unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: AttractorCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back.ratios, cert.ratios);
        assert!(back.recheck(p).unwrap().is_some());
    }
}
