//! Periods of eigenforms along paths between branch points, the cycle basis,
//! eigenspace period matrices and the Schwarz map.
//!
//! # Conventions
//!
//! Finite branch points are ordered along the *chain* `0, s_1, ..., s_{2n-3}, 1`
//! and `δ_k` is the straight path from chain point `k-1` to chain point `k`.
//! At the start `p` of a path the factor `(x - x_i)^{-b/n}` uses
//!
//! * `Arg(p - x_i)` if `x_i` comes earlier in the chain,
//! * `Arg(x_i - p) + π` if it comes later,
//! * the direction of the first segment for the starting point itself,
//!
//! and is continued along the path from there. The cycles are
//! `γ_k = (1 - μ) δ̃_k` with `μ: y ↦ ζ y`, so the period of `x^a dx / y^b` over
//! `γ_k` is `(1 - ζ^{-b}) ∫_{δ_k}`. For `n = 2` and `λ = 1/2` this gives the
//! lattice ratio `τ = i`.
//!
//! Finite differences and continuation need the branch choice to vary
//! continuously with the configuration, so every entry point accepts a
//! [`BranchReference`]: start arguments are then shifted by multiples of 2π
//! to the representative nearest the reference.

mod integrate;
mod matrix;

pub use integrate::{
    integrate_polyline, nearest_branch, Integrand, PathIntegral, Polyline, QuadratureOptions,
};
pub use matrix::{period_matrix, period_matrix_with_reference, PeriodMatrix, RowKind};

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{Eigenform, PointConfiguration};
use crate::cyclotomic::CycloElement;
use crate::error::{Error, Result};
use crate::mp::{CMatrix, Complex, Precision};

/// A path between two branch points, given by labels in `0..2n` with the
/// normalized-gauge numbering (`0 -> 0`, `1 -> 1`, `2 -> ∞`, `3.. -> s_k`).
#[derive(Clone, Debug)]
pub struct BranchPath {
    pub from_idx: usize,
    pub to_idx: usize,
    /// Intermediate vertices of the polyline.
    pub detour: Vec<Complex>,
}

/// Chain position of a label, or an error for the point at infinity.
pub fn chain_position(n: u32, label: usize) -> Result<usize> {
    let last = 2 * n as usize - 2;
    match label {
        0 => Ok(0),
        1 => Ok(last),
        2 => Err(Error::domain("paths cannot end at the point at infinity")),
        l if l < 2 * n as usize => Ok(l - 2),
        l => Err(Error::domain(format!("label {l} out of range for n = {n}"))),
    }
}

/// Label of a chain position.
pub fn chain_label(n: u32, pos: usize) -> usize {
    let last = 2 * n as usize - 2;
    match pos {
        0 => 0,
        p if p == last => 1,
        p => p + 2,
    }
}

impl BranchPath {
    /// `δ_k`, `k = 1..=2n-2`.
    pub fn delta(n: u32, k: usize) -> Self {
        BranchPath { from_idx: chain_label(n, k - 1), to_idx: chain_label(n, k), detour: Vec::new() }
    }
}

/// A term `weight · μ^deck (lift of path)`.
#[derive(Clone, Debug)]
pub struct CycleTerm {
    pub path: BranchPath,
    pub deck: i64,
    pub weight: CycloElement,
}

#[derive(Clone, Debug)]
pub struct Cycle {
    pub terms: Vec<CycleTerm>,
}

/// `γ_k = (1 - μ) δ̃_k` for `k = 1..=2n-2`.
pub fn build_cycle_basis(cfg: &PointConfiguration) -> Vec<Cycle> {
    let n = cfg.n();
    (1..=2 * n as usize - 2)
        .map(|k| {
            let path = BranchPath::delta(n, k);
            let one = CycloElement::one(n).expect("valid order");
            Cycle {
                terms: vec![
                    CycleTerm { path: path.clone(), deck: 0, weight: one.clone() },
                    CycleTerm { path, deck: 1, weight: one.neg() },
                ],
            }
        })
        .collect()
}

/// Branch-selection data for a list of paths: the starting arguments of all
/// chain factors on each path.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchReference {
    pub args: Vec<Vec<f64>>,
}

/// Starting arguments at `chain[from]` under the default convention.
pub fn default_start_args(chain: &[Complex], from: usize, first_vertex: &Complex) -> Vec<f64> {
    let p = &chain[from];
    chain
        .iter()
        .enumerate()
        .map(|(i, x)| {
            if i == from {
                (first_vertex - p).arg_f64()
            } else if i < from {
                (p - x).arg_f64()
            } else {
                (x - p).arg_f64() + PI
            }
        })
        .collect()
}

fn snap(args: Vec<f64>, reference: Option<&[f64]>) -> Vec<f64> {
    match reference {
        None => args,
        Some(r) => args.iter().zip(r).map(|(&a, &r)| nearest_branch(a, r)).collect(),
    }
}

/// A complex value with an absolute error estimate.
#[derive(Clone, Debug)]
pub struct PeriodValue {
    pub value: Complex,
    pub error: f64,
}

pub fn quadrature_options(precision: Precision) -> QuadratureOptions {
    QuadratureOptions::new(precision.get(), precision.bits())
}

/// Integrals of several forms along one path of the chain, with the start
/// arguments used.
pub fn integrate_forms(
    cfg: &PointConfiguration,
    forms: &[Eigenform],
    path: &BranchPath,
    reference: Option<&[f64]>,
    precision: Precision,
) -> Result<(Vec<PeriodValue>, Vec<f64>)> {
    let n = cfg.n();
    for f in forms {
        Eigenform::new(n, f.a, f.b)?;
    }
    let from = chain_position(n, path.from_idx)?;
    let to = chain_position(n, path.to_idx)?;
    let bits = precision.bits();
    let chain = cfg.chain(bits);
    let first = path.detour.first().unwrap_or(&chain[to]);
    let args = snap(default_start_args(&chain, from, first), reference);
    let weights = vec![1i64; chain.len()];
    let outputs: Vec<(u32, u32)> = forms.iter().map(|f| (f.a, f.b)).collect();
    let integrand = Integrand { points: &chain, weights: &weights, denom: n, outputs: &outputs };
    let poly = Polyline { from, to, interior: &path.detour };
    let r = integrate_polyline(&integrand, &poly, &args, &quadrature_options(precision))?;
    let values = r.values.into_iter().map(|value| PeriodValue { value, error: r.error }).collect();
    Ok((values, args))
}

/// `∫_path x^a dx / y^b` under the default branch convention.
pub fn integrate_eigenform(
    cfg: &PointConfiguration,
    form: Eigenform,
    path: &BranchPath,
    precision: Precision,
) -> Result<PeriodValue> {
    Ok(integrate_forms(cfg, &[form], path, None, precision)?.0.remove(0))
}

/// Multiplier `ζ^{-b·deck}` picked up by a deck-translated lift.
pub(crate) fn deck_factor(n: u32, b: u32, deck: i64, bits: u32) -> Complex {
    Complex::root_of_unity(bits, -(b as i64) * deck, n)
}

/// Weight evaluated with `ζ ↦ ζ^{-b}` (the action of μ on the `b`-forms).
pub(crate) fn weight_factor(w: &CycloElement, b: u32, bits: u32) -> Complex {
    let n = w.n();
    let mut acc = Complex::zero(bits);
    for (k, c) in w.coeffs().iter().enumerate() {
        if *c != 0 {
            let q = rug::Float::with_val(bits, c);
            acc.add_assign_ref(&Complex::root_of_unity(bits, -(b as i64) * k as i64, n).scale(&q));
        }
    }
    acc
}

/// Period of one form over a general cycle.
pub fn cycle_period(cfg: &PointConfiguration, form: Eigenform, cycle: &Cycle, precision: Precision) -> Result<PeriodValue> {
    let bits = precision.bits();
    let mut total = Complex::zero(bits);
    let mut error = 0.0;
    for term in &cycle.terms {
        let v = integrate_eigenform(cfg, form, &term.path, precision)?;
        let f = &weight_factor(&term.weight, form.b, bits) * &deck_factor(cfg.n(), form.b, term.deck, bits);
        total.add_assign_ref(&(&f * &v.value));
        error += f.abs_f64() * v.error;
    }
    Ok(PeriodValue { value: total, error })
}

/// Raw integrals of `forms` along every `δ_k`, evaluated in parallel.
///
/// Returns `[path][form]` values and the branch reference actually used.
pub(crate) fn chain_integrals(
    cfg: &PointConfiguration,
    forms: &[Eigenform],
    reference: Option<&BranchReference>,
    precision: Precision,
) -> Result<(Vec<Vec<PeriodValue>>, BranchReference)> {
    let n = cfg.n();
    let paths: Vec<BranchPath> = (1..=2 * n as usize - 2).map(|k| BranchPath::delta(n, k)).collect();
    if let Some(r) = reference {
        assert_eq!(r.args.len(), paths.len(), "branch reference does not match the cycle basis");
    }
    let results: Vec<Result<(Vec<PeriodValue>, Vec<f64>)>> = paths
        .par_iter()
        .enumerate()
        .map(|(k, p)| integrate_forms(cfg, forms, p, reference.map(|r| r.args[k].as_slice()), precision))
        .collect();
    let mut values = Vec::with_capacity(paths.len());
    let mut args = Vec::with_capacity(paths.len());
    for r in results {
        let (v, a) = r?;
        values.push(v);
        args.push(a);
    }
    Ok((values, BranchReference { args }))
}

/// The Schwarz map value `(∫_{γ_1} ω, ..., ∫_{γ_{2n-2}} ω)`.
#[derive(Clone, Debug)]
pub struct SchwarzVector {
    pub values: Vec<Complex>,
    pub errors: Vec<f64>,
    pub precision: Precision,
}

impl SchwarzVector {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }

    /// Index of the entry of largest modulus.
    pub fn pivot(&self) -> usize {
        let mut best = (0, -1.0);
        for (i, v) in self.values.iter().enumerate() {
            let a = v.abs_f64();
            if a > best.1 {
                best = (i, a);
            }
        }
        best.0
    }

    /// Entries divided by entry `pivot`, with propagated error bounds.
    pub fn ratios(&self, pivot: usize) -> Vec<PeriodValue> {
        let d = &self.values[pivot];
        let dm = d.abs_f64();
        self.values
            .iter()
            .zip(&self.errors)
            .map(|(v, e)| {
                let value = v.div(d);
                let error = (e + value.abs_f64() * self.errors[pivot]) / dm;
                PeriodValue { value, error }
            })
            .collect()
    }
}

pub fn schwarz_map(cfg: &PointConfiguration, precision: Precision) -> Result<SchwarzVector> {
    Ok(schwarz_map_with_reference(cfg, None, precision)?.0)
}

/// Schwarz map with a branch reference; also returns the reference used.
pub fn schwarz_map_with_reference(
    cfg: &PointConfiguration,
    reference: Option<&BranchReference>,
    precision: Precision,
) -> Result<(SchwarzVector, BranchReference)> {
    let bits = precision.bits();
    let (raw, used) = chain_integrals(cfg, &[Eigenform::OMEGA], reference, precision)?;
    let factor = &Complex::one(bits) - &deck_factor(cfg.n(), 1, 1, bits);
    let fm = factor.abs_f64();
    let values = raw.iter().map(|v| &factor * &v[0].value).collect();
    let errors = raw.iter().map(|v| fm * v[0].error).collect();
    Ok((SchwarzVector { values, errors, precision }, used))
}

/// Finite-difference Jacobian of the Schwarz map.
#[derive(Clone, Debug)]
pub struct JacobianReport {
    /// Columns: derivatives in `s_1, ..., s_{2n-3}`, then the scale direction.
    pub matrix: CMatrix,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub step: f64,
}

/// Relative threshold for counting a singular value towards the rank.
pub const RANK_THRESHOLD: f64 = 1e-6;

/// Derivatives `∂S/∂s_k` by central differences, continuing the branch
/// choice from `reference`.
pub(crate) fn schwarz_derivatives(
    cfg: &PointConfiguration,
    reference: &BranchReference,
    h: f64,
    precision: Precision,
) -> Result<Vec<Vec<Complex>>> {
    let bits = precision.bits();
    let n_free = cfg.free().len();
    let chain = cfg.chain(bits);
    for k in 0..n_free {
        let s = &chain[k + 1];
        for (j, x) in chain.iter().enumerate() {
            if j != k + 1 && (s - x).abs_f64() < 10.0 * h {
                return Err(Error::degenerate(format!(
                    "finite-difference stencil for s_{} reaches chain point {j}",
                    k + 1
                )));
            }
        }
    }
    let hc = Complex::from_f64(bits, h, 0.0);
    let inv_2h = rug::Float::with_val(bits, 2.0 * h).recip();
    (0..n_free)
        .map(|k| {
            let plus = cfg.map_free(|j, z| if j == k { &z.with_prec(bits) + &hc } else { z.with_prec(bits) })?;
            let minus = cfg.map_free(|j, z| if j == k { &z.with_prec(bits) - &hc } else { z.with_prec(bits) })?;
            let (sp, _) = schwarz_map_with_reference(&plus, Some(reference), precision)?;
            let (sm, _) = schwarz_map_with_reference(&minus, Some(reference), precision)?;
            Ok(sp.values.iter().zip(&sm.values).map(|(a, b)| (a - b).scale(&inv_2h)).collect())
        })
        .collect()
}

pub fn schwarz_jacobian(cfg: &PointConfiguration, precision: Precision) -> Result<JacobianReport> {
    let h = 10f64.powf(-(precision.get() as f64) / 3.0);
    let (s0, reference) = schwarz_map_with_reference(cfg, None, precision)?;
    let mut columns = schwarz_derivatives(cfg, &reference, h, precision)?;
    columns.push(s0.values.clone());
    let matrix = CMatrix::from_columns(columns);
    let singular_values = normalized_singular_values(&matrix);
    let rank = singular_values.iter().filter(|&&s| s > RANK_THRESHOLD).count();
    Ok(JacobianReport { matrix, singular_values, rank, step: h })
}

/// Singular values (largest first, divided by the largest) of the matrix with
/// every column scaled to unit norm.
pub fn normalized_singular_values(m: &CMatrix) -> Vec<f64> {
    let mut a = m.to_f64();
    for mut col in a.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= nalgebra::Complex::new(norm, 0.0);
        }
    }
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    let top = sv.first().copied().unwrap_or(0.0);
    if top > 0.0 {
        sv.iter_mut().for_each(|s| *s /= top);
    }
    sv
}

#[derive(Serialize)]
pub struct ComplexJson {
    pub re: String,
    pub im: String,
}

impl ComplexJson {
    pub fn new(z: &Complex, digits: usize) -> Self {
        let (re, im) = z.to_strings(digits);
        ComplexJson { re, im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::pi;
    use rug::Float;

    fn prec(d: u32) -> Precision {
        Precision::digits(d).unwrap()
    }

    /// K(k) = π / (2 AGM(1, sqrt(1 - k^2))), with `m = k^2`.
    fn elliptic_k(m: &Float) -> Float {
        let bits = m.prec();
        let mut a = Float::with_val(bits, 1);
        let mut b = Float::with_val(bits, 1 - m.clone()).sqrt();
        for _ in 0..200 {
            let an = Float::with_val(bits, &a + &b) / 2u32;
            let bn = Float::with_val(bits, &a * &b).sqrt();
            a = an;
            b = bn;
        }
        pi(bits) / (a * 2u32)
    }

    #[test]
    fn legendre_periods_match_agm() {
        let p = prec(60);
        let bits = p.bits();
        for lam in [0.5, 0.3] {
            let cfg = PointConfiguration::legendre(Complex::from_f64(bits, lam, 0.0)).unwrap();
            let s = schwarz_map(&cfg, p).unwrap();
            let m = Float::with_val(bits, lam);
            let k = elliptic_k(&m);
            let kp = elliptic_k(&Float::with_val(bits, 1 - m));
            let ratio = s.values[1].div(&s.values[0]);
            let expected = Complex::from_parts(Float::new(bits), Float::with_val(bits, &kp / &k));
            assert!((&ratio - &expected).abs_f64() < 1e-56, "lambda {lam}: {ratio}");
            let modulus = s.values[0].abs();
            assert!((modulus - k * 4u32).abs().to_f64() < 1e-55);
        }
    }
}
