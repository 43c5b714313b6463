//! Monodromy of the eigenspace periods along braids of the branch points and
//! the Hermitian form they preserve.
//!
//! A braid letter `j` (`1 ..= 2n-2`) exchanges the chain points at positions
//! `j-1` and `j` by a half turn about their midpoint, counterclockwise unless
//! inverted. Only a disk around the pair moves: inside radius `r1` the plane
//! turns rigidly, between `r1` and `r2` the turning angle decays linearly to
//! zero, and beyond `r2` nothing moves. Both radii lie strictly between the
//! half gap of the pair and the distance to the nearest other point.
//!
//! Words act like composed maps, so the rightmost letter is performed first
//! and `M(uv) = M(u) M(v)`. The matrix `M` expresses the transported cycles in
//! the original basis: `P_cont = P M`, where `P` is the square eigenspace
//! period matrix with the conjugate block.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::attractor::certification_order;
use crate::curve::{eigenform_basis, Eigenform, PointConfiguration};
use crate::cyclotomic::{recognize, required_digits, totient, CycloElement};
use crate::error::{Error, Result};
use crate::mp::{CMatrix, Complex, Precision};
use crate::periods::{
    default_start_args, integrate_polyline, nearest_branch, period_matrix, period_matrix_with_reference,
    quadrature_options, Integrand, Polyline,
};

/// One generator or inverse generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BraidLetter {
    pub index: usize,
    pub inverse: bool,
}

/// A braid word, written left to right and performed right to left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidWord {
    pub letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(letters: Vec<BraidLetter>) -> Self {
        BraidWord { letters }
    }

    pub fn generator(index: usize) -> Self {
        BraidWord { letters: vec![BraidLetter { index, inverse: false }] }
    }

    /// Parses whitespace- or comma-separated nonzero integers; `-j` is the
    /// inverse of letter `j`. An empty string is the identity.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let v: i64 = tok.parse().map_err(|_| Error::Parse(format!("bad braid letter {tok:?}")))?;
            if v == 0 {
                return Err(Error::Parse("braid letters start at 1".into()));
            }
            letters.push(BraidLetter { index: v.unsigned_abs() as usize, inverse: v < 0 });
        }
        Ok(BraidWord { letters })
    }

    fn check(&self, n: u32) -> Result<()> {
        let max = 2 * n as usize - 2;
        match self.letters.iter().find(|l| l.index == 0 || l.index > max) {
            Some(l) => Err(Error::domain(format!("braid letter {} outside 1..={max} for n = {n}", l.index))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.letters.iter().map(|l| if l.inverse { format!("-{}", l.index) } else { l.index.to_string() }).collect();
        f.write_str(&parts.join(" "))
    }
}

type P2 = (f64, f64);

fn sub(a: P2, b: P2) -> P2 {
    (a.0 - b.0, a.1 - b.1)
}

fn dist(a: P2, b: P2) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn arg(z: P2) -> f64 {
    z.1.atan2(z.0)
}

/// Argument of `z / w`.
fn arg_ratio(z: P2, w: P2) -> f64 {
    (z.1 * w.0 - z.0 * w.1).atan2(z.0 * w.0 + z.1 * w.1)
}

/// The plane isotopy of one letter.
struct HalfTwist {
    center: P2,
    r1: f64,
    r2: f64,
    angle: f64,
    a: usize,
    b: usize,
}

impl HalfTwist {
    fn new(locs: &[P2], letter: BraidLetter) -> Result<Self> {
        let (a, b) = (letter.index - 1, letter.index);
        let center = ((locs[a].0 + locs[b].0) / 2.0, (locs[a].1 + locs[b].1) / 2.0);
        let r = dist(locs[a], center);
        let d = locs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .map(|(_, &p)| dist(p, center))
            .fold(f64::INFINITY, f64::min);
        if d <= r * (1.0 + 1e-9) {
            return Err(Error::degenerate(format!(
                "no room for a half twist of chain points {a} and {b}: another point lies inside their disk"
            )));
        }
        let angle = if letter.inverse { -PI } else { PI };
        Ok(HalfTwist { center, r1: r + (d - r) / 3.0, r2: r + 2.0 * (d - r) / 3.0, angle, a, b })
    }

    fn apply(&self, z: P2, t: f64) -> P2 {
        let v = sub(z, self.center);
        let rho = v.0.hypot(v.1);
        let theta = if rho <= self.r1 {
            t * self.angle
        } else if rho < self.r2 {
            t * self.angle * (self.r2 - rho) / (self.r2 - self.r1)
        } else {
            return z;
        };
        let (s, c) = theta.sin_cos();
        (self.center.0 + v.0 * c - v.1 * s, self.center.1 + v.0 * s + v.1 * c)
    }

    fn relabel(&self, i: usize) -> usize {
        if i == self.a {
            self.b
        } else if i == self.b {
            self.a
        } else {
            i
        }
    }
}

/// A lifted path moved around by braids: endpoints are chain positions and
/// `args` are the start arguments in the integrator's convention.
#[derive(Clone, Debug)]
struct TransportedPath {
    from: usize,
    to: usize,
    interior: Vec<P2>,
    args: Vec<f64>,
}

/// Appends the image of `[u, v]` (without its start) to `out`, subdividing
/// until every chord follows the image curve closely compared with the
/// distance to the branch points.
fn push_image(tw: &HalfTwist, locs: &[P2], u: P2, v: P2, depth: u32, out: &mut Vec<P2>) -> Result<()> {
    let pu = tw.apply(u, 1.0);
    let pv = tw.apply(v, 1.0);
    let mut ok = true;
    for f in [0.25, 0.5, 0.75] {
        let w = tw.apply((u.0 + f * (v.0 - u.0), u.1 + f * (v.1 - u.1)), 1.0);
        let chord = (pu.0 + f * (pv.0 - pu.0), pu.1 + f * (pv.1 - pu.1));
        let clearance = locs.iter().map(|&p| dist(p, w)).fold(f64::INFINITY, f64::min);
        if dist(w, chord) > 1e-3 * clearance + 1e-13 {
            ok = false;
            break;
        }
    }
    if ok {
        out.push(pv);
        return Ok(());
    }
    if depth > 40 {
        return Err(Error::PrecisionFailure("transported path needs too many vertices".into()));
    }
    let mid = ((u.0 + v.0) / 2.0, (u.1 + v.1) / 2.0);
    push_image(tw, locs, u, mid, depth + 1, out)?;
    push_image(tw, locs, mid, v, depth + 1, out)
}

fn transport(path: &TransportedPath, tw: &HalfTwist, locs: &[P2]) -> Result<TransportedPath> {
    let mut vertices = vec![locs[path.from]];
    vertices.extend(path.interior.iter().copied());
    vertices.push(locs[path.to]);
    let mut image = Vec::with_capacity(vertices.len() * 4);
    for w in vertices.windows(2) {
        push_image(tw, locs, w[0], w[1], 0, &mut image)?;
    }
    image.pop();
    image.dedup_by(|x, y| dist(*x, *y) < 1e-14);

    // Follow every factor argument through the isotopy.
    let s = path.from;
    let mut steps = 64usize;
    let tracked = 'outer: loop {
        let mut args = path.args.clone();
        for (i, &x) in locs.iter().enumerate() {
            if i == s {
                continue;
            }
            let mut prev = sub(tw.apply(locs[s], 0.0), tw.apply(x, 0.0));
            for k in 1..=steps {
                let t = k as f64 / steps as f64;
                let cur = sub(tw.apply(locs[s], t), tw.apply(x, t));
                let inc = arg_ratio(cur, prev);
                if inc.abs() > 0.5 {
                    if steps >= 1 << 16 {
                        return Err(Error::PrecisionFailure("argument tracking along the braid did not resolve".into()));
                    }
                    steps *= 4;
                    continue 'outer;
                }
                args[i] += inc;
                prev = cur;
            }
        }
        break args;
    };

    let new_from = tw.relabel(s);
    let first = image.first().copied().unwrap_or(locs[tw.relabel(path.to)]);
    let turned = path.args[s] + if s == tw.a || s == tw.b { tw.angle } else { 0.0 };
    let tangent = nearest_branch(arg(sub(first, locs[new_from])), turned);
    if (tangent - turned).abs() > PI / 2.0 {
        return Err(Error::PrecisionFailure("transported path leaves its start in an unexpected direction".into()));
    }
    let mut args = vec![0.0; locs.len()];
    for (i, a) in tracked.into_iter().enumerate() {
        args[tw.relabel(i)] = a;
    }
    args[new_from] = tangent;
    Ok(TransportedPath { from: new_from, to: tw.relabel(path.to), interior: image, args })
}

/// Monodromy of one braid word.
#[derive(Clone, Debug)]
pub struct MonodromyMatrix {
    pub n: u32,
    pub word: BraidWord,
    /// `M` with `P_cont = P M`.
    pub matrix: CMatrix,
    /// Continued Schwarz vector (first row of `P_cont`).
    pub continued_schwarz: Vec<Complex>,
    /// Propagated error estimate for the entries of `M`.
    pub error: f64,
    pub precision: Precision,
}

fn eigenspace_forms(n: u32) -> Result<(Vec<Eigenform>, usize)> {
    let mut forms = eigenform_basis(n, 1)?;
    let holo = forms.len();
    forms.extend(eigenform_basis(n, n - 1)?);
    Ok((forms, holo))
}

fn matrix_inf_norm(m: &CMatrix) -> f64 {
    (0..m.rows()).map(|r| m.row(r).iter().map(Complex::abs_f64).sum::<f64>()).fold(0.0, f64::max)
}

/// Continues the eigenspace periods of `cfg` along `word` and returns the
/// resulting monodromy matrix.
pub fn continue_schwarz(cfg: &PointConfiguration, word: &BraidWord, precision: Precision) -> Result<MonodromyMatrix> {
    let n = cfg.n();
    word.check(n)?;
    let bits = precision.bits();
    let cfg = cfg.with_prec(cfg.prec().max(bits));
    let chain = cfg.chain(bits);
    let locs: Vec<P2> = chain.iter().map(Complex::to_f64).collect();
    let m = chain.len() - 1;

    let mut paths: Vec<TransportedPath> = (1..=m)
        .map(|k| TransportedPath {
            from: k - 1,
            to: k,
            interior: Vec::new(),
            args: default_start_args(&chain, k - 1, &chain[k]),
        })
        .collect();
    for letter in word.letters.iter().rev() {
        let tw = HalfTwist::new(&locs, *letter)?;
        paths = paths.iter().map(|p| transport(p, &tw, &locs)).collect::<Result<_>>()?;
    }

    let (forms, holo) = eigenspace_forms(n)?;
    let outputs: Vec<(u32, u32)> = forms.iter().map(|f| (f.a, f.b)).collect();
    let weights = vec![1i64; chain.len()];
    let opts = quadrature_options(precision);
    let integrals: Vec<(Vec<Complex>, f64)> = paths
        .par_iter()
        .map(|p| {
            let interior: Vec<Complex> = p.interior.iter().map(|&(x, y)| Complex::from_f64(bits, x, y)).collect();
            let integrand = Integrand { points: &chain, weights: &weights, denom: n, outputs: &outputs };
            let poly = Polyline { from: p.from, to: p.to, interior: &interior };
            let r = integrate_polyline(&integrand, &poly, &p.args, &opts)?;
            Ok((r.values, r.error))
        })
        .collect::<Result<_>>()?;

    let mut cont = CMatrix::zeros(bits, forms.len(), m);
    let mut cont_err = 0.0f64;
    for (r, f) in forms.iter().enumerate() {
        let factor = &Complex::one(bits) - &Complex::root_of_unity(bits, -(f.b as i64), n);
        for (c, (values, err)) in integrals.iter().enumerate() {
            let v = &factor * &values[r];
            cont[(r, c)] = if r >= holo { v.conj() } else { v };
            cont_err = cont_err.max(2.0 * err);
        }
    }
    let base = period_matrix(&cfg, 1, true, precision)?;
    let matrix = base.entries.solve(&cont, 1e-30)?;
    let inv_norm = matrix_inf_norm(&base.entries.inverse(1e-30)?);
    let error = inv_norm * (cont_err + base.max_error() * matrix_inf_norm(&matrix)) * m as f64;
    let continued_schwarz = cont.row(0).to_vec();
    Ok(MonodromyMatrix { n, word: word.clone(), matrix, continued_schwarz, error, precision })
}

/// A matrix with entries in a cyclotomic field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactMatrix {
    pub order: u32,
    pub rows: Vec<Vec<CycloElement>>,
}

impl ExactMatrix {
    pub fn identity(order: u32, size: usize) -> Result<Self> {
        let mut rows = vec![vec![CycloElement::zero(order)?; size]; size];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = CycloElement::one(order)?;
        }
        Ok(ExactMatrix { order, rows })
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        let size = rhs.rows.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let mut out = Vec::with_capacity(size);
            for c in 0..size {
                let mut acc = CycloElement::zero(self.order)?;
                for (k, x) in r.iter().enumerate() {
                    if !x.is_zero() && !rhs.rows[k][c].is_zero() {
                        acc = acc.add(&x.mul(&rhs.rows[k][c]));
                    }
                }
                out.push(acc);
            }
            rows.push(out);
        }
        Ok(ExactMatrix { order: self.order, rows })
    }

    /// Whether every entry has integer coordinates, i.e. lies in `Z[ζ]`.
    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|e| e.coeffs().iter().all(|c| *c.denom() == 1))
    }

    pub fn max_height(&self) -> u64 {
        self.rows.iter().flatten().map(CycloElement::height_u64).max().unwrap_or(0)
    }
}

/// Recognizes every entry of `m` in the certification field, or returns
/// `None` if some entry has no element of height at most `height_bound`
/// within tolerance.
///
/// `precision` caps the digits trusted (never more than the matrix carries);
/// it must be large enough for `height_bound`.
pub fn recognize_integral(m: &MonodromyMatrix, height_bound: u64, precision: Precision) -> Result<Option<ExactMatrix>> {
    let order = certification_order(m.n);
    let precision = if precision.get() < m.precision.get() { precision } else { m.precision };
    let required = required_digits(totient(order), height_bound);
    if precision.get() < required {
        return Err(Error::InsufficientPrecision { digits: precision.get(), required, height_bound });
    }
    let err = m.error.max(m.precision.epsilon());
    if err > precision.half_epsilon() {
        return Ok(None);
    }
    let mut rows = Vec::with_capacity(m.matrix.rows());
    for r in 0..m.matrix.rows() {
        let mut row = Vec::with_capacity(m.matrix.cols());
        for c in 0..m.matrix.cols() {
            match recognize(&m.matrix[(r, c)], err, order, height_bound, precision)? {
                Some(rec) => row.push(rec.element),
                None => return Ok(None),
            }
        }
        rows.push(row);
    }
    Ok(Some(ExactMatrix { order, rows }))
}

/// Like [`recognize_integral`], but too little precision just means "not recognized".
pub fn recognize_if_possible(m: &MonodromyMatrix, height_bound: u64, precision: Precision) -> Result<Option<ExactMatrix>> {
    match recognize_integral(m, height_bound, precision) {
        Err(Error::InsufficientPrecision { .. }) => Ok(None),
        other => other,
    }
}

/// Result of checking `σ_j σ_{j+1} σ_j = σ_{j+1} σ_j σ_{j+1}` on the monodromy.
#[derive(Clone, Debug, Serialize)]
pub struct BraidRelationCheck {
    pub index: usize,
    /// Max entry difference of the two numerical products.
    pub numeric_defect: f64,
    /// Whether the recognized generator matrices satisfy the relation exactly.
    pub exact: Option<bool>,
}

pub fn check_braid_relation(cfg: &PointConfiguration, j: usize, height_bound: u64, precision: Precision) -> Result<BraidRelationCheck> {
    let a = continue_schwarz(cfg, &BraidWord::generator(j), precision)?;
    let b = continue_schwarz(cfg, &BraidWord::generator(j + 1), precision)?;
    let left = a.matrix.matmul(&b.matrix).matmul(&a.matrix);
    let right = b.matrix.matmul(&a.matrix).matmul(&b.matrix);
    let numeric_defect = left.max_abs_diff(&right);
    let exact = match (recognize_if_possible(&a, height_bound, precision)?, recognize_if_possible(&b, height_bound, precision)?) {
        (Some(ea), Some(eb)) => Some(ea.mul(&eb)?.mul(&ea)? == eb.mul(&ea)?.mul(&eb)?),
        _ => None,
    };
    Ok(BraidRelationCheck { index: j, numeric_defect, exact })
}

/// The monodromy-invariant Hermitian form on the cycle basis.
#[derive(Clone, Debug)]
pub struct HermitianForm {
    pub n: u32,
    /// `H` in the cycle basis, normalized so that `H[pivot]` has modulus 1.
    pub matrix: CMatrix,
    /// Numbers of positive and negative eigenvalues.
    pub signature: (usize, usize),
    /// Size of the trailing pivot in the null-space solve, relative to the first.
    pub null_residual: f64,
    /// `|H - H^*| / |H|` before symmetrization.
    pub hermitian_defect: f64,
    pub samples: usize,
}

/// Recovers the Hermitian form from Hodge-type orthogonality.
///
/// On the period side the form is `h(α, β) = π(α) G π(β)^*`. Holomorphic
/// forms are orthogonal to antiholomorphic ones, which gives the linear
/// conditions `π(ω) G π(η)^T = 0` for every holomorphic `η` of the
/// complementary eigenspace. The conditions from a handful of nearby
/// configurations (with the branch choice continued, so the cycle basis is
/// the same) cut `G` out up to scale. The cycle-side form is `H = G^{-1}`.
pub fn hermitian_form(cfg: &PointConfiguration, precision: Precision) -> Result<HermitianForm> {
    let n = cfg.n();
    let bits = precision.bits();
    let cfg = cfg.with_prec(cfg.prec().max(bits));
    let m = 2 * n as usize - 2;
    let samples = m + 3;
    let (base, reference) = period_matrix_with_reference(&cfg, 1, true, None, precision)?;
    let spacing = cfg.closest_pair().map_or(1.0, |p| p.2);
    let mut rng = ChaCha8Rng::seed_from_u64(0x4845_524d);
    let mut configs = vec![cfg.clone()];
    while configs.len() < samples {
        let eps = 0.05 * spacing;
        let shifts: Vec<(f64, f64)> =
            cfg.free().iter().map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let moved = cfg.map_free(|k, z| z + &Complex::from_f64(bits, eps * shifts[k].0, eps * shifts[k].1))?;
        configs.push(moved);
    }
    let mats: Vec<CMatrix> = configs[1..]
        .par_iter()
        .map(|c| Ok(period_matrix_with_reference(c, 1, true, Some(&reference), precision)?.0.entries))
        .collect::<Result<_>>()?;
    let all: Vec<&CMatrix> = std::iter::once(&base.entries).chain(mats.iter()).collect();

    let mut eqs = CMatrix::zeros(bits, samples * (m - 1), m * m);
    let mut row = 0;
    for p in &all {
        let omega = p.row(0);
        for a in 1..m {
            let eta: Vec<Complex> = p.row(a).iter().map(Complex::conj).collect();
            for i in 0..m {
                for j in 0..m {
                    eqs[(row, i * m + j)] = &omega[i] * &eta[j];
                }
            }
            row += 1;
        }
    }
    let (g, null_residual) = eqs.null_vector();
    if !(null_residual < precision.half_epsilon()) {
        return Err(Error::DegenerateForm(format!("orthogonality conditions leave no clean null vector ({null_residual:.3e})")));
    }
    let mut gm = CMatrix::zeros(bits, m, m);
    for i in 0..m {
        for j in 0..m {
            gm[(i, j)] = g[i * m + j].clone();
        }
    }
    // G = e^{iφ} · Hermitian; read the phase off the largest entry and its mirror.
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for i in 0..m {
        for j in 0..m {
            let v = gm[(i, j)].abs_f64();
            if v > best {
                (bi, bj, best) = (i, j, v);
            }
        }
    }
    let prod = &gm[(bi, bj)] * &gm[(bj, bi)];
    let mut unphase = unit_sqrt(&prod.conj());
    // Make π(ω) G π(ω)^* positive.
    let omega = base.entries.row(0);
    let gw = gm.left_apply(omega);
    let mut pos = Complex::zero(bits);
    for (x, y) in gw.iter().zip(omega) {
        pos.add_mul(x, &y.conj());
    }
    if (&pos * &unphase).to_f64().0 < 0.0 {
        unphase = -&unphase;
    }
    let gm = gm.scale(&unphase);
    let h = gm.inverse(1e-30)?;
    let scale = h.max_abs();
    let h = h.scale(&Complex::from_f64(bits, 1.0 / scale, 0.0));
    let hermitian_defect = h.max_abs_diff(&h.conj_transpose());

    let hf = h.to_f64();
    let sym = (&hf + hf.adjoint()) * nalgebra::Complex::new(0.5, 0.0);
    let eig = sym.symmetric_eigenvalues();
    let top = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let positive = eig.iter().filter(|&&e| e > 1e-8 * top).count();
    let negative = eig.iter().filter(|&&e| e < -1e-8 * top).count();
    if positive + negative != m {
        return Err(Error::DegenerateForm(format!("{} eigenvalues are numerically zero", m - positive - negative)));
    }
    Ok(HermitianForm { n, matrix: h, signature: (positive, negative), null_residual, hermitian_defect, samples })
}

/// A square root of `z / |z|`, computed without leaving multiprecision.
fn unit_sqrt(z: &Complex) -> Complex {
    let bits = z.prec();
    let r = z.abs();
    let c = rug::Float::with_val(bits, &z.re / &r);
    let re = rug::Float::with_val(bits, (rug::Float::with_val(bits, 1 + &c) / 2u32).max(&rug::Float::new(bits)).sqrt_ref());
    let mut im = rug::Float::with_val(bits, (rug::Float::with_val(bits, 1 - &c) / 2u32).max(&rug::Float::new(bits)).sqrt_ref());
    if z.im.is_sign_negative() {
        im = -im;
    }
    Complex::from_parts(re, im)
}

impl HermitianForm {
    /// `max |M^* H M - H|` with `H` scaled to max entry 1.
    pub fn invariance_defect(&self, m: &MonodromyMatrix) -> f64 {
        check_invariance(&m.matrix, &self.matrix)
    }
}

/// `max |M^* H M - H|`.
pub fn check_invariance(m: &CMatrix, h: &CMatrix) -> f64 {
    assert_eq!(m.rows(), h.rows(), "monodromy and form sizes differ");
    m.conj_transpose().matmul(h).matmul(m).max_abs_diff(h)
}

#[derive(Serialize)]
struct EntryJson {
    re: String,
    im: String,
}

impl MonodromyMatrix {
    pub fn to_json(&self, exact: Option<&ExactMatrix>) -> serde_json::Value {
        let digits = self.precision.get() as usize;
        let entries: Vec<Vec<EntryJson>> = (0..self.matrix.rows())
            .map(|r| {
                self.matrix
                    .row(r)
                    .iter()
                    .map(|z| {
                        let (re, im) = z.to_strings(digits);
                        EntryJson { re, im }
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({
            "schema": "monodromy/1",
            "n": self.n,
            "word": self.word.to_string(),
            "precision": self.precision.get(),
            "error": self.error,
            "entries": entries,
            "exact": exact,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec(d: u32) -> Precision {
        Precision::digits(d).unwrap()
    }

    #[test]
    fn words_parse_and_print() {
        let w = BraidWord::parse("1, -2 3").unwrap();
        assert_eq!(w.to_string(), "1 -2 3");
        assert!(BraidWord::parse("0").is_err());
        assert!(BraidWord::parse(" ").unwrap().letters.is_empty());
        assert!(BraidWord::generator(4).check(2).is_err());
    }

    #[test]
    fn half_twist_swaps_the_pair_and_fixes_the_rest() {
        let locs = [(0.0, 0.0), (0.3, 0.1), (0.6, -0.1), (1.0, 0.0)];
        let tw = HalfTwist::new(&locs, BraidLetter { index: 2, inverse: false }).unwrap();
        let a = tw.apply(locs[1], 1.0);
        assert!(dist(a, locs[2]) < 1e-14);
        assert!(dist(tw.apply(locs[0], 1.0), locs[0]) == 0.0);
        assert!(dist(tw.apply(locs[3], 0.7), locs[3]) == 0.0);
    }

    #[test]
    fn legendre_monodromy_is_unipotent() {
        let p = prec(40);
        let cfg = PointConfiguration::from_f64(2, p.bits(), &[(0.45, 0.1)]).unwrap();
        for j in 1..=2 {
            let m = continue_schwarz(&cfg, &BraidWord::generator(j), p).unwrap();
            let exact = recognize_integral(&m, 10, p).unwrap().expect("integral monodromy");
            assert!(exact.is_integral());
            let two = CycloElement::from_ints(4, &[2, 0]).unwrap();
            assert_eq!(exact.rows[0][0].add(&exact.rows[1][1]), two, "{exact:?}");
            assert_ne!(exact, ExactMatrix::identity(4, 2).unwrap());
        }
    }

    #[test]
    fn inverse_letter_undoes_the_letter() {
        let p = prec(40);
        let cfg = PointConfiguration::from_f64(3, p.bits(), &[(0.2, 0.1), (0.45, -0.1), (0.7, 0.05)]).unwrap();
        let m = continue_schwarz(&cfg, &BraidWord::parse("2 -2").unwrap(), p).unwrap();
        let id = CMatrix::identity(p.bits(), 4);
        assert!(m.matrix.max_abs_diff(&id) < 1e-30);
    }

    #[test]
    fn form_has_the_expected_signature_and_is_invariant() {
        let p = prec(40);
        let cfg = PointConfiguration::from_f64(3, p.bits(), &[(0.2, 0.1), (0.45, -0.1), (0.7, 0.05)]).unwrap();
        let form = hermitian_form(&cfg, p).unwrap();
        assert_eq!(form.signature, (1, 3));
        assert!(form.hermitian_defect < 1e-25, "{}", form.hermitian_defect);
        for j in 1..=4 {
            let m = continue_schwarz(&cfg, &BraidWord::generator(j), p).unwrap();
            assert!(form.invariance_defect(&m) < 1e-25, "letter {j}: {}", form.invariance_defect(&m));
        }
        let check = check_braid_relation(&cfg, 2, 16, p).unwrap();
        assert!(check.numeric_defect < 1e-25);
        assert_eq!(check.exact, Some(true));
    }
}
