//! Exact arithmetic in the cyclotomic field Q(ζ_n) and numerical recognition
//! of complex numbers as field elements of bounded height.
//!
//! Elements are stored on the power basis `1, ζ, ..., ζ^(φ(n)-1)` and every
//! product is reduced modulo the n-th cyclotomic polynomial. The reduction
//! table for `ζ^k`, `0 <= k < n`, lives in a shared [`CycloContext`] that is
//! built once per `n` behind a lock.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::lll_reduce;
use crate::mp::{pow10, Complex, Precision};

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn totient(n: u32) -> u32 {
    (1..=n).filter(|&k| gcd(k as u64, n as u64) == 1).count() as u32
}

/// Residues in `1..n` coprime to `n`, increasing.
pub fn unit_residues(n: u32) -> Vec<u32> {
    (1..n.max(2)).filter(|&k| gcd(k as u64, n as u64) == 1).collect()
}

/// Largest `n` accepted by the field arithmetic.
pub const MAX_ORDER: u32 = 60;

/// Shared data for Q(ζ_n).
#[derive(Debug)]
pub struct CycloContext {
    pub n: u32,
    pub phi_n: u32,
    pub units: Vec<u32>,
    /// Coefficients of Φ_n, constant term first; monic of degree φ(n).
    pub poly: Vec<i64>,
    /// `powers[k]` expresses `ζ^k` on the power basis.
    powers: Vec<Vec<i64>>,
}

impl CycloContext {
    /// Returns the (memoized) context for `n`.
    pub fn get(n: u32) -> Result<Arc<CycloContext>> {
        if !(2..=MAX_ORDER).contains(&n) {
            return Err(Error::domain(format!("cyclotomic order must lie in 2..={MAX_ORDER}, got {n}")));
        }
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut map = cache.lock().expect("cyclotomic cache poisoned");
        Ok(map.entry(n).or_insert_with(|| Arc::new(CycloContext::build(n))).clone())
    }

    fn build(n: u32) -> Self {
        let poly = cyclotomic_polynomial(n);
        let phi = poly.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // Multiply by ζ: shift, then fold the ζ^phi term back with Φ_n.
            let top = cur[phi - 1];
            for k in (1..phi).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = 0;
            for (k, c) in cur.iter_mut().enumerate() {
                *c -= top * poly[k];
            }
        }
        let units = unit_residues(n);
        assert_eq!(units.len(), phi, "totient mismatch for n = {n}");
        CycloContext { n, phi_n: phi as u32, units, poly, powers }
    }

    pub fn check_unit(&self, r: i64) -> Option<u32> {
        let r = r.rem_euclid(self.n as i64) as u32;
        (gcd(r as u64, self.n as u64) == 1).then_some(r)
    }

    /// Coordinates of `ζ^k` for any integer `k`.
    pub fn power(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(self.n as i64) as usize]
    }
}

/// Integer coefficients of Φ_n, computed as (x^n - 1) divided by Φ_d for the
/// proper divisors d of n.
fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_divide(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd] / den[dd];
        q[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An exact element of Q(ζ_n) on the power basis.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloElement {
    n: u32,
    coeffs: Vec<Rational>,
}

/// A complex embedding value together with an absolute error bound.
#[derive(Clone, Debug)]
pub struct Embedded {
    pub value: Complex,
    pub error: f64,
}

/// Successful recognition of a complex number.
#[derive(Clone, Debug)]
pub struct Recognition {
    pub element: CycloElement,
    pub residual: f64,
}

impl CycloElement {
    pub fn from_coeffs(n: u32, coeffs: Vec<Rational>) -> Result<Self> {
        let ctx = CycloContext::get(n)?;
        if coeffs.len() != ctx.phi_n as usize {
            return Err(Error::domain(format!(
                "Q(zeta_{n}) elements need {} coefficients, got {}",
                ctx.phi_n,
                coeffs.len()
            )));
        }
        Ok(CycloElement { n, coeffs })
    }

    pub fn from_ints(n: u32, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(n, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero(n: u32) -> Result<Self> {
        let phi = CycloContext::get(n)?.phi_n as usize;
        Ok(CycloElement { n, coeffs: vec![Rational::new(); phi] })
    }

    pub fn rational(n: u32, q: Rational) -> Result<Self> {
        let mut e = Self::zero(n)?;
        e.coeffs[0] = q;
        Ok(e)
    }

    pub fn one(n: u32) -> Result<Self> {
        Self::rational(n, Rational::from(1))
    }

    /// `ζ^k`.
    pub fn zeta_pow(n: u32, k: i64) -> Result<Self> {
        let ctx = CycloContext::get(n)?;
        Ok(CycloElement { n, coeffs: ctx.power(k).iter().map(|&c| Rational::from(c)).collect() })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// Max absolute value of numerators and denominators (in lowest terms).
    pub fn height(&self) -> Integer {
        let mut h = Integer::new();
        for c in &self.coeffs {
            let num = c.numer().clone().abs();
            if num > h {
                h = num;
            }
            if *c.denom() > h {
                h = c.denom().clone();
            }
        }
        h
    }

    /// Height saturated to `u64`.
    pub fn height_u64(&self) -> u64 {
        self.height().to_u64().unwrap_or(u64::MAX)
    }

    fn ctx(&self) -> Arc<CycloContext> {
        CycloContext::get(self.n).expect("element built with a valid order")
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.n, other.n, "mixing elements of Q(zeta_{}) and Q(zeta_{})", self.n, other.n);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| Rational::from(a + b)).collect();
        CycloElement { n: self.n, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| Rational::from(a - b)).collect();
        CycloElement { n: self.n, coeffs }
    }

    pub fn neg(&self) -> Self {
        CycloElement { n: self.n, coeffs: self.coeffs.iter().map(|a| Rational::from(-a)).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloElement { n: self.n, coeffs: self.coeffs.iter().map(|a| Rational::from(a * q)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let ctx = self.ctx();
        let phi = ctx.phi_n as usize;
        let mut out = vec![Rational::new(); phi];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if *b == 0 {
                    continue;
                }
                let ab = Rational::from(a * b);
                for (k, &c) in ctx.power((i + j) as i64).iter().enumerate() {
                    if c != 0 {
                        out[k] += Rational::from(&ab * c);
                    }
                }
            }
        }
        CycloElement { n: self.n, coeffs: out }
    }

    /// Multiplicative inverse, by solving the multiplication-by-self system.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("zero has no inverse"));
        }
        let phi = self.coeffs.len();
        // Column j of the matrix is self * ζ^j.
        let mut m: Vec<Vec<Rational>> = vec![vec![Rational::new(); phi + 1]; phi];
        for j in 0..phi {
            let col = self.mul(&CycloElement::zeta_pow(self.n, j as i64)?);
            for (i, c) in col.coeffs.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        m[0][phi] = Rational::from(1);
        for k in 0..phi {
            let p = (k..phi).find(|&r| m[r][k] != 0).ok_or_else(|| Error::domain("singular multiplication map"))?;
            m.swap(k, p);
            let inv = Rational::from(1) / m[k][k].clone();
            for c in k..=phi {
                m[k][c] *= &inv;
            }
            for r in 0..phi {
                if r != k && m[r][k] != 0 {
                    let f = m[r][k].clone();
                    for c in k..=phi {
                        let t = Rational::from(&f * &m[k][c]);
                        m[r][c] -= t;
                    }
                }
            }
        }
        Ok(CycloElement { n: self.n, coeffs: m.into_iter().map(|row| row[phi].clone()).collect() })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Image under the automorphism ζ ↦ ζ^r.
    pub fn galois_conjugate(&self, r: i64) -> Result<Self> {
        let ctx = self.ctx();
        let r = ctx.check_unit(r).ok_or(Error::InvalidAutomorphism { r, n: self.n })?;
        let mut out = vec![Rational::new(); self.coeffs.len()];
        for (k, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, &c) in ctx.power(r as i64 * k as i64).iter().enumerate() {
                if c != 0 {
                    out[j] += Rational::from(a * c);
                }
            }
        }
        Ok(CycloElement { n: self.n, coeffs: out })
    }

    /// Complex conjugate, i.e. the image under ζ ↦ ζ^(-1).
    pub fn conj(&self) -> Self {
        self.galois_conjugate(-1).expect("-1 is always a unit")
    }

    /// The embedding ζ ↦ exp(2πi r/n), evaluated with `precision` digits.
    pub fn embed(&self, r: i64, precision: Precision) -> Result<Embedded> {
        let ctx = self.ctx();
        let r = ctx.check_unit(r).ok_or(Error::InvalidEmbedding { r, n: self.n })?;
        let bits = precision.bits();
        let mut value = Complex::zero(bits);
        let mut magnitude = 0.0f64;
        for (k, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            let root = Complex::root_of_unity(bits, r as i64 * k as i64, self.n);
            let q = Float::with_val(bits, a);
            value.add_assign_ref(&root.scale(&q));
            magnitude += q.to_f64().abs();
        }
        // Each term carries a few ulps of rounding at the working precision.
        let error = 8.0 * (magnitude + 1.0) * (self.coeffs.len() as f64) * 2f64.powi(-(bits as i32));
        Ok(Embedded { value, error })
    }

    /// Human-readable form such as `1/2 + 1/2*z - z^3`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(z{})[{}]", self.n, self.pretty())
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloElementJson {
    n: u32,
    coeffs: Vec<String>,
}

fn rational_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = if s.contains('/') { Rational::parse(s) } else { Rational::parse(format!("{s}/1")) };
    parsed
        .map(Rational::from)
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
        .and_then(|q| if q.denom() == &0 { Err(Error::Parse("zero denominator".into())) } else { Ok(q) })
}

impl Serialize for CycloElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloElementJson { n: self.n, coeffs: self.coeffs.iter().map(rational_string).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CycloElementJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        CycloElement::from_coeffs(raw.n, coeffs).map_err(D::Error::custom)
    }
}

/// Smallest precision (in digits) accepted for a given degree and height bound.
///
/// This is a conservative rule of thumb, not a theorem: a relation vector of
/// height `H` has roughly `2 φ(n) log10 H` digits of information after clearing
/// denominators, doubled again for the two real constraints, plus a margin.
pub fn required_digits(phi_n: u32, height_bound: u64) -> u32 {
    (4.0 * phi_n as f64 * (height_bound.max(1) as f64).log10() + 20.0).ceil() as u32
}

/// Looks for `e` in Q(ζ_n) of height at most `height_bound` with `embed(e, 1) ≈ z`.
///
/// The relation search reduces the lattice spanned by `(1, ζ, ..., ζ^(φ-1), z)`
/// scaled by the number of trustworthy digits, then accepts the shortest
/// relation that involves `z`, implies an element of small enough height and
/// reproduces `z` to within `10^(-precision/2)`.
pub fn recognize(z: &Complex, z_error: f64, n: u32, height_bound: u64, precision: Precision) -> Result<Option<Recognition>> {
    let ctx = CycloContext::get(n)?;
    let phi = ctx.phi_n as usize;
    let p = precision.get();
    if height_bound < 1 {
        return Err(Error::domain("height bound must be at least 1"));
    }
    let required = required_digits(ctx.phi_n, height_bound);
    if p < required {
        return Err(Error::InsufficientPrecision { digits: p, required, height_bound });
    }
    let tolerance = precision.half_epsilon();
    if !(z_error <= tolerance) {
        return Err(Error::domain(format!("input error {z_error:.3e} exceeds 10^(-{p}/2)")));
    }
    let bits = precision.bits();
    let z = z.with_prec(bits);

    // Trust only the digits backed by both the working precision and the input bound.
    let trusted = if z_error > 0.0 { (-z_error.log10()).floor().min(p as f64) } else { p as f64 };
    let digits = (trusted as i32 - 3).max(8);
    let scale = pow10(bits, digits);
    let to_int = |x: &Float| -> Integer {
        let scaled = Float::with_val(bits, x * &scale);
        scaled.round().to_integer().expect("finite value")
    };

    let mut values: Vec<Complex> = (0..phi).map(|k| Complex::root_of_unity(bits, k as i64, n)).collect();
    values.push(z.clone());
    let dim = phi + 1;
    let mut basis: Vec<Vec<Integer>> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut row = vec![Integer::new(); dim + 2];
            row[i] = Integer::from(1);
            row[dim] = to_int(&v.re);
            row[dim + 1] = to_int(&v.im);
            row
        })
        .collect();
    if !lll_reduce(&mut basis, (99, 100)) {
        return Ok(None);
    }

    let mut best: Option<Recognition> = None;
    for row in &basis {
        let cz = &row[phi];
        if *cz == 0 {
            continue;
        }
        let coeffs: Vec<Rational> = (0..phi).map(|k| -Rational::from((row[k].clone(), cz.clone()))).collect();
        let element = CycloElement { n, coeffs };
        if element.height() > height_bound {
            continue;
        }
        let embedded = element.embed(1, precision)?;
        let residual = (&embedded.value - &z).abs_f64();
        if residual > tolerance {
            continue;
        }
        let better = best.as_ref().is_none_or(|b| element.height() < b.element.height());
        if better {
            best = Some(Recognition { element, residual });
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec(d: u32) -> Precision {
        Precision::digits(d).unwrap()
    }

    fn q(num: i64, den: i64) -> Rational {
        Rational::from((num, den))
    }

    #[test]
    fn cyclotomic_polynomials_match_known_values() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 2..=30 {
            assert_eq!(cyclotomic_polynomial(n).len() as u32 - 1, totient(n));
        }
    }

    #[test]
    fn context_units_follow_totient() {
        let ctx = CycloContext::get(12).unwrap();
        assert_eq!(ctx.units, vec![1, 5, 7, 11]);
        assert_eq!(ctx.phi_n, 4);
        assert!(CycloContext::get(1).is_err());
    }

    #[test]
    fn embedding_examples() {
        let p = prec(40);
        let one = CycloElement::one(7).unwrap().embed(3, p).unwrap();
        assert!((&one.value - &Complex::one(p.bits())).abs_f64() <= one.error);

        let z = CycloElement::zeta_pow(4, 1).unwrap().embed(1, p).unwrap();
        assert!((&z.value - &Complex::i(p.bits())).abs_f64() <= 1e-39);

        // ζ + ζ^{-1} for n = 5 is 2cos(2π/5) = (√5 - 1)/2.
        let e = CycloElement::zeta_pow(5, 1).unwrap().add(&CycloElement::zeta_pow(5, -1).unwrap());
        let v = e.embed(1, p).unwrap();
        let golden = (Float::with_val(p.bits(), 5).sqrt() - 1u32) / 2u32;
        assert!((v.value.re - golden).abs().to_f64() < 1e-39);
        assert!(v.value.im.abs().to_f64() < 1e-39);

        assert!(matches!(e.embed(5, p), Err(Error::InvalidEmbedding { .. })));
    }

    #[test]
    fn galois_examples() {
        let one = CycloElement::one(9).unwrap();
        for r in unit_residues(9) {
            assert_eq!(one.galois_conjugate(r as i64).unwrap(), one);
        }
        let z5 = CycloElement::zeta_pow(5, 1).unwrap();
        assert_eq!(z5.galois_conjugate(2).unwrap(), CycloElement::zeta_pow(5, 2).unwrap());
        let z4 = CycloElement::zeta_pow(4, 1).unwrap();
        assert_eq!(z4.galois_conjugate(3).unwrap(), z4.neg());
        assert!(matches!(z4.galois_conjugate(2), Err(Error::InvalidAutomorphism { .. })));
    }

    #[test]
    fn inverse_and_division() {
        let a = CycloElement::from_coeffs(5, vec![q(1, 2), q(1, 3), q(0, 1), q(-2, 1)]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), CycloElement::one(5).unwrap());
        assert!(CycloElement::zero(5).unwrap().inverse().is_err());
    }

    #[test]
    fn json_round_trip_uses_rational_strings() {
        let a = CycloElement::from_coeffs(3, vec![q(-1, 2), q(3, 1)]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"n":3,"coeffs":["-1/2","3/1"]}"#);
        let b: CycloElement = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let c: CycloElement = serde_json::from_str(r#"{"n":3,"coeffs":["2","0"]}"#).unwrap();
        assert_eq!(c, CycloElement::from_ints(3, &[2, 0]).unwrap());
        assert!(serde_json::from_str::<CycloElement>(r#"{"n":3,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn recognize_rational_and_known_element() {
        let p = prec(60);
        let half = Complex::from_f64(p.bits(), 0.5, 0.0);
        let r = recognize(&half, 0.0, 5, 100, p).unwrap().unwrap();
        assert_eq!(r.element, CycloElement::from_coeffs(5, vec![q(1, 2), q(0, 1), q(0, 1), q(0, 1)]).unwrap());
        assert_eq!(r.residual, 0.0);

        let e = CycloElement::from_coeffs(5, vec![q(1, 2), q(1, 2), q(0, 1), q(0, 1)]).unwrap();
        let z = e.embed(1, p).unwrap();
        let r = recognize(&z.value, z.error, 5, 100, p).unwrap().unwrap();
        assert_eq!(r.element, e);
    }

    #[test]
    fn pi_is_not_recognized() {
        // Q(ζ_3) keeps 50 digits above the guard threshold for height 100.
        let p = prec(50);
        let pi = Complex::from_real(crate::mp::pi(p.bits()));
        assert!(recognize(&pi, 0.0, 3, 100, p).unwrap().is_none());
    }

    #[test]
    fn precision_guard_is_an_error() {
        let p = prec(20);
        let z = Complex::from_f64(p.bits(), 0.25, 0.0);
        assert!(matches!(recognize(&z, 0.0, 5, 1_000_000, p), Err(Error::InsufficientPrecision { .. })));
    }
}
