//! Multiprecision complex scalars and small dense matrices over them.
//!
//! Real parts are MPFR floats (via `rug`). Complex arithmetic is done by hand
//! on pairs of floats so that no MPC installation is needed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Extra decimal digits carried internally on top of the requested precision.
pub const GUARD_DIGITS: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Requested accuracy in decimal digits.
///
/// Error bounds are carried as `f64`, so precisions are capped well inside
/// the `f64` exponent range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_DIGITS: u32 = 16;
    pub const MAX_DIGITS: u32 = 280;

    pub fn digits(d: u32) -> Result<Self> {
        if !(Self::MIN_DIGITS..=Self::MAX_DIGITS).contains(&d) {
            return Err(Error::domain(format!(
                "precision must lie in {}..={} digits, got {d}",
                Self::MIN_DIGITS,
                Self::MAX_DIGITS
            )));
        }
        Ok(Precision(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Working precision in bits, guard digits included.
    pub fn bits(self) -> u32 {
        digits_to_bits(self.0 + GUARD_DIGITS)
    }

    /// `10^-digits`.
    pub fn epsilon(self) -> f64 {
        10f64.powi(-(self.0 as i32))
    }

    /// `10^-(digits/2)`, the acceptance threshold for recognitions and certificates.
    pub fn half_epsilon(self) -> f64 {
        10f64.powf(-(self.0 as f64) / 2.0)
    }

    pub fn plus(self, extra: u32) -> Result<Self> {
        Self::digits(self.0 + extra)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.0)
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 4
}

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

/// Natural log of |x| for a float of any exponent, as an `f64`.
pub fn ln_abs_f64(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().ln() + e as f64 * std::f64::consts::LN_2
}

/// A complex number with MPFR real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn zero(bits: u32) -> Self {
        Complex { re: Float::new(bits), im: Float::new(bits) }
    }

    pub fn one(bits: u32) -> Self {
        Complex { re: Float::with_val(bits, 1), im: Float::new(bits) }
    }

    pub fn i(bits: u32) -> Self {
        Complex { re: Float::new(bits), im: Float::with_val(bits, 1) }
    }

    pub fn from_f64(bits: u32, re: f64, im: f64) -> Self {
        Complex { re: Float::with_val(bits, re), im: Float::with_val(bits, im) }
    }

    pub fn from_real(x: Float) -> Self {
        let bits = x.prec();
        Complex { re: x, im: Float::new(bits) }
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    /// `exp(i * theta)`.
    pub fn cis(theta: &Float) -> Self {
        let bits = theta.prec();
        let mut s = Float::new(bits);
        let mut c = Float::new(bits);
        (&mut s, &mut c).assign(theta.sin_cos_ref());
        Complex { re: c, im: s }
    }

    /// `exp(2 pi i * num / den)`.
    pub fn root_of_unity(bits: u32, num: i64, den: u32) -> Self {
        let k = num.rem_euclid(den as i64);
        // Exact values on the axes keep Gaussian and Eisenstein data clean.
        if 4 * k == den as i64 {
            return Complex::i(bits);
        }
        if 2 * k == den as i64 {
            return -&Complex::one(bits);
        }
        if 4 * k == 3 * den as i64 {
            return -&Complex::i(bits);
        }
        if k == 0 {
            return Complex::one(bits);
        }
        let theta = Float::with_val(bits, pi(bits) * 2u32 * k) / den;
        Complex::cis(&theta)
    }

    pub fn parse(bits: u32, re: &str, im: &str) -> Result<Self> {
        let p = |s: &str| -> Result<Float> {
            Float::parse(s.trim())
                .map(|v| Float::with_val(bits, v))
                .map_err(|e| Error::Parse(format!("bad real number {s:?}: {e}")))
        };
        Ok(Complex { re: p(re)?, im: p(im)? })
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, bits: u32) -> Self {
        Complex { re: Float::with_val(bits, &self.re), im: Float::with_val(bits, &self.im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), &self.re * &self.re + &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn scale(&self, s: &Float) -> Self {
        let bits = self.prec();
        Complex { re: Float::with_val(bits, &self.re * s), im: Float::with_val(bits, &self.im * s) }
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        let bits = self.prec();
        Complex { re: Float::with_val(bits, &self.re * s), im: Float::with_val(bits, &self.im * s) }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Complex { re: Float::with_val(self.im.prec(), -&self.im), im: self.re.clone() }
    }

    pub fn div(&self, rhs: &Complex) -> Self {
        let bits = self.prec().max(rhs.prec());
        let d = rhs.norm_sqr();
        let re = Float::with_val(bits, &self.re * &rhs.re + &self.im * &rhs.im);
        let im = Float::with_val(bits, &self.im * &rhs.re - &self.re * &rhs.im);
        Complex { re: re / &d, im: im / &d }
    }

    pub fn recip(&self) -> Self {
        let bits = self.prec();
        let d = self.norm_sqr();
        Complex {
            re: Float::with_val(bits, &self.re / &d),
            im: Float::with_val(bits, -&self.im) / &d,
        }
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut result = Complex::one(self.prec());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn exp(&self) -> Self {
        let bits = self.prec();
        let r = Float::with_val(bits, self.re.exp_ref());
        Complex::cis(&self.im).scale(&r)
    }

    /// Principal argument.
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    /// `ln |z|` in double precision, valid far outside the `f64` range.
    pub fn ln_abs_f64(&self) -> f64 {
        let (e, re, im) = self.scaled_f64();
        if re == 0.0 && im == 0.0 {
            return f64::NEG_INFINITY;
        }
        re.hypot(im).ln() + e as f64 * std::f64::consts::LN_2
    }

    /// Principal argument in double precision, valid for any magnitude.
    pub fn arg_f64(&self) -> f64 {
        let (_, re, im) = self.scaled_f64();
        im.atan2(re)
    }

    fn scaled_f64(&self) -> (i32, f64, f64) {
        let (mr, er) = self.re.to_f64_exp();
        let (mi, ei) = self.im.to_f64_exp();
        let e = match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => return (0, 0.0, 0.0),
            (true, false) => ei,
            (false, true) => er,
            (false, false) => er.max(ei),
        };
        let scale = |m: f64, x: i32, zero: bool| if zero { 0.0 } else { m * 2f64.powi(x - e) };
        (e, scale(mr, er, self.re.is_zero()), scale(mi, ei, self.im.is_zero()))
    }

    /// Complex number `2^e * (re + i im)` built from an `f64` pair.
    pub fn from_scaled_f64(bits: u32, re: f64, im: f64, e: i32) -> Self {
        let mut z = Complex::from_f64(bits, re, im);
        if e != 0 {
            z.re <<= e;
            z.im <<= e;
        }
        z
    }

    /// Decimal strings with `digits` significant digits.
    pub fn to_strings(&self, digits: usize) -> (String, String) {
        (float_to_string(&self.re, digits), float_to_string(&self.im, digits))
    }
}

pub fn float_to_string(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        write!(f, "{re:.15e}{im:+.15e}i")
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let bits = self.prec().max(rhs.prec());
        Complex {
            re: Float::with_val(bits, &self.re + &rhs.re),
            im: Float::with_val(bits, &self.im + &rhs.im),
        }
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let bits = self.prec().max(rhs.prec());
        Complex {
            re: Float::with_val(bits, &self.re - &rhs.re),
            im: Float::with_val(bits, &self.im - &rhs.im),
        }
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let bits = self.prec().max(rhs.prec());
        Complex {
            re: Float::with_val(bits, &self.re * &rhs.re - &self.im * &rhs.im),
            im: Float::with_val(bits, &self.re * &rhs.im + &self.im * &rhs.re),
        }
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl Complex {
    pub fn add_assign_ref(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }

    /// `self += a * b`.
    pub fn add_mul(&mut self, a: &Complex, b: &Complex) {
        let bits = self.prec();
        let re = Float::with_val(bits, &a.re * &b.re - &a.im * &b.im);
        let im = Float::with_val(bits, &a.re * &b.im + &a.im * &b.re);
        self.re += re;
        self.im += im;
    }
}

/// Dense row-major matrix of multiprecision complex numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn zeros(bits: u32, rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex::zero(bits); rows * cols] }
    }

    pub fn identity(bits: u32, n: usize) -> Self {
        let mut m = Self::zeros(bits, n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one(bits);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: Vec<Vec<Complex>>) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prec(&self) -> u32 {
        self.data.iter().map(Complex::prec).max().unwrap_or(64)
    }

    pub fn row(&self, r: usize) -> &[Complex] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self[(r, c)].clone());
            }
        }
        CMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn conj_transpose(&self) -> Self {
        let mut t = self.transpose();
        for z in &mut t.data {
            *z = z.conj();
        }
        t
    }

    pub fn scale(&self, s: &Complex) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn sub(&self, rhs: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matmul");
        let bits = self.prec().max(rhs.prec());
        let mut out = CMatrix::zeros(bits, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Complex::zero(bits);
                for k in 0..self.cols {
                    acc.add_mul(&self[(i, k)], &rhs[(k, j)]);
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(v.len(), self.rows);
        let bits = self.prec();
        (0..self.cols)
            .map(|j| {
                let mut acc = Complex::zero(bits);
                for (i, vi) in v.iter().enumerate() {
                    acc.add_mul(vi, &self[(i, j)]);
                }
                acc
            })
            .collect()
    }

    /// Largest entrywise modulus, in double precision.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Complex::abs_f64).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        self.sub(rhs).max_abs()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<nalgebra::Complex<f64>> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |r, c| {
            let (re, im) = self[(r, c)].to_f64();
            nalgebra::Complex::new(re, im)
        })
    }

    /// Solves `self * X = rhs` by Gaussian elimination with partial pivoting.
    ///
    /// Fails when a pivot falls below `rel_tol` times the largest entry.
    pub fn solve(&self, rhs: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        let scale = a.max_abs();
        if scale == 0.0 {
            return Err(Error::SingularJacobian { pivot_ratio: 0.0 });
        }
        let mut min_ratio = f64::INFINITY;
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|r| (r, a[(r, k)].abs_f64()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            min_ratio = min_ratio.min(best / scale);
            if best <= rel_tol * scale {
                return Err(Error::SingularJacobian { pivot_ratio: best / scale });
            }
            if p != k {
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                }
                for c in 0..m {
                    b.data.swap(k * m + c, p * m + c);
                }
            }
            let inv = a[(k, k)].recip();
            for r in k + 1..n {
                let f = &a[(r, k)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    let t = &f * &a[(k, c)];
                    a[(r, c)] = &a[(r, c)] - &t;
                }
                for c in 0..m {
                    let t = &f * &b[(k, c)];
                    b[(r, c)] = &b[(r, c)] - &t;
                }
            }
        }
        let bits = a.prec().max(b.prec());
        let mut x = CMatrix::zeros(bits, n, m);
        for c in 0..m {
            for r in (0..n).rev() {
                let mut acc = b[(r, c)].clone();
                for k in r + 1..n {
                    let t = &a[(r, k)] * &x[(k, c)];
                    acc = &acc - &t;
                }
                x[(r, c)] = acc.div(&a[(r, r)]);
            }
        }
        Ok(x)
    }

    pub fn inverse(&self, rel_tol: f64) -> Result<CMatrix> {
        self.solve(&CMatrix::identity(self.prec(), self.rows), rel_tol)
    }

    /// A unit vector spanning the numerical null space of a matrix whose
    /// rank is one less than its column count.
    ///
    /// Uses complete pivoting; the trailing block left after `cols - 1`
    /// eliminations is the residual, reported relative to the first pivot.
    pub fn null_vector(&self) -> (Vec<Complex>, f64) {
        let n = self.cols;
        let bits = self.prec();
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let rank = n - 1;
        let mut first_pivot = 0.0;
        for k in 0..rank {
            let mut best = (k, k, -1.0);
            for r in k..a.rows {
                for c in k..n {
                    let v = a[(r, c)].abs_f64();
                    if v > best.2 {
                        best = (r, c, v);
                    }
                }
            }
            if k == 0 {
                first_pivot = best.2;
            }
            let (pr, pc, _) = best;
            if pr != k {
                for c in 0..n {
                    a.data.swap(k * n + c, pr * n + c);
                }
            }
            if pc != k {
                for r in 0..a.rows {
                    a.data.swap(r * n + k, r * n + pc);
                }
                perm.swap(k, pc);
            }
            let inv = a[(k, k)].recip();
            for r in k + 1..a.rows {
                let f = &a[(r, k)] * &inv;
                for c in k..n {
                    let t = &f * &a[(k, c)];
                    a[(r, c)] = &a[(r, c)] - &t;
                }
            }
        }
        let mut residual = 0.0f64;
        for r in rank..a.rows {
            residual = residual.max(a[(r, rank)].abs_f64());
        }
        // Back-substitute with the free (last permuted) coordinate set to one.
        let mut y = vec![Complex::zero(bits); n];
        y[rank] = Complex::one(bits);
        for r in (0..rank).rev() {
            let mut acc = Complex::zero(bits);
            for c in r + 1..n {
                acc.add_mul(&a[(r, c)], &y[c]);
            }
            y[r] = (-&acc).div(&a[(r, r)]);
        }
        let mut x = vec![Complex::zero(bits); n];
        for (k, &p) in perm.iter().enumerate() {
            x[p] = y[k].clone();
        }
        let norm = x.iter().fold(Float::new(bits), |acc, z| acc + z.norm_sqr()).sqrt();
        let x = x.iter().map(|z| Complex { re: Float::with_val(bits, &z.re / &norm), im: Float::with_val(bits, &z.im / &norm) }).collect();
        let ratio = if first_pivot > 0.0 { residual / first_pivot } else { f64::INFINITY };
        (x, ratio)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex;
    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex {
        &mut self.data[r * self.cols + c]
    }
}

/// `10^e` as a float of the given precision.
pub fn pow10(bits: u32, e: i32) -> Float {
    Float::with_val(bits, Float::with_val(bits, 10).pow(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_are_exact_on_axes() {
        let bits = 200;
        assert_eq!(Complex::root_of_unity(bits, 1, 4), Complex::i(bits));
        assert_eq!(Complex::root_of_unity(bits, 3, 6), -&Complex::one(bits));
        let z = Complex::root_of_unity(bits, 1, 5);
        let p = z.powi(5);
        assert!((&p - &Complex::one(bits)).abs_f64() < 1e-55);
    }

    #[test]
    fn scaled_magnitudes_survive_underflow() {
        let bits = 128;
        let tiny = Complex::from_scaled_f64(bits, 0.5, 0.5, -5000);
        let expected = (0.5f64.hypot(0.5)).ln() - 5000.0 * std::f64::consts::LN_2;
        assert!((tiny.ln_abs_f64() - expected).abs() < 1e-9);
        assert!((tiny.arg_f64() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn solve_recovers_known_solution() {
        let bits = 200;
        let c = |re: f64, im: f64| Complex::from_f64(bits, re, im);
        let a = CMatrix::from_rows(vec![
            vec![c(2.0, 1.0), c(0.5, 0.0), c(0.0, -1.0)],
            vec![c(1.0, 0.0), c(3.0, 0.0), c(1.0, 1.0)],
            vec![c(0.0, 2.0), c(1.0, -1.0), c(4.0, 0.0)],
        ]);
        let x = CMatrix::from_rows(vec![vec![c(1.0, 0.0)], vec![c(-2.0, 1.0)], vec![c(0.5, 0.25)]]);
        let b = a.matmul(&x);
        let y = a.solve(&b, 1e-40).unwrap();
        assert!(y.max_abs_diff(&x) < 1e-55);
        let inv = a.inverse(1e-40).unwrap();
        assert!(a.matmul(&inv).max_abs_diff(&CMatrix::identity(bits, 3)) < 1e-55);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let bits = 128;
        let c = |re: f64| Complex::from_f64(bits, re, 0.0);
        let a = CMatrix::from_rows(vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]]);
        assert!(matches!(a.inverse(1e-20), Err(Error::SingularJacobian { .. })));
    }

    #[test]
    fn null_vector_of_rank_deficient_system() {
        let bits = 200;
        let c = |re: f64, im: f64| Complex::from_f64(bits, re, im);
        // Rows orthogonal (bilinearly) to (1, 2i, -1).
        let a = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 2.0), c(-1.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 2.0), c(-1.0, 0.0), c(1.0, 0.0)],
            vec![c(3.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)],
        ]);
        let (x, residual) = a.null_vector();
        assert!(residual < 1e-50);
        let ratio = x[1].div(&x[0]);
        assert!((&ratio - &c(0.0, 2.0)).abs_f64() < 1e-50);
        let ratio = x[2].div(&x[0]);
        assert!((&ratio - &c(-1.0, 0.0)).abs_f64() < 1e-50);
    }
}
