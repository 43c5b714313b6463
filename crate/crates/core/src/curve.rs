//! The cyclic cover `y^n = ∏ (x - x_i)` of the line branched at `2n` points:
//! configurations in normalized gauge, eigenform bases, Hodge tables, genus
//! and Prym numerology.

use std::collections::BTreeMap;
use std::fmt;

use rug::Float;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::{totient, unit_residues};
use crate::error::{Error, Result};
use crate::mp::{digits_to_bits, Complex};

/// Largest cover degree supported by configurations and period computations.
pub const MAX_DEGREE: u32 = 12;

fn check_degree(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("cover degree must be at least 2, got {n}")));
    }
    Ok(())
}

/// Hodge numbers `(h^{1,0}, h^{0,1})` of each eigenspace `H^1(C)[i]`, `i = 1..n-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeProfile {
    pub n: u32,
    pub rows: Vec<(u32, u32)>,
}

impl HodgeProfile {
    /// Row for eigenspace `i` (1-based).
    pub fn row(&self, i: u32) -> (u32, u32) {
        self.rows[i as usize - 1]
    }

    pub fn genus(&self) -> u32 {
        self.rows.iter().map(|r| r.0).sum()
    }
}

pub fn hodge_profile(n: u32) -> Result<HodgeProfile> {
    check_degree(n)?;
    let rows = (1..n).map(|i| (2 * i - 1, 2 * (n - i) - 1)).collect();
    Ok(HodgeProfile { n, rows })
}

/// Genus of the cover, computed by Riemann-Hurwitz and checked against the
/// Hodge table.
pub fn genus(n: u32) -> Result<u32> {
    let profile = hodge_profile(n)?;
    // Degree n, totally ramified over 2n points: 2g - 2 = -2n + 2n(n - 1).
    let n = n as i64;
    let euler = -2 * n + 2 * n * (n - 1);
    let g = (euler + 2) / 2;
    assert_eq!(g, profile.genus() as i64, "Riemann-Hurwitz disagrees with the Hodge table");
    Ok(g as u32)
}

/// The differential `x^a dx / y^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Eigenform {
    pub a: u32,
    pub b: u32,
}

impl Eigenform {
    pub fn new(n: u32, a: u32, b: u32) -> Result<Self> {
        check_degree(n)?;
        if b == 0 || b >= n {
            return Err(Error::domain(format!("exponent b = {b} outside 1..={}", n - 1)));
        }
        if a + 2 > 2 * b {
            return Err(Error::domain(format!("x^{a} dx / y^{b} is not holomorphic")));
        }
        Ok(Eigenform { a, b })
    }

    /// The form `dx / y`.
    pub const OMEGA: Eigenform = Eigenform { a: 0, b: 1 };
}

impl fmt::Display for Eigenform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, 1) => write!(f, "dx/y"),
            (0, b) => write!(f, "dx/y^{b}"),
            (1, b) => write!(f, "x dx/y^{b}"),
            (a, b) => write!(f, "x^{a} dx/y^{b}"),
        }
    }
}

/// Exponent `b` of the forms spanning `H^{1,0}(C)[i]`.
///
/// Under `y ↦ ζ y` the form `x^a dx / y^b` is multiplied by `ζ^{-b}`, and the
/// number of holomorphic forms with a given `b` is `2b - 1`. Matching that
/// count against the Hodge table forces `b = i`.
pub fn eigenspace_exponent(n: u32, i: u32) -> Result<u32> {
    check_degree(n)?;
    if i == 0 || i >= n {
        return Err(Error::domain(format!("eigenspace index {i} outside 1..={}", n - 1)));
    }
    Ok(i)
}

pub fn eigenform_basis(n: u32, i: u32) -> Result<Vec<Eigenform>> {
    let b = eigenspace_exponent(n, i)?;
    let forms: Vec<Eigenform> = (0..=2 * b - 2).map(|a| Eigenform { a, b }).collect();
    let expected = hodge_profile(n)?.row(i).0;
    assert_eq!(forms.len() as u32, expected, "eigenform count disagrees with h^(1,0)[{i}] for n = {n}");
    Ok(forms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrymProfile {
    pub n: u32,
    pub prym_dim: u32,
    pub eigenspaces: Vec<u32>,
    /// Genus of the quotient of the curve by the deck subgroup of order `n'`,
    /// for each divisor `1 < n' < n`.
    pub quotient_genera: BTreeMap<u32, u32>,
}

pub fn prym_profile(n: u32) -> Result<PrymProfile> {
    let profile = hodge_profile(n)?;
    let phi = totient(n);
    let prym_dim = (n - 1) * phi;
    let eigenspaces = unit_residues(n);
    let by_hodge: u32 = eigenspaces.iter().map(|&i| profile.row(i).0 + profile.row(i).1).sum::<u32>() / 2;
    assert_eq!(prym_dim, by_hodge, "Prym dimension disagrees with the primitive eigenspaces");

    let mut quotient_genera = BTreeMap::new();
    for np in 2..n {
        if n.is_multiple_of(np) {
            // Dividing by the order-n' subgroup leaves w^m = ∏ (x - x_i) with
            // w = y^{n'} and m = n / n', still totally ramified at all 2n points.
            let m = (n / np) as i64;
            let euler = -2 * m + 2 * n as i64 * (m - 1);
            quotient_genera.insert(np, ((euler + 2) / 2) as u32);
        }
    }
    Ok(PrymProfile { n, prym_dim, eigenspaces, quotient_genera })
}

/// A point of the projective line.
#[derive(Clone, Debug, PartialEq)]
pub enum ProjectivePoint {
    Finite(Complex),
    Infinity,
}

impl ProjectivePoint {
    pub fn finite(bits: u32, re: f64, im: f64) -> Self {
        ProjectivePoint::Finite(Complex::from_f64(bits, re, im))
    }
}

/// A Möbius transformation `z ↦ (a z + b) / (c z + d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mobius {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl Mobius {
    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let (num, den) = match p {
            ProjectivePoint::Infinity => (self.a.clone(), self.c.clone()),
            ProjectivePoint::Finite(z) => (&(&self.a * z) + &self.b, &(&self.c * z) + &self.d),
        };
        if den.is_zero() {
            ProjectivePoint::Infinity
        } else {
            ProjectivePoint::Finite(num.div(&den))
        }
    }

    /// The unique map sending `p0, p1, p2` to `0, 1, ∞`.
    pub fn to_standard(p0: &ProjectivePoint, p1: &ProjectivePoint, p2: &ProjectivePoint, bits: u32) -> Self {
        use ProjectivePoint::*;
        let one = Complex::one(bits);
        let zero = Complex::zero(bits);
        match (p0, p1, p2) {
            (Finite(p0), Finite(p1), Infinity) => Mobius { a: one.clone(), b: -p0, c: zero, d: p1 - p0 },
            (Infinity, Finite(p1), Finite(p2)) => Mobius { a: zero, b: p1 - p2, c: one, d: -p2 },
            (Finite(p0), Infinity, Finite(p2)) => Mobius { a: one.clone(), b: -p0, c: one, d: -p2 },
            (Finite(p0), Finite(p1), Finite(p2)) => {
                let u = p1 - p2;
                let v = p1 - p0;
                Mobius { b: -&(p0 * &u), d: -&(p2 * &v), a: u, c: v }
            }
            _ => unreachable!("callers reject repeated infinities"),
        }
    }
}

/// `2n` distinct points of the line in normalized gauge: `0, 1, ∞` followed by
/// the free coordinates.
#[derive(Clone, PartialEq)]
pub struct PointConfiguration {
    n: u32,
    free: Vec<Complex>,
}

impl fmt::Debug for PointConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free: Vec<String> = self.free.iter().map(|z| z.to_string()).collect();
        f.debug_struct("PointConfiguration").field("n", &self.n).field("free", &free).finish()
    }
}

/// Points closer than this (relative to their size) are treated as colliding.
const COLLISION_TOLERANCE: f64 = 1e-30;

impl PointConfiguration {
    pub fn new(n: u32, free: Vec<Complex>) -> Result<Self> {
        check_degree(n)?;
        if n > MAX_DEGREE {
            return Err(Error::domain(format!("configurations are supported up to n = {MAX_DEGREE}")));
        }
        if free.len() != 2 * n as usize - 3 {
            return Err(Error::domain(format!("n = {n} needs {} free coordinates, got {}", 2 * n - 3, free.len())));
        }
        let cfg = PointConfiguration { n, free };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_f64(n: u32, bits: u32, free: &[(f64, f64)]) -> Result<Self> {
        Self::new(n, free.iter().map(|&(re, im)| Complex::from_f64(bits, re, im)).collect())
    }

    /// The Legendre configuration `(0, 1, ∞, λ)`.
    pub fn legendre(lambda: Complex) -> Result<Self> {
        Self::new(2, vec![lambda])
    }

    /// Real points `k / (2n - 2)`, `k = 1..2n-3`, strictly between 0 and 1.
    pub fn equally_spaced(n: u32, bits: u32) -> Result<Self> {
        let m = 2 * n - 2;
        let free = (1..m).map(|k| Complex::from_real(Float::with_val(bits, k) / m)).collect();
        Self::new(n, free)
    }

    fn validate(&self) -> Result<()> {
        let chain = self.chain(self.prec());
        for (i, z) in chain.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::degenerate(format!("point {i} is not finite")));
            }
        }
        if let Some((i, j, d)) = self.closest_pair() {
            let scale = 1.0 + chain[i].abs_f64().max(chain[j].abs_f64());
            if d <= COLLISION_TOLERANCE * scale {
                return Err(Error::degenerate(format!("points at chain positions {i} and {j} coincide")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn free(&self) -> &[Complex] {
        &self.free
    }

    pub fn prec(&self) -> u32 {
        self.free.iter().map(Complex::prec).max().unwrap_or(64)
    }

    pub fn with_prec(&self, bits: u32) -> Self {
        PointConfiguration { n: self.n, free: self.free.iter().map(|z| z.with_prec(bits)).collect() }
    }

    /// Finite branch points in path order `0, s_1, ..., s_{2n-3}, 1`.
    pub fn chain(&self, bits: u32) -> Vec<Complex> {
        let mut out = Vec::with_capacity(self.free.len() + 2);
        out.push(Complex::zero(bits));
        out.extend(self.free.iter().map(|z| z.with_prec(bits)));
        out.push(Complex::one(bits));
        out
    }

    /// All `2n` points in label order `0, 1, ∞, s_1, ...`.
    pub fn points(&self) -> Vec<ProjectivePoint> {
        let bits = self.prec();
        let mut out = vec![
            ProjectivePoint::Finite(Complex::zero(bits)),
            ProjectivePoint::Finite(Complex::one(bits)),
            ProjectivePoint::Infinity,
        ];
        out.extend(self.free.iter().cloned().map(ProjectivePoint::Finite));
        out
    }

    /// Chain positions and distance of the two closest finite points.
    pub fn closest_pair(&self) -> Option<(usize, usize, f64)> {
        let chain = self.chain(self.prec());
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..chain.len() {
            for j in i + 1..chain.len() {
                let d = (&chain[i] - &chain[j]).abs_f64();
                if best.is_none_or(|b| d < b.2) {
                    best = Some((i, j, d));
                }
            }
        }
        best
    }

    /// Max-norm distance between free coordinates.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.free.iter().zip(&other.free).map(|(a, b)| (a - b).abs_f64()).fold(0.0, f64::max)
    }

    /// The same points with every free coordinate replaced by `f(k, s_k)`.
    pub fn map_free(&self, f: impl Fn(usize, &Complex) -> Complex) -> Result<Self> {
        Self::new(self.n, self.free.iter().enumerate().map(|(k, z)| f(k, z)).collect())
    }

    /// Complex-conjugate configuration.
    pub fn conj(&self) -> Self {
        PointConfiguration { n: self.n, free: self.free.iter().map(Complex::conj).collect() }
    }
}

/// Moves `points[0], points[1], points[2]` to `0, 1, ∞` and returns the
/// resulting configuration together with the transformation used.
pub fn normalize(points: &[ProjectivePoint], bits: u32) -> Result<(PointConfiguration, Mobius)> {
    let len = points.len();
    if len < 4 || len % 2 == 1 {
        return Err(Error::domain(format!("need an even number (at least 4) of points, got {len}")));
    }
    let n = (len / 2) as u32;
    let infinities = points.iter().filter(|p| matches!(p, ProjectivePoint::Infinity)).count();
    if infinities > 1 {
        return Err(Error::degenerate("more than one point at infinity"));
    }
    for i in 0..len {
        for j in i + 1..len {
            if let (ProjectivePoint::Finite(a), ProjectivePoint::Finite(b)) = (&points[i], &points[j]) {
                let scale = 1.0 + a.abs_f64().max(b.abs_f64());
                if (a - b).abs_f64() <= COLLISION_TOLERANCE * scale {
                    return Err(Error::degenerate(format!("points {i} and {j} coincide")));
                }
            }
        }
    }
    let m = Mobius::to_standard(&points[0], &points[1], &points[2], bits);
    let mut free = Vec::with_capacity(len - 3);
    for (i, p) in points.iter().enumerate().skip(3) {
        match m.apply(p) {
            ProjectivePoint::Finite(z) => free.push(z),
            ProjectivePoint::Infinity => return Err(Error::degenerate(format!("point {i} collides with point 2"))),
        }
    }
    Ok((PointConfiguration::new(n, free)?, m))
}

#[derive(Serialize, Deserialize)]
struct ConfigurationJson {
    n: u32,
    free: Vec<[String; 2]>,
}

impl Serialize for PointConfiguration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let digits = (self.prec() as f64 / std::f64::consts::LOG2_10).floor() as usize;
        let free = self
            .free
            .iter()
            .map(|z| {
                let (re, im) = z.to_strings(digits);
                [re, im]
            })
            .collect();
        ConfigurationJson { n: self.n, free }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointConfiguration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ConfigurationJson::deserialize(d)?;
        let digits = raw.free.iter().flatten().map(|s| s.len()).max().unwrap_or(16).max(20) as u32;
        let bits = digits_to_bits(digits);
        let free = raw
            .free
            .iter()
            .map(|[re, im]| Complex::parse(bits, re, im))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        PointConfiguration::new(raw.n, free).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hodge_examples() {
        assert_eq!(hodge_profile(5).unwrap().rows, vec![(1, 7), (3, 5), (5, 3), (7, 1)]);
        assert_eq!(hodge_profile(2).unwrap().rows, vec![(1, 1)]);
        assert_eq!(hodge_profile(3).unwrap().rows, vec![(1, 3), (3, 1)]);
        assert!(hodge_profile(1).is_err());
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(2).unwrap(), 1);
        assert_eq!(genus(3).unwrap(), 4);
        assert_eq!(genus(5).unwrap(), 16);
    }

    #[test]
    fn eigenform_examples() {
        assert_eq!(eigenform_basis(5, 1).unwrap(), vec![Eigenform::OMEGA]);
        assert_eq!(eigenform_basis(5, 4).unwrap().len(), 7);
        assert_eq!(eigenform_basis(2, 1).unwrap(), vec![Eigenform::OMEGA]);
        assert!(eigenform_basis(5, 5).is_err());
        assert!(Eigenform::new(5, 3, 2).is_err());
    }

    #[test]
    fn prym_examples() {
        let p5 = prym_profile(5).unwrap();
        assert_eq!(p5.prym_dim, 16);
        assert!(p5.quotient_genera.is_empty());
        let p4 = prym_profile(4).unwrap();
        assert_eq!(p4.prym_dim, 6);
        assert_eq!(p4.quotient_genera, BTreeMap::from([(2, 3)]));
        assert_eq!(p4.prym_dim + p4.quotient_genera[&2], genus(4).unwrap());
        let p2 = prym_profile(2).unwrap();
        assert_eq!((p2.prym_dim, p2.quotient_genera.len()), (1, 0));
        let p6 = prym_profile(6).unwrap();
        assert_eq!(p6.quotient_genera, BTreeMap::from([(2, 10), (3, 5)]));
    }

    #[test]
    fn normalize_examples() {
        let bits = 200;
        let lam = ProjectivePoint::finite(bits, 0.3, 0.2);
        let pts = vec![
            ProjectivePoint::finite(bits, 0.0, 0.0),
            ProjectivePoint::finite(bits, 1.0, 0.0),
            ProjectivePoint::Infinity,
            lam.clone(),
        ];
        let (cfg, _) = normalize(&pts, bits).unwrap();
        assert_eq!(ProjectivePoint::Finite(cfg.free()[0].clone()), lam);

        let pts: Vec<_> = [1.0, 2.0, 3.0, 4.0].iter().map(|&x| ProjectivePoint::finite(bits, x, 0.0)).collect();
        let (cfg, _) = normalize(&pts, bits).unwrap();
        // z -> (z - 1)(2 - 3) / ((z - 3)(2 - 1)) sends 4 to -3.
        assert!((&cfg.free()[0] - &Complex::from_f64(bits, -3.0, 0.0)).abs_f64() < 1e-55);

        let pts: Vec<_> = [1.0, 2.0, 3.0, 2.0].iter().map(|&x| ProjectivePoint::finite(bits, x, 0.0)).collect();
        assert!(matches!(normalize(&pts, bits), Err(Error::DegenerateConfiguration(_))));
    }

    #[test]
    fn configuration_json_round_trip() {
        let cfg = PointConfiguration::from_f64(3, 200, &[(0.2, 0.1), (0.5, -0.3), (0.8, 0.05)]).unwrap();
        let s = serde_json::to_string(&cfg).unwrap();
        let back: PointConfiguration = serde_json::from_str(&s).unwrap();
        assert!(cfg.distance(&back) < 1e-55);
        assert!(s.starts_with(r#"{"n":3,"free":[["#));
    }

    #[test]
    fn rejects_collisions_and_wrong_lengths() {
        assert!(PointConfiguration::from_f64(2, 100, &[(1.0, 0.0)]).is_err());
        assert!(PointConfiguration::from_f64(3, 100, &[(0.2, 0.0), (0.2, 0.0), (0.5, 0.0)]).is_err());
        assert!(PointConfiguration::from_f64(3, 100, &[(0.2, 0.0)]).is_err());
    }
}
