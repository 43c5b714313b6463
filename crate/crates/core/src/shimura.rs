//! Exact dimension counts for the Shimura varieties attached to the family
//! and the resulting dimension-gap report.
//!
//! Everything here is integer arithmetic with overflow checks. The degree
//! `n = 2` is special throughout: the unit 1 is its own conjugate, so sums
//! that pair `r` with `n - r` count it once, and the CM type has a single
//! entry with no pairing constraint.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::curve::{hodge_profile, prym_profile};
use crate::cyclotomic::{gcd, totient};
use crate::error::{Error, Result};

fn check(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("degree must be at least 2, got {n}")));
    }
    Ok(())
}

fn overflow() -> Error {
    Error::domain("dimension count overflows 64-bit arithmetic")
}

fn units(n: u32) -> impl Iterator<Item = i64> {
    (1..n.max(2)).filter(move |&r| gcd(r as u64, n as u64) == 1).map(i64::from)
}

/// Representatives `i` of the conjugate pairs `{i, n - i}` of units, smallest first.
fn pair_representatives(n: u32) -> Vec<i64> {
    if n == 2 {
        return vec![1];
    }
    units(n).filter(|&i| 2 * i < n as i64).collect()
}

/// `(1/2) Σ_{r unit} (2r - 1)(2n - 1 - 2r)`.
pub fn dim_sh(n: u32) -> Result<i64> {
    check(n)?;
    if n == 2 {
        return Ok(1);
    }
    let n = n as i64;
    let mut total: i64 = 0;
    for r in units(n as u32) {
        let term = (2 * r - 1).checked_mul(2 * n - 1 - 2 * r).ok_or_else(overflow)?;
        total = total.checked_add(term).ok_or_else(overflow)?;
    }
    assert!(total % 2 == 0, "conjugate terms pair up, so the sum is even");
    Ok(total / 2)
}

/// A CM type: `values[i] = n_A(i)` for every unit `i` in `1..n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CmType {
    pub n: u32,
    pub values: BTreeMap<i64, u8>,
}

impl CmType {
    /// Builds a type from its values on the pair representatives (`i < n/2`).
    pub fn from_representatives(n: u32, bits: &[u8]) -> Result<Self> {
        check(n)?;
        let reps = pair_representatives(n);
        if bits.len() != reps.len() {
            return Err(Error::domain(format!("n = {n} has {} pair representatives, got {} values", reps.len(), bits.len())));
        }
        let mut values = BTreeMap::new();
        for (&i, &b) in reps.iter().zip(bits) {
            values.insert(i, b);
            if n > 2 {
                values.insert(n as i64 - i, 1 - b.min(1));
            }
        }
        let t = CmType { n, values };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let expected: Vec<i64> = units(n).collect();
        if self.values.keys().copied().collect::<Vec<_>>() != expected {
            return Err(Error::domain("CM type must assign a value to every unit residue"));
        }
        if self.values.values().any(|&v| v > 1) {
            return Err(Error::domain("CM type values are 0 or 1"));
        }
        if self.values[&1] != 1 {
            return Err(Error::domain("CM type must have n_A(1) = 1"));
        }
        if n > 2 {
            for (&i, &v) in &self.values {
                if v + self.values[&(n as i64 - i)] != 1 {
                    return Err(Error::domain(format!("n_A({i}) + n_A({}) must be 1", n as i64 - i)));
                }
            }
        }
        Ok(())
    }

    /// Values on the pair representatives, in increasing order.
    pub fn representative_values(&self) -> Vec<u8> {
        pair_representatives(self.n).iter().map(|i| self.values[i]).collect()
    }
}

/// Largest number of free signs [`enumerate_cm_types`] will expand.
pub const MAX_FREE_SIGNS: usize = 20;

/// All CM types, in lexicographic order of their representative values.
pub fn enumerate_cm_types(n: u32) -> Result<Vec<CmType>> {
    check(n)?;
    let free = pair_representatives(n).len() - 1;
    if free > MAX_FREE_SIGNS {
        return Err(Error::domain(format!("n = {n} has 2^{free} CM types; enumeration is capped at 2^{MAX_FREE_SIGNS}")));
    }
    (0..1u64 << free)
        .map(|mask| {
            let mut bits = vec![1u8];
            bits.extend((0..free).rev().map(|k| ((mask >> k) & 1) as u8));
            CmType::from_representatives(n, &bits)
        })
        .collect()
}

/// `(dim Sh_A, codim Sh_A)` for a CM type.
pub fn dims_sh_a(n: u32, t: &CmType) -> Result<(i64, i64)> {
    check(n)?;
    if t.n != n {
        return Err(Error::domain(format!("CM type is for n = {}, not {n}", t.n)));
    }
    t.validate()?;
    let nn = n as i64;
    let mut dim: i64 = 0;
    let mut codim: i64 = 0;
    for i in pair_representatives(n) {
        let a = t.values[&i] as i64;
        let d = (2 * i - 1 - a).checked_mul(2 * (nn - i) - 2 + a).ok_or_else(overflow)?;
        let c = a * (2 * (nn - i) - 1) + (1 - a) * (2 * i - 1);
        dim = dim.checked_add(d).ok_or_else(overflow)?;
        codim = codim.checked_add(c).ok_or_else(overflow)?;
    }
    assert_eq!(dim + codim, dim_sh(n)?, "dimension and codimension must add up for n = {n}");
    Ok((dim, codim))
}

/// Dimension-gap summary for one degree.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub n: u32,
    pub dim_moduli: i64,
    pub dim_sh: i64,
    pub cm_types: Vec<CmTypeRow>,
    pub min_codim: i64,
    /// Every special subvariety has codimension above the moduli dimension.
    pub unlikely: bool,
    /// The minimum codimension equals the moduli dimension.
    pub equality_case: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CmTypeRow {
    pub values: Vec<u8>,
    pub dim: i64,
    pub codim: i64,
}

pub fn gap_report(n: u32) -> Result<GapReport> {
    check(n)?;
    let dim_moduli = 2 * n as i64 - 3;
    let mut rows = Vec::new();
    for t in enumerate_cm_types(n)? {
        let (dim, codim) = dims_sh_a(n, &t)?;
        rows.push(CmTypeRow { values: t.representative_values(), dim, codim });
    }
    let min_codim = rows.iter().map(|r| r.codim).min().expect("at least one CM type");
    let unlikely = min_codim > dim_moduli;
    assert_eq!(unlikely, totient(n) > 2, "gap positivity must match phi(n) > 2 for n = {n}");
    Ok(GapReport {
        n,
        dim_moduli,
        dim_sh: dim_sh(n)?,
        cm_types: rows,
        min_codim,
        unlikely,
        equality_case: min_codim == dim_moduli,
    })
}

impl GapReport {
    /// One-line summary, e.g. `n=5 dim_M=7 dim_Sh=22 min_codim=10 unlikely=yes`.
    pub fn summary_line(&self) -> String {
        format!(
            "n={} dim_M={} dim_Sh={} min_codim={} unlikely={}",
            self.n,
            self.dim_moduli,
            self.dim_sh,
            self.min_codim,
            if self.unlikely { "yes" } else { "no" }
        )
    }

    pub const TABLE_HEADER: &'static str = "n\tdim M\tdim Sh\t#CM types\tmin codim\tunlikely?\tequality?";

    pub fn table_row(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.n,
            self.dim_moduli,
            self.dim_sh,
            self.cm_types.len(),
            self.min_codim,
            yn(self.unlikely),
            yn(self.equality_case)
        )
    }
}

/// Both sides of `2n - 3 = (2n - 3)(2n) - ((2n - 2)^2 - 1)`, compared exactly.
pub fn consistency_identity(n: u32) -> Result<bool> {
    check(n)?;
    let n = n as i128;
    let lhs = 2 * n - 3;
    let rhs = (2 * n - 3) * (2 * n) - ((2 * n - 2) * (2 * n - 2) - 1);
    Ok(lhs == rhs)
}

/// `{2n - 3 : 2 <= n <= n_max, φ(n) > 2}` in increasing order.
pub fn counterexample_dimensions(n_max: u32) -> Result<Vec<i64>> {
    check(n_max)?;
    Ok((2..=n_max).filter(|&n| totient(n) > 2).map(|n| 2 * n as i64 - 3).collect())
}

/// `dim Sh` recomputed from the Hodge table as `Σ h10_r · h01_r` over pair
/// representatives.
pub fn dim_sh_from_hodge(n: u32) -> Result<i64> {
    let profile = hodge_profile(n)?;
    Ok(pair_representatives(n)
        .into_iter()
        .map(|r| {
            let (h10, h01) = profile.row(r as u32);
            h10 as i64 * h01 as i64
        })
        .sum())
}

/// `Σ_{r unit} (h10_r + h01_r)` against twice the Prym dimension.
pub fn prym_cross_check(n: u32) -> Result<bool> {
    let profile = hodge_profile(n)?;
    let total: i64 = units(n)
        .map(|r| {
            let (h10, h01) = profile.row(r as u32);
            (h10 + h01) as i64
        })
        .sum();
    Ok(total == 2 * prym_profile(n)?.prym_dim as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_sh_values() {
        let got: Vec<i64> = [3, 4, 5, 6, 7].iter().map(|&n| dim_sh(n).unwrap()).collect();
        assert_eq!(got, vec![3, 5, 22, 9, 73]);
        assert_eq!(dim_sh(2).unwrap(), 1);
        assert!(dim_sh(1).is_err());
    }

    #[test]
    fn cm_type_counts_and_order() {
        let t5 = enumerate_cm_types(5).unwrap();
        assert_eq!(t5.iter().map(CmType::representative_values).collect::<Vec<_>>(), vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(enumerate_cm_types(3).unwrap().len(), 1);
        assert_eq!(enumerate_cm_types(7).unwrap().len(), 4);
        assert_eq!(enumerate_cm_types(2).unwrap().len(), 1);
        assert!(enumerate_cm_types(89).is_err());
    }

    #[test]
    fn sub_shimura_dimensions() {
        let t5 = enumerate_cm_types(5).unwrap();
        assert_eq!(dims_sh_a(5, &t5[1]).unwrap(), (10, 12));
        assert_eq!(dims_sh_a(5, &t5[0]).unwrap().1, 10);
        let t3 = &enumerate_cm_types(3).unwrap()[0];
        assert_eq!(dims_sh_a(3, t3).unwrap().1, 3);
        assert!(dims_sh_a(7, t3).is_err());
    }

    #[test]
    fn invalid_types_are_rejected() {
        let mut t = enumerate_cm_types(5).unwrap()[0].clone();
        t.values.insert(1, 0);
        assert!(t.validate().is_err());
        let mut t = enumerate_cm_types(5).unwrap()[0].clone();
        t.values.insert(3, 0);
        assert!(t.validate().is_err());
    }

    #[test]
    fn gap_reports() {
        let r5 = gap_report(5).unwrap();
        assert!(r5.unlikely && r5.min_codim == 10);
        assert_eq!(r5.summary_line(), "n=5 dim_M=7 dim_Sh=22 min_codim=10 unlikely=yes");
        let r4 = gap_report(4).unwrap();
        assert!(!r4.unlikely && r4.equality_case);
        assert!(gap_report(2).unwrap().equality_case);
    }

    #[test]
    fn identities_and_exceptional_dimensions() {
        assert!((2..=100).all(|n| consistency_identity(n).unwrap()));
        assert_eq!(counterexample_dimensions(7).unwrap(), vec![7, 11]);
        assert!(counterexample_dimensions(2).unwrap().is_empty());
        for n in 2..=30 {
            assert_eq!(dim_sh(n).unwrap(), dim_sh_from_hodge(n).unwrap(), "n = {n}");
            assert!(prym_cross_check(n).unwrap());
        }
    }
}
