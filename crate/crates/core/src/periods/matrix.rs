use serde::Serialize;

use crate::curve::{eigenform_basis, Eigenform, PointConfiguration};
use crate::error::{Error, Result};
use crate::mp::{CMatrix, Complex, Precision};

use super::{chain_integrals, deck_factor, BranchReference, ComplexJson};

/// What a period-matrix row pairs against the cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowKind {
    /// A holomorphic form of the eigenspace.
    Holomorphic { a: u32, b: u32 },
    /// The complex conjugate of a holomorphic form from the opposite eigenspace.
    Antiholomorphic { a: u32, b: u32 },
}

/// Periods of the forms of one eigenspace over the cycle basis.
#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    pub n: u32,
    pub eigenspace: u32,
    pub rows: Vec<RowKind>,
    pub entries: CMatrix,
    pub errors: Vec<Vec<f64>>,
    pub precision: Precision,
}

/// Pairs `H^{1,0}[i]` (and optionally the conjugates of `H^{1,0}[n-i]`, which
/// span `H^{0,1}[i]`) against `γ_1, ..., γ_{2n-2}`.
///
/// Conjugate rows use `∫_γ η̄ = conj(∫_γ η)`; with both blocks the matrix is
/// square of size `2n - 2`.
pub fn period_matrix(cfg: &PointConfiguration, i: u32, with_complement: bool, precision: Precision) -> Result<PeriodMatrix> {
    Ok(period_matrix_with_reference(cfg, i, with_complement, None, precision)?.0)
}

/// [`period_matrix`] with the branch choice continued from `reference`; also
/// returns the reference used.
pub fn period_matrix_with_reference(
    cfg: &PointConfiguration,
    i: u32,
    with_complement: bool,
    reference: Option<&BranchReference>,
    precision: Precision,
) -> Result<(PeriodMatrix, BranchReference)> {
    let n = cfg.n();
    if i == 0 || i >= n {
        return Err(Error::domain(format!("eigenspace index {i} outside 1..={}", n - 1)));
    }
    let holo = eigenform_basis(n, i)?;
    let anti = if with_complement { eigenform_basis(n, n - i)? } else { Vec::new() };
    let mut forms: Vec<Eigenform> = holo.clone();
    forms.extend(anti.iter().copied());
    let bits = precision.bits();
    let (raw, used) = chain_integrals(cfg, &forms, reference, precision)?;

    let cols = raw.len();
    let mut rows = Vec::with_capacity(forms.len());
    let mut entries = CMatrix::zeros(bits, forms.len(), cols);
    let mut errors = vec![vec![0.0; cols]; forms.len()];
    for (r, f) in forms.iter().enumerate() {
        let conj = r >= holo.len();
        rows.push(if conj { RowKind::Antiholomorphic { a: f.a, b: f.b } } else { RowKind::Holomorphic { a: f.a, b: f.b } });
        let factor = &Complex::one(bits) - &deck_factor(n, f.b, 1, bits);
        for (c, path_values) in raw.iter().enumerate() {
            let v = &factor * &path_values[r].value;
            entries[(r, c)] = if conj { v.conj() } else { v };
            errors[r][c] = factor.abs_f64() * path_values[r].error;
        }
    }
    Ok((PeriodMatrix { n, eigenspace: i, rows, entries, errors, precision }, used))
}

#[derive(Serialize)]
struct EntryJson {
    value: ComplexJson,
    error: f64,
}

#[derive(Serialize)]
struct PeriodMatrixJson<'a> {
    schema: &'static str,
    n: u32,
    eigenspace: u32,
    precision: u32,
    rows: &'a [RowKind],
    entries: Vec<Vec<EntryJson>>,
}

impl PeriodMatrix {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().flatten().copied().fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let digits = self.precision.get() as usize;
        let entries = (0..self.entries.rows())
            .map(|r| {
                (0..self.entries.cols())
                    .map(|c| EntryJson { value: ComplexJson::new(&self.entries[(r, c)], digits), error: self.errors[r][c] })
                    .collect()
            })
            .collect();
        serde_json::to_value(PeriodMatrixJson {
            schema: "period-matrix/1",
            n: self.n,
            eigenspace: self.eigenspace,
            precision: self.precision.get(),
            rows: &self.rows,
            entries,
        })
        .expect("period matrix serializes")
    }

    /// One line per (form, cycle) pair: `row,kind,a,b,cycle,re,im,error`.
    pub fn to_csv(&self) -> String {
        let digits = self.precision.get() as usize;
        let mut out = String::from("row,kind,a,b,cycle,re,im,error\n");
        for (r, kind) in self.rows.iter().enumerate() {
            let (name, a, b) = match *kind {
                RowKind::Holomorphic { a, b } => ("holomorphic", a, b),
                RowKind::Antiholomorphic { a, b } => ("antiholomorphic", a, b),
            };
            for c in 0..self.entries.cols() {
                let (re, im) = self.entries[(r, c)].to_strings(digits);
                out.push_str(&format!("{r},{name},{a},{b},{},{re},{im},{:e}\n", c + 1, self.errors[r][c]));
            }
        }
        out
    }
}
