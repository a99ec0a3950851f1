//! Multiple Dedekind zeta values
//!
//! ```text
//! ζ_{K;C₁,…,C_m}(s) = Σ_{α_j ∈ C_j} ∏_{j=1}^m ∏_{i=1}^n σ_i(α₁ + … + α_j)^{−s_ij}
//! ```
//!
//! with the shuffle bookkeeping that produces integer exponent matrices, the
//! `K = ℚ` multiple zeta values and the single-embedding Eisenstein sums.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::Cone;
use crate::error::{MdzError, Result};
use crate::field::{FieldElement, QuadField};
use crate::nested::{eval_at_zero, Column};
use crate::series::{EvalParams, SumResult};

/// `n × m` complex exponents, row `i` for embedding `σ_i`, column `j` for level `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ExponentMatrix {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(MdzError::InvalidSpec("exponent matrix must be a nonempty rectangle".into()));
        }
        Ok(ExponentMatrix { rows: rows.len(), cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect())
    }

    /// The same row repeated `n` times.
    pub fn uniform(n: usize, row: &[Complex64]) -> Result<Self> {
        Self::from_rows(vec![row.to_vec(); n])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Rows in reverse order (swaps `σ₁ ↔ σ₂` for quadratic fields).
    pub fn reversed_rows(&self) -> Self {
        let rows = (0..self.rows).rev().map(|i| self.row(i).to_vec()).collect();
        Self::from_rows(rows).expect("shape preserved")
    }
}

/// Writes `re` or `re+imj`, rows separated by `;`, entries by `,`.
impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for (j, z) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                if z.im == 0.0 {
                    write!(f, "{}", z.re)?;
                } else {
                    write!(f, "{}{:+}j", z.re, z.im)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    #[default]
    Sum,
    Quadrature,
}

/// One evaluation: field, cones `C₁..C_m` and the `n × m` exponent matrix.
#[derive(Debug, Clone)]
pub struct MdzvSpec {
    pub field: QuadField,
    pub cones: Vec<Cone>,
    pub exponents: ExponentMatrix,
    pub params: EvalParams,
    pub mode: EvalMode,
}

impl MdzvSpec {
    pub fn new(field: QuadField, cones: Vec<Cone>, exponents: ExponentMatrix) -> Result<Self> {
        if exponents.rows() != field.degree() {
            return Err(MdzError::InvalidSpec(format!(
                "{} exponent rows for a degree-{} field",
                exponents.rows(),
                field.degree()
            )));
        }
        if exponents.cols() != cones.len() {
            return Err(MdzError::InvalidSpec(format!(
                "{} exponent columns for {} cones",
                exponents.cols(),
                cones.len()
            )));
        }
        if cones.iter().any(|c| c.field() != field) {
            return Err(MdzError::InvalidSpec("cones over a different field".into()));
        }
        Ok(MdzvSpec { field, cones, exponents, params: EvalParams::default(), mode: EvalMode::Sum })
    }

    pub fn with_params(mut self, params: EvalParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_mode(mut self, mode: EvalMode) -> Self {
        self.mode = mode;
        self
    }

    pub(crate) fn columns(&self) -> Vec<Column<'_>> {
        self.cones
            .iter()
            .enumerate()
            .map(|(j, cone)| Column { cone, exps: self.exponents.column(j) })
            .collect()
    }
}

/// Evaluates the spec as a nested sum, or by quadrature in [`EvalMode::Quadrature`].
pub fn mdzv_eval(spec: &MdzvSpec) -> Result<SumResult> {
    match spec.mode {
        EvalMode::Sum => eval_at_zero(spec.field, &spec.columns(), &spec.params),
        EvalMode::Quadrature => {
            let q = crate::oracle::quadrature_mdzf(spec)?;
            Ok(SumResult::new(q.value, q.error_estimate, q.evaluations, crate::series::TailKind::Quadrature, &spec.params))
        }
    }
}

/// `ζ(s₁,…,s_d) = Σ_{0<n₁<…<n_d} ∏ n_j^{−s_j}`.
pub fn mzv_eval(s: &[Complex64], params: &EvalParams) -> Result<SumResult> {
    let q = QuadField::rationals();
    let ray = Cone::new(q, vec![FieldElement::ONE])?;
    let spec = MdzvSpec::new(q, vec![ray; s.len()], ExponentMatrix::from_rows(vec![s.to_vec()])?)?.with_params(*params);
    mdzv_eval(&spec)
}

fn single_embedding_row(field: QuadField, embedding: usize, row: &[Complex64]) -> Result<ExponentMatrix> {
    let n = field.degree();
    if embedding == 0 || embedding > n {
        return Err(MdzError::EmbeddingIndex { index: embedding, degree: n });
    }
    let zero = vec![Complex64::new(0.0, 0.0); row.len()];
    ExponentMatrix::from_rows((1..=n).map(|i| if i == embedding { row.to_vec() } else { zero.clone() }).collect())
}

/// `Σ_{α∈C} σ_i(α)^{−k}` for `k ≥ 3`.
pub fn eisenstein_partial(field: QuadField, cone: &Cone, k: u32, embedding: usize, params: &EvalParams) -> Result<SumResult> {
    if k < 3 {
        return Err(MdzError::Divergent(format!("single-embedding sums need k ≥ 3, got {k}")));
    }
    let exps = single_embedding_row(field, embedding, &[Complex64::new(k as f64, 0.0)])?;
    mdzv_eval(&MdzvSpec::new(field, vec![cone.clone()], exps)?.with_params(*params))
}

/// `Σ_{α,β∈C} σ_i(α)^{−k} σ_i(α+β)^{−l}` for `k, l ≥ 3`.
pub fn multiple_eisenstein(
    field: QuadField,
    cone: &Cone,
    k: u32,
    l: u32,
    embedding: usize,
    params: &EvalParams,
) -> Result<SumResult> {
    if k < 3 || l < 3 {
        return Err(MdzError::Divergent(format!("single-embedding sums need k, l ≥ 3, got ({k}, {l})")));
    }
    let row = [Complex64::new(k as f64, 0.0), Complex64::new(l as f64, 0.0)];
    let exps = single_embedding_row(field, embedding, &row)?;
    mdzv_eval(&MdzvSpec::new(field, vec![cone.clone(), cone.clone()], exps)?.with_params(*params))
}

/// `Σ_{α,β∈C} N(α)^{−k} N(α+β)^{−l}`.
pub fn eisenstein_kronecker(field: QuadField, cone: &Cone, k: u32, l: u32, params: &EvalParams) -> Result<SumResult> {
    let row = [Complex64::new(k as f64, 0.0), Complex64::new(l as f64, 0.0)];
    let exps = ExponentMatrix::uniform(field.degree(), &row)?;
    mdzv_eval(&MdzvSpec::new(field, vec![cone.clone(), cone.clone()], exps)?.with_params(*params))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShuffleVariant {
    All,
    /// Only shuffles with `τ(1) = 1`.
    Sh1,
}

/// Order-preserving interleavings of `{1..p}` with `{p+1..p+q}`. Each entry
/// is `τ` as a list: `τ[k]` is the 1-based position of element `k + 1`.
pub fn enumerate_shuffles(p: usize, q: usize, variant: ShuffleVariant) -> Vec<Vec<usize>> {
    fn rec(p: usize, len: usize, start: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == p {
            let mut tau = chosen.clone();
            let mut next = 1;
            for pos in 1..=len {
                if !chosen.contains(&pos) {
                    tau.push(pos);
                    next += 1;
                }
            }
            debug_assert_eq!(next, len - p + 1);
            out.push(tau);
            return;
        }
        for pos in start..=len - (p - chosen.len()) + 1 {
            chosen.push(pos);
            rec(p, len, pos + 1, chosen, out);
            chosen.pop();
        }
    }
    let mut out = Vec::new();
    if p == 0 {
        return out;
    }
    rec(p, p + q, 1, &mut Vec::with_capacity(p), &mut out);
    if variant == ShuffleVariant::Sh1 {
        out.retain(|t| t[0] == 1);
    }
    out
}

/// `m` n-forms shuffled with `m_i` one-forms in direction `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleSpec {
    pub m: usize,
    pub copies: Vec<usize>,
    pub taus: Vec<Vec<usize>>,
}

impl ShuffleSpec {
    fn check(&self) -> Result<()> {
        if self.m == 0 || self.copies.is_empty() || self.copies.len() != self.taus.len() {
            return Err(MdzError::InvalidShuffle("need m ≥ 1 and one permutation per direction".into()));
        }
        for (i, (&mi, tau)) in self.copies.iter().zip(&self.taus).enumerate() {
            let len = self.m + mi;
            let mut seen = vec![false; len + 1];
            if tau.len() != len || tau.iter().any(|&t| t == 0 || t > len || std::mem::replace(&mut seen[t], true)) {
                return Err(MdzError::InvalidShuffle(format!("τ_{} is not a permutation of 1..{len}", i + 1)));
            }
            let ordered = |r: &[usize]| r.windows(2).all(|w| w[0] < w[1]);
            if !ordered(&tau[..self.m]) || !ordered(&tau[self.m..]) {
                return Err(MdzError::InvalidShuffle(format!("τ_{} is not a shuffle", i + 1)));
            }
            if tau[0] != 1 {
                return Err(MdzError::InvalidShuffle(format!("τ_{} does not fix 1", i + 1)));
            }
        }
        Ok(())
    }
}

/// `k_ij`: the length of the `j`-th block cut out by the n-form positions under `τ_i`.
pub fn shuffle_to_exponents(s: &ShuffleSpec) -> Result<ExponentMatrix> {
    s.check()?;
    let rows = s
        .copies
        .iter()
        .zip(&s.taus)
        .map(|(&mi, tau)| {
            let len = s.m + mi;
            (0..s.m)
                .map(|j| {
                    let end = if j + 1 < s.m { tau[j + 1] } else { len + 1 };
                    Complex64::new((end - tau[j]) as f64, 0.0)
                })
                .collect()
        })
        .collect();
    ExponentMatrix::from_rows(rows)
}
