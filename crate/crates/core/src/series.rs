//! The cone kernel `f₀(C, t) = Σ_{α∈C} exp(−Σ σ_i(α) t_i)` and the iterated
//! family `f_m`, `f_{k₁,…,k_m}`, Dedekind polylogarithms and `ζ_K(m)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::{fundamental_domain, Cone, SimpleMode};
use crate::error::{MdzError, Result};
use crate::field::{FieldElement, QuadField};
use crate::lattice::{choose_height, LatticeSum, Level, Weight};
use crate::nested::{eval_at_zero, Column};
use crate::sum::CompensatedSum;

/// Default height bound for sums at `t = 0`.
pub const DEFAULT_BOUND: u64 = 1000;
/// Default target for `tail_bound`.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Truncation bound and target tolerance for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalParams {
    /// Coefficient box for `t ≠ 0`, height bound for `t = 0` and nested sums.
    pub bound: u64,
    pub tol: f64,
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams { bound: DEFAULT_BOUND, tol: DEFAULT_TOL }
    }
}

impl EvalParams {
    pub fn with_bound(bound: u64) -> Self {
        EvalParams { bound, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailKind {
    /// Proven upper bound on the truncation error.
    Rigorous,
    /// Heuristic: change of the extrapolated limit between `A/2` and `A`.
    Extrapolated,
    /// Difference between step `h` and step `2h` of the integral.
    Quadrature,
    /// No bound: a real embedding of a partial sum changes sign, and the
    /// height-truncated sums jump each time the height passes a unit.
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumResult {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms_used: u64,
    pub converged: bool,
    pub tail_kind: TailKind,
}

impl SumResult {
    pub(crate) fn new(value: Complex64, tail_bound: f64, terms_used: u64, tail_kind: TailKind, params: &EvalParams) -> Self {
        SumResult { value, tail_bound, terms_used, converged: tail_bound <= params.tol, tail_kind }
    }

    /// Sum of results; bounds add.
    pub(crate) fn combine(parts: &[SumResult], params: &EvalParams) -> SumResult {
        let value: CompensatedSum = parts.iter().map(|r| r.value).collect();
        let tail: f64 = parts.iter().map(|r| r.tail_bound).sum();
        let kind = if parts.iter().any(|r| r.tail_kind == TailKind::Unbounded) {
            TailKind::Unbounded
        } else if parts.iter().all(|r| r.tail_kind == TailKind::Rigorous) {
            TailKind::Rigorous
        } else if parts.iter().all(|r| r.tail_kind == TailKind::Quadrature) {
            TailKind::Quadrature
        } else {
            TailKind::Extrapolated
        };
        SumResult::new(value.value(), tail, parts.iter().map(|r| r.terms_used).sum(), kind, params)
    }
}

/// A point `t = (t₁,…,t_n)`, or the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorPoint(pub Vec<Complex64>);

impl SectorPoint {
    pub fn new(t: Vec<Complex64>) -> Self {
        SectorPoint(t)
    }

    pub fn zero(field: QuadField) -> Self {
        SectorPoint(vec![Complex64::new(0.0, 0.0); field.degree()])
    }

    pub fn real(t: &[f64]) -> Self {
        SectorPoint(t.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    /// `t_i ∈ S_i(C)` for all `i`: `Re(σ_i(e_j) t_i) > 0` for every generator.
    pub fn in_sector(&self, cone: &Cone) -> bool {
        (0..cone.rank()).all(|j| cone.embedded_generator(j).iter().zip(&self.0).all(|(s, t)| (s * t).re > 0.0))
    }

    /// `v_j = Σ_i σ_i(e_j) t_i` for each generator.
    pub fn edge_exponents(&self, cone: &Cone) -> Vec<Complex64> {
        (0..cone.rank()).map(|j| cone.embedded_generator(j).iter().zip(&self.0).map(|(s, t)| s * t).sum()).collect()
    }

    fn check(&self, cone: &Cone) -> Result<()> {
        if self.0.len() != cone.field().degree() {
            return Err(MdzError::InvalidSpec(format!(
                "t has {} coordinates, field degree is {}",
                self.0.len(),
                cone.field().degree()
            )));
        }
        if !cone.is_simple(SimpleMode::Operative) {
            return Err(MdzError::NotSimple);
        }
        if !self.in_sector(cone) {
            return Err(MdzError::SectorViolation(format!(
                "Re(σ_i(e_j)·t_i) ≤ 0 for some generator of {:?}",
                cone.generators()
            )));
        }
        Ok(())
    }
}

/// `exp(z) − 1` without cancellation near 0.
pub fn expm1(z: Complex64) -> Complex64 {
    if z.norm() > 0.5 {
        return z.exp() - 1.0;
    }
    let s = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * z.im.cos() - 2.0 * s * s, z.re.exp() * z.im.sin())
}

#[cfg(feature = "parallel")]
fn rows<T: Send>(n: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (1..=n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn rows<T>(n: u64, f: impl Fn(u64) -> T) -> Vec<T> {
    (1..=n).map(f).collect()
}

/// `Σ_{a ∈ [1, A]^m} term(a)` in fixed order.
fn box_sum(cone: &Cone, bound: u64, term: impl Fn(&[u64]) -> Complex64 + Sync + Send) -> Complex64 {
    let parts = rows(bound, |a| {
        let mut acc = CompensatedSum::new();
        match cone.rank() {
            1 => acc.add(term(&[a])),
            _ => (1..=bound).for_each(|b| acc.add(term(&[a, b]))),
        }
        acc.value()
    });
    parts.into_iter().collect::<CompensatedSum>().value()
}

/// Box tail `Σ_j r_j^{A+1}/(1−r_j) ∏_{k≠j} r_k/(1−r_k)` for terms dominated by `∏ r_j^{a_j}`.
fn box_tail(rates: &[f64], bound: u64) -> f64 {
    (0..rates.len())
        .map(|j| {
            let rj = rates[j];
            let head = (rj.ln() * (bound as f64 + 1.0)).exp() / (1.0 - rj);
            let rest: f64 = rates.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &r)| r / (1.0 - r)).product();
            head * rest
        })
        .sum()
}

fn sector_box_sum(cone: &Cone, m: i32, t: &SectorPoint, params: &EvalParams) -> Result<SumResult> {
    t.check(cone)?;
    if params.bound == 0 {
        return Err(MdzError::InvalidSpec("bound must be at least 1".into()));
    }
    let field = cone.field();
    let v = t.edge_exponents(cone);
    let gens = cone.generators().to_vec();
    let value = box_sum(cone, params.bound, |a| {
        let e: Complex64 = a.iter().zip(&v).map(|(&a, v)| v * a as f64).sum();
        let w = if m == 0 {
            1.0
        } else {
            let mut alpha = FieldElement::ZERO;
            for (&a, g) in a.iter().zip(&gens) {
                alpha = FieldElement::new(alpha.x + a as i64 * g.x, alpha.y + a as i64 * g.y);
            }
            (field.norm(alpha).expect("bounded norm") as f64).powi(-m)
        };
        (-e).exp() * w
    });
    let rates: Vec<f64> = v.iter().map(|v| (-v.re).exp()).collect();
    let terms = params.bound.pow(cone.rank() as u32);
    Ok(SumResult::new(value, box_tail(&rates, params.bound), terms, TailKind::Rigorous, params))
}

/// Truncated `f₀(C, t)` over the coefficient box `[1, A]^m`.
pub fn f0_sum(cone: &Cone, t: &SectorPoint, params: &EvalParams) -> Result<SumResult> {
    sector_box_sum(cone, 0, t, params)
}

/// Closed form `∏_j y_j/(1 − y_j)`, `y_j = exp(−v_j)`; valid wherever no `v_j ∈ 2πiℤ`.
pub fn f0_product(cone: &Cone, t: &SectorPoint) -> Result<Complex64> {
    if t.0.len() != cone.field().degree() {
        return Err(MdzError::InvalidSpec("t has the wrong number of coordinates".into()));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for v in t.edge_exponents(cone) {
        if expm1(-v).norm() < 1e-12 {
            return Err(MdzError::Pole(format!("exp(−v) = 1 at v = {v}")));
        }
        acc /= expm1(v);
    }
    Ok(acc)
}

/// `f_m(C, t) = Σ_{α∈C} exp(−Σ σ_i(α) t_i) / N(α)^m`.
pub fn fm(cone: &Cone, m: u32, t: &SectorPoint, params: &EvalParams) -> Result<SumResult> {
    if t.is_zero() {
        let field = cone.field();
        let s = Complex64::new(m as f64, 0.0);
        return eval_at_zero(field, &[Column { cone, exps: vec![s; field.degree()] }], params);
    }
    sector_box_sum(cone, m as i32, t, params)
}

/// `Σ_{k>A} C(k−1, D−1) e^{−κk}`, the count of tuples at final height `k`
/// times the decay of the exponential factor.
fn height_tail(bound: u64, dims: usize, kappa: f64) -> f64 {
    let d = dims as f64;
    let log_term = |k: f64| -> f64 {
        let binom: f64 = (1..dims).map(|i| ((k - d + i as f64) / i as f64).ln()).sum();
        binom - kappa * k
    };
    let mut total = 0.0;
    let mut k = (bound + 1).max(dims as u64) as f64;
    for _ in 0..10_000_000 {
        let ratio = (k / (k - d + 1.0)) * (-kappa).exp();
        let term = log_term(k).exp();
        if ratio < 0.5 || (ratio < 1.0 && term * ratio / (1.0 - ratio) < 1e-3 * total) {
            return total + term / (1.0 - ratio);
        }
        total += term;
        k += 1.0;
    }
    f64::INFINITY
}

/// `Σ_{(α₁,…,α_m) ∈ C₁×…×C_m} exp(−Σ σ_i(α₁+…+α_m) t_i) / ∏_j N(α₁+…+α_j)^{k_j}`.
pub fn f_multi(cones: &[Cone], ks: &[u32], t: &SectorPoint, params: &EvalParams) -> Result<SumResult> {
    if cones.is_empty() || cones.len() != ks.len() {
        return Err(MdzError::InvalidSpec("need one exponent per cone".into()));
    }
    let field = cones[0].field();
    if cones.iter().any(|c| c.field() != field) {
        return Err(MdzError::InvalidSpec("cones over different fields".into()));
    }
    if t.is_zero() {
        let cols: Vec<Column> = cones
            .iter()
            .zip(ks)
            .map(|(cone, &k)| Column { cone, exps: vec![Complex64::new(k as f64, 0.0); field.degree()] })
            .collect();
        return eval_at_zero(field, &cols, params);
    }
    for c in cones {
        t.check(c)?;
    }
    let levels: Vec<Level> = cones
        .iter()
        .zip(ks)
        .map(|(c, &k)| Level::new(c, if k == 0 { Weight::One } else { Weight::NormPow(k as i32) }))
        .collect();
    let height = choose_height(&levels).ok_or_else(|| MdzError::Divergent("cones do not share a half-plane".into()))?;
    let kappa = cones
        .iter()
        .flat_map(|c| {
            let v = t.edge_exponents(c);
            c.generators().iter().zip(v).map(|(&g, v)| v.re / height.of(g) as f64).collect::<Vec<_>>()
        })
        .fold(f64::INFINITY, f64::min);
    let dims: usize = cones.iter().map(|c| c.rank()).sum();
    let sum = LatticeSum { field, levels, decay: Some(t.0.clone()) };
    let shells = sum.shells_with(height, params.bound)?;
    let value: CompensatedSum = shells.shells.iter().copied().collect();
    let tail = height_tail(params.bound, dims, kappa) + shells.abs_total * f64::EPSILON * 4.0;
    Ok(SumResult::new(value.value(), tail, shells.points, TailKind::Rigorous, params))
}

/// `Li^K_m(C, X) = f_m(C, −log X₁, …, −log X_n)` on the principal branch.
pub fn dedekind_polylog(cone: &Cone, m: u32, x: &[Complex64], params: &EvalParams) -> Result<SumResult> {
    if x.len() != cone.field().degree() {
        return Err(MdzError::InvalidSpec("X has the wrong number of coordinates".into()));
    }
    if let Some(bad) = x.iter().find(|z| z.im == 0.0 && z.re <= 0.0) {
        return Err(MdzError::BranchCut(format!("X = {bad} lies on the cut of log")));
    }
    let t = SectorPoint(x.iter().map(|z| -z.ln()).collect());
    fm(cone, m, &t, params)
}

/// `ζ_K(m) = Σ_C ε(C)^m f_m(C, 0)` over a fundamental domain, for class number one.
pub fn dedekind_zeta_via_cones(field: QuadField, m: u32, params: &EvalParams) -> Result<SumResult> {
    if field.class_number()? != 1 {
        return Err(MdzError::Unsupported(format!("{field} has class number > 1")));
    }
    let dec = fundamental_domain(field)?;
    let zero = SectorPoint::zero(field);
    let parts = dec
        .cones
        .iter()
        .zip(&dec.signs)
        .map(|(c, &eps)| {
            let mut r = fm(c, m, &zero, params)?;
            if eps < 0 && m % 2 == 1 {
                r.value = -r.value;
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SumResult::combine(&parts, params))
}
