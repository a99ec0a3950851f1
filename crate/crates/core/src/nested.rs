//! Nested cone sums `Σ ∏_j ∏_i σ_i(α₁+…+α_j)^{−s_ij}` at `t = 0`: convergence
//! precheck, level construction and extrapolated evaluation.

use num_complex::Complex64;

use crate::cone::{in_open_half_plane, wide, Cone, SimpleMode};
use crate::error::{MdzError, Result};
use crate::extrapolate::extrapolate;
use crate::field::QuadField;
use crate::lattice::{LatticeSum, Level, Weight};
use crate::series::{EvalParams, SumResult, TailKind};

/// One nesting level: a cone and its exponents, one per embedding.
#[derive(Debug, Clone)]
pub(crate) struct Column<'a> {
    pub cone: &'a Cone,
    pub exps: Vec<Complex64>,
}

fn is_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re.fract() == 0.0
}

/// Whether the closed convex cone spanned by `zs` meets the ray `(−∞, 0]`.
fn hull_meets_negative_axis(zs: &[Complex64]) -> bool {
    if zs.iter().any(|z| z.im == 0.0 && z.re <= 0.0) {
        return true;
    }
    for (i, a) in zs.iter().enumerate() {
        for b in &zs[i + 1..] {
            if a.im.signum() != b.im.signum() {
                // where the segment [a, b] crosses the real axis
                let x = a.re - a.im * (b.re - a.re) / (b.im - a.im);
                if x <= 0.0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Refuses specs whose nested sum does not converge absolutely or whose powers
/// would straddle the principal branch cut.
pub(crate) fn precheck(field: QuadField, cols: &[Column]) -> Result<()> {
    if cols.is_empty() {
        return Err(MdzError::InvalidSpec("at least one cone is required".into()));
    }
    let n = field.degree();
    for (j, c) in cols.iter().enumerate() {
        if c.cone.field() != field {
            return Err(MdzError::InvalidSpec(format!("cone {} is over a different field", j + 1)));
        }
        if c.exps.len() != n {
            return Err(MdzError::InvalidSpec(format!(
                "column {} has {} exponents, expected {n}",
                j + 1,
                c.exps.len()
            )));
        }
        if c.exps.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(MdzError::InvalidSpec("non-finite exponent".into()));
        }
        if !c.cone.is_simple(SimpleMode::Operative) {
            return Err(MdzError::NotSimple);
        }
    }
    let gens: Vec<(i128, i128)> = cols.iter().flat_map(|c| c.cone.generators().iter().map(|&g| wide(g))).collect();
    if !in_open_half_plane(&gens) {
        return Err(MdzError::Divergent("cones do not lie in a common open half-plane".into()));
    }
    let mut mass = 0.0;
    let mut rank = 0usize;
    for (j, c) in cols.iter().enumerate().rev() {
        mass += c.exps.iter().map(|s| s.re).sum::<f64>();
        rank += c.cone.rank();
        if mass <= rank as f64 {
            return Err(MdzError::Divergent(format!(
                "exponent mass {mass} of columns {}..{} does not exceed their total rank {rank}",
                j + 1,
                cols.len()
            )));
        }
    }
    for i in 0..n {
        let mut zs = Vec::new();
        for c in cols {
            zs.extend(c.cone.generators().iter().map(|&g| field.embed(g, i + 1).expect("index in range")));
            if !is_integer(c.exps[i]) && hull_meets_negative_axis(&zs) {
                return Err(MdzError::BranchCut(format!(
                    "embedding {} of the partial sums reaches the negative real axis",
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn weight_for(field: QuadField, exps: &[Complex64]) -> Weight {
    let first = exps[0];
    if exps.iter().all(|&s| s == Complex64::new(0.0, 0.0)) {
        Weight::One
    } else if exps.len() == field.degree() && is_integer(first) && exps.iter().all(|&s| s == first) && first.re.abs() < 1e6 {
        Weight::NormPow(first.re as i32)
    } else {
        Weight::Powers(exps.to_vec())
    }
}

pub(crate) fn levels(field: QuadField, cols: &[Column]) -> Vec<Level> {
    cols.iter().map(|c| Level::new(c.cone, weight_for(field, &c.exps))).collect()
}

/// Base exponents of the power-law tail families, one per suffix of columns.
pub(crate) fn tail_families(cols: &[Column]) -> Vec<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut out: Vec<Complex64> = cols
        .iter()
        .rev()
        .map(|c| {
            acc += c.exps.iter().sum::<Complex64>() - c.cone.rank() as f64;
            acc
        })
        .collect();
    out.reverse();
    out
}

/// Extrapolated value of the nested sum at `t = 0`.
/// Whether some real embedding of a weighted partial sum `α₁+…+α_j` takes
/// both signs. Such sums pass arbitrarily close to zero at unbounded height.
pub(crate) fn crosses_wall(field: QuadField, cols: &[Column]) -> bool {
    if !field.is_real_quadratic() {
        return false;
    }
    (1..=2).any(|i| {
        let mut signs = [false; 2];
        cols.iter().any(|c| {
            for &g in c.cone.generators() {
                signs[usize::from(field.real_sign(g, i) == Some(1))] = true;
            }
            c.exps[i - 1] != Complex64::new(0.0, 0.0) && signs[0] && signs[1]
        })
    })
}

pub(crate) fn eval_at_zero(field: QuadField, cols: &[Column], params: &EvalParams) -> Result<SumResult> {
    precheck(field, cols)?;
    let unbounded = crosses_wall(field, cols);
    let sum = LatticeSum { field, levels: levels(field, cols), decay: None };
    let shells = sum.shells(params.bound)?;
    let partial = shells.partial_sums();
    let ex = extrapolate(&partial, shells.abs_total, shells.height.period, &tail_families(cols))?;
    if unbounded {
        return Ok(SumResult::new(ex.value, f64::INFINITY, shells.points, TailKind::Unbounded, params));
    }
    Ok(SumResult::new(ex.value, ex.tail_bound, shells.points, TailKind::Extrapolated, params))
}
