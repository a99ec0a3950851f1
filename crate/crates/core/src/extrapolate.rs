//! Limit of power-law partial sums `S(K) = S∞ + Σ c_{p,l} K^{−p} log^l K`.
//!
//! The exponent set is supplied as a list of families `p_r + ℕ`; exponents shared
//! by several families get log companions. The fit is a least-squares solve on a
//! geometric ladder of sample heights, all multiples of the quasi-period.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{MdzError, Result};

const RATIO: f64 = 0.85;
const TERMS: usize = 6;
const SAMPLES: usize = TERMS + 4;

/// `(p, l)` pairs for the basis `K^{−p} log^l K`, dominant first.
pub(crate) fn basis(families: &[Complex64], terms: usize) -> Vec<(Complex64, u32)> {
    let mut exps: Vec<(Complex64, u32)> = Vec::new();
    for &p in families {
        for n in 0..=terms {
            let e = p + n as f64;
            match exps.iter_mut().find(|(q, _)| (q - e).norm() < 1e-9) {
                Some((_, mult)) => *mult += 1,
                None => exps.push((e, 1)),
            }
        }
    }
    exps.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    exps.into_iter()
        .flat_map(|(p, mult)| (0..mult).rev().map(move |l| (p, l)))
        .take(terms)
        .collect()
}

fn ladder(top: u64, period: u64) -> Result<Vec<u64>> {
    let mut ks = Vec::with_capacity(SAMPLES);
    for j in 0..SAMPLES {
        let k = (top as f64 * RATIO.powi(j as i32) / period as f64).floor() as u64 * period;
        let k = match ks.last() {
            Some(&prev) if k >= prev => prev.saturating_sub(period),
            _ => k,
        };
        if k < 8.max(2 * period) {
            return Err(MdzError::InvalidSpec(format!(
                "bound {top} too small to extrapolate with period {period}"
            )));
        }
        ks.push(k);
    }
    Ok(ks)
}

/// Fitted limit from samples at heights `≤ top`, with the 1-norm of the
/// linear weights applied to the samples.
fn fit(partial: &[Complex64], top: u64, period: u64, basis: &[(Complex64, u32)]) -> Result<(Complex64, f64)> {
    let ks = ladder(top, period)?;
    let cols = basis.len() + 1;
    let mut m = DMatrix::<Complex64>::zeros(ks.len(), cols);
    for (r, &k) in ks.iter().enumerate() {
        let kf = k as f64;
        let lk = kf.ln();
        m[(r, 0)] = Complex64::new(1.0, 0.0);
        for (c, &(p, l)) in basis.iter().enumerate() {
            m[(r, c + 1)] = (-p * lk).exp() * lk.powi(l as i32);
        }
    }
    let scale: Vec<f64> = (0..cols).map(|c| m.column(c).iter().map(|z| z.norm()).fold(0.0, f64::max)).collect();
    for (c, &s) in scale.iter().enumerate() {
        m.column_mut(c).iter_mut().for_each(|z| *z /= s);
    }
    let pinv = m
        .pseudo_inverse(1e-14)
        .map_err(|e| MdzError::Unsupported(format!("extrapolation solve failed: {e}")))?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut l1 = 0.0;
    for (r, &k) in ks.iter().enumerate() {
        let w = pinv[(0, r)] / scale[0];
        value += w * partial[k as usize];
        l1 += w.norm();
    }
    Ok((value, l1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Extrapolation {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Extrapolates `partial[K]` (`K = 0..=A`) to `K → ∞`. The bound is twice the
/// change against the fit at `A/2`, plus a rounding allowance for the sample
/// errors amplified by the fit weights.
pub(crate) fn extrapolate(partial: &[Complex64], abs_total: f64, period: u64, families: &[Complex64]) -> Result<Extrapolation> {
    let top = (partial.len() - 1) as u64;
    let b = basis(families, TERMS);
    let (full, w_full) = fit(partial, top, period, &b)?;
    let (half, w_half) = fit(partial, top / 2, period, &b)?;
    let rounding = (w_full + w_half) * abs_total * f64::EPSILON * (16.0 + (top as f64).sqrt());
    Ok(Extrapolation { value: full, tail_bound: 2.0 * (full - half).norm() + rounding })
}
