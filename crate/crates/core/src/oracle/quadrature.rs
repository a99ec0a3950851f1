//! The Γ-factor integral for multiple Dedekind zeta values,
//!
//! ```text
//! ∏ Γ(s_ij)^{−1} ∫_{(0,∞)^{mn}} ∏_j f₀(C_j; U_j) ∏_{ij} u_ij^{s_ij − 1} du,   U_{ij} = u_{ij} + … + u_{im},
//! ```
//!
//! on a double-exponential grid. Direction `i` is integrated along the ray
//! `e^{iθ_i}(0, ∞)` that bisects the images `σ_i(g)` of all generators, which
//! keeps every exponential in `f₀` decaying.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::gamma;
use crate::error::{MdzError, Result};
use crate::mdzv::MdzvSpec;
use crate::series::expm1;

const MAX_DIM: usize = 4;

/// `u = exp(π/2 · sinh x)` on `x ∈ step·[−lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub step: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn exp_sinh(step: f64, x_min: f64, x_max: f64) -> Self {
        let lo = (x_min / step).floor() as i64;
        let hi = (x_max / step).ceil() as i64;
        let half_pi = std::f64::consts::FRAC_PI_2;
        let (nodes, weights) = (lo..=hi)
            .map(|k| {
                let x = k as f64 * step;
                let u = (half_pi * x.sinh()).exp();
                (u, step * half_pi * x.cosh() * u)
            })
            .unzip();
        QuadratureGrid { step, nodes, weights }
    }

    /// The default grid for `dim` variables.
    pub fn for_dimension(dim: usize) -> Self {
        let step = match dim {
            1 | 2 => 1.0 / 32.0,
            3 => 1.0 / 12.0,
            _ => 1.0 / 10.0,
        };
        Self::exp_sinh(step, -4.5, 3.3)
    }

    /// Every other node, with doubled weights.
    pub fn coarsen(&self) -> Self {
        let nodes = self.nodes.iter().step_by(2).copied().collect();
        let weights = self.weights.iter().step_by(2).map(|w| 2.0 * w).collect();
        QuadratureGrid { step: 2.0 * self.step, nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `|∫₀^∞ e^{−u} du − 1|` on this grid.
    pub fn calibration_error(&self) -> f64 {
        let s: f64 = self.nodes.iter().zip(&self.weights).map(|(u, w)| w * (-u).exp()).sum();
        (s - 1.0).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// `|I_h − I_{2h}|`.
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// Rotation `θ` with `Re(e^{iθ} z) > 0` for every `z`, or `None`.
fn bisector(zs: &[Complex64]) -> Option<f64> {
    let mean: Complex64 = zs.iter().map(|z| z / z.norm()).sum();
    if mean.norm() < 1e-12 {
        return None;
    }
    let reference = mean.arg();
    let rel: Vec<f64> = zs.iter().map(|z| (z * Complex64::from_polar(1.0, -reference)).arg()).collect();
    let lo = rel.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = rel.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo >= std::f64::consts::PI - 1e-9 {
        return None;
    }
    Some(-(reference + 0.5 * (lo + hi)))
}

struct Integrand {
    n: usize,
    m: usize,
    /// `σ_i(g)·e^{iθ_i}` for each generator `g` of each cone.
    gens: Vec<Vec<Vec<Complex64>>>,
    /// `s_ij − 1`, indexed `i·m + j`.
    powers: Vec<f64>,
}

impl Integrand {
    fn eval(&self, r: &[f64]) -> Result<Complex64> {
        let mut weight = 1.0;
        for (k, &p) in self.powers.iter().enumerate() {
            if p != 0.0 {
                weight *= r[k].powf(p);
            }
        }
        let mut total = Complex64::new(weight, 0.0);
        let mut suffix = vec![0.0; self.n];
        for j in (0..self.m).rev() {
            for (i, s) in suffix.iter_mut().enumerate() {
                *s += r[i * self.m + j];
            }
            for g in &self.gens[j] {
                let v: Complex64 = g.iter().zip(&suffix).map(|(z, &u)| z * u).sum();
                if v.re > 1.0 {
                    // e^{−v}/(1 − e^{−v}) stays finite where e^v overflows
                    let y = (-v).exp();
                    total *= y / (1.0 - y);
                    continue;
                }
                let d = expm1(v);
                if d.norm() < 1e-300 {
                    return Err(MdzError::Pole("f₀ pole on the quadrature grid".into()));
                }
                total /= d;
            }
        }
        Ok(total)
    }
}

fn integrate(f: &Integrand, grid: &QuadratureGrid) -> Result<(Complex64, u64)> {
    let dim = f.n * f.m;
    let len = grid.len();
    let slab = |first: usize| -> Result<Complex64> {
        let mut idx = vec![0usize; dim];
        idx[0] = first;
        let mut r = vec![0.0; dim];
        let mut s = Complex64::new(0.0, 0.0);
        let mut c = Complex64::new(0.0, 0.0);
        loop {
            let mut w = 1.0;
            for k in 0..dim {
                r[k] = grid.nodes[idx[k]];
                w *= grid.weights[idx[k]];
            }
            let y = w * f.eval(&r)? - c;
            let t = s + y;
            c = (t - s) - y;
            s = t;
            let mut k = dim;
            loop {
                if k == 1 {
                    return Ok(s);
                }
                k -= 1;
                if idx[k] + 1 < len {
                    idx[k] += 1;
                    break;
                }
                idx[k] = 0;
            }
        }
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<Result<Complex64>> = {
        use rayon::prelude::*;
        (0..len).into_par_iter().map(slab).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Result<Complex64>> = (0..len).map(slab).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for p in parts {
        total += p?;
    }
    Ok((total, (len as u64).pow(dim as u32)))
}

/// The integral representation of `spec`, for `m·n ≤ 4` and real exponents `≥ 1`.
pub fn quadrature_mdzf(spec: &MdzvSpec) -> Result<QuadratureResult> {
    quadrature_mdzf_on(spec, &QuadratureGrid::for_dimension(spec.exponents.rows() * spec.exponents.cols()))
}

pub fn quadrature_mdzf_on(spec: &MdzvSpec, grid: &QuadratureGrid) -> Result<QuadratureResult> {
    let n = spec.field.degree();
    let m = spec.cones.len();
    if n * m > MAX_DIM {
        return Err(MdzError::Unsupported(format!("quadrature in {} > {MAX_DIM} dimensions", n * m)));
    }
    crate::nested::precheck(spec.field, &spec.columns())?;
    let mut powers = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let s = spec.exponents.get(i, j);
            if s.im != 0.0 || s.re < 1.0 {
                return Err(MdzError::Unsupported(format!("quadrature needs real exponents ≥ 1, got {s}")));
            }
            powers.push(s.re - 1.0);
        }
    }
    let mut thetas = Vec::with_capacity(n);
    for i in 1..=n {
        let zs: Vec<Complex64> = spec
            .cones
            .iter()
            .flat_map(|c| c.generators().iter().map(move |&g| spec.field.embed(g, i).expect("index in range")))
            .collect();
        thetas.push(bisector(&zs).ok_or_else(|| MdzError::SectorViolation(format!("no decay direction for σ_{i}")))?);
    }
    let gens = spec
        .cones
        .iter()
        .map(|c| {
            c.generators()
                .iter()
                .map(|&g| {
                    (0..n)
                        .map(|i| spec.field.embed(g, i + 1).expect("index in range") * Complex64::from_polar(1.0, thetas[i]))
                        .collect()
                })
                .collect()
        })
        .collect();
    let f = Integrand { n, m, gens, powers };
    let mut prefactor = Complex64::new(1.0, 0.0);
    for (i, &theta) in thetas.iter().enumerate().take(n) {
        for j in 0..m {
            let s = spec.exponents.get(i, j);
            prefactor *= Complex64::from_polar(1.0, theta * s.re) / gamma(s);
        }
    }
    let (fine, evals) = integrate(&f, grid)?;
    let (coarse, _) = integrate(&f, &grid.coarsen())?;
    Ok(QuadratureResult {
        value: prefactor * fine,
        error_estimate: (prefactor * (fine - coarse)).norm(),
        evaluations: evals,
    })
}

/// Volume of `{a < x₁ < … < x_n < b}` by iterated trapezoid integration.
pub fn simplex_volume_check(n: u32, a: f64, b: f64) -> f64 {
    assert!(b > a && n >= 1);
    let steps = 4000;
    let h = (b - a) / steps as f64;
    // v(x) = volume of the simplex ending at x, built up one dimension at a time
    let mut v: Vec<f64> = vec![1.0; steps + 1];
    for _ in 0..n {
        let mut next = vec![0.0; steps + 1];
        for k in 1..=steps {
            next[k] = next[k - 1] + 0.5 * h * (v[k - 1] + v[k]);
        }
        v = next;
    }
    v[steps]
}
