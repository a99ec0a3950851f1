//! Riemann, Hurwitz and quadratic Dirichlet L-values by Euler–Maclaurin.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{MdzError, Result};
use crate::field::{kronecker, QuadField};

const HEAD: usize = 20;

/// `B_{2k} / (2k)!` for `k = 1..=12`.
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
    854_513.0 / 138.0 / 1.124_000_727_777_607_7e21,
    -236_364_091.0 / 2730.0 / 6.204_484_017_332_394e23,
];

fn real_pow(x: f64, s: Complex64) -> Complex64 {
    (-s * x.ln()).exp()
}

/// `(e^w − 1) / w`, accurate near 0.
fn exprel(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        1.0 + w / 2.0 + w * w / 6.0
    } else {
        (w.exp() - 1.0) / w
    }
}

/// `ζ(s, a) − 1/(s − 1)`, entire in `s`.
fn hurwitz_regular(s: Complex64, a: f64) -> Complex64 {
    let n = HEAD.max((2.0 * s.norm()).ceil() as usize);
    let mut head = Complex64::new(0.0, 0.0);
    for k in 0..n {
        head += real_pow(k as f64 + a, s);
    }
    let x = n as f64 + a;
    let lx = x.ln();
    // (x^{1−s} − 1)/(s − 1) = −ln x · exprel((1 − s) ln x)
    let mut total = head - lx * exprel((1.0 - s) * lx) + 0.5 * real_pow(x, s);
    let mut rising = s;
    let mut xpow = real_pow(x, s + 1.0);
    for (k, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        total += b * rising * xpow;
        let m = 2.0 * k as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        xpow /= x * x;
    }
    total
}

/// `ζ(s, a) = Σ_{n≥0} (n + a)^{−s}` for `a > 0`, `Re s > 0`, `s ≠ 1`.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    if !(a.is_finite() && a > 0.0) || s.re <= 0.0 || s == Complex64::new(1.0, 0.0) {
        return Err(MdzError::Unsupported(format!("Hurwitz ζ({s}, {a}) is outside Re s > 0, s ≠ 1, a > 0")));
    }
    Ok(hurwitz_regular(s, a) + 1.0 / (s - 1.0))
}

pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    if s.re <= 1.0 {
        return Err(MdzError::Unsupported(format!("ζ({s}) needs Re s > 1")));
    }
    hurwitz_zeta(s, 1.0)
}

/// Kronecker character `(D/·)` of a fundamental discriminant `D ≠ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticCharacter {
    disc: i64,
}

impl QuadraticCharacter {
    pub fn new(disc: i64) -> Result<Self> {
        let d = if disc % 4 == 0 { disc / 4 } else { disc };
        match QuadField::quadratic(d) {
            Ok(k) if k.discriminant() == disc => Ok(QuadraticCharacter { disc }),
            _ => Err(MdzError::Unsupported(format!("{disc} is not a fundamental discriminant"))),
        }
    }

    pub fn of_field(field: QuadField) -> Result<Self> {
        if field.is_rational() {
            return Err(MdzError::Unsupported("ℚ has no quadratic character".into()));
        }
        Self::new(field.discriminant())
    }

    pub fn modulus(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn value(&self, n: u64) -> i8 {
        kronecker(self.disc, n)
    }
}

/// `L(s, χ) = q^{−s} Σ_{a=1}^{q} χ(a) ζ(s, a/q)` for `Re s > 0`.
pub fn dirichlet_l(s: Complex64, chi: QuadraticCharacter) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(MdzError::Unsupported(format!("L({s}, χ) needs Re s > 0")));
    }
    let q = chi.modulus();
    let mut total = Complex64::new(0.0, 0.0);
    for a in 1..=q {
        match chi.value(a) {
            0 => {}
            v => total += v as f64 * hurwitz_regular(s, a as f64 / q as f64),
        }
    }
    Ok(real_pow(q as f64, s) * total)
}

/// `ζ_K(s) = ζ(s) L(s, χ_D)` for `Re s > 1`.
pub fn dedekind_zeta(field: QuadField, s: Complex64) -> Result<Complex64> {
    let z = riemann_zeta(s)?;
    if field.is_rational() {
        return Ok(z);
    }
    Ok(z * dirichlet_l(s, QuadraticCharacter::of_field(field)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const CATALAN: f64 = 0.915_965_594_177_219_1;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn riemann_values() {
        assert!((riemann_zeta(r(2.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
        assert!((riemann_zeta(r(4.0)).unwrap().re - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((riemann_zeta(r(3.0)).unwrap().re - 1.202_056_903_159_594_3).abs() < 1e-14);
        assert!((riemann_zeta(r(30.0)).unwrap().re - 1.000_000_000_931_327_4).abs() < 1e-14);
        assert!(riemann_zeta(r(1.0)).is_err());
        assert!(riemann_zeta(r(0.5)).is_err());
    }

    #[test]
    fn riemann_matches_direct_sum() {
        // s = 2.5 + i: direct sum to 10⁶ plus the integral tail
        let s = Complex64::new(2.5, 1.0);
        let n = 1_000_000u64;
        let mut direct = Complex64::new(0.0, 0.0);
        for k in (1..=n).rev() {
            direct += real_pow(k as f64, s);
        }
        let x = n as f64 + 0.5;
        direct += real_pow(x, s - 1.0) / (s - 1.0);
        assert!((riemann_zeta(s).unwrap() - direct).norm() < 1e-12);
    }

    #[test]
    fn l_values() {
        let m4 = QuadraticCharacter::new(-4).unwrap();
        let c8 = QuadraticCharacter::new(8).unwrap();
        assert!((dirichlet_l(r(2.0), m4).unwrap().re - CATALAN).abs() < 1e-14);
        assert!((dirichlet_l(r(1.0), m4).unwrap().re - PI / 4.0).abs() < 1e-14);
        assert!((dirichlet_l(r(3.0), m4).unwrap().re - PI.powi(3) / 32.0).abs() < 1e-14);
        assert!((dirichlet_l(r(2.0), c8).unwrap().re - PI * PI / (8.0 * 2f64.sqrt())).abs() < 1e-14);
        // L(1, χ₈) = ln(1+√2)/√2, L(1, χ₋₃) = π/(3√3)
        assert!((dirichlet_l(r(1.0), c8).unwrap().re - (1.0 + 2f64.sqrt()).ln() / 2f64.sqrt()).abs() < 1e-14);
        let m3 = QuadraticCharacter::new(-3).unwrap();
        assert!((dirichlet_l(r(1.0), m3).unwrap().re - PI / (3.0 * 3f64.sqrt())).abs() < 1e-14);
        assert_eq!((1..=8).map(|n| c8.value(n)).collect::<Vec<_>>(), vec![1, 0, -1, 0, -1, 0, 1, 0]);
    }

    #[test]
    fn characters_need_fundamental_discriminants() {
        for d in [-4, -3, -7, -8, 5, 8, 12, 13, -20] {
            assert!(QuadraticCharacter::new(d).is_ok(), "{d}");
        }
        for d in [1, -1, 2, 9, 16, -12 * 4, 0, 3] {
            assert!(QuadraticCharacter::new(d).is_err(), "{d}");
        }
    }

    #[test]
    fn gaussian_dedekind() {
        let k = QuadField::quadratic(-1).unwrap();
        let v = dedekind_zeta(k, r(2.0)).unwrap().re;
        assert!((v - PI * PI / 6.0 * CATALAN).abs() < 1e-14);
        assert!((v - 1.506_703_009_9).abs() < 1e-9);
    }
}
