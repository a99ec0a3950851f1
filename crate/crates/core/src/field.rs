//! Exact arithmetic in ℚ and quadratic fields ℚ(√d).
//!
//! Elements of the ring of integers are stored by their coordinates in the
//! integral basis `{1, ω}`, where `ω = √d` when `d ≢ 1 (mod 4)` and
//! `ω = (1 + √d)/2` otherwise. For ℚ the second coordinate is always zero.
//!
//! The embeddings are fixed once per field: `σ₁` sends `√d` to the positive
//! root (real fields) or to the root with positive imaginary part (imaginary
//! fields), and `σ₂` is the other one.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{MdzError, Result};

/// Shape of the integral basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    /// `{1}`, the field is ℚ.
    Rational,
    /// `{1, √d}` for `d ≢ 1 (mod 4)`.
    Sqrt,
    /// `{1, (1 + √d)/2}` for `d ≡ 1 (mod 4)`.
    HalfInteger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signature {
    Rational,
    Real,
    Imaginary,
}

/// ℚ or a quadratic field ℚ(√d) with `d` squarefree, `d ∉ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    /// `None` for ℚ.
    d: Option<i64>,
}

/// An algebraic integer `x + y·ω` in coordinates of the integral basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FieldElement {
    pub x: i64,
    pub y: i64,
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement { x: 0, y: 0 };
    pub const ONE: FieldElement = FieldElement { x: 1, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        FieldElement { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        Ok(FieldElement {
            x: self.x.checked_add(other.x).ok_or(MdzError::Overflow("element addition"))?,
            y: self.y.checked_add(other.y).ok_or(MdzError::Overflow("element addition"))?,
        })
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        Ok(FieldElement {
            x: self.x.checked_sub(other.x).ok_or(MdzError::Overflow("element subtraction"))?,
            y: self.y.checked_sub(other.y).ok_or(MdzError::Overflow("element subtraction"))?,
        })
    }

    pub fn checked_neg(self) -> Result<Self> {
        Ok(FieldElement {
            x: self.x.checked_neg().ok_or(MdzError::Overflow("element negation"))?,
            y: self.y.checked_neg().ok_or(MdzError::Overflow("element negation"))?,
        })
    }

    /// `k·self` for an integer `k`.
    pub fn checked_scale(self, k: i64) -> Result<Self> {
        Ok(FieldElement {
            x: self.x.checked_mul(k).ok_or(MdzError::Overflow("element scaling"))?,
            y: self.y.checked_mul(k).ok_or(MdzError::Overflow("element scaling"))?,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl QuadField {
    pub const fn rationals() -> Self {
        QuadField { d: None }
    }

    /// ℚ(√d). Rejects `d ∈ {0, 1}` and non-squarefree `d`.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(MdzError::InvalidField(format!("d = {d} does not define a quadratic field")));
        }
        if d.unsigned_abs() > (1 << 31) {
            return Err(MdzError::InvalidField(format!("|d| = {} too large", d.unsigned_abs())));
        }
        if !is_squarefree(d) {
            return Err(MdzError::InvalidField(format!("d = {d} is not squarefree")));
        }
        Ok(QuadField { d: Some(d) })
    }

    /// The radicand, `None` for ℚ.
    pub fn d(&self) -> Option<i64> {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_none()
    }

    pub fn degree(&self) -> usize {
        if self.d.is_some() {
            2
        } else {
            1
        }
    }

    pub fn signature(&self) -> Signature {
        match self.d {
            None => Signature::Rational,
            Some(d) if d > 0 => Signature::Real,
            Some(_) => Signature::Imaginary,
        }
    }

    pub fn is_real_quadratic(&self) -> bool {
        self.signature() == Signature::Real
    }

    pub fn is_imaginary(&self) -> bool {
        self.signature() == Signature::Imaginary
    }

    /// Number of real embeddings.
    pub fn real_embeddings(&self) -> usize {
        match self.signature() {
            Signature::Rational => 1,
            Signature::Real => 2,
            Signature::Imaginary => 0,
        }
    }

    pub fn basis_kind(&self) -> BasisKind {
        match self.d {
            None => BasisKind::Rational,
            Some(d) if d.rem_euclid(4) == 1 => BasisKind::HalfInteger,
            Some(_) => BasisKind::Sqrt,
        }
    }

    /// Field discriminant (1 for ℚ).
    pub fn discriminant(&self) -> i64 {
        match (self.d, self.basis_kind()) {
            (None, _) => 1,
            (Some(d), BasisKind::HalfInteger) => d,
            (Some(d), _) => 4 * d,
        }
    }

    /// `c` with `ω² = c + t·ω`; returns `(c, t)`.
    fn omega_square(&self) -> (i64, i64) {
        match (self.d, self.basis_kind()) {
            (None, _) => (0, 0),
            (Some(d), BasisKind::HalfInteger) => ((d - 1) / 4, 1),
            (Some(d), _) => (d, 0),
        }
    }

    /// Embedded values `(σ₁(ω), σ₂(ω))`; both zero for ℚ.
    pub fn omega_embeddings(&self) -> [Complex64; 2] {
        let Some(d) = self.d else {
            return [Complex64::new(0.0, 0.0); 2];
        };
        let root = (d.unsigned_abs() as f64).sqrt();
        let (re, s) = match self.basis_kind() {
            BasisKind::HalfInteger => (0.5, 0.5 * root),
            _ => (0.0, root),
        };
        if d > 0 {
            [Complex64::new(re + s, 0.0), Complex64::new(re - s, 0.0)]
        } else {
            [Complex64::new(re, s), Complex64::new(re, -s)]
        }
    }

    /// Checks that `α` is a valid element (second coordinate zero over ℚ).
    pub fn check_element(&self, alpha: FieldElement) -> Result<()> {
        if self.is_rational() && alpha.y != 0 {
            return Err(MdzError::InvalidField(format!(
                "element {alpha} has a nonzero ω-coordinate over Q"
            )));
        }
        Ok(())
    }

    /// `σ_i(α)` with `i` one-based.
    pub fn embed(&self, alpha: FieldElement, i: usize) -> Result<Complex64> {
        let n = self.degree();
        if i == 0 || i > n {
            return Err(MdzError::EmbeddingIndex { index: i, degree: n });
        }
        let w = self.omega_embeddings()[i - 1];
        Ok(Complex64::new(alpha.x as f64, 0.0) + w * alpha.y as f64)
    }

    /// All embeddings of `α` in order.
    pub fn embeddings(&self, alpha: FieldElement) -> Vec<Complex64> {
        (1..=self.degree()).map(|i| self.embed(alpha, i).expect("index in range")).collect()
    }

    /// Exact norm `N_{K/ℚ}(α)`.
    pub fn norm(&self, alpha: FieldElement) -> Result<i128> {
        let (x, y) = (alpha.x as i128, alpha.y as i128);
        let (c, t) = self.omega_square();
        if self.is_rational() {
            return Ok(x);
        }
        // N(x + yω) = x² + t·xy − c·y²
        let xx = x.checked_mul(x).ok_or(MdzError::Overflow("norm"))?;
        let xy = x.checked_mul(y).and_then(|v| v.checked_mul(t as i128)).ok_or(MdzError::Overflow("norm"))?;
        let yy = y
            .checked_mul(y)
            .and_then(|v| v.checked_mul(c as i128))
            .ok_or(MdzError::Overflow("norm"))?;
        xx.checked_add(xy).and_then(|v| v.checked_sub(yy)).ok_or(MdzError::Overflow("norm"))
    }

    /// Exact trace `Tr_{K/ℚ}(α)`.
    pub fn trace(&self, alpha: FieldElement) -> Result<i128> {
        let (_, t) = self.omega_square();
        if self.is_rational() {
            return Ok(alpha.x as i128);
        }
        Ok(2 * alpha.x as i128 + t as i128 * alpha.y as i128)
    }

    /// Exact product `α·β`.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let (c, t) = self.omega_square();
        let (x1, y1, x2, y2) = (a.x as i128, a.y as i128, b.x as i128, b.y as i128);
        let yy = y1 * y2;
        let x = x1 * x2 + c as i128 * yy;
        let y = x1 * y2 + x2 * y1 + t as i128 * yy;
        Ok(FieldElement {
            x: i64::try_from(x).map_err(|_| MdzError::Overflow("element product"))?,
            y: i64::try_from(y).map_err(|_| MdzError::Overflow("element product"))?,
        })
    }

    /// Product on wide coordinates; `None` on overflow.
    pub(crate) fn mul_wide(&self, a: (i128, i128), b: (i128, i128)) -> Option<(i128, i128)> {
        let (c, t) = self.omega_square();
        let yy = a.1.checked_mul(b.1)?;
        let x = a.0.checked_mul(b.0)?.checked_add(yy.checked_mul(c as i128)?)?;
        let y = a.0
            .checked_mul(b.1)?
            .checked_add(b.0.checked_mul(a.1)?)?
            .checked_add(yy.checked_mul(t as i128)?)?;
        Some((x, y))
    }

    /// Galois conjugate `ᾱ` (identity over ℚ).
    pub fn conjugate(&self, a: FieldElement) -> Result<FieldElement> {
        match self.basis_kind() {
            BasisKind::Rational => Ok(a),
            BasisKind::Sqrt => a.y.checked_neg().map(|y| FieldElement::new(a.x, y)).ok_or(MdzError::Overflow("conjugate")),
            // x + yω̄ = (x + y) − yω
            BasisKind::HalfInteger => {
                let x = a.x.checked_add(a.y).ok_or(MdzError::Overflow("conjugate"))?;
                let y = a.y.checked_neg().ok_or(MdzError::Overflow("conjugate"))?;
                Ok(FieldElement::new(x, y))
            }
        }
    }

    /// Matrix of multiplication by `α` in the integral basis, column `j` is `α·b_j`.
    pub fn multiplication_matrix(&self, a: FieldElement) -> Result<[[i128; 2]; 2]> {
        let col0 = self.mul(a, FieldElement::ONE)?;
        let col1 = self.mul(a, FieldElement::new(0, 1))?;
        Ok([[col0.x as i128, col1.x as i128], [col0.y as i128, col1.y as i128]])
    }

    /// Exact sign (−1, 0, +1) of the real number `σ_i(α)`; `None` when `σ_i` is complex.
    pub fn real_sign(&self, a: FieldElement, i: usize) -> Option<i8> {
        match self.signature() {
            Signature::Imaginary => None,
            Signature::Rational => Some(a.x.signum() as i8),
            Signature::Real => {
                let d = self.d.unwrap() as i128;
                // σ(α) ∝ u + s·v·√d with u, v integers and s = ±1
                let (u, v) = match self.basis_kind() {
                    BasisKind::HalfInteger => (2 * a.x as i128 + a.y as i128, a.y as i128),
                    _ => (a.x as i128, a.y as i128),
                };
                let v = if i == 1 { v } else { -v };
                Some(sign_of_surd(u, v, d))
            }
        }
    }

    /// Units of finite order; for real fields and ℚ this is `{±1}`.
    pub fn roots_of_unity(&self) -> Vec<FieldElement> {
        let mut units = vec![FieldElement::new(1, 0), FieldElement::new(-1, 0)];
        match self.d {
            Some(-1) => {
                units.push(FieldElement::new(0, 1));
                units.push(FieldElement::new(0, -1));
            }
            Some(-3) => {
                // ω = (1 + √−3)/2 is a primitive sixth root of unity, ω² = ω − 1
                units.extend([
                    FieldElement::new(0, 1),
                    FieldElement::new(0, -1),
                    FieldElement::new(-1, 1),
                    FieldElement::new(1, -1),
                ]);
            }
            _ => {}
        }
        units
    }

    /// The fundamental unit `ε₀ > 1` (under `σ₁`) of a real quadratic field.
    ///
    /// Walks the continued fraction of `√d` (or `(√d − 1)/2` when the basis is
    /// half-integral); the first convergent `p/q` whose element `p + qω` has
    /// norm ±1 is the fundamental unit.
    pub fn fundamental_unit(&self) -> Result<FieldElement> {
        let Some(d) = self.d.filter(|&d| d > 0) else {
            return Err(MdzError::Unsupported(
                "fundamental unit exists only for real quadratic fields; use roots_of_unity".into(),
            ));
        };
        let d128 = d as i128;
        let root = isqrt(d128);
        // complete quotient (P + √D)/Q
        let (mut p_num, mut q_den) = match self.basis_kind() {
            BasisKind::HalfInteger => (-1i128, 2i128),
            _ => (0i128, 1i128),
        };
        let (mut p_prev, mut p_cur) = (0i128, 1i128);
        let (mut q_prev, mut q_cur) = (1i128, 0i128);
        for _ in 0..100_000 {
            let a = (p_num + root).div_euclid(q_den);
            let p_next = a.checked_mul(p_cur).and_then(|v| v.checked_add(p_prev));
            let q_next = a.checked_mul(q_cur).and_then(|v| v.checked_add(q_prev));
            let (Some(p_next), Some(q_next)) = (p_next, q_next) else {
                return Err(MdzError::Overflow("fundamental unit search"));
            };
            (p_prev, p_cur, q_prev, q_cur) = (p_cur, p_next, q_cur, q_next);
            if q_cur >= 1 {
                if let (Ok(x), Ok(y)) = (i64::try_from(p_cur), i64::try_from(q_cur)) {
                    let cand = FieldElement::new(x, y);
                    let n = self.norm(cand)?;
                    if (n == 1 || n == -1) && self.real_sign(cand, 1) == Some(1) {
                        return Ok(cand);
                    }
                } else {
                    return Err(MdzError::Overflow("fundamental unit exceeds 64-bit coordinates"));
                }
            }
            p_num = a * q_den - p_num;
            q_den = (d128 - p_num * p_num) / q_den;
        }
        Err(MdzError::Unsupported(format!("no fundamental unit found for d = {d}")))
    }

    /// Smallest totally positive unit `> 1`: `ε₀` if `N(ε₀) = 1`, else `ε₀²`.
    pub fn totally_positive_unit(&self) -> Result<FieldElement> {
        let e0 = self.fundamental_unit()?;
        if self.norm(e0)? == 1 {
            Ok(e0)
        } else {
            self.mul(e0, e0)
        }
    }

    /// Class number from the analytic class number formula, evaluated as a finite
    /// character sum and rounded.
    pub fn class_number(&self) -> Result<u64> {
        let disc = self.discriminant();
        let Some(d) = self.d else { return Ok(1) };
        if disc.abs() > 10_000_000 {
            return Err(MdzError::Unsupported("discriminant too large for class number".into()));
        }
        let n = disc.unsigned_abs();
        let h = if d < 0 {
            let w = match d {
                -1 => 4.0,
                -3 => 6.0,
                _ => 2.0,
            };
            let s: f64 = (1..n).map(|a| kronecker(disc, a) as f64 * a as f64).sum();
            -w * s / (2.0 * n as f64)
        } else {
            let eps = self.fundamental_unit()?;
            let reg = self.embed(eps, 1)?.re.ln();
            let s: f64 = (1..n)
                .map(|a| kronecker(disc, a) as f64 * (std::f64::consts::PI * a as f64 / n as f64).sin().ln())
                .sum();
            -s / (2.0 * reg)
        };
        let r = h.round();
        if (h - r).abs() > 1e-6 || r < 1.0 {
            return Err(MdzError::Unsupported(format!("class number evaluation unstable ({h})")));
        }
        Ok(r as u64)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            None => write!(f, "Q"),
            Some(d) => write!(f, "d={d}"),
        }
    }
}

/// Sign of `u + v·√d` for `d > 0` squarefree.
fn sign_of_surd(u: i128, v: i128, d: i128) -> i8 {
    match (u.signum(), v.signum()) {
        (0, 0) => 0,
        (a, b) if a >= 0 && b >= 0 => 1,
        (a, b) if a <= 0 && b <= 0 => -1,
        (a, _) => {
            let lhs = u * u;
            let rhs = v * v * d;
            match lhs.cmp(&rhs) {
                std::cmp::Ordering::Greater => a as i8,
                std::cmp::Ordering::Less => -a as i8,
                std::cmp::Ordering::Equal => 0,
            }
        }
    }
}

/// Integer square root, floor.
pub(crate) fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
fn jacobi(a: i64, n: u64) -> i8 {
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(D/n)` for `n ≥ 1`; with `D` a fundamental discriminant this
/// is the quadratic character attached to ℚ(√D).
pub fn kronecker(disc: i64, n: u64) -> i8 {
    if n == 0 {
        return if disc.abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i8;
    while n.is_multiple_of(2) {
        n /= 2;
        result *= match disc.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    if n == 1 {
        return result;
    }
    result * jacobi(disc, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gaussian() -> QuadField {
        QuadField::quadratic(-1).unwrap()
    }

    #[test]
    fn rejects_bad_radicands() {
        assert!(QuadField::quadratic(0).is_err());
        assert!(QuadField::quadratic(1).is_err());
        assert!(QuadField::quadratic(8).is_err());
        assert!(QuadField::quadratic(-12).is_err());
        assert!(QuadField::quadratic(-7).is_ok());
    }

    #[test]
    fn basis_and_discriminant() {
        assert_eq!(QuadField::quadratic(5).unwrap().basis_kind(), BasisKind::HalfInteger);
        assert_eq!(QuadField::quadratic(-3).unwrap().discriminant(), -3);
        assert_eq!(QuadField::quadratic(2).unwrap().discriminant(), 8);
        assert_eq!(gaussian().discriminant(), -4);
        assert_eq!(QuadField::rationals().degree(), 1);
    }

    #[test]
    fn embed_examples() {
        let k = gaussian();
        let i = FieldElement::new(0, 1);
        assert_eq!(k.embed(i, 1).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(k.embed(i, 2).unwrap(), Complex64::new(0.0, -1.0));
        let k = QuadField::quadratic(2).unwrap();
        let a = FieldElement::new(3, 2);
        assert!((k.embed(a, 1).unwrap().re - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!((k.embed(a, 2).unwrap().re - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
        let q = QuadField::rationals();
        assert_eq!(q.embed(FieldElement::new(7, 0), 1).unwrap(), Complex64::new(7.0, 0.0));
        assert!(matches!(q.embed(FieldElement::ONE, 2), Err(MdzError::EmbeddingIndex { .. })));
        assert!(k.embed(a, 0).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(gaussian().norm(FieldElement::new(3, 2)).unwrap(), 13);
        let k = QuadField::quadratic(2).unwrap();
        assert_eq!(k.norm(FieldElement::new(3, 2)).unwrap(), 1);
        assert_eq!(k.norm(FieldElement::new(1, 1)).unwrap(), -1);
        // (1 + √5)/2 has norm −1
        assert_eq!(QuadField::quadratic(5).unwrap().norm(FieldElement::new(0, 1)).unwrap(), -1);
    }

    #[test]
    fn products_overflow_loudly() {
        let k = gaussian();
        let big = FieldElement::new(i64::MAX / 2, 3);
        assert!(matches!(k.mul(big, big), Err(MdzError::Overflow(_))));
        assert!(FieldElement::new(i64::MAX, 0).checked_add(FieldElement::ONE).is_err());
    }

    /// Brute-force Pell search: smallest `y ≥ 1` admitting a unit `x + yω` with `σ₁ > 1`.
    fn pell_oracle(k: &QuadField, ymax: i64) -> FieldElement {
        for y in 1..=ymax {
            // σ₂ small means x ≈ −y·σ₂(ω)
            let w2 = k.omega_embeddings()[1].re;
            let x0 = (-(y as f64) * w2).round() as i64;
            for x in x0 - 2..=x0 + 2 {
                let e = FieldElement::new(x, y);
                let n = k.norm(e).unwrap();
                if (n == 1 || n == -1) && k.embed(e, 1).unwrap().re > 1.0 {
                    return e;
                }
            }
        }
        panic!("no unit below bound");
    }

    #[test]
    fn fundamental_units_match_pell_search() {
        let k2 = QuadField::quadratic(2).unwrap();
        assert_eq!(k2.fundamental_unit().unwrap(), FieldElement::new(1, 1));
        assert_eq!(k2.totally_positive_unit().unwrap(), FieldElement::new(3, 2));
        let k5 = QuadField::quadratic(5).unwrap();
        assert_eq!(k5.fundamental_unit().unwrap(), FieldElement::new(0, 1));
        let k3 = QuadField::quadratic(3).unwrap();
        assert_eq!(k3.fundamental_unit().unwrap(), FieldElement::new(2, 1));
        assert_eq!(k3.totally_positive_unit().unwrap(), FieldElement::new(2, 1));
        for d in [2, 3, 5, 6, 7, 10, 11, 13, 14, 17, 19, 21, 22, 23, 29, 31, 33, 37, 41, 43, 46, 53, 61] {
            let k = QuadField::quadratic(d).unwrap();
            assert_eq!(k.fundamental_unit().unwrap(), pell_oracle(&k, 1_000_000), "d = {d}");
        }
    }

    #[test]
    fn fundamental_unit_is_minimal() {
        for d in [2, 3, 5, 7, 13, 19] {
            let k = QuadField::quadratic(d).unwrap();
            let e0 = k.fundamental_unit().unwrap();
            let bound = k.embed(e0, 1).unwrap().re;
            // any unit u with 1 < σ₁(u) < σ₁(ε₀) has |coords| below the bound
            let b = bound.ceil() as i64 + 1;
            for x in -b..=b {
                for y in -b..=b {
                    let u = FieldElement::new(x, y);
                    let n = k.norm(u).unwrap();
                    if n.abs() == 1 {
                        let s = k.embed(u, 1).unwrap().re;
                        assert!(!(s > 1.0 + 1e-12 && s < bound - 1e-9), "d={d}: smaller unit {u}");
                    }
                }
            }
        }
    }

    #[test]
    fn fundamental_unit_rejects_imaginary() {
        assert!(gaussian().fundamental_unit().is_err());
        assert!(QuadField::rationals().fundamental_unit().is_err());
        assert_eq!(gaussian().roots_of_unity().len(), 4);
        assert_eq!(QuadField::quadratic(-3).unwrap().roots_of_unity().len(), 6);
        assert_eq!(QuadField::quadratic(-7).unwrap().roots_of_unity().len(), 2);
    }

    #[test]
    fn sixth_roots_of_unity_are_units() {
        let k = QuadField::quadratic(-3).unwrap();
        for u in k.roots_of_unity() {
            assert_eq!(k.norm(u).unwrap(), 1);
            let mut p = u;
            for _ in 0..5 {
                p = k.mul(p, u).unwrap();
            }
            assert_eq!(p, FieldElement::ONE);
        }
    }

    #[test]
    fn class_numbers() {
        for (d, h) in [(-1, 1), (-2, 1), (-3, 1), (-5, 2), (-14, 4), (-23, 3), (-163, 1), (2, 1), (5, 1), (10, 2), (79, 3), (15, 2)] {
            assert_eq!(QuadField::quadratic(d).unwrap().class_number().unwrap(), h, "d = {d}");
        }
    }

    #[test]
    fn kronecker_matches_chi8() {
        let vals: Vec<i8> = (1..=8).map(|n| kronecker(8, n)).collect();
        assert_eq!(vals, vec![1, 0, -1, 0, -1, 0, 1, 0]);
        let vals: Vec<i8> = (1..=4).map(|n| kronecker(-4, n)).collect();
        assert_eq!(vals, vec![1, 0, -1, 0]);
    }

    #[test]
    fn real_signs_are_exact() {
        let k = QuadField::quadratic(2).unwrap();
        assert_eq!(k.real_sign(FieldElement::new(1, 1), 2), Some(-1));
        assert_eq!(k.real_sign(FieldElement::new(3, 2), 2), Some(1));
        let k5 = QuadField::quadratic(5).unwrap();
        // ω̄ = (1 − √5)/2 < 0
        assert_eq!(k5.real_sign(FieldElement::new(0, 1), 2), Some(-1));
        assert_eq!(k5.real_sign(FieldElement::new(1, 1), 2), Some(1));
    }

    fn field_strategy() -> impl Strategy<Value = QuadField> {
        prop_oneof![
            Just(QuadField::rationals()),
            prop::sample::select(vec![-163i64, -11, -7, -3, -2, -1, 2, 3, 5, 6, 13, 17])
                .prop_map(|d| QuadField::quadratic(d).unwrap()),
        ]
    }

    fn element(k: &QuadField) -> impl Strategy<Value = FieldElement> {
        let rational = k.is_rational();
        (-10_000i64..10_000, -10_000i64..10_000)
            .prop_map(move |(x, y)| FieldElement::new(x, if rational { 0 } else { y }))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative((k, a, b) in field_strategy().prop_flat_map(|k| (Just(k), element(&k), element(&k)))) {
            let ab = k.mul(a, b).unwrap();
            prop_assert_eq!(k.norm(ab).unwrap(), k.norm(a).unwrap() * k.norm(b).unwrap());
        }

        #[test]
        fn norm_matches_embedding_product((k, a) in field_strategy().prop_flat_map(|k| (Just(k), element(&k)))) {
            let n = k.norm(a).unwrap() as f64;
            let p = k.embeddings(a).into_iter().fold(Complex64::new(1.0, 0.0), |acc, z| acc * z);
            prop_assert!((p.re - n).abs() <= 1e-9 * n.abs().max(1.0));
            prop_assert!(p.im.abs() <= 1e-9 * n.abs().max(1.0));
        }

        #[test]
        fn trace_and_norm_match_characteristic_polynomial((k, a) in field_strategy().prop_flat_map(|k| (Just(k), element(&k)))) {
            prop_assume!(!k.is_rational());
            let m = k.multiplication_matrix(a).unwrap();
            prop_assert_eq!(m[0][0] + m[1][1], k.trace(a).unwrap());
            prop_assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], k.norm(a).unwrap());
        }
    }
}
