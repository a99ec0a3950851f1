//! Cones `ℕ{e₁,…,e_m}` with strictly positive coefficients, their validity
//! checks, and fundamental domains of `O_K − {0}` modulo units.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{MdzError, Result};
use crate::field::{FieldElement, QuadField, Signature};

/// How [`Cone::is_simple`] reads the antipodal-direction condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimpleMode {
    /// Generator directions lie in a common open half-plane for every embedding.
    Operative,
    /// Additionally no two cone points `α, β` (possibly equal) satisfy
    /// `arg σ_i(α) = −arg σ_i(β)`.
    Strict,
}

pub(crate) fn det2(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

pub(crate) fn wide(e: FieldElement) -> (i128, i128) {
    (e.x as i128, e.y as i128)
}

/// `(g, s, t)` with `a·s + b·t = g = gcd(a, b) ≥ 0`.
pub(crate) fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Whether nonzero integer vectors lie in a common open half-plane.
pub(crate) fn in_open_half_plane(vectors: &[(i128, i128)]) -> bool {
    if vectors.contains(&(0, 0)) {
        return false;
    }
    // upper half (angle in [0, π)) sorts before lower half
    let half = |v: (i128, i128)| if v.1 > 0 || (v.1 == 0 && v.0 > 0) { 0 } else { 1 };
    let mut dirs: Vec<(i128, i128)> = vectors.to_vec();
    dirs.sort_by(|&a, &b| half(a).cmp(&half(b)).then_with(|| 0.cmp(&det2(a, b))));
    dirs.dedup_by(|a, b| half(*a) == half(*b) && det2(*a, *b) == 0);
    if dirs.len() == 1 {
        return true;
    }
    // some counterclockwise gap between consecutive directions must exceed π
    (0..dirs.len()).any(|i| det2(dirs[i], dirs[(i + 1) % dirs.len()]) < 0)
}

/// A cone `ℕ{e₁,…,e_m} = {Σ a_j e_j : a_j ≥ 1}` in the ring of integers.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    field: QuadField,
    generators: Vec<FieldElement>,
    embedded: Vec<Vec<Complex64>>,
}

impl Cone {
    /// Builds a cone from `1 ≤ m ≤ n` nonzero, linearly independent generators.
    pub fn new(field: QuadField, generators: Vec<FieldElement>) -> Result<Self> {
        let n = field.degree();
        if generators.is_empty() || generators.len() > n {
            return Err(MdzError::InvalidCone(format!(
                "{} generators for a degree-{n} field",
                generators.len()
            )));
        }
        for &g in &generators {
            field.check_element(g)?;
            if g.is_zero() {
                return Err(MdzError::InvalidCone("zero generator".into()));
            }
        }
        if generators.len() == 2 && det2(wide(generators[0]), wide(generators[1])) == 0 {
            return Err(MdzError::InvalidCone("generators are linearly dependent".into()));
        }
        let embedded = generators.iter().map(|&g| field.embeddings(g)).collect();
        Ok(Cone { field, generators, embedded })
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// `σ_i(e_j)` for all embeddings `i` (zero-based in the returned vector).
    pub fn embedded_generator(&self, j: usize) -> &[Complex64] {
        &self.embedded[j]
    }

    /// Generators extend to a basis of `O_K`.
    pub fn is_unimodular(&self) -> bool {
        let g: Vec<(i128, i128)> = self.generators.iter().map(|&e| wide(e)).collect();
        match (self.field.degree(), g.len()) {
            (1, 1) => g[0].0.abs() == 1,
            (2, 1) => ext_gcd(g[0].0, g[0].1).0 == 1,
            (2, 2) => det2(g[0], g[1]).abs() == 1,
            _ => false,
        }
    }

    pub fn is_simple(&self, mode: SimpleMode) -> bool {
        let operative = match self.field.signature() {
            Signature::Imaginary => {
                in_open_half_plane(&self.generators.iter().map(|&e| wide(e)).collect::<Vec<_>>())
            }
            _ => (1..=self.field.real_embeddings()).all(|i| self.embedding_sign(i).is_some()),
        };
        match mode {
            SimpleMode::Operative => operative,
            SimpleMode::Strict => {
                // cone points all have σ₁ with imaginary part of sign y; a point with real
                // σ₁ is its own mirror image, and an arc meeting both half-planes meets ℝ
                operative
                    && self.field.is_imaginary()
                    && match self.generators.as_slice() {
                        [e] => e.y != 0,
                        [a, b] => (a.y as i128) * (b.y as i128) >= 0,
                        _ => false,
                    }
            }
        }
    }

    /// Common sign of `σ_i` over the generators, if constant.
    fn embedding_sign(&self, i: usize) -> Option<i8> {
        let mut sign = None;
        for &g in &self.generators {
            let s = self.field.real_sign(g, i)?;
            if s == 0 || sign.is_some_and(|t| t != s) {
                return None;
            }
            sign = Some(s);
        }
        sign
    }

    /// Open arc `(lo, hi)` of `arg t_i` with `Re(σ_i(e_j) t_i) > 0` for all `j`;
    /// `None` when empty. `i` is 1-based.
    pub fn sector_arc(&self, i: usize) -> Option<(f64, f64)> {
        use std::f64::consts::{FRAC_PI_2, PI};
        let zs: Vec<Complex64> = self.embedded.iter().map(|e| e[i - 1]).collect();
        let mean: Complex64 = zs.iter().map(|z| z / z.norm()).sum();
        if mean.norm() < 1e-12 {
            return None;
        }
        let psi = mean.arg();
        let rel: Vec<f64> = zs.iter().map(|z| (z * Complex64::from_polar(1.0, -psi)).arg()).collect();
        let lo_rel = rel.iter().copied().fold(f64::INFINITY, f64::min);
        let hi_rel = rel.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi_rel - lo_rel >= PI {
            return None;
        }
        let mut lo = -FRAC_PI_2 - psi - lo_rel;
        let width = PI - (hi_rel - lo_rel);
        if lo <= -PI {
            lo += 2.0 * PI;
        } else if lo > PI {
            lo -= 2.0 * PI;
        }
        Some((lo, lo + width))
    }

    /// `ε(C)`: product over real embeddings of the constant sign of `σ` on the cone.
    pub fn sign_epsilon(&self) -> Result<i8> {
        if !self.is_simple(SimpleMode::Operative) {
            return Err(MdzError::NotSimple);
        }
        Ok((1..=self.field.real_embeddings())
            .map(|i| self.embedding_sign(i).expect("simple cone has constant signs"))
            .product())
    }

    /// Points `Σ a_j e_j` with `1 ≤ a_j ≤ bound`, lexicographic in `(a₁,…,a_m)`.
    pub fn enumerate_points(&self, bound: u64) -> ConePoints<'_> {
        ConePoints {
            cone: self,
            bound,
            coeffs: if bound == 0 { None } else { Some(vec![1; self.rank()]) },
        }
    }

    /// Exact membership test for a point in wide coordinates.
    pub fn contains_wide(&self, p: (i128, i128)) -> bool {
        match self.generators.as_slice() {
            [e] => {
                let e = wide(*e);
                if det2(e, p) != 0 {
                    return false;
                }
                let (num, den) = if e.0 != 0 { (p.0, e.0) } else { (p.1, e.1) };
                num % den == 0 && num / den >= 1
            }
            [a, b] => {
                let (a, b) = (wide(*a), wide(*b));
                let d = det2(a, b);
                let (na, nb) = (det2(p, b), det2(a, p));
                na % d == 0 && nb % d == 0 && na / d >= 1 && nb / d >= 1
            }
            _ => false,
        }
    }

    pub fn contains(&self, alpha: FieldElement) -> bool {
        self.contains_wide(wide(alpha))
    }
}

/// Iterator returned by [`Cone::enumerate_points`].
pub struct ConePoints<'a> {
    cone: &'a Cone,
    bound: u64,
    coeffs: Option<Vec<u64>>,
}

impl Iterator for ConePoints<'_> {
    type Item = Result<(FieldElement, Vec<u64>)>;

    fn next(&mut self) -> Option<Self::Item> {
        let coeffs = self.coeffs.as_mut()?;
        let current = coeffs.clone();
        // advance odometer, last coefficient fastest
        let mut k = coeffs.len();
        loop {
            if k == 0 {
                self.coeffs = None;
                break;
            }
            k -= 1;
            if coeffs[k] < self.bound {
                coeffs[k] += 1;
                coeffs[k + 1..].iter_mut().for_each(|c| *c = 1);
                break;
            }
        }
        let mut point = FieldElement::ZERO;
        for (&a, &g) in current.iter().zip(self.cone.generators()) {
            let term = i64::try_from(a)
                .map_err(|_| MdzError::Overflow("cone point"))
                .and_then(|a| g.checked_scale(a))
                .and_then(|t| point.checked_add(t));
            match term {
                Ok(p) => point = p,
                Err(e) => return Some(Err(e)),
            }
        }
        Some(Ok((point, current)))
    }
}

/// A finite family of cones with their signs `ε(C)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeDecomposition {
    pub field: QuadField,
    pub cones: Vec<Cone>,
    pub signs: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeRecord {
    pub generators: Vec<[i64; 2]>,
    pub sign: i8,
}

impl ConeDecomposition {
    /// Signs are computed; every cone must be operative-simple and over `field`.
    pub fn new(field: QuadField, cones: Vec<Cone>) -> Result<Self> {
        let mut signs = Vec::with_capacity(cones.len());
        for c in &cones {
            if c.field() != field {
                return Err(MdzError::InvalidCone("cone over a different field".into()));
            }
            signs.push(c.sign_epsilon()?);
        }
        Ok(ConeDecomposition { field, cones, signs })
    }

    pub fn records(&self) -> Vec<ConeRecord> {
        self.cones
            .iter()
            .zip(&self.signs)
            .map(|(c, &sign)| ConeRecord {
                generators: c.generators().iter().map(|g| [g.x, g.y]).collect(),
                sign,
            })
            .collect()
    }
}

fn to_element(p: (i128, i128)) -> Result<FieldElement> {
    Ok(FieldElement::new(
        i64::try_from(p.0).map_err(|_| MdzError::Overflow("subdivision"))?,
        i64::try_from(p.1).map_err(|_| MdzError::Overflow("subdivision"))?,
    ))
}

/// Unimodular cones partitioning the half-open sector `[u, v)` of lattice points:
/// the ray through `u`, the open rank-2 pieces, and the interior rays between them.
fn half_open_sector(field: QuadField, u: FieldElement, v: FieldElement) -> Result<Vec<Cone>> {
    let mut rays = vec![wide(u)];
    let target = wide(v);
    loop {
        let cur = *rays.last().unwrap();
        let d = det2(cur, target);
        if d.abs() == 1 {
            break;
        }
        let s = d.signum();
        let (g, a, b) = ext_gcd(cur.0, cur.1);
        debug_assert_eq!(g, 1);
        // det(cur, p0) = cur.0·p0.1 − cur.1·p0.0 = s
        let p0 = (-b * s, a * s);
        let r = (s * det2(p0, target)).rem_euclid(d.abs());
        let t = (r - s * det2(p0, target)) / d.abs();
        rays.push((p0.0 + t * cur.0, p0.1 + t * cur.1));
    }
    rays.push(target);
    let mut cones = Vec::new();
    for w in rays.windows(2) {
        cones.push(Cone::new(field, vec![to_element(w[0])?, to_element(w[1])?])?);
    }
    for &r in &rays[..rays.len() - 1] {
        cones.push(Cone::new(field, vec![to_element(r)?])?);
    }
    Ok(cones)
}

/// Unimodular operative-simple cones whose point sets form a fundamental domain of
/// `O_K − {0}` modulo the unit group.
pub fn fundamental_domain(field: QuadField) -> Result<ConeDecomposition> {
    let one = FieldElement::ONE;
    let omega = FieldElement::new(0, 1);
    let cone = |g: Vec<FieldElement>| Cone::new(field, g);
    let cones = match field.d() {
        None => vec![cone(vec![one])?],
        Some(-1) | Some(-3) => vec![cone(vec![one, omega])?, cone(vec![one])?],
        Some(d) if d < 0 => vec![
            cone(vec![one, omega])?,
            cone(vec![one])?,
            cone(vec![omega, FieldElement::new(-1, 0)])?,
            cone(vec![omega])?,
        ],
        Some(_) => {
            let eps = field.totally_positive_unit()?;
            let mut cones = half_open_sector(field, one, eps)?;
            if field.norm(field.fundamental_unit()?)? == 1 {
                // no unit of norm −1, so mixed-sign elements form their own orbits
                cones.extend(half_open_sector(field, omega, field.mul(eps, omega)?)?);
            }
            cones
        }
    };
    ConeDecomposition::new(field, cones)
}

/// First element whose orbit is not covered exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionViolation {
    pub element: [i64; 2],
    /// Number of (orbit element, cone) incidences; 0 means uncovered.
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub height: u64,
    pub orbits_checked: u64,
    pub violations: u64,
    pub passed: bool,
    pub first_violation: Option<PartitionViolation>,
}

fn unit_orbit(field: QuadField, height: u64) -> Result<Vec<(i128, i128)>> {
    let roots: Vec<(i128, i128)> = field.roots_of_unity().into_iter().map(wide).collect();
    if !field.is_real_quadratic() {
        return Ok(roots);
    }
    let e0 = field.fundamental_unit()?;
    let n0 = field.norm(e0)?;
    let inv = field.conjugate(e0)?;
    let inv = (inv.x as i128 * n0, inv.y as i128 * n0);
    let d = field.d().unwrap() as f64;
    let log_e = field.embed(e0, 1)?.re.ln();
    let reach = ((height.max(2) as f64) * (1.0 + d.sqrt())).ln();
    let kmax = (2.0 * reach / log_e).ceil() as usize + 3;
    let mut units = Vec::new();
    for &r in &roots {
        units.push(r);
        let (mut up, mut down) = (r, r);
        for _ in 0..kmax {
            up = field.mul_wide(up, wide(e0)).ok_or(MdzError::Overflow("unit orbit"))?;
            down = field.mul_wide(down, inv).ok_or(MdzError::Overflow("unit orbit"))?;
            units.push(up);
            units.push(down);
        }
    }
    Ok(units)
}

/// Checks that every nonzero `α` with `|x|, |y| ≤ height` has exactly one unit
/// multiple in exactly one cone of `dec`.
pub fn verify_partition(dec: &ConeDecomposition, height: u64) -> Result<PartitionReport> {
    let field = dec.field;
    let units = unit_orbit(field, height)?;
    let h = height as i128;
    let ys = if field.is_rational() { 0..=0 } else { -h..=h };
    let mut report = PartitionReport {
        height,
        orbits_checked: 0,
        violations: 0,
        passed: true,
        first_violation: None,
    };
    for x in -h..=h {
        for y in ys.clone() {
            if (x, y) == (0, 0) {
                continue;
            }
            report.orbits_checked += 1;
            let mut hits = 0usize;
            for &u in &units {
                let Some(p) = field.mul_wide(u, (x, y)) else { continue };
                hits += dec.cones.iter().filter(|c| c.contains_wide(p)).count();
            }
            if hits != 1 {
                report.violations += 1;
                report.passed = false;
                report.first_violation.get_or_insert(PartitionViolation {
                    element: [x as i64, y as i64],
                    hits,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(x: i64, y: i64) -> FieldElement {
        FieldElement::new(x, y)
    }

    fn gaussian() -> QuadField {
        QuadField::quadratic(-1).unwrap()
    }

    fn cone(f: QuadField, gens: &[(i64, i64)]) -> Cone {
        Cone::new(f, gens.iter().map(|&(x, y)| el(x, y)).collect()).unwrap()
    }

    #[test]
    fn sector_arcs() {
        use std::f64::consts::{FRAC_PI_2, PI};
        let k = gaussian();
        let (lo, hi) = cone(k, &[(1, 0), (0, 1)]).sector_arc(1).unwrap();
        assert!((lo + FRAC_PI_2).abs() < 1e-12 && hi.abs() < 1e-12);
        let (lo, hi) = cone(k, &[(1, 0), (0, 1)]).sector_arc(2).unwrap();
        assert!(lo.abs() < 1e-12 && (hi - FRAC_PI_2).abs() < 1e-12);
        let (lo, hi) = cone(k, &[(-1, 0)]).sector_arc(1).unwrap();
        assert!((lo - FRAC_PI_2).abs() < 1e-12 && (hi - 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn unimodularity() {
        let k = gaussian();
        assert!(cone(k, &[(1, 0), (0, 1)]).is_unimodular());
        assert!(!cone(k, &[(1, 0), (0, 2)]).is_unimodular());
        assert!(!cone(k, &[(2, 0)]).is_unimodular());
        assert!(cone(k, &[(2, 3)]).is_unimodular());
        let q2 = QuadField::quadratic(2).unwrap();
        assert!(!cone(q2, &[(1, 0), (3, 2)]).is_unimodular());
    }

    #[test]
    fn construction_errors() {
        let k = gaussian();
        assert!(Cone::new(k, vec![]).is_err());
        assert!(Cone::new(k, vec![el(1, 0), el(2, 0)]).is_err());
        assert!(Cone::new(k, vec![el(0, 0)]).is_err());
        assert!(Cone::new(k, vec![el(1, 0), el(0, 1), el(1, 1)]).is_err());
        assert!(Cone::new(QuadField::rationals(), vec![el(1, 1)]).is_err());
    }

    #[test]
    fn simplicity_examples() {
        let k = gaussian();
        let c = cone(k, &[(1, 0), (0, 1)]);
        assert!(c.is_simple(SimpleMode::Operative) && c.is_simple(SimpleMode::Strict));
        let c = cone(k, &[(1, 1), (1, -1)]);
        assert!(c.is_simple(SimpleMode::Operative));
        assert!(!c.is_simple(SimpleMode::Strict));
        let c = cone(k, &[(1, 0)]);
        assert!(c.is_simple(SimpleMode::Operative));
        assert!(!c.is_simple(SimpleMode::Strict));
        let q2 = QuadField::quadratic(2).unwrap();
        // 1 + √2 has σ₂ < 0 while 1 has σ₂ > 0
        assert!(!cone(q2, &[(1, 0), (1, 1)]).is_simple(SimpleMode::Operative));
        assert!(cone(q2, &[(1, 0), (3, 2)]).is_simple(SimpleMode::Operative));
        assert!(!cone(q2, &[(1, 0), (3, 2)]).is_simple(SimpleMode::Strict));
    }

    #[test]
    fn antipodal_generators_are_not_simple() {
        assert!(!in_open_half_plane(&[(1, 0), (-2, 0)]));
        assert!(in_open_half_plane(&[(1, 0), (0, 1), (-1, 1)]));
        assert!(!in_open_half_plane(&[(1, 0), (0, 1), (-1, -1)]));
        assert!(in_open_half_plane(&[(3, 2), (3, 2)]));
    }

    #[test]
    fn epsilon_signs() {
        let q2 = QuadField::quadratic(2).unwrap();
        assert_eq!(cone(q2, &[(1, 0), (3, 2)]).sign_epsilon().unwrap(), 1);
        assert_eq!(cone(q2, &[(-1, 0), (-3, -2)]).sign_epsilon().unwrap(), 1);
        assert_eq!(cone(q2, &[(0, 1)]).sign_epsilon().unwrap(), -1);
        assert_eq!(cone(gaussian(), &[(1, 0), (0, 1)]).sign_epsilon().unwrap(), 1);
        assert_eq!(cone(QuadField::rationals(), &[(-3, 0)]).sign_epsilon().unwrap(), -1);
        assert!(matches!(cone(q2, &[(1, 0), (1, 1)]).sign_epsilon(), Err(MdzError::NotSimple)));
    }

    #[test]
    fn enumeration_examples() {
        let pts: Vec<_> = cone(gaussian(), &[(1, 0), (0, 1)])
            .enumerate_points(2)
            .map(|r| r.unwrap().0)
            .collect();
        assert_eq!(pts, vec![el(1, 1), el(1, 2), el(2, 1), el(2, 2)]);
        let q = QuadField::rationals();
        let pts: Vec<_> = cone(q, &[(1, 0)]).enumerate_points(3).map(|r| r.unwrap().0.x).collect();
        assert_eq!(pts, vec![1, 2, 3]);
        let q2 = QuadField::quadratic(2).unwrap();
        let pts: Vec<_> = cone(q2, &[(1, 0), (3, 2)]).enumerate_points(1).map(|r| r.unwrap()).collect();
        assert_eq!(pts, vec![(el(4, 2), vec![1, 1])]);
        assert_eq!(cone(q, &[(1, 0)]).enumerate_points(0).count(), 0);
        let big = cone(q, &[(i64::MAX / 2, 0)]);
        assert!(big.enumerate_points(3).any(|r| r.is_err()));
    }

    #[test]
    fn gaussian_partition_counts() {
        let dec = fundamental_domain(gaussian()).unwrap();
        assert_eq!(dec.cones.len(), 2);
        let rep = verify_partition(&dec, 10).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.orbits_checked, 440);
    }

    #[test]
    fn missing_ray_is_reported() {
        let k = gaussian();
        let dec = ConeDecomposition::new(k, vec![cone(k, &[(1, 0), (0, 1)])]).unwrap();
        let rep = verify_partition(&dec, 2).unwrap();
        assert!(!rep.passed);
        // α = ±1, ±i all reduce to 1, which is uncovered
        assert!(rep.first_violation.iter().all(|v| v.hits == 0));
        let lone = (-2..=2)
            .flat_map(|x| (-2..=2).map(move |y| [x, y]))
            .filter(|&[x, y]| (x == 0) != (y == 0))
            .count() as u64;
        assert_eq!(rep.violations, lone);
    }

    #[test]
    fn duplicate_cone_is_reported() {
        let k = gaussian();
        let c = cone(k, &[(1, 0), (0, 1)]);
        let dec = ConeDecomposition::new(k, vec![c.clone(), cone(k, &[(1, 0)]), c]).unwrap();
        let rep = verify_partition(&dec, 2).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.first_violation.unwrap().hits, 2);
    }

    #[test]
    fn real_quadratic_decompositions_are_unimodular() {
        let q2 = QuadField::quadratic(2).unwrap();
        let dec = fundamental_domain(q2).unwrap();
        let gens: Vec<Vec<FieldElement>> = dec.cones.iter().map(|c| c.generators().to_vec()).collect();
        assert_eq!(
            gens,
            vec![vec![el(1, 0), el(2, 1)], vec![el(2, 1), el(3, 2)], vec![el(1, 0)], vec![el(2, 1)]]
        );
        let q5 = QuadField::quadratic(5).unwrap();
        let dec = fundamental_domain(q5).unwrap();
        assert_eq!(dec.cones[0].generators(), &[el(1, 0), el(1, 1)]);
        assert_eq!(dec.cones.len(), 2);
    }

    #[test]
    fn decompositions_partition_at_height_30() {
        for d in [None, Some(-1), Some(-2), Some(-3), Some(-7), Some(-11), Some(2), Some(3), Some(5), Some(6), Some(7), Some(13)] {
            let f = match d {
                None => QuadField::rationals(),
                Some(d) => QuadField::quadratic(d).unwrap(),
            };
            let dec = fundamental_domain(f).unwrap();
            for c in &dec.cones {
                assert!(c.is_unimodular() && c.is_simple(SimpleMode::Operative), "{f}: {c:?}");
            }
            let rep = verify_partition(&dec, 30).unwrap();
            assert!(rep.passed, "{f}: {rep:?}");
        }
    }

    #[test]
    fn mixed_sign_part_has_negative_epsilon() {
        let q3 = QuadField::quadratic(3).unwrap();
        let dec = fundamental_domain(q3).unwrap();
        assert!(dec.signs.contains(&-1) && dec.signs.contains(&1));
    }

    fn gaussian_gens() -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((-20i64..20, -20i64..20), 1..=2)
            .prop_filter("valid cone", |g| Cone::new(gaussian(), g.iter().map(|&(x, y)| el(x, y)).collect()).is_ok())
    }

    proptest! {
        #[test]
        fn checks_are_permutation_invariant(g in gaussian_gens(), d in prop::sample::select(vec![-1i64, -3, -7, 2, 5])) {
            let f = QuadField::quadratic(d).unwrap();
            let a = cone(f, &g);
            let mut r = g.clone();
            r.reverse();
            let b = cone(f, &r);
            prop_assert_eq!(a.is_unimodular(), b.is_unimodular());
            for m in [SimpleMode::Operative, SimpleMode::Strict] {
                prop_assert_eq!(a.is_simple(m), b.is_simple(m));
            }
        }

        #[test]
        fn epsilon_fixes_norm_sign(g in gaussian_gens(), d in prop::sample::select(vec![2i64, 3, 5, 6, 7])) {
            let f = QuadField::quadratic(d).unwrap();
            let c = cone(f, &g);
            prop_assume!(c.is_simple(SimpleMode::Operative));
            let eps = c.sign_epsilon().unwrap() as i128;
            for p in c.enumerate_points(5) {
                let (alpha, _) = p.unwrap();
                prop_assert!(eps * f.norm(alpha).unwrap() > 0);
            }
        }

        #[test]
        fn enumerated_points_are_members(g in gaussian_gens()) {
            let c = cone(gaussian(), &g);
            let pts: Vec<_> = c.enumerate_points(4).map(|p| p.unwrap().0).collect();
            prop_assert_eq!(pts.len(), 4usize.pow(c.rank() as u32));
            for p in pts {
                prop_assert!(c.contains(p));
            }
        }
    }
}
