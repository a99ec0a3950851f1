//! Nested lattice sums over cones, organised by level sets of an integer height.
//!
//! For levels `1..m` with cones `C_j` and weights `w_j`, the engine computes
//!
//! ```text
//! F_0 = δ_0,    F_j(γ) = w_j(γ) · Σ_{α ∈ C_j} F_{j−1}(γ − α)
//! ```
//!
//! and returns the shells `Σ_{h(γ) = k} F_m(γ) · exp(−Σ σ_i(γ) t_i)` for every
//! `k ≤ A`, where `h` is an integer linear form positive on every generator.
//! Each inner sum over a rank-2 cone is split into two one-directional running
//! sums, so every lattice point costs O(m) regardless of `A`.

use num_complex::Complex64;

use crate::cone::{ext_gcd, Cone};
use crate::error::{MdzError, Result};
use crate::field::{FieldElement, QuadField};
use crate::sum::CompensatedSum;

/// Largest supported height bound.
pub const MAX_BOUND: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Weight {
    One,
    /// `N(γ)^{−k}`.
    NormPow(i32),
    /// `∏_i σ_i(γ)^{−s_i}` on the principal branch.
    Powers(Vec<Complex64>),
}

#[derive(Debug, Clone)]
pub(crate) struct Level {
    pub gens: Vec<FieldElement>,
    pub weight: Weight,
}

impl Level {
    pub fn new(cone: &Cone, weight: Weight) -> Self {
        Level { gens: cone.generators().to_vec(), weight }
    }
}

/// Integer height `h(x, y) = p·x + q·y` with a transversal coordinate `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Height {
    pub p: i64,
    pub q: i64,
    /// `(x₀, y₀)` with `h(x₀, y₀) = 1`; `τ(x, y) = x₀·y − y₀·x`.
    base: (i64, i64),
    /// `(τ, h)` of the generators with extreme ratio `τ/h`.
    lo: (i64, i64),
    hi: (i64, i64),
    pub max_h: i64,
    /// `lcm` of the generator heights.
    pub period: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Height {
    fn try_new(p: i64, q: i64, gens: &[(i64, i64)]) -> Option<Height> {
        let (g, s, t) = ext_gcd(p as i128, q as i128);
        if g != 1 {
            return None;
        }
        let base = (s as i64, t as i64);
        let mut lo: Option<(i64, i64)> = None;
        let mut hi: Option<(i64, i64)> = None;
        let mut max_h = 0;
        let mut period = 1u64;
        for &(x, y) in gens {
            let h = p.checked_mul(x)?.checked_add(q.checked_mul(y)?)?;
            if h < 1 {
                return None;
            }
            let tau = base.0 * y - base.1 * x;
            // compare τ/h ratios exactly
            if lo.is_none_or(|(lt, lh)| (tau as i128) * (lh as i128) < (lt as i128) * (h as i128)) {
                lo = Some((tau, h));
            }
            if hi.is_none_or(|(ht, hh)| (tau as i128) * (hh as i128) > (ht as i128) * (h as i128)) {
                hi = Some((tau, h));
            }
            max_h = max_h.max(h);
            period = period / gcd(period, h as u64) * h as u64;
        }
        Some(Height { p, q, base, lo: lo?, hi: hi?, max_h, period })
    }

    fn width(&self) -> f64 {
        self.hi.0 as f64 / self.hi.1 as f64 - self.lo.0 as f64 / self.lo.1 as f64
    }

    pub fn of(&self, g: FieldElement) -> i64 {
        self.p * g.x + self.q * g.y
    }

    pub fn tau(&self, g: FieldElement) -> i64 {
        self.base.0 * g.y - self.base.1 * g.x
    }

    /// Inclusive `τ` range of the closed cone on the level set `h = k`.
    fn range(&self, k: i64) -> (i64, i64) {
        let lo = -(-(k * self.lo.0)).div_euclid(self.lo.1);
        let hi = (k * self.hi.0).div_euclid(self.hi.1);
        (lo, hi)
    }

    fn point(&self, k: i64, tau: i64) -> FieldElement {
        FieldElement::new(k * self.base.0 - tau * self.q, k * self.base.1 + tau * self.p)
    }
}

/// Best height for the union of generators, or `None` when they do not lie in
/// an open half-plane. Prefers small period, then small maximal height, then
/// narrow level sets.
pub(crate) fn choose_height(levels: &[Level]) -> Option<Height> {
    let gens: Vec<(i64, i64)> = levels.iter().flat_map(|l| l.gens.iter().map(|g| (g.x, g.y))).collect();
    let mut candidates: Vec<(i64, i64)> = Vec::new();
    for l in levels {
        if let [a, b] = l.gens.as_slice() {
            // equal height on both generators
            let (dx, dy) = (a.x - b.x, a.y - b.y);
            candidates.push((dy, -dx));
            candidates.push((-dy, dx));
        }
        for g in &l.gens {
            let (_, s, t) = ext_gcd(g.x as i128, g.y as i128);
            for c in -3..=3i64 {
                candidates.push((s as i64 - c * g.y, t as i64 + c * g.x));
            }
        }
    }
    for p in -6..=6 {
        for q in -6..=6 {
            candidates.push((p, q));
        }
    }
    let mut best: Option<Height> = None;
    for (p, q) in candidates {
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        if g == 0 {
            continue;
        }
        let Some(h) = Height::try_new(p / g, q / g, &gens) else { continue };
        let better = match &best {
            None => true,
            Some(b) => (h.period, h.max_h, h.width()) < (b.period, b.max_h, b.width()),
        };
        if better {
            best = Some(h);
        }
    }
    best
}

/// Shell sums `shells[k]` for `k = 0..=A`.
#[derive(Debug, Clone)]
pub(crate) struct Shells {
    pub shells: Vec<Complex64>,
    /// `Σ |term|` over all terms.
    pub abs_total: f64,
    pub points: u64,
    pub height: Height,
}

impl Shells {
    /// Cumulative sums `S(K) = Σ_{k ≤ K} shells[k]`, compensated.
    pub fn partial_sums(&self) -> Vec<Complex64> {
        let mut acc = CompensatedSum::new();
        self.shells
            .iter()
            .map(|&s| {
                acc.add(s);
                acc.value()
            })
            .collect()
    }
}

/// A nested sum over levels sharing one ambient lattice.
#[derive(Debug, Clone)]
pub(crate) struct LatticeSum {
    pub field: QuadField,
    pub levels: Vec<Level>,
    /// Optional `t`, giving the factor `exp(−Σ σ_i(γ) t_i)` on the final level.
    pub decay: Option<Vec<Complex64>>,
}

struct Diag {
    k: i64,
    lo: i64,
    width: usize,
    vals: Vec<Complex64>,
}

enum Slot {
    Rank1 { r: usize, f: usize, h: i64, tau: i64 },
    Rank2 { p: usize, q: usize, f: usize, h1: i64, t1: i64, h2: i64, t2: i64 },
}

impl Slot {
    fn f(&self) -> usize {
        match *self {
            Slot::Rank1 { f, .. } | Slot::Rank2 { f, .. } => f,
        }
    }
}

#[cfg(feature = "parallel")]
fn fill<F>(buf: &mut [Complex64], stride: usize, f: F)
where
    F: Fn(usize, &mut [Complex64]) + Sync + Send,
{
    use rayon::prelude::*;
    buf.par_chunks_mut(stride).with_min_len(256).enumerate().for_each(|(i, c)| f(i, c));
}

#[cfg(not(feature = "parallel"))]
fn fill<F>(buf: &mut [Complex64], stride: usize, f: F)
where
    F: Fn(usize, &mut [Complex64]),
{
    buf.chunks_mut(stride).enumerate().for_each(|(i, c)| f(i, c));
}

fn is_integral(s: Complex64) -> Option<i32> {
    (s.im == 0.0 && s.re.fract() == 0.0 && s.re.abs() < 1e6).then_some(s.re as i32)
}

impl LatticeSum {
    fn weight(&self, w: &Weight, g: FieldElement, sig: &[Complex64]) -> Complex64 {
        match w {
            Weight::One => Complex64::new(1.0, 0.0),
            Weight::NormPow(k) => {
                let n = self.field.norm(g).expect("norm of a bounded element fits in i128") as f64;
                Complex64::new(n.powi(-k), 0.0)
            }
            Weight::Powers(s) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for (&si, &z) in s.iter().zip(sig) {
                    if si == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    acc *= match is_integral(si) {
                        Some(k) => z.powi(-k),
                        None => (-si * z.ln()).exp(),
                    };
                }
                acc
            }
        }
    }

    /// Shells for all heights up to `bound`, with the chosen height.
    pub fn shells(&self, bound: u64) -> Result<Shells> {
        let height = choose_height(&self.levels).ok_or_else(|| {
            MdzError::Divergent("cone generators do not lie in a common open half-plane".into())
        })?;
        self.shells_with(height, bound)
    }

    pub fn shells_with(&self, height: Height, bound: u64) -> Result<Shells> {
        if bound > MAX_BOUND {
            return Err(MdzError::InvalidSpec(format!("bound {bound} exceeds {MAX_BOUND}")));
        }
        if self.levels.is_empty() {
            return Err(MdzError::InvalidSpec("no levels".into()));
        }
        let mut slots = Vec::new();
        let mut stride = 0;
        for l in &self.levels {
            match l.gens.as_slice() {
                [e] => {
                    slots.push(Slot::Rank1 { r: stride, f: stride + 1, h: height.of(*e), tau: height.tau(*e) });
                    stride += 2;
                }
                [a, b] => {
                    slots.push(Slot::Rank2 {
                        p: stride,
                        q: stride + 1,
                        f: stride + 2,
                        h1: height.of(*a),
                        t1: height.tau(*a),
                        h2: height.of(*b),
                        t2: height.tau(*b),
                    });
                    stride += 3;
                }
                _ => return Err(MdzError::InvalidSpec("levels must have rank 1 or 2".into())),
            }
        }
        let out = stride;
        stride += 1;
        let cap = height.max_h as usize + 1;
        let mut ring: Vec<Diag> = (0..cap).map(|_| Diag { k: -1, lo: 0, width: 0, vals: Vec::new() }).collect();
        let omega = self.field.omega_embeddings();
        let degree = self.field.degree();
        let zero = Complex64::new(0.0, 0.0);
        let mut shells = Vec::with_capacity(bound as usize + 1);
        let mut abs_total = 0.0;
        let mut points = 0u64;

        for k in 0..=bound as i64 {
            let (lo, hi) = height.range(k);
            let width = (hi - lo + 1).max(0) as usize;
            points += (width * self.levels.len()) as u64;
            let mut vals = std::mem::take(&mut ring[k as usize % cap].vals);
            vals.clear();
            vals.resize(width * stride, zero);
            {
                let ring = &ring;
                let get = |kk: i64, tt: i64, a: usize| -> Complex64 {
                    if kk < 0 {
                        return zero;
                    }
                    let d = &ring[kk as usize % cap];
                    debug_assert_eq!(d.k, kk);
                    let i = tt - d.lo;
                    if i < 0 || i as usize >= d.width {
                        zero
                    } else {
                        d.vals[i as usize * stride + a]
                    }
                };
                let prev_f = |l: usize, kk: i64, tt: i64| -> Complex64 {
                    if l == 0 {
                        if kk == 0 && tt == 0 {
                            Complex64::new(1.0, 0.0)
                        } else {
                            zero
                        }
                    } else {
                        get(kk, tt, slots[l - 1].f())
                    }
                };
                fill(&mut vals, stride, |i, cell| {
                    let tau = lo + i as i64;
                    let g = height.point(k, tau);
                    let mut sig: Option<[Complex64; 2]> = None;
                    let mut sigma = || {
                        *sig.get_or_insert_with(|| {
                            let base = Complex64::new(g.x as f64, 0.0);
                            [base + omega[0] * g.y as f64, base + omega[1] * g.y as f64]
                        })
                    };
                    for (l, slot) in slots.iter().enumerate() {
                        let acc = match *slot {
                            Slot::Rank1 { r, h, tau: te, .. } => {
                                let v = prev_f(l, k - h, tau - te) + get(k - h, tau - te, r);
                                cell[r] = v;
                                v
                            }
                            Slot::Rank2 { p, q, h1, t1, h2, t2, .. } => {
                                let pv = prev_f(l, k - h1, tau - t1) + get(k - h1, tau - t1, p);
                                cell[p] = pv;
                                let qv = get(k - h2, tau - t2, p) + get(k - h2, tau - t2, q);
                                cell[q] = qv;
                                qv
                            }
                        };
                        cell[slot.f()] = if acc == zero {
                            zero
                        } else {
                            let s = sigma();
                            acc * self.weight(&self.levels[l].weight, g, &s[..degree])
                        };
                    }
                    let fm = cell[slots.last().unwrap().f()];
                    cell[out] = match &self.decay {
                        Some(t) if fm != zero => {
                            let s = sigma();
                            let e: Complex64 = s[..degree].iter().zip(t).map(|(z, t)| z * t).sum();
                            fm * (-e).exp()
                        }
                        _ => fm,
                    };
                });
            }
            let shell: CompensatedSum = vals.chunks(stride).map(|c| c[out]).collect();
            abs_total += shell.abs_sum();
            shells.push(shell.value());
            ring[k as usize % cap] = Diag { k, lo, width, vals };
        }
        Ok(Shells { shells, abs_total, points, height })
    }
}
