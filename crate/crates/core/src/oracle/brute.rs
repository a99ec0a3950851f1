//! Direct nested loops over coefficient boxes, kept apart from the cone
//! machinery: shells are indexed by `max |a_j|` and the limit comes from a
//! least-squares fit of the shell partial sums.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxShape {
    /// Every coordinate in `[1, B]`.
    Positive,
    /// Every coordinate in `[−B, B]`.
    Symmetric,
}

/// A sum `Σ term(a)` over integer vectors `a`; `term` returns `None` to skip a point.
pub struct BruteSpec<F> {
    pub dims: usize,
    pub shape: BoxShape,
    pub term: F,
    /// Tail model `Σ c_{p,l} B^{−p} log^l B` used for extrapolation.
    pub tail: Vec<(f64, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteResult {
    /// Extrapolated limit.
    pub value: Complex64,
    /// Plain box sum at the bound.
    pub raw: Complex64,
    /// Change of the extrapolated limit between `B/2` and `B`.
    pub tail_estimate: f64,
    pub terms: u64,
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    s: Complex64,
    c: Complex64,
}

impl Kahan {
    fn push(&mut self, x: Complex64) {
        let y = x - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }
}

fn slab<F>(spec: &BruteSpec<F>, bound: i64, first: i64) -> (Vec<Kahan>, u64)
where
    F: Fn(&[i64]) -> Option<Complex64>,
{
    let lo = match spec.shape {
        BoxShape::Positive => 1,
        BoxShape::Symmetric => -bound,
    };
    let mut shells = vec![Kahan::default(); bound as usize + 1];
    let mut count = 0;
    let mut a = vec![lo; spec.dims];
    a[0] = first;
    loop {
        if let Some(v) = (spec.term)(&a) {
            let m = a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
            shells[m as usize].push(v);
            count += 1;
        }
        let mut k = spec.dims;
        loop {
            if k == 1 {
                return (shells, count);
            }
            k -= 1;
            if a[k] < bound {
                a[k] += 1;
                break;
            }
            a[k] = lo;
        }
    }
}

#[cfg(feature = "parallel")]
fn slabs<F>(spec: &BruteSpec<F>, bound: i64, firsts: Vec<i64>) -> Vec<(Vec<Kahan>, u64)>
where
    F: Fn(&[i64]) -> Option<Complex64> + Sync,
{
    use rayon::prelude::*;
    firsts.into_par_iter().map(|f| slab(spec, bound, f)).collect()
}

#[cfg(not(feature = "parallel"))]
fn slabs<F>(spec: &BruteSpec<F>, bound: i64, firsts: Vec<i64>) -> Vec<(Vec<Kahan>, u64)>
where
    F: Fn(&[i64]) -> Option<Complex64> + Sync,
{
    firsts.into_iter().map(|f| slab(spec, bound, f)).collect()
}

/// Fit `S(B) = S∞ + Σ c B^{−p} log^l B` on eleven bounds `≤ top`.
fn limit(cumulative: &[Complex64], top: usize, tail: &[(f64, u32)]) -> Complex64 {
    let samples = tail.len() + 5;
    let mut ks: Vec<usize> = Vec::with_capacity(samples);
    let mut k = top as f64;
    while ks.len() < samples {
        let kk = k.round() as usize;
        if ks.last() != Some(&kk) {
            ks.push(kk);
        }
        k *= 0.88;
    }
    let mut m = DMatrix::<f64>::zeros(samples, tail.len() + 1);
    for (r, &k) in ks.iter().enumerate() {
        let lk = (k as f64).ln();
        m[(r, 0)] = 1.0;
        for (c, &(p, l)) in tail.iter().enumerate() {
            m[(r, c + 1)] = (-p * lk).exp() * lk.powi(l as i32) * (top as f64).powf(p);
        }
    }
    let svd = m.svd(true, true);
    let re = DMatrix::from_iterator(samples, 1, ks.iter().map(|&k| cumulative[k].re));
    let im = DMatrix::from_iterator(samples, 1, ks.iter().map(|&k| cumulative[k].im));
    let x_re = svd.solve(&re, 1e-15).expect("svd solve");
    let x_im = svd.solve(&im, 1e-15).expect("svd solve");
    Complex64::new(x_re[0], x_im[0])
}

pub fn brute_force_sum<F>(spec: &BruteSpec<F>, bound: u64) -> BruteResult
where
    F: Fn(&[i64]) -> Option<Complex64> + Sync,
{
    assert!(spec.dims >= 1 && bound >= 1);
    let b = bound as i64;
    let firsts: Vec<i64> = match spec.shape {
        BoxShape::Positive => (1..=b).collect(),
        BoxShape::Symmetric => (-b..=b).collect(),
    };
    let parts = slabs(spec, b, firsts);
    let mut shells = vec![Kahan::default(); bound as usize + 1];
    let mut terms = 0;
    for (part, count) in parts {
        terms += count;
        for (acc, s) in shells.iter_mut().zip(part) {
            acc.push(s.s);
        }
    }
    let mut run = Kahan::default();
    let cumulative: Vec<Complex64> = shells
        .iter()
        .map(|s| {
            run.push(s.s);
            run.s
        })
        .collect();
    let raw = cumulative[bound as usize];
    let top = bound as usize;
    let min_top = 4 * (spec.tail.len() + 5);
    if spec.tail.is_empty() || top < 2 * min_top {
        return BruteResult { value: raw, raw, tail_estimate: f64::INFINITY, terms };
    }
    let full = limit(&cumulative, top, &spec.tail);
    let half = limit(&cumulative, top / 2, &spec.tail);
    BruteResult { value: full, raw, tail_estimate: (full - half).norm(), terms }
}

/// `[(p₀, 0), (p₀ + 1, 0), …]`, `count` entries.
pub fn power_tail(p0: f64, count: usize) -> Vec<(f64, u32)> {
    (0..count).map(|k| (p0 + k as f64, 0)).collect()
}

/// `[(p₀, 1), (p₀, 0), (p₀ + 1, 1), (p₀ + 1, 0), …]`, `count` entries.
pub fn log_tail(p0: f64, count: usize) -> Vec<(f64, u32)> {
    (0..count).map(|k| (p0 + (k / 2) as f64, 1 - (k % 2) as u32)).collect()
}
