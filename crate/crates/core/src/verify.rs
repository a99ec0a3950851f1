//! Verification suites: every library path against an independent reference.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::cone::{fundamental_domain, Cone};
use crate::error::{MdzError, Result};
use crate::field::{FieldElement, QuadField};
use crate::mdzv::{
    eisenstein_kronecker, eisenstein_partial, mdzv_eval, multiple_eisenstein, mzv_eval, shuffle_to_exponents,
    ExponentMatrix, MdzvSpec, ShuffleSpec,
};
use crate::oracle::{
    brute_force_sum, dedekind_zeta, log_tail, power_tail, quadrature_mdzf, riemann_zeta, simplex_volume_check, BoxShape,
    BruteSpec, QuadratureGrid,
};
use crate::series::{dedekind_zeta_via_cones, fm, EvalParams, SectorPoint};
use crate::verify_partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Oracles,
    Partition,
    Quadrature,
    All,
}

impl std::str::FromStr for Suite {
    type Err = MdzError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracles" => Ok(Suite::Oracles),
            "partition" => Ok(Suite::Partition),
            "quadrature" => Ok(Suite::Quadrature),
            "all" => Ok(Suite::All),
            _ => Err(MdzError::Parse(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seconds: f64,
}

struct Runner {
    rows: Vec<CheckRow>,
    suite: &'static str,
}

impl Runner {
    fn check(&mut self, name: impl Into<String>, tolerance: f64, f: impl FnOnce() -> Result<(Complex64, Complex64)>) {
        let start = Instant::now();
        let (value, reference, deviation) = match f() {
            Ok((v, r)) => (v, r, (v - r).norm()),
            Err(_) => (Complex64::new(f64::NAN, 0.0), Complex64::new(f64::NAN, 0.0), f64::INFINITY),
        };
        let show = |z: Complex64| if z.im.abs() > z.re.abs() { z.im } else { z.re };
        self.rows.push(CheckRow {
            suite: self.suite,
            name: name.into(),
            value: show(value),
            reference: show(reference),
            deviation,
            tolerance,
            passed: deviation <= tolerance,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn el(x: i64, y: i64) -> FieldElement {
    FieldElement::new(x, y)
}

fn gaussian() -> (QuadField, Cone) {
    let k = QuadField::quadratic(-1).expect("squarefree");
    (k, Cone::new(k, vec![el(1, 0), el(0, 1)]).expect("valid cone"))
}

/// `Σ_{a ∈ [1,B]^4} N(α)^{−k} N(α+β)^{−l}` over `ℕ{1,i}²`, `α = a₀ + a₁i`, `β = a₂ + a₃i`.
pub fn brute_gaussian_pair(k: i32, l: i32, bound: u64) -> crate::oracle::BruteResult {
    let tail = if k == 1 { log_tail(2.0, 6) } else { power_tail(2.0, 6) };
    let spec = BruteSpec {
        dims: 4,
        shape: BoxShape::Positive,
        tail,
        term: move |a: &[i64]| {
            let n1 = (a[0] * a[0] + a[1] * a[1]) as f64;
            let (x, y) = (a[0] + a[2], a[1] + a[3]);
            let n2 = (x * x + y * y) as f64;
            Some(c(n1.powi(-k) * n2.powi(-l)))
        },
    };
    brute_force_sum(&spec, bound)
}

/// `Σ_{a ∈ [1,B]^4} (a₀ + a₁i)^{−k} (a₀ + a₂ + (a₁ + a₃)i)^{−l}` for `k, l ≥ 3`.
pub fn brute_gaussian_eisenstein_pair(k: i32, l: i32, bound: u64) -> crate::oracle::BruteResult {
    let mut tail = vec![(1.0, 0)];
    tail.extend(log_tail(2.0, 6));
    let spec = BruteSpec {
        dims: 4,
        shape: BoxShape::Positive,
        tail,
        term: move |a: &[i64]| {
            let z1 = Complex64::new(a[0] as f64, a[1] as f64);
            let z2 = Complex64::new((a[0] + a[2]) as f64, (a[1] + a[3]) as f64);
            Some(z1.powi(-k) * z2.powi(-l))
        },
    };
    brute_force_sum(&spec, bound)
}

/// `Σ_{a,b ≥ 1} (a + b·w)^{−k}` for a fixed complex `w`.
pub fn brute_linear_form(w: Complex64, k: i32, bound: u64) -> crate::oracle::BruteResult {
    let spec = BruteSpec {
        dims: 2,
        shape: BoxShape::Positive,
        tail: power_tail(2.0, 6),
        term: move |a: &[i64]| Some((a[0] as f64 + a[1] as f64 * w).powi(-k)),
    };
    brute_force_sum(&spec, bound)
}

fn oracles(r: &mut Runner, quick: bool) {
    let a = EvalParams::with_bound(if quick { 1000 } else { 2000 });
    let (qi, gc) = gaussian();
    for m in 2..=4 {
        r.check(format!("zeta_Q(i)({m}) = zeta({m}) beta({m})"), 1e-8, || {
            Ok((dedekind_zeta_via_cones(qi, m, &a)?.value, dedekind_zeta(qi, c(m as f64))?))
        });
    }
    for n in 2..=3 {
        r.check(format!("f_{n}(N{{1,i}}; 0) = zeta_Q(i)({n}) - zeta({})", 2 * n), 1e-8, || {
            let v = fm(&gc, n, &SectorPoint::zero(qi), &a)?.value;
            Ok((v, dedekind_zeta(qi, c(n as f64))? - riemann_zeta(c(2.0 * n as f64))?))
        });
    }
    for d in [-3, 2, 5] {
        let k = QuadField::quadratic(d).expect("squarefree");
        let tol = if d > 0 { 1e-6 } else { 1e-8 };
        for m in 2..=if quick { 2 } else { 4 } {
            r.check(format!("zeta_{k}({m}) = zeta({m}) L({m}, chi)"), tol, || {
                Ok((dedekind_zeta_via_cones(k, m, &a)?.value, dedekind_zeta(k, c(m as f64))?))
            });
        }
    }
    r.check("zeta_Q(2)", 1e-9, || {
        Ok((dedekind_zeta_via_cones(QuadField::rationals(), 2, &a)?.value, c(PI * PI / 6.0)))
    });
    let mzv = EvalParams::with_bound(20_000);
    r.check("zeta(1,2) = zeta(3)", 1e-9, || Ok((mzv_eval(&[c(1.0), c(2.0)], &mzv)?.value, riemann_zeta(c(3.0))?)));
    r.check("2 zeta(2,2) + zeta(4) = zeta(2)^2", 1e-9, || {
        let z22 = mzv_eval(&[c(2.0), c(2.0)], &mzv)?.value;
        let z2 = riemann_zeta(c(2.0))?;
        Ok((2.0 * z22 + riemann_zeta(c(4.0))?, z2 * z2))
    });
    let b4 = if quick { 100 } else { 120 };
    let pair = |k: f64, l: f64| -> Result<Complex64> {
        let exps = ExponentMatrix::from_real_rows(&[vec![k, l], vec![k, l]])?;
        Ok(mdzv_eval(&MdzvSpec::new(qi, vec![gc.clone(), gc.clone()], exps)?.with_params(a))?.value)
    };
    r.check("zeta^Cone_Q(i)(1,2) vs brute force", 1e-7, || Ok((pair(1.0, 2.0)?, brute_gaussian_pair(1, 2, b4).value)));
    r.check("Eisenstein-Kronecker (2,2) vs brute force", 1e-7, || {
        Ok((eisenstein_kronecker(qi, &gc, 2, 2, &a)?.value, brute_gaussian_pair(2, 2, b4).value))
    });
    r.check("Example 2 via shuffle (w1, dz, w2, dz) vs brute force", 1e-7, || {
        let s = ShuffleSpec { m: 2, copies: vec![2, 2], taus: vec![vec![1, 3, 2, 4]; 2] };
        let spec = MdzvSpec::new(qi, vec![gc.clone(), gc.clone()], shuffle_to_exponents(&s)?)?.with_params(a);
        Ok((mdzv_eval(&spec)?.value, brute_gaussian_pair(2, 2, b4).value))
    });
    r.check("Example 1 via shuffle (w1, dz) vs brute force", 1e-7, || {
        let s = ShuffleSpec { m: 1, copies: vec![1, 1], taus: vec![vec![1, 2]; 2] };
        let spec = MdzvSpec::new(qi, vec![gc.clone()], shuffle_to_exponents(&s)?)?.with_params(a);
        let brute = brute_force_sum(
            &BruteSpec {
                dims: 2,
                shape: BoxShape::Positive,
                tail: power_tail(2.0, 6),
                term: |x: &[i64]| Some(c(((x[0] * x[0] + x[1] * x[1]) as f64).powi(-2))),
            },
            1000,
        );
        Ok((mdzv_eval(&spec)?.value, brute.value))
    });
    r.check("Eisenstein k=4 on N{1,i} vs brute force", 1e-6, || {
        Ok((eisenstein_partial(qi, &gc, 4, 1, &a)?.value, brute_linear_form(Complex64::new(0.0, 1.0), 4, 2000).value))
    });
    r.check("multiple Eisenstein k=l=3 on N{1,i} vs brute force", 1e-6, || {
        Ok((multiple_eisenstein(qi, &gc, 3, 3, 1, &a)?.value, brute_gaussian_eisenstein_pair(3, 3, 100).value))
    });
    let r2 = QuadField::quadratic(2).expect("squarefree");
    let cone = Cone::new(r2, vec![el(1, 0), el(3, 2)]).expect("valid cone");
    for (i, w) in [(1, 3.0 + 2.0 * 2f64.sqrt()), (2, 3.0 - 2.0 * 2f64.sqrt())] {
        r.check(format!("Q(sqrt2) N{{1,3+2sqrt2}} k=4 embedding {i} vs brute force"), 1e-6, || {
            Ok((eisenstein_partial(r2, &cone, 4, i, &a)?.value, brute_linear_form(c(w), 4, 2000).value))
        });
    }
}

fn partition(r: &mut Runner, quick: bool) {
    let height = if quick { 20 } else { 50 };
    for d in [None, Some(-1), Some(-3), Some(2), Some(5)] {
        let k = match d {
            None => QuadField::rationals(),
            Some(d) => QuadField::quadratic(d).expect("squarefree"),
        };
        r.check(format!("partition {k} at H={height}"), 0.0, || {
            let rep = verify_partition(&fundamental_domain(k)?, height)?;
            Ok((c(rep.violations as f64), c(0.0)))
        });
    }
}

fn quadrature(r: &mut Runner, quick: bool) {
    let q = QuadField::rationals();
    let ray = Cone::new(q, vec![el(1, 0)]).expect("valid cone");
    let (qi, gc) = gaussian();
    let mut specs = vec![
        ("Q zeta(2)", q, vec![ray.clone()], vec![vec![2.0]]),
        ("Q zeta(1,2)", q, vec![ray.clone(), ray.clone()], vec![vec![1.0, 2.0]]),
        ("Q(i) s=[[2],[2]]", qi, vec![gc.clone()], vec![vec![2.0], vec![2.0]]),
    ];
    if !quick {
        specs.push(("Q(i) s=[[1,2],[1,2]]", qi, vec![gc.clone(), gc.clone()], vec![vec![1.0, 2.0], vec![1.0, 2.0]]));
    }
    for (name, k, cones, rows) in specs {
        r.check(format!("quadrature = sum, {name}"), 1e-5, || {
            let spec = MdzvSpec::new(k, cones, ExponentMatrix::from_real_rows(&rows)?)?;
            Ok((quadrature_mdzf(&spec)?.value, mdzv_eval(&spec)?.value))
        });
    }
    for (n, a, b) in [(2u32, 0.0f64, 1.0), (3, 0.0, 1.0), (1, 2.0, 5.0), (6, -1.0, 2.0)] {
        let exact = (b - a).powi(n as i32) / (1..=n).product::<u32>() as f64;
        r.check(format!("simplex volume n={n} on [{a}, {b}]"), 1e-3 * exact, || {
            Ok((c(simplex_volume_check(n, a, b)), c(exact)))
        });
    }
    r.check("grid calibration: integral of exp(-u)", 1e-10, || {
        Ok((c(1.0 + QuadratureGrid::for_dimension(4).calibration_error()), c(1.0)))
    });
}

/// Runs `suite`; `quick` lowers bounds and drops the slowest checks.
pub fn run_suite(suite: Suite, quick: bool) -> Vec<CheckRow> {
    let mut r = Runner { rows: Vec::new(), suite: "" };
    if matches!(suite, Suite::Oracles | Suite::All) {
        r.suite = "oracles";
        oracles(&mut r, quick);
    }
    if matches!(suite, Suite::Partition | Suite::All) {
        r.suite = "partition";
        partition(&mut r, quick);
    }
    if matches!(suite, Suite::Quadrature | Suite::All) {
        r.suite = "quadrature";
        quadrature(&mut r, quick);
    }
    r.rows
}
