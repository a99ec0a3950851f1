//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use mdz::oracle::*;
use mdz::verify::{brute_gaussian_eisenstein_pair, brute_gaussian_pair, brute_linear_form};
use mdz::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn el(x: i64, y: i64) -> FieldElement {
    FieldElement::new(x, y)
}

fn gaussian() -> (QuadField, Cone) {
    let k = QuadField::quadratic(-1).unwrap();
    (k, Cone::new(k, vec![el(1, 0), el(0, 1)]).unwrap())
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn within(devs: &[f64], tol: f64, extra: &str) -> Outcome {
    let worst = devs.iter().copied().fold(0.0, f64::max);
    let passed = devs.iter().all(|d| d.is_finite() && *d <= tol);
    Outcome { passed, detail: format!("max deviation {worst:.2e} (tol {tol:.0e}){extra}") }
}

fn dev(a: Result<Complex64>, b: Complex64) -> f64 {
    a.map_or(f64::INFINITY, |a| (a - b).norm())
}

fn gaussian_dedekind() -> Outcome {
    let (k, _) = gaussian();
    let start = Instant::now();
    let params = EvalParams::with_bound(2000);
    let devs: Vec<f64> = (2..=4)
        .map(|m| {
            let beta = dirichlet_l(c(m as f64), QuadraticCharacter::new(-4).unwrap()).unwrap();
            let oracle = riemann_zeta(c(m as f64)).unwrap() * beta;
            dev(dedekind_zeta_via_cones(k, m, &params).map(|r| r.value), oracle)
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let mut o = within(&devs, 1e-8, &format!(", A=2000, {secs:.2} s"));
    o.passed &= secs < 30.0;
    o
}

fn norm_power_identity() -> Outcome {
    let (k, cone) = gaussian();
    let devs: Vec<f64> = (2..=3)
        .map(|n| {
            let oracle = dedekind_zeta(k, c(n as f64)).unwrap() - riemann_zeta(c(2.0 * n as f64)).unwrap();
            dev(fm(&cone, n, &SectorPoint::zero(k), &EvalParams::with_bound(2000)).map(|r| r.value), oracle)
        })
        .collect();
    within(&devs, 1e-8, "")
}

fn real_quadratic() -> Outcome {
    let k = QuadField::quadratic(2).unwrap();
    let r = dedekind_zeta_via_cones(k, 2, &EvalParams::with_bound(2000));
    let oracle = c(PI * PI / 6.0 * PI * PI / (8.0 * 2f64.sqrt()));
    let kind = r.as_ref().map(|r| r.tail_kind).ok();
    let mut o = within(&[dev(r.map(|r| r.value), oracle)], 1e-6, &format!(", A=2000, tail {kind:?}"));
    o.passed &= kind == Some(TailKind::Extrapolated);
    o
}

fn mzv_reduction() -> Outcome {
    let p = EvalParams::with_bound(20_000);
    let z = |s: &[f64]| mzv_eval(&s.iter().map(|&x| c(x)).collect::<Vec<_>>(), &p).map(|r| r.value);
    let d1 = dev(z(&[1.0, 2.0]), riemann_zeta(c(3.0)).unwrap());
    let z2 = riemann_zeta(c(2.0)).unwrap();
    let d2 = dev(z(&[2.0, 2.0]).map(|v| 2.0 * v + riemann_zeta(c(4.0)).unwrap()), z2 * z2);
    within(&[d1, d2], 1e-9, "")
}

fn cross_path() -> Outcome {
    let q = QuadField::rationals();
    let ray = Cone::new(q, vec![el(1, 0)]).unwrap();
    let (k, g) = gaussian();
    let specs = [
        MdzvSpec::new(q, vec![ray.clone()], ExponentMatrix::from_real_rows(&[vec![2.0]]).unwrap()).unwrap(),
        MdzvSpec::new(q, vec![ray.clone(), ray], ExponentMatrix::from_real_rows(&[vec![1.0, 2.0]]).unwrap()).unwrap(),
        MdzvSpec::new(k, vec![g], ExponentMatrix::from_real_rows(&[vec![2.0], vec![2.0]]).unwrap()).unwrap(),
    ];
    let start = Instant::now();
    let devs: Vec<f64> = specs
        .iter()
        .map(|s| match (quadrature_mdzf(s), mdzv_eval(s)) {
            (Ok(a), Ok(b)) => (a.value - b.value).norm(),
            _ => f64::INFINITY,
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let mut o = within(&devs, 1e-5, &format!(", {secs:.2} s"));
    o.passed &= secs < 60.0;
    o
}

fn double_sums() -> Outcome {
    let (k, g) = gaussian();
    let params = EvalParams::with_bound(2000);
    let pair = |a: f64, b: f64| {
        let exps = ExponentMatrix::from_real_rows(&[vec![a, b], vec![a, b]]).unwrap();
        mdzv_eval(&MdzvSpec::new(k, vec![g.clone(), g.clone()], exps).unwrap().with_params(params)).map(|r| r.value)
    };
    let d1 = dev(pair(1.0, 2.0), brute_gaussian_pair(1, 2, 120).value);
    let d2 = dev(pair(2.0, 2.0), brute_gaussian_pair(2, 2, 120).value);
    within(&[d1, d2], 1e-7, "")
}

fn eisenstein() -> Outcome {
    let (k, g) = gaussian();
    let params = EvalParams::with_bound(2000);
    let d1 = dev(
        eisenstein_partial(k, &g, 4, 1, &params).map(|r| r.value),
        brute_linear_form(Complex64::new(0.0, 1.0), 4, 2000).value,
    );
    let d2 = dev(multiple_eisenstein(k, &g, 3, 3, 1, &params).map(|r| r.value), brute_gaussian_eisenstein_pair(3, 3, 100).value);
    let r2 = QuadField::quadratic(2).unwrap();
    let cone = Cone::new(r2, vec![el(1, 0), el(3, 2)]).unwrap();
    let d3 = dev(eisenstein_partial(r2, &cone, 4, 1, &params).map(|r| r.value), brute_linear_form(c(3.0 + 2.0 * 2f64.sqrt()), 4, 2000).value);
    let d4 = dev(eisenstein_partial(r2, &cone, 4, 2, &params).map(|r| r.value), brute_linear_form(c(3.0 - 2.0 * 2f64.sqrt()), 4, 2000).value);
    within(&[d1, d2, d3, d4], 1e-6, "")
}

fn partition() -> Outcome {
    let mut orbits = 0;
    let mut passed = true;
    for d in [None, Some(-1), Some(-3), Some(2), Some(5)] {
        let k = d.map_or(QuadField::rationals(), |d| QuadField::quadratic(d).unwrap());
        match fundamental_domain(k).and_then(|dec| verify_partition(&dec, 50)) {
            Ok(rep) => {
                orbits += rep.orbits_checked;
                passed &= rep.passed;
            }
            Err(_) => passed = false,
        }
    }
    Outcome { passed, detail: format!("H=50 on 5 fields, {orbits} orbits checked") }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn shuffles() -> Outcome {
    let mut counts_ok = true;
    for p in 1..=6 {
        for q in 0..=6 {
            counts_ok &= enumerate_shuffles(p, q, ShuffleVariant::All).len() == binom(p + q, p);
            counts_ok &= enumerate_shuffles(p, q, ShuffleVariant::Sh1).len() == binom(p + q - 1, p - 1);
        }
    }
    let (k, g) = gaussian();
    let params = EvalParams::with_bound(2000);
    let eval = |s: ShuffleSpec, cones: usize| {
        shuffle_to_exponents(&s)
            .and_then(|e| mdzv_eval(&MdzvSpec::new(k, vec![g.clone(); cones], e)?.with_params(params)))
            .map(|r| r.value)
    };
    // Example 1: (ω₁, dz) in both directions
    let ex1 = eval(ShuffleSpec { m: 1, copies: vec![1, 1], taus: vec![vec![1, 2]; 2] }, 1);
    let brute1 = brute_force_sum(
        &BruteSpec {
            dims: 2,
            shape: BoxShape::Positive,
            tail: power_tail(2.0, 6),
            term: |a: &[i64]| Some(c(((a[0] * a[0] + a[1] * a[1]) as f64).powi(-2))),
        },
        1000,
    );
    // Example 2, k = l = 2: (ω₁, dz, ω₂, dz)
    let ex2 = eval(ShuffleSpec { m: 2, copies: vec![2, 2], taus: vec![vec![1, 3, 2, 4]; 2] }, 2);
    let mut o = within(&[dev(ex1, brute1.value), dev(ex2, brute_gaussian_pair(2, 2, 120).value)], 1e-7, "");
    o.passed &= counts_ok;
    o.detail = format!("counts {} for p,q ≤ 6; {}", if counts_ok { "exact" } else { "WRONG" }, o.detail);
    o
}

fn random_cone(rng: &mut ChaCha8Rng, k: QuadField) -> Cone {
    if k.is_rational() {
        return Cone::new(k, vec![el(1, 0)]).unwrap();
    }
    loop {
        let mut m = [[1i64, 0], [0, 1]];
        for _ in 0..rng.random_range(0..4) {
            let s = rng.random_range(-2i64..=2);
            let (a, b) = if rng.random_bool(0.5) { (0, 1) } else { (1, 0) };
            let src = m[b];
            for (x, y) in m[a].iter_mut().zip(src) {
                *x += s * y;
            }
        }
        let rank = if rng.random_bool(0.2) { 1 } else { 2 };
        let gens: Vec<FieldElement> = (0..rank).map(|r| el(m[r][0], m[r][1])).collect();
        if let Ok(cone) = Cone::new(k, gens) {
            if cone.is_simple(SimpleMode::Operative) {
                return cone;
            }
        }
    }
}

fn tail_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fields = [None, Some(-1), Some(-3), Some(-2), Some(2), Some(5), Some(3)];
    let (mut specs, mut violations, mut rigorous, mut unbounded) = (0, 0, 0, 0);
    let mut worst = 0.0f64;
    while specs < 50 {
        let k = fields[rng.random_range(0..fields.len())].map_or(QuadField::rationals(), |d| QuadField::quadratic(d).unwrap());
        let m = rng.random_range(1..=2usize);
        let cones: Vec<Cone> = (0..m).map(|_| random_cone(&mut rng, k)).collect();
        let pair = if rng.random_range(0..3) < 2 {
            let rows: Vec<Vec<f64>> = if rng.random_bool(0.5) {
                vec![(0..m).map(|_| rng.random_range(1..=4) as f64).collect(); k.degree()]
            } else {
                (0..k.degree()).map(|_| (0..m).map(|_| rng.random_range(0..=8) as f64 * 0.5 + 0.5).collect()).collect()
            };
            let Ok(spec) = MdzvSpec::new(k, cones, ExponentMatrix::from_real_rows(&rows).unwrap()) else { continue };
            let run = |a| mdzv_eval(&spec.clone().with_params(EvalParams::with_bound(a)));
            (run(250), run(1000))
        } else {
            let t: Vec<Complex64> = (0..k.degree())
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * 0.6)
                .collect();
            let t = SectorPoint::new(t);
            let ks: Vec<u32> = (0..m).map(|_| rng.random_range(0..=2)).collect();
            let run = |a| f_multi(&cones, &ks, &t, &EvalParams::with_bound(a));
            (run(50), run(200))
        };
        let (Ok(a), Ok(b)) = pair else { continue };
        specs += 1;
        match a.tail_kind {
            TailKind::Rigorous => rigorous += 1,
            TailKind::Unbounded => unbounded += 1,
            _ => {}
        }
        let d = (a.value - b.value).norm();
        if d > a.tail_bound {
            violations += 1;
        }
        if a.tail_bound > 0.0 && a.tail_bound.is_finite() {
            worst = worst.max(d / a.tail_bound);
        }
    }
    Outcome {
        passed: violations == 0,
        detail: format!("{specs} specs ({rigorous} rigorous, {unbounded} without a finite bound), {violations} violations, max |v(A)-v(4A)|/bound {worst:.2}"),
    }
}

fn determinism() -> Outcome {
    let specs: [&[&str]; 3] = [
        &["eval", "--field", "d=-1", "--cones", "1,0;0,1", "--exp", "2;2", "--bound", "2000"],
        &["eval", "--field", "d=-1", "--cones", "1,0", "--exp", "2;2", "--bound", "2000"],
        &["eval", "--field", "d=-1", "--cones", "1,0;0,1|1,0;0,1", "--exp", "1,2;1,2", "--bound", "2000"],
    ];
    let mut identical = true;
    for args in specs {
        let outs: Vec<Vec<u8>> = ["1", "2", "8"]
            .iter()
            .map(|t| {
                Command::new(env!("CARGO_BIN_EXE_mdz"))
                    .args(["--threads", t])
                    .args(args)
                    .env_remove("MDZ_THREADS")
                    .output()
                    .map(|o| if o.status.success() { o.stdout } else { Vec::new() })
                    .unwrap_or_default()
            })
            .collect();
        identical &= !outs[0].is_empty() && outs.windows(2).all(|w| w[0] == w[1]);
    }
    Outcome { passed: identical, detail: "JSON of 3 specs at 1, 2, 8 threads".into() }
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Gaussian Dedekind zeta m=2..4 vs zeta*beta", gaussian_dedekind),
        ("f_n(N{1,i};0) = zeta_Q(i)(n) - zeta(2n), n=2,3", norm_power_identity),
        ("real quadratic zeta_Q(sqrt2)(2) vs zeta(2) L(2,chi8)", real_quadratic),
        ("MZV zeta(1,2) = zeta(3) and stuffle", mzv_reduction),
        ("quadrature = nested sum", cross_path),
        ("double sums vs brute force", double_sums),
        ("Eisenstein specializations vs brute force", eisenstein),
        ("partition of O_K - 0 modulo units", partition),
        ("shuffle counts and Examples 1, 2", shuffles),
        ("tail-bound soundness on random specs", tail_soundness),
        ("thread-count determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        if !o.passed {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {} [{:.1} s]",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
