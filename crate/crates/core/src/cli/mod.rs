//! The `mdz` command line: `field`, `cone`, `eval`, `verify`, `decompose`.
//!
//! Exit codes: 0 success, 1 parse error or failed check, 2 refused spec
//! (divergent, branch cut, not simple, sector, pole), 3 evaluated but the tail
//! bound exceeds the tolerance.

pub mod config;
pub mod literal;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::cone::{fundamental_domain, verify_partition, Cone, SimpleMode};
use crate::error::{MdzError, Result};
use crate::field::{FieldElement, QuadField};
use crate::mdzv::{mdzv_eval, MdzvSpec};
use crate::series::{EvalParams, SumResult, TailKind};
use crate::verify::{run_suite, CheckRow, Suite};
pub use config::{OutputFormat, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mdz", version, about = "Multiple Dedekind zeta values over Q and quadratic fields")]
struct Cli {
    /// INI file with key=value defaults (field, cones, exp, bound, tol, threads, format, mode).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; defaults to MDZ_THREADS, then to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct SpecArgs {
    /// `Q` or `d=<squarefree integer>`.
    #[arg(long)]
    field: Option<String>,
    /// Cones separated by `|`, generators by `;`, coordinates by `,`.
    #[arg(long)]
    cones: Option<String>,
    /// Exponent matrix: rows (embeddings) by `;`, columns (cones) by `,`.
    #[arg(long = "exp")]
    exponents: Option<String>,
    /// Height bound A.
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// `sum` or `quadrature`.
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arithmetic data of a field.
    Field {
        #[arg(long)]
        field: Option<String>,
    },
    /// Unimodularity, simplicity, sign and sectors of a cone.
    Cone {
        #[arg(long)]
        field: Option<String>,
        /// Generators `x,y;x,y`.
        #[arg(long)]
        gens: String,
    },
    /// Evaluate a nested cone sum.
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        /// Label for the CSV `spec_id` column.
        #[arg(long, default_value = "eval")]
        id: String,
    },
    /// Run a verification suite: oracles, partition, quadrature or all.
    Verify {
        suite: String,
        #[arg(long)]
        quick: bool,
    },
    /// Fundamental domain of the nonzero integers modulo units.
    Decompose {
        #[arg(long)]
        field: Option<String>,
        /// Also check the partition property up to this height.
        #[arg(long)]
        check: Option<u64>,
    },
}

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if x.is_finite() && x != 0.0 {
        format!("{x:.14e}").parse().expect("formatted float parses")
    } else {
        x
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(sig15(x)).map_or(Value::Null, Value::Number)
}

fn fmt15(x: f64) -> String {
    let r = sig15(x);
    if !x.is_finite() || r == 0.0 || (1e-4..1e15).contains(&r.abs()) {
        r.to_string()
    } else {
        format!("{r:e}")
    }
}

fn element_json(e: FieldElement) -> Value {
    json!([e.x, e.y])
}

fn complex_json(z: num_complex::Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn exit_code(e: &MdzError) -> i32 {
    if e.is_precheck_refusal() {
        EXIT_REFUSED
    } else {
        EXIT_FAILURE
    }
}

struct Ctx<'a> {
    config: RunConfig,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, v: &Value, text: impl FnOnce() -> String) -> std::io::Result<()> {
        match self.config.format {
            OutputFormat::Json | OutputFormat::Csv => writeln!(self.out, "{}", serde_json::to_string_pretty(v)?),
            OutputFormat::Text => write!(self.out, "{}", text()),
        }
    }
}

fn field_or(config: &RunConfig, flag: &Option<String>) -> Result<QuadField> {
    match flag {
        Some(s) => literal::parse_field(s),
        None => Ok(config.field),
    }
}

fn cmd_field(ctx: &mut Ctx, field: QuadField) -> Result<i32> {
    let mut v = json!({
        "field": field.to_string(),
        "degree": field.degree(),
        "signature": format!("{:?}", field.signature()).to_lowercase(),
        "discriminant": field.discriminant(),
        "basis": format!("{:?}", field.basis_kind()).to_lowercase(),
        "class_number": field.class_number()?,
        "roots_of_unity": field.roots_of_unity().into_iter().map(element_json).collect::<Vec<_>>(),
    });
    if !field.is_rational() {
        v["omega_embeddings"] = Value::Array(field.omega_embeddings().iter().map(|&z| complex_json(z)).collect());
    }
    if field.is_real_quadratic() {
        v["fundamental_unit"] = element_json(field.fundamental_unit()?);
        v["totally_positive_unit"] = element_json(field.totally_positive_unit()?);
    }
    ctx.emit(&v, || {
        let mut s = String::new();
        for (k, val) in v.as_object().expect("object") {
            s += &format!("{k}: {val}\n");
        }
        s
    })
    .map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_cone(ctx: &mut Ctx, field: QuadField, gens: &str) -> Result<i32> {
    let cone = Cone::new(field, literal::parse_generators(gens)?)?;
    let sectors: Vec<Value> = (1..=field.degree())
        .map(|i| cone.sector_arc(i).map_or(Value::Null, |(lo, hi)| json!([num(lo), num(hi)])))
        .collect();
    let v = json!({
        "field": field.to_string(),
        "generators": cone.generators().iter().map(|&g| element_json(g)).collect::<Vec<_>>(),
        "rank": cone.rank(),
        "unimodular": cone.is_unimodular(),
        "simple_operative": cone.is_simple(SimpleMode::Operative),
        "simple_strict": cone.is_simple(SimpleMode::Strict),
        "epsilon": cone.sign_epsilon().ok(),
        "sectors": sectors,
    });
    ctx.emit(&v, || {
        let mut s = String::new();
        for (k, val) in v.as_object().expect("object") {
            s += &format!("{k}: {val}\n");
        }
        s
    })
    .map_err(io_err)?;
    Ok(EXIT_OK)
}

fn io_err(e: std::io::Error) -> MdzError {
    MdzError::Parse(format!("output: {e}"))
}

fn tail_kind_name(k: TailKind) -> &'static str {
    match k {
        TailKind::Rigorous => "rigorous",
        TailKind::Extrapolated => "extrapolated",
        TailKind::Quadrature => "quadrature",
        TailKind::Unbounded => "unbounded",
    }
}

/// Machine-readable form of an evaluation. Keys are sorted and numbers carry
/// 15 significant digits; no timing is included so output is reproducible.
pub fn eval_json(config: &RunConfig, r: &SumResult) -> Value {
    json!({
        "value_re": num(r.value.re),
        "value_im": num(r.value.im),
        "tail_bound": num(r.tail_bound),
        "tail_kind": tail_kind_name(r.tail_kind),
        "terms_used": r.terms_used,
        "converged": r.converged,
        "spec": {
            "field": literal::format_field(config.field),
            "cones": literal::format_cones(config.field, &config.cones),
            "exp": config.exponents.as_ref().map(literal::format_exponents),
            "bound": config.bound,
            "tol": num(config.tol),
            "mode": match config.mode { crate::mdzv::EvalMode::Sum => "sum", crate::mdzv::EvalMode::Quadrature => "quadrature" },
        },
    })
}

fn cmd_eval(ctx: &mut Ctx, id: &str) -> Result<i32> {
    let cfg = &ctx.config;
    let exps = cfg.exponents.clone().ok_or_else(|| MdzError::Parse("--exp is required".into()))?;
    if cfg.cones.is_empty() {
        return Err(MdzError::Parse("--cones is required".into()));
    }
    let cones = cfg.cones.iter().map(|g| Cone::new(cfg.field, g.clone())).collect::<Result<Vec<_>>>()?;
    let params = EvalParams { bound: cfg.bound, tol: cfg.tol };
    let spec = MdzvSpec::new(cfg.field, cones, exps)?.with_params(params).with_mode(cfg.mode);
    let start = Instant::now();
    let r = mdzv_eval(&spec)?;
    let seconds = start.elapsed().as_secs_f64();
    match cfg.format {
        OutputFormat::Json => {
            writeln!(ctx.out, "{}", serde_json::to_string_pretty(&eval_json(cfg, &r)).map_err(|e| MdzError::Parse(e.to_string()))?)
                .map_err(io_err)?
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *ctx.out);
            let row = [
                id.to_string(),
                fmt15(r.value.re),
                fmt15(r.value.im),
                fmt15(r.tail_bound),
                r.terms_used.to_string(),
                format!("{seconds:.3}"),
            ];
            w.write_record(["spec_id", "value_re", "value_im", "tail_bound", "terms", "seconds"])
                .and_then(|_| w.write_record(&row))
                .and_then(|_| w.flush().map_err(csv::Error::from))
                .map_err(|e| MdzError::Parse(format!("output: {e}")))?;
        }
        OutputFormat::Text => writeln!(
            ctx.out,
            "value      = {} {} {}i\ntail_bound = {} ({})\nterms      = {}\nconverged  = {}",
            fmt15(r.value.re),
            if r.value.im.is_sign_negative() { '-' } else { '+' },
            fmt15(r.value.im.abs()),
            fmt15(r.tail_bound),
            tail_kind_name(r.tail_kind),
            r.terms_used,
            r.converged
        )
        .map_err(io_err)?,
    }
    if r.converged {
        Ok(EXIT_OK)
    } else {
        writeln!(ctx.err, "tail bound {:e} exceeds tolerance {:e}", r.tail_bound, cfg.tol).map_err(io_err)?;
        Ok(EXIT_NOT_CONVERGED)
    }
}

fn print_rows(ctx: &mut Ctx, rows: &[CheckRow]) -> Result<()> {
    match ctx.config.format {
        OutputFormat::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "suite": r.suite, "name": r.name, "value": num(r.value), "reference": num(r.reference),
                        "deviation": num(r.deviation), "tolerance": num(r.tolerance), "passed": r.passed,
                    })
                })
                .collect();
            writeln!(ctx.out, "{}", serde_json::to_string_pretty(&v).map_err(|e| MdzError::Parse(e.to_string()))?)
                .map_err(io_err)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *ctx.out);
            let res: std::result::Result<(), csv::Error> = (|| {
                w.write_record(["suite", "name", "value", "reference", "deviation", "tolerance", "passed", "seconds"])?;
                for r in rows {
                    w.write_record([
                        r.suite.to_string(),
                        r.name.clone(),
                        fmt15(r.value),
                        fmt15(r.reference),
                        fmt15(r.deviation),
                        fmt15(r.tolerance),
                        r.passed.to_string(),
                        format!("{:.3}", r.seconds),
                    ])?;
                }
                w.flush()?;
                Ok(())
            })();
            res.map_err(|e| MdzError::Parse(format!("output: {e}")))?;
        }
        OutputFormat::Text => {
            for r in rows {
                writeln!(
                    ctx.out,
                    "[{}] {:<11} {:<58} dev {:9.2e}  tol {:7.1e}  {:6.2}s",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.suite,
                    r.name,
                    r.deviation,
                    r.tolerance,
                    r.seconds
                )
                .map_err(io_err)?;
            }
        }
    }
    Ok(())
}

fn cmd_verify(ctx: &mut Ctx, suite: &str, quick: bool) -> Result<i32> {
    let suite: Suite = suite.parse()?;
    let rows = run_suite(suite, quick);
    print_rows(ctx, &rows)?;
    let failed = rows.iter().filter(|r| !r.passed).count();
    writeln!(ctx.err, "{} checks, {failed} failed", rows.len()).map_err(io_err)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_decompose(ctx: &mut Ctx, field: QuadField, check: Option<u64>) -> Result<i32> {
    let dec = fundamental_domain(field)?;
    let mut v = json!({ "field": field.to_string(), "cones": dec.records() });
    let mut code = EXIT_OK;
    if let Some(h) = check {
        let rep = verify_partition(&dec, h)?;
        if !rep.passed {
            code = EXIT_FAILURE;
        }
        v["partition"] = serde_json::to_value(&rep).map_err(|e| MdzError::Parse(e.to_string()))?;
    }
    ctx.emit(&v, || {
        let mut s = format!("{field}\n");
        for r in dec.records() {
            let gens: Vec<String> = r.generators.iter().map(|g| format!("({},{})", g[0], g[1])).collect();
            s += &format!("  N{{{}}}  sign {:+}\n", gens.join(", "), r.sign);
        }
        if let Some(p) = v.get("partition") {
            s += &format!("partition: {p}\n");
        }
        s
    })
    .map_err(io_err)?;
    Ok(code)
}

#[cfg(feature = "parallel")]
fn set_threads(n: Option<usize>) {
    if let Some(n) = n.filter(|&n| n > 0) {
        // the global pool can be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn set_threads(_: Option<usize>) {}

fn apply_spec(mut cfg: RunConfig, spec: &SpecArgs) -> Result<RunConfig> {
    if let Some(f) = &spec.field {
        cfg.field = literal::parse_field(f)?;
    }
    if let Some(c) = &spec.cones {
        cfg.cones = literal::parse_cones(c)?;
    }
    if let Some(e) = &spec.exponents {
        cfg.exponents = Some(literal::parse_exponents(e)?);
    }
    if let Some(b) = spec.bound {
        cfg.bound = b;
    }
    if let Some(t) = spec.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(MdzError::Parse(format!("bad tolerance {t}")));
        }
        cfg.tol = t;
    }
    if let Some(m) = &spec.mode {
        cfg.mode = config::parse_mode(m)?;
    }
    Ok(cfg)
}

fn run_parsed(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut cfg = RunConfig::default();
    if let Ok(t) = std::env::var("MDZ_THREADS") {
        cfg.threads = Some(t.trim().parse().map_err(|_| MdzError::Parse(format!("MDZ_THREADS={t:?}")))?);
    }
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| MdzError::Parse(format!("{}: {e}", path.display())))?;
        cfg = cfg.merge_ini(&text)?;
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    set_threads(cfg.threads);
    let mut ctx = Ctx { config: cfg, out, err };
    match &cli.command {
        Command::Field { field } => {
            let f = field_or(&ctx.config, field)?;
            cmd_field(&mut ctx, f)
        }
        Command::Cone { field, gens } => {
            let f = field_or(&ctx.config, field)?;
            cmd_cone(&mut ctx, f, gens)
        }
        Command::Eval { spec, id } => {
            ctx.config = apply_spec(ctx.config.clone(), spec)?;
            cmd_eval(&mut ctx, id)
        }
        Command::Verify { suite, quick } => cmd_verify(&mut ctx, suite, *quick),
        Command::Decompose { field, check } => {
            let f = field_or(&ctx.config, field)?;
            cmd_decompose(&mut ctx, f, *check)
        }
    }
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_FAILURE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match run_parsed(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
