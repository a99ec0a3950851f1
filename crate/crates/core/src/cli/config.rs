//! `RunConfig` and its INI form (`key=value` lines, `#`/`;` comments).

use std::fmt;

use clap::ValueEnum;

use super::literal::{format_cones, format_exponents, format_field, parse_cones, parse_exponents, parse_field};
use crate::error::{MdzError, Result};
use crate::field::{FieldElement, QuadField};
use crate::mdzv::{EvalMode, ExponentMatrix};
use crate::series::{DEFAULT_BOUND, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl OutputFormat {
    fn name(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub field: QuadField,
    pub cones: Vec<Vec<FieldElement>>,
    pub exponents: Option<ExponentMatrix>,
    pub bound: u64,
    pub tol: f64,
    pub threads: Option<usize>,
    pub format: OutputFormat,
    pub mode: EvalMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: QuadField::rationals(),
            cones: Vec::new(),
            exponents: None,
            bound: DEFAULT_BOUND,
            tol: DEFAULT_TOL,
            threads: None,
            format: OutputFormat::Json,
            mode: EvalMode::Sum,
        }
    }
}

pub fn parse_mode(s: &str) -> Result<EvalMode> {
    match s.trim() {
        "sum" => Ok(EvalMode::Sum),
        "quadrature" => Ok(EvalMode::Quadrature),
        other => Err(MdzError::Parse(format!("unknown mode {other:?}"))),
    }
}

fn mode_name(m: EvalMode) -> &'static str {
    match m {
        EvalMode::Sum => "sum",
        EvalMode::Quadrature => "quadrature",
    }
}

impl RunConfig {
    /// Applies `key=value` lines on top of `self`.
    pub fn merge_ini(mut self, text: &str) -> Result<Self> {
        let mut cones = None;
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') || line.starts_with('[') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| MdzError::Parse(format!("line {}: expected key=value", n + 1)))?;
            let value = value.trim();
            let bad = |what: &str| MdzError::Parse(format!("line {}: bad {what} {value:?}", n + 1));
            match key.trim() {
                "field" => self.field = parse_field(value)?,
                "cones" => cones = Some(value.to_string()),
                "exp" => self.exponents = Some(parse_exponents(value)?),
                "bound" => self.bound = value.parse().map_err(|_| bad("bound"))?,
                "tol" => {
                    self.tol = value.parse().map_err(|_| bad("tolerance"))?;
                    if !(self.tol.is_finite() && self.tol > 0.0) {
                        return Err(bad("tolerance"));
                    }
                }
                "threads" => self.threads = Some(value.parse().map_err(|_| bad("thread count"))?),
                "format" => self.format = OutputFormat::from_str(value, true).map_err(|_| bad("format"))?,
                "mode" => self.mode = parse_mode(value)?,
                other => return Err(MdzError::Parse(format!("line {}: unknown key {other:?}", n + 1))),
            }
        }
        // cones are validated against the final field
        if let Some(c) = cones {
            self.cones = parse_cones(&c)?;
        }
        Ok(self)
    }

    pub fn from_ini(text: &str) -> Result<Self> {
        RunConfig::default().merge_ini(text)
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field={}", format_field(self.field))?;
        if !self.cones.is_empty() {
            writeln!(f, "cones={}", format_cones(self.field, &self.cones))?;
        }
        if let Some(e) = &self.exponents {
            writeln!(f, "exp={}", format_exponents(e))?;
        }
        writeln!(f, "bound={}", self.bound)?;
        writeln!(f, "tol={}", self.tol)?;
        if let Some(t) = self.threads {
            writeln!(f, "threads={t}")?;
        }
        writeln!(f, "format={}", self.format.name())?;
        writeln!(f, "mode={}", mode_name(self.mode))
    }
}
