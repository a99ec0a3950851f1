//! Text forms of fields, cones and exponent matrices.
//!
//! ```text
//! field      Q | d=<squarefree>
//! cone       x,y;x,y        (generators; over ℚ a bare integer is allowed)
//! cones      cone|cone|…
//! exponents  s,s;s,s        (rows ';', columns ','; entries re, re±imj)
//! ```

use num_complex::Complex64;

use crate::error::{MdzError, Result};
use crate::field::{FieldElement, QuadField};
use crate::mdzv::ExponentMatrix;

fn parse_err(what: &str, s: &str) -> MdzError {
    MdzError::Parse(format!("bad {what} literal {s:?}"))
}

pub fn parse_field(s: &str) -> Result<QuadField> {
    let s = s.trim();
    if s == "Q" || s == "q" {
        return Ok(QuadField::rationals());
    }
    let d = s.strip_prefix("d=").unwrap_or(s);
    let d: i64 = d.trim().parse().map_err(|_| parse_err("field", s))?;
    if d == 1 {
        return Ok(QuadField::rationals());
    }
    QuadField::quadratic(d)
}

pub fn format_field(k: QuadField) -> String {
    k.to_string()
}

fn parse_int(s: &str, what: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| parse_err(what, s))
}

pub fn parse_generators(s: &str) -> Result<Vec<FieldElement>> {
    s.split(';')
        .map(|g| {
            let parts: Vec<&str> = g.split(',').collect();
            match parts.as_slice() {
                [x] => Ok(FieldElement::new(parse_int(x, "generator")?, 0)),
                [x, y] => Ok(FieldElement::new(parse_int(x, "generator")?, parse_int(y, "generator")?)),
                _ => Err(parse_err("generator", g)),
            }
        })
        .collect()
}

pub fn format_generators(field: QuadField, gens: &[FieldElement]) -> String {
    gens.iter()
        .map(|g| if field.is_rational() { g.x.to_string() } else { format!("{},{}", g.x, g.y) })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_cones(s: &str) -> Result<Vec<Vec<FieldElement>>> {
    s.split('|').map(parse_generators).collect()
}

pub fn format_cones(field: QuadField, cones: &[Vec<FieldElement>]) -> String {
    cones.iter().map(|c| format_generators(field, c)).collect::<Vec<_>>().join("|")
}

fn parse_real(s: &str) -> Result<f64> {
    let x: f64 = s.trim().parse().map_err(|_| parse_err("number", s))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(parse_err("number", s))
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    let Some(body) = t.strip_suffix('j').or_else(|| t.strip_suffix('i')) else {
        return Ok(Complex64::new(parse_real(t)?, 0.0));
    };
    // split at the last sign that is not a leading sign or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(parse_real(&body[..k])?, parse_real(&body[k..])?)),
        None => Ok(Complex64::new(0.0, parse_real(body)?)),
    }
}

pub fn parse_exponents(s: &str) -> Result<ExponentMatrix> {
    let rows = s
        .split(';')
        .map(|r| r.split(',').map(parse_complex).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ExponentMatrix::from_rows(rows)
}

pub fn format_exponents(m: &ExponentMatrix) -> String {
    m.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        assert_eq!(parse_field("Q").unwrap(), QuadField::rationals());
        assert_eq!(parse_field("d=-1").unwrap(), QuadField::quadratic(-1).unwrap());
        assert_eq!(parse_field("5").unwrap(), QuadField::quadratic(5).unwrap());
        assert!(parse_field("d=4").is_err());
        assert!(parse_field("d=x").is_err());
    }

    #[test]
    fn cones() {
        let c = parse_cones("1,0;0,1|1,0;0,1").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0], vec![FieldElement::new(1, 0), FieldElement::new(0, 1)]);
        assert_eq!(parse_cones("1").unwrap(), vec![vec![FieldElement::ONE]]);
        assert!(parse_cones("1,2,3").is_err());
        assert!(parse_cones("").is_err());
    }

    #[test]
    fn complex_entries() {
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("2.5-0.5j").unwrap(), Complex64::new(2.5, -0.5));
        assert_eq!(parse_complex("-1+2i").unwrap(), Complex64::new(-1.0, 2.0));
        assert_eq!(parse_complex("1e-3+1e+2j").unwrap(), Complex64::new(1e-3, 100.0));
        assert_eq!(parse_complex("3j").unwrap(), Complex64::new(0.0, 3.0));
        assert!(parse_complex("nan").is_err());
        let m = parse_exponents("1,2;1,2").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(parse_exponents(&format_exponents(&m)).unwrap(), m);
    }
}
