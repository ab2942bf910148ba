//! Text and JSON readers for points, matrices, ranges and representations.

use nalgebra::DMatrix;

use crate::betti::RepPair;
use crate::error::{ParseError, Result};
use crate::field::GaussianRational;
use crate::matrix::{ExactMatrix3, SL3Matrix};
use crate::rational::Rational;
use crate::surface::{CharacterPoint, ParamPoint};

/// Longest input the readers accept; keeps pathological inputs cheap.
pub const MAX_INPUT_LEN: usize = 1 << 16;

fn check_len(s: &str) -> Result<(), ParseError> {
    if s.len() > MAX_INPUT_LEN {
        return Err(ParseError::InvalidNumber(format!("input longer than {MAX_INPUT_LEN} bytes")));
    }
    Ok(())
}

/// Splits on commas, semicolons and whitespace after dropping brackets and parentheses.
fn tokens(s: &str) -> Vec<&str> {
    s.split(|c: char| c == ',' || c == ';' || c.is_whitespace() || "[]()".contains(c)).filter(|t| !t.is_empty()).collect()
}

pub fn parse_rationals(s: &str, expected: usize) -> Result<Vec<Rational>, ParseError> {
    check_len(s)?;
    let toks = tokens(s);
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    if toks.len() != expected {
        return Err(ParseError::Arity { expected, found: toks.len() });
    }
    toks.into_iter().map(str::parse).collect()
}

/// `"x,y,z"`, optionally parenthesized.
pub fn parse_point(s: &str) -> Result<CharacterPoint, ParseError> {
    let mut v = parse_rationals(s, 3)?.into_iter();
    let (x, y, z) = (v.next().unwrap(), v.next().unwrap(), v.next().unwrap());
    Ok(CharacterPoint::new(x, y, z))
}

/// `"s,t"` off the singular locus.
pub fn parse_param(s: &str) -> Result<ParamPoint> {
    let mut v = parse_rationals(s, 2)?.into_iter();
    ParamPoint::new(v.next().unwrap(), v.next().unwrap())
}

/// Nine rationals in row-major order; brackets, commas and semicolons are all separators.
pub fn parse_matrix(s: &str) -> Result<ExactMatrix3, ParseError> {
    let v = parse_rationals(s, 9)?;
    Ok(ExactMatrix3::from_row_major(v).expect("nine entries"))
}

pub fn parse_sl3(s: &str) -> Result<SL3Matrix> {
    SL3Matrix::new(parse_matrix(s)?)
}

/// Inclusive integer range `a..b` (also `a..=b`, or a single `a`).
pub fn parse_range(s: &str) -> Result<(i64, i64), ParseError> {
    check_len(s)?;
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::Empty);
    }
    let bad = || ParseError::InvalidRange(t.to_string());
    let (a, b) = match t.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim_start_matches('=').trim()),
        None => (t, t),
    };
    let a: i64 = a.parse().map_err(|_| bad())?;
    let b: i64 = b.parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn parse_gaussian(s: &str) -> Result<GaussianRational, ParseError> {
    check_len(s)?;
    s.parse()
}

/// A representation as JSON `{"a1": [...9 strings...], "a2": [...]}`.
pub fn parse_rep_json(s: &str) -> Result<RepPair> {
    check_len(s)?;
    serde_json::from_str::<RepPair>(s).map_err(|e| ParseError::Json(e.to_string()).into())
}

/// A 3×3 matrix as a JSON array of nine strings or numbers, or three rows of three.
pub fn parse_matrix_json(s: &str) -> Result<ExactMatrix3, ParseError> {
    check_len(s)?;
    let value: serde_json::Value = serde_json::from_str(s).map_err(|e| ParseError::Json(e.to_string()))?;
    let mut flat = Vec::new();
    flatten(&value, &mut flat, 0)?;
    if flat.len() != 9 {
        return Err(ParseError::Arity { expected: 9, found: flat.len() });
    }
    Ok(ExactMatrix3::from_row_major(flat).expect("nine entries"))
}

fn flatten(v: &serde_json::Value, out: &mut Vec<Rational>, depth: usize) -> Result<(), ParseError> {
    use serde_json::Value;
    match v {
        Value::Array(items) if depth < 2 => items.iter().try_for_each(|x| flatten(x, out, depth + 1)),
        Value::String(s) => {
            out.push(s.parse()?);
            Ok(())
        }
        Value::Number(n) => {
            out.push(n.to_string().parse()?);
            Ok(())
        }
        other => Err(ParseError::Json(format!("unexpected element {other}"))),
    }
}

/// Rows separated by `;`, entries by commas or whitespace: `"2,0;0,1"`.
pub fn parse_real_matrix(s: &str) -> Result<DMatrix<f64>, ParseError> {
    check_len(s)?;
    let rows: Vec<Vec<f64>> = s
        .split(';')
        .map(|row| {
            row.split(|c: char| c == ',' || c.is_whitespace() || "[]".contains(c))
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| ParseError::InvalidNumber(t.to_string())))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<Vec<f64>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let n = rows.len();
    if n == 0 {
        return Err(ParseError::Empty);
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(ParseError::Arity { expected: n, found: r.len() });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn points() {
        assert_eq!(parse_point("3,3,3").unwrap(), CharacterPoint::from_i64(3, 3, 3));
        assert_eq!(parse_point(" (35, 99, 643) ").unwrap(), CharacterPoint::from_i64(35, 99, 643));
        assert_eq!(parse_point("1/2,0.25,-3").unwrap().y, Rational::new(1, 4));
        assert_eq!(parse_point("1,2"), Err(ParseError::Arity { expected: 3, found: 2 }));
        assert_eq!(parse_point(""), Err(ParseError::Empty));
        assert!(matches!(parse_point("1,2,1/0"), Err(ParseError::ZeroDenominator(_))));
    }

    #[test]
    fn params() {
        assert_eq!(parse_param("3,20").unwrap().t(), &Rational::from(20));
        assert!(matches!(parse_param("1,2"), Err(Error::SingularParameter)));
    }

    #[test]
    fn matrices() {
        let m = parse_matrix("[[1,1,0],[0,1,1],[0,0,1]]").unwrap();
        assert_eq!(m, ExactMatrix3::from_i64([[1, 1, 0], [0, 1, 1], [0, 0, 1]]));
        assert_eq!(parse_matrix("1 1 0; 0 1 1; 0 0 1").unwrap(), m);
        assert!(matches!(parse_sl3("2,0,0,0,1,0,0,0,1"), Err(Error::NotUnimodular(_))));
        assert_eq!(parse_matrix_json(r#"[["1","1",0],[0,1,1],[0,0,"1"]]"#).unwrap(), m);
        assert_eq!(parse_matrix_json(r#"["1","1","0","0","1","1","0","0","1"]"#).unwrap(), m);
        assert!(parse_matrix_json("[[[1]]]").is_err());
        assert!(parse_matrix_json("[1,2]").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-5..5").unwrap(), (-5, 5));
        assert_eq!(parse_range("0..=10").unwrap(), (0, 10));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(parse_range("5..1").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn rep_json() {
        let json = r#"{"a1":["1","1","0","0","1","1","0","0","1"],"a2":["1","0","0","0","1","0","0","0","1"]}"#;
        assert!(parse_rep_json(json).is_ok());
        let bad = r#"{"a1":["1","1","0","0","1","1","0","0","1"],"a2":["2","0","0","0","1","0","0","0","1/2"]}"#;
        assert!(parse_rep_json(bad).is_err());
    }

    #[test]
    fn real_matrices() {
        let m = parse_real_matrix("2,0.5;0.5,1").unwrap();
        assert_eq!(m[(0, 1)], 0.5);
        assert!(parse_real_matrix("1,2;3").is_err());
        assert!(parse_real_matrix("nan,0;0,1").is_err());
        assert!(parse_real_matrix(";").is_err());
    }
}
