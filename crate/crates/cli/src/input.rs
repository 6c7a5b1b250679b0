//! JSON problem files: {"n"?, "S"?, "f"?, "h"?, "f_prime"?, "N"?}.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;
use whitforge_core::exactq::QMatrix;

use crate::notation::{parse_value, MatrixSpec};
use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    n: Option<usize>,
    #[serde(rename = "S")]
    s: Option<Value>,
    f: Option<Value>,
    h: Option<Value>,
    f_prime: Option<Value>,
    #[serde(rename = "N")]
    nil: Option<Value>,
}

/// Matrices of one problem, all of the same size.
#[derive(Debug, Clone)]
pub struct Input {
    pub n: usize,
    pub s: Option<QMatrix>,
    pub f: Option<QMatrix>,
    pub h: Option<QMatrix>,
    pub f_prime: Option<QMatrix>,
    pub nil: Option<QMatrix>,
}

impl Input {
    pub fn require(&self, m: &Option<QMatrix>, name: &str) -> Result<QMatrix, CliError> {
        m.clone().ok_or_else(|| CliError::Parse(format!("input is missing \"{name}\"")))
    }
}

pub fn read_text(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

pub fn parse_input(text: &str) -> Result<Input, CliError> {
    let raw: RawInput = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("input JSON: {e}")))?;
    parse_raw(raw)
}

pub fn parse_input_value(v: &Value) -> Result<Input, CliError> {
    let raw: RawInput = serde_json::from_value(v.clone()).map_err(|e| CliError::Parse(format!("input JSON: {e}")))?;
    parse_raw(raw)
}

fn parse_raw(raw: RawInput) -> Result<Input, CliError> {
    let specs: Vec<Option<MatrixSpec>> = [&raw.s, &raw.f, &raw.h, &raw.f_prime, &raw.nil]
        .into_iter()
        .map(|v| v.as_ref().map(parse_value).transpose())
        .collect::<Result<_, _>>()?;
    let inferred = specs.iter().flatten().filter_map(MatrixSpec::min_size).max();
    let n = match (raw.n, inferred) {
        (Some(n), Some(k)) if k > n => return Err(CliError::Parse(format!("matrices need n >= {k} but n = {n}"))),
        (Some(n), _) => n,
        (None, Some(k)) => k,
        (None, None) => return Err(CliError::Parse("cannot infer n; give \"n\" explicitly".into())),
    };
    let mut built = specs.into_iter().map(|s| s.map(|m| m.build(n)).transpose());
    let mut next = || built.next().expect("five fields");
    Ok(Input { n, s: next()?, f: next()?, h: next()?, f_prime: next()?, nil: next()? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infers_size() {
        let i = parse_input(r#"{"S": "diag(3,1,-1,-3)", "f": "E21+E43"}"#).unwrap();
        assert_eq!(i.n, 4);
        assert!(i.h.is_none());
        let i = parse_input(r#"{"n": 3, "N": "0"}"#).unwrap();
        assert!(i.nil.unwrap().is_zero());
        assert!(parse_input(r#"{"N": "0"}"#).is_err());
        assert!(parse_input(r#"{"n": 2, "f": "E31"}"#).is_err());
        assert!(parse_input(r#"{"g": "E21"}"#).is_err());
    }
}
