//! Matrix input: dense JSON arrays or sparse E-notation strings such as
//! "E21+E43", "2*E13-1/2*E24", "E(10,2)", "diag(3,1,-1,-3)" and "0".

use num_traits::Zero;
use serde_json::Value;
use whitforge_core::exactq::{parse_q, QMatrix, Rational};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    Unit(usize, usize),
    Diag(Vec<Rational>),
}

/// A parsed matrix whose size may still be unknown.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSpec {
    Dense(QMatrix),
    Sparse(Vec<(Rational, Atom)>),
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

impl MatrixSpec {
    /// Smallest n that fits every term; None for a bare "0".
    pub fn min_size(&self) -> Option<usize> {
        match self {
            MatrixSpec::Dense(m) => Some(m.rows()),
            MatrixSpec::Sparse(terms) => terms
                .iter()
                .map(|(_, a)| match a {
                    Atom::Unit(i, j) => *i.max(j),
                    Atom::Diag(d) => d.len(),
                })
                .max(),
        }
    }

    pub fn build(&self, n: usize) -> Result<QMatrix, CliError> {
        match self {
            MatrixSpec::Dense(m) if m.rows() == n => Ok(m.clone()),
            MatrixSpec::Dense(m) => Err(bad(format!("matrix is {}x{} but n = {n}", m.rows(), m.cols()))),
            MatrixSpec::Sparse(terms) => {
                let mut out = QMatrix::zeros(n, n);
                for (c, atom) in terms {
                    match atom {
                        Atom::Unit(i, j) if *i <= n && *j <= n => out[(i - 1, j - 1)] += c.clone(),
                        Atom::Unit(i, j) => return Err(bad(format!("E({i},{j}) does not fit n = {n}"))),
                        Atom::Diag(d) if d.len() == n => {
                            for (k, x) in d.iter().enumerate() {
                                out[(k, k)] += c * x;
                            }
                        }
                        Atom::Diag(d) => return Err(bad(format!("diag of length {} for n = {n}", d.len()))),
                    }
                }
                Ok(out)
            }
        }
    }
}

pub fn parse_value(v: &Value) -> Result<MatrixSpec, CliError> {
    match v {
        Value::String(s) => parse_sparse(s),
        Value::Array(rows) => {
            let rows = rows
                .iter()
                .map(|r| match r {
                    Value::Array(xs) => xs.iter().map(parse_scalar).collect::<Result<Vec<_>, _>>(),
                    other => Err(bad(format!("matrix row must be an array, got {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let m = QMatrix::from_rows(rows).map_err(|e| bad(e.to_string()))?;
            m.require_square().map_err(|e| bad(e.to_string()))?;
            Ok(MatrixSpec::Dense(m))
        }
        other => Err(bad(format!("expected a matrix, got {other}"))),
    }
}

pub fn parse_scalar(v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => parse_q(s).map_err(|e| bad(e.to_string())),
        Value::Number(x) => parse_q(&x.to_string()).map_err(|e| bad(e.to_string())),
        other => Err(bad(format!("expected a rational, got {other}"))),
    }
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).collect()
}

fn parse_atom(s: &str) -> Result<Atom, CliError> {
    if let Some(rest) = s.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        let entries = split_list(rest).into_iter().map(|x| parse_q(x).map_err(|e| bad(e.to_string())));
        return Ok(Atom::Diag(entries.collect::<Result<_, _>>()?));
    }
    let rest = s.strip_prefix('E').ok_or_else(|| bad(format!("unknown matrix term {s:?}")))?;
    let index = |x: &str| x.parse::<usize>().ok().filter(|&k| k > 0).ok_or_else(|| bad(format!("bad index in {s:?}")));
    if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let parts = split_list(inner);
        if parts.len() != 2 {
            return Err(bad(format!("E(i,j) needs two indices: {s:?}")));
        }
        return Ok(Atom::Unit(index(parts[0])?, index(parts[1])?));
    }
    let digits: Vec<char> = rest.chars().collect();
    if digits.len() != 2 || !digits.iter().all(char::is_ascii_digit) {
        return Err(bad(format!("write {s:?} as E(i,j) unless both indices are single digits")));
    }
    Ok(Atom::Unit(index(&digits[0].to_string())?, index(&digits[1].to_string())?))
}

pub fn parse_sparse(text: &str) -> Result<MatrixSpec, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad("empty matrix"));
    }
    // split into signed terms at top-level + and -
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut negative = false;
    for (k, ch) in s.chars().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                if k > 0 && !cur.is_empty() {
                    terms.push((negative, std::mem::take(&mut cur)));
                } else if !cur.is_empty() || k > 0 {
                    return Err(bad(format!("dangling sign in {text:?}")));
                }
                negative = ch == '-';
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if depth != 0 || cur.is_empty() {
        return Err(bad(format!("unbalanced matrix expression {text:?}")));
    }
    terms.push((negative, cur));

    let mut out = Vec::new();
    for (neg, term) in terms {
        let (coef, atom) = match term.split_once('*') {
            Some((c, a)) => (parse_q(c).map_err(|e| bad(e.to_string()))?, a.to_string()),
            None => {
                let start = term.find(['E', 'd']).unwrap_or(term.len());
                let c = &term[..start];
                let coef = if c.is_empty() { Rational::from_integer(1.into()) } else { parse_q(c).map_err(|e| bad(e.to_string()))? };
                (coef, term[start..].to_string())
            }
        };
        let coef = if neg { -coef } else { coef };
        if atom.is_empty() {
            if coef.is_zero() {
                continue;
            }
            return Err(bad(format!("scalar term {term:?} needs a matrix")));
        }
        out.push((coef, parse_atom(&atom)?));
    }
    Ok(MatrixSpec::Sparse(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use whitforge_core::exactq::{q, qf};

    fn build(s: &str, n: usize) -> QMatrix {
        parse_sparse(s).unwrap().build(n).unwrap()
    }

    #[test]
    fn sparse_forms() {
        let m = build("E21+E43", 4);
        assert_eq!(m, &QMatrix::unit(4, 1, 0) + &QMatrix::unit(4, 3, 2));
        let m = build("2*E13 - 1/2*E24", 4);
        assert_eq!((m[(0, 2)].clone(), m[(1, 3)].clone()), (q(2), qf(-1, 2)));
        assert_eq!(build("diag(3,1,-1,-3)", 4), QMatrix::diag_i64(&[3, 1, -1, -3]));
        assert_eq!(build("E(10,2)", 10)[(9, 1)], q(1));
        assert_eq!(build("0", 3), QMatrix::zeros(3, 3));
        assert_eq!(build("-E21", 2)[(1, 0)], q(-1));
        assert_eq!(parse_sparse("0").unwrap().min_size(), None);
        assert_eq!(parse_sparse("E(3,1)+diag(1,2)").unwrap().min_size(), Some(3));
    }

    #[test]
    fn malformed() {
        for s in ["", "E123", "E2", "F21", "E21+", "diag(1,2", "3", "E(0,1)", "E21++E12"] {
            assert!(parse_sparse(s).is_err(), "{s}");
        }
        assert!(parse_sparse("E31").unwrap().build(2).is_err());
    }

    #[test]
    fn dense() {
        let v: Value = serde_json::from_str(r#"[["1", 2], ["-1/2", "0"]]"#).unwrap();
        let m = parse_value(&v).unwrap().build(2).unwrap();
        assert_eq!(m[(1, 0)], qf(-1, 2));
        let ragged: Value = serde_json::from_str(r#"[["1"], ["1", "2"]]"#).unwrap();
        assert!(parse_value(&ragged).is_err());
    }
}
