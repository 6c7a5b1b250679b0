//! Worked-example fixtures: each file holds {name, kind, input, extra?, expected}
//! and passes when the recomputed JSON equals `expected` exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use similar::TextDiff;
use whitforge_core::exactq::{fmt_q, QMatrix, Subspace};
use whitforge_core::orbits::{bracket_is, sl2_complete};
use whitforge_core::whitpair::{bigrading, chain, quasi_criticals, weight_components};

use crate::commands::pair_of;
use crate::input::parse_input_value;
use crate::notation::parse_sparse;
use crate::CliError;

const EMBEDDED: &[(&str, &str)] = &[
    ("gl4_triple.json", include_str!("../fixtures/gl4_triple.json")),
    ("gl6_first.json", include_str!("../fixtures/gl6_first.json")),
    ("gl6_second.json", include_str!("../fixtures/gl6_second.json")),
    ("glsame_chain.json", include_str!("../fixtures/glsame_chain.json")),
];

pub const DIR_VAR: &str = "WHITFORGE_FIXTURE_DIR";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fixture {
    name: String,
    kind: String,
    input: Value,
    #[serde(default)]
    extra: Map<String, Value>,
    expected: Value,
}

#[derive(Debug, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<Value>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub fixtures: Vec<FixtureResult>,
    pub passed: usize,
    pub failed: usize,
}

fn sources() -> Result<Vec<(String, String)>, CliError> {
    let Ok(dir) = std::env::var(DIR_VAR) else {
        return Ok(EMBEDDED.iter().map(|(n, s)| (n.to_string(), s.to_string())).collect());
    };
    let read_err = |e: std::io::Error| CliError::Parse(format!("{dir}: {e}"));
    let mut files: Vec<_> = std::fs::read_dir(Path::new(&dir))
        .map_err(read_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).map_err(read_err)?;
            Ok((p.file_name().unwrap_or_default().to_string_lossy().into_owned(), text))
        })
        .collect()
}

fn to_json<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Parse(e.to_string()))
}

fn extra_matrix(extra: &Map<String, Value>, key: &str, n: usize) -> Result<QMatrix, CliError> {
    let text = extra
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Parse(format!("fixture extra is missing \"{key}\"")))?;
    parse_sparse(text)?.build(n)
}

fn weights(s: &QMatrix, m: &QMatrix) -> Result<Value, CliError> {
    Ok(json!(weight_components(s, m)?.keys().map(fmt_q).collect::<Vec<_>>()))
}

fn weight_dim(s: &QMatrix, w: i64) -> Result<usize, CliError> {
    let n = s.rows();
    let target = whitforge_core::exactq::q(w);
    let space: Subspace = bigrading(s, &QMatrix::zeros(n, n))?.sum_where(|a, _| *a == target);
    Ok(space.dim())
}

fn compute(fx: &Fixture) -> Result<Value, CliError> {
    let input = parse_input_value(&fx.input)?;
    let n = input.n;
    match fx.kind.as_str() {
        "pair-chain" => to_json(&chain(&pair_of(&input)?)?),
        "quasi-criticals" => {
            let pair = pair_of(&input)?;
            let h = input.require(&input.h, "h")?;
            let qc = quasi_criticals(&pair.s, &pair.f, &h)?;
            let mut out = json!({ "quasi_criticals": to_json(&qc)?, "Z": to_json(&(&pair.s - &h))? });
            if let Some(t) = fx.extra.get("t") {
                let t = crate::notation::parse_scalar(t)?;
                let s_t = &h + &(&pair.s - &h).scale(&t);
                let mut probes = Map::new();
                for p in fx.extra.get("probes").and_then(Value::as_array).into_iter().flatten() {
                    let name = p.as_str().ok_or_else(|| CliError::Parse("probe must be a string".into()))?;
                    probes.insert(name.to_string(), weights(&s_t, &parse_sparse(name)?.build(n)?)?);
                }
                out["S_t"] = to_json(&s_t)?;
                out["probe_weights"] = Value::Object(probes);
                out["minus_one_dim"] = json!(weight_dim(&s_t, -1)?);
            }
            Ok(out)
        }
        "sl2-triple" => {
            let h = input.require(&input.h, "h")?;
            let f = input.require(&input.f, "f")?;
            let e = sl2_complete(&f, &h)?;
            let witness = extra_matrix(&fx.extra, "witness", n)?;
            let s_mid = extra_matrix(&fx.extra, "S_mid", n)?;
            let s_end = extra_matrix(&fx.extra, "S_end", n)?;
            let eta = extra_matrix(&fx.extra, "eta", n)?;
            let is_triple = |x: &QMatrix| bracket_is(&h, x, 2) && bracket_is(&h, &f, -2) && x.bracket(&f) == h;
            Ok(json!({
                "e": to_json(&e)?,
                "e_is_triple": is_triple(&e),
                "witness_is_triple": is_triple(&witness),
                "eta_weight_mid": weights(&s_mid, &eta)?,
                "eta_commutes_with_witness": witness.bracket(&eta).is_zero(),
                "weight_one_dim_end": weight_dim(&s_end, 1)?,
            }))
        }
        other => Err(CliError::Parse(format!("unknown fixture kind {other:?}"))),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default() + "\n"
}

fn run_one(file: &str, text: &str, filter: Option<&str>) -> Result<Option<FixtureResult>, CliError> {
    let fx: Fixture = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("fixture {file}: {e}")))?;
    if filter.is_some_and(|f| !fx.name.contains(f)) {
        return Ok(None);
    }
    let actual = match compute(&fx) {
        Ok(v) => v,
        Err(CliError::Math(e)) => json!({ "error": e.kind(), "message": e.to_string() }),
        Err(e) => return Err(e),
    };
    if actual == fx.expected {
        return Ok(Some(FixtureResult { name: fx.name, passed: true, diff: None, actual: None }));
    }
    let (want, got) = (pretty(&fx.expected), pretty(&actual));
    let diff = TextDiff::from_lines(&want, &got).unified_diff().header("expected", "actual").to_string();
    Ok(Some(FixtureResult { name: fx.name, passed: false, diff: Some(diff), actual: Some(actual) }))
}

pub fn verify(filter: Option<&str>) -> Result<Report, CliError> {
    let mut fixtures = Vec::new();
    for (file, text) in sources()? {
        fixtures.extend(run_one(&file, &text, filter)?);
    }
    let passed = fixtures.iter().filter(|r| r.passed).count();
    Ok(Report { failed: fixtures.len() - passed, passed, fixtures })
}
