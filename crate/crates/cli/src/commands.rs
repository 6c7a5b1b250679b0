use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use whitforge_core::deform::{compar_certificate, deform_gl, deform_sl};
use whitforge_core::exactq::{parse_q, Rational};
use whitforge_core::orbits::{jordan_partition, sl_class};
use whitforge_core::partitions::{classify, closure_leq, distinguished, Composition, GroupType, Partition};
use whitforge_core::whitpair::{
    chain, find_z, model_data, neutral_report, quasi_criticals, quasi_model_data, ChainContext, WhittakerPair,
    WhittakerTriple,
};

use crate::fixtures;
use crate::input::{parse_input, read_text, Input};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "whitforge", version, about = "Exact certificates for nilpotent orbits, Whittaker pairs and orbit deformations")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Json)]
    pub output: OutputMode,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jordan type and SL class of a nilpotent matrix {"N": ...}
    OrbitClassify { input: Option<PathBuf> },
    /// Closure order between two orbits given by compositions
    OrbitClosure {
        #[arg(long)]
        eta: String,
        #[arg(long)]
        gamma: String,
    },
    /// Special / admissible / quasi-admissible flags of an orbit
    Classify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        field: String,
        #[arg(long)]
        lambda: String,
    },
    /// Validate a Whittaker pair {"S", "f"} and split S = h + Z
    PairCheck { input: Option<PathBuf> },
    /// Deformation chain certificate, or a single snapshot with --t
    PairChain {
        input: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Quasi-critical numbers of {"S", "f", "h"?}
    QuasiCriticals { input: Option<PathBuf> },
    /// Model subspaces of a pair, or of a triple when "f_prime" is given
    ModelData { input: Option<PathBuf> },
    /// Deformation certificate from the orbit of mu up to lambda in GL_n
    DeformGl {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        lambda: String,
    },
    /// SL_n deformation for the classes a and b, when the class condition holds
    DeformSl {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Comparison certificate for an orbit pair mu <= lambda
    Compar {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        lambda: String,
    },
    /// Run the embedded example fixtures
    VerifyFixtures {
        #[arg(long)]
        filter: Option<String>,
    },
}

fn to_json<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Parse(e.to_string()))
}

fn partition(s: &str) -> Result<Partition, CliError> {
    s.parse().map_err(|e: whitforge_core::error::Error| CliError::Parse(format!("partition {s:?}: {e}")))
}

fn composition(s: &str) -> Result<Composition, CliError> {
    s.parse().map_err(|e: whitforge_core::error::Error| CliError::Parse(format!("composition {s:?}: {e}")))
}

fn rational(s: &str) -> Result<Rational, CliError> {
    parse_q(s).map_err(|e| CliError::Parse(format!("rational {s:?}: {e}")))
}

fn load(path: &Option<PathBuf>) -> Result<Input, CliError> {
    parse_input(&read_text(path.as_deref())?)
}

pub fn pair_of(input: &Input) -> Result<WhittakerPair, CliError> {
    Ok(WhittakerPair::new(input.require(&input.s, "S")?, input.require(&input.f, "f")?)?)
}

/// Result value plus exit status (nonzero only for failed fixtures).
pub fn execute(cmd: &Command) -> Result<(Value, i32), CliError> {
    let value = match cmd {
        Command::OrbitClassify { input } => {
            let input = load(input)?;
            let nil = input.require(&input.nil, "N")?;
            json!({ "lambda": to_json(&jordan_partition(&nil)?)?, "sl_class": to_json(&sl_class(&nil)?)? })
        }
        Command::OrbitClosure { eta, gamma } => {
            json!({ "leq": closure_leq(&composition(eta)?, &composition(gamma)?)? })
        }
        Command::Classify { group, field, lambda } => {
            let g = GroupType::new(
                group.parse().map_err(|e: whitforge_core::error::Error| CliError::Parse(e.to_string()))?,
                field.parse().map_err(|e: whitforge_core::error::Error| CliError::Parse(e.to_string()))?,
            );
            let lambda = partition(lambda)?;
            let mut v = to_json(&classify(g, &lambda)?)?;
            if let Ok(d) = distinguished(g, &lambda) {
                v["distinguished"] = json!(d);
            }
            v
        }
        Command::PairCheck { input } => {
            let pair = pair_of(&load(input)?)?;
            let (h, z) = find_z(&pair)?;
            json!({
                "pair": to_json(&pair)?,
                "h": to_json(&h)?,
                "Z": to_json(&z)?,
                "S_neutral": to_json(&neutral_report(&pair.s, &pair.f)?)?,
            })
        }
        Command::PairChain { input, t } => {
            let input = load(input)?;
            let pair = pair_of(&input)?;
            match t {
                None => to_json(&chain(&pair)?)?,
                Some(t) => {
                    let t = rational(t)?;
                    let (h, z) = match &input.h {
                        Some(h) => (h.clone(), &pair.s - h),
                        None => find_z(&pair)?,
                    };
                    let ctx = ChainContext::new(&h, &z, &pair.f)?;
                    let snap = ctx.snapshot(&t)?;
                    let mut checks = std::collections::BTreeMap::new();
                    ctx.verify_snapshot(&snap, &mut checks)?;
                    json!({ "h": to_json(&h)?, "Z": to_json(&z)?, "snapshot": to_json(&snap)?, "checks": checks })
                }
            }
        }
        Command::QuasiCriticals { input } => {
            let input = load(input)?;
            let pair = pair_of(&input)?;
            let h = match &input.h {
                Some(h) => h.clone(),
                None => find_z(&pair)?.0,
            };
            to_json(&quasi_criticals(&pair.s, &pair.f, &h)?)?
        }
        Command::ModelData { input } => {
            let input = load(input)?;
            let pair = pair_of(&input)?;
            match &input.f_prime {
                Some(fp) => to_json(&quasi_model_data(&WhittakerTriple::new(pair, fp.clone())?)?)?,
                None => to_json(&model_data(&pair)?)?,
            }
        }
        Command::DeformGl { mu, lambda } => to_json(&deform_gl(&partition(mu)?, &partition(lambda)?)?)?,
        Command::DeformSl { mu, lambda, a, b } => {
            to_json(&deform_sl(&partition(mu)?, &partition(lambda)?, &rational(a)?, &rational(b)?)?)?
        }
        Command::Compar { mu, lambda } => to_json(&compar_certificate(&partition(mu)?, &partition(lambda)?)?)?,
        Command::VerifyFixtures { filter } => {
            let report = fixtures::verify(filter.as_deref())?;
            let code = if report.failed == 0 { 0 } else { 2 };
            return Ok((to_json(&report)?, code));
        }
    };
    Ok((value, 0))
}
