//! Corpus generation. Output is a JSON array of configurations, or one file
//! per configuration with `--out-dir`.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::Value;

use dualdefect::config::io::to_json_value;
use dualdefect::generate::{join_type_cayley, random_config, twist};
use dualdefect::{defect_oracle, PointConfig, TangencyProblem};

use crate::{load_config, Cli, CliError, Warnings};

pub const MAX_DIM: usize = 8;
pub const MAX_POINTS: usize = 14;
const MAX_ATTEMPTS: usize = 500;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum GenKind {
    Random,
    CayleyJoinType,
    UnimodularTwist,
}

impl GenKind {
    fn label(self) -> &'static str {
        match self {
            GenKind::Random => "random",
            GenKind::CayleyJoinType => "cayley_join_type",
            GenKind::UnimodularTwist => "unimodular_twist",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,

    /// Number of configurations
    #[arg(long, default_value_t = 10)]
    pub count: usize,

    /// Ambient dimension (random)
    #[arg(long, default_value_t = 3)]
    pub dim: usize,

    /// Number of points (random)
    #[arg(long, default_value_t = 7)]
    pub points: usize,

    /// Coordinate range [-coord, coord] (random)
    #[arg(long, default_value_t = 4)]
    pub coord: i64,

    /// Number of Cayley fibers minus one (cayley_join_type)
    #[arg(long, default_value_t = 1)]
    pub r: usize,

    /// Largest fiber dimension (cayley_join_type)
    #[arg(long, default_value_t = 2)]
    pub max_fiber_dim: usize,

    /// Configuration to twist (unimodular_twist)
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Write one JSON file per configuration into this directory
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn input_error(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn check_size(a: &PointConfig, what: &str) -> Result<(), CliError> {
    if a.dim() > MAX_DIM || a.len() > MAX_POINTS {
        return Err(input_error(format!(
            "{what} has dimension {} and {} points; limits are {MAX_DIM} and {MAX_POINTS}",
            a.dim(),
            a.len()
        )));
    }
    Ok(())
}

/// Generates the corpus as `(config, expected δ)` pairs.
pub fn corpus(cli: &Cli, args: &GenArgs, warnings: &mut Warnings) -> Result<Vec<(PointConfig, Option<usize>)>, CliError> {
    let params = cli.params();
    let mut rng = params.rng(0);
    let mut out = Vec::with_capacity(args.count);
    match args.kind {
        GenKind::Random => {
            if args.dim == 0 || args.dim > MAX_DIM || args.points > MAX_POINTS || args.points < 2 {
                return Err(input_error(format!(
                    "random needs 1 ≤ dim ≤ {MAX_DIM} and 2 ≤ points ≤ {MAX_POINTS}"
                )));
            }
            if !(1..=1000).contains(&args.coord) {
                return Err(input_error("coord must lie in 1..=1000"));
            }
            for i in 0..args.count {
                let a = random_config(&mut rng, args.dim, args.points, args.coord);
                out.push((a.with_name(format!("random_{i:03}")), None));
            }
        }
        GenKind::CayleyJoinType => {
            if args.r == 0 || args.r >= MAX_DIM || args.r + 2 > MAX_POINTS || args.max_fiber_dim == 0 {
                return Err(input_error(format!("cayley_join_type needs 1 ≤ r < {MAX_DIM} and max-fiber-dim ≥ 1")));
            }
            for i in 0..args.count {
                let inst = (0..MAX_ATTEMPTS)
                    .map(|_| join_type_cayley(&mut rng, args.r, args.max_fiber_dim, params))
                    .find(|inst| check_size(&inst.config, "instance").is_ok())
                    .ok_or_else(|| input_error("no join-type instance fits the size limits; lower r or max-fiber-dim"))?;
                out.push((inst.config.with_name(format!("cayley_join_type_{i:03}")), Some(inst.expected_delta)));
            }
        }
        GenKind::UnimodularTwist => {
            let path = args.input.as_ref().ok_or_else(|| input_error("unimodular_twist needs --input"))?;
            let base = load_config(path, warnings)?.config;
            check_size(&base, "input")?;
            let expected = defect_oracle(&TangencyProblem::new(base.clone(), params)).delta();
            for i in 0..args.count {
                let (b, _) = twist(&mut rng, &base);
                out.push((b.with_name(format!("unimodular_twist_{i:03}")), expected));
            }
        }
    }
    Ok(out)
}

pub fn generate(cli: &Cli, args: &GenArgs, warnings: &mut Warnings) -> Result<(i32, Value), CliError> {
    let corpus = corpus(cli, args, warnings)?;
    let values: Vec<Value> = corpus.iter().map(|(a, d)| to_json_value(a, *d)).collect();
    let Some(dir) = &args.out_dir else {
        return Ok((0, Value::Array(values)));
    };
    std::fs::create_dir_all(dir).map_err(|e| input_error(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        let path = dir.join(format!("{}_{i:03}.json", args.kind.label()));
        let text = serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n";
        std::fs::write(&path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
        written.push(Value::String(path.display().to_string()));
    }
    Ok((0, Value::Array(written)))
}
