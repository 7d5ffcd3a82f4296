use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use dualdefect::config::io::int_value;
use dualdefect::structure::{certificate_from_json, certificate_to_json, StructureError, VerifyReport};
use dualdefect::{
    defect_oracle, structure_certificate, verify_certificate, DefectStatus, PointConfig, SamplingParams,
    TangencyProblem,
};

use crate::{load_config, Cli, CliError, ExhaustiveArgs, Warnings};

type Report = Result<(i32, Value), CliError>;

const EXHAUSTIVE_CHECKS: [&str; 3] = ["lower_bound", "minimality", "coarsening"];

fn structure_error(e: StructureError) -> CliError {
    match e {
        StructureError::Malformed(_) | StructureError::Config(_) | StructureError::NotNormalized => {
            CliError::Input(e.to_string())
        }
        other => CliError::Failed(other.to_string()),
    }
}

fn exit_code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

/// Certificate JSON for `a`, with the exhaustive checks appended when asked.
fn certify(
    a: &PointConfig,
    source: &Path,
    params: SamplingParams,
    ex: ExhaustiveArgs,
    warnings: &mut Warnings,
) -> Result<(bool, Value), CliError> {
    let mut cert = structure_certificate(a, params).map_err(structure_error)?;
    if ex.exhaustive {
        let report = verify_certificate(a, &cert, true, ex.exhaustive_limit);
        for name in EXHAUSTIVE_CHECKS {
            if let Some(ok) = report.check(name) {
                cert.checks.push((name.to_string(), ok));
            }
        }
        if a.len() > ex.exhaustive_limit {
            warnings.warn(format!(
                "{}: exhaustive checks skipped, {} points exceed limit {}",
                source.display(),
                a.len(),
                ex.exhaustive_limit
            ));
        }
    }
    Ok((cert.all_checks_pass(), certificate_to_json(&cert)))
}

pub fn analyze(cli: &Cli, input: &Path, ex: ExhaustiveArgs, warnings: &mut Warnings) -> Report {
    let loaded = load_config(input, warnings)?;
    let (ok, value) = certify(&loaded.config, input, cli.params(), ex, warnings)?;
    Ok((exit_code(ok), value))
}

pub fn oracle(cli: &Cli, input: &Path, warnings: &mut Warnings) -> Report {
    let loaded = load_config(input, warnings)?;
    let params = cli.params();
    let problem = TangencyProblem::new(loaded.config.clone(), params);
    let res = defect_oracle(&problem);
    let (status, delta) = match res.status {
        DefectStatus::Computed(d) => ("Computed", Value::from(d)),
        DefectStatus::EmptyDual => ("EmptyDual", Value::from("EmptyDual")),
    };
    let value = json!({
        "n": loaded.config.dim(),
        "points": loaded.config.len(),
        "dim_l": problem.dim_l(),
        "status": status,
        "delta": delta,
        "rank_witness": res.rank_witness.iter().map(int_value).collect::<Vec<_>>(),
        "samples_used": res.samples_used,
        "seed": int_value(&params.seed.into()),
        "bound": int_value(&params.bound.into()),
        "trials": params.trials,
    });
    Ok((0, value))
}

fn report_value(report: &VerifyReport) -> Value {
    let checks: Map<String, Value> = report.checks.iter().map(|(k, ok)| (k.clone(), Value::Bool(*ok))).collect();
    json!({
        "passed": report.passed(),
        "checks": checks,
        "projections_examined": report.projections_examined,
        "notes": report.notes,
    })
}

pub fn verify(_cli: &Cli, config: &Path, certificate: &Path, ex: ExhaustiveArgs, warnings: &mut Warnings) -> Report {
    let loaded = load_config(config, warnings)?;
    let text = std::fs::read_to_string(certificate)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", certificate.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: invalid JSON: {e}", certificate.display())))?;
    let cert = certificate_from_json(&value, &loaded.config).map_err(structure_error)?;
    let report = verify_certificate(&loaded.config, &cert, ex.exhaustive, ex.exhaustive_limit);
    Ok((exit_code(report.passed()), report_value(&report)))
}

fn batch_inputs(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Input(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| p.extension().and_then(|e| e.to_str()).is_some_and(|e| matches!(e, "json" | "txt")))
        .collect();
    files.sort();
    Ok(files)
}

fn batch_record(path: &Path, params: SamplingParams, ex: ExhaustiveArgs) -> (Warnings, bool, Value) {
    let mut warnings = Warnings::default();
    let name = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let mut record = Map::new();
    record.insert("file".into(), Value::String(name));
    let result = load_config(path, &mut warnings)
        .and_then(|loaded| certify(&loaded.config, path, params, ex, &mut warnings).map(|c| (loaded, c)));
    let ok = match result {
        Ok((loaded, (checks_ok, cert))) => {
            let expected_ok = loaded.expected_delta.is_none_or(|d| cert["delta"] == d);
            let ok = checks_ok && expected_ok;
            record.insert("status".into(), Value::from(if ok { "ok" } else { "failed" }));
            record.insert("delta".into(), cert["delta"].clone());
            if let Some(d) = loaded.expected_delta {
                record.insert("expected_delta".into(), Value::from(d));
            }
            record.insert("certificate".into(), cert);
            ok
        }
        Err(e) => {
            record.insert("status".into(), Value::from("error"));
            record.insert("error".into(), Value::String(e.to_string()));
            false
        }
    };
    (warnings, ok, Value::Object(record))
}

pub fn batch(cli: &Cli, dir: &Path, ex: ExhaustiveArgs, warnings: &mut Warnings) -> Report {
    let files = batch_inputs(dir)?;
    let params = cli.params();
    let results: Vec<(Warnings, bool, Value)> = files.par_iter().map(|f| batch_record(f, params, ex)).collect();
    let mut records = Vec::with_capacity(results.len());
    let mut failed = 0;
    for (w, ok, record) in results {
        warnings.extend(w);
        failed += usize::from(!ok);
        records.push(record);
    }
    let value = json!({ "files": records.len(), "failed": failed, "records": records });
    Ok((exit_code(failed == 0), value))
}
