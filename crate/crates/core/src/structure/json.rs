//! Certificate serialization. Field order is fixed; integers beyond 53 bits
//! are written as decimal strings.

use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::cayley::decompose_along;
use crate::config::io::{int_value, parse_int};
use crate::config::{GroupHom, PointConfig};
use crate::linalg::IntMatrix;
use crate::sampling::SamplingParams;
use crate::tangency::{DefectResult, DefectStatus};

use super::{fiber_map, StructureCertificate, StructureError};

fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(int_value).collect())).collect())
}

pub fn certificate_to_json(cert: &StructureCertificate) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), Value::from(cert.n));
    obj.insert("r".into(), Value::from(cert.r));
    obj.insert("c".into(), Value::from(cert.c));
    obj.insert("delta".into(), Value::from(cert.delta));
    obj.insert(
        "grouping".into(),
        Value::Array(cert.grouping.iter().map(|p| Value::Array(p.iter().map(|&i| Value::from(i)).collect())).collect()),
    );
    obj.insert("pi1".into(), matrix_value(cert.pi1.matrix()));
    obj.insert("pi2".into(), matrix_value(cert.pi2.matrix()));
    obj.insert("p".into(), matrix_value(cert.p.matrix()));
    obj.insert("seed".into(), int_value(&BigInt::from(cert.params.seed)));
    obj.insert("bound".into(), int_value(&BigInt::from(cert.params.bound)));
    obj.insert("trials".into(), Value::from(cert.params.trials));
    obj.insert(
        "oracle_delta".into(),
        match cert.oracle.status {
            DefectStatus::Computed(d) => Value::from(d),
            DefectStatus::EmptyDual => Value::String("EmptyDual".into()),
        },
    );
    let mut checks = Map::new();
    for (name, ok) in &cert.checks {
        checks.insert(name.clone(), Value::Bool(*ok));
    }
    obj.insert("checks".into(), Value::Object(checks));
    Value::Object(obj)
}

fn malformed(msg: impl Into<String>) -> StructureError {
    StructureError::Malformed(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value, StructureError> {
    obj.get(name).ok_or_else(|| malformed(format!("missing field \"{name}\"")))
}

fn count(obj: &Map<String, Value>, name: &str) -> Result<usize, StructureError> {
    field(obj, name)?.as_u64().map(|v| v as usize).ok_or_else(|| malformed(format!("\"{name}\" must be a count")))
}

fn big_u64(obj: &Map<String, Value>, name: &str) -> Result<u64, StructureError> {
    let v = parse_int(field(obj, name)?).map_err(|e| malformed(e.to_string()))?;
    u64::try_from(&v).map_err(|_| malformed(format!("\"{name}\" out of range")))
}

fn matrix(obj: &Map<String, Value>, name: &str, cols: usize) -> Result<IntMatrix, StructureError> {
    let rows = field(obj, name)?.as_array().ok_or_else(|| malformed(format!("\"{name}\" must be a matrix")))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let entries = row.as_array().ok_or_else(|| malformed(format!("\"{name}\" rows must be arrays")))?;
        if entries.len() != cols {
            return Err(malformed(format!("\"{name}\" rows must have {cols} entries")));
        }
        out.push(entries.iter().map(parse_int).collect::<Result<Vec<_>, _>>().map_err(|e| malformed(e.to_string()))?);
    }
    Ok(IntMatrix::from_rows(cols, out))
}

/// Reads a certificate for the configuration `a`. The fibers are rebuilt from
/// `a` and the maps; they are left empty when the maps do not decompose `a`.
pub fn certificate_from_json(value: &Value, a: &PointConfig) -> Result<StructureCertificate, StructureError> {
    let obj = value.as_object().ok_or_else(|| malformed("certificate must be a JSON object"))?;
    let n = count(obj, "n")?;
    let r = count(obj, "r")?;
    let c = count(obj, "c")?;
    let delta = count(obj, "delta")?;
    if c > n || r > n {
        return Err(malformed("r and c cannot exceed n"));
    }
    let grouping = field(obj, "grouping")?
        .as_array()
        .ok_or_else(|| malformed("\"grouping\" must be an array"))?
        .iter()
        .map(|part| {
            part.as_array()
                .ok_or_else(|| malformed("grouping parts must be arrays"))?
                .iter()
                .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| malformed("grouping entries must be indices")))
                .collect::<Result<Vec<usize>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pi1 = GroupHom::linear(matrix(obj, "pi1", n)?);
    let pi2 = GroupHom::linear(matrix(obj, "pi2", n - c)?);
    let p = GroupHom::linear(matrix(obj, "p", n.saturating_sub(r))?);
    let params = SamplingParams {
        seed: big_u64(obj, "seed")?,
        bound: big_u64(obj, "bound")?,
        trials: count(obj, "trials")?,
    };
    let status = match field(obj, "oracle_delta")? {
        Value::String(s) if s == "EmptyDual" => DefectStatus::EmptyDual,
        v => DefectStatus::Computed(
            v.as_u64().ok_or_else(|| malformed("\"oracle_delta\" must be a count or \"EmptyDual\""))? as usize,
        ),
    };
    let checks = field(obj, "checks")?
        .as_object()
        .ok_or_else(|| malformed("\"checks\" must be an object"))?
        .iter()
        .map(|(k, v)| v.as_bool().map(|b| (k.clone(), b)).ok_or_else(|| malformed("check values must be booleans")))
        .collect::<Result<Vec<_>, _>>()?;
    let fibers = if pi1.codomain_rank() == pi2.domain_rank() && a.dim() == n {
        decompose_along(a, &pi2.compose(&pi1))
            .ok()
            .filter(|d| fiber_map(d, &pi1, &pi2).is_ok())
            .map(|d| d.fibers)
            .unwrap_or_default()
    } else {
        Vec::new()
    };
    Ok(StructureCertificate {
        n,
        r,
        c,
        delta,
        grouping,
        pi1,
        pi2,
        p,
        fibers,
        params,
        oracle: DefectResult { status, rank_witness: Vec::new(), samples_used: params.trials },
        checks,
    })
}
