//! Reading and writing point configurations.
//!
//! JSON: `{"name": "...", "points": [[0, 1], [2, 3]]}`. Integers may be JSON
//! numbers of any size or decimal strings. Extra top-level fields are ignored.
//!
//! Text: one point per line as whitespace-separated integers; `#` starts a
//! comment; blank lines are skipped.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Map, Value};

use super::{ConfigError, Point, PointConfig};

/// A parsed configuration plus any duplicate points that were merged.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub config: PointConfig,
    pub duplicates: Vec<Point>,
    /// Extra `expected_delta` metadata carried by generated corpora.
    pub expected_delta: Option<usize>,
}

pub fn parse_int(v: &Value) -> Result<BigInt, ConfigError> {
    let s = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => return Err(ConfigError::Parse(format!("expected an integer, found {other}"))),
    };
    BigInt::from_str(&s).map_err(|_| ConfigError::Parse(format!("not an integer: {s}")))
}

/// JSON value for an integer: a plain number when it fits in 53 bits, a
/// decimal string otherwise.
pub fn int_value(x: &BigInt) -> Value {
    const LIMIT: i64 = 1 << 53;
    match i64::try_from(x) {
        Ok(v) if (-LIMIT..=LIMIT).contains(&v) => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn parse_json(text: &str) -> Result<Parsed, ConfigError> {
    let root: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| ConfigError::Parse("configuration JSON must be an object".into()))?;
    let pts = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| ConfigError::Parse("missing \"points\" array".into()))?;
    let mut points = Vec::with_capacity(pts.len());
    for p in pts {
        let coords = p
            .as_array()
            .ok_or_else(|| ConfigError::Parse("each point must be an array of integers".into()))?;
        points.push(coords.iter().map(parse_int).collect::<Result<Point, _>>()?);
    }
    let dim = match (obj.get("dim"), points.first()) {
        (Some(d), _) => d
            .as_u64()
            .ok_or_else(|| ConfigError::Parse("\"dim\" must be a nonnegative integer".into()))? as usize,
        (None, Some(p)) => p.len(),
        (None, None) => return Err(ConfigError::Empty),
    };
    let (mut config, duplicates) = PointConfig::new_dedup(dim, points)?;
    if let Some(name) = obj.get("name").and_then(Value::as_str) {
        config = config.with_name(name);
    }
    let expected_delta = obj.get("expected_delta").and_then(Value::as_u64).map(|d| d as usize);
    Ok(Parsed { config, duplicates, expected_delta })
}

pub fn parse_text(text: &str) -> Result<Parsed, ConfigError> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p = line
            .split_whitespace()
            .map(|tok| {
                BigInt::from_str(tok)
                    .map_err(|_| ConfigError::Parse(format!("line {}: not an integer: {tok}", lineno + 1)))
            })
            .collect::<Result<Point, _>>()?;
        points.push(p);
    }
    let dim = points.first().map(Vec::len).ok_or(ConfigError::Empty)?;
    let (config, duplicates) = PointConfig::new_dedup(dim, points)?;
    Ok(Parsed { config, duplicates, expected_delta: None })
}

pub fn to_json_value(config: &PointConfig, expected_delta: Option<usize>) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), Value::String(config.name().unwrap_or("").to_string()));
    if config.dim() == 0 {
        obj.insert("dim".into(), Value::from(0));
    }
    obj.insert(
        "points".into(),
        Value::Array(
            config
                .points()
                .iter()
                .map(|p| Value::Array(p.iter().map(int_value).collect()))
                .collect(),
        ),
    );
    if let Some(d) = expected_delta {
        obj.insert("expected_delta".into(), Value::from(d));
    }
    Value::Object(obj)
}

pub fn to_json(config: &PointConfig) -> String {
    to_json_value(config, None).to_string()
}

pub fn to_text(config: &PointConfig) -> String {
    let mut out = String::new();
    if let Some(name) = config.name() {
        out.push_str(&format!("# {name}\n"));
    }
    for p in config.points() {
        let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}
