//! JSON instance and allocation files.
//!
//! ```json
//! { "n": 2, "m": 3, "model": "network",
//!   "values": [["4", "1", "1"], ["2", "2", "2"]],
//!   "weights": [["4/5", "1/5"], ["1/5", "4/5"]] }
//! ```
//!
//! Numbers may be JSON numbers, decimal strings or `"p/q"` strings; they are read
//! as exact rationals. Writers always emit strings.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::allocation::{Allocation, Partition};
use crate::error::{Error, Result};
use crate::instance::{Externality, Instance};
use crate::scalar::{parse_rational, Scalar};
use crate::Rational;

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

fn syntax_error(err: serde_json::Error) -> Error {
    parse_error(format!("line {}, column {}", err.line(), err.column()), err.to_string())
}

fn number(value: &Value, path: &str) -> Result<Rational> {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(parse_error(path, format!("expected a number, found {other}"))),
    };
    parse_rational(&text).ok_or_else(|| parse_error(path, format!("`{text}` is not a decimal or p/q rational")))
}

fn array<'v>(value: &'v Value, path: &str, len: usize) -> Result<&'v Vec<Value>> {
    let items = value.as_array().ok_or_else(|| parse_error(path, "expected an array"))?;
    if items.len() != len {
        return Err(parse_error(path, format!("expected {len} entries, found {}", items.len())));
    }
    Ok(items)
}

fn matrix(value: &Value, path: &str, rows: usize, cols: usize) -> Result<Vec<Vec<Rational>>> {
    array(value, path, rows)?
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let row_path = format!("{path}[{r}]");
            array(row, &row_path, cols)?
                .iter()
                .enumerate()
                .map(|(c, x)| number(x, &format!("{row_path}[{c}]")))
                .collect()
        })
        .collect()
}

fn count(fields: &Map<String, Value>, key: &str) -> Result<usize> {
    let value = fields.get(key).ok_or_else(|| parse_error(key, "missing field"))?;
    value
        .as_u64()
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| parse_error(key, format!("expected a non-negative integer, found {value}")))
}

/// Parses an instance from JSON text into exact rationals.
pub fn parse_instance(text: &str) -> Result<Instance<Rational>> {
    let root: Value = serde_json::from_str(text).map_err(syntax_error)?;
    let fields = root.as_object().ok_or_else(|| parse_error("$", "expected an object"))?;
    for key in fields.keys() {
        if !matches!(key.as_str(), "n" | "m" | "model" | "values" | "weights" | "cross_values") {
            return Err(parse_error(key.as_str(), "unknown field"));
        }
    }
    let n = count(fields, "n")?;
    let m = count(fields, "m")?;
    let model = fields.get("model").and_then(Value::as_str).unwrap_or("network");
    let values = matrix(fields.get("values").ok_or_else(|| parse_error("values", "missing field"))?, "values", n, m)?;
    let externality = match model {
        "network" => {
            if fields.contains_key("cross_values") {
                return Err(parse_error("cross_values", "not allowed with model \"network\""));
            }
            let weights = match fields.get("weights") {
                Some(w) => matrix(w, "weights", n, n)?,
                None => return Err(parse_error("weights", "missing field")),
            };
            Externality::Network { weights }
        }
        "general" => {
            if fields.contains_key("weights") {
                return Err(parse_error("weights", "not allowed with model \"general\""));
            }
            let raw = fields.get("cross_values").ok_or_else(|| parse_error("cross_values", "missing field"))?;
            let cross_values = array(raw, "cross_values", n)?
                .iter()
                .enumerate()
                .map(|(j, giver)| matrix(giver, &format!("cross_values[{j}]"), n, m))
                .collect::<Result<_>>()?;
            Externality::General { cross_values }
        }
        other => return Err(parse_error("model", format!("expected \"network\" or \"general\", found \"{other}\""))),
    };
    Instance::new(values, externality)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance<Rational>> {
    parse_instance(&fs::read_to_string(path)?)
}

fn strings<T: Scalar>(row: &[T]) -> Vec<String> {
    row.iter().map(ToString::to_string).collect()
}

fn string_matrix<T: Scalar>(rows: &[Vec<T>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| strings(r)).collect()
}

pub fn instance_to_json<T: Scalar>(instance: &Instance<T>) -> String {
    let mut root = Map::new();
    root.insert("n".into(), instance.agents().into());
    root.insert("m".into(), instance.items().into());
    let values: Vec<Vec<T>> = (0..instance.agents()).map(|i| instance.values(i).to_vec()).collect();
    match instance.externality() {
        Externality::Network { weights } => {
            root.insert("model".into(), "network".into());
            root.insert("values".into(), serde_json::json!(string_matrix(&values)));
            root.insert("weights".into(), serde_json::json!(string_matrix(weights)));
        }
        Externality::General { cross_values } => {
            root.insert("model".into(), "general".into());
            root.insert("values".into(), serde_json::json!(string_matrix(&values)));
            let cross: Vec<_> = cross_values.iter().map(|g| string_matrix(g)).collect();
            root.insert("cross_values".into(), serde_json::json!(cross));
        }
    }
    serde_json::to_string_pretty(&Value::Object(root)).expect("json values serialize")
}

pub fn write_instance<T: Scalar>(instance: &Instance<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, instance_to_json(instance) + "\n")?;
    Ok(())
}

/// An allocation as written by `allocate` and read back by `verify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationFile {
    pub strategy: String,
    pub bundles: Vec<Vec<usize>>,
    /// `assignment[k]` is the agent receiving `bundles[k]`.
    pub assignment: Vec<usize>,
    pub utilities: Vec<String>,
}

impl AllocationFile {
    pub fn new<T: Scalar>(strategy: &str, partition: &Partition, allocation: &Allocation<T>) -> Self {
        Self {
            strategy: strategy.to_owned(),
            bundles: partition.bundles().to_vec(),
            assignment: allocation.assignment.clone(),
            utilities: strings(&allocation.utilities),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("allocation serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(syntax_error)
    }

    /// The partition over `items` items; fails when the bundles do not partition them.
    pub fn partition(&self, items: usize) -> Result<Partition> {
        Partition::new(self.bundles.clone(), items)
    }
}

pub fn read_allocation(path: impl AsRef<Path>) -> Result<AllocationFile> {
    AllocationFile::parse(&fs::read_to_string(path)?)
}
