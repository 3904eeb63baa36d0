pub mod contact;
pub mod dom;
pub mod exch;
pub mod ising;
pub mod perc;

use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;
use stodom::{Error, Result};

use crate::Outcome;

pub fn outcome<P: Serialize, R: Serialize>(command: &'static str, params: &P, seed: Option<u64>, result: &R) -> Result<Outcome> {
    let to_value = |v: serde_json::Result<Value>| v.map_err(|e| Error::Numerical(format!("payload does not serialize: {e}")));
    Ok(Outcome {
        command,
        params: to_value(serde_json::to_value(params))?,
        seed,
        result: to_value(serde_json::to_value(result))?,
    })
}

/// Comma-separated list of numbers.
pub fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| Error::Parameter(format!("bad {what} entry '{s}'"))))
        .collect()
}
