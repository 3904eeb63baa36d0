use serde::Serialize;
use serde_json::Value;

/// Envelope written for every successful run.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub build: &'static str,
    /// Seconds spent in the command, excluding argument parsing and output.
    pub wall_time: f64,
    pub result: Value,
}

pub const BUILD: &str = env!("STODOM_BUILD");

/// Flattens nested objects into dotted keys; arrays of scalars are joined with `;`.
fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), joined.join(";")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Rows for the CSV projection: the first top-level array of objects becomes
/// the table, otherwise the whole payload is a single row.
fn rows(result: &Value) -> Vec<Vec<(String, String)>> {
    if let Value::Object(map) = result {
        let table = map
            .iter()
            .find(|(_, v)| matches!(v, Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object)));
        if let Some((_, Value::Array(items))) = table {
            return items
                .iter()
                .map(|item| {
                    let mut row = Vec::new();
                    flatten("", item, &mut row);
                    row
                })
                .collect();
        }
    }
    let mut row = Vec::new();
    match result {
        Value::Object(_) => flatten("", result, &mut row),
        other => flatten("value", other, &mut row),
    }
    vec![row]
}

pub fn write_csv(result: &Value, out: impl std::io::Write) -> csv::Result<()> {
    let rows = rows(result);
    let mut w = csv::Writer::from_writer(out);
    if let Some(first) = rows.first() {
        w.write_record(first.iter().map(|(k, _)| k))?;
    }
    for row in &rows {
        w.write_record(row.iter().map(|(_, v)| v))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn table_payload_becomes_rows() {
        let v = json!({"crosses": false, "rows": [{"n": 4, "flip": 0.1}, {"n": 6, "flip": 0.01}]});
        let mut buf = Vec::new();
        write_csv(&v, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "flip,n\n0.1,4\n0.01,6\n");
    }

    #[test]
    fn nested_payload_is_one_row() {
        let v = json!({"estimate": {"point": 0.5, "stderr": 0.01}, "u": [0.25, 0.75]});
        let mut buf = Vec::new();
        write_csv(&v, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "estimate.point,estimate.stderr,u\n0.5,0.01,0.25;0.75\n");
    }
}
