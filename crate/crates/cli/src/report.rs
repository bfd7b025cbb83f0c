//! Report envelope, provenance digest and CSV tables.

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Everything a command prints in JSON mode.
pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub outputs: Value,
    pub caveats: Map<String, Value>,
    pub seeds: Map<String, Value>,
    pub tolerances: Map<String, Value>,
    pub workers: usize,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &'static str, workers: usize) -> Self {
        Report {
            command,
            inputs: Map::new(),
            outputs: Value::Null,
            caveats: Map::new(),
            seeds: Map::new(),
            tolerances: Map::new(),
            workers,
            table: None,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), to_value(value));
        self
    }

    pub fn caveat(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.caveats.insert(key.into(), to_value(value));
        self
    }

    pub fn seed(&mut self, key: &str, value: u64) -> &mut Self {
        self.seeds.insert(key.into(), json!(value));
        self
    }

    pub fn tolerance(&mut self, key: &str, value: f64) -> &mut Self {
        self.tolerances.insert(key.into(), json!(value));
        self
    }

    /// SHA-256 over the compact JSON of everything that determines the run.
    pub fn digest(&self) -> String {
        let provenance = json!({
            "command": self.command,
            "inputs": self.inputs,
            "seeds": self.seeds,
            "tolerances": self.tolerances,
            "workers": self.workers,
        });
        let bytes = serde_json::to_vec(&provenance).expect("JSON values always serialize");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "caveats": self.caveats,
            "seeds": self.seeds,
            "tolerances": self.tolerances,
            "workers": self.workers,
            "digest": self.digest(),
        })
    }
}

pub fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report values always serialize")
}

/// A plain numeric table for sweep commands.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Header line, then one line per row; `null` becomes an empty cell.
    pub fn to_csv(&self, digest: &str) -> String {
        let mut out = format!("# digest={digest}\n{}\n", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Null => String::new(),
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_tracks_inputs_only() {
        let mut a = Report::new("wills", 1);
        a.input("body", json!({"type": "box"}));
        let mut b = Report::new("wills", 1);
        b.input("body", json!({"type": "box"}));
        b.outputs = json!({"count": 1});
        assert_eq!(a.digest(), b.digest());
        b.input("extra", 1);
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }

    #[test]
    fn csv_cells() {
        let mut t = Table::new(&["t", "value", "ok"]);
        t.push(vec![json!(0.5), Value::Null, json!(true)]);
        assert_eq!(t.to_csv("ab"), "# digest=ab\nt,value,ok\n0.5,,true\n");
    }
}
