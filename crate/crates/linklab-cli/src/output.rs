//! Output emission. CSV uses '.' decimals, ',' separators, and scientific
//! notation with 10 significant digits so regression diffs stay stable.

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
    Flag(bool),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(x) => format!("{x:.9e}"),
            Value::Text(s) => s.clone(),
            Value::Flag(b) => (if *b { "1" } else { "0" }).to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Value::Num(x) => serde_json::json!(x),
            Value::Text(s) => serde_json::json!(s),
            Value::Flag(b) => serde_json::json!(b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Value::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let arr: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Value::json))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::to_string_pretty(&arr).expect("plain values always serialize") + "\n"
    }

    /// Column index by name (panics on unknown name; test helper).
    pub fn col(&self, name: &str) -> usize {
        self.header
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("no column {name}"))
    }
}
