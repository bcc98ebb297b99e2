//! Report plumbing: every command assembles one `Report` that renders as
//! deterministic text or as a JSON document (keys sorted by the default
//! serde_json map, so byte-stable for identical inputs).

use serde_json::Value;

pub struct Report {
    lines: Vec<String>,
    json: serde_json::Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut json = serde_json::Map::new();
        json.insert("command".into(), Value::String(command.into()));
        Report {
            lines: Vec::new(),
            json,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.json.insert(key.into(), value);
    }

    pub fn print(self, as_json: bool) {
        if as_json {
            println!(
                "{}",
                serde_json::to_string_pretty(&Value::Object(self.json)).expect("serializable")
            );
        } else {
            for l in self.lines {
                println!("{l}");
            }
        }
    }
}

pub fn strings(items: impl IntoIterator<Item = String>) -> Value {
    Value::Array(items.into_iter().map(Value::String).collect())
}
