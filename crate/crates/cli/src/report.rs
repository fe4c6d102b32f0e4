//! Text and JSON rendering for command output. Reports are accumulated so
//! the JSON form is a single document; text lines stream as they come.

use salamander_core::corners::CornerObject;
use salamander_core::report::SequenceReport;
use salamander_core::theorems::ChainReport;
use serde_json::{json, Value};

pub struct Reporter {
    json: bool,
    items: Vec<Value>,
}

impl Reporter {
    pub fn new(json: bool) -> Reporter {
        Reporter {
            json,
            items: Vec::new(),
        }
    }

    pub fn line(&mut self, text: &str) {
        if self.json {
            self.items.push(json!({ "note": text }));
        } else {
            println!("{text}");
        }
    }

    pub fn kv(&mut self, key: &str, value: &str) {
        if self.json {
            self.items.push(json!({ "key": key, "value": value }));
        } else {
            println!("{key}: {value}");
        }
    }

    pub fn corner(&mut self, c: &CornerObject) {
        if self.json {
            self.items.push(json!({
                "position": [c.position.i, c.position.r],
                "kind": c.kind.to_string(),
                "dim": c.dim(),
            }));
        } else {
            println!("{} dim {}", c.label(), c.dim());
        }
    }

    pub fn sequence(&mut self, seq: &SequenceReport) {
        if self.json {
            self.items.push(serde_json::to_value(seq).unwrap_or(Value::Null));
        } else {
            print!("{seq}");
        }
    }

    pub fn chain(&mut self, chain: &ChainReport) {
        if self.json {
            self.items
                .push(serde_json::to_value(chain).unwrap_or(Value::Null));
        } else {
            println!(
                "{} [{} -> {}]: {}",
                chain.description,
                chain.start_dim,
                chain.end_dim,
                if chain.is_iso { "iso" } else { "NOT iso" }
            );
            for step in &chain.trace {
                println!("  {step}");
            }
        }
    }

    pub fn trace(&mut self, label: &str, lines: &[String]) {
        if self.json {
            self.items.push(json!({ "trace": label, "steps": lines }));
        } else {
            println!("{label}:");
            for l in lines {
                println!("  {l}");
            }
        }
    }

    pub fn finish(&mut self) {
        if self.json {
            let doc = json!({ "items": self.items });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
}
