use serde_json::{Map, Value};

/// Ordered key/value output rendered either as aligned text or as one JSON
/// document.
#[derive(Debug, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new(seed: Option<u64>) -> Self {
        let mut r = Self::default();
        if let Some(s) = seed {
            r.put("seed", s);
        }
        r
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn extend(&mut self, other: Report) {
        self.fields.extend(other.fields);
    }

    pub fn has(&self, key: &str) -> bool {
        self.fields.iter().any(|(k, _)| k == key)
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let map: Map<String, Value> = self.fields.iter().cloned().collect();
            return serde_json::to_string(&Value::Object(map)).expect("json values serialize");
        }
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.fields {
            let text = match v {
                Value::String(s) => s.clone(),
                Value::Array(items) if items.iter().all(Value::is_string) => items
                    .iter()
                    .map(|s| s.as_str().unwrap_or_default().to_string())
                    .collect::<Vec<_>>()
                    .join(&format!("\n{:width$}  ", "")),
                other => other.to_string(),
            };
            if k == "seed" {
                out.push_str(&format!("# seed {text}\n"));
            } else {
                out.push_str(&format!("{k:width$}  {text}\n"));
            }
        }
        out.trim_end().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_text() {
        let mut r = Report::new(Some(4));
        r.put("allowed", true).put("novikov", vec![-1]);
        assert_eq!(r.render(false), "# seed 4\nallowed  true\nnovikov  [-1]");
        assert_eq!(r.render(true), r#"{"seed":4,"allowed":true,"novikov":[-1]}"#);
    }
}
