use std::time::{SystemTime, UNIX_EPOCH};

/// Output format selected by global flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// A simple column-aligned table that can also render as CSV.
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    pub fn print(&self, format: Format) {
        match format {
            Format::Csv => {
                println!("{}", self.headers.join(","));
                for row in &self.rows {
                    println!("{}", row.join(","));
                }
            }
            _ => {
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.len());
                    }
                }
                let line = |cells: &[String]| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}", w = w))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                println!("{}", line(&self.headers));
                for row in &self.rows {
                    println!("{}", line(row));
                }
            }
        }
    }
}

/// Wraps a serializable payload in the JSON envelope.
pub fn print_json<T: serde::Serialize>(payload: &T, with_timestamp: bool) -> anyhow::Result<()> {
    let mut value = serde_json::json!({ "data": payload });
    if with_timestamp {
        let ts = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        value["generated_at_unix"] = serde_json::json!(ts);
    }
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

/// Locale-independent float formatting at a fixed precision.
pub fn num(v: f64, digits: usize) -> String {
    format!("{v:.digits$}")
}
