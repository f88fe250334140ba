use serde::Serialize;

use crate::scalar::Scalar;

/// Scalar results of one metric over rows (joints or pairs) x speed columns.
/// `None` marks an undefined cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricTable<T> {
    pub metric_name: String,
    pub row_keys: Vec<String>,
    pub col_keys: Vec<f64>,
    pub values: Vec<Vec<Option<T>>>,
}

impl<T: Scalar> MetricTable<T> {
    pub fn new(metric_name: impl Into<String>, row_keys: Vec<String>, col_keys: Vec<f64>) -> Self {
        let values = vec![vec![None; col_keys.len()]; row_keys.len()];
        Self {
            metric_name: metric_name.into(),
            row_keys,
            col_keys,
            values,
        }
    }

    pub fn set(&mut self, row: usize, col: usize, value: Option<T>) {
        self.values[row][col] = value;
    }

    pub fn get(&self, row: usize, col: usize) -> Option<T> {
        self.values[row][col]
    }

    /// CSV with a `joint` column followed by one column per speed; undefined
    /// cells are left empty.
    pub fn to_csv(&self, row_header: &str) -> String {
        let mut out = String::from(row_header);
        for s in &self.col_keys {
            out.push(',');
            out.push_str(&crate::report::format_speed(*s));
        }
        out.push('\n');
        for (key, row) in self.row_keys.iter().zip(&self.values) {
            out.push_str(key);
            for v in row {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&v.to_text());
                }
            }
            out.push('\n');
        }
        out
    }
}
