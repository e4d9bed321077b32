//! Reading and writing one-row quadrature-statistics CSV files.
//!
//! Schema: header `mean_plus,mean_minus,var_plus,var_minus`, one data row.

use std::fs;
use std::path::Path;

use cvfid::QuadratureStats;

use crate::Failure;

pub fn read_stats(path: &Path) -> Result<QuadratureStats, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(4, format!("cannot read {}: {e}", path.display())))?;
    let bad = |msg: String| Failure::new(5, format!("{}: {msg}", path.display()));
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
    match lines.next() {
        Some("mean_plus,mean_minus,var_plus,var_minus") => {}
        Some(h) => {
            return Err(bad(format!(
                "expected header `mean_plus,mean_minus,var_plus,var_minus`, got `{h}`"
            )))
        }
        None => return Err(bad("file is empty".into())),
    }
    let row = lines
        .next()
        .ok_or_else(|| bad("missing the data row".into()))?;
    if lines.next().is_some_and(|l| !l.is_empty()) {
        return Err(bad("expected exactly one data row".into()));
    }
    let fields: Vec<&str> = row.split(',').collect();
    if fields.len() != 4 {
        return Err(bad(format!("expected four fields, got `{row}`")));
    }
    let mut vals = [0.0f64; 4];
    for (slot, field) in vals.iter_mut().zip(&fields) {
        *slot = field
            .trim()
            .parse()
            .map_err(|_| bad(format!("`{field}` is not a number")))?;
    }
    QuadratureStats::new(vals[0], vals[1], vals[2], vals[3])
        .map_err(|e| bad(e.to_string()))
}

pub fn write_stats(path: &Path, stats: &QuadratureStats) -> Result<(), Failure> {
    let body = format!(
        "mean_plus,mean_minus,var_plus,var_minus\n{},{},{},{}\n",
        stats.mean_plus, stats.mean_minus, stats.var_plus, stats.var_minus
    );
    fs::write(path, body)
        .map_err(|e| Failure::new(4, format!("cannot write {}: {e}", path.display())))
}
