use std::fmt::Write as _;
use std::path::Path;

use super::{BenchError, ResultRow};

pub const CSV_HEADER: &str = "instance,direction,Q,heuristic,best_cost,wall_time_s,node_count,init_of_best,dead_end_count";

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Rows as CSV text; missing costs and starts are empty fields.
pub fn to_csv_string(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.6},{},{},{}",
            field(&r.instance),
            r.direction,
            r.capacity,
            r.heuristic,
            r.best_cost.map_or_else(String::new, |c| c.to_string()),
            r.wall_time,
            r.node_count,
            r.init_of_best.map_or_else(String::new, |i| i.to_string()),
            r.dead_end_count,
        );
    }
    out
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<(), BenchError> {
    std::fs::write(path, to_csv_string(rows)).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })
}
