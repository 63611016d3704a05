use std::fmt::Write as _;

use super::{Algorithm, TrialRecord};

/// Per-(algorithm, c) averages: the coordinates of an error-vs-cost plot.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algo: Algorithm,
    pub c: f64,
    pub trials: usize,
    /// Rows excluded from the means because they carry an error tag.
    pub failed: usize,
    pub mean_rel_error: f64,
    pub mean_total_queries: f64,
    pub mean_wall_time_ns: f64,
}

/// Groups in order of first appearance; failed rows are counted, not averaged.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = Vec::new();
    let mut sums: Vec<(f64, f64, f64)> = Vec::new();
    for r in records {
        let idx = match rows.iter().position(|s| s.algo == r.algo && s.c == r.c) {
            Some(i) => i,
            None => {
                rows.push(SummaryRow {
                    algo: r.algo,
                    c: r.c,
                    trials: 0,
                    failed: 0,
                    mean_rel_error: f64::NAN,
                    mean_total_queries: f64::NAN,
                    mean_wall_time_ns: f64::NAN,
                });
                sums.push((0.0, 0.0, 0.0));
                rows.len() - 1
            }
        };
        rows[idx].trials += 1;
        if r.is_failed() {
            rows[idx].failed += 1;
            continue;
        }
        let s = &mut sums[idx];
        s.0 += r.rel_error;
        s.1 += r.total_queries as f64;
        s.2 += r.wall_time_ns as f64;
    }
    for (row, (e, q, w)) in rows.iter_mut().zip(sums) {
        let ok = (row.trials - row.failed) as f64;
        if ok > 0.0 {
            row.mean_rel_error = e / ok;
            row.mean_total_queries = q / ok;
            row.mean_wall_time_ns = w / ok;
        }
    }
    rows
}

pub fn render_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::from("algo,c,trials,failed,mean_rel_error,mean_total_queries,mean_wall_time_ns\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6e},{:.6e},{:.6e}",
            r.algo, r.c, r.trials, r.failed, r.mean_rel_error, r.mean_total_queries, r.mean_wall_time_ns
        );
    }
    out
}
