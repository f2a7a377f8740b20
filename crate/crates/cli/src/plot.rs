//! Plot-data emission: per-relaxation (n_star, total_ops) series for
//! external plotting. No rendering here; the output is a plain table.

use anyhow::bail;
use convexrelax_core::tradeoff::{runtime_account, TradeoffRecord};

pub const PLOT_HEADER: &str = "example,relaxation,p,n_star,total_ops";

/// One row per record, two data columns per series, sorted by
/// (example, relaxation, p) regardless of input order.
pub fn emit_plot_data(records: &[TradeoffRecord]) -> anyhow::Result<String> {
    if records.is_empty() {
        bail!("no records to plot");
    }
    let mut rows: Vec<&TradeoffRecord> = records.iter().collect();
    rows.sort_by(|a, b| {
        a.example
            .label()
            .cmp(b.example.label())
            .then(a.relaxation.cmp(&b.relaxation))
            .then(a.p.cmp(&b.p))
    });
    let mut out = String::from(PLOT_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.example.label(),
            r.relaxation,
            r.p,
            r.n_star,
            runtime_account(r.n_star, r.p, r.proj_ops),
        ));
    }
    Ok(out)
}
