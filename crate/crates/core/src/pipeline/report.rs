//! Where the time goes: `find_isomorphisms` vs `find_mcs` vs everything else.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::pair::{PairResult, TimingBreakdown};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownRow {
    pub label: String,
    pub find_iso_calls: usize,
    pub find_mcs_calls: usize,
    pub total_seconds: f64,
    pub remaining_seconds: f64,
    pub iso_share: f64,
    pub mcs_share: f64,
    pub remaining_share: f64,
}

impl BreakdownRow {
    fn new(label: String, t: &TimingBreakdown) -> Self {
        let pct = |x: f64| {
            if t.total_seconds > 0.0 {
                100.0 * x / t.total_seconds
            } else {
                0.0
            }
        };
        let (iso_share, mcs_share) = (pct(t.find_iso_seconds), pct(t.find_mcs_seconds));
        BreakdownRow {
            label,
            find_iso_calls: t.find_iso_calls,
            find_mcs_calls: t.find_mcs_calls,
            total_seconds: t.total_seconds,
            remaining_seconds: t.remaining_seconds,
            iso_share,
            mcs_share,
            // with nothing measured the whole (empty) budget is "remaining"
            remaining_share: 100.0 - iso_share - mcs_share,
        }
    }

    pub fn calls(&self) -> usize {
        self.find_iso_calls + self.find_mcs_calls
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownReport {
    pub pairs: Vec<BreakdownRow>,
    pub aggregate: BreakdownRow,
}

pub fn breakdown_report(results: &[PairResult]) -> BreakdownReport {
    let mut total = TimingBreakdown::default();
    let pairs = results
        .iter()
        .map(|r| {
            let t = &r.timing;
            total.find_iso_calls += t.find_iso_calls;
            total.find_mcs_calls += t.find_mcs_calls;
            total.find_iso_seconds += t.find_iso_seconds;
            total.find_mcs_seconds += t.find_mcs_seconds;
            total.total_seconds += t.total_seconds;
            total.remaining_seconds += t.remaining_seconds;
            BreakdownRow::new(format!("{}-{}", r.id_a, r.id_b), t)
        })
        .collect();
    BreakdownReport {
        pairs,
        aggregate: BreakdownRow::new("total".to_string(), &total),
    }
}

impl BreakdownReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<12} {:>9} {:>9} {:>12} {:>8} {:>8} {:>10}",
            "pair", "iso_calls", "mcs_calls", "total_s", "iso_%", "mcs_%", "remaining_%"
        );
        for row in self.pairs.iter().chain(std::iter::once(&self.aggregate)) {
            let _ = writeln!(
                out,
                "{:<12} {:>9} {:>9} {:>12.6} {:>8.2} {:>8.2} {:>10.2}",
                row.label,
                row.find_iso_calls,
                row.find_mcs_calls,
                row.total_seconds,
                row.iso_share,
                row.mcs_share,
                row.remaining_share
            );
        }
        out
    }
}
