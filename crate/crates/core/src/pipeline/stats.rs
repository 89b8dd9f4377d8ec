//! Benchmark statistics and the repeated-run harness.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use super::corpus::{run_corpus, RunManifest};
use super::pair::PairStatus;
use crate::farm::FarmConfig;
use crate::ingest::{FetchConfig, StructureStore};
use crate::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;

/// Arithmetic mean and the 95% normal-approximation half-width
/// `1.96 · s / √n`, with `s` the sample standard deviation.
pub fn mean_ci(samples: &[f64]) -> Result<(f64, f64)> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::NeedSamples(n));
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    let s = (ss / (n - 1) as f64).sqrt();
    Ok((mean, Z_95 * s / (n as f64).sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchStats {
    pub samples: Vec<f64>,
    pub mean: f64,
    pub ci_half_width: f64,
}

impl BenchStats {
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        let (mean, ci_half_width) = mean_ci(&samples)?;
        Ok(BenchStats {
            samples,
            mean,
            ci_half_width,
        })
    }

    /// Per-run table followed by the average and its 95% interval.
    pub fn render_table(&self, title: &str) -> String {
        let mut out = String::new();
        if !title.is_empty() {
            let _ = writeln!(out, "{title}");
        }
        let _ = writeln!(out, "EXECUTIONS\tTIME(seconds)");
        for (i, s) in self.samples.iter().enumerate() {
            let _ = writeln!(out, "{}\t{s:.6}", i + 1);
        }
        let _ = writeln!(
            out,
            "Average time\t{:.7} ±{:.2} at 95% CI",
            self.mean, self.ci_half_width
        );
        out
    }
}

/// Percentage of the baseline time saved: `100 · (a − b) / a`.
pub fn speedup_report(baseline: &BenchStats, other: &BenchStats) -> Result<f64> {
    if baseline.mean.is_nan() || baseline.mean <= 0.0 {
        return Err(Error::NonPositiveBaseline(baseline.mean));
    }
    Ok(100.0 * (baseline.mean - other.mean) / baseline.mean)
}

#[derive(Debug, Clone)]
pub struct BenchRun {
    pub stats: BenchStats,
    pub manifests: Vec<RunManifest>,
}

/// Run the corpus `repetitions` times, each with a fresh structure store
/// over the same on-disk cache, and collect the wall time of each run.
pub fn bench<S: AsRef<str>>(
    ids: &[S],
    config: &PipelineConfig,
    farm: &FarmConfig,
    fetch: &FetchConfig,
    repetitions: usize,
) -> Result<BenchRun> {
    if repetitions < 2 {
        return Err(Error::NeedSamples(repetitions));
    }
    let mut manifests = Vec::with_capacity(repetitions);
    for rep in 0..repetitions {
        let store = StructureStore::new(fetch.clone());
        let run = run_corpus(ids, config, farm, &store)?;
        if let Some(bad) = run.results.iter().find(|r| r.status == PairStatus::Error) {
            return Err(Error::InvalidConfig(format!(
                "bench run {} failed on pair {}-{}: {}",
                rep + 1,
                bad.id_a,
                bad.id_b,
                bad.message.as_deref().unwrap_or("error")
            )));
        }
        log::info!("bench run {} took {:.6} s", rep + 1, run.manifest.wall_seconds);
        manifests.push(run.manifest);
    }
    let stats = BenchStats::from_samples(manifests.iter().map(|m| m.wall_seconds).collect())?;
    Ok(BenchRun { stats, manifests })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_samples_have_zero_width() {
        assert_eq!(mean_ci(&[1.0, 1.0, 1.0, 1.0]).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn two_point_example() {
        // s = √2, half-width = 1.96·√2/√2
        let (m, h) = mean_ci(&[1.0, 3.0]).unwrap();
        assert_eq!(m, 2.0);
        assert!((h - 1.96).abs() < 1e-12);
    }

    #[test]
    fn too_few_samples() {
        assert_eq!(
            mean_ci(&[5.0]).unwrap_err().to_string(),
            "need ≥ 2 samples (got 1)"
        );
        assert!(mean_ci(&[]).is_err());
    }

    #[test]
    fn speedup_arithmetic() {
        let a = BenchStats::from_samples(vec![200.0, 200.0]).unwrap();
        let b = BenchStats::from_samples(vec![100.0, 100.0]).unwrap();
        assert_eq!(speedup_report(&a, &b).unwrap(), 50.0);
        assert_eq!(speedup_report(&a, &a).unwrap(), 0.0);
        let zero = BenchStats::from_samples(vec![0.0, 0.0]).unwrap();
        assert!(speedup_report(&zero, &a).is_err());
    }

    #[test]
    fn table_shape() {
        let s = BenchStats::from_samples(vec![1.5, 2.5]).unwrap();
        let t = s.render_table("");
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "EXECUTIONS\tTIME(seconds)");
        assert_eq!(lines[1], "1\t1.500000");
        assert!(lines[3].starts_with("Average time\t2.0000000 ±"));
    }
}
