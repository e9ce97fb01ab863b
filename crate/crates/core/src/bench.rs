//! Scaling sweep: time of the negative-extension phase against the number of
//! extra statistics it produces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::enumerate_chain_lattice;
use crate::mobius::{mobius_join, MjConfig};
use crate::synth::GeneratorConfig;

fn default_repeats() -> usize {
    3
}

fn default_max_chain_length() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub base: GeneratorConfig,
    /// Population-size multipliers, one point each.
    pub factors: Vec<f64>,
    #[serde(default)]
    pub scale_domains: bool,
    /// Runs per point; the fastest is kept.
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default = "default_max_chain_length")]
    pub max_chain_length: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchPoint {
    pub factor: f64,
    pub extra_statistics: u64,
    pub extra_time_s: f64,
    pub positive_time_s: f64,
    pub total_rows: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub points: Vec<BenchPoint>,
    /// Least-squares slope of log(extra time) against log(extra statistics).
    pub slope: Option<f64>,
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be positive".into()));
    }
    let mj = MjConfig {
        verify_identities: false,
        jobs: 1,
    };
    let mut points = Vec::new();
    for &factor in &config.factors {
        let (schema, db) = config.base.scaled(factor, config.scale_domains).generate()?;
        let lattice = enumerate_chain_lattice(&schema, config.max_chain_length)?;
        let mut best: Option<BenchPoint> = None;
        for _ in 0..config.repeats {
            let out = mobius_join(&schema, &db, &lattice, &mj)?;
            let p = BenchPoint {
                factor,
                extra_statistics: out.report.r,
                extra_time_s: out.phases.negative_secs,
                positive_time_s: out.phases.positive_secs,
                total_rows: out.report.total_rows,
            };
            best = Some(match best {
                Some(b) if b.extra_time_s <= p.extra_time_s => b,
                _ => p,
            });
        }
        points.push(best.expect("repeats > 0"));
    }
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.extra_statistics as f64, p.extra_time_s))
        .collect();
    Ok(BenchReport {
        slope: loglog_slope(&xy),
        points,
    })
}

/// Slope of the least-squares line through `(ln x, ln y)`, skipping
/// non-positive points. `None` with fewer than two usable points or no
/// spread in `x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (10f64.powi(k), 3.0 * 10f64.powi(k).powf(1.1))).collect();
        assert!((loglog_slope(&pts).unwrap() - 1.1).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..1]), None);
        assert_eq!(loglog_slope(&[(1.0, 1.0), (1.0, 2.0)]), None);
    }
}
