use std::fmt;

use super::run::{Baseline, SweepRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    TrainMseOsa,
    TestMseOsa,
    TrainMseFree,
    TestMseFree,
    ParamNorm,
    Cond,
    BaselineTestMseOsa,
    BaselineTestMseFree,
}

impl Metric {
    /// Metrics aggregated per capacity.
    pub const PER_CAPACITY: [Metric; 6] = [
        Metric::TrainMseOsa,
        Metric::TestMseOsa,
        Metric::TrainMseFree,
        Metric::TestMseFree,
        Metric::ParamNorm,
        Metric::Cond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::TrainMseOsa => "train_mse_osa",
            Metric::TestMseOsa => "test_mse_osa",
            Metric::TrainMseFree => "train_mse_free",
            Metric::TestMseFree => "test_mse_free",
            Metric::ParamNorm => "param_norm",
            Metric::Cond => "cond",
            Metric::BaselineTestMseOsa => "baseline_test_mse_osa",
            Metric::BaselineTestMseFree => "baseline_test_mse_free",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::PER_CAPACITY
            .into_iter()
            .chain([Metric::BaselineTestMseOsa, Metric::BaselineTestMseFree])
            .find(|m| m.name() == s)
    }

    pub fn of(self, r: &SweepRecord) -> Option<f64> {
        match self {
            Metric::TrainMseOsa => Some(r.train_mse_osa),
            Metric::TestMseOsa => Some(r.test_mse_osa),
            Metric::TrainMseFree => Some(r.train_mse_free),
            Metric::TestMseFree => Some(r.test_mse_free),
            Metric::ParamNorm => r.param_norm,
            Metric::Cond => r.cond,
            Metric::BaselineTestMseOsa | Metric::BaselineTestMseFree => None,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub capacity: usize,
    pub ratio: f64,
    pub metric: Metric,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

/// Per-capacity quantiles for one experiment label.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub experiment: String,
    pub rows: Vec<SummaryRow>,
}

impl SweepSummary {
    pub fn get(&self, capacity: usize, metric: Metric) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.capacity == capacity && r.metric == metric)
    }

    /// Medians of `metric` in ascending capacity order.
    pub fn medians(&self, metric: Metric) -> Vec<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.metric == metric)
            .map(|r| (r.capacity, r.median))
            .collect()
    }
}

/// Quantile with linear interpolation between order statistics
/// (`h = (n - 1) p`). Infinite values sort last; an interpolation that
/// touches one returns it unless the weight on it is zero.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let (i, frac) = (h.floor() as usize, h - h.floor());
    let lo = sorted[i];
    if frac == 0.0 {
        return lo;
    }
    let hi = sorted[i + 1];
    if hi.is_infinite() || lo.is_infinite() {
        return hi;
    }
    lo + frac * (hi - lo)
}

/// Groups records by label (first-appearance order) and capacity
/// (ascending). Values absent for a metric are skipped; a metric with no
/// values at some capacity gets no row.
pub fn summarize(records: &[SweepRecord], baseline: Option<&Baseline>) -> Vec<SweepSummary> {
    let mut labels: Vec<&str> = Vec::new();
    for r in records {
        if !labels.contains(&r.experiment.as_str()) {
            labels.push(&r.experiment);
        }
    }
    labels
        .into_iter()
        .map(|label| {
            let mine: Vec<&SweepRecord> = records.iter().filter(|r| r.experiment == label).collect();
            let mut caps: Vec<(usize, f64)> = mine.iter().map(|r| (r.capacity, r.ratio)).collect();
            caps.sort_by_key(|c| c.0);
            caps.dedup_by_key(|c| c.0);
            let mut rows = Vec::new();
            for (capacity, ratio) in caps {
                for metric in Metric::PER_CAPACITY {
                    let mut v: Vec<f64> = mine
                        .iter()
                        .filter(|r| r.capacity == capacity)
                        .filter_map(|r| metric.of(r))
                        .filter(|x| !x.is_nan())
                        .collect();
                    if v.is_empty() {
                        continue;
                    }
                    v.sort_by(f64::total_cmp);
                    rows.push(SummaryRow {
                        capacity,
                        ratio,
                        metric,
                        median: quantile(&v, 0.5),
                        q25: quantile(&v, 0.25),
                        q75: quantile(&v, 0.75),
                    });
                }
            }
            if let Some(b) = baseline {
                for (metric, value) in [
                    (Metric::BaselineTestMseOsa, b.test_mse_osa),
                    (Metric::BaselineTestMseFree, b.test_mse_free),
                ] {
                    rows.push(SummaryRow { capacity: b.capacity, ratio: b.ratio, metric, median: value, q25: value, q75: value });
                }
            }
            SweepSummary { experiment: label.to_string(), rows }
        })
        .collect()
}
