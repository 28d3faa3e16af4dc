use crate::error::{invalid, Result};

/// Capacities `round(r * rows)` for `points` log-uniform ratios `r` in
/// `[lo_ratio, hi_ratio]`, deduplicated and ascending. The threshold
/// capacity `rows` is always included when the range brackets ratio 1.
pub fn build_grid(rows: usize, lo_ratio: f64, hi_ratio: f64, points: usize) -> Result<Vec<usize>> {
    if rows == 0 {
        return Err(invalid("rows", "must be positive"));
    }
    if !(lo_ratio > 0.0 && lo_ratio.is_finite()) {
        return Err(invalid("lo_ratio", format!("must be finite and > 0, got {lo_ratio}")));
    }
    if !(hi_ratio >= lo_ratio && hi_ratio.is_finite()) {
        return Err(invalid("hi_ratio", format!("must be finite and >= lo_ratio, got {hi_ratio}")));
    }
    if points < 2 {
        return Err(invalid("points", format!("must be at least 2, got {points}")));
    }
    let (a, b) = (lo_ratio.ln(), hi_ratio.ln());
    let mut grid: Vec<usize> = (0..points)
        .map(|k| {
            let r = (a + (b - a) * k as f64 / (points - 1) as f64).exp();
            ((r * rows as f64).round() as usize).max(1)
        })
        .collect();
    if lo_ratio <= 1.0 && 1.0 <= hi_ratio {
        grid.push(rows);
    }
    grid.sort_unstable();
    grid.dedup();
    Ok(grid)
}

/// Index of the capacity whose ratio is closest to `ratio` on a log scale.
pub fn nearest_ratio(grid: &[usize], rows: usize, ratio: f64) -> Option<usize> {
    let target = ratio.ln();
    grid.iter()
        .enumerate()
        .min_by(|(_, &a), (_, &b)| {
            let da = ((a as f64 / rows as f64).ln() - target).abs();
            let db = ((b as f64 / rows as f64).ln() - target).abs();
            da.total_cmp(&db)
        })
        .map(|(i, _)| i)
}
