//! Windowed-sinc FIR low-pass design and causal filtering.

use std::f64::consts::PI;

/// Number of taps of the input-shaping filter.
pub const INPUT_FILTER_TAPS: usize = 64;

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

fn hamming(n: usize, len: usize) -> f64 {
    if len == 1 {
        return 1.0;
    }
    0.54 - 0.46 * (2.0 * PI * n as f64 / (len - 1) as f64).cos()
}

/// Hamming-windowed sinc low-pass with `cutoff` given as a fraction of the
/// Nyquist frequency. Taps are scaled to unit gain at DC.
pub fn design_lowpass(taps: usize, cutoff: f64) -> Vec<f64> {
    assert!(taps > 0);
    let center = (taps - 1) as f64 / 2.0;
    let mut h: Vec<f64> = (0..taps)
        .map(|n| cutoff * sinc(cutoff * (n as f64 - center)) * hamming(n, taps))
        .collect();
    let dc: f64 = h.iter().sum();
    for v in &mut h {
        *v /= dc;
    }
    h
}

/// Causal convolution `y[t] = sum_k h[k] x[t-k]` with zero initial state.
/// The output has the same length as `x`.
pub fn apply_fir(h: &[f64], x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|t| {
            h.iter()
                .take(t + 1)
                .enumerate()
                .map(|(k, hk)| hk * x[t - k])
                .sum()
        })
        .collect()
}
