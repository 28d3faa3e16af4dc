//! Small numerical helpers shared by the estimators and metrics.

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Mean squared difference between two equally long slices.
pub fn mse(pred: &[f64], target: &[f64]) -> f64 {
    debug_assert_eq!(pred.len(), target.len());
    if pred.is_empty() {
        return 0.0;
    }
    let sse = compensated_sum(pred.iter().zip(target).map(|(p, t)| (p - t) * (p - t)));
    sse / pred.len() as f64
}

pub fn norm2(v: &[f64]) -> f64 {
    compensated_sum(v.iter().map(|x| x * x)).sqrt()
}

/// Mean of `values`, computed as an offset from the first element so that a
/// slice of identical values returns that value bit-exactly.
pub fn shifted_mean(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else {
        return f64::NAN;
    };
    let offset = compensated_sum(values.iter().map(|v| v - first));
    first + offset / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let v = [1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(v), 1.0);
    }

    #[test]
    fn shifted_mean_is_exact_on_constant_input() {
        let v = [0.1; 10];
        assert_eq!(shifted_mean(&v), 0.1);
        assert_eq!(shifted_mean(&[1.0, 2.0, 3.0]), 2.0);
    }

    #[test]
    fn mse_simple() {
        assert_eq!(mse(&[0.0, 0.0], &[3.0, 3.0]), 9.0);
        assert_eq!(norm2(&[3.0, 4.0]), 5.0);
    }
}
