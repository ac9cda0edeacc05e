//! Time and frequency grids.

use crate::error::{Error, Result};

/// `0, step, 2·step, …` up to and including `max` (within rounding).
pub fn uniform_grid(step: f64, max: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && max >= 0.0 && step.is_finite() && max.is_finite()) {
        return Err(Error::Config(format!("invalid uniform grid: step {step}, max {max}")));
    }
    let n = (max / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| i as f64 * step).collect())
}

/// `n` points from `min` to `max`, evenly spaced in `ln τ`.
pub fn geometric_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min && n >= 2) {
        return Err(Error::Config(format!(
            "invalid geometric grid: [{min}, {max}] with {n} points"
        )));
    }
    let ratio = (max / min).ln() / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| min * (ratio * i as f64).exp()).collect();
    out[n - 1] = max;
    Ok(out)
}

/// `n` evenly spaced points over `[min, max]`.
pub fn linear_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(max > min && n >= 2) {
        return Err(Error::Config(format!(
            "invalid linear grid: [{min}, {max}] with {n} points"
        )));
    }
    let step = (max - min) / (n - 1) as f64;
    Ok((0..n).map(|i| min + step * i as f64).collect())
}

/// Sorted union of grids; points closer than `1e-12·max(1, |τ|)` are merged.
pub fn merge_grids(grids: &[&[f64]]) -> Vec<f64> {
    let mut all: Vec<f64> = grids.iter().flat_map(|g| g.iter().copied()).collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|b, a| (*b - *a).abs() <= 1e-12 * a.abs().max(1.0));
    all
}

/// Checks that a delay grid starts at zero and is strictly ascending.
pub fn validate_delay_grid(tau: &[f64]) -> Result<()> {
    if tau.first() != Some(&0.0) {
        return Err(Error::Config("delay grid must start at τ = 0".into()));
    }
    if tau.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("delay grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Linear interpolation on an ascending grid; returns `None` outside it.
pub fn interpolate_linear(x: &[f64], y: &[f64], at: f64) -> Option<f64> {
    if x.is_empty() || at < x[0] || at > x[x.len() - 1] {
        return None;
    }
    let i = x.partition_point(|&v| v <= at);
    if i == 0 {
        return Some(y[0]);
    }
    if i >= x.len() {
        return Some(y[x.len() - 1]);
    }
    let (x0, x1) = (x[i - 1], x[i]);
    let w = (at - x0) / (x1 - x0);
    Some(y[i - 1] * (1.0 - w) + y[i] * w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_includes_endpoint() {
        let g = uniform_grid(0.005, 20.0).unwrap();
        assert_eq!(g.len(), 4001);
        assert!((g[4000] - 20.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_endpoints() {
        let g = geometric_grid(1e-3, 7000.0, 2000).unwrap();
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[1999], 7000.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn merge_dedups() {
        let a = [0.0, 1.0, 2.0];
        let b = [1.0, 1.5, 3.0];
        assert_eq!(merge_grids(&[&a, &b]), vec![0.0, 1.0, 1.5, 2.0, 3.0]);
    }

    #[test]
    fn interpolation() {
        let x = [0.0, 1.0, 3.0];
        let y = [0.0, 2.0, 6.0];
        assert_eq!(interpolate_linear(&x, &y, 2.0), Some(4.0));
        assert_eq!(interpolate_linear(&x, &y, 3.0), Some(6.0));
        assert_eq!(interpolate_linear(&x, &y, 3.5), None);
    }

    #[test]
    fn delay_grid_validation() {
        assert!(validate_delay_grid(&[0.0, 1.0]).is_ok());
        assert!(validate_delay_grid(&[0.1, 1.0]).is_err());
        assert!(validate_delay_grid(&[0.0, 1.0, 1.0]).is_err());
    }
}
