use crate::analysis::scan::{Column, ScanResult};
use crate::scalar::Real;
use crate::{Error, Result};

pub const MIN_FIT_POINTS: usize = 4;

/// Least-squares fit of `log10 y = slope·log10 ε + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in log10 units.
    pub max_residual: f64,
    pub points: usize,
}

/// Fits a power law through the points whose value exceeds `floor`.
pub fn fit_power_law(points: &[(f64, f64)], floor: f64) -> Result<OrderFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > floor && y.is_finite())
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let n = logs.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::Fit(format!("{n} points above floor {floor:e}, need {MIN_FIT_POINTS}")));
    }
    let nf = n as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all points share one ε".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = logs.iter().map(|(x, y)| (y - slope * x - intercept).abs()).fold(0.0, f64::max);
    Ok(OrderFit { slope, intercept, max_residual, points: n })
}

/// Fits one column of a scan, excluding values at or below the precision
/// floor `10^(2−digits)`.
pub fn fit_order<T: Real>(scan: &ScanResult<T>, column: Column) -> Result<OrderFit> {
    let pts: Vec<(f64, f64)> = scan.column(column).iter().map(|(s, v)| (s.to_f64(), v.to_f64())).collect();
    fit_power_law(&pts, T::noise_floor(2).to_f64())
}
