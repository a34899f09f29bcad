//! Least-squares fits for scaling measurements.

/// y ≈ c·x^d, fitted on (ln x, ln y).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFit {
    pub c: f64,
    pub d: f64,
}

/// y ≈ slope·x + intercept.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares. `None` with fewer than two distinct x values.
pub fn fit_linear(points: &[(f64, f64)]) -> Option<LinearFit> {
    let k = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * k {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(LinearFit { slope, intercept: my - slope * mx })
}

/// Fits c·x^d to points with positive coordinates (others are ignored).
pub fn fit_power(points: &[(f64, f64)]) -> Option<PowerFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 > 0.0 && p.1 > 0.0)
        .map(|p| (p.0.ln(), p.1.ln()))
        .collect();
    let l = fit_linear(&logs)?;
    Some(PowerFit { c: l.intercept.exp(), d: l.slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power() {
        let pts: Vec<(f64, f64)> = (2..=6).map(|n| (n as f64, 3.0 * (n as f64).powi(4))).collect();
        let f = fit_power(&pts).unwrap();
        assert!((f.d - 4.0).abs() < 1e-9);
        assert!((f.c - 3.0).abs() < 1e-6);
    }

    #[test]
    fn recovers_line() {
        let f = fit_linear(&[(1.0, 5.0), (2.0, 7.0), (4.0, 11.0)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 3.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_linear(&[(1.0, 1.0)]).is_none());
        assert!(fit_linear(&[(2.0, 1.0), (2.0, 3.0)]).is_none());
        assert!(fit_power(&[(0.0, 1.0), (1.0, 0.0)]).is_none());
    }
}
