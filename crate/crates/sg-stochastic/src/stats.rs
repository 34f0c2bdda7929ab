use serde::Serialize;

/// Compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = compensated_sum(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = compensated_sum(xs.iter().map(|x| (x - mean) * (x - mean))) / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
}

/// Least-squares line through `(x, y)`.
///
/// With `sigma` the fit is weighted by `1/σ²` and the slope error follows
/// from the weights; otherwise it comes from the residuals.
pub fn fit_line(x: &[f64], y: &[f64], sigma: Option<&[f64]>) -> LineFit {
    let w: Vec<f64> = match sigma {
        Some(s) => s.iter().map(|s| 1.0 / (s * s).max(1e-300)).collect(),
        None => vec![1.0; x.len()],
    };
    let sw = compensated_sum(w.iter().copied());
    let mx = compensated_sum(w.iter().zip(x).map(|(w, x)| w * x)) / sw;
    let my = compensated_sum(w.iter().zip(y).map(|(w, y)| w * y)) / sw;
    let sxx = compensated_sum(w.iter().zip(x).map(|(w, x)| w * (x - mx) * (x - mx)));
    let sxy = compensated_sum(w.iter().zip(x).zip(y).map(|((w, x), y)| w * (x - mx) * (y - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_se = if sigma.is_some() {
        (1.0 / sxx).sqrt()
    } else if x.len() > 2 {
        let rss = compensated_sum(x.iter().zip(y).map(|(x, y)| (y - intercept - slope * x).powi(2)));
        (rss / (x.len() as f64 - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    LineFit { slope, intercept, slope_se }
}

/// Fit `log y` against `log x`, propagating standard errors of `y`.
pub fn fit_power_law(x: &[f64], y: &[f64], y_se: Option<&[f64]>) -> LineFit {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let s: Option<Vec<f64>> = y_se.map(|se| se.iter().zip(y).map(|(s, v)| s / v.abs()).collect());
    fit_line(&lx, &ly, s.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|x| 2.0 - 0.5 * x).collect();
        let f = fit_line(&x, &y, None);
        assert!((f.slope + 0.5).abs() < 1e-12 && (f.intercept - 2.0).abs() < 1e-12);
        assert!(f.slope_se < 1e-12);
    }

    #[test]
    fn power_law_slope() {
        let x = [0.25, 0.125, 0.0625];
        let y: Vec<f64> = x.iter().map(|x: &f64| 3.0 * x.powf(-1.25)).collect();
        assert!((fit_power_law(&x, &y, None).slope + 1.25).abs() < 1e-12);
    }

    #[test]
    fn mean_and_error() {
        let (m, se) = mean_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-12);
    }
}
