//! Polynomial-versus-exponential classification of class-ball counts.
//!
//! Any finite-radius verdict is a heuristic; the report carries the fit
//! window and both residuals so callers can judge it.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Log-log RMS residual below which a polynomial fit is accepted.
pub const POLYNOMIAL_RESIDUAL: f64 = 0.15;
/// Amount by which the log-linear fit must beat the log-log fit to call
/// the growth exponential.
pub const EXPONENTIAL_MARGIN: f64 = 0.02;
/// Fewest radii a fit window may contain.
pub const MIN_WINDOW: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum GrowthVerdict {
    Polynomial { degree: f64 },
    Exponential,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    /// `N(r)` for `r = 1..=counts.len()`.
    pub counts: Vec<u64>,
    pub degree: f64,
    /// `max_r N(r) / r^degree`.
    pub constant: f64,
    pub verdict: GrowthVerdict,
    /// Inclusive radius range used for the fit.
    pub window: (usize, usize),
    pub loglog_residual: f64,
    pub loglinear_residual: f64,
}

struct LineFit {
    slope: f64,
    rms: f64,
}

fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    LineFit { slope, rms: (ss / n).sqrt() }
}

/// Fits `log N(r)` against `log r` and against `r`.
///
/// The window is the outer half `[R/2, R]` of the radii (or the positive
/// counts, if fewer), keeping at least [`MIN_WINDOW`] radii. It is shrunk
/// from the left until one of the two fits is acceptable (residual below
/// [`POLYNOMIAL_RESIDUAL`]) or the minimum size is reached.
pub fn growth_fit(counts: &[u64]) -> Result<GrowthReport> {
    if counts.len() < MIN_WINDOW {
        return input(format!("growth fit needs at least {MIN_WINDOW} counts"));
    }
    if counts.windows(2).any(|w| w[1] < w[0]) {
        return input("class-ball counts must be non-decreasing");
    }
    let Some(first) = counts.iter().position(|&c| c > 0) else {
        return input("all class-ball counts are zero");
    };
    if counts.len() - first < MIN_WINDOW {
        return input("too few positive counts to fit");
    }

    let fit_from = |start: usize| {
        let xs_log: Vec<f64> = (start..counts.len()).map(|i| ((i + 1) as f64).ln()).collect();
        let xs_lin: Vec<f64> = (start..counts.len()).map(|i| (i + 1) as f64).collect();
        let ys: Vec<f64> = counts[start..].iter().map(|&c| (c as f64).ln()).collect();
        (fit_line(&xs_log, &ys), fit_line(&xs_lin, &ys))
    };

    let mut start = first.max((counts.len() / 2).saturating_sub(1)).min(counts.len() - MIN_WINDOW);
    let (mut ll, mut lin) = fit_from(start);
    while ll.rms >= POLYNOMIAL_RESIDUAL
        && lin.rms >= POLYNOMIAL_RESIDUAL
        && counts.len() - (start + 1) >= MIN_WINDOW
    {
        start += 1;
        (ll, lin) = fit_from(start);
    }

    let verdict = if lin.rms + EXPONENTIAL_MARGIN < ll.rms && lin.rms < POLYNOMIAL_RESIDUAL {
        GrowthVerdict::Exponential
    } else if ll.rms < POLYNOMIAL_RESIDUAL {
        GrowthVerdict::Polynomial { degree: ll.slope }
    } else {
        GrowthVerdict::Inconclusive
    };

    let degree = ll.slope;
    let constant = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| c as f64 / ((i + 1) as f64).powf(degree))
        .fold(0.0, f64::max);

    Ok(GrowthReport {
        counts: counts.to_vec(),
        degree,
        constant,
        verdict,
        window: (start + 1, counts.len()),
        loglog_residual: ll.rms,
        loglinear_residual: lin.rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_counts_are_degree_zero() {
        let r = growth_fit(&[1, 1, 1, 1, 1, 1]).unwrap();
        assert!(r.degree.abs() < 1e-12);
        assert!(matches!(r.verdict, GrowthVerdict::Polynomial { .. }));
        assert!((r.constant - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_counts() {
        let counts: Vec<u64> = (1..=12).map(|r| (2.0 * (r as f64).powi(2)).round() as u64).collect();
        let r = growth_fit(&counts).unwrap();
        assert!((1.7..=2.3).contains(&r.degree), "degree {}", r.degree);
        assert!(matches!(r.verdict, GrowthVerdict::Polynomial { .. }));
        for (i, &c) in counts.iter().enumerate() {
            assert!(c as f64 <= r.constant * ((i + 1) as f64).powf(r.degree) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn exponential_counts() {
        let counts: Vec<u64> = (1..=12).map(|r| 1u64 << r).collect();
        let r = growth_fit(&counts).unwrap();
        assert_eq!(r.verdict, GrowthVerdict::Exponential);
    }

    #[test]
    fn errors() {
        assert!(growth_fit(&[0, 0, 0, 0, 0]).is_err());
        assert!(growth_fit(&[1, 2, 1, 3]).is_err());
        assert!(growth_fit(&[1, 2]).is_err());
    }
}
