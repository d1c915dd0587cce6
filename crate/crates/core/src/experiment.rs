//! Synthetic measurement campaigns over a grid of source distances and the
//! weighted linear fit for (G, Λ).
//!
//! Noise comes from ChaCha20 (`rand_chacha`) seeded with a 64-bit seed;
//! replica `i` uses seed `seed ^ i`. Normal deviates use the ziggurat sampler
//! of `rand_distr::StandardNormal`.

use nalgebra::{Matrix2, Vector2};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::constants::C;
use crate::lambda_gravity::{acceleration_amplitude, GravityConstants, SourceMass};
use crate::{Error, Result};

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Eleven equally spaced distances from 50 mm to 150 mm.
pub fn default_grid() -> Vec<f64> {
    (0..11).map(|i| 0.05 + 0.01 * i as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    /// Source distances R0, m.
    pub grid: Vec<f64>,
    pub truth: GravityConstants,
    /// Template for the source; its `r0` is replaced by each grid value.
    pub source: SourceMass,
    /// Per-point acceleration noise, m/s².
    pub sigma_a: f64,
    pub seed: u64,
    pub replicas: usize,
    pub confidence: f64,
}

impl ScanConfig {
    pub fn check(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::domain("R0 grid is empty"));
        }
        if let Some(r) = self.grid.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::domain(format!("R0 grid value {r} must be positive")));
        }
        let mut sorted = self.grid.clone();
        sorted.sort_by(f64::total_cmp);
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::domain(format!("R0 grid value {} is repeated", w[0])));
        }
        if !(self.sigma_a.is_finite() && self.sigma_a >= 0.0) {
            return Err(Error::domain(format!(
                "sigma_a must be non-negative, got {}",
                self.sigma_a
            )));
        }
        if self.replicas == 0 {
            return Err(Error::domain("replicas must be >= 1"));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::domain(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        Ok(())
    }

    fn sources(&self) -> Result<Vec<SourceMass>> {
        self.grid
            .iter()
            .map(|&r| self.source.at_distance(r))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub r0: f64,
    pub a_exp: f64,
    /// Noise-free model value at the truth constants.
    pub a_th: f64,
    pub sigma: f64,
}

/// Measurements of replica 0.
pub fn simulate_measurements(scan: &ScanConfig) -> Result<Vec<Measurement>> {
    simulate_replica(scan, 0)
}

pub fn simulate_replica(scan: &ScanConfig, replica: u64) -> Result<Vec<Measurement>> {
    scan.check()?;
    let mut rng = ChaCha20Rng::seed_from_u64(scan.seed ^ replica);
    scan.sources()?
        .iter()
        .map(|src| {
            let a_th = acceleration_amplitude(&scan.truth, src);
            let eps: f64 = StandardNormal.sample(&mut rng);
            Ok(Measurement {
                r0: src.r0,
                a_exp: a_th + scan.sigma_a * eps,
                a_th,
                sigma: scan.sigma_a,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub g_hat: f64,
    pub lambda_hat: f64,
    pub sigma_g: f64,
    pub sigma_lambda: f64,
    /// Covariance of (G, Λ).
    pub covariance: Matrix2<f64>,
    pub chi2: f64,
    pub dof: usize,
    pub lambda_upper: f64,
    /// `a_exp − a_fit` per point.
    pub residuals: Vec<f64>,
}

/// Model columns at one distance: `(2Mδ_R/R0³, δ_R c²/3)`.
pub fn design_row(src: &SourceMass) -> [f64; 2] {
    [
        2.0 * src.mass * src.delta_r / src.r0.powi(3),
        src.delta_r * C * C / 3.0,
    ]
}

/// Weighted least squares for `a(R0) = G x₁(R0) + Λ x₂`.
///
/// Columns are scaled to unit weighted norm before forming the normal
/// equations; raw columns differ by some sixty orders of magnitude.
pub fn fit(data: &[Measurement], source: &SourceMass, confidence: f64) -> Result<FitResult> {
    if data.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "{} points, need at least 3",
            data.len()
        )));
    }
    let distinct = data.iter().any(|m| m.r0 != data[0].r0);
    if !distinct {
        return Err(Error::DegenerateFit(
            "all points share one R0; G and Lambda are not separable".into(),
        ));
    }
    if data.iter().any(|m| !(m.sigma > 0.0)) {
        return Err(Error::DegenerateFit(
            "every point needs a positive sigma".into(),
        ));
    }
    let rows: Vec<[f64; 2]> = data
        .iter()
        .map(|m| source.at_distance(m.r0).map(|s| design_row(&s)))
        .collect::<Result<_>>()?;
    let mut norms = [0.0f64; 2];
    for (row, m) in rows.iter().zip(data) {
        for j in 0..2 {
            norms[j] += (row[j] / m.sigma).powi(2);
        }
    }
    let norms = norms.map(f64::sqrt);
    let mut normal = Matrix2::zeros();
    let mut rhs = Vector2::zeros();
    for (row, m) in rows.iter().zip(data) {
        let x = Vector2::new(row[0] / (m.sigma * norms[0]), row[1] / (m.sigma * norms[1]));
        normal += x * x.transpose();
        rhs += x * (m.a_exp / m.sigma);
    }
    let condition = {
        let ev = normal.symmetric_eigenvalues();
        ev.max() / ev.min()
    };
    if !(condition.is_finite() && condition < 1e12) {
        return Err(Error::DegenerateFit(format!(
            "design matrix condition number {condition:.3e}"
        )));
    }
    let inv = normal
        .try_inverse()
        .ok_or_else(|| Error::DegenerateFit("singular normal matrix".into()))?;
    let scaled = inv * rhs;
    let unscale = Matrix2::new(1.0 / norms[0], 0.0, 0.0, 1.0 / norms[1]);
    let beta = unscale * scaled;
    let covariance = unscale * inv * unscale;
    let covariance = (covariance + covariance.transpose()) * 0.5;
    let residuals: Vec<f64> = rows
        .iter()
        .zip(data)
        .map(|(row, m)| m.a_exp - (beta[0] * row[0] + beta[1] * row[1]))
        .collect();
    let chi2 = residuals
        .iter()
        .zip(data)
        .map(|(r, m)| (r / m.sigma).powi(2))
        .sum();
    let sigma_lambda = covariance[(1, 1)].sqrt();
    Ok(FitResult {
        g_hat: beta[0],
        lambda_hat: beta[1],
        sigma_g: covariance[(0, 0)].sqrt(),
        sigma_lambda,
        covariance,
        chi2,
        dof: data.len() - 2,
        lambda_upper: lambda_upper_limit(beta[1], sigma_lambda, confidence)?,
        residuals,
    })
}

/// One-sided limit `max(0, Λ̂) + z(confidence) σ_Λ`.
pub fn lambda_upper_limit(lambda_hat: f64, sigma_lambda: f64, confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::domain(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let z = Normal::standard().inverse_cdf(confidence);
    Ok(lambda_hat.max(0.0) + z * sigma_lambda)
}

/// Fit of the single-parameter model `a = G x₁` (Λ column dropped).
pub fn fit_newton_only(data: &[Measurement], source: &SourceMass) -> Result<(f64, f64)> {
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for m in data {
        let x = design_row(&source.at_distance(m.r0)?)[0] / m.sigma;
        sxx += x * x;
        sxy += x * m.a_exp / m.sigma;
    }
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("no information on G".into()));
    }
    Ok((sxy / sxx, sxx.sqrt().recip()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint {
    pub r0: f64,
    /// `(a_exp − a_th)/a_th`.
    pub relative: f64,
    /// `σ/a_th`.
    pub band: f64,
}

/// Relative deviation from the truth model and the expected ±1σ band.
pub fn residual_report(data: &[Measurement]) -> Vec<ResidualPoint> {
    data.iter()
        .map(|m| ResidualPoint {
            r0: m.r0,
            relative: (m.a_exp - m.a_th) / m.a_th,
            band: m.sigma / m.a_th,
        })
        .collect()
}

/// Simulates and fits every replica; results are in replica order.
pub fn run_campaign(scan: &ScanConfig) -> Result<Vec<FitResult>> {
    scan.check()?;
    (0..scan.replicas as u64)
        .into_par_iter()
        .map(|i| fit(&simulate_replica(scan, i)?, &scan.source, scan.confidence))
        .collect()
}
