//! Two-term weak-field gravity of an oscillating source mass.
//!
//! The potential of a mass `M` at distance `r` is `φ = −MG/r − Λr²c²/6`.
//! A sphere oscillating as `R0 + δ_R sin(Ωt)` imprints on a cloud at
//! `x ∈ [0, L]` a term linear in `x` and resonant at `Ω`; its amplitude
//! [`acceleration_amplitude`] is the observable the condensate probes.

use log::warn;

use crate::constants::C;
use crate::{Error, Result};

/// Hard limit on the expansion parameter of [`potential_series`].
pub const EXPANSION_LIMIT: f64 = 0.5;
/// Above this the series is still evaluated but a warning is logged.
pub const EXPANSION_WARN: f64 = 0.1;
/// Default upper bound on `δ_R / R0`.
pub const DEFAULT_MAX_AMPLITUDE_RATIO: f64 = 0.1;

/// Newton's constant and the cosmological constant under test.
///
/// The speed of light is not a field; it is always [`C`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravityConstants {
    /// G, N·m²/kg².
    pub newton: f64,
    /// Λ, 1/m².
    pub lambda: f64,
}

impl GravityConstants {
    /// Both constants must be finite and non-negative. Zero is allowed so the
    /// Newtonian and Λ parts can be isolated.
    pub fn new(newton: f64, lambda: f64) -> Result<Self> {
        if !(newton.is_finite() && newton >= 0.0) {
            return Err(Error::domain(format!(
                "G must be finite and >= 0, got {newton}"
            )));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::domain(format!(
                "Lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self { newton, lambda })
    }

    pub fn newtonian(newton: f64) -> Self {
        Self {
            newton,
            lambda: 0.0,
        }
    }

    pub fn c(&self) -> f64 {
        C
    }
}

/// Oscillating sphere: mass, mean distance, amplitude and angular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceMass {
    /// M, kg.
    pub mass: f64,
    /// R0, m.
    pub r0: f64,
    /// δ_R, m.
    pub delta_r: f64,
    /// Ω, rad/s.
    pub omega: f64,
}

impl SourceMass {
    pub fn new(mass: f64, r0: f64, delta_r: f64, omega: f64) -> Result<Self> {
        Self::with_max_ratio(mass, r0, delta_r, omega, DEFAULT_MAX_AMPLITUDE_RATIO)
    }

    pub fn with_max_ratio(
        mass: f64,
        r0: f64,
        delta_r: f64,
        omega: f64,
        max_ratio: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("M", mass),
            ("R0", r0),
            ("deltaR", delta_r),
            ("Omega", omega),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if delta_r / r0 >= max_ratio {
            return Err(Error::domain(format!(
                "deltaR/R0 = {:.3e} must be below {max_ratio}",
                delta_r / r0
            )));
        }
        Ok(Self {
            mass,
            r0,
            delta_r,
            omega,
        })
    }

    /// Same sphere moved to a different mean distance.
    pub fn at_distance(&self, r0: f64) -> Result<Self> {
        Self::new(self.mass, r0, self.delta_r, self.omega)
    }
}

/// `φ(r) = −MG/r − Λr²c²/6`, J/kg.
pub fn potential(consts: &GravityConstants, mass: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("distance must be positive, got {r}")));
    }
    Ok(-mass * consts.newton / r - consts.lambda * r * r * C * C / 6.0)
}

/// Force on a test mass `m`: `−GMm/r² + Λrmc²/3`, N.
pub fn force(consts: &GravityConstants, mass: f64, test_mass: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("distance must be positive, got {r}")));
    }
    if !(test_mass > 0.0) {
        return Err(Error::domain(format!(
            "test mass must be positive, got {test_mass}"
        )));
    }
    Ok(-consts.newton * mass * test_mass / (r * r) + consts.lambda * r * test_mass * C * C / 3.0)
}

/// Distance between the sphere centre and the point `x` of the cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    /// r(x, t), m.
    pub distance: f64,
    /// Δ = (δ_R sin Ωt + x) / R0, so that r = R0 (1 + Δ).
    pub delta: f64,
}

pub fn separation(src: &SourceMass, x: f64, t: f64) -> Separation {
    let offset = src.delta_r * (src.omega * t).sin() + x;
    Separation {
        distance: src.r0 + offset,
        delta: offset / src.r0,
    }
}

/// Per-order terms of the expansion of φ(x, t) around R0.
///
/// Index `k` of each vector holds the coefficient of `Δᵏ` already multiplied
/// out, so summing a vector gives that part of the truncated potential.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSeries {
    pub delta: f64,
    pub newtonian: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl PotentialSeries {
    pub fn total(&self) -> f64 {
        self.newtonian.iter().chain(&self.lambda).sum()
    }

    pub fn newtonian_sum(&self) -> f64 {
        self.newtonian.iter().sum()
    }

    pub fn lambda_sum(&self) -> f64 {
        self.lambda.iter().sum()
    }
}

pub fn potential_series(
    consts: &GravityConstants,
    src: &SourceMass,
    x: f64,
    t: f64,
    order: usize,
) -> Result<PotentialSeries> {
    if !(1..=2).contains(&order) {
        return Err(Error::domain(format!(
            "expansion order must be 1 or 2, got {order}"
        )));
    }
    let delta = separation(src, x, t).delta;
    if !(delta.abs() < EXPANSION_LIMIT) {
        return Err(Error::ExpansionInvalid {
            delta,
            limit: EXPANSION_LIMIT,
        });
    }
    if delta.abs() > EXPANSION_WARN {
        warn!(
            "expansion parameter |Δ| = {:.3} exceeds {EXPANSION_WARN}",
            delta.abs()
        );
    }
    let phi_g = -src.mass * consts.newton / src.r0;
    let phi_l = -consts.lambda * src.r0 * src.r0 * C * C / 6.0;
    let newtonian_coeffs = [1.0, -1.0, 1.0];
    let lambda_coeffs = [1.0, 2.0, 1.0];
    let powers = [1.0, delta, delta * delta];
    let newtonian = (0..=order)
        .map(|k| phi_g * newtonian_coeffs[k] * powers[k])
        .collect();
    let lambda = (0..=order)
        .map(|k| phi_l * lambda_coeffs[k] * powers[k])
        .collect();
    Ok(PotentialSeries {
        delta,
        newtonian,
        lambda,
    })
}

/// Which terms of the resonant amplitude to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AmplitudeOrder {
    /// `(2δ_R/R0²)(MG/R0 + ΛR0²c²/6)`.
    #[default]
    Leading,
    /// Adds the `(3/2)(δ_R/R0)²` correction to the Newtonian term.
    NextOrder,
}

/// Amplitude of the part of the acceleration that is linear in `x` and
/// oscillates at `Ω`, m/s².
pub fn acceleration_amplitude(consts: &GravityConstants, src: &SourceMass) -> f64 {
    acceleration_amplitude_with(consts, src, AmplitudeOrder::Leading)
}

pub fn acceleration_amplitude_with(
    consts: &GravityConstants,
    src: &SourceMass,
    order: AmplitudeOrder,
) -> f64 {
    let ratio = src.delta_r / src.r0;
    let newtonian_factor = match order {
        AmplitudeOrder::Leading => 1.0,
        // the sin³ harmonic of the Δ⁴ term feeds back into sin(Ωt)
        AmplitudeOrder::NextOrder => 1.0 + 1.5 * ratio * ratio,
    };
    let newtonian = src.mass * consts.newton / src.r0 * newtonian_factor;
    let lambda = consts.lambda * src.r0 * src.r0 * C * C / 6.0;
    2.0 * src.delta_r / (src.r0 * src.r0) * (newtonian + lambda)
}

/// ΔG = Δa R0³ / (2 M δ_R).
pub fn delta_g_from_delta_a(delta_a: f64, src: &SourceMass) -> f64 {
    delta_a * src.r0.powi(3) / (2.0 * src.mass * src.delta_r)
}

/// ΔΛ = 3 Δa / (δ_R c²).
pub fn delta_lambda_from_delta_a(delta_a: f64, src: &SourceMass) -> f64 {
    delta_a * 3.0 / (src.delta_r * C * C)
}
