//! Condensate-side scalars and the regime checks a run configuration must
//! satisfy.
//!
//! The cloud is a uniform 1-D box of length `L`. Phonon modes have wave
//! numbers `k_n = nπ/L`; the source mass drives the pair `(n, l)` when
//! `n + l` is odd and `Ω = πc_s(n + l)/L`.

use std::f64::consts::PI;

use crate::constants::{Species, HBAR, K_B, SECONDS_PER_DAY};
use crate::{Error, Result};

/// How the condensate density is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityMode {
    /// `N0` atoms in a cylinder of length `L` and diameter `α_WL·L`.
    Geometric,
    /// User-supplied density, m⁻³.
    Explicit(f64),
}

/// Condensate and protocol parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct BecConfig {
    pub species: Species,
    /// Box length L, m.
    pub length: f64,
    /// Width-to-length ratio α_WL.
    pub alpha_wl: f64,
    /// Condensed atoms N0.
    pub condensed_atoms: f64,
    /// Squeezed phonons per mode N_p.
    pub phonons: f64,
    pub n: u32,
    pub l: u32,
    /// Single-run duration t, s.
    pub run_time: f64,
    /// Total integration time τ, s.
    pub integration_time: f64,
    /// Tritter angle θ, rad.
    pub tritter_angle: f64,
    /// Temperature, K.
    pub temperature: f64,
    pub density: DensityMode,
}

/// Largest width-to-length ratio accepted at all.
pub const MAX_ALPHA_WL: f64 = 0.3;

impl Default for BecConfig {
    /// The L = 1000 μm column of the reference parameter set.
    fn default() -> Self {
        Self {
            species: Species::RB87,
            length: 1000e-6,
            alpha_wl: 0.05,
            condensed_atoms: 1e9,
            phonons: 1100.0,
            n: 1,
            l: 2,
            run_time: 1.0,
            integration_time: 60.0 * SECONDS_PER_DAY,
            tritter_angle: 0.31,
            temperature: 0.5e-9,
            density: DensityMode::Geometric,
        }
    }
}

impl BecConfig {
    /// Type-level invariants. Parity of `n + l` is deliberately left to
    /// [`validate`].
    pub fn check(&self) -> Result<()> {
        let positive = [
            ("atom_mass", self.species.mass),
            ("scattering_length", self.species.scattering_length),
            ("three_body_D", self.species.three_body_loss),
            ("L", self.length),
            ("alpha_WL", self.alpha_wl),
            ("N0", self.condensed_atoms),
            ("Np", self.phonons),
            ("t", self.run_time),
            ("tau", self.integration_time),
            ("theta", self.tritter_angle),
            ("temperature", self.temperature),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if let DensityMode::Explicit(n0) = self.density {
            if !(n0.is_finite() && n0 > 0.0) {
                return Err(Error::domain(format!(
                    "explicit density must be positive, got {n0}"
                )));
            }
        }
        if self.n == 0 || self.l == 0 {
            return Err(Error::domain("mode indices must be >= 1"));
        }
        if self.n == self.l {
            return Err(Error::DegeneratePair(self.n));
        }
        if self.alpha_wl > MAX_ALPHA_WL {
            return Err(Error::domain(format!(
                "alpha_WL = {} exceeds {MAX_ALPHA_WL}",
                self.alpha_wl
            )));
        }
        if self.integration_time < self.run_time {
            return Err(Error::domain("integration time tau must be >= run time t"));
        }
        Ok(())
    }

    pub fn density(&self) -> f64 {
        match self.density {
            DensityMode::Geometric => {
                geometric_density(self.condensed_atoms, self.length, self.alpha_wl)
            }
            DensityMode::Explicit(n0) => n0,
        }
    }

    pub fn speed_of_sound(&self) -> f64 {
        speed_of_sound(
            self.density(),
            self.species.scattering_length,
            self.species.mass,
        )
    }

    /// Number of repetitions τ/t, kept real-valued.
    pub fn measurements(&self) -> f64 {
        self.integration_time / self.run_time
    }

    pub fn parity(&self) -> f64 {
        if (self.n + self.l).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// `n0 = 4N0 / (π α_WL² L³)`, m⁻³.
pub fn geometric_density(condensed_atoms: f64, length: f64, alpha_wl: f64) -> f64 {
    4.0 * condensed_atoms / (PI * alpha_wl * alpha_wl * length.powi(3))
}

/// `c_s = √(4π a n0) ħ/m`, m/s.
pub fn speed_of_sound(density: f64, scattering_length: f64, atom_mass: f64) -> f64 {
    (4.0 * PI * scattering_length * density).sqrt() * HBAR / atom_mass
}

/// `ζ = ħ / (√2 m c_s)`, m.
pub fn healing_length(atom_mass: f64, sound_speed: f64) -> f64 {
    HBAR / (std::f64::consts::SQRT_2 * atom_mass * sound_speed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dispersion {
    /// Full Bogoliubov relation.
    Full,
    /// Linear phonon limit `ω = c_s k`.
    Phonon,
}

/// Angular frequency of mode `n`, rad/s.
pub fn mode_frequency(
    n: u32,
    length: f64,
    sound_speed: f64,
    atom_mass: f64,
    dispersion: Dispersion,
) -> f64 {
    let k = n as f64 * PI / length;
    let linear = sound_speed * k;
    match dispersion {
        Dispersion::Phonon => linear,
        Dispersion::Full => {
            let free = HBAR * k * k / (2.0 * atom_mass);
            linear.hypot(free)
        }
    }
}

/// `Ω = πc_s(n + l)/L`, rad/s. Only odd `n + l` is resonant.
pub fn resonance_frequency(n: u32, l: u32, length: f64, sound_speed: f64) -> Result<f64> {
    let sum = n + l;
    if sum.is_multiple_of(2) {
        return Err(Error::Resonance { sum });
    }
    Ok(PI * sound_speed * sum as f64 / length)
}

/// Magnitude of the gravitational coupling between modes `n` and `l`, kg·m.
pub fn transition_amplitude(
    n: u32,
    l: u32,
    length: f64,
    atom_mass: f64,
    healing: f64,
) -> Result<f64> {
    if n == l {
        return Err(Error::DegeneratePair(n));
    }
    if (n + l).is_multiple_of(2) {
        return Ok(0.0);
    }
    let (nf, lf) = (n as f64, l as f64);
    let parity_factor = 2.0;
    let diff = nf * nf - lf * lf;
    Ok(
        atom_mass * length * length * (nf * nf + lf * lf) * parity_factor
            / (2.0 * (2.0 * nf * lf).sqrt() * diff * diff * PI.powi(3) * healing),
    )
}

/// Three-body half-life `3 / (2 D n0²)`, s.
pub fn three_body_half_life(density: f64, loss: f64) -> f64 {
    3.0 / (2.0 * loss * density * density)
}

/// Atoms excited out of the condensate by `Np` phonons in a mode of
/// frequency `ω_n`.
pub fn excited_atoms(phonons: f64, sound_speed: f64, mode_omega: f64, atom_mass: f64) -> f64 {
    atom_mass * sound_speed * sound_speed / (HBAR * mode_omega) * phonons
}

/// Squeezing in decibels, `10 log₁₀ Np`.
pub fn db_from_phonons(phonons: f64) -> Result<f64> {
    if !(phonons >= 1.0) {
        return Err(Error::domain(format!(
            "phonon number must be >= 1, got {phonons}"
        )));
    }
    Ok(10.0 * phonons.log10())
}

/// Every derived condensate scalar for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BecScalars {
    pub density: f64,
    pub sound_speed: f64,
    pub healing_length: f64,
    pub omega_n: f64,
    pub omega_l: f64,
    /// `None` when `n + l` is even.
    pub resonance: Option<f64>,
    pub transition_amplitude: f64,
    pub half_life: f64,
    pub excited_atoms: f64,
    pub squeezing_db: f64,
    pub chemical_potential: f64,
}

impl BecScalars {
    pub fn compute(cfg: &BecConfig) -> Result<Self> {
        cfg.check()?;
        let m = cfg.species.mass;
        let density = cfg.density();
        let sound_speed = cfg.speed_of_sound();
        let zeta = healing_length(m, sound_speed);
        let omega_n = mode_frequency(cfg.n, cfg.length, sound_speed, m, Dispersion::Full);
        let omega_l = mode_frequency(cfg.l, cfg.length, sound_speed, m, Dispersion::Full);
        Ok(Self {
            density,
            sound_speed,
            healing_length: zeta,
            omega_n,
            omega_l,
            resonance: resonance_frequency(cfg.n, cfg.l, cfg.length, sound_speed).ok(),
            transition_amplitude: transition_amplitude(cfg.n, cfg.l, cfg.length, m, zeta)?,
            half_life: three_body_half_life(density, cfg.species.three_body_loss),
            excited_atoms: excited_atoms(cfg.phonons, sound_speed, omega_n, m),
            squeezing_db: db_from_phonons(cfg.phonons)?,
            chemical_potential: m * sound_speed * sound_speed,
        })
    }
}

/// Thresholds standing in for the "much less than" conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    /// n0 a³ < dilute.
    pub dilute: f64,
    /// N_exc < bogoliubov · N0.
    pub bogoliubov: f64,
    /// ħω < phonon · m c_s².
    pub phonon: f64,
    /// k_B T < temperature · μ.
    pub temperature: f64,
    /// Upper bound on the tritter angle, rad.
    pub theta_max: f64,
    /// α_WL above this is reported as a warning.
    pub alpha_wl_warn: f64,
    /// Relative slack on t ≤ t_hl; D is only known to two figures.
    pub half_life_slack: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            dilute: 1e-2,
            bogoliubov: 1e-2,
            phonon: 1e-2,
            temperature: 1e-1,
            theta_max: 0.5,
            alpha_wl_warn: 0.1,
            half_life_slack: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Warn => "warn",
            Status::Fail => "fail",
        }
    }
}

/// One inequality `lhs < rhs` with `margin = lhs / rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub status: Status,
}

impl Check {
    fn new(name: &'static str, lhs: f64, rhs: f64, ok: bool, soft: bool) -> Self {
        let status = match (ok, soft) {
            (true, _) => Status::Pass,
            (false, true) => Status::Warn,
            (false, false) => Status::Fail,
        };
        Check {
            name,
            lhs,
            rhs,
            margin: lhs / rhs,
            status,
        }
    }

    fn below(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self::new(name, lhs, rhs, lhs < rhs, false)
    }
}

pub mod check_names {
    pub const DILUTE: &str = "dilute_regime";
    pub const BOGOLIUBOV: &str = "bogoliubov_depletion";
    pub const PHONON: &str = "phonon_regime";
    pub const RESONANCE: &str = "resonance_parity";
    pub const TEMPERATURE: &str = "low_temperature";
    pub const HALF_LIFE: &str = "three_body_lifetime";
    pub const TRITTER: &str = "tritter_angle";
    pub const ONE_DIMENSIONAL: &str = "one_dimensional";
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Warn)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(Error::Validation(
                self.failures().map(|c| c.name.to_string()).collect(),
            ))
        }
    }
}

/// Evaluates every regime condition. Never fails on a config that passes
/// [`BecConfig::check`]; findings go in the report.
pub fn validate(cfg: &BecConfig, limits: &Limits) -> ValidationReport {
    use check_names::*;

    let m = cfg.species.mass;
    let density = cfg.density();
    let cs = cfg.speed_of_sound();
    let mu = m * cs * cs;
    let omega_n = mode_frequency(cfg.n, cfg.length, cs, m, Dispersion::Full);
    let omega_max = mode_frequency(cfg.n.max(cfg.l), cfg.length, cs, m, Dispersion::Full);
    let t_hl = three_body_half_life(density, cfg.species.three_body_loss);
    let sum = cfg.n + cfg.l;

    let checks = vec![
        Check::below(
            DILUTE,
            density * cfg.species.scattering_length.abs().powi(3),
            limits.dilute,
        ),
        Check::below(
            BOGOLIUBOV,
            excited_atoms(cfg.phonons, cs, omega_n, m),
            limits.bogoliubov * cfg.condensed_atoms,
        ),
        Check::below(PHONON, HBAR * omega_max, limits.phonon * mu),
        // lhs is (n + l) mod 2, which must equal 1
        Check::new(RESONANCE, (sum % 2) as f64, 1.0, sum % 2 == 1, false),
        Check::below(TEMPERATURE, K_B * cfg.temperature, limits.temperature * mu),
        Check::new(
            HALF_LIFE,
            cfg.run_time,
            t_hl,
            cfg.run_time <= t_hl * (1.0 + limits.half_life_slack),
            false,
        ),
        Check::new(
            TRITTER,
            cfg.tritter_angle,
            limits.theta_max,
            cfg.tritter_angle <= limits.theta_max,
            false,
        ),
        Check::new(
            ONE_DIMENSIONAL,
            cfg.alpha_wl,
            limits.alpha_wl_warn,
            cfg.alpha_wl <= limits.alpha_wl_warn,
            true,
        ),
    ];
    ValidationReport { checks }
}
