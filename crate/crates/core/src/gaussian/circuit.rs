use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use super::{GaussianState, SymplecticTransform};
use crate::bec_model::{self, BecConfig};
use crate::constants::HBAR;
use crate::Result;

/// Mode slots of the three-mode probe.
pub mod roles {
    pub const GROUND: usize = 0;
    pub const PHONON_N: usize = 1;
    pub const PHONON_L: usize = 2;
}

pub const MODES: usize = 3;

/// How strongly the resonant acceleration squeezes the phonon pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodingCoupling {
    /// |M_nl|, kg·m.
    pub coupling: f64,
    /// Interaction time t, s.
    pub duration: f64,
    /// (−1)^{n+l}.
    pub parity: f64,
}

impl EncodingCoupling {
    /// `d s_g / d a = −parity · |M_nl| t / ħ`, per (m/s²).
    pub fn squeeze_per_acceleration(&self) -> f64 {
        -self.parity * self.coupling * self.duration / HBAR
    }

    pub fn squeeze(&self, acceleration: f64) -> f64 {
        self.squeeze_per_acceleration() * acceleration
    }
}

/// Two-mode squeezer on `phonons` with real parameter `s_g = −parity·a|M_nl|t/ħ`.
/// Its derivative in `a` is `s_g'·X·S` with `X` the phase-0 squeezer generator.
pub fn gravity_encoding(
    acceleration: f64,
    encoding: &EncodingCoupling,
    phonons: (usize, usize),
    modes: usize,
) -> Result<SymplecticTransform> {
    if !(encoding.duration > 0.0) {
        return Err(crate::Error::domain("encoding duration must be positive"));
    }
    SymplecticTransform::two_mode_squeezer(
        phonons.0,
        phonons.1,
        Complex64::from(encoding.squeeze(acceleration)),
        modes,
    )
}

/// Parameters of the squeezer → tritter → encoding → inverse interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitSpec {
    /// |r| of the probe squeezer.
    pub squeeze: f64,
    /// θ_sq, rad.
    pub squeeze_phase: f64,
    /// θ, rad.
    pub tritter_angle: f64,
    /// ϑ, rad.
    pub tritter_phase: f64,
    /// N0; the ground mode starts in a coherent state of amplitude √N0.
    pub condensed_atoms: f64,
    pub encoding: EncodingCoupling,
}

impl CircuitSpec {
    /// Squeezer strength chosen so each phonon mode holds `phonons` quanta,
    /// phases at θ_sq = π/2, ϑ = π/4.
    pub fn new(
        phonons: f64,
        tritter_angle: f64,
        condensed_atoms: f64,
        encoding: EncodingCoupling,
    ) -> Self {
        Self {
            squeeze: phonons.sqrt().asinh(),
            squeeze_phase: FRAC_PI_2,
            tritter_angle,
            tritter_phase: FRAC_PI_4,
            condensed_atoms,
            encoding,
        }
    }

    /// Circuit for a condensate configuration, using the configuration's own
    /// density mode for the coupling.
    pub fn from_config(cfg: &BecConfig) -> Result<Self> {
        cfg.check()?;
        let zeta = bec_model::healing_length(cfg.species.mass, cfg.speed_of_sound());
        let coupling =
            bec_model::transition_amplitude(cfg.n, cfg.l, cfg.length, cfg.species.mass, zeta)?;
        let encoding = EncodingCoupling {
            coupling,
            duration: cfg.run_time,
            parity: cfg.parity(),
        };
        Ok(Self::new(
            cfg.phonons,
            cfg.tritter_angle,
            cfg.condensed_atoms,
            encoding,
        ))
    }

    pub fn with_phases(mut self, squeeze_phase: f64, tritter_phase: f64) -> Self {
        self.squeeze_phase = squeeze_phase;
        self.tritter_phase = tritter_phase;
        self
    }

    pub fn phonons_per_mode(&self) -> f64 {
        self.squeeze.sinh().powi(2)
    }

    pub fn input_state(&self) -> GaussianState {
        GaussianState::coherent(
            Complex64::from(self.condensed_atoms.sqrt()),
            roles::GROUND,
            MODES,
        )
        .expect("ground mode is in range")
    }

    pub fn squeezer(&self) -> SymplecticTransform {
        SymplecticTransform::real_squeezer(
            roles::PHONON_N,
            roles::PHONON_L,
            self.squeeze,
            self.squeeze_phase,
            MODES,
        )
    }

    pub fn tritter(&self) -> Result<SymplecticTransform> {
        SymplecticTransform::tritter(
            self.tritter_angle,
            self.tritter_phase,
            roles::GROUND,
            (roles::PHONON_N, roles::PHONON_L),
            MODES,
        )
    }

    pub fn encoding(&self, acceleration: f64) -> SymplecticTransform {
        gravity_encoding(
            acceleration,
            &self.encoding,
            (roles::PHONON_N, roles::PHONON_L),
            MODES,
        )
        .expect("phonon roles are distinct and in range")
    }

    /// State after squeezer and tritter.
    pub fn probe_state(&self) -> Result<GaussianState> {
        self.input_state()
            .apply(&self.squeezer())?
            .apply(&self.tritter()?)
    }

    /// Probe after the gravitational encoding, before the closing inverses.
    pub fn encoded_state(&self, acceleration: f64) -> Result<GaussianState> {
        self.probe_state()?.apply(&self.encoding(acceleration))
    }
}

impl CircuitSpec {
    /// Whole interferometer as one transform. Composing before acting on the
    /// state keeps the squeezer/anti-squeezer cancellation at machine level.
    pub fn transform(&self, acceleration: f64) -> Result<SymplecticTransform> {
        let sq = self.squeezer();
        let tr = self.tritter()?;
        sq.then(&tr)?
            .then(&self.encoding(acceleration))?
            .then(&tr.inverse())?
            .then(&sq.inverse())
    }
}

/// Full interferometer; the phonon modes of the output are what gets counted.
pub fn run_circuit(spec: &CircuitSpec, acceleration: f64) -> Result<GaussianState> {
    spec.input_state().apply(&spec.transform(acceleration)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_spec() -> CircuitSpec {
        CircuitSpec::from_config(&BecConfig::default()).unwrap()
    }

    #[test]
    fn null_circuit_returns_input() {
        let spec = table_spec();
        let out = run_circuit(&spec, 0.0).unwrap();
        let input = spec.input_state();
        let id = spec.transform(0.0).unwrap();
        let defect =
            super::super::max_abs(&(id.matrix() - SymplecticTransform::identity(MODES).matrix()));
        assert!(defect < 1e-10, "{defect:e}");
        // |d0| = √N0 ≈ 3.2e4 sets the absolute scale
        assert!(
            out.max_difference(&input) < 1e-10 * 1e9f64.sqrt(),
            "{}",
            out.max_difference(&input)
        );
        assert!(out.phonon_number(roles::PHONON_N).unwrap().abs() < 1e-8);
    }

    #[test]
    fn signal_populates_phonon_modes() {
        let spec = table_spec();
        let out = run_circuit(&spec, 1.335e-11).unwrap();
        assert!(out.phonon_number(roles::PHONON_N).unwrap() > 0.0);
        assert!(out.phonon_number(roles::PHONON_L).unwrap() > 0.0);
    }

    #[test]
    fn output_depends_only_on_squeeze_parameter() {
        let spec = table_spec();
        let mut halved = spec;
        halved.encoding.coupling /= 2.0;
        let a = run_circuit(&spec, 1e-11).unwrap();
        let b = run_circuit(&halved, 2e-11).unwrap();
        assert!(a.max_difference(&b) < 1e-9);
    }

    #[test]
    fn encoding_strength_example() {
        let spec = table_spec();
        let s = spec.encoding.squeeze(1.335e-11);
        // |M12| t / ħ = 1.0019e8 per (m/s²) at the reference point
        assert!((spec.encoding.squeeze_per_acceleration() / 1.0019e8 - 1.0).abs() < 1e-3);
        assert!((s.abs() / 1.3375e-3 - 1.0).abs() < 1e-3);
        assert_eq!(spec.encoding(0.0), SymplecticTransform::identity(MODES));
    }

    #[test]
    fn encoding_is_additive() {
        let spec = table_spec();
        let twice = spec.encoding(1e-9).then(&spec.encoding(1e-9)).unwrap();
        let once = spec.encoding(2e-9);
        assert!(super::super::max_abs(&(twice.matrix() - once.matrix())) < 1e-12);
    }

    #[test]
    fn probe_has_requested_phonons() {
        let spec = table_spec();
        assert!((spec.phonons_per_mode() - 1100.0).abs() < 1e-9);
        let sq = spec.input_state().apply(&spec.squeezer()).unwrap();
        assert!((sq.phonon_number(roles::PHONON_N).unwrap() - 1100.0).abs() < 1e-8);
    }
}
