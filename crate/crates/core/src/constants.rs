//! Physical constants (CODATA 2018 exact or recommended values) and the
//! ⁸⁷Rb species preset.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Speed of light in vacuum, m/s (exact by definition of the metre).
pub const C: f64 = 299_792_458.0;

/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;

/// Reference value of Newton's constant used for truth models, N·m²/kg².
pub const G_REFERENCE: f64 = 6.674e-11;

/// Planck 2018 cosmological constant converted to SI, 1/m².
pub const LAMBDA_PLANCK: f64 = 1.09e-52;

pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// Atomic species parameters entering the condensate model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Species {
    /// Atomic mass, kg.
    pub mass: f64,
    /// s-wave scattering length, m.
    pub scattering_length: f64,
    /// Three-body loss coefficient D, m⁶/s.
    pub three_body_loss: f64,
}

impl Species {
    /// ⁸⁷Rb: m = 1.44e-25 kg, a = 99 Bohr radii, D = 5.8e-30 cm⁶/s.
    pub const RB87: Species = Species {
        mass: 1.44e-25,
        scattering_length: 99.0 * BOHR_RADIUS,
        three_body_loss: 5.8e-42,
    };
}

impl Default for Species {
    fn default() -> Self {
        Species::RB87
    }
}

/// `(name, value, unit)` rows for every constant above.
pub fn table() -> Vec<(&'static str, f64, &'static str)> {
    vec![
        ("hbar", HBAR, "J s"),
        ("k_B", K_B, "J/K"),
        ("c", C, "m/s"),
        ("r_Bohr", BOHR_RADIUS, "m"),
        ("G_reference", G_REFERENCE, "N m^2/kg^2"),
        ("Lambda_Planck", LAMBDA_PLANCK, "1/m^2"),
        ("Rb87_mass", Species::RB87.mass, "kg"),
        (
            "Rb87_scattering_length",
            Species::RB87.scattering_length,
            "m",
        ),
        ("Rb87_three_body_D", Species::RB87.three_body_loss, "m^6/s"),
    ]
}
