//! Run configuration: a sectioned `key = value` text file.
//!
//! ```text
//! # comment
//! [bec]
//! L_m = 500e-6
//! alpha_WL = 0.15
//! ```
//!
//! Every key is optional; missing keys take the reference-table defaults and
//! are listed in [`ParsedConfig::defaults_applied`]. Unknown sections and keys
//! are errors. Values are SI unless the key carries a unit suffix.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::bec_model::{BecConfig, DensityMode, Limits, MAX_ALPHA_WL};
use crate::constants::{Species, G_REFERENCE};
use crate::experiment::{default_grid, DEFAULT_CONFIDENCE};
use crate::lambda_gravity::GravityConstants;
use crate::{Error, Result};

/// Source-mass geometry; the drive frequency follows from the condensate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSection {
    pub mass: f64,
    pub r0: f64,
    pub delta_r: f64,
}

impl Default for SourceSection {
    fn default() -> Self {
        Self {
            mass: 0.1,
            r0: 0.1,
            delta_r: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSection {
    /// Source distances, mm.
    pub grid_mm: Vec<f64>,
    pub replicas: usize,
    /// `None` defers to the command line flag, then the environment.
    pub seed: Option<u64>,
    pub confidence: f64,
    /// Per-point noise, m/s²; `None` uses the closed-form sensitivity.
    pub sigma_a: Option<f64>,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            grid_mm: default_grid()
                .iter()
                .map(|r| (r * 1e3 * 1e6).round() / 1e6)
                .collect(),
            replicas: 1,
            seed: None,
            confidence: DEFAULT_CONFIDENCE,
            sigma_a: None,
        }
    }
}

impl SimSection {
    pub fn grid_m(&self) -> Vec<f64> {
        self.grid_mm.iter().map(|mm| mm * 1e-3).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gravity: GravityConstants,
    pub source: SourceSection,
    pub bec: BecConfig,
    pub sim: SimSection,
    pub limits: Limits,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gravity: GravityConstants {
                newton: G_REFERENCE,
                lambda: 0.0,
            },
            source: SourceSection::default(),
            bec: BecConfig::default(),
            sim: SimSection::default(),
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub config: RunConfig,
    /// `section.key` for every key that took its default.
    pub defaults_applied: Vec<String>,
}

/// Every accepted `(section, key)`, in dump order.
pub const KEYS: &[(&str, &[&str])] = &[
    ("gravity", &["G", "Lambda"]),
    ("source", &["M_kg", "R0_m", "deltaR_m"]),
    (
        "bec",
        &[
            "preset",
            "atom_mass_kg",
            "scattering_length_m",
            "three_body_m6_s",
            "L_m",
            "alpha_WL",
            "N0",
            "Np",
            "n",
            "l",
            "t_s",
            "tau_s",
            "theta_rad",
            "temperature_K",
            "density_mode",
            "n0_m3",
        ],
    ),
    (
        "sim",
        &[
            "R0_grid_mm",
            "replicas",
            "seed",
            "confidence",
            "sigma_a_mps2",
        ],
    ),
    (
        "limits",
        &[
            "theta_max",
            "dilute_threshold",
            "bogoliubov_threshold",
            "phonon_threshold",
            "temperature_threshold",
            "half_life_slack",
            "alpha_WL_warn",
        ],
    ),
];

struct Entry {
    line: usize,
    value: String,
}

/// Raw entries keyed by `section.key`.
struct Entries(BTreeMap<String, Entry>);

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut section: Option<&str> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| {
                        config_err(line, format!("malformed section header `{content}`"))
                    })?
                    .trim();
                let known = KEYS.iter().find(|(s, _)| *s == name);
                section = Some(
                    known
                        .ok_or_else(|| config_err(line, format!("unknown section [{name}]")))?
                        .0,
                );
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                config_err(line, format!("expected `key = value`, got `{content}`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let sec = section.ok_or_else(|| {
                config_err(line, format!("key `{key}` appears before any section"))
            })?;
            let keys = KEYS
                .iter()
                .find(|(s, _)| *s == sec)
                .map(|(_, k)| *k)
                .unwrap_or(&[]);
            if !keys.contains(&key) {
                return Err(config_err(line, format!("unknown key `{key}` in [{sec}]")));
            }
            let full = format!("{sec}.{key}");
            if let Some(prev) = map.get(&full) {
                let prev: &Entry = prev;
                return Err(config_err(
                    line,
                    format!("key `{key}` already set on line {}", prev.line),
                ));
            }
            map.insert(
                full,
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }
        Ok(Self(map))
    }

    fn line(&self, key: &str) -> usize {
        self.0.get(key).map_or(0, |e| e.line)
    }

    fn get<T: FromStr>(&self, key: &str, default: T, defaults: &mut Vec<String>) -> Result<T> {
        match self.0.get(key) {
            None => {
                defaults.push(key.to_string());
                Ok(default)
            }
            Some(e) => e
                .value
                .parse()
                .map_err(|_| config_err(e.line, format!("`{key}`: cannot parse `{}`", e.value))),
        }
    }

    /// Parsed value checked against `ok`; `what` describes the requirement.
    fn real(
        &self,
        key: &str,
        default: f64,
        defaults: &mut Vec<String>,
        what: &str,
        ok: impl Fn(f64) -> bool,
    ) -> Result<f64> {
        let v: f64 = self.get(key, default, defaults)?;
        if !(v.is_finite() && ok(v)) {
            return Err(config_err(
                self.line(key),
                format!("`{key}` must be {what}, got {v}"),
            ));
        }
        Ok(v)
    }

    fn positive(&self, key: &str, default: f64, defaults: &mut Vec<String>) -> Result<f64> {
        self.real(key, default, defaults, "positive", |v| v > 0.0)
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

pub fn parse_str(text: &str) -> Result<ParsedConfig> {
    let e = Entries::parse(text)?;
    let d = &mut Vec::new();
    let base = RunConfig::default();

    let gravity = GravityConstants {
        newton: e.real("gravity.G", base.gravity.newton, d, "non-negative", |v| {
            v >= 0.0
        })?,
        lambda: e.real(
            "gravity.Lambda",
            base.gravity.lambda,
            d,
            "non-negative",
            |v| v >= 0.0,
        )?,
    };

    let source = SourceSection {
        mass: e.positive("source.M_kg", base.source.mass, d)?,
        r0: e.positive("source.R0_m", base.source.r0, d)?,
        delta_r: e.positive("source.deltaR_m", base.source.delta_r, d)?,
    };
    if source.delta_r >= 0.1 * source.r0 {
        return Err(config_err(
            e.line("source.deltaR_m"),
            "`deltaR_m` must be below 0.1 * R0_m",
        ));
    }

    let preset: String = e.get("bec.preset", "Rb87".to_string(), d)?;
    let species = match preset.to_ascii_lowercase().as_str() {
        "rb87" => Species::RB87,
        other => {
            return Err(config_err(
                e.line("bec.preset"),
                format!("`preset`: unknown species `{other}`"),
            ))
        }
    };
    let b = &base.bec;
    let species = Species {
        mass: e.positive("bec.atom_mass_kg", species.mass, d)?,
        scattering_length: e.positive("bec.scattering_length_m", species.scattering_length, d)?,
        three_body_loss: e.positive("bec.three_body_m6_s", species.three_body_loss, d)?,
    };
    let mode_index = |key: &str, default: u32, d: &mut Vec<String>| -> Result<u32> {
        let v: u32 = e.get(key, default, d)?;
        if v == 0 {
            return Err(config_err(e.line(key), format!("`{key}` must be >= 1")));
        }
        Ok(v)
    };
    let n = mode_index("bec.n", b.n, d)?;
    let l = mode_index("bec.l", b.l, d)?;
    if n == l {
        return Err(config_err(
            e.line("bec.l").max(e.line("bec.n")),
            format!("`n` and `l` must differ, both are {n}"),
        ));
    }
    let run_time = e.positive("bec.t_s", b.run_time, d)?;
    let integration_time = e.positive("bec.tau_s", b.integration_time, d)?;
    if integration_time < run_time {
        return Err(config_err(
            e.line("bec.tau_s").max(e.line("bec.t_s")),
            "`tau_s` must be >= `t_s`",
        ));
    }
    let mode: String = e.get("bec.density_mode", "geometric".to_string(), d)?;
    let density = match mode.to_ascii_lowercase().as_str() {
        "geometric" => {
            if e.0.contains_key("bec.n0_m3") {
                return Err(config_err(
                    e.line("bec.n0_m3"),
                    "`n0_m3` requires `density_mode = explicit`",
                ));
            }
            d.push("bec.n0_m3".into());
            DensityMode::Geometric
        }
        "explicit" => {
            if !e.0.contains_key("bec.n0_m3") {
                return Err(config_err(
                    e.line("bec.density_mode"),
                    "`density_mode = explicit` requires `n0_m3`",
                ));
            }
            DensityMode::Explicit(e.positive("bec.n0_m3", 0.0, d)?)
        }
        other => {
            return Err(config_err(
                e.line("bec.density_mode"),
                format!("`density_mode` must be `geometric` or `explicit`, got `{other}`"),
            ))
        }
    };
    let bec = BecConfig {
        species,
        length: e.positive("bec.L_m", b.length, d)?,
        alpha_wl: e.real(
            "bec.alpha_WL",
            b.alpha_wl,
            d,
            &format!("in (0, {MAX_ALPHA_WL}]"),
            |v| v > 0.0 && v <= MAX_ALPHA_WL,
        )?,
        condensed_atoms: e.positive("bec.N0", b.condensed_atoms, d)?,
        phonons: e.real("bec.Np", b.phonons, d, ">= 1", |v| v >= 1.0)?,
        n,
        l,
        run_time,
        integration_time,
        tritter_angle: e.positive("bec.theta_rad", b.tritter_angle, d)?,
        temperature: e.positive("bec.temperature_K", b.temperature, d)?,
        density,
    };

    let grid_mm = match e.0.get("sim.R0_grid_mm") {
        None => {
            d.push("sim.R0_grid_mm".into());
            base.sim.grid_mm.clone()
        }
        Some(entry) => parse_grid(&entry.value)
            .map_err(|m| config_err(entry.line, format!("`R0_grid_mm`: {m}")))?,
    };
    let replicas: usize = e.get("sim.replicas", base.sim.replicas, d)?;
    if replicas == 0 {
        return Err(config_err(
            e.line("sim.replicas"),
            "`replicas` must be >= 1",
        ));
    }
    let seed = match e.0.get("sim.seed") {
        None => {
            d.push("sim.seed".into());
            None
        }
        Some(entry) => Some(entry.value.parse().map_err(|_| {
            config_err(
                entry.line,
                format!("`seed`: cannot parse `{}`", entry.value),
            )
        })?),
    };
    let sigma_a = match e.0.contains_key("sim.sigma_a_mps2") {
        false => {
            d.push("sim.sigma_a_mps2".into());
            None
        }
        true => Some(e.real("sim.sigma_a_mps2", 0.0, d, "non-negative", |v| v >= 0.0)?),
    };
    let sim = SimSection {
        grid_mm,
        replicas,
        seed,
        confidence: e.real("sim.confidence", base.sim.confidence, d, "in (0, 1)", |v| {
            v > 0.0 && v < 1.0
        })?,
        sigma_a,
    };

    let lb = base.limits;
    let limits = Limits {
        theta_max: e.positive("limits.theta_max", lb.theta_max, d)?,
        dilute: e.positive("limits.dilute_threshold", lb.dilute, d)?,
        bogoliubov: e.positive("limits.bogoliubov_threshold", lb.bogoliubov, d)?,
        phonon: e.positive("limits.phonon_threshold", lb.phonon, d)?,
        temperature: e.positive("limits.temperature_threshold", lb.temperature, d)?,
        half_life_slack: e.real(
            "limits.half_life_slack",
            lb.half_life_slack,
            d,
            "non-negative",
            |v| v >= 0.0,
        )?,
        alpha_wl_warn: e.positive("limits.alpha_WL_warn", lb.alpha_wl_warn, d)?,
    };

    let mut defaults_applied = std::mem::take(d);
    defaults_applied.sort();
    defaults_applied.dedup();
    Ok(ParsedConfig {
        config: RunConfig {
            gravity,
            source,
            bec,
            sim,
            limits,
        },
        defaults_applied,
    })
}

fn parse_grid(value: &str) -> std::result::Result<Vec<f64>, String> {
    let grid = value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("cannot parse `{}`", s.trim()))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if let Some(v) = grid.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(format!("values must be positive, got {v}"));
    }
    let mut sorted = grid.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err("values must be distinct".into());
    }
    Ok(grid)
}

pub fn parse_file(path: &Path) -> Result<ParsedConfig> {
    parse_str(&std::fs::read_to_string(path)?)
}

impl RunConfig {
    /// Complete config text; parsing it gives back `self`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let b = &self.bec;
        let _ = writeln!(
            s,
            "[gravity]\nG = {:e}\nLambda = {:e}\n",
            self.gravity.newton, self.gravity.lambda
        );
        let _ = writeln!(
            s,
            "[source]\nM_kg = {:e}\nR0_m = {:e}\ndeltaR_m = {:e}\n",
            self.source.mass, self.source.r0, self.source.delta_r
        );
        let _ = writeln!(s, "[bec]\npreset = Rb87");
        for (k, v) in [
            ("atom_mass_kg", b.species.mass),
            ("scattering_length_m", b.species.scattering_length),
            ("three_body_m6_s", b.species.three_body_loss),
            ("L_m", b.length),
            ("alpha_WL", b.alpha_wl),
            ("N0", b.condensed_atoms),
            ("Np", b.phonons),
        ] {
            let _ = writeln!(s, "{k} = {v:e}");
        }
        let _ = writeln!(s, "n = {}\nl = {}", b.n, b.l);
        for (k, v) in [
            ("t_s", b.run_time),
            ("tau_s", b.integration_time),
            ("theta_rad", b.tritter_angle),
            ("temperature_K", b.temperature),
        ] {
            let _ = writeln!(s, "{k} = {v:e}");
        }
        match b.density {
            DensityMode::Geometric => {
                let _ = writeln!(s, "density_mode = geometric\n");
            }
            DensityMode::Explicit(n0) => {
                let _ = writeln!(s, "density_mode = explicit\nn0_m3 = {n0:e}\n");
            }
        }
        let grid: Vec<String> = self.sim.grid_mm.iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(
            s,
            "[sim]\nR0_grid_mm = {}\nreplicas = {}",
            grid.join(", "),
            self.sim.replicas
        );
        if let Some(seed) = self.sim.seed {
            let _ = writeln!(s, "seed = {seed}");
        }
        let _ = writeln!(s, "confidence = {:e}", self.sim.confidence);
        if let Some(sigma) = self.sim.sigma_a {
            let _ = writeln!(s, "sigma_a_mps2 = {sigma:e}");
        }
        let l = &self.limits;
        let _ = writeln!(
            s,
            "\n[limits]\ntheta_max = {:e}\ndilute_threshold = {:e}\nbogoliubov_threshold = {:e}\nphonon_threshold = {:e}\ntemperature_threshold = {:e}\nhalf_life_slack = {:e}\nalpha_WL_warn = {:e}",
            l.theta_max, l.dilute, l.bogoliubov, l.phonon, l.temperature, l.half_life_slack, l.alpha_wl_warn
        );
        s
    }
}
