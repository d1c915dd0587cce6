//! CSV output. Every table has a header row and a fixed column order; reals
//! are written in scientific notation with ten significant digits, or
//! seventeen for measurement tables that are read back by `fit`.

use std::io::Write;

use crate::bec_model::{BecScalars, ValidationReport};
use crate::experiment::{FitResult, Measurement, ResidualPoint};
use crate::gaussian::{GaussianState, QfiEvaluation};
use crate::sensitivity::SensitivityReport;
use crate::Result;

pub fn sci(v: f64) -> String {
    format!("{v:.9e}")
}

/// Seventeen significant digits: enough to re-read the exact `f64`.
pub fn sci_exact(v: f64) -> String {
    format!("{v:.16e}")
}

fn table<W: Write, const N: usize>(
    out: W,
    header: [&str; N],
    rows: impl IntoIterator<Item = [String; N]>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_validation<W: Write>(out: W, report: &ValidationReport) -> Result<()> {
    table(
        out,
        ["check", "lhs", "rhs", "margin", "status"],
        report.checks.iter().map(|c| {
            [
                c.name.to_string(),
                sci(c.lhs),
                sci(c.rhs),
                sci(c.margin),
                c.status.as_str().to_string(),
            ]
        }),
    )
}

pub fn write_bec_scalars<W: Write>(out: W, s: &BecScalars) -> Result<()> {
    table(
        out,
        [
            "n0_m3",
            "c_s_mps",
            "zeta_m",
            "omega_n_rad_s",
            "omega_l_rad_s",
            "Omega_rad_s",
            "Mnl_kgm",
            "t_hl_s",
            "N_exc",
            "squeezing_dB",
            "mu_J",
        ],
        [[
            sci(s.density),
            sci(s.sound_speed),
            sci(s.healing_length),
            sci(s.omega_n),
            sci(s.omega_l),
            sci(s.resonance.unwrap_or(f64::NAN)),
            sci(s.transition_amplitude),
            sci(s.half_life),
            sci(s.excited_atoms),
            sci(s.squeezing_db),
            sci(s.chemical_potential),
        ]],
    )
}

pub fn write_constants<W: Write>(out: W, rows: &[(&str, f64, &str)]) -> Result<()> {
    table(
        out,
        ["name", "value", "unit"],
        rows.iter()
            .map(|(n, v, u)| [n.to_string(), sci(*v), u.to_string()]),
    )
}

pub fn write_sensitivity<W: Write>(out: W, report: &SensitivityReport) -> Result<()> {
    use crate::sensitivity::SensitivityRow;
    table(
        out,
        SensitivityRow::HEADER,
        report.rows.iter().map(|r| r.values().map(sci)),
    )
}

pub fn write_qfi_check<W: Write>(out: W, eval: &QfiEvaluation, closed: f64) -> Result<()> {
    table(
        out,
        [
            "F_numeric",
            "F_closed",
            "rel_deviation",
            "F_finite_difference",
            "derivative_agreement",
            "condition_number",
        ],
        [[
            sci(eval.analytic),
            sci(closed),
            sci(eval.analytic / closed - 1.0),
            sci(eval.finite_difference),
            sci(eval.derivative_agreement),
            sci(eval.condition),
        ]],
    )
}

pub fn write_measurements<W: Write>(out: W, data: &[Measurement]) -> Result<()> {
    table(
        out,
        ["R0_m", "a_exp", "a_th", "sigma_a"],
        data.iter().map(|m| {
            [
                sci_exact(m.r0),
                sci_exact(m.a_exp),
                sci_exact(m.a_th),
                sci_exact(m.sigma),
            ]
        }),
    )
}

pub fn write_fits<W: Write>(out: W, fits: &[FitResult]) -> Result<()> {
    table(
        out,
        [
            "G_hat",
            "sigma_G",
            "Lambda_hat",
            "sigma_Lambda",
            "cov_GL",
            "chi2",
            "dof",
            "Lambda_upper",
        ],
        fits.iter().map(|f| {
            [
                sci(f.g_hat),
                sci(f.sigma_g),
                sci(f.lambda_hat),
                sci(f.sigma_lambda),
                sci(f.covariance[(0, 1)]),
                sci(f.chi2),
                f.dof.to_string(),
                sci(f.lambda_upper),
            ]
        }),
    )
}

pub fn write_residuals<W: Write>(out: W, points: &[ResidualPoint]) -> Result<()> {
    table(
        out,
        ["R0_m", "rel_residual", "rel_band"],
        points
            .iter()
            .map(|p| [sci(p.r0), sci(p.relative), sci(p.band)]),
    )
}

/// `d` and `Γ` entry by entry: `quantity,i,j,re,im` (`j` is 0 for `d`).
pub fn write_state<W: Write>(out: W, state: &GaussianState) -> Result<()> {
    let d = state.displacement().iter().enumerate().map(|(i, z)| {
        [
            "d".to_string(),
            i.to_string(),
            "0".into(),
            sci(z.re),
            sci(z.im),
        ]
    });
    let g = state.covariance();
    let cov = (0..g.nrows()).flat_map(move |i| {
        (0..g.ncols()).map(move |j| {
            [
                "Gamma".to_string(),
                i.to_string(),
                j.to_string(),
                sci(g[(i, j)].re),
                sci(g[(i, j)].im),
            ]
        })
    });
    table(out, ["quantity", "i", "j", "re", "im"], d.chain(cov))
}

/// Reads a measurement table written by [`write_measurements`].
pub fn read_measurements<R: std::io::Read>(input: R) -> Result<Vec<Measurement>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let expected = ["R0_m", "a_exp", "a_th", "sigma_a"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(crate::Error::domain(format!(
            "measurement header must be {}",
            expected.join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let v: Vec<f64> = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| {
                crate::Error::domain(format!("measurement row {}: unparseable number", i + 1))
            })?;
        out.push(Measurement {
            r0: v[0],
            a_exp: v[1],
            a_th: v[2],
            sigma: v[3],
        });
    }
    Ok(out)
}
