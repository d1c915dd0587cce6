//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero when any
//! criterion fails.

use std::f64::consts::TAU;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use lambda_phonon::bec_model::{self, check_names, BecConfig, Limits, Status};
use lambda_phonon::constants::G_REFERENCE;
use lambda_phonon::experiment::{self, default_grid, ScanConfig, DEFAULT_CONFIDENCE};
use lambda_phonon::gaussian::{
    self, k_matrix, roles, CMatrix, CircuitSpec, DerivativeMethod, GaussianState,
    SymplecticTransform, MODES,
};
use lambda_phonon::lambda_gravity::{GravityConstants, SourceMass};
use lambda_phonon::sensitivity::{self, ExplicitDensity, SensitivityRow, TABLE1_ROWS};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            detail: String::new(),
        }
    }

    /// Records a sub-check; only failures are listed.
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.pass = false;
            self.note(format!("FAILED {what}"));
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(&s.into());
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn row_cfg(length: f64, alpha_wl: f64) -> BecConfig {
    BecConfig {
        length,
        alpha_wl,
        ..BecConfig::default()
    }
}

fn reference_source() -> SourceMass {
    sensitivity::reference_source(&BecConfig::default()).unwrap()
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let src = reference_source();
    let want_a = [74e-18, 20e-18, 4.8e-18];
    let want_g = [37e-17, 10e-17, 2.3e-17];
    let want_l = [25e-31, 6.7e-31, 1.6e-31];
    let mut worst: (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (i, &(l, a)) in TABLE1_ROWS.iter().enumerate() {
        let cfg = row_cfg(l, a);
        let da = sensitivity::delta_a_closed_form(&cfg).unwrap();
        let dg = lambda_phonon::lambda_gravity::delta_g_from_delta_a(da, &src);
        let dl = lambda_phonon::lambda_gravity::delta_lambda_from_delta_a(da, &src);
        o.check(
            rel(da, want_a[i]) <= 0.02,
            format!("delta_a row {i}: {da:.4e} vs {:.1e}", want_a[i]),
        );
        o.check(
            rel(dg, want_g[i]) <= 0.05,
            format!("delta_G row {i}: {dg:.4e} vs {:.1e}", want_g[i]),
        );
        o.check(
            rel(dl, want_l[i]) <= 0.05,
            format!("delta_Lambda row {i}: {dl:.4e} vs {:.1e}", want_l[i]),
        );
        worst = (
            worst.0.max(rel(da, want_a[i])),
            worst.1.max(rel(dg, want_g[i])),
            worst.2.max(rel(dl, want_l[i])),
        );
    }
    o.note(format!(
        "max dev delta_a {:.2}% (tol 2%), delta_G {:.2}%, delta_Lambda {:.2}% (tol 5%)",
        100.0 * worst.0,
        100.0 * worst.1,
        100.0 * worst.2
    ));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let mut configs: Vec<BecConfig> = TABLE1_ROWS.iter().map(|&(l, a)| row_cfg(l, a)).collect();
    for l in [100e-6, 550e-6, 1000e-6] {
        for a in [0.05, 0.175, 0.3] {
            for np in [100.0, 1050.0, 2000.0] {
                configs.push(BecConfig {
                    phonons: np,
                    ..row_cfg(l, a)
                });
            }
        }
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut failing = 0;
    let src = reference_source();
    for cfg in &configs {
        let row = SensitivityRow::compute(cfg, &src).unwrap();
        let dev = row.pipeline_deviation();
        lo = lo.min(dev);
        hi = hi.max(dev);
        if dev.abs() > 0.02 {
            failing += 1;
        }
    }
    o.check(
        failing == 0,
        format!("{failing}/{} configurations outside 2%", configs.len()),
    );
    o.note(format!(
        "delta_a_qfi/delta_a_closed - 1 in [{:+.2}%, {:+.2}%] over 3 rows + 27-point grid",
        100.0 * lo,
        100.0 * hi
    ));
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let cfg = BecConfig::default();
    let e = ExplicitDensity::compute(&cfg, 1e20);
    o.check(
        rel(e.sound_speed, 1.9e-3) <= 0.01,
        "c_s within 1% of 1.9e-3 m/s",
    );
    o.check(
        rel(e.omega, 17.7) <= 0.01,
        format!("Omega = {:.4} rad/s vs 17.7", e.omega),
    );
    let db = bec_model::db_from_phonons(1100.0).unwrap();
    o.check(db == 10.0 * 1100f64.log10(), "dB formula");
    o.check(
        (db - 30.4).abs() < 0.05,
        format!("{db:.3} dB does not round to 30.4"),
    );
    o.check(rel(10f64.powf(db / 10.0), 1100.0) < 1e-12, "dB inverse");
    o.note(format!(
        "c_s = {:.4e} m/s ({:+.2}% vs 1.9e-3), Omega = {:.3} rad/s, {db:.3} dB",
        e.sound_speed,
        100.0 * (e.sound_speed / 1.9e-3 - 1.0),
        e.omega
    ));
    o
}

/// Random Hermitian quadratic form `[[A, B], [B̄, Ā]]` with entries of size ~`scale`.
fn random_hamiltonian(rng: &mut ChaCha20Rng, modes: usize, scale: f64) -> CMatrix {
    let mut a = CMatrix::zeros(modes, modes);
    let mut b = CMatrix::zeros(modes, modes);
    for i in 0..modes {
        for j in i..modes {
            let z = Complex64::new(
                rng.random_range(-scale..scale),
                rng.random_range(-scale..scale),
            );
            let w = Complex64::new(
                rng.random_range(-scale..scale),
                rng.random_range(-scale..scale),
            );
            if i == j {
                a[(i, i)] = Complex64::from(z.re);
            } else {
                a[(i, j)] = z;
                a[(j, i)] = z.conj();
            }
            b[(i, j)] = w;
            b[(j, i)] = w;
        }
    }
    let mut h = CMatrix::zeros(2 * modes, 2 * modes);
    h.view_mut((0, 0), (modes, modes)).copy_from(&a);
    h.view_mut((0, modes), (modes, modes)).copy_from(&b);
    h.view_mut((modes, 0), (modes, modes))
        .copy_from(&b.map(|z| z.conj()));
    h.view_mut((modes, modes), (modes, modes))
        .copy_from(&a.map(|z| z.conj()));
    h
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha20Rng::seed_from_u64(2024);

    // symplectic condition over random transforms
    let mut worst_sym: f64 = 0.0;
    for i in 0..1000 {
        let s = match i % 3 {
            0 => SymplecticTransform::from_hamiltonian(&random_hamiltonian(&mut rng, MODES, 0.5))
                .unwrap(),
            1 => {
                let r =
                    Complex64::from_polar(rng.random_range(0.0..2.5), rng.random_range(0.0..TAU));
                let (j, k) = [(0, 1), (0, 2), (1, 2)][rng.random_range(0..3)];
                SymplecticTransform::two_mode_squeezer(j, k, r, MODES).unwrap()
            }
            _ => SymplecticTransform::tritter(
                rng.random_range(-1.5..1.5),
                rng.random_range(0.0..TAU),
                0,
                (1, 2),
                MODES,
            )
            .unwrap()
            .then(
                &SymplecticTransform::from_hamiltonian(&random_hamiltonian(&mut rng, MODES, 0.3))
                    .unwrap(),
            )
            .unwrap(),
        };
        let k = k_matrix(MODES);
        let defect = max_abs(&(s.matrix() * &k * s.matrix().adjoint() - &k));
        worst_sym = worst_sym.max(defect);
    }
    o.check(
        worst_sym <= 1e-10,
        format!("SKS^dag = K defect {worst_sym:.2e}"),
    );

    // null circuit
    let spec = CircuitSpec::from_config(&BecConfig::default()).unwrap();
    let null = spec.transform(0.0).unwrap();
    let null_defect = max_abs(&(null.matrix() - SymplecticTransform::identity(MODES).matrix()));
    let out = gaussian::run_circuit(&spec, 0.0).unwrap();
    let input = spec.input_state();
    let state_defect = out.max_difference(&input) / input.displacement().norm();
    o.check(
        null_defect <= 1e-10,
        format!("null circuit transform defect {null_defect:.2e}"),
    );
    o.check(
        state_defect <= 1e-10,
        format!("null circuit relative state defect {state_defect:.2e}"),
    );

    // analytic vs finite-difference derivative
    let mut worst_fd: f64 = 0.0;
    for &(l, a) in &TABLE1_ROWS {
        let s = CircuitSpec::from_config(&row_cfg(l, a)).unwrap();
        for acc in [0.0, 1e-11] {
            let eval = gaussian::qfi_checked(&s, acc, 1e-6).unwrap();
            worst_fd = worst_fd.max(eval.derivative_agreement);
        }
    }
    o.check(
        worst_fd <= 1e-5,
        format!("finite-difference agreement {worst_fd:.2e}"),
    );

    // invariance under post-encoding unitaries
    let state = spec.encoded_state(0.0).unwrap();
    let deriv = gaussian::encoded_derivative(&spec, 0.0, DerivativeMethod::Analytic).unwrap();
    let (f0, _) = gaussian::gaussian_qfi(&state, &deriv).unwrap();
    let mut worst_inv: f64 = 0.0;
    for _ in 0..50 {
        let u = SymplecticTransform::from_hamiltonian(&random_hamiltonian(&mut rng, MODES, 0.2))
            .unwrap();
        let (f1, _) =
            gaussian::gaussian_qfi(&state.apply(&u).unwrap(), &deriv.transformed(&u)).unwrap();
        worst_inv = worst_inv.max(rel(f1, f0));
    }
    o.check(worst_inv <= 1e-8, format!("QFI invariance {worst_inv:.2e}"));

    // phonon-number identities
    let vac = GaussianState::vacuum(MODES);
    let alpha = Complex64::new(3.0, -4.0);
    let coh = GaussianState::coherent(alpha, roles::GROUND, MODES).unwrap();
    let sq = vac.apply(&spec.squeezer()).unwrap();
    let np = spec.phonons_per_mode();
    let mut worst_num: f64 = 0.0;
    for m in 0..MODES {
        worst_num = worst_num.max(vac.phonon_number(m).unwrap().abs());
    }
    worst_num = worst_num.max((coh.phonon_number(roles::GROUND).unwrap() - 25.0).abs() / 25.0);
    for m in [roles::PHONON_N, roles::PHONON_L] {
        worst_num = worst_num.max((sq.phonon_number(m).unwrap() - np).abs() / np);
    }
    worst_num = worst_num.max(sq.phonon_number(roles::GROUND).unwrap().abs());
    o.check(
        worst_num <= 1e-10,
        format!("phonon-number identities {worst_num:.2e}"),
    );

    o.note(format!(
        "sympl {worst_sym:.1e}, null {:.1e}, fd {worst_fd:.1e}, invariance {worst_inv:.1e}, numbers {worst_num:.1e}",
        null_defect.max(state_defect)
    ));
    o
}

fn reference_scan(replicas: usize) -> ScanConfig {
    let cfg = BecConfig::default();
    ScanConfig {
        grid: default_grid(),
        truth: GravityConstants::newtonian(G_REFERENCE),
        source: SourceMass::new(
            0.1,
            0.1,
            1e-3,
            bec_model::resonance_frequency(1, 2, cfg.length, cfg.speed_of_sound()).unwrap(),
        )
        .unwrap(),
        sigma_a: 4.77e-18,
        seed: 42,
        replicas,
        confidence: DEFAULT_CONFIDENCE,
    }
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let scan = reference_scan(200);
    let first = experiment::fit(
        &experiment::simulate_measurements(&scan).unwrap(),
        &scan.source,
        scan.confidence,
    )
    .unwrap();
    let rel_g = first.sigma_g / G_REFERENCE;
    o.check(
        (3e-8..=3e-7).contains(&rel_g),
        format!("sigma_G/G = {rel_g:.3e}"),
    );
    o.check(
        (5e-32..=5e-31).contains(&first.lambda_upper),
        format!("Lambda upper = {:.3e}", first.lambda_upper),
    );

    let noiseless = ScanConfig {
        sigma_a: 0.0,
        ..reference_scan(1)
    };
    let mut data = experiment::simulate_measurements(&noiseless).unwrap();
    data.iter_mut().for_each(|m| m.sigma = 4.77e-18);
    let exact = experiment::fit(&data, &noiseless.source, noiseless.confidence).unwrap();
    let g_err = rel(exact.g_hat, G_REFERENCE);
    // truth Λ = 0, so measure the fitted Λ term against the signal at R0 = 100 mm
    let x = experiment::design_row(&noiseless.source.at_distance(0.1).unwrap());
    let l_err = (exact.lambda_hat * x[1]).abs() / (G_REFERENCE * x[0]);
    o.check(g_err <= 1e-10, format!("noiseless G error {g_err:.2e}"));
    o.check(
        l_err <= 1e-10,
        format!("noiseless Lambda error {l_err:.2e}"),
    );

    let fits = experiment::run_campaign(&scan).unwrap();
    let covered = fits
        .iter()
        .filter(|f| (f.g_hat - G_REFERENCE).abs() <= f.sigma_g)
        .count() as f64
        / fits.len() as f64;
    o.check(
        (covered - 0.68).abs() <= 0.05,
        format!("coverage {covered:.3}"),
    );
    o.note(format!(
        "sigma_G/G {rel_g:.3e}, Lambda_up {:.3e} m^-2, noiseless {g_err:.1e}, coverage {covered:.3}",
        first.lambda_upper
    ));
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let limits = Limits::default();
    let cfg = BecConfig::default();
    let r = bec_model::validate(&cfg, &limits);
    o.check(r.passed(), "reference configuration passes");
    let get = |name| r.get(name).unwrap();
    let dilute = get(check_names::DILUTE).lhs;
    let n_exc = get(check_names::BOGOLIUBOV).lhs;
    let t_hl = get(check_names::HALF_LIFE).rhs;
    o.check(rel(dilute, 7.3e-5) < 0.01, format!("dilute {dilute:.3e}"));
    o.check(rel(n_exc, 2e6) < 0.05, format!("N_exc {n_exc:.3e}"));
    o.check((t_hl - 1.0).abs() < 0.005, format!("t_hl {t_hl:.4}"));

    let even = bec_model::validate(
        &BecConfig {
            l: 3,
            ..cfg.clone()
        },
        &limits,
    );
    let even_failed: Vec<_> = even.failures().map(|c| c.name).collect();
    o.check(
        even_failed == [check_names::RESONANCE],
        format!("even pair failures {even_failed:?}"),
    );
    let long = bec_model::validate(
        &BecConfig {
            run_time: 2.0,
            ..cfg.clone()
        },
        &limits,
    );
    let long_failed: Vec<_> = long.failures().map(|c| c.name).collect();
    o.check(
        long_failed == [check_names::HALF_LIFE],
        format!("t > t_hl failures {long_failed:?}"),
    );
    let warned = bec_model::validate(
        &BecConfig {
            alpha_wl: 0.3,
            ..cfg
        },
        &limits,
    );
    o.check(
        warned.get(check_names::ONE_DIMENSIONAL).map(|c| c.status) == Some(Status::Warn),
        "wide cloud reported as a warning",
    );
    o.note(format!(
        "dilute {dilute:.2e}, N_exc {n_exc:.2e} vs N0 1e9, t_hl {t_hl:.3} s; even n+l -> {even_failed:?}; t=2 s -> {long_failed:?}"
    ));
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("replicas.cfg");
    std::fs::write(&cfg_path, "[sim]\nreplicas = 16\n").unwrap();
    let cfg = cfg_path.to_str().unwrap();
    let runs: [&[&str]; 4] = [
        &["simulate", "--seed", "42"],
        &["simulate", "--seed", "7", "--replica", "3"],
        &["fit", "--seed", "42"],
        &["fit", "--seed", "42", "--config", cfg],
    ];
    for args in runs {
        let out = |_| {
            Command::new(env!("CARGO_BIN_EXE_lambda-phonon"))
                .args(args)
                .env_remove("LAMBDA_PHONON_SEED")
                .output()
                .unwrap()
        };
        let (a, b) = (out(0), out(1));
        o.check(
            a.status.success() && !a.stdout.is_empty(),
            format!("{args:?} ran"),
        );
        o.check(a.stdout == b.stdout, format!("{args:?} byte-identical"));
    }
    let scan = reference_scan(32);
    o.check(
        experiment::run_campaign(&scan).unwrap() == experiment::run_campaign(&scan).unwrap(),
        "campaign bit-identical",
    );
    o.note("simulate/fit CLI runs repeated with the same seed are byte-identical; 32-replica campaign bit-identical");
    o
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        (
            1,
            "reference-table reproduction (closed form)",
            Duration::from_secs(1),
            criterion_1,
        ),
        (
            2,
            "Gaussian-engine pipeline matches closed form within 2%",
            Duration::from_secs(30),
            criterion_2,
        ),
        (
            3,
            "quoted scalars c_s, Omega, dB",
            Duration::from_secs(60),
            criterion_3,
        ),
        (
            4,
            "Gaussian-engine invariant suite",
            Duration::from_secs(60),
            criterion_4,
        ),
        (5, "fit campaign", Duration::from_secs(60), criterion_5),
        (6, "validation suite", Duration::from_secs(60), criterion_6),
        (7, "determinism", Duration::from_secs(60), criterion_7),
    ];
    let mut failed = 0;
    for (id, name, budget, f) in criteria {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        outcome.check(
            elapsed <= budget,
            format!(
                "runtime {:.2} s > {:.0} s",
                elapsed.as_secs_f64(),
                budget.as_secs_f64()
            ),
        );
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "{verdict} criterion {id}: {name} [{:.2} s] {}",
            elapsed.as_secs_f64(),
            outcome.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
