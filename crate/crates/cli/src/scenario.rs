//! Experiments exposed on the command line and their CSV reports.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rindler_lab_core::dynamics::{
    drift_under_internal_change, expected_drift_shift, find_equilibrium, fmt17, post_change_average, StepSchedule,
};
use rindler_lab_core::frames::{rindler_to_minkowski, FrameSpec, RindlerEvent};
use rindler_lab_core::quantum_visibility::{
    frame_dependence_report, visibility_oracle, InterferometerConfig, InternalSpectrum, ORACLE_MAX_LEVELS,
};
use rindler_lab_core::redshift::run_redshift_experiment;
use rindler_lab_core::relhamiltonian::{
    check_expansion_consistency, total_hamiltonian_eq1_excess, rindler_hamiltonian_bracket_excess, ConstantInternal,
    HamiltonianForm, HamiltonianSpec, PhaseState, PotentialSpec,
};

use crate::{CliError, ScenarioConfig, VERSION};

/// Largest accepted relative error of the shifted-frame composition.
pub const FRAMES_TOLERANCE: f64 = 1e-12;

/// Map from reference to shifted Rindler coordinates; swappable so the
/// self-check can be exercised against a faulty implementation.
pub type ShiftFn = fn(&RindlerEvent<f64>, &FrameSpec<f64>) -> rindler_lab_core::Result<RindlerEvent<f64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    FramesCheck,
    Redshift,
    Equilibrium,
    Drift,
    Visibility,
    ExpansionCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::FramesCheck,
        Experiment::Redshift,
        Experiment::Equilibrium,
        Experiment::Drift,
        Experiment::Visibility,
        Experiment::ExpansionCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::FramesCheck => "frames-check",
            Experiment::Redshift => "redshift",
            Experiment::Equilibrium => "equilibrium",
            Experiment::Drift => "drift",
            Experiment::Visibility => "visibility",
            Experiment::ExpansionCheck => "expansion-check",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown experiment `{s}`")))
    }
}

/// Tabular result of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Scalar results written as `# name = value` comment lines.
    pub summary: Vec<(String, f64)>,
    /// Set when an invariant checked by the experiment failed.
    pub failure: Option<String>,
}

impl Report {
    fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            failure: None,
        }
    }

    fn note(&mut self, name: &str, value: f64) {
        self.summary.push((name.to_string(), value));
    }

    /// Provenance comments, summary comments, header and rows.
    pub fn write_csv<W: Write>(&self, out: &mut W, experiment: Experiment, config: &ScenarioConfig) -> std::io::Result<()> {
        writeln!(out, "# rindler-lab {VERSION}")?;
        writeln!(out, "# experiment = {experiment}")?;
        for (key, value) in config.entries() {
            if key != "output" {
                writeln!(out, "# {key} = {value}")?;
            }
        }
        for (name, value) in &self.summary {
            writeln!(out, "# result {name} = {}", fmt17(*value))?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt17(*v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Runs one experiment on an already validated configuration.
pub fn compute(experiment: Experiment, config: &ScenarioConfig) -> Result<Report, CliError> {
    match experiment {
        Experiment::FramesCheck => frames_check(config),
        Experiment::Redshift => redshift(config),
        Experiment::Equilibrium => equilibrium(config),
        Experiment::Drift => drift(config),
        Experiment::Visibility => visibility(config),
        Experiment::ExpansionCheck => expansion_check(config),
    }
}

/// Runs every sweep point (concurrently), then writes each report to its own
/// file, or to `stdout` when no output path is configured. Nothing is written
/// unless every point computed successfully.
pub fn run_scenario<W: Write>(
    experiment: Experiment,
    config: &ScenarioConfig,
    out_override: Option<&Path>,
    stdout: &mut W,
) -> Result<Vec<PathBuf>, CliError> {
    let points = config.expand_sweep()?;
    let reports: Vec<Report> = points
        .par_iter()
        .map(|point| compute(experiment, point))
        .collect::<Result<_, _>>()?;

    let base = out_override.map(Path::to_path_buf).or_else(|| config.output());
    let mut written = Vec::new();
    for (index, (point, report)) in points.iter().zip(&reports).enumerate() {
        match &base {
            Some(path) => {
                let path = if points.len() > 1 { indexed_path(path, index) } else { path.clone() };
                let mut file = std::io::BufWriter::new(std::fs::File::create(&path).map_err(|e| {
                    CliError::Config(format!("cannot create {}: {e}", path.display()))
                })?);
                report.write_csv(&mut file, experiment, point)?;
                file.flush()?;
                written.push(path);
            }
            None => report.write_csv(stdout, experiment, point)?,
        }
    }

    let failures: Vec<&str> = reports.iter().filter_map(|r| r.failure.as_deref()).collect();
    if failures.is_empty() {
        Ok(written)
    } else {
        Err(CliError::Invariant(failures.join("; ")))
    }
}

/// `out.csv` → `out_0.csv`, `out_1.csv`, ...
fn indexed_path(path: &Path, index: usize) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{index}.{ext}"),
        None => format!("{stem}_{index}"),
    };
    path.with_file_name(name)
}

/// Relative disagreement between the reference map evaluated at `e` and the
/// shifted observer's own map applied to `shift(e)`, measured against
/// (cT, X − b). Distances are scaled by max(|cT|, |X − b|, c²/g).
pub fn shifted_consistency_error(e: &RindlerEvent<f64>, f: &FrameSpec<f64>, shift: ShiftFn) -> Result<f64, CliError> {
    let c = f.c();
    let reference = FrameSpec::unshifted(f.g(), c)?;
    let direct = rindler_to_minkowski(e, &reference)?;
    let shifted = shift(e, f)?;
    let composed = rindler_to_minkowski(&shifted, &f.shifted_reference())?;
    let (ct, x) = (c * direct.t, direct.x - f.b());
    let scale = ct.abs().max(x.abs()).max(f.horizon_distance());
    Ok((c * composed.t - ct).abs().max((composed.x - x).abs()) / scale)
}

/// Random events and frames within c = 1, g ∈ [0.5, 2], b ∈ [0, 0.5],
/// t' ∈ [−2, 2]·c/g and x' above the horizon.
pub fn random_frame_events(seed: u64, count: usize) -> Vec<(RindlerEvent<f64>, FrameSpec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = rng.gen_range(0.5..=2.0);
            let b = rng.gen_range(0.0..=0.5);
            let f = FrameSpec::new(g, b, 1.0).expect("b ≥ 0 is always valid");
            let horizon = f.horizon_distance();
            let t = rng.gen_range(-2.0..2.0) / g;
            let x = rng.gen_range(-0.9 * horizon..2.0 * horizon);
            (RindlerEvent::new(t, x), f)
        })
        .collect()
}

fn frames_check(config: &ScenarioConfig) -> Result<Report, CliError> {
    frames_check_with(config, rindler_lab_core::frames::shift_rindler)
}

pub fn frames_check_with(config: &ScenarioConfig, shift: ShiftFn) -> Result<Report, CliError> {
    let g = config.real("g")?;
    let b = config.real("b")?;
    let c = config.light_speed()?;
    let samples = config.count_or("samples", 1000)?;
    let seed = config.count_or("seed", 1)? as u64;
    let f = FrameSpec::new(g, b, c)?;
    let reference = FrameSpec::unshifted(g, c)?;
    let horizon = f.horizon_distance();

    let mut report = Report::new(&["t_prime", "x_prime", "cT", "X_minus_b", "cT_shifted", "X_shifted", "relative_error"]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let e = RindlerEvent::new(rng.gen_range(-2.0..2.0) * c / g, rng.gen_range(-0.9 * horizon..2.0 * horizon));
        let direct = rindler_to_minkowski(&e, &reference)?;
        let composed = rindler_to_minkowski(&shift(&e, &f)?, &f.shifted_reference())?;
        let error = shifted_consistency_error(&e, &f, shift)?;
        worst = worst.max(error);
        report.rows.push(vec![e.t, e.x, c * direct.t, direct.x - b, c * composed.t, composed.x, error]);
    }
    report.note("max_relative_error", worst);
    if worst.is_nan() || worst > FRAMES_TOLERANCE {
        report.failure = Some(format!(
            "shifted-frame composition disagrees by {worst:e} (tolerance {FRAMES_TOLERANCE:e})"
        ));
    }
    Ok(report)
}

fn redshift(config: &ScenarioConfig) -> Result<Report, CliError> {
    let g = config.real("g")?;
    let b = config.real("b")?;
    let emitted = config.real("E")?;
    let c = config.light_speed()?;
    let r = run_redshift_experiment(g, b, emitted, c)?;
    let beta = g * b / (c * c);
    let mut report = Report::new(&[
        "g",
        "b",
        "c",
        "E_emitted",
        "T_absorption",
        "X_absorption",
        "tau_absorption",
        "E_measured",
        "first_order",
        "doppler_factor",
        "exp_g_tau_over_c",
        "second_order_bound",
    ]);
    report.rows.push(vec![
        g,
        b,
        c,
        emitted,
        r.absorption_event.t,
        r.absorption_event.x,
        r.detector_proper_time,
        r.measured_energy,
        r.first_order_energy,
        r.doppler_factor,
        (g * r.detector_proper_time / c).exp(),
        2.0 * beta * beta,
    ]);
    Ok(report)
}

/// Point-like clock of mass `M` with constant internal energy `Hrel0` held by
/// a harmonic support of stiffness `alpha`.
fn clock_spec(config: &ScenarioConfig) -> Result<HamiltonianSpec<f64>, CliError> {
    let mass = config.real("M")?;
    let g = config.real("g")?;
    let alpha = config.real("alpha")?;
    let h_rel = config.real("Hrel0")?;
    let c = config.light_speed()?;
    let form = match config.get("form").unwrap_or("expanded") {
        "expanded" => HamiltonianForm::Expanded,
        "bracket" => HamiltonianForm::Bracket,
        other => return Err(CliError::Config(format!("unknown Hamiltonian form `{other}`"))),
    };
    Ok(HamiltonianSpec::new(vec![mass], g, c, ConstantInternal(h_rel), PotentialSpec::harmonic(alpha))?.with_form(form))
}

fn equilibrium(config: &ScenarioConfig) -> Result<Report, CliError> {
    let spec = clock_spec(config)?;
    let r = find_equilibrium(&spec)?;
    let closed = r.closed_form_x.unwrap_or(f64::NAN);
    let mut report = Report::new(&["X_closed_form", "X_solver", "P_solver", "difference", "residual", "iterations"]);
    report.rows.push(vec![
        closed,
        r.state.x(),
        r.state.p(),
        r.state.x() - closed,
        r.residual,
        r.iterations as f64,
    ]);
    Ok(report)
}

/// `constant <v>` or `step <before> <after> <at>`.
fn parse_schedule(raw: &str) -> Result<StepSchedule<f64>, CliError> {
    let parts: Vec<&str> = raw.split_whitespace().collect();
    let number = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Config(format!("bad number `{s}` in schedule")))
    };
    match parts.as_slice() {
        ["constant", v] => Ok(StepSchedule::constant(number(v)?)),
        ["step", before, after, at] => Ok(StepSchedule {
            before: number(before)?,
            after: number(after)?,
            at: number(at)?,
        }),
        _ => Err(CliError::Config(format!(
            "schedule must be `constant <v>` or `step <before> <after> <at>`, got `{raw}`"
        ))),
    }
}

fn drift(config: &ScenarioConfig) -> Result<Report, CliError> {
    let spec = clock_spec(config)?;
    let dt = config.real("dt")?;
    let steps = config.count("steps")?;
    let schedule = parse_schedule(config.get("schedule").unwrap_or("constant 1"))?;
    if steps == 0 {
        return Err(CliError::Config("`steps` must be at least 1".into()));
    }
    let eq = find_equilibrium(&spec)?;
    let horizon = dt * steps as f64;
    let traj = drift_under_internal_change(&spec, |t| schedule.value(t), &eq.state, horizon, dt)?;

    let mut report = Report::new(&["t", "X", "P", "H"]);
    for ((t, s), e) in traj.times.iter().zip(&traj.states).zip(&traj.energies) {
        report.rows.push(vec![*t, s.x(), s.p(), *e]);
    }
    report.note("X_equilibrium", eq.state.x());
    if schedule.at < horizon {
        let average = post_change_average(&traj, schedule.at)?;
        report.note("X_post_change_average", average);
        report.note("measured_shift", average - eq.state.x());
        report.note(
            "expected_shift",
            expected_drift_shift(&spec, &eq.state, schedule.before, schedule.after)?,
        );
    }
    Ok(report)
}

/// `geometric <spacing> <ratio>`, `harmonic <spacing> <ratio> <d>` or an
/// explicit list `E:p, E:p, ...`.
fn parse_levels(raw: &str) -> Result<InternalSpectrum<f64>, CliError> {
    let words: Vec<&str> = raw.split_whitespace().collect();
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Config(format!("bad number `{s}` in levels")))
    };
    let spectrum = match words.as_slice() {
        ["geometric", spacing, ratio] => InternalSpectrum::geometric(number(spacing)?, number(ratio)?)?,
        ["harmonic", spacing, ratio, d] => {
            let d = d
                .parse()
                .map_err(|_| CliError::Config(format!("bad level count `{d}`")))?;
            InternalSpectrum::harmonic(number(spacing)?, number(ratio)?, d)?
        }
        _ => {
            let levels = raw
                .split(',')
                .map(|pair| {
                    let (e, p) = pair
                        .split_once(':')
                        .ok_or_else(|| CliError::Config(format!("level `{pair}` is not `E:p`")))?;
                    Ok((number(e)?, number(p)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            InternalSpectrum::new(levels)?
        }
    };
    Ok(spectrum)
}

fn visibility(config: &ScenarioConfig) -> Result<Report, CliError> {
    let g = config.real("g")?;
    let dx = config.real("dx")?;
    let duration = config.real("T")?;
    let lambda = config.real_or("lambda", 0.0)?;
    let spectrum = parse_levels(config.require("levels")?)?;
    let setup = InterferometerConfig {
        x_upper: dx,
        x_lower: 0.0,
        duration,
        g,
        c: config.light_speed()?,
        hbar: config.hbar()?,
        counter_coupling: lambda,
    }
    .validated()?;
    let frames = frame_dependence_report(&setup, &spectrum);
    let oracle = if spectrum.len() <= ORACLE_MAX_LEVELS {
        visibility_oracle(&setup, &spectrum)?
    } else {
        f64::NAN
    };
    let mut report = Report::new(&["levels", "V_supported", "V_free_fall", "difference", "V_oracle"]);
    report
        .rows
        .push(vec![spectrum.len() as f64, frames.supported, frames.free_fall, frames.difference, oracle]);
    Ok(report)
}

fn expansion_check(config: &ScenarioConfig) -> Result<Report, CliError> {
    let mass = config.real("M")?;
    let g = config.real("g")?;
    let h_rel = config.real("Hrel0")?;
    let x = config.real("X")?;
    let p = config.real("P")?;
    let alpha = config.real_or("alpha", 0.0)?;
    let speeds = if config.get("speeds").is_some() {
        config.reals("speeds")?
    } else {
        vec![10.0, 20.0, 40.0, 80.0]
    };
    let potential = if alpha == 0.0 {
        PotentialSpec::none()
    } else {
        PotentialSpec::harmonic(alpha)
    };
    let spec = HamiltonianSpec::new(vec![mass], g, speeds[0], ConstantInternal(h_rel), potential)?;
    let state = PhaseState::at_origin_of_internal(x, p, 1);
    let fit = check_expansion_consistency(&spec, &state, &speeds)?;

    let mut report = Report::new(&["c", "expanded", "bracket", "difference"]);
    for (&c, &d) in speeds.iter().zip(&fit.differences) {
        let at_c = spec.with_c(c)?;
        report.rows.push(vec![
            c,
            total_hamiltonian_eq1_excess(&at_c, &state)?,
            rindler_hamiltonian_bracket_excess(&at_c, &state)?,
            d,
        ]);
    }
    if let Some(exponent) = fit.fitted_exponent {
        report.note("fitted_exponent", exponent);
    }
    if !fit.passed {
        report.failure = Some(format!(
            "difference decays with exponent {:?}, expected about -4",
            fit.fitted_exponent
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ScenarioConfig {
        text.parse().unwrap()
    }

    fn csv(experiment: Experiment, text: &str) -> String {
        let mut out = Vec::new();
        run_scenario(experiment, &cfg(text), None, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    fn column(text: &str, name: &str) -> Vec<f64> {
        let mut lines = text.lines().filter(|l| !l.starts_with('#'));
        let header: Vec<&str> = lines.next().unwrap().split(',').collect();
        let index = header.iter().position(|h| *h == name).unwrap();
        lines.map(|l| l.split(',').nth(index).unwrap().parse().unwrap()).collect()
    }

    #[test]
    fn experiment_names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!("warp-drive".parse::<Experiment>().is_err());
    }

    #[test]
    fn redshift_row() {
        let text = csv(Experiment::Redshift, "g = 1\nb = 0.1\nc = 1\nE = 1\n");
        let doppler = column(&text, "doppler_factor")[0];
        let first = column(&text, "first_order")[0];
        assert!((first - 1.1).abs() < 1e-15);
        assert!((doppler - first).abs() <= 0.02);
        assert!(text.starts_with("# rindler-lab "));
        assert!(text.contains("# b = 0.1\n"));
    }

    #[test]
    fn equilibrium_row() {
        let text = csv(Experiment::Equilibrium, "M = 1\ng = 1\nalpha = 1\nHrel0 = 0.2\nc = 1\n");
        assert!((column(&text, "X_closed_form")[0] + 1.2).abs() < 1e-15);
        assert!((column(&text, "X_solver")[0] + 1.2).abs() < 1e-9);
    }

    #[test]
    fn drift_summary() {
        let text = csv(
            Experiment::Drift,
            "M = 1\ng = 1\nalpha = 1\nHrel0 = 0.2\nc = 3\ndt = 0.01\nsteps = 20100\nschedule = step 1 2 1\n",
        );
        let result = |name: &str| -> f64 {
            let prefix = format!("# result {name} = ");
            text.lines()
                .find_map(|l| l.strip_prefix(prefix.as_str()))
                .unwrap()
                .parse()
                .unwrap()
        };
        let expected = result("expected_shift");
        assert!((result("measured_shift") - expected).abs() < 0.1 * expected.abs());
        assert_eq!(column(&text, "t").len(), 20101);
    }

    #[test]
    fn visibility_levels() {
        let text = csv(Experiment::Visibility, "g = 1\ndx = 1\nT = 3.141592653589793\nlevels = 0:0.5, 1:0.5\n");
        assert!(column(&text, "V_supported")[0] < 1e-15);
        assert_eq!(column(&text, "V_free_fall")[0], 1.0);
        let text = csv(Experiment::Visibility, "g = 1\ndx = 1\nT = 1\nlevels = harmonic 1 0.5 8\nlambda = 1\n");
        assert_eq!(column(&text, "V_supported")[0], 1.0);
        assert!(matches!(parse_levels("0:0.7, 1:0.7"), Err(CliError::Config(_))));
        assert!(parse_levels("geometric 1 0.5").unwrap().len() > 20);
    }

    #[test]
    fn expansion_fit() {
        let text = csv(Experiment::ExpansionCheck, "M = 1\ng = 1\nHrel0 = 0.5\nX = 0.5\nP = 1\n");
        let result = text
            .lines()
            .find_map(|l| l.strip_prefix("# result fitted_exponent = "))
            .unwrap();
        let exponent: f64 = result.parse().unwrap();
        assert!((exponent + 4.0).abs() < 0.2);
        assert_eq!(column(&text, "c"), vec![10.0, 20.0, 40.0, 80.0]);
    }

    #[test]
    fn frames_check_passes_and_detects_faults() {
        let config = cfg("g = 1.3\nb = 0.4\nsamples = 200\n");
        let good = frames_check(&config).unwrap();
        assert!(good.failure.is_none());
        fn flipped(e: &RindlerEvent<f64>, f: &FrameSpec<f64>) -> rindler_lab_core::Result<RindlerEvent<f64>> {
            Ok(RindlerEvent::new(f.proper_time_rate() * e.t, e.x + f.b()))
        }
        assert!(frames_check_with(&config, flipped).unwrap().failure.is_some());
    }

    #[test]
    fn missing_key_is_a_configuration_error() {
        let err = compute(Experiment::Redshift, &cfg("g = 1\nb = 0.1\n")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("`E`"));
    }

    #[test]
    fn solver_failure_is_a_numeric_error() {
        let err = compute(Experiment::Equilibrium, &cfg("M = 1\ng = 1\nalpha = 0\nHrel0 = 0\n")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn sweep_writes_one_file_per_point() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("red.csv");
        let config = cfg("g = 1\nE = 1\nsweep = b 0.1 0.2 0.3\n");
        let written = run_scenario(Experiment::Redshift, &config, Some(&out), &mut Vec::new()).unwrap();
        assert_eq!(written.len(), 3);
        let second = std::fs::read_to_string(dir.path().join("red_1.csv")).unwrap();
        assert!(second.contains("# b = 0.2\n"));
        assert!((column(&second, "first_order")[0] - 1.2).abs() < 1e-15);
    }

    #[test]
    fn output_is_deterministic() {
        let text = "g = 1.2\nb = 0.3\nsamples = 50\n";
        assert_eq!(csv(Experiment::FramesCheck, text), csv(Experiment::FramesCheck, text));
    }
}
