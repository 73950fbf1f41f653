use std::fmt::Write as _;
use std::path::Path;

use boxdos_core::analytic::{
    iterate_convolution, nboson_closed_form, weyl_counting, weyl_dos, AnalyticDos,
    ConvolutionOptions,
};
use boxdos_core::csvio::{
    fmt, report_line, write_configurations, write_dos, write_spectrum, write_staircase,
    REPORT_HEADER,
};
use boxdos_core::fitlab::{cutoff_for_states, fit_log_log, fit_spectrum, FitOptions, PowerLawFit};
use boxdos_core::manybody::{build_nboson_spectrum, configurations};
use boxdos_core::spectra::{BoxGeometry, Spectrum};
use boxdos_core::staircase::{
    default_window, dos_window, overlapping_centers, tiling_centers, Staircase,
};

use crate::args::{
    AnalyticArgs, AnalyticForm, Command, DosArgs, FitArgs, NbosonArgs, RunConfig, Shape,
    SweepArgs,
};
use crate::error::{invalid, CliError, CliResult};
use crate::output::emit;
use crate::reproduce;

/// Checks every numeric parameter of `command`; nothing is computed.
pub fn validate(command: &Command) -> CliResult<()> {
    match command {
        Command::Spectrum(a) => a.source.validate(),
        Command::Staircase(a) => a.source.validate(),
        Command::Dos(a) => {
            a.source.validate()?;
            if let Some(w) = a.window {
                if !(w.is_finite() && w > 0.0) {
                    return Err(invalid("--window", format!("must be a positive number, got {w}")));
                }
            }
            for (flag, v) in [("--start", a.start), ("--end", a.end)] {
                if v.is_some_and(|v| !v.is_finite()) {
                    return Err(invalid(flag, "must be finite"));
                }
            }
            if let (Some(s), Some(e)) = (a.start, a.end) {
                if e < s {
                    return Err(invalid("--end", "must not be below --start"));
                }
            }
            Ok(())
        }
        Command::Nboson(a) => {
            a.source.validate()?;
            if a.n < 1 {
                return Err(invalid("--n", "particle number must be at least 1"));
            }
            if a.states < 1 {
                return Err(invalid("--states", "must be at least 1"));
            }
            if a.max_states < 1 {
                return Err(invalid("--max-states", "must be at least 1"));
            }
            if a.configs == Some(0) {
                return Err(invalid("--configs", "must be at least 1"));
            }
            Ok(())
        }
        Command::Analytic(a) => validate_analytic(a),
        Command::Fit(a) => {
            a.source.validate()?;
            if a.n < 1 {
                return Err(invalid("--n", "particle number must be at least 1"));
            }
            let lo = a.e_lo.unwrap_or(0.0);
            if !(lo.is_finite() && lo >= 0.0) {
                return Err(invalid("--e-lo", "must be a nonnegative number"));
            }
            if let Some(hi) = a.e_hi {
                if !(hi.is_finite() && hi > lo) {
                    return Err(invalid("--e-hi", "must exceed --e-lo"));
                }
            }
            Ok(())
        }
        Command::Sweep(a) => {
            let (flag, range) = match a.geometry {
                Shape::Hyperbox => ("--lz", a.lz),
                Shape::Cylinder => ("--ratio", a.ratio),
                _ => return Err(invalid("--geometry", "sweeps support hyperbox and cylinder")),
            };
            range.validate(flag)?;
            if !(range.start > 0.0) {
                return Err(invalid(flag, "lengths must be positive"));
            }
            if a.steps < 1 {
                return Err(invalid("--steps", "must be at least 1"));
            }
            if a.states < 1 {
                return Err(invalid("--states", "must be at least 1"));
            }
            Ok(())
        }
        Command::Reproduce(a) => {
            if a.states < 1000 {
                return Err(invalid("--states", "must be at least 1000"));
            }
            if a.ensemble < boxdos_core::fitlab::MIN_ENSEMBLE {
                return Err(invalid(
                    "--ensemble",
                    format!("must be at least {}", boxdos_core::fitlab::MIN_ENSEMBLE),
                ));
            }
            if a.levels < 2 {
                return Err(invalid("--levels", "must be at least 2"));
            }
            Ok(())
        }
    }
}

fn validate_analytic(a: &AnalyticArgs) -> CliResult<()> {
    a.energies.validate("--energies")?;
    if a.steps < 1 {
        return Err(invalid("--steps", "must be at least 1"));
    }
    if a.n < 1 {
        return Err(invalid("--n", "particle number must be at least 1"));
    }
    match a.form {
        AnalyticForm::Weyl => {
            if a.dim < 1 {
                return Err(invalid("--dim", "must be at least 1"));
            }
            if a.energies.start < 0.0 {
                return Err(invalid("--energies", "energies must be nonnegative"));
            }
        }
        AnalyticForm::ClosedForm | AnalyticForm::Convolution => {
            if !(a.a.is_finite() && a.a > 0.0) {
                return Err(invalid("--a", format!("must be a positive number, got {}", a.a)));
            }
            let twice = 2.0 * a.b;
            if !(a.b.is_finite() && a.b > -1.0 && twice == twice.round()) {
                return Err(invalid("--b", format!("must be a half-integer above -1, got {}", a.b)));
            }
            if a.form == AnalyticForm::Convolution && !(a.energies.start > 0.0) {
                return Err(invalid("--energies", "energies must be positive"));
            }
        }
    }
    Ok(())
}

/// Runs a validated configuration.
pub fn run(config: &RunConfig) -> CliResult<()> {
    let out = config.out.as_deref();
    let seed = config.seed;
    let text = match &config.command {
        Command::Spectrum(a) => {
            let s = a.source.load(seed)?;
            let mut buf = Vec::new();
            write_spectrum(&mut buf, &s, a.labels)?;
            utf8(buf)
        }
        Command::Staircase(a) => {
            let s = a.source.load(seed)?;
            let mut buf = Vec::new();
            write_staircase(&mut buf, &Staircase::from_spectrum(&s))?;
            utf8(buf)
        }
        Command::Dos(a) => dos(a, seed)?,
        Command::Nboson(a) => nboson(a, seed)?,
        Command::Analytic(a) => analytic(a)?,
        Command::Fit(a) => fit(a, seed)?,
        Command::Sweep(a) => sweep(a)?,
        Command::Reproduce(a) => {
            let dir = out.unwrap_or(Path::new("figures"));
            return reproduce::run(a, seed, config.format, dir);
        }
    };
    emit(out, &text, config.format)
}

fn utf8(buf: Vec<u8>) -> String {
    String::from_utf8(buf).expect("writers emit ASCII")
}

fn dimension(a: &DosArgs) -> usize {
    match (&a.source.input, a.source.geometry()) {
        (None, Some(g)) => g.dimension(),
        _ => 3,
    }
}

fn dos(a: &DosArgs, seed: u64) -> CliResult<String> {
    let s = a.source.load(seed)?;
    let w = a.window.unwrap_or_else(|| default_window(s.e_max(), dimension(a)));
    let start = a.start.unwrap_or(0.5 * w);
    let end = a.end.unwrap_or(s.e_max() - 0.5 * w);
    if end < start {
        return Err(invalid("--window", format!("window {w} does not fit below e-max {}", s.e_max())));
    }
    let centers = if a.tiling {
        tiling_centers(start - 0.5 * w, end + 0.5 * w, w)
    } else {
        overlapping_centers(start, end, w)
    };
    let series = dos_window(&s, w, &centers)?;
    let mut buf = Vec::new();
    write_dos(&mut buf, &series)?;
    Ok(utf8(buf))
}

fn nboson(a: &NbosonArgs, seed: u64) -> CliResult<String> {
    let base = a.source.load(seed)?;
    let e_max = match a.source.e_max {
        Some(e) => {
            let affordable = cutoff_for_states(&base, a.n, a.max_states)?;
            if e > affordable {
                return Err(invalid(
                    "--e-max",
                    format!(
                        "more than {} states below {e}; lower it or raise --max-states",
                        a.max_states
                    ),
                ));
            }
            e
        }
        None => cutoff_for_states(&base, a.n, a.states)?,
    };
    let mut buf = Vec::new();
    match a.configs {
        Some(limit) => {
            let configs = configurations(&base, a.n, e_max, limit)?;
            write_configurations(&mut buf, &configs)?;
        }
        None => write_spectrum(&mut buf, &build_nboson_spectrum(&base, a.n, e_max)?, false)?,
    }
    Ok(utf8(buf))
}

fn analytic(a: &AnalyticArgs) -> CliResult<String> {
    let energies = a.energies.points(a.steps);
    let mut out = String::new();
    match a.form {
        AnalyticForm::Weyl => {
            out.push_str("energy,N,g\n");
            for e in energies {
                let _ = writeln!(out, "{},{},{}", fmt(e), fmt(weyl_counting(a.dim, e)?), fmt(weyl_dos(a.dim, e)?));
            }
        }
        AnalyticForm::ClosedForm => {
            out.push_str("N,coefficient,exponent,alpha,beta,ln_alpha\n");
            for n in 1..=a.n {
                let c = nboson_closed_form(a.a, a.b, n)?;
                let _ = writeln!(
                    out,
                    "{n},{},{},{},{},{}",
                    fmt(c.coefficient),
                    fmt(c.exponent),
                    fmt(c.alpha),
                    fmt(c.beta),
                    fmt(c.ln_alpha())
                );
            }
        }
        AnalyticForm::Convolution => {
            let single = AnalyticDos::new(a.a, a.b)?;
            let sampled = iterate_convolution(&single, a.n, &energies, &ConvolutionOptions::default())?;
            let exact = nboson_closed_form(a.a, a.b, a.n)?;
            out.push_str("energy,numeric,closed_form,rel_error\n");
            for &(e, g) in sampled.points() {
                let want = exact.density(e);
                let _ = writeln!(out, "{},{},{},{}", fmt(e), fmt(g), fmt(want), fmt((g - want).abs() / want));
            }
        }
    }
    Ok(out)
}

fn fit(a: &FitArgs, seed: u64) -> CliResult<String> {
    let s = a.source.load(seed)?;
    let opts = FitOptions {
        min_count: a.min_count,
        e_lo: a.e_lo.unwrap_or(0.0),
        e_hi: a.e_hi.unwrap_or(f64::INFINITY),
    };
    let result = fit_spectrum(&s, &opts)?;
    let label = a.label.clone().unwrap_or_else(|| a.source.label());
    if label.contains(',') {
        return Err(invalid("--label", "must not contain commas"));
    }
    Ok(format!("{REPORT_HEADER}\n{}\n", report_line(&label, a.n, Some(&result))))
}

/// Fit of `N` against the excitation energy `e - e_ground`.
fn excitation_fit(s: &Spectrum, min_count: u64) -> CliResult<PowerLawFit> {
    let ground = s.ground_energy().ok_or_else(|| CliError::Compute("empty spectrum".into()))?;
    let points: Vec<(f64, f64)> = Staircase::from_spectrum(s)
        .points()
        .iter()
        .filter(|&&(e, n)| n >= min_count && e > ground)
        .map(|&(e, n)| (e - ground, n as f64))
        .collect();
    Ok(fit_log_log(&points)?)
}

fn sweep(a: &SweepArgs) -> CliResult<String> {
    let (name, range) = match a.geometry {
        Shape::Cylinder => ("ratio", a.ratio),
        _ => ("lz", a.lz),
    };
    let mut out = format!("{name},states,e_max,ground,alpha,beta,ln_alpha,residual_rms,points\n");
    for p in range.points(a.steps) {
        let g = match a.geometry {
            Shape::Cylinder => BoxGeometry::unit_cylinder(p),
            _ => BoxGeometry::Hyperbox {
                lengths: vec![1.0, 1.0, p],
            },
        };
        let s = g.enumerate_states(a.states)?;
        let ground = s.ground_energy().unwrap_or(f64::NAN);
        let _ = write!(out, "{},{},{},{},", fmt(p), s.total_states(), fmt(s.e_max()), fmt(ground));
        match excitation_fit(&s, a.min_count) {
            Ok(f) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt(f.alpha),
                    fmt(f.beta),
                    fmt(f.ln_alpha),
                    fmt(f.residual_rms),
                    f.point_count
                );
            }
            Err(_) => out.push_str("nan,nan,nan,nan,0\n"),
        }
    }
    Ok(out)
}
