//! Plain CSV writers and readers for spectra, staircases, DOS series and
//! fit reports.
//!
//! Numbers are printed like C's `%.12g`, so output is byte-stable across
//! runs and platforms.

use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::fitlab::{PowerLawFit, ScalingRow};
use crate::manybody::BosonConfig;
use crate::spectra::{Level, Spectrum};
use crate::staircase::{DosSeries, Staircase};

/// Formats `x` with `sig` significant digits, `%g` style.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// 12 significant digits.
pub fn fmt(x: f64) -> String {
    format_sig(x, 12)
}

fn join_labels(level: &Level) -> String {
    level
        .labels
        .iter()
        .map(|t| {
            t.iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// `energy,degeneracy[,labels]`; labels are `|`-separated quantum numbers,
/// one tuple per state, tuples separated by `;`.
pub fn write_spectrum<W: Write>(mut w: W, spectrum: &Spectrum, labels: bool) -> io::Result<()> {
    if labels {
        writeln!(w, "energy,degeneracy,labels")?;
    } else {
        writeln!(w, "energy,degeneracy")?;
    }
    for level in spectrum.levels() {
        if labels {
            writeln!(w, "{},{},{}", fmt(level.energy), level.degeneracy, join_labels(level))?;
        } else {
            writeln!(w, "{},{}", fmt(level.energy), level.degeneracy)?;
        }
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, what: &'static str) -> Result<T> {
    field
        .map(str::trim)
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| Error::invalid("input", format!("line {line}: bad {what}")))
}

/// Reads a spectrum written by [`write_spectrum`]. The file carries no
/// cutoff, so the last level is taken as the completeness limit.
pub fn read_spectrum<R: BufRead>(r: R) -> Result<Spectrum> {
    let mut levels = Vec::new();
    let mut lines = r.lines().enumerate();
    match lines.next() {
        Some((_, Ok(header))) if header.trim().starts_with("energy,degeneracy") => {}
        _ => {
            return Err(Error::invalid(
                "input",
                "expected header `energy,degeneracy`",
            ))
        }
    }
    for (i, line) in lines {
        let line = line.map_err(|e| Error::invalid("input", e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.splitn(3, ',');
        let energy: f64 = parse_field(fields.next(), i + 1, "energy")?;
        let degeneracy: u64 = parse_field(fields.next(), i + 1, "degeneracy")?;
        let labels = match fields.next() {
            Some(text) if !text.trim().is_empty() => text
                .split(';')
                .map(|t| {
                    t.split('|')
                        .map(|n| parse_field(Some(n), i + 1, "label"))
                        .collect::<Result<Vec<u32>>>()
                })
                .collect::<Result<Vec<_>>>()?,
            _ => Vec::new(),
        };
        levels.push(Level {
            energy,
            degeneracy,
            labels,
        });
    }
    let e_max = levels.last().map_or(0.0, |l| l.energy);
    Spectrum::from_levels(levels, e_max)
}

/// `energy,N`.
pub fn write_staircase<W: Write>(mut w: W, staircase: &Staircase) -> io::Result<()> {
    writeln!(w, "energy,N")?;
    for &(e, n) in staircase.points() {
        writeln!(w, "{},{}", fmt(e), n)?;
    }
    Ok(())
}

/// `center,g`.
pub fn write_dos<W: Write>(mut w: W, dos: &DosSeries) -> io::Result<()> {
    writeln!(w, "center,g")?;
    for &(c, g) in &dos.samples {
        writeln!(w, "{},{}", fmt(c), fmt(g))?;
    }
    Ok(())
}

/// `energy,degeneracy` spikes.
pub fn write_spikes<W: Write>(mut w: W, spikes: &[(f64, u64)]) -> io::Result<()> {
    writeln!(w, "energy,degeneracy")?;
    for &(e, d) in spikes {
        writeln!(w, "{},{}", fmt(e), d)?;
    }
    Ok(())
}

pub const REPORT_HEADER: &str = "label,N,alpha,beta,ln_alpha,residual_rms,points";

/// One report line; failed fits print `nan` and zero points.
pub fn report_line(label: &str, n: u32, fit: Option<&PowerLawFit>) -> String {
    match fit {
        Some(f) => format!(
            "{},{},{},{},{},{},{}",
            label,
            n,
            fmt(f.alpha),
            fmt(f.beta),
            fmt(f.ln_alpha),
            fmt(f.residual_rms),
            f.point_count
        ),
        None => format!("{label},{n},nan,nan,nan,nan,0"),
    }
}

/// `label,N,alpha,beta,ln_alpha,residual_rms,points`.
pub fn write_report<W: Write>(mut w: W, rows: &[ScalingRow]) -> io::Result<()> {
    writeln!(w, "{REPORT_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", report_line(&row.label, row.n, row.fit.as_ref().ok()))?;
    }
    Ok(())
}

/// `indices,energy` with `|`-joined 1-based state indices.
pub fn write_configurations<W: Write>(mut w: W, configs: &[BosonConfig]) -> io::Result<()> {
    writeln!(w, "indices,energy")?;
    for c in configs {
        let idx: Vec<String> = c.occupied.iter().map(|i| i.to_string()).collect();
        writeln!(w, "{},{}", idx.join("|"), fmt(c.energy))?;
    }
    Ok(())
}
