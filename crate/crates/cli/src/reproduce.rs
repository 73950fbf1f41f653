//! Figure and table data. Each target writes its series as CSV plus a
//! matplotlib script stub that plots them; nothing is rendered here.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use boxdos_core::analytic::{nboson_closed_form, weyl_counting, weyl_dos, weyl_power_law};
use boxdos_core::csvio::{fmt, report_line, write_dos, write_spikes, write_staircase, REPORT_HEADER};
use boxdos_core::fitlab::{
    cutoff_for_states, fit_spectrum, random_ensemble_stats, scaling_report, EnsembleStats,
    FitOptions, ScalingOptions, ScalingRow,
};
use boxdos_core::manybody::build_nboson_spectrum;
use boxdos_core::spectra::{enumerate_sphere, BoxGeometry, Spectrum};
use boxdos_core::staircase::{degeneracy_series, dos_window, overlapping_centers, split_degeneracies, Staircase};

use crate::args::{Format, ReproduceArgs, Target, DEFAULT_SPHERE_K_MAX};
use crate::error::CliResult;
use crate::output::{convert, extension, write_atomic};

/// Cube and rectangle cutoff (n_max = 32).
const BOX_E_MAX: f64 = crate::args::DEFAULT_E_MAX;
const MAX_N: u32 = 5;

#[derive(Clone, Copy)]
enum Kind {
    Stem,
    Step,
    Line,
    Points,
    ErrorBar,
}

struct Series {
    file: String,
    x: &'static str,
    y: &'static str,
    kind: Kind,
    label: String,
}

struct Panel {
    xlabel: &'static str,
    ylabel: &'static str,
    log: bool,
    series: Vec<Series>,
}

#[derive(Default)]
struct Figure {
    files: Vec<(String, String)>,
    panels: Vec<Panel>,
}

impl Figure {
    fn add(&mut self, name: String, text: String) -> String {
        self.files.push((name.clone(), text));
        name
    }
}

fn series(file: &str, x: &'static str, y: &'static str, kind: Kind, label: &str) -> Series {
    Series {
        file: file.to_string(),
        x,
        y,
        kind,
        label: label.to_string(),
    }
}

/// Everything fig10 and fig11 share.
struct Scaling {
    rows: Vec<ScalingRow>,
    random: Vec<EnsembleStats>,
}

struct Context<'a> {
    args: &'a ReproduceArgs,
    seed: u64,
    scaling: Option<Scaling>,
}

pub fn run(args: &ReproduceArgs, seed: u64, format: Format, dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| crate::error::invalid("--out", format!("{}: {e}", dir.display())))?;
    let targets = match args.target {
        Target::All => Target::each(),
        t => vec![t],
    };
    let mut ctx = Context {
        args,
        seed,
        scaling: None,
    };
    let ext = extension(format);
    for target in targets {
        let figure = ctx.build(target)?;
        for (name, text) in &figure.files {
            write_atomic(&dir.join(format!("{name}.{ext}")), convert(text, format).as_bytes())?;
        }
        if !figure.panels.is_empty() {
            let script = stub(&target.name(), &figure.panels, format);
            write_atomic(&dir.join(format!("{}_plot.py", target.name())), script.as_bytes())?;
        }
    }
    Ok(())
}

fn spikes_csv(s: &Spectrum) -> CliResult<String> {
    let mut buf = Vec::new();
    write_spikes(&mut buf, &degeneracy_series(s))?;
    Ok(String::from_utf8(buf).expect("ascii"))
}

fn staircase_csv(s: &Spectrum) -> CliResult<String> {
    let mut buf = Vec::new();
    write_staircase(&mut buf, &Staircase::from_spectrum(s))?;
    Ok(String::from_utf8(buf).expect("ascii"))
}

fn weyl_csv(dim: u32, e_max: f64) -> CliResult<String> {
    let mut out = String::from("energy,N,g\n");
    for k in 1..=200 {
        let e = e_max * k as f64 / 200.0;
        let _ = writeln!(out, "{},{},{}", fmt(e), fmt(weyl_counting(dim, e)?), fmt(weyl_dos(dim, e)?));
    }
    Ok(out)
}

fn report(rows: &[(String, u32, Option<boxdos_core::PowerLawFit>)]) -> String {
    let mut out = format!("{REPORT_HEADER}\n");
    for (label, n, fit) in rows {
        let _ = writeln!(out, "{}", report_line(label, *n, fit.as_ref()));
    }
    out
}

fn single_particle_boxes() -> CliResult<Vec<(String, Spectrum)>> {
    Ok(vec![
        ("cube".into(), BoxGeometry::cube().enumerate(BOX_E_MAX)?),
        ("rectangle".into(), BoxGeometry::incommensurate_rectangle().enumerate(BOX_E_MAX)?),
        ("sphere".into(), enumerate_sphere(DEFAULT_SPHERE_K_MAX)?),
    ])
}

impl Context<'_> {
    fn scaling_options(&self) -> ScalingOptions {
        ScalingOptions {
            target_states: self.args.states,
            ..ScalingOptions::default()
        }
    }

    fn build(&mut self, target: Target) -> CliResult<Figure> {
        let name = target.name();
        match target {
            Target::Fig1 => square_lattice(),
            Target::Fig2 => toy_spectrum(),
            Target::Fig3 => histograms(&name, BoxGeometry::hypercube(2), 100.0, 10.0),
            Target::Fig4 => histograms(&name, BoxGeometry::hypercube(2), 1600.0, 60.0),
            Target::Fig5 => histograms(&name, BoxGeometry::cube(), 100.0, 10.0),
            Target::Fig6 => histograms(&name, BoxGeometry::cube(), 1600.0, 50.0),
            Target::Fig7 => three_boxes(true),
            Target::Fig8 => three_boxes(false),
            Target::Fig9 => self.sphere_bosons(),
            Target::Fig10 | Target::Fig11 => self.scaling_figure(target),
            Target::Table1 => weyl_table(),
            Target::Table2 => {
                let mut fig = Figure::default();
                fig.add("table2".into(), single_particle_fits()?);
                Ok(fig)
            }
            Target::Table3 => boson_table(),
            Target::All => unreachable!("expanded by the caller"),
        }
    }

    fn sphere_bosons(&self) -> CliResult<Figure> {
        let sphere = enumerate_sphere(DEFAULT_SPHERE_K_MAX)?;
        let mut fig = Figure::default();
        let mut fits = Vec::new();
        let mut panel = Panel {
            xlabel: "energy",
            ylabel: "N",
            log: true,
            series: Vec::new(),
        };
        for n in 1..=MAX_N {
            let e_max = cutoff_for_states(&sphere, n, self.args.states)?;
            let spectrum = build_nboson_spectrum(&sphere, n, e_max)?;
            fits.push(("sphere".to_string(), n, fit_spectrum(&spectrum, &FitOptions::default()).ok()));
            let file = fig.add(format!("fig9_n{n}"), staircase_csv(&spectrum)?);
            panel.series.push(series(&file, "energy", "N", Kind::Step, &format!("N = {n}")));
        }
        fig.add("fig9_fits".into(), report(&fits));
        fig.panels.push(panel);
        Ok(fig)
    }

    fn scaling(&mut self) -> CliResult<&Scaling> {
        if self.scaling.is_none() {
            let opts = self.scaling_options();
            let rows = scaling_report(&single_particle_boxes()?, 1..=MAX_N, &opts);
            let seeds: Vec<u64> = (0..self.args.ensemble as u64)
                .map(|i| self.seed.wrapping_add(i))
                .collect();
            let random = (1..=MAX_N)
                .map(|n| random_ensemble_stats(&seeds, self.args.levels, 0.5, n, &opts))
                .collect::<Result<Vec<_>, _>>()?;
            self.scaling = Some(Scaling { rows, random });
        }
        Ok(self.scaling.as_ref().expect("filled above"))
    }

    fn scaling_figure(&mut self, target: Target) -> CliResult<Figure> {
        let name = target.name();
        let (column, ylabel) = if target == Target::Fig10 {
            ("beta", "beta")
        } else {
            ("ln_alpha", "ln alpha")
        };
        let pick = |beta: f64, ln_alpha: f64| if target == Target::Fig10 { beta } else { ln_alpha };
        let scaling = self.scaling()?;
        let mut by_label: BTreeMap<&str, String> = BTreeMap::new();
        let mut order: Vec<&str> = Vec::new();
        for row in &scaling.rows {
            let text = by_label.entry(row.label.as_str()).or_insert_with(|| {
                order.push(row.label.as_str());
                String::new()
            });
            let value = row.fit.as_ref().map_or(f64::NAN, |f| pick(f.beta, f.ln_alpha));
            let _ = writeln!(text, "{},{},0", row.n, fmt(value));
        }
        let mut random = String::new();
        for s in &scaling.random {
            let (mean, std) = if target == Target::Fig10 {
                (s.mean_beta, s.std_beta)
            } else {
                (s.mean_ln_alpha, s.std_ln_alpha)
            };
            let _ = writeln!(random, "{},{},{}", s.n, fmt(mean), fmt(std));
        }
        let (pos, _) = order.iter().enumerate().find(|(_, &l)| l == "theory").unwrap_or((order.len(), &""));
        order.insert(pos, "random");
        by_label.insert("random", random);

        let header = format!("N,{column},{column}_std\n");
        let mut fig = Figure::default();
        let mut combined = format!("label,{}", header);
        let mut panel = Panel {
            xlabel: "N",
            ylabel,
            log: false,
            series: Vec::new(),
        };
        for label in order {
            let body = &by_label[label];
            for line in body.lines() {
                let _ = writeln!(combined, "{label},{line}");
            }
            let file = fig.add(format!("{name}_{label}"), format!("{header}{body}"));
            let kind = match label {
                "theory" => Kind::Line,
                "random" => Kind::ErrorBar,
                _ => Kind::Points,
            };
            panel.series.push(Series {
                file,
                x: "N",
                y: if target == Target::Fig10 { "beta" } else { "ln_alpha" },
                kind,
                label: label.to_string(),
            });
        }
        fig.add(format!("{name}_all"), combined);
        fig.panels.push(panel);
        Ok(fig)
    }
}

fn square_lattice() -> CliResult<Figure> {
    let square = BoxGeometry::hypercube(2).enumerate(200.0)?;
    let mut grid = String::from("nx,ny,energy\n");
    for nx in 1..=10u32 {
        for ny in 1..=10u32 {
            let _ = writeln!(grid, "{nx},{ny},{}", nx * nx + ny * ny);
        }
    }
    let mut shells = String::from("nx,ny,energy\n");
    let mut circles = String::from("energy,degeneracy\n");
    for e in [36.0, 65.0] {
        let _ = writeln!(circles, "{},{}", fmt(e), square.degeneracy_at(e));
        if let Some(level) = square.levels().iter().find(|l| l.energy == e) {
            for t in &level.labels {
                let _ = writeln!(shells, "{},{},{}", t[0], t[1], fmt(e));
            }
        }
    }
    let mut fig = Figure::default();
    let g = fig.add("fig1_grid".into(), grid);
    let s = fig.add("fig1_shells".into(), shells);
    fig.add("fig1_circles".into(), circles);
    fig.panels.push(Panel {
        xlabel: "nx",
        ylabel: "ny",
        log: false,
        series: vec![
            series(&g, "nx", "ny", Kind::Points, "lattice"),
            series(&s, "nx", "ny", Kind::Points, "on a circle"),
        ],
    });
    Ok(fig)
}

fn toy_spectrum() -> CliResult<Figure> {
    let intact = Spectrum::from_state_energies(vec![2.0, 2.0, 3.0, 3.0, 3.0, 3.0, 5.0, 5.0, 5.0], 6.0)?;
    let lifted = split_degeneracies(&intact, 0.5)?;
    let mut fig = Figure::default();
    let mut spikes = Panel {
        xlabel: "energy",
        ylabel: "degeneracy",
        log: false,
        series: Vec::new(),
    };
    let mut steps = Panel {
        xlabel: "energy",
        ylabel: "N",
        log: false,
        series: Vec::new(),
    };
    for (tag, s) in [("intact", &intact), ("lifted", &lifted)] {
        let d = fig.add(format!("fig2_{tag}_degeneracy"), spikes_csv(s)?);
        let n = fig.add(format!("fig2_{tag}_staircase"), staircase_csv(s)?);
        spikes.series.push(series(&d, "energy", "degeneracy", Kind::Stem, tag));
        steps.series.push(series(&n, "energy", "N", Kind::Step, tag));
    }
    fig.panels.push(spikes);
    fig.panels.push(steps);
    Ok(fig)
}

/// Degeneracy spikes, staircase and windowed DOS against the Weyl law.
fn histograms(name: &str, geometry: BoxGeometry, e_max: f64, window: f64) -> CliResult<Figure> {
    let s = geometry.enumerate(e_max)?;
    let dim = geometry.dimension() as u32;
    let dos = dos_window(&s, window, &overlapping_centers(0.5 * window, e_max - 0.5 * window, window))?;
    let mut buf = Vec::new();
    write_dos(&mut buf, &dos)?;
    let mut fig = Figure::default();
    let d = fig.add(format!("{name}_degeneracy"), spikes_csv(&s)?);
    let n = fig.add(format!("{name}_staircase"), staircase_csv(&s)?);
    let g = fig.add(format!("{name}_dos"), String::from_utf8(buf).expect("ascii"));
    let t = fig.add(format!("{name}_theory"), weyl_csv(dim, e_max)?);
    fig.panels.push(Panel {
        xlabel: "energy",
        ylabel: "degeneracy",
        log: false,
        series: vec![series(&d, "energy", "degeneracy", Kind::Stem, "counted")],
    });
    fig.panels.push(Panel {
        xlabel: "energy",
        ylabel: "N",
        log: false,
        series: vec![
            series(&n, "energy", "N", Kind::Step, "counted"),
            series(&t, "energy", "N", Kind::Line, "theory"),
        ],
    });
    fig.panels.push(Panel {
        xlabel: "energy",
        ylabel: "g",
        log: false,
        series: vec![
            series(&g, "center", "g", Kind::Line, &format!("window {window}")),
            series(&t, "energy", "g", Kind::Line, "theory"),
        ],
    });
    Ok(fig)
}

fn single_particle_fits() -> CliResult<String> {
    let rows = single_particle_boxes()?
        .into_iter()
        .map(|(label, s)| (label, 1, fit_spectrum(&s, &FitOptions::default()).ok()))
        .collect::<Vec<_>>();
    Ok(report(&rows))
}

/// Staircases of the unit-volume cube, rectangle and sphere; fig7 adds
/// 40-wide histograms, fig8 the log-log fits.
fn three_boxes(histogram: bool) -> CliResult<Figure> {
    let tag = if histogram { "fig7" } else { "fig8" };
    let boxes = single_particle_boxes()?;
    let mut fig = Figure::default();
    let mut stairs = Panel {
        xlabel: "energy",
        ylabel: "N",
        log: !histogram,
        series: Vec::new(),
    };
    for (label, s) in &boxes {
        let file = fig.add(format!("{tag}_{label}"), staircase_csv(&s.truncated(BOX_E_MAX))?);
        stairs.series.push(series(&file, "energy", "N", Kind::Step, label));
    }
    let theory = fig.add(format!("{tag}_theory"), weyl_csv(3, BOX_E_MAX)?);
    stairs.series.push(series(&theory, "energy", "N", Kind::Line, "theory"));
    fig.panels.push(stairs);
    if histogram {
        const WIDTH: f64 = 40.0;
        let bins = (BOX_E_MAX / WIDTH).floor() as usize;
        let mut counts = vec![[0u64; 3]; bins];
        for (j, (_, s)) in boxes.iter().enumerate() {
            for level in s.levels() {
                let k = (level.energy / WIDTH).floor() as usize;
                if k < bins {
                    counts[k][j] += level.degeneracy;
                }
            }
        }
        let mut text = String::from("bin_start,bin_end,cube,rectangle,sphere\n");
        for (k, c) in counts.iter().enumerate() {
            let lo = k as f64 * WIDTH;
            let _ = writeln!(text, "{},{},{},{},{}", fmt(lo), fmt(lo + WIDTH), c[0], c[1], c[2]);
        }
        let file = fig.add("fig7_histogram".into(), text);
        fig.panels.push(Panel {
            xlabel: "energy",
            ylabel: "states per bin",
            log: false,
            series: ["cube", "rectangle", "sphere"]
                .iter()
                .map(|&l| series(&file, "bin_start", l, Kind::Step, l))
                .collect(),
        });
    } else {
        fig.add("fig8_fits".into(), single_particle_fits()?);
    }
    Ok(fig)
}

fn weyl_table() -> CliResult<Figure> {
    let mut text = String::from("D,N_coefficient,g_coefficient,beta\n");
    for d in 1..=6 {
        let (alpha, beta) = weyl_power_law(d)?;
        let _ = writeln!(text, "{d},{},{},{}", fmt(alpha), fmt(weyl_dos(d, 1.0)?), fmt(beta));
    }
    let mut fig = Figure::default();
    fig.add("table1".into(), text);
    Ok(fig)
}

fn boson_table() -> CliResult<Figure> {
    let mut text = String::from("b,N,coefficient,exponent,alpha,beta\n");
    for b in [-0.5, 0.0, 0.5, 1.0] {
        for n in 1..=8 {
            let c = nboson_closed_form(1.0, b, n)?;
            let _ = writeln!(
                text,
                "{},{n},{},{},{},{}",
                fmt(b),
                fmt(c.coefficient),
                fmt(c.exponent),
                fmt(c.alpha),
                fmt(c.beta)
            );
        }
    }
    let mut fig = Figure::default();
    fig.add("table3".into(), text);
    Ok(fig)
}

fn stub(name: &str, panels: &[Panel], format: Format) -> String {
    let ext = extension(format);
    let sep = match format {
        Format::Csv => ",",
        Format::Tsv => "\\t",
    };
    let mut out = format!(
        "# Plot stub for `boxdos reproduce {name}`; reads the data files next to it.\n\
         import csv\n\
         import pathlib\n\n\
         import matplotlib.pyplot as plt\n\n\
         HERE = pathlib.Path(__file__).parent\n\n\n\
         def load(name):\n    \
             with open(HERE / f\"{{name}}.{ext}\", newline=\"\") as f:\n        \
                 rows = list(csv.DictReader(f, delimiter=\"{sep}\"))\n    \
             return {{k: [float(r[k]) for r in rows] for k in (rows[0] if rows else {{}})}}\n\n\n\
         PANELS = [\n"
    );
    for p in panels {
        let _ = writeln!(
            out,
            "    {{\"xlabel\": \"{}\", \"ylabel\": \"{}\", \"log\": {}, \"series\": [",
            p.xlabel,
            p.ylabel,
            if p.log { "True" } else { "False" }
        );
        for s in &p.series {
            let kind = match s.kind {
                Kind::Stem => "stem",
                Kind::Step => "step",
                Kind::Line => "line",
                Kind::Points => "points",
                Kind::ErrorBar => "errorbar",
            };
            let _ = writeln!(
                out,
                "        (\"{}\", \"{}\", \"{}\", \"{kind}\", \"{}\"),",
                s.file, s.x, s.y, s.label
            );
        }
        out.push_str("    ]},\n");
    }
    out.push_str(
        "]\n\n\
         fig, axes = plt.subplots(len(PANELS), 1, figsize=(6, 3 * len(PANELS)), squeeze=False)\n\
         for ax, panel in zip(axes[:, 0], PANELS):\n    \
             for file, x, y, kind, label in panel[\"series\"]:\n        \
                 data = load(file)\n        \
                 if kind == \"stem\":\n            \
                     ax.vlines(data[x], 0, data[y], label=label)\n        \
                 elif kind == \"step\":\n            \
                     ax.step(data[x], data[y], where=\"post\", label=label)\n        \
                 elif kind == \"points\":\n            \
                     ax.plot(data[x], data[y], \"o\", label=label)\n        \
                 elif kind == \"errorbar\":\n            \
                     ax.errorbar(data[x], data[y], yerr=data[y + \"_std\"], fmt=\"s\", label=label)\n        \
                 else:\n            \
                     ax.plot(data[x], data[y], label=label)\n    \
             if panel[\"log\"]:\n        \
                 ax.set_xscale(\"log\")\n        \
                 ax.set_yscale(\"log\")\n    \
             ax.set_xlabel(panel[\"xlabel\"])\n    \
             ax.set_ylabel(panel[\"ylabel\"])\n    \
             ax.legend()\n\
         fig.tight_layout()\n",
    );
    let _ = writeln!(out, "fig.savefig(HERE / \"{name}.png\")");
    out
}
