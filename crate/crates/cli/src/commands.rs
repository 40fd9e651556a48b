use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use fluxswap::{detuning_scan, figure, sweep, SweepSeries};

use crate::config::{OutputFlags, OutputFormat, RunConfig, ScenarioFlags};
use crate::output::{encode, write_atomic};
use crate::plot::{gnuplot_script, PlotCurve};
use crate::NumericalFailure;

fn summary(series: &SweepSeries) -> String {
    let defined = series
        .points
        .iter()
        .filter(|p| p.concurrence.is_some())
        .count();
    let cmax = series
        .max_concurrence()
        .map_or_else(|| "undefined".to_string(), |c| format!("{c:.6}"));
    format!(
        "{} points, {defined} defined, max concurrence {cmax}",
        series.len()
    )
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn write_plot_script(dir: &Path, stem: &str, title: &str, curves: &[PlotCurve]) -> Result<PathBuf> {
    let path = dir.join(format!("{stem}.gp"));
    write_atomic(&path, gnuplot_script(title, stem, curves).as_bytes())?;
    Ok(path)
}

fn require_csv_for_plot(cfg: &RunConfig) -> Result<()> {
    if cfg.plot_script && cfg.format != OutputFormat::Csv {
        bail!("plot scripts read CSV data; use --format csv with --plot-script");
    }
    Ok(())
}

pub fn run(flags: &ScenarioFlags, out: &OutputFlags) -> Result<()> {
    let cfg = RunConfig::resolve(flags, out, &[])?;
    require_csv_for_plot(&cfg)?;
    let series = sweep(&cfg.scenario)?;
    let path = cfg.output.clone().unwrap_or_else(|| {
        PathBuf::from(format!("{}.{}", cfg.scenario.label, cfg.format.extension()))
    });
    write_atomic(&path, &encode(&series, cfg.format)?)?;
    println!("wrote {} ({})", path.display(), summary(&series));

    if cfg.plot_script {
        let stem = path
            .file_stem()
            .map_or_else(|| "series".into(), |s| s.to_string_lossy().into_owned());
        let dir = path.parent().unwrap_or(Path::new(""));
        let curve = PlotCurve {
            file: file_name(&path),
            title: cfg.scenario.label.to_string(),
        };
        let script = write_plot_script(
            dir,
            &stem,
            &format!("{} concurrence", cfg.scenario.label),
            &[curve],
        )?;
        println!("wrote {}", script.display());
    }
    Ok(())
}

pub fn scan(flags: &ScenarioFlags, out: &OutputFlags, omega2: &[f64]) -> Result<()> {
    let cfg = RunConfig::resolve(flags, out, omega2)?;
    require_csv_for_plot(&cfg)?;
    if cfg.detunings.is_empty() {
        bail!("no detuning values given (use --omega2-list or [detuning] omega2)");
    }
    let all = detuning_scan(&cfg.scenario, &cfg.detunings)?;
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("."));
    let label = cfg.scenario.label;
    let mut curves = Vec::new();
    for (w, series) in cfg.detunings.iter().zip(&all) {
        let path = dir.join(format!("{label}_w2_{w}.{}", cfg.format.extension()));
        write_atomic(&path, &encode(series, cfg.format)?)?;
        println!("wrote {} ({})", path.display(), summary(series));
        curves.push(PlotCurve {
            file: file_name(&path),
            title: format!("w2 = {w}"),
        });
    }
    if cfg.plot_script {
        let script = write_plot_script(
            &dir,
            &format!("{label}_scan"),
            &format!("{label} detuning scan"),
            &curves,
        )?;
        println!("wrote {}", script.display());
    }
    Ok(())
}

pub fn figures(id: u8, dir: &Path) -> Result<()> {
    let fig = figure(id)?;
    let mut curves = Vec::new();
    for curve in &fig.curves {
        let series = sweep(&curve.scenario)?;
        let path = dir.join(format!("fig{id}_{}.csv", curve.name));
        write_atomic(&path, &encode(&series, OutputFormat::Csv)?)?;
        println!("wrote {} ({})", path.display(), summary(&series));
        curves.push(PlotCurve {
            file: file_name(&path),
            title: format!(
                "{}: {} {}",
                curve.name, curve.scenario.label, curve.scenario.params1.model
            ),
        });
    }
    let script = write_plot_script(dir, &format!("fig{id}"), &fig.title, &curves)?;
    println!("wrote {}", script.display());
    Ok(())
}

pub fn check_truncation(flags: &ScenarioFlags, t_max: Option<f64>, factor: usize) -> Result<()> {
    let cfg = RunConfig::resolve(flags, &OutputFlags::default(), &[])?;
    let t_max = t_max.unwrap_or(cfg.scenario.grid.stop);
    let reports = cfg.scenario.truncation_reports(t_max, factor)?;
    let mut failed = false;
    for (k, r) in reports.iter().enumerate() {
        println!(
            "subsystem {}: n_fock {} vs reference {}, max leakage {:.3e}, min fidelity {:.9}, {}",
            k + 1,
            r.n_fock,
            r.reference_n_fock,
            r.max_leakage,
            r.min_fidelity,
            if r.passed { "PASS" } else { "FAIL" }
        );
        failed |= !r.passed;
    }
    let worst = reports.iter().map(|r| r.max_leakage).fold(0.0, f64::max);
    println!("max leakage {worst:.3e} (threshold 0.01 over t' <= {t_max})");
    if failed {
        return Err(NumericalFailure(format!(
            "truncation check failed: leakage {worst:.3e} exceeds 0.01"
        ))
        .into());
    }
    println!("PASS");
    Ok(())
}
