//! SVG figures from a result directory.

use std::fs;
use std::ops::Range;
use std::path::Path;

use plotters::coord::Shift;
use plotters::prelude::*;

use crate::error::CliError;
use crate::output::{read_table, Manifest, PlotScale};

const SIZE: (u32, u32) = (900, 640);

fn draw_err(path: &Path, e: impl std::fmt::Debug) -> CliError {
    CliError::Usage(format!("{}: plotting failed: {e:?}", path.display()))
}

fn column(
    header: &[String],
    rows: &[Vec<f64>],
    name: &str,
    path: &Path,
) -> Result<Vec<f64>, CliError> {
    let j = header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::Usage(format!("{}: missing column `{name}`", path.display())))?;
    rows.iter()
        .map(|r| {
            r.get(j)
                .copied()
                .ok_or_else(|| CliError::Usage(format!("{}: short row", path.display())))
        })
        .collect()
}

fn span(values: impl Iterator<Item = f64>) -> Range<f64> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    if !lo.is_finite() {
        return 0.0..1.0;
    }
    if hi - lo < 1e-300 {
        let pad = lo.abs().max(1.0) * 0.05;
        return lo - pad..hi + pad;
    }
    let pad = 0.05 * (hi - lo);
    lo - pad..hi + pad
}

struct Profile {
    x: Vec<f64>,
    potential: Vec<f64>,
}

fn read_profile(path: &Path) -> Result<Profile, CliError> {
    let (h, rows) = read_table(path)?;
    Ok(Profile {
        x: column(&h, &rows, "x_nm", path)?,
        potential: column(&h, &rows, "potential_eV", path)?,
    })
}

struct Mode {
    psi_sq: Vec<f64>,
    dpsi: Vec<f64>,
}

fn read_mode(path: &Path) -> Result<Mode, CliError> {
    let (h, rows) = read_table(path)?;
    Ok(Mode {
        psi_sq: column(&h, &rows, "psi_sq", path)?,
        dpsi: column(&h, &rows, "dpsi_dx", path)?,
    })
}

fn mode_plot(path: &Path, title: &str, profile: &Profile, mode: &Mode) -> Result<(), CliError> {
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| draw_err(path, e))?;
    let areas = root.split_evenly((2, 1));
    let x_range = span(profile.x.iter().copied());

    let peak = mode.psi_sq.iter().cloned().fold(0.0, f64::max).max(1e-300);
    let v_range = span(profile.potential.iter().copied());
    let v_scaled: Vec<f64> = profile
        .potential
        .iter()
        .map(|v| (v - v_range.start) / (v_range.end - v_range.start) * peak)
        .collect();
    let mut top = ChartBuilder::on(&areas[0])
        .caption(title, ("sans-serif", 20))
        .margin(10)
        .x_label_area_size(30)
        .y_label_area_size(60)
        .build_cartesian_2d(x_range.clone(), 0.0..peak * 1.05)
        .map_err(|e| draw_err(path, e))?;
    top.configure_mesh()
        .y_desc("|psi|^2 (1/nm)")
        .draw()
        .map_err(|e| draw_err(path, e))?;
    top.draw_series(LineSeries::new(
        profile.x.iter().copied().zip(v_scaled),
        RGBColor(150, 150, 150),
    ))
    .map_err(|e| draw_err(path, e))?
    .label("V (rescaled)")
    .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], RGBColor(150, 150, 150)));
    top.draw_series(LineSeries::new(
        profile.x.iter().copied().zip(mode.psi_sq.iter().copied()),
        BLUE,
    ))
    .map_err(|e| draw_err(path, e))?
    .label("|psi|^2")
    .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], BLUE));
    top.configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| draw_err(path, e))?;

    let mut bottom = ChartBuilder::on(&areas[1])
        .margin(10)
        .x_label_area_size(30)
        .y_label_area_size(60)
        .build_cartesian_2d(x_range, span(mode.dpsi.iter().copied()))
        .map_err(|e| draw_err(path, e))?;
    bottom
        .configure_mesh()
        .x_desc("x (nm)")
        .y_desc("dpsi/dx")
        .draw()
        .map_err(|e| draw_err(path, e))?;
    bottom
        .draw_series(LineSeries::new(
            profile.x.iter().copied().zip(mode.dpsi.iter().copied()),
            RED,
        ))
        .map_err(|e| draw_err(path, e))?;
    root.present().map_err(|e| draw_err(path, e))
}

/// Potential with each |ψ|² scaled by `factor` and offset by its energy.
fn levels_plot(
    path: &Path,
    title: &str,
    profile: &Profile,
    energies: &[f64],
    modes: &[Mode],
    factor: f64,
) -> Result<(), CliError> {
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| draw_err(path, e))?;
    let gap = typical_gap(energies);
    let v_min = profile
        .potential
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let e_max = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let y_lo = v_min.min(energies.first().copied().unwrap_or(v_min)) - 0.05 * gap;
    let y_hi = e_max + 1.5 * gap;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(10)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d(span(profile.x.iter().copied()), y_lo..y_hi)
        .map_err(|e| draw_err(path, e))?;
    chart
        .configure_mesh()
        .x_desc("x (nm)")
        .y_desc("energy (eV)")
        .draw()
        .map_err(|e| draw_err(path, e))?;
    chart
        .draw_series(LineSeries::new(
            profile
                .x
                .iter()
                .copied()
                .zip(profile.potential.iter().map(|v| v.min(y_hi))),
            BLACK,
        ))
        .map_err(|e| draw_err(path, e))?;
    for (i, (e, m)) in energies.iter().zip(modes).enumerate() {
        let color = Palette99::pick(i).to_rgba();
        chart
            .draw_series(LineSeries::new(
                profile
                    .x
                    .iter()
                    .copied()
                    .zip(m.psi_sq.iter().map(|p| e + factor * p)),
                color,
            ))
            .map_err(|e| draw_err(path, e))?;
    }
    root.present().map_err(|e| draw_err(path, e))
}

fn typical_gap(energies: &[f64]) -> f64 {
    let min = energies
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .filter(|d| *d > 0.0)
        .fold(f64::INFINITY, f64::min);
    if min.is_finite() {
        min
    } else {
        energies.first().map_or(1.0, |e| e.abs().max(1e-3) * 0.1)
    }
}

fn energy_plot(path: &Path, series: &[(String, Vec<f64>)]) -> Result<(), CliError> {
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| draw_err(path, e))?;
    let n = series.iter().map(|(_, e)| e.len()).max().unwrap_or(1);
    let mut chart = ChartBuilder::on(&root)
        .caption("Energies per mode", ("sans-serif", 20))
        .margin(10)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d(
            0.5..n as f64 + 0.5,
            span(series.iter().flat_map(|(_, e)| e.iter().copied())),
        )
        .map_err(|e| draw_err(path, e))?;
    chart
        .configure_mesh()
        .x_desc("mode index")
        .y_desc("energy (eV)")
        .draw()
        .map_err(|e| draw_err(path, e))?;
    for (i, (label, e)) in series.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        chart
            .draw_series(
                e.iter()
                    .enumerate()
                    .map(|(k, v)| Circle::new(((k + 1) as f64, *v), 4, color.filled())),
            )
            .map_err(|e| draw_err(path, e))?
            .label(label.as_str())
            .legend(move |(x, y)| Circle::new((x + 10, y), 4, color.filled()));
    }
    chart
        .configure_series_labels()
        .position(SeriesLabelPosition::UpperLeft)
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| draw_err(path, e))?;
    root.present().map_err(|e| draw_err(path, e))
}

fn sweep_chart<DB: DrawingBackend>(
    area: &DrawingArea<DB, Shift>,
    path: &Path,
    parameter: &str,
    xs: &[f64],
    columns: &[Vec<f64>],
) -> Result<(), CliError>
where
    DB::ErrorType: 'static,
{
    let y = span(columns.iter().flat_map(|c| c.iter().copied()));
    let positive = xs.iter().all(|&v| v > 0.0);
    let x = span(xs.iter().copied());
    if positive && parameter != "alpha" {
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min) * 0.9;
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) * 1.1;
        let mut chart = ChartBuilder::on(area)
            .caption(format!("Energies against {parameter}"), ("sans-serif", 20))
            .margin(10)
            .x_label_area_size(40)
            .y_label_area_size(70)
            .build_cartesian_2d((lo..hi).log_scale(), y)
            .map_err(|e| draw_err(path, e))?;
        chart
            .configure_mesh()
            .x_desc(parameter)
            .y_desc("energy (eV)")
            .draw()
            .map_err(|e| draw_err(path, e))?;
        for (i, c) in columns.iter().enumerate() {
            let color = Palette99::pick(i).to_rgba();
            let pts: Vec<(f64, f64)> = xs.iter().copied().zip(c.iter().copied()).collect();
            chart
                .draw_series(LineSeries::new(pts.clone(), color))
                .map_err(|e| draw_err(path, e))?;
            chart
                .draw_series(pts.into_iter().map(|p| Circle::new(p, 3, color.filled())))
                .map_err(|e| draw_err(path, e))?;
        }
    } else {
        let mut chart = ChartBuilder::on(area)
            .caption(format!("Energies against {parameter}"), ("sans-serif", 20))
            .margin(10)
            .x_label_area_size(40)
            .y_label_area_size(70)
            .build_cartesian_2d(x, y)
            .map_err(|e| draw_err(path, e))?;
        chart
            .configure_mesh()
            .x_desc(parameter)
            .y_desc("energy (eV)")
            .draw()
            .map_err(|e| draw_err(path, e))?;
        for (i, c) in columns.iter().enumerate() {
            let color = Palette99::pick(i).to_rgba();
            let pts: Vec<(f64, f64)> = xs.iter().copied().zip(c.iter().copied()).collect();
            chart
                .draw_series(LineSeries::new(pts.clone(), color))
                .map_err(|e| draw_err(path, e))?;
            chart
                .draw_series(pts.into_iter().map(|p| Circle::new(p, 3, color.filled())))
                .map_err(|e| draw_err(path, e))?;
        }
    }
    Ok(())
}

fn sweep_plot(path: &Path, table: &Path) -> Result<(), CliError> {
    let (header, rows) = read_table(table)?;
    if rows.is_empty() || header.len() < 2 {
        return Err(CliError::Usage(format!(
            "{}: no sweep rows",
            table.display()
        )));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let columns: Vec<Vec<f64>> = (1..header.len().min(11))
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| draw_err(path, e))?;
    sweep_chart(&root, path, &header[0], &xs, &columns)?;
    root.present().map_err(|e| draw_err(path, e))
}

/// Renders every figure for `dir` and records them in its manifest.
/// Returns the paths written, relative to `dir`.
pub fn plot_dir(dir: &Path) -> Result<Vec<String>, CliError> {
    let mut manifest = Manifest::read(dir)?;
    let plots = dir.join("plots");
    fs::create_dir_all(&plots).map_err(|e| CliError::io(&plots, e))?;
    let mut written = Vec::new();

    match manifest.command.as_str() {
        "sweep" => {
            let rel = "plots/sweep.svg".to_string();
            sweep_plot(&dir.join(&rel), &dir.join("sweep.csv"))?;
            written.push(rel);
        }
        "solve" | "validate" => {
            if manifest.variants.is_empty() {
                return Err(CliError::Usage(format!(
                    "{}: manifest lists no variants",
                    dir.display()
                )));
            }
            let scale = manifest.config.output.plot_scale;
            let mut series = Vec::new();
            let mut scales = Vec::new();
            for v in &manifest.variants {
                let vdir = dir.join(&v.dir);
                let profile = read_profile(&vdir.join("potential.csv"))?;
                let energy_path = vdir.join("energies.csv");
                let (h, rows) = read_table(&energy_path)?;
                let energies = column(&h, &rows, "energy_eV", &energy_path)?;
                if energies.len() != v.n_modes {
                    return Err(CliError::Usage(format!(
                        "{}: expected {} modes, found {}",
                        energy_path.display(),
                        v.n_modes,
                        energies.len()
                    )));
                }
                series.push((v.label.clone(), energies.clone()));
                if !v.wavefunctions {
                    continue;
                }
                let out = plots.join(&v.dir);
                fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
                let mut modes = Vec::with_capacity(v.n_modes);
                for k in 1..=v.n_modes {
                    let mode = read_mode(&vdir.join(format!("wavefunction_{k}.csv")))?;
                    if mode.psi_sq.len() != profile.x.len() {
                        return Err(CliError::Usage(format!(
                            "{}: wavefunction {k} length does not match the potential",
                            vdir.display()
                        )));
                    }
                    let rel = format!("plots/{}/mode_{k}.svg", v.dir);
                    let title = format!("{} mode {k}, E = {:.6} eV", v.label, energies[k - 1]);
                    mode_plot(&dir.join(&rel), &title, &profile, &mode)?;
                    written.push(rel);
                    modes.push(mode);
                }
                let peak = modes
                    .iter()
                    .flat_map(|m| m.psi_sq.iter().copied())
                    .fold(0.0, f64::max)
                    .max(1e-300);
                let factor = scale * typical_gap(&energies) / peak;
                let rel = format!("plots/{}/levels.svg", v.dir);
                levels_plot(
                    &dir.join(&rel),
                    &format!("{}: |psi|^2 offset by energy", v.label),
                    &profile,
                    &energies,
                    &modes,
                    factor,
                )?;
                written.push(rel);
                scales.push(PlotScale {
                    label: v.label.clone(),
                    factor,
                });
            }
            let rel = "plots/energies.svg".to_string();
            energy_plot(&dir.join(&rel), &series)?;
            written.push(rel);
            manifest.plot_scales = scales;
        }
        other => {
            return Err(CliError::Usage(format!(
                "{}: cannot plot output of `{other}`",
                dir.display()
            )))
        }
    }
    for rel in &written {
        manifest.add_file(rel.clone(), "plot");
    }
    manifest.write(dir)?;
    Ok(written)
}
