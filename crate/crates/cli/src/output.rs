//! On-disk artifacts: CSV tables and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use numerov_core::eigensolve::Eigenpair;
use numerov_core::{ComparisonTable, Grid, ScenarioConfig, ScenarioResult, SweepResult};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Twelve significant digits.
pub fn fmt12(v: f64) -> String {
    format!("{v:.11e}")
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>, CliError> {
    csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::io(path, e))
}

fn row<I, S>(w: &mut csv::Writer<fs::File>, path: &Path, fields: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    w.write_record(fields).map_err(|e| CliError::io(path, e))
}

pub fn write_energies(path: &Path, energies: &[f64]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    row(&mut w, path, ["mode_index_1based", "energy_eV"])?;
    for (i, e) in energies.iter().enumerate() {
        row(&mut w, path, [(i + 1).to_string(), fmt12(*e)])?;
    }
    finish(w, path)
}

pub fn write_wavefunction(path: &Path, grid: &Grid, pair: &Eigenpair) -> Result<(), CliError> {
    let mut w = writer(path)?;
    row(&mut w, path, ["x_nm", "psi", "psi_sq", "dpsi_dx"])?;
    for (k, (psi, d)) in pair.psi.iter().zip(&pair.dpsi_dx).enumerate() {
        row(
            &mut w,
            path,
            [fmt12(grid.x(k)), fmt12(*psi), fmt12(psi * psi), fmt12(*d)],
        )?;
    }
    finish(w, path)
}

pub fn write_potential(
    path: &Path,
    grid: &Grid,
    potential: &[f64],
    m_rel: &[f64],
) -> Result<(), CliError> {
    let mut w = writer(path)?;
    row(&mut w, path, ["x_nm", "potential_eV", "m_rel"])?;
    for (k, (v, m)) in potential.iter().zip(m_rel).enumerate() {
        row(&mut w, path, [fmt12(grid.x(k)), fmt12(*v), fmt12(*m)])?;
    }
    finish(w, path)
}

pub fn write_comparison(path: &Path, table: &ComparisonTable) -> Result<(), CliError> {
    let mut w = writer(path)?;
    let mut header = vec!["mode_index_1based".to_string()];
    header.extend(table.labels.iter().map(|l| format!("{l}_eV")));
    header.extend(table.labels.iter().map(|l| format!("{l}_spacing_eV")));
    row(&mut w, path, &header)?;
    for (i, energies) in table.energies.iter().enumerate() {
        let mut r = vec![(i + 1).to_string()];
        r.extend(energies.iter().map(|e| fmt12(*e)));
        match table.spacings.get(i) {
            Some(s) => r.extend(s.iter().map(|d| fmt12(*d))),
            None => r.extend(table.labels.iter().map(|_| String::new())),
        }
        row(&mut w, path, &r)?;
    }
    finish(w, path)
}

pub fn write_sweep(path: &Path, sweep: &SweepResult) -> Result<(), CliError> {
    let mut w = writer(path)?;
    let n = sweep.rows.first().map_or(0, |r| r.energies.len());
    let mut header = vec![sweep.parameter.name().to_string()];
    header.extend((1..=n).map(|k| format!("E_{k}_eV")));
    row(&mut w, path, &header)?;
    for r in &sweep.rows {
        let mut fields = vec![fmt12(r.value)];
        fields.extend(r.energies.iter().map(|e| fmt12(*e)));
        row(&mut w, path, &fields)?;
    }
    finish(w, path)
}

pub fn write_sweep_summary(path: &Path, sweep: &SweepResult) -> Result<(), CliError> {
    let mut w = writer(path)?;
    row(
        &mut w,
        path,
        ["mode_index_1based", "observed_order", "limit_eV"],
    )?;
    let opt = |v: Option<f64>| v.map(fmt12).unwrap_or_default();
    for (i, (p, l)) in sweep.observed_order.iter().zip(&sweep.limit).enumerate() {
        row(&mut w, path, [(i + 1).to_string(), opt(*p), opt(*l)])?;
    }
    finish(w, path)
}

/// Reads a CSV written by this module into a header and numeric rows.
/// Empty cells become NaN.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
    let header = r
        .headers()
        .map_err(|e| CliError::io(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::io(path, e))?;
        let values = rec
            .iter()
            .map(|f| {
                if f.is_empty() {
                    Ok(f64::NAN)
                } else {
                    f.parse::<f64>().map_err(|_| {
                        CliError::Usage(format!(
                            "{}: row {} has non-numeric field `{f}`",
                            path.display(),
                            line + 2
                        ))
                    })
                }
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(values);
    }
    Ok((header, rows))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantEntry {
    pub label: String,
    pub dir: String,
    pub n_modes: usize,
    pub wavefunctions: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub x_min_nm: f64,
    pub x_max_nm: f64,
    pub n_points: usize,
    pub dx_nm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub solve_s: f64,
    pub write_s: f64,
}

/// Per-variant plot scale: |ψ|² is multiplied by `factor` before being
/// offset by its energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotScale {
    pub label: String,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub scenario: String,
    pub preset: Option<String>,
    pub grid: GridEntry,
    #[serde(default)]
    pub variants: Vec<VariantEntry>,
    pub timings: Timings,
    #[serde(default)]
    pub plot_scales: Vec<PlotScale>,
    #[serde(default)]
    pub files: Vec<FileEntry>,
    pub config: ScenarioConfig,
}

pub const MANIFEST: &str = "manifest.toml";

impl Manifest {
    pub fn new(command: &str, config: &ScenarioConfig, preset: Option<&str>, grid: &Grid) -> Self {
        Self {
            tool: "numerov".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            scenario: config.name.clone(),
            preset: preset.map(str::to_string),
            grid: GridEntry {
                x_min_nm: grid.x_min(),
                x_max_nm: grid.x_max(),
                n_points: grid.n_points(),
                dx_nm: grid.dx(),
            },
            variants: Vec::new(),
            timings: Timings {
                solve_s: 0.0,
                write_s: 0.0,
            },
            plot_scales: Vec::new(),
            files: Vec::new(),
            config: config.clone(),
        }
    }

    /// Records an emitted file once, by path relative to the output root.
    pub fn add_file(&mut self, rel: impl Into<String>, kind: &str) {
        let path = rel.into();
        if !self.files.iter().any(|f| f.path == path) {
            self.files.push(FileEntry {
                path,
                kind: kind.into(),
            });
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(MANIFEST);
        let text = toml::to_string(self).map_err(|e| CliError::Usage(e.to_string()))?;
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn read(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST);
        if !path.is_file() {
            return Err(CliError::Usage(format!(
                "{} has no {MANIFEST}; point plot at a solve, validate or sweep output directory",
                dir.display()
            )));
        }
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Writes energies, wavefunctions and potential profiles of every variant,
/// plus the cross-variant comparison table.
pub fn write_scenario(
    dir: &Path,
    config: &ScenarioConfig,
    result: &ScenarioResult,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let grid = &result.grid;
    for v in &result.variants {
        let sub = dir.join(&v.spec.label);
        fs::create_dir_all(&sub).map_err(|e| CliError::io(&sub, e))?;
        let rel = |name: &str| format!("{}/{name}", v.spec.label);

        write_energies(&sub.join("energies.csv"), &v.spectrum.energies())?;
        manifest.add_file(rel("energies.csv"), "energies");
        write_potential(&sub.join("potential.csv"), grid, &v.potential, &v.m_rel)?;
        manifest.add_file(rel("potential.csv"), "potential");
        if config.output.wavefunctions {
            for p in &v.spectrum.pairs {
                let name = format!("wavefunction_{}.csv", p.mode_index + 1);
                write_wavefunction(&sub.join(&name), grid, p)?;
                manifest.add_file(rel(&name), "wavefunction");
            }
        }
        manifest.variants.push(VariantEntry {
            label: v.spec.label.clone(),
            dir: v.spec.label.clone(),
            n_modes: v.spectrum.len(),
            wavefunctions: config.output.wavefunctions,
        });
    }
    write_comparison(&dir.join("comparison.csv"), &result.table)?;
    manifest.add_file("comparison.csv", "comparison");
    Ok(())
}
