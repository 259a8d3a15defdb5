//! Named presets, multi-variant runs, energy comparison tables, parameter
//! sweeps and the pseudo-delta shape convergence study.

use serde::{Deserialize, Serialize};

use crate::assembly::{
    assemble_constant_mass, assemble_pdm, effective_potential, HamiltonianSystem,
};
use crate::config::{
    BarrierSpec, GridSpec, MassSpec, OutputSpec, ScenarioConfig, SolveSpec, SweepParameter,
    VariantMass, VariantSpec,
};
use crate::delta_analysis::{
    self, Parity, ValidationInput, ValidationReport, ValidationThresholds,
};
use crate::eigensolve::{solve, Spectrum};
use crate::error::{Error, Result};
use crate::potentials::{
    sample_mass, sample_potential, BasePotential, MassProfile, PotentialSpec, PseudoDelta,
    PseudoDeltaShape,
};
use crate::units::Grid;

/// Default barrier strength of the presets, eV·nm.
pub const DEFAULT_ALPHA: f64 = 0.7;

/// Harmonic angular frequency of the oscillator presets, s⁻¹.
pub const PRESET_OMEGA: f64 = 1e15;

pub const PRESET_NAMES: [&str; 6] = [
    "infinite_well_delta",
    "triple_barrier_well",
    "finite_well_delta",
    "harmonic_delta",
    "pdm_harmonic_poly",
    "pdm_harmonic_gauss",
];

fn barrier(center: f64) -> BarrierSpec {
    BarrierSpec {
        center_nm: center,
        alpha_ev_nm: DEFAULT_ALPHA,
        shape: PseudoDeltaShape::Rectangular,
        epsilon: None,
        width_over_dx: Some(crate::config::DEFAULT_WIDTH_OVER_DX),
    }
}

fn variant(label: &str, barriers: &[usize], mass: VariantMass) -> VariantSpec {
    VariantSpec {
        label: label.into(),
        barriers: barriers.to_vec(),
        mass,
    }
}

fn four_mass_variants() -> Vec<VariantSpec> {
    vec![
        variant("I", &[0], VariantMass::Profile),
        variant("II", &[], VariantMass::Profile),
        variant("III", &[0], VariantMass::Constant),
        variant("IV", &[], VariantMass::Constant),
    ]
}

#[allow(clippy::too_many_arguments)]
fn scenario(
    name: &str,
    description: &str,
    grid: (f64, f64, usize),
    potential: BasePotential,
    mass: MassProfile,
    barriers: Vec<BarrierSpec>,
    variants: Vec<VariantSpec>,
    n_modes: usize,
) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        description: Some(description.into()),
        grid: GridSpec {
            x_min_nm: grid.0,
            x_max_nm: grid.1,
            n_points: grid.2,
        },
        potential,
        mass: MassSpec {
            profile: mass,
            reference_m_rel: None,
        },
        barriers,
        variants,
        solve: SolveSpec {
            n_modes,
            pdm_r: crate::assembly::VANISHING_CORRECTION_RS.0,
            pdm_s: crate::assembly::VANISHING_CORRECTION_RS.1,
        },
        validate: ValidationThresholds::default(),
        sweep: None,
        output: OutputSpec::default(),
    }
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let harmonic = BasePotential::Harmonic {
        omega: PRESET_OMEGA,
        center: 0.0,
    };
    let config = match name {
        "infinite_well_delta" => scenario(
            name,
            "Infinite well of width 20 nm with a repulsive delta barrier at its centre",
            (-10.0, 10.0, 3001),
            BasePotential::InfiniteWell,
            MassProfile::constant(0.067),
            vec![barrier(0.0)],
            vec![
                variant("delta", &[0], VariantMass::Profile),
                variant("no_delta", &[], VariantMass::Profile),
            ],
            30,
        ),
        "triple_barrier_well" => scenario(
            name,
            "Infinite well of width 21 nm with three delta barriers",
            (0.0, 21.0, 2101),
            BasePotential::InfiniteWell,
            MassProfile::constant(0.067),
            vec![barrier(4.5), barrier(10.5), barrier(16.5)],
            vec![
                variant("I", &[0, 1, 2], VariantMass::Profile),
                variant("II", &[0, 2], VariantMass::Profile),
                variant("III", &[1], VariantMass::Profile),
                variant("IV", &[], VariantMass::Profile),
            ],
            25,
        ),
        "finite_well_delta" => scenario(
            name,
            "Finite square well with a delta barrier at its centre",
            (-30.0, 30.0, 3001),
            BasePotential::FiniteWell {
                depth: 4.8,
                half_width: 10.0,
                center: 0.0,
            },
            MassProfile::constant(0.067),
            vec![barrier(0.0)],
            vec![
                variant("delta", &[0], VariantMass::Profile),
                variant("no_delta", &[], VariantMass::Profile),
            ],
            19,
        ),
        "harmonic_delta" => scenario(
            name,
            "Harmonic oscillator with a delta barrier at its minimum",
            (-12.0, 12.0, 2401),
            harmonic,
            MassProfile::constant(0.067),
            vec![barrier(0.0)],
            vec![
                variant("delta", &[0], VariantMass::Profile),
                variant("no_delta", &[], VariantMass::Profile),
            ],
            24,
        ),
        "pdm_harmonic_poly" => scenario(
            name,
            "Harmonic oscillator with a quadratic position-dependent mass and a central delta barrier",
            (-12.0, 12.0, 2401),
            harmonic,
            MassProfile::Quadratic {
                a: 0.0665,
                b: 0.0835,
            },
            vec![barrier(0.0)],
            four_mass_variants(),
            11,
        ),
        "pdm_harmonic_gauss" => scenario(
            name,
            "Harmonic oscillator with a Gaussian position-dependent mass and a central delta barrier",
            (-12.0, 12.0, 2401),
            harmonic,
            MassProfile::GaussianBump {
                base: 1.0,
                amp: 0.67,
                width: 1.0,
            },
            vec![barrier(0.0)],
            four_mass_variants(),
            10,
        ),
        other => {
            return Err(Error::Config(format!(
                "unknown preset `{other}`; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(config)
}

/// One solved variant.
#[derive(Debug, Clone)]
pub struct VariantResult {
    pub spec: VariantSpec,
    pub barriers: Vec<PseudoDelta>,
    /// Potential V including barriers, before any mass correction (eV).
    pub potential: Vec<f64>,
    pub m_rel: Vec<f64>,
    pub spectrum: Spectrum,
    pub validation: Option<ValidationReport>,
}

impl VariantResult {
    pub fn label(&self) -> &str {
        &self.spec.label
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub name: String,
    pub grid: Grid,
    pub variants: Vec<VariantResult>,
    pub table: ComparisonTable,
}

impl ScenarioResult {
    pub fn variant(&self, label: &str) -> Option<&VariantResult> {
        self.variants.iter().find(|v| v.spec.label == label)
    }

    pub fn reports(&self) -> impl Iterator<Item = &ValidationReport> {
        self.variants.iter().filter_map(|v| v.validation.as_ref())
    }
}

/// The assembled but unsolved form of one variant.
pub struct PreparedVariant {
    pub spec: VariantSpec,
    pub barriers: Vec<PseudoDelta>,
    pub potential: Vec<f64>,
    pub m_rel: Vec<f64>,
    pub system: HamiltonianSystem,
}

/// Samples and assembles one variant of `config`.
pub fn prepare_variant(config: &ScenarioConfig, spec: &VariantSpec) -> Result<PreparedVariant> {
    let grid = config.grid.build()?;
    let barriers: Vec<PseudoDelta> = spec
        .barriers
        .iter()
        .map(|&i| {
            config
                .barriers
                .get(i)
                .map(|b| b.resolve(&grid))
                .ok_or_else(|| {
                    Error::Config(format!("variant `{}` refers to barrier {i}", spec.label))
                })
        })
        .collect::<Result<_>>()?;
    let reference = config.mass.reference();
    let profile = match spec.mass {
        VariantMass::Profile => config.mass.profile.clone(),
        VariantMass::Constant => MassProfile::constant(reference),
    };
    let potential_spec = PotentialSpec {
        base: config.potential,
        barriers: barriers.clone(),
    };
    let potential = sample_potential(&potential_spec, &grid, reference)?;
    let m_rel = sample_mass(&profile, &grid)?;
    let system = match profile {
        MassProfile::Constant { m_rel: m } => assemble_constant_mass(&grid, &potential, m)?,
        ref varying => {
            let v_eff = effective_potential(
                &potential,
                varying,
                &grid,
                config.solve.pdm_r,
                config.solve.pdm_s,
            )?;
            assemble_pdm(&grid, &v_eff, &m_rel)?
        }
    };
    Ok(PreparedVariant {
        spec: spec.clone(),
        barriers,
        potential,
        m_rel,
        system,
    })
}

fn centred_well_half_width(
    config: &ScenarioConfig,
    grid: &Grid,
    barriers: &[PseudoDelta],
) -> Option<f64> {
    match (config.potential, barriers) {
        (BasePotential::InfiniteWell, [b])
            if (b.center - grid.center()).abs() < 1e-9 * grid.length() =>
        {
            Some(0.5 * grid.length())
        }
        _ => None,
    }
}

/// Solves every variant, validates each barrier variant against the
/// barrier-free variant of the same mass, and tabulates the energies.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioResult> {
    config.check()?;
    let grid = config.grid.build()?;
    let variants = config.effective_variants();
    let n_modes = config.solve.n_modes;
    let spectral_terms = config.validate.spectral_terms.min(grid.n_interior());

    let mut solved: Vec<(PreparedVariant, Spectrum)> = Vec::with_capacity(variants.len());
    for spec in &variants {
        let prepared = prepare_variant(config, spec)?;
        // Barrier-free variants double as expansion bases, so they carry
        // enough modes for the spectral checks.
        let count = if spec.barriers.is_empty() {
            n_modes.max(spectral_terms)
        } else {
            n_modes
        };
        if n_modes > grid.n_interior() {
            return Err(Error::ModeCountTooLarge {
                requested: n_modes,
                available: grid.n_interior(),
            });
        }
        let spectrum = solve(&prepared.system, count)?;
        solved.push((prepared, spectrum));
    }

    let mut results = Vec::with_capacity(solved.len());
    for (prepared, full) in &solved {
        let validation = if prepared.barriers.is_empty() {
            None
        } else {
            let base = solved
                .iter()
                .find(|(p, _)| p.spec.barriers.is_empty() && p.spec.mass == prepared.spec.mass)
                .map(|(_, s)| s);
            Some(delta_analysis::validate(ValidationInput {
                label: &prepared.spec.label,
                spectrum: &truncate(full, n_modes),
                barriers: &prepared.barriers,
                m_rel: &prepared.m_rel,
                base,
                centred_well_half_width: centred_well_half_width(config, &grid, &prepared.barriers),
                thresholds: &config.validate,
            })?)
        };
        results.push(VariantResult {
            spec: prepared.spec.clone(),
            barriers: prepared.barriers.clone(),
            potential: prepared.potential.clone(),
            m_rel: prepared.m_rel.clone(),
            spectrum: truncate(full, n_modes),
            validation,
        });
    }

    let labelled: Vec<(&str, &Spectrum)> = results
        .iter()
        .map(|r| (r.spec.label.as_str(), &r.spectrum))
        .collect();
    let table = compare_energies(&labelled)?;
    Ok(ScenarioResult {
        name: config.name.clone(),
        grid,
        variants: results,
        table,
    })
}

fn truncate(s: &Spectrum, n: usize) -> Spectrum {
    Spectrum {
        pairs: s.pairs.iter().take(n).cloned().collect(),
        system_kind: s.system_kind,
        grid: s.grid,
    }
}

/// Energies per mode and label, with first differences per label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub labels: Vec<String>,
    /// `energies[mode][label]`, eV.
    pub energies: Vec<Vec<f64>>,
    /// `spacings[mode][label] = E[mode + 1] − E[mode]`.
    pub spacings: Vec<Vec<f64>>,
}

impl ComparisonTable {
    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let j = self.labels.iter().position(|l| l == label)?;
        Some(self.energies.iter().map(|row| row[j]).collect())
    }
}

pub fn compare_energies(spectra: &[(&str, &Spectrum)]) -> Result<ComparisonTable> {
    let n = spectra.first().map_or(0, |(_, s)| s.len());
    if let Some((label, s)) = spectra.iter().find(|(_, s)| s.len() != n) {
        return Err(Error::LengthMismatch(format!(
            "`{label}` has {} modes, `{}` has {n}",
            s.len(),
            spectra[0].0
        )));
    }
    let energies: Vec<Vec<f64>> = (0..n)
        .map(|i| spectra.iter().map(|(_, s)| s.pairs[i].energy).collect())
        .collect();
    let spacings = energies
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect())
        .collect();
    Ok(ComparisonTable {
        labels: spectra.iter().map(|(l, _)| l.to_string()).collect(),
        energies,
        spacings,
    })
}

/// Observed order `ln(|d₁|/|d₂|)/ln(ratio)` from three successive values
/// whose control parameter shrinks by `ratio` per step.
pub fn observed_order(values: [f64; 3], ratio: f64) -> Option<f64> {
    let d1 = (values[1] - values[0]).abs();
    let d2 = (values[2] - values[1]).abs();
    if d1 == 0.0 || d2 == 0.0 || !(ratio > 1.0) {
        return None;
    }
    Some((d1 / d2).ln() / ratio.ln())
}

/// Richardson limit of the last value given the observed order.
pub fn richardson_limit(values: [f64; 3], ratio: f64, order: f64) -> f64 {
    let factor = ratio.powf(order) - 1.0;
    values[2] + (values[2] - values[1]) / factor
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeConvergence {
    pub shape: PseudoDeltaShape,
    pub epsilons: Vec<f64>,
    /// `even_energies[level][j]`: j-th even mode at the level's ε.
    pub even_energies: Vec<Vec<f64>>,
    /// Per even mode, from the last three levels.
    pub observed_order: Vec<Option<f64>>,
    pub limit: Vec<Option<f64>>,
}

/// Re-solves `base`'s first barrier variant with the first barrier's shape
/// and ε replaced, recording the lowest `n_even` even-mode energies at each ε.
pub fn delta_shape_convergence(
    base: &ScenarioConfig,
    shape: PseudoDeltaShape,
    epsilons: &[f64],
    n_even: usize,
) -> Result<ShapeConvergence> {
    if base.barriers.is_empty() {
        return Err(Error::Config("shape convergence needs a barrier".into()));
    }
    let grid = base.grid.build()?;
    let spec = base
        .effective_variants()
        .into_iter()
        .find(|v| v.barriers.contains(&0))
        .ok_or_else(|| Error::Config("no variant uses barrier 0".into()))?;
    let center = base.barriers[0].center_nm;
    let n_modes = (2 * n_even + 2).min(grid.n_interior());

    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let mut config = base.clone();
        config.barriers[0].shape = shape;
        config.barriers[0].epsilon = Some(eps);
        let prepared = prepare_variant(&config, &spec)?;
        let s = solve(&prepared.system, n_modes)?;
        let mut even = Vec::with_capacity(n_even);
        for p in &s.pairs {
            if delta_analysis::parity(p, &grid, center)? == Parity::Even {
                even.push(p.energy);
            }
            if even.len() == n_even {
                break;
            }
        }
        if even.len() < n_even {
            return Err(Error::SolverFailure(format!(
                "found {} even modes below mode {n_modes}, wanted {n_even}",
                even.len()
            )));
        }
        rows.push(even);
    }
    let (observed_order, limit) = orders_and_limits(epsilons, &rows, n_even);
    Ok(ShapeConvergence {
        shape,
        epsilons: epsilons.to_vec(),
        even_energies: rows,
        observed_order,
        limit,
    })
}

/// Orders and Richardson limits per column from the last three rows.
fn orders_and_limits(
    controls: &[f64],
    rows: &[Vec<f64>],
    columns: usize,
) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
    let n = rows.len();
    if n < 3 {
        return (vec![None; columns], vec![None; columns]);
    }
    let ratio = controls[n - 2] / controls[n - 1];
    (0..columns)
        .map(|j| {
            let v = [rows[n - 3][j], rows[n - 2][j], rows[n - 1][j]];
            let order = observed_order(v, ratio);
            (order, order.map(|p| richardson_limit(v, ratio, p)))
        })
        .unzip()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub energies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub variant: String,
    pub rows: Vec<SweepRow>,
    /// Per mode, when the swept parameter is a resolution or width.
    pub observed_order: Vec<Option<f64>>,
    pub limit: Vec<Option<f64>>,
}

/// Runs the config's sweep block, one solve per value in the given order.
pub fn run_sweep(config: &ScenarioConfig) -> Result<SweepResult> {
    config.check()?;
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("missing required `sweep` block".into()))?;
    let variants = config.effective_variants();
    let spec = match &sweep.variant {
        Some(label) => variants
            .iter()
            .find(|v| &v.label == label)
            .ok_or_else(|| Error::Config(format!("sweep.variant `{label}` is not defined")))?,
        None => variants
            .iter()
            .find(|v| !v.barriers.is_empty())
            .unwrap_or(&variants[0]),
    }
    .clone();

    let mut rows = Vec::with_capacity(sweep.values.len());
    for &value in &sweep.values {
        let mut c = config.clone();
        match sweep.parameter {
            SweepParameter::Epsilon => c.barriers[sweep.barrier].epsilon = Some(value),
            SweepParameter::WidthOverDx => {
                c.barriers[sweep.barrier].epsilon = None;
                c.barriers[sweep.barrier].width_over_dx = Some(value);
            }
            SweepParameter::Alpha => c.barriers[sweep.barrier].alpha_ev_nm = value,
            SweepParameter::GridPoints => {
                if value.fract() != 0.0 || value < 3.0 {
                    return Err(Error::Config(format!(
                        "grid_points sweep value {value} is not an integer ≥ 3"
                    )));
                }
                c.grid.n_points = value as usize;
            }
        }
        let prepared = prepare_variant(&c, &spec)?;
        let s = solve(&prepared.system, config.solve.n_modes)?;
        rows.push(SweepRow {
            value,
            energies: s.energies(),
        });
    }

    let energies: Vec<Vec<f64>> = rows.iter().map(|r| r.energies.clone()).collect();
    let n_modes = config.solve.n_modes;
    let (observed_order, limit) = match sweep.parameter {
        SweepParameter::Alpha => (vec![None; n_modes], vec![None; n_modes]),
        SweepParameter::GridPoints => {
            let length = config.grid.x_max_nm - config.grid.x_min_nm;
            let dx: Vec<f64> = sweep.values.iter().map(|n| length / (n - 1.0)).collect();
            orders_and_limits(&dx, &energies, n_modes)
        }
        SweepParameter::Epsilon | SweepParameter::WidthOverDx => {
            orders_and_limits(&sweep.values, &energies, n_modes)
        }
    };
    Ok(SweepResult {
        parameter: sweep.parameter,
        variant: spec.label,
        rows,
        observed_order,
        limit,
    })
}
