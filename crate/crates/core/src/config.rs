//! Scenario configuration: one TOML file fully determines a run.

use serde::{Deserialize, Serialize};

use crate::delta_analysis::ValidationThresholds;
use crate::error::{Error, Result};
use crate::potentials::{BasePotential, MassProfile, PseudoDelta, PseudoDeltaShape};
use crate::units::Grid;

/// Barrier width in grid cells when neither `epsilon` nor `width_over_dx`
/// is given.
pub const DEFAULT_WIDTH_OVER_DX: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min_nm: f64,
    pub x_max_nm: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.x_min_nm, self.x_max_nm, self.n_points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassSpec {
    #[serde(flatten)]
    pub profile: MassProfile,
    /// Mass for constant-mass variants and the harmonic potential; defaults
    /// to the profile's own reference value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_m_rel: Option<f64>,
}

impl MassSpec {
    pub fn reference(&self) -> f64 {
        self.reference_m_rel
            .unwrap_or_else(|| self.profile.reference_m_rel())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarrierSpec {
    pub center_nm: f64,
    pub alpha_ev_nm: f64,
    #[serde(default)]
    pub shape: PseudoDeltaShape,
    /// Shape parameter ε (nm; nm² for the Gaussian). Overrides `width_over_dx`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Half-width at half-maximum in grid cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width_over_dx: Option<f64>,
}

impl BarrierSpec {
    pub fn resolve(&self, grid: &Grid) -> PseudoDelta {
        let epsilon = self.epsilon.unwrap_or_else(|| {
            let hwhm = self.width_over_dx.unwrap_or(DEFAULT_WIDTH_OVER_DX) * grid.dx();
            self.shape.epsilon_for_hwhm(hwhm)
        });
        PseudoDelta {
            center: self.center_nm,
            alpha: self.alpha_ev_nm,
            epsilon,
            shape: self.shape,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum VariantMass {
    /// The configured mass profile.
    #[default]
    Profile,
    /// Constant mass at the reference value.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantSpec {
    pub label: String,
    /// Indices into the barrier list.
    #[serde(default)]
    pub barriers: Vec<usize>,
    #[serde(default)]
    pub mass: VariantMass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSpec {
    pub n_modes: usize,
    /// Kinetic-ordering parameters for position-dependent mass.
    #[serde(default = "default_r")]
    pub pdm_r: f64,
    #[serde(default = "default_s")]
    pub pdm_s: f64,
}

fn default_r() -> f64 {
    crate::assembly::VANISHING_CORRECTION_RS.0
}

fn default_s() -> f64 {
    crate::assembly::VANISHING_CORRECTION_RS.1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Raw shape parameter ε of the swept barrier.
    Epsilon,
    WidthOverDx,
    Alpha,
    GridPoints,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Epsilon => "epsilon",
            SweepParameter::WidthOverDx => "width_over_dx",
            SweepParameter::Alpha => "alpha",
            SweepParameter::GridPoints => "grid_points",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    /// Barrier whose parameter is swept.
    #[serde(default)]
    pub barrier: usize,
    /// Variant to solve; defaults to the first variant with barriers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "yes")]
    pub wavefunctions: bool,
    /// Fraction of the smallest level spacing that a plotted |ψ|² peak spans.
    #[serde(default = "default_plot_scale")]
    pub plot_scale: f64,
}

fn yes() -> bool {
    true
}

fn default_plot_scale() -> f64 {
    0.8
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            wavefunctions: true,
            plot_scale: default_plot_scale(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub grid: GridSpec,
    pub potential: BasePotential,
    pub mass: MassSpec,
    #[serde(default)]
    pub barriers: Vec<BarrierSpec>,
    /// Defaults to the full barrier set plus the barrier-free problem.
    #[serde(default)]
    pub variants: Vec<VariantSpec>,
    pub solve: SolveSpec,
    #[serde(default)]
    pub validate: ValidationThresholds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

const REQUIRED_BLOCKS: [&str; 5] = ["name", "grid", "potential", "mass", "solve"];

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        for key in REQUIRED_BLOCKS {
            if !table.contains_key(key) {
                return Err(Error::Config(format!("missing required `{key}` block")));
            }
        }
        let config: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Variants to solve, with the default pair filled in.
    pub fn effective_variants(&self) -> Vec<VariantSpec> {
        if !self.variants.is_empty() {
            return self.variants.clone();
        }
        let mut out = Vec::new();
        if !self.barriers.is_empty() {
            out.push(VariantSpec {
                label: "delta".into(),
                barriers: (0..self.barriers.len()).collect(),
                mass: VariantMass::Profile,
            });
        }
        out.push(VariantSpec {
            label: "no_delta".into(),
            barriers: Vec::new(),
            mass: VariantMass::Profile,
        });
        out
    }

    /// Structural checks that do not need a solve.
    pub fn check(&self) -> Result<()> {
        let grid = self.grid.build()?;
        self.potential.validate()?;
        crate::potentials::sample_mass(&self.mass.profile, &grid)?;
        if let Some(m) = self.mass.reference_m_rel {
            if !(m > 0.0) {
                return Err(Error::Config(format!(
                    "mass.reference_m_rel must be positive, got {m}"
                )));
            }
        }
        for (i, b) in self.barriers.iter().enumerate() {
            if let Some(w) = b.width_over_dx {
                if !(w > 0.0) {
                    return Err(Error::Config(format!(
                        "barriers[{i}].width_over_dx must be positive, got {w}"
                    )));
                }
            }
        }
        let mut labels = std::collections::BTreeSet::new();
        for v in &self.variants {
            if !labels.insert(v.label.as_str()) {
                return Err(Error::Config(format!(
                    "duplicate variant label `{}`",
                    v.label
                )));
            }
            if let Some(&bad) = v.barriers.iter().find(|&&b| b >= self.barriers.len()) {
                return Err(Error::Config(format!(
                    "variant `{}` refers to barrier {bad}, but only {} are defined",
                    v.label,
                    self.barriers.len()
                )));
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::Config("sweep.values is empty".into()));
            }
            if sweep.parameter != SweepParameter::GridPoints && sweep.barrier >= self.barriers.len()
            {
                return Err(Error::Config(format!(
                    "sweep.barrier = {} but only {} barriers are defined",
                    sweep.barrier,
                    self.barriers.len()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "demo"

[grid]
x_min_nm = -10.0
x_max_nm = 10.0
n_points = 201

[potential]
kind = "infinite_well"

[mass]
kind = "constant"
m_rel = 0.067

[[barriers]]
center_nm = 0.0
alpha_ev_nm = 0.7

[solve]
n_modes = 4
"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let c = ScenarioConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.barriers[0].shape, PseudoDeltaShape::Rectangular);
        assert_eq!(c.solve.pdm_r, -1.0);
        assert_eq!(c.validate, ValidationThresholds::default());
        let v = c.effective_variants();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].barriers, vec![0]);
        let grid = c.grid.build().unwrap();
        let b = c.barriers[0].resolve(&grid);
        assert!((b.epsilon - 0.5).abs() < 1e-12);
    }

    #[test]
    fn roundtrip_through_toml() {
        let c = ScenarioConfig::from_toml(MINIMAL).unwrap();
        let text = c.to_toml().unwrap();
        assert_eq!(ScenarioConfig::from_toml(&text).unwrap(), c);
    }

    #[test]
    fn missing_block_is_named() {
        let text = MINIMAL.replace("[grid]", "[grod]");
        let err = ScenarioConfig::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("`grid`"), "{err}");
    }

    #[test]
    fn unknown_field_reports_location() {
        let text = MINIMAL.replace("n_points = 201", "n_points = 201\nnpoints = 3");
        let err = ScenarioConfig::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("npoints"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn bad_variant_index() {
        let text = format!("{MINIMAL}\n[[variants]]\nlabel = \"x\"\nbarriers = [3]\n");
        assert!(matches!(
            ScenarioConfig::from_toml(&text),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn empty_sweep_rejected() {
        let text = format!("{MINIMAL}\n[sweep]\nparameter = \"epsilon\"\nvalues = []\n");
        let err = ScenarioConfig::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("sweep.values"), "{err}");
    }

    #[test]
    fn gaussian_width_in_cells_is_matched_hwhm() {
        let mut c = ScenarioConfig::from_toml(MINIMAL).unwrap();
        c.barriers[0].shape = PseudoDeltaShape::Gaussian;
        let grid = c.grid.build().unwrap();
        let b = c.barriers[0].resolve(&grid);
        assert!((PseudoDeltaShape::Gaussian.hwhm(b.epsilon) - 0.5).abs() < 1e-12);
    }
}
