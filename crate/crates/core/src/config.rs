//! Experiment configuration: a TOML-backed description of one function,
//! one weight, one direction, the grids, and the list of checks to run.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcs::Params;

/// All checks the runner knows, in canonical pipeline order. Later stages
/// consume earlier results (the measured index feeds the growth bound).
pub const CANONICAL_CRITERIA: [&str; 9] = [
    "lclass", "index", "thm5", "hayman", "thm8", "thm11", "zeros", "growth", "pde",
];

/// A registry entry by name plus its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapConfig {
    pub name: String,
    #[serde(default)]
    pub params: Params,
}

/// Quadrature settings shared by every stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadConfig {
    pub nodes: usize,
    pub max_order: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            nodes: 256,
            max_order: 20,
        }
    }
}

/// Grid densities; `scale` multiplies every default count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub scale: f64,
    /// Slice base points for the criteria that walk slice grids.
    pub slice_points: usize,
    /// t-samples per slice.
    pub t_per_slice: usize,
    /// Ball points for the residual sweep of the pde harness.
    pub residual_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            scale: 1.0,
            slice_points: 24,
            t_per_slice: 6,
            residual_points: 1000,
        }
    }
}

/// Settings of the growth stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GrowthConfig {
    pub rays: usize,
    pub radii: usize,
    /// Derivative order on the left-hand side.
    pub p: usize,
    /// Overrides the measured index as the N of the bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_override: Option<usize>,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            rays: 8,
            radii: 32,
            p: 0,
            n_override: None,
        }
    }
}

/// Settings of the pde stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PdeConfig {
    /// Name of the built-in equation; "remark4" is the only one shipped.
    pub builtin: String,
    pub residual_tolerance: f64,
}

impl Default for PdeConfig {
    fn default() -> Self {
        PdeConfig {
            builtin: "remark4".into(),
            residual_tolerance: 1e-10,
        }
    }
}

/// One experiment: the function, the weight, the direction, the checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub function: MapConfig,
    pub lfield: MapConfig,
    /// Direction coordinates as (re, im) pairs.
    pub direction: Vec<[f64; 2]>,
    pub beta: f64,
    pub criteria: Vec<String>,
    /// Sampling seed. TOML stores integers as i64, so seeds above
    /// i64::MAX survive JSON but not a TOML round trip.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub quadrature: QuadConfig,
    /// Disc radius parameter eta of the local-maximum criterion.
    #[serde(default = "default_eta")]
    pub eta: f64,
    /// Exceptional-set radius of the zero-based criteria.
    #[serde(default = "default_eta")]
    pub exclusion_radius: f64,
    /// Index search cap.
    #[serde(default = "default_m_max")]
    pub m_max: usize,
    /// Bound C the Hayman check is asked to certify.
    #[serde(default = "default_hayman_c")]
    pub hayman_c: f64,
    /// Radii (r1, r2) of the two-circle ratio bound.
    #[serde(default = "default_thm8_radii")]
    pub thm8_radii: [f64; 2],
    #[serde(default)]
    pub growth: GrowthConfig,
    #[serde(default)]
    pub pde: PdeConfig,
}

fn default_eta() -> f64 {
    1.0
}

fn default_m_max() -> usize {
    20
}

fn default_hayman_c() -> f64 {
    1.0
}

fn default_thm8_radii() -> [f64; 2] {
    [0.5, 2.0]
}

impl ExperimentConfig {
    /// Structural validation; registry names are resolved by the runner.
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 1.0) {
            return Err(Error::Config {
                field: "beta".into(),
                message: format!("the weight class requires beta > 1, got {}", self.beta),
            });
        }
        if self.direction.is_empty()
            || self.direction.iter().all(|p| p[0] == 0.0 && p[1] == 0.0)
        {
            return Err(Error::Config {
                field: "direction".into(),
                message: "direction must be a nonzero vector".into(),
            });
        }
        if self.criteria.is_empty() {
            return Err(Error::Config {
                field: "criteria".into(),
                message: "at least one criterion must be requested".into(),
            });
        }
        for c in &self.criteria {
            if !CANONICAL_CRITERIA.contains(&c.as_str()) {
                return Err(Error::Config {
                    field: "criteria".into(),
                    message: format!(
                        "unknown criterion {c:?}; known: {}",
                        CANONICAL_CRITERIA.join(", ")
                    ),
                });
            }
        }
        if !(self.grid.scale > 0.0 && self.grid.scale.is_finite()) {
            return Err(Error::Config {
                field: "grid.scale".into(),
                message: format!("scale must be positive, got {}", self.grid.scale),
            });
        }
        if !(self.eta > 0.0 && self.eta <= self.beta) {
            return Err(Error::Config {
                field: "eta".into(),
                message: format!("eta must lie in (0, beta], got {}", self.eta),
            });
        }
        if !(self.exclusion_radius > 0.0 && self.exclusion_radius <= self.beta) {
            return Err(Error::Config {
                field: "exclusion_radius".into(),
                message: format!(
                    "exclusion radius must lie in (0, beta], got {}",
                    self.exclusion_radius
                ),
            });
        }
        Ok(())
    }

    /// Requested criteria sorted into canonical pipeline order, deduplicated.
    pub fn ordered_criteria(&self) -> Vec<String> {
        let mut out = Vec::new();
        for name in CANONICAL_CRITERIA {
            if self.criteria.iter().any(|c| c == name) {
                out.push(name.to_string());
            }
        }
        out
    }
}

/// Parses a config from TOML text.
pub fn config_from_toml(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config {
        field: "<toml>".into(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Serializes a config back to TOML text.
pub fn config_to_toml(cfg: &ExperimentConfig) -> Result<String> {
    toml::to_string(cfg).map_err(|e| Error::Config {
        field: "<toml>".into(),
        message: e.to_string(),
    })
}

/// Loads and validates a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    config_from_toml(&text)
}

/// A ready-made config for quick starts and tests.
pub fn example_config() -> ExperimentConfig {
    ExperimentConfig {
        function: MapConfig {
            name: "remark4".into(),
            params: Params::new(),
        },
        lfield: MapConfig {
            name: "remark4_weight".into(),
            params: Params::new(),
        },
        direction: vec![[1.0, 0.0], [1.0, 0.0]],
        beta: 2.0,
        criteria: vec!["index".into(), "hayman".into(), "thm8".into()],
        seed: 0,
        grid: GridConfig::default(),
        quadrature: QuadConfig::default(),
        eta: 1.0,
        exclusion_radius: 1.0,
        m_max: 20,
        hayman_c: 1.0,
        thm8_radii: [0.5, 2.0],
        growth: GrowthConfig::default(),
        pde: PdeConfig::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::ParamValue;

    #[test]
    fn toml_round_trip_with_params() {
        let text = r#"
            beta = 2.0
            direction = [[1.0, 0.0], [1.0, 0.0]]
            criteria = ["index", "lclass"]

            [function]
            name = "remark4"

            [lfield]
            name = "remark4_weight"
        "#;
        let cfg = config_from_toml(text).unwrap();
        assert_eq!(cfg.function.name, "remark4");
        assert_eq!(cfg.ordered_criteria(), vec!["lclass", "index"]);
        assert_eq!(cfg.quadrature.nodes, 256);
        assert_eq!(cfg.grid.t_per_slice, 6);
    }

    #[test]
    fn typed_params_parse_from_toml_values() {
        let text = r#"
            beta = 1.5
            direction = [[1.0, 0.0]]
            criteria = ["index"]

            [function]
            name = "truncated_product"
            [function.params]
            j_max = 8
            c = [[4.0, 0.0]]
            d = [[0.5, 0.0]]

            [lfield]
            name = "reciprocal_one_minus_r"
            [lfield.params]
            c = 4.0
        "#;
        let cfg = config_from_toml(text).unwrap();
        assert_eq!(cfg.function.params.0["j_max"], ParamValue::Int(8));
        assert!(matches!(
            cfg.function.params.0["c"],
            ParamValue::ComplexVec(_)
        ));
        assert_eq!(cfg.lfield.params.0["c"], ParamValue::Real(4.0));
    }

    #[test]
    fn beta_at_most_one_is_rejected() {
        let mut cfg = example_config();
        cfg.beta = 1.0;
        let err = cfg.validate().unwrap_err();
        match err {
            Error::Config { field, .. } => assert_eq!(field, "beta"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn zero_direction_and_empty_criteria_are_rejected() {
        let mut cfg = example_config();
        cfg.direction = vec![[0.0, 0.0], [0.0, 0.0]];
        assert!(matches!(cfg.validate(), Err(Error::Config { field, .. }) if field == "direction"));
        let mut cfg = example_config();
        cfg.criteria.clear();
        assert!(matches!(cfg.validate(), Err(Error::Config { field, .. }) if field == "criteria"));
    }

    #[test]
    fn unknown_criterion_is_rejected() {
        let mut cfg = example_config();
        cfg.criteria = vec!["spectre".into()];
        assert!(matches!(cfg.validate(), Err(Error::Config { field, .. }) if field == "criteria"));
    }

    #[test]
    fn config_round_trips_through_toml() {
        let cfg = example_config();
        let text = toml::to_string(&cfg).unwrap();
        let back = config_from_toml(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
