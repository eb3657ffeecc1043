//! Suite configuration: a TOML document plus command-line overrides.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use finsler_core::{build_ansatz, Ansatz, RadialProfile, TwoDBase};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Check names accepted in `[tolerances]` and by `--tol`, with defaults.
pub const DEFAULT_TOLERANCES: [(&str, f64); 17] = [
    ("ricci_flat", 1e-8),
    ("const_ricci", 1e-8),
    ("rn_ricci", 1e-8),
    ("einstein_diag", 1e-8),
    ("einstein_scalar", 1e-8),
    ("oracle_spray", 1e-8),
    ("oracle_curvature", 1e-8),
    ("const_flag", 1e-8),
    ("const_flag_floor", 1e-3),
    ("killing_residual", 1e-10),
    ("riemannian_diagonal", 1e-12),
    ("quartic_ratio", 4.0),
    ("off_band_mass", 5.0),
    ("spectrum_c", f64::INFINITY),
    ("ht_volume", 1e-10),
    ("bh_volume", 1e-6),
    ("geodesic_drift", 1e-8),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileName {
    Schwarzschild,
    SchwarzschildDeSitter,
    ReissnerNordstrom,
    DeSitter,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolutionConfig {
    pub profile: ProfileName,
    /// Curvature of the two-dimensional base: 1 selects the Finslerian
    /// sphere, 0 the flat plane and -1 the hyperbolic plane.
    pub k: i32,
    pub gm: f64,
    pub b: f64,
    pub q2_term: f64,
    pub epsilon: f64,
}

impl Default for SolutionConfig {
    fn default() -> Self {
        SolutionConfig {
            profile: ProfileName::Schwarzschild,
            k: 1,
            gm: 1.0,
            b: 0.0,
            q2_term: 0.0,
            epsilon: 0.3,
        }
    }
}

impl SolutionConfig {
    pub fn profile(&self) -> RadialProfile {
        let (k, gm, b, q) = (self.k, self.gm, self.b, self.q2_term);
        match self.profile {
            ProfileName::Schwarzschild => RadialProfile::schwarzschild(k, gm),
            ProfileName::SchwarzschildDeSitter => RadialProfile::schwarzschild_de_sitter(k, gm, b),
            ProfileName::ReissnerNordstrom => RadialProfile::reissner_nordstrom(k, gm, q),
            ProfileName::DeSitter => RadialProfile::de_sitter(k, b),
            ProfileName::Custom => RadialProfile::custom(k, gm, b, q),
        }
    }

    pub fn base(&self) -> Result<TwoDBase> {
        match self.k {
            1 => Ok(TwoDBase::finsler_sphere(self.epsilon)),
            0 | -1 if self.epsilon != 0.0 => Err(HarnessError::config(
                "epsilon deforms the sphere only; use k = 1 or epsilon = 0",
            )),
            0 => Ok(TwoDBase::Flat),
            -1 => Ok(TwoDBase::Hyperbolic),
            k => Err(HarnessError::config(format!("k must be -1, 0 or 1, got {k}"))),
        }
    }

    pub fn ansatz(&self) -> Result<Ansatz> {
        Ok(build_ansatz(self.profile(), self.base()?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub r_range: [f64; 2],
    /// Number of radii, log-spaced over `r_range`.
    pub radial: usize,
    pub theta_range: [f64; 2],
    /// Random angular positions per radius.
    pub angular: usize,
    /// Random non-null directions per position.
    pub directions: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            r_range: [3.0, 50.0],
            radial: 10,
            theta_range: [0.15, PI - 0.15],
            angular: 4,
            directions: 5,
        }
    }
}

impl GridConfig {
    pub fn len(&self) -> usize {
        self.radial * self.angular * self.directions
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralConfig {
    pub epsilons: Vec<f64>,
    pub l_max: usize,
    /// Inclusive azimuthal range.
    pub m_range: [i32; 2],
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            epsilons: vec![0.05, 0.1, 0.2],
            l_max: 16,
            m_range: [0, 3],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KillingConfig {
    /// Overrides the expected null-space dimension.
    pub expected_rank: Option<usize>,
    pub samples: usize,
    pub t_range: [f64; 2],
}

impl Default for KillingConfig {
    fn default() -> Self {
        KillingConfig {
            expected_rank: None,
            samples: 120,
            t_range: [-1.0, 1.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeodesicConfig {
    /// Start position `(t, r, theta, phi)`; with `y0` it replaces the
    /// near-circular orbit built from `r` and `theta`.
    pub x0: Option<[f64; 4]>,
    pub y0: Option<[f64; 4]>,
    pub r: f64,
    pub theta: f64,
    pub span: f64,
    pub tol: f64,
    /// Evenly spaced output samples.
    pub samples: usize,
}

impl Default for GeodesicConfig {
    fn default() -> Self {
        GeodesicConfig {
            x0: None,
            y0: None,
            r: 10.0,
            theta: 1.2,
            span: 100.0,
            tol: 1e-11,
            samples: 101,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Destination file; standard output when absent.
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub solution: SolutionConfig,
    pub grid: GridConfig,
    pub tolerances: BTreeMap<String, f64>,
    pub spectral: SpectralConfig,
    pub killing: KillingConfig,
    pub geodesic: GeodesicConfig,
    pub output: OutputConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            solution: SolutionConfig::default(),
            grid: GridConfig::default(),
            tolerances: BTreeMap::new(),
            spectral: SpectralConfig::default(),
            killing: KillingConfig::default(),
            geodesic: GeodesicConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: SuiteConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path.display().to_string(), e))?;
        Self::from_toml(&text)
    }

    /// Tolerance for `name`, falling back to the built-in default.
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            DEFAULT_TOLERANCES
                .iter()
                .find(|(n, _)| *n == name)
                .map_or(f64::INFINITY, |(_, v)| *v)
        })
    }

    /// Parses and applies one `NAME=VALUE` override.
    pub fn set_tolerance(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| HarnessError::config(format!("expected NAME=VALUE, got {assignment:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| HarnessError::config(format!("tolerance {name:?} is not a number")))?;
        self.tolerances.insert(name.trim().to_string(), value);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in &self.tolerances {
            if !DEFAULT_TOLERANCES.iter().any(|(n, _)| n == name) {
                return Err(HarnessError::config(format!("unknown tolerance {name:?}")));
            }
            if !(*value > 0.0) {
                return Err(HarnessError::config(format!("tolerance {name:?} must be positive")));
            }
        }
        let g = &self.grid;
        if g.is_empty() {
            return Err(HarnessError::config("grid has no points"));
        }
        if !(g.r_range[0] > 0.0 && g.r_range[0] <= g.r_range[1]) {
            return Err(HarnessError::config("r_range must satisfy 0 < lo <= hi"));
        }
        if !(g.theta_range[0] <= g.theta_range[1]) {
            return Err(HarnessError::config("theta_range must satisfy lo <= hi"));
        }
        let s = &self.spectral;
        if let Some(e) = s.epsilons.iter().chain([&self.solution.epsilon]).find(|e| !(0.0..1.0).contains(*e)) {
            return Err(HarnessError::config(format!("epsilon {e} outside [0, 1)")));
        }
        if s.epsilons.is_empty() || s.m_range[0] > s.m_range[1] {
            return Err(HarnessError::config("spectral section needs epsilons and lo <= hi in m_range"));
        }
        if self.geodesic.x0.is_some() != self.geodesic.y0.is_some() {
            return Err(HarnessError::config("geodesic x0 and y0 must be given together"));
        }
        if !(self.geodesic.span > 0.0 && self.geodesic.tol > 0.0) || self.geodesic.samples < 2 {
            return Err(HarnessError::config("geodesic span and tol must be positive, samples >= 2"));
        }
        self.solution.ansatz()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = SuiteConfig::default();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(SuiteConfig::from_toml(&text).unwrap(), c);
    }

    #[test]
    fn partial_documents_fill_defaults() {
        let c = SuiteConfig::from_toml("[solution]\nprofile = \"de_sitter\"\nb = 0.05\ngm = 0.0\n").unwrap();
        assert_eq!(c.solution.profile, ProfileName::DeSitter);
        assert_eq!(c.grid, GridConfig::default());
        assert_eq!(c.tolerance("ricci_flat"), 1e-8);
    }

    #[test]
    fn rejects_bad_values() {
        for doc in [
            "[tolerances]\nricci_flat = -1.0",
            "[tolerances]\nnot_a_check = 1.0",
            "[grid]\nradial = 0",
            "[solution]\nepsilon = 1.0",
            "[solution]\nk = 0",
            "[spectral]\nm_range = [3, 1]",
            "unknown_key = 1",
        ] {
            assert!(SuiteConfig::from_toml(doc).is_err(), "{doc}");
        }
    }

    #[test]
    fn tolerance_overrides() {
        let mut c = SuiteConfig::default();
        c.set_tolerance("ricci_flat=1e-6").unwrap();
        assert_eq!(c.tolerance("ricci_flat"), 1e-6);
        assert!(c.set_tolerance("ricci_flat").is_err());
        assert!(c.set_tolerance("ricci_flat=x").is_err());
    }
}
