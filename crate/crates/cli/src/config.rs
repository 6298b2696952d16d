use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use gaussmap_core::algebra::AlgebraElement;
use gaussmap_core::ambient::ModelSpace;
use gaussmap_core::surface::{catalog, ParamSurface, Params};
use gaussmap_core::verify::{killing_preset, CheckOptions};

pub const MIN_GRID: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    RuhVilms,
    Duality,
    Quadform,
    Perp,
    Invariance,
    Hos,
}

impl CheckKind {
    fn needs_killing(self) -> bool {
        matches!(self, CheckKind::Invariance | CheckKind::Hos)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

/// `64` or `[64, 48]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Square(usize),
    Rect([usize; 2]),
}

impl GridSpec {
    pub fn dims(self) -> (usize, usize) {
        match self {
            GridSpec::Square(n) => (n, n),
            GridSpec::Rect([a, b]) => (a, b),
        }
    }

    /// `64` or `64x48`.
    pub fn parse(s: &str) -> Result<Self> {
        let num = |t: &str| t.trim().parse::<usize>().with_context(|| format!("bad grid size '{s}'"));
        match s.split_once(['x', 'X']) {
            Some((a, b)) => Ok(GridSpec::Rect([num(a)?, num(b)?])),
            None => Ok(GridSpec::Square(num(s)?)),
        }
    }
}

/// A preset name or coefficients in the algebra's coordinate basis
/// (upper-triangular matrix entries row by row, then the line part).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KillingSpec {
    Preset(String),
    Coeffs(Vec<f64>),
}

impl KillingSpec {
    pub fn parse(s: &str) -> Self {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let coeffs: std::result::Result<Vec<f64>, _> = body.split(',').map(|t| t.trim().parse::<f64>()).collect();
        match coeffs {
            Ok(c) if !body.is_empty() => KillingSpec::Coeffs(c),
            _ => KillingSpec::Preset(s.trim().to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Format {
    #[default]
    #[serde(rename = "json")]
    Json,
    #[serde(rename = "json+csv")]
    JsonCsv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_out")]
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            path: default_out(),
            format: Format::Json,
        }
    }
}

fn default_out() -> PathBuf {
    PathBuf::from("reports")
}

fn yes() -> bool {
    true
}

/// One `check` invocation, as read from `--config` and then overlaid with
/// command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Optional consistency check against the surface's space.
    #[serde(default)]
    pub space: Option<String>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default = "yes")]
    pub richardson: bool,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub killing_vector: Option<KillingSpec>,
    #[serde(default)]
    pub output: OutputSpec,
    /// Pinned Ricci scale and tangential coefficient.
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub c_t: Option<f64>,
}

impl RunConfig {
    pub fn new(surface: &str) -> Self {
        RunConfig {
            surface: surface.to_string(),
            params: BTreeMap::new(),
            space: None,
            grid: None,
            richardson: true,
            tolerances: BTreeMap::new(),
            checks: Vec::new(),
            killing_vector: None,
            output: OutputSpec::default(),
            s: None,
            c_t: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Check the invariants and resolve names into core objects.
    pub fn prepare(&self) -> Result<Prepared> {
        let params: Params = self.params.clone();
        let surface = catalog(&self.surface, &params)?;
        if let Some(label) = &self.space {
            let want = ModelSpace::from_label(label).ok_or_else(|| anyhow!("unknown space '{label}'"))?;
            if want != surface.space {
                bail!(
                    "surface '{}' lives in {}, not {}",
                    self.surface,
                    surface.space.label(),
                    want.label()
                );
            }
        }
        let grid = self.grid.map(GridSpec::dims);
        if let Some((nu, nv)) = grid {
            if nu < MIN_GRID || nv < MIN_GRID {
                bail!("grid {nu}x{nv} is below the minimum of {MIN_GRID} per axis");
            }
        }
        for (name, t) in &self.tolerances {
            if !(t.is_finite() && *t > 0.0) {
                bail!("tolerance for '{name}' must be positive, got {t}");
            }
        }
        if self.checks.is_empty() {
            bail!("no checks requested");
        }
        let killing = match &self.killing_vector {
            None => None,
            Some(KillingSpec::Preset(p)) => Some(killing_preset(&surface, p)?),
            Some(KillingSpec::Coeffs(c)) => {
                let dim = surface.space.algebra_kind().dim();
                if c.len() != dim {
                    bail!(
                        "killing vector has {} coefficients; the algebra of {} has dimension {dim}",
                        c.len(),
                        surface.space.label()
                    );
                }
                Some(AlgebraElement::from_coords(surface.space.algebra_kind(), c)?)
            }
        };
        if killing.is_none() {
            if let Some(c) = self.checks.iter().find(|c| c.needs_killing()) {
                bail!("check '{c}' needs --killing");
            }
        }
        let opts = CheckOptions {
            grid,
            richardson: self.richardson,
            s: self.s,
            c_t: self.c_t,
            tol: self.tolerances.clone(),
            ..Default::default()
        };
        let mut checks = self.checks.clone();
        checks.dedup();
        Ok(Prepared {
            surface,
            opts,
            killing,
            checks,
            output: self.output.clone(),
        })
    }
}

pub struct Prepared {
    pub surface: ParamSurface,
    pub opts: CheckOptions,
    pub killing: Option<AlgebraElement>,
    pub checks: Vec<CheckKind>,
    pub output: OutputSpec,
}

/// `key=value` with a numeric value.
pub fn parse_assignment(s: &str) -> Result<(String, f64)> {
    let (k, v) = s.split_once('=').ok_or_else(|| anyhow!("expected key=value, got '{s}'"))?;
    let v: f64 = v.trim().parse().with_context(|| format!("bad number in '{s}'"))?;
    Ok((k.trim().to_string(), v))
}
