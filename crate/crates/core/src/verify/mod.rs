//! Verification suites over catalog surfaces.
//!
//! Each check evaluates a vector of raw, linear-in-the-stencil components
//! at every node, optionally Richardson-combines a grid with its refinement,
//! and only then forms norms and fits.

mod duality;
mod hos;
mod quadform;
mod ruh_vilms;
mod subalgebra;
pub mod suite;

use std::collections::BTreeMap;

use nalgebra::DVector;

use crate::algebra::AlgebraElement;
use crate::calculus::{richardson, GridField, SurfaceGrid};
use crate::error::Result;
use crate::exec::Exec;
use crate::report::CheckReport;
use crate::surface::{Domain, ParamSurface};

pub use duality::duality_check;
pub use hos::{hemisphere_verdict, hos_diagnostic, threshold_verdict, HemisphereVerdict, ThresholdVerdict};
pub use quadform::{holomorphy_raw, quad_compare};
pub use ruh_vilms::ruh_vilms_residual;
pub use subalgebra::{invariance_check, killing_preset, perp_subalgebra, SubalgebraResult, KILLING_PRESETS};

/// Default tolerances, keyed by field name.
pub mod tol {
    pub const RUH_VILMS: f64 = 5e-5;
    pub const DUALITY: f64 = 1e-6;
    pub const QUADFORM: f64 = 1e-6;
    pub const CR: f64 = 1e-5;
    pub const CLOSURE: f64 = 1e-8;
    pub const INVARIANCE: f64 = 1e-8;
    pub const GAUSS_EQUATION: f64 = 1e-8;
    pub const RICCI_IDENTITY: f64 = 1e-8;
    pub const SUBHARMONIC: f64 = 1e-6;
    pub const HEMISPHERE: f64 = 1e-10;
    pub const THRESHOLD: f64 = 1e-9;
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    /// Nodes (Nu, Nv); `None` keeps the surface's own grid.
    pub grid: Option<(usize, usize)>,
    pub richardson: bool,
    pub exec: Exec,
    /// Pinned Ricci scale in Δ𝒩 = −(B2 + s·Ric(η))𝒩 (1 is the literal form).
    pub s: Option<f64>,
    /// Tangential coefficient c_t in front of Γ(grad H).
    pub c_t: Option<f64>,
    /// Per-field tolerance overrides.
    pub tol: BTreeMap<String, f64>,
    /// Multiplies every default tolerance.
    pub tol_scale: f64,
    pub samples: usize,
    pub seed: u64,
    pub t_grid: Vec<f64>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            grid: None,
            richardson: true,
            exec: Exec::default(),
            s: None,
            c_t: None,
            tol: BTreeMap::new(),
            tol_scale: 1.0,
            samples: 64,
            seed: 0x6a55_0001,
            t_grid: (0..=20).map(|k| -1.0 + 0.1 * k as f64).collect(),
        }
    }
}

impl CheckOptions {
    pub fn tol(&self, field: &str, default: f64) -> f64 {
        self.tol.get(field).copied().unwrap_or(default * self.tol_scale)
    }

    pub fn domain(&self, s: &ParamSurface) -> Domain {
        match self.grid {
            Some((nu, nv)) => Domain {
                nu,
                nv,
                ..s.domain
            },
            None => s.domain,
        }
    }

    pub(crate) fn report(&self, check: &str, s: &ParamSurface) -> CheckReport {
        let d = self.domain(s);
        let mut r = CheckReport::new(check, &s.name, s.params.clone(), (d.nu, d.nv), self.richardson);
        r.domain = Some(d);
        r
    }
}

/// Raw per-node component vectors, one grid per entry.
pub(crate) type Raw = Vec<GridField<Option<DVector<f64>>>>;

/// Evaluate raw components on the coarse grid and, with Richardson on, on
/// its refinement; return the combined fields together with the coarse grid.
pub(crate) fn evaluate<'a>(
    s: &'a ParamSurface,
    opts: &CheckOptions,
    f: impl Fn(&SurfaceGrid) -> Raw,
) -> Result<(SurfaceGrid<'a>, Raw)> {
    let domain = opts.domain(s);
    let coarse = SurfaceGrid::new(s, domain, opts.exec)?;
    let raw = f(&coarse);
    if !opts.richardson {
        return Ok((coarse, raw));
    }
    let fine_raw = {
        let fine = SurfaceGrid::new(s, domain.refined(), opts.exec)?;
        f(&fine)
    };
    let combined = raw
        .iter()
        .zip(fine_raw.iter())
        .map(|(c, f)| richardson(c, f))
        .collect();
    Ok((coarse, combined))
}

/// Per-node map over an optional raw field.
pub(crate) fn node_map<T>(
    field: &GridField<Option<DVector<f64>>>,
    mut f: impl FnMut(usize, usize, &DVector<f64>) -> T,
) -> GridField<Option<T>> {
    GridField::from_fn(field.nu, field.nv, field.boundary, |i, j| {
        field.get(i, j).as_ref().map(|x| f(i, j, x))
    })
}

/// Element from its coordinate vector (a slice of a raw component vector).
pub(crate) fn element(kind: crate::algebra::AlgebraKind, c: &[f64]) -> AlgebraElement {
    AlgebraElement::from_coords(kind, c).expect("raw vectors carry full coordinates")
}

/// Least-squares slope of y against x through the origin.
pub(crate) fn lsq_slope(pairs: impl Iterator<Item = (f64, f64)>) -> Option<f64> {
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in pairs {
        sxy += x * y;
        sxx += x * x;
    }
    (sxx > 1e-20).then(|| sxy / sxx)
}
