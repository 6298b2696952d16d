//! The fixed verification matrix behind `suite quick` and `suite acceptance`.
//!
//! Order of execution (and of the returned reports) is fixed:
//! duality, Ruh–Vilms with the per-space s audit, the non-CMC control,
//! quadratic forms, perpendicular subalgebras with flow invariance, and the
//! HOS diagnostics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

use super::{
    duality_check, holomorphy_raw, hos_diagnostic, invariance_check, killing_preset, perp_subalgebra,
    quad_compare, ruh_vilms_residual, CheckOptions,
};
use crate::algebra::AlgebraElement;
use crate::ambient::ModelSpace;
use crate::calculus::{Boundary, GridField};
use crate::error::{GeomError, Result};
use crate::exec::Exec;
use crate::report::{num, write_value, CheckReport};
use crate::surface::{catalog, catalog_entries, ParamSurface, Params};

/// Spread allowed between per-member fits of s within one space.
pub const S_SPREAD: f64 = 1e-3;
/// Relative spread allowed between the c_t fits on two grids.
pub const C_T_SPREAD: f64 = 0.05;
/// Samples for perpendicular-subalgebra extraction.
pub const PERP_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Acceptance,
}

impl Profile {
    pub fn grid(self) -> usize {
        match self {
            Profile::Quick => 32,
            Profile::Acceptance => 64,
        }
    }

    pub fn tol_scale(self) -> f64 {
        match self {
            Profile::Quick => 10.0,
            Profile::Acceptance => 1.0,
        }
    }

    pub fn options(self, exec: Exec) -> CheckOptions {
        CheckOptions {
            grid: Some((self.grid(), self.grid())),
            richardson: true,
            exec,
            tol_scale: self.tol_scale(),
            ..Default::default()
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Quick => "quick",
            Profile::Acceptance => "acceptance",
        })
    }
}

impl FromStr for Profile {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "acceptance" => Ok(Profile::Acceptance),
            _ => Err(GeomError::InvalidParameter(format!(
                "unknown profile '{s}' (quick, acceptance)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteItem {
    /// Stable identifier, `NN-check-surface`, used for report file names.
    pub id: String,
    pub report: CheckReport,
}

#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub profile: Profile,
    pub only: Option<ModelSpace>,
    pub items: Vec<SuiteItem>,
}

impl SuiteRun {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|it| it.report.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteItem> {
        self.items.iter().filter(|it| !it.report.passed())
    }

    /// Reports of one check, in suite order.
    pub fn reports<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a CheckReport> + 'a {
        self.items
            .iter()
            .map(|it| &it.report)
            .filter(move |r| r.check == check)
    }

    pub fn find<'a>(&'a self, check: &'a str, surface: &str) -> Option<&'a CheckReport> {
        self.reports(check).find(|r| r.surface == surface)
    }

    pub fn to_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("profile".into(), self.profile.to_string().into());
        top.insert(
            "only".into(),
            self.only.map(|s| Value::from(s.label())).unwrap_or(Value::Null),
        );
        top.insert("verdict".into(), if self.passed() { "pass" } else { "fail" }.into());
        let rows = self
            .items
            .iter()
            .map(|it| {
                let mut row = Map::new();
                row.insert("id".into(), it.id.clone().into());
                row.insert("check".into(), it.report.check.clone().into());
                row.insert("surface".into(), it.report.surface.clone().into());
                row.insert(
                    "verdict".into(),
                    if it.report.passed() { "pass" } else { "fail" }.into(),
                );
                Value::Object(row)
            })
            .collect();
        top.insert("reports".into(), Value::Array(rows));
        Value::Object(top)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_value(&mut out, &self.to_value(), 0);
        out.push('\n');
        out
    }
}

struct Runner {
    opts: CheckOptions,
    only: Option<ModelSpace>,
    items: Vec<SuiteItem>,
}

impl Runner {
    fn push(&mut self, report: CheckReport) {
        let id = format!("{:02}-{}-{}", self.items.len() + 1, report.check, report.surface);
        self.items.push(SuiteItem { id, report });
    }

    fn wanted(&self, s: &ParamSurface) -> bool {
        self.only.is_none_or(|sp| sp == s.space)
    }
}

fn surface(name: &str, params: &[(&str, f64)]) -> Result<ParamSurface> {
    let p: Params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    catalog(name, &p)
}

fn defaults(pred: impl Fn(&crate::surface::CatalogEntry) -> bool) -> Result<Vec<ParamSurface>> {
    catalog_entries()
        .iter()
        .filter(|e| pred(e))
        .map(|e| catalog(e.name, &Params::new()))
        .collect()
}

fn square(o: &CheckOptions) -> (usize, usize) {
    o.grid.unwrap_or((0, 0))
}

fn row(values: &[f64]) -> GridField<Option<f64>> {
    GridField::from_fn(values.len().max(1), 1, Boundary::InteriorOnly, |i, _| {
        values.get(i).copied().or(Some(0.0))
    })
}

/// Run the matrix. `only` restricts it to surfaces of one space.
pub fn run_suite(profile: Profile, only: Option<ModelSpace>, exec: Exec) -> Result<SuiteRun> {
    let mut run = Runner {
        opts: profile.options(exec),
        only,
        items: Vec::new(),
    };
    duality(&mut run)?;
    ruh_vilms(&mut run)?;
    control(&mut run, profile)?;
    quadratic_forms(&mut run)?;
    subalgebras(&mut run)?;
    hos(&mut run)?;
    Ok(SuiteRun {
        profile,
        only,
        items: run.items,
    })
}

fn duality(run: &mut Runner) -> Result<()> {
    let members = [
        surface("great-sphere-s3", &[])?,
        surface("geodesic-sphere-s3", &[("rho", 0.7)])?,
        surface("clifford-torus", &[])?,
        surface("geodesic-sphere-h3", &[("rho", 0.7)])?,
        surface("equidistant-h3", &[("d", 0.5)])?,
        surface("horosphere", &[])?,
        surface("slice-h2xr", &[])?,
        surface("vertical-plane-h2xr", &[])?,
        surface("vertical-cylinder-h2xr", &[])?,
        surface("slice-s2xr", &[])?,
        surface("vertical-cylinder-s2xr", &[])?,
    ];
    for s in &members {
        if !run.wanted(s) {
            continue;
        }
        let r = duality_check(s, &run.opts)?;
        run.push(r);
    }
    Ok(())
}

/// First pass fits s on every CMC member; the fits of one space are pinned
/// to their mean and the residual is recomputed with it.
fn ruh_vilms(run: &mut Runner) -> Result<()> {
    let members: Vec<_> = defaults(|e| e.cmc)?.into_iter().filter(|s| run.wanted(s)).collect();
    let mut fits: BTreeMap<String, Vec<(String, f64)>> = BTreeMap::new();
    for s in &members {
        let r = ruh_vilms_residual(s, &run.opts)?;
        if let Some(x) = r.audit.s_fit {
            fits.entry(s.space.label()).or_default().push((s.name.clone(), x));
        }
    }
    let mut pinned = BTreeMap::new();
    let mut spaces: Vec<ModelSpace> = Vec::new();
    for s in &members {
        if !spaces.contains(&s.space) {
            spaces.push(s.space);
        }
    }
    for sp in spaces {
        let label = sp.label();
        let list = fits.get(&label).cloned().unwrap_or_default();
        let values: Vec<f64> = list.iter().map(|(_, x)| *x).collect();
        let mean = (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let spread = if values.is_empty() { 0.0 } else { hi - lo };

        let mut r = CheckReport::new("s-audit", &label, Vec::new(), square(&run.opts), run.opts.richardson);
        r.push_grid("spread", row(&[spread]), Some(S_SPREAD))?;
        r.push_grid(
            "deviation_from_1",
            row(&values.iter().map(|x| x - 1.0).collect::<Vec<_>>()),
            None,
        )?;
        r.audit.s_fit = mean;
        r.push_meta("s_pinned", mean.map(num).unwrap_or(Value::Null));
        r.push_meta(
            "fits",
            list.iter()
                .map(|(n, x)| {
                    let mut m = Map::new();
                    m.insert("surface".into(), n.clone().into());
                    m.insert("s_fit".into(), num(*x));
                    Value::Object(m)
                })
                .collect::<Vec<_>>(),
        );
        if mean.is_none() {
            r.push_meta("note", "Ric(eta) vanishes on every member; s is irrelevant");
        }
        run.push(r);
        pinned.insert(label, mean);
    }
    for s in &members {
        let opts = CheckOptions {
            s: pinned.get(&s.space.label()).copied().flatten(),
            ..run.opts.clone()
        };
        let r = ruh_vilms_residual(s, &opts)?;
        run.push(r);
    }
    Ok(())
}

/// Non-CMC controls: the ellipsoid on two grids (c_t stability) and the
/// vertical graph in ℍ²×ℝ.
fn control(run: &mut Runner, profile: Profile) -> Result<()> {
    let e = surface("ellipsoid-r3", &[])?;
    if run.wanted(&e) {
        let n = profile.grid();
        let mut fits = Vec::new();
        for grid in [n, 2 * n] {
            let opts = CheckOptions {
                grid: Some((grid, grid)),
                ..run.opts.clone()
            };
            let r = ruh_vilms_residual(&e, &opts)?;
            fits.push((grid, r.audit.c_t_fit));
            run.push(r);
        }
        let values: Vec<f64> = fits.iter().filter_map(|(_, c)| *c).collect();
        let mut r = CheckReport::new("c_t-audit", &e.name, e.params.clone(), (n, n), run.opts.richardson);
        let rel = if values.len() == 2 {
            (values[0] - values[1]).abs() / (0.5 * (values[0] + values[1])).abs()
        } else {
            f64::INFINITY
        };
        r.push_grid("relative_spread", row(&[rel]), Some(C_T_SPREAD))?;
        r.audit.c_t_fit = values.last().copied();
        r.push_meta(
            "fits",
            fits.iter()
                .map(|(g, c)| {
                    let mut m = Map::new();
                    m.insert("grid".into(), (*g).into());
                    m.insert("c_t_fit".into(), c.map(num).unwrap_or(Value::Null));
                    Value::Object(m)
                })
                .collect::<Vec<_>>(),
        );
        run.push(r);
    }
    let g = surface("vertical-graph-h2xr", &[])?;
    if run.wanted(&g) {
        let r = ruh_vilms_residual(&g, &run.opts)?;
        run.push(r);
    }
    Ok(())
}

fn quadratic_forms(run: &mut Runner) -> Result<()> {
    let members: Vec<_> = defaults(|e| e.conformal)?
        .into_iter()
        .filter(|s| run.wanted(s))
        .collect();
    let mut cmc_cr: f64 = 0.0;
    for s in &members {
        let r = quad_compare(s, &run.opts)?;
        if s.is_cmc {
            cmc_cr = cmc_cr.max(r.field("cr").map_or(0.0, |f| f.max_abs));
        }
        run.push(r);
    }
    let g = surface("vertical-graph-h2xr", &[])?;
    if run.wanted(&g) {
        let mut r = holomorphy_raw(&g, &run.opts)?;
        let cr = r.field("cr").map_or(0.0, |f| f.max_abs);
        if cmc_cr > 0.0 {
            r.push_meta("cr_ratio_to_cmc_max", num(cr / cmc_cr));
        }
        run.push(r);
    }
    Ok(())
}

fn subalgebras(run: &mut Runner) -> Result<()> {
    let members = [
        surface("vertical-cylinder-h2xr", &[])?,
        surface("vertical-cylinder-s2xr", &[])?,
        surface("great-sphere-s3", &[])?,
        surface("horosphere", &[])?,
        surface("ellipsoid-r3", &[])?,
    ];
    for s in &members {
        if !run.wanted(s) {
            continue;
        }
        let res = perp_subalgebra(s, PERP_SAMPLES, &run.opts)?;
        let r = res.to_report(s, &run.opts)?;
        run.push(r);
    }
    let named = [
        ("vertical-cylinder-h2xr", "vertical"),
        ("vertical-cylinder-h2xr", "axis-rotation"),
        ("vertical-cylinder-s2xr", "vertical"),
        ("vertical-cylinder-s2xr", "axis-rotation"),
        ("horosphere", "parabolic"),
    ];
    for (name, preset) in named {
        let s = surface(name, &[])?;
        if !run.wanted(&s) {
            continue;
        }
        let v = killing_preset(&s, preset)?;
        let mut r = invariance_check(&s, &v, &run.opts.t_grid, &run.opts)?;
        r.push_meta("killing_preset", preset);
        run.push(r);
    }
    Ok(())
}

/// A Killing generator to pair with: the space's natural preset, else the
/// first coordinate basis element.
fn default_killing(s: &ParamSurface) -> AlgebraElement {
    let preset = match s.space {
        ModelSpace::Hyperbolic(3) => Some("hyperbolic-translation"),
        ModelSpace::SphereProd | ModelSpace::HypProd => Some("vertical"),
        _ => None,
    };
    preset
        .and_then(|p| killing_preset(s, p).ok())
        .unwrap_or_else(|| AlgebraElement::basis(s.space.algebra_kind(), 0))
}

fn hos(run: &mut Runner) -> Result<()> {
    let sharp = [
        ("equidistant-h3", vec![("d", 0.5)], "hyperbolic-translation"),
        ("horosphere", vec![], "hyperbolic-translation"),
        ("vertical-cylinder-h2xr", vec![("kg", std::f64::consts::SQRT_2)], "vertical"),
    ];
    for (name, params, preset) in &sharp {
        let s = surface(name, params)?;
        if !run.wanted(&s) {
            continue;
        }
        let v = killing_preset(&s, preset)?;
        let mut r = hos_diagnostic(&s, &v, &run.opts)?;
        r.push_meta("killing_preset", *preset);
        run.push(r);
    }
    let sharp_defaults = ["equidistant-h3", "horosphere"];
    let rest: Vec<_> = defaults(|e| !sharp_defaults.contains(&e.name))?
        .into_iter()
        .filter(|s| run.wanted(s))
        .collect();
    for s in &rest {
        let v = default_killing(s);
        let r = hos_diagnostic(s, &v, &run.opts)?;
        run.push(r);
    }
    Ok(())
}
