use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use serde::Serialize;

use super::{Domain, LevelFn, MeanCurvatureFn, ParamFn, ParamSurface};
use crate::ambient::ModelSpace;
use crate::error::{GeomError, Result};
use crate::taylor::T3;

pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub range: &'static str,
}

/// Static description of one catalog member.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub space: String,
    pub params: Vec<ParamSpec>,
    pub h_formula: &'static str,
    pub normal: &'static str,
    pub conformal: bool,
    pub cmc: bool,
    pub level_set: bool,
}

const DEFAULT_GRID: usize = 64;

fn entry(
    name: &'static str,
    space: ModelSpace,
    params: Vec<ParamSpec>,
    h_formula: &'static str,
    normal: &'static str,
    flags: (bool, bool, bool),
) -> CatalogEntry {
    CatalogEntry {
        name,
        space: space.label(),
        params,
        h_formula,
        normal,
        conformal: flags.0,
        cmc: flags.1,
        level_set: flags.2,
    }
}

fn ps(name: &'static str, default: f64, range: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default,
        range,
    }
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    use ModelSpace::*;
    let e3 = Euclid(3);
    let s3 = Sphere(3);
    let h3 = Hyperbolic(3);
    vec![
        entry("plane-r3", e3, vec![], "H=0", "e3", (true, true, true)),
        entry(
            "sphere-r3",
            e3,
            vec![ps("r", 1.0, "r>0")],
            "H=1/r",
            "inward",
            (true, true, true),
        ),
        entry(
            "cylinder-r3",
            e3,
            vec![ps("r", 1.0, "r>0")],
            "H=1/(2r)",
            "inward",
            (true, true, true),
        ),
        entry(
            "ellipsoid-r3",
            e3,
            vec![
                ps("a", 1.0, "a>0"),
                ps("b", 1.25, "b>0"),
                ps("c", 1.5, "c>0"),
            ],
            "H=(a²+b²+c²−|p|²)/(2a²b²c²(x²/a⁴+y²/b⁴+z²/c⁴)^{3/2})",
            "inward",
            (false, false, true),
        ),
        entry("great-sphere-s3", s3, vec![], "H=0", "e4", (true, true, true)),
        entry(
            "geodesic-sphere-s3",
            s3,
            vec![ps("rho", 0.7, "0<rho<pi")],
            "H=|cot rho|",
            "toward the center e4 (for rho<pi/2)",
            (true, true, true),
        ),
        entry(
            "clifford-torus",
            s3,
            vec![],
            "H=0",
            "fixed at the domain center",
            (true, true, true),
        ),
        entry(
            "geodesic-sphere-h3",
            h3,
            vec![ps("rho", 0.7, "rho>0")],
            "H=coth rho",
            "inward",
            (true, true, true),
        ),
        entry(
            "equidistant-h3",
            h3,
            vec![ps("d", 0.5, "d>=0")],
            "H=tanh d",
            "(sinh d q, cosh d)",
            (true, true, true),
        ),
        entry("horosphere", h3, vec![], "H=1", "toward the ideal point", (true, true, true)),
        entry("slice-h2xr", HypProd, vec![], "H=0", "∂t", (true, true, true)),
        entry(
            "vertical-plane-h2xr",
            HypProd,
            vec![],
            "H=0",
            "e3",
            (true, true, true),
        ),
        entry(
            "vertical-cylinder-h2xr",
            HypProd,
            vec![ps("kg", 2.0, "kg>1")],
            "H=kg/2",
            "inward",
            (true, true, true),
        ),
        entry(
            "vertical-graph-h2xr",
            HypProd,
            vec![],
            "none (t = 0.3uv+0.2u over the disk model)",
            "H>0 at the domain center",
            (false, false, true),
        ),
        entry("slice-s2xr", SphereProd, vec![], "H=0", "∂t", (true, true, true)),
        entry(
            "vertical-cylinder-s2xr",
            SphereProd,
            vec![ps("kg", 1.0, "kg>=0")],
            "H=kg/2",
            "toward the center e1",
            (true, true, true),
        ),
    ]
}

/// Unit 2-sphere, conformal chart centered at e₁.
fn s2(u: T3, v: T3) -> [T3; 3] {
    let r2 = u * u + v * v;
    let den = (r2 + 1.0).recip();
    [(1.0 - r2) * den, 2.0 * u * den, 2.0 * v * den]
}

/// Hyperboloid ℍ², conformal (disk) chart centered at e₁.
fn h2(u: T3, v: T3) -> [T3; 3] {
    let r2 = u * u + v * v;
    let den = (1.0 - r2).recip();
    [(1.0 + r2) * den, 2.0 * u * den, 2.0 * v * den]
}

fn closed(u: (f64, f64), v: (f64, f64)) -> Domain {
    Domain {
        u,
        v,
        periodic_u: false,
        periodic_v: false,
        nu: DEFAULT_GRID,
        nv: DEFAULT_GRID,
    }
}

fn level(f: impl Fn(&DVector<f64>) -> f64 + Send + Sync + 'static) -> Option<LevelFn> {
    Some(Arc::new(f))
}

fn constant_h(h: f64) -> Option<MeanCurvatureFn> {
    Some(Arc::new(move |_, _| h))
}

fn read(
    name: &str,
    specs: &[ParamSpec],
    given: &Params,
) -> Result<Vec<(String, f64)>> {
    for k in given.keys() {
        if !specs.iter().any(|s| s.name == k) {
            return Err(GeomError::InvalidParameter(format!(
                "{name} has no parameter '{k}'"
            )));
        }
    }
    Ok(specs
        .iter()
        .map(|s| (s.name.to_string(), *given.get(s.name).unwrap_or(&s.default)))
        .collect())
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(GeomError::InvalidParameter(msg()))
    }
}

/// Build a catalog surface by name; missing parameters take their defaults.
pub fn catalog(name: &str, given: &Params) -> Result<ParamSurface> {
    let entries = catalog_entries();
    let e = entries
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| GeomError::UnknownSurface(name.to_string()))?;
    let params = read(name, &e.params, given)?;
    let get = |k: &str| params.iter().find(|(n, _)| n == k).map(|(_, v)| *v).unwrap();
    let space = ModelSpace::from_label(&e.space).expect("catalog labels are valid");

    let (param, domain, level_set, exact_h): (ParamFn, Domain, Option<LevelFn>, Option<MeanCurvatureFn>) =
        match name {
            "plane-r3" => (
                Arc::new(|u, v| vec![u, v, T3::constant(0.0)]),
                closed((-1.0, 1.0), (-1.0, 1.0)),
                level(|p| p[2]),
                constant_h(0.0),
            ),
            "sphere-r3" => {
                let r = get("r");
                require(r > 0.0, || format!("sphere-r3 needs r > 0, got {r}"))?;
                (
                    Arc::new(move |u, v| s2(u, v).iter().map(|x| *x * r).collect()),
                    closed((-0.8, 0.8), (-0.8, 0.8)),
                    level(move |p| p.norm_squared() - r * r),
                    constant_h(1.0 / r),
                )
            }
            "cylinder-r3" => {
                let r = get("r");
                require(r > 0.0, || format!("cylinder-r3 needs r > 0, got {r}"))?;
                (
                    Arc::new(move |u, v| {
                        let th = u / r;
                        vec![th.cos() * r, th.sin() * r, v]
                    }),
                    Domain {
                        periodic_u: true,
                        ..closed((0.0, 2.0 * PI * r), (-1.0, 1.0))
                    },
                    level(move |p| p[0] * p[0] + p[1] * p[1] - r * r),
                    constant_h(0.5 / r),
                )
            }
            "ellipsoid-r3" => {
                let (a, b, c) = (get("a"), get("b"), get("c"));
                require(a > 0.0 && b > 0.0 && c > 0.0, || {
                    format!("ellipsoid-r3 needs positive semi-axes, got {a}, {b}, {c}")
                })?;
                let h: MeanCurvatureFn = Arc::new(move |u, v| {
                    let (x, y, z) = (a * v.sin() * u.cos(), b * v.sin() * u.sin(), c * v.cos());
                    let q = x * x / a.powi(4) + y * y / b.powi(4) + z * z / c.powi(4);
                    let num = a * a + b * b + c * c - (x * x + y * y + z * z);
                    num / (2.0 * a * a * b * b * c * c * q.powf(1.5))
                });
                (
                    Arc::new(move |u, v| {
                        vec![v.sin() * u.cos() * a, v.sin() * u.sin() * b, v.cos() * c]
                    }),
                    Domain {
                        periodic_u: true,
                        ..closed((0.0, 2.0 * PI), (0.3, PI - 0.3))
                    },
                    level(move |p| {
                        (p[0] / a).powi(2) + (p[1] / b).powi(2) + (p[2] / c).powi(2) - 1.0
                    }),
                    Some(h),
                )
            }
            "great-sphere-s3" => (
                Arc::new(|u, v| {
                    let [a, b, c] = s2(u, v);
                    vec![a, b, c, T3::constant(0.0)]
                }),
                closed((-0.8, 0.8), (-0.8, 0.8)),
                level(|p| p[3]),
                constant_h(0.0),
            ),
            "geodesic-sphere-s3" => {
                let rho = get("rho");
                require(rho > 0.0 && rho < PI, || {
                    format!("geodesic-sphere-s3 needs 0 < rho < pi, got {rho}")
                })?;
                let (sr, cr) = rho.sin_cos();
                (
                    Arc::new(move |u, v| {
                        let [a, b, c] = s2(u, v);
                        vec![a * sr, b * sr, c * sr, T3::constant(cr)]
                    }),
                    closed((-0.8, 0.8), (-0.8, 0.8)),
                    level(move |p| p[3] - cr),
                    constant_h((cr / sr).abs()),
                )
            }
            "clifford-torus" => {
                let k = std::f64::consts::FRAC_1_SQRT_2;
                (
                    Arc::new(move |u, v| vec![u.cos() * k, u.sin() * k, v.cos() * k, v.sin() * k]),
                    Domain {
                        periodic_u: true,
                        periodic_v: true,
                        ..closed((0.0, 2.0 * PI), (0.0, 2.0 * PI))
                    },
                    level(|p| p[0] * p[0] + p[1] * p[1] - 0.5),
                    constant_h(0.0),
                )
            }
            "geodesic-sphere-h3" => {
                let rho = get("rho");
                require(rho > 0.0, || format!("geodesic-sphere-h3 needs rho > 0, got {rho}"))?;
                let (sh, ch) = (rho.sinh(), rho.cosh());
                (
                    Arc::new(move |u, v| {
                        let [a, b, c] = s2(u, v);
                        vec![T3::constant(ch), a * sh, b * sh, c * sh]
                    }),
                    closed((-0.8, 0.8), (-0.8, 0.8)),
                    level(move |p| p[0] - ch),
                    constant_h(ch / sh),
                )
            }
            "equidistant-h3" => {
                let d = get("d");
                require(d >= 0.0 && d.is_finite(), || {
                    format!("equidistant-h3 needs finite d >= 0, got {d}")
                })?;
                let (sh, ch) = (d.sinh(), d.cosh());
                (
                    Arc::new(move |u, v| {
                        let [a, b, c] = h2(u, v);
                        vec![a * ch, b * ch, c * ch, T3::constant(sh)]
                    }),
                    closed((-0.4, 0.4), (-0.4, 0.4)),
                    level(move |p| p[3] - sh),
                    constant_h(d.tanh()),
                )
            }
            "horosphere" => (
                Arc::new(|u, v| {
                    let s = (u * u + v * v) * 0.5;
                    vec![s + 1.0, s, u, v]
                }),
                closed((-1.0, 1.0), (-1.0, 1.0)),
                level(|p| p[1] - p[0] + 1.0),
                constant_h(1.0),
            ),
            "slice-h2xr" => (
                Arc::new(|u, v| {
                    let [a, b, c] = h2(u, v);
                    vec![a, b, c, T3::constant(0.0)]
                }),
                closed((-0.4, 0.4), (-0.4, 0.4)),
                level(|p| p[3]),
                constant_h(0.0),
            ),
            "vertical-plane-h2xr" => (
                Arc::new(|u: T3, v| vec![u.cosh(), u.sinh(), T3::constant(0.0), v]),
                closed((-1.0, 1.0), (-1.0, 1.0)),
                level(|p| p[2]),
                constant_h(0.0),
            ),
            "vertical-cylinder-h2xr" => {
                let kg = get("kg");
                require(kg > 1.0, || {
                    format!("vertical-cylinder-h2xr needs kg > 1 (a circle), got {kg}")
                })?;
                let radius = (1.0 / kg).atanh();
                let (sh, ch) = (radius.sinh(), radius.cosh());
                (
                    Arc::new(move |u, v| {
                        let th = u / sh;
                        vec![T3::constant(ch), th.cos() * sh, th.sin() * sh, v]
                    }),
                    Domain {
                        periodic_u: true,
                        ..closed((0.0, 2.0 * PI * sh), (-1.0, 1.0))
                    },
                    level(move |p| p[0] - ch),
                    constant_h(0.5 * kg),
                )
            }
            "vertical-graph-h2xr" => (
                Arc::new(|u, v| {
                    let [a, b, c] = h2(u, v);
                    vec![a, b, c, u * v * 0.3 + u * 0.2]
                }),
                closed((-0.4, 0.4), (-0.4, 0.4)),
                level(|p| {
                    let (x, y) = (p[1] / (1.0 + p[0]), p[2] / (1.0 + p[0]));
                    p[3] - (0.3 * x * y + 0.2 * x)
                }),
                None,
            ),
            "slice-s2xr" => (
                Arc::new(|u, v| {
                    let [a, b, c] = s2(u, v);
                    vec![a, b, c, T3::constant(0.0)]
                }),
                closed((-0.8, 0.8), (-0.8, 0.8)),
                level(|p| p[3]),
                constant_h(0.0),
            ),
            "vertical-cylinder-s2xr" => {
                let kg = get("kg");
                require(kg >= 0.0 && kg.is_finite(), || {
                    format!("vertical-cylinder-s2xr needs finite kg >= 0, got {kg}")
                })?;
                // polar angle of the circle around e1: cot φ₀ = kg
                let phi0 = (1.0 / kg).atan();
                let (s, c) = phi0.sin_cos();
                (
                    Arc::new(move |u, v| {
                        let th = u / s;
                        vec![T3::constant(c), th.cos() * s, th.sin() * s, v]
                    }),
                    Domain {
                        periodic_u: true,
                        ..closed((0.0, 2.0 * PI * s), (-1.0, 1.0))
                    },
                    level(move |p| p[0] - c),
                    constant_h(0.5 * kg),
                )
            }
            _ => unreachable!("entry list and constructors agree"),
        };

    let mut surface = ParamSurface::new(name, space, params, domain, param)?;
    surface.is_conformal = e.conformal;
    surface.is_cmc = e.cmc;
    surface.level_set = level_set;
    surface.exact_h = exact_h;
    Ok(surface)
}
