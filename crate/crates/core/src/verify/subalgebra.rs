use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{tol, CheckOptions};
use crate::algebra::{algebra_inner, bracket, AlgebraElement, AlgebraKind};
use crate::ambient::ModelSpace;
use crate::calculus::{Boundary, GridField};
use crate::error::{GeomError, Result};
use crate::gaussmap::gamma_unchecked;
use crate::report::{num, CheckReport};
use crate::surface::ParamSurface;

pub const KILLING_PRESETS: [&str; 4] = ["vertical", "axis-rotation", "hyperbolic-translation", "parabolic"];

/// Named Killing generators.
///
/// | preset                   | space        | element                         |
/// |--------------------------|--------------|---------------------------------|
/// | `vertical`               | M²×ℝ         | (0, 1)                          |
/// | `axis-rotation`          | M²×ℝ         | (√2/2)(E₃₂ − E₂₃), fixes e₁     |
/// | `hyperbolic-translation` | ℍ³           | E₁₄ + E₄₁ (E₁₂ + E₂₁ on the horosphere) |
/// | `hyperbolic-translation` | ℍ²×ℝ         | E₁₂ + E₂₁                       |
/// | `parabolic`              | ℍ³           | E₁₃ + E₃₁ + E₂₃ − E₃₂           |
///
/// Indices are 1-based matrix positions.
pub fn killing_preset(s: &ParamSurface, name: &str) -> Result<AlgebraElement> {
    let kind = s.space.algebra_kind();
    let m = kind.matrix_size();
    let mut el = AlgebraElement::zero(kind);
    let unsupported = || {
        Err(GeomError::InvalidParameter(format!(
            "Killing preset '{name}' is not defined on {}",
            s.space.label()
        )))
    };
    match (name, s.space) {
        ("vertical", ModelSpace::SphereProd | ModelSpace::HypProd) => el.line[0] = 1.0,
        ("axis-rotation", ModelSpace::SphereProd | ModelSpace::HypProd) => {
            let c = std::f64::consts::FRAC_1_SQRT_2;
            el.mat[(2, 1)] = c;
            el.mat[(1, 2)] = -c;
        }
        ("hyperbolic-translation", ModelSpace::Hyperbolic(3)) => {
            let k = if s.name == "horosphere" { 1 } else { m - 1 };
            el.mat[(0, k)] = 1.0;
            el.mat[(k, 0)] = 1.0;
        }
        ("hyperbolic-translation", ModelSpace::HypProd) => {
            el.mat[(0, 1)] = 1.0;
            el.mat[(1, 0)] = 1.0;
        }
        ("parabolic", ModelSpace::Hyperbolic(3)) => {
            el.mat[(0, 2)] = 1.0;
            el.mat[(2, 0)] = 1.0;
            el.mat[(1, 2)] = 1.0;
            el.mat[(2, 1)] = -1.0;
        }
        _ if KILLING_PRESETS.contains(&name) => return unsupported(),
        _ => {
            return Err(GeomError::InvalidParameter(format!(
                "unknown Killing preset '{name}' (known: {})",
                KILLING_PRESETS.join(", ")
            )))
        }
    }
    Ok(el)
}

#[derive(Debug, Clone)]
pub struct SubalgebraResult {
    /// Orthonormal (in coordinates) basis of the annihilator of 𝒩(M).
    pub basis: Vec<AlgebraElement>,
    /// Numerical rank of span{𝒩(pᵢ)}.
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// Ratio between the last kept and the first dropped singular value.
    pub gap: f64,
    /// Set when the gap is below 10×.
    pub ambiguous: bool,
    pub bracket_closure_residual: f64,
    pub invariance_residuals: Vec<f64>,
    /// max |⟨w, 𝒩(pᵢ)⟩| over basis elements and samples.
    pub pairing_residual: f64,
}

/// Relative singular-value cutoff for the rank decision.
const RANK_CUTOFF: f64 = 1e-8;

/// Annihilator of the sampled Gauss image, by SVD of the coordinate
/// constraint matrix Mᵢₖ = ⟨eₖ, 𝒩(pᵢ)⟩.
pub fn perp_subalgebra(s: &ParamSurface, sample_count: usize, opts: &CheckOptions) -> Result<SubalgebraResult> {
    let kind = s.space.algebra_kind();
    let dim = kind.dim();
    if sample_count < dim {
        return Err(GeomError::InvalidParameter(format!(
            "need at least {dim} samples, got {sample_count}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let d = s.domain;
    let mut gauss = Vec::with_capacity(sample_count);
    for _ in 0..sample_count {
        let u = rng.random_range(d.u.0..d.u.1);
        let v = rng.random_range(d.v.0..d.v.1);
        let jet = s.jet(u, v)?;
        gauss.push(gamma_unchecked(s.space, &jet.p, &jet.eta));
    }
    let basis_el: Vec<_> = (0..dim).map(|k| AlgebraElement::basis(kind, k)).collect();
    let m = DMatrix::from_fn(sample_count, dim, |i, k| {
        algebra_inner(&basis_el[k], &gauss[i]).expect("same kind")
    });
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let cutoff = RANK_CUTOFF * sv[0].max(1.0);
    let rank = sv.iter().filter(|&&x| x > cutoff).count();
    let gap = if rank == 0 || rank == dim {
        f64::INFINITY
    } else {
        sv[rank - 1] / sv[rank].max(f64::MIN_POSITIVE)
    };
    let basis: Vec<AlgebraElement> = order[rank..]
        .iter()
        .map(|&k| {
            let row: Vec<f64> = v_t.row(k).iter().copied().collect();
            AlgebraElement::from_coords(kind, &row).expect("full coordinate row")
        })
        .collect();

    let pairing_residual = basis
        .iter()
        .flat_map(|w| gauss.iter().map(move |n| algebra_inner(w, n).unwrap().abs()))
        .fold(0.0, f64::max);
    let bracket_closure_residual = closure_residual(kind, &basis)?;
    let invariance_residuals = if s.level_set.is_some() {
        basis
            .iter()
            .map(|w| invariance_max(s, w, &opts.t_grid, opts))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(SubalgebraResult {
        basis,
        rank,
        singular_values: sv,
        gap,
        ambiguous: gap < 10.0,
        bracket_closure_residual,
        invariance_residuals,
        pairing_residual,
    })
}

/// max over pairs of |[w_a, w_b] − P[w_a, w_b]| with P the coordinate
/// projector onto span(basis).
fn closure_residual(kind: AlgebraKind, basis: &[AlgebraElement]) -> Result<f64> {
    if basis.is_empty() {
        return Ok(0.0);
    }
    let dim = kind.dim();
    let b = DMatrix::from_fn(dim, basis.len(), |r, c| basis[c].coords()[r]);
    let mut worst = 0.0f64;
    for a in 0..basis.len() {
        for c in (a + 1)..basis.len() {
            let br = bracket(&basis[a], &basis[c])?.coords();
            let proj: DVector<f64> = &b * (b.transpose() * &br);
            worst = worst.max((br - proj).norm());
        }
    }
    Ok(worst)
}

fn invariance_grid(s: &ParamSurface, v: &AlgebraElement, t_grid: &[f64], opts: &CheckOptions) -> Result<GridField<Option<f64>>> {
    let level = s
        .level_set
        .clone()
        .ok_or_else(|| GeomError::MissingLevelSet(s.name.clone()))?;
    if v.kind != s.space.algebra_kind() {
        return Err(GeomError::KindMismatch {
            left: v.kind,
            right: s.space.algebra_kind(),
        });
    }
    let flows: Vec<_> = t_grid.iter().map(|&t| v.exp(t)).collect();
    for g in &flows {
        let r = s.space.group_residual(g);
        if r > 1e-8 {
            return Err(GeomError::FormNotPreserved { residual: r });
        }
    }
    let d = opts.domain(s);
    let nv = d.nv;
    let values = opts.exec.map(d.nu * nv, |k| {
        let (u, v) = d.node(k / nv, k % nv);
        let p = s.position(u, v);
        let worst = flows
            .iter()
            .map(|g| {
                s.space
                    .isometry_action(g, &p)
                    .map(|q| level(&q).abs())
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max);
        Some(worst)
    });
    Ok(GridField {
        nu: d.nu,
        nv,
        boundary: Boundary::from_flags(d.periodic_u, d.periodic_v),
        values,
    })
}

fn invariance_max(s: &ParamSurface, v: &AlgebraElement, t_grid: &[f64], opts: &CheckOptions) -> Result<f64> {
    let g = invariance_grid(s, v, t_grid, opts)?;
    Ok(g.values.iter().flatten().fold(0.0, |a: f64, &b| a.max(b)))
}

/// Flow the grid by exp(tV) for t in `t_grid` and report |level_set| of
/// the moved points.
pub fn invariance_check(s: &ParamSurface, v: &AlgebraElement, t_grid: &[f64], opts: &CheckOptions) -> Result<CheckReport> {
    let g = invariance_grid(s, v, t_grid, opts)?;
    let mut report = opts.report("invariance", s);
    report.richardson = false;
    report.push_grid("level_set", g, Some(opts.tol("level_set", tol::INVARIANCE)))?;
    let coords: Vec<_> = v.coords().iter().map(|&x| num(x)).collect();
    report.push_meta("killing_coords", coords);
    let (t0, t1) = t_grid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));
    report.push_meta("t_range", vec![num(t0), num(t1)]);
    Ok(report)
}

fn scalar(v: f64) -> GridField<Option<f64>> {
    GridField::from_fn(1, 1, Boundary::InteriorOnly, |_, _| Some(v))
}

impl SubalgebraResult {
    /// Report view: closure, pairing and per-element invariance residuals.
    pub fn to_report(&self, s: &ParamSurface, opts: &CheckOptions) -> Result<CheckReport> {
        let mut r = opts.report("perp", s);
        r.richardson = false;
        r.domain = None;
        r.push_grid(
            "closure",
            scalar(self.bracket_closure_residual),
            Some(opts.tol("closure", tol::CLOSURE)),
        )?;
        r.push_grid(
            "pairing",
            scalar(self.pairing_residual),
            Some(opts.tol("pairing", tol::CLOSURE)),
        )?;
        for (k, x) in self.invariance_residuals.iter().enumerate() {
            r.push_grid(
                &format!("invariance_{k}"),
                scalar(*x),
                Some(opts.tol("invariance", tol::INVARIANCE)),
            )?;
        }
        r.push_grid("rank_gap", scalar(if self.gap.is_finite() { self.gap } else { 0.0 }), None)?;
        r.push_meta("dimension", self.basis.len());
        r.push_meta("rank", self.rank);
        r.push_meta("ambiguous", self.ambiguous);
        r.push_meta(
            "singular_values",
            self.singular_values.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        );
        r.push_meta(
            "basis",
            self.basis
                .iter()
                .map(|w| w.coords().iter().map(|&x| num(x)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        );
        if self.ambiguous {
            // flagged, not resolved
            r.push_grid("rank_ambiguity", scalar(1.0), Some(0.0))?;
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{catalog, Params};

    fn perp(name: &str) -> (ParamSurface, SubalgebraResult) {
        let s = catalog(name, &Params::new()).unwrap().with_grid(16, 16);
        let r = perp_subalgebra(&s, 64, &CheckOptions::default()).unwrap();
        (s, r)
    }

    #[test]
    fn dimensions_of_known_symmetry_algebras() {
        for (name, dim) in [
            ("great-sphere-s3", 3),
            ("horosphere", 3),
            ("vertical-cylinder-h2xr", 2),
            ("vertical-cylinder-s2xr", 2),
            ("ellipsoid-r3", 0),
        ] {
            let (_, r) = perp(name);
            assert_eq!(r.basis.len(), dim, "{name}: {:?}", r.singular_values);
            assert!(!r.ambiguous, "{name}");
            assert!(r.bracket_closure_residual < 1e-8, "{name}");
            assert!(r.invariance_residuals.iter().all(|&x| x < 1e-8), "{name}");
        }
    }

    #[test]
    fn cylinder_perp_contains_rotation_and_vertical() {
        let (s, r) = perp("vertical-cylinder-h2xr");
        for preset in ["vertical", "axis-rotation"] {
            let v = killing_preset(&s, preset).unwrap().coords();
            let b = DMatrix::from_fn(v.len(), r.basis.len(), |i, k| r.basis[k].coords()[i]);
            let off = &v - &b * (b.transpose() * &v);
            assert!(off.norm() < 1e-8, "{preset}");
        }
    }

    #[test]
    fn random_generator_moves_the_surface() {
        let s = catalog("horosphere", &Params::new()).unwrap().with_grid(8, 8);
        let v = AlgebraElement::from_coords(s.space.algebra_kind(), &[0.3, -0.2, 0.5, 0.1, 0.7, -0.4]).unwrap();
        let r = invariance_check(&s, &v, &[-1.0, 0.0, 1.0], &CheckOptions::default()).unwrap();
        assert!(!r.passed());
        let p = killing_preset(&s, "parabolic").unwrap();
        let r = invariance_check(&s, &p, &[-1.0, 0.5, 1.0], &CheckOptions::default()).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn too_few_samples_and_missing_presets() {
        let s = catalog("great-sphere-s3", &Params::new()).unwrap();
        assert!(perp_subalgebra(&s, 3, &CheckOptions::default()).is_err());
        assert!(killing_preset(&s, "vertical").is_err());
        assert!(killing_preset(&s, "spin").is_err());
    }
}
