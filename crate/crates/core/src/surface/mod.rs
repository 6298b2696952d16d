//! Parametrized surfaces, their jets and fundamental forms.

mod catalog;

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::ambient::ModelSpace;
use crate::error::{GeomError, Result};
use crate::taylor::T3;

pub use catalog::{catalog, catalog_entries, CatalogEntry, ParamSpec, Params};

/// Parametrization evaluated on truncated Taylor series.
pub type ParamFn = Arc<dyn Fn(T3, T3) -> Vec<T3> + Send + Sync>;
/// Scalar function on embedding coordinates.
pub type LevelFn = Arc<dyn Fn(&DVector<f64>) -> f64 + Send + Sync>;
/// Closed-form mean curvature as a function of the parameters.
pub type MeanCurvatureFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Minimum Gram determinant accepted as an immersion.
pub const IMMERSION_TOL: f64 = 1e-10;

/// Parameter rectangle with sampling sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u: (f64, f64),
    pub v: (f64, f64),
    pub periodic_u: bool,
    pub periodic_v: bool,
    pub nu: usize,
    pub nv: usize,
}

impl Domain {
    pub fn du(&self) -> f64 {
        step(self.u, self.nu, self.periodic_u)
    }

    pub fn dv(&self) -> f64 {
        step(self.v, self.nv, self.periodic_v)
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.u.0 + i as f64 * self.du(), self.v.0 + j as f64 * self.dv())
    }

    /// The node closest to the middle of the rectangle.
    pub fn center_node(&self) -> (usize, usize) {
        (self.nu / 2, self.nv / 2)
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u.0 + self.u.1), 0.5 * (self.v.0 + self.v.1))
    }

    /// Same rectangle with the spacing halved: 2N−1 nodes on closed axes,
    /// 2N on periodic ones, so every coarse node is an even fine node.
    pub fn refined(&self) -> Domain {
        let r = |n: usize, periodic: bool| if periodic { 2 * n } else { 2 * n - 1 };
        Domain {
            nu: r(self.nu, self.periodic_u),
            nv: r(self.nv, self.periodic_v),
            ..*self
        }
    }
}

fn step(range: (f64, f64), n: usize, periodic: bool) -> f64 {
    let len = range.1 - range.0;
    if periodic {
        len / n as f64
    } else {
        len / (n as f64 - 1.0)
    }
}

/// Everything known about the immersion at one parameter point.
#[derive(Debug, Clone)]
pub struct SurfaceJet {
    pub p: DVector<f64>,
    pub fu: DVector<f64>,
    pub fv: DVector<f64>,
    pub fuu: DVector<f64>,
    pub fuv: DVector<f64>,
    pub fvv: DVector<f64>,
    pub eta: DVector<f64>,
    /// First fundamental form.
    pub g: Matrix2<f64>,
    /// ∂_u g and ∂_v g.
    pub g_du: Matrix2<f64>,
    pub g_dv: Matrix2<f64>,
    /// Second fundamental form b_ij = ⟨F_ij, η⟩.
    pub b: Matrix2<f64>,
    /// Shape operator in the coordinate basis, g⁻¹b.
    pub a: Matrix2<f64>,
    pub h: f64,
    /// Intrinsic Gauss curvature (from the metric alone).
    pub k: f64,
    /// Ambient sectional curvature of the tangent plane.
    pub k_ambient: f64,
    pub b2: f64,
    /// ⟨η, ∂_t⟩ on products, 0 elsewhere.
    pub nu: f64,
}

impl SurfaceJet {
    pub fn g_inv(&self) -> Matrix2<f64> {
        self.g.try_inverse().expect("immersion has invertible metric")
    }

    /// Γᵏᵢⱼ indexed as `[k][i][j]`.
    pub fn christoffel(&self) -> [[[f64; 2]; 2]; 2] {
        let gi = self.g_inv();
        let dg = [self.g_du, self.g_dv];
        let mut out = [[[0.0; 2]; 2]; 2];
        for (k, ok) in out.iter_mut().enumerate() {
            for (i, oki) in ok.iter_mut().enumerate() {
                for (j, okij) in oki.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for l in 0..2 {
                        s += gi[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                    }
                    *okij = 0.5 * s;
                }
            }
        }
        out
    }

    /// Tangent vector X = xᵘ F_u + xᵛ F_v.
    pub fn tangent(&self, x: [f64; 2]) -> DVector<f64> {
        &self.fu * x[0] + &self.fv * x[1]
    }

    /// Gauss-equation residual |B2 − 4H² + 2(K − K̃)|.
    pub fn gauss_equation_residual(&self) -> f64 {
        (self.b2 - 4.0 * self.h * self.h + 2.0 * (self.k - self.k_ambient)).abs()
    }

    /// Largest deviation from conformality |E − G| + |F|.
    pub fn conformality_residual(&self) -> f64 {
        (self.g[(0, 0)] - self.g[(1, 1)]).abs() + self.g[(0, 1)].abs()
    }
}

/// An immersed surface patch in one of the model spaces.
#[derive(Clone)]
pub struct ParamSurface {
    pub name: String,
    pub space: ModelSpace,
    pub params: Vec<(String, f64)>,
    pub domain: Domain,
    pub is_conformal: bool,
    pub level_set: Option<LevelFn>,
    /// Closed-form H, when known.
    pub exact_h: Option<MeanCurvatureFn>,
    pub is_cmc: bool,
    param: ParamFn,
    orientation: f64,
}

impl fmt::Debug for ParamSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamSurface")
            .field("name", &self.name)
            .field("space", &self.space)
            .field("params", &self.params)
            .field("domain", &self.domain)
            .field("is_conformal", &self.is_conformal)
            .field("is_cmc", &self.is_cmc)
            .finish()
    }
}

impl ParamSurface {
    /// Build a surface and fix its normal orientation: H > 0 at the center
    /// of the domain, or, for minimal centers, the largest component of η
    /// positive.
    pub fn new(
        name: impl Into<String>,
        space: ModelSpace,
        params: Vec<(String, f64)>,
        domain: Domain,
        param: ParamFn,
    ) -> Result<Self> {
        let mut s = ParamSurface {
            name: name.into(),
            space,
            params,
            domain,
            is_conformal: false,
            level_set: None,
            exact_h: None,
            is_cmc: false,
            param,
            orientation: 1.0,
        };
        let (uc, vc) = domain.center();
        let jet = s.jet(uc, vc)?;
        s.orientation = if jet.h.abs() > 1e-9 {
            jet.h.signum()
        } else {
            let k = jet.eta.iamax();
            jet.eta[k].signum()
        };
        Ok(s)
    }

    pub fn with_grid(mut self, nu: usize, nv: usize) -> Self {
        self.domain.nu = nu;
        self.domain.nv = nv;
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// F(u,v).
    pub fn position(&self, u: f64, v: f64) -> DVector<f64> {
        let f = (self.param)(T3::constant(u), T3::constant(v));
        DVector::from_iterator(f.len(), f.iter().map(|t| t.value()))
    }

    /// All partial derivatives of F up to order three: index `[i][j]` holds
    /// ∂ᵤⁱ∂ᵥʲF for i + j ≤ 3.
    pub fn derivatives(&self, u: f64, v: f64) -> Vec<Vec<DVector<f64>>> {
        let f = (self.param)(T3::var_u(u), T3::var_v(v));
        (0..=3)
            .map(|i| {
                (0..=3 - i)
                    .map(|j| DVector::from_iterator(f.len(), f.iter().map(|t| t.d(i, j))))
                    .collect()
            })
            .collect()
    }

    /// The full jet at (u, v), with the catalog's normal orientation.
    pub fn jet(&self, u: f64, v: f64) -> Result<SurfaceJet> {
        let d = self.derivatives(u, v);
        let sp = self.space;
        let ip = |a: &DVector<f64>, b: &DVector<f64>| sp.form(a, b);
        let (p, fu, fv) = (&d[0][0], &d[1][0], &d[0][1]);
        let (fuu, fuv, fvv) = (&d[2][0], &d[1][1], &d[0][2]);
        let (fuuv, fuvv) = (&d[2][1], &d[1][2]);

        let e = ip(fu, fu);
        let f = ip(fu, fv);
        let gg = ip(fv, fv);
        let det = e * gg - f * f;
        if det <= IMMERSION_TOL {
            return Err(GeomError::DegenerateImmersion { u, v, det });
        }
        let e_u = 2.0 * ip(fuu, fu);
        let e_v = 2.0 * ip(fuv, fu);
        let f_u = ip(fuu, fv) + ip(fu, fuv);
        let f_v = ip(fuv, fv) + ip(fu, fvv);
        let g_u = 2.0 * ip(fuv, fv);
        let g_v = 2.0 * ip(fvv, fv);
        let e_vv = 2.0 * ip(fuvv, fu) + 2.0 * ip(fuv, fuv);
        let g_uu = 2.0 * ip(fuuv, fv) + 2.0 * ip(fuv, fuv);
        let f_uv = ip(fuuv, fv) + ip(fuu, fvv) + ip(fuv, fuv) + ip(fu, fuvv);

        // Brioschi
        let m1 = nalgebra::Matrix3::new(
            -0.5 * e_vv + f_uv - 0.5 * g_uu,
            0.5 * e_u,
            f_u - 0.5 * e_v,
            f_v - 0.5 * g_u,
            e,
            f,
            0.5 * g_v,
            f,
            gg,
        );
        let m2 = nalgebra::Matrix3::new(0.0, 0.5 * e_v, 0.5 * g_u, 0.5 * e_v, e, f, 0.5 * g_u, f, gg);
        let k = (m1.determinant() - m2.determinant()) / (det * det);

        let eta = self.normal(p, fu, fv)? * self.orientation;
        let g = Matrix2::new(e, f, f, gg);
        let b = Matrix2::new(ip(fuu, &eta), ip(fuv, &eta), ip(fuv, &eta), ip(fvv, &eta));
        let gi = g.try_inverse().ok_or(GeomError::DegenerateImmersion { u, v, det })?;
        let a = gi * b;
        let h = 0.5 * a.trace();
        let b2 = (a * a).trace();
        let k_ambient = sp.sectional(p, fu, fv)?;
        let nu = if sp.is_product() { eta[3] } else { 0.0 };
        Ok(SurfaceJet {
            p: p.clone(),
            fu: fu.clone(),
            fv: fv.clone(),
            fuu: fuu.clone(),
            fuv: fuv.clone(),
            fvv: fvv.clone(),
            eta,
            g,
            g_du: Matrix2::new(e_u, f_u, f_u, g_u),
            g_dv: Matrix2::new(e_v, f_v, f_v, g_v),
            b,
            a,
            h,
            k,
            k_ambient,
            b2,
            nu,
        })
    }

    /// Jet at grid node (i, j).
    pub fn frame_at(&self, i: usize, j: usize) -> Result<SurfaceJet> {
        let (u, v) = self.domain.node(i, j);
        self.jet(u, v)
    }

    /// Unit normal, orthogonal (in the model's form) to F_u, F_v and to the
    /// model's own normal, before orientation.
    fn normal(&self, p: &DVector<f64>, fu: &DVector<f64>, fv: &DVector<f64>) -> Result<DVector<f64>> {
        let sp = self.space;
        let diag = sp.form_diag();
        let mut rows = vec![fu.component_mul(&diag), fv.component_mul(&diag)];
        if let Some(n) = sp.embedding_normal(p) {
            rows.push(n.component_mul(&diag));
        }
        let dim = sp.embedding_dim();
        if rows.len() + 1 != dim {
            return Err(GeomError::Unsupported(format!(
                "surfaces of codimension > 1 in {}",
                sp.label()
            )));
        }
        let m = DMatrix::from_fn(rows.len(), dim, |r, c| rows[r][c]);
        let w = DVector::from_fn(dim, |i, _| {
            let minor = m.clone().remove_column(i);
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * minor.determinant()
        });
        let n2 = sp.form(&w, &w);
        if n2 <= 0.0 {
            return Err(GeomError::DegenerateImmersion {
                u: f64::NAN,
                v: f64::NAN,
                det: n2,
            });
        }
        Ok(w / n2.sqrt())
    }

    /// Domain nodes as (i, j) in row-major order (i slow).
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nv = self.domain.nv;
        (0..self.domain.nu * nv).map(move |k| (k / nv, k % nv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surf(name: &str, params: &[(&str, f64)]) -> ParamSurface {
        let p: Params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        catalog(name, &p).unwrap()
    }

    #[test]
    fn round_sphere_invariants() {
        let s = surf("sphere-r3", &[("r", 2.0)]);
        let j = s.jet(0.3, -0.2).unwrap();
        assert!((j.h - 0.5).abs() < 1e-12);
        assert!((j.k - 0.25).abs() < 1e-12);
        assert!((j.b2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn clifford_torus_invariants() {
        let s = surf("clifford-torus", &[]);
        let j = s.jet(0.4, 1.1).unwrap();
        assert!(j.h.abs() < 1e-12);
        assert!((j.b2 - 2.0).abs() < 1e-12);
        assert!(j.k.abs() < 1e-12);
    }

    #[test]
    fn horosphere_invariants() {
        let s = surf("horosphere", &[]);
        let j = s.jet(0.3, 0.5).unwrap();
        assert!((j.h - 1.0).abs() < 1e-12);
        assert!((j.b2 - 2.0).abs() < 1e-12);
        assert!(j.k.abs() < 1e-12);
    }

    #[test]
    fn geodesic_sphere_s3_cot_rho() {
        let s = surf("geodesic-sphere-s3", &[("rho", 0.7)]);
        let j = s.jet(0.2, 0.1).unwrap();
        assert!((j.h - 1.0 / 0.7f64.tan()).abs() < 1e-12);
        // intrinsic curvature of a sphere of radius sin ρ
        assert!((j.k - 1.0 / 0.7f64.sin().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn jet_matches_central_differences() {
        let step = 1e-5;
        for e in catalog_entries() {
            let s = catalog(e.name, &Params::new()).unwrap();
            let (u, v) = s.domain.center();
            let (u, v) = (u + 0.13, v - 0.07);
            let d = s.derivatives(u, v);
            let fd_u = (s.position(u + step, v) - s.position(u - step, v)) / (2.0 * step);
            let fd_v = (s.position(u, v + step) - s.position(u, v - step)) / (2.0 * step);
            assert!((&d[1][0] - fd_u).amax() < 1e-8, "{}", e.name);
            assert!((&d[0][1] - fd_v).amax() < 1e-8, "{}", e.name);
            let h2 = 1e-4;
            let fd_uu = (s.position(u + h2, v) - s.position(u, v) * 2.0 + s.position(u - h2, v))
                / (h2 * h2);
            let scale = 1.0 + d[2][0].amax();
            assert!((&d[2][0] - fd_uu).amax() < 1e-6 * scale, "{}", e.name);
        }
    }

    #[test]
    fn normal_is_unit_tangent_and_orthogonal() {
        for e in catalog_entries() {
            let s = catalog(e.name, &Params::new()).unwrap();
            let (u, v) = s.domain.center();
            let j = s.jet(u + 0.05, v + 0.02).unwrap();
            let sp = s.space;
            assert!((sp.form(&j.eta, &j.eta) - 1.0).abs() < 1e-12, "{}", e.name);
            assert!(sp.form(&j.eta, &j.fu).abs() < 1e-12, "{}", e.name);
            assert!(sp.form(&j.eta, &j.fv).abs() < 1e-12, "{}", e.name);
            assert!(sp.tangency_residual(&j.p, &j.eta) < 1e-12, "{}", e.name);
            assert!(sp.point_residual(&j.p) < 1e-12, "{}", e.name);
            assert!(j.gauss_equation_residual() < 1e-9, "{}", e.name);
        }
    }

    #[test]
    fn degenerate_point_is_an_error() {
        let param: ParamFn = Arc::new(|u: T3, v: T3| vec![u, u * 0.0 + v * 0.0, v * 0.0]);
        let dom = Domain {
            u: (-1.0, 1.0),
            v: (-1.0, 1.0),
            periodic_u: false,
            periodic_v: false,
            nu: 8,
            nv: 8,
        };
        let err = ParamSurface::new("bad", ModelSpace::Euclid(3), vec![], dom, param).unwrap_err();
        assert!(matches!(err, GeomError::DegenerateImmersion { .. }));
    }

    #[test]
    fn refined_domain_nests() {
        let s = surf("cylinder-r3", &[]).with_grid(16, 16);
        let f = s.domain.refined();
        assert_eq!((f.nu, f.nv), (32, 31));
        assert!((f.du() * 2.0 - s.domain.du()).abs() < 1e-15);
        assert!((f.dv() * 2.0 - s.domain.dv()).abs() < 1e-15);
    }
}
