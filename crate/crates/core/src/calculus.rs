//! Finite-difference operators on grid fields over a parametrized surface.
//!
//! All derivatives are second-order central differences with step equal to
//! the grid spacing. Nodes whose stencil leaves a closed axis are reported as
//! unavailable; periodic axes wrap. [`richardson`] combines a grid with its
//! refinement to cancel the leading h² error term.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::algebra::AlgebraElement;
use crate::error::{GeomError, Result};
use crate::exec::Exec;
use crate::gaussmap::gamma_unchecked;
use crate::surface::{Domain, ParamSurface, SurfaceJet};

/// Values that can be combined linearly by the stencils.
pub trait Linear: Clone + Send + Sync {
    fn scaled(&self, a: f64) -> Self;
    /// self + a·other
    fn add_scaled(&self, a: f64, other: &Self) -> Self;
}

impl Linear for f64 {
    fn scaled(&self, a: f64) -> Self {
        self * a
    }
    fn add_scaled(&self, a: f64, other: &Self) -> Self {
        self + a * other
    }
}

impl Linear for Complex64 {
    fn scaled(&self, a: f64) -> Self {
        self * a
    }
    fn add_scaled(&self, a: f64, other: &Self) -> Self {
        self + other * a
    }
}

impl Linear for DVector<f64> {
    fn scaled(&self, a: f64) -> Self {
        self * a
    }
    fn add_scaled(&self, a: f64, other: &Self) -> Self {
        self + other * a
    }
}

impl Linear for AlgebraElement {
    fn scaled(&self, a: f64) -> Self {
        self.scale(a)
    }
    fn add_scaled(&self, a: f64, other: &Self) -> Self {
        assert_eq!(self.kind, other.kind, "mixed algebra kinds in a field");
        AlgebraElement {
            kind: self.kind,
            mat: &self.mat + &other.mat * a,
            line: &self.line + &other.line * a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    InteriorOnly,
    PeriodicU,
    PeriodicV,
    Both,
}

impl Boundary {
    pub fn from_flags(periodic_u: bool, periodic_v: bool) -> Self {
        match (periodic_u, periodic_v) {
            (false, false) => Boundary::InteriorOnly,
            (true, false) => Boundary::PeriodicU,
            (false, true) => Boundary::PeriodicV,
            (true, true) => Boundary::Both,
        }
    }

    pub fn periodic_u(self) -> bool {
        matches!(self, Boundary::PeriodicU | Boundary::Both)
    }

    pub fn periodic_v(self) -> bool {
        matches!(self, Boundary::PeriodicV | Boundary::Both)
    }
}

/// Per-node values on an Nu × Nv grid, stored with i (the u index) slow.
#[derive(Debug, Clone)]
pub struct GridField<T> {
    pub nu: usize,
    pub nv: usize,
    pub boundary: Boundary,
    pub values: Vec<T>,
}

impl<T> GridField<T> {
    pub fn from_fn(nu: usize, nv: usize, boundary: Boundary, f: impl FnMut(usize, usize) -> T) -> Self {
        let mut f = f;
        let values = (0..nu * nv).map(|k| f(k / nv, k % nv)).collect();
        GridField {
            nu,
            nv,
            boundary,
            values,
        }
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nv + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.values[self.index(i, j)]
    }

    /// Index of (i + di, j + dj), wrapping periodic axes; `None` off a
    /// closed edge.
    pub fn offset(&self, i: usize, j: usize, di: isize, dj: isize) -> Option<(usize, usize)> {
        let step = |x: usize, d: isize, n: usize, periodic: bool| -> Option<usize> {
            let y = x as isize + d;
            if periodic {
                Some(y.rem_euclid(n as isize) as usize)
            } else if y < 0 || y >= n as isize {
                None
            } else {
                Some(y as usize)
            }
        };
        Some((
            step(i, di, self.nu, self.boundary.periodic_u())?,
            step(j, dj, self.nv, self.boundary.periodic_v())?,
        ))
    }

    /// Whether every node within `radius` of (i, j) exists.
    pub fn has_stencil(&self, i: usize, j: usize, radius: usize) -> bool {
        let r = radius as isize;
        self.offset(i, j, -r, -r).is_some() && self.offset(i, j, r, r).is_some()
    }

    pub fn map<R>(&self, f: impl FnMut(&T) -> R) -> GridField<R> {
        GridField {
            nu: self.nu,
            nv: self.nv,
            boundary: self.boundary,
            values: self.values.iter().map(f).collect(),
        }
    }
}

impl<T: Linear> GridField<T> {
    fn at(&self, i: usize, j: usize, di: isize, dj: isize) -> Result<&T> {
        self.offset(i, j, di, dj)
            .map(|(a, b)| self.get(a, b))
            .ok_or_else(|| GeomError::StencilUnavailable(format!("node ({i},{j})")))
    }

    /// ∂_u and ∂_v by central differences.
    pub fn d1(&self, i: usize, j: usize, hu: f64, hv: f64) -> Result<[T; 2]> {
        let du = self.at(i, j, 1, 0)?.add_scaled(-1.0, self.at(i, j, -1, 0)?);
        let dv = self.at(i, j, 0, 1)?.add_scaled(-1.0, self.at(i, j, 0, -1)?);
        Ok([du.scaled(0.5 / hu), dv.scaled(0.5 / hv)])
    }

    /// [∂_uu, ∂_uv, ∂_vv] by central differences.
    pub fn d2(&self, i: usize, j: usize, hu: f64, hv: f64) -> Result<[T; 3]> {
        let c = self.at(i, j, 0, 0)?;
        let uu = self
            .at(i, j, 1, 0)?
            .add_scaled(-2.0, c)
            .add_scaled(1.0, self.at(i, j, -1, 0)?)
            .scaled(1.0 / (hu * hu));
        let vv = self
            .at(i, j, 0, 1)?
            .add_scaled(-2.0, c)
            .add_scaled(1.0, self.at(i, j, 0, -1)?)
            .scaled(1.0 / (hv * hv));
        let uv = self
            .at(i, j, 1, 1)?
            .add_scaled(-1.0, self.at(i, j, 1, -1)?)
            .add_scaled(-1.0, self.at(i, j, -1, 1)?)
            .add_scaled(1.0, self.at(i, j, -1, -1)?)
            .scaled(0.25 / (hu * hv));
        Ok([uu, uv, vv])
    }
}

/// A surface sampled on a grid: jets at every node.
pub struct SurfaceGrid<'a> {
    pub surface: &'a ParamSurface,
    pub domain: Domain,
    pub jets: Vec<SurfaceJet>,
    pub exec: Exec,
}

impl<'a> SurfaceGrid<'a> {
    pub fn new(surface: &'a ParamSurface, domain: Domain, exec: Exec) -> Result<Self> {
        if domain.nu < 3 || domain.nv < 3 {
            return Err(GeomError::InvalidParameter(format!(
                "grid {}x{} is too coarse for a three-point stencil",
                domain.nu, domain.nv
            )));
        }
        let nv = domain.nv;
        let jets: Vec<Result<SurfaceJet>> = exec.map(domain.nu * nv, |k| {
            let (u, v) = domain.node(k / nv, k % nv);
            surface.jet(u, v)
        });
        let jets = jets.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(SurfaceGrid {
            surface,
            domain,
            jets,
            exec,
        })
    }

    pub fn boundary(&self) -> Boundary {
        Boundary::from_flags(self.domain.periodic_u, self.domain.periodic_v)
    }

    pub fn jet(&self, i: usize, j: usize) -> &SurfaceJet {
        &self.jets[i * self.domain.nv + j]
    }

    pub fn steps(&self) -> (f64, f64) {
        (self.domain.du(), self.domain.dv())
    }

    /// Sample a per-node quantity from the jets.
    pub fn sample<T: Send>(&self, f: impl Fn(&SurfaceJet) -> T + Sync) -> GridField<T> {
        let values = self.exec.map(self.jets.len(), |k| f(&self.jets[k]));
        GridField {
            nu: self.domain.nu,
            nv: self.domain.nv,
            boundary: self.boundary(),
            values,
        }
    }

    /// Evaluate a fallible per-node computation; failures (missing stencils)
    /// become `None`.
    pub fn map_nodes<T: Send>(
        &self,
        f: impl Fn(usize, usize) -> Result<T> + Sync,
    ) -> GridField<Option<T>> {
        let nv = self.domain.nv;
        let values = self.exec.map(self.jets.len(), |k| f(k / nv, k % nv).ok());
        GridField {
            nu: self.domain.nu,
            nv,
            boundary: self.boundary(),
            values,
        }
    }

    /// The Gauss map 𝒩 = Γ(η) at every node.
    pub fn gauss_field(&self) -> GridField<AlgebraElement> {
        let sp = self.surface.space;
        self.sample(|j| gamma_unchecked(sp, &j.p, &j.eta))
    }
}

/// Coefficients gⁱʲ ∂ⱼf of the surface gradient in the basis {F_u, F_v}.
pub fn gradient_coeffs(grid: &SurfaceGrid, f: &GridField<f64>, i: usize, j: usize) -> Result<[f64; 2]> {
    let (hu, hv) = grid.steps();
    let [fu, fv] = f.d1(i, j, hu, hv)?;
    let gi = grid.jet(i, j).g_inv();
    Ok([
        gi[(0, 0)] * fu + gi[(0, 1)] * fv,
        gi[(1, 0)] * fu + gi[(1, 1)] * fv,
    ])
}

/// grad f as an ambient vector.
pub fn surface_gradient(grid: &SurfaceGrid, f: &GridField<f64>, i: usize, j: usize) -> Result<DVector<f64>> {
    let c = gradient_coeffs(grid, f, i, j)?;
    Ok(grid.jet(i, j).tangent(c))
}

/// Laplace–Beltrami Δf = gⁱʲ(∂ᵢⱼf − Γᵏᵢⱼ∂ₖf), entrywise for vector and
/// algebra-valued fields.
pub fn laplace_beltrami<T: Linear>(grid: &SurfaceGrid, f: &GridField<T>, i: usize, j: usize) -> Result<T> {
    let (hu, hv) = grid.steps();
    let d1 = f.d1(i, j, hu, hv)?;
    let [fuu, fuv, fvv] = f.d2(i, j, hu, hv)?;
    let jet = grid.jet(i, j);
    let gi = jet.g_inv();
    let ch = jet.christoffel();
    let d2 = [[&fuu, &fuv], [&fuv, &fvv]];
    // coefficient of ∂ₖf: −gⁱʲΓᵏᵢⱼ
    let mut ck = [0.0; 2];
    for (k, c) in ck.iter_mut().enumerate() {
        for a in 0..2 {
            for b in 0..2 {
                *c -= gi[(a, b)] * ch[k][a][b];
            }
        }
    }
    let mut out = fuu.scaled(gi[(0, 0)]);
    for a in 0..2 {
        for b in 0..2 {
            if (a, b) != (0, 0) {
                out = out.add_scaled(gi[(a, b)], d2[a][b]);
            }
        }
    }
    Ok(out.add_scaled(ck[0], &d1[0]).add_scaled(ck[1], &d1[1]))
}

/// d𝒩(X) for X = xᵘF_u + xᵛF_v.
pub fn dgauss(
    grid: &SurfaceGrid,
    gauss: &GridField<AlgebraElement>,
    i: usize,
    j: usize,
    x: [f64; 2],
) -> Result<AlgebraElement> {
    let (hu, hv) = grid.steps();
    let [nu, nv] = gauss.d1(i, j, hu, hv)?;
    Ok(nu.scaled(x[0]).add_scaled(x[1], &nv))
}

/// d𝒩(X) for an ambient tangent vector X in span{F_u, F_v}.
pub fn dgauss_vector(
    grid: &SurfaceGrid,
    gauss: &GridField<AlgebraElement>,
    i: usize,
    j: usize,
    x: &DVector<f64>,
) -> Result<AlgebraElement> {
    let jet = grid.jet(i, j);
    let sp = grid.surface.space;
    let gi = jet.g_inv();
    let (a, b) = (sp.form(x, &jet.fu), sp.form(x, &jet.fv));
    let c = [gi[(0, 0)] * a + gi[(0, 1)] * b, gi[(1, 0)] * a + gi[(1, 1)] * b];
    let off = (jet.tangent(c) - x).amax();
    if off > 1e-9 * (1.0 + x.amax()) {
        return Err(GeomError::NotTangent { residual: off });
    }
    dgauss(grid, gauss, i, j, c)
}

/// (∂_z f, ∂_z̄ f) with 2∂_z = ∂_u − i∂_v.
pub fn wirtinger(f: &GridField<Complex64>, i: usize, j: usize, hu: f64, hv: f64) -> Result<(Complex64, Complex64)> {
    let [fu, fv] = f.d1(i, j, hu, hv)?;
    let iv = Complex64::i() * fv;
    Ok(((fu - iv) * 0.5, (fu + iv) * 0.5))
}

/// Richardson combination (4·fine − coarse)/3 on the coarse grid, using
/// that coarse node (i, j) coincides with fine node (2i, 2j).
pub fn richardson<T: Linear>(coarse: &GridField<Option<T>>, fine: &GridField<Option<T>>) -> GridField<Option<T>> {
    GridField::from_fn(coarse.nu, coarse.nv, coarse.boundary, |i, j| {
        match (coarse.get(i, j), fine.get(2 * i, 2 * j)) {
            (Some(c), Some(f)) => Some(f.scaled(4.0 / 3.0).add_scaled(-1.0 / 3.0, c)),
            _ => None,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{catalog, Params};

    fn surf(name: &str, n: usize) -> ParamSurface {
        catalog(name, &Params::new()).unwrap().with_grid(n, n)
    }

    fn max_err(grid: &SurfaceGrid, f: impl Fn(usize, usize) -> Option<f64>) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..grid.domain.nu {
            for j in 0..grid.domain.nv {
                if let Some(e) = f(i, j) {
                    worst = worst.max(e.abs());
                }
            }
        }
        worst
    }

    #[test]
    fn constant_fields_have_zero_derivatives() {
        let s = surf("sphere-r3", 16);
        let g = SurfaceGrid::new(&s, s.domain, Exec::Sequential).unwrap();
        let c = g.sample(|_| 3.5);
        let e = g.sample(|j| AlgebraElement::translation(j.p.clone() * 0.0 + DVector::from_element(3, 1.0)));
        assert!(max_err(&g, |i, j| surface_gradient(&g, &c, i, j).ok().map(|v| v.amax())) == 0.0);
        assert!(max_err(&g, |i, j| laplace_beltrami(&g, &c, i, j).ok()) == 0.0);
        assert!(max_err(&g, |i, j| laplace_beltrami(&g, &e, i, j).ok().map(|x| x.coord_norm())) == 0.0);
    }

    #[test]
    fn gradient_of_u_on_flat_patch_is_fu() {
        let s = surf("plane-r3", 16);
        let g = SurfaceGrid::new(&s, s.domain, Exec::Sequential).unwrap();
        let (u0, du) = (s.domain.u.0, s.domain.du());
        let f = GridField::from_fn(16, 16, g.boundary(), |i, _| u0 + du * i as f64);
        let v = surface_gradient(&g, &f, 5, 7).unwrap();
        assert!((v - DVector::from_column_slice(&[1.0, 0.0, 0.0])).amax() < 1e-13);
        assert!(matches!(
            surface_gradient(&g, &f, 0, 7),
            Err(GeomError::StencilUnavailable(_))
        ));
    }

    #[test]
    fn coordinate_functions_are_eigenfunctions_on_the_sphere() {
        // Δx = −(2/r²) x on a round sphere
        let mut errs = Vec::new();
        for n in [17, 33] {
            let s = surf("sphere-r3", n);
            let g = SurfaceGrid::new(&s, s.domain, Exec::Sequential).unwrap();
            let x = g.sample(|j| j.p[0]);
            errs.push(max_err(&g, |i, j| {
                laplace_beltrami(&g, &x, i, j)
                    .ok()
                    .map(|l| l + 2.0 * g.jet(i, j).p[0])
            }));
        }
        let ratio = errs[0] / errs[1];
        assert!(ratio > 3.7, "convergence ratio {ratio}");
    }

    #[test]
    fn richardson_improves_the_order() {
        let s = surf("sphere-r3", 17);
        let coarse = SurfaceGrid::new(&s, s.domain, Exec::Sequential).unwrap();
        let fine = SurfaceGrid::new(&s, s.domain.refined(), Exec::Sequential).unwrap();
        let lap = |g: &SurfaceGrid| {
            let x = g.sample(|j| j.p[2]);
            g.map_nodes(|i, j| laplace_beltrami(g, &x, i, j))
        };
        let r = richardson(&lap(&coarse), &lap(&fine));
        let plain = lap(&coarse);
        let err = |f: &GridField<Option<f64>>| {
            max_err(&coarse, |i, j| f.get(i, j).map(|l| l + 2.0 * coarse.jet(i, j).p[2]))
        };
        assert!(err(&r) < 0.05 * err(&plain), "{} vs {}", err(&r), err(&plain));
    }

    #[test]
    fn periodic_axes_wrap() {
        let s = surf("clifford-torus", 32);
        let g = SurfaceGrid::new(&s, s.domain, Exec::Sequential).unwrap();
        let x = g.sample(|j| j.p[0]);
        // flat torus with E = G = 1/2: Δ cos u = −2 cos u
        let l = laplace_beltrami(&g, &x, 0, 0).unwrap();
        assert!((l + 2.0 * g.jet(0, 0).p[0]).abs() < 1e-2);
    }

    #[test]
    fn wirtinger_of_polynomials() {
        let (n, h) = (9, 0.1);
        let z = |i: usize, j: usize| Complex64::new(i as f64 * h, j as f64 * h);
        let fz = GridField::from_fn(n, n, Boundary::InteriorOnly, z);
        let fzbar = GridField::from_fn(n, n, Boundary::InteriorOnly, |i, j| z(i, j).conj());
        let fz2 = GridField::from_fn(n, n, Boundary::InteriorOnly, |i, j| z(i, j) * z(i, j));
        let (a, b) = wirtinger(&fz, 4, 4, h, h).unwrap();
        assert!((a - 1.0).norm() < 1e-13 && b.norm() < 1e-13);
        let (a, b) = wirtinger(&fzbar, 4, 4, h, h).unwrap();
        assert!(a.norm() < 1e-13 && (b - 1.0).norm() < 1e-13);
        let (a, b) = wirtinger(&fz2, 3, 5, h, h).unwrap();
        assert!(b.norm() < 1e-12);
        assert!((a - z(3, 5) * 2.0).norm() < 1e-12);
    }

    #[test]
    fn dgauss_is_linear_and_matches_vector_form() {
        let s = surf("geodesic-sphere-h3", 16);
        let g = SurfaceGrid::new(&s, s.domain, Exec::Sequential).unwrap();
        let n = g.gauss_field();
        let x = dgauss(&g, &n, 6, 9, [1.0, 0.0]).unwrap();
        let y = dgauss(&g, &n, 6, 9, [0.0, 1.0]).unwrap();
        let c = dgauss(&g, &n, 6, 9, [0.3, -1.7]).unwrap();
        assert!(c.approx_eq(&x.scaled(0.3).add_scaled(-1.7, &y), 1e-10));
        let jet = g.jet(6, 9);
        let via_vec = dgauss_vector(&g, &n, 6, 9, &jet.tangent([0.3, -1.7])).unwrap();
        assert!(via_vec.approx_eq(&c, 1e-10));
    }
}
