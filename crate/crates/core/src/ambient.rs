//! The five model spaces, in their standard embeddings.
//!
//! | space      | embedding                         | isometry algebra |
//! |------------|-----------------------------------|------------------|
//! | ℝⁿ         | ℝⁿ                                | ℝⁿ (translations)|
//! | 𝕊ⁿ         | unit sphere in ℝⁿ⁺¹               | 𝔬(n+1)           |
//! | ℍⁿ         | upper hyperboloid in 𝕃ⁿ⁺¹         | 𝔬(1,n)           |
//! | 𝕊²×ℝ, ℍ²×ℝ | (x₁,x₂,x₃,t), curved factor first | 𝔬(3)⊕ℝ, 𝔬(1,2)⊕ℝ |
//!
//! Points and vectors are plain `DVector<f64>` in embedding coordinates.
//! For the products the first three entries are the surface factor and the
//! last one is the height.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{lorentz_dot, lorentz_gram, xi, AlgebraElement, AlgebraKind, GroupElement};
use crate::error::{GeomError, Result};

/// Tolerance for the point/tangency/unit contract checks.
pub const CONTRACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelSpace {
    Euclid(usize),
    Sphere(usize),
    Hyperbolic(usize),
    /// 𝕊² × ℝ
    SphereProd,
    /// ℍ² × ℝ
    HypProd,
}

impl ModelSpace {
    pub fn dim(self) -> usize {
        match self {
            ModelSpace::Euclid(n) | ModelSpace::Sphere(n) | ModelSpace::Hyperbolic(n) => n,
            ModelSpace::SphereProd | ModelSpace::HypProd => 3,
        }
    }

    pub fn embedding_dim(self) -> usize {
        match self {
            ModelSpace::Euclid(n) => n,
            ModelSpace::Sphere(n) | ModelSpace::Hyperbolic(n) => n + 1,
            ModelSpace::SphereProd | ModelSpace::HypProd => 4,
        }
    }

    pub fn algebra_kind(self) -> AlgebraKind {
        match self {
            ModelSpace::Euclid(n) => AlgebraKind::Translation(n),
            ModelSpace::Sphere(n) => AlgebraKind::Orthogonal(n + 1),
            ModelSpace::Hyperbolic(n) => AlgebraKind::Lorentz(n + 1),
            ModelSpace::SphereProd => AlgebraKind::OrthogonalPlusLine(3),
            ModelSpace::HypProd => AlgebraKind::LorentzPlusLine(3),
        }
    }

    /// Sectional curvature of the curved factor (0 for ℝⁿ).
    pub fn kappa(self) -> f64 {
        match self {
            ModelSpace::Euclid(_) => 0.0,
            ModelSpace::Sphere(_) | ModelSpace::SphereProd => 1.0,
            ModelSpace::Hyperbolic(_) | ModelSpace::HypProd => -1.0,
        }
    }

    pub fn is_product(self) -> bool {
        matches!(self, ModelSpace::SphereProd | ModelSpace::HypProd)
    }

    /// Short identifier used by the CLI and reports.
    pub fn label(self) -> String {
        match self {
            ModelSpace::Euclid(n) => format!("r{n}"),
            ModelSpace::Sphere(n) => format!("s{n}"),
            ModelSpace::Hyperbolic(n) => format!("h{n}"),
            ModelSpace::SphereProd => "s2xr".into(),
            ModelSpace::HypProd => "h2xr".into(),
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s2xr" => Some(ModelSpace::SphereProd),
            "h2xr" => Some(ModelSpace::HypProd),
            other => {
                let (head, tail) = other.split_at(1.min(other.len()));
                let n: usize = tail.parse().ok()?;
                match head {
                    "r" => Some(ModelSpace::Euclid(n)),
                    "s" => Some(ModelSpace::Sphere(n)),
                    "h" => Some(ModelSpace::Hyperbolic(n)),
                    _ => None,
                }
            }
        }
    }

    /// Length of the curved-factor block in embedding coordinates.
    fn curved_len(self) -> usize {
        match self {
            ModelSpace::Euclid(_) => 0,
            ModelSpace::Sphere(n) | ModelSpace::Hyperbolic(n) => n + 1,
            ModelSpace::SphereProd | ModelSpace::HypProd => 3,
        }
    }

    fn lorentzian(self) -> bool {
        matches!(self, ModelSpace::Hyperbolic(_) | ModelSpace::HypProd)
    }

    /// Diagonal of the embedding bilinear form.
    pub fn form_diag(self) -> DVector<f64> {
        let lor = self.lorentzian();
        DVector::from_fn(self.embedding_dim(), |i, _| if lor && i == 0 { -1.0 } else { 1.0 })
    }

    /// The embedding bilinear form (Euclidean or Lorentzian on the curved block).
    pub fn form(self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        if self.lorentzian() {
            lorentz_dot(u, v)
        } else {
            u.dot(v)
        }
    }

    /// Curved-factor block of an embedding vector.
    pub fn base(self, x: &DVector<f64>) -> DVector<f64> {
        x.rows(0, self.curved_len()).into_owned()
    }

    /// Height coordinate of a product point (0 for the other spaces).
    pub fn height(self, x: &DVector<f64>) -> f64 {
        if self.is_product() {
            x[3]
        } else {
            0.0
        }
    }

    /// ∂_t on products, `None` elsewhere.
    pub fn vertical(self) -> Option<DVector<f64>> {
        self.is_product()
            .then(|| DVector::from_column_slice(&[0.0, 0.0, 0.0, 1.0]))
    }

    /// Unit normal of the embedded model at p (the position vector of the
    /// curved factor), `None` for ℝⁿ.
    pub fn embedding_normal(self, p: &DVector<f64>) -> Option<DVector<f64>> {
        match self {
            ModelSpace::Euclid(_) => None,
            ModelSpace::Sphere(_) | ModelSpace::Hyperbolic(_) => Some(p.clone()),
            ModelSpace::SphereProd | ModelSpace::HypProd => {
                Some(DVector::from_column_slice(&[p[0], p[1], p[2], 0.0]))
            }
        }
    }

    fn check_len(self, x: &DVector<f64>) -> Result<()> {
        if x.len() == self.embedding_dim() {
            Ok(())
        } else {
            Err(GeomError::DimensionMismatch {
                expected: self.embedding_dim(),
                got: x.len(),
            })
        }
    }

    /// How far p is from the model (0 on the model).
    pub fn point_residual(self, p: &DVector<f64>) -> f64 {
        match self {
            ModelSpace::Euclid(_) => 0.0,
            ModelSpace::Sphere(_) | ModelSpace::SphereProd => {
                (self.base(p).norm_squared() - 1.0).abs()
            }
            ModelSpace::Hyperbolic(_) | ModelSpace::HypProd => {
                let b = self.base(p);
                let r = (lorentz_dot(&b, &b) + 1.0).abs();
                if b[0] > 0.0 {
                    r
                } else {
                    r.max(1.0)
                }
            }
        }
    }

    pub fn check_point(self, p: &DVector<f64>) -> Result<()> {
        self.check_len(p)?;
        let residual = self.point_residual(p);
        if residual <= CONTRACT_TOL * (1.0 + p.norm_squared()) {
            Ok(())
        } else {
            Err(GeomError::NotOnSpace { residual })
        }
    }

    pub fn tangency_residual(self, p: &DVector<f64>, u: &DVector<f64>) -> f64 {
        match self.embedding_normal(p) {
            None => 0.0,
            Some(n) => self.form(&n, u).abs(),
        }
    }

    pub fn check_tangent(self, p: &DVector<f64>, u: &DVector<f64>) -> Result<()> {
        self.check_len(u)?;
        let residual = self.tangency_residual(p, u);
        if residual <= CONTRACT_TOL * (1.0 + p.norm() * u.norm()) {
            Ok(())
        } else {
            Err(GeomError::NotTangent { residual })
        }
    }

    /// Orthogonal projection onto T_p N.
    pub fn project_tangent(self, p: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        match self.embedding_normal(p) {
            None => u.clone(),
            Some(n) => {
                // ⟨n, n⟩ = +1 on spheres, −1 on hyperboloids
                let nn = self.form(&n, &n);
                u - &n * (self.form(&n, u) / nn)
            }
        }
    }

    /// Riemannian inner product of two tangent vectors at p.
    pub fn ambient_inner(self, p: &DVector<f64>, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        self.check_tangent(p, u)?;
        self.check_tangent(p, v)?;
        Ok(self.form(u, v))
    }

    /// Killing field ζ(V)(p) = d/dt exp(tV)·p at t = 0.
    pub fn killing_field(self, v: &AlgebraElement, p: &DVector<f64>) -> Result<DVector<f64>> {
        if v.kind != self.algebra_kind() {
            return Err(GeomError::KindMismatch {
                left: v.kind,
                right: self.algebra_kind(),
            });
        }
        self.check_len(p)?;
        Ok(match self {
            ModelSpace::Euclid(_) => v.line.clone(),
            ModelSpace::Sphere(_) | ModelSpace::Hyperbolic(_) => &v.mat * p,
            ModelSpace::SphereProd | ModelSpace::HypProd => {
                let b = &v.mat * self.base(p);
                DVector::from_column_slice(&[b[0], b[1], b[2], v.line[0]])
            }
        })
    }

    /// Residual of the form-preservation condition for a group element.
    pub fn group_residual(self, g: &GroupElement) -> f64 {
        let m = g.mat.nrows();
        if m != g.mat.ncols() {
            return f64::INFINITY;
        }
        let gram = if self.lorentzian() {
            lorentz_gram(m)
        } else {
            DMatrix::identity(m, m)
        };
        let r = (g.mat.transpose() * &gram * &g.mat - &gram).amax();
        if self.lorentzian() && g.mat[(0, 0)] <= 0.0 {
            r.max(1.0)
        } else {
            r
        }
    }

    /// Act on p by a group element.
    pub fn isometry_action(self, g: &GroupElement, p: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_len(p)?;
        let (m, shift) = match self {
            ModelSpace::Euclid(n) => (n, n),
            ModelSpace::Sphere(n) | ModelSpace::Hyperbolic(n) => (n + 1, 0),
            ModelSpace::SphereProd | ModelSpace::HypProd => (3, 1),
        };
        if g.mat.nrows() != m || g.shift.len() != shift {
            return Err(GeomError::DimensionMismatch {
                expected: m,
                got: g.mat.nrows(),
            });
        }
        let residual = self.group_residual(g);
        if residual > 1e-8 {
            return Err(GeomError::FormNotPreserved { residual });
        }
        Ok(match self {
            ModelSpace::Euclid(_) => &g.mat * p + &g.shift,
            ModelSpace::Sphere(_) | ModelSpace::Hyperbolic(_) => &g.mat * p,
            ModelSpace::SphereProd | ModelSpace::HypProd => {
                let b = &g.mat * self.base(p);
                DVector::from_column_slice(&[b[0], b[1], b[2], p[3] + g.shift[0]])
            }
        })
    }

    /// Squared norm of the curved-factor part of a tangent vector.
    fn horizontal_sq(self, u: &DVector<f64>) -> f64 {
        if self.is_product() {
            self.form(u, u) - u[3] * u[3]
        } else {
            self.form(u, u)
        }
    }

    /// Sectional curvature of the plane spanned by tangent vectors u, v.
    pub fn sectional(self, p: &DVector<f64>, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        self.check_tangent(p, u)?;
        self.check_tangent(p, v)?;
        let (uu, vv, uv) = (self.form(u, u), self.form(v, v), self.form(u, v));
        let area = uu * vv - uv * uv;
        if area <= 1e-300 {
            return Err(GeomError::InvalidParameter(
                "sectional curvature of a degenerate plane".into(),
            ));
        }
        if !self.is_product() {
            return Ok(self.kappa());
        }
        let (hu, hv) = (self.horizontal_sq(u), self.horizontal_sq(v));
        let huv = uv - u[3] * v[3];
        Ok(self.kappa() * (hu * hv - huv * huv) / area)
    }

    /// Ricci curvature Ric(v) for a unit tangent vector v.
    pub fn ricci(self, p: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        self.check_tangent(p, v)?;
        let norm = self.form(v, v).sqrt();
        if (norm - 1.0).abs() > CONTRACT_TOL {
            return Err(GeomError::NotUnit { norm });
        }
        Ok(match self {
            ModelSpace::Euclid(_) => 0.0,
            ModelSpace::Sphere(n) | ModelSpace::Hyperbolic(n) => (n as f64 - 1.0) * self.kappa(),
            ModelSpace::SphereProd | ModelSpace::HypProd => {
                self.kappa() * (1.0 - v[3] * v[3])
            }
        })
    }

    /// min over unit v of Ric(v).
    pub fn ricci_min(self) -> f64 {
        match self {
            ModelSpace::Euclid(_) => 0.0,
            ModelSpace::Sphere(n) | ModelSpace::Hyperbolic(n) => (n as f64 - 1.0) * self.kappa(),
            // horizontal directions give κ, the vertical one gives 0
            ModelSpace::SphereProd | ModelSpace::HypProd => self.kappa().min(0.0),
        }
    }

    /// Completes p to a group matrix x = (p v₂ … vₘ) when `frame` is an
    /// orthonormal basis of the curved factor's tangent space at p.
    pub fn frame_matrix(self, p: &DVector<f64>, frame: &[DVector<f64>]) -> Result<DMatrix<f64>> {
        let m = self.curved_len();
        if m == 0 {
            return Ok(DMatrix::zeros(0, 0));
        }
        if frame.len() != m - 1 {
            return Err(GeomError::DimensionMismatch {
                expected: m - 1,
                got: frame.len(),
            });
        }
        let base = self.base(p);
        let mut x = DMatrix::zeros(m, m);
        x.set_column(0, &base);
        for (k, v) in frame.iter().enumerate() {
            let vb = if v.len() == m { v.clone() } else { self.base(v) };
            x.set_column(k + 1, &vb);
        }
        let gram = if self.lorentzian() {
            lorentz_gram(m)
        } else {
            DMatrix::identity(m, m)
        };
        let residual = (x.transpose() * &gram * &x - &gram).amax();
        if residual > CONTRACT_TOL {
            return Err(GeomError::NotOrthonormal { residual });
        }
        Ok(x)
    }
}

/// ξ-weighted inverse of a Lorentz group matrix, x⁻¹ = Ĩ xᵀ Ĩ.
pub fn lorentz_inverse(x: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(x.ncols(), x.nrows(), |i, j| xi(i) * xi(j) * x[(j, i)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn inner_product_examples() {
        let h2 = ModelSpace::Hyperbolic(2);
        let p = v(&[1.0, 0.0, 0.0]);
        let e2 = v(&[0.0, 1.0, 0.0]);
        assert_eq!(h2.ambient_inner(&p, &e2, &e2).unwrap(), 1.0);
        assert!(h2.ambient_inner(&p, &p, &e2).is_err());

        let s2 = ModelSpace::Sphere(2);
        let q = v(&[0.0, 0.0, 1.0]);
        let a = v(&[1.0, 0.0, 0.0]);
        let b = v(&[0.0, 1.0, 0.0]);
        assert_eq!(s2.ambient_inner(&q, &a, &a).unwrap(), 1.0);
        assert_eq!(s2.ambient_inner(&q, &a, &b).unwrap(), 0.0);
    }

    #[test]
    fn killing_field_examples() {
        let s2 = ModelSpace::Sphere(2);
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = -1.0;
        let rot = AlgebraElement::from_matrix(AlgebraKind::Orthogonal(3), m).unwrap();
        let z = s2.killing_field(&rot, &v(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(z, v(&[0.0, -1.0, 0.0]));

        let hp = ModelSpace::HypProd;
        let vert = AlgebraElement::new(
            AlgebraKind::LorentzPlusLine(3),
            DMatrix::zeros(3, 3),
            v(&[1.0]),
        )
        .unwrap();
        let p = v(&[2f64.cosh(), 2f64.sinh(), 0.0, -0.4]);
        assert_eq!(hp.killing_field(&vert, &p).unwrap(), v(&[0.0, 0.0, 0.0, 1.0]));

        let c = 2f64.sqrt() / 2.0;
        let mut x = DMatrix::zeros(3, 3);
        x[(1, 2)] = c;
        x[(2, 1)] = -c;
        let axis = AlgebraElement::new(AlgebraKind::LorentzPlusLine(3), x, v(&[0.0])).unwrap();
        let on_axis = hp.killing_field(&axis, &v(&[1.0, 0.0, 0.0, 3.0])).unwrap();
        assert_eq!(on_axis, DVector::zeros(4));

        assert!(hp.killing_field(&rot, &p).is_err());
    }

    #[test]
    fn isometry_examples() {
        let s2 = ModelSpace::Sphere(2);
        let p = v(&[0.6, 0.0, 0.8]);
        let id = GroupElement::identity(s2.algebra_kind());
        assert_eq!(s2.isometry_action(&id, &p).unwrap(), p);

        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = -1.0;
        let rot = AlgebraElement::from_matrix(AlgebraKind::Orthogonal(3), m).unwrap();
        let half = rot.exp(PI);
        let q = s2.isometry_action(&half, &v(&[1.0, 0.0, 0.0])).unwrap();
        assert!((q - v(&[-1.0, 0.0, 0.0])).amax() < 1e-15);

        let h3 = ModelSpace::Hyperbolic(3);
        let mut b = DMatrix::zeros(4, 4);
        b[(0, 1)] = 1.0;
        b[(1, 0)] = 1.0;
        let boost = AlgebraElement::from_matrix(AlgebraKind::Lorentz(4), b).unwrap();
        let p = v(&[1.0, 0.0, 0.0, 0.0]);
        for t in [-3.0, -0.5, 0.7, 4.0] {
            let q = h3.isometry_action(&boost.exp(t), &p).unwrap();
            assert!((lorentz_dot(&q, &q) + 1.0).abs() < 1e-12);
        }

        let bad = GroupElement {
            mat: DMatrix::identity(3, 3) * 2.0,
            shift: DVector::zeros(0),
        };
        assert!(matches!(
            s2.isometry_action(&bad, &p.rows(0, 3).into_owned()),
            Err(GeomError::FormNotPreserved { .. })
        ));
    }

    #[test]
    fn ricci_examples() {
        let h3 = ModelSpace::Hyperbolic(3);
        let p = v(&[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(h3.ricci(&p, &v(&[0.0, 0.0, 0.0, 1.0])).unwrap(), -2.0);
        assert_eq!(h3.ricci_min(), -2.0);
        assert_eq!(ModelSpace::Sphere(3).ricci_min(), 2.0);
        assert_eq!(ModelSpace::HypProd.ricci_min(), -1.0);
        assert_eq!(ModelSpace::SphereProd.ricci_min(), 0.0);
        assert!(h3.ricci(&p, &v(&[0.0, 0.0, 0.0, 2.0])).is_err());
        // H ≥ 1 in ℍ³ and H ≥ 1/√2 in ℍ²×ℝ saturate 2H² + Ric_N ≥ 0
        assert_eq!(2.0 * 1.0 + h3.ricci_min(), 0.0);
        let h = 1.0 / 2f64.sqrt();
        assert!((2.0 * h * h + ModelSpace::HypProd.ricci_min()).abs() < 1e-15);
    }

    #[test]
    fn product_sectional_uses_normal_angle() {
        let hp = ModelSpace::HypProd;
        let p = v(&[1.0, 0.0, 0.0, 0.0]);
        let e2 = v(&[0.0, 1.0, 0.0, 0.0]);
        let e3 = v(&[0.0, 0.0, 1.0, 0.0]);
        let et = v(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(hp.sectional(&p, &e2, &e3).unwrap(), -1.0);
        assert_eq!(hp.sectional(&p, &e2, &et).unwrap(), 0.0);
        let tilted = (&e3 + &et) / 2f64.sqrt();
        assert!((hp.sectional(&p, &e2, &tilted).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn labels_round_trip() {
        for s in [
            ModelSpace::Euclid(3),
            ModelSpace::Sphere(3),
            ModelSpace::Hyperbolic(3),
            ModelSpace::SphereProd,
            ModelSpace::HypProd,
        ] {
            assert_eq!(ModelSpace::from_label(&s.label()), Some(s));
        }
        assert_eq!(ModelSpace::from_label("q3"), None);
    }
}
