//! The translation operator Γ_p : T_pN → 𝔤 and the Gauss map 𝒩 = Γ(η).
//!
//! Closed forms:
//!
//! * 𝕊ⁿ: Γ_p(u) = Φ(u,p) − Φ(p,u)
//! * ℍⁿ: Γ_p(u) = Ψ(p,u) − Ψ(u,p)
//! * M²×ℝ: Γ_(p,t)(u,ν) = (Γ_p(u), ν)
//! * ℝⁿ: Γ_p(u) = u as a translation
//!
//! [`gamma_via_frame`] recomputes Γ from a lift x ∈ π⁻¹(p) as x Z x⁻¹, which
//! is the definition itself; it must agree with the closed forms for every
//! admissible frame.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::algebra::{phi, psi, AlgebraElement, AlgebraKind};
use crate::ambient::{lorentz_inverse, ModelSpace, CONTRACT_TOL};
use crate::error::{GeomError, Result};

/// A value of the Gauss map: an element on the level set ⟨𝒩, 𝒩⟩ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussValue(pub AlgebraElement);

impl GaussValue {
    pub fn value(&self) -> &AlgebraElement {
        &self.0
    }

    pub fn into_inner(self) -> AlgebraElement {
        self.0
    }
}

/// Γ on the curved factor only, for a base point and base vector.
fn gamma_block(space: ModelSpace, p: &DVector<f64>, u: &DVector<f64>) -> DMatrix<f64> {
    match space {
        ModelSpace::Sphere(_) | ModelSpace::SphereProd => {
            phi(u, p).expect("equal lengths") - phi(p, u).expect("equal lengths")
        }
        ModelSpace::Hyperbolic(_) | ModelSpace::HypProd => {
            psi(p, u).expect("equal lengths") - psi(u, p).expect("equal lengths")
        }
        ModelSpace::Euclid(_) => unreachable!("no curved factor"),
    }
}

/// Γ without contract checks; callers guarantee tangency.
pub(crate) fn gamma_unchecked(
    space: ModelSpace,
    p: &DVector<f64>,
    u: &DVector<f64>,
) -> AlgebraElement {
    let kind = space.algebra_kind();
    match space {
        ModelSpace::Euclid(_) => AlgebraElement::translation(u.clone()),
        ModelSpace::Sphere(_) | ModelSpace::Hyperbolic(_) => AlgebraElement {
            kind,
            mat: gamma_block(space, p, u),
            line: DVector::zeros(0),
        },
        ModelSpace::SphereProd | ModelSpace::HypProd => AlgebraElement {
            kind,
            mat: gamma_block(space, &space.base(p), &space.base(u)),
            line: DVector::from_element(1, u[3]),
        },
    }
}

/// Γ_p(u) for u ∈ T_pN.
pub fn gamma(space: ModelSpace, p: &DVector<f64>, u: &DVector<f64>) -> Result<AlgebraElement> {
    space.check_point(p)?;
    space.check_tangent(p, u)?;
    Ok(gamma_unchecked(space, p, u))
}

/// Γ_p(u) computed from the definition: build the group element x whose
/// first column is p and remaining columns are `frame`, form the horizontal
/// generator Z from the frame coordinates of u, and return x Z x⁻¹.
///
/// `frame` is an orthonormal basis of the curved factor's tangent space at
/// p (n vectors on 𝕊ⁿ/ℍⁿ, two on the products; ignored on ℝⁿ).
pub fn gamma_via_frame(
    space: ModelSpace,
    p: &DVector<f64>,
    u: &DVector<f64>,
    frame: &[DVector<f64>],
) -> Result<AlgebraElement> {
    space.check_point(p)?;
    space.check_tangent(p, u)?;
    if let ModelSpace::Euclid(_) = space {
        return Ok(AlgebraElement::translation(u.clone()));
    }
    let x = space.frame_matrix(p, frame)?;
    let m = x.nrows();
    let ub = space.base(u);
    let lorentz = space.algebra_kind().is_lorentz();
    let mut z = DMatrix::zeros(m, m);
    for j in 1..m {
        let vj = x.column(j).into_owned();
        let c = space.form(&pad(space, &ub), &pad(space, &vj));
        if lorentz {
            z[(0, j)] = c;
            z[(j, 0)] = c;
        } else {
            z[(0, j)] = -c;
            z[(j, 0)] = c;
        }
    }
    let x_inv = if lorentz {
        lorentz_inverse(&x)
    } else {
        x.transpose()
    };
    let mat = &x * z * x_inv;
    let line = if space.is_product() {
        DVector::from_element(1, u[3])
    } else {
        DVector::zeros(0)
    };
    Ok(AlgebraElement {
        kind: space.algebra_kind(),
        mat,
        line,
    })
}

/// Re-embed a curved-factor vector so `ModelSpace::form` applies.
fn pad(space: ModelSpace, b: &DVector<f64>) -> DVector<f64> {
    if space.is_product() {
        DVector::from_column_slice(&[b[0], b[1], b[2], 0.0])
    } else {
        b.clone()
    }
}

/// The Gauss map value 𝒩(p) = Γ_p(η) for a unit normal η.
pub fn gauss_map(space: ModelSpace, p: &DVector<f64>, eta: &DVector<f64>) -> Result<GaussValue> {
    space.check_point(p)?;
    space.check_tangent(p, eta)?;
    let norm = space.form(eta, eta).sqrt();
    if (norm - 1.0).abs() > CONTRACT_TOL {
        return Err(GeomError::NotUnit { norm });
    }
    Ok(GaussValue(gamma_unchecked(space, p, eta)))
}

/// The π/2 rotation J_p(u) = p ⊠ u on T_pℍ².
///
/// For a frame {v₂, v₃} with det(p, v₂, v₃) = +1 this sends a v₂ + b v₃ to
/// −b v₂ + a v₃, which is the convention of the identification used by
/// [`crate::algebra::l3_identify`].
pub fn j_rotation(p: &Vector3<f64>, u: &Vector3<f64>) -> Vector3<f64> {
    crate::algebra::lorentz_cross(p, u)
}

/// The twisted normal map (J(η_h), ν) for a surface in ℍ²×ℝ.
pub fn twisted_normal(
    p: &Vector3<f64>,
    eta_h: &Vector3<f64>,
    nu: f64,
) -> Result<(Vector3<f64>, f64)> {
    let pp = -p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    let residual = (pp + 1.0).abs();
    if residual > CONTRACT_TOL || p[0] <= 0.0 {
        return Err(GeomError::NotOnSpace { residual });
    }
    let tangency = (-p[0] * eta_h[0] + p[1] * eta_h[1] + p[2] * eta_h[2]).abs();
    if tangency > CONTRACT_TOL * (1.0 + p.norm() * eta_h.norm()) {
        return Err(GeomError::NotTangent {
            residual: tangency,
        });
    }
    let hh = -eta_h[0] * eta_h[0] + eta_h[1] * eta_h[1] + eta_h[2] * eta_h[2];
    let norm = (hh + nu * nu).max(0.0).sqrt();
    if (norm - 1.0).abs() > CONTRACT_TOL {
        return Err(GeomError::NotUnit { norm });
    }
    Ok((j_rotation(p, eta_h), nu))
}

/// Orthonormal basis of the curved factor's tangent space at p, obtained by
/// Gram–Schmidt (in the model's form) from the coordinate axes.
pub fn standard_frame(space: ModelSpace, p: &DVector<f64>) -> Vec<DVector<f64>> {
    let b = space.base(p);
    let m = b.len();
    if m == 0 {
        return Vec::new();
    }
    let bp = pad(space, &b);
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(m - 1);
    for k in 0..m {
        if out.len() == m - 1 {
            break;
        }
        let mut e = DVector::zeros(m);
        e[k] = 1.0;
        let mut w = space.project_tangent(&bp, &pad(space, &e));
        for f in &out {
            let fp = pad(space, f);
            let c = space.form(&w, &fp);
            w -= fp * c;
        }
        let n2 = space.form(&w, &w);
        if n2 > 1e-6 {
            out.push(space.base(&(w / n2.sqrt())));
        }
    }
    out
}

/// Sign of det(p, v₂, …) for a curved-factor frame.
pub fn frame_orientation(space: ModelSpace, p: &DVector<f64>, frame: &[DVector<f64>]) -> f64 {
    match space.frame_matrix(p, frame) {
        Ok(x) if x.nrows() > 0 => x.determinant().signum(),
        _ => 1.0,
    }
}

/// Kind check used by several callers.
pub fn expect_kind(space: ModelSpace, u: &AlgebraElement) -> Result<()> {
    let k: AlgebraKind = space.algebra_kind();
    if u.kind == k {
        Ok(())
    } else {
        Err(GeomError::KindMismatch {
            left: u.kind,
            right: k,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{algebra_inner, l3_identify};

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = 1.0;
        m
    }

    #[test]
    fn closed_form_basis_cases() {
        let s3 = ModelSpace::Sphere(3);
        let e1 = v(&[1.0, 0.0, 0.0, 0.0]);
        let e2 = v(&[0.0, 1.0, 0.0, 0.0]);
        let e4 = v(&[0.0, 0.0, 0.0, 1.0]);
        let g = gamma(s3, &e1, &e2).unwrap();
        assert_eq!(g.mat, unit(4, 1, 0) - unit(4, 0, 1));

        let h3 = ModelSpace::Hyperbolic(3);
        let g = gamma(h3, &e1, &e2).unwrap();
        assert_eq!(g.mat, unit(4, 0, 1) + unit(4, 1, 0));

        let n = gauss_map(s3, &e1, &e4).unwrap();
        assert_eq!(n.value().mat, unit(4, 3, 0) - unit(4, 0, 3));
        let n = gauss_map(h3, &e1, &e4).unwrap();
        assert_eq!(n.value().mat, unit(4, 0, 3) + unit(4, 3, 0));
        assert!((algebra_inner(n.value(), n.value()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn slice_normal_is_vertical_element() {
        let hp = ModelSpace::HypProd;
        let p = v(&[1.0, 0.0, 0.0, 0.0]);
        let dt = hp.vertical().unwrap();
        let n = gauss_map(hp, &p, &dt).unwrap();
        assert_eq!(n.value().mat, DMatrix::zeros(3, 3));
        assert_eq!(n.value().line[0], 1.0);
    }

    #[test]
    fn frame_oracle_matches_closed_form_at_basis_point() {
        let s3 = ModelSpace::Sphere(3);
        let e1 = v(&[1.0, 0.0, 0.0, 0.0]);
        let frame = standard_frame(s3, &e1);
        let u = v(&[0.0, 1.0, 0.0, 0.0]);
        let a = gamma_via_frame(s3, &e1, &u, &frame).unwrap();
        assert_eq!(a, gamma(s3, &e1, &u).unwrap());
    }

    #[test]
    fn lorentz_frame_inverse_identity() {
        let h3 = ModelSpace::Hyperbolic(3);
        let a = 0.7f64;
        let p = v(&[a.cosh(), a.sinh(), 0.0, 0.0]);
        let frame = standard_frame(h3, &p);
        let x = h3.frame_matrix(&p, &frame).unwrap();
        let inv = x.clone().try_inverse().unwrap();
        assert!((lorentz_inverse(&x) - inv).amax() < 1e-12);
    }

    #[test]
    fn errors_on_bad_input() {
        let s3 = ModelSpace::Sphere(3);
        let e1 = v(&[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            gamma(s3, &e1, &e1),
            Err(GeomError::NotTangent { .. })
        ));
        let long = v(&[0.0, 2.0, 0.0, 0.0]);
        assert!(matches!(
            gauss_map(s3, &e1, &long),
            Err(GeomError::NotUnit { .. })
        ));
        let bad_frame = vec![long.clone(), v(&[0.0, 0.0, 1.0, 0.0]), v(&[0.0, 0.0, 0.0, 1.0])];
        assert!(matches!(
            gamma_via_frame(s3, &e1, &v(&[0.0, 1.0, 0.0, 0.0]), &bad_frame),
            Err(GeomError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn twisted_normal_examples() {
        let p = Vector3::new(1.0, 0.0, 0.0);
        let (j, nu) = twisted_normal(&p, &Vector3::new(0.0, 1.0, 0.0), 0.0).unwrap();
        assert_eq!(j, Vector3::new(0.0, 0.0, 1.0));
        assert_eq!(nu, 0.0);
        let (j, nu) = twisted_normal(&p, &Vector3::zeros(), 1.0).unwrap();
        assert_eq!((j, nu), (Vector3::zeros(), 1.0));
        // the same vector through Γ and the identification
        let g = gamma(
            ModelSpace::HypProd,
            &v(&[1.0, 0.0, 0.0, 0.0]),
            &v(&[0.0, 1.0, 0.0, 0.0]),
        )
        .unwrap();
        assert_eq!(l3_identify(&g).unwrap(), Vector3::new(0.0, 0.0, 1.0));
        assert!(twisted_normal(&p, &Vector3::new(0.0, 2.0, 0.0), 0.0).is_err());
    }
}
