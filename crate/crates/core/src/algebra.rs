//! Matrix Lie algebras of the model isometry groups.
//!
//! Elements are stored as a square matrix block plus an abelian "line" part.
//! The line part holds the ℝ summand of the product-space algebras
//! (length 1) or the whole translation vector of the Euclidean algebra
//! (length n); matrix kinds leave it empty.
//!
//! The bi-invariant pairings are
//!
//! * `𝔬(m)`:     ⟨u,v⟩ = ½ tr(u vᵀ) = −½ tr(u v)
//! * `𝔬(1,m−1)`: ⟨u,v⟩ = ½ tr(u v), indefinite (boosts positive, rotations negative)
//!
//! with the line parts contributing their dot product.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Tolerance used by [`AlgebraElement::approx_eq`] and the `PartialEq` impl.
pub const ELEMENT_EQ_TOL: f64 = 1e-12;

/// Which algebra an element lives in. The payload is the matrix size, or the
/// vector length for translations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraKind {
    /// `𝔬(m)`, skew-symmetric m×m matrices.
    Orthogonal(usize),
    /// `𝔬(1, m−1)`, m×m matrices with u_ij = −ξ_i ξ_j u_ji.
    Lorentz(usize),
    /// `𝔬(k) ⊕ ℝ`.
    OrthogonalPlusLine(usize),
    /// `𝔬(1, k−1) ⊕ ℝ`.
    LorentzPlusLine(usize),
    /// `ℝⁿ`, translations.
    Translation(usize),
}

impl AlgebraKind {
    pub fn matrix_size(self) -> usize {
        match self {
            AlgebraKind::Orthogonal(m)
            | AlgebraKind::Lorentz(m)
            | AlgebraKind::OrthogonalPlusLine(m)
            | AlgebraKind::LorentzPlusLine(m) => m,
            AlgebraKind::Translation(_) => 0,
        }
    }

    pub fn line_len(self) -> usize {
        match self {
            AlgebraKind::Orthogonal(_) | AlgebraKind::Lorentz(_) => 0,
            AlgebraKind::OrthogonalPlusLine(_) | AlgebraKind::LorentzPlusLine(_) => 1,
            AlgebraKind::Translation(n) => n,
        }
    }

    pub fn is_lorentz(self) -> bool {
        matches!(self, AlgebraKind::Lorentz(_) | AlgebraKind::LorentzPlusLine(_))
    }

    /// Real dimension of the algebra.
    pub fn dim(self) -> usize {
        let m = self.matrix_size();
        m * m.saturating_sub(1) / 2 + self.line_len()
    }

    /// The matrix-block kind with the line summand stripped.
    pub fn matrix_kind(self) -> Option<AlgebraKind> {
        match self {
            AlgebraKind::Orthogonal(m) | AlgebraKind::OrthogonalPlusLine(m) => {
                Some(AlgebraKind::Orthogonal(m))
            }
            AlgebraKind::Lorentz(m) | AlgebraKind::LorentzPlusLine(m) => {
                Some(AlgebraKind::Lorentz(m))
            }
            AlgebraKind::Translation(_) => None,
        }
    }

    /// Signature of the pairing on the coordinate basis of [`AlgebraElement::coords`].
    pub fn basis_signs(self) -> Vec<f64> {
        let m = self.matrix_size();
        let mut signs = Vec::with_capacity(self.dim());
        for i in 0..m {
            for _ in (i + 1)..m {
                signs.push(if self.is_lorentz() && i > 0 { -1.0 } else { 1.0 });
            }
        }
        signs.extend(std::iter::repeat_n(1.0, self.line_len()));
        signs
    }

    fn check_same(self, other: AlgebraKind) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(GeomError::KindMismatch {
                left: self,
                right: other,
            })
        }
    }
}

/// ξ_i = −1 for i = 0, +1 otherwise.
#[inline]
pub fn xi(i: usize) -> f64 {
    if i == 0 {
        -1.0
    } else {
        1.0
    }
}

/// The Lorentz product (x∗y) = −x₁y₁ + x₂y₂ + … on vectors of any length.
pub fn lorentz_dot(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    x.iter()
        .zip(y.iter())
        .enumerate()
        .map(|(i, (a, b))| xi(i) * a * b)
        .sum()
}

/// diag(−1, 1, …, 1).
pub fn lorentz_gram(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| if i == j { xi(i) } else { 0.0 })
}

#[derive(Debug, Clone)]
pub struct AlgebraElement {
    pub kind: AlgebraKind,
    pub mat: DMatrix<f64>,
    pub line: DVector<f64>,
}

impl AlgebraElement {
    /// Checked constructor: verifies shapes and the kind's symmetry pattern.
    pub fn new(kind: AlgebraKind, mat: DMatrix<f64>, line: DVector<f64>) -> Result<Self> {
        let m = kind.matrix_size();
        if mat.nrows() != m || mat.ncols() != m {
            return Err(GeomError::DimensionMismatch {
                expected: m,
                got: mat.nrows(),
            });
        }
        if line.len() != kind.line_len() {
            return Err(GeomError::DimensionMismatch {
                expected: kind.line_len(),
                got: line.len(),
            });
        }
        let el = AlgebraElement { kind, mat, line };
        let residual = el.pattern_residual();
        let scale = 1.0_f64.max(el.mat.amax());
        if residual > 1e-10 * scale {
            return Err(GeomError::NotInAlgebra { kind, residual });
        }
        Ok(el)
    }

    /// Build from a matrix block with no line part (`𝔬(m)` or `𝔬(1,m−1)`).
    pub fn from_matrix(kind: AlgebraKind, mat: DMatrix<f64>) -> Result<Self> {
        Self::new(kind, mat, DVector::zeros(kind.line_len()))
    }

    pub fn translation(v: DVector<f64>) -> Self {
        AlgebraElement {
            kind: AlgebraKind::Translation(v.len()),
            mat: DMatrix::zeros(0, 0),
            line: v,
        }
    }

    pub fn zero(kind: AlgebraKind) -> Self {
        let m = kind.matrix_size();
        AlgebraElement {
            kind,
            mat: DMatrix::zeros(m, m),
            line: DVector::zeros(kind.line_len()),
        }
    }

    /// Largest violation of the kind's (anti)symmetry pattern.
    pub fn pattern_residual(&self) -> f64 {
        let m = self.kind.matrix_size();
        let lorentz = self.kind.is_lorentz();
        let mut worst = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                let sign = if lorentz { -xi(i) * xi(j) } else { -1.0 };
                worst = worst.max((self.mat[(i, j)] - sign * self.mat[(j, i)]).abs());
            }
        }
        worst
    }

    /// Coordinates in the standard basis: for i < j the generators
    /// E_ij − E_ji (or E_0j + E_j0 for Lorentz boosts), then the line part.
    pub fn coords(&self) -> DVector<f64> {
        let m = self.kind.matrix_size();
        let mut c = Vec::with_capacity(self.kind.dim());
        for i in 0..m {
            for j in (i + 1)..m {
                c.push(self.mat[(i, j)]);
            }
        }
        c.extend(self.line.iter().copied());
        DVector::from_vec(c)
    }

    pub fn from_coords(kind: AlgebraKind, coords: &[f64]) -> Result<Self> {
        if coords.len() != kind.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: kind.dim(),
                got: coords.len(),
            });
        }
        let m = kind.matrix_size();
        let mut mat = DMatrix::zeros(m, m);
        let mut k = 0;
        for i in 0..m {
            for j in (i + 1)..m {
                mat[(i, j)] = coords[k];
                mat[(j, i)] = if kind.is_lorentz() && i == 0 {
                    coords[k]
                } else {
                    -coords[k]
                };
                k += 1;
            }
        }
        let line = DVector::from_column_slice(&coords[k..]);
        Ok(AlgebraElement { kind, mat, line })
    }

    /// The k-th standard basis element.
    pub fn basis(kind: AlgebraKind, k: usize) -> Self {
        let mut c = vec![0.0; kind.dim()];
        c[k] = 1.0;
        Self::from_coords(kind, &c).expect("basis index within dimension")
    }

    /// Euclidean norm of [`coords`](Self::coords); metric-free and positive.
    pub fn coord_norm(&self) -> f64 {
        self.coords().norm()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.kind == other.kind
            && (&self.mat - &other.mat).amax() <= tol
            && (&self.line - &other.line).amax() <= tol
    }

    pub fn scale(&self, s: f64) -> Self {
        AlgebraElement {
            kind: self.kind,
            mat: &self.mat * s,
            line: &self.line * s,
        }
    }

    /// Matrix block as its own element (drops the line summand).
    pub fn matrix_part(&self) -> Option<Self> {
        self.kind.matrix_kind().map(|kind| AlgebraElement {
            kind,
            mat: self.mat.clone(),
            line: DVector::zeros(0),
        })
    }

    /// Group element exp(t·self).
    pub fn exp(&self, t: f64) -> GroupElement {
        match self.kind {
            AlgebraKind::Translation(n) => GroupElement {
                mat: DMatrix::identity(n, n),
                shift: &self.line * t,
            },
            _ => GroupElement {
                mat: matrix_exp(self, t),
                shift: &self.line * t,
            },
        }
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, ELEMENT_EQ_TOL)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.mat)?;
        if self.line.len() > 0 {
            write!(f, " ⊕ {:?}", self.line.as_slice())?;
        }
        Ok(())
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.kind, rhs.kind, "adding elements of different algebras");
        AlgebraElement {
            kind: self.kind,
            mat: &self.mat + &rhs.mat,
            line: &self.line + &rhs.line,
        }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.kind, rhs.kind, "subtracting elements of different algebras");
        AlgebraElement {
            kind: self.kind,
            mat: &self.mat - &rhs.mat,
            line: &self.line - &rhs.line,
        }
    }
}

impl Mul<f64> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, s: f64) -> AlgebraElement {
        self.scale(s)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(-1.0)
    }
}

/// Bi-invariant pairing. Indefinite on Lorentz kinds.
pub fn algebra_inner(u: &AlgebraElement, v: &AlgebraElement) -> Result<f64> {
    u.kind.check_same(v.kind)?;
    let block = if u.kind.is_lorentz() {
        0.5 * (&u.mat * &v.mat).trace()
    } else {
        0.5 * (&u.mat * v.mat.transpose()).trace()
    };
    Ok(block + u.line.dot(&v.line))
}

/// Lie bracket; the abelian summand brackets to zero.
pub fn bracket(u: &AlgebraElement, v: &AlgebraElement) -> Result<AlgebraElement> {
    u.kind.check_same(v.kind)?;
    Ok(AlgebraElement {
        kind: u.kind,
        mat: &u.mat * &v.mat - &v.mat * &u.mat,
        line: DVector::zeros(u.kind.line_len()),
    })
}

fn check_len(x: &DVector<f64>, y: &DVector<f64>) -> Result<()> {
    if x.len() == y.len() {
        Ok(())
    } else {
        Err(GeomError::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        })
    }
}

/// Φ(x, y)_ij = x_i y_j.
pub fn phi(x: &DVector<f64>, y: &DVector<f64>) -> Result<DMatrix<f64>> {
    check_len(x, y)?;
    Ok(x * y.transpose())
}

/// Ψ(x, y)_ij = ξ_j y_j x_i: Φ with the first column negated.
pub fn psi(x: &DVector<f64>, y: &DVector<f64>) -> Result<DMatrix<f64>> {
    check_len(x, y)?;
    Ok(DMatrix::from_fn(x.len(), y.len(), |i, j| xi(j) * y[j] * x[i]))
}

/// Matrix exponential (nalgebra's scaling and squaring).
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().exp()
}

/// exp(t·u) of the matrix block of `u`.
pub fn matrix_exp(u: &AlgebraElement, t: f64) -> DMatrix<f64> {
    expm(&(&u.mat * t))
}

/// An isometry-group element: a matrix acting on the curved factor and a
/// translation acting on the flat factor.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub mat: DMatrix<f64>,
    pub shift: DVector<f64>,
}

impl GroupElement {
    pub fn identity(kind: AlgebraKind) -> Self {
        match kind {
            AlgebraKind::Translation(n) => GroupElement {
                mat: DMatrix::identity(n, n),
                shift: DVector::zeros(n),
            },
            _ => {
                let m = kind.matrix_size();
                GroupElement {
                    mat: DMatrix::identity(m, m),
                    shift: DVector::zeros(kind.line_len()),
                }
            }
        }
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        // (A, a)∘(B, b) acts as x ↦ A(Bx + b) + a on the flat factor; the
        // matrix kinds carry no linear part on the line, so shifts just add.
        let shift = if self.mat.nrows() == self.shift.len() {
            &self.mat * &other.shift + &self.shift
        } else {
            &self.shift + &other.shift
        };
        GroupElement {
            mat: &self.mat * &other.mat,
            shift,
        }
    }

    /// Adjoint action g u g⁻¹ on an element of the matching algebra.
    pub fn adjoint(&self, u: &AlgebraElement) -> AlgebraElement {
        match u.kind {
            AlgebraKind::Translation(_) => AlgebraElement::translation(&self.mat * &u.line),
            _ => {
                let inv = self
                    .mat
                    .clone()
                    .try_inverse()
                    .expect("group matrices are invertible");
                AlgebraElement {
                    kind: u.kind,
                    mat: &self.mat * &u.mat * inv,
                    line: u.line.clone(),
                }
            }
        }
    }
}

/// Lorentz cross product a ⊠ b = Ĩ(a × b), characterised by (a ⊠ b) ∗ c = det(a, b, c).
pub fn lorentz_cross(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    let c = a.cross(b);
    Vector3::new(-c[0], c[1], c[2])
}

/// Identify `𝔬(1,2)` with 𝕃³: returns the w with u z = w ⊠ z for every z.
///
/// In terms of the matrix pattern (0,−r,s / −r,0,−t / s,t,0) this is
/// w = (t, −s, −r). The sign on the spatial entries makes the map
/// equivariant, so Γ_p(u) ↦ p ⊠ u is tangent to ℍ² at every p.
pub fn l3_identify(u: &AlgebraElement) -> Result<Vector3<f64>> {
    match u.kind {
        AlgebraKind::Lorentz(3) | AlgebraKind::LorentzPlusLine(3) => {}
        other => {
            return Err(GeomError::KindMismatch {
                left: other,
                right: AlgebraKind::Lorentz(3),
            })
        }
    }
    let m = &u.mat;
    Ok(Vector3::new(m[(2, 1)], -m[(0, 2)], m[(0, 1)]))
}

/// Inverse of [`l3_identify`].
pub fn l3_matrix(w: &Vector3<f64>) -> AlgebraElement {
    let (t, s, r) = (w[0], -w[1], -w[2]);
    let mat = DMatrix::from_row_slice(3, 3, &[0.0, -r, s, -r, 0.0, -t, s, t, 0.0]);
    AlgebraElement {
        kind: AlgebraKind::Lorentz(3),
        mat,
        line: DVector::zeros(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = 1.0;
        m
    }

    #[test]
    fn pairing_examples() {
        let rot = AlgebraElement::from_matrix(
            AlgebraKind::Orthogonal(4),
            unit(4, 0, 1) - unit(4, 1, 0),
        )
        .unwrap();
        assert!((algebra_inner(&rot, &rot).unwrap() - 1.0).abs() < 1e-15);

        let boost =
            AlgebraElement::from_matrix(AlgebraKind::Lorentz(4), unit(4, 0, 1) + unit(4, 1, 0))
                .unwrap();
        assert!((algebra_inner(&boost, &boost).unwrap() - 1.0).abs() < 1e-15);

        let spin =
            AlgebraElement::from_matrix(AlgebraKind::Lorentz(4), unit(4, 1, 2) - unit(4, 2, 1))
                .unwrap();
        assert!((algebra_inner(&spin, &spin).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let a = AlgebraElement::zero(AlgebraKind::Orthogonal(3));
        let b = AlgebraElement::zero(AlgebraKind::Lorentz(3));
        assert!(matches!(
            algebra_inner(&a, &b),
            Err(GeomError::KindMismatch { .. })
        ));
        assert!(bracket(&a, &b).is_err());
    }

    #[test]
    fn constructor_rejects_wrong_pattern() {
        let sym = unit(3, 0, 1) + unit(3, 1, 0);
        assert!(AlgebraElement::from_matrix(AlgebraKind::Orthogonal(3), sym.clone()).is_err());
        assert!(AlgebraElement::from_matrix(AlgebraKind::Lorentz(3), sym).is_ok());
        let skew = unit(3, 0, 1) - unit(3, 1, 0);
        assert!(AlgebraElement::from_matrix(AlgebraKind::Lorentz(3), skew).is_err());
    }

    #[test]
    fn bracket_of_rotations() {
        let k = AlgebraKind::Orthogonal(3);
        let a = AlgebraElement::from_matrix(k, unit(3, 0, 1) - unit(3, 1, 0)).unwrap();
        let b = AlgebraElement::from_matrix(k, unit(3, 0, 2) - unit(3, 2, 0)).unwrap();
        let expected =
            AlgebraElement::from_matrix(k, -(unit(3, 1, 2) - unit(3, 2, 1))).unwrap();
        assert_eq!(bracket(&a, &b).unwrap(), expected);
        assert_eq!(bracket(&a, &a).unwrap(), AlgebraElement::zero(k));
    }

    #[test]
    fn bracket_drops_line_part() {
        let k = AlgebraKind::LorentzPlusLine(3);
        let u = AlgebraElement::new(
            k,
            unit(3, 0, 1) + unit(3, 1, 0),
            DVector::from_element(1, 2.0),
        )
        .unwrap();
        let v = AlgebraElement::new(
            k,
            unit(3, 1, 2) - unit(3, 2, 1),
            DVector::from_element(1, -3.0),
        )
        .unwrap();
        let w = bracket(&u, &v).unwrap();
        assert_eq!(w.line[0], 0.0);
        let plain = bracket(&u.matrix_part().unwrap(), &v.matrix_part().unwrap()).unwrap();
        assert!((w.mat - plain.mat).amax() < 1e-15);
    }

    #[test]
    fn phi_and_psi_basis_entries() {
        let p = phi(&e(4, 0), &e(4, 1)).unwrap();
        assert_eq!(p, unit(4, 0, 1));
        assert_eq!(psi(&e(4, 0), &e(4, 1)).unwrap(), unit(4, 0, 1));
        assert_eq!(psi(&e(4, 1), &e(4, 0)).unwrap(), -unit(4, 1, 0));
        assert!(phi(&e(3, 0), &e(4, 0)).is_err());
    }

    #[test]
    fn antisymmetrised_phi_is_orthogonal_algebra() {
        let x = DVector::from_vec(vec![0.3, -1.2, 0.7, 2.0]);
        let y = DVector::from_vec(vec![1.1, 0.4, -0.5, 0.2]);
        let m = phi(&x, &y).unwrap() - phi(&y, &x).unwrap();
        assert!(AlgebraElement::from_matrix(AlgebraKind::Orthogonal(4), m).is_ok());
    }

    #[test]
    fn planar_rotation_and_boost() {
        let t = 0.83;
        let rot = AlgebraElement::from_matrix(
            AlgebraKind::Orthogonal(2),
            unit(2, 0, 1) - unit(2, 1, 0),
        )
        .unwrap();
        let r = matrix_exp(&rot, t);
        // exp(t(E12 − E21)) has first column (cos t, −sin t)
        let expected = DMatrix::from_row_slice(2, 2, &[t.cos(), t.sin(), -t.sin(), t.cos()]);
        assert!((r - expected).amax() < 1e-15);

        let boost =
            AlgebraElement::from_matrix(AlgebraKind::Lorentz(2), unit(2, 0, 1) + unit(2, 1, 0))
                .unwrap();
        let b = matrix_exp(&boost, t);
        let expected = DMatrix::from_row_slice(2, 2, &[t.cosh(), t.sinh(), t.sinh(), t.cosh()]);
        assert!((b - expected).amax() < 1e-14);

        let zero = matrix_exp(&boost, 0.0);
        assert_eq!(zero, DMatrix::identity(2, 2));
    }

    #[test]
    fn expm_matches_series_on_large_argument() {
        // oracle: Taylor series of exp(A/2^k) squared k times
        let a = DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 4.0, -2.5, 4.0, 0.0, 7.0, -2.5, -7.0, 0.0],
        );
        let k = 10;
        let small = &a / 2f64.powi(k);
        let mut term = DMatrix::<f64>::identity(3, 3);
        let mut sum = term.clone();
        for i in 1..30 {
            term = &term * &small / i as f64;
            sum += &term;
        }
        for _ in 0..k {
            sum = &sum * &sum;
        }
        let got = expm(&a);
        assert!((&got - &sum).amax() < 1e-9 * sum.amax());
    }

    #[test]
    fn coordinates_round_trip_and_signature() {
        let k = AlgebraKind::LorentzPlusLine(4);
        let c: Vec<f64> = (0..k.dim()).map(|i| 0.3 * i as f64 - 0.7).collect();
        let u = AlgebraElement::from_coords(k, &c).unwrap();
        assert!(u.pattern_residual() == 0.0);
        assert_eq!(u.coords().as_slice(), c.as_slice());
        let signs = k.basis_signs();
        for a in 0..k.dim() {
            for b in 0..k.dim() {
                let ip = algebra_inner(&AlgebraElement::basis(k, a), &AlgebraElement::basis(k, b))
                    .unwrap();
                let expected = if a == b { signs[a] } else { 0.0 };
                assert!((ip - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn l3_identification_examples() {
        // t = 1, s = r = 0 is the matrix E₃₂ − E₂₃ in the (0,−r,s / −r,0,−t / s,t,0) pattern
        let u = AlgebraElement::from_matrix(AlgebraKind::Lorentz(3), unit(3, 2, 1) - unit(3, 1, 2))
            .unwrap();
        assert_eq!(l3_identify(&u).unwrap(), Vector3::new(1.0, 0.0, 0.0));
        assert_eq!(
            l3_identify(&AlgebraElement::zero(AlgebraKind::Lorentz(3))).unwrap(),
            Vector3::zeros()
        );
        assert!(l3_identify(&AlgebraElement::zero(AlgebraKind::Orthogonal(3))).is_err());
        let w = Vector3::new(0.3, -1.5, 2.25);
        assert_eq!(l3_identify(&l3_matrix(&w)).unwrap(), w);
    }

    #[test]
    fn l3_matrix_acts_by_lorentz_cross() {
        let w = Vector3::new(0.4, 1.3, -0.8);
        let z = Vector3::new(-0.2, 0.9, 1.7);
        let m = l3_matrix(&w).mat;
        let zz = DVector::from_column_slice(z.as_slice());
        let lhs = &m * zz;
        let rhs = lorentz_cross(&w, &z);
        for i in 0..3 {
            assert!((lhs[i] - rhs[i]).abs() < 1e-15);
        }
        // ⟨M_w, M_w⟩ equals the Lorentz square of w
        let ip = algebra_inner(&l3_matrix(&w), &l3_matrix(&w)).unwrap();
        let lw = -w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
        assert!((ip - lw).abs() < 1e-14);
    }
}
