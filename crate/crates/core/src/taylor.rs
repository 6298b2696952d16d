//! Truncated two-variable Taylor polynomials of total degree ≤ 3.
//!
//! Evaluating a parametrization on `T3::var_u(u)` and `T3::var_v(v)` yields
//! all partial derivatives up to third order exactly (to rounding), which the
//! surface module uses for the metric, second fundamental form and the
//! intrinsic curvature.

use std::ops::{Add, Div, Mul, Neg, Sub};

const N: usize = 10;

/// Index of the monomial du^i dv^j, i + j ≤ 3.
#[inline]
const fn idx(i: usize, j: usize) -> usize {
    // ordered by total degree: 1 | u v | uu uv vv | uuu uuv uvv vvv
    let d = i + j;
    d * (d + 1) / 2 + j
}

const MONOMIALS: [(usize, usize); N] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T3 {
    c: [f64; N],
}

impl T3 {
    pub fn constant(x: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = x;
        T3 { c }
    }

    pub fn var_u(u: f64) -> Self {
        let mut t = T3::constant(u);
        t.c[idx(1, 0)] = 1.0;
        t
    }

    pub fn var_v(v: f64) -> Self {
        let mut t = T3::constant(v);
        t.c[idx(0, 1)] = 1.0;
        t
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// ∂^{i+j} / ∂u^i ∂v^j at the expansion point.
    pub fn d(&self, i: usize, j: usize) -> f64 {
        assert!(i + j <= 3, "derivative order above 3");
        let fact = |k: usize| -> f64 { (1..=k).product::<usize>() as f64 };
        self.c[idx(i, j)] * fact(i) * fact(j)
    }

    /// f(self) given f and its first three derivatives at the constant term.
    pub fn compose(&self, f0: f64, f1: f64, f2: f64, f3: f64) -> Self {
        let mut h = *self;
        h.c[0] = 0.0;
        let h2 = h * h;
        let h3 = h2 * h;
        let mut out = T3::constant(f0);
        for k in 1..N {
            out.c[k] = f1 * h.c[k] + 0.5 * f2 * h2.c[k] + f3 / 6.0 * h3.c[k];
        }
        out
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        self.compose(s, c, -s, -c)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        self.compose(c, -s, -c, s)
    }

    pub fn exp(self) -> Self {
        let e = self.c[0].exp();
        self.compose(e, e, e, e)
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose(s, c, s, c)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose(c, s, c, s)
    }

    pub fn sqrt(self) -> Self {
        let r = self.c[0].sqrt();
        self.compose(r, 0.5 / r, -0.25 / (r * r * r), 0.375 / (r * r * r * r * r))
    }

    pub fn recip(self) -> Self {
        let x = self.c[0];
        self.compose(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x), -6.0 / (x * x * x * x))
    }

    pub fn powi(self, n: i32) -> Self {
        let mut out = T3::constant(1.0);
        for _ in 0..n.unsigned_abs() {
            out = out * self;
        }
        if n < 0 {
            out.recip()
        } else {
            out
        }
    }

    pub fn scale(self, s: f64) -> Self {
        let mut out = self;
        out.c.iter_mut().for_each(|x| *x *= s);
        out
    }
}

impl From<f64> for T3 {
    fn from(x: f64) -> Self {
        T3::constant(x)
    }
}

impl Add for T3 {
    type Output = T3;
    fn add(mut self, rhs: T3) -> T3 {
        for k in 0..N {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl Sub for T3 {
    type Output = T3;
    fn sub(mut self, rhs: T3) -> T3 {
        for k in 0..N {
            self.c[k] -= rhs.c[k];
        }
        self
    }
}

impl Neg for T3 {
    type Output = T3;
    fn neg(self) -> T3 {
        self.scale(-1.0)
    }
}

impl Mul for T3 {
    type Output = T3;
    fn mul(self, rhs: T3) -> T3 {
        let mut c = [0.0; N];
        for (a, &(i1, j1)) in MONOMIALS.iter().enumerate() {
            if self.c[a] == 0.0 {
                continue;
            }
            for (b, &(i2, j2)) in MONOMIALS.iter().enumerate() {
                if i1 + j1 + i2 + j2 <= 3 {
                    c[idx(i1 + i2, j1 + j2)] += self.c[a] * rhs.c[b];
                }
            }
        }
        T3 { c }
    }
}

impl Div for T3 {
    type Output = T3;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: T3) -> T3 {
        self * rhs.recip()
    }
}

impl Add<f64> for T3 {
    type Output = T3;
    fn add(mut self, rhs: f64) -> T3 {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for T3 {
    type Output = T3;
    fn sub(mut self, rhs: f64) -> T3 {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for T3 {
    type Output = T3;
    fn mul(self, rhs: f64) -> T3 {
        self.scale(rhs)
    }
}

impl Div<f64> for T3 {
    type Output = T3;
    fn div(self, rhs: f64) -> T3 {
        self.scale(1.0 / rhs)
    }
}

impl Mul<T3> for f64 {
    type Output = T3;
    fn mul(self, rhs: T3) -> T3 {
        rhs.scale(self)
    }
}

impl Add<T3> for f64 {
    type Output = T3;
    fn add(self, rhs: T3) -> T3 {
        rhs + self
    }
}

impl Sub<T3> for f64 {
    type Output = T3;
    fn sub(self, rhs: T3) -> T3 {
        -rhs + self
    }
}
