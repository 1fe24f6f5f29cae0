//! Forward-mode automatic differentiation scalars.
//!
//! [`D2`] carries a value together with its gradient and Hessian with
//! respect to up to [`MAX_VARS`] active variables, so one evaluation of a
//! metric component yields the exact first and second coordinate
//! derivatives needed by Christoffel symbols and curvature. There is no
//! step size anywhere: derivatives are propagated through the chain rule
//! and agree with the analytic ones to machine precision.
//!
//! [`Jet1`] is the first-order truncation. It is used when a quantity that
//! already consumed one level of differentiation (a covariant derivative,
//! say) must itself be differentiated once more; assembling such jets
//! explicitly avoids nesting `D2` inside itself.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Maximum number of simultaneously active variables (chart dimension).
pub const MAX_VARS: usize = 8;

/// Scalar abstraction so that linear algebra and frame construction can run
/// on plain numbers, first-order jets, or second-order jets alike.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    /// The numeric part, used for pivoting and branching decisions.
    fn value(self) -> f64;
    fn sqrt(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn value(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

/// Second-order forward-mode AD scalar: value, gradient and symmetric
/// Hessian with respect to the active variables.
#[derive(Clone, Copy, Debug)]
pub struct D2 {
    nvars: usize,
    val: f64,
    grad: [f64; MAX_VARS],
    hess: [[f64; MAX_VARS]; MAX_VARS],
}

impl D2 {
    /// A constant: zero derivatives.
    pub fn constant(val: f64) -> Self {
        D2 {
            nvars: 0,
            val,
            grad: [0.0; MAX_VARS],
            hess: [[0.0; MAX_VARS]; MAX_VARS],
        }
    }

    /// The `idx`-th of `nvars` active variables, seeded with unit gradient.
    pub fn active(val: f64, idx: usize, nvars: usize) -> Self {
        assert!(idx < nvars && nvars <= MAX_VARS);
        let mut grad = [0.0; MAX_VARS];
        grad[idx] = 1.0;
        D2 {
            nvars,
            val,
            grad,
            hess: [[0.0; MAX_VARS]; MAX_VARS],
        }
    }

    /// Seed a whole point: coordinate `i` becomes active variable `i`.
    pub fn seed_point(p: &[f64]) -> Vec<D2> {
        let n = p.len();
        p.iter()
            .enumerate()
            .map(|(i, &x)| D2::active(x, i, n))
            .collect()
    }

    /// Lift a point without activating any variable.
    pub fn const_point(p: &[f64]) -> Vec<D2> {
        p.iter().map(|&x| D2::constant(x)).collect()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn val(&self) -> f64 {
        self.val
    }

    pub fn grad(&self, i: usize) -> f64 {
        self.grad[i]
    }

    pub fn grad_vec(&self, n: usize) -> Vec<f64> {
        self.grad[..n].to_vec()
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[i][j]
    }

    /// Chain rule for a smooth unary function: `f0 = f(u)`, `f1 = f'(u)`,
    /// `f2 = f''(u)`.
    fn unary(self, f0: f64, f1: f64, f2: f64) -> Self {
        let n = self.nvars;
        let mut out = D2::constant(f0);
        out.nvars = n;
        for i in 0..n {
            out.grad[i] = f1 * self.grad[i];
        }
        for i in 0..n {
            for j in 0..=i {
                let v = f2 * self.grad[i] * self.grad[j] + f1 * self.hess[i][j];
                out.hess[i][j] = v;
                out.hess[j][i] = v;
            }
        }
        out
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.unary(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.unary(c, -s, -c)
    }

    pub fn exp(self) -> Self {
        let e = self.val.exp();
        self.unary(e, e, e)
    }

    pub fn ln(self) -> Self {
        let x = self.val;
        self.unary(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn recip(self) -> Self {
        let x = self.val;
        self.unary(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn powi(self, k: i32) -> Self {
        let x = self.val;
        let kf = k as f64;
        self.unary(
            x.powi(k),
            kf * x.powi(k - 1),
            kf * (kf - 1.0) * x.powi(k - 2),
        )
    }

    pub fn abs(self) -> Self {
        // Valid away from zero; catalog fields never differentiate |x| at 0.
        let s = if self.val < 0.0 { -1.0 } else { 1.0 };
        self.unary(self.val.abs(), s, 0.0)
    }

    /// First-order truncation.
    pub fn to_jet1(self) -> Jet1 {
        Jet1 {
            nvars: self.nvars,
            val: self.val,
            grad: self.grad,
        }
    }
}

impl Add for D2 {
    type Output = D2;
    fn add(self, rhs: D2) -> D2 {
        let n = self.nvars.max(rhs.nvars);
        let mut out = D2::constant(self.val + rhs.val);
        out.nvars = n;
        for i in 0..n {
            out.grad[i] = self.grad[i] + rhs.grad[i];
        }
        for i in 0..n {
            for j in 0..n {
                out.hess[i][j] = self.hess[i][j] + rhs.hess[i][j];
            }
        }
        out
    }
}

impl Sub for D2 {
    type Output = D2;
    fn sub(self, rhs: D2) -> D2 {
        let n = self.nvars.max(rhs.nvars);
        let mut out = D2::constant(self.val - rhs.val);
        out.nvars = n;
        for i in 0..n {
            out.grad[i] = self.grad[i] - rhs.grad[i];
        }
        for i in 0..n {
            for j in 0..n {
                out.hess[i][j] = self.hess[i][j] - rhs.hess[i][j];
            }
        }
        out
    }
}

impl Mul for D2 {
    type Output = D2;
    fn mul(self, rhs: D2) -> D2 {
        let n = self.nvars.max(rhs.nvars);
        let mut out = D2::constant(self.val * rhs.val);
        out.nvars = n;
        for i in 0..n {
            out.grad[i] = self.grad[i] * rhs.val + self.val * rhs.grad[i];
        }
        // upper triangle mirrored so the Hessian stays bitwise symmetric
        for i in 0..n {
            for j in 0..=i {
                let v = self.hess[i][j] * rhs.val
                    + self.grad[i] * rhs.grad[j]
                    + self.grad[j] * rhs.grad[i]
                    + self.val * rhs.hess[i][j];
                out.hess[i][j] = v;
                out.hess[j][i] = v;
            }
        }
        out
    }
}

impl Div for D2 {
    type Output = D2;
    #[allow(clippy::suspicious_arithmetic_impl)] // division as a/b = a·b⁻¹
    fn div(self, rhs: D2) -> D2 {
        self * rhs.recip()
    }
}

impl Neg for D2 {
    type Output = D2;
    fn neg(self) -> D2 {
        let mut out = self;
        out.val = -out.val;
        for i in 0..MAX_VARS {
            out.grad[i] = -out.grad[i];
            for j in 0..MAX_VARS {
                out.hess[i][j] = -out.hess[i][j];
            }
        }
        out
    }
}

impl Add<f64> for D2 {
    type Output = D2;
    fn add(self, rhs: f64) -> D2 {
        self + D2::constant(rhs)
    }
}

impl Sub<f64> for D2 {
    type Output = D2;
    fn sub(self, rhs: f64) -> D2 {
        self - D2::constant(rhs)
    }
}

impl Mul<f64> for D2 {
    type Output = D2;
    fn mul(self, rhs: f64) -> D2 {
        self * D2::constant(rhs)
    }
}

impl Mul<D2> for f64 {
    type Output = D2;
    fn mul(self, rhs: D2) -> D2 {
        D2::constant(self) * rhs
    }
}

impl Scalar for D2 {
    fn from_f64(x: f64) -> Self {
        D2::constant(x)
    }
    fn value(self) -> f64 {
        self.val
    }
    fn sqrt(self) -> Self {
        let r = self.val.sqrt();
        self.unary(r, 0.5 / r, -0.25 / (r * r * r))
    }
}

impl From<f64> for D2 {
    fn from(x: f64) -> Self {
        D2::constant(x)
    }
}

/// First-order jet: value plus gradient, no Hessian.
#[derive(Clone, Copy, Debug)]
pub struct Jet1 {
    nvars: usize,
    val: f64,
    grad: [f64; MAX_VARS],
}

impl Jet1 {
    pub fn constant(val: f64) -> Self {
        Jet1 {
            nvars: 0,
            val,
            grad: [0.0; MAX_VARS],
        }
    }

    /// Assemble from explicitly known value and partials.
    pub fn from_parts(val: f64, grad: &[f64]) -> Self {
        let mut g = [0.0; MAX_VARS];
        g[..grad.len()].copy_from_slice(grad);
        Jet1 {
            nvars: grad.len(),
            val,
            grad: g,
        }
    }

    pub fn val(&self) -> f64 {
        self.val
    }

    pub fn grad(&self, i: usize) -> f64 {
        self.grad[i]
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, rhs: Jet1) -> Jet1 {
        let n = self.nvars.max(rhs.nvars);
        let mut out = Jet1::constant(self.val + rhs.val);
        out.nvars = n;
        for i in 0..n {
            out.grad[i] = self.grad[i] + rhs.grad[i];
        }
        out
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, rhs: Jet1) -> Jet1 {
        let n = self.nvars.max(rhs.nvars);
        let mut out = Jet1::constant(self.val - rhs.val);
        out.nvars = n;
        for i in 0..n {
            out.grad[i] = self.grad[i] - rhs.grad[i];
        }
        out
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: Jet1) -> Jet1 {
        let n = self.nvars.max(rhs.nvars);
        let mut out = Jet1::constant(self.val * rhs.val);
        out.nvars = n;
        for i in 0..n {
            out.grad[i] = self.grad[i] * rhs.val + self.val * rhs.grad[i];
        }
        out
    }
}

impl Div for Jet1 {
    type Output = Jet1;
    fn div(self, rhs: Jet1) -> Jet1 {
        let n = self.nvars.max(rhs.nvars);
        let inv = 1.0 / rhs.val;
        let mut out = Jet1::constant(self.val * inv);
        out.nvars = n;
        for i in 0..n {
            out.grad[i] = (self.grad[i] - self.val * inv * rhs.grad[i]) * inv;
        }
        out
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        let mut out = self;
        out.val = -out.val;
        for i in 0..MAX_VARS {
            out.grad[i] = -out.grad[i];
        }
        out
    }
}

impl Scalar for Jet1 {
    fn from_f64(x: f64) -> Self {
        Jet1::constant(x)
    }
    fn value(self) -> f64 {
        self.val
    }
    fn sqrt(self) -> Self {
        let r = self.val.sqrt();
        let n = self.nvars;
        let mut out = Jet1::constant(r);
        out.nvars = n;
        for i in 0..n {
            out.grad[i] = 0.5 / r * self.grad[i];
        }
        out
    }
}
