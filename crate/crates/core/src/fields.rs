//! Smooth fields on a chart: pure functions of the coordinates, evaluable
//! on jets.
//!
//! Every field is a closure over [`D2`] inputs. Seeding the coordinates as
//! active variables and evaluating once yields the field's components
//! together with their exact first and second coordinate derivatives;
//! composite fields (projections of fields, φ applied to a field, basic
//! lifts) are built by composing closures, so the seeds flow through the
//! entire pipeline and no finite differencing is ever involved.

use crate::ad::D2;
use std::sync::Arc;

type VecFn = dyn Fn(&[D2]) -> Vec<D2> + Send + Sync;
type ScalFn = dyn Fn(&[D2]) -> D2 + Send + Sync;
type MatFn = dyn Fn(&[D2]) -> Vec<Vec<D2>> + Send + Sync;

/// Scalar-valued field.
#[derive(Clone)]
pub struct ScalarField {
    f: Arc<ScalFn>,
}

impl ScalarField {
    pub fn new(f: impl Fn(&[D2]) -> D2 + Send + Sync + 'static) -> Self {
        ScalarField { f: Arc::new(f) }
    }

    pub fn eval_d2(&self, x: &[D2]) -> D2 {
        (self.f)(x)
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        (self.f)(&D2::const_point(p)).val()
    }

    /// Value, gradient and Hessian at `p`.
    pub fn jet(&self, p: &[f64]) -> D2 {
        (self.f)(&D2::seed_point(p))
    }
}

/// Vector-valued field (components in the coordinate basis).
#[derive(Clone)]
pub struct VectorField {
    f: Arc<VecFn>,
}

impl VectorField {
    pub fn new(f: impl Fn(&[D2]) -> Vec<D2> + Send + Sync + 'static) -> Self {
        VectorField { f: Arc::new(f) }
    }

    /// Field with constant components.
    pub fn constant(components: Vec<f64>) -> Self {
        VectorField::new(move |_| components.iter().map(|&c| D2::constant(c)).collect())
    }

    /// The `i`-th coordinate field ∂ᵢ on a chart of dimension `dim`.
    pub fn coordinate(i: usize, dim: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[i] = 1.0;
        VectorField::constant(c)
    }

    pub fn eval_d2(&self, x: &[D2]) -> Vec<D2> {
        (self.f)(x)
    }

    pub fn eval(&self, p: &[f64]) -> Vec<f64> {
        (self.f)(&D2::const_point(p))
            .iter()
            .map(|c| c.val())
            .collect()
    }

    /// Components with their derivative jets at `p`.
    pub fn jet(&self, p: &[f64]) -> Vec<D2> {
        (self.f)(&D2::seed_point(p))
    }
}

/// One-form field (cotangent components).
#[derive(Clone)]
pub struct OneFormField {
    f: Arc<VecFn>,
}

impl OneFormField {
    pub fn new(f: impl Fn(&[D2]) -> Vec<D2> + Send + Sync + 'static) -> Self {
        OneFormField { f: Arc::new(f) }
    }

    pub fn eval_d2(&self, x: &[D2]) -> Vec<D2> {
        (self.f)(x)
    }

    pub fn eval(&self, p: &[f64]) -> Vec<f64> {
        (self.f)(&D2::const_point(p))
            .iter()
            .map(|c| c.val())
            .collect()
    }

    pub fn jet(&self, p: &[f64]) -> Vec<D2> {
        (self.f)(&D2::seed_point(p))
    }

    /// Pairing η(X) at a point.
    pub fn apply(&self, p: &[f64], x: &[f64]) -> f64 {
        self.eval(p).iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// Endomorphism field: a matrix whose columns are the images of the
/// coordinate fields.
#[derive(Clone)]
pub struct EndoField {
    f: Arc<MatFn>,
}

impl EndoField {
    pub fn new(f: impl Fn(&[D2]) -> Vec<Vec<D2>> + Send + Sync + 'static) -> Self {
        EndoField { f: Arc::new(f) }
    }

    pub fn constant(m: Vec<Vec<f64>>) -> Self {
        EndoField::new(move |_| {
            m.iter()
                .map(|row| row.iter().map(|&c| D2::constant(c)).collect())
                .collect()
        })
    }

    pub fn eval_d2(&self, x: &[D2]) -> Vec<Vec<D2>> {
        (self.f)(x)
    }

    pub fn eval(&self, p: &[f64]) -> Vec<Vec<f64>> {
        (self.f)(&D2::const_point(p))
            .iter()
            .map(|row| row.iter().map(|c| c.val()).collect())
            .collect()
    }

    pub fn jet(&self, p: &[f64]) -> Vec<Vec<D2>> {
        (self.f)(&D2::seed_point(p))
    }

    /// Apply to a vector pointwise.
    pub fn apply(&self, p: &[f64], x: &[f64]) -> Vec<f64> {
        let m = self.eval(p);
        m.iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Compose with a vector field: q ↦ M(q) X(q).
    pub fn compose(&self, x: &VectorField) -> VectorField {
        let m = self.clone();
        let x = x.clone();
        VectorField::new(move |q| {
            let mat = m.eval_d2(q);
            let v = x.eval_d2(q);
            mat.iter()
                .map(|row| {
                    row.iter()
                        .zip(&v)
                        .fold(D2::constant(0.0), |acc, (&a, &b)| acc + a * b)
                })
                .collect()
        })
    }
}

/// Antisymmetric 2-form field, stored as its component matrix.
#[derive(Clone)]
pub struct TwoFormField {
    f: Arc<MatFn>,
}

impl TwoFormField {
    pub fn new(f: impl Fn(&[D2]) -> Vec<Vec<D2>> + Send + Sync + 'static) -> Self {
        TwoFormField { f: Arc::new(f) }
    }

    pub fn eval_d2(&self, x: &[D2]) -> Vec<Vec<D2>> {
        (self.f)(x)
    }

    pub fn eval(&self, p: &[f64]) -> Vec<Vec<f64>> {
        (self.f)(&D2::const_point(p))
            .iter()
            .map(|row| row.iter().map(|c| c.val()).collect())
            .collect()
    }

    pub fn jet(&self, p: &[f64]) -> Vec<Vec<D2>> {
        (self.f)(&D2::seed_point(p))
    }

    pub fn apply(&self, p: &[f64], x: &[f64], y: &[f64]) -> f64 {
        let m = self.eval(p);
        let mut acc = 0.0;
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                acc += xi * m[i][j] * yj;
            }
        }
        acc
    }
}

/// Smooth map between charts (e.g. the submersion projection).
#[derive(Clone)]
pub struct MapField {
    f: Arc<VecFn>,
}

impl MapField {
    pub fn new(f: impl Fn(&[D2]) -> Vec<D2> + Send + Sync + 'static) -> Self {
        MapField { f: Arc::new(f) }
    }

    pub fn eval_d2(&self, x: &[D2]) -> Vec<D2> {
        (self.f)(x)
    }

    pub fn eval(&self, p: &[f64]) -> Vec<f64> {
        (self.f)(&D2::const_point(p))
            .iter()
            .map(|c| c.val())
            .collect()
    }

    pub fn jet(&self, p: &[f64]) -> Vec<D2> {
        (self.f)(&D2::seed_point(p))
    }
}

/// Matrix-valued field; used for closed-form differentials of projections.
#[derive(Clone)]
pub struct MatrixField {
    f: Arc<MatFn>,
}

impl MatrixField {
    pub fn new(f: impl Fn(&[D2]) -> Vec<Vec<D2>> + Send + Sync + 'static) -> Self {
        MatrixField { f: Arc::new(f) }
    }

    pub fn constant(m: Vec<Vec<f64>>) -> Self {
        MatrixField::new(move |_| {
            m.iter()
                .map(|row| row.iter().map(|&c| D2::constant(c)).collect())
                .collect()
        })
    }

    pub fn eval_d2(&self, x: &[D2]) -> Vec<Vec<D2>> {
        (self.f)(x)
    }

    pub fn eval(&self, p: &[f64]) -> Vec<Vec<f64>> {
        (self.f)(&D2::const_point(p))
            .iter()
            .map(|row| row.iter().map(|c| c.val()).collect())
            .collect()
    }
}
