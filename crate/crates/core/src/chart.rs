//! Coordinate chart patches: a box domain plus a smooth metric field.

use crate::ad::D2;
use crate::error::{GeomError, Result};
use crate::fields::MatrixField;
use crate::linalg;

/// A single coordinate chart with a Riemannian metric. The domain is a
/// closed box shrunk away from any coordinate singularity, so the metric
/// stays positive definite on all of it.
#[derive(Clone)]
pub struct ChartPatch {
    pub name: String,
    pub dim: usize,
    pub domain: Vec<(f64, f64)>,
    metric: MatrixField,
}

impl ChartPatch {
    pub fn new(name: impl Into<String>, domain: Vec<(f64, f64)>, metric: MatrixField) -> Self {
        ChartPatch {
            name: name.into(),
            dim: domain.len(),
            domain,
            metric,
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim
            && p.iter()
                .zip(&self.domain)
                .all(|(&x, &(lo, hi))| x >= lo && x <= hi)
    }

    pub fn check_domain(&self, p: &[f64]) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(GeomError::OutOfDomain {
                chart: self.name.clone(),
                point: p.to_vec(),
            })
        }
    }

    /// Metric matrix at `p`, verified symmetric positive definite.
    pub fn metric_at(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_domain(p)?;
        let g = self.metric.eval(p);
        if let Err((index, pivot)) = linalg::cholesky(&g) {
            return Err(GeomError::NotSpd {
                point: p.to_vec(),
                pivot,
                index,
            });
        }
        Ok(g)
    }

    /// Metric evaluated on jet coordinates (no domain or SPD check; the
    /// caller controls the base point).
    pub fn metric_d2(&self, x: &[D2]) -> Vec<Vec<D2>> {
        self.metric.eval_d2(x)
    }

    /// Metric with first and second coordinate derivatives at `p`.
    pub fn metric_jet(&self, p: &[f64]) -> Result<Vec<Vec<D2>>> {
        self.check_domain(p)?;
        Ok(self.metric.eval_d2(&D2::seed_point(p)))
    }

    /// Pointwise metric pairing g(X, Y).
    pub fn inner(&self, p: &[f64], x: &[f64], y: &[f64]) -> Result<f64> {
        let g = self.metric_at(p)?;
        Ok(linalg::g_inner(&g, x, y))
    }

    pub fn norm(&self, p: &[f64], x: &[f64]) -> Result<f64> {
        Ok(self.inner(p, x, x)?.max(0.0).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclidean(dim: usize) -> ChartPatch {
        ChartPatch::new(
            "flat",
            vec![(-2.0, 2.0); dim],
            MatrixField::constant(linalg::identity::<f64>(dim)),
        )
    }

    #[test]
    fn euclidean_metric_is_identity() {
        let patch = euclidean(3);
        let g = patch.metric_at(&[0.3, -1.0, 2.0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g[i][j], if i == j { 1.0 } else { 0.0 });
            }
        }
        // orthonormal coordinate fields
        assert_eq!(
            patch
                .inner(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0])
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let patch = euclidean(2);
        assert!(matches!(
            patch.metric_at(&[5.0, 0.0]),
            Err(GeomError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn non_spd_metric_is_rejected() {
        let patch = ChartPatch::new(
            "bad",
            vec![(-1.0, 1.0); 2],
            MatrixField::constant(vec![vec![1.0, 3.0], vec![3.0, 1.0]]),
        );
        assert!(matches!(
            patch.metric_at(&[0.0, 0.0]),
            Err(GeomError::NotSpd { .. })
        ));
    }
}
