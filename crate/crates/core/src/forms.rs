//! Exterior derivatives of 1- and 2-forms.
//!
//! Unnormalized convention: dη(X,Y) = X(η(Y)) − Y(η(X)) − η([X,Y]), which
//! for coordinate components reads (dη)_ij = ∂ᵢη_j − ∂ⱼηᵢ and
//! (dΦ)_ijk = ∂ᵢΦ_jk − ∂ⱼΦ_ik + ∂ₖΦ_ij.

use crate::chart::ChartPatch;
use crate::error::Result;
use crate::fields::{OneFormField, TwoFormField};

/// dη(X, Y) for pointwise vectors.
pub fn ext_deriv_1form(
    patch: &ChartPatch,
    eta: &OneFormField,
    p: &[f64],
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    patch.check_domain(p)?;
    let jet = eta.jet(p);
    let n = patch.dim;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = jet[j].grad(i) - jet[i].grad(j);
            acc += d * x[i] * y[j];
        }
    }
    Ok(acc)
}

/// dΦ(X, Y, Z) for pointwise vectors.
pub fn ext_deriv_2form(
    patch: &ChartPatch,
    phi: &TwoFormField,
    p: &[f64],
    x: &[f64],
    y: &[f64],
    z: &[f64],
) -> Result<f64> {
    patch.check_domain(p)?;
    let jet = phi.jet(p);
    let n = patch.dim;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let d = jet[j][k].grad(i) - jet[i][k].grad(j) + jet[i][j].grad(k);
                acc += d * x[i] * y[j] * z[k];
            }
        }
    }
    Ok(acc)
}

/// Max |dη(∂ᵢ,∂ⱼ)| over coordinate pairs.
pub fn d_eta_max(patch: &ChartPatch, eta: &OneFormField, p: &[f64]) -> Result<f64> {
    patch.check_domain(p)?;
    let jet = eta.jet(p);
    let n = patch.dim;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((jet[j].grad(i) - jet[i].grad(j)).abs());
        }
    }
    Ok(worst)
}

/// Max |dΦ(∂ᵢ,∂ⱼ,∂ₖ)| over coordinate triples.
pub fn d_2form_max(patch: &ChartPatch, phi: &TwoFormField, p: &[f64]) -> Result<f64> {
    patch.check_domain(p)?;
    let jet = phi.jet(p);
    let n = patch.dim;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let d = jet[j][k].grad(i) - jet[i][k].grad(j) + jet[i][j].grad(k);
                worst = worst.max(d.abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ad::D2;
    use crate::fields::MatrixField;
    use crate::linalg;

    fn flat3() -> ChartPatch {
        ChartPatch::new(
            "flat3",
            vec![(-2.0, 2.0); 3],
            MatrixField::constant(linalg::identity::<f64>(3)),
        )
    }

    #[test]
    fn d_of_dz_vanishes() {
        let patch = flat3();
        let eta =
            OneFormField::new(|_| vec![D2::constant(0.0), D2::constant(0.0), D2::constant(1.0)]);
        let v = ext_deriv_1form(
            &patch,
            &eta,
            &[0.4, -0.9, 1.3],
            &[1.0, 2.0, 3.0],
            &[0.0, 1.0, -1.0],
        )
        .unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn d_squared_is_zero_on_exact_form() {
        // η = d(x sin y): closed by construction
        let patch = flat3();
        let eta = OneFormField::new(|q| vec![q[1].sin(), q[0] * q[1].cos(), D2::constant(0.0)]);
        let p = [0.8, 0.35, -0.2];
        assert!(d_eta_max(&patch, &eta, &p).unwrap() < 1e-14);
    }

    #[test]
    fn constant_two_form_is_closed() {
        let patch = flat3();
        let w = TwoFormField::new(|_| {
            vec![
                vec![D2::constant(0.0), D2::constant(-1.0), D2::constant(0.0)],
                vec![D2::constant(1.0), D2::constant(0.0), D2::constant(0.0)],
                vec![D2::constant(0.0), D2::constant(0.0), D2::constant(0.0)],
            ]
        });
        assert_eq!(d_2form_max(&patch, &w, &[0.1, 0.2, 0.3]).unwrap(), 0.0);
    }

    #[test]
    fn full_antisymmetry_of_d2form() {
        let patch = flat3();
        let w = TwoFormField::new(|q| {
            let a = q[0] * q[1];
            let b = q[2].sin();
            let c = q[0].exp();
            vec![
                vec![D2::constant(0.0), a, b],
                vec![-a, D2::constant(0.0), c],
                vec![-b, -c, D2::constant(0.0)],
            ]
        });
        let p = [0.3, 0.7, -0.4];
        let (x, y, z) = ([1.0, 0.5, 0.0], [0.0, 1.0, 2.0], [1.0, 0.0, 1.0]);
        let a = ext_deriv_2form(&patch, &w, &p, &x, &y, &z).unwrap();
        let b = ext_deriv_2form(&patch, &w, &p, &y, &x, &z).unwrap();
        let c = ext_deriv_2form(&patch, &w, &p, &x, &z, &y).unwrap();
        assert!((a + b).abs() < 1e-13);
        assert!((a + c).abs() < 1e-13);
    }
}
