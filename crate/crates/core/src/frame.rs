//! Orthonormal frames adapted to an almost contact structure.
//!
//! An adapted frame has the shape {Xᵢ, φXᵢ; Vⱼ, φVⱼ; ξ}: pairs closed under
//! φ spanning the horizontal and vertical subspaces, plus the Reeb vector.
//! Construction: project ξ out, pick the best-conditioned unit vector X,
//! adjoin φX (unit and orthogonal automatically, by the compatibility of g
//! with φ), project the pair out of the remaining candidates, repeat.

use crate::ad::Scalar;
use crate::error::{GeomError, Result};
use crate::linalg::{self, Mat};

pub const PIVOT_TOL: f64 = 1e-12;

/// Frame legs over a generic scalar, used both pointwise and inside jet
/// pipelines.
#[derive(Clone, Debug)]
pub struct AdaptedFrame<S> {
    pub horizontal_pairs: Vec<(Vec<S>, Vec<S>)>,
    pub vertical_pairs: Vec<(Vec<S>, Vec<S>)>,
    pub reeb: Vec<S>,
}

impl<S: Scalar> AdaptedFrame<S> {
    /// All frame legs in the order X₁, φX₁, …, V₁, φV₁, …, ξ.
    pub fn legs(&self) -> Vec<Vec<S>> {
        let mut out = Vec::new();
        for (x, px) in &self.horizontal_pairs {
            out.push(x.clone());
            out.push(px.clone());
        }
        for (v, pv) in &self.vertical_pairs {
            out.push(v.clone());
            out.push(pv.clone());
        }
        out.push(self.reeb.clone());
        out
    }
}

fn project_out<S: Scalar>(g: &[Vec<S>], chosen: &[Vec<S>], v: &[S]) -> Vec<S> {
    let mut w = v.to_vec();
    for _pass in 0..2 {
        for e in chosen {
            let c = linalg::g_inner(g, e, &w);
            w = linalg::axpy(-c, e, &w);
        }
    }
    w
}

/// Greedy pivoted pair extraction from `basis` orthogonally to `chosen`.
fn extract_pairs<S: Scalar>(
    g: &[Vec<S>],
    phi: &[Vec<S>],
    basis: &[Vec<S>],
    chosen: &mut Vec<Vec<S>>,
    n_pairs: usize,
) -> Result<Vec<(Vec<S>, Vec<S>)>> {
    let mut pairs = Vec::with_capacity(n_pairs);
    for _ in 0..n_pairs {
        let mut best: Option<(f64, Vec<S>)> = None;
        for cand in basis {
            let w = project_out(g, chosen, cand);
            let norm = linalg::g_norm(g, &w).value();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, w));
            }
        }
        let (norm, w) = best.expect("basis is non-empty");
        if norm < PIVOT_TOL {
            return Err(GeomError::DegenerateInput(format!(
                "adapted-frame pivot {norm:.3e} below {PIVOT_TOL:.1e}"
            )));
        }
        let x = linalg::scale(&w, S::one() / linalg::g_norm(g, &w));
        let px = linalg::mat_vec(phi, &x);
        chosen.push(x.clone());
        chosen.push(px.clone());
        pairs.push((x, px));
    }
    Ok(pairs)
}

/// Build an adapted frame at a point from the metric `g`, structure tensor
/// `phi`, Reeb vector `xi`, and bases of the vertical (containing ξ) and
/// horizontal subspaces.
pub fn adapted_frame<S: Scalar>(
    g: &Mat<S>,
    phi: &Mat<S>,
    xi: &[S],
    vertical_basis: &[Vec<S>],
    horizontal_basis: &[Vec<S>],
) -> Result<AdaptedFrame<S>> {
    let v_dim = vertical_basis.len();
    let h_dim = horizontal_basis.len();
    if h_dim % 2 != 0 || v_dim % 2 != 1 {
        return Err(GeomError::OddDimensionMismatch {
            horizontal: h_dim,
            vertical: v_dim,
        });
    }
    // the supplied bases must actually have their claimed rank
    linalg::gram_schmidt_g(g, vertical_basis, PIVOT_TOL)?;
    linalg::gram_schmidt_g(g, horizontal_basis, PIVOT_TOL)?;
    let xi_norm = linalg::g_norm(g, xi);
    if xi_norm.value() < PIVOT_TOL {
        return Err(GeomError::DegenerateInput(
            "Reeb vector has zero norm".into(),
        ));
    }
    let reeb = linalg::scale(xi, S::one() / xi_norm);

    let mut chosen = vec![reeb.clone()];
    let vertical_pairs = extract_pairs(g, phi, vertical_basis, &mut chosen, (v_dim - 1) / 2)?;
    let horizontal_pairs = extract_pairs(g, phi, horizontal_basis, &mut chosen, h_dim / 2)?;

    Ok(AdaptedFrame {
        horizontal_pairs,
        vertical_pairs,
        reeb,
    })
}

/// J-adapted orthonormal pairs {Xᵢ, JXᵢ} on an even-dimensional space
/// (almost Hermitian case: no Reeb vector).
pub fn j_adapted_pairs<S: Scalar>(
    g: &Mat<S>,
    j: &Mat<S>,
    basis: &[Vec<S>],
) -> Result<Vec<(Vec<S>, Vec<S>)>> {
    if basis.len() % 2 != 0 {
        return Err(GeomError::OddDimensionMismatch {
            horizontal: basis.len(),
            vertical: 0,
        });
    }
    let mut chosen = Vec::new();
    extract_pairs(g, j, basis, &mut chosen, basis.len() / 2)
}

/// Pointwise adapted frame with its base point and self-check.
#[derive(Clone, Debug)]
pub struct OrthoFrame {
    pub base_point: Vec<f64>,
    pub horizontal_pairs: Vec<(Vec<f64>, Vec<f64>)>,
    pub vertical_pairs: Vec<(Vec<f64>, Vec<f64>)>,
    pub reeb: Vec<f64>,
}

impl OrthoFrame {
    pub fn from_adapted(base_point: Vec<f64>, frame: AdaptedFrame<f64>) -> Self {
        OrthoFrame {
            base_point,
            horizontal_pairs: frame.horizontal_pairs,
            vertical_pairs: frame.vertical_pairs,
            reeb: frame.reeb,
        }
    }

    pub fn legs(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for (x, px) in &self.horizontal_pairs {
            out.push(x.clone());
            out.push(px.clone());
        }
        for (v, pv) in &self.vertical_pairs {
            out.push(v.clone());
            out.push(pv.clone());
        }
        out.push(self.reeb.clone());
        out
    }

    /// Max deviation of g(e_a, e_b) from δ_ab.
    pub fn orthonormality_residual(&self, g: &[Vec<f64>]) -> f64 {
        let legs = self.legs();
        let mut worst: f64 = 0.0;
        for (a, ea) in legs.iter().enumerate() {
            for (b, eb) in legs.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((linalg::g_inner(g, ea, eb) - want).abs());
            }
        }
        worst
    }

    /// Max deviation of the second member of each pair from φ(first).
    pub fn pair_residual(&self, phi: &[Vec<f64>]) -> f64 {
        let mut worst: f64 = 0.0;
        for (x, px) in self.horizontal_pairs.iter().chain(&self.vertical_pairs) {
            let want = linalg::mat_vec(phi, x);
            for (a, b) in want.iter().zip(px) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }
}

/// Deterministically remix a basis so that a rebuilt frame comes out
/// different; used by the frame-independence checks.
pub fn remix_basis(basis: &[Vec<f64>], salt: u64) -> Vec<Vec<f64>> {
    let mut rng = crate::sample::SampleRng::new(salt.wrapping_mul(0x9e37_79b9).wrapping_add(17));
    let n = basis.len();
    let mut out: Vec<Vec<f64>> = basis.to_vec();
    out.reverse();
    if n >= 2 {
        // invertible shear of the first vector by the others
        for k in 1..n {
            let c = 0.25 + 0.5 * rng.next_f64();
            let shear = out[k].clone();
            out[0] = linalg::axpy(c, &shear, &out[0]);
        }
    }
    out
}
