//! Riemannian submersion machinery: projectors, lifts, the fundamental
//! tensors T and A, the mixing tensor B, mean curvature and the traces and
//! codifferentials the structure equation is assembled from.
//!
//! The vertical distribution is spanned by closed-form frame fields, so the
//! orthogonal projectors are smooth pipelines (Gram-Schmidt in the metric)
//! that jets flow through. T, A and B are computed literally from their
//! defining formulas with field arguments:
//!   T_X̃ Ỹ = h∇_{vX̃} vỸ + v∇_{vX̃} hỸ
//!   A_X̃ Ỹ = v∇_{hX̃} hỸ + h∇_{hX̃} vỸ
//!   B(X̃,Ỹ) = v∇_{hX̃} φhỸ − v∇_{φhX̃} hỸ + h∇_{hX̃} φvỸ − h∇_{φhX̃} vỸ

use crate::ad::{Jet1, Scalar, D2};
use crate::chart::ChartPatch;
use crate::conn::{self, cov_deriv_vec};
use crate::contact::{ContactStructure, HermitianStructure};
use crate::error::{GeomError, Result};
use crate::fields::{MapField, MatrixField, ScalarField, VectorField};
use crate::frame::{self, OrthoFrame};
use crate::linalg::{self, Mat};

/// Closed-form warp data carried by warped-product instances.
#[derive(Clone)]
pub struct WarpData {
    /// The warp function on the total chart.
    pub f: ScalarField,
}

/// A Riemannian submersion between two chart patches, with optional almost
/// contact / almost Hermitian structures making it contact-complex.
#[derive(Clone)]
pub struct SubmersionInstance {
    pub name: String,
    pub total: ChartPatch,
    pub base: ChartPatch,
    pub total_structure: Option<ContactStructure>,
    pub base_structure: Option<HermitianStructure>,
    /// The projection map in coordinates.
    pub projection: MapField,
    /// Closed-form differential of the projection (base_dim × total_dim),
    /// needed so that lift pipelines stay evaluable on jets.
    pub d_projection: MatrixField,
    /// Closed-form fields spanning Ker dπ at every point.
    pub vertical_frame: Vec<VectorField>,
    pub warp: Option<WarpData>,
}

impl SubmersionInstance {
    pub fn total_dim(&self) -> usize {
        self.total.dim
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim
    }

    pub fn fibre_dim(&self) -> usize {
        self.total.dim - self.base.dim
    }

    pub fn structure(&self) -> Result<&ContactStructure> {
        self.total_structure
            .as_ref()
            .ok_or(GeomError::MissingStructure(
                "total space carries no almost contact structure",
            ))
    }

    pub fn base_hermitian(&self) -> Result<&HermitianStructure> {
        self.base_structure
            .as_ref()
            .ok_or(GeomError::MissingStructure(
                "base space carries no almost Hermitian structure",
            ))
    }

    /// Frame bookkeeping: a contact-complex instance needs an even-
    /// dimensional base and an odd-dimensional fibre containing ξ.
    pub fn check_dimensions(&self) -> Result<()> {
        if self.total_structure.is_some() && (self.base_dim() % 2 != 0 || self.fibre_dim() % 2 != 1)
        {
            return Err(GeomError::DimensionMismatch(format!(
                "contact-complex instance needs dims (2n, 2(m-n)+1); got base {} and fibre {}",
                self.base_dim(),
                self.fibre_dim()
            )));
        }
        Ok(())
    }
}

/// dπ at `p`, from the jet of the projection map.
pub fn jacobian(sub: &SubmersionInstance, p: &[f64]) -> Result<Vec<Vec<f64>>> {
    sub.total.check_domain(p)?;
    let jet = sub.projection.jet(p);
    let m: Vec<Vec<f64>> = jet
        .iter()
        .map(|row| (0..sub.total_dim()).map(|i| row.grad(i)).collect())
        .collect();
    let rank = linalg::rank(&m, 1e-8);
    if rank < sub.base_dim() {
        return Err(GeomError::RankDeficient {
            point: p.to_vec(),
            rank,
            expected: sub.base_dim(),
        });
    }
    Ok(m)
}

/// Push a tangent vector forward through dπ.
pub fn push_forward(sub: &SubmersionInstance, p: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let dpi = sub.d_projection.eval(p);
    Ok(linalg::mat_vec(&dpi, x))
}

/// g-orthogonal projector onto the span of `vframe`, generic over jets.
pub fn vertical_projector<S: Scalar>(g: &Mat<S>, vframe: &[Vec<S>]) -> Result<Mat<S>> {
    let e = linalg::gram_schmidt_g(g, vframe, frame::PIVOT_TOL)?;
    let n = g.len();
    let mut proj = linalg::zeros::<S>(n, n);
    for ea in &e {
        let gea = linalg::mat_vec(g, ea);
        for i in 0..n {
            for j in 0..n {
                proj[i][j] = proj[i][j] + ea[i] * gea[j];
            }
        }
    }
    Ok(proj)
}

fn vertical_frame_d2(sub: &SubmersionInstance, q: &[D2]) -> Vec<Vec<D2>> {
    sub.vertical_frame.iter().map(|f| f.eval_d2(q)).collect()
}

/// Vertical projector at jet coordinates.
pub fn vertical_projector_d2(sub: &SubmersionInstance, q: &[D2]) -> Result<Mat<D2>> {
    let g = sub.total.metric_d2(q);
    vertical_projector(&g, &vertical_frame_d2(sub, q))
}

/// Pointwise vertical part of a vector.
pub fn v_project(sub: &SubmersionInstance, p: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    sub.total.check_domain(p)?;
    let g = sub.total.metric_at(p)?;
    let vframe: Vec<Vec<f64>> = sub.vertical_frame.iter().map(|f| f.eval(p)).collect();
    let proj = vertical_projector(&g, &vframe)?;
    Ok(linalg::mat_vec(&proj, x))
}

/// Pointwise horizontal part of a vector.
pub fn h_project(sub: &SubmersionInstance, p: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let v = v_project(sub, p, x)?;
    Ok(linalg::sub_vec(x, &v))
}

/// The vertical projection of a field, as a field.
pub fn v_field(sub: &SubmersionInstance, x: &VectorField) -> VectorField {
    let sub = sub.clone();
    let x = x.clone();
    VectorField::new(move |q| {
        let proj = vertical_projector_d2(&sub, q).expect("vertical frame degenerated");
        linalg::mat_vec(&proj, &x.eval_d2(q))
    })
}

/// The horizontal projection of a field, as a field.
pub fn h_field(sub: &SubmersionInstance, x: &VectorField) -> VectorField {
    let sub = sub.clone();
    let x = x.clone();
    VectorField::new(move |q| {
        let proj = vertical_projector_d2(&sub, q).expect("vertical frame degenerated");
        let xv = x.eval_d2(q);
        let pv = linalg::mat_vec(&proj, &xv);
        linalg::sub_vec(&xv, &pv)
    })
}

/// Orthonormalized horizontal frame at jet coordinates: h-projected
/// coordinate candidates, pruned to the horizontal dimension.
pub fn horizontal_frame_d2(sub: &SubmersionInstance, q: &[D2]) -> Result<Vec<Vec<D2>>> {
    let n = sub.total_dim();
    let g = sub.total.metric_d2(q);
    let proj = vertical_projector_d2(sub, q)?;
    let mut candidates = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![D2::constant(0.0); n];
        e[i] = D2::constant(1.0);
        let pv = linalg::mat_vec(&proj, &e);
        candidates.push(linalg::sub_vec(&e, &pv));
    }
    let frame = linalg::gram_schmidt_g_pruned(&g, &candidates, 1e-6);
    if frame.len() != sub.base_dim() {
        return Err(GeomError::RankDeficient {
            point: q.iter().map(|c| c.val()).collect(),
            rank: frame.len(),
            expected: sub.base_dim(),
        });
    }
    Ok(frame)
}

/// Pointwise orthonormal horizontal frame.
pub fn horizontal_frame(sub: &SubmersionInstance, p: &[f64]) -> Result<Vec<Vec<f64>>> {
    let q = D2::const_point(p);
    Ok(horizontal_frame_d2(sub, &q)?
        .iter()
        .map(|v| v.iter().map(|c| c.val()).collect())
        .collect())
}

/// The unique horizontal vector with dπ(lift) = x'.
pub fn horizontal_lift(sub: &SubmersionInstance, p: &[f64], x_base: &[f64]) -> Result<Vec<f64>> {
    sub.total.check_domain(p)?;
    let dpi = sub.d_projection.eval(p);
    let hframe = horizontal_frame(sub, p)?;
    let nb = sub.base_dim();
    let mut m = linalg::zeros::<f64>(nb, nb);
    for (a, ha) in hframe.iter().enumerate() {
        let push = linalg::mat_vec(&dpi, ha);
        for alpha in 0..nb {
            m[alpha][a] = push[alpha];
        }
    }
    let coeff = solve_rank(&m, x_base, p, nb)?;
    let n = sub.total_dim();
    let mut lift = vec![0.0; n];
    for (a, ha) in hframe.iter().enumerate() {
        for i in 0..n {
            lift[i] += coeff[a] * ha[i];
        }
    }
    Ok(lift)
}

fn solve_rank(m: &Mat<f64>, rhs: &[f64], p: &[f64], expected: usize) -> Result<Vec<f64>> {
    linalg::solve(m, rhs).map_err(|_| GeomError::RankDeficient {
        point: p.to_vec(),
        rank: linalg::rank(m, 1e-10),
        expected,
    })
}

/// The basic (π-related) horizontal lift of a base vector field, as a
/// field on the total space. dπ is inverted on the horizontal subspace at
/// every evaluation, so jets flow through the solve.
pub fn basic_lift_field(sub: &SubmersionInstance, x_base: &VectorField) -> VectorField {
    let sub_c = sub.clone();
    let x_base = x_base.clone();
    VectorField::new(move |q| {
        let base_pt = sub_c.projection.eval_d2(q);
        let xb = x_base.eval_d2(&base_pt);
        let dpi = sub_c.d_projection.eval_d2(q);
        let hframe = horizontal_frame_d2(&sub_c, q).expect("horizontal frame degenerated");
        let nb = sub_c.base_dim();
        let mut m = linalg::zeros::<D2>(nb, nb);
        for (a, ha) in hframe.iter().enumerate() {
            let push = linalg::mat_vec(&dpi, ha);
            for alpha in 0..nb {
                m[alpha][a] = push[alpha];
            }
        }
        let coeff = linalg::solve(&m, &xb).expect("dπ singular on the horizontal subspace");
        let n = sub_c.total_dim();
        let mut lift = vec![D2::constant(0.0); n];
        for (a, ha) in hframe.iter().enumerate() {
            for i in 0..n {
                lift[i] = lift[i] + coeff[a] * ha[i];
            }
        }
        lift
    })
}

/// O'Neill tensor T on field arguments.
pub fn oneill_t(
    sub: &SubmersionInstance,
    p: &[f64],
    x: &VectorField,
    y: &VectorField,
) -> Result<Vec<f64>> {
    let dir = v_project(sub, p, &x.eval(p))?;
    let vy = v_field(sub, y);
    let hy = h_field(sub, y);
    let d_vy = cov_deriv_vec(&sub.total, p, &dir, &vy)?;
    let d_hy = cov_deriv_vec(&sub.total, p, &dir, &hy)?;
    let h_part = h_project(sub, p, &d_vy)?;
    let v_part = v_project(sub, p, &d_hy)?;
    Ok(linalg::add_vec(&h_part, &v_part))
}

/// O'Neill tensor A on field arguments.
pub fn oneill_a(
    sub: &SubmersionInstance,
    p: &[f64],
    x: &VectorField,
    y: &VectorField,
) -> Result<Vec<f64>> {
    let dir = h_project(sub, p, &x.eval(p))?;
    let vy = v_field(sub, y);
    let hy = h_field(sub, y);
    let d_hy = cov_deriv_vec(&sub.total, p, &dir, &hy)?;
    let d_vy = cov_deriv_vec(&sub.total, p, &dir, &vy)?;
    let v_part = v_project(sub, p, &d_hy)?;
    let h_part = h_project(sub, p, &d_vy)?;
    Ok(linalg::add_vec(&v_part, &h_part))
}

/// The mixing tensor B on field arguments (contact-complex instances).
pub fn tensor_b(
    sub: &SubmersionInstance,
    p: &[f64],
    x: &VectorField,
    y: &VectorField,
) -> Result<Vec<f64>> {
    let s = sub.structure()?;
    let hx = h_project(sub, p, &x.eval(p))?;
    let phi_hx = s.phi.apply(p, &hx);

    let hy = h_field(sub, y);
    let vy = v_field(sub, y);
    let phi_hy = s.phi.compose(&hy);
    let phi_vy = s.phi.compose(&vy);

    let t1 = v_project(sub, p, &cov_deriv_vec(&sub.total, p, &hx, &phi_hy)?)?;
    let t2 = v_project(sub, p, &cov_deriv_vec(&sub.total, p, &phi_hx, &hy)?)?;
    let t3 = h_project(sub, p, &cov_deriv_vec(&sub.total, p, &hx, &phi_vy)?)?;
    let t4 = h_project(sub, p, &cov_deriv_vec(&sub.total, p, &phi_hx, &vy)?)?;

    Ok((0..sub.total_dim())
        .map(|k| t1[k] - t2[k] + t3[k] - t4[k])
        .collect())
}

/// Orthonormalized vertical frame legs as fields (plain Gram-Schmidt of
/// the closed-form vertical frame; no φ-pairing needed for traces).
pub fn vertical_orthonormal_leg_field(sub: &SubmersionInstance, idx: usize) -> VectorField {
    let sub_c = sub.clone();
    VectorField::new(move |q| {
        let g = sub_c.total.metric_d2(q);
        let e = linalg::gram_schmidt_g(&g, &vertical_frame_d2(&sub_c, q), frame::PIVOT_TOL)
            .expect("vertical frame degenerated");
        e[idx].clone()
    })
}

/// Mean curvature vector of the fibre through `p`: the unnormalized trace
/// H = Σ_a h∇_{E_a} E_a over a vertical orthonormal frame.
pub fn mean_curvature(sub: &SubmersionInstance, p: &[f64]) -> Result<Vec<f64>> {
    let n = sub.total_dim();
    let mut h = vec![0.0; n];
    for a in 0..sub.fibre_dim() {
        let leg = vertical_orthonormal_leg_field(sub, a);
        let d = cov_deriv_vec(&sub.total, p, &leg.eval(p), &leg)?;
        let hp = h_project(sub, p, &d)?;
        for k in 0..n {
            h[k] += hp[k];
        }
    }
    Ok(h)
}

/// φ-adapted frame for the whole total space at `p`: basic-style
/// horizontal pairs, vertical pairs and ξ.
pub fn submersion_frame(
    sub: &SubmersionInstance,
    p: &[f64],
    salt: Option<u64>,
) -> Result<OrthoFrame> {
    let s = sub.structure()?;
    sub.check_dimensions()?;
    let g = sub.total.metric_at(p)?;
    let phi = s.phi.eval(p);
    let xi = s.xi.eval(p);
    let vbasis: Vec<Vec<f64>> = sub.vertical_frame.iter().map(|f| f.eval(p)).collect();
    let hbasis = horizontal_frame(sub, p)?;
    let (vbasis, hbasis) = match salt {
        None => (vbasis, hbasis),
        Some(k) => (
            frame::remix_basis(&vbasis, k),
            frame::remix_basis(&hbasis, k.wrapping_add(1)),
        ),
    };
    let fr = frame::adapted_frame(&g, &phi, &xi, &vbasis, &hbasis)?;
    Ok(OrthoFrame::from_adapted(p.to_vec(), fr))
}

/// One leg of the φ-adapted horizontal frame, as a field.
fn adapted_horizontal_leg_field(
    sub: &SubmersionInstance,
    pair: usize,
    second: bool,
) -> VectorField {
    let sub_c = sub.clone();
    VectorField::new(move |q| {
        let s = sub_c.structure().expect("contact structure required");
        let g = sub_c.total.metric_d2(q);
        let phi = s.phi.eval_d2(q);
        let xi = s.xi.eval_d2(q);
        let vbasis = vertical_frame_d2(&sub_c, q);
        let hbasis = horizontal_frame_d2(&sub_c, q).expect("horizontal frame degenerated");
        let fr = frame::adapted_frame(&g, &phi, &xi, &vbasis, &hbasis)
            .expect("adapted frame degenerated");
        let (x, px) = &fr.horizontal_pairs[pair];
        if second {
            px.clone()
        } else {
            x.clone()
        }
    })
}

/// One leg of the φ-adapted vertical frame {V_j, φV_j, ξ}, as a field.
/// `leg` indexes V₁, φV₁, V₂, φV₂, …, ξ (last).
fn adapted_vertical_leg_field(sub: &SubmersionInstance, leg: usize) -> VectorField {
    let sub_c = sub.clone();
    VectorField::new(move |q| {
        let s = sub_c.structure().expect("contact structure required");
        let g = sub_c.total.metric_d2(q);
        let phi = s.phi.eval_d2(q);
        let xi = s.xi.eval_d2(q);
        let vbasis = vertical_frame_d2(&sub_c, q);
        let fr = frame::adapted_frame(&g, &phi, &xi, &vbasis, &[])
            .expect("adapted vertical frame degenerated");
        let mut legs: Vec<Vec<D2>> = Vec::new();
        for (v, pv) in &fr.vertical_pairs {
            legs.push(v.clone());
            legs.push(pv.clone());
        }
        legs.push(fr.reeb.clone());
        legs[leg].clone()
    })
}

/// Trace of B over a φ-adapted horizontal frame {Xᵢ, φXᵢ}. By the φ-pair
/// symmetry this equals 2 Σᵢ B(Xᵢ, Xᵢ), which [`trace_b_h_pairs`] exposes
/// for bookkeeping audits.
pub fn trace_b_h(sub: &SubmersionInstance, p: &[f64]) -> Result<Vec<f64>> {
    sub.check_dimensions()?;
    let n = sub.total_dim();
    let pairs = sub.base_dim() / 2;
    let mut acc = vec![0.0; n];
    for pair in 0..pairs {
        for second in [false, true] {
            let leg = adapted_horizontal_leg_field(sub, pair, second);
            let b = tensor_b(sub, p, &leg, &leg)?;
            for k in 0..n {
                acc[k] += b[k];
            }
        }
    }
    Ok(acc)
}

/// Σᵢ B(Xᵢ, Xᵢ) over one member of each φ-pair: half the full trace.
pub fn trace_b_h_pairs(sub: &SubmersionInstance, p: &[f64]) -> Result<Vec<f64>> {
    sub.check_dimensions()?;
    let n = sub.total_dim();
    let pairs = sub.base_dim() / 2;
    let mut acc = vec![0.0; n];
    for pair in 0..pairs {
        let leg = adapted_horizontal_leg_field(sub, pair, false);
        let b = tensor_b(sub, p, &leg, &leg)?;
        for k in 0..n {
            acc[k] += b[k];
        }
    }
    Ok(acc)
}

/// Codifferential of the fibre's fundamental form at a vertical vector,
/// computed with ambient objects through the Gauss formula ∇̂_U W = v∇_U W
/// over the vertical part {V_j, φV_j, ξ} of the adapted frame.
pub fn fibre_codiff(sub: &SubmersionInstance, p: &[f64], v: &[f64]) -> Result<f64> {
    let s = sub.structure()?;
    let g = sub.total.metric_at(p)?;
    let hv = h_project(sub, p, v)?;
    let hnorm = linalg::g_inner(&g, &hv, &hv).sqrt();
    if hnorm > 1e-9 {
        return Err(GeomError::NotVertical { hnorm });
    }
    let mut acc = 0.0;
    for leg_idx in 0..sub.fibre_dim() {
        let leg = adapted_vertical_leg_field(sub, leg_idx);
        let phi_leg = s.phi.compose(&leg);
        let dir = leg.eval(p);
        // (∇̂_Eφ̂)E = v∇_E(φE) − φ(v∇_E E)
        let d_phi_leg = v_project(sub, p, &cov_deriv_vec(&sub.total, p, &dir, &phi_leg)?)?;
        let d_leg = v_project(sub, p, &cov_deriv_vec(&sub.total, p, &dir, &leg)?)?;
        let phi_d_leg = s.phi.apply(p, &d_leg);
        let diff = linalg::sub_vec(&d_phi_leg, &phi_d_leg);
        // δ̂Φ̂(V) = −Σ (∇̂_EΦ̂)(E, V) = +Σ g((∇̂_Eφ̂)E, V)
        acc += linalg::g_inner(&g, &diff, v);
    }
    Ok(acc)
}

/// Codifferential of the base fundamental form Ω at a base point.
pub fn base_codiff(sub: &SubmersionInstance, p_base: &[f64], x_base: &[f64]) -> Result<f64> {
    let bs = sub.base_hermitian()?;
    crate::contact::hermitian_codiff(bs, p_base, x_base)
}

/// The vector R̂(U,V)F of the intrinsic fibre curvature through the
/// induced connection ∇̂ = v∇, with the one nesting level carried by
/// explicit first-order jets of the composite field v∇_V F.
pub fn fibre_curvature_vec(
    sub: &SubmersionInstance,
    p: &[f64],
    u: &VectorField,
    v: &VectorField,
    f: &VectorField,
) -> Result<Vec<f64>> {
    let patch = &sub.total;
    let n = patch.dim;
    let cj = conn::christoffel_jet(patch, p)?;

    // vertical projector with first derivatives
    let proj_d2 = vertical_projector_d2(sub, &D2::seed_point(p))?;
    let proj: Vec<Vec<Jet1>> = proj_d2
        .iter()
        .map(|row| row.iter().map(|c| c.to_jet1()).collect())
        .collect();

    let hat = |a: &VectorField, b: &VectorField| -> Vec<Jet1> {
        let inner = conn::cov_deriv_field_jet(patch, &cj, a, b, p);
        (0..n)
            .map(|i| {
                let mut acc = Jet1::constant(0.0);
                for j in 0..n {
                    acc = acc + proj[i][j] * inner[j];
                }
                acc
            })
            .collect()
    };

    // ∇̂_U (v∇_V F) − ∇̂_V (v∇_U F) − v∇_{[U,V]} F at p
    let g_vf = hat(v, f);
    let g_uf = hat(u, f);
    let du = conn::cov_deriv_jet_field(&cj.at.gamma, &u.eval(p), &g_vf);
    let dv = conn::cov_deriv_jet_field(&cj.at.gamma, &v.eval(p), &g_uf);
    let term1 = v_project(sub, p, &du)?;
    let term2 = v_project(sub, p, &dv)?;
    let br = conn::lie_bracket(u, v, p);
    let term3 = v_project(sub, p, &cov_deriv_vec(patch, p, &br, f)?)?;

    Ok((0..n).map(|k| term1[k] - term2[k] - term3[k]).collect())
}

/// Intrinsic fibre curvature 4-tensor R̂(U,V,F,W) = g(R̂(U,V)F, W).
pub fn fibre_curvature4(
    sub: &SubmersionInstance,
    p: &[f64],
    u: &VectorField,
    v: &VectorField,
    f: &VectorField,
    w: &VectorField,
) -> Result<f64> {
    let g = sub.total.metric_at(p)?;
    let rhat = fibre_curvature_vec(sub, p, u, v, f)?;
    Ok(linalg::g_inner(&g, &rhat, &w.eval(p)))
}

/// The φ-adapted vertical frame {V_j, φV_j, ξ} as leg fields, in the order
/// V₁, φV₁, …, ξ.
pub fn vertical_adapted_leg_fields(sub: &SubmersionInstance) -> Vec<VectorField> {
    (0..sub.fibre_dim())
        .map(|leg| adapted_vertical_leg_field(sub, leg))
        .collect()
}

/// Structural residuals of the submersion definition at `p`:
/// dπ kills the vertical frame, dπ is an isometry on the horizontal
/// subspace, the numeric kernel of dπ is vertical, and (when both
/// structures are present) J∘dπ = dπ∘φ.
#[derive(Clone, Copy, Debug, Default)]
pub struct SubmersionResiduals {
    pub dpi_vertical: f64,
    pub isometry: f64,
    pub holomorphy: f64,
    pub kernel_consistency: f64,
    pub d_projection_consistency: f64,
}

pub fn riemannian_residuals(sub: &SubmersionInstance, p: &[f64]) -> Result<SubmersionResiduals> {
    let mut out = SubmersionResiduals::default();
    let dpi_ad = jacobian(sub, p)?;
    let dpi = sub.d_projection.eval(p);
    for (ra, rb) in dpi_ad.iter().zip(&dpi) {
        for (a, b) in ra.iter().zip(rb) {
            out.d_projection_consistency = out.d_projection_consistency.max((a - b).abs());
        }
    }
    for vf in &sub.vertical_frame {
        let push = linalg::mat_vec(&dpi, &vf.eval(p));
        for c in push {
            out.dpi_vertical = out.dpi_vertical.max(c.abs());
        }
    }
    let p_base = sub.projection.eval(p);
    let g_base = sub.base.metric_at(&p_base)?;
    let hframe = horizontal_frame(sub, p)?;
    for (a, ha) in hframe.iter().enumerate() {
        let pa = linalg::mat_vec(&dpi, ha);
        for (b, hb) in hframe.iter().enumerate() {
            let pb = linalg::mat_vec(&dpi, hb);
            let want = f64::from(a == b);
            out.isometry = out
                .isometry
                .max((linalg::g_inner(&g_base, &pa, &pb) - want).abs());
        }
    }
    if let (Some(s), Some(bs)) = (&sub.total_structure, &sub.base_structure) {
        let phi = s.phi.eval(p);
        let j = bs.j.eval(&p_base);
        let n = sub.total_dim();
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            let j_dpi = linalg::mat_vec(&j, &linalg::mat_vec(&dpi, &e));
            let dpi_phi = linalg::mat_vec(&dpi, &linalg::mat_vec(&phi, &e));
            for k in 0..sub.base_dim() {
                out.holomorphy = out.holomorphy.max((j_dpi[k] - dpi_phi[k]).abs());
            }
        }
    }
    // numeric kernel of dπ must be horizontal-free
    let kernel = linalg::nullspace(&dpi, 1e-9);
    if kernel.len() != sub.fibre_dim() {
        return Err(GeomError::RankDeficient {
            point: p.to_vec(),
            rank: sub.total_dim() - kernel.len(),
            expected: sub.base_dim(),
        });
    }
    for kv in &kernel {
        let h = h_project(sub, p, kv)?;
        out.kernel_consistency = out.kernel_consistency.max(linalg::euclid_norm(&h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::MatrixField;

    /// Product projection R³ → R² with the flat metric.
    fn product_r3() -> SubmersionInstance {
        SubmersionInstance {
            name: "product_r3".into(),
            total: ChartPatch::new(
                "r3",
                vec![(-2.0, 2.0); 3],
                MatrixField::constant(linalg::identity::<f64>(3)),
            ),
            base: ChartPatch::new(
                "r2",
                vec![(-2.0, 2.0); 2],
                MatrixField::constant(linalg::identity::<f64>(2)),
            ),
            total_structure: None,
            base_structure: None,
            projection: MapField::new(|q| vec![q[0], q[1]]),
            d_projection: MatrixField::constant(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]),
            vertical_frame: vec![VectorField::coordinate(2, 3)],
            warp: None,
        }
    }

    #[test]
    fn product_jacobian_is_i2_0() {
        let sub = product_r3();
        let j = jacobian(&sub, &[0.3, -0.7, 1.1]).unwrap();
        assert_eq!(j, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
    }

    #[test]
    fn product_projections_split_coordinates() {
        let sub = product_r3();
        let p = [0.0, 0.0, 0.0];
        let x = [1.0, 2.0, 3.0];
        assert_eq!(v_project(&sub, &p, &x).unwrap(), vec![0.0, 0.0, 3.0]);
        assert_eq!(h_project(&sub, &p, &x).unwrap(), vec![1.0, 2.0, 0.0]);
        // idempotent and complementary
        let v = v_project(&sub, &p, &x).unwrap();
        assert_eq!(v_project(&sub, &p, &v).unwrap(), v);
    }

    #[test]
    fn product_lift_is_inclusion() {
        let sub = product_r3();
        let lift = horizontal_lift(&sub, &[0.1, 0.1, 0.1], &[1.0, 0.0]).unwrap();
        assert!((lift[0] - 1.0).abs() < 1e-12 && lift[1].abs() < 1e-12 && lift[2].abs() < 1e-12);
        let zero = horizontal_lift(&sub, &[0.1, 0.1, 0.1], &[0.0, 0.0]).unwrap();
        assert!(linalg::euclid_norm(&zero) < 1e-14);
    }

    #[test]
    fn product_t_and_a_vanish() {
        let sub = product_r3();
        let p = [0.2, 0.4, -0.6];
        for i in 0..3 {
            for j in 0..3 {
                let x = VectorField::coordinate(i, 3);
                let y = VectorField::coordinate(j, 3);
                let t = oneill_t(&sub, &p, &x, &y).unwrap();
                let a = oneill_a(&sub, &p, &x, &y).unwrap();
                assert!(linalg::euclid_norm(&t) < 1e-12);
                assert!(linalg::euclid_norm(&a) < 1e-12);
            }
        }
    }

    #[test]
    fn product_riemannian_residuals_vanish() {
        let sub = product_r3();
        let r = riemannian_residuals(&sub, &[0.5, -0.5, 0.0]).unwrap();
        assert!(r.dpi_vertical < 1e-14);
        assert!(r.isometry < 1e-12);
        assert!(r.kernel_consistency < 1e-9);
        assert!(r.d_projection_consistency < 1e-14);
    }

    #[test]
    fn rank_deficient_projection_is_detected() {
        let mut sub = product_r3();
        // both rows of dπ collapse to the same direction
        sub.projection = MapField::new(|q| vec![q[0], q[0]]);
        sub.d_projection = MatrixField::constant(vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]);
        assert!(matches!(
            jacobian(&sub, &[0.0, 0.0, 0.0]),
            Err(GeomError::RankDeficient { .. })
        ));
    }

    #[test]
    fn contact_instance_with_even_fibre_is_rejected() {
        // a contact structure over a 1-dimensional base gives fibre
        // dimension 2: the (2n, 2(m−n)+1) bookkeeping must fail
        let total = ChartPatch::new(
            "r3",
            vec![(-2.0, 2.0); 3],
            MatrixField::constant(linalg::identity::<f64>(3)),
        );
        let sub = SubmersionInstance {
            name: "bad_dims".into(),
            total: total.clone(),
            base: ChartPatch::new(
                "r1",
                vec![(-2.0, 2.0)],
                MatrixField::constant(linalg::identity::<f64>(1)),
            ),
            total_structure: Some(crate::contact::ContactStructure {
                patch: total,
                phi: crate::fields::EndoField::constant(vec![
                    vec![0.0, -1.0, 0.0],
                    vec![1.0, 0.0, 0.0],
                    vec![0.0, 0.0, 0.0],
                ]),
                xi: VectorField::constant(vec![0.0, 0.0, 1.0]),
                eta: crate::fields::OneFormField::new(|_| {
                    vec![D2::constant(0.0), D2::constant(0.0), D2::constant(1.0)]
                }),
            }),
            base_structure: None,
            projection: MapField::new(|q| vec![q[0]]),
            d_projection: MatrixField::constant(vec![vec![1.0, 0.0, 0.0]]),
            vertical_frame: vec![VectorField::coordinate(1, 3), VectorField::coordinate(2, 3)],
            warp: None,
        };
        assert!(matches!(
            sub.check_dimensions(),
            Err(GeomError::DimensionMismatch(_))
        ));
        assert!(matches!(
            submersion_frame(&sub, &[0.0, 0.0, 0.0], None),
            Err(GeomError::DimensionMismatch(_))
        ));
    }
}
