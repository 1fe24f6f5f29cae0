//! The verified identities, as pointwise residual checks.
//!
//! Every check walks the sample points, evaluates both sides of an
//! identity from independent code paths, and reports the max and mean of
//! the pointwise residuals against a tolerance. Failures are data, not
//! errors: several checks are deliberately run on structures outside a
//! proposition's hypotheses to measure how badly the identity fails there.

use crate::catalog::Example;
use crate::conn::{self, cov_deriv_vec};
use crate::contact::{self, ContactStructure};
use crate::error::{GeomError, Result};
use crate::fields::{ScalarField, VectorField};
use crate::linalg;
use crate::submersion::{self, SubmersionInstance};
use serde::Serialize;

/// Outcome of one named residual check.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub residual_max: f64,
    pub residual_mean: f64,
    pub points: usize,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    pub fn from_residuals(name: &str, residuals: &[f64], tolerance: f64) -> Self {
        let residual_max = residuals.iter().cloned().fold(0.0_f64, f64::max);
        let residual_mean = if residuals.is_empty() {
            0.0
        } else {
            residuals.iter().sum::<f64>() / residuals.len() as f64
        };
        IdentityCheck {
            name: name.to_string(),
            residual_max,
            residual_mean,
            points: residuals.len(),
            tolerance,
            passed: residual_max <= tolerance,
        }
    }
}

fn require_structure(ex: &Example) -> Result<&ContactStructure> {
    ex.contact_structure().ok_or(GeomError::MissingStructure(
        "example carries no almost contact structure",
    ))
}

/// One leg of the orthonormalized coordinate frame on a chart, as a field.
fn orthonormal_coordinate_field(patch: &crate::chart::ChartPatch, alpha: usize) -> VectorField {
    let patch = patch.clone();
    let n = patch.dim;
    VectorField::new(move |q| {
        let g = patch.metric_d2(q);
        let basis: Vec<Vec<crate::ad::D2>> = (0..n)
            .map(|i| {
                let mut e = vec![crate::ad::D2::constant(0.0); n];
                e[i] = crate::ad::D2::constant(1.0);
                e
            })
            .collect();
        let ortho =
            linalg::gram_schmidt_g(&g, &basis, 1e-12).expect("coordinate frame degenerated");
        ortho[alpha].clone()
    })
}

fn base_orthonormal_fields(sub: &SubmersionInstance) -> Vec<VectorField> {
    (0..sub.base_dim())
        .map(|alpha| orthonormal_coordinate_field(&sub.base, alpha))
        .collect()
}

/// Basic lifts of an orthonormalized base coordinate frame: unit,
/// horizontal, π-related fields.
fn base_coordinate_lifts(sub: &SubmersionInstance) -> Vec<VectorField> {
    base_orthonormal_fields(sub)
        .iter()
        .map(|field| submersion::basic_lift_field(sub, field))
        .collect()
}

fn max_norm(g: &[Vec<f64>], v: &[f64]) -> f64 {
    linalg::g_inner(g, v, v).max(0.0).sqrt()
}

// ---------------------------------------------------------------------
// Structure-level checks
// ---------------------------------------------------------------------

pub fn structure_axioms_check(ex: &Example, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let s = require_structure(ex)?;
    let form = contact::fundamental_form_field(s);
    points
        .iter()
        .map(|p| {
            let mut r = contact::structure_axioms_residual(s, p)?;
            // Φ antisymmetry and Φ(ξ, ·) = 0
            let m = form.eval(p);
            let xi = s.xi.eval(p);
            let n = s.patch.dim;
            for i in 0..n {
                for j in 0..n {
                    r = r.max((m[i][j] + m[j][i]).abs());
                }
            }
            for j in 0..n {
                let xi_row: f64 = (0..n).map(|i| xi[i] * m[i][j]).sum();
                r = r.max(xi_row.abs());
            }
            Ok(r)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureClass {
    Sasakian,
    Cosymplectic,
    AlmostCosymplectic,
}

pub fn classification_check(
    ex: &Example,
    class: StructureClass,
    points: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let s = require_structure(ex)?;
    points
        .iter()
        .map(|p| {
            let r = contact::classify(s, std::slice::from_ref(p))?;
            Ok(match class {
                StructureClass::Sasakian => r.sasakian,
                StructureClass::Cosymplectic => r.cosymplectic,
                StructureClass::AlmostCosymplectic => r.almost_cosymplectic,
            })
        })
        .collect()
}

pub fn a_star_identities_check(ex: &Example, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let s = require_structure(ex)?;
    points
        .iter()
        .map(|p| {
            let r = contact::check_a_star_identities(s, std::slice::from_ref(p))?;
            Ok(r.symmetry.max(r.anticommutation).max(r.nabla_phi_char))
        })
        .collect()
}

/// Which normality tensors the instance's class requires to vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NVanishing {
    /// normal structures: N₁ through N₄
    All,
    /// almost cosymplectic with Kähler leaves: N₂ and N₄ only
    N2N4,
}

pub fn n_vanishing_check(ex: &Example, which: NVanishing, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let s = require_structure(ex)?;
    let n = s.patch.dim;
    points
        .iter()
        .map(|p| {
            let g = s.patch.metric_at(p)?;
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let x = VectorField::coordinate(i, n);
                for j in 0..n {
                    let y = VectorField::coordinate(j, n);
                    let t = contact::n_tensors(s, p, &x, &y)?;
                    worst = worst.max(t.n2.abs()).max(t.n4.abs());
                    if which == NVanishing::All {
                        worst = worst.max(max_norm(&g, &t.n1)).max(max_norm(&g, &t.n3));
                    }
                }
            }
            Ok(worst)
        })
        .collect()
}

/// Witness that N₃ does not vanish: the residual is max(0, 1 − max‖N₃‖),
/// so the check passes exactly when ‖N₃‖ ≥ 1 somewhere on the samples.
pub fn n3_witness_check(ex: &Example, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let s = require_structure(ex)?;
    let n = s.patch.dim;
    let mut best: f64 = 0.0;
    for p in points {
        let g = s.patch.metric_at(p)?;
        for i in 0..n {
            let x = VectorField::coordinate(i, n);
            let t = contact::n_tensors(s, p, &x, &x)?;
            best = best.max(max_norm(&g, &t.n3));
        }
    }
    Ok(vec![(1.0 - best).max(0.0)])
}

pub fn harmonicity_check(ex: &Example, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let s = require_structure(ex)?;
    points
        .iter()
        .map(|p| {
            let r = contact::harmonicity_residual(s, std::slice::from_ref(p))?;
            Ok(r.d_phi_max.max(r.delta_phi_max))
        })
        .collect()
}

/// δΦ computed in two independently generated adapted frames must agree.
pub fn frame_independence_check(ex: &Example, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let s = require_structure(ex)?;
    points
        .iter()
        .map(|p| {
            let (f1, f2) = match ex {
                Example::Submersion(sub) => (
                    submersion::submersion_frame(sub, p, None)?,
                    submersion::submersion_frame(sub, p, Some(7))?,
                ),
                Example::Structure(_) => (
                    contact::adapted_frame_at(s, p, None)?,
                    contact::adapted_frame_at(s, p, Some(7))?,
                ),
            };
            let mut worst: f64 = 0.0;
            for leg in f1.legs() {
                let a = contact::codiff_2form(s, p, &f1, &leg)?;
                let b = contact::codiff_2form(s, p, &f2, &leg)?;
                worst = worst.max((a - b).abs());
            }
            Ok(worst)
        })
        .collect()
}

// ---------------------------------------------------------------------
// Substrate checks
// ---------------------------------------------------------------------

/// 1.0 at each point where a metric fails to be SPD inside its domain
/// (on a submersion instance the base is sampled through the projection).
pub fn metric_spd_check(ex: &Example, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let bad = match ex {
            Example::Structure(st) => st.structure.patch.metric_at(p).is_err(),
            Example::Submersion(sub) => {
                let pb = sub.projection.eval(p);
                sub.total.metric_at(p).is_err() || sub.base.metric_at(&pb).is_err()
            }
        };
        out.push(f64::from(bad));
    }
    Ok(out)
}

const FD_GRAD_STEP: f64 = 1e-5;
// Second central differences of O(1) values hit the f64 cancellation floor
// near eps/h² ≈ 2e-6 at h = 1e-5, so the Hessian oracle uses the step that
// minimizes truncation + roundoff instead.
const FD_HESS_STEP: f64 = 2.5e-4;

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1.0_f64.max(a.abs()).max(b.abs())
}

fn fd_check_patch(patch: &crate::chart::ChartPatch, p: &[f64]) -> Result<f64> {
    let n = patch.dim;
    let jet = patch.metric_jet(p)?;
    let eval = |q: &[f64]| patch.metric_d2(&crate::ad::D2::const_point(q));
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                let h = FD_GRAD_STEP;
                let mut qp = p.to_vec();
                qp[m] += h;
                let mut qm = p.to_vec();
                qm[m] -= h;
                let fd = (eval(&qp)[i][j].val() - eval(&qm)[i][j].val()) / (2.0 * h);
                worst = worst.max(rel_diff(jet[i][j].grad(m), fd));
            }
            for m in 0..n {
                for l in 0..=m {
                    let h = FD_HESS_STEP;
                    let fd = if m == l {
                        let mut qp = p.to_vec();
                        qp[m] += h;
                        let mut qm = p.to_vec();
                        qm[m] -= h;
                        (eval(&qp)[i][j].val() - 2.0 * eval(p)[i][j].val() + eval(&qm)[i][j].val())
                            / (h * h)
                    } else {
                        let mut qpp = p.to_vec();
                        qpp[m] += h;
                        qpp[l] += h;
                        let mut qpm = p.to_vec();
                        qpm[m] += h;
                        qpm[l] -= h;
                        let mut qmp = p.to_vec();
                        qmp[m] -= h;
                        qmp[l] += h;
                        let mut qmm = p.to_vec();
                        qmm[m] -= h;
                        qmm[l] -= h;
                        (eval(&qpp)[i][j].val() - eval(&qpm)[i][j].val() - eval(&qmp)[i][j].val()
                            + eval(&qmm)[i][j].val())
                            / (4.0 * h * h)
                    };
                    worst = worst.max(rel_diff(jet[i][j].hess(m, l), fd));
                }
            }
        }
    }
    Ok(worst)
}

/// AD gradients and Hessians of every metric component against central
/// finite differences, relative.
pub fn ad_fd_check(ex: &Example, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for p in points {
        let mut worst = match ex {
            Example::Submersion(sub) => fd_check_patch(&sub.total, p)?,
            Example::Structure(st) => fd_check_patch(&st.structure.patch, p)?,
        };
        if let Example::Submersion(sub) = ex {
            let pb = sub.projection.eval(p);
            // interior guard: the FD stencil must stay inside the base box
            let shrunk = pb
                .iter()
                .zip(&sub.base.domain)
                .all(|(&x, &(lo, hi))| x - 1e-3 > lo && x + 1e-3 < hi);
            if shrunk {
                worst = worst.max(fd_check_patch(&sub.base, &pb)?);
            }
        }
        out.push(worst);
    }
    Ok(out)
}

fn test_fields(ex: &Example, n: usize) -> Vec<VectorField> {
    let mut fields: Vec<VectorField> = (0..n).map(|i| VectorField::coordinate(i, n)).collect();
    if let Example::Submersion(sub) = ex {
        fields.push(submersion::v_field(sub, &VectorField::coordinate(0, n)));
        fields.push(submersion::h_field(sub, &VectorField::coordinate(n - 1, n)));
    }
    if let Some(s) = ex.contact_structure() {
        fields.push(s.phi.compose(&VectorField::coordinate(0, n)));
    }
    fields
}

/// Torsion-freeness and metric compatibility of the connection on the
/// catalog's own fields.
pub fn connection_compat_check(ex: &Example, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let patch = match ex {
        Example::Submersion(sub) => &sub.total,
        Example::Structure(st) => &st.structure.patch,
    };
    let n = patch.dim;
    let fields = test_fields(ex, n);
    points
        .iter()
        .map(|p| {
            let mut worst: f64 = 0.0;
            for (a, x) in fields.iter().enumerate() {
                for y in fields.iter().skip(a + 1) {
                    worst = worst.max(conn::torsion_residual(patch, p, x, y)?);
                }
            }
            // metric compatibility along coordinate directions
            for m in 0..n {
                let mut dir = vec![0.0; n];
                dir[m] = 1.0;
                for (a, y) in fields.iter().enumerate() {
                    let z = &fields[(a + 1) % fields.len()];
                    worst = worst.max(conn::metric_compat_residual(patch, p, &dir, y, z)?);
                }
            }
            Ok(worst)
        })
        .collect()
}

/// Component-level curvature symmetries: antisymmetry in both pairs, pair
/// interchange, and the first Bianchi identity.
pub fn riemann_symmetries_check(ex: &Example, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let patch = match ex {
        Example::Submersion(sub) => &sub.total,
        Example::Structure(st) => &st.structure.patch,
    };
    let n = patch.dim;
    points
        .iter()
        .map(|p| {
            let r = conn::riemann_tensor(patch, p)?;
            let mut worst: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            worst = worst
                                .max((r[i][j][k][l] + r[j][i][k][l]).abs())
                                .max((r[i][j][k][l] + r[i][j][l][k]).abs())
                                .max((r[i][j][k][l] - r[k][l][i][j]).abs())
                                .max((r[i][j][k][l] + r[j][k][i][l] + r[k][i][j][l]).abs());
                        }
                    }
                }
            }
            Ok(worst)
        })
        .collect()
}

// ---------------------------------------------------------------------
// Submersion checks
// ---------------------------------------------------------------------

pub fn riemannian_submersion_check(
    sub: &SubmersionInstance,
    points: &[Vec<f64>],
) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            let r = submersion::riemannian_residuals(sub, p)?;
            Ok(r.dpi_vertical
                .max(r.isometry)
                .max(r.holomorphy)
                .max(r.kernel_consistency)
                .max(r.d_projection_consistency))
        })
        .collect()
}

/// h(∇_X Y) of basic fields is π-related to ∇'_{X'} Y'.
pub fn pi_related_check(sub: &SubmersionInstance, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let base_fields = base_orthonormal_fields(sub);
    let lifts = base_coordinate_lifts(sub);
    points
        .iter()
        .map(|p| {
            let pb = sub.projection.eval(p);
            let g_base = sub.base.metric_at(&pb)?;
            let mut worst: f64 = 0.0;
            for (alpha, x) in lifts.iter().enumerate() {
                for (beta, y) in lifts.iter().enumerate() {
                    let d = cov_deriv_vec(&sub.total, p, &x.eval(p), y)?;
                    let h = submersion::h_project(sub, p, &d)?;
                    let pushed = submersion::push_forward(sub, p, &h)?;
                    let xp = base_fields[alpha].eval(&pb);
                    let base_d = cov_deriv_vec(&sub.base, &pb, &xp, &base_fields[beta])?;
                    let diff = linalg::sub_vec(&pushed, &base_d);
                    worst = worst.max(max_norm(&g_base, &diff));
                }
            }
            Ok(worst)
        })
        .collect()
}

/// π*Ω = Φ on horizontal vectors, and both vanish on mixed pairs.
pub fn pullback_form_check(sub: &SubmersionInstance, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let s = sub.structure()?;
    let bs = sub.base_hermitian()?;
    points
        .iter()
        .map(|p| {
            let pb = sub.projection.eval(p);
            let g_base = sub.base.metric_at(&pb)?;
            let j = bs.j.eval(&pb);
            let hframe = submersion::horizontal_frame(sub, p)?;
            let mut worst: f64 = 0.0;
            let omega = |x: &[f64], y: &[f64]| -> f64 {
                linalg::g_inner(&g_base, x, &linalg::mat_vec(&j, y))
            };
            for x in &hframe {
                let dx = submersion::push_forward(sub, p, x)?;
                for y in &hframe {
                    let dy = submersion::push_forward(sub, p, y)?;
                    let phi_val = contact::fundamental_form(s, p, x, y)?;
                    worst = worst.max((phi_val - omega(&dx, &dy)).abs());
                }
                for vf in &sub.vertical_frame {
                    let v = vf.eval(p);
                    let dv = submersion::push_forward(sub, p, &v)?;
                    let phi_val = contact::fundamental_form(s, p, x, &v)?;
                    worst = worst.max(phi_val.abs()).max(omega(&dx, &dv).abs());
                }
            }
            Ok(worst)
        })
        .collect()
}

/// Eq-level symmetries of T and A: T symmetric on vertical pairs, T killed
/// by horizontal arguments, A alternating on horizontal pairs with
/// A_X Y = ½ v[X,Y], A killed by vertical arguments.
pub fn oneill_symmetries_check(sub: &SubmersionInstance, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = sub.total_dim();
    let lifts = base_coordinate_lifts(sub);
    let h_fields: Vec<VectorField> = (0..n)
        .map(|i| submersion::h_field(sub, &VectorField::coordinate(i, n)))
        .collect();
    points
        .iter()
        .map(|p| {
            let g = sub.total.metric_at(p)?;
            let mut worst: f64 = 0.0;
            for u in &sub.vertical_frame {
                for w in &sub.vertical_frame {
                    let tuw = submersion::oneill_t(sub, p, u, w)?;
                    let twu = submersion::oneill_t(sub, p, w, u)?;
                    worst = worst.max(max_norm(&g, &linalg::sub_vec(&tuw, &twu)));
                    let avw = submersion::oneill_a(sub, p, u, w)?;
                    worst = worst.max(max_norm(&g, &avw));
                }
            }
            for h in &h_fields {
                for w in &sub.vertical_frame {
                    let t = submersion::oneill_t(sub, p, h, w)?;
                    worst = worst.max(max_norm(&g, &t));
                }
            }
            for x in &lifts {
                for y in &lifts {
                    let axy = submersion::oneill_a(sub, p, x, y)?;
                    let ayx = submersion::oneill_a(sub, p, y, x)?;
                    worst = worst.max(max_norm(&g, &linalg::add_vec(&axy, &ayx)));
                    let br = conn::lie_bracket(x, y, p);
                    let vbr = submersion::v_project(sub, p, &br)?;
                    let half: Vec<f64> = vbr.iter().map(|c| 0.5 * c).collect();
                    worst = worst.max(max_norm(&g, &linalg::sub_vec(&axy, &half)));
                }
            }
            Ok(worst)
        })
        .collect()
}

/// Closed-form warped-product check: T_U V = −(1/2f) g(U,V) grad f.
pub fn warped_t_check(sub: &SubmersionInstance, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let warp = sub.warp.as_ref().ok_or(GeomError::MissingStructure(
        "instance carries no closed-form warp function",
    ))?;
    let n = sub.total_dim();
    points
        .iter()
        .map(|p| {
            let g = sub.total.metric_at(p)?;
            let ginv = linalg::inverse(&g)?;
            let fj = warp.f.jet(p);
            let df: Vec<f64> = (0..n).map(|i| fj.grad(i)).collect();
            let grad_f = linalg::mat_vec(&ginv, &df);
            let mut worst: f64 = 0.0;
            for u in &sub.vertical_frame {
                for w in &sub.vertical_frame {
                    let t = submersion::oneill_t(sub, p, u, w)?;
                    let coeff = -linalg::g_inner(&g, &u.eval(p), &w.eval(p)) / (2.0 * fj.val());
                    let want: Vec<f64> = grad_f.iter().map(|c| coeff * c).collect();
                    worst = worst.max(max_norm(&g, &linalg::sub_vec(&t, &want)));
                }
            }
            Ok(worst)
        })
        .collect()
}

/// Totally umbilical fibres: T_U V = g(U,V) · H / dim(fibre).
pub fn umbilical_check(sub: &SubmersionInstance, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let k = sub.fibre_dim() as f64;
    points
        .iter()
        .map(|p| {
            let g = sub.total.metric_at(p)?;
            let h = submersion::mean_curvature(sub, p)?;
            let mut worst: f64 = 0.0;
            for u in &sub.vertical_frame {
                for w in &sub.vertical_frame {
                    let t = submersion::oneill_t(sub, p, u, w)?;
                    let coeff = linalg::g_inner(&g, &u.eval(p), &w.eval(p)) / k;
                    let want: Vec<f64> = h.iter().map(|c| coeff * c).collect();
                    worst = worst.max(max_norm(&g, &linalg::sub_vec(&t, &want)));
                }
            }
            Ok(worst)
        })
        .collect()
}

/// The B-tensor propositions: vanishing on vertical arguments, symmetry
/// and J-invariance on horizontal pairs, the A-combination identity, the
/// projection behaviour, B(φX, ξ) = h∇_Xξ, and the inner-product identity
/// g(B(X,Y),V) = g(∇_VφY + φ∇_VY, X) + 2 V g(φX,Y).
pub fn b_tensor_check(sub: &SubmersionInstance, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let s = sub.structure()?;
    let n = sub.total_dim();
    let lifts = base_coordinate_lifts(sub);
    points
        .iter()
        .map(|p| {
            let g = sub.total.metric_at(p)?;
            let mut worst: f64 = 0.0;
            // B(V, ·) = 0
            for v in &sub.vertical_frame {
                for i in 0..n {
                    let y = VectorField::coordinate(i, n);
                    let b = submersion::tensor_b(sub, p, v, &y)?;
                    worst = worst.max(max_norm(&g, &b));
                }
            }
            // horizontal pairs
            for x in &lifts {
                let phi_x = s.phi.compose(x);
                for y in &lifts {
                    let phi_y = s.phi.compose(y);
                    let bxy = submersion::tensor_b(sub, p, x, y)?;
                    let byx = submersion::tensor_b(sub, p, y, x)?;
                    worst = worst.max(max_norm(&g, &linalg::sub_vec(&bxy, &byx)));
                    // J-invariance on H
                    let bpp = submersion::tensor_b(sub, p, &phi_x, &phi_y)?;
                    worst = worst.max(max_norm(&g, &linalg::sub_vec(&bpp, &bxy)));
                    // B(X,Y) = A_X φY − A_{φX} Y
                    let a1 = submersion::oneill_a(sub, p, x, &phi_y)?;
                    let a2 = submersion::oneill_a(sub, p, &phi_x, y)?;
                    let comb = linalg::sub_vec(&a1, &a2);
                    worst = worst.max(max_norm(&g, &linalg::sub_vec(&bxy, &comb)));
                    // output on horizontal pairs is vertical
                    let hb = submersion::h_project(sub, p, &bxy)?;
                    worst = worst.max(max_norm(&g, &hb));
                    // inner-product identity against vertical frame fields
                    for vf in &sub.vertical_frame {
                        let vp = vf.eval(p);
                        let lhs = linalg::g_inner(&g, &bxy, &vp);
                        let d_phi_y = cov_deriv_vec(&sub.total, p, &vp, &phi_y)?;
                        let d_y = cov_deriv_vec(&sub.total, p, &vp, y)?;
                        let phi_d_y = s.phi.apply(p, &d_y);
                        let sum = linalg::add_vec(&d_phi_y, &phi_d_y);
                        let xp = x.eval(p);
                        let pairing = pairing_field(sub, s, x, y);
                        let dir: f64 = {
                            let jet = pairing.jet(p);
                            (0..n).map(|m| vp[m] * jet.grad(m)).sum()
                        };
                        let rhs = linalg::g_inner(&g, &sum, &xp) + 2.0 * dir;
                        worst = worst.max((lhs - rhs).abs());
                    }
                }
                // mixed arguments land horizontally
                for vf in &sub.vertical_frame {
                    let bxv = submersion::tensor_b(sub, p, x, vf)?;
                    let vb = submersion::v_project(sub, p, &bxv)?;
                    worst = worst.max(max_norm(&g, &vb));
                }
                // B(φX, ξ) = h∇_X ξ
                let b_phix_xi = submersion::tensor_b(sub, p, &phi_x, &s.xi)?;
                let d_xi = cov_deriv_vec(&sub.total, p, &x.eval(p), &s.xi)?;
                let h_d_xi = submersion::h_project(sub, p, &d_xi)?;
                worst = worst.max(max_norm(&g, &linalg::sub_vec(&b_phix_xi, &h_d_xi)));
            }
            Ok(worst)
        })
        .collect()
}

fn pairing_field(
    sub: &SubmersionInstance,
    s: &ContactStructure,
    x: &VectorField,
    y: &VectorField,
) -> ScalarField {
    // q ↦ g(φX, Y)(q)
    let patch = sub.total.clone();
    let phi = s.phi.clone();
    let x = x.clone();
    let y = y.clone();
    ScalarField::new(move |q| {
        let g = patch.metric_d2(q);
        let px = linalg::mat_vec(&phi.eval_d2(q), &x.eval_d2(q));
        linalg::g_inner(&g, &px, &y.eval_d2(q))
    })
}

// ---------------------------------------------------------------------
// Codifferential structure equation
// ---------------------------------------------------------------------

fn structure_equation_rhs(
    sub: &SubmersionInstance,
    p: &[f64],
    g: &[Vec<f64>],
    h_mean: &[f64],
    trace_b: &[f64],
    x_tilde: &[f64],
) -> Result<f64> {
    let s = sub.structure()?;
    let hx = submersion::h_project(sub, p, x_tilde)?;
    let vx = submersion::v_project(sub, p, x_tilde)?;
    let mut rhs = 0.0;
    // δ'Ω(X') at the base point
    if max_norm(g, &hx) > 1e-13 {
        let pb = sub.projection.eval(p);
        let xp = submersion::push_forward(sub, p, &hx)?;
        rhs += submersion::base_codiff(sub, &pb, &xp)?;
    }
    // fibre codifferential
    if max_norm(g, &vx) > 1e-13 {
        rhs += submersion::fibre_codiff(sub, p, &vx)?;
    }
    // g(H, φX) + ½ g(Tr B^h, V)
    let phi_hx = s.phi.apply(p, &hx);
    rhs += linalg::g_inner(g, h_mean, &phi_hx);
    rhs += 0.5 * linalg::g_inner(g, trace_b, &vx);
    Ok(rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodiffScope {
    /// all frame legs
    Full,
    /// horizontal legs only (δΦ(X) = g(H,φX) + δ'Ω(X'))
    Horizontal,
    /// vertical legs and ξ only (δΦ(V) = δ̂Φ̂(V) + ½ g(Tr B^h, V))
    Vertical,
}

pub fn structure_equation_check(
    sub: &SubmersionInstance,
    points: &[Vec<f64>],
    scope: CodiffScope,
) -> Result<Vec<f64>> {
    let s = sub.structure()?;
    sub.base_hermitian()?;
    sub.check_dimensions()?;
    points
        .iter()
        .map(|p| {
            let g = sub.total.metric_at(p)?;
            let frame = submersion::submersion_frame(sub, p, None)?;
            let h_mean = submersion::mean_curvature(sub, p)?;
            let trace_b = submersion::trace_b_h(sub, p)?;
            let mut legs: Vec<Vec<f64>> = Vec::new();
            match scope {
                CodiffScope::Full => legs = frame.legs(),
                CodiffScope::Horizontal => {
                    for (x, px) in &frame.horizontal_pairs {
                        legs.push(x.clone());
                        legs.push(px.clone());
                    }
                }
                CodiffScope::Vertical => {
                    for (v, pv) in &frame.vertical_pairs {
                        legs.push(v.clone());
                        legs.push(pv.clone());
                    }
                    legs.push(frame.reeb.clone());
                }
            }
            let mut worst: f64 = 0.0;
            for leg in &legs {
                let lhs = contact::codiff_2form(s, p, &frame, leg)?;
                let rhs = structure_equation_rhs(sub, p, &g, &h_mean, &trace_b, leg)?;
                worst = worst.max((lhs - rhs).abs());
            }
            Ok(worst)
        })
        .collect()
}

// ---------------------------------------------------------------------
// Curvature relations
// ---------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvatureScope {
    Vertical,
    Horizontal,
}

/// The submersion curvature relations, arranged as Gauss-equation
/// consistency. With this engine's curvature sign convention
/// (K = R(X,Y,Y,X) = +1 on the unit sphere) the relations read
///   R(U,V,F,W) = R̂(U,V,F,W) − g(T_U W, T_V F) + g(T_V W, T_U F)
///   R(X,Y,Z,H) = R*(X,Y,Z,H) + 2g(A_X Y, A_Z H) − g(A_Y Z, A_X H)
///                + g(A_X Z, A_Y H)
/// i.e. the T- and A-term families carry the sign matching the pinned
/// convention; the round-sphere and Hopf regressions below keep this
/// calibration honest.
pub fn curvature_submersion_check(
    sub: &SubmersionInstance,
    points: &[Vec<f64>],
    scope: CurvatureScope,
) -> Result<Vec<f64>> {
    match scope {
        CurvatureScope::Vertical => curvature_vertical(sub, points),
        CurvatureScope::Horizontal => curvature_horizontal(sub, points),
    }
}

fn curvature_vertical(sub: &SubmersionInstance, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let vf = &sub.vertical_frame;
    let d = vf.len();
    points
        .iter()
        .map(|p| {
            let g = sub.total.metric_at(p)?;
            let r = conn::riemann_tensor(&sub.total, p)?;
            let vals: Vec<Vec<f64>> = vf.iter().map(|f| f.eval(p)).collect();
            let mut t = vec![vec![Vec::new(); d]; d];
            for a in 0..d {
                for b in 0..d {
                    t[a][b] = submersion::oneill_t(sub, p, &vf[a], &vf[b])?;
                }
            }
            let mut worst: f64 = 0.0;
            for a in 0..d {
                for b in 0..d {
                    if a == b {
                        continue;
                    }
                    for c in 0..d {
                        for e in 0..d {
                            let lhs =
                                conn::contract_riemann(&r, &vals[a], &vals[b], &vals[c], &vals[e]);
                            let rhat = submersion::fibre_curvature4(
                                sub, p, &vf[a], &vf[b], &vf[c], &vf[e],
                            )?;
                            let t1 = linalg::g_inner(&g, &t[a][e], &t[b][c]);
                            let t2 = linalg::g_inner(&g, &t[b][e], &t[a][c]);
                            worst = worst.max((lhs - rhat + t1 - t2).abs());
                        }
                    }
                }
            }
            Ok(worst)
        })
        .collect()
}

fn curvature_horizontal(sub: &SubmersionInstance, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let lifts = base_coordinate_lifts(sub);
    let d = lifts.len();
    points
        .iter()
        .map(|p| {
            let g = sub.total.metric_at(p)?;
            let pb = sub.projection.eval(p);
            let r_tot = conn::riemann_tensor(&sub.total, p)?;
            let r_base = conn::riemann_tensor(&sub.base, &pb)?;
            let vals: Vec<Vec<f64>> = lifts.iter().map(|f| f.eval(p)).collect();
            let pushed: Vec<Vec<f64>> = vals
                .iter()
                .map(|v| submersion::push_forward(sub, p, v))
                .collect::<Result<_>>()?;
            let mut a = vec![vec![Vec::new(); d]; d];
            for i in 0..d {
                for j in 0..d {
                    a[i][j] = submersion::oneill_a(sub, p, &lifts[i], &lifts[j])?;
                }
            }
            let mut worst: f64 = 0.0;
            for x in 0..d {
                for y in 0..d {
                    if x == y {
                        continue;
                    }
                    for z in 0..d {
                        for h in 0..d {
                            let lhs = conn::contract_riemann(
                                &r_tot, &vals[x], &vals[y], &vals[z], &vals[h],
                            );
                            let rstar = conn::contract_riemann(
                                &r_base, &pushed[x], &pushed[y], &pushed[z], &pushed[h],
                            );
                            let term = 2.0 * linalg::g_inner(&g, &a[x][y], &a[z][h])
                                - linalg::g_inner(&g, &a[y][z], &a[x][h])
                                + linalg::g_inner(&g, &a[x][z], &a[y][h]);
                            worst = worst.max((lhs - rstar - term).abs());
                        }
                    }
                }
            }
            Ok(worst)
        })
        .collect()
}

/// Max ‖v[X,Y]‖ over basic horizontal pairs (equivalently 2‖A_X Y‖).
pub fn horizontal_integrability_check(
    sub: &SubmersionInstance,
    points: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let lifts = base_coordinate_lifts(sub);
    points
        .iter()
        .map(|p| {
            let g = sub.total.metric_at(p)?;
            let mut worst: f64 = 0.0;
            for (i, x) in lifts.iter().enumerate() {
                for y in lifts.iter().skip(i + 1) {
                    let br = conn::lie_bracket(x, y, p);
                    let vbr = submersion::v_project(sub, p, &br)?;
                    worst = worst.max(max_norm(&g, &vbr));
                }
            }
            Ok(worst)
        })
        .collect()
}

// ---------------------------------------------------------------------
// Gray-type curvature conditions
// ---------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrayKind {
    K1,
    K2,
    K3,
    K1Phi,
    K2Phi,
    K3Phi,
}

impl GrayKind {
    pub fn is_phi(self) -> bool {
        matches!(self, GrayKind::K1Phi | GrayKind::K2Phi | GrayKind::K3Phi)
    }
}

/// Curvature tensor expressed in a frame with a structure map acting as a
/// signed pair swap on the frame legs.
struct FrameCurvature {
    r: Vec<Vec<Vec<Vec<f64>>>>,
    /// leg index ↦ (image leg, sign); None when the structure kills the leg
    map: Vec<Option<(usize, f64)>>,
}

impl FrameCurvature {
    fn entry(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.r[a][b][c][d]
    }

    fn mapped(&self, legs: [usize; 4], apply: [bool; 4]) -> f64 {
        let mut sign = 1.0;
        let mut idx = [0usize; 4];
        for (k, (&leg, &ap)) in legs.iter().zip(apply.iter()).enumerate() {
            if ap {
                match self.map[leg] {
                    Some((to, s)) => {
                        idx[k] = to;
                        sign *= s;
                    }
                    None => return 0.0,
                }
            } else {
                idx[k] = leg;
            }
        }
        sign * self.r[idx[0]][idx[1]][idx[2]][idx[3]]
    }

    fn residual(&self, kind: GrayKind) -> f64 {
        let n = self.map.len();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let base = self.entry(a, b, c, d);
                        let legs = [a, b, c, d];
                        let rhs = match kind {
                            GrayKind::K1 | GrayKind::K1Phi => {
                                self.mapped(legs, [false, false, true, true])
                            }
                            GrayKind::K2 | GrayKind::K2Phi => {
                                self.mapped(legs, [true, false, false, true])
                                    + self.mapped(legs, [false, true, false, true])
                                    + self.mapped(legs, [false, false, true, true])
                            }
                            GrayKind::K3 | GrayKind::K3Phi => {
                                self.mapped(legs, [true, true, true, true])
                            }
                        };
                        worst = worst.max((base - rhs).abs());
                    }
                }
            }
        }
        worst
    }
}

fn transform_riemann(r: &[Vec<Vec<Vec<f64>>>], legs: &[Vec<f64>]) -> Vec<Vec<Vec<Vec<f64>>>> {
    let n = r.len();
    let m = legs.len();
    // contract one slot at a time
    let mut t1 = vec![vec![vec![vec![0.0; n]; n]; n]; m];
    for (a, leg) in legs.iter().enumerate() {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for i in 0..n {
                        acc += leg[i] * r[i][j][k][l];
                    }
                    t1[a][j][k][l] = acc;
                }
            }
        }
    }
    let mut t2 = vec![vec![vec![vec![0.0; n]; n]; m]; m];
    for a in 0..m {
        for (b, leg) in legs.iter().enumerate() {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for j in 0..n {
                        acc += leg[j] * t1[a][j][k][l];
                    }
                    t2[a][b][k][l] = acc;
                }
            }
        }
    }
    let mut t3 = vec![vec![vec![vec![0.0; n]; m]; m]; m];
    for a in 0..m {
        for b in 0..m {
            for (c, leg) in legs.iter().enumerate() {
                for l in 0..n {
                    let mut acc = 0.0;
                    for k in 0..n {
                        acc += leg[k] * t2[a][b][k][l];
                    }
                    t3[a][b][c][l] = acc;
                }
            }
        }
    }
    let mut out = vec![vec![vec![vec![0.0; m]; m]; m]; m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for (dd, leg) in legs.iter().enumerate() {
                    let mut acc = 0.0;
                    for l in 0..n {
                        acc += leg[l] * t3[a][b][c][l];
                    }
                    out[a][b][c][dd] = acc;
                }
            }
        }
    }
    out
}

/// Gray-type identity residual over exhaustive frame 4-tuples. The φ-kinds
/// run on the total contact structure; the J-kinds on the base of a
/// submersion.
pub fn gray_check(ex: &Example, kind: GrayKind, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    if kind.is_phi() {
        let s = require_structure(ex)?;
        points
            .iter()
            .map(|p| {
                let frame = match ex {
                    Example::Submersion(sub) => submersion::submersion_frame(sub, p, None)?,
                    Example::Structure(_) => contact::adapted_frame_at(s, p, None)?,
                };
                let legs = frame.legs();
                let r = conn::riemann_tensor(&s.patch, p)?;
                let fc = FrameCurvature {
                    r: transform_riemann(&r, &legs),
                    map: pair_map(legs.len(), true),
                };
                Ok(fc.residual(kind))
            })
            .collect()
    } else {
        let sub = ex.submersion()?;
        let bs = sub.base_hermitian()?;
        points
            .iter()
            .map(|p| {
                let pb = sub.projection.eval(p);
                let g = sub.base.metric_at(&pb)?;
                let j = bs.j.eval(&pb);
                let nb = sub.base_dim();
                let basis: Vec<Vec<f64>> = (0..nb)
                    .map(|i| {
                        let mut e = vec![0.0; nb];
                        e[i] = 1.0;
                        e
                    })
                    .collect();
                let ortho = linalg::gram_schmidt_g(&g, &basis, 1e-12)?;
                let pairs = crate::frame::j_adapted_pairs(&g, &j, &ortho)?;
                let mut legs = Vec::new();
                for (x, jx) in pairs {
                    legs.push(x);
                    legs.push(jx);
                }
                let r = conn::riemann_tensor(&sub.base, &pb)?;
                let fc = FrameCurvature {
                    r: transform_riemann(&r, &legs),
                    map: pair_map(legs.len(), false),
                };
                Ok(fc.residual(kind))
            })
            .collect()
    }
}

/// Gray-type identity residual for the intrinsic curvature of the fibres,
/// over exhaustive 4-tuples of the φ-adapted vertical frame {V_j, φV_j, ξ}.
/// R̂ comes from the induced connection v∇; only the φ-kinds make sense on
/// a fibre.
pub fn gray_fibre_check(
    sub: &SubmersionInstance,
    kind: GrayKind,
    points: &[Vec<f64>],
) -> Result<Vec<f64>> {
    if !kind.is_phi() {
        return Err(GeomError::PreconditionNotMet(
            "fibres carry the contact structure; only the φ-kinds apply".into(),
        ));
    }
    sub.structure()?;
    sub.check_dimensions()?;
    let legs = submersion::vertical_adapted_leg_fields(sub);
    let d = legs.len();
    points
        .iter()
        .map(|p| {
            let g = sub.total.metric_at(p)?;
            let leg_vals: Vec<Vec<f64>> = legs.iter().map(|f| f.eval(p)).collect();
            let mut r = vec![vec![vec![vec![0.0; d]; d]; d]; d];
            for a in 0..d {
                for b in 0..d {
                    if a == b {
                        continue;
                    }
                    for c in 0..d {
                        let vec =
                            submersion::fibre_curvature_vec(sub, p, &legs[a], &legs[b], &legs[c])?;
                        for (e, w) in leg_vals.iter().enumerate() {
                            r[a][b][c][e] = linalg::g_inner(&g, &vec, w);
                        }
                    }
                }
            }
            // φ restricted to the fibre still acts as the signed pair swap
            let fc = FrameCurvature {
                r,
                map: pair_map(d, true),
            };
            Ok(fc.residual(kind))
        })
        .collect()
}

/// Signed pair-swap action of φ (or J) on adapted frame legs: within each
/// pair the first leg maps to the second and the second to minus the
/// first; the trailing Reeb leg (contact case) is killed.
fn pair_map(n_legs: usize, has_reeb: bool) -> Vec<Option<(usize, f64)>> {
    let paired = if has_reeb { n_legs - 1 } else { n_legs };
    let mut map = Vec::with_capacity(n_legs);
    for k in 0..paired {
        if k % 2 == 0 {
            map.push(Some((k + 1, 1.0)));
        } else {
            map.push(Some((k - 1, -1.0)));
        }
    }
    if has_reeb {
        map.push(None);
    }
    map
}

// ---------------------------------------------------------------------
// Kähler base criterion
// ---------------------------------------------------------------------

/// Both sides of the Kähler-base criterion for almost cosymplectic total
/// spaces with Kähler leaves: A_Xξ must vanish exactly when the base is
/// Kähler (∇'J = 0 and N_J = 0). The check refuses structures outside the
/// hypothesis class.
pub fn kahler_base_criterion_check(
    sub: &SubmersionInstance,
    points: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let s = sub.structure()?;
    let bs = sub.base_hermitian()?;
    let gate_pts: Vec<Vec<f64>> = points.iter().take(5).cloned().collect();
    let class = contact::classify(s, &gate_pts)?;
    if class.almost_cosymplectic > 1e-8 {
        return Err(GeomError::PreconditionNotMet(format!(
            "total space is not almost cosymplectic (dΦ/dη residual {:.3e})",
            class.almost_cosymplectic
        )));
    }
    let astar = contact::check_a_star_identities(s, &gate_pts)?;
    if astar.nabla_phi_char > 1e-8 {
        return Err(GeomError::PreconditionNotMet(format!(
            "leaves are not Kähler (characterization residual {:.3e})",
            astar.nabla_phi_char
        )));
    }
    let lifts = base_coordinate_lifts(sub);
    let nb = sub.base_dim();
    points
        .iter()
        .map(|p| {
            let g = sub.total.metric_at(p)?;
            let pb = sub.projection.eval(p);
            let g_base = sub.base.metric_at(&pb)?;
            let mut worst: f64 = 0.0;
            for x in &lifts {
                let a = submersion::oneill_a(sub, p, x, &s.xi)?;
                worst = worst.max(max_norm(&g, &a));
            }
            worst = worst.max(contact::nabla_j_residual(bs, &pb)?);
            for i in 0..nb {
                for j in 0..nb {
                    let nj = contact::nijenhuis_j(
                        bs,
                        &pb,
                        &VectorField::coordinate(i, nb),
                        &VectorField::coordinate(j, nb),
                    )?;
                    worst = worst.max(max_norm(&g_base, &nj));
                }
            }
            Ok(worst)
        })
        .collect()
}

/// Kähler-base residuals alone: ∇'J and δ'Ω on the base.
pub fn base_kahler_check(sub: &SubmersionInstance, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let bs = sub.base_hermitian()?;
    let nb = sub.base_dim();
    points
        .iter()
        .map(|p| {
            let pb = sub.projection.eval(p);
            let mut worst = contact::nabla_j_residual(bs, &pb)?;
            for i in 0..nb {
                let mut e = vec![0.0; nb];
                e[i] = 1.0;
                worst = worst.max(contact::hermitian_codiff(bs, &pb, &e)?.abs());
            }
            Ok(worst)
        })
        .collect()
}
