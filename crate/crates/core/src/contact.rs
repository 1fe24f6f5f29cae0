//! Almost contact metric structures and their classification residuals.
//!
//! A structure (φ, ξ, η, g) must satisfy
//!   φ² = −I + η⊗ξ,   η(ξ) = 1,   g(φX, φY) = g(X, Y) − η(X)η(Y),
//! from which φξ = 0, η∘φ = 0 and η = g(ξ, ·) follow. The fundamental
//! 2-form is Φ(X, Y) = g(X, φY). Classes are measured, never assumed:
//! Sasakian   (∇_Xφ)Y = g(X,Y)ξ − η(Y)X,
//! cosymplectic   ∇φ = 0,
//! almost cosymplectic   dΦ = 0 and dη = 0.

use crate::ad::D2;
use crate::chart::ChartPatch;
use crate::conn::{cov_deriv_endo, cov_deriv_vec, lie_bracket};
use crate::error::{GeomError, Result};
use crate::fields::{EndoField, OneFormField, ScalarField, TwoFormField, VectorField};
use crate::forms;
use crate::frame::{self, OrthoFrame};
use crate::linalg;

#[derive(Clone)]
pub struct ContactStructure {
    pub patch: ChartPatch,
    pub phi: EndoField,
    pub xi: VectorField,
    pub eta: OneFormField,
}

#[derive(Clone)]
pub struct HermitianStructure {
    pub patch: ChartPatch,
    pub j: EndoField,
}

/// Max residuals of the structure axioms and their consequences at `p`.
pub fn structure_axioms_residual(s: &ContactStructure, p: &[f64]) -> Result<f64> {
    let n = s.patch.dim;
    let g = s.patch.metric_at(p)?;
    let phi = s.phi.eval(p);
    let xi = s.xi.eval(p);
    let eta = s.eta.eval(p);

    let mut worst: f64 = 0.0;
    // φ² = -I + η⊗ξ
    let phi2 = linalg::mat_mul(&phi, &phi);
    for i in 0..n {
        for j in 0..n {
            let want = -f64::from(i == j) + eta[j] * xi[i];
            worst = worst.max((phi2[i][j] - want).abs());
        }
    }
    // η(ξ) = 1
    let eta_xi: f64 = eta.iter().zip(&xi).map(|(a, b)| a * b).sum();
    worst = worst.max((eta_xi - 1.0).abs());
    // g(φX, φY) = g(X, Y) - η(X)η(Y) on the coordinate frame
    for i in 0..n {
        for j in 0..n {
            let phi_i: Vec<f64> = (0..n).map(|k| phi[k][i]).collect();
            let phi_j: Vec<f64> = (0..n).map(|k| phi[k][j]).collect();
            let lhs = linalg::g_inner(&g, &phi_i, &phi_j);
            let rhs = g[i][j] - eta[i] * eta[j];
            worst = worst.max((lhs - rhs).abs());
        }
    }
    // φξ = 0, η∘φ = 0, η = g(ξ, ·)
    let phi_xi = linalg::mat_vec(&phi, &xi);
    for v in &phi_xi {
        worst = worst.max(v.abs());
    }
    for j in 0..n {
        let eta_phi: f64 = (0..n).map(|k| eta[k] * phi[k][j]).sum();
        worst = worst.max(eta_phi.abs());
        let g_xi: f64 = (0..n).map(|k| g[j][k] * xi[k]).sum();
        worst = worst.max((eta[j] - g_xi).abs());
    }
    Ok(worst)
}

/// Max residuals of J² = −I and g(JX, JY) = g(X, Y) at `p`.
pub fn hermitian_axioms_residual(s: &HermitianStructure, p: &[f64]) -> Result<f64> {
    let n = s.patch.dim;
    let g = s.patch.metric_at(p)?;
    let j = s.j.eval(p);
    let j2 = linalg::mat_mul(&j, &j);
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            worst = worst.max((j2[a][b] + f64::from(a == b)).abs());
            let ja: Vec<f64> = (0..n).map(|k| j[k][a]).collect();
            let jb: Vec<f64> = (0..n).map(|k| j[k][b]).collect();
            worst = worst.max((linalg::g_inner(&g, &ja, &jb) - g[a][b]).abs());
        }
    }
    Ok(worst)
}

/// Φ(X, Y) = g(X, φY) at a point.
pub fn fundamental_form(s: &ContactStructure, p: &[f64], x: &[f64], y: &[f64]) -> Result<f64> {
    let g = s.patch.metric_at(p)?;
    let phi_y = s.phi.apply(p, y);
    Ok(linalg::g_inner(&g, x, &phi_y))
}

/// The fundamental 2-form as a field; its component matrix is g·φ.
pub fn fundamental_form_field(s: &ContactStructure) -> TwoFormField {
    let patch = s.patch.clone();
    let phi = s.phi.clone();
    TwoFormField::new(move |q| {
        let g = patch.metric_d2(q);
        let ph = phi.eval_d2(q);
        linalg::mat_mul(&g, &ph)
    })
}

/// Ω(X', Y') = g'(X', JY') on an almost Hermitian chart.
pub fn hermitian_form_field(s: &HermitianStructure) -> TwoFormField {
    let patch = s.patch.clone();
    let j = s.j.clone();
    TwoFormField::new(move |q| {
        let g = patch.metric_d2(q);
        let jm = j.eval_d2(q);
        linalg::mat_mul(&g, &jm)
    })
}

#[derive(Clone, Copy, Debug)]
pub struct ClassResiduals {
    pub sasakian: f64,
    pub cosymplectic: f64,
    pub almost_cosymplectic: f64,
}

/// Pointwise maxima of the three class-defining residuals over `points`.
pub fn classify(s: &ContactStructure, points: &[Vec<f64>]) -> Result<ClassResiduals> {
    let n = s.patch.dim;
    let phi_form = fundamental_form_field(s);
    let mut out = ClassResiduals {
        sasakian: 0.0,
        cosymplectic: 0.0,
        almost_cosymplectic: 0.0,
    };
    for p in points {
        let g = s.patch.metric_at(p)?;
        let xi = s.xi.eval(p);
        let eta = s.eta.eval(p);
        let d_phi = forms::d_2form_max(&s.patch, &phi_form, p)?;
        let d_eta = forms::d_eta_max(&s.patch, &s.eta, p)?;
        out.almost_cosymplectic = out.almost_cosymplectic.max(d_phi).max(d_eta);
        for i in 0..n {
            let ei = unit(i, n);
            for j in 0..n {
                let ej = unit(j, n);
                let nabla_phi = cov_deriv_endo(&s.patch, &s.phi, p, &ei, &ej)?;
                out.cosymplectic = out
                    .cosymplectic
                    .max(linalg::g_inner(&g, &nabla_phi, &nabla_phi).sqrt());
                let sas: Vec<f64> = (0..n)
                    .map(|k| nabla_phi[k] - (g[i][j] * xi[k] - eta[j] * ei[k]))
                    .collect();
                out.sasakian = out.sasakian.max(linalg::g_inner(&g, &sas, &sas).sqrt());
            }
        }
    }
    Ok(out)
}

fn unit(i: usize, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

/// A*X = −∇_X ξ.
pub fn a_star(s: &ContactStructure, p: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let d = cov_deriv_vec(&s.patch, p, x, &s.xi)?;
    Ok(d.iter().map(|v| -v).collect())
}

#[derive(Clone, Copy, Debug)]
pub struct AStarResiduals {
    /// g(A*X, Y) − g(X, A*Y)
    pub symmetry: f64,
    /// A*φ + φA*, together with A*ξ and η∘A*
    pub anticommutation: f64,
    /// (∇_Xφ)Y + g(φA*X, Y)ξ − η(Y)φA*X: the leafwise-Kähler
    /// characterization of ∇φ through A*
    pub nabla_phi_char: f64,
}

pub fn check_a_star_identities(
    s: &ContactStructure,
    points: &[Vec<f64>],
) -> Result<AStarResiduals> {
    let n = s.patch.dim;
    let mut out = AStarResiduals {
        symmetry: 0.0,
        anticommutation: 0.0,
        nabla_phi_char: 0.0,
    };
    for p in points {
        let g = s.patch.metric_at(p)?;
        let xi = s.xi.eval(p);
        let eta = s.eta.eval(p);
        let phi = s.phi.eval(p);
        let astar: Vec<Vec<f64>> = (0..n)
            .map(|i| a_star(s, p, &unit(i, n)))
            .collect::<Result<_>>()?;
        // column-major: astar[i] = A*∂ᵢ
        for i in 0..n {
            for j in 0..n {
                let ej = unit(j, n);
                let lhs = linalg::g_inner(&g, &astar[i], &ej);
                let rhs = linalg::g_inner(&g, &unit(i, n), &astar[j]);
                out.symmetry = out.symmetry.max((lhs - rhs).abs());
            }
            // A*(φ∂ᵢ) + φ(A*∂ᵢ)
            let phi_i: Vec<f64> = (0..n).map(|k| phi[k][i]).collect();
            let a_phi = a_star(s, p, &phi_i)?;
            let phi_a = linalg::mat_vec(&phi, &astar[i]);
            for k in 0..n {
                out.anticommutation = out.anticommutation.max((a_phi[k] + phi_a[k]).abs());
            }
        }
        let a_xi = a_star(s, p, &xi)?;
        for k in 0..n {
            out.anticommutation = out.anticommutation.max(a_xi[k].abs());
        }
        for i in 0..n {
            let eta_a: f64 = eta.iter().zip(&astar[i]).map(|(a, b)| a * b).sum();
            out.anticommutation = out.anticommutation.max(eta_a.abs());
        }
        for i in 0..n {
            let ei = unit(i, n);
            let phi_a_i = linalg::mat_vec(&phi, &astar[i]);
            for j in 0..n {
                let ej = unit(j, n);
                let nabla_phi = cov_deriv_endo(&s.patch, &s.phi, p, &ei, &ej)?;
                let coeff = linalg::g_inner(&g, &phi_a_i, &ej);
                for k in 0..n {
                    let rhs = -coeff * xi[k] + eta[j] * phi_a_i[k];
                    out.nabla_phi_char = out.nabla_phi_char.max((nabla_phi[k] - rhs).abs());
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct NTensors {
    pub n1: Vec<f64>,
    pub n2: f64,
    pub n3: Vec<f64>,
    pub n4: f64,
}

/// Directional derivative X(f) of a scalar field at `p`.
fn directional(field: &ScalarField, p: &[f64], x: &[f64]) -> f64 {
    let jet = field.jet(p);
    x.iter().enumerate().map(|(i, xi)| xi * jet.grad(i)).sum()
}

fn eta_pairing_field(eta: &OneFormField, y: &VectorField) -> ScalarField {
    let eta = eta.clone();
    let y = y.clone();
    ScalarField::new(move |q| {
        let e = eta.eval_d2(q);
        let v = y.eval_d2(q);
        e.iter()
            .zip(&v)
            .fold(D2::constant(0.0), |acc, (&a, &b)| acc + a * b)
    })
}

/// (L_Z η)(Y) = Z(η(Y)) − η([Z, Y]).
fn lie_deriv_eta(s: &ContactStructure, p: &[f64], z: &VectorField, y: &VectorField) -> f64 {
    let zy = lie_bracket(z, y, p);
    let eta = s.eta.eval(p);
    let eta_br: f64 = eta.iter().zip(&zy).map(|(a, b)| a * b).sum();
    directional(&eta_pairing_field(&s.eta, y), p, &z.eval(p)) - eta_br
}

/// The four normality tensors, evaluated on supplied vector fields.
/// N₁ is tensorial; N₂–N₄ are not and are meant for coordinate fields.
pub fn n_tensors(
    s: &ContactStructure,
    p: &[f64],
    x: &VectorField,
    y: &VectorField,
) -> Result<NTensors> {
    s.patch.check_domain(p)?;
    let n = s.patch.dim;
    let phi = s.phi.eval(p);
    let xi = s.xi.eval(p);
    let phi_x = s.phi.compose(x);
    let phi_y = s.phi.compose(y);

    // Nijenhuis torsion [φ,φ](X,Y) = φ²[X,Y] + [φX,φY] − φ[φX,Y] − φ[X,φY]
    let br_xy = lie_bracket(x, y, p);
    let br_pp = lie_bracket(&phi_x, &phi_y, p);
    let br_px_y = lie_bracket(&phi_x, y, p);
    let br_x_py = lie_bracket(x, &phi_y, p);
    let phi2_br = linalg::mat_vec(&phi, &linalg::mat_vec(&phi, &br_xy));
    let phi_br_px_y = linalg::mat_vec(&phi, &br_px_y);
    let phi_br_x_py = linalg::mat_vec(&phi, &br_x_py);
    let nij: Vec<f64> = (0..n)
        .map(|k| phi2_br[k] + br_pp[k] - phi_br_px_y[k] - phi_br_x_py[k])
        .collect();

    // dη with the 1/2 normalization that makes Sasakian structures normal:
    // N₁ = [φ,φ] + 2·(dη/2)⊗ξ = [φ,φ] + (Xη(Y) − Yη(X) − η([X,Y]))·ξ
    let eta = s.eta.eval(p);
    let eta_br: f64 = eta.iter().zip(&br_xy).map(|(a, b)| a * b).sum();
    let d_eta_unnorm = directional(&eta_pairing_field(&s.eta, y), p, &x.eval(p))
        - directional(&eta_pairing_field(&s.eta, x), p, &y.eval(p))
        - eta_br;
    let n1: Vec<f64> = (0..n).map(|k| nij[k] + d_eta_unnorm * xi[k]).collect();

    let n2 = lie_deriv_eta(s, p, &phi_x, y) - lie_deriv_eta(s, p, &phi_y, x);

    // N₃(X) = (L_ξφ)X = [ξ, φX] − φ[ξ, X]
    let br_xi_px = lie_bracket(&s.xi, &phi_x, p);
    let br_xi_x = lie_bracket(&s.xi, x, p);
    let phi_br_xi_x = linalg::mat_vec(&phi, &br_xi_x);
    let n3: Vec<f64> = (0..n).map(|k| br_xi_px[k] - phi_br_xi_x[k]).collect();

    let n4 = lie_deriv_eta(s, p, &s.xi, x);

    Ok(NTensors { n1, n2, n3, n4 })
}

pub type SubspaceBases = (Vec<Vec<f64>>, Vec<Vec<f64>>);

/// Default vertical/horizontal bases for a standalone structure: the Reeb
/// direction and a pruned orthonormal complement.
pub fn default_bases(s: &ContactStructure, p: &[f64]) -> Result<SubspaceBases> {
    let n = s.patch.dim;
    let g = s.patch.metric_at(p)?;
    let xi = s.xi.eval(p);
    let xi_unit = linalg::scale(&xi, 1.0 / linalg::g_norm(&g, &xi));
    let mut candidates = Vec::new();
    for i in 0..n {
        let e = unit(i, n);
        let c = linalg::g_inner(&g, &xi_unit, &e);
        candidates.push(linalg::axpy(-c, &xi_unit, &e));
    }
    let complement = linalg::gram_schmidt_g_pruned(&g, &candidates, 1e-8);
    if complement.len() != n - 1 {
        return Err(GeomError::DegenerateInput(format!(
            "complement of the Reeb direction has dimension {} (expected {})",
            complement.len(),
            n - 1
        )));
    }
    Ok((vec![xi], complement))
}

/// φ-adapted orthonormal frame at `p` from supplied subspace bases.
pub fn phi_adapted_frame(
    s: &ContactStructure,
    p: &[f64],
    vertical_basis: &[Vec<f64>],
    horizontal_basis: &[Vec<f64>],
) -> Result<OrthoFrame> {
    let g = s.patch.metric_at(p)?;
    let phi = s.phi.eval(p);
    let xi = s.xi.eval(p);
    let frame = frame::adapted_frame(&g, &phi, &xi, vertical_basis, horizontal_basis)?;
    Ok(OrthoFrame::from_adapted(p.to_vec(), frame))
}

/// Adapted frame from the default bases; `salt` deterministically remixes
/// the bases so that independent frames can be compared.
pub fn adapted_frame_at(s: &ContactStructure, p: &[f64], salt: Option<u64>) -> Result<OrthoFrame> {
    let (vb, hb) = default_bases(s, p)?;
    match salt {
        None => phi_adapted_frame(s, p, &vb, &hb),
        Some(k) => phi_adapted_frame(s, p, &vb, &frame::remix_basis(&hb, k)),
    }
}

/// Codifferential of the fundamental form via the adapted-frame sum:
/// δΦ(X̃) = −Σ_legs (∇_EΦ)(E, X̃), with (∇_EΦ)(E, X̃) = −g((∇_Eφ)E, X̃).
pub fn codiff_2form(
    s: &ContactStructure,
    p: &[f64],
    frame: &OrthoFrame,
    x_tilde: &[f64],
) -> Result<f64> {
    if frame.base_point != p {
        return Err(GeomError::FrameMismatch {
            frame_point: frame.base_point.clone(),
            point: p.to_vec(),
        });
    }
    let g = s.patch.metric_at(p)?;
    let mut acc = 0.0;
    for leg in frame.legs() {
        let nabla_phi = cov_deriv_endo(&s.patch, &s.phi, p, &leg, &leg)?;
        acc += linalg::g_inner(&g, &nabla_phi, x_tilde);
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug)]
pub struct HarmonicityResidual {
    pub d_phi_max: f64,
    pub delta_phi_max: f64,
}

/// Max |dΦ| and |δΦ| over the points; the form is harmonic when both
/// vanish (it is then closed and coclosed).
pub fn harmonicity_residual(
    s: &ContactStructure,
    points: &[Vec<f64>],
) -> Result<HarmonicityResidual> {
    let phi_form = fundamental_form_field(s);
    let mut out = HarmonicityResidual {
        d_phi_max: 0.0,
        delta_phi_max: 0.0,
    };
    for p in points {
        out.d_phi_max = out
            .d_phi_max
            .max(forms::d_2form_max(&s.patch, &phi_form, p)?);
        let fr = adapted_frame_at(s, p, None)?;
        for leg in fr.legs() {
            out.delta_phi_max = out.delta_phi_max.max(codiff_2form(s, p, &fr, &leg)?.abs());
        }
    }
    Ok(out)
}

/// Codifferential of the Hermitian fundamental form Ω on an even chart,
/// via the J-adapted pair sum.
pub fn hermitian_codiff(s: &HermitianStructure, p: &[f64], x: &[f64]) -> Result<f64> {
    let n = s.patch.dim;
    let g = s.patch.metric_at(p)?;
    let j = s.j.eval(p);
    let basis: Vec<Vec<f64>> = (0..n).map(|i| unit(i, n)).collect();
    let ortho = linalg::gram_schmidt_g(&g, &basis, frame::PIVOT_TOL)?;
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = frame::j_adapted_pairs(&g, &j, &ortho)?;
    let mut acc = 0.0;
    for (a, ja) in &pairs {
        for leg in [a, ja] {
            let nabla_j = cov_deriv_endo(&s.patch, &s.j, p, leg, leg)?;
            acc += linalg::g_inner(&g, &nabla_j, x)
        }
    }
    Ok(acc)
}

/// Max ‖(∇'J)‖ over coordinate pairs; zero on Kähler charts.
pub fn nabla_j_residual(s: &HermitianStructure, p: &[f64]) -> Result<f64> {
    let n = s.patch.dim;
    let g = s.patch.metric_at(p)?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for jdx in 0..n {
            let d = cov_deriv_endo(&s.patch, &s.j, p, &unit(i, n), &unit(jdx, n))?;
            worst = worst.max(linalg::g_inner(&g, &d, &d).sqrt());
        }
    }
    Ok(worst)
}

/// Nijenhuis tensor N_J(X, Y) of an almost complex structure, on fields.
pub fn nijenhuis_j(
    s: &HermitianStructure,
    p: &[f64],
    x: &VectorField,
    y: &VectorField,
) -> Result<Vec<f64>> {
    s.patch.check_domain(p)?;
    let n = s.patch.dim;
    let j = s.j.eval(p);
    let jx = s.j.compose(x);
    let jy = s.j.compose(y);
    let br_jj = lie_bracket(&jx, &jy, p);
    let br_jx_y = lie_bracket(&jx, y, p);
    let br_x_jy = lie_bracket(x, &jy, p);
    let br_xy = lie_bracket(x, y, p);
    let j_br_jx_y = linalg::mat_vec(&j, &br_jx_y);
    let j_br_x_jy = linalg::mat_vec(&j, &br_x_jy);
    Ok((0..n)
        .map(|k| br_jj[k] - j_br_jx_y[k] - j_br_x_jy[k] - br_xy[k])
        .collect())
}

/// Max |δΦ(leg)| over an adapted frame: the coclosedness residual at `p`.
pub fn delta_phi_max(s: &ContactStructure, p: &[f64]) -> Result<f64> {
    let fr = adapted_frame_at(s, p, None)?;
    let mut worst: f64 = 0.0;
    for leg in fr.legs() {
        worst = worst.max(codiff_2form(s, p, &fr, &leg)?.abs());
    }
    Ok(worst)
}
