//! Levi-Civita connection, Lie brackets and Riemann curvature on a chart.
//!
//! All derivative input comes from a single jet evaluation of the metric:
//! the gradient part feeds the Christoffel symbols, the Hessian part their
//! first derivatives, which is exactly what the curvature tensor needs.
//! Sign convention, pinned by the round-sphere regression test:
//! R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z,
//! R(X,Y,Z,W) = g(R(X,Y)Z, W), and K(X,Y) = R(X,Y,Y,X) = +1 on the unit
//! round sphere.

use crate::ad::{Jet1, D2};
use crate::chart::ChartPatch;
use crate::error::Result;
use crate::fields::{EndoField, VectorField};
use crate::linalg;

/// Christoffel symbols Γ^k_{ij} at a point, symmetric in (i, j).
#[derive(Clone, Debug)]
pub struct ChristoffelAt {
    pub point: Vec<f64>,
    /// gamma[k][i][j]
    pub gamma: Vec<Vec<Vec<f64>>>,
}

/// Christoffel symbols together with their first coordinate derivatives.
#[derive(Clone, Debug)]
pub struct ChristoffelJet {
    pub at: ChristoffelAt,
    /// grad[m][k][i][j] = ∂ₘ Γ^k_{ij}
    pub grad: Vec<Vec<Vec<Vec<f64>>>>,
}

type MetricParts = (Vec<Vec<f64>>, Vec<Vec<D2>>);

fn metric_parts(patch: &ChartPatch, p: &[f64]) -> Result<MetricParts> {
    // SPD gate first, then the jet evaluation.
    let g = patch.metric_at(p)?;
    let jet = patch.metric_jet(p)?;
    Ok((g, jet))
}

pub fn christoffel(patch: &ChartPatch, p: &[f64]) -> Result<ChristoffelAt> {
    let n = patch.dim;
    let (g, jet) = metric_parts(patch, p)?;
    let ginv = linalg::inverse(&g)?;
    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..=i {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += ginv[k][l] * (jet[j][l].grad(i) + jet[i][l].grad(j) - jet[i][j].grad(l));
                }
                let v = 0.5 * acc;
                gamma[k][i][j] = v;
                gamma[k][j][i] = v;
            }
        }
    }
    Ok(ChristoffelAt {
        point: p.to_vec(),
        gamma,
    })
}

pub fn christoffel_jet(patch: &ChartPatch, p: &[f64]) -> Result<ChristoffelJet> {
    let n = patch.dim;
    let (g, jet) = metric_parts(patch, p)?;
    let ginv = linalg::inverse(&g)?;
    let at = christoffel(patch, p)?;

    // ∂ₘ g^{kl} = -g^{ka} ∂ₘ g_{ab} g^{bl}
    let mut dginv = vec![vec![vec![0.0; n]; n]; n];
    for m in 0..n {
        for k in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        acc -= ginv[k][a] * jet[a][b].grad(m) * ginv[b][l];
                    }
                }
                dginv[m][k][l] = acc;
            }
        }
    }

    let mut grad = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for m in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        let first = jet[j][l].grad(i) + jet[i][l].grad(j) - jet[i][j].grad(l);
                        let second =
                            jet[j][l].hess(m, i) + jet[i][l].hess(m, j) - jet[i][j].hess(m, l);
                        acc += dginv[m][k][l] * first + ginv[k][l] * second;
                    }
                    grad[m][k][i][j] = 0.5 * acc;
                }
            }
        }
    }
    Ok(ChristoffelJet { at, grad })
}

/// Covariant derivative ∇_X Y of a vector field in a pointwise direction.
pub fn cov_deriv_vec(
    patch: &ChartPatch,
    p: &[f64],
    x: &[f64],
    y: &VectorField,
) -> Result<Vec<f64>> {
    let n = patch.dim;
    let gamma = christoffel(patch, p)?.gamma;
    let yjet = y.jet(p);
    let mut out = vec![0.0; n];
    for k in 0..n {
        let mut acc = 0.0;
        for i in 0..n {
            acc += x[i] * yjet[k].grad(i);
            for j in 0..n {
                acc += gamma[k][i][j] * x[i] * yjet[j].val();
            }
        }
        out[k] = acc;
    }
    Ok(out)
}

/// Lie bracket [X, Y] of two vector fields at a point.
pub fn lie_bracket(x: &VectorField, y: &VectorField, p: &[f64]) -> Vec<f64> {
    let xjet = x.jet(p);
    let yjet = y.jet(p);
    let n = xjet.len();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|i| xjet[i].val() * yjet[k].grad(i) - yjet[i].val() * xjet[k].grad(i))
                .sum()
        })
        .collect()
}

/// The full lowered curvature tensor R[i][j][k][l] = g(R(∂ᵢ,∂ⱼ)∂ₖ, ∂ₗ) at
/// a point. Computed once and contracted as needed.
pub fn riemann_tensor(patch: &ChartPatch, p: &[f64]) -> Result<Vec<Vec<Vec<Vec<f64>>>>> {
    let n = patch.dim;
    let cj = christoffel_jet(patch, p)?;
    let g = patch.metric_at(p)?;
    let gamma = &cj.at.gamma;
    let dgamma = &cj.grad;
    let mut upper = vec![vec![vec![vec![0.0; n]; n]; n]; n]; // R^l_{ijk}
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                    for m in 0..n {
                        acc += gamma[l][i][m] * gamma[m][j][k] - gamma[l][j][m] * gamma[m][i][k];
                    }
                    upper[i][j][k][l] = acc;
                }
            }
        }
    }
    let mut lowered = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for m in 0..n {
                        acc += g[l][m] * upper[i][j][k][m];
                    }
                    lowered[i][j][k][l] = acc;
                }
            }
        }
    }
    Ok(lowered)
}

pub fn contract_riemann(
    r: &[Vec<Vec<Vec<f64>>>],
    x: &[f64],
    y: &[f64],
    z: &[f64],
    w: &[f64],
) -> f64 {
    let n = x.len();
    let mut acc = 0.0;
    for i in 0..n {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            if y[j] == 0.0 {
                continue;
            }
            for k in 0..n {
                if z[k] == 0.0 {
                    continue;
                }
                for l in 0..n {
                    acc += r[i][j][k][l] * x[i] * y[j] * z[k] * w[l];
                }
            }
        }
    }
    acc
}

/// The curvature 4-tensor R(X,Y,Z,W) on pointwise vectors.
pub fn riemann4(
    patch: &ChartPatch,
    p: &[f64],
    x: &[f64],
    y: &[f64],
    z: &[f64],
    w: &[f64],
) -> Result<f64> {
    let r = riemann_tensor(patch, p)?;
    Ok(contract_riemann(&r, x, y, z, w))
}

/// Covariant derivative of the structure tensor: (∇_Xφ)Y, tensorial in
/// both pointwise arguments.
pub fn cov_deriv_endo(
    patch: &ChartPatch,
    phi: &EndoField,
    p: &[f64],
    x: &[f64],
    y: &[f64],
) -> Result<Vec<f64>> {
    let n = patch.dim;
    let gamma = christoffel(patch, p)?.gamma;
    let pjet = phi.jet(p);
    let mut out = vec![0.0; n];
    for k in 0..n {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                let mut term = pjet[k][j].grad(i);
                for m in 0..n {
                    term += gamma[k][i][m] * pjet[m][j].val() - gamma[m][i][j] * pjet[k][m].val();
                }
                acc += xy * term;
            }
        }
        out[k] = acc;
    }
    Ok(out)
}

/// First-order jet of the vector field q ↦ (∇_{V(q)} F)(q): the value and
/// its first coordinate derivatives, assembled from the second-order jets
/// of V, F and the metric. This is the one honest nesting level in the
/// engine; it feeds the induced-connection curvature of the fibres.
pub fn cov_deriv_field_jet(
    patch: &ChartPatch,
    cj: &ChristoffelJet,
    v: &VectorField,
    f: &VectorField,
    p: &[f64],
) -> Vec<Jet1> {
    let n = patch.dim;
    let vjet = v.jet(p);
    let fjet = f.jet(p);
    let gamma = &cj.at.gamma;
    let dgamma = &cj.grad;
    (0..n)
        .map(|k| {
            let mut val = 0.0;
            let mut grad = vec![0.0; n];
            for i in 0..n {
                val += vjet[i].val() * fjet[k].grad(i);
                for m in 0..n {
                    grad[m] +=
                        vjet[i].grad(m) * fjet[k].grad(i) + vjet[i].val() * fjet[k].hess(m, i);
                }
                for j in 0..n {
                    val += gamma[k][i][j] * vjet[i].val() * fjet[j].val();
                    for m in 0..n {
                        grad[m] += dgamma[m][k][i][j] * vjet[i].val() * fjet[j].val()
                            + gamma[k][i][j]
                                * (vjet[i].grad(m) * fjet[j].val()
                                    + vjet[i].val() * fjet[j].grad(m));
                    }
                }
            }
            Jet1::from_parts(val, &grad)
        })
        .collect()
}

/// Covariant derivative in a pointwise direction of a field given as jets.
pub fn cov_deriv_jet_field(gamma: &[Vec<Vec<f64>>], x: &[f64], field: &[Jet1]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let mut acc = 0.0;
            for i in 0..n {
                acc += x[i] * field[k].grad(i);
                for j in 0..n {
                    acc += gamma[k][i][j] * x[i] * field[j].val();
                }
            }
            acc
        })
        .collect()
}

/// Directional derivative X(g(Y,Z)) of the metric pairing of two fields,
/// used by the metric-compatibility residual.
pub fn directional_metric_pairing(
    patch: &ChartPatch,
    p: &[f64],
    x: &[f64],
    y: &VectorField,
    z: &VectorField,
) -> Result<f64> {
    let n = patch.dim;
    let gjet = patch.metric_jet(p)?;
    let yjet = y.jet(p);
    let zjet = z.jet(p);
    let mut acc = 0.0;
    for m in 0..n {
        if x[m] == 0.0 {
            continue;
        }
        let mut d = 0.0;
        for i in 0..n {
            for j in 0..n {
                d += gjet[i][j].grad(m) * yjet[i].val() * zjet[j].val()
                    + gjet[i][j].val()
                        * (yjet[i].grad(m) * zjet[j].val() + yjet[i].val() * zjet[j].grad(m));
            }
        }
        acc += x[m] * d;
    }
    Ok(acc)
}

/// Residual of metric compatibility X g(Y,Z) − g(∇_X Y, Z) − g(Y, ∇_X Z).
pub fn metric_compat_residual(
    patch: &ChartPatch,
    p: &[f64],
    x: &[f64],
    y: &VectorField,
    z: &VectorField,
) -> Result<f64> {
    let g = patch.metric_at(p)?;
    let dy = cov_deriv_vec(patch, p, x, y)?;
    let dz = cov_deriv_vec(patch, p, x, z)?;
    let lhs = directional_metric_pairing(patch, p, x, y, z)?;
    let rhs = linalg::g_inner(&g, &dy, &z.eval(p)) + linalg::g_inner(&g, &y.eval(p), &dz);
    Ok((lhs - rhs).abs())
}

/// Residual of the torsion-free property ∇_X Y − ∇_Y X − [X,Y].
pub fn torsion_residual(
    patch: &ChartPatch,
    p: &[f64],
    x: &VectorField,
    y: &VectorField,
) -> Result<f64> {
    let dxy = cov_deriv_vec(patch, p, &x.eval(p), y)?;
    let dyx = cov_deriv_vec(patch, p, &y.eval(p), x)?;
    let br = lie_bracket(x, y, p);
    let mut worst: f64 = 0.0;
    for k in 0..patch.dim {
        worst = worst.max((dxy[k] - dyx[k] - br[k]).abs());
    }
    Ok(worst)
}
