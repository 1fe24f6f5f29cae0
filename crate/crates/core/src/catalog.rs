//! Closed-form example manifolds and submersions.
//!
//! Every builder self-verifies its output (metric SPD, structure axioms,
//! submersion residuals) on seeded sample points before handing it out, and
//! is deterministic: the same parameters produce bit-identical instances.
//! Orientation signs that the formulas leave free (the rotation sense of φ
//! and J) are calibrated in-engine: the builder tries both signs and keeps
//! the one that satisfies the defining residual.

use crate::ad::D2;
use crate::chart::ChartPatch;
use crate::contact::{self, ContactStructure, HermitianStructure};
use crate::error::{GeomError, Result};
use crate::fields::{EndoField, MapField, MatrixField, OneFormField, ScalarField, VectorField};
use crate::linalg;
use crate::sample::sample_points;
use crate::submersion::{riemannian_residuals, SubmersionInstance, WarpData};

pub const VERIFY_POINTS: usize = 100;
pub const VERIFY_SEED: u64 = 42;

/// A named catalog entry: either a full submersion instance or a
/// standalone almost contact metric structure.
#[derive(Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Example {
    Submersion(SubmersionInstance),
    Structure(NamedStructure),
}

#[derive(Clone)]
pub struct NamedStructure {
    pub name: String,
    pub structure: ContactStructure,
}

impl Example {
    pub fn name(&self) -> &str {
        match self {
            Example::Submersion(s) => &s.name,
            Example::Structure(s) => &s.name,
        }
    }

    /// The almost contact structure carried by this example, if any.
    pub fn contact_structure(&self) -> Option<&ContactStructure> {
        match self {
            Example::Submersion(s) => s.total_structure.as_ref(),
            Example::Structure(s) => Some(&s.structure),
        }
    }

    pub fn submersion(&self) -> Result<&SubmersionInstance> {
        match self {
            Example::Submersion(s) => Ok(s),
            Example::Structure(_) => Err(GeomError::MissingStructure(
                "example is a standalone structure, not a submersion",
            )),
        }
    }

    pub fn sample_domain(&self) -> &[(f64, f64)] {
        match self {
            Example::Submersion(s) => &s.total.domain,
            Example::Structure(s) => &s.structure.patch.domain,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    FlatR2,
    RoundS2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WarpKind {
    /// f(x) = 1 + x²
    Quadratic,
    /// f(x) = eˣ
    Exponential,
    /// f ≡ 1 (degenerates to the product)
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OlszakKind {
    /// f(z) = e^{2z}: almost cosymplectic with Kähler leaves, not cosymplectic
    Exp,
    /// f ≡ 1: flat cosymplectic R³
    Constant,
}

fn diag_metric(entries: Vec<fn(&[D2]) -> D2>) -> MatrixField {
    MatrixField::new(move |q| {
        let n = entries.len();
        let mut m = vec![vec![D2::constant(0.0); n]; n];
        for (i, f) in entries.iter().enumerate() {
            m[i][i] = f(q);
        }
        m
    })
}

fn verify_axioms(s: &ContactStructure, points: &[Vec<f64>], what: &str) -> Result<()> {
    for p in points {
        let r = contact::structure_axioms_residual(s, p)?;
        if r > 1e-10 {
            return Err(GeomError::ConstructionInvalid(format!(
                "{what}: structure axiom residual {r:.3e} at {p:?}"
            )));
        }
    }
    Ok(())
}

fn verify_submersion(sub: &SubmersionInstance, points: &[Vec<f64>]) -> Result<()> {
    for p in points {
        sub.total.metric_at(p)?;
        let r = riemannian_residuals(sub, p)?;
        if r.dpi_vertical > 1e-10 || r.isometry > 1e-9 || r.holomorphy > 1e-9 {
            return Err(GeomError::ConstructionInvalid(format!(
                "{}: submersion residuals {r:?} at {p:?}",
                sub.name
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Hopf fibration S³ → S²(1/2)
// ---------------------------------------------------------------------

fn hopf_total_patch() -> ChartPatch {
    ChartPatch::new(
        "s3_hopf",
        vec![
            (0.1, std::f64::consts::FRAC_PI_2 - 0.1),
            (-3.2, 3.2),
            (-3.2, 3.2),
        ],
        diag_metric(vec![
            |_| D2::constant(1.0),
            |q| q[0].cos() * q[0].cos(),
            |q| q[0].sin() * q[0].sin(),
        ]),
    )
}

fn hopf_phi(sign: f64) -> EndoField {
    EndoField::new(move |q| {
        let (s, c) = (q[0].sin(), q[0].cos());
        let z = D2::constant(0.0);
        // columns are images of ∂θ, ∂φ₁, ∂φ₂
        vec![
            vec![z, sign * (-(s * c)), sign * (s * c)],
            vec![sign * (s / c), z, z],
            vec![sign * (-(c / s)), z, z],
        ]
    })
}

fn hopf_structure(sign: f64) -> ContactStructure {
    ContactStructure {
        patch: hopf_total_patch(),
        phi: hopf_phi(sign),
        xi: VectorField::constant(vec![0.0, 1.0, 1.0]),
        eta: OneFormField::new(|q| {
            vec![
                D2::constant(0.0),
                q[0].cos() * q[0].cos(),
                q[0].sin() * q[0].sin(),
            ]
        }),
    }
}

fn hopf_base_patch() -> ChartPatch {
    ChartPatch::new(
        "s2_half",
        vec![(0.2, std::f64::consts::PI - 0.2), (-6.5, 6.5)],
        diag_metric(vec![|_| D2::constant(0.25), |q| {
            D2::constant(0.25) * q[0].sin() * q[0].sin()
        }]),
    )
}

fn sphere_rotation_j(sign: f64) -> EndoField {
    // unit rotation on a chart with g = a²(dϑ² + sin²ϑ dψ²)
    EndoField::new(move |q| {
        let s = q[0].sin();
        let z = D2::constant(0.0);
        vec![
            vec![z, sign * (-s)],
            vec![sign * (D2::constant(1.0) / s), z],
        ]
    })
}

/// The Hopf fibration with the Sasakian round structure upstairs and the
/// rescaled round 2-sphere (curvature 4) downstairs.
pub fn build_hopf_s3() -> Result<SubmersionInstance> {
    // calibrate the rotation sense of φ against the Sasakian residual
    let probes = [
        vec![std::f64::consts::FRAC_PI_4, 0.3, -0.4],
        vec![0.5, 1.0, 2.0],
        vec![1.1, -2.0, 0.8],
    ];
    let mut chosen = None;
    for sign in [1.0, -1.0] {
        let s = hopf_structure(sign);
        let r = contact::classify(&s, &probes)?;
        if r.sasakian < 1e-6 {
            chosen = Some((sign, s));
            break;
        }
    }
    let (_phi_sign, structure) = chosen.ok_or_else(|| {
        GeomError::ConstructionInvalid("no φ orientation satisfies the Sasakian identity".into())
    })?;

    let make = |j_sign: f64| SubmersionInstance {
        name: "hopf_s3".into(),
        total: hopf_total_patch(),
        base: hopf_base_patch(),
        total_structure: Some(structure.clone()),
        base_structure: Some(HermitianStructure {
            patch: hopf_base_patch(),
            j: sphere_rotation_j(j_sign),
        }),
        projection: MapField::new(|q| vec![q[0] * 2.0, q[2] - q[1]]),
        d_projection: MatrixField::constant(vec![vec![2.0, 0.0, 0.0], vec![0.0, -1.0, 1.0]]),
        vertical_frame: vec![VectorField::constant(vec![0.0, 1.0, 1.0])],
        warp: None,
    };
    let mut instance = None;
    for j_sign in [1.0, -1.0] {
        let sub = make(j_sign);
        let ok = probes.iter().all(|p| {
            riemannian_residuals(&sub, p)
                .map(|r| r.holomorphy < 1e-8)
                .unwrap_or(false)
        });
        if ok {
            instance = Some(sub);
            break;
        }
    }
    let instance = instance.ok_or_else(|| {
        GeomError::ConstructionInvalid("no J orientation makes the projection holomorphic".into())
    })?;

    let pts = sample_points(&instance.total.domain, VERIFY_POINTS, VERIFY_SEED);
    verify_axioms(instance.total_structure.as_ref().unwrap(), &pts, "hopf_s3")?;
    verify_submersion(&instance, &pts)?;
    Ok(instance)
}

// ---------------------------------------------------------------------
// Cosymplectic products N × R
// ---------------------------------------------------------------------

fn flat_patch(name: &str, dim: usize) -> ChartPatch {
    ChartPatch::new(
        name,
        vec![(-2.0, 2.0); dim],
        MatrixField::constant(linalg::identity::<f64>(dim)),
    )
}

fn block_rotation(dim: usize, blocks: &[(usize, usize)]) -> EndoField {
    // φ(∂a) = ∂b, φ(∂b) = -∂a for each block (a, b); zero elsewhere
    let mut m = vec![vec![0.0; dim]; dim];
    for &(a, b) in blocks {
        m[b][a] = 1.0;
        m[a][b] = -1.0;
    }
    EndoField::constant(m)
}

fn s2_patch(name: &str) -> ChartPatch {
    ChartPatch::new(
        name,
        vec![(0.3, std::f64::consts::PI - 0.3), (-3.2, 3.2)],
        diag_metric(vec![|_| D2::constant(1.0), |q| q[0].sin() * q[0].sin()]),
    )
}

/// M = N × R with ξ = ∂t, η = dt, φ = J on TN; the product projection is a
/// contact-complex Riemannian submersion with T = A = B = 0.
pub fn build_cosymplectic_product(base: BaseKind) -> Result<SubmersionInstance> {
    let instance = match base {
        BaseKind::FlatR2 => SubmersionInstance {
            name: "cosymplectic_product_flat".into(),
            total: flat_patch("r2_x_r", 3),
            base: flat_patch("r2", 2),
            total_structure: Some(ContactStructure {
                patch: flat_patch("r2_x_r", 3),
                phi: block_rotation(3, &[(0, 1)]),
                xi: VectorField::constant(vec![0.0, 0.0, 1.0]),
                eta: OneFormField::new(|_| {
                    vec![D2::constant(0.0), D2::constant(0.0), D2::constant(1.0)]
                }),
            }),
            base_structure: Some(HermitianStructure {
                patch: flat_patch("r2", 2),
                j: block_rotation(2, &[(0, 1)]),
            }),
            projection: MapField::new(|q| vec![q[0], q[1]]),
            d_projection: MatrixField::constant(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]),
            vertical_frame: vec![VectorField::coordinate(2, 3)],
            warp: None,
        },
        BaseKind::RoundS2 => {
            let total = || {
                ChartPatch::new(
                    "s2_x_r",
                    vec![(0.3, std::f64::consts::PI - 0.3), (-3.2, 3.2), (-2.0, 2.0)],
                    diag_metric(vec![
                        |_| D2::constant(1.0),
                        |q| q[0].sin() * q[0].sin(),
                        |_| D2::constant(1.0),
                    ]),
                )
            };
            // φ restricted to TS² is the metric rotation, padded by ξ = ∂t
            let phi = EndoField::new(|q| {
                let s = q[0].sin();
                let z = D2::constant(0.0);
                vec![
                    vec![z, -s, z],
                    vec![D2::constant(1.0) / s, z, z],
                    vec![z, z, z],
                ]
            });
            SubmersionInstance {
                name: "cosymplectic_product_s2".into(),
                total: total(),
                base: s2_patch("s2"),
                total_structure: Some(ContactStructure {
                    patch: total(),
                    phi,
                    xi: VectorField::constant(vec![0.0, 0.0, 1.0]),
                    eta: OneFormField::new(|_| {
                        vec![D2::constant(0.0), D2::constant(0.0), D2::constant(1.0)]
                    }),
                }),
                base_structure: Some(HermitianStructure {
                    patch: s2_patch("s2"),
                    j: sphere_rotation_j(1.0),
                }),
                projection: MapField::new(|q| vec![q[0], q[1]]),
                d_projection: MatrixField::constant(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]),
                vertical_frame: vec![VectorField::coordinate(2, 3)],
                warp: None,
            }
        }
    };
    let pts = sample_points(&instance.total.domain, VERIFY_POINTS, VERIFY_SEED);
    verify_axioms(
        instance.total_structure.as_ref().unwrap(),
        &pts,
        &instance.name,
    )?;
    verify_submersion(&instance, &pts)?;
    Ok(instance)
}

// ---------------------------------------------------------------------
// Warped products R ×_f R and R ×_f R²
// ---------------------------------------------------------------------

fn warp_fn(kind: WarpKind) -> (fn(&[D2]) -> D2, &'static str) {
    match kind {
        WarpKind::Quadratic => (|q: &[D2]| q[0] * q[0] + 1.0, "warped_quadratic"),
        WarpKind::Exponential => (|q: &[D2]| q[0].exp(), "warped_exponential"),
        WarpKind::Constant => (|_: &[D2]| D2::constant(1.0), "warped_constant"),
    }
}

/// M = R ×_f R with g = dx² + f(x) dy²; purely Riemannian (no contact
/// structure), carrying its warp function for the closed-form T check.
pub fn build_warped(kind: WarpKind) -> Result<SubmersionInstance> {
    let (f, name) = warp_fn(kind);
    let instance = SubmersionInstance {
        name: name.into(),
        total: ChartPatch::new(
            "warped_plane",
            vec![(-2.0, 2.0); 2],
            MatrixField::new(move |q| {
                vec![
                    vec![D2::constant(1.0), D2::constant(0.0)],
                    vec![D2::constant(0.0), f(q)],
                ]
            }),
        ),
        base: flat_patch("r1", 1),
        total_structure: None,
        base_structure: None,
        projection: MapField::new(|q| vec![q[0]]),
        d_projection: MatrixField::constant(vec![vec![1.0, 0.0]]),
        vertical_frame: vec![VectorField::coordinate(1, 2)],
        warp: Some(WarpData {
            f: ScalarField::new(f),
        }),
    };
    let pts = sample_points(&instance.total.domain, VERIFY_POINTS, VERIFY_SEED);
    verify_submersion(&instance, &pts)?;
    Ok(instance)
}

/// M = R ×_f R² with a two-dimensional fibre, so the vertical curvature
/// equation has non-degenerate 4-tuples to act on.
pub fn build_warped_r2_fibre() -> Result<SubmersionInstance> {
    let f = |q: &[D2]| q[0] * q[0] + 1.0;
    let instance = SubmersionInstance {
        name: "warped_r2_fibre".into(),
        total: ChartPatch::new(
            "warped_3d",
            vec![(-2.0, 2.0); 3],
            MatrixField::new(move |q| {
                let z = D2::constant(0.0);
                vec![
                    vec![D2::constant(1.0), z, z],
                    vec![z, f(q), z],
                    vec![z, z, f(q)],
                ]
            }),
        ),
        base: flat_patch("r1", 1),
        total_structure: None,
        base_structure: None,
        projection: MapField::new(|q| vec![q[0]]),
        d_projection: MatrixField::constant(vec![vec![1.0, 0.0, 0.0]]),
        vertical_frame: vec![VectorField::coordinate(1, 3), VectorField::coordinate(2, 3)],
        warp: Some(WarpData {
            f: ScalarField::new(f),
        }),
    };
    let pts = sample_points(&instance.total.domain, VERIFY_POINTS, VERIFY_SEED);
    verify_submersion(&instance, &pts)?;
    Ok(instance)
}

// ---------------------------------------------------------------------
// Olszak family on R³ and derived products
// ---------------------------------------------------------------------

fn olszak_structure(kind: OlszakKind) -> ContactStructure {
    // coordinates (x, y, z); g = f dx² + f⁻¹ dy² + dz², f = f(z)
    let (f, name): (fn(&[D2]) -> D2, &str) = match kind {
        OlszakKind::Exp => (|q: &[D2]| (q[2] * 2.0).exp(), "olszak_exp"),
        OlszakKind::Constant => (|_: &[D2]| D2::constant(1.0), "olszak_constant"),
    };
    let patch = ChartPatch::new(
        name,
        vec![(-2.0, 2.0), (-2.0, 2.0), (-1.0, 1.0)],
        MatrixField::new(move |q| {
            let z = D2::constant(0.0);
            vec![
                vec![f(q), z, z],
                vec![z, D2::constant(1.0) / f(q), z],
                vec![z, z, D2::constant(1.0)],
            ]
        }),
    );
    ContactStructure {
        patch,
        phi: EndoField::new(move |q| {
            let z = D2::constant(0.0);
            // φ∂x = f ∂y, φ∂y = −f⁻¹ ∂x, φ∂z = 0
            vec![
                vec![z, -(D2::constant(1.0) / f(q)), z],
                vec![f(q), z, z],
                vec![z, z, z],
            ]
        }),
        xi: VectorField::constant(vec![0.0, 0.0, 1.0]),
        eta: OneFormField::new(|_| vec![D2::constant(0.0), D2::constant(0.0), D2::constant(1.0)]),
    }
}

/// The R³ family realizing almost cosymplectic structures with Kähler
/// leaves: η = dz, g = f dx² + f⁻¹ dy² + dz², φ∂x = f∂y. For f ≡ 1 it
/// degenerates to the flat cosymplectic R³. The builder verifies dΦ = dη
/// = 0 and the leafwise-Kähler characterization before returning.
pub fn build_olszak_r3(kind: OlszakKind) -> Result<NamedStructure> {
    let structure = olszak_structure(kind);
    let pts = sample_points(&structure.patch.domain, VERIFY_POINTS, VERIFY_SEED);
    verify_axioms(&structure, &pts, &structure.patch.name)?;
    // class gate: closed forms and the A* characterization of Kähler leaves
    let few: Vec<Vec<f64>> = pts.iter().take(10).cloned().collect();
    let class = contact::classify(&structure, &few)?;
    if class.almost_cosymplectic > 1e-8 {
        return Err(GeomError::ConstructionInvalid(format!(
            "dΦ/dη residual {:.3e}",
            class.almost_cosymplectic
        )));
    }
    let astar = contact::check_a_star_identities(&structure, &few)?;
    if astar.nabla_phi_char > 1e-8 {
        return Err(GeomError::ConstructionInvalid(format!(
            "leafwise Kähler characterization residual {:.3e}",
            astar.nabla_phi_char
        )));
    }
    Ok(NamedStructure {
        name: structure.patch.name.clone(),
        structure,
    })
}

/// Flat cosymplectic R⁵ = R² × R³ over a flat Kähler R² base, with a
/// three-dimensional fibre {∂y₁, ∂y₂, ∂t}.
pub fn build_flat_r5() -> Result<SubmersionInstance> {
    let instance = SubmersionInstance {
        name: "flat_r5".into(),
        total: flat_patch("r5", 5),
        base: flat_patch("r2", 2),
        total_structure: Some(ContactStructure {
            patch: flat_patch("r5", 5),
            phi: block_rotation(5, &[(0, 1), (2, 3)]),
            xi: VectorField::constant(vec![0.0, 0.0, 0.0, 0.0, 1.0]),
            eta: OneFormField::new(|_| {
                let z = D2::constant(0.0);
                vec![z, z, z, z, D2::constant(1.0)]
            }),
        }),
        base_structure: Some(HermitianStructure {
            patch: flat_patch("r2", 2),
            j: block_rotation(2, &[(0, 1)]),
        }),
        projection: MapField::new(|q| vec![q[0], q[1]]),
        d_projection: MatrixField::constant(vec![
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0, 0.0],
        ]),
        vertical_frame: vec![
            VectorField::coordinate(2, 5),
            VectorField::coordinate(3, 5),
            VectorField::coordinate(4, 5),
        ],
        warp: None,
    };
    let pts = sample_points(&instance.total.domain, VERIFY_POINTS, VERIFY_SEED);
    verify_axioms(instance.total_structure.as_ref().unwrap(), &pts, "flat_r5")?;
    verify_submersion(&instance, &pts)?;
    Ok(instance)
}

/// R² × (Olszak R³) over the flat Kähler R² base: almost cosymplectic with
/// Kähler leaves, curved three-dimensional fibres, T = A = B = 0.
pub fn build_olszak_product() -> Result<SubmersionInstance> {
    // coordinates (u₁, u₂, x, y, z)
    let f = |q: &[D2]| (q[4] * 2.0).exp();
    let total = || {
        ChartPatch::new(
            "r2_x_olszak",
            vec![
                (-2.0, 2.0),
                (-2.0, 2.0),
                (-2.0, 2.0),
                (-2.0, 2.0),
                (-1.0, 1.0),
            ],
            MatrixField::new(move |q| {
                let z = D2::constant(0.0);
                let one = D2::constant(1.0);
                vec![
                    vec![one, z, z, z, z],
                    vec![z, one, z, z, z],
                    vec![z, z, f(q), z, z],
                    vec![z, z, z, one / f(q), z],
                    vec![z, z, z, z, one],
                ]
            }),
        )
    };
    let phi = EndoField::new(move |q| {
        let z = D2::constant(0.0);
        let one = D2::constant(1.0);
        vec![
            vec![z, -one, z, z, z],
            vec![one, z, z, z, z],
            vec![z, z, z, -(one / f(q)), z],
            vec![z, z, f(q), z, z],
            vec![z, z, z, z, z],
        ]
    });
    let instance = SubmersionInstance {
        name: "olszak_product".into(),
        total: total(),
        base: flat_patch("r2", 2),
        total_structure: Some(ContactStructure {
            patch: total(),
            phi,
            xi: VectorField::constant(vec![0.0, 0.0, 0.0, 0.0, 1.0]),
            eta: OneFormField::new(|_| {
                let z = D2::constant(0.0);
                vec![z, z, z, z, D2::constant(1.0)]
            }),
        }),
        base_structure: Some(HermitianStructure {
            patch: flat_patch("r2", 2),
            j: block_rotation(2, &[(0, 1)]),
        }),
        projection: MapField::new(|q| vec![q[0], q[1]]),
        d_projection: MatrixField::constant(vec![
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0, 0.0],
        ]),
        vertical_frame: vec![
            VectorField::coordinate(2, 5),
            VectorField::coordinate(3, 5),
            VectorField::coordinate(4, 5),
        ],
        warp: None,
    };
    let pts = sample_points(&instance.total.domain, VERIFY_POINTS, VERIFY_SEED);
    verify_axioms(
        instance.total_structure.as_ref().unwrap(),
        &pts,
        "olszak_product",
    )?;
    verify_submersion(&instance, &pts)?;
    Ok(instance)
}

/// All catalog example names, in a stable order.
pub fn example_names() -> Vec<&'static str> {
    vec![
        "hopf_s3",
        "cosymplectic_product_flat",
        "cosymplectic_product_s2",
        "warped_quadratic",
        "warped_exponential",
        "warped_constant",
        "warped_r2_fibre",
        "olszak_exp",
        "olszak_constant",
        "flat_r5",
        "olszak_product",
    ]
}

/// Build a catalog example by name.
pub fn build_example(name: &str) -> Result<Example> {
    match name {
        "hopf_s3" => Ok(Example::Submersion(build_hopf_s3()?)),
        "cosymplectic_product_flat" => Ok(Example::Submersion(build_cosymplectic_product(
            BaseKind::FlatR2,
        )?)),
        "cosymplectic_product_s2" => Ok(Example::Submersion(build_cosymplectic_product(
            BaseKind::RoundS2,
        )?)),
        "warped_quadratic" => Ok(Example::Submersion(build_warped(WarpKind::Quadratic)?)),
        "warped_exponential" => Ok(Example::Submersion(build_warped(WarpKind::Exponential)?)),
        "warped_constant" => Ok(Example::Submersion(build_warped(WarpKind::Constant)?)),
        "warped_r2_fibre" => Ok(Example::Submersion(build_warped_r2_fibre()?)),
        "olszak_exp" => Ok(Example::Structure(build_olszak_r3(OlszakKind::Exp)?)),
        "olszak_constant" => Ok(Example::Structure(build_olszak_r3(OlszakKind::Constant)?)),
        "flat_r5" => Ok(Example::Submersion(build_flat_r5()?)),
        "olszak_product" => Ok(Example::Submersion(build_olszak_product()?)),
        other => Err(GeomError::UnknownExample(other.to_string())),
    }
}
