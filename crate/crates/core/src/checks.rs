//! Residual computations behind the verification suites. Each function
//! returns the largest residual of one identity at one sample point (or over
//! a seeded batch of random algebra elements).

use nalgebra::{Matrix4, RowVector4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brst::{self, BrstEnv, BrstExpr, Field, GhostField, GhostJets};
use crate::cartan::*;
use crate::dressing::*;
use crate::error::Result;
use crate::field::{Point, ScalarField};
use crate::form::Form;
use crate::frame::Frame;
use crate::hodge::hodge_star;
use crate::jet::{Jet, C64, I};
use crate::matrix_form::MatrixForm;
use crate::metric_oracle::{metric_curvature, STEP};
use crate::scene::Scene;
use crate::spin_iso::*;
use crate::twistor;
use crate::yang_mills::{self, relative_difference, Algebra};

/// Random elements drawn per algebraic check.
pub const RANDOM_SAMPLES: usize = 100;

fn x(mu: usize) -> ScalarField {
    ScalarField::coordinate(mu)
}

fn c(v: f64) -> ScalarField {
    ScalarField::constant(v)
}

/// Gauge parameters of a scene, with fixed fallbacks for absent entries.
pub fn gauge_field(scene: &Scene) -> GaugeField {
    GaugeField {
        z: Some(scene.z.clone().unwrap_or_else(|| c(1.0).add(&x(1).scale(0.1)))),
        s_bar: None,
        s_log: Some(scene.sbar.clone().unwrap_or_else(|| {
            [x(0).scale(0.2), c(0.05), x(2).scale(0.1), x(1).scale(0.2), c(-0.1), x(3).scale(0.15)]
        })),
        r: Some(scene.r.clone().unwrap_or_else(|| {
            [x(1).scale(0.1), c(0.05), x(0).mul(&x(3)).scale(0.2), x(2).scale(-0.1)]
        })),
    }
}

/// A second, independent boost field.
fn other_boost() -> GaugeField {
    GaugeField {
        r: Some([c(-0.07), x(2).scale(0.3), c(0.1), x(0).mul(&x(1)).scale(0.5)]),
        ..Default::default()
    }
}

pub fn ghost_field(scene: &Scene) -> GhostField {
    GhostField {
        eps: Some(scene.eps.clone().unwrap_or_else(|| c(0.3).add(&x(0).scale(0.2)))),
        s: Some([x(3).scale(0.4), c(-0.2), x(0).scale(0.3), c(0.25), x(2).scale(-0.5), x(1).mul(&x(1))]),
        rho: Some([c(0.1), x(2).scale(0.3), x(0).mul(&x(3)), c(-0.4).add(&x(1))]),
    }
}

/// Coordinate 2-form of the scene, zero when absent.
pub fn faraday_form(scene: &Scene, p: &Point, k: usize) -> Result<Form> {
    match &scene.f {
        Some(f) => {
            let comps: Vec<Jet> = f.iter().map(|g| g.jet(p, k)).collect::<Result<_>>()?;
            Ok(yang_mills::faraday(comps.try_into().expect("six components")))
        }
        None => Ok(Form::zero(2, k)),
    }
}

/// Fixed test section `(x⁰, i e^{x¹}, x²x³, x³ − x⁰/2)`.
pub fn test_section(p: &Point, k: usize) -> MatrixForm {
    let v = |m: usize| Jet::variable(m, p[m], k);
    MatrixForm::from_jets(4, 1, vec![v(0), v(1).exp().scale(I), &v(2) * &v(3), &v(3) - &v(0).scale(0.5)])
}

fn second_section(p: &Point, k: usize) -> MatrixForm {
    let v = |m: usize| Jet::variable(m, p[m], k);
    MatrixForm::from_jets(
        4,
        1,
        vec![v(2).cos(), &v(0) * &v(1), v(3).scale(C64::new(0.5, -1.0)), v(1).sin().scale(I)],
    )
}

/// Frame, normal connection and a generic connection at one point.
pub struct PointData {
    pub frame: Frame,
    pub normal: NormalConnection,
    pub gauge: GaugeJets,
    /// The normal connection moved by the full scene gauge element.
    pub generic: MatrixForm,
}

impl PointData {
    pub fn new(scene: &Scene, p: &Point, k: usize) -> Result<Self> {
        let frame = scene.vierbein.at(p, k)?;
        let normal = normal_connection(&frame)?;
        let gauge = gauge_field(scene).at(p, k)?;
        let generic = gauge_transform(&normal.conn.matrix(), &gauge.matrix()?)?;
        Ok(PointData { frame, normal, gauge, generic })
    }
}

/// Dressed composite fields of the generic connection.
pub struct DressedData {
    pub u: DressingField,
    pub varpi: MatrixForm,
    pub conn: SpinCartanConn,
    pub omega: MatrixForm,
    pub psi: MatrixForm,
    pub frame: Frame,
}

impl DressedData {
    pub fn new(d: &PointData, p: &Point, k: usize) -> Result<Self> {
        let conn0 = SpinCartanConn::from_matrix(&d.generic);
        let u = extract_dressing(&conn0)?;
        let varpi = dress_connection(&d.generic, &u)?;
        let conn = SpinCartanConn::from_matrix(&varpi);
        Ok(DressedData {
            frame: frame_of(&conn0)?,
            omega: curvature_matrix(&varpi)?,
            psi: dress_section(&test_section(p, k), &u)?,
            u,
            varpi,
            conn,
        })
    }
}

// calculus

pub fn d_squared(scene: &Scene, p: &Point, k: usize) -> Result<f64> {
    let fr = scene.vierbein.at(p, k)?;
    let mut worst = 0.0f64;
    for a in 0..4 {
        worst = worst.max(fr.theta[a].d()?.d()?.max_abs_value());
    }
    let z = gauge_field(scene).z.expect("z set").jet(p, k)?;
    Ok(worst.max(Form::scalar(z).d()?.d()?.max_abs_value()))
}

/// `∗∗α = −α` on 2-forms in Lorentzian signature.
pub fn hodge_involution(scene: &Scene, p: &Point, k: usize) -> Result<f64> {
    let fr = scene.vierbein.at(p, k)?;
    let mut worst = 0.0f64;
    for a in 0..4 {
        let alpha = fr.theta[a].d()?;
        let twice = hodge_star(&hodge_star(&alpha, &fr)?, &fr)?;
        worst = worst.max((&twice + &alpha).max_abs_value());
    }
    Ok(worst)
}

// spin

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_sl2(r: &mut ChaCha8Rng) -> M2 {
    let mut u = || r.gen_range(-0.8..0.8);
    let m = M2::new(
        C64::new(1.0 + u(), u()),
        C64::new(u(), u()),
        C64::new(u(), u()),
        C64::new(1.0 + u(), u()),
    );
    m / m.determinant().sqrt()
}

fn random_so13(r: &mut ChaCha8Rng) -> Matrix4<f64> {
    (0..6).fold(Matrix4::zeros(), |acc, k| acc + so13_basis(k) * r.gen_range(-1.0..1.0))
}

fn random_conf(r: &mut ChaCha8Rng) -> ConfAlgebraElement {
    let mut u = || r.gen_range(-1.0..1.0);
    ConfAlgebraElement {
        eps: u(),
        s: (0..6).fold(Matrix4::zeros(), |acc, k| acc + so13_basis(k) * u()),
        tau: Vector4::new(u(), u(), u(), u()),
        rho: RowVector4::new(u(), u(), u(), u()),
    }
}

/// Covering `SL(2,ℂ) → SO(1,3)`: homomorphism, equivariance of `x ↦ x̄`,
/// and `‖x‖² = 4 det x̄`.
pub fn spin_covering(seed: u64) -> Result<f64> {
    let mut r = rng(seed, 1);
    let mut worst = 0.0f64;
    for _ in 0..RANDOM_SAMPLES {
        let (s1, s2) = (random_sl2(&mut r), random_sl2(&mut r));
        let (l1, l2) = (lorentz_of_sl2(&s1)?, lorentz_of_sl2(&s2)?);
        worst = worst.max((lorentz_of_sl2(&(s1 * s2))? - l1 * l2).amax());
        let xv = Vector4::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let moved = s1 * vec_to_herm(&xv) * s1.adjoint();
        worst = worst.max((moved - vec_to_herm(&(l1 * xv))).camax());
        worst = worst.max((minkowski_norm2(&xv) - 4.0 * vec_to_herm(&xv).determinant().re).abs());
    }
    Ok(worst)
}

/// `so(2,4) → su(2,2)` preserves brackets and lands in su(2,2).
pub fn spin_algebra_morphism(seed: u64) -> Result<f64> {
    let mut r = rng(seed, 2);
    let mut worst = 0.0f64;
    for _ in 0..RANDOM_SAMPLES {
        let (a, b) = (random_conf(&mut r), random_conf(&mut r));
        let (am, bm) = (a.matrix(), b.matrix());
        let br = ConfAlgebraElement::from_matrix(&(am * bm - bm * am))?;
        let (sa, sb) = (algebra_morphism(&a)?.matrix(), algebra_morphism(&b)?.matrix());
        let lhs = algebra_morphism(&br)?.matrix();
        worst = worst.max((lhs - (sa * sb - sb * sa)).camax()).max(su22_residual(&sa));
    }
    Ok(worst)
}

// cartan

/// Structure equations: block reassembly and su(2,2) membership of `ϖ̄`, `Ω̄`.
pub fn structure(d: &PointData) -> Result<f64> {
    let curv = SpinCurvature::from_matrix(&curvature_matrix(&d.generic)?);
    Ok(curv
        .assemble()
        .value_distance(&curv.matrix)
        .max(su22_form_residual(&d.generic))
        .max(su22_form_residual(&curv.matrix)))
}

pub fn bianchi_residual(d: &PointData) -> Result<f64> {
    let omega = curvature_matrix(&d.generic)?;
    Ok(bianchi(&d.generic, &omega)?.max_abs_value())
}

pub fn gt0(d: &PointData) -> Result<f64> {
    let conn = &d.normal.conn;
    let generic = gauge_transform(&conn.matrix(), &d.gauge.k0()?)?;
    Ok(generic.value_distance(&gt0_closed(conn, &d.gauge.z, &d.gauge.s_bar)?.matrix()))
}

pub fn gt1(d: &PointData) -> Result<f64> {
    let conn = &d.normal.conn;
    let generic = gauge_transform(&conn.matrix(), &d.gauge.k1())?;
    Ok(generic.value_distance(&gt1_closed(conn, &d.gauge.r_bar)?.matrix()))
}

/// `(ϖ̄^γ)^γ′ = ϖ̄^{γγ′}`.
pub fn right_action(d: &PointData, p: &Point, k: usize) -> Result<f64> {
    let varpi = d.normal.conn.matrix();
    let a = d.gauge.matrix()?;
    let b = other_boost().at(p, k)?.k1();
    let twice = gauge_transform(&gauge_transform(&varpi, &a)?, &b)?;
    Ok(twice.value_distance(&gauge_transform(&varpi, &(&a * &b))?))
}

/// Torsion, trace part and Ricci trace of the normal connection's curvature.
pub fn normality(d: &PointData) -> Result<f64> {
    let curv = curvature(&d.normal.conn)?;
    let w = weyl_vector(&curv.w_bar);
    Ok(curv
        .torsion
        .max_abs_value()
        .max(curv.f.max_abs_value())
        .max(ricci_trace_residual(&d.frame, &w)))
}

pub fn schouten_oracle(scene: &Scene, d: &PointData, p: &Point) -> Result<f64> {
    let oracle = metric_curvature(&scene.vierbein, p, STEP)?;
    let mut worst = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            worst = worst.max((d.normal.schouten[a][b].value().re - oracle.schouten_frame[(a, b)]).abs());
        }
    }
    Ok(worst)
}

pub fn weyl_oracle(scene: &Scene, d: &PointData, p: &Point) -> Result<f64> {
    let oracle = metric_curvature(&scene.vierbein, p, STEP)?;
    let (_, w_bar) = cotton_and_weyl(&d.normal.conn)?;
    let wc = frame_components(&d.frame, &weyl_vector(&w_bar));
    let mut worst = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for dd in 0..4 {
                    if cc != dd {
                        let ours = ETA[a] * wc[a][b].comp(&[cc, dd]).value().re;
                        worst = worst.max((ours - oracle.weyl_frame[a][b][cc][dd]).abs());
                    }
                }
            }
        }
    }
    Ok(worst)
}

// dressing

pub fn a_block(dd: &DressedData) -> f64 {
    dd.conn.a.max_abs_value().max(dd.conn.a_bar.trace().max_abs_value())
}

/// Composite fields are unchanged when the generic connection is moved by
/// an extra boost field.
pub fn boost_invariance(d: &PointData, dd: &DressedData, p: &Point, k: usize) -> Result<f64> {
    let g = other_boost().at(p, k)?.k1();
    let omega = curvature_matrix(&d.generic)?;
    let varpi_g = gauge_transform(&d.generic, &g)?;
    let ug = extract_dressing(&SpinCartanConn::from_matrix(&varpi_g))?;
    let w1g = dress_connection(&varpi_g, &ug)?;
    let o1g = dress_curvature(&conjugate(&omega, &g)?, &ug)?;
    let p1g = dress_section(&act_on_section(&test_section(p, k), &g)?, &ug)?;
    let dp1 = covariant_derivative(&dd.varpi, &dd.psi)?;
    let dp1g = covariant_derivative(&w1g, &p1g)?;
    Ok(w1g
        .value_distance(&dd.varpi)
        .max(o1g.value_distance(&dd.omega))
        .max(p1g.value_distance(&dd.psi))
        .max(dp1g.value_distance(&dp1)))
}

/// Closed-form residual Lorentz action against conjugation by `diag(S̄⁻¹∗, S̄)`.
pub fn residual_lorentz_laws(d: &PointData, dd: &DressedData) -> Result<f64> {
    let s = &d.gauge.s_bar;
    let l = lorentz_matrix(s)?;
    let conj = gauge_transform(&dd.varpi, &l)?;
    let conn = residual_lorentz(&dd.conn, s)?.matrix().value_distance(&conj);
    let curv = residual_lorentz_tensor(&dd.omega, s)?.value_distance(&conjugate(&dd.omega, &l)?);
    let sect = residual_lorentz_section(&dd.psi, s)?.value_distance(&act_on_section(&dd.psi, &l)?);
    Ok(conn.max(curv).max(sect))
}

fn cocycle_of(d: &PointData, dd: &DressedData) -> Result<WeylCocycle> {
    WeylCocycle::new(&d.gauge.z, &dd.frame)
}

/// Closed-form residual Weyl action on the connection.
pub fn residual_weyl_connection(d: &PointData, dd: &DressedData) -> Result<f64> {
    let c = cocycle_of(d, dd)?;
    let conj = gauge_transform(&dd.varpi, &c.matrix()?)?;
    Ok(residual_weyl(&dd.conn, &c)?.matrix().value_distance(&conj))
}

pub fn residual_weyl_curv(d: &PointData, dd: &DressedData) -> Result<f64> {
    let c = cocycle_of(d, dd)?;
    let conj = conjugate(&dd.omega, &c.matrix()?)?;
    Ok(residual_weyl_curvature(&dd.omega, &c)?.value_distance(&conj))
}

/// Weyl action on dressed sections and on their covariant derivative.
pub fn residual_weyl_sect(d: &PointData, dd: &DressedData) -> Result<f64> {
    let c = cocycle_of(d, dd)?;
    let cm = c.matrix()?;
    let psi_z = residual_weyl_section(&dd.psi, &c)?;
    let by_conj = gauge_transform(&dd.varpi, &cm)?;
    let lhs = covariant_derivative(&by_conj, &psi_z)?;
    let rhs = act_on_section(&covariant_derivative(&dd.varpi, &dd.psi)?, &cm)?;
    Ok(psi_z.value_distance(&act_on_section(&dd.psi, &cm)?).max(lhs.value_distance(&rhs)))
}

/// Cocycle identity of `C(z)` for the scene `z` against `exp(0.05x²)`.
pub fn cocycle(d: &PointData, p: &Point, k: usize) -> Result<f64> {
    let zp = x(2).scale(0.05).map(|j| Ok(j.exp())).jet(p, k)?;
    let r = cocycle_check(&d.gauge.z, &zp, &d.frame)?;
    Ok(r.cocycle.max(r.covariance))
}

// twistor

pub fn friedrich(scene: &Scene, p: &Point, k: usize) -> Result<f64> {
    twistor::friedrich_residual(&scene.vierbein, p, &test_section(p, k))
}

pub fn twistor_flatness(d: &PointData) -> Result<f64> {
    Ok(twistor::twistor_curvature(&d.normal.conn)?.matrix.max_abs_value())
}

pub fn curvature_action(dd: &DressedData, p: &Point, k: usize) -> Result<f64> {
    twistor::curvature_action_residual(&dd.varpi, &second_section(p, k))
}

/// `⟨·,·⟩` is unchanged by the residual Weyl and Lorentz actions.
pub fn bilinear_invariance(d: &PointData, dd: &DressedData, p: &Point, k: usize) -> Result<f64> {
    let c = cocycle_of(d, dd)?;
    let s = &d.gauge.s_bar;
    let (a, b) = (dd.psi.clone(), second_section(p, k));
    let before = twistor::bilinear(&a, &b);
    let wz = |m: &MatrixForm| residual_weyl_section(m, &c);
    let ls = |m: &MatrixForm| residual_lorentz_section(m, s);
    let weyl = twistor::bilinear(&wz(&a)?, &wz(&b)?).distance(&before);
    let lorentz = twistor::bilinear(&ls(&a)?, &ls(&b)?).distance(&before);
    Ok(weyl.max(lorentz))
}

pub fn metric_compatibility(dd: &DressedData, p: &Point, k: usize) -> Result<f64> {
    let pairs = vec![(dd.psi.clone(), second_section(p, k)), (test_section(p, k), second_section(p, k))];
    twistor::metric_compatibility(&dd.varpi, &pairs)
}

pub fn helicity_reality(dd: &DressedData, p: &Point, k: usize) -> f64 {
    twistor::helicity(&dd.psi).1.abs().max(twistor::helicity(&second_section(p, k)).1.abs())
}

// brst

fn ghost_jets(scene: &Scene, p: &Point, k: usize) -> Result<GhostJets> {
    ghost_field(scene).at(p, k)
}

/// `s² = 0` on every field, with the Russian formula and curvature consistency.
pub fn nilpotency(scene: &Scene, d: &PointData, p: &Point, k: usize) -> Result<f64> {
    let g = ghost_jets(scene, p, k)?;
    let env = BrstEnv::new(&d.generic, &test_section(p, k), g.v())?;
    Ok(brst::nilpotency_residual(&env)?
        .max(brst::curvature_consistency(&env)?)
        .max(brst::russian_formula_residual(&env)?))
}

/// Dressed ghost: conjugation route against `c(ε) + v̄_s`, and the `ρ̄` part.
pub fn dressed_ghost(scene: &Scene, dd: &DressedData, p: &Point, k: usize) -> Result<f64> {
    let g = ghost_jets(scene, p, k)?;
    let conj = brst::dressed_ghost(&g, &dd.u, &dd.frame)?;
    let closed = brst::dressed_ghost_closed(&g, &dd.frame)?;
    Ok(conj.distance(&closed).max(brst::rho_residual(&conj)))
}

/// BRST of the dressed fields: generic rules against closed forms.
pub fn dressed_closed_forms(scene: &Scene, dd: &DressedData, p: &Point, k: usize) -> Result<f64> {
    let g = ghost_jets(scene, p, k)?;
    let v1 = brst::dressed_ghost_closed(&g, &dd.frame)?;
    let env = BrstEnv::new(&dd.varpi, &dd.psi, v1)?;
    let eval = |f: Field| BrstExpr::leaf(f).s().eval(&env);
    let curv = SpinCurvature::from_matrix(&env.curv.coefficient(0));
    let pairs = [
        (eval(Field::Conn)?, brst::dressed_brst_connection(&dd.conn, &g, &dd.frame)?),
        (eval(Field::Curv)?, brst::dressed_brst_curvature(&curv, &g, &dd.frame)?),
        (eval(Field::Section)?, brst::dressed_brst_section(&dd.psi, &g, &dd.frame)?),
        (eval(Field::Ghost)?, brst::dressed_brst_ghost(&g, &dd.frame)?),
    ];
    Ok(pairs.iter().map(|(a, b)| a.distance(b)).fold(brst::nilpotency_residual(&env)?, f64::max))
}

/// Finite gauge action at parameter `t` against `s`, generic and dressed.
pub fn linearization(scene: &Scene, d: &PointData, dd: &DressedData, p: &Point, k: usize) -> Result<f64> {
    let g = ghost_jets(scene, p, k)?;
    let t = 1e-4;
    let generic = brst::linearization_residual(&d.generic, &test_section(p, k), &g, t)?;
    let dressed = brst::dressed_linearization_residual(&dd.conn, &dd.psi, &g, &dd.frame, t)?;
    Ok(generic.max(dressed))
}

// ym

pub fn spin_routes(d: &PointData) -> Result<f64> {
    let [su22, sl2c, _] = yang_mills::lagrangian_routes(&d.frame)?.values();
    Ok(relative_difference(su22, sl2c))
}

/// Route through the vector Weyl tensor and the so(1,3) Killing form against
/// the spin routes; equal exactly when the two Killing forms coincide.
pub fn killing_route(d: &PointData) -> Result<f64> {
    let [su22, sl2c, vector] = yang_mills::lagrangian_routes(&d.frame)?.values();
    Ok(relative_difference(vector, sl2c).max(relative_difference(vector, su22)))
}

pub fn reality(d: &PointData) -> Result<f64> {
    Ok(yang_mills::lagrangian_routes(&d.frame)?.imaginary_residual())
}

/// Density of the vierbein against that of `z·e`.
pub fn conformal_invariance(scene: &Scene, d: &PointData, p: &Point, k: usize) -> Result<f64> {
    let z = gauge_field(scene).z.expect("z set");
    let hat = scene.vierbein.rescaled(&z).at(p, k)?;
    let a = yang_mills::lagrangian_routes(&d.frame)?.values();
    let b = yang_mills::lagrangian_routes(&hat)?.values();
    Ok((0..3).map(|i| relative_difference(a[i], b[i])).fold(0.0, f64::max))
}

/// Density of the normal connection against that of its `K̄₁` transform.
pub fn boost_invariance_density(d: &PointData) -> Result<f64> {
    let conn = &d.normal.conn;
    let moved = SpinCartanConn::from_matrix(&gauge_transform(&conn.matrix(), &d.gauge.k1())?);
    let a = yang_mills::ym_lagrangian(conn, &d.frame)?.value();
    let b = yang_mills::ym_lagrangian(&moved, &d.frame)?.value();
    Ok(relative_difference(a, b))
}

/// Ad-invariance, symmetry and reality of the su(2,2) Killing form.
pub fn killing_ad_invariance(seed: u64) -> Result<f64> {
    let mut r = rng(seed, 3);
    let mut worst = 0.0f64;
    for _ in 0..RANDOM_SAMPLES {
        let [a, b, cc] = [(); 3].map(|_| to_dyn(&algebra_morphism(&random_conf(&mut r)).expect("valid").matrix()));
        let br = |u: &nalgebra::DMatrix<C64>, v: &nalgebra::DMatrix<C64>| u * v - v * u;
        let kf = |u: &nalgebra::DMatrix<C64>, v: &nalgebra::DMatrix<C64>| yang_mills::killing(Algebra::Su22, u, v);
        worst = worst
            .max((kf(&br(&cc, &a), &b)? + kf(&a, &br(&cc, &b))?).norm())
            .max((kf(&a, &b)? - kf(&b, &a)?).norm())
            .max(kf(&a, &b)?.im.abs());
    }
    Ok(worst)
}

/// Killing forms of so(1,3) and sl(2,ℂ) on corresponding random elements.
pub fn killing_coincidence(seed: u64) -> Result<f64> {
    let mut r = rng(seed, 4);
    let mut worst = 0.0f64;
    for _ in 0..RANDOM_SAMPLES {
        let (a, b) = (random_so13(&mut r), random_so13(&mut r));
        let real = |m: &Matrix4<f64>| nalgebra::DMatrix::from_iterator(4, 4, m.iter().map(|&v| C64::from(v)));
        let vector = yang_mills::killing(Algebra::So13, &real(&a), &real(&b))?;
        let spin = yang_mills::killing(Algebra::Sl2C, &to_dyn(&sl2_of_so13(&a)), &to_dyn(&sl2_of_so13(&b)))?;
        worst = worst.max((vector - spin).norm());
    }
    Ok(worst)
}

/// Decomposition of the density of the connection with `Ω̄ = F` built from the scene `f`.
pub fn lag_merk(scene: &Scene, d: &PointData, p: &Point, k: usize) -> Result<f64> {
    let f = faraday_form(scene, p, k)?;
    let m = yang_mills::merkulov_lagrangian(&d.frame, &f)?;
    Ok(m.residual() / m.lhs.value().abs().max(1e-12))
}

pub fn obstruction(scene: &Scene, d: &PointData, p: &Point, k: usize) -> Result<yang_mills::MerkulovObstruction> {
    yang_mills::merkulov_obstruction(&d.frame, &faraday_form(scene, p, k)?)
}
