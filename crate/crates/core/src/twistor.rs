//! Twistor covariant derivative, bilinear form and helicity, twistor
//! curvature, and the prolongation of the twistor equation computed from
//! the metric as an independent oracle.

use nalgebra::{Matrix4, SMatrix};

use crate::cartan::{cotton_and_weyl, curvature_matrix, normal_connection, SpinCartanConn};
use crate::dressing::{residual_weyl_section, WeylCocycle};
use crate::error::{Error, Result};
use crate::field::{Point, ScalarField};
use crate::form::Form;
use crate::frame::{Frame, Vierbein};
use crate::jet::{Jet, C64, I, ZERO};
use crate::matrix_form::MatrixForm;
use crate::metric_oracle::{metric_curvature, STEP};
use crate::spin_iso::{sigma, sigma_spin, sl2_of_so13, to_dyn, M2};

/// Tolerance on the a-block below which a connection counts as dressed.
pub const DRESSED_TOL: f64 = 1e-10;

/// Threshold on the Weyl block below which a scene counts as conformally flat.
pub const FLAT_TOL: f64 = 1e-8;

/// Values of `D̄ψ` by coordinate direction: row = component `(π₀, π₁, ω₀, ω₁)`, column = `μ`.
pub type Components = SMatrix<C64, 4, 4>;

pub fn ensure_dressed(conn: &SpinCartanConn) -> Result<()> {
    let a = conn.a.max_abs_value();
    if a > DRESSED_TOL {
        return Err(Error::NotDressed(a));
    }
    Ok(())
}

/// `D̄ψ = dψ + ϖ̄ψ` for a dressed connection.
pub fn twistor_deriv(psi: &MatrixForm, conn: &SpinCartanConn) -> Result<MatrixForm> {
    ensure_dressed(conn)?;
    Ok(&psi.d()? + &(&conn.matrix() * psi))
}

/// Per-direction values of a column of 1-forms.
pub fn components(dpsi: &MatrixForm) -> Components {
    Components::from_fn(|r, mu| dpsi.get(r, 0).comp(&[mu]).value())
}

/// `Σ̄ = [[0, 𝟙], [𝟙, 0]]` as a constant matrix form.
pub fn sigma_bar(order: usize) -> MatrixForm {
    MatrixForm::constant(&to_dyn(&sigma_spin()), order)
}

/// `⟨ψ, ψ′⟩ = ψ∗Σ̄ψ′ = π∗ω′ + ω∗π′`; columns of forms give a form.
pub fn bilinear(psi: &MatrixForm, psi2: &MatrixForm) -> Form {
    let sig = sigma_bar(psi.order().min(psi2.order()));
    (&(&psi.adjoint() * &sig) * psi2).get(0, 0).clone()
}

/// `s = ½⟨ψ, ψ⟩` at the expansion point, with the imaginary part of `⟨ψ, ψ⟩`.
pub fn helicity(psi: &MatrixForm) -> (f64, f64) {
    let v = bilinear(psi, psi).comps()[0].value();
    (0.5 * v.re, v.im)
}

/// Residuals of `D̄Σ̄ = ϖ̄∗Σ̄ + Σ̄ϖ̄` and of
/// `d⟨ψ, ψ′⟩ − ⟨D̄ψ, ψ′⟩ − ⟨ψ, D̄ψ′⟩` for each given pair.
pub fn metric_compatibility(varpi: &MatrixForm, pairs: &[(MatrixForm, MatrixForm)]) -> Result<f64> {
    let sig = sigma_bar(varpi.order());
    let mut worst = (&(&varpi.adjoint() * &sig) + &(&sig * varpi)).max_abs_value();
    for (psi, psi2) in pairs {
        let d1 = &psi.d()? + &(varpi * psi);
        let d2 = &psi2.d()? + &(varpi * psi2);
        let lhs = bilinear(psi, psi2).d()?;
        let rhs = &bilinear(&d1, psi2) + &bilinear(psi, &d2);
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}

/// `D̄²ψ − Ω̄ψ`.
pub fn curvature_action_residual(varpi: &MatrixForm, psi: &MatrixForm) -> Result<f64> {
    let dpsi = &psi.d()? + &(varpi * psi);
    let ddpsi = &dpsi.d()? + &(varpi * &dpsi);
    let omega = curvature_matrix(varpi)?;
    Ok(ddpsi.distance(&(&omega * psi)))
}

/// Blocks of `Ω̄_N,1 = [[−𝒲̄∗, −iC̄], [0, 𝒲̄]]`.
#[derive(Clone, Debug)]
pub struct TwistorCurvature {
    pub weyl: MatrixForm,
    pub cotton: MatrixForm,
    pub matrix: MatrixForm,
}

impl TwistorCurvature {
    pub fn is_conformally_flat(&self) -> bool {
        self.weyl.max_abs_value() < FLAT_TOL
    }
}

/// The local twistor curvature of a normal connection.
pub fn twistor_curvature(conn: &SpinCartanConn) -> Result<TwistorCurvature> {
    ensure_dressed(conn)?;
    let (cotton, weyl) = cotton_and_weyl(conn)?;
    Ok(TwistorCurvature {
        weyl,
        cotton,
        matrix: curvature_matrix(&conn.matrix())?,
    })
}

fn herm(v: impl Fn(usize) -> f64, half: bool) -> M2 {
    let s = if half { 0.5 } else { 1.0 };
    (0..4).fold(M2::zeros(), |acc, a| acc + sigma(a) * C64::from(s * v(a)))
}

/// Metric-side ingredients of the twistor equation at one point.
#[derive(Clone, Debug)]
pub struct ProlongationData {
    /// Spin connection `Ā_μ` from Christoffel symbols.
    pub spin: [M2; 4],
    /// `P̄_μ = Σ_b P_{bc}e^c_μ σ_b`.
    pub schouten: [M2; 4],
    /// `θ̄_μ = ½e^a_μ σ_a`.
    pub soldering: [M2; 4],
}

impl ProlongationData {
    pub fn new(v: &Vierbein, p: &Point) -> Result<Self> {
        let frame = v.at(p, 1)?;
        let mc = metric_curvature(v, p, STEP)?;
        let e = |a: usize, mu: usize| mc.e[(a, mu)];
        let spin = std::array::from_fn(|mu| {
            // ω^a_{bμ} = e^a_ν(∂_μ E^ν_b + Γ^ν_{μλ} E^λ_b)
            let mut dir = [0u8; 4];
            dir[mu] = 1;
            let w = Matrix4::from_fn(|a, b| {
                (0..4)
                    .map(|nu| {
                        let de = frame.e_inv_jet(nu, b).derivative(dir).re;
                        let ge: f64 = (0..4)
                            .map(|l| mc.christoffel[nu][mu][l] * frame.e_inv_jet(l, b).value().re)
                            .sum();
                        e(a, nu) * (de + ge)
                    })
                    .sum()
            });
            sl2_of_so13(&w)
        });
        let schouten = std::array::from_fn(|mu| {
            herm(|b| (0..4).map(|c| mc.schouten_frame[(b, c)] * e(c, mu)).sum(), false)
        });
        let soldering = std::array::from_fn(|mu| herm(|a| e(a, mu), true));
        Ok(ProlongationData { spin, schouten, soldering })
    }

    /// `∇_μω + iθ̄_μπ` and `∇_μπ − iP̄_μω` for a section given by jets.
    pub fn apply(&self, psi: &MatrixForm) -> Components {
        let val = |r: usize| psi.get(r, 0).comps()[0].clone();
        let pi = nalgebra::Vector2::new(val(0).value(), val(1).value());
        let om = nalgebra::Vector2::new(val(2).value(), val(3).value());
        let mut out = Components::from_element(ZERO);
        for mu in 0..4 {
            let mut dir = [0u8; 4];
            dir[mu] = 1;
            let dpi = nalgebra::Vector2::new(val(0).derivative(dir), val(1).derivative(dir));
            let dom = nalgebra::Vector2::new(val(2).derivative(dir), val(3).derivative(dir));
            let te_om = dom + self.spin[mu] * om + self.soldering[mu] * pi * I;
            let te_pi = dpi - self.spin[mu].adjoint() * pi - self.schouten[mu] * om * I;
            for r in 0..2 {
                out[(r, mu)] = te_pi[r];
                out[(r + 2, mu)] = te_om[r];
            }
        }
        out
    }
}

/// Max difference between the dressed normal derivative and the
/// prolongation oracle at `p`.
pub fn friedrich_residual(v: &Vierbein, p: &Point, psi: &MatrixForm) -> Result<f64> {
    let conn = normal_connection(&v.at(p, psi.order().max(3))?)?.conn;
    let ours = components(&twistor_deriv(psi, &conn)?);
    let oracle = ProlongationData::new(v, p)?.apply(psi);
    Ok((ours - oracle).iter().map(|c| c.norm()).fold(0.0, f64::max))
}

/// Residuals of the Weyl transformation laws under `e ↦ z·e`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylLawResiduals {
    /// Coordinate Schouten: `P̂ − (P + ∇Υ − ΥΥ + ½g|Υ|²)`, both sides from the metric.
    pub schouten: f64,
    /// Spin connection of `z·e` versus `Ā + (θ̄Ῡ)₀`.
    pub spin_connection: f64,
    /// Dressed section law with weights stripped versus `(ω, π + iῩω)`.
    pub twistor: f64,
}

pub fn weyl_transformation_laws(
    v: &Vierbein,
    z: &ScalarField,
    p: &Point,
    psi: &MatrixForm,
) -> Result<WeylLawResiduals> {
    let k = psi.order().max(3);
    let zj = z.jet(p, k)?;
    if zj.value().re <= 0.0 {
        return Err(Error::DomainAt { func: "z", point: *p });
    }
    let hat = v.rescaled(z);
    let (mc, mh) = (metric_curvature(v, p, STEP)?, metric_curvature(&hat, p, STEP)?);
    // Υ_μ = ∂_μ ln z and ∇_μΥ_ν = ∂_μ∂_ν ln z − Γ^ρ_{μν}Υ_ρ from jets of ln z.
    let lz = zj.ln()?;
    let d1 = |mu: usize| {
        let mut a = [0u8; 4];
        a[mu] += 1;
        lz.derivative(a).re
    };
    let d2 = |mu: usize, nu: usize| {
        let mut a = [0u8; 4];
        a[mu] += 1;
        a[nu] += 1;
        lz.derivative(a).re
    };
    let ginv = mc.g.try_inverse().ok_or(Error::DegenerateFrame)?;
    let ups2: f64 = (0..4).flat_map(|r| (0..4).map(move |s| (r, s))).map(|(r, s)| ginv[(r, s)] * d1(r) * d1(s)).sum();
    let law = Matrix4::from_fn(|mu, nu| {
        let nabla = d2(mu, nu) - (0..4).map(|r| mc.christoffel[r][mu][nu] * d1(r)).sum::<f64>();
        mc.schouten[(mu, nu)] + nabla - d1(mu) * d1(nu) + 0.5 * mc.g[(mu, nu)] * ups2
    });
    let schouten = (mh.schouten - law).amax();

    let frame: Frame = v.at(p, k)?;
    let conn = normal_connection(&frame)?.conn;
    let direct = normal_connection(&hat.at(p, k)?)?.conn;
    let c = WeylCocycle::new(&zj, &frame)?;
    let shifted = &conn.a_bar + &crate::cartan::traceless(&(&conn.theta_bar * &c.upsilon_bar));
    let spin_connection = shifted.value_distance(&direct.a_bar);

    let moved = residual_weyl_section(psi, &c)?;
    let zh = zj.powf(0.5)?;
    let stripped_pi = moved.block(0, 0, 2, 1).scale_jet(&zh);
    let stripped_om = moved.block(2, 0, 2, 1).scale_jet(&zh.recip()?);
    let om = psi.block(2, 0, 2, 1);
    let gt_pi = &psi.block(0, 0, 2, 1) + &(&c.upsilon_bar * &om).scale(I);
    let twistor = stripped_pi.distance(&gt_pi).max(stripped_om.distance(&om));
    Ok(WeylLawResiduals { schouten, spin_connection, twistor })
}

/// The flat-space global twistor `(π⁰, ω⁰ − ix̄π⁰)` with `x̄ = ½xᵃσₐ`.
pub fn flat_global_twistor(pi0: [C64; 2], om0: [C64; 2], p: &Point, order: usize) -> MatrixForm {
    let xs: Vec<Jet> = (0..4).map(|mu| Jet::variable(mu, p[mu], order)).collect();
    let xbar: Vec<Vec<Jet>> = (0..2)
        .map(|i| {
            (0..2)
                .map(|j| {
                    (0..4).fold(Jet::zero(order), |acc, a| acc + xs[a].scale(sigma(a)[(i, j)] * 0.5))
                })
                .collect()
        })
        .collect();
    let om: Vec<Jet> = (0..2)
        .map(|i| {
            let s = (0..2).fold(Jet::zero(order), |acc, j| acc + xbar[i][j].scale(pi0[j]));
            Jet::constant(om0[i], order) - s.scale(I)
        })
        .collect();
    MatrixForm::from_jets(
        4,
        1,
        vec![Jet::constant(pi0[0], order), Jet::constant(pi0[1], order), om[0].clone(), om[1].clone()],
    )
}
