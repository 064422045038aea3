//! The `K̄₁` dressing field, composite fields, and their residual Lorentz
//! and Weyl transformations, including the Weyl cocycle `C(z)`.

use crate::cartan::{conjugate, gauge_transform, traceless, SpinCartanConn};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::frame::Frame;
use crate::jet::{Jet, I};
use crate::matrix_form::MatrixForm;
use crate::spin_iso::{herm_of_covector_forms, vector_forms_of_herm};

/// `ū₁ = [[𝟙, −iq̄], [0, 𝟙]]` with `qₐ = a_μ e^μ_a`.
#[derive(Clone, Debug)]
pub struct DressingField {
    pub q: [Jet; 4],
    pub q_bar: MatrixForm,
    pub u: MatrixForm,
}

/// Upper-unipotent `[[𝟙, −ix̄], [0, 𝟙]]`.
pub fn boost_matrix(x_bar: &MatrixForm) -> MatrixForm {
    let k = x_bar.order();
    MatrixForm::from_blocks(
        &MatrixForm::identity(2, k),
        &x_bar.scale(-I),
        &MatrixForm::zero(2, 2, 0, k),
        &MatrixForm::identity(2, k),
    )
}

/// `diag(z^{1/2}𝟙, z^{−1/2}𝟙)`.
pub fn weyl_matrix(z: &Jet) -> Result<MatrixForm> {
    if z.value().re <= 0.0 {
        return Err(Error::Domain { func: "z", value: z.value().re });
    }
    let zero = MatrixForm::zero(2, 2, 0, z.order());
    let one = MatrixForm::identity(2, z.order());
    Ok(MatrixForm::from_blocks(
        &one.scale_jet(&z.powf(0.5)?),
        &zero,
        &zero,
        &one.scale_jet(&z.powf(-0.5)?),
    ))
}

/// `diag(S̄^{−1∗}, S̄)`, the Lorentz part of `K̄₀`.
pub fn lorentz_matrix(s_bar: &MatrixForm) -> Result<MatrixForm> {
    let zero = MatrixForm::zero(2, 2, 0, s_bar.order());
    Ok(MatrixForm::from_blocks(&s_bar.inverse()?.adjoint(), &zero, &zero, s_bar))
}

/// The coframe read off the soldering block `θ̄`.
pub fn frame_of(conn: &SpinCartanConn) -> Result<Frame> {
    let theta = vector_forms_of_herm(&conn.theta_bar);
    let jets = (0..4)
        .flat_map(|a| (0..4).map(move |mu| (a, mu)))
        .map(|(a, mu)| theta[a].comp(&[mu]))
        .collect();
    Frame::from_e(MatrixForm::from_jets(4, 4, jets))
}

/// Covector `qₐ` with `q_a θᵃ = f` for a 1-form `f`, and its image `q̄ = qₐσₐ`.
pub fn frame_covector(frame: &Frame, f: &Form) -> ([Jet; 4], MatrixForm) {
    let comps = frame.to_frame(f);
    let q: [Jet; 4] = std::array::from_fn(|a| comps.comp(&[a]));
    let forms: [Form; 4] = std::array::from_fn(|a| Form::scalar(q[a].clone()));
    (q, herm_of_covector_forms(&forms))
}

/// Solves `a − qθ = 0` for the dressing field.
pub fn extract_dressing(conn: &SpinCartanConn) -> Result<DressingField> {
    let frame = frame_of(conn)?;
    let (q, q_bar) = frame_covector(&frame, &conn.a);
    let u = boost_matrix(&q_bar);
    Ok(DressingField { q, q_bar, u })
}

/// Composite connection `ū₁⁻¹ϖ̄ū₁ + ū₁⁻¹dū₁`.
pub fn dress_connection(varpi: &MatrixForm, u: &DressingField) -> Result<MatrixForm> {
    gauge_transform(varpi, &u.u)
}

/// Composite tensorial field `ū₁⁻¹χū₁` (curvature).
pub fn dress_curvature(omega: &MatrixForm, u: &DressingField) -> Result<MatrixForm> {
    conjugate(omega, &u.u)
}

/// Composite section `ū₁⁻¹ψ`.
pub fn dress_section(psi: &MatrixForm, u: &DressingField) -> Result<MatrixForm> {
    Ok(&u.u.inverse()? * psi)
}

/// `Dψ = dψ + ϖ̄ψ`.
pub fn covariant_derivative(varpi: &MatrixForm, psi: &MatrixForm) -> Result<MatrixForm> {
    Ok(&psi.d()? + &(varpi * psi))
}

/// `f₁ = −Tr(θ̄P̄₁)`, the antisymmetric part of `P₁` wedged with `θ`.
pub fn f1_of_blocks(conn: &SpinCartanConn) -> Form {
    -(&conn.theta_bar * &conn.p_bar).trace()
}

/// Closed-form residual Lorentz transformation of a composite connection.
pub fn residual_lorentz(conn: &SpinCartanConn, s_bar: &MatrixForm) -> Result<SpinCartanConn> {
    check_unimodular(s_bar)?;
    let sinv = s_bar.inverse()?;
    Ok(SpinCartanConn {
        a: conn.a.clone(),
        a_bar: &(&(&sinv * &conn.a_bar) * s_bar) + &(&sinv * &s_bar.d()?),
        p_bar: &(&s_bar.adjoint() * &conn.p_bar) * s_bar,
        theta_bar: &(&sinv * &conn.theta_bar) * &sinv.adjoint(),
    })
}

/// Closed-form residual Lorentz action on a tensorial composite
/// `[[X, Y], [Z, W]]`: `[[S̄∗XS̄^{−1∗}, S̄∗YS̄], [S̄⁻¹ZS̄^{−1∗}, S̄⁻¹WS̄]]`.
pub fn residual_lorentz_tensor(m: &MatrixForm, s_bar: &MatrixForm) -> Result<MatrixForm> {
    check_unimodular(s_bar)?;
    let sinv = s_bar.inverse()?;
    let (s_adj, sinv_adj) = (s_bar.adjoint(), sinv.adjoint());
    let [x, y, z, w] = m.blocks();
    Ok(MatrixForm::from_blocks(
        &(&(&s_adj * &x) * &sinv_adj),
        &(&(&s_adj * &y) * s_bar),
        &(&(&sinv * &z) * &sinv_adj),
        &(&(&sinv * &w) * s_bar),
    ))
}

/// `(π, ω) ↦ (S̄∗π, S̄⁻¹ω)`.
pub fn residual_lorentz_section(psi: &MatrixForm, s_bar: &MatrixForm) -> Result<MatrixForm> {
    check_unimodular(s_bar)?;
    let n = psi.cols();
    Ok(stack(
        &(&s_bar.adjoint() * &psi.block(0, 0, 2, n)),
        &(&s_bar.inverse()? * &psi.block(2, 0, 2, n)),
    ))
}

fn check_unimodular(s_bar: &MatrixForm) -> Result<()> {
    let v = s_bar.value_matrix();
    let det = v.determinant();
    if (det - crate::jet::ONE).norm() > 1e-10 {
        return Err(Error::NotUnimodular(det.norm()));
    }
    Ok(())
}

fn stack(top: &MatrixForm, bottom: &MatrixForm) -> MatrixForm {
    let n = top.cols();
    let entries = top.entries().iter().chain(bottom.entries()).cloned().collect();
    MatrixForm::from_entries(top.rows() + bottom.rows(), n, entries).expect("same shape")
}

/// The Weyl cocycle `C(z) = k̄₁(z)Z` relative to a coframe.
#[derive(Clone, Debug)]
pub struct WeylCocycle {
    pub z: Jet,
    /// `Υₐ = z⁻¹∂_μz e^μ_a`.
    pub upsilon: [Jet; 4],
    pub upsilon_bar: MatrixForm,
}

impl WeylCocycle {
    pub fn new(z: &Jet, frame: &Frame) -> Result<Self> {
        if z.value().re <= 0.0 {
            return Err(Error::Domain { func: "z", value: z.value().re });
        }
        let dlog = Form::scalar(z.ln()?).d()?;
        let (upsilon, upsilon_bar) = frame_covector(frame, &dlog);
        Ok(WeylCocycle { z: z.clone(), upsilon, upsilon_bar })
    }

    /// `k̄₁(z) = [[𝟙, −iῩ], [0, 𝟙]]`.
    pub fn k1(&self) -> MatrixForm {
        boost_matrix(&self.upsilon_bar)
    }

    pub fn weyl(&self) -> Result<MatrixForm> {
        weyl_matrix(&self.z)
    }

    /// `C(z) = [[z^{1/2}𝟙, −iz^{−1/2}Ῡ], [0, z^{−1/2}𝟙]]`.
    pub fn matrix(&self) -> Result<MatrixForm> {
        Ok(&self.k1() * &self.weyl()?)
    }
}

/// Closed-form residual Weyl transformation of a composite connection.
pub fn residual_weyl(conn: &SpinCartanConn, c: &WeylCocycle) -> Result<SpinCartanConn> {
    let ups = &c.upsilon_bar;
    let th = &conn.theta_bar;
    let zinv = c.z.recip()?;
    let p = &conn.p_bar + &ups.d()?;
    let p = &p - &(&(ups * &conn.a_bar) + &(&conn.a_bar.adjoint() * ups));
    let p = &p - &(&(ups * th) * ups);
    Ok(SpinCartanConn {
        a: conn.a.clone(),
        a_bar: &conn.a_bar + &traceless(&(th * ups)),
        p_bar: p.scale_jet(&zinv),
        theta_bar: th.scale_jet(&c.z),
    })
}

/// Closed-form residual Weyl action on a composite curvature
/// `[[−(W̄∗ − f/2), −iC̄], [iΘ̄, W̄ − f/2]]`.
pub fn residual_weyl_curvature(omega: &MatrixForm, c: &WeylCocycle) -> Result<MatrixForm> {
    let ups = &c.upsilon_bar;
    let [x, y, zb, l] = omega.blocks();
    let theta = zb.scale(-I);
    let zinv = c.z.recip()?;
    let ul = &x - &(ups * &theta);
    let lr = &l + &(&theta * ups);
    // Y − iXῩ + iῩL + iῩΘ̄Ῡ
    let ur = &(&y - &(&x * ups).scale(I)) + &(&(ups * &l) + &(&(ups * &theta) * ups)).scale(I);
    Ok(MatrixForm::from_blocks(&ul, &ur.scale_jet(&zinv), &zb.scale_jet(&c.z), &lr))
}

/// `(π, ω) ↦ (z^{−1/2}(π + iῩω), z^{1/2}ω)`.
pub fn residual_weyl_section(psi: &MatrixForm, c: &WeylCocycle) -> Result<MatrixForm> {
    let n = psi.cols();
    let (pi, om) = (psi.block(0, 0, 2, n), psi.block(2, 0, 2, n));
    let pi = &pi + &(&c.upsilon_bar * &om).scale(I);
    Ok(stack(&pi.scale_jet(&c.z.powf(-0.5)?), &om.scale_jet(&c.z.powf(0.5)?)))
}

/// Residuals of the cocycle relations for `z`, `z′` on a coframe.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CocycleResiduals {
    /// `C(zz′) − C(z′)Z′⁻¹C(z)Z′`.
    pub cocycle: f64,
    /// `C(z)^{Z′} − Z′⁻¹C(z)Z′`, with `C(z)^{Z′}` built on the coframe `z′θ`.
    pub covariance: f64,
    /// `C(z)C(z′) − C(zz′)`; nonzero in general.
    pub group_law_violation: f64,
}

pub fn cocycle_check(z: &Jet, zp: &Jet, frame: &Frame) -> Result<CocycleResiduals> {
    let c = WeylCocycle::new(z, frame)?;
    let cp = WeylCocycle::new(zp, frame)?;
    let czz = WeylCocycle::new(&(z * zp), frame)?.matrix()?;
    let (cm, cpm) = (c.matrix()?, cp.matrix()?);
    let zpm = weyl_matrix(zp)?;
    let zpinv = zpm.inverse()?;
    let rhs = &(&cpm * &zpinv) * &(&cm * &zpm);
    let rescaled = Frame::from_e(frame.e.scale_jet(zp))?;
    let c_in_rescaled = WeylCocycle::new(z, &rescaled)?.matrix()?;
    Ok(CocycleResiduals {
        cocycle: czz.distance(&rhs),
        covariance: c_in_rescaled.distance(&(&(&zpinv * &cm) * &zpm)),
        group_law_violation: (&cm * &cpm).distance(&czz),
    })
}
