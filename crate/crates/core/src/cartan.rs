//! The spin conformal Cartan connection, its curvature, gauge
//! transformations, and the normal connection of a vierbein.

use crate::error::{Error, Result};
use crate::field::{Point, ScalarField};
use crate::form::Form;
use crate::frame::Frame;
use crate::jet::{Jet, I, ONE};
use crate::matrix_form::MatrixForm;
use crate::spin_iso::{herm_of_covector_forms, sigma_spin, sl2_basis, sl2_forms_of_so13, so13_forms_of_sl2, to_dyn, ETA};

/// `f·𝟙ₙ` for a scalar form `f`.
pub fn scalar_identity(f: &Form, n: usize) -> MatrixForm {
    let zero = Form::zero(f.degree(), f.order());
    let entries = (0..n * n)
        .map(|k| if k % (n + 1) == 0 { f.clone() } else { zero.clone() })
        .collect();
    MatrixForm::from_entries(n, n, entries).expect("square")
}

/// Trace-free part `M − ½tr(M)𝟙` of a 2×2 matrix form.
pub fn traceless(m: &MatrixForm) -> MatrixForm {
    m - &scalar_identity(&m.trace().scale(0.5), 2)
}

/// Real part of a scalar form (coordinates are real).
pub fn real_part(f: &Form) -> Form {
    f.map(Jet::re)
}

/// `[[−(Ā∗ − a/2), −iP̄], [iθ̄, Ā − a/2]]` block data.
#[derive(Clone, Debug)]
pub struct SpinCartanConn {
    pub a: Form,
    pub a_bar: MatrixForm,
    pub p_bar: MatrixForm,
    pub theta_bar: MatrixForm,
}

impl SpinCartanConn {
    /// The flat model: soldering form only.
    pub fn flat(frame: &Frame) -> Self {
        let k = frame.order();
        SpinCartanConn {
            a: Form::zero(1, k),
            a_bar: MatrixForm::zero(2, 2, 1, k),
            p_bar: MatrixForm::zero(2, 2, 1, k),
            theta_bar: frame.theta_bar.clone(),
        }
    }

    pub fn matrix(&self) -> MatrixForm {
        let half_a = scalar_identity(&self.a.scale(0.5), 2);
        let lr = &self.a_bar - &half_a;
        let ul = -(&self.a_bar.adjoint() - &half_a);
        MatrixForm::from_blocks(&ul, &self.p_bar.scale(-I), &self.theta_bar.scale(I), &lr)
    }

    /// Reads blocks back with the convention `a = −Re tr(lower-right)`, which
    /// makes `Ā` trace-free whenever the input is su(2,2)-valued.
    pub fn from_matrix(m: &MatrixForm) -> Self {
        let [_, ur, ll, lr] = m.blocks();
        let a = -real_part(&lr.trace());
        let a_bar = &lr + &scalar_identity(&a.scale(0.5), 2);
        SpinCartanConn {
            a,
            a_bar,
            p_bar: ur.scale(I),
            theta_bar: ll.scale(-I),
        }
    }

    pub fn order(&self) -> usize {
        self.a
            .order()
            .min(self.a_bar.order())
            .min(self.p_bar.order())
            .min(self.theta_bar.order())
    }
}

/// Blocks of `Ω̄ = [[−(W̄∗ − f/2), −iC̄], [iΘ̄, W̄ − f/2]]`.
#[derive(Clone, Debug)]
pub struct SpinCurvature {
    pub f: Form,
    pub w_bar: MatrixForm,
    pub c_bar: MatrixForm,
    pub torsion: MatrixForm,
    pub matrix: MatrixForm,
}

impl SpinCurvature {
    pub fn from_matrix(m: &MatrixForm) -> Self {
        let [_, ur, ll, lr] = m.blocks();
        let f = -real_part(&lr.trace());
        let w_bar = &lr + &scalar_identity(&f.scale(0.5), 2);
        SpinCurvature {
            f,
            w_bar,
            c_bar: ur.scale(I),
            torsion: ll.scale(-I),
            matrix: m.clone(),
        }
    }

    /// Reassembles the 4×4 matrix from the blocks.
    pub fn assemble(&self) -> MatrixForm {
        let half_f = scalar_identity(&self.f.scale(0.5), 2);
        MatrixForm::from_blocks(
            &-(&self.w_bar.adjoint() - &half_f),
            &self.c_bar.scale(-I),
            &self.torsion.scale(I),
            &(&self.w_bar - &half_f),
        )
    }
}

/// `dϖ̄ + ϖ̄²`.
pub fn curvature_matrix(varpi: &MatrixForm) -> Result<MatrixForm> {
    Ok(&varpi.d()? + &(varpi * varpi))
}

pub fn curvature(conn: &SpinCartanConn) -> Result<SpinCurvature> {
    Ok(SpinCurvature::from_matrix(&curvature_matrix(&conn.matrix())?))
}

/// `dΩ̄ + [ϖ̄, Ω̄]`.
pub fn bianchi(varpi: &MatrixForm, omega: &MatrixForm) -> Result<MatrixForm> {
    Ok(&omega.d()? + &varpi.commutator(omega))
}

/// `‖M∗Σ̄ + Σ̄M‖` at the expansion point, together with `|Im tr M|`.
pub fn su22_form_residual(m: &MatrixForm) -> f64 {
    let s = MatrixForm::constant(&to_dyn(&sigma_spin()), m.order());
    let r = &(&m.adjoint() * &s) + &(&s * m);
    let tr = m.trace().map(Jet::im).max_abs_value();
    r.max_abs_value().max(tr)
}

/// Jets of a structure-group element `γ̄ = K̄₀K̄₁` at one point.
#[derive(Clone, Debug)]
pub struct GaugeJets {
    pub z: Jet,
    pub s_bar: MatrixForm,
    pub r_bar: MatrixForm,
}

impl GaugeJets {
    pub fn identity(order: usize) -> Self {
        GaugeJets {
            z: Jet::constant(ONE, order),
            s_bar: MatrixForm::identity(2, order),
            r_bar: MatrixForm::zero(2, 2, 0, order),
        }
    }

    /// `diag(z^{1/2} S̄^{−1∗}, z^{−1/2} S̄)`.
    pub fn k0(&self) -> Result<MatrixForm> {
        let zh = self.z.powf(0.5)?;
        let zmh = self.z.powf(-0.5)?;
        let sinv_adj = self.s_bar.inverse()?.adjoint();
        let zero = MatrixForm::zero(2, 2, 0, self.z.order());
        Ok(MatrixForm::from_blocks(
            &sinv_adj.scale_jet(&zh),
            &zero,
            &zero,
            &self.s_bar.scale_jet(&zmh),
        ))
    }

    /// `[[𝟙, −ir̄], [0, 𝟙]]`.
    pub fn k1(&self) -> MatrixForm {
        let k = self.r_bar.order();
        MatrixForm::from_blocks(
            &MatrixForm::identity(2, k),
            &self.r_bar.scale(-I),
            &MatrixForm::zero(2, 2, 0, k),
            &MatrixForm::identity(2, k),
        )
    }

    pub fn matrix(&self) -> Result<MatrixForm> {
        Ok(&self.k0()? * &self.k1())
    }
}

/// Field-level gauge parameters; absent entries are the identity.
#[derive(Clone, Debug, Default)]
pub struct GaugeField {
    pub z: Option<ScalarField>,
    pub s_bar: Option<[[ScalarField; 2]; 2]>,
    /// Coefficients of `log S̄` in `sl2_basis`; multiplies `s_bar` on the right.
    pub s_log: Option<[ScalarField; 6]>,
    /// Covector `rₐ`, mapped to `r̄ = rₐσₐ`.
    pub r: Option<[ScalarField; 4]>,
}

impl GaugeField {
    pub fn at(&self, p: &Point, order: usize) -> Result<GaugeJets> {
        let mut g = GaugeJets::identity(order);
        if let Some(z) = &self.z {
            g.z = z.jet(p, order)?;
            if g.z.value().re <= 0.0 {
                return Err(Error::DomainAt { func: "z", point: *p });
            }
        }
        if let Some(s) = &self.s_bar {
            let jets = s
                .iter()
                .flatten()
                .map(|f| f.jet(p, order))
                .collect::<Result<Vec<_>>>()?;
            g.s_bar = MatrixForm::from_jets(2, 2, jets);
        }
        if let Some(c) = &self.s_log {
            let mut log = MatrixForm::zero(2, 2, 0, order);
            for (k, f) in c.iter().enumerate() {
                let b = MatrixForm::constant(&to_dyn(&sl2_basis(k)), order);
                log = &log + &b.scale_jet(&f.jet(p, order)?);
            }
            g.s_bar = &g.s_bar * &log.exp()?;
        }
        if let Some(r) = &self.r {
            let jets = r.iter().map(|f| f.jet(p, order)).collect::<Result<Vec<_>>>()?;
            let forms: [Form; 4] = std::array::from_fn(|a| Form::scalar(jets[a].clone()));
            g.r_bar = herm_of_covector_forms(&forms);
        }
        Ok(g)
    }
}

/// `γ̄⁻¹ϖ̄γ̄ + γ̄⁻¹dγ̄`.
pub fn gauge_transform(varpi: &MatrixForm, gamma: &MatrixForm) -> Result<MatrixForm> {
    let inv = gamma.inverse()?;
    Ok(&(&(&inv * varpi) * gamma) + &(&inv * &gamma.d()?))
}

/// `γ̄⁻¹Ω̄γ̄` (also for `D̄ψ` and other tensorial matrices).
pub fn conjugate(m: &MatrixForm, gamma: &MatrixForm) -> Result<MatrixForm> {
    Ok(&(&gamma.inverse()? * m) * gamma)
}

/// `γ̄⁻¹ψ`.
pub fn act_on_section(psi: &MatrixForm, gamma: &MatrixForm) -> Result<MatrixForm> {
    Ok(&gamma.inverse()? * psi)
}

/// Closed-form `K̄₀` transformation of the connection blocks.
pub fn gt0_closed(conn: &SpinCartanConn, z: &Jet, s_bar: &MatrixForm) -> Result<SpinCartanConn> {
    let sinv = s_bar.inverse()?;
    let zinv = z.recip()?;
    let dz = Form::scalar(z.clone()).d()?;
    Ok(SpinCartanConn {
        a: &conn.a + &dz.scale_jet(&zinv),
        a_bar: &(&(&sinv * &conn.a_bar) * s_bar) + &(&sinv * &s_bar.d()?),
        p_bar: (&(&s_bar.adjoint() * &conn.p_bar) * s_bar).scale_jet(&zinv),
        theta_bar: (&(&sinv * &conn.theta_bar) * &sinv.adjoint()).scale_jet(z),
    })
}

/// Closed-form `K̄₁` transformation of the connection blocks.
pub fn gt1_closed(conn: &SpinCartanConn, r_bar: &MatrixForm) -> Result<SpinCartanConn> {
    let th = &conn.theta_bar;
    let th_r = th * r_bar;
    let r_theta = th_r.trace();
    let p = &conn.p_bar + &r_bar.d()?;
    let p = &p - &(&(r_bar * &conn.a_bar) + &(&conn.a_bar.adjoint() * r_bar));
    let p = &p + &r_bar.lmul_form(&conn.a);
    let p = &p - &(&(r_bar * th) * r_bar);
    Ok(SpinCartanConn {
        a: &conn.a - &r_theta,
        a_bar: &conn.a_bar + &traceless(&th_r),
        p_bar: p,
        theta_bar: th.clone(),
    })
}

/// The normal connection in the `a = 0` gauge together with its
/// vector-representation ingredients.
#[derive(Clone, Debug)]
pub struct NormalConnection {
    pub conn: SpinCartanConn,
    /// Levi-Civita connection `ωᵃ_b` (so(1,3)-valued 1-form).
    pub lorentz: MatrixForm,
    /// Riemann 2-form `dω + ω²`.
    pub riemann: MatrixForm,
    /// Frame components `P_ab`.
    pub schouten: [[Jet; 4]; 4],
}

/// Builds the normal spin Cartan connection of a frame: torsion-free
/// Levi-Civita `Ā`, Schouten `P̄`, `a = 0`.
pub fn normal_connection(frame: &Frame) -> Result<NormalConnection> {
    let lorentz = levi_civita(frame)?;
    let riemann = &lorentz.d()? + &(&lorentz * &lorentz);
    let schouten = schouten_from_riemann(frame, &riemann);
    let p_forms: [Form; 4] = std::array::from_fn(|b| {
        (0..4).fold(Form::zero(1, schouten[0][0].order()), |acc, c| {
            &acc + &frame.theta[c].scale_jet(&schouten[b][c])
        })
    });
    let conn = SpinCartanConn {
        a: Form::zero(1, frame.order()),
        a_bar: sl2_forms_of_so13(&lorentz),
        p_bar: herm_of_covector_forms(&p_forms),
        theta_bar: frame.theta_bar.clone(),
    };
    Ok(NormalConnection {
        conn,
        lorentz,
        riemann,
        schouten,
    })
}

/// Levi-Civita connection `ωᵃ_b = ωᵃ_{bc}θᶜ` solving `dθ + ω∧θ = 0`.
pub fn levi_civita(frame: &Frame) -> Result<MatrixForm> {
    // F_{acd}: frame components of dθ^a with the first index lowered.
    let f: Vec<Form> = (0..4)
        .map(|a| Ok(frame.to_frame(&frame.theta[a].d()?).scale(ETA[a])))
        .collect::<Result<_>>()?;
    let fc = |a: usize, c: usize, d: usize| -> Jet {
        if c == d {
            Jet::zero(f[a].order())
        } else {
            f[a].comp(&[c, d])
        }
    };
    let mut entries = Vec::with_capacity(16);
    for a in 0..4 {
        for b in 0..4 {
            let mut form = Form::zero(1, f[0].order());
            for c in 0..4 {
                // ω_{abc} = ½(F_{abc} + F_{bca} − F_{cab})
                let w = (&(&fc(a, b, c) + &fc(b, c, a)) - &fc(c, a, b)).scale(0.5 * ETA[a]);
                if !w.is_zero() {
                    form = &form + &frame.theta[c].scale_jet(&w);
                }
            }
            entries.push(form);
        }
    }
    MatrixForm::from_entries(4, 4, entries)
}

/// Frame components `Rᵃ_{bcd}` of a so(1,3)-valued 2-form.
pub fn frame_components(frame: &Frame, r: &MatrixForm) -> Vec<Vec<Form>> {
    (0..4)
        .map(|a| (0..4).map(|b| frame.to_frame(r.get(a, b))).collect())
        .collect()
}

/// `Ric_bd = Rᵃ_{bad}`.
pub fn ricci(frame: &Frame, r: &MatrixForm) -> [[Jet; 4]; 4] {
    let rc = frame_components(frame, r);
    let order = r.order();
    std::array::from_fn(|b| {
        std::array::from_fn(|d| {
            (0..4).fold(Jet::zero(order), |acc, a| {
                if a == d {
                    acc
                } else {
                    acc + rc[a][b].comp(&[a, d])
                }
            })
        })
    })
}

/// `P_ab = −½(Ric_ab − (R/6)η_ab)`.
pub fn schouten_from_riemann(frame: &Frame, r: &MatrixForm) -> [[Jet; 4]; 4] {
    let ric = ricci(frame, r);
    let scalar = (0..4).fold(Jet::zero(r.order()), |acc, a| acc + ric[a][a].scale(ETA[a]));
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut t = ric[a][b].clone();
            if a == b {
                t -= &scalar.scale(ETA[a] / 6.0);
            }
            t.scale(-0.5)
        })
    })
}

/// Largest `|Wᵃ_{bad}|` at the expansion point for a so(1,3)-valued 2-form.
pub fn ricci_trace_residual(frame: &Frame, w: &MatrixForm) -> f64 {
    let ric = ricci(frame, w);
    ric.iter()
        .flatten()
        .map(|j| j.value().norm())
        .fold(0.0, f64::max)
}

/// Vector-representation image of a spin Weyl block.
pub fn weyl_vector(w_bar: &MatrixForm) -> MatrixForm {
    so13_forms_of_sl2(w_bar)
}

/// `(C̄₁, 𝒲̄₁)` of a normal connection, rejecting inputs with torsion.
pub fn cotton_and_weyl(conn: &SpinCartanConn) -> Result<(MatrixForm, MatrixForm)> {
    let curv = curvature(conn)?;
    let res = curv.torsion.max_abs_value().max(curv.f.max_abs_value());
    if res > 1e-8 {
        return Err(Error::NotNormal(res));
    }
    Ok((curv.c_bar, curv.w_bar))
}
