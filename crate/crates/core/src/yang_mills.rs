//! Killing forms, Yang-Mills Lagrangian densities of the spin Cartan
//! connection, Weyl gravity, and the Merkulov modified connection.

use nalgebra::{DMatrix, DVector};

use crate::cartan::{curvature, normal_connection, traceless, NormalConnection, SpinCartanConn, SpinCurvature};
use crate::error::{Error, Result};
use crate::form::{masks, Form};
use crate::frame::Frame;
use crate::hodge::{hodge_matrix, hodge_star, top_coefficient};
use crate::jet::{Jet, C64};
use crate::matrix_form::MatrixForm;
use crate::spin_iso::{herm_of_covector_forms, sigma_conf, sigma_spin, so13_forms_of_sl2, vector_forms_of_herm, ETA};

/// Threshold below which a singular value counts as zero.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algebra {
    Su22,
    So24,
    Sl2C,
    So13,
}

impl Algebra {
    pub fn name(self) -> &'static str {
        match self {
            Algebra::Su22 => "su(2,2)",
            Algebra::So24 => "so(2,4)",
            Algebra::Sl2C => "sl(2,C)",
            Algebra::So13 => "so(1,3)",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Algebra::Su22 | Algebra::So13 => 4,
            Algebra::So24 => 6,
            Algebra::Sl2C => 2,
        }
    }

    /// Complex (spin) algebras use `½(Tr AB + Tr B∗A∗)`, real ones `Tr AB`.
    fn is_spin(self) -> bool {
        matches!(self, Algebra::Su22 | Algebra::Sl2C)
    }

    /// Membership residual of a numeric matrix.
    pub fn membership_residual(self, m: &DMatrix<C64>) -> f64 {
        let max = |x: DMatrix<C64>| x.iter().map(|c| c.norm()).fold(0.0, f64::max);
        match self {
            Algebra::Sl2C => m.trace().norm(),
            Algebra::Su22 => {
                let s = DMatrix::from_iterator(4, 4, sigma_spin().iter().cloned());
                max(m.adjoint() * &s + &s * m).max(m.trace().norm())
            }
            Algebra::So13 | Algebra::So24 => {
                let g: DMatrix<C64> = if self == Algebra::So13 {
                    DMatrix::from_diagonal(&DVector::from_iterator(4, ETA.iter().map(|&e| C64::from(e))))
                } else {
                    DMatrix::from_iterator(6, 6, sigma_conf().iter().map(|&e| C64::from(e)))
                };
                let gm = &g * m;
                let imag = m.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
                max(&gm + gm.transpose()).max(imag)
            }
        }
    }
}

/// Killing form of numeric Lie algebra elements.
pub fn killing(alg: Algebra, a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<C64> {
    let n = alg.dim();
    if a.shape() != (n, n) || b.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("{alg:?} expects {n}×{n}")));
    }
    let scale = a.camax().max(b.camax()).max(1.0);
    for m in [a, b] {
        if alg.membership_residual(m) > 1e-9 * scale * scale {
            return Err(Error::NotInAlgebra(alg.name()));
        }
    }
    let tr = (a * b).trace();
    Ok(if alg.is_spin() { 0.5 * (tr + (b.adjoint() * a.adjoint()).trace()) } else { tr })
}

/// Killing form of matrix-valued forms, with wedge products in the traces.
pub fn killing_forms(alg: Algebra, a: &MatrixForm, b: &MatrixForm) -> Result<Form> {
    let n = alg.dim();
    if (a.rows(), a.cols(), b.rows(), b.cols()) != (n, n, n, n) {
        return Err(Error::DimensionMismatch(format!("{alg:?} expects {n}×{n}")));
    }
    let tr = a.try_mul(b)?.trace();
    Ok(if alg.is_spin() {
        (&tr + &b.adjoint().try_mul(&a.adjoint())?.trace()).scale(0.5)
    } else {
        tr
    })
}

/// A 4-form density, reported as its `dx⁰∧dx¹∧dx²∧dx³` coefficient.
#[derive(Clone, Debug)]
pub struct LagrangianDensity {
    pub form: Form,
}

impl LagrangianDensity {
    fn new(form: Form) -> Result<Self> {
        if form.degree() != 4 {
            return Err(Error::DegreeMismatch(form.degree(), 4));
        }
        Ok(LagrangianDensity { form })
    }

    pub fn jet(&self) -> Jet {
        top_coefficient(&self.form)
    }

    pub fn value(&self) -> f64 {
        self.jet().value().re
    }

    pub fn imaginary_residual(&self) -> f64 {
        self.jet().value().im.abs()
    }
}

/// `|x − y| / max(|x|, |y|, 1e-12)`.
pub fn relative_difference(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1e-12)
}

/// Rejects curvatures with torsion or a trace part.
fn ensure_normal_type(curv: &SpinCurvature) -> Result<()> {
    let res = curv.torsion.max_abs_value().max(curv.f.max_abs_value());
    if res > 1e-8 {
        return Err(Error::NotNormal(res));
    }
    Ok(())
}

/// Route (i): `¼B_su(2,2)(Ω̄, ∗Ω̄)` for a connection with normal-type curvature.
pub fn ym_lagrangian(conn: &SpinCartanConn, frame: &Frame) -> Result<LagrangianDensity> {
    let curv = curvature(conn)?;
    ensure_normal_type(&curv)?;
    let star = hodge_matrix(&curv.matrix, frame)?;
    LagrangianDensity::new(killing_forms(Algebra::Su22, &curv.matrix, &star)?.scale(0.25))
}

/// Route (ii): `½B_sl(2,ℂ)(𝒲̄, ∗𝒲̄)` from the spin Weyl block.
pub fn ym_lagrangian_spin(conn: &SpinCartanConn, frame: &Frame) -> Result<LagrangianDensity> {
    let curv = curvature(conn)?;
    ensure_normal_type(&curv)?;
    let star = hodge_matrix(&curv.w_bar, frame)?;
    LagrangianDensity::new(killing_forms(Algebra::Sl2C, &curv.w_bar, &star)?.scale(0.5))
}

/// Vector-representation Weyl 2-form `Wᵃ_b = Rᵃ_b + θᵃ∧P_b + ηᵃᵃη_bb P_a∧θᵇ`
/// with `P_b = P_bc θᶜ`.
pub fn vector_weyl(nc: &NormalConnection, frame: &Frame) -> MatrixForm {
    let k = nc.riemann.order();
    let p: [Form; 4] = std::array::from_fn(|b| {
        (0..4).fold(Form::zero(1, k), |acc, c| &acc + &frame.theta[c].scale_jet(&nc.schouten[b][c]))
    });
    let entries = (0..4)
        .flat_map(|a| (0..4).map(move |b| (a, b)))
        .map(|(a, b)| {
            let m = &frame.theta[a].wedge(&p[b]) + &p[a].wedge(&frame.theta[b]).scale(ETA[a] * ETA[b]);
            nc.riemann.get(a, b) + &m
        })
        .collect();
    MatrixForm::from_entries(4, 4, entries).expect("4×4 entries")
}

/// Route (iii): `L_Weyl = ½Tr(𝒲 ∧ ∗𝒲)` in the vector representation.
pub fn weyl_lagrangian(frame: &Frame) -> Result<LagrangianDensity> {
    let nc = normal_connection(frame)?;
    let w = vector_weyl(&nc, frame);
    let star = hodge_matrix(&w, frame)?;
    LagrangianDensity::new(killing_forms(Algebra::So13, &w, &star)?.scale(0.5))
}

/// The three Yang-Mills/Weyl-gravity routes at one point.
#[derive(Clone, Debug)]
pub struct LagrangianRoutes {
    pub su22: LagrangianDensity,
    pub sl2c: LagrangianDensity,
    pub vector: LagrangianDensity,
}

impl LagrangianRoutes {
    pub fn values(&self) -> [f64; 3] {
        [self.su22.value(), self.sl2c.value(), self.vector.value()]
    }

    /// Largest pairwise relative difference.
    pub fn max_relative_difference(&self) -> f64 {
        let [a, b, c] = self.values();
        relative_difference(a, b).max(relative_difference(a, c)).max(relative_difference(b, c))
    }

    pub fn imaginary_residual(&self) -> f64 {
        self.su22.imaginary_residual().max(self.sl2c.imaginary_residual()).max(self.vector.imaginary_residual())
    }
}

pub fn lagrangian_routes(frame: &Frame) -> Result<LagrangianRoutes> {
    let conn = normal_connection(frame)?.conn;
    Ok(LagrangianRoutes {
        su22: ym_lagrangian(&conn, frame)?,
        sl2c: ym_lagrangian_spin(&conn, frame)?,
        vector: weyl_lagrangian(frame)?,
    })
}

/// Coordinate 2-form from components `f_01, f_02, f_03, f_12, f_13, f_23`.
pub fn faraday(comps: [Jet; 6]) -> Form {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let order = comps[0].order();
    pairs.iter().zip(comps).fold(Form::zero(2, order), |acc, (&(m, n), c)| &acc + &Form::monomial(&[m, n], c))
}

/// Coordinate 2-form from a full component matrix `f_μν`.
pub fn faraday_from_matrix(m: &[[Jet; 4]; 4]) -> Result<Form> {
    for mu in 0..4 {
        for nu in 0..4 {
            if (&m[mu][nu] + &m[nu][mu]).max_abs() > 1e-12 {
                return Err(Error::NotAntisymmetric);
            }
        }
    }
    Ok(faraday([0, 1, 2, 3, 4, 5].map(|i| {
        let (mu, nu) = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)][i];
        m[mu][nu].clone()
    })))
}

/// `ϖ̄′₁ = [[−Ā₁∗, −iP̄₁], [iθ̄, Ā₁]]` with `P̄₁ = 𝒫̄₁ + f̄₁`.
#[derive(Clone, Debug)]
pub struct MerkulovConnection {
    pub conn: SpinCartanConn,
    /// The input 2-form `f₁`.
    pub f1: Form,
    /// `f̄₁ = p_ab θᵇ σₐ` with `p_ab = −½(f₁)_ab`, so that `−Tr(θ̄f̄₁) = f₁`.
    pub f_bar: MatrixForm,
    pub curvature: SpinCurvature,
}

/// Antisymmetric Herm-valued 1-form `f̄₁` for a coordinate 2-form `f₁`.
pub fn faraday_bar(frame: &Frame, f1: &Form) -> Result<MatrixForm> {
    if f1.degree() != 2 {
        return Err(Error::DegreeMismatch(f1.degree(), 2));
    }
    let fc = frame.to_frame(f1);
    let k = fc.order();
    let rows: [Form; 4] = std::array::from_fn(|a| {
        (0..4).filter(|&b| b != a).fold(Form::zero(1, k), |acc, b| {
            let sign = if a < b { -0.5 } else { 0.5 };
            &acc + &frame.theta[b].scale_jet(&fc.comp(&[a.min(b), a.max(b)]).scale(sign))
        })
    });
    Ok(herm_of_covector_forms(&rows))
}

pub fn merkulov_connection(frame: &Frame, f1: &Form) -> Result<MerkulovConnection> {
    let mut conn = normal_connection(frame)?.conn;
    let f_bar = faraday_bar(frame, f1)?;
    conn.p_bar = &conn.p_bar + &f_bar.truncate(conn.p_bar.order());
    let curvature = curvature(&conn)?;
    Ok(MerkulovConnection { conn, f1: f1.clone(), f_bar, curvature })
}

/// Both sides of `¼B_su(2,2)(Ω̄′₁, ∗Ω̄′₁) = ½B_sl(2,ℂ)(𝒲̄₁, ∗𝒲̄₁) + ¼f₁∧∗f₁`.
#[derive(Clone, Debug)]
pub struct MerkulovLagrangian {
    pub lhs: LagrangianDensity,
    /// `½B_sl(2,ℂ)(𝒲̄₁, ∗𝒲̄₁)` with `𝒲̄₁` the Weyl block of the metric.
    pub weyl_part: LagrangianDensity,
    /// The same with the trace-free lower-right block of `Ω̄′₁` in its place.
    pub block_part: LagrangianDensity,
    /// `¼f₁∧∗f₁` with `f₁` read off the trace of `Ω̄′₁`.
    pub maxwell_part: LagrangianDensity,
    /// `max|𝒲̄′ − 𝒲̄₁|` between the trace-free block and the Weyl block.
    pub weyl_deviation: f64,
}

impl MerkulovLagrangian {
    /// `|lhs − weyl − maxwell|`, the displayed decomposition.
    pub fn residual(&self) -> f64 {
        (self.lhs.value() - self.weyl_part.value() - self.maxwell_part.value()).abs()
    }

    /// `|lhs − block − maxwell|`.
    pub fn block_residual(&self) -> f64 {
        (self.lhs.value() - self.block_part.value() - self.maxwell_part.value()).abs()
    }
}

fn sl2_density(w: &MatrixForm, frame: &Frame) -> Result<LagrangianDensity> {
    LagrangianDensity::new(killing_forms(Algebra::Sl2C, w, &hodge_matrix(w, frame)?)?.scale(0.5))
}

pub fn merkulov_lagrangian(frame: &Frame, f1: &Form) -> Result<MerkulovLagrangian> {
    let m = merkulov_connection(frame, f1)?;
    let omega = &m.curvature.matrix;
    let lhs = killing_forms(Algebra::Su22, omega, &hodge_matrix(omega, frame)?)?.scale(0.25);
    let f = &m.curvature.f;
    let maxwell = f.wedge(&hodge_star(f, frame)?).scale(0.25);
    let weyl = curvature(&normal_connection(frame)?.conn)?.w_bar;
    Ok(MerkulovLagrangian {
        lhs: LagrangianDensity::new(lhs)?,
        weyl_part: sl2_density(&weyl, frame)?,
        block_part: sl2_density(&m.curvature.w_bar, frame)?,
        maxwell_part: LagrangianDensity::new(maxwell)?,
        weyl_deviation: m.curvature.w_bar.value_distance(&weyl),
    })
}

/// Outcome of the `f₁ = 0` obstruction analysis at one point.
#[derive(Clone, Debug)]
pub struct MerkulovObstruction {
    /// `max|θ̄𝒲̄∗ + 𝒲̄θ̄|` for the Weyl block of the metric.
    pub identity_residual: f64,
    /// Numeric rank of `f ↦ f∧θ̄` on antisymmetric 2-forms.
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// Norm of the least-squares `f` solving `θ̄𝒲̄∗ + 𝒲̄θ̄ = fθ̄`.
    pub forced_f_norm: f64,
    /// Norm of the `f` read off the modified curvature through the same
    /// relation, with its trace-free block in place of `𝒲̄`.
    pub recovered_f_norm: f64,
    /// Ricci trace of that trace-free block in the vector representation;
    /// nonzero means it cannot be a Weyl tensor.
    pub weyl_trace_violation: f64,
}

impl MerkulovObstruction {
    /// The modified connection is consistent with a Weyl block only for `f = 0`.
    pub fn consistent(&self, tol: f64) -> bool {
        self.weyl_trace_violation < tol
    }
}

/// Value-level components of a Herm-valued 3-form as a real 16-vector.
fn herm3_vector(m: &MatrixForm) -> DVector<f64> {
    let v = vector_forms_of_herm(m);
    DVector::from_iterator(
        16,
        v.iter().flat_map(|f| masks(3).iter().map(move |&mask| f.comp_mask(mask).value().re)),
    )
}

/// `θ̄𝒲̄∗ + 𝒲̄θ̄`.
fn bianchi_sector(theta_bar: &MatrixForm, w: &MatrixForm) -> MatrixForm {
    &(theta_bar * &w.adjoint()) + &(w * theta_bar)
}

/// Matrix of `f ↦ fθ̄` on the coordinate basis `dx^μ∧dx^ν`.
pub fn forcing_matrix(frame: &Frame) -> DMatrix<f64> {
    let order = frame.order();
    let cols: Vec<DVector<f64>> = (0..6)
        .map(|i| {
            let mut comps: [Jet; 6] = std::array::from_fn(|_| Jet::zero(order));
            comps[i] = Jet::constant(1.0, order);
            herm3_vector(&frame.theta_bar.lmul_form(&faraday(comps)))
        })
        .collect();
    DMatrix::from_columns(&cols)
}

pub fn merkulov_obstruction(frame: &Frame, f1: &Form) -> Result<MerkulovObstruction> {
    let a = forcing_matrix(frame);
    let svd = a.clone().svd(true, true);
    let singular_values: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let smax = singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Err(Error::DegenerateFrame);
    }
    let rank = singular_values.iter().filter(|&&s| s > RANK_TOL * smax).count();
    let solve = |rhs: &DVector<f64>| -> Result<f64> {
        let x = svd
            .solve(rhs, RANK_TOL * smax)
            .map_err(|e| Error::DimensionMismatch(e.to_string()))?;
        Ok(x.norm())
    };
    let th = &frame.theta_bar;
    let normal_w = curvature(&normal_connection(frame)?.conn)?.w_bar;
    let identity = bianchi_sector(th, &normal_w);
    let m = merkulov_connection(frame, f1)?;
    let modified = bianchi_sector(th, &m.curvature.w_bar);
    let w_vec = so13_forms_of_sl2(&traceless(&m.curvature.w_bar));
    Ok(MerkulovObstruction {
        identity_residual: identity.max_abs_value(),
        rank,
        singular_values,
        forced_f_norm: solve(&herm3_vector(&identity))?,
        recovered_f_norm: solve(&herm3_vector(&modified))?,
        weyl_trace_violation: crate::cartan::ricci_trace_residual(frame, &w_vec),
    })
}
