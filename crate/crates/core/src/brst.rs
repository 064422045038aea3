//! The BRST operator on the spin Cartan connection, its curvature, twistor
//! sections and ghosts; the dressed ghost and the dressed BRST algebra.
//!
//! Ghosts are Grassmann elements with generators on the left: generator 0
//! carries the Weyl parameter `ε`, generators 1..=6 the `sl(2,ℂ)`
//! coefficients of `s̄` and generators 7..=10 the covector `ρ`.

use crate::cartan::{curvature_matrix, gauge_transform, act_on_section, traceless, SpinCartanConn, SpinCurvature};
use crate::dressing::{frame_covector, residual_lorentz, residual_weyl, residual_weyl_section, residual_lorentz_section, DressingField, WeylCocycle};
use crate::error::Result;
use crate::field::{Point, ScalarField};
use crate::form::Form;
use crate::frame::Frame;
use crate::grassmann::Grassmann;
use crate::jet::{Jet, I};
use crate::matrix_form::MatrixForm;
use crate::spin_iso::{sigma, sl2_basis, to_dyn};

pub const EPS_GEN: usize = 0;
pub const S_GENS: std::ops::Range<usize> = 1..7;
pub const RHO_GENS: std::ops::Range<usize> = 7..11;
pub const GENERATORS: usize = 11;

/// Masks containing any `ρ` generator.
pub const RHO_MASK: u16 = 0b111_1000_0000;

fn constant(m: &crate::spin_iso::M2, order: usize) -> MatrixForm {
    MatrixForm::constant(&to_dyn(m), order)
}

fn block_diag(a: &MatrixForm, d: &MatrixForm) -> MatrixForm {
    let z = MatrixForm::zero(2, 2, a.degree(), a.order());
    MatrixForm::from_blocks(a, &z, &z, d)
}

fn upper(b: &MatrixForm) -> MatrixForm {
    let z = MatrixForm::zero(2, 2, b.degree(), b.order());
    MatrixForm::from_blocks(&z, b, &z, &z)
}

/// Ghost coefficient fields; absent sectors vanish.
#[derive(Clone, Debug, Default)]
pub struct GhostField {
    pub eps: Option<ScalarField>,
    pub s: Option<[ScalarField; 6]>,
    pub rho: Option<[ScalarField; 4]>,
}

impl GhostField {
    pub fn at(&self, p: &Point, order: usize) -> Result<GhostJets> {
        let mut g = GhostJets::zero(order);
        if let Some(e) = &self.eps {
            g.eps = e.jet(p, order)?;
        }
        if let Some(s) = &self.s {
            for k in 0..6 {
                g.s[k] = s[k].jet(p, order)?;
            }
        }
        if let Some(r) = &self.rho {
            for a in 0..4 {
                g.rho[a] = r[a].jet(p, order)?;
            }
        }
        Ok(g)
    }
}

/// Ghost coefficients at one point.
#[derive(Clone, Debug)]
pub struct GhostJets {
    pub eps: Jet,
    pub s: [Jet; 6],
    pub rho: [Jet; 4],
}

impl GhostJets {
    pub fn zero(order: usize) -> Self {
        GhostJets {
            eps: Jet::zero(order),
            s: std::array::from_fn(|_| Jet::zero(order)),
            rho: std::array::from_fn(|_| Jet::zero(order)),
        }
    }

    pub fn order(&self) -> usize {
        self.eps.order()
    }

    /// `s̄` coefficient matrix of generator `1 + k`.
    pub fn s_matrix(&self, k: usize) -> MatrixForm {
        constant(&sl2_basis(k), self.order()).scale_jet(&self.s[k])
    }

    /// `ρ̄` coefficient matrix of generator `7 + a` (`ρ̄ = ρₐσₐ`).
    pub fn rho_matrix(&self, a: usize) -> MatrixForm {
        constant(&sigma(a), self.order()).scale_jet(&self.rho[a])
    }

    /// `v̄_ε = ξ₀ ε diag(½𝟙, −½𝟙)`.
    pub fn v_eps(&self) -> Grassmann {
        let half = MatrixForm::identity(2, self.order()).scale_jet(&self.eps.scale(0.5));
        Grassmann::monomial(1 << EPS_GEN, block_diag(&half, &-&half))
    }

    /// `v̄_s = Σ ξ_k diag(−s̄ₖ∗, s̄ₖ)`.
    pub fn v_s(&self) -> Grassmann {
        let k = self.order();
        S_GENS.fold(Grassmann::zero(4, 4, 0, k), |acc, g| {
            let s = self.s_matrix(g - S_GENS.start);
            &acc + &Grassmann::monomial(1 << g, block_diag(&-&s.adjoint(), &s))
        })
    }

    /// `v̄_ρ = Σ ξ_a [[0, −iρ̄ₐ], [0, 0]]`.
    pub fn v_rho(&self) -> Grassmann {
        let k = self.order();
        RHO_GENS.fold(Grassmann::zero(4, 4, 0, k), |acc, g| {
            let r = self.rho_matrix(g - RHO_GENS.start);
            &acc + &Grassmann::monomial(1 << g, upper(&r.scale(-I)))
        })
    }

    pub fn v(&self) -> Grassmann {
        &(&self.v_eps() + &self.v_s()) + &self.v_rho()
    }

    /// `∂̄ε = (∂_με e^μ_a)σₐ`.
    pub fn d_eps_bar(&self, frame: &Frame) -> Result<MatrixForm> {
        Ok(frame_covector(frame, &Form::scalar(self.eps.clone()).d()?).1)
    }

    /// `c(ε) = k̄₁(ε) + v̄_ε`.
    pub fn c_eps(&self, frame: &Frame) -> Result<Grassmann> {
        let k1 = Grassmann::monomial(1 << EPS_GEN, upper(&self.d_eps_bar(frame)?.scale(-I)));
        Ok(&k1 + &self.v_eps())
    }

    /// Single-generator matrix `V_g` (coefficient of `ξ_g` in `v̄`).
    pub fn generator_matrix(&self, g: usize) -> MatrixForm {
        self.v().coefficient(1 << g)
    }
}

/// Elementary fields of the BRST algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    /// `ϖ̄`, bidegree (1, 0).
    Conn,
    /// `Ω̄`, bidegree (2, 0).
    Curv,
    /// `ψ`, bidegree (0, 0).
    Section,
    /// `v̄`, bidegree (0, 1).
    Ghost,
}

/// Expressions on which `s` acts symbolically.
#[derive(Clone, Debug, PartialEq)]
pub enum BrstExpr {
    Leaf(Field),
    D(Box<BrstExpr>),
    Mul(Box<BrstExpr>, Box<BrstExpr>),
    Sum(Vec<(f64, BrstExpr)>),
}

impl BrstExpr {
    pub fn leaf(f: Field) -> Self {
        BrstExpr::Leaf(f)
    }

    pub fn d(self) -> Self {
        BrstExpr::D(Box::new(self))
    }

    pub fn mul(self, rhs: BrstExpr) -> Self {
        BrstExpr::Mul(Box::new(self), Box::new(rhs))
    }

    /// Graded commutator in total degree.
    pub fn commutator(self, rhs: BrstExpr) -> Self {
        let sign = if self.total_degree() * rhs.total_degree() % 2 == 1 { 1.0 } else { -1.0 };
        BrstExpr::Sum(vec![(1.0, self.clone().mul(rhs.clone())), (sign, rhs.mul(self))])
    }

    /// Form degree plus ghost degree.
    pub fn total_degree(&self) -> usize {
        match self {
            BrstExpr::Leaf(Field::Conn) | BrstExpr::Leaf(Field::Ghost) => 1,
            BrstExpr::Leaf(Field::Curv) => 2,
            BrstExpr::Leaf(Field::Section) => 0,
            BrstExpr::D(e) => e.total_degree() + 1,
            BrstExpr::Mul(a, b) => a.total_degree() + b.total_degree(),
            BrstExpr::Sum(v) => v.first().map_or(0, |(_, e)| e.total_degree()),
        }
    }

    /// The BRST differential: `sϖ̄ = −dv̄ − [ϖ̄, v̄]`, `sΩ̄ = [Ω̄, v̄]`,
    /// `sψ = −v̄ψ`, `sv̄ = −v̄²`, extended as an antiderivation with `sd = −ds`.
    pub fn s(&self) -> BrstExpr {
        use BrstExpr::*;
        let v = || Leaf(Field::Ghost);
        match self {
            Leaf(Field::Conn) => Sum(vec![(-1.0, v().d()), (-1.0, Leaf(Field::Conn).commutator(v()))]),
            Leaf(Field::Curv) => Leaf(Field::Curv).commutator(v()),
            Leaf(Field::Section) => Sum(vec![(-1.0, v().mul(Leaf(Field::Section)))]),
            Leaf(Field::Ghost) => Sum(vec![(-1.0, v().mul(v()))]),
            D(e) => Sum(vec![(-1.0, e.s().d())]),
            Mul(a, b) => {
                let sign = if a.total_degree() % 2 == 1 { -1.0 } else { 1.0 };
                Sum(vec![(1.0, a.s().mul((**b).clone())), (sign, (**a).clone().mul(b.s()))])
            }
            Sum(v) => Sum(v.iter().map(|(c, e)| (*c, e.s())).collect()),
        }
    }

    pub fn eval(&self, env: &BrstEnv) -> Result<Grassmann> {
        Ok(match self {
            BrstExpr::Leaf(f) => env.get(*f).clone(),
            BrstExpr::D(e) => e.eval(env)?.d()?,
            BrstExpr::Mul(a, b) => a.eval(env)?.try_mul(&b.eval(env)?)?,
            BrstExpr::Sum(v) => {
                let mut terms = v.iter().map(|(c, e)| Ok(e.eval(env)?.scale(*c)));
                let first = terms.next().expect("non-empty sum")?;
                terms.try_fold(first, |acc: Grassmann, t: Result<Grassmann>| acc.try_add(&t?))?
            }
        })
    }
}

/// Numeric values of the elementary fields.
#[derive(Clone, Debug)]
pub struct BrstEnv {
    pub conn: Grassmann,
    pub curv: Grassmann,
    pub section: Grassmann,
    pub ghost: Grassmann,
}

impl BrstEnv {
    /// Curvature is computed from the connection.
    pub fn new(varpi: &MatrixForm, psi: &MatrixForm, ghost: Grassmann) -> Result<Self> {
        Ok(BrstEnv {
            conn: Grassmann::scalar(varpi.clone()),
            curv: Grassmann::scalar(curvature_matrix(varpi)?),
            section: Grassmann::scalar(psi.clone()),
            ghost,
        })
    }

    pub fn get(&self, f: Field) -> &Grassmann {
        match f {
            Field::Conn => &self.conn,
            Field::Curv => &self.curv,
            Field::Section => &self.section,
            Field::Ghost => &self.ghost,
        }
    }
}

/// `Ω̄` written through the connection, `dϖ̄ + ϖ̄²`.
pub fn curvature_expr() -> BrstExpr {
    let w = || BrstExpr::leaf(Field::Conn);
    BrstExpr::Sum(vec![(1.0, w().d()), (1.0, w().mul(w()))])
}

/// `max |s²χ|` over the four generators and `dϖ̄ + ϖ̄²`.
pub fn nilpotency_residual(env: &BrstEnv) -> Result<f64> {
    let exprs = [
        BrstExpr::leaf(Field::Conn),
        BrstExpr::leaf(Field::Curv),
        BrstExpr::leaf(Field::Section),
        BrstExpr::leaf(Field::Ghost),
        curvature_expr(),
    ];
    exprs.iter().try_fold(0.0f64, |acc, e| Ok(acc.max(e.s().s().eval(env)?.max_abs())))
}

/// `s(dϖ̄ + ϖ̄²) − [Ω̄, v̄]`: the curvature rule agrees with `sd = −ds`.
pub fn curvature_consistency(env: &BrstEnv) -> Result<f64> {
    let lhs = curvature_expr().s().eval(env)?;
    let rhs = BrstExpr::leaf(Field::Curv).s().eval(env)?;
    Ok(lhs.distance(&rhs))
}

/// Bidegree pieces of `(d + s)(ϖ̄ + v̄) + ½[ϖ̄ + v̄, ϖ̄ + v̄] − Ω̄`.
pub fn russian_formula_residual(env: &BrstEnv) -> Result<f64> {
    let w = &env.conn;
    let v = &env.ghost;
    let sw = BrstExpr::leaf(Field::Conn).s().eval(env)?;
    let sv = BrstExpr::leaf(Field::Ghost).s().eval(env)?;
    let p20 = &(&w.d()? + &(w * w)) - &env.curv;
    let p11 = &(&v.d()? + &sw) + &(&(w * v) + &(v * w));
    let p02 = &sv + &(v * v);
    Ok(p20.max_abs().max(p11.max_abs()).max(p02.max_abs()))
}

/// `sū₁ = −v̄_εū₁ + ū₁c(ε) + [ū₁, v̄_s] − v̄_ρū₁`.
pub fn s_dressing(g: &GhostJets, u: &DressingField, frame: &Frame) -> Result<Grassmann> {
    let uu = Grassmann::scalar(u.u.clone());
    let (ve, vs, vr) = (g.v_eps(), g.v_s(), g.v_rho());
    let weyl = &(&uu * &g.c_eps(frame)?) - &(&ve * &uu);
    let lorentz = &(&uu * &vs) - &(&vs * &uu);
    Ok(&(&weyl + &lorentz) - &(&vr * &uu))
}

/// Dressed ghost `ū₁⁻¹v̄ū₁ + ū₁⁻¹sū₁`.
pub fn dressed_ghost(g: &GhostJets, u: &DressingField, frame: &Frame) -> Result<Grassmann> {
    let uu = Grassmann::scalar(u.u.clone());
    let uinv = Grassmann::scalar(u.u.inverse()?);
    Ok(&(&(&uinv * &g.v()) * &uu) + &(&uinv * &s_dressing(g, u, frame)?))
}

/// `v̄₁ = c(ε) + v̄_s = [[−(s̄∗ − ε/2), −i∂̄ε], [0, s̄ − ε/2]]`.
pub fn dressed_ghost_closed(g: &GhostJets, frame: &Frame) -> Result<Grassmann> {
    Ok(&g.c_eps(frame)? + &g.v_s())
}

/// Largest coefficient on any mask containing a `ρ` generator.
pub fn rho_residual(x: &Grassmann) -> f64 {
    x.filter(|m| m & RHO_MASK != 0).max_abs()
}

/// Per-generator data `(mask, ε, s̄, ∂̄ε)` of the dressed ghost.
fn dressed_generators(g: &GhostJets, frame: &Frame) -> Result<Vec<(u16, Jet, MatrixForm, MatrixForm)>> {
    let k = g.order();
    let z = MatrixForm::zero(2, 2, 0, k);
    let mut out = vec![(1 << EPS_GEN, g.eps.clone(), z.clone(), g.d_eps_bar(frame)?)];
    for gen in S_GENS {
        out.push((1 << gen, Jet::zero(k), g.s_matrix(gen - S_GENS.start), z.clone()));
    }
    Ok(out)
}

/// Closed form of `sϖ̄₁ = −dv̄₁ − [ϖ̄₁, v̄₁]` per generator (ξ on the left):
/// `[[−∇∗s̄∗ − (∂̄εθ̄)₀, −i(∇∂̄ε − εP̄₁ + P̄₁s̄ + s̄∗P̄₁)], [i(εθ̄ − s̄θ̄ − θ̄s̄∗), ∇s̄ + (θ̄∂̄ε)₀]]`
/// with `∇s̄ = ds̄ + [Ā₁, s̄]` and `∇∂̄ε = d∂̄ε − ∂̄εĀ₁ − Ā₁∗∂̄ε`.
pub fn dressed_brst_connection(conn: &SpinCartanConn, g: &GhostJets, frame: &Frame) -> Result<Grassmann> {
    let (a, p, th) = (&conn.a_bar, &conn.p_bar, &conn.theta_bar);
    let mut out = Grassmann::zero(4, 4, 1, conn.order().min(g.order()));
    for (mask, eps, s, e) in dressed_generators(g, frame)? {
        let nabla_s = &s.d()? + &a.commutator(&s);
        let nabla_e = &(&e.d()? - &(&e * a)) - &(&a.adjoint() * &e);
        let te = traceless(&(th * &e));
        let ul = -&(&nabla_s.adjoint() + &te.adjoint());
        let ur = &(&(&nabla_e - &p.scale_jet(&eps)) + &(p * &s)) + &(&s.adjoint() * p);
        let ll = &(&th.scale_jet(&eps) - &(&s * th)) - &(th * &s.adjoint());
        let lr = &nabla_s + &te;
        let m = MatrixForm::from_blocks(&ul, &ur.scale(-I), &ll.scale(I), &lr);
        out = &out + &Grassmann::monomial(mask, m);
    }
    Ok(out)
}

/// Closed form of `sΩ̄₁ = [Ω̄₁, v̄₁]` per generator:
/// `[[[W̄∗, s̄∗] − ∂̄εΘ̄, −i(−εC̄ + C̄s̄ + s̄∗C̄ − ∂̄εW̄ − W̄∗∂̄ε + f∂̄ε)],
///   [i(εΘ̄ − s̄Θ̄ − Θ̄s̄∗), [W̄, s̄] + Θ̄∂̄ε]]`.
pub fn dressed_brst_curvature(curv: &SpinCurvature, g: &GhostJets, frame: &Frame) -> Result<Grassmann> {
    let (w, c, th, f) = (&curv.w_bar, &curv.c_bar, &curv.torsion, &curv.f);
    let mut out = Grassmann::zero(4, 4, 2, curv.matrix.order().min(g.order()));
    for (mask, eps, s, e) in dressed_generators(g, frame)? {
        let ws = w.adjoint();
        let ul = &(&(&ws * &s.adjoint()) - &(&s.adjoint() * &ws)) - &(&e * th);
        let ur = &(&(&(&(c * &s) + &(&s.adjoint() * c)) - &c.scale_jet(&eps)) - &(&(&e * w) + &(&ws * &e)))
            + &e.lmul_form(f);
        let ll = &(&th.scale_jet(&eps) - &(&s * th)) - &(th * &s.adjoint());
        let lr = &(&(w * &s) - &(&s * w)) + &(th * &e);
        let m = MatrixForm::from_blocks(&ul, &ur.scale(-I), &ll.scale(I), &lr);
        out = &out + &Grassmann::monomial(mask, m);
    }
    Ok(out)
}

/// `sψ₁ = −v̄₁ψ₁ = ((s̄∗ − ε/2)π₁ + i∂̄εω₁, −(s̄ − ε/2)ω₁)` per generator.
pub fn dressed_brst_section(psi: &MatrixForm, g: &GhostJets, frame: &Frame) -> Result<Grassmann> {
    let (pi, om) = (psi.block(0, 0, 2, 1), psi.block(2, 0, 2, 1));
    let mut out = Grassmann::zero(4, 1, 0, psi.order().min(g.order()));
    for (mask, eps, s, e) in dressed_generators(g, frame)? {
        let half = eps.scale(0.5);
        let top = &(&(&s.adjoint() * &pi) - &pi.scale_jet(&half)) + &(&e * &om).scale(I);
        let bottom = &om.scale_jet(&half) - &(&s * &om);
        let entries = top.entries().iter().chain(bottom.entries()).cloned().collect();
        out = &out + &Grassmann::monomial(mask, MatrixForm::from_entries(4, 1, entries)?);
    }
    Ok(out)
}

/// `sv̄₁ = −v̄₁² = [[−s̄∗s̄∗, i(∂̄εs̄ − s̄∗∂̄ε)], [0, −s̄s̄]]` with Grassmann-valued
/// `s̄ = Σξₖs̄ₖ` and `∂̄ε = ξ₀∂̄ε`.
pub fn dressed_brst_ghost(g: &GhostJets, frame: &Frame) -> Result<Grassmann> {
    let k = g.order();
    let sbar = S_GENS.fold(Grassmann::zero(2, 2, 0, k), |acc, gen| {
        &acc + &Grassmann::monomial(1 << gen, g.s_matrix(gen - S_GENS.start))
    });
    let sadj = sbar.map(MatrixForm::adjoint);
    let e = Grassmann::monomial(1 << EPS_GEN, g.d_eps_bar(frame)?);
    let ul = -&(&sadj * &sadj);
    let ur = (&(&e * &sbar) - &(&sadj * &e)).scale(I);
    let lr = -&(&sbar * &sbar);
    let masks: std::collections::BTreeSet<u16> = ul.terms().chain(ur.terms()).chain(lr.terms()).map(|(m, _)| m).collect();
    let z = MatrixForm::zero(2, 2, 0, k);
    let mut out = Grassmann::zero(4, 4, 0, k);
    for mask in masks {
        let m = MatrixForm::from_blocks(&ul.coefficient(mask), &ur.coefficient(mask), &z, &lr.coefficient(mask));
        out = &out + &Grassmann::monomial(mask, m);
    }
    Ok(out)
}

/// `max ‖χ(t) − χ − t·(coefficient of ξ_g in sχ)‖` over generators for the
/// undressed connection and section, with finite elements `exp(tV_g)`.
pub fn linearization_residual(varpi: &MatrixForm, psi: &MatrixForm, g: &GhostJets, t: f64) -> Result<f64> {
    let env = BrstEnv::new(varpi, psi, g.v())?;
    let sw = BrstExpr::leaf(Field::Conn).s().eval(&env)?;
    let sp = BrstExpr::leaf(Field::Section).s().eval(&env)?;
    let mut worst = 0.0f64;
    for gen in 0..GENERATORS {
        let gamma = g.generator_matrix(gen).scale(t).exp()?;
        let dw = &(&gauge_transform(varpi, &gamma)? - varpi) - &sw.coefficient(1 << gen).scale(t);
        let dp = &(&act_on_section(psi, &gamma)? - psi) - &sp.coefficient(1 << gen).scale(t);
        worst = worst.max(dw.max_abs_value()).max(dp.max_abs_value());
    }
    Ok(worst)
}

/// Same for composite fields: the `ε` generator against `residual_weyl`
/// with `z = exp(tε)`, the `s̄` generators against `residual_lorentz` with
/// `S̄ = exp(ts̄ₖ)`.
pub fn dressed_linearization_residual(
    conn: &SpinCartanConn,
    psi: &MatrixForm,
    g: &GhostJets,
    frame: &Frame,
    t: f64,
) -> Result<f64> {
    let sw = dressed_brst_connection(conn, g, frame)?;
    let sp = dressed_brst_section(psi, g, frame)?;
    let w0 = conn.matrix();
    let mut worst = 0.0f64;
    let mut check = |mask: u16, w: MatrixForm, p: MatrixForm| {
        let dw = &(&w - &w0) - &sw.coefficient(mask).scale(t);
        let dp = &(&p - psi) - &sp.coefficient(mask).scale(t);
        worst = worst.max(dw.max_abs_value()).max(dp.max_abs_value());
    };
    let c = WeylCocycle::new(&g.eps.scale(t).exp(), frame)?;
    check(1 << EPS_GEN, residual_weyl(conn, &c)?.matrix(), residual_weyl_section(psi, &c)?);
    for gen in S_GENS {
        let s = g.s_matrix(gen - S_GENS.start).scale(t).exp()?;
        check(1 << gen, residual_lorentz(conn, &s)?.matrix(), residual_lorentz_section(psi, &s)?);
    }
    Ok(worst)
}
