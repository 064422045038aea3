//! Minkowski space ↔ hermitian 2×2 matrices, the spin coverings
//! SO(1,3) → SL(2,ℂ) and H → H̄ ⊂ SU(2,2), and the Lie algebra morphism
//! so(2,4) → su(2,2).

use std::sync::OnceLock;

use nalgebra::{Matrix2, Matrix4, Matrix6, RowVector4, SMatrix, Vector4};

use crate::error::{Error, Result};
use crate::form::Form;
use crate::jet::{C64, I, ONE, ZERO};
use crate::matrix_form::MatrixForm;

pub type M2 = Matrix2<C64>;
pub type M4c = Matrix4<C64>;

/// Minkowski metric `η = diag(1, −1, −1, −1)`.
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::from(ETA))
}

/// `σ₀ = 𝟙` and the Pauli matrices.
pub fn sigma(a: usize) -> M2 {
    match a {
        0 => M2::new(ONE, ZERO, ZERO, ONE),
        1 => M2::new(ZERO, ONE, ONE, ZERO),
        2 => M2::new(ZERO, -I, I, ZERO),
        3 => M2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("sigma index {a} out of range"),
    }
}

/// `x ↦ x̄ = ½ xᵃσₐ`.
pub fn vec_to_herm(x: &Vector4<f64>) -> M2 {
    (0..4).fold(M2::zeros(), |acc, a| acc + sigma(a) * C64::from(0.5 * x[a]))
}

/// Inverse of [`vec_to_herm`]: `xᵃ = tr(x̄ σₐ)`.
pub fn herm_to_vec(m: &M2) -> Vector4<f64> {
    Vector4::from_fn(|a, _| (m * sigma(a)).trace().re)
}

/// `r ↦ r̄ = rₐσₐ`, normalized so that `tr(τ̄ r̄) = rτ`.
pub fn covec_to_herm(r: &RowVector4<f64>) -> M2 {
    (0..4).fold(M2::zeros(), |acc, a| acc + sigma(a) * C64::from(r[a]))
}

/// Inverse of [`covec_to_herm`]: `rₐ = ½ tr(r̄ σₐ)`.
pub fn herm_to_covec(m: &M2) -> RowVector4<f64> {
    RowVector4::from_fn(|_, a| 0.5 * (m * sigma(a)).trace().re)
}

/// η-transposition of a column vector: `τᵗ = (ητ)ᵀ`.
pub fn eta_transpose_vec(x: &Vector4<f64>) -> RowVector4<f64> {
    (eta() * x).transpose()
}

/// η-transposition of a row vector: `rᵗ = (rη⁻¹)ᵀ`.
pub fn eta_transpose_covec(r: &RowVector4<f64>) -> Vector4<f64> {
    (r * eta()).transpose()
}

pub fn is_hermitian(m: &M2, tol: f64) -> bool {
    (m - m.adjoint()).iter().all(|c| c.norm() <= tol)
}

pub fn minkowski_norm2(x: &Vector4<f64>) -> f64 {
    (0..4).map(|a| ETA[a] * x[a] * x[a]).sum()
}

pub fn is_lorentz(l: &Matrix4<f64>, tol: f64) -> bool {
    (l.transpose() * eta() * l - eta()).amax() <= tol
}

pub fn is_so13(s: &Matrix4<f64>, tol: f64) -> bool {
    (s.transpose() * eta() + eta() * s).amax() <= tol
}

/// The Lorentz matrix `Λ` with `(Λx)‾ = S̄ x̄ S̄∗`.
pub fn lorentz_of_sl2(s: &M2) -> Result<Matrix4<f64>> {
    let det = s.determinant();
    if (det - ONE).norm() > 1e-10 {
        return Err(Error::NotUnimodular(det.norm()));
    }
    Ok(lorentz_of_gl2(s))
}

fn lorentz_of_gl2(s: &M2) -> Matrix4<f64> {
    let mut l = Matrix4::zeros();
    for b in 0..4 {
        let col = herm_to_vec(&(s * sigma(b) * s.adjoint() * C64::from(0.5)));
        l.set_column(b, &col);
    }
    l
}

/// A preimage `S̄ ∈ SL(2,ℂ)` of a proper orthochronous Lorentz matrix.
/// The overall sign is fixed by `Re tr S̄ ≥ 0`, ties toward `+`.
pub fn sl2_of_lorentz(l: &Matrix4<f64>) -> Result<M2> {
    if !is_lorentz(l, 1e-9) {
        return Err(Error::NotInAlgebra("SO(1,3)"));
    }
    // Σ_ν (S̄σ_νS̄∗) X σ_ν = 2 tr(S̄∗X) S̄; try the four basis matrices for X
    // and keep the best conditioned.
    let mut best: Option<(f64, M2)> = None;
    for x in 0..4 {
        let mut m = M2::zeros();
        for nu in 0..4 {
            let mut img = M2::zeros();
            for mu in 0..4 {
                img += sigma(mu) * C64::from(l[(mu, nu)]);
            }
            m += img * sigma(x) * sigma(nu);
        }
        let d = m.determinant().norm();
        if best.as_ref().map_or(true, |(bd, _)| d > *bd) {
            best = Some((d, m));
        }
    }
    let (d, m) = best.expect("four candidates");
    if d < 1e-14 {
        return Err(Error::Singular);
    }
    let mut s = m / m.determinant().sqrt();
    if s.trace().re < 0.0 || (s.trace().re == 0.0 && s.trace().im < 0.0) {
        s = -s;
    }
    Ok(s)
}

/// Real basis of sl(2,ℂ): `σᵢ/2` and `iσᵢ/2`.
pub fn sl2_basis(k: usize) -> M2 {
    let half = C64::from(0.5);
    if k < 3 {
        sigma(k + 1) * half
    } else {
        sigma(k - 2) * (half * I)
    }
}

/// Basis of so(1,3): boosts `K_i` (indices 0..3) then rotations `J_i`.
pub fn so13_basis(k: usize) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    if k < 3 {
        m[(0, k + 1)] = 1.0;
        m[(k + 1, 0)] = 1.0;
    } else {
        let (i, j) = [(2, 3), (3, 1), (1, 2)][k - 3];
        m[(i, j)] = -1.0;
        m[(j, i)] = 1.0;
    }
    m
}

fn so13_coords(s: &Matrix4<f64>) -> [f64; 6] {
    [s[(0, 1)], s[(0, 2)], s[(0, 3)], s[(3, 2)], s[(1, 3)], s[(2, 1)]]
}

/// The so(1,3) image of `s̄`: `(s x)‾ = s̄ x̄ + x̄ s̄∗`.
pub fn so13_of_sl2(sb: &M2) -> Matrix4<f64> {
    let mut s = Matrix4::zeros();
    for b in 0..4 {
        let xb = sigma(b) * C64::from(0.5);
        s.set_column(b, &herm_to_vec(&(sb * xb + xb * sb.adjoint())));
    }
    s
}

/// Real 6×6 matrix of `so13_of_sl2` in the bases above, and its inverse.
fn so13_sl2_tables() -> &'static (Matrix6<f64>, Matrix6<f64>) {
    static T: OnceLock<(Matrix6<f64>, Matrix6<f64>)> = OnceLock::new();
    T.get_or_init(|| {
        let mut fwd = Matrix6::zeros();
        for k in 0..6 {
            let c = so13_coords(&so13_of_sl2(&sl2_basis(k)));
            for (r, v) in c.iter().enumerate() {
                fwd[(r, k)] = *v;
            }
        }
        let inv = fwd.try_inverse().expect("spin morphism is invertible");
        (fwd, inv)
    })
}

/// Preimage `s̄ ∈ sl(2,ℂ)` of `s ∈ so(1,3)`.
pub fn sl2_of_so13(s: &Matrix4<f64>) -> M2 {
    let c = so13_coords(s);
    let inv = &so13_sl2_tables().1;
    let mut out = M2::zeros();
    for k in 0..6 {
        let coef: f64 = (0..6).map(|r| inv[(k, r)] * c[r]).sum();
        out += sl2_basis(k) * C64::from(coef);
    }
    out
}

/// `Σ = [[0,0,−1],[0,η,0],[−1,0,0]]` (6×6).
pub fn sigma_conf() -> Matrix6<f64> {
    let mut m = Matrix6::zeros();
    m[(0, 5)] = -1.0;
    m[(5, 0)] = -1.0;
    for a in 0..4 {
        m[(a + 1, a + 1)] = ETA[a];
    }
    m
}

/// `Σ̄ = [[0,𝟙],[𝟙,0]]` (4×4).
pub fn sigma_spin() -> M4c {
    let mut m = M4c::zeros();
    for i in 0..2 {
        m[(i, i + 2)] = ONE;
        m[(i + 2, i)] = ONE;
    }
    m
}

/// Element of so(2,4) in graded block form.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfAlgebraElement {
    pub eps: f64,
    pub s: Matrix4<f64>,
    pub tau: Vector4<f64>,
    pub rho: RowVector4<f64>,
}

impl ConfAlgebraElement {
    /// `[[ε, ρ, 0], [τ, s, ρᵗ], [0, τᵗ, −ε]]`.
    pub fn matrix(&self) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        m[(0, 0)] = self.eps;
        m[(5, 5)] = -self.eps;
        let rt = eta_transpose_covec(&self.rho);
        let tt = eta_transpose_vec(&self.tau);
        for a in 0..4 {
            m[(0, a + 1)] = self.rho[a];
            m[(a + 1, 0)] = self.tau[a];
            m[(a + 1, 5)] = rt[a];
            m[(5, a + 1)] = tt[a];
            for b in 0..4 {
                m[(a + 1, b + 1)] = self.s[(a, b)];
            }
        }
        m
    }

    /// Reads the blocks back, checking membership in so(2,4).
    pub fn from_matrix(m: &Matrix6<f64>) -> Result<Self> {
        let sig = sigma_conf();
        if (m.transpose() * sig + sig * m).amax() > 1e-10 {
            return Err(Error::NotInAlgebra("so(2,4)"));
        }
        Ok(ConfAlgebraElement {
            eps: m[(0, 0)],
            s: m.fixed_view::<4, 4>(1, 1).into_owned(),
            tau: m.fixed_view::<4, 1>(1, 0).into_owned(),
            rho: m.fixed_view::<1, 4>(0, 1).into_owned(),
        })
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        let m = self.matrix();
        let sig = sigma_conf();
        (m.transpose() * sig + sig * m).amax() <= tol
    }
}

/// Element of su(2,2) in graded block form.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinAlgebraElement {
    pub eps: f64,
    pub s_bar: M2,
    pub tau_bar: M2,
    pub rho_bar: M2,
}

impl SpinAlgebraElement {
    /// `[[−(s̄∗ − ε/2), −iρ̄], [iτ̄, s̄ − ε/2]]`.
    pub fn matrix(&self) -> M4c {
        let h = M2::identity() * C64::from(self.eps / 2.0);
        let blocks = [
            -(self.s_bar.adjoint() - h),
            -self.rho_bar * I,
            self.tau_bar * I,
            self.s_bar - h,
        ];
        assemble4(&blocks)
    }
}

pub fn assemble4(b: &[M2; 4]) -> M4c {
    let mut m = M4c::zeros();
    for (k, blk) in b.iter().enumerate() {
        let (r0, c0) = [(0, 0), (0, 2), (2, 0), (2, 2)][k];
        m.fixed_view_mut::<2, 2>(r0, c0).copy_from(blk);
    }
    m
}

pub fn split4(m: &M4c) -> [M2; 4] {
    [(0, 0), (0, 2), (2, 0), (2, 2)].map(|(r, c)| m.fixed_view::<2, 2>(r, c).into_owned())
}

/// su(2,2) membership residual `‖M∗Σ̄ + Σ̄M‖_max` together with `|tr M|`.
pub fn su22_residual(m: &M4c) -> f64 {
    let s = sigma_spin();
    (m.adjoint() * s + s * m)
        .iter()
        .map(|c| c.norm())
        .fold(m.trace().norm(), f64::max)
}

/// The Lie algebra morphism so(2,4) → su(2,2).
pub fn algebra_morphism(xi: &ConfAlgebraElement) -> Result<SpinAlgebraElement> {
    if !xi.is_valid(1e-10) {
        return Err(Error::NotInAlgebra("so(2,4)"));
    }
    Ok(SpinAlgebraElement {
        eps: xi.eps,
        s_bar: sl2_of_so13(&xi.s),
        tau_bar: vec_to_herm(&xi.tau),
        rho_bar: covec_to_herm(&xi.rho),
    })
}

/// Element `K₀K₁` of the structure group `H ⊂ SO(2,4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureGroupElement {
    pub z: f64,
    pub s: Matrix4<f64>,
    pub r: RowVector4<f64>,
}

impl StructureGroupElement {
    /// `diag(z, S, z⁻¹) · [[1, r, ½rrᵗ], [0, 𝟙, rᵗ], [0, 0, 1]]`.
    pub fn matrix(&self) -> Matrix6<f64> {
        let mut k0 = Matrix6::zeros();
        k0[(0, 0)] = self.z;
        k0[(5, 5)] = 1.0 / self.z;
        k0.fixed_view_mut::<4, 4>(1, 1).copy_from(&self.s);
        let mut k1 = Matrix6::identity();
        let rt = eta_transpose_covec(&self.r);
        for a in 0..4 {
            k1[(0, a + 1)] = self.r[a];
            k1[(a + 1, 5)] = rt[a];
        }
        k1[(0, 5)] = 0.5 * (self.r * rt)[0];
        k0 * k1
    }

    /// Factorizes a 6×6 matrix of `H`.
    pub fn from_matrix(m: &Matrix6<f64>) -> Result<Self> {
        let sig = sigma_conf();
        if (m.transpose() * sig * m - sig).amax() > 1e-9 || m[(0, 0)] <= 0.0 {
            return Err(Error::NotInAlgebra("H"));
        }
        let z = m[(0, 0)];
        Ok(StructureGroupElement {
            z,
            s: m.fixed_view::<4, 4>(1, 1).into_owned(),
            r: m.fixed_view::<1, 4>(0, 1).into_owned() / z,
        })
    }
}

/// Element `K̄₀K̄₁` of `H̄ ⊂ SU(2,2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinStructureGroupElement {
    pub z: f64,
    pub s_bar: M2,
    pub r_bar: M2,
}

impl SpinStructureGroupElement {
    /// `diag(z^{1/2} S̄^{−1∗}, z^{−1/2} S̄) · [[𝟙, −ir̄], [0, 𝟙]]`.
    pub fn matrix(&self) -> M4c {
        self.k0() * self.k1()
    }

    pub fn k0(&self) -> M4c {
        let zh = C64::from(self.z.sqrt());
        let inv_adj = self
            .s_bar
            .try_inverse()
            .expect("S̄ is invertible")
            .adjoint();
        assemble4(&[inv_adj * zh, M2::zeros(), M2::zeros(), self.s_bar / zh])
    }

    pub fn k1(&self) -> M4c {
        assemble4(&[M2::identity(), -self.r_bar * I, M2::zeros(), M2::identity()])
    }
}

/// SU(2,2) membership residual of a group element, including `det − 1`.
pub fn su22_group_residual(m: &M4c) -> f64 {
    let s = sigma_spin();
    (m.adjoint() * s * m - s)
        .iter()
        .map(|c| c.norm())
        .fold((m.determinant() - ONE).norm(), f64::max)
}

/// The group morphism `H → H̄`, with the sign fixed by a positive real part
/// of the trace of the `K̄₀` factor (ties toward `+`).
pub fn group_morphism(h: &StructureGroupElement) -> Result<SpinStructureGroupElement> {
    if h.z <= 0.0 {
        return Err(Error::NotInAlgebra("H"));
    }
    let s_bar = sl2_of_lorentz(&h.s)?;
    let r_bar = covec_to_herm(&h.r);
    let mut out = SpinStructureGroupElement { z: h.z, s_bar, r_bar };
    if out.k0().trace().re < 0.0 {
        out.s_bar = -out.s_bar;
    }
    Ok(out)
}

/// `½ xᵃσₐ` for a vector of forms.
pub fn herm_of_vector_forms(v: &[Form; 4]) -> MatrixForm {
    pauli_combination(v, 0.5)
}

/// `rₐσₐ` for a covector of forms.
pub fn herm_of_covector_forms(r: &[Form; 4]) -> MatrixForm {
    pauli_combination(r, 1.0)
}

fn pauli_combination(v: &[Form; 4], scale: f64) -> MatrixForm {
    let mut entries = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Form::zero(v[0].degree(), v.iter().map(Form::order).min().unwrap());
            for (a, va) in v.iter().enumerate() {
                let c = sigma(a)[(i, j)] * scale;
                if c != ZERO {
                    acc = &acc + &va.scale(c);
                }
            }
            entries.push(acc);
        }
    }
    MatrixForm::from_entries(2, 2, entries).expect("2x2")
}

/// `xᵃ = tr(x̄σₐ)` for a Herm-valued form.
pub fn vector_forms_of_herm(m: &MatrixForm) -> [Form; 4] {
    std::array::from_fn(|a| trace_with_sigma(m, a, 1.0))
}

/// `rₐ = ½tr(r̄σₐ)` for a Herm-valued form.
pub fn covector_forms_of_herm(m: &MatrixForm) -> [Form; 4] {
    std::array::from_fn(|a| trace_with_sigma(m, a, 0.5))
}

fn trace_with_sigma(m: &MatrixForm, a: usize, scale: f64) -> Form {
    let s = sigma(a);
    let mut acc = Form::zero(m.degree(), m.order());
    for i in 0..2 {
        for j in 0..2 {
            let c = s[(j, i)] * scale;
            if c != ZERO {
                acc = &acc + &m.get(i, j).scale(c);
            }
        }
    }
    acc
}

/// so(1,3)-valued form image of an sl(2,ℂ)-valued form: entries
/// `s^a_b = tr(σₐ(s̄ σ_b/2 + σ_b/2 s̄∗))`.
pub fn so13_forms_of_sl2(sb: &MatrixForm) -> MatrixForm {
    let adj = sb.adjoint();
    let order = sb.order();
    let mut entries = Vec::with_capacity(16);
    for a in 0..4 {
        for b in 0..4 {
            let xb = MatrixForm::constant(&to_dyn(&(sigma(b) * C64::from(0.5))), order);
            let img = &(sb * &xb) + &(&xb * &adj);
            entries.push(trace_with_sigma(&img, a, 1.0));
        }
    }
    MatrixForm::from_entries(4, 4, entries).expect("4x4")
}

/// sl(2,ℂ)-valued form preimage of a real so(1,3)-valued form.
pub fn sl2_forms_of_so13(s: &MatrixForm) -> MatrixForm {
    let inv = &so13_sl2_tables().1;
    let idx = [(0, 1), (0, 2), (0, 3), (3, 2), (1, 3), (2, 1)];
    let order = s.order();
    let mut out = MatrixForm::zero(2, 2, s.degree(), order);
    for k in 0..6 {
        let mut coef = Form::zero(s.degree(), order);
        for (r, &(i, j)) in idx.iter().enumerate() {
            if inv[(k, r)] != 0.0 {
                coef = &coef + &s.get(i, j).scale(inv[(k, r)]);
            }
        }
        let b = sl2_basis(k);
        for i in 0..2 {
            for j in 0..2 {
                if b[(i, j)] != ZERO {
                    let e = out.get(i, j) + &coef.scale(b[(i, j)]);
                    out.set(i, j, e);
                }
            }
        }
    }
    out
}

pub fn to_dyn<const R: usize, const C: usize>(m: &SMatrix<C64, R, C>) -> nalgebra::DMatrix<C64> {
    nalgebra::DMatrix::from_fn(R, C, |i, j| m[(i, j)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vec_to_herm_examples() {
        let h = vec_to_herm(&Vector4::new(1.0, 0.0, 0.0, 0.0));
        assert!((h - M2::identity() * C64::from(0.5)).norm() < 1e-15);
        let h = vec_to_herm(&Vector4::new(0.0, 1.0, 0.0, 0.0));
        assert!((h - sigma(1) * C64::from(0.5)).norm() < 1e-15);
        let x = Vector4::new(2.0, 0.0, 0.0, 0.0);
        assert!((minkowski_norm2(&x) - 4.0 * vec_to_herm(&x).determinant().re).abs() < 1e-15);
    }

    #[test]
    fn covec_examples() {
        let r = eta_transpose_vec(&Vector4::new(1.0, 0.0, 0.0, 0.0));
        assert!((covec_to_herm(&r) - M2::identity()).norm() < 1e-15);
        let r = eta_transpose_vec(&Vector4::new(0.0, 0.0, 0.0, 1.0));
        let expect = M2::new(-ONE, ZERO, ZERO, ONE);
        assert!((covec_to_herm(&r) - expect).norm() < 1e-15);
    }

    #[test]
    fn bracket_of_translations_and_boosts() {
        let tau = vec_to_herm(&Vector4::new(1.0, 0.0, 0.0, 0.0));
        let rho = covec_to_herm(&RowVector4::new(1.0, 0.0, 0.0, 0.0));
        let t = assemble4(&[M2::zeros(), M2::zeros(), tau * I, M2::zeros()]);
        let r = assemble4(&[M2::zeros(), -rho * I, M2::zeros(), M2::zeros()]);
        let c = t * r - r * t;
        let b = split4(&c);
        let q = M2::identity() * C64::from(0.5);
        assert!((b[0] + q).norm() < 1e-15 && (b[3] - q).norm() < 1e-15);
        assert!((tau * rho).trace().re - 1.0 < 1e-15);
    }

    #[test]
    fn lorentz_identity_and_boost() {
        let l = lorentz_of_sl2(&M2::identity()).unwrap();
        assert!((l - Matrix4::identity()).amax() < 1e-15);
        let lam: f64 = 0.3;
        let s = M2::new(C64::from((lam / 2.0).exp()), ZERO, ZERO, C64::from((-lam / 2.0).exp()));
        let l = lorentz_of_sl2(&s).unwrap();
        assert!((l[(0, 0)] - lam.cosh()).abs() < 1e-14);
        assert!((l[(0, 3)] - lam.sinh()).abs() < 1e-14);
        assert!((l - lorentz_of_sl2(&-s).unwrap()).amax() < 1e-15);
    }

    #[test]
    fn non_unimodular_rejected() {
        let s = M2::identity() * C64::from(2.0);
        assert!(matches!(lorentz_of_sl2(&s), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn eps_only_image() {
        let xi = ConfAlgebraElement {
            eps: 0.7,
            s: Matrix4::zeros(),
            tau: Vector4::zeros(),
            rho: RowVector4::zeros(),
        };
        let m = algebra_morphism(&xi).unwrap().matrix();
        let h = C64::from(0.35);
        assert!((m - assemble4(&[M2::identity() * h, M2::zeros(), M2::zeros(), -M2::identity() * h])).norm() < 1e-15);
    }

    #[test]
    fn k1_group_image() {
        let h = StructureGroupElement {
            z: 1.0,
            s: Matrix4::identity(),
            r: eta_transpose_vec(&Vector4::new(1.0, 0.0, 0.0, 0.0)),
        };
        let m = group_morphism(&h).unwrap().matrix();
        let expect = assemble4(&[M2::identity(), -M2::identity() * I, M2::zeros(), M2::identity()]);
        assert!((m - expect).norm() < 1e-14);
    }

    #[test]
    fn so13_roundtrip() {
        for k in 0..6 {
            let s = so13_basis(k);
            assert!(is_so13(&s, 0.0));
            assert!((so13_of_sl2(&sl2_of_so13(&s)) - s).amax() < 1e-14);
        }
    }
}
