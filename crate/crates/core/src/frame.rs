//! Vierbein fields and their jets at a sample point.

use crate::error::{Error, Result};
use crate::field::{Point, ScalarField};
use crate::form::{masks, Form};
use crate::jet::{Jet, ONE, ZERO};
use crate::matrix_form::MatrixForm;
use crate::spin_iso::{herm_of_vector_forms, ETA};

/// A vierbein `eᵃ_μ` given as sixteen scalar fields (row `a`, column `μ`).
#[derive(Clone, Debug)]
pub struct Vierbein {
    pub e: [[ScalarField; 4]; 4],
}

impl Vierbein {
    pub fn identity() -> Self {
        Vierbein {
            e: std::array::from_fn(|a| {
                std::array::from_fn(|mu| ScalarField::constant(if a == mu { 1.0 } else { 0.0 }))
            }),
        }
    }

    /// Diagonal vierbein from four fields.
    pub fn diagonal(d: [ScalarField; 4]) -> Self {
        let mut v = Vierbein::identity();
        for (a, f) in d.into_iter().enumerate() {
            v.e[a][a] = f;
        }
        v
    }

    /// The rescaled vierbein `z·e`.
    pub fn rescaled(&self, z: &ScalarField) -> Self {
        Vierbein {
            e: std::array::from_fn(|a| std::array::from_fn(|mu| self.e[a][mu].mul(z))),
        }
    }

    pub fn at(&self, p: &Point, order: usize) -> Result<Frame> {
        let mut jets = Vec::with_capacity(16);
        for row in &self.e {
            for f in row {
                jets.push(f.jet(p, order)?);
            }
        }
        Frame::from_e(MatrixForm::from_jets(4, 4, jets))
    }
}

/// Jets of a vierbein and derived objects at one point.
#[derive(Clone, Debug)]
pub struct Frame {
    /// `eᵃ_μ`, rows `a`.
    pub e: MatrixForm,
    /// `E^μ_a`, rows `μ`.
    pub e_inv: MatrixForm,
    /// `θᵃ = eᵃ_μ dx^μ`.
    pub theta: [Form; 4],
    /// `θ̄ = ½ θᵃσₐ`.
    pub theta_bar: MatrixForm,
}

impl Frame {
    pub fn from_e(e: MatrixForm) -> Result<Self> {
        let v = e.value_matrix();
        let scale = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if v.determinant().norm() < 1e-12 * scale.powi(4).max(1e-300) {
            return Err(Error::DegenerateFrame);
        }
        let e_inv = e.inverse().map_err(|_| Error::DegenerateFrame)?;
        let theta: [Form; 4] = std::array::from_fn(|a| {
            let comps: [Jet; 4] = std::array::from_fn(|mu| e.get(a, mu).comps()[0].clone());
            Form::from_one_form(comps)
        });
        let theta_bar = herm_of_vector_forms(&theta);
        Ok(Frame {
            e,
            e_inv,
            theta,
            theta_bar,
        })
    }

    pub fn order(&self) -> usize {
        self.e.order()
    }

    pub fn e_jet(&self, a: usize, mu: usize) -> &Jet {
        &self.e.get(a, mu).comps()[0]
    }

    pub fn e_inv_jet(&self, mu: usize, a: usize) -> &Jet {
        &self.e_inv.get(mu, a).comps()[0]
    }

    /// `g_μν = eᵃ_μ η_ab eᵇ_ν`.
    pub fn metric(&self) -> [[Jet; 4]; 4] {
        std::array::from_fn(|mu| {
            std::array::from_fn(|nu| {
                (0..4).fold(Jet::zero(self.order()), |acc, a| {
                    acc + (self.e_jet(a, mu) * self.e_jet(a, nu)).scale(ETA[a])
                })
            })
        })
    }

    /// Components of a coordinate-basis form in the coframe `θᵃ`.
    pub fn to_frame(&self, f: &Form) -> Form {
        transform(f, |mu, a| self.e_inv_jet(mu, a).clone())
    }

    /// Coordinate components of a form given in the coframe `θᵃ`.
    pub fn from_frame(&self, f: &Form) -> Form {
        transform(f, |a, mu| self.e_jet(a, mu).clone())
    }

    /// Entrywise [`Frame::to_frame`].
    pub fn matrix_to_frame(&self, m: &MatrixForm) -> MatrixForm {
        m.map(|f| self.to_frame(f))
    }

    pub fn matrix_from_frame(&self, m: &MatrixForm) -> MatrixForm {
        m.map(|f| self.from_frame(f))
    }
}

/// Change of coframe: `out_A = Σ_M f_M det(T[M, A])` where `T[i][j]` maps
/// old index `i` to new index `j`.
fn transform(f: &Form, t: impl Fn(usize, usize) -> Jet) -> Form {
    let p = f.degree();
    let table: Vec<Vec<Jet>> = (0..4).map(|i| (0..4).map(|j| t(i, j)).collect()).collect();
    let order = f.order().min(table[0][0].order());
    let comps = masks(p)
        .iter()
        .map(|&a| {
            let cols = bits(a);
            let mut acc = Jet::zero(order);
            for (k, &m) in masks(p).iter().enumerate() {
                let fc = &f.comps()[k];
                if fc.is_zero() {
                    continue;
                }
                let rows = bits(m);
                acc += &(fc * &minor_det(&table, &rows, &cols, order));
            }
            acc
        })
        .collect();
    Form::from_comps(p, comps)
}

fn bits(mask: u8) -> Vec<usize> {
    (0..4).filter(|i| mask & (1 << i) != 0).collect()
}

fn minor_det(t: &[Vec<Jet>], rows: &[usize], cols: &[usize], order: usize) -> Jet {
    match rows.len() {
        0 => Jet::constant(ONE, order),
        1 => t[rows[0]][cols[0]].clone(),
        n => {
            let mut acc = Jet::constant(ZERO, order);
            for (k, &c) in cols.iter().enumerate() {
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = &t[rows[0]][c] * &minor_det(t, &rows[1..n], &sub_cols, order);
                if k % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bumpy() -> Vierbein {
        let x = |m| ScalarField::coordinate(m);
        let one = ScalarField::constant(1.0);
        let mut v = Vierbein::identity();
        v.e[0][0] = one.add(&x(1).mul(&x(2)).scale(0.05));
        v.e[1][1] = one.add(&x(0).mul(&x(3)).scale(0.05));
        v.e[3][3] = one.add(&x(0).mul(&x(1)).scale(0.05));
        v.e[2][1] = x(3).scale(0.1);
        v
    }

    #[test]
    fn frame_roundtrip() {
        let fr = bumpy().at(&[0.2, -0.3, 0.1, 0.4], 3).unwrap();
        let f = Form::monomial(&[0, 2], Jet::variable(1, -0.3, 3)) + Form::monomial(&[1, 3], Jet::constant(2.0, 3));
        let back = fr.from_frame(&fr.to_frame(&f));
        assert!(back.distance(&f) < 1e-13);
        let th = fr.to_frame(&fr.theta[2]);
        assert!((th.comp(&[2]).value() - ONE).norm() < 1e-14);
        assert!(th.comp(&[1]).max_abs() < 1e-14);
    }

    #[test]
    fn degenerate_rejected() {
        let mut v = Vierbein::identity();
        v.e[2][2] = ScalarField::constant(0.0);
        assert!(matches!(v.at(&[0.0; 4], 2), Err(Error::DegenerateFrame)));
    }
}
