//! Hodge star on 2-forms for the metric `g = eᵀηe`.

use crate::error::{Error, Result};
use crate::form::{masks, Form};
use crate::frame::Frame;
use crate::jet::Jet;
use crate::matrix_form::MatrixForm;
use crate::spin_iso::ETA;

/// `ε_{abcd}` with `ε₀₁₂₃ = +1`.
pub fn levi_civita(idx: [usize; 4]) -> f64 {
    match crate::form::sort_indices(&idx) {
        Some((_, s)) => s,
        None => 0.0,
    }
}

/// `∗` on frame components: `(∗α)_{cd} = ½ α^{ab} ε_{abcd}`.
pub fn hodge_frame(alpha: &Form) -> Result<Form> {
    if alpha.degree() != 2 {
        return Err(Error::DegreeMismatch(alpha.degree(), 2));
    }
    let order = alpha.order();
    let comps = masks(2)
        .iter()
        .map(|&cd| {
            let (c, d) = pair(cd);
            let mut acc = Jet::zero(order);
            for &ab in masks(2) {
                let (a, b) = pair(ab);
                let eps = levi_civita([a, b, c, d]);
                if eps != 0.0 {
                    acc += &alpha.comp_mask(ab).scale(eps * ETA[a] * ETA[b]);
                }
            }
            acc
        })
        .collect();
    Ok(Form::from_comps(2, comps))
}

fn pair(mask: u8) -> (usize, usize) {
    let mut it = (0..4).filter(|i| mask & (1 << i) != 0);
    (it.next().unwrap(), it.next().unwrap())
}

/// `∗` on a coordinate-basis 2-form.
pub fn hodge_star(alpha: &Form, frame: &Frame) -> Result<Form> {
    Ok(frame.from_frame(&hodge_frame(&frame.to_frame(alpha))?))
}

/// Entrywise Hodge star of a matrix-valued 2-form.
pub fn hodge_matrix(m: &MatrixForm, frame: &Frame) -> Result<MatrixForm> {
    let entries = m
        .entries()
        .iter()
        .map(|f| hodge_star(f, frame))
        .collect::<Result<Vec<_>>>()?;
    MatrixForm::from_entries(m.rows(), m.cols(), entries)
}

/// Coefficient of `dx⁰∧dx¹∧dx²∧dx³` in a 4-form.
pub fn top_coefficient(f: &Form) -> Jet {
    f.comp_mask(0b1111).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Vierbein;

    #[test]
    fn flat_dx0_dx1() {
        let fr = Vierbein::identity().at(&[0.0; 4], 2).unwrap();
        let a = Form::monomial(&[0, 1], Jet::constant(1.0, 2));
        let s = hodge_star(&a, &fr).unwrap();
        let expect = Form::monomial(&[2, 3], Jet::constant(-1.0, 2));
        assert!(s.distance(&expect) < 1e-15);
    }

    #[test]
    fn double_star_is_minus_identity() {
        let fr = Vierbein::identity().at(&[0.0; 4], 1).unwrap();
        for &m in masks(2) {
            let a = Form::from_comps(2, masks(2).iter().map(|&k| Jet::constant(if k == m { 1.0 } else { 0.0 }, 1)).collect());
            let ss = hodge_star(&hodge_star(&a, &fr).unwrap(), &fr).unwrap();
            assert!((ss + a).max_abs() < 1e-15);
        }
    }
}
