//! Scalar differential forms on the chart with jet coefficients.
//!
//! Components are stored only on strictly increasing index sets, encoded as
//! 4-bit masks (bit `μ` set ⇔ `dx^μ` present).

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::jet::{Jet, C64, DIM};

/// Bitmasks of all index sets of size `p`, in increasing numeric order.
pub fn masks(p: usize) -> &'static [u8] {
    const M0: [u8; 1] = [0b0000];
    const M1: [u8; 4] = [0b0001, 0b0010, 0b0100, 0b1000];
    const M2: [u8; 6] = [0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100];
    const M3: [u8; 4] = [0b0111, 0b1011, 0b1101, 0b1110];
    const M4: [u8; 1] = [0b1111];
    match p {
        0 => &M0,
        1 => &M1,
        2 => &M2,
        3 => &M3,
        4 => &M4,
        _ => &[],
    }
}

fn slot(mask: u8) -> usize {
    let p = mask.count_ones() as usize;
    masks(p).iter().position(|&m| m == mask).expect("valid mask")
}

/// Sign of `dx^A ∧ dx^B` relative to `dx^{A∪B}` for disjoint `A`, `B`.
pub fn merge_sign(a: u8, b: u8) -> f64 {
    let mut inversions = 0;
    for i in 0..DIM {
        if a & (1 << i) != 0 {
            inversions += (b & ((1u8 << i) - 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Mask and permutation sign of an index tuple, or `None` if it repeats.
pub fn sort_indices(idx: &[usize]) -> Option<(u8, f64)> {
    let mut mask = 0u8;
    let mut sign = 1.0;
    for (k, &i) in idx.iter().enumerate() {
        if mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
        for &j in &idx[..k] {
            if j > i {
                sign = -sign;
            }
        }
    }
    Some((mask, sign))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    degree: usize,
    comps: Vec<Jet>,
}

impl Form {
    pub fn zero(degree: usize, order: usize) -> Self {
        assert!(degree <= DIM);
        Form {
            degree,
            comps: vec![Jet::zero(order); masks(degree).len()],
        }
    }

    pub fn scalar(j: Jet) -> Self {
        Form {
            degree: 0,
            comps: vec![j],
        }
    }

    /// `f dx^μ`.
    pub fn one_form(mu: usize, f: Jet) -> Self {
        let mut out = Form::zero(1, f.order());
        out.comps[mu] = f;
        out
    }

    /// Builds a 1-form from its four coordinate components.
    pub fn from_one_form(comps: [Jet; 4]) -> Self {
        Form {
            degree: 1,
            comps: comps.to_vec(),
        }
    }

    /// Builds a form from components listed in [`masks`] order.
    pub fn from_comps(degree: usize, comps: Vec<Jet>) -> Self {
        assert_eq!(comps.len(), masks(degree).len());
        Form { degree, comps }
    }

    /// `f dx^{i₀} ∧ … ∧ dx^{i_k}` for an arbitrary (possibly unsorted) tuple.
    pub fn monomial(idx: &[usize], f: Jet) -> Self {
        let mut out = Form::zero(idx.len(), f.order());
        if let Some((mask, sign)) = sort_indices(idx) {
            out.comps[slot(mask)] = f.scale(sign);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Minimum jet order over all components.
    pub fn order(&self) -> usize {
        self.comps.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    pub fn comp_mask(&self, mask: u8) -> &Jet {
        &self.comps[slot(mask)]
    }

    /// Component on an arbitrary index tuple, antisymmetrically reconstructed.
    pub fn comp(&self, idx: &[usize]) -> Jet {
        assert_eq!(idx.len(), self.degree);
        match sort_indices(idx) {
            Some((mask, sign)) => self.comps[slot(mask)].scale(sign),
            None => Jet::zero(self.order()),
        }
    }

    pub fn map(&self, f: impl Fn(&Jet) -> Jet) -> Form {
        Form {
            degree: self.degree,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: impl Into<C64>) -> Form {
        let s = s.into();
        self.map(|j| j.scale(s))
    }

    /// Multiplication by a 0-form given as a jet.
    pub fn scale_jet(&self, s: &Jet) -> Form {
        self.map(|j| j * s)
    }

    pub fn conj(&self) -> Form {
        self.map(Jet::conj)
    }

    pub fn truncate(&self, order: usize) -> Form {
        self.map(|j| j.truncate(order))
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(Jet::max_abs).fold(0.0, f64::max)
    }

    /// Largest absolute value of a component at the expansion point.
    pub fn max_abs_value(&self) -> f64 {
        self.comps.iter().map(|j| j.value().norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Jet::is_zero)
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(Form {
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_wedge(&self, other: &Form) -> Result<Form> {
        let (p, q) = (self.degree, other.degree);
        if p + q > DIM {
            return Err(Error::DegreeOverflow(p, q));
        }
        let order = self.order().min(other.order());
        let mut out = Form::zero(p + q, order);
        for (i, &a) in masks(p).iter().enumerate() {
            if self.comps[i].is_zero() {
                continue;
            }
            for (j, &b) in masks(q).iter().enumerate() {
                if a & b != 0 || other.comps[j].is_zero() {
                    continue;
                }
                let prod = &self.comps[i] * &other.comps[j];
                let k = slot(a | b);
                if merge_sign(a, b) > 0.0 {
                    out.comps[k] += &prod;
                } else {
                    out.comps[k] -= &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Form) -> Form {
        self.try_wedge(other).expect("wedge degree overflow")
    }

    /// Exterior derivative in the coordinate coframe.
    pub fn d(&self) -> Result<Form> {
        let p = self.degree;
        if p >= DIM {
            return Err(Error::TopDegree);
        }
        let order = self.order();
        if order == 0 {
            return Err(Error::DerivativeExhausted);
        }
        let mut out = Form::zero(p + 1, order - 1);
        for (i, &a) in masks(p).iter().enumerate() {
            if self.comps[i].is_zero() {
                continue;
            }
            for mu in 0..DIM {
                let bit = 1u8 << mu;
                if a & bit != 0 {
                    continue;
                }
                let dj = self.comps[i].partial(mu)?;
                let k = slot(a | bit);
                if merge_sign(bit, a) > 0.0 {
                    out.comps[k] += &dj;
                } else {
                    out.comps[k] -= &dj;
                }
            }
        }
        Ok(out)
    }

    pub fn distance(&self, other: &Form) -> f64 {
        (self - other).max_abs()
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).expect("form degree mismatch")
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.try_add(&-rhs).expect("form degree mismatch")
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.map(|j| -j)
    }
}

impl Mul for &Form {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        self.wedge(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Form {
            type Output = Form;
            fn $m(self, rhs: Form) -> Form {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Form> for Form {
            type Output = Form;
            fn $m(self, rhs: &Form) -> Form {
                (&self).$m(rhs)
            }
        }
        impl $tr<Form> for &Form {
            type Output = Form;
            fn $m(self, rhs: Form) -> Form {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(p: [f64; 4], k: usize) -> [Jet; 4] {
        std::array::from_fn(|m| Jet::variable(m, p[m], k))
    }

    #[test]
    fn d_of_x0_dx1() {
        let x = coords([0.1, 0.2, 0.3, 0.4], 3);
        let a = Form::one_form(1, x[0].clone());
        let da = a.d().unwrap();
        let expect = Form::monomial(&[0, 1], Jet::constant(1.0, 2));
        assert!(da.distance(&expect) < 1e-15);
    }

    #[test]
    fn leibniz_on_monomial() {
        let x = coords([0.3, -0.2, 0.1, 0.0], 3);
        let a = Form::one_form(0, &x[1] * &x[2]);
        let da = a.d().unwrap();
        let expect = Form::monomial(&[1, 0], x[2].clone()) + Form::monomial(&[2, 0], x[1].clone());
        assert!(da.distance(&expect) < 1e-14);
    }

    #[test]
    fn antisymmetry() {
        let one = Jet::constant(1.0, 2);
        let a = Form::one_form(0, one.clone());
        let b = Form::one_form(1, one);
        assert!((a.wedge(&b) + b.wedge(&a)).max_abs() < 1e-15);
    }

    #[test]
    fn dd_zero() {
        let x = coords([0.2, 0.1, -0.3, 0.25], 4);
        let f = Form::scalar((&x[0] * &x[3]).exp());
        let ddf = f.d().unwrap().d().unwrap();
        assert!(ddf.max_abs() < 1e-12);
    }

    #[test]
    fn top_degree_error() {
        let f = Form::zero(4, 3);
        assert_eq!(f.d(), Err(Error::TopDegree));
    }

    #[test]
    fn comp_reconstruction() {
        let f = Form::monomial(&[2, 0], Jet::constant(3.0, 1));
        assert!((f.comp(&[0, 2]).value().re + 3.0).abs() < 1e-15);
        assert!((f.comp(&[2, 0]).value().re - 3.0).abs() < 1e-15);
    }
}
