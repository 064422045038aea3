//! Matrices of forms with coefficients in a Grassmann algebra of ghost
//! generators. Elements are written `Σ_S ξ_S M_S` with the generators on
//! the left; signs follow the total (form + ghost) degree.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix_form::MatrixForm;

/// Number of generators supported by the bitmask representation.
pub const MAX_GENERATORS: usize = 16;

/// Highest ghost degree kept.
pub const GHOST_CAP: u32 = 3;

/// Sign of `ξ_S ξ_T = ±ξ_{S∪T}`, or `None` when the sets overlap.
pub fn merge_sign(s: u16, t: u16) -> Option<f64> {
    if s & t != 0 {
        return None;
    }
    // Each generator of T passes every generator of S with a larger index.
    let mut swaps = 0;
    let mut rest = t;
    while rest != 0 {
        let g = rest.trailing_zeros();
        swaps += (s >> (g + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps % 2 == 0 { 1.0 } else { -1.0 })
}

#[derive(Clone, Debug)]
pub struct Grassmann {
    rows: usize,
    cols: usize,
    degree: usize,
    order: usize,
    terms: BTreeMap<u16, MatrixForm>,
}

impl Grassmann {
    pub fn zero(rows: usize, cols: usize, degree: usize, order: usize) -> Self {
        Grassmann { rows, cols, degree, order, terms: BTreeMap::new() }
    }

    /// Ghost-degree-zero element.
    pub fn scalar(m: MatrixForm) -> Self {
        Grassmann::monomial(0, m)
    }

    /// `ξ_S M`.
    pub fn monomial(mask: u16, m: MatrixForm) -> Self {
        let mut out = Grassmann::zero(m.rows(), m.cols(), m.degree(), m.order());
        out.terms.insert(mask, m);
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Form degree.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Highest ghost degree present.
    pub fn ghost_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u16, &MatrixForm)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coefficient(&self, mask: u16) -> MatrixForm {
        self.terms
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| MatrixForm::zero(self.rows, self.cols, self.degree, self.order))
    }

    fn insert_add(&mut self, mask: u16, m: MatrixForm) {
        match self.terms.get_mut(&mask) {
            Some(acc) => *acc = &*acc + &m,
            None => {
                self.terms.insert(mask, m);
            }
        }
    }

    pub fn try_add(&self, other: &Grassmann) -> Result<Grassmann> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("grassmann shapes differ".into()));
        }
        if self.degree != other.degree && !self.terms.is_empty() && !other.terms.is_empty() {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = if self.terms.is_empty() { other.clone() } else { self.clone() };
        out.order = self.order.min(other.order);
        if !self.terms.is_empty() {
            for (k, v) in &other.terms {
                out.insert_add(*k, v.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: impl Into<crate::jet::C64>) -> Grassmann {
        let s = s.into();
        self.map(|m| m.scale(s))
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&MatrixForm) -> MatrixForm) -> Grassmann {
        let mut out = Grassmann::zero(self.rows, self.cols, self.degree, self.order);
        for (k, v) in &self.terms {
            let m = f(v);
            out.rows = m.rows();
            out.cols = m.cols();
            out.degree = m.degree();
            out.terms.insert(*k, m);
        }
        out
    }

    /// `(ξ_S A)(ξ_T B) = (−1)^{deg(A)|T|} ξ_Sξ_T AB`.
    pub fn try_mul(&self, other: &Grassmann) -> Result<Grassmann> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("grassmann product shapes".into()));
        }
        let mut out = Grassmann::zero(self.rows, other.cols, self.degree + other.degree, self.order.min(other.order));
        if out.degree > 4 {
            return Ok(out);
        }
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let Some(sign) = merge_sign(*s, *t) else { continue };
                let mask = s | t;
                if mask.count_ones() > GHOST_CAP {
                    return Err(Error::GhostOverflow);
                }
                let sign = if (a.degree() * t.count_ones() as usize) % 2 == 1 { -sign } else { sign };
                out.insert_add(mask, a.try_mul(b)?.scale(sign));
            }
        }
        Ok(out)
    }

    /// `d(ξ_S M) = (−1)^{|S|} ξ_S dM`.
    pub fn d(&self) -> Result<Grassmann> {
        let mut out = Grassmann::zero(self.rows, self.cols, self.degree + 1, self.order.saturating_sub(1));
        for (k, v) in &self.terms {
            let sign = if k.count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out.terms.insert(*k, v.d()?.scale(sign));
        }
        Ok(out)
    }

    /// Graded commutator `[α, β] = αβ − (−1)^{|α||β|}βα` in total degree,
    /// for homogeneous arguments.
    pub fn commutator(&self, other: &Grassmann) -> Result<Grassmann> {
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        let p = self.degree + self.ghost_degree() as usize;
        let q = other.degree + other.ghost_degree() as usize;
        let sign = if (p * q) % 2 == 1 { 1.0 } else { -1.0 };
        ab.try_add(&ba.scale(sign))
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(MatrixForm::max_abs).fold(0.0, f64::max)
    }

    pub fn max_abs_value(&self) -> f64 {
        self.terms.values().map(MatrixForm::max_abs_value).fold(0.0, f64::max)
    }

    /// Largest coefficient difference at the expansion point.
    pub fn value_distance(&self, other: &Grassmann) -> f64 {
        (self - other).max_abs_value()
    }

    pub fn distance(&self, other: &Grassmann) -> f64 {
        (self - other).max_abs()
    }

    /// Sub-block of every coefficient.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Grassmann {
        let mut out = self.map(|m| m.block(r0, c0, nr, nc));
        out.rows = nr;
        out.cols = nc;
        out
    }

    /// Restriction to masks selected by `keep`.
    pub fn filter(&self, keep: impl Fn(u16) -> bool) -> Grassmann {
        let mut out = self.clone();
        out.terms.retain(|k, _| keep(*k));
        out
    }
}

impl std::ops::Add for &Grassmann {
    type Output = Grassmann;
    fn add(self, rhs: &Grassmann) -> Grassmann {
        self.try_add(rhs).expect("grassmann mismatch")
    }
}

impl std::ops::Sub for &Grassmann {
    type Output = Grassmann;
    fn sub(self, rhs: &Grassmann) -> Grassmann {
        self.try_add(&-rhs).expect("grassmann mismatch")
    }
}

impl std::ops::Neg for &Grassmann {
    type Output = Grassmann;
    fn neg(self) -> Grassmann {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for &Grassmann {
    type Output = Grassmann;
    fn mul(self, rhs: &Grassmann) -> Grassmann {
        self.try_mul(rhs).expect("grassmann mismatch")
    }
}
