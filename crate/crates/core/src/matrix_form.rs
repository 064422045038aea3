//! Matrices of differential forms of a common degree.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::form::Form;
use crate::jet::{Jet, C64, ONE, ZERO};

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixForm {
    rows: usize,
    cols: usize,
    degree: usize,
    entries: Vec<Form>,
}

impl MatrixForm {
    pub fn zero(rows: usize, cols: usize, degree: usize, order: usize) -> Self {
        MatrixForm {
            rows,
            cols,
            degree,
            entries: vec![Form::zero(degree, order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: usize) -> Self {
        let mut m = MatrixForm::zero(n, n, 0, order);
        for i in 0..n {
            m.entries[i * n + i] = Form::scalar(Jet::constant(ONE, order));
        }
        m
    }

    /// Row-major construction; all entries must share a degree.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Form>) -> Result<Self> {
        if entries.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let degree = entries[0].degree();
        if let Some(e) = entries.iter().find(|e| e.degree() != degree) {
            return Err(Error::DegreeMismatch(degree, e.degree()));
        }
        Ok(MatrixForm {
            rows,
            cols,
            degree,
            entries,
        })
    }

    /// Degree-0 matrix from jets.
    pub fn from_jets(rows: usize, cols: usize, jets: Vec<Jet>) -> Self {
        MatrixForm::from_entries(rows, cols, jets.into_iter().map(Form::scalar).collect())
            .expect("consistent dimensions")
    }

    /// Constant degree-0 matrix.
    pub fn constant(m: &DMatrix<C64>, order: usize) -> Self {
        let jets = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| Jet::constant(m[(i, j)], order))
            .collect();
        MatrixForm::from_jets(m.nrows(), m.ncols(), jets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.entries.iter().map(Form::order).min().unwrap_or(0)
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) {
        assert_eq!(f.degree(), self.degree);
        self.entries[i * self.cols + j] = f;
    }

    pub fn entries(&self) -> &[Form] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> MatrixForm {
        let entries: Vec<Form> = self.entries.iter().map(f).collect();
        let degree = entries.first().map(Form::degree).unwrap_or(self.degree);
        MatrixForm {
            rows: self.rows,
            cols: self.cols,
            degree,
            entries,
        }
    }

    pub fn scale(&self, s: impl Into<C64>) -> MatrixForm {
        let s = s.into();
        self.map(|f| f.scale(s))
    }

    pub fn scale_jet(&self, s: &Jet) -> MatrixForm {
        self.map(|f| f.scale_jet(s))
    }

    /// Entrywise wedge with a scalar form placed on the left.
    pub fn lmul_form(&self, f: &Form) -> MatrixForm {
        self.map(|e| f.wedge(e))
    }

    pub fn truncate(&self, order: usize) -> MatrixForm {
        self.map(|f| f.truncate(order))
    }

    pub fn conj(&self) -> MatrixForm {
        self.map(Form::conj)
    }

    /// Conjugate transpose `M∗` (entrywise complex conjugation, no reordering
    /// of form factors).
    pub fn adjoint(&self) -> MatrixForm {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).conj());
            }
        }
        MatrixForm {
            rows: self.cols,
            cols: self.rows,
            degree: self.degree,
            entries,
        }
    }

    pub fn transpose(&self) -> MatrixForm {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        MatrixForm {
            rows: self.cols,
            cols: self.rows,
            degree: self.degree,
            entries,
        }
    }

    pub fn trace(&self) -> Form {
        let n = self.rows.min(self.cols);
        let mut t = Form::zero(self.degree, self.order());
        for i in 0..n {
            t = &t + self.get(i, i);
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(Form::max_abs).fold(0.0, f64::max)
    }

    /// Largest entry-component magnitude at the expansion point.
    pub fn max_abs_value(&self) -> f64 {
        self.entries
            .iter()
            .map(Form::max_abs_value)
            .fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &MatrixForm) -> f64 {
        (self - other).max_abs()
    }

    /// Distance of the values at the expansion point only.
    pub fn value_distance(&self, other: &MatrixForm) -> f64 {
        (self - other).max_abs_value()
    }

    pub fn try_add(&self, other: &MatrixForm) -> Result<MatrixForm> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixForm {
            rows: self.rows,
            cols: self.cols,
            degree: self.degree,
            entries,
        })
    }

    /// Matrix product with entries combined by the wedge product.
    pub fn try_mul(&self, other: &MatrixForm) -> Result<MatrixForm> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.degree + other.degree > 4 {
            return Err(Error::DegreeOverflow(self.degree, other.degree));
        }
        let order = self.order().min(other.order());
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Form::zero(self.degree + other.degree, order);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &a.wedge(b);
                }
                entries.push(acc);
            }
        }
        Ok(MatrixForm {
            rows: self.rows,
            cols: other.cols,
            degree: self.degree + other.degree,
            entries,
        })
    }

    /// Graded commutator `[A, B] = AB − (−1)^{pq} BA`.
    pub fn commutator(&self, other: &MatrixForm) -> MatrixForm {
        let ab = self * other;
        let ba = other * self;
        if (self.degree * other.degree) % 2 == 0 {
            ab - ba
        } else {
            ab + ba
        }
    }

    pub fn d(&self) -> Result<MatrixForm> {
        let entries = self
            .entries
            .iter()
            .map(Form::d)
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixForm {
            rows: self.rows,
            cols: self.cols,
            degree: self.degree + 1,
            entries,
        })
    }

    /// Sub-block `[r0, r0+nr) × [c0, c0+nc)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> MatrixForm {
        let mut entries = Vec::with_capacity(nr * nc);
        for i in 0..nr {
            for j in 0..nc {
                entries.push(self.get(r0 + i, c0 + j).clone());
            }
        }
        MatrixForm {
            rows: nr,
            cols: nc,
            degree: self.degree,
            entries,
        }
    }

    /// Assembles `[[a, b], [c, d]]` from equally sized square blocks.
    pub fn from_blocks(a: &MatrixForm, b: &MatrixForm, c: &MatrixForm, d: &MatrixForm) -> Self {
        let n = a.rows;
        let mut m = MatrixForm::zero(2 * n, 2 * n, a.degree, 0);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, n), (c, n, 0), (d, n, n)] {
            assert_eq!((blk.rows, blk.cols), (n, n));
            assert_eq!(blk.degree, a.degree);
            for i in 0..n {
                for j in 0..n {
                    m.entries[(r0 + i) * 2 * n + c0 + j] = blk.get(i, j).clone();
                }
            }
        }
        m
    }

    /// The four `n×n` blocks of a `2n×2n` matrix: (upper-left, upper-right,
    /// lower-left, lower-right).
    pub fn blocks(&self) -> [MatrixForm; 4] {
        let n = self.rows / 2;
        [
            self.block(0, 0, n, n),
            self.block(0, n, n, n),
            self.block(n, 0, n, n),
            self.block(n, n, n, n),
        ]
    }

    /// Inverse of a degree-0 square matrix of jets by Gaussian elimination
    /// with partial pivoting on the constant terms.
    pub fn inverse(&self) -> Result<MatrixForm> {
        if self.degree != 0 || self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square or non-scalar matrix".into()));
        }
        let n = self.rows;
        let order = self.order();
        let mut a: Vec<Vec<Jet>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).comps()[0].clone()).collect())
            .collect();
        let mut inv: Vec<Vec<Jet>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Jet::constant(if i == j { ONE } else { ZERO }, order))
                    .collect()
            })
            .collect();
        let scale = a
            .iter()
            .flatten()
            .map(|j| j.value().norm())
            .fold(0.0, f64::max)
            .max(1e-300);
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[x][col].value().norm().total_cmp(&a[y][col].value().norm()))
                .unwrap();
            if a[piv][col].value().norm() < 1e-13 * scale {
                return Err(Error::Singular);
            }
            a.swap(col, piv);
            inv.swap(col, piv);
            let r = a[col][col].recip()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &r;
                inv[col][j] = &inv[col][j] * &r;
            }
            for row in 0..n {
                if row == col || a[row][col].is_zero() {
                    continue;
                }
                let f = a[row][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[row][j] -= &t;
                    let t = &f * &inv[col][j];
                    inv[row][j] -= &t;
                }
            }
        }
        Ok(MatrixForm::from_jets(n, n, inv.into_iter().flatten().collect()))
    }

    /// Matrix exponential of a degree-0 square matrix by scaling and
    /// squaring of the Taylor series.
    pub fn exp(&self) -> Result<MatrixForm> {
        if self.degree != 0 || self.rows != self.cols {
            return Err(Error::DimensionMismatch("exp of non-square or non-scalar matrix".into()));
        }
        let norm = self.max_abs_value() * self.rows as f64;
        let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as u32 } else { 0 };
        let x = self.scale(0.5f64.powi(squarings as i32));
        let mut term = MatrixForm::identity(self.rows, self.order());
        let mut acc = term.clone();
        for k in 1..=24 {
            term = (&term * &x).scale(1.0 / k as f64);
            acc = &acc + &term;
        }
        for _ in 0..squarings {
            acc = &acc * &acc;
        }
        Ok(acc)
    }

    /// Values of a degree-0 matrix at the expansion point.
    pub fn value_matrix(&self) -> DMatrix<C64> {
        assert_eq!(self.degree, 0);
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).comps()[0].value())
    }

    /// Values of the `dx^{mask}` component of every entry at the expansion
    /// point.
    pub fn component_matrix(&self, mask: u8) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).comp_mask(mask).value())
    }
}

impl Add for &MatrixForm {
    type Output = MatrixForm;
    fn add(self, rhs: &MatrixForm) -> MatrixForm {
        self.try_add(rhs).expect("matrix form mismatch")
    }
}

impl Sub for &MatrixForm {
    type Output = MatrixForm;
    fn sub(self, rhs: &MatrixForm) -> MatrixForm {
        self.try_add(&-rhs).expect("matrix form mismatch")
    }
}

impl Mul for &MatrixForm {
    type Output = MatrixForm;
    fn mul(self, rhs: &MatrixForm) -> MatrixForm {
        self.try_mul(rhs).expect("matrix form mismatch")
    }
}

impl Neg for &MatrixForm {
    type Output = MatrixForm;
    fn neg(self) -> MatrixForm {
        self.map(|f| -f)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MatrixForm {
            type Output = MatrixForm;
            fn $m(self, rhs: MatrixForm) -> MatrixForm {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MatrixForm> for MatrixForm {
            type Output = MatrixForm;
            fn $m(self, rhs: &MatrixForm) -> MatrixForm {
                (&self).$m(rhs)
            }
        }
        impl $tr<MatrixForm> for &MatrixForm {
            type Output = MatrixForm;
            fn $m(self, rhs: MatrixForm) -> MatrixForm {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MatrixForm {
    type Output = MatrixForm;
    fn neg(self) -> MatrixForm {
        -&self
    }
}
