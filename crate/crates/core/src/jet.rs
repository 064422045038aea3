//! Truncated multivariate Taylor expansions ("jets") in the four chart
//! coordinates.
//!
//! A jet of order `K` stores the coefficients `c_α = ∂^α f(x₀) / α!` for every
//! multi-index `α` with `|α| ≤ K`. Monomials are laid out in graded order, so
//! the order-`k` truncation of a jet is a prefix of its coefficient vector.
//! Binary operations on jets of different orders truncate to the smaller one.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Number of chart coordinates.
pub const DIM: usize = 4;
/// Largest supported jet order.
pub const MAX_ORDER: usize = 8;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub type MultiIndex = [u8; DIM];

struct Tables {
    monos: Vec<MultiIndex>,
    /// `len[k]` = number of monomials of degree ≤ k.
    len: Vec<usize>,
    /// For every order `k`, the triples `(i, j, i⊕j)` with `|α_i| + |α_j| ≤ k`.
    products: Vec<Vec<(u32, u32, u32)>>,
    /// For every direction, `(source, target, factor)` with
    /// `target = source - e_μ` and `factor = α_μ(source)`.
    partials: [Vec<(u32, u32, f64)>; DIM],
}

fn degree(m: &MultiIndex) -> usize {
    m.iter().map(|&a| a as usize).sum()
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut monos = Vec::new();
        let mut len = Vec::with_capacity(MAX_ORDER + 1);
        for d in 0..=MAX_ORDER {
            let mut layer = Vec::new();
            for a in 0..=d {
                for b in 0..=d - a {
                    for c in 0..=d - a - b {
                        let e = d - a - b - c;
                        layer.push([a as u8, b as u8, c as u8, e as u8]);
                    }
                }
            }
            layer.sort_by(|x, y| y.cmp(x));
            monos.extend(layer);
            len.push(monos.len());
        }
        let lookup = |m: &MultiIndex| -> Option<usize> {
            let d = degree(m);
            if d > MAX_ORDER {
                return None;
            }
            let start = if d == 0 { 0 } else { len[d - 1] };
            monos[start..len[d]].iter().position(|x| x == m).map(|p| p + start)
        };
        let mut products = Vec::with_capacity(MAX_ORDER + 1);
        for k in 0..=MAX_ORDER {
            let mut triples = Vec::new();
            for i in 0..len[k] {
                for j in 0..len[k - degree(&monos[i])] {
                    let mut s = monos[i];
                    for (t, v) in s.iter_mut().zip(monos[j].iter()) {
                        *t += v;
                    }
                    let target = lookup(&s).expect("monomial in table");
                    triples.push((i as u32, j as u32, target as u32));
                }
            }
            products.push(triples);
        }
        let partials = std::array::from_fn(|mu| {
            let mut v = Vec::new();
            for (src, m) in monos.iter().enumerate() {
                if m[mu] > 0 {
                    let mut t = *m;
                    t[mu] -= 1;
                    let tgt = lookup(&t).expect("monomial in table");
                    v.push((src as u32, tgt as u32, m[mu] as f64));
                }
            }
            v
        });
        Tables {
            monos,
            len,
            products,
            partials,
        }
    })
}

/// Number of Taylor coefficients of an order-`k` jet.
pub fn coeff_count(order: usize) -> usize {
    tables().len[order]
}

/// Position of a multi-index in the graded layout.
pub fn mono_index(alpha: MultiIndex) -> Option<usize> {
    let t = tables();
    let d = degree(&alpha);
    if d > MAX_ORDER {
        return None;
    }
    let start = if d == 0 { 0 } else { t.len[d - 1] };
    t.monos[start..t.len[d]]
        .iter()
        .position(|x| *x == alpha)
        .map(|p| p + start)
}

/// Multi-index stored at position `i`.
pub fn mono_at(i: usize) -> MultiIndex {
    tables().monos[i]
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    coeffs: Vec<C64>,
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        Jet {
            order,
            coeffs: vec![ZERO; coeff_count(order)],
        }
    }

    pub fn constant(value: impl Into<C64>, order: usize) -> Self {
        let mut j = Jet::zero(order);
        j.coeffs[0] = value.into();
        j
    }

    /// The coordinate function `x^μ` expanded at a point whose `μ`-th
    /// coordinate is `at`.
    pub fn variable(mu: usize, at: f64, order: usize) -> Self {
        let mut j = Jet::constant(at, order);
        if order >= 1 {
            let mut e = [0u8; DIM];
            e[mu] = 1;
            j.coeffs[mono_index(e).unwrap()] = ONE;
        }
        j
    }

    pub fn from_coeffs(order: usize, coeffs: Vec<C64>) -> Self {
        assert_eq!(coeffs.len(), coeff_count(order));
        Jet { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Value of the underlying function at the expansion point.
    pub fn value(&self) -> C64 {
        self.coeffs[0]
    }

    /// Taylor coefficient `∂^α f / α!`, zero beyond the stored order.
    pub fn coeff(&self, alpha: MultiIndex) -> C64 {
        match mono_index(alpha) {
            Some(i) if i < self.coeffs.len() => self.coeffs[i],
            _ => ZERO,
        }
    }

    /// The mixed partial derivative `∂^α f` at the expansion point.
    pub fn derivative(&self, alpha: MultiIndex) -> C64 {
        let fact: f64 = alpha
            .iter()
            .map(|&a| (1..=a as u32).product::<u32>() as f64)
            .product();
        self.coeff(alpha) * fact
    }

    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        Jet {
            order,
            coeffs: self.coeffs[..coeff_count(order)].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Jet {
        Jet {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Real part of the underlying function (coordinates are real).
    pub fn re(&self) -> Jet {
        self.map_coeffs(|c| C64::new(c.re, 0.0))
    }

    pub fn im(&self) -> Jet {
        self.map_coeffs(|c| C64::new(c.im, 0.0))
    }

    pub fn scale(&self, s: impl Into<C64>) -> Jet {
        let s = s.into();
        self.map_coeffs(|c| c * s)
    }

    fn map_coeffs(&self, f: impl Fn(C64) -> C64) -> Jet {
        Jet {
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    /// `∂_μ` of the underlying function, one order lower.
    pub fn partial(&self, mu: usize) -> Result<Jet> {
        if self.order == 0 {
            return Err(Error::DerivativeExhausted);
        }
        let mut out = Jet::zero(self.order - 1);
        let n = out.coeffs.len();
        for &(src, tgt, fac) in &tables().partials[mu] {
            let (src, tgt) = (src as usize, tgt as usize);
            if tgt < n {
                out.coeffs[tgt] += self.coeffs[src] * fac;
            }
        }
        Ok(out)
    }

    /// Composition `f(self)` given the derivatives `f^(n)(value)` for
    /// `n = 0..=order`.
    pub fn compose(&self, derivs: &[C64]) -> Jet {
        let k = self.order;
        debug_assert!(derivs.len() > k);
        let mut h = self.clone();
        h.coeffs[0] = ZERO;
        let mut out = Jet::constant(derivs[0], k);
        let mut power = Jet::constant(ONE, k);
        let mut fact = 1.0;
        for (n, d) in derivs.iter().enumerate().take(k + 1).skip(1) {
            power = &power * &h;
            fact *= n as f64;
            out += &power.scale(*d / fact);
        }
        out
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&vec![e; self.order + 1])
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = (self.value().sin(), self.value().cos());
        let cycle = [s, c, -s, -c];
        let d: Vec<C64> = (0..=self.order).map(|n| cycle[n % 4]).collect();
        self.compose(&d)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = (self.value().sin(), self.value().cos());
        let cycle = [c, -s, -c, s];
        let d: Vec<C64> = (0..=self.order).map(|n| cycle[n % 4]).collect();
        self.compose(&d)
    }

    /// Natural logarithm; the value must be real and positive.
    pub fn ln(&self) -> Result<Jet> {
        let v = self.value();
        if v.im.abs() > 1e-14 * v.norm().max(1.0) || v.re <= 0.0 {
            return Err(Error::Domain {
                func: "ln",
                value: v.re,
            });
        }
        let mut d = vec![C64::new(v.re.ln(), 0.0)];
        let mut fact = 1.0;
        for n in 1..=self.order {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            d.push(C64::new(sign * fact / v.re.powi(n as i32), 0.0));
            fact *= n as f64;
        }
        Ok(self.compose(&d))
    }

    /// Real power `self^p` on the positive real branch.
    pub fn powf(&self, p: f64) -> Result<Jet> {
        let v = self.value();
        if v.im.abs() > 1e-14 * v.norm().max(1.0) || v.re <= 0.0 {
            return Err(Error::Domain {
                func: "pow",
                value: v.re,
            });
        }
        let mut d = Vec::with_capacity(self.order + 1);
        let mut falling = 1.0;
        for n in 0..=self.order {
            d.push(C64::new(falling * v.re.powf(p - n as f64), 0.0));
            falling *= p - n as f64;
        }
        Ok(self.compose(&d))
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.powf(0.5).map_err(|e| match e {
            Error::Domain { value, .. } => Error::Domain {
                func: "sqrt",
                value,
            },
            other => other,
        })
    }

    /// Multiplicative inverse; the value may be any nonzero complex number.
    pub fn recip(&self) -> Result<Jet> {
        let v = self.value();
        if v.norm() < 1e-300 {
            return Err(Error::Domain {
                func: "recip",
                value: v.re,
            });
        }
        let mut d = Vec::with_capacity(self.order + 1);
        let mut falling = 1.0;
        for n in 0..=self.order {
            d.push(falling / v.powi(n as i32 + 1));
            falling *= -(n as f64 + 1.0);
        }
        Ok(self.compose(&d))
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        Ok(self * &other.recip()?)
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut out = Jet::constant(ONE, self.order);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Largest coefficient difference over the common order.
    pub fn distance(&self, other: &Jet) -> f64 {
        (self - other).max_abs()
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let n = coeff_count(order);
        Jet {
            order,
            coeffs: (0..n).map(|i| self.coeffs[i] + rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let n = coeff_count(order);
        Jet {
            order,
            coeffs: (0..n).map(|i| self.coeffs[i] - rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::zero(order);
        for &(i, j, k) in &tables().products[order] {
            out.coeffs[k as usize] += self.coeffs[i as usize] * rhs.coeffs[j as usize];
        }
        out
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map_coeffs(|c| -c)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        if rhs.order < self.order {
            *self = self.truncate(rhs.order);
        }
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        if rhs.order < self.order {
            *self = self.truncate(rhs.order);
        }
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}
