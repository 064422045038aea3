//! Scalar fields on the chart: maps from a point and a jet order to a jet.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::jet::{Jet, C64};

/// A chart point `(x⁰, x¹, x², x³)`.
pub type Point = [f64; 4];

type Evaluator = dyn Fn(&Point, usize) -> Result<Jet> + Send + Sync;

#[derive(Clone)]
pub struct ScalarField(Arc<Evaluator>);

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField(..)")
    }
}

impl ScalarField {
    pub fn new(f: impl Fn(&Point, usize) -> Result<Jet> + Send + Sync + 'static) -> Self {
        ScalarField(Arc::new(f))
    }

    pub fn constant(c: impl Into<C64>) -> Self {
        let c = c.into();
        ScalarField::new(move |_, k| Ok(Jet::constant(c, k)))
    }

    pub fn coordinate(mu: usize) -> Self {
        ScalarField::new(move |p, k| Ok(Jet::variable(mu, p[mu], k)))
    }

    /// Order-`order` Taylor expansion at `p`.
    pub fn jet(&self, p: &Point, order: usize) -> Result<Jet> {
        (self.0)(p, order)
    }

    /// Composition with a map on jets.
    pub fn map(&self, f: impl Fn(Jet) -> Result<Jet> + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        ScalarField::new(move |p, k| f(inner.jet(p, k)?))
    }

    /// Pointwise combination of two fields.
    pub fn zip(
        &self,
        other: &ScalarField,
        f: impl Fn(Jet, Jet) -> Result<Jet> + Send + Sync + 'static,
    ) -> Self {
        let (a, b) = (self.clone(), other.clone());
        ScalarField::new(move |p, k| f(a.jet(p, k)?, b.jet(p, k)?))
    }

    pub fn scale(&self, s: impl Into<C64>) -> Self {
        let s = s.into();
        self.map(move |j| Ok(j.scale(s)))
    }

    pub fn mul(&self, other: &ScalarField) -> Self {
        self.zip(other, |a, b| Ok(&a * &b))
    }

    pub fn add(&self, other: &ScalarField) -> Self {
        self.zip(other, |a, b| Ok(&a + &b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_is_consistent() {
        let f = ScalarField::coordinate(0).mul(&ScalarField::coordinate(3)).map(|j| Ok(j.exp()));
        let p = [0.1, -0.2, 0.3, 0.4];
        let hi = f.jet(&p, 4).unwrap();
        let lo = f.jet(&p, 3).unwrap();
        assert!(hi.truncate(3).distance(&lo) < 1e-15);
    }
}
