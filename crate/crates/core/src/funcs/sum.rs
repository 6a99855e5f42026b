use super::{Analytic, Derivs, ExpQuadPoly};
use crate::{Result, C64};

/// Finite sum of closed-class terms, e.g. `sin πz² = (e^{iπz²} − e^{−iπz²})/2i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpQuadSum {
    pub terms: Vec<ExpQuadPoly>,
}

impl ExpQuadSum {
    pub fn new(terms: Vec<ExpQuadPoly>) -> Self {
        Self { terms }
    }

    pub fn map_terms(&self, f: impl Fn(&ExpQuadPoly) -> ExpQuadPoly) -> Self {
        Self::new(self.terms.iter().map(f).collect())
    }

    /// Largest order-2 type among the terms.
    pub fn growth(&self) -> (f64, f64) {
        self.terms.iter().map(|t| t.growth()).fold((0.0, 0.0), |acc, g| {
            if g.0 > acc.0 || (g.0 == acc.0 && g.1 > acc.1) {
                g
            } else {
                acc
            }
        })
    }
}

impl Analytic for ExpQuadSum {
    fn derivs(&self, z: C64) -> Result<Derivs> {
        let zero = C64::new(0.0, 0.0);
        let mut acc = Derivs { value: zero, d1: zero, d2: zero };
        for t in &self.terms {
            let d = t.derivs(z)?;
            acc.value += d.value;
            acc.d1 += d.d1;
            acc.d2 += d.d2;
        }
        Ok(acc)
    }

    fn magnitude(&self, z: C64) -> f64 {
        self.terms.iter().map(|t| t.magnitude(z)).sum()
    }
}
