//! Rational subspaces of the odd part of the algebra and odd annihilators.

use crate::error::{Error, Result};
use crate::grassmann::{AlgebraContext, GrassmannElement, Monomial, Parity};
use crate::linalg::{element_vector, kernel, vector_element, Echelon, SparseVec};

/// A subspace of the odd part, held as its reduced row echelon basis in
/// the lexicographic monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddSubspace {
    n: u8,
    basis: Vec<GrassmannElement>,
}

/// `Ann S = { gamma odd : gamma * s = 0 for all s in S }`.
pub type AnnihilatorBasis = OddSubspace;

fn require_odd(x: &GrassmannElement) -> Result<()> {
    match x.parity() {
        Parity::Odd | Parity::Zero => Ok(()),
        p => Err(Error::Parity(format!("expected an odd element, {x} is {p}"))),
    }
}

fn require_context(ctx: &AlgebraContext, x: &GrassmannElement) -> Result<()> {
    if x.generators() as usize != ctx.generators() {
        return Err(Error::Context {
            left: ctx.generators() as u8,
            right: x.generators(),
        });
    }
    Ok(())
}

impl OddSubspace {
    pub fn span(ctx: &AlgebraContext, spanning: &[GrassmannElement]) -> Result<Self> {
        for x in spanning {
            require_context(ctx, x)?;
            require_odd(x)?;
        }
        let n = ctx.generators() as u8;
        let echelon = Echelon::from_vectors(spanning.iter().map(element_vector));
        let basis = echelon.rref().iter().map(|v| vector_element(n, v)).collect();
        Ok(Self { n, basis })
    }

    /// The whole odd part.
    pub fn full(ctx: &AlgebraContext) -> Self {
        let n = ctx.generators() as u8;
        let basis = ctx
            .odd_basis()
            .into_iter()
            .map(|m| vector_element(n, &SparseVec::from([(m, num_traits::One::one())])))
            .collect();
        Self { n, basis }
    }

    pub fn generators(&self) -> u8 {
        self.n
    }

    pub fn basis(&self) -> &[GrassmannElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, x: &GrassmannElement) -> bool {
        if x.generators() != self.n {
            return false;
        }
        Echelon::from_vectors(self.basis.iter().map(element_vector)).contains(&element_vector(x))
    }
}

/// Odd annihilator of a list of odd elements, as the kernel of
/// `gamma -> (gamma * a_1, ..., gamma * a_k)` on the odd monomial basis.
pub fn annihilator_odd(ctx: &AlgebraContext, generators: &[GrassmannElement]) -> Result<AnnihilatorBasis> {
    for a in generators {
        require_context(ctx, a)?;
        require_odd(a)?;
    }
    let n = ctx.generators() as u8;
    let odd = ctx.odd_basis();
    let columns: Vec<SparseVec<(usize, Monomial)>> = odd
        .iter()
        .map(|m| {
            let gamma = vector_element(n, &SparseVec::from([(*m, num_traits::One::one())]));
            let mut image = SparseVec::new();
            for (k, a) in generators.iter().enumerate() {
                for (mono, c) in (&gamma * a).terms() {
                    image.insert((k, *mono), c.clone());
                }
            }
            image
        })
        .collect();
    let basis = kernel(&columns)
        .into_iter()
        .map(|coords| {
            let v: SparseVec<Monomial> = coords.into_iter().map(|(i, c)| (odd[i], c)).collect();
            vector_element(n, &v)
        })
        .collect();
    Ok(OddSubspace { n, basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(n: u8, s: &str) -> GrassmannElement {
        GrassmannElement::parse_expr(n, s).unwrap()
    }

    #[test]
    fn annihilator_of_single_generator() {
        let ctx = AlgebraContext::new(2).unwrap();
        let ann = annihilator_odd(&ctx, &[el(2, "xi1")]).unwrap();
        assert_eq!(ann.basis(), &[el(2, "xi1")]);

        let ctx = AlgebraContext::new(3).unwrap();
        let ann = annihilator_odd(&ctx, &[el(3, "xi1")]).unwrap();
        assert_eq!(ann.basis(), &[el(3, "xi1"), el(3, "xi1*xi2*xi3")]);
    }

    #[test]
    fn annihilator_of_zero_is_everything() {
        let ctx = AlgebraContext::new(3).unwrap();
        let ann = annihilator_odd(&ctx, &[GrassmannElement::zero(3)]).unwrap();
        assert_eq!(ann, OddSubspace::full(&ctx));
        assert_eq!(ann.dim(), 4);
        let ann = annihilator_odd(&ctx, &[]).unwrap();
        assert_eq!(ann.dim(), 4);
    }

    #[test]
    fn intersection_over_generators() {
        let ctx = AlgebraContext::new(3).unwrap();
        // Ann xi1 = {xi1, xi1 xi2 xi3}, Ann xi2 = {xi2, xi1 xi2 xi3}.
        let ann = annihilator_odd(&ctx, &[el(3, "xi1"), el(3, "xi2")]).unwrap();
        assert_eq!(ann.basis(), &[el(3, "xi1*xi2*xi3")]);
    }

    #[test]
    fn non_odd_input_rejected() {
        let ctx = AlgebraContext::new(3).unwrap();
        assert!(matches!(annihilator_odd(&ctx, &[el(3, "xi1*xi2")]), Err(Error::Parity(_))));
        assert!(matches!(annihilator_odd(&ctx, &[el(3, "1 + xi1")]), Err(Error::Parity(_))));
        assert!(matches!(annihilator_odd(&ctx, &[el(2, "xi1")]), Err(Error::Context { .. })));
    }

    #[test]
    fn span_normalizes_and_tests_membership() {
        let ctx = AlgebraContext::new(3).unwrap();
        let s = OddSubspace::span(&ctx, &[el(3, "2*xi1 + xi2"), el(3, "4*xi1 + 2*xi2"), el(3, "xi3")]).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.basis()[0], el(3, "xi1 + 1/2*xi2"));
        assert!(s.contains(&el(3, "-2*xi1 - xi2 + 5*xi3")));
        assert!(!s.contains(&el(3, "xi2")));
    }
}
