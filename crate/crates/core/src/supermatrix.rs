//! Supertrace, Berezinian and related invariants of even supermatrices over
//! the Grassmann algebra.

use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::matrix::{Mat, Super, SuperVector};
use crate::poly::{LaurentPoly, TimePoly};

pub type SuperMatrix = Super<GrassmannElement>;
pub type ParamSuperMatrix = Super<TimePoly>;
pub type LaurentMatrix = Super<LaurentPoly>;
pub type ElementVector = SuperVector<GrassmannElement>;
pub type ParamVector = SuperVector<TimePoly>;

fn invert_det(det: &GrassmannElement, what: &str) -> Result<GrassmannElement> {
    det.invert()
        .map_err(|_| Error::NotInvertible(format!("det {what} = {det} has zero body")))
}

impl SuperMatrix {
    /// `Ber M = det(A - Gamma B^-1 Delta) / det B`.
    pub fn berezinian(&self) -> Result<GrassmannElement> {
        let b = self.b();
        let det_b = b.det_even()?;
        let inv_det_b = invert_det(&det_b, "B")?;
        let b_inv = b.inverse_even()?;
        let schur = self.a().checked_sub(&self.gamma().checked_mul(&b_inv)?.checked_mul(&self.delta())?)?;
        Ok(&schur.det_even()? * &inv_det_b)
    }

    /// Splits the Berezinian of a `(1|1)` matrix into its even-reduced part
    /// `a/b` and odd-reduced part `beta alpha / b^2`.
    pub fn ber_parts(&self) -> Result<(GrassmannElement, GrassmannElement)> {
        if self.p() != 1 || self.q() != 1 {
            return Err(Error::Shape(format!("ber_parts needs a (1|1) matrix, got ({}|{})", self.p(), self.q())));
        }
        let inv_b = invert_det(self.get(1, 1), "B")?;
        let even = self.get(0, 0) * &inv_b;
        let odd = &(self.get(1, 0) * self.get(0, 1)) * &(&inv_b * &inv_b);
        Ok((even, odd))
    }

    /// `-det(Gamma B^-1 Delta) / det B`, the closed form for antitriangles.
    pub fn antitriangle_berezinian(&self) -> Result<GrassmannElement> {
        if !self.is_antitriangle() {
            return Err(Error::Shape("upper-left block is not zero".into()));
        }
        let b = self.b();
        let inv_det_b = invert_det(&b.det_even()?, "B")?;
        let inner = self.gamma().checked_mul(&b.inverse_even()?)?.checked_mul(&self.delta())?;
        Ok(-(&inner.det_even()? * &inv_det_b))
    }

    /// The even-reduced part `[[A, Gamma], [0, B]]`.
    pub fn even_reduced_part(&self) -> SuperMatrix {
        let zero = Mat::zeros(self.generators(), self.q(), self.p());
        Super::from_blocks(&self.a(), &self.gamma(), &zero, &self.b()).expect("blocks of a graded matrix")
    }

    /// The odd-reduced part `[[0, Gamma], [Delta, B]]`.
    pub fn odd_reduced_part(&self) -> SuperMatrix {
        let zero = Mat::zeros(self.generators(), self.p(), self.p());
        Super::from_blocks(&zero, &self.gamma(), &self.delta(), &self.b()).expect("blocks of a graded matrix")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::rational;
    use crate::matrix::Reduction;

    fn el(s: &str) -> GrassmannElement {
        GrassmannElement::parse_expr(4, s).unwrap()
    }

    fn sm(p: usize, q: usize, rows: &[&[&str]]) -> SuperMatrix {
        Super::new(p, q, rows.iter().map(|r| r.iter().map(|s| el(s)).collect()).collect()).unwrap()
    }

    #[test]
    fn grading_is_enforced() {
        let bad = Super::new(1, 1, vec![vec![el("xi1"), el("xi2")], vec![el("0"), el("1")]]);
        assert!(matches!(bad, Err(Error::Parity(_))));
        let bad = Super::new(1, 1, vec![vec![el("1"), el("1")], vec![el("0"), el("1")]]);
        assert!(matches!(bad, Err(Error::Parity(_))));
        let ragged = Super::new(1, 1, vec![vec![el("1")], vec![el("0"), el("1")]]);
        assert!(matches!(ragged, Err(Error::Shape(_))));
    }

    #[test]
    fn supertrace_examples() {
        let m = sm(1, 1, &[&["2 + xi1*xi2", "xi3"], &["xi4", "5"]]);
        assert_eq!(m.supertrace(), el("-3 + xi1*xi2"));
        assert!(SuperMatrix::identity(4, 1, 1).supertrace().is_zero());
        let p0 = sm(1, 1, &[&["0", "0"], &["xi1", "1"]]);
        assert_eq!(p0.supertrace(), el("-1"));
    }

    #[test]
    fn determinant_examples() {
        let m = Mat::from_rows(4, vec![vec![el("1 + xi1*xi2"), el("0")], vec![el("0"), el("1")]]).unwrap();
        assert_eq!(m.det_even().unwrap(), el("1 + xi1*xi2"));
        let one = Mat::from_rows(4, vec![vec![el("1")]]).unwrap();
        assert_eq!(one.det_even().unwrap(), el("1"));
        let nil = Mat::from_rows(4, vec![vec![el("0"), el("xi1*xi2")], vec![el("xi1*xi2"), el("1")]]).unwrap();
        assert!(nil.det_even().unwrap().is_zero());
        let odd = Mat::from_rows(4, vec![vec![el("xi1")]]).unwrap();
        assert!(matches!(odd.det_even(), Err(Error::Parity(_))));
    }

    #[test]
    fn three_by_three_determinant_and_inverse() {
        let m = Mat::from_rows(
            4,
            vec![
                vec![el("2"), el("xi1*xi2"), el("1")],
                vec![el("0"), el("1 + xi3*xi4"), el("3")],
                vec![el("1"), el("0"), el("1")],
            ],
        )
        .unwrap();
        // 2(1 + xi3xi4) + xi1xi2*3 + 1*(0 - (1 + xi3xi4))
        assert_eq!(m.det_even().unwrap(), el("1 + 3*xi1*xi2 + xi3*xi4"));
        let inv = m.inverse_even().unwrap();
        assert_eq!(m.checked_mul(&inv).unwrap(), Mat::identity(4, 3));
        assert_eq!(inv.checked_mul(&m).unwrap(), Mat::identity(4, 3));
    }

    #[test]
    fn berezinian_one_one_formula() {
        let m = sm(1, 1, &[&["3 + xi1*xi2", "xi3"], &["xi4", "2"]]);
        let inv_b = el("1/2");
        let expected = &(&el("3 + xi1*xi2") * &inv_b) + &(&(&el("xi4") * &el("xi3")) * &(&inv_b * &inv_b));
        assert_eq!(m.berezinian().unwrap(), expected);
        let (even, odd) = m.ber_parts().unwrap();
        assert_eq!(&even + &odd, expected);
    }

    #[test]
    fn odd_reduced_berezinian_is_nilpotent() {
        let m = sm(1, 1, &[&["0", "xi1"], &["xi2", "1"]]);
        let ber = m.berezinian().unwrap();
        assert_eq!(ber, el("-xi1*xi2"));
        assert!((&ber * &ber).is_zero());
        assert_eq!(m.antitriangle_berezinian().unwrap(), ber);
    }

    #[test]
    fn ber_parts_examples() {
        let m = sm(1, 1, &[&["1", "xi1"], &["xi2", "1"]]);
        assert_eq!(m.ber_parts().unwrap(), (el("1"), el("-xi1*xi2")));
        assert_eq!(m.berezinian().unwrap(), el("1 - xi1*xi2"));
        let even_reduced = sm(1, 1, &[&["4", "xi1"], &["0", "2"]]);
        assert_eq!(even_reduced.ber_parts().unwrap(), (el("2"), el("0")));
        assert_eq!(m.even_reduced_part().berezinian().unwrap(), el("1"));
    }

    #[test]
    fn berezinian_requires_invertible_b() {
        let m = sm(1, 1, &[&["1", "xi1"], &["xi2", "xi3*xi4"]]);
        assert!(matches!(m.berezinian(), Err(Error::NotInvertible(_))));
        assert_eq!(SuperMatrix::identity(4, 2, 1).berezinian().unwrap(), el("1"));
    }

    #[test]
    fn one_two_antitriangle_matches_schur_form() {
        let m = sm(
            1,
            2,
            &[&["0", "xi1", "xi2"], &["xi3", "1 + xi1*xi2", "0"], &["xi4", "xi3*xi4", "2"]],
        );
        assert_eq!(m.berezinian().unwrap(), m.antitriangle_berezinian().unwrap());
    }

    #[test]
    fn reduction_shapes() {
        assert_eq!(sm(1, 1, &[&["1", "xi1"], &["0", "1"]]).classify_reduction(), Reduction::EvenReduced);
        assert_eq!(sm(1, 1, &[&["0", "xi1"], &["xi1", "1"]]).classify_reduction(), Reduction::OddReduced);
        assert_eq!(sm(1, 1, &[&["1", "xi1"], &["xi1", "1"]]).classify_reduction(), Reduction::General);
        assert_eq!(sm(1, 1, &[&["0", "xi1"], &["0", "1"]]).classify_reduction(), Reduction::OddReduced);
    }

    #[test]
    fn products_and_application() {
        let m = sm(1, 1, &[&["1 + xi1*xi2", "xi3"], &["xi4", "2"]]);
        let id = SuperMatrix::identity(4, 1, 1);
        assert_eq!(&m * &id, m);
        assert_eq!(&id * &m, m);
        let v = ElementVector::from_parts(vec![el("1")], vec![el("xi1")]).unwrap();
        let image = m.mat_apply(&v).unwrap();
        assert_eq!(image.even_part(), &[el("1 + xi1*xi2 + xi3*xi1")]);
        assert_eq!(image.odd_part(), &[el("xi4 + 2*xi1")]);
        let other = SuperMatrix::identity(4, 2, 1);
        assert!(matches!(m.mat_mul(&other), Err(Error::Shape(_))));
        assert_eq!(m.scale(&rational(1, 2)).get(1, 1), &el("1"));
    }
}
