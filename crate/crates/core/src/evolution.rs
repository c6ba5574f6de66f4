//! Orbits of initial supervectors under (1|1) families, and formal Laplace
//! resolvents in the frequency variables `z`, `w`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{compose, generator_of, lift, require_even, require_odd, FamilyKind};
use crate::gamma::{require_single_parameter, substitute_time};
use crate::grassmann::{int, GrassmannElement, Rational};
use crate::matrix::SuperVector;
use crate::poly::{Frequency, LaurentPoly, Time, TimePoly};
use crate::supermatrix::{ElementVector, LaurentMatrix, ParamSuperMatrix, ParamVector, SuperMatrix};

fn require_one_one<R: crate::matrix::Ring>(f: &crate::matrix::Super<R>) -> Result<()> {
    if f.p() != 1 || f.q() != 1 {
        return Err(Error::Shape(format!("expected a (1|1) matrix, got ({}|{})", f.p(), f.q())));
    }
    Ok(())
}

fn lift_vector(x: &ElementVector) -> ParamVector {
    x.map(|c| TimePoly::constant(c.clone())).expect("constant lift keeps parities")
}

/// `X(t) = F(t) X0`.
pub fn orbit(f: &ParamSuperMatrix, x0: &ElementVector) -> Result<ParamVector> {
    require_one_one(f)?;
    if x0.p() != 1 || x0.q() != 1 {
        return Err(Error::Shape(format!("expected a (1|1) vector, got ({}|{})", x0.p(), x0.q())));
    }
    f.mat_apply(&lift_vector(x0))
}

/// `X'(t) - A X(t)` with `A = F'(0)`.
pub fn cauchy_defect(f: &ParamSuperMatrix, x0: &ElementVector) -> Result<ParamVector> {
    let x = orbit(f, x0)?;
    let dx = velocity(&x)?;
    let ax = lift(&generator_of(f)?).mat_apply(&x)?;
    dx.checked_sub(&ax)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeLaw {
    Translational,
    MovingTime,
    Neither,
}

/// Classifies `F(t) F(s)` against `F(t + s)` and `F(t)`. Both properties are
/// tested as matrix identities, which is what holding for every initial
/// vector amounts to. When both hold the family is reported translational.
pub fn moving_time_check(f: &ParamSuperMatrix) -> Result<TimeLaw> {
    require_single_parameter(f)?;
    let n = f.generators();
    let product = compose(f, f)?;
    let shifted = substitute_time(f, &(&TimePoly::var(n, Time::T) + &TimePoly::var(n, Time::S)))?;
    Ok(if product == shifted {
        TimeLaw::Translational
    } else if product == *f {
        TimeLaw::MovingTime
    } else {
        TimeLaw::Neither
    })
}

/// `alpha * kappa(t)` with `kappa(t) = alpha x0 + kappa0`, the odd coordinate
/// of the `P` orbit.
pub fn commutativity_obstruction(x0: &ElementVector, alpha: &GrassmannElement) -> Result<GrassmannElement> {
    require_odd(alpha, "alpha")?;
    if x0.p() != 1 || x0.q() != 1 {
        return Err(Error::Shape(format!("expected a (1|1) vector, got ({}|{})", x0.p(), x0.q())));
    }
    let (even, odd) = (&x0.even_part()[0], &x0.odd_part()[0]);
    require_even(even, "x0")?;
    require_odd(odd, "kappa0")?;
    let kappa = &(alpha * even) + odd;
    Ok(alpha * &kappa)
}

/// `[A, P(t)] X(t)` for the `P` family.
pub fn orbit_commutator(x0: &ElementVector, alpha: &GrassmannElement) -> Result<ParamVector> {
    let p = crate::families::make_family(FamilyKind::P, alpha)?;
    let a = lift(&generator_of(&p)?);
    a.commutator(&p)?.mat_apply(&orbit(&p, x0)?)
}

fn factorial(m: i64) -> Rational {
    (1..=m).fold(int(1), |acc, k| acc * int(k))
}

fn laplace_entry(x: &TimePoly) -> Result<LaurentPoly> {
    if x.uses(Time::S) {
        return Err(Error::Shape("laplace expects a family in t alone".into()));
    }
    if x.min_exponent(Time::T) < 0 {
        return Err(Error::Shape("laplace expects a polynomial in t".into()));
    }
    let terms = x.terms().map(|(e, c)| {
        let m = e[Time::T];
        ([-(m + 1), 0], c.scale(&factorial(m as i64)))
    });
    LaurentPoly::from_terms(x.generators(), terms)
}

/// Entrywise `t^m -> m! z^-(m+1)`.
pub fn laplace(f: &ParamSuperMatrix) -> Result<LaurentMatrix> {
    f.try_map(laplace_entry)
}

/// `R(z) - R(w) - (w - z) R(z) R(w)` for a resolvent written in `z`.
pub fn resolvent_defect(r: &LaurentMatrix) -> Result<LaurentMatrix> {
    if r.mat().entries().any(|x| x.uses(Frequency::W)) {
        return Err(Error::Shape("resolvent must be written in z alone".into()));
    }
    let n = r.generators();
    let rw = r.map(|x| x.swap_variables())?;
    let gap = &LaurentPoly::var(n, Frequency::W) - &LaurentPoly::var(n, Frequency::Z);
    r.mat_sub(&rw)?.mat_sub(&r.mat_mul(&rw)?.scale_by(&gap)?)
}

fn laurent(c: &GrassmannElement, iz: i32, iw: i32) -> LaurentPoly {
    LaurentPoly::monomial(c.clone(), [-iz, -iw])
}

/// `[[0, alpha/z^2], [alpha/z, 1/z]]`.
pub fn expected_resolvent_p(alpha: &GrassmannElement) -> Result<LaurentMatrix> {
    require_odd(alpha, "alpha")?;
    let n = alpha.generators();
    let one = GrassmannElement::one(n);
    LaurentMatrix::new(
        1,
        1,
        vec![
            vec![LaurentPoly::zero(n), laurent(alpha, 2, 0)],
            vec![laurent(alpha, 1, 0), laurent(&one, 1, 0)],
        ],
    )
}

/// `[[1/z, alpha/z^2], [0, 1/z]]`.
pub fn expected_resolvent_t(alpha: &GrassmannElement) -> Result<LaurentMatrix> {
    require_odd(alpha, "alpha")?;
    let n = alpha.generators();
    let one = GrassmannElement::one(n);
    LaurentMatrix::new(
        1,
        1,
        vec![
            vec![laurent(&one, 1, 0), laurent(alpha, 2, 0)],
            vec![LaurentPoly::zero(n), laurent(&one, 1, 0)],
        ],
    )
}

/// `(w - z) / (z w^2) = z^-1 w^-1 - w^-2`.
pub fn p_defect_factor(n: u8) -> LaurentPoly {
    let one = GrassmannElement::one(n);
    &laurent(&one, 1, 1) - &laurent(&one, 0, 2)
}

/// The generator `A` lifted to frequency-valued entries.
pub fn lift_laurent(m: &SuperMatrix) -> LaurentMatrix {
    m.map(|x| LaurentPoly::constant(x.clone())).expect("constant lift keeps the grading")
}

/// `X0 = (x0 | kappa0)` in (1|1).
pub fn initial_vector(x0: &GrassmannElement, kappa0: &GrassmannElement) -> Result<ElementVector> {
    SuperVector::from_parts(vec![x0.clone()], vec![kappa0.clone()])
}

/// Differentiates an orbit in `t`.
pub fn velocity(x: &ParamVector) -> Result<ParamVector> {
    x.map(|c| c.derivative(Time::T))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::make_family;

    fn el(s: &str) -> GrassmannElement {
        GrassmannElement::parse_expr(4, s).unwrap()
    }

    fn tp(c: &GrassmannElement, k: i32) -> TimePoly {
        TimePoly::monomial(c.clone(), [k, 0])
    }

    #[test]
    fn orbits_of_p_and_t() {
        let alpha = el("xi1");
        let (x0, k0) = (el("2 + xi2*xi3"), el("xi4"));
        let start = initial_vector(&x0, &k0).unwrap();
        let p = orbit(&make_family(FamilyKind::P, &alpha).unwrap(), &start).unwrap();
        assert_eq!(p.even_part()[0], tp(&(&alpha * &k0), 1));
        assert_eq!(p.odd_part()[0], tp(&(&(&alpha * &x0) + &k0), 0));
        let t = orbit(&make_family(FamilyKind::T, &alpha).unwrap(), &start).unwrap();
        assert_eq!(t.even_part()[0], &tp(&x0, 0) + &tp(&(&alpha * &k0), 1));
        assert_eq!(t.odd_part()[0], tp(&k0, 0));

        let v = velocity(&p).unwrap();
        assert_eq!(v.even_part()[0], tp(&(&alpha * &k0), 0));
        assert!(v.odd_part()[0].is_zero());
    }

    #[test]
    fn orbits_coincide_without_even_start() {
        let alpha = el("xi1 + xi3");
        let start = initial_vector(&GrassmannElement::zero(4), &el("xi2")).unwrap();
        let p = orbit(&make_family(FamilyKind::P, &alpha).unwrap(), &start).unwrap();
        let t = orbit(&make_family(FamilyKind::T, &alpha).unwrap(), &start).unwrap();
        assert_eq!(p, t);
    }

    #[test]
    fn cauchy_problem_has_two_solutions() {
        let alpha = el("xi1");
        let start = initial_vector(&el("1 + xi1*xi2"), &el("xi3")).unwrap();
        for kind in [FamilyKind::P, FamilyKind::T] {
            let f = make_family(kind, &alpha).unwrap();
            assert!(cauchy_defect(&f, &start).unwrap().is_zero(), "{kind}");
        }
        let zero = initial_vector(&GrassmannElement::zero(4), &GrassmannElement::zero(4)).unwrap();
        assert!(cauchy_defect(&make_family(FamilyKind::P, &alpha).unwrap(), &zero).unwrap().is_zero());
        let wide = ParamSuperMatrix::zero(4, 2, 1);
        assert!(matches!(cauchy_defect(&wide, &start), Err(Error::Shape(_))));
    }

    #[test]
    fn time_laws() {
        let alpha = el("xi1");
        let law = |k| moving_time_check(&make_family(k, &alpha).unwrap()).unwrap();
        assert_eq!(law(FamilyKind::T), TimeLaw::Translational);
        assert_eq!(law(FamilyKind::P), TimeLaw::MovingTime);
        assert_eq!(law(FamilyKind::Z), TimeLaw::Translational);
        assert_eq!(law(FamilyKind::E), TimeLaw::Translational);
        assert_eq!(law(FamilyKind::Y), TimeLaw::Neither);
    }

    #[test]
    fn obstruction() {
        let alpha = el("xi1");
        let one = GrassmannElement::one(4);
        let o = commutativity_obstruction(&initial_vector(&one, &el("xi2")).unwrap(), &alpha).unwrap();
        assert_eq!(o, el("xi1*xi2"));
        let o = commutativity_obstruction(&initial_vector(&one, &el("xi1")).unwrap(), &alpha).unwrap();
        assert!(o.is_zero());
        let o = commutativity_obstruction(&initial_vector(&one, &el("xi3")).unwrap(), &GrassmannElement::zero(4)).unwrap();
        assert!(o.is_zero());
        let bad = initial_vector(&one, &el("xi1")).unwrap();
        assert!(matches!(commutativity_obstruction(&bad, &el("xi1*xi2")), Err(Error::Parity(_))));

        let start = initial_vector(&one, &el("xi2")).unwrap();
        let bracket = orbit_commutator(&start, &alpha).unwrap();
        assert_eq!(bracket.even_part()[0], tp(&el("xi1*xi2"), 0));
        assert!(bracket.odd_part()[0].is_zero());
    }

    #[test]
    fn resolvents() {
        let alpha = el("xi1 - 3*xi2");
        let rp = laplace(&make_family(FamilyKind::P, &alpha).unwrap()).unwrap();
        let rt = laplace(&make_family(FamilyKind::T, &alpha).unwrap()).unwrap();
        assert_eq!(rp, expected_resolvent_p(&alpha).unwrap());
        assert_eq!(rt, expected_resolvent_t(&alpha).unwrap());
        assert!(laplace(&make_family(FamilyKind::Z, &alpha).unwrap()).unwrap().is_zero());

        assert!(resolvent_defect(&rt).unwrap().is_zero());
        let a = lift_laurent(&generator_of(&make_family(FamilyKind::P, &alpha).unwrap()).unwrap());
        assert_eq!(resolvent_defect(&rp).unwrap(), a.scale_by(&p_defect_factor(4)).unwrap());
        assert!(resolvent_defect(&LaurentMatrix::zero(4, 1, 1)).unwrap().is_zero());
    }

    #[test]
    fn laplace_rejects_two_variables() {
        let alpha = el("xi1");
        let t = make_family(FamilyKind::T, &alpha).unwrap();
        let ts = compose(&t, &t).unwrap();
        assert!(matches!(laplace(&ts), Err(Error::Shape(_))));
    }

    #[test]
    fn laplace_of_quadratic() {
        let one = GrassmannElement::one(2);
        let f = ParamSuperMatrix::new(1, 0, vec![vec![TimePoly::monomial(one.clone(), [2, 0])]]).unwrap();
        let r = laplace(&f).unwrap();
        assert_eq!(*r.get(0, 0), LaurentPoly::monomial(one.scale(&int(2)), [-3, 0]));
    }
}
