//! Antitriangle supermatrices whose odd blocks are constrained by a subspace
//! of odd elements and its annihilator.

use serde::Serialize;

use crate::annihilator::{annihilator_odd, AnnihilatorBasis, OddSubspace};
use crate::error::{Error, Result};
use crate::grassmann::{AlgebraContext, GrassmannElement};
use crate::matrix::{Mat, Super};
use crate::poly::{Time, TimePoly};
use crate::supermatrix::{ParamSuperMatrix, SuperMatrix};

/// A subspace of odd elements together with the even elements that are
/// required to map it into itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSet {
    span: OddSubspace,
    annihilator: AnnihilatorBasis,
    stabilizing_evens: Vec<GrassmannElement>,
}

impl GammaSet {
    pub fn new(ctx: &AlgebraContext, spanning: &[GrassmannElement], stabilizing_evens: Vec<GrassmannElement>) -> Result<Self> {
        for b in &stabilizing_evens {
            if !b.parity().is_even_or_zero() {
                return Err(Error::Parity(format!("stabilizing element {b} is not even")));
            }
        }
        let span = OddSubspace::span(ctx, spanning)?;
        let annihilator = annihilator_odd(ctx, span.basis())?;
        Ok(Self {
            span,
            annihilator,
            stabilizing_evens,
        })
    }

    pub fn span(&self) -> &OddSubspace {
        &self.span
    }

    pub fn annihilator(&self) -> &AnnihilatorBasis {
        &self.annihilator
    }

    pub fn stabilizing_evens(&self) -> &[GrassmannElement] {
        &self.stabilizing_evens
    }

    /// Whether every supplied even element maps the span into itself.
    pub fn is_stable(&self) -> bool {
        self.stabilizing_evens
            .iter()
            .all(|b| self.span.basis().iter().all(|g| self.span.contains(&(b * g))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Left: upper-right entry in the span and lower-left entry in its
/// annihilator. Right: the other way round.
pub fn gamma_membership(m: &SuperMatrix, g: &GammaSet, side: Side) -> Result<bool> {
    if m.p() != 1 || m.q() != 1 {
        return Err(Error::Shape(format!("expected a (1|1) matrix, got ({}|{})", m.p(), m.q())));
    }
    if !m.is_antitriangle() {
        return Err(Error::Shape("matrix is not odd-reduced".into()));
    }
    let (upper, lower) = (m.get(0, 1), m.get(1, 0));
    Ok(match side {
        Side::Left => g.span().contains(upper) && g.annihilator().contains(lower),
        Side::Right => g.annihilator().contains(upper) && g.span().contains(lower),
    })
}

fn require_antitriangles(family: &[SuperMatrix]) -> Result<()> {
    let Some(first) = family.first() else {
        return Ok(());
    };
    for (i, m) in family.iter().enumerate() {
        if m.p() != first.p() || m.q() != first.q() || m.generators() != first.generators() {
            return Err(Error::Shape(format!("member {i} has a different shape or context")));
        }
        if !m.is_antitriangle() {
            return Err(Error::Shape(format!("member {i} is not an antitriangle")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongGammaReport {
    /// Ordered pairs `(i, j)` with `Gamma_i Delta_j != 0`.
    pub semigroup_violations: Vec<(usize, usize)>,
    /// Ordered pairs `(i, j)` with `Delta_i Gamma_j != 0`.
    pub strong_violations: Vec<(usize, usize)>,
}

impl StrongGammaReport {
    pub fn is_semigroup(&self) -> bool {
        self.semigroup_violations.is_empty()
    }

    pub fn is_strong(&self) -> bool {
        self.semigroup_violations.is_empty() && self.strong_violations.is_empty()
    }
}

pub fn strong_gamma_check(family: &[SuperMatrix]) -> Result<StrongGammaReport> {
    require_antitriangles(family)?;
    let mut report = StrongGammaReport {
        semigroup_violations: Vec::new(),
        strong_violations: Vec::new(),
    };
    let blocks: Vec<(Mat<GrassmannElement>, Mat<GrassmannElement>)> = family.iter().map(|m| (m.gamma(), m.delta())).collect();
    for (i, (gamma_i, delta_i)) in blocks.iter().enumerate() {
        for (j, (gamma_j, delta_j)) in blocks.iter().enumerate() {
            if !gamma_i.checked_mul(delta_j)?.is_zero() {
                report.semigroup_violations.push((i, j));
            }
            if !delta_i.checked_mul(gamma_j)?.is_zero() {
                report.strong_violations.push((i, j));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BandRelation {
    LeftZero,
    RightZero,
    Both,
    Neither,
}

/// Block conditions under which an antitriangle pair satisfies
/// `M1 M2 = M1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LeftZeroConditions {
    pub gamma_delta_vanishes: bool,
    pub gamma_absorbs_b: bool,
    pub b_maps_delta: bool,
    pub b_block_preserved: bool,
}

impl LeftZeroConditions {
    pub fn all(&self) -> bool {
        self.gamma_delta_vanishes && self.gamma_absorbs_b && self.b_maps_delta && self.b_block_preserved
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandReport {
    pub relation: BandRelation,
    /// Present when both inputs are antitriangles.
    pub component_conditions: Option<LeftZeroConditions>,
    /// The component route agrees with direct multiplication.
    pub consistent: bool,
}

pub fn left_zero_conditions(m1: &SuperMatrix, m2: &SuperMatrix) -> Result<LeftZeroConditions> {
    require_antitriangles(&[m1.clone(), m2.clone()])?;
    let (g1, d1, b1) = (m1.gamma(), m1.delta(), m1.b());
    let (g2, d2, b2) = (m2.gamma(), m2.delta(), m2.b());
    Ok(LeftZeroConditions {
        gamma_delta_vanishes: g1.checked_mul(&d2)?.is_zero(),
        gamma_absorbs_b: g1.checked_mul(&b2)? == g1,
        b_maps_delta: b1.checked_mul(&d2)? == d1,
        b_block_preserved: b1.checked_mul(&b2)?.checked_add(&d1.checked_mul(&g2)?)? == b1,
    })
}

pub fn band_pair_check(m1: &SuperMatrix, m2: &SuperMatrix) -> Result<BandReport> {
    let product = m1.mat_mul(m2)?;
    let left = product == *m1;
    let right = product == *m2;
    let relation = match (left, right) {
        (true, true) => BandRelation::Both,
        (true, false) => BandRelation::LeftZero,
        (false, true) => BandRelation::RightZero,
        (false, false) => BandRelation::Neither,
    };
    let component_conditions = if m1.is_antitriangle() && m2.is_antitriangle() {
        Some(left_zero_conditions(m1, m2)?)
    } else {
        None
    };
    let consistent = component_conditions.is_none_or(|c| c.all() == left);
    Ok(BandReport {
        relation,
        component_conditions,
        consistent,
    })
}

/// `Gamma B = Gamma`, `B Delta = Delta` and `B^2 = B`.
pub fn idempotent_strong_check(m: &SuperMatrix) -> Result<bool> {
    require_antitriangles(std::slice::from_ref(m))?;
    let (g, d, b) = (m.gamma(), m.delta(), m.b());
    Ok(g.checked_mul(&b)? == g && b.checked_mul(&d)? == d && b.checked_mul(&b)? == b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub product: SuperMatrix,
    pub closed_form: SuperMatrix,
    pub matches_closed_form: bool,
    /// Berezinian of the product, or why it is undefined.
    pub ber: std::result::Result<GrassmannElement, Error>,
    /// `-det(Gamma_1 A Delta_n) / det(B_1 A B_n)` with `A = B_2 ... B_{n-1}`.
    pub ber_closed_form: std::result::Result<GrassmannElement, Error>,
}

impl ChainReport {
    /// `None` when either side is undefined.
    pub fn ber_matches(&self) -> Option<bool> {
        match (&self.ber, &self.ber_closed_form) {
            (Ok(a), Ok(b)) => Some(a == b),
            _ => None,
        }
    }
}

pub fn chain_product_verify(family: &[SuperMatrix]) -> Result<ChainReport> {
    if family.len() < 2 {
        return Err(Error::Shape(format!("chain needs at least two members, got {}", family.len())));
    }
    if !strong_gamma_check(family)?.is_strong() {
        return Err(Error::Shape("family is not strong".into()));
    }
    let first = &family[0];
    let last = &family[family.len() - 1];
    let mut product = first.clone();
    for m in &family[1..] {
        product = product.mat_mul(m)?;
    }
    let n = first.generators();
    let mut inner = Mat::identity(n, first.q());
    for m in &family[1..family.len() - 1] {
        inner = inner.checked_mul(&m.b())?;
    }
    let gamma = first.gamma().checked_mul(&inner)?.checked_mul(&last.b())?;
    let delta = first.b().checked_mul(&inner)?.checked_mul(&last.delta())?;
    let b = first.b().checked_mul(&inner)?.checked_mul(&last.b())?;
    let closed_form = Super::from_blocks(&Mat::zeros(n, first.p(), first.p()), &gamma, &delta, &b)?;

    let ber_closed_form = (|| {
        let det_b = b.det_even()?;
        let inv = det_b
            .invert()
            .map_err(|_| Error::NotInvertible(format!("det of the product's B block {det_b} has zero body")))?;
        let numer = first.gamma().checked_mul(&inner)?.checked_mul(&last.delta())?.det_even()?;
        Ok(-(&numer * &inv))
    })();
    Ok(ChainReport {
        matches_closed_form: product == closed_form,
        ber: product.berezinian(),
        product,
        closed_form,
        ber_closed_form,
    })
}

/// Reparametrisations tried when testing whether a family is closed under
/// multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Substitution {
    #[serde(rename = "t")]
    First,
    #[serde(rename = "s")]
    Second,
    #[serde(rename = "t+s")]
    Sum,
    #[serde(rename = "ts")]
    Product,
}

impl Substitution {
    pub const MENU: [Substitution; 4] = [Self::First, Self::Second, Self::Sum, Self::Product];

    pub fn value(self, n: u8) -> TimePoly {
        let t = TimePoly::var(n, Time::T);
        let s = TimePoly::var(n, Time::S);
        match self {
            Self::First => t,
            Self::Second => s,
            Self::Sum => &t + &s,
            Self::Product => &t * &s,
        }
    }
}

impl std::fmt::Display for Substitution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::First => "t",
            Self::Second => "s",
            Self::Sum => "t+s",
            Self::Product => "ts",
        })
    }
}

pub(crate) fn require_single_parameter(f: &ParamSuperMatrix) -> Result<()> {
    if f.mat().entries().any(|x| x.uses(Time::S)) {
        return Err(Error::Shape("family must depend on t only".into()));
    }
    Ok(())
}

/// Rewrites `t` as `value` in every entry.
pub fn substitute_time(f: &ParamSuperMatrix, value: &TimePoly) -> Result<ParamSuperMatrix> {
    f.try_map(|x| x.substitute(Time::T, value))
}

/// The first substitution `phi` in the menu with `F(t) F(s) = F(phi)`.
pub fn closure_check(family: &ParamSuperMatrix) -> Result<Option<Substitution>> {
    require_single_parameter(family)?;
    let n = family.generators();
    let renamed = substitute_time(family, &TimePoly::var(n, Time::S))?;
    let product = family.mat_mul(&renamed)?;
    for phi in Substitution::MENU {
        if substitute_time(family, &phi.value(n))? == product {
            return Ok(Some(phi));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> GrassmannElement {
        GrassmannElement::parse_expr(3, s).unwrap()
    }

    fn sm(rows: &[&[&str]]) -> SuperMatrix {
        Super::new(1, 1, rows.iter().map(|r| r.iter().map(|s| el(s)).collect()).collect()).unwrap()
    }

    fn p_at(t: &str) -> SuperMatrix {
        sm(&[&["0", &format!("{t}*xi1")], &["xi1", "1"]])
    }

    fn q_at(t: &str) -> SuperMatrix {
        sm(&[&["0", "xi1"], &[&format!("{t}*xi1"), "1"]])
    }

    fn ctx() -> AlgebraContext {
        AlgebraContext::new(3).unwrap()
    }

    #[test]
    fn membership_examples() {
        let two = AlgebraContext::new(2).unwrap();
        let e2 = |s: &str| GrassmannElement::parse_expr(2, s).unwrap();
        let g = GammaSet::new(&two, &[e2("xi1")], vec![]).unwrap();
        let m = Super::new(1, 1, vec![vec![e2("0"), e2("xi1")], vec![e2("xi1"), e2("1")]]).unwrap();
        assert!(gamma_membership(&m, &g, Side::Left).unwrap());
        let m = Super::new(1, 1, vec![vec![e2("0"), e2("xi2")], vec![e2("xi1"), e2("1")]]).unwrap();
        assert!(!gamma_membership(&m, &g, Side::Left).unwrap());

        let everything = GammaSet::new(&ctx(), &[el("xi1"), el("xi2"), el("xi3"), el("xi1*xi2*xi3")], vec![]).unwrap();
        let m = sm(&[&["0", "xi2 + xi3"], &["0", "1 + xi1*xi2"]]);
        assert!(gamma_membership(&m, &everything, Side::Left).unwrap());

        let general = sm(&[&["1", "xi1"], &["xi1", "1"]]);
        assert!(matches!(gamma_membership(&general, &everything, Side::Left), Err(Error::Shape(_))));
    }

    #[test]
    fn right_membership_mirrors_left() {
        let g = GammaSet::new(&ctx(), &[el("xi1")], vec![]).unwrap();
        let m = sm(&[&["0", "xi1*xi2*xi3"], &["xi1", "1"]]);
        assert!(gamma_membership(&m, &g, Side::Right).unwrap());
        assert!(!gamma_membership(&m, &g, Side::Left).unwrap());
    }

    #[test]
    fn stabilizing_evens() {
        let g = GammaSet::new(&ctx(), &[el("xi1"), el("xi1*xi2*xi3")], vec![el("2 + xi2*xi3")]).unwrap();
        assert!(g.is_stable());
        let g = GammaSet::new(&ctx(), &[el("xi1")], vec![el("xi2*xi3")]).unwrap();
        assert!(!g.is_stable());
        assert!(matches!(GammaSet::new(&ctx(), &[el("xi1")], vec![el("xi1")]), Err(Error::Parity(_))));
    }

    #[test]
    fn strong_examples() {
        assert!(strong_gamma_check(&[p_at("2"), p_at("5")]).unwrap().is_strong());
        let report = strong_gamma_check(&[sm(&[&["0", "xi1"], &["xi2", "1"]])]).unwrap();
        assert!(!report.is_strong());
        assert_eq!(report.strong_violations, vec![(0, 0)]);
        // Gamma Delta = xi1 xi2 fails as well for this singleton.
        assert_eq!(report.semigroup_violations, vec![(0, 0)]);
        assert!(strong_gamma_check(&[]).unwrap().is_strong());
        assert!(matches!(strong_gamma_check(&[sm(&[&["1", "0"], &["0", "1"]])]), Err(Error::Shape(_))));
    }

    #[test]
    fn band_examples() {
        let r = band_pair_check(&p_at("2"), &p_at("5")).unwrap();
        assert_eq!(r.relation, BandRelation::LeftZero);
        assert!(r.consistent && r.component_conditions.unwrap().all());
        let r = band_pair_check(&q_at("2"), &q_at("5")).unwrap();
        assert_eq!(r.relation, BandRelation::RightZero);
        assert!(r.consistent);
        let e = p_at("1");
        assert_eq!(band_pair_check(&e, &e).unwrap().relation, BandRelation::Both);
        let t = sm(&[&["1", "xi1"], &["0", "1"]]);
        let r = band_pair_check(&t, &t).unwrap();
        assert_eq!(r.relation, BandRelation::Neither);
        assert!(r.component_conditions.is_none());
    }

    #[test]
    fn left_zero_conditions_use_the_first_delta() {
        // Delta differs between the two members; M1 M2 = M1 still holds.
        let m1 = sm(&[&["0", "xi1"], &["xi1", "1"]]);
        let m2 = sm(&[&["0", "2*xi1"], &["xi1", "1"]]);
        let r = band_pair_check(&m1, &m2).unwrap();
        assert_eq!(r.relation, BandRelation::LeftZero);
        assert!(r.consistent);
    }

    #[test]
    fn idempotent_examples() {
        assert!(idempotent_strong_check(&p_at("1")).unwrap());
        assert!(!idempotent_strong_check(&sm(&[&["0", "xi1"], &["xi1", "0"]])).unwrap());
        assert!(idempotent_strong_check(&SuperMatrix::zero(3, 1, 1)).unwrap());
    }

    #[test]
    fn chains() {
        let report = chain_product_verify(&[p_at("1"), p_at("2"), p_at("3")]).unwrap();
        assert_eq!(report.product, p_at("1"));
        assert!(report.matches_closed_form);
        assert_eq!(report.ber_matches(), Some(true));
        let report = chain_product_verify(&[p_at("4"), p_at("7")]).unwrap();
        assert!(report.matches_closed_form);
        assert!(report.product.a().is_zero());
        assert!(matches!(chain_product_verify(&[p_at("1")]), Err(Error::Shape(_))));
        let weak = sm(&[&["0", "xi1"], &["xi2", "1"]]);
        assert!(matches!(chain_product_verify(&[weak.clone(), weak]), Err(Error::Shape(_))));
    }

    #[test]
    fn chain_with_nilpotent_b_has_undefined_berezinian() {
        let y = sm(&[&["0", "xi1"], &["xi1", "0"]]);
        let report = chain_product_verify(&[y.clone(), y]).unwrap();
        assert!(report.product.is_zero());
        assert!(report.matches_closed_form);
        assert!(matches!(report.ber, Err(Error::NotInvertible(_))));
        assert_eq!(report.ber_matches(), None);
    }
}
