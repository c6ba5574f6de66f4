//! Families `K(t) = sum_m K_m t^m` studied through their constant
//! components: band systems, the generalised functional and differential
//! equations, and the equivalence for `t`-linear families.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{derivative, lift};
use crate::gamma::{require_single_parameter, substitute_time};
use crate::grassmann::{int, GrassmannElement, Rational};
use crate::io::DEGREE_CAP;
use crate::poly::{Time, TimePoly};
use crate::supermatrix::{ParamSuperMatrix, SuperMatrix};

/// `K_0, ..., K_d` with a shared shape and context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentList {
    components: Vec<SuperMatrix>,
}

impl ComponentList {
    pub fn new(components: Vec<SuperMatrix>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Shape("component list is empty".into()));
        };
        if components.len() > DEGREE_CAP as usize + 1 {
            return Err(Error::Config(format!("{} components exceed degree cap {DEGREE_CAP}", components.len())));
        }
        for (i, k) in components.iter().enumerate() {
            if k.p() != first.p() || k.q() != first.q() {
                return Err(Error::Shape(format!("component {i} has a different shape")));
            }
            if k.generators() != first.generators() {
                return Err(Error::Context {
                    left: first.generators(),
                    right: k.generators(),
                });
            }
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[SuperMatrix] {
        &self.components
    }

    /// Highest power present in the list (trailing zero components count).
    pub fn degree(&self) -> usize {
        self.components.len() - 1
    }

    pub fn base(&self) -> &SuperMatrix {
        &self.components[0]
    }

    /// `A_K = K'(0) = K_1`, or zero for constant families.
    pub fn generator(&self) -> SuperMatrix {
        self.components.get(1).cloned().unwrap_or_else(|| self.zero())
    }

    fn zero(&self) -> SuperMatrix {
        let b = self.base();
        SuperMatrix::zero(b.generators(), b.p(), b.q())
    }

    pub fn to_family(&self) -> Result<ParamSuperMatrix> {
        let n = self.base().generators();
        let mut total = ParamSuperMatrix::zero(n, self.base().p(), self.base().q());
        for (m, k) in self.components.iter().enumerate() {
            let power = TimePoly::monomial(GrassmannElement::one(n), [m as i32, 0]);
            total = total.mat_add(&lift(k).scale_by(&power)?)?;
        }
        Ok(total)
    }
}

/// Coefficient matrices of each power of `t`.
pub fn components_of(f: &ParamSuperMatrix) -> Result<ComponentList> {
    require_single_parameter(f)?;
    let degree = f.mat().entries().map(|x| x.degree(Time::T)).max().unwrap_or(0).max(0);
    if degree > DEGREE_CAP {
        return Err(Error::Config(format!("degree {degree} exceeds cap {DEGREE_CAP}")));
    }
    let components = (0..=degree)
        .map(|m| f.map(|x| x.coefficient([m, 0])))
        .collect::<Result<Vec<_>>>()?;
    ComponentList::new(components)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentRelation {
    /// `K_0^2 = K_0`.
    BaseIdempotent,
    /// `K_i^2 = Z`.
    Nilpotent,
    /// `K_i K_0 = K_i`.
    AbsorbsBase,
    /// `K_0 K_i = Z`.
    BaseAnnihilates,
    /// `K_i K_j = Z` for `i != j`.
    Orthogonal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub relation: ComponentRelation,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandSystemReport {
    pub failures: Vec<RelationFailure>,
    /// `K(t) K(s) = K(t)` for the reconstructed family.
    pub band_equation: bool,
}

impl BandSystemReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    /// The component system and the band equation agree.
    pub fn consistent(&self) -> bool {
        self.holds() == self.band_equation
    }
}

fn is_band(f: &ParamSuperMatrix) -> Result<bool> {
    Ok(crate::families::compose(f, f)? == *f)
}

pub fn band_component_system_check(c: &ComponentList) -> Result<BandSystemReport> {
    let k = c.components();
    let zero = c.zero();
    let mut failures = Vec::new();
    let mut fail = |relation, indices: Vec<usize>| failures.push(RelationFailure { relation, indices });
    if k[0].mat_mul(&k[0])? != k[0] {
        fail(ComponentRelation::BaseIdempotent, vec![0]);
    }
    for i in 1..k.len() {
        if k[i].mat_mul(&k[i])? != zero {
            fail(ComponentRelation::Nilpotent, vec![i]);
        }
        if k[i].mat_mul(&k[0])? != k[i] {
            fail(ComponentRelation::AbsorbsBase, vec![i]);
        }
        if k[0].mat_mul(&k[i])? != zero {
            fail(ComponentRelation::BaseAnnihilates, vec![i]);
        }
        for j in 1..k.len() {
            if i != j && k[i].mat_mul(&k[j])? != zero {
                fail(ComponentRelation::Orthogonal, vec![i, j]);
            }
        }
    }
    Ok(BandSystemReport {
        failures,
        band_equation: is_band(&c.to_family()?)?,
    })
}

fn binomial(l: i64, m: i64) -> Rational {
    let mut acc = int(1);
    for i in 0..m {
        acc = acc * int(l - i) / int(i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    /// `K(t + s) - K(t) K(s)`.
    pub raw: ParamSuperMatrix,
    /// `sum_{m=1}^d sum_{l=m}^d K_l C(l, m) s^m t^(l - m)`.
    pub expansion: ParamSuperMatrix,
}

impl ResidualReport {
    pub fn matches(&self) -> bool {
        self.raw == self.expansion
    }
}

pub fn n_functional_residual(c: &ComponentList) -> Result<ResidualReport> {
    let k = c.components();
    let n = c.base().generators();
    let d = c.degree() as i64;
    let raw = crate::families::functional_residual(&c.to_family()?)?;
    let mut expansion = ParamSuperMatrix::zero(n, c.base().p(), c.base().q());
    for m in 1..=d {
        for l in m..=d {
            let weight = TimePoly::monomial(GrassmannElement::scalar(n, binomial(l, m)), [(l - m) as i32, m as i32]);
            expansion = expansion.mat_add(&lift(&k[l as usize]).scale_by(&weight)?)?;
        }
    }
    Ok(ResidualReport { raw, expansion })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectReport {
    /// `K'(t) - A_K K(t)`.
    pub defect: ParamSuperMatrix,
    /// `sum_{m=2}^d m K_m t^(m - 1)`.
    pub higher_order: ParamSuperMatrix,
}

impl DefectReport {
    pub fn matches(&self) -> bool {
        self.defect == self.higher_order
    }
}

pub fn n_differential_defect(c: &ComponentList) -> Result<DefectReport> {
    let family = c.to_family()?;
    let n = c.base().generators();
    let defect = derivative(&family, Time::T).mat_sub(&lift(&c.generator()).mat_mul(&family)?)?;
    let mut higher_order = ParamSuperMatrix::zero(n, c.base().p(), c.base().q());
    for (m, k) in c.components().iter().enumerate().skip(2) {
        let weight = TimePoly::monomial(GrassmannElement::scalar(n, int(m as i64)), [m as i32 - 1, 0]);
        higher_order = higher_order.mat_add(&lift(k).scale_by(&weight)?)?;
    }
    Ok(DefectReport { defect, higher_order })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// `K(t) K(s) = K(t)`.
    pub band: bool,
    /// `K(t + s) = K(t) K(s) + K'(t) s`.
    pub functional: bool,
    /// `K' = A_K K` together with `K_0^2 = K_0` and `K_0 A_K = Z`.
    pub differential: bool,
    /// `K' = A_K K` alone.
    pub differential_equation: bool,
    /// `K_1^2 = Z`.
    pub generator_nilpotent: bool,
    /// `K_1 K_0 = K_1`.
    pub generator_absorbs_base: bool,
    pub base_idempotent: bool,
    pub base_orthogonal_to_generator: bool,
    pub band_residual: ParamSuperMatrix,
    pub functional_residual: ParamSuperMatrix,
    pub differential_residual: ParamSuperMatrix,
}

impl EquivalenceReport {
    pub fn statements(&self) -> (bool, bool, bool) {
        (self.band, self.functional, self.differential)
    }

    pub fn agree(&self) -> bool {
        self.band == self.functional && self.functional == self.differential
    }
}

pub fn equivalence_report(f: &ParamSuperMatrix, restrict_linear: bool) -> Result<EquivalenceReport> {
    let c = components_of(f)?;
    if restrict_linear && c.degree() > 1 {
        return Err(Error::Shape(format!("family has degree {} in t, expected at most 1", c.degree())));
    }
    let n = f.generators();
    let s = TimePoly::var(n, Time::S);
    let k0 = c.base().clone();
    let a_k = c.generator();
    let zero = c.zero();
    let dk = derivative(f, Time::T);

    let band_residual = crate::families::compose(f, f)?.mat_sub(f)?;
    let functional_residual = crate::families::functional_residual(f)?.mat_sub(&dk.scale_by(&s)?)?;
    let differential_residual = dk.mat_sub(&lift(&a_k).mat_mul(f)?)?;

    let base_idempotent = k0.mat_mul(&k0)? == k0;
    let base_orthogonal_to_generator = k0.mat_mul(&a_k)? == zero;
    let differential_equation = differential_residual.is_zero();
    Ok(EquivalenceReport {
        band: band_residual.is_zero(),
        functional: functional_residual.is_zero(),
        differential: differential_equation && base_idempotent && base_orthogonal_to_generator,
        differential_equation,
        generator_nilpotent: a_k.mat_mul(&a_k)? == zero,
        generator_absorbs_base: a_k.mat_mul(&k0)? == a_k,
        base_idempotent,
        base_orthogonal_to_generator,
        band_residual,
        functional_residual,
        differential_residual,
    })
}

/// `K(t)` rebuilt with `t` replaced by `value`; used to cross-check
/// component extraction.
pub fn reparametrise(c: &ComponentList, value: &TimePoly) -> Result<ParamSuperMatrix> {
    substitute_time(&c.to_family()?, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_family, FamilyKind};

    fn el(s: &str) -> GrassmannElement {
        GrassmannElement::parse_expr(4, s).unwrap()
    }

    fn comps(alpha: &str) -> (SuperMatrix, SuperMatrix, SuperMatrix) {
        let alpha = el(alpha);
        let p = make_family(FamilyKind::P, &alpha).unwrap();
        let c = components_of(&p).unwrap();
        (c.components()[0].clone(), c.components()[1].clone(), SuperMatrix::identity(4, 1, 1))
    }

    #[test]
    fn extraction() {
        let alpha = el("xi1");
        let p = make_family(FamilyKind::P, &alpha).unwrap();
        let c = components_of(&p).unwrap();
        assert_eq!(c.degree(), 1);
        assert_eq!(lift(&c.components()[1]), make_family(FamilyKind::A, &alpha).unwrap());
        assert_eq!(c.to_family().unwrap(), p);
        let t = components_of(&make_family(FamilyKind::T, &alpha).unwrap()).unwrap();
        assert_eq!(t.components()[0], SuperMatrix::identity(4, 1, 1));
        let z = components_of(&make_family(FamilyKind::Z, &alpha).unwrap()).unwrap();
        assert_eq!(z.degree(), 0);
        assert!(z.base().is_zero());
        assert_eq!(reparametrise(&c, &TimePoly::var(4, Time::T)).unwrap(), p);
    }

    #[test]
    fn band_systems() {
        let (p0, a, id) = comps("xi1");
        let zero = SuperMatrix::zero(4, 1, 1);
        let r = band_component_system_check(&ComponentList::new(vec![p0.clone(), a.clone()]).unwrap()).unwrap();
        assert!(r.holds() && r.band_equation);
        let r = band_component_system_check(&ComponentList::new(vec![id, a.clone()]).unwrap()).unwrap();
        assert!(!r.holds() && r.consistent());
        assert!(r.failures.contains(&RelationFailure {
            relation: ComponentRelation::BaseAnnihilates,
            indices: vec![1]
        }));
        let r = band_component_system_check(&ComponentList::new(vec![p0, zero, a]).unwrap()).unwrap();
        assert!(r.holds() && r.band_equation);
    }

    #[test]
    fn power_type_residuals() {
        let (p0, a, _) = comps("xi2");
        let zero = SuperMatrix::zero(4, 1, 1);
        let linear = ComponentList::new(vec![p0.clone(), a.clone()]).unwrap();
        let r = n_functional_residual(&linear).unwrap();
        assert!(r.matches());
        assert_eq!(r.raw, lift(&a).scale_by(&TimePoly::var(4, Time::S)).unwrap());

        let quadratic = ComponentList::new(vec![p0.clone(), zero.clone(), a.clone()]).unwrap();
        let r = n_functional_residual(&quadratic).unwrap();
        assert!(r.matches());
        let t = TimePoly::var(4, Time::T);
        let s = TimePoly::var(4, Time::S);
        let expected = lift(&a).scale_by(&(&(&t * &s).scale(&int(2)) + &(&s * &s))).unwrap();
        assert_eq!(r.raw, expected);

        let d = n_differential_defect(&quadratic).unwrap();
        assert_eq!(d.defect, lift(&a).scale_by(&t.scale(&int(2))).unwrap());
        assert!(d.matches());
        let d = n_differential_defect(&linear).unwrap();
        assert!(d.defect.is_zero() && d.matches());

        let only_zero = ComponentList::new(vec![zero]).unwrap();
        assert!(n_functional_residual(&only_zero).unwrap().raw.is_zero());
    }

    #[test]
    fn exponential_satisfies_differential_equation() {
        let (_, a, id) = comps("xi1");
        let d = n_differential_defect(&ComponentList::new(vec![id, a]).unwrap()).unwrap();
        assert!(d.defect.is_zero());
    }

    #[test]
    fn equivalence_examples() {
        let alpha = el("xi1");
        let r = equivalence_report(&make_family(FamilyKind::P, &alpha).unwrap(), true).unwrap();
        assert_eq!(r.statements(), (true, true, true));
        let r = equivalence_report(&make_family(FamilyKind::T, &alpha).unwrap(), true).unwrap();
        assert_eq!(r.statements(), (false, false, false));
        assert!(r.differential_equation && !r.base_orthogonal_to_generator);
        let r = equivalence_report(&make_family(FamilyKind::Z, &alpha).unwrap(), true).unwrap();
        assert_eq!(r.statements(), (true, true, true));

        let (p0, a, _) = comps("xi1");
        let quad = ComponentList::new(vec![p0, SuperMatrix::zero(4, 1, 1), a]).unwrap().to_family().unwrap();
        assert!(matches!(equivalence_report(&quad, true), Err(Error::Shape(_))));
        assert!(equivalence_report(&quad, false).is_ok());
    }

    #[test]
    fn component_list_validation() {
        assert!(matches!(ComponentList::new(vec![]), Err(Error::Shape(_))));
        let mixed = vec![SuperMatrix::zero(4, 1, 1), SuperMatrix::zero(4, 2, 1)];
        assert!(matches!(ComponentList::new(mixed), Err(Error::Shape(_))));
        assert!(matches!(ComponentList::new(vec![SuperMatrix::zero(4, 1, 1); 10]), Err(Error::Config(_))));
    }
}
