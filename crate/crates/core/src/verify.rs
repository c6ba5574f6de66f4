//! Seeded verification suites and the report they produce.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::analysis::{
    band_component_system_check, equivalence_report, n_differential_defect, n_functional_residual, ComponentList,
};
use crate::annihilator::annihilator_odd;
use crate::cayley::{cayley_table_verify, OPERANDS};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::evolution::{
    cauchy_defect, commutativity_obstruction, expected_resolvent_p, expected_resolvent_t, initial_vector, laplace,
    lift_laurent, moving_time_check, orbit, orbit_commutator, p_defect_factor, resolvent_defect, TimeLaw,
};
use crate::families::{
    differential_sequence, eval_t, generator_of, intertwiner_check, make_family, nilpotent_time_commute_check,
    semigroup_law_checks, FamilyKind,
};
use crate::gamma::{band_pair_check, chain_product_verify, closure_check, idempotent_strong_check, BandRelation, Substitution};
use crate::grassmann::{rational, GrassmannElement, Parity, MAX_GENERATORS};
use crate::linalg::{element_vector, Echelon};
use crate::random::Sampler;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Algebra,
    Supermatrix,
    Gamma,
    Families,
    Analysis,
    Resolvent,
    All,
}

impl Suite {
    pub const SINGLE: [Suite; 6] = [
        Self::Algebra,
        Self::Supermatrix,
        Self::Gamma,
        Self::Families,
        Self::Analysis,
        Self::Resolvent,
    ];

    fn members(self) -> Vec<Suite> {
        match self {
            Self::All => Self::SINGLE.to_vec(),
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Algebra => "algebra",
            Self::Supermatrix => "supermatrix",
            Self::Gamma => "gamma",
            Self::Families => "families",
            Self::Analysis => "analysis",
            Self::Resolvent => "resolvent",
            Self::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::SINGLE
            .into_iter()
            .chain([Self::All])
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            _ => Err(Error::Config(format!("unknown format {s:?}; expected text or json"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub generators: u8,
    pub seed: u64,
    pub suite: Suite,
    pub samples: usize,
    /// Record wall-clock durations; off by default so reports are
    /// reproducible byte for byte.
    #[serde(skip)]
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            generators: 4,
            seed: 42,
            suite: Suite::All,
            samples: 200,
            timings: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.generators == 0 || self.generators > MAX_GENERATORS {
            return Err(Error::Config(format!(
                "generators must be in 1..={MAX_GENERATORS}, got {}",
                self.generators
            )));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub suite: Suite,
    #[serde(flatten)]
    pub check: Check,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExitReport {
    pub config: SuiteConfig,
    pub entries: Vec<Entry>,
    /// Reference-table cells that differ from direct multiplication.
    /// Reported, not counted as failures.
    pub findings: Vec<Value>,
    pub passed: bool,
}

impl ExitReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.check.passed)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(self).expect("report serializes");
                text.push('\n');
                text
            }
            Format::Text => self.to_string(),
        }
    }
}

impl fmt::Display for ExitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut current = None;
        for e in &self.entries {
            if current != Some(e.suite) {
                writeln!(f, "[{}]", e.suite)?;
                current = Some(e.suite);
            }
            let verdict = if e.check.passed { "pass" } else { "FAIL" };
            write!(f, "  {}: {verdict}", e.check.label)?;
            if let Some(ms) = e.duration_ms {
                write!(f, " ({ms:.1} ms)")?;
            }
            writeln!(f)?;
            if let Some(c) = &e.check.counterexample {
                writeln!(f, "    counterexample: {c}")?;
            }
        }
        for finding in &self.findings {
            writeln!(f, "finding: {finding}")?;
        }
        let failed = self.failures().count();
        writeln!(f, "{} checks, {failed} failed", self.entries.len())
    }
}

/// Collects checks by label, keeping the first failure of each.
#[derive(Default)]
struct Tally {
    checks: BTreeMap<String, Check>,
    findings: Vec<Value>,
}

impl Tally {
    fn add(&mut self, check: Check) {
        match self.checks.get_mut(&check.label) {
            None => {
                self.checks.insert(check.label.clone(), check);
            }
            Some(prev) if prev.passed && !check.passed => *prev = check,
            Some(_) => {}
        }
    }

    fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.add(c);
        }
    }

    /// Records an error raised while checking as a failure of `label`.
    fn guard(&mut self, label: &str, outcome: Result<()>) {
        match outcome {
            Ok(()) => self.add(Check::new(label, true)),
            Err(e) => self.add(Check::new(label, false).note("error", e.to_string())),
        }
    }
}

fn suite_seed(seed: u64, suite: Suite) -> u64 {
    seed ^ (suite as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<ExitReport> {
    cfg.validate()?;
    let mut entries = Vec::new();
    let mut findings = Vec::new();
    for suite in cfg.suite.members() {
        let start = Instant::now();
        let mut sampler = Sampler::new(cfg.generators, suite_seed(cfg.seed, suite))?;
        let mut tally = Tally::default();
        let run = match suite {
            Suite::Algebra => algebra(&mut sampler, cfg.samples, &mut tally),
            Suite::Supermatrix => supermatrix(&mut sampler, cfg.samples, &mut tally),
            Suite::Gamma => gamma(&mut sampler, cfg.samples, &mut tally),
            Suite::Families => families(&mut sampler, cfg.samples, &mut tally),
            Suite::Analysis => analysis(&mut sampler, cfg.samples, &mut tally),
            Suite::Resolvent => resolvent(&mut sampler, cfg.samples, &mut tally),
            Suite::All => unreachable!("expanded above"),
        };
        tally.guard("suite-completes", run);
        let elapsed = cfg.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        for check in tally.checks.into_values() {
            entries.push(Entry {
                suite,
                check,
                duration_ms: elapsed,
            });
        }
        findings.extend(tally.findings);
    }
    let passed = entries.iter().all(|e| e.check.passed);
    Ok(ExitReport {
        config: cfg.clone(),
        entries,
        findings,
        passed,
    })
}

fn nonzero_odd(s: &mut Sampler) -> GrassmannElement {
    loop {
        let x = s.odd();
        if !x.is_zero() {
            return x;
        }
    }
}

fn algebra(s: &mut Sampler, samples: usize, t: &mut Tally) -> Result<()> {
    let n = s.generators();
    let one = GrassmannElement::one(n);
    let odd_dim = s.context().odd_basis().len();
    for _ in 0..samples {
        let (x, y, z) = (s.element(), s.element(), s.element());
        t.add(Check::equal("associativity", &(&(&x * &y) * &z), &(&x * &(&y * &z))).with("x", &x).with("y", &y).with("z", &z));
        t.add(Check::equal("distributivity", &(&x * &(&y + &z)), &(&(&x * &y) + &(&x * &z))).with("x", &x).with("y", &y).with("z", &z));

        let (a, b, e) = (s.odd(), s.odd(), s.even());
        t.add(Check::equal("odd-anticommute", &(&a * &b), &-(&b * &a)).with("a", &a).with("b", &b));
        t.add(Check::equal("odd-square-vanishes", &(&a * &a), &GrassmannElement::zero(n)).with("a", &a));
        t.add(Check::equal("even-central", &(&e * &x), &(&x * &e)).with("e", &e).with("x", &x));
        let graded = (&a * &b).parity().is_even_or_zero() && (&a * &e).parity().is_odd_or_zero() && (&e * &e).parity().is_even_or_zero();
        t.add(Check::new("grading", graded).with("a", &a).with("b", &b).with("e", &e));

        let (body, soul) = x.body_soul();
        t.add(Check::equal("body-soul-split", &(&GrassmannElement::scalar(n, body.clone()) + &soul), &x).with("x", &x));
        t.add(Check::new("soul-nilpotent", soul.pow(n as u32 + 1).is_zero()).with("x", &x));
        if body != rational(0, 1) {
            let inv = x.invert()?;
            t.add(Check::equal("inverse-right", &(&x * &inv), &one).with("x", &x));
            t.add(Check::equal("inverse-left", &(&inv * &x), &one).with("x", &x));
        } else {
            t.add(Check::new("inverse-of-nilpotent-rejected", matches!(x.invert(), Err(Error::NotInvertible(_)))).with("x", &x));
        }

        let targets = if s.coin(0.5) { vec![a.clone()] } else { vec![a.clone(), b.clone()] };
        let ann = annihilator_odd(s.context(), &targets)?;
        let sound = ann.basis().iter().all(|g| g.parity() == Parity::Odd && targets.iter().all(|a| (g * a).is_zero()));
        t.add(Check::new("annihilator-sound", sound).with("targets", targets.as_slice()));
        let probe = &a * &s.even();
        let probe_kills = targets.iter().all(|a| (&probe * a).is_zero());
        t.add(Check::new("annihilator-complete-probe", !probe_kills || ann.contains(&probe)).with("targets", targets.as_slice()).with("probe", &probe));
        let image_rank = {
            let images = s.context().odd_basis().into_iter().map(|m| {
                let g = GrassmannElement::from_terms(n, [(m, rational(1, 1))]).expect("basis monomial");
                let mut v = std::collections::BTreeMap::new();
                for (k, a) in targets.iter().enumerate() {
                    for (mono, c) in element_vector(&(&g * a)) {
                        v.insert((k, mono), c);
                    }
                }
                v
            });
            Echelon::from_vectors(images).rank()
        };
        t.add(Check::new("annihilator-rank-nullity", ann.dim() + image_rank == odd_dim).with("targets", targets.as_slice()));
    }
    Ok(())
}

fn supermatrix(s: &mut Sampler, samples: usize, t: &mut Tally) -> Result<()> {
    let n = s.generators();
    let shapes = [(1, 1), (1, 2), (2, 1), (2, 2)];
    for i in 0..samples {
        let m = s.supermatrix_invertible_b(1, 1);
        let (even, odd) = (m.even_reduced_part(), m.odd_reduced_part());
        let ber = m.berezinian()?;
        let ber_odd = odd.berezinian()?;
        t.add(Check::equal("berezinian-splits", &ber, &(&even.berezinian()? + &ber_odd)).with("m", &m));
        t.add(Check::equal("odd-berezinian-squares-to-zero", &(&ber_odd * &ber_odd), &GrassmannElement::zero(n)).with("m", &m));
        let (be, bo) = m.ber_parts()?;
        t.add(Check::equal("berezinian-parts", &(&be + &bo), &ber).with("m", &m));

        let (p, q) = shapes[i % shapes.len()];
        let (x, y) = (s.supermatrix_invertible_b(p, q), s.supermatrix_invertible_b(p, q));
        let xy = x.mat_mul(&y)?;
        t.add(Check::equal("berezinian-multiplicative", &xy.berezinian()?, &(&x.berezinian()? * &y.berezinian()?)).with("x", &x).with("y", &y));
        t.add(Check::equal("supertrace-cyclic", &xy.supertrace(), &y.mat_mul(&x)?.supertrace()).with("x", &x).with("y", &y));
        t.add(Check::equal("supertrace-additive", &x.mat_add(&y)?.supertrace(), &(&x.supertrace() + &y.supertrace())).with("x", &x).with("y", &y));
        let z = s.supermatrix(p, q);
        t.add(Check::equal("product-associative", &xy.mat_mul(&z)?, &x.mat_mul(&y.mat_mul(&z)?)?).with("x", &x).with("y", &y).with("z", &z));
        let v = s.vector(p, q);
        t.add(Check::equal("apply-compatible", &xy.mat_apply(&v)?, &x.mat_apply(&y.mat_apply(&v)?)?).with("x", &x).with("y", &y).with("v", &v));
    }
    Ok(())
}

fn gamma(s: &mut Sampler, samples: usize, t: &mut Tally) -> Result<()> {
    let shapes = [(1, 1), (1, 2), (2, 2)];
    for i in 0..samples {
        let (p, q) = shapes[i % shapes.len()];
        let len = 3 + i % 3;
        let chain = s.strong_chain(p, q, len)?;
        let r = chain_product_verify(&chain)?;
        t.add(Check::new("chain-product-closed-form", r.matches_closed_form).with("chain", chain.as_slice()));
        t.add(Check::new("chain-berezinian-closed-form", r.ber_matches() != Some(false)).with("chain", chain.as_slice()));
        for m in &chain {
            let idem = m.mat_mul(m)? == *m;
            t.add(Check::new("strong-idempotent-criterion", idempotent_strong_check(m)? == idem).with("m", m));
        }

        let alpha = nonzero_odd(s);
        let p_family = make_family(FamilyKind::P, &alpha)?;
        let (t1, t2) = (s.even(), s.even());
        let (m1, m2) = (eval_t(&p_family, &t1)?, eval_t(&p_family, &t2)?);
        let report = band_pair_check(&m1, &m2)?;
        let left = matches!(report.relation, BandRelation::LeftZero | BandRelation::Both);
        t.add(Check::new("p-pair-left-zero", left && report.consistent).with("m1", &m1).with("m2", &m2));
        let (x, y) = (chain[0].clone(), chain[1].clone());
        t.add(Check::new("band-conditions-consistent", band_pair_check(&x, &y)?.consistent).with("m1", &x).with("m2", &y));
        t.add(Check::new("p-value-strong-idempotent", idempotent_strong_check(&m1)?).with("m", &m1));
    }
    Ok(())
}

fn families(s: &mut Sampler, samples: usize, t: &mut Tally) -> Result<()> {
    let n = s.generators();
    for i in 0..samples {
        let alpha = nonzero_odd(s);
        t.extend(semigroup_law_checks(&alpha)?);
        let (sigma, rho, u, v) = (s.odd(), s.odd(), s.even(), s.even());
        t.extend(intertwiner_check(&sigma, &rho, &u, &v, &alpha)?);
        t.extend(differential_sequence(4, &alpha)?.checks.into_iter().map(|c| c.with("alpha", &alpha)));

        let expected = [
            (FamilyKind::P, Some(Substitution::First)),
            (FamilyKind::Q, Some(Substitution::Second)),
            (FamilyKind::T, Some(Substitution::Sum)),
        ];
        for (kind, phi) in expected {
            let got = closure_check(&make_family(kind, &alpha)?)?;
            t.add(Check::new(format!("closure-{}", kind.to_string().to_lowercase()), got == phi).with("alpha", &alpha));
        }

        let p = make_family(FamilyKind::P, &alpha)?;
        let tt = make_family(FamilyKind::T, &alpha)?;
        let tau = &alpha * &s.odd();
        t.add(Check::new("nilpotent-time-commutes", nilpotent_time_commute_check(&p, &tt, &tau)?).with("alpha", &alpha).with("tau", &tau));
        let unit = GrassmannElement::one(n);
        t.add(Check::new("unit-time-does-not-commute", !nilpotent_time_commute_check(&p, &tt, &unit)?).with("alpha", &alpha));

        let table = cayley_table_verify(&alpha)?;
        t.add(Check::new("table-closed", table.closed()).with("alpha", &alpha));
        t.add(Check::new("table-corner-associative", table.corner_associative).with("alpha", &alpha));
        for cell in table.cells.iter().filter(|c| c.computed.is_none()) {
            t.add(Check::new(format!("table-cell-{}", cell.name()), false).with("alpha", &alpha));
        }
        if i == 0 {
            t.findings.extend(table.discrepancies().into_iter().map(|c| {
                serde_json::json!({
                    "table_cell": format!("{} * {}", OPERANDS[c.row], OPERANDS[c.col]),
                    "printed": c.printed,
                    "computed": c.computed,
                })
            }));
        }
    }
    Ok(())
}

fn analysis(s: &mut Sampler, samples: usize, t: &mut Tally) -> Result<()> {
    for i in 0..samples {
        let comps = ComponentList::new(s.linear_components()?)?;
        let family = comps.to_family()?;
        let r = equivalence_report(&family, true)?;
        t.add(Check::new("linear-equivalence-agrees", r.agree()).with("components", comps.components()));

        let degree = 2 + i % 3;
        let comps = ComponentList::new(s.band_components(degree)?)?;
        let system = band_component_system_check(&comps)?;
        t.add(Check::new("power-band-system", system.holds() && system.band_equation).with("components", comps.components()));
        let residual = n_functional_residual(&comps)?;
        t.add(Check::equal("power-functional-residual", &residual.raw, &residual.expansion).with("components", comps.components()));
        let defect = n_differential_defect(&comps)?;
        t.add(Check::equal("power-differential-defect", &defect.defect, &defect.higher_order).with("components", comps.components()));

        let random = ComponentList::new((0..=degree).map(|_| s.supermatrix(1, 1)).collect())?;
        let system = band_component_system_check(&random)?;
        t.add(Check::new("band-system-matches-band-equation", system.consistent()).with("components", random.components()));
    }
    Ok(())
}

fn resolvent(s: &mut Sampler, samples: usize, t: &mut Tally) -> Result<()> {
    let n = s.generators();
    for _ in 0..samples {
        let alpha = nonzero_odd(s);
        let p = make_family(FamilyKind::P, &alpha)?;
        let tt = make_family(FamilyKind::T, &alpha)?;
        let rp = laplace(&p)?;
        let rt = laplace(&tt)?;
        t.add(Check::equal("laplace-of-p", &rp, &expected_resolvent_p(&alpha)?).with("alpha", &alpha));
        t.add(Check::equal("laplace-of-t", &rt, &expected_resolvent_t(&alpha)?).with("alpha", &alpha));
        t.add(Check::equal("resolvent-identity-t", &resolvent_defect(&rt)?, &crate::supermatrix::LaurentMatrix::zero(n, 1, 1)).with("alpha", &alpha));
        let a = lift_laurent(&generator_of(&p)?);
        t.add(Check::equal("resolvent-defect-p", &resolvent_defect(&rp)?, &a.scale_by(&p_defect_factor(n))?).with("alpha", &alpha));

        let (f, g) = (s.family(1, 1), s.family(1, 1));
        t.add(Check::equal("laplace-linear", &laplace(&f.mat_add(&g)?)?, &laplace(&f)?.mat_add(&laplace(&g)?)?).with("f", &f).with("g", &g));

        let (x0, k0) = (s.even(), s.odd());
        let start = initial_vector(&x0, &k0)?;
        let po = orbit(&p, &start)?;
        let to = orbit(&tt, &start)?;
        t.add(Check::new("p-orbit-odd-constant", po.odd_part()[0].degree(crate::poly::Time::T) <= 0).with("alpha", &alpha).with("x0", &start));
        t.add(Check::new("cauchy-defect-p", cauchy_defect(&p, &start)?.is_zero()).with("alpha", &alpha).with("x0", &start));
        t.add(Check::new("cauchy-defect-t", cauchy_defect(&tt, &start)?.is_zero()).with("alpha", &alpha).with("x0", &start));
        let odd_start = initial_vector(&GrassmannElement::zero(n), &k0)?;
        t.add(Check::equal("orbits-coincide-without-even-start", &orbit(&p, &odd_start)?, &orbit(&tt, &odd_start)?).with("alpha", &alpha));
        t.add(Check::new("orbits-differ-generally", po != to || (&alpha * &x0).is_zero()).with("alpha", &alpha).with("x0", &start));
        t.add(Check::new("p-moving-time", moving_time_check(&p)? == TimeLaw::MovingTime).with("alpha", &alpha));
        t.add(Check::new("t-translational", moving_time_check(&tt)? == TimeLaw::Translational).with("alpha", &alpha));
        let obstruction = commutativity_obstruction(&start, &alpha)?;
        let bracket = orbit_commutator(&start, &alpha)?;
        t.add(Check::new("obstruction-matches-commutator", obstruction.is_zero() == bracket.is_zero()).with("alpha", &alpha).with("x0", &start));
        t.add(Check::equal("obstruction-formula", &obstruction, &(&alpha * &k0)).with("alpha", &alpha).with("x0", &start));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suite: Suite) -> SuiteConfig {
        SuiteConfig {
            generators: 4,
            seed: 42,
            suite,
            samples: 5,
            timings: false,
        }
    }

    #[test]
    fn every_suite_passes() {
        for suite in Suite::SINGLE {
            let r = run_suite(&cfg(suite)).unwrap();
            let failed: Vec<&str> = r.failures().map(|e| e.check.label.as_str()).collect();
            assert!(r.passed, "{suite}: {failed:?}");
            assert_eq!(r.exit_code(), 0);
        }
    }

    #[test]
    fn resolvent_labels() {
        let r = run_suite(&cfg(Suite::Resolvent)).unwrap();
        let text = r.render(Format::Text);
        assert!(text.contains("resolvent-identity-t: pass"));
        assert!(text.contains("resolvent-defect-p: pass"));
    }

    #[test]
    fn config_validation() {
        let mut c = cfg(Suite::All);
        c.generators = 0;
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
        c.generators = 17;
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
        let mut c = cfg(Suite::All);
        c.samples = 0;
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
        assert!("bogus".parse::<Suite>().is_err());
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
    }

    #[test]
    fn deterministic_json() {
        let c = SuiteConfig { samples: 3, ..cfg(Suite::All) };
        let a = run_suite(&c).unwrap().render(Format::Json);
        let b = run_suite(&c).unwrap().render(Format::Json);
        assert_eq!(a, b);
        assert!(a.contains("\"findings\""));
    }

    #[test]
    fn failures_are_reported() {
        let mut tally = Tally::default();
        tally.add(Check::new("x", true));
        tally.add(Check::new("x", false).note("why", "because"));
        tally.add(Check::new("x", false).note("why", "later"));
        let c = &tally.checks["x"];
        assert!(!c.passed);
        assert_eq!(c.counterexample.as_ref().unwrap()["why"], "because");
        tally.guard("y", Err(Error::Shape("bad".into())));
        assert!(!tally.checks["y"].passed);
    }
}
