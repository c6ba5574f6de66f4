//! JSON encodings of elements, supermatrices, families, resolvents and
//! vectors.
//!
//! Elements are `{"n": 3, "terms": [{"idx": [1, 2], "c": "-1/2"}]}`; matrices
//! are `{"p": 1, "q": 1, "rows": [[..], [..]]}` in row-major order. Entries of
//! time families are lists of `{"t": k, "s": j, "c": element}` and entries of
//! resolvents are lists of `{"iz": i, "iw": j, "c": element}` standing for
//! `c * z^-i * w^-j`. Family and resolvent matrices also carry `"n"` since an
//! all-zero matrix has no coefficient to read it from.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grassmann::{parse_rational, GrassmannElement, Monomial, MAX_GENERATORS};
use crate::matrix::{Ring, Super, SuperVector};
use crate::poly::{Frequency, LaurentPoly, Time, TimePoly};
use crate::supermatrix::{ElementVector, LaurentMatrix, ParamSuperMatrix, SuperMatrix};

/// Largest exponent accepted per time variable.
pub const DEGREE_CAP: i32 = 8;

pub trait ToJson {
    fn to_json(&self) -> Value;
}

impl ToJson for GrassmannElement {
    fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(m, c)| json!({"idx": m.indices(), "c": c.to_string()}))
            .collect();
        json!({"n": self.generators(), "terms": terms})
    }
}

impl ToJson for TimePoly {
    fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(e, c)| json!({"t": e[Time::T], "s": e[Time::S], "c": c.to_json()}))
                .collect(),
        )
    }
}

impl ToJson for LaurentPoly {
    fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(e, c)| json!({"iz": -e[Frequency::Z], "iw": -e[Frequency::W], "c": c.to_json()}))
                .collect(),
        )
    }
}

/// Entry types that carry their own generator count in JSON.
pub trait JsonEntry: Ring + ToJson {
    const SELF_DESCRIBING: bool;
}

impl JsonEntry for GrassmannElement {
    const SELF_DESCRIBING: bool = true;
}

impl JsonEntry for TimePoly {
    const SELF_DESCRIBING: bool = false;
}

impl JsonEntry for LaurentPoly {
    const SELF_DESCRIBING: bool = false;
}

impl<R: JsonEntry> ToJson for Super<R> {
    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .mat()
            .row_vecs()
            .iter()
            .map(|row| Value::Array(row.iter().map(ToJson::to_json).collect()))
            .collect();
        let mut obj = serde_json::Map::new();
        if !R::SELF_DESCRIBING {
            obj.insert("n".into(), json!(self.generators()));
        }
        obj.insert("p".into(), json!(self.p()));
        obj.insert("q".into(), json!(self.q()));
        obj.insert("rows".into(), Value::Array(rows));
        Value::Object(obj)
    }
}

impl<R: JsonEntry> ToJson for SuperVector<R> {
    fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        if !R::SELF_DESCRIBING {
            obj.insert("n".into(), json!(self.generators()));
        }
        obj.insert("p".into(), json!(self.p()));
        obj.insert("q".into(), json!(self.q()));
        obj.insert("even".into(), Value::Array(self.even_part().iter().map(ToJson::to_json).collect()));
        obj.insert("odd".into(), Value::Array(self.odd_part().iter().map(ToJson::to_json).collect()));
        Value::Object(obj)
    }
}

impl<T: ToJson> ToJson for [T] {
    fn to_json(&self) -> Value {
        Value::Array(self.iter().map(ToJson::to_json).collect())
    }
}

pub fn components_to_json(components: &[SuperMatrix]) -> Value {
    json!({"components": components.to_json()})
}

pub fn to_pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    idx: Vec<usize>,
    c: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElement {
    n: u8,
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(try_from = "RawElement")]
struct ElementIn(GrassmannElement);

impl TryFrom<RawElement> for ElementIn {
    type Error = String;

    fn try_from(raw: RawElement) -> std::result::Result<Self, String> {
        if raw.n == 0 || raw.n > MAX_GENERATORS {
            return Err(format!("generator count {} outside 1..={MAX_GENERATORS}", raw.n));
        }
        let mut seen = BTreeSet::new();
        let mut terms = Vec::with_capacity(raw.terms.len());
        for term in raw.terms {
            if term.idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("index list {:?} is not strictly increasing", term.idx));
            }
            if let Some(bad) = term.idx.iter().find(|&&i| i == 0 || i > raw.n as usize) {
                return Err(format!("index {bad} outside 1..={}", raw.n));
            }
            let mono = Monomial::from_indices(&term.idx).map_err(|e| e.to_string())?;
            if !seen.insert(mono) {
                return Err(format!("duplicate term for index list {:?}", term.idx));
            }
            let c = parse_rational(&term.c).ok_or_else(|| format!("invalid rational {:?}", term.c))?;
            terms.push((mono, c));
        }
        GrassmannElement::from_terms(raw.n, terms)
            .map(ElementIn)
            .map_err(|e| e.to_string())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTimeTerm {
    #[serde(default)]
    t: i32,
    #[serde(default)]
    s: i32,
    c: ElementIn,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLaurentTerm {
    #[serde(default)]
    iz: i32,
    #[serde(default)]
    iw: i32,
    c: ElementIn,
}

trait EntryIn: Sized {
    type Out: Ring;
    /// Generator count carried by the entry, if any.
    fn generators(&self) -> Option<u8>;
    fn build(self, n: u8) -> Result<Self::Out>;
}

impl EntryIn for ElementIn {
    type Out = GrassmannElement;
    fn generators(&self) -> Option<u8> {
        Some(self.0.generators())
    }
    fn build(self, _n: u8) -> Result<GrassmannElement> {
        Ok(self.0)
    }
}

fn check_coefficient_context(n: u8, c: &GrassmannElement) -> Result<()> {
    if c.generators() != n {
        return Err(Error::Context {
            left: n,
            right: c.generators(),
        });
    }
    Ok(())
}

impl EntryIn for Vec<RawTimeTerm> {
    type Out = TimePoly;
    fn generators(&self) -> Option<u8> {
        self.first().map(|t| t.c.0.generators())
    }
    fn build(self, n: u8) -> Result<TimePoly> {
        let mut seen = BTreeSet::new();
        let mut terms = Vec::new();
        for term in self {
            for (name, e) in [("t", term.t), ("s", term.s)] {
                if !(0..=DEGREE_CAP).contains(&e) {
                    return Err(Error::Shape(format!("exponent {name}^{e} outside 0..={DEGREE_CAP}")));
                }
            }
            if !seen.insert((term.t, term.s)) {
                return Err(Error::parse(0, format!("duplicate term t^{} s^{}", term.t, term.s)));
            }
            check_coefficient_context(n, &term.c.0)?;
            terms.push(([term.t, term.s], term.c.0));
        }
        TimePoly::from_terms(n, terms)
    }
}

impl EntryIn for Vec<RawLaurentTerm> {
    type Out = LaurentPoly;
    fn generators(&self) -> Option<u8> {
        self.first().map(|t| t.c.0.generators())
    }
    fn build(self, n: u8) -> Result<LaurentPoly> {
        let mut seen = BTreeSet::new();
        let mut terms = Vec::new();
        for term in self {
            if term.iz < 0 || term.iw < 0 {
                return Err(Error::Shape(format!("negative power index iz={} iw={}", term.iz, term.iw)));
            }
            if !seen.insert((term.iz, term.iw)) {
                return Err(Error::parse(0, format!("duplicate term iz={} iw={}", term.iz, term.iw)));
            }
            check_coefficient_context(n, &term.c.0)?;
            terms.push(([-term.iz, -term.iw], term.c.0));
        }
        LaurentPoly::from_terms(n, terms)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix<E> {
    #[serde(default)]
    n: Option<u8>,
    p: usize,
    q: usize,
    rows: Vec<Vec<E>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVector<E> {
    #[serde(default)]
    n: Option<u8>,
    p: usize,
    q: usize,
    even: Vec<E>,
    odd: Vec<E>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponents {
    components: Vec<RawMatrix<ElementIn>>,
}

fn resolve_context<E: EntryIn>(declared: Option<u8>, entries: &[&E]) -> Result<u8> {
    let found = entries.iter().find_map(|e| e.generators());
    match (declared, found) {
        (Some(n), _) if n == 0 || n > MAX_GENERATORS => Err(Error::Config(format!("generator count {n} outside 1..={MAX_GENERATORS}"))),
        (Some(n), _) => Ok(n),
        (None, Some(n)) => Ok(n),
        (None, None) => Err(Error::parse(0, "cannot infer the generator count; add \"n\"")),
    }
}

fn build_matrix<E: EntryIn>(raw: RawMatrix<E>) -> Result<Super<E::Out>> {
    let size = raw.p + raw.q;
    if raw.rows.len() != size || raw.rows.iter().any(|r| r.len() != size) {
        return Err(Error::Shape(format!("({}|{}) matrix needs {size}x{size} entries", raw.p, raw.q)));
    }
    let n = resolve_context(raw.n, &raw.rows.iter().flatten().collect::<Vec<_>>())?;
    let rows = raw
        .rows
        .into_iter()
        .map(|row| row.into_iter().map(|e| e.build(n)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mat = crate::matrix::Mat::from_rows(n, rows)?;
    Super::from_mat(raw.p, raw.q, mat)
}

fn build_vector<E: EntryIn>(raw: RawVector<E>) -> Result<SuperVector<E::Out>> {
    if raw.even.len() != raw.p || raw.odd.len() != raw.q {
        return Err(Error::Shape(format!(
            "({}|{}) vector with {} even and {} odd coordinates",
            raw.p,
            raw.q,
            raw.even.len(),
            raw.odd.len()
        )));
    }
    let n = resolve_context(raw.n, &raw.even.iter().chain(&raw.odd).collect::<Vec<_>>())?;
    let coords = raw
        .even
        .into_iter()
        .chain(raw.odd)
        .map(|e| e.build(n))
        .collect::<Result<Vec<_>>>()?;
    SuperVector::new(raw.p, raw.q, coords)
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

fn from_text<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(byte_offset(text, e.line(), e.column()), e.to_string()))
}

pub fn parse_element(text: &str) -> Result<GrassmannElement> {
    Ok(from_text::<ElementIn>(text)?.0)
}

pub fn parse_matrix(text: &str) -> Result<SuperMatrix> {
    build_matrix(from_text::<RawMatrix<ElementIn>>(text)?)
}

pub fn parse_family(text: &str) -> Result<ParamSuperMatrix> {
    build_matrix(from_text::<RawMatrix<Vec<RawTimeTerm>>>(text)?)
}

pub fn parse_resolvent(text: &str) -> Result<LaurentMatrix> {
    build_matrix(from_text::<RawMatrix<Vec<RawLaurentTerm>>>(text)?)
}

pub fn parse_vector(text: &str) -> Result<ElementVector> {
    build_vector(from_text::<RawVector<ElementIn>>(text)?)
}

pub fn parse_components(text: &str) -> Result<Vec<SuperMatrix>> {
    from_text::<RawComponents>(text)?
        .components
        .into_iter()
        .map(build_matrix)
        .collect()
}

/// A value read from disk, tagged with the kind detected from its keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Element(GrassmannElement),
    Matrix(SuperMatrix),
    Family(ParamSuperMatrix),
    Resolvent(LaurentMatrix),
    Vector(ElementVector),
    Components(Vec<SuperMatrix>),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Element(_) => "element",
            Input::Matrix(_) => "matrix",
            Input::Family(_) => "family",
            Input::Resolvent(_) => "resolvent",
            Input::Vector(_) => "vector",
            Input::Components(_) => "components",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Input::Element(x) => x.to_json(),
            Input::Matrix(m) => m.to_json(),
            Input::Family(f) => f.to_json(),
            Input::Resolvent(r) => r.to_json(),
            Input::Vector(v) => v.to_json(),
            Input::Components(c) => components_to_json(c),
        }
    }
}

fn first_matrix_entry(value: &Value) -> Option<&Value> {
    value.get("rows")?.as_array()?.iter().filter_map(Value::as_array).flatten().next()
}

fn is_laurent_matrix(value: &Value) -> bool {
    let rows = value.get("rows").and_then(Value::as_array);
    rows.into_iter()
        .flatten()
        .filter_map(Value::as_array)
        .flatten()
        .filter_map(Value::as_array)
        .flatten()
        .any(|term| term.get("iz").is_some() || term.get("iw").is_some())
}

pub fn parse_str(text: &str) -> Result<Input> {
    let value: Value = from_text(text)?;
    if value.get("terms").is_some() {
        return parse_element(text).map(Input::Element);
    }
    if value.get("components").is_some() {
        return parse_components(text).map(Input::Components);
    }
    if value.get("even").is_some() || value.get("odd").is_some() {
        return parse_vector(text).map(Input::Vector);
    }
    if value.get("rows").is_some() {
        return match first_matrix_entry(&value) {
            Some(Value::Object(_)) => parse_matrix(text).map(Input::Matrix),
            _ if is_laurent_matrix(&value) => parse_resolvent(text).map(Input::Resolvent),
            _ => parse_family(text).map(Input::Family),
        };
    }
    Err(Error::parse(0, "unrecognised document: expected an element, matrix, family, vector or component list"))
}

pub fn parse_input(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_str(&text)
}

/// A family document: either a time-dependent matrix or a list of
/// components `K_0, K_1, ...` of `sum K_m t^m`.
pub fn family_from_input(input: Input) -> Result<ParamSuperMatrix> {
    match input {
        Input::Family(f) => Ok(f),
        Input::Matrix(m) => m.map(|x| TimePoly::constant(x.clone())),
        Input::Components(c) => crate::analysis::ComponentList::new(c)?.to_family(),
        other => Err(Error::Config(format!("expected a family, found a {}", other.kind()))),
    }
}
