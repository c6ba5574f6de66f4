//! The multiplication table of `P(t), P(s), A, Z, Y(t), T(t), T(s)`,
//! computed symbolically and compared against the reference labels.

use serde_json::{json, Value};

use crate::error::Result;
use crate::families::{family_at, make_family, FamilyKind};
use crate::grassmann::GrassmannElement;
use crate::io::ToJson;
use crate::poly::{Time, TimePoly};
use crate::supermatrix::ParamSuperMatrix;

pub const OPERANDS: [&str; 7] = ["P(t)", "P(s)", "A", "Z", "Y(t)", "T(t)", "T(s)"];

/// Row `i`, column `j` holds the label printed for `OPERANDS[i] * OPERANDS[j]`.
pub const REFERENCE: [[&str; 7]; 7] = [
    ["P(t)", "P(t)", "Z", "Z", "P(t)", "P(t)", "P(t)"],
    ["P(s)", "P(s)", "Z", "Z", "P(s)", "P(s)", "P(s)"],
    ["A", "A", "Z", "Z", "Z", "A", "A"],
    ["Z", "Z", "Z", "Z", "Z", "Z", "Z"],
    ["A t", "A s", "Z", "Z", "Z", "Y(t)", "Y(t)"],
    ["P(2t)", "P(t+s)", "A", "Z", "Y(t)", "T(2t)", "T(t+s)"],
    ["P(t+s)", "P(2s)", "A", "Z", "Y(t)", "T(t+s)", "T(2s)"],
];

const ARGUMENTS: [&str; 6] = ["0", "t", "s", "2t", "2s", "t+s"];

fn argument(n: u8, name: &str) -> TimePoly {
    let t = TimePoly::var(n, Time::T);
    let s = TimePoly::var(n, Time::S);
    match name {
        "0" => TimePoly::zero(n),
        "t" => t,
        "s" => s,
        "2t" => &t + &t,
        "2s" => &s + &s,
        _ => &t + &s,
    }
}

/// Named forms a product is matched against, in matching order.
pub fn label_menu(alpha: &GrassmannElement) -> Result<Vec<(String, ParamSuperMatrix)>> {
    let n = alpha.generators();
    let a = make_family(FamilyKind::A, alpha)?;
    let mut menu = vec![
        ("Z".to_string(), make_family(FamilyKind::Z, alpha)?),
        ("A".to_string(), a.clone()),
        ("A t".to_string(), a.scale_by(&TimePoly::var(n, Time::T))?),
        ("A s".to_string(), a.scale_by(&TimePoly::var(n, Time::S))?),
    ];
    for kind in [FamilyKind::P, FamilyKind::Y, FamilyKind::T] {
        for arg in ARGUMENTS {
            menu.push((format!("{kind}({arg})"), family_at(kind, alpha, &argument(n, arg))?));
        }
    }
    Ok(menu)
}

pub fn operands(alpha: &GrassmannElement) -> Result<Vec<ParamSuperMatrix>> {
    let n = alpha.generators();
    let at = |kind, arg| family_at(kind, alpha, &argument(n, arg));
    Ok(vec![
        at(FamilyKind::P, "t")?,
        at(FamilyKind::P, "s")?,
        make_family(FamilyKind::A, alpha)?,
        make_family(FamilyKind::Z, alpha)?,
        at(FamilyKind::Y, "t")?,
        at(FamilyKind::T, "t")?,
        at(FamilyKind::T, "s")?,
    ])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
    pub product: ParamSuperMatrix,
    /// First menu form equal to the product, if any.
    pub computed: Option<String>,
    pub printed: &'static str,
}

impl Cell {
    pub fn matches(&self) -> bool {
        self.computed.as_deref() == Some(self.printed)
    }

    pub fn name(&self) -> String {
        format!("{} * {}", OPERANDS[self.row], OPERANDS[self.col])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyReport {
    pub cells: Vec<Cell>,
    /// Associativity over all triples drawn from `P(t), P(s), A, Z`.
    pub corner_associative: bool,
}

impl CayleyReport {
    pub fn discrepancies(&self) -> Vec<&Cell> {
        self.cells.iter().filter(|c| !c.matches()).collect()
    }

    /// Every product is one of the named forms.
    pub fn closed(&self) -> bool {
        self.cells.iter().all(|c| c.computed.is_some())
    }

    pub fn cell(&self, row: usize, col: usize) -> &Cell {
        &self.cells[row * OPERANDS.len() + col]
    }

    pub fn to_json(&self) -> Value {
        let labels: Vec<Vec<Value>> = (0..OPERANDS.len())
            .map(|i| {
                (0..OPERANDS.len())
                    .map(|j| json!(self.cell(i, j).computed.as_deref().unwrap_or("?")))
                    .collect()
            })
            .collect();
        let matrices: Vec<Vec<Value>> = (0..OPERANDS.len())
            .map(|i| (0..OPERANDS.len()).map(|j| self.cell(i, j).product.to_json()).collect())
            .collect();
        let discrepancies: Vec<Value> = self
            .discrepancies()
            .into_iter()
            .map(|c| {
                json!({
                    "row": OPERANDS[c.row],
                    "col": OPERANDS[c.col],
                    "printed": c.printed,
                    "computed": c.computed.as_deref().unwrap_or("?"),
                })
            })
            .collect();
        json!({
            "operands": OPERANDS,
            "labels": labels,
            "matrices": matrices,
            "discrepancies": discrepancies,
            "closed": self.closed(),
            "corner_associative": self.corner_associative,
        })
    }
}

pub fn cayley_table_verify(alpha: &GrassmannElement) -> Result<CayleyReport> {
    let ops = operands(alpha)?;
    let menu = label_menu(alpha)?;
    let mut cells = Vec::with_capacity(49);
    for (row, x) in ops.iter().enumerate() {
        for (col, y) in ops.iter().enumerate() {
            let product = x.mat_mul(y)?;
            let computed = menu.iter().find(|(_, m)| *m == product).map(|(l, _)| l.clone());
            cells.push(Cell {
                row,
                col,
                product,
                computed,
                printed: REFERENCE[row][col],
            });
        }
    }
    let corner = &ops[..4];
    let mut corner_associative = true;
    for x in corner {
        for y in corner {
            for z in corner {
                corner_associative &= x.mat_mul(y)?.mat_mul(z)? == x.mat_mul(&y.mat_mul(z)?)?;
            }
        }
    }
    Ok(CayleyReport { cells, corner_associative })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> GrassmannElement {
        GrassmannElement::parse_expr(4, "xi1 - 2*xi3 + xi2*xi3*xi4").unwrap()
    }

    #[test]
    fn named_cells() {
        let r = cayley_table_verify(&alpha()).unwrap();
        assert_eq!(r.cell(2, 0).computed.as_deref(), Some("A"));
        assert_eq!(r.cell(4, 0).computed.as_deref(), Some("A t"));
        assert_eq!(r.cell(0, 4).computed.as_deref(), Some("Y(0)"));
        assert_eq!(r.cell(5, 1).computed.as_deref(), Some("P(t+s)"));
        assert_eq!(r.cell(6, 6).computed.as_deref(), Some("T(2s)"));
        assert!(r.closed());
        assert!(r.corner_associative);
    }

    #[test]
    fn discrepancies_are_reported() {
        let r = cayley_table_verify(&alpha()).unwrap();
        let found: Vec<(String, &str)> = r
            .discrepancies()
            .into_iter()
            .map(|c| (c.name(), c.computed.as_deref().unwrap()))
            .collect();
        assert_eq!(
            found,
            vec![
                ("P(t) * Y(t)".to_string(), "Y(0)"),
                ("P(s) * Y(t)".to_string(), "Y(0)"),
                ("Y(t) * P(s)".to_string(), "A t"),
            ]
        );
    }

    #[test]
    fn json_shape() {
        let v = cayley_table_verify(&alpha()).unwrap().to_json();
        assert_eq!(v["labels"].as_array().unwrap().len(), 7);
        assert_eq!(v["labels"][0][4], "Y(0)");
        assert_eq!(v["discrepancies"].as_array().unwrap().len(), 3);
    }
}
