//! Dense matrices and graded supermatrices over the coefficient rings used
//! in this crate (Grassmann elements and polynomials over them).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElement, Parity, Rational};
use crate::poly::{Poly, Variables};

/// The ring operations a matrix entry needs. Multiplication is not assumed
/// commutative.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_in(n: u8) -> Self;
    fn one_in(n: u8) -> Self;
    fn from_element(x: GrassmannElement) -> Self;
    fn generators(&self) -> u8;
    fn is_zero(&self) -> bool;
    fn parity(&self) -> Parity;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn scaled(&self, factor: &Rational) -> Self;
}

impl Ring for GrassmannElement {
    fn zero_in(n: u8) -> Self {
        GrassmannElement::zero(n)
    }
    fn one_in(n: u8) -> Self {
        GrassmannElement::one(n)
    }
    fn from_element(x: GrassmannElement) -> Self {
        x
    }
    fn generators(&self) -> u8 {
        GrassmannElement::generators(self)
    }
    fn is_zero(&self) -> bool {
        GrassmannElement::is_zero(self)
    }
    fn parity(&self) -> Parity {
        GrassmannElement::parity(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scaled(&self, factor: &Rational) -> Self {
        self.scale(factor)
    }
}

impl<V: Variables> Ring for Poly<V> {
    fn zero_in(n: u8) -> Self {
        Poly::zero(n)
    }
    fn one_in(n: u8) -> Self {
        Poly::constant(GrassmannElement::one(n))
    }
    fn from_element(x: GrassmannElement) -> Self {
        Poly::constant(x)
    }
    fn generators(&self) -> u8 {
        Poly::generators(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn parity(&self) -> Parity {
        Poly::parity(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scaled(&self, factor: &Rational) -> Self {
        self.scale(factor)
    }
}

/// A rectangular row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat<R> {
    n: u8,
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn zeros(n: u8, rows: usize, cols: usize) -> Self {
        Self {
            n,
            rows,
            cols,
            data: vec![R::zero_in(n); rows * cols],
        }
    }

    pub fn identity(n: u8, size: usize) -> Self {
        let mut m = Self::zeros(n, size, size);
        for i in 0..size {
            m.data[i * size + i] = R::one_in(n);
        }
        m
    }

    pub fn from_rows(n: u8, rows: Vec<Vec<R>>) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(height * width);
        for row in rows {
            if row.len() != width {
                return Err(Error::Shape(format!("ragged rows: expected width {width}, got {}", row.len())));
            }
            for x in row {
                if x.generators() != n {
                    return Err(Error::Context {
                        left: n,
                        right: x.generators(),
                    });
                }
                data.push(x);
            }
        }
        Ok(Self {
            n,
            rows: height,
            cols: width,
            data,
        })
    }

    pub fn generators(&self) -> u8 {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: R) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> impl Iterator<Item = &R> {
        self.data.iter()
    }

    pub fn row_vecs(&self) -> Vec<Vec<R>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[R]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Result<S>) -> Result<Mat<S>> {
        Ok(Mat {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(self.n, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(row0 + i, col0 + j).clone());
            }
        }
        out
    }

    fn check_same(&self, other: &Self, what: &str) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Context {
                left: self.n,
                right: other.n,
            });
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "add")?;
        Ok(self.zip(other, R::plus))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "sub")?;
        Ok(self.zip(other, R::minus))
    }

    fn zip(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        Mat {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Context {
                left: self.n,
                right: other.n,
            });
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.n, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = R::zero_in(self.n);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.plus(&a.times(b));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        self.map(|x| x.scaled(factor))
    }

    /// Multiplies every entry on the left by `c`.
    pub fn left_mul_entries(&self, c: &R) -> Self {
        self.map(|x| c.times(x))
    }

    /// Leibniz/cofactor determinant. Entries must be even so that they
    /// commute; sizes above six are rejected.
    pub fn det_even(&self) -> Result<R> {
        if !self.is_square() {
            return Err(Error::Shape(format!("determinant of {}x{} matrix", self.rows, self.cols)));
        }
        if self.rows > 6 {
            return Err(Error::Shape(format!("determinant size {} exceeds 6", self.rows)));
        }
        if let Some(bad) = self.data.iter().find(|x| !x.parity().is_even_or_zero()) {
            return Err(Error::Parity(format!("determinant needs even entries, found {bad}")));
        }
        let cols: Vec<usize> = (0..self.cols).collect();
        Ok(self.cofactor_det(0, &cols))
    }

    fn cofactor_det(&self, row: usize, cols: &[usize]) -> R {
        if cols.is_empty() {
            return R::one_in(self.n);
        }
        let mut acc = R::zero_in(self.n);
        for (pos, &c) in cols.iter().enumerate() {
            let entry = self.get(row, c);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = entry.times(&self.cofactor_det(row + 1, &rest));
            acc = if pos % 2 == 0 { acc.plus(&term) } else { acc.minus(&term) };
        }
        acc
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let mut rows = Vec::new();
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            rows.push(
                (0..self.cols)
                    .filter(|&j| j != skip_col)
                    .map(|j| self.get(i, j).clone())
                    .collect(),
            );
        }
        if rows.is_empty() {
            return Self::zeros(self.n, 0, 0);
        }
        Self::from_rows(self.n, rows).expect("minor of a consistent matrix")
    }

    /// Classical adjugate, defined for square even matrices.
    pub fn adjugate(&self) -> Result<Self> {
        self.det_even()?;
        let size = self.rows;
        let mut out = Self::zeros(self.n, size, size);
        for i in 0..size {
            for j in 0..size {
                let d = self.minor(j, i).det_even()?;
                out.set(i, j, if (i + j) % 2 == 0 { d } else { d.scaled(&-Rational::from_integer(1.into())) });
            }
        }
        Ok(out)
    }
}

impl Mat<GrassmannElement> {
    /// Inverse of a square even matrix with invertible determinant, as
    /// adjugate times the inverse determinant.
    pub fn inverse_even(&self) -> Result<Self> {
        let det = self.det_even()?;
        let inv_det = det
            .invert()
            .map_err(|_| Error::NotInvertible(format!("determinant {det} has zero body")))?;
        Ok(self.adjugate()?.map(|x| x * &inv_det))
    }
}

impl<R: Ring> Add for &Mat<R> {
    type Output = Mat<R>;
    fn add(self, rhs: &Mat<R>) -> Mat<R> {
        self.checked_add(rhs).expect("matrix add")
    }
}

impl<R: Ring> Sub for &Mat<R> {
    type Output = Mat<R>;
    fn sub(self, rhs: &Mat<R>) -> Mat<R> {
        self.checked_sub(rhs).expect("matrix sub")
    }
}

impl<R: Ring> Mul for &Mat<R> {
    type Output = Mat<R>;
    fn mul(self, rhs: &Mat<R>) -> Mat<R> {
        self.checked_mul(rhs).expect("matrix mul")
    }
}

impl<R: Ring> Neg for &Mat<R> {
    type Output = Mat<R>;
    fn neg(self) -> Mat<R> {
        self.scale(&-Rational::from_integer(1.into()))
    }
}

/// Shape of a supermatrix with respect to the even/odd reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    /// Lower-left odd block vanishes.
    EvenReduced,
    /// Upper-left even block vanishes (antitriangle).
    OddReduced,
    General,
}

/// An even `(p|q)` supermatrix: diagonal blocks carry even entries and the
/// off-diagonal blocks odd entries.
///
/// Layout is `[[A, Gamma], [Delta, B]]` with `A` of size `p x p` and `B` of
/// size `q x q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Super<R> {
    p: usize,
    q: usize,
    mat: Mat<R>,
}

impl<R: Ring> Super<R> {
    pub fn new(p: usize, q: usize, rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows
            .iter()
            .flatten()
            .map(Ring::generators)
            .next()
            .ok_or_else(|| Error::Shape("empty supermatrix".into()))?;
        Self::from_mat(p, q, Mat::from_rows(n, rows)?)
    }

    pub fn from_mat(p: usize, q: usize, mat: Mat<R>) -> Result<Self> {
        let size = p + q;
        if size == 0 {
            return Err(Error::Shape("(0|0) supermatrix has no entries".into()));
        }
        if mat.rows() != size || mat.cols() != size {
            return Err(Error::Shape(format!(
                "({p}|{q}) supermatrix needs {size}x{size} entries, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        for i in 0..size {
            for j in 0..size {
                let diagonal_block = (i < p) == (j < p);
                let parity = mat.get(i, j).parity();
                let ok = if diagonal_block {
                    parity.is_even_or_zero()
                } else {
                    parity.is_odd_or_zero()
                };
                if !ok {
                    let block = match (i < p, j < p) {
                        (true, true) => "A",
                        (true, false) => "Gamma",
                        (false, true) => "Delta",
                        (false, false) => "B",
                    };
                    return Err(Error::Parity(format!(
                        "entry ({i},{j}) in block {block} is {parity}: {}",
                        mat.get(i, j)
                    )));
                }
            }
        }
        Ok(Self { p, q, mat })
    }

    pub fn from_blocks(a: &Mat<R>, gamma: &Mat<R>, delta: &Mat<R>, b: &Mat<R>) -> Result<Self> {
        let p = a.rows();
        let q = b.rows();
        let shapes_ok = a.cols() == p
            && b.cols() == q
            && gamma.rows() == p
            && gamma.cols() == q
            && delta.rows() == q
            && delta.cols() == p;
        if !shapes_ok {
            return Err(Error::Shape("inconsistent block shapes".into()));
        }
        let n = a.generators();
        let mut mat = Mat::zeros(n, p + q, p + q);
        for i in 0..p + q {
            for j in 0..p + q {
                let x = match (i < p, j < p) {
                    (true, true) => a.get(i, j),
                    (true, false) => gamma.get(i, j - p),
                    (false, true) => delta.get(i - p, j),
                    (false, false) => b.get(i - p, j - p),
                };
                mat.set(i, j, x.clone());
            }
        }
        Self::from_mat(p, q, mat)
    }

    pub fn zero(n: u8, p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            mat: Mat::zeros(n, p + q, p + q),
        }
    }

    pub fn identity(n: u8, p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            mat: Mat::identity(n, p + q),
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn size(&self) -> usize {
        self.p + self.q
    }

    pub fn generators(&self) -> u8 {
        self.mat.generators()
    }

    pub fn mat(&self) -> &Mat<R> {
        &self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        self.mat.get(i, j)
    }

    pub fn a(&self) -> Mat<R> {
        self.mat.block(0, 0, self.p, self.p)
    }

    pub fn gamma(&self) -> Mat<R> {
        self.mat.block(0, self.p, self.p, self.q)
    }

    pub fn delta(&self) -> Mat<R> {
        self.mat.block(self.p, 0, self.q, self.p)
    }

    pub fn b(&self) -> Mat<R> {
        self.mat.block(self.p, self.p, self.q, self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn is_antitriangle(&self) -> bool {
        self.a().is_zero()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.q != other.q {
            return Err(Error::Shape(format!(
                "({}|{}) vs ({}|{}) supermatrices",
                self.p, self.q, other.p, other.q
            )));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            p: self.p,
            q: self.q,
            mat: self.mat.checked_mul(&other.mat)?,
        })
    }

    pub fn mat_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            p: self.p,
            q: self.q,
            mat: self.mat.checked_add(&other.mat)?,
        })
    }

    pub fn mat_sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            p: self.p,
            q: self.q,
            mat: self.mat.checked_sub(&other.mat)?,
        })
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mat_mul(other)?.mat_sub(&other.mat_mul(self)?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.generators(), self.p, self.q);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            p: self.p,
            q: self.q,
            mat: self.mat.scale(factor),
        }
    }

    /// Multiplies every entry on the left by an even scalar-like `c`; the
    /// grading is preserved because `c` is even.
    pub fn scale_by(&self, c: &R) -> Result<Self> {
        if !c.parity().is_even_or_zero() {
            return Err(Error::Parity(format!("scaling factor {c} must be even")));
        }
        Ok(Self {
            p: self.p,
            q: self.q,
            mat: self.mat.left_mul_entries(c),
        })
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Result<Super<S>> {
        Super::from_mat(self.p, self.q, self.mat.map(f))
    }

    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Result<S>) -> Result<Super<S>> {
        Super::from_mat(self.p, self.q, self.mat.try_map(f)?)
    }

    /// `str M = tr A - tr B`.
    pub fn supertrace(&self) -> R {
        let n = self.generators();
        let mut acc = R::zero_in(n);
        for i in 0..self.p {
            acc = acc.plus(self.get(i, i));
        }
        for i in self.p..self.size() {
            acc = acc.minus(self.get(i, i));
        }
        acc
    }

    pub fn classify_reduction(&self) -> Reduction {
        if self.a().is_zero() {
            Reduction::OddReduced
        } else if self.delta().is_zero() {
            Reduction::EvenReduced
        } else {
            Reduction::General
        }
    }

    pub fn mat_apply(&self, v: &SuperVector<R>) -> Result<SuperVector<R>> {
        if v.p() != self.p || v.q() != self.q {
            return Err(Error::Shape(format!(
                "({}|{}) supermatrix applied to ({}|{}) vector",
                self.p,
                self.q,
                v.p(),
                v.q()
            )));
        }
        let col = Mat::from_rows(v.generators(), v.coords().iter().map(|x| vec![x.clone()]).collect())?;
        let out = self.mat.checked_mul(&col)?;
        let coords: Vec<R> = (0..self.size()).map(|i| out.get(i, 0).clone()).collect();
        SuperVector::new(self.p, self.q, coords)
    }
}

impl<R: Ring> Mul for &Super<R> {
    type Output = Super<R>;
    fn mul(self, rhs: &Super<R>) -> Super<R> {
        self.mat_mul(rhs).expect("supermatrix mul")
    }
}

impl<R: Ring> Add for &Super<R> {
    type Output = Super<R>;
    fn add(self, rhs: &Super<R>) -> Super<R> {
        self.mat_add(rhs).expect("supermatrix add")
    }
}

impl<R: Ring> Sub for &Super<R> {
    type Output = Super<R>;
    fn sub(self, rhs: &Super<R>) -> Super<R> {
        self.mat_sub(rhs).expect("supermatrix sub")
    }
}

impl<R: Ring> Neg for &Super<R> {
    type Output = Super<R>;
    fn neg(self) -> Super<R> {
        self.scale(&-Rational::from_integer(1.into()))
    }
}

impl<R: Ring> fmt::Display for Super<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.size() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.size() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// A point of `Lambda^(p|q)`: `p` even coordinates followed by `q` odd ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuperVector<R> {
    p: usize,
    q: usize,
    coords: Vec<R>,
}

impl<R: Ring> SuperVector<R> {
    pub fn new(p: usize, q: usize, coords: Vec<R>) -> Result<Self> {
        if coords.len() != p + q || coords.is_empty() {
            return Err(Error::Shape(format!(
                "({p}|{q}) vector needs {} coordinates, got {}",
                p + q,
                coords.len()
            )));
        }
        let n = coords[0].generators();
        for (i, x) in coords.iter().enumerate() {
            if x.generators() != n {
                return Err(Error::Context {
                    left: n,
                    right: x.generators(),
                });
            }
            let ok = if i < p {
                x.parity().is_even_or_zero()
            } else {
                x.parity().is_odd_or_zero()
            };
            if !ok {
                return Err(Error::Parity(format!(
                    "coordinate {i} should be {} but is {}",
                    if i < p { "even" } else { "odd" },
                    x.parity()
                )));
            }
        }
        Ok(Self { p, q, coords })
    }

    pub fn from_parts(even: Vec<R>, odd: Vec<R>) -> Result<Self> {
        let (p, q) = (even.len(), odd.len());
        Self::new(p, q, even.into_iter().chain(odd).collect())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn generators(&self) -> u8 {
        self.coords[0].generators()
    }

    pub fn coords(&self) -> &[R] {
        &self.coords
    }

    pub fn even_part(&self) -> &[R] {
        &self.coords[..self.p]
    }

    pub fn odd_part(&self) -> &[R] {
        &self.coords[self.p..]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Ring::is_zero)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Result<SuperVector<S>> {
        SuperVector::new(self.p, self.q, self.coords.iter().map(f).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if self.p != other.p || self.q != other.q {
            return Err(Error::Shape("vector shapes differ".into()));
        }
        Self::new(
            self.p,
            self.q,
            self.coords.iter().zip(&other.coords).map(|(a, b)| a.minus(b)).collect(),
        )
    }
}
