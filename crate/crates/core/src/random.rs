//! Seeded generators for elements, supermatrices and families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::annihilator::{annihilator_odd, OddSubspace};
use crate::error::Result;
use crate::grassmann::{rational, AlgebraContext, GrassmannElement, Monomial, Rational};
use crate::matrix::{Mat, Super, SuperVector};
use crate::poly::{LaurentPoly, TimePoly};
use crate::supermatrix::{ElementVector, LaurentMatrix, ParamSuperMatrix, SuperMatrix};

const MAX_TERMS: usize = 4;

pub struct Sampler {
    rng: ChaCha8Rng,
    ctx: AlgebraContext,
    odd: Vec<Monomial>,
    even: Vec<Monomial>,
}

impl Sampler {
    pub fn new(n: u8, seed: u64) -> Result<Self> {
        let ctx = AlgebraContext::new(n as usize)?;
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            odd: ctx.odd_basis(),
            even: ctx.even_basis(),
            ctx,
        })
    }

    pub fn generators(&self) -> u8 {
        self.ctx.generators() as u8
    }

    pub fn context(&self) -> &AlgebraContext {
        &self.ctx
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Small nonzero rational, mostly integral.
    pub fn coefficient(&mut self) -> Rational {
        let numer = loop {
            let k: i64 = self.rng.gen_range(-3..=3);
            if k != 0 {
                break k;
            }
        };
        let denom = if self.rng.gen_bool(0.25) { self.rng.gen_range(2..=3) } else { 1 };
        rational(numer, denom)
    }

    fn draw_from(&mut self, basis: &[Monomial], max_terms: usize) -> GrassmannElement {
        let n = self.generators();
        if basis.is_empty() {
            return GrassmannElement::zero(n);
        }
        let k = self.rng.gen_range(1..=max_terms.min(basis.len()));
        let chosen: Vec<Monomial> = basis.choose_multiple(&mut self.rng, k).copied().collect();
        let terms: Vec<(Monomial, Rational)> = chosen.into_iter().map(|m| (m, self.coefficient())).collect();
        GrassmannElement::from_terms(n, terms).expect("monomials come from the context")
    }

    pub fn odd(&mut self) -> GrassmannElement {
        let basis = self.odd.clone();
        self.draw_from(&basis, MAX_TERMS)
    }

    pub fn even(&mut self) -> GrassmannElement {
        let basis = self.even.clone();
        self.draw_from(&basis, MAX_TERMS)
    }

    /// Even with nonzero body.
    pub fn even_invertible(&mut self) -> GrassmannElement {
        let n = self.generators();
        let soul_basis: Vec<Monomial> = self.even.iter().copied().filter(|m| !m.is_empty()).collect();
        let soul = if soul_basis.is_empty() || self.rng.gen_bool(0.2) {
            GrassmannElement::zero(n)
        } else {
            self.draw_from(&soul_basis, MAX_TERMS - 1)
        };
        &GrassmannElement::scalar(n, self.coefficient()) + &soul
    }

    /// Arbitrary element, mixed parity allowed.
    pub fn element(&mut self) -> GrassmannElement {
        if self.rng.gen_bool(0.1) {
            return GrassmannElement::zero(self.generators());
        }
        let basis = self.ctx.basis();
        self.draw_from(&basis, MAX_TERMS + 2)
    }

    fn maybe_zero(&mut self, x: GrassmannElement) -> GrassmannElement {
        if self.rng.gen_bool(0.1) {
            GrassmannElement::zero(self.generators())
        } else {
            x
        }
    }

    fn block(&mut self, rows: usize, cols: usize, odd: bool) -> Mat<GrassmannElement> {
        let n = self.generators();
        let mut m = Mat::zeros(n, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = if odd { self.odd() } else { self.even() };
                let x = self.maybe_zero(x);
                m.set(i, j, x);
            }
        }
        m
    }

    /// Square even block whose determinant has nonzero body.
    pub fn invertible_block(&mut self, size: usize) -> Mat<GrassmannElement> {
        loop {
            let mut m = self.block(size, size, false);
            for i in 0..size {
                let x = self.even_invertible();
                m.set(i, i, x);
            }
            let det = m.det_even().expect("even block of supported size");
            if det.body() != rational(0, 1) {
                return m;
            }
        }
    }

    pub fn supermatrix(&mut self, p: usize, q: usize) -> SuperMatrix {
        let a = self.block(p, p, false);
        let gamma = self.block(p, q, true);
        let delta = self.block(q, p, true);
        let b = self.block(q, q, false);
        Super::from_blocks(&a, &gamma, &delta, &b).expect("blocks are graded")
    }

    /// Supermatrix whose `B` block is invertible.
    pub fn supermatrix_invertible_b(&mut self, p: usize, q: usize) -> SuperMatrix {
        let a = self.block(p, p, false);
        let gamma = self.block(p, q, true);
        let delta = self.block(q, p, true);
        let b = self.invertible_block(q);
        Super::from_blocks(&a, &gamma, &delta, &b).expect("blocks are graded")
    }

    fn combination(&mut self, basis: &[GrassmannElement]) -> GrassmannElement {
        let n = self.generators();
        let mut x = GrassmannElement::zero(n);
        for b in basis {
            if self.rng.gen_bool(0.6) {
                x = &x + &b.scale(&self.coefficient());
            }
        }
        x
    }

    /// Odd subspace spanned by one or two random odd elements of few terms.
    pub fn odd_span(&mut self) -> Result<OddSubspace> {
        let k = self.rng.gen_range(1..=2);
        let spanning: Vec<GrassmannElement> = (0..k)
            .map(|_| {
                let basis = self.odd.clone();
                self.draw_from(&basis, 2)
            })
            .collect();
        OddSubspace::span(&self.ctx, &spanning)
    }

    /// Antitriangle chain with `Gamma` entries from a span `S`, `Delta`
    /// entries from `Ann S` and invertible `B` blocks.
    pub fn strong_chain(&mut self, p: usize, q: usize, len: usize) -> Result<Vec<SuperMatrix>> {
        let n = self.generators();
        let span = self.odd_span()?;
        let ann = annihilator_odd(&self.ctx, span.basis())?;
        let mut chain = Vec::with_capacity(len);
        for _ in 0..len {
            let mut gamma = Mat::zeros(n, p, q);
            for i in 0..p {
                for j in 0..q {
                    let x = self.combination(span.basis());
                    gamma.set(i, j, x);
                }
            }
            let mut delta = Mat::zeros(n, q, p);
            for i in 0..q {
                for j in 0..p {
                    let x = self.combination(ann.basis());
                    delta.set(i, j, x);
                }
            }
            let b = self.invertible_block(q);
            chain.push(Super::from_blocks(&Mat::zeros(n, p, p), &gamma, &delta, &b)?);
        }
        Ok(chain)
    }

    /// Grading-preserving invertible (1|1) matrix together with its inverse.
    pub fn conjugator(&mut self) -> Result<(SuperMatrix, SuperMatrix)> {
        let n = self.generators();
        let zero = GrassmannElement::zero(n);
        let one = GrassmannElement::one(n);
        let (d1, d2) = (self.even_invertible(), self.even_invertible());
        let (nu, mu) = (self.odd(), self.odd());
        let diag = Super::new(1, 1, vec![vec![d1.clone(), zero.clone()], vec![zero.clone(), d2.clone()]])?;
        let diag_inv = Super::new(1, 1, vec![vec![d1.invert()?, zero.clone()], vec![zero.clone(), d2.invert()?]])?;
        let upper = Super::new(1, 1, vec![vec![one.clone(), nu.clone()], vec![zero.clone(), one.clone()]])?;
        let upper_inv = Super::new(1, 1, vec![vec![one.clone(), -&nu], vec![zero.clone(), one.clone()]])?;
        let lower = Super::new(1, 1, vec![vec![one.clone(), zero.clone()], vec![mu.clone(), one.clone()]])?;
        let lower_inv = Super::new(1, 1, vec![vec![one.clone(), zero.clone()], vec![-&mu, one]])?;
        let g = lower.mat_mul(&upper)?.mat_mul(&diag)?;
        let g_inv = diag_inv.mat_mul(&upper_inv)?.mat_mul(&lower_inv)?;
        Ok((g, g_inv))
    }

    /// `K_0 = [[0, 0], [delta, 1]]` and nilpotents `[[0, gamma_i], [0, 0]]`
    /// with `gamma_i delta = 0`; the resulting components form a band
    /// system. `nilpotents[k]` becomes component `k + 1` (zero entries allowed).
    pub fn band_components(&mut self, degree: usize) -> Result<Vec<SuperMatrix>> {
        let n = self.generators();
        let zero = GrassmannElement::zero(n);
        let one = GrassmannElement::one(n);
        let delta = self.odd();
        let ann = annihilator_odd(&self.ctx, std::slice::from_ref(&delta))?;
        let mut components = vec![Super::new(1, 1, vec![vec![zero.clone(), zero.clone()], vec![delta, one]])?];
        for m in 1..=degree {
            let gamma = if m == degree || self.rng.gen_bool(0.5) {
                self.combination(ann.basis())
            } else {
                zero.clone()
            };
            components.push(Super::new(1, 1, vec![vec![zero.clone(), gamma], vec![zero.clone(), zero.clone()]])?);
        }
        let (g, g_inv) = self.conjugator()?;
        components.iter().map(|k| g.mat_mul(k)?.mat_mul(&g_inv)).collect()
    }

    /// `[K_0, K_1]` drawn from constructed positives, near misses and
    /// unconstrained pairs in (1|1) and (2|2).
    pub fn linear_components(&mut self) -> Result<Vec<SuperMatrix>> {
        let n = self.generators();
        match self.rng.gen_range(0..5) {
            0 => self.band_components(1),
            1 => {
                let mut c = self.band_components(1)?;
                match self.rng.gen_range(0..3) {
                    0 => c[0] = SuperMatrix::identity(n, 1, 1),
                    1 => c[1] = c[1].mat_add(&self.supermatrix(1, 1))?,
                    _ => c[0] = c[0].mat_add(&self.supermatrix(1, 1))?,
                }
                Ok(c)
            }
            2 => Ok(vec![self.supermatrix(1, 1), self.supermatrix(1, 1)]),
            3 => Ok(vec![self.supermatrix(2, 2), self.supermatrix(2, 2)]),
            _ => {
                let base = if self.rng.gen_bool(0.5) {
                    SuperMatrix::identity(n, 2, 2)
                } else {
                    SuperMatrix::zero(n, 2, 2)
                };
                let top = if self.rng.gen_bool(0.5) { SuperMatrix::zero(n, 2, 2) } else { self.supermatrix(2, 2) };
                Ok(vec![base, top])
            }
        }
    }

    pub fn time_poly(&mut self) -> TimePoly {
        let n = self.generators();
        let k = self.rng.gen_range(0..=3);
        let terms: Vec<([i32; 2], GrassmannElement)> = (0..k)
            .map(|_| {
                let e = [self.rng.gen_range(0..=3), self.rng.gen_range(0..=3)];
                (e, self.element())
            })
            .collect();
        TimePoly::from_terms(n, terms).expect("exponents are in range")
    }

    pub fn laurent_poly(&mut self) -> LaurentPoly {
        let n = self.generators();
        let k = self.rng.gen_range(0..=3);
        let terms: Vec<([i32; 2], GrassmannElement)> = (0..k)
            .map(|_| {
                let e = [-self.rng.gen_range(0..=3), -self.rng.gen_range(0..=3)];
                (e, self.element())
            })
            .collect();
        LaurentPoly::from_terms(n, terms).expect("exponents are in range")
    }

    fn graded<P: crate::matrix::Ring>(&mut self, p: usize, q: usize, lift: impl Fn(&mut Self, bool) -> P) -> Super<P> {
        let size = p + q;
        let rows = (0..size)
            .map(|i| (0..size).map(|j| lift(self, (i < p) != (j < p))).collect())
            .collect();
        Super::new(p, q, rows).expect("entries respect the grading")
    }

    /// Family whose entries are polynomials in `t`, `s` of the right parity.
    pub fn param_matrix(&mut self, p: usize, q: usize) -> ParamSuperMatrix {
        self.graded(p, q, |s, odd| {
            let n = s.generators();
            let k = s.rng.gen_range(0..=2);
            let terms: Vec<([i32; 2], GrassmannElement)> = (0..k)
                .map(|_| {
                    let e = [s.rng.gen_range(0..=3), s.rng.gen_range(0..=2)];
                    (e, if odd { s.odd() } else { s.even() })
                })
                .collect();
            TimePoly::from_terms(n, terms).expect("exponents are in range")
        })
    }

    /// Family in `t` alone.
    pub fn family(&mut self, p: usize, q: usize) -> ParamSuperMatrix {
        self.graded(p, q, |s, odd| {
            let n = s.generators();
            let k = s.rng.gen_range(0..=2);
            let terms: Vec<([i32; 2], GrassmannElement)> = (0..k)
                .map(|_| ([s.rng.gen_range(0..=3), 0], if odd { s.odd() } else { s.even() }))
                .collect();
            TimePoly::from_terms(n, terms).expect("exponents are in range")
        })
    }

    pub fn laurent_matrix(&mut self, p: usize, q: usize) -> LaurentMatrix {
        self.graded(p, q, |s, odd| {
            let n = s.generators();
            let k = s.rng.gen_range(0..=2);
            let terms: Vec<([i32; 2], GrassmannElement)> = (0..k)
                .map(|_| {
                    let e = [-s.rng.gen_range(0..=3), -s.rng.gen_range(0..=3)];
                    (e, if odd { s.odd() } else { s.even() })
                })
                .collect();
            LaurentPoly::from_terms(n, terms).expect("exponents are in range")
        })
    }

    pub fn vector(&mut self, p: usize, q: usize) -> ElementVector {
        let mut coords = Vec::with_capacity(p + q);
        for i in 0..p + q {
            let x = if i < p { self.even() } else { self.odd() };
            coords.push(self.maybe_zero(x));
        }
        SuperVector::new(p, q, coords).expect("coordinates respect the grading")
    }

    /// `(p, q)` with `p, q <= max` and `p + q >= 1`.
    pub fn shape(&mut self, max: usize) -> (usize, usize) {
        loop {
            let shape = (self.rng.gen_range(0..=max), self.rng.gen_range(0..=max));
            if shape != (0, 0) {
                return shape;
            }
        }
    }
}
