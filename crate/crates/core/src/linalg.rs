//! Sparse exact linear algebra over the rationals.
//!
//! Vectors are ordered maps from a coordinate key to a nonzero rational.
//! Pivots are always taken at the smallest key, so every reduced basis
//! returned here is the unique reduced row echelon form of its span.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::grassmann::{GrassmannElement, Monomial, Rational};

pub type SparseVec<K> = BTreeMap<K, Rational>;

fn axpy<K: Ord + Clone>(target: &mut SparseVec<K>, factor: &Rational, source: &SparseVec<K>) {
    for (k, v) in source {
        let delta = factor * v;
        match target.get_mut(k) {
            Some(slot) => {
                *slot += delta;
                if slot.is_zero() {
                    target.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    target.insert(k.clone(), delta);
                }
            }
        }
    }
}

fn normalize<K: Ord + Clone>(v: &mut SparseVec<K>) {
    if let Some((_, lead)) = v.iter().next() {
        let inv = lead.recip();
        if !inv.is_one() {
            for c in v.values_mut() {
                *c *= &inv;
            }
        }
    }
}

/// Incremental echelon form keyed by each row's leading coordinate.
#[derive(Debug, Clone, Default)]
pub struct Echelon<K: Ord + Clone> {
    pivots: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self {
            pivots: BTreeMap::new(),
        }
    }

    pub fn from_vectors(vectors: impl IntoIterator<Item = SparseVec<K>>) -> Self {
        let mut e = Self::new();
        for v in vectors {
            e.insert(v);
        }
        e
    }

    /// Reduces `v` against the current pivots; the remainder is zero iff
    /// `v` lies in the span.
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        // Eliminating at a pivot key only touches larger keys.
        while let Some(key) = v.keys().find(|k| self.pivots.contains_key(*k)).cloned() {
            let factor = -v[&key].clone();
            axpy(&mut v, &factor, &self.pivots[&key]);
        }
        v
    }

    /// Adds `v` to the span; returns false when it was already contained.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let mut r = self.reduce_leading(v);
        if r.is_empty() {
            return false;
        }
        normalize(&mut r);
        let lead = r.keys().next().cloned().expect("nonzero remainder");
        self.pivots.insert(lead, r);
        true
    }

    fn reduce_leading(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        while let Some(lead) = v.keys().next().cloned() {
            match self.pivots.get(&lead) {
                Some(row) => {
                    let factor = -v[&lead].clone();
                    axpy(&mut v, &factor, row);
                }
                None => break,
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The reduced row echelon basis, ordered by leading key.
    pub fn rref(&self) -> Vec<SparseVec<K>> {
        let keys: Vec<K> = self.pivots.keys().cloned().collect();
        let mut rows: BTreeMap<K, SparseVec<K>> = self.pivots.clone();
        // Back-substitute from the largest pivot downwards.
        for key in keys.iter().rev() {
            let pivot_row = rows[key].clone();
            for other in keys.iter().filter(|k| *k < key) {
                let row = rows.get_mut(other).expect("pivot row");
                if let Some(c) = row.get(key).cloned() {
                    axpy(row, &-c, &pivot_row);
                }
            }
        }
        rows.into_values().collect()
    }
}

/// Basis of `{ c : sum_i c_i * columns[i] = 0 }` in reduced row echelon
/// form over the column index order.
pub fn kernel<K: Ord + Clone>(columns: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    // Pivot table on the image coordinates, tracking the combination of
    // input columns that produced each pivot row.
    let mut pivots: BTreeMap<K, (SparseVec<K>, SparseVec<usize>)> = BTreeMap::new();
    let mut relations = Echelon::<usize>::new();
    for (i, col) in columns.iter().enumerate() {
        let mut image = col.clone();
        let mut combo: SparseVec<usize> = BTreeMap::from([(i, Rational::one())]);
        while let Some(lead) = image.keys().next().cloned() {
            match pivots.get(&lead) {
                Some((row, row_combo)) => {
                    let factor = -image[&lead].clone() / &row[&lead];
                    axpy(&mut image, &factor, row);
                    axpy(&mut combo, &factor, row_combo);
                }
                None => break,
            }
        }
        match image.keys().next().cloned() {
            Some(lead) => {
                pivots.insert(lead, (image, combo));
            }
            None => {
                relations.insert(combo);
            }
        }
    }
    relations.rref()
}

pub fn element_vector(x: &GrassmannElement) -> SparseVec<Monomial> {
    x.terms().map(|(m, c)| (*m, c.clone())).collect()
}

pub fn vector_element(n: u8, v: &SparseVec<Monomial>) -> GrassmannElement {
    GrassmannElement::from_terms(n, v.iter().map(|(m, c)| (*m, c.clone())))
        .expect("monomials come from an element over the same context")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::int;

    fn v(entries: &[(usize, i64)]) -> SparseVec<usize> {
        entries.iter().filter(|(_, c)| *c != 0).map(|(k, c)| (*k, int(*c))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let e = Echelon::from_vectors([v(&[(0, 1), (1, 2)]), v(&[(0, 2), (1, 4)]), v(&[(2, 1)])]);
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[(0, 3), (1, 6), (2, -1)])));
        assert!(!e.contains(&v(&[(1, 1)])));
    }

    #[test]
    fn rref_is_canonical() {
        let a = Echelon::from_vectors([v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)])]).rref();
        let b = Echelon::from_vectors([v(&[(0, 1), (2, -1)]), v(&[(0, 2), (1, 1), (2, -1)])]).rref();
        assert_eq!(a, b);
        assert_eq!(a, vec![v(&[(0, 1), (2, -1)]), v(&[(1, 1), (2, 1)])]);
    }

    #[test]
    fn kernel_of_dependent_columns() {
        // columns: e0, 2 e0, e1, e0 + e1
        let cols = vec![v(&[(0, 1)]), v(&[(0, 2)]), v(&[(1, 1)]), v(&[(0, 1), (1, 1)])];
        let ker = kernel(&cols);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let mut sum: SparseVec<usize> = BTreeMap::new();
            for (i, c) in k {
                axpy(&mut sum, c, &cols[*i]);
            }
            assert!(sum.is_empty());
        }
        assert_eq!(ker[0], v(&[(0, 1), (2, 1), (3, -1)]));
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let cols: Vec<SparseVec<usize>> = vec![BTreeMap::new(); 3];
        assert_eq!(kernel(&cols).len(), 3);
    }
}
