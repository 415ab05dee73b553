//! Exact rational sparse linear algebra: span membership with witness
//! coefficients, rank and nullspace. Backs quotient decisions and
//! independence certificates, so everything here is exact; no floats, no
//! modular shortcuts.

use crate::groupalg::Rational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sparse vector keyed by column index. No stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec {
    entries: BTreeMap<usize, Rational>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, Rational)>>(iter: I) -> Self {
        let mut v = SparseVec::new();
        for (ix, c) in iter {
            v.add_entry(ix, c);
        }
        v
    }

    pub fn add_entry(&mut self, ix: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.entries.entry(ix).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.entries.remove(&ix);
        }
    }

    pub fn get(&self, ix: usize) -> Option<&Rational> {
        self.entries.get(&ix)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &Rational)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// self += c * other
    pub fn axpy(&mut self, c: &Rational, other: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (ix, v) in other.iter() {
            self.add_entry(*ix, c * v);
        }
    }

    pub fn scaled(&self, c: &Rational) -> SparseVec {
        SparseVec::from_entries(self.iter().map(|(ix, x)| (*ix, x * c)))
    }
}

fn size_score(c: &Rational) -> u64 {
    c.numer().bits() + c.denom().bits()
}

type Tag = BTreeMap<usize, Rational>;

fn tag_axpy(tag: &mut Tag, c: &Rational, other: &Tag) {
    for (ix, v) in other {
        let e = tag.entry(*ix).or_insert_with(Rational::zero);
        *e += c * v;
        if e.is_zero() {
            tag.remove(ix);
        }
    }
}

/// Reduced row echelon basis that remembers, for every stored row, its
/// expression in terms of the inserted input rows. Pivot columns are chosen
/// size-aware (smallest numerator/denominator bit size first) to limit
/// coefficient growth.
#[derive(Debug, Default)]
struct Rref {
    /// pivot column -> (row with 1 at the pivot, tag over input indices)
    rows: BTreeMap<usize, (SparseVec, Tag)>,
}

impl Rref {
    /// Eliminates every pivot present in `vec`, updating `tag` accordingly.
    fn reduce(&self, vec: &mut SparseVec, tag: &mut Tag) {
        loop {
            let hit = vec
                .iter()
                .map(|(ix, _)| *ix)
                .find(|ix| self.rows.contains_key(ix));
            let Some(col) = hit else { return };
            let (bvec, btag) = &self.rows[&col];
            let c = -vec.get(col).expect("hit column present").clone();
            vec.axpy(&c, bvec);
            tag_axpy(tag, &c, btag);
        }
    }

    /// Inserts an input row. Returns the tag when the row is dependent
    /// (reduces to zero).
    fn insert(&mut self, mut vec: SparseVec, mut tag: Tag) -> Option<Tag> {
        self.reduce(&mut vec, &mut tag);
        if vec.is_zero() {
            return Some(tag);
        }
        let pivot = vec
            .iter()
            .min_by_key(|(ix, c)| (size_score(c), **ix))
            .map(|(ix, _)| *ix)
            .expect("nonzero vector has entries");
        let inv = Rational::one() / vec.get(pivot).unwrap().clone();
        let vec = vec.scaled(&inv);
        let tag: Tag = tag.into_iter().map(|(ix, v)| (ix, v * &inv)).collect();
        // keep the basis fully reduced: clear the new pivot elsewhere
        let cols: Vec<usize> = self.rows.keys().copied().collect();
        for col in cols {
            let (bvec, btag) = self.rows.get_mut(&col).unwrap();
            if let Some(c) = bvec.get(pivot).cloned() {
                let c = -c;
                bvec.axpy(&c, &vec);
                tag_axpy(btag, &c, &tag);
            }
        }
        self.rows.insert(pivot, (vec, tag));
        None
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Rows of sparse rational vectors.
#[derive(Debug, Clone, Default)]
pub struct SparseMatrix {
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn from_rows(rows: Vec<SparseVec>) -> Self {
        SparseMatrix { rows }
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut rref = Rref::default();
        for row in &self.rows {
            rref.insert(row.clone(), Tag::new());
        }
        rref.rank()
    }

    /// Basis of combinations `v` (indexed by row number) with
    /// `sum_i v_i * row_i = 0`. Every returned vector re-verifies to a zero
    /// image.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let n = self.rows.len();
        let mut rref = Rref::default();
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut tag = Tag::new();
            tag.insert(i, Rational::one());
            if let Some(combo) = rref.insert(row.clone(), tag) {
                let mut v = vec![Rational::zero(); n];
                for (ix, c) in combo {
                    v[ix] = c;
                }
                debug_assert!({
                    let mut acc = SparseVec::new();
                    for (c, row) in v.iter().zip(&self.rows) {
                        acc.axpy(c, row);
                    }
                    acc.is_zero()
                });
                out.push(v);
            }
        }
        out
    }
}

/// Solves `sum_j x_j * generators_j = target` exactly, returning the
/// coefficient vector when the target lies in the span. Generators are
/// inserted in order, so witnesses prefer earlier generators. The witness is
/// re-evaluated exactly before being returned.
pub fn solve_membership(target: &SparseVec, generators: &[SparseVec]) -> Option<Vec<Rational>> {
    let n = generators.len();
    if target.is_zero() {
        return Some(vec![Rational::zero(); n]);
    }
    let mut rref = Rref::default();
    for (j, g) in generators.iter().enumerate() {
        let mut tag = Tag::new();
        tag.insert(j, Rational::one());
        rref.insert(g.clone(), tag);
    }
    let mut vec = target.clone();
    let mut tag = Tag::new();
    rref.reduce(&mut vec, &mut tag);
    if !vec.is_zero() {
        return None;
    }
    // vec reduced to zero: target = -sum tag_j * gen_j
    let mut coeffs = vec![Rational::zero(); n];
    for (ix, c) in tag {
        coeffs[ix] = -c;
    }
    // exact re-evaluation of the witness
    let mut acc = SparseVec::new();
    for (j, g) in generators.iter().enumerate() {
        acc.axpy(&coeffs[j], g);
    }
    acc.axpy(&-Rational::one(), target);
    if !acc.is_zero() {
        return None;
    }
    Some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupalg::rat;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_entries(entries.iter().map(|&(ix, c)| (ix, rat(c))))
    }

    #[test]
    fn membership_constructed() {
        let g1 = sv(&[(0, 1), (2, 3)]);
        let g2 = sv(&[(1, 2), (2, -1)]);
        let mut target = SparseVec::new();
        target.axpy(&rat(1), &g1);
        target.axpy(&rat(2), &g2);
        let sol = solve_membership(&target, &[g1, g2]).unwrap();
        assert_eq!(sol, vec![rat(1), rat(2)]);
    }

    #[test]
    fn membership_fails_outside_span() {
        let g1 = sv(&[(0, 1)]);
        let g2 = sv(&[(1, 1)]);
        let target = sv(&[(2, 1)]);
        assert!(solve_membership(&target, &[g1, g2]).is_none());
    }

    #[test]
    fn identity_rank() {
        let rows = (0..5).map(|i| sv(&[(i, 1)])).collect();
        assert_eq!(SparseMatrix::from_rows(rows).rank(), 5);
    }

    #[test]
    fn duplicated_row_nullspace() {
        let rows = vec![sv(&[(0, 1), (1, 2)]), sv(&[(0, 1), (1, 2)]), sv(&[(2, 1)])];
        let ns = SparseMatrix::from_rows(rows).nullspace();
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        // (1, -1, 0) up to scale
        assert!(!v[0].is_zero() && v[1] == -v[0].clone() && v[2].is_zero());
    }

    #[test]
    fn rank_nullity() {
        let rows = vec![
            sv(&[(0, 1), (1, 1)]),
            sv(&[(0, 2), (1, 2)]),
            sv(&[(1, 1), (2, 1)]),
            sv(&[(0, 1), (2, -1)]),
        ];
        let m = SparseMatrix::from_rows(rows);
        assert_eq!(m.rank() + m.nullspace().len(), m.num_rows());
    }
}
