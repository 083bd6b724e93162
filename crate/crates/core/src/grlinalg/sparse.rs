//! Sparse vectors and an incremental triangular basis for submodules of
//! `R^n`, used wherever the ambient dimension is too large for dense SNF.

use std::collections::BTreeMap;

use crate::coeff::{CoefficientRing, Scalar};

/// Sorted list of `(index, nonzero coefficient)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Scalar::one())] }
    }

    pub fn single(i: usize, x: Scalar) -> Self {
        if x.is_zero() {
            SparseVec::new()
        } else {
            SparseVec { entries: vec![(i, x)] }
        }
    }

    /// From arbitrary pairs; duplicates are summed, zeros dropped.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Scalar)>>(pairs: I) -> Self {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, x) in pairs {
            let e = map.entry(i).or_default();
            *e += &x;
        }
        SparseVec { entries: map.into_iter().filter(|(_, x)| !x.is_zero()).collect() }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); n];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn lead(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, x)| (*i, x))
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn remove(&mut self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(p) => self.entries.remove(p).1,
            Err(_) => Scalar::zero(),
        }
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: &Scalar, other: &SparseVec) {
        if a.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (xs, ys) = (&self.entries, &other.entries);
        while i < xs.len() || j < ys.len() {
            if j == ys.len() || (i < xs.len() && xs[i].0 < ys[j].0) {
                out.push(xs[i].clone());
                i += 1;
            } else if i == xs.len() || ys[j].0 < xs[i].0 {
                out.push((ys[j].0, a * &ys[j].1));
                j += 1;
            } else {
                let mut s = xs[i].1.clone();
                s.add_mul(a, &ys[j].1);
                if !s.is_zero() {
                    out.push((xs[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        self.entries = out;
    }

    pub fn scaled(&self, a: &Scalar) -> SparseVec {
        if a.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * a)).collect() }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut s = self.clone();
        s.axpy(&Scalar::one(), other);
        s
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut s = self.clone();
        s.axpy(&Scalar::from_int(-1), other);
        s
    }

    /// Reindex through `f`, dropping entries mapped to `None`.
    pub fn remap(&self, f: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().filter_map(|(i, x)| f(*i).map(|j| (j, x.clone()))))
    }

    /// Shift all indices by `offset`.
    pub fn shifted(&self, offset: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, x)| (i + offset, x.clone())).collect() }
    }

    /// Concatenate: `self` occupies `0..len_self`, `other` is shifted past it.
    pub fn concat(&self, len_self: usize, other: &SparseVec) -> SparseVec {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|(i, x)| (i + len_self, x.clone())));
        SparseVec { entries }
    }

    /// Entries with index in `range`, re-based to start at 0.
    pub fn slice(&self, range: std::ops::Range<usize>) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| range.contains(i))
                .map(|(i, x)| (i - range.start, x.clone()))
                .collect(),
        }
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero();
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            match self.entries[i].0.cmp(&other.entries[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc.add_mul(&self.entries[i].1, &other.entries[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    /// expression of `vec` in terms of the inserted generators
    combo: SparseVec,
}

/// Triangular basis (distinct leading indices) of the submodule spanned by
/// the inserted vectors. Insertion applies only unimodular operations, so the
/// relations produced when an insertion reduces to zero form a basis of the
/// relation module of the inserted generators.
#[derive(Clone, Debug)]
pub struct Lattice {
    ring: CoefficientRing,
    rows: BTreeMap<usize, Row>,
    inserted: usize,
    relations: Vec<SparseVec>,
}

impl Lattice {
    pub fn new(ring: &CoefficientRing) -> Self {
        Lattice { ring: ring.clone(), rows: BTreeMap::new(), inserted: 0, relations: Vec::new() }
    }

    pub fn from_generators<'a, I: IntoIterator<Item = &'a SparseVec>>(ring: &CoefficientRing, gens: I) -> Self {
        let mut l = Lattice::new(ring);
        for g in gens {
            l.insert(g.clone());
        }
        l
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generator_count(&self) -> usize {
        self.inserted
    }

    /// A basis of the relations among the inserted generators.
    pub fn relations(&self) -> &[SparseVec] {
        &self.relations
    }

    /// Basis vectors, ordered by leading index.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.rows.values().map(|r| r.vec.clone()).collect()
    }

    /// Basis vectors together with their expressions in the generators.
    pub fn basis_with_combos(&self) -> Vec<(SparseVec, SparseVec)> {
        self.rows.values().map(|r| (r.vec.clone(), r.combo.clone())).collect()
    }

    /// Insert a generator; returns the index it was given.
    pub fn insert(&mut self, v: SparseVec) -> usize {
        let id = self.inserted;
        self.inserted += 1;
        let mut cur = Row { vec: v, combo: SparseVec::unit(id) };
        loop {
            let Some((lead, x)) = cur.vec.lead().map(|(i, x)| (i, x.clone())) else {
                self.relations.push(cur.combo);
                return id;
            };
            let Some(row) = self.rows.get_mut(&lead) else {
                self.rows.insert(lead, cur);
                return id;
            };
            let p = row.vec.get(lead);
            match self.ring.exact_div(&x, &p) {
                Some(q) => {
                    let mq = -q;
                    cur.vec.axpy(&mq, &row.vec);
                    cur.combo.axpy(&mq, &row.combo);
                }
                None => {
                    let (s, t, g) = self.ring.bezout(&p, &x);
                    let pg = &p / &g;
                    let mxg = -(&x / &g);
                    let mut new_row = Row { vec: row.vec.scaled(&s), combo: row.combo.scaled(&s) };
                    new_row.vec.axpy(&t, &cur.vec);
                    new_row.combo.axpy(&t, &cur.combo);
                    let mut rest = Row { vec: cur.vec.scaled(&pg), combo: cur.combo.scaled(&pg) };
                    rest.vec.axpy(&mxg, &row.vec);
                    rest.combo.axpy(&mxg, &row.combo);
                    *row = new_row;
                    cur = rest;
                }
            }
        }
    }

    /// Reduce `v` against the basis. Returns the remainder and the
    /// combination of generators subtracted (`v = remainder + combo·gens`).
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut cur = v.clone();
        let mut combo = SparseVec::new();
        loop {
            let Some((lead, x)) = cur.lead().map(|(i, x)| (i, x.clone())) else {
                return (cur, combo);
            };
            let Some(row) = self.rows.get(&lead) else {
                return (cur, combo);
            };
            let p = row.vec.get(lead);
            let Some(q) = self.ring.exact_div(&x, &p) else {
                return (cur, combo);
            };
            cur.axpy(&-&q, &row.vec);
            combo.axpy(&q, &row.combo);
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Coefficients `c` over the inserted generators with `sum c_i g_i = v`.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, combo) = self.reduce(v);
        rem.is_zero().then_some(combo)
    }

    /// Coordinates of `v` in the triangular basis (ordered by lead).
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Scalar>> {
        let mut cur = v.clone();
        let mut coords = vec![Scalar::zero(); self.rows.len()];
        let index: BTreeMap<usize, usize> = self.rows.keys().enumerate().map(|(k, l)| (*l, k)).collect();
        while let Some((lead, x)) = cur.lead().map(|(i, x)| (i, x.clone())) {
            let row = self.rows.get(&lead)?;
            let q = self.ring.exact_div(&x, &row.vec.get(lead))?;
            cur.axpy(&-&q, &row.vec);
            coords[index[&lead]] = q;
        }
        Some(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(&xs.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn axpy_cancels() {
        let mut a = sv(&[1, 2, 0, 3]);
        a.axpy(&Scalar::from_int(-1), &sv(&[1, 2, 5, 0]));
        assert_eq!(a, sv(&[0, 0, -5, 3]));
    }

    #[test]
    fn lattice_membership_over_localization() {
        let ring = CoefficientRing::localized([2]).unwrap();
        let l = Lattice::from_generators(&ring, [&sv(&[3, 0]), &sv(&[0, 9])]);
        assert!(l.contains(&sv(&[6, 18])));
        assert!(!l.contains(&sv(&[1, 0])));
        assert!(!l.contains(&sv(&[0, 3])));
        let c = l.solve(&sv(&[3, 9])).unwrap();
        assert_eq!(c, sv(&[1, 1]));
    }

    #[test]
    fn bezout_insertion_keeps_span() {
        let ring = CoefficientRing::localized([2]).unwrap();
        let l = Lattice::from_generators(&ring, [&sv(&[3, 1]), &sv(&[5, 0])]);
        // span contains (3,1)*5 - (5,0)*3 = (0,5) and gcd(3,5)=1 in lead
        assert!(l.contains(&sv(&[1, 2])));
        assert!(l.contains(&sv(&[0, 5])));
        assert!(!l.contains(&sv(&[0, 1])));
    }

    #[test]
    fn relations_form_kernel() {
        let ring = CoefficientRing::rationals();
        let gens = [sv(&[1, 1]), sv(&[2, 2]), sv(&[0, 1])];
        let l = Lattice::from_generators(&ring, gens.iter());
        assert_eq!(l.relations().len(), 1);
        let r = &l.relations()[0];
        let mut total = SparseVec::new();
        for (i, c) in r.iter() {
            total.axpy(c, &gens[*i]);
        }
        assert!(total.is_zero());
    }
}
