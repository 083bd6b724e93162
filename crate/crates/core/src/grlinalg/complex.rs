//! Finite cochain complexes of free modules and their cohomology.
//!
//! Cohomology is computed by first cancelling pairs of cells joined by a
//! unit coefficient (algebraic Morse reduction). Each cancellation is logged
//! so that cocycles can be pushed to the small residual complex (`f`),
//! residual cochains pulled back (`g`), and coboundary preimages recovered
//! through the accumulated homotopy (`h`). The residual complex is handled
//! with dense Smith normal form.

use std::collections::BTreeSet;

use crate::coeff::{CoefficientRing, Scalar};

use super::matrix::Matrix;
use super::snf::{smith_normal_form, solve_with, ModuleEntry, SmithDecomposition};
use super::sparse::SparseVec;

/// Cochain complex concentrated in degrees `0..dims.len()`. The last degree
/// has no outgoing differential, so cohomology is only reported below it.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub ring: CoefficientRing,
    pub dims: Vec<usize>,
    /// `d[k][x]` is the coboundary of cell `x` of degree `k`.
    pub d: Vec<Vec<SparseVec>>,
}

impl CochainComplex {
    pub fn new(ring: &CoefficientRing, dims: Vec<usize>, d: Vec<Vec<SparseVec>>) -> Self {
        assert_eq!(d.len() + 1, dims.len().max(1), "need one differential per degree but the last");
        for (k, cols) in d.iter().enumerate() {
            assert_eq!(cols.len(), dims[k], "differential in degree {k} has wrong width");
        }
        CochainComplex { ring: ring.clone(), dims, d }
    }

    pub fn top(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn apply_d(&self, k: usize, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        if k < self.d.len() {
            for (i, c) in x.iter() {
                out.axpy(c, &self.d[k][*i]);
            }
        }
        out
    }

    /// `d∘d = 0` check.
    pub fn is_complex(&self) -> bool {
        (0..self.d.len().saturating_sub(1)).all(|k| self.d[k].iter().all(|v| self.apply_d(k + 1, v).is_zero()))
    }

    pub fn cohomology(&self) -> Cohomology {
        Cohomology::compute(self)
    }
}

#[derive(Clone, Debug)]
struct Elimination {
    k: usize,
    sigma: usize,
    tau: usize,
    c: Scalar,
    dsigma: SparseVec,
    tau_row: Vec<(usize, Scalar)>,
}

/// A generator of a cohomology module.
#[derive(Clone, Debug)]
pub struct ClassGenerator {
    /// `None` for a free generator, otherwise the (non-unit) order.
    pub order: Option<Scalar>,
    /// A cocycle representing the class.
    pub representative: SparseVec,
    slot: usize,
}

#[derive(Clone, Debug)]
struct DegreeData {
    entry: ModuleEntry,
    generators: Vec<ClassGenerator>,
    cells: Vec<usize>,
    snf_z: SmithDecomposition,
    u_b: Matrix,
    snf_prev: Option<SmithDecomposition>,
    prev_cells: Vec<usize>,
}

/// Cohomology of a [`CochainComplex`] with the data needed to classify
/// cocycles and produce coboundary preimages.
#[derive(Clone, Debug)]
pub struct Cohomology {
    ring: CoefficientRing,
    original: Vec<Vec<SparseVec>>,
    log: Vec<Elimination>,
    degrees: Vec<DegreeData>,
}

fn reduce_complex(cx: &CochainComplex) -> (Vec<Elimination>, Vec<Vec<SparseVec>>, Vec<Vec<bool>>) {
    let ring = &cx.ring;
    let n = cx.dims.len();
    let mut d = cx.d.clone();
    let mut alive: Vec<Vec<bool>> = cx.dims.iter().map(|&m| vec![true; m]).collect();
    // rows[k][y]: cells x of degree k-1 whose coboundary involves y
    let mut rows: Vec<Vec<BTreeSet<usize>>> = cx.dims.iter().map(|&m| vec![BTreeSet::new(); m]).collect();
    for (k, cols) in d.iter().enumerate() {
        for (x, v) in cols.iter().enumerate() {
            for (y, _) in v.iter() {
                rows[k + 1][*y].insert(x);
            }
        }
    }
    let mut log = Vec::new();
    for k in 0..n.saturating_sub(1) {
        loop {
            let mut order: Vec<usize> = (0..cx.dims[k]).filter(|&s| alive[k][s] && !d[k][s].is_zero()).collect();
            order.sort_by_key(|&s| (d[k][s].len(), s));
            let mut progress = false;
            for sigma in order {
                if !alive[k][sigma] {
                    continue;
                }
                let tau = d[k][sigma]
                    .iter()
                    .filter(|(_, c)| ring.is_unit(c))
                    .map(|(t, _)| *t)
                    .min_by_key(|&t| (rows[k + 1][t].len(), t));
                let Some(tau) = tau else { continue };
                progress = true;
                let dsigma = d[k][sigma].clone();
                let c = dsigma.get(tau);
                let tau_row: Vec<(usize, Scalar)> = rows[k + 1][tau]
                    .iter()
                    .filter(|&&x| x != sigma)
                    .map(|&x| (x, d[k][x].get(tau)))
                    .collect();
                for (x, a) in &tau_row {
                    let coef = -(a / &c);
                    let old = std::mem::take(&mut d[k][*x]);
                    let mut new = old.clone();
                    new.axpy(&coef, &dsigma);
                    for (y, _) in old.iter() {
                        if new.get(*y).is_zero() {
                            rows[k + 1][*y].remove(x);
                        }
                    }
                    for (y, _) in new.iter() {
                        rows[k + 1][*y].insert(*x);
                    }
                    d[k][*x] = new;
                }
                // drop sigma from coboundaries of degree k-1
                if k > 0 {
                    for y in std::mem::take(&mut rows[k][sigma]) {
                        d[k - 1][y].remove(sigma);
                    }
                }
                for (t, _) in dsigma.iter() {
                    rows[k + 1][*t].remove(&sigma);
                }
                d[k][sigma] = SparseVec::new();
                debug_assert!(rows[k + 1][tau].is_empty());
                if k + 1 < d.len() {
                    let dt = std::mem::take(&mut d[k + 1][tau]);
                    for (z, _) in dt.iter() {
                        rows[k + 2][*z].remove(&tau);
                    }
                }
                alive[k][sigma] = false;
                alive[k + 1][tau] = false;
                log.push(Elimination { k, sigma, tau, c, dsigma, tau_row });
            }
            if !progress {
                break;
            }
        }
    }
    (log, d, alive)
}

impl Cohomology {
    pub fn compute(cx: &CochainComplex) -> Cohomology {
        let ring = cx.ring.clone();
        let (log, d, alive) = reduce_complex(cx);
        let n = cx.dims.len();
        let cells: Vec<Vec<usize>> =
            alive.iter().map(|a| a.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()).collect();
        // residual differentials as dense matrices
        let residual = |k: usize| -> Matrix {
            let (src, dst) = (&cells[k], &cells[k + 1]);
            let mut m = Matrix::zeros(dst.len(), src.len());
            for (j, &x) in src.iter().enumerate() {
                for (y, c) in d[k][x].iter() {
                    let i = dst.binary_search(y).expect("residual differential hits a cancelled cell");
                    m[(i, j)] = c.clone();
                }
            }
            m
        };
        let mut degrees = Vec::new();
        let mut prev: Option<Matrix> = None;
        for k in 0..n.saturating_sub(1) {
            let mk = residual(k);
            let nk = cells[k].len();
            let snf_k = smith_normal_form(&mk, &ring);
            let z = nk - snf_k.rank;
            let zmat = Matrix::from_columns(nk, &(snf_k.rank..nk).map(|j| snf_k.v.column(j)).collect::<Vec<_>>());
            let snf_z = smith_normal_form(&zmat, &ring);
            let (bmat, snf_prev) = match &prev {
                Some(mp) if mp.cols() > 0 => {
                    let cols: Vec<Vec<Scalar>> = (0..mp.cols())
                        .map(|j| solve_with(&snf_z, &mp.column(j), &ring).expect("image lies in the kernel"))
                        .collect();
                    (Matrix::from_columns(z, &cols), Some(smith_normal_form(mp, &ring)))
                }
                _ => (Matrix::zeros(z, 0), None),
            };
            let snf_b = smith_normal_form(&bmat, &ring);
            let diag = snf_b.diagonal();
            let gens_mat = zmat.mul(&snf_b.u_inv);
            let mut generators = Vec::new();
            let mut free_rank = 0;
            let mut torsion = Vec::new();
            for t in 0..z {
                let order = if t < snf_b.rank {
                    if ring.is_unit(&diag[t]) {
                        continue;
                    }
                    torsion.push(ring.canon(&diag[t]));
                    Some(ring.canon(&diag[t]))
                } else {
                    free_rank += 1;
                    None
                };
                let col = SparseVec::from_dense(&gens_mat.column(t)).remap(|i| Some(cells[k][i]));
                let rep = pull_back(&log, k, col);
                generators.push(ClassGenerator { order, representative: rep, slot: t });
            }
            // free generators first, then torsion by increasing order
            generators.sort_by_key(|g| (g.order.is_some(), g.slot));
            degrees.push(DegreeData {
                entry: ModuleEntry { degree: k as i64, free_rank, torsion },
                generators,
                cells: cells[k].clone(),
                snf_z,
                u_b: snf_b.u,
                snf_prev,
                prev_cells: if k > 0 { cells[k - 1].clone() } else { Vec::new() },
            });
            prev = Some(mk);
        }
        Cohomology { ring, original: cx.d.clone(), log, degrees }
    }

    /// Number of degrees with reported cohomology.
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn entry(&self, k: usize) -> &ModuleEntry {
        &self.degrees[k].entry
    }

    pub fn table(&self) -> Vec<ModuleEntry> {
        self.degrees.iter().map(|d| d.entry.clone()).collect()
    }

    pub fn generators(&self, k: usize) -> &[ClassGenerator] {
        &self.degrees[k].generators
    }

    pub fn is_cocycle(&self, k: usize, x: &SparseVec) -> bool {
        let mut out = SparseVec::new();
        if k < self.original.len() {
            for (i, c) in x.iter() {
                out.axpy(c, &self.original[k][*i]);
            }
        }
        out.is_zero()
    }

    /// Coordinates of the class of the cocycle `x` against [`Self::generators`].
    /// Torsion coordinates are reduced modulo the order.
    pub fn classify(&self, k: usize, x: &SparseVec) -> Option<Vec<Scalar>> {
        if !self.is_cocycle(k, x) {
            return None;
        }
        let dd = &self.degrees[k];
        let r = push_forward(&self.log, k, x.clone());
        let dense: Vec<Scalar> = dd.cells.iter().map(|&c| r.get(c)).collect();
        let c = solve_with(&dd.snf_z, &dense, &self.ring)?;
        let w = dd.u_b.mul_vec(&c);
        Some(
            dd.generators
                .iter()
                .map(|g| match &g.order {
                    None => w[g.slot].clone(),
                    Some(o) => self.ring.reduce_mod(&w[g.slot], o),
                })
                .collect(),
        )
    }

    pub fn is_coboundary(&self, k: usize, x: &SparseVec) -> bool {
        self.classify(k, x).is_some_and(|c| c.iter().all(Scalar::is_zero))
    }

    /// Some `b` in degree `k-1` with `d b = x`, when `x` is a coboundary.
    pub fn coboundary_preimage(&self, k: usize, x: &SparseVec) -> Option<SparseVec> {
        if !self.is_coboundary(k, x) {
            return None;
        }
        if x.is_zero() {
            return Some(SparseVec::new());
        }
        let dd = &self.degrees[k];
        let r = push_forward(&self.log, k, x.clone());
        let dense: Vec<Scalar> = dd.cells.iter().map(|&c| r.get(c)).collect();
        let mut b = match &dd.snf_prev {
            Some(snf) if dense.iter().any(|c| !c.is_zero()) => {
                let sol = solve_with(snf, &dense, &self.ring)?;
                let bp = SparseVec::from_dense(&sol).remap(|i| Some(dd.prev_cells[i]));
                pull_back(&self.log, k - 1, bp)
            }
            _ => {
                if dense.iter().any(|c| !c.is_zero()) {
                    return None;
                }
                SparseVec::new()
            }
        };
        b = b.add(&homotopy(&self.log, k, x.clone()));
        Some(b)
    }
}

/// Map a cochain of degree `k` to the residual complex.
fn push_forward(log: &[Elimination], k: usize, mut x: SparseVec) -> SparseVec {
    for e in log {
        if e.k == k {
            x.remove(e.sigma);
        } else if e.k + 1 == k {
            let t = x.get(e.tau);
            if !t.is_zero() {
                x.axpy(&-(&t / &e.c), &e.dsigma);
            }
        }
    }
    x
}

fn pull_back_step(e: &Elimination, b: &mut SparseVec) {
    let mut coef = Scalar::zero();
    for (x, a) in &e.tau_row {
        let bx = b.get(*x);
        if !bx.is_zero() {
            coef.add_mul(&bx, a);
        }
    }
    if !coef.is_zero() {
        b.axpy(&-(&coef / &e.c), &SparseVec::unit(e.sigma));
    }
}

/// Map a residual cochain of degree `k` back to the original complex.
fn pull_back(log: &[Elimination], k: usize, mut b: SparseVec) -> SparseVec {
    for e in log.iter().rev() {
        if e.k == k {
            pull_back_step(e, &mut b);
        }
    }
    b
}

/// Total homotopy from degree `k` to `k-1`.
fn homotopy(log: &[Elimination], k: usize, mut y: SparseVec) -> SparseVec {
    if k == 0 {
        return SparseVec::new();
    }
    let mut s = vec![Scalar::zero(); log.len()];
    for (i, e) in log.iter().enumerate() {
        if e.k + 1 == k {
            let t = y.get(e.tau);
            if !t.is_zero() {
                let si = &t / &e.c;
                y.axpy(&-&si, &e.dsigma);
                s[i] = si;
            }
        } else if e.k == k {
            y.remove(e.sigma);
        }
    }
    let mut acc = SparseVec::new();
    for (i, e) in log.iter().enumerate().rev() {
        if e.k + 1 == k {
            pull_back_step(e, &mut acc);
            if !s[i].is_zero() {
                acc.axpy(&s[i], &SparseVec::unit(e.sigma));
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(&xs.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>())
    }

    fn z2() -> CoefficientRing {
        CoefficientRing::localized([2]).unwrap()
    }

    #[test]
    fn multiplication_by_three() {
        // R --3--> R : H^0 = 0, H^1 = R/3 over Z_(2), both 0 over Q
        let cx = CochainComplex::new(&z2(), vec![1, 1, 0], vec![vec![sv(&[3])], vec![SparseVec::new()]]);
        let h = cx.cohomology();
        assert!(h.entry(0).is_zero());
        assert_eq!(h.entry(1).torsion, vec![Scalar::from_int(3)]);
        assert!(h.coboundary_preimage(1, &sv(&[1])).is_none());
        assert_eq!(h.coboundary_preimage(1, &sv(&[6])), Some(sv(&[2])));
        let q = CochainComplex::new(&CoefficientRing::rationals(), vec![1, 1, 0], vec![vec![sv(&[3])], vec![SparseVec::new()]]);
        assert!(q.cohomology().entry(1).is_zero());
    }

    #[test]
    fn preimages_through_cancelled_cells() {
        // R^2 -> R^2 -> R with a unit pair and a leftover free class
        let d0 = vec![sv(&[1, 1]), sv(&[2, 2])];
        let d1 = vec![sv(&[1]), sv(&[-1])];
        let cx = CochainComplex::new(&z2(), vec![2, 2, 1], vec![d0, d1]);
        assert!(cx.is_complex());
        let h = cx.cohomology();
        assert_eq!(h.entry(0).free_rank, 1);
        assert!(h.entry(1).is_zero());
        let x = sv(&[5, 5]);
        let b = h.coboundary_preimage(1, &x).unwrap();
        assert_eq!(cx.apply_d(0, &b), x);
        let g = &h.generators(0)[0];
        assert!(cx.apply_d(0, &g.representative).is_zero());
    }

    #[test]
    fn classify_torsion_class() {
        // R --(1 0;0 9)--> R^2 over Z_(2) after a change of basis
        let d0 = vec![sv(&[1, 2]), sv(&[0, 9])];
        let cx = CochainComplex::new(&z2(), vec![2, 2, 0], vec![d0, vec![SparseVec::new(); 2]]);
        let h = cx.cohomology();
        assert_eq!(h.entry(1).torsion, vec![Scalar::from_int(9)]);
        let c = h.classify(1, &sv(&[0, 3])).unwrap();
        assert!(!c[0].is_zero());
        assert!(h.is_coboundary(1, &sv(&[0, 18])));
        let b = h.coboundary_preimage(1, &sv(&[2, 13])).unwrap();
        assert_eq!(cx.apply_d(0, &b), sv(&[2, 13]));
    }
}
