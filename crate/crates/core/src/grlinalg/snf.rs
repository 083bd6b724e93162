use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::coeff::{CoefficientRing, Scalar};

/// `U * M * V = D` with `U`, `V` invertible over the ring and `D` diagonal
/// with canonical entries `d_1 | d_2 | ... | d_rank`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub rank: usize,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// One degree of a finitely generated graded module: `R^free_rank` plus the
/// cyclic torsion summands `R/t` listed by invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleEntry {
    pub degree: i64,
    pub free_rank: usize,
    pub torsion: Vec<Scalar>,
}

impl ModuleEntry {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Smallest canonical nonzero entry in the lower-right block, ties broken by
/// lowest row then lowest column.
fn pick_pivot(a: &Matrix, t: usize, ring: &CoefficientRing) -> Option<(usize, usize)> {
    let mut best: Option<(Scalar, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let c = ring.canon(x);
            if best.as_ref().map_or(true, |(b, _, _)| c < *b) {
                let unit = c.is_one();
                best = Some((c, i, j));
                if unit {
                    return best.map(|(_, i, j)| (i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

struct Snf<'r> {
    ring: &'r CoefficientRing,
    a: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
}

impl Snf<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row[i] -= q * row[t]
    fn row_sub(&mut self, i: usize, t: usize, q: &Scalar) {
        let neg = -q;
        self.a.add_row_multiple(i, t, &neg);
        self.u.add_row_multiple(i, t, &neg);
        self.u_inv.add_col_multiple(t, i, q);
    }

    fn col_sub(&mut self, j: usize, t: usize, q: &Scalar) {
        let neg = -q;
        self.a.add_col_multiple(j, t, &neg);
        self.v.add_col_multiple(j, t, &neg);
    }

    /// Replace pivot `a[t][t]` by gcd(p, x) using rows t and i.
    fn row_bezout(&mut self, t: usize, i: usize, col: usize) {
        let p = self.a[(t, col)].clone();
        let x = self.a[(i, col)].clone();
        let (s, tt, g) = self.ring.bezout(&p, &x);
        let pg = &p / &g;
        let xg = &x / &g;
        let mxg = -&xg;
        self.a.combine_rows(t, i, &s, &tt, &mxg, &pg);
        self.u.combine_rows(t, i, &s, &tt, &mxg, &pg);
        // inverse block [[pg, -tt], [xg, s]] applied on the right of u_inv
        let mtt = -&tt;
        self.u_inv.combine_cols(t, i, &pg, &xg, &mtt, &s);
    }

    fn col_bezout(&mut self, t: usize, j: usize, row: usize) {
        let p = self.a[(row, t)].clone();
        let x = self.a[(row, j)].clone();
        let (s, tt, g) = self.ring.bezout(&p, &x);
        let pg = &p / &g;
        let xg = &x / &g;
        let mxg = -&xg;
        self.a.combine_cols(t, j, &s, &tt, &mxg, &pg);
        self.v.combine_cols(t, j, &s, &tt, &mxg, &pg);
    }

    fn run(mut self) -> SmithDecomposition {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        let mut rank = 0;
        for t in 0..rows.min(cols) {
            let Some((pi, pj)) = pick_pivot(&self.a, t, self.ring) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..rows {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    match self.ring.exact_div(&self.a[(i, t)], &self.a[(t, t)]) {
                        Some(q) => self.row_sub(i, t, &q),
                        None => {
                            self.row_bezout(t, i, t);
                            dirty = true;
                        }
                    }
                }
                for j in t + 1..cols {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    match self.ring.exact_div(&self.a[(t, j)], &self.a[(t, t)]) {
                        Some(q) => self.col_sub(j, t, &q),
                        None => {
                            self.col_bezout(t, j, t);
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    continue;
                }
                let clean_col = (t + 1..rows).all(|i| self.a[(i, t)].is_zero());
                let clean_row = (t + 1..cols).all(|j| self.a[(t, j)].is_zero());
                if !(clean_col && clean_row) {
                    continue;
                }
                let p = self.a[(t, t)].clone();
                let bad = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !self.ring.divides(&p, &self.a[(i, j)])));
                match bad {
                    Some(i) => {
                        // row[t] += row[i]; expressed as row_sub with -1
                        self.row_sub(t, i, &Scalar::from_int(-1));
                    }
                    None => break,
                }
            }
            let unit = self.ring.unit_part(&self.a[(t, t)]);
            if !unit.is_one() {
                let inv = unit.recip();
                self.a.scale_row(t, &inv);
                self.u.scale_row(t, &inv);
                self.u_inv.scale_col(t, &unit);
            }
            rank += 1;
        }
        SmithDecomposition { u: self.u, u_inv: self.u_inv, d: self.a, v: self.v, rank }
    }
}

pub fn smith_normal_form(m: &Matrix, ring: &CoefficientRing) -> SmithDecomposition {
    let snf = Snf {
        ring,
        a: m.clone(),
        u: Matrix::identity(m.rows()),
        u_inv: Matrix::identity(m.rows()),
        v: Matrix::identity(m.cols()),
    };
    snf.run()
}

/// Some `x` with `M x = b` over the ring, if one exists.
pub fn solve_linear(m: &Matrix, b: &[Scalar], ring: &CoefficientRing) -> Option<Vec<Scalar>> {
    assert_eq!(m.rows(), b.len(), "dimension mismatch");
    let snf = smith_normal_form(m, ring);
    solve_with(&snf, b, ring)
}

/// Solve against a precomputed decomposition of `M`.
pub fn solve_with(snf: &SmithDecomposition, b: &[Scalar], ring: &CoefficientRing) -> Option<Vec<Scalar>> {
    let c = snf.u.mul_vec(b);
    let mut y = vec![Scalar::zero(); snf.v.rows()];
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank {
            y[i] = ring.exact_div(ci, &snf.d[(i, i)])?;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// A free basis of `ker M`, as columns.
pub fn kernel_basis(m: &Matrix, ring: &CoefficientRing) -> Vec<Vec<Scalar>> {
    let snf = smith_normal_form(m, ring);
    (snf.rank..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// The cokernel `R^rows / im M` as free rank plus invariant factors.
pub fn cokernel_presentation(m: &Matrix, ring: &CoefficientRing) -> ModuleEntry {
    let snf = smith_normal_form(m, ring);
    let torsion = snf.diagonal().into_iter().filter(|d| !ring.is_unit(d)).collect();
    ModuleEntry { degree: 0, free_rank: m.rows() - snf.rank, torsion }
}

/// A basis of the column span of `M` (a free submodule of `R^rows`).
pub fn image_basis(m: &Matrix, ring: &CoefficientRing) -> Vec<Vec<Scalar>> {
    let snf = smith_normal_form(m, ring);
    (0..snf.rank)
        .map(|i| {
            let d = snf.d[(i, i)].clone();
            snf.u_inv.column(i).iter().map(|x| x * &d).collect()
        })
        .collect()
}

/// Invariant factors of the direct sum of cyclic modules `R/c_i`.
pub fn invariant_factors(cyclic_orders: &[Scalar], ring: &CoefficientRing) -> Vec<Scalar> {
    let n = cyclic_orders.len();
    let mut m = Matrix::zeros(n, n);
    for (i, c) in cyclic_orders.iter().enumerate() {
        m[(i, i)] = c.clone();
    }
    let pres = cokernel_presentation(&m, ring);
    let mut t = pres.torsion;
    t.sort();
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> CoefficientRing {
        CoefficientRing::localized([2]).unwrap()
    }

    fn check(m: &Matrix, ring: &CoefficientRing) -> SmithDecomposition {
        let snf = smith_normal_form(m, ring);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d);
        assert_eq!(snf.u.mul(&snf.u_inv), Matrix::identity(m.rows()));
        snf
    }

    #[test]
    fn identity_stays_identity() {
        let snf = check(&Matrix::identity(2), &z2());
        assert_eq!(snf.diagonal(), vec![Scalar::one(), Scalar::one()]);
    }

    #[test]
    fn unit_two_is_absorbed() {
        let snf = check(&Matrix::from_ints(&[&[3, 3], &[3, 9]]), &z2());
        assert_eq!(snf.diagonal(), vec![Scalar::from_int(3), Scalar::from_int(3)]);
    }

    #[test]
    fn divisibility_fix() {
        let snf = check(&Matrix::from_ints(&[&[0, 3], &[9, 0]]), &z2());
        assert_eq!(snf.diagonal(), vec![Scalar::from_int(3), Scalar::from_int(9)]);
    }

    #[test]
    fn coprime_diagonal_becomes_chain() {
        let ring = CoefficientRing::localized([2]).unwrap();
        let snf = check(&Matrix::from_ints(&[&[3, 0], &[0, 5]]), &ring);
        assert_eq!(snf.diagonal(), vec![Scalar::one(), Scalar::from_int(15)]);
    }

    #[test]
    fn solve_examples() {
        let m = Matrix::from_ints(&[&[3]]);
        assert_eq!(solve_linear(&m, &[Scalar::from_int(6)], &z2()), Some(vec![Scalar::from_int(2)]));
        assert_eq!(solve_linear(&m, &[Scalar::one()], &z2()), None);
        assert_eq!(
            solve_linear(&m, &[Scalar::one()], &CoefficientRing::rationals()),
            Some(vec![Scalar::new(1, 3)])
        );
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&Matrix::from_ints(&[&[1, 1]]), &z2());
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] + &k[0][1], Scalar::zero());
        assert!(!k[0][0].is_zero());
        assert_eq!(kernel_basis(&Matrix::zeros(2, 2), &z2()).len(), 2);
        assert!(kernel_basis(&Matrix::from_ints(&[&[2, 4], &[6, 8]]), &z2()).is_empty());
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_presentation(&Matrix::from_ints(&[&[1, 0], &[0, 3]]), &z2());
        assert_eq!((c.free_rank, c.torsion), (0, vec![Scalar::from_int(3)]));
        let c = cokernel_presentation(&Matrix::zeros(3, 0), &z2());
        assert_eq!((c.free_rank, c.torsion.len()), (3, 0));
        let c = cokernel_presentation(&Matrix::from_ints(&[&[3]]), &CoefficientRing::rationals());
        assert_eq!((c.free_rank, c.torsion.len()), (0, 0));
    }

    #[test]
    fn invariant_factor_merge() {
        let f = invariant_factors(&[Scalar::from_int(3), Scalar::from_int(9), Scalar::from_int(5)], &z2());
        assert_eq!(f, vec![Scalar::from_int(3), Scalar::from_int(45)]);
    }
}
