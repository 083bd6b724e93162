//! Maps between finitely presented modules `⊕ R/(o_i)` (with `o_i = 0` for
//! free summands), given by a matrix on the chosen generators.

use crate::coeff::{CoefficientRing, Scalar};

use super::matrix::Matrix;
use super::snf::{image_basis, kernel_basis, smith_normal_form, solve_linear};

/// `None` marks a free generator, `Some(o)` a generator of order `o`.
pub type Order = Option<Scalar>;

#[derive(Clone, Debug)]
pub struct PresentedMap {
    pub ring: CoefficientRing,
    pub source: Vec<Order>,
    pub target: Vec<Order>,
    /// `target.len() x source.len()`
    pub matrix: Matrix,
}

/// A generator of a kernel or cokernel, in coordinates of the source
/// (kernel) or target (cokernel) generators, with its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleGenerator {
    pub coords: Vec<Scalar>,
    pub order: Order,
}

fn relation_columns(orders: &[Order]) -> Vec<Vec<Scalar>> {
    orders
        .iter()
        .enumerate()
        .filter_map(|(i, o)| {
            o.as_ref().map(|o| {
                let mut c = vec![Scalar::zero(); orders.len()];
                c[i] = o.clone();
                c
            })
        })
        .collect()
}

impl PresentedMap {
    pub fn new(ring: &CoefficientRing, source: Vec<Order>, target: Vec<Order>, matrix: Matrix) -> Self {
        assert_eq!(matrix.rows(), target.len());
        assert_eq!(matrix.cols(), source.len());
        PresentedMap { ring: ring.clone(), source, target, matrix }
    }

    /// Minimal generators of the kernel.
    pub fn kernel_generators(&self) -> Vec<ModuleGenerator> {
        let (a, b) = (self.source.len(), self.target.len());
        if a == 0 {
            return Vec::new();
        }
        let rel_t = relation_columns(&self.target);
        let mut cols: Vec<Vec<Scalar>> = (0..a).map(|j| self.matrix.column(j)).collect();
        cols.extend(rel_t.iter().map(|c| c.iter().map(|x| -x).collect::<Vec<_>>()));
        let m = Matrix::from_columns(b, &cols);
        let ker = kernel_basis(&m, &self.ring);
        let xparts: Vec<Vec<Scalar>> = ker.iter().map(|v| v[..a].to_vec()).collect();
        // the preimage lattice K' contains the source relations D R^a
        let mut gens = xparts;
        gens.extend(relation_columns(&self.source));
        let kbasis = image_basis(&Matrix::from_columns(a, &gens), &self.ring);
        if kbasis.is_empty() {
            return Vec::new();
        }
        let bmat = Matrix::from_columns(a, &kbasis);
        let rel_s = relation_columns(&self.source);
        let q = kbasis.len();
        let qcols: Vec<Vec<Scalar>> = rel_s
            .iter()
            .map(|r| solve_linear(&bmat, r, &self.ring).expect("relations lie in the preimage lattice"))
            .collect();
        let snf = smith_normal_form(&Matrix::from_columns(q, &qcols), &self.ring);
        let diag = snf.diagonal();
        let g = bmat.mul(&snf.u_inv);
        let mut out = Vec::new();
        for j in 0..q {
            let order = if j < snf.rank {
                if self.ring.is_unit(&diag[j]) {
                    continue;
                }
                Some(self.ring.canon(&diag[j]))
            } else {
                None
            };
            out.push(ModuleGenerator { coords: g.column(j), order });
        }
        out
    }

    /// Minimal generators of the cokernel.
    pub fn cokernel_generators(&self) -> Vec<ModuleGenerator> {
        let b = self.target.len();
        if b == 0 {
            return Vec::new();
        }
        let mut cols: Vec<Vec<Scalar>> = (0..self.source.len()).map(|j| self.matrix.column(j)).collect();
        cols.extend(relation_columns(&self.target));
        let snf = smith_normal_form(&Matrix::from_columns(b, &cols), &self.ring);
        let diag = snf.diagonal();
        let mut out = Vec::new();
        for i in 0..b {
            let order = if i < snf.rank {
                if self.ring.is_unit(&diag[i]) {
                    continue;
                }
                Some(self.ring.canon(&diag[i]))
            } else {
                None
            };
            out.push(ModuleGenerator { coords: snf.u_inv.column(i), order });
        }
        out
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_generators().is_empty()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel_generators().is_empty()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PresentedMap) -> PresentedMap {
        PresentedMap::new(&self.ring, self.source.clone(), other.target.clone(), other.matrix.mul(&self.matrix))
    }

    /// Equality as module maps: columns agree modulo the target relations.
    pub fn same_map(&self, other: &PresentedMap) -> bool {
        if self.source.len() != other.source.len() || self.target != other.target {
            return false;
        }
        (0..self.source.len()).all(|j| {
            self.target.iter().enumerate().all(|(i, o)| {
                let diff = &self.matrix[(i, j)] - &other.matrix[(i, j)];
                match o {
                    None => diff.is_zero(),
                    Some(o) => self.ring.divides(o, &diff),
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> CoefficientRing {
        CoefficientRing::localized([2]).unwrap()
    }

    #[test]
    fn fold_map_is_surjective_not_injective() {
        let f = PresentedMap::new(&z2(), vec![None, None], vec![None], Matrix::from_ints(&[&[1, 1]]));
        assert!(f.is_surjective());
        let k = f.kernel_generators();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].order, None);
    }

    #[test]
    fn multiplication_by_three_on_torsion() {
        let three = Some(Scalar::from_int(3));
        // R -> R/3, 1 -> 1: surjective, kernel generated by 3
        let f = PresentedMap::new(&z2(), vec![None], vec![three.clone()], Matrix::from_ints(&[&[1]]));
        assert!(f.is_surjective());
        assert!(!f.is_injective());
        // R/3 -> R/9, 1 -> 3: injective, cokernel R/3
        let g = PresentedMap::new(&z2(), vec![three], vec![Some(Scalar::from_int(9))], Matrix::from_ints(&[&[3]]));
        assert!(g.is_injective());
        let c = g.cokernel_generators();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].order, Some(Scalar::from_int(3)));
    }

    #[test]
    fn empty_modules() {
        let f = PresentedMap::new(&z2(), vec![], vec![None], Matrix::zeros(1, 0));
        assert!(f.is_injective());
        assert!(!f.is_surjective());
    }
}
