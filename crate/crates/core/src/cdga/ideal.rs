use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::coeff::Scalar;
use crate::error::{MildError, Result};
use crate::grlinalg::{CochainComplex, Lattice, SparseVec};

use super::{Element, Flavor, FreeGradedAlgebra};

/// One degree of an ideal: a triangular basis inside the monomial basis.
#[derive(Debug)]
pub struct IdealComponent {
    pub degree: usize,
    lattice: Lattice,
    basis: Vec<SparseVec>,
}

impl IdealComponent {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.lattice.contains(v)
    }

    /// Coordinates with respect to [`Self::basis`].
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        self.lattice.coordinates(v).map(|c| SparseVec::from_dense(&c))
    }

    /// `sum c_i basis_i`
    pub fn combine(&self, c: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in c.iter() {
            out.axpy(x, &self.basis[*i]);
        }
        out
    }
}

/// Ideal generated by finitely many homogeneous elements. Two-sided in the
/// tensor flavor.
#[derive(Debug)]
pub struct HomogeneousIdeal {
    ambient: Arc<FreeGradedAlgebra>,
    generators: Vec<Element>,
    degrees: Vec<usize>,
    cache: Mutex<HashMap<usize, Arc<IdealComponent>>>,
}

impl HomogeneousIdeal {
    pub fn new(ambient: &Arc<FreeGradedAlgebra>, generators: Vec<Element>) -> Result<Arc<Self>> {
        let mut gens = Vec::new();
        let mut degrees = Vec::new();
        let mut seen = BTreeSet::new();
        for g in generators {
            if g.is_zero() {
                continue;
            }
            let Some(d) = ambient.degree_of(&g) else {
                return Err(MildError::Degree(format!("ideal generator {} is not homogeneous", ambient.format(&g))));
            };
            if d == 0 {
                return Err(MildError::Degree("ideal generators must have positive degree".into()));
            }
            let key = ambient.format(&g);
            if seen.insert(key) {
                gens.push(g);
                degrees.push(d);
            }
        }
        Ok(Arc::new(HomogeneousIdeal {
            ambient: ambient.clone(),
            generators: gens,
            degrees,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn zero(ambient: &Arc<FreeGradedAlgebra>) -> Arc<Self> {
        HomogeneousIdeal::new(ambient, Vec::new()).expect("zero ideal")
    }

    pub fn ambient(&self) -> &Arc<FreeGradedAlgebra> {
        &self.ambient
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn generator_degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.degrees.iter().copied().min()
    }

    pub fn component(&self, degree: usize) -> Arc<IdealComponent> {
        if let Some(c) = self.cache.lock().unwrap().get(&degree) {
            return c.clone();
        }
        let c = Arc::new(self.compute_component(degree));
        self.cache.lock().unwrap().entry(degree).or_insert(c).clone()
    }

    fn compute_component(&self, degree: usize) -> IdealComponent {
        let a = &self.ambient;
        let mut lattice = Lattice::new(a.ring());
        for (g, &e) in self.generators.iter().zip(&self.degrees) {
            if e > degree {
                continue;
            }
            let rem = degree - e;
            match a.flavor() {
                Flavor::Commutative => {
                    for m in &a.basis(rem).monomials {
                        let p = a.multiply(&Element::term(m.clone(), Scalar::one()), g);
                        lattice.insert(a.coordinates(degree, &p).expect("homogeneous product"));
                    }
                }
                Flavor::Tensor => {
                    for left in 0..=rem {
                        let lb = a.basis(left);
                        let rb = a.basis(rem - left);
                        for ml in &lb.monomials {
                            let lg = a.multiply(&Element::term(ml.clone(), Scalar::one()), g);
                            for mr in &rb.monomials {
                                let p = a.multiply(&lg, &Element::term(mr.clone(), Scalar::one()));
                                lattice.insert(a.coordinates(degree, &p).expect("homogeneous product"));
                            }
                        }
                    }
                }
            }
        }
        let basis = lattice.basis();
        IdealComponent { degree, lattice, basis }
    }

    pub fn contains(&self, e: &Element) -> bool {
        match self.ambient.degree_of(e) {
            None => e.is_zero(),
            Some(d) => self.ambient.coordinates(d, e).map(|v| self.component(d).contains(&v)).unwrap_or(false),
        }
    }

    /// `d(I) ⊆ I` checked on generators up to `max_degree`.
    pub fn check_d_stable(&self, max_degree: usize) -> Result<()> {
        for (g, &e) in self.generators.iter().zip(&self.degrees) {
            if e + 1 > max_degree {
                continue;
            }
            let dg = self.ambient.apply_differential(g);
            if !self.contains(&dg) {
                return Err(MildError::NotDStable { generator: self.ambient.format(g), degree: e + 1 });
            }
        }
        Ok(())
    }

    /// Ideal generated by `k`-fold products of the generators, keeping
    /// products of degree at most `max_degree`.
    pub fn power(&self, k: usize, max_degree: usize) -> Arc<Self> {
        let a = &self.ambient;
        let n = self.generators.len();
        let mut out = Vec::new();
        let mut stack: Vec<(Vec<usize>, Element, usize)> = vec![(Vec::new(), Element::one(), 0)];
        while let Some((idx, prod, deg)) = stack.pop() {
            if idx.len() == k {
                if !prod.is_zero() {
                    out.push((idx, prod));
                }
                continue;
            }
            let start = match a.flavor() {
                Flavor::Commutative => idx.last().copied().unwrap_or(0),
                Flavor::Tensor => 0,
            };
            for j in start..n {
                let d = deg + self.degrees[j];
                if d > max_degree {
                    continue;
                }
                let p = a.multiply(&prod, &self.generators[j]);
                let mut idx2 = idx.clone();
                idx2.push(j);
                stack.push((idx2, p, d));
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        let gens = out.into_iter().map(|(_, p)| p).collect();
        HomogeneousIdeal::new(a, gens).expect("products of homogeneous elements are homogeneous")
    }

    pub fn sum(&self, other: &HomogeneousIdeal) -> Arc<Self> {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        HomogeneousIdeal::new(&self.ambient, g).expect("homogeneous")
    }

    /// Cochain complex of the ideal itself, degrees `0..=hi`.
    pub fn cochain_complex(&self, hi: usize) -> Result<CochainComplex> {
        let a = &self.ambient;
        let comps: Vec<Arc<IdealComponent>> = (0..=hi).map(|k| self.component(k)).collect();
        let dims = comps.iter().map(|c| c.rank()).collect();
        let mut d = Vec::new();
        for k in 0..hi {
            let mut cols = Vec::new();
            for b in comps[k].basis() {
                let db = a.apply_differential(&a.element(k, b));
                let v = a.coordinates(k + 1, &db)?;
                let c = comps[k + 1]
                    .coordinates(&v)
                    .ok_or_else(|| MildError::NotDStable { generator: a.format(&a.element(k, b)), degree: k + 1 })?;
                cols.push(c);
            }
            d.push(cols);
        }
        Ok(CochainComplex::new(a.ring(), dims, d))
    }
}

/// Target of a morphism: a free algebra, possibly modulo a d-stable ideal.
/// Quotient elements are represented by lifts to the ambient algebra.
#[derive(Clone, Debug)]
pub struct Codomain {
    pub ambient: Arc<FreeGradedAlgebra>,
    pub ideal: Option<Arc<HomogeneousIdeal>>,
}

impl Codomain {
    pub fn free(a: Arc<FreeGradedAlgebra>) -> Self {
        Codomain { ambient: a, ideal: None }
    }

    /// `A/I` after checking d-stability up to the cap.
    pub fn quotient(a: Arc<FreeGradedAlgebra>, ideal: Arc<HomogeneousIdeal>) -> Result<Self> {
        ideal.check_d_stable(a.cap())?;
        if ideal.is_zero_ideal() {
            return Ok(Codomain::free(a));
        }
        Ok(Codomain { ambient: a, ideal: Some(ideal) })
    }

    pub fn is_free(&self) -> bool {
        self.ideal.is_none()
    }

    pub fn ring(&self) -> &crate::coeff::CoefficientRing {
        self.ambient.ring()
    }

    pub fn cap(&self) -> usize {
        self.ambient.cap()
    }

    pub fn name(&self) -> String {
        match &self.ideal {
            None => self.ambient.name().to_string(),
            Some(i) => format!("{}/({} generators)", self.ambient.name(), i.generators().len()),
        }
    }

    pub fn is_zero(&self, e: &Element) -> bool {
        match &self.ideal {
            None => e.is_zero(),
            Some(i) => i.contains(e),
        }
    }

    fn ideal_rank(&self, k: usize) -> usize {
        self.ideal.as_ref().map_or(0, |i| i.component(k).rank())
    }

    /// Dimension of the degree `k` cochains (`A^k ⊕ I^{k+1}` for a quotient).
    pub fn cochain_dim(&self, k: usize) -> usize {
        self.ambient.dim(k) + self.ideal_rank(k + 1)
    }

    /// Complex computing the cohomology, in degrees `lo..=hi`. For a
    /// quotient this is the cone of `I -> A`, with `d(a, x) = (da + x, -dx)`.
    pub fn cochain_complex(&self, lo: usize, hi: usize) -> Result<CochainComplex> {
        let Some(ideal) = &self.ideal else {
            return Ok(self.ambient.cochain_complex(lo, hi));
        };
        let a = &self.ambient;
        let dims: Vec<usize> = (0..=hi).map(|k| if k < lo { 0 } else { self.cochain_dim(k) }).collect();
        let mut d = Vec::new();
        for k in 0..hi {
            if k < lo {
                d.push(Vec::new());
                continue;
            }
            let na = a.dim(k + 1);
            let mut cols = a.differential_columns(k);
            let ik1 = ideal.component(k + 1);
            let ik2 = ideal.component(k + 2);
            for b in ik1.basis() {
                let db = a.apply_differential(&a.element(k + 1, b));
                let v = a.coordinates(k + 2, &db)?;
                let c = ik2.coordinates(&v).ok_or_else(|| MildError::NotDStable {
                    generator: a.format(&a.element(k + 1, b)),
                    degree: k + 2,
                })?;
                cols.push(b.concat(na, &c.scaled(&Scalar::from_int(-1))));
            }
            d.push(cols);
        }
        Ok(CochainComplex::new(a.ring(), dims, d))
    }

    /// Cochain of degree `k` for the pair `(a, x)` with `x ∈ I^{k+1}`.
    pub fn cochain(&self, k: usize, a: &Element, x: &Element) -> Result<SparseVec> {
        let va = self.ambient.coordinates(k, a)?;
        let Some(ideal) = &self.ideal else {
            if !x.is_zero() {
                return Err(MildError::NotChainMap("correction term in a free target".into()));
            }
            return Ok(va);
        };
        let vx = self.ambient.coordinates(k + 1, x)?;
        let cx = ideal
            .component(k + 1)
            .coordinates(&vx)
            .ok_or_else(|| MildError::NotChainMap(format!("{} is not in the ideal", self.ambient.format(x))))?;
        Ok(va.concat(self.ambient.dim(k), &cx))
    }

    /// Cochain representing the class of `a`, which must satisfy `da ∈ I`.
    pub fn cocycle(&self, k: usize, a: &Element) -> Result<SparseVec> {
        let da = self.ambient.apply_differential(a);
        self.cochain(k, a, &da.neg())
    }

    /// The ambient part of a cochain of degree `k`.
    pub fn ambient_part(&self, k: usize, v: &SparseVec) -> Element {
        self.ambient.element(k, &v.slice(0..self.ambient.dim(k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::{Generator, Monomial};
    use crate::coeff::CoefficientRing;

    fn s2() -> Arc<FreeGradedAlgebra> {
        FreeGradedAlgebra::new(
            "S2",
            Flavor::Commutative,
            &CoefficientRing::rationals(),
            vec![Generator::new("v", 2), Generator::new("w", 3)],
            vec![Element::zero(), Element::term(Monomial(vec![0, 0]), Scalar::one())],
            8,
        )
        .unwrap()
    }

    #[test]
    fn w_alone_is_not_d_stable() {
        let a = s2();
        let i = HomogeneousIdeal::new(&a, vec![Element::generator(1)]).unwrap();
        assert!(matches!(Codomain::quotient(a, i), Err(MildError::NotDStable { .. })));
    }

    #[test]
    fn v2_w_is_d_stable_with_zero_induced_differential() {
        let a = s2();
        let v2 = Element::term(Monomial(vec![0, 0]), Scalar::one());
        let i = HomogeneousIdeal::new(&a, vec![v2, Element::generator(1)]).unwrap();
        let q = Codomain::quotient(a.clone(), i.clone()).unwrap();
        assert!(!q.is_free());
        assert_eq!(i.component(5).rank(), 1);
        assert_eq!(i.component(4).rank(), 1);
    }

    #[test]
    fn difference_ideal_in_square() {
        let v = FreeGradedAlgebra::new(
            "P",
            Flavor::Commutative,
            &CoefficientRing::rationals(),
            vec![Generator::new("v", 2)],
            vec![Element::zero()],
            8,
        )
        .unwrap();
        let v2 = v.tensor_power(2, 8);
        let z = Element::generator(0).sub(&Element::generator(1));
        let i = HomogeneousIdeal::new(&v2, vec![z.clone()]).unwrap();
        assert_eq!(i.component(4).rank(), 2);
        let sq = i.power(2, 8);
        assert_eq!(sq.generators().len(), 1);
        assert_eq!(sq.generators()[0], v2.multiply(&z, &z));
    }
}
