use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{MildError, Result};
use crate::grlinalg::SparseVec;

use super::{Codomain, Element, FreeGradedAlgebra, Monomial};

/// Multiplicative map from a free algebra, given by generator images
/// (lifts to the ambient algebra when the target is a quotient).
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: Arc<FreeGradedAlgebra>,
    target: Codomain,
    images: Vec<Element>,
    cache: Arc<Mutex<HashMap<Monomial, Element>>>,
}

impl AlgebraMorphism {
    /// Checks degrees and coefficients. The chain condition is checked
    /// separately by [`Self::check_chain_map`].
    pub fn new(source: Arc<FreeGradedAlgebra>, target: Codomain, images: Vec<Element>) -> Result<Self> {
        if images.len() != source.num_gens() {
            return Err(MildError::Invalid(format!(
                "{} generator images given for {} generators",
                images.len(),
                source.num_gens()
            )));
        }
        if source.flavor() != target.ambient.flavor() {
            return Err(MildError::Invalid("source and target flavors differ".into()));
        }
        let ring = target.ring().clone();
        let mut norm = Vec::with_capacity(images.len());
        for (g, img) in source.gens().iter().zip(images) {
            let mut e = Element::zero();
            for (m, c) in img.terms() {
                if !ring.contains(c) {
                    return Err(MildError::Ring(format!("coefficient {c} is not in {ring}")));
                }
                let deg = target.ambient.monomial_degree(m);
                if deg != g.degree {
                    return Err(MildError::Degree(format!(
                        "image of {} must have degree {}, found a term of degree {deg}",
                        g.name, g.degree
                    )));
                }
                if let Some((n, neg)) = target.ambient.normalize_monomial(&m.0) {
                    e.add_term(n, if neg { -c } else { c.clone() });
                }
            }
            norm.push(e);
        }
        Ok(AlgebraMorphism { source, target, images: norm, cache: Arc::new(Mutex::new(HashMap::new())) })
    }

    /// Same images, checked to be a chain map up to the source cap.
    pub fn new_chain_map(source: Arc<FreeGradedAlgebra>, target: Codomain, images: Vec<Element>) -> Result<Self> {
        let f = AlgebraMorphism::new(source, target, images)?;
        let top = f.source.cap().min(f.target.cap());
        f.check_chain_map(top)?;
        Ok(f)
    }

    pub fn identity(a: &Arc<FreeGradedAlgebra>) -> Self {
        let images = (0..a.num_gens()).map(Element::generator).collect();
        AlgebraMorphism::new(a.clone(), Codomain::free(a.clone()), images).expect("identity")
    }

    pub fn source(&self) -> &Arc<FreeGradedAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Codomain {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn image_of_generator(&self, i: usize) -> &Element {
        &self.images[i]
    }

    /// Same generator images into another codomain (e.g. a quotient).
    pub fn with_target(&self, target: Codomain) -> Result<Self> {
        AlgebraMorphism::new(self.source.clone(), target, self.images.clone())
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Element {
        if m.is_empty() {
            return Element::one();
        }
        if m.len() == 1 {
            return self.images[m.0[0] as usize].clone();
        }
        if let Some(e) = self.cache.lock().unwrap().get(m) {
            return e.clone();
        }
        let head = &self.images[m.0[0] as usize];
        let rest = self.apply_monomial(&Monomial(m.0[1..].to_vec()));
        let out = self.target.ambient.multiply(head, &rest);
        self.cache.lock().unwrap().insert(m.clone(), out.clone());
        out
    }

    pub fn apply(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            out.add_scaled(c, &self.apply_monomial(m));
        }
        out
    }

    /// `f(dx) - d f(x)` for a source element.
    pub fn chain_defect(&self, e: &Element) -> Element {
        let fd = self.apply(&self.source.apply_differential(e));
        let df = self.target.ambient.apply_differential(&self.apply(e));
        fd.sub(&df)
    }

    /// `f∘d = d∘f` (modulo the target ideal) on generators up to `max_degree`.
    pub fn check_chain_map(&self, max_degree: usize) -> Result<()> {
        for (i, g) in self.source.gens().iter().enumerate() {
            if g.degree + 1 > max_degree {
                continue;
            }
            let defect = self.chain_defect(&Element::generator(i));
            if !self.target.is_zero(&defect) {
                return Err(MildError::NotChainMap(format!(
                    "f(d {}) - d f({}) = {}",
                    g.name,
                    g.name,
                    self.target.ambient.format(&defect)
                )));
            }
        }
        Ok(())
    }

    /// `self` followed by `g`; requires `g.source` to be the ambient of
    /// `self`'s target and that target to be free.
    pub fn then(&self, g: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if *self.target.ambient != **g.source() || !self.target.is_free() {
            return Err(MildError::MixedAmbients);
        }
        let images = self.images.iter().map(|e| g.apply(e)).collect();
        AlgebraMorphism::new(self.source.clone(), g.target.clone(), images)
    }

    /// Image of a source cochain of degree `k` in the target's cochain complex.
    pub fn cochain_image(&self, k: usize, v: &SparseVec) -> Result<SparseVec> {
        let e = self.source.element(k, v);
        let fe = self.apply(&e);
        let x = if self.target.is_free() { Element::zero() } else { self.chain_defect(&e) };
        self.target.cochain(k, &fe, &x)
    }

    /// Images of the degree-`k` monomial basis.
    pub fn cochain_columns(&self, k: usize) -> Result<Vec<SparseVec>> {
        (0..self.source.dim(k)).map(|i| self.cochain_image(k, &SparseVec::unit(i))).collect()
    }

    /// Generator images agree modulo the target ideal.
    pub fn agrees_with(&self, other: &AlgebraMorphism) -> bool {
        self.images.len() == other.images.len()
            && self.images.iter().zip(&other.images).all(|(a, b)| self.target.is_zero(&a.sub(b)))
    }
}
