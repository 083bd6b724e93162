//! Kernel ideals of surjective morphisms and the nilpotency searches.

use std::sync::Arc;

use crate::cdga::{AlgebraMorphism, Element, Flavor, FreeGradedAlgebra, HomogeneousIdeal};
use crate::cohomology::{induced_map, is_acyclic_ideal, AcyclicReading, CohomologyTable};
use crate::error::{MildError, Result};
use crate::grlinalg::{Lattice, SparseVec};

use super::Count;

/// Degree-`k` cochain kernel of `φ` (modulo the target ideal), as a
/// generating set in monomial coordinates.
pub fn cochain_kernel(phi: &AlgebraMorphism, k: usize) -> Result<Vec<SparseVec>> {
    let a = phi.source();
    let t = phi.target();
    let n = a.dim(k);
    let mut lat = Lattice::new(a.ring());
    for m in &a.basis(k).monomials {
        lat.insert(t.ambient.coordinates(k, &phi.apply_monomial(m))?);
    }
    if let Some(i) = &t.ideal {
        for v in i.component(k).basis() {
            lat.insert(v.clone());
        }
    }
    Ok(lat.relations().iter().map(|r| r.slice(0..n)).filter(|v| !v.is_zero()).collect())
}

/// `ker φ` as an ideal, valid in degrees `0..=top`.
#[derive(Clone, Debug)]
pub struct KernelIdeal {
    pub ideal: Arc<HomogeneousIdeal>,
    pub top: usize,
    /// seed generators kept
    pub seeded: usize,
    /// generators added because the seeds did not span a degree
    pub augmented: usize,
}

/// Start from `seeds` (checked to lie in the kernel) and add degreewise
/// kernel vectors until every degree up to `top` is spanned.
pub fn kernel_ideal(phi: &AlgebraMorphism, top: usize, seeds: Vec<Element>) -> Result<KernelIdeal> {
    let a = phi.source();
    for s in &seeds {
        if !phi.target().is_zero(&phi.apply(s)) {
            return Err(MildError::Invalid(format!("{} is not in the kernel", a.format(s))));
        }
    }
    let mut ideal = HomogeneousIdeal::new(a, seeds)?;
    let seeded = ideal.generators().len();
    let mut gens = ideal.generators().to_vec();
    let mut augmented = 0;
    for k in 1..=top {
        let comp = ideal.component(k);
        let mut lat = Lattice::from_generators(a.ring(), comp.basis());
        let before = gens.len();
        for v in cochain_kernel(phi, k)? {
            if !lat.contains(&v) {
                lat.insert(v.clone());
                gens.push(a.element(k, &v));
            }
        }
        if gens.len() > before {
            augmented += gens.len() - before;
            ideal = HomogeneousIdeal::new(a, gens.clone())?;
        }
    }
    ideal.check_d_stable(top)?;
    Ok(KernelIdeal { ideal, top, seeded, augmented })
}

/// `gen⟨i⟩ - gen⟨n⟩` for every generator and `i < n`.
pub fn diagonal_seeds(a: &FreeGradedAlgebra, n: usize) -> Vec<Element> {
    let g = a.num_gens();
    let mut out = Vec::new();
    for c in 0..n.saturating_sub(1) {
        for i in 0..g {
            out.push(Element::generator(c * g + i).sub(&Element::generator((n - 1) * g + i)));
        }
    }
    out
}

/// Longest nonzero product found by a product search.
#[derive(Clone, Debug)]
pub struct ProductWitness {
    pub count: Count,
    /// factor indices of a longest nonzero product
    pub factors: Vec<usize>,
    pub degree: usize,
    pub product: Element,
}

/// Products of `factors` (with degrees) up to degree `window`. `nonzero`
/// decides whether a product survives; vanishing products are not
/// extended, since a product with a vanishing factor vanishes.
fn product_search(
    a: &FreeGradedAlgebra,
    factors: &[(usize, Element)],
    window: usize,
    nonzero: impl Fn(usize, &Element) -> bool,
) -> ProductWitness {
    let commutative = a.flavor() == Flavor::Commutative;
    let mut best = ProductWitness { count: Count::Exact(0), factors: Vec::new(), degree: 0, product: Element::one() };
    let mut skipped = 0usize;
    let mut stack: Vec<(Vec<usize>, Element, usize)> = vec![(Vec::new(), Element::one(), 0)];
    while let Some((idx, prod, deg)) = stack.pop() {
        let level = idx.len() + 1;
        let start = if commutative { idx.last().copied().unwrap_or(0) } else { 0 };
        for (j, (dj, g)) in factors.iter().enumerate().skip(start) {
            let d = deg + dj;
            let p = a.multiply(&prod, g);
            if d > window {
                // a product vanishing as an element vanishes in any window
                if !p.is_zero() {
                    skipped = skipped.max(level);
                }
                continue;
            }
            if p.is_zero() || !nonzero(d, &p) {
                continue;
            }
            let mut idx2 = idx.clone();
            idx2.push(j);
            if level > best.factors.len() {
                best = ProductWitness { count: Count::Exact(level), factors: idx2.clone(), degree: d, product: p.clone() };
            }
            stack.push((idx2, p, d));
        }
    }
    let l = best.factors.len();
    if skipped > l {
        best.count = Count::AtLeast(l);
    }
    best
}

/// Classes generating `ker H(φ)` in degrees `1..=window`: (degree, label, representative).
pub fn kernel_classes(
    phi: &AlgebraMorphism,
    src: &CohomologyTable,
    tgt: &CohomologyTable,
    window: usize,
) -> Result<Vec<(usize, String, Element)>> {
    let mut out = Vec::new();
    for k in 1..=window {
        let p = induced_map(phi, src, tgt, k)?;
        for (i, g) in p.kernel_generators().iter().enumerate() {
            out.push((k, format!("H^{k}#{}", i + 1), src.element_of_class(k, &g.coords)));
        }
    }
    Ok(out)
}

/// Nilpotency of `ker H(φ)`: longest product of kernel classes that is not
/// a coboundary.
pub fn nil_ker_h(
    phi: &AlgebraMorphism,
    src: &CohomologyTable,
    tgt: &CohomologyTable,
    window: usize,
) -> Result<(ProductWitness, Vec<String>)> {
    let classes = kernel_classes(phi, src, tgt, window)?;
    let factors: Vec<(usize, Element)> = classes.iter().map(|(k, _, e)| (*k, e.clone())).collect();
    let w = product_search(phi.source(), &factors, window, |d, p| !src.is_coboundary(d, p));
    let labels = w.factors.iter().map(|&i| classes[i].1.clone()).collect();
    Ok((w, labels))
}

/// Nilpotency of `ker φ` at the cochain level.
pub fn nil_ker(kernel: &KernelIdeal, window: usize) -> ProductWitness {
    let i = &kernel.ideal;
    let factors: Vec<(usize, Element)> =
        i.generator_degrees().iter().copied().zip(i.generators().iter().cloned()).collect();
    product_search(i.ambient(), &factors, window, |_, _| true)
}

/// How `Hnil ≤ k` was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HnilCertificate {
    /// `(ker φ)^{k+1}` vanishes in the window
    PowerVanishes,
    /// `(ker φ)^{k+1}` is itself acyclic in the window
    PowerAcyclic,
    /// contained in the supplied acyclic candidate with this index
    Candidate(usize),
}

/// Upper-bound search for `Hnil(φ)` over `k = 0..=k_max`.
pub fn hnil_upper_bound(
    kernel: &KernelIdeal,
    window: usize,
    k_max: usize,
    candidates: &[Arc<HomogeneousIdeal>],
    reading: AcyclicReading,
) -> Result<(Count, Option<HnilCertificate>)> {
    let i = &kernel.ideal;
    let a = i.ambient();
    let cap = a.cap();
    let mut acyclic = Vec::with_capacity(candidates.len());
    for c in candidates {
        c.check_d_stable(cap)?;
        acyclic.push(is_acyclic_ideal(c, window, reading)?);
    }
    let nil = nil_ker(kernel, window).count;
    for k in 0..=k_max {
        let power = i.power(k + 1, cap);
        if (0..=window).all(|d| power.component(d).rank() == 0) {
            // the power vanishes for certain only if no product was cut off
            return Ok(match nil {
                Count::Exact(l) if l <= k => (Count::Exact(k), Some(HnilCertificate::PowerVanishes)),
                _ => (Count::Unknown, None),
            });
        }
        if is_acyclic_ideal(&power, window, reading)? {
            return Ok((Count::Exact(k), Some(HnilCertificate::PowerAcyclic)));
        }
        for (ci, c) in candidates.iter().enumerate() {
            if acyclic[ci] && power.generators().iter().all(|g| c.contains(g)) {
                return Ok((Count::Exact(k), Some(HnilCertificate::Candidate(ci))));
            }
        }
    }
    Ok((Count::Unknown, None))
}
