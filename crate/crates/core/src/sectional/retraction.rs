//! Retractions of free extensions `A -> A⊗ΛW` (or `A ⊔ TW`): the linear
//! search for `A`-module chain retractions and the check of candidate
//! multiplicative ones.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cdga::{AlgebraMorphism, Element, FreeGradedAlgebra, Monomial};
use crate::coeff::Scalar;
use crate::error::Result;
use crate::grlinalg::{Lattice, SparseVec};

/// Split a canonical monomial of the extension into its maximal prefix of
/// base letters and the rest. In the commutative flavor base letters sort
/// first, so the monomial is exactly the product of the two parts.
fn split(m: &Monomial, nbase: usize) -> (Monomial, Monomial) {
    let cut = m.0.iter().position(|&g| g as usize >= nbase).unwrap_or(m.len());
    (Monomial(m.0[..cut].to_vec()), Monomial(m.0[cut..].to_vec()))
}

/// Basis of the extension as a free left `A`-module in one degree: the
/// monomials not starting with a base letter.
fn module_basis(ext: &FreeGradedAlgebra, nbase: usize, k: usize) -> Vec<Monomial> {
    ext.basis(k).monomials.iter().filter(|m| m.0.first().is_none_or(|&g| g as usize >= nbase)).cloned().collect()
}

/// `r(1⊗ω)` for the module basis elements `ω` of positive degree up to the window.
#[derive(Clone, Debug)]
pub struct ModuleRetraction {
    pub base: Arc<FreeGradedAlgebra>,
    pub ext: Arc<FreeGradedAlgebra>,
    pub window: usize,
    pub values: BTreeMap<Monomial, Element>,
}

impl ModuleRetraction {
    fn value(&self, omega: &Monomial) -> Element {
        if omega.is_empty() {
            return Element::one();
        }
        self.values.get(omega).cloned().unwrap_or_default()
    }

    /// `r(x)` for an element of the extension in the window.
    pub fn apply(&self, x: &Element) -> Element {
        let nbase = self.base.num_gens();
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            let (a, omega) = split(m, nbase);
            let prod = self.base.multiply(&Element::term(a, c.clone()), &self.value(&omega));
            out = out.add(&prod);
        }
        out
    }

    /// `r(1) = 1` holds by construction; checks `r(dω) = d r(ω)` below the
    /// window top, so `r` is a chain map retracting the inclusion.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let nbase = self.base.num_gens();
        for k in 1..self.window {
            for omega in module_basis(&self.ext, nbase, k) {
                let w = Element::term(omega.clone(), Scalar::one());
                let lhs = self.apply(&self.ext.apply_differential(&w));
                let rhs = self.base.apply_differential(&self.value(&omega));
                if lhs != rhs {
                    return Err(format!(
                        "r(d {}) = {} but d r({}) = {}",
                        self.ext.format_monomial(&omega),
                        self.base.format(&lhs),
                        self.ext.format_monomial(&omega),
                        self.base.format(&rhs)
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let values: Vec<serde_json::Value> = self
            .values
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(m, e)| serde_json::json!({ "omega": self.ext.format_monomial(m), "r": self.base.format(e) }))
            .collect();
        serde_json::json!({
            "module_basis_size": self.values.len(),
            "nonzero_values": values,
            "window": self.window,
        })
    }
}

/// Search for an `A`-module chain retraction of `A -> ext`, where the first
/// generators of `ext` are those of `base`. Unknowns are `r(ω) ∈ A^{|ω|}`;
/// each `ω` below the window top contributes the equation
/// `r(dω) - d r(ω) = 0` in `A^{|ω|+1}`.
pub fn module_retraction(
    base: &Arc<FreeGradedAlgebra>,
    ext: &Arc<FreeGradedAlgebra>,
    window: usize,
) -> Result<Option<ModuleRetraction>> {
    let nbase = base.num_gens();
    let mut omegas: Vec<(Monomial, usize)> = Vec::new();
    let mut offset: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut unknowns = 0;
    for k in 1..=window {
        for m in module_basis(ext, nbase, k) {
            offset.insert(m.clone(), unknowns);
            unknowns += base.dim(k);
            omegas.push((m, k));
        }
    }
    let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); unknowns];
    let mut rhs: Vec<(usize, Scalar)> = Vec::new();
    let mut row = 0;
    for (omega, k) in &omegas {
        let k = *k;
        if k >= window {
            continue;
        }
        let target = base.basis(k + 1);
        let dw = ext.apply_differential(&Element::term(omega.clone(), Scalar::one()));
        for (m, c) in dw.terms() {
            let (a, rest) = split(m, nbase);
            if rest.is_empty() {
                let pos = target.position(&a).expect("base monomial of the right degree");
                rhs.push((row + pos, -c));
                continue;
            }
            let off = offset[&rest];
            let source = base.basis(ext.monomial_degree(&rest));
            for (bi, b) in source.monomials.iter().enumerate() {
                if let Some((p, neg)) = base.mul_monomials(&a, b) {
                    let pos = target.position(&p).expect("product of the right degree");
                    cols[off + bi].push((row + pos, if neg { -c } else { c.clone() }));
                }
            }
        }
        let own = offset[omega];
        for (bi, dcol) in base.differential_columns(k).iter().enumerate() {
            for (i, x) in dcol.iter() {
                cols[own + bi].push((row + i, -x));
            }
        }
        row += target.len();
    }
    let mut lat = Lattice::new(base.ring());
    for c in cols {
        lat.insert(SparseVec::from_pairs(c));
    }
    let Some(x) = lat.solve(&SparseVec::from_pairs(rhs)) else {
        return Ok(None);
    };
    let mut values = BTreeMap::new();
    for (omega, k) in &omegas {
        let off = offset[omega];
        let v = x.slice(off..off + base.dim(*k));
        values.insert(omega.clone(), base.element(*k, &v));
    }
    Ok(Some(ModuleRetraction { base: base.clone(), ext: ext.clone(), window, values }))
}

/// Outcome of checking a candidate multiplicative retraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionCheck {
    pub ok: bool,
    pub witness: Option<String>,
}

impl RetractionCheck {
    fn fail(w: String) -> Self {
        RetractionCheck { ok: false, witness: Some(w) }
    }
}

/// Checks that `candidate: E -> A` is a chain map up to `window`,
/// multiplicative on generator pairs and retracts `inclusion: A -> E`.
pub fn verify_multiplicative_retraction(
    candidate: &AlgebraMorphism,
    inclusion: &AlgebraMorphism,
    window: usize,
) -> RetractionCheck {
    let e = candidate.source();
    let a = inclusion.source();
    if **e != *inclusion.target().ambient || !candidate.target().is_free() || *candidate.target().ambient != **a {
        return RetractionCheck::fail("candidate does not map the extension to its base".into());
    }
    if let Err(err) = candidate.check_chain_map(window) {
        return RetractionCheck::fail(err.to_string());
    }
    for (i, g) in a.gens().iter().enumerate() {
        let back = candidate.apply(inclusion.image_of_generator(i));
        if back != Element::generator(i) {
            return RetractionCheck::fail(format!("r(j({})) = {} instead of {}", g.name, a.format(&back), g.name));
        }
    }
    let n = e.num_gens();
    for i in 0..n {
        for j in 0..n {
            if e.gens()[i].degree + e.gens()[j].degree > window {
                continue;
            }
            let (gi, gj) = (Element::generator(i), Element::generator(j));
            let lhs = candidate.apply(&e.multiply(&gi, &gj));
            let rhs = a.multiply(&candidate.apply(&gi), &candidate.apply(&gj));
            if lhs != rhs {
                return RetractionCheck::fail(format!(
                    "r({}*{}) differs from r({})*r({})",
                    e.gens()[i].name,
                    e.gens()[j].name,
                    e.gens()[i].name,
                    e.gens()[j].name
                ));
            }
        }
    }
    RetractionCheck { ok: true, witness: None }
}
