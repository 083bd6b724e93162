//! Free graded-commutative algebras `ΛV`, tensor algebras `TV`, their
//! elements, morphisms, ideals and quotients, truncated at a degree cap.

mod ideal;
mod morphism;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::coeff::{CoefficientRing, Scalar};
use crate::error::{MildError, Result};
use crate::grlinalg::{CochainComplex, SparseVec};

pub use ideal::{Codomain, HomogeneousIdeal, IdealComponent};
pub use morphism::AlgebraMorphism;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Commutative,
    Tensor,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: usize) -> Self {
        Generator { name: name.into(), degree }
    }
}

/// A monomial as a sequence of generator indices. Sorted (with odd
/// generators at most once) in the commutative flavor, a word otherwise.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Finite linear combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::scalar(Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        Element::term(Monomial::one(), c)
    }

    pub fn generator(i: usize) -> Self {
        Element::term(Monomial(vec![i as u16]), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &Element) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), c * x);
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(&Scalar::one(), other);
        e
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(&Scalar::from_int(-1), other);
        e
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut e = Element::zero();
        e.add_scaled(c, self);
        e
    }

    pub fn neg(&self) -> Element {
        self.scale(&Scalar::from_int(-1))
    }

    /// Largest generator index occurring, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.terms.keys().flat_map(|m| m.0.iter().copied()).max().map(usize::from)
    }
}

/// Ordered monomial basis of one degree.
#[derive(Debug)]
pub struct Basis {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl Basis {
    fn new(mut monomials: Vec<Monomial>) -> Self {
        monomials.sort();
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Basis { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// A free graded algebra with a differential given on generators.
pub struct FreeGradedAlgebra {
    name: String,
    flavor: Flavor,
    ring: CoefficientRing,
    gens: Vec<Generator>,
    diff: Vec<Element>,
    cap: usize,
    bases: Mutex<HashMap<usize, Arc<Basis>>>,
    dcache: Mutex<HashMap<Monomial, Element>>,
}

impl fmt::Debug for FreeGradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeGradedAlgebra")
            .field("name", &self.name)
            .field("flavor", &self.flavor)
            .field("ring", &self.ring)
            .field("gens", &self.gens)
            .field("cap", &self.cap)
            .finish()
    }
}

impl PartialEq for FreeGradedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.flavor == other.flavor
            && self.ring == other.ring
            && self.gens == other.gens
            && self.diff == other.diff
            && self.cap == other.cap
    }
}

impl FreeGradedAlgebra {
    /// Validate and build. Differentials must be homogeneous of degree
    /// `|g| + 1` with coefficients in the ring, and square to zero.
    pub fn new(
        name: impl Into<String>,
        flavor: Flavor,
        ring: &CoefficientRing,
        gens: Vec<Generator>,
        diff: Vec<Element>,
        cap: usize,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        if gens.len() != diff.len() {
            return Err(MildError::InvalidAlgebra(format!("{name}: one differential per generator required")));
        }
        if gens.len() > u16::MAX as usize {
            return Err(MildError::InvalidAlgebra(format!("{name}: too many generators")));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.degree == 0 {
                return Err(MildError::Degree(format!("generator {} has degree 0", g.name)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(MildError::InvalidAlgebra(format!("duplicate generator name {}", g.name)));
            }
        }
        let alg = FreeGradedAlgebra {
            name,
            flavor,
            ring: ring.clone(),
            gens,
            diff: Vec::new(),
            cap,
            bases: Mutex::new(HashMap::new()),
            dcache: Mutex::new(HashMap::new()),
        };
        let mut diff_n = Vec::with_capacity(diff.len());
        for (i, dx) in diff.into_iter().enumerate() {
            let dx = alg.normalize(&dx)?;
            for (m, c) in dx.terms() {
                if alg.monomial_degree(m) != alg.gens[i].degree + 1 {
                    return Err(MildError::Degree(format!(
                        "d {} must have degree {}, found a term of degree {}",
                        alg.gens[i].name,
                        alg.gens[i].degree + 1,
                        alg.monomial_degree(m)
                    )));
                }
                if !ring.contains(c) {
                    return Err(MildError::Ring(format!("coefficient {c} is not in {ring}")));
                }
            }
            diff_n.push(dx);
        }
        let alg = FreeGradedAlgebra { diff: diff_n, ..alg };
        for i in 0..alg.gens.len() {
            let dd = alg.apply_differential(&alg.diff[i]);
            if !dd.is_zero() {
                return Err(MildError::InvalidAlgebra(format!(
                    "d^2 {} = {} is not zero",
                    alg.gens[i].name,
                    alg.format(&dd)
                )));
            }
        }
        Ok(Arc::new(alg))
    }

    /// The ground ring as an algebra with no generators.
    pub fn ground(ring: &CoefficientRing, flavor: Flavor, cap: usize) -> Arc<Self> {
        FreeGradedAlgebra::new("R", flavor, ring, Vec::new(), Vec::new(), cap).expect("ground ring is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_differential(&self, i: usize) -> &Element {
        &self.diff[i]
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Same presentation with another cap, name or ring.
    pub fn with_cap(&self, cap: usize) -> Arc<Self> {
        FreeGradedAlgebra::new(&self.name, self.flavor, &self.ring, self.gens.clone(), self.diff.clone(), cap)
            .expect("already validated")
    }

    pub fn renamed(&self, name: &str) -> Arc<Self> {
        FreeGradedAlgebra::new(name, self.flavor, &self.ring, self.gens.clone(), self.diff.clone(), self.cap)
            .expect("already validated")
    }

    pub fn with_ring(&self, ring: &CoefficientRing) -> Arc<Self> {
        FreeGradedAlgebra::new(&self.name, self.flavor, ring, self.gens.clone(), self.diff.clone(), self.cap)
            .expect("coefficients of the old ring lie in the enlarged ring")
    }

    /// Every generator has degree at least `r + 1`.
    pub fn check_connectivity(&self, r: usize) -> Result<()> {
        match self.gens.iter().find(|g| g.degree < r + 1) {
            Some(g) => Err(MildError::Degree(format!(
                "generator {} has degree {} < {} required for r = {r}",
                g.name,
                g.degree,
                r + 1
            ))),
            None => Ok(()),
        }
    }

    pub fn is_odd(&self, g: u16) -> bool {
        self.gens[g as usize].degree % 2 == 1
    }

    pub fn monomial_degree(&self, m: &Monomial) -> usize {
        m.0.iter().map(|&g| self.gens[g as usize].degree).sum()
    }

    /// Degree of a homogeneous element (`None` for 0 or inhomogeneous).
    pub fn degree_of(&self, e: &Element) -> Option<usize> {
        let mut it = e.terms().map(|(m, _)| self.monomial_degree(m));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Bring an arbitrary word into canonical form for this flavor.
    pub fn normalize_monomial(&self, word: &[u16]) -> Option<(Monomial, bool)> {
        match self.flavor {
            Flavor::Tensor => Some((Monomial(word.to_vec()), false)),
            Flavor::Commutative => {
                let mut acc = (Monomial::one(), false);
                for &g in word {
                    let (m, s) = self.mul_monomials(&acc.0, &Monomial(vec![g]))?;
                    acc = (m, acc.1 ^ s);
                }
                Some(acc)
            }
        }
    }

    fn normalize(&self, e: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            if m.0.iter().any(|&g| g as usize >= self.gens.len()) {
                return Err(MildError::InvalidAlgebra("generator index out of range".into()));
            }
            if let Some((n, neg)) = self.normalize_monomial(&m.0) {
                out.add_term(n, if neg { -c } else { c.clone() });
            }
        }
        Ok(out)
    }

    /// Product of monomials: `None` if it vanishes, else the canonical
    /// monomial and whether a sign change occurred.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        match self.flavor {
            Flavor::Tensor => {
                let mut w = a.0.clone();
                w.extend_from_slice(&b.0);
                Some((Monomial(w), false))
            }
            Flavor::Commutative => {
                let mut neg = false;
                for &y in &b.0 {
                    if !self.is_odd(y) {
                        continue;
                    }
                    for &x in &a.0 {
                        if x == y {
                            return None;
                        }
                        if x > y && self.is_odd(x) {
                            neg = !neg;
                        }
                    }
                }
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    if j == b.len() || (i < a.len() && a.0[i] <= b.0[j]) {
                        out.push(a.0[i]);
                        i += 1;
                    } else {
                        out.push(b.0[j]);
                        j += 1;
                    }
                }
                Some((Monomial(out), neg))
            }
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((m, neg)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn power(&self, a: &Element, k: usize) -> Element {
        let mut out = Element::one();
        for _ in 0..k {
            out = self.multiply(&out, a);
        }
        out
    }

    /// `d` of a single monomial, memoized.
    pub fn differential_of_monomial(&self, m: &Monomial) -> Element {
        if m.is_empty() {
            return Element::zero();
        }
        if m.len() == 1 {
            return self.diff[m.0[0] as usize].clone();
        }
        if let Some(e) = self.dcache.lock().unwrap().get(m) {
            return e.clone();
        }
        let x = Monomial(vec![m.0[0]]);
        let rest = Monomial(m.0[1..].to_vec());
        let xe = Element::term(x, Scalar::one());
        let reste = Element::term(rest.clone(), Scalar::one());
        let mut out = self.multiply(&self.diff[m.0[0] as usize], &reste);
        let sign = if self.is_odd(m.0[0]) { Scalar::from_int(-1) } else { Scalar::one() };
        out.add_scaled(&sign, &self.multiply(&xe, &self.differential_of_monomial(&rest)));
        self.dcache.lock().unwrap().insert(m.clone(), out.clone());
        out
    }

    pub fn apply_differential(&self, a: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in a.terms() {
            out.add_scaled(c, &self.differential_of_monomial(m));
        }
        out
    }

    fn enumerate(&self, degree: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        match self.flavor {
            Flavor::Commutative => self.enum_comm(0, degree, &mut cur, &mut out),
            Flavor::Tensor => self.enum_words(degree, &mut cur, &mut out),
        }
        out
    }

    fn enum_comm(&self, start: usize, rem: usize, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if rem == 0 {
            out.push(Monomial(cur.clone()));
            return;
        }
        for g in start..self.gens.len() {
            let d = self.gens[g].degree;
            if d > rem {
                continue;
            }
            cur.push(g as u16);
            let next = if d % 2 == 1 { g + 1 } else { g };
            self.enum_comm(next, rem - d, cur, out);
            cur.pop();
        }
    }

    fn enum_words(&self, rem: usize, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if rem == 0 {
            out.push(Monomial(cur.clone()));
            return;
        }
        for g in 0..self.gens.len() {
            let d = self.gens[g].degree;
            if d <= rem {
                cur.push(g as u16);
                self.enum_words(rem - d, cur, out);
                cur.pop();
            }
        }
    }

    /// Basis of the degree component, without the cap check.
    pub fn basis(&self, degree: usize) -> Arc<Basis> {
        if let Some(b) = self.bases.lock().unwrap().get(&degree) {
            return b.clone();
        }
        let b = Arc::new(Basis::new(self.enumerate(degree)));
        self.bases.lock().unwrap().entry(degree).or_insert(b).clone()
    }

    /// All monomials of the given degree in canonical order.
    pub fn monomial_basis(&self, degree: usize) -> Result<Vec<Monomial>> {
        if degree > self.cap {
            return Err(MildError::BeyondCap { degree, cap: self.cap });
        }
        Ok(self.basis(degree).monomials.clone())
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.basis(degree).len()
    }

    /// Coordinates of a homogeneous element in the monomial basis.
    pub fn coordinates(&self, degree: usize, e: &Element) -> Result<SparseVec> {
        let b = self.basis(degree);
        let mut pairs = Vec::with_capacity(e.num_terms());
        for (m, c) in e.terms() {
            match b.position(m) {
                Some(i) => pairs.push((i, c.clone())),
                None => {
                    return Err(MildError::Degree(format!(
                        "term {} does not have degree {degree}",
                        self.format(&Element::term(m.clone(), c.clone()))
                    )))
                }
            }
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    pub fn element(&self, degree: usize, v: &SparseVec) -> Element {
        let b = self.basis(degree);
        let mut e = Element::zero();
        for (i, c) in v.iter() {
            e.add_term(b.monomials[*i].clone(), c.clone());
        }
        e
    }

    /// Matrix columns of `d: A^k -> A^{k+1}`.
    pub fn differential_columns(&self, degree: usize) -> Vec<SparseVec> {
        let b = self.basis(degree);
        b.monomials
            .iter()
            .map(|m| self.coordinates(degree + 1, &self.differential_of_monomial(m)).expect("d raises degree by one"))
            .collect()
    }

    /// Cochain complex in degrees `lo..=hi` (zero below `lo`); cohomology is
    /// valid in degrees `lo+1..hi` (and in `lo` when `lo == 0`).
    pub fn cochain_complex(&self, lo: usize, hi: usize) -> CochainComplex {
        let dims: Vec<usize> = (0..=hi).map(|k| if k < lo { 0 } else { self.dim(k) }).collect();
        let d: Vec<Vec<SparseVec>> =
            (0..hi).map(|k| if k < lo { Vec::new() } else { self.differential_columns(k) }).collect();
        CochainComplex::new(&self.ring, dims, d)
    }

    /// `n` disjoint renamed copies `x<1>, ..., x<n>` of the generators.
    /// Commutative: the tensor power. Tensor flavor: the free product.
    pub fn tensor_power(&self, n: usize, cap: usize) -> Arc<Self> {
        let copies: Vec<&FreeGradedAlgebra> = vec![self; n];
        Self::tensor_product_of(&copies, cap, &format!("{}^{n}", self.name))
    }

    /// `A ⊗ B` (free product in tensor flavor).
    pub fn tensor_product(&self, other: &FreeGradedAlgebra, cap: usize) -> Arc<Self> {
        Self::tensor_product_of(&[self, other], cap, &format!("{}*{}", self.name, other.name))
    }

    fn tensor_product_of(parts: &[&FreeGradedAlgebra], cap: usize, name: &str) -> Arc<Self> {
        assert!(!parts.is_empty());
        let flavor = parts[0].flavor;
        let mut gens = Vec::new();
        let mut diff = Vec::new();
        for (i, a) in parts.iter().enumerate() {
            let offset = gens.len() as u16;
            for g in &a.gens {
                gens.push(Generator::new(format!("{}<{}>", g.name, i + 1), g.degree));
            }
            for dx in &a.diff {
                let mut e = Element::zero();
                for (m, c) in dx.terms() {
                    e.add_term(Monomial(m.0.iter().map(|&x| x + offset).collect()), c.clone());
                }
                diff.push(e);
            }
        }
        FreeGradedAlgebra::new(name, flavor, &parts[0].ring, gens, diff, cap).expect("tensor product is valid")
    }

    /// Extend by new generators (appended after the existing ones).
    pub fn extend(&self, name: &str, new_gens: Vec<Generator>, new_diff: Vec<Element>) -> Result<Arc<Self>> {
        let mut gens = self.gens.clone();
        gens.extend(new_gens);
        let mut diff = self.diff.clone();
        diff.extend(new_diff);
        FreeGradedAlgebra::new(name, self.flavor, &self.ring, gens, diff, self.cap)
    }

    /// Human and parser readable rendering.
    pub fn format(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in e.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{a}*{mono}"));
            }
        }
        s
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < m.len() {
            let g = m.0[i];
            let mut j = i;
            while j < m.len() && m.0[j] == g {
                j += 1;
            }
            let name = &self.gens[g as usize].name;
            if j - i == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join("*")
    }
}

/// `μ_n : A^{⊗n} -> A`, sending every copy of a generator to itself.
pub fn mu_n(a: &Arc<FreeGradedAlgebra>, n: usize, cap: usize) -> AlgebraMorphism {
    let src = a.tensor_power(n, cap);
    let images = (0..n).flat_map(|_| (0..a.num_gens()).map(Element::generator)).collect();
    AlgebraMorphism::new(src, Codomain::free(a.clone()), images).expect("multiplication is a chain map")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CoefficientRing {
        CoefficientRing::rationals()
    }

    fn s2(ring: &CoefficientRing, c: i64) -> Arc<FreeGradedAlgebra> {
        let dw = Element::term(Monomial(vec![0, 0]), Scalar::from_int(c));
        FreeGradedAlgebra::new(
            "S2",
            Flavor::Commutative,
            ring,
            vec![Generator::new("v", 2), Generator::new("w", 3)],
            vec![Element::zero(), dw],
            8,
        )
        .unwrap()
    }

    #[test]
    fn exterior_rule_in_bases() {
        let a = s2(&q(), 1);
        assert_eq!(a.monomial_basis(6).unwrap(), vec![Monomial(vec![0, 0, 0])]);
        assert_eq!(a.monomial_basis(5).unwrap(), vec![Monomial(vec![0, 1])]);
        assert!(a.monomial_basis(9).is_err());
    }

    #[test]
    fn tensor_words() {
        let t = FreeGradedAlgebra::new(
            "T",
            Flavor::Tensor,
            &q(),
            vec![Generator::new("x", 2), Generator::new("y", 2)],
            vec![Element::zero(), Element::zero()],
            6,
        )
        .unwrap();
        assert_eq!(t.dim(4), 4);
    }

    #[test]
    fn koszul_sign_between_copies() {
        let v = FreeGradedAlgebra::new("S3", Flavor::Commutative, &q(), vec![Generator::new("v", 3)], vec![Element::zero()], 9)
            .unwrap();
        let v2 = v.tensor_power(2, 9);
        let a = Element::generator(0);
        let b = Element::generator(1);
        assert_eq!(v2.multiply(&a, &b), v2.multiply(&b, &a).neg());
        assert!(v2.multiply(&a, &a).is_zero());
    }

    #[test]
    fn leibniz_on_vw() {
        let a = s2(&q(), 1);
        let vw = Element::term(Monomial(vec![0, 1]), Scalar::one());
        assert_eq!(a.apply_differential(&vw), Element::term(Monomial(vec![0, 0, 0]), Scalar::one()));
    }

    #[test]
    fn rejects_bad_degree_and_nonzero_square() {
        let r = FreeGradedAlgebra::new(
            "B",
            Flavor::Commutative,
            &q(),
            vec![Generator::new("v", 2), Generator::new("w", 3)],
            vec![Element::zero(), Element::generator(0)],
            6,
        );
        assert!(matches!(r, Err(MildError::Degree(_))));
    }

    #[test]
    fn mu_is_a_chain_map() {
        let a = s2(&q(), 1);
        let m = mu_n(&a, 3, 8);
        assert!(m.check_chain_map(8).is_ok());
    }
}
