//! Cohomology with torsion of free algebras and quotients, induced maps,
//! quasi-isomorphism and acyclicity tests, Künneth check and the mildness
//! and admissibility predicates.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cdga::{AlgebraMorphism, Codomain, Element, FreeGradedAlgebra, HomogeneousIdeal};
use crate::coeff::{CoefficientRing, PrimeOrInfinity, Scalar};
use crate::error::{MildError, Result};
use crate::grlinalg::{invariant_factors, Cohomology, Matrix, ModuleEntry, Order, PresentedMap, SparseVec};

/// Cohomology of a codomain in the degree window `lo..=hi`.
#[derive(Clone, Debug)]
pub struct CohomologyTable {
    pub codomain: Codomain,
    pub lo: usize,
    pub hi: usize,
    h: Cohomology,
}

impl CohomologyTable {
    /// Needs cochains up to degree `hi + 1`, so `hi < cap`.
    pub fn compute(codomain: &Codomain, lo: usize, hi: usize) -> Result<Self> {
        let cap = codomain.cap();
        if hi + 1 > cap {
            return Err(MildError::BeyondCap { degree: hi + 1, cap });
        }
        let start = lo.saturating_sub(1);
        let cx = codomain.cochain_complex(start, hi + 1)?;
        Ok(CohomologyTable { codomain: codomain.clone(), lo, hi, h: cx.cohomology() })
    }

    pub fn of_algebra(a: &Arc<FreeGradedAlgebra>, hi: usize) -> Result<Self> {
        CohomologyTable::compute(&Codomain::free(a.clone()), 0, hi)
    }

    pub fn ring(&self) -> &CoefficientRing {
        self.codomain.ring()
    }

    fn check(&self, k: usize) {
        assert!(k >= self.lo && k <= self.hi, "degree {k} outside the window {}..={}", self.lo, self.hi);
    }

    pub fn entry(&self, k: usize) -> ModuleEntry {
        self.check(k);
        self.h.entry(k).clone()
    }

    pub fn entries(&self) -> Vec<ModuleEntry> {
        (self.lo..=self.hi).map(|k| self.entry(k)).collect()
    }

    pub fn orders(&self, k: usize) -> Vec<Order> {
        self.check(k);
        self.h.generators(k).iter().map(|g| g.order.clone()).collect()
    }

    pub fn num_generators(&self, k: usize) -> usize {
        self.check(k);
        self.h.generators(k).len()
    }

    /// Representative cochain of the `i`-th generator.
    pub fn representative_cochain(&self, k: usize, i: usize) -> &SparseVec {
        &self.h.generators(k)[i].representative
    }

    /// Representative of the `i`-th generator as an element of the ambient algebra.
    pub fn representative(&self, k: usize, i: usize) -> Element {
        self.codomain.ambient_part(k, self.representative_cochain(k, i))
    }

    /// Class of a cocycle cochain in generator coordinates.
    pub fn classify(&self, k: usize, v: &SparseVec) -> Option<Vec<Scalar>> {
        self.check(k);
        self.h.classify(k, v)
    }

    /// Class of an element `a` with `da ∈ I`.
    pub fn classify_element(&self, k: usize, a: &Element) -> Option<Vec<Scalar>> {
        let v = self.codomain.cocycle(k, a).ok()?;
        self.classify(k, &v)
    }

    pub fn is_coboundary(&self, k: usize, a: &Element) -> bool {
        self.classify_element(k, a).is_some_and(|c| c.iter().all(Scalar::is_zero))
    }

    /// `b` with `a - db ∈ I`, when the class of `a` vanishes.
    pub fn coboundary_preimage(&self, k: usize, a: &Element) -> Option<Element> {
        self.check(k);
        if k == 0 {
            return a.is_zero().then(Element::zero);
        }
        let v = self.codomain.cocycle(k, a).ok()?;
        let b = self.h.coboundary_preimage(k, &v)?;
        Some(self.codomain.ambient_part(k - 1, &b))
    }

    /// Element with the given generator coordinates.
    pub fn element_of_class(&self, k: usize, coords: &[Scalar]) -> Element {
        let mut e = Element::zero();
        for (i, c) in coords.iter().enumerate() {
            e.add_scaled(c, &self.representative(k, i));
        }
        e
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.entries()).expect("entries serialize")
    }
}

/// `H^k(f)` as a map of presented modules.
pub fn induced_map(f: &AlgebraMorphism, src: &CohomologyTable, tgt: &CohomologyTable, k: usize) -> Result<PresentedMap> {
    if !src.codomain.is_free() {
        return Err(MildError::Invalid("induced maps are computed from free sources".into()));
    }
    let n = src.num_generators(k);
    let b = tgt.num_generators(k);
    let mut m = Matrix::zeros(b, n);
    for j in 0..n {
        let img = f.cochain_image(k, src.representative_cochain(k, j))?;
        let c = tgt
            .classify(k, &img)
            .ok_or_else(|| MildError::NotChainMap(format!("image of a cocycle in degree {k} is not a cocycle")))?;
        for (i, x) in c.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    Ok(PresentedMap::new(src.ring(), src.orders(k), tgt.orders(k), m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedDegree {
    pub degree: usize,
    pub injective: bool,
    pub surjective: bool,
    pub iso: bool,
    pub matrix: Vec<Vec<Scalar>>,
}

/// `H(f)` in every degree of `lo..=hi`.
pub fn induced_map_on_h(f: &AlgebraMorphism, lo: usize, hi: usize) -> Result<Vec<InducedDegree>> {
    let src = CohomologyTable::compute(&Codomain::free(f.source().clone()), lo, hi)?;
    let tgt = CohomologyTable::compute(f.target(), lo, hi)?;
    (lo..=hi)
        .map(|k| {
            let p = induced_map(f, &src, &tgt, k)?;
            let (inj, surj) = (p.is_injective(), p.is_surjective());
            let matrix = (0..p.matrix.rows()).map(|i| p.matrix.row(i).to_vec()).collect();
            Ok(InducedDegree { degree: k, injective: inj, surjective: surj, iso: inj && surj, matrix })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiIsoResult {
    pub quasi_iso: bool,
    pub first_failure: Option<usize>,
}

pub fn is_quasi_iso(f: &AlgebraMorphism, hi: usize) -> Result<QuasiIsoResult> {
    let degs = induced_map_on_h(f, 0, hi)?;
    let first_failure = degs.iter().find(|d| !d.iso).map(|d| d.degree);
    Ok(QuasiIsoResult { quasi_iso: first_failure.is_none(), first_failure })
}

/// How "acyclic ideal" is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcyclicReading {
    /// `H^k(J) = 0` for `k ≥ 1`, i.e. `A -> A/J` is a quasi-isomorphism.
    #[default]
    IdealCohomology,
    /// `H(A/J) ≅ H(A)` as abstract graded modules.
    AbstractIsomorphism,
}

pub fn is_acyclic_ideal(j: &Arc<HomogeneousIdeal>, hi: usize, reading: AcyclicReading) -> Result<bool> {
    let a = j.ambient();
    if j.is_zero_ideal() {
        return Ok(true);
    }
    j.check_d_stable(a.cap())?;
    match reading {
        AcyclicReading::IdealCohomology => {
            let h = j.cochain_complex(hi + 1)?.cohomology();
            Ok((1..=hi).all(|k| h.entry(k).is_zero()))
        }
        AcyclicReading::AbstractIsomorphism => {
            let ha = CohomologyTable::of_algebra(a, hi)?;
            let hq = CohomologyTable::compute(&Codomain::quotient(a.clone(), j.clone())?, 0, hi)?;
            Ok(ha.entries() == hq.entries())
        }
    }
}

/// The projection `A -> A/J`.
pub fn projection(j: &Arc<HomogeneousIdeal>) -> Result<AlgebraMorphism> {
    let a = j.ambient();
    let q = Codomain::quotient(a.clone(), j.clone())?;
    AlgebraMorphism::new(a.clone(), q, (0..a.num_gens()).map(Element::generator).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethReport {
    pub degree: usize,
    pub formula: ModuleEntry,
    pub direct: ModuleEntry,
    pub agrees: bool,
}

fn cyclic_parts(e: &ModuleEntry) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); e.free_rank];
    v.extend(e.torsion.iter().cloned());
    v
}

/// `⊕_{p+q=k} H^p(A)⊗H^q(B) ⊕ ⊕_{p+q=k+1} Tor(H^p(A),H^q(B))` against `H^k(A⊗B)`.
pub fn kunneth_check(a: &Arc<FreeGradedAlgebra>, b: &Arc<FreeGradedAlgebra>, k: usize) -> Result<KunnethReport> {
    let ring = a.ring().clone();
    let ha = CohomologyTable::of_algebra(&a.with_cap(k + 2), k + 1)?;
    let hb = CohomologyTable::of_algebra(&b.with_cap(k + 2), k + 1)?;
    let ab = a.tensor_product(b, k + 1);
    let direct = CohomologyTable::of_algebra(&ab, k)?.entry(k);
    let mut free = 0;
    let mut cyclic = Vec::new();
    for p in 0..=k {
        let (x, y) = (cyclic_parts(&ha.entry(p)), cyclic_parts(&hb.entry(k - p)));
        for s in &x {
            for t in &y {
                // R/s ⊗ R/t = R/gcd(s, t) with 0 meaning free
                let g = ring.gcd(s, t);
                if g.is_zero() {
                    free += 1;
                } else if !ring.is_unit(&g) {
                    cyclic.push(g);
                }
            }
        }
    }
    for p in 0..=k + 1 {
        let (x, y) = (ha.entry(p).torsion, hb.entry(k + 1 - p).torsion);
        for s in &x {
            for t in &y {
                let g = ring.gcd(s, t);
                if !ring.is_unit(&g) {
                    cyclic.push(g);
                }
            }
        }
    }
    let formula = ModuleEntry { degree: k as i64, free_rank: free, torsion: invariant_factors(&cyclic, &ring) };
    let agrees = formula == direct;
    Ok(KunnethReport { degree: k, formula, direct, agrees })
}

/// Outcome of a predicate that can only be checked inside a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    True,
    False,
    Uncertified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateReport {
    pub verdict: Verdict,
    pub witness_degree: Option<usize>,
    pub window: usize,
}

fn is_ground(e: &ModuleEntry) -> bool {
    e.free_rank == 1 && e.torsion.is_empty()
}

/// Homology concentrated in `r+1 ..= rρ(R)` (and `H^0 = R`), checked in
/// degrees `0..=hi`.
pub fn is_h_mild(h: &CohomologyTable, r: usize) -> PredicateReport {
    let hi = h.hi;
    let top = match h.ring().rho() {
        PrimeOrInfinity::Infinity => None,
        PrimeOrInfinity::Prime(p) => Some(r * p as usize),
    };
    let fail = |k: usize| PredicateReport { verdict: Verdict::False, witness_degree: Some(k), window: hi };
    if !is_ground(&h.entry(0)) {
        return fail(0);
    }
    for k in 1..=hi {
        let outside = k <= r || top.is_some_and(|t| k > t);
        if outside && !h.entry(k).is_zero() {
            return fail(k);
        }
    }
    let verdict = match top {
        Some(t) if hi < t => Verdict::Uncertified,
        _ => Verdict::True,
    };
    PredicateReport { verdict, witness_degree: None, window: hi }
}

/// Finite type, `H^0 = R`, `H^{1..r} = 0` and `H^{r+1}` free.
pub fn is_admissible(h: &CohomologyTable, r: usize) -> PredicateReport {
    let hi = h.hi;
    if hi < r + 1 {
        return PredicateReport { verdict: Verdict::Uncertified, witness_degree: None, window: hi };
    }
    let fail = |k: usize| PredicateReport { verdict: Verdict::False, witness_degree: Some(k), window: hi };
    if !is_ground(&h.entry(0)) {
        return fail(0);
    }
    if let Some(k) = (1..=r).find(|&k| !h.entry(k).is_zero()) {
        return fail(k);
    }
    if !h.entry(r + 1).is_free() {
        return fail(r + 1);
    }
    PredicateReport { verdict: Verdict::True, witness_degree: None, window: hi }
}
