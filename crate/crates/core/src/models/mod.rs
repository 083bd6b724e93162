//! Relative free and commutative models of morphisms, minimality reports
//! and lifting through surjective quasi-isomorphisms.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cdga::{AlgebraMorphism, Codomain, Element, Flavor, FreeGradedAlgebra, Generator};
use crate::cohomology::{induced_map, is_quasi_iso, CohomologyTable};
use crate::coeff::Scalar;
use crate::error::{MildError, Result};
use crate::grlinalg::{Lattice, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StratumKind {
    /// `du = z` for a cocycle `z` whose class dies in the target.
    Kill,
    /// `dα = 0` with `α` hitting a class missing from the image.
    Cocycle,
}

/// One adjoined generator with its place in the construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumEntry {
    pub name: String,
    pub degree: usize,
    pub kind: StratumKind,
    /// the highest degree under repair when the generator was adjoined
    pub step: usize,
    pub label: String,
    pub differential: String,
    pub image: String,
}

#[derive(Clone, Debug)]
pub struct RelativeModel {
    pub base: Arc<FreeGradedAlgebra>,
    pub extended: Arc<FreeGradedAlgebra>,
    pub base_gens: usize,
    pub strata: Vec<StratumEntry>,
    pub inclusion: AlgebraMorphism,
    pub projection: AlgebraMorphism,
    /// cohomology of the projection is certified iso in degrees `0..=window`
    pub window: usize,
}

impl RelativeModel {
    pub fn added_gens(&self) -> &[Generator] {
        &self.extended.gens()[self.base_gens..]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gens: Vec<serde_json::Value> = self
            .extended
            .gens()
            .iter()
            .enumerate()
            .map(|(i, g)| {
                serde_json::json!({
                    "name": g.name,
                    "degree": g.degree,
                    "d": self.extended.format(self.extended.gen_differential(i)),
                    "image": self.projection.target().ambient.format(self.projection.image_of_generator(i)),
                    "base": i < self.base_gens,
                })
            })
            .collect();
        serde_json::json!({
            "base": self.base.name(),
            "flavor": self.extended.flavor(),
            "ring": self.extended.ring().to_string(),
            "window": self.window,
            "generators": gens,
            "strata": self.strata,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelOptions {
    /// connectivity `r`
    pub r: usize,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions { r: 1 }
    }
}

fn violated(condition: &str, degree: usize, detail: impl Into<String>) -> MildError {
    MildError::HypothesisViolated { condition: condition.into(), degree, detail: detail.into() }
}

/// Machine check of the hypotheses: `H^0 = R` on both sides, `H^{1..r} = 0`,
/// finite type and freeness (automatic for presentations), `H^{r+1}` of the
/// target free and `H^{r+1}(f)` injective.
pub fn check_hypotheses(f: &AlgebraMorphism, src: &CohomologyTable, tgt: &CohomologyTable, r: usize) -> Result<()> {
    for (name, h) in [("source", src), ("target", tgt)] {
        let e = h.entry(0);
        if !(e.free_rank == 1 && e.torsion.is_empty()) {
            return Err(violated("i", 0, format!("H^0 of the {name} is not R")));
        }
        for k in 1..=r.min(h.hi) {
            if !h.entry(k).is_zero() {
                return Err(violated("ii", k, format!("H^{k} of the {name} is not zero")));
            }
        }
    }
    if r + 1 <= tgt.hi {
        if !tgt.entry(r + 1).is_free() {
            return Err(violated("v", r + 1, format!("H^{} of the target has torsion", r + 1)));
        }
        let p = induced_map(f, src, tgt, r + 1)?;
        if !p.is_injective() {
            return Err(violated("v", r + 1, format!("H^{}(f) is not injective", r + 1)));
        }
    }
    Ok(())
}

fn fresh_name(taken: &[Generator], base: String) -> String {
    let mut name = base;
    while taken.iter().any(|g| g.name == name) {
        name.push('_');
    }
    name
}

/// Factor `f = Φ∘ι` with `ι` a free extension and `Φ` an isomorphism on
/// cohomology in degrees `0..=window`. The extension is built degree by
/// degree: cocycle generators restore surjectivity, kill generators restore
/// injectivity (after which the degree below is re-examined).
pub fn relative_model(f: &AlgebraMorphism, flavor: Flavor, window: usize, opts: ModelOptions) -> Result<RelativeModel> {
    let base = f.source().clone();
    if base.flavor() != flavor {
        return Err(MildError::Invalid(format!("morphism source has flavor {:?}, requested {flavor:?}", base.flavor())));
    }
    let target = f.target().clone();
    if target.cap() < window + 1 {
        return Err(MildError::BeyondCap { degree: window + 1, cap: target.cap() });
    }
    base.check_connectivity(opts.r)?;
    let cap = window + 1;
    let base_c = base.with_cap(cap);
    let tgt = CohomologyTable::compute(&target, 0, window)?;
    let f0 = AlgebraMorphism::new(base_c.clone(), target.clone(), f.images().to_vec())?;
    let src0 = CohomologyTable::of_algebra(&base_c, window)?;
    check_hypotheses(&f0, &src0, &tgt, opts.r)?;

    let ext_name = format!("{}+V", base.name());
    let mut gens: Vec<Generator> = base_c.gens().to_vec();
    let mut diff: Vec<Element> = (0..base_c.num_gens()).map(|i| base_c.gen_differential(i).clone()).collect();
    let mut images: Vec<Element> = f0.images().to_vec();
    let mut strata: Vec<StratumEntry> = Vec::new();
    let mut ext = base_c.renamed(&ext_name);
    let mut front = 0;
    let mut j = 0;
    while j <= window {
        front = front.max(j);
        let psi = AlgebraMorphism::new(ext.clone(), target.clone(), images.clone())?;
        let src = CohomologyTable::compute(&Codomain::free(ext.clone()), j, j)?;
        let p = induced_map(&psi, &src, &tgt, j)?;
        let coker = p.cokernel_generators();
        if !coker.is_empty() {
            if j < opts.r + 1 {
                return Err(violated("i", j, format!("H^{j}(f) is not surjective")));
            }
            for (n, g) in coker.iter().enumerate() {
                let image = tgt.element_of_class(j, &g.coords);
                let name = fresh_name(&gens, format!("a{j}_{}", n + 1));
                let label = if j == front { format!("V_{}^{}", j - 1, j) } else { format!("W_{front}^{j}") };
                strata.push(StratumEntry {
                    name: name.clone(),
                    degree: j,
                    kind: StratumKind::Cocycle,
                    step: front,
                    label,
                    differential: "0".into(),
                    image: target.ambient.format(&image),
                });
                gens.push(Generator::new(name, j));
                diff.push(Element::zero());
                images.push(image);
            }
            ext = FreeGradedAlgebra::new(&ext_name, flavor, base.ring(), gens.clone(), diff.clone(), cap)?;
            continue;
        }
        let ker = p.kernel_generators();
        if ker.is_empty() {
            j += 1;
            continue;
        }
        if j < opts.r + 2 {
            return Err(violated("v", j, format!("H^{j}(f) is not injective")));
        }
        for (n, g) in ker.iter().enumerate() {
            let z = src.element_of_class(j, &g.coords);
            let pz = psi.apply(&z);
            let b = tgt.coboundary_preimage(j, &pz).ok_or_else(|| {
                MildError::NotChainMap(format!("kernel class in degree {j} is not a coboundary in the target"))
            })?;
            let name = fresh_name(&gens, format!("u{}_{}", j - 1, n + 1));
            let label = if j == front { format!("V_{j}^{}", j - 1) } else { format!("V_{front}^{}", j - 1) };
            strata.push(StratumEntry {
                name: name.clone(),
                degree: j - 1,
                kind: StratumKind::Kill,
                step: front,
                label,
                differential: ext.format(&z),
                image: target.ambient.format(&b),
            });
            gens.push(Generator::new(name, j - 1));
            diff.push(z);
            images.push(b);
        }
        ext = FreeGradedAlgebra::new(&ext_name, flavor, base.ring(), gens.clone(), diff.clone(), cap)?;
        j -= 1;
    }
    let inclusion = AlgebraMorphism::new(
        base_c.clone(),
        Codomain::free(ext.clone()),
        (0..base_c.num_gens()).map(Element::generator).collect(),
    )?;
    let projection = AlgebraMorphism::new(ext.clone(), target, images)?;
    Ok(RelativeModel { base: base_c, extended: ext, base_gens: f.source().num_gens(), strata, inclusion, projection, window })
}

/// Certify that the projection is a quasi-isomorphism in the window and
/// that `Φ∘ι = f` on generators.
pub fn verify_model(m: &RelativeModel, f: &AlgebraMorphism) -> Result<()> {
    m.projection.check_chain_map(m.window + 1)?;
    let comp = m.inclusion.then(&m.projection)?;
    if !comp.agrees_with(&f.with_target(m.projection.target().clone())?) {
        return Err(MildError::Invalid("Φ∘ι differs from f".into()));
    }
    let q = is_quasi_iso(&m.projection, m.window)?;
    if let Some(k) = q.first_failure {
        return Err(MildError::NotQuasiIso { degree: k });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityEntry {
    pub generator: String,
    pub decomposable: bool,
    /// gcd of the linear coefficients (1 when decomposable)
    pub content: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub entries: Vec<MinimalityEntry>,
    /// every differential is decomposable or has non-invertible content
    pub minimal: bool,
}

/// Linear part of `d` on each adjoined generator, taken with respect to the
/// adjoined generators.
pub fn check_minimality(m: &RelativeModel) -> MinimalityReport {
    let ext = &m.extended;
    let ring = ext.ring();
    let mut entries = Vec::new();
    for i in m.base_gens..ext.num_gens() {
        let mut content = Scalar::zero();
        for (mono, c) in ext.gen_differential(i).terms() {
            if mono.len() == 1 && mono.0[0] as usize >= m.base_gens {
                content = ring.gcd(&content, c);
            }
        }
        let decomposable = content.is_zero();
        entries.push(MinimalityEntry {
            generator: ext.gens()[i].name.clone(),
            decomposable,
            content: if decomposable { Scalar::one() } else { content },
        });
    }
    let minimal = entries.iter().all(|e| e.decomposable || !ring.is_unit(&e.content));
    MinimalityReport { entries, minimal }
}

/// `d(gen)` only involves earlier generators.
pub fn check_filtration(a: &FreeGradedAlgebra) -> bool {
    (0..a.num_gens()).all(|i| a.gen_differential(i).max_generator().is_none_or(|m| m < i))
}

fn same_codomain(a: &Codomain, b: &Codomain) -> bool {
    if *a.ambient != *b.ambient {
        return false;
    }
    match (&a.ideal, &b.ideal) {
        (None, None) => true,
        (Some(x), Some(y)) => Arc::ptr_eq(x, y) || x.generators() == y.generators(),
        _ => false,
    }
}

/// Generators ordered so that each comes after those in its differential.
pub fn dependency_order(a: &FreeGradedAlgebra) -> Result<Vec<usize>> {
    let n = a.num_gens();
    let deps: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut d: Vec<usize> =
                a.gen_differential(i).terms().flat_map(|(m, _)| m.0.iter().map(|&g| g as usize)).collect();
            d.sort_unstable();
            d.dedup();
            d
        })
        .collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&i| !done[i] && deps[i].iter().all(|&j| done[j]));
        let Some(i) = next else {
            return Err(MildError::InvalidAlgebra("differentials do not admit a generator filtration".into()));
        };
        done[i] = true;
        order.push(i);
    }
    Ok(order)
}

/// Degreewise surjectivity of `η: A -> B` (onto `B^k/I^k`).
pub fn check_cochain_surjective(eta: &AlgebraMorphism, window: usize) -> Result<()> {
    let b = &eta.target().ambient;
    for k in 0..=window {
        let mut lat = Lattice::new(b.ring());
        for m in &eta.source().basis(k).monomials {
            lat.insert(b.coordinates(k, &eta.apply_monomial(m))?);
        }
        if let Some(i) = &eta.target().ideal {
            for v in i.component(k).basis() {
                lat.insert(v.clone());
            }
        }
        if (0..b.dim(k)).any(|t| !lat.contains(&SparseVec::unit(t))) {
            return Err(MildError::NotSurjective { degree: k });
        }
    }
    Ok(())
}

/// `φ: M -> A` with `η∘φ = ψ`, built generator by generator in order by
/// solving `η(x) ≡ ψ(v)` and `dx = φ(dv)` on the degree component.
pub fn lift(psi: &AlgebraMorphism, eta: &AlgebraMorphism, window: usize) -> Result<AlgebraMorphism> {
    if !same_codomain(psi.target(), eta.target()) {
        return Err(MildError::MixedAmbients);
    }
    let m = psi.source();
    let a = eta.source();
    if let Some(g) = m.gens().iter().find(|g| g.degree > window) {
        return Err(MildError::Invalid(format!("generator {} lies above the window {window}", g.name)));
    }
    if a.cap() < window + 1 {
        return Err(MildError::BeyondCap { degree: window + 1, cap: a.cap() });
    }
    check_cochain_surjective(eta, window)?;
    if let Some(k) = is_quasi_iso(eta, window)?.first_failure {
        return Err(MildError::NotQuasiIso { degree: k });
    }
    let b = &eta.target().ambient;
    let ring = a.ring();
    let mut images: Vec<Element> = vec![Element::zero(); m.num_gens()];
    for i in dependency_order(m)? {
        let g = &m.gens()[i];
        let k = g.degree;
        let partial = AlgebraMorphism::new(m.clone(), Codomain::free(a.clone()), images.clone())?;
        let dv = partial.apply(m.gen_differential(i));
        let na1 = a.dim(k + 1);
        let mut lat = Lattice::new(ring);
        let abasis = a.basis(k);
        for mono in &abasis.monomials {
            let dm = a.coordinates(k + 1, &a.differential_of_monomial(mono))?;
            let em = b.coordinates(k, &eta.apply_monomial(mono))?;
            lat.insert(dm.concat(na1, &em));
        }
        if let Some(ideal) = &eta.target().ideal {
            for v in ideal.component(k).basis() {
                lat.insert(SparseVec::new().concat(na1, &v.scaled(&Scalar::from_int(-1))));
            }
        }
        let rhs = a.coordinates(k + 1, &dv)?.concat(na1, &b.coordinates(k, psi.image_of_generator(i))?);
        let sol = lat.solve(&rhs).ok_or_else(|| MildError::LiftFailed { generator: g.name.clone() })?;
        let mut x = SparseVec::new();
        for (col, c) in sol.iter().filter(|(col, _)| *col < abasis.len()) {
            x.axpy(c, &SparseVec::unit(*col));
        }
        images[i] = a.element(k, &x);
    }
    let phi = AlgebraMorphism::new(m.clone(), Codomain::free(a.clone()), images)?;
    phi.check_chain_map(window + 1)?;
    let comp = phi.then(eta)?;
    if !comp.agrees_with(psi) {
        return Err(MildError::LiftFailed { generator: "composite".into() });
    }
    Ok(phi)
}
