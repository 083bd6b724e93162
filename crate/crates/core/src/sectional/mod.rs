//! Sectional-category style invariants of surjective morphisms: nilpotency
//! of kernels, homology and module relaxations of secat and sc, and the
//! higher topological complexity reports built from them.

mod instance;
mod kernel;
mod retraction;

use std::sync::Arc;

use serde_json::{json, Value};

use crate::cdga::{mu_n, AlgebraMorphism, Codomain, Flavor, FreeGradedAlgebra, HomogeneousIdeal};
use crate::coeff::{CoefficientRing, PrimeOrInfinity};
use crate::cohomology::{is_admissible, is_h_mild, AcyclicReading, CohomologyTable, Verdict};
use crate::error::{MildError, Result};
use crate::models::ModelOptions;

pub use instance::{build_gamma, build_p, Context, GammaSide, PSide};
pub use kernel::{
    cochain_kernel, diagonal_seeds, hnil_upper_bound, kernel_classes, kernel_ideal, nil_ker, nil_ker_h, HnilCertificate,
    KernelIdeal, ProductWitness,
};
pub use retraction::{module_retraction, verify_multiplicative_retraction, ModuleRetraction, RetractionCheck};

/// A computed invariant: exact, a lower bound forced by the window or by
/// the level cap, or unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Count {
    Exact(usize),
    /// at least this much; the window cut off the search
    AtLeast(usize),
    /// no level up to this cap qualified
    Above(usize),
    Unknown,
}

impl Count {
    pub fn exact(&self) -> Option<usize> {
        match self {
            Count::Exact(k) => Some(*k),
            _ => None,
        }
    }

    pub fn lower(&self) -> usize {
        match self {
            Count::Exact(k) | Count::AtLeast(k) => *k,
            Count::Above(m) => m + 1,
            Count::Unknown => 0,
        }
    }

    pub fn upper(&self) -> Option<usize> {
        self.exact()
    }

    pub fn display(&self) -> String {
        match self {
            Count::Exact(k) => k.to_string(),
            Count::AtLeast(k) => format!(">={k}"),
            Count::Above(m) => format!(">{m}"),
            Count::Unknown => "unknown".into(),
        }
    }

    pub fn to_json(&self, window: usize) -> Value {
        let (status, value) = match self {
            Count::Exact(k) => ("exact", json!(k)),
            Count::AtLeast(k) => ("saturated", json!(k)),
            Count::Above(m) => ("saturated", json!(m + 1)),
            Count::Unknown => ("unknown", Value::Null),
        };
        json!({ "status": status, "value": value, "display": self.display(), "window": window })
    }
}

/// `ρ(new) ≥ m·ρ(ring)` with the fewest extra inverted primes.
pub fn ring_enlargement(ring: &CoefficientRing, m: usize) -> CoefficientRing {
    ring.enlarge(m.max(1) as u64)
}

/// Whether `m·ρ(old) ≤ ρ(new)`.
pub fn satisfies_enlargement(old: &CoefficientRing, new: &CoefficientRing, m: usize) -> bool {
    match (old.rho(), new.rho()) {
        (_, PrimeOrInfinity::Infinity) => true,
        (PrimeOrInfinity::Infinity, _) => m == 0,
        (PrimeOrInfinity::Prime(p), PrimeOrInfinity::Prime(q)) => m as u64 * p <= q,
    }
}

/// The same morphism over another ring (and cap).
pub fn morphism_over(phi: &AlgebraMorphism, ring: &CoefficientRing, cap: usize) -> Result<AlgebraMorphism> {
    let src = phi.source().with_ring(ring).with_cap(cap);
    let tgt_a = phi.target().ambient.with_ring(ring).with_cap(cap);
    let target = match &phi.target().ideal {
        None => Codomain::free(tgt_a),
        Some(i) => Codomain::quotient(tgt_a.clone(), HomogeneousIdeal::new(&tgt_a, i.generators().to_vec())?)?,
    };
    AlgebraMorphism::new(src, target, phi.images().to_vec())
}

/// Knobs of a battery run.
#[derive(Clone, Debug)]
pub struct BatteryOptions {
    pub m_max: usize,
    pub window: usize,
    pub r: usize,
    /// user-supplied acyclic ideal candidates for the Hnil search
    pub candidates: Vec<Arc<HomogeneousIdeal>>,
    /// how the Hnil search reads "acyclic ideal"
    pub reading: AcyclicReading,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        BatteryOptions { m_max: 4, window: 8, r: 1, candidates: Vec::new(), reading: AcyclicReading::default() }
    }
}

/// What was decided at one level `m`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelReport {
    pub m: usize,
    pub w_generators: Option<usize>,
    pub h_j_injective: Option<bool>,
    pub j_module_retraction: Option<bool>,
    pub h_gamma_injective: Option<bool>,
    pub v_generators: Option<usize>,
    pub gamma_module_retraction: Option<bool>,
    pub note: Option<String>,
}

impl LevelReport {
    fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "W_generators": self.w_generators,
            "H(j_m)_injective": self.h_j_injective,
            "j_m_module_retraction": self.j_module_retraction,
            "H(Gamma_m)_injective": self.h_gamma_injective,
            "V_generators": self.v_generators,
            "iota_m_module_retraction": self.gamma_module_retraction,
            "note": self.note,
        })
    }
}

/// All invariants of one surjective morphism.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub kind: String,
    pub source: String,
    pub n: Option<usize>,
    pub flavor: Flavor,
    pub ring: CoefficientRing,
    pub input_ring: CoefficientRing,
    pub window: usize,
    pub m_max: usize,
    pub nil_ker_h: Count,
    pub nil_ker: Count,
    pub hsecat: Count,
    pub msecat: Count,
    pub hsc: Count,
    pub msc: Count,
    pub hnil_ub: Count,
    pub levels: Vec<LevelReport>,
    pub kernel_generators: usize,
    pub kernel_augmented: usize,
    pub nil_ker_h_witness: Vec<String>,
    pub nil_ker_witness: Option<String>,
    pub hnil_certificate: Option<HnilCertificate>,
    pub msecat_certificate: Option<ModuleRetraction>,
    pub msc_certificate: Option<ModuleRetraction>,
    pub notes: Vec<String>,
}

impl InvariantReport {
    pub fn members(&self) -> [(&'static str, &Count); 7] {
        [
            ("nil_ker_H", &self.nil_ker_h),
            ("Hsecat", &self.hsecat),
            ("msecat", &self.msecat),
            ("Hsc", &self.hsc),
            ("msc", &self.msc),
            ("Hnil_ub", &self.hnil_ub),
            ("nil_ker", &self.nil_ker),
        ]
    }

    /// Order relations `x ≤ y` that are checked on every report.
    pub fn chain(&self) -> Vec<(&'static str, &Count, &'static str, &Count)> {
        vec![
            ("nil_ker_H", &self.nil_ker_h, "Hsecat", &self.hsecat),
            ("Hsecat", &self.hsecat, "msecat", &self.msecat),
            ("Hsecat", &self.hsecat, "Hsc", &self.hsc),
            ("msecat", &self.msecat, "msc", &self.msc),
            ("Hsc", &self.hsc, "msc", &self.msc),
            ("nil_ker_H", &self.nil_ker_h, "Hnil_ub", &self.hnil_ub),
            ("Hsc", &self.hsc, "Hnil_ub", &self.hnil_ub),
        ]
    }

    /// Relations contradicted by the computed values: `x ≤ y` fails when the
    /// lower bound of `x` exceeds a known value of `y`.
    pub fn chain_violations(&self) -> Vec<String> {
        self.chain()
            .into_iter()
            .filter(|(_, x, _, y)| y.upper().is_some_and(|u| x.lower() > u))
            .map(|(a, x, b, y)| format!("{a} = {} > {b} = {}", x.display(), y.display()))
            .collect()
    }

    /// Relations where both sides are finite.
    pub fn checked_relations(&self) -> usize {
        self.chain().iter().filter(|(_, x, _, y)| x.exact().is_some() && y.exact().is_some()).count()
    }

    /// Bracket for secat (TC_n): lower bounds from the relaxations, upper bound from Hnil.
    pub fn secat_bracket(&self) -> (usize, Option<usize>) {
        let lo = self.nil_ker_h.lower().max(self.hsecat.lower()).max(self.msecat.lower());
        (lo, self.hnil_ub.upper())
    }

    /// Bracket for sc (tc_n).
    pub fn sc_bracket(&self) -> (usize, Option<usize>) {
        let lo = self.secat_bracket().0.max(self.hsc.lower()).max(self.msc.lower());
        (lo, self.hnil_ub.upper())
    }

    pub fn is_certified(&self) -> bool {
        self.members().iter().all(|(_, c)| c.exact().is_some())
    }

    pub fn to_json(&self) -> Value {
        let w = self.window;
        let mut members = serde_json::Map::new();
        for (name, c) in self.members() {
            members.insert(name.into(), c.to_json(w));
        }
        let bracket = |(lo, hi): (usize, Option<usize>)| {
            json!({ "lower": lo, "upper": hi, "squeezed": hi == Some(lo) })
        };
        let (secat_name, sc_name) = match (self.kind.as_str(), self.flavor) {
            ("invariants", _) => ("secat", "sc"),
            (_, Flavor::Tensor) => ("ATC", "Atc"),
            _ => ("TC", "tc"),
        };
        json!({
            "kind": self.kind,
            "source": self.source,
            "n": self.n,
            "flavor": self.flavor,
            "ring": self.ring.to_string(),
            "input_ring": self.input_ring.to_string(),
            "window": w,
            "m_max": self.m_max,
            "members": members,
            "bounds": { secat_name: bracket(self.secat_bracket()), sc_name: bracket(self.sc_bracket()) },
            "chain_violations": self.chain_violations(),
            "levels": self.levels.iter().map(LevelReport::to_json).collect::<Vec<_>>(),
            "kernel": { "generators": self.kernel_generators, "augmented": self.kernel_augmented },
            "certificates": {
                "nil_ker_H": self.nil_ker_h_witness,
                "nil_ker": self.nil_ker_witness,
                "Hnil_ub": self.hnil_certificate.as_ref().map(|c| format!("{c:?}")),
                "msecat": self.msecat_certificate.as_ref().map(ModuleRetraction::to_json),
                "msc": self.msc_certificate.as_ref().map(ModuleRetraction::to_json),
            },
            "notes": self.notes,
        })
    }
}

struct SideOutcome {
    h: Count,
    module: Count,
    certificate: Option<ModuleRetraction>,
    levels: Vec<LevelReport>,
}

/// A model of `p_0 = φ` needs `H^{r+1}(φ)` injective, and `H(j_0)` is
/// injective exactly when `H(φ)` is; a non-injective `H(φ)` fails level 0
/// on both sides without building anything.
fn level_zero_fails(ctx: &Context) -> Result<Option<usize>> {
    ctx.first_non_injective(&ctx.phi, &ctx.h_target)
}

fn p_side(ctx: &Context, m_max: usize) -> Result<SideOutcome> {
    let mut out = SideOutcome { h: Count::Above(m_max), module: Count::Above(m_max), certificate: None, levels: vec![] };
    let zero_fails = level_zero_fails(ctx)?;
    for m in 0..=m_max {
        let mut lr = LevelReport { m, ..Default::default() };
        if let (0, Some(k)) = (m, zero_fails) {
            lr.h_j_injective = Some(false);
            lr.j_module_retraction = Some(false);
            lr.note = Some(format!("H(phi) not injective in degree {k}"));
            out.levels.push(lr);
            continue;
        }
        let side = build_p(ctx, m)?;
        lr.w_generators = Some(side.w_count());
        let he = CohomologyTable::of_algebra(&side.pushout, ctx.window)?;
        let injective = ctx.first_non_injective(&side.j, &he)?.is_none();
        lr.h_j_injective = Some(injective);
        if injective && out.h == Count::Above(m_max) {
            out.h = Count::Exact(m);
        }
        if injective {
            let r = module_retraction(ctx.base(), &side.pushout, ctx.window)?;
            lr.j_module_retraction = Some(r.is_some());
            if let Some(r) = r {
                r.verify().map_err(|w| MildError::Invalid(format!("module retraction failed to verify: {w}")))?;
                out.module = Count::Exact(m);
                out.certificate = Some(r);
            }
        } else {
            lr.j_module_retraction = Some(false);
        }
        out.levels.push(lr);
        if out.module.exact().is_some() {
            break;
        }
    }
    Ok(out)
}

fn gamma_side(ctx: &Context, m_max: usize) -> Result<SideOutcome> {
    let mut out = SideOutcome { h: Count::Above(m_max), module: Count::Above(m_max), certificate: None, levels: vec![] };
    for m in 0..=m_max {
        let mut lr = LevelReport { m, ..Default::default() };
        let side = build_gamma(ctx, m)?;
        let injective = ctx.first_non_injective(&side.gamma, &side.h_target)?.is_none();
        lr.h_gamma_injective = Some(injective);
        if injective && out.h == Count::Above(m_max) {
            out.h = Count::Exact(m);
        }
        if injective {
            let model = side.model(ctx)?;
            lr.v_generators = Some(model.added_gens().len());
            let r = module_retraction(ctx.base(), &model.extended, ctx.window)?;
            lr.gamma_module_retraction = Some(r.is_some());
            if let Some(r) = r {
                r.verify().map_err(|w| MildError::Invalid(format!("module retraction failed to verify: {w}")))?;
                out.module = Count::Exact(m);
                out.certificate = Some(r);
            }
        } else {
            lr.gamma_module_retraction = Some(false);
        }
        out.levels.push(lr);
        if out.module.exact().is_some() {
            break;
        }
    }
    Ok(out)
}

fn merge_levels(p: Vec<LevelReport>, g: Vec<LevelReport>) -> Vec<LevelReport> {
    let n = p.len().max(g.len());
    (0..n)
        .map(|m| {
            let mut l = p.get(m).cloned().unwrap_or(LevelReport { m, ..Default::default() });
            if let Some(x) = g.get(m) {
                l.h_gamma_injective = x.h_gamma_injective;
                l.v_generators = x.v_generators;
                l.gamma_module_retraction = x.gamma_module_retraction;
            }
            l
        })
        .collect()
}

/// Runs every invariant on a surjective `φ` whose source and target have
/// cap at least `window + 1`. Independent parts run in parallel on the
/// current rayon pool; the result does not depend on scheduling.
pub fn run_battery(phi: &AlgebraMorphism, seeds: Vec<crate::cdga::Element>, opts: &BatteryOptions) -> Result<InvariantReport> {
    let window = opts.window;
    let ctx = Context::new(phi, window, ModelOptions { r: opts.r }, seeds)?;
    let ((nil_h, nil, hnil), (p, g)) = rayon::join(
        || {
            let nil_h = nil_ker_h(&ctx.phi, &ctx.h_source, &ctx.h_target, window);
            let nil = nil_ker(&ctx.kernel, window);
            let hnil = hnil_upper_bound(&ctx.kernel, window, opts.m_max, &opts.candidates, opts.reading);
            (nil_h, nil, hnil)
        },
        || rayon::join(|| p_side(&ctx, opts.m_max), || gamma_side(&ctx, opts.m_max)),
    );
    let (nil_h, nil_h_labels) = nil_h?;
    let (hnil, hnil_cert) = hnil?;
    let (p, g) = (p?, g?);
    let a = ctx.base();
    let nil_ker_witness =
        (!nil.factors.is_empty()).then(|| format!("degree {}: {}", nil.degree, a.format(&nil.product)));
    Ok(InvariantReport {
        kind: "invariants".into(),
        source: a.name().to_string(),
        n: None,
        flavor: a.flavor(),
        ring: a.ring().clone(),
        input_ring: a.ring().clone(),
        window,
        m_max: opts.m_max,
        nil_ker_h: nil_h.count,
        nil_ker: nil.count,
        hsecat: p.h,
        msecat: p.module,
        hsc: g.h,
        msc: g.module,
        hnil_ub: hnil,
        levels: merge_levels(p.levels, g.levels),
        kernel_generators: ctx.kernel.ideal.generators().len(),
        kernel_augmented: ctx.kernel.augmented,
        nil_ker_h_witness: nil_h_labels,
        nil_ker_witness,
        hnil_certificate: hnil_cert,
        msecat_certificate: p.certificate,
        msc_certificate: g.certificate,
        notes: Vec::new(),
    })
}

/// How to apply the ring enlargement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingEnlarge {
    Auto,
    Off,
}

fn plan_ring(ring: &CoefficientRing, m_max: usize, mode: RingEnlarge) -> Result<CoefficientRing> {
    let factor = m_max.max(1);
    match mode {
        RingEnlarge::Auto => Ok(ring_enlargement(ring, factor)),
        RingEnlarge::Off if satisfies_enlargement(ring, ring, factor) => Ok(ring.clone()),
        RingEnlarge::Off => Err(MildError::HypothesisViolated {
            condition: "ring".into(),
            degree: 0,
            detail: format!("{ring} does not satisfy m*rho(R') <= rho(R) for m = {factor}"),
        }),
    }
}

/// The battery on an arbitrary surjective morphism.
pub fn invariants_report(phi: &AlgebraMorphism, opts: &BatteryOptions, mode: RingEnlarge) -> Result<InvariantReport> {
    let input_ring = phi.source().ring().clone();
    let ring = plan_ring(&input_ring, opts.m_max, mode)?;
    let phi = morphism_over(phi, &ring, opts.window + 1)?;
    let mut opts = opts.clone();
    for c in &mut opts.candidates {
        *c = HomogeneousIdeal::new(phi.source(), c.generators().to_vec())?;
    }
    let mut rep = run_battery(&phi, Vec::new(), &opts)?;
    rep.input_ring = input_ring;
    Ok(rep)
}

fn mildness_notes(model: &Arc<FreeGradedAlgebra>, opts: &BatteryOptions) -> Result<Vec<String>> {
    let h = CohomologyTable::of_algebra(&model.with_cap(opts.window + 1), opts.window)?;
    let mut notes = Vec::new();
    for (name, rep) in [("mild", is_h_mild(&h, opts.r)), ("admissible", is_admissible(&h, opts.r))] {
        match rep.verdict {
            Verdict::False => {
                return Err(MildError::HypothesisViolated {
                    condition: name.into(),
                    degree: rep.witness_degree.unwrap_or(0),
                    detail: format!("the model is not {name} over {}", h.ring()),
                })
            }
            Verdict::Uncertified => notes.push(format!("{name}: uncertified in degrees 0..={}", rep.window)),
            Verdict::True => {}
        }
    }
    Ok(notes)
}

fn power_report(model: &Arc<FreeGradedAlgebra>, n: usize, opts: &BatteryOptions, mode: RingEnlarge, kind: &str) -> Result<InvariantReport> {
    if n == 0 {
        return Err(MildError::Invalid("n must be at least 1".into()));
    }
    let notes = mildness_notes(model, opts)?;
    let input_ring = model.ring().clone();
    let ring = plan_ring(&input_ring, opts.m_max, mode)?;
    let cap = opts.window + 1;
    let a = model.with_ring(&ring).with_cap(cap);
    let mu = mu_n(&a, n, cap);
    let seeds = diagonal_seeds(&a, n);
    let mut rep = run_battery(&mu, seeds, opts)?;
    rep.kind = kind.into();
    rep.source = model.name().to_string();
    rep.n = Some(n);
    rep.input_ring = input_ring;
    rep.notes = notes;
    Ok(rep)
}

/// `TC_n` / `tc_n` bracket report for a commutative model.
pub fn tc_report(model: &Arc<FreeGradedAlgebra>, n: usize, opts: &BatteryOptions, mode: RingEnlarge) -> Result<InvariantReport> {
    if model.flavor() != Flavor::Commutative {
        return Err(MildError::Invalid("tc expects a commutative model (cdga)".into()));
    }
    power_report(model, n, opts, mode, "tc")
}

/// Whether every generator has a differential without linear part.
pub fn is_decomposable(model: &FreeGradedAlgebra) -> bool {
    (0..model.num_gens()).all(|i| model.gen_differential(i).terms().all(|(m, _)| m.len() >= 2))
}

/// `ATC_n` / `Atc_n` bracket report for a free tensor-algebra model.
pub fn atc_report(model: &Arc<FreeGradedAlgebra>, n: usize, opts: &BatteryOptions, mode: RingEnlarge) -> Result<InvariantReport> {
    if model.flavor() != Flavor::Tensor {
        return Err(MildError::Invalid("atc expects a tensor-algebra model (dga)".into()));
    }
    if !is_decomposable(model) {
        return Err(MildError::HypothesisViolated {
            condition: "decomposable".into(),
            degree: 0,
            detail: format!("{} has a differential with a linear part", model.name()),
        });
    }
    power_report(model, n, opts, mode, "atc")
}

#[cfg(test)]
mod tests;
