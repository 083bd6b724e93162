//! The projections `Γ_m`, `p_m`, their relative models and the pushout
//! inclusion `j_m`.

use std::sync::Arc;

use crate::cdga::{mu_n, AlgebraMorphism, Codomain, Element, FreeGradedAlgebra, HomogeneousIdeal};
use crate::cohomology::{induced_map, CohomologyTable};
use crate::error::{MildError, Result};
use crate::models::{relative_model, ModelOptions, RelativeModel};

use super::kernel::KernelIdeal;

/// Shared data of one battery run: `φ`, its kernel ideal and the two
/// cohomology tables, all valid up to `window`.
#[derive(Clone, Debug)]
pub struct Context {
    pub phi: AlgebraMorphism,
    pub window: usize,
    pub opts: ModelOptions,
    pub kernel: KernelIdeal,
    pub h_source: CohomologyTable,
    pub h_target: CohomologyTable,
}

impl Context {
    pub fn new(phi: &AlgebraMorphism, window: usize, opts: ModelOptions, seeds: Vec<Element>) -> Result<Self> {
        let cap = window + 1;
        for c in [phi.source().cap(), phi.target().cap()] {
            if c < cap {
                return Err(MildError::BeyondCap { degree: cap, cap: c });
            }
        }
        crate::models::check_cochain_surjective(phi, cap)?;
        let kernel = super::kernel::kernel_ideal(phi, cap, seeds)?;
        let h_source = CohomologyTable::of_algebra(phi.source(), window)?;
        let h_target = CohomologyTable::compute(phi.target(), 0, window)?;
        Ok(Context { phi: phi.clone(), window, opts, kernel, h_source, h_target })
    }

    pub fn base(&self) -> &Arc<FreeGradedAlgebra> {
        self.phi.source()
    }

    /// First degree where `H(f)` fails to be injective, for `f` out of the base.
    pub fn first_non_injective(&self, f: &AlgebraMorphism, tgt: &CohomologyTable) -> Result<Option<usize>> {
        for k in 0..=self.window {
            if !induced_map(f, &self.h_source, tgt, k)?.is_injective() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

fn identity_images(n: usize) -> Vec<Element> {
    (0..n).map(Element::generator).collect()
}

/// `Γ_m: A -> A/(ker φ)^{m+1}`.
#[derive(Clone, Debug)]
pub struct GammaSide {
    pub m: usize,
    pub ideal: Arc<HomogeneousIdeal>,
    pub gamma: AlgebraMorphism,
    pub h_target: CohomologyTable,
}

pub fn build_gamma(ctx: &Context, m: usize) -> Result<GammaSide> {
    let a = ctx.base();
    let ideal = ctx.kernel.ideal.power(m + 1, a.cap());
    let target = Codomain::quotient(a.clone(), ideal.clone())?;
    let gamma = AlgebraMorphism::new(a.clone(), target.clone(), identity_images(a.num_gens()))?;
    let h_target = CohomologyTable::compute(&target, 0, ctx.window)?;
    Ok(GammaSide { m, ideal, gamma, h_target })
}

impl GammaSide {
    /// Relative model `ι_m: A -> A⊗ΛV` of `Γ_m`.
    pub fn model(&self, ctx: &Context) -> Result<RelativeModel> {
        relative_model(&self.gamma, ctx.base().flavor(), ctx.window, ctx.opts)
    }
}

/// `p_m: A^{⊗m+1} -> A^{⊗m+1}/(ker φ)^{⊗m+1}`, its model `i_m` and the
/// pushout `j_m: A -> A⊗ΛW` along `μ_{m+1}`.
#[derive(Clone, Debug)]
pub struct PSide {
    pub m: usize,
    pub mu: AlgebraMorphism,
    pub p: AlgebraMorphism,
    pub model: RelativeModel,
    pub pushout: Arc<FreeGradedAlgebra>,
    pub j: AlgebraMorphism,
    pub mu_bar: AlgebraMorphism,
}

fn embed(e: &Element, offset: usize) -> Element {
    let mut out = Element::zero();
    for (m, c) in e.terms() {
        out.add_term(crate::cdga::Monomial(m.0.iter().map(|&g| g + offset as u16).collect()), c.clone());
    }
    out
}

/// Generators `g_1⟨1⟩ ⋯ g_{m+1}⟨m+1⟩` of `(ker φ)^{⊗m+1}` up to the cap.
fn tensor_power_ideal(ctx: &Context, am: &Arc<FreeGradedAlgebra>, m: usize) -> Result<Arc<HomogeneousIdeal>> {
    let a = ctx.base();
    let na = a.num_gens();
    let cap = am.cap();
    let gens = ctx.kernel.ideal.generators();
    let degs = ctx.kernel.ideal.generator_degrees();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Element, usize)> = vec![(0, Element::one(), 0)];
    while let Some((copy, prod, deg)) = stack.pop() {
        if copy == m + 1 {
            out.push(prod);
            continue;
        }
        for (g, &d) in gens.iter().zip(degs) {
            if deg + d > cap {
                continue;
            }
            let p = am.multiply(&prod, &embed(g, copy * na));
            if !p.is_zero() {
                stack.push((copy + 1, p, deg + d));
            }
        }
    }
    out.reverse();
    HomogeneousIdeal::new(am, out)
}

pub fn build_p(ctx: &Context, m: usize) -> Result<PSide> {
    let a = ctx.base();
    let na = a.num_gens();
    let cap = a.cap();
    let flavor = a.flavor();
    let ring = a.ring();
    let mu = mu_n(a, m + 1, cap);
    let am = mu.source().clone();
    let ideal = tensor_power_ideal(ctx, &am, m)?;
    let target = Codomain::quotient(am.clone(), ideal)?;
    let p = AlgebraMorphism::new(am.clone(), target, identity_images(am.num_gens()))?;
    let model = relative_model(&p, flavor, ctx.window, ctx.opts)?;

    let ext = &model.extended;
    let nam = am.num_gens();
    let letter = |g: u16| -> u16 {
        let g = g as usize;
        (if g < nam { g % na } else { na + g - nam }) as u16
    };
    let mut gens = a.gens().to_vec();
    gens.extend(ext.gens()[nam..].iter().cloned());
    let scratch = FreeGradedAlgebra::new("scratch", flavor, ring, gens.clone(), vec![Element::zero(); gens.len()], cap)?;
    let bar = |e: &Element| -> Element {
        let mut out = Element::zero();
        for (mono, c) in e.terms() {
            let word: Vec<u16> = mono.0.iter().map(|&g| letter(g)).collect();
            if let Some((n, neg)) = scratch.normalize_monomial(&word) {
                out.add_term(n, if neg { -c } else { c.clone() });
            }
        }
        out
    };
    let mut diff: Vec<Element> = (0..na).map(|i| a.gen_differential(i).clone()).collect();
    diff.extend((nam..ext.num_gens()).map(|w| bar(ext.gen_differential(w))));
    let pushout = FreeGradedAlgebra::new(format!("{}+W{m}", a.name()), flavor, ring, gens, diff, cap)?;
    let j = AlgebraMorphism::new(a.clone(), Codomain::free(pushout.clone()), identity_images(na))?;
    let mu_bar = AlgebraMorphism::new(
        ext.clone(),
        Codomain::free(pushout.clone()),
        (0..ext.num_gens()).map(|g| Element::generator(letter(g as u16) as usize)).collect(),
    )?;
    mu_bar.check_chain_map(cap)?;
    let side = PSide { m, mu, p, model, pushout, j, mu_bar };
    if !side.square_commutes()? {
        return Err(MildError::Invalid(format!("pushout square at level {m} does not commute")));
    }
    Ok(side)
}

impl PSide {
    /// `j_m∘μ_{m+1} = μ̄_{m+1}∘i_m` on generators of `A^{⊗m+1}`.
    pub fn square_commutes(&self) -> Result<bool> {
        let left = self.mu.then(&self.j)?;
        let right = self.model.inclusion.then(&self.mu_bar)?;
        Ok(left.agrees_with(&right))
    }

    /// Number of generators in `W_(m)`.
    pub fn w_count(&self) -> usize {
        self.model.added_gens().len()
    }
}
