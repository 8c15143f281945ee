//! Schur multipliers from free presentations, covers and the Schur–Hopf
//! comparison.
//!
//! For `F/θ ≅ Q` put `F′ = F/[θ,1]` and `θ′ = θ/[θ,1]`, which is central.
//! The multiplier is the part of the kernel algebra `F′(θ′)/Δ_{θ′1}` coming
//! from pairs in `θ′ ∧ [1′,1′]`.

use crate::abgroup::{Quotient, Subgroup};
use crate::algebra::{find_idempotents, is_homomorphism, quotient, search_homs, enumerate_homs, FiniteAlgebra, FreePresentation, HomSearch};
use crate::cohomology::{h2, hom_group, transgression_map};
use crate::commutator::{center, commutator, is_central};
use crate::congruence::Partition;
use crate::error::{Error, Result};
use crate::extension::{
    extract_cocycle, idempotent_ideal_iso, split_data, CentralExtension, Cocycle, IdealIso, KernelAlgebra, SplitData,
};
use crate::report::{Report, Reportable};
use crate::termlang::VarietySpec;

/// The multiplier of `Q` computed from one presentation.
#[derive(Debug, Clone)]
pub struct SchurMultiplier {
    pub f_size: usize,
    /// `F′ = F/[θ,1]` and the quotient map `F → F′`.
    pub f_prime: FiniteAlgebra,
    pub kappa: Vec<usize>,
    /// `F′ → Q`.
    pub eval: Vec<usize>,
    pub theta_prime: Partition,
    /// The extension `F′ → F′/θ′`, the map `ξ` and the commutator `[1′,1′]`.
    pub split: SplitData,
    /// Kernel-algebra elements of the multiplier, increasing.
    pub elements: Vec<usize>,
    /// The multiplier as a kernel algebra on `0..elements.len()`.
    pub algebra: KernelAlgebra,
    /// The ideal at an idempotent of `F′`, when there is one.
    pub ideal: Option<IdealIso>,
}

impl SchurMultiplier {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        let m = self.algebra.moduli();
        Quotient::new(&Subgroup::full(m), &Subgroup::zero(m)).map(|q| q.invariant_factors()).unwrap_or_default()
    }

    pub fn kernel(&self) -> &KernelAlgebra {
        self.split.left.kernel()
    }

    /// Position of a kernel element inside the multiplier.
    pub fn position(&self, k: usize) -> Option<usize> {
        self.elements.binary_search(&k).ok()
    }
}

impl Reportable for SchurMultiplier {
    fn write_to(&self, r: &mut Report) {
        r.field("f_size", self.f_size);
        r.field("f_prime_size", self.f_prime.size());
        r.field("kernel_size", self.kernel().size());
        r.field("multiplier_order", self.order());
        r.list("invariant_factors", &self.invariant_factors());
        r.field("idempotent", self.ideal.is_some());
        if let Some(i) = &self.ideal {
            r.field("ideal_size", i.ideal.len());
        }
    }
}

pub fn schur_multiplier(p: &FreePresentation, v: &VarietySpec, budget: usize) -> Result<SchurMultiplier> {
    let f = p.f();
    let c = commutator(f, p.theta.partition(), &Partition::total(f.size()), budget)?;
    let (f_prime, kappa) = quotient(f, c.partition())?;
    let mut eval = vec![0; f_prime.size()];
    for (x, &k) in kappa.iter().enumerate() {
        eval[k] = p.eval[x];
    }
    let theta_prime = Partition::from_labels(&eval);
    if !is_central(&f_prime, &theta_prime, budget)? {
        return Err(Error::VerificationFailed("θ/[θ,1] is not central".into()));
    }
    let split = split_data(&f_prime, &theta_prime, v, budget)?;
    let elements = split.commutator_part();
    let kernel = split.left.kernel();
    let sub = kernel.algebra().restrict(&format!("M({})", p.target.name()), &elements)?;
    let zero = elements.binary_search(&kernel.zero()).map_err(|_| Error::VerificationFailed("multiplier misses 0".into()))?;
    let algebra = KernelAlgebra::from_abelian(sub, zero, &v.compiled_difference())?;
    let ideal = match find_idempotents(&f_prime).first() {
        Some(&u) => {
            let meet = theta_prime.meet(split.gamma.partition())?;
            Some(idempotent_ideal_iso(&f_prime, &meet, u, v, budget)?)
        }
        None => None,
    };
    Ok(SchurMultiplier { f_size: f.size(), f_prime, kappa, eval, theta_prime, split, elements, algebra, ideal })
}

// ---------------------------------------------------------------------------
// Invariance

/// `σ : F₁′ → F₂′` over `Q`, sending each generator to its first (or last)
/// preimage in `F₂`.
fn lift_between(p1: &FreePresentation, m1: &SchurMultiplier, m2: &SchurMultiplier, last: bool) -> Result<Vec<usize>> {
    let images: Vec<usize> = p1
        .images
        .iter()
        .map(|&q| {
            let mut it = (0..m2.f_prime.size()).filter(|&x| m2.eval[x] == q);
            let x = if last { it.next_back() } else { it.next() };
            x.ok_or(Error::NotSurjective)
        })
        .collect::<Result<_>>()?;
    let on_f = p1.free.eval_map(&m2.f_prime, &images);
    let mut sigma = vec![usize::MAX; m1.f_prime.size()];
    for (x, &k) in m1.kappa.iter().enumerate() {
        if sigma[k] == usize::MAX {
            sigma[k] = on_f[x];
        } else if sigma[k] != on_f[x] {
            return Err(Error::VerificationFailed("[θ,1] is not in the kernel of the lift".into()));
        }
    }
    if !is_homomorphism(&m1.f_prime, &m2.f_prime, &sigma) || (0..sigma.len()).any(|x| m2.eval[sigma[x]] != m1.eval[x]) {
        return Err(Error::VerificationFailed("lift is not a homomorphism over Q".into()));
    }
    Ok(sigma)
}

/// `σ̂([a; b]) = [σa; σb]` on kernel elements, restricted to the multipliers.
fn induced(sigma: &[usize], m1: &SchurMultiplier, m2: &SchurMultiplier) -> Result<Vec<usize>> {
    let (e1, e2) = (&m1.split.left, &m2.split.left);
    let mut hat = vec![usize::MAX; m1.order()];
    for a in 0..m1.f_prime.size() {
        for b in 0..m1.f_prime.size() {
            let Some(pos) = e1.class(a, b).and_then(|k| m1.position(k)) else { continue };
            let img = e2
                .class(sigma[a], sigma[b])
                .and_then(|k| m2.position(k))
                .ok_or_else(|| Error::VerificationFailed("σ̂ leaves the multiplier".into()))?;
            if hat[pos] == usize::MAX {
                hat[pos] = img;
            } else if hat[pos] != img {
                return Err(Error::VerificationFailed("σ̂ is not well defined".into()));
            }
        }
    }
    Ok(hat)
}

/// Maps between the multipliers of two presentations of `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub factors: [Vec<u64>; 2],
    pub sigma_hat: Vec<usize>,
    pub lambda_hat: Vec<usize>,
    pub homomorphisms: bool,
    /// `λ̂∘σ̂ = id` and `σ̂∘λ̂ = id`.
    pub inverse_pair: bool,
    /// `σ̂` does not depend on the chosen generator preimages.
    pub choice_independent: bool,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.factors[0] == self.factors[1] && self.homomorphisms && self.inverse_pair
    }
}

impl Reportable for InvarianceReport {
    fn write_to(&self, r: &mut Report) {
        r.list("invariant_factors_1", &self.factors[0]);
        r.list("invariant_factors_2", &self.factors[1]);
        r.field("homomorphisms", self.homomorphisms);
        r.field("inverse_pair", self.inverse_pair);
        r.field("choice_independent", self.choice_independent);
        r.field("invariant", self.holds());
    }
}

pub fn invariance_check(p1: &FreePresentation, p2: &FreePresentation, v: &VarietySpec, budget: usize) -> Result<InvarianceReport> {
    if p1.target.size() != p2.target.size() || !is_homomorphism(&p1.target, &p2.target, &(0..p1.target.size()).collect::<Vec<_>>()) {
        return Err(Error::HypothesisFailed("presentations have different targets".into()));
    }
    let m1 = schur_multiplier(p1, v, budget)?;
    let m2 = schur_multiplier(p2, v, budget)?;
    let sigma = lift_between(p1, &m1, &m2, false)?;
    let lambda = lift_between(p2, &m2, &m1, false)?;
    let sigma_hat = induced(&sigma, &m1, &m2)?;
    let lambda_hat = induced(&lambda, &m2, &m1)?;
    let homomorphisms = is_homomorphism(m1.algebra.algebra(), m2.algebra.algebra(), &sigma_hat)
        && is_homomorphism(m2.algebra.algebra(), m1.algebra.algebra(), &lambda_hat);
    let inverse_pair = (0..m1.order()).all(|x| lambda_hat[sigma_hat[x]] == x) && (0..m2.order()).all(|y| sigma_hat[lambda_hat[y]] == y);
    let other = induced(&lift_between(p1, &m1, &m2, true)?, &m1, &m2)?;
    Ok(InvarianceReport {
        factors: [m1.invariant_factors(), m2.invariant_factors()],
        choice_independent: other == sigma_hat,
        sigma_hat,
        lambda_hat,
        homomorphisms,
        inverse_pair,
    })
}

// ---------------------------------------------------------------------------
// Covers

/// `π : M ⊗^S Q → Q` with its certificates.
#[derive(Debug, Clone)]
pub struct Cover {
    pub multiplier: SchurMultiplier,
    pub cocycle: Cocycle,
    pub extension: CentralExtension,
    /// `|F′(θ′)/Δ|`, `|multiplier|`, `|F′/[1′,1′](β′)/Δ|`.
    pub split_sizes: [usize; 3],
    pub kernel_in_commutator: bool,
    pub kernel_in_center: bool,
    pub lifts_checked: usize,
    pub lifts_found: usize,
}

impl Cover {
    pub fn is_cover(&self) -> bool {
        self.kernel_in_commutator && self.kernel_in_center
    }
}

impl Reportable for Cover {
    fn write_to(&self, r: &mut Report) {
        r.field("multiplier_order", self.multiplier.order());
        r.list("invariant_factors", &self.multiplier.invariant_factors());
        r.field("cover_size", self.extension.algebra().size());
        r.list("split_sizes", &self.split_sizes);
        r.field("kernel_in_commutator", self.kernel_in_commutator);
        r.field("kernel_in_center", self.kernel_in_center);
        r.field("lifts_checked", self.lifts_checked);
        r.field("lifts_found", self.lifts_found);
    }
}

/// Builds the cover from a splitting `k ↦ k − s(ξ k)` of the kernel algebra
/// onto the multiplier; checks lifting against `family`.
pub fn cover_construct(
    p: &FreePresentation,
    v: &VarietySpec,
    family: &[CentralExtension],
    budget: usize,
    limit: usize,
) -> Result<Cover> {
    let m = schur_multiplier(p, v, budget)?;
    if m.ideal.is_none() {
        return Err(Error::NoIdempotent);
    }
    let split = &m.split;
    let k = split.left.kernel();
    if !split.well_defined {
        return Err(Error::SplittingNotFound);
    }
    let s = split.section()?.ok_or(Error::SplittingNotFound)?;
    let p1: Vec<usize> = (0..k.size())
        .map(|x| m.position(k.sub(x, s[split.xi[x]])).ok_or(Error::SplittingNotFound))
        .collect::<Result<_>>()?;
    if m.elements.iter().enumerate().any(|(i, &x)| p1[x] != i) || !is_homomorphism(k.algebra(), m.algebra.algebra(), &p1) {
        return Err(Error::SplittingNotFound);
    }

    let q = &p.target;
    let ext = &split.left;
    let mut to_quot = vec![usize::MAX; q.size()];
    for x in 0..m.f_prime.size() {
        to_quot[m.eval[x]] = ext.projection()[x];
    }
    let t = extract_cocycle(ext, &ext.minimal_lifting())?;
    let cocycle = t.pullback(ext.quotient().signature(), ext.quotient().size(), &to_quot).push(&p1);
    let extension = CentralExtension::from_basic(&m.algebra, q, &cocycle)?;

    let a = extension.algebra();
    let one = Partition::total(a.size());
    let kernel = Partition::from_labels(extension.projection());
    let gamma = commutator(a, &one, &one, budget)?;
    let zeta = center(a, v, budget)?;

    let (mut lifts_checked, mut lifts_found) = (0, 0);
    for member in family {
        let rho = member.projection();
        for g in enumerate_homs(q, member.quotient(), None, limit)? {
            lifts_checked += 1;
            let pi = extension.projection();
            let allowed = |x: usize, y: usize| rho[y] == g.map[pi[x]];
            let opts = HomSearch { limit, stop_after: Some(1), allowed: Some(&allowed), ..HomSearch::default() };
            lifts_found += !search_homs(a, member.algebra(), &opts)?.is_empty() as usize;
        }
    }

    Ok(Cover {
        split_sizes: [k.size(), m.order(), split.right.kernel().size()],
        kernel_in_commutator: kernel.leq(gamma.partition()),
        kernel_in_center: kernel.leq(zeta.partition()),
        multiplier: m,
        cocycle,
        extension,
        lifts_checked,
        lifts_found,
    })
}

// ---------------------------------------------------------------------------
// Schur–Hopf

/// `im δ` from the cover against `Hom(M, E)` and `H²(Q, E)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurHopfReport {
    pub multiplier: Vec<u64>,
    pub hom_m_e: Vec<u64>,
    pub im_delta: Vec<u64>,
    pub h2_q_e: Vec<u64>,
    pub delta_injective: bool,
    /// `im δ = H²(Q, E)`.
    pub delta_onto: bool,
}

impl SchurHopfReport {
    pub fn im_matches_hom(&self) -> bool {
        self.im_delta == self.hom_m_e && self.delta_injective
    }
}

impl Reportable for SchurHopfReport {
    fn write_to(&self, r: &mut Report) {
        r.list("invariant_factors.multiplier", &self.multiplier);
        r.list("invariant_factors.hom_m_e", &self.hom_m_e);
        r.list("invariant_factors.im_delta", &self.im_delta);
        r.list("invariant_factors.h2_q_e", &self.h2_q_e);
        r.field("delta_injective", self.delta_injective);
        r.field("delta_onto", self.delta_onto);
        r.field("im_matches_hom", self.im_matches_hom());
    }
}

pub fn schur_hopf_check(p: &FreePresentation, e: &KernelAlgebra, v: &VarietySpec, budget: usize) -> Result<SchurHopfReport> {
    let cover = match cover_construct(p, v, &[], budget, 0) {
        Err(Error::NoIdempotent) => return Err(Error::HypothesisFailed("F/[θ,1] has no idempotent".into())),
        other => other?,
    };
    let q = &p.target;
    let m = &cover.multiplier.algebra;
    let homs = hom_group(m.algebra(), e, Some(m.zero()))?;
    let he = h2(q, e, v)?;
    let delta = transgression_map(&cover.cocycle, q, m.size(), e)?;
    let b2 = he.b2().subgroup();
    let image = delta.image(homs.subgroup());
    if !he.z2().subgroup().contains_all(&image) {
        return Err(Error::IncompatibleResult("transgression leaves Z²".into()));
    }
    let im = image.join(b2);
    let im_delta = Quotient::new(&im, b2)?.invariant_factors();
    Ok(SchurHopfReport {
        multiplier: cover.multiplier.invariant_factors(),
        hom_m_e: homs.invariant_factors(),
        im_delta,
        h2_q_e: he.invariant_factors(),
        delta_injective: homs.subgroup().intersect(&delta.preimage(b2)).is_zero(),
        delta_onto: im == *he.z2().subgroup(),
    })
}
