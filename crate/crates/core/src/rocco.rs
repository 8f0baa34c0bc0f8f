//! The group ν(P) carrying the non-abelian tensor square `[P, P^ψ]`, the
//! exterior square and the commutator map μ.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coset::{EnumerationError, EnumerationLimits};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Homomorphism, Subgroup};
use crate::homology::{abelian_invariants, abelian_invariants_of_quotient, AbelianInvariants};
use crate::weakcomm::{
    doubled, generator_elements, p_group_prime, psi, realize, same_group, source_presentation,
    BuildOptions, RelatorScope, XpBundle,
};
use crate::word::{commutator, conjugate, Presentation};

pub fn nu_presentation(p: &FiniteGroup) -> Result<Presentation> {
    nu_presentation_with(p, RelatorScope::All)
}

/// `R ∪ R^ψ` and, for nontrivial `g1, g2` and `g3` in scope, the two words
/// `[g1,g2^ψ]^g3 [g1^g3,(g2^g3)^ψ]^-1` and `[g1,g2^ψ]^g3 ([g1,g2^ψ]^(g3^ψ))^-1`.
pub fn nu_presentation_with(p: &FiniteGroup, scope: RelatorScope) -> Result<Presentation> {
    p_group_prime(p)?;
    let src = source_presentation(p)?;
    let k = src.ngens();
    let (names, mut rels) = doubled(src);
    let words = p.canonical_words();
    let nontrivial: Vec<Elem> = p.elements().skip(1).collect();
    let gens = generator_elements(p);
    let (outer, conj): (&[Elem], Vec<Elem>) = match scope {
        RelatorScope::All => (&nontrivial, p.elements().collect()),
        RelatorScope::Generators => (&nontrivial, gens.clone()),
        RelatorScope::GeneratorTriples => (&gens, gens.clone()),
    };
    for &g1 in outer {
        for &g2 in outer {
            let c = commutator(&words[g1.index()], &psi(&words[g2.index()], k));
            for &g3 in &conj {
                let w3 = &words[g3.index()];
                let lhs = conjugate(&c, w3);
                let h1 = p.conjugate(g1, g3);
                let h2 = p.conjugate(g2, g3);
                let mid = commutator(&words[h1.index()], &psi(&words[h2.index()], k));
                rels.push(lhs.mul(&mid.inverse()));
                rels.push(lhs.mul(&conjugate(&c, &psi(w3, k)).inverse()));
            }
        }
    }
    let mut out = Presentation::new(names, rels)?;
    out.name = src.name.as_ref().map(|n| format!("nu_{n}"));
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct NuBundle {
    pub source: Arc<FiniteGroup>,
    pub presentation: Presentation,
    pub nu: Arc<FiniteGroup>,
    pub embed: Homomorphism,
    pub embed_psi: Homomorphism,
    /// `x, x_psi -> x`
    pub alpha: Homomorphism,
    /// `[P, P^ψ]`
    pub tensor: Subgroup,
    pub delta: Subgroup,
    pub tensor_group: Arc<FiniteGroup>,
    pub tensor_inclusion: Homomorphism,
    /// `[P, P^ψ] / Δ`
    pub exterior: Arc<FiniteGroup>,
    pub exterior_projection: Homomorphism,
    /// Exterior square to P, `g ∧ h -> [g, h]`.
    pub mu: Homomorphism,
    /// `(ker α ∩ [P, P^ψ]) / Δ`
    pub h2_tensor: AbelianInvariants,
    /// `ker μ` inside the exterior square.
    pub h2_mu_kernel: AbelianInvariants,
    /// Relator family actually enumerated.
    pub enumerated_scope: RelatorScope,
}

/// Coset budget for enumerating a relator subfamily before falling back to
/// a larger one.
pub const SUBFAMILY_MAX_COSETS: usize = 1_000_000;

/// Builds ν(P) for the relator scope in `opts`.
///
/// Smaller relator families are tried first. A subfamily presents a group
/// mapping onto ν(P), so once every declared relator is checked to hold in
/// its finite realization the two are the same group. A subfamily that
/// overruns its coset budget or fails the check moves on to the next one.
pub fn nu_group(p: &Arc<FiniteGroup>, opts: &BuildOptions<'_>) -> Result<NuBundle> {
    let declared = nu_presentation_with(p, opts.scope)?;
    let ladder: &[RelatorScope] = match opts.scope {
        RelatorScope::All => &[RelatorScope::GeneratorTriples, RelatorScope::Generators],
        RelatorScope::Generators => &[RelatorScope::GeneratorTriples],
        RelatorScope::GeneratorTriples => &[],
    };
    let capped = BuildOptions {
        limits: EnumerationLimits {
            max_cosets: opts.limits.max_cosets.min(SUBFAMILY_MAX_COSETS),
            ..opts.limits
        },
        ..*opts
    };
    for &scope in ladder {
        let pres = nu_presentation_with(p, scope)?;
        match realize(&pres, p.ngens(), &capped) {
            Ok(g) => match g.with_presentation(declared.clone()) {
                Ok(nu) => return assemble(p, declared, nu, scope),
                Err(Error::RelatorViolated { .. }) => continue,
                Err(e) => return Err(e),
            },
            Err(Error::Enumeration(EnumerationError::LimitExceeded { .. })) => continue,
            Err(e) => return Err(e),
        }
    }
    let nu = realize(&declared, p.ngens(), opts)?;
    assemble(p, declared, nu, opts.scope)
}

/// Builds ν(P) by enumerating the presentation for `opts.scope` as is.
pub fn nu_group_direct(p: &Arc<FiniteGroup>, opts: &BuildOptions<'_>) -> Result<NuBundle> {
    let declared = nu_presentation_with(p, opts.scope)?;
    let nu = realize(&declared, p.ngens(), opts)?;
    assemble(p, declared, nu, opts.scope)
}

fn assemble(
    p: &Arc<FiniteGroup>,
    presentation: Presentation,
    nu: FiniteGroup,
    scope: RelatorScope,
) -> Result<NuBundle> {
    let nu = Arc::new(nu);
    let k = p.ngens();
    let embed = Homomorphism::new(
        p.clone(),
        nu.clone(),
        (0..k).map(|i| nu.generator(i)).collect(),
    )?;
    let embed_psi = Homomorphism::new(
        p.clone(),
        nu.clone(),
        (k..2 * k).map(|i| nu.generator(i)).collect(),
    )?;
    let gens = p.generators();
    let alpha = Homomorphism::new(nu.clone(), p.clone(), [gens.clone(), gens].concat())?;
    let mut pairs = Vec::new();
    let mut diag = Vec::new();
    for g in p.elements() {
        for h in p.elements() {
            let c = nu.commutator(embed.apply(g), embed_psi.apply(h));
            pairs.push(c);
            if g == h {
                diag.push(c);
            }
        }
    }
    let tensor = nu.subgroup_closure(pairs);
    let delta = nu.subgroup_closure(diag);
    let (tensor_group, tensor_inclusion) = nu.subgroup_as_group(&tensor)?;
    let mut local = vec![u32::MAX; nu.order()];
    for e in tensor_group.elements() {
        local[tensor_inclusion.apply(e).index()] = e.0;
    }
    let delta_local =
        tensor_group.subgroup_closure(delta.generators().iter().map(|e| Elem(local[e.index()])));
    let (exterior, exterior_projection) = tensor_group.quotient(&delta_local)?;
    let mu_imgs = tensor
        .generators()
        .iter()
        .map(|&t| alpha.apply(t))
        .collect();
    let mu = Homomorphism::new(exterior.clone(), p.clone(), mu_imgs)?;
    let h2_mu_kernel = abelian_invariants(&exterior, &mu.kernel())?;
    let k_alpha = nu.intersection(&alpha.kernel(), &tensor);
    let h2_tensor = abelian_invariants_of_quotient(&nu, &k_alpha, &delta)?;
    Ok(NuBundle {
        source: p.clone(),
        presentation,
        nu,
        embed,
        embed_psi,
        alpha,
        tensor,
        delta,
        tensor_group,
        tensor_inclusion,
        exterior,
        exterior_projection,
        mu,
        h2_tensor,
        h2_mu_kernel,
        enumerated_scope: scope,
    })
}

/// `H2(P)` as `(ker α ∩ [P, P^ψ]) / Δ`.
pub fn h2_via_mu(b: &NuBundle) -> AbelianInvariants {
    b.h2_tensor.clone()
}

/// Both kernel computations agree.
pub fn h2_routes_agree(b: &NuBundle) -> bool {
    b.h2_tensor == b.h2_mu_kernel
}

/// `|ν| = |P|^2 |[P, P^ψ]|` and `μ` maps onto `P'`.
pub fn check_nu_shape(b: &NuBundle) -> bool {
    let n = b.source.order();
    b.nu.order() == n * n * b.tensor.order()
        && b.delta.is_subset(&b.tensor)
        && b.mu.image().same_elements(&b.source.derived_subgroup())
}

/// `Δ ⊆ Z(ν) ∩ ν'`, checked exhaustively.
pub fn check_delta_central(b: &NuBundle) -> bool {
    b.delta.is_subset(&b.nu.center()) && b.delta.is_subset(&b.nu.derived_subgroup())
}

/// `𝔛/R -> ν/Δ`, identity on generators, is a relator-respecting bijection.
pub fn check_quotient_iso(xb: &XpBundle, nb: &NuBundle) -> Result<bool> {
    if !same_group(&xb.source, &nb.source) {
        return Err(Error::CodomainMismatch);
    }
    let (xq, _) = xb.xp.quotient(&xb.r)?;
    let (nq, _) = nb.nu.quotient(&nb.delta)?;
    let gens = nq.generators();
    match Homomorphism::new(xq.clone(), nq.clone(), gens) {
        Ok(f) => Ok(xq.order() == nq.order() && f.is_injective()),
        Err(Error::RelatorViolated { .. } | Error::NotHomomorphism { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The map ν(P) -> ν(Q) induced by an epimorphism `f: P -> Q`.
pub fn induced_nu_map(f: &Homomorphism, from: &NuBundle, to: &NuBundle) -> Result<Homomorphism> {
    if !same_group(f.domain(), &from.source) || !same_group(f.codomain(), &to.source) {
        return Err(Error::CodomainMismatch);
    }
    if !f.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let imgs: Vec<Elem> = f
        .generator_images()
        .iter()
        .map(|&q| to.embed.apply(q))
        .chain(f.generator_images().iter().map(|&q| to.embed_psi.apply(q)))
        .collect();
    Homomorphism::new(from.nu.clone(), to.nu.clone(), imgs)
}

/// Whether the generator-scope and full-scope presentations, each
/// enumerated directly, give groups of the same order.
pub fn nu_scopes_agree(p: &Arc<FiniteGroup>, opts: &BuildOptions<'_>) -> Result<bool> {
    let full = nu_group_direct(
        p,
        &BuildOptions {
            scope: RelatorScope::All,
            ..*opts
        },
    )?;
    let small = nu_group_direct(
        p,
        &BuildOptions {
            scope: RelatorScope::Generators,
            ..*opts
        },
    )?;
    Ok(full.nu.order() == small.nu.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weakcomm::xp_group;

    fn group(text: &str) -> Arc<FiniteGroup> {
        let p = crate::parse_presentation(text).unwrap();
        let t = crate::enumerate(&p, &[], &crate::EnumerationLimits::default()).unwrap();
        Arc::new(FiniteGroup::regular_representation(&p, &t).unwrap())
    }

    #[test]
    fn c2() {
        let c2 = group("gens x; rels x^2");
        assert_eq!(nu_presentation(&c2).unwrap().relators().len(), 6);
        let b = nu_group(&c2, &BuildOptions::default()).unwrap();
        // ν(C2) is dihedral of order 8 with [C2, C2^ψ] = C2
        assert_eq!(b.nu.order(), 8);
        assert_eq!(b.tensor.order(), 2);
        assert!(b.h2_tensor.is_trivial() && h2_routes_agree(&b));
        assert!(check_nu_shape(&b) && check_delta_central(&b));
        let direct = nu_group_direct(&c2, &BuildOptions::default()).unwrap();
        assert_eq!(*direct.nu, *b.nu);
        let xb = xp_group(&c2, &BuildOptions::default()).unwrap();
        assert!(check_quotient_iso(&xb, &b).unwrap());
    }

    #[test]
    fn c3_example() {
        let c3 = group("gens x; rels x^3");
        let b = nu_group(&c3, &BuildOptions::default()).unwrap();
        assert_eq!(b.nu.order(), 27);
        assert_eq!(b.nu.nilpotency_class(), Some(2));
        assert_eq!(b.nu.exponent(), 3);
        assert_eq!(
            abelian_invariants(&b.nu, &b.tensor).unwrap().factors(),
            &[3]
        );
        assert!(!b.nu.is_powerful(3).unwrap());
    }

    #[test]
    fn klein_four() {
        let v = group("gens a,b; rels a^2,b^2,[a,b]");
        let b = nu_group(&v, &BuildOptions::default()).unwrap();
        assert_eq!(h2_via_mu(&b).factors(), &[2]);
        assert!(h2_routes_agree(&b) && check_delta_central(&b) && check_nu_shape(&b));
        assert!(nu_scopes_agree(&v, &BuildOptions::default()).unwrap());
        assert_eq!(b.enumerated_scope, RelatorScope::GeneratorTriples);
        let direct = nu_group_direct(&v, &BuildOptions::default()).unwrap();
        assert_eq!(*direct.nu, *b.nu);
    }

    #[test]
    fn trivial() {
        let t = group("gens a; rels a");
        assert_eq!(
            nu_group(&t, &BuildOptions::default()).unwrap().nu.order(),
            1
        );
    }
}
