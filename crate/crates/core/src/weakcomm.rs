//! The weak commutativity construction 𝔛(P) of a finite p-group and its
//! canonical maps and subgroups.
//!
//! Generators of 𝔛(P) are those of P followed by a `_psi` copy of each.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coset::{Clock, Enumeration, EnumerationError, EnumerationLimits, Strategy};
use crate::error::{Error, Result};
use crate::group::{prime_of_power, Elem, FiniteGroup, Homomorphism, Subgroup};
use crate::products::DirectProduct;
use crate::word::{commutator, Presentation, Word};

/// Which elements the defining relator families range over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RelatorScope {
    #[default]
    All,
    /// Only the generators of P (an experiment, not a definition).
    Generators,
    /// For ν, every element in the family ranges over the generators. For 𝔛
    /// this is the same as `Generators`.
    GeneratorTriples,
}

/// How a two-copy group is turned into a finite group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Realization {
    /// Action on the cosets of both copies together. The copies meet
    /// trivially because they map to the two factors of `P x P`.
    #[default]
    CopyCosets,
    /// Coset enumeration over the trivial subgroup.
    Regular,
}

#[derive(Clone, Copy, Default)]
pub struct BuildOptions<'a> {
    pub limits: EnumerationLimits,
    pub strategy: Strategy,
    pub clock: Option<&'a dyn Clock>,
    pub realization: Realization,
    pub scope: RelatorScope,
}

impl core::fmt::Debug for BuildOptions<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("BuildOptions")
            .field("limits", &self.limits)
            .field("strategy", &self.strategy)
            .field("clock", &self.clock.is_some())
            .field("realization", &self.realization)
            .field("scope", &self.scope)
            .finish()
    }
}

/// The prime of a p-group, `None` for the trivial group.
pub fn p_group_prime(g: &FiniteGroup) -> Result<Option<u64>> {
    let n = g.order() as u64;
    if n == 1 {
        return Ok(None);
    }
    match prime_of_power(n) {
        Some(p) => Ok(Some(p)),
        None => {
            let p = (2..).find(|d| n.is_multiple_of(*d)).unwrap_or(n);
            Err(Error::NotPGroup {
                order: g.order(),
                p,
            })
        }
    }
}

pub(crate) fn source_presentation(p: &FiniteGroup) -> Result<&Presentation> {
    p.presentation().ok_or(Error::NoPresentation)
}

/// Generator names `x` followed by `x_psi`, and relators `R` and `R^ψ`.
pub(crate) fn doubled(src: &Presentation) -> (Vec<String>, Vec<Word>) {
    let k = src.ngens();
    let mut names: Vec<String> = src
        .generator_names()
        .iter()
        .map(|s| String::from(*s))
        .collect();
    names.extend(src.generator_names().iter().map(|s| format!("{s}_psi")));
    let mut rels: Vec<Word> = src.relators().to_vec();
    rels.extend(src.relators().iter().map(|r| psi(r, k)));
    (names, rels)
}

/// The ψ-copy of a word over P's generators.
pub(crate) fn psi(w: &Word, k: usize) -> Word {
    w.map_generators(|g| g + k)
}

/// Finite group of a presentation whose first `k` and last `k` generators
/// span copies of P meeting trivially.
pub(crate) fn realize(
    pres: &Presentation,
    k: usize,
    opts: &BuildOptions<'_>,
) -> Result<FiniteGroup> {
    let run = |sub: &[Word]| {
        let mut e = Enumeration::new(pres, sub)
            .limits(opts.limits)
            .strategy(opts.strategy);
        if let Some(c) = opts.clock {
            e = e.clock(c);
        }
        e.run()
    };
    if k == 0 || opts.realization == Realization::Regular {
        let t = run(&[])?;
        return FiniteGroup::regular_representation(pres, &t);
    }
    let left: Vec<Word> = (0..k).map(Word::generator).collect();
    let right: Vec<Word> = (k..2 * k).map(Word::generator).collect();
    let tl = run(&left)?;
    let tr = run(&right)?;
    FiniteGroup::from_coset_actions(pres, &[&tl, &tr])
}

pub fn xp_presentation(p: &FiniteGroup) -> Result<Presentation> {
    xp_presentation_with(p, RelatorScope::All)
}

/// Distinct nontrivial generator values of `p`.
pub(crate) fn generator_elements(p: &FiniteGroup) -> Vec<Elem> {
    let mut out: Vec<Elem> = Vec::new();
    for g in p.generators() {
        if g != Elem::IDENTITY && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// `R ∪ R^ψ ∪ {[w_g, w_g^ψ]}` with `g` over the nontrivial elements (or the
/// generators) in element order.
pub fn xp_presentation_with(p: &FiniteGroup, scope: RelatorScope) -> Result<Presentation> {
    p_group_prime(p)?;
    let src = source_presentation(p)?;
    let k = src.ngens();
    let (names, mut rels) = doubled(src);
    let words: Vec<Word> = match scope {
        RelatorScope::All => p.elements().skip(1).map(|g| p.canonical_word(g)).collect(),
        RelatorScope::Generators | RelatorScope::GeneratorTriples => generator_elements(p)
            .into_iter()
            .map(|g| p.canonical_word(g))
            .collect(),
    };
    for w in &words {
        rels.push(commutator(w, &psi(w, k)));
    }
    let mut out = Presentation::new(names, rels)?;
    out.name = src.name.as_ref().map(|n| format!("xp_{n}"));
    Ok(out)
}

/// 𝔛(P) with its maps and distinguished subgroups.
#[derive(Clone, Debug)]
pub struct XpBundle {
    pub source: Arc<FiniteGroup>,
    pub presentation: Presentation,
    pub xp: Arc<FiniteGroup>,
    pub embed: Homomorphism,
    pub embed_psi: Homomorphism,
    /// `x, x_psi -> x`
    pub alpha: Homomorphism,
    /// `x -> (x, 1)`, `x_psi -> (1, x)`
    pub beta: Homomorphism,
    /// `x -> (x, x, 1)`, `x_psi -> (1, x, x)`
    pub rho: Homomorphism,
    pub square: DirectProduct,
    pub cube: DirectProduct,
    pub l: Subgroup,
    pub d: Subgroup,
    pub w: Subgroup,
    pub r: Subgroup,
    pub p_copy: Subgroup,
    pub psi_copy: Subgroup,
}

pub fn xp_group(p: &Arc<FiniteGroup>, opts: &BuildOptions<'_>) -> Result<XpBundle> {
    let presentation = xp_presentation_with(p, opts.scope)?;
    let k = p.ngens();
    let xp = Arc::new(realize(&presentation, k, opts)?);
    let left: Vec<Elem> = (0..k).map(|i| xp.generator(i)).collect();
    let right: Vec<Elem> = (k..2 * k).map(|i| xp.generator(i)).collect();
    let embed = Homomorphism::new(p.clone(), xp.clone(), left)?;
    let embed_psi = Homomorphism::new(p.clone(), xp.clone(), right)?;
    let gens = p.generators();
    let alpha = Homomorphism::new(xp.clone(), p.clone(), [gens.clone(), gens.clone()].concat())?;
    let square = DirectProduct::new(vec![p.clone(), p.clone()])?;
    let cube = DirectProduct::new(vec![p.clone(), p.clone(), p.clone()])?;
    let one = Elem::IDENTITY;
    let beta_imgs: Vec<Elem> = gens
        .iter()
        .map(|&x| square.element(&[x, one]))
        .chain(gens.iter().map(|&x| square.element(&[one, x])))
        .collect();
    let beta = Homomorphism::new(xp.clone(), square.group().clone(), beta_imgs)?;
    let rho_imgs: Vec<Elem> = gens
        .iter()
        .map(|&x| cube.element(&[x, x, one]))
        .chain(gens.iter().map(|&x| cube.element(&[one, x, x])))
        .collect();
    let rho = Homomorphism::new(xp.clone(), cube.group().clone(), rho_imgs)?;
    let l = alpha.kernel();
    let d = beta.kernel();
    let w = rho.kernel();
    let p_copy = embed.image();
    let psi_copy = embed_psi.image();
    let inner = xp.commutator_subgroup_elementwise(&l, &psi_copy);
    let r = xp.commutator_subgroup_elementwise(&p_copy, &inner);
    Ok(XpBundle {
        source: p.clone(),
        presentation,
        xp,
        embed,
        embed_psi,
        alpha,
        beta,
        rho,
        square,
        cube,
        l,
        d,
        w,
        r,
        p_copy,
        psi_copy,
    })
}

impl XpBundle {
    /// `(g, g^ψ)` in 𝔛(P).
    pub fn pair(&self, g: Elem) -> (Elem, Elem) {
        (self.embed.apply(g), self.embed_psi.apply(g))
    }
}

/// `<g^-1 g^ψ : g ∈ P> = ker α`.
pub fn check_l_generation(b: &XpBundle) -> bool {
    let xp = &b.xp;
    let gen = xp.subgroup_closure(b.source.elements().map(|g| {
        let (x, y) = b.pair(g);
        xp.mul(xp.inv(x), y)
    }));
    gen.same_elements(&b.l)
}

/// Whether the elements `g^-1 g^ψ` for the generators `g` of P already
/// generate `L`. Recorded as an observation only.
pub fn l_generated_by_generators(b: &XpBundle) -> bool {
    let xp = &b.xp;
    let gen = xp.subgroup_closure(b.source.generators().into_iter().map(|g| {
        let (x, y) = b.pair(g);
        xp.mul(xp.inv(x), y)
    }));
    gen.same_elements(&b.l)
}

/// Normal closure of `{[g, h^ψ]}` equals `ker β`.
pub fn check_d_generation(b: &XpBundle) -> bool {
    let xp = &b.xp;
    let p = &b.source;
    let mut seeds = Vec::new();
    for g in p.elements() {
        for h in p.elements() {
            seeds.push(xp.commutator(b.embed.apply(g), b.embed_psi.apply(h)));
        }
    }
    xp.normal_closure(seeds).same_elements(&b.d)
}

/// `[l, d] = 1` for all `l ∈ L`, `d ∈ D`.
pub fn check_dl_commute(b: &XpBundle) -> bool {
    let xp = &b.xp;
    b.l.elements()
        .iter()
        .all(|&l| b.d.elements().iter().all(|&d| xp.commutes(l, d)))
}

/// `[x, y^ψ] = [x^ψ, y]` for all `x, y ∈ P`.
pub fn check_xpsi_symmetry(b: &XpBundle) -> bool {
    let xp = &b.xp;
    b.source.elements().all(|x| {
        b.source.elements().all(|y| {
            let (x0, x1) = b.pair(x);
            let (y0, y1) = b.pair(y);
            xp.commutator(x0, y1) == xp.commutator(x1, y0)
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WCheck {
    pub is_intersection: bool,
    pub central_in_ld: bool,
    pub abelian: bool,
}

impl WCheck {
    pub fn passed(&self) -> bool {
        self.is_intersection && self.central_in_ld && self.abelian
    }
}

/// `W = L ∩ D`, `W` central in `<L, D>`, `W` abelian.
pub fn check_w(b: &XpBundle) -> WCheck {
    let xp = &b.xp;
    let ld = xp.join(&b.l, &b.d);
    WCheck {
        is_intersection: xp.intersection(&b.l, &b.d).same_elements(&b.w),
        central_in_ld: xp.centralizes(&b.w, &ld),
        abelian: xp.centralizes(&b.w, &b.w),
    }
}

/// `R ⊆ W` and `R` normal.
pub fn check_r(b: &XpBundle) -> bool {
    b.r.is_subset(&b.w) && b.xp.is_normal(&b.r)
}

/// `{[x1, [y y^-ψ, x2^ψ]] : x1, y, x2 ∈ X}` as words over 𝔛(P)'s generators,
/// in the order x1, y, x2 (x2 fastest).
pub fn z_set(p: &FiniteGroup, symmetric_gens: &[Elem]) -> Result<Vec<Word>> {
    if symmetric_gens
        .iter()
        .any(|&x| !symmetric_gens.contains(&p.inv(x)))
    {
        return Err(Error::NotSymmetric);
    }
    if p.subgroup_closure(symmetric_gens.iter().copied()).order() != p.order() {
        return Err(Error::NotGenerating);
    }
    let k = p.ngens();
    let words: Vec<Word> = symmetric_gens
        .iter()
        .map(|&x| p.canonical_word(x))
        .collect();
    let mut out = Vec::with_capacity(words.len().pow(3));
    for x1 in &words {
        for y in &words {
            let yy = y.mul(&psi(y, k).inverse());
            for x2 in &words {
                out.push(commutator(x1, &commutator(&yy, &psi(x2, k))));
            }
        }
    }
    Ok(out)
}

/// Normal closure of the Z-set equals `R`.
pub fn check_r_closure(b: &XpBundle, symmetric_gens: &[Elem]) -> Result<bool> {
    let z = z_set(&b.source, symmetric_gens)?;
    let xp = &b.xp;
    Ok(xp
        .normal_closure(z.iter().map(|w| xp.evaluate(w)))
        .same_elements(&b.r))
}

/// The map 𝔛(P) -> 𝔛(Q) induced by an epimorphism `f: P -> Q`.
pub fn induced_xp_map(f: &Homomorphism, from: &XpBundle, to: &XpBundle) -> Result<Homomorphism> {
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
    Homomorphism::new(from.xp.clone(), to.xp.clone(), imgs)
}

/// `α_Q ∘ F = f ∘ α_P`.
pub fn commutes_with_alpha(
    big_f: &Homomorphism,
    f: &Homomorphism,
    from_alpha: &Homomorphism,
    to_alpha: &Homomorphism,
) -> bool {
    big_f
        .domain()
        .elements()
        .all(|e| to_alpha.apply(big_f.apply(e)) == f.apply(from_alpha.apply(e)))
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Whether the generator-only relator family gives the same group. The
/// generator version surjects onto the full one, so equal orders suffice.
/// `None` when the generator-only family overruns `max_cosets`; it may
/// present an infinite group.
pub fn generator_scope_agrees(b: &XpBundle, opts: &BuildOptions<'_>) -> Result<Option<bool>> {
    let opts = BuildOptions {
        scope: RelatorScope::Generators,
        ..*opts
    };
    match xp_group(&b.source, &opts) {
        Ok(small) => Ok(Some(small.xp.order() == b.xp.order())),
        Err(Error::Enumeration(EnumerationError::LimitExceeded { .. })) => Ok(None),
        Err(e) => Err(e),
    }
}
