//! Direct products, fibre products and subdirect-product diagnostics.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Homomorphism, Subgroup};
use crate::weakcomm::XpBundle;

/// Im ρ is compared against its description exhaustively when `|P|^3` is at
/// most this many tuples.
pub const EXHAUSTIVE_TUPLE_LIMIT: usize = 1_000_000;

/// Groups with more elements than this are additionally checked by sampling.
pub const EXHAUSTIVE_ORDER_LIMIT: usize = 8;

pub const DEFAULT_SAMPLES: usize = 100_000;

/// `G1 x ... x Gk` with elements addressed by component tuples. Generators
/// are those of the factors, in order.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    group: Arc<FiniteGroup>,
    factors: Vec<Arc<FiniteGroup>>,
    strides: Vec<usize>,
    code_of: Vec<u32>,
    elem_of: Vec<Elem>,
}

impl DirectProduct {
    pub fn new(factors: Vec<Arc<FiniteGroup>>) -> Result<Self> {
        let mut strides = Vec::with_capacity(factors.len());
        let mut total = 1usize;
        for f in &factors {
            strides.push(total);
            total = total
                .checked_mul(f.order())
                .filter(|&t| t <= u32::MAX as usize)
                .ok_or(Error::TooLarge {
                    order: usize::MAX,
                    bound: u32::MAX as usize,
                })?;
        }
        let mut names: Vec<String> = Vec::new();
        let mut owner: Vec<(usize, usize)> = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for (g, name) in f.generator_names().iter().enumerate() {
                names.push(format!("{name}_{}", i + 1));
                owner.push((i, g));
            }
        }
        let (group, map) = FiniteGroup::from_action(names, None, total, |code, gen| {
            let (i, g) = owner[gen];
            let c = (code / strides[i]) % factors[i].order();
            let next = factors[i].mul_gen(Elem(c as u32), g).index();
            code - c * strides[i] + next * strides[i]
        })?;
        let mut code_of = vec![0u32; total];
        for (code, e) in map.iter().enumerate() {
            code_of[e.index()] = code as u32;
        }
        Ok(DirectProduct {
            group: Arc::new(group),
            factors,
            strides,
            code_of,
            elem_of: map,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn factors(&self) -> &[Arc<FiniteGroup>] {
        &self.factors
    }

    pub fn element(&self, components: &[Elem]) -> Elem {
        assert_eq!(components.len(), self.factors.len());
        let code: usize = components
            .iter()
            .zip(&self.strides)
            .map(|(c, s)| c.index() * s)
            .sum();
        self.elem_of[code]
    }

    pub fn component(&self, e: Elem, i: usize) -> Elem {
        let code = self.code_of[e.index()] as usize;
        Elem(((code / self.strides[i]) % self.factors[i].order()) as u32)
    }

    pub fn components(&self, e: Elem) -> Vec<Elem> {
        (0..self.factors.len())
            .map(|i| self.component(e, i))
            .collect()
    }

    fn generator_offset(&self, i: usize) -> usize {
        self.factors[..i].iter().map(|f| f.ngens()).sum()
    }

    pub fn projection(&self, i: usize) -> Homomorphism {
        let off = self.generator_offset(i);
        let k = self.factors[i].ngens();
        let imgs = (0..self.group.ngens())
            .map(|g| {
                if (off..off + k).contains(&g) {
                    self.factors[i].generator(g - off)
                } else {
                    Elem::IDENTITY
                }
            })
            .collect();
        Homomorphism::new(self.group.clone(), self.factors[i].clone(), imgs).expect("projection")
    }

    pub fn embedding(&self, i: usize) -> Homomorphism {
        let off = self.generator_offset(i);
        let imgs = (0..self.factors[i].ngens())
            .map(|g| self.group.generator(off + g))
            .collect();
        Homomorphism::new(self.factors[i].clone(), self.group.clone(), imgs).expect("embedding")
    }
}

pub fn direct_product(factors: Vec<Arc<FiniteGroup>>) -> Result<DirectProduct> {
    DirectProduct::new(factors)
}

/// Two surjections onto a common quotient.
#[derive(Clone, Debug)]
pub struct FibreSpec {
    pub p1: Homomorphism,
    pub p2: Homomorphism,
}

impl FibreSpec {
    pub fn validate(&self) -> Result<()> {
        let (q1, q2) = (self.p1.codomain(), self.p2.codomain());
        if !Arc::ptr_eq(q1, q2) && **q1 != **q2 {
            return Err(Error::CodomainMismatch);
        }
        if !self.p1.is_surjective() || !self.p2.is_surjective() {
            return Err(Error::NotSurjective);
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FibreProduct {
    pub product: DirectProduct,
    pub subgroup: Subgroup,
}

/// `{(g1, g2) : p1(g1) = p2(g2)}` by filtering `G1 x G2`.
pub fn fibre_product(spec: &FibreSpec) -> Result<FibreProduct> {
    spec.validate()?;
    let (g1, g2) = (spec.p1.domain().clone(), spec.p2.domain().clone());
    let product = DirectProduct::new(vec![g1.clone(), g2.clone()])?;
    let mut elems = Vec::new();
    for a in g1.elements() {
        let qa = spec.p1.apply(a);
        for b in g2.elements() {
            if spec.p2.apply(b) == qa {
                elems.push(product.element(&[a, b]));
            }
        }
    }
    let subgroup = product.group.subgroup_from_elements(&elems)?;
    Ok(FibreProduct { product, subgroup })
}

#[derive(Clone, Debug)]
pub struct SOutcome {
    pub fibre: FibreProduct,
    /// `<(h, h^-1)>` inside the fibre product's ambient group.
    pub s: Subgroup,
    pub equals_fibre: bool,
    pub contains_derived_square: bool,
}

/// `S = <(h, h^-1) : h ∈ H>` compared with the pullback of the projection to
/// `H/H'` and its composite with inversion.
pub fn s_subgroup(h: &Arc<FiniteGroup>) -> Result<SOutcome> {
    let derived = h.derived_subgroup();
    let (q, pi) = h.quotient(&derived)?;
    let anti_imgs = pi.generator_images().iter().map(|&e| q.inv(e)).collect();
    let anti = Homomorphism::new(h.clone(), q, anti_imgs)?;
    let fibre = fibre_product(&FibreSpec { p1: pi, p2: anti })?;
    let prod = &fibre.product;
    let s = prod
        .group
        .subgroup_closure(h.elements().map(|x| prod.element(&[x, h.inv(x)])));
    let equals_fibre = s.same_elements(&fibre.subgroup);
    let contains_derived_square = derived.elements().iter().all(|&a| {
        derived
            .elements()
            .iter()
            .all(|&b| s.contains(prod.element(&[a, b])))
    });
    Ok(SOutcome {
        fibre,
        s,
        equals_fibre,
        contains_derived_square,
    })
}

/// Image of a subgroup under the projection to some of the factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionCheck {
    pub factors: Vec<usize>,
    pub image_order: usize,
    pub index: usize,
    pub surjective: bool,
}

/// Comparison of a computed subgroup with an explicit description.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetCheck {
    pub exhaustive: bool,
    pub tuples_checked: usize,
    pub sampled_from_subgroup: usize,
    pub sampled_from_description: usize,
    pub mismatches: usize,
}

impl SetCheck {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Clone, Debug)]
pub struct SubdirectReport {
    pub ambient_orders: Vec<usize>,
    pub subgroup_order: usize,
    pub index: usize,
    pub projections: Vec<ProjectionCheck>,
    /// Set only by [`im_rho_verify`].
    pub set_check: Option<SetCheck>,
    /// `|P/P'|`, set only by [`im_rho_verify`].
    pub expected_index: Option<usize>,
}

impl SubdirectReport {
    pub fn pairwise_surjective(&self) -> bool {
        self.projections
            .iter()
            .filter(|p| p.factors.len() == 2)
            .all(|p| p.surjective)
    }

    pub fn passed(&self) -> bool {
        self.projections.iter().all(|p| p.surjective)
            && self.set_check.as_ref().is_none_or(SetCheck::passed)
            && self.expected_index.is_none_or(|i| i == self.index)
    }
}

/// Projections of `h` onto every single factor and every pair of factors.
pub fn subdirect_report(product: &DirectProduct, h: &Subgroup) -> SubdirectReport {
    let orders: Vec<usize> = product.factors.iter().map(|f| f.order()).collect();
    let k = orders.len();
    let mut subsets: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
    for i in 0..k {
        for j in i + 1..k {
            subsets.push(vec![i, j]);
        }
    }
    let projections = subsets
        .into_iter()
        .map(|s| {
            let image: HashSet<Vec<Elem>> = h
                .elements()
                .iter()
                .map(|&e| s.iter().map(|&i| product.component(e, i)).collect())
                .collect();
            let ambient: usize = s.iter().map(|&i| orders[i]).product();
            ProjectionCheck {
                index: ambient / image.len(),
                surjective: image.len() == ambient,
                image_order: image.len(),
                factors: s,
            }
        })
        .collect();
    SubdirectReport {
        index: product.group.order() / h.order(),
        ambient_orders: orders,
        subgroup_order: h.order(),
        projections,
        set_check: None,
        expected_index: None,
    }
}

/// Checks that `Im ρ = {(g1, g2, g3) : g1 g2^-1 g3 ∈ P'}` together with the
/// index and the projections. The comparison is exhaustive when `|P|^3` is
/// within [`EXHAUSTIVE_TUPLE_LIMIT`]; groups above [`EXHAUSTIVE_ORDER_LIMIT`]
/// are also sampled from both sides.
pub fn im_rho_verify<R: Rng + ?Sized>(
    xb: &XpBundle,
    samples: usize,
    rng: &mut R,
) -> SubdirectReport {
    let p = &xb.source;
    let cube = &xb.cube;
    let image = xb.rho.image();
    let derived = p.derived_subgroup();
    let mut report = subdirect_report(cube, &image);
    report.expected_index = Some(p.order() / derived.order());
    let in_t = |e: Elem| {
        let c = cube.components(e);
        derived.contains(p.mul(p.mul(c[0], p.inv(c[1])), c[2]))
    };
    let mut check = SetCheck::default();
    let n = p.order();
    if n.saturating_pow(3) <= EXHAUSTIVE_TUPLE_LIMIT {
        check.exhaustive = true;
        for e in cube.group.elements() {
            check.tuples_checked += 1;
            if image.contains(e) != in_t(e) {
                check.mismatches += 1;
            }
        }
    }
    if n > EXHAUSTIVE_ORDER_LIMIT || !check.exhaustive {
        let elems = image.elements();
        for _ in 0..samples {
            let e = elems[rng.random_range(0..elems.len())];
            check.sampled_from_subgroup += 1;
            if !in_t(e) {
                check.mismatches += 1;
            }
        }
        let d = derived.elements();
        for _ in 0..samples {
            let g1 = Elem(rng.random_range(0..n as u32));
            let g2 = Elem(rng.random_range(0..n as u32));
            let c = d[rng.random_range(0..d.len())];
            // g1 g2^-1 g3 = c
            let g3 = p.mul(p.mul(g2, p.inv(g1)), c);
            check.sampled_from_description += 1;
            if !image.contains(cube.element(&[g1, g2, g3])) {
                check.mismatches += 1;
            }
        }
    }
    report.set_check = Some(check);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::abelian_invariants;

    fn group(text: &str) -> Arc<FiniteGroup> {
        let p = crate::parse_presentation(text).unwrap();
        let t = crate::enumerate(&p, &[], &crate::EnumerationLimits::default()).unwrap();
        Arc::new(FiniteGroup::regular_representation(&p, &t).unwrap())
    }

    #[test]
    fn direct_products() {
        let c2 = group("gens a; rels a^2");
        let d8 = group("gens a,b; rels a^4,b^2,(a*b)^2");
        let v = DirectProduct::new(vec![c2.clone(), c2.clone()]).unwrap();
        assert_eq!(v.group().order(), 4);
        assert_eq!(
            abelian_invariants(v.group(), &v.group().whole())
                .unwrap()
                .factors(),
            &[2, 2]
        );
        let one = DirectProduct::new(vec![d8.clone()]).unwrap();
        assert_eq!(**one.group(), *d8);
        let dc = DirectProduct::new(vec![d8.clone(), c2]).unwrap();
        assert_eq!(dc.group().order(), 16);
        for e in dc.group().elements() {
            assert_eq!(dc.element(&dc.components(e)), e);
        }
        assert!(dc.projection(0).is_surjective());
        assert!(dc.embedding(0).is_injective());
    }

    #[test]
    fn fibre_over_c2() {
        let c4 = group("gens a; rels a^4");
        let c2 = group("gens a; rels a^2");
        let f = Homomorphism::new(c4.clone(), c2.clone(), vec![c2.generator(0)]).unwrap();
        let fp = fibre_product(&FibreSpec {
            p1: f.clone(),
            p2: f.clone(),
        })
        .unwrap();
        assert_eq!(fp.subgroup.order(), 8);
        let triv = group("gens a; rels a");
        let t = Homomorphism::new(c4.clone(), triv, vec![Elem::IDENTITY]).unwrap();
        let whole = fibre_product(&FibreSpec {
            p1: t.clone(),
            p2: t,
        })
        .unwrap();
        assert_eq!(whole.subgroup.order(), 16);
        let id = Homomorphism::identity(c4.clone());
        assert_eq!(
            fibre_product(&FibreSpec {
                p1: id.clone(),
                p2: id
            })
            .unwrap()
            .subgroup
            .order(),
            4
        );
        let a2 = c4.mul(c4.generator(0), c4.generator(0));
        let into = Homomorphism::new(c2.clone(), c4.clone(), vec![a2]).unwrap();
        assert_eq!(
            fibre_product(&FibreSpec {
                p1: into.clone(),
                p2: into
            })
            .unwrap_err(),
            Error::NotSurjective
        );
    }

    #[test]
    fn s_subgroups() {
        let c2 = s_subgroup(&group("gens a; rels a^2")).unwrap();
        assert_eq!(c2.s.order(), 2);
        assert!(c2.equals_fibre);
        let c4 = s_subgroup(&group("gens a; rels a^4")).unwrap();
        assert_eq!(c4.s.order(), 4);
        assert!(c4.equals_fibre);
        let d8 = s_subgroup(&group("gens a,b; rels a^4,b^2,(a*b)^2")).unwrap();
        assert_eq!(d8.s.order(), 16);
        assert!(d8.equals_fibre && d8.contains_derived_square);
    }
}
