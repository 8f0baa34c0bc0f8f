use std::collections::BTreeSet;
use std::sync::Arc;

use forge_core::homology::{
    abelian_invariants, abelian_invariants_of_quotient, abelianization, h2_bar,
};
use forge_core::products::s_subgroup;
use forge_core::rocco::{check_delta_central, h2_via_mu, nu_group};
use forge_core::weakcomm::{check_r_closure, xp_group, BuildOptions, Realization};
use forge_core::{enumerate, parse_presentation, Elem, EnumerationLimits, FiniteGroup};

const SMALL: &[(&str, &str)] = &[
    ("C2", "gens a; rels a^2"),
    ("C3", "gens a; rels a^3"),
    ("C4", "gens a; rels a^4"),
    ("C8", "gens a; rels a^8"),
    ("C2xC2", "gens a, b; rels a^2, b^2, [a,b]"),
    ("C2xC4", "gens a, b; rels a^2, b^4, [a,b]"),
    ("D8", "gens a, b; rels a^4, b^2, (a*b)^2"),
    ("Q8", "gens a, b; rels a^4, a^2*b^-2, a^b*a"),
    ("C3xC3", "gens a, b; rels a^3, b^3, [a,b]"),
];

fn group(text: &str) -> Arc<FiniteGroup> {
    let p = parse_presentation(text).unwrap();
    let t = enumerate(&p, &[], &EnumerationLimits::default()).unwrap();
    Arc::new(FiniteGroup::regular_representation(&p, &t).unwrap())
}

fn set(it: impl IntoIterator<Item = Elem>) -> BTreeSet<Elem> {
    it.into_iter().collect()
}

#[test]
fn xp_subgroups_by_filtering() {
    for &(name, text) in SMALL {
        let p = group(text);
        let b = xp_group(&p, &BuildOptions::default()).unwrap();
        let xp = &b.xp;
        let l = set(xp.elements().filter(|&x| b.alpha.apply(x) == p.identity()));
        let d = set(xp.elements().filter(|&x| b.beta.apply(x) == Elem::IDENTITY));
        let w = set(xp.elements().filter(|&x| b.rho.apply(x) == Elem::IDENTITY));
        assert_eq!(set(b.l.elements().iter().copied()), l, "{name}");
        assert_eq!(set(b.d.elements().iter().copied()), d, "{name}");
        assert_eq!(set(b.w.elements().iter().copied()), w, "{name}");
        assert_eq!(w, l.intersection(&d).copied().collect(), "{name}");
        for &x in &l {
            for &y in &d {
                assert!(xp.commutes(x, y), "{name}: [L,D] != 1");
            }
        }
        let ld = xp.subgroup_closure(l.iter().chain(&d).copied());
        for &x in &w {
            assert!(ld.elements().iter().all(|&y| xp.commutes(x, y)), "{name}");
        }
        for g in p.elements() {
            for h in p.elements() {
                let (x, xs) = (b.embed.apply(g), b.embed_psi.apply(g));
                let (y, ys) = (b.embed.apply(h), b.embed_psi.apply(h));
                assert_eq!(xp.commutator(x, ys), xp.commutator(xs, y), "{name}");
            }
            assert_eq!(b.alpha.apply(b.embed.apply(g)), g);
            assert_eq!(b.alpha.apply(b.embed_psi.apply(g)), g);
        }
        // R = [P, [L, P^ψ]] from all elements
        let inner = xp.subgroup_closure(
            l.iter()
                .flat_map(|&x| b.psi_copy.elements().iter().map(move |&y| (x, y)))
                .map(|(x, y)| xp.commutator(x, y)),
        );
        let r = xp.subgroup_closure(
            b.p_copy
                .elements()
                .iter()
                .flat_map(|&x| inner.elements().iter().map(move |&y| (x, y)))
                .map(|(x, y)| xp.commutator(x, y)),
        );
        assert!(r.same_elements(&b.r), "{name}");
        assert!(r.elements().iter().all(|e| w.contains(e)) && xp.is_normal(&r));
    }
}

#[test]
fn im_rho_matches_description() {
    for &(name, text) in SMALL {
        let p = group(text);
        let b = xp_group(&p, &BuildOptions::default()).unwrap();
        let image = set(b.xp.elements().map(|x| b.rho.apply(x)));
        let derived = p.derived_subgroup();
        let mut described = BTreeSet::new();
        for g1 in p.elements() {
            for g2 in p.elements() {
                for g3 in p.elements() {
                    if derived.contains(p.mul(p.mul(g1, p.inv(g2)), g3)) {
                        described.insert(b.cube.element(&[g1, g2, g3]));
                    }
                }
            }
        }
        assert_eq!(image, described, "{name}");
        let n = p.order();
        assert_eq!(
            (n * n * n / image.len()) as u64,
            abelianization(&p).order(),
            "{name}"
        );
        assert_eq!(b.xp.order(), image.len() * b.w.order(), "{name}");
    }
}

#[test]
fn realizations_agree_on_order() {
    for &(name, text) in &SMALL[..7] {
        let p = group(text);
        let a = xp_group(&p, &BuildOptions::default()).unwrap();
        let opts = BuildOptions {
            realization: Realization::Regular,
            ..Default::default()
        };
        let b = xp_group(&p, &opts).unwrap();
        assert_eq!(a.xp.order(), b.xp.order(), "{name}");
    }
}

#[test]
fn derived_xp_orders() {
    let expect = [
        ("C2", 4),
        ("C2xC2", 32),
        ("D8", 256),
        ("Q8", 128),
        ("C3xC3", 243),
    ];
    for (name, n) in expect {
        let text = SMALL.iter().find(|e| e.0 == name).unwrap().1;
        let b = xp_group(&group(text), &BuildOptions::default()).unwrap();
        assert_eq!(b.xp.order(), n, "{name}");
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn nu_shape_and_delta() {
    for &(name, text) in SMALL {
        let p = group(text);
        let b = nu_group(&p, &BuildOptions::default()).unwrap();
        let n = p.order();
        assert_eq!(b.nu.order(), n * n * b.tensor.order(), "{name}");
        let delta = b.nu.subgroup_closure(
            p.elements()
                .map(|g| b.nu.commutator(b.embed.apply(g), b.embed_psi.apply(g))),
        );
        assert!(delta.same_elements(&b.delta), "{name}");
        assert!(check_delta_central(&b));
        if p.is_abelian() {
            // P ⊗ P for abelian P: the sum of C_gcd(n_i, n_j)
            let inv = abelianization(&p);
            let f = inv.factors();
            let order: u64 = f
                .iter()
                .flat_map(|&x| f.iter().map(move |&y| gcd(x, y)))
                .product();
            assert_eq!(b.tensor.order() as u64, order, "{name}");
            let t = abelian_invariants(&b.nu, &b.tensor).unwrap();
            assert_eq!(t.order() as u64, order);
        }
        let image = set(b.tensor.elements().iter().map(|&t| b.alpha.apply(t)));
        assert_eq!(
            image,
            set(p.derived_subgroup().elements().iter().copied()),
            "{name}"
        );
    }
}

#[test]
fn schur_three_routes() {
    for &(name, text) in SMALL {
        let p = group(text);
        let xb = xp_group(&p, &BuildOptions::default()).unwrap();
        let nb = nu_group(&p, &BuildOptions::default()).unwrap();
        let bar = h2_bar(&p).unwrap();
        assert_eq!(
            abelian_invariants_of_quotient(&xb.xp, &xb.w, &xb.r).unwrap(),
            bar,
            "{name}"
        );
        assert_eq!(h2_via_mu(&nb), bar, "{name}");
    }
}

#[test]
fn z_set_closure_for_symmetric_sets() {
    for name in ["C2xC2", "D8", "Q8"] {
        let text = SMALL.iter().find(|e| e.0 == name).unwrap().1;
        let p = group(text);
        let b = xp_group(&p, &BuildOptions::default()).unwrap();
        let mut gens = Vec::new();
        for g in p.generators() {
            gens.extend([g, p.inv(g)]);
        }
        gens.sort();
        gens.dedup();
        let all: Vec<Elem> = p.elements().skip(1).collect();
        assert!(check_r_closure(&b, &gens).unwrap(), "{name}");
        assert!(check_r_closure(&b, &all).unwrap(), "{name}");
    }
}

#[test]
fn s_subgroup_is_antipodal_fibre() {
    for name in ["C4", "D8", "Q8", "C2xC4", "C3xC3"] {
        let text = SMALL.iter().find(|e| e.0 == name).unwrap().1;
        let h = group(text);
        let out = s_subgroup(&h).unwrap();
        let prod = &out.fibre.product;
        let q = h.quotient(&h.derived_subgroup()).unwrap().1;
        let brute: BTreeSet<Elem> = h
            .elements()
            .flat_map(|x| h.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| q.apply(h.mul(x, y)) == Elem::IDENTITY)
            .map(|(x, y)| prod.element(&[x, y]))
            .collect();
        assert_eq!(
            set(out.fibre.subgroup.elements().iter().copied()),
            brute,
            "{name}"
        );
        assert!(out.equals_fibre && out.contains_derived_square, "{name}");
    }
}
