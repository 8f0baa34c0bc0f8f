//! Concrete finite groups given by their right-regular Cayley graph.
//!
//! Elements are numbered in shortlex order of their canonical words over the
//! positive generators (breadth-first from the identity, generators tried in
//! index order), so element 0 is the identity and canonical words are
//! deterministic. Subgroups are explicit element sets.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::word::{Letter, Presentation, Word};

/// Products of subgroup orders up to this size are handled elementwise by
/// [`FiniteGroup::commutator_subgroup`].
pub const ELEMENTWISE_COMMUTATOR_LIMIT: usize = 1 << 20;

const FULL_TABLE_LIMIT: usize = 512;

/// A group element: its index in the group's shortlex element order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Fixed-size bit set over element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElemSet {
    bits: Vec<u64>,
    len: usize,
}

impl ElemSet {
    pub fn new(universe: usize) -> Self {
        ElemSet {
            bits: vec![0; universe.div_ceil(64)],
            len: 0,
        }
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        let i = e.index();
        self.bits[i >> 6] >> (i & 63) & 1 == 1
    }

    /// Returns `true` if `e` was not yet present.
    #[inline]
    pub fn insert(&mut self, e: Elem) -> bool {
        let i = e.index();
        let w = &mut self.bits[i >> 6];
        let m = 1u64 << (i & 63);
        if *w & m == 0 {
            *w |= m;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(Elem((wi as u32) << 6 | b))
            })
        })
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    names: Vec<String>,
    presentation: Option<Presentation>,
    ngens: usize,
    order: usize,
    right: Vec<u32>,
    right_inv: Vec<u32>,
    parent: Vec<u32>,
    via: Vec<u16>,
    word_start: Vec<u32>,
    word_letters: Vec<u16>,
    inverse: Vec<u32>,
    table: Option<Vec<u32>>,
}

impl PartialEq for FiniteGroup {
    /// Equal Cayley graphs over the same generator list.
    fn eq(&self, other: &Self) -> bool {
        self.ngens == other.ngens && self.right == other.right
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a regular action given by `act(point, generator)`
    /// on points `0..n`, point 0 being the identity. The action is verified
    /// to be regular. Returns the group and the map from old points to
    /// elements.
    pub fn from_action(
        names: Vec<String>,
        presentation: Option<Presentation>,
        n: usize,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<(Self, Vec<Elem>)> {
        let ngens = names.len();
        assert!(ngens < u16::MAX as usize);
        let mut map = vec![u32::MAX; n];
        let mut order_pts = Vec::with_capacity(n);
        let mut parent = Vec::with_capacity(n);
        let mut via = Vec::with_capacity(n);
        map[0] = 0;
        order_pts.push(0usize);
        parent.push(0u32);
        via.push(0u16);
        let mut i = 0;
        while i < order_pts.len() {
            let pt = order_pts[i];
            for g in 0..ngens {
                let q = act(pt, g);
                if q >= n {
                    return Err(Error::NotRegular(format!("point {q} out of range")));
                }
                if map[q] == u32::MAX {
                    map[q] = order_pts.len() as u32;
                    order_pts.push(q);
                    parent.push(i as u32);
                    via.push(g as u16);
                }
            }
            i += 1;
        }
        if order_pts.len() != n {
            return Err(Error::NotRegular("action is not transitive".to_string()));
        }
        let mut right = vec![0u32; n * ngens];
        for (e, &pt) in order_pts.iter().enumerate() {
            for g in 0..ngens {
                right[e * ngens + g] = map[act(pt, g)];
            }
        }
        let mut right_inv = vec![u32::MAX; n * ngens];
        for e in 0..n {
            for g in 0..ngens {
                let t = right[e * ngens + g] as usize;
                if right_inv[t * ngens + g] != u32::MAX {
                    return Err(Error::NotRegular(format!(
                        "generator {g} is not a permutation"
                    )));
                }
                right_inv[t * ngens + g] = e as u32;
            }
        }
        let mut word_start = Vec::with_capacity(n + 1);
        let mut word_letters: Vec<u16> = Vec::new();
        word_start.push(0u32);
        word_start.push(0u32);
        for e in 1..n {
            let p = parent[e] as usize;
            let (s, t) = (word_start[p] as usize, word_start[p + 1] as usize);
            word_letters.extend_from_within(s..t);
            word_letters.push(via[e]);
            word_start.push(word_letters.len() as u32);
        }
        let mut g = FiniteGroup {
            names,
            presentation,
            ngens,
            order: n,
            right,
            right_inv,
            parent,
            via,
            word_start,
            word_letters,
            inverse: Vec::new(),
            table: None,
        };
        g.inverse = (0..n as u32).map(|e| g.inv_by_word(Elem(e)).0).collect();
        g.verify_regular()?;
        if n <= FULL_TABLE_LIMIT {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = g.mul_by_word(Elem(a as u32), Elem(b as u32)).0;
                }
            }
            g.table = Some(t);
        }
        let elems = map.into_iter().map(Elem).collect();
        Ok((g, elems))
    }

    /// Checks that left translations by the generator elements are label
    /// preserving automorphisms of the graph, which certifies that the
    /// schreier graph is a Cayley graph.
    fn verify_regular(&self) -> Result<()> {
        let n = self.order;
        let mut lambda = vec![0u32; n];
        for q in 0..self.ngens {
            let start = self.right[q];
            lambda[0] = start;
            for e in 1..n {
                let p = self.parent[e] as usize;
                lambda[e] = self.right[lambda[p] as usize * self.ngens + self.via[e] as usize];
            }
            for e in 0..n {
                for y in 0..self.ngens {
                    let lhs = lambda[self.right[e * self.ngens + y] as usize];
                    let rhs = self.right[lambda[e] as usize * self.ngens + y];
                    if lhs != rhs {
                        return Err(Error::NotRegular(format!(
                            "left translation by generator {q} is not an automorphism"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The regular representation given by a complete coset table of the
    /// trivial subgroup.
    pub fn regular_representation(presentation: &Presentation, t: &CosetTable) -> Result<Self> {
        if !t.is_complete() {
            return Err(Error::IncompleteTable);
        }
        if !t.subgroup_is_trivial() {
            return Err(Error::NontrivialSubgroup);
        }
        Self::from_coset_actions(presentation, &[t])
    }

    /// Builds the group from its actions on the cosets of several subgroups
    /// whose intersection is trivial: an element is identified with the
    /// tuple of images of the subgroup cosets. Fails if the intersection is
    /// not trivial.
    pub fn from_coset_actions(presentation: &Presentation, tables: &[&CosetTable]) -> Result<Self> {
        let ngens = presentation.ngens();
        if tables.is_empty() {
            return Err(Error::NotRegular("no coset tables".to_string()));
        }
        for t in tables {
            if !t.is_complete() {
                return Err(Error::IncompleteTable);
            }
            if t.ngens() != ngens {
                return Err(Error::NotRegular("coset table generator count".to_string()));
            }
        }
        let names: Vec<String> = presentation
            .generator_names()
            .iter()
            .map(|s| s.to_string())
            .collect();
        if tables.len() == 1 {
            let t = tables[0];
            let (g, _) =
                Self::from_action(names, Some(presentation.clone()), t.index(), |c, g| {
                    t.raw(c, Letter::gen(g).code()) as usize
                })?;
            return Ok(g);
        }
        let k = tables.len();
        let mut points: Vec<u32> = vec![0; k];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        index.insert(points.clone(), 0);
        let mut succ: Vec<u32> = Vec::new();
        let mut i = 0usize;
        let mut scratch = vec![0u32; k];
        while i * k < points.len() {
            for g in 0..ngens {
                for (j, t) in tables.iter().enumerate() {
                    scratch[j] = t.raw(points[i * k + j] as usize, Letter::gen(g).code());
                }
                let next = index.len() as u32;
                let id = *index.entry(scratch.clone()).or_insert_with(|| {
                    points.extend_from_slice(&scratch);
                    next
                });
                succ.push(id);
            }
            i += 1;
        }
        drop(index);
        let n = points.len() / k;
        let (g, _) = Self::from_action(names, Some(presentation.clone()), n, |e, g| {
            succ[e * ngens + g] as usize
        })?;
        Ok(g)
    }

    /// Records `p` as the presentation after checking that each of its
    /// relators is trivial in this group.
    pub fn with_presentation(mut self, p: Presentation) -> Result<Self> {
        if p.ngens() != self.ngens {
            return Err(Error::ImageCount {
                expected: self.ngens,
                got: p.ngens(),
            });
        }
        let names = p.generator_names();
        for (index, r) in p.relators().iter().enumerate() {
            if self.evaluate(r) != Elem::IDENTITY {
                return Err(Error::RelatorViolated {
                    index,
                    relator: format!("{}", r.display(&names)),
                });
            }
        }
        self.presentation = Some(p);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    pub fn identity(&self) -> Elem {
        Elem::IDENTITY
    }

    pub fn generator(&self, i: usize) -> Elem {
        Elem(self.right[i])
    }

    pub fn generators(&self) -> Vec<Elem> {
        (0..self.ngens).map(|i| self.generator(i)).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order as u32).map(Elem)
    }

    #[inline]
    pub fn mul_gen(&self, a: Elem, g: usize) -> Elem {
        Elem(self.right[a.index() * self.ngens + g])
    }

    #[inline]
    pub fn mul_gen_inv(&self, a: Elem, g: usize) -> Elem {
        Elem(self.right_inv[a.index() * self.ngens + g])
    }

    #[inline]
    pub fn mul_letter(&self, a: Elem, l: Letter) -> Elem {
        if l.is_inverse() {
            self.mul_gen_inv(a, l.generator())
        } else {
            self.mul_gen(a, l.generator())
        }
    }

    #[inline]
    fn word_of(&self, e: Elem) -> &[u16] {
        let i = e.index();
        &self.word_letters[self.word_start[i] as usize..self.word_start[i + 1] as usize]
    }

    fn mul_by_word(&self, a: Elem, b: Elem) -> Elem {
        let mut c = a.0;
        for &g in self.word_of(b) {
            c = self.right[c as usize * self.ngens + g as usize];
        }
        Elem(c)
    }

    fn inv_by_word(&self, a: Elem) -> Elem {
        let mut c = 0u32;
        for &g in self.word_of(a).iter().rev() {
            c = self.right_inv[c as usize * self.ngens + g as usize];
        }
        Elem(c)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => Elem(t[a.index() * self.order + b.index()]),
            None => self.mul_by_word(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        Elem(self.inverse[a.index()])
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let mut base = if k < 0 { self.inv(a) } else { a };
        let mut k = k.unsigned_abs();
        let mut acc = Elem::IDENTITY;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != Elem::IDENTITY {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `[a, b] = a⁻¹b⁻¹ab`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `a^b = b⁻¹ab`.
    pub fn conjugate(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn evaluate(&self, w: &Word) -> Elem {
        w.letters()
            .iter()
            .fold(Elem::IDENTITY, |e, &l| self.mul_letter(e, l))
    }

    /// Shortlex-least word over the positive generators.
    pub fn canonical_word(&self, e: Elem) -> Word {
        Word::from_letters_unreduced(
            self.word_of(e)
                .iter()
                .map(|&g| Letter::gen(g as usize))
                .collect(),
        )
    }

    /// Canonical word for every element, in element order.
    pub fn canonical_words(&self) -> Vec<Word> {
        self.elements().map(|e| self.canonical_word(e)).collect()
    }

    /// Breadth-first parent of `e` and the generator leading from it.
    pub fn tree_parent(&self, e: Elem) -> (Elem, usize) {
        (Elem(self.parent[e.index()]), self.via[e.index()] as usize)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn commutes(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Every generator of `a` commutes with every generator of `b`.
    pub fn centralizes(&self, a: &Subgroup, b: &Subgroup) -> bool {
        a.generators()
            .iter()
            .all(|&x| b.generators().iter().all(|&y| self.commutes(x, y)))
    }

    pub fn exponent(&self) -> u64 {
        self.elements().fold(1u64, |acc, e| {
            num_integer::lcm(acc, self.element_order(e) as u64)
        })
    }

    // ---- subgroups ----

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: self.elements().collect(),
            members: {
                let mut s = ElemSet::new(self.order);
                for e in self.elements() {
                    s.insert(e);
                }
                s
            },
            gens: self.generators(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        let mut members = ElemSet::new(self.order);
        members.insert(Elem::IDENTITY);
        Subgroup {
            elements: vec![Elem::IDENTITY],
            members,
            gens: Vec::new(),
        }
    }

    /// Adds `s` as a generator of `h` and closes.
    fn extend(&self, h: &mut Subgroup, s: Elem) {
        if h.members.contains(s) {
            return;
        }
        h.gens.push(s);
        let old = h.elements.len();
        let mut fresh: Vec<Elem> = Vec::new();
        for i in 0..old {
            let x = self.mul(h.elements[i], s);
            if h.members.insert(x) {
                fresh.push(x);
            }
        }
        let mut i = 0;
        while i < fresh.len() {
            let e = fresh[i];
            i += 1;
            for gi in 0..h.gens.len() {
                let x = self.mul(e, h.gens[gi]);
                if h.members.insert(x) {
                    fresh.push(x);
                }
            }
        }
        h.elements.extend(fresh);
        h.elements.sort_unstable();
    }

    /// Smallest subgroup containing `seeds`.
    pub fn subgroup_closure(&self, seeds: impl IntoIterator<Item = Elem>) -> Subgroup {
        let mut h = self.trivial();
        for s in seeds {
            self.extend(&mut h, s);
        }
        h
    }

    /// Smallest subgroup of `⟨conjugators⟩`-invariant sets containing
    /// `seeds`: the normal closure inside the subgroup generated by
    /// `conjugators`.
    pub fn normal_closure_under(
        &self,
        seeds: impl IntoIterator<Item = Elem>,
        conjugators: &[Elem],
    ) -> Subgroup {
        let mut h = self.subgroup_closure(seeds);
        let mut i = 0;
        while i < h.gens.len() {
            let g = h.gens[i];
            i += 1;
            for &x in conjugators {
                let c = self.conjugate(g, x);
                self.extend(&mut h, c);
            }
        }
        h
    }

    pub fn normal_closure(&self, seeds: impl IntoIterator<Item = Elem>) -> Subgroup {
        let gens = self.generators();
        self.normal_closure_under(seeds, &gens)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let gens = self.generators();
        h.gens
            .iter()
            .all(|&x| gens.iter().all(|&g| h.contains(self.conjugate(x, g))))
    }

    /// Subgroup from an explicit element set, with a small generating set.
    pub fn subgroup_from_elements(&self, elems: &[Elem]) -> Result<Subgroup> {
        let mut set = ElemSet::new(self.order);
        for &e in elems {
            set.insert(e);
        }
        let mut h = self.trivial();
        for e in set.iter() {
            if !h.members.contains(e) {
                self.extend(&mut h, e);
                if h.order() > set.len() {
                    return Err(Error::NotSubgroup);
                }
            }
        }
        if h.order() != set.len() {
            return Err(Error::NotSubgroup);
        }
        Ok(h)
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let (small, large) = if a.order() <= b.order() {
            (a, b)
        } else {
            (b, a)
        };
        let common: Vec<Elem> = small
            .elements
            .iter()
            .copied()
            .filter(|&e| large.contains(e))
            .collect();
        self.subgroup_from_elements(&common)
            .expect("intersection of subgroups is a subgroup")
    }

    /// Subgroup generated by `a ∪ b`.
    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.subgroup_closure(a.gens.iter().chain(b.gens.iter()).copied())
    }

    /// `[A, B] = ⟨[a, b] : a ∈ A, b ∈ B⟩`, elementwise when `|A|·|B|` is at
    /// most [`ELEMENTWISE_COMMUTATOR_LIMIT`], otherwise through generators.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        if a.order().saturating_mul(b.order()) <= ELEMENTWISE_COMMUTATOR_LIMIT {
            self.commutator_subgroup_elementwise(a, b)
        } else {
            self.commutator_subgroup_by_generators(a, b)
        }
    }

    pub fn commutator_subgroup_elementwise(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut seeds = ElemSet::new(self.order);
        for &x in &a.elements {
            for &y in &b.elements {
                seeds.insert(self.commutator(x, y));
            }
        }
        self.subgroup_closure(seeds.iter())
    }

    /// Normal closure of `{[x, y] : x ∈ gens(A), y ∈ gens(B)}` in `⟨A, B⟩`.
    pub fn commutator_subgroup_by_generators(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut seeds = Vec::new();
        for &x in &a.gens {
            for &y in &b.gens {
                seeds.push(self.commutator(x, y));
            }
        }
        let conj: Vec<Elem> = a.gens.iter().chain(b.gens.iter()).copied().collect();
        self.normal_closure_under(seeds, &conj)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = self.whole();
        self.commutator_subgroup(&g, &g)
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let elems: Vec<Elem> = self
            .elements()
            .filter(|&e| gens.iter().all(|&g| self.commutes(e, g)))
            .collect();
        self.subgroup_from_elements(&elems)
            .expect("center is a subgroup")
    }

    /// `G = γ₁ ⊇ γ₂ ⊇ …` up to and including the first repeated term.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let g = self.whole();
        let mut series = vec![g.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.commutator_subgroup(last, &g);
            if next.order() == last.order() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn derived_series(&self) -> Vec<Subgroup> {
        let mut series = vec![self.whole()];
        loop {
            let last = series.last().unwrap();
            let next = self.commutator_subgroup(last, last);
            if next.order() == last.order() {
                return series;
            }
            series.push(next);
        }
    }

    /// Nilpotency class, or `None` if the lower central series stalls above 1.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let s = self.lower_central_series();
        (s.last().unwrap().order() == 1).then(|| s.len() - 1)
    }

    pub fn derived_length(&self) -> Option<usize> {
        let s = self.derived_series();
        (s.last().unwrap().order() == 1).then(|| s.len() - 1)
    }

    /// `⟨x^k : x ∈ H⟩`.
    pub fn power_subgroup(&self, h: &Subgroup, k: i64) -> Subgroup {
        let mut seeds = ElemSet::new(self.order);
        for &x in &h.elements {
            seeds.insert(self.pow(x, k));
        }
        self.subgroup_closure(seeds.iter())
    }

    fn require_p_group(&self, p: u64) -> Result<()> {
        if prime_power_exponent(self.order as u64, p).is_none() {
            return Err(Error::NotPGroup {
                order: self.order,
                p,
            });
        }
        Ok(())
    }

    /// `d(G) = dim_{F_p} G / (G^p G′)`.
    pub fn minimal_generator_count(&self, p: u64) -> Result<usize> {
        self.require_p_group(p)?;
        let g = self.whole();
        let derived = self.derived_subgroup();
        let powers = self.power_subgroup(&g, p as i64);
        let frattini = self.join(&derived, &powers);
        let quotient = (self.order / frattini.order()) as u64;
        Ok(prime_power_exponent(quotient, p).expect("p-group quotient") as usize)
    }

    pub fn is_powerful(&self, p: u64) -> Result<bool> {
        self.require_p_group(p)?;
        Ok(self.is_powerful_subgroup(&self.whole(), p))
    }

    /// `[H,H] ⊆ H^p` for odd `p`, `[H,H] ⊆ H^4` for `p = 2`.
    pub fn is_powerful_subgroup(&self, h: &Subgroup, p: u64) -> bool {
        let derived = self.commutator_subgroup(h, h);
        let k = if p == 2 { 4 } else { p as i64 };
        let powers = self.power_subgroup(h, k);
        derived.is_subset(&powers)
    }

    /// `H` as a group in its own right over its generating set, together with
    /// the inclusion.
    pub fn subgroup_as_group(
        self: &Arc<Self>,
        h: &Subgroup,
    ) -> Result<(Arc<FiniteGroup>, Homomorphism)> {
        let local: HashMap<Elem, usize> = h
            .elements
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();
        let id_pos = local[&Elem::IDENTITY];
        // point 0 must be the identity
        let pts: Vec<Elem> = {
            let mut v = h.elements.clone();
            v.swap(0, id_pos);
            v
        };
        let pos: HashMap<Elem, usize> = pts.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let names: Vec<String> = (0..h.gens.len()).map(|i| format!("h{i}")).collect();
        let (sub, _) = FiniteGroup::from_action(names, None, pts.len(), |i, g| {
            pos[&self.mul(pts[i], h.gens[g])]
        })?;
        let sub = Arc::new(sub);
        let inc = Homomorphism::new(sub.clone(), self.clone(), h.gens.clone())?;
        Ok((sub, inc))
    }

    /// `G/N` and the canonical projection.
    pub fn quotient(self: &Arc<Self>, n: &Subgroup) -> Result<(Arc<FiniteGroup>, Homomorphism)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let mut label = vec![u32::MAX; self.order];
        let mut reps: Vec<Elem> = Vec::new();
        for e in self.elements() {
            if label[e.index()] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(e);
            for &x in &n.elements {
                label[self.mul(x, e).index()] = id;
            }
        }
        let presentation = self.presentation.as_ref().map(|p| {
            let mut rels: Vec<Word> = p.relators().to_vec();
            rels.extend(n.gens.iter().map(|&g| self.canonical_word(g)));
            let mut q = Presentation::new(p.generator_names(), rels).expect("same generators");
            q.name = p.name.clone();
            q
        });
        let (q, _) =
            FiniteGroup::from_action(self.names.clone(), presentation, reps.len(), |c, g| {
                label[self.mul_gen(reps[c], g).index()] as usize
            })?;
        let q = Arc::new(q);
        let images = q.generators();
        let proj = Homomorphism::new(self.clone(), q.clone(), images)?;
        Ok((q, proj))
    }
}

/// `k` with `n = p^k`, if any.
pub fn prime_power_exponent(n: u64, p: u64) -> Option<u32> {
    if n == 0 || p < 2 {
        return None;
    }
    let mut n = n;
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    (n == 1).then_some(k)
}

/// The prime `p` with `n = p^k` (`k ≥ 1`), if `n` is a prime power.
pub fn prime_of_power(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    prime_power_exponent(n, p).map(|_| p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<Elem>,
    members: ElemSet,
    gens: Vec<Elem>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(e)
    }

    /// Sorted element list.
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.elements.iter().all(|&e| other.contains(e))
    }

    pub fn same_elements(&self, other: &Subgroup) -> bool {
        self.elements == other.elements
    }
}

/// A homomorphism given by generator images, verified on construction.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    gen_images: Vec<Elem>,
    images: Vec<Elem>,
}

impl Homomorphism {
    /// Checks relators of the domain's presentation (when it has one) and
    /// then consistency on every edge of the domain's Cayley graph.
    pub fn new(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        gen_images: Vec<Elem>,
    ) -> Result<Self> {
        if gen_images.len() != domain.ngens {
            return Err(Error::ImageCount {
                expected: domain.ngens,
                got: gen_images.len(),
            });
        }
        let eval = |w: &Word| {
            w.letters().iter().fold(Elem::IDENTITY, |e, l| {
                let img = gen_images[l.generator()];
                let img = if l.is_inverse() {
                    codomain.inv(img)
                } else {
                    img
                };
                codomain.mul(e, img)
            })
        };
        if let Some(p) = &domain.presentation {
            let names = p.generator_names();
            for (index, r) in p.relators().iter().enumerate() {
                if eval(r) != Elem::IDENTITY {
                    return Err(Error::RelatorViolated {
                        index,
                        relator: format!("{}", r.display(&names)),
                    });
                }
            }
        }
        let n = domain.order;
        let k = domain.ngens;
        let mut images = vec![Elem::IDENTITY; n];
        for e in 1..n {
            let p = domain.parent[e] as usize;
            images[e] = codomain.mul(images[p], gen_images[domain.via[e] as usize]);
        }
        for e in 0..n {
            for g in 0..k {
                let t = domain.right[e * k + g] as usize;
                if images[t] != codomain.mul(images[e], gen_images[g]) {
                    return Err(Error::NotHomomorphism {
                        element: e as u32,
                        generator: g,
                    });
                }
            }
        }
        Ok(Homomorphism {
            domain,
            codomain,
            gen_images,
            images,
        })
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let gens = g.generators();
        Homomorphism::new(g.clone(), g, gens).expect("identity map")
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    pub fn generator_images(&self) -> &[Elem] {
        &self.gen_images
    }

    #[inline]
    pub fn apply(&self, e: Elem) -> Elem {
        self.images[e.index()]
    }

    pub fn kernel(&self) -> Subgroup {
        let elems: Vec<Elem> = self
            .domain
            .elements()
            .filter(|&e| self.images[e.index()] == Elem::IDENTITY)
            .collect();
        self.domain
            .subgroup_from_elements(&elems)
            .expect("kernel is a subgroup")
    }

    pub fn image(&self) -> Subgroup {
        self.codomain
            .subgroup_closure(self.gen_images.iter().copied())
    }

    /// Image of a subgroup of the domain.
    pub fn image_of(&self, h: &Subgroup) -> Subgroup {
        self.codomain
            .subgroup_closure(h.generators().iter().map(|&e| self.apply(e)))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.codomain.order()
    }

    pub fn is_injective(&self) -> bool {
        self.images[1..].iter().all(|&e| e != Elem::IDENTITY)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism> {
        if !Arc::ptr_eq(&self.codomain, &next.domain) && *self.codomain != *next.domain {
            return Err(Error::CodomainMismatch);
        }
        let imgs = self.gen_images.iter().map(|&e| next.apply(e)).collect();
        Homomorphism::new(self.domain.clone(), next.codomain.clone(), imgs)
    }

    /// Same values on every element.
    pub fn agrees_with(&self, other: &Homomorphism) -> bool {
        self.images == other.images
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::EnumerationLimits;
    use crate::parse::parse_presentation;

    pub(crate) fn group(text: &str) -> Arc<FiniteGroup> {
        let p = parse_presentation(text).unwrap();
        let t = crate::coset::enumerate(&p, &[], &EnumerationLimits::default()).unwrap();
        Arc::new(FiniteGroup::regular_representation(&p, &t).unwrap())
    }

    const D8: &str = "gens r, s; rels r^4, s^2, (r*s)^2";
    const Q8: &str = "gens a, b; rels a^4, a^2*b^-2, a^b*a";

    #[test]
    fn canonical_words_shortlex() {
        let c4 = group("gens a; rels a^4");
        let words: Vec<Word> = c4.canonical_words();
        assert_eq!(words[0], Word::empty());
        assert_eq!(words[3], Word::generator(0).pow(3));
        let v4 = group("gens a, b; rels a^2, b^2, [a,b]");
        let w = v4.canonical_words();
        assert_eq!(
            w,
            vec![
                Word::empty(),
                Word::generator(0),
                Word::generator(1),
                Word::generator(0).mul(&Word::generator(1))
            ]
        );
    }

    #[test]
    fn axioms_hold() {
        let g = group(D8);
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), Elem::IDENTITY);
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn closures() {
        let c4 = group("gens a; rels a^4");
        let a = c4.generator(0);
        assert!(c4.subgroup_closure([]).is_trivial());
        assert_eq!(c4.subgroup_closure([a]).order(), 4);
        assert_eq!(c4.subgroup_closure([c4.pow(a, 2)]).order(), 2);

        let d8 = group(D8);
        let r = d8.generator(0);
        assert!(d8.normal_closure([Elem::IDENTITY]).is_trivial());
        assert_eq!(d8.normal_closure([r]).order(), 4);
        let s = d8.generator(1);
        let n = d8.normal_closure([s]);
        assert!(d8.subgroup_closure([s]).is_subset(&n));
        assert_eq!(n.order(), 4);
    }

    #[test]
    fn commutators_and_series() {
        let d8 = group(D8);
        let g = d8.whole();
        let t = d8.trivial();
        assert!(d8.commutator_subgroup(&g, &t).is_trivial());
        let dd = d8.commutator_subgroup(&g, &g);
        assert_eq!(dd.order(), 2);
        assert!(dd.contains(d8.pow(d8.generator(0), 2)));
        assert_eq!(d8.commutator_subgroup_by_generators(&g, &g), dd);
        assert_eq!(d8.lower_central_series().len(), 3);
        assert_eq!(d8.nilpotency_class(), Some(2));

        let q8 = group(Q8);
        let ds = q8.derived_series();
        assert_eq!(
            ds.iter().map(Subgroup::order).collect::<Vec<_>>(),
            vec![8, 2, 1]
        );

        let s3 = group("gens a, b; rels a^3, b^2, (a*b)^2");
        assert_eq!(s3.nilpotency_class(), None);
        assert_eq!(s3.derived_length(), Some(2));
    }

    #[test]
    fn centers_and_quotients() {
        let v4 = group("gens a, b; rels a^2, b^2, [a,b]");
        assert_eq!(v4.center().order(), 4);
        let d8 = group(D8);
        let z = d8.center();
        assert_eq!(z.order(), 2);
        let (q, proj) = d8.quotient(&z).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.exponent(), 2);
        assert!(proj.kernel().same_elements(&z));
        let (q1, _) = d8.quotient(&d8.trivial()).unwrap();
        assert_eq!(q1.order(), 8);
        let (q2, _) = d8.quotient(&d8.whole()).unwrap();
        assert_eq!(q2.order(), 1);
        let s = d8.subgroup_closure([d8.generator(1)]);
        assert_eq!(d8.quotient(&s).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn homomorphisms() {
        let c4 = group("gens a; rels a^4");
        let c2 = group("gens a; rels a^2");
        let id = Homomorphism::identity(c4.clone());
        assert!(id.kernel().is_trivial());
        let f = Homomorphism::new(c4.clone(), c2.clone(), vec![c2.generator(0)]).unwrap();
        assert_eq!(f.kernel().order(), 2);
        assert!(f.is_surjective());
        let err = Homomorphism::new(c2.clone(), c4.clone(), vec![c4.generator(0)]).unwrap_err();
        assert!(matches!(err, Error::RelatorViolated { index: 0, .. }));
    }

    #[test]
    fn generator_counts_and_power() {
        let c4 = group("gens a; rels a^4");
        assert_eq!(c4.minimal_generator_count(2).unwrap(), 1);
        let v4 = group("gens a, b; rels a^2, b^2, [a,b]");
        assert_eq!(v4.minimal_generator_count(2).unwrap(), 2);
        assert_eq!(v4.exponent(), 2);
        assert!(v4.is_powerful(2).unwrap());
        let d8 = group(D8);
        assert_eq!(d8.minimal_generator_count(2).unwrap(), 2);
        assert!(!d8.is_powerful(2).unwrap());
        assert!(matches!(
            d8.minimal_generator_count(3),
            Err(Error::NotPGroup { .. })
        ));
        let s3 = group("gens a, b; rels a^3, b^2, (a*b)^2");
        assert!(s3.is_powerful(2).is_err());
    }

    #[test]
    fn subgroup_as_group_and_elementset() {
        let d8 = group(D8);
        let rot = d8.subgroup_closure([d8.generator(0)]);
        let (c4, inc) = d8.subgroup_as_group(&rot).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        assert!(inc.is_injective());
        assert!(d8
            .subgroup_from_elements(&[Elem::IDENTITY, d8.generator(0)])
            .is_err());
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_exponent(27, 3), Some(3));
        assert_eq!(prime_power_exponent(12, 2), None);
        assert_eq!(prime_of_power(8), Some(2));
        assert_eq!(prime_of_power(9), Some(3));
        assert_eq!(prime_of_power(7), Some(7));
        assert_eq!(prime_of_power(12), None);
        assert_eq!(prime_of_power(1), None);
    }
}
