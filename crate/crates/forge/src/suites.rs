//! Verification suites over catalog entries, and tower demonstrations.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use forge_core::homology::{
    abelian_invariants, abelian_invariants_of_quotient, abelianization, exterior_square_abelian,
    h2_bar_with_bound, is_abelian_quotient,
};
use forge_core::products::{fibre_product, im_rho_verify, s_subgroup, FibreSpec};
use forge_core::rocco::{
    check_delta_central, check_nu_shape, check_quotient_iso, h2_routes_agree, h2_via_mu,
    induced_nu_map, nu_group, nu_scopes_agree, NuBundle,
};
use forge_core::weakcomm::{
    check_d_generation, check_dl_commute, check_l_generation, check_r, check_r_closure, check_w,
    check_xpsi_symmetry, commutes_with_alpha, generator_scope_agrees, induced_xp_map,
    l_generated_by_generators, p_group_prime, xp_group, XpBundle,
};
use forge_core::{Elem, FiniteGroup, Homomorphism};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{Basis, CatalogEntry};
use crate::lab::{Lab, Settings};
use crate::report::{factors, EntryReport, VerificationReport};

use Basis::{Definition, Oracle, Theory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    DlCommute,
    Schur,
    Rtrivial,
    RClosure,
    Imrho,
    QuotientIso,
    DeltaCentral,
    Powerful,
    Fibre,
    Tower,
    All,
}

impl Suite {
    pub const EVERY: [Suite; 11] = [
        Suite::DlCommute,
        Suite::Schur,
        Suite::Rtrivial,
        Suite::RClosure,
        Suite::Imrho,
        Suite::QuotientIso,
        Suite::DeltaCentral,
        Suite::Powerful,
        Suite::Fibre,
        Suite::Tower,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DlCommute => "dl-commute",
            Suite::Schur => "schur",
            Suite::Rtrivial => "rtrivial",
            Suite::RClosure => "r-closure",
            Suite::Imrho => "imrho",
            Suite::QuotientIso => "quotient-iso",
            Suite::DeltaCentral => "delta-central",
            Suite::Powerful => "powerful",
            Suite::Fibre => "fibre",
            Suite::Tower => "tower",
            Suite::All => "all",
        }
    }

    fn sections(self) -> &'static [Section] {
        use Section::*;
        match self {
            Suite::DlCommute => &[Xp],
            Suite::Schur => &[Schur],
            Suite::Rtrivial => &[Rtrivial],
            Suite::RClosure => &[RClosure],
            Suite::Imrho => &[Imrho],
            Suite::QuotientIso => &[QuotientIso],
            Suite::DeltaCentral => &[Delta],
            Suite::Powerful => &[Powerful],
            Suite::Fibre => &[Fibre],
            Suite::Tower => &[],
            Suite::All => &[
                Xp,
                Schur,
                Rtrivial,
                RClosure,
                Imrho,
                QuotientIso,
                Delta,
                Powerful,
                Fibre,
            ],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "default" {
            return Ok(Suite::All);
        }
        Suite::EVERY
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::EVERY.iter().map(|x| x.name()).collect();
                format!("unknown suite `{s}` (known: {})", names.join(", "))
            })
    }
}

/// Groups of checks sharing the same bundles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Xp,
    Schur,
    Rtrivial,
    RClosure,
    Imrho,
    QuotientIso,
    Delta,
    Powerful,
    Fibre,
}

/// Sections behind the single-group CLI commands.
pub fn command_sections(command: &str) -> Option<&'static [Section]> {
    use Section::*;
    Some(match command {
        "xp" => &[Xp, Rtrivial, RClosure],
        "nu" => &[Delta, QuotientIso, Powerful],
        "schur" => &[Schur],
        "imrho" => &[Imrho],
        "fibre" => &[Fibre],
        _ => return None,
    })
}

pub fn run_suite(
    suite: Suite,
    entries: &[CatalogEntry],
    settings: &Settings,
) -> VerificationReport {
    let mut reports: Vec<EntryReport> = entries
        .par_iter()
        .map(|e| run_entry(e, suite.sections(), settings))
        .collect();
    if matches!(suite, Suite::Tower | Suite::All) {
        let towers: Vec<(u64, u32)> = vec![(2, 3), (3, 2)];
        reports.extend(
            towers
                .par_iter()
                .map(|&(p, n)| tower_entry(p, n, settings))
                .collect::<Vec<_>>(),
        );
    }
    VerificationReport::new(suite.name(), reports)
}

pub fn run_entry(entry: &CatalogEntry, sections: &[Section], settings: &Settings) -> EntryReport {
    let mut report = EntryReport::new(&entry.name);
    let mut lab = Lab::new(entry.presentation.clone(), settings);
    let outcome = basics(entry, &mut lab, &mut report).and_then(|()| {
        for &s in sections {
            match s {
                Section::Xp => xp_section(&mut lab, &mut report)?,
                Section::Schur => schur_section(entry, &mut lab, &mut report)?,
                Section::Rtrivial => rtrivial_section(&mut lab, &mut report)?,
                Section::RClosure => r_closure_section(&mut lab, &mut report)?,
                Section::Imrho => imrho_section(entry, &mut lab, &mut report)?,
                Section::QuotientIso => quotient_iso_section(&mut lab, &mut report)?,
                Section::Delta => delta_section(&mut lab, &mut report)?,
                Section::Powerful => powerful_section(&mut lab, &mut report)?,
                Section::Fibre => fibre_section(&mut lab, &mut report)?,
            }
        }
        Ok(())
    });
    if let Err(e) = outcome {
        report.error = Some(format!("{}: {e}", entry.name));
    }
    if settings.timing {
        report.elapsed_ms = Some(lab.elapsed().as_millis() as u64);
    }
    report.finish();
    report
}

type Res = forge_core::Result<()>;

fn basics(entry: &CatalogEntry, lab: &mut Lab, r: &mut EntryReport) -> Res {
    let g = lab.group()?;
    r.order = Some(g.order());
    r.p = p_group_prime(&g)?.or(entry.p);
    if let Some(n) = entry.expected_order {
        r.check_with(
            "catalog_order",
            g.order() == n,
            Oracle,
            format!("expected {n}, got {}", g.order()),
        );
    }
    if let (Some(expected), Some(p)) = (entry.p, r.p) {
        r.check("catalog_prime", expected == p, Definition);
    }
    Ok(())
}

fn record_xp(b: &XpBundle, r: &mut EntryReport) {
    r.orders.xp = Some(b.xp.order());
    r.orders.l = Some(b.l.order());
    r.orders.d = Some(b.d.order());
    r.orders.w = Some(b.w.order());
    r.orders.r = Some(b.r.order());
}

fn record_nu(b: &NuBundle, r: &mut EntryReport) {
    r.orders.nu = Some(b.nu.order());
    r.orders.tensor = Some(b.tensor.order());
    r.orders.delta = Some(b.delta.order());
}

fn xp_section(lab: &mut Lab, r: &mut EntryReport) -> Res {
    let b = lab.xp()?;
    record_xp(&b, r);
    let p = &b.source;
    r.check("l_generation", check_l_generation(&b), Theory);
    r.check("d_generation", check_d_generation(&b), Theory);
    r.check("dl_commute", check_dl_commute(&b), Theory);
    r.check("xpsi_symmetry", check_xpsi_symmetry(&b), Theory);
    let w = check_w(&b);
    r.check_with("w_properties", w.passed(), Theory, format!("{w:?}"));
    r.check("r_in_w_normal", check_r(&b), Theory);
    // |𝔛| = |Im ρ| |W|
    let image = b.rho.image().order();
    r.check_with(
        "xp_order_identity",
        b.xp.order() == image * b.w.order(),
        Definition,
        format!("|Im rho| = {image}, |W| = {}", b.w.order()),
    );
    let class = b.xp.nilpotency_class();
    r.check("xp_nilpotent", class.is_some(), Theory);
    r.observe("xp_nilpotency_class", class);
    if p.is_abelian() {
        r.check("xp_soluble", b.xp.derived_length().is_some(), Theory);
    }
    r.observe("xp_derived_length", b.xp.derived_length());
    r.observe("l_generated_by_generators", l_generated_by_generators(&b));
    let mut opts = lab.options();
    opts.limits.max_cosets = opts
        .limits
        .max_cosets
        .min(forge_core::rocco::SUBFAMILY_MAX_COSETS);
    let agrees = generator_scope_agrees(&b, &opts)?;
    r.observe(
        "xp_generator_scope_agrees",
        agrees.map_or_else(|| "limit".to_string(), |a| a.to_string()),
    );
    Ok(())
}

fn schur_section(entry: &CatalogEntry, lab: &mut Lab, r: &mut EntryReport) -> Res {
    let settings = lab.settings.clone();
    let xb = lab.xp()?;
    let nb = lab.nu()?;
    record_xp(&xb, r);
    record_nu(&nb, r);
    let p = &xb.source;
    let w_over_r = abelian_invariants_of_quotient(&xb.xp, &xb.w, &xb.r)?;
    let ker_mu = h2_via_mu(&nb);
    r.h2.w_over_r = Some(factors(&w_over_r));
    r.h2.ker_mu = Some(factors(&ker_mu));
    r.check_with(
        "h2_mu_routes",
        h2_routes_agree(&nb),
        Oracle,
        format!(
            "(ker alpha ∩ tensor)/delta = {}, ker mu = {}",
            nb.h2_tensor, nb.h2_mu_kernel
        ),
    );
    let mut agree = w_over_r == ker_mu;
    let mut detail = format!("W/R = {w_over_r}, ker mu = {ker_mu}");
    if p.order() <= settings.bar_bound {
        let bar = h2_bar_with_bound(p, settings.bar_bound)?;
        r.h2.bar = Some(factors(&bar));
        agree &= bar == w_over_r;
        detail.push_str(&format!(", bar = {bar}"));
        if p.is_abelian() {
            let closed = exterior_square_abelian(&abelianization(p));
            r.check_with(
                "h2_abelian_closed_form",
                bar == closed,
                Oracle,
                format!("{closed}"),
            );
        }
    }
    r.check_with("h2_routes_agree", agree, Theory, detail);
    if let Some((expected, prov)) = &entry.expected_h2 {
        r.h2.expected = Some(factors(expected));
        r.h2.expected_basis = Some(*prov);
        r.check_with(
            "h2_expected",
            *expected == w_over_r,
            *prov,
            format!("expected {expected}"),
        );
    }
    // Δ is a quotient of H2(𝔛/R)
    let quotient_order = xb.xp.order() / xb.r.order();
    if quotient_order <= settings.stem_bound {
        let (q, _) = xb.xp.quotient(&xb.r)?;
        let h2q = h2_bar_with_bound(&q, settings.stem_bound)?;
        let delta = abelian_invariants(&nb.nu, &nb.delta)?;
        r.check_with(
            "delta_quotient_of_h2",
            is_abelian_quotient(&delta, &h2q),
            Theory,
            format!("delta = {delta}, H2(X/R) = {h2q}"),
        );
    }
    Ok(())
}

fn rtrivial_section(lab: &mut Lab, r: &mut EntryReport) -> Res {
    let b = lab.xp()?;
    record_xp(&b, r);
    let p = &b.source;
    let d = match p_group_prime(p)? {
        Some(prime) => p.minimal_generator_count(prime)?,
        None => 0,
    };
    r.observe("minimal_generator_count", d);
    if d <= 2 {
        r.check_with(
            "r_trivial",
            b.r.is_trivial(),
            Theory,
            format!("|R| = {}", b.r.order()),
        );
    }
    if !b.r.is_trivial() {
        r.observe("noteworthy_r_nontrivial", b.r.order());
    }
    Ok(())
}

/// Generators with their inverses, and all nontrivial elements.
fn symmetric_sets(p: &FiniteGroup) -> Vec<(&'static str, Vec<Elem>)> {
    let mut gens: Vec<Elem> = Vec::new();
    for g in p.generators() {
        for x in [g, p.inv(g)] {
            if x != Elem::IDENTITY && !gens.contains(&x) {
                gens.push(x);
            }
        }
    }
    let all: Vec<Elem> = p.elements().skip(1).collect();
    let mut sets = vec![("generators", gens.clone())];
    if all.len() != gens.len() {
        sets.push(("all_elements", all));
    }
    sets
}

fn r_closure_section(lab: &mut Lab, r: &mut EntryReport) -> Res {
    let b = lab.xp()?;
    record_xp(&b, r);
    if b.source.order() == 1 {
        return Ok(());
    }
    for (label, set) in symmetric_sets(&b.source) {
        r.check_with(
            format!("r_closure_{label}"),
            check_r_closure(&b, &set)?,
            Theory,
            format!("|X| = {}", set.len()),
        );
    }
    Ok(())
}

fn entry_seed(settings: &Settings, name: &str) -> u64 {
    // FNV-1a, stable across runs and platforms
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    settings.seed ^ h
}

#[derive(Serialize)]
struct ImRhoSummary {
    image_order: usize,
    index: usize,
    expected_index: Option<usize>,
    exhaustive: bool,
    tuples_checked: usize,
    sampled_from_image: usize,
    sampled_from_description: usize,
    mismatches: usize,
}

fn imrho_section(entry: &CatalogEntry, lab: &mut Lab, r: &mut EntryReport) -> Res {
    let b = lab.xp()?;
    record_xp(&b, r);
    let mut rng = ChaCha8Rng::seed_from_u64(entry_seed(lab.settings, &entry.name));
    let rep = im_rho_verify(&b, lab.settings.samples, &mut rng);
    let set = rep.set_check.clone().unwrap_or_default();
    r.check_with(
        "im_rho_set",
        set.passed(),
        Theory,
        format!("{} mismatches", set.mismatches),
    );
    r.check_with(
        "im_rho_index",
        rep.expected_index == Some(rep.index),
        Theory,
        format!("index {}, |P/P'| = {:?}", rep.index, rep.expected_index),
    );
    r.check(
        "im_rho_pairwise_surjective",
        rep.pairwise_surjective(),
        Theory,
    );
    r.check(
        "im_rho_factor_surjective",
        rep.projections
            .iter()
            .filter(|p| p.factors.len() == 1)
            .all(|p| p.surjective),
        Theory,
    );
    r.observe(
        "im_rho",
        ImRhoSummary {
            image_order: rep.subgroup_order,
            index: rep.index,
            expected_index: rep.expected_index,
            exhaustive: set.exhaustive,
            tuples_checked: set.tuples_checked,
            sampled_from_image: set.sampled_from_subgroup,
            sampled_from_description: set.sampled_from_description,
            mismatches: set.mismatches,
        },
    );
    Ok(())
}

fn quotient_iso_section(lab: &mut Lab, r: &mut EntryReport) -> Res {
    let xb = lab.xp()?;
    let nb = lab.nu()?;
    record_xp(&xb, r);
    record_nu(&nb, r);
    r.check("quotient_iso", check_quotient_iso(&xb, &nb)?, Theory);
    r.observe("nu_enumerated_scope", format!("{:?}", nb.enumerated_scope));
    if xb.source.order() <= lab.settings.scope_check_bound {
        let g = lab.group()?;
        r.check(
            "nu_scope_agrees",
            nu_scopes_agree(&g, &lab.options())?,
            Oracle,
        );
    }
    Ok(())
}

fn delta_section(lab: &mut Lab, r: &mut EntryReport) -> Res {
    let nb = lab.nu()?;
    record_nu(&nb, r);
    r.check("delta_central", check_delta_central(&nb), Theory);
    r.check("nu_shape", check_nu_shape(&nb), Theory);
    Ok(())
}

fn powerful_section(lab: &mut Lab, r: &mut EntryReport) -> Res {
    let nb = lab.nu()?;
    record_nu(&nb, r);
    let Some(p) = p_group_prime(&nb.source)? else {
        return Ok(());
    };
    if nb.source.is_abelian() {
        r.check("tensor_powerful", nb.tensor_group.is_powerful(p)?, Theory);
    }
    r.observe("nu_powerful", nb.nu.is_powerful(p)?);
    r.observe("nu_nilpotency_class", nb.nu.nilpotency_class());
    r.observe("nu_exponent", nb.nu.exponent());
    Ok(())
}

fn fibre_section(lab: &mut Lab, r: &mut EntryReport) -> Res {
    let h = lab.group()?;
    let s = s_subgroup(&h)?;
    r.check_with(
        "s_equals_fibre",
        s.equals_fibre,
        Theory,
        format!("|S| = {}", s.s.order()),
    );
    r.check(
        "s_contains_derived_square",
        s.contains_derived_square,
        Theory,
    );
    let (q, pi) = h.quotient(&h.derived_subgroup())?;
    let f = fibre_product(&FibreSpec {
        p1: pi.clone(),
        p2: pi,
    })?;
    r.check(
        "fibre_order_law",
        f.subgroup.order() * q.order() == h.order() * h.order(),
        Definition,
    );
    let onto = (0..2).all(|i| f.product.projection(i).image_of(&f.subgroup).order() == h.order());
    r.check("fibre_projections_surjective", onto, Definition);
    Ok(())
}

fn cyclic(n: u64) -> forge_core::Result<Arc<FiniteGroup>> {
    let text = format!("group C{n}; gens a; rels a^{n}");
    let p = forge_core::parse_presentation(&text)?;
    let t = forge_core::enumerate(&p, &[], &Default::default())?;
    Ok(Arc::new(FiniteGroup::regular_representation(&p, &t)?))
}

/// `C_{p^n} -> ... -> C_p` with the induced maps on 𝔛 and ν.
pub fn tower_demo(p: u64, depth: u32, settings: &Settings) -> VerificationReport {
    VerificationReport::new("tower", vec![tower_entry(p, depth, settings)])
}

fn tower_entry(p: u64, depth: u32, settings: &Settings) -> EntryReport {
    let start = Instant::now();
    let mut r = EntryReport::new(&format!("tower_{p}^{depth}"));
    r.p = Some(p);
    if let Err(e) = tower_checks(p, depth, settings, &mut r) {
        r.error = Some(format!("tower {p}^{depth}: {e}"));
    }
    if settings.timing {
        r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    r.finish();
    r
}

fn tower_checks(p: u64, depth: u32, settings: &Settings, r: &mut EntryReport) -> Res {
    let opts = forge_core::weakcomm::BuildOptions {
        limits: settings.limits(),
        strategy: settings.strategy,
        ..Default::default()
    };
    // levels[i] is C_{p^(depth - i)}
    let mut groups = Vec::new();
    for i in 0..depth {
        groups.push(cyclic(p.pow(depth - i))?);
    }
    r.order = groups.first().map(|g| g.order());
    let xps: Vec<XpBundle> = groups
        .iter()
        .map(|g| xp_group(g, &opts))
        .collect::<Result<_, _>>()?;
    let nus: Vec<NuBundle> = groups
        .iter()
        .map(|g| nu_group(g, &opts))
        .collect::<Result<_, _>>()?;
    if let (Some(x), Some(n)) = (xps.first(), nus.first()) {
        r.orders.xp = Some(x.xp.order());
        r.orders.nu = Some(n.nu.order());
        let id = Homomorphism::identity(groups[0].clone());
        let xi = induced_xp_map(&id, x, x)?;
        r.check(
            "xp_identity",
            xi.agrees_with(&Homomorphism::identity(x.xp.clone())),
            Definition,
        );
        let ni = induced_nu_map(&id, n, n)?;
        r.check(
            "nu_identity",
            ni.agrees_with(&Homomorphism::identity(n.nu.clone())),
            Definition,
        );
    }
    let mut maps = Vec::new();
    let mut xmaps = Vec::new();
    let mut nmaps = Vec::new();
    for i in 0..groups.len().saturating_sub(1) {
        let (a, b) = (&groups[i], &groups[i + 1]);
        let label = format!("C{}_C{}", a.order(), b.order());
        let f = Homomorphism::new(a.clone(), b.clone(), vec![b.generator(0)])?;
        let xf = induced_xp_map(&f, &xps[i], &xps[i + 1])?;
        r.check(format!("xp_surjective_{label}"), xf.is_surjective(), Theory);
        r.check(
            format!("xp_alpha_{label}"),
            commutes_with_alpha(&xf, &f, &xps[i].alpha, &xps[i + 1].alpha),
            Definition,
        );
        let nf = induced_nu_map(&f, &nus[i], &nus[i + 1])?;
        r.check(format!("nu_surjective_{label}"), nf.is_surjective(), Theory);
        r.check(
            format!("nu_alpha_{label}"),
            commutes_with_alpha(&nf, &f, &nus[i].alpha, &nus[i + 1].alpha),
            Definition,
        );
        maps.push(f);
        xmaps.push(xf);
        nmaps.push(nf);
    }
    // induced(g ∘ f) = induced(g) ∘ induced(f)
    for i in 0..maps.len().saturating_sub(1) {
        let j = i + 2;
        let label = format!("C{}_C{}", groups[i].order(), groups[j].order());
        let gf = maps[i].then(&maps[i + 1])?;
        let direct = induced_xp_map(&gf, &xps[i], &xps[j])?;
        let composed = xmaps[i].then(&xmaps[i + 1])?;
        r.check(
            format!("xp_functorial_{label}"),
            direct.agrees_with(&composed),
            Definition,
        );
        let direct = induced_nu_map(&gf, &nus[i], &nus[j])?;
        let composed = nmaps[i].then(&nmaps[i + 1])?;
        r.check(
            format!("nu_functorial_{label}"),
            direct.agrees_with(&composed),
            Definition,
        );
    }
    Ok(())
}
