//! Todd–Coxeter coset enumeration.
//!
//! Two strategies are provided: HLT (relator-based definitions, with a
//! lookahead pass and compaction when the table fills) and Felsch
//! (definitions in table order, every deduction processed against all
//! cyclic conjugates of the relators). Completed tables are renumbered in
//! breadth-first order from the subgroup coset, so both strategies yield
//! identical tables.
//!
//! Cosets are numbered from 0; coset 0 is always the subgroup itself.

use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::word::{Letter, Presentation, Word};

const UNDEF: u32 = u32::MAX;
const CLOCK_EVERY: u64 = 1 << 14;
const POLL_EVERY: u64 = 16;
/// Relators enumerated in the first stage of a large presentation.
const STAGED_FIRST: usize = 64;
/// Coset budget for a stage that does not yet use every relator.
pub const STAGED_MAX_COSETS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    #[default]
    Hlt,
    Felsch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Maximum number of coset rows held at once.
    pub max_cosets: usize,
    /// Wall-clock budget. Requires a [`Clock`] on the enumeration.
    pub max_time: Option<Duration>,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_cosets: 10_000_000,
            max_time: None,
        }
    }
}

impl EnumerationLimits {
    pub fn with_max_cosets(max_cosets: usize) -> Self {
        EnumerationLimits {
            max_cosets,
            max_time: None,
        }
    }
}

/// Elapsed-time source; the core crate has no clock of its own.
pub trait Clock {
    fn elapsed(&self) -> Duration;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error(
        "coset limit exceeded: {cosets_used} cosets in use with max_cosets = {max_cosets}; \
         raise the limit (the group may also be infinite)"
    )]
    LimitExceeded {
        cosets_used: usize,
        max_cosets: usize,
    },
    #[error("time limit of {limit_ms} ms exceeded with {cosets_used} cosets in use")]
    TimeExceeded { limit_ms: u128, cosets_used: usize },
    #[error("max_time was set but no clock was supplied")]
    NoClock,
    #[error("max_cosets must be at least 1")]
    InvalidLimits,
    #[error("subgroup word {0} uses a generator outside the presentation")]
    InvalidSubgroupWord(usize),
}

/// A complete, standardized coset table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetTable {
    ngens: usize,
    index: usize,
    rows: Vec<u32>,
    trivial_subgroup: bool,
}

impl CosetTable {
    /// Wraps raw rows (`index * 2 * ngens` entries, `u32::MAX` for
    /// undefined). Intended for tests and external tables; enumeration
    /// always produces complete tables.
    pub fn from_rows(ngens: usize, rows: Vec<u32>, trivial_subgroup: bool) -> Self {
        let ncols = 2 * ngens;
        let index = if ncols == 0 { 1 } else { rows.len() / ncols };
        CosetTable {
            ngens,
            index,
            rows,
            trivial_subgroup,
        }
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Number of live cosets, i.e. the subgroup index.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Whether every subgroup word given to the enumeration was freely trivial.
    pub fn subgroup_is_trivial(&self) -> bool {
        self.trivial_subgroup
    }

    #[inline]
    pub fn get(&self, coset: usize, letter: Letter) -> Option<usize> {
        let v = self.rows[coset * 2 * self.ngens + letter.code()];
        (v != UNDEF).then_some(v as usize)
    }

    #[inline]
    pub(crate) fn raw(&self, coset: usize, column: usize) -> u32 {
        self.rows[coset * 2 * self.ngens + column]
    }

    pub fn is_complete(&self) -> bool {
        self.rows
            .iter()
            .all(|&v| v != UNDEF && (v as usize) < self.index)
    }

    /// Follows `w` from `coset`; `None` if the path leaves the table.
    pub fn trace(&self, coset: usize, w: &Word) -> Option<usize> {
        let mut c = coset;
        for &l in w.letters() {
            c = self.get(c, l)?;
        }
        Some(c)
    }

    fn trace_codes(&self, coset: usize, w: &[u32]) -> Option<usize> {
        let mut c = coset;
        for &code in w {
            c = self.get(c, Letter::from_code(code as usize))?;
        }
        Some(c)
    }

    /// Every relator traced from every coset returns to it.
    pub fn is_closed_under(&self, p: &Presentation) -> bool {
        (0..self.index).all(|c| p.relators().iter().all(|r| self.trace(c, r) == Some(c)))
    }

    /// Each column is a permutation and the inverse columns invert it.
    pub fn columns_are_permutations(&self) -> bool {
        for g in 0..self.ngens {
            let mut seen = vec![false; self.index];
            for c in 0..self.index {
                let Some(d) = self.get(c, Letter::gen(g)) else {
                    return false;
                };
                if seen[d] || self.get(d, Letter::new(g, true)) != Some(c) {
                    return false;
                }
                seen[d] = true;
            }
        }
        true
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.index];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(c) = stack.pop() {
            for col in 0..2 * self.ngens {
                let d = self.rows[c * 2 * self.ngens + col];
                if d != UNDEF && !seen[d as usize] {
                    seen[d as usize] = true;
                    count += 1;
                    stack.push(d as usize);
                }
            }
        }
        count == self.index
    }
}

/// Enumerates the cosets of `⟨subgroup⟩` in the group presented by `p`
/// using the default (HLT) strategy.
pub fn enumerate(
    p: &Presentation,
    subgroup: &[Word],
    limits: &EnumerationLimits,
) -> Result<CosetTable, EnumerationError> {
    Enumeration::new(p, subgroup).limits(*limits).run()
}

/// Builder for a single enumeration run.
pub struct Enumeration<'a> {
    presentation: &'a Presentation,
    subgroup: &'a [Word],
    limits: EnumerationLimits,
    strategy: Strategy,
    clock: Option<&'a dyn Clock>,
}

impl<'a> Enumeration<'a> {
    pub fn new(presentation: &'a Presentation, subgroup: &'a [Word]) -> Self {
        Enumeration {
            presentation,
            subgroup,
            limits: EnumerationLimits::default(),
            strategy: Strategy::Hlt,
            clock: None,
        }
    }

    pub fn limits(mut self, limits: EnumerationLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn clock(mut self, clock: &'a dyn Clock) -> Self {
        self.clock = Some(clock);
        self
    }

    pub fn run(self) -> Result<CosetTable, EnumerationError> {
        if self.limits.max_cosets == 0 {
            return Err(EnumerationError::InvalidLimits);
        }
        let ngens = self.presentation.ngens();
        let deadline = match (self.limits.max_time, self.clock) {
            (Some(t), Some(c)) => Some((c, t)),
            (Some(_), None) => return Err(EnumerationError::NoClock),
            _ => None,
        };
        let mut subgroup = Vec::new();
        for (i, w) in self.subgroup.iter().enumerate() {
            if w.max_generator().is_some_and(|g| g >= ngens) {
                return Err(EnumerationError::InvalidSubgroupWord(i));
            }
            let w = w.free_reduce();
            if !w.is_empty() {
                subgroup.push(codes(&w));
            }
        }
        let trivial_subgroup = subgroup.is_empty();
        let relators = prepare_relators(self.presentation);
        if relators.len() <= STAGED_FIRST {
            let all: Vec<&[u32]> = relators.iter().map(Vec::as_slice).collect();
            return self.attempt(
                &all,
                &subgroup,
                self.limits.max_cosets,
                deadline,
                trivial_subgroup,
            );
        }
        self.staged(&relators, &subgroup, deadline, trivial_subgroup)
    }

    /// Enumerates with the shortest relators first. A complete table on which
    /// every remaining relator closes is the table for the whole
    /// presentation; relators that fail to close join the active set. A
    /// subset overrunning `STAGED_MAX_COSETS` doubles the active set.
    fn staged(
        &self,
        relators: &[Vec<u32>],
        subgroup: &[Vec<u32>],
        deadline: Option<(&'a dyn Clock, Duration)>,
        trivial_subgroup: bool,
    ) -> Result<CosetTable, EnumerationError> {
        let mut order: Vec<usize> = (0..relators.len()).collect();
        order.sort_by_key(|&i| relators[i].len());
        let mut active = vec![false; relators.len()];
        let mut take = STAGED_FIRST;
        for &i in &order[..take] {
            active[i] = true;
        }
        loop {
            let subset: Vec<&[u32]> = (0..relators.len())
                .filter(|&i| active[i])
                .map(|i| relators[i].as_slice())
                .collect();
            let everything = subset.len() == relators.len();
            let cap = if everything {
                self.limits.max_cosets
            } else {
                self.limits.max_cosets.min(STAGED_MAX_COSETS)
            };
            let table = match self.attempt(&subset, subgroup, cap, deadline, trivial_subgroup) {
                Err(EnumerationError::LimitExceeded { .. }) if !everything => {
                    take = (2 * take).min(order.len());
                    for &i in &order[..take] {
                        active[i] = true;
                    }
                    continue;
                }
                other => other?,
            };
            if everything {
                return Ok(table);
            }
            // shortest failures first, at most `take` per round
            let mut added = 0;
            for &i in &order {
                if active[i] {
                    continue;
                }
                if let Some((clock, limit)) = deadline {
                    if clock.elapsed() > limit {
                        return Err(EnumerationError::TimeExceeded {
                            limit_ms: limit.as_millis(),
                            cosets_used: table.index(),
                        });
                    }
                }
                let r = &relators[i];
                let closes = if trivial_subgroup {
                    // a Cayley graph: closing at one vertex closes everywhere
                    table.trace_codes(0, r) == Some(0)
                } else {
                    (0..table.index()).all(|c| table.trace_codes(c, r) == Some(c))
                };
                if !closes {
                    active[i] = true;
                    added += 1;
                    if added == take {
                        break;
                    }
                }
            }
            if added == 0 {
                return Ok(table);
            }
            take = (2 * take).min(order.len());
        }
    }

    fn attempt(
        &self,
        relators: &[&[u32]],
        subgroup: &[Vec<u32>],
        cap: usize,
        deadline: Option<(&'a dyn Clock, Duration)>,
        trivial_subgroup: bool,
    ) -> Result<CosetTable, EnumerationError> {
        let mut e = Enumerator::new(self.presentation.ngens(), cap, deadline);
        let result = match self.strategy {
            Strategy::Hlt => e.hlt(relators, subgroup),
            Strategy::Felsch => e.felsch(relators, subgroup),
        };
        match result {
            Ok(()) => Ok(e.standardize(trivial_subgroup)),
            Err(Halt::Full) => Err(EnumerationError::LimitExceeded {
                cosets_used: e.n,
                max_cosets: self.limits.max_cosets,
            }),
            Err(Halt::Time) => Err(EnumerationError::TimeExceeded {
                limit_ms: self.limits.max_time.map_or(0, |t| t.as_millis()),
                cosets_used: e.live,
            }),
        }
    }
}

fn codes(w: &Word) -> Vec<u32> {
    w.letters().iter().map(|l| l.code() as u32).collect()
}

/// Drops empty relators and exact duplicates, keeping first occurrences.
fn prepare_relators(p: &Presentation) -> Vec<Vec<u32>> {
    let mut seen: alloc::collections::BTreeSet<&Word> = alloc::collections::BTreeSet::new();
    let mut out = Vec::new();
    for r in p.relators() {
        if !r.is_empty() && seen.insert(r) {
            out.push(codes(r));
        }
    }
    out
}

enum Halt {
    Full,
    Time,
}

/// A relator cyclic conjugate, read forwards or as the inverse word.
#[derive(Clone, Copy)]
struct Conjugate {
    rel: u32,
    start: u32,
    inverse: bool,
}

struct Enumerator<'a> {
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    n: usize,
    live: usize,
    cap: usize,
    queue: Vec<u32>,
    record: bool,
    deductions: Vec<(u32, u32)>,
    events: u64,
    polls: u64,
    deadline: Option<(&'a dyn Clock, Duration)>,
}

impl<'a> Enumerator<'a> {
    fn new(ngens: usize, cap: usize, deadline: Option<(&'a dyn Clock, Duration)>) -> Self {
        let ncols = 2 * ngens;
        Enumerator {
            ncols,
            table: vec![UNDEF; ncols],
            parent: vec![0],
            n: 1,
            live: 1,
            cap,
            queue: Vec::new(),
            record: false,
            deductions: Vec::new(),
            events: 0,
            polls: 0,
            deadline,
        }
    }

    #[inline]
    fn at(&self, c: u32, col: u32) -> u32 {
        self.table[c as usize * self.ncols + col as usize]
    }

    #[inline]
    fn set(&mut self, c: u32, col: u32, v: u32) {
        self.table[c as usize * self.ncols + col as usize] = v;
    }

    #[inline]
    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn tick(&mut self) -> Result<(), Halt> {
        self.events += 1;
        if self.events.is_multiple_of(CLOCK_EVERY) {
            if let Some((clock, limit)) = self.deadline {
                if clock.elapsed() > limit {
                    return Err(Halt::Time);
                }
            }
        }
        Ok(())
    }

    /// Clock check between cosets; scans that define nothing never tick.
    fn poll(&mut self) -> Result<(), Halt> {
        self.polls += 1;
        if self.polls.is_multiple_of(POLL_EVERY) {
            if let Some((clock, limit)) = self.deadline {
                if clock.elapsed() > limit {
                    return Err(Halt::Time);
                }
            }
        }
        Ok(())
    }

    fn define(&mut self, c: u32, col: u32) -> Result<u32, Halt> {
        if self.n >= self.cap {
            return Err(Halt::Full);
        }
        self.tick()?;
        let d = self.n as u32;
        self.n += 1;
        self.live += 1;
        self.table.extend(core::iter::repeat_n(UNDEF, self.ncols));
        self.parent.push(d);
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        if self.record {
            self.deductions.push((c, col));
        }
        Ok(d)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
            self.live -= 1;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.events += 1;
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for col in 0..self.ncols as u32 {
                let d = self.at(dead, col);
                if d == UNDEF {
                    continue;
                }
                self.set(d, col ^ 1, UNDEF);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                let mu_x = self.at(mu, col);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else {
                    let nu_xi = self.at(nu, col ^ 1);
                    if nu_xi != UNDEF {
                        self.merge(mu, nu_xi);
                    } else {
                        self.set(mu, col, nu);
                        self.set(nu, col ^ 1, mu);
                        if self.record {
                            self.deductions.push((mu, col));
                        }
                    }
                }
            }
        }
    }

    /// Scans `letter(0..len)` from coset `c`, filling gaps by definition when
    /// `fill` is set and otherwise stopping at the first gap wider than one.
    fn scan<F: Fn(usize) -> u32>(
        &mut self,
        c: u32,
        len: usize,
        letter: F,
        fill: bool,
    ) -> Result<(), Halt> {
        let mut f = c;
        let mut i = 0;
        let mut b = c;
        let mut j = len;
        loop {
            while i < j {
                let nf = self.at(f, letter(i));
                if nf == UNDEF {
                    break;
                }
                f = nf;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let nb = self.at(b, letter(j - 1) ^ 1);
                if nb == UNDEF {
                    break;
                }
                b = nb;
                j -= 1;
            }
            if j == i {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            if j == i + 1 {
                let x = letter(i);
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                self.events += 1;
                if self.record {
                    self.deductions.push((f, x));
                }
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, letter(i))?;
        }
    }

    fn scan_word(&mut self, c: u32, w: &[u32], fill: bool) -> Result<(), Halt> {
        self.scan(c, w.len(), |k| w[k], fill)
    }

    fn lookahead(&mut self, relators: &[&[u32]], subgroup: &[Vec<u32>]) -> Result<(), Halt> {
        for w in subgroup {
            let c0 = self.rep(0);
            self.scan_word(c0, w, false)?;
        }
        let mut c = 0u32;
        while (c as usize) < self.n {
            self.poll()?;
            if self.alive(c) {
                for r in relators {
                    self.scan_word(c, r, false)?;
                    if !self.alive(c) {
                        break;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Renumbers live cosets contiguously, preserving order. Returns the new
    /// index of the first live coset at or after `pos`.
    fn compact(&mut self, pos: u32) -> u32 {
        let mut map = vec![UNDEF; self.n];
        let mut next = 0u32;
        let mut new_pos = None;
        for c in 0..self.n as u32 {
            if c >= pos && new_pos.is_none() && self.alive(c) {
                new_pos = Some(next);
            }
            if self.alive(c) {
                map[c as usize] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..self.n as u32 {
            if !self.alive(c) {
                continue;
            }
            for col in 0..self.ncols as u32 {
                let v = self.at(c, col);
                table.push(if v == UNDEF {
                    UNDEF
                } else {
                    let r = self.rep(v);
                    map[r as usize]
                });
            }
        }
        self.table = table;
        self.n = next as usize;
        self.live = self.n;
        self.parent = (0..next).collect();
        self.deductions.clear();
        new_pos.unwrap_or(next)
    }

    /// One HLT sweep from coset `start`; on a full table runs a lookahead,
    /// compacts and resumes.
    fn hlt_sweep(
        &mut self,
        relators: &[&[u32]],
        subgroup: &[Vec<u32>],
        start: u32,
    ) -> Result<(), Halt> {
        let mut c = start;
        loop {
            let step = self.hlt_from(relators, &mut c);
            match step {
                Ok(()) => return Ok(()),
                Err(Halt::Full) => {
                    self.lookahead(relators, subgroup)?;
                    let before = self.n;
                    c = self.compact(c);
                    if self.n >= self.cap || self.n == before {
                        return Err(Halt::Full);
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn hlt_from(&mut self, relators: &[&[u32]], c: &mut u32) -> Result<(), Halt> {
        while (*c as usize) < self.n {
            let cur = *c;
            self.poll()?;
            if self.alive(cur) {
                for r in relators {
                    self.scan_word(cur, r, true)?;
                    if !self.alive(cur) {
                        break;
                    }
                }
                if self.alive(cur) {
                    for col in 0..self.ncols as u32 {
                        if self.at(cur, col) == UNDEF {
                            self.define(cur, col)?;
                        }
                    }
                }
            }
            *c += 1;
        }
        Ok(())
    }

    fn start_subgroup(&mut self, subgroup: &[Vec<u32>]) -> Result<(), Halt> {
        for w in subgroup {
            let c0 = self.rep(0);
            self.scan_word(c0, w, true)?;
        }
        Ok(())
    }

    /// Repeats full sweeps until one makes no change; a quiet sweep means the
    /// table is complete and closed under every relator and subgroup word.
    fn finish(&mut self, relators: &[&[u32]], subgroup: &[Vec<u32>]) -> Result<(), Halt> {
        self.record = false;
        self.deductions.clear();
        loop {
            let before = (self.events, self.n, self.live);
            self.start_subgroup(subgroup)?;
            self.hlt_sweep(relators, subgroup, 0)?;
            if (self.events, self.n, self.live) == before {
                return Ok(());
            }
        }
    }

    fn hlt(&mut self, relators: &[&[u32]], subgroup: &[Vec<u32>]) -> Result<(), Halt> {
        self.start_subgroup(subgroup)?;
        self.hlt_sweep(relators, subgroup, 0)?;
        self.finish(relators, subgroup)
    }

    fn felsch(&mut self, relators: &[&[u32]], subgroup: &[Vec<u32>]) -> Result<(), Halt> {
        let mut by_first: Vec<Vec<Conjugate>> = vec![Vec::new(); self.ncols];
        for (ri, r) in relators.iter().enumerate() {
            for s in 0..r.len() {
                by_first[r[s] as usize].push(Conjugate {
                    rel: ri as u32,
                    start: s as u32,
                    inverse: false,
                });
                by_first[(r[s] ^ 1) as usize].push(Conjugate {
                    rel: ri as u32,
                    start: s as u32,
                    inverse: true,
                });
            }
        }
        self.record = true;
        let mut c = 0u32;
        let mut col = 0u32;
        loop {
            let step = (|| -> Result<bool, Halt> {
                self.start_subgroup(subgroup)?;
                self.process_deductions(relators, &by_first)?;
                loop {
                    while (c as usize) < self.n {
                        if self.alive(c) {
                            while (col as usize) < self.ncols && self.at(c, col) != UNDEF {
                                col += 1;
                            }
                            if (col as usize) < self.ncols {
                                break;
                            }
                        }
                        c += 1;
                        col = 0;
                    }
                    if c as usize >= self.n {
                        return Ok(true);
                    }
                    self.define(c, col)?;
                    self.process_deductions(relators, &by_first)?;
                }
            })();
            match step {
                Ok(_) => break,
                Err(Halt::Full) => {
                    self.lookahead(relators, subgroup)?;
                    let before = self.n;
                    c = self.compact(c);
                    col = 0;
                    if self.n >= self.cap || self.n == before {
                        return Err(Halt::Full);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        self.finish(relators, subgroup)
    }

    fn process_deductions(
        &mut self,
        relators: &[&[u32]],
        by_first: &[Vec<Conjugate>],
    ) -> Result<(), Halt> {
        while let Some((c, col)) = self.deductions.pop() {
            if !self.alive(c) {
                continue;
            }
            self.scan_conjugates(c, &by_first[col as usize], relators)?;
            let d = self.at(c, col);
            if d != UNDEF && self.alive(d) {
                self.scan_conjugates(d, &by_first[(col ^ 1) as usize], relators)?;
            }
        }
        Ok(())
    }

    fn scan_conjugates(
        &mut self,
        c: u32,
        list: &[Conjugate],
        relators: &[&[u32]],
    ) -> Result<(), Halt> {
        for conj in list {
            if !self.alive(c) {
                return Ok(());
            }
            let r = &relators[conj.rel as usize];
            let n = r.len();
            let s = conj.start as usize;
            if conj.inverse {
                self.scan(c, n, |k| r[(s + n - k) % n] ^ 1, false)?;
            } else {
                self.scan(c, n, |k| r[(s + k) % n], false)?;
            }
        }
        Ok(())
    }

    fn standardize(&mut self, trivial_subgroup: bool) -> CosetTable {
        let ngens = self.ncols / 2;
        let root = self.rep(0);
        let mut map = vec![UNDEF; self.n];
        let mut order = vec![root];
        map[root as usize] = 0;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for col in 0..self.ncols as u32 {
                let d = self.at(c, col);
                let d = self.rep(d);
                if map[d as usize] == UNDEF {
                    map[d as usize] = order.len() as u32;
                    order.push(d);
                }
            }
        }
        let mut rows = Vec::with_capacity(order.len() * self.ncols);
        for &c in &order {
            for col in 0..self.ncols as u32 {
                let d = self.at(c, col);
                let d = self.rep(d);
                rows.push(map[d as usize]);
            }
        }
        CosetTable {
            ngens,
            index: order.len(),
            rows,
            trivial_subgroup,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;
    use alloc::format;
    use alloc::string::String;

    fn count(text: &str, strategy: Strategy) -> usize {
        let p = parse_presentation(text).unwrap();
        let t = Enumeration::new(&p, &[]).strategy(strategy).run().unwrap();
        assert!(t.is_complete());
        assert!(t.is_closed_under(&p));
        assert!(t.columns_are_permutations());
        assert!(t.is_transitive());
        t.index()
    }

    #[test]
    fn small_groups_both_strategies() {
        for s in [Strategy::Hlt, Strategy::Felsch] {
            assert_eq!(count("gens a; rels a^4", s), 4);
            assert_eq!(count("gens a,b; rels a^2, b^2, [a,b]", s), 4);
            assert_eq!(count("gens x,y; rels x^2, y^2, [x,y]", s), 4);
            assert_eq!(count("gens a,b; rels a^4, b^2, (a*b)^2", s), 8);
            assert_eq!(count("gens a,b; rels a^4, a^2*b^-2, a^b*a", s), 8);
            assert_eq!(count("gens a,b; rels a^3, b^2, (a*b)^2", s), 6);
        }
    }

    #[test]
    fn trivial_and_degenerate() {
        assert_eq!(count("gens a; rels a", Strategy::Hlt), 1);
        assert_eq!(count("gens a, b; rels a, b", Strategy::Felsch), 1);
        let p = parse_presentation("gens a; rels 1").unwrap();
        let err = Enumeration::new(&p, &[])
            .limits(EnumerationLimits::with_max_cosets(100))
            .run()
            .unwrap_err();
        assert!(matches!(err, EnumerationError::LimitExceeded { .. }));
    }

    #[test]
    fn subgroup_index() {
        let p = parse_presentation("gens a,b; rels a^4, b^2, (a*b)^2").unwrap();
        let t = enumerate(&p, &[Word::generator(0)], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.index(), 2);
        assert!(!t.subgroup_is_trivial());
        let t = enumerate(&p, &[Word::generator(1)], &EnumerationLimits::default()).unwrap();
        assert_eq!(t.index(), 4);
    }

    #[test]
    fn strategies_agree_after_standardization() {
        let p = parse_presentation("gens a,b; rels a^8, b^2, (a*b)^2").unwrap();
        let h = Enumeration::new(&p, &[]).run().unwrap();
        let f = Enumeration::new(&p, &[])
            .strategy(Strategy::Felsch)
            .run()
            .unwrap();
        assert_eq!(h, f);
        assert_eq!(h.index(), 16);
    }

    #[test]
    fn tight_limit_uses_lookahead() {
        // A^5 = B^2 = (AB)^3: alternating group of order 60.
        let p = parse_presentation("gens a,b; rels a^5, b^2, (a*b)^3").unwrap();
        let t = Enumeration::new(&p, &[])
            .limits(EnumerationLimits::with_max_cosets(70))
            .run()
            .unwrap();
        assert_eq!(t.index(), 60);
        assert!(t.is_closed_under(&p));
    }

    #[test]
    fn time_limit_needs_clock() {
        let p = parse_presentation("gens a; rels a^2").unwrap();
        let limits = EnumerationLimits {
            max_cosets: 10,
            max_time: Some(Duration::from_secs(1)),
        };
        assert_eq!(
            Enumeration::new(&p, &[]).limits(limits).run(),
            Err(EnumerationError::NoClock)
        );
    }

    fn many_relators(extra: &[String]) -> Presentation {
        let mut rels: Vec<String> = (1..=64).map(|k| format!("a^{}", 4 * k)).collect();
        rels.extend(extra.iter().cloned());
        parse_presentation(&format!("gens a, b; rels {}", rels.join(", "))).unwrap()
    }

    #[test]
    fn staged_late_relator_collapses() {
        // the 64 shortest give C4 x C2; b^-100 a^2 b^100 only joins later
        let p = many_relators(&["b^2".into(), "[a,b]".into(), "b^-100*a^2*b^100".into()]);
        assert!(p.relators().len() > STAGED_FIRST);
        let small = parse_presentation("gens a, b; rels a^2, b^2, [a,b]").unwrap();
        let want = enumerate(&small, &[], &EnumerationLimits::default()).unwrap();
        for strategy in [Strategy::Hlt, Strategy::Felsch] {
            let t = Enumeration::new(&p, &[]).strategy(strategy).run().unwrap();
            assert_eq!(t, want);
            let h = [Word::generator(1)];
            assert_eq!(
                Enumeration::new(&p, &h)
                    .strategy(strategy)
                    .run()
                    .unwrap()
                    .index(),
                2
            );
        }
    }

    #[test]
    fn staged_overrun_widens() {
        // without the two long relators the group is C4 * Z
        let long_b = format!("a^-{0}*b^2*a^{0}", 300);
        let long_c = format!("a^-{0}*[a,b]*a^{0}", 300);
        let p = many_relators(&[long_b, long_c]);
        let t = enumerate(&p, &[], &EnumerationLimits::with_max_cosets(2000)).unwrap();
        assert_eq!(t.index(), 8);
        assert!(t.is_closed_under(&p));
        let err = enumerate(
            &many_relators(&[]),
            &[],
            &EnumerationLimits::with_max_cosets(2000),
        );
        assert!(matches!(err, Err(EnumerationError::LimitExceeded { .. })));
    }
}
