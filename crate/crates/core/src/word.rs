//! Free-group words, commutator and conjugation builders, presentations.
//!
//! Conventions: `[a, b] = a⁻¹b⁻¹ab` and `a^b = b⁻¹ab`. Under these the
//! expansions `[ab,c] = [a,c]^b [b,c]` and `[a,bc] = [a,c] [a,b]^c` hold as
//! identities in the free group, and so does the Hall–Witt identity
//! `[[a,b⁻¹],c]^b [[b,c⁻¹],a]^c [[c,a⁻¹],b]^a = 1`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A signed generator occurrence.
///
/// Encoded as `2 * generator + (1 if inverse)`, which is also the column of
/// the letter in a coset table; `letter.inverse()` flips the low bit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Letter(((generator as u32) << 1) | inverse as u32)
    }

    pub const fn gen(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub const fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }

    #[inline]
    pub const fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub const fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// `+1` or `-1`.
    pub const fn sign(self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub const fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Column index in a coset table with `2 * ngens` columns.
    #[inline]
    pub const fn code(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}^-1", self.generator())
        } else {
            write!(f, "g{}", self.generator())
        }
    }
}

/// A word in the free group. Not necessarily reduced unless produced by one
/// of the reducing builders; [`Word::free_reduce`] normalises.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub const fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(alloc::vec![Letter::gen(g)])
    }

    /// Reduced word from raw letters.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word(Vec::new());
        for l in letters {
            w.push_reduce(l);
        }
        w
    }

    /// Raw letters, kept exactly as given.
    pub fn from_letters_unreduced(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from `(generator, sign)` pairs, reducing as it goes.
    pub fn from_signed(pairs: &[(usize, i8)]) -> Self {
        Word::from_letters(pairs.iter().map(|&(g, s)| Letter::new(g, s < 0)))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn push_reduce(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn free_reduce(&self) -> Word {
        Word::from_letters(self.0.iter().copied())
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Reduced product `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.free_reduce();
        for &l in &other.0 {
            w.push_reduce(l);
        }
        w
    }

    /// `self^k`; negative `k` powers the inverse.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// Renames generators through `f`, keeping signs.
    pub fn map_generators(&self, mut f: impl FnMut(usize) -> usize) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| Letter::new(f(l.generator()), l.is_inverse()))
                .collect(),
        )
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator()).max()
    }

    /// Formats the word with run-length exponents, e.g. `a^2*b^-1`. The empty
    /// word prints as `1`.
    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> WordDisplay<'a, S> {
        WordDisplay { word: self, names }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub struct WordDisplay<'a, S> {
    word: &'a Word,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for WordDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            let name = self
                .names
                .get(l.generator())
                .map(|s| s.as_ref())
                .unwrap_or("?");
            match (l.is_inverse(), run) {
                (false, 1) => write!(f, "{name}")?,
                (false, k) => write!(f, "{name}^{k}")?,
                (true, k) => write!(f, "{name}^-{k}")?,
            }
            i += run;
        }
        Ok(())
    }
}

pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

/// `[u, v] = u⁻¹v⁻¹uv`, freely reduced.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.inverse().mul(&v.inverse()).mul(u).mul(v)
}

/// `u^v = v⁻¹uv`, freely reduced.
pub fn conjugate(u: &Word, v: &Word) -> Word {
    v.inverse().mul(u).mul(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSymbol {
    pub name: String,
    pub index: usize,
}

/// Generators plus relator words. Relators are stored freely reduced and used
/// exactly as listed: no inverses or cyclic conjugates are added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: Option<String>,
    generators: Vec<GeneratorSymbol>,
    relators: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("relator {index} uses generator {generator}, but only {ngens} are declared")]
    UndeclaredGenerator {
        index: usize,
        generator: usize,
        ngens: usize,
    },
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        relators: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        let mut generators: Vec<GeneratorSymbol> = Vec::new();
        for (index, name) in names.into_iter().enumerate() {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(PresentationError::InvalidName(name));
            }
            if generators.iter().any(|g| g.name == name) {
                return Err(PresentationError::DuplicateGenerator(name));
            }
            generators.push(GeneratorSymbol { name, index });
        }
        let ngens = generators.len();
        for (index, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator() {
                if g >= ngens {
                    return Err(PresentationError::UndeclaredGenerator {
                        index,
                        generator: g,
                        ngens,
                    });
                }
            }
        }
        Ok(Presentation {
            name: None,
            generators,
            relators: relators.iter().map(Word::free_reduce).collect(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn generators(&self) -> &[GeneratorSymbol] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Total number of letters over all relators.
    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.generator_names();
        if let Some(name) = &self.name {
            writeln!(f, "group {name}")?;
        }
        write!(f, "gens ")?;
        for (i, n) in names.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(n)?;
        }
        writeln!(f)?;
        if !self.relators.is_empty() {
            write!(f, "rels ")?;
            for (i, r) in self.relators.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", r.display(&names))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
