//! Computational group theory core for weak commutativity constructions on
//! finite p-groups.
//!
//! Everything here is pure computation over `alloc`; IO, clocks, catalogs and
//! reports live in the `forge` crate.

#![no_std]

extern crate alloc;

pub mod coset;
pub mod error;
pub mod group;
pub mod homology;
pub mod parse;
pub mod products;
pub mod rocco;
pub mod snf;
pub mod weakcomm;
pub mod word;

pub use coset::{
    enumerate, Clock, CosetTable, Enumeration, EnumerationError, EnumerationLimits, Strategy,
};
pub use error::{Error, Result};
pub use group::{Elem, ElemSet, FiniteGroup, Homomorphism, Subgroup};
pub use homology::{
    abelian_invariants, abelian_invariants_of_quotient, abelianization, exterior_square_abelian,
    h2_bar, h2_bar_with_bound, is_abelian_quotient, AbelianInvariants,
};
pub use parse::{parse_presentation, ParseError};
pub use snf::{smith_normal_form, IntegerMatrix, SmithForm};
pub use word::{commutator, conjugate, free_reduce, GeneratorSymbol, Letter, Presentation, Word};
