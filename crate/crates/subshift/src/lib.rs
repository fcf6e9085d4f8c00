//! Decision procedures for shifts generated by endomorphisms of a free monoid,
//! erasing ones included.
//!
//! The entry point is [`Morphism`]. From it one computes the letter
//! classification ([`graph`]), languages ([`langtools`]), fixed and
//! quasi-fixed points ([`points`]), the dynamical decisions ([`decide`]) and
//! the structural transforms ([`transforms`]).

pub mod decide;
pub mod error;
pub mod graph;
pub mod langtools;
mod linalg;
pub mod morphism;
pub mod points;
pub mod transforms;
pub mod word;

pub use decide::{Decision, Decomposition, EigenPair, PeriodBound, Verdict, Witness};
pub use error::{Error, Result};
pub use graph::{LetterClassification, MorphismGraph, SccKind, ShiftType, StabilizationConstants};
pub use langtools::{MonoidTrace, PatternAutomaton, ShiftLanguageConstants};
pub use morphism::{DerivationTree, Morphism};
pub use points::{EpPoint, FixedOrbits, FixedPointDescriptor, FixedShape, QuasiFixedDescriptor, QuasiShape};
pub use transforms::{BlockSystem, Normalization, ReturnWordSystem};
pub use word::{Alphabet, Letter, Word};
