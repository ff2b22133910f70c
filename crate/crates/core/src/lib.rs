//! Recognition, piercing orders and well-formed ball realizations of
//! inductively pierced combinatorial codes.
//!
//! The pipeline mirrors how the pieces depend on each other:
//!
//! 1. [`code`] parses and normalizes a [`Code`] (a set of codewords over `n`
//!    neurons).
//! 2. [`ideal`] computes the canonical form of the neural ideal, a minimal
//!    set of pseudo-monomials that vanish on every codeword.
//! 3. [`structure`] derives the relationship graph and the containment poset
//!    from a degree-two canonical form.
//! 4. [`piercing`] repeatedly strips elimination neurons to produce a
//!    piercing order, or reports why none exists.
//! 5. [`split`] decides splittability and the minimal dimension of a
//!    well-formed realization by open balls.
//! 6. [`geometry`] builds such a realization ball by ball, and [`verify`]
//!    checks it independently.
//!
//! Neurons are 0-based bit positions everywhere in the API and are printed
//! 1-based.

pub mod cli;
pub mod code;
pub mod config;
pub mod error;
pub mod geometry;
pub mod ideal;
pub mod io;
pub mod piercing;
pub mod set;
pub mod split;
pub mod structure;
pub mod svg;
pub mod verify;

pub use code::{Code, IntervalRef, NeuronFate, NeuronMap};
pub use error::{Error, Result};
pub use geometry::{Ball, Realization, WitnessRegistry};
pub use ideal::{CanonicalForm, PseudoMonomial};
pub use piercing::{PiercingOrder, PiercingStep, RecognitionVerdict};
pub use set::NeuronSet;
pub use split::SplitCertificate;
pub use structure::{ContainmentPoset, PeoResult, RelGraph};
