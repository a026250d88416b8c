//! Computational interpretations of classical proofs, run at desk scale.
//!
//! The crate is layered bottom-up:
//!
//! * [`kernel`]: System T terms, typing, substitution and normal-order normalization.
//! * [`logic`]: first-order formulas, finite predicate environments and the brute-force oracle.
//! * [`translations`]: negative translations, double-negation simplification, modified
//!   realizability and the Dialectica interpretation.
//! * [`extract`]: a small Hilbert calculus, Dialectica extraction and realizer verification.
//! * [`epsilon`]: epsilonization of derivations and the critical-axiom repair solver.
//! * [`learning`]: learning procedures, the sequential drinker instance and state-threaded realizers.
//! * [`game`]: the Eloise/Abelard game driven by extracted strategies.
//! * [`trace`]: the step-list document shared by every traced run, with JSON and DOT output.

pub mod epsilon;
pub mod extract;
pub mod game;
pub mod kernel;
pub mod learning;
pub mod logic;
pub mod syntax;
pub mod trace;
pub mod translations;

pub use kernel::{SimpleType, Term, TypingContext};
pub use logic::{Formula, PredicateEnv};
