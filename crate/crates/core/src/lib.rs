//! Decision procedure for the first-order theory of well orders.
//!
//! Sentences in the language `{<}` are model-checked on ordinals below ω^ω
//! through rank-k types of linear orders, and decided over all well orders
//! by checking every type such an ordinal can have. The crate also
//! generates the finite axiomatization of each ordinal's theory and
//! instances of the transfinite induction schema.
//!
//! ```
//! use wellorder::{parse_sentence, Decider, Status};
//!
//! let mut decider = Decider::default();
//! let least = parse_sentence("exists x forall y (x = y | x < y)").unwrap();
//! assert_eq!(decider.decide(&least, false).unwrap().status, Status::Valid);
//!
//! let unbounded = parse_sentence("forall x exists y (x < y)").unwrap();
//! let verdict = decider.decide(&unbounded, false).unwrap();
//! assert_eq!(verdict.counterexample.unwrap().to_string(), "1");
//! ```

pub mod axiomgen;
pub mod cli;
pub mod decider;
pub mod evaluator;
pub mod formula;
pub mod ordinal;
pub mod typealg;

pub use axiomgen::{lambda_formula, t_alpha, ti_instance, AxiomOptions, AxiomResult};
pub use decider::{
    BuildTerm, Closure, ClosureEntry, DecideError, Decider, Limits, Status, Verdict,
};
pub use evaluator::{equiv, holds_finite_bruteforce, EvalError, EvalState, Evaluator};
pub use formula::{parse_formula, parse_sentence, relativize, Formula, Guard, ParseError, Var};
pub use ordinal::{parse_ordinal, Ordinal, OrdinalError};
pub use typealg::{KType, TypeTable};
