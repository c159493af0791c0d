//! The Hilbert calculus over the modal signature: axiom schemas, proof
//! checking, the formula/equation translations, catalog semantics and
//! deduction-detachment witness search.

pub mod corpus;
pub mod lddt;
pub mod proof;
pub mod schema;
pub mod semantics;

pub use proof::{check_proof, Justification, Proof, ProofBuilder, ProofError, ProofLine};
pub use schema::{match_schema, AxiomId, Substitution};
pub use semantics::{formula_entails, rho, semantic_entails, soundness_check, tau, EntailmentReport};
