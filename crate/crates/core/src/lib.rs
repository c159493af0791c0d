//! Finite residuated integral rigs with modal operators: validation, filters,
//! congruences, subdirect irreducibility, compatible functions, the modal
//! Hilbert calculus and small-model enumeration.

pub mod algebra;
pub mod catalog;
pub mod compat;
pub mod congruence;
pub mod enumerate;
pub mod error;
pub mod filters;
pub mod fixtures;
pub mod io;
pub mod irreducible;
pub mod laws;
pub mod logic;
pub mod mask;
pub mod modal;
pub mod term;
pub mod varieties;

pub use algebra::{Elem, FiniteRirig, RirigTables};
pub use error::{Error, Result};
pub use mask::SubsetMask;
pub use modal::{FiniteIModalRirig, IBlock, ModalSignature};
