//! Exact computation of Tate and Tate-Hochschild cohomology for finite
//! dimensional Hopf algebras given by structure constants.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`] — exact scalars over Q, F_p and cyclotomic fields,
//! * [`linalg`] — dense exact linear algebra,
//! * [`algebra`] — structure-constant algebras and the enveloping algebra,
//! * [`hopf`] — Hopf structure, integrals, the modular function and the
//!   Nakayama automorphism,
//! * [`module`] — module representation theory: Hom spaces, radicals,
//!   projective covers, syzygies and stable Hom,
//! * [`tate`] — Tate and Tate-Hochschild cohomology in all integer degrees,
//!   cup products, and the consistency checkers,
//! * [`builders`] — the bundled example algebras (Sweedler, Taft, cyclic
//!   group algebras, dual numbers),
//! * [`json`] — the on-disk JSON formats and canonical serialization.

pub mod algebra;
pub mod field;
pub mod linalg;
pub mod builders;
pub mod hopf;
pub mod json;
pub mod module;
mod poly;
pub mod tate;

pub use algebra::{Algebra, AlgebraElement, AlgebraRef, ValidationReport};
pub use field::{FieldDescriptor, FieldElement};
pub use hopf::{HopfAlgebra, HopfRef, LinearFunctional};
pub use linalg::Matrix;
pub use module::{Engine, Module, ModuleMap, ModuleRef};
pub use tate::{CohomologyTable, TateEngine};
