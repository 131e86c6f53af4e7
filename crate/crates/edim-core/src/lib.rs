//! Essential l-dimension of the finite classical groups, two ways.
//!
//! The `formulas` module evaluates the closed-form case analysis: for each
//! family (linear, symplectic, orthogonal, unitary and their central
//! quotients) the essential dimension at a prime l coprime to q is a
//! weighted base-l digit sum of a reduced rank, sometimes minus the lowest
//! nonzero digit. `numth` supplies the parameter extraction these formulas
//! run on.
//!
//! The rest of the crate is an independent witness at desk scale:
//!
//! * `wreath` builds the Sylow l-subgroup abstractly as an iterated
//!   wreath-shaped extension (a quotient of (Z/l^s)^n by a relation
//!   lattice, extended by an l-Sylow of the symmetric group) and
//!   enumerates it.
//! * `mackey` computes minimal faithful representation dimensions by
//!   inducing characters from the abelian base (the little-group method)
//!   and running an exact matroid search over socle constraints.
//! * `gf` constructs the same Sylow subgroups as explicit matrix groups
//!   over finite fields, closes them under multiplication, and checks
//!   orders and form membership.
//!
//! Agreement between the closed forms and the enumerative oracles on the
//! verification grid is the correctness argument; the `edim` CLI drives
//! both sides and reports mismatches.

pub mod error;
pub mod formulas;
pub mod gf;
pub mod mackey;
pub mod numth;
pub mod wreath;

pub use error::EdError;
pub use formulas::{essential_dimension, Ed, Family, OrthKind, UnitaryVariant};
pub use gf::SylowMatrixGroup;
pub use numth::SylowParams;
