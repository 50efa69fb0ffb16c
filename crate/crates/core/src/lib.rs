//! Exact computational algebra for the family of finite groups
//! `G_n = (Z/2)^(2n) ⋊ (Z/3)`, where the cyclic factor acts on the
//! elementary-abelian part block-diagonally with irreducible 2x2 blocks.
//!
//! Everything here is exact: group elements are bit-vectors plus a twist in
//! Z/3, characters take values in `Q(w)` with `w` a primitive cube root of
//! unity, and the group algebra works over arbitrary-precision rationals.
//! On top of the raw algebra the crate computes:
//!
//! * the character table and the dual-orbit parametrisation of the degree-3
//!   irreducibles ([`chars`]),
//! * the three-way subgroup/character lattice `U_i <-> M_i <-> theta_i`
//!   ([`lattice`]),
//! * idempotents, Hecke bases on double cosets, and the eigenvalue and
//!   multiplication-scalar identities they satisfy ([`algebra`]),
//! * genus arithmetic for quotients of a curve with this action, generating
//!   vectors and their validation/search ([`covers`]),
//! * and decomposition reports tying the above together with stable JSON
//!   output ([`report`]).
//!
//! All randomness is seeded and all output orderings are canonical, so every
//! computation is reproducible byte for byte.

pub mod algebra;
pub mod chars;
pub mod covers;
pub mod cyclotomic;
pub mod error;
pub mod f2;
pub mod group;
pub mod lattice;
pub mod report;

pub use algebra::{AlgebraElement, HeckeBasis, RationalIrrep};
pub use chars::{CharacterTable, IrrChar, NCharacter};
pub use covers::{BranchPoint, GeneratingVector, Signature};
pub use cyclotomic::Cyclotomic;
pub use error::Error;
pub use f2::NSubspace;
pub use group::{ConjugacyClass, DoubleCoset, Group, GroupElement, SubgroupHandle};
pub use lattice::LatticeEntry;
pub use report::{CheckOutcome, CheckStatus, DecompositionReport};

/// Largest supported `n`; translation vectors must fit in 32 bits.
pub const MAX_N: u32 = 16;

/// Largest `n` for which the enumeration-based layers (orbits, lattice,
/// characters, reports) are supported. Tables indexed by all `4^n`
/// translations stay under a few tens of megabytes up to here; raw group
/// arithmetic alone works up to [`MAX_N`].
pub const MAX_ENUM_N: u32 = 12;
