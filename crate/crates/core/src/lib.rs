//! Exact Gauss sums over the matrix groups `GL_n(F_q)` and `SL_n(F_q)`.
//!
//! Every character sum is evaluated in the ring of cyclotomic integers
//! `Z[ζ_m]` with `m = p(q - 1)`, so closed forms and brute-force sums can be
//! compared for exact equality. The crate is `no_std` and only needs `alloc`.
//!
//! Module map:
//!
//! * [`field`]: `F_q = F_p[x]/(f)`, trace to `F_p`, generator and discrete logs.
//! * [`cyclotomic`]: exact arithmetic in `Z[ζ_m]`.
//! * [`characters`]: additive and multiplicative characters, classical Gauss
//!   sums and hyper-Kloosterman sums.
//! * [`matrix`]: matrices over `F_q`, rank normal form, group enumeration.
//! * [`gauss_sums`]: the closed forms for the matrix-group sums, trace counts,
//!   their brute-force oracles and the verification grid.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod characters;
pub mod cyclotomic;
mod error;
pub mod field;
pub mod gauss_sums;
pub mod matrix;
mod poly;

pub use characters::{AdditiveCharacter, MultiplicativeCharacter};
pub use cyclotomic::{CyclotomicInteger, CyclotomicRing, RootSum};
pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldParams, MultGroupTable};
pub use gauss_sums::{CaseLabel, CheckKind, GridConfig, SumReport};
pub use matrix::{MatrixFq, RankNormalForm};

/// Default cap on the number of candidate matrices (`q^(n^2)`) an
/// enumeration may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 20_000_000;

/// Default cap on the field size `q` accepted by [`FieldParams::new`].
pub const DEFAULT_FIELD_LIMIT: u64 = 1 << 20;
