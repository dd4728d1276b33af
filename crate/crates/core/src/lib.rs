//! Cubes of nonnegative integers whose axis-parallel line sums are exactly
//! `0, 1, …, 3n² − 1` (Sarvate–Beam cubes), with everything needed to build
//! one for every `n ≥ 2`: Latin squares, finite planes and pairwise balanced
//! designs, the bundled building-block cubes, the offset-and-sum
//! composition, and a brute-force search oracle.

pub mod codec;
pub mod composer;
pub mod cube;
pub mod designs;
mod error;
pub mod latin;
pub mod library;
pub mod oracle;
pub mod scalar;

pub use codec::{decode_cube, encode_cube, Format};
pub use composer::{generate_sbc, Strategy};
pub use cube::{add_unit_multiple, embed_accumulate, line_profile, verify_consecutive, Axis, AxisMaps, Line, Mask};
pub use error::{Error, Result};
pub use latin::{GraphKind, LatinSquare};
pub use library::BlockKind;
pub use scalar::Entry;

/// Cube over machine words; enough for every construction up to very large `n`.
pub type Cube = cube::Cube<u64>;
/// Cube over 32-bit entries.
pub type CubeU32 = cube::Cube<u32>;
/// Cube over arbitrary-precision entries.
pub type BigCube = cube::Cube<num_bigint::BigUint>;
pub type LineProfile = cube::LineProfile<u64>;
pub type VerificationReport = cube::VerificationReport<u64>;
