//! Publicly verifiable outsourced matrix-vector multiplication over prime
//! fields.
//!
//! The crate provides an instrumented bilinear pairing engine with a real
//! (BN curve) and a transparent toy backend, exact linear algebra over `F_p`,
//! and the verification protocols built on them:
//!
//! * [`freivalds`]: private probabilistic checking and its hash-derived variant;
//! * [`fg`]: the classic per-row pairing protocol, kept as a baseline;
//! * [`spmv`]: trustee-assisted verification whose cost follows `mu(A)`;
//! * [`dotprod`]: dot products in an external group checked through
//!   vectorization;
//! * [`pvmat`]: the trustee-free, publicly delegatable protocol;
//! * [`smallfield`]: integer-lifted verification for word-size fields.
//!
//! [`wire`] defines the self-describing binary containers for keys, proofs
//! and responses, and [`bench`] the phase timings and operation counts
//! behind `vermat bench`.

pub mod bench;
pub mod dotprod;
pub mod error;
pub mod fg;
pub mod freivalds;
pub mod linalg;
pub mod pairing;
pub mod pvmat;
pub mod smallfield;
pub mod spmv;
pub mod wire;

pub use error::{Error, RejectReason, Result};
