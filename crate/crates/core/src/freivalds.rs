//! Freivalds-style checking of batched products `y_i = A x_i`.
//!
//! The verifier projects on the left: it draws `u`, precomputes
//! `w^T = u^T A` once, and accepts `(x, y)` iff `w^T x = u^T y`. A wrong `y`
//! passes only when `u` is orthogonal to the error, i.e. with probability `1/p`.
//!
//! In the hash-derived mode `u` is squeezed from SHAKE-128 over the whole
//! batch, so the check becomes publicly reproducible but is bound to the pairs
//! that were hashed.

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake128;

use rand::Rng;

use crate::error::{check_len, Error, RejectReason, Result};
use crate::linalg::{dot_raw, vecmat, FieldMatrix};
use crate::pairing::{counters, ScalarField};

/// Domain separator absorbed before the transcript.
pub const FS_DOMAIN: &[u8] = b"vermat/fs/v1";

pub type Digest = [u8; 32];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChallengeMode {
    Private,
    /// `transcript` is the digest of the full hash input; `bound` holds one
    /// digest per `(x_i, y_i)` pair included in it.
    FiatShamir { transcript: Digest, bound: Vec<Digest> },
}

/// `u` together with `w^T = u^T A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreivaldsChallenge<T> {
    u: Vec<T>,
    w: Vec<T>,
    mode: ChallengeMode,
}

impl<T: Copy> FreivaldsChallenge<T> {
    pub fn u(&self) -> &[T] {
        &self.u
    }

    pub fn w(&self) -> &[T] {
        &self.w
    }

    pub fn mode(&self) -> &ChallengeMode {
        &self.mode
    }

    /// Reassembles a stored challenge; `w` must equal `u^T A`.
    pub fn from_parts(u: Vec<T>, w: Vec<T>, mode: ChallengeMode) -> Self {
        FreivaldsChallenge { u, w, mode }
    }
}

/// Challenge for a caller-chosen projection vector `u`.
pub fn challenge_with<F: ScalarField>(
    field: &F,
    a: &FieldMatrix<F::Elem>,
    u: Vec<F::Elem>,
) -> Result<FreivaldsChallenge<F::Elem>> {
    let w = vecmat(field, &u, a)?;
    Ok(FreivaldsChallenge {
        u,
        w,
        mode: ChallengeMode::Private,
    })
}

/// Private challenge: `u` uniform in `F_p^m`.
pub fn challenge_private<F: ScalarField, R: Rng + ?Sized>(
    field: &F,
    a: &FieldMatrix<F::Elem>,
    rng: &mut R,
) -> FreivaldsChallenge<F::Elem> {
    let u = field.random_vec(a.rows(), rng);
    challenge_with(field, a, u).expect("u has one entry per row")
}

fn absorb_u64(h: &mut Shake128, v: u64) {
    h.update(&v.to_le_bytes());
}

fn absorb_vec<F: ScalarField>(field: &F, h: &mut Shake128, v: &[F::Elem]) {
    absorb_u64(h, v.len() as u64);
    let mut buf = Vec::with_capacity(field.byte_len());
    for e in v {
        buf.clear();
        field.write_elem(e, &mut buf);
        h.update(&buf);
    }
}

fn absorb_matrix<F: ScalarField>(field: &F, h: &mut Shake128, a: &FieldMatrix<F::Elem>) {
    absorb_u64(h, a.rows() as u64);
    absorb_u64(h, a.cols() as u64);
    absorb_u64(h, a.nonzero_entries(field).count() as u64);
    let mut buf = Vec::with_capacity(field.byte_len());
    for (i, j, v) in a.nonzero_entries(field) {
        absorb_u64(h, i as u64);
        absorb_u64(h, j as u64);
        buf.clear();
        field.write_elem(&v, &mut buf);
        h.update(&buf);
    }
}

fn new_hasher<F: ScalarField>(field: &F, label: &[u8]) -> Shake128 {
    let mut h = Shake128::default();
    h.update(FS_DOMAIN);
    h.update(label);
    let p = field.modulus().to_bytes_le();
    absorb_u64(&mut h, p.len() as u64);
    h.update(&p);
    h
}

fn pair_digest<F: ScalarField>(field: &F, x: &[F::Elem], y: &[F::Elem]) -> Digest {
    let mut h = new_hasher(field, b"/pair");
    absorb_vec(field, &mut h, x);
    absorb_vec(field, &mut h, y);
    let mut out = [0u8; 32];
    h.finalize_xof().read(&mut out);
    out
}

/// Squeezes `count` uniform field elements: each candidate is a 256-bit
/// little-endian block truncated to the bit length of `p`, retried while it is
/// `>= p`.
pub fn squeeze_field_elems<F: ScalarField>(field: &F, reader: &mut impl XofReader, count: usize) -> Vec<F::Elem> {
    let p = field.modulus();
    let bits = p.bits();
    let mut out = Vec::with_capacity(count);
    let mut block = [0u8; 32];
    while out.len() < count {
        reader.read(&mut block);
        let mut v = num_bigint::BigUint::from_bytes_le(&block);
        if bits < 256 {
            v &= (num_bigint::BigUint::from(1u8) << bits) - 1u8;
        }
        if v < p {
            out.push(field.from_biguint(&v));
        }
    }
    out
}

/// Hash-derived challenge `u = Hash(A, x_1..x_k, y_1..y_k)`.
pub fn challenge_fs<F: ScalarField>(
    field: &F,
    a: &FieldMatrix<F::Elem>,
    xs: &[Vec<F::Elem>],
    ys: &[Vec<F::Elem>],
) -> Result<FreivaldsChallenge<F::Elem>> {
    if xs.len() != ys.len() {
        return Err(Error::dim(format!(
            "{} inputs but {} outputs",
            xs.len(),
            ys.len()
        )));
    }
    if xs.is_empty() {
        return Err(Error::param("at least one (x, y) pair is required"));
    }
    for (x, y) in xs.iter().zip(ys) {
        check_len("input vector", a.cols(), x.len())?;
        check_len("output vector", a.rows(), y.len())?;
    }
    let mut h = new_hasher(field, b"/challenge");
    absorb_matrix(field, &mut h, a);
    absorb_u64(&mut h, xs.len() as u64);
    for x in xs {
        absorb_vec(field, &mut h, x);
    }
    for y in ys {
        absorb_vec(field, &mut h, y);
    }
    let mut reader = h.finalize_xof();
    let mut transcript = [0u8; 32];
    reader.read(&mut transcript);
    let u = squeeze_field_elems(field, &mut reader, a.rows());
    let w = vecmat(field, &u, a)?;
    let bound = xs.iter().zip(ys).map(|(x, y)| pair_digest(field, x, y)).collect();
    Ok(FreivaldsChallenge {
        u,
        w,
        mode: ChallengeMode::FiatShamir { transcript, bound },
    })
}

/// Accepts iff `w^T x = u^T y`. Costs `2n + 2m` field operations.
///
/// A hash-derived challenge refuses pairs that were not part of its input.
pub fn verify_one<F: ScalarField>(
    field: &F,
    ch: &FreivaldsChallenge<F::Elem>,
    x: &[F::Elem],
    y: &[F::Elem],
) -> Result<()> {
    check_len("input vector", ch.w.len(), x.len())?;
    check_len("output vector", ch.u.len(), y.len())?;
    if let ChallengeMode::FiatShamir { bound, .. } = &ch.mode {
        if !bound.contains(&pair_digest(field, x, y)) {
            return Err(Error::UnboundPair);
        }
    }
    counters::record_field_ops(2 * (x.len() + y.len()) as u64);
    if dot_raw(field, &ch.w, x) == dot_raw(field, &ch.u, y) {
        Ok(())
    } else {
        Err(Error::Rejected(RejectReason::Projection))
    }
}
