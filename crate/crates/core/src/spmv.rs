//! Trustee-assisted verification of `y = A x` whose costs follow `mu(A)`.
//!
//! The preparator folds a secret projection into a single prover key
//! `omega = g1^{u^T A + t^T}`. The prover answers with `y` and
//! `zeta = omega * x`; the trustee, who knows `(u, t)`, publishes
//! `eta = gT^{u^T y + t^T x}`; anyone then checks `e(zeta, g2) = eta`.

use rand::Rng;

use crate::error::{check_len, Error, RejectReason, Result};
use crate::linalg::{dot, matvec, vecmat, FieldMatrix};
use crate::pairing::{counters, G1Elem, Group, GtElem, PairingEngine, Scalar, ScalarField};

/// Secrets handed to the trustee.
#[derive(Clone, Debug)]
pub struct SpmvTrusteeKey<E: PairingEngine> {
    pub u: Vec<Scalar<E>>,
    pub t: Vec<Scalar<E>>,
}

#[derive(Clone, Debug)]
pub struct SpmvKeys<E: PairingEngine> {
    pub trustee: SpmvTrusteeKey<E>,
    /// Prover key, one `G1` element per column.
    pub omega: Vec<G1Elem<E>>,
}

#[derive(Clone, Debug)]
pub struct SpmvProof<E: PairingEngine> {
    pub y: Vec<Scalar<E>>,
    pub zeta: G1Elem<E>,
}

#[derive(Clone, Debug)]
pub struct TrusteeResponse<E: PairingEngine> {
    pub h: Scalar<E>,
    pub d: Scalar<E>,
    pub eta: GtElem<E>,
}

/// Key generation from explicit trustee secrets. Costs `mu(A) + n` field
/// operations and `n` exponentiations.
pub fn keygen_with<E: PairingEngine>(
    suite: &E,
    a: &FieldMatrix<Scalar<E>>,
    trustee: SpmvTrusteeKey<E>,
) -> Result<SpmvKeys<E>> {
    check_len("u", a.rows(), trustee.u.len())?;
    check_len("t", a.cols(), trustee.t.len())?;
    let f = suite.fr();
    let mut e = vecmat(f, &trustee.u, a)?;
    for (ej, tj) in e.iter_mut().zip(&trustee.t) {
        *ej = f.add(*ej, *tj);
    }
    counters::record_field_ops(a.cols() as u64);
    let omega = suite.g1().gen_exp_vec(f, &e);
    Ok(SpmvKeys { trustee, omega })
}

pub fn keygen<E: PairingEngine, R: Rng + ?Sized>(
    suite: &E,
    a: &FieldMatrix<Scalar<E>>,
    rng: &mut R,
) -> SpmvKeys<E> {
    let f = suite.fr();
    let trustee = SpmvTrusteeKey {
        u: f.random_vec(a.rows(), rng),
        t: f.random_vec(a.cols(), rng),
    };
    keygen_with(suite, a, trustee).expect("secrets sampled with matching dimensions")
}

/// `y = A x` in `mu(A)` field operations and `zeta = omega * x` as one
/// `n`-term multi-exponentiation.
pub fn compute<E: PairingEngine>(
    suite: &E,
    a: &FieldMatrix<Scalar<E>>,
    omega: &[G1Elem<E>],
    x: &[Scalar<E>],
) -> Result<SpmvProof<E>> {
    check_len("prover key", a.cols(), omega.len())?;
    let y = matvec(suite.fr(), a, x)?;
    let zeta = suite.g1().multi_exp(suite.fr(), omega, x)?;
    Ok(SpmvProof { y, zeta })
}

/// `h = u^T y`, `d = t^T x`, `eta = gT^{h + d}`.
pub fn trustee<E: PairingEngine>(
    suite: &E,
    key: &SpmvTrusteeKey<E>,
    x: &[Scalar<E>],
    y: &[Scalar<E>],
) -> Result<TrusteeResponse<E>> {
    check_len("input vector", key.t.len(), x.len())?;
    check_len("output vector", key.u.len(), y.len())?;
    let f = suite.fr();
    let h = dot(f, &key.u, y)?;
    let d = dot(f, &key.t, x)?;
    counters::record_field_ops(1);
    let eta = suite.gt().gen_exp(f, &f.add(h, d));
    Ok(TrusteeResponse { h, d, eta })
}

/// One pairing: accepts iff `e(zeta, g2) = eta`, returning `y`.
pub fn verify<E: PairingEngine>(
    suite: &E,
    proof: &SpmvProof<E>,
    resp: &TrusteeResponse<E>,
) -> Result<Vec<Scalar<E>>> {
    if suite.pair(&proof.zeta, &suite.g2().generator()) == resp.eta {
        Ok(proof.y.clone())
    } else {
        Err(Error::Rejected(RejectReason::Pairing))
    }
}
