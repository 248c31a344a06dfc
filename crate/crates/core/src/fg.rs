//! Per-row pairing protocol for `y = A x`, used as the reference baseline.
//!
//! The prover holds `W = g1^{alpha A + s t^T + rho tau^T}` and returns
//! `z = W * x` next to `y`. The party holding `(s, t, rho, tau)` publishes
//! `VK_x[i] = gT^{s_i (t^T x) + rho_i (tau^T x)}`, and anyone can check
//! `e(z_i, g2) = a^{y_i} VK_x[i]` with `a = gT^alpha`.
//!
//! Key generation costs `mn` exponentiations and so does every proof.

use rand::Rng;

use crate::error::{check_len, Error, RejectReason, Result};
use crate::linalg::{dot, matvec, FieldMatrix, GroupMatrix};
use crate::pairing::{counters, G1Elem, Group, GtElem, PairingEngine, Scalar, ScalarField};

/// Preparator secrets, shared with whoever runs [`probgen`].
#[derive(Clone, Debug)]
pub struct FgSecrets<E: PairingEngine> {
    pub alpha: Scalar<E>,
    pub s: Vec<Scalar<E>>,
    pub t: Vec<Scalar<E>>,
    pub rho: Vec<Scalar<E>>,
    pub tau: Vec<Scalar<E>>,
}

#[derive(Clone, Debug)]
pub struct FgKeys<E: PairingEngine> {
    pub secrets: FgSecrets<E>,
    /// Prover key, `m x n` entries of `G1`.
    pub w: GroupMatrix<G1Elem<E>>,
    /// Public verification key `gT^alpha`.
    pub a: GtElem<E>,
}

#[derive(Clone, Debug)]
pub struct FgProof<E: PairingEngine> {
    pub y: Vec<Scalar<E>>,
    pub z: Vec<G1Elem<E>>,
}

impl<E: PairingEngine> FgSecrets<E> {
    /// Fresh secrets for an `m x n` matrix; `alpha` is nonzero.
    pub fn sample<R: Rng + ?Sized>(suite: &E, m: usize, n: usize, rng: &mut R) -> Self {
        let f = suite.fr();
        FgSecrets {
            alpha: f.random_nonzero(rng),
            s: f.random_vec(m, rng),
            t: f.random_vec(n, rng),
            rho: f.random_vec(m, rng),
            tau: f.random_vec(n, rng),
        }
    }

    fn check_dims(&self, m: usize, n: usize) -> Result<()> {
        check_len("s", m, self.s.len())?;
        check_len("rho", m, self.rho.len())?;
        check_len("t", n, self.t.len())?;
        check_len("tau", n, self.tau.len())
    }
}

/// Row `i` of `W`. Exposed so that very large instances can be streamed.
pub fn w_row<E: PairingEngine>(
    suite: &E,
    a: &FieldMatrix<Scalar<E>>,
    sec: &FgSecrets<E>,
    i: usize,
) -> Vec<G1Elem<E>> {
    let f = suite.fr();
    let row = a.row(i, f.zero());
    let exps: Vec<_> = (0..a.cols())
        .map(|j| {
            let masked = f.add(f.mul(sec.s[i], sec.t[j]), f.mul(sec.rho[i], sec.tau[j]));
            f.add(f.mul(sec.alpha, row[j]), masked)
        })
        .collect();
    counters::record_field_ops(5 * a.cols() as u64);
    suite.g1().gen_exp_vec(f, &exps)
}

pub fn keygen_with<E: PairingEngine>(
    suite: &E,
    a: &FieldMatrix<Scalar<E>>,
    secrets: FgSecrets<E>,
) -> Result<FgKeys<E>> {
    secrets.check_dims(a.rows(), a.cols())?;
    let mut data = Vec::with_capacity(a.rows() * a.cols());
    for i in 0..a.rows() {
        data.extend(w_row(suite, a, &secrets, i));
    }
    let w = GroupMatrix::new(a.rows(), a.cols(), data)?;
    let pk = suite.gt().gen_exp(suite.fr(), &secrets.alpha);
    Ok(FgKeys { secrets, w, a: pk })
}

pub fn keygen<E: PairingEngine, R: Rng + ?Sized>(
    suite: &E,
    a: &FieldMatrix<Scalar<E>>,
    rng: &mut R,
) -> FgKeys<E> {
    let secrets = FgSecrets::sample(suite, a.rows(), a.cols(), rng);
    keygen_with(suite, a, secrets).expect("secrets sampled with matching dimensions")
}

fn vk_exponents<E: PairingEngine>(suite: &E, sec: &FgSecrets<E>, x: &[Scalar<E>]) -> Result<Vec<Scalar<E>>> {
    check_len("input vector", sec.t.len(), x.len())?;
    let f = suite.fr();
    let d = dot(f, &sec.t, x)?;
    let delta = dot(f, &sec.tau, x)?;
    counters::record_field_ops(3 * sec.s.len() as u64);
    Ok(sec
        .s
        .iter()
        .zip(&sec.rho)
        .map(|(&s, &r)| f.add(f.mul(s, d), f.mul(r, delta)))
        .collect())
}

/// `VK_x[i] = gT^{s_i d + rho_i delta}`: one `GT` exponentiation per row.
pub fn probgen<E: PairingEngine>(suite: &E, sec: &FgSecrets<E>, x: &[Scalar<E>]) -> Result<Vec<GtElem<E>>> {
    let exps = vk_exponents(suite, sec, x)?;
    Ok(suite.gt().gen_exp_vec(suite.fr(), &exps))
}

/// Same values as [`probgen`], computed as `e(g1^{s_i d + rho_i delta}, g2)`.
pub fn probgen_by_pairing<E: PairingEngine>(
    suite: &E,
    sec: &FgSecrets<E>,
    x: &[Scalar<E>],
) -> Result<Vec<GtElem<E>>> {
    let exps = vk_exponents(suite, sec, x)?;
    let g2 = suite.g2().generator();
    Ok(suite
        .g1()
        .gen_exp_vec(suite.fr(), &exps)
        .iter()
        .map(|p| suite.pair(p, &g2))
        .collect())
}

pub fn compute<E: PairingEngine>(
    suite: &E,
    a: &FieldMatrix<Scalar<E>>,
    w: &GroupMatrix<G1Elem<E>>,
    x: &[Scalar<E>],
) -> Result<FgProof<E>> {
    if w.rows() != a.rows() || w.cols() != a.cols() {
        return Err(Error::dim(format!(
            "prover key is {}x{} but the matrix is {}x{}",
            w.rows(),
            w.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let y = matvec(suite.fr(), a, x)?;
    let z = (0..w.rows())
        .map(|i| suite.g1().multi_exp(suite.fr(), w.row(i), x))
        .collect::<Result<_>>()?;
    Ok(FgProof { y, z })
}

/// Checks `e(z_i, g2) = a^{y_i} VK_x[i]` for every row and returns `y`.
pub fn verify<E: PairingEngine>(
    suite: &E,
    a: &GtElem<E>,
    vk_x: &[GtElem<E>],
    proof: &FgProof<E>,
) -> Result<Vec<Scalar<E>>> {
    check_len("verification key", proof.y.len(), vk_x.len())?;
    check_len("proof z", proof.y.len(), proof.z.len())?;
    let (f, gt) = (suite.fr(), suite.gt());
    let g2 = suite.g2().generator();
    for (i, ((y, z), vk)) in proof.y.iter().zip(&proof.z).zip(vk_x).enumerate() {
        let lhs = suite.pair(z, &g2);
        let rhs = gt.op(&gt.exp(f, a, y), vk);
        if lhs != rhs {
            return Err(Error::Rejected(RejectReason::Row(i)));
        }
    }
    Ok(proof.y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::counters::{scope, Role};
    use crate::pairing::{suite_real, suite_toy, ToyElem, ToySuite};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn toy() -> ToySuite {
        suite_toy(101).unwrap()
    }

    fn unit_secrets(alpha: u64) -> FgSecrets<ToySuite> {
        FgSecrets {
            alpha,
            s: vec![1],
            t: vec![1],
            rho: vec![1],
            tau: vec![1],
        }
    }

    #[test]
    fn one_by_one_example() {
        let s = toy();
        let a = FieldMatrix::from_rows(vec![vec![1u64]]).unwrap();
        let keys = keygen_with(&s, &a, unit_secrets(1)).unwrap();
        assert_eq!(keys.w.get(0, 0), ToyElem(3));
        assert_eq!(keys.a, ToyElem(1));
        assert_eq!(probgen(&s, &keys.secrets, &[1]).unwrap(), vec![ToyElem(2)]);
        let proof = compute(&s, &a, &keys.w, &[1]).unwrap();
        assert_eq!(verify(&s, &keys.a, &[ToyElem(2)], &proof).unwrap(), vec![1]);
    }

    #[test]
    fn zero_matrix_and_masks_give_identity() {
        let s = toy();
        let a = FieldMatrix::zeros(2, 3, 0u64);
        let sec = FgSecrets {
            alpha: 5,
            s: vec![0, 0],
            t: vec![4, 5, 6],
            rho: vec![0, 0],
            tau: vec![7, 8, 9],
        };
        let keys = keygen_with(&s, &a, sec).unwrap();
        assert!(keys.w.data().iter().all(|e| *e == ToyElem(0)));
    }

    #[test]
    fn prover_key_matches_secrets_entrywise() {
        let s = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let a = FieldMatrix::dense(2, 2, s.fr().random_vec(4, &mut rng)).unwrap();
        let keys = keygen(&s, &a, &mut rng);
        let k = &keys.secrets;
        for i in 0..2 {
            for j in 0..2 {
                let e = k.alpha as u128 * a.get(i, j, 0) as u128
                    + k.s[i] as u128 * k.t[j] as u128
                    + k.rho[i] as u128 * k.tau[j] as u128;
                assert_eq!(keys.w.get(i, j).0 as u128, e % 101);
            }
        }
    }

    #[test]
    fn zero_query_gives_identity_keys() {
        let s = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let sec = FgSecrets::sample(&s, 3, 2, &mut rng);
        assert!(probgen(&s, &sec, &[0, 0]).unwrap().iter().all(|e| *e == ToyElem(0)));
        assert!(probgen(&s, &sec, &[0]).is_err());
    }

    #[test]
    fn gt_exponentiation_equals_pairing() {
        let s = suite_real().unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let sec = FgSecrets::sample(&s, 3, 4, &mut rng);
        let x = s.fr().random_vec(4, &mut rng);
        let (by_exp, r1) = counters::measure(Role::Trustee, || probgen(&s, &sec, &x).unwrap());
        let (by_pair, r2) = counters::measure(Role::Trustee, || probgen_by_pairing(&s, &sec, &x).unwrap());
        assert_eq!(by_exp, by_pair);
        assert_eq!(r1.counts.pairings, 0);
        assert_eq!(r2.counts.pairings, 3);
    }

    fn run_honest<E: PairingEngine>(suite: &E, m: usize, n: usize, rng: &mut ChaCha20Rng) {
        let f = suite.fr();
        let a = FieldMatrix::dense(m, n, f.random_vec(m * n, rng)).unwrap();
        let x = f.random_vec(n, rng);
        let keys = keygen(suite, &a, rng);
        let vk = probgen(suite, &keys.secrets, &x).unwrap();
        let proof = compute(suite, &a, &keys.w, &x).unwrap();
        assert_eq!(verify(suite, &keys.a, &vk, &proof).unwrap(), matvec(f, &a, &x).unwrap());
    }

    #[test]
    fn completeness_toy() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        for q in [101, 2503] {
            let s = suite_toy(q).unwrap();
            for k in 0..100 {
                run_honest(&s, 1 + k % 5, 1 + k % 7, &mut rng);
            }
        }
    }

    #[test]
    fn completeness_real() {
        let s = suite_real().unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for k in 0..100 {
            run_honest(&s, 1 + k % 3, 1 + k % 4, &mut rng);
        }
    }

    #[test]
    fn tampered_output_rejected() {
        let s = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let a = FieldMatrix::dense(3, 3, s.fr().random_vec(9, &mut rng)).unwrap();
        let keys = keygen(&s, &a, &mut rng);
        let x = vec![1, 2, 3];
        let vk = probgen(&s, &keys.secrets, &x).unwrap();
        let honest = compute(&s, &a, &keys.w, &x).unwrap();

        let mut bad_y = honest.clone();
        bad_y.y[1] = s.fr().add(bad_y.y[1], 1);
        assert_eq!(
            verify(&s, &keys.a, &vk, &bad_y),
            Err(Error::Rejected(RejectReason::Row(1)))
        );

        let mut bad_z = honest.clone();
        bad_z.z[2] = s.g1().op(&bad_z.z[2], &s.g1().generator());
        assert_eq!(
            verify(&s, &keys.a, &vk, &bad_z),
            Err(Error::Rejected(RejectReason::Row(2)))
        );
    }

    #[test]
    fn cost_shape() {
        let s = toy();
        let (m, n) = (6, 5);
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let a = FieldMatrix::dense(m, n, s.fr().random_vec(m * n, &mut rng)).unwrap();
        let x: Vec<u64> = (1..=n as u64).collect();
        let keys = keygen(&s, &a, &mut rng);
        let vk = probgen(&s, &keys.secrets, &x).unwrap();
        let sc = scope(Role::Prover);
        let proof = compute(&s, &a, &keys.w, &x).unwrap();
        assert_eq!(sc.finish().counts.g1_exp, (m * n) as u64);
        let sc = scope(Role::Verifier);
        verify(&s, &keys.a, &vk, &proof).unwrap();
        assert_eq!(sc.finish().counts.pairings, m as u64);
    }

    // The three attacks below fall outside the protocol's trust model, which
    // assumes an honest preparator and an honest holder of the secrets.

    #[test]
    fn malicious_preparator_substitutes_matrix() {
        let s = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let a = FieldMatrix::from_rows(vec![vec![1u64, 2], vec![3, 4]]).unwrap();
        let a_fake = FieldMatrix::from_rows(vec![vec![5u64, 6], vec![7, 8]]).unwrap();
        let keys = keygen(&s, &a_fake, &mut rng);
        let x = vec![1, 1];
        let vk = probgen(&s, &keys.secrets, &x).unwrap();
        let proof = compute(&s, &a_fake, &keys.w, &x).unwrap();
        let y = verify(&s, &keys.a, &vk, &proof).unwrap();
        assert_ne!(y, matvec(s.fr(), &a, &x).unwrap());
    }

    #[test]
    fn malicious_trustee_blocks_honest_prover() {
        let s = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let a = FieldMatrix::from_rows(vec![vec![1u64, 2], vec![3, 4]]).unwrap();
        let keys = keygen(&s, &a, &mut rng);
        let x = vec![1, 1];
        let mut vk = probgen(&s, &keys.secrets, &x).unwrap();
        vk[0] = s.gt().op(&vk[0], &s.gt().generator());
        let proof = compute(&s, &a, &keys.w, &x).unwrap();
        assert!(verify(&s, &keys.a, &vk, &proof).is_err());
    }

    #[test]
    fn colluding_server_and_trustee_forge() {
        let s = toy();
        let (f, gt) = (s.fr(), s.gt());
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let a = FieldMatrix::from_rows(vec![vec![1u64, 2], vec![3, 4]]).unwrap();
        let keys = keygen(&s, &a, &mut rng);
        let forged = FgProof::<ToySuite> {
            y: vec![42, 43],
            z: vec![ToyElem(9), ToyElem(17)],
        };
        let g2 = s.g2().generator();
        let vk: Vec<_> = forged
            .y
            .iter()
            .zip(&forged.z)
            .map(|(y, z)| gt.op(&s.pair(z, &g2), &gt.inverse(&gt.exp(f, &keys.a, y))))
            .collect();
        assert_eq!(verify(&s, &keys.a, &vk, &forged).unwrap(), vec![42, 43]);
    }
}
