use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use vermat_core::dotprod::{default_dims, ChunkParams, ChunkedKeys, Rank1Keys};
use vermat_core::freivalds::{challenge_fs, challenge_private};
use vermat_core::linalg::FieldMatrix;
use vermat_core::pairing::{suite_real, suite_toy, PairingEngine, ScalarField};
use vermat_core::wire::*;
use vermat_core::{fg, pvmat, smallfield, spmv};

/// `save . load . save` must reproduce the first encoding byte for byte.
fn roundtrip<E: PairingEngine, B: Bundle<E>>(suite: &E, protocol: Protocol, b: &B) -> B {
    let bytes = save(suite, protocol, b);
    let back: B = load(suite, protocol, &bytes).expect("load");
    assert_eq!(save(suite, protocol, &back), bytes, "{protocol:?} {:?}", B::PART);
    back
}

fn random_matrix<E: PairingEngine>(suite: &E, m: usize, n: usize, rng: &mut ChaCha20Rng) -> FieldMatrix<<E::Fr as ScalarField>::Elem> {
    let f = suite.fr();
    if rng.gen_bool(0.5) {
        FieldMatrix::dense(m, n, f.random_vec(m * n, rng)).unwrap()
    } else {
        let triples = (0..m.max(n))
            .map(|_| ((rng.gen_range(0..m), rng.gen_range(0..n)), f.random_nonzero(rng)))
            .collect::<std::collections::BTreeMap<_, _>>()
            .into_iter()
            .map(|((i, j), v)| (i, j, v))
            .collect();
        FieldMatrix::sparse(f, m, n, triples).unwrap()
    }
}

fn all_bundles<E: PairingEngine>(suite: &E, rng: &mut ChaCha20Rng, m: usize, n: usize) {
    let f = suite.fr();
    let a = random_matrix(suite, m, n, rng);
    let x = f.random_vec(n, rng);

    roundtrip(suite, Protocol::Freivalds, &MatrixKey::<E> { a: a.clone() });
    roundtrip(suite, Protocol::Freivalds, &challenge_private(f, &a, rng));
    let y = vermat_core::linalg::matvec(f, &a, &x).unwrap();
    let fs = challenge_fs(f, &a, std::slice::from_ref(&x), std::slice::from_ref(&y)).unwrap();
    let back = roundtrip(suite, Protocol::Freivalds, &fs);
    assert_eq!(back.mode(), fs.mode());
    roundtrip(suite, Protocol::Freivalds, &OutputProof::<E> { y });

    let keys = fg::keygen(suite, &a, rng);
    roundtrip(suite, Protocol::Fg, &FgEvalKey { a: a.clone(), w: keys.w.clone() });
    roundtrip(suite, Protocol::Fg, &FgClientKey { secrets: keys.secrets.clone(), a: keys.a });
    roundtrip(suite, Protocol::Fg, &FgProblem { vk_x: fg::probgen(suite, &keys.secrets, &x).unwrap() });
    roundtrip(suite, Protocol::Fg, &fg::compute(suite, &a, &keys.w, &x).unwrap());

    let keys = spmv::keygen(suite, &a, rng);
    roundtrip(suite, Protocol::Spmv, &SpmvEvalKey { a: a.clone(), omega: keys.omega.clone() });
    roundtrip(suite, Protocol::Spmv, &keys.trustee);
    roundtrip::<E, ShapeKey>(suite, Protocol::Spmv, &ShapeKey { m, n });
    let proof = spmv::compute(suite, &a, &keys.omega, &x).unwrap();
    roundtrip(suite, Protocol::Spmv, &spmv::trustee(suite, &keys.trustee, &x, &proof.y).unwrap());
    roundtrip(suite, Protocol::Spmv, &proof);

    let (b1, b2) = default_dims(n);
    let r1 = Rank1Keys::random(suite, b1, b2, rng).unwrap();
    roundtrip(suite, Protocol::Rank1Dp, &Rank1EvalKey::of(&r1));
    roundtrip(suite, Protocol::Rank1Dp, &r1);
    let yy = r1.probgen(suite, &x).unwrap();
    roundtrip(suite, Protocol::Rank1Dp, &Rank1Proof::<E> { z: r1.compute(suite, &yy).unwrap() });

    let u = a.row(0, f.zero());
    let params = if rng.gen_bool(0.5) {
        ChunkParams { n, k: n, b1, b2 }
    } else {
        ChunkParams::from_exponent(n, 0.75).unwrap()
    };
    let ck = ChunkedKeys::keygen(suite, &u, params, rng).unwrap();
    roundtrip(suite, Protocol::GenDp, &DotEvalKey::of(&ck));
    roundtrip(suite, Protocol::GenDp, &DotVerifyKey::of(&ck));
    let ys = ck.probgen(suite, &x).unwrap();
    let cs = ck.compute(suite, &ys).unwrap();
    roundtrip(suite, Protocol::GenDp, &DotProof::<E> { b1: params.b1, cs });

    let keys = pvmat::keygen(suite, a.clone(), pvmat::PvmatParams::defaults(m, n), rng).unwrap();
    roundtrip(suite, Protocol::Pvmat, &keys.ek);
    roundtrip(suite, Protocol::Pvmat, &keys.vk);
    roundtrip(suite, Protocol::Pvmat, &pvmat::compute(suite, &keys.ek, &x).unwrap());
}

fn smallfield_bundles<E: PairingEngine>(suite: &E, p: u64, rng: &mut ChaCha20Rng, m: usize, n: usize) {
    let a = FieldMatrix::dense(m, n, (0..m * n).map(|_| rng.gen_range(0..p)).collect()).unwrap();
    let x: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
    let keys = smallfield::keygen(suite, &a, p, rng).unwrap();
    roundtrip(suite, Protocol::SmallField, &SmallFieldEvalKey::<E> { p, a: a.clone(), omega: keys.omega.clone() });
    roundtrip(suite, Protocol::SmallField, &keys);
    roundtrip::<E, _>(suite, Protocol::SmallField, &keys.verify_key());
    let proof = smallfield::compute(suite, &a, &keys.omega, p, &x).unwrap();
    roundtrip(suite, Protocol::SmallField, &smallfield::trustee(suite, &keys, &x, &proof.y).unwrap());
    roundtrip(suite, Protocol::SmallField, &proof);
}

#[test]
fn toy_bundles_round_trip() {
    let s = suite_toy(2503).unwrap();
    let big = suite_toy(1_000_000_007).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for k in 0..50 {
        let (m, n) = (1 + k % 7, 1 + (k * 3) % 8);
        all_bundles(&s, &mut rng, m, n);
        smallfield_bundles(&big, 13, &mut rng, m, n);
    }
}

#[test]
fn real_bundles_round_trip() {
    let s = suite_real().unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    all_bundles(&s, &mut rng, 3, 4);
    smallfield_bundles(&s, 65521, &mut rng, 5, 6);
}
