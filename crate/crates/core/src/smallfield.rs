//! Trustee-assisted verification for word-size fields, lifted to the integers.
//!
//! Entries of `A` and `x` live in `[0, p)` for a small prime `p`, while the
//! group order `q` is large. The prover returns `y = A x` over `Z` and the
//! verifier reduces it mod `p` after checking it. The secret projection is
//! structured as `u_l = alpha r_i s_j` with `l = i ceil(sqrt(m)) + j` and small
//! `r`, `s`, so that `u^T A` costs small-value work plus `O(n)` large-value
//! operations.
//!
//! `q > m n p^4` is required so that the exponent `(u^T A + t^T) x` never
//! wraps around.

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{check_len, Error, RejectReason, Result};
use crate::linalg::FieldMatrix;
use crate::pairing::{counters, G1Elem, Group, GtElem, PairingEngine, Scalar, ScalarField};

/// Largest data modulus accepted.
pub const MAX_SMALL_PRIME: u64 = 1 << 16;

/// `ceil(sqrt(m))`.
pub fn side_len(m: usize) -> usize {
    let mut s = (m as f64).sqrt() as usize;
    while s * s < m {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= m {
        s -= 1;
    }
    s
}

/// The bound `m n p^4` that the group order must exceed.
pub fn overflow_bound(m: usize, n: usize, p: u64) -> BigUint {
    BigUint::from(m) * BigUint::from(n) * BigUint::from(p).pow(4)
}

/// Two conservative security estimates, in bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecurityEstimate {
    /// Half the bit length of the range `alpha` is drawn from.
    pub from_alpha: f64,
    /// Half the bit length of the range `t` is drawn from.
    pub from_mask: f64,
}

/// Sampling ranges derived from `(m, n, p, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallFieldBounds {
    pub p: u64,
    pub q: BigUint,
    /// `m n (p - 1)^4`, the largest value of `(r s^T) A x` over `Z`.
    pub s_max: BigUint,
    /// `alpha` is drawn from `[1, alpha_max]`.
    pub alpha_max: BigUint,
    /// `t` entries are drawn from `[0, t_bound)`.
    pub t_bound: BigUint,
}

impl SmallFieldBounds {
    pub fn new(m: usize, n: usize, p: u64, q: &BigUint) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::param("matrix dimensions must be positive"));
        }
        if !(2..=MAX_SMALL_PRIME).contains(&p) || !primal_check::miller_rabin(p) {
            return Err(Error::param(format!(
                "data modulus {p} must be a prime at most {MAX_SMALL_PRIME}"
            )));
        }
        let bound = overflow_bound(m, n, p);
        if *q <= bound {
            return Err(Error::param(format!(
                "group order {q} too small: need q > m*n*p^4 = {m}*{n}*{p}^4 = {bound}"
            )));
        }
        let one = BigUint::from(1u8);
        let s_max = BigUint::from(m) * BigUint::from(n) * BigUint::from(p - 1).pow(4);
        let alpha_max = ((q - &one) / (&s_max * 2u8)).max(one.clone());
        let span = BigUint::from(n) * BigUint::from(p - 1);
        let t_bound = (q - &one - &alpha_max * &s_max) / span + &one;
        Ok(SmallFieldBounds {
            p,
            q: q.clone(),
            s_max,
            alpha_max,
            t_bound,
        })
    }

    pub fn security(&self) -> SecurityEstimate {
        SecurityEstimate {
            from_alpha: self.alpha_max.bits() as f64 / 2.0,
            from_mask: self.t_bound.bits() as f64 / 2.0,
        }
    }
}

fn random_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let mut buf = vec![0u8; bytes.max(1)];
    loop {
        rng.fill(&mut buf[..]);
        let mut v = BigUint::from_bytes_le(&buf);
        if !bits.is_multiple_of(8) {
            v &= (BigUint::from(1u8) << bits) - 1u8;
        }
        if v < *bound {
            return v;
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmallFieldKeys<E: PairingEngine> {
    pub bounds: SmallFieldBounds,
    pub m: usize,
    pub n: usize,
    pub alpha: Scalar<E>,
    pub r: Vec<u64>,
    pub s: Vec<u64>,
    pub t: Vec<Scalar<E>>,
    pub omega: Vec<G1Elem<E>>,
}

impl<E: PairingEngine> SmallFieldKeys<E> {
    pub fn side(&self) -> usize {
        self.r.len()
    }

    /// `u` over `Z`, materialized for tests.
    pub fn u(&self, suite: &E) -> Vec<BigUint> {
        let alpha = suite.fr().to_biguint(&self.alpha);
        let side = self.side();
        (0..self.m)
            .map(|l| &alpha * self.r[l / side] * self.s[l % side])
            .collect()
    }
}

fn check_small(a: &FieldMatrix<u64>, p: u64) -> Result<()> {
    if let Some((i, j, v)) = a.nonzero_entries_raw().find(|(_, _, v)| *v >= p) {
        return Err(Error::Range(format!("A[{i},{j}] = {v} is not below {p}")));
    }
    Ok(())
}

fn check_vec_small(what: &str, x: &[u64], p: u64) -> Result<()> {
    if let Some((k, v)) = x.iter().enumerate().find(|(_, v)| **v >= p) {
        return Err(Error::Range(format!("{what}[{k}] = {v} is not below {p}")));
    }
    Ok(())
}

/// `(r s^T) A` over `Z`: `side` small products with `s`, then one combination
/// with `r`. Costs small-value operations only.
fn structured_projection(a: &FieldMatrix<u64>, r: &[u64], s: &[u64]) -> Vec<u128> {
    let side = r.len();
    let n = a.cols();
    let mut partial = vec![0u128; side * n];
    let mut ops = 0u64;
    for (l, k, v) in a.nonzero_entries_raw() {
        partial[(l / side) * n + k] += s[l % side] as u128 * v as u128;
        ops += 2;
    }
    let mut out = vec![0u128; n];
    for i in 0..side {
        for k in 0..n {
            out[k] += r[i] as u128 * partial[i * n + k];
        }
    }
    ops += 2 * (side * n) as u64;
    counters::record_small_ops(ops);
    out
}

/// Key generation with explicit secrets.
pub fn keygen_with<E: PairingEngine>(
    suite: &E,
    a: &FieldMatrix<u64>,
    p: u64,
    alpha: Scalar<E>,
    r: Vec<u64>,
    s: Vec<u64>,
    t: Vec<Scalar<E>>,
) -> Result<SmallFieldKeys<E>> {
    let (m, n) = (a.rows(), a.cols());
    let bounds = SmallFieldBounds::new(m, n, p, &suite.order())?;
    check_small(a, p)?;
    let side = side_len(m);
    check_len("r", side, r.len())?;
    check_len("s", side, s.len())?;
    check_len("t", n, t.len())?;
    let f = suite.fr();
    let rs_a = structured_projection(a, &r, &s);
    let exps: Vec<_> = rs_a
        .iter()
        .zip(&t)
        .map(|(&v, tk)| f.add(f.mul(alpha, f.from_biguint(&BigUint::from(v))), *tk))
        .collect();
    counters::record_field_ops(2 * n as u64);
    let omega = suite.g1().gen_exp_vec(f, &exps);
    Ok(SmallFieldKeys {
        bounds,
        m,
        n,
        alpha,
        r,
        s,
        t,
        omega,
    })
}

/// Samples `r, s` in `[1, p)`, `alpha` in `[1, alpha_max]` and `t` in
/// `[0, t_bound)`, which keeps `(u^T A + t^T) x < q` for all inputs in range.
pub fn keygen<E: PairingEngine, R: Rng + ?Sized>(
    suite: &E,
    a: &FieldMatrix<u64>,
    p: u64,
    rng: &mut R,
) -> Result<SmallFieldKeys<E>> {
    let bounds = SmallFieldBounds::new(a.rows(), a.cols(), p, &suite.order())?;
    let side = side_len(a.rows());
    let f = suite.fr();
    let small = |rng: &mut R| rng.gen_range(1..p.max(2));
    let r: Vec<u64> = (0..side).map(|_| small(rng)).collect();
    let s: Vec<u64> = (0..side).map(|_| small(rng)).collect();
    let alpha = f.from_biguint(&(random_below(&bounds.alpha_max, rng) + 1u8));
    let t = (0..a.cols())
        .map(|_| f.from_biguint(&random_below(&bounds.t_bound, rng)))
        .collect();
    keygen_with(suite, a, p, alpha, r, s, t)
}

/// Integer exponent `(u^T A + t^T) x` behind `zeta`, evaluated without any
/// modular reduction.
pub fn integer_exponent<E: PairingEngine>(
    suite: &E,
    keys: &SmallFieldKeys<E>,
    a: &FieldMatrix<u64>,
    x: &[u64],
) -> BigUint {
    let f = suite.fr();
    let u = keys.u(suite);
    let mut col = vec![BigUint::ZERO; a.cols()];
    for (l, k, v) in a.nonzero_entries_raw() {
        col[k] += &u[l] * v;
    }
    col.iter()
        .zip(&keys.t)
        .zip(x)
        .map(|((c, t), &xk)| (c + f.to_biguint(t)) * xk)
        .sum()
}

/// What a public verifier needs: the moduli context and the shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallFieldVerifyKey {
    pub p: u64,
    pub m: usize,
    pub n: usize,
}

impl<E: PairingEngine> SmallFieldKeys<E> {
    pub fn verify_key(&self) -> SmallFieldVerifyKey {
        SmallFieldVerifyKey {
            p: self.bounds.p,
            m: self.m,
            n: self.n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallFieldProof<E: PairingEngine> {
    /// `A x` over the integers.
    pub y: Vec<u64>,
    pub zeta: G1Elem<E>,
}

pub fn compute<E: PairingEngine>(
    suite: &E,
    a: &FieldMatrix<u64>,
    omega: &[G1Elem<E>],
    p: u64,
    x: &[u64],
) -> Result<SmallFieldProof<E>> {
    check_len("prover key", a.cols(), omega.len())?;
    check_len("input vector", a.cols(), x.len())?;
    check_vec_small("x", x, p)?;
    let start = std::time::Instant::now();
    let mut y = vec![0u128; a.rows()];
    let mut ops = 0u64;
    for (i, j, v) in a.nonzero_entries_raw() {
        y[i] += v as u128 * x[j] as u128;
        ops += 2;
    }
    counters::record_small_ops(ops);
    crate::linalg::add_matvec_time(start.elapsed());
    let y = y
        .into_iter()
        .map(|v| u64::try_from(v).map_err(|_| Error::Range(format!("A x entry {v} exceeds 64 bits"))))
        .collect::<Result<_>>()?;
    let f = suite.fr();
    let xs: Vec<_> = x.iter().map(|&v| f.from_u64(v)).collect();
    let zeta = suite.g1().multi_exp(f, omega, &xs)?;
    Ok(SmallFieldProof { y, zeta })
}

#[derive(Clone, Debug)]
pub struct SmallFieldResponse<E: PairingEngine> {
    pub h: Scalar<E>,
    pub d: Scalar<E>,
    pub eta: GtElem<E>,
}

/// `h = u^T y = alpha (sum r_i s_j y_l)` and `d = t^T x`, then `gT^{h + d}`.
pub fn trustee<E: PairingEngine>(
    suite: &E,
    keys: &SmallFieldKeys<E>,
    x: &[u64],
    y: &[u64],
) -> Result<SmallFieldResponse<E>> {
    check_len("input vector", keys.n, x.len())?;
    check_len("output vector", keys.m, y.len())?;
    let f = suite.fr();
    let side = keys.side();
    let mut acc = BigUint::ZERO;
    for (l, &yl) in y.iter().enumerate() {
        acc += BigUint::from(keys.r[l / side] as u128 * keys.s[l % side] as u128) * yl;
    }
    counters::record_small_ops(3 * keys.m as u64);
    let h = f.mul(keys.alpha, f.from_biguint(&acc));
    let xs: Vec<_> = x.iter().map(|&v| f.from_u64(v)).collect();
    let d = crate::linalg::dot(f, &keys.t, &xs)?;
    counters::record_field_ops(2);
    let eta = suite.gt().gen_exp(f, &f.add(h, d));
    Ok(SmallFieldResponse { h, d, eta })
}

/// Checks the range of `y`, then `e(zeta, g2) = eta`, and returns `y mod p`.
pub fn verify<E: PairingEngine>(
    suite: &E,
    vk: &SmallFieldVerifyKey,
    proof: &SmallFieldProof<E>,
    resp: &SmallFieldResponse<E>,
) -> Result<Vec<u64>> {
    check_len("output vector", vk.m, proof.y.len())?;
    let p = vk.p;
    let ymax = vk.n as u128 * (p as u128 - 1) * (p as u128 - 1);
    if proof.y.iter().any(|&v| v as u128 > ymax) {
        return Err(Error::Rejected(RejectReason::Projection));
    }
    if suite.pair(&proof.zeta, &suite.g2().generator()) != resp.eta {
        return Err(Error::Rejected(RejectReason::Pairing));
    }
    counters::record_small_ops(vk.m as u64);
    Ok(proof.y.iter().map(|v| v % p).collect())
}
