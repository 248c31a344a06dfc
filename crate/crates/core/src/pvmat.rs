//! Publicly delegatable verification of `y = A x` without a trustee.
//!
//! The prover key `omega = g1^{u^T A + t^T + gamma delta v^T}` is the masked
//! projection of the interactive protocol with an extra `v` component. The
//! three secret dot products that a trustee would otherwise compute are
//! delegated back to the prover in reshaped form:
//!
//! * `u^T y` with `u = vec(mu eta^T)` via `z = g1^{eta^T} * Y`;
//! * `t^T x` with `t = vec(rho1 tau1^T + rho2 tau2^T)` via `s_i = g1^{tau_i^T} * X`;
//! * `v^T x` via `C = g1^{delta V} * X`, whose trace is `g1^{delta v^T x}`.
//!
//! Each is checked with a Freivalds projection, after which one pairing
//! equation ties them to `zeta = omega * x`.

use rand::Rng;

use crate::dotprod::{star_matrix, star_vec};
use crate::error::{check_len, Error, RejectReason, Result};
use crate::linalg::{matvec, reshape_lhs, reshape_rhs, split_dims, trace_group, vecmat, FieldMatrix, GroupMatrix};
use crate::pairing::{counters, star_rows, G1Elem, G2Elem, Group, PairingEngine, Scalar, ScalarField};

/// Reshape dimensions: `y` as `b2 x b1`, `x` as `c2 x c1` and as `d2 x d1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PvmatParams {
    pub m: usize,
    pub n: usize,
    pub b1: usize,
    pub b2: usize,
    pub c1: usize,
    pub c2: usize,
    pub d1: usize,
    pub d2: usize,
}

fn cube_root_dims(n: usize) -> (usize, usize) {
    let n = n.max(1) as u128;
    // smallest d1 with 27 d1^3 >= n, smallest d2 with d2^3 >= 27 n^2
    let mut d1 = ((n as f64).cbrt() / 3.0).ceil().max(1.0) as u128;
    while d1 > 1 && 27 * (d1 - 1).pow(3) >= n {
        d1 -= 1;
    }
    while 27 * d1.pow(3) < n {
        d1 += 1;
    }
    let target = 27 * n * n;
    let mut d2 = (target as f64).cbrt().ceil().max(1.0) as u128;
    while d2 > 1 && (d2 - 1).pow(3) >= target {
        d2 -= 1;
    }
    while d2.pow(3) < target {
        d2 += 1;
    }
    (d1 as usize, d2.max(n.div_ceil(d1)) as usize)
}

impl PvmatParams {
    /// `b1 = ceil(sqrt(m)/10)`, `b2 = ceil(10 sqrt(m))`, likewise `c` for `n`,
    /// `d1 = ceil(n^{1/3}/3)`, `d2 = ceil(3 n^{2/3})`; second dimensions are
    /// enlarged when rounding leaves the product short.
    pub fn defaults(m: usize, n: usize) -> Self {
        let (b1, b2) = split_dims(m, 100);
        let (c1, c2) = split_dims(n, 100);
        let (d1, d2) = cube_root_dims(n);
        PvmatParams { m, n, b1, b2, c1, c2, d1, d2 }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(m: usize, n: usize, b1: usize, b2: usize, c1: usize, c2: usize, d1: usize, d2: usize) -> Result<Self> {
        let p = PvmatParams { m, n, b1, b2, c1, c2, d1, d2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::param("matrix dimensions must be positive"));
        }
        for (name, a, b, len) in [
            ("b", self.b1, self.b2, self.m),
            ("c", self.c1, self.c2, self.n),
            ("d", self.d1, self.d2, self.n),
        ] {
            if a == 0 || b == 0 {
                return Err(Error::param(format!("{name}1 and {name}2 must be positive")));
            }
            if a.checked_mul(b).is_none_or(|p| p < len) {
                return Err(Error::param(format!(
                    "{name}1*{name}2 = {a}*{b} does not cover length {len}"
                )));
            }
        }
        Ok(())
    }
}

/// Preparator secrets.
#[derive(Clone, Debug)]
pub struct PvmatSecrets<E: PairingEngine> {
    pub mu: Vec<Scalar<E>>,
    pub eta: Vec<Scalar<E>>,
    pub rho1: Vec<Scalar<E>>,
    pub rho2: Vec<Scalar<E>>,
    pub tau1: Vec<Scalar<E>>,
    pub tau2: Vec<Scalar<E>>,
    pub varpi: Vec<Scalar<E>>,
    pub gamma: Scalar<E>,
    pub delta: Scalar<E>,
    pub v: Vec<Scalar<E>>,
}

impl<E: PairingEngine> PvmatSecrets<E> {
    /// Uniform secrets; `gamma` and `delta` are nonzero.
    pub fn sample<R: Rng + ?Sized>(suite: &E, p: &PvmatParams, rng: &mut R) -> Self {
        let f = suite.fr();
        PvmatSecrets {
            mu: f.random_vec(p.b1, rng),
            eta: f.random_vec(p.b2, rng),
            rho1: f.random_vec(p.c1, rng),
            rho2: f.random_vec(p.c1, rng),
            tau1: f.random_vec(p.c2, rng),
            tau2: f.random_vec(p.c2, rng),
            varpi: f.random_vec(p.d1, rng),
            gamma: f.random_nonzero(rng),
            delta: f.random_nonzero(rng),
            v: f.random_vec(p.n, rng),
        }
    }

    fn check(&self, p: &PvmatParams) -> Result<()> {
        check_len("mu", p.b1, self.mu.len())?;
        check_len("eta", p.b2, self.eta.len())?;
        check_len("rho1", p.c1, self.rho1.len())?;
        check_len("rho2", p.c1, self.rho2.len())?;
        check_len("tau1", p.c2, self.tau1.len())?;
        check_len("tau2", p.c2, self.tau2.len())?;
        check_len("varpi", p.d1, self.varpi.len())?;
        check_len("v", p.n, self.v.len())
    }

    /// First `m` entries of `vec(mu eta^T)`.
    pub fn u(&self, suite: &E, m: usize) -> Vec<Scalar<E>> {
        let f = suite.fr();
        let b2 = self.eta.len();
        (0..m).map(|k| f.mul(self.mu[k / b2], self.eta[k % b2])).collect()
    }

    /// First `n` entries of `vec(rho1 tau1^T + rho2 tau2^T)`.
    pub fn t(&self, suite: &E, n: usize) -> Vec<Scalar<E>> {
        let f = suite.fr();
        let c2 = self.tau1.len();
        (0..n)
            .map(|k| {
                let (i, j) = (k / c2, k % c2);
                f.add(f.mul(self.rho1[i], self.tau1[j]), f.mul(self.rho2[i], self.tau2[j]))
            })
            .collect()
    }
}

/// Prover key.
#[derive(Clone, Debug)]
pub struct EvalKey<E: PairingEngine> {
    pub params: PvmatParams,
    pub a: FieldMatrix<Scalar<E>>,
    pub omega: Vec<G1Elem<E>>,
    pub g1_tau1: Vec<G1Elem<E>>,
    pub g1_tau2: Vec<G1Elem<E>>,
    pub g1_eta: Vec<G1Elem<E>>,
    /// `g1^{delta V}`, `d1 x d2`.
    pub g1_delta_v: GroupMatrix<G1Elem<E>>,
}

/// Public verification key: group elements and dimensions only.
#[derive(Clone, Debug)]
pub struct VerifyKey<E: PairingEngine> {
    pub params: PvmatParams,
    pub g1_tau1: Vec<G1Elem<E>>,
    pub g1_tau2: Vec<G1Elem<E>>,
    pub g2_rho1: Vec<G2Elem<E>>,
    pub g2_rho2: Vec<G2Elem<E>>,
    pub g1_eta: Vec<G1Elem<E>>,
    pub g2_mu: Vec<G2Elem<E>>,
    /// `g1^{delta varpi^T V}`, length `d2`.
    pub g1_delta_varpi_v: Vec<G1Elem<E>>,
    /// `g2^{gamma varpi}`, length `d1`.
    pub g2_gamma_varpi: Vec<G2Elem<E>>,
    pub g2_gamma: G2Elem<E>,
}

#[derive(Clone, Debug)]
pub struct PvmatKeys<E: PairingEngine> {
    pub secrets: PvmatSecrets<E>,
    pub ek: EvalKey<E>,
    pub vk: VerifyKey<E>,
}

#[derive(Clone, Debug)]
pub struct PvmatProof<E: PairingEngine> {
    pub y: Vec<Scalar<E>>,
    pub zeta: G1Elem<E>,
    pub s1: Vec<G1Elem<E>>,
    pub s2: Vec<G1Elem<E>>,
    pub z: Vec<G1Elem<E>>,
    /// `d1 x d1`.
    pub c: GroupMatrix<G1Elem<E>>,
}

/// Key generation from explicit secrets. Any `gamma`, `delta` are accepted
/// here so that degenerate masks can be exercised in tests.
pub fn keygen_with<E: PairingEngine>(
    suite: &E,
    a: FieldMatrix<Scalar<E>>,
    params: PvmatParams,
    secrets: PvmatSecrets<E>,
) -> Result<PvmatKeys<E>> {
    params.validate()?;
    if a.rows() != params.m || a.cols() != params.n {
        return Err(Error::dim(format!(
            "matrix is {}x{}, parameters say {}x{}",
            a.rows(),
            a.cols(),
            params.m,
            params.n
        )));
    }
    secrets.check(&params)?;
    let (f, g1, g2) = (suite.fr(), suite.g1(), suite.g2());
    let (m, n) = (params.m, params.n);
    let s = &secrets;

    let u = s.u(suite, m);
    let t = s.t(suite, n);
    counters::record_field_ops((m + 3 * n) as u64);
    let mut e = vecmat(f, &u, &a)?;
    let gd = f.mul(s.gamma, s.delta);
    for j in 0..n {
        e[j] = f.add(f.add(e[j], t[j]), f.mul(gd, s.v[j]));
    }
    counters::record_field_ops(1 + 3 * n as u64);
    let omega = g1.gen_exp_vec(f, &e);

    let vm = reshape_lhs(f, &s.v, params.d1, params.d2)?;
    let delta_v: Vec<_> = (0..params.d1)
        .flat_map(|i| vm.row(i, f.zero()))
        .map(|x| f.mul(s.delta, x))
        .collect();
    let varpi_v = vecmat(f, &s.varpi, &vm)?;
    let delta_varpi_v: Vec<_> = varpi_v.iter().map(|&x| f.mul(s.delta, x)).collect();
    let gamma_varpi: Vec<_> = s.varpi.iter().map(|&x| f.mul(s.gamma, x)).collect();
    counters::record_field_ops((delta_v.len() + params.d2 + params.d1) as u64);

    let g1_tau1 = g1.gen_exp_vec(f, &s.tau1);
    let g1_tau2 = g1.gen_exp_vec(f, &s.tau2);
    let g1_eta = g1.gen_exp_vec(f, &s.eta);
    let g1_delta_v = GroupMatrix::new(params.d1, params.d2, g1.gen_exp_vec(f, &delta_v))?;

    let vk = VerifyKey {
        params,
        g1_tau1: g1_tau1.clone(),
        g1_tau2: g1_tau2.clone(),
        g2_rho1: g2.gen_exp_vec(f, &s.rho1),
        g2_rho2: g2.gen_exp_vec(f, &s.rho2),
        g1_eta: g1_eta.clone(),
        g2_mu: g2.gen_exp_vec(f, &s.mu),
        g1_delta_varpi_v: g1.gen_exp_vec(f, &delta_varpi_v),
        g2_gamma_varpi: g2.gen_exp_vec(f, &gamma_varpi),
        g2_gamma: g2.gen_exp(f, &s.gamma),
    };
    let ek = EvalKey {
        params,
        a,
        omega,
        g1_tau1,
        g1_tau2,
        g1_eta,
        g1_delta_v,
    };
    Ok(PvmatKeys { secrets, ek, vk })
}

pub fn keygen<E: PairingEngine, R: Rng + ?Sized>(
    suite: &E,
    a: FieldMatrix<Scalar<E>>,
    params: PvmatParams,
    rng: &mut R,
) -> Result<PvmatKeys<E>> {
    params.validate()?;
    let secrets = PvmatSecrets::sample(suite, &params, rng);
    keygen_with(suite, a, params, secrets)
}

/// The encoded input is the input itself.
pub fn probgen<T: Clone>(x: &[T]) -> Vec<T> {
    x.to_vec()
}

pub fn compute<E: PairingEngine>(suite: &E, ek: &EvalKey<E>, x: &[Scalar<E>]) -> Result<PvmatProof<E>> {
    let p = &ek.params;
    check_len("input vector", p.n, x.len())?;
    let f = suite.fr();
    let y = matvec(f, &ek.a, x)?;
    let zeta = suite.g1().multi_exp(f, &ek.omega, x)?;
    let xc = reshape_rhs(f, x, p.c2, p.c1)?;
    let s1 = star_rows(suite, &ek.g1_tau1, &xc)?;
    let s2 = star_rows(suite, &ek.g1_tau2, &xc)?;
    let ym = reshape_rhs(f, &y, p.b2, p.b1)?;
    let z = star_rows(suite, &ek.g1_eta, &ym)?;
    let xd = reshape_rhs(f, x, p.d2, p.d1)?;
    let c = star_matrix(suite, &ek.g1_delta_v, &xd)?;
    Ok(PvmatProof { y, zeta, s1, s2, z, c })
}

/// Verifier randomness: `v1, v2` of length `c1`, `v3` of length `b1`, `v4` of
/// length `d1`.
#[derive(Clone, Debug)]
pub struct Challenges<T> {
    pub v1: Vec<T>,
    pub v2: Vec<T>,
    pub v3: Vec<T>,
    pub v4: Vec<T>,
}

impl<T: Copy + Eq + std::fmt::Debug + Send + Sync + 'static> Challenges<T> {
    pub fn sample<F: ScalarField<Elem = T>, R: Rng + ?Sized>(f: &F, p: &PvmatParams, rng: &mut R) -> Self {
        Challenges {
            v1: f.random_vec(p.c1, rng),
            v2: f.random_vec(p.c1, rng),
            v3: f.random_vec(p.b1, rng),
            v4: f.random_vec(p.d1, rng),
        }
    }
}

/// Outcome of each check, in evaluation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub s1: bool,
    pub s2: bool,
    pub z: bool,
    pub c: bool,
    pub last: bool,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.s1 && self.s2 && self.z && self.c && self.last
    }

    pub fn first_failure(&self) -> Option<RejectReason> {
        [
            (self.s1, RejectReason::SCheck1),
            (self.s2, RejectReason::SCheck2),
            (self.z, RejectReason::ZCheck),
            (self.c, RejectReason::CCheck),
            (self.last, RejectReason::Final),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, r)| r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Stop at the first failed check.
    Production,
    /// Evaluate all five checks.
    Diagnostic,
}

fn check_proof_shape<E: PairingEngine>(p: &PvmatParams, x: &[Scalar<E>], proof: &PvmatProof<E>) -> Result<()> {
    check_len("input vector", p.n, x.len())?;
    check_len("y", p.m, proof.y.len())?;
    check_len("s1", p.c1, proof.s1.len())?;
    check_len("s2", p.c1, proof.s2.len())?;
    check_len("z", p.b1, proof.z.len())?;
    if proof.c.rows() != p.d1 || proof.c.cols() != p.d1 {
        return Err(Error::dim(format!(
            "C is {}x{}, expected {}x{}",
            proof.c.rows(),
            proof.c.cols(),
            p.d1,
            p.d1
        )));
    }
    Ok(())
}

/// Runs the checks with fixed challenges and reports each outcome.
pub fn run_checks<E: PairingEngine>(
    suite: &E,
    vk: &VerifyKey<E>,
    x: &[Scalar<E>],
    proof: &PvmatProof<E>,
    ch: &Challenges<Scalar<E>>,
    mode: VerifyMode,
) -> Result<CheckReport> {
    let p = &vk.params;
    check_proof_shape(p, x, proof)?;
    check_len("v1", p.c1, ch.v1.len())?;
    check_len("v2", p.c1, ch.v2.len())?;
    check_len("v3", p.b1, ch.v3.len())?;
    check_len("v4", p.d1, ch.v4.len())?;
    let (f, g1, gt) = (suite.fr(), suite.g1(), suite.gt());
    let stop = mode == VerifyMode::Production;
    let mut r = CheckReport {
        s1: false,
        s2: false,
        z: false,
        c: false,
        last: false,
    };

    let xc = reshape_rhs(f, x, p.c2, p.c1)?;
    let xv1 = matvec(f, &xc, &ch.v1)?;
    r.s1 = g1.multi_exp(f, &proof.s1, &ch.v1)? == g1.multi_exp(f, &vk.g1_tau1, &xv1)?;
    if stop && !r.s1 {
        return Ok(r);
    }
    let xv2 = matvec(f, &xc, &ch.v2)?;
    r.s2 = g1.multi_exp(f, &proof.s2, &ch.v2)? == g1.multi_exp(f, &vk.g1_tau2, &xv2)?;
    if stop && !r.s2 {
        return Ok(r);
    }
    let d1 = suite.pairing_product(&proof.s1, &vk.g2_rho1)?;
    let d2 = suite.pairing_product(&proof.s2, &vk.g2_rho2)?;

    let ym = reshape_rhs(f, &proof.y, p.b2, p.b1)?;
    let yv3 = matvec(f, &ym, &ch.v3)?;
    r.z = g1.multi_exp(f, &proof.z, &ch.v3)? == g1.multi_exp(f, &vk.g1_eta, &yv3)?;
    if stop && !r.z {
        return Ok(r);
    }
    let h = suite.pairing_product(&proof.z, &vk.g2_mu)?;

    let xd = reshape_rhs(f, x, p.d2, p.d1)?;
    let xv4 = matvec(f, &xd, &ch.v4)?;
    let theta = star_vec(suite, &proof.c, &ch.v4)?;
    let lhs = suite.pairing_product(&theta, &vk.g2_gamma_varpi)?;
    let rhs = suite.pair(&g1.multi_exp(f, &vk.g1_delta_varpi_v, &xv4)?, &vk.g2_gamma);
    r.c = lhs == rhs;
    if stop && !r.c {
        return Ok(r);
    }

    let left = suite.pair(&proof.zeta, &suite.g2().generator());
    let tr = trace_group(g1, &proof.c)?;
    let right = gt.op(&gt.op(&h, &d1), &gt.op(&d2, &suite.pair(&tr, &vk.g2_gamma)));
    r.last = left == right;
    Ok(r)
}

/// Samples fresh challenges, runs the checks in production mode and returns
/// `y` or the first failed check.
pub fn verify<E: PairingEngine, R: Rng + ?Sized>(
    suite: &E,
    vk: &VerifyKey<E>,
    x: &[Scalar<E>],
    proof: &PvmatProof<E>,
    rng: &mut R,
) -> Result<Vec<Scalar<E>>> {
    let ch = Challenges::sample(suite.fr(), &vk.params, rng);
    let report = run_checks(suite, vk, x, proof, &ch, VerifyMode::Production)?;
    match report.first_failure() {
        None => Ok(proof.y.clone()),
        Some(reason) => Err(Error::Rejected(reason)),
    }
}

/// Like [`verify`] but evaluates every check.
pub fn verify_diagnostic<E: PairingEngine, R: Rng + ?Sized>(
    suite: &E,
    vk: &VerifyKey<E>,
    x: &[Scalar<E>],
    proof: &PvmatProof<E>,
    rng: &mut R,
) -> Result<CheckReport> {
    let ch = Challenges::sample(suite.fr(), &vk.params, rng);
    run_checks(suite, vk, x, proof, &ch, VerifyMode::Diagnostic)
}

/// Pairing operations a verification performs at the given dimensions.
pub fn verifier_pairings(p: &PvmatParams) -> u64 {
    (2 * p.c1 + p.b1 + p.d1 + 3) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::counters::{measure, Role};
    use crate::pairing::{suite_real, suite_toy, ToyElem, ToySuite};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn toy() -> ToySuite {
        suite_toy(101).unwrap()
    }

    fn small_params(m: usize, n: usize) -> PvmatParams {
        PvmatParams::new(m, n, 2, m.div_ceil(2), 2, n.div_ceil(2), 2, n.div_ceil(2)).unwrap()
    }

    #[test]
    fn default_dims() {
        let p = PvmatParams::defaults(64, 64);
        assert_eq!((p.b1, p.b2, p.c1, p.c2, p.d1, p.d2), (1, 80, 1, 80, 2, 48));
        let p = PvmatParams::defaults(4096, 4096);
        assert_eq!((p.b1, p.b2, p.d1, p.d2), (7, 640, 6, 768));
        let p = PvmatParams::defaults(1000, 10);
        assert_eq!((p.b1, p.b2, p.c1, p.c2), (4, 317, 1, 32));
        for n in 1..3000 {
            let p = PvmatParams::defaults(n, n);
            p.validate().unwrap();
        }
        assert!(PvmatParams::new(4, 4, 1, 3, 2, 2, 2, 2).is_err());
        assert!(PvmatParams::new(4, 4, 2, 2, 2, 2, 0, 8).is_err());
    }

    #[test]
    fn probgen_is_identity() {
        assert_eq!(probgen(&[3u64, 1, 4]), vec![3, 1, 4]);
        assert_eq!(probgen(&[0u64; 3]), vec![0; 3]);
    }

    /// Every check evaluated with explicit indices on the toy backend.
    fn straight_line(
        keys: &PvmatKeys<ToySuite>,
        a: &[Vec<u64>],
        x: &[u64],
    ) -> (Vec<u64>, u64, Vec<u64>, Vec<u64>, Vec<u64>, Vec<u64>) {
        let q = 101u64;
        let s = &keys.secrets;
        let p = keys.ek.params;
        let (m, n) = (p.m, p.n);
        let xi = |k: usize| if k < n { x[k] } else { 0 };
        let u: Vec<u64> = (0..m).map(|k| s.mu[k / p.b2] * s.eta[k % p.b2] % q).collect();
        let t: Vec<u64> = (0..n)
            .map(|k| (s.rho1[k / p.c2] * s.tau1[k % p.c2] + s.rho2[k / p.c2] * s.tau2[k % p.c2]) % q)
            .collect();
        let y: Vec<u64> = (0..m).map(|i| (0..n).map(|j| a[i][j] * x[j]).sum::<u64>() % q).collect();
        let mut zeta = 0u64;
        for j in 0..n {
            let mut w: u64 = (0..m).map(|i| u[i] * a[i][j] % q).sum::<u64>() + t[j];
            w += s.gamma * s.delta % q * s.v[j];
            zeta = (zeta + w % q * x[j]) % q;
        }
        let sv = |tau: &[u64]| -> Vec<u64> {
            (0..p.c1)
                .map(|k| (0..p.c2).map(|j| tau[j] * xi(k * p.c2 + j)).sum::<u64>() % q)
                .collect()
        };
        let yi = |k: usize| if k < m { y[k] } else { 0 };
        let z: Vec<u64> = (0..p.b1)
            .map(|i| (0..p.b2).map(|j| s.eta[j] * yi(i * p.b2 + j)).sum::<u64>() % q)
            .collect();
        let vi = |k: usize| if k < n { s.v[k] } else { 0 };
        let mut c = Vec::new();
        for i in 0..p.d1 {
            for k in 0..p.d1 {
                let e: u64 = (0..p.d2).map(|j| vi(i * p.d2 + j) * xi(k * p.d2 + j) % q).sum::<u64>() % q;
                c.push(s.delta * e % q);
            }
        }
        (y, zeta, sv(&s.tau1), sv(&s.tau2), z, c)
    }

    #[test]
    fn compute_matches_straight_line_evaluation() {
        let s = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for params in [small_params(4, 4), PvmatParams::defaults(4, 4), small_params(5, 7)] {
            let a: Vec<Vec<u64>> = (0..params.m)
                .map(|_| s.fr().random_vec(params.n, &mut rng))
                .collect();
            let x = s.fr().random_vec(params.n, &mut rng);
            let keys = keygen(&s, FieldMatrix::from_rows(a.clone()).unwrap(), params, &mut rng).unwrap();
            let proof = compute(&s, &keys.ek, &x).unwrap();
            let (y, zeta, s1, s2, z, c) = straight_line(&keys, &a, &x);
            let logs = |v: &[ToyElem<1>]| v.iter().map(|e| e.0).collect::<Vec<_>>();
            assert_eq!(proof.y, y);
            assert_eq!(proof.zeta.0, zeta);
            assert_eq!(logs(&proof.s1), s1);
            assert_eq!(logs(&proof.s2), s2);
            assert_eq!(logs(&proof.z), z);
            assert_eq!(logs(proof.c.data()), c);
        }
    }

    #[test]
    fn omega_log_relation() {
        let s = toy();
        let f = s.fr();
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let params = small_params(4, 4);
        let a = FieldMatrix::dense(4, 4, f.random_vec(16, &mut rng)).unwrap();
        let keys = keygen(&s, a.clone(), params, &mut rng).unwrap();
        let sec = &keys.secrets;
        let u = sec.u(&s, 4);
        let t = sec.t(&s, 4);
        for j in 0..4 {
            let mut e: u64 = (0..4).map(|i| u[i] * a.get(i, j, 0)).sum::<u64>() + t[j];
            e += sec.gamma * sec.delta % 101 * sec.v[j];
            assert_eq!(keys.ek.omega[j].0, e % 101);
        }

        // A = 0 leaves only the masks
        let z = FieldMatrix::zeros(4, 4, 0u64);
        let keys = keygen(&s, z, params, &mut rng).unwrap();
        let sec = &keys.secrets;
        let t = sec.t(&s, 4);
        for j in 0..4 {
            let e = (t[j] + sec.gamma * sec.delta % 101 * sec.v[j]) % 101;
            assert_eq!(keys.ek.omega[j].0, e);
        }
    }

    #[test]
    fn zero_and_unit_inputs() {
        let s = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let params = PvmatParams::defaults(6, 5);
        let a = FieldMatrix::dense(6, 5, s.fr().random_vec(30, &mut rng)).unwrap();
        let keys = keygen(&s, a, params, &mut rng).unwrap();
        let proof = compute(&s, &keys.ek, &[0; 5]).unwrap();
        assert!(proof.y.iter().all(|&v| v == 0));
        assert_eq!(proof.zeta, ToyElem(0));
        assert!(proof.s1.iter().chain(&proof.s2).chain(&proof.z).all(|e| e.0 == 0));
        assert!(proof.c.data().iter().all(|e| e.0 == 0));
        assert_eq!(verify(&s, &keys.vk, &[0; 5], &proof, &mut rng).unwrap(), vec![0; 6]);

        let unit = compute(&s, &keys.ek, &[0, 0, 1, 0, 0]).unwrap();
        assert_eq!(unit.zeta, keys.ek.omega[2]);
    }

    #[test]
    fn mask_algebra() {
        let s = toy();
        let f = s.fr();
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        for _ in 0..50 {
            let params = PvmatParams::defaults(rng.gen_range(1..30), rng.gen_range(1..30));
            let (m, n) = (params.m, params.n);
            let a = FieldMatrix::dense(m, n, f.random_vec(m * n, &mut rng)).unwrap();
            let x = f.random_vec(n, &mut rng);
            let keys = keygen(&s, a, params, &mut rng).unwrap();
            let proof = compute(&s, &keys.ek, &x).unwrap();
            let sec = &keys.secrets;
            let ut_y: u64 = sec.u(&s, m).iter().zip(&proof.y).map(|(a, b)| a * b).sum::<u64>() % 101;
            let tt_x: u64 = sec.t(&s, n).iter().zip(&x).map(|(a, b)| a * b).sum::<u64>() % 101;
            let vt_x: u64 = sec.v.iter().zip(&x).map(|(a, b)| a * b).sum::<u64>() % 101;
            let masked = sec.gamma * sec.delta % 101 * vt_x % 101;
            // e(zeta, g2)
            assert_eq!(proof.zeta.0, (ut_y + tt_x + masked) % 101);
            // H, D1 D2 and e(Trace C, g2^gamma) separately
            let h = s.pairing_product(&proof.z, &keys.vk.g2_mu).unwrap();
            let d1 = s.pairing_product(&proof.s1, &keys.vk.g2_rho1).unwrap();
            let d2 = s.pairing_product(&proof.s2, &keys.vk.g2_rho2).unwrap();
            let tr = trace_group(s.g1(), &proof.c).unwrap();
            let last = s.pair(&tr, &keys.vk.g2_gamma);
            assert_eq!(h.0, ut_y);
            assert_eq!((d1.0 + d2.0) % 101, tt_x);
            assert_eq!(last.0, masked);
        }
    }

    #[test]
    fn degenerate_gamma_seam() {
        let s = toy();
        let f = s.fr();
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        let params = small_params(4, 4);
        let a = FieldMatrix::dense(4, 4, f.random_vec(16, &mut rng)).unwrap();
        let mut sec = PvmatSecrets::sample(&s, &params, &mut rng);
        sec.gamma = 0;
        let keys = keygen_with(&s, a, params, sec).unwrap();
        let x = f.random_vec(4, &mut rng);
        let proof = compute(&s, &keys.ek, &x).unwrap();
        let tr = trace_group(s.g1(), &proof.c).unwrap();
        assert_eq!(s.pair(&tr, &keys.vk.g2_gamma), ToyElem(0));
        assert!(verify(&s, &keys.vk, &x, &proof, &mut rng).is_ok());
    }

    #[test]
    fn each_component_tamper_names_its_check() {
        let s = toy();
        let f = s.fr();
        let mut rng = ChaCha20Rng::seed_from_u64(16);
        let params = small_params(4, 4);
        let a = FieldMatrix::dense(4, 4, f.random_vec(16, &mut rng)).unwrap();
        let keys = keygen(&s, a, params, &mut rng).unwrap();
        let x = vec![1, 2, 3, 4];
        let honest = compute(&s, &keys.ek, &x).unwrap();
        let ch = Challenges {
            v1: vec![1, 1],
            v2: vec![1, 1],
            v3: vec![1, 1],
            v4: vec![1, 1],
        };
        let run = |p: &PvmatProof<ToySuite>| {
            run_checks(&s, &keys.vk, &x, p, &ch, VerifyMode::Diagnostic)
                .unwrap()
                .first_failure()
        };
        assert_eq!(run(&honest), None);
        let g = ToyElem::<1>(1);
        let bump = |e: &mut ToyElem<1>| *e = s.g1().op(e, &g);

        let mut p = honest.clone();
        bump(&mut p.s1[0]);
        assert_eq!(run(&p), Some(RejectReason::SCheck1));
        let mut p = honest.clone();
        bump(&mut p.s2[1]);
        assert_eq!(run(&p), Some(RejectReason::SCheck2));
        let mut p = honest.clone();
        bump(&mut p.z[0]);
        assert_eq!(run(&p), Some(RejectReason::ZCheck));
        let mut p = honest.clone();
        let mut e = p.c.get(1, 0);
        bump(&mut e);
        p.c.set(1, 0, e);
        let r = run_checks(&s, &keys.vk, &x, &p, &ch, VerifyMode::Diagnostic).unwrap();
        // only C is wrong and it is off-diagonal, so the trace is intact
        assert!(!r.c || keys.secrets.varpi[1] == 0);
        assert!(r.last);
        let mut p = honest.clone();
        bump(&mut p.zeta);
        assert_eq!(run(&p), Some(RejectReason::Final));
        let mut p = honest.clone();
        p.y[0] = f.add(p.y[0], 1);
        let r = run_checks(&s, &keys.vk, &x, &p, &ch, VerifyMode::Diagnostic).unwrap();
        assert!(r.s1 && r.s2 && r.c);
        assert!(!r.accepted() || keys.secrets.u(&s, 4)[0] == 0);
    }

    #[test]
    fn production_and_diagnostic_agree() {
        let s = toy();
        let f = s.fr();
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let params = small_params(4, 4);
        let a = FieldMatrix::dense(4, 4, f.random_vec(16, &mut rng)).unwrap();
        let keys = keygen(&s, a, params, &mut rng).unwrap();
        let x = f.random_vec(4, &mut rng);
        let honest = compute(&s, &keys.ek, &x).unwrap();
        for k in 0..200 {
            let mut p = honest.clone();
            match k % 3 {
                0 => p.y[k % 4] = f.random(&mut rng),
                1 => p.s1[k % 2] = ToyElem(f.random(&mut rng)),
                _ => p.c.set(k % 2, (k / 2) % 2, ToyElem(f.random(&mut rng))),
            }
            let ch = Challenges::sample(f, &params, &mut rng);
            let a = run_checks(&s, &keys.vk, &x, &p, &ch, VerifyMode::Production).unwrap();
            let b = run_checks(&s, &keys.vk, &x, &p, &ch, VerifyMode::Diagnostic).unwrap();
            assert_eq!(a.accepted(), b.accepted());
            assert_eq!(a.first_failure(), b.first_failure());
        }
    }

    #[test]
    fn op_counts_at_defaults() {
        let s = toy();
        let f = s.fr();
        let mut rng = ChaCha20Rng::seed_from_u64(18);
        for n in [64usize, 256] {
            let params = PvmatParams::defaults(n, n);
            let a = FieldMatrix::dense(n, n, f.random_vec(n * n, &mut rng)).unwrap();
            let (keys, prep) = measure(Role::Preparator, || keygen(&s, a.clone(), params, &mut rng).unwrap());
            assert!(prep.counts.group_exps() <= (2 * n + 4 * (2 * 80 + 48 + 2)) as u64 + 400);
            assert!(prep.counts.field_ops <= a.cost() + 20 * n as u64);
            let x: Vec<u64> = (0..n).map(|_| f.random_nonzero(&mut rng)).collect();
            let (proof, prover) = measure(Role::Prover, || compute(&s, &keys.ek, &x).unwrap());
            assert_eq!(prover.counts.field_ops, a.cost());
            let nf = n as f64;
            assert!((prover.counts.group_exps() as f64) <= 4.0 * (2.0 * nf.powf(4.0 / 3.0) + nf));
            let (_, ver) = measure(Role::Verifier, || verify(&s, &keys.vk, &x, &proof, &mut rng).unwrap());
            assert!((ver.counts.group_exps() as f64) <= 4.0 * (6.0 * nf.sqrt() + 2.0 * nf.powf(2.0 / 3.0)));
            assert_eq!(ver.counts.pairings, verifier_pairings(&params));
            assert!(ver.counts.pairings as f64 <= 4.0 * 2.0 * nf.sqrt());
            assert!(ver.counts.field_ops <= 20 * n as u64);
        }
    }

    fn run_honest<E: PairingEngine>(s: &E, params: PvmatParams, rng: &mut ChaCha20Rng) {
        let f = s.fr();
        let (m, n) = (params.m, params.n);
        let a = FieldMatrix::dense(m, n, f.random_vec(m * n, rng)).unwrap();
        let x = f.random_vec(n, rng);
        let keys = keygen(s, a.clone(), params, rng).unwrap();
        let proof = compute(s, &keys.ek, &probgen(&x)).unwrap();
        assert_eq!(verify(s, &keys.vk, &x, &proof, rng).unwrap(), matvec(f, &a, &x).unwrap());
    }

    #[test]
    fn completeness() {
        let mut rng = ChaCha20Rng::seed_from_u64(19);
        for q in [101, 2503] {
            let s = suite_toy(q).unwrap();
            for _ in 0..100 {
                let params = PvmatParams::defaults(rng.gen_range(1..20), rng.gen_range(1..20));
                run_honest(&s, params, &mut rng);
            }
        }
        let s = suite_real().unwrap();
        for k in 1..4 {
            run_honest(&s, PvmatParams::defaults(3 * k, 2 * k + 1), &mut rng);
        }
    }

    #[test]
    fn shape_errors() {
        let s = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(20);
        let params = small_params(4, 4);
        let a = FieldMatrix::zeros(4, 4, 0u64);
        assert!(keygen(&s, FieldMatrix::zeros(3, 4, 0u64), params, &mut rng).is_err());
        let keys = keygen(&s, a, params, &mut rng).unwrap();
        assert!(compute(&s, &keys.ek, &[1, 2, 3]).is_err());
        let mut p = compute(&s, &keys.ek, &[1, 2, 3, 4]).unwrap();
        p.z.pop();
        assert!(matches!(verify(&s, &keys.vk, &[1, 2, 3, 4], &p, &mut rng), Err(Error::Dimension(_))));
    }
}
