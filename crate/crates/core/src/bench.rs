//! Benchmark harness: wall clock and op counts per phase, one CSV row per
//! `(protocol, size, phase)`.
//!
//! Instances are dense, uniformly random and derived from the seed and the
//! size only. The `matvec` row is the time spent computing `y = A x` inside
//! Compute (for the dot-product protocols, a standalone dot product).

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::dotprod::{default_dims, ChunkParams, ChunkedKeys, Rank1Keys, DEFAULT_CHUNK_EXPONENT};
use crate::error::{Error, Result};
use crate::linalg::{dot, matvec, take_matvec_time, FieldMatrix};
use crate::pairing::counters::measure;
use crate::pairing::{OpCounts, PairingEngine, Role, ScalarField};
use crate::{fg, freivalds, pvmat, smallfield, spmv};

pub const CSV_HEADER: &str = "protocol,m,n,phase,wall_ms,field_ops,g1_exp,g2_exp,gt_exp,pairings";

/// Protocols the harness knows, by CLI name.
pub const PROTOCOLS: [&str; 8] = [
    "freivalds",
    "fg",
    "spmv",
    "rank1dp",
    "gendp",
    "chunked",
    "pvmat",
    "smallfield",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    KeyGen,
    ProbGen,
    Matvec,
    Compute,
    Trustee,
    Verify,
    /// Ratio row: Compute wall time over the `y = A x` time.
    ComputeOverMatvec,
    /// Ratio row: baseline Compute wall time over this protocol's.
    SpeedupVsFg,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::KeyGen => "keygen",
            Phase::ProbGen => "probgen",
            Phase::Matvec => "matvec",
            Phase::Compute => "compute",
            Phase::Trustee => "trustee",
            Phase::Verify => "verify",
            Phase::ComputeOverMatvec => "compute_over_matvec",
            Phase::SpeedupVsFg => "speedup_vs_fg",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub protocol: String,
    pub m: usize,
    pub n: usize,
    pub phase: Phase,
    /// Mean milliseconds, or the ratio for ratio rows.
    pub wall_ms: f64,
    pub counts: OpCounts,
}

impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.counts;
        write!(
            f,
            "{},{},{},{},{:.4},{},{},{},{},{}",
            self.protocol,
            self.m,
            self.n,
            self.phase.name(),
            self.wall_ms,
            c.field_ops + c.small_ops,
            c.g1_exp,
            c.g2_exp,
            c.gt_exp,
            c.pairings
        )
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub protocols: Vec<String>,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub chunk_a: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            protocols: vec!["pvmat".into(), "fg".into()],
            sizes: vec![64],
            reps: 1,
            seed: 0,
            chunk_a: DEFAULT_CHUNK_EXPONENT,
        }
    }
}

/// Per-phase samples: every wall time, and the counts of the first run.
#[derive(Default)]
struct Samples {
    phases: Vec<(Phase, Vec<Duration>, OpCounts)>,
}

impl Samples {
    fn push(&mut self, phase: Phase, wall: Duration, counts: OpCounts) {
        match self.phases.iter_mut().find(|p| p.0 == phase) {
            Some(p) => p.1.push(wall),
            None => self.phases.push((phase, vec![wall], counts)),
        }
    }

    fn timed<T>(&mut self, phase: Phase, role: Role, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let (v, rep) = measure(role, f);
        self.push(phase, start.elapsed(), rep.counts);
        v
    }

    /// Times Compute and records the matvec time spent inside it.
    fn timed_compute<T>(&mut self, matvec_cost: u64, f: impl FnOnce() -> T) -> T {
        take_matvec_time();
        let v = self.timed(Phase::Compute, Role::Prover, f);
        let inner = take_matvec_time();
        let counts = OpCounts {
            field_ops: matvec_cost,
            ..OpCounts::default()
        };
        self.push(Phase::Matvec, inner, counts);
        v
    }
}

fn instance_rng(seed: u64, m: usize, n: usize) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed ^ ((m as u64) << 40) ^ ((n as u64) << 20))
}

/// Largest prime `p` below `2^16` with `q > m n p^4`.
pub fn smallfield_prime(m: usize, n: usize, q: &BigUint) -> Result<u64> {
    let mut p = smallfield::MAX_SMALL_PRIME - 1;
    while p >= 2 {
        if primal_check::miller_rabin(p) && smallfield::overflow_bound(m, n, p) < *q {
            return Ok(p);
        }
        p -= 1;
    }
    Err(Error::param(format!(
        "no data prime p satisfies q > m*n*p^4 for m = {m}, n = {n}, q = {q}"
    )))
}

fn reject_to_error(e: Error) -> Error {
    match e {
        Error::Rejected(r) => Error::param(format!("honest run rejected ({r}); benchmark aborted")),
        other => other,
    }
}

/// Runs one protocol at `m x n` for `reps` repetitions.
pub fn bench_protocol<E: PairingEngine>(
    suite: &E,
    protocol: &str,
    m: usize,
    n: usize,
    reps: usize,
    seed: u64,
    chunk_a: f64,
) -> Result<Vec<BenchRow>> {
    if m == 0 || n == 0 || reps == 0 {
        return Err(Error::param("sizes and repetitions must be positive"));
    }
    let f = suite.fr();
    let mut rng = instance_rng(seed, m, n);
    let mut s = Samples::default();
    let dot_protocol = matches!(protocol, "rank1dp" | "gendp" | "chunked");
    let (m, n) = if dot_protocol { (1, n) } else { (m, n) };
    let dense_cost = 2 * (m * n) as u64;
    for _ in 0..reps {
        match protocol {
            "freivalds" => {
                let a = FieldMatrix::dense(m, n, f.random_vec(m * n, &mut rng))?;
                let x = f.random_vec(n, &mut rng);
                let ch = s.timed(Phase::KeyGen, Role::Verifier, || freivalds::challenge_private(f, &a, &mut rng));
                let y = s.timed_compute(dense_cost, || matvec(f, &a, &x))?;
                s.timed(Phase::Verify, Role::Verifier, || freivalds::verify_one(f, &ch, &x, &y))
                    .map_err(reject_to_error)?;
            }
            "fg" => {
                let a = FieldMatrix::dense(m, n, f.random_vec(m * n, &mut rng))?;
                let x = f.random_vec(n, &mut rng);
                let keys = s.timed(Phase::KeyGen, Role::Preparator, || fg::keygen(suite, &a, &mut rng));
                let vk_x = s.timed(Phase::ProbGen, Role::Preparator, || fg::probgen(suite, &keys.secrets, &x))?;
                let proof = s.timed_compute(dense_cost, || fg::compute(suite, &a, &keys.w, &x))?;
                s.timed(Phase::Verify, Role::Verifier, || fg::verify(suite, &keys.a, &vk_x, &proof))
                    .map_err(reject_to_error)?;
            }
            "spmv" => {
                let a = FieldMatrix::dense(m, n, f.random_vec(m * n, &mut rng))?;
                let x = f.random_vec(n, &mut rng);
                let keys = s.timed(Phase::KeyGen, Role::Preparator, || spmv::keygen(suite, &a, &mut rng));
                let proof = s.timed_compute(dense_cost, || spmv::compute(suite, &a, &keys.omega, &x))?;
                let resp = s.timed(Phase::Trustee, Role::Trustee, || {
                    spmv::trustee(suite, &keys.trustee, &x, &proof.y)
                })?;
                s.timed(Phase::Verify, Role::Verifier, || spmv::verify(suite, &proof, &resp))
                    .map_err(reject_to_error)?;
            }
            "rank1dp" => {
                let (b1, b2) = default_dims(n);
                let x = f.random_vec(n, &mut rng);
                let keys = s.timed(Phase::KeyGen, Role::Preparator, || Rank1Keys::random(suite, b1, b2, &mut rng))?;
                let ym = s.timed(Phase::ProbGen, Role::Verifier, || keys.probgen(suite, &x))?;
                let u = keys.u(suite);
                let start = Instant::now();
                dot(f, &u[..n], &x)?;
                s.push(Phase::Matvec, start.elapsed(), OpCounts { field_ops: 2 * n as u64, ..Default::default() });
                let z = s.timed(Phase::Compute, Role::Prover, || keys.compute(suite, &ym))?;
                s.timed(Phase::Verify, Role::Verifier, || keys.verify(suite, &ym, &z, &mut rng))
                    .map_err(reject_to_error)?;
            }
            "gendp" | "chunked" => {
                let params = if protocol == "gendp" {
                    let (b1, b2) = default_dims(n);
                    ChunkParams { n, k: n, b1, b2 }
                } else {
                    ChunkParams::from_exponent(n, chunk_a)?
                };
                let u = f.random_vec(n, &mut rng);
                let x = f.random_vec(n, &mut rng);
                let keys = s.timed(Phase::KeyGen, Role::Preparator, || ChunkedKeys::keygen(suite, &u, params, &mut rng))?;
                let ys = s.timed(Phase::ProbGen, Role::Verifier, || keys.probgen(suite, &x))?;
                let start = Instant::now();
                dot(f, &u, &x)?;
                s.push(Phase::Matvec, start.elapsed(), OpCounts { field_ops: 2 * n as u64, ..Default::default() });
                let cs = s.timed(Phase::Compute, Role::Prover, || keys.compute(suite, &ys))?;
                s.timed(Phase::Verify, Role::Verifier, || keys.verify(suite, &ys, &cs, &mut rng))
                    .map_err(reject_to_error)?;
            }
            "pvmat" => {
                let a = FieldMatrix::dense(m, n, f.random_vec(m * n, &mut rng))?;
                let x = f.random_vec(n, &mut rng);
                let params = pvmat::PvmatParams::defaults(m, n);
                let keys = s.timed(Phase::KeyGen, Role::Preparator, || pvmat::keygen(suite, a, params, &mut rng))?;
                let xp = s.timed(Phase::ProbGen, Role::Verifier, || pvmat::probgen(&x));
                let proof = s.timed_compute(dense_cost, || pvmat::compute(suite, &keys.ek, &xp))?;
                s.timed(Phase::Verify, Role::Verifier, || pvmat::verify(suite, &keys.vk, &xp, &proof, &mut rng))
                    .map_err(reject_to_error)?;
            }
            "smallfield" => {
                let p = smallfield_prime(m, n, &suite.order())?;
                let a = FieldMatrix::dense(m, n, (0..m * n).map(|_| rng.gen_range(0..p)).collect())?;
                let x: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
                let keys = s.timed(Phase::KeyGen, Role::Preparator, || smallfield::keygen(suite, &a, p, &mut rng))?;
                let proof = s.timed_compute(dense_cost, || smallfield::compute(suite, &a, &keys.omega, p, &x))?;
                let resp = s.timed(Phase::Trustee, Role::Trustee, || smallfield::trustee(suite, &keys, &x, &proof.y))?;
                let vk = keys.verify_key();
                s.timed(Phase::Verify, Role::Verifier, || smallfield::verify(suite, &vk, &proof, &resp))
                    .map_err(reject_to_error)?;
            }
            other => {
                return Err(Error::param(format!(
                    "unknown protocol {other:?}; expected one of {}",
                    PROTOCOLS.join(", ")
                )))
            }
        }
    }
    let mut rows: Vec<BenchRow> = s
        .phases
        .into_iter()
        .map(|(phase, walls, counts)| BenchRow {
            protocol: protocol.to_string(),
            m,
            n,
            phase,
            wall_ms: walls.iter().map(Duration::as_secs_f64).sum::<f64>() * 1e3 / walls.len() as f64,
            counts,
        })
        .collect();
    let wall = |rows: &[BenchRow], p: Phase| rows.iter().find(|r| r.phase == p).map(|r| r.wall_ms);
    if let (Some(c), Some(mv)) = (wall(&rows, Phase::Compute), wall(&rows, Phase::Matvec)) {
        rows.push(BenchRow {
            protocol: protocol.to_string(),
            m,
            n,
            phase: Phase::ComputeOverMatvec,
            wall_ms: if mv > 0.0 { c / mv } else { f64::INFINITY },
            counts: OpCounts::default(),
        });
    }
    Ok(rows)
}

/// Runs every protocol at every size. Protocols other than the baseline get a
/// speed-up row when the baseline ran at the same size.
pub fn run<E: PairingEngine>(suite: &E, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if let Some(p) = cfg.protocols.iter().find(|p| !PROTOCOLS.contains(&p.as_str())) {
        return Err(Error::param(format!(
            "unknown protocol {p:?}; expected one of {}",
            PROTOCOLS.join(", ")
        )));
    }
    if cfg.sizes.is_empty() || cfg.sizes.contains(&0) {
        return Err(Error::param("sizes must be positive"));
    }
    let mut out = Vec::new();
    for &size in &cfg.sizes {
        let mut at_size = Vec::new();
        for proto in &cfg.protocols {
            at_size.extend(bench_protocol(suite, proto, size, size, cfg.reps, cfg.seed, cfg.chunk_a)?);
        }
        let compute = |p: &str| {
            at_size
                .iter()
                .find(|r| r.protocol == p && r.phase == Phase::Compute)
                .map(|r| (r.wall_ms, r.m, r.n))
        };
        if let Some((base, _, _)) = compute("fg") {
            let extra: Vec<BenchRow> = cfg
                .protocols
                .iter()
                .filter(|p| p.as_str() != "fg")
                .filter_map(|p| compute(p).map(|(w, m, n)| (p, w, m, n)))
                .map(|(p, w, m, n)| BenchRow {
                    protocol: p.clone(),
                    m,
                    n,
                    phase: Phase::SpeedupVsFg,
                    wall_ms: if w > 0.0 { base / w } else { f64::INFINITY },
                    counts: OpCounts::default(),
                })
                .collect();
            at_size.extend(extra);
        }
        out.extend(at_size);
    }
    Ok(out)
}

/// Header plus one line per row.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_string());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::{suite_real, suite_toy};

    #[test]
    fn rows_and_ratios() {
        let s = suite_toy(2503).unwrap();
        let cfg = BenchConfig {
            protocols: vec!["pvmat".into(), "fg".into(), "spmv".into()],
            sizes: vec![8, 16],
            reps: 1,
            seed: 3,
            chunk_a: DEFAULT_CHUNK_EXPONENT,
        };
        let rows = run(&s, &cfg).unwrap();
        for proto in ["pvmat", "fg", "spmv"] {
            for size in [8, 16] {
                let rs: Vec<_> = rows.iter().filter(|r| r.protocol == proto && r.n == size).collect();
                let compute = rs.iter().find(|r| r.phase == Phase::Compute).unwrap();
                let matvec = rs.iter().find(|r| r.phase == Phase::Matvec).unwrap();
                assert!(compute.wall_ms >= matvec.wall_ms);
                assert!(rs.iter().any(|r| r.phase == Phase::ComputeOverMatvec));
            }
        }
        let pv_probgen = rows
            .iter()
            .find(|r| r.protocol == "pvmat" && r.phase == Phase::ProbGen)
            .unwrap();
        assert_eq!(pv_probgen.counts, OpCounts::default());
        assert_eq!(rows.iter().filter(|r| r.phase == Phase::SpeedupVsFg).count(), 4);
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 10));
    }

    #[test]
    fn every_protocol_runs() {
        let s = suite_toy(1_000_000_007).unwrap();
        for p in PROTOCOLS {
            let rows = bench_protocol(&s, p, 9, 9, 2, 1, DEFAULT_CHUNK_EXPONENT).unwrap();
            assert!(rows.iter().any(|r| r.phase == Phase::Verify), "{p}");
        }
    }

    #[test]
    fn deterministic_counts() {
        let s = suite_toy(2503).unwrap();
        let a = bench_protocol(&s, "pvmat", 12, 12, 1, 9, 0.75).unwrap();
        let b = bench_protocol(&s, "pvmat", 12, 12, 1, 9, 0.75).unwrap();
        let counts = |r: &[BenchRow]| r.iter().map(|x| (x.phase, x.counts)).collect::<Vec<_>>();
        assert_eq!(counts(&a), counts(&b));
    }

    #[test]
    fn unknown_protocol_and_small_modulus() {
        let s = suite_toy(101).unwrap();
        let cfg = BenchConfig {
            protocols: vec!["nope".into()],
            ..BenchConfig::default()
        };
        assert!(matches!(run(&s, &cfg), Err(Error::Parameter(_))));
        assert!(bench_protocol(&s, "smallfield", 64, 64, 1, 0, 0.75).is_err());
    }

    #[test]
    fn pvmat_beats_baseline_at_64() {
        let s = suite_real().unwrap();
        let cfg = BenchConfig {
            protocols: vec!["pvmat".into(), "fg".into()],
            sizes: vec![64],
            ..BenchConfig::default()
        };
        let rows = run(&s, &cfg).unwrap();
        let speedup = rows
            .iter()
            .find(|r| r.protocol == "pvmat" && r.phase == Phase::SpeedupVsFg)
            .unwrap();
        assert!(speedup.wall_ms > 1.0, "speed-up {}", speedup.wall_ms);
    }
}
