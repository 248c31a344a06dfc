use std::fs;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use vermat_core::bench::{self, BenchConfig};
use vermat_core::dotprod::{default_dims, ChunkParams, ChunkedKeys, Rank1Keys};
use vermat_core::freivalds::{self, FreivaldsChallenge};
use vermat_core::linalg::market::{read_matrix, read_vector, write_vector};
use vermat_core::linalg::{matvec, FieldMatrix};
use vermat_core::pairing::{suite_real, suite_toy, Backend, Group, PairingEngine, Scalar, ScalarField};
use vermat_core::pvmat::{self, PvmatParams};
use vermat_core::wire::*;
use vermat_core::{fg, smallfield, spmv, Error};

use crate::{BackendArg, DimArgs, Failure, KeygenArgs, ProtoArg, SuiteArgs};

type CmdResult = Result<(), Failure>;

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CmdResult {
    fs::write(path, bytes).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

fn read_container(path: &Path) -> Result<Container, Failure> {
    Container::from_bytes(&read_file(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.msg = format!("{}: {}", path.display(), f.msg);
        f
    })
}

fn rng_for(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn check_protocol(requested: Option<ProtoArg>, c: &Container) -> CmdResult {
    match requested {
        Some(p) if p.container_tag() != c.protocol => Err(Failure::malformed(format!(
            "file holds {} data, not {:?}",
            c.protocol.name(),
            p
        ))),
        _ => Ok(()),
    }
}

/// Runs `$body` with `$s` bound to the suite a container was written for.
macro_rules! with_suite {
    ($desc:expr, $s:ident => $body:expr) => {
        match $desc.backend {
            Backend::Toy => {
                let q = u64::try_from(&$desc.order).map_err(|_| Failure::malformed("toy order exceeds 64 bits"))?;
                let $s = suite_toy(q)?;
                $body
            }
            Backend::Real => {
                let $s = suite_real()?;
                $body
            }
        }
    };
}

fn print_scalars<E: PairingEngine>(suite: &E, v: &[Scalar<E>]) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(write_vector(suite.fr(), v).as_bytes());
}

fn matrix<E: PairingEngine>(suite: &E, args: &KeygenArgs) -> Result<FieldMatrix<Scalar<E>>, Failure> {
    let path = args
        .matrix
        .as_deref()
        .ok_or_else(|| Failure::params(format!("{:?} needs --matrix", args.protocol)))?;
    Ok(read_matrix(suite.fr(), &read_text(path)?)?)
}

fn single_row<E: PairingEngine>(suite: &E, a: &FieldMatrix<Scalar<E>>) -> Result<Vec<Scalar<E>>, Failure> {
    if a.rows() != 1 {
        return Err(Failure::params(format!(
            "dot-product keys take a 1 x n matrix, got {} x {}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(a.row(0, suite.fr().zero()))
}

fn dot_dims(dims: &DimArgs, n: usize) -> Result<(usize, usize), Failure> {
    let (b1, b2) = default_dims(n);
    let (b1, b2) = (dims.b1.unwrap_or(b1), dims.b2.unwrap_or(b2));
    if b1 == 0 || b2 == 0 || b1 * b2 < n {
        return Err(Failure::params(format!("b1 x b2 = {b1} x {b2} does not cover length {n}")));
    }
    Ok((b1, b2))
}

fn pvmat_params(dims: &DimArgs, m: usize, n: usize) -> Result<PvmatParams, Failure> {
    let d = PvmatParams::defaults(m, n);
    Ok(PvmatParams::new(
        m,
        n,
        dims.b1.unwrap_or(d.b1),
        dims.b2.unwrap_or(d.b2),
        dims.c1.unwrap_or(d.c1),
        dims.c2.unwrap_or(d.c2),
        dims.d1.unwrap_or(d.d1),
        dims.d2.unwrap_or(d.d2),
    )?)
}

/// Integer view of a matrix whose entries must lie in `[0, p)`.
fn small_matrix<E: PairingEngine>(suite: &E, a: &FieldMatrix<Scalar<E>>, p: u64) -> Result<FieldMatrix<u64>, Failure> {
    let f = suite.fr();
    let bad = std::cell::RefCell::new(None);
    let out = a.map(|v| {
        let b = f.to_biguint(&v);
        match u64::try_from(&b) {
            Ok(x) if x < p => x,
            _ => {
                bad.borrow_mut().get_or_insert(b);
                0
            }
        }
    });
    match bad.into_inner() {
        Some(b) => Err(Error::Range(format!("matrix entry {b} is not below {p}")).into()),
        None => Ok(out),
    }
}

fn small_vector(text: &str, p: u64) -> Result<Vec<u64>, Failure> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('%') && !l.starts_with('#'))
        .map(|l| {
            let v: u64 = l.parse().map_err(|_| Failure::malformed(format!("not an integer: {l:?}")))?;
            if v >= p {
                return Err(Error::Range(format!("input entry {v} is not below {p}")).into());
            }
            Ok(v)
        })
        .collect()
}

pub fn keygen(s: &SuiteArgs, args: &KeygenArgs) -> CmdResult {
    match s.backend {
        BackendArg::Toy => keygen_with(&suite_toy(s.modulus)?, s, args),
        BackendArg::Real => keygen_with(&suite_real()?, s, args),
    }
}

fn keygen_with<E: PairingEngine>(suite: &E, s: &SuiteArgs, args: &KeygenArgs) -> CmdResult {
    let mut rng = rng_for(s.seed);
    let tag = args.protocol.container_tag();
    let f = suite.fr();
    let (ek, vk) = match args.protocol {
        ProtoArg::Freivalds => {
            let a = matrix(suite, args)?;
            let ch = freivalds::challenge_private(f, &a, &mut rng);
            (save(suite, tag, &MatrixKey::<E> { a }), save(suite, tag, &ch))
        }
        ProtoArg::Fg => {
            let a = matrix(suite, args)?;
            let keys = fg::keygen(suite, &a, &mut rng);
            let client = FgClientKey {
                secrets: keys.secrets,
                a: keys.a,
            };
            (save(suite, tag, &FgEvalKey { a, w: keys.w }), save(suite, tag, &client))
        }
        ProtoArg::Spmv => {
            let a = matrix(suite, args)?;
            let keys = spmv::keygen(suite, &a, &mut rng);
            write_file(&args.trustee, &save(suite, tag, &keys.trustee))?;
            let shape = ShapeKey { m: a.rows(), n: a.cols() };
            let ek = SpmvEvalKey { a, omega: keys.omega };
            (save(suite, tag, &ek), save::<E, _>(suite, tag, &shape))
        }
        ProtoArg::Rank1dp => {
            let n = match (args.len, &args.matrix) {
                (Some(n), _) => n,
                (None, Some(_)) => single_row(suite, &matrix(suite, args)?)?.len(),
                (None, None) => return Err(Failure::params("rank1dp needs --len or --matrix")),
            };
            let (b1, b2) = dot_dims(&args.dims, n)?;
            let keys = Rank1Keys::random(suite, b1, b2, &mut rng)?;
            (save(suite, tag, &Rank1EvalKey::of(&keys)), save(suite, tag, &keys))
        }
        ProtoArg::Gendp | ProtoArg::Chunked => {
            let u = single_row(suite, &matrix(suite, args)?)?;
            let params = if args.protocol == ProtoArg::Gendp {
                let (b1, b2) = dot_dims(&args.dims, u.len())?;
                ChunkParams { n: u.len(), k: u.len(), b1, b2 }
            } else {
                ChunkParams::from_exponent(u.len(), args.chunk_a)?
            };
            let keys = ChunkedKeys::keygen(suite, &u, params, &mut rng)?;
            (save(suite, tag, &DotEvalKey::of(&keys)), save(suite, tag, &DotVerifyKey::of(&keys)))
        }
        ProtoArg::Pvmat => {
            let a = matrix(suite, args)?;
            let params = pvmat_params(&args.dims, a.rows(), a.cols())?;
            let keys = pvmat::keygen(suite, a, params, &mut rng)?;
            (save(suite, tag, &keys.ek), save(suite, tag, &keys.vk))
        }
        ProtoArg::Smallfield => {
            let p = args.small_prime;
            let a = matrix(suite, args)?;
            smallfield::SmallFieldBounds::new(a.rows(), a.cols(), p, &suite.order())?;
            let a = small_matrix(suite, &a, p)?;
            let keys = smallfield::keygen(suite, &a, p, &mut rng)?;
            write_file(&args.trustee, &save(suite, tag, &keys))?;
            let ek = SmallFieldEvalKey::<E> {
                p,
                a,
                omega: keys.omega.clone(),
            };
            (save(suite, tag, &ek), save::<E, _>(suite, tag, &keys.verify_key()))
        }
    };
    write_file(&args.ek, &ek)?;
    write_file(&args.vk, &vk)
}

/// For fg this is the per-input key `VK_x`; for every other protocol the
/// encoding is the input itself and is written back as text.
pub fn probgen(protocol: Option<ProtoArg>, vk: &Path, x: &Path, out: &Path) -> CmdResult {
    let c = read_container(vk)?;
    check_protocol(protocol, &c)?;
    with_suite!(c.suite, s => probgen_with(&s, &c, x, out))
}

fn probgen_with<E: PairingEngine>(suite: &E, c: &Container, x: &Path, out: &Path) -> CmdResult {
    let text = read_text(x)?;
    match c.protocol {
        Protocol::Fg => {
            let key: FgClientKey<E> = open(suite, c.protocol, c)?;
            let xs = read_vector(suite.fr(), &text)?;
            let vk_x = fg::probgen(suite, &key.secrets, &xs)?;
            write_file(out, &save(suite, c.protocol, &FgProblem { vk_x }))
        }
        Protocol::SmallField => {
            let vk: smallfield::SmallFieldVerifyKey = open(suite, c.protocol, c)?;
            let xs = small_vector(&text, vk.p)?;
            let lines: String = xs.iter().map(|v| format!("{v}\n")).collect();
            write_file(out, lines.as_bytes())
        }
        _ => {
            let xs = read_vector(suite.fr(), &text)?;
            write_file(out, write_vector(suite.fr(), &pvmat::probgen(&xs)).as_bytes())
        }
    }
}

pub fn compute(protocol: Option<ProtoArg>, ek: &Path, x: &Path, proof: &Path) -> CmdResult {
    let c = read_container(ek)?;
    check_protocol(protocol, &c)?;
    with_suite!(c.suite, s => compute_with(&s, &c, x, proof))
}

fn compute_with<E: PairingEngine>(suite: &E, c: &Container, x: &Path, proof: &Path) -> CmdResult {
    let text = read_text(x)?;
    let f = suite.fr();
    let tag = c.protocol;
    let bytes = match tag {
        Protocol::Freivalds => {
            let key: MatrixKey<E> = open(suite, tag, c)?;
            let y = matvec(f, &key.a, &read_vector(f, &text)?)?;
            save(suite, tag, &OutputProof::<E> { y })
        }
        Protocol::Fg => {
            let key: FgEvalKey<E> = open(suite, tag, c)?;
            save(suite, tag, &fg::compute(suite, &key.a, &key.w, &read_vector(f, &text)?)?)
        }
        Protocol::Spmv => {
            let key: SpmvEvalKey<E> = open(suite, tag, c)?;
            save(suite, tag, &spmv::compute(suite, &key.a, &key.omega, &read_vector(f, &text)?)?)
        }
        Protocol::Rank1Dp => {
            let keys = open::<E, Rank1EvalKey<E>>(suite, tag, c)?.into_keys();
            let ym = keys.probgen(suite, &read_vector(f, &text)?)?;
            save(suite, tag, &Rank1Proof::<E> { z: keys.compute(suite, &ym)? })
        }
        Protocol::GenDp => {
            let keys = open::<E, DotEvalKey<E>>(suite, tag, c)?.into_keys();
            let ys = keys.probgen(suite, &read_vector(f, &text)?)?;
            let cs = keys.compute(suite, &ys)?;
            save(suite, tag, &DotProof::<E> { b1: keys.params.b1, cs })
        }
        Protocol::Pvmat => {
            let key: pvmat::EvalKey<E> = open(suite, tag, c)?;
            save(suite, tag, &pvmat::compute(suite, &key, &read_vector(f, &text)?)?)
        }
        Protocol::SmallField => {
            let key: SmallFieldEvalKey<E> = open(suite, tag, c)?;
            let xs = small_vector(&text, key.p)?;
            save(suite, tag, &smallfield::compute(suite, &key.a, &key.omega, key.p, &xs)?)
        }
    };
    write_file(proof, &bytes)
}

pub fn trustee(protocol: Option<ProtoArg>, key: &Path, x: &Path, proof: &Path, out: &Path) -> CmdResult {
    let c = read_container(key)?;
    check_protocol(protocol, &c)?;
    let p = read_container(proof)?;
    with_suite!(c.suite, s => trustee_with(&s, &c, x, &p, out))
}

fn trustee_with<E: PairingEngine>(suite: &E, c: &Container, x: &Path, proof: &Container, out: &Path) -> CmdResult {
    let text = read_text(x)?;
    let tag = c.protocol;
    let bytes = match tag {
        Protocol::Spmv => {
            let key: spmv::SpmvTrusteeKey<E> = open(suite, tag, c)?;
            let pr: spmv::SpmvProof<E> = open(suite, tag, proof)?;
            let xs = read_vector(suite.fr(), &text)?;
            save(suite, tag, &spmv::trustee(suite, &key, &xs, &pr.y)?)
        }
        Protocol::SmallField => {
            let keys: smallfield::SmallFieldKeys<E> = open(suite, tag, c)?;
            let pr: smallfield::SmallFieldProof<E> = open(suite, tag, proof)?;
            let xs = small_vector(&text, keys.bounds.p)?;
            save(suite, tag, &smallfield::trustee(suite, &keys, &xs, &pr.y)?)
        }
        other => return Err(Failure::params(format!("{} has no trustee", other.name()))),
    };
    write_file(out, &bytes)
}

fn response<E: PairingEngine, B: Bundle<E>>(suite: &E, tag: Protocol, path: Option<&Path>) -> Result<B, Failure> {
    let path = path.ok_or_else(|| Failure::malformed(format!("{} verification needs --response", tag.name())))?;
    Ok(open(suite, tag, &read_container(path)?)?)
}

pub fn verify(
    s: &SuiteArgs,
    protocol: Option<ProtoArg>,
    vk: &Path,
    x: &Path,
    proof: &Path,
    resp: Option<&Path>,
    problem: Option<&Path>,
) -> CmdResult {
    let c = read_container(vk)?;
    check_protocol(protocol, &c)?;
    let p = read_container(proof)?;
    let mut rng = rng_for(s.seed);
    with_suite!(c.suite, st => verify_with(&st, &c, x, &p, resp, problem, &mut rng))
}

fn verify_with<E: PairingEngine>(
    suite: &E,
    c: &Container,
    x: &Path,
    proof: &Container,
    resp: Option<&Path>,
    problem: Option<&Path>,
    rng: &mut ChaCha20Rng,
) -> CmdResult {
    let text = read_text(x)?;
    let f = suite.fr();
    let tag = c.protocol;
    match tag {
        Protocol::Freivalds => {
            let ch: FreivaldsChallenge<Scalar<E>> = open(suite, tag, c)?;
            let pr: OutputProof<E> = open(suite, tag, proof)?;
            freivalds::verify_one(f, &ch, &read_vector(f, &text)?, &pr.y)?;
            print_scalars(suite, &pr.y);
        }
        Protocol::Fg => {
            let key: FgClientKey<E> = open(suite, tag, c)?;
            let pr: fg::FgProof<E> = open(suite, tag, proof)?;
            let xs = read_vector(f, &text)?;
            let vk_x = match problem {
                Some(path) => open::<E, FgProblem<E>>(suite, tag, &read_container(path)?)?.vk_x,
                None => fg::probgen(suite, &key.secrets, &xs)?,
            };
            print_scalars(suite, &fg::verify(suite, &key.a, &vk_x, &pr)?);
        }
        Protocol::Spmv => {
            let shape: ShapeKey = open(suite, tag, c)?;
            let pr: spmv::SpmvProof<E> = open(suite, tag, proof)?;
            if read_vector(f, &text)?.len() != shape.n || pr.y.len() != shape.m {
                return Err(Error::Dimension(format!("expected a {} x {} instance", shape.m, shape.n)).into());
            }
            let r: spmv::TrusteeResponse<E> = response(suite, tag, resp)?;
            print_scalars(suite, &spmv::verify(suite, &pr, &r)?);
        }
        Protocol::Rank1Dp => {
            let keys: Rank1Keys<E> = open(suite, tag, c)?;
            let pr: Rank1Proof<E> = open(suite, tag, proof)?;
            let ym = keys.probgen(suite, &read_vector(f, &text)?)?;
            let out = keys.verify(suite, &ym, &pr.z, rng)?;
            let mut buf = Vec::new();
            suite.gt().encode(&out, &mut buf);
            println!("{}", hex::encode(buf));
        }
        Protocol::GenDp => {
            let keys = open::<E, DotVerifyKey<E>>(suite, tag, c)?.into_keys();
            let pr: DotProof<E> = open(suite, tag, proof)?;
            let ys = keys.probgen(suite, &read_vector(f, &text)?)?;
            let out = keys.verify(suite, &ys, &pr.cs, rng)?;
            let mut buf = Vec::new();
            suite.g1().encode(&out, &mut buf);
            println!("{}", hex::encode(buf));
        }
        Protocol::Pvmat => {
            let key: pvmat::VerifyKey<E> = open(suite, tag, c)?;
            let pr: pvmat::PvmatProof<E> = open(suite, tag, proof)?;
            print_scalars(suite, &pvmat::verify(suite, &key, &read_vector(f, &text)?, &pr, rng)?);
        }
        Protocol::SmallField => {
            let key: smallfield::SmallFieldVerifyKey = open(suite, tag, c)?;
            let pr: smallfield::SmallFieldProof<E> = open(suite, tag, proof)?;
            if small_vector(&text, key.p)?.len() != key.n {
                return Err(Error::Dimension(format!("expected an input of length {}", key.n)).into());
            }
            let r: smallfield::SmallFieldResponse<E> = response(suite, tag, resp)?;
            let y = smallfield::verify(suite, &key, &pr, &r)?;
            let lines: String = y.iter().map(|v| format!("{v}\n")).collect();
            print!("{lines}");
        }
    }
    Ok(())
}

pub fn bench(
    s: &SuiteArgs,
    protocols: Vec<String>,
    sizes: Vec<usize>,
    reps: usize,
    chunk_a: f64,
    out: Option<&Path>,
) -> CmdResult {
    let cfg = BenchConfig {
        protocols,
        sizes,
        reps,
        seed: s.seed.unwrap_or(0),
        chunk_a,
    };
    let rows = match s.backend {
        BackendArg::Toy => bench::run(&suite_toy(s.modulus)?, &cfg)?,
        BackendArg::Real => bench::run(&suite_real()?, &cfg)?,
    };
    let csv = bench::to_csv(&rows);
    match out {
        Some(path) => write_file(path, csv.as_bytes()),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
