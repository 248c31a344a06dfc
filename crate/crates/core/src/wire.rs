//! Binary containers for keys, problem encodings, proofs and trustee messages.
//!
//! Layout: magic `VMAT1`, protocol tag, part tag, suite descriptor (backend
//! byte and group order), dims block, length-prefixed sections, then a 32-byte
//! SHAKE-128 digest of every preceding byte. The digest detects corruption
//! only; it is not an authenticator.

use num_bigint::BigUint;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake128;

use crate::dotprod::{ChunkParams, ChunkedKeys, GenKeys, Rank1Keys};
use crate::error::{Error, RejectReason, Result};
use crate::fg::{FgProof, FgSecrets};
use crate::freivalds::{ChallengeMode, Digest, FreivaldsChallenge};
use crate::linalg::{FieldMatrix, GroupMatrix, Storage};
use crate::pairing::{Backend, G1Elem, G2Elem, Group, GtElem, PairingEngine, Scalar, ScalarField};
use crate::pvmat::{EvalKey, PvmatParams, PvmatProof, VerifyKey};
use crate::smallfield::{SmallFieldBounds, SmallFieldKeys, SmallFieldProof, SmallFieldResponse, SmallFieldVerifyKey};
use crate::spmv::{SpmvProof, SpmvTrusteeKey, TrusteeResponse};

pub const MAGIC: &[u8; 5] = b"VMAT1";
pub const DIGEST_LEN: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Protocol {
    Freivalds = 1,
    Fg = 2,
    Spmv = 3,
    Rank1Dp = 4,
    GenDp = 5,
    Pvmat = 6,
    SmallField = 7,
}

impl Protocol {
    pub const ALL: [Protocol; 7] = [
        Protocol::Freivalds,
        Protocol::Fg,
        Protocol::Spmv,
        Protocol::Rank1Dp,
        Protocol::GenDp,
        Protocol::Pvmat,
        Protocol::SmallField,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Freivalds => "freivalds",
            Protocol::Fg => "fg",
            Protocol::Spmv => "spmv",
            Protocol::Rank1Dp => "rank1dp",
            Protocol::GenDp => "gendp",
            Protocol::Pvmat => "pvmat",
            Protocol::SmallField => "smallfield",
        }
    }

    fn from_byte(b: u8) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| *p as u8 == b)
            .ok_or_else(|| Error::decode(format!("unknown protocol tag {b}")))
    }
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::param(format!("unknown protocol {s:?}")))
    }
}

/// What a container holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Part {
    EvalKey = 1,
    VerifyKey = 2,
    TrusteeKey = 3,
    Problem = 4,
    Proof = 5,
    Response = 6,
}

impl Part {
    fn from_byte(b: u8) -> Result<Self> {
        Ok(match b {
            1 => Part::EvalKey,
            2 => Part::VerifyKey,
            3 => Part::TrusteeKey,
            4 => Part::Problem,
            5 => Part::Proof,
            6 => Part::Response,
            other => return Err(Error::decode(format!("unknown part tag {other}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteDesc {
    pub backend: Backend,
    pub order: BigUint,
}

impl SuiteDesc {
    pub fn of<E: PairingEngine>(suite: &E) -> Self {
        SuiteDesc {
            backend: suite.backend(),
            order: suite.order(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Container {
    pub protocol: Protocol,
    pub part: Part,
    pub suite: SuiteDesc,
    pub dims: Vec<u64>,
    pub sections: Vec<Vec<u8>>,
}

fn digest(bytes: &[u8]) -> Digest {
    let mut h = Shake128::default();
    h.update(bytes);
    let mut out = [0u8; DIGEST_LEN];
    h.finalize_xof().read(&mut out);
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() < n {
            return Err(Error::decode("container truncated"));
        }
        let (head, tail) = self.bytes.split_at(n);
        self.bytes = tail;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = MAGIC.to_vec();
        out.push(self.protocol as u8);
        out.push(self.part as u8);
        out.push(match self.suite.backend {
            Backend::Toy => 0,
            Backend::Real => 1,
        });
        let order = self.suite.order.to_bytes_le();
        out.extend((order.len() as u32).to_le_bytes());
        out.extend(order);
        out.extend((self.dims.len() as u32).to_le_bytes());
        for d in &self.dims {
            out.extend(d.to_le_bytes());
        }
        out.extend((self.sections.len() as u32).to_le_bytes());
        for s in &self.sections {
            out.extend((s.len() as u64).to_le_bytes());
            out.extend(s);
        }
        let d = digest(&out);
        out.extend(d);
        out
    }

    /// Parses a container. A digest mismatch is reported as a rejection.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < MAGIC.len() + DIGEST_LEN || &bytes[..MAGIC.len()] != MAGIC {
            return Err(Error::decode("not a VMAT1 container"));
        }
        let (body, tail) = bytes.split_at(bytes.len() - DIGEST_LEN);
        if digest(body) != tail {
            return Err(Error::Rejected(RejectReason::Integrity));
        }
        let mut c = Cursor { bytes: &body[MAGIC.len()..] };
        let protocol = Protocol::from_byte(c.u8()?)?;
        let part = Part::from_byte(c.u8()?)?;
        let backend = match c.u8()? {
            0 => Backend::Toy,
            1 => Backend::Real,
            other => return Err(Error::decode(format!("unknown backend tag {other}"))),
        };
        let olen = c.u32()? as usize;
        let order = BigUint::from_bytes_le(c.take(olen)?);
        let ndims = c.u32()? as usize;
        let dims = (0..ndims).map(|_| c.u64()).collect::<Result<Vec<_>>>()?;
        let nsec = c.u32()? as usize;
        let mut sections = Vec::with_capacity(nsec.min(1024));
        for _ in 0..nsec {
            let len = usize::try_from(c.u64()?).map_err(|_| Error::decode("section too long"))?;
            sections.push(c.take(len)?.to_vec());
        }
        if !c.bytes.is_empty() {
            return Err(Error::decode("trailing bytes before digest"));
        }
        Ok(Container {
            protocol,
            part,
            suite: SuiteDesc { backend, order },
            dims,
            sections,
        })
    }
}

/// Section writer: every call appends one length-prefixed array.
#[derive(Default)]
pub struct Sections {
    out: Vec<Vec<u8>>,
}

impl Sections {
    pub fn u64s(&mut self, v: &[u64]) {
        self.out.push(v.iter().flat_map(|x| x.to_le_bytes()).collect());
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.out.push(b.to_vec());
    }

    pub fn scalars<F: ScalarField>(&mut self, f: &F, v: &[F::Elem]) {
        let mut buf = Vec::with_capacity(v.len() * f.byte_len());
        for e in v {
            f.write_elem(e, &mut buf);
        }
        self.out.push(buf);
    }

    pub fn elems<F: ScalarField, G: Group<F>>(&mut self, g: &G, v: &[G::Elem]) {
        let mut buf = Vec::new();
        for e in v {
            g.encode(e, &mut buf);
        }
        self.out.push(buf);
    }

    fn group_matrix<F: ScalarField, G: Group<F>>(&mut self, g: &G, m: &GroupMatrix<G::Elem>) {
        self.u64s(&[m.rows() as u64, m.cols() as u64]);
        self.elems(g, m.data());
    }

    fn matrix_shape<T>(&mut self, a: &FieldMatrix<T>)
    where
        T: Copy + Eq + std::fmt::Debug,
    {
        let (kind, count) = match a.storage() {
            Storage::Dense(d) => (0, d.len()),
            Storage::Sparse(t) => (1, t.len()),
        };
        self.u64s(&[a.rows() as u64, a.cols() as u64, kind, count as u64]);
        if let Storage::Sparse(t) = a.storage() {
            let idx: Vec<u64> = t.iter().flat_map(|&(i, j, _)| [i as u64, j as u64]).collect();
            self.u64s(&idx);
        }
    }

    fn matrix<F: ScalarField>(&mut self, f: &F, a: &FieldMatrix<F::Elem>) {
        self.matrix_shape(a);
        match a.storage() {
            Storage::Dense(d) => self.scalars(f, d),
            Storage::Sparse(t) => self.scalars(f, &t.iter().map(|e| e.2).collect::<Vec<_>>()),
        }
    }

    fn int_matrix(&mut self, a: &FieldMatrix<u64>) {
        self.matrix_shape(a);
        match a.storage() {
            Storage::Dense(d) => self.u64s(d),
            Storage::Sparse(t) => self.u64s(&t.iter().map(|e| e.2).collect::<Vec<_>>()),
        }
    }
}

pub struct SectionReader<'a> {
    it: std::slice::Iter<'a, Vec<u8>>,
}

fn want(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::decode(format!("{what}: expected {expected} entries, found {got}")))
    }
}

impl<'a> SectionReader<'a> {
    fn next(&mut self) -> Result<&'a [u8]> {
        self.it.next().map(Vec::as_slice).ok_or_else(|| Error::decode("missing section"))
    }

    pub fn bytes(&mut self) -> Result<&'a [u8]> {
        self.next()
    }

    pub fn u64s(&mut self) -> Result<Vec<u64>> {
        let s = self.next()?;
        if s.len() % 8 != 0 {
            return Err(Error::decode("integer section has a partial entry"));
        }
        Ok(s.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
    }

    pub fn scalars<F: ScalarField>(&mut self, f: &F) -> Result<Vec<F::Elem>> {
        let s = self.next()?;
        let len = f.byte_len();
        if s.len() % len != 0 {
            return Err(Error::decode("scalar section has a partial entry"));
        }
        s.chunks_exact(len).map(|c| f.read_elem(c)).collect()
    }

    pub fn elems<F: ScalarField, G: Group<F>>(&mut self, g: &G) -> Result<Vec<G::Elem>> {
        let mut s = self.next()?;
        let mut out = Vec::new();
        while !s.is_empty() {
            let (e, used) = g.decode(s)?;
            out.push(e);
            s = &s[used..];
        }
        Ok(out)
    }

    fn u64s_len(&mut self, what: &str, len: usize) -> Result<Vec<u64>> {
        let v = self.u64s()?;
        want(what, len, v.len())?;
        Ok(v)
    }

    fn scalars_len<F: ScalarField>(&mut self, f: &F, what: &str, len: usize) -> Result<Vec<F::Elem>> {
        let v = self.scalars(f)?;
        want(what, len, v.len())?;
        Ok(v)
    }

    fn elems_len<F: ScalarField, G: Group<F>>(&mut self, g: &G, what: &str, len: usize) -> Result<Vec<G::Elem>> {
        let v = self.elems(g)?;
        want(what, len, v.len())?;
        Ok(v)
    }

    fn one<F: ScalarField, G: Group<F>>(&mut self, g: &G, what: &str) -> Result<G::Elem> {
        Ok(self.elems_len(g, what, 1)?.remove(0))
    }

    fn group_matrix<F: ScalarField, G: Group<F>>(
        &mut self,
        g: &G,
        what: &str,
        rows: usize,
        cols: usize,
    ) -> Result<GroupMatrix<G::Elem>> {
        let shape = self.u64s_len(what, 2)?;
        want(what, rows * cols, (shape[0] * shape[1]) as usize)?;
        let data = self.elems_len(g, what, rows * cols)?;
        GroupMatrix::new(rows, cols, data)
    }

    fn matrix_with<T, V>(&mut self, rows: usize, cols: usize, values: V) -> Result<FieldMatrix<T>>
    where
        T: Copy + Eq + std::fmt::Debug,
        V: FnOnce(&mut Self, usize) -> Result<Vec<T>>,
    {
        let head = self.u64s_len("matrix header", 4)?;
        want("matrix rows", rows, head[0] as usize)?;
        want("matrix cols", cols, head[1] as usize)?;
        let count = head[3] as usize;
        match head[2] {
            0 => {
                want("dense matrix", rows * cols, count)?;
                FieldMatrix::dense(rows, cols, values(self, count)?)
            }
            1 => {
                let idx = self.u64s_len("sparse indices", 2 * count)?;
                let vals = values(self, count)?;
                let triples = idx
                    .chunks_exact(2)
                    .zip(vals)
                    .map(|(ij, v)| (ij[0] as usize, ij[1] as usize, v))
                    .collect();
                FieldMatrix::sparse_sorted(rows, cols, triples)
            }
            other => Err(Error::decode(format!("unknown matrix kind {other}"))),
        }
    }

    fn matrix<F: ScalarField>(&mut self, f: &F, rows: usize, cols: usize) -> Result<FieldMatrix<F::Elem>> {
        self.matrix_with(rows, cols, |r, n| r.scalars_len(f, "matrix values", n))
    }

    fn int_matrix(&mut self, rows: usize, cols: usize) -> Result<FieldMatrix<u64>> {
        self.matrix_with(rows, cols, |r, n| r.u64s_len("matrix values", n))
    }
}

/// A value that can be stored in a container.
pub trait Bundle<E: PairingEngine>: Sized {
    const PART: Part;
    fn dims(&self) -> Vec<u64>;
    fn write(&self, suite: &E, out: &mut Sections);
    fn read(suite: &E, dims: &[u64], r: &mut SectionReader<'_>) -> Result<Self>;
}

pub fn to_container<E: PairingEngine, B: Bundle<E>>(suite: &E, protocol: Protocol, b: &B) -> Container {
    let mut s = Sections::default();
    b.write(suite, &mut s);
    Container {
        protocol,
        part: B::PART,
        suite: SuiteDesc::of(suite),
        dims: b.dims(),
        sections: s.out,
    }
}

pub fn save<E: PairingEngine, B: Bundle<E>>(suite: &E, protocol: Protocol, b: &B) -> Vec<u8> {
    to_container(suite, protocol, b).to_bytes()
}

/// Decodes a parsed container, checking protocol, part and suite.
pub fn open<E: PairingEngine, B: Bundle<E>>(suite: &E, protocol: Protocol, c: &Container) -> Result<B> {
    if c.protocol != protocol {
        return Err(Error::decode(format!(
            "container holds {} data, expected {}",
            c.protocol.name(),
            protocol.name()
        )));
    }
    if c.part != B::PART {
        return Err(Error::decode(format!("container holds {:?}, expected {:?}", c.part, B::PART)));
    }
    if c.suite != SuiteDesc::of(suite) {
        return Err(Error::decode("container was written for a different suite"));
    }
    let mut r = SectionReader { it: c.sections.iter() };
    let b = B::read(suite, &c.dims, &mut r)?;
    if r.it.next().is_some() {
        return Err(Error::decode("unexpected extra section"));
    }
    Ok(b)
}

pub fn load<E: PairingEngine, B: Bundle<E>>(suite: &E, protocol: Protocol, bytes: &[u8]) -> Result<B> {
    open(suite, protocol, &Container::from_bytes(bytes)?)
}

fn dims<const N: usize>(d: &[u64]) -> Result<[usize; N]> {
    if d.len() != N {
        return Err(Error::decode(format!("expected {N} dims, found {}", d.len())));
    }
    let mut out = [0usize; N];
    for (o, v) in out.iter_mut().zip(d) {
        *o = usize::try_from(*v).map_err(|_| Error::decode("dimension overflows usize"))?;
    }
    Ok(out)
}

fn u64s_of(v: &[usize]) -> Vec<u64> {
    v.iter().map(|&x| x as u64).collect()
}

/// A prover key that is just the matrix.
#[derive(Clone, Debug)]
pub struct MatrixKey<E: PairingEngine> {
    pub a: FieldMatrix<Scalar<E>>,
}

impl<E: PairingEngine> Bundle<E> for MatrixKey<E> {
    const PART: Part = Part::EvalKey;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.a.rows(), self.a.cols()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.matrix(suite.fr(), &self.a);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m, n] = dims(d)?;
        Ok(MatrixKey { a: r.matrix(suite.fr(), m, n)? })
    }
}

impl<E: PairingEngine> Bundle<E> for FreivaldsChallenge<Scalar<E>> {
    const PART: Part = Part::VerifyKey;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.u().len(), self.w().len()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.scalars(suite.fr(), self.u());
        out.scalars(suite.fr(), self.w());
        let mut mode = Vec::new();
        if let ChallengeMode::FiatShamir { transcript, bound } = self.mode() {
            mode.extend(transcript);
            for d in bound {
                mode.extend(d);
            }
        }
        out.bytes(&mode);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m, n] = dims(d)?;
        let u = r.scalars_len(suite.fr(), "u", m)?;
        let w = r.scalars_len(suite.fr(), "w", n)?;
        let raw = r.bytes()?;
        if raw.len() % DIGEST_LEN != 0 {
            return Err(Error::decode("challenge mode has a partial digest"));
        }
        let mut digests = raw.chunks_exact(DIGEST_LEN).map(|c| <Digest>::try_from(c).expect("32 bytes"));
        let mode = match digests.next() {
            None => ChallengeMode::Private,
            Some(transcript) => ChallengeMode::FiatShamir {
                transcript,
                bound: digests.collect(),
            },
        };
        Ok(FreivaldsChallenge::from_parts(u, w, mode))
    }
}

/// A bare claimed output.
#[derive(Clone, Debug)]
pub struct OutputProof<E: PairingEngine> {
    pub y: Vec<Scalar<E>>,
}

impl<E: PairingEngine> Bundle<E> for OutputProof<E> {
    const PART: Part = Part::Proof;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.y.len()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.scalars(suite.fr(), &self.y);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m] = dims(d)?;
        Ok(OutputProof { y: r.scalars_len(suite.fr(), "y", m)? })
    }
}

#[derive(Clone, Debug)]
pub struct FgEvalKey<E: PairingEngine> {
    pub a: FieldMatrix<Scalar<E>>,
    pub w: GroupMatrix<G1Elem<E>>,
}

impl<E: PairingEngine> Bundle<E> for FgEvalKey<E> {
    const PART: Part = Part::EvalKey;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.a.rows(), self.a.cols()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.matrix(suite.fr(), &self.a);
        out.group_matrix(suite.g1(), &self.w);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m, n] = dims(d)?;
        Ok(FgEvalKey {
            a: r.matrix(suite.fr(), m, n)?,
            w: r.group_matrix(suite.g1(), "W", m, n)?,
        })
    }
}

/// The client's side of the baseline: secrets for `ProbGen` plus `e(g1, g2)^alpha`.
#[derive(Clone, Debug)]
pub struct FgClientKey<E: PairingEngine> {
    pub secrets: FgSecrets<E>,
    pub a: GtElem<E>,
}

impl<E: PairingEngine> Bundle<E> for FgClientKey<E> {
    const PART: Part = Part::VerifyKey;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.secrets.s.len(), self.secrets.t.len()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        let (f, s) = (suite.fr(), &self.secrets);
        out.scalars(f, &[s.alpha]);
        out.scalars(f, &s.s);
        out.scalars(f, &s.t);
        out.scalars(f, &s.rho);
        out.scalars(f, &s.tau);
        out.elems(suite.gt(), &[self.a]);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m, n] = dims(d)?;
        let f = suite.fr();
        let secrets = FgSecrets {
            alpha: r.scalars_len(f, "alpha", 1)?[0],
            s: r.scalars_len(f, "s", m)?,
            t: r.scalars_len(f, "t", n)?,
            rho: r.scalars_len(f, "rho", m)?,
            tau: r.scalars_len(f, "tau", n)?,
        };
        Ok(FgClientKey {
            secrets,
            a: r.one(suite.gt(), "a")?,
        })
    }
}

/// Per-input verification key of the baseline.
#[derive(Clone, Debug)]
pub struct FgProblem<E: PairingEngine> {
    pub vk_x: Vec<GtElem<E>>,
}

impl<E: PairingEngine> Bundle<E> for FgProblem<E> {
    const PART: Part = Part::Problem;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.vk_x.len()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.elems(suite.gt(), &self.vk_x);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m] = dims(d)?;
        Ok(FgProblem { vk_x: r.elems_len(suite.gt(), "VK_x", m)? })
    }
}

impl<E: PairingEngine> Bundle<E> for FgProof<E> {
    const PART: Part = Part::Proof;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.y.len()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.scalars(suite.fr(), &self.y);
        out.elems(suite.g1(), &self.z);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m] = dims(d)?;
        Ok(FgProof {
            y: r.scalars_len(suite.fr(), "y", m)?,
            z: r.elems_len(suite.g1(), "z", m)?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SpmvEvalKey<E: PairingEngine> {
    pub a: FieldMatrix<Scalar<E>>,
    pub omega: Vec<G1Elem<E>>,
}

impl<E: PairingEngine> Bundle<E> for SpmvEvalKey<E> {
    const PART: Part = Part::EvalKey;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.a.rows(), self.a.cols()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.matrix(suite.fr(), &self.a);
        out.elems(suite.g1(), &self.omega);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m, n] = dims(d)?;
        Ok(SpmvEvalKey {
            a: r.matrix(suite.fr(), m, n)?,
            omega: r.elems_len(suite.g1(), "omega", n)?,
        })
    }
}

impl<E: PairingEngine> Bundle<E> for SpmvTrusteeKey<E> {
    const PART: Part = Part::TrusteeKey;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.u.len(), self.t.len()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.scalars(suite.fr(), &self.u);
        out.scalars(suite.fr(), &self.t);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m, n] = dims(d)?;
        Ok(SpmvTrusteeKey {
            u: r.scalars_len(suite.fr(), "u", m)?,
            t: r.scalars_len(suite.fr(), "t", n)?,
        })
    }
}

/// Public verification data when the check needs only the shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShapeKey {
    pub m: usize,
    pub n: usize,
}

impl<E: PairingEngine> Bundle<E> for ShapeKey {
    const PART: Part = Part::VerifyKey;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.m, self.n])
    }
    fn write(&self, _: &E, _: &mut Sections) {}
    fn read(_: &E, d: &[u64], _: &mut SectionReader<'_>) -> Result<Self> {
        let [m, n] = dims(d)?;
        Ok(ShapeKey { m, n })
    }
}

impl<E: PairingEngine> Bundle<E> for SpmvProof<E> {
    const PART: Part = Part::Proof;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.y.len()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.scalars(suite.fr(), &self.y);
        out.elems(suite.g1(), &[self.zeta]);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m] = dims(d)?;
        Ok(SpmvProof {
            y: r.scalars_len(suite.fr(), "y", m)?,
            zeta: r.one(suite.g1(), "zeta")?,
        })
    }
}

impl<E: PairingEngine> Bundle<E> for TrusteeResponse<E> {
    const PART: Part = Part::Response;
    fn dims(&self) -> Vec<u64> {
        Vec::new()
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.scalars(suite.fr(), &[self.h, self.d]);
        out.elems(suite.gt(), &[self.eta]);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        dims::<0>(d)?;
        let hd = r.scalars_len(suite.fr(), "h, d", 2)?;
        Ok(TrusteeResponse {
            h: hd[0],
            d: hd[1],
            eta: r.one(suite.gt(), "eta")?,
        })
    }
}

/// Prover side of the rank-one dot product: `g1^eta`.
#[derive(Clone, Debug)]
pub struct Rank1EvalKey<E: PairingEngine> {
    pub b1: usize,
    pub b2: usize,
    pub ek: Vec<G1Elem<E>>,
}

impl<E: PairingEngine> Rank1EvalKey<E> {
    pub fn of(keys: &Rank1Keys<E>) -> Self {
        Rank1EvalKey {
            b1: keys.b1,
            b2: keys.b2,
            ek: keys.ek.clone(),
        }
    }

    /// Keys usable for `probgen` and `compute`; the secret factors are absent.
    pub fn into_keys(self) -> Rank1Keys<E> {
        Rank1Keys {
            b1: self.b1,
            b2: self.b2,
            mu: Vec::new(),
            eta: Vec::new(),
            ek: self.ek,
            vk: Vec::new(),
        }
    }
}

impl<E: PairingEngine> Bundle<E> for Rank1EvalKey<E> {
    const PART: Part = Part::EvalKey;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.b1, self.b2])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.elems(suite.g1(), &self.ek);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [b1, b2] = dims(d)?;
        Ok(Rank1EvalKey {
            b1,
            b2,
            ek: r.elems_len(suite.g1(), "ek", b2)?,
        })
    }
}

/// Stored without `mu` and `eta`, which verification does not use.
impl<E: PairingEngine> Bundle<E> for Rank1Keys<E> {
    const PART: Part = Part::VerifyKey;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.b1, self.b2])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.elems(suite.g1(), &self.ek);
        out.elems(suite.g2(), &self.vk);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [b1, b2] = dims(d)?;
        Ok(Rank1Keys {
            b1,
            b2,
            mu: Vec::new(),
            eta: Vec::new(),
            ek: r.elems_len(suite.g1(), "ek", b2)?,
            vk: r.elems_len(suite.g2(), "vk", b1)?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Rank1Proof<E: PairingEngine> {
    pub z: Vec<G1Elem<E>>,
}

impl<E: PairingEngine> Bundle<E> for Rank1Proof<E> {
    const PART: Part = Part::Proof;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.z.len()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.elems(suite.g1(), &self.z);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [b1] = dims(d)?;
        Ok(Rank1Proof { z: r.elems_len(suite.g1(), "z", b1)? })
    }
}

fn chunk_dims(p: &ChunkParams) -> Vec<u64> {
    u64s_of(&[p.n, p.k, p.b1, p.b2])
}

fn read_chunk_params(d: &[u64]) -> Result<ChunkParams> {
    let [n, k, b1, b2] = dims(d)?;
    if n == 0 || k == 0 || k > n || b1 * b2 < k {
        return Err(Error::decode("inconsistent chunk parameters"));
    }
    Ok(ChunkParams { n, k, b1, b2 })
}

fn empty_matrix<T: Copy + Eq + std::fmt::Debug>() -> GroupMatrix<T> {
    GroupMatrix::new(0, 0, Vec::new()).expect("empty matrix")
}

/// Prover side of the general (optionally chunked) dot product.
#[derive(Clone, Debug)]
pub struct DotEvalKey<E: PairingEngine> {
    pub params: ChunkParams,
    pub eks: Vec<GroupMatrix<G1Elem<E>>>,
}

/// Verifier side: `g1^{w^T U}` and `g2^w` per chunk.
#[derive(Clone, Debug)]
pub struct DotVerifyKey<E: PairingEngine> {
    pub params: ChunkParams,
    pub vk_u: Vec<Vec<G1Elem<E>>>,
    pub vk_w: Vec<Vec<G2Elem<E>>>,
}

impl<E: PairingEngine> DotEvalKey<E> {
    pub fn of(keys: &ChunkedKeys<E>) -> Self {
        DotEvalKey {
            params: keys.params,
            eks: keys.chunks.iter().map(|c| c.ek.clone()).collect(),
        }
    }

    pub fn into_keys(self) -> ChunkedKeys<E> {
        let (b1, b2) = (self.params.b1, self.params.b2);
        let chunks = self
            .eks
            .into_iter()
            .map(|ek| GenKeys {
                b1,
                b2,
                w: Vec::new(),
                ek,
                vk_u: Vec::new(),
                vk_w: Vec::new(),
            })
            .collect();
        ChunkedKeys {
            params: self.params,
            chunks,
        }
    }
}

impl<E: PairingEngine> DotVerifyKey<E> {
    pub fn of(keys: &ChunkedKeys<E>) -> Self {
        DotVerifyKey {
            params: keys.params,
            vk_u: keys.chunks.iter().map(|c| c.vk_u.clone()).collect(),
            vk_w: keys.chunks.iter().map(|c| c.vk_w.clone()).collect(),
        }
    }

    pub fn into_keys(self) -> ChunkedKeys<E> {
        let (b1, b2) = (self.params.b1, self.params.b2);
        let chunks = self
            .vk_u
            .into_iter()
            .zip(self.vk_w)
            .map(|(vk_u, vk_w)| GenKeys {
                b1,
                b2,
                w: Vec::new(),
                ek: empty_matrix(),
                vk_u,
                vk_w,
            })
            .collect();
        ChunkedKeys {
            params: self.params,
            chunks,
        }
    }
}

impl<E: PairingEngine> Bundle<E> for DotEvalKey<E> {
    const PART: Part = Part::EvalKey;
    fn dims(&self) -> Vec<u64> {
        chunk_dims(&self.params)
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        for ek in &self.eks {
            out.group_matrix(suite.g1(), ek);
        }
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let params = read_chunk_params(d)?;
        let eks = (0..params.chunks())
            .map(|_| r.group_matrix(suite.g1(), "chunk key", params.b1, params.b2))
            .collect::<Result<_>>()?;
        Ok(DotEvalKey { params, eks })
    }
}

impl<E: PairingEngine> Bundle<E> for DotVerifyKey<E> {
    const PART: Part = Part::VerifyKey;
    fn dims(&self) -> Vec<u64> {
        chunk_dims(&self.params)
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        for (u, w) in self.vk_u.iter().zip(&self.vk_w) {
            out.elems(suite.g1(), u);
            out.elems(suite.g2(), w);
        }
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let params = read_chunk_params(d)?;
        let (mut vk_u, mut vk_w) = (Vec::new(), Vec::new());
        for _ in 0..params.chunks() {
            vk_u.push(r.elems_len(suite.g1(), "vk_u", params.b2)?);
            vk_w.push(r.elems_len(suite.g2(), "vk_w", params.b1)?);
        }
        Ok(DotVerifyKey { params, vk_u, vk_w })
    }
}

#[derive(Clone, Debug)]
pub struct DotProof<E: PairingEngine> {
    pub b1: usize,
    pub cs: Vec<GroupMatrix<G1Elem<E>>>,
}

impl<E: PairingEngine> Bundle<E> for DotProof<E> {
    const PART: Part = Part::Proof;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.b1, self.cs.len()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        for c in &self.cs {
            out.group_matrix(suite.g1(), c);
        }
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [b1, count] = dims(d)?;
        let cs = (0..count)
            .map(|_| r.group_matrix(suite.g1(), "C", b1, b1))
            .collect::<Result<_>>()?;
        Ok(DotProof { b1, cs })
    }
}

fn pvmat_dims(p: &PvmatParams) -> Vec<u64> {
    u64s_of(&[p.m, p.n, p.b1, p.b2, p.c1, p.c2, p.d1, p.d2])
}

fn read_pvmat_params(d: &[u64]) -> Result<PvmatParams> {
    let [m, n, b1, b2, c1, c2, d1, d2] = dims(d)?;
    PvmatParams::new(m, n, b1, b2, c1, c2, d1, d2).map_err(|e| Error::decode(e.to_string()))
}

impl<E: PairingEngine> Bundle<E> for EvalKey<E> {
    const PART: Part = Part::EvalKey;
    fn dims(&self) -> Vec<u64> {
        pvmat_dims(&self.params)
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        let g1 = suite.g1();
        out.matrix(suite.fr(), &self.a);
        out.elems(g1, &self.omega);
        out.elems(g1, &self.g1_tau1);
        out.elems(g1, &self.g1_tau2);
        out.elems(g1, &self.g1_eta);
        out.group_matrix(g1, &self.g1_delta_v);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let p = read_pvmat_params(d)?;
        let g1 = suite.g1();
        Ok(EvalKey {
            params: p,
            a: r.matrix(suite.fr(), p.m, p.n)?,
            omega: r.elems_len(g1, "omega", p.n)?,
            g1_tau1: r.elems_len(g1, "tau1", p.c2)?,
            g1_tau2: r.elems_len(g1, "tau2", p.c2)?,
            g1_eta: r.elems_len(g1, "eta", p.b2)?,
            g1_delta_v: r.group_matrix(g1, "delta V", p.d1, p.d2)?,
        })
    }
}

impl<E: PairingEngine> Bundle<E> for VerifyKey<E> {
    const PART: Part = Part::VerifyKey;
    fn dims(&self) -> Vec<u64> {
        pvmat_dims(&self.params)
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        let (g1, g2) = (suite.g1(), suite.g2());
        out.elems(g1, &self.g1_tau1);
        out.elems(g1, &self.g1_tau2);
        out.elems(g2, &self.g2_rho1);
        out.elems(g2, &self.g2_rho2);
        out.elems(g1, &self.g1_eta);
        out.elems(g2, &self.g2_mu);
        out.elems(g1, &self.g1_delta_varpi_v);
        out.elems(g2, &self.g2_gamma_varpi);
        out.elems(g2, &[self.g2_gamma]);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let p = read_pvmat_params(d)?;
        let (g1, g2) = (suite.g1(), suite.g2());
        Ok(VerifyKey {
            params: p,
            g1_tau1: r.elems_len(g1, "tau1", p.c2)?,
            g1_tau2: r.elems_len(g1, "tau2", p.c2)?,
            g2_rho1: r.elems_len(g2, "rho1", p.c1)?,
            g2_rho2: r.elems_len(g2, "rho2", p.c1)?,
            g1_eta: r.elems_len(g1, "eta", p.b2)?,
            g2_mu: r.elems_len(g2, "mu", p.b1)?,
            g1_delta_varpi_v: r.elems_len(g1, "delta varpi V", p.d2)?,
            g2_gamma_varpi: r.elems_len(g2, "gamma varpi", p.d1)?,
            g2_gamma: r.one(g2, "gamma")?,
        })
    }
}

impl<E: PairingEngine> Bundle<E> for PvmatProof<E> {
    const PART: Part = Part::Proof;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.y.len(), self.s1.len(), self.s2.len(), self.z.len(), self.c.rows(), self.c.cols()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        let g1 = suite.g1();
        out.scalars(suite.fr(), &self.y);
        out.elems(g1, &[self.zeta]);
        out.elems(g1, &self.s1);
        out.elems(g1, &self.s2);
        out.elems(g1, &self.z);
        out.group_matrix(g1, &self.c);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m, ns1, ns2, nz, cr, cc] = dims(d)?;
        let g1 = suite.g1();
        Ok(PvmatProof {
            y: r.scalars_len(suite.fr(), "y", m)?,
            zeta: r.one(g1, "zeta")?,
            s1: r.elems_len(g1, "s1", ns1)?,
            s2: r.elems_len(g1, "s2", ns2)?,
            z: r.elems_len(g1, "z", nz)?,
            c: r.group_matrix(g1, "C", cr, cc)?,
        })
    }
}

/// Prover side of the small-field protocol.
#[derive(Clone, Debug)]
pub struct SmallFieldEvalKey<E: PairingEngine> {
    pub p: u64,
    pub a: FieldMatrix<u64>,
    pub omega: Vec<G1Elem<E>>,
}

impl<E: PairingEngine> Bundle<E> for SmallFieldEvalKey<E> {
    const PART: Part = Part::EvalKey;
    fn dims(&self) -> Vec<u64> {
        vec![self.a.rows() as u64, self.a.cols() as u64, self.p]
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.int_matrix(&self.a);
        out.elems(suite.g1(), &self.omega);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m, n, p] = dims(d)?;
        Ok(SmallFieldEvalKey {
            p: p as u64,
            a: r.int_matrix(m, n)?,
            omega: r.elems_len(suite.g1(), "omega", n)?,
        })
    }
}

impl<E: PairingEngine> Bundle<E> for SmallFieldKeys<E> {
    const PART: Part = Part::TrusteeKey;
    fn dims(&self) -> Vec<u64> {
        vec![self.m as u64, self.n as u64, self.bounds.p]
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.scalars(suite.fr(), &[self.alpha]);
        out.u64s(&self.r);
        out.u64s(&self.s);
        out.scalars(suite.fr(), &self.t);
        out.elems(suite.g1(), &self.omega);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m, n, p] = dims(d)?;
        let bounds = SmallFieldBounds::new(m, n, p as u64, &suite.order()).map_err(|e| Error::decode(e.to_string()))?;
        let side = crate::smallfield::side_len(m);
        Ok(SmallFieldKeys {
            bounds,
            m,
            n,
            alpha: r.scalars_len(suite.fr(), "alpha", 1)?[0],
            r: r.u64s_len("r", side)?,
            s: r.u64s_len("s", side)?,
            t: r.scalars_len(suite.fr(), "t", n)?,
            omega: r.elems_len(suite.g1(), "omega", n)?,
        })
    }
}

impl<E: PairingEngine> Bundle<E> for SmallFieldVerifyKey {
    const PART: Part = Part::VerifyKey;
    fn dims(&self) -> Vec<u64> {
        vec![self.m as u64, self.n as u64, self.p]
    }
    fn write(&self, _: &E, _: &mut Sections) {}
    fn read(_: &E, d: &[u64], _: &mut SectionReader<'_>) -> Result<Self> {
        let [m, n, p] = dims(d)?;
        Ok(SmallFieldVerifyKey { p: p as u64, m, n })
    }
}

impl<E: PairingEngine> Bundle<E> for SmallFieldProof<E> {
    const PART: Part = Part::Proof;
    fn dims(&self) -> Vec<u64> {
        u64s_of(&[self.y.len()])
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.u64s(&self.y);
        out.elems(suite.g1(), &[self.zeta]);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        let [m] = dims(d)?;
        Ok(SmallFieldProof {
            y: r.u64s_len("y", m)?,
            zeta: r.one(suite.g1(), "zeta")?,
        })
    }
}

impl<E: PairingEngine> Bundle<E> for SmallFieldResponse<E> {
    const PART: Part = Part::Response;
    fn dims(&self) -> Vec<u64> {
        Vec::new()
    }
    fn write(&self, suite: &E, out: &mut Sections) {
        out.scalars(suite.fr(), &[self.h, self.d]);
        out.elems(suite.gt(), &[self.eta]);
    }
    fn read(suite: &E, d: &[u64], r: &mut SectionReader<'_>) -> Result<Self> {
        dims::<0>(d)?;
        let hd = r.scalars_len(suite.fr(), "h, d", 2)?;
        Ok(SmallFieldResponse {
            h: hd[0],
            d: hd[1],
            eta: r.one(suite.gt(), "eta")?,
        })
    }
}
