//! Bilinear pairing engine.
//!
//! Protocols are written against [`PairingEngine`], which bundles a scalar
//! field and three groups of the same prime order with a pairing map between
//! them. Two backends exist: [`ToySuite`], where every group is the additive
//! group of integers modulo a small prime (insecure, but every discrete log is
//! readable), and [`ArkSuite`], backed by an arkworks pairing-friendly curve.
//!
//! Group elements are written multiplicatively in the API (`op`, `exp`)
//! regardless of how the backend stores them.

pub mod counters;
mod ark;
mod toy;

use std::fmt::Debug;

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, Result};

pub use ark::{suite_real, ArkField, ArkGroup, ArkSuite, RealSuite};
pub use counters::{OpCounts, Role, RoleReport};
pub use toy::{suite_toy, ToyElem, ToyField, ToyGroup, ToySuite, DEFAULT_TOY_MODULUS};

/// One-byte tag prefixed to every serialized group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum GroupTag {
    G1 = 0x01,
    G2 = 0x02,
    Gt = 0x03,
}

impl GroupTag {
    pub fn from_byte(b: u8) -> Result<Self> {
        match b {
            0x01 => Ok(GroupTag::G1),
            0x02 => Ok(GroupTag::G2),
            0x03 => Ok(GroupTag::Gt),
            other => Err(Error::decode(format!("unknown group tag {other:#04x}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Real,
    Toy,
}

/// A prime field `F_p` given by a context value. Elements are plain values;
/// all arithmetic goes through the context so that runtime moduli work.
#[allow(clippy::wrong_self_convention)]
pub trait ScalarField: Clone + Debug + Send + Sync + 'static {
    type Elem: Copy + Eq + Debug + Send + Sync + 'static;

    fn modulus(&self) -> BigUint;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem;
    /// Reduces `v` modulo `p`.
    fn from_biguint(&self, v: &BigUint) -> Self::Elem;
    /// Canonical representative in `[0, p)`.
    fn to_biguint(&self, a: &Self::Elem) -> BigUint;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn inverse(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Uniform element of `F_p`.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Fixed width of an encoded element.
    fn byte_len(&self) -> usize;
    /// Little-endian canonical encoding, exactly [`Self::byte_len`] bytes.
    fn write_elem(&self, a: &Self::Elem, out: &mut Vec<u8>);
    /// Inverse of [`Self::write_elem`]; rejects non-canonical values.
    fn read_elem(&self, bytes: &[u8]) -> Result<Self::Elem>;

    fn bits(&self) -> u64 {
        self.modulus().bits()
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        if v < 0 {
            self.neg(self.from_u64(v.unsigned_abs()))
        } else {
            self.from_u64(v as u64)
        }
    }

    /// Uniform element of `F_p \ {0}`.
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    fn random_vec<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Self::Elem> {
        (0..len).map(|_| self.random(rng)).collect()
    }
}

/// A cyclic group of prime order whose exponents live in `F`.
pub trait Group<F: ScalarField>: Clone + Debug + Send + Sync + 'static {
    type Elem: Copy + Eq + Debug + Send + Sync + 'static;
    const TAG: GroupTag;

    fn identity(&self) -> Self::Elem;
    fn generator(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// Uninstrumented `base^s`.
    fn exp_raw(&self, base: &Self::Elem, s: &F::Elem) -> Self::Elem;

    /// Uninstrumented product of `bases[j]^exps[j]`; lengths already checked.
    fn multi_exp_raw(&self, field: &F, bases: &[Self::Elem], exps: &[F::Elem]) -> Self::Elem {
        bases
            .iter()
            .zip(exps)
            .filter(|(_, e)| !field.is_zero(e))
            .fold(self.identity(), |acc, (b, e)| self.op(&acc, &self.exp_raw(b, e)))
    }

    /// Uninstrumented `g^{s_i}` for each entry.
    fn gen_exp_vec_raw(&self, s: &[F::Elem]) -> Vec<Self::Elem> {
        let g = self.generator();
        s.iter().map(|e| self.exp_raw(&g, e)).collect()
    }

    /// Length of one encoded element, tag byte included.
    fn encoded_len(&self) -> usize;
    fn write_raw(&self, a: &Self::Elem, out: &mut Vec<u8>);
    fn read_raw(&self, bytes: &[u8]) -> Result<Self::Elem>;

    /// `base^s`; counts one exponentiation unless `s = 0`.
    fn exp(&self, field: &F, base: &Self::Elem, s: &F::Elem) -> Self::Elem {
        if field.is_zero(s) {
            return self.identity();
        }
        counters::record_exps(Self::TAG, 1);
        self.exp_raw(base, s)
    }

    /// `g^s` for the fixed generator.
    fn gen_exp(&self, field: &F, s: &F::Elem) -> Self::Elem {
        self.exp(field, &self.generator(), s)
    }

    /// `g^{s_i}` for each entry.
    fn gen_exp_vec(&self, field: &F, s: &[F::Elem]) -> Vec<Self::Elem> {
        let nonzero = s.iter().filter(|e| !field.is_zero(e)).count();
        counters::record_exps(Self::TAG, nonzero as u64);
        self.gen_exp_vec_raw(s)
    }

    /// `prod_j bases[j]^{exps[j]}`, counting one exponentiation per nonzero
    /// exponent.
    fn multi_exp(&self, field: &F, bases: &[Self::Elem], exps: &[F::Elem]) -> Result<Self::Elem> {
        if bases.len() != exps.len() {
            return Err(Error::dim(format!(
                "multi-exponentiation over {} bases with {} exponents",
                bases.len(),
                exps.len()
            )));
        }
        let nonzero = exps.iter().filter(|e| !field.is_zero(e)).count();
        counters::record_exps(Self::TAG, nonzero as u64);
        if nonzero == 0 {
            return Ok(self.identity());
        }
        Ok(self.multi_exp_raw(field, bases, exps))
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
    {
        items
            .into_iter()
            .fold(self.identity(), |acc, x| self.op(&acc, x))
    }

    /// Tag byte followed by the backend encoding.
    fn encode(&self, a: &Self::Elem, out: &mut Vec<u8>) {
        out.push(Self::TAG as u8);
        self.write_raw(a, out);
    }

    /// Decodes exactly one element from the front of `bytes`, returning it and
    /// the number of bytes consumed. Elements of another group are refused.
    fn decode(&self, bytes: &[u8]) -> Result<(Self::Elem, usize)> {
        let len = self.encoded_len();
        if bytes.len() < len {
            return Err(Error::decode(format!(
                "need {len} bytes for a {:?} element, have {}",
                Self::TAG,
                bytes.len()
            )));
        }
        let tag = GroupTag::from_byte(bytes[0])?;
        if tag != Self::TAG {
            return Err(Error::MixedGroups {
                expected: Self::TAG,
                found: tag,
            });
        }
        Ok((self.read_raw(&bytes[1..len])?, len))
    }
}

/// Scalar field, three groups and a non-degenerate bilinear map
/// `e: G1 x G2 -> GT`.
pub trait PairingEngine: Clone + Debug + Send + Sync + 'static {
    type Fr: ScalarField;
    type G1: Group<Self::Fr>;
    type G2: Group<Self::Fr>;
    type Gt: Group<Self::Fr>;

    fn backend(&self) -> Backend;
    fn fr(&self) -> &Self::Fr;
    fn g1(&self) -> &Self::G1;
    fn g2(&self) -> &Self::G2;
    fn gt(&self) -> &Self::Gt;

    /// Uninstrumented pairing.
    fn pair_raw(&self, a: &G1Elem<Self>, b: &G2Elem<Self>) -> GtElem<Self>;

    /// Uninstrumented `prod_i e(a_i, b_i)`; lengths already checked.
    fn pairing_product_raw(&self, a: &[G1Elem<Self>], b: &[G2Elem<Self>]) -> GtElem<Self> {
        let gt = self.gt();
        a.iter()
            .zip(b)
            .fold(gt.identity(), |acc, (x, y)| gt.op(&acc, &self.pair_raw(x, y)))
    }

    fn pair(&self, a: &G1Elem<Self>, b: &G2Elem<Self>) -> GtElem<Self> {
        counters::record_pairings(1);
        self.pair_raw(a, b)
    }

    /// `prod_i e(a_i, b_i)`, counting one pairing per term.
    fn pairing_product(&self, a: &[G1Elem<Self>], b: &[G2Elem<Self>]) -> Result<GtElem<Self>> {
        if a.len() != b.len() {
            return Err(Error::dim(format!(
                "pairing product over {} G1 and {} G2 elements",
                a.len(),
                b.len()
            )));
        }
        counters::record_pairings(a.len() as u64);
        Ok(self.pairing_product_raw(a, b))
    }

    /// `g_T = e(g1, g2)`.
    fn gt_generator(&self) -> GtElem<Self> {
        self.gt().generator()
    }

    /// Modulus of the scalar field, i.e. the common group order.
    fn order(&self) -> BigUint {
        self.fr().modulus()
    }
}

pub type Scalar<E> = <<E as PairingEngine>::Fr as ScalarField>::Elem;
pub type G1Elem<E> = <<E as PairingEngine>::G1 as Group<<E as PairingEngine>::Fr>>::Elem;
pub type G2Elem<E> = <<E as PairingEngine>::G2 as Group<<E as PairingEngine>::Fr>>::Elem;
pub type GtElem<E> = <<E as PairingEngine>::Gt as Group<<E as PairingEngine>::Fr>>::Elem;

/// `prod_j u[j]^{v[j]}` in G1.
pub fn multi_exp_g1<E: PairingEngine>(
    suite: &E,
    bases: &[G1Elem<E>],
    exps: &[Scalar<E>],
) -> Result<G1Elem<E>> {
    suite.g1().multi_exp(suite.fr(), bases, exps)
}

/// The `star` operator with a matrix right-hand side: for `bases` of length
/// `r` and `rhs` an `r x c` matrix, returns the row vector whose `k`-th entry is
/// `prod_j bases[j]^{rhs[j,k]}`.
pub fn star_rows<E: PairingEngine>(
    suite: &E,
    bases: &[G1Elem<E>],
    rhs: &crate::linalg::FieldMatrix<Scalar<E>>,
) -> Result<Vec<G1Elem<E>>> {
    if rhs.rows() != bases.len() {
        return Err(Error::dim(format!(
            "star of {} group elements with a {}x{} matrix",
            bases.len(),
            rhs.rows(),
            rhs.cols()
        )));
    }
    let zero = suite.fr().zero();
    (0..rhs.cols())
        .map(|k| {
            let col = rhs.column(k, zero);
            multi_exp_g1(suite, bases, &col)
        })
        .collect()
}
