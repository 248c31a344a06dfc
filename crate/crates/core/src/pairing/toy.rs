//! Transparent test backend: `G1 = G2 = GT = (Z_q, +)` with generator 1,
//! `g^a = a mod q` and `e(x, y) = x*y mod q`.
//!
//! Bilinear and non-degenerate, and completely insecure: discrete logs are
//! the element values. Useful for exact algebra checks and for measuring
//! soundness bounds of order `1/q` with small `q`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use super::{Backend, Group, GroupTag, PairingEngine, ScalarField};
use crate::error::{Error, Result};

/// Modulus used by the statistical soundness checks.
pub const DEFAULT_TOY_MODULUS: u64 = 101;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToyField {
    q: u64,
}

impl ToyField {
    pub fn q(&self) -> u64 {
        self.q
    }
}

impl ScalarField for ToyField {
    type Elem = u64;

    fn modulus(&self) -> BigUint {
        BigUint::from(self.q)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.q
    }
    fn from_biguint(&self, v: &BigUint) -> u64 {
        (v % self.q).to_u64().expect("reduced below q")
    }
    fn to_biguint(&self, a: &u64) -> BigUint {
        BigUint::from(*a)
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.q as u128) as u64
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.q - (b - a)
        }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }
    fn inverse(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // Fermat: a^(q-2)
        let mut base = a;
        let mut e = self.q - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Some(acc)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.q)
    }
    fn byte_len(&self) -> usize {
        8
    }
    fn write_elem(&self, a: &u64, out: &mut Vec<u8>) {
        out.extend_from_slice(&a.to_le_bytes());
    }
    fn read_elem(&self, bytes: &[u8]) -> Result<u64> {
        let arr: [u8; 8] = bytes
            .try_into()
            .map_err(|_| Error::decode(format!("toy field element needs 8 bytes, got {}", bytes.len())))?;
        let v = u64::from_le_bytes(arr);
        if v >= self.q {
            return Err(Error::decode(format!("residue {v} not reduced mod {}", self.q)));
        }
        Ok(v)
    }
}

/// Element of toy group `G` (1, 2 or 3); the value is its discrete log.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToyElem<const G: u8>(pub u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToyGroup<const G: u8> {
    field: ToyField,
}

impl<const G: u8> Group<ToyField> for ToyGroup<G> {
    type Elem = ToyElem<G>;
    const TAG: GroupTag = match G {
        1 => GroupTag::G1,
        2 => GroupTag::G2,
        _ => GroupTag::Gt,
    };

    fn identity(&self) -> ToyElem<G> {
        ToyElem(0)
    }
    fn generator(&self) -> ToyElem<G> {
        ToyElem(1)
    }
    fn op(&self, a: &ToyElem<G>, b: &ToyElem<G>) -> ToyElem<G> {
        ToyElem(self.field.add(a.0, b.0))
    }
    fn inverse(&self, a: &ToyElem<G>) -> ToyElem<G> {
        ToyElem(self.field.neg(a.0))
    }
    fn exp_raw(&self, base: &ToyElem<G>, s: &u64) -> ToyElem<G> {
        ToyElem(self.field.mul(base.0, *s))
    }
    fn multi_exp_raw(&self, field: &ToyField, bases: &[ToyElem<G>], exps: &[u64]) -> ToyElem<G> {
        let q = field.q as u128;
        let acc = bases
            .iter()
            .zip(exps)
            .fold(0u128, |acc, (b, e)| (acc + b.0 as u128 * *e as u128) % q);
        ToyElem(acc as u64)
    }
    fn encoded_len(&self) -> usize {
        9
    }
    fn write_raw(&self, a: &ToyElem<G>, out: &mut Vec<u8>) {
        out.extend_from_slice(&a.0.to_le_bytes());
    }
    fn read_raw(&self, bytes: &[u8]) -> Result<ToyElem<G>> {
        self.field.read_elem(bytes).map(ToyElem)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToySuite {
    field: ToyField,
    g1: ToyGroup<1>,
    g2: ToyGroup<2>,
    gt: ToyGroup<3>,
}

/// Builds the toy suite of prime order `q`.
pub fn suite_toy(q: u64) -> Result<ToySuite> {
    if q < 3 || !primal_check::miller_rabin(q) {
        return Err(Error::param(format!("toy modulus {q} is not a prime >= 3")));
    }
    let field = ToyField { q };
    Ok(ToySuite {
        field,
        g1: ToyGroup { field },
        g2: ToyGroup { field },
        gt: ToyGroup { field },
    })
}

impl ToySuite {
    pub fn q(&self) -> u64 {
        self.field.q
    }
}

impl PairingEngine for ToySuite {
    type Fr = ToyField;
    type G1 = ToyGroup<1>;
    type G2 = ToyGroup<2>;
    type Gt = ToyGroup<3>;

    fn backend(&self) -> Backend {
        Backend::Toy
    }
    fn fr(&self) -> &ToyField {
        &self.field
    }
    fn g1(&self) -> &ToyGroup<1> {
        &self.g1
    }
    fn g2(&self) -> &ToyGroup<2> {
        &self.g2
    }
    fn gt(&self) -> &ToyGroup<3> {
        &self.gt
    }
    fn pair_raw(&self, a: &ToyElem<1>, b: &ToyElem<2>) -> ToyElem<3> {
        ToyElem(self.field.mul(a.0, b.0))
    }
}
