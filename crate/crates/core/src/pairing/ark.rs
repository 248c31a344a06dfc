//! Real backend: an arkworks pairing-friendly curve.

use std::fmt;
use std::marker::PhantomData;

use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::scalar_mul::variable_base::VariableBaseMSM;
use ark_ec::scalar_mul::ScalarMul;
use ark_ec::PrimeGroup;
use ark_ff::{Field, PrimeField, Zero};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use num_bigint::BigUint;
use rand::Rng;

use super::{Backend, Group, GroupTag, PairingEngine, ScalarField};
use crate::error::{Error, Result};

/// The real suite used throughout: type-3 pairing on the BN254 curve.
pub type RealSuite = ArkSuite<ark_bn254::Bn254>;

/// The fixed real suite. Deterministic: the curve, generators and field are
/// compile-time constants.
pub fn suite_real() -> Result<RealSuite> {
    Ok(ArkSuite::new())
}

pub struct ArkField<F>(PhantomData<fn() -> F>);

impl<F> Clone for ArkField<F> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<F> Copy for ArkField<F> {}

impl<F> fmt::Debug for ArkField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ArkField")
    }
}

impl<F: PrimeField> ScalarField for ArkField<F> {
    type Elem = F;

    fn modulus(&self) -> BigUint {
        F::MODULUS.into()
    }
    fn zero(&self) -> F {
        F::zero()
    }
    fn one(&self) -> F {
        F::one()
    }
    fn from_u64(&self, v: u64) -> F {
        F::from(v)
    }
    fn from_biguint(&self, v: &BigUint) -> F {
        F::from(v.clone())
    }
    fn to_biguint(&self, a: &F) -> BigUint {
        a.into_bigint().into()
    }
    fn add(&self, a: F, b: F) -> F {
        a + b
    }
    fn sub(&self, a: F, b: F) -> F {
        a - b
    }
    fn mul(&self, a: F, b: F) -> F {
        a * b
    }
    fn neg(&self, a: F) -> F {
        -a
    }
    fn inverse(&self, a: F) -> Option<F> {
        Field::inverse(&a)
    }
    fn is_zero(&self, a: &F) -> bool {
        a.is_zero()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> F {
        F::rand(rng)
    }
    fn byte_len(&self) -> usize {
        F::zero().compressed_size()
    }
    fn write_elem(&self, a: &F, out: &mut Vec<u8>) {
        a.serialize_compressed(out)
            .expect("writing to a Vec cannot fail");
    }
    fn read_elem(&self, bytes: &[u8]) -> Result<F> {
        if bytes.len() != self.byte_len() {
            return Err(Error::decode(format!(
                "field element needs {} bytes, got {}",
                self.byte_len(),
                bytes.len()
            )));
        }
        F::deserialize_compressed(bytes).map_err(|e| Error::decode(format!("field element: {e}")))
    }
}

/// One of the three groups of an arkworks pairing, tagged `T` (1, 2 or 3).
pub struct ArkGroup<G, const T: u8>(PhantomData<fn() -> G>);

impl<G, const T: u8> Clone for ArkGroup<G, T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<G, const T: u8> Copy for ArkGroup<G, T> {}

impl<G, const T: u8> fmt::Debug for ArkGroup<G, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArkGroup<{T}>")
    }
}

impl<G, const T: u8> Group<ArkField<G::ScalarField>> for ArkGroup<G, T>
where
    G: PrimeGroup + ScalarMul + VariableBaseMSM + CanonicalSerialize + CanonicalDeserialize,
{
    type Elem = G;
    const TAG: GroupTag = match T {
        1 => GroupTag::G1,
        2 => GroupTag::G2,
        _ => GroupTag::Gt,
    };

    fn identity(&self) -> G {
        G::zero()
    }
    fn generator(&self) -> G {
        G::generator()
    }
    fn op(&self, a: &G, b: &G) -> G {
        *a + b
    }
    fn inverse(&self, a: &G) -> G {
        -*a
    }
    fn is_identity(&self, a: &G) -> bool {
        a.is_zero()
    }
    fn exp_raw(&self, base: &G, s: &G::ScalarField) -> G {
        *base * s
    }
    fn multi_exp_raw(&self, _field: &ArkField<G::ScalarField>, bases: &[G], exps: &[G::ScalarField]) -> G {
        let affine = G::batch_convert_to_mul_base(bases);
        G::msm(&affine, exps).expect("lengths checked by caller")
    }
    fn gen_exp_vec_raw(&self, s: &[G::ScalarField]) -> Vec<G> {
        G::generator().batch_mul(s).into_iter().map(Into::into).collect()
    }
    fn encoded_len(&self) -> usize {
        1 + G::generator().compressed_size()
    }
    fn write_raw(&self, a: &G, out: &mut Vec<u8>) {
        a.serialize_compressed(out)
            .expect("writing to a Vec cannot fail");
    }
    fn read_raw(&self, bytes: &[u8]) -> Result<G> {
        G::deserialize_compressed(bytes)
            .map_err(|e| Error::decode(format!("{:?} element: {e}", Self::TAG)))
    }
}

pub struct ArkSuite<P: Pairing> {
    field: ArkField<P::ScalarField>,
    g1: ArkGroup<P::G1, 1>,
    g2: ArkGroup<P::G2, 2>,
    gt: ArkGroup<PairingOutput<P>, 3>,
}

impl<P: Pairing> ArkSuite<P> {
    pub fn new() -> Self {
        ArkSuite {
            field: ArkField(PhantomData),
            g1: ArkGroup(PhantomData),
            g2: ArkGroup(PhantomData),
            gt: ArkGroup(PhantomData),
        }
    }
}

impl<P: Pairing> Default for ArkSuite<P> {
    fn default() -> Self {
        Self::new()
    }
}

impl<P: Pairing> Clone for ArkSuite<P> {
    fn clone(&self) -> Self {
        Self::new()
    }
}

impl<P: Pairing> fmt::Debug for ArkSuite<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArkSuite<{}>", std::any::type_name::<P>())
    }
}

impl<P: Pairing> PairingEngine for ArkSuite<P> {
    type Fr = ArkField<P::ScalarField>;
    type G1 = ArkGroup<P::G1, 1>;
    type G2 = ArkGroup<P::G2, 2>;
    type Gt = ArkGroup<PairingOutput<P>, 3>;

    fn backend(&self) -> Backend {
        Backend::Real
    }
    fn fr(&self) -> &Self::Fr {
        &self.field
    }
    fn g1(&self) -> &Self::G1 {
        &self.g1
    }
    fn g2(&self) -> &Self::G2 {
        &self.g2
    }
    fn gt(&self) -> &Self::Gt {
        &self.gt
    }
    fn pair_raw(&self, a: &P::G1, b: &P::G2) -> PairingOutput<P> {
        P::pairing(*a, *b)
    }
    fn pairing_product_raw(&self, a: &[P::G1], b: &[P::G2]) -> PairingOutput<P> {
        if a.is_empty() {
            return PairingOutput::zero();
        }
        P::multi_pairing(a.iter().copied(), b.iter().copied())
    }
}
