//! Subgroup-reconstruction encryption.
//!
//! The session key deterministically selects a generator `g_K` of a cyclic
//! subgroup `H` of a public abelian group `G`. Plaintext bytes are
//! re-expressed as base-`r` digits (`r` the order of `g_K`) and each digit
//! `m` ships as the element `m * g_K` of `H`; chaff elements drawn from
//! `G \ H` are interleaved at seeded positions. The receiver rebuilds `H`
//! from the key, keeps exactly the elements inside it, and decodes digits
//! by discrete logarithm — membership doubles as implicit authentication,
//! since any substituted non-member changes the member count and is
//! reported as a length mismatch.
//!
//! The digit stream carries a sentinel: the encoded integer is
//! `2^{8L} + P` for an `L`-byte plaintext `P`, zero-padded to the digit
//! count of the largest such value. That pins the expected member count as
//! a function of `L` alone, so a single dropped or foreign element is
//! always detected.

pub mod attack;
pub mod frame;

pub use attack::{eve_attack, AttackReport, AttackTruth, OracleLevel};
pub use frame::CiphertextFrame;

use crate::groups::{AbelianGroup, GroupElement, GroupError, Subgroup};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QepError {
    #[error("session key must be at least 8 bytes")]
    KeyTooShort,
    #[error("key derives the identity element; re-key and retry")]
    DegenerateKey,
    #[error("subgroup fills the whole group, no room for chaff")]
    NoChaffSpace,
    #[error("chaff ratio must be a finite non-negative number")]
    InvalidChaffRatio,
    #[error("group order must be at least 4")]
    GroupTooSmall,
    #[error("invariant factor exceeds the 32-bit wire format")]
    FactorTooWide,
    #[error("malformed frame at byte {offset}: {reason}")]
    MalformedFrame { offset: u64, reason: &'static str },
    #[error("decoded digit stream cannot cover the declared plaintext length")]
    LengthMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Shared secret key; stands in for a key-agreement transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionKey {
    bytes: Vec<u8>,
}

impl SessionKey {
    pub fn new(bytes: Vec<u8>) -> Result<Self, QepError> {
        if bytes.len() < 8 {
            return Err(QepError::KeyTooShort);
        }
        Ok(SessionKey { bytes })
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }
}

/// Encryption parameters: the public group, the chaff-per-data ratio, and
/// the seed for chaff placement. Placement is deliberately key-independent;
/// positions carry no information, all secrecy lives in the key.
#[derive(Debug, Clone)]
pub struct QepParams {
    pub group: AbelianGroup,
    pub chaff_ratio: f64,
    pub seed: u64,
}

impl QepParams {
    pub fn new(group: AbelianGroup, chaff_ratio: f64, seed: u64) -> Result<Self, QepError> {
        if group.order() < 4 {
            return Err(QepError::GroupTooSmall);
        }
        if group.invariant_factors().iter().any(|&n| n > u32::MAX as u64) {
            return Err(QepError::FactorTooWide);
        }
        if !chaff_ratio.is_finite() || chaff_ratio < 0.0 {
            return Err(QepError::InvalidChaffRatio);
        }
        Ok(QepParams {
            group,
            chaff_ratio,
            seed,
        })
    }
}

/// Deterministically map the key to a group element: read the key as a
/// big-endian integer and peel one residue per coordinate. If the integer
/// runs out before the coordinates do, the key bytes are re-mixed by a
/// one-bit rotation per pass and reading continues. The identity is
/// rejected — the caller must re-key.
pub fn derive_generator(key: &SessionKey, group: &AbelianGroup) -> Result<GroupElement, QepError> {
    if group.order() < 4 {
        return Err(QepError::GroupTooSmall);
    }
    let mut acc = BigUint::from_bytes_be(key.bytes());
    let mut pass = 0u32;
    let mut coords = Vec::with_capacity(group.rank());
    for &n in group.invariant_factors() {
        if acc.is_zero() && pass < 8 {
            pass += 1;
            let remixed: Vec<u8> = key.bytes().iter().map(|b| b.rotate_left(pass)).collect();
            acc = BigUint::from_bytes_be(&remixed);
        }
        let (q, rem) = acc.div_rem(&BigUint::from(n));
        coords.push(rem.to_u64().unwrap() as i64);
        acc = q;
    }
    let element = group.element(&coords)?;
    if element == group.identity() {
        return Err(QepError::DegenerateKey);
    }
    Ok(element)
}

/// Little-endian base-`r` digits of `v`.
fn to_digits(mut v: BigUint, r: u64) -> Vec<u64> {
    let radix = BigUint::from(r);
    let mut digits = Vec::new();
    while !v.is_zero() {
        let (q, rem) = v.div_rem(&radix);
        digits.push(rem.to_u64().unwrap());
        v = q;
    }
    digits
}

fn from_digits(digits: &[u64], r: u64) -> BigUint {
    let radix = BigUint::from(r);
    let mut v = BigUint::zero();
    for &d in digits.iter().rev() {
        v = v * &radix + BigUint::from(d);
    }
    v
}

/// `2^{8L} + P`: the sentinel bit pins the magnitude of the encoded value.
fn sentinel_value(plaintext: &[u8]) -> BigUint {
    (BigUint::one() << (8 * plaintext.len())) + BigUint::from_bytes_be(plaintext)
}

/// Number of data elements a plaintext of `len` bytes always produces in
/// base `r`: the digit count of the largest sentinel value.
pub(crate) fn digit_count_for_len(len: u64, r: u64) -> usize {
    if len == 0 {
        return 0;
    }
    let max = (BigUint::one() << (8 * len as usize + 1)) - BigUint::one();
    to_digits(max, r).len()
}

/// Encrypt `plaintext` under `key`. The returned frame carries the group
/// descriptor, the true plaintext length, and the interleaved element
/// sequence; `decrypt` inverts it exactly.
pub fn encrypt<R: Rng + ?Sized>(
    params: &QepParams,
    key: &SessionKey,
    plaintext: &[u8],
    rng: &mut R,
) -> Result<CiphertextFrame, QepError> {
    let group = &params.group;
    let generator = derive_generator(key, group)?;
    let order = group.element_order(&generator)?;
    let subgroup = Subgroup::generated_by(group.clone(), vec![generator.clone()]);

    let digits = if plaintext.is_empty() {
        Vec::new()
    } else {
        let mut d = to_digits(sentinel_value(plaintext), order);
        d.resize(digit_count_for_len(plaintext.len() as u64, order), 0);
        d
    };
    let data_count = digits.len();
    let chaff_count = (params.chaff_ratio * data_count.max(1) as f64).ceil() as usize;
    if chaff_count > 0 && subgroup.order() == group.order() {
        return Err(QepError::NoChaffSpace);
    }

    // chaff positions from the public placement seed, values from the
    // caller's RNG by rejection from G \ H
    let total = data_count + chaff_count;
    let mut placement = ChaCha8Rng::seed_from_u64(params.seed);
    let mut slots: Vec<usize> = (0..total).collect();
    for i in 0..total.saturating_sub(1) {
        let j = placement.gen_range(i..total);
        slots.swap(i, j);
    }
    let chaff_slots: std::collections::HashSet<usize> = slots[..chaff_count].iter().copied().collect();

    let mut elements = Vec::with_capacity(total);
    let mut digit_iter = digits.iter();
    for position in 0..total {
        if chaff_slots.contains(&position) {
            let e = loop {
                let candidate = group.random_element(rng);
                if !subgroup.contains(&candidate)? {
                    break candidate;
                }
            };
            elements.push(e);
        } else {
            let &m = digit_iter.next().expect("data slots match digit count");
            elements.push(group.scalar_mul(m, &generator)?);
        }
    }

    Ok(CiphertextFrame::new(
        group.clone(),
        plaintext.len() as u64,
        elements,
    ))
}

/// Decrypt a frame: rebuild the group from the header, re-derive the
/// generator, keep the members of its subgroup, and decode.
pub fn decrypt(key: &SessionKey, frame: &CiphertextFrame) -> Result<Vec<u8>, QepError> {
    let generator = derive_generator(key, frame.group())?;
    decode_with_generator(frame, &generator)
}

/// Decode a frame against a hypothesized subgroup generator. Shared by the
/// honest receiver (who derives the generator from the key) and the attack
/// harness (which searches for it).
pub(crate) fn decode_with_generator(
    frame: &CiphertextFrame,
    generator: &GroupElement,
) -> Result<Vec<u8>, QepError> {
    let group = frame.group();
    let order = group.element_order(generator)?;
    let subgroup = Subgroup::generated_by(group.clone(), vec![generator.clone()]);

    let mut digits = Vec::new();
    for e in frame.elements() {
        if subgroup.contains(e)? {
            digits.push(group.discrete_log(generator, e)?);
        }
    }
    let len = frame.plaintext_len();
    if digits.len() != digit_count_for_len(len, order) {
        return Err(QepError::LengthMismatch);
    }
    if len == 0 {
        return Ok(Vec::new());
    }
    let value = from_digits(&digits, order);
    let floor = BigUint::one() << (8 * len as usize);
    if value < floor || value >= (&floor << 1) {
        return Err(QepError::LengthMismatch);
    }
    let body = value - floor;
    let mut bytes = body.to_bytes_be();
    if bytes.len() > len as usize {
        return Err(QepError::LengthMismatch);
    }
    while (bytes.len() as u64) < len {
        bytes.insert(0, 0);
    }
    // BigUint::to_bytes_be returns [0] for zero; normalize
    if bytes.len() as u64 > len {
        bytes = bytes[bytes.len() - len as usize..].to_vec();
    }
    Ok(bytes)
}
