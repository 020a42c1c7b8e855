//! The non-abelian family `W_n = Z_2^n wr Z_2`.
//!
//! An element is a pair of n-bit vectors plus a swap bit:
//! `(a, b, t) * (a', b', t') = (a ^ a'', b ^ b'', t ^ t')` where
//! `(a'', b'')` is `(a', b')` when `t = 0` and `(b', a')` when `t = 1`.
//! The base group `N = {t = 0}` is an index-2 normal subgroup isomorphic
//! to `Z_2^{2n}`. Everything is desk scale: closures are materialized and
//! `n` is capped at 4, so `|W_n| = 2^{2n+1} <= 512`.

use thiserror::Error;

/// Largest supported `n`; keeps every closure enumerable.
pub const MAX_WREATH_N: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WreathError {
    #[error("elements live in different W_n ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("n = {0} exceeds the desk-scale bound {MAX_WREATH_N}")]
    TooLarge(usize),
    #[error("cannot parse wreath element `{0}`")]
    BadElement(String),
}

/// Element `(a, b, t)` of `W_n`; `a` and `b` are bitmasks of width `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    n: usize,
    a: u16,
    b: u16,
    t: bool,
}

impl WreathElement {
    pub fn new(n: usize, a: u16, b: u16, t: bool) -> Result<Self, WreathError> {
        if n == 0 || n > MAX_WREATH_N {
            return Err(WreathError::TooLarge(n));
        }
        let mask = (1u16 << n) - 1;
        Ok(WreathElement {
            n,
            a: a & mask,
            b: b & mask,
            t,
        })
    }

    pub fn identity(n: usize) -> Result<Self, WreathError> {
        Self::new(n, 0, 0, false)
    }

    /// The swap element `(0, 0, 1)`, a coset representative outside `N`.
    pub fn swap(n: usize) -> Result<Self, WreathError> {
        Self::new(n, 0, 0, true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a_bits(&self) -> u16 {
        self.a
    }

    pub fn b_bits(&self) -> u16 {
        self.b
    }

    pub fn swap_bit(&self) -> bool {
        self.t
    }

    /// True exactly when the element lies in the base group `N`.
    pub fn is_in_base(&self) -> bool {
        !self.t
    }

    /// The `(a, b)` part as a `2n`-bit vector, `a` in the low bits.
    pub fn base_vector(&self) -> u32 {
        (self.a as u32) | ((self.b as u32) << self.n)
    }

    /// Build an element from a `2n`-bit base vector and a swap bit.
    pub fn from_base_vector(n: usize, v: u32, t: bool) -> Result<Self, WreathError> {
        let mask = (1u32 << n) - 1;
        Self::new(n, (v & mask) as u16, ((v >> n) & mask) as u16, t)
    }

    /// Dense index in `[0, 2^{2n+1})`: base vector plus swap bit on top.
    pub fn index(&self) -> usize {
        (self.base_vector() as usize) | (usize::from(self.t) << (2 * self.n))
    }

    pub fn from_index(n: usize, idx: usize) -> Result<Self, WreathError> {
        if n == 0 || n > MAX_WREATH_N {
            return Err(WreathError::TooLarge(n));
        }
        debug_assert!(idx < group_order(n));
        let t = idx >> (2 * n) != 0;
        Self::from_base_vector(n, (idx & ((1 << (2 * n)) - 1)) as u32, t)
    }

    pub fn compose(&self, other: &WreathElement) -> Result<WreathElement, WreathError> {
        if self.n != other.n {
            return Err(WreathError::DimensionMismatch(self.n, other.n));
        }
        let (a2, b2) = if self.t {
            (other.b, other.a)
        } else {
            (other.a, other.b)
        };
        Ok(WreathElement {
            n: self.n,
            a: self.a ^ a2,
            b: self.b ^ b2,
            t: self.t ^ other.t,
        })
    }

    pub fn inverse(&self) -> WreathElement {
        if self.t {
            WreathElement {
                n: self.n,
                a: self.b,
                b: self.a,
                t: true,
            }
        } else {
            *self
        }
    }

    pub fn conjugate_by(&self, s: &WreathElement) -> Result<WreathElement, WreathError> {
        s.compose(self)?.compose(&s.inverse())
    }

    /// Parse the textual form `a|b|t`, e.g. `"10|01|1"`. The leftmost
    /// character of each bit string is bit 0.
    pub fn parse(s: &str) -> Result<Self, WreathError> {
        let parts: Vec<&str> = s.split('|').collect();
        let bad = || WreathError::BadElement(s.to_string());
        if parts.len() != 3 {
            return Err(bad());
        }
        let n = parts[0].len();
        if n == 0 || n > MAX_WREATH_N || parts[1].len() != n || parts[2].len() != 1 {
            return Err(bad());
        }
        let read_bits = |txt: &str| -> Result<u16, WreathError> {
            let mut v = 0u16;
            for (i, c) in txt.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => v |= 1 << i,
                    _ => return Err(bad()),
                }
            }
            Ok(v)
        };
        let a = read_bits(parts[0])?;
        let b = read_bits(parts[1])?;
        let t = match parts[2] {
            "0" => false,
            "1" => true,
            _ => return Err(bad()),
        };
        Self::new(n, a, b, t)
    }
}

impl std::fmt::Display for WreathElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bits = |v: u16| -> String {
            (0..self.n)
                .map(|i| if v >> i & 1 == 1 { '1' } else { '0' })
                .collect()
        };
        write!(
            f,
            "{}|{}|{}",
            bits(self.a),
            bits(self.b),
            u8::from(self.t)
        )
    }
}

pub fn group_order(n: usize) -> usize {
    1 << (2 * n + 1)
}

/// Iterate the whole of `W_n` in index order.
pub fn iter_elements(n: usize) -> impl Iterator<Item = WreathElement> {
    (0..group_order(n)).map(move |i| WreathElement::from_index(n, i).unwrap())
}

/// A subgroup of `W_n` with its closure materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathSubgroup {
    n: usize,
    generators: Vec<WreathElement>,
    closure: Vec<WreathElement>, // sorted by index
}

impl WreathSubgroup {
    /// Smallest subgroup containing `gens`, by product saturation.
    pub fn closure_of(n: usize, gens: &[WreathElement]) -> Result<Self, WreathError> {
        if n == 0 || n > MAX_WREATH_N {
            return Err(WreathError::TooLarge(n));
        }
        for g in gens {
            if g.n() != n {
                return Err(WreathError::DimensionMismatch(n, g.n()));
            }
        }
        let identity = WreathElement::identity(n)?;
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(identity);
        let mut frontier = vec![identity];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let next = x.compose(g)?;
                if seen.insert(next) {
                    frontier.push(next);
                }
            }
        }
        Ok(WreathSubgroup {
            n,
            generators: gens.to_vec(),
            closure: seen.into_iter().collect(),
        })
    }

    /// The base group `N` itself.
    pub fn base_group(n: usize) -> Result<Self, WreathError> {
        let gens: Vec<WreathElement> = (0..2 * n)
            .map(|i| WreathElement::from_base_vector(n, 1 << i, false).unwrap())
            .collect();
        Self::closure_of(n, &gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.closure.len()
    }

    pub fn generators(&self) -> &[WreathElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[WreathElement] {
        &self.closure
    }

    pub fn contains(&self, x: &WreathElement) -> bool {
        x.n() == self.n && self.closure.binary_search(x).is_ok()
    }

    pub fn is_subgroup_of_base(&self) -> bool {
        self.closure.iter().all(WreathElement::is_in_base)
    }

    /// The conjugate subgroup `s U s^{-1}`.
    pub fn conjugate_by(&self, s: &WreathElement) -> Result<WreathSubgroup, WreathError> {
        if s.n() != self.n {
            return Err(WreathError::DimensionMismatch(self.n, s.n()));
        }
        let gens: Vec<WreathElement> = self
            .generators
            .iter()
            .map(|u| u.conjugate_by(s))
            .collect::<Result<_, _>>()?;
        let mut closure: Vec<WreathElement> = self
            .closure
            .iter()
            .map(|u| u.conjugate_by(s))
            .collect::<Result<_, _>>()?;
        closure.sort_unstable();
        Ok(WreathSubgroup {
            n: self.n,
            generators: gens,
            closure,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element<R: Rng>(n: usize, rng: &mut R) -> WreathElement {
        WreathElement::from_index(n, rng.gen_range(0..group_order(n))).unwrap()
    }

    #[test]
    fn product_examples() {
        let x = WreathElement::parse("1|0|1").unwrap();
        let y = WreathElement::parse("0|1|0").unwrap();
        assert_eq!(x.compose(&y).unwrap(), WreathElement::parse("0|0|1").unwrap());
        assert_eq!(x.compose(&x).unwrap(), WreathElement::parse("1|1|0").unwrap());
    }

    #[test]
    fn inverse_law_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x17ea);
        for n in 1..=MAX_WREATH_N {
            let id = WreathElement::identity(n).unwrap();
            for _ in 0..100 {
                let x = random_element(n, &mut rng);
                assert_eq!(x.compose(&x.inverse()).unwrap(), id);
                assert_eq!(x.inverse().compose(&x).unwrap(), id);
            }
        }
    }

    #[test]
    fn group_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x3a75);
        for n in 1..=MAX_WREATH_N {
            let id = WreathElement::identity(n).unwrap();
            for _ in 0..1000 {
                let x = random_element(n, &mut rng);
                let y = random_element(n, &mut rng);
                let z = random_element(n, &mut rng);
                let xy_z = x.compose(&y).unwrap().compose(&z).unwrap();
                let x_yz = x.compose(&y.compose(&z).unwrap()).unwrap();
                assert_eq!(xy_z, x_yz);
                assert_eq!(x.compose(&id).unwrap(), x);
                assert_eq!(id.compose(&x).unwrap(), x);
            }
        }
    }

    #[test]
    fn base_elements_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xba5e);
        for n in 1..=MAX_WREATH_N {
            for _ in 0..200 {
                let x = WreathElement::from_base_vector(
                    n,
                    rng.gen_range(0..(1u32 << (2 * n))),
                    false,
                )
                .unwrap();
                let y = WreathElement::from_base_vector(
                    n,
                    rng.gen_range(0..(1u32 << (2 * n))),
                    false,
                )
                .unwrap();
                assert_eq!(x.compose(&y).unwrap(), y.compose(&x).unwrap());
            }
        }
    }

    #[test]
    fn base_group_membership() {
        for n in 1..=3 {
            let in_base = iter_elements(n).filter(WreathElement::is_in_base).count();
            assert_eq!(in_base * 2, group_order(n), "N has index 2");
        }
        assert!(WreathElement::parse("10|11|0").unwrap().is_in_base());
        assert!(!WreathElement::parse("10|11|1").unwrap().is_in_base());
    }

    #[test]
    fn full_group_order_by_enumeration() {
        for n in 1..=3 {
            let all: Vec<WreathElement> = iter_elements(n).collect();
            let sub = WreathSubgroup::closure_of(n, &all).unwrap();
            assert_eq!(sub.order(), 1 << (2 * n + 1));
        }
    }

    #[test]
    fn closure_examples() {
        assert_eq!(WreathSubgroup::closure_of(2, &[]).unwrap().order(), 1);

        let invol = WreathElement::parse("1|1|0").unwrap();
        assert_eq!(WreathSubgroup::closure_of(1, &[invol]).unwrap().order(), 2);

        let all: Vec<WreathElement> = iter_elements(1).collect();
        assert_eq!(WreathSubgroup::closure_of(1, &all).unwrap().order(), 8);
    }

    #[test]
    fn base_group_is_normal() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x4042);
        for n in 1..=3 {
            let base = WreathSubgroup::base_group(n).unwrap();
            assert_eq!(base.order(), 1 << (2 * n));
            for s in iter_elements(n) {
                assert_eq!(base.conjugate_by(&s).unwrap().elements(), base.elements());
            }
            let _ = &mut rng;
        }
        // spot checks at n = 4 where exhaustion is skipped
        let base = WreathSubgroup::base_group(4).unwrap();
        for _ in 0..100 {
            let s = random_element(4, &mut rng);
            assert_eq!(base.conjugate_by(&s).unwrap().elements(), base.elements());
        }
    }

    #[test]
    fn conjugation_examples() {
        let u = WreathSubgroup::closure_of(2, &[WreathElement::parse("10|00|0").unwrap()]).unwrap();
        // conjugating by the swap element exchanges the two halves
        let swapped = u.conjugate_by(&WreathElement::swap(2).unwrap()).unwrap();
        let expected =
            WreathSubgroup::closure_of(2, &[WreathElement::parse("00|10|0").unwrap()]).unwrap();
        assert_eq!(swapped.elements(), expected.elements());

        // identity and members leave the subgroup unchanged
        assert_eq!(
            u.conjugate_by(&WreathElement::identity(2).unwrap())
                .unwrap()
                .elements(),
            u.elements()
        );
        for s in u.elements().to_vec() {
            assert_eq!(u.conjugate_by(&s).unwrap().elements(), u.elements());
        }
    }

    #[test]
    fn conjugation_preserves_order_and_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0a7);
        for _ in 0..50 {
            let n = rng.gen_range(1..=3);
            let gens: Vec<WreathElement> = (0..rng.gen_range(0..3))
                .map(|_| random_element(n, &mut rng))
                .collect();
            let u = WreathSubgroup::closure_of(n, &gens).unwrap();
            let s = random_element(n, &mut rng);
            let c = u.conjugate_by(&s).unwrap();
            assert_eq!(c.order(), u.order());
            // closed under product and inverse
            for x in c.elements() {
                assert!(c.contains(&x.inverse()));
                for y in c.elements() {
                    assert!(c.contains(&x.compose(y).unwrap()));
                }
            }
        }
    }

    #[test]
    fn closure_rejects_oversized_n() {
        assert_eq!(
            WreathSubgroup::closure_of(5, &[]),
            Err(WreathError::TooLarge(5))
        );
    }

    #[test]
    fn text_form_round_trip() {
        for s in ["10|01|1", "1|1|0", "0011|1010|0"] {
            let e = WreathElement::parse(s).unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert!(WreathElement::parse("10|0|1").is_err());
        assert!(WreathElement::parse("10|01").is_err());
        assert!(WreathElement::parse("1x|01|1").is_err());
        assert!(WreathElement::parse("10|01|2").is_err());
    }

    #[test]
    fn index_round_trip() {
        for n in 1..=MAX_WREATH_N {
            for idx in 0..group_order(n) {
                assert_eq!(WreathElement::from_index(n, idx).unwrap().index(), idx);
            }
        }
    }
}
