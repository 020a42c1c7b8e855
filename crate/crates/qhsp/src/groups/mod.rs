//! Finite abelian groups in invariant-factor form and their arithmetic.
//!
//! A group is a product `Z_{n_1} x ... x Z_{n_k}`; elements are coordinate
//! vectors reduced modulo the factors. Everything downstream (subgroups,
//! characters, the Fourier transform, the encryption scheme) is built on
//! this representation.

pub mod generic;
pub mod snf;
pub mod subgroup;

pub use generic::{build_generic_group, GenericGroup, GenericGroupDescriptor, Intrinsic};
pub use snf::{column_hermite_basis, smith_normal_form, IntegerMatrix, SmithNormalForm};
pub use subgroup::{Character, Subgroup};

use num_integer::Integer;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("coordinate count {found} does not match group rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invariant factor {0} is smaller than 2")]
    InvalidFactor(u64),
    #[error("group needs at least one invariant factor")]
    EmptyFactors,
    #[error("group order overflows a 64-bit integer")]
    OrderOverflow,
    #[error("one intrinsic operation is set without the other two")]
    MissingIntrinsics,
    #[error("intrinsic `{name}` declares arity {found}, expected {expected}")]
    InvalidIntrinsicArity {
        name: &'static str,
        expected: u8,
        found: u8,
    },
    #[error("proper subset requires an order or user generators")]
    UnderspecifiedSubset,
    #[error("proper subset requires a random intrinsic or user generators")]
    MissingRandom,
    #[error("user generators span only the identity")]
    DegenerateGenerators,
    #[error("generator term has {found} coordinates, group rank is {expected}")]
    UnliftableTerm { expected: usize, found: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("target is not a multiple of the base element")]
    NotInCyclicSubgroup,
    #[error("discrete log base is the identity")]
    DegenerateBase,
    #[error("cannot parse group descriptor `{0}`")]
    BadDescriptor(String),
}

/// Finite abelian group `Z_{n_1} x ... x Z_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    order: u64,
}

/// Element of an [`AbelianGroup`]: one residue per invariant factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(factors: &[u64]) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::EmptyFactors);
        }
        let mut order: u64 = 1;
        for &n in factors {
            if n < 2 {
                return Err(GroupError::InvalidFactor(n));
            }
            order = order.checked_mul(n).ok_or(GroupError::OrderOverflow)?;
        }
        Ok(AbelianGroup {
            factors: factors.to_vec(),
            order,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        Self::new(&[n])
    }

    /// Parse the textual descriptor form, e.g. `"8,4,2"`.
    pub fn parse_descriptor(s: &str) -> Result<Self, GroupError> {
        let factors: Result<Vec<u64>, _> = s.split(',').map(|t| t.trim().parse::<u64>()).collect();
        match factors {
            Ok(f) if !f.is_empty() => Self::new(&f),
            _ => Err(GroupError::BadDescriptor(s.to_string())),
        }
    }

    /// Textual descriptor form, e.g. `"8,4,2"`.
    pub fn descriptor(&self) -> String {
        self.factors
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.factors.len()],
        }
    }

    /// Lift a coordinate vector into the group, reducing each entry
    /// modulo its factor (negative entries wrap).
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.factors.len() {
            return Err(GroupError::DimensionMismatch {
                expected: self.factors.len(),
                found: coords.len(),
            });
        }
        let coords = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn compose(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(a)?;
        self.check_member(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| if x == 0 { 0 } else { n - x })
            .collect();
        Ok(GroupElement { coords })
    }

    /// `m * a` by coordinate-wise modular multiplication.
    pub fn scalar_mul(&self, m: u64, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| ((m as u128 * x as u128) % n as u128) as u64)
            .collect();
        Ok(GroupElement { coords })
    }

    /// Order of an element: lcm over coordinates of `n_j / gcd(n_j, a_j)`.
    pub fn element_order(&self, a: &GroupElement) -> Result<u64, GroupError> {
        self.check_member(a)?;
        let mut order = 1u64;
        for (&x, &n) in a.coords.iter().zip(&self.factors) {
            order = order.lcm(&(n / n.gcd(&x)));
        }
        Ok(order)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let coords = self.factors.iter().map(|&n| rng.gen_range(0..n)).collect();
        GroupElement { coords }
    }

    /// Mixed-radix index of an element; coordinate 0 is most significant,
    /// so index order agrees with lexicographic coordinate order.
    pub fn index_of(&self, a: &GroupElement) -> u64 {
        let mut idx = 0u64;
        for (&x, &n) in a.coords.iter().zip(&self.factors) {
            idx = idx * n + x;
        }
        idx
    }

    pub fn element_from_index(&self, mut idx: u64) -> GroupElement {
        debug_assert!(idx < self.order);
        let mut coords = vec![0u64; self.factors.len()];
        for j in (0..self.factors.len()).rev() {
            coords[j] = idx % self.factors[j];
            idx /= self.factors[j];
        }
        GroupElement { coords }
    }

    pub fn iter_elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element_from_index(i))
    }

    /// Smallest `m >= 0` with `m * base = target`, if one exists.
    /// Baby-step giant-step over the cyclic subgroup generated by `base`.
    pub fn discrete_log(
        &self,
        base: &GroupElement,
        target: &GroupElement,
    ) -> Result<u64, GroupError> {
        self.check_member(base)?;
        self.check_member(target)?;
        let identity = self.identity();
        if *base == identity {
            return if *target == identity {
                Ok(0)
            } else {
                Err(GroupError::DegenerateBase)
            };
        }
        let r = self.element_order(base)?;
        let s = (r as f64).sqrt().ceil() as u64;

        let mut baby = std::collections::HashMap::new();
        let mut cur = identity;
        for i in 0..s {
            baby.entry(self.index_of(&cur)).or_insert(i);
            cur = self.compose(&cur, base)?;
        }

        let giant_step = self.inverse(&self.scalar_mul(s, base)?)?;
        let mut probe = target.clone();
        let mut j = 0u64;
        while j * s < r + s {
            if let Some(&i) = baby.get(&self.index_of(&probe)) {
                let m = j * s + i;
                if m < r && self.scalar_mul(m, base)? == *target {
                    return Ok(m);
                }
            }
            probe = self.compose(&probe, &giant_step)?;
            j += 1;
        }
        Err(GroupError::NotInCyclicSubgroup)
    }

    fn check_member(&self, a: &GroupElement) -> Result<(), GroupError> {
        if a.coords.len() != self.factors.len() {
            return Err(GroupError::DimensionMismatch {
                expected: self.factors.len(),
                found: a.coords.len(),
            });
        }
        Ok(())
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub(crate) fn from_coords(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }

    /// Parse the textual element form, e.g. `"2,0"`.
    pub fn parse(s: &str, group: &AbelianGroup) -> Result<Self, GroupError> {
        let coords: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
        match coords {
            Ok(c) => group.element(&c),
            Err(_) => Err(GroupError::BadDescriptor(s.to_string())),
        }
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

/// Every abelian group of order at most `bound`, one per factor multiset.
/// Intended for desk-scale exhaustive sweeps.
pub fn all_groups_up_to(bound: u64) -> Vec<AbelianGroup> {
    fn extend(acc: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>, remaining: u64, min: u64) {
        if !cur.is_empty() {
            acc.push(cur.clone());
        }
        let mut f = min;
        while f <= remaining {
            cur.push(f);
            extend(acc, cur, remaining / f, f);
            cur.pop();
            f += 1;
        }
    }
    let mut lists = Vec::new();
    extend(&mut lists, &mut Vec::new(), bound, 2);
    lists
        .into_iter()
        .map(|f| AbelianGroup::new(&f).unwrap())
        .collect()
}
