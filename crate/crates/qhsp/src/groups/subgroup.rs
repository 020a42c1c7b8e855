//! Subgroups of finite abelian groups.
//!
//! A subgroup is stored as a Hermite-reduced basis of the exponent-vector
//! lattice spanned by its generators together with the relation vectors
//! `n_j * e_j`. The basis gives O(k^2) membership tests and the exact
//! order as a determinant; invariant factors come from a Smith reduction
//! of the quotient relation matrix.

use super::snf::{column_hermite_basis, smith_normal_form, IntegerMatrix};
use super::{AbelianGroup, GroupElement, GroupError};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

/// A term of a generator list: an element, a raw coordinate vector, or a
/// nested collection of either.
#[derive(Debug, Clone)]
pub enum GeneratorTerm {
    Element(GroupElement),
    Coords(Vec<i64>),
    Nested(Vec<GeneratorTerm>),
}

impl From<GroupElement> for GeneratorTerm {
    fn from(e: GroupElement) -> Self {
        GeneratorTerm::Element(e)
    }
}

impl From<Vec<i64>> for GeneratorTerm {
    fn from(c: Vec<i64>) -> Self {
        GeneratorTerm::Coords(c)
    }
}

impl From<Vec<GeneratorTerm>> for GeneratorTerm {
    fn from(terms: Vec<GeneratorTerm>) -> Self {
        GeneratorTerm::Nested(terms)
    }
}

/// Subgroup of an [`AbelianGroup`], closed under the parent's operation.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: AbelianGroup,
    generators: Vec<GroupElement>,
    /// Lower-triangular column basis of the exponent lattice (k columns,
    /// column j pivots at row j).
    basis: Vec<Vec<i64>>,
    order: u64,
    structure: OnceLock<Vec<u64>>,
    closure: OnceLock<Vec<u64>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        // The Hermite basis is canonical for the lattice, so basis equality
        // is set equality.
        self.parent == other.parent && self.basis == other.basis
    }
}

impl Eq for Subgroup {}

impl AbelianGroup {
    /// Construct the subgroup generated by the terms of `terms`, each of
    /// which must lift into this group. The structure of the subgroup is
    /// computed at creation.
    pub fn subgroup(&self, terms: &[GeneratorTerm]) -> Result<Subgroup, GroupError> {
        let mut gens = Vec::new();
        self.lift_terms(terms, &mut gens)?;
        let sub = Subgroup::generated_by(self.clone(), gens);
        sub.structure();
        Ok(sub)
    }

    fn lift_terms(
        &self,
        terms: &[GeneratorTerm],
        out: &mut Vec<GroupElement>,
    ) -> Result<(), GroupError> {
        for term in terms {
            match term {
                GeneratorTerm::Element(e) => {
                    if e.coords().len() != self.rank() {
                        return Err(GroupError::UnliftableTerm {
                            expected: self.rank(),
                            found: e.coords().len(),
                        });
                    }
                    out.push(e.clone());
                }
                GeneratorTerm::Coords(c) => {
                    let e = self.element(c).map_err(|_| GroupError::UnliftableTerm {
                        expected: self.rank(),
                        found: c.len(),
                    })?;
                    out.push(e);
                }
                GeneratorTerm::Nested(inner) => self.lift_terms(inner, out)?,
            }
        }
        Ok(())
    }

    /// The whole group viewed as a subgroup of itself.
    pub fn full_subgroup(&self) -> Subgroup {
        let gens: Vec<GroupElement> = (0..self.rank())
            .map(|j| {
                let mut c = vec![0i64; self.rank()];
                c[j] = 1;
                self.element(&c).unwrap()
            })
            .collect();
        Subgroup::generated_by(self.clone(), gens)
    }

    /// Trivial subgroup containing only the identity.
    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::generated_by(self.clone(), Vec::new())
    }

    /// The p-Sylow subgroup: all elements of p-power order.
    pub fn sylow_subgroup(&self, p: u64) -> Result<Subgroup, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let mut gens = Vec::new();
        for (j, &n) in self.invariant_factors().iter().enumerate() {
            let mut q = 1u64;
            let mut m = n;
            while m % p == 0 {
                q *= p;
                m /= p;
            }
            if q > 1 {
                let mut c = vec![0i64; self.rank()];
                c[j] = (n / q) as i64;
                gens.push(self.element(&c).unwrap());
            }
        }
        Ok(Subgroup::generated_by(self.clone(), gens))
    }

    /// Every subgroup of this group, found by closure saturation. Intended
    /// for desk-scale exhaustive sweeps.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut known: std::collections::BTreeMap<Vec<u64>, Subgroup> =
            std::collections::BTreeMap::new();
        let trivial = self.trivial_subgroup();
        known.insert(trivial.closure_indices().to_vec(), trivial);
        let mut frontier: Vec<Vec<u64>> = known.keys().cloned().collect();
        while let Some(closure) = frontier.pop() {
            for idx in 0..self.order() {
                if closure.binary_search(&idx).is_ok() {
                    continue;
                }
                let mut gens: Vec<GroupElement> =
                    closure.iter().map(|&i| self.element_from_index(i)).collect();
                gens.push(self.element_from_index(idx));
                let h = Subgroup::generated_by(self.clone(), gens);
                let key = h.closure_indices().to_vec();
                if !known.contains_key(&key) {
                    frontier.push(key.clone());
                    known.insert(key, h);
                }
            }
        }
        known.into_values().collect()
    }

    /// Invariant factors of the subgroup generated by `gens`, largest
    /// first (each factor divisible by the next). Empty input gives the
    /// trivial structure `[]`.
    pub fn structure_of(&self, gens: &[GroupElement]) -> Result<Vec<u64>, GroupError> {
        for g in gens {
            if g.coords().len() != self.rank() {
                return Err(GroupError::DimensionMismatch {
                    expected: self.rank(),
                    found: g.coords().len(),
                });
            }
        }
        Ok(Subgroup::generated_by(self.clone(), gens.to_vec())
            .structure()
            .to_vec())
    }
}

impl Subgroup {
    /// Subgroup generated by already-lifted elements. Basis and order are
    /// computed eagerly, closure and structure on demand; see
    /// [`AbelianGroup::subgroup`] for the lifting front end.
    pub fn generated_by(parent: AbelianGroup, generators: Vec<GroupElement>) -> Subgroup {
        let k = parent.rank();
        let mut columns: Vec<Vec<i64>> = generators
            .iter()
            .map(|g| g.coords().iter().map(|&c| c as i64).collect())
            .collect();
        for (j, &n) in parent.invariant_factors().iter().enumerate() {
            let mut rel = vec![0i64; k];
            rel[j] = n as i64;
            columns.push(rel);
        }
        let basis = column_hermite_basis(k, &columns)
            .expect("lattice contains the relation vectors, so it is full rank");
        let index: u64 = (0..k).map(|i| basis[i][i] as u64).product();
        let order = parent.order() / index;
        Subgroup {
            parent,
            generators,
            basis,
            order,
            structure: OnceLock::new(),
            closure: OnceLock::new(),
        }
    }

    pub fn parent(&self) -> &AbelianGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Column basis of the exponent lattice (includes the relation part).
    pub fn basis_columns(&self) -> Vec<GroupElement> {
        (0..self.parent.rank())
            .map(|j| {
                let col: Vec<i64> = (0..self.parent.rank()).map(|i| self.basis[j][i]).collect()
            ;
                self.parent.element(&col).unwrap()
            })
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Membership by forward substitution against the triangular basis.
    pub fn contains(&self, g: &GroupElement) -> Result<bool, GroupError> {
        let k = self.parent.rank();
        if g.coords().len() != k {
            return Err(GroupError::DimensionMismatch {
                expected: k,
                found: g.coords().len(),
            });
        }
        let mut residual: Vec<i128> = g.coords().iter().map(|&c| c as i128).collect();
        for j in 0..k {
            let pivot = self.basis[j][j] as i128;
            if residual[j] % pivot != 0 {
                return Ok(false);
            }
            let x = residual[j] / pivot;
            for i in j..k {
                residual[i] -= x * self.basis[j][i] as i128;
            }
        }
        Ok(true)
    }

    /// Invariant factors of the subgroup, largest first.
    pub fn structure(&self) -> &[u64] {
        self.structure.get_or_init(|| {
            let k = self.parent.rank();
            // Solve basis * C = diag(n); the quotient Z^k / C Z^k is the
            // subgroup, so the Smith diagonal of C gives its factors.
            let mut c = IntegerMatrix::zeros(k, k);
            for col in 0..k {
                let mut rhs = vec![0i128; k];
                rhs[col] = self.parent.invariant_factors()[col] as i128;
                for j in 0..k {
                    let pivot = self.basis[j][j] as i128;
                    debug_assert_eq!(rhs[j] % pivot, 0);
                    let x = rhs[j] / pivot;
                    for i in j..k {
                        rhs[i] -= x * self.basis[j][i] as i128;
                    }
                    c[(j, col)] = BigInt::from(x);
                }
            }
            let snf = smith_normal_form(&c);
            let mut factors: Vec<u64> = snf
                .diagonal()
                .iter()
                .filter(|d| !d.is_zero() && d.abs() > BigInt::from(1))
                .map(|d| d.to_u64().expect("invariant factor fits u64"))
                .collect();
            factors.reverse();
            factors
        })
    }

    /// All elements of the subgroup as sorted parent indices. Materialized
    /// once; intended for desk-scale parents.
    pub fn closure_indices(&self) -> &[u64] {
        self.closure.get_or_init(|| {
            let mut seen = std::collections::BTreeSet::new();
            let identity = self.parent.identity();
            seen.insert(self.parent.index_of(&identity));
            let mut frontier = vec![identity];
            while let Some(e) = frontier.pop() {
                for g in &self.generators {
                    let next = self.parent.compose(&e, g).unwrap();
                    if seen.insert(self.parent.index_of(&next)) {
                        frontier.push(next);
                    }
                }
            }
            seen.into_iter().collect()
        })
    }

    /// All elements of the subgroup.
    pub fn elements(&self) -> Vec<GroupElement> {
        self.closure_indices()
            .iter()
            .map(|&i| self.parent.element_from_index(i))
            .collect()
    }

    /// Canonical representative of the coset `g + H`: its lexicographically
    /// smallest element. Equal outputs exactly characterize equal cosets.
    pub fn coset_representative(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        if g.coords().len() != self.parent.rank() {
            return Err(GroupError::DimensionMismatch {
                expected: self.parent.rank(),
                found: g.coords().len(),
            });
        }
        let mut best = u64::MAX;
        for &h in self.closure_indices() {
            let e = self.parent.element_from_index(h);
            let candidate = self.parent.index_of(&self.parent.compose(g, &e)?);
            best = best.min(candidate);
        }
        Ok(self.parent.element_from_index(best))
    }

    /// The annihilator `H^perp`: all characters sending every element of the
    /// subgroup to 1, returned as a subgroup of the (self-dual) dual group.
    pub fn annihilator(&self) -> Subgroup {
        let vectors: Vec<Vec<u64>> = (0..self.parent.rank())
            .map(|j| {
                (0..self.parent.rank())
                    .map(|i| self.basis[j][i] as u64)
                    .collect()
            })
            .collect();
        let refs: Vec<&[u64]> = vectors.iter().map(|v| v.as_slice()).collect();
        pairing_kernel(&self.parent, &refs)
    }

    /// View the elements of this subgroup as characters of the parent.
    pub fn characters(&self) -> Vec<Character> {
        self.elements()
            .into_iter()
            .map(|e| Character::new(e.coords().to_vec()))
            .collect()
    }
}

/// Kernel of the bilinear pairing rows: all `y` with
/// `sum_j y_j v_j |G|/n_j = 0 (mod |G|)` for every `v` in `vectors`.
///
/// Solved through the Smith form of the scaled constraint matrix; this is
/// the workhorse behind both annihilators and character kernels.
pub fn pairing_kernel(group: &AbelianGroup, vectors: &[&[u64]]) -> Subgroup {
    let k = group.rank();
    if vectors.is_empty() {
        return group.full_subgroup();
    }
    let q = group.order();
    let mut m = IntegerMatrix::zeros(vectors.len(), k);
    for (i, v) in vectors.iter().enumerate() {
        assert_eq!(v.len(), k, "pairing vector has wrong rank");
        for j in 0..k {
            let scale = q / group.invariant_factors()[j];
            m[(i, j)] = BigInt::from(v[j]) * BigInt::from(scale);
        }
    }
    let snf = smith_normal_form(&m);
    let diag = snf.diagonal();
    let qb = BigInt::from(q);

    let mut gens = Vec::new();
    for i in 0..k {
        let step = if i < diag.len() {
            &qb / diag[i].gcd(&qb)
        } else {
            BigInt::from(1)
        };
        let coords: Vec<i64> = (0..k)
            .map(|row| {
                let v = &snf.v[(row, i)] * &step;
                let n = BigInt::from(group.invariant_factors()[row]);
                (v.mod_floor(&n)).to_i64().unwrap()
            })
            .collect();
        gens.push(group.element(&coords).unwrap());
    }
    Subgroup::generated_by(group.clone(), gens)
}

/// Character of a finite abelian group: `g -> exp(2 pi i sum y_j g_j / n_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    exponents: Vec<u64>,
}

impl Character {
    pub fn new(exponents: Vec<u64>) -> Self {
        Character { exponents }
    }

    pub fn trivial(group: &AbelianGroup) -> Self {
        Character {
            exponents: vec![0; group.rank()],
        }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&y| y == 0)
    }

    /// The character as an element of the dual group.
    pub fn as_element(&self) -> GroupElement {
        GroupElement::from_coords(self.exponents.clone())
    }

    pub fn eval(&self, group: &AbelianGroup, g: &GroupElement) -> Complex64 {
        let mut phase = 0.0f64;
        for ((&y, &x), &n) in self
            .exponents
            .iter()
            .zip(g.coords())
            .zip(group.invariant_factors())
        {
            phase += ((y as u128 * x as u128) % n as u128) as f64 / n as f64;
        }
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase)
    }

    /// True when the character maps every element of `h` to 1.
    pub fn annihilates(&self, h: &Subgroup) -> bool {
        let group = h.parent();
        let q = group.order() as u128;
        h.basis_columns().iter().all(|col| {
            let mut acc: u128 = 0;
            for ((&y, &x), &n) in self
                .exponents
                .iter()
                .zip(col.coords())
                .zip(group.invariant_factors())
            {
                acc = (acc + (y as u128 * x as u128 % q) * (q / n as u128)) % q;
            }
            acc == 0
        })
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
