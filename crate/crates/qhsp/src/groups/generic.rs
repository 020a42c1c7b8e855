//! Generic abelian group construction over an indexed domain.
//!
//! The builder validates the co-dependencies between its parameters and
//! normalizes the result into invariant-factor form. The domain is treated
//! purely as an index set `{0, .., domain_size-1}` with modular addition as
//! its default law; intrinsic operation handles are carried as named
//! declarations and checked for arity.

use super::{AbelianGroup, GroupElement, GroupError};
use std::sync::OnceLock;

/// A named operation handle with a declared arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intrinsic {
    pub name: String,
    pub arity: u8,
}

impl Intrinsic {
    pub fn new(name: &str, arity: u8) -> Self {
        Intrinsic {
            name: name.to_string(),
            arity,
        }
    }
}

/// Parameters for [`build_generic_group`]. All fields optional except the
/// domain size; invalid combinations are rejected at build time.
#[derive(Debug, Clone, Default)]
pub struct GenericGroupDescriptor {
    pub domain_size: u64,
    pub id_intrinsic: Option<Intrinsic>,
    pub add_intrinsic: Option<Intrinsic>,
    pub inverse_intrinsic: Option<Intrinsic>,
    pub use_representation: bool,
    pub order: Option<u64>,
    pub user_generators: Option<Vec<u64>>,
    pub proper_subset: bool,
    pub random_intrinsic: Option<Intrinsic>,
    pub compute_structure: bool,
}

impl GenericGroupDescriptor {
    pub fn over_domain(domain_size: u64) -> Self {
        GenericGroupDescriptor {
            domain_size,
            ..Default::default()
        }
    }
}

/// A generic group: carrier data plus a memoized normalized form. The
/// normalization (structure computation) runs at most once; eagerly when
/// requested, otherwise on the first structural query.
#[derive(Debug)]
pub struct GenericGroup {
    ambient: AbelianGroup,
    declared_order: Option<u64>,
    user_generators: Vec<GroupElement>,
    use_representation: bool,
    resolved: OnceLock<AbelianGroup>,
}

impl GenericGroup {
    /// Whether the structure has been computed yet. Observational only;
    /// the computed value never depends on when it was triggered.
    pub fn structure_computed(&self) -> bool {
        self.resolved.get().is_some()
    }

    /// The normalized group. First call triggers structure computation.
    pub fn group(&self) -> &AbelianGroup {
        self.resolved.get_or_init(|| self.normalize())
    }

    /// Group order. Honors a declared order without triggering structure
    /// computation.
    pub fn order(&self) -> u64 {
        match self.declared_order {
            Some(o) => o,
            None => self.group().order(),
        }
    }

    pub fn ambient(&self) -> &AbelianGroup {
        &self.ambient
    }

    pub fn user_generators(&self) -> &[GroupElement] {
        &self.user_generators
    }

    fn normalize(&self) -> AbelianGroup {
        if let Some(order) = self.declared_order {
            return AbelianGroup::cyclic(order).expect("declared order validated at build");
        }
        if !self.user_generators.is_empty() {
            let factors = self
                .ambient
                .structure_of(&self.user_generators)
                .expect("user generators validated at build");
            // identity-only generator lists are rejected at build time,
            // so the factor list is never empty here
            return AbelianGroup::new(&factors).expect("structure factors are valid");
        }
        self.ambient.clone()
    }

    /// Express an element in terms of the user generators; the exponent
    /// vector is found by discrete logarithm against each cyclic factor of
    /// the generator closure. Only meaningful when the group was built
    /// with `use_representation`.
    pub fn represent(&self, e: &GroupElement) -> Result<RepresentedElement, GroupError> {
        let mut exponents = Vec::with_capacity(self.user_generators.len());
        let mut residual = e.clone();
        for g in &self.user_generators {
            // greedy peel: take the largest multiple of g that leaves the
            // residual inside the span of the remaining generators
            let span_rest = |coords: &GroupElement, rest: &[GroupElement]| -> bool {
                super::subgroup::Subgroup::generated_by(self.ambient.clone(), rest.to_vec())
                    .contains(coords)
                    .unwrap()
            };
            let r = self.ambient.element_order(g)?;
            let rest: Vec<GroupElement> = self
                .user_generators
                .iter()
                .filter(|h| *h != g)
                .cloned()
                .collect();
            let mut found = None;
            for m in 0..r {
                let part = self.ambient.scalar_mul(m, g)?;
                let remainder = self
                    .ambient
                    .compose(&residual, &self.ambient.inverse(&part)?)?;
                if span_rest(&remainder, &rest) {
                    found = Some((m, remainder));
                    break;
                }
            }
            match found {
                Some((m, remainder)) => {
                    exponents.push(m);
                    residual = remainder;
                }
                None => return Err(GroupError::NotInCyclicSubgroup),
            }
        }
        if residual != self.ambient.identity() {
            return Err(GroupError::NotInCyclicSubgroup);
        }
        Ok(RepresentedElement {
            element: e.clone(),
            exponents,
        })
    }
}

/// An element carrying its cached exponent vector over the user generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentedElement {
    pub element: GroupElement,
    pub exponents: Vec<u64>,
}

/// Validate a descriptor and build the generic group.
pub fn build_generic_group(d: &GenericGroupDescriptor) -> Result<GenericGroup, GroupError> {
    let intrinsics = [
        ("IdIntrinsic", &d.id_intrinsic, 1u8),
        ("AddIntrinsic", &d.add_intrinsic, 2u8),
        ("InverseIntrinsic", &d.inverse_intrinsic, 2u8),
    ];
    let set_count = intrinsics.iter().filter(|(_, i, _)| i.is_some()).count();
    if set_count != 0 && set_count != 3 {
        return Err(GroupError::MissingIntrinsics);
    }
    for (name, intrinsic, expected) in intrinsics {
        if let Some(i) = intrinsic {
            if i.arity != expected {
                return Err(GroupError::InvalidIntrinsicArity {
                    name,
                    expected,
                    found: i.arity,
                });
            }
        }
    }
    if d.proper_subset && d.order.is_none() && d.user_generators.is_none() {
        return Err(GroupError::UnderspecifiedSubset);
    }
    if d.proper_subset && d.random_intrinsic.is_none() && d.user_generators.is_none() {
        return Err(GroupError::MissingRandom);
    }
    if d.domain_size < 2 {
        return Err(GroupError::InvalidFactor(d.domain_size));
    }
    if let Some(o) = d.order {
        if o < 2 {
            return Err(GroupError::InvalidFactor(o));
        }
    }

    let ambient = AbelianGroup::cyclic(d.domain_size)?;
    let user_generators = match &d.user_generators {
        Some(gens) => gens
            .iter()
            .map(|&g| ambient.element(&[g as i64]))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    if d.order.is_none()
        && !user_generators.is_empty()
        && user_generators.iter().all(|g| *g == ambient.identity())
    {
        // an identity-only generator list would describe the order-1 group,
        // which has no invariant-factor form
        return Err(GroupError::DegenerateGenerators);
    }

    let group = GenericGroup {
        ambient,
        declared_order: d.order,
        user_generators,
        use_representation: d.use_representation,
        resolved: OnceLock::new(),
    };
    if d.compute_structure {
        group.group();
    }
    Ok(group)
}

impl GenericGroup {
    pub fn use_representation(&self) -> bool {
        self.use_representation
    }
}
