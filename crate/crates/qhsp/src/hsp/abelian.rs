//! The abelian hidden-subgroup solver.
//!
//! One round runs the full pipeline — uniform superposition, oracle in
//! superposition, value measurement, abelian Fourier transform, group
//! measurement — and yields a character that annihilates the hidden
//! subgroup with certainty. The classical side intersects character
//! kernels until the running kernel stops shrinking.

use super::{HspError, STABLE_ROUNDS};
use crate::groups::subgroup::pairing_kernel;
use crate::groups::{AbelianGroup, Character, Subgroup};
use crate::qsim::{
    apply_oracle, measure_group_register, measure_value_register, qft_abelian, OracleTable,
    QuantumState,
};
use rand::Rng;
use serde::Serialize;

/// Bound on `|G|` for the classical exhaustive baseline.
pub const BRUTE_FORCE_BOUND: u64 = 512;

/// An abelian HSP instance: the group, the hiding oracle, and (for test
/// harnesses) the subgroup the oracle was built from.
#[derive(Debug, Clone)]
pub struct AbelianHspInstance {
    group: AbelianGroup,
    oracle: OracleTable,
    true_subgroup: Option<Subgroup>,
}

impl AbelianHspInstance {
    /// Wrap an existing oracle. When the hidden subgroup is supplied and
    /// the group is small, the coset-separation property is checked
    /// exhaustively.
    pub fn new(
        group: AbelianGroup,
        oracle: OracleTable,
        true_subgroup: Option<Subgroup>,
    ) -> Result<Self, HspError> {
        if let Some(h) = &true_subgroup {
            if group.order() <= BRUTE_FORCE_BOUND {
                verify_separates(&group, &oracle, h)?;
            }
        }
        Ok(AbelianHspInstance {
            group,
            oracle,
            true_subgroup,
        })
    }

    /// Standard instance: the canonical coset-representative oracle for a
    /// hidden subgroup, with the value register indexed by group elements.
    pub fn from_subgroup(subgroup: &Subgroup) -> Result<Self, HspError> {
        let group = subgroup.parent().clone();
        let dim = group.order() as usize;
        let table: Vec<usize> = (0..dim)
            .map(|g| {
                let e = group.element_from_index(g as u64);
                group.index_of(&subgroup.coset_representative(&e).unwrap()) as usize
            })
            .collect();
        let oracle = OracleTable::new(table, dim);
        Self::new(group, oracle, Some(subgroup.clone()))
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn oracle(&self) -> &OracleTable {
        &self.oracle
    }

    pub fn true_subgroup(&self) -> Option<&Subgroup> {
        self.true_subgroup.as_ref()
    }
}

fn verify_separates(
    group: &AbelianGroup,
    oracle: &OracleTable,
    h: &Subgroup,
) -> Result<(), HspError> {
    let mut value_of_coset = std::collections::HashMap::new();
    let mut seen_values = std::collections::HashSet::new();
    for g in group.iter_elements() {
        let rep = group.index_of(&h.coset_representative(&g).map_err(HspError::Group)?);
        let value = oracle.peek(group.index_of(&g) as usize);
        match value_of_coset.get(&rep) {
            Some(&v) if v != value => return Err(HspError::OracleNotSeparating),
            Some(_) => {}
            None => {
                if !seen_values.insert(value) {
                    return Err(HspError::OracleNotSeparating);
                }
                value_of_coset.insert(rep, value);
            }
        }
    }
    Ok(())
}

/// One full pipeline run; returns the measured character. The returned
/// character annihilates the hidden subgroup with certainty (the state
/// carries no amplitude outside its annihilator).
pub fn sample_character<R: Rng + ?Sized>(
    instance: &AbelianHspInstance,
    rng: &mut R,
) -> Result<Character, HspError> {
    let dim = instance.group.order() as usize;
    let state = QuantumState::uniform_superposition(dim, instance.oracle.value_dim())?;
    let state = apply_oracle(&state, &instance.oracle)?;
    let (_, coset_state) = measure_value_register(&state, rng);
    let transformed = qft_abelian(&coset_state, &instance.group)?;
    let label = measure_group_register(&transformed, rng);
    let exponents = instance
        .group
        .element_from_index(label as u64)
        .coords()
        .to_vec();
    Ok(Character::new(exponents))
}

/// Joint kernel of a set of characters: all `g` with `rho_y(g) = 1` for
/// every listed `y`. Computed through the Smith form of the scaled
/// congruence system. The empty list gives the whole group.
pub fn kernel_of_characters(group: &AbelianGroup, chars: &[Character]) -> Subgroup {
    let vectors: Vec<&[u64]> = chars.iter().map(|c| c.exponents()).collect();
    pairing_kernel(group, &vectors)
}

/// Solver report; serializes to the JSON document the CLI emits.
#[derive(Debug, Clone, Serialize)]
pub struct AbelianSolverReport {
    pub recovered_generators: Vec<Vec<u64>>,
    pub oracle_evaluations: u64,
    pub rounds: u32,
    pub success: bool,
    #[serde(skip)]
    pub recovered: Subgroup,
}

/// Sample characters until the running kernel has been stable for
/// [`STABLE_ROUNDS`] consecutive draws, or `max_rounds` is reached. On
/// budget exhaustion the best-effort kernel is returned with
/// `success = false`.
pub fn solve_abelian_hsp<R: Rng + ?Sized>(
    instance: &AbelianHspInstance,
    rng: &mut R,
    max_rounds: u32,
) -> Result<AbelianSolverReport, HspError> {
    let start_evals = instance.oracle.evaluations();
    let mut chars: Vec<Character> = Vec::new();
    let mut kernel = instance.group.full_subgroup();
    let mut stable = 0u32;
    let mut rounds = 0u32;
    let mut success = false;

    while rounds < max_rounds {
        let chi = sample_character(instance, rng)?;
        rounds += 1;
        chars.push(chi);
        let next = kernel_of_characters(&instance.group, &chars);
        if next == kernel {
            stable += 1;
        } else {
            stable = 0;
            kernel = next;
        }
        if stable >= STABLE_ROUNDS {
            success = true;
            break;
        }
    }

    let recovered_generators = kernel
        .basis_columns()
        .iter()
        .map(|e| e.coords().to_vec())
        .collect();
    Ok(AbelianSolverReport {
        recovered_generators,
        oracle_evaluations: instance.oracle.evaluations() - start_evals,
        rounds,
        success,
        recovered: kernel,
    })
}

/// Classical baseline: query the oracle on every element — exactly `|G|`
/// evaluations — and return `{g : f(g) = f(identity)}`.
pub fn brute_force_hsp(group: &AbelianGroup, oracle: &OracleTable) -> Result<Subgroup, HspError> {
    if group.order() > BRUTE_FORCE_BOUND {
        return Err(HspError::TooLarge(group.order()));
    }
    let f0 = oracle.eval(0);
    let mut members = Vec::new();
    for idx in 1..group.order() {
        if oracle.eval(idx as usize) == f0 {
            members.push(group.element_from_index(idx));
        }
    }
    Ok(Subgroup::generated_by(group.clone(), members))
}
