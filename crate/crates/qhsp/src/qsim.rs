//! Dense two-register state-vector simulation.
//!
//! A state holds complex amplitudes over the product basis
//! `|g> |x>` with `g` ranging over a group register of size `group_dim`
//! and `x` over a value register of size `value_dim`. Operations return
//! new states; measurements additionally take an explicit RNG so every
//! experiment is reproducible.

use crate::groups::AbelianGroup;
use num_complex::Complex64;
use rand::Rng;
use std::cell::Cell;
use std::rc::Rc;
use thiserror::Error;

/// Hard bound on the amplitude vector length.
pub const MAX_STATE_DIM: usize = 1 << 20;
/// Default bound on the group-register dimension.
pub const MAX_GROUP_DIM: usize = 4096;
/// Tolerance for exactness claims (normalization, unitarity, support).
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QsimError {
    #[error("state of {group_dim} x {value_dim} exceeds the simulation bound")]
    TooLarge { group_dim: usize, value_dim: usize },
    #[error("group register has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("value register is not in the zero state")]
    ValueRegisterNotClean,
    #[error("oracle table length {found} does not match group dimension {expected}")]
    OracleMismatch { expected: usize, found: usize },
}

/// Normalized amplitude vector over the two-register basis.
#[derive(Debug, Clone)]
pub struct QuantumState {
    group_dim: usize,
    value_dim: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// Uniform superposition over the group register, value register zero.
    pub fn uniform_superposition(group_dim: usize, value_dim: usize) -> Result<Self, QsimError> {
        check_dims(group_dim, value_dim)?;
        let amp = Complex64::new(1.0 / (group_dim as f64).sqrt(), 0.0);
        let mut amps = vec![Complex64::new(0.0, 0.0); group_dim * value_dim];
        for g in 0..group_dim {
            amps[g * value_dim] = amp;
        }
        Ok(QuantumState {
            group_dim,
            value_dim,
            amps,
        })
    }

    /// Point mass on a single basis state.
    pub fn basis_state(
        group_dim: usize,
        value_dim: usize,
        g: usize,
        x: usize,
    ) -> Result<Self, QsimError> {
        check_dims(group_dim, value_dim)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); group_dim * value_dim];
        amps[g * value_dim + x] = Complex64::new(1.0, 0.0);
        Ok(QuantumState {
            group_dim,
            value_dim,
            amps,
        })
    }

    /// Build a state from raw amplitudes (normalized by the caller).
    pub fn from_amplitudes(
        group_dim: usize,
        value_dim: usize,
        amps: Vec<Complex64>,
    ) -> Result<Self, QsimError> {
        check_dims(group_dim, value_dim)?;
        assert_eq!(amps.len(), group_dim * value_dim);
        Ok(QuantumState {
            group_dim,
            value_dim,
            amps,
        })
    }

    pub fn group_dim(&self) -> usize {
        self.group_dim
    }

    pub fn value_dim(&self) -> usize {
        self.value_dim
    }

    pub fn amplitude(&self, g: usize, x: usize) -> Complex64 {
        self.amps[g * self.value_dim + x]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < TOLERANCE
    }

    /// Marginal probability of each group-register label.
    pub fn group_marginal(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.group_dim];
        for g in 0..self.group_dim {
            for x in 0..self.value_dim {
                p[g] += self.amps[g * self.value_dim + x].norm_sqr();
            }
        }
        p
    }

    /// Marginal probability of each value-register label.
    pub fn value_marginal(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.value_dim];
        for g in 0..self.group_dim {
            for x in 0..self.value_dim {
                p[x] += self.amps[g * self.value_dim + x].norm_sqr();
            }
        }
        p
    }
}

fn check_dims(group_dim: usize, value_dim: usize) -> Result<(), QsimError> {
    if group_dim == 0
        || value_dim == 0
        || group_dim > MAX_GROUP_DIM
        || group_dim.saturating_mul(value_dim) > MAX_STATE_DIM
    {
        return Err(QsimError::TooLarge {
            group_dim,
            value_dim,
        });
    }
    Ok(())
}

/// Explicit lookup-table oracle `f: [group_dim] -> [value_dim]` with an
/// evaluation counter. One application in superposition counts as one
/// evaluation, as does one classical probe. The counter is shared between
/// restrictions of the same table and is not thread safe; a table belongs
/// to a single solver run.
#[derive(Debug, Clone)]
pub struct OracleTable {
    values: Vec<usize>,
    value_dim: usize,
    counter: Rc<Cell<u64>>,
}

impl OracleTable {
    pub fn new(values: Vec<usize>, value_dim: usize) -> Self {
        debug_assert!(values.iter().all(|&v| v < value_dim));
        OracleTable {
            values,
            value_dim,
            counter: Rc::new(Cell::new(0)),
        }
    }

    pub fn from_fn(group_dim: usize, value_dim: usize, f: impl Fn(usize) -> usize) -> Self {
        Self::new((0..group_dim).map(f).collect(), value_dim)
    }

    pub fn group_dim(&self) -> usize {
        self.values.len()
    }

    pub fn value_dim(&self) -> usize {
        self.value_dim
    }

    /// One classical evaluation.
    pub fn eval(&self, g: usize) -> usize {
        self.counter.set(self.counter.get() + 1);
        self.values[g]
    }

    /// Table lookup without touching the counter; for verification code
    /// that audits a table rather than querying the black box.
    pub fn peek(&self, g: usize) -> usize {
        self.values[g]
    }

    pub fn evaluations(&self) -> u64 {
        self.counter.get()
    }

    /// A view of the oracle on a sub-register given by `indices`; shares
    /// this table's evaluation counter.
    pub fn restrict(&self, indices: &[usize]) -> OracleTable {
        OracleTable {
            values: indices.iter().map(|&i| self.values[i]).collect(),
            value_dim: self.value_dim,
            counter: Rc::clone(&self.counter),
        }
    }
}

/// Compute `f` in superposition: amplitude at `(g, 0)` moves to `(g, f(g))`.
/// Counts as a single oracle evaluation.
pub fn apply_oracle(state: &QuantumState, oracle: &OracleTable) -> Result<QuantumState, QsimError> {
    if oracle.group_dim() != state.group_dim {
        return Err(QsimError::OracleMismatch {
            expected: state.group_dim,
            found: oracle.group_dim(),
        });
    }
    if oracle.value_dim() != state.value_dim {
        return Err(QsimError::OracleMismatch {
            expected: state.value_dim,
            found: oracle.value_dim(),
        });
    }
    for g in 0..state.group_dim {
        for x in 1..state.value_dim {
            if state.amps[g * state.value_dim + x].norm_sqr() > TOLERANCE * TOLERANCE {
                return Err(QsimError::ValueRegisterNotClean);
            }
        }
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); state.amps.len()];
    for g in 0..state.group_dim {
        amps[g * state.value_dim + oracle.values[g]] = state.amps[g * state.value_dim];
    }
    oracle.counter.set(oracle.counter.get() + 1);
    Ok(QuantumState {
        group_dim: state.group_dim,
        value_dim: state.value_dim,
        amps,
    })
}

/// Measure the value register: Born-rule sample of `z`, then collapse onto
/// the slice `{(g, z)}` and renormalize.
pub fn measure_value_register<R: Rng + ?Sized>(
    state: &QuantumState,
    rng: &mut R,
) -> (usize, QuantumState) {
    let marginal = state.value_marginal();
    let z = sample_index(&marginal, rng);
    let mass = marginal[z].sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); state.amps.len()];
    for g in 0..state.group_dim {
        amps[g * state.value_dim + z] = state.amps[g * state.value_dim + z] / mass;
    }
    (
        z,
        QuantumState {
            group_dim: state.group_dim,
            value_dim: state.value_dim,
            amps,
        },
    )
}

/// Measure the group register: Born-rule sample over the group marginal.
pub fn measure_group_register<R: Rng + ?Sized>(state: &QuantumState, rng: &mut R) -> usize {
    sample_index(&state.group_marginal(), rng)
}

fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    weights.len() - 1
}

/// Fourier transform over a finite abelian group, applied to the group
/// register: `out[y] = (1/sqrt|G|) sum_g rho_y(g) in[g]` per value slice.
pub fn qft_abelian(state: &QuantumState, group: &AbelianGroup) -> Result<QuantumState, QsimError> {
    fourier_abelian(state, group, false)
}

/// Inverse of [`qft_abelian`] (conjugate characters).
pub fn inverse_qft_abelian(
    state: &QuantumState,
    group: &AbelianGroup,
) -> Result<QuantumState, QsimError> {
    fourier_abelian(state, group, true)
}

fn fourier_abelian(
    state: &QuantumState,
    group: &AbelianGroup,
    inverse: bool,
) -> Result<QuantumState, QsimError> {
    if group.order() as usize != state.group_dim {
        return Err(QsimError::DimensionMismatch {
            expected: state.group_dim,
            found: group.order() as usize,
        });
    }
    let mut amps = state.amps.clone();
    let value_dim = state.value_dim;
    let sign = if inverse { -1.0 } else { 1.0 };

    // Sequential one-dimensional transforms along each mixed-radix axis.
    let factors = group.invariant_factors();
    let mut inner: usize = value_dim; // stride of the current axis
    for &nj in factors.iter().rev() {
        let n = nj as usize;
        let scale = 1.0 / (n as f64).sqrt();
        let twiddle: Vec<Complex64> = (0..n)
            .map(|k| {
                Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * k as f64 / n as f64)
            })
            .collect();
        let block = n * inner;
        let outer = amps.len() / block;
        let mut scratch = vec![Complex64::new(0.0, 0.0); n];
        for o in 0..outer {
            let base = o * block;
            for i in 0..inner {
                // slice skip: collapsed states are sparse in the value axis
                let mut live = false;
                for d in 0..n {
                    if amps[base + i + d * inner].norm_sqr() != 0.0 {
                        live = true;
                        break;
                    }
                }
                if !live {
                    continue;
                }
                for (y, s) in scratch.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for d in 0..n {
                        acc += twiddle[y * d % n] * amps[base + i + d * inner];
                    }
                    *s = acc * scale;
                }
                for (d, s) in scratch.iter().enumerate() {
                    amps[base + i + d * inner] = *s;
                }
            }
        }
        inner = block;
    }

    Ok(QuantumState {
        group_dim: state.group_dim,
        value_dim,
        amps,
    })
}

/// Hadamard transform on an `m`-qubit group register: the Fourier
/// transform of `Z_2^m`, with real plus/minus-one characters. Applying it
/// twice is the identity.
pub fn hadamard_transform_f2(state: &QuantumState, m: usize) -> Result<QuantumState, QsimError> {
    if state.group_dim != 1 << m {
        return Err(QsimError::DimensionMismatch {
            expected: state.group_dim,
            found: 1 << m,
        });
    }
    let mut amps = state.amps.clone();
    let value_dim = state.value_dim;
    for bit in 0..m {
        let stride = (1usize << bit) * value_dim;
        let mut g = 0;
        while g < amps.len() {
            for i in g..g + stride {
                let a = amps[i];
                let b = amps[i + stride];
                amps[i] = a + b;
                amps[i + stride] = a - b;
            }
            g += 2 * stride;
        }
    }
    let scale = 1.0 / ((1usize << m) as f64).sqrt();
    for a in amps.iter_mut() {
        *a *= scale;
    }
    Ok(QuantumState {
        group_dim: state.group_dim,
        value_dim,
        amps,
    })
}
