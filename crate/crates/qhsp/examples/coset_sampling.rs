//! The measurement pipeline behind the abelian solver, one step at a time:
//! superpose, evaluate the oracle, collapse the value register, Fourier
//! transform, and read a character off the group register.
//!
//! ```bash
//! cargo run --example coset_sampling
//! ```

use qhsp::groups::AbelianGroup;
use qhsp::hsp::AbelianHspInstance;
use qhsp::qsim::{
    apply_oracle, measure_group_register, measure_value_register, qft_abelian, QuantumState,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let z6 = AbelianGroup::cyclic(6).unwrap();
    let h = z6.subgroup(&[vec![2i64].into()]).unwrap();
    println!("G = Z_6, hidden H = <2> = {{0, 2, 4}}");

    let instance = AbelianHspInstance::from_subgroup(&h).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);

    // one instrumented run
    let state = QuantumState::uniform_superposition(6, 6).unwrap();
    println!("\nafter superposition: amplitude(g, 0) = {:.4} for every g", state.amplitude(0, 0).re);
    let state = apply_oracle(&state, instance.oracle()).unwrap();
    let (z, collapsed) = measure_value_register(&state, &mut rng);
    let coset: Vec<usize> = (0..6).filter(|&g| instance.oracle().peek(g) == z).collect();
    println!("measured value register -> coset {coset:?}");
    for g in 0..6 {
        let amp = collapsed.amplitude(g, z);
        if amp.norm() > 1e-12 {
            println!("  |{g}> amplitude {:.4}", amp.re);
        }
    }
    let transformed = qft_abelian(&collapsed, &z6).unwrap();
    println!("after the Fourier transform, probability by character:");
    for y in 0..6 {
        let p: f64 = (0..6).map(|x| transformed.amplitude(y, x).norm_sqr()).sum();
        if p > 1e-12 {
            println!("  rho_{y}: {p:.4}");
        }
    }

    // the sampled distribution is uniform on H-perp and independent of the coset
    let mut histogram = [[0u32; 6]; 2];
    for _ in 0..10_000 {
        let state = QuantumState::uniform_superposition(6, 6).unwrap();
        let state = apply_oracle(&state, instance.oracle()).unwrap();
        let (z, collapsed) = measure_value_register(&state, &mut rng);
        let transformed = qft_abelian(&collapsed, &z6).unwrap();
        let y = measure_group_register(&transformed, &mut rng);
        histogram[usize::from(z != 0)][y] += 1;
    }
    println!("\n10,000 samples, split by which coset was measured first:");
    for (idx, row) in histogram.iter().enumerate() {
        let total: u32 = row.iter().sum();
        let freqs: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(y, &c)| format!("rho_{y}: {:.3}", c as f64 / total as f64))
            .collect();
        println!("  coset {idx}: {}", freqs.join(", "));
    }
    println!("support stays inside H-perp = {{0, 3}} for both cosets");
}
