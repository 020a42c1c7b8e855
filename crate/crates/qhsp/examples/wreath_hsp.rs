//! Hidden subgroups of the wreath products W_n = Z_2^n wr Z_2: element
//! arithmetic, the two-phase solver, and its success statistics.
//!
//! ```bash
//! cargo run --example wreath_hsp
//! ```

use qhsp::hsp::{brute_force_wn, solve_wn_hsp, WnHspInstance};
use qhsp::wreath::{WreathElement, WreathSubgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    // arithmetic: the swap bit conjugates the two halves
    let x = WreathElement::parse("10|01|1").unwrap();
    let y = WreathElement::parse("01|00|0").unwrap();
    println!("({x}) * ({y}) = {}", x.compose(&y).unwrap());
    println!("({x})^-1 = {}", x.inverse());
    let u = WreathSubgroup::closure_of(2, &[WreathElement::parse("10|00|0").unwrap()]).unwrap();
    let conj = u.conjugate_by(&WreathElement::swap(2).unwrap()).unwrap();
    println!(
        "conjugating <10|00|0> by the swap element gives <{}>",
        conj.generators()[0]
    );

    // a hidden subgroup that leaves the base group
    let n = 2;
    let hidden = WreathSubgroup::closure_of(
        n,
        &[
            WreathElement::parse("11|00|0").unwrap(),
            WreathElement::parse("10|01|1").unwrap(),
        ],
    )
    .unwrap();
    println!(
        "\nhidden U of order {} in W_{n} (order {}), {} elements outside the base group",
        hidden.order(),
        qhsp::wreath::group_order(n),
        hidden.elements().iter().filter(|e| !e.is_in_base()).count()
    );
    let instance = WnHspInstance::from_subgroup(&hidden).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let report = solve_wn_hsp(n, instance.oracle(), &mut rng).unwrap();
    println!(
        "solver recovered {:?} in {} rounds, {} oracle evaluations",
        report.recovered_generators, report.rounds, report.oracle_evaluations
    );
    let brute = brute_force_wn(n, instance.oracle()).unwrap();
    println!(
        "matches the {} -evaluation brute force? {}",
        qhsp::wreath::group_order(n),
        report.recovered.as_ref().unwrap().elements() == brute.elements()
    );

    // statistics over random base-group subgroups
    println!("\n200 trials per n with random base-group hidden subgroups:");
    for n in [2usize, 3] {
        let mut wins = 0;
        let mut rounds = 0u64;
        let trials = 200;
        for _ in 0..trials {
            let gens: Vec<WreathElement> = (0..n)
                .map(|_| {
                    WreathElement::from_base_vector(n, rng.gen_range(0..(1u32 << (2 * n))), false)
                        .unwrap()
                })
                .collect();
            let u = WreathSubgroup::closure_of(n, &gens).unwrap();
            let instance = WnHspInstance::from_subgroup(&u).unwrap();
            if let Ok(report) = solve_wn_hsp(n, instance.oracle(), &mut rng) {
                rounds += report.rounds as u64;
                if report.recovered.as_ref().unwrap().elements() == u.elements() {
                    wins += 1;
                }
            }
        }
        println!(
            "  n = {n}: {wins}/{trials} exact, mean rounds {:.1} (expected about {})",
            rounds as f64 / trials as f64,
            4 * n
        );
    }
}
