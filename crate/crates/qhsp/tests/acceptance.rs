//! Acceptance suite: one test per verification criterion, each printing a
//! PASS line with the measured figures. Run with
//!
//! ```bash
//! cargo test --test acceptance -- --nocapture
//! ```

use qhsp::groups::{all_groups_up_to, AbelianGroup, Character, GroupElement};
use qhsp::hsp::{
    brute_force_hsp, brute_force_wn, kernel_of_characters, sample_character, solve_abelian_hsp,
    solve_wn_hsp, AbelianHspInstance, WnHspInstance,
};
use qhsp::qep::{
    decrypt, derive_generator, encrypt, eve_attack, AttackTruth, CiphertextFrame, OracleLevel,
    QepError, QepParams, SessionKey,
};
use qhsp::qsim::{
    apply_oracle, inverse_qft_abelian, measure_group_register, measure_value_register,
    qft_abelian, QuantumState,
};
use qhsp::wreath::{WreathElement, WreathSubgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn pass(name: &str, detail: &str) {
    println!("ACCEPTANCE {name}: PASS — {detail}");
}

/// Abelian HSP oracle equivalence: over 100 random instances (|G| <= 512,
/// random cyclic and 2-generated hidden subgroups), the quantum solver and
/// the brute-force baseline agree on at least 99, within 60 seconds.
#[test]
fn abelian_hsp_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0001);
    let groups = all_groups_up_to(512);
    let mut agreements = 0u32;
    let trials = 100;
    for trial in 0..trials {
        let group = groups[rng.gen_range(0..groups.len())].clone();
        let gen_count = if trial % 2 == 0 { 1 } else { 2 };
        let gens: Vec<GroupElement> = (0..gen_count)
            .map(|_| group.random_element(&mut rng))
            .collect();
        let hidden = group
            .subgroup(&gens.iter().cloned().map(Into::into).collect::<Vec<_>>())
            .unwrap();
        let instance = AbelianHspInstance::from_subgroup(&hidden).unwrap();
        let report = solve_abelian_hsp(&instance, &mut rng, 400).unwrap();
        let brute = brute_force_hsp(&group, instance.oracle()).unwrap();
        if report.success && report.recovered == brute {
            agreements += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(agreements >= 99, "only {agreements}/{trials} agreements");
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(
        "abelian-hsp-oracle-equivalence",
        &format!("{agreements}/{trials} agreements in {elapsed:.2?}"),
    );
}

/// Character support law: 10,000 sampled characters for H = <2> <= Z_6
/// all lie in {0, 3}, the empirical distribution is within TV 0.05 of
/// uniform, and the distributions conditioned on the two measured cosets
/// are within TV 0.05 of each other.
#[test]
fn character_support_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0002);
    let z6 = AbelianGroup::cyclic(6).unwrap();
    let h = z6.subgroup(&[vec![2i64].into()]).unwrap();
    let instance = AbelianHspInstance::from_subgroup(&h).unwrap();

    let samples = 10_000usize;
    let mut by_coset: Vec<std::collections::HashMap<u64, u64>> = Vec::new();
    let mut coset_labels: Vec<usize> = Vec::new();
    let mut totals: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
    for _ in 0..samples {
        // the full pipeline, instrumented to keep the measured coset label
        let state = QuantumState::uniform_superposition(6, 6).unwrap();
        let state = apply_oracle(&state, instance.oracle()).unwrap();
        let (coset, collapsed) = measure_value_register(&state, &mut rng);
        let transformed = qft_abelian(&collapsed, &z6).unwrap();
        let label = measure_group_register(&transformed, &mut rng) as u64;
        assert!(label == 0 || label == 3, "character {label} outside H-perp");
        let slot = match coset_labels.iter().position(|&c| c == coset) {
            Some(i) => i,
            None => {
                coset_labels.push(coset);
                by_coset.push(Default::default());
                coset_labels.len() - 1
            }
        };
        *by_coset[slot].entry(label).or_default() += 1;
        *totals.entry(label).or_default() += 1;
    }
    let p0 = *totals.get(&0).unwrap_or(&0) as f64 / samples as f64;
    let tv_uniform = (p0 - 0.5).abs();
    assert!(tv_uniform < 0.05, "TV from uniform = {tv_uniform}");

    assert_eq!(by_coset.len(), 2, "expected exactly two cosets");
    let dist = |m: &std::collections::HashMap<u64, u64>| {
        let n: u64 = m.values().sum();
        (0..2).map(|i| *m.get(&(3 * i)).unwrap_or(&0) as f64 / n as f64).collect::<Vec<_>>()
    };
    let (a, b) = (dist(&by_coset[0]), dist(&by_coset[1]));
    let tv_between = 0.5 * ((a[0] - b[0]).abs() + (a[1] - b[1]).abs());
    assert!(tv_between < 0.05, "coset-conditioned TV = {tv_between}");
    pass(
        "character-support-law",
        &format!("support ⊆ {{0,3}}, TV(uniform) = {tv_uniform:.4}, TV(cosets) = {tv_between:.4}"),
    );
}

/// W_n solver claim: Monte-Carlo success rate over 200 trials with random
/// base-group hidden subgroups of order 2^n is at least 0.70 at n = 2 and
/// 0.825 at n = 3, within 120 seconds.
#[test]
fn wn_solver_claim() {
    let started = Instant::now();
    let mut lines = Vec::new();
    for (n, floor) in [(2usize, 0.70f64), (3, 0.825)] {
        let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0003 + n as u64);
        let trials = 200;
        let mut wins = 0u32;
        let mut rounds_sum = 0u64;
        for _ in 0..trials {
            // random base subgroup of order exactly 2^n
            let u = loop {
                let gens: Vec<WreathElement> = (0..n)
                    .map(|_| {
                        WreathElement::from_base_vector(
                            n,
                            rng.gen_range(0..(1u32 << (2 * n))),
                            false,
                        )
                        .unwrap()
                    })
                    .collect();
                let u = WreathSubgroup::closure_of(n, &gens).unwrap();
                if u.order() == 1 << n {
                    break u;
                }
            };
            let instance = WnHspInstance::from_subgroup(&u).unwrap();
            if let Ok(report) = solve_wn_hsp(n, instance.oracle(), &mut rng) {
                rounds_sum += report.rounds as u64;
                if report.recovered.as_ref().unwrap().elements() == u.elements() {
                    wins += 1;
                }
            }
        }
        let rate = wins as f64 / trials as f64;
        assert!(rate >= floor, "n = {n}: rate {rate} below {floor}");
        lines.push(format!(
            "n={n}: {rate:.3} (floor {floor}), mean rounds {:.1} vs expected {}",
            rounds_sum as f64 / trials as f64,
            4 * n
        ));
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    pass(
        "wn-solver-claim",
        &format!("{} in {elapsed:.2?}", lines.join("; ")),
    );
}

/// Classical baseline: the brute-force solver performs exactly |G| oracle
/// evaluations on every test group (abelian sweep plus W_n).
#[test]
fn classical_baseline_eval_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0004);
    let mut checked = 0;
    for group in all_groups_up_to(128) {
        let hidden = group
            .subgroup(&[group.random_element(&mut rng).into()])
            .unwrap();
        let instance = AbelianHspInstance::from_subgroup(&hidden).unwrap();
        let before = instance.oracle().evaluations();
        let brute = brute_force_hsp(&group, instance.oracle()).unwrap();
        assert_eq!(
            instance.oracle().evaluations() - before,
            group.order(),
            "eval count off in {group}"
        );
        assert_eq!(brute, hidden);
        checked += 1;
    }
    for n in 1..=3usize {
        let u = WreathSubgroup::base_group(n).unwrap();
        let instance = WnHspInstance::from_subgroup(&u).unwrap();
        let before = instance.oracle().evaluations();
        brute_force_wn(n, instance.oracle()).unwrap();
        assert_eq!(
            instance.oracle().evaluations() - before,
            (1u64 << (2 * n + 1)),
            "eval count off in W_{n}"
        );
        checked += 1;
    }
    pass(
        "classical-baseline-eval-count",
        &format!("exactly |G| evaluations on {checked} groups"),
    );
}

/// Fourier transform contract: unitarity and inverse-roundtrip within 1e-9
/// on 100 random states for every abelian group of order 2..=64.
#[test]
fn qft_unitarity_and_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0005);
    let mut groups_checked = 0;
    for group in all_groups_up_to(64) {
        let dim = group.order() as usize;
        for _ in 0..100 {
            let mut amps: Vec<num_complex::Complex64> = (0..dim)
                .map(|_| num_complex::Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in amps.iter_mut() {
                *a /= norm;
            }
            let state = QuantumState::from_amplitudes(dim, 1, amps.clone()).unwrap();
            let t = qft_abelian(&state, &group).unwrap();
            assert!((t.norm() - 1.0).abs() < 1e-9, "norm drift in {group}");
            let back = inverse_qft_abelian(&t, &group).unwrap();
            for (i, &a) in amps.iter().enumerate() {
                assert!(
                    (back.amplitude(i, 0) - a).norm() < 1e-9,
                    "roundtrip drift in {group}"
                );
            }
        }
        groups_checked += 1;
    }
    pass(
        "qft-unitarity-roundtrip",
        &format!("100 states per group over {groups_checked} groups, tolerance 1e-9"),
    );
}

/// Annihilator duality: (H-perp)-perp = H and |H| * |H-perp| = |G| for
/// every subgroup of every abelian group of order at most 64.
#[test]
fn annihilator_duality_exhaustive() {
    let mut groups_checked = 0u32;
    let mut subgroups_checked = 0u64;
    for group in all_groups_up_to(64) {
        for h in group.all_subgroups() {
            let perp = h.annihilator();
            assert_eq!(h.order() * perp.order(), group.order(), "order law in {group}");
            assert_eq!(perp.annihilator(), h, "duality in {group}");
            subgroups_checked += 1;
        }
        groups_checked += 1;
    }
    pass(
        "annihilator-duality",
        &format!("{subgroups_checked} subgroups across {groups_checked} groups"),
    );
}

/// Smith normal form contract on 200 random integer matrices: U M V = D,
/// |det U| = |det V| = 1, and the divisibility chain.
#[test]
fn snf_contract() {
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};
    use qhsp::groups::{smith_normal_form, IntegerMatrix};
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0007);
    for _ in 0..200 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-20..=20)).collect())
            .collect();
        let m = IntegerMatrix::from_rows(&data);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert_eq!(snf.u.determinant().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().abs(), BigInt::one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }
    pass("snf-contract", "200 random matrices up to 6x6, entries in [-20, 20]");
}

/// Encryption roundtrip: 200 random configurations (plaintext up to 4 KiB,
/// |G| in [8, 4096], chaff ratio in {0, 1, 3}) decrypt byte-identically
/// through the wire format; single-element tampering on the designated
/// zero-chaff instance is detected at 100% of positions.
#[test]
fn qep_roundtrip_and_tamper_detection() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0008);
    let groups = all_groups_up_to(4096);
    let mut done = 0u32;
    while done < 200 {
        let group = loop {
            let g = &groups[rng.gen_range(0..groups.len())];
            if g.order() >= 8 {
                break g.clone();
            }
        };
        let ratio = [0.0, 1.0, 3.0][done as usize % 3];
        let params = QepParams::new(group.clone(), ratio, done as u64).unwrap();
        let mut key = vec![0u8; rng.gen_range(8..=32)];
        rng.fill(&mut key[..]);
        let key = SessionKey::new(key).unwrap();
        let len = rng.gen_range(0..=4096usize);
        let mut plaintext = vec![0u8; len];
        rng.fill(&mut plaintext[..]);
        match encrypt(&params, &key, &plaintext, &mut rng) {
            Ok(frame) => {
                let wire = frame.serialize();
                let parsed = CiphertextFrame::deserialize(&wire).unwrap();
                assert_eq!(decrypt(&key, &parsed).unwrap(), plaintext);
                done += 1;
            }
            Err(QepError::DegenerateKey) | Err(QepError::NoChaffSpace) => {}
            Err(other) => panic!("unexpected encrypt failure: {other}"),
        }
    }

    // designated small instance: zero chaff, so every position is data and
    // every non-member substitution must be caught
    let group = AbelianGroup::cyclic(16).unwrap();
    let params = QepParams::new(group.clone(), 0.0, 1).unwrap();
    let key = SessionKey::new(vec![0, 0, 0, 0, 0, 0, 0, 2]).unwrap();
    let frame = encrypt(&params, &key, b"tamper target", &mut rng).unwrap();
    let outside = group.element(&[1]).unwrap();
    let positions = frame.elements().len();
    let mut detected = 0;
    for position in 0..positions {
        let tampered = frame.with_element(position, outside.clone());
        if matches!(decrypt(&key, &tampered), Err(QepError::LengthMismatch)) {
            detected += 1;
        }
    }
    assert_eq!(detected, positions, "{detected}/{positions} detected");
    pass(
        "qep-roundtrip-and-tamper",
        &format!("200 roundtrips byte-identical; {detected}/{positions} substitutions detected"),
    );
}

/// Attack reproduction: an eavesdropper holding a coset-separating oracle
/// reconstructs the hidden subgroup in at least 99 of 100 trials. The
/// residual generator search and end-to-end plaintext recovery at chaff
/// ratios {0, 1, 3} are measured and reported, not asserted.
#[test]
fn attack_reproduces_subgroup_recovery() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0009);
    let group = AbelianGroup::cyclic(16).unwrap();
    let params = QepParams::new(group.clone(), 1.0, 5).unwrap();
    let key = SessionKey::new(vec![0, 0, 0, 0, 0, 0, 0, 2]).unwrap();
    let plaintext = b"attack reproduction target";
    let frame = encrypt(&params, &key, plaintext, &mut rng).unwrap();
    let truth = AttackTruth::from_key(&key, &frame).unwrap();
    let truth_gens: Vec<Vec<u64>> = truth
        .subgroup
        .basis_columns()
        .iter()
        .map(|e| e.coords().to_vec())
        .collect();

    let trials = 100;
    let mut recovered = 0u32;
    for _ in 0..trials {
        let report = eve_attack(
            &frame,
            OracleLevel::CosetSeparating,
            &truth,
            None,
            100_000,
            &mut rng,
        )
        .unwrap();
        if report.recovered_subgroup.as_deref() == Some(truth_gens.as_slice()) {
            recovered += 1;
        }
    }
    assert!(recovered >= 99, "subgroup recovered in {recovered}/{trials}");

    // measured, not asserted: what secrecy is left in the generator choice
    let mut residual = Vec::new();
    for ratio in [0.0, 1.0, 3.0] {
        let group = AbelianGroup::new(&[64, 4]).unwrap();
        let params = QepParams::new(group.clone(), ratio, 17).unwrap();
        let key = SessionKey::new(b"residual-search!".to_vec()).unwrap();
        let frame = encrypt(&params, &key, plaintext, &mut rng).unwrap();
        let truth = AttackTruth::from_key(&key, &frame).unwrap();
        let mut blind_wins = 0u32;
        let mut cribless_wins = 0u32;
        let mut crib_wins = 0u32;
        let mut crib_tries = 0u64;
        let inner = 40;
        for _ in 0..inner {
            // format checks alone: the generator stays ambiguous
            let cribless = eve_attack(
                &frame,
                OracleLevel::CosetSeparating,
                &truth,
                None,
                100_000,
                &mut rng,
            )
            .unwrap();
            if cribless.success {
                cribless_wins += 1;
            }
            // with a known prefix: measures the residual generator search
            let crib = eve_attack(
                &frame,
                OracleLevel::CosetSeparating,
                &truth,
                Some(&plaintext[..6]),
                100_000,
                &mut rng,
            )
            .unwrap();
            crib_tries += crib.work.generators_tried;
            if crib.success {
                crib_wins += 1;
            }
            let blind = eve_attack(&frame, OracleLevel::None, &truth, None, 50_000, &mut rng)
                .unwrap();
            if blind.success {
                blind_wins += 1;
            }
        }
        residual.push(format!(
            "chaff {ratio}: coset-level plaintext {cribless_wins}/{inner} cribless, {crib_wins}/{inner} with 6-byte crib ({:.1} mean tries), ciphertext-only {blind_wins}/{inner}",
            crib_tries as f64 / inner as f64,
        ));
    }
    pass(
        "attack-reproduction",
        &format!(
            "coset-oracle subgroup recovery {recovered}/{trials}; residual: {}",
            residual.join("; ")
        ),
    );
}

/// Cross-check folded into the acceptance run: kernels computed through
/// the Smith machinery agree with exhaustive character intersection.
#[test]
fn kernel_machinery_cross_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_000a);
    for group in all_groups_up_to(64) {
        let chars: Vec<Character> = (0..2)
            .map(|_| Character::new(group.random_element(&mut rng).coords().to_vec()))
            .collect();
        let kernel = kernel_of_characters(&group, &chars);
        for e in group.iter_elements() {
            let in_kernel = chars.iter().all(|c| {
                (c.eval(&group, &e) - num_complex::Complex64::new(1.0, 0.0)).norm() < 1e-9
            });
            assert_eq!(kernel.contains(&e).unwrap(), in_kernel, "kernel wrong in {group}");
        }
    }
    // a sampled character always annihilates the hidden subgroup
    let z12 = AbelianGroup::cyclic(12).unwrap();
    let h = z12.subgroup(&[vec![3i64].into()]).unwrap();
    let instance = AbelianHspInstance::from_subgroup(&h).unwrap();
    for _ in 0..200 {
        let chi = sample_character(&instance, &mut rng).unwrap();
        assert!(chi.annihilates(&h));
    }
    let _ = derive_generator(
        &SessionKey::new(vec![1; 8]).unwrap(),
        &AbelianGroup::cyclic(8).unwrap(),
    )
    .unwrap();
    pass("kernel-machinery-cross-check", "SNF kernels match exhaustive intersection");
}
