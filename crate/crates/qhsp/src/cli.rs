//! Command-line front end: file-based encryption plus the experiment
//! harnesses, reporting JSON to standard output.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage error (bad flag values) |
//! | 2 | I/O failure or invalid instance |
//! | 3 | key derives the identity element (re-key) |
//! | 4 | malformed frame or length mismatch |
//! | 5 | attack budget exhausted in every trial |
//!
//! All randomness flows from `--seed` through named substreams (key,
//! chaff, measurement, attack), so reports are byte-identical across runs
//! once `--no-timestamp` is passed.

use crate::groups::{AbelianGroup, GroupElement, Subgroup};
use crate::hsp::{
    brute_force_hsp, brute_force_wn, solve_abelian_hsp, solve_wn_hsp, AbelianHspInstance,
    WnHspInstance,
};
use crate::qep::{
    decrypt, derive_generator, encrypt, eve_attack, AttackTruth, CiphertextFrame, OracleLevel,
    QepError, QepParams, SessionKey,
};
use crate::wreath::{WreathElement, WreathSubgroup};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

/// Default master seed; override with `--seed` for fresh randomness.
pub const DEFAULT_SEED: u64 = 42;

const REPORT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "qhsp",
    version,
    about = "hidden-subgroup experiments and subgroup-based encryption",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random session key file.
    Keygen {
        /// Key length in bytes (at least 8).
        #[arg(long, default_value_t = 16)]
        bytes: u64,
        /// Output path for the key file.
        #[arg(long)]
        out: std::path::PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Encrypt a file into a ciphertext frame.
    Encrypt {
        /// Group descriptor, comma-separated invariant factors, e.g. "8,4,2".
        #[arg(long)]
        group: String,
        #[arg(long)]
        key: std::path::PathBuf,
        #[arg(long, value_name = "FILE")]
        input: std::path::PathBuf,
        #[arg(long, value_name = "FILE")]
        output: std::path::PathBuf,
        /// Chaff elements per data element.
        #[arg(long, default_value_t = 1.0)]
        chaff: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Decrypt a ciphertext frame back into a file.
    Decrypt {
        #[arg(long)]
        key: std::path::PathBuf,
        #[arg(long, value_name = "FILE")]
        input: std::path::PathBuf,
        #[arg(long, value_name = "FILE")]
        output: std::path::PathBuf,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Run hidden-subgroup solver trials and report statistics.
    Hsp {
        /// Abelian mode: group descriptor, e.g. "8,2".
        #[arg(long, conflicts_with = "wreath")]
        group: Option<String>,
        /// Abelian mode: semicolon-separated subgroup generators, e.g. "2,0;0,1".
        #[arg(long, requires = "group")]
        gens: Option<String>,
        /// Wreath mode: the n of W_n (1..=4).
        #[arg(long)]
        wreath: Option<usize>,
        /// Wreath mode: semicolon-separated generators, e.g. "10|01|1;11|00|0".
        #[arg(long, requires = "wreath")]
        wreath_gens: Option<String>,
        #[arg(long)]
        trials: u32,
        /// Abelian round budget per trial.
        #[arg(long, default_value_t = 400)]
        max_rounds: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Run eavesdropper trials against a ciphertext frame.
    Attack {
        #[arg(long, value_name = "FILE")]
        frame: std::path::PathBuf,
        /// The receiver key; services Eve's granted oracle and grades her
        /// output, but is never handed to the search itself.
        #[arg(long)]
        key: std::path::PathBuf,
        /// Oracle level: none | membership | coset.
        #[arg(long)]
        oracle: String,
        /// Known-plaintext prefix length granted to Eve.
        #[arg(long, default_value_t = 0)]
        crib_len: u64,
        /// Work budget (oracle evaluations + generator decodes) per trial.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        no_timestamp: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Instance(String),
    DegenerateKey,
    Frame(String),
    AllBudgetsExceeded,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Instance(_) => 2,
            CliError::DegenerateKey => 3,
            CliError::Frame(_) => 4,
            CliError::AllBudgetsExceeded => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Instance(m) | CliError::Frame(m) => m.clone(),
            CliError::DegenerateKey => {
                "key derives the identity element; generate a fresh key and retry".into()
            }
            CliError::AllBudgetsExceeded => "attack budget exhausted in every trial".into(),
        }
    }
}

fn qep_error(e: QepError) -> CliError {
    match e {
        QepError::DegenerateKey => CliError::DegenerateKey,
        QepError::MalformedFrame { .. } | QepError::LengthMismatch => {
            CliError::Frame(e.to_string())
        }
        QepError::KeyTooShort
        | QepError::InvalidChaffRatio
        | QepError::GroupTooSmall
        | QepError::FactorTooWide => CliError::Usage(e.to_string()),
        other => CliError::Instance(other.to_string()),
    }
}

fn io_error(context: &str, e: std::io::Error) -> CliError {
    CliError::Instance(format!("{context}: {e}"))
}

/// Named, order-independent RNG substreams under one master seed.
fn substream(master: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master.to_le_bytes());
    seed[8..16].copy_from_slice(&index.to_le_bytes());
    for (slot, byte) in seed[16..].iter_mut().zip(label.bytes().cycle().take(16)) {
        *slot = byte;
    }
    ChaCha8Rng::from_seed(seed)
}

fn emit(mut report: Value, no_timestamp: bool) {
    if !no_timestamp {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        report["timestamp"] = json!(now);
    }
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 1;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Keygen {
            bytes,
            out,
            seed,
            no_timestamp,
        } => cmd_keygen(bytes, &out, seed, no_timestamp),
        Command::Encrypt {
            group,
            key,
            input,
            output,
            chaff,
            seed,
            no_timestamp,
        } => cmd_encrypt(&group, &key, &input, &output, chaff, seed, no_timestamp),
        Command::Decrypt {
            key,
            input,
            output,
            no_timestamp,
        } => cmd_decrypt(&key, &input, &output, no_timestamp),
        Command::Hsp {
            group,
            gens,
            wreath,
            wreath_gens,
            trials,
            max_rounds,
            seed,
            no_timestamp,
        } => cmd_hsp(
            group.as_deref(),
            gens.as_deref(),
            wreath,
            wreath_gens.as_deref(),
            trials,
            max_rounds,
            seed,
            no_timestamp,
        ),
        Command::Attack {
            frame,
            key,
            oracle,
            crib_len,
            budget,
            trials,
            seed,
            no_timestamp,
        } => cmd_attack(
            &frame,
            &key,
            &oracle,
            crib_len,
            budget,
            trials,
            seed,
            no_timestamp,
        ),
    }
}

fn cmd_keygen(
    bytes: u64,
    out: &std::path::Path,
    seed: u64,
    no_timestamp: bool,
) -> Result<(), CliError> {
    if bytes < 8 {
        return Err(CliError::Usage(format!(
            "key must be at least 8 bytes, got {bytes}"
        )));
    }
    let mut rng = substream(seed, "key", 0);
    let mut key = vec![0u8; bytes as usize];
    rng.fill(&mut key[..]);
    std::fs::write(out, &key).map_err(|e| io_error("writing key file", e))?;
    emit(
        json!({
            "report_version": REPORT_VERSION,
            "command": "keygen",
            "bytes": bytes,
            "path": out.display().to_string(),
        }),
        no_timestamp,
    );
    Ok(())
}

fn read_key(path: &std::path::Path) -> Result<SessionKey, CliError> {
    let bytes = std::fs::read(path).map_err(|e| io_error("reading key file", e))?;
    SessionKey::new(bytes).map_err(qep_error)
}

fn parse_group(descriptor: &str) -> Result<AbelianGroup, CliError> {
    AbelianGroup::parse_descriptor(descriptor)
        .map_err(|e| CliError::Usage(format!("bad group descriptor: {e}")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_encrypt(
    group: &str,
    key: &std::path::Path,
    input: &std::path::Path,
    output: &std::path::Path,
    chaff: f64,
    seed: u64,
    no_timestamp: bool,
) -> Result<(), CliError> {
    let group = parse_group(group)?;
    let key = read_key(key)?;
    let plaintext = std::fs::read(input).map_err(|e| io_error("reading input", e))?;
    let params = QepParams::new(group.clone(), chaff, seed).map_err(qep_error)?;
    let mut rng = substream(seed, "chaff", 0);
    let frame = encrypt(&params, &key, &plaintext, &mut rng).map_err(qep_error)?;
    std::fs::write(output, frame.serialize()).map_err(|e| io_error("writing frame", e))?;

    let generator = derive_generator(&key, &group).map_err(qep_error)?;
    let h = Subgroup::generated_by(group.clone(), vec![generator]);
    let data_count = frame
        .elements()
        .iter()
        .filter(|e| h.contains(e).unwrap())
        .count();
    emit(
        json!({
            "report_version": REPORT_VERSION,
            "command": "encrypt",
            "group": group.descriptor(),
            "plaintext_len": plaintext.len(),
            "element_count": frame.element_count(),
            "data_count": data_count,
            "chaff_count": frame.element_count() as usize - data_count,
            "frame_path": output.display().to_string(),
        }),
        no_timestamp,
    );
    Ok(())
}

fn cmd_decrypt(
    key: &std::path::Path,
    input: &std::path::Path,
    output: &std::path::Path,
    no_timestamp: bool,
) -> Result<(), CliError> {
    let key = read_key(key)?;
    let bytes = std::fs::read(input).map_err(|e| io_error("reading frame", e))?;
    let frame = CiphertextFrame::deserialize(&bytes).map_err(qep_error)?;
    let plaintext = decrypt(&key, &frame).map_err(qep_error)?;
    std::fs::write(output, &plaintext).map_err(|e| io_error("writing output", e))?;
    emit(
        json!({
            "report_version": REPORT_VERSION,
            "command": "decrypt",
            "plaintext_len": plaintext.len(),
            "output_path": output.display().to_string(),
        }),
        no_timestamp,
    );
    Ok(())
}

fn parse_abelian_gens(group: &AbelianGroup, gens: &str) -> Result<Vec<GroupElement>, CliError> {
    gens.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            GroupElement::parse(t, group)
                .map_err(|e| CliError::Usage(format!("bad generator `{t}`: {e}")))
        })
        .collect()
}

fn parse_wreath_gens(n: usize, gens: &str) -> Result<Vec<WreathElement>, CliError> {
    gens.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let e = WreathElement::parse(t.trim())
                .map_err(|e| CliError::Usage(format!("bad generator `{t}`: {e}")))?;
            if e.n() != n {
                return Err(CliError::Usage(format!(
                    "generator `{t}` lives in W_{} but n = {n}",
                    e.n()
                )));
            }
            Ok(e)
        })
        .collect()
}

fn round_stats(rounds: &[u32]) -> Value {
    let mut sorted = rounds.to_vec();
    sorted.sort_unstable();
    let mean = rounds.iter().map(|&r| r as f64).sum::<f64>() / rounds.len().max(1) as f64;
    json!({
        "mean": mean,
        "median": sorted.get(sorted.len() / 2).copied().unwrap_or(0),
        "max": sorted.last().copied().unwrap_or(0),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_hsp(
    group: Option<&str>,
    gens: Option<&str>,
    wreath: Option<usize>,
    wreath_gens: Option<&str>,
    trials: u32,
    max_rounds: u32,
    seed: u64,
    no_timestamp: bool,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    match (group, wreath) {
        (Some(descriptor), None) => {
            let group = parse_group(descriptor)?;
            if group.order() > 512 {
                return Err(CliError::Instance(format!(
                    "group order {} exceeds the verification bound 512",
                    group.order()
                )));
            }
            let fixed = gens.map(|g| parse_abelian_gens(&group, g)).transpose()?;
            let results: Vec<Value> = (0..trials)
                .into_par_iter()
                .map(|trial| run_abelian_trial(&group, fixed.as_deref(), max_rounds, seed, trial))
                .collect();
            summarize_hsp(
                json!({ "mode": "abelian", "group": group.descriptor() }),
                results,
                trials,
                no_timestamp,
            );
            Ok(())
        }
        (None, Some(n)) => {
            if !(1..=4).contains(&n) {
                return Err(CliError::Instance(format!(
                    "wreath index {n} outside the desk-scale range 1..=4"
                )));
            }
            let fixed = wreath_gens.map(|g| parse_wreath_gens(n, g)).transpose()?;
            let results: Vec<Value> = (0..trials)
                .into_par_iter()
                .map(|trial| run_wreath_trial(n, fixed.as_deref(), seed, trial))
                .collect();
            summarize_hsp(
                json!({ "mode": "wreath", "n": n, "expected_rounds": 4 * n }),
                results,
                trials,
                no_timestamp,
            );
            Ok(())
        }
        _ => Err(CliError::Usage(
            "exactly one of --group or --wreath is required".into(),
        )),
    }
}

fn run_abelian_trial(
    group: &AbelianGroup,
    fixed: Option<&[GroupElement]>,
    max_rounds: u32,
    seed: u64,
    trial: u32,
) -> Value {
    let mut rng = substream(seed, "measurement", trial as u64);
    let gens: Vec<GroupElement> = match fixed {
        Some(g) => g.to_vec(),
        None => vec![group.random_element(&mut rng)],
    };
    let hidden = Subgroup::generated_by(group.clone(), gens);
    let instance = AbelianHspInstance::from_subgroup(&hidden).expect("separating oracle");
    match solve_abelian_hsp(&instance, &mut rng, max_rounds) {
        Ok(mut report) => {
            let brute = brute_force_hsp(group, instance.oracle()).expect("desk scale");
            report.success = report.recovered == brute;
            serde_json::to_value(&report).unwrap()
        }
        Err(e) => json!({ "error": e.to_string(), "success": false }),
    }
}

fn run_wreath_trial(n: usize, fixed: Option<&[WreathElement]>, seed: u64, trial: u32) -> Value {
    let mut rng = substream(seed, "measurement", trial as u64);
    let hidden = match fixed {
        Some(g) => WreathSubgroup::closure_of(n, g).expect("validated generators"),
        None => {
            // random base-group subgroup, the family behind the 1 - 2^-n claim
            let gens: Vec<WreathElement> = (0..n)
                .map(|_| {
                    WreathElement::from_base_vector(n, rng.gen_range(0..(1u32 << (2 * n))), false)
                        .unwrap()
                })
                .collect();
            WreathSubgroup::closure_of(n, &gens).unwrap()
        }
    };
    let instance = WnHspInstance::from_subgroup(&hidden).expect("separating oracle");
    match solve_wn_hsp(n, instance.oracle(), &mut rng) {
        Ok(mut report) => {
            let brute = brute_force_wn(n, instance.oracle()).expect("desk scale");
            report.success = report.recovered.as_ref().map(WreathSubgroup::elements)
                == Some(brute.elements());
            serde_json::to_value(&report).unwrap()
        }
        Err(e) => json!({ "error": e.to_string(), "success": false }),
    }
}

fn summarize_hsp(header: Value, results: Vec<Value>, trials: u32, no_timestamp: bool) {
    let successes = results
        .iter()
        .filter(|r| r["success"].as_bool() == Some(true))
        .count();
    let rounds: Vec<u32> = results
        .iter()
        .filter_map(|r| r["rounds"].as_u64().map(|x| x as u32))
        .collect();
    let mut report = json!({
        "report_version": REPORT_VERSION,
        "command": "hsp",
        "trials": trials,
        "success_rate": successes as f64 / trials as f64,
        "rounds": round_stats(&rounds),
        "reports": results,
    });
    for (k, v) in header.as_object().unwrap() {
        report[k] = v.clone();
    }
    emit(report, no_timestamp);
}

#[allow(clippy::too_many_arguments)]
fn cmd_attack(
    frame_path: &std::path::Path,
    key_path: &std::path::Path,
    oracle: &str,
    crib_len: u64,
    budget: u64,
    trials: u32,
    seed: u64,
    no_timestamp: bool,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let level: OracleLevel = oracle.parse().map_err(CliError::Usage)?;
    let key = read_key(key_path)?;
    let bytes = std::fs::read(frame_path).map_err(|e| io_error("reading frame", e))?;
    let frame = CiphertextFrame::deserialize(&bytes).map_err(qep_error)?;
    let truth = AttackTruth::from_key(&key, &frame).map_err(qep_error)?;
    let crib: Option<Vec<u8>> = if crib_len > 0 {
        Some(
            truth
                .plaintext
                .get(..crib_len as usize)
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "crib length {crib_len} exceeds plaintext length {}",
                        truth.plaintext.len()
                    ))
                })?
                .to_vec(),
        )
    } else {
        None
    };

    let truth_gens: Vec<Vec<u64>> = truth
        .subgroup
        .basis_columns()
        .iter()
        .map(|e| e.coords().to_vec())
        .collect();

    let results: Vec<Value> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = substream(seed, "attack", trial as u64);
            match eve_attack(&frame, level, &truth, crib.as_deref(), budget, &mut rng) {
                Ok(report) => {
                    let recovered_truth =
                        report.recovered_subgroup.as_deref() == Some(truth_gens.as_slice());
                    let mut v = serde_json::to_value(&report).unwrap();
                    v["recovered_subgroup_correct"] = json!(recovered_truth);
                    v
                }
                Err(e) => json!({ "error": e.to_string(), "success": false }),
            }
        })
        .collect();

    let successes = results
        .iter()
        .filter(|r| r["success"].as_bool() == Some(true))
        .count();
    let exhausted = results
        .iter()
        .filter(|r| r["budget_exhausted"].as_bool() == Some(true))
        .count();
    let recovery = results
        .iter()
        .filter(|r| r["recovered_subgroup_correct"].as_bool() == Some(true))
        .count();
    let mean = |field: &str| -> f64 {
        results
            .iter()
            .filter_map(|r| r["work"][field].as_u64())
            .sum::<u64>() as f64
            / trials as f64
    };
    emit(
        json!({
            "report_version": REPORT_VERSION,
            "command": "attack",
            "oracle_level": level.as_str(),
            "trials": trials,
            "success_rate": successes as f64 / trials as f64,
            "subgroup_recovery_rate": recovery as f64 / trials as f64,
            "budget_exhausted_trials": exhausted,
            "mean_work": {
                "oracle_evaluations": mean("oracle_evaluations"),
                "generators_tried": mean("generators_tried"),
            },
            "reports": results,
        }),
        no_timestamp,
    );
    if exhausted == trials as usize {
        return Err(CliError::AllBudgetsExceeded);
    }
    Ok(())
}
