//! Command-line frontend: `validate`, `verify`, `proof-replay`, `radical-raw`
//! and `info`.
//!
//! Every command prints a short human summary and can write a JSON report
//! (`--json <path>`). Reports carry no timings, so the same inputs give
//! byte-identical JSON. Exit codes: 0 pass, 1 usage or parse error,
//! 2 mathematical failure, 3 resource cap.

pub mod instance;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::ideal_lab::{IdealError, IdealLab, IdealWitness, ScanEntry, Subspace, TranslationWitness};
use crate::proof_replay::{self, GeneratorChoice, ReplayError, ReplayReport};
use crate::twisted_action::{AxiomReport, TwistedSystem};
use instance::{load_raw_algebra, GeneratorsSpec, InstanceError, InstanceSpec};

pub const SCHEMA: &str = "twisted-lab/1";
pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_COUNT: usize = 200;
/// Random subspaces drawn for the left-ideal / translation-invariance check,
/// on top of every ideal found by the scan.
pub const LEMMA_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    Usage = 1,
    Math = 2,
    Resource = 3,
}

#[derive(Debug, Parser)]
#[command(name = "twisted-lab", version, about = "Exact checks on twisted convolution algebras")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the twisted-action axioms exhaustively.
    Validate {
        /// Instance file (JSON).
        instance: PathBuf,
    },
    /// Scan ideals and check star closure, semisimple quotients,
    /// idempotence, and left ideals against translation-invariant subspaces.
    Verify {
        /// Instance file (JSON).
        instance: PathBuf,
        /// RNG seed; overrides the instance options (default 7).
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random generator sets (default 200).
        #[arg(long)]
        count: Option<usize>,
    },
    /// Replay the averaging construction on the ideal spanned by the given
    /// generators.
    ProofReplay {
        /// Instance file (JSON).
        instance: PathBuf,
        /// Generator file: `{"generators": [{"<group index>": <element of A>}, ...]}`.
        generators: PathBuf,
        /// Largest multiplier group to enumerate (default 100000).
        #[arg(long)]
        cap: Option<usize>,
        /// Generating unitaries: `cocycle` or `signed-perm`.
        #[arg(long)]
        wgen: Option<GeneratorChoice>,
    },
    /// Radical of an algebra given by structure constants.
    RadicalRaw {
        /// Structure-constant file: `{"dim", "conductor", "structure"}`.
        file: PathBuf,
    },
    /// Summary of an instance without running the checks.
    Info {
        /// Instance file (JSON).
        instance: PathBuf,
    },
}

/// Result of one command.
#[derive(Debug)]
pub struct Outcome {
    pub exit: Exit,
    pub summary: String,
    pub report: serde_json::Value,
}

impl Outcome {
    fn new<R: Serialize>(exit: Exit, summary: String, report: &R) -> Self {
        Outcome {
            exit,
            summary,
            report: serde_json::to_value(report).expect("reports serialize"),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Serialize)]
struct ErrorReport<'a> {
    schema: &'static str,
    command: &'a str,
    pass: bool,
    error: String,
}

fn failure(command: &str, err: InstanceError) -> Outcome {
    let exit = if err.is_math_failure() {
        Exit::Math
    } else {
        Exit::Usage
    };
    let report = ErrorReport {
        schema: SCHEMA,
        command,
        pass: false,
        error: err.to_string(),
    };
    Outcome::new(exit, format!("error: {err}"), &report)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Debug, Serialize)]
pub struct ValidateReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub instance: String,
    pub conductor: u32,
    pub pass: bool,
    pub axioms: Option<AxiomReport>,
    pub error: Option<String>,
}

pub fn cmd_validate(path: &Path) -> Outcome {
    let spec = match InstanceSpec::load(path) {
        Ok(s) => s,
        Err(e) => return failure("validate", e),
    };
    let sys = match spec.assemble() {
        Ok(s) => s,
        Err(e) => return failure("validate", e),
    };
    let started = Instant::now();
    let result = sys.validate_axioms();
    let pass = result.is_ok();
    let summary = match &result {
        Ok(r) => format!(
            "{}: axioms hold ({} triples for (i), {} checks for (ii)) in {:.2?}\nPASS",
            spec.name,
            r.axiom_i_triples,
            r.axiom_ii_checks,
            started.elapsed()
        ),
        Err(e) => format!("{}: {e}\nFAIL", spec.name),
    };
    let report = ValidateReport {
        schema: SCHEMA,
        command: "validate",
        instance: spec.name,
        conductor: sys.conductor(),
        pass,
        error: result.as_ref().err().map(ToString::to_string),
        axioms: result.ok(),
    };
    let exit = if pass { Exit::Pass } else { Exit::Math };
    Outcome::new(exit, summary, &report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub ideals: usize,
    pub star_closed: bool,
    pub semisimple_quotients: bool,
    pub idempotent: bool,
}

/// A subspace on which left-ideal and translation invariance disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaMismatch {
    pub subspace: usize,
    pub dim: usize,
    pub left_ideal: Option<IdealWitness>,
    pub translation: Option<TranslationWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub subspaces: usize,
    pub left_ideals: usize,
    pub mismatches: usize,
    pub witness: Option<LemmaMismatch>,
}

/// Compares left-ideal membership with stability under all `m_{u,y}`.
pub fn check_lemma(lab: &IdealLab, subspaces: &[Subspace]) -> LemmaReport {
    use rayon::prelude::*;
    let results: Vec<(bool, Option<LemmaMismatch>)> = subspaces
        .par_iter()
        .enumerate()
        .map(|(idx, s)| {
            let left = lab.is_left_ideal(s);
            let trans = lab.is_translation_invariant(s);
            let mismatch = (left.is_ok() != trans.is_ok()).then(|| LemmaMismatch {
                subspace: idx,
                dim: s.dim(),
                left_ideal: left.clone().err(),
                translation: trans.err(),
            });
            (left.is_ok(), mismatch)
        })
        .collect();
    let mismatches: Vec<LemmaMismatch> = results.iter().filter_map(|r| r.1.clone()).collect();
    LemmaReport {
        subspaces: subspaces.len(),
        left_ideals: results.iter().filter(|r| r.0).count(),
        mismatches: mismatches.len(),
        witness: mismatches.into_iter().next(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub instance: String,
    pub seed: u64,
    pub count: usize,
    pub conv_dim: usize,
    pub radical_dim: usize,
    pub center_dim: usize,
    pub ideals: Vec<ScanEntry>,
    pub distinct_ideal_dims: Vec<usize>,
    pub enumeration: Option<EnumerationReport>,
    pub lemma: LemmaReport,
    pub theorem: bool,
    pub idempotent: bool,
    pub pass: bool,
}

fn theorem_holds(e: &ScanEntry) -> bool {
    e.star_closed && e.radical_dim == 0
}

/// The checks behind `verify`, for an already validated system.
pub fn verify_lab(lab: &IdealLab, name: &str, seed: u64, count: usize) -> VerifyReport {
    let radical_dim = lab.radical().dim();
    let center_dim = lab.center_dim();
    let (scan, ideals) = lab.random_ideal_scan(seed, count);
    let distinct: BTreeSet<Subspace> = ideals.into_iter().collect();

    let mut tested: Vec<Subspace> = lab.sample_subspaces(seed, LEMMA_SAMPLES);
    tested.extend(distinct.iter().cloned());
    let enumeration = match lab.enumerate_ideals() {
        Ok(all) => {
            let entries: Vec<ScanEntry> = all.iter().map(|i| lab.describe(i)).collect();
            tested.extend(all);
            Some(EnumerationReport {
                ideals: entries.len(),
                star_closed: entries.iter().all(|e| e.star_closed),
                semisimple_quotients: entries.iter().all(|e| e.radical_dim == 0),
                idempotent: entries.iter().all(|e| e.idempotent),
            })
        }
        Err(IdealError::EnumerationUnsupported { .. } | IdealError::NotSplit) => None,
        Err(e) => panic!("unexpected enumeration failure: {e}"),
    };
    let lemma = check_lemma(lab, &tested);

    let mut dims: Vec<usize> = distinct.iter().map(Subspace::dim).collect();
    dims.sort_unstable();
    let theorem = radical_dim == 0
        && scan.ideals.iter().all(theorem_holds)
        && enumeration
            .as_ref()
            .is_none_or(|e| e.star_closed && e.semisimple_quotients);
    let idempotent = scan.ideals.iter().all(|e| e.idempotent)
        && enumeration.as_ref().is_none_or(|e| e.idempotent);
    VerifyReport {
        schema: SCHEMA,
        command: "verify",
        instance: name.to_string(),
        seed,
        count,
        conv_dim: lab.dim(),
        radical_dim,
        center_dim,
        ideals: scan.ideals,
        distinct_ideal_dims: dims,
        enumeration,
        pass: theorem && idempotent && lemma.mismatches == 0,
        lemma,
        theorem,
        idempotent,
    }
}

fn load_system(path: &Path) -> Result<(InstanceSpec, Arc<TwistedSystem>), InstanceError> {
    let spec = InstanceSpec::load(path)?;
    let sys = spec.build()?;
    Ok((spec, Arc::new(sys)))
}

pub fn cmd_verify(path: &Path, seed: Option<u64>, count: Option<usize>) -> Outcome {
    let (spec, sys) = match load_system(path) {
        Ok(x) => x,
        Err(e) => return failure("verify", e),
    };
    let seed = seed.or(spec.options.seed).unwrap_or(DEFAULT_SEED);
    let count = count.or(spec.options.count).unwrap_or(DEFAULT_COUNT);
    let started = Instant::now();
    let lab = IdealLab::new(sys);
    let r = verify_lab(&lab, &spec.name, seed, count);
    let mut summary = format!(
        "{}: dim B = {}, radical {}, center {}\n\
         scan (seed {}, {} draws): {} distinct ideals of dimensions {:?}\n",
        r.instance,
        r.conv_dim,
        r.radical_dim,
        r.center_dim,
        r.seed,
        r.count,
        r.distinct_ideal_dims.len(),
        r.distinct_ideal_dims,
    );
    if let Some(e) = &r.enumeration {
        summary += &format!("enumeration: {} ideals\n", e.ideals);
    }
    summary += &format!(
        "star-closed with semisimple quotient: {}\nI² = I: {}\n\
         left ideal ⇔ translation invariant: {} subspaces, {} mismatches\n\
         finished in {:.2?}\n{}",
        verdict(r.theorem),
        verdict(r.idempotent),
        r.lemma.subspaces,
        r.lemma.mismatches,
        started.elapsed(),
        verdict(r.pass),
    );
    let exit = if r.pass { Exit::Pass } else { Exit::Math };
    Outcome::new(exit, summary, &r)
}

#[derive(Debug, Serialize)]
pub struct ProofReplayReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub instance: String,
    pub wgen: GeneratorChoice,
    pub cap: usize,
    pub generators: usize,
    #[serde(flatten)]
    pub replay: ReplayReport,
    pub pass: bool,
}

pub fn cmd_proof_replay(
    path: &Path,
    generators: &Path,
    cap: Option<usize>,
    wgen: Option<GeneratorChoice>,
) -> Outcome {
    let command = "proof-replay";
    let (spec, sys) = match load_system(path) {
        Ok(x) => x,
        Err(e) => return failure(command, e),
    };
    let gens = match GeneratorsSpec::load(generators).and_then(|g| g.build(&sys)) {
        Ok(g) => g,
        Err(e) => return failure(command, e),
    };
    let choice = match spec.generator_choice() {
        Ok(c) => wgen.or(c).unwrap_or_default(),
        Err(e) => return failure(command, e),
    };
    let cap = cap.or(spec.options.cap).unwrap_or(proof_replay::DEFAULT_CAP);
    let lab = IdealLab::new(sys);
    let ideal = lab
        .generate_two_sided_ideal(&gens)
        .expect("generators were built in this system");
    let started = Instant::now();
    match proof_replay::replay(&lab, &ideal, &choice, cap) {
        Ok(r) => {
            let pass = r.passed();
            let mut summary = format!(
                "{}: ideal of dimension {}, quotient of dimension {}{}\n\
                 |K| = {}, form Hermitian: {}, K-invariant: {}, positive: {}\n\
                 *-representation: {}, Ker π = I: {}\nfinished in {:.2?}\n{}",
                spec.name,
                r.ideal_dim,
                r.quotient_dim,
                if r.quotient_dim == 0 { " (vacuous)" } else { "" },
                r.k_order,
                r.gram_hermitian,
                r.gram_k_invariant,
                r.positive_definite,
                r.star_property,
                r.kernel_equals_ideal,
                started.elapsed(),
                verdict(pass),
            );
            if let Some(w) = &r.witness {
                summary += &format!("\nwitness: {w:?}");
            }
            let report = ProofReplayReport {
                schema: SCHEMA,
                command,
                instance: spec.name,
                wgen: choice,
                cap,
                generators: gens.len(),
                replay: r,
                pass,
            };
            Outcome::new(if pass { Exit::Pass } else { Exit::Math }, summary, &report)
        }
        Err(e) => {
            let exit = match e {
                ReplayError::CapExceeded(_) => Exit::Resource,
                _ => Exit::Math,
            };
            let report = ErrorReport {
                schema: SCHEMA,
                command,
                pass: false,
                error: e.to_string(),
            };
            Outcome::new(exit, format!("{}: {e}\nFAIL", spec.name), &report)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RadicalReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub dim: usize,
    pub radical_dim: usize,
    pub radical_basis: Vec<Vec<String>>,
    pub quotient_radical_dim: usize,
    pub semisimple: bool,
}

pub fn cmd_radical_raw(path: &Path) -> Outcome {
    let alg = match load_raw_algebra(path) {
        Ok(a) => a,
        Err(e) => return failure("radical-raw", e),
    };
    let table = alg.table();
    let rad = crate::ideal_lab::radical(table);
    let quo = crate::ideal_lab::quotient(table, &rad).expect("the radical is a two-sided ideal");
    let report = RadicalReport {
        schema: SCHEMA,
        command: "radical-raw",
        dim: table.dim(),
        radical_dim: rad.dim(),
        radical_basis: rad
            .rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect(),
        quotient_radical_dim: crate::ideal_lab::radical(quo.table()).dim(),
        semisimple: rad.is_zero(),
    };
    let summary = format!(
        "dimension {}, radical dimension {}, quotient by the radical has radical dimension {}\n{}",
        report.dim,
        report.radical_dim,
        report.quotient_radical_dim,
        if report.semisimple { "semisimple" } else { "not semisimple" }
    );
    Outcome::new(Exit::Pass, summary, &report)
}

#[derive(Debug, Serialize)]
pub struct InfoReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub instance: String,
    pub conductor: u32,
    pub group_order: usize,
    pub abelian: bool,
    pub blocks: Vec<usize>,
    pub algebra_dim: usize,
    pub conv_dim: usize,
    pub trivial_action: bool,
    pub scalar_cocycle: bool,
    pub distinct_cocycle_values: usize,
}

pub fn cmd_info(path: &Path) -> Outcome {
    let spec = match InstanceSpec::load(path) {
        Ok(s) => s,
        Err(e) => return failure("info", e),
    };
    let sys = match spec.assemble() {
        Ok(s) => s,
        Err(e) => return failure("info", e),
    };
    let report = InfoReport {
        schema: SCHEMA,
        command: "info",
        instance: spec.name.clone(),
        conductor: sys.conductor(),
        group_order: sys.group().order(),
        abelian: sys.group().is_abelian(),
        blocks: sys.shape().blocks().to_vec(),
        algebra_dim: sys.algebra_dim(),
        conv_dim: sys.conv_dim(),
        trivial_action: sys.alphas().iter().all(|a| a.is_identity()),
        scalar_cocycle: sys.cocycle().is_scalar(),
        distinct_cocycle_values: sys.cocycle().distinct_values().len(),
    };
    let summary = format!(
        "{}: |G| = {}{}, A = {}, dim B = {}, field Q(ζ_{})",
        report.instance,
        report.group_order,
        if report.abelian { " (abelian)" } else { "" },
        report
            .blocks
            .iter()
            .map(|n| format!("M_{n}"))
            .collect::<Vec<_>>()
            .join(" ⊕ "),
        report.conv_dim,
        report.conductor,
    );
    Outcome::new(Exit::Pass, summary, &report)
}

pub fn run(args: &Args) -> Outcome {
    match &args.command {
        Command::Validate { instance } => cmd_validate(instance),
        Command::Verify {
            instance,
            seed,
            count,
        } => cmd_verify(instance, *seed, *count),
        Command::ProofReplay {
            instance,
            generators,
            cap,
            wgen,
        } => cmd_proof_replay(instance, generators, *cap, wgen.clone()),
        Command::RadicalRaw { file } => cmd_radical_raw(file),
        Command::Info { instance } => cmd_info(instance),
    }
}

/// Parses `argv`, runs the command, prints the summary, writes the JSON
/// report if requested, and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Exit::Usage as i32 } else { 0 };
        }
    };
    let outcome = run(&args);
    if outcome.exit == Exit::Pass {
        println!("{}", outcome.summary);
    } else {
        eprintln!("{}", outcome.summary);
    }
    if let Some(path) = &args.json {
        if let Err(e) = std::fs::write(path, outcome.json()) {
            eprintln!("cannot write {}: {e}", path.display());
            return Exit::Usage as i32;
        }
    }
    outcome.exit as i32
}
