//! Command-line front end: argument parsing, dispatch and JSON run reports.
//!
//! Every run writes one [`RunReport`] to standard output. Exit codes are `0`
//! on success, `1` on usage or validation errors and `2` when a guaranteed
//! contract fails on the given input.

pub mod fuzz;
pub mod json;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::identities::{
    alternating_sum_report, find_perturbing_subset, homogeneous_alternating_sum,
    lemma2_membership_certificate, lemma2_symbolic_check, lemma3_symbolic_check,
    perturbation_identity_residual, simplex_centroid_check, verify_certificate, IdentityParams,
    IdentityReport,
};
use crate::mask::SubsetMask;
use crate::matrix::{subset_sum, SquareMatrix};
use crate::ring::RingDescriptor;
use crate::sample;
use crate::search::{
    embed_product_to_matrices, example8_instances, find_invertible_subsum, ideal_chain,
    local_counterexample_matrices, local_guarantee_applies, mixed_char_counterexample_search,
    semilocal_find_unit_subsum,
};
use json::{element_to_json, instance_to_json, integer_to_json, MatrixFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "detsum",
    version,
    about = "Exact subset-sum determinant identities over commutative rings"
)]
pub struct Cli {
    /// Seed for randomized subcommands.
    #[arg(long, global = true, env = "DETSUM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel sums (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Report wall-clock time in `elapsed_ms` (otherwise null).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Expand the combinatorial identity over Z[z_ij] and check it vanishes.
    VerifyLemma3 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Alternating subset determinant sum of m generic n x n matrices.
    VerifyLemma2 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Alternating subset determinant sum of a matrices document.
    AltSum {
        #[arg(long)]
        input: String,
    },
    /// Express det(A_1 + ... + A_m) through determinants of smaller subset sums.
    Certificate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Perturbation identity for n matrices A_i plus a matrix B (document key "b").
    Perturb {
        #[arg(long)]
        input: String,
    },
    /// Alternating sum of a homogeneous polynomial over subset sums of vectors.
    Homogeneous {
        #[arg(long)]
        input: String,
    },
    /// Centroid check for a simplex of rational matrices (random if no input).
    Simplex {
        #[arg(long)]
        input: Option<String>,
        /// Matrix size for the random simplex.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Smallest subset with at most `bound` members whose sum is invertible.
    SearchSubsum {
        #[arg(long)]
        input: String,
        #[arg(long)]
        bound: usize,
    },
    /// Build the non-local counterexample family over Z/N.
    LocalCounterexample {
        #[arg(long)]
        modulus: u64,
        #[arg(long, allow_negative_numbers = true)]
        m1: i64,
        #[arg(long, allow_negative_numbers = true)]
        m2: i64,
        #[arg(long)]
        n: usize,
    },
    /// Gcd generators of the subset-determinant ideal chain over Z or Z/N.
    IdealChain {
        #[arg(long)]
        input: String,
    },
    /// Smallest unit subset sum in a product of prime fields.
    SemilocalSearch {
        #[arg(long)]
        input: String,
        /// Defaults to the number of component fields.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Diagonal matrix images of an equal-characteristic instance.
    Embed {
        #[arg(long)]
        input: String,
    },
    /// The built-in mixed-characteristic instances.
    Example8,
    /// Exhaustively mine mixed-characteristic counterexamples.
    MineMixedChar {
        /// Component primes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        fields: Vec<u64>,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        bound: usize,
    },
    /// Run the randomized property suites.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Restrict to these suites (comma separated).
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyLemma3 { .. } => "verify-lemma3",
            Command::VerifyLemma2 { .. } => "verify-lemma2",
            Command::AltSum { .. } => "alt-sum",
            Command::Certificate { .. } => "certificate",
            Command::Perturb { .. } => "perturb",
            Command::Homogeneous { .. } => "homogeneous",
            Command::Simplex { .. } => "simplex",
            Command::SearchSubsum { .. } => "search-subsum",
            Command::LocalCounterexample { .. } => "local-counterexample",
            Command::IdealChain { .. } => "ideal-chain",
            Command::SemilocalSearch { .. } => "semilocal-search",
            Command::Embed { .. } => "embed",
            Command::Example8 => "example8",
            Command::MineMixedChar { .. } => "mine-mixed-char",
            Command::Fuzz { .. } => "fuzz",
        }
    }

    fn uses_seed(&self) -> bool {
        matches!(self, Command::Fuzz { .. } | Command::Simplex { input: None, .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Violated,
    Found,
    None,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Violated => 2,
            Status::Error => 1,
            _ => 0,
        }
    }
}

/// One run's machine-readable outcome; field order is fixed.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub inputs_digest: String,
    pub status: Status,
    pub result: Json,
    pub elapsed_ms: Option<u64>,
}

impl RunReport {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Text => {
                let mut s = format!(
                    "subcommand: {}\nstatus: {}\ninputs_digest: {}\n",
                    self.subcommand,
                    serde_json::to_value(self.status)
                        .expect("status serializes")
                        .as_str()
                        .unwrap_or(""),
                    self.inputs_digest
                );
                if let Some(ms) = self.elapsed_ms {
                    s.push_str(&format!("elapsed_ms: {ms}\n"));
                }
                s.push_str("result:\n");
                s.push_str(&serde_json::to_string_pretty(&self.result).expect("result serializes"));
                s.push('\n');
                s
            }
        }
    }
}

struct Outcome {
    /// Canonical form of the `--input` document, when there is one.
    canonical_input: Option<Json>,
    status: Status,
    result: Json,
}

impl Outcome {
    fn new(status: Status, result: Json) -> Self {
        Outcome {
            canonical_input: None,
            status,
            result,
        }
    }

    fn with_input(mut self, input: Json) -> Self {
        self.canonical_input = Some(input);
        self
    }
}

fn holds_if(ok: bool) -> Status {
    if ok {
        Status::Holds
    } else {
        Status::Violated
    }
}

fn found_if(hit: bool) -> Status {
    if hit {
        Status::Found
    } else {
        Status::None
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::RingMismatch { .. } => "ring_mismatch",
        Error::ArityMismatch { .. } => "arity_mismatch",
        Error::ShapeMismatch(_) => "shape_mismatch",
        Error::MaskOutOfRange { .. } => "mask_out_of_range",
        Error::UnsupportedAlgorithm { .. } => "unsupported_algorithm",
        Error::SizeLimit(_) => "size_limit",
        Error::TooManyMatrices { .. } => "too_many_matrices",
        Error::TooManyElements { .. } => "too_many_elements",
        Error::HypothesisViolation(_) => "hypothesis_violation",
        Error::NotHomogeneous => "not_homogeneous",
        Error::InvalidParameters(_) => "invalid_parameters",
        Error::UnsupportedRing(_) => "unsupported_ring",
        Error::MixedComponentFields(_) => "mixed_component_fields",
        Error::SearchSpaceTooLarge(_) => "search_space_too_large",
        Error::NotPrime(_) => "not_prime",
        Error::InvalidDescriptor(_) => "invalid_descriptor",
        Error::MalformedJson { .. } => "malformed_json",
        Error::Schema(_) => "schema",
        Error::ContractViolation(_) => "contract_violation",
    }
}

fn mask_json(mask: Option<SubsetMask>) -> Json {
    match mask {
        Some(s) => json!({"indices": s.indices().collect::<Vec<_>>(), "bits": s.bits()}),
        None => Json::Null,
    }
}

fn report_json(r: &IdentityReport) -> Json {
    let params = match &r.parameters {
        IdentityParams::Sizes { m, n } => json!({"m": m, "n": n}),
        IdentityParams::Instance(s) => json!({"instance": s}),
    };
    json!({
        "identity": r.identity_name,
        "parameters": params,
        "residual": element_to_json(&r.residual),
        "holds": r.holds,
        "term_count": integer_to_json(&BigInt::from(r.term_count)),
    })
}

fn simplex_points(input: &Option<String>, n: usize, seed: u64) -> Result<MatrixFamily> {
    match input {
        Some(arg) => json::load_matrices(arg),
        None => {
            if n == 0 || n > 6 {
                return Err(Error::InvalidParameters(format!(
                    "random simplex size must be in 1..=6, got {n}"
                )));
            }
            let q = RingDescriptor::rationals();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            MatrixFamily::from_matrices((0..=n).map(|_| sample::matrix(&q, n, &mut rng)).collect())
        }
    }
}

fn run(cmd: &Command, seed: u64) -> Result<Outcome> {
    Ok(match cmd {
        Command::VerifyLemma3 { m, n } => {
            let r = lemma3_symbolic_check(*m, *n)?;
            Outcome::new(holds_if(r.holds), report_json(&r))
        }
        Command::VerifyLemma2 { m, n } => {
            let r = lemma2_symbolic_check(*m, *n)?;
            Outcome::new(holds_if(r.holds), report_json(&r))
        }
        Command::AltSum { input } => {
            let fam = json::load_matrices(input)?;
            let r = alternating_sum_report(&fam.matrices)?;
            let applies = fam.matrices.len() > fam.n;
            let status = match (r.holds, applies) {
                (true, _) => Status::Holds,
                (false, true) => Status::Violated,
                (false, false) => Status::None,
            };
            let mut res = report_json(&r);
            res["contract_applies"] = json!(applies);
            Outcome::new(status, res).with_input(fam.to_json())
        }
        Command::Certificate { m, n } => {
            let cert = lemma2_membership_certificate(*m, *n)?;
            let ok = verify_certificate(&cert)?;
            let terms: Vec<Json> = cert
                .terms
                .iter()
                .map(|(s, c)| json!({"indices": s.indices().collect::<Vec<_>>(), "coefficient": integer_to_json(c)}))
                .collect();
            Outcome::new(
                holds_if(ok),
                json!({"m": cert.m, "n": cert.n, "rounds": cert.rounds, "terms": terms, "verified": ok}),
            )
        }
        Command::Perturb { input } => {
            let doc = json::read_input(input)?;
            let fam = json::matrices_from_json(&doc, &["b"])?;
            let b_json = doc
                .get("b")
                .ok_or_else(|| Error::Schema("perturb document is missing key \"b\"".into()))?;
            let b = json::matrix_from_json(&fam.ring, fam.n, b_json)?;
            let residual = perturbation_identity_residual(&fam.matrices, &b)?;
            let det_b = b.det()?;
            let subset = find_perturbing_subset(&fam.matrices, &b)?;
            let mut canonical = fam.to_json();
            canonical["b"] = json::matrix_to_json(&b);
            Outcome::new(
                holds_if(residual.is_zero()),
                json!({
                    "residual": element_to_json(&residual),
                    "holds": residual.is_zero(),
                    "det_b": element_to_json(&det_b),
                    "perturbing_subset": mask_json(subset),
                }),
            )
            .with_input(canonical)
        }
        Command::Homogeneous { input } => {
            let (ring, f, vectors) = json::homogeneous_from_json(&json::read_input(input)?)?;
            let residual = homogeneous_alternating_sum(&f, &ring, &vectors)?;
            let degree = f.homogeneous_degree().expect("checked homogeneous");
            let applies = vectors.len() > degree as usize;
            let status = match (residual.is_zero(), applies) {
                (true, _) => Status::Holds,
                (false, true) => Status::Violated,
                (false, false) => Status::None,
            };
            let canonical = json!({
                "ring": json::ring_to_json(&ring),
                "poly": json::poly_to_json(&f),
                "vectors": vectors.iter().map(|v| v.iter().map(element_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            Outcome::new(
                status,
                json!({
                    "degree": degree,
                    "m": vectors.len(),
                    "residual": element_to_json(&residual),
                    "holds": residual.is_zero(),
                    "contract_applies": applies,
                }),
            )
            .with_input(canonical)
        }
        Command::Simplex { input, n } => {
            let fam = simplex_points(input, *n, seed)?;
            let r = simplex_centroid_check(&fam.matrices)?;
            let failing: Vec<Vec<usize>> = r.failing_subsets.iter().map(|s| s.indices().collect()).collect();
            Outcome::new(
                holds_if(r.consistent()),
                json!({
                    "premise_holds": r.premise_holds,
                    "centroid_on_x": r.centroid_on_x,
                    "consistent": r.consistent(),
                    "failing_subsets": failing,
                    "points": fam.to_json(),
                }),
            )
            .with_input(fam.to_json())
        }
        Command::SearchSubsum { input, bound } => {
            if *bound == 0 {
                return Err(Error::InvalidParameters("bound must be positive".into()));
            }
            let fam = json::load_matrices(input)?;
            let hit = find_invertible_subsum(&fam.matrices, *bound)?;
            let guaranteed = !fam.matrices.is_empty() && local_guarantee_applies(&fam.matrices, *bound)?;
            let status = match (hit, guaranteed) {
                (Some(_), _) => Status::Found,
                (None, true) => Status::Violated,
                (None, false) => Status::None,
            };
            Outcome::new(
                status,
                json!({"bound": bound, "subset": mask_json(hit), "guarantee_applies": guaranteed}),
            )
            .with_input(fam.to_json())
        }
        Command::LocalCounterexample { modulus, m1, m2, n } => {
            let ms = local_counterexample_matrices(*modulus, *m1, *m2, *n)?;
            let total_is_identity =
                subset_sum(&ms, SubsetMask::full(ms.len()))? == SquareMatrix::identity(ms[0].ring(), *n);
            let defeated = find_invertible_subsum(&ms, *n)?.is_none();
            Outcome::new(
                holds_if(total_is_identity && defeated),
                json!({
                    "family": MatrixFamily::from_matrices(ms)?.to_json(),
                    "total_is_identity": total_is_identity,
                    "defeats_bound_n": defeated,
                }),
            )
        }
        Command::IdealChain { input } => {
            let fam = json::load_matrices(input)?;
            let chain = ideal_chain(&fam.matrices)?;
            let ok = chain.starts_at_zero() && chain.is_ascending() && chain.stable_from(fam.n);
            Outcome::new(
                holds_if(ok),
                json!({
                    "modulus": chain.modulus,
                    "n": fam.n,
                    "generators": chain.generators.iter().map(integer_to_json).collect::<Vec<_>>(),
                    "stabilization_index": chain.stabilization_index(),
                }),
            )
            .with_input(fam.to_json())
        }
        Command::SemilocalSearch { input, bound } => {
            let inst = json::instance_from_json(&json::read_input(input)?)?;
            let bound = bound.unwrap_or_else(|| inst.n_components());
            if bound == 0 {
                return Err(Error::InvalidParameters("bound must be positive".into()));
            }
            let hit = semilocal_find_unit_subsum(&inst, bound)?;
            let guaranteed = inst.guarantee_applies(bound);
            let status = match (hit, guaranteed) {
                (Some(_), _) => Status::Found,
                (None, true) => Status::Violated,
                (None, false) => Status::None,
            };
            Outcome::new(
                status,
                json!({"bound": bound, "subset": mask_json(hit), "guarantee_applies": guaranteed}),
            )
            .with_input(instance_to_json(&inst))
        }
        Command::Embed { input } => {
            let inst = json::instance_from_json(&json::read_input(input)?)?;
            let ms = embed_product_to_matrices(&inst)?;
            let mut commutes = true;
            for (e, a) in inst.elements().iter().zip(&ms) {
                commutes &= e.is_unit() == a.is_invertible()?;
            }
            let family = match ms.is_empty() {
                true => Json::Null,
                false => MatrixFamily::from_matrices(ms)?.to_json(),
            };
            Outcome::new(
                holds_if(commutes),
                json!({"family": family, "unit_commutes": commutes}),
            )
            .with_input(instance_to_json(&inst))
        }
        Command::Example8 => {
            let insts = example8_instances()?;
            Outcome::new(
                Status::Holds,
                json!({"instances": insts.iter().map(instance_to_json).collect::<Vec<_>>()}),
            )
        }
        Command::MineMixedChar { fields, m, bound } => {
            let found = mixed_char_counterexample_search(fields, *m, *bound)?;
            Outcome::new(
                found_if(!found.is_empty()),
                json!({
                    "fields": fields,
                    "m": m,
                    "bound": bound,
                    "count": found.len(),
                    "instances": found.iter().map(instance_to_json).collect::<Vec<_>>(),
                }),
            )
        }
        Command::Fuzz { trials, suite } => {
            if let Some(bad) = suite.iter().find(|s| !fuzz::SUITES.contains(&s.as_str())) {
                return Err(Error::InvalidParameters(format!(
                    "unknown suite {bad:?}; known suites: {}",
                    fuzz::SUITES.join(", ")
                )));
            }
            let selected: Vec<&str> = fuzz::SUITES
                .iter()
                .copied()
                .filter(|s| suite.is_empty() || suite.iter().any(|x| x == s))
                .collect();
            let outcomes: Vec<fuzz::SuiteOutcome> = selected
                .iter()
                .map(|s| fuzz::run_suite(s, *trials, seed))
                .collect();
            let ok = outcomes.iter().all(|o| o.failures == 0);
            Outcome::new(holds_if(ok), json!({"seed": seed, "suites": outcomes}))
        }
    })
}

fn digest(cmd: &Command, seed: u64, canonical_input: Option<&Json>) -> String {
    let mut params = serde_json::to_value(cmd).unwrap_or(Json::Null);
    if let (Some(input), Some(obj)) = (
        canonical_input,
        params.get_mut(cmd.name()).and_then(Json::as_object_mut),
    ) {
        obj.insert("input".into(), input.clone());
    }
    let mut doc = json!({"subcommand": cmd.name(), "params": params});
    if cmd.uses_seed() {
        doc["seed"] = json!(seed);
    }
    hex::encode(Sha256::digest(doc.to_string().as_bytes()))
}

/// Runs one parsed command and builds its report.
pub fn execute(cli: &Cli) -> RunReport {
    let start = Instant::now();
    let outcome = run(&cli.command, cli.seed);
    let elapsed_ms = cli.timing.then(|| start.elapsed().as_millis() as u64);
    let (canonical, status, result) = match outcome {
        Ok(o) => (o.canonical_input, o.status, o.result),
        Err(e) => {
            let status = match e {
                Error::ContractViolation(_) => Status::Violated,
                _ => Status::Error,
            };
            (
                None,
                status,
                json!({"error": error_kind(&e), "message": e.to_string()}),
            )
        }
    };
    RunReport {
        subcommand: cli.command.name().to_string(),
        inputs_digest: digest(&cli.command, cli.seed, canonical.as_ref()),
        status,
        result,
        elapsed_ms,
    }
}

/// Parses `argv`, runs the command, prints the report and returns the exit code.
pub fn parse_and_dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let report = match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be positive");
            return 1;
        }
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => {
                eprintln!("error: cannot start {k} worker threads: {e}");
                return 1;
            }
        },
        None => execute(&cli),
    };
    if report.status == Status::Error || report.status == Status::Violated {
        if let Some(msg) = report.result.get("message").and_then(Json::as_str) {
            eprintln!("error: {msg}");
        }
    }
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(report.render(cli.output).as_bytes());
    let _ = out.flush();
    report.status.exit_code()
}
