//! Command line interface for building, validating, and measuring qudit
//! channels described as JSON documents.
//!
//! Exit codes: 0 on success (including failures a descriptor declares as
//! expected), 2 on invalid input, 3 when an optimizer fails to converge.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qhsw_core::capacity::{
    average_output_uniqueness_check, equal_distance_check, hsw_capacity_diagonal,
    maximal_distance_check, optimize_ensemble, EnsembleResult, OptimizerOptions,
};
use qhsw_core::channel::{
    cp_min_eigenvalue, trace_preservation_residual, unitality_residual, QuantumChannel,
};
use qhsw_core::density::density_to_bloch;
use qhsw_core::descriptor::{
    parse_channel_document, BuiltChannel, ChannelDescriptor, DensityPayload,
};
use qhsw_core::linalg::{identity, max_abs_diff};
use qhsw_core::report::{
    AlgebraRecord, CapacityRecord, ChannelSummary, CheckRecord, DiagnosticsRecord,
    FactorCapacityRecord, OptionsRecord, OracleRecord, ProductRecord, VerifyRecord,
};
use qhsw_core::weyl::{
    commutation_residual, conjugation_residual, generate_group_q, group_closure_residual,
    irreducibility_sum, orthonormality_residual,
};
use qhsw_core::{
    tensor_conjugation_residual, tensor_orthonormality_residual, DiagonalUnitalChannel,
};

/// Default bound on the Hilbert space dimension, overridable via QHSW_MAX_DIM.
const DEFAULT_MAX_DIM: usize = 16;

/// Tolerance against which verification residuals are compared.
const VERIFY_TOL: f64 = 1e-9;

/// Probes drawn for the maximal-distance cross-check.
const ORACLE_PROBES: usize = 500;

/// Independent optimizer reruns for the average-output uniqueness check.
const UNIQUENESS_RUNS: usize = 3;

#[derive(Parser)]
#[command(
    name = "qhsw",
    version,
    about = "Qudit channels in the shift-clock basis and their classical capacity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the classical capacity of a channel descriptor.
    Capacity(CapacityArgs),
    /// Validate a channel descriptor and report its residuals.
    Verify(VerifyArgs),
    /// Check the operator algebra identities for a range of dimensions.
    AlgebraCheck(AlgebraArgs),
    /// Compare a product channel's capacity against the sum of its factors.
    Product(ProductArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct IoArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OptArgs {
    /// Base seed for the optimizer restarts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random restarts.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Iteration cap per restart.
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
}

impl OptArgs {
    fn options(&self) -> OptimizerOptions {
        OptimizerOptions {
            seed: self.seed,
            restarts: self.restarts,
            max_iterations: self.max_iters,
            ..OptimizerOptions::default()
        }
    }
}

#[derive(Args)]
struct CapacityArgs {
    /// Path to the channel descriptor JSON file.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    opt: OptArgs,
    /// Cross-check with the independent ensemble maximizer.
    #[arg(long)]
    oracle: bool,
    /// Tolerance for the oracle agreement and optimality checks.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Path to the channel descriptor JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Build the channel even when it fails complete positivity.
    #[arg(long)]
    allow_non_cp: bool,
    #[command(flatten)]
    opt: OptArgs,
    /// Tolerance for the optimizer-backed optimality checks.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct AlgebraArgs {
    /// Dimensions to check.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    dims: Vec<usize>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct ProductArgs {
    /// Path to the product channel descriptor JSON file.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    opt: OptArgs,
    #[command(flatten)]
    io: IoArgs,
}

/// A failed run: the message goes to stderr, the code to the shell.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<qhsw_core::QhswError> for Failure {
    fn from(err: qhsw_core::QhswError) -> Self {
        Self::invalid(err.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Self::invalid(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Capacity(args) => run_capacity(args),
        Command::Verify(args) => run_verify(args),
        Command::AlgebraCheck(args) => run_algebra(args),
        Command::Product(args) => run_product(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn max_dim() -> Result<usize, Failure> {
    match std::env::var("QHSW_MAX_DIM") {
        Ok(raw) => raw
            .parse::<usize>()
            .map_err(|_| Failure::invalid(format!("QHSW_MAX_DIM must be an integer, got {raw:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_DIM),
        Err(err) => Err(Failure::invalid(err.to_string())),
    }
}

fn load_descriptor(path: &PathBuf) -> Result<(ChannelDescriptor, bool), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| Failure::invalid(format!("cannot read {}: {err}", path.display())))?;
    let doc = parse_channel_document(&text)
        .map_err(|err| Failure::invalid(format!("invalid descriptor: {err}")))?;
    let cap = max_dim()?;
    let dim = doc.channel.declared_dim();
    if dim > cap {
        return Err(Failure::invalid(format!(
            "descriptor dimension {dim} exceeds the limit {cap}; raise QHSW_MAX_DIM to allow it"
        )));
    }
    Ok((doc.channel, doc.expected_failure))
}

fn emit(io: &IoArgs, text: String, json: String) -> Result<(), Failure> {
    let body = match io.format {
        Format::Text => text,
        Format::Json => json,
    };
    match &io.output {
        Some(path) => std::fs::write(path, body)
            .map_err(|err| Failure::invalid(format!("cannot write {}: {err}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(record: &T) -> String {
    let mut body = serde_json::to_string_pretty(record).expect("records always serialize");
    body.push('\n');
    body
}

fn check_line(check: &CheckRecord) -> String {
    let verdict = if check.pass { "PASS" } else { "FAIL" };
    let expected = if check.expected_failure {
        " (failure expected)"
    } else {
        ""
    };
    let note = match &check.note {
        Some(note) => format!(" [{note}]"),
        None => String::new(),
    };
    format!(
        "check {}: {verdict} residual={:.3e} tol={:.3e}{expected}{note}\n",
        check.name, check.residual, check.tolerance
    )
}

/// Closed-form capacity when every factor is a qubit diagonal channel.
fn closed_form_capacity(built: &BuiltChannel) -> Option<f64> {
    let qubit_closed = |ch: &DiagonalUnitalChannel| -> Option<f64> {
        if ch.dim() != 2 {
            return None;
        }
        let lambda = [ch.lambda(1, 0).re, ch.lambda(1, 1).re, ch.lambda(0, 1).re];
        qhsw_core::qubit_unital_capacity_closed_form(lambda).ok()
    };
    match built {
        BuiltChannel::Diagonal(ch) => qubit_closed(ch),
        BuiltChannel::Product(ch) => ch.factors().iter().map(qubit_closed).sum(),
        BuiltChannel::Affine(_) => None,
    }
}

/// Optimality checks on a finished ensemble run.
fn oracle_checks(
    ch: &dyn QuantumChannel,
    result: &EnsembleResult,
    unital: bool,
    tol: f64,
    seed: u64,
) -> Result<Vec<CheckRecord>, Failure> {
    let mut checks = Vec::new();
    let equal = equal_distance_check(result, tol)?;
    checks.push(CheckRecord::from_residual(
        "equal_distance",
        equal.max_deviation,
        tol,
    ));
    let maximal = maximal_distance_check(ch, result, ORACLE_PROBES, tol, seed)?;
    checks.push(
        CheckRecord::from_residual("maximal_distance", maximal.worst_excess.max(0.0), tol)
            .with_note(format!("{} probes", maximal.probes)),
    );
    if unital {
        let d = ch.dim();
        let uniform = identity(d).scale(1.0 / d as f64);
        checks.push(CheckRecord::from_residual(
            "average_output_uniform",
            max_abs_diff(result.average_output.matrix(), &uniform),
            tol,
        ));
    }
    Ok(checks)
}

/// Optimizer-backed optimality checks used by `verify`: the equal-distance
/// and maximal-distance conditions at the optimum, plus agreement of the
/// optimal average output across independent reruns and with the uniform
/// state. Returns the checks, the main run's diagnostics, and whether every
/// optimizer run converged.
fn optimality_checks(
    ch: &dyn QuantumChannel,
    opts: &OptimizerOptions,
    tol: f64,
) -> Result<(Vec<CheckRecord>, DiagnosticsRecord, bool), Failure> {
    let mut checks = Vec::new();
    let ens = optimize_ensemble(ch, opts)?;
    let equal = equal_distance_check(&ens, tol)?;
    checks.push(CheckRecord::from_residual(
        "equal_distance",
        equal.max_deviation,
        tol,
    ));
    let maximal =
        maximal_distance_check(ch, &ens, ORACLE_PROBES, tol, opts.seed.wrapping_add(10_000))?;
    checks.push(
        CheckRecord::from_residual("maximal_distance", maximal.worst_excess.max(0.0), tol)
            .with_note(format!("{} probes", maximal.probes)),
    );
    let uniqueness = average_output_uniqueness_check(ch, UNIQUENESS_RUNS, tol, opts)?;
    checks.push(
        CheckRecord::from_residual(
            "average_output_pairwise",
            uniqueness.pairwise_max_deviation,
            2.0 * tol,
        )
        .with_note(format!("{} independent runs", uniqueness.runs)),
    );
    checks.push(CheckRecord::from_residual(
        "average_output_uniform",
        uniqueness.max_deviation_from_uniform,
        tol,
    ));
    let converged = ens.diagnostics.converged && uniqueness.converged_runs == uniqueness.runs;
    Ok((checks, DiagnosticsRecord::from(&ens.diagnostics), converged))
}

/// Renders a density matrix row by row, with the Bloch vector appended for
/// qubits.
fn density_text(label: &str, payload: &DensityPayload) -> String {
    let mut out = String::new();
    for r in 0..payload.d {
        let row: Vec<String> = (0..payload.d)
            .map(|c| {
                let k = r * payload.d + c;
                format!("{:.6}{:+.6}i", payload.re[k], payload.im[k])
            })
            .collect();
        out.push_str(&format!("{label} row {r}: [{}]\n", row.join(", ")));
    }
    if payload.d == 2 {
        if let Ok(bloch) = payload.to_density().and_then(|rho| density_to_bloch(&rho)) {
            out.push_str(&format!(
                "{label}_bloch: [{:.6}, {:.6}, {:.6}]\n",
                bloch[0], bloch[1], bloch[2]
            ));
        }
    }
    out
}

fn run_capacity(args: CapacityArgs) -> Result<u8, Failure> {
    let (descriptor, _) = load_descriptor(&args.input)?;
    let built = descriptor.build(false)?;
    let opts = args.opt.options();
    let summary = ChannelSummary::new(&descriptor, &built);

    let mut oracle = None;
    let record = match built.as_weyl_diagonal() {
        Some(diagonal) => {
            let res = hsw_capacity_diagonal(diagonal, &opts)?;
            if args.oracle {
                let ens = optimize_ensemble(diagonal, &opts)?;
                let checks = oracle_checks(
                    built.as_quantum_channel(),
                    &ens,
                    true,
                    args.tol,
                    opts.seed.wrapping_add(10_000),
                )?;
                oracle = Some(OracleRecord {
                    chi_bits: ens.chi_bits,
                    capacity_agreement_residual: (ens.chi_bits - res.capacity_bits).abs(),
                    checks,
                    diagnostics: DiagnosticsRecord::from(&ens.diagnostics),
                });
            }
            CapacityRecord {
                channel: summary,
                options: OptionsRecord::from(&opts),
                estimator: "min_output_entropy".into(),
                capacity_bits: res.capacity_bits,
                min_output_entropy_bits: Some(res.min_output_entropy_bits),
                closed_form_capacity_bits: closed_form_capacity(&built),
                argmin_input: Some(DensityPayload::from_density(&res.argmin_input)),
                average_output: None,
                oracle,
                diagnostics: DiagnosticsRecord::from(&res.diagnostics),
            }
        }
        None => {
            let ch = built.as_quantum_channel();
            let res = optimize_ensemble(ch, &opts)?;
            if args.oracle {
                let checks =
                    oracle_checks(ch, &res, false, args.tol, opts.seed.wrapping_add(10_000))?;
                oracle = Some(OracleRecord {
                    chi_bits: res.chi_bits,
                    capacity_agreement_residual: 0.0,
                    checks,
                    diagnostics: DiagnosticsRecord::from(&res.diagnostics),
                });
            }
            CapacityRecord {
                channel: summary,
                options: OptionsRecord::from(&opts),
                estimator: "ensemble".into(),
                capacity_bits: res.chi_bits,
                min_output_entropy_bits: None,
                closed_form_capacity_bits: None,
                argmin_input: None,
                average_output: Some(DensityPayload::from_density(&res.average_output)),
                oracle,
                diagnostics: DiagnosticsRecord::from(&res.diagnostics),
            }
        }
    };

    let mut text = String::new();
    text.push_str(&format!(
        "channel: {} d={}\n",
        record.channel.channel_type, record.channel.dim
    ));
    text.push_str(&format!(
        "descriptor_sha256: {}\n",
        record.channel.descriptor_sha256
    ));
    text.push_str(&format!("estimator: {}\n", record.estimator));
    text.push_str(&format!("capacity_bits: {:.6}\n", record.capacity_bits));
    if let Some(s) = record.min_output_entropy_bits {
        text.push_str(&format!("min_output_entropy_bits: {s:.6}\n"));
    }
    if let Some(c) = record.closed_form_capacity_bits {
        text.push_str(&format!("closed_form_capacity_bits: {c:.6}\n"));
    }
    if let Some(payload) = &record.argmin_input {
        text.push_str(&density_text("argmin_input", payload));
    }
    if let Some(payload) = &record.average_output {
        text.push_str(&density_text("average_output", payload));
    }
    if let Some(oracle) = &record.oracle {
        text.push_str(&format!("oracle_chi_bits: {:.6}\n", oracle.chi_bits));
        text.push_str(&format!(
            "oracle_agreement_residual: {:.3e}\n",
            oracle.capacity_agreement_residual
        ));
        for check in &oracle.checks {
            text.push_str(&check_line(check));
        }
    }
    text.push_str(&format!(
        "converged: {} ({}/{} restarts)\n",
        record.diagnostics.converged,
        record.diagnostics.converged_restarts,
        record.diagnostics.restarts
    ));

    let json = to_json(&record);
    emit(&args.io, text, json)?;

    let oracle_converged = record
        .oracle
        .as_ref()
        .map_or(true, |o| o.diagnostics.converged);
    if record.diagnostics.converged && oracle_converged {
        Ok(0)
    } else {
        Ok(3)
    }
}

fn run_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let (descriptor, expected_failure) = load_descriptor(&args.input)?;
    let built = match descriptor.build(args.allow_non_cp) {
        Ok(built) => built,
        Err(err) if expected_failure => {
            let text = format!("construction failed as expected: {err}\nas_expected: true\n");
            let json = to_json(&serde_json::json!({
                "build_error": err.to_string(),
                "expected_failure": true,
                "as_expected": true,
            }));
            emit(&args.io, text, json)?;
            return Ok(0);
        }
        Err(err) => return Err(err.into()),
    };

    let ch = built.as_quantum_channel();
    let mut checks = Vec::new();
    let min_eig = cp_min_eigenvalue(ch)?;
    checks.push(
        CheckRecord::from_residual("complete_positivity", (-min_eig).max(0.0), VERIFY_TOL)
            .with_note(format!("Choi min eigenvalue {min_eig:.3e}")),
    );
    checks.push(CheckRecord::from_residual(
        "trace_preservation",
        trace_preservation_residual(ch)?,
        VERIFY_TOL,
    ));
    checks.push(CheckRecord::from_residual(
        "unitality",
        unitality_residual(ch)?,
        VERIFY_TOL,
    ));
    if let BuiltChannel::Diagonal(diag) = &built {
        let d = diag.dim();
        let mut pairing: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let paired = diag.lambda((d - a) % d, (d - b) % d);
                pairing = pairing.max((paired - diag.lambda(a, b).conj()).norm());
            }
        }
        checks.push(CheckRecord::from_residual(
            "multiplier_pairing",
            pairing,
            VERIFY_TOL,
        ));
    }

    let cp_pass = checks[0].pass;
    let opts = args.opt.options();
    let mut optimality = None;
    if cp_pass {
        let (more, diagnostics, converged) = optimality_checks(ch, &opts, args.tol)?;
        checks.extend(more);
        optimality = Some((diagnostics, converged));
    }

    let summary = ChannelSummary::new(&descriptor, &built);
    let mut record = VerifyRecord::new(summary, args.allow_non_cp, expected_failure, checks);
    let mut converged = true;
    if let Some((diagnostics, ok)) = optimality {
        record.options = Some(OptionsRecord::from(&opts));
        record.diagnostics = Some(diagnostics);
        converged = ok;
    }

    let mut text = String::new();
    text.push_str(&format!(
        "channel: {} d={}\n",
        record.channel.channel_type, record.channel.dim
    ));
    text.push_str(&format!(
        "descriptor_sha256: {}\n",
        record.channel.descriptor_sha256
    ));
    for check in &record.checks {
        text.push_str(&check_line(check));
    }
    if !cp_pass {
        text.push_str("optimality checks skipped: the channel is not completely positive\n");
    } else {
        text.push_str(&format!("optimizer_converged: {converged}\n"));
    }
    text.push_str(&format!("all_pass: {}\n", record.all_pass));
    text.push_str(&format!("as_expected: {}\n", record.as_expected));

    let json = to_json(&record);
    emit(&args.io, text, json)?;
    if !converged {
        return Ok(3);
    }
    Ok(if record.as_expected { 0 } else { 2 })
}

fn run_algebra(args: AlgebraArgs) -> Result<u8, Failure> {
    if args.dims.is_empty() {
        return Err(Failure::invalid("at least one dimension is required"));
    }
    if let Some(&d) = args.dims.iter().find(|&&d| d < 2) {
        return Err(Failure::invalid(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    let mut checks = Vec::new();
    for &d in &args.dims {
        checks.push(CheckRecord::from_residual(
            &format!("commutation d={d}"),
            commutation_residual(d)?,
            1e-12,
        ));
        checks.push(CheckRecord::from_residual(
            &format!("orthonormality d={d}"),
            orthonormality_residual(d)?,
            1e-12,
        ));
        checks.push(CheckRecord::from_residual(
            &format!("conjugation d={d}"),
            conjugation_residual(d)?,
            1e-11,
        ));
        let group = generate_group_q(d)?;
        let order_gap = group.len() as f64 - (d * d * d) as f64;
        checks.push(
            CheckRecord::from_residual(&format!("group_order d={d}"), order_gap, 0.0)
                .with_note(format!("{} elements", group.len())),
        );
        checks.push(CheckRecord::from_residual(
            &format!("group_closure d={d}"),
            group_closure_residual(&group)?,
            1e-12,
        ));
        let matrices: Vec<_> = group.into_iter().map(|g| g.matrix).collect();
        checks.push(CheckRecord::from_residual(
            &format!("irreducibility d={d}"),
            (irreducibility_sum(&matrices)? - 1.0).abs(),
            1e-10,
        ));
    }
    for dims in [[2, 2], [2, 3]] {
        let label = format!("{}x{}", dims[0], dims[1]);
        checks.push(CheckRecord::from_residual(
            &format!("tensor_orthonormality {label}"),
            tensor_orthonormality_residual(&dims)?,
            1e-11,
        ));
        checks.push(CheckRecord::from_residual(
            &format!("tensor_conjugation {label}"),
            tensor_conjugation_residual(&dims)?,
            1e-11,
        ));
    }

    let record = AlgebraRecord::new(args.dims.clone(), checks);
    let mut text = String::new();
    text.push_str(&format!(
        "dims: {}\n",
        args.dims
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    for check in &record.checks {
        text.push_str(&check_line(check));
    }
    text.push_str(&format!("all_pass: {}\n", record.all_pass));

    let json = to_json(&record);
    emit(&args.io, text, json)?;
    Ok(if record.all_pass { 0 } else { 2 })
}

fn run_product(args: ProductArgs) -> Result<u8, Failure> {
    let (descriptor, _) = load_descriptor(&args.input)?;
    if !matches!(descriptor, ChannelDescriptor::Product { .. }) {
        return Err(Failure::invalid(
            "the product command needs a descriptor of type \"product\"",
        ));
    }
    let built = descriptor.build(false)?;
    let BuiltChannel::Product(product) = &built else {
        return Err(Failure::invalid(
            "descriptor did not build a product channel",
        ));
    };
    let opts = args.opt.options();

    let mut factor_records = Vec::new();
    let mut factor_sum = 0.0;
    let mut all_converged = true;
    for factor in product.factors() {
        let res = hsw_capacity_diagonal(factor, &opts)?;
        factor_sum += res.capacity_bits;
        all_converged &= res.diagnostics.converged;
        factor_records.push(FactorCapacityRecord {
            dim: factor.dim(),
            capacity_bits: res.capacity_bits,
            converged: res.diagnostics.converged,
        });
    }
    let composite = hsw_capacity_diagonal(product, &opts)?;
    all_converged &= composite.diagnostics.converged;

    let record = ProductRecord {
        channel: ChannelSummary::new(&descriptor, &built),
        options: OptionsRecord::from(&opts),
        factor_capacities: factor_records,
        factor_capacity_sum: factor_sum,
        composite_capacity_bits: composite.capacity_bits,
        additivity_residual: (composite.capacity_bits - factor_sum).abs(),
        diagnostics: DiagnosticsRecord::from(&composite.diagnostics),
    };

    let mut text = String::new();
    text.push_str(&format!(
        "channel: {} d={}\n",
        record.channel.channel_type, record.channel.dim
    ));
    text.push_str(&format!(
        "descriptor_sha256: {}\n",
        record.channel.descriptor_sha256
    ));
    for (k, factor) in record.factor_capacities.iter().enumerate() {
        text.push_str(&format!(
            "factor {k}: d={} capacity_bits={:.6} converged={}\n",
            factor.dim, factor.capacity_bits, factor.converged
        ));
    }
    text.push_str(&format!(
        "factor_capacity_sum: {:.6}\n",
        record.factor_capacity_sum
    ));
    text.push_str(&format!(
        "composite_capacity_bits: {:.6}\n",
        record.composite_capacity_bits
    ));
    text.push_str(&format!(
        "additivity_residual: {:.3e}\n",
        record.additivity_residual
    ));
    text.push_str(&format!("converged: {all_converged}\n"));

    let json = to_json(&record);
    emit(&args.io, text, json)?;
    Ok(if all_converged { 0 } else { 3 })
}
