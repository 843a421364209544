//! Command-line front end: CP checks, closed-form evaluation, Monte-Carlo
//! sampling, vertex enumeration and the simplex-conjecture test. Every
//! command emits machine-readable JSON (and CSV for samples).
//!
//! Exit codes: 0 affirmative (CP / simplex-consistent / completed),
//! 1 negative (not CP / not consistent), 2 usage or I/O error.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use depolar::linalg::hermitian_eigenvalues;
use depolar::{
    cp_region, gell_mann_basis, pauli_tensor_basis, sample_region, test_simplex_conjecture,
    vertices_from_unitaries, BasisKind, ChannelBuilder, CompressionMap, GeneratorBasis,
};
use output::{sample_csv, to_json_string};

#[derive(Parser)]
#[command(
    name = "depolar",
    version,
    about = "Anisotropic depolarizing channels: CP region checks and geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide complete positivity of a compression map from its Choi spectrum
    Check(CheckArgs),
    /// Print closed-form boundary values only (dims 2, 3, 4; no eigensolve)
    Formulas(FormulasArgs),
    /// Monte-Carlo sample the CP region of the cube [-1,1]^(N²-1)
    Sample(SampleArgs),
    /// Enumerate the extremal vertex maps of a Pauli-tensor basis
    Vertices(VerticesArgs),
    /// Test whether the 2^n-dimensional CP region is simplex-consistent
    Conjecture(ConjectureArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    /// Generalized Gell-Mann generators
    GellMann,
    /// Normalized Pauli tensor products (dimension must be a power of two)
    Pauli,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct SystemArgs {
    /// System dimension N (>= 2)
    #[arg(long)]
    dim: Option<usize>,
    /// Number of qubits n (dimension 2^n, Pauli-tensor basis)
    #[arg(long)]
    qubits: Option<usize>,
    /// Generator basis (default: Pauli tensors for powers of two, else Gell-Mann)
    #[arg(long, value_enum)]
    basis: Option<BasisArg>,
}

#[derive(Args)]
struct NuArgs {
    /// Compression factors as a comma list, e.g. 1,-1,0.5
    #[arg(long)]
    nu: Option<String>,
    /// File with whitespace- or comma-separated compression factors
    #[arg(long)]
    nu_file: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    nu: NuArgs,
    /// CP tolerance on the minimum Choi eigenvalue
    #[arg(long, default_value_t = cp_region::CP_TOL)]
    tol: f64,
    /// Half-width of the Boundary band in the classification
    #[arg(long, default_value_t = cp_region::BOUNDARY_TOL)]
    boundary_tol: f64,
    /// Write the JSON document here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FormulasArgs {
    /// System dimension N (2, 3 or 4)
    #[arg(long)]
    dim: usize,
    #[command(flatten)]
    nu: NuArgs,
    /// Nonnegativity slack for the closed-form CP verdict
    #[arg(long, default_value_t = cp_region::CP_TOL)]
    tol: f64,
    /// Write the JSON document here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Number of samples
    #[arg(long)]
    n: usize,
    /// RNG seed (same seed, same sample, bit for bit)
    #[arg(long)]
    seed: u64,
    /// CP tolerance on the minimum Choi eigenvalue
    #[arg(long, default_value_t = cp_region::CP_TOL)]
    tol: f64,
    /// Per-point output format for --out
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Where to write the per-point sample file (summary always on stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerticesArgs {
    /// Number of qubits n
    #[arg(long)]
    qubits: usize,
    /// Lift the resource guard on large qubit counts
    #[arg(long)]
    force: bool,
    /// Write the JSON document here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConjectureArgs {
    /// Number of qubits n
    #[arg(long)]
    qubits: usize,
    /// Random spectra to verify against the affine prediction
    #[arg(long, default_value_t = 25)]
    n: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance for commutators and spectrum deviations
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Lift the resource guard on large qubit counts
    #[arg(long)]
    force: bool,
    /// Write the JSON document here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Formulas(args) => cmd_formulas(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Vertices(args) => cmd_vertices(args),
        Command::Conjecture(args) => cmd_conjecture(args),
    }
}

fn resolve_system(system: &SystemArgs) -> Result<GeneratorBasis> {
    let dim = match (system.dim, system.qubits) {
        (Some(d), None) => d,
        (None, Some(n)) => {
            ensure!(n >= 1, "--qubits must be at least 1");
            ensure!(n < 16, "--qubits {n} is too large");
            1usize << n
        }
        (Some(_), Some(_)) => bail!("give exactly one of --dim and --qubits, not both"),
        (None, None) => bail!("one of --dim or --qubits is required"),
    };
    ensure!(dim >= 2, "dimension must be at least 2, got {dim}");
    let kind = match system.basis {
        Some(BasisArg::GellMann) => BasisKind::GellMann,
        Some(BasisArg::Pauli) => BasisKind::PauliTensor,
        None => {
            if dim.is_power_of_two() {
                BasisKind::PauliTensor
            } else {
                BasisKind::GellMann
            }
        }
    };
    match kind {
        BasisKind::GellMann => Ok(gell_mann_basis(dim)?),
        BasisKind::PauliTensor => {
            ensure!(
                dim.is_power_of_two(),
                "the Pauli-tensor basis needs a power-of-two dimension, got {dim}"
            );
            Ok(pauli_tensor_basis(dim.trailing_zeros() as usize)?)
        }
    }
}

fn basis_name(basis: &GeneratorBasis) -> &'static str {
    match basis.kind() {
        BasisKind::GellMann => "gell_mann",
        BasisKind::PauliTensor => "pauli_tensor",
    }
}

fn parse_nu(args: &NuArgs, expected: usize) -> Result<Vec<f64>> {
    let text = match (&args.nu, &args.nu_file) {
        (Some(inline), None) => inline.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .with_context(|| format!("cannot read nu file {}", path.display()))?,
        (Some(_), Some(_)) => bail!("give exactly one of --nu and --nu-file, not both"),
        (None, None) => bail!("one of --nu or --nu-file is required"),
    };
    let values: Vec<f64> = text
        .split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|token| !token.is_empty())
        .map(|token| {
            token
                .parse::<f64>()
                .map_err(|_| anyhow!("cannot parse {token:?} as a decimal number"))
        })
        .collect::<Result<_>>()?;
    ensure!(
        values.len() == expected,
        "expected {expected} compression factors, got {}",
        values.len()
    );
    ensure!(
        values.iter().all(|v| v.is_finite()),
        "compression factors must be finite"
    );
    Ok(values)
}

/// Prints a line to stdout, treating a closed pipe as a normal end of
/// output rather than an error.
fn print_line(text: &str) -> Result<()> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{text}") {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(e.into()),
    }
}

fn emit(doc: &serde_json::Value, out: Option<&PathBuf>) -> Result<()> {
    let text = to_json_string(doc);
    match out {
        Some(path) => fs::write(path, text + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print_line(&text)?,
    }
    Ok(())
}

fn closed_form_json(cf: &cp_region::ClosedFormValues) -> serde_json::Value {
    let values: serde_json::Map<String, serde_json::Value> = cf
        .named_values()
        .into_iter()
        .map(|(name, value)| (name, json!(value)))
        .collect();
    json!({
        "values": values,
        "eigenvalues": cf.eigenvalues(),
    })
}

fn cmd_check(args: CheckArgs) -> Result<u8> {
    ensure!(args.tol > 0.0, "--tol must be positive");
    ensure!(args.boundary_tol > 0.0, "--boundary-tol must be positive");
    let basis = resolve_system(&args.system)?;
    let dim = basis.dim();
    let nu = parse_nu(&args.nu, dim * dim - 1)?;
    let builder = ChannelBuilder::new(basis.clone())?;
    let map = CompressionMap::unital(dim, nu.clone())?;
    let report = cp_region::cp_report(&builder, &map, args.tol)?;
    let classification =
        depolar::geometry::classify_with(&builder, &nu, args.boundary_tol)?;
    let doc = json!({
        "schema": 1,
        "dim": dim,
        "basis": basis_name(&basis),
        "nu": nu,
        "eigenvalues": report.eigenvalues,
        "min_eigenvalue": report.min_eigenvalue,
        "is_cp": report.is_cp,
        "classification": classification.as_str(),
        "tol": report.tolerance,
        "closed_form": report.closed_form.as_ref().map(closed_form_json),
        "agreement_max_delta": report.closed_form_agreement(),
    });
    emit(&doc, args.out.as_ref())?;
    Ok(if report.is_cp { 0 } else { 1 })
}

fn cmd_formulas(args: FormulasArgs) -> Result<u8> {
    ensure!(args.tol > 0.0, "--tol must be positive");
    let dim = args.dim;
    ensure!(
        (2..=4).contains(&dim),
        "closed forms exist for dimensions 2, 3 and 4 only, got {dim}"
    );
    let nu = parse_nu(&args.nu, dim * dim - 1)?;
    let cf = match dim {
        2 => cp_region::qubit_closed_form(&nu)?,
        3 => cp_region::qutrit_closed_form(&nu)?,
        _ => cp_region::quart_closed_form(&nu)?,
    };
    let verdict = cf.is_cp(args.tol);
    let doc = json!({
        "schema": 1,
        "dim": dim,
        "nu": nu,
        "closed_form": closed_form_json(&cf),
        "is_cp_closed_form": verdict,
        "tol": args.tol,
    });
    emit(&doc, args.out.as_ref())?;
    Ok(if verdict { 0 } else { 1 })
}

fn cmd_sample(args: SampleArgs) -> Result<u8> {
    ensure!(args.n >= 1, "--n must be at least 1");
    ensure!(args.tol > 0.0, "--tol must be positive");
    let basis = resolve_system(&args.system)?;
    let dim = basis.dim();
    let sample = sample_region(&basis, args.n, args.seed, args.tol)?;
    if let Some(path) = &args.out {
        let contents = match args.format {
            FormatArg::Csv => sample_csv(&sample.points, dim * dim - 1),
            FormatArg::Json => {
                let points: Vec<serde_json::Value> = sample
                    .points
                    .iter()
                    .map(|p| {
                        json!({
                            "nu": p.nu,
                            "min_eigenvalue": p.min_eigenvalue,
                            "is_cp": p.is_cp,
                        })
                    })
                    .collect();
                to_json_string(&json!({
                    "schema": 1,
                    "dim": dim,
                    "basis": basis_name(&basis),
                    "n": sample.n_total,
                    "seed": sample.seed,
                    "tol": sample.tolerance,
                    "points": points,
                })) + "\n"
            }
        };
        fs::write(path, contents)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let summary = json!({
        "schema": 1,
        "dim": dim,
        "basis": basis_name(&basis),
        "n": sample.n_total,
        "seed": sample.seed,
        "tol": sample.tolerance,
        "cp_fraction": sample.cp_fraction(),
        "out": args.out.as_ref().map(|p| p.display().to_string()),
    });
    print_line(&to_json_string(&summary))?;
    Ok(0)
}

fn cmd_vertices(args: VerticesArgs) -> Result<u8> {
    ensure!(args.qubits >= 1, "--qubits must be at least 1");
    if args.qubits > 4 && !args.force {
        bail!(
            "--qubits {} enumerates {} vertex maps; pass --force to confirm",
            args.qubits,
            1usize << (2 * args.qubits)
        );
    }
    let basis = pauli_tensor_basis(args.qubits)?;
    let dim = basis.dim();
    let builder = ChannelBuilder::new(basis.clone())?;
    let vertices = vertices_from_unitaries(&basis)?;
    let mut entries = Vec::with_capacity(vertices.len());
    for v in &vertices {
        let map = CompressionMap::unital(dim, v.nu_pattern.clone())?;
        let eigs = hermitian_eigenvalues(&builder.choi_matrix(&map)?);
        let top = eigs[eigs.len() - 1];
        let residual = eigs[..eigs.len() - 1]
            .iter()
            .map(|e| e.abs())
            .fold(0.0, f64::max);
        entries.push(json!({
            "index": v.generator_index,
            "label": v.label,
            "nu_pattern": v.nu_pattern.iter().map(|&x| x as i64).collect::<Vec<i64>>(),
            "choi_top_eigenvalue": top,
            "choi_residual": residual,
            "choi_rank_one": (top - dim as f64).abs() < 1e-9 && residual < 1e-9,
        }));
    }
    let doc = json!({
        "schema": 1,
        "n_qubits": args.qubits,
        "dim": dim,
        "vertices": entries,
    });
    emit(&doc, args.out.as_ref())?;
    Ok(0)
}

fn cmd_conjecture(args: ConjectureArgs) -> Result<u8> {
    ensure!(args.qubits >= 1, "--qubits must be at least 1");
    ensure!(args.n >= 2, "--n must be at least 2 trials");
    ensure!(args.tol > 0.0, "--tol must be positive");
    if args.qubits > 3 && !args.force {
        bail!(
            "--qubits {} builds {}x{} Choi matrices; pass --force to confirm",
            args.qubits,
            1usize << (2 * args.qubits),
            1usize << (2 * args.qubits)
        );
    }
    let report = test_simplex_conjecture(args.qubits, args.n, args.seed, args.tol)?;
    let doc = json!({
        "schema": 1,
        "n_qubits": report.n_qubits,
        "dim": report.dim,
        "trials": report.trials,
        "seed": report.seed,
        "tolerance": report.tolerance,
        "max_commutator": report.max_commutator,
        "max_spectrum_deviation": report.max_spectrum_deviation,
        "commutators_pass": report.commutators_pass,
        "spectra_pass": report.spectra_pass,
        "simplex_consistent": report.simplex_consistent,
    });
    emit(&doc, args.out.as_ref())?;
    Ok(if report.simplex_consistent { 0 } else { 1 })
}
