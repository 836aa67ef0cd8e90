//! Command-line front end.
//!
//! Every command prints one JSON `CommandResult` with sorted keys to stdout or
//! `--out`. Exit codes: `0` pass, `1` verification failure, `2` input or usage error.
//! Artifacts built by one command sit under `"result"` and are accepted as input
//! by the matching verify command.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::circle_filters::{
    build_m_matrix, cqf_complete, cqf_partner, cuntz_residuals, loop_action_circle,
    marseille_residual, periodicity_residual, shift_relation_residual, unit_circle_grid,
    unitarity_residual, Convention, LaurentPoly, MatrixFunction, PolyMatrix, RationalMatrixProduct,
};
use crate::classic_mra::{
    analysis_taps, cascade, filterbank_roundtrip, fourier_product, read_signal_csv, read_taps_json,
    shift_orthonormality, wavelet_detail, write_profile_csv, write_signal_csv, CascadeSeed,
    ProfileMeta,
};
use crate::code_space::{CylinderFn, IfsSpec, C64};
use crate::error::{Result, WavelabError};
use crate::geometry::{
    chaos_game, invariance_from_samples, logistic_adjoint_compare, logistic_invariance, AffineIfs,
    Poly, MIN_SAMPLES,
};
use crate::ifs_filters::{
    apply_loop_group, build_indicator, build_roots_of_unity, connecting_unitary,
    endomorphism_check, gram_schmidt_module, multires_decompose, multires_reconstruct,
    verify_filter, DecomposeMode, FilterBank, MatrixField, DEFAULT_FILTER_TOL,
};
use crate::rkhs::{
    contraction_check, discrete_cuntz_check, preimage_orthogonality, product_kernel,
    refinement_residual, FinitePointSet, KernelMatrix, PSD_TOL,
};
use crate::solenoid::{axiom_check, dilation_check, moment, MomentSpec, HARMONIC_TOL};

#[derive(Parser, Debug)]
#[command(
    name = "wavelab",
    version,
    about = "Cuntz-relation wavelet filters: build, verify, transform"
)]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add `wall_time_s` to the result.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Filter banks on IFS code spaces.
    #[command(subcommand)]
    Ifs(IfsCmd),
    /// Circle filters, CQF completion and Blaschke products.
    #[command(subcommand)]
    Circle(CircleCmd),
    /// Cascade, wavelets and multirate filter banks on the line.
    #[command(subcommand)]
    Mra(MraCmd),
    /// Solenoid moments, dilations and axioms.
    #[command(subcommand)]
    Solenoid(SolenoidCmd),
    /// Kernel conditions on finite point sets.
    #[command(subcommand)]
    Rkhs(RkhsCmd),
    /// Logistic map and affine fractal measures.
    #[command(subcommand)]
    Examples(ExamplesCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BankKind {
    Indicator,
    Roots,
    GramSchmidt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Averaged,
    UnitSum,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Averaged => Convention::Averaged,
            ConventionArg::UnitSum => Convention::UnitSum,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Packet,
    SingleBranch,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InitArg {
    IntegerEigen,
    UnitBox,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    Sierpinski,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Number of equally spaced angles.
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Per-angle residuals as `angle,residual` CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum IfsCmd {
    /// Build a filter bank.
    BuildFilter {
        #[arg(long, value_enum)]
        kind: BankKind,
        /// Defaults to the number of weights, else 2.
        #[arg(long = "N")]
        n: Option<usize>,
        /// Branch weights, comma separated (default uniform).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// JSON array of cylinder functions (gram-schmidt only).
        #[arg(long)]
        generators: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_FILTER_TOL)]
        tol: f64,
    },
    /// Check both Cuntz conditions.
    VerifyFilter {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_FILTER_TOL)]
        tol: f64,
    },
    /// Connecting unitary field between two banks.
    Connect {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Act on a bank with a matrix field.
    ApplyUnitary {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        unitary: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Multiresolution decomposition and reconstruction.
    Decompose {
        #[arg(long)]
        bank: PathBuf,
        /// Cylinder function JSON.
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Packet)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Endomorphism extension identity on indicator probes.
    EndoCheck {
        #[arg(long)]
        bank: PathBuf,
        /// Cylinder function JSON.
        #[arg(long)]
        f: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
enum CircleCmd {
    /// Exact coefficient Cuntz residuals.
    Verify {
        /// JSON array of Laurent polynomials.
        #[arg(long)]
        filters: PathBuf,
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ConventionArg::Averaged)]
        convention: ConventionArg,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
    },
    /// Two-band completion of a low-pass filter.
    CqfComplete {
        /// Laurent polynomial JSON.
        #[arg(long)]
        m0: PathBuf,
        #[arg(long, value_enum, default_value_t = ConventionArg::Averaged)]
        convention: ConventionArg,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
    },
    /// Unitarity and shift relation of the filter matrix.
    Matrix {
        #[arg(long)]
        filters: PathBuf,
        #[arg(long, value_enum, default_value_t = ConventionArg::Averaged)]
        convention: ConventionArg,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
    },
    /// Unitarity and periodicity of a Blaschke product.
    Blaschke {
        /// Factor list JSON.
        #[arg(long)]
        product: PathBuf,
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// `G(z^N) M(z)` for a loop `G` and the filter matrix `M`.
    LoopAct {
        /// Factor list or `{"entries": ...}` polynomial matrix JSON.
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        filters: PathBuf,
        #[arg(long, value_enum, default_value_t = ConventionArg::Averaged)]
        convention: ConventionArg,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Args, Debug)]
struct CascadeArgs {
    /// JSON array of real taps.
    #[arg(long)]
    taps: PathBuf,
    #[arg(long = "N", default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    iters: usize,
    #[arg(long, default_value_t = 1024)]
    resolution: usize,
    #[arg(long, value_enum, default_value_t = InitArg::IntegerEigen)]
    init: InitArg,
    /// Samples as `x,value` CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum MraCmd {
    /// Scaling function by the cascade algorithm.
    Cascade {
        #[command(flatten)]
        args: CascadeArgs,
        /// Bound on the last successive sup difference.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 1e-9)]
        integral_tol: f64,
    },
    /// Wavelet from the scaling function and detail taps.
    Wavelet {
        #[command(flatten)]
        args: CascadeArgs,
        /// JSON array of detail taps (default `(−1)^k c_{L−1−k}` for N = 2).
        #[arg(long)]
        detail: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Periodic analysis and synthesis of a signal.
    Filterbank {
        /// `re,im` CSV, one sample per line.
        #[arg(long)]
        signal: PathBuf,
        /// JSON array of Laurent polynomials (synthesis bank).
        #[arg(long)]
        filters: PathBuf,
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ConventionArg::Averaged)]
        convention: ConventionArg,
        /// Reconstruction as `re,im` CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Truncated infinite product for the Fourier transform of φ.
    Product {
        #[arg(long)]
        m0: PathBuf,
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 30)]
        terms: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
enum SolenoidCmd {
    /// Path-space moment.
    Moment {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Dilation identities for several powers.
    Dilation {
        #[arg(long)]
        m: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            default_value = "-2,-1,0,1,2"
        )]
        n: Vec<i64>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Covariance and scaling axioms.
    Axioms {
        #[arg(long)]
        m: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
enum RkhsCmd {
    /// Refinement, contraction and preimage conditions.
    Check {
        #[arg(long)]
        points: PathBuf,
        /// Dense Hermitian matrix JSON (default Szegő).
        #[arg(long)]
        kernel: Option<PathBuf>,
        /// JSON array of filter value lists, one value per point.
        #[arg(long)]
        filters: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Truncated infinite-product kernel.
    ProductKernel {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        filters: PathBuf,
        #[arg(long, default_value_t = 30)]
        terms: usize,
        /// Report the distance to the Szegő kernel.
        #[arg(long)]
        compare_szego: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
enum ExamplesCmd {
    /// Arcsine invariance under the logistic map.
    Logistic {
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        /// Coefficients of `f` for the adjoint report, ascending.
        #[arg(
            long = "adjoint-f",
            value_delimiter = ',',
            allow_negative_numbers = true
        )]
        adjoint_f: Option<Vec<f64>>,
        /// Coefficients of `g` for the adjoint report, ascending.
        #[arg(
            long = "adjoint-g",
            value_delimiter = ',',
            allow_negative_numbers = true
        )]
        adjoint_g: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Chaos game and strong-invariance z-scores.
    Fractal {
        #[arg(long, conflicts_with = "preset")]
        ifs: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 4.0)]
        z_max: f64,
        /// Sample points as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct CommandResult {
    command: String,
    pass: bool,
    result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
}

struct Outcome {
    pass: bool,
    result: Value,
    seed: Option<u64>,
}

impl Outcome {
    fn new(pass: bool, result: impl Serialize) -> Result<Self> {
        Ok(Self {
            pass,
            result: serde_json::to_value(result)?,
            seed: None,
        })
    }
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let name = command_name(&cli.command);
    let start = Instant::now();
    let outcome = dispatch(&cli.command);
    let wall = cli.timing.then(|| start.elapsed().as_secs_f64());
    let (code, result) = match outcome {
        Ok(o) => (
            i32::from(!o.pass),
            CommandResult {
                command: name,
                pass: o.pass,
                result: o.result,
                seed: o.seed,
                wall_time_s: wall,
            },
        ),
        Err(e) if exit_code(&e) == 1 => (
            1,
            CommandResult {
                command: name,
                pass: false,
                result: json!({ "error": e.to_string() }),
                seed: None,
                wall_time_s: wall,
            },
        ),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    match emit(&result, cli.out.as_deref(), stdout) {
        Ok(()) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn exit_code(e: &WavelabError) -> i32 {
    match e {
        WavelabError::Precondition(_)
        | WavelabError::Convergence { .. }
        | WavelabError::NotModuleBasis { .. } => 1,
        _ => 2,
    }
}

fn emit(result: &CommandResult, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    // Through `Value` so that object keys come out sorted.
    let text = serde_json::to_string_pretty(&serde_json::to_value(result)?)? + "\n";
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn command_name(c: &Command) -> String {
    let (group, sub) = match c {
        Command::Ifs(s) => ("ifs", format!("{s:?}")),
        Command::Circle(s) => ("circle", format!("{s:?}")),
        Command::Mra(s) => ("mra", format!("{s:?}")),
        Command::Solenoid(s) => ("solenoid", format!("{s:?}")),
        Command::Rkhs(s) => ("rkhs", format!("{s:?}")),
        Command::Examples(s) => ("examples", format!("{s:?}")),
    };
    let variant: String = sub.chars().take_while(|c| c.is_alphanumeric()).collect();
    let mut kebab = String::new();
    for (i, ch) in variant.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            kebab.push('-');
        }
        kebab.push(ch.to_ascii_lowercase());
    }
    format!("{group} {kebab}")
}

/// Reads `T` from a file holding either `T` itself or a `CommandResult`
/// whose `result` (or `result.<key>`) is a `T`.
fn load<T: DeserializeOwned>(path: &Path, key: &str) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| WavelabError::Input(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)?;
    extract(&value, key)
}

fn extract<T: DeserializeOwned>(value: &Value, key: &str) -> Result<T> {
    match T::deserialize(value) {
        Ok(t) => Ok(t),
        Err(e) => {
            if let Value::Object(map) = value {
                for k in ["result", key] {
                    if let Some(inner) = map.get(k) {
                        if let Ok(t) = extract(inner, key) {
                            return Ok(t);
                        }
                    }
                }
            }
            Err(e.into())
        }
    }
}

fn dispatch(c: &Command) -> Result<Outcome> {
    match c {
        Command::Ifs(s) => ifs(s),
        Command::Circle(s) => circle(s),
        Command::Mra(s) => mra(s),
        Command::Solenoid(s) => solenoid(s),
        Command::Rkhs(s) => rkhs(s),
        Command::Examples(s) => examples(s),
    }
}

fn bank_distance(a: &FilterBank, b: &FilterBank) -> Result<f64> {
    a.filters()
        .iter()
        .zip(b.filters())
        .try_fold(0.0, |acc: f64, (x, y)| Ok(acc.max(x.sup_distance(y)?)))
}

fn ifs(c: &IfsCmd) -> Result<Outcome> {
    match c {
        IfsCmd::BuildFilter {
            kind,
            n,
            weights,
            generators,
            depth,
            tol,
        } => {
            let bank = match kind {
                BankKind::GramSchmidt => {
                    let path = generators.as_deref().ok_or_else(|| {
                        WavelabError::Input("--generators is required for gram-schmidt".into())
                    })?;
                    let gens: Vec<CylinderFn> = load(path, "generators")?;
                    let spec = gens
                        .first()
                        .ok_or_else(|| WavelabError::Input("no generators".into()))?
                        .spec()
                        .clone();
                    gram_schmidt_module(&spec, &gens)?
                }
                _ => {
                    let spec = match weights {
                        Some(w) => {
                            if let Some(n) = n.filter(|&n| n != w.len()) {
                                return Err(WavelabError::Input(format!(
                                    "{} weights given for N = {n}",
                                    w.len()
                                )));
                            }
                            IfsSpec::with_weights(w.clone())?
                        }
                        None => IfsSpec::uniform(n.unwrap_or(2))?,
                    };
                    match kind {
                        BankKind::Indicator => build_indicator(&spec)?,
                        _ => build_roots_of_unity(&spec)?,
                    }
                }
            };
            let report = verify_filter(&bank, *depth, *tol)?;
            Outcome::new(report.pass, json!({ "bank": bank, "report": report }))
        }
        IfsCmd::VerifyFilter { bank, depth, tol } => {
            let bank: FilterBank = load(bank, "bank")?;
            let report = verify_filter(&bank, *depth, *tol)?;
            Outcome::new(report.pass, report)
        }
        IfsCmd::Connect { from, to, tol } => {
            let a: FilterBank = load(from, "bank")?;
            let b: FilterBank = load(to, "bank")?;
            let u = connecting_unitary(&a, &b)?;
            let unitarity = u.unitarity_residual()?;
            let action = bank_distance(&apply_loop_group(&a, &u)?, &b)?;
            Outcome::new(
                unitarity < *tol && action < *tol,
                json!({ "unitary": u, "unitarity_residual": unitarity, "action_residual": action }),
            )
        }
        IfsCmd::ApplyUnitary {
            bank,
            unitary,
            depth,
            tol,
        } => {
            let b: FilterBank = load(bank, "bank")?;
            let u: MatrixField = load(unitary, "unitary")?;
            let unitarity = u.unitarity_residual()?;
            let out = apply_loop_group(&b, &u)?;
            let report = verify_filter(&out, *depth, DEFAULT_FILTER_TOL.max(*tol))?;
            Outcome::new(
                unitarity < *tol && report.pass,
                json!({ "bank": out, "unitarity_residual": unitarity, "report": report }),
            )
        }
        IfsCmd::Decompose {
            bank,
            signal,
            levels,
            mode,
            tol,
        } => {
            let b: FilterBank = load(bank, "bank")?;
            let f: CylinderFn = load(signal, "signal")?;
            let mode = match mode {
                ModeArg::Packet => DecomposeMode::Packet,
                ModeArg::SingleBranch => DecomposeMode::SingleBranch,
            };
            let tree = multires_decompose(&b, &f, *levels, mode)?;
            let back = multires_reconstruct(&b, &tree)?;
            let reconstruction = back.sup_distance(&f)?;
            let energy = (tree.energy() - f.norm_sq()).abs();
            Outcome::new(
                reconstruction < *tol,
                json!({
                    "tree": tree,
                    "reconstruction_error": reconstruction,
                    "energy_error": energy,
                }),
            )
        }
        IfsCmd::EndoCheck {
            bank,
            f,
            depth,
            tol,
        } => {
            let b: FilterBank = load(bank, "bank")?;
            let f: CylinderFn = load(f, "f")?;
            let r = endomorphism_check(&b, &f, *depth)?;
            Outcome::new(r < *tol, json!({ "residual": r, "probe_depth": depth }))
        }
    }
}

fn write_grid_csv(path: Option<&Path>, report: &crate::circle_filters::GridReport) -> Result<()> {
    if let Some(p) = path {
        report.write_csv(fs::File::create(p)?)?;
    }
    Ok(())
}

/// A loop given as a Blaschke product or a polynomial matrix.
#[derive(serde::Deserialize)]
#[serde(untagged)]
enum LoopInput {
    Product(RationalMatrixProduct),
    Poly(PolyMatrix),
}

impl MatrixFunction for LoopInput {
    fn dim(&self) -> usize {
        match self {
            LoopInput::Product(p) => p.dim(),
            LoopInput::Poly(p) => p.dim(),
        }
    }
    fn eval(&self, z: C64) -> DMatrix<C64> {
        match self {
            LoopInput::Product(p) => p.eval(z),
            LoopInput::Poly(p) => p.eval(z),
        }
    }
}

fn circle(c: &CircleCmd) -> Result<Outcome> {
    match c {
        CircleCmd::Verify {
            filters,
            n,
            convention,
            tol,
        } => {
            let fs: Vec<LaurentPoly> = load(filters, "filters")?;
            let report = cuntz_residuals(&fs, *n, (*convention).into())?;
            Outcome::new(report.max() < *tol, report)
        }
        CircleCmd::CqfComplete {
            m0,
            convention,
            grid,
            tol,
        } => {
            let m0: LaurentPoly = load(m0, "m0")?;
            let conv: Convention = (*convention).into();
            let angles = unit_circle_grid(grid.grid);
            let m = cqf_complete(&m0, conv);
            let unitarity = unitarity_residual(&m, &angles);
            write_grid_csv(grid.csv.as_deref(), &unitarity)?;
            let marseille = marseille_residual(&m0, conv, &angles);
            let filters = vec![m0.clone(), cqf_partner(&m0)];
            Outcome::new(
                unitarity.max < *tol,
                json!({
                    "filters": filters,
                    "matrix": m,
                    "unitarity_residual": unitarity.max,
                    "quadrature_residual": marseille,
                }),
            )
        }
        CircleCmd::Matrix {
            filters,
            convention,
            grid,
            tol,
        } => {
            let fs: Vec<LaurentPoly> = load(filters, "filters")?;
            let angles = unit_circle_grid(grid.grid);
            let m = build_m_matrix(&fs, (*convention).into());
            let unitarity = unitarity_residual(&m, &angles);
            write_grid_csv(grid.csv.as_deref(), &unitarity)?;
            let shift = shift_relation_residual(&m, &angles);
            Outcome::new(
                unitarity.max < *tol && shift.max < *tol,
                json!({ "unitarity_residual": unitarity.max, "shift_residual": shift.max }),
            )
        }
        CircleCmd::Blaschke {
            product,
            n,
            grid,
            tol,
        } => {
            let p: RationalMatrixProduct = load(product, "product")?;
            let angles = unit_circle_grid(grid.grid);
            let unitarity = unitarity_residual(&p, &angles);
            write_grid_csv(grid.csv.as_deref(), &unitarity)?;
            let periodic = periodicity_residual(&p, *n, &angles);
            Outcome::new(
                unitarity.max < *tol && periodic.max < *tol,
                json!({
                    "unitarity_residual": unitarity.max,
                    "periodicity_residual": periodic.max,
                    "factors": p.factors().len(),
                }),
            )
        }
        CircleCmd::LoopAct {
            g,
            filters,
            convention,
            grid,
            tol,
        } => {
            let g: LoopInput = load(g, "g")?;
            let fs: Vec<LaurentPoly> = load(filters, "filters")?;
            let n = fs.len();
            let angles = unit_circle_grid(grid.grid);
            let m = build_m_matrix(&fs, (*convention).into());
            let act = loop_action_circle(g, m, n, &angles)?;
            let unitarity = unitarity_residual(&act, &angles);
            write_grid_csv(grid.csv.as_deref(), &unitarity)?;
            let shift = shift_relation_residual(&act, &angles);
            Outcome::new(
                act.warning.is_none() && unitarity.max < *tol && shift.max < *tol,
                json!({
                    "warning": act.warning,
                    "unitarity_residual": unitarity.max,
                    "shift_residual": shift.max,
                }),
            )
        }
    }
}

fn run_cascade(a: &CascadeArgs) -> Result<crate::classic_mra::ScalingProfile> {
    let taps = read_taps_json(&fs::read_to_string(&a.taps)?)?;
    let init = match a.init {
        InitArg::IntegerEigen => CascadeSeed::IntegerEigen,
        InitArg::UnitBox => CascadeSeed::UnitBox,
    };
    cascade(&taps, a.n, a.iters, a.resolution, init)
}

fn mra(c: &MraCmd) -> Result<Outcome> {
    match c {
        MraCmd::Cascade {
            args,
            tol,
            integral_tol,
        } => {
            let p = run_cascade(args)?;
            if let Some(path) = &args.csv {
                write_profile_csv(fs::File::create(path)?, &p.phi)?;
            }
            let gram = shift_orthonormality(&p.phi);
            let pass = p.last_residual() < *tol && (p.integral() - 1.0).abs() < *integral_tol;
            Outcome::new(
                pass,
                json!({
                    "meta": ProfileMeta::from(&p),
                    "last_residual": p.last_residual(),
                    "shift_gram_deviation": gram.deviation,
                }),
            )
        }
        MraCmd::Wavelet { args, detail, tol } => {
            let p = run_cascade(args)?;
            let detail = match detail {
                Some(path) => read_taps_json(&fs::read_to_string(path)?)?,
                None if args.n == 2 => {
                    let l = p.taps.len();
                    (0..l)
                        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * p.taps[l - 1 - k])
                        .collect()
                }
                None => {
                    return Err(WavelabError::Input("--detail is required for N > 2".into()));
                }
            };
            let psi = wavelet_detail(&p, &detail)?;
            if let Some(path) = &args.csv {
                write_profile_csv(fs::File::create(path)?, &psi)?;
            }
            let phi_psi = p.phi.inner(&psi)?;
            Outcome::new(
                p.last_residual() < *tol,
                json!({
                    "detail": detail,
                    "integral": psi.integral(),
                    "norm_sq": psi.inner(&psi)?,
                    "inner_with_phi": phi_psi,
                    "last_residual": p.last_residual(),
                }),
            )
        }
        MraCmd::Filterbank {
            signal,
            filters,
            n,
            convention,
            csv,
            tol,
        } => {
            let x = read_signal_csv(fs::File::open(signal)?)?;
            let fs_in: Vec<LaurentPoly> = load(filters, "filters")?;
            let conv: Convention = (*convention).into();
            let scale = conv.to_averaged(*n);
            let synth: Vec<LaurentPoly> = fs_in
                .iter()
                .map(|m| m.scale(C64::new(scale, 0.0)))
                .collect();
            let rt = filterbank_roundtrip(&x, &analysis_taps(&synth), &synth, *n)?;
            if let Some(path) = csv {
                write_signal_csv(fs::File::create(path)?, &rt.reconstruction)?;
            }
            Outcome::new(
                rt.pr_error < *tol && rt.energy_error < *tol * x.len().max(1) as f64,
                json!({
                    "length": x.len(),
                    "pr_error": rt.pr_error,
                    "energy_error": rt.energy_error,
                }),
            )
        }
        MraCmd::Product {
            m0,
            n,
            t,
            terms,
            tol,
        } => {
            let m0: LaurentPoly = load(m0, "m0")?;
            let fp = fourier_product(&m0, *n, *t, *terms)?;
            Outcome::new(fp.tail < *tol, fp)
        }
    }
}

fn solenoid(c: &SolenoidCmd) -> Result<Outcome> {
    match c {
        SolenoidCmd::Moment { file, tol } => {
            let spec: MomentSpec = load(file, "spec")?;
            let r = moment(&spec)?;
            Outcome::new(
                r.harmonic_residual < HARMONIC_TOL && r.mass_residual < *tol,
                r,
            )
        }
        SolenoidCmd::Dilation { m, f, g, n, tol } => {
            let m: CylinderFn = load(m, "m")?;
            let f: CylinderFn = load(f, "f")?;
            let g: CylinderFn = load(g, "g")?;
            let reports = n
                .iter()
                .map(|&k| dilation_check(&m, &f, &g, k))
                .collect::<Result<Vec<_>>>()?;
            let max = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
            Outcome::new(max < *tol, json!({ "checks": reports, "max": max }))
        }
        SolenoidCmd::Axioms { m, f, g, tol } => {
            let m: CylinderFn = load(m, "m")?;
            let f: CylinderFn = load(f, "f")?;
            let g: CylinderFn = load(g, "g")?;
            let r = axiom_check(&m, &f, &g)?;
            Outcome::new(r.max() < *tol, r)
        }
    }
}

fn rkhs(c: &RkhsCmd) -> Result<Outcome> {
    match c {
        RkhsCmd::Check {
            points,
            kernel,
            filters,
            tol,
        } => {
            let ps: FinitePointSet = load(points, "points")?;
            let k = match kernel {
                Some(path) => load::<KernelMatrix>(path, "kernel")?,
                None => KernelMatrix::szego(&ps)?,
            };
            let fs: Vec<Vec<C64>> = load(filters, "filters")?;
            let refinement = refinement_residual(&k, &fs, &ps)?;
            let contractions = fs
                .iter()
                .map(|m| contraction_check(&k, m, &ps))
                .collect::<Result<Vec<_>>>()?;
            let preimage = preimage_orthogonality(&fs, &ps)?;
            let cuntz = discrete_cuntz_check(&k, &fs, &ps)?;
            let min_eig = k.min_eigenvalue();
            let pass = min_eig >= -PSD_TOL
                && refinement < *tol
                && contractions.iter().all(|c| c.contraction);
            Outcome::new(
                pass,
                json!({
                    "min_eigenvalue": min_eig,
                    "refinement_residual": refinement,
                    "contractions": contractions,
                    "preimage": preimage,
                    "discrete_cuntz": cuntz,
                }),
            )
        }
        RkhsCmd::ProductKernel {
            points,
            filters,
            terms,
            compare_szego,
            tol,
        } => {
            let ps: FinitePointSet = load(points, "points")?;
            let fs: Vec<Vec<C64>> = load(filters, "filters")?;
            let pk = product_kernel(&fs, &ps, *terms)?;
            let szego = if *compare_szego {
                Some(pk.kernel.max_distance(&KernelMatrix::szego(&ps)?))
            } else {
                None
            };
            let pass = pk.tail < *tol && szego.is_none_or(|d| d < *tol);
            Outcome::new(pass, json!({ "product": pk, "szego_distance": szego }))
        }
    }
}

fn examples(c: &ExamplesCmd) -> Result<Outcome> {
    match c {
        ExamplesCmd::Logistic {
            degree,
            nodes,
            adjoint_f,
            adjoint_g,
            tol,
        } => {
            let inv = logistic_invariance(*degree, *nodes)?;
            let adjoint = match (adjoint_f, adjoint_g) {
                (Some(f), Some(g)) => Some(logistic_adjoint_compare(
                    &Poly(f.clone()),
                    &Poly(g.clone()),
                    *nodes,
                )?),
                (None, None) => None,
                _ => {
                    return Err(WavelabError::Input(
                        "--adjoint-f and --adjoint-g go together".into(),
                    ))
                }
            };
            Outcome::new(
                inv.max < *tol,
                json!({ "invariance": inv, "adjoint": adjoint }),
            )
        }
        ExamplesCmd::Fractal {
            ifs,
            preset,
            samples,
            seed,
            order,
            z_max,
            csv,
        } => {
            let a = match (ifs, preset) {
                (Some(path), _) => load::<AffineIfs>(path, "ifs")?,
                (None, Some(Preset::Sierpinski)) => AffineIfs::sierpinski(),
                (None, None) => {
                    return Err(WavelabError::Input("give --ifs or --preset".into()));
                }
            };
            if *samples < MIN_SAMPLES {
                return Err(WavelabError::Input(format!(
                    "need at least {MIN_SAMPLES} samples"
                )));
            }
            let pts = chaos_game(&a, *samples, *seed)?;
            if let Some(path) = csv {
                pts.write_csv(fs::File::create(path)?)?;
            }
            let mut report = invariance_from_samples(&a, &pts, *order)?;
            report.seed = *seed;
            let mut o = Outcome::new(report.max_abs_z < *z_max, report)?;
            o.seed = Some(*seed);
            Ok(o)
        }
    }
}
