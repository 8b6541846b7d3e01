//! Command-line frontend: state construction, representation conversions,
//! reductions, anticoherence queries, quasiprobability grids, and static
//! SVG rendering of T-representation constellations.
//!
//! Exit codes: 2 malformed input, 3 validation failure (non-Hermitian or
//! not a state), 4 numerical failure (pairing or class extraction).

mod formats;
mod render;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinrep::angular::{rotate_matrix, EulerAngles};
use spinrep::constellation::Star;
use spinrep::error::Error as CoreError;
use spinrep::polynomial::{
    anticoherence_order, operator_from_poly, partial_trace_l_k, poly_from_operator,
};
use spinrep::quasiprob::{husimi_from_poly, PFunction, SphereGrid};
use spinrep::spin::{HermitianOp, SpinQN};
use spinrep::srep::srep_coefficients;
use spinrep::states::{named_state, oracle_partial_trace, NamedState};
use spinrep::trep::{decompose_with, reconstruct};
use spinrep::Tolerances;

use formats::{srep_to_entries, StateFile, TRepFile};

#[derive(Parser)]
#[command(
    name = "spinrep",
    version,
    about = "Stellar representations of mixed spin states"
)]
struct Cli {
    /// Override the angular tolerances (pairing and class overlap).
    /// Falls back to the SPINREP_TOL environment variable, then to 1e-6.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Skip the hermiticity gate when loading state files (general operators).
    #[arg(long, global = true)]
    no_hermit_check: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a named state and write it as a state file.
    Make(MakeArgs),
    /// Decompose a state file into its T-representation.
    Trep(InOutArgs),
    /// Rebuild a state file from a T-representation.
    Reconstruct(InOutArgs),
    /// Trace out constituents (polynomial path; --oracle for the tensor route).
    Reduce(ReduceArgs),
    /// Report the anticoherence order and per-order residuals.
    Anticoherence(InArgs),
    /// Evaluate the Husimi function on a sphere grid, CSV output.
    Husimi(GridArgs),
    /// Evaluate the multipole P-function on a sphere grid, CSV output.
    Pfunction(GridArgs),
    /// Conjugate a state file by a rotation.
    Rotate(RotateArgs),
    /// Expand a state file over the S-operator frame.
    Srep(InOutArgs),
    /// Dump the Majorana polynomial coefficients of a state file.
    Poly(InOutArgs),
    /// Render a T-representation as a static SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct MakeArgs {
    /// sc | dicke | ghz | w | cat-q | cat-c | mixed
    #[arg(long)]
    state: String,
    /// Spin as an exact fraction p/q with q in {1, 2}, e.g. 3/2.
    #[arg(long)]
    spin: String,
    /// Magnetic quantum number for dicke, same fraction syntax.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InOutArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Number of spin-1/2 constituents to trace out.
    #[arg(long)]
    constituents: u32,
    /// Use the tensor-embedding oracle instead of the polynomial operator.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Number of Gauss-Legendre rings in the polar direction; the azimuthal
    /// direction gets 2n uniform nodes.
    #[arg(long, default_value_t = 24)]
    grid: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RotateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// zyz Euler angles in radians: alpha,beta,gamma
    #[arg(long, allow_hyphen_values = true)]
    euler: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Scale each sphere by its radius w_sigma instead of drawing them equal.
    #[arg(long)]
    spheres_as_radii: bool,
}

/// Errors carrying the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// exit 2
    Malformed(String),
    /// exit 3
    Validation(String),
    /// exit 4
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Malformed(m) => write!(f, "malformed input: {m}"),
            CliError::Validation(m) => write!(f, "validation failure: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::PairingFailed { .. }
            | CoreError::ClassExtractionFailed { .. }
            | CoreError::ZeroPolynomial
            | CoreError::Numerical(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinrep: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn tolerances(cli: &Cli) -> Tolerances {
    let angular = cli.tolerance.or_else(|| {
        std::env::var("SPINREP_TOL")
            .ok()
            .and_then(|v| v.parse::<f64>().ok())
    });
    match angular {
        Some(t) => Tolerances::with_angular(t),
        None => Tolerances::default(),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let tol = tolerances(cli);
    match &cli.command {
        Command::Make(args) => {
            let two_s = parse_spin(&args.spin)?;
            let name = parse_state_name(&args.state, args.m.as_deref(), two_s)?;
            let rho = named_state(name, two_s).map_err(CliError::from)?;
            write_json(&args.out, &StateFile::from_matrix(two_s, rho.matrix()))
        }
        Command::Trep(args) => {
            let state: StateFile = read_json(&args.input)?;
            let op = state.to_hermitian(tol.hermiticity)?;
            let t = decompose_with(&op, &tol).map_err(CliError::from)?;
            write_json(&args.out, &TRepFile::from_trep(&t))
        }
        Command::Reconstruct(args) => {
            let t: TRepFile = read_json(&args.input)?;
            let op = reconstruct(&t.to_trep()?).map_err(CliError::from)?;
            write_json(&args.out, &StateFile::from_matrix(op.spin(), op.matrix()))
        }
        Command::Reduce(args) => {
            let state: StateFile = read_json(&args.input)?;
            let spin = state.spin();
            if args.constituents > spin.two_s() {
                return Err(CliError::Validation(format!(
                    "cannot trace {} constituents out of 2s = {}",
                    args.constituents,
                    spin.two_s()
                )));
            }
            let reduced = if args.oracle {
                let op = load_operator(&state, cli, &tol)?;
                oracle_partial_trace(&op, args.constituents)
                    .map_err(CliError::from)?
                    .into_matrix()
            } else {
                let m = state.to_cmat()?;
                maybe_check_hermitian(&m, cli, &tol)?;
                let p = poly_from_operator(&m);
                let reduced = partial_trace_l_k(&p, args.constituents).map_err(CliError::from)?;
                operator_from_poly(&reduced)
            };
            let spin_out = SpinQN::from_two_s(spin.two_s() - args.constituents);
            write_json(&args.out, &StateFile::from_matrix(spin_out, &reduced))
        }
        Command::Anticoherence(args) => {
            let state: StateFile = read_json(&args.input)?;
            let op = state.to_hermitian(tol.hermiticity)?;
            let p = poly_from_operator(op.matrix());
            let report = anticoherence_order(&p, 1e-9).map_err(CliError::from)?;
            println!("anticoherence order: {}", report.order);
            for (t, residual) in report.residuals.iter().enumerate() {
                println!("t = {}: residual {:.17e}", t + 1, residual);
            }
            Ok(())
        }
        Command::Husimi(args) => {
            let state: StateFile = read_json(&args.input)?;
            let m = state.to_cmat()?;
            maybe_check_hermitian(&m, cli, &tol)?;
            let p = poly_from_operator(&m);
            let grid = make_grid(args.grid)?;
            write_grid_csv(&args.out, &grid, |star| Ok(husimi_from_poly(&p, star)))
        }
        Command::Pfunction(args) => {
            let state: StateFile = read_json(&args.input)?;
            let op = state.to_hermitian(tol.hermiticity)?;
            let pf = PFunction::new(&op).map_err(CliError::from)?;
            let grid = make_grid(args.grid)?;
            write_grid_csv(&args.out, &grid, |star| Ok(pf.eval(star)))
        }
        Command::Rotate(args) => {
            let state: StateFile = read_json(&args.input)?;
            let euler = parse_euler(&args.euler)?;
            let m = state.to_cmat()?;
            maybe_check_hermitian(&m, cli, &tol)?;
            let rotated = rotate_matrix(&m, state.spin(), euler).map_err(CliError::from)?;
            write_json(&args.out, &StateFile::from_matrix(state.spin(), &rotated))
        }
        Command::Srep(args) => {
            let state: StateFile = read_json(&args.input)?;
            let op = state.to_hermitian(tol.hermiticity)?;
            let coeffs = srep_coefficients(&op).map_err(CliError::from)?;
            write_json(&args.out, &srep_to_entries(&coeffs))
        }
        Command::Poly(args) => {
            let state: StateFile = read_json(&args.input)?;
            let m = state.to_cmat()?;
            maybe_check_hermitian(&m, cli, &tol)?;
            write_json(&args.out, &poly_from_operator(&m).dump_entries())
        }
        Command::Render(args) => {
            let t: TRepFile = read_json(&args.input)?;
            t.to_trep()?; // validate before drawing
            let svg = render::render_svg(&t, args.spheres_as_radii);
            write_text(&args.out, &svg)
        }
    }
}

fn load_operator(state: &StateFile, cli: &Cli, tol: &Tolerances) -> Result<HermitianOp, CliError> {
    if cli.no_hermit_check {
        // oracle path needs a HermitianOp; accept anything numerically close
        HermitianOp::with_tolerance(state.spin(), state.to_cmat()?, f64::INFINITY)
            .map_err(CliError::from)
    } else {
        state.to_hermitian(tol.hermiticity)
    }
}

fn maybe_check_hermitian(
    m: &spinrep::matrix::CMat,
    cli: &Cli,
    tol: &Tolerances,
) -> Result<(), CliError> {
    if cli.no_hermit_check {
        return Ok(());
    }
    let residual = m.hermiticity_residual();
    if residual > tol.hermiticity {
        return Err(CliError::Validation(format!(
            "operator is not Hermitian (residual {residual:.3e}); pass --no-hermit-check to allow"
        )));
    }
    Ok(())
}

fn parse_spin(text: &str) -> Result<SpinQN, CliError> {
    let two_s = parse_doubled(text)?;
    if two_s < 0 {
        return Err(CliError::Malformed(format!("negative spin {text}")));
    }
    Ok(SpinQN::from_two_s(two_s as u32))
}

/// Parse "p" or "p/q" with q in {1, 2} into a doubled value.
fn parse_doubled(text: &str) -> Result<i64, CliError> {
    let bad = |t: &str| {
        CliError::Malformed(format!(
            "cannot parse '{t}' as a fraction p/q with q in {{1,2}}"
        ))
    };
    match text.split_once('/') {
        None => text
            .trim()
            .parse::<i64>()
            .map(|v| 2 * v)
            .map_err(|_| bad(text)),
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad(text))?;
            match q.trim() {
                "1" => Ok(2 * p),
                "2" => Ok(p),
                _ => Err(bad(text)),
            }
        }
    }
}

fn parse_state_name(name: &str, m: Option<&str>, two_s: SpinQN) -> Result<NamedState, CliError> {
    match name {
        "sc" => Ok(NamedState::SpinCoherent(Star::plus_z())),
        "dicke" => {
            let m = m.ok_or_else(|| {
                CliError::Malformed("dicke needs --m (fraction syntax, e.g. --m 1/2)".into())
            })?;
            let two_m = parse_doubled(m)?;
            // half-integer m must match half-integer s
            if (two_m - two_s.two_s() as i64).rem_euclid(2) != 0 {
                return Err(CliError::Validation(format!(
                    "m = {m} has the wrong parity for spin 2s = {}",
                    two_s.two_s()
                )));
            }
            Ok(NamedState::Dicke { two_m })
        }
        "ghz" => Ok(NamedState::Ghz),
        "w" => Ok(NamedState::W),
        "cat-q" => Ok(NamedState::CatQ),
        "cat-c" => Ok(NamedState::CatC),
        "mixed" => Ok(NamedState::MaximallyMixed),
        other => Err(CliError::Malformed(format!(
            "unknown state '{other}' (expected sc|dicke|ghz|w|cat-q|cat-c|mixed)"
        ))),
    }
}

fn parse_euler(text: &str) -> Result<EulerAngles, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Malformed(format!(
            "--euler needs three comma-separated angles, got '{text}'"
        )));
    }
    let vals = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|_| CliError::Malformed(format!("cannot parse euler angles '{text}'")))?;
    Ok(EulerAngles::new(vals[0], vals[1], vals[2]))
}

fn make_grid(rings: u32) -> Result<SphereGrid, CliError> {
    if rings == 0 {
        return Err(CliError::Malformed("--grid must be positive".into()));
    }
    Ok(SphereGrid::with_rings(rings as usize, 2 * rings as usize))
}

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    if is_stdio(path) {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Malformed(format!("cannot read stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if is_stdio(path) {
        use std::io::Write;
        return std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Malformed(format!("cannot write stdout: {e}")));
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Malformed(format!("cannot parse {}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Malformed(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}

fn write_grid_csv<F: FnMut(&Star) -> Result<f64, CliError>>(
    path: &Path,
    grid: &SphereGrid,
    mut f: F,
) -> Result<(), CliError> {
    let mut out = String::from("theta,phi,value\n");
    for (star, _) in &grid.nodes {
        let value = f(star)?;
        let _ = writeln!(out, "{},{},{}", star.theta, star.phi, value);
    }
    write_text(path, &out)
}
