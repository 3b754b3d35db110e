use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wedderburn::document::{self, AlgebraDocument, ReportDocument, ScrambleDocument};
use wedderburn::exactfield::{Poly, PrimeField};
use wedderburn::generators::{direct_sum, group_algebra, matrix_algebra_over_extension, scramble};
use wedderburn::semisimple::require_semisimple;
use wedderburn::wedderburn::{full_isomorphism, verify_claim, VerifyLevel};
use wedderburn::algebra::AlgebraPresentation;
use wedderburn::Error;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_NOT_SEMISIMPLE: u8 = 2;
const EXIT_CHARACTERISTIC: u8 = 3;
const EXIT_INVALID: u8 = 4;
const EXIT_SPLIT_CAP: u8 = 5;

/// Wedderburn-Artin decomposition of semisimple algebras over prime fields.
#[derive(Parser)]
#[command(name = "wedderburn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an algebra into matrix blocks over division algebras.
    Decompose(DecomposeArgs),
    /// Check a decomposition report against an algebra.
    Verify(VerifyArgs),
    /// Generate algebra documents.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Fast,
    Full,
}

impl From<Level> for VerifyLevel {
    fn from(l: Level) -> Self {
        match l {
            Level::Fast => VerifyLevel::Fast,
            Level::Full => VerifyLevel::Full,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct DecomposeArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 256)]
    max_split_iters: usize,
    /// Defaults to full for dim <= 64 and fast otherwise.
    #[arg(long, value_enum)]
    verify_level: Option<Level>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report document here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    algebra: PathBuf,
    report: PathBuf,
    #[arg(long, value_enum, default_value_t = Level::Full)]
    verify_level: Level,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Apply a random change of basis.
    #[arg(long, global = true)]
    scramble: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Where to write the change-of-basis matrix. Defaults to
    /// `<output>.basis.json`.
    #[arg(long, global = true)]
    sidecar: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Group algebra F_p[G] from a Cayley table.
    Group {
        #[arg(long)]
        cayley: PathBuf,
        #[arg(short)]
        p: u64,
    },
    /// Full matrix algebra M_n(F_q), q = p^d, given a defining polynomial.
    Matrix {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        p: u64,
        /// Comma-separated coefficients, constant term first.
        #[arg(long, value_delimiter = ',')]
        ext_poly: Option<Vec<u64>>,
    },
    /// Direct sum of algebra documents.
    Sum {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotSemisimple { .. } => EXIT_NOT_SEMISIMPLE,
            Error::UnsupportedCharacteristic { .. } => EXIT_CHARACTERISTIC,
            Error::SplitIterationCapExceeded(_) => EXIT_SPLIT_CAP,
            Error::WitnessSolveFailed(_)
            | Error::CentralityViolation(_)
            | Error::MatrixUnitViolation(_)
            | Error::EntryOutsideCorner(_)
            | Error::NonBijective
            | Error::InternalSamplingFailure(_)
            | Error::InvariantViolation(_) => EXIT_VERIFY_FAILED,
            _ => EXIT_INVALID,
        };
        let mut message = e.to_string();
        match &e {
            Error::NotSemisimple { radical } => {
                message.push_str("\nradical basis:");
                for v in radical {
                    message.push_str(&format!("\n  {v:?}"));
                }
            }
            Error::SplitIterationCapExceeded(_) => {
                message.push_str("; retry with a different --seed or a larger --max-split-iters");
            }
            _ => {}
        }
        Failure { code, message }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INVALID, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_INVALID, format!("cannot write {}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> std::result::Result<AlgebraPresentation, Failure> {
    document::parse_algebra(&read(path)?).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn decompose(args: DecomposeArgs) -> CmdResult {
    let alg = load_algebra(&args.input)?;
    let level = args
        .verify_level
        .map(VerifyLevel::from)
        .unwrap_or(if alg.dim() <= 64 { VerifyLevel::Full } else { VerifyLevel::Fast });
    let semisimple = require_semisimple(alg.clone())?;
    let result = full_isomorphism(&semisimple, args.seed, args.max_split_iters)?;
    let report = verify_claim(&alg, &result.claim(), level);
    let doc = ReportDocument::new(&alg, &result, &report);
    let json = doc.to_json();
    if let Some(path) = &args.output {
        write(path, &json)?;
    }
    match args.format {
        Format::Text => {
            for (i, b) in result.blocks.iter().enumerate() {
                println!("block {i}: M_{}(D), dim D = {}", b.n, b.degree());
            }
        }
        Format::Json => {
            if args.output.is_none() {
                print!("{json}");
            }
        }
    }
    if !report.all_passed() {
        return Err(Failure::new(
            EXIT_VERIFY_FAILED,
            format!("verification failed: {}", report.failures.join("; ")),
        ));
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> CmdResult {
    let alg = load_algebra(&args.algebra)?;
    let doc = document::parse_report(&read(&args.report)?)
        .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", args.report.display())))?;
    let claim = doc.to_claim(&alg).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    let report = verify_claim(&alg, &claim, args.verify_level.into());
    if report.all_passed() {
        println!("ok: unit, multiplicative, bijective, orthogonality ({} pairs checked)", report.pairs_checked);
        Ok(())
    } else {
        let first = report.failures.first().cloned().unwrap_or_default();
        Err(Failure::new(EXIT_VERIFY_FAILED, format!("verification failed: {first}")))
    }
}

fn generate(args: GenArgs) -> CmdResult {
    if args.scramble && args.output.is_none() && args.sidecar.is_none() {
        return Err(Failure::new(EXIT_INVALID, "--scramble needs --output or --sidecar"));
    }
    let alg = match &args.kind {
        GenKind::Group { cayley, p } => {
            let table = document::parse_cayley(&read(cayley)?)
                .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", cayley.display())))?;
            group_algebra(&table, *p)?
        }
        GenKind::Matrix { n, p, ext_poly } => {
            let field = PrimeField::new(*p)?;
            let coeffs = ext_poly.clone().unwrap_or_else(|| vec![0, 1]);
            if coeffs.iter().any(|&c| c >= *p) {
                return Err(Failure::new(EXIT_INVALID, format!("--ext-poly coefficients must lie in [0, {p})")));
            }
            let poly = Poly::new(field, coeffs);
            if poly.degree().unwrap_or(0) == 0 {
                return Err(Failure::new(EXIT_INVALID, "--ext-poly must have positive degree"));
            }
            matrix_algebra_over_extension(*n, *p, &poly.monic())?.presentation
        }
        GenKind::Sum { paths } => {
            let parts = paths.iter().map(|p| load_algebra(p)).collect::<std::result::Result<Vec<_>, _>>()?;
            direct_sum(&parts)?
        }
    };
    let (alg, basis) = if args.scramble {
        let (a, s) = scramble(&alg, args.seed)?;
        (a, Some(s))
    } else {
        (alg, None)
    };
    let json = document::to_json(&AlgebraDocument::from_presentation(&alg));
    match &args.output {
        Some(path) => write(path, &json)?,
        None => print!("{json}"),
    }
    if let Some(s) = basis {
        let sidecar = match (&args.sidecar, &args.output) {
            (Some(path), _) => path.clone(),
            (None, Some(out)) => {
                let mut name = out.as_os_str().to_owned();
                name.push(".basis.json");
                PathBuf::from(name)
            }
            (None, None) => unreachable!(),
        };
        let doc = ScrambleDocument { p: alg.modulus(), dim: alg.dim(), seed: args.seed, matrix: s.to_rows() };
        write(&sidecar, &document::to_json(&doc))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => generate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
