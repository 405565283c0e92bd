//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::certify::{
    certify, classify, engel_certificate, Certificate, CertifyError, Classification,
    SearchConfig, Status,
};
use crate::freegroup::{parse, Word};
use crate::metabelian::{derived_class, fox_derivatives};
use crate::selftest::{self, SelftestOptions};
use crate::witness::{haar_random_su, parse_matrix, witness, write_matrix, WitnessError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INAPPLICABLE: i32 = 3;
pub const EXIT_RESOURCE_CAP: i32 = 4;
pub const EXIT_NOT_CERTIFIED: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "wordmap", version, about = "Surjectivity certificates and witnesses for word maps on SU(n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a word: outside F', in F' \ F'', or in F''.
    Classify { word: String },
    /// Search a basis with nonzero polynomial and emit a certificate.
    Certify(CertifyArgs),
    /// Build (u, v) with w(u, v) = g for a target g in SU(n).
    Witness(WitnessArgs),
    /// Certificate for the Engel word e_k.
    Engel {
        k: i64,
        /// Write the certificate JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in consistency checks.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    #[arg(long, default_value_t = 16)]
    max_q: i64,
    #[arg(long, default_value_t = 3)]
    max_depth: usize,
    #[arg(long, default_value_t = 512)]
    hard_cap_q: i64,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig, String> {
        if self.max_q < 1 || self.max_depth < 1 || self.hard_cap_q < 1 {
            return Err("--max-q, --max-depth and --hard-cap-q must be positive".into());
        }
        Ok(SearchConfig {
            max_q: self.max_q,
            max_depth: self.max_depth,
            hard_cap_q: self.hard_cap_q,
        })
    }
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(required_unless_present = "engel", conflicts_with = "engel")]
    word: Option<String>,
    #[arg(long)]
    engel: Option<i64>,
    #[command(flatten)]
    search: SearchArgs,
    /// Write the certificate JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("target_source").required(true).args(["target", "random"]))]
struct WitnessArgs {
    /// A word, or the path of a certificate JSON file.
    input: String,
    #[arg(long)]
    n: usize,
    /// Target matrix file.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Use a Haar-random target drawn from --seed.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Directory receiving u.mat and v.mat.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Symbolic suites only.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn check_tol(tol: f64) -> Result<(), String> {
    if tol > 0.0 && tol < 1e-2 {
        Ok(())
    } else {
        Err(format!("--tol must lie in (0, 1e-2), got {tol}"))
    }
}

/// Failure carrying its exit code.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Exit {
            code,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Exit::new(EXIT_USAGE, message)
    }
}

impl From<CertifyError> for Exit {
    fn from(e: CertifyError) -> Self {
        let code = match e {
            CertifyError::Inapplicable(_) => EXIT_INAPPLICABLE,
            CertifyError::ResourceCap { .. } => EXIT_RESOURCE_CAP,
            CertifyError::BadEngelIndex { .. }
            | CertifyError::Invalid(_)
            | CertifyError::Json(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Exit::new(code, e.to_string())
    }
}

impl From<WitnessError> for Exit {
    fn from(e: WitnessError) -> Self {
        let code = match e {
            WitnessError::NotCertified { .. } => EXIT_NOT_CERTIFIED,
            WitnessError::Inapplicable => EXIT_INAPPLICABLE,
            WitnessError::MatrixFormat { .. }
            | WitnessError::NotSquare { .. }
            | WitnessError::NotUnitary { .. }
            | WitnessError::Determinant { .. }
            | WitnessError::DimensionMismatch { .. }
            | WitnessError::DimensionTooSmall { .. } => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Exit::new(code, e.to_string())
    }
}

fn parse_word(text: &str) -> Result<Word, Exit> {
    parse(text).map_err(|e| Exit::usage(format!("cannot parse word {text:?}: {e}")))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Exit> {
    fs::write(path, contents)
        .map_err(|e| Exit::new(EXIT_FAILURE, format!("cannot write {}: {e}", path.display())))
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Classify { word } => cmd_classify(&word),
        Command::Certify(args) => cmd_certify(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Engel { k, out } => engel_certificate(k)
            .map_err(Exit::from)
            .and_then(|cert| emit_certificate(cert, out.as_deref())),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match outcome {
        Ok(code) => code,
        Err(exit) => {
            eprintln!("error: {}", exit.message);
            exit.code
        }
    }
}

fn cmd_classify(text: &str) -> Result<i32, Exit> {
    let w = parse_word(text)?;
    let class = classify(&w);
    let (sa, sb) = w.exponent_sums();
    println!("word: {w}");
    println!("classification: {class}");
    println!("exponent sums: ({sa}, {sb})");
    match fox_derivatives(&w) {
        Ok((da, db)) => {
            println!("fox derivative d/da: {da}");
            println!("fox derivative d/db: {db}");
        }
        Err(e) => println!("fox derivatives: unavailable ({e})"),
    }
    if class == Classification::NotInF1 {
        println!("derived class: undefined (word is not in the commutator subgroup)");
    } else {
        match derived_class(&w) {
            Ok(c) => println!("derived class: {c}"),
            Err(e) => println!("derived class: unavailable ({e})"),
        }
    }
    if class == Classification::InF2 {
        println!("note: method inapplicable; surjectivity of this word map is an open question");
    }
    Ok(EXIT_OK)
}

fn summary(cert: &Certificate) -> String {
    let bad: Vec<String> = cert.analysis.bad_set.iter().map(u64::to_string).collect();
    format!(
        "status: {}\npolynomial: {}\nbad set: {{{}}}\nlpf bound: {}\ncertified n: {}",
        cert.status,
        cert.polynomial,
        bad.join(", "),
        cert.analysis.lpf_bound,
        cert.describe_n()
    )
}

fn emit_certificate(cert: Certificate, out: Option<&Path>) -> Result<i32, Exit> {
    let json = cert.to_json();
    match out {
        Some(path) => {
            write_file(path, &json)?;
            println!("{}", summary(&cert));
        }
        None => {
            print!("{json}");
            eprintln!("{}", summary(&cert));
        }
    }
    Ok(if cert.status == Status::Inapplicable {
        EXIT_INAPPLICABLE
    } else {
        EXIT_OK
    })
}

fn cmd_certify(args: CertifyArgs) -> Result<i32, Exit> {
    let config = args.search.config().map_err(Exit::usage)?;
    let cert = match (args.engel, &args.word) {
        (Some(k), _) => engel_certificate(k)?,
        (None, Some(text)) => certify(&parse_word(text)?, &config)?,
        (None, None) => return Err(Exit::usage("a word or --engel is required")),
    };
    emit_certificate(cert, args.out.as_deref())
}

fn load_certificate(input: &str, config: &SearchConfig) -> Result<Certificate, Exit> {
    let path = Path::new(input);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .map_err(|e| Exit::usage(format!("cannot read {input}: {e}")))?;
        let cert = Certificate::from_json(&text)
            .map_err(|e| Exit::usage(format!("{input}: {e}")))?;
        cert.verify()
            .map_err(|e| Exit::usage(format!("{input}: {e}")))?;
        Ok(cert)
    } else {
        Ok(certify(&parse_word(input)?, config)?)
    }
}

fn cmd_witness(args: WitnessArgs) -> Result<i32, Exit> {
    let config = args.search.config().map_err(Exit::usage)?;
    check_tol(args.tol).map_err(Exit::usage)?;
    if args.n < 1 {
        return Err(Exit::usage("--n must be >= 1"));
    }
    let cert = load_certificate(&args.input, &config)?;
    match cert.status {
        Status::Inapplicable => {
            return Err(Exit::new(
                EXIT_INAPPLICABLE,
                format!("{} lies in the second derived subgroup; method inapplicable", cert.word),
            ))
        }
        _ => {
            if let Some(d) = cert.analysis.bad_divisor(args.n as u64) {
                return Err(WitnessError::NotCertified {
                    n: args.n,
                    divisor: d,
                }
                .into());
            }
        }
    }
    let g = match &args.target {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Exit::usage(format!("cannot read {}: {e}", path.display())))?;
            parse_matrix(&text).map_err(|e| {
                let exit: Exit = e.into();
                Exit::new(exit.code, format!("{}: {}", path.display(), exit.message))
            })?
        }
        None => haar_random_su(args.n, args.seed),
    };
    if g.dim() != args.n {
        return Err(Exit::usage(format!(
            "target has dimension {}, but --n is {}",
            g.dim(),
            args.n
        )));
    }
    let result = witness(&cert, args.n, &g)?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)
            .map_err(|e| Exit::new(EXIT_FAILURE, format!("cannot create {}: {e}", dir.display())))?;
        write_file(&dir.join("u.mat"), &write_matrix(&result.u))?;
        write_file(&dir.join("v.mat"), &write_matrix(&result.v))?;
    }
    let ok = result.residual <= args.tol;
    println!("word: {}", cert.word);
    println!("classification: {}", cert.classification);
    println!("n: {}", args.n);
    println!("residual: {:.3e}", result.residual);
    println!("tolerance: {:.3e}", args.tol);
    println!("verdict: {}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_selftest(args: SelftestArgs) -> Result<i32, Exit> {
    check_tol(args.tol).map_err(Exit::usage)?;
    let report = selftest::run(&SelftestOptions {
        quick: args.quick,
        seed: args.seed,
        tol: args.tol,
        inject_fault: args.inject_fault,
    });
    for check in &report.checks {
        println!("{check}");
    }
    match report.first_failure() {
        None => Ok(EXIT_OK),
        Some(f) => Err(Exit::new(EXIT_FAILURE, format!("first failure: {f}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parser_accepts_documented_flags() {
        Cli::try_parse_from(["wordmap", "certify", "[a,b]", "--max-q", "4", "--max-depth", "2"]).unwrap();
        Cli::try_parse_from(["wordmap", "certify", "--engel", "3"]).unwrap();
        Cli::try_parse_from(["wordmap", "witness", "[a,b]", "--n", "5", "--random", "--seed", "7"]).unwrap();
        Cli::try_parse_from(["wordmap", "selftest", "--quick"]).unwrap();
        assert!(Cli::try_parse_from(["wordmap", "witness", "[a,b]", "--n", "5"]).is_err());
        assert!(Cli::try_parse_from(["wordmap", "certify", "[a,b]", "--engel", "2"]).is_err());
    }

    #[test]
    fn tolerance_bounds() {
        assert!(check_tol(1e-8).is_ok());
        assert!(check_tol(0.0).is_err());
        assert!(check_tol(0.5).is_err());
    }
}
