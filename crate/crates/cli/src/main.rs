use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use acbm_core::family::{build_family, FamilySpec};
use acbm_core::manifest::{emit_manifold, parse_manifold};
use acbm_core::report::{build_report, Report, Sections};
use acbm_core::scalar::{parse_rational, parse_scalar, Rational, Vars};
use acbm_core::structure::AcbmManifold;
use acbm_core::verify::{verify_family, DEFAULT_GRID};
use clap::{Parser, Subcommand};

/// Almost contact B-metric structures on Lie groups.
#[derive(Parser)]
#[command(name = "acbm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structure axioms and the Jacobi identity.
    Validate {
        /// Manifold file, `-` for stdin.
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide membership in F0, F4, F5 and F4+F5.
    Classify {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Levi-Civita connection, F, Lee forms, norms and the phiB-connection.
    Connection {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Curvature, Ricci data, sectional curvatures and predicates.
    Curvature {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Everything in one document.
    Report {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Bianchi type at a parameter point.
    Bianchi {
        #[arg(default_value = "-")]
        file: PathBuf,
        /// Parameter values, e.g. `a=1,b=-1/2`.
        #[arg(long, default_value = "")]
        at: String,
    },
    /// Build the two-parameter family and print its manifold file.
    Family {
        /// Value of `a`: a rational or a polynomial.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Write the file here instead of stdout.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Reproduce every result for the family.
    Verify {
        /// Bianchi grid half-width.
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: i64,
        #[arg(long)]
        json: bool,
    },
}

const OK: u8 = 0;
const CHECK_FAILED: u8 = 1;
const INPUT_ERROR: u8 = 2;

struct InputError(String);

fn read_input(path: &PathBuf) -> Result<String, InputError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| InputError(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }
}

fn load(path: &PathBuf) -> Result<AcbmManifold, InputError> {
    let text = read_input(path)?;
    parse_manifold(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_point(text: &str) -> Result<BTreeMap<String, Rational>, InputError> {
    let mut point = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) =
            part.split_once('=').ok_or_else(|| InputError(format!("--at: expected name=value, got `{part}`")))?;
        let value = parse_rational(value.trim()).map_err(|e| InputError(format!("--at {name}: {e}")))?;
        if point.insert(name.trim().to_string(), value).is_some() {
            return Err(InputError(format!("--at: `{}` given twice", name.trim())));
        }
    }
    Ok(point)
}

fn family_spec(a: Option<&str>, b: Option<&str>) -> Result<FamilySpec, InputError> {
    let (a, b) = (a.unwrap_or("a"), b.unwrap_or("b"));
    let mut names = BTreeSet::new();
    for text in [a, b] {
        let ids = acbm_core::scalar::identifiers(text).map_err(|e| InputError(format!("`{text}`: {e}")))?;
        names.extend(ids);
    }
    let vars = Vars::new(names);
    let parse = |t: &str| parse_scalar(t, &vars).map_err(|e| InputError(format!("`{t}`: {e}")));
    Ok(FamilySpec { a: parse(a)?, b: parse(b)? })
}

fn print_report(r: &Report, json: bool) {
    let mut out = io::stdout().lock();
    let text = if json { r.to_json() + "\n" } else { r.render_text() };
    let _ = out.write_all(text.as_bytes());
}

fn run(cli: Cli) -> Result<u8, InputError> {
    let only = |f: fn(&mut Sections)| {
        let mut s = Sections::default();
        f(&mut s);
        s
    };
    match cli.command {
        Command::Validate { file, json } => {
            let m = load(&file)?;
            let r = build_report(&m, only(|s| s.structure = true));
            print_report(&r, json);
            Ok(if r.structure.as_ref().is_some_and(|s| s.ok()) { OK } else { CHECK_FAILED })
        }
        Command::Classify { file, json } => {
            let m = load(&file)?;
            let r = build_report(&m, only(|s| s.class = true));
            print_report(&r, json);
            Ok(if matches!(r.class, Some(Ok(_))) { OK } else { CHECK_FAILED })
        }
        Command::Connection { file, json } => {
            let r = build_report(&load(&file)?, only(|s| s.connection = true));
            print_report(&r, json);
            Ok(OK)
        }
        Command::Curvature { file, json } => {
            let r = build_report(&load(&file)?, only(|s| s.curvature = true));
            print_report(&r, json);
            Ok(OK)
        }
        Command::Report { file, json } => {
            let r = build_report(&load(&file)?, Sections::ALL);
            print_report(&r, json);
            Ok(if r.structure.as_ref().is_some_and(|s| s.ok()) { OK } else { CHECK_FAILED })
        }
        Command::Bianchi { file, at } => {
            let m = load(&file)?;
            let point = parse_point(&at)?;
            let t = m.algebra().bianchi_classify(&point).map_err(|e| InputError(e.to_string()))?;
            println!("{t}");
            Ok(OK)
        }
        Command::Family { a, b, emit } => {
            let spec = family_spec(a.as_deref(), b.as_deref())?;
            let text = emit_manifold(&build_family(&spec)) + "\n";
            match emit {
                Some(path) if path.as_os_str() != "-" => {
                    std::fs::write(&path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                }
                _ => {
                    let _ = io::stdout().lock().write_all(text.as_bytes());
                }
            }
            Ok(OK)
        }
        Command::Verify { grid, json } => {
            if !(0..=50).contains(&grid) {
                return Err(InputError(format!("--grid must be in 0..=50, got {grid}")));
            }
            let r = verify_family(&FamilySpec::symbolic(), grid);
            let text = if json {
                serde_json::to_string_pretty(&r).expect("plain data serializes") + "\n"
            } else {
                r.render_text()
            };
            let _ = io::stdout().lock().write_all(text.as_bytes());
            Ok(if r.passed() { OK } else { CHECK_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
