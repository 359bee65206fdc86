//! The `semialg` command line: reads matrices from files, runs a
//! decomposition, re-verifies it and prints the factors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::decomp::{bruhat, cartan_kak, iwasawa_kau, iwasawa_uak, SpectralField};
use crate::error::{Error, Result};
use crate::kostant::{hull_oracle, kostant_report, orbit_sample_check, ChamberPoint};
use crate::matrix::Matrix;
use crate::nilpotent::{bch, bch_series_terms, jacobson_morozov, jordan_type, zassenhaus};
use crate::parse::{parse_matrix, ParseScalar};
use crate::puiseux::{PuiseuxScalar, Truncation};
use crate::rootsys::{format_root, RootSystem, RootType};
use crate::scalar::{Rational, Scalar};
use crate::tower::TowerScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Field {
    Tower,
    Puiseux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "semialg", version, about = "Exact decompositions of SL_n over real closed fields")]
pub struct Cli {
    /// Scalar field of the input entries.
    #[arg(long, value_enum, default_value = "tower", global = true)]
    pub field: Field,
    /// Relative truncation order for Puiseux series.
    #[arg(long, env = "RCG_TRUNC", default_value = "8", global = true)]
    pub trunc: String,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Seed for sampling commands.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Expected matrix size; inputs of another size are rejected.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// g = k a u and g = u' a' k'
    Iwasawa { file: PathBuf },
    /// g = k1 a k2 with a in the closed chamber
    Cartan { file: PathBuf },
    /// g = b1 w b2 with w a signed permutation
    Bruhat { file: PathBuf },
    /// log(exp X exp Y) for strictly upper triangular X, Y
    Bch {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// An sl2-triple through a nilpotent matrix
    JmTriple { file: PathBuf },
    /// Kostant convexity: is a in the A-parts of K b?
    KostantCheck {
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        a: PathBuf,
        /// Number of random rotations k for the orbit sample check.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Root system, Weyl group and cone data
    Roots {
        #[arg(long = "type")]
        kind: String,
    },
}

/// Settings shared by all commands.
#[derive(Debug, Clone)]
pub struct Config {
    pub field: Field,
    pub trunc: Rational,
    pub format: Format,
    pub seed: u64,
    pub n: Option<usize>,
}

impl Config {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let trunc = crate::parse::parse_tower(&cli.trunc)
            .ok()
            .and_then(|t| t.as_rational().cloned())
            .filter(|t| t > &Rational::from_integer(0.into()))
            .ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: format!("--trunc must be a positive rational, got '{}'", cli.trunc),
            })?;
        Ok(Config {
            field: cli.field,
            trunc,
            format: cli.format,
            seed: cli.seed,
            n: cli.n,
        })
    }
}

/// Exit code of an error: 1 for parse failures, 3 for indeterminate signs,
/// 2 for every other domain failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 1,
        e if e.is_indeterminate() => 3,
        _ => 2,
    }
}

trait CliField: ParseScalar + SpectralField {
    const NAME: &'static str;
    fn precision(cfg: &Config) -> Self::Precision;
}

impl CliField for TowerScalar {
    const NAME: &'static str = "tower";
    fn precision(_cfg: &Config) -> Self::Precision {}
}

impl CliField for PuiseuxScalar {
    const NAME: &'static str = "puiseux";
    fn precision(cfg: &Config) -> Truncation {
        Truncation::new(cfg.trunc.clone())
    }
}

/// Output of one command: named blocks, rendered as text or JSON.
#[derive(Debug, Default)]
pub struct Report {
    blocks: Vec<(String, Value, String)>,
}

impl Report {
    fn matrix<S: Scalar>(&mut self, name: &str, m: &Matrix<S>) {
        self.blocks
            .push((name.to_string(), json!(m.to_strings()), m.to_string()));
    }

    fn value(&mut self, name: &str, v: Value, text: impl Into<String>) {
        self.blocks.push((name.to_string(), v, text.into()));
    }

    pub fn render(&self, command: &str, cfg: &Config) -> String {
        match cfg.format {
            Format::Json => {
                let mut obj = serde_json::Map::new();
                obj.insert("command".into(), json!(command));
                obj.insert(
                    "field".into(),
                    json!(match cfg.field {
                        Field::Tower => "tower",
                        Field::Puiseux => "puiseux",
                    }),
                );
                for (name, v, _) in &self.blocks {
                    obj.insert(name.clone(), v.clone());
                }
                serde_json::to_string_pretty(&Value::Object(obj)).expect("json") + "\n"
            }
            Format::Text => {
                let mut out = String::new();
                for (name, _, text) in &self.blocks {
                    out.push_str(name);
                    out.push_str(":\n");
                    out.push_str(text);
                    out.push_str("\n\n");
                }
                out
            }
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    })
}

fn load<S: CliField>(path: &PathBuf, cfg: &Config) -> Result<Matrix<S>> {
    let m: Matrix<S> = parse_matrix(&read(path)?, &S::precision(cfg))?;
    if let Some(n) = cfg.n {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(m)
}

fn run_field<S: CliField>(command: &Command, cfg: &Config) -> Result<Report> {
    let prec = S::precision(cfg);
    let mut r = Report::default();
    match command {
        Command::Iwasawa { file } => {
            let g: Matrix<S> = load(file, cfg)?;
            let kau = iwasawa_kau(&g, &prec)?;
            r.matrix("k", &kau.k);
            r.matrix("a", &kau.a);
            r.matrix("u", &kau.u);
            let uak = iwasawa_uak(&g, &prec)?;
            r.matrix("uak.u", &uak.u);
            r.matrix("uak.a", &uak.a);
            r.matrix("uak.k", &uak.k);
        }
        Command::Cartan { file } => {
            let g: Matrix<S> = load(file, cfg)?;
            let kak = cartan_kak(&g, &prec)?;
            r.matrix("k1", &kak.k1);
            r.matrix("a", &kak.a);
            r.matrix("k2", &kak.k2);
        }
        Command::Bruhat { file } => {
            let g: Matrix<S> = load(file, cfg)?;
            let b = bruhat(&g, &prec)?;
            r.matrix("b1", &b.b1);
            r.matrix("w", &b.w);
            r.matrix("b2", &b.b2);
        }
        Command::Bch { x, y } => {
            let x: Matrix<S> = load(x, cfg)?;
            let y: Matrix<S> = load(y, cfg)?;
            let z = bch(&x, &y)?;
            let check = crate::nilpotent::exp_nilpotent(&z)?;
            let target = crate::nilpotent::exp_nilpotent(&x)?.mul(&crate::nilpotent::exp_nilpotent(&y)?);
            if !check.agrees(&target) {
                return Err(Error::CertificationFailed("exp(Z) != exp(X) exp(Y)".into()));
            }
            r.matrix("Z", &z);
            for (d, t) in bch_series_terms(&x, &y, x.rows().max(2) - 1).iter().enumerate() {
                r.matrix(&format!("degree {}", d + 1), t);
            }
            for (i, f) in zassenhaus(&x, &y)?.iter().enumerate() {
                r.matrix(&format!("zassenhaus {}", i + 1), f);
            }
        }
        Command::JmTriple { file } => {
            let x: Matrix<S> = load(file, cfg)?;
            let t = jacobson_morozov(&x, &prec)?;
            let jt = jordan_type(&x, &prec)?;
            r.value(
                "jordan type",
                json!(jt),
                jt.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", "),
            );
            r.matrix("X", &t.x);
            r.matrix("H", &t.h);
            r.matrix("Y", &t.y);
        }
        Command::KostantCheck { b, a, samples } => {
            let b = ChamberPoint::new(load::<S>(b, cfg)?)?;
            let a = ChamberPoint::new(load::<S>(a, cfg)?)?;
            let rep = kostant_report(&a, &b)?;
            r.value("member", json!(rep.member), rep.member.to_string());
            let chars: Vec<String> = rep
                .characters
                .iter()
                .map(|w| {
                    w.iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(k, _)| format!("a{}", k + 1))
                        .collect::<Vec<_>>()
                        .join("*")
                })
                .collect();
            let lines: Vec<String> = chars
                .iter()
                .zip(&rep.slacks)
                .map(|(c, s)| format!("chi({c}): chi(b) - chi(a) = {s}"))
                .collect();
            r.value(
                "inequalities",
                json!(chars
                    .iter()
                    .zip(&rep.slacks)
                    .map(|(c, s)| json!({"character": c, "slack": s}))
                    .collect::<Vec<_>>()),
                lines.join("\n"),
            );
            if *samples > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                let rep = orbit_sample_check(&b, *samples, &mut rng, &prec)?;
                r.value(
                    "orbit samples",
                    serde_json::to_value(&rep).expect("json"),
                    format!(
                        "{} samples, {} violations, log slack in [{:.6}, {:.6}]",
                        rep.samples, rep.violations, rep.min_log_slack, rep.max_log_slack
                    ),
                );
                if rep.violations > 0 {
                    return Err(Error::CertificationFailed("orbit sample violated the inequalities".into()));
                }
            }
            if S::NAME == "tower" {
                if let Some(h) = hull_check(&a, &b) {
                    r.value("hull oracle", json!(h), h.to_string());
                }
            }
        }
        Command::Roots { .. } => unreachable!("handled without a field"),
    }
    Ok(r)
}

fn hull_check<S: Scalar>(a: &ChamberPoint<S>, b: &ChamberPoint<S>) -> Option<bool> {
    let conv = |p: &ChamberPoint<S>| -> Option<ChamberPoint<TowerScalar>> {
        let d = p
            .diagonal()
            .iter()
            .map(|x| crate::parse::parse_tower(&x.to_string()).ok())
            .collect::<Option<Vec<_>>>()?;
        ChamberPoint::from_diagonal(d).ok()
    };
    hull_oracle(&conv(a)?, &conv(b)?).ok()
}

fn roots_report(kind: &str) -> Result<Report> {
    let t: RootType = kind.parse()?;
    let sys = RootSystem::build(t)?;
    let cone = sys.cone_data();
    let weyl = sys.weyl();
    let mut r = Report::default();
    r.value("type", json!(sys.kind.to_string()), sys.kind.to_string());
    r.value("gram", json!(sys.gram), format!("{:?}", sys.gram));
    let pos: Vec<String> = sys.positive_roots.iter().map(|v| format_root(v)).collect();
    r.value("positive roots", json!(pos), pos.join("\n"));
    r.value("root count", json!(sys.roots.len()), sys.roots.len().to_string());
    r.value("weyl order", json!(weyl.order()), weyl.order().to_string());
    let gam: Vec<String> = cone.gamma.iter().map(|v| format_root(v)).collect();
    r.value("gamma", json!(gam), gam.join("\n"));
    let eta = sys.eta_plus();
    let coeffs: Vec<String> = sys.eta_plus_expansion().iter().map(|c| c.to_string()).collect();
    r.value(
        "eta plus",
        json!({"root": format_root(&eta), "gamma_coefficients": coeffs}),
        format!("{} = ({}) in gamma coordinates", format_root(&eta), coeffs.join(", ")),
    );
    Ok(r)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Iwasawa { .. } => "iwasawa",
        Command::Cartan { .. } => "cartan",
        Command::Bruhat { .. } => "bruhat",
        Command::Bch { .. } => "bch",
        Command::JmTriple { .. } => "jm-triple",
        Command::KostantCheck { .. } => "kostant-check",
        Command::Roots { .. } => "roots",
    }
}

/// Runs a parsed command line, writing the report to `out` and errors to
/// `err`; returns the process exit code.
pub fn run(cli: &Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let result = Config::from_cli(cli).and_then(|cfg| {
        let report = match (&cli.command, cfg.field) {
            (Command::Roots { kind }, _) => roots_report(kind),
            (c, Field::Tower) => run_field::<TowerScalar>(c, &cfg),
            (c, Field::Puiseux) => run_field::<PuiseuxScalar>(c, &cfg),
        }?;
        Ok(report.render(command_name(&cli.command), &cfg))
    });
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run_args<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            code
        }
    }
}
