use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ku_lattice::config::{parse_gram, Config};
use ku_lattice::expr;
use ku_lattice::functor::{image_lattice, kernel_lattice, phi_matrix, phi_star, SourceClass};
use ku_lattice::grr::euler_pairing;
use ku_lattice::k3picard::{validate_lattice, Family};
use ku_lattice::knum::{express_in_basis, mukai_vector, KnumClass, KuBasis, KuBasisName};
use ku_lattice::lift::{
    all_lifts_inequality, brute_force_lift, closed_form_lift_gm3, closed_form_lift_qds,
    expected_dimension, FanoType, ModuliKind, DEFAULT_BOX,
};
use ku_lattice::report::verify_paper;
use ku_lattice::{Error, GradedClass, VarietyKind};

#[derive(Parser)]
#[command(name = "ku-lattice", version, about = "Exact Euler-form lattices of Kuznetsov components")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    /// JSON file with extra named varieties and setups.
    #[arg(long, global = true, env = "KU_LATTICE_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GramArg {
    /// Picard Gram matrix, rows separated by `;`, e.g. `4,1;1,-2`.
    #[arg(long, allow_hyphen_values = true)]
    gram: Option<String>,
}

impl GramArg {
    fn parse(&self) -> Result<Option<Vec<Vec<i64>>>, CliError> {
        Ok(self.gram.as_deref().map(parse_gram).transpose()?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Euler pairing χ(E, F) on a variety.
    Euler {
        #[arg(long)]
        variety: String,
        #[command(flatten)]
        gram: GramArg,
        e: String,
        f: String,
    },
    /// Chern character of a class, with its Mukai or Ku coordinates when defined.
    Chern {
        #[arg(long)]
        variety: String,
        #[command(flatten)]
        gram: GramArg,
        class: String,
    },
    /// Φ_* of a class on the source of a setup.
    Phi {
        #[arg(long)]
        setup: String,
        #[command(flatten)]
        gram: GramArg,
        class: String,
    },
    /// Matrix, image and kernel of Φ_* on the source lattice.
    Image {
        #[arg(long)]
        setup: String,
        #[command(flatten)]
        gram: GramArg,
    },
    /// Closed-form lift of a Ku class to a Mukai vector.
    #[command(allow_negative_numbers = true)]
    Lift {
        #[arg(long)]
        fano: String,
        a: i64,
        b: i64,
        /// Also search for lifts within this box around the coset maximizer.
        #[arg(long = "box")]
        box_: Option<i64>,
    },
    /// Checks the inequality for every lift of a class on a setup.
    #[command(allow_negative_numbers = true)]
    LiftAll {
        #[arg(long)]
        setup: String,
        #[command(flatten)]
        gram: GramArg,
        a: i64,
        b: i64,
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        box_: i64,
    },
    /// Validates a rank-two Picard lattice of a polarized K3.
    LatticeCheck {
        #[command(flatten)]
        gram: GramArg,
        /// One of 10-x-2, 10-5-0, 10-x-4, quartic-line; inferred when omitted.
        #[arg(long)]
        family: Option<String>,
    },
    /// Expected dimension of the moduli space of a Ku class.
    #[command(allow_negative_numbers = true)]
    Dim {
        #[arg(long, value_enum)]
        basis: BasisArg,
        #[arg(long, value_enum, default_value_t = KindArg::Enriques)]
        kind: KindArg,
        a: i64,
        b: i64,
    },
    /// Recomputes every reference value and reports the result.
    VerifyPaper {
        /// Only run checks whose id contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Mu,
    Kappa,
    Lambda,
}

impl From<BasisArg> for KuBasisName {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Mu => KuBasisName::Mu,
            BasisArg::Kappa => KuBasisName::Kappa,
            BasisArg::Lambda => KuBasisName::Lambda,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Enriques,
    Cy2,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot parse class: {0}")]
    Parse(#[from] expr::ParseError),
    #[error("{0}")]
    Usage(String),
    /// A report with failing checks; already printed.
    #[error("{0} checks failed")]
    Failed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            CliError::Failed(_) => 2,
            _ => 1,
        }
    }
}

struct Output {
    json: bool,
}

impl Output {
    fn emit(&self, value: Value, text: impl FnOnce() -> String) {
        let body = if self.json {
            serde_json::to_string_pretty(&value).expect("serializable")
        } else {
            text()
        };
        // A closed pipe (e.g. `| head`) is not an error for us.
        let _ = writeln!(std::io::stdout().lock(), "{body}");
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn terms(c: &GradedClass) -> Value {
    Value::Array(c.to_terms().into_iter().map(|(n, q)| json!([n, q])).collect())
}

fn ku_basis_of(c: &GradedClass) -> Option<KuBasis> {
    let m = c.model();
    match m.kind() {
        VarietyKind::QuarticDoubleSolid => KuBasis::mu(m).ok(),
        VarietyKind::Gm3fold => KuBasis::kappa(m).ok(),
        VarietyKind::Gm4fold => KuBasis::lambda(m).ok(),
        _ => None,
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let out = Output { json: cli.json };
    match cli.command {
        Command::Euler { variety, gram, e, f } => {
            let model = config.variety(&variety, gram.parse()?)?;
            let ce = expr::evaluate(&model, &expr::parse(&e)?)?;
            let cf = expr::evaluate(&model, &expr::parse(&f)?)?;
            let chi = euler_pairing(&ce, &cf)?;
            out.emit(json!({ "variety": model.id(), "e": e, "f": f, "chi": chi.to_string() }), || {
                chi.to_string()
            });
        }
        Command::Chern { variety, gram, class } => {
            let model = config.variety(&variety, gram.parse()?)?;
            let ch = expr::evaluate(&model, &expr::parse(&class)?)?;
            let mukai = if model.is_k3() { Some(mukai_vector(&model, &ch)?) } else { None };
            let ku = match ku_basis_of(&ch) {
                Some(basis) => match express_in_basis(&basis, &ch) {
                    Ok(k) => Some(k),
                    Err(Error::NotInSpan { .. } | Error::NonIntegral { .. }) => None,
                    Err(e) => return Err(e.into()),
                },
                None => None,
            };
            out.emit(
                json!({
                    "variety": model.id(),
                    "class": class,
                    "ch": terms(&ch),
                    "mukai": mukai.as_ref().map(|m| m.coords()),
                    "ku": ku,
                }),
                || {
                    let mut s = format!("ch = {ch}");
                    if let Some(m) = &mukai {
                        s += &format!("\nmukai = {m}");
                    }
                    if let Some(k) = &ku {
                        s += &format!("\nku = {k}");
                    }
                    s
                },
            );
        }
        Command::Phi { setup, gram, class } => {
            let s = config.setup(&setup, gram.parse()?)?;
            let ch = expr::evaluate(&s.source, &expr::parse(&class)?)?;
            let v = phi_star(&s, &SourceClass::Ch(ch.clone()))?;
            out.emit(
                json!({ "setup": s.label(), "class": class, "source_ch": terms(&ch), "image": v }),
                || v.to_string(),
            );
        }
        Command::Image { setup, gram } => {
            let s = config.setup(&setup, gram.parse()?)?;
            let map = phi_matrix(&s)?;
            let img = image_lattice(&map);
            let ker = kernel_lattice(&map);
            out.emit(json!({ "map": map, "image": img, "kernel": ker }), || {
                let mut t = format!("setup {}\nsource ({})\n", map.setup, map.source_labels.join(", "));
                for row in &map.matrix {
                    t += &format!("  {row:?}\n");
                }
                t += &format!("image basis {:?}, rank {}", img.basis, img.rank);
                if let Some(i) = img.index {
                    t += &format!(", index {i}");
                }
                t += &format!("\nkernel basis {:?}\nkernel form {:?}", ker.basis, ker.gram);
                t
            });
        }
        Command::Lift { fano, a, b, box_ } => {
            let fano = FanoType::parse(&fano)?;
            let cert = match fano {
                FanoType::Qds => closed_form_lift_qds(a, b)?,
                FanoType::Gm3 => closed_form_lift_gm3(a, b)?,
            };
            let search = match box_ {
                Some(n) => {
                    let setup = match fano {
                        FanoType::Qds => config.setup("qds", Some(cert.gram.clone()))?,
                        FanoType::Gm3 => config.setup("gm3", Some(cert.gram.clone()))?,
                    };
                    Some(brute_force_lift(&phi_matrix(&setup)?, &cert.lifted, n)?)
                }
                None => None,
            };
            let mut value = to_value(&cert);
            if let Some(found) = &search {
                value["search"] = to_value(found);
            }
            out.emit(value, || {
                let mut t = format!(
                    "v = {} (lifting {})\nbranch {}{}\nlattice {:?}\nw = {}\nw^2 = {} (formula {})\nw^2 >= -2: {}\nwall inequality: {}\nall lifts ({}): {}",
                    cert.v,
                    cert.lifted,
                    cert.branch,
                    if cert.negated { ", negated" } else { "" },
                    cert.gram,
                    cert.w,
                    cert.w_square,
                    cert.formula_square,
                    cert.nonneg_ok,
                    cert.wall_ok,
                    if cert.complete { "exact" } else { "searched" },
                    cert.all_lifts_ok,
                );
                if let Some(found) = &search {
                    t += &format!("\nsearch found {} lifts with w^2 >= -2", found.len());
                    for f in found {
                        t += &format!("\n  {:?} w^2 = {}", f.w, f.w_square);
                    }
                }
                t
            });
        }
        Command::LiftAll { setup, gram, a, b, box_ } => {
            let s = config.setup(&setup, gram.parse()?)?;
            let v = KnumClass::new(s.target_basis.name, a, b);
            let report = all_lifts_inequality(&phi_matrix(&s)?, &v, box_)?;
            out.emit(to_value(&report), || {
                format!(
                    "v = {}\nmax w^2 = {} at {:?} ({})\nbound: w^2 + 2 < {}\nholds: {}",
                    report.v,
                    report.max_w_square,
                    report.maximizer,
                    if report.complete { "exact" } else { "over the searched box" },
                    report.bound,
                    report.holds
                )
            });
        }
        Command::LatticeCheck { gram, family } => {
            let g = gram.parse()?.ok_or_else(|| CliError::Usage("--gram is required".into()))?;
            if g.len() != 2 || g.iter().any(|r| r.len() != 2) {
                return Err(Error::BadGram(format!("expected a 2x2 matrix, got {g:?}")).into());
            }
            let g = [[g[0][0], g[0][1]], [g[1][0], g[1][1]]];
            let family = match family {
                Some(f) => Family::parse(&f)?,
                None => Family::infer(&g).ok_or_else(|| {
                    CliError::Usage(format!("cannot infer a family for {g:?}; pass --family"))
                })?,
            };
            let r = validate_lattice(&g, family)?;
            out.emit(to_value(&r), || {
                format!(
                    "gram {:?} ({:?})\ndet {} (hyperbolic: {})\nH-orthogonal generator {:?}, square {}\n(-2)-class orthogonal to H: {}\nfamily condition: {} [{}]\nverdict: {}",
                    r.gram,
                    r.family,
                    r.det,
                    r.hyperbolic_ok,
                    r.orthogonal_generator,
                    r.generator_square,
                    r.minus_two_orthogonal,
                    r.family_condition_ok,
                    r.family_condition,
                    if r.verdict { "pass" } else { "fail" }
                )
            });
        }
        Command::Dim { basis, kind, a, b } => {
            let v = KnumClass::new(basis.into(), a, b);
            let kind = match kind {
                KindArg::Enriques => ModuliKind::Enriques,
                KindArg::Cy2 => ModuliKind::Cy2,
            };
            let d = expected_dimension(&v, kind);
            out.emit(json!({ "v": v, "kind": kind, "dimension": d }), || d.to_string());
        }
        Command::VerifyPaper { filter } => {
            let report = verify_paper(filter.as_deref());
            out.emit(to_value(&report), || {
                let mut t = String::new();
                for c in &report.checks {
                    t += &format!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.id);
                    if !c.pass {
                        t += &format!(" (expected {}, computed {})", c.expected, c.computed);
                    }
                    t.push('\n');
                }
                t + &format!("{} passed, {} failed", report.passed, report.failed)
            });
            if !report.all_passed() {
                return Err(CliError::Failed(report.failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(n)) => {
            eprintln!("error: {n} checks failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
