use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use prenichols::bichar::IntVec;
use prenichols::catalog::{self, Br25};
use prenichols::document::InputDocument;
use prenichols::freealg::FreeElem;
use prenichols::hilbert::{nichols_series, pre_nichols_series, quotient_series, Series};
use prenichols::pbw::PbwSpec;
use prenichols::quotient::{IdealKind, QuotientCaps, QuotientView, DEFAULT_WORD_CAP};
use prenichols::roots::{analyze, reflect_object, RootCaps, RootSystemReport};
use prenichols::verify::{self, CheckReport, Prepared};
use prenichols::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INFINITE: u8 = 3;
const EXIT_CAP: u8 = 4;

/// Without --k or --root, left-coproduct covers Cartan roots with N beta of at most this total degree.
const LEFT_COPRODUCT_DEFAULT_DEGREE: i64 = 10;

#[derive(Parser)]
#[command(
    name = "prenichols",
    version,
    about = "Root systems, Hilbert series and identity checks for diagonal braidings"
)]
struct Cli {
    /// Maximum number of words in one multidegree slice.
    #[arg(long, global = true)]
    cap_words: Option<u128>,
    /// Maximum length of a Weyl groupoid word.
    #[arg(long, global = true)]
    cap_length: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan matrix, positive roots, Cartan roots and GK dimensions.
    Analyze {
        input: String,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        max_objects: Option<usize>,
    },
    /// Multigraded Hilbert series from the root data, optionally against quotient dimensions.
    Hilbert {
        input: String,
        #[arg(long)]
        degree: i64,
        #[arg(long, value_enum)]
        algebra: AlgebraKind,
        #[arg(long)]
        oracle: bool,
    },
    /// Run one identity check.
    Verify {
        #[arg(value_enum)]
        check: CheckName,
        input: String,
        #[command(flatten)]
        args: CheckArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Apply the reflection at vertex k and print the resulting input document.
    Reflect {
        input: String,
        #[arg(short = 'i')]
        vertex: usize,
    },
    /// Built-in examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraKind {
    Nichols,
    Prenichols,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckName {
    PowerCoproduct,
    AdjointCoproducts,
    QcommutePowers,
    DerivationsVanish,
    SymmetricCharacter,
    LeftCoproduct,
    SuperA,
    Straightening,
    PbwCount,
    #[value(name = "frakR-generators")]
    FrakRGenerators,
    Br25Basic,
    Br25Extended,
}

/// Vertex and root indices are 1-based.
#[derive(clap::Args)]
struct CheckArgs {
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Root index in the convex order.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Root as comma-separated coefficients.
    #[arg(long)]
    root: Option<String>,
    /// Element text multiplied against the root vector power.
    #[arg(long)]
    probe: Option<String>,
    #[arg(long)]
    degree: Option<i64>,
    #[arg(long)]
    rank_degree: Option<i64>,
    #[arg(long)]
    power: Option<usize>,
}

struct Input {
    doc: InputDocument,
    hash: String,
}

fn load(input: &str) -> Result<Input, Error> {
    let (text, doc) = if Path::new(input).is_file() {
        let text = fs::read_to_string(input).map_err(|e| Error::Parse(format!("{input}: {e}")))?;
        let doc = InputDocument::from_json(&text)?;
        (text, doc)
    } else {
        let doc = InputDocument::from_catalog(&catalog::get(input)?);
        (doc.to_json_pretty(), doc)
    };
    Ok(Input {
        doc,
        hash: hex::encode(Sha256::digest(text.as_bytes())),
    })
}

fn root_caps(cli: &Cli, doc: &InputDocument, max_objects: Option<usize>) -> RootCaps {
    let mut caps = RootCaps::default();
    let file = doc.caps.clone().unwrap_or_default();
    if let Some(l) = cli.cap_length.or(file.length) {
        caps.word_length = l;
    }
    if let Some(o) = max_objects.or(file.objects) {
        caps.objects = o;
    }
    caps
}

fn quotient_caps(cli: &Cli, doc: &InputDocument) -> QuotientCaps {
    QuotientCaps {
        words: cli
            .cap_words
            .or(doc.caps.as_ref().and_then(|c| c.words))
            .unwrap_or(DEFAULT_WORD_CAP),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotFiniteType(_) => EXIT_INFINITE,
        Error::CapExceeded(_) => EXIT_CAP,
        _ => EXIT_PARSE,
    }
}

fn write_json(path: &Path, v: &Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(v).expect("json serializes");
    fs::write(path, text + "\n")
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Analyze {
            input,
            json,
            max_objects,
        } => {
            let input = load(input)?;
            let b = input.doc.braiding()?;
            let report = analyze(&b, &root_caps(cli, &input.doc, *max_objects))?;
            let v = report.to_json();
            if let Some(p) = json {
                write_json(p, &v)?;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("json serializes")
            );
            Ok(0)
        }
        Command::Hilbert {
            input,
            degree,
            algebra,
            oracle,
        } => hilbert(cli, input, *degree, *algebra, *oracle),
        Command::Verify {
            check,
            input,
            args,
            json,
        } => {
            let input = load(input)?;
            let report = run_check(cli, *check, &input.doc, args)?;
            let mut v = json!({
                "tool_version": env!("CARGO_PKG_VERSION"),
                "input_hash": input.hash,
            });
            for (k, x) in report.to_json().as_object().expect("report is an object") {
                v[k] = x.clone();
            }
            if let Some(p) = json {
                write_json(p, &v)?;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("json serializes")
            );
            eprintln!(
                "{} {} {}",
                if report.passed { "PASS" } else { "FAIL" },
                report.check,
                report.label
            );
            if let Some(w) = &report.witness {
                eprintln!("witness: {w}");
            }
            Ok(if report.passed { 0 } else { EXIT_FAIL })
        }
        Command::Reflect { input, vertex } => {
            let input = load(input)?;
            let b = input.doc.braiding()?;
            if *vertex == 0 || *vertex > b.theta() {
                return Err(Error::IndexOutOfRange {
                    index: *vertex,
                    size: b.theta(),
                });
            }
            let caps = root_caps(cli, &input.doc, None);
            let y = reflect_object(&b, vertex - 1, caps.cartan_search)?;
            println!("{}", InputDocument::from_braiding(&y).to_json_pretty());
            Ok(0)
        }
        Command::Catalog { action } => {
            match action {
                CatalogAction::List => {
                    for name in catalog::list() {
                        let e = catalog::get(&name)?;
                        println!("{name}\t{}", e.description);
                    }
                }
                CatalogAction::Show { name } => {
                    println!(
                        "{}",
                        InputDocument::from_catalog(&catalog::get(name)?).to_json_pretty()
                    );
                }
            }
            Ok(0)
        }
    }
}

fn hilbert(
    cli: &Cli,
    input: &str,
    degree: i64,
    kind: AlgebraKind,
    oracle: bool,
) -> Result<u8, Error> {
    let input = load(input)?;
    let doc = &input.doc;
    let a = doc.algebra()?;
    let report = analyze(a.braiding(), &root_caps(cli, doc, None))?;
    let formula = match kind {
        AlgebraKind::Nichols => nichols_series(&report, degree),
        AlgebraKind::Prenichols => pre_nichols_series(&report, degree),
    };
    let computed: Option<Series> = if oracle {
        let kind_ideal = match kind {
            AlgebraKind::Nichols => IdealKind::Nichols,
            AlgebraKind::Prenichols => {
                IdealKind::Relations(doc.relation_set(&a)?.ok_or_else(|| {
                    Error::InvalidInput("the pre-Nichols oracle needs relations".into())
                })?)
            }
        };
        let q = QuotientView::new(a.clone(), kind_ideal, quotient_caps(cli, doc))?;
        Some(quotient_series(&q, degree)?)
    } else {
        None
    };
    let mut mismatches = 0;
    for d in prenichols::quotient::degrees_up_to(a.theta(), degree) {
        let f = formula.coefficient(&d);
        match &computed {
            Some(c) => {
                let x = c.coefficient(&d);
                let mark = if x == f { "" } else { "  MISMATCH" };
                if x != f {
                    mismatches += 1;
                }
                println!("{d}\t{f}\t{x}{mark}");
            }
            None => println!("{d}\t{f}"),
        }
    }
    if computed.is_some() {
        eprintln!("{mismatches} mismatching multidegrees");
    }
    Ok(if mismatches == 0 { 0 } else { EXIT_FAIL })
}

fn one_based(x: Option<usize>, name: &str, default: usize, size: usize) -> Result<usize, Error> {
    let v = x.unwrap_or(default);
    if v == 0 || v > size {
        return Err(Error::InvalidInput(format!(
            "--{name} must lie in 1..={size}"
        )));
    }
    Ok(v - 1)
}

fn parse_root(text: &str, theta: usize) -> Result<IntVec, Error> {
    let v = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("root {text:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != theta {
        return Err(Error::Parse(format!(
            "root {text:?} needs {theta} coefficients"
        )));
    }
    Ok(IntVec(v))
}

/// Root index from --k or --root.
fn pick_root(spec: &PbwSpec, args: &CheckArgs, report: &RootSystemReport) -> Result<usize, Error> {
    if let Some(r) = &args.root {
        let beta = parse_root(r, report.theta())?;
        return spec
            .index_of(&beta)
            .ok_or_else(|| Error::InvalidInput(format!("{r} is not a positive root")));
    }
    one_based(args.k, "k", 1, spec.roots.len())
}

fn root_height(report: &RootSystemReport, beta: &IntVec) -> Result<usize, Error> {
    report
        .height_of(beta)
        .and_then(|h| h.finite())
        .map(|h| h as usize)
        .ok_or_else(|| Error::NotFiniteType(format!("root {beta} has infinite height")))
}

/// The br25 entry matching a document: variant from the name, off-diagonal split from the matrix.
fn br25_entry(doc: &InputDocument) -> Result<(Br25, catalog::CatalogEntry), Error> {
    let label = doc.name.clone().unwrap_or_default();
    let variant = if label.starts_with("br25-V") {
        Br25::V
    } else if label.starts_with("br25-W") {
        Br25::W
    } else {
        return Err(Error::InvalidInput(format!(
            "{label:?} is not a br25-V or br25-W document"
        )));
    };
    let b = doc.braiding()?;
    if b.theta() != 2 {
        return Err(Error::InvalidInput("br25 documents have rank 2".into()));
    }
    let entry = catalog::br25_split(variant, (b.entry(0, 1).clone(), b.entry(1, 0).clone()))?;
    if entry.braiding != b {
        return Err(Error::InvalidInput(format!(
            "matrix does not match {}",
            entry.name
        )));
    }
    Ok((variant, entry))
}

fn combine(check: &str, label: &str, parts: Vec<CheckReport>) -> CheckReport {
    let mut out = CheckReport {
        check: check.into(),
        label: label.into(),
        params: json!({}),
        passed: parts.iter().all(|r| r.passed),
        data: Value::Array(parts.iter().map(|r| r.to_json()).collect()),
        witness: parts.iter().find_map(|r| r.witness.clone()),
        runtime_ms: parts.iter().map(|r| r.runtime_ms).sum(),
    };
    if parts.len() == 1 {
        out = parts.into_iter().next().expect("one part");
    }
    out
}

fn run_check(
    cli: &Cli,
    check: CheckName,
    doc: &InputDocument,
    args: &CheckArgs,
) -> Result<CheckReport, Error> {
    let rc = root_caps(cli, doc, None);
    let qc = quotient_caps(cli, doc);
    let label = doc.name.clone().unwrap_or_else(|| "input".into());
    match check {
        CheckName::Br25Basic => {
            let (v, entry) = br25_entry(doc)?;
            return verify::check_br25_basic(v, &entry);
        }
        CheckName::Br25Extended => {
            let (v, entry) = br25_entry(doc)?;
            return verify::check_br25_extended(v, &entry, qc.words);
        }
        _ => {}
    }
    let a = doc.algebra()?;
    let theta = a.theta();
    match check {
        CheckName::PowerCoproduct => {
            let i = one_based(args.i, "i", 1, theta)?;
            let n = args.n.unwrap_or(2);
            return verify::check_power_coproduct(&a, &label, i, n);
        }
        CheckName::AdjointCoproducts | CheckName::FrakRGenerators => {
            let i = one_based(args.i, "i", 1, theta)?;
            let j = one_based(args.j, "j", if theta > 1 { 2 } else { 1 }, theta)?;
            return if matches!(check, CheckName::AdjointCoproducts) {
                verify::check_adjoint_coproducts(&a, &label, i, j, args.n.unwrap_or(2))
            } else {
                verify::check_frak_r_generator(&a, &label, i, j, args.m.or(args.n).unwrap_or(2))
            };
        }
        _ => {}
    }
    let p = Prepared::from_document(doc, &rc, qc)?;
    match check {
        CheckName::SymmetricCharacter => verify::check_symmetric_character(&p.report, &label),
        CheckName::QcommutePowers | CheckName::DerivationsVanish => {
            let (q, spec) = p.pbw()?;
            let k = pick_root(spec, args, &p.report)?;
            let x = &spec.vectors[k];
            let n = match args.n {
                Some(n) => n,
                None => root_height(&p.report, &spec.roots[k])?,
            };
            if matches!(check, CheckName::DerivationsVanish) {
                return verify::check_derivations_vanish(q, &label, x, n);
            }
            let probes: Vec<FreeElem> = match &args.probe {
                Some(t) => vec![p.algebra.parse(t)?],
                None => (0..theta).map(|i| p.algebra.letter(i)).collect(),
            };
            let parts = probes
                .iter()
                .map(|y| verify::check_qcommute_powers(q, &label, x, n, y))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(combine("qcommute-powers", &label, parts))
        }
        CheckName::LeftCoproduct => {
            let (q, spec) = p.pbw()?;
            let ks: Vec<usize> = if args.k.is_some() || args.root.is_some() {
                vec![pick_root(spec, args, &p.report)?]
            } else {
                (0..spec.roots.len())
                    .filter(|&k| spec.cartan[k])
                    .filter(|&k| {
                        let n = spec.heights[k].finite().unwrap_or(u64::MAX) as i64;
                        spec.roots[k].total().saturating_mul(n) <= LEFT_COPRODUCT_DEFAULT_DEGREE
                    })
                    .collect()
            };
            let parts = ks
                .into_iter()
                .map(|k| verify::check_left_coproduct(q, spec, &label, k))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(combine("left-coproduct", &label, parts))
        }
        CheckName::SuperA => {
            let q = p.quotient()?;
            let j = one_based(args.j, "j", 1, theta)?;
            let k = one_based(args.k, "k", theta, theta)?;
            verify::check_super_a(q, &p.report, &label, j, k, args.power.or(args.n))
        }
        CheckName::Straightening => {
            let (q, spec) = p.pbw()?;
            let m = spec.roots.len();
            let pairs: Vec<(usize, usize)> = match (args.k, args.l) {
                (Some(_), Some(_)) => {
                    vec![(one_based(args.k, "k", 1, m)?, one_based(args.l, "l", 1, m)?)]
                }
                _ => (0..m)
                    .flat_map(|k| (k + 1..m).map(move |l| (k, l)))
                    .collect(),
            };
            let parts = pairs
                .into_iter()
                .map(|(k, l)| verify::check_straightening(q, spec, &label, k, l))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(combine("straightening", &label, parts))
        }
        CheckName::PbwCount => {
            let (q, spec) = p.pbw()?;
            let d = args.degree.unwrap_or(6);
            verify::check_pbw_count(q, spec, &label, d, args.rank_degree.unwrap_or(d.min(6)))
        }
        _ => unreachable!("handled above"),
    }
}
