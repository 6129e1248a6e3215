use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use arithmirror::borcherds::{self, QrsSeries};
use arithmirror::jacobi::{self, QrSeries};
use arithmirror::lattice::int_to_json;
use arithmirror::mirror::{self, FamilyEntry};
use arithmirror::reflect::{self, VinbergBudget};
use arithmirror::{dsl, BigInt, Lattice, Vector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const ORDER_ENV: &str = "ARITHMIRROR_ORDER";

#[derive(Parser)]
#[command(name = "arithmirror", version, about = "Exact lattice, reflectivity and Borcherds-product computations")]
struct Cli {
    /// Write data to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit the generator/version header from data output.
    #[arg(long, global = true)]
    no_header: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice invariants and isotropic quotients.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// 2-reflectivity classification.
    #[command(subcommand)]
    Reflective(ReflectiveCmd),
    /// Vinberg's algorithm for (−2)-roots.
    #[command(subcommand)]
    Vinberg(VinbergCmd),
    /// Fourier coefficients of the weak Jacobi form φ₀,₃.
    Phi03(Phi03Args),
    /// Sum and product expansions of Δ₁.
    #[command(subcommand)]
    Delta1(Delta1Cmd),
    /// Mirror quotients S = c⊥/Zc.
    #[command(subcommand)]
    Mirror(MirrorCmd),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct LatticeInput {
    /// Lattice expression, e.g. "2U(12)+<-2>".
    #[arg(long)]
    lattice: Option<String>,
    /// JSON file holding {"gram": [[...], ...]}.
    #[arg(long)]
    lattice_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum LatticeCmd {
    Info {
        #[command(flatten)]
        input: LatticeInput,
        #[arg(long, value_enum, default_value_t = InfoFormat::Json)]
        format: InfoFormat,
    },
    Quotient {
        #[command(flatten)]
        input: LatticeInput,
        /// Primitive isotropic vector, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        cusp: String,
    },
}

#[derive(Subcommand)]
enum ReflectiveCmd {
    Classify {
        #[command(flatten)]
        input: LatticeInput,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 40)]
    max_height: u64,
    #[arg(long, default_value_t = 64)]
    max_roots: usize,
}

#[derive(Subcommand)]
enum VinbergCmd {
    Run {
        #[command(flatten)]
        input: LatticeInput,
        /// Controlling vector with positive norm; chosen automatically if absent.
        #[arg(long, allow_hyphen_values = true)]
        v0: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = ChamberFormat::Json)]
        format: ChamberFormat,
    },
}

#[derive(Args)]
struct Phi03Args {
    /// Largest q-exponent.
    #[arg(long, env = ORDER_ENV, default_value_t = 10)]
    order: u32,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    format: TableFormat,
    #[arg(long, value_enum, default_value_t = Route::Product)]
    route: Route,
}

#[derive(Subcommand)]
enum Delta1Cmd {
    Verify {
        /// Weight bound n + m in units of 1/6.
        #[arg(long, env = ORDER_ENV, default_value_t = 26)]
        order: i64,
        /// Also write the full report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    Dump {
        #[arg(long, env = ORDER_ENV, default_value_t = 26)]
        order: i64,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
        #[arg(long, value_enum, default_value_t = Side::Sum)]
        side: Side,
    },
}

#[derive(Subcommand)]
enum MirrorCmd {
    Quotient {
        #[command(flatten)]
        input: LatticeInput,
        /// Primitive isotropic vector of T, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        cusp: String,
        /// Expected quotient, checked by invariants and a bounded isometry search.
        #[arg(long)]
        expected: Option<String>,
    },
    VerifyFamilies {
        /// Catalog file; defaults to the built-in one.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InfoFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChamberFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Product,
    Quotient,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Sum,
    Product,
}

/// Bad input; exit code 2.
enum Failure {
    Usage(String),
}

impl From<arithmirror::Error> for Failure {
    fn from(e: arithmirror::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Output {
    text: String,
    mismatch: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, mismatch: false }
    }
}

fn read_lattice(input: &LatticeInput) -> Result<Lattice, Failure> {
    match (&input.lattice, &input.lattice_file) {
        (Some(expr), None) => dsl::parse_lattice(expr).map_err(|e| Failure::Usage(e.to_string())),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(Lattice::from_json(&value)?)
        }
        _ => Err(Failure::Usage("give exactly one of --lattice, --lattice-file".into())),
    }
}

fn parse_vector(text: &str) -> Result<Vector, Failure> {
    let coords = text
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|s| s.trim().parse::<BigInt>().map_err(|_| Failure::Usage(format!("bad coordinate {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Vector::new(coords))
}

fn with_header(mut v: Value, no_header: bool) -> Value {
    if !no_header {
        v["generator"] = json!(concat!("arithmirror ", env!("CARGO_PKG_VERSION")));
    }
    v
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn lattice_info(l: &Lattice) -> Value {
    let sig = l.signature();
    let mut v = json!({
        "lattice": l.to_json(),
        "rank": l.rank(),
        "signature": { "n_plus": sig.n_plus, "n_minus": sig.n_minus, "n_zero": sig.n_zero },
        "determinant": int_to_json(&l.determinant()),
        "discriminant": Value::Null,
    });
    if let Ok(d) = l.discriminant_invariants() {
        v["discriminant"] = json!({
            "group_order": int_to_json(&d.group_order()),
            "elementary_divisors": d.elementary_divisors.iter().map(int_to_json).collect::<Vec<_>>(),
            "generator_values": d.generators.iter().map(|g| g.value.to_string()).collect::<Vec<_>>(),
        });
    }
    v
}

fn info_text(l: &Lattice) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "lattice     {}", l.label().unwrap_or("-"));
    let _ = writeln!(s, "rank        {}", l.rank());
    let _ = writeln!(s, "signature   {}", l.signature());
    let _ = writeln!(s, "determinant {}", l.determinant());
    if let Ok(d) = l.discriminant_invariants() {
        let divs: Vec<String> = d.elementary_divisors.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "discriminant group order {} divisors [{}]", d.group_order(), divs.join(", "));
    }
    s
}

fn csv_table(header: &[&str], rows: impl Iterator<Item = String>, units: &str, no_header: bool) -> String {
    let mut s = String::new();
    if !no_header {
        let _ = writeln!(s, "# arithmirror {}", env!("CARGO_PKG_VERSION"));
    }
    let _ = writeln!(s, "# units: {units}");
    let _ = writeln!(s, "{}", header.join(","));
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

fn phi03_output(series: &QrSeries, format: TableFormat, no_header: bool) -> String {
    match format {
        TableFormat::Csv => csv_table(
            &["n", "l", "coeff"],
            series.rows().into_iter().map(|(n, l, c)| format!("{n},{l},{c}")),
            "q^n r^l",
            no_header,
        ),
        TableFormat::Json => {
            let rows: Vec<Value> = series
                .rows()
                .into_iter()
                .map(|(n, l, c)| json!({ "n": n, "l": l, "coeff": int_to_json(&c) }))
                .collect();
            to_json_text(&with_header(json!({ "order": series.order(), "rows": rows }), no_header))
        }
    }
}

fn delta1_output(series: &QrsSeries, format: TableFormat, no_header: bool) -> String {
    match format {
        TableFormat::Csv => csv_table(
            &["n", "l", "m", "coeff"],
            series.iter().map(|((n, l, m), c)| format!("{n},{l},{m},{c}")),
            "q^(n/6) r^(l/2) s^(m/6)",
            no_header,
        ),
        TableFormat::Json => to_json_text(&with_header(series.to_json(), no_header)),
    }
}

fn family_result(entry: &FamilyEntry) -> Value {
    match mirror::check_family::<BigInt>(entry) {
        Ok(p) => json!({ "id": entry.id, "lattice": entry.lattice, "expected": entry.expected, "verified": p.verified,
                         "s": p.s.to_json(), "basis_change": p.to_json()["basis_change"].clone() }),
        Err(e) => json!({ "id": entry.id, "lattice": entry.lattice, "expected": entry.expected, "verified": false,
                          "error": e.to_string() }),
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let nh = cli.no_header;
    let json_out = |v: Value| Output::ok(to_json_text(&with_header(v, nh)));
    match &cli.command {
        Command::Lattice(LatticeCmd::Info { input, format }) => {
            let l = read_lattice(input)?;
            Ok(match format {
                InfoFormat::Json => json_out(lattice_info(&l)),
                InfoFormat::Text => Output::ok(info_text(&l)),
            })
        }
        Command::Lattice(LatticeCmd::Quotient { input, cusp }) => {
            let l = read_lattice(input)?;
            let c = parse_vector(cusp)?;
            let q = l.isotropic_quotient_with_lifts(&c)?;
            let lifts: Vec<Value> = q.lifts.iter().map(|v| v.to_json()).collect();
            Ok(json_out(json!({ "lattice": l.to_json(), "cusp": c.to_json(), "quotient": q.lattice.to_json(), "lifts": lifts })))
        }
        Command::Reflective(ReflectiveCmd::Classify { input, budget }) => {
            let l = read_lattice(input)?;
            let b = VinbergBudget { max_height: budget.max_height, max_roots: budget.max_roots };
            Ok(json_out(reflect::classify(&l, b)?.to_json()))
        }
        Command::Vinberg(VinbergCmd::Run { input, v0, budget, format }) => {
            let l = read_lattice(input)?;
            let v0 = match v0 {
                Some(s) => parse_vector(s)?,
                None => reflect::default_control_vector(&l)
                    .ok_or_else(|| Failure::Usage("lattice has no vector of positive norm".into()))?,
            };
            let b = VinbergBudget { max_height: budget.max_height, max_roots: budget.max_roots };
            let rep = reflect::vinberg_enumerate_with_budget(&l, &v0, b)?;
            Ok(match format {
                ChamberFormat::Json => json_out(rep.to_json()),
                ChamberFormat::Dot => Output::ok(rep.to_dot()),
            })
        }
        Command::Phi03(args) => {
            let series = match args.route {
                Route::Product => jacobi::product_phi03(args.order),
                Route::Quotient => jacobi::phi03_quotient(args.order),
            };
            Ok(Output::ok(phi03_output(&series, args.format, nh)))
        }
        Command::Delta1(Delta1Cmd::Verify { order, json }) => {
            let report = borcherds::verify_identity::<BigInt>(*order)?;
            if let Some(path) = json {
                fs::write(path, to_json_text(&with_header(report.to_json(), nh)))?;
            }
            let monomials: usize = report.monomials_per_weight.values().sum();
            let text = match &report.verdict {
                borcherds::IdentityVerdict::Equal => format!("equal (order {order}, {monomials} monomials)\n"),
                borcherds::IdentityVerdict::Mismatch { n, l, m, lhs, rhs } => {
                    format!("mismatch at (n,l,m)=({n},{l},{m}): sum {lhs}, product {rhs}\n")
                }
            };
            Ok(Output { text, mismatch: !report.is_equal() })
        }
        Command::Delta1(Delta1Cmd::Dump { order, format, side }) => {
            let series = match side {
                Side::Sum => borcherds::delta1_sum_side::<BigInt>(*order)?,
                Side::Product => borcherds::delta1_product_side(*order, &borcherds::f3_cache(*order))?,
            };
            Ok(Output::ok(delta1_output(&series, *format, nh)))
        }
        Command::Mirror(MirrorCmd::Quotient { input, cusp, expected }) => {
            let t = read_lattice(input)?;
            let c = parse_vector(cusp)?;
            let expected = expected.as_deref().map(dsl::parse_lattice::<BigInt>).transpose().map_err(|e| Failure::Usage(e.to_string()))?;
            let pair = mirror::mirror_quotient(&t, &c, expected.as_ref())?;
            let mismatch = expected.is_some() && !pair.verified;
            Ok(Output { text: to_json_text(&with_header(pair.to_json(), nh)), mismatch })
        }
        Command::Mirror(MirrorCmd::VerifyFamilies { catalog }) => {
            let entries = match catalog {
                Some(path) => mirror::load_catalog(&fs::read_to_string(path)?)?,
                None => mirror::family_catalog(),
            };
            let results: Vec<Value> = entries.iter().map(family_result).collect();
            let all = results.iter().all(|r| r["verified"] == json!(true));
            Ok(Output { text: to_json_text(&with_header(json!({ "all_verified": all, "families": results }), nh)), mismatch: !all })
        }
    }
}

fn emit(cli: &Cli, text: &str) -> io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.mismatch {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
