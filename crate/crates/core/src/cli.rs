//! Command-line front end. [`run`] parses arguments and returns the text to
//! print together with the process exit code.
//!
//! Exit codes: `0` success with no failing row, `1` a report with failing rows,
//! `2` usage or parse error, `3` complex failed validation, `4` bad
//! mathematical input (non-cycle, out-of-range degree, ...), `5` internal
//! consistency failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::bockstein::{self, Groups};
use crate::complex::{from_document, to_document, ChainComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::formalbord::{admissible_m_dims, conner_floyd_expression, representability_report, verify_glued_cycle};
use crate::homology::{homology, homology_at, les_pair_report, mayer_vietoris_report, HomologyClass};
use crate::products::{derivation_suite, kernel_basis_classes, kunneth};
use crate::report::Report;
use crate::spaces::{self, bzp_skeleton, SpaceRecipe};

pub const DEFAULT_SEED: u64 = 24301;
pub const DEFAULT_MAX_DEGREE: usize = 8;
/// Coefficients the verification suites run over when `--k` is not given.
pub const SUITE_MODULI: [u64; 4] = [2, 3, 4, 9];

const RECIPE_HELP: &str = "Space recipes: point, circle, torus, klein, sphere:N, lens:P:M (the lens space \
L^(2M-1) with fundamental group Z/P), bzp:P:D (D-skeleton of BZ/P), prod:R1,R2 (cellular product, \
split at the first comma).";

#[derive(Parser, Debug)]
#[command(name = "homcalc", version, about = "Exact cellular homology over Z and Z/k", after_help = RECIPE_HELP)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized choice-independence trials.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Highest degree examined by sequence and table commands.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEGREE)]
    pub max_degree: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Space recipe such as `klein`, `lens:3:4`, `bzp:3:8`.
    #[arg(long, conflicts_with = "file")]
    pub space: Option<String>,
    /// Complex in the JSON interchange format.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology group with generators.
    Homology {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        deg: i64,
        #[arg(long = "mod", default_value_t = 0)]
        modulus: u64,
        /// List generator cycles.
        #[arg(long)]
        generators: bool,
    },
    /// Both Bockstein images of a mod-k class.
    Bockstein {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        deg: i64,
        #[arg(long)]
        k: u64,
        /// Coordinates in the generator basis of H_deg(; Z/k), comma separated.
        #[arg(long, conflicts_with = "chain", allow_hyphen_values = true)]
        class: Option<String>,
        /// A chain given by one integer per cell, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        chain: Option<String>,
    },
    /// Künneth decomposition of a product.
    Kunneth {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        deg: usize,
        #[arg(long = "mod", default_value_t = 0)]
        modulus: u64,
    },
    /// Verification suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        input: Input,
        /// Coefficient modulus (default: 2, 3, 4 and 9).
        #[arg(long)]
        k: Option<u64>,
        /// Prime for the glued and derivation suites (default: 3 and 5).
        #[arg(long)]
        p: Option<u64>,
        /// Odd total degree for the glued suite (default: all odd totals up to 9).
        #[arg(long)]
        total: Option<u32>,
    },
    /// Homology tables of BZ/p and of BZ/p x BZ/p.
    #[command(alias = "paper-tables")]
    Tables {
        #[arg(long, default_value_t = 3)]
        p: u64,
    },
    /// Writes a complex in the interchange format.
    EmitComplex {
        #[command(flatten)]
        input: Input,
        /// Output path (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Bockstein sequence of 0 -> Z -> Z -> Z/k -> 0.
    Les,
    /// Sequence of 0 -> Z/k -> Z/k^2 -> Z/k -> 0.
    Les2,
    /// Compatibility of the Bocksteins with reduction and re-lifting.
    Compat,
    /// Mayer-Vietoris on the built-in covers.
    Mv,
    /// Long exact sequence of a pair.
    Pair,
    /// beta~ as a derivation of the cross product on BZ/p x BZ/p.
    Derivation,
    /// Glued cycles and the Conner-Floyd relation.
    Glued,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <Suite as ValueEnum>::from_str(s, true).map_err(|_| Error::Parse(format!("unknown suite `{s}`")))
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::Validation(_) => 3,
        Error::Internal(_) => 5,
        _ => 4,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(Some(report)) => {
            let stdout = match cli.format {
                Format::Text => format!("{report}\n"),
                Format::Json => format!("{}\n", report.to_json()),
            };
            Outcome {
                code: if report.passed() { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            }
        }
        Ok(None) => Outcome {
            code: 0,
            stdout: String::new(),
            stderr: String::new(),
        },
        Err(Done::Text(s)) => Outcome {
            code: 0,
            stdout: s,
            stderr: String::new(),
        },
        Err(Done::Failed(e)) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

enum Done {
    Text(String),
    Failed(Error),
}

impl From<Error> for Done {
    fn from(e: Error) -> Self {
        Done::Failed(e)
    }
}

fn load(input: &Input) -> Result<ChainComplex> {
    let c = match (&input.space, &input.file) {
        (Some(r), _) => build_recipe(r)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            parse_complex(&text)?
        }
        (None, None) => return Err(Error::Parse("give --space or --file".into())),
    };
    c.validate().map_err(Error::Validation)?;
    Ok(c)
}

/// Builds a library space; bad recipe parameters count as parse errors.
pub fn build_recipe(r: &str) -> Result<ChainComplex> {
    let recipe: SpaceRecipe = r.parse()?;
    recipe.build().map_err(|e| match e {
        Error::InvalidParameter(m) => Error::Parse(format!("space recipe `{r}`: {m}")),
        other => other,
    })
}

/// Parses an interchange document and validates the result.
pub fn parse_complex(text: &str) -> Result<ChainComplex> {
    let c = from_document(text)?;
    c.validate().map_err(Error::Validation)?;
    Ok(c)
}

fn parse_ints(s: &str) -> Result<Vec<BigInt>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("`{t}` is not an integer")))
        })
        .collect()
}

/// `2*a - 1*b`, using the cell names of degree `n`.
pub fn chain_text(c: &ChainComplex, n: i64, chain: &[BigInt]) -> String {
    let mut out = String::new();
    for (name, x) in c.cells(n).iter().zip(chain) {
        if x.is_zero() {
            continue;
        }
        if out.is_empty() {
            write!(out, "{x}*{name}").unwrap();
        } else if x.sign() == num_bigint::Sign::Minus {
            write!(out, " - {}*{name}", -x).unwrap();
        } else {
            write!(out, " + {x}*{name}").unwrap();
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn class_text(c: &ChainComplex, x: &HomologyClass) -> String {
    format!(
        "{} in {} [{}]",
        x,
        x.group.presentation(),
        chain_text(c, x.degree(), &x.representative())
    )
}

fn execute(cli: &Cli) -> std::result::Result<Option<Report>, Done> {
    let maxd = cli.max_degree;
    Ok(Some(match &cli.command {
        Command::Homology {
            input,
            deg,
            modulus,
            generators,
        } => cmd_homology(&load(input)?, *deg, *modulus, *generators)?,
        Command::Bockstein {
            input,
            deg,
            k,
            class,
            chain,
        } => cmd_bockstein(&load(input)?, *deg, *k, class.as_deref(), chain.as_deref())?,
        Command::Kunneth {
            left,
            right,
            deg,
            modulus,
        } => cmd_kunneth(left, right, *deg, *modulus)?,
        Command::Verify {
            suite,
            input,
            k,
            p,
            total,
        } => {
            let space = match (&input.space, &input.file) {
                (None, None) => None,
                _ => Some(load(input)?),
            };
            cmd_verify(*suite, space.as_ref(), *k, *p, *total, maxd, cli.seed)?
        }
        Command::Tables { p } => cmd_tables(*p, maxd)?,
        Command::EmitComplex { input, out } => {
            let doc = to_document(&load(input)?);
            return match out {
                Some(path) => {
                    std::fs::write(path, format!("{doc}\n"))
                        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
                    Ok(None)
                }
                None => Err(Done::Text(format!("{doc}\n"))),
            };
        }
    }))
}

/// Degrees above the top cell dimension give the trivial group; negative degrees are an error.
pub fn cmd_homology(c: &ChainComplex, deg: i64, modulus: u64, generators: bool) -> Result<Report> {
    if deg < 0 {
        return Err(Error::DegreeOutOfRange {
            degree: deg,
            top: c.top_dim() as i64,
        });
    }
    let h = homology_at(c, deg, modulus);
    let coeff = if modulus == 0 {
        "Z".to_string()
    } else {
        format!("Z/{modulus}")
    };
    let mut r = Report::new(format!("H{deg}({}; {coeff})", c.name())).with_summary(h.to_string());
    r.info("group", h.to_string());
    if generators {
        for (i, (g, d)) in h.generators.iter().zip(h.orders()).enumerate() {
            let order = if d.is_zero() {
                "infinite".to_string()
            } else {
                d.to_string()
            };
            r.info(
                format!("generator {i}"),
                format!("{} (order {order})", chain_text(c, deg, g)),
            );
        }
    }
    Ok(r)
}

pub fn cmd_bockstein(c: &ChainComplex, deg: i64, k: u64, class: Option<&str>, chain: Option<&str>) -> Result<Report> {
    let h = homology(c, deg, k)?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("Bockstein needs k >= 2, got {k}")));
    }
    let mut g = Groups::new(c);
    let mut r = Report::new(format!("Bockstein of H{deg}({}; Z/{k})", c.name()));
    for (i, gen) in h.generators.iter().enumerate() {
        r.info(format!("basis {i}"), chain_text(c, deg, gen));
    }
    let chains: Vec<Vec<BigInt>> = match (class, chain) {
        (Some(coords), _) => vec![h.representative(&parse_ints(coords)?)?],
        (None, Some(z)) => vec![parse_ints(z)?],
        (None, None) => h.generators.clone(),
    };
    let mut summaries = Vec::new();
    for z in &chains {
        let b = g.bockstein_of_chain(deg, k, z)?;
        let x = chain_text(c, deg, z);
        r.info(format!("x = {x}"), class_text(c, &b.input));
        r.info(format!("beta(x), x = {x}"), class_text(c, &b.integral_image));
        r.info(format!("beta~(x), x = {x}"), class_text(c, &b.modk_image));
        r.info(
            format!("witness, x = {x}"),
            format!("d(lift) = {k} * ({})", chain_text(c, deg - 1, &b.witness.divided)),
        );
        summaries.push(format!(
            "beta = {}, beta~ = {}",
            chain_text(c, deg - 1, &b.integral_image.representative()),
            chain_text(c, deg - 1, &b.modk_image.representative())
        ));
    }
    Ok(r.with_summary(summaries.join("; ")))
}

pub fn cmd_kunneth(left: &str, right: &str, deg: usize, modulus: u64) -> Result<Report> {
    let (c, d) = (build_recipe(left)?, build_recipe(right)?);
    let k = kunneth(&c, &d, deg, modulus)?;
    let mut r = Report::new(format!(
        "Künneth decomposition of H{deg}({left} x {right}) mod {modulus}"
    ))
    .with_summary(k.total.to_string());
    let right_coeff = if modulus == 0 {
        "Z".to_string()
    } else {
        format!("Z/{modulus}")
    };
    for t in &k.tensor_summands {
        r.info(format!("H{}(Z) ⊗ H{}({right_coeff})", t.i, t.j), t.group.to_string());
    }
    for t in &k.tor_summands {
        r.info(
            format!("Tor(H{}(Z), H{}({right_coeff}))", t.i, t.j),
            t.group.to_string(),
        );
    }
    r.check(
        "direct computation matches",
        k.bookkeeping() == k.total.presentation(),
        format!("direct {}, bookkeeping {}", k.total, k.bookkeeping()),
    );
    Ok(r)
}

fn library_or(space: Option<&ChainComplex>) -> Vec<ChainComplex> {
    match space {
        Some(c) => vec![c.clone()],
        None => spaces::library(),
    }
}

fn moduli_or(k: Option<u64>) -> Vec<u64> {
    k.map_or_else(|| SUITE_MODULI.to_vec(), |k| vec![k])
}

/// The documented pairs: each space with each of its proper skeleta, plus the cylinder
/// relative to its boundary circles.
pub fn documented_pairs(space: Option<&ChainComplex>) -> Vec<(ChainComplex, Subcomplex, String)> {
    let mut out = Vec::new();
    for c in library_or(space) {
        for d in 0..c.top_dim() {
            let s = c.skeleton(d);
            out.push((c.clone(), s, format!("{} rel {d}-skeleton", c.name())));
        }
        let empty = Subcomplex::empty(&c);
        out.push((c.clone(), empty, format!("{} rel empty", c.name())));
    }
    if space.is_none() {
        let m = spaces::cylinder_pair();
        out.push((m.complex, m.sub, "cylinder rel boundary circles".into()));
    }
    out
}

pub fn cmd_verify(
    suite: Suite,
    space: Option<&ChainComplex>,
    k: Option<u64>,
    p: Option<u64>,
    total: Option<u32>,
    max_degree: usize,
    seed: u64,
) -> Result<Report> {
    let mut r = Report::new(format!("verify {suite:?}").to_lowercase()).with_seed(seed);
    let run_all = suite == Suite::All;
    if matches!(suite, Suite::Les | Suite::All) {
        for c in library_or(space) {
            for &k in &moduli_or(k) {
                let sub = bockstein::verify_bockstein_les(&c, k, max_degree)?;
                r.absorb(&format!("les {} k={k}", c.name()), sub);
            }
        }
    }
    if matches!(suite, Suite::Les2 | Suite::All) {
        for c in library_or(space) {
            for &k in &moduli_or(k) {
                let sub = bockstein::verify_bockstein_les2(&c, k, max_degree)?;
                r.absorb(&format!("les2 {} k={k}", c.name()), sub);
            }
        }
    }
    if matches!(suite, Suite::Compat | Suite::All) {
        for c in library_or(space) {
            for &k in &moduli_or(k) {
                let sub = bockstein::verify_compatibility(&c, k, max_degree, seed)?;
                r.absorb(&format!("compat {} k={k}", c.name()), sub);
            }
        }
    }
    if matches!(suite, Suite::Mv | Suite::All) {
        let mut covers = Vec::new();
        if space.is_none() {
            covers.push(("torus as two cylinders".to_string(), spaces::torus_cylinders()));
            covers.push(("klein bottle as two cylinders".to_string(), spaces::klein_cylinders()));
        }
        // every space is also covered by itself together with a proper skeleton
        for c in library_or(space) {
            let full = Subcomplex::full(&c);
            let skeleton = c.skeleton(c.top_dim().saturating_sub(1));
            covers.push((
                format!(
                    "{} covered by itself and its {}-skeleton",
                    c.name(),
                    c.top_dim().saturating_sub(1)
                ),
                spaces::CoverModel {
                    complex: c.clone(),
                    a: full,
                    b: skeleton,
                },
            ));
        }
        let mods: Vec<u64> = k.map_or_else(|| vec![0, 2, 3, 4, 9], |k| vec![k]);
        for (name, m) in &covers {
            for &k in &mods {
                let sub = mayer_vietoris_report(&m.complex, &m.a, &m.b, k, max_degree)?;
                r.absorb(&format!("mv {name} mod {k}"), sub);
            }
        }
    }
    if matches!(suite, Suite::Pair | Suite::All) {
        let mods: Vec<u64> = k.map_or_else(|| vec![0, 2, 3, 4, 9], |k| vec![k]);
        for (c, a, name) in documented_pairs(space) {
            for &k in &mods {
                let sub = les_pair_report(&c, &a, k, max_degree)?;
                r.absorb(&format!("pair {name} mod {k}"), sub);
            }
        }
    }
    if matches!(suite, Suite::Derivation | Suite::All) {
        for p in p.map_or_else(|| vec![3, 5], |p| vec![p]) {
            let b = bzp_skeleton(p, max_degree + 1)?;
            let sub = derivation_suite(&b, &b, p, max_degree + 1)?;
            r.absorb(&format!("derivation p={p}"), sub);
        }
    }
    if matches!(suite, Suite::Glued | Suite::All) {
        let primes = p.map_or_else(|| vec![3, 5], |p| vec![p]);
        let totals: Vec<u32> = total.map_or_else(|| (3..=9).step_by(2).collect(), |t| vec![t]);
        for &p in &primes {
            for &t in &totals {
                if t % 2 == 0 {
                    return Err(Error::InvalidParameter(format!("total degree {t} is even")));
                }
                for i in 1..=(t - 1) / 2 {
                    r.absorb(&format!("glued p={p} total={t} i={i}"), verify_glued_cycle(p, i, t)?);
                }
            }
            for i in 1..=4 {
                let cf = conner_floyd_expression(p, i, &admissible_m_dims(i))?;
                r.absorb(&format!("conner-floyd p={p} i={i}"), cf.report);
            }
        }
    }
    let _ = run_all;
    Ok(r)
}

/// Expected `H_n(BZ_p; Z)`.
fn bzp_expected(p: u64, n: usize) -> String {
    match n {
        0 => "Z".into(),
        n if n % 2 == 1 => format!("Z/{p}"),
        _ => "0".into(),
    }
}

pub fn cmd_tables(p: u64, max_degree: usize) -> Result<Report> {
    if p < 3 || !crate::products::is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not an odd prime")));
    }
    let b = bzp_skeleton(p, max_degree + 1)?;
    let mut r = Report::new(format!("homology tables for BZ{p}, degrees 0..={max_degree}"));
    for n in 0..=max_degree {
        let h = homology(&b, n as i64, 0)?.to_string();
        let expected = bzp_expected(p, n);
        r.check(
            format!("[integral homology of BZp] H{n}(BZ{p}; Z)"),
            h == expected,
            format!("{h} (expected {expected})"),
        );
    }
    for n in 0..=max_degree {
        let h = homology(&b, n as i64, p)?.to_string();
        let expected = format!("Z/{p}");
        r.check(
            format!("[mod p homology of BZp] H{n}(BZ{p}; Z/{p})"),
            h == expected,
            format!("{h} (expected {expected})"),
        );
    }
    for n in (1..=max_degree).step_by(2) {
        let kb = kernel_basis_classes(p, n)?;
        for e in &kb.elements {
            r.check(
                format!("[kernel basis] H{n}: {}", e.label()),
                e.verified,
                if e.verified {
                    "in ker beta~ and ker beta"
                } else {
                    "not in the kernel"
                },
            );
        }
        r.check(
            format!("[kernel basis] H{n}: basis size"),
            kb.report.passed(),
            format!(
                "{} elements, reduction image dimension {}",
                kb.elements.len(),
                kb.reduction_rank
            ),
        );
    }
    for n in 1..=max_degree {
        let rep = representability_report(p, n as u32)?;
        let rows = rep
            .rows
            .into_iter()
            .filter(|row| row.label != "note" || n == max_degree);
        for row in rows {
            r.push(format!("[representatives] H{n}: {}", row.label), row.status, row.detail);
        }
    }
    Ok(r)
}
