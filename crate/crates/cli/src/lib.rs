//! Argument model and command dispatch for the `diffalg` binary.

pub mod verify;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use diffalg::darboux::{
    cofactor, cofactor_relations, darboux_search_with_cap, eigenvalue_rational_solvable, first_integral,
    CofactorSpace,
};
use diffalg::derivation::{Derivation, DerivationSpec};
use diffalg::diffideal::{is_differential_ideal, saturating_element, vector_field_zeros, IdealPresentation};
use diffalg::groebner::DEFAULT_DEGREE_CAP;
use diffalg::parse::{parse_poly, parse_scalar, parse_scalar_list};
use diffalg::{Error, Field, MultiPoly, Ring, RingRef};
use num_bigint::BigInt;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "diffalg", version, about = "Exact differential algebra on polynomial rings")]
pub struct Cli {
    /// Emit JSON instead of canonical text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Coefficient field, `Q` or `Qi`; overrides the field of a spec file.
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<Field>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the derivation to a polynomial.
    Derive(PolyArgs),
    /// Cofactor `w` with `Df = w f`, if there is one.
    Cofactor(PolyArgs),
    /// Darboux polynomials up to a degree bound.
    Darboux(SearchArgs),
    /// Integer relations among the cofactors found by the search.
    Relations(SearchArgs),
    /// Rational first integrals built from cofactor relations.
    FirstIntegral(FirstIntegralArgs),
    /// Whether `DY = cY` has a nonzero rational solution when `DX = p(X)`.
    ResidueCheck(ResidueArgs),
    /// Whether the ideal generated by `--gens` is closed under the derivation.
    DiffIdeal(IdealArgs),
    /// Common zeros of a plane vector field.
    Zeros(SpecArg),
    /// An element whose inversion leaves no proper differential prime.
    Saturate(SaturateArgs),
    /// Run the built-in verification suite.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SpecArg {
    /// JSON derivation spec.
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[arg(long)]
    pub poly: String,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    /// Maximum total degree of the Darboux polynomials.
    #[arg(long, default_value_t = 4)]
    pub bound: u32,
}

#[derive(Debug, Args)]
pub struct FirstIntegralArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Comma-separated integer exponents, one per pair found; every relation
    /// is used when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub relation: Option<String>,
}

#[derive(Debug, Args)]
pub struct ResidueArgs {
    /// Monic squarefree univariate polynomial `p`.
    #[arg(long)]
    pub p: String,
    /// Comma-separated roots of `p`.
    #[arg(long, allow_hyphen_values = true)]
    pub roots: String,
    /// Eigenvalue `c`.
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
}

#[derive(Debug, Args)]
pub struct IdealArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    /// Comma-separated generators.
    #[arg(long)]
    pub gens: String,
}

#[derive(Debug, Args)]
pub struct SaturateArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    /// Comma-separated generators; the zero ideal when absent.
    #[arg(long)]
    pub gens: Option<String>,
    /// Asserted height of the ideal given by `--gens`.
    #[arg(long)]
    pub height: Option<usize>,
    /// Degree bound for the Darboux search used with the zero ideal.
    #[arg(long, default_value_t = 4)]
    pub bound: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run a single named check.
    #[arg(long)]
    pub only: Option<String>,
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::from_tag(s).ok_or_else(|| format!("unknown field `{}` (expected Q or Qi)", s))
}

/// What a command prints and the exit status it ends with.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// A command failure: library errors keep their stable code.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.code(),
            Failure::Usage(_) => "Usage",
        }
    }

    fn exit(&self) -> i32 {
        match self {
            Failure::Lib(e) if !e.is_input_error() => EXIT_DOMAIN,
            _ => EXIT_USAGE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Usage(m) => m.clone(),
        }
    }
}

/// Rendered result of a successful command.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: EXIT_OK }
    }
}

/// Gröbner degree cap, from `DIFFALG_DEGREE_BUDGET` when set.
pub fn degree_cap() -> Result<u32, Failure> {
    match std::env::var("DIFFALG_DEGREE_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("DIFFALG_DEGREE_BUDGET must be a nonnegative integer, got `{}`", v))),
        Err(_) => Ok(DEFAULT_DEGREE_CAP),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(report) => {
            let mut stdout = if cli.json {
                serde_json::to_string_pretty(&report.json).expect("serializable")
            } else {
                report.text
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome {
                stdout,
                stderr: String::new(),
                code: report.code,
            }
        }
        Err(f) => {
            let stdout = if cli.json {
                let v = json!({"error": f.code(), "message": f.message()});
                format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
            } else {
                String::new()
            };
            Outcome {
                stdout,
                stderr: format!("error[{}]: {}\n", f.code(), f.message()),
                code: f.exit(),
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let field = cli.field;
    match &cli.command {
        Command::Derive(a) => {
            let d = load_spec(&a.spec, field)?;
            let f = parse_poly(&a.poly, d.ring())?;
            let df = d.apply(&f)?;
            Ok(Report::ok(df.render(), json!({"poly": f.render(), "derivative": df.render()})))
        }
        Command::Cofactor(a) => {
            let d = load_spec(&a.spec, field)?;
            let f = parse_poly(&a.poly, d.ring())?;
            let w = cofactor(&f, &d)?;
            let text = w.as_ref().map_or_else(|| "none".to_string(), MultiPoly::render);
            Ok(Report::ok(text, json!({"poly": f.render(), "cofactor": w.map(|w| w.render())})))
        }
        Command::Darboux(a) => {
            let (d, space) = search(a, field)?;
            let vars = d.ring().vars();
            Ok(Report::ok(space_text(&space, vars), space_json(&space, vars)))
        }
        Command::Relations(a) => {
            let (d, space) = search(a, field)?;
            let vars = d.ring().vars();
            let rels = cofactor_relations(&space);
            let mut text = space_text(&space, vars);
            let _ = writeln!(text, "relations:");
            if rels.is_empty() {
                let _ = writeln!(text, "  none");
            }
            for r in &rels {
                let _ = writeln!(text, "  {}", vector_text(r));
            }
            let mut v = space_json(&space, vars);
            v["relations"] = json!(rels.iter().map(|r| vector_json(r)).collect::<Vec<_>>());
            Ok(Report::ok(text, v))
        }
        Command::FirstIntegral(a) => {
            let (d, space) = search(&a.search, field)?;
            let rels = match &a.relation {
                Some(s) => vec![parse_relation(s)?],
                None => cofactor_relations(&space),
            };
            let mut text = String::new();
            let mut items = Vec::new();
            for r in &rels {
                let fi = first_integral(&space, &d, r)?;
                let _ = writeln!(text, "{}", fi);
                items.push(json!({"relation": vector_json(r), "integral": fi.to_string()}));
            }
            if rels.is_empty() {
                text.push_str("none\n");
            }
            Ok(Report::ok(text, json!({"first_integrals": items})))
        }
        Command::ResidueCheck(a) => residue_check(a, field.unwrap_or(Field::Gaussian)),
        Command::DiffIdeal(a) => {
            let d = load_spec(&a.spec, field)?;
            let ideal = IdealPresentation::new(d.ring(), parse_list(&a.gens, d.ring())?)?.with_degree_cap(degree_cap()?);
            let yes = is_differential_ideal(&ideal, &d)?;
            Ok(Report::ok(yes.to_string(), json!({"differential": yes})))
        }
        Command::Zeros(a) => {
            let d = load_spec(a, field)?;
            let z = vector_field_zeros(&d)?;
            let mut text = String::new();
            for p in &z.points {
                let _ = writeln!(text, "({}, {})", p.x, p.y);
            }
            if let Some(c) = &z.curve {
                let _ = writeln!(text, "curve: {}", c);
            }
            for u in &z.unresolved {
                match &u.fixed_x {
                    Some(x) => {
                        let _ = writeln!(text, "unresolved at {} = {}: {}", d.ring().vars()[0], x, u.poly);
                    }
                    None => {
                        let _ = writeln!(text, "unresolved: {}", u.poly);
                    }
                }
            }
            if text.is_empty() {
                text.push_str("none\n");
            }
            let v = json!({
                "points": z.points.iter().map(|p| json!([p.x.to_string(), p.y.to_string()])).collect::<Vec<_>>(),
                "curve": z.curve.as_ref().map(MultiPoly::render),
                "unresolved": z.unresolved.iter().map(|u| json!({
                    "fixed_x": u.fixed_x.as_ref().map(|x| x.to_string()),
                    "poly": u.poly.render(),
                })).collect::<Vec<_>>(),
            });
            Ok(Report::ok(text, v))
        }
        Command::Saturate(a) => {
            let d = load_spec(&a.spec, field)?;
            let cap = degree_cap()?;
            let (ideal, space) = match &a.gens {
                Some(g) => {
                    let mut ideal = IdealPresentation::new(d.ring(), parse_list(g, d.ring())?)?.with_degree_cap(cap);
                    if let Some(h) = a.height {
                        ideal = ideal.with_height(h);
                    }
                    (ideal, None)
                }
                None => {
                    let space = darboux_search_with_cap(&d, a.bound, cap)?;
                    (IdealPresentation::zero(d.ring()), Some(space))
                }
            };
            let s = saturating_element(&ideal, &d, space.as_ref())?;
            let shape = match s.shape {
                diffalg::diffideal::SaturationShape::Plane => "plane",
                diffalg::diffideal::SaturationShape::DimensionOne => "dimension-one",
            };
            Ok(Report::ok(
                s.element.render(),
                json!({"element": s.element.render(), "shape": shape, "asserted_height": s.asserted_height}),
            ))
        }
        Command::VerifyPaper(a) => {
            let results = verify::run_checks(a.only.as_deref()).map_err(Failure::Usage)?;
            let mut text = String::new();
            let mut all = true;
            for r in &results {
                all &= r.passed;
                let status = if r.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(text, "{:<22} {} ({:.3}s) {}", r.name, status, r.seconds, r.detail);
            }
            let v = json!({
                "passed": all,
                "checks": results.iter().map(|r| json!({
                    "name": r.name, "passed": r.passed, "seconds": r.seconds, "detail": r.detail,
                })).collect::<Vec<_>>(),
            });
            Ok(Report {
                text,
                json: v,
                code: if all { EXIT_OK } else { EXIT_DOMAIN },
            })
        }
    }
}

fn load_spec(a: &SpecArg, field: Option<Field>) -> Result<Derivation, Failure> {
    let text = std::fs::read_to_string(&a.spec)
        .map_err(|e| Failure::Usage(format!("cannot read spec `{}`: {}", a.spec.display(), e)))?;
    let mut spec = DerivationSpec::from_json(&text)?;
    if let Some(f) = field {
        spec.field = f;
    }
    Ok(spec.build()?)
}

fn search(a: &SearchArgs, field: Option<Field>) -> Result<(Derivation, CofactorSpace), Failure> {
    let d = load_spec(&a.spec, field)?;
    let space = darboux_search_with_cap(&d, a.bound, degree_cap()?)?;
    Ok((d, space))
}

fn parse_list(text: &str, ring: &RingRef) -> Result<Vec<MultiPoly>, Failure> {
    let items: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(Failure::Usage("expected at least one polynomial".into()));
    }
    Ok(items.into_iter().map(|s| parse_poly(s, ring)).collect::<diffalg::Result<_>>()?)
}

fn parse_relation(text: &str) -> Result<Vec<BigInt>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| Failure::Usage(format!("relation entry `{}` is not an integer", s.trim())))
        })
        .collect()
}

/// Identifiers occurring in `text`, in order of first appearance; `i` is
/// the imaginary unit over Q(i) and not a variable there.
fn identifiers(text: &str, field: Field) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        if chars[k].is_alphabetic() || chars[k] == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            let name: String = chars[start..k].iter().collect();
            if !(field == Field::Gaussian && name == "i") && !out.contains(&name) {
                out.push(name);
            }
        } else {
            k += 1;
        }
    }
    out
}

fn residue_check(a: &ResidueArgs, field: Field) -> Result<Report, Failure> {
    let mut vars = identifiers(&a.p, field);
    if vars.is_empty() {
        vars.push("X".into());
    }
    let ring = Ring::new(vars, field)?;
    let p = parse_poly(&a.p, &ring)?;
    let roots = parse_scalar_list(&a.roots, field)?;
    let c = parse_scalar(&a.c, field)?;
    let rep = eigenvalue_rational_solvable(&p, &roots, &c)?;
    let mut text = format!("solvable: {}\n", rep.solvable);
    for (r, res) in &rep.residues {
        let _ = writeln!(text, "residue at {}: {}", r, res);
    }
    if let Some(w) = &rep.witness {
        let _ = writeln!(text, "witness: {}", w);
    }
    let v = json!({
        "solvable": rep.solvable,
        "residues": rep.residues.iter().map(|(r, res)| json!({"root": r.to_string(), "residue": res.to_string()})).collect::<Vec<_>>(),
        "exponents": rep.exponents.as_ref().map(|es| es.iter().map(|(r, e)| json!({"root": r.to_string(), "exponent": e.to_string()})).collect::<Vec<_>>()),
        "witness": rep.witness.as_ref().map(|w| w.to_string()),
    });
    Ok(Report::ok(text, v))
}

fn vector_text(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(BigInt::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Integers as JSON strings, since they are unbounded.
fn vector_json(v: &[BigInt]) -> Value {
    json!(v.iter().map(BigInt::to_string).collect::<Vec<_>>())
}

fn space_text(space: &CofactorSpace, vars: &[String]) -> String {
    let mut text = String::new();
    for p in &space.pairs {
        let _ = writeln!(text, "f: {} ; w: {}", p.f, p.w);
    }
    if space.pairs.is_empty() {
        let _ = writeln!(text, "no Darboux polynomials");
    }
    for fam in &space.families {
        let _ = writeln!(
            text,
            "family: degree {}, leading {}, cofactor {}",
            fam.degree,
            fam.leading.render(vars),
            fam.cofactor.as_ref().map_or_else(|| "varies".to_string(), MultiPoly::render)
        );
    }
    text
}

fn space_json(space: &CofactorSpace, vars: &[String]) -> Value {
    json!({
        "pairs": space.pairs.iter().map(|p| json!({"f": p.f.render(), "w": p.w.render()})).collect::<Vec<_>>(),
        "families": space.families.iter().map(|f| json!({
            "degree": f.degree,
            "leading": f.leading.render(vars),
            "cofactor": f.cofactor.as_ref().map(MultiPoly::render),
        })).collect::<Vec<_>>(),
    })
}
