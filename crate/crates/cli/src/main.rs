use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use gderive::gderiv::{
    abg_space, centroid, derivation_space, intersection_report, minus_interior, plus_interior, quasiderivation_witness,
    DerivationKind, MapSpace,
};
use gderive::hilbert::{self, graded_dims, DEFAULT_ORDER_BOUND, DEFAULT_WINDOW};
use gderive::linalg::parse_rational;
use gderive::poly::{PrimeCheck, DEFAULT_GUARD};
use gderive::sl2::{fixed_param_dimension, verify_decomposition, DecompositionReport, FixedReport, Params, Sl2Family};
use gderive::{reproduce, Automorphism, Error, Ideal, LieAlgebra, Matrix, MultiPoly};

#[derive(Parser)]
#[command(name = "gderive", version, about = "Exact generalized derivations of finite-dimensional Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Plain,
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GradedKind {
    Plain,
    Plus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    B,
    C,
    Ab,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra and print its Jacobi report.
    Check {
        /// Algebra JSON file or builtin name (sl2, heisenberg, solvable, abelian(n)).
        #[arg(long)]
        algebra: String,
    },
    /// Solve for Der_{sigma,tau} or one of its interiors.
    Derive {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        tau: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "plain")]
        kind: KindArg,
        /// Generators of G for the minus interior.
        #[arg(long, num_args = 1..)]
        gens: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Centroid of an algebra.
    Centroid {
        #[arg(long)]
        algebra: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Search for a quasiderivation witness of a linear map.
    Quasider {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Space of (alpha, beta, gamma)-derivations.
    Abg {
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Intersection Der_sigma and Der_tau, with an optional witness vector.
    Intersect {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        tau: PathBuf,
        /// Comma-separated rational coordinates, e.g. 1,0,-1/2.
        #[arg(long, allow_hyphen_values = true)]
        witness: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Graded dimensions over a cyclic group and their series.
    Hilbert {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, value_enum, default_value = "plain")]
        kind: GradedKind,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[arg(long, default_value_t = DEFAULT_ORDER_BOUND)]
        order_bound: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Reduced lex Gröbner basis of an ideal.
    Groebner {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Ideal membership of a polynomial.
    Member {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Whether every generator of the inner ideal lies in the outer one.
    Contain {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Triangular primality certificate.
    PrimeCheck {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decomposition report for an inner-automorphism family of sl2.
    Sl2 {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Fix parameters, e.g. --fix b=1 (repeatable).
        #[arg(long, value_name = "NAME=VALUE")]
        fix: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        report: Format,
    },
    /// Recompute the published results and print a pass/fail table.
    Reproduce {
        /// Run a single row by key.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io(..) => "E100",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_guard_trip() => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "cannot read {}: {e}", p.display()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// Loads a validated algebra from a file, falling back to builtin names.
fn load_algebra(spec: &str) -> CliResult<LieAlgebra> {
    let path = Path::new(spec);
    if path.is_file() {
        Ok(LieAlgebra::from_json(&read(path)?)?.validated()?)
    } else {
        Ok(LieAlgebra::builtin(spec)?)
    }
}

fn load_matrix(path: &Path) -> CliResult<Matrix> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Core(Error::Parse(format!("{}: {e}", path.display()))))
}

fn load_automorphism(g: &LieAlgebra, path: &Path) -> CliResult<Automorphism> {
    Ok(Automorphism::new(g, load_matrix(path)?)?)
}

fn load_ideal(path: &Path, guard: usize) -> CliResult<Ideal> {
    Ok(Ideal::from_json(&read(path)?)?.with_guard(guard))
}

fn parse_vector(s: &str) -> CliResult<Vec<gderive::Rational>> {
    Ok(s.split(',').map(|t| parse_rational(t.trim())).collect::<gderive::Result<_>>()?)
}

fn parse_fix(items: &[String]) -> CliResult<Params> {
    let mut out = Params::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Parse(format!("expected NAME=VALUE, got `{item}`")))?;
        out.insert(k.trim().to_string(), parse_rational(v.trim())?);
    }
    Ok(out)
}

fn render_maps(out: &mut String, title: &str, basis: &[Matrix]) {
    let _ = writeln!(out, "{title}: dimension {}", basis.len());
    for (i, m) in basis.iter().enumerate() {
        let _ = writeln!(out, "D{}:", i + 1);
        out.push_str(&m.to_string());
    }
}

fn space_output(title: &str, space: &MapSpace, format: Format) -> String {
    let basis = space.basis();
    match format {
        Format::Json => to_json(&json!({ "dimension": space.dim(), "basis": basis })),
        Format::Text => {
            let mut out = String::new();
            render_maps(&mut out, title, &basis);
            out
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn polys(ps: &[MultiPoly]) -> Vec<String> {
    ps.iter().map(ToString::to_string).collect()
}

#[derive(Serialize)]
struct Sl2Output {
    #[serde(flatten)]
    decomposition: DecompositionReport,
    fixed: Option<FixedReport>,
}

fn sl2_text(o: &Sl2Output) -> String {
    let d = &o.decomposition;
    let mut out = String::new();
    let _ = writeln!(out, "family {}", d.family.tag());
    let _ = writeln!(out, "ring: {}", d.ring.join(", "));
    let _ = writeln!(
        out,
        "derivation system: {} nonzero generators, {} distinct up to scalar",
        d.raw_generator_count, d.distinct_generator_count
    );
    let _ = writeln!(out, "ideal J:");
    for g in &d.ideal_generators {
        let _ = writeln!(out, "  {g}");
    }
    let _ = writeln!(out, "reduced basis of J:");
    for g in &d.reduced_basis {
        let _ = writeln!(out, "  {g}");
    }
    for c in &d.components {
        let _ = writeln!(
            out,
            "component {}: unit {}, prime certified {} ({}), free vars [{}], dimension {}",
            c.name,
            c.unit_ideal,
            c.prime_certified,
            c.prime_criterion,
            c.free_vars.join(", "),
            c.dimension.map_or("-".to_string(), |x| x.to_string())
        );
        for g in &c.generators {
            let _ = writeln!(out, "  {g}");
        }
        if !c.inverted.is_empty() {
            let _ = writeln!(out, "  inverted: {}", c.inverted.join(", "));
        }
        if let Some(form) = &c.parametric_form {
            let _ = writeln!(out, "  parametric form:");
            for row in form {
                let _ = writeln!(out, "    [{}]", row.join(", "));
            }
        }
    }
    let k = &d.containments;
    let _ = writeln!(
        out,
        "containments: J in p1 {}, J in p2 {}, p1*p2 in J {}, J matches system {}",
        k.j_in_p1, k.j_in_p2, k.p1_p2_in_j, k.j_matches_system
    );
    let _ = writeln!(
        out,
        "parametric identity {}, sampled points pass {}",
        d.parametric_identity, d.parametric_samples_pass
    );
    let _ = writeln!(
        out,
        "published display passes at {}/{} sample points",
        d.published_form.passing, d.published_form.samples
    );
    for n in &d.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = writeln!(out, "verified: {}", d.verified);
    if let Some(f) = &o.fixed {
        let params: Vec<String> = f.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        render_maps(&mut out, &format!("fixed {}", params.join(", ")), &f.basis);
        let _ = writeln!(out, "published claim {}, discrepancy {}", f.published_claim, f.discrepancy);
    }
    out
}

fn run(cli: Cli) -> CliResult<String> {
    Ok(match cli.command {
        Command::Check { algebra } => {
            let path = Path::new(&algebra);
            let g = if path.is_file() { LieAlgebra::from_json(&read(path)?)? } else { LieAlgebra::builtin(&algebra)? };
            to_json(&g.jacobi_report())
        }
        Command::Derive { algebra, sigma, tau, kind, gens, format } => {
            let g = load_algebra(&algebra)?;
            let s = load_automorphism(&g, &sigma)?;
            let id = Automorphism::identity(g.dim());
            let space = match kind {
                KindArg::Plain => {
                    let t = match &tau {
                        Some(p) => load_automorphism(&g, p)?,
                        None => id,
                    };
                    derivation_space(&g, &s, &t)?
                }
                KindArg::Plus => plus_interior(&g, &s)?,
                KindArg::Minus => {
                    let gs = gens.iter().map(|p| load_automorphism(&g, p)).collect::<CliResult<Vec<_>>>()?;
                    minus_interior(&g, &s, &gs)?
                }
            };
            let title = match space.kind {
                DerivationKind::Plain => "derivations",
                DerivationKind::Plus => "plus interior",
                DerivationKind::Minus => "minus interior",
            };
            space_output(title, &space.maps, format)
        }
        Command::Centroid { algebra, format } => space_output("centroid", &centroid(&load_algebra(&algebra)?), format),
        Command::Quasider { algebra, map, format } => {
            let g = load_algebra(&algebra)?;
            let d = load_matrix(&map)?;
            let w = quasiderivation_witness(&g, &d)?;
            match format {
                Format::Json => to_json(&json!({ "quasiderivation": w.is_some(), "witness": w })),
                Format::Text => match w {
                    Some(m) => format!("quasiderivation witness:\n{m}"),
                    None => "no quasiderivation witness\n".to_string(),
                },
            }
        }
        Command::Abg { algebra, alpha, beta, gamma, format } => {
            let g = load_algebra(&algebra)?;
            let (a, b, c) = (parse_rational(&alpha)?, parse_rational(&beta)?, parse_rational(&gamma)?);
            space_output("(alpha, beta, gamma)-derivations", &abg_space(&g, &a, &b, &c), format)
        }
        Command::Intersect { algebra, sigma, tau, witness, format } => {
            let g = load_algebra(&algebra)?;
            let s = load_automorphism(&g, &sigma)?;
            let t = load_automorphism(&g, &tau)?;
            let w = witness.as_deref().map(parse_vector).transpose()?;
            let r = intersection_report(&g, &s, &t, w.as_deref())?;
            match format {
                Format::Json => to_json(&json!({
                    "dimension": r.dimension,
                    "basis": r.intersection.basis(),
                    "witness": r.witness,
                })),
                Format::Text => {
                    let mut out = String::new();
                    render_maps(&mut out, "intersection", &r.intersection.basis());
                    if let Some(wc) = &r.witness {
                        let _ = writeln!(
                            out,
                            "witness ({}) maps to ({}), in centralizer: {}",
                            wc.witness.join(", "),
                            wc.image.join(", "),
                            wc.in_centralizer
                        );
                    }
                    out
                }
            }
        }
        Command::Hilbert { algebra, sigma, kind, window, order_bound, format } => {
            let g = load_algebra(&algebra)?;
            let s = load_automorphism(&g, &sigma)?;
            let kind = match kind {
                GradedKind::Plain => DerivationKind::Plain,
                GradedKind::Plus => DerivationKind::Plus,
            };
            let gd = graded_dims(&g, &s, kind, window, order_bound)?;
            let period = if gd.finite_order.is_none() { hilbert::detect_period(&gd)? } else { None };
            let series = match hilbert::series(&gd) {
                Ok(s) => Some(s),
                Err(Error::NoPeriod) => None,
                Err(e) => return Err(e.into()),
            };
            match format {
                Format::Json => to_json(&json!({
                    "kind": gd.kind,
                    "window": gd.window,
                    "finite_order": gd.finite_order,
                    "dims": gd.dims,
                    "period": period,
                    "series": series.as_ref().map(ToString::to_string),
                    "label": series.as_ref().map(|s| s.label()),
                })),
                Format::Text => {
                    let mut out = String::new();
                    if let Some(m) = gd.finite_order {
                        let _ = writeln!(out, "sigma has order {m}");
                    }
                    for (k, d) in &gd.dims {
                        let _ = writeln!(out, "{k:>4}  {d}");
                    }
                    if let Some(p) = period {
                        let _ = writeln!(out, "cutoff {}, period {}", p.cutoff, p.period);
                    }
                    match &series {
                        Some(s) => {
                            let _ = writeln!(out, "series: {s} ({})", s.label());
                        }
                        None => {
                            let _ = writeln!(out, "no period fits the window");
                        }
                    }
                    out
                }
            }
        }
        Command::Groebner { ideal, guard, format } => {
            let i = load_ideal(&ideal, guard)?;
            let basis = polys(i.groebner()?);
            match format {
                Format::Json => to_json(&json!({ "vars": i.vars().as_ref(), "basis": basis })),
                Format::Text => basis.iter().map(|p| format!("{p}\n")).collect(),
            }
        }
        Command::Member { ideal, poly, guard, format } => {
            let i = load_ideal(&ideal, guard)?;
            let p = MultiPoly::parse(i.vars(), &poly)?;
            let nf = i.normal_form(&p)?;
            match format {
                Format::Json => to_json(&json!({ "member": nf.is_zero(), "normal_form": nf.to_string() })),
                Format::Text => format!("member: {}\nnormal form: {nf}\n", nf.is_zero()),
            }
        }
        Command::Contain { outer, inner, guard, format } => {
            let o = load_ideal(&outer, guard)?;
            let i = load_ideal(&inner, guard)?;
            let missing: Vec<String> =
                i.generators().iter().filter(|g| !o.member(g).unwrap_or(false)).map(ToString::to_string).collect();
            // Re-run once so guard trips surface as errors rather than `false`.
            let contains = o.contains(&i)?;
            match format {
                Format::Json => to_json(&json!({ "contains": contains, "missing": missing })),
                Format::Text => {
                    let mut out = format!("contains: {contains}\n");
                    for m in &missing {
                        let _ = writeln!(out, "not a member: {m}");
                    }
                    out
                }
            }
        }
        Command::PrimeCheck { ideal, guard, format } => {
            let i = load_ideal(&ideal, guard)?;
            let pc: PrimeCheck = i.triangular_prime_check()?;
            match format {
                Format::Json => to_json(&pc),
                Format::Text => format!(
                    "certified: {} ({})\nleading vars: {}\nfree vars: {}\ninverted: {}\ndimension: {}\n",
                    pc.certified,
                    pc.criterion,
                    pc.leading_vars.join(", "),
                    pc.free_vars.join(", "),
                    pc.inverted.join(", "),
                    pc.dimension.map_or("-".to_string(), |d| d.to_string())
                ),
            }
        }
        Command::Sl2 { family, fix, report } => {
            let f = match family {
                FamilyArg::B => Sl2Family::B,
                FamilyArg::C => Sl2Family::C,
                FamilyArg::Ab => Sl2Family::AB,
            };
            let fixed = if fix.is_empty() { None } else { Some(fixed_param_dimension(f, &parse_fix(&fix)?)?) };
            let o = Sl2Output { decomposition: verify_decomposition(f)?, fixed };
            match report {
                Format::Json => to_json(&o),
                Format::Text => sl2_text(&o),
            }
        }
        Command::Reproduce { only, format } => {
            let r = reproduce::run(only.as_deref())?;
            match format {
                Format::Json => to_json(&r),
                Format::Text => r.to_text(),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code())
        }
    }
}
