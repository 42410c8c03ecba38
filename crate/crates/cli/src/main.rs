//! `parabolic-lattice`: batch front end reading and writing JSON.

use std::cell::RefCell;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use parabolic_lattice::arith::rat_from_int;
use parabolic_lattice::bbf::{
    density_hypothesis_check, fujiki_recover_q, period_eta_slice, period_membership, positive_cone_component,
    ConeSide, PeriodLine,
};
use parabolic_lattice::catalog::{catalog, CatalogEntry};
use parabolic_lattice::discriminant::{
    discriminant_group, isotropic_subgroups, stably_equivalent_check, verify_nikulin, StableVerdict,
};
use parabolic_lattice::json::{
    field, finite_form_to_json, int_to_json, lattice_from_json, lattice_to_json, matrix_to_json,
    orbit_report_to_json, rat_from_json, rat_to_json, rat_vector_from_json, rat_vector_to_json, vector_from_json,
    vector_to_json,
};
use parabolic_lattice::parabolic::{
    lemma_alpha_divides, orbit_census, orthogonal_group_bruteforce, reflection_generators, DEFAULT_SEARCH_BUDGET,
};
use parabolic_lattice::{Int, IntVector, Lattice, LatticeError, Rat};

const THREADS_VAR: &str = "PARABOLIC_LATTICE_THREADS";

#[derive(Parser, Debug)]
#[command(name = "parabolic-lattice", version, about = "Exact lattice computations for hyperkähler BBF lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input JSON file, or "-" for stdin.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Height bound (max |coordinate|) for vector enumeration.
    #[arg(long, global = true, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    height: u64,
    /// Entry bound for brute-forced isometries and reflection roots.
    #[arg(long = "entry-bound", global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    entry_bound: u64,
    /// Budget for enumerating discriminant groups and subgroups.
    #[arg(long, global = true, default_value_t = 1 << 12, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Catalog entry: k3, hilb_k3, kummer, og6, og10.
    #[arg(long, global = true)]
    name: Option<String>,
    /// Parameter of the hilb_k3 and kummer families.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    n: Option<u32>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Dump a catalog entry.
    Catalog,
    /// Rank, signature, discriminant and parity of a lattice.
    Info,
    /// The discriminant form.
    Discr,
    /// Overlattices from all isotropic subgroups, with the gluing checks.
    Overlattices,
    /// Check that every divisor divides the discriminant.
    LemmaCheck,
    /// Orbit census of primitive isotropic vectors.
    Orbits {
        #[arg(long, value_enum, default_value_t = GeneratorSource::Auto)]
        generators: GeneratorSource,
    },
    /// Recover the BBF form and Fujiki constant from top-degree values.
    FujikiRecover,
    /// Period-domain and positive-cone predicates.
    PeriodCheck,
    /// Compare two lattices by stable-equivalence invariants.
    StableCheck,
    /// Signature hypothesis of the density argument.
    DensityCheck,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum GeneratorSource {
    /// Brute force for rank <= 4, reflections otherwise.
    Auto,
    Bruteforce,
    Reflections,
}

enum Failure {
    Usage(String),
    Domain(LatticeError),
    Io(String),
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = Result<T, Failure>;

fn read_input(cli: &Cli) -> Outcome<Value> {
    let path = cli.input.as_deref().ok_or_else(|| Failure::Usage("this command needs --input".into()))?;
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Domain(LatticeError::InputParse(format!("{path}: {e}"))))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Domain(LatticeError::InputParse(format!("{path}: {e}"))))
}

fn catalog_from_flags(cli: &Cli) -> Outcome<Option<CatalogEntry>> {
    match &cli.name {
        Some(name) => Ok(Some(catalog(name, cli.n)?)),
        None => Ok(None),
    }
}

/// The lattice document may be the top level or sit under `"lattice"`.
fn lattice_in(doc: &Value) -> Outcome<Lattice> {
    Ok(lattice_from_json(doc.get("lattice").unwrap_or(doc))?)
}

/// `--name` selects a catalog lattice, otherwise `--input` is read.
fn lattice_from_flags(cli: &Cli) -> Outcome<(Lattice, Option<Value>)> {
    if let Some(entry) = catalog_from_flags(cli)? {
        if cli.input.is_some() {
            return Err(Failure::Usage("give either --name or --input, not both".into()));
        }
        return Ok((entry.lattice, None));
    }
    if cli.input.is_none() {
        return Err(Failure::Usage("this command needs --input or --name".into()));
    }
    let doc = read_input(cli)?;
    Ok((lattice_in(&doc)?, Some(doc)))
}

fn signature_json(l: &Lattice) -> Value {
    let s = l.signature();
    json!([s.s_plus, s.s_minus])
}

fn lattice_summary(l: &Lattice) -> Value {
    json!({
        "rank": l.rank(),
        "gram": matrix_to_json(l.gram()),
        "signature": signature_json(l),
        "discriminant": int_to_json(&l.discriminant()),
        "even": l.is_even(),
    })
}

fn cmd_catalog(cli: &Cli) -> Outcome<Value> {
    let entry = catalog_from_flags(cli)?.ok_or_else(|| Failure::Usage("catalog needs --name".into()))?;
    let mut out = lattice_summary(&entry.lattice);
    out["name"] = json!(entry.name.to_string());
    out["b2"] = json!(entry.b2);
    out["fujiki"] = match &entry.fujiki {
        Some(f) => json!({ "n": f.n, "c": rat_to_json(&f.c) }),
        None => Value::Null,
    };
    Ok(out)
}

fn cmd_info(cli: &Cli) -> Outcome<Value> {
    let (l, _) = lattice_from_flags(cli)?;
    Ok(lattice_summary(&l))
}

fn cmd_discr(cli: &Cli) -> Outcome<Value> {
    let (l, _) = lattice_from_flags(cli)?;
    let a = discriminant_group(&l);
    Ok(json!({
        "lattice": lattice_to_json(&l),
        "discriminant": int_to_json(&l.discriminant()),
        "order": int_to_json(&a.order()),
        "even": a.even,
        "form": finite_form_to_json(&a),
        "generators": a.generators.iter().map(|g| rat_vector_to_json(g)).collect::<Vec<_>>(),
    }))
}

fn cmd_overlattices(cli: &Cli) -> Outcome<Value> {
    let (l, _) = lattice_from_flags(cli)?;
    let a = discriminant_group(&l);
    let mut entries = Vec::new();
    for h in isotropic_subgroups(&a, cli.budget)? {
        let report = verify_nikulin(&l, &h, cli.budget)?;
        entries.push(json!({
            "order": h.order(),
            "elements": h.representatives.iter().map(|r| rat_vector_to_json(r)).collect::<Vec<_>>(),
            "overlattice": lattice_to_json(&report.overlattice),
            "discriminant": int_to_json(&report.overlattice_discriminant),
            "even": report.overlattice.is_even(),
            "discriminant_relation": report.discriminant_relation_holds,
            "quotient_form_matches": report.orthogonal_is_dual_quotient && report.quotient_map_preserves_q,
            "pass": report.pass,
        }));
    }
    Ok(json!({
        "lattice": lattice_to_json(&l),
        "discriminant_order": int_to_json(&a.order()),
        "subgroups": entries,
    }))
}

fn cmd_lemma(cli: &Cli) -> Outcome<Value> {
    let (l, _) = lattice_from_flags(cli)?;
    let r = lemma_alpha_divides(&l, cli.height)?;
    Ok(json!({
        "pass": r.pass,
        "alphas": r.alphas.iter().map(int_to_json).collect::<Vec<_>>(),
        "alpha_counts": r.alpha_counts.iter().map(|(a, k)| json!([int_to_json(a), k])).collect::<Vec<_>>(),
        "discriminant": int_to_json(&r.discriminant),
        "vectors_checked": r.vectors_checked,
        "height": cli.height,
    }))
}

fn cmd_orbits(cli: &Cli, source: GeneratorSource) -> Outcome<Value> {
    let (l, _) = lattice_from_flags(cli)?;
    let brute = match source {
        GeneratorSource::Auto => l.rank() <= 4,
        GeneratorSource::Bruteforce => true,
        GeneratorSource::Reflections => false,
    };
    let gens = if brute {
        orthogonal_group_bruteforce(&l, cli.entry_bound, DEFAULT_SEARCH_BUDGET)?.matrices
    } else {
        reflection_generators(&l, cli.entry_bound)?
    };
    let report = orbit_census(&l, cli.height, &gens)?;
    let mut out = orbit_report_to_json(&report);
    out["generators"] = json!({
        "source": if brute { "bruteforce" } else { "reflections" },
        "entry_bound": cli.entry_bound,
        "count": gens.len(),
    });
    Ok(out)
}

fn power(x: &Rat, n: usize) -> Rat {
    (0..n).fold(Rat::from_integer(Int::from(1)), |acc, _| acc * x)
}

/// Inputs: `{"n", "c", "gram"}` (F built as c q^n), `{"n", "dim", "samples":
/// [{"x", "value"}]}` (F tabulated), or a catalog entry via `--name`.
fn cmd_fujiki(cli: &Cli) -> Outcome<Value> {
    if let Some(entry) = catalog_from_flags(cli)? {
        let fujiki = entry.fujiki.ok_or_else(|| Failure::Domain(LatticeError::BadInputs("entry has no Fujiki data".into())))?;
        let l = entry.lattice;
        let f = |x: &[Int]| &fujiki.c * power(&rat_from_int(&l.q_eval(x).expect("rank matches")), fujiki.n);
        return Ok(recovery_json(fujiki_recover_q(f, l.rank(), fujiki.n)?, fujiki.n));
    }
    let doc = read_input(cli)?;
    let n = field(&doc, "n")?
        .as_u64()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Domain(LatticeError::InputParse("\"n\" must be a positive integer".into())))? as usize;
    if let Some(samples) = doc.get("samples") {
        let dim = field(&doc, "dim")?
            .as_u64()
            .ok_or_else(|| Failure::Domain(LatticeError::InputParse("\"dim\" must be an integer".into())))? as usize;
        let rows = samples
            .as_array()
            .ok_or_else(|| Failure::Domain(LatticeError::InputParse("\"samples\" must be an array".into())))?;
        let mut table = std::collections::BTreeMap::new();
        for s in rows {
            let x = vector_from_json(field(s, "x")?)?;
            if x.len() != dim {
                return Err(LatticeError::DimensionMismatch { expected: dim, got: x.len() }.into());
            }
            table.insert(x, rat_from_json(field(s, "value")?)?);
        }
        let missing: RefCell<Option<IntVector>> = RefCell::new(None);
        let f = |x: &[Int]| match table.get(x) {
            Some(v) => v.clone(),
            None => {
                missing.borrow_mut().get_or_insert_with(|| x.to_vec());
                Rat::from_integer(Int::from(0))
            }
        };
        let result = fujiki_recover_q(f, dim, n);
        if let Some(x) = missing.into_inner() {
            let coords: Vec<String> = x.iter().map(Int::to_string).collect();
            return Err(LatticeError::BadInputs(format!("no sample at [{}]", coords.join(", "))).into());
        }
        return Ok(recovery_json(result?, n));
    }
    let l = lattice_in(&doc)?;
    let c = rat_from_json(field(&doc, "c")?)?;
    let f = |x: &[Int]| &c * power(&rat_from_int(&l.q_eval(x).expect("rank matches")), n);
    Ok(recovery_json(fujiki_recover_q(f, l.rank(), n)?, n))
}

fn recovery_json(r: parabolic_lattice::bbf::FujikiRecovery, n: usize) -> Value {
    json!({
        "gram": matrix_to_json(&r.gram),
        "c": rat_to_json(&r.c),
        "n": n,
        "anchor": vector_to_json(&r.anchor),
    })
}

/// Input: lattice plus `"re"`, `"im"`, optional `"eta"`, optional
/// `"kappa"`/`"rho"` for the positive-cone comparison.
fn cmd_period(cli: &Cli) -> Outcome<Value> {
    let doc = read_input(cli)?;
    let l = lattice_in(&doc)?;
    let mut out = json!({});
    if doc.get("re").is_some() || doc.get("im").is_some() {
        let re = rat_vector_from_json(field(&doc, "re")?)?;
        let im = match doc.get("im") {
            Some(v) => rat_vector_from_json(v)?,
            None => vec![Rat::from_integer(Int::from(0)); re.len()],
        };
        let line = PeriodLine::new(re, im)?;
        out["member"] = json!(period_membership(&l, &line)?);
        out["q_re_re"] = rat_to_json(&l.q_rat(&line.re)?);
        out["q_im_im"] = rat_to_json(&l.q_rat(&line.im)?);
        out["q_re_im"] = rat_to_json(&l.b_rat(&line.re, &line.im)?);
        if let Some(eta) = doc.get("eta") {
            out["eta_slice"] = json!(period_eta_slice(&l, &rat_vector_from_json(eta)?, &line)?);
        }
    }
    if doc.get("kappa").is_some() || doc.get("rho").is_some() {
        let kappa = rat_vector_from_json(field(&doc, "kappa")?)?;
        let rho = rat_vector_from_json(field(&doc, "rho")?)?;
        let side = positive_cone_component(&l, &kappa, &rho)?;
        out["cone"] = json!(match side {
            ConeSide::Same => "Same",
            ConeSide::Opposite => "Opposite",
        });
    }
    if out.as_object().is_some_and(|m| m.is_empty()) {
        return Err(LatticeError::BadInputs("expected \"re\"/\"im\" or \"kappa\"/\"rho\"".into()).into());
    }
    Ok(out)
}

/// Input: `{"a": lattice, "b": lattice}`.
fn cmd_stable(cli: &Cli) -> Outcome<Value> {
    let doc = read_input(cli)?;
    let a = lattice_from_json(field(&doc, "a")?)?;
    let b = lattice_from_json(field(&doc, "b")?)?;
    Ok(match stably_equivalent_check(&a, &b, cli.budget)? {
        StableVerdict::NotStablyEquivalent { reason } => json!({ "verdict": "NotStablyEquivalent", "reason": reason }),
        StableVerdict::InvariantsMatch => json!({ "verdict": "InvariantsMatch", "reason": Value::Null }),
    })
}

/// Input: lattice plus `"v"`, `"v_prime"`; with `--name` these default to
/// `e1` and `e1 - e2`, i.e. inside the leading hyperbolic plane.
fn cmd_density(cli: &Cli) -> Outcome<Value> {
    let (l, doc) = lattice_from_flags(cli)?;
    let (v, w) = match doc {
        Some(doc) => (vector_from_json(field(&doc, "v")?)?, vector_from_json(field(&doc, "v_prime")?)?),
        None => {
            let mut v = vec![Int::from(0); l.rank()];
            v[0] = Int::from(1);
            let mut w = v.clone();
            w[1] = Int::from(-1);
            (v, w)
        }
    };
    let r = density_hypothesis_check(&l, &v, &w)?;
    Ok(json!({
        "b2": r.b2,
        "v": vector_to_json(&v),
        "v_prime": vector_to_json(&w),
        "plane_signature": [r.plane_signature.0, r.plane_signature.1],
        "quotient_signature": [r.quotient_signature.0, r.quotient_signature.1],
        "radical_rank": r.radical_rank,
        "expected_signature": [r.expected_signature.0, r.expected_signature.1],
        "signature_matches": r.signature_matches,
        "rank_hypothesis": r.rank_hypothesis,
        "pass": r.pass,
    }))
}

fn configure_threads() -> Outcome<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Io(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Outcome<Value> {
    configure_threads()?;
    match cli.command {
        Command::Catalog => cmd_catalog(cli),
        Command::Info => cmd_info(cli),
        Command::Discr => cmd_discr(cli),
        Command::Overlattices => cmd_overlattices(cli),
        Command::LemmaCheck => cmd_lemma(cli),
        Command::Orbits { generators } => cmd_orbits(cli, generators),
        Command::FujikiRecover => cmd_fujiki(cli),
        Command::PeriodCheck => cmd_period(cli),
        Command::StableCheck => cmd_stable(cli),
        Command::DensityCheck => cmd_density(cli),
    }
}

fn write_output(cli: &Cli, report: &Value) -> Outcome<()> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| Failure::Io(e.to_string()))?;
    text.push('\n');
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn report_failure(code: &str, detail: String) {
    eprintln!("{}", json!({ "error": code, "detail": detail }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli).and_then(|report| write_output(&cli, &report)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(detail)) => {
            report_failure("UsageError", detail);
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            report_failure(e.code(), e.to_string());
            ExitCode::from(1)
        }
        Err(Failure::Io(detail)) => {
            report_failure("IoError", detail);
            ExitCode::from(1)
        }
    }
}
