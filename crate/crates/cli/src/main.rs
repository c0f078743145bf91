use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use padic_embed::bounds::{
    bound_names, evaluate_bound, sharpness_primes, sharpness_quadratic, Constants, Inputs,
};
use padic_embed::factor::FactorEffort;
use padic_embed::heights::{abs_log_height, mahler_measure};
use padic_embed::modular::{
    cyclotomic_criterion, delta, generic_prime, largest_prime_power, smallest_simple_root_prime,
    verify_congruence_lemmas, verify_product_and_omega_lemmas, DEFAULT_P_MAX,
};
use padic_embed::numfield::{
    coefficient_height_certificate, power_basis_coords, primitive_from_generators, FieldSpec,
    GeneratorSet,
};
use padic_embed::padic::{EmbedOptions, DEFAULT_PRECISION};
use padic_embed::pipeline::{cyclotomic_spec, run_embed_pipeline};
use padic_embed::suite::{run_verification_suite, Fault, Scope};
use padic_embed::{Error, IntPolynomial};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "padic-embed",
    version,
    about = "p-adic embeddings of number fields with certified bounds"
)]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for prime search and suite checks (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConstantArgs {
    /// Exponent multiplier for report-only bounds.
    #[arg(long = "bound-c", default_value_t = 1.0)]
    bound_c: f64,
    /// Multiplicative constant for report-only bounds.
    #[arg(long = "bound-C", default_value_t = 1.0)]
    bound_big_c: f64,
}

impl ConstantArgs {
    fn constants(&self) -> Constants {
        Constants {
            c: self.bound_c,
            big_c: self.bound_big_c,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Find a prime and an embedding under which all elements are units.
    Embed {
        #[arg(long, required_unless_present = "cyclotomic")]
        field: Option<PathBuf>,
        /// Comma-separated element names or inline coordinates like `1:1/2`.
        #[arg(long)]
        elements: String,
        #[arg(long, env = "PADIC_EMBED_P_MAX", default_value_t = DEFAULT_P_MAX)]
        p_max: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        /// Use Q(ζ_m) with generator `z` instead of a field file.
        #[arg(long, conflicts_with = "field")]
        cyclotomic: Option<u64>,
        #[command(flatten)]
        constants: ConstantArgs,
    },
    /// Primitive element from the generators listed in a field spec.
    Primitive {
        #[arg(long)]
        field: PathBuf,
        /// Overrides the spec's generator list.
        #[arg(long)]
        generators: Option<String>,
    },
    /// Integer power-basis coordinates and their height certificate.
    Coords {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        elements: String,
    },
    /// H, M and h of a polynomial given as `[a0, a1, ...]`.
    Heights {
        #[arg(long)]
        poly: String,
    },
    /// Least prime p coprime to Q with a simple root of f mod p.
    SimpleRootPrime {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "1")]
        q: String,
        #[arg(long, env = "PADIC_EMBED_P_MAX", default_value_t = DEFAULT_P_MAX)]
        p_max: u64,
    },
    /// Constant-free simple-root prime with its case bound.
    GenericPrime {
        #[arg(long)]
        poly: String,
    },
    /// Brute-force congruence root counts and the product bound.
    VerifyLemmas {
        #[arg(long)]
        poly: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        ell: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        #[arg(long, value_delimiter = ',', default_value = "10,100")]
        windows: Vec<u64>,
        /// Also check the product lower bound and prime count up to L.
        #[arg(long)]
        product_l: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
    },
    /// δ(m) and the cyclotomic root-count criterion.
    Delta {
        #[arg(long)]
        m: u64,
        /// Primes to test against the criterion.
        #[arg(long, value_delimiter = ',')]
        ell: Vec<u64>,
    },
    /// Evaluate a named bound on JSON inputs.
    Bounds {
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long, required_unless_present = "list")]
        inputs: Option<PathBuf>,
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        constants: ConstantArgs,
    },
    /// Families showing the bounds are close to optimal.
    Sharpness {
        #[command(subcommand)]
        family: Sharpness,
    },
    /// Randomised check of every certified inequality.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = ScopeArg::Quick)]
        scope: ScopeArg,
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Subcommand)]
enum Sharpness {
    Primes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    Quadratic {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    DiscriminantSign,
}

enum Failure {
    Lib(Error),
    Input(String),
    /// Checks ran but some failed.
    Verify(Value, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::MissingInput(_)
        | Error::UnknownBound(_)
        | Error::NotPrimePair(..)
        | Error::ZeroPolynomial
        | Error::ZeroElement
        | Error::DegreeTooSmall(_)
        | Error::NotPrimitiveContent(_)
        | Error::PreconditionViolated(_)
        | Error::HypothesisNotMet(_)
        | Error::FieldMismatch => 2,
        Error::NotGenerating(_) => 3,
        Error::SearchExhausted(_) => 4,
        _ => 5,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<FieldSpec, Failure> {
    Ok(FieldSpec::from_json(&read(path)?)?)
}

fn parse_poly(text: &str) -> Result<IntPolynomial, Failure> {
    serde_json::from_str(text)
        .map_err(|e| Failure::Lib(Error::Parse(format!("polynomial `{text}`: {e}"))))
}

fn split_names(s: &str) -> Vec<String> {
    s.split(',')
        .map(|x| x.trim().to_string())
        .filter(|x| !x.is_empty())
        .collect()
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Runs one subcommand, returning its JSON result and text rendering.
fn run(cli: &Cli) -> Result<(Value, String), Failure> {
    match &cli.command {
        Command::Embed {
            field,
            elements,
            p_max,
            precision,
            cyclotomic,
            constants,
        } => {
            let spec = match (field, cyclotomic) {
                (_, Some(m)) => cyclotomic_spec(*m)?,
                (Some(path), None) => load_spec(path)?,
                (None, None) => {
                    return Err(Failure::Input("--field or --cyclotomic is required".into()))
                }
            };
            let names = split_names(elements);
            if names.is_empty() {
                return Err(Failure::Input("--elements is empty".into()));
            }
            let opts = EmbedOptions {
                p_max: *p_max,
                precision: *precision,
                constants: constants.constants(),
                seed: cli.seed,
            };
            let r = run_embed_pipeline(&spec, &names, *cyclotomic, &opts)?;
            let e = &r.embedding;
            let mut text = format!("field: {}\n", r.defining_poly);
            if let Some(p) = &r.primitive {
                text += &format!(
                    "primitive element: tuple {:?}, minimal polynomial {}\n",
                    p.tuple, p.min_poly
                );
            }
            text += &format!("p = {}\nroot mod p = {}\n", e.p, e.root_mod_p);
            let shown: Vec<String> = e
                .eta_digits
                .iter()
                .take(12)
                .map(|d| d.to_string())
                .collect();
            text += &format!("eta digits (base p, low first): {} ...\n", shown.join(" "));
            for (name, v) in &e.element_valuations {
                text += &format!("v_p({name}) = {v}\n");
            }
            let skipped: Vec<String> = e
                .skipped_primes
                .iter()
                .map(|(p, why)| format!("{p}:{}", to_value(why).as_str().unwrap_or("?")))
                .collect();
            text += &format!("skipped: {}\n", skipped.join(" "));
            for b in &r.bounds {
                text += &format!(
                    "bound {}: log bound {:.4}, {} ({})\n",
                    b.name,
                    b.log_bound,
                    if b.holds.unwrap_or(true) {
                        "ok"
                    } else {
                        "exceeded"
                    },
                    if b.asserted {
                        "asserted"
                    } else {
                        "report only"
                    }
                );
            }
            Ok((to_value(&r), text))
        }
        Command::Primitive { field, generators } => {
            let mut spec = load_spec(field)?;
            if let Some(g) = generators {
                spec.generators = split_names(g);
            }
            let k = spec.field()?;
            let gens = spec
                .generators
                .iter()
                .map(|g| spec.element(&k, g))
                .collect::<Result<Vec<_>, _>>()?;
            let prim = primitive_from_generators(&GeneratorSet::new(&k, gens)?)?;
            let c = &prim.certificate;
            let text = format!(
                "tuple {:?}\nminimal polynomial {}\nh = {:.6} <= {:.6}\nlog M = {:.6} <= {:.6}\n",
                prim.tuple,
                prim.min_poly,
                c.height,
                c.height_bound,
                c.log_mahler,
                c.log_mahler_bound
            );
            let v = json!({
                "tuple": prim.tuple,
                "element": prim.element.coords().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                "min_poly": to_value(&prim.min_poly),
                "certificate": to_value(c),
            });
            Ok((v, text))
        }
        Command::Coords { field, elements } => {
            let spec = load_spec(field)?;
            let k = spec.field()?;
            let mut out = Vec::new();
            let mut text = String::new();
            for name in split_names(elements) {
                let beta = spec.element(&k, &name)?;
                let coords = power_basis_coords(&beta)?;
                let cert = coefficient_height_certificate(&beta)?;
                let a: Vec<String> = coords.a.iter().map(|x| x.to_string()).collect();
                text += &format!(
                    "{name} = ({}) / {}\n  max h(a_i/b) = {:.4}, log b = {:.4}, bound {:.4}\n",
                    a.join(", "),
                    coords.b,
                    cert.coefficient_heights.iter().cloned().fold(0.0, f64::max),
                    cert.log_b,
                    cert.uniform_bound
                );
                out.push(json!({"name": name, "coords": to_value(&coords), "certificate": to_value(&cert)}));
            }
            Ok((json!({ "elements": out }), text))
        }
        Command::Heights { poly } => {
            let f = parse_poly(poly)?;
            let m = mahler_measure(&f)?;
            let h = abs_log_height(&f)?;
            let text = format!("H = {}\nM = {}\nh = {}\n", f.height(), m.value, h);
            Ok((
                json!({"poly": to_value(&f), "H": f.height().to_string(), "M": to_value(&m), "h": h}),
                text,
            ))
        }
        Command::SimpleRootPrime { poly, q, p_max } => {
            let f = parse_poly(poly)?;
            let q: BigInt = q
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer `{q}`")))?;
            let w = smallest_simple_root_prime(&f, &q, *p_max)?;
            Ok((to_value(&w), format!("p = {}\nroot = {}\n", w.p, w.a)))
        }
        Command::GenericPrime { poly } => {
            let f = parse_poly(poly)?;
            let g = generic_prime(&f)?;
            let text = format!(
                "p = {}\nroot = {}\ncase {} (point {}, value {})\nbound = {}\n",
                g.p,
                g.root,
                g.case.number(),
                g.point,
                g.value,
                g.bound
            );
            Ok((to_value(&g), text))
        }
        Command::VerifyLemmas {
            poly,
            ell,
            k_max,
            windows,
            product_l,
            c1,
            c2,
        } => {
            let f = parse_poly(poly)?;
            let mut reports = Vec::new();
            let mut text = String::new();
            let mut ok = true;
            for &l in ell {
                let r = verify_congruence_lemmas(&f, l, *k_max, windows)?;
                text += &format!(
                    "ell = {l}: {} inequalities, {}\n",
                    r.check_count(),
                    if r.all_hold() { "all hold" } else { "FAILED" }
                );
                ok &= r.all_hold();
                reports.push(to_value(&r));
            }
            let mut v = json!({ "poly": to_value(&f), "congruence": reports });
            if let Some(l) = product_l {
                let r =
                    verify_product_and_omega_lemmas(&f, *l, *c1, *c2, &FactorEffort::default())?;
                match &r.product {
                    Some(p) => {
                        text += &format!(
                            "product bound at L = {l}: log W = {:.3} vs {:.3}, {}\n",
                            p.log_w,
                            p.log_bound,
                            if p.holds { "holds" } else { "FAILED" }
                        );
                        ok &= p.holds;
                    }
                    None => {
                        text += &format!(
                            "product bound skipped: {}\n",
                            r.product_skipped.as_deref().unwrap_or("")
                        )
                    }
                }
                text += &format!(
                    "omega = {} (ratio to reported bound {:.3})\n",
                    r.omega, r.omega_ratio
                );
                v["product"] = to_value(&r);
            }
            if !ok {
                return Err(Failure::Verify(v, text));
            }
            Ok((v, text))
        }
        Command::Delta { m, ell } => {
            let d = delta(*m);
            let (l, e) = largest_prime_power(*m);
            let crit: Vec<Value> = ell
                .iter()
                .map(|&p| json!({"ell": p, "criterion": cyclotomic_criterion(*m, p)}))
                .collect();
            let mut text = format!("delta({m}) = {d}\nlargest prime power {l}^{e}\n");
            for c in &crit {
                text += &format!("ell = {}: {}\n", c["ell"], c["criterion"]);
            }
            Ok((
                json!({"m": m, "delta": d, "largest_prime_power": [l, e], "criteria": crit}),
                text,
            ))
        }
        Command::Bounds {
            name,
            inputs,
            list,
            constants,
        } => {
            if *list {
                let names = bound_names();
                return Ok((json!({ "bounds": names }), names.join("\n") + "\n"));
            }
            let (name, path) = (name.as_ref().unwrap(), inputs.as_ref().unwrap());
            let x: Inputs =
                serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
            let r = evaluate_bound(name, &x, &constants.constants())?;
            let text = format!(
                "{}: log bound = {}, bound = {}{}\n",
                r.name,
                r.log_bound,
                r.bound_value,
                r.holds
                    .map(|h| format!(", {}", if h { "holds" } else { "exceeded" }))
                    .unwrap_or_default()
            );
            if !r.passes() {
                return Err(Failure::Verify(to_value(&r), text));
            }
            Ok((to_value(&r), text))
        }
        Command::Sharpness {
            family: Sharpness::Primes { n, r },
        } => {
            let rep = sharpness_primes(*n, *r)?;
            let text = format!(
                "least prime dividing no beta: {}\np_(nR) = {}\n{}\n",
                rep.least_good_prime,
                rep.p_nr,
                if rep.holds { "holds" } else { "FAILED" }
            );
            if !rep.holds {
                return Err(Failure::Verify(to_value(&rep), text));
            }
            Ok((to_value(&rep), text))
        }
        Command::Sharpness {
            family: Sharpness::Quadratic { k, t, samples },
        } => {
            let rep = sharpness_quadratic(*k, *t, *samples, cli.seed)?;
            let text = format!(
                "Q(sqrt {}), {} samples, min H = {} vs k/3 = {:.3}, {}\n",
                rep.radicand,
                rep.samples.len(),
                rep.min_height,
                *k as f64 / 3.0,
                if rep.holds {
                    "holds"
                } else if rep.asserted {
                    "FAILED"
                } else {
                    "fails (not asserted)"
                }
            );
            Ok((to_value(&rep), text))
        }
        Command::VerifyAll {
            scope,
            inject_fault,
        } => {
            let scope = match scope {
                ScopeArg::Quick => Scope::Quick,
                ScopeArg::Full => Scope::Full,
            };
            let fault = inject_fault.map(|FaultArg::DiscriminantSign| Fault::DiscriminantSign);
            let r = run_verification_suite(scope, cli.seed, fault);
            let mut text = String::new();
            for (name, t) in &r.checks {
                text += &format!("{name}: {} passed, {} failed\n", t.passed, t.failed);
                for f in &t.failures {
                    text += &format!("  {f}\n");
                }
            }
            text += &format!("total {} checks, {} failed\n", r.total, r.failed);
            if !r.ok() {
                text += &format!("failing checks: {}\n", r.failing().join(", "));
                return Err(Failure::Verify(to_value(&r), text));
            }
            Ok((to_value(&r), text))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Embed { .. } => "embed",
        Command::Primitive { .. } => "primitive",
        Command::Coords { .. } => "coords",
        Command::Heights { .. } => "heights",
        Command::SimpleRootPrime { .. } => "simple-root-prime",
        Command::GenericPrime { .. } => "generic-prime",
        Command::VerifyLemmas { .. } => "verify-lemmas",
        Command::Delta { .. } => "delta",
        Command::Bounds { .. } => "bounds",
        Command::Sharpness { .. } => "sharpness",
        Command::VerifyAll { .. } => "verify-all",
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn out(s: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn emit(json_mode: bool, command: &str, body: Result<Value, (String, String)>, text: &str) {
    if json_mode {
        let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
        match body {
            Ok(r) => {
                v["ok"] = json!(true);
                v["result"] = r;
            }
            Err((kind, msg)) => {
                v["ok"] = json!(false);
                v["error"] = json!({ "kind": kind, "message": msg });
            }
        }
        out(&(serde_json::to_string_pretty(&v).unwrap() + "\n"));
    } else {
        out(&text);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers > 0 {
        // failure only means a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok((v, text)) => {
            emit(cli.json, name, Ok(v), &text);
            ExitCode::SUCCESS
        }
        Err(Failure::Verify(v, text)) => {
            if cli.json {
                let mut doc =
                    json!({ "schema_version": SCHEMA_VERSION, "command": name, "ok": false });
                doc["result"] = v;
                out(&(serde_json::to_string_pretty(&doc).unwrap() + "\n"));
            } else {
                out(&text);
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            emit(cli.json, name, Err(("input".into(), msg)), "");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            emit(
                cli.json,
                name,
                Err((
                    format!("{e:?}").split('(').next().unwrap_or("").to_string(),
                    e.to_string(),
                )),
                "",
            );
            ExitCode::from(code)
        }
    }
}
