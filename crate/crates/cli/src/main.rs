use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use parikh_holo::algebra::RatFun;
use parikh_holo::automata::{
    accepts, brute_force_count, count_words, intersect, is_weakly_unambiguous, normalize_unit_vectors, pa_to_rcm,
    rcm_to_pa, ParikhAutomaton, Unambiguity,
};
use parikh_holo::document::{poly_to_terms, report_to_json, verdict_to_json, Document};
use parikh_holo::holonomic::{
    automaton_factor_bounds, gf_bounds, ode_to_recurrence, pa_ode_with, pa_weighted_ode, recurrence_bounds, recurrence_matches_counts,
    weighted_series_factors,
    witness_formula, BoundReport, BoundValue,
};
use parikh_holo::inclusion::{decide_inclusion_with, witness_bound_refined, InclusionOptions};
use parikh_holo::{Error, Limits};

#[derive(Parser)]
#[command(name = "parikh-holo", version, about = "Counting, generating series and inclusion for Parikh automata")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// JSON file overriding resource limits.
    #[arg(long, env = "PARIKH_HOLO_LIMITS", global = true)]
    limits: Option<PathBuf>,
    /// Seed for randomized evaluation points.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Number of accepted words of each length.
    Count {
        file: PathBuf,
        #[arg(long)]
        length: usize,
        /// Enumerate words instead of running the dynamic program.
        #[arg(long)]
        brute_force: bool,
    },
    /// Generating series of the length counts.
    Series {
        file: PathBuf,
        #[arg(long, group = "what")]
        ode: bool,
        #[arg(long, group = "what")]
        recurrence: bool,
        #[arg(long, group = "what")]
        rational: bool,
        /// Also emit the equation of the weighted series before setting y = 1.
        #[arg(long, conflicts_with = "rational")]
        weighted: bool,
        #[arg(long)]
        assume_unambiguous: bool,
    },
    /// Weak unambiguity of the automaton and of its constraint presentation.
    Check {
        file: PathBuf,
        /// Norm up to which the constraint presentation is checked.
        #[arg(long, default_value_t = 6)]
        presentation_bound: u32,
    },
    /// Product automaton for the intersection.
    Intersect { a: PathBuf, b: PathBuf },
    /// Decides L(A) ⊆ L(B).
    Include {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 30)]
        cap: usize,
        #[arg(long)]
        assume_unambiguous: bool,
        /// Use only s + S + |t_S| + 1, without the root scan.
        #[arg(long)]
        no_refine: bool,
    },
    /// Explicit bounds for an automaton, equation or recurrence.
    Bounds {
        file: PathBuf,
        /// Also run the symbolic pipeline and report measured values.
        #[arg(long)]
        measure: bool,
    },
    /// Converts between automata and RCM presentations.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Pa,
    Rcm,
    /// Relabel transitions with unit vectors.
    Unit,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Ambiguous(_)) | Some(Error::AmbiguousPresentation) => 4,
        Some(Error::ResourceExceeded(_)) => 5,
        _ => 3,
    }
}

fn load_limits(cli: &Cli) -> anyhow::Result<Limits> {
    let mut limits = match &cli.limits {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing limits {}", p.display()))?
        }
        None => Limits::default(),
    };
    if let Some(s) = cli.seed {
        limits.seed = s;
    }
    Ok(limits)
}

fn load(path: &Path) -> anyhow::Result<Document> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Document::from_json(&text)?)
}

fn load_pa(path: &Path) -> anyhow::Result<ParikhAutomaton> {
    match load(path)? {
        Document::Pa(a) => Ok(a),
        Document::Rcm(r) => Ok(rcm_to_pa(&r)),
        d => bail!("{}: expected a pa or rcm document, found {}", path.display(), d.kind()),
    }
}

fn print_json(v: &Value) {
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let limits = load_limits(cli)?;
    match &cli.command {
        Command::Count { file, length, brute_force } => {
            let a = load_pa(file)?;
            let counts: Vec<String> = if *brute_force {
                brute_force_count(&a, *length).iter().map(u64::to_string).collect()
            } else {
                count_words(&a, *length).iter().map(|c| c.to_string()).collect()
            };
            match cli.format {
                Format::Csv => println!("{}", counts.join(",")),
                Format::Json => print_json(&json!({
                    "method": if *brute_force { "brute_force" } else { "dynamic_programming" },
                    "counts": counts,
                })),
            }
            Ok(0)
        }
        Command::Series { file, recurrence, rational, weighted, assume_unambiguous, .. } => {
            let a = load_pa(file)?;
            if !assume_unambiguous {
                require_unambiguous(&a, &limits)?;
            }
            series(cli.format, &a, *recurrence, *rational, *weighted, &limits)
        }
        Command::Check { file, presentation_bound } => {
            let a = load_pa(file)?;
            let verdict = is_weakly_unambiguous(&a, &limits);
            let presentation = a.constraint().base().check_unambiguous(*presentation_bound);
            let flagged = a.constraint().base().is_unambiguous();
            let (name, witness, runs, code) = match &verdict {
                Unambiguity::Yes => ("yes", None, None, 0),
                Unambiguity::No(w) => ("no", Some(a.word_to_string(w)), Some(accepts(&a, w)?.len()), 1),
                Unambiguity::ResourceExceeded(_) => ("resource_exceeded", None, None, 2),
            };
            match cli.format {
                Format::Csv => println!("{name},{}", witness.clone().unwrap_or_default()),
                Format::Json => {
                    let mut v = json!({
                        "weakly_unambiguous": name,
                        "witness": witness,
                        "accepting_runs_on_witness": runs,
                        "presentation": {
                            "flagged_unambiguous": flagged,
                            "checked_up_to_norm": presentation_bound,
                            "no_overlap_found": presentation,
                        },
                    });
                    if let Unambiguity::ResourceExceeded(r) = &verdict {
                        v["reason"] = json!(r);
                    }
                    print_json(&v);
                }
            }
            Ok(code)
        }
        Command::Intersect { a, b } => {
            let c = intersect(&load_pa(a)?, &load_pa(b)?)?;
            print!("{}", Document::Pa(c).to_json());
            Ok(0)
        }
        Command::Include { a, b, cap, assume_unambiguous, no_refine } => {
            let pa = load_pa(a)?;
            let pb = load_pa(b)?;
            let opts = InclusionOptions { cap: *cap, check_ambiguity: !assume_unambiguous, refine: !no_refine };
            let v = decide_inclusion_with(&pa, &pb, &opts, &limits)?;
            match cli.format {
                Format::Csv => {
                    let j = verdict_to_json(&v, &pa);
                    let detail = match j["verdict"].as_str() {
                        Some("included") => j["certified_up_to"].to_string(),
                        Some("not_included") => format!(
                            "{},{}",
                            j["witness_length"],
                            j["witness_word"].as_str().unwrap_or("")
                        ),
                        _ => j["checked_up_to"].to_string(),
                    };
                    println!("{},{detail}", j["verdict"].as_str().unwrap_or(""));
                }
                Format::Json => print_json(&verdict_to_json(&v, &pa)),
            }
            Ok(v.exit_code() as u8)
        }
        Command::Bounds { file, measure } => {
            let report = bounds(file, *measure, &limits)?;
            emit_report(cli.format, &report);
            Ok(0)
        }
        Command::Convert { file, to } => {
            let doc = load(file)?;
            let out = match (doc, to) {
                (Document::Rcm(r), Target::Pa) => Document::Pa(rcm_to_pa(&r)),
                (Document::Rcm(r), Target::Unit) => Document::Pa(normalize_unit_vectors(&rcm_to_pa(&r))),
                (Document::Pa(a), Target::Unit) => Document::Pa(normalize_unit_vectors(&a)),
                (Document::Pa(a), Target::Rcm) => {
                    let r = pa_to_rcm(&a).or_else(|_| pa_to_rcm(&normalize_unit_vectors(&a)))?;
                    Document::Rcm(r)
                }
                (d @ Document::Pa(_), Target::Pa) | (d @ Document::Rcm(_), Target::Rcm) => d,
                (d, _) => bail!("cannot convert a {} document", d.kind()),
            };
            print!("{}", out.to_json());
            Ok(0)
        }
    }
}

fn require_unambiguous(a: &ParikhAutomaton, limits: &Limits) -> anyhow::Result<()> {
    match is_weakly_unambiguous(a, limits) {
        Unambiguity::Yes => Ok(()),
        Unambiguity::No(w) => Err(Error::Ambiguous(a.word_to_string(&w)).into()),
        Unambiguity::ResourceExceeded(r) => {
            Err(Error::ResourceExceeded(format!("ambiguity check: {r}; pass --assume-unambiguous to skip")).into())
        }
    }
}

fn ratfun_json(f: &RatFun) -> Value {
    json!({
        "variables": f.vars().to_vec(),
        "numerator": poly_to_terms(f.num()),
        "denominator": poly_to_terms(f.den()),
    })
}

fn series(
    format: Format,
    a: &ParikhAutomaton,
    recurrence: bool,
    rational: bool,
    weighted: bool,
    limits: &Limits,
) -> anyhow::Result<u8> {
    let (abar, cbar) = weighted_series_factors(a)?;
    let factors = json!({ "automaton": ratfun_json(&abar), "constraint": ratfun_json(&cbar) });
    if rational {
        print_json(&json!({ "factors": factors }));
        return Ok(0);
    }
    let p = match pa_ode_with(a, limits) {
        Ok(p) => p,
        Err(e) => {
            // partial report: the factors are always available
            print_json(&json!({ "error": e.to_string(), "partial": { "factors": factors } }));
            return Err(e.into());
        }
    };
    if format == Format::Csv {
        emit_report(format, &p.report);
        return Ok(0);
    }
    let mut out = json!({
        "ode": Document::Ode(p.ode.clone()).to_value(),
        "ode_text": p.ode.to_string(),
        "bounds": report_to_json(&p.report),
        "self_check": format!("annihilates the first {} counts", limits.verify_terms),
    });
    if recurrence {
        let rec = ode_to_recurrence(&p.ode)?;
        if !recurrence_matches_counts(a, &rec, limits.verify_terms) {
            bail!("recurrence {rec} fails its self-check");
        }
        out["recurrence"] = Document::Recurrence(rec.clone()).to_value();
        out["recurrence_text"] = json!(rec.to_string());
    }
    if weighted {
        let w = pa_weighted_ode(a, limits)?;
        out["weighted_ode"] = Document::Ode(w.clone()).to_value();
        out["weighted_ode_text"] = json!(w.to_string());
    }
    print_json(&out);
    Ok(0)
}

fn bounds(file: &Path, measure: bool, limits: &Limits) -> anyhow::Result<BoundReport> {
    let bits = limits.exact_bound_bits;
    let doc = load(file)?;
    let mut r = BoundReport::new();
    match doc {
        Document::Pa(_) | Document::Rcm(_) => {
            let a = load_pa(file)?;
            if measure {
                return Ok(pa_ode_with(&a, limits)?.report);
            }
            let norm = a.transitions().iter().flat_map(|t| a.constraint().project(&t.vector)).max().unwrap_or(0);
            let (deg, sq) = gf_bounds(a.states().len(), norm.max(1), a.transitions().len());
            r.push("abar_degree", BoundValue::Exact(deg.into()), None);
            r.push("abar_norm_squared", BoundValue::from_int(sq, bits), None);
            r.extend("automaton_", automaton_factor_bounds(a.size() as u64, a.norm_inf() as u64, bits));
        }
        Document::Ode(o) => {
            let (s, big_s, deg, norm) = recurrence_bounds(&o);
            let rec = ode_to_recurrence(&o)?;
            r.push("s", BoundValue::Exact(s.into()), Some(rec.s().into()));
            r.push("S", BoundValue::Exact(big_s.into()), Some(rec.big_s().into()));
            r.push("t_S_degree", BoundValue::Exact(deg.into()), Some(rec.leading().degree().into()));
            let tn = rec.coeffs().iter().flat_map(|t| t.0.iter()).map(|c| c.magnitude().clone()).max();
            r.push("t_norm", BoundValue::from_int(norm, bits), tn.map(Into::into));
            r.push("W", BoundValue::from_int(witness_formula(&rec), bits), None);
        }
        Document::Recurrence(rec) => {
            r.push("W", BoundValue::from_int(witness_formula(&rec), bits), None);
            if let Some(w) = witness_bound_refined(&rec) {
                r.push("W_refined", BoundValue::from_int(w, bits), None);
            }
        }
        d => bail!("no bounds for a {} document", d.kind()),
    }
    Ok(r)
}

fn emit_report(format: Format, r: &BoundReport) {
    match format {
        Format::Json => print_json(&json!({ "bounds": report_to_json(r), "violations": r.violations() })),
        Format::Csv => {
            println!("name,bound,measured,holds");
            for b in &r.bounds {
                let (m, h) = match &b.measured {
                    Some(m) => (m.to_string(), b.value.dominates(m).to_string()),
                    None => (String::new(), String::new()),
                };
                println!("{},{},{m},{h}", b.name, b.value);
            }
        }
    }
}
