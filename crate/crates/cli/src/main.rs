use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use incalg::derivations::der_report;
use incalg::involutions::{classify, classify_general, equivalent, equivalent_inner, intertwines};
use incalg::json::{self, ClassificationJson, CountJson, IncFnJson, LabelMap, VerdictJson};
use incalg::morphisms::mult_inn_report;
use incalg::{Error, Field, IncidenceAlgebra, MapKind, Poset, PosetMap, Result};
use serde_json::json;

mod verify;

#[derive(Parser)]
#[command(name = "incalg", version, about = "Involutions on idealizations of finite incidence algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Instance {
    /// Poset file: JSON {"elements", "covers"} or one `a<b` per line.
    #[arg(long)]
    poset: PathBuf,
    /// Q or F<p>.
    #[arg(long, default_value = "Q")]
    field: Field,
}

#[derive(Subcommand)]
enum Cmd {
    /// Connectivity, all-comparable elements, automorphisms and involutions of a poset.
    PosetInfo {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide Mult ⊆ Inn and Der = IDer; exit 3 unless both hold.
    Hypotheses {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        json: bool,
    },
    /// Classes of involutions on D(X, K) as a JSON report.
    Classify {
        #[command(flatten)]
        inst: Instance,
        /// Poset involution as a JSON file, inline JSON, or `x:y,…` (one of each swapped pair suffices).
        /// Without it every involution of X is classified.
        #[arg(long)]
        lambda: Option<String>,
        /// Fold classes by the action of Aut(X).
        #[arg(long)]
        general: bool,
    },
    /// Compare two involutions given as JSON specs; exit 0 if equivalent, 1 if not.
    Equivalent {
        #[command(flatten)]
        inst: Instance,
        inv1: PathBuf,
        inv2: PathBuf,
        #[arg(long, conflicts_with = "general")]
        inner: bool,
        #[arg(long)]
        general: bool,
        /// Re-verify the printed witness from its JSON before exiting.
        #[arg(long)]
        check: bool,
    },
    /// Run every applicable property and oracle check on the instance.
    Verify {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::HypothesisFailed(_) | Error::NotConnected => 3,
        Error::Char2Unsupported => 4,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_poset(path: &Path) -> Result<Poset> {
    json::parse_poset(&read(path)?)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn show_map(p: &Poset, m: &PosetMap) -> String {
    (0..p.len()).map(|x| format!("{}→{}", p.label(x), p.label(m.apply(x)))).collect::<Vec<_>>().join(" ")
}

/// Accepts a JSON file, inline JSON, or `x:y` pairs separated by commas.
/// Unlisted images are completed as an involution.
fn parse_lambda(p: &Poset, text: &str) -> Result<PosetMap> {
    let raw = if Path::new(text).is_file() { read(Path::new(text))? } else { text.to_string() };
    let mut map: LabelMap = if raw.trim_start().starts_with('{') {
        serde_json::from_str(&raw).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        raw.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                let (a, b) = s.split_once(':').ok_or_else(|| Error::Parse(format!("bad map entry {s:?}")))?;
                Ok((a.trim().to_string(), b.trim().to_string()))
            })
            .collect::<Result<_>>()?
    };
    let given: Vec<(String, String)> = map.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
    for (a, b) in given {
        map.entry(b).or_insert(a);
    }
    for l in p.labels() {
        map.entry(l.clone()).or_insert_with(|| l.clone());
    }
    PosetMap::from_labels(p, &map, MapKind::AntiAutomorphism)
}

fn poset_info(path: &Path, as_json: bool) -> Result<u8> {
    let p = load_poset(path)?;
    let comparable: Vec<&str> = p.all_comparable_elements().into_iter().map(|x| p.label(x)).collect();
    let auts = p.automorphisms()?;
    let antis = p.anti_automorphisms()?;
    let invs = p.involutions()?;
    if as_json {
        print_json(&json!({
            "connected": p.is_connected(),
            "all_comparable": comparable,
            "automorphisms": auts.len(),
            "anti_automorphisms": antis.len(),
            "involutions": invs.iter().map(|m| m.to_labels(&p)).collect::<Vec<_>>(),
        }));
        return Ok(0);
    }
    println!("connected: {}", if p.is_connected() { "yes" } else { "no" });
    println!("all-comparable: {}", if comparable.is_empty() { "none".to_string() } else { comparable.join(",") });
    println!("automorphisms: {}", auts.len());
    if antis.is_empty() {
        println!("anti-automorphisms: none ⇒ D(X,K) admits no involution");
    } else {
        println!("anti-automorphisms: {}", antis.len());
    }
    println!("involutions: {}", invs.len());
    for m in &invs {
        println!("  {}", show_map(&p, m));
    }
    Ok(0)
}

fn hypotheses(inst: &Instance, as_json: bool) -> Result<u8> {
    let p = load_poset(&inst.poset)?;
    let mult = mult_inn_report(&p, inst.field);
    let der = der_report(&p, inst.field);
    if as_json {
        print_json(&json!({
            "field": inst.field.to_string(),
            "mult_subset_inn": {
                "holds": mult.holds,
                "free_rank": mult.free_rank,
                "torsion": mult.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "counterexample": mult.witness.as_ref().map(IncFnJson::from_incfn),
            },
            "der_equals_ider": {
                "holds": der.holds,
                "cocycle_dim": der.cocycle_dim,
                "coboundary_dim": der.coboundary_dim,
                "counterexample": der.witness.as_ref().map(IncFnJson::from_incfn),
            },
        }));
    } else {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let torsion: Vec<String> = mult.torsion.iter().map(|t| t.to_string()).collect();
        println!("Mult ⊆ Inn: {} (H1 free rank {}, torsion [{}])", yn(mult.holds), mult.free_rank, torsion.join(", "));
        if let Some(w) = &mult.witness {
            println!("  non-inner multiplicative cocycle: {w}");
        }
        println!(
            "Der = IDer: {} (cocycles dim {}, coboundaries dim {})",
            yn(der.holds),
            der.cocycle_dim,
            der.coboundary_dim
        );
        if let Some(w) = &der.witness {
            println!("  non-inner additive cocycle: {w}");
        }
    }
    Ok(if mult.holds && der.holds { 0 } else { 3 })
}

fn classify_cmd(inst: &Instance, lambda: Option<&str>, general: bool) -> Result<u8> {
    let p = load_poset(&inst.poset)?;
    let alg = IncidenceAlgebra::new(p.clone(), inst.field);
    let lambdas = match lambda {
        Some(text) => vec![parse_lambda(&p, text)?],
        None if general => {
            let auts = p.automorphisms()?;
            let mut seen = BTreeSet::new();
            p.involutions()?
                .into_iter()
                .filter(|l| {
                    let key = auts.iter().map(|a| a.compose(l).compose(&a.inverse()).images().to_vec()).min();
                    seen.insert(key)
                })
                .collect()
        }
        None => p.involutions()?,
    };
    if lambdas.is_empty() {
        return Err(Error::DomainMismatch("the poset has no involution, so D(X,K) has none".into()));
    }
    let mut classes = Vec::new();
    for l in &lambdas {
        let c = if general { classify_general(&alg, l)? } else { classify(&alg, l)? };
        classes.push(ClassificationJson::from_classification(&c, &p));
    }
    let total = if classes.iter().all(|c| matches!(c.count, CountJson::Finite(_))) {
        json!(classes.iter().map(|c| if let CountJson::Finite(n) = c.count { n } else { 0 }).sum::<u64>())
    } else {
        json!("infinite")
    };
    print_json(&json!({
        "field": inst.field.to_string(),
        "general": general,
        "total": total,
        "classes": classes,
    }));
    Ok(0)
}

fn equivalent_cmd(inst: &Instance, inv1: &Path, inv2: &Path, general: bool, check: bool) -> Result<u8> {
    let p = load_poset(&inst.poset)?;
    let alg = IncidenceAlgebra::new(p, inst.field);
    let phi1 = json::parse_spec(&alg, &read(inv1)?)?;
    let phi2 = json::parse_spec(&alg, &read(inv2)?)?;
    let verdict = if general { equivalent(&phi1, &phi2)? } else { equivalent_inner(&phi1, &phi2)? };
    let out = VerdictJson::from_verdict(&verdict);
    let text = serde_json::to_string_pretty(&out).expect("serializable");
    if check {
        let back: VerdictJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(w) = back.witness {
            let w = w.to_witness(&alg)?;
            if !intertwines(&w.morphism, &phi1, &phi2) {
                eprintln!("error: witness failed re-verification");
                return Ok(1);
            }
        } else if back.equivalent {
            eprintln!("error: positive verdict without a witness");
            return Ok(1);
        }
    }
    println!("{text}");
    Ok(if verdict.equivalent { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::PosetInfo { poset, json } => poset_info(&poset, json),
        Cmd::Hypotheses { inst, json } => hypotheses(&inst, json),
        Cmd::Classify { inst, lambda, general } => classify_cmd(&inst, lambda.as_deref(), general),
        Cmd::Equivalent { inst, inv1, inv2, inner: _, general, check } => {
            equivalent_cmd(&inst, &inv1, &inv2, general, check)
        }
        Cmd::Verify { inst, seed } => {
            let p = load_poset(&inst.poset)?;
            verify::run(&p, inst.field, seed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
