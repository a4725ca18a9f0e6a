use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use arknit_core::ar::{
    almost_split_sequence, almost_split_sequence_from, ar_category_kind, canonical_form, classify_component,
    is_pseudo_projective, knit, tau, tau_inv, verify_almost_split, KnitOptions,
};
use arknit_core::hom::{decompose, ext_space, hom_space, hom_space_via, HomRoute};
use arknit_core::io::{self, certificate_window, document, emit_dims, emit_quiver, emit_rep};
use arknit_core::quiver::Quiver;
use arknit_core::rep::Rep;
use arknit_core::structure::{classify_membership, Verdict};
use arknit_core::{Budget, Error, Field, Rat, F2, F3, F5, F7};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Exact Auslander-Reiten computations for quiver representations.
#[derive(Parser)]
#[command(name = "arknit", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scalar field: Q (default) or one of the primes 2, 3, 5, 7.
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Initial window radius.
    #[arg(long, global = true)]
    radius: Option<usize>,
    /// Radius increment between windows.
    #[arg(long, global = true)]
    step: Option<usize>,
    /// Largest window radius before giving up.
    #[arg(long, global = true)]
    max_radius: Option<usize>,
    /// Budget as `radius,step,max_radius`; overrides ARKNIT_BUDGET.
    #[arg(long, global = true)]
    budget: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Finite,
    Presentation,
    Copresentation,
    Window,
}

#[derive(Args)]
struct QuiverArg {
    /// Quiver spec: a file, or inline JSON.
    #[arg(long)]
    quiver: String,
}

#[derive(Subcommand)]
enum Verb {
    /// Normalise a quiver and report its infinite paths.
    Quiver {
        #[command(flatten)]
        q: QuiverArg,
    },
    /// Dimensions, support and canonical form of a representation.
    Rep {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        rep: String,
    },
    /// A basis of Hom(rep, other).
    Hom {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        other: String,
        #[arg(long, value_enum)]
        route: Option<Route>,
    },
    /// A basis of Ext(rep, other) by cocycles.
    Ext {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        other: String,
    },
    /// The translate of an indecomposable.
    Tau {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        rep: String,
        /// Apply the inverse translate.
        #[arg(long)]
        inverse: bool,
    },
    /// The almost split sequence ending at rep, with its verification report.
    Ass {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        rep: String,
        /// The sequence starting at rep instead.
        #[arg(long)]
        starting: bool,
    },
    /// Knit the component of a seed.
    Knit {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Skip the verification battery.
        #[arg(long)]
        no_verify: bool,
    },
    /// Knit and tag the shape of a component.
    Classify {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Decide membership in the category of finite extensions.
    Member {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        rep: String,
    },
    /// Krull-Schmidt decomposition.
    Decompose {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        rep: String,
    },
    /// Canonical re-emission of a quiver and optionally a representation.
    Export {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        rep: Option<String>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_budget() => 2,
            _ => 1,
        }
    }
}

type Out = std::result::Result<Output, CliError>;

enum Output {
    Json(Value),
    /// A result that ran out of budget before reaching a verdict.
    Exhausted(Value),
    Text(String),
}

fn budget_from(common: &Common) -> std::result::Result<Budget, CliError> {
    let parse = |s: &str, origin: &str| -> std::result::Result<Budget, CliError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let nums = parts
            .iter()
            .map(|p| p.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| CliError::Usage(format!("{origin}: expected radius[,step[,max_radius]], got '{s}'")))?;
        let d = Budget::default();
        match nums.as_slice() {
            [r] => Ok(Budget::new(*r, d.step, d.max_radius.max(*r))),
            [r, st] => Ok(Budget::new(*r, *st, d.max_radius.max(*r))),
            [r, st, m] => Ok(Budget::new(*r, *st, *m)),
            _ => Err(CliError::Usage(format!("{origin}: expected radius[,step[,max_radius]], got '{s}'"))),
        }
    };
    let mut b = match (&common.budget, std::env::var("ARKNIT_BUDGET")) {
        (Some(s), _) => parse(s, "--budget")?,
        (None, Ok(s)) if !s.trim().is_empty() => parse(&s, "ARKNIT_BUDGET")?,
        _ => Budget::default(),
    };
    if let Some(r) = common.radius {
        b = Budget::new(r, b.step, b.max_radius.max(r));
    }
    if let Some(s) = common.step {
        b = Budget::new(b.radius, s, b.max_radius);
    }
    if let Some(m) = common.max_radius {
        b = Budget::new(b.radius, b.step, m);
    }
    Ok(b)
}

fn load(spec: &str, key: &str) -> std::result::Result<Value, CliError> {
    let (text, origin) = if spec.trim_start().starts_with('{') || spec.trim_start().starts_with('"') {
        (spec.to_string(), "inline".to_string())
    } else {
        let text = std::fs::read_to_string(Path::new(spec))
            .map_err(|source| CliError::Io { path: spec.to_string(), source })?;
        (text, spec.to_string())
    };
    let v = with_origin(io::parse_json(&text), &origin)?;
    Ok(match v.get(key) {
        Some(inner) if v.get("kind").is_some() => inner.clone(),
        _ => v,
    })
}

fn with_origin<T>(r: arknit_core::Result<T>, origin: &str) -> std::result::Result<T, CliError> {
    r.map_err(|e| match e {
        Error::Malformed(m) => CliError::Core(Error::Malformed(format!("{origin}: {m}"))),
        other => CliError::Core(other),
    })
}

fn load_quiver(q: &QuiverArg) -> std::result::Result<Arc<Quiver>, CliError> {
    with_origin(io::parse_quiver(&load(&q.quiver, "quiver")?), &q.quiver)
}

fn load_rep<F: Field>(q: &Arc<Quiver>, spec: &str) -> std::result::Result<Rep<F>, CliError> {
    with_origin(io::parse_rep(q, &load(spec, "rep")?), spec)
}

fn json_only(format: Format, verb: &str) -> std::result::Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Dot => Err(CliError::Usage(format!("'{verb}' has no DOT output"))),
    }
}

fn run<F: Field>(verb: &Verb, format: Format, budget: Budget) -> Out {
    let b = &budget;
    let budget_json = io::emit_budget(b);
    let doc = |kind: &str, mut payload: Value| {
        payload["budget"] = budget_json.clone();
        payload["field"] = json!(F::name());
        Output::Json(document(kind, payload))
    };
    match verb {
        Verb::Quiver { q } => {
            json_only(format, "quiver")?;
            let quiver = load_quiver(q)?;
            let info = quiver.ray_info();
            Ok(doc(
                "quiver",
                json!({
                    "quiver": emit_quiver(&quiver),
                    "description": quiver.describe(),
                    "finite": quiver.is_finite(),
                    "left_infinite": info.left_infinite,
                    "right_infinite": info.right_infinite,
                    "path_bound": info.path_bound,
                    "ar_kind": ar_category_kind(&quiver).name(),
                }),
            ))
        }
        Verb::Rep { q, rep } => {
            json_only(format, "rep")?;
            let quiver = load_quiver(q)?;
            let m: Rep<F> = load_rep(&quiver, rep)?;
            let verts = certificate_window(&quiver, &m.anchors(), b.radius);
            let finite = m.finite_support(b)?;
            Ok(doc(
                "rep",
                json!({
                    "quiver": emit_quiver(&quiver),
                    "rep": emit_rep(&m, b)?,
                    "canonical": emit_rep(&canonical_form(&m, b)?, b)?,
                    "support": m.support_descriptor().describe(Some(&quiver)),
                    "finite_support": finite.as_ref().map(|s| s.iter().map(|&v| quiver.vertex_label(v)).collect::<Vec<_>>()),
                    "total_dim": m.total_dim(b)?,
                    "window": verts.iter().map(|&v| quiver.vertex_label(v)).collect::<Vec<_>>(),
                    "dims": emit_dims(&m, &verts)?,
                }),
            ))
        }
        Verb::Hom { q, rep, other, route } => {
            json_only(format, "hom")?;
            let quiver = load_quiver(q)?;
            let (m, n): (Rep<F>, Rep<F>) = (load_rep(&quiver, rep)?, load_rep(&quiver, other)?);
            let h = match route {
                None => hom_space(&m, &n, b)?,
                Some(r) => {
                    let r = match r {
                        Route::Finite => HomRoute::Finite,
                        Route::Presentation => HomRoute::Presentation,
                        Route::Copresentation => HomRoute::Copresentation,
                        Route::Window => HomRoute::Window,
                    };
                    hom_space_via(&m, &n, r, b)?
                }
            };
            Ok(doc("hom", json!({ "hom": io::emit_hom(&h, b)? })))
        }
        Verb::Ext { q, rep, other } => {
            json_only(format, "ext")?;
            let quiver = load_quiver(q)?;
            let (x, y): (Rep<F>, Rep<F>) = (load_rep(&quiver, rep)?, load_rep(&quiver, other)?);
            let e = ext_space(&x, &y, b)?;
            Ok(doc("ext", json!({ "ext": io::emit_ext(&e, b)? })))
        }
        Verb::Tau { q, rep, inverse } => {
            json_only(format, "tau")?;
            let quiver = load_quiver(q)?;
            let x: Rep<F> = load_rep(&quiver, rep)?;
            let t = if *inverse { tau_inv(&x, b)? } else { tau(&x, b)? };
            let t = canonical_form(&t, b)?;
            let verts = certificate_window(&quiver, &x.anchors(), b.radius);
            Ok(doc(
                "tau",
                json!({
                    "inverse": inverse,
                    "input": emit_rep(&x, b)?,
                    "translate": emit_rep(&t, b)?,
                    "window": verts.iter().map(|&v| quiver.vertex_label(v)).collect::<Vec<_>>(),
                    "dims": emit_dims(&t, &verts)?,
                    "pseudo_projective": if *inverse { Value::Null } else { json!(is_pseudo_projective(&x, b)?) },
                }),
            ))
        }
        Verb::Ass { q, rep, starting } => {
            json_only(format, "ass")?;
            let quiver = load_quiver(q)?;
            let x: Rep<F> = load_rep(&quiver, rep)?;
            let s = if *starting { almost_split_sequence_from(&x, b)? } else { almost_split_sequence(&x, b)? };
            let mut battery = vec![s.sub.clone(), s.quot.clone()];
            battery.extend(decompose(&s.middle, b)?.into_iter().map(|d| d.rep));
            for v in certificate_window(&quiver, &s.anchors(), 1) {
                battery.push(Rep::projective(&quiver, v)?);
                battery.push(Rep::injective(&quiver, v)?);
            }
            let report = verify_almost_split(&s, &battery, b)?;
            Ok(doc(
                "ses",
                json!({
                    "quiver": emit_quiver(&quiver),
                    "ses": io::emit_ses(&s, b)?,
                    "report": io::emit_report(&report),
                }),
            ))
        }
        Verb::Knit { q, seed, depth, no_verify } => {
            let quiver = load_quiver(q)?;
            let x: Rep<F> = load_rep(&quiver, seed)?;
            let c = knit(&x, &KnitOptions { depth: *depth, verify: !no_verify, budget })?;
            Ok(match format {
                Format::Dot => Output::Text(io::emit_dot(&c)),
                Format::Json => doc("component", io::emit_component(&c)?),
            })
        }
        Verb::Classify { q, seed, depth } => {
            json_only(format, "classify")?;
            let quiver = load_quiver(q)?;
            let x: Rep<F> = load_rep(&quiver, seed)?;
            let c = knit(&x, &KnitOptions { depth: *depth, verify: true, budget })?;
            let h = classify_component(&c);
            Ok(doc(
                "classification",
                json!({
                    "shape": h.shape.name(),
                    "certificate": h.certificate,
                    "vertices": c.len(),
                    "arrows": c.arrows.len(),
                    "taxonomy_holds": c.taxonomy_holds(),
                    "valuations_symmetric": c.valuations_symmetric(),
                    "reports_pass": c.all_reports_pass(),
                    "ar_kind": ar_category_kind(&quiver).name(),
                }),
            ))
        }
        Verb::Member { q, rep } => {
            json_only(format, "member")?;
            let quiver = load_quiver(q)?;
            let m: Rep<F> = load_rep(&quiver, rep)?;
            let c = classify_membership(&m, b)?;
            let mut payload = io::emit_membership(&quiver, &c, b)?;
            payload["summary"] = json!(c.summary(&quiver));
            payload["recheck"] = json!(c.recheck(&m)?);
            Ok(match (doc("membership", payload), c.verdict) {
                (Output::Json(v), Verdict::Unknown) => Output::Exhausted(v),
                (out, _) => out,
            })
        }
        Verb::Decompose { q, rep } => {
            json_only(format, "decompose")?;
            let quiver = load_quiver(q)?;
            let m: Rep<F> = load_rep(&quiver, rep)?;
            let verts = certificate_window(&quiver, &m.anchors(), b.radius);
            let summands = decompose(&m, b)?
                .into_iter()
                .map(|s| {
                    Ok(json!({
                        "rep": emit_rep(&s.rep, b)?,
                        "multiplicity": s.multiplicity,
                        "residual": s.residual,
                        "dims": emit_dims(&s.rep, &verts)?,
                    }))
                })
                .collect::<arknit_core::Result<Vec<_>>>()?;
            Ok(doc("decomposition", json!({ "summands": summands })))
        }
        Verb::Export { q, rep } => {
            json_only(format, "export")?;
            let quiver = load_quiver(q)?;
            let mut payload = BTreeMap::new();
            payload.insert("quiver", emit_quiver(&quiver));
            if let Some(r) = rep {
                let m: Rep<F> = load_rep(&quiver, r)?;
                payload.insert("rep", emit_rep(&m, b)?);
            }
            Ok(Output::Json(document("export", json!(payload))))
        }
    }
}

fn dispatch(cli: &Cli) -> Out {
    let budget = budget_from(&cli.common)?;
    let f = cli.common.field.trim().to_ascii_uppercase();
    let f = f.strip_prefix('F').filter(|p| !p.is_empty()).unwrap_or(&f);
    match f {
        "Q" | "RAT" | "0" => run::<Rat>(&cli.verb, cli.common.format, budget),
        "2" => run::<F2>(&cli.verb, cli.common.format, budget),
        "3" => run::<F3>(&cli.verb, cli.common.format, budget),
        "5" => run::<F5>(&cli.verb, cli.common.format, budget),
        "7" => run::<F7>(&cli.verb, cli.common.format, budget),
        _ => Err(CliError::Usage(format!(
            "unsupported field '{}': use Q or one of the primes 2, 3, 5, 7",
            cli.common.field
        ))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = dispatch(&cli).and_then(|out| {
        let pretty = |v: &Value| format!("{}\n", serde_json::to_string_pretty(v).expect("serialisable"));
        let (text, code) = match out {
            Output::Json(v) => (pretty(&v), 0),
            Output::Exhausted(v) => (pretty(&v), 2),
            Output::Text(t) => (t, 0),
        };
        match &cli.common.output {
            Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source })?,
            None => print!("{text}"),
        }
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
