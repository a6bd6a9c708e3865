use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use c4free::catalog::{self, CatalogId};
use c4free::coloring::{color_with_labels, ColorError, Coloring};
use c4free::decompose::{decompose, peel_universal};
use c4free::graph::{uniform_blowup, Graph};
use c4free::io::{detect_format, emit_graph, parse_many, to_graph6, Format};
use c4free::patterns::{classify, ClassLabel, GraphClass, Tri};
use c4free::recognizer::recognize_core;
use c4free::testkit::enumerate::SMALL_CAP;
use c4free::testkit::generate::{generate, sample, InstanceRecipe};
use c4free::testkit::oracle::oracle;
use c4free::testkit::theorems::check_order;

#[derive(Parser)]
#[command(name = "c4free", version, about = "Recognise and colour (C4, P7|fork+, bull|hammer)-free graphs")]
struct Cli {
    /// Input format; detected from the first line when omitted.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Worker threads for batch commands (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// Forbidden-pattern flags and the classes the graph belongs to.
    Classify { input: Option<PathBuf> },
    /// Clique-cutset decomposition with the universal peel of every atom.
    Decompose {
        input: Option<PathBuf>,
        /// Also recognise every atom core for this class.
        #[arg(long)]
        class: Option<GraphClass>,
    },
    /// Colour within the binding function of the class.
    Color {
        input: Option<PathBuf>,
        #[arg(long)]
        class: GraphClass,
    },
    /// Check a colouring file against the graph.
    Verify {
        input: Option<PathBuf>,
        /// JSON emitted by `color`, a JSON array, or whitespace-separated colours.
        #[arg(long)]
        coloring: PathBuf,
        /// Also require the colour count to be within the class bound.
        #[arg(long)]
        class: Option<GraphClass>,
    },
    /// Print a catalog member, optionally blown up.
    CatalogEmit {
        /// Catalog id such as F5, C7, F2(3) or F0'(2).
        id: Option<CatalogId>,
        /// Uniform bag size.
        #[arg(long, default_value_t = 1)]
        blowup: usize,
        /// Run the catalog self-check instead.
        #[arg(long)]
        check: bool,
    },
    /// Generate seeded instances or replay a recipe.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 40)]
        max_vertices: usize,
        /// JSON recipe file to replay instead of sampling.
        #[arg(long)]
        recipe: Option<PathBuf>,
    },
    /// Exhaustive structure check over connected graphs up to order n.
    CheckTheorems {
        #[arg(long, default_value_t = 7)]
        n: usize,
        /// Allow orders above 7 (slow).
        #[arg(long)]
        long: bool,
    },
    /// Exact χ, ω, α and perfectness of small graphs.
    Oracle { input: Option<PathBuf> },
}

const NOT_IN_CLASS: u8 = 1;
const BAD_INPUT: u8 = 2;
const INVARIANT: u8 = 3;

struct Failure {
    code: u8,
    kind: &'static str,
    reason: String,
}

fn bad_input(reason: impl ToString) -> Failure {
    Failure {
        code: BAD_INPUT,
        kind: "bad-input",
        reason: reason.to_string(),
    }
}

fn invariant(reason: impl ToString) -> Failure {
    Failure {
        code: INVARIANT,
        kind: "invariant",
        reason: reason.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let status = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}: {}", f.kind, f.reason.replace('\n', " "));
            f.code
        }
    };
    let mut stdout = io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(INVARIANT);
    }
    ExitCode::from(status)
}

fn run(cli: &Cli, out: &mut String) -> Result<u8, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(invariant)?;
    match &cli.command {
        Command::Classify { input } => {
            for g in read_graphs(input, cli)? {
                let labels = classify(&g);
                emit(out, cli.output, &classify_json(&g, &labels), || classify_plain(&labels));
            }
            Ok(0)
        }
        Command::Decompose { input, class } => {
            for g in read_graphs(input, cli)? {
                let v = decompose_json(&g, *class)?;
                let plain = decompose_plain(&v);
                emit(out, cli.output, &v, || plain);
            }
            Ok(0)
        }
        Command::Color { input, class } => {
            let graphs = read_graphs(input, cli)?;
            let results: Vec<Result<Value, Failure>> = pool.install(|| {
                graphs.par_iter().map(|g| color_one(g, *class)).collect()
            });
            let mut status = 0;
            for r in results {
                match r {
                    Ok(v) => {
                        let plain = color_plain(&v);
                        emit(out, cli.output, &v, || plain);
                    }
                    Err(f) => {
                        eprintln!("error: {}: {}", f.kind, f.reason.replace('\n', " "));
                        let v = json!({"error": {"kind": f.kind, "reason": f.reason}});
                        emit(out, cli.output, &v, || format!("error {}: {}", f.kind, f.reason));
                        status = status.max(f.code);
                    }
                }
            }
            Ok(status)
        }
        Command::Verify {
            input,
            coloring,
            class,
        } => {
            let graphs = read_graphs(input, cli)?;
            let [g] = graphs.as_slice() else {
                return Err(bad_input("verify takes exactly one graph"));
            };
            let text = fs::read_to_string(coloring).map_err(bad_input)?;
            let colors = parse_coloring(&text)?;
            verify(g, colors, *class, cli.output, out)
        }
        Command::CatalogEmit { id, blowup, check } => {
            if *check {
                let report = catalog::self_check();
                let plain = report
                    .items
                    .iter()
                    .map(|i| format!("{} {}", if i.passed { "ok  " } else { "FAIL" }, i.name))
                    .collect::<Vec<_>>()
                    .join("\n");
                emit(out, cli.output, &json!(report), || plain);
                return Ok(if report.passed() { 0 } else { INVARIANT });
            }
            let id = id.ok_or_else(|| bad_input("missing catalog id"))?;
            if *blowup == 0 {
                return Err(bad_input("blowup must be positive"));
            }
            let cg = catalog::build(id).map_err(bad_input)?;
            let g = uniform_blowup(&cg.graph, *blowup);
            let format = output_format(cli)?;
            let v = json!({
                "id": id.to_string(),
                "blowup": blowup,
                "n": g.n(),
                "graph6": to_graph6(&g),
                "quotient": cg.meta,
            });
            emit(out, cli.output, &v, || emit_graph(&g, format).trim_end().to_string());
            Ok(0)
        }
        Command::Gen {
            seed,
            count,
            max_vertices,
            recipe,
        } => {
            let format = output_format(cli)?;
            let instances = match recipe {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(bad_input)?;
                    let r: InstanceRecipe = serde_json::from_str(&text).map_err(bad_input)?;
                    vec![generate(&r).map_err(bad_input)?]
                }
                None => {
                    let seeds: Vec<u64> = (0..*count).map(|i| seed.wrapping_add(i)).collect();
                    pool.install(|| seeds.par_iter().map(|&s| sample(s, *max_vertices)).collect())
                }
            };
            for inst in instances {
                emit(out, cli.output, &json!(inst), || {
                    emit_graph(&inst.graph, format).trim_end().to_string()
                });
            }
            Ok(0)
        }
        Command::CheckTheorems { n, long } => {
            if *n > SMALL_CAP && !long {
                return Err(bad_input(format!("orders above {SMALL_CAP} need --long")));
            }
            let orders: Vec<usize> = (1..=*n).collect();
            let tallies = pool.install(|| {
                orders
                    .par_iter()
                    .map(|&k| check_order(k))
                    .collect::<Result<Vec<_>, _>>()
            });
            let tallies = tallies.map_err(bad_input)?;
            let mut failed = false;
            for tally in tallies.into_iter().flatten() {
                failed |= !tally.passed();
                let plain = format!(
                    "n={} class={} graphs={} {} triangle-free-atoms={} failures={}",
                    tally.n,
                    tally.class,
                    tally.graphs,
                    tally
                        .verdicts
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect::<Vec<_>>()
                        .join(" "),
                    tally.triangle_free_atoms,
                    tally.failures.len()
                );
                emit(out, cli.output, &json!(tally), || plain);
            }
            Ok(if failed { INVARIANT } else { 0 })
        }
        Command::Oracle { input } => {
            let graphs = read_graphs(input, cli)?;
            let results: Vec<_> = pool.install(|| graphs.par_iter().map(oracle).collect());
            for r in results {
                let r = r.map_err(bad_input)?;
                let plain = format!(
                    "chi={} omega={} alpha={} perfect={}",
                    r.chi,
                    r.omega,
                    r.alpha,
                    json!(r.perfect).as_str().unwrap_or("?")
                );
                emit(out, cli.output, &json!(r), || plain);
            }
            Ok(0)
        }
    }
}

fn emit(out: &mut String, style: Output, v: &impl Serialize, plain: impl FnOnce() -> String) {
    match style {
        Output::Json => out.push_str(&serde_json::to_string(v).expect("serialisable")),
        Output::Plain => out.push_str(&plain()),
    }
    out.push('\n');
}

fn input_format(cli: &Cli, text: &str) -> Result<Format, Failure> {
    match &cli.format {
        Some(f) => f.parse().map_err(bad_input),
        None => Ok(detect_format(text)),
    }
}

fn output_format(cli: &Cli) -> Result<Format, Failure> {
    match &cli.format {
        Some(f) => f.parse().map_err(bad_input),
        None => Ok(Format::Graph6),
    }
}

fn read_graphs(input: &Option<PathBuf>, cli: &Cli) -> Result<Vec<Graph>, Failure> {
    let text = match input {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(bad_input)?,
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(bad_input)?;
            s
        }
    };
    let format = input_format(cli, &text)?;
    let graphs = parse_many(&text, format).map_err(bad_input)?;
    if graphs.is_empty() {
        return Err(bad_input("no graph in input"));
    }
    Ok(graphs)
}

fn tri(t: Tri) -> &'static str {
    match t {
        Tri::Yes => "true",
        Tri::No => "false",
        Tri::Unknown => "unknown",
    }
}

fn class_names(labels: &ClassLabel) -> Vec<String> {
    labels.classes().iter().map(ToString::to_string).collect()
}

fn classify_json(g: &Graph, labels: &ClassLabel) -> Value {
    json!({"n": g.n(), "labels": labels, "classes": class_names(labels)})
}

fn classify_plain(l: &ClassLabel) -> String {
    format!(
        "c4free={} c3free={} p7free={} bullfree={} hammerfree={} forkplusfree={} c5sqfree={} c7q4free={} classes={}",
        l.c4free,
        l.c3free,
        l.p7free,
        l.bullfree,
        l.hammerfree,
        l.forkplusfree,
        tri(l.c5sqfree),
        tri(l.c7q4free),
        class_names(l).join(",")
    )
}

fn decompose_json(g: &Graph, class: Option<GraphClass>) -> Result<Value, Failure> {
    let mut components = Vec::new();
    for comp in g.components() {
        let (cg, cmap) = g.induced(&comp);
        let tree = decompose(&cg).map_err(invariant)?;
        let mut atoms = Vec::new();
        for leaf in tree.leaves() {
            let (ag, amap) = cg.induced(leaf);
            let global = |v: usize| cmap[amap[v]];
            let peel = peel_universal(&ag);
            let layers: Vec<Vec<usize>> = peel
                .layers
                .iter()
                .map(|l| l.iter().map(global).collect())
                .collect();
            let core: Vec<usize> = peel.core.iter().map(global).collect();
            let mut atom = json!({
                "vertices": leaf.iter().map(|v| cmap[v]).collect::<Vec<_>>(),
                "layers": layers,
                "core": core,
            });
            if let Some(class) = class {
                let (core_g, core_map) = ag.induced(&peel.core);
                let kind = recognize_core(&core_g, class).map_err(invariant)?;
                let mut kv = json!(kind);
                relabel_bags(&mut kv, &|v| global(core_map[v]));
                atom["recognition"] = kv;
            }
            atoms.push(atom);
        }
        components.push(json!({
            "vertices": cmap,
            "splits": tree.split_count(),
            "tree": tree.relabel(&cmap),
            "atoms": atoms,
        }));
    }
    Ok(json!({"n": g.n(), "components": components}))
}

/// Rewrites the bag lists of a serialised certificate into global ids.
fn relabel_bags(v: &mut Value, map: &dyn Fn(usize) -> usize) {
    if let Some(bags) = v.pointer_mut("/certificate/bags").and_then(Value::as_array_mut) {
        for bag in bags {
            if let Some(items) = bag.as_array_mut() {
                for x in items {
                    if let Some(i) = x.as_u64() {
                        *x = json!(map(i as usize));
                    }
                }
            }
        }
    }
}

fn decompose_plain(v: &Value) -> String {
    let mut lines = Vec::new();
    for comp in v["components"].as_array().into_iter().flatten() {
        lines.push(format!("component splits={}", comp["splits"]));
        for atom in comp["atoms"].as_array().into_iter().flatten() {
            let mut line = format!(
                "  atom {} layers={} core={}",
                atom["vertices"], atom["layers"], atom["core"]
            );
            if let Some(r) = atom.get("recognition") {
                line.push_str(&format!(" kind={}", r["kind"]));
                if let Some(q) = r.pointer("/certificate/quotient") {
                    line.push_str(&format!(" quotient={q}"));
                }
            }
            lines.push(line);
        }
    }
    lines.join("\n")
}

fn color_one(g: &Graph, class: GraphClass) -> Result<Value, Failure> {
    match color_with_labels(g, class, classify(g)) {
        Ok(out) => Ok(json!(out)),
        Err(e @ ColorError::NotInClass { .. }) => Err(Failure {
            code: NOT_IN_CLASS,
            kind: "not-in-class",
            reason: e.to_string(),
        }),
        Err(e) => Err(invariant(e)),
    }
}

fn color_plain(v: &Value) -> String {
    let r = &v["report"];
    let colors = v["coloring"]["colors"]
        .as_array()
        .map(|a| a.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .unwrap_or_default();
    format!(
        "colors={} bound={} ({}) omega={} class={}\n{colors}",
        r["colors_used"],
        r["bound_value"],
        r["bound"].as_str().unwrap_or("?"),
        r["omega"],
        r["class"].as_str().unwrap_or("?"),
    )
}

fn parse_coloring(text: &str) -> Result<Vec<usize>, Failure> {
    let numbers = |v: &Value| -> Option<Vec<usize>> {
        v.as_array()?
            .iter()
            .map(|x| x.as_u64().map(|c| c as usize))
            .collect()
    };
    if let Ok(v) = serde_json::from_str::<Value>(text) {
        let found = numbers(&v)
            .or_else(|| numbers(&v["colors"]))
            .or_else(|| numbers(&v["coloring"]["colors"]));
        return found.ok_or_else(|| bad_input("coloring JSON has no colour array"));
    }
    text.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| bad_input(format!("bad colour {t:?}"))))
        .collect()
}

fn verify(
    g: &Graph,
    colors: Vec<usize>,
    class: Option<GraphClass>,
    style: Output,
    out: &mut String,
) -> Result<u8, Failure> {
    if colors.len() != g.n() {
        return Err(bad_input(format!(
            "{} colours for {} vertices",
            colors.len(),
            g.n()
        )));
    }
    if colors.contains(&0) {
        return Err(bad_input("colours start at 1"));
    }
    let used = {
        let mut c = colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    let coloring = Coloring::from_colors(colors);
    let conflict = coloring.conflict(g);
    let mut v = json!({
        "proper": conflict.is_none(),
        "colors": used,
        "conflict": conflict.map(|(a, b)| vec![a, b]),
    });
    let mut within = true;
    if let Some(class) = class {
        match color_with_labels(g, class, classify(g)) {
            Ok(res) => {
                within = used <= res.report.bound_value;
                v["bound"] = json!(res.report.bound_value);
                v["within_bound"] = json!(within);
            }
            Err(e @ ColorError::NotInClass { .. }) => {
                return Err(Failure {
                    code: NOT_IN_CLASS,
                    kind: "not-in-class",
                    reason: e.to_string(),
                })
            }
            Err(e) => return Err(invariant(e)),
        }
    }
    let valid = conflict.is_none() && within;
    v["valid"] = json!(valid);
    let plain = match conflict {
        Some((a, b)) => format!("invalid: edge {a}-{b} is monochromatic"),
        None if !within => format!("invalid: {used} colours exceed the bound {}", v["bound"]),
        None => format!("valid: {used} colours"),
    };
    emit(out, style, &v, || plain);
    Ok(if valid { 0 } else { NOT_IN_CLASS })
}
