use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hyperkube::cube::{CubeDiagram, CubePlane};
use hyperkube::floer::{
    build_grid_tilde_complex, euler_characteristic, hat_table, homology_table, table_entries, total_rank,
    HomologyTable,
};
use hyperkube::grid::GridDiagram;
use hyperkube::hmoves::{self, Move};
use hyperkube::hypercube::{generate_markings_seeded, HyperPlane, HypercubeDiagram, Markings};
use hyperkube::pltorus::classify_report;
use hyperkube::search::{
    fixture_report, hyper_tables, repair_fixture, search_lifts, ClassFilter, Predicate, SearchError, SearchSpec, Strategy,
};

#[derive(Parser)]
#[command(name = "hyperkube", version, about = "Grid, cube and hypercube diagrams of knotted tori")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Worker threads for search and homology.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check marking and crossing conditions.
    Validate { file: PathBuf },
    /// Project a cube or hypercube to a grid diagram.
    Project {
        file: PathBuf,
        /// wx, yz, xy or zw for hypercubes; xy, yz or zx for cubes.
        #[arg(long)]
        plane: String,
    },
    /// ASCII grid or hypercube schematic.
    Render { file: PathBuf },
    /// PL torus cell counts, double point circles and class.
    Classify { file: PathBuf },
    /// Tilde and hat homology tables.
    Homology { file: PathBuf },
    /// Euler characteristic of the hat homology.
    Euler { file: PathBuf },
    /// List legal hypercube moves, or apply one given as JSON.
    Move {
        file: PathBuf,
        /// For example '{"kind":"swap"}' or '{"kind":"commute","axis":"w","level":0}'.
        #[arg(long)]
        apply: Option<String>,
    },
    /// Seeded randomized search for hypercube diagrams; one JSON line per hit.
    Search {
        #[arg(long)]
        size: usize,
        /// Grid file whose markings fix the wx positions of W and X.
        #[arg(long)]
        target_wx: Option<PathBuf>,
        #[arg(long, default_value = "any")]
        wx: Predicate,
        #[arg(long, visible_alias = "predicate", default_value = "any")]
        yz: Predicate,
        #[arg(long, default_value = "any")]
        class: ClassFilter,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        max_hits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// sample or anneal.
        #[arg(long, default_value = "sample")]
        strategy: Strategy,
    },
    /// Marking-valid candidate from the five-step construction.
    Generate {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Valid tables within a number of coordinate edits of a marking table.
    Repair {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        budget: usize,
    },
    /// Projections, classification and homology of a hypercube fixture.
    FixtureReport { file: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Grid,
    Cube,
    Hypercube,
}

enum Diagram {
    Grid(GridDiagram),
    Cube(CubeDiagram),
    Hyper(HypercubeDiagram),
}

/// Exit 1: unreadable input, invalid diagram or failed check.
struct Failure(Value);

fn fail(msg: impl std::fmt::Display) -> Failure {
    Failure(json!({ "error": msg.to_string() }))
}

fn kind_of(v: &Value) -> Option<Kind> {
    let obj = v.as_object()?;
    if obj.contains_key("W") {
        Some(Kind::Hypercube)
    } else if obj.contains_key("X") {
        Some(Kind::Cube)
    } else if obj.contains_key("xCol") {
        Some(Kind::Grid)
    } else {
        None
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| fail(format!("{}: parse error: {e}", path.display())))
}

fn read_markings(path: &Path) -> Result<Markings, Failure> {
    let v = read_json(path)?;
    if kind_of(&v) != Some(Kind::Hypercube) {
        return Err(fail("expected a hypercube marking table"));
    }
    serde_json::from_value(v).map_err(|e| fail(format!("parse error: {e}")))
}

fn read_diagram(path: &Path) -> Result<Diagram, Failure> {
    let v = read_json(path)?;
    let invalid = |e: &dyn std::fmt::Display| fail(format!("invalid diagram: {e}"));
    match kind_of(&v) {
        Some(Kind::Grid) => serde_json::from_value(v).map(Diagram::Grid).map_err(|e| invalid(&e)),
        Some(Kind::Cube) => serde_json::from_value(v).map(Diagram::Cube).map_err(|e| invalid(&e)),
        Some(Kind::Hypercube) => {
            let m: Markings = serde_json::from_value(v).map_err(|e| fail(format!("parse error: {e}")))?;
            m.validate().map(Diagram::Hyper).map_err(|e| invalid(&e))
        }
        None => Err(fail("cannot tell the diagram kind from its fields")),
    }
}

fn read_hyper(path: &Path) -> Result<HypercubeDiagram, Failure> {
    match read_diagram(path)? {
        Diagram::Hyper(h) => Ok(h),
        _ => Err(fail("expected a hypercube diagram")),
    }
}

struct Output {
    json: Value,
    text: String,
}

fn tables_json(tilde: &HomologyTable, hat: &HomologyTable) -> Value {
    json!({
        "tilde": table_entries(tilde),
        "tildeRank": total_rank(tilde),
        "hat": table_entries(hat),
        "hatRank": total_rank(hat),
    })
}

fn tables_text(tilde: &HomologyTable, hat: &HomologyTable) -> String {
    let mut out = format!("tilde rank {}\nhat rank {}\n", total_rank(tilde), total_rank(hat));
    for (g, r) in hat {
        out += &format!("  M={} A2={:?} rank {r}\n", g.maslov, g.alexander);
    }
    out
}

fn grid_tables(g: &GridDiagram) -> Result<(HomologyTable, HomologyTable, usize), Failure> {
    let c = build_grid_tilde_complex(g).map_err(fail)?;
    Ok((homology_table(&c).map_err(fail)?, hat_table(&c).map_err(fail)?, c.components))
}

fn validate(path: &Path) -> Result<Output, Failure> {
    let d = match read_diagram(path) {
        Ok(d) => d,
        Err(Failure(v)) => return Err(Failure(json!({ "valid": false, "error": v["error"] }))),
    };
    Ok(match d {
        Diagram::Grid(g) => {
            let comps = g.trace_components().len();
            Output {
                json: json!({ "kind": "grid", "valid": true, "size": g.size(), "components": comps }),
                text: format!("valid grid, size={}, components={comps}\n", g.size()),
            }
        }
        Diagram::Cube(c) => {
            let violations = c.check_crossings();
            if !violations.is_empty() {
                return Err(Failure(json!({ "kind": "cube", "valid": false, "violations": violations })));
            }
            Output {
                json: json!({ "kind": "cube", "valid": true, "size": c.size() }),
                text: format!("valid cube, size={}\n", c.size()),
            }
        }
        Diagram::Hyper(h) => {
            let class = classify_report(&h).map_err(fail)?.class;
            let comps = h.trace_hyperlink().map_err(fail)?.len();
            Output {
                json: json!({ "kind": "hypercube", "valid": true, "size": h.size(), "components": comps, "class": class }),
                text: format!("valid, class={class:?}, size={}, components={comps}\n", h.size()),
            }
        }
    })
}

fn project(path: &Path, plane: &str) -> Result<Output, Failure> {
    let g = match read_diagram(path)? {
        Diagram::Hyper(h) => h.project_grid(plane.parse::<HyperPlane>().map_err(fail)?),
        Diagram::Cube(c) => {
            let p: CubePlane = serde_json::from_value(json!(plane)).map_err(|_| fail(format!("unknown plane {plane:?}")))?;
            c.project(p).map_err(fail)?
        }
        Diagram::Grid(_) => return Err(fail("grids have no projections")),
    };
    Ok(Output { json: serde_json::to_value(&g).expect("serializable"), text: g.render_ascii() })
}

fn render(path: &Path) -> Result<Output, Failure> {
    let text = match read_diagram(path)? {
        Diagram::Grid(g) => g.render_ascii(),
        Diagram::Hyper(h) => h.render_schematic(),
        Diagram::Cube(_) => return Err(fail("cube rendering is not supported; project first")),
    };
    Ok(Output { json: json!({ "text": text }), text })
}

fn classify(path: &Path) -> Result<Output, Failure> {
    let h = read_hyper(path)?;
    let r = classify_report(&h).map_err(fail)?;
    let c = r.counts;
    let text = format!(
        "class={:?}\ncells V={} E={} F={} euler={}\ndouble point circles: {}\n",
        r.class,
        c.vertices,
        c.edges,
        c.faces,
        c.euler,
        r.circles.len()
    );
    Ok(Output { json: serde_json::to_value(&r).expect("serializable"), text })
}

fn homology(path: &Path) -> Result<Output, Failure> {
    let (tilde, hat) = match read_diagram(path)? {
        Diagram::Grid(g) => {
            let (t, h, _) = grid_tables(&g)?;
            (t, h)
        }
        Diagram::Hyper(h) => hyper_tables(&h).map_err(fail)?,
        Diagram::Cube(_) => return Err(fail("homology needs a grid or hypercube")),
    };
    Ok(Output { json: tables_json(&tilde, &hat), text: tables_text(&tilde, &hat) })
}

fn euler(path: &Path) -> Result<Output, Failure> {
    let (hat, comps) = match read_diagram(path)? {
        Diagram::Grid(g) => {
            let (_, h, comps) = grid_tables(&g)?;
            (h, comps)
        }
        Diagram::Hyper(h) => {
            let comps = h.trace_hyperlink().map_err(fail)?.len();
            (hyper_tables(&h).map_err(fail)?.1, comps)
        }
        Diagram::Cube(_) => return Err(fail("euler needs a grid or hypercube")),
    };
    let chi = euler_characteristic(&hat, comps);
    let terms: Vec<Value> = chi.terms.iter().map(|(e, c)| json!({ "exponents": e, "coefficient": c })).collect();
    Ok(Output {
        json: json!({ "euler": chi.to_string(), "doubledExponents": true, "terms": terms }),
        text: format!("{chi}\n"),
    })
}

fn moves(path: &Path, apply: Option<&str>) -> Result<Output, Failure> {
    let h = read_hyper(path)?;
    match apply {
        None => {
            let legal = hmoves::legal_moves(&h);
            let text = legal.iter().map(|m| format!("{}\n", serde_json::to_string(m).expect("serializable"))).collect();
            Ok(Output { json: json!({ "moves": legal }), text })
        }
        Some(s) => {
            let mv: Move = serde_json::from_str(s).map_err(|e| fail(format!("bad move: {e}")))?;
            let out = hmoves::apply(&h, mv).map_err(fail)?;
            Ok(Output { json: serde_json::to_value(out.markings()).expect("serializable"), text: out.render_schematic() })
        }
    }
}

fn search(spec: SearchSpec, text: bool) -> Result<Output, Failure> {
    let result = search_lifts(&spec);
    let (hits, stats) = match &result {
        Ok(r) => (r.hits.clone(), r.stats.clone()),
        Err(SearchError::BudgetExhausted(s)) => (Vec::new(), s.clone()),
        Err(e) => return Err(fail(e)),
    };
    let mut lines = String::new();
    for h in &hits {
        let line = if text {
            format!("hit candidate={} class={:?}\n{}", h.candidate, h.class, h.markings.validate().map_err(fail)?.render_schematic())
        } else {
            format!("{}\n", json!({ "hit": h }))
        };
        lines += &line;
    }
    let summary = json!({ "stats": stats, "hits": hits.len() });
    lines += &if text { format!("{summary:#}\n") } else { format!("{summary}\n") };
    if hits.is_empty() {
        print!("{lines}");
        return Err(Failure(json!({ "error": "no hit within budget" })));
    }
    Ok(Output { json: Value::Null, text: lines })
}

fn generate(size: usize, seed: u64) -> Result<Output, Failure> {
    if size < 2 {
        return Err(fail("generation needs size >= 2"));
    }
    let m = generate_markings_seeded(size, seed);
    let valid = m.validate();
    let text = match &valid {
        Ok(h) => format!("valid\n{}", h.render_schematic()),
        Err(e) => format!("crossing conditions fail: {e}\n{}", serde_json::to_string(&m).expect("serializable")),
    };
    Ok(Output { json: json!({ "markings": m, "valid": valid.is_ok() }), text })
}

fn repair(path: &Path, budget: usize) -> Result<Output, Failure> {
    let m = read_markings(path)?;
    let repairs = repair_fixture(&m, budget).map_err(fail)?;
    let text = repairs
        .iter()
        .map(|r| {
            let edits: Vec<String> =
                r.edits.iter().map(|e| format!("{}[{}].{} {} -> {}", e.family, e.index, e.axis, e.from, e.to)).collect();
            if edits.is_empty() {
                "valid as given\n".to_string()
            } else {
                format!("{}\n", edits.join(", "))
            }
        })
        .collect();
    Ok(Output { json: json!({ "repairs": repairs }), text })
}

fn report(path: &Path) -> Result<Output, Failure> {
    let h = read_hyper(path)?;
    let r = fixture_report(&h).map_err(fail)?;
    let mut text = format!("size={} components={} class={:?}\n", r.size, r.components, r.class);
    for p in &r.projections {
        text += &format!(
            "G_{}: components={} crossings={} alexander={:?} linking={:?}\n",
            p.plane, p.components, p.crossings, p.alexander_polynomial, p.linking_number
        );
    }
    text += &format!(
        "circles horizontal={} vertical={}\nhat rank {}\neuler {}\n",
        r.horizontal_circles,
        r.vertical_circles,
        r.hat.iter().map(|e| e.rank).sum::<usize>(),
        r.euler
    );
    Ok(Output { json: serde_json::to_value(&r).expect("serializable"), text })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Project { file, plane } => project(file, plane),
        Command::Render { file } => render(file),
        Command::Classify { file } => classify(file),
        Command::Homology { file } => homology(file),
        Command::Euler { file } => euler(file),
        Command::Move { file, apply } => moves(file, apply.as_deref()),
        Command::Search { size, target_wx, wx, yz, class, budget, max_hits, seed, strategy } => {
            let target = match target_wx {
                Some(p) => Some(serde_json::from_value::<GridDiagram>(read_json(p)?).map_err(fail)?),
                None => None,
            };
            let spec = SearchSpec {
                size: *size,
                target_wx: target,
                wx: *wx,
                yz: *yz,
                class: *class,
                budget: *budget,
                max_hits: *max_hits,
                seed: *seed,
                strategy: *strategy,
            };
            search(spec, cli.text)
        }
        Command::Generate { size, seed } => generate(*size, *seed),
        Command::Repair { file, budget } => repair(file, *budget),
        Command::FixtureReport { file } => report(file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    }
    if let Ok(v) = std::env::var("HYPERKUBE_SIZE_BOUND") {
        if v.parse::<usize>().is_err() {
            eprintln!("HYPERKUBE_SIZE_BOUND must be a non-negative integer, got {v:?}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) if out.json.is_null() => {
            print!("{}", out.text);
            ExitCode::SUCCESS
        }
        Ok(out) if cli.text => {
            print!("{}", out.text);
            ExitCode::SUCCESS
        }
        Ok(out) => {
            println!("{:#}", out.json);
            ExitCode::SUCCESS
        }
        Err(Failure(v)) => {
            if cli.text {
                eprintln!("{}", v.get("error").and_then(Value::as_str).map_or_else(|| v.to_string(), str::to_string));
            } else {
                println!("{v:#}");
            }
            ExitCode::from(1)
        }
    }
}
