//! Command-line front end: graph ingestion, polynomial and numerator
//! emission in canonical text or JSON, and identity sweeps over generated
//! graph corpora.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::grapoly::{self, IndexLabel, QuadForm, VecPoly};
use crate::integrand::{self, Gauge};
use crate::polyring::EpsLaurent;
use crate::{corpus, exec, identities, oracle};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Read;

#[derive(Parser)]
#[command(name = "qedpoly", version, about = "Exact graph polynomials and QED integrand numerators")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GaugeArg {
    General,
    Feynman,
}

impl From<GaugeArg> for Gauge {
    fn from(g: GaugeArg) -> Gauge {
        match g {
            GaugeArg::General => Gauge::General,
            GaugeArg::Feynman => Gauge::Feynman,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Kirchhoff polynomial of the graph.
    Psi { graph: String },
    /// Second Symanzik polynomial as a quadratic form in the edge momenta.
    Phi { graph: String },
    /// Cycle polynomial: the full quadratic form, one diagonal entry, or
    /// one off-diagonal pair entry.
    Chi {
        graph: String,
        #[arg(long)]
        edge: Option<u32>,
        #[arg(long, requires = "edge")]
        edge2: Option<u32>,
    },
    /// X vector polynomial of an edge.
    Xpoly {
        graph: String,
        #[arg(long)]
        edge: u32,
    },
    /// Assembled QED numerator, optionally evaluated on external momenta.
    Numerator {
        graph: String,
        #[arg(long, value_enum, default_value_t = GaugeArg::General)]
        gauge: GaugeArg,
        #[arg(long)]
        momenta: bool,
    },
    /// Check the assembled numerator against the differentiation oracle.
    VerifyTheorem { graph: String },
    /// Run the polynomial identity battery over a graph corpus.
    CheckIdentities {
        /// Largest edge count in the corpus.
        #[arg(long, default_value_t = 5)]
        max_edges: usize,
        /// Number of random graphs; 0 enumerates exhaustively instead.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses a graph from JSON text.
pub fn parse_graph(text: &str) -> Result<Graph> {
    Graph::from_json(text)
}

fn load_graph(path: &str) -> Result<Graph> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::ParseError(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::ParseError(format!("{path}: {e}")))?
    };
    parse_graph(&text)
}

/// Entry point. Returns the process exit code: 0 on success or a passing
/// check, 1 on a verification failure, 2 on input errors.
pub fn main() -> i32 {
    exec::init_threads_from_env();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            if cli.output == OutputFormat::Json {
                println!("{}", serde_json::json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            2
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Psi { graph } => {
            let g = load_graph(graph)?;
            let psi = grapoly::kirchhoff(&g);
            match cli.output {
                OutputFormat::Text => println!("{psi}"),
                OutputFormat::Json => {
                    println!("{}", serde_json::json!({ "psi": psi.to_string() }))
                }
            }
            Ok(0)
        }
        Command::Phi { graph } => {
            let g = load_graph(graph)?;
            let phi = grapoly::symanzik2(&g)?;
            match cli.output {
                OutputFormat::Text => print_quadform("phi", &phi),
                OutputFormat::Json => {
                    println!("{}", serde_json::json!({ "phi": phi.to_json_value() }))
                }
            }
            Ok(0)
        }
        Command::Chi { graph, edge, edge2 } => {
            let g = load_graph(graph)?;
            match (edge, edge2) {
                (None, _) => {
                    let chi = grapoly::cycle_poly(&g)?;
                    match cli.output {
                        OutputFormat::Text => print_quadform("chi", &chi),
                        OutputFormat::Json => {
                            println!("{}", serde_json::json!({ "chi": chi.to_json_value() }))
                        }
                    }
                }
                (Some(e), None) => {
                    let p = grapoly::chi_edge(&g, *e)?;
                    match cli.output {
                        OutputFormat::Text => println!("{p}"),
                        OutputFormat::Json => {
                            println!("{}", serde_json::json!({ "chi": p.to_string() }))
                        }
                    }
                }
                (Some(e), Some(f)) => {
                    let p = grapoly::chi_pair(&g, *e, *f)?;
                    match cli.output {
                        OutputFormat::Text => println!("{p}"),
                        OutputFormat::Json => {
                            println!("{}", serde_json::json!({ "chi": p.to_string() }))
                        }
                    }
                }
            }
            Ok(0)
        }
        Command::Xpoly { graph, edge } => {
            let g = load_graph(graph)?;
            let x = grapoly::x_poly(&g, *edge, IndexLabel::MuEdge(*edge))?;
            match cli.output {
                OutputFormat::Text => print_vecpoly(&x),
                OutputFormat::Json => {
                    println!("{}", serde_json::json!({ "xpoly": x.to_json_value() }))
                }
            }
            Ok(0)
        }
        Command::Numerator { graph, gauge, momenta } => {
            let g = load_graph(graph)?;
            let n = integrand::numerator(&g, (*gauge).into())?;
            if *momenta {
                let ma = integrand::momentum_paths(&g)?;
                let ev = integrand::evaluate_numerator(&g, &n, &ma)?;
                match cli.output {
                    OutputFormat::Text => {
                        println!("gauge: {}", ev.gauge.as_str());
                        println!("base vertex: {} (eliminates {})", ma.base_vertex, ma.eliminated);
                        for (i, t) in ev.terms.iter().enumerate() {
                            let factors: Vec<String> = t
                                .metric_pairs
                                .iter()
                                .map(|(a, b)| format!("g({a},{b})"))
                                .chain(t.momentum_factors.iter().map(|(q, l)| format!("{q}({l})")))
                                .collect();
                            println!(
                                "term {}: {}",
                                i + 1,
                                render_term(&factors, &t.coeff, t.two_power, t.psi_power)
                            );
                        }
                    }
                    OutputFormat::Json => {
                        let mut body = integrand::evaluated_to_json(&ev);
                        body["base_vertex"] = serde_json::json!(ma.base_vertex);
                        body["eliminated"] = serde_json::json!(ma.eliminated);
                        println!("{body}");
                    }
                }
            } else {
                match cli.output {
                    OutputFormat::Text => {
                        println!("gauge: {}", n.gauge.as_str());
                        for (i, t) in n.terms.iter().enumerate() {
                            let factors: Vec<String> = t
                                .metric_pairs
                                .iter()
                                .map(|(a, b)| format!("g({a},{b})"))
                                .chain(t.x_factors.iter().map(|(e, l)| format!("X(e{e},{l})")))
                                .collect();
                            println!(
                                "term {}: {}",
                                i + 1,
                                render_term(&factors, &t.coeff, t.two_power, t.psi_power)
                            );
                        }
                    }
                    OutputFormat::Json => println!("{}", integrand::numerator_to_json(&n)),
                }
            }
            Ok(0)
        }
        Command::VerifyTheorem { graph } => {
            let g = load_graph(graph)?;
            let report = oracle::verify_theorem(&g)?;
            match cli.output {
                OutputFormat::Text => {
                    println!(
                        "general gauge matches oracle: {}",
                        if report.general.equal { "yes" } else { "no" }
                    );
                    println!(
                        "feynman gauge matches eps^0 slice: {}",
                        if report.feynman.equal { "yes" } else { "no" }
                    );
                    println!(
                        "terms: oracle {}, general {}, feynman {}",
                        report.oracle_terms, report.general_terms, report.feynman_terms
                    );
                    for d in report.general.divergences.iter().chain(&report.feynman.divergences) {
                        println!("mismatch: metric {:?}, xi {:?}: {}", d.metric, d.xi, d.eps_diff);
                    }
                    println!("result: {}", if report.all_equal() { "pass" } else { "fail" });
                }
                OutputFormat::Json => println!("{}", report.to_json_value()),
            }
            Ok(if report.all_equal() { 0 } else { 1 })
        }
        Command::CheckIdentities { max_edges, samples, seed } => {
            let graphs = if *samples == 0 {
                corpus::exhaustive_connected(*max_edges)
            } else {
                corpus::random_connected(*max_edges, *samples, *seed)
            };
            let summary = identities::check_corpus(&graphs);
            match cli.output {
                OutputFormat::Text => {
                    if *samples == 0 {
                        println!("corpus: exhaustive, up to {max_edges} edges ({} graphs)", summary.graphs);
                    } else {
                        println!(
                            "corpus: {} random graphs, up to {max_edges} edges (seed {seed})",
                            summary.graphs
                        );
                    }
                    println!("checks run: {}", summary.checks);
                    for f in &summary.failures {
                        println!("FAIL {}: {}", f.check, f.detail);
                        println!("  graph: {}", f.graph.replace('\n', " "));
                    }
                    println!("result: {}", if summary.is_ok() { "pass" } else { "fail" });
                }
                OutputFormat::Json => println!("{}", summary.to_json_value()),
            }
            Ok(if summary.is_ok() { 0 } else { 1 })
        }
    }
}

fn render_term(factors: &[String], coeff: &EpsLaurent, two_power: i32, psi_power: u32) -> String {
    let mut parts: Vec<String> = factors.to_vec();
    if coeff != &EpsLaurent::one() || parts.is_empty() {
        parts.push(format!("[{coeff}]"));
    }
    if two_power != 0 {
        parts.push(format!("2^{two_power}"));
    }
    let mut out = parts.join(" * ");
    if psi_power > 0 {
        out.push_str(&format!(" / Psi^{psi_power}"));
    }
    out
}

fn print_quadform(name: &str, q: &QuadForm) {
    if q.is_zero() {
        println!("0");
        return;
    }
    for ((e, f), p) in q.entries() {
        println!("{name}[{e},{f}] = {p}");
    }
}

fn print_vecpoly(x: &VecPoly) {
    println!("X(e{}, {})", x.edge, x.index);
    for (e, p) in &x.coeffs {
        println!("xi_{e}: {p}");
    }
}
