//! Command-line front end for deckforge: deck computation, comparison,
//! reconstruction queries, exhaustive searches and verification suites.
//!
//! Every command renders to a string so the binary, the tests and other
//! callers see byte-identical output.

pub mod cache;
pub mod suites;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use deckforge::reconstruct::degree_list_from_deck;
use deckforge::search::{
    classify_deck, find_ambiguous, find_equal_deck_tree_pairs, named_counterexample, Budget, CounterexampleName,
};
use deckforge::{graph6, Deck, DeckParams, Error, Graph};

pub use cache::DeckCache;
pub use suites::{run_suite, Suite, SuiteResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "deckforge", version, about = "Decks of small graphs and what they determine")]
pub struct RunConfig {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Directory for cached decks.
    #[arg(long, global = true, env = "DECKFORGE_CACHE")]
    pub cache_dir: Option<PathBuf>,

    /// Raise or lower every enumeration budget to this many vertices.
    #[arg(long, global = true)]
    pub budget_vertices: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the deck of each graph in a graph6 file.
    Deck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        card_size: usize,
    },
    /// Compare the decks of two graphs.
    Compare {
        /// One file with two graphs, or two files with one graph each.
        #[arg(long, num_args = 1..=2, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        card_size: usize,
    },
    /// Degree list determined by an acyclic deck.
    Degrees {
        #[arg(long)]
        input: PathBuf,
    },
    /// Find every reconstruction of a deck and sort them by acyclicity.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Search for decks shared by an n-vertex forest and a graph with a cycle.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Search for non-isomorphic trees with equal decks.
    TreePairs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        card_size: usize,
    },
    /// Build a named construction and check its deck claim.
    Counterexample {
        name: String,
        #[arg(long)]
        ell: usize,
    },
    /// Run verification suites and print a pass/fail table.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest vertex count to visit, overriding each suite's default.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    run_config(&config)
}

pub fn run_config(config: &RunConfig) -> Outcome {
    let result = match config.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be positive".into())),
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| execute(config)),
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
        None => execute(config),
    };
    match result {
        Ok(outcome) => outcome,
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

fn budget(config: &RunConfig) -> Budget {
    config.budget_vertices.map_or_else(Budget::default, Budget::uniform)
}

fn cache(config: &RunConfig) -> Result<DeckCache, CliError> {
    match &config.cache_dir {
        Some(dir) => DeckCache::at(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source }),
        None => Ok(DeckCache::disabled()),
    }
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let io_err = |source| CliError::Io { path: path.display().to_string(), source };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn read_graphs(path: &PathBuf) -> Result<Vec<Graph>, CliError> {
    Ok(graph6::decode_many(&read_input(path)?)?)
}

fn read_deck(path: &PathBuf) -> Result<Deck, CliError> {
    Ok(Deck::from_text(&read_input(path)?)?)
}

fn params(n: usize, ell: usize) -> Result<DeckParams, CliError> {
    DeckParams::new(n, ell).map_err(|_| CliError::Usage(format!("--ell must be below --n (got n={n}, ell={ell})")))
}

fn render_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    let json = config.format == Format::Json;
    let b = budget(config);
    let text = match &config.command {
        Command::Deck { input, card_size } => cmd_deck(&read_graphs(input)?, *card_size, &cache(config)?, json)?,
        Command::Compare { input, card_size } => {
            let mut graphs = Vec::new();
            for path in input {
                graphs.extend(read_graphs(path)?);
            }
            let [a, b] = <[Graph; 2]>::try_from(graphs)
                .map_err(|g| CliError::Usage(format!("compare needs exactly two graphs, got {}", g.len())))?;
            cmd_compare(&a, &b, *card_size, &cache(config)?, json)?
        }
        Command::Degrees { input } => cmd_degrees(&read_deck(input)?, json)?,
        Command::Classify { input } => cmd_classify(&read_deck(input)?, &b, json)?,
        Command::Search { n, ell } => cmd_search(params(*n, *ell)?, &b, json)?,
        Command::TreePairs { n, card_size } => cmd_tree_pairs(*n, *card_size, &b, json)?,
        Command::Counterexample { name, ell } => {
            let name: CounterexampleName = name.parse()?;
            cmd_counterexample(name, *ell, &cache(config)?, json)?
        }
        Command::Verify { suite, n } => {
            let suites = suites::parse_suites(suite)?;
            let (text, all_passed) = cmd_verify(&suites, *n, &b, json)?;
            let code = if all_passed { EXIT_OK } else { EXIT_FAILURE };
            return Ok(Outcome { stdout: text, stderr: String::new(), code });
        }
    };
    Ok(Outcome::ok(text))
}

/// Decks of each graph; text decks are separated by blank lines.
pub fn cmd_deck(graphs: &[Graph], j: usize, cache: &DeckCache, json: bool) -> Result<String, CliError> {
    let decks = graphs.iter().map(|g| cache.deck(g, j)).collect::<Result<Vec<_>, _>>()?;
    if json {
        return Ok(render_json(&decks));
    }
    Ok(decks.iter().map(Deck::to_text).collect::<Vec<_>>().join("\n"))
}

pub fn cmd_compare(a: &Graph, b: &Graph, j: usize, cache: &DeckCache, json: bool) -> Result<String, CliError> {
    if a.n() != b.n() {
        return Err(CliError::Usage(format!("graphs have {} and {} vertices", a.n(), b.n())));
    }
    let equal = cache.deck(a, j)? == cache.deck(b, j)?;
    let verdict = if equal { "EQUAL" } else { "DIFFERENT" };
    if json {
        return Ok(render_json(&json!({ "verdict": verdict, "n": a.n(), "card_size": j })));
    }
    Ok(format!("{verdict}\n"))
}

pub fn cmd_degrees(d: &Deck, json: bool) -> Result<String, CliError> {
    let degrees = degree_list_from_deck(d)?;
    if json {
        return Ok(render_json(&json!({ "n": d.n(), "card_size": d.card_size(), "degrees": degrees })));
    }
    let words: Vec<String> = degrees.iter().map(usize::to_string).collect();
    Ok(format!("{}\n", words.join(" ")))
}

pub fn cmd_classify(d: &Deck, budget: &Budget, json: bool) -> Result<String, CliError> {
    use deckforge::search::DeckClass::*;
    let class = classify_deck(d, budget)?;
    if json {
        return Ok(render_json(&class));
    }
    let mut out = format!("{}\n", class.label());
    let (acyclic, nonacyclic) = match &class {
        AllAcyclic { acyclic } => (acyclic.as_slice(), &[][..]),
        AllNonacyclic { nonacyclic } => (&[][..], nonacyclic.as_slice()),
        Ambiguous { acyclic, nonacyclic } => (acyclic.as_slice(), nonacyclic.as_slice()),
        NoReconstruction => (&[][..], &[][..]),
    };
    for c in acyclic {
        out.push_str(&format!("acyclic {c}\n"));
    }
    for c in nonacyclic {
        out.push_str(&format!("nonacyclic {c}\n"));
    }
    Ok(out)
}

pub fn cmd_search(params: DeckParams, budget: &Budget, json: bool) -> Result<String, CliError> {
    let report = find_ambiguous(params, budget)?;
    Ok(if json { render_json(&report) } else { report.to_text() })
}

pub fn cmd_tree_pairs(n: usize, j: usize, budget: &Budget, json: bool) -> Result<String, CliError> {
    let report = find_equal_deck_tree_pairs(n, j, budget)?;
    Ok(if json { render_json(&report) } else { report.to_text() })
}

#[derive(Serialize)]
struct ConstructionReport {
    name: String,
    ell: usize,
    card_size: usize,
    graphs: Vec<String>,
    checks: Vec<(String, bool)>,
}

/// The construction in graph6, followed by the deck facts it is known for.
pub fn cmd_counterexample(
    name: CounterexampleName,
    ell: usize,
    cache: &DeckCache,
    json: bool,
) -> Result<String, CliError> {
    let c = named_counterexample(name, ell)?;
    let j = c.card_size;
    let mut checks = Vec::new();
    if let [a, b] = c.graphs.as_slice() {
        checks.push((format!("equal {j}-decks"), cache.deck(a, j)? == cache.deck(b, j)?));
        if name == CounterexampleName::SpinozaWest {
            checks.push((format!("different {}-decks", j + 1), cache.deck(a, j + 1)? != cache.deck(b, j + 1)?));
        }
    } else {
        let g = &c.graphs[0];
        checks.push((format!("acyclic {j}-deck"), cache.deck(g, j)?.is_acyclic()));
        checks.push(("has a cycle".into(), !deckforge::metrics::is_forest(g)));
    }
    let report = ConstructionReport {
        name: name.to_string(),
        ell,
        card_size: j,
        graphs: c.graphs.iter().map(graph6::encode).collect(),
        checks,
    };
    if json {
        return Ok(render_json(&report));
    }
    let mut out = format!("{} l={} card_size={}\n", report.name, ell, j);
    for g in &report.graphs {
        out.push_str(g);
        out.push('\n');
    }
    for (what, ok) in &report.checks {
        out.push_str(&format!("{what}: {}\n", if *ok { "yes" } else { "no" }));
    }
    Ok(out)
}

/// Runs the suites in order; returns the rendering and whether all passed.
pub fn cmd_verify(
    suites: &[Suite],
    limit: Option<usize>,
    budget: &Budget,
    json: bool,
) -> Result<(String, bool), CliError> {
    let results = suites.iter().map(|&s| run_suite(s, limit, budget)).collect::<Result<Vec<_>, _>>()?;
    let passed = results.iter().all(SuiteResult::passed);
    let text = if json { render_json(&results) } else { suites::render_table(&results) };
    Ok((text, passed))
}
