//! Command-line front end.
//!
//! Exit codes: 0 found / agreement, 1 no envy-free assignment exists,
//! 2 usage or input error, 3 solver and oracle disagree.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bigraph;
use crate::oracle;
use crate::prefs::{parse_profile, PreferenceProfile};
use crate::randmodel::{self, CSV_HEADER, DEFAULT_SEED};
use crate::solver::{self, Solution, SolveReport};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NONE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "envyfree", version, about = "Envy-free house allocation solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance file.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Include the per-iteration trace in text output.
        #[arg(long)]
        trace: bool,
        /// Print the auxiliary digraph of each failed round to stderr.
        #[arg(long)]
        dump_graph: bool,
    },
    /// Estimate how often envy-free assignments exist under random preferences.
    Simulate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// House count, or `3nlogn` for ceil(3 n ln n).
        #[arg(long, required_unless_present = "sweep")]
        m: Option<HouseCount>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Range of house counts `m1:m2:step`, inclusive.
        #[arg(long, conflicts_with = "m")]
        sweep: Option<Sweep>,
    },
    /// Cross-check the solver against exhaustive search on a small instance.
    Oracle { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HouseCount {
    Fixed(usize),
    ThreeNLogN,
}

impl HouseCount {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            HouseCount::Fixed(m) => m,
            HouseCount::ThreeNLogN => randmodel::three_n_log_n(n),
        }
    }
}

impl FromStr for HouseCount {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("3nlogn") {
            return Ok(HouseCount::ThreeNLogN);
        }
        match s.parse::<usize>() {
            Ok(m) if m >= 1 => Ok(HouseCount::Fixed(m)),
            _ => Err(format!("expected a positive integer or `3nlogn`, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sweep {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl Sweep {
    pub fn values(self) -> impl Iterator<Item = usize> {
        (self.start..=self.end).step_by(self.step)
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("expected m1:m2:step with 1 <= m1 <= m2 and step >= 1, got {s:?}");
        let [a, b, c] = parts[..] else {
            return Err(bad());
        };
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let sweep = Sweep {
            start: parse(a)?,
            end: parse(b)?,
            step: parse(c)?,
        };
        if sweep.start == 0 || sweep.start > sweep.end || sweep.step == 0 {
            return Err(bad());
        }
        Ok(sweep)
    }
}

/// Captured result of one command.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.push('\n');
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Solve {
            file,
            format,
            trace,
            dump_graph,
        } => run_solve(file, *format, *trace, *dump_graph),
        Command::Simulate {
            n,
            m,
            trials,
            seed,
            sweep,
        } => {
            let n = *n as usize;
            let ms: Vec<usize> = match (sweep, m) {
                (Some(s), _) => s.values().collect(),
                (None, Some(m)) => vec![m.resolve(n)],
                (None, None) => return Outcome::usage("either --m or --sweep is required"),
            };
            run_simulate(n, &ms, *trials, *seed)
        }
        Command::Oracle { file } => run_oracle(file),
    }
}

fn load(path: &Path) -> Result<PreferenceProfile, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))?;
    parse_profile(&text).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))
}

pub fn run_solve(path: &Path, format: Format, with_trace: bool, dump_graph: bool) -> Outcome {
    let profile = match load(path) {
        Ok(p) => p,
        Err(out) => return out,
    };
    let solution = match solver::envy_free_assignment(&profile) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
    };
    let mut stderr = String::new();
    if dump_graph {
        for (i, it) in solution.trace.iterations.iter().enumerate() {
            let graph = solver::top_choice_graph(&profile, &it.remaining);
            let matching = bigraph::maximum_matching(&graph);
            let _ = writeln!(stderr, "# iteration {}", i + 1);
            stderr.push_str(&bigraph::auxiliary_digraph_dump(&graph, &matching));
        }
    }
    let report = SolveReport::from(&solution);
    let stdout = match format {
        Format::Json => {
            let mut s = serde_json::to_string(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(&report, with_trace),
    };
    Outcome {
        code: if solution.is_found() { EXIT_FOUND } else { EXIT_NONE },
        stdout,
        stderr,
    }
}

fn join(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn render_text(report: &SolveReport, with_trace: bool) -> String {
    let mut out = String::new();
    match report.status {
        solver::Status::Found => {
            out.push_str("found\n");
            for (agent, house) in &report.assignment {
                let _ = writeln!(out, "agent {agent} -> house {house}");
            }
        }
        solver::Status::None => out.push_str("none\n"),
    }
    if with_trace {
        for it in &report.trace {
            let _ = write!(out, "iteration {}: remaining [{}]", it.iteration, join(&it.remaining));
            match &it.violator {
                None => out.push_str(" saturating\n"),
                Some(v) => {
                    let _ = writeln!(
                        out,
                        " violator agents [{}] houses [{}] removed [{}]",
                        join(&v.agents),
                        join(&v.houses),
                        join(&it.removed)
                    );
                }
            }
        }
    }
    out
}

pub fn run_simulate(n: usize, ms: &[usize], trials: u64, seed: u64) -> Outcome {
    let mut stdout = String::from(CSV_HEADER);
    stdout.push('\n');
    for &m in ms {
        match randmodel::estimate_existence_probability(n, m, trials, seed) {
            Ok(stats) => {
                stdout.push_str(&stats.csv_row());
                stdout.push('\n');
            }
            Err(e) => return Outcome::usage(e.to_string()),
        }
    }
    Outcome {
        code: 0,
        stdout,
        stderr: String::new(),
    }
}

pub fn run_oracle(path: &Path) -> Outcome {
    let profile = match load(path) {
        Ok(p) => p,
        Err(out) => return out,
    };
    let solution = match solver::envy_free_assignment(&profile) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
    };
    let (count, problems) = match disagreements(&profile, &solution) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
    };

    let mut stdout = String::new();
    let _ = writeln!(stdout, "envy-free assignments: {count}");
    match &solution.assignment {
        Some(a) => {
            let _ = writeln!(stdout, "solver: found [{}]", join(&one_based(a.houses())));
        }
        None => stdout.push_str("solver: none\n"),
    }
    if problems.is_empty() {
        stdout.push_str("agree\n");
        Outcome {
            code: EXIT_FOUND,
            stdout,
            stderr: String::new(),
        }
    } else {
        stdout.push_str("disagree\n");
        Outcome {
            code: EXIT_DISAGREE,
            stdout,
            stderr: problems.iter().map(|p| format!("{p}\n")).collect(),
        }
    }
}

/// Compare a solver result with exhaustive search. Returns the number of
/// envy-free assignments and a list of disagreements (empty when they agree).
pub fn disagreements(
    profile: &PreferenceProfile,
    solution: &Solution,
) -> Result<(usize, Vec<&'static str>), oracle::OracleError> {
    let all = oracle::enumerate_ef_assignments(profile)?;
    let mut problems = Vec::new();
    match &solution.assignment {
        Some(a) if !all.contains(a) => problems.push("solver assignment is not envy-free"),
        Some(a) if !oracle::is_pareto_among_ef(profile, a)? => {
            problems.push("solver assignment is Pareto-dominated by another envy-free one")
        }
        Some(_) => {}
        None if !all.is_empty() => {
            problems.push("solver found nothing but an envy-free assignment exists")
        }
        None => {}
    }
    Ok((all.len(), problems))
}

fn one_based(ids: &[usize]) -> Vec<usize> {
    ids.iter().map(|i| i + 1).collect()
}
