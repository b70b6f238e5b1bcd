//! The `persuade` command line: problem files in, reports, CSV and SVG out.

pub mod commands;
pub mod error;
pub mod format;
pub mod problem;
pub mod random;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use persuasion_core::par::is_parallel_enabled;
use persuasion_core::{Execution, SolverConfig};

use crate::commands::Query;
use crate::error::{CliError, CliResult};
use crate::format::sig12;
use crate::problem::{read_problem_file, BeliefSpec, GridSpec, Problem, ProblemFile};
use crate::report::{Atom, Payload, RunReport, Settings, Solution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_VERIFY_FAIL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "persuade", version, about = "Sender-optimal persuasion through chains of mediators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the run report as JSON to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Record wall-clock time (makes reports differ between runs).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Run data-parallel loops on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// Replace the prior: `p` for two states or `a:b:c` coordinates.
    #[arg(long, value_name = "P")]
    pub prior: Option<String>,
    #[arg(long, value_name = "E")]
    pub eps: Option<f64>,
    /// Replace the grid with a uniform one of this spacing.
    #[arg(long, value_name = "S")]
    pub grid_step: Option<f64>,
    #[arg(long, value_name = "Q")]
    pub denominator: Option<u32>,
}

impl Overrides {
    fn apply(&self, file: &mut ProblemFile) -> CliResult<()> {
        if let Some(p) = &self.prior {
            let b = commands::parse_belief(p, file.states.max(2))?;
            file.prior = if file.states == 2 { BeliefSpec::Binary(b.x()) } else { BeliefSpec::Vector(b.coordinates()) };
        }
        if let Some(e) = self.eps {
            file.eps = e;
        }
        if let Some(s) = self.grid_step {
            file.grid = GridSpec { step: Some(s), ..GridSpec::default() };
        }
        if let Some(q) = self.denominator {
            file.denominator = Some(q);
        }
        Ok(())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sender's optimal value and signal distribution.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Exact rational arithmetic on the lattice.
        #[arg(long)]
        rational: bool,
    },
    /// Value curves over a range of priors, as CSV.
    Sweep {
        file: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, value_name = "A")]
        from: f64,
        #[arg(long, value_name = "B")]
        to: f64,
        #[arg(long, value_name = "S")]
        step: f64,
        /// Write the CSV here instead of standard output.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Affine domination of a pair or set, or garbling-proofness of a distribution.
    Check {
        file: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Which mediator's utility to test, from 1.
        #[arg(long, default_value_t = 1)]
        mediator: usize,
        #[arg(long, value_name = "Q1,Q2", group = "query")]
        pair: Option<String>,
        #[arg(long, value_name = "Q1,Q2,...", group = "query")]
        set: Option<String>,
        /// Weights on the grid points, in grid order; fractions allowed.
        #[arg(long, value_name = "W1,W2,...", group = "query")]
        dist: Option<String>,
    },
    /// Cross-check the lattice solver against backward induction.
    Verify {
        #[arg(required_unless_present = "random")]
        file: Option<PathBuf>,
        /// Verify a seeded random instance instead of a file.
        #[arg(long, value_name = "SEED", conflicts_with = "file")]
        random: Option<u64>,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        rational: bool,
        /// Largest game the verifier accepts.
        #[arg(long, default_value_t = 5000)]
        cap: usize,
    },
    /// Render a sweep CSV as SVG.
    Plot {
        csv: PathBuf,
        #[arg(short, long, value_name = "PATH")]
        output: PathBuf,
        #[arg(long, default_value = "sweep")]
        title: String,
    },
}

struct Ui<'a> {
    out: &'a mut dyn Write,
    color: bool,
}

impl Ui<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }

    fn verdict(&self, ok: bool, yes: &str, no: &str) -> String {
        let (word, code) = if ok { (yes, "32") } else { (no, "31") };
        if self.color {
            format!("\x1b[{code}m{word}\x1b[0m")
        } else {
            word.to_string()
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. `color` enables ANSI verdicts.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = if color { e.render().ansi().to_string() } else { e.render().to_string() };
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut ui = Ui { out, color };
    match execute(&cli, echo, &mut ui) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.kind());
            if let Some(h) = e.hint() {
                let _ = writeln!(err, "hint: {h}");
            }
            e.exit_code()
        }
    }
}

fn load(path: &PathBuf, overrides: &Overrides) -> CliResult<(ProblemFile, Problem)> {
    let mut file = read_problem_file(path)?;
    overrides.apply(&mut file)?;
    let problem = file.resolve()?;
    Ok((file, problem))
}

fn execute(cli: &Cli, echo: Vec<String>, ui: &mut Ui) -> CliResult<i32> {
    let start = Instant::now();
    let execution = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let config = SolverConfig::default().with_execution(execution);
    let mut settings = Settings { rational: false, parallel: !cli.sequential && is_parallel_enabled(), seed: None };
    let mut warnings = Vec::new();
    let mut code = EXIT_OK;
    let mut text: Vec<String> = Vec::new();
    let (problem_file, result) = match &cli.command {
        Command::Solve { file, overrides, rational } => {
            let (pf, problem) = load(file, overrides)?;
            settings.rational = *rational;
            let sol = commands::solve(&problem, *rational, &config, &mut warnings)?;
            solution_text(&sol, &mut text);
            (Some(pf), Payload::Solve(sol))
        }
        Command::Sweep { file, overrides, from, to, step, csv, svg } => {
            let (pf, problem) = load(file, overrides)?;
            let priors = commands::prior_range(*from, *to, *step)?;
            let (solver, rows) = commands::sweep(&problem, &priors, &config, &mut warnings)?;
            let table = commands::write_csv(&rows)?;
            match csv {
                Some(path) => {
                    commands::write_file(path, &table)?;
                    text.push(format!("wrote {} rows to {}", rows.len(), path.display()));
                }
                None => text.extend(table.lines().map(String::from)),
            }
            if let Some(path) = svg {
                let title = pf.description.clone().unwrap_or_else(|| file.display().to_string());
                commands::write_file(path, &svg::render(&rows, &title))?;
                text.push(format!("wrote {}", path.display()));
            }
            let payload = Payload::Sweep {
                solver,
                rows,
                csv: csv.as_ref().map(|p| p.display().to_string()),
                svg: svg.as_ref().map(|p| p.display().to_string()),
            };
            (Some(pf), payload)
        }
        Command::Check { file, overrides, mediator, pair, set, dist } => {
            let (pf, problem) = load(file, overrides)?;
            let query = match (pair, set, dist) {
                (Some(p), None, None) => Query::Pair(p.clone()),
                (None, Some(s), None) => Query::Set(s.clone()),
                (None, None, Some(d)) => Query::Dist(d.clone()),
                _ => return Err(CliError::input("give one of --pair, --set and --dist")),
            };
            let payload = commands::check(&problem, *mediator, &query, &config)?;
            if let Payload::Check { query, verdict, violation, garbling, .. } = &payload {
                text.push(format!("{query}: {}", ui.verdict(*verdict, "true", "false")));
                if let Some(v) = violation {
                    if !v.weights.is_empty() {
                        text.push(format!("violating weights: {}", join(&v.weights)));
                    }
                    text.push(format!("violating mean: {}", join(&v.mean)));
                    text.push(format!("gap: {}", sig12(v.gap)));
                }
                if let Some(g) = garbling {
                    text.push(format!("best garbling gain: {}", sig12(g.gain)));
                    text.push(format!("best garbling: {}", atoms_text(&g.distribution)));
                }
            }
            (Some(pf), payload)
        }
        Command::Verify { file, random, overrides, rational, cap } => {
            settings.rational = *rational;
            let (pf, problem) = match (file, random) {
                (Some(f), _) => {
                    let (pf, p) = load(f, overrides)?;
                    (Some(pf), p)
                }
                (None, Some(seed)) => {
                    settings.seed = Some(*seed);
                    let mut p = random::small_problem(*seed);
                    if let Some(e) = overrides.eps {
                        p.eps = e;
                    }
                    (None, p)
                }
                (None, None) => return Err(CliError::input("give a problem file or --random SEED")),
            };
            let v = commands::verify(&problem, *rational, &config, *cap)?;
            let (a, b) = match &v.exact_values {
                Some((a, b)) => (a.clone(), b.clone()),
                None => (sig12(v.chain_value), sig12(v.backward_induction_value)),
            };
            text.push(format!("lattice elements: {}", v.elements));
            text.push(format!("solve_chain: {a}"));
            text.push(format!("backward induction: {b}"));
            text.push(ui.verdict(v.pass, "PASS", "FAIL"));
            if !v.pass {
                code = EXIT_VERIFY_FAIL;
            }
            let payload = Payload::Verify {
                chain_value: v.chain_value,
                backward_induction_value: v.backward_induction_value,
                exact_values: v.exact_values,
                elements: v.elements,
                pass: v.pass,
            };
            (pf, payload)
        }
        Command::Plot { csv, output, title } => {
            let rows = commands::read_csv(csv)?;
            commands::write_file(output, &svg::render(&rows, title))?;
            text.push(format!("wrote {}", output.display()));
            (None, Payload::Plot { input: csv.display().to_string(), output: output.display().to_string(), rows: rows.len() })
        }
    };
    let timing_ms = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let report = RunReport { command: echo, problem: problem_file, settings, result, warnings, timing_ms };
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if let Some(path) = &cli.report {
        commands::write_file(path, &json)?;
    }
    if cli.json {
        ui.line(json.trim_end());
    } else {
        for t in text {
            ui.line(t);
        }
        for w in &report.warnings {
            ui.line(format!("warning: {w}"));
        }
        if let Some(t) = timing_ms {
            ui.line(format!("time: {t:.1} ms"));
        }
    }
    Ok(code)
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| sig12(*x)).collect::<Vec<_>>().join(", ")
}

fn belief_text(b: &[f64]) -> String {
    if b.len() == 2 {
        sig12(b[1])
    } else {
        format!("({})", join(b))
    }
}

fn atoms_text(atoms: &[Atom]) -> String {
    atoms
        .iter()
        .map(|a| {
            let w = a.exact_weight.clone().unwrap_or_else(|| sig12(a.weight));
            format!("{w} @ {}", belief_text(&a.belief))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn solution_text(sol: &Solution, text: &mut Vec<String>) {
    text.push(format!("solver: {}", sol.solver));
    text.push(format!("value: {}", sig12(sol.value)));
    if let Some(e) = &sol.exact_value {
        text.push(format!("exact value: {e}"));
    }
    text.push(format!("distribution: {}", atoms_text(&sol.distribution)));
    text.push(format!("support size: {}", sol.support_size));
    if sol.used_no_information {
        text.push("no information is optimal".into());
    }
    if !sol.feasible_set_sizes.is_empty() {
        let sizes: Vec<String> =
            sol.feasible_set_sizes.iter().enumerate().map(|(i, s)| format!("|M_{}| = {s}", i + 1)).collect();
        text.push(format!("feasible sets: {}", sizes.join(", ")));
    }
    if let Some(l) = &sol.lattice {
        text.push(format!(
            "lattice: {} elements, {} order edges, {} grid points, denominator {}",
            l.elements, l.order_edges, l.grid_points, l.denominator
        ));
    }
}
