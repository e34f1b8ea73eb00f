use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use mvp_core::automata::seconds;
use mvp_core::planner::gamma_lower_bound;
use mvp_core::render::render_svg;
use mvp_core::report::{Checkpoint, ConfigEcho, RunReport};
use mvp_core::{Error, PlannerConfig, Scenario, TimedWord, WeightedRulebook};

#[derive(Parser)]
#[command(name = "mvp", version, about = "Minimum-violation motion planning on road scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan from the scenario's initial pose to its goal.
    Plan(PlanArgs),
    /// Score a timed word against a rulebook.
    Check {
        rules: PathBuf,
        word: PathBuf,
        /// Cross-check every rule against brute-force erasure.
        #[arg(long)]
        oracle: bool,
    },
    /// Draw a scenario and a saved run as SVG.
    Render {
        solution: PathBuf,
        scenario: PathBuf,
        /// Output file; stdout if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct PlanArgs {
    scenario: PathBuf,
    rules: PathBuf,
    #[arg(long, default_value_t = 5000)]
    iterations: usize,
    #[arg(long, env = "MVP_SEED", default_value_t = 0)]
    seed: u64,
    /// Radius constant; defaults to 1.1 times its lower bound.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = mvp_core::planner::DEFAULT_GOAL_BIAS)]
    goal_bias: f64,
    #[arg(long, default_value_t = 500)]
    checkpoint_every: usize,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value = "solution.json")]
    json: PathBuf,
    /// Leave wall-clock times out of the report.
    #[arg(long)]
    deterministic: bool,
}

/// Failures that map to their own exit codes.
#[derive(Debug)]
enum Outcome {
    NoSolution,
    OracleDisagrees,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::NoSolution => f.write_str("no solution found within the iteration budget"),
            Outcome::OracleDisagrees => f.write_str("oracle disagrees with the automaton"),
        }
    }
}

impl std::error::Error for Outcome {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Plan(args) => plan(&args),
        Command::Check { rules, word, oracle } => check(&rules, &word, oracle),
        Command::Render {
            solution,
            scenario,
            output,
        } => render(&solution, &scenario, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Outcome>() {
                Some(Outcome::NoSolution) => ExitCode::from(2),
                Some(Outcome::OracleDisagrees) => ExitCode::from(3),
                None => ExitCode::from(1),
            }
        }
    }
}

fn load_scenario(path: &Path) -> Result<Scenario> {
    Scenario::load(path).with_context(|| format!("reading scenario {}", path.display()))
}

fn load_rules(path: &Path) -> Result<WeightedRulebook> {
    WeightedRulebook::load(path).with_context(|| format!("reading rulebook {}", path.display()))
}

fn plan(args: &PlanArgs) -> Result<()> {
    let scenario = load_scenario(&args.scenario)?;
    let rulebook = load_rules(&args.rules)?;
    let mut config = PlannerConfig::for_scenario(&scenario)
        .with_seed(args.seed)
        .with_iterations(args.iterations);
    config.goal_bias = args.goal_bias;
    if let Some(g) = args.gamma {
        config.gamma = g;
    }
    if args.checkpoint_every == 0 {
        anyhow::bail!("--checkpoint-every must be positive");
    }
    let echo = ConfigEcho {
        scenario: args.scenario.display().to_string(),
        rules: args.rules.display().to_string(),
        iterations: config.max_iterations,
        gamma: config.gamma,
        goal_bias: config.goal_bias,
        ds: config.ds,
        alpha: config.alpha,
        checkpoint_every: args.checkpoint_every,
    };
    eprintln!(
        "planning {} iterations, gamma {:.3} (bound {:.3})",
        config.max_iterations,
        config.gamma,
        gamma_lower_bound(&scenario)
    );

    let start = Instant::now();
    let elapsed = || (!args.deterministic).then(|| start.elapsed().as_secs_f64());
    let mut checkpoints = Vec::new();
    let every = args.checkpoint_every;
    let last = config.max_iterations;
    let planner = mvp_core::plan(&scenario, &rulebook, config, |p| {
        let i = p.iteration();
        if i % every == 0 || i == last {
            checkpoints.push(Checkpoint::of(p, elapsed()));
        }
    })?;
    if checkpoints.is_empty() {
        checkpoints.push(Checkpoint::of(&planner, elapsed()));
    }

    let report = RunReport::new(&planner, echo, checkpoints);
    fs::write(&args.json, report.to_json()?)
        .with_context(|| format!("writing {}", args.json.display()))?;
    if let Some(svg) = &args.svg {
        fs::write(svg, render_svg(&scenario, Some(&report)))
            .with_context(|| format!("writing {}", svg.display()))?;
    }

    match &report.solution {
        Some(sol) => {
            println!(
                "unsafety {:?} duration {:.3} s over {} states (found at iteration {})",
                sol.unsafety.to_f64(),
                sol.duration,
                sol.trace.len(),
                sol.iteration_found
            );
            Ok(())
        }
        None => Err(Outcome::NoSolution.into()),
    }
}

fn check(rules_path: &Path, word_path: &Path, oracle: bool) -> Result<()> {
    let rulebook = load_rules(rules_path)?;
    let text = fs::read_to_string(word_path)
        .with_context(|| format!("reading word {}", word_path.display()))?;
    let word = TimedWord::from_json(&text).with_context(|| format!("parsing word {}", word_path.display()))?;

    let mut disagreements = 0;
    for (class, rule) in rulebook.rules() {
        let cost = rule.unsafety_of_word(&word);
        print!("class {class} {}: {}", rule.name, seconds(cost));
        if oracle {
            let expected = rule.vanish_oracle(&word).map_err(|e| match e {
                Error::OracleLimit { .. } => anyhow::anyhow!("oracle limit: {e}"),
                other => other.into(),
            })?;
            if expected == cost {
                print!(" (oracle agrees)");
            } else {
                disagreements += 1;
                print!(" (oracle: {})", seconds(expected));
            }
        }
        println!();
    }
    let vector = rulebook.unsafety_vector(&word);
    let run = rulebook.shortest_run(&word);
    println!("unsafety {:?}", vector.to_f64());
    if run != vector {
        println!("combined automaton gives {:?}", run.to_f64());
        disagreements += 1;
    }
    if disagreements > 0 {
        return Err(Outcome::OracleDisagrees.into());
    }
    Ok(())
}

fn render(solution: &Path, scenario: &Path, output: Option<&Path>) -> Result<()> {
    let scenario = load_scenario(scenario)?;
    let text = fs::read_to_string(solution).with_context(|| format!("reading {}", solution.display()))?;
    let report = RunReport::from_json(&text).with_context(|| format!("parsing {}", solution.display()))?;
    let n = report.kripke.states.len();
    if let Some(e) = report.kripke.tree_edges.iter().find(|[a, b]| *a >= n || *b >= n) {
        anyhow::bail!("tree edge {e:?} refers to a missing state");
    }
    let svg = render_svg(&scenario, Some(&report));
    match output {
        Some(path) => fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{svg}"),
    }
    Ok(())
}
