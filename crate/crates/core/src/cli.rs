//! Command-line front end. Exit codes: 0 when the property holds or synthesis
//! succeeds, 1 when it fails, 2 on usage or input errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::automaton::{require_same_alphabet, Automaton, ProductMode};
use crate::control::{is_admissible, uniformity_witness};
use crate::dot::export_dot;
use crate::error::Error;
use crate::format::{parse_automaton, serialize_automaton};
use crate::relation::{greatest_relation, holds, Preorder, RelationKind};
use crate::synthesis::{self, SynthesisConfig, SynthesisStats};
use crate::testkit::{random_alphabet, random_automaton};

#[derive(Parser, Debug)]
#[command(
    name = "ccsynth",
    version,
    about = "Supervisor synthesis under cc-simulation specifications"
)]
struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Sim,
    Ccsim,
    Bisim,
    Ucsim,
    Ucrsim,
}

impl From<KindArg> for Preorder {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Sim => Preorder::Simulation,
            KindArg::Ccsim => Preorder::CcSimulation,
            KindArg::Bisim => Preorder::Bisimulation,
            KindArg::Ucsim => Preorder::UcSimulation,
            KindArg::Ucrsim => Preorder::UcrSimulation,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether A is related to B by a preorder.
    Check {
        #[arg(long, value_enum)]
        kind: KindArg,
        a: PathBuf,
        b: PathBuf,
    },
    /// Check that supervisor S never disables an uncontrollable move of G.
    Admissible { s: PathBuf, g: PathBuf },
    /// Decide whether some supervisor solves the problem for G and R.
    Solvable { g: PathBuf, r: PathBuf },
    /// Build the maximally permissive supervisor for G and R.
    Synthesize {
        g: PathBuf,
        r: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Keep every family member as a state, not only the reachable ones.
        #[arg(long)]
        full: bool,
    },
    /// Check that S solves the problem for G and R.
    Verify { s: PathBuf, g: PathBuf, r: PathBuf },
    /// Check uniformity of the greatest ucr-simulation from G to R.
    Uniform { g: PathBuf, r: PathBuf },
    /// Emit a reproducible random plant and specification.
    Random {
        #[arg(long, default_value_t = 3)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        events: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0.5)]
        uncontrollable: f64,
        #[arg(long, default_value_t = 0.5)]
        required: f64,
        #[arg(long)]
        deterministic: bool,
        /// Write PREFIX.G.aut and PREFIX.R.aut instead of printing both.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

/// A command outcome before rendering.
struct Report {
    command: &'static str,
    result: bool,
    lines: Vec<String>,
    counterexample: Option<Value>,
    detail: Option<Value>,
    stats: SynthesisStats,
}

impl Report {
    fn new(command: &'static str, result: bool) -> Self {
        Report {
            command,
            result,
            lines: Vec::new(),
            counterexample: None,
            detail: None,
            stats: SynthesisStats::default(),
        }
    }

    fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }

    fn witness(mut self, cx: Option<impl Serialize + std::fmt::Display>) -> Self {
        if let Some(cx) = cx {
            for l in cx.to_string().lines() {
                self.lines.push(format!("  {l}"));
            }
            self.counterexample = serde_json::to_value(&cx).ok();
        }
        self
    }
}

#[derive(Debug)]
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

fn load(path: &Path) -> Result<Automaton, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    parse_automaton(&text).map_err(|e| Failure(format!("{}:{e}", path.display())))
}

fn load_pair(a: &Path, b: &Path) -> Result<(Automaton, Automaton), Failure> {
    let (a_aut, b_aut) = (load(a)?, load(b)?);
    require_same_alphabet(&a_aut, &b_aut).map_err(|_| {
        Failure(format!(
            "{} and {} declare different events or event attributes",
            a.display(),
            b.display()
        ))
    })?;
    Ok((a_aut, b_aut))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn config() -> Result<SynthesisConfig, Failure> {
    SynthesisConfig::from_env().map_err(|e| Failure(format!("{}: {e}", synthesis::CAP_ENV)))
}

fn execute(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Check { kind, a, b } => {
            let (a, b) = load_pair(&a, &b)?;
            let pre = Preorder::from(kind);
            let check = holds(&a, &b, &pre.kind(a.alphabet()))?;
            Ok(Report::new("check", check.holds)
                .line(format!(
                    "{}: {}",
                    pre.name(),
                    if check.holds { "holds" } else { "fails" }
                ))
                .witness(check.counterexample))
        }
        Command::Admissible { s, g } => {
            let (s, g) = load_pair(&s, &g)?;
            let v = is_admissible(&s, &g)?;
            Ok(Report::new("admissible", v.holds)
                .line(format!("admissible: {}", yes_no(v.holds)))
                .witness(v.counterexample))
        }
        Command::Solvable { g, r } => {
            let (g, r) = load_pair(&g, &r)?;
            let fix = synthesis::greatest_fixpoint(&g, &r, &config()?)?;
            let solvable = fix.solvable(&g, &r)?;
            let mut report =
                Report::new("solvable", solvable).line(format!("solvable: {}", yes_no(solvable)));
            report.stats = SynthesisStats {
                universe_size: fix.family.universe().len(),
                family_size: fix.family.len(),
                iterations: fix.iterations,
            };
            if !solvable {
                let check = holds(&g, &r, &RelationKind::ucr_simulation(g.alphabet()))?;
                report = match check.counterexample {
                    Some(cx) => {
                        let root = cx.root().to_string();
                        report
                            .line("the plant is not ucr-simulated by the specification")
                            .witness(Some(cx))
                            .line(format!("root cause: {root}"))
                    }
                    None => report.line(
                        "the plant is ucr-simulated by the specification, but no pair set family \
                         covering the initial states survives the fixpoint",
                    ),
                };
            }
            Ok(report)
        }
        Command::Synthesize {
            g,
            r,
            output,
            dot,
            full,
        } => {
            let (gp, rp) = (g, r);
            let (g, r) = load_pair(&gp, &rp)?;
            let mut config = config()?;
            if full {
                config.product_mode = ProductMode::Full;
            }
            let outcome = synthesis::synthesize_with(&g, &r, &config)?;
            let mut report = match (&outcome.supervisor, &outcome.report) {
                (Some(sup), Some(rep)) => {
                    let a = sup.automaton();
                    write_file(&output, &serialize_automaton(a))?;
                    if let Some(dot) = &dot {
                        write_file(dot, &export_dot(a))?;
                    }
                    Report::new("synthesize", rep.overall)
                        .line(format!(
                            "supervisor with {} states and {} transitions written to {}",
                            a.num_states(),
                            a.transitions().len(),
                            output.display()
                        ))
                        .line(format!("verified: {}", yes_no(rep.overall)))
                        .witness(rep.counterexamples().next().cloned())
                }
                _ => Report::new("synthesize", false).line("unsolvable: no supervisor written"),
            };
            report.stats = outcome.stats;
            Ok(report)
        }
        Command::Verify { s, g, r } => {
            let s = load(&s)?;
            let (g, r) = load_pair(&g, &r)?;
            require_same_alphabet(&s, &g)?;
            let rep = synthesis::verify_solution(&s, &g, &r)?;
            let mut report = Report::new("verify", rep.overall)
                .line(format!("admissible: {}", yes_no(rep.admissible)))
                .witness(rep.admissibility_counterexample.clone())
                .line(format!("cc-simulated: {}", yes_no(rep.cc_simulated)))
                .witness(rep.cc_counterexample.clone())
                .line(format!("solution: {}", yes_no(rep.overall)));
            report.counterexample = rep
                .counterexamples()
                .next()
                .and_then(|c| serde_json::to_value(c).ok());
            Ok(report)
        }
        Command::Uniform { g, r } => {
            let (g, r) = load_pair(&g, &r)?;
            let phi = greatest_relation(&g, &r, &RelationKind::ucr_simulation(g.alphabet()))?;
            let w = uniformity_witness(&phi, &g, &r)?;
            let mut report = Report::new("uniform", w.is_none())
                .line(format!("uniform: {}", yes_no(w.is_none())));
            if let Some(w) = w {
                report = report.line(format!(
                    "  ({}, {}) and ({}, {}) share a string; {} enables {} but {} -{}-> {} has no partner from {}",
                    w.x1, w.z1, w.x2, w.z2, w.z1, w.event, w.x2, w.event, w.x2_next, w.z2
                ));
                report.counterexample = serde_json::to_value(&w).ok();
            }
            Ok(report)
        }
        Command::Random {
            states,
            events,
            seed,
            density,
            uncontrollable,
            required,
            deterministic,
            output,
        } => {
            if states == 0 || events == 0 {
                return Err(Failure("--states and --events must be positive".into()));
            }
            for (name, f) in [
                ("density", density),
                ("uncontrollable", uncontrollable),
                ("required", required),
            ] {
                if !(0.0..=1.0).contains(&f) {
                    return Err(Failure(format!("--{name} must lie in [0, 1]")));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alphabet = random_alphabet(&mut rng, events, uncontrollable, required);
            let g = random_automaton(&mut rng, &alphabet, states, density, deterministic, "x");
            let r = random_automaton(&mut rng, &alphabet, states, density, deterministic, "z");
            let (gt, rt) = (serialize_automaton(&g), serialize_automaton(&r));
            let mut report = Report::new("random", true);
            match output {
                Some(prefix) => {
                    let gp = PathBuf::from(format!("{}.G.aut", prefix.display()));
                    let rp = PathBuf::from(format!("{}.R.aut", prefix.display()));
                    write_file(&gp, &gt)?;
                    write_file(&rp, &rt)?;
                    report = report.line(format!("wrote {} and {}", gp.display(), rp.display()));
                }
                None => {
                    report = report.line(
                        format!("# plant\n{gt}# specification\n{rt}")
                            .trim_end()
                            .to_string(),
                    );
                }
            }
            report.detail = Some(json!({ "plant": gt, "specification": rt }));
            Ok(report)
        }
    }
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let json = cli.json;
    let started = Instant::now();
    let outcome = execute(cli.command);
    let millis = started.elapsed().as_millis() as u64;
    match outcome {
        Ok(report) => {
            if json {
                let mut v = json!({
                    "command": report.command,
                    "result": report.result,
                    "stats": {
                        "universe_size": report.stats.universe_size,
                        "family_size": report.stats.family_size,
                        "iterations": report.stats.iterations,
                        "millis": millis,
                    },
                });
                if let Some(cx) = report.counterexample {
                    v["counterexample"] = cx;
                }
                if let Some(d) = report.detail {
                    v["detail"] = d;
                }
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&v).expect("serializable report")
                );
            } else {
                for l in &report.lines {
                    let _ = writeln!(out, "{l}");
                }
            }
            if report.result {
                0
            } else {
                1
            }
        }
        Err(Failure(msg)) => {
            if json {
                let v = json!({ "command": "error", "result": Value::Null, "error": msg });
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&v).expect("serializable report")
                );
            }
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
