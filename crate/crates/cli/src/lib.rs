//! Command-line front end. `run` parses arguments, executes one subcommand
//! and returns the process exit code: 0 on success (a time-limited search
//! included), 2 when the instance has no solution, 1 on usage, input or
//! output errors.

pub mod args;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use alwabp_core::bnb::{branch_and_bound, brute_force_solution, BnbConfig, BnbStatus};
use alwabp_core::bounds::{all_bounds, BoundsConfig};
use alwabp_core::export::{build_model, write_lp, Variant};
use alwabp_core::heuristic::{ipbs, IpbsParams};
use alwabp_core::instance::generator::generate_instance;
use alwabp_core::{parse_instance, write_instance, Instance};
use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;

use args::{Cli, Command, ModelArg};
use config::{BoundCaps, GenerateConfig, HeuristicConfig, RunConfig};
use report::{Report, ResultBlock, SolutionBlock};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let text = e.to_string();
            let _ = writeln!(err, "{}", text.lines().next().unwrap_or("invalid arguments"));
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&cli) {
        Ok(outcome) => match out.write_all(outcome.text.as_bytes()) {
            Ok(()) => outcome.code,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write output: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            let message = format!("{e:#}").replace('\n', " ");
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn load(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_instance(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn base_config(cli: &Cli, path: &Path) -> RunConfig {
    RunConfig {
        command: cli.command.name(),
        path: path.display().to_string(),
        seed: cli.seed,
        time_limit_s: cli.time_limit,
        json: cli.json,
        verbose: cli.verbose,
        timings: !cli.no_timings,
        heuristic: None,
        bounds: None,
        reductions: None,
        model: None,
        output: None,
        generate: None,
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Solve {
            file,
            heuristic,
            caps,
            no_heuristic,
            no_reductions,
        } => {
            let inst = load(file)?;
            let caps = BoundCaps::resolve(caps);
            let root_bounds = caps.apply(BoundsConfig::root());
            let budget = (inst.n_tasks() * inst.n_workers()) as f64 / 10.0;
            let base = IpbsParams {
                t_min: Duration::ZERO,
                t_max: Duration::from_secs_f64(budget),
                ..IpbsParams::default()
            };
            let mut heur = HeuristicConfig::resolve(&base, heuristic, cli.time_limit);
            heur.enabled = !no_heuristic;
            heur.validate().map_err(|e| anyhow!(e))?;
            let bnb = BnbConfig {
                time_limit: cli.time_limit.map(Duration::from_secs_f64),
                seed: cli.seed,
                heuristic: heur.enabled,
                reductions: !no_reductions,
                node_iterations: root_bounds.iterations(),
                heuristic_params: Some(heur.params(cli.seed, root_bounds.clone())),
                root_bounds,
                warm_start: None,
            };
            let mut config = base_config(cli, file);
            config.heuristic = Some(heur);
            config.bounds = Some(caps);
            config.reductions = Some(!no_reductions);

            let res = branch_and_bound(&inst, &bnb);
            let mut report = Report::new(config, &inst);
            report.set_bounds(&res.root_bounds);
            report.result = Some(ResultBlock {
                value: res.value,
                status: res.status.as_str().to_string(),
                nodes: Some(res.nodes),
                heuristic_value: res.heuristic_value,
                elapsed_s: report.timing(res.elapsed.as_secs_f64()),
            });
            report.solution = res.solution.as_ref().map(|s| SolutionBlock::new(&inst, s));
            if cli.verbose {
                report.log.push(format!("root_bound {}", res.root_bounds.best));
            }
            let code = if res.status == BnbStatus::Infeasible {
                EXIT_INFEASIBLE
            } else {
                EXIT_OK
            };
            Ok(Outcome {
                text: report.render(),
                code,
            })
        }
        Command::Heur { file, heuristic, caps } => {
            let inst = load(file)?;
            let caps = BoundCaps::resolve(caps);
            let heur = HeuristicConfig::resolve(&IpbsParams::default(), heuristic, cli.time_limit);
            heur.validate().map_err(|e| anyhow!(e))?;
            let params = heur.params(cli.seed, caps.apply(BoundsConfig::root()));
            let mut config = base_config(cli, file);
            config.heuristic = Some(heur);
            config.bounds = Some(caps);
            let mut report = Report::new(config, &inst);
            let start = std::time::Instant::now();
            let outcome = ipbs(&inst, &params);
            let elapsed_s = report.timing(start.elapsed().as_secs_f64());
            let Ok(out) = outcome else {
                report.result = Some(ResultBlock {
                    value: None,
                    status: "no_solution".into(),
                    nodes: None,
                    heuristic_value: None,
                    elapsed_s,
                });
                return Ok(Outcome {
                    text: report.render(),
                    code: EXIT_INFEASIBLE,
                });
            };
            let value = out.solution.cycle_time;
            let status = if value <= out.lower_bound {
                "optimal"
            } else {
                "feasible"
            };
            report.result = Some(ResultBlock {
                value: Some(value),
                status: status.into(),
                nodes: None,
                heuristic_value: None,
                elapsed_s,
            });
            report.solution = Some(SolutionBlock::new(&inst, &out.solution));
            if cli.verbose {
                report.log.push(format!("lower_bound {}", out.lower_bound));
                report.log.push(format!("initial {}", out.initial));
                report.log.push(format!("sweeps {}", out.sweeps));
                for record in &out.log {
                    let outcome = if record.feasible { "feasible" } else { "failed" };
                    report.log.push(match report.config.timings {
                        true => record.to_string(),
                        false => format!("C {} {outcome}", record.cycle_time),
                    });
                }
            }
            Ok(Outcome::ok(report.render()))
        }
        Command::Bounds { file, caps } => {
            let inst = load(file)?;
            let caps = BoundCaps::resolve(caps);
            let mut config = base_config(cli, file);
            config.bounds = Some(caps);
            let start = std::time::Instant::now();
            let bounds = all_bounds(&inst, &caps.apply(BoundsConfig::all()));
            let mut report = Report::new(config, &inst);
            report.set_bounds(&bounds);
            report.result = Some(ResultBlock {
                value: Some(bounds.best),
                status: "lower_bound".into(),
                nodes: None,
                heuristic_value: None,
                elapsed_s: report.timing(start.elapsed().as_secs_f64()),
            });
            Ok(Outcome::ok(report.render()))
        }
        Command::Export { file, model, output } => {
            let inst = load(file)?;
            let variant = match model {
                ModelArg::M2 => Variant::M2,
                ModelArg::M3 => Variant::M3,
            };
            let model_spec = build_model(&inst, variant);
            let text = write_lp(&model_spec);
            let Some(path) = output else {
                return Ok(Outcome::ok(text));
            };
            std::fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
            let mut config = base_config(cli, file);
            config.model = Some(variant.name());
            config.output = Some(path.display().to_string());
            let mut report = Report::new(config, &inst);
            report.log.push(format!("rows {}", model_spec.rows.len()));
            report.log.push(format!("binaries {}", model_spec.binaries.len()));
            Ok(Outcome::ok(report.render()))
        }
        Command::Gen {
            base,
            variability,
            infeasibility,
            workers,
            output,
        } => {
            let line = load(base)?;
            if *workers == 0 {
                bail!("--workers must be positive");
            }
            let times = (0..line.n_tasks())
                .map(|t| {
                    line.time(t, 0)
                        .ok_or_else(|| anyhow!("base task {} has no time for worker 1", t + 1))
                })
                .collect::<Result<Vec<_>>>()?;
            let inst = generate_instance(&times, line.edges(), *workers, *variability, *infeasibility, cli.seed)?;
            let text = write_instance(&inst);
            let Some(path) = output else {
                return Ok(Outcome::ok(text));
            };
            std::fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
            let mut config = base_config(cli, base);
            config.output = Some(path.display().to_string());
            config.generate = Some(GenerateConfig {
                variability: *variability,
                infeasibility: *infeasibility,
                workers: *workers,
            });
            Ok(Outcome::ok(Report::new(config, &inst).render()))
        }
        Command::Oracle { file } => {
            let inst = load(file)?;
            let mut report = Report::new(base_config(cli, file), &inst);
            let start = std::time::Instant::now();
            let best = brute_force_solution(&inst)?;
            let elapsed_s = report.timing(start.elapsed().as_secs_f64());
            let (status, code) = match &best {
                Some(_) => ("optimal", EXIT_OK),
                None => ("infeasible", EXIT_INFEASIBLE),
            };
            report.result = Some(ResultBlock {
                value: best.as_ref().map(|s| s.cycle_time),
                status: status.into(),
                nodes: None,
                heuristic_value: None,
                elapsed_s,
            });
            report.solution = best.as_ref().map(|s| SolutionBlock::new(&inst, s));
            Ok(Outcome {
                text: report.render(),
                code,
            })
        }
    }
}
