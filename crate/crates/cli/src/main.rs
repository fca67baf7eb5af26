use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use robust_sched::exact::{optimal_bnb, Limits};
use robust_sched::gen::{generate, Family, GeneratorConfig};
use robust_sched::hardness::{decode, encode, parse_dimacs, sat_decide};
use robust_sched::io::{instance_to_json, read_instance, read_schedule, schedule_to_json, write_instance};
use robust_sched::objective::machine_loads;
use robust_sched::suite::{
    gnuplot_columns, records_to_csv, records_to_json, run_suite, solve, ExperimentRecord, SolverSpec, Subroutine,
    SuiteConfig,
};
use robust_sched::value::{format_rational, parse_rational, rational_to_f64};
use robust_sched::{worst_case_makespan, Error, Rational, Value};

#[derive(Parser)]
#[command(name = "robust-sched", version, about = "Scheduling under budgeted processing-time uncertainty")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Worst-case makespan of a schedule.
    Evaluate {
        instance: PathBuf,
        schedule: PathBuf,
    },
    /// Solve an instance and print the schedule.
    Solve(SolveArgs),
    /// Write generated instances to a directory.
    Gen(GenArgs),
    /// Build the gap instance of a DIMACS 3-CNF formula, or check its gap.
    SatGap {
        cnf: PathBuf,
        /// Where to write the instance (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Solve the formula and the instance and compare.
        #[arg(long)]
        check: bool,
    },
    /// Run an experiment suite described by a JSON config.
    Bench {
        config: PathBuf,
        /// CSV output (stdout if neither output is given).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Turn JSON records written by `bench --json` into gnuplot columns.
    Gnuplot { records: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Exact,
    Bnb,
    Greedy,
    Approx3,
    Ptas,
    Eptas,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubroutineArg {
    Auto,
    Exact,
    List,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "bnb")]
    algo: Algo,
    #[arg(long, default_value = "1/5", value_parser = rational_arg)]
    epsilon: Rational,
    #[arg(long, default_value = "1/100", value_parser = rational_arg)]
    delta: Rational,
    /// Classical subroutine for approx3.
    #[arg(long, value_enum, default_value = "auto")]
    subroutine: SubroutineArg,
    /// Write the schedule here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = family_arg)]
    family: Option<Family>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Job range `min-max` (variables for sat-gap).
    #[arg(long, default_value = "5-10", value_parser = range_arg)]
    jobs: [usize; 2],
    /// Machine range `min-max` (clauses for sat-gap).
    #[arg(long, default_value = "2-4", value_parser = range_arg)]
    machines: [usize; 2],
    #[arg(long, default_value = "0-3", value_parser = range_arg)]
    gamma: [usize; 2],
    /// Nominal time range; deviations are drawn from `0-max`.
    #[arg(long, default_value = "1-10", value_parser = range_arg)]
    values: [usize; 2],
    /// Generator config JSON; replaces the flags above.
    #[arg(long, conflicts_with = "family")]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(short, long)]
    out: PathBuf,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn family_arg(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn range_arg(s: &str) -> Result<[usize; 2], String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once('-') {
        Some((a, b)) => Ok([parse(a)?, parse(b)?]),
        None => {
            let v = parse(s)?;
            Ok([v, v])
        }
    }
}

fn show(v: &Value) -> String {
    match v {
        Value::Finite(r) => format!("{} (~{:.6})", format_rational(r), rational_to_f64(r)),
        Value::Forbidden => "inf".into(),
    }
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn spec_of(args: &SolveArgs) -> SolverSpec {
    let (epsilon, delta) = (args.epsilon.clone(), args.delta.clone());
    match args.algo {
        Algo::Exact => SolverSpec::Exact,
        Algo::Bnb => SolverSpec::Bnb,
        Algo::Greedy => SolverSpec::Greedy,
        Algo::Approx3 => SolverSpec::Approx3 {
            subroutine: match args.subroutine {
                SubroutineArg::Auto => Subroutine::Auto,
                SubroutineArg::Exact => Subroutine::Exact,
                SubroutineArg::List => Subroutine::List,
            },
            delta,
        },
        Algo::Ptas => SolverSpec::Ptas { epsilon, delta },
        Algo::Eptas => SolverSpec::Eptas { epsilon, delta },
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let limits = Limits::default();
    match cli.command {
        Command::Evaluate { instance, schedule } => {
            let inst = read_instance(instance)?;
            let sched = read_schedule(schedule)?;
            let value = worst_case_makespan(&inst, &sched)?;
            println!("worst-case makespan: {}", show(&value));
            for (i, load) in machine_loads(&inst, &sched)?.iter().enumerate() {
                println!("machine {i}: {}", show(load));
            }
        }
        Command::Solve(args) => {
            let inst = read_instance(&args.instance)?;
            let spec = spec_of(&args);
            let sol = solve(&spec, &inst, &limits)?;
            eprintln!("{}: worst-case makespan {}", spec.name(), show(&sol.value));
            if let Some(search) = &sol.search {
                eprintln!(
                    "search: {} steps, final threshold {}, lower bound {}",
                    search.log.len(),
                    format_rational(&search.threshold),
                    format_rational(&search.lower_bound)
                );
            }
            emit(&(schedule_to_json(&sol.schedule) + "\n"), args.output.as_deref())?;
        }
        Command::Gen(args) => {
            let config = match &args.config {
                Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
                None => {
                    let family = args
                        .family
                        .ok_or_else(|| Error::InvalidInput("either --family or --config is required".into()))?;
                    let mut c = GeneratorConfig::new(args.seed, family, args.jobs, args.machines);
                    c.gamma = args.gamma;
                    c.values = [args.values[0] as u64, args.values[1] as u64];
                    c
                }
            };
            fs::create_dir_all(&args.out)?;
            for (k, inst) in generate(&config, args.count)?.iter().enumerate() {
                let path = args.out.join(format!("{}-s{}-{k:04}.json", config.family.name(), config.seed));
                write_instance(&path, inst)?;
                println!("{}", path.display());
            }
        }
        Command::SatGap { cnf, output, check } => {
            let formula = parse_dimacs(&fs::read_to_string(cnf)?)?;
            let reduction = encode(&formula)?;
            if !check {
                return emit(&(instance_to_json(&reduction.instance) + "\n"), output.as_deref());
            }
            if let Some(path) = &output {
                write_instance(path, &reduction.instance)?;
            }
            let satisfiable = sat_decide(&formula, &limits)?.is_some();
            let (schedule, value) = optimal_bnb(&reduction.instance);
            println!("satisfiable: {satisfiable}");
            println!("optimum: {}", show(&value));
            let gap = if satisfiable {
                let assignment = decode(&reduction, &schedule)?;
                let bits: String = assignment.iter().map(|&b| if b { '1' } else { '0' }).collect();
                println!("decoded assignment: {bits}");
                value == Value::int(1)
            } else {
                value >= Value::int(2)
            };
            if !gap {
                return Err(Error::ContractViolation(format!(
                    "gap fails: satisfiable = {satisfiable}, optimum {}",
                    show(&value)
                )));
            }
            println!("gap holds");
        }
        Command::Bench { config, csv, json } => {
            let config: SuiteConfig = serde_json::from_str(&fs::read_to_string(config)?)?;
            let records = run_suite(&config, &limits)?;
            if let Some(path) = &json {
                fs::write(path, records_to_json(&records)?)?;
            }
            if csv.is_some() || json.is_none() {
                emit(&records_to_csv(&records), csv.as_deref())?;
            }
            let failed = records.iter().filter(|r| r.status != "ok").count();
            eprintln!("{} records, {failed} with errors", records.len());
        }
        Command::Gnuplot { records } => {
            let records: Vec<ExperimentRecord> = serde_json::from_str(&fs::read_to_string(records)?)?;
            print!("{}", gnuplot_columns(&records));
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeLimit(_) => 3,
        Error::ContractViolation(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
