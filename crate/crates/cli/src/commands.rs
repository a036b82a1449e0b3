use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use cpulse::analysis::{
    component_scan, fit_order, pm_fidelity_error, series_coefficient, table1, Column, Family, Grid, MultiIndex,
    MIN_SERIES_DIGITS,
};
use cpulse::error_models::parse_model;
use cpulse::order::{plan, DeltaOrders, Goal, OrderTriple, Regime};
use cpulse::scalar::set_digits;
use cpulse::sequences::dsl;
use cpulse::{registry, Error, Ext, Gate, Noise, PulseSequence, Real, Unitary};

use crate::{Cli, Command, ModelArgs, SeqArgs};

#[derive(Debug)]
pub enum CliError {
    /// A library error, with the flag or file it came from.
    Lib { context: String, error: Error },
    Io { context: String, error: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib { error, .. } if error.is_numeric() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib { context, error } if context.is_empty() => write!(f, "{error}"),
            CliError::Lib { context, error } => write!(f, "{context}: {error}"),
            CliError::Io { context, error } => write!(f, "{context}: {error}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError::Lib { context: String::new(), error }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

trait Context<T> {
    fn context(self, ctx: &str) -> CliResult<T>;
}

impl<T> Context<T> for cpulse::Result<T> {
    fn context(self, ctx: &str) -> CliResult<T> {
        self.map_err(|error| CliError::Lib { context: ctx.to_string(), error })
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let text = if cli.digits <= 16 {
        dispatch::<f64>(cli)?
    } else {
        set_digits(cli.digits).context("--digits")?;
        dispatch::<Ext>(cli)?
    };
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|error| CliError::Io { context: format!("--out {}", path.display()), error }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|error| CliError::Io { context: "stdout".into(), error }),
    }
}

fn dispatch<T: Real>(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Table1 { force } => cmd_table1::<T>(*force),
        Command::Scan { seq, model, grid, eps } => cmd_scan::<T>(seq, model, grid, eps.as_deref()),
        Command::Fit { seq, model, grid, column } => cmd_fit::<T>(seq, model, grid, column),
        Command::Expand { seq, family, index, component } => cmd_expand::<T>(seq, family, index, component),
        Command::Plan { regime, start, deltas, depth, goal, max_depth } => {
            cmd_plan(regime, start, deltas, *depth, *goal, *max_depth)
        }
        Command::Simulate { seq, model, eps } => cmd_simulate::<T>(seq, model, eps),
        Command::Build { name, target } => {
            let gate = Gate::<T>::parse(target).context("--target")?;
            let seq = registry::build(name, &gate).context("sequence name")?;
            Ok(dsl::serialize(&seq))
        }
    }
}

/// A builtin name, or a sequence file when `seq` names an existing file.
fn load_sequence<T: Real>(args: &SeqArgs) -> CliResult<PulseSequence<T>> {
    let path = Path::new(&args.seq);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .map_err(|error| CliError::Io { context: format!("--seq {}", path.display()), error })?;
        return dsl::parse(&text).context(&format!("--seq {}", path.display()));
    }
    let gate = Gate::parse(&args.target).context("--target")?;
    registry::build(&args.seq, &gate).context("--seq")
}

fn model_config(s: &str) -> String {
    if s.contains('=') {
        s.to_string()
    } else {
        format!("model={s}")
    }
}

fn load_noise<T: Real>(args: &ModelArgs) -> CliResult<Noise<T>> {
    let target = parse_model::<T>(&model_config(&args.model)).context("--model")?;
    Ok(match &args.pi3_model {
        Some(p) => Noise::split(target, parse_model(&model_config(p)).context("--pi3-model")?),
        None => Noise::from(target),
    })
}

fn parse_scalar<T: Real>(s: &str, flag: &str) -> CliResult<T> {
    T::parse_str(s.trim()).ok_or_else(|| CliError::Lib {
        context: flag.into(),
        error: Error::Config(format!("not a number: `{s}`")),
    })
}

fn sci<T: Real>(v: &T) -> String {
    v.to_sci(T::digits().min(17) as usize)
}

fn cmd_table1<T: Real>(force: bool) -> CliResult<String> {
    if T::digits() < MIN_SERIES_DIGITS && !force {
        return Err(Error::Precision(format!(
            "the table spans 35 decades and needs --digits {MIN_SERIES_DIGITS} or more (have {}); pass --force to run anyway",
            T::digits()
        ))
        .into());
    }
    Ok(table1::<T>()?.render())
}

fn cmd_scan<T: Real>(seq: &SeqArgs, model: &ModelArgs, grid: &str, eps: Option<&str>) -> CliResult<String> {
    let sequence = load_sequence::<T>(seq)?;
    let noise = load_noise::<T>(model)?;
    let scales: Vec<T> = match eps {
        Some(list) => list.split(',').map(|s| parse_scalar(s, "--eps")).collect::<CliResult<_>>()?,
        None => grid.parse::<Grid>().context("--grid")?.points(),
    };
    let scan = component_scan(&sequence, &noise, &scales, model.perfect_pi3).context("--eps")?;
    Ok(scan.with_sequence_id(seq.seq.clone()).to_csv())
}

fn cmd_fit<T: Real>(seq: &SeqArgs, model: &ModelArgs, grid: &str, column: &str) -> CliResult<String> {
    let sequence = load_sequence::<T>(seq)?;
    let noise = load_noise::<T>(model)?;
    let column: Column = column.parse().context("--column")?;
    let scales: Vec<T> = grid.parse::<Grid>().context("--grid")?.points();
    let scan = component_scan(&sequence, &noise, &scales, model.perfect_pi3)?;
    let f = fit_order(&scan, column)?;
    Ok(format!(
        "column={} slope={:.4} intercept={:.4} max_residual={:.2e} points={}\n",
        column.name(),
        f.slope,
        f.intercept,
        f.max_residual,
        f.points
    ))
}

fn cmd_expand<T: Real>(seq: &SeqArgs, family: &str, index: &str, component: &str) -> CliResult<String> {
    let sequence = load_sequence::<T>(seq)?;
    let family: Family = family.parse().context("--family")?;
    let index: MultiIndex = index.parse().context("--index")?;
    let component = match component {
        "x" => 0,
        "y" => 1,
        "z" => 2,
        other => {
            return Err(Error::Config(format!("component must be x, y or z, got `{other}`"))).context("--component")
        }
    };
    let c = series_coefficient(&sequence, family, &index, component)?;
    Ok(format!("{}\n", c.to_sci(20.min(T::digits() as usize))))
}

fn cmd_plan(
    regime: &str,
    start: &str,
    deltas: &str,
    depth: Option<usize>,
    goal: Option<u32>,
    max_depth: usize,
) -> CliResult<String> {
    let start: OrderTriple = start.parse().context("--start")?;
    let regime = match regime {
        "perfect" => Regime::Perfect,
        "covariant" => Regime::Covariant(deltas.parse::<DeltaOrders>().context("--deltas")?),
        "axisdep" => Regime::AxisDependent,
        other => {
            return Err(Error::Config(format!("unknown regime `{other}` (perfect, covariant, axisdep)")))
                .context("--regime")
        }
    };
    let goal = match (depth, goal) {
        (Some(d), _) => Goal::Depth(d),
        (None, Some(g)) => Goal::MinOrder(g),
        (None, None) => {
            return Err(Error::Config("give --depth or --goal".into())).context("plan");
        }
    };
    let p = plan(start, regime, goal, max_depth)?;
    let schedule: Vec<String> = p.schedule.iter().map(|a| a.to_string()).collect();
    let trace: Vec<String> = p.trace.iter().map(|t| t.to_string()).collect();
    Ok(format!(
        "schedule: {}\nfinal: {}\ntrace: {}\npulses: {} target + {} correction\n",
        schedule.join(","),
        p.final_triple(),
        trace.join(" -> "),
        p.target_pulses,
        p.correction_pulses
    ))
}

fn cmd_simulate<T: Real>(seq: &SeqArgs, model: &ModelArgs, eps: &str) -> CliResult<String> {
    let sequence = load_sequence::<T>(seq)?;
    let noise = load_noise::<T>(model)?;
    let scale: T = parse_scalar(eps, "--eps")?;
    let ideal = sequence.ideal_target()?;
    let actual = sequence.evaluate(&noise, &scale, model.perfect_pi3)?;
    let [cx, cy, cz] = Unitary::trace_components(&ideal, &actual).to_array();
    Ok(format!(
        "pulses: {} ({} target, {} correction)\nmodel: {}\ninfidelity: {}\ncomponents: {} {} {}\npm_fidelity_error: {}\n",
        sequence.len(),
        sequence.target_pulse_count(),
        sequence.correction_pulse_count(),
        noise.describe(),
        sci(&Unitary::infidelity(&ideal, &actual)),
        sci(&cx),
        sci(&cy),
        sci(&cz),
        sci(&pm_fidelity_error(&ideal, &actual)),
    ))
}
