use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use glr_core::experiments::{
    default_chart, log_space, render_svg, run, write_csv, GraphSource, Indexing, LoadOptions,
    Scenario, ScenarioConfig,
};
use glr_core::generators::{Family, GenSpec};
use glr_core::Error;

/// Bias-variance experiments for graph Laplacian regularized denoising.
#[derive(Parser)]
#[command(name = "glr-bv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-node MSE and MSE-UB against the Erdos-Renyi edge probability.
    MseVsP(Args),
    /// Grid-searched alpha* for MSE and MSE-UB across a theta sweep.
    AlphaVsTheta(Args),
    /// The alpha-vs-theta sweep on a graph read from an edge list.
    RealGraph(Args),
    /// Variance when T noisy observations are averaged.
    MultiSample(Args),
    /// Band-limited signals: constant-mode weight and active-set choice.
    BandLimited(Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Er,
    Ws,
    Complete,
}

#[derive(clap::Args)]
struct Args {
    /// Generated graph family (defaults to the scenario's).
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability; a comma-separated sweep for mse-vs-p.
    #[arg(long, value_parser = parse_list::<f64>)]
    p: Option<::std::vec::Vec<f64>>,
    /// Watts-Strogatz rewiring probability.
    #[arg(long)]
    q: Option<f64>,
    /// Watts-Strogatz average degree (even).
    #[arg(long)]
    d: Option<usize>,
    /// Complete-graph edge weight.
    #[arg(long)]
    w: Option<f64>,
    /// Edge list with `u v [w]` per line.
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "0")]
    indexing: IndexingArg,
    /// Read edge weights from the third column.
    #[arg(long)]
    weighted: bool,
    /// Reject reversed duplicate pairs with different weights.
    #[arg(long)]
    no_symmetrize: bool,
    /// Comma-separated list or `log:START:STOP:COUNT`.
    #[arg(long, value_parser = parse_theta)]
    theta: Option<::std::vec::Vec<f64>>,
    #[arg(long)]
    alpha_b: Option<f64>,
    #[arg(long)]
    alpha_t: Option<usize>,
    /// Fixed alphas for mse-vs-p, multi-sample and band-limited.
    #[arg(long, value_parser = parse_list::<f64>)]
    alphas: Option<::std::vec::Vec<f64>>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Mean of the Gaussian ground truth.
    #[arg(long)]
    mu: Option<f64>,
    /// Standard deviation of the Gaussian ground truth.
    #[arg(long)]
    signal_std: Option<f64>,
    /// Noise standard deviation.
    #[arg(long)]
    sigma: Option<f64>,
    /// Sample counts T for multi-sample.
    #[arg(long, value_parser = parse_list::<usize>)]
    samples: Option<::std::vec::Vec<usize>>,
    /// Active modes as `INDEX:WEIGHT,...`; mode 0 is the constant eigenvector.
    #[arg(long, value_parser = parse_band)]
    band: Option<::std::vec::Vec<(usize, f64)>>,
    /// Constant-mode weights tried by band-limited.
    #[arg(long, value_parser = parse_list::<f64>, allow_hyphen_values = true)]
    omega1: Option<::std::vec::Vec<f64>>,
    #[arg(long)]
    dense_cap: Option<usize>,
    /// Write the result table here instead of stdout.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum IndexingArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|v| v.trim().parse::<T>().map_err(|e| format!("{v:?}: {e}")))
        .collect()
}

fn parse_theta(s: &str) -> Result<Vec<f64>, String> {
    let Some(rest) = s.strip_prefix("log:") else {
        return parse_list(s);
    };
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err("expected log:START:STOP:COUNT".into());
    }
    let start: f64 = parts[0].parse().map_err(|e| format!("{e}"))?;
    let stop: f64 = parts[1].parse().map_err(|e| format!("{e}"))?;
    let count: usize = parts[2].parse().map_err(|e| format!("{e}"))?;
    if !(start > 0.0 && stop >= start) || count == 0 {
        return Err("log range needs 0 < START <= STOP and COUNT >= 1".into());
    }
    Ok(log_space(start, stop, count))
}

fn parse_band(s: &str) -> Result<Vec<(usize, f64)>, String> {
    s.split(',')
        .map(|item| {
            let (j, w) = item
                .split_once(':')
                .ok_or_else(|| format!("{item:?}: expected INDEX:WEIGHT"))?;
            let j: usize = j.trim().parse().map_err(|e| format!("{j:?}: {e}"))?;
            let w: f64 = w.trim().parse().map_err(|e| format!("{w:?}: {e}"))?;
            Ok((j, w))
        })
        .collect()
}

fn single(values: Option<&Vec<f64>>, flag: &str) -> Result<Option<f64>, Error> {
    match values.map(Vec::as_slice) {
        None => Ok(None),
        Some([v]) => Ok(Some(*v)),
        Some(_) => Err(Error::InvalidParameter(format!("--{flag} takes a single value here"))),
    }
}

fn build_config(scenario: Scenario, a: Args) -> Result<ScenarioConfig, Error> {
    let mut c = ScenarioConfig::new(scenario);
    let GraphSource::Generated(default) = c.source.clone() else {
        unreachable!("scenario defaults are generated graphs");
    };
    let family = match (a.family, default.family) {
        (Some(FamilyArg::Er), _) | (None, Family::ErdosRenyi { .. }) => Family::ErdosRenyi {
            p: match scenario {
                Scenario::MseVsP => 0.1,
                _ => single(a.p.as_ref(), "p")?.unwrap_or(0.1),
            },
        },
        (Some(FamilyArg::Ws), _) | (None, Family::WattsStrogatz { .. }) => Family::WattsStrogatz {
            d: a.d.unwrap_or(20),
            q: a.q.unwrap_or(0.4),
        },
        (Some(FamilyArg::Complete), _) | (None, Family::Complete { .. }) => Family::Complete {
            weight: a.w.unwrap_or(1.0),
        },
    };
    c.source = match a.graph {
        Some(path) => GraphSource::EdgeList {
            path,
            options: LoadOptions {
                indexing: match a.indexing {
                    IndexingArg::Zero => Indexing::Zero,
                    IndexingArg::One => Indexing::One,
                },
                weighted: a.weighted,
                symmetrize: !a.no_symmetrize,
            },
        },
        None => GraphSource::Generated(GenSpec {
            family,
            n: a.n.unwrap_or(default.n),
            seed: 0,
        }),
    };
    if scenario == Scenario::MseVsP {
        if let Some(p) = a.p {
            c.p_values = p;
        }
    }
    macro_rules! set {
        ($($field:ident <- $arg:expr),* $(,)?) => {
            $(if let Some(v) = $arg { c.$field = v; })*
        };
    }
    set!(
        thetas <- a.theta,
        grid_b <- a.alpha_b,
        grid_t <- a.alpha_t,
        alphas <- a.alphas,
        beta <- a.beta,
        realizations <- a.realizations,
        seed <- a.seed,
        mu <- a.mu,
        signal_std <- a.signal_std,
        sigma <- a.sigma,
        sample_counts <- a.samples,
        band <- a.band,
        omega1_values <- a.omega1,
        dense_cap <- a.dense_cap,
    );
    c.out_csv = a.out_csv;
    c.out_svg = a.out_svg;
    c.validate()?;
    Ok(c)
}

fn execute(scenario: Scenario, args: Args) -> Result<(), Error> {
    let config = build_config(scenario, args)?;
    let table = run(&config)?;
    match &config.out_csv {
        Some(path) => write_csv(&table, path)?,
        None => table.write_csv_to(std::io::stdout().lock())?,
    }
    if let Some(path) = &config.out_svg {
        render_svg(&table, path, &default_chart(scenario))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (scenario, args) = match cli.command {
        Command::MseVsP(a) => (Scenario::MseVsP, a),
        Command::AlphaVsTheta(a) => (Scenario::AlphaVsTheta, a),
        Command::RealGraph(a) => (Scenario::RealGraph, a),
        Command::MultiSample(a) => (Scenario::MultiSample, a),
        Command::BandLimited(a) => (Scenario::BandLimited, a),
    };
    match execute(scenario, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InvalidParameter(_) => 1,
                ref e if e.is_data_error() => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}
