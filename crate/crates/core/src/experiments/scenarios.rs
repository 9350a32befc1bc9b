//! The five experiment scenarios.
//!
//! Every realization `r` draws its graph and signal from
//! `derive_seed(seed, REALIZATION, r)`; the same sub-seed is reused across
//! sweep values (common random numbers), so neighbouring rows differ only in
//! the swept parameter. Realizations run in parallel and are reduced in
//! index order.

use std::path::PathBuf;

use rayon::prelude::*;

use crate::analysis::{
    alpha_star_match, empirical_mse, grid_search_on, minimize_mse_ub, regime, snr_summary_band,
    AlphaGrid, MonteCarloOptions, MseCurve, SnrSummary, DEFAULT_BETA,
};
use crate::eigen::{extremal_eigs, LanczosOptions, Spectrum};
use crate::error::{Error, Result};
use crate::generators::{Family, GenSpec};
use crate::graph::Graph;
use crate::rng::{derive_seed, stream};
use crate::signal::{band_limited_signal, gaussian_signal, signal_power, stable_sum, NoiseModel, SignalSpec};

use super::edgelist::{load_edge_list, LoadOptions};
use super::svg::ChartSpec;
use super::table::{ResultTable, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    MseVsP,
    AlphaVsTheta,
    RealGraph,
    MultiSample,
    BandLimited,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    /// Random families are redrawn per realization in the sweeping
    /// scenarios; the `GenSpec` seed is ignored there.
    Generated(GenSpec),
    EdgeList { path: PathBuf, options: LoadOptions },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub source: GraphSource,
    /// Mean of the Gaussian ground truth.
    pub mu: f64,
    /// Per-node standard deviation of the Gaussian ground truth.
    pub signal_std: f64,
    /// Noise standard deviation where no theta sweep applies.
    pub sigma: f64,
    /// Noise-to-signal ratios; noise std is `theta * signal_std`.
    pub thetas: Vec<f64>,
    pub p_values: Vec<f64>,
    pub alphas: Vec<f64>,
    pub grid_b: f64,
    pub grid_t: usize,
    pub beta: f64,
    pub realizations: usize,
    pub seed: u64,
    /// Largest graph for which the full spectrum (and analytic MSE) is computed.
    pub dense_cap: usize,
    pub sample_counts: Vec<usize>,
    /// Active non-constant modes of the band-limited signal.
    pub band: Vec<(usize, f64)>,
    /// Weights of the constant mode tried in the band-limited scenario.
    pub omega1_values: Vec<f64>,
    pub out_csv: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
}

/// `count` log-uniform points on `[start, stop]`.
pub fn log_space(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let (a, b) = (start.log10(), stop.log10());
    (0..count)
        .map(|k| {
            if k == count - 1 {
                stop
            } else {
                10f64.powf(a + (b - a) * k as f64 / (count - 1) as f64)
            }
        })
        .collect()
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario) -> Self {
        let er = |p| GraphSource::Generated(GenSpec {
            family: Family::ErdosRenyi { p },
            n: 100,
            seed: 0,
        });
        let ws = GraphSource::Generated(GenSpec {
            family: Family::WattsStrogatz { d: 20, q: 0.4 },
            n: 100,
            seed: 0,
        });
        let base = Self {
            scenario,
            source: er(0.1),
            mu: 10.0,
            signal_std: 1.0,
            sigma: 1.0,
            thetas: log_space(1e-3, 1e3, 30),
            p_values: (2..=20).map(|k| k as f64 / 20.0).collect(),
            alphas: vec![0.01, 1.0, 100.0],
            grid_b: 2000.0,
            grid_t: 10_000,
            beta: DEFAULT_BETA,
            realizations: 50,
            seed: 0,
            dense_cap: 5000,
            sample_counts: vec![1, 2, 4, 8],
            band: vec![(1, 3.0), (2, 2.0), (3, 1.0)],
            omega1_values: vec![-10.0, 0.0, 10.0],
            out_csv: None,
            out_svg: None,
        };
        match scenario {
            Scenario::MseVsP | Scenario::AlphaVsTheta => base,
            Scenario::RealGraph => Self {
                grid_b: 1e8,
                grid_t: 1000,
                ..base
            },
            Scenario::MultiSample => Self {
                alphas: vec![1.0],
                realizations: 1000,
                ..base
            },
            Scenario::BandLimited => Self { source: ws, ..base },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.realizations == 0 {
            return bad("realizations must be at least 1");
        }
        if !(self.signal_std > 0.0 && self.sigma > 0.0) || !self.mu.is_finite() {
            return bad("signal std and noise sigma must be positive");
        }
        if !(self.beta > 0.0) {
            return bad("beta must be positive");
        }
        if let GraphSource::Generated(g) = &self.source {
            g.validate()?;
        }
        match self.scenario {
            Scenario::MseVsP => {
                if !matches!(
                    self.source,
                    GraphSource::Generated(GenSpec {
                        family: Family::ErdosRenyi { .. },
                        ..
                    })
                ) {
                    return bad("mse-vs-p sweeps an Erdos-Renyi edge probability");
                }
                if self.p_values.is_empty() || self.p_values.iter().any(|p| !(*p > 0.0 && *p <= 1.0)) {
                    return bad("p sweep must be nonempty with values in (0, 1]");
                }
                self.check_alphas()
            }
            Scenario::AlphaVsTheta | Scenario::RealGraph => {
                if self.thetas.is_empty() || self.thetas.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
                    return bad("theta sweep must be nonempty and positive");
                }
                AlphaGrid::new(self.grid_b, self.grid_t).map(|_| ())
            }
            Scenario::MultiSample => {
                if self.sample_counts.is_empty() || self.sample_counts.contains(&0) {
                    return bad("sample counts must be nonempty and at least 1");
                }
                self.check_alphas()
            }
            Scenario::BandLimited => {
                if self.band.is_empty() || self.omega1_values.is_empty() {
                    return bad("band and omega1 sweep must be nonempty");
                }
                if self.band.iter().any(|(j, _)| *j == 0) {
                    return bad("band modes must be non-constant (index >= 1)");
                }
                self.check_alphas()
            }
        }
    }

    fn check_alphas(&self) -> Result<()> {
        if self.alphas.is_empty() || self.alphas.iter().any(|a| !(*a >= 0.0)) {
            return Err(Error::InvalidParameter(
                "alpha list must be nonempty and non-negative".into(),
            ));
        }
        Ok(())
    }

    fn realization_seed(&self, r: usize) -> u64 {
        derive_seed(self.seed, stream::REALIZATION, r as u64)
    }

    /// A single graph for scenarios that hold it fixed.
    fn fixed_graph(&self) -> Result<Graph> {
        match &self.source {
            GraphSource::Generated(spec) => Ok(GenSpec {
                seed: self.seed,
                ..*spec
            }
            .generate()?
            .graph),
            GraphSource::EdgeList { path, options } => {
                let loaded = load_edge_list(path, options)?;
                if loaded.self_loops_dropped > 0 || loaded.duplicates_dropped > 0 {
                    log::warn!(
                        "{}: dropped {} self-loops and {} duplicate edges",
                        path.display(),
                        loaded.self_loops_dropped,
                        loaded.duplicates_dropped
                    );
                }
                Ok(loaded.graph)
            }
        }
    }

    fn gaussian_truth(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        gaussian_signal(
            n,
            self.mu,
            &vec![self.signal_std; n],
            derive_seed(seed, stream::SIGNAL, 0),
        )
    }
}

pub fn run(config: &ScenarioConfig) -> Result<ResultTable> {
    match config.scenario {
        Scenario::MseVsP => run_mse_vs_p(config),
        Scenario::AlphaVsTheta => run_alpha_vs_theta(config),
        Scenario::RealGraph => run_real_graph(config),
        Scenario::MultiSample => run_multi_sample(config),
        Scenario::BandLimited => run_band_limited(config),
    }
}

/// Default chart for a scenario's table.
pub fn default_chart(scenario: Scenario) -> ChartSpec {
    let spec = |title: &str, x: &str, ys: &[&str], group: Option<&str>, log_x, log_y| ChartSpec {
        title: title.into(),
        x: x.into(),
        ys: ys.iter().map(|s| s.to_string()).collect(),
        group_by: group.map(str::to_string),
        log_x,
        log_y,
    };
    match scenario {
        Scenario::MseVsP => spec(
            "per-node MSE vs p",
            "p",
            &["mse_per_node", "mse_ub_per_node"],
            Some("alpha"),
            false,
            true,
        ),
        Scenario::AlphaVsTheta | Scenario::RealGraph => spec(
            "alpha* vs theta",
            "theta",
            &["alpha_mse", "alpha_ub"],
            None,
            true,
            true,
        ),
        Scenario::MultiSample => spec(
            "variance vs sample count",
            "samples",
            &["variance_analytic", "empirical_variance"],
            Some("alpha"),
            true,
            true,
        ),
        Scenario::BandLimited => spec(
            "MSE vs alpha",
            "alpha",
            &["mse"],
            Some("active_set"),
            true,
            true,
        ),
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    stable_sum(v.iter().copied()) / v.len() as f64
}

pub fn run_mse_vs_p(config: &ScenarioConfig) -> Result<ResultTable> {
    config.validate()?;
    let GraphSource::Generated(spec) = &config.source else {
        unreachable!("validated");
    };
    let n = spec.n;
    let noise = NoiseModel::isotropic(n, config.sigma)?;
    let mut table = ResultTable::new(&[
        "p",
        "alpha",
        "n",
        "realizations",
        "mse",
        "mse_ub",
        "mse_per_node",
        "mse_ub_per_node",
        "rel_gap",
    ])?;
    for &p in &config.p_values {
        let per_r: Vec<Vec<(f64, f64)>> = (0..config.realizations)
            .into_par_iter()
            .map(|r| -> Result<Vec<(f64, f64)>> {
                let rseed = config.realization_seed(r);
                let graph = GenSpec {
                    family: Family::ErdosRenyi { p },
                    n,
                    seed: rseed,
                }
                .generate()?
                .graph;
                let spectrum = Spectrum::compute(&graph.laplacian())?;
                let x = config.gaussian_truth(n, rseed)?;
                let curve = MseCurve::new(&spectrum, &x, &noise)?;
                Ok(config.alphas.iter().map(|&a| (curve.mse(a), curve.mse_ub(a))).collect())
            })
            .collect::<Result<_>>()?;
        for (k, &alpha) in config.alphas.iter().enumerate() {
            let mse = mean(per_r.iter().map(|v| v[k].0));
            let ub = mean(per_r.iter().map(|v| v[k].1));
            table.push(vec![
                p.into(),
                alpha.into(),
                n.into(),
                config.realizations.into(),
                mse.into(),
                ub.into(),
                (mse / n as f64).into(),
                (ub / n as f64).into(),
                ((ub - mse) / ub).into(),
            ])?;
        }
    }
    Ok(table)
}

pub const THETA_COLUMNS: [&str; 23] = [
    "theta",
    "sigma",
    "n",
    "realizations",
    "lambda_2",
    "lambda_n",
    "theta_realized",
    "alpha_mse",
    "alpha_ub",
    "alpha_ub_poly",
    "alpha_match",
    "mse_at_alpha_mse",
    "mse_at_alpha_ub",
    "mse_ub_at_alpha_ub",
    "mse_per_node_at_alpha_mse",
    "mse_per_node_at_alpha_ub",
    "mse_ub_per_node_at_alpha_ub",
    "regime",
    "predicted_order",
    "predicted_alpha",
    "saturated_mse",
    "saturated_ub",
    "poly_grid_mismatch",
];

/// One realization's results at one theta.
#[derive(Debug, Clone, Copy)]
struct ThetaOutcome {
    lambda_2: f64,
    lambda_n: f64,
    theta_realized: f64,
    alpha_mse: f64,
    mse_at_alpha_mse: f64,
    alpha_ub: f64,
    mse_at_alpha_ub: f64,
    ub_at_alpha_ub: f64,
    alpha_poly: f64,
    alpha_match: f64,
    saturated_mse: bool,
    saturated_ub: bool,
    mismatch: bool,
}

/// Sweep theta for one ground truth. `curve` is built with unit noise and
/// is rescaled per theta; without it only MSE-UB columns are produced.
fn sweep_thetas(
    config: &ScenarioConfig,
    grid: &AlphaGrid,
    p_signal: f64,
    n: usize,
    bounds: (f64, f64),
    curve: Option<&MseCurve>,
) -> Result<Vec<ThetaOutcome>> {
    let (l2, ln) = bounds;
    config
        .thetas
        .iter()
        .map(|&theta| {
            let var = (theta * config.signal_std).powi(2);
            let snr = SnrSummary::from_powers(p_signal, (n - 1) as f64 * var, var)?;
            let scaled = curve.map(|c| c.scale_noise(var)).transpose()?;
            let ub = grid_search_on(grid, |a| crate::analysis::mse_ub(a, l2, ln, &snr).unwrap_or(f64::NAN));
            let (alpha_mse, mse_at_alpha_mse, mse_at_alpha_ub, saturated_mse) = match &scaled {
                Some(c) => {
                    let opt = grid_search_on(grid, |a| c.mse(a));
                    (opt.alpha, opt.value, c.mse(ub.alpha), grid.is_upper(opt.alpha))
                }
                None => (f64::NAN, f64::NAN, f64::NAN, false),
            };
            let poly = minimize_mse_ub(l2, ln, &snr)?;
            let agree = grid.within_one_step(poly.alpha, ub.alpha)
                || (grid.is_upper(ub.alpha) && poly.alpha >= grid.upper());
            Ok(ThetaOutcome {
                lambda_2: l2,
                lambda_n: ln,
                theta_realized: snr.theta,
                alpha_mse,
                mse_at_alpha_mse,
                alpha_ub: ub.alpha,
                mse_at_alpha_ub,
                ub_at_alpha_ub: ub.value,
                alpha_poly: poly.alpha,
                alpha_match: alpha_star_match(snr.theta, config.beta, l2, ln)?,
                saturated_mse,
                saturated_ub: grid.is_upper(ub.alpha),
                mismatch: !agree,
            })
        })
        .collect()
}

fn theta_table(config: &ScenarioConfig, n: usize, per_r: &[Vec<ThetaOutcome>]) -> Result<ResultTable> {
    let mut table = ResultTable::new(&THETA_COLUMNS)?;
    let nf = n as f64;
    for (k, &theta) in config.thetas.iter().enumerate() {
        let avg = |f: &dyn Fn(&ThetaOutcome) -> f64| mean(per_r.iter().map(|v| f(&v[k])));
        let frac = |f: &dyn Fn(&ThetaOutcome) -> bool| {
            mean(per_r.iter().map(|v| if f(&v[k]) { 1.0 } else { 0.0 }))
        };
        let l2 = avg(&|o| o.lambda_2);
        let ln = avg(&|o| o.lambda_n);
        let report = regime(theta, config.beta, l2, ln);
        let mse_a = avg(&|o| o.mse_at_alpha_mse);
        let mse_u = avg(&|o| o.mse_at_alpha_ub);
        let ub_u = avg(&|o| o.ub_at_alpha_ub);
        let mismatches = per_r.iter().filter(|v| v[k].mismatch).count();
        table.push(vec![
            theta.into(),
            (theta * config.signal_std).into(),
            n.into(),
            per_r.len().into(),
            l2.into(),
            ln.into(),
            avg(&|o| o.theta_realized).into(),
            avg(&|o| o.alpha_mse).into(),
            avg(&|o| o.alpha_ub).into(),
            avg(&|o| o.alpha_poly).into(),
            avg(&|o| o.alpha_match).into(),
            mse_a.into(),
            mse_u.into(),
            ub_u.into(),
            (mse_a / nf).into(),
            (mse_u / nf).into(),
            (ub_u / nf).into(),
            report.regime.label().into(),
            report.predicted_order.into(),
            report.predicted_alpha.into(),
            frac(&|o| o.saturated_mse).into(),
            frac(&|o| o.saturated_ub).into(),
            mismatches.into(),
        ])?;
    }
    if let Some(bad) = table
        .column_f64("poly_grid_mismatch")
        .map(|c| c.iter().sum::<f64>())
        .filter(|s| *s > 0.0)
    {
        log::warn!("MSE-UB minimizer and grid optimum disagree by more than one step in {bad} cases");
    }
    Ok(table)
}

pub fn run_alpha_vs_theta(config: &ScenarioConfig) -> Result<ResultTable> {
    config.validate()?;
    let grid = AlphaGrid::new(config.grid_b, config.grid_t)?;
    let unit = |n| NoiseModel::isotropic(n, 1.0);
    let fixed = match &config.source {
        GraphSource::Generated(_) => None,
        GraphSource::EdgeList { .. } => Some(config.fixed_graph()?),
    };
    let per_r: Vec<(usize, Vec<ThetaOutcome>)> = (0..config.realizations)
        .into_par_iter()
        .map(|r| {
            let rseed = config.realization_seed(r);
            let graph = match (&config.source, &fixed) {
                (_, Some(g)) => g.clone(),
                (GraphSource::Generated(spec), None) => GenSpec { seed: rseed, ..*spec }.generate()?.graph,
                (GraphSource::EdgeList { .. }, None) => unreachable!(),
            };
            let n = graph.node_count();
            let spectrum = Spectrum::compute(&graph.laplacian())?;
            let x = config.gaussian_truth(n, rseed)?;
            let curve = MseCurve::new(&spectrum, &x, &unit(n)?)?;
            let bounds = (spectrum.lambda_2(), spectrum.lambda_max());
            Ok((n, sweep_thetas(config, &grid, signal_power(&x), n, bounds, Some(&curve))?))
        })
        .collect::<Result<_>>()?;
    let n = per_r[0].0;
    let outcomes: Vec<Vec<ThetaOutcome>> = per_r.into_iter().map(|(_, v)| v).collect();
    theta_table(config, n, &outcomes)
}

pub fn run_real_graph(config: &ScenarioConfig) -> Result<ResultTable> {
    config.validate()?;
    let grid = AlphaGrid::new(config.grid_b, config.grid_t)?;
    let graph = config.fixed_graph()?;
    let n = graph.node_count();
    let laplacian = graph.laplacian();
    let eigs = extremal_eigs(
        &laplacian,
        LanczosOptions {
            seed: derive_seed(config.seed, stream::GRAPH, 0),
            ..Default::default()
        },
    )?;
    log::info!(
        "n = {n}, m = {}, lambda_2 = {}, lambda_n = {} ({} Lanczos steps)",
        graph.edge_count(),
        eigs.lambda_2,
        eigs.lambda_n,
        eigs.iterations
    );
    let spectrum = if n <= config.dense_cap {
        Some(Spectrum::compute(&laplacian)?)
    } else {
        None
    };
    let unit = NoiseModel::isotropic(n, 1.0)?;
    let outcomes: Vec<Vec<ThetaOutcome>> = (0..config.realizations)
        .into_par_iter()
        .map(|r| {
            let x = config.gaussian_truth(n, config.realization_seed(r))?;
            let curve = spectrum
                .as_ref()
                .map(|s| MseCurve::new(s, &x, &unit))
                .transpose()?;
            sweep_thetas(
                config,
                &grid,
                signal_power(&x),
                n,
                (eigs.lambda_2, eigs.lambda_n),
                curve.as_ref(),
            )
        })
        .collect::<Result<_>>()?;
    theta_table(config, n, &outcomes)
}

pub fn run_multi_sample(config: &ScenarioConfig) -> Result<ResultTable> {
    config.validate()?;
    let graph = config.fixed_graph()?;
    let n = graph.node_count();
    let spectrum = Spectrum::compute(&graph.laplacian())?;
    let x = config.gaussian_truth(n, config.seed)?;
    let noise = NoiseModel::isotropic(n, config.sigma)?;
    let curve = MseCurve::new(&spectrum, &x, &noise)?;
    let signal = SignalSpec::Deterministic(x);
    let mut table = ResultTable::new(&[
        "alpha",
        "samples",
        "n",
        "realizations",
        "bias_sq",
        "variance_analytic",
        "variance_single_over_t",
        "mse_analytic",
        "mse_per_node",
        "theta",
        "empirical_mse",
        "empirical_mse_se",
        "empirical_variance",
        "empirical_variance_se",
    ])?;
    for &alpha in &config.alphas {
        for &t in &config.sample_counts {
            let averaged = curve.averaged(t)?;
            let mc = empirical_mse(
                &spectrum,
                &signal,
                &noise,
                alpha,
                &MonteCarloOptions {
                    realizations: config.realizations,
                    seed: derive_seed(config.seed, stream::REALIZATION, t as u64),
                    samples: t,
                    redraw_signal: false,
                },
            )?;
            let mse = averaged.mse(alpha);
            table.push(vec![
                alpha.into(),
                t.into(),
                n.into(),
                config.realizations.into(),
                averaged.bias_sq(alpha).into(),
                averaged.variance(alpha).into(),
                (curve.variance(alpha) / t as f64).into(),
                mse.into(),
                (mse / n as f64).into(),
                averaged.snr().theta.into(),
                mc.mse.mean.into(),
                mc.mse.std_error.into(),
                mc.variance.mean.into(),
                mc.variance.std_error.into(),
            ])?;
        }
    }
    Ok(table)
}

pub fn run_band_limited(config: &ScenarioConfig) -> Result<ResultTable> {
    config.validate()?;
    let graph = config.fixed_graph()?;
    let n = graph.node_count();
    let spectrum = Spectrum::compute(&graph.laplacian())?;
    let noise = NoiseModel::isotropic(n, config.sigma)?;
    let grid = AlphaGrid::new(config.grid_b, config.grid_t)?;
    let mut table = ResultTable::new(&[
        "part",
        "active_set",
        "omega1",
        "alpha",
        "n",
        "bias_sq",
        "variance",
        "mse",
        "mse_ub",
        "mse_per_node",
        "theta",
        "alpha_opt_mse",
        "mse_opt_per_node",
    ])?;
    let mut emit = |part: &str, set: &str, omega1: f64, coeffs: Vec<(usize, f64)>| -> Result<()> {
        let x = band_limited_signal(&spectrum, &coeffs)?;
        let curve = MseCurve::new(&spectrum, &x, &noise)?;
        let theta = snr_summary_band(&coeffs, &noise)?.theta;
        let opt = grid_search_on(&grid, |a| curve.mse(a));
        for &alpha in &config.alphas {
            let pt = curve.point(alpha);
            table.push(vec![
                Value::from(part),
                set.into(),
                omega1.into(),
                alpha.into(),
                n.into(),
                pt.bias_sq.into(),
                pt.variance.into(),
                pt.mse.into(),
                pt.mse_ub.into(),
                (pt.mse / n as f64).into(),
                theta.into(),
                opt.alpha.into(),
                (opt.value / n as f64).into(),
            ])?;
        }
        Ok(())
    };
    for &omega1 in &config.omega1_values {
        let mut coeffs = config.band.clone();
        if omega1 != 0.0 {
            coeffs.insert(0, (0, omega1));
        }
        emit("omega1", "band", omega1, coeffs)?;
    }
    let k = config.band.len();
    if k < n {
        let weights = config.band.iter().map(|(_, w)| *w);
        emit("active_set", "low", 0.0, (1..=k).zip(weights.clone()).collect())?;
        emit("active_set", "high", 0.0, (n - k..n).zip(weights).collect())?;
    }
    Ok(table)
}
