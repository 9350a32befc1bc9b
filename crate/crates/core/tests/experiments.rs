use std::io::Write;

use glr_core::experiments::{
    log_space, parse_edge_list, read_csv, render_svg, run, write_csv, GraphSource, LoadOptions,
    ResultTable, Scenario, ScenarioConfig, Value,
};
use glr_core::generators::{Family, GenSpec};

fn small(scenario: Scenario) -> ScenarioConfig {
    ScenarioConfig {
        realizations: 6,
        grid_t: 400,
        thetas: log_space(1e-2, 1e2, 7),
        p_values: vec![0.2, 0.6, 1.0],
        seed: 11,
        ..ScenarioConfig::new(scenario)
    }
}

fn col(t: &ResultTable, name: &str) -> Vec<f64> {
    t.column_f64(name).unwrap_or_else(|| panic!("missing column {name}"))
}

fn assert_per_node(t: &ResultTable, pairs: &[(&str, &str)]) {
    let n = col(t, "n");
    for (per, agg) in pairs {
        for ((p, a), n) in col(t, per).iter().zip(col(t, agg)).zip(&n) {
            if a.is_nan() {
                assert!(p.is_nan());
            } else {
                assert_eq!(*p, a / n, "{per} vs {agg}");
            }
        }
    }
}

#[test]
fn identical_configs_give_identical_csv() {
    for scenario in [Scenario::MseVsP, Scenario::AlphaVsTheta, Scenario::MultiSample, Scenario::BandLimited] {
        let mut cfg = small(scenario);
        cfg.realizations = if scenario == Scenario::MultiSample { 50 } else { 4 };
        let a = run(&cfg).unwrap().to_csv_string().unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| run(&cfg).unwrap().to_csv_string().unwrap());
        assert_eq!(a, b, "{scenario:?}");
        cfg.seed += 1;
        if scenario != Scenario::BandLimited {
            assert_ne!(a, run(&cfg).unwrap().to_csv_string().unwrap(), "{scenario:?}");
        }
    }
}

#[test]
fn mse_vs_p_rows() {
    let cfg = ScenarioConfig {
        alphas: vec![0.0, 0.01, 1.0, 100.0],
        sigma: 0.8,
        ..small(Scenario::MseVsP)
    };
    let t = run(&cfg).unwrap();
    assert_eq!(t.len(), 12);
    assert_per_node(&t, &[("mse_per_node", "mse"), ("mse_ub_per_node", "mse_ub")]);
    let (p, alpha) = (col(&t, "p"), col(&t, "alpha"));
    let (mse, ub) = (col(&t, "mse_per_node"), col(&t, "mse_ub_per_node"));
    for i in 0..t.len() {
        assert!(ub[i] >= mse[i] * (1.0 - 1e-10));
        if alpha[i] == 0.0 {
            assert!((mse[i] - 0.64).abs() <= 1e-12, "alpha = 0 row: {}", mse[i]);
        }
        if p[i] == 1.0 {
            assert!((ub[i] - mse[i]).abs() <= 1e-9 * ub[i]);
        }
    }
}

#[test]
fn alpha_vs_theta_columns_and_claims() {
    let cfg = ScenarioConfig {
        realizations: 10,
        grid_t: 10_000,
        thetas: vec![1e-3, 5e-3, 1e-2, 0.1, 1.0, 10.0, 30.0, 100.0],
        ..ScenarioConfig::new(Scenario::AlphaVsTheta)
    };
    let t = run(&cfg).unwrap();
    assert_per_node(
        &t,
        &[
            ("mse_per_node_at_alpha_mse", "mse_at_alpha_mse"),
            ("mse_per_node_at_alpha_ub", "mse_at_alpha_ub"),
            ("mse_ub_per_node_at_alpha_ub", "mse_ub_at_alpha_ub"),
        ],
    );
    let theta = col(&t, "theta");
    let (at_mse, at_ub) = (col(&t, "mse_per_node_at_alpha_mse"), col(&t, "mse_per_node_at_alpha_ub"));
    let alpha_ub = col(&t, "alpha_ub");
    for i in 0..t.len() {
        assert!(at_ub[i] >= at_mse[i] * (1.0 - 1e-12));
        if theta[i] <= 1e-2 || theta[i] >= 10.0 {
            assert!(at_ub[i] <= 1.05 * at_mse[i], "theta {}: {} vs {}", theta[i], at_ub[i], at_mse[i]);
        }
        if theta[i] <= 1e-2 {
            assert!(alpha_ub[i] < 1e-2);
        }
    }
    assert_eq!(col(&t, "poly_grid_mismatch").iter().sum::<f64>(), 0.0);
    let regimes: Vec<&Value> = (0..t.len()).map(|i| t.get(i, "regime").unwrap()).collect();
    assert_eq!(regimes[0], &Value::Text("high".into()));
    assert_eq!(regimes[t.len() - 1], &Value::Text("low".into()));
}

#[test]
fn multi_sample_rows() {
    let cfg = ScenarioConfig {
        realizations: 400,
        alphas: vec![0.5, 5.0],
        sample_counts: vec![1, 2, 4, 8],
        ..ScenarioConfig::new(Scenario::MultiSample)
    };
    let t = run(&cfg).unwrap();
    assert_eq!(t.len(), 8);
    let (va, vs) = (col(&t, "variance_analytic"), col(&t, "variance_single_over_t"));
    let samples = col(&t, "samples");
    for i in 0..t.len() {
        assert!((va[i] - vs[i]).abs() <= 1e-12 * vs[i]);
        if samples[i] == 1.0 {
            assert_eq!(va[i], vs[i]);
        }
    }
    let (ev, se) = (col(&t, "empirical_variance"), col(&t, "empirical_variance_se"));
    for i in 0..t.len() {
        assert!((ev[i] - va[i]).abs() <= 4.0 * se[i], "row {i}: {} vs {}", ev[i], va[i]);
    }
}

#[test]
fn band_limited_rows() {
    let t = run(&ScenarioConfig::new(Scenario::BandLimited)).unwrap();
    let (part, set) = (t.column_index("part").unwrap(), t.column_index("active_set").unwrap());
    let mse = col(&t, "mse");
    let alpha = col(&t, "alpha");
    let band: Vec<usize> = (0..t.len()).filter(|&i| t.rows()[i][part] == Value::Text("omega1".into())).collect();
    assert_eq!(band.len(), 9);
    for &i in &band {
        for &j in &band {
            if alpha[i] == alpha[j] {
                assert!((mse[i] - mse[j]).abs() <= 1e-10 * mse[i]);
            }
        }
    }
    // At a strong filter the high-frequency signal costs more than the low one.
    let pick = |label: &str, a: f64| {
        (0..t.len())
            .find(|&i| t.rows()[i][set] == Value::Text(label.into()) && alpha[i] == a)
            .map(|i| mse[i])
            .unwrap()
    };
    assert!(pick("high", 1.0) > pick("low", 1.0));
}

#[test]
fn real_graph_from_edge_list() {
    // Ring of 60 nodes with chords, 1-indexed, plus noise the loader tolerates.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ring.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# ring with chords").unwrap();
    for i in 0..60 {
        writeln!(f, "{} {}", i + 1, (i + 1) % 60 + 1).unwrap();
        writeln!(f, "{} {}", i + 1, (i + 7) % 60 + 1).unwrap();
    }
    writeln!(f, "5 5").unwrap();
    writeln!(f, "2 1").unwrap();
    drop(f);
    let options = LoadOptions {
        indexing: glr_core::experiments::Indexing::One,
        ..Default::default()
    };
    let mut cfg = ScenarioConfig {
        source: GraphSource::EdgeList { path: path.clone(), options },
        grid_b: 1e3,
        grid_t: 300,
        thetas: vec![0.01, 1.0, 1e3],
        realizations: 5,
        ..ScenarioConfig::new(Scenario::RealGraph)
    };
    let dense = run(&cfg).unwrap();
    cfg.dense_cap = 10;
    let sparse = run(&cfg).unwrap();
    assert_eq!(col(&dense, "n"), vec![60.0; 3]);
    assert!(col(&dense, "alpha_mse").iter().all(|v| v.is_finite()));
    assert!(col(&sparse, "alpha_mse").iter().all(|v| v.is_nan()));
    assert_eq!(col(&dense, "alpha_ub"), col(&sparse, "alpha_ub"));
    assert_eq!(col(&sparse, "saturated_ub")[2], 1.0);
    assert_eq!(col(&sparse, "saturated_ub")[0], 0.0);

    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    write_csv(&sparse, &csv).unwrap();
    render_svg(&sparse, &svg, &glr_core::experiments::default_chart(Scenario::RealGraph)).unwrap();
    let back = read_csv(&csv).unwrap();
    assert_eq!(back.columns(), sparse.columns());
    for name in ["alpha_ub", "lambda_2", "mse_ub_at_alpha_ub"] {
        assert_eq!(col(&back, name), col(&sparse, name));
    }
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && !text.contains("NaN"));
}

#[test]
fn edge_list_reader_matches_generator() {
    let g = GenSpec {
        family: Family::WattsStrogatz { d: 6, q: 0.3 },
        n: 40,
        seed: 5,
    }
    .generate()
    .unwrap()
    .graph;
    let text: String = g.edges().iter().map(|e| format!("{}\t{}\n", e.i, e.j)).collect();
    let loaded = parse_edge_list(text.as_bytes(), &LoadOptions::default()).unwrap();
    assert_eq!(loaded.graph.edge_count(), g.edge_count());
    let map = &loaded.node_ids;
    let back: std::collections::HashSet<(u64, u64)> = loaded
        .graph
        .edges()
        .iter()
        .map(|e| (map[e.i].min(map[e.j]), map[e.i].max(map[e.j])))
        .collect();
    assert!(g.edges().iter().all(|e| back.contains(&(e.i as u64, e.j as u64))));
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = small(Scenario::AlphaVsTheta);
    cfg.thetas.clear();
    assert!(run(&cfg).is_err());
    let mut cfg = small(Scenario::MultiSample);
    cfg.sample_counts = vec![0];
    assert!(run(&cfg).is_err());
    let mut cfg = small(Scenario::MseVsP);
    cfg.source = ScenarioConfig::new(Scenario::BandLimited).source;
    assert!(run(&cfg).is_err());
    let mut cfg = small(Scenario::BandLimited);
    cfg.band = vec![(0, 1.0)];
    assert!(run(&cfg).is_err());
}
