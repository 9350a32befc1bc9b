//! Experiment harness: edge-list ingestion, scenarios and result emission.

pub mod edgelist;
pub mod scenarios;
pub mod svg;
pub mod table;

pub use edgelist::{load_edge_list, parse_edge_list, Indexing, LoadOptions, LoadedGraph};
pub use scenarios::{
    default_chart, log_space, run, run_alpha_vs_theta, run_band_limited, run_mse_vs_p,
    run_multi_sample, run_real_graph, GraphSource, Scenario, ScenarioConfig, THETA_COLUMNS,
};
pub use svg::{render_svg, render_svg_string, ChartSpec};
pub use table::{format_float, read_csv, write_csv, ResultTable, Value};
