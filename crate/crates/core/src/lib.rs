//! Graph Laplacian regularized (GLR) denoising and its bias-variance analysis.
//!
//! The estimator `x_hat = (I + alpha L)^{-1} y` smooths a noisy graph signal
//! `y`. This crate provides the estimator itself (by a spectral and a direct
//! route), closed-form bias/variance/MSE curves, the MSE upper envelope and
//! its minimizer, the order-matching regularization parameter and its
//! E-SNR regimes, Monte-Carlo validation, and an experiment harness.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod eigen;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod glr;
pub mod graph;
pub mod rng;
pub mod signal;

pub use eigen::{extremal_eigs, ExtremalEigs, LanczosOptions, Spectrum};
pub use error::{Error, Result};
pub use graph::{Edge, Graph, LaplacianMatrix};
