//! Finite-difference time-domain schemes for Maxwell's equations in second-order form
//! coupled to multi-level atomic (MLA) media.
//!
//! The model is
//!
//! ```text
//! E_tt = c^2 ΔE - alpha_p sum_m P_m,tt
//! P_m,tt + b1_m P_m,t + b0_m P_m = sum_l a_{m,l} N_l E
//! N_l,t = sum_k alpha_{l,k} N_k + sum_m beta_{l,m} E . P_m,t
//! ```
//!
//! discretized with single-step modified-equation schemes of order 2 and 4 on
//! Cartesian grids, with periodic, exact-Dirichlet and planar two-material
//! interface boundaries.

pub mod boundary;
pub mod config;
pub mod diagnostics;
pub mod driver;
pub mod error;
pub mod forcing;
pub mod grid;
pub mod interface;
pub mod material;
pub mod output;
pub mod solutions;
pub mod state;
pub mod stencils;
pub mod stepper;
pub mod studies;
pub mod timestep;

pub use error::{MlaError, Result};
