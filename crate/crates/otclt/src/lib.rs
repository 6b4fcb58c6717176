//! Exact discrete optimal transport for costs `c(x, y) = h(x - y)` with
//! strictly convex `h`, and central-limit inference for empirical
//! transport costs.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`cost`] | cost family, gradients, inverse gradients, assumption checks |
//! | [`measure`] | discrete measures, CSV I/O, seeded samplers |
//! | [`rng`] | seeded, labelled random streams |
//! | [`solver`] | network simplex for the transportation problem, certificates |
//! | [`duality`] | c-transforms, canonical potentials, superdifferentials, cyclical monotonicity |
//! | [`oracle1d`] | quantile coupling, monotone maps and potentials in one dimension |
//! | [`inference`] | plug-in variances, confidence intervals, Efron–Stein bounds |
//! | [`normal`] | standard normal distribution, quantile and two-sided critical values |
//! | [`montecarlo`] | replication harness for the limit theorems and stability diagnostics |
//! | [`report`] | JSON envelope, 17-digit CSV numbers, atomic writes |
//! | [`cli`] | the `otclt` command-line front end |
//!
//! ```
//! use otclt::{cost::CostSpec, measure::DiscreteMeasure, solver::solve_discrete_ot};
//!
//! let cost = CostSpec::power(2.0, 1).unwrap();
//! let p = DiscreteMeasure::uniform_1d(&[0.0, 2.0]).unwrap();
//! let q = DiscreteMeasure::uniform_1d(&[1.0, 3.0]).unwrap();
//! let (plan, _duals) = solve_discrete_ot(&cost, &p, &q).unwrap();
//! assert!((plan.objective - 1.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod cost;
pub mod duality;
pub mod error;
pub mod inference;
pub mod measure;
pub mod montecarlo;
pub mod normal;
pub mod oracle1d;
mod quadrature;
pub mod report;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
