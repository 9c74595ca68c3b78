//! Exact WKB analysis for one-dimensional Schrödinger operators with
//! polynomial potentials.
//!
//! The crate covers Stokes graphs, the semiclassical coefficient recursion,
//! Borel–Padé summation and a direct ODE oracle used to check the
//! resummed objects against actual solutions.
//!
//! ```
//! use exwkb::{borel, oracle, potential::*, series::chi_series, stokes::build_graph, Complex64 as C};
//!
//! let q = characteristic(&parse_polynomial("x/2")?, C::new(0.0, 0.0))?;
//! let g = build_graph(&q, 0.0)?;
//! assert_eq!(g.sectors.len(), 3);
//! let x = C::new(1.0, 0.0);
//! let s = chi_series(&g, 1, x, 20)?;
//! let bs = borel::resum(&s, C::new(10.0, 0.0), 10, 10, None)?;
//! let ode = oracle::fundamental_chi(&g, 1, x, C::new(10.0, 0.0))?;
//! assert!((bs.value - ode.sample.chi).norm() < 1e-6);
//! # Ok::<(), exwkb::Error>(())
//! ```

pub mod borel;
pub mod cjson;
pub mod error;
pub mod fps;
pub mod oracle;
pub mod potential;
pub mod par;
pub mod path;
pub mod quad;
pub mod series;
pub mod stokes;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
