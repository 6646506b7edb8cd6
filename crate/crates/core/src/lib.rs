//! Finite-window laboratory for Bohr, nil-Bohr and gap-sum sets of integers.
//!
//! * [`window`] and [`textfmt`]: bitmap-backed windowed sets and their text format.
//! * [`sets`]: difference sets, finite-sum sets, `SH_d` gap sums, densities.
//! * [`torus`] and [`dynamics`]: exact rotations, the skew product on `T²`,
//!   and their return-time sets.
//! * [`avoider`], [`counterexample`], [`piecewise`]: the constructive procedures.
//! * [`checkers`]: exhaustive and sampled dual-class checks.
//! * [`report`]: CSV rows for the reports above.

mod bits;

pub mod avoider;
pub mod checkers;
pub mod counterexample;
pub mod dynamics;
pub mod error;
pub mod piecewise;
pub mod report;
pub mod sets;
pub mod textfmt;
pub mod torus;
pub mod window;

pub use error::{Error, Result};
pub use sets::{delta_set, sh_d, sh_d_oracle, sumset, GapSumSpec};
pub use torus::{torus_distance, TorusAngle};
pub use window::{Interval, IntervalFamily, WindowedSet};
