//! Exact laboratory for pre- and post-selected (PPS) quantum measurements
//! and their hidden-variable counterparts.
//!
//! - [`qcore`]: projectors, PVMs, density operators, Born and Lüders rules.
//! - [`abl`]: PPS scenarios and the ABL probability rule.
//! - [`hvt`]: finite hidden-variable models, the PPS rule for them, and
//!   noncontextuality predicates.
//! - [`noncontext`]: algebraic conditions, 0/1 assignment search, logical
//!   PPS paradox detection and the disturbance certificates.
//! - [`toybox`]: the ball-in-a-box model.
//! - [`cli`]: scenario/model file formats, reports and the `ppslab` command.
//!
//! Runnable walkthroughs live in `examples/`; see the README.

pub mod abl;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod hvt;
pub mod noncontext;
pub mod qcore;
pub mod random;
pub mod toybox;

pub use error::{Error, Result};
