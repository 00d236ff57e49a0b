//! Heuristics for the capacitated vehicle routing problem with structured
//! time windows: sweep clustering, cluster feasibility checks, exact
//! single-tour routing, local improvement, instance generation and an
//! experiment harness.

pub mod bench;
pub mod error;
pub mod feasibility;
pub mod gen;
pub mod geometry;
pub mod improve;
pub mod io;
pub mod model;
pub mod router;
pub mod sweep;

pub use error::{Error, Result};
pub use geometry::{Direction, PolarView};
pub use model::{Customer, Instance, Objective, Point, Schedule, Seconds, TimeWindow, Tour, Weight};
pub use sweep::Variant;
