//! Topological checks for D-brane charges on Calabi-Yau threefolds.
//!
//! The crate works with the even cohomology ring of a threefold reduced to
//! its intersection numbers, and provides:
//!
//! * exact ring arithmetic and Chern-character calculus ([`geometry`], [`chern`]),
//! * Grothendieck–Riemann–Roch pushforward from ample divisors ([`pushforward`]),
//! * the large-volume central charge, the analytic attractor solutions for
//!   positive and zero rank, the associated `c3` bounds, and a numerical
//!   minimizer of `|Z|²/∫J³` used as an independent check ([`attractor`]),
//! * two-center bound-state conditions ([`boundstates`]),
//! * named constructions and surface index bounds ([`catalog`]),
//! * JSON ingestion and report types ([`io`], [`report`]).

pub mod attractor;
pub mod boundstates;
pub mod catalog;
pub mod chern;
pub mod error;
pub mod geometry;
pub mod io;
pub mod pushforward;
pub mod rational;
pub mod report;

pub use chern::{ChernRecord, Drezet, MukaiVector};
pub use error::{Error, Result};
pub use geometry::{ConeCheck, ConeStatus, EvenClass, SurfaceData, ThreefoldData};
pub use rational::Q;
