//! Capacity-region bounds for the two-user Gaussian interference channel with
//! a relay that hears only the first source.
//!
//! The crate evaluates a family of outer bounds (a correlation-parameterized
//! form and a closed-form relaxation), decode-and-forward and
//! compress-and-forward inner bounds, and the Han-Kobayashi baseline. Every
//! region is a planar polytope in the five-direction vocabulary of
//! [`geometry`], which also measures the per-dimension constant gap between
//! two regions. The [`fme`] module re-derives the inner-bound inequality
//! sets symbolically from their decoding constraints.

pub mod cf;
pub mod df;
pub mod error;
pub mod experiments;
pub mod fme;
pub mod gauss;
pub mod geometry;
pub mod outer;

pub use error::{Error, Result};
pub use gauss::{build_system, cap, mutual_info, ChannelSnr, GaussianSystem, SystemBuilder};
pub use geometry::{bound_gap_per_dim, gap_per_dim, hull_union, Direction, HalfPlane, RateRegion};
