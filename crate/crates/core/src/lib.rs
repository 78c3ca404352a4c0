//! Exact equatorial water waves in the f-plane approximation.
//!
//! The crate builds Gerstner's rotational deep-water waves and the laminar
//! flat-bed flows, reconstructs their Eulerian fields, and checks them
//! numerically against the steady Euler system, the stream-function and
//! height-function formulations, the vorticity ODE and the particle
//! kinematics.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod flow;
pub mod gammaflow;
pub mod gerstner;
pub mod hodograph;
pub mod laminar;
pub mod numerics;
pub mod params;
pub mod pathtrace;
pub mod verify;

pub use error::{Result, WaveError};
pub use flow::{FlowSample, FlowState, SteadyFlow, SurfacePoint};
pub use gerstner::{GerstnerFlow, LagrangianLabel};
pub use params::{dispersion_speed, derive_constants, GerstnerParams, PhysicalConstants};
