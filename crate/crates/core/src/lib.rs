//! Exact computations behind the exceptional collection of maximal length on a
//! Dolgachev surface of type (2,3).
//!
//! The pipeline runs bottom-up:
//!
//! * [`exactmath`]: rationals, fraction-free elimination, prime-field ranks.
//! * [`tsing`]: T-singularity chains and their fiber coefficients.
//! * [`surface`]: the Picard lattice of the blown-up rational elliptic surface `Y`.
//! * [`defpic`]: Euler characteristics on the degenerate fiber and the induced
//!   Néron–Severi lattice of the smoothing.
//! * [`planecurves`]: dimensions of spaces of plane curves with prescribed base conditions.
//! * [`cohom`]: cohomology bounds, the Ext table and the pseudoheight check.

pub mod cohom;
pub mod defpic;
pub mod exactmath;
pub mod planecurves;
pub mod surface;
pub mod tsing;

pub use exactmath::Rat;
