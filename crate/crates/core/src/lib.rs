//! Poncelet 3-periodics in concentric ellipse pairs, the areas of the
//! circumellipses centered on their anticevian vertices ("propeller
//! blades"), and sweeps that measure which combinations of those areas stay
//! constant over a family.
//!
//! Module map:
//! - [`conic`]: conics, ellipses, tangents, affine images.
//! - [`triangle`]: side lengths, trilinears, excircles, anticevians.
//! - [`family`]: concentric pairs admitting 3-periodics and orbit construction.
//! - [`circumellipse`]: closed-form blade areas and a conic-fit oracle.
//! - [`lab`]: family sweeps and invariant series.

pub mod circumellipse;
pub mod conic;
pub mod error;
pub mod exec;
pub mod family;
pub mod lab;
pub mod triangle;

pub use circumellipse::{BladeAreas, Eq2Verdict, SigmaSum};
pub use conic::{AffineMap, Conic, Ellipse, Line, Point};
pub use error::{GeometryError, Result};
pub use exec::Execution;
pub use family::{ConcentricPair, OrbitSample, PairKind, SweepSample};
pub use lab::{InvariantSeries, SweepReport};
pub use triangle::{Metrics, SideLengths, Triangle, Trilinear};
