//! Triangular ratio metric and hyperbolic metric on planar domains.
//!
//! The crate computes `s_D(u, v) = |u - v| / inf_{w in dD} (|u - w| + |w - v|)`
//! on the unit disk, half-planes, disks and convex polygons, the closed-form
//! hyperbolic quantities `th(rho_D / 2)` on the same domains, and checks the
//! distortion of `s_U` under the disk automorphism `f(z) = (z + a) / (1 + a z)`:
//!
//! ```text
//! (1 + a)^-1 s_U(z1, z2) <= s_U(f(z1), f(z2)) <= (1 + a) s_U(z1, z2)
//! ```
//!
//! Modules:
//!
//! - [`geometry`]: complex-plane primitives, the canonical automorphism and the
//!   preimages of supporting lines of the disk.
//! - [`hyperbolic`]: `th(rho / 2)` in the disk, half-plane, general disks and
//!   tangent half-planes.
//! - [`trimetric`]: `s_D` via the boundary infimum, via supporting half-planes,
//!   and a brute-force oracle.
//! - [`ellipse`]: the maximal inscribed focal ellipse and its contact points.
//! - [`distortion`]: per-trial distortion reports, the randomized suite and
//!   the sharpness search.

pub mod distortion;
pub mod ellipse;
mod error;
pub mod geometry;
pub mod hyperbolic;
mod minimize;
pub mod trimetric;

pub use error::{Error, Result};
pub use geometry::{ComplexPoint, GeneralizedCircle, MoebiusMap, TangencyKind};
