//! Maximal elements of preference relations on ℝⁿ.
//!
//! The crate works over finite ground sets (explicit lists or lattices) that
//! stand in for a feasible set `X`:
//!
//! * [`relation`], [`properties`]: relations, contour sets, brute-force
//!   property checks, maximal elements and maxima.
//! * [`cone`]: normal cones of strict upper contours, their strict
//!   refinement, and the truncated hull `T(x) = conv(N(x) ∩ S)`.
//! * [`vip`]: Stampacchia and Minty variational inequality checks.
//! * [`plastria`]: gap functions and the Plastria-like normal cone `N_f`.
//! * [`descent`]: the subgradient-type iteration `x_{k+1} = x_k - θ_k x_k*`
//!   and its quasi-Fejér diagnostics.

pub mod cone;
pub mod descent;
pub mod error;
pub mod ground;
mod hull;
mod nnls;
pub mod plastria;
pub mod point;
pub mod properties;
pub mod relation;
pub mod rules;
pub mod vip;

pub use error::{Error, Result};
pub use ground::{Axis, GroundSet, GroundSource};
pub use point::Point;
pub use properties::{check_property, contour, maxima, maximal_elements, Contour, Property, PropertyReport};
pub use relation::{Relation, RelationKind, Utility};
