//! PAC/VC laboratory: exact dichotomy enumeration for small geometric
//! concept classes, growth-function and VC-dimension brute force,
//! sample-complexity bound calculators, and Monte-Carlo experiments for
//! the rectangle learner and the Hoeffding deviation bound.

mod bounds;
mod concepts;
mod growth;
mod hoeffding;
mod rectangle;

pub use bounds::{sample_bound, BoundKind, BoundQuery};
pub use concepts::{AxisRectangles, Concepts, FiniteTable, HalfPlanes, Intervals};
pub use growth::{growth_count, phi, phi_binomial, phi_recurrence, sauer_check, vcdim_bruteforce, SauerReport, SauerRow};
pub use hoeffding::{hoeffding_check, HoeffdingReport};
pub use rectangle::{rectangle_experiment, RectangleInstance, RectangleReport};
