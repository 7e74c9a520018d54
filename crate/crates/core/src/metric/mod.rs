//! Finite metric spaces, covering and packing numbers, exponent fits.

mod covering;
mod fit;
mod space;

pub use covering::{
    covering_bounds, exact_covering_number, exact_packing_number, greedy_separated_set,
    greedy_separated_subset, CoveringBounds, EXHAUSTIVE_LIMIT,
};
pub use fit::{dimension_estimate, metric_order_estimate, ExponentFit};
pub(crate) use fit::least_squares;
pub use space::{annulus_distance, circle_distance, FiniteMetricSpace, Geometry};
