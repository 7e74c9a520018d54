//! Quantization numbers and emergence of measures on finite metric spaces.
//!
//! The crate covers covering and packing numbers, exact optimal transport
//! (Wasserstein and Lévy–Prokhorov), quantization numbers with certified lower
//! bounds, separated balanced codes, Monte-Carlo emergence of dynamical systems and
//! an exact-rational build of the annulus construction.
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --release --example covering_dimension
//! cargo run --release --example transport_distances
//! cargo run --release --example quantize_interval
//! cargo run --release --example fat_measure
//! cargo run --release --example balanced_codes
//! cargo run --release --example twist_emergence
//! cargo run --release --example doubling_packing
//! cargo run --release --example katok_entropy
//! cargo run --release --example annulus_construction
//! cargo run --release --example onion_chain
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod codes;
pub mod construction;
pub mod dynamics;
pub mod error;
pub mod measure;
pub mod metric;
pub mod quantization;
pub mod transport;

pub use error::{Error, Result};
pub use measure::DiscreteMeasure;
pub use metric::FiniteMetricSpace;
