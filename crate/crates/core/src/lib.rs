//! Non-adaptive group testing with multipool designs.
//!
//! * [`gf`]: arithmetic in GF(p^a) for orders up to 64.
//! * [`design`]: the line construction of `(q², q, m)`-multipools and a
//!   validator for arbitrary pooling matrices.
//! * [`model`]: infections, noisy pool readouts, NCOMP decoding.
//! * [`analytics`]: closed-form sensitivity, specificity, error
//!   probabilities, expected counts, variance bounds and thresholds.
//! * [`montecarlo`]: seeded, parallel simulation that checks the closed
//!   forms.
//! * [`cli`]: the `multipool` command-line front end.

pub mod analytics;
pub mod cli;
pub mod design;
pub mod error;
pub mod gf;
pub mod model;
pub mod montecarlo;

pub use error::{Error, Result};
