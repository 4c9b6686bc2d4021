//! Medoid-based nearest-neighbor learners for regression with labels in an
//! arbitrary metric space.
//!
//! A learner builds greedy γ-nets of the training instances for every
//! candidate scale γ, relabels each Voronoi cell with the empirical medoid of
//! its labels, and keeps the scale minimizing a compression-based upper
//! bound `Q` on the true risk. The resulting 1-nearest-neighbor predictor
//! is a [`learners::MedoidModel`].
//!
//! * [`space`] — the [`Space`] abstraction and built-in spaces
//! * [`net`] — γ-nets, Voronoi cells and the 1-NN rule
//! * [`medoid`] — empirical medoids
//! * [`bounds`] — `Q` and the compression deviation bounds
//! * [`learners`] — the four learner variants
//! * [`harness`] — synthetic distributions and convergence experiments
//!
//! With the default `parallel` feature, per-cell and per-trial work runs on
//! rayon; results do not depend on the thread count.

// `!(x > 0.0)` is the idiom for "not positive, or NaN" throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod harness;
pub mod learners;
pub mod medoid;
pub mod net;
mod par;
pub mod sample;
pub mod space;

pub use error::{Error, Result};
pub use learners::{
    countable_med_net, ctbl_unbdd, empirical_risk, fin_med_net, medoid_net, MedoidModel, SweepConfig, Variant,
};
pub use par::is_parallel;
pub use sample::LabeledSample;
pub use space::Space;
