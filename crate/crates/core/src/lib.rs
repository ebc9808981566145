//! Exact finite-level computations for Hausdorff dimensions of closed
//! subgroups of compact `F_p[[t]]`-analytic groups.

pub mod error;
pub mod linalg;
pub mod matrix;
pub mod ring;

pub use error::{Error, Result};
pub use linalg::{fp_kernel, fp_rref, FpSubspace};
pub use matrix::SeriesMatrix;
pub use ring::{RingCtx, TruncatedSeries};
pub mod closure;
pub mod formal;
pub mod groups;
pub mod trace;
pub mod hausdorff;
pub mod lie;
pub mod parallel;
pub mod verify;
