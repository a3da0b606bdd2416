#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod ecf;
pub mod error;
pub mod fastmath;
pub mod harness;
pub mod model;
pub mod optim;
pub mod quadrature;
pub mod report;
pub mod seed;
pub mod simulate;
pub mod stable;
pub mod transform;
pub mod twostep;

pub use error::{Error, Result};
pub use report::EstimationReport;
