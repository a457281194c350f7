//! Exact truncated q-series arithmetic with an independent combinatorial
//! oracle, built for mechanically verifying coefficient congruences and
//! product identities for partitions into distinct parts with no part
//! divisible by 5.
#![forbid(unsafe_code)]

pub mod arith;
pub mod congruence;
pub mod error;
pub mod eta;
pub mod expr;
pub mod oracle;
pub mod qfactory;
pub mod registry;
pub mod series;

pub use error::{Error, Result};
pub use expr::Expr;
pub use registry::{Entry, Registry, Source, Status, VerificationReport};
pub use series::{
    agrees, compare, max_truncation, set_max_truncation, CoeffMode, Comparison, Mismatch,
    TruncatedSeries,
};
