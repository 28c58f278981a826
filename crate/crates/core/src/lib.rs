pub mod error;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
pub use ring::{Coeff, Ring};
pub use series::{Comparison, Series, ZeroPrefix, PRECISION_CAP};
pub mod cli;
pub mod congruence;
pub mod expr;
pub mod partitions;
pub mod qproducts;
pub mod registry;
pub mod report;
pub mod rr;
