//! Exact generating functions and asymptotic transfers for dense graph,
//! digraph and 2-SAT families.

pub mod asymptotics;
pub mod error;
pub mod expr;
pub mod families;
pub mod field;
pub mod marked;
pub mod oracle;
pub mod series;
pub mod transfer;
pub mod util;
pub mod verify;

pub use error::{Error, Result};
