//! Weight modules over higher-rank Virasoro algebras `Vir[G]`, computed with
//! exact arithmetic.

pub mod algebra;
pub mod checks;
pub mod classify;
pub mod error;
pub mod foundation;
pub mod induced;
pub mod intermediate;
pub mod linalg;
pub mod pbw;
pub mod verma;

pub use error::{Error, Result};
pub use foundation::*;
