pub mod bell;
pub mod choi;
pub mod convertibility;
pub mod error;
pub mod normal_form;
pub mod numerics;
pub mod selfcheck;
pub mod separability;
pub mod strategy;
pub mod symmetric;

pub use error::{Error, Result};
