//! Polynomial continued fractions.

pub mod cli;
pub mod constants;
pub mod family_search;
pub mod gcd;
pub mod irrationality;
pub mod lsq;
pub mod numth;
pub mod pcf;
pub mod poly;
pub mod reduction;
pub mod transforms;
