#![no_std]

extern crate alloc;

pub mod basins;
pub mod bench;
pub mod driver;
pub mod methods;
pub mod numeric;
pub mod problem;
