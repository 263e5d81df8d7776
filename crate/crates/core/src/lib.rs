pub mod argshift;
pub mod config;
pub mod exact;
pub mod liealg;
pub mod pipeline;
pub mod poisson;
pub mod reduction;
