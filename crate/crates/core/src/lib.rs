//! Sizing, bend-feasibility and traversal simulation for a three-module
//! tracked robot that climbs inside pipes.

pub mod bend;
pub mod cli;
pub mod design;
pub mod geom;
pub mod netspec;
pub mod pipe;
pub mod sim;
