//! Discrete morphological symmetry toolkit.

pub mod augment;
pub mod basis;
pub mod group;
pub mod net;
pub mod rigid;
