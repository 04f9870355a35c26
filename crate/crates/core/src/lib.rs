//! Decentralized target encapsulation for robot swarms that sense only
//! signal intensities.
//!
//! Robots carry a ring of omnidirectional sensors and act on nothing but the
//! per-sensor sums of target, robot and boundary signals. The controller is
//! reactive and memoryless; parameters that make it collision-free,
//! deadlock-free and complete are computed in [`bounds`].

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod controller;
pub mod harness;
pub mod perception;
pub mod signal;
pub mod sim;
pub mod world;
