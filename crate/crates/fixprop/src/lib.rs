//! A primal heuristic toolkit for mixed-integer programs.
//!
//! The pipeline: solve the LP relaxation cheaply with a restarted first-order
//! method, use the primal/dual iterates to order and fix integer variables
//! inside a propagating depth-first dive, then clean up the continuous part
//! with one accurate LP solve and verify the result. A small benchmark
//! harness runs instance/configuration grids and aggregates the outcomes.

pub mod folp;
pub mod guide;
pub mod harness;
pub mod model;
pub mod propagation;
pub mod search;
pub mod sparse;
