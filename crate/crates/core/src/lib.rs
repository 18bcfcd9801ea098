//! Hypercube diagrams of knotted tori in R^4.

pub mod grid;
pub mod cube;
pub mod hypercube;
pub mod hmoves;
pub mod pltorus;
pub mod floer;
pub mod search;
