//! Exact set iteration, orbit sets, transitivity and sensitivity probes for
//! upper semicontinuous set-valued maps on `[0,1]`.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod orbit;
pub mod sensitivity;
pub mod setmap;
pub mod space;
