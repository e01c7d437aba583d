pub mod profile;
pub mod recognition;
pub mod lp;
pub mod flow;
pub mod solver;
pub mod mallows;
pub mod generators;
pub mod registry;
pub mod experiments;
