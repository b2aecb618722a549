pub mod lattice;
pub mod qseries;
pub mod invariants;
pub mod completions;
pub mod cli;
