pub mod analysis;
pub mod bench;
pub mod cli;
pub mod expr;
pub mod problem;
pub mod problem_file;
pub mod solver;
pub mod verify;
