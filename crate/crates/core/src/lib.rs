pub mod analysis;
pub mod basis;
pub mod cli;
pub mod eig;
pub mod matrix;
pub mod parser;
