pub mod exactpoly;
pub mod scalarfield;
pub mod diffops;
pub mod constructions;
pub mod verify;
pub mod cli;
