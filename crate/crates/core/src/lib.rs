pub mod cli;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod series;
pub mod torus;
pub mod torsion;
