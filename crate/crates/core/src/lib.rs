pub mod kernel;
pub mod relations;
pub mod text;
pub mod lattices;
pub mod sweep;
pub mod functors;
pub mod theorems;
pub mod algfunctor;
pub mod suite;
pub mod cli;
