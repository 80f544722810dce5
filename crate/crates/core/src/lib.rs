//! Exact zeta functions of the graphs attached to Tits buildings of type
//! A_{n-1} over finite fields.

pub mod building;
pub mod digraph;
pub mod geodesic;
pub mod gf;
pub mod hecke;
pub mod linalg;
pub mod partition;
pub mod poly;
pub mod report;
pub mod subspace;
pub mod zeta;
