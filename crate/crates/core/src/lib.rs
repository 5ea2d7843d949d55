//! Exact tools for partition regularity of polynomial equations over `Z` and `F_q[t]`.

pub mod expr;
pub mod ring;
pub mod poly;
pub mod linalg;
pub mod linear_rado;
pub mod window;
pub mod coloring_families;
pub mod reductions;
