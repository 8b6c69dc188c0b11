//! Exact tools for polymatroids, M-convex supports, derivative spaces of
//! Lorentzian polynomials, and the smoothness of the resulting projected
//! toric varieties.

pub mod algebra;
pub mod linalg;
pub mod polymatroid;
pub mod polytope;
pub mod sample;
pub mod derivatives;
pub mod feasibility;
pub mod certify;
