pub mod certify;
pub mod cli;
pub mod constructions;
pub mod covering;
pub mod hull;
pub mod linalg;
pub mod lp;
pub mod optimize;
pub mod polytope;
pub mod sphere;
