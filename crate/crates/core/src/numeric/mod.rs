//! Numerical building blocks: splines, quadrature, root finding and small
//! dense linear algebra.

mod linalg;
mod quadrature;
mod roots;
mod spline;

pub use linalg::{invert, solve};
pub use quadrature::{adaptive_simpson, AdaptiveSimpson};
pub use roots::{bisect, Bisection};
pub use spline::CubicSpline;
