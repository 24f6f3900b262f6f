//! Shared numeric substrate: Wirtinger and finite-difference calculus,
//! contour and area quadrature, adaptive Runge–Kutta integration.

mod calculus;
mod ode;
mod quadrature;

pub use calculus::{fd_laplacian, laplacian_at, laplacian_richardson, mixed_z_abar, wirtinger_derivative, Wirtinger};
pub use ode::{rk_integrate, RkOptions, Trajectory};
pub use quadrature::{
    area_quadrature, contour_integral, gauss_legendre, line_integral, periodic_line_integral, Curve, Quadrature, Region,
};
