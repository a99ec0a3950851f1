//! Independent reference values: classical L-series, brute-force box sums and
//! quadrature of the integral representation.

mod brute;
mod gamma;
mod quadrature;
mod zeta;

pub use brute::{brute_force_sum, log_tail, power_tail, BoxShape, BruteResult, BruteSpec};
pub use gamma::gamma;
pub use quadrature::{quadrature_mdzf, quadrature_mdzf_on, simplex_volume_check, QuadratureGrid, QuadratureResult};
pub use zeta::{dedekind_zeta, dirichlet_l, hurwitz_zeta, riemann_zeta, QuadraticCharacter};
