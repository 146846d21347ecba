//! Complex arithmetic, the exponential integral and finite differences.

pub mod complex;
pub mod expint;
pub mod fd;

pub use complex::{c_cos, c_exp, c_ln, c_pow, c_sin, c_tanh, Cplx, J, SINGULAR_RADIUS};
pub use expint::{exp_integral_e1, EULER_GAMMA};
pub use fd::{
    fd_partial, fd_partials, observed_order, richardson, FdEstimate, FdScheme, FnField, Partial, ScalarField,
    StencilOrder, TryFnField,
};
