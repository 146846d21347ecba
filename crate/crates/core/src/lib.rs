//! Exact solutions of the two-dimensional incompressible Navier-Stokes
//! equations in stream-function form, their Lie point symmetries, derived
//! fields and residual checks.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod contour;
pub mod error;
pub mod field;
pub mod numeric;
pub mod presets;
pub mod symmetry;
pub mod verify;

pub use catalog::{
    make_general_traveling, make_harmonic, make_harmonic_oriented, make_oseen_rankine, make_real_family,
    wave_speed, Family, HarmonicKind, Orientation, RealKind, StreamSolution, WaveParams,
};
pub use contour::{default_levels, extract_contours, ContourSet, Polyline};
pub use error::{Error, Result};
pub use field::{
    fd_velocity, pressure_gradient, pressure_gradient_from_psi, pressure_path_discrepancy, recover_pressure, recover_pressure_along,
    sample_grid, velocity, vorticity, Field, Grid, PathOrder, PressureField, PressureReference, Quantity,
    VelocitySample,
};
pub use numeric::{
    exp_integral_e1, fd_partial, fd_partials, Cplx, FdEstimate, FdScheme, FnField, Partial, ScalarField,
    StencilOrder, TryFnField,
};
pub use presets::{preset, preset_info, preset_names, PresetInfo, PresetParams, PRESETS, SEED_PRESETS, SYMMETRY_PRESETS};
pub use symmetry::{
    apply_group, compose, infinitesimal_consistency, named_symmetry_presets, GroupElement, GroupKind,
    Infinitesimals, TimeFn,
};
pub use verify::{
    general_profile, laplace_residual, negative_controls, ode_check, pde_residual, run_suites,
    sample_points, wave_translation_check, x_shift_estimate, Convergence, Equation, ResidualReport,
    SampleDomain, SuiteConfig, SuiteOutcome,
};
