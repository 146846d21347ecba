//! Physical fields derived from a stream function: velocity, vorticity and
//! pressure, point-wise and sampled on rectangular grids.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::StreamSolution;
use crate::error::{Error, Result};
use crate::numeric::{fd_partials, FdScheme, Partial, ScalarField, TryFnField};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VelocitySample {
    pub u: f64,
    pub v: f64,
}

impl VelocitySample {
    pub const fn new(u: f64, v: f64) -> Self {
        VelocitySample { u, v }
    }

    pub fn speed(&self) -> f64 {
        self.u.hypot(self.v)
    }
}

/// Uniform rectangular lattice of `nx × ny` nodes including the bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let g = Grid {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn square(half: f64, n: usize) -> Result<Self> {
        Grid::new(-half, half, -half, half, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2x2 nodes, got {}x{}",
                self.nx, self.ny
            )));
        }
        let b = [self.x_min, self.x_max, self.y_min, self.y_max];
        if b.iter().any(|v| !v.is_finite()) || !(self.x_max > self.x_min) || !(self.y_max > self.y_min) {
            return Err(Error::InvalidParameter(format!("grid bounds {self}")));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.dy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index, x fastest.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn node(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn nearest_node(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let fi = ((x - self.x_min) / self.dx()).round();
        let fj = ((y - self.y_min) / self.dy()).round();
        if fi < 0.0 || fj < 0.0 || fi >= self.nx as f64 || fj >= self.ny as f64 {
            return None;
        }
        Some((fi as usize, fj as usize))
    }
}

impl fmt::Display for Grid {
    /// `xmin:xmax:ymin:ymax:NXxNY`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}:{}x{}",
            self.x_min, self.x_max, self.y_min, self.y_max, self.nx, self.ny
        )
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `min:max:NxM` (same range on both axes) or `xmin:xmax:ymin:ymax:NxM`.
    fn from_str(s: &str) -> Result<Grid> {
        let bad = || Error::InvalidParameter(format!("grid spec `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        let (nums, dims) = parts.split_at(parts.len().saturating_sub(1));
        let dims = dims.first().ok_or_else(bad)?;
        let (nx, ny) = dims.split_once(['x', 'X']).ok_or_else(bad)?;
        let nx: usize = nx.trim().parse().map_err(|_| bad())?;
        let ny: usize = ny.trim().parse().map_err(|_| bad())?;
        let v: Vec<f64> = nums
            .iter()
            .map(|n| n.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match v.as_slice() {
            [lo, hi] => Grid::new(*lo, *hi, *lo, *hi, nx, ny),
            [x0, x1, y0, y1] => Grid::new(*x0, *x1, *y0, *y1, nx, ny),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Psi,
    U,
    V,
    Vorticity,
    Pressure,
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Quantity> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "psi" => Quantity::Psi,
            "u" => Quantity::U,
            "v" => Quantity::V,
            "vorticity" | "omega" => Quantity::Vorticity,
            "pressure" | "p" => Quantity::Pressure,
            _ => return Err(Error::InvalidParameter(format!("quantity `{s}`"))),
        })
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quantity::Psi => "psi",
            Quantity::U => "u",
            Quantity::V => "v",
            Quantity::Vorticity => "vorticity",
            Quantity::Pressure => "pressure",
        };
        f.write_str(s)
    }
}

/// Samples of one quantity on a grid at one time. Masked (singular or
/// unreachable) nodes are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub grid: Grid,
    pub t: f64,
    pub quantity: Quantity,
    pub values: Vec<Option<f64>>,
}

impl Field {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[self.grid.index(i, j)]
    }

    pub fn masked_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    pub fn unmasked(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().filter_map(|v| *v)
    }
}

/// `(u, v) = (∂ψ/∂y, −∂ψ/∂x)` of `Re ψ`, closed-form when available.
pub fn velocity(s: &StreamSolution, x: f64, y: f64, t: f64, scheme: &FdScheme) -> Result<VelocitySample> {
    if let Some(v) = s.analytic_velocity(x, y, t) {
        return v;
    }
    fd_velocity(s, x, y, t, scheme)
}

/// Velocity from finite differences of `Re ψ` only.
pub fn fd_velocity(s: &StreamSolution, x: f64, y: f64, t: f64, scheme: &FdScheme) -> Result<VelocitySample> {
    s.psi(x, y, t)?;
    let d = fd_partials(s, &[Partial::new(0, 1, 0), Partial::new(1, 0, 0)], (x, y, t), scheme)?;
    Ok(VelocitySample::new(d[0].value, -d[1].value))
}

/// `ω = ∂v/∂x − ∂u/∂y = −∇²ψ`.
pub fn vorticity(s: &StreamSolution, x: f64, y: f64, t: f64, scheme: &FdScheme) -> Result<f64> {
    s.psi(x, y, t)?;
    let d = fd_partials(s, &[Partial::new(2, 0, 0), Partial::new(0, 2, 0)], (x, y, t), scheme)?;
    Ok(-(d[0].value + d[1].value))
}

/// `∇p = −∂ₜu − (u·∇)u + (1/Re)∇²u` for the momentum balance without body
/// forces.
pub fn pressure_gradient(
    s: &StreamSolution,
    x: f64,
    y: f64,
    t: f64,
    re_number: f64,
    scheme: &FdScheme,
) -> Result<(f64, f64)> {
    if !(re_number > 0.0) {
        return Err(Error::InvalidParameter(format!("Reynolds number {re_number}")));
    }
    s.psi(x, y, t)?;
    let at = (x, y, t);
    let inv_re = 1.0 / re_number;
    if s.has_analytic_velocity() {
        let comp = |pick: fn(VelocitySample) -> f64| TryFnField {
            value: move |x, y, t| {
                s.analytic_velocity(x, y, t)
                    .expect("analytic velocity present")
                    .map(pick)
            },
            clearance: |x, y, t| s.clearance(x, y, t),
        };
        let ps = [
            Partial::new(0, 0, 1),
            Partial::new(1, 0, 0),
            Partial::new(0, 1, 0),
            Partial::new(2, 0, 0),
            Partial::new(0, 2, 0),
        ];
        let vel = velocity(s, x, y, t, scheme)?;
        let du = fd_partials(&comp(|v| v.u), &ps, at, scheme)?;
        let dv = fd_partials(&comp(|v| v.v), &ps, at, scheme)?;
        let (u, v) = (vel.u, vel.v);
        let px = -(du[0].value + u * du[1].value + v * du[2].value)
            + inv_re * (du[3].value + du[4].value);
        let py = -(dv[0].value + u * dv[1].value + v * dv[2].value)
            + inv_re * (dv[3].value + dv[4].value);
        return Ok((px, py));
    }
    pressure_gradient_from_psi(s, x, y, t, re_number, scheme)
}

/// [`pressure_gradient`] computed from finite differences of `Re ψ` alone,
/// up to third order, ignoring any closed-form velocity.
pub fn pressure_gradient_from_psi<F: ScalarField + ?Sized>(
    s: &F,
    x: f64,
    y: f64,
    t: f64,
    re_number: f64,
    scheme: &FdScheme,
) -> Result<(f64, f64)> {
    if !(re_number > 0.0) {
        return Err(Error::InvalidParameter(format!("Reynolds number {re_number}")));
    }
    s.value(x, y, t)?;
    let inv_re = 1.0 / re_number;
    let ps = [
        Partial::new(0, 1, 0), // ψ_y  = u
        Partial::new(1, 0, 0), // ψ_x  = −v
        Partial::new(0, 1, 1), // ψ_yt = u_t
        Partial::new(1, 0, 1), // ψ_xt = −v_t
        Partial::new(1, 1, 0), // ψ_xy = u_x = −v_y
        Partial::new(0, 2, 0), // ψ_yy = u_y
        Partial::new(2, 0, 0), // ψ_xx = −v_x
        Partial::new(2, 1, 0),
        Partial::new(0, 3, 0),
        Partial::new(3, 0, 0),
        Partial::new(1, 2, 0),
    ];
    let d: Vec<f64> = fd_partials(s, &ps, (x, y, t), scheme)?
        .into_iter()
        .map(|e| e.value)
        .collect();
    let (u, v) = (d[0], -d[1]);
    let (u_t, v_t) = (d[2], -d[3]);
    let (u_x, u_y) = (d[4], d[5]);
    let (v_x, v_y) = (-d[6], -d[4]);
    let lap_u = d[7] + d[8];
    let lap_v = -(d[9] + d[10]);
    Ok((
        -(u_t + u * u_x + v * u_y) + inv_re * lap_u,
        -(v_t + u * v_x + v * v_y) + inv_re * lap_v,
    ))
}

/// Where the recovered pressure is pinned.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PressureReference {
    pub x: f64,
    pub y: f64,
    pub p0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathOrder {
    XThenY,
    YThenX,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PressureField {
    pub grid: Grid,
    pub t: f64,
    pub values: Vec<Option<f64>>,
    /// Reference snapped to its grid node.
    pub reference: PressureReference,
}

impl PressureField {
    pub fn into_field(self) -> Field {
        Field {
            grid: self.grid,
            t: self.t,
            quantity: Quantity::Pressure,
            values: self.values,
        }
    }
}

fn gradient_table(
    s: &StreamSolution,
    grid: &Grid,
    t: f64,
    re_number: f64,
    scheme: &FdScheme,
) -> Vec<Option<(f64, f64)>> {
    (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = grid.node(idx);
            pressure_gradient(s, grid.x(i), grid.y(j), t, re_number, scheme).ok()
        })
        .collect()
}

// Trapezoid integration along one L-shaped path family.
fn integrate_paths(
    grid: &Grid,
    grad: &[Option<(f64, f64)>],
    (ir, jr): (usize, usize),
    p0: f64,
    order: PathOrder,
) -> Vec<Option<f64>> {
    let (dx, dy) = (grid.dx(), grid.dy());
    let gx = |i: usize, j: usize| grad[grid.index(i, j)].map(|g| g.0);
    let gy = |i: usize, j: usize| grad[grid.index(i, j)].map(|g| g.1);
    let mut out = vec![None; grid.len()];
    match order {
        PathOrder::XThenY => {
            let row = sweep(grid.nx, ir, p0, dx, |i| gx(i, jr));
            for (i, start) in row.iter().enumerate() {
                if let Some(p) = *start {
                    let col = sweep(grid.ny, jr, p, dy, |j| gy(i, j));
                    for (j, v) in col.into_iter().enumerate() {
                        out[grid.index(i, j)] = v;
                    }
                }
            }
        }
        PathOrder::YThenX => {
            let col = sweep(grid.ny, jr, p0, dy, |j| gy(ir, j));
            for (j, start) in col.iter().enumerate() {
                if let Some(p) = *start {
                    let row = sweep(grid.nx, ir, p, dx, |i| gx(i, j));
                    for (i, v) in row.into_iter().enumerate() {
                        out[grid.index(i, j)] = v;
                    }
                }
            }
        }
    }
    out
}

// Cumulative trapezoid outward from `start` in both directions, stopping at
// the first masked node.
fn sweep(n: usize, start: usize, p0: f64, h: f64, g: impl Fn(usize) -> Option<f64>) -> Vec<Option<f64>> {
    let mut out = vec![None; n];
    let Some(mut prev_g) = g(start) else {
        return out;
    };
    out[start] = Some(p0);
    let mut p = p0;
    for (k, slot) in out.iter_mut().enumerate().skip(start + 1) {
        let Some(gk) = g(k) else { break };
        p += 0.5 * h * (prev_g + gk);
        *slot = Some(p);
        prev_g = gk;
    }
    let mut p = p0;
    prev_g = g(start).unwrap_or(0.0);
    for k in (0..start).rev() {
        let Some(gk) = g(k) else { break };
        p -= 0.5 * h * (prev_g + gk);
        out[k] = Some(p);
        prev_g = gk;
    }
    out
}

fn reference_node(grid: &Grid, r: &PressureReference) -> Result<(usize, usize)> {
    grid.nearest_node(r.x, r.y).ok_or_else(|| {
        Error::InvalidParameter(format!("pressure reference ({}, {}) lies outside the grid", r.x, r.y))
    })
}

/// Pressure along one family of L-shaped paths only; nodes it cannot reach
/// stay masked.
pub fn recover_pressure_along(
    s: &StreamSolution,
    grid: &Grid,
    t: f64,
    reference: PressureReference,
    re_number: f64,
    scheme: &FdScheme,
    order: PathOrder,
) -> Result<PressureField> {
    grid.validate()?;
    let (ir, jr) = reference_node(grid, &reference)?;
    let grad = gradient_table(s, grid, t, re_number, scheme);
    if grad[grid.index(ir, jr)].is_none() {
        return Err(Error::Singular {
            x: grid.x(ir),
            y: grid.y(jr),
            t,
        });
    }
    Ok(PressureField {
        grid: *grid,
        t,
        values: integrate_paths(grid, &grad, (ir, jr), reference.p0, order),
        reference: PressureReference {
            x: grid.x(ir),
            y: grid.y(jr),
            p0: reference.p0,
        },
    })
}

/// Integrates the pressure gradient from the reference node, first along x
/// and then along y, falling back to the y-then-x path where the first is
/// blocked by masked nodes.
pub fn recover_pressure(
    s: &StreamSolution,
    grid: &Grid,
    t: f64,
    reference: PressureReference,
    re_number: f64,
    scheme: &FdScheme,
) -> Result<PressureField> {
    grid.validate()?;
    let (ir, jr) = reference_node(grid, &reference)?;
    let grad = gradient_table(s, grid, t, re_number, scheme);
    if grad[grid.index(ir, jr)].is_none() {
        return Err(Error::Singular {
            x: grid.x(ir),
            y: grid.y(jr),
            t,
        });
    }
    let xy = integrate_paths(grid, &grad, (ir, jr), reference.p0, PathOrder::XThenY);
    let yx = integrate_paths(grid, &grad, (ir, jr), reference.p0, PathOrder::YThenX);
    let mut values = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let v = xy[idx].or(yx[idx]);
        if v.is_none() && grad[idx].is_some() {
            let (ix, iy) = grid.node(idx);
            return Err(Error::PathFailure { ix, iy });
        }
        values.push(v);
    }
    Ok(PressureField {
        grid: *grid,
        t,
        values,
        reference: PressureReference {
            x: grid.x(ir),
            y: grid.y(jr),
            p0: reference.p0,
        },
    })
}

/// Largest difference between the x-then-y and y-then-x pressures, absolute
/// and relative to `max |p − p₀|`.
pub fn pressure_path_discrepancy(
    s: &StreamSolution,
    grid: &Grid,
    t: f64,
    reference: PressureReference,
    re_number: f64,
    scheme: &FdScheme,
) -> Result<(f64, f64)> {
    let (ir, jr) = reference_node(grid, &reference)?;
    let grad = gradient_table(s, grid, t, re_number, scheme);
    let a = integrate_paths(grid, &grad, (ir, jr), reference.p0, PathOrder::XThenY);
    let b = integrate_paths(grid, &grad, (ir, jr), reference.p0, PathOrder::YThenX);
    let mut diff = 0.0_f64;
    let mut span = 0.0_f64;
    for (pa, pb) in a.iter().zip(&b) {
        if let (Some(pa), Some(pb)) = (pa, pb) {
            diff = diff.max((pa - pb).abs());
            span = span.max((pa - reference.p0).abs()).max((pb - reference.p0).abs());
        }
    }
    let rel = if span > 0.0 { diff / span } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
    Ok((diff, rel))
}

/// Evaluates `quantity` at every node; nodes where evaluation fails are
/// masked. Pressure is pinned to `p = 0` at the lower-left corner.
pub fn sample_grid(s: &StreamSolution, grid: &Grid, t: f64, quantity: Quantity, scheme: &FdScheme) -> Result<Field> {
    grid.validate()?;
    let values = match quantity {
        Quantity::Pressure => {
            let reference = PressureReference {
                x: grid.x_min,
                y: grid.y_min,
                p0: 0.0,
            };
            match recover_pressure(s, grid, t, reference, s.params().re_number, scheme) {
                Ok(p) => p.values,
                Err(Error::Singular { .. }) => vec![None; grid.len()],
                Err(e) => return Err(e),
            }
        }
        _ => (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let (i, j) = grid.node(idx);
                let (x, y) = (grid.x(i), grid.y(j));
                match quantity {
                    Quantity::Psi => s.psi(x, y, t).ok(),
                    Quantity::U => velocity(s, x, y, t, scheme).ok().map(|v| v.u),
                    Quantity::V => velocity(s, x, y, t, scheme).ok().map(|v| v.v),
                    Quantity::Vorticity => vorticity(s, x, y, t, scheme).ok(),
                    Quantity::Pressure => unreachable!(),
                }
                .filter(|v| v.is_finite())
            })
            .collect(),
    };
    Ok(Field {
        grid: *grid,
        t,
        quantity,
        values,
    })
}

impl ScalarField for Field {
    /// Bilinear interpolation inside the grid.
    fn value(&self, x: f64, y: f64, _t: f64) -> Result<f64> {
        let g = &self.grid;
        let fx = (x - g.x_min) / g.dx();
        let fy = (y - g.y_min) / g.dy();
        if fx < 0.0 || fy < 0.0 || fx > (g.nx - 1) as f64 || fy > (g.ny - 1) as f64 {
            return Err(Error::Domain { func: "Field::value", arg: x });
        }
        let i = (fx.floor() as usize).min(g.nx - 2);
        let j = (fy.floor() as usize).min(g.ny - 2);
        let (a, b) = (fx - i as f64, fy - j as f64);
        let corner = |i, j| self.get(i, j).ok_or(Error::Singular { x, y, t: self.t });
        Ok((1.0 - a) * (1.0 - b) * corner(i, j)?
            + a * (1.0 - b) * corner(i + 1, j)?
            + (1.0 - a) * b * corner(i, j + 1)?
            + a * b * corner(i + 1, j + 1)?)
    }
}
