//! Central finite differences on scalar fields of `(x, y, t)` with
//! Richardson extrapolation across a ladder of step sizes.
//!
//! Steps are `h, h·r, h·r², …`: `h` is the finest step and every level is a
//! coarsening of it. Tensor-product stencils cover every mixed partial up to
//! total order 4.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real scalar function of `(x, y, t)` with an optional notion of distance
/// to its singular set.
pub trait ScalarField: Sync {
    fn value(&self, x: f64, y: f64, t: f64) -> Result<f64>;

    /// Lower estimate of the distance from `(x, y, t)` to the nearest
    /// singularity. Infinite for entire functions.
    fn clearance(&self, _x: f64, _y: f64, _t: f64) -> f64 {
        f64::INFINITY
    }
}

impl<T: ScalarField + ?Sized> ScalarField for &T {
    fn value(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        (**self).value(x, y, t)
    }
    fn clearance(&self, x: f64, y: f64, t: f64) -> f64 {
        (**self).clearance(x, y, t)
    }
}

/// Adapts an infallible closure into a [`ScalarField`].
pub struct FnField<F>(pub F);

impl<F: Fn(f64, f64, f64) -> f64 + Sync> ScalarField for FnField<F> {
    fn value(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        Ok((self.0)(x, y, t))
    }
}

/// Adapts a fallible closure and a clearance function into a [`ScalarField`].
pub struct TryFnField<F, C> {
    pub value: F,
    pub clearance: C,
}

impl<F, C> ScalarField for TryFnField<F, C>
where
    F: Fn(f64, f64, f64) -> Result<f64> + Sync,
    C: Fn(f64, f64, f64) -> f64 + Sync,
{
    fn value(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        (self.value)(x, y, t)
    }
    fn clearance(&self, x: f64, y: f64, t: f64) -> f64 {
        (self.clearance)(x, y, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StencilOrder {
    Second,
    Fourth,
}

impl StencilOrder {
    pub fn as_u32(self) -> u32 {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
        }
    }
}

// Centered weights, offsets −m..=m.
const W2: [&[f64]; 5] = [
    &[1.0],
    &[-0.5, 0.0, 0.5],
    &[1.0, -2.0, 1.0],
    &[-0.5, 1.0, 0.0, -1.0, 0.5],
    &[1.0, -4.0, 6.0, -4.0, 1.0],
];

const W4: [&[f64]; 5] = [
    &[1.0],
    &[1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0],
    &[-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0],
    &[0.125, -1.0, 1.625, 0.0, -1.625, 1.0, -0.125],
    &[
        -1.0 / 6.0,
        2.0,
        -6.5,
        28.0 / 3.0,
        -6.5,
        2.0,
        -1.0 / 6.0,
    ],
];

pub(crate) fn weights(deriv: u8, order: StencilOrder) -> &'static [f64] {
    match order {
        StencilOrder::Second => W2[deriv as usize],
        StencilOrder::Fourth => W4[deriv as usize],
    }
}

/// Step ladder and stencil choice for every finite-difference evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdScheme {
    /// Finest step.
    pub h: f64,
    pub ratio: f64,
    pub levels: usize,
    pub order: StencilOrder,
}

impl Default for FdScheme {
    fn default() -> Self {
        FdScheme {
            h: 1e-2,
            ratio: 2.0,
            levels: 3,
            order: StencilOrder::Second,
        }
    }
}

impl FdScheme {
    pub fn new(h: f64, ratio: f64, levels: usize, order: StencilOrder) -> Result<Self> {
        let s = FdScheme {
            h,
            ratio,
            levels,
            order,
        };
        s.validate(1.0)?;
        Ok(s)
    }

    /// Default scheme with its step proportional to the domain scale.
    pub fn for_scale(scale: f64) -> Self {
        FdScheme {
            h: 1e-2 * scale,
            ..FdScheme::default()
        }
    }

    pub fn with_h(self, h: f64) -> Self {
        FdScheme { h, ..self }
    }

    pub fn validate(&self, domain_scale: f64) -> Result<()> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::InvalidParameter(format!("step h = {}", self.h)));
        }
        if !(self.ratio > 1.0) || !self.ratio.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "refinement ratio = {}",
                self.ratio
            )));
        }
        if self.levels < 2 {
            return Err(Error::InvalidParameter(format!(
                "levels = {} (need at least 2)",
                self.levels
            )));
        }
        if self.h <= 1e3 * f64::EPSILON * domain_scale.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidParameter(format!(
                "step h = {} is too small for domain scale {domain_scale}",
                self.h
            )));
        }
        Ok(())
    }

    /// Step of level `l`, finest first.
    pub fn step(&self, level: usize) -> f64 {
        self.h * self.ratio.powi(level as i32)
    }

    pub fn steps(&self) -> Vec<f64> {
        (0..self.levels).map(|l| self.step(l)).collect()
    }

    pub fn coarsest(&self) -> f64 {
        self.step(self.levels - 1)
    }

    pub(crate) fn half_width(&self, p: Partial) -> i32 {
        let m = |d: u8| (weights(d, self.order).len() / 2) as i32;
        m(p.dx).max(m(p.dy)).max(m(p.dt))
    }

    /// Radius of the region touched by the coarsest stencil for `p`.
    pub fn footprint(&self, p: Partial) -> f64 {
        self.half_width(p) as f64 * self.coarsest() * std::f64::consts::SQRT_2
    }
}

/// Multi-index of a partial derivative: orders in x, y and t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partial {
    pub dx: u8,
    pub dy: u8,
    pub dt: u8,
}

impl Partial {
    pub const fn new(dx: u8, dy: u8, dt: u8) -> Self {
        Partial { dx, dy, dt }
    }

    pub fn total(self) -> u32 {
        self.dx as u32 + self.dy as u32 + self.dt as u32
    }

    pub fn validate(self) -> Result<()> {
        if self.total() > 4 || self.dx > 4 || self.dy > 4 || self.dt > 4 {
            return Err(Error::InvalidParameter(format!(
                "partial {:?} exceeds total order 4",
                self
            )));
        }
        Ok(())
    }
}

/// Samples of `f` on the lattice `(x + i h, y + j h, t + k h)` around one
/// point, memoized so that many partials share evaluations.
pub(crate) struct LocalStencil<'a, F: ?Sized> {
    f: &'a F,
    center: (f64, f64, f64),
    h: f64,
    half: i32,
    order: StencilOrder,
    cache: Vec<Option<f64>>,
    max_abs: f64,
}

impl<'a, F: ScalarField + ?Sized> LocalStencil<'a, F> {
    pub(crate) fn new(f: &'a F, center: (f64, f64, f64), h: f64, half: i32, order: StencilOrder) -> Self {
        let n = (2 * half + 1) as usize;
        LocalStencil {
            f,
            center,
            h,
            half,
            order,
            cache: vec![None; n * n * n],
            max_abs: 0.0,
        }
    }

    fn sample(&mut self, i: i32, j: i32, k: i32) -> Result<f64> {
        let n = 2 * self.half + 1;
        let idx = (((k + self.half) * n + (j + self.half)) * n + (i + self.half)) as usize;
        if let Some(v) = self.cache[idx] {
            return Ok(v);
        }
        let (x, y, t) = self.center;
        let h = self.h;
        let v = self
            .f
            .value(x + i as f64 * h, y + j as f64 * h, t + k as f64 * h)?;
        self.cache[idx] = Some(v);
        self.max_abs = self.max_abs.max(v.abs());
        Ok(v)
    }

    /// Raw (non-extrapolated) central difference at this stencil's step.
    pub(crate) fn partial(&mut self, p: Partial) -> Result<f64> {
        let wx = weights(p.dx, self.order);
        let wy = weights(p.dy, self.order);
        let wt = weights(p.dt, self.order);
        let (mx, my, mt) = (
            (wx.len() / 2) as i32,
            (wy.len() / 2) as i32,
            (wt.len() / 2) as i32,
        );
        debug_assert!(mx <= self.half && my <= self.half && mt <= self.half);
        let mut acc = 0.0;
        for (kt, &ct) in wt.iter().enumerate() {
            if ct == 0.0 {
                continue;
            }
            for (jy, &cy) in wy.iter().enumerate() {
                if cy == 0.0 {
                    continue;
                }
                for (ix, &cx) in wx.iter().enumerate() {
                    if cx == 0.0 {
                        continue;
                    }
                    let v = self.sample(ix as i32 - mx, jy as i32 - my, kt as i32 - mt)?;
                    acc += ct * cy * cx * v;
                }
            }
        }
        Ok(acc / self.h.powi(p.total() as i32))
    }

    /// Rounding-noise bound for [`Self::partial`]: ε·Σ|w|·max|f| / hⁿ.
    pub(crate) fn noise(&self, p: Partial) -> f64 {
        let s = |d: u8| weights(d, self.order).iter().map(|w| w.abs()).sum::<f64>();
        f64::EPSILON * s(p.dx) * s(p.dy) * s(p.dt) * self.max_abs.max(f64::MIN_POSITIVE)
            / self.h.powi(p.total() as i32)
    }
}

/// Richardson extrapolation of estimates taken at steps `h, h·r, h·r², …`
/// (finest first) whose error expands in `h^p, h^(p+2), …`.
pub fn richardson(levels: &[f64], ratio: f64, leading_order: u32) -> f64 {
    let mut col: Vec<f64> = levels.to_vec();
    let mut q = leading_order as i32;
    while col.len() > 1 {
        let f = ratio.powi(q);
        col = col
            .windows(2)
            .map(|w| (f * w[0] - w[1]) / (f - 1.0))
            .collect();
        q += 2;
    }
    col[0]
}

/// Observed convergence order from the three finest raw estimates, using
/// successive differences as the error proxy. `None` when the differences
/// are indistinguishable from rounding noise or fewer than three levels exist.
pub fn observed_order(levels: &[f64], ratio: f64, noise: f64) -> Option<f64> {
    if levels.len() < 3 {
        return None;
    }
    let fine = (levels[1] - levels[0]).abs();
    let coarse = (levels[2] - levels[1]).abs();
    if fine <= 10.0 * noise || coarse <= 10.0 * noise {
        return None;
    }
    Some((coarse / fine).ln() / ratio.ln())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FdEstimate {
    /// Richardson-extrapolated value.
    pub value: f64,
    /// Observed order of the raw central differences; `None` when the
    /// stencil is exact for `f` up to rounding.
    pub order_estimate: Option<f64>,
    /// Raw estimates, finest step first.
    pub levels: Vec<f64>,
}

/// Partial derivative of `f` at `at`, extrapolated across `scheme.levels`
/// step sizes.
pub fn fd_partial<F: ScalarField + ?Sized>(
    f: &F,
    which: Partial,
    at: (f64, f64, f64),
    scheme: &FdScheme,
) -> Result<FdEstimate> {
    let mut v = fd_partials(f, &[which], at, scheme)?;
    Ok(v.pop().expect("one estimate per partial"))
}

/// Several partials at one point. Every level samples `f` once on a shared
/// lattice, so the cost is that of the widest stencil.
pub fn fd_partials<F: ScalarField + ?Sized>(
    f: &F,
    which: &[Partial],
    at: (f64, f64, f64),
    scheme: &FdScheme,
) -> Result<Vec<FdEstimate>> {
    for p in which {
        p.validate()?;
    }
    scheme.validate(1.0)?;
    let half = which.iter().map(|&p| scheme.half_width(p)).max().unwrap_or(0);
    let footprint = half as f64 * scheme.coarsest() * std::f64::consts::SQRT_2;
    let clearance = f.clearance(at.0, at.1, at.2);
    if clearance <= footprint {
        return Err(Error::StencilPlacement {
            x: at.0,
            y: at.1,
            t: at.2,
            footprint,
            clearance,
        });
    }
    let mut raw = vec![Vec::with_capacity(scheme.levels); which.len()];
    let mut noise = vec![0.0; which.len()];
    for l in 0..scheme.levels {
        let mut st = LocalStencil::new(f, at, scheme.step(l), half, scheme.order);
        for (i, &p) in which.iter().enumerate() {
            raw[i].push(st.partial(p)?);
        }
        if l == 0 {
            for (i, &p) in which.iter().enumerate() {
                noise[i] = st.noise(p);
            }
        }
    }
    Ok(raw
        .into_iter()
        .zip(noise)
        .map(|(levels, n)| FdEstimate {
            value: richardson(&levels, scheme.ratio, scheme.order.as_u32()),
            order_estimate: observed_order(&levels, scheme.ratio, n),
            levels,
        })
        .collect())
}
