//! Residual checks of the vorticity-transport and Laplace equations with
//! convergence-order evidence, plus the wave-translation checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{StreamSolution, WaveParams};
use crate::error::{Error, Result};
use crate::field::{Field, Grid};
use crate::numeric::fd::LocalStencil;
use crate::numeric::{c_exp, richardson, Cplx, FdScheme, FnField, Partial, ScalarField};

/// Default seed for random sample points.
pub const DEFAULT_SEED: u64 = 42;

/// A raw level counts as resolved when it exceeds its rounding bound by this
/// factor.
const NOISE_SAFETY: f64 = 10.0;

/// Box from which residual sample points are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDomain {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub t: (f64, f64),
    /// Points closer than this to the singular set are rejected.
    pub min_clearance: f64,
    pub seed: u64,
}

impl Default for SampleDomain {
    /// `[−3, 3]² × [0.5, 2]`, clearance 0.5, seed 42.
    fn default() -> Self {
        SampleDomain {
            x: (-3.0, 3.0),
            y: (-3.0, 3.0),
            t: (0.5, 2.0),
            min_clearance: 0.5,
            seed: DEFAULT_SEED,
        }
    }
}

/// Draws `n` points uniformly from `domain`, skipping those without the
/// required clearance from `f`'s singular set. Deterministic in the seed.
pub fn sample_points<F: ScalarField + ?Sized>(
    f: &F,
    n: usize,
    domain: &SampleDomain,
) -> Result<Vec<(f64, f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(domain.seed);
    let mut out = Vec::with_capacity(n);
    let budget = 1000 * n.max(1);
    for _ in 0..budget {
        if out.len() == n {
            break;
        }
        let x = rng.gen_range(domain.x.0..=domain.x.1);
        let y = rng.gen_range(domain.y.0..=domain.y.1);
        let t = rng.gen_range(domain.t.0..=domain.t.1);
        if f.clearance(x, y, t) > domain.min_clearance && f.value(x, y, t).is_ok() {
            out.push((x, y, t));
        }
    }
    if out.len() < n {
        return Err(Error::InvalidParameter(format!(
            "only {} of {n} admissible sample points found",
            out.len()
        )));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    /// Vorticity transport in stream-function form.
    Pde,
    Laplace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convergence {
    /// The raw residual shrinks with a measurable order.
    Converging,
    /// The stencils are exact for this field; every level sits at the
    /// rounding floor, so no order can be observed.
    ExactToRounding,
    /// Resolved above rounding, but no usable pair of levels.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub equation: Equation,
    pub points: Vec<(f64, f64, f64)>,
    /// Residual per point, from Richardson-extrapolated derivatives.
    pub residuals: Vec<f64>,
    pub max_abs: f64,
    pub rms: f64,
    /// Max |raw residual| over the points at each step, finest first.
    pub per_level: Vec<f64>,
    pub steps: Vec<f64>,
    /// Max rounding bound of the raw residual at each step.
    pub noise_floor: Vec<f64>,
    /// Slope of log residual against log step, from the finest pair of
    /// resolved levels. Requires at least three levels.
    pub order_estimate: Option<f64>,
    pub stencil_order: u32,
    pub convergence: Convergence,
}

impl ResidualReport {
    /// Accepted range for the observed order of a stencil of order `p`.
    pub fn order_band(&self) -> (f64, f64) {
        let p = self.stencil_order as f64;
        (p - 0.2, p + 0.5)
    }

    pub fn order_in_band(&self) -> bool {
        let (lo, hi) = self.order_band();
        self.order_estimate.is_some_and(|o| o >= lo && o <= hi)
    }

    /// `max_abs ≤ tol` and convergence either in the order band or exact.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs <= tol
            && match self.convergence {
                Convergence::ExactToRounding => true,
                Convergence::Converging => self.order_in_band(),
                Convergence::Unresolved => false,
            }
    }

    /// The raw residual does not drop by more than 1% per refinement step,
    /// i.e. it stalls instead of converging.
    pub fn non_decreasing_under_refinement(&self) -> bool {
        self.per_level.windows(2).all(|w| w[0] >= 0.99 * w[1])
    }

    fn assemble(
        equation: Equation,
        points: Vec<(f64, f64, f64)>,
        per_point: Vec<PointResidual>,
        scheme: &FdScheme,
    ) -> ResidualReport {
        let residuals: Vec<f64> = per_point.iter().map(|p| p.extrapolated).collect();
        let max_abs = residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        let rms = if residuals.is_empty() {
            0.0
        } else {
            (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt()
        };
        let levels = scheme.levels;
        let mut per_level = vec![0.0_f64; levels];
        let mut noise_floor = vec![0.0_f64; levels];
        for p in &per_point {
            for l in 0..levels {
                per_level[l] = per_level[l].max(p.raw[l].abs());
                noise_floor[l] = noise_floor[l].max(p.noise[l]);
            }
        }
        let resolved: Vec<bool> = (0..levels)
            .map(|l| per_level[l] > NOISE_SAFETY * noise_floor[l])
            .collect();
        let pair = (0..levels.saturating_sub(1)).find(|&l| resolved[l] && resolved[l + 1]);
        let order_estimate = match pair {
            Some(l) if levels >= 3 => Some((per_level[l + 1] / per_level[l]).ln() / scheme.ratio.ln()),
            _ => None,
        };
        let convergence = if resolved.iter().all(|r| !r) {
            Convergence::ExactToRounding
        } else if order_estimate.is_some() {
            Convergence::Converging
        } else {
            Convergence::Unresolved
        };
        ResidualReport {
            equation,
            points,
            residuals,
            max_abs,
            rms,
            per_level,
            steps: scheme.steps(),
            noise_floor,
            order_estimate,
            stencil_order: scheme.order.as_u32(),
            convergence,
        }
    }
}

struct PointResidual {
    extrapolated: f64,
    raw: Vec<f64>,
    noise: Vec<f64>,
}

const PSI_X: Partial = Partial::new(1, 0, 0);
const PSI_Y: Partial = Partial::new(0, 1, 0);
const LAP_T: [Partial; 2] = [Partial::new(2, 0, 1), Partial::new(0, 2, 1)];
const LAP_X: [Partial; 2] = [Partial::new(3, 0, 0), Partial::new(1, 2, 0)];
const LAP_Y: [Partial; 2] = [Partial::new(2, 1, 0), Partial::new(0, 3, 0)];
const LAP: [Partial; 2] = [Partial::new(2, 0, 0), Partial::new(0, 2, 0)];
const BIHARM: [(Partial, f64); 3] = [
    (Partial::new(4, 0, 0), 1.0),
    (Partial::new(2, 2, 0), 2.0),
    (Partial::new(0, 4, 0), 1.0),
];

// Index layout of the partials gathered per level.
const PDE_PARTIALS: [Partial; 11] = [
    PSI_X, PSI_Y, LAP_T[0], LAP_T[1], LAP_X[0], LAP_X[1], LAP_Y[0], LAP_Y[1], BIHARM[0].0,
    BIHARM[1].0, BIHARM[2].0,
];

fn pde_from(d: &[f64], inv_re: f64) -> f64 {
    let lap_t = d[2] + d[3];
    let lap_x = d[4] + d[5];
    let lap_y = d[6] + d[7];
    let biharm = d[8] + 2.0 * d[9] + d[10];
    lap_t + d[1] * lap_x - d[0] * lap_y - inv_re * biharm
}

fn pde_noise(d: &[f64], n: &[f64], inv_re: f64) -> f64 {
    let lap_x = (d[4] + d[5]).abs();
    let lap_y = (d[6] + d[7]).abs();
    n[2] + n[3]
        + d[1].abs() * (n[4] + n[5])
        + n[1] * lap_x
        + d[0].abs() * (n[6] + n[7])
        + n[0] * lap_y
        + inv_re * (n[8] + 2.0 * n[9] + n[10])
}

fn check_clearance<F: ScalarField + ?Sized>(
    f: &F,
    points: &[(f64, f64, f64)],
    footprint: f64,
) -> Result<()> {
    let bad: Vec<_> = points
        .iter()
        .copied()
        .filter(|&(x, y, t)| f.clearance(x, y, t) <= footprint)
        .collect();
    match bad.first() {
        None => Ok(()),
        Some(&first) => Err(Error::Clearance {
            count: bad.len(),
            first,
            points: bad,
        }),
    }
}

fn residual_at<F: ScalarField + ?Sized>(
    f: &F,
    at: (f64, f64, f64),
    scheme: &FdScheme,
    partials: &[Partial],
    combine: impl Fn(&[f64]) -> f64,
    noise_of: impl Fn(&[f64], &[f64]) -> f64,
) -> Result<PointResidual> {
    let half = partials.iter().map(|&p| scheme.half_width(p)).max().unwrap_or(0);
    let mut by_partial = vec![Vec::with_capacity(scheme.levels); partials.len()];
    let mut raw = Vec::with_capacity(scheme.levels);
    let mut noise = Vec::with_capacity(scheme.levels);
    for l in 0..scheme.levels {
        let mut st = LocalStencil::new(f, at, scheme.step(l), half, scheme.order);
        let d = partials
            .iter()
            .map(|&p| st.partial(p))
            .collect::<Result<Vec<f64>>>()?;
        let n: Vec<f64> = partials.iter().map(|&p| st.noise(p)).collect();
        raw.push(combine(&d));
        noise.push(noise_of(&d, &n));
        for (i, v) in d.into_iter().enumerate() {
            by_partial[i].push(v);
        }
    }
    let extrapolated: Vec<f64> = by_partial
        .iter()
        .map(|lv| richardson(lv, scheme.ratio, scheme.order.as_u32()))
        .collect();
    Ok(PointResidual {
        extrapolated: combine(&extrapolated),
        raw,
        noise,
    })
}

/// Residual of `∂ₜ∇²ψ + ψ_y ∂ₓ∇²ψ − ψ_x ∂_y∇²ψ − (1/Re)∇⁴ψ` for the real
/// field `f` at each `(x, y, t)` point.
pub fn pde_residual<F: ScalarField + ?Sized>(
    f: &F,
    points: &[(f64, f64, f64)],
    re_number: f64,
    scheme: &FdScheme,
) -> Result<ResidualReport> {
    if !(re_number > 0.0 && re_number.is_finite()) {
        return Err(Error::InvalidParameter(format!("Reynolds number {re_number}")));
    }
    scheme.validate(1.0)?;
    let footprint = scheme.footprint(Partial::new(4, 0, 0));
    check_clearance(f, points, footprint)?;
    let inv_re = 1.0 / re_number;
    let per_point = points
        .par_iter()
        .map(|&at| {
            residual_at(
                f,
                at,
                scheme,
                &PDE_PARTIALS,
                |d| pde_from(d, inv_re),
                |d, n| pde_noise(d, n, inv_re),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::assemble(Equation::Pde, points.to_vec(), per_point, scheme))
}

/// `∇²f` at each point, with the same convergence bookkeeping as
/// [`pde_residual`].
pub fn laplace_residual<F: ScalarField + ?Sized>(
    f: &F,
    points: &[(f64, f64, f64)],
    scheme: &FdScheme,
) -> Result<ResidualReport> {
    scheme.validate(1.0)?;
    let footprint = scheme.footprint(Partial::new(2, 0, 0));
    check_clearance(f, points, footprint)?;
    let per_point = points
        .par_iter()
        .map(|&at| residual_at(f, at, scheme, &LAP, |d| d[0] + d[1], |_, n| n[0] + n[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::assemble(Equation::Laplace, points.to_vec(), per_point, scheme))
}

/// Real part of the general traveling profile
/// `C₁e^{−λz} + C₂z² + C₃z + C₄` with `λ = ϖRe/(k₁²+k₂²)`.
pub fn general_profile(p: &WaveParams) -> Result<impl Fn(f64) -> f64 + Sync> {
    let k2 = p.wave_norm_sq();
    if k2 == 0.0 {
        return Err(Error::DegenerateWave);
    }
    let lambda = p.omega * p.re_number / k2;
    let c = p.c;
    Ok(move |z: f64| {
        let zc = Cplx::from(z);
        let v = c[0] * c_exp(Cplx::from(-lambda * z)) + c[1] * zc * zc + c[2] * zc + c[3];
        v.re
    })
}

/// Max over `zs` of `|(k₁²+k₂²)φ⁗ + Re ϖ φ‴|`, the equation every traveling
/// profile `φ(k₁x + k₂y + d₀ − ϖt)` must satisfy. Derivatives come from
/// finite differences along `z`.
pub fn ode_check<P>(p: &WaveParams, phi: P, zs: &[f64], scheme: &FdScheme) -> Result<f64>
where
    P: Fn(f64) -> f64 + Sync,
{
    let k2 = p.wave_norm_sq();
    if k2 == 0.0 {
        return Err(Error::DegenerateWave);
    }
    let f = FnField(|z: f64, _: f64, _: f64| phi(z));
    let coef = p.re_number * p.omega;
    let mut worst = 0.0_f64;
    for &z in zs {
        let d = crate::numeric::fd_partials(
            &f,
            &[Partial::new(3, 0, 0), Partial::new(4, 0, 0)],
            (z, 0.0, 0.0),
            scheme,
        )?;
        worst = worst.max((k2 * d[1].value + coef * d[0].value).abs());
    }
    Ok(worst)
}

/// `max |Re ψ(x, y, t₀+Δt) − Re ψ(x − cΔt, y, t₀)|` over the grid nodes,
/// `c = ϖ/k`. Nodes where either side is singular are skipped.
pub fn wave_translation_check(s: &StreamSolution, grid: &Grid, t0: f64, dt: f64) -> Result<f64> {
    let c = s.x_propagation_speed().ok_or_else(|| {
        Error::NotApplicable(format!("{s} does not travel along x"))
    })?;
    grid.validate()?;
    let shift = c * dt;
    Ok((0..grid.len())
        .into_par_iter()
        .filter_map(|idx| {
            let (i, j) = grid.node(idx);
            let (x, y) = (grid.x(i), grid.y(j));
            let later = s.psi(x, y, t0 + dt).ok()?;
            let earlier = s.psi(x - shift, y, t0).ok()?;
            Some((later - earlier).abs())
        })
        .reduce(|| 0.0, f64::max))
}

/// Physical x-shift that best aligns `later` with `earlier`: the lag of the
/// peak normalized cross-correlation along x, searched over
/// `±max_shift_cells` and refined by a parabola through the peak.
pub fn x_shift_estimate(earlier: &Field, later: &Field, max_shift_cells: usize) -> Result<f64> {
    if earlier.grid != later.grid {
        return Err(Error::InvalidParameter("frames on different grids".into()));
    }
    let g = earlier.grid;
    let max_shift = max_shift_cells.min(g.nx - 2) as i64;
    let corr = |s: i64| -> f64 {
        let (mut sab, mut saa, mut sbb, mut sa, mut sb, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for j in 0..g.ny {
            for i in 0..g.nx as i64 {
                let k = i + s;
                if k < 0 || k >= g.nx as i64 {
                    continue;
                }
                if let (Some(a), Some(b)) = (earlier.get(i as usize, j), later.get(k as usize, j)) {
                    sab += a * b;
                    saa += a * a;
                    sbb += b * b;
                    sa += a;
                    sb += b;
                    n += 1.0;
                }
            }
        }
        if n < 2.0 {
            return f64::NEG_INFINITY;
        }
        let cov = sab - sa * sb / n;
        let va = saa - sa * sa / n;
        let vb = sbb - sb * sb / n;
        if va <= 0.0 || vb <= 0.0 {
            return f64::NEG_INFINITY;
        }
        cov / (va * vb).sqrt()
    };
    let scores: Vec<(i64, f64)> = (-max_shift..=max_shift).map(|s| (s, corr(s))).collect();
    let &(best, peak) = scores
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one lag");
    if !peak.is_finite() {
        return Err(Error::InvalidParameter("frames have no variation to correlate".into()));
    }
    let at = |s: i64| scores.iter().find(|p| p.0 == s).map(|p| p.1);
    let frac = match (at(best - 1), at(best + 1)) {
        (Some(l), Some(r)) if l.is_finite() && r.is_finite() => {
            let den = l - 2.0 * peak + r;
            if den < 0.0 {
                0.5 * (l - r) / den
            } else {
                0.0
            }
        }
        _ => 0.0,
    };
    Ok((best as f64 + frac) * g.dx())
}

/// Fields that are not solutions: `x⁴y` and the real traveling `tanh`
/// obtained by dropping the imaginary unit from the solitary wave phase.
pub fn negative_controls() -> Vec<(&'static str, Box<dyn ScalarField + Send>)> {
    let p = WaveParams::catalog_defaults();
    vec![
        (
            "x^4 y",
            Box::new(FnField(|x: f64, y: f64, _t: f64| x.powi(4) * y)) as Box<dyn ScalarField + Send>,
        ),
        (
            "broken-phase tanh",
            Box::new(FnField(move |x: f64, y: f64, t: f64| {
                (p.k1 * x + p.k1 * y + p.d0 - p.omega * t).tanh()
            })),
        ),
    ]
}

/// Settings shared by the verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub points: usize,
    pub domain: SampleDomain,
    pub scheme: FdScheme,
    pub pde_tol: f64,
    pub laplace_tol: f64,
}

impl Default for SuiteConfig {
    /// 50 points, `h = 1e-2`, tolerances `1e-2` (PDE) and `1e-4` (Laplace).
    fn default() -> Self {
        SuiteConfig {
            points: 50,
            domain: SampleDomain::default(),
            scheme: FdScheme::default(),
            pde_tol: 1e-2,
            laplace_tol: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub passed: bool,
    pub tolerance: f64,
    pub report: ResidualReport,
}

/// Runs the PDE suite on `s`, and the Laplace suite as well when `s` is
/// harmonic.
pub fn run_suites(s: &StreamSolution, cfg: &SuiteConfig) -> Result<Vec<SuiteOutcome>> {
    let mut domain = cfg.domain;
    domain.t.0 = domain.t.0.max(s.min_time() + domain.min_clearance);
    if domain.t.1 < domain.t.0 {
        domain.t.1 = domain.t.0;
    }
    let points = sample_points(s, cfg.points, &domain)?;
    let pde = pde_residual(s, &points, s.params().re_number, &cfg.scheme)?;
    let mut out = vec![SuiteOutcome {
        name: "pde".into(),
        passed: pde.passes(cfg.pde_tol),
        tolerance: cfg.pde_tol,
        report: pde,
    }];
    if s.is_harmonic() {
        let lap = laplace_residual(s, &points, &cfg.scheme)?;
        out.push(SuiteOutcome {
            name: "laplace".into(),
            passed: lap.max_abs <= cfg.laplace_tol,
            tolerance: cfg.laplace_tol,
            report: lap,
        });
    }
    Ok(out)
}
