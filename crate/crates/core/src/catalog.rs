//! Exact solutions of the stream-function vorticity equation.
//!
//! Every solution evaluates to a complex number whose real part is the
//! physical stream function. For the harmonic families the imaginary part
//! is the velocity potential.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::VelocitySample;
use crate::numeric::{
    c_cos, c_exp, c_ln, c_pow, c_sin, c_tanh, exp_integral_e1, Cplx, ScalarField, J,
    SINGULAR_RADIUS,
};
use crate::numeric::complex::tanh_pole_distance;
use crate::symmetry::{GroupElement, GroupKind};

/// Traveling-wave coefficients for the phase `z = k₁x + k₂y + d₀ − ϖt` and
/// the integration constants of the general profile
/// `φ(z) = C₁ exp(−ϖ Re z / (k₁²+k₂²)) + C₂z² + C₃z + C₄`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub k1: f64,
    pub k2: f64,
    pub d0: f64,
    pub omega: f64,
    pub re_number: f64,
    pub c: [Cplx; 4],
}

impl Default for WaveParams {
    fn default() -> Self {
        WaveParams::catalog_defaults()
    }
}

impl WaveParams {
    /// k₁ = k₂ = 2, d₀ = 0, ϖ = 0.1, Re = 1, all constants zero.
    pub const fn catalog_defaults() -> Self {
        WaveParams {
            k1: 2.0,
            k2: 2.0,
            d0: 0.0,
            omega: 0.1,
            re_number: 1.0,
            c: [Cplx::ZERO; 4],
        }
    }

    pub fn with_constants(mut self, c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        self.c = [c1.into(), c2.into(), c3.into(), c4.into()];
        self
    }

    pub fn wave_norm_sq(&self) -> f64 {
        self.k1 * self.k1 + self.k2 * self.k2
    }

    /// Decay rate ϖ Re / (k₁² + k₂²) of the exponential profile term.
    pub fn decay_rate(&self) -> f64 {
        self.omega * self.re_number / self.wave_norm_sq()
    }

    pub fn phase(&self, x: f64, y: f64, t: f64) -> f64 {
        self.k1 * x + self.k2 * y + self.d0 - self.omega * t
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.k1, self.k2, self.d0, self.omega, self.re_number];
        if all.iter().any(|v| !v.is_finite()) || self.c.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite wave parameter".into()));
        }
        if !(self.re_number > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Reynolds number must be positive, got {}",
                self.re_number
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    GeneralTravelingWave,
    HarmonicPower,
    HarmonicCosine,
    HarmonicLog,
    HarmonicTanh,
    HarmonicExp,
    RealQuadratic,
    RealExp,
    OseenRankine,
    Transformed,
}

/// Outer function `F` of a harmonic solution `ψ = A·F(w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HarmonicKind {
    /// wⁿ
    Power,
    Cosine,
    Log,
    Tanh,
    /// exp(j·w)
    Exp,
}

impl HarmonicKind {
    fn family(self) -> Family {
        match self {
            HarmonicKind::Power => Family::HarmonicPower,
            HarmonicKind::Cosine => Family::HarmonicCosine,
            HarmonicKind::Log => Family::HarmonicLog,
            HarmonicKind::Tanh => Family::HarmonicTanh,
            HarmonicKind::Exp => Family::HarmonicExp,
        }
    }
}

impl FromStr for HarmonicKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "power" | "pow" => HarmonicKind::Power,
            "cosine" | "cos" => HarmonicKind::Cosine,
            "log" | "ln" => HarmonicKind::Log,
            "tanh" => HarmonicKind::Tanh,
            "exp" => HarmonicKind::Exp,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown harmonic kind `{s}`"
                )))
            }
        })
    }
}

/// Which axis carries the real part of the harmonic phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// w = kx + jky + d₀ − ϖt
    #[default]
    AlongX,
    /// w = ky + jkx + d₀ − ϖt
    AlongY,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealKind {
    Quadratic,
    Exponential,
}

#[derive(Clone, Debug)]
enum Form {
    Traveling,
    Harmonic {
        kind: HarmonicKind,
        amplitude: Cplx,
        exponent: f64,
        orientation: Orientation,
    },
    Oseen {
        c2: f64,
        c3: f64,
        t_min: f64,
    },
    Transformed {
        group: GroupElement,
        seed: Arc<StreamSolution>,
    },
}

/// An evaluable exact solution ψ(x, y, t).
#[derive(Clone, Debug)]
pub struct StreamSolution {
    family: Family,
    params: WaveParams,
    form: Form,
}

pub fn make_general_traveling(p: WaveParams) -> Result<StreamSolution> {
    p.validate()?;
    if p.wave_norm_sq() == 0.0 {
        return Err(Error::DegenerateWave);
    }
    Ok(StreamSolution {
        family: Family::GeneralTravelingWave,
        params: p,
        form: Form::Traveling,
    })
}

/// `ψ = A·F(kx + jky + d₀ − ϖt)` with `k = p.k1`.
pub fn make_harmonic(kind: HarmonicKind, a: Cplx, n: f64, p: WaveParams) -> Result<StreamSolution> {
    make_harmonic_oriented(kind, a, n, p, Orientation::AlongX)
}

pub fn make_harmonic_oriented(
    kind: HarmonicKind,
    a: Cplx,
    n: f64,
    mut p: WaveParams,
    orientation: Orientation,
) -> Result<StreamSolution> {
    p.validate()?;
    if !a.is_finite() || !n.is_finite() {
        return Err(Error::InvalidParameter("non-finite amplitude or exponent".into()));
    }
    p.k2 = p.k1;
    Ok(StreamSolution {
        family: kind.family(),
        params: p,
        form: Form::Harmonic {
            kind,
            amplitude: a,
            exponent: if kind == HarmonicKind::Power { n } else { 1.0 },
            orientation,
        },
    })
}

/// `(k₁x + k₂y + d₀ − ϖt)²` or `exp(−ϖRe(k₁x + k₂y + d₀ − ϖt)/(k₁²+k₂²))`.
pub fn make_real_family(kind: RealKind, p: WaveParams) -> Result<StreamSolution> {
    let (constants, family) = match kind {
        RealKind::Quadratic => (p.with_constants(0.0, 1.0, 0.0, 0.0), Family::RealQuadratic),
        RealKind::Exponential => (p.with_constants(1.0, 0.0, 0.0, 0.0), Family::RealExp),
    };
    let mut s = make_general_traveling(constants)?;
    s.family = family;
    Ok(s)
}

/// `ψ = C₂ ln(t/(x²+y²)) + C₃ E₁(Re(x²+y²)/(4t))`, valid for `t ≥ t_min`.
pub fn make_oseen_rankine(c2: f64, c3: f64, re_number: f64, t_min: f64) -> Result<StreamSolution> {
    if !(t_min > 0.0) || !t_min.is_finite() {
        return Err(Error::InvalidParameter(format!("t_min must be positive, got {t_min}")));
    }
    if !c2.is_finite() || !c3.is_finite() {
        return Err(Error::InvalidParameter("non-finite vortex weight".into()));
    }
    let params = WaveParams {
        re_number,
        c: [Cplx::ZERO, c2.into(), c3.into(), Cplx::ZERO],
        ..WaveParams::catalog_defaults()
    };
    params.validate()?;
    Ok(StreamSolution {
        family: Family::OseenRankine,
        params,
        form: Form::Oseen { c2, c3, t_min },
    })
}

/// Phase speed ϖ/k along x for the shared wave number `k = k₁`.
pub fn wave_speed(p: &WaveParams) -> Result<f64> {
    if p.k1 == 0.0 {
        return Err(Error::NoPropagation);
    }
    Ok(p.omega / p.k1)
}

impl StreamSolution {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &WaveParams {
        &self.params
    }

    /// Family of the innermost seed for transformed solutions.
    pub fn base_family(&self) -> Family {
        match &self.form {
            Form::Transformed { seed, .. } => seed.base_family(),
            _ => self.family,
        }
    }

    pub fn seed(&self) -> Option<&StreamSolution> {
        match &self.form {
            Form::Transformed { seed, .. } => Some(seed),
            _ => None,
        }
    }

    pub fn group(&self) -> Option<&GroupElement> {
        match &self.form {
            Form::Transformed { group, .. } => Some(group),
            _ => None,
        }
    }

    pub fn transformed(&self, group: GroupElement) -> StreamSolution {
        StreamSolution {
            family: Family::Transformed,
            params: self.params,
            form: Form::Transformed {
                group,
                seed: Arc::new(self.clone()),
            },
        }
    }

    /// Complex value; the stream function is its real part.
    pub fn eval(&self, x: f64, y: f64, t: f64) -> Result<Cplx> {
        let at = |e: Error| match e {
            Error::SingularArgument { .. } => Error::Singular { x, y, t },
            e => e,
        };
        match &self.form {
            Form::Traveling => Ok(self.profile(self.params.phase(x, y, t))),
            Form::Harmonic {
                kind,
                amplitude,
                exponent,
                orientation,
            } => {
                let w = self.harmonic_phase(*orientation, x, y, t);
                let f = match kind {
                    HarmonicKind::Power => {
                        if w.norm() < SINGULAR_RADIUS && *exponent >= 0.0 {
                            if *exponent == 0.0 {
                                Cplx::ONE
                            } else {
                                Cplx::ZERO
                            }
                        } else {
                            c_pow(w, *exponent).map_err(at)?
                        }
                    }
                    HarmonicKind::Cosine => c_cos(w),
                    HarmonicKind::Log => c_ln(w).map_err(at)?,
                    HarmonicKind::Tanh => c_tanh(w).map_err(at)?,
                    HarmonicKind::Exp => c_exp(J * w),
                };
                Ok(*amplitude * f)
            }
            Form::Oseen { c2, c3, t_min } => {
                let r2 = x * x + y * y;
                if r2.sqrt() < SINGULAR_RADIUS || !(t > 0.0) || t < *t_min {
                    return Err(Error::Singular { x, y, t });
                }
                let mut psi = 0.0;
                if *c2 != 0.0 {
                    psi += c2 * (t / r2).ln();
                }
                if *c3 != 0.0 {
                    psi += c3 * exp_integral_e1(self.params.re_number * r2 / (4.0 * t))?;
                }
                Ok(Cplx::real(psi))
            }
            Form::Transformed { group, seed } => {
                let (xb, yb, tb) = group.pullback(x, y, t);
                let inner = seed.eval(xb, yb, tb).map_err(|e| match e {
                    Error::Singular { .. } => Error::Singular { x, y, t },
                    e => e,
                })?;
                Ok(inner + group.additive(x, y, t))
            }
        }
    }

    /// Physical stream function `Re ψ`.
    pub fn psi(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        self.eval(x, y, t).map(|c| c.re)
    }

    /// Velocity potential `Im ψ` of a harmonic family.
    pub fn potential(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        match &self.form {
            Form::Harmonic { .. } => self.eval(x, y, t).map(|c| c.im),
            _ => Err(Error::NotApplicable(
                "velocity potential exists only for harmonic families".into(),
            )),
        }
    }

    fn profile(&self, z: f64) -> Cplx {
        let p = &self.params;
        let [c1, c2, c3, c4] = p.c;
        let mut v = c2 * (z * z) + c3 * z + c4;
        if c1 != Cplx::ZERO {
            v += c1 * (-p.decay_rate() * z).exp();
        }
        v
    }

    fn profile_slope(&self, z: f64) -> Cplx {
        let p = &self.params;
        let [c1, c2, c3, _] = p.c;
        let lam = p.decay_rate();
        let mut v = c2 * (2.0 * z) + c3;
        if c1 != Cplx::ZERO {
            v += c1 * (-lam * (-lam * z).exp());
        }
        v
    }

    fn harmonic_phase(&self, o: Orientation, x: f64, y: f64, t: f64) -> Cplx {
        let p = &self.params;
        let k = p.k1;
        let (a, b) = match o {
            Orientation::AlongX => (x, y),
            Orientation::AlongY => (y, x),
        };
        Cplx::new(k * a + p.d0 - p.omega * t, k * b)
    }

    /// Closed-form velocity `(u, v) = (∂ψ/∂y, −∂ψ/∂x)` of `Re ψ`, when the
    /// solution (or, for transformed solutions, its seed) provides one.
    pub fn analytic_velocity(&self, x: f64, y: f64, t: f64) -> Option<Result<VelocitySample>> {
        match &self.form {
            Form::Traveling => {
                let d = self.profile_slope(self.params.phase(x, y, t)).re;
                Some(Ok(VelocitySample::new(
                    d * self.params.k2,
                    -d * self.params.k1,
                )))
            }
            Form::Harmonic {
                kind,
                amplitude,
                exponent,
                orientation,
            } => Some(self.harmonic_velocity(*kind, *amplitude, *exponent, *orientation, x, y, t)),
            Form::Oseen { c2, c3, t_min } => {
                let r2 = x * x + y * y;
                if r2.sqrt() < SINGULAR_RADIUS || !(t > 0.0) || t < *t_min {
                    return Some(Err(Error::Singular { x, y, t }));
                }
                let g = (-self.params.re_number * r2 / (4.0 * t)).exp();
                let w = 2.0 * (c2 + c3 * g) / r2;
                Some(Ok(VelocitySample::new(-w * y, w * x)))
            }
            Form::Transformed { group, seed } => {
                let (xb, yb, tb) = group.pullback(x, y, t);
                let inner = seed.analytic_velocity(xb, yb, tb)?;
                Some(
                    inner
                        .map(|v| group.push_velocity(x, y, t, v))
                        .map_err(|_| Error::Singular { x, y, t }),
                )
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn harmonic_velocity(
        &self,
        kind: HarmonicKind,
        a: Cplx,
        n: f64,
        o: Orientation,
        x: f64,
        y: f64,
        t: f64,
    ) -> Result<VelocitySample> {
        let sing = |_| Error::Singular { x, y, t };
        let w = self.harmonic_phase(o, x, y, t);
        let dfdw = match kind {
            HarmonicKind::Power => {
                if n == 0.0 {
                    Cplx::ZERO
                } else if n == 1.0 {
                    Cplx::ONE
                } else if w.norm() < SINGULAR_RADIUS && n > 1.0 {
                    Cplx::ZERO
                } else {
                    c_pow(w, n - 1.0).map_err(sing)? * n
                }
            }
            HarmonicKind::Cosine => -c_sin(w),
            HarmonicKind::Log => {
                if w.norm() < SINGULAR_RADIUS {
                    return Err(Error::Singular { x, y, t });
                }
                w.recip()
            }
            HarmonicKind::Tanh => {
                let th = c_tanh(w).map_err(sing)?;
                Cplx::ONE - th * th
            }
            HarmonicKind::Exp => J * c_exp(J * w),
        } * a;
        let k = Cplx::real(self.params.k1);
        let (wx, wy) = match o {
            Orientation::AlongX => (k, J * k),
            Orientation::AlongY => (J * k, k),
        };
        Ok(VelocitySample::new((dfdw * wy).re, -(dfdw * wx).re))
    }

    pub fn has_analytic_velocity(&self) -> bool {
        match &self.form {
            Form::Transformed { seed, .. } => seed.has_analytic_velocity(),
            _ => true,
        }
    }

    /// Lower estimate of the spatial distance from `(x, y)` to the singular
    /// set at time `t`; for time-limited solutions also bounded by the
    /// distance to the earliest valid time.
    pub fn clearance(&self, x: f64, y: f64, t: f64) -> f64 {
        match &self.form {
            Form::Traveling => f64::INFINITY,
            Form::Harmonic {
                kind,
                exponent,
                orientation,
                ..
            } => {
                let k = self.params.k1.abs();
                let w = self.harmonic_phase(*orientation, x, y, t);
                let in_w = match kind {
                    HarmonicKind::Cosine | HarmonicKind::Exp => return f64::INFINITY,
                    HarmonicKind::Log => w.norm(),
                    HarmonicKind::Tanh => tanh_pole_distance(w),
                    HarmonicKind::Power => {
                        if exponent.fract() == 0.0 {
                            if *exponent >= 0.0 {
                                return f64::INFINITY;
                            }
                            w.norm()
                        } else if w.re <= 0.0 {
                            // distance to the branch cut along the negative real axis
                            w.im.abs().min(w.norm())
                        } else {
                            w.norm()
                        }
                    }
                };
                if k == 0.0 {
                    if in_w < SINGULAR_RADIUS {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    in_w / k
                }
            }
            Form::Oseen { t_min, .. } => {
                let r = x.hypot(y);
                if t < *t_min {
                    0.0
                } else {
                    r.min(t - t_min)
                }
            }
            Form::Transformed { group, seed } => {
                let (xb, yb, tb) = group.pullback(x, y, t);
                seed.clearance(xb, yb, tb) * group.clearance_scale()
            }
        }
    }

    pub fn is_singular(&self, x: f64, y: f64, t: f64) -> bool {
        matches!(self.eval(x, y, t), Err(Error::Singular { .. }))
    }

    /// Whether `Re ψ` satisfies Laplace's equation.
    pub fn is_harmonic(&self) -> bool {
        match &self.form {
            Form::Traveling => self.params.c[0] == Cplx::ZERO && self.params.c[1] == Cplx::ZERO,
            Form::Harmonic { .. } => true,
            Form::Oseen { c3, .. } => *c3 == 0.0,
            Form::Transformed { group, seed } => {
                seed.is_harmonic()
                    && !(group.kind() == GroupKind::RotationStretch && group.epsilon() != 0.0)
            }
        }
    }

    /// Phase speed along x of an untransformed harmonic family with its
    /// phase along x; `None` for everything else.
    pub fn x_propagation_speed(&self) -> Option<f64> {
        match &self.form {
            Form::Harmonic {
                orientation: Orientation::AlongX,
                ..
            } => wave_speed(&self.params).ok(),
            _ => None,
        }
    }

    /// Earliest time at which the solution may be evaluated.
    pub fn min_time(&self) -> f64 {
        match &self.form {
            Form::Oseen { t_min, .. } => *t_min,
            Form::Transformed { group, seed } => match group.kind() {
                GroupKind::TimeTranslation => seed.min_time() + group.epsilon(),
                GroupKind::Scaling => seed.min_time() * group.epsilon().exp(),
                _ => seed.min_time(),
            },
            _ => f64::NEG_INFINITY,
        }
    }

    /// Chain of group elements applied, innermost first.
    pub fn group_chain(&self) -> Vec<GroupElement> {
        match &self.form {
            Form::Transformed { group, seed } => {
                let mut v = seed.group_chain();
                v.push(group.clone());
                v
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for StreamSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            Form::Transformed { group, seed } => write!(f, "{group} ∘ {seed}"),
            Form::Harmonic {
                kind,
                amplitude,
                exponent,
                orientation,
            } => {
                write!(f, "{:?}[{kind:?}", self.family)?;
                if *kind == HarmonicKind::Power {
                    write!(f, ", n={exponent}")?;
                }
                write!(f, ", A={amplitude}, {orientation:?}, k={}", self.params.k1)?;
                write!(f, ", d0={}, omega={}]", self.params.d0, self.params.omega)
            }
            Form::Oseen { c2, c3, .. } => write!(
                f,
                "{:?}[C2={c2}, C3={c3}, Re={}]",
                self.family, self.params.re_number
            ),
            Form::Traveling => {
                let p = &self.params;
                write!(
                    f,
                    "{:?}[k1={}, k2={}, d0={}, omega={}, Re={}, C=({}, {}, {}, {})]",
                    self.family, p.k1, p.k2, p.d0, p.omega, p.re_number, p.c[0], p.c[1], p.c[2], p.c[3]
                )
            }
        }
    }
}

impl ScalarField for StreamSolution {
    fn value(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        self.psi(x, y, t)
    }
    fn clearance(&self, x: f64, y: f64, t: f64) -> f64 {
        StreamSolution::clearance(self, x, y, t)
    }
}
