//! One-parameter point-symmetry groups of the stream-function vorticity
//! equation and their action on solutions.
//!
//! Every group is applied through its exact flow, so that the one-parameter
//! group law holds and solutions map to solutions at every order in ε. For
//! `G3` and `G4` the flow is a rotation by angle `εt` or `ε`, which agrees
//! with the familiar first-order forms `(x + εyt, y − εxt)` and
//! `(x + εy, y − εx)` up to O(ε²).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::StreamSolution;
use crate::error::{Error, Result};
use crate::field::VelocitySample;
use crate::numeric::richardson;

/// A real function of time with a closed-form derivative, used as α, β or γ.
#[derive(Clone)]
pub enum TimeFn {
    Constant(f64),
    /// a·t
    Linear(f64),
    /// a·t²
    Quadratic(f64),
    /// a·sin(b·t)
    Sine { amplitude: f64, frequency: f64 },
    Custom(Arc<CustomTimeFn>),
}

pub struct CustomTimeFn {
    label: String,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    df: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl TimeFn {
    /// A user-supplied function and derivative. The derivative is
    /// spot-checked against a central difference of `f`.
    pub fn custom<F, D>(label: impl Into<String>, f: F, df: D) -> Result<TimeFn>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let label = label.into();
        for &t in &[-1.3, 0.0, 0.7, 2.1] {
            let fd: Vec<f64> = [1e-3, 2e-3, 4e-3]
                .iter()
                .map(|&d| (f(t + d) - f(t - d)) / (2.0 * d))
                .collect();
            let numeric = richardson(&fd, 2.0, 2);
            let analytic = df(t);
            if (numeric - analytic).abs() > 1e-6 * analytic.abs().max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "time function {label}: derivative {analytic} at t={t} disagrees with finite difference {numeric}"
                )));
            }
        }
        Ok(TimeFn::Custom(Arc::new(CustomTimeFn {
            label,
            f: Box::new(f),
            df: Box::new(df),
        })))
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            TimeFn::Constant(c) => *c,
            TimeFn::Linear(a) => a * t,
            TimeFn::Quadratic(a) => a * t * t,
            TimeFn::Sine {
                amplitude,
                frequency,
            } => amplitude * (frequency * t).sin(),
            TimeFn::Custom(c) => (c.f)(t),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            TimeFn::Constant(_) => 0.0,
            TimeFn::Linear(a) => *a,
            TimeFn::Quadratic(a) => 2.0 * a * t,
            TimeFn::Sine {
                amplitude,
                frequency,
            } => amplitude * frequency * (frequency * t).cos(),
            TimeFn::Custom(c) => (c.df)(t),
        }
    }

    fn same_as(&self, other: &TimeFn) -> bool {
        match (self, other) {
            (TimeFn::Constant(a), TimeFn::Constant(b)) => a == b,
            (TimeFn::Linear(a), TimeFn::Linear(b)) => a == b,
            (TimeFn::Quadratic(a), TimeFn::Quadratic(b)) => a == b,
            (
                TimeFn::Sine {
                    amplitude: a1,
                    frequency: f1,
                },
                TimeFn::Sine {
                    amplitude: a2,
                    frequency: f2,
                },
            ) => a1 == a2 && f1 == f2,
            (TimeFn::Custom(a), TimeFn::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Display for TimeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeFn::Constant(c) => write!(f, "constant({c})"),
            TimeFn::Linear(a) => write!(f, "linear({a})"),
            TimeFn::Quadratic(a) => write!(f, "quadratic({a})"),
            TimeFn::Sine {
                amplitude,
                frequency,
            } => write!(f, "sine({amplitude},{frequency})"),
            TimeFn::Custom(c) => write!(f, "{}", c.label),
        }
    }
}

impl fmt::Debug for TimeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TimeFn({self})")
    }
}

impl FromStr for TimeFn {
    type Err = Error;

    /// `constant(c)`, `linear(a)`, `quadratic(a)` or `sine(a,b)`.
    fn from_str(s: &str) -> Result<TimeFn> {
        let bad = || Error::InvalidParameter(format!("time function `{s}`"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let name = &s[..open];
        let args: Vec<f64> = s[open + 1..s.len() - 1]
            .split(',')
            .map(|a| a.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (name, args.as_slice()) {
            ("constant" | "const", [c]) => Ok(TimeFn::Constant(*c)),
            ("linear", [a]) => Ok(TimeFn::Linear(*a)),
            ("quadratic", [a]) => Ok(TimeFn::Quadratic(*a)),
            ("sine" | "sin", [a, b]) => Ok(TimeFn::Sine {
                amplitude: *a,
                frequency: *b,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// G1: (x, y, t) ↦ (x e^(ε/2), y e^(ε/2), t e^ε)
    Scaling,
    /// G2: t ↦ t + ε
    TimeTranslation,
    /// G3: rotation by angle εt plus the stretch term ε(x²+y²)/2 on ψ
    RotationStretch,
    /// G4: rotation by angle ε
    Rotation,
    /// G_α: x ↦ x + εα(t), ψ ↦ ψ + εα̇(t)y
    Alpha,
    /// G_β: y ↦ y + εβ(t), ψ ↦ ψ − εβ̇(t)x
    Beta,
    /// G_γ: ψ ↦ ψ + εγ(t)
    Gamma,
}

impl GroupKind {
    pub const ALL: [GroupKind; 7] = [
        GroupKind::Scaling,
        GroupKind::TimeTranslation,
        GroupKind::RotationStretch,
        GroupKind::Rotation,
        GroupKind::Alpha,
        GroupKind::Beta,
        GroupKind::Gamma,
    ];

    pub fn needs_time_fn(self) -> bool {
        matches!(self, GroupKind::Alpha | GroupKind::Beta | GroupKind::Gamma)
    }

    pub fn label(self) -> &'static str {
        match self {
            GroupKind::Scaling => "G1",
            GroupKind::TimeTranslation => "G2",
            GroupKind::RotationStretch => "G3",
            GroupKind::Rotation => "G4",
            GroupKind::Alpha => "Galpha",
            GroupKind::Beta => "Gbeta",
            GroupKind::Gamma => "Ggamma",
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<GroupKind> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "g1" | "scaling" => GroupKind::Scaling,
            "g2" | "time" | "time-translation" => GroupKind::TimeTranslation,
            "g3" | "rotation-stretch" => GroupKind::RotationStretch,
            "g4" | "rotation" => GroupKind::Rotation,
            "galpha" | "g_alpha" | "alpha" => GroupKind::Alpha,
            "gbeta" | "g_beta" | "beta" => GroupKind::Beta,
            "ggamma" | "g_gamma" | "gamma" => GroupKind::Gamma,
            _ => return Err(Error::InvalidParameter(format!("group kind `{s}`"))),
        })
    }
}

/// One element of one of the seven groups.
#[derive(Clone, Debug)]
pub struct GroupElement {
    kind: GroupKind,
    epsilon: f64,
    func: Option<TimeFn>,
}

impl GroupElement {
    pub fn new(kind: GroupKind, epsilon: f64, func: Option<TimeFn>) -> Result<Self> {
        if !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("epsilon = {epsilon}")));
        }
        if kind.needs_time_fn() != func.is_some() {
            return Err(Error::InvalidParameter(format!(
                "{} {} a time function",
                kind.label(),
                if kind.needs_time_fn() {
                    "requires"
                } else {
                    "does not take"
                }
            )));
        }
        Ok(GroupElement {
            kind,
            epsilon,
            func,
        })
    }

    pub fn scaling(epsilon: f64) -> Self {
        Self::plain(GroupKind::Scaling, epsilon)
    }
    pub fn time_translation(epsilon: f64) -> Self {
        Self::plain(GroupKind::TimeTranslation, epsilon)
    }
    pub fn rotation_stretch(epsilon: f64) -> Self {
        Self::plain(GroupKind::RotationStretch, epsilon)
    }
    pub fn rotation(epsilon: f64) -> Self {
        Self::plain(GroupKind::Rotation, epsilon)
    }
    pub fn alpha(epsilon: f64, f: TimeFn) -> Self {
        GroupElement {
            kind: GroupKind::Alpha,
            epsilon,
            func: Some(f),
        }
    }
    pub fn beta(epsilon: f64, f: TimeFn) -> Self {
        GroupElement {
            kind: GroupKind::Beta,
            epsilon,
            func: Some(f),
        }
    }
    pub fn gamma(epsilon: f64, f: TimeFn) -> Self {
        GroupElement {
            kind: GroupKind::Gamma,
            epsilon,
            func: Some(f),
        }
    }

    fn plain(kind: GroupKind, epsilon: f64) -> Self {
        GroupElement {
            kind,
            epsilon,
            func: None,
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn time_fn(&self) -> Option<&TimeFn> {
        self.func.as_ref()
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        GroupElement {
            epsilon,
            ..self.clone()
        }
    }

    pub fn inverse(&self) -> Self {
        self.with_epsilon(-self.epsilon)
    }

    /// Whether `other` belongs to the same one-parameter group.
    pub fn same_group(&self, other: &GroupElement) -> bool {
        self.kind == other.kind
            && match (&self.func, &other.func) {
                (None, None) => true,
                (Some(a), Some(b)) => a.same_as(b),
                _ => false,
            }
    }

    fn tf(&self) -> &TimeFn {
        self.func
            .as_ref()
            .expect("time function present for G_alpha/G_beta/G_gamma")
    }

    fn angle(&self, t: f64) -> f64 {
        match self.kind {
            GroupKind::RotationStretch => self.epsilon * t,
            GroupKind::Rotation => self.epsilon,
            _ => 0.0,
        }
    }

    /// The group action on a point of `(x, y, t, ψ)` space.
    pub fn forward(&self, x: f64, y: f64, t: f64, psi: f64) -> (f64, f64, f64, f64) {
        let e = self.epsilon;
        match self.kind {
            GroupKind::Scaling => {
                let s = (0.5 * e).exp();
                (x * s, y * s, t * s * s, psi)
            }
            GroupKind::TimeTranslation => (x, y, t + e, psi),
            GroupKind::RotationStretch | GroupKind::Rotation => {
                let (sn, cs) = self.angle(t).sin_cos();
                let stretch = if self.kind == GroupKind::RotationStretch {
                    0.5 * e * (x * x + y * y)
                } else {
                    0.0
                };
                (x * cs + y * sn, -x * sn + y * cs, t, psi + stretch)
            }
            GroupKind::Alpha => {
                let f = self.tf();
                (x + e * f.value(t), y, t, psi + e * f.derivative(t) * y)
            }
            GroupKind::Beta => {
                let f = self.tf();
                (x, y + e * f.value(t), t, psi - e * f.derivative(t) * x)
            }
            GroupKind::Gamma => (x, y, t, psi + e * self.tf().value(t)),
        }
    }

    /// Coordinates at which the seed is evaluated to produce the transformed
    /// solution at `(x, y, t)`.
    pub fn pullback(&self, x: f64, y: f64, t: f64) -> (f64, f64, f64) {
        let e = self.epsilon;
        match self.kind {
            GroupKind::Scaling => {
                let s = (-0.5 * e).exp();
                (x * s, y * s, t * s * s)
            }
            GroupKind::TimeTranslation => (x, y, t - e),
            GroupKind::RotationStretch | GroupKind::Rotation => {
                let (sn, cs) = self.angle(t).sin_cos();
                (x * cs - y * sn, x * sn + y * cs, t)
            }
            GroupKind::Alpha => (x - e * self.tf().value(t), y, t),
            GroupKind::Beta => (x, y - e * self.tf().value(t), t),
            GroupKind::Gamma => (x, y, t),
        }
    }

    /// Term added to the pulled-back seed value.
    pub fn additive(&self, x: f64, y: f64, t: f64) -> f64 {
        let e = self.epsilon;
        match self.kind {
            GroupKind::RotationStretch => 0.5 * e * (x * x + y * y),
            GroupKind::Alpha => e * self.tf().derivative(t) * y,
            GroupKind::Beta => -e * self.tf().derivative(t) * x,
            GroupKind::Gamma => e * self.tf().value(t),
            _ => 0.0,
        }
    }

    /// Velocity of the transformed solution at `(x, y, t)` given the seed
    /// velocity at the pulled-back point.
    pub fn push_velocity(&self, x: f64, y: f64, t: f64, seed: VelocitySample) -> VelocitySample {
        let e = self.epsilon;
        let VelocitySample { u, v } = seed;
        match self.kind {
            GroupKind::Scaling => {
                let s = (-0.5 * e).exp();
                VelocitySample::new(s * u, s * v)
            }
            GroupKind::TimeTranslation | GroupKind::Gamma => seed,
            GroupKind::RotationStretch | GroupKind::Rotation => {
                let (sn, cs) = self.angle(t).sin_cos();
                let a = if self.kind == GroupKind::RotationStretch {
                    e
                } else {
                    0.0
                };
                VelocitySample::new(u * cs + v * sn + a * y, v * cs - u * sn - a * x)
            }
            GroupKind::Alpha => VelocitySample::new(u + e * self.tf().derivative(t), v),
            GroupKind::Beta => VelocitySample::new(u, v + e * self.tf().derivative(t)),
        }
    }

    /// Factor converting seed-frame distances into distances in the
    /// transformed frame.
    pub(crate) fn clearance_scale(&self) -> f64 {
        match self.kind {
            GroupKind::Scaling => (0.5 * self.epsilon).exp(),
            _ => 1.0,
        }
    }

    /// The generator of this group as an instance of the general
    /// infinitesimals.
    pub fn infinitesimals(&self) -> Infinitesimals {
        let mut inf = Infinitesimals::default();
        match self.kind {
            GroupKind::Scaling => inf.c1 = 1.0,
            GroupKind::TimeTranslation => inf.c2 = 1.0,
            GroupKind::RotationStretch => inf.c3 = 1.0,
            GroupKind::Rotation => inf.c4 = 1.0,
            GroupKind::Alpha => inf.alpha = self.func.clone(),
            GroupKind::Beta => inf.beta = self.func.clone(),
            GroupKind::Gamma => inf.gamma = self.func.clone(),
        }
        inf
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.func {
            Some(tf) => write!(f, "{}(eps={}, {})", self.kind.label(), self.epsilon, tf),
            None => write!(f, "{}(eps={})", self.kind.label(), self.epsilon),
        }
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    /// `KIND:EPS[:FN]`, e.g. `g3:0.1` or `alpha:0.5:sine(1,2)`.
    fn from_str(s: &str) -> Result<GroupElement> {
        let mut parts = s.splitn(3, ':');
        let kind: GroupKind = parts.next().unwrap_or_default().parse()?;
        let eps: f64 = parts
            .next()
            .ok_or_else(|| Error::InvalidParameter(format!("group `{s}` lacks epsilon")))?
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("group `{s}`: bad epsilon")))?;
        let func = parts.next().map(str::parse::<TimeFn>).transpose()?;
        GroupElement::new(kind, eps, func)
    }
}

/// The general infinitesimal generator
///
/// ξ₁ = ½C₁x + C₃yt + C₄y + α(t)
/// ξ₂ = ½C₁y − C₃xt − C₄x + β(t)
/// ξ₃ = C₁t + C₂                      (time component)
/// η  = ½C₃(x²+y²) + yα̇ − xβ̇ + γ(t)
#[derive(Clone, Debug, Default)]
pub struct Infinitesimals {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub alpha: Option<TimeFn>,
    pub beta: Option<TimeFn>,
    pub gamma: Option<TimeFn>,
}

impl Infinitesimals {
    /// `[ξ₁, ξ₂, ξ₃, η]` at `(x, y, t)`.
    pub fn at(&self, x: f64, y: f64, t: f64) -> [f64; 4] {
        let val = |f: &Option<TimeFn>| f.as_ref().map_or(0.0, |f| f.value(t));
        let der = |f: &Option<TimeFn>| f.as_ref().map_or(0.0, |f| f.derivative(t));
        [
            0.5 * self.c1 * x + self.c3 * y * t + self.c4 * y + val(&self.alpha),
            0.5 * self.c1 * y - self.c3 * x * t - self.c4 * x + val(&self.beta),
            self.c1 * t + self.c2,
            0.5 * self.c3 * (x * x + y * y) + y * der(&self.alpha) - x * der(&self.beta)
                + val(&self.gamma),
        ]
    }
}

/// The solution obtained by transforming `s` with `g`.
pub fn apply_group(g: &GroupElement, s: &StreamSolution) -> StreamSolution {
    s.transformed(g.clone())
}

/// Applies `outer` on top of an already transformed solution.
pub fn compose(outer: &GroupElement, inner: &StreamSolution) -> StreamSolution {
    apply_group(outer, inner)
}

/// Maximum deviation between the ε-derivative of the group action at ε = 0
/// and the matching infinitesimals at `at`.
pub fn infinitesimal_consistency(g: &GroupElement, at: (f64, f64, f64)) -> f64 {
    let (x, y, t) = at;
    let deltas = [1e-3, 2e-3, 4e-3];
    let mut est = [[0.0; 3]; 4];
    for (l, &d) in deltas.iter().enumerate() {
        let p = g.with_epsilon(d).forward(x, y, t, 0.0);
        let m = g.with_epsilon(-d).forward(x, y, t, 0.0);
        let dp = [p.0 - m.0, p.1 - m.1, p.2 - m.2, p.3 - m.3];
        for c in 0..4 {
            est[c][l] = dp[c] / (2.0 * d);
        }
    }
    let want = g.infinitesimals().at(x, y, t);
    (0..4)
        .map(|c| (richardson(&est[c], 2.0, 2) - want[c]).abs())
        .fold(0.0, f64::max)
}

/// Default group parameter used by the named symmetry presets.
pub const PRESET_EPSILON: f64 = 0.1;

/// The five displayed symmetry solutions: G3(ε = 0.1) applied to the
/// general traveling wave, cosine, log, tanh and Oseen seeds.
pub fn named_symmetry_presets() -> Vec<(&'static str, StreamSolution)> {
    crate::presets::SYMMETRY_PRESETS
        .iter()
        .map(|&name| {
            let s = crate::presets::preset(name, &Default::default())
                .expect("built-in preset constructs");
            (name, s)
        })
        .collect()
}
