//! Named solutions, one per displayed equation, keyed `eqNN`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::catalog::{
    make_general_traveling, make_harmonic, make_harmonic_oriented, make_oseen_rankine,
    make_real_family, HarmonicKind, Orientation, RealKind, StreamSolution, WaveParams,
};
use crate::error::{Error, Result};
use crate::numeric::{Cplx, J};
use crate::symmetry::{GroupElement, PRESET_EPSILON};

/// Overrides for preset parameters. `None` keeps the preset default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PresetParams {
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub d0: Option<f64>,
    pub omega: Option<f64>,
    pub re: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    pub c4: Option<f64>,
    pub a: Option<f64>,
    pub n: Option<f64>,
    pub epsilon: Option<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct PresetInfo {
    pub name: &'static str,
    pub summary: &'static str,
    /// Half-width of the default square plotting window.
    pub extent: f64,
    pub default_time: f64,
}

const TWO_PI: f64 = 2.0 * PI;

pub const PRESETS: &[PresetInfo] = &[
    PresetInfo { name: "eq10", summary: "general traveling wave C1 exp(-omega Re z/|k|^2) + C2 z^2 + C3 z + C4", extent: 3.0, default_time: 0.0 },
    PresetInfo { name: "eq13", summary: "harmonic power A (kx + jky + d0 - omega t)^n", extent: 3.0, default_time: 0.0 },
    PresetInfo { name: "eq28", summary: "Rankine (C2) + Lamb-Oseen (C3) vortex", extent: 3.0, default_time: 1.0 },
    PresetInfo { name: "eq30", summary: "traveling continuous wave cos(kx + jky + d0 - omega t)", extent: TWO_PI, default_time: 0.0 },
    PresetInfo { name: "eq33", summary: "cosine wave with x and y exchanged", extent: TWO_PI, default_time: 0.0 },
    PresetInfo { name: "eq35", summary: "moving free vortex ln(kx + jky + d0 - omega t)", extent: 3.0, default_time: 0.0 },
    PresetInfo { name: "eq37", summary: "traveling solitary wave tanh(kx + jky + d0 - omega t)", extent: 3.0, default_time: 0.0 },
    PresetInfo { name: "eq39a", summary: "exp(j(kx - omega t + d0) - ky)", extent: TWO_PI, default_time: 0.0 },
    PresetInfo { name: "eq39b", summary: "exp(j(ky - omega t + d0) - kx)", extent: TWO_PI, default_time: 0.0 },
    PresetInfo { name: "eq40a", summary: "real quadratic (k1 x + k2 y + d0 - omega t)^2", extent: 3.0, default_time: 0.0 },
    PresetInfo { name: "eq40b", summary: "real exponential exp(-omega Re (k1 x + k2 y + d0 - omega t)/|k|^2)", extent: 3.0, default_time: 0.0 },
    PresetInfo { name: "eq27", summary: "G3 applied to eq10", extent: 3.0, default_time: 0.0 },
    PresetInfo { name: "eq34", summary: "G3 applied to eq30", extent: TWO_PI, default_time: 0.0 },
    PresetInfo { name: "eq36", summary: "G3 applied to eq35", extent: 3.0, default_time: 0.0 },
    PresetInfo { name: "eq38", summary: "G3 applied to eq37", extent: 3.0, default_time: 0.0 },
    PresetInfo { name: "eq41", summary: "G3 applied to the Lamb-Oseen vortex eq28", extent: 3.0, default_time: 1.0 },
    PresetInfo { name: "uniform", summary: "uniform stream psi = y", extent: 3.0, default_time: 0.0 },
];

/// Seeds taken directly from the catalog.
pub const SEED_PRESETS: [&str; 10] = [
    "eq10", "eq13", "eq30", "eq35", "eq37", "eq39a", "eq39b", "eq40a", "eq40b", "eq28",
];

/// G3 images of the seeds.
pub const SYMMETRY_PRESETS: [&str; 5] = ["eq27", "eq34", "eq36", "eq38", "eq41"];

/// Smallest admissible time for the vortex presets.
pub const OSEEN_T_MIN: f64 = 1e-3;

pub fn preset_info(name: &str) -> Option<&'static PresetInfo> {
    PRESETS.iter().find(|p| p.name == name)
}

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|p| p.name)
}

fn wave(o: &PresetParams) -> WaveParams {
    let d = WaveParams::catalog_defaults();
    WaveParams {
        k1: o.k1.unwrap_or(d.k1),
        k2: o.k2.unwrap_or(d.k2),
        d0: o.d0.unwrap_or(d.d0),
        omega: o.omega.unwrap_or(d.omega),
        re_number: o.re.unwrap_or(d.re_number),
        c: d.c,
    }
}

fn harmonic(kind: HarmonicKind, o: &PresetParams, orientation: Orientation) -> Result<StreamSolution> {
    let a = Cplx::real(o.a.unwrap_or(1.0));
    make_harmonic_oriented(kind, a, o.n.unwrap_or(1.0), wave(o), orientation)
}

pub fn preset(name: &str, o: &PresetParams) -> Result<StreamSolution> {
    let g3 = || GroupElement::rotation_stretch(o.epsilon.unwrap_or(PRESET_EPSILON));
    match name {
        "eq10" => make_general_traveling(wave(o).with_constants(
            o.c1.unwrap_or(1.0),
            o.c2.unwrap_or(1.0),
            o.c3.unwrap_or(1.0),
            o.c4.unwrap_or(1.0),
        )),
        "eq13" => make_harmonic(
            HarmonicKind::Power,
            Cplx::real(o.a.unwrap_or(1.0)),
            o.n.unwrap_or(2.0),
            wave(o),
        ),
        "eq28" => make_oseen_rankine(
            o.c2.unwrap_or(0.0),
            o.c3.unwrap_or(1.0),
            o.re.unwrap_or(1.0),
            OSEEN_T_MIN,
        ),
        "eq30" => harmonic(HarmonicKind::Cosine, o, Orientation::AlongX),
        "eq33" => harmonic(HarmonicKind::Cosine, o, Orientation::AlongY),
        "eq35" => harmonic(HarmonicKind::Log, o, Orientation::AlongX),
        "eq37" => harmonic(HarmonicKind::Tanh, o, Orientation::AlongX),
        "eq39a" => harmonic(HarmonicKind::Exp, o, Orientation::AlongX),
        "eq39b" => harmonic(HarmonicKind::Exp, o, Orientation::AlongY),
        "eq40a" => make_real_family(RealKind::Quadratic, wave(o)),
        "eq40b" => make_real_family(RealKind::Exponential, wave(o)),
        "eq27" => Ok(preset("eq10", o)?.transformed(g3())),
        "eq34" => Ok(preset("eq30", o)?.transformed(g3())),
        "eq36" => Ok(preset("eq35", o)?.transformed(g3())),
        "eq38" => Ok(preset("eq37", o)?.transformed(g3())),
        "eq41" => Ok(preset("eq28", o)?.transformed(g3())),
        "uniform" => {
            // Re(−j·(kx + jky)) = ky with k = 1, steady
            let p = WaveParams {
                k1: 1.0,
                omega: 0.0,
                ..wave(o)
            };
            make_harmonic(HarmonicKind::Power, -J * o.a.unwrap_or(1.0), 1.0, p)
        }
        _ => Err(Error::InvalidParameter(format!(
            "unknown preset `{name}`; known presets: {}",
            preset_names().collect::<Vec<_>>().join(", ")
        ))),
    }
}
