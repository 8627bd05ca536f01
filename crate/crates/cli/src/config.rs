//! Run configuration: a TOML file with fixed sections and a strict key
//! policy.
//!
//! ```toml
//! [grid]
//! n_points = 1024
//! length = 200.0
//!
//! [physics]
//! dipole = 1.0
//! detuning = 1000.0
//!
//! [evolution]
//! dt = 0.02
//! n_steps = 5000
//! ```
//!
//! Everything else has a default; the validated config records every
//! default it filled in, so serialising and reloading it is lossless.

use std::fmt;
use std::path::{Path, PathBuf};

use mbsim_core::{Complex64, PhysicalParams, Statistics};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, Result};
use crate::units::UnitScales;

pub const SCHEMA: &[(&str, &[&str])] = &[
    ("grid", &["n_points", "length"]),
    (
        "physics",
        &[
            "units",
            "dipole",
            "detuning",
            "gamma",
            "mass",
            "k_laser",
            "statistics",
        ],
    ),
    (
        "initial",
        &["kind", "center", "width", "norm", "k", "amplitude", "path"],
    ),
    ("illumination", &["mode", "left", "right", "amplitude"]),
    ("evolution", &["dt", "n_steps", "snapshot_stride"]),
    (
        "tolerances",
        &[
            "tol_scf",
            "max_iter",
            "sub_iterate",
            "eps_mossotti",
            "eps_detuning",
        ],
    ),
    ("diagnostics", &["saturation"]),
    ("output", &["directory", "formats"]),
];

const REQUIRED_SECTIONS: &[&str] = &["grid", "physics", "evolution"];

pub const DEFAULT_SNAPSHOT_STRIDE: u64 = 100;
pub const DEFAULT_SATURATION: f64 = 0.01;

/// Complex amplitude; accepts `1.5` or `[re, im]`, always written as
/// `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude(pub Complex64);

impl Serialize for Amplitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Real(f64),
            Int(i64),
            Pair([f64; 2]),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Real(re) => Amplitude(Complex64::new(re, 0.0)),
            Raw::Int(re) => Amplitude(Complex64::new(re as f64, 0.0)),
            Raw::Pair([re, im]) => Amplitude(Complex64::new(re, im)),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitSystem {
    /// `ħ = m = k_L = 1`.
    #[default]
    Recoil,
    /// SI inputs converted to recoil units at load time.
    Lab,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_points: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    #[serde(default)]
    pub units: UnitSystem,
    pub dipole: f64,
    pub detuning: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_laser: Option<f64>,
    #[serde(default = "default_statistics")]
    pub statistics: String,
}

fn default_statistics() -> String {
    "bose".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    #[default]
    Gaussian,
    PlaneWave,
    Soliton,
    File,
}

impl InitialKind {
    fn keys(self) -> &'static [&'static str] {
        match self {
            InitialKind::Gaussian => &["center", "width", "norm"],
            InitialKind::PlaneWave => &["k", "amplitude"],
            InitialKind::Soliton => &["center", "width"],
            InitialKind::File => &["path"],
        }
    }

    fn name(self) -> &'static str {
        match self {
            InitialKind::Gaussian => "gaussian",
            InitialKind::PlaneWave => "plane_wave",
            InitialKind::Soliton => "soliton",
            InitialKind::File => "file",
        }
    }
}

/// Initial matter field.
///
/// * `gaussian`: `√norm (2πw²)^{-1/4} exp(-(x-center)²/(4w²))`, density
///   standard deviation `width` (default `length/20`).
/// * `plane_wave`: `amplitude · e^{ikx}`; `k` must fit the periodic box.
/// * `soliton`: `√ρ₀ sech((x-center)/width)` with `ρ₀ = ħ²/(m g width²)`
///   and `g` the dilute cubic coefficient at the uniform illumination.
/// * `file`: `psi1` of an existing snapshot on the same grid.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default)]
    pub kind: InitialKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IlluminationMode {
    #[default]
    Scattering,
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IlluminationConfig {
    #[serde(default)]
    pub mode: IlluminationMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Amplitude>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Amplitude>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<Amplitude>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub n_steps: u64,
    #[serde(default = "default_stride")]
    pub snapshot_stride: u64,
}

fn default_stride() -> u64 {
    DEFAULT_SNAPSHOT_STRIDE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "default_tol")]
    pub tol_scf: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub sub_iterate: bool,
    #[serde(default = "default_eps_mossotti")]
    pub eps_mossotti: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_detuning: Option<f64>,
}

fn default_tol() -> f64 {
    1e-12
}

fn default_max_iter() -> usize {
    8
}

fn default_eps_mossotti() -> f64 {
    mbsim_core::optics::MOSSOTTI_EPSILON
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tol_scf: default_tol(),
            max_iter: default_max_iter(),
            sub_iterate: false,
            eps_mossotti: default_eps_mossotti(),
            eps_detuning: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default = "default_saturation")]
    pub saturation: f64,
}

fn default_saturation() -> f64 {
    DEFAULT_SATURATION
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            saturation: DEFAULT_SATURATION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_directory() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<String> {
    vec!["binary".into()]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: default_directory(),
            formats: default_formats(),
        }
    }
}

impl OutputConfig {
    pub fn binary(&self) -> bool {
        self.formats.iter().any(|f| f == "binary")
    }

    pub fn text(&self) -> bool {
        self.formats.iter().any(|f| f == "text")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub physics: PhysicsConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub illumination: IlluminationConfig,
    pub evolution: EvolutionConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml())
    }
}

fn nearest<'a>(key: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<String> {
    candidates
        .into_iter()
        .map(|c| (strsim::levenshtein(key, c), c))
        .filter(|(d, c)| *d <= 3.max(c.len() / 3))
        .min_by_key(|(d, _)| *d)
        .map(|(_, c)| c.to_string())
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Rejects sections and keys outside the schema, suggesting the closest
/// known name.
fn check_keys(table: &toml::Table) -> Result<()> {
    for (section, value) in table {
        let Some((_, keys)) = SCHEMA.iter().find(|(s, _)| s == section) else {
            return Err(CliError::UnknownKey {
                key: section.clone(),
                suggestion: nearest(section, SCHEMA.iter().map(|(s, _)| *s)),
            });
        };
        let toml::Value::Table(inner) = value else {
            return Err(CliError::invalid(section.clone(), "expected a [section]"));
        };
        for key in inner.keys() {
            if !keys.contains(&key.as_str()) {
                let all = SCHEMA.iter().flat_map(|(_, k)| k.iter().copied());
                let suggestion = nearest(key, keys.iter().copied()).or_else(|| nearest(key, all));
                return Err(CliError::UnknownKey {
                    key: format!("{section}.{key}"),
                    suggestion,
                });
            }
        }
    }
    for required in REQUIRED_SECTIONS {
        if !table.contains_key(*required) {
            return Err(CliError::invalid(*required, "missing required section"));
        }
    }
    Ok(())
}

/// Parses and validates a config from TOML text. `origin` is used in
/// messages and to resolve relative `initial.path` entries.
pub fn parse_config(text: &str, origin: &Path) -> Result<RunConfig> {
    let table: toml::Table = toml::from_str(text).map_err(|e| CliError::Parse {
        path: origin.display().to_string(),
        line: e.span().map_or(1, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    check_keys(&table)?;
    let config: RunConfig =
        RunConfig::deserialize(toml::Value::Table(table)).map_err(|e| CliError::Parse {
            path: origin.display().to_string(),
            line: 1,
            message: e.message().to_string(),
        })?;
    let base = origin.parent().unwrap_or(Path::new("."));
    config.validated(base)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text, path)
}

fn finite(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::invalid(field, format!("must be finite, got {v}")))
    }
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if finite(field, v)? > 0.0 {
        Ok(v)
    } else {
        Err(CliError::invalid(field, format!("must be > 0, got {v}")))
    }
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Fills context-dependent defaults and checks every invariant.
    pub fn validated(mut self, base: &Path) -> Result<Self> {
        let g = &self.grid;
        if g.n_points < 8 || !g.n_points.is_power_of_two() {
            return Err(CliError::invalid(
                "n_points",
                format!("must be a power of two >= 8, got {}", g.n_points),
            ));
        }
        positive("length", g.length)?;

        let p = &mut self.physics;
        finite("dipole", p.dipole)?;
        finite("detuning", p.detuning)?;
        if finite("gamma", p.gamma)? < 0.0 {
            return Err(CliError::invalid("gamma", "must be >= 0"));
        }
        if p.detuning == 0.0 {
            return Err(CliError::invalid(
                "detuning",
                "must be non-zero (adiabatic elimination is singular at Δ = 0)",
            ));
        }
        match p.units {
            UnitSystem::Recoil => {
                p.mass.get_or_insert(1.0);
                p.k_laser.get_or_insert(1.0);
            }
            UnitSystem::Lab => {
                if p.mass.is_none() {
                    return Err(CliError::invalid("mass", "required when units = \"lab\""));
                }
                if p.k_laser.is_none() {
                    return Err(CliError::invalid(
                        "k_laser",
                        "required when units = \"lab\"",
                    ));
                }
            }
        }
        positive("mass", p.mass.unwrap_or_default())?;
        positive("k_laser", p.k_laser.unwrap_or_default())?;
        p.statistics
            .parse::<Statistics>()
            .map_err(|e| CliError::invalid("statistics", e.to_string()))?;
        p.statistics = p.statistics.to_ascii_lowercase();

        self.validate_initial(base)?;
        self.validate_illumination()?;

        let e = &self.evolution;
        positive("dt", e.dt)?;
        if e.n_steps == 0 {
            return Err(CliError::invalid("n_steps", "must be >= 1"));
        }
        if e.snapshot_stride == 0 {
            return Err(CliError::invalid("snapshot_stride", "must be >= 1"));
        }

        let t = &self.tolerances;
        positive("tol_scf", t.tol_scf)?;
        if t.max_iter == 0 {
            return Err(CliError::invalid("max_iter", "must be >= 1"));
        }
        if finite("eps_mossotti", t.eps_mossotti)? < 0.0 {
            return Err(CliError::invalid("eps_mossotti", "must be >= 0"));
        }
        if let Some(eps) = t.eps_detuning {
            if finite("eps_detuning", eps)? < 0.0 {
                return Err(CliError::invalid("eps_detuning", "must be >= 0"));
            }
        }
        let s = finite("saturation", self.diagnostics.saturation)?;
        if s < 0.0 {
            return Err(CliError::invalid("saturation", "must be >= 0"));
        }
        if self.output.formats.is_empty() {
            return Err(CliError::invalid(
                "formats",
                "at least one of \"binary\", \"text\"",
            ));
        }
        for f in &self.output.formats {
            if f != "binary" && f != "text" {
                return Err(CliError::invalid(
                    "formats",
                    format!("unknown format {f:?}; expected \"binary\" or \"text\""),
                ));
            }
        }
        // the physics must also pass the core invariants after conversion
        self.recoil_params()?;
        Ok(self)
    }

    fn validate_initial(&mut self, base: &Path) -> Result<()> {
        let length = self.grid.length;
        let init = &mut self.initial;
        let allowed = init.kind.keys();
        let present = [
            ("center", init.center.is_some()),
            ("width", init.width.is_some()),
            ("norm", init.norm.is_some()),
            ("k", init.k.is_some()),
            ("amplitude", init.amplitude.is_some()),
            ("path", init.path.is_some()),
        ];
        for (key, set) in present {
            if set && !allowed.contains(&key) {
                return Err(CliError::invalid(
                    key,
                    format!("not used by initial kind \"{}\"", init.kind.name()),
                ));
            }
        }
        match init.kind {
            InitialKind::Gaussian => {
                finite("center", *init.center.get_or_insert(0.0))?;
                positive("width", *init.width.get_or_insert(length / 20.0))?;
                if finite("norm", *init.norm.get_or_insert(1.0))? < 0.0 {
                    return Err(CliError::invalid("norm", "must be >= 0"));
                }
            }
            InitialKind::Soliton => {
                finite("center", *init.center.get_or_insert(0.0))?;
                match init.width {
                    Some(w) => positive("width", w)?,
                    None => return Err(CliError::invalid("width", "required for a soliton")),
                };
            }
            InitialKind::PlaneWave => {
                let k = match init.k {
                    Some(k) => finite("k", k)?,
                    None => return Err(CliError::invalid("k", "required for a plane wave")),
                };
                let m = k * length / std::f64::consts::TAU;
                if (m - m.round()).abs() > 1e-9 * m.abs().max(1.0) {
                    return Err(CliError::invalid(
                        "k",
                        format!("k·length/2π = {m} must be an integer on the periodic box"),
                    ));
                }
                positive("amplitude", *init.amplitude.get_or_insert(1.0))?;
            }
            InitialKind::File => match &init.path {
                Some(p) if p.is_relative() => init.path = Some(base.join(p)),
                Some(_) => {}
                None => return Err(CliError::invalid("path", "required for kind \"file\"")),
            },
        }
        Ok(())
    }

    fn validate_illumination(&mut self) -> Result<()> {
        let ill = &mut self.illumination;
        let check = |field: &str, a: &Amplitude| -> Result<()> {
            finite(field, a.0.re)?;
            finite(field, a.0.im)?;
            Ok(())
        };
        match ill.mode {
            IlluminationMode::Scattering => {
                if ill.amplitude.is_some() {
                    return Err(CliError::invalid(
                        "amplitude",
                        "only used with mode = \"uniform\"; use left/right",
                    ));
                }
                check(
                    "left",
                    ill.left.get_or_insert(Amplitude(Complex64::new(1.0, 0.0))),
                )?;
                check(
                    "right",
                    ill.right.get_or_insert(Amplitude(Complex64::new(0.0, 0.0))),
                )?;
            }
            IlluminationMode::Uniform => {
                if ill.left.is_some() || ill.right.is_some() {
                    return Err(CliError::invalid(
                        "left",
                        "left/right are only used with mode = \"scattering\"",
                    ));
                }
                match &ill.amplitude {
                    Some(a) => check("amplitude", a)?,
                    None => {
                        return Err(CliError::invalid(
                            "amplitude",
                            "required when mode = \"uniform\"",
                        ))
                    }
                }
            }
        }
        if self.initial.kind == InitialKind::Soliton && ill.mode != IlluminationMode::Uniform {
            return Err(CliError::invalid(
                "kind",
                "a soliton initial state needs mode = \"uniform\" illumination",
            ));
        }
        Ok(())
    }

    pub fn unit_scales(&self) -> UnitScales {
        match self.physics.units {
            UnitSystem::Recoil => UnitScales::recoil(),
            UnitSystem::Lab => UnitScales::lab(
                self.physics.mass.unwrap_or(1.0),
                self.physics.k_laser.unwrap_or(1.0),
            ),
        }
    }

    /// Model parameters in internal (recoil) units.
    pub fn recoil_params(&self) -> Result<PhysicalParams> {
        let s = self.unit_scales();
        let p = &self.physics;
        let (mass, k_laser) = match p.units {
            // a recoil config may rescale m and k_L; ħ stays 1
            UnitSystem::Recoil => (p.mass.unwrap_or(1.0), p.k_laser.unwrap_or(1.0)),
            UnitSystem::Lab => (1.0, 1.0),
        };
        let params = PhysicalParams {
            dipole: p.dipole / s.dipole,
            detuning: p.detuning * s.time,
            gamma: p.gamma * s.time,
            mass,
            k_laser,
            hbar: 1.0,
            statistics: p
                .statistics
                .parse()
                .map_err(|e: mbsim_core::Error| CliError::invalid("statistics", e.to_string()))?,
        };
        params.validated().map_err(|e| match e {
            mbsim_core::Error::Config { field, reason } => CliError::invalid(field, reason),
            other => CliError::Physics(other),
        })
    }
}
