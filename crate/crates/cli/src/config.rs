use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fbcsf_core::chord_arc::{ComparisonFunction, PhiKind};
use fbcsf_core::curve::DiscreteCurve;
use fbcsf_core::flow::FlowConfig;
use fbcsf_core::verification::BarrierCheckConfig;
use fbcsf_core::{initial, ConvexDomain, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const OUTPUT_DIR_ENV: &str = "FBCSF_OUTPUT_DIR";

/// Errors in the configuration document itself (exit status 2).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    HalfPlane,
    Disk { radius: f64 },
    Ellipse { a: f64, b: f64 },
    /// Closed boundary polygon, either orientation.
    Sampled { points: Vec<[f64; 2]> },
}

impl DomainSpec {
    pub fn build(&self) -> fbcsf_core::Result<ConvexDomain> {
        match self {
            DomainSpec::HalfPlane => Ok(ConvexDomain::half_plane()),
            DomainSpec::Disk { radius } => ConvexDomain::disk(*radius),
            DomainSpec::Ellipse { a, b } => ConvexDomain::ellipse(*a, *b),
            DomainSpec::Sampled { points } => ConvexDomain::sampled(points.iter().map(|&p| Point::from_f64(p)).collect()),
        }
    }
}

fn default_interior() -> usize {
    200
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    /// Explicit vertex list; the endpoints must already lie on the boundary.
    Vertices { points: Vec<[f64; 2]> },
    /// Half-plane only.
    Semicircle {
        center_x: f64,
        radius: f64,
        #[serde(default = "default_interior")]
        interior_vertices: usize,
    },
    Chord {
        s_left: f64,
        s_right: f64,
        #[serde(default = "default_interior")]
        interior_vertices: usize,
    },
    /// Arc cutting off the boundary between `center ± half_width` (boundary arclength).
    BoundaryArc {
        center: f64,
        half_width: f64,
        #[serde(default = "default_interior")]
        interior_vertices: usize,
    },
    /// Chord displaced along its normal by `amplitude · sin(frequency · π t)`.
    PerturbedChord {
        s_left: f64,
        s_right: f64,
        amplitude: f64,
        #[serde(default = "one")]
        frequency: f64,
        #[serde(default = "default_interior")]
        interior_vertices: usize,
    },
    /// Chord displaced by `Σ_k a_k sin(k π t)` with `a_k` drawn uniformly from
    /// `[-amplitude/k², amplitude/k²]` using the experiment seed.
    RandomChord {
        s_left: f64,
        s_right: f64,
        amplitude: f64,
        modes: usize,
        #[serde(default = "default_interior")]
        interior_vertices: usize,
    },
}

fn one() -> f64 {
    1.0
}

impl InitialSpec {
    pub fn build(&self, domain: &ConvexDomain, seed: u64) -> fbcsf_core::Result<DiscreteCurve<f64>> {
        use std::f64::consts::PI;
        match self {
            InitialSpec::Vertices { points } => {
                DiscreteCurve::new(domain, points.iter().map(|&p| Point::from_f64(p)).collect())
            }
            InitialSpec::Semicircle { center_x, radius, interior_vertices } => {
                initial::semicircle(domain, *center_x, *radius, *interior_vertices)
            }
            InitialSpec::Chord { s_left, s_right, interior_vertices } => {
                initial::chord(domain, *s_left, *s_right, *interior_vertices)
            }
            InitialSpec::BoundaryArc { center, half_width, interior_vertices } => {
                initial::boundary_arc(domain, *center, *half_width, *interior_vertices)
            }
            InitialSpec::PerturbedChord { s_left, s_right, amplitude, frequency, interior_vertices } => {
                initial::perturbed_chord(domain, *s_left, *s_right, *interior_vertices, |t| {
                    amplitude * (frequency * PI * t).sin()
                })
            }
            InitialSpec::RandomChord { s_left, s_right, amplitude, modes, interior_vertices } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let coeffs: Vec<f64> = (1..=*modes)
                    .map(|k| {
                        let bound = amplitude / (k * k) as f64;
                        rng.gen_range(-bound..=bound)
                    })
                    .collect();
                initial::perturbed_chord(domain, *s_left, *s_right, *interior_vertices, |t| {
                    coeffs.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * PI * t).sin()).sum()
                })
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    Barrier { c: f64, epsilon: f64 },
    ScaledSine { c: f64, tau: f64 },
    Custom { values: Vec<f64> },
}

impl PhiSpec {
    pub fn build(&self) -> fbcsf_core::Result<ComparisonFunction<f64>> {
        ComparisonFunction::new(match self {
            PhiSpec::Barrier { c, epsilon } => PhiKind::Barrier { c: *c, epsilon: *epsilon },
            PhiSpec::ScaledSine { c, tau } => PhiKind::ScaledSine { c: *c, tau: *tau },
            PhiSpec::Custom { values } => PhiKind::Custom { values: values.clone() },
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChecksConfig {
    pub grayson: bool,
    pub monotonicity: bool,
    pub neumann: bool,
    pub crude_bound: bool,
    /// Upper bound for `max κ² (T - t)`.
    pub type_one: Option<f64>,
    /// Factor applied to the initial `min 𝒅/𝒍`.
    pub boundary_avoidance: Option<f64>,
    /// Relative tolerance of the finite-difference check.
    pub altschuler: Option<f64>,
    pub barrier: Option<BarrierCheckConfig<f64>>,
}

impl Default for ChecksConfig {
    fn default() -> Self {
        Self {
            grayson: true,
            monotonicity: true,
            neumann: false,
            crude_bound: false,
            type_one: None,
            boundary_avoidance: None,
            altschuler: None,
            barrier: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    /// Write profiles of the initial and final curve.
    pub enabled: bool,
    pub bins: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self { enabled: true, bins: 64 }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvgConfig {
    /// Number of evenly spaced snapshots to draw; 0 disables SVG output.
    pub frames: usize,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub initial: InitialSpec,
    #[serde(default)]
    pub flow: FlowConfig<f64>,
    #[serde(default)]
    pub phi: Option<PhiSpec>,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub profile: ProfileConfig,
    #[serde(default)]
    pub svg: SvgConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn example() -> Self {
        Self {
            domain: DomainSpec::Disk { radius: 1.0 },
            initial: InitialSpec::BoundaryArc { center: std::f64::consts::FRAC_PI_2, half_width: 0.5, interior_vertices: 200 },
            flow: FlowConfig::default(),
            phi: None,
            checks: ChecksConfig::default(),
            profile: ProfileConfig::default(),
            svg: SvgConfig::default(),
            output_dir: default_output_dir(),
            seed: 0,
        }
    }

    /// Everything the run needs, built and validated.
    pub fn build(&self) -> Result<Built> {
        let domain = self.domain.build().map_err(|e| ConfigError(format!("domain: {e}")))?;
        let curve = self.initial.build(&domain, self.seed).map_err(|e| ConfigError(format!("initial: {e}")))?;
        self.flow.validate().map_err(|e| ConfigError(e.to_string()))?;
        let phi = match &self.phi {
            Some(p) => Some(p.build().map_err(|e| ConfigError(format!("phi: {e}")))?),
            None => None,
        };
        if let Some(b) = &self.checks.barrier {
            b.validate().map_err(|e| ConfigError(format!("checks.barrier: {e}")))?;
        }
        if self.profile.enabled && self.profile.bins < 16 {
            bail!(ConfigError(format!("profile.bins must be at least 16, got {}", self.profile.bins)));
        }
        Ok(Built { domain, curve, phi })
    }

    pub fn output_dir(&self) -> PathBuf {
        std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| self.output_dir.clone())
    }
}

pub struct Built {
    pub domain: ConvexDomain,
    pub curve: DiscreteCurve<f64>,
    pub phi: Option<ComparisonFunction<f64>>,
}

/// Parses JSON, reporting the field path and position of the first error.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &Path) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let at = if path == "." { String::new() } else { format!(" at `{path}`") };
        ConfigError(format!("{}{at}: {inner}", origin.display())).into()
    })
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_json(&text, path)
}
