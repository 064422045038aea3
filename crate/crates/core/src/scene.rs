//! Scene files: a vierbein and optional gauge parameters given as
//! expressions, plus sampling and tolerance settings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::parse_expression;
use crate::field::{Point, ScalarField};
use crate::frame::Vierbein;

/// Built-in scenes as `(name, TOML source)`.
pub const BUILTIN: [(&str, &str); 5] = [
    ("flat", include_str!("../scenes/flat.toml")),
    ("conformally-flat", include_str!("../scenes/conformally-flat.toml")),
    ("exp-conformal", include_str!("../scenes/exp-conformal.toml")),
    ("bumpy", include_str!("../scenes/bumpy.toml")),
    ("bumpy+f", include_str!("../scenes/bumpy+f.toml")),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleBox {
    pub low: f64,
    pub high: f64,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox { low: -0.5, high: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Identities that hold exactly up to rounding.
    #[serde(default = "default_identity_tol")]
    pub identity: f64,
    /// Comparisons against finite-difference oracles.
    #[serde(default = "default_oracle_tol")]
    pub oracle: f64,
}

fn default_identity_tol() -> f64 {
    1e-8
}

fn default_oracle_tol() -> f64 {
    1e-6
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: default_identity_tol(),
            oracle: default_oracle_tol(),
        }
    }
}

fn default_points() -> usize {
    20
}

fn default_seed() -> u64 {
    42
}

fn default_order() -> usize {
    4
}

/// The on-disk scene description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub name: String,
    /// `eᵃ_μ`, row `a`, column `μ`.
    pub vierbein: [[String; 4]; 4],
    /// Weyl rescaling factor.
    pub z: Option<String>,
    /// Infinitesimal Weyl parameter (BRST ghost coefficient).
    pub eps: Option<String>,
    /// Conformal boost covector `rₐ`.
    pub r: Option<[String; 4]>,
    /// Coefficients of `log S̄` in the basis `σ₁/2, σ₂/2, σ₃/2, iσ₁/2, iσ₂/2, iσ₃/2`.
    pub sbar: Option<[String; 6]>,
    /// 2-form components `f_01, f_02, f_03, f_12, f_13, f_23`.
    pub f: Option<[String; 6]>,
    #[serde(default)]
    pub sample: SampleBox,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub tolerance: Tolerances,
    pub expect_conformally_flat: Option<bool>,
}

impl SceneFile {
    pub fn from_toml(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::Scene(e.to_string()))
    }

    pub fn builtin(name: &str) -> Option<Self> {
        BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, src)| SceneFile::from_toml(src).expect("built-in scenes parse"))
    }
}

/// A parsed and validated scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub file: SceneFile,
    pub vierbein: Vierbein,
    pub z: Option<ScalarField>,
    pub eps: Option<ScalarField>,
    pub r: Option<[ScalarField; 4]>,
    pub sbar: Option<[ScalarField; 6]>,
    pub f: Option<[ScalarField; 6]>,
}

fn parse_array<const N: usize>(src: &[String; N]) -> Result<[ScalarField; N]> {
    let v = src
        .iter()
        .map(|s| parse_expression(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(v.try_into().expect("length N"))
}

impl Scene {
    /// Parses every expression and validates the scene on its sample points.
    pub fn compile(file: SceneFile) -> Result<Self> {
        if file.points == 0 {
            return Err(Error::Scene("points must be positive".into()));
        }
        if file.order < 2 || file.order > crate::jet::MAX_ORDER {
            return Err(Error::Scene(format!(
                "order must lie in 2..={}",
                crate::jet::MAX_ORDER
            )));
        }
        if !(file.sample.low < file.sample.high) {
            return Err(Error::Scene("sample box must satisfy low < high".into()));
        }
        let rows = file
            .vierbein
            .iter()
            .map(parse_array)
            .collect::<Result<Vec<_>>>()?;
        let vierbein = Vierbein {
            e: rows.try_into().expect("four rows"),
        };
        let scene = Scene {
            z: file.z.as_deref().map(parse_expression).transpose()?,
            eps: file.eps.as_deref().map(parse_expression).transpose()?,
            r: file.r.as_ref().map(parse_array).transpose()?,
            sbar: file.sbar.as_ref().map(parse_array).transpose()?,
            f: file.f.as_ref().map(parse_array).transpose()?,
            vierbein,
            file,
        };
        scene.validate()?;
        Ok(scene)
    }

    pub fn builtin(name: &str) -> Option<Self> {
        SceneFile::builtin(name).map(|f| Scene::compile(f).expect("built-in scenes validate"))
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    /// Seeded sample points on a 1/1024 grid inside the sample box.
    pub fn points(&self) -> Vec<Point> {
        sample_points(self.file.seed, self.file.points, &self.file.sample)
    }

    fn validate(&self) -> Result<()> {
        for p in self.points() {
            self.vierbein.at(&p, 0)?;
            if let Some(z) = &self.z {
                if z.jet(&p, 0)?.value().re <= 0.0 {
                    return Err(Error::DomainAt { func: "z", point: p });
                }
            }
            for f in self
                .eps
                .iter()
                .chain(self.r.iter().flatten())
                .chain(self.sbar.iter().flatten())
                .chain(self.f.iter().flatten())
            {
                f.jet(&p, 0)?;
            }
        }
        Ok(())
    }
}

pub fn sample_points(seed: u64, n: usize, sample: &SampleBox) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            std::array::from_fn(|_| {
                let u: f64 = rng.gen_range(sample.low..sample.high);
                (u * 1024.0).round() / 1024.0
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_compile() {
        for (name, _) in BUILTIN {
            let s = Scene::builtin(name).unwrap();
            assert_eq!(s.name(), name);
            assert_eq!(s.points().len(), 20);
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let src = format!("{}\nbogus = 1\n", BUILTIN[0].1);
        assert!(matches!(SceneFile::from_toml(&src), Err(Error::Scene(_))));
    }

    #[test]
    fn degenerate_vierbein_rejected() {
        let mut f = SceneFile::builtin("flat").unwrap();
        f.vierbein[2][2] = "0".into();
        assert_eq!(Scene::compile(f).unwrap_err(), Error::DegenerateFrame);
    }

    #[test]
    fn nonpositive_z_rejected() {
        let mut f = SceneFile::builtin("flat").unwrap();
        f.z = Some("x0".into());
        assert!(matches!(Scene::compile(f), Err(Error::DomainAt { func: "z", .. })));
    }

    #[test]
    fn points_are_deterministic() {
        let b = SampleBox::default();
        assert_eq!(sample_points(7, 5, &b), sample_points(7, 5, &b));
        assert!(sample_points(7, 50, &b).iter().flatten().all(|x| x.abs() <= 0.5));
    }
}
