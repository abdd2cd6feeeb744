use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::spring::{nmm_per_deg_to_si, si_to_nmm_per_deg};

/// Catalogue stiffness (N*mm/deg) for the three coil counts used on the
/// antenna: stiff base, medium middle, compliant tip.
pub const STIFF_NMM_PER_DEG: f64 = 0.274;
pub const MEDIUM_NMM_PER_DEG: f64 = 0.137;
pub const COMPLIANT_NMM_PER_DEG: f64 = 0.091;

/// Catalogue stiffness for a spring with `coils` active coils, in N*mm/deg.
/// Counts of 3, 6 and 9 return the tabulated values; other counts scale as
/// `1 / N_c` from the three-coil spring.
pub fn catalogue_stiffness_nmm_per_deg(coils: u32) -> Result<f64> {
    match coils {
        0 => Err(Error::InvalidSpec("active coil count must be >= 1".into())),
        3 => Ok(STIFF_NMM_PER_DEG),
        6 => Ok(MEDIUM_NMM_PER_DEG),
        9 => Ok(COMPLIANT_NMM_PER_DEG),
        n => Ok(STIFF_NMM_PER_DEG * 3.0 / f64::from(n)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    UniformStiff,
    UniformCompliant,
    Descending,
    Custom,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileKind::UniformStiff => "uniform_stiff",
            ProfileKind::UniformCompliant => "uniform_compliant",
            ProfileKind::Descending => "descending",
            ProfileKind::Custom => "custom",
        })
    }
}

/// Per-joint torsional stiffness (N*m/rad), base first.
#[derive(Debug, Clone, PartialEq)]
pub struct StiffnessProfile {
    joint_stiffness: Vec<f64>,
    kind: ProfileKind,
}

impl StiffnessProfile {
    pub fn new(joint_stiffness: Vec<f64>, kind: ProfileKind) -> Result<Self> {
        if joint_stiffness.is_empty() {
            return Err(Error::InvalidInput(
                "stiffness profile must have at least one joint".into(),
            ));
        }
        if let Some(bad) = joint_stiffness.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
            return Err(Error::InvalidInput(format!(
                "joint stiffness must be positive, got {bad}"
            )));
        }
        if kind == ProfileKind::Descending && joint_stiffness.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidInput(
                "descending profile must be non-increasing base to tip".into(),
            ));
        }
        Ok(StiffnessProfile { joint_stiffness, kind })
    }

    pub fn from_nmm_per_deg(values: &[f64], kind: ProfileKind) -> Result<Self> {
        Self::new(values.iter().map(|v| nmm_per_deg_to_si(*v)).collect(), kind)
    }

    pub fn from_coils(coils: &[u32], kind: ProfileKind) -> Result<Self> {
        let values = coils
            .iter()
            .map(|n| catalogue_stiffness_nmm_per_deg(*n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_nmm_per_deg(&values, kind)
    }

    pub fn uniform_stiff(joints: usize) -> Self {
        Self::from_nmm_per_deg(&vec![STIFF_NMM_PER_DEG; joints.max(1)], ProfileKind::UniformStiff)
            .expect("catalogue values are positive")
    }

    pub fn uniform_compliant(joints: usize) -> Self {
        Self::from_nmm_per_deg(
            &vec![COMPLIANT_NMM_PER_DEG; joints.max(1)],
            ProfileKind::UniformCompliant,
        )
        .expect("catalogue values are positive")
    }

    /// Stiffness from a diameter taper: `k_j = base_stiffness * (d_j / d_1)^4`.
    pub fn from_diameters(diameters: &DiameterProfile, base_stiffness: f64) -> Result<Self> {
        let k: Vec<f64> = normalized_stiffness(diameters)?
            .into_iter()
            .map(|r| r * base_stiffness)
            .collect();
        let kind = if k.windows(2).all(|w| w[1] <= w[0]) {
            ProfileKind::Descending
        } else {
            ProfileKind::Custom
        };
        Self::new(k, kind)
    }

    pub fn joint_stiffness(&self) -> &[f64] {
        &self.joint_stiffness
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.joint_stiffness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joint_stiffness.is_empty()
    }

    pub fn to_nmm_per_deg(&self) -> Vec<f64> {
        self.joint_stiffness.iter().map(|k| si_to_nmm_per_deg(*k)).collect()
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str::<ProfileFile>(text)?.into_profile()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        let file = ProfileFile {
            kind: self.kind,
            coils: None,
            stiffness_nmm_per_deg: Some(self.to_nmm_per_deg()),
        };
        Ok(toml::to_string(&file)?)
    }
}

/// On-disk form of a stiffness profile. Exactly one of `coils` or
/// `stiffness_nmm_per_deg` must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFile {
    pub kind: ProfileKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coils: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stiffness_nmm_per_deg: Option<Vec<f64>>,
}

impl ProfileFile {
    pub fn into_profile(self) -> Result<StiffnessProfile> {
        match (self.coils, self.stiffness_nmm_per_deg) {
            (Some(coils), None) => StiffnessProfile::from_coils(&coils, self.kind),
            (None, Some(values)) => StiffnessProfile::from_nmm_per_deg(&values, self.kind),
            _ => Err(Error::Config(
                "stiffness profile needs exactly one of `coils` or `stiffness_nmm_per_deg`".into(),
            )),
        }
    }
}

/// The six-spring antenna: one 3-coil spring at the base, two 6-coil
/// springs in the middle and three 9-coil springs at the tip.
pub fn paper_descending_profile() -> StiffnessProfile {
    StiffnessProfile::from_nmm_per_deg(
        &[
            STIFF_NMM_PER_DEG,
            MEDIUM_NMM_PER_DEG,
            MEDIUM_NMM_PER_DEG,
            COMPLIANT_NMM_PER_DEG,
            COMPLIANT_NMM_PER_DEG,
            COMPLIANT_NMM_PER_DEG,
        ],
        ProfileKind::Descending,
    )
    .expect("catalogue profile is valid")
}

/// Segment diameters (m) from proximal to distal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiameterProfile {
    diameters: Vec<f64>,
}

impl DiameterProfile {
    pub fn new(diameters: Vec<f64>) -> Result<Self> {
        if diameters.len() < 2 {
            return Err(Error::InvalidInput(
                "diameter profile needs at least two segments".into(),
            ));
        }
        if diameters.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return Err(Error::InvalidInput("diameters must be positive".into()));
        }
        Ok(DiameterProfile { diameters })
    }

    /// Linear taper between two end diameters.
    pub fn linear_taper(proximal: f64, distal: f64, segments: usize) -> Result<Self> {
        if segments < 2 {
            return Err(Error::InvalidInput(
                "diameter profile needs at least two segments".into(),
            ));
        }
        let n = (segments - 1) as f64;
        Self::new(
            (0..segments)
                .map(|j| proximal + (distal - proximal) * j as f64 / n)
                .collect(),
        )
    }

    pub fn diameters(&self) -> &[f64] {
        &self.diameters
    }
}

/// Bending stiffness of each segment relative to the base segment. Since
/// the second moment of area of a round section is `pi d^4 / 64`, the
/// ratio reduces to `(d_j / d_1)^4`.
pub fn normalized_stiffness(profile: &DiameterProfile) -> Result<Vec<f64>> {
    let d = profile.diameters();
    let Some(&d1) = d.first() else {
        return Err(Error::InvalidInput("empty diameter profile".into()));
    };
    Ok(d.iter().map(|dj| (dj / d1).powi(4)).collect())
}

/// Second moment of area of a solid round section (m^4).
pub fn area_moment(diameter: f64) -> f64 {
    std::f64::consts::PI * diameter.powi(4) / 64.0
}
