//! Scene files: `{metric: {kind, coeffs}, domain: {kind, params}, foliation: {kind}}`.

use serde::{Deserialize, Serialize};

use crate::geometry::{
    Domain, DomainSpec, FoliationFunction, FoliationSpec, MetricField, MetricSpec,
};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub metric: MetricField,
    pub domain: Domain,
    pub foliation: FoliationFunction,
}

/// On-disk scene; `tiling` and `values` are optional paths relative to the
/// scene file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SceneFile {
    pub metric: MetricSpec,
    pub domain: DomainSpec,
    #[serde(default = "default_foliation")]
    pub foliation: FoliationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiling: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<String>,
}

fn default_foliation() -> FoliationSpec {
    FoliationSpec {
        kind: "radial-quadratic".into(),
        scale: 1.0,
    }
}

impl SceneFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("scene: {e}")))
    }

    pub fn scene(&self) -> Result<Scene> {
        Ok(Scene {
            metric: MetricField::try_from(&self.metric)?,
            domain: Domain::try_from(&self.domain)?,
            foliation: FoliationFunction::try_from(&self.foliation)?,
        })
    }
}

impl From<&Scene> for SceneFile {
    fn from(s: &Scene) -> Self {
        SceneFile {
            metric: MetricSpec::from(&s.metric),
            domain: DomainSpec::from(&s.domain),
            foliation: FoliationSpec::from(&s.foliation),
            tiling: None,
            values: None,
        }
    }
}

/// Parses a values file: a JSON array, or whitespace/comma separated numbers.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| Error::invalid(format!("values: {e}")));
    }
    trimmed
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::invalid(format!("values: bad number '{s}'")))
        })
        .collect()
}
