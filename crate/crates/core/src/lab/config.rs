use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::catalog::MapCatalog;
use crate::charset::CharacteristicSet;
use crate::polycore::ComplexPoint;
use crate::tracts::SearchBounds;
use crate::volmetric::{SamplingDomain, MIN_SAMPLES};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    MetricAxioms,
    Isometry,
    Contraction,
    DegreeMultiplicativity,
    TractSurvey,
    CharsetVolume,
    UnionCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::MetricAxioms,
        ExperimentKind::Isometry,
        ExperimentKind::Contraction,
        ExperimentKind::DegreeMultiplicativity,
        ExperimentKind::TractSurvey,
        ExperimentKind::CharsetVolume,
        ExperimentKind::UnionCheck,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::MetricAxioms => "metric_axioms",
            ExperimentKind::Isometry => "isometry",
            ExperimentKind::Contraction => "contraction",
            ExperimentKind::DegreeMultiplicativity => "degree_multiplicativity",
            ExperimentKind::TractSurvey => "tract_survey",
            ExperimentKind::CharsetVolume => "charset_volume",
            ExperimentKind::UnionCheck => "union_check",
        }
    }

    /// The property an experiment of this kind tests.
    pub fn property(self) -> &'static str {
        match self {
            ExperimentKind::MetricAxioms => "rho_D is a metric: rho(F,F) = 0 and the triangle inequality holds",
            ExperimentKind::Isometry => "left composition with an automorphism preserves rho_D",
            ExperimentKind::Contraction => {
                "left composition with a Keller map does not increase rho_D; for an automorphism the dilation ratio tends to 1"
            }
            ExperimentKind::DegreeMultiplicativity => "geometric degree is multiplicative: d(F∘G) = d(F)·d(G)",
            ExperimentKind::TractSurvey => "asymptotic tracts have polynomial dual maps; automorphisms have none",
            ExperimentKind::CharsetVolume => {
                "characteristic set: disjoint stars, 1/10 decay chain, unique valences, volume of D"
            }
            ExperimentKind::UnionCheck => "tracts of G recur for F∘G and F maps A(G) into A(F∘G)",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ConfigError(format!("unknown experiment kind `{s}`")))
    }
}

/// `ball:R` (centered at the origin) or `charset:PATH` (a saved characteristic set).
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DomainSpec {
    Ball { radius: f64 },
    CharsetFile(PathBuf),
}

impl DomainSpec {
    pub fn build(&self) -> Result<SamplingDomain, ConfigError> {
        match self {
            DomainSpec::Ball { radius } => Ok(SamplingDomain::ball(ComplexPoint::real(0.0, 0.0), *radius)),
            DomainSpec::CharsetFile(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
                let set = CharacteristicSet::from_json(&text).map_err(|e| ConfigError(e.to_string()))?;
                Ok(SamplingDomain::charset(set))
            }
        }
    }
}

impl FromStr for DomainSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s.split_once(':') {
            Some(("ball", r)) => {
                let radius: f64 = r.parse().map_err(|_| ConfigError(format!("bad ball radius `{r}`")))?;
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(ConfigError(format!("ball radius must be positive, got {radius}")));
                }
                Ok(DomainSpec::Ball { radius })
            }
            Some(("charset", path)) if !path.is_empty() => Ok(DomainSpec::CharsetFile(path.into())),
            _ => Err(ConfigError(format!("domain `{s}` is neither ball:R nor charset:FILE"))),
        }
    }
}

impl TryFrom<String> for DomainSpec {
    type Error = ConfigError;

    fn try_from(s: String) -> Result<Self, ConfigError> {
        s.parse()
    }
}

impl From<DomainSpec> for String {
    fn from(d: DomainSpec) -> String {
        match d {
            DomainSpec::Ball { radius } => format!("ball:{radius}"),
            DomainSpec::CharsetFile(p) => format!("charset:{}", p.display()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharsetParams {
    pub radius: f64,
    pub slices: usize,
    pub bundles: usize,
    pub fatten: f64,
}

/// One experiment. Map selections left out fall back to catalog defaults
/// that depend only on the tags, so a config plus its catalog is complete.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<SearchBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charset: Option<CharsetParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<Vec<[String; 3]>>,
    /// Outer maps `f` for contraction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid experiment config: {0}")]
pub struct ConfigError(pub String);

impl ExperimentConfig {
    /// Bare config with only the mandatory fields.
    pub fn new(kind: ExperimentKind, seed: u64) -> Self {
        ExperimentConfig {
            kind,
            seed,
            samples: None,
            domain: None,
            scales: None,
            bounds: None,
            trials: None,
            charset: None,
            maps: None,
            pairs: None,
            triples: None,
            outer: None,
        }
    }

    /// Accepts a config, or a report (whose `config` field is used).
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        let inner = match value.get("config") {
            Some(c) if value.get("assertions").is_some() => c.clone(),
            _ => value,
        };
        serde_json::from_value(inner).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Checks that the parameters the kind needs are present and that every
    /// named map exists.
    pub fn validate(&self, catalog: &MapCatalog) -> Result<(), ConfigError> {
        use ExperimentKind::*;
        let need = |present: bool, what: &str| {
            if present {
                Ok(())
            } else {
                Err(ConfigError(format!("{} requires `{what}`", self.kind)))
            }
        };
        match self.kind {
            MetricAxioms | Isometry | Contraction => {
                need(self.samples.is_some(), "samples")?;
                need(self.domain.is_some(), "domain")?;
            }
            CharsetVolume => {
                need(self.samples.is_some(), "samples")?;
                need(self.charset.is_some(), "charset")?;
            }
            TractSurvey | UnionCheck => need(self.bounds.is_some(), "bounds")?,
            DegreeMultiplicativity => {}
        }
        if self.kind == Contraction {
            need(self.scales.is_some(), "scales")?;
        }
        if let Some(n) = self.samples {
            if n < MIN_SAMPLES {
                return Err(ConfigError(format!("samples = {n} is below the minimum {MIN_SAMPLES}")));
            }
        }
        if let Some(s) = &self.scales {
            if s.is_empty() || s.iter().any(|t| !(*t > 0.0)) || s.windows(2).any(|w| w[1] <= w[0]) {
                return Err(ConfigError(format!("scales {s:?} must be positive and strictly increasing")));
            }
        }
        if self.trials == Some(0) {
            return Err(ConfigError("trials must be positive".into()));
        }
        if let Some(b) = self.bounds {
            if b.alpha_max == 0 {
                return Err(ConfigError("bounds.alpha_max must be at least 1".into()));
            }
        }
        let names = self
            .maps
            .iter()
            .flatten()
            .chain(self.outer.iter().flatten())
            .chain(self.pairs.iter().flatten().flatten())
            .chain(self.triples.iter().flatten().flatten());
        for n in names {
            if catalog.get(n).is_none() {
                return Err(ConfigError(format!("map `{n}` is not in the catalog")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_specs() {
        assert_eq!("ball:1".parse::<DomainSpec>().unwrap(), DomainSpec::Ball { radius: 1.0 });
        assert_eq!(String::from(DomainSpec::Ball { radius: 2.5 }), "ball:2.5");
        assert!("ball:-1".parse::<DomainSpec>().is_err());
        assert!("disk:1".parse::<DomainSpec>().is_err());
        assert_eq!("charset:d.json".parse::<DomainSpec>().unwrap(), DomainSpec::CharsetFile("d.json".into()));
    }

    #[test]
    fn validation_requires_kind_parameters() {
        let cat = MapCatalog::bundled();
        let mut c = ExperimentConfig::new(ExperimentKind::MetricAxioms, 0);
        assert!(c.validate(&cat).is_err());
        c.samples = Some(100_000);
        c.domain = Some(DomainSpec::Ball { radius: 1.0 });
        c.validate(&cat).unwrap();
        c.maps = Some(vec!["nope".into()]);
        assert!(c.validate(&cat).is_err());

        let missing_seed = r#"{"kind":"tract_survey","bounds":{"alpha_max":2,"beta_max":2,"phi_deg_max":1}}"#;
        assert!(ExperimentConfig::from_json(missing_seed).is_err());
        let ok = r#"{"kind":"tract_survey","seed":1,"bounds":{"alpha_max":2,"beta_max":2,"phi_deg_max":1}}"#;
        let c = ExperimentConfig::from_json(ok).unwrap();
        c.validate(&cat).unwrap();
        assert_eq!(ExperimentConfig::from_json(&c.to_json()).unwrap(), c);
    }
}
