use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::HarnessError;
use crate::model::{validate_instance, Instance, RawInstance};
use crate::policies::{PolicyKind, PolicySpec};

/// What varies across the rows of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SweepAxis {
    /// Horizons `T`; the template's capacity rate `C / T` is kept.
    #[serde(rename = "horizon")]
    Horizon(Vec<f64>),
    /// Capacity rates `b`; every resource gets `C_l = b · T` at the
    /// template's horizon.
    #[serde(rename = "capacity_rate")]
    CapacityRate(Vec<f64>),
}

impl SweepAxis {
    pub fn values(&self) -> &[f64] {
        match self {
            Self::Horizon(v) | Self::CapacityRate(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub template: Instance,
    pub sweep: SweepAxis,
    pub policies: Vec<PolicySpec>,
    pub num_paths: usize,
    pub base_seed: u64,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum PolicyEntry {
    Name(String),
    Full { kind: String, id: u32 },
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    instance: Value,
    sweep: SweepAxis,
    policies: Vec<PolicyEntry>,
    paths: usize,
    seed: u64,
}

impl ExperimentSpec {
    pub fn new(
        template: Instance,
        sweep: SweepAxis,
        policies: Vec<PolicySpec>,
        num_paths: usize,
        base_seed: u64,
    ) -> Result<Self, HarnessError> {
        let spec = Self {
            template,
            sweep,
            policies,
            num_paths,
            base_seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same spec with every policy of `kinds`, default stream keys.
    pub fn with_kinds(
        template: Instance,
        sweep: SweepAxis,
        kinds: &[PolicyKind],
        num_paths: usize,
        base_seed: u64,
    ) -> Result<Self, HarnessError> {
        Self::new(
            template,
            sweep,
            kinds.iter().map(|&k| PolicySpec::new(k)).collect(),
            num_paths,
            base_seed,
        )
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if self.num_paths < 2 {
            return Err(HarnessError::Spec(format!(
                "paths must be at least 2, got {}",
                self.num_paths
            )));
        }
        let values = self.sweep.values();
        if values.is_empty() {
            return Err(HarnessError::Spec("sweep has no values".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(HarnessError::Spec(format!(
                "sweep value {v} is not positive"
            )));
        }
        if self.policies.is_empty() {
            return Err(HarnessError::Spec("policy set is empty".into()));
        }
        for (i, p) in self.policies.iter().enumerate() {
            if self.policies[..i].iter().any(|q| q.kind == p.kind) {
                return Err(HarnessError::Spec(format!(
                    "policy {} listed twice",
                    p.kind
                )));
            }
        }
        Ok(())
    }

    /// Parses `{"instance", "sweep", "policies", "paths", "seed"}`.
    pub fn from_json_str(text: &str) -> Result<Self, HarnessError> {
        let file: SpecFile =
            serde_json::from_str(text).map_err(|e| HarnessError::Spec(e.to_string()))?;
        let template = validate_instance(RawInstance::from_json_value(&file.instance)?)?;
        let policies = file
            .policies
            .into_iter()
            .map(|e| {
                Ok(match e {
                    PolicyEntry::Name(name) => PolicySpec::new(name.parse()?),
                    PolicyEntry::Full { kind, id } => PolicySpec {
                        kind: kind.parse()?,
                        policy_id: id,
                    },
                })
            })
            .collect::<Result<Vec<_>, crate::policies::PolicyError>>()
            .map_err(|e| HarnessError::Spec(e.to_string()))?;
        Self::new(template, file.sweep, policies, file.paths, file.seed)
    }

    pub fn to_json_string(&self) -> String {
        let file = SpecFile {
            instance: serde_json::to_value(self.template.to_raw()).expect("instance serializes"),
            sweep: self.sweep.clone(),
            policies: self
                .policies
                .iter()
                .map(|p| PolicyEntry::Full {
                    kind: p.kind.name().into(),
                    id: p.policy_id,
                })
                .collect(),
            paths: self.num_paths,
            seed: self.base_seed,
        };
        serde_json::to_string_pretty(&file).expect("spec serializes")
    }

    /// Instance for one sweep value.
    pub fn instance_at(&self, value: f64) -> Result<Instance, HarnessError> {
        Ok(match self.sweep {
            SweepAxis::Horizon(_) => self.template.scaled_to_horizon(value)?,
            SweepAxis::CapacityRate(_) => self.template.with_uniform_capacity_rate(value)?,
        })
    }
}
