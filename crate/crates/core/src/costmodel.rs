//! Latency and energy bookkeeping for the digital ↔ analog pipeline.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::io::KeyValues;
use crate::ratio::Ratio;

/// Speed of light in vacuum, m/s, rounded as used for propagation delay.
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 2.998e8;
/// Digital reference energy per multiply-accumulate.
pub const DIGITAL_MAC_ENERGY_J: f64 = 300e-15;
/// Share of system energy spent moving data in contemporary systems, as
/// measured externally; documented here, not derived.
pub const SYSTEM_DATA_MOVEMENT_ENERGY_SHARE: f64 = 0.627;

/// Bundled prototype scenario.
pub const PROTOTYPE_CFG: &str = include_str!("../config/prototype.cfg");

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageTiming {
    pub input_prep_s: f64,
    pub slm_write_s: f64,
    pub optical_propagation_s: f64,
    pub camera_read_s: f64,
    pub digital_post_s: f64,
}

pub const STAGE_NAMES: [&str; 5] = ["input_prep", "slm_write", "optical_propagation", "camera_read", "digital_post"];

impl StageTiming {
    pub fn new(
        input_prep_s: f64,
        slm_write_s: f64,
        optical_propagation_s: f64,
        camera_read_s: f64,
        digital_post_s: f64,
    ) -> Result<Self> {
        let t = Self { input_prep_s, slm_write_s, optical_propagation_s, camera_read_s, digital_post_s };
        for (name, v) in STAGE_NAMES.iter().zip(t.stages()) {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(format!("stage {name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(t)
    }

    /// Light-travel time over `distance_m`.
    pub fn propagation_delay(distance_m: f64) -> f64 {
        distance_m / SPEED_OF_LIGHT_M_PER_S
    }

    pub fn stages(&self) -> [f64; 5] {
        [self.input_prep_s, self.slm_write_s, self.optical_propagation_s, self.camera_read_s, self.digital_post_s]
    }

    pub fn total_s(&self) -> f64 {
        self.stages().iter().sum()
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        let [a, b, c, d, e] = self.stages().map(|v| v * k);
        Self::new(a, b, c, d, e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PipelineTime {
    pub total_s: f64,
    /// Same order as [`STAGE_NAMES`].
    pub per_stage_fraction: [f64; 5],
    pub data_movement_fraction: f64,
}

/// Totals the pipeline; data movement is SLM programming plus camera readout.
pub fn pipeline_time(stages: &StageTiming) -> Result<PipelineTime> {
    let total_s = stages.total_s();
    if total_s <= 0.0 {
        return Err(Error::UndefinedFraction("all pipeline stages are zero".into()));
    }
    Ok(PipelineTime {
        total_s,
        per_stage_fraction: stages.stages().map(|v| v / total_s),
        data_movement_fraction: (stages.slm_write_s + stages.camera_read_s) / total_s,
    })
}

/// How many times slower the optical pipeline is than the software run.
pub fn hardware_vs_software_ratio(hardware: &StageTiming, software_total_s: f64) -> Result<f64> {
    if !(software_total_s.is_finite() && software_total_s > 0.0) {
        return Err(invalid(format!("software time must be positive, got {software_total_s}")));
    }
    Ok(hardware.total_s() / software_total_s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyModel {
    pub e_dac_per_sample_j: f64,
    pub e_adc_per_sample_j: f64,
    pub e_mac_digital_j: f64,
    pub e_mac_analog_j: f64,
}

impl EnergyModel {
    pub fn new(
        e_dac_per_sample_j: f64,
        e_adc_per_sample_j: f64,
        e_mac_digital_j: f64,
        e_mac_analog_j: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("e_dac_per_sample", e_dac_per_sample_j),
            ("e_adc_per_sample", e_adc_per_sample_j),
            ("e_mac_digital", e_mac_digital_j),
            ("e_mac_analog", e_mac_analog_j),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self { e_dac_per_sample_j, e_adc_per_sample_j, e_mac_digital_j, e_mac_analog_j })
    }
}

/// Digital MAC energy over analog energy including conversions:
/// `macs·e_dig / (dac·e_dac + adc·e_adc + macs·e_analog)`.
pub fn energy_advantage(model: &EnergyModel, macs: u64, dac_samples: u64, adc_samples: u64) -> Result<Ratio> {
    if macs == 0 {
        return Err(invalid("energy advantage needs at least one MAC"));
    }
    let macs = macs as f64;
    let den = dac_samples as f64 * model.e_dac_per_sample_j
        + adc_samples as f64 * model.e_adc_per_sample_j
        + macs * model.e_mac_analog_j;
    Ok(Ratio::from_quotient(macs * model.e_mac_digital_j, den))
}

const CONFIG_KEYS: [&str; 14] = [
    "input_prep_s",
    "slm_write_s",
    "optical_propagation_s",
    "propagation_distance_m",
    "camera_read_s",
    "digital_post_s",
    "software_total_s",
    "macs",
    "dac_samples",
    "adc_samples",
    "e_dac_per_sample_j",
    "e_adc_per_sample_j",
    "e_mac_digital_j",
    "e_mac_analog_j",
];

/// A complete cost-model scenario as read from a config file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostScenario {
    pub hardware: StageTiming,
    pub software_total_s: f64,
    pub energy: Option<EnergyWorkload>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyWorkload {
    pub model: EnergyModel,
    pub macs: u64,
    pub dac_samples: u64,
    pub adc_samples: u64,
}

impl CostScenario {
    /// Builds a scenario from parsed key-value pairs.
    ///
    /// Stage keys default to 0. `optical_propagation_s` may instead be given
    /// as `propagation_distance_m`, which is converted with `D/c`. The
    /// energy block is present when `macs` is set.
    pub fn from_config(kv: &KeyValues) -> Result<Self> {
        if let Some(unknown) = kv.keys().find(|k| !CONFIG_KEYS.contains(k)) {
            return Err(invalid(format!("unknown config key {unknown}")));
        }
        let stage = |key: &str| kv.get_f64(key).map(|v| v.unwrap_or(0.0));
        let propagation = match (kv.get_f64("optical_propagation_s")?, kv.get_f64("propagation_distance_m")?) {
            (Some(_), Some(_)) => {
                return Err(invalid("give either optical_propagation_s or propagation_distance_m, not both"))
            }
            (Some(t), None) => t,
            (None, Some(d)) => {
                if !(d.is_finite() && d >= 0.0) {
                    return Err(invalid(format!("propagation distance must be >= 0, got {d}")));
                }
                StageTiming::propagation_delay(d)
            }
            (None, None) => 0.0,
        };
        let hardware = StageTiming::new(
            stage("input_prep_s")?,
            stage("slm_write_s")?,
            propagation,
            stage("camera_read_s")?,
            stage("digital_post_s")?,
        )?;
        let software_total_s =
            kv.get_f64("software_total_s")?.ok_or_else(|| invalid("missing key software_total_s"))?;
        if !(software_total_s.is_finite() && software_total_s > 0.0) {
            return Err(invalid(format!("software_total_s must be positive, got {software_total_s}")));
        }
        let energy = match kv.get_u64("macs")? {
            None => None,
            Some(macs) => Some(EnergyWorkload {
                model: EnergyModel::new(
                    kv.get_f64("e_dac_per_sample_j")?.unwrap_or(0.0),
                    kv.get_f64("e_adc_per_sample_j")?.unwrap_or(0.0),
                    kv.get_f64("e_mac_digital_j")?.unwrap_or(DIGITAL_MAC_ENERGY_J),
                    kv.get_f64("e_mac_analog_j")?.unwrap_or(0.0),
                )?,
                macs,
                dac_samples: kv.get_u64("dac_samples")?.unwrap_or(0),
                adc_samples: kv.get_u64("adc_samples")?.unwrap_or(0),
            }),
        };
        Ok(Self { hardware, software_total_s, energy })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_config(&KeyValues::parse(text)?)
    }

    pub fn prototype() -> Self {
        Self::parse(PROTOTYPE_CFG).expect("bundled prototype.cfg is valid")
    }
}
