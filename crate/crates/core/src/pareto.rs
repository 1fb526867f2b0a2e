//! Power/sample-rate Pareto frontiers over converter survey data.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConverterKind {
    #[serde(rename = "DAC")]
    Dac,
    #[serde(rename = "ADC")]
    Adc,
}

impl FromStr for ConverterKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "DAC" => Ok(Self::Dac),
            "ADC" => Ok(Self::Adc),
            other => Err(invalid(format!("converter kind must be DAC or ADC, got {other:?}"))),
        }
    }
}

impl fmt::Display for ConverterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dac => "DAC",
            Self::Adc => "ADC",
        })
    }
}

/// One published converter design point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConverterRecord {
    pub id: String,
    pub kind: ConverterKind,
    pub power_w: f64,
    pub sample_rate_hz: f64,
    pub resolution_bits: u32,
    pub year: i32,
}

impl ConverterRecord {
    pub fn new(
        id: impl Into<String>,
        kind: ConverterKind,
        power_w: f64,
        sample_rate_hz: f64,
        resolution_bits: u32,
        year: i32,
    ) -> Result<Self> {
        if !(power_w.is_finite() && power_w > 0.0) {
            return Err(invalid(format!("power_w must be positive, got {power_w}")));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(invalid(format!("sample_rate_hz must be positive, got {sample_rate_hz}")));
        }
        if resolution_bits == 0 {
            return Err(invalid("resolution_bits must be >= 1"));
        }
        Ok(Self { id: id.into(), kind, power_w, sample_rate_hz, resolution_bits, year })
    }

    pub fn energy_per_sample_j(&self) -> f64 {
        self.power_w / self.sample_rate_hz
    }

    /// Uses nominal resolution, not effective bits.
    pub fn energy_per_bit_j(&self) -> f64 {
        self.power_w / (self.sample_rate_hz * self.resolution_bits as f64)
    }

    /// `self` dominates `other`: no more power, no less rate, strictly better
    /// in at least one.
    pub fn dominates(&self, other: &Self) -> bool {
        self.power_w <= other.power_w
            && self.sample_rate_hz >= other.sample_rate_hz
            && (self.power_w < other.power_w || self.sample_rate_hz > other.sample_rate_hz)
    }

    fn same_point(&self, other: &Self) -> bool {
        self.power_w == other.power_w && self.sample_rate_hz == other.sample_rate_hz
    }
}

/// Indices (into `records`) of the non-dominated set, ascending in power.
///
/// Records sharing the same power and rate collapse to the first one in
/// input order. Runs in O(n log n): sort by power ascending then rate
/// descending, and keep each record whose rate beats everything cheaper.
pub fn pareto_frontier_indices(records: &[ConverterRecord]) -> Result<Vec<usize>> {
    if records.is_empty() {
        return Err(invalid("Pareto frontier of an empty record set"));
    }
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&records[i], &records[j]);
        a.power_w.total_cmp(&b.power_w).then(b.sample_rate_hz.total_cmp(&a.sample_rate_hz)).then(i.cmp(&j))
    });
    let mut front = Vec::new();
    let mut best_rate = f64::NEG_INFINITY;
    for i in order {
        if records[i].sample_rate_hz > best_rate {
            best_rate = records[i].sample_rate_hz;
            front.push(i);
        }
    }
    Ok(front)
}

pub fn pareto_frontier(records: &[ConverterRecord]) -> Result<Vec<ConverterRecord>> {
    Ok(pareto_frontier_indices(records)?.into_iter().map(|i| records[i].clone()).collect())
}

/// O(n²) pairwise-dominance reference for [`pareto_frontier_indices`], with
/// the same first-in-input-order tie rule. Returned in input order.
pub fn pareto_frontier_naive(records: &[ConverterRecord]) -> Vec<usize> {
    (0..records.len())
        .filter(|&i| {
            records
                .iter()
                .enumerate()
                .all(|(j, other)| !other.dominates(&records[i]) && !(j < i && other.same_point(&records[i])))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityGap {
    /// Best frontier energy per bit over the target; ≤ 1 means achieved.
    pub gap: f64,
    pub best_record: String,
    pub best_energy_per_bit_j: f64,
}

/// How far the frontier of `kind` records sits above an energy-per-bit target.
pub fn feasibility_gap(
    records: &[ConverterRecord],
    kind: ConverterKind,
    target_energy_per_bit_j: f64,
) -> Result<FeasibilityGap> {
    if !(target_energy_per_bit_j.is_finite() && target_energy_per_bit_j > 0.0) {
        return Err(invalid(format!("target must be positive, got {target_energy_per_bit_j}")));
    }
    let of_kind: Vec<ConverterRecord> = records.iter().filter(|r| r.kind == kind).cloned().collect();
    if of_kind.is_empty() {
        return Err(invalid(format!("no {kind} records")));
    }
    let best = pareto_frontier(&of_kind)?
        .into_iter()
        .min_by(|a, b| a.energy_per_bit_j().total_cmp(&b.energy_per_bit_j()))
        .expect("frontier of a non-empty set is non-empty");
    Ok(FeasibilityGap {
        gap: best.energy_per_bit_j() / target_energy_per_bit_j,
        best_energy_per_bit_j: best.energy_per_bit_j(),
        best_record: best.id,
    })
}

/// Synthetic survey: log-uniform power (1 µW to 10 W) and rate (1 kHz to
/// 100 GHz), 4 to 16 bits, years 1990 to 2024. A stand-in for published
/// survey tables.
pub fn synthetic_survey(n: usize, kind: ConverterKind, rng: &mut impl Rng) -> Vec<ConverterRecord> {
    (0..n)
        .map(|i| {
            let power = 10f64.powf(rng.gen_range(-6.0..1.0));
            let rate = 10f64.powf(rng.gen_range(3.0..11.0));
            ConverterRecord::new(
                format!("{kind}-{i:04}"),
                kind,
                power,
                rate,
                rng.gen_range(4..=16),
                rng.gen_range(1990..=2024),
            )
            .expect("generated values are in range")
        })
        .collect()
}
