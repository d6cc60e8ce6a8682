//! Mileage-based proration of a ticket's prorateable amount (ATBP).
//!
//! Each segment's ticketed point mileage (TPM) is multiplied by the
//! worldwide weight `6.338826 * TPM^-0.209892`, then by a regional factor
//! looked up from the regions of its endpoints, and rounded to an integer
//! standard proration factor (SPF). The ATBP is split in proportion to the
//! SPFs.

use std::collections::BTreeMap;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::IataError;
use crate::model::{AirlineId, AirportCode};
use crate::rules::Allocation;
use crate::scalar::Scalar;

pub const WORLDWIDE_COEFFICIENT: f64 = 6.338826;
pub const WORLDWIDE_EXPONENT: f64 = -0.209892;

/// Tie handling when rounding SPFs.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundingMode {
    #[default]
    HalfAwayFromZero,
    HalfEven,
}

/// Precision of the worldwide weight fed into the adjusted factor.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightPrecision {
    #[default]
    Full,
    /// Round the weight to two decimals first, as published tables do.
    TwoDecimals,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct SettleOptions {
    pub rounding: RoundingMode,
    pub weight_precision: WeightPrecision,
    /// Prorate with a segment's published SPF when it has one, instead of
    /// the recomputed value. Both stay in the trace.
    pub use_published_spf: bool,
}

impl SettleOptions {
    /// Two-decimal weights and published SPFs: reproduces printed proration tables.
    pub fn printed_tables() -> Self {
        Self {
            rounding: RoundingMode::HalfAwayFromZero,
            weight_precision: WeightPrecision::TwoDecimals,
            use_published_spf: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment<F> {
    #[serde(rename = "from")]
    pub origin: AirportCode,
    #[serde(rename = "to")]
    pub destination: AirportCode,
    pub airline: AirlineId,
    pub tpm: F,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_spf: Option<u64>,
}

/// Segments file: `{"segments":[{"from":"MAD","to":"FRA","airline":1,"tpm":893}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentsFile {
    pub segments: Vec<Segment<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub from: String,
    pub to: String,
    pub f: f64,
}

/// Factor-table file: `{"regions":{"MAD":"EUR"}, "factors":[{"from":"EUR","to":"EUR","f":0.97}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorFile {
    pub regions: BTreeMap<String, String>,
    pub factors: Vec<FactorRecord>,
}

/// Region of each airport and a correction factor per ordered region pair.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionalFactorTable<F> {
    regions: BTreeMap<AirportCode, String>,
    factors: BTreeMap<(String, String), F>,
}

impl<F: Float + Scalar> RegionalFactorTable<F> {
    pub fn new() -> Self {
        Self {
            regions: BTreeMap::new(),
            factors: BTreeMap::new(),
        }
    }

    pub fn with_region(mut self, airport: &str, region: &str) -> Self {
        self.regions.insert(airport.into(), region.to_owned());
        self
    }

    pub fn with_factor(mut self, from: &str, to: &str, factor: F) -> Self {
        self.factors.insert((from.to_owned(), to.to_owned()), factor);
        self
    }

    pub fn from_file(file: &FactorFile) -> Self {
        let mut table = Self::new();
        for (airport, region) in &file.regions {
            table = table.with_region(airport, region);
        }
        for r in &file.factors {
            table = table.with_factor(&r.from, &r.to, F::from_f64_lossy(r.f));
        }
        table
    }

    fn region(&self, airport: &AirportCode) -> Result<&str, IataError> {
        self.regions
            .get(airport)
            .map(String::as_str)
            .ok_or_else(|| IataError::MissingRegion(airport.to_string()))
    }

    /// Factor for a segment. A pair listed only in the opposite direction
    /// applies to both directions.
    pub fn factor(&self, origin: &AirportCode, destination: &AirportCode) -> Result<F, IataError> {
        let from = self.region(origin)?.to_owned();
        let to = self.region(destination)?.to_owned();
        let factor = self
            .factors
            .get(&(from.clone(), to.clone()))
            .or_else(|| self.factors.get(&(to.clone(), from.clone())))
            .ok_or(IataError::MissingFactor { from, to })?;
        // Written negated so that NaN is rejected too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(*factor > F::zero()) {
            return Err(IataError::NonPositive {
                what: "regional factor",
                value: factor.to_f64_lossy(),
            });
        }
        Ok(*factor)
    }
}

impl<F: Float + Scalar> Default for RegionalFactorTable<F> {
    fn default() -> Self {
        Self::new()
    }
}

/// Intermediate values of one segment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpfRecord<F> {
    pub segment: Segment<F>,
    pub worldwide_weight: F,
    pub adjusted_tpm: F,
    pub regional_factor: F,
    /// Recomputed SPF: rounded `adjusted_tpm * regional_factor`.
    pub spf: u64,
    /// SPF the ATBP was prorated with.
    pub applied_spf: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Settlement<F> {
    pub amounts: Allocation<F>,
    pub trace: Vec<SpfRecord<F>>,
}

fn positive<F: Float + Scalar>(what: &'static str, value: F) -> Result<F, IataError> {
    if value > F::zero() {
        Ok(value)
    } else {
        Err(IataError::NonPositive {
            what,
            value: value.to_f64_lossy(),
        })
    }
}

fn constant<F: Float + Scalar>(x: f64) -> F {
    F::from_f64_lossy(x)
}

pub fn worldwide_weight<F: Float + Scalar>(tpm: F) -> Result<F, IataError> {
    let tpm = positive("TPM", tpm)?;
    Ok(constant::<F>(WORLDWIDE_COEFFICIENT) * tpm.powf(constant(WORLDWIDE_EXPONENT)))
}

/// `tpm * worldwide_weight(tpm)`.
pub fn adjusted_factor<F: Float + Scalar>(tpm: F) -> Result<F, IataError> {
    Ok(tpm * worldwide_weight(tpm)?)
}

fn round_to_integer<F: Float + Scalar>(x: F, mode: RoundingMode) -> F {
    match mode {
        RoundingMode::HalfAwayFromZero => x.round(),
        RoundingMode::HalfEven => {
            let floor = x.floor();
            let frac = x - floor;
            let half = constant::<F>(0.5);
            if frac < half {
                floor
            } else if frac > half {
                floor + F::one()
            } else if (floor / constant(2.0)).fract().is_zero() {
                floor
            } else {
                floor + F::one()
            }
        }
    }
}

/// Rounded `adjusted * regional`.
pub fn standard_proration_factor<F: Float + Scalar>(
    adjusted: F,
    regional: F,
    mode: RoundingMode,
) -> Result<u64, IataError> {
    let product = positive("adjusted factor", adjusted)? * positive("regional factor", regional)?;
    Ok(round_to_integer(product, mode)
        .to_u64()
        .expect("positive finite factor fits in u64"))
}

/// Splits `atbp` in proportion to the SPFs, summing per airline.
pub fn prorate<F: Float + Scalar>(atbp: F, spfs: &[(AirlineId, u64)]) -> Result<Allocation<F>, IataError> {
    let atbp = positive("ATBP", atbp)?;
    if spfs.is_empty() {
        return Err(IataError::NoSegments);
    }
    let total: u64 = spfs.iter().map(|&(_, s)| s).sum();
    if total == 0 {
        return Err(IataError::DegenerateFactors);
    }
    let mut per_airline: BTreeMap<AirlineId, u64> = BTreeMap::new();
    for &(airline, spf) in spfs {
        *per_airline.entry(airline).or_default() += spf;
    }
    let total = F::from_u64(total).expect("SPF total representable");
    Ok(per_airline
        .into_iter()
        .map(|(airline, spf)| (airline, F::from_u64(spf).expect("SPF representable") * atbp / total))
        .collect())
}

/// Splits `atbp` in proportion to raw TPM, without weights or regional factors.
pub fn prorate_by_mileage<F: Float + Scalar>(atbp: F, segments: &[Segment<F>]) -> Result<Allocation<F>, IataError> {
    let atbp = positive("ATBP", atbp)?;
    if segments.is_empty() {
        return Err(IataError::NoSegments);
    }
    let mut per_airline: BTreeMap<AirlineId, F> = BTreeMap::new();
    let mut total = F::zero();
    for s in segments {
        let tpm = positive("TPM", s.tpm)?;
        total = total + tpm;
        let entry = per_airline.entry(s.airline).or_insert_with(F::zero);
        *entry = *entry + tpm;
    }
    Ok(per_airline.into_iter().map(|(a, m)| (a, m * atbp / total)).collect())
}

/// Full pipeline: weight, adjusted factor, regional factor, rounding, proration.
pub fn settle<F: Float + Scalar>(
    segments: &[Segment<F>],
    atbp: F,
    factors: &RegionalFactorTable<F>,
    options: SettleOptions,
) -> Result<Settlement<F>, IataError> {
    let mut trace = Vec::with_capacity(segments.len());
    for segment in segments {
        let mut weight = worldwide_weight(segment.tpm)?;
        if options.weight_precision == WeightPrecision::TwoDecimals {
            let hundred = constant::<F>(100.0);
            weight = (weight * hundred).round() / hundred;
        }
        let adjusted_tpm = segment.tpm * weight;
        let regional_factor = factors.factor(&segment.origin, &segment.destination)?;
        let spf = standard_proration_factor(adjusted_tpm, regional_factor, options.rounding)?;
        let applied_spf = match segment.published_spf {
            Some(published) if options.use_published_spf => published,
            _ => spf,
        };
        trace.push(SpfRecord {
            segment: segment.clone(),
            worldwide_weight: weight,
            adjusted_tpm,
            regional_factor,
            spf,
            applied_spf,
        });
    }
    let spfs: Vec<(AirlineId, u64)> = trace.iter().map(|r| (r.segment.airline, r.applied_spf)).collect();
    let amounts = prorate(atbp, &spfs)?;
    Ok(Settlement { amounts, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment(from: &str, to: &str, airline: u32, tpm: f64) -> Segment<f64> {
        Segment {
            origin: from.into(),
            destination: to.into(),
            airline: AirlineId(airline),
            tpm,
            published_spf: None,
        }
    }

    fn madrid_nairobi() -> (Vec<Segment<f64>>, RegionalFactorTable<f64>) {
        let segments = vec![segment("MAD", "FRA", 1, 893.0), segment("FRA", "NBO", 2, 3690.0)];
        let table = RegionalFactorTable::new()
            .with_region("MAD", "EUR")
            .with_region("FRA", "EUR")
            .with_region("NBO", "AFR")
            .with_factor("EUR", "EUR", 0.97)
            .with_factor("EUR", "AFR", 1.142);
        (segments, table)
    }

    #[test]
    fn worldwide_weight_values() {
        assert!((worldwide_weight(893.0).unwrap() - 1.52).abs() < 0.005);
        assert!((worldwide_weight(3690.0).unwrap() - 1.13).abs() < 0.005);
        assert!(worldwide_weight(1000.0).unwrap() > worldwide_weight(2000.0).unwrap());
        assert!(worldwide_weight(0.0).is_err());
        assert!(worldwide_weight(-5.0_f32).is_err());
    }

    #[test]
    fn adjusted_factor_values() {
        assert!((adjusted_factor(3690.0).unwrap() - 4169.7).abs() < 5.0);
        // The formula gives about 1360 at 893 miles; 1339.5 would need a weight of 1.50.
        let a = adjusted_factor(893.0).unwrap();
        assert!((a - 1359.8).abs() < 1.0, "{a}");
        assert!((893.0 * 1.50 - 1339.5_f64).abs() < 1e-9);
        assert!(adjusted_factor(2000.0).unwrap() > adjusted_factor(1000.0).unwrap());
    }

    #[test]
    fn spf_rounding() {
        let m = RoundingMode::HalfAwayFromZero;
        assert_eq!(standard_proration_factor(1339.5, 0.97, m).unwrap(), 1299);
        assert_eq!(standard_proration_factor(4169.7, 1.142, m).unwrap(), 4762);
        assert_eq!(standard_proration_factor(100.0, 1.0, m).unwrap(), 100);
        assert!(standard_proration_factor(0.0, 1.0, m).is_err());
        assert!(standard_proration_factor(1.0, -1.0, m).is_err());
    }

    #[test]
    fn rounding_modes_differ_only_on_ties() {
        let away = RoundingMode::HalfAwayFromZero;
        let even = RoundingMode::HalfEven;
        assert_eq!(standard_proration_factor(2.5, 1.0, away).unwrap(), 3);
        assert_eq!(standard_proration_factor(2.5, 1.0, even).unwrap(), 2);
        assert_eq!(standard_proration_factor(3.5, 1.0, even).unwrap(), 4);
        assert_eq!(standard_proration_factor(2.6, 1.0, even).unwrap(), 3);
        assert_eq!(standard_proration_factor(2.4, 1.0, even).unwrap(), 2);
    }

    #[test]
    fn prorate_by_published_factors() {
        let a = prorate(900.0, &[(AirlineId(1), 1299), (AirlineId(2), 4760)]).unwrap();
        assert!((a.amount(AirlineId(1)) - 192.95).abs() < 0.01);
        assert!((a.amount(AirlineId(2)) - 707.05).abs() < 0.01);
        let single = prorate(321.5, &[(AirlineId(7), 12)]).unwrap();
        assert_eq!(single.amount(AirlineId(7)), 321.5);
        assert_eq!(prorate(1.0, &[(AirlineId(1), 0)]), Err(IataError::DegenerateFactors));
        assert_eq!(prorate(1.0, &[]), Err(IataError::NoSegments));
    }

    #[test]
    fn mileage_only_split() {
        let (segments, _) = madrid_nairobi();
        let split = prorate_by_mileage(900.0, &segments).unwrap();
        assert!((split.amount(AirlineId(1)) - 175.365481).abs() < 1e-6);
        assert!((split.amount(AirlineId(2)) - 724.634519).abs() < 1e-6);
    }

    #[test]
    fn settle_full_precision_trace() {
        let (segments, table) = madrid_nairobi();
        let s = settle(&segments, 900.0, &table, SettleOptions::default()).unwrap();
        for r in &s.trace {
            assert_eq!(r.adjusted_tpm, r.segment.tpm * r.worldwide_weight);
            assert_eq!(r.spf, (r.adjusted_tpm * r.regional_factor).round() as u64);
            assert_eq!(r.applied_spf, r.spf);
        }
        assert!((s.amounts.total() - 900.0).abs() < 1e-9);
    }

    #[test]
    fn settle_printed_tables_uses_published_factors() {
        let (mut segments, table) = madrid_nairobi();
        segments[0].published_spf = Some(1299);
        segments[1].published_spf = Some(4760);
        let s = settle(&segments, 900.0, &table, SettleOptions::printed_tables()).unwrap();
        assert_eq!(s.trace[0].worldwide_weight, 1.52);
        assert_eq!(s.trace[1].worldwide_weight, 1.13);
        assert_eq!(s.trace[1].spf, 4762);
        assert_eq!(s.trace[1].applied_spf, 4760);
        assert!((s.amounts.amount(AirlineId(1)) - 192.95).abs() < 0.01);
    }

    #[test]
    fn settle_single_segment() {
        let (segments, table) = madrid_nairobi();
        let s = settle(&segments[1..], 640.0, &table, SettleOptions::default()).unwrap();
        assert_eq!(s.amounts.amount(AirlineId(2)), 640.0);
        assert_eq!(s.amounts.len(), 1);
    }

    #[test]
    fn settle_reports_missing_configuration() {
        let (mut segments, table) = madrid_nairobi();
        segments.push(segment("NBO", "JNB", 2, 1800.0));
        assert_eq!(
            settle(&segments, 900.0, &table, SettleOptions::default()).unwrap_err(),
            IataError::MissingRegion("JNB".into())
        );
        let table = table.with_region("JNB", "SAF");
        assert!(matches!(
            settle(&segments, 900.0, &table, SettleOptions::default()).unwrap_err(),
            IataError::MissingFactor { .. }
        ));
    }

    #[test]
    fn reverse_region_pair_falls_back() {
        let (_, table) = madrid_nairobi();
        assert_eq!(table.factor(&"NBO".into(), &"FRA".into()).unwrap(), 1.142);
    }
}
