//! Zone/market CSV ingestion.
//!
//! One long-format schema, UTF-8, LF line endings:
//!
//! ```text
//! timestamp,zone,da_demand,da_price,rt_demand,rt_price
//! 2016-01-01T00:00:00Z,ISONE CA,12034.5,31.2,11998.1,29.87
//! ```
//!
//! Timestamps are whole UTC hours. Rows may arrive in any order; per zone
//! they are sorted, checked for duplicates and required to be hourly
//! contiguous.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use chrono::{DateTime, Duration, NaiveDateTime, Timelike, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{make_series, Horizon, Market, NormalStream, SeriesMeta, TimeSeries, Variable};

pub const HEADER: [&str; 6] = [
    "timestamp",
    "zone",
    "da_demand",
    "da_price",
    "rt_demand",
    "rt_price",
];
pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:00:00Z";

/// The nine operational zones, in report order.
pub const ZONES: [&str; 9] = [
    "ISONE CA",
    "Portland",
    "Burlington",
    "Bridgeport",
    "Providence",
    "SEMASS",
    "Worcester",
    "Concord",
    "Boston",
];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}, column {column}: {reason}")]
    Parse {
        line: u64,
        column: String,
        reason: String,
    },
    #[error("zone {zone}: hourly gap, first missing hour {missing}")]
    Gap {
        zone: String,
        missing: DateTime<Utc>,
    },
    #[error("zone {zone}: duplicate timestamp {timestamp}")]
    DuplicateTimestamp {
        zone: String,
        timestamp: DateTime<Utc>,
    },
    #[error("unknown zone '{0}'")]
    UnknownZone(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
}

impl From<csv::Error> for DatasetError {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map_or(0, |p| p.line());
        match e.into_kind() {
            csv::ErrorKind::Io(io) => DatasetError::Io(io),
            kind => DatasetError::Parse {
                line,
                column: String::new(),
                reason: format!("{kind:?}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoneRecord {
    pub timestamp: DateTime<Utc>,
    pub zone: String,
    /// MWh.
    pub da_demand: f64,
    /// $/MWh; may be negative.
    pub da_price: f64,
    pub rt_demand: f64,
    pub rt_price: f64,
}

impl ZoneRecord {
    pub fn value(&self, variable: Variable, market: Market) -> f64 {
        match (market, variable) {
            (Market::DayAhead, Variable::Demand) => self.da_demand,
            (Market::DayAhead, Variable::Price) => self.da_price,
            (Market::RealTime, Variable::Demand) => self.rt_demand,
            (Market::RealTime, Variable::Price) => self.rt_price,
        }
    }
}

/// Per-zone records, each list sorted by timestamp.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZoneDataset {
    pub zones: BTreeMap<String, Vec<ZoneRecord>>,
}

impl ZoneDataset {
    pub fn is_empty(&self) -> bool {
        self.zones.is_empty()
    }

    /// Zones in report order: the nine known zones first, then any others
    /// alphabetically.
    pub fn zone_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = ZONES
            .iter()
            .copied()
            .filter(|z| self.zones.contains_key(*z))
            .collect();
        names.extend(
            self.zones
                .keys()
                .map(String::as_str)
                .filter(|z| !ZONES.contains(z)),
        );
        names
    }

    pub fn total_records(&self) -> usize {
        self.zones.values().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapInfo {
    pub zone: String,
    pub first_missing: DateTime<Utc>,
    pub missing_hours: i64,
}

/// What was found while reading a file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub rows_read: usize,
    pub rows_per_zone: BTreeMap<String, usize>,
    pub gaps: Vec<GapInfo>,
    pub unknown_zones: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.gaps.is_empty()
    }
}

fn parse_timestamp(raw: &str, line: u64) -> Result<DateTime<Utc>, DatasetError> {
    let bad = |reason: String| DatasetError::Parse {
        line,
        column: "timestamp".into(),
        reason,
    };
    let t = DateTime::parse_from_rfc3339(raw)
        .map(|t| t.with_timezone(&Utc))
        .or_else(|_| NaiveDateTime::parse_from_str(raw, "%Y-%m-%dT%H:%M:%S").map(|n| n.and_utc()))
        .map_err(|e| bad(format!("'{raw}' is not an ISO-8601 timestamp ({e})")))?;
    if t.minute() != 0 || t.second() != 0 || t.nanosecond() != 0 {
        return Err(bad(format!("'{raw}' is not on a whole hour")));
    }
    Ok(t)
}

fn parse_number(raw: &str, column: &str, line: u64) -> Result<f64, DatasetError> {
    let v: f64 = raw.trim().parse().map_err(|_| DatasetError::Parse {
        line,
        column: column.into(),
        reason: format!("'{raw}' is not a number"),
    })?;
    if !v.is_finite() {
        return Err(DatasetError::Parse {
            line,
            column: column.into(),
            reason: format!("'{raw}' is not finite"),
        });
    }
    Ok(v)
}

/// Read and validate a dataset from any reader. Parse errors and duplicate
/// timestamps are fatal; gaps are recorded in the report.
pub fn inspect_reader<R: Read>(reader: R) -> Result<(ZoneDataset, ValidationReport), DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let got: Vec<&str> = header.iter().map(str::trim).collect();
    if got != HEADER {
        return Err(DatasetError::Parse {
            line: 1,
            column: String::new(),
            reason: format!(
                "expected header '{}', found '{}'",
                HEADER.join(","),
                got.join(",")
            ),
        });
    }

    let mut zones: BTreeMap<String, Vec<ZoneRecord>> = BTreeMap::new();
    let mut report = ValidationReport::default();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |i: usize| row.get(i).unwrap_or("");
        let timestamp = parse_timestamp(field(0).trim(), line)?;
        let zone = field(1).trim().to_string();
        if zone.is_empty() {
            return Err(DatasetError::Parse {
                line,
                column: "zone".into(),
                reason: "empty zone".into(),
            });
        }
        let mut nums = [0.0; 4];
        for (k, slot) in nums.iter_mut().enumerate() {
            *slot = parse_number(field(k + 2), HEADER[k + 2], line)?;
        }
        for (k, col) in [(0, "da_demand"), (2, "rt_demand")] {
            if nums[k] < 0.0 {
                return Err(DatasetError::Parse {
                    line,
                    column: col.into(),
                    reason: format!("negative demand {}", nums[k]),
                });
            }
        }
        report.rows_read += 1;
        zones.entry(zone.clone()).or_default().push(ZoneRecord {
            timestamp,
            zone,
            da_demand: nums[0],
            da_price: nums[1],
            rt_demand: nums[2],
            rt_price: nums[3],
        });
    }

    for (zone, records) in zones.iter_mut() {
        records.sort_by_key(|r| r.timestamp);
        for pair in records.windows(2) {
            let step = pair[1].timestamp - pair[0].timestamp;
            if step == Duration::zero() {
                return Err(DatasetError::DuplicateTimestamp {
                    zone: zone.clone(),
                    timestamp: pair[1].timestamp,
                });
            }
            if step > Duration::hours(1) {
                report.gaps.push(GapInfo {
                    zone: zone.clone(),
                    first_missing: pair[0].timestamp + Duration::hours(1),
                    missing_hours: step.num_hours() - 1,
                });
            }
        }
        report.rows_per_zone.insert(zone.clone(), records.len());
        if !ZONES.contains(&zone.as_str()) {
            report.unknown_zones.push(zone.clone());
        }
    }
    Ok((ZoneDataset { zones }, report))
}

pub fn inspect_csv(
    path: impl AsRef<Path>,
) -> Result<(ZoneDataset, ValidationReport), DatasetError> {
    inspect_reader(File::open(path)?)
}

/// Load a dataset, rejecting any hourly gap.
pub fn load_csv(path: impl AsRef<Path>) -> Result<(ZoneDataset, ValidationReport), DatasetError> {
    let (dataset, report) = inspect_csv(path)?;
    if let Some(gap) = report.gaps.first() {
        return Err(DatasetError::Gap {
            zone: gap.zone.clone(),
            missing: gap.first_missing,
        });
    }
    Ok((dataset, report))
}

/// Hourly series for one zone / variable / market.
pub fn extract_series(
    d: &ZoneDataset,
    zone: &str,
    variable: Variable,
    market: Market,
) -> Result<TimeSeries, DatasetError> {
    let records = d
        .zones
        .get(zone)
        .filter(|r| !r.is_empty())
        .ok_or_else(|| DatasetError::UnknownZone(zone.to_string()))?;
    let values: Vec<f64> = records.iter().map(|r| r.value(variable, market)).collect();
    let meta = SeriesMeta::new(zone, variable, market, Horizon::Hourly);
    Ok(make_series(
        &values,
        meta,
        records[0].timestamp,
        Horizon::Hourly,
    )?)
}

/// Serialise in the load schema, zones in [`ZoneDataset::zone_names`] order.
pub fn write_dataset<W: Write>(d: &ZoneDataset, writer: W) -> Result<(), DatasetError> {
    let mut w = csv::WriterBuilder::new().from_writer(writer);
    w.write_record(HEADER)?;
    for zone in d.zone_names() {
        for r in &d.zones[zone] {
            w.write_record([
                r.timestamp.format(TIMESTAMP_FORMAT).to_string(),
                r.zone.clone(),
                r.da_demand.to_string(),
                r.da_price.to_string(),
                r.rt_demand.to_string(),
                r.rt_price.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_fixture(d: &ZoneDataset, path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let file = io::BufWriter::new(File::create(path)?);
    write_dataset(d, file)
}

/// Default first hour of synthetic fixtures: 2016-01-01T00:00:00Z.
pub fn fixture_start() -> DateTime<Utc> {
    DateTime::from_timestamp(1_451_606_400, 0).expect("valid timestamp")
}

/// Process family used to generate a synthetic dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SynthKind {
    /// Random walk per variable.
    RandomWalk,
    /// AR(1) with φ = 0.3 per variable.
    Ar1,
    /// Linear trend plus noise per variable.
    Trend,
}

impl std::str::FromStr for SynthKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rw" | "random-walk" => Ok(SynthKind::RandomWalk),
            "ar1" => Ok(SynthKind::Ar1),
            "trend" => Ok(SynthKind::Trend),
            _ => Err(format!(
                "unknown synthetic kind '{s}' (expected rw, ar1 or trend)"
            )),
        }
    }
}

/// Per-variable level and innovation scale: (da_demand, da_price, rt_demand, rt_price).
const SYNTH_LEVELS: [f64; 4] = [12_000.0, 40.0, 12_000.0, 40.0];
const SYNTH_SCALES: [f64; 4] = [150.0, 3.0, 150.0, 4.0];

/// AR coefficient used by [`SynthKind::Ar1`].
pub const SYNTH_AR_PHI: f64 = 0.3;

fn synth_column(kind: SynthKind, hours: usize, level: f64, scale: f64, seed: u64) -> Vec<f64> {
    let mut noise = NormalStream::new(seed);
    let mut out = Vec::with_capacity(hours);
    match kind {
        SynthKind::Ar1 => {
            let mut x = 0.0;
            for _ in 0..hours {
                x = SYNTH_AR_PHI * x + noise.next_normal();
                out.push(level + scale * x);
            }
        }
        SynthKind::RandomWalk => {
            // Small steps so levels stay positive over long fixtures.
            let step = scale * 0.02;
            let mut x = level;
            for _ in 0..hours {
                x += step * noise.next_normal();
                out.push(x);
            }
        }
        SynthKind::Trend => {
            let slope = level * 1e-5;
            for t in 0..hours {
                out.push(level + slope * t as f64 + scale * noise.next_normal());
            }
        }
    }
    out
}

/// Deterministic dataset with `hours` contiguous hourly records for each of
/// the nine zones, starting at `start`.
///
/// Each (zone, column) pair draws from its own [`NormalStream`] seeded with
/// `seed·1000 + zone_index·10 + column_index`.
pub fn synthetic_dataset(
    kind: SynthKind,
    hours: usize,
    seed: u64,
    start: DateTime<Utc>,
) -> ZoneDataset {
    let mut zones = BTreeMap::new();
    for (zi, zone) in ZONES.iter().enumerate() {
        let cols: Vec<Vec<f64>> = (0..4)
            .map(|c| {
                let s = seed
                    .wrapping_mul(1000)
                    .wrapping_add(zi as u64 * 10 + c as u64);
                let level = SYNTH_LEVELS[c] * (1.0 + 0.05 * zi as f64);
                let mut col = synth_column(kind, hours, level, SYNTH_SCALES[c], s);
                if c % 2 == 0 {
                    // Demand is physically non-negative.
                    col.iter_mut().for_each(|v| *v = v.max(0.0));
                }
                col
            })
            .collect();
        let records = (0..hours)
            .map(|t| ZoneRecord {
                timestamp: start + Duration::hours(t as i64),
                zone: zone.to_string(),
                da_demand: cols[0][t],
                da_price: cols[1][t],
                rt_demand: cols[2][t],
                rt_price: cols[3][t],
            })
            .collect();
        zones.insert(zone.to_string(), records);
    }
    ZoneDataset { zones }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn jan1() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2016, 1, 1, 0, 0, 0).unwrap()
    }

    #[test]
    fn fixture_start_is_2016() {
        assert_eq!(fixture_start(), jan1());
    }

    fn read(text: &str) -> Result<(ZoneDataset, ValidationReport), DatasetError> {
        inspect_reader(text.as_bytes())
    }

    const HEAD: &str = "timestamp,zone,da_demand,da_price,rt_demand,rt_price\n";

    #[test]
    fn two_rows() {
        let text = format!(
            "{HEAD}2016-01-01T00:00:00Z,ISONE CA,100,30.5,101,-2.5\n2016-01-01T01:00:00Z,ISONE CA,110,31,111,29\n"
        );
        let (d, rep) = read(&text).unwrap();
        assert_eq!(d.zones.len(), 1);
        assert_eq!(d.zones["ISONE CA"].len(), 2);
        assert_eq!(d.zones["ISONE CA"][0].rt_price, -2.5);
        assert_eq!(rep.rows_read, 2);
        assert!(rep.unknown_zones.is_empty());
    }

    #[test]
    fn out_of_order_rows_are_sorted_duplicates_rejected() {
        let text = format!(
            "{HEAD}2016-01-01T01:00:00Z,Boston,1,1,1,1\n2016-01-01T00:00:00Z,Boston,2,2,2,2\n"
        );
        let (d, _) = read(&text).unwrap();
        assert_eq!(d.zones["Boston"][0].da_demand, 2.0);

        let dup = format!(
            "{HEAD}2016-01-01T01:00:00Z,Boston,1,1,1,1\n2016-01-01T01:00:00Z,Boston,2,2,2,2\n"
        );
        assert!(matches!(
            read(&dup),
            Err(DatasetError::DuplicateTimestamp { .. })
        ));
    }

    #[test]
    fn gap_is_reported_and_fatal_on_load() {
        let text = format!(
            "{HEAD}2016-01-01T00:00:00Z,Boston,1,1,1,1\n2016-01-01T03:00:00Z,Boston,1,1,1,1\n"
        );
        let (_, rep) = read(&text).unwrap();
        assert_eq!(rep.gaps.len(), 1);
        assert_eq!(rep.gaps[0].first_missing, jan1() + Duration::hours(1));
        assert_eq!(rep.gaps[0].missing_hours, 2);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gap.csv");
        std::fs::write(&path, text).unwrap();
        match load_csv(&path) {
            Err(DatasetError::Gap { zone, missing }) => {
                assert_eq!(zone, "Boston");
                assert_eq!(missing, jan1() + Duration::hours(1));
            }
            other => panic!("expected gap error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_name_line_and_column() {
        let text = format!("{HEAD}2016-01-01T00:00:00Z,Boston,1,abc,1,1\n");
        match read(&text) {
            Err(DatasetError::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, "da_price");
            }
            other => panic!("{other:?}"),
        }
        let text = format!("{HEAD}2016-01-01T00:30:00Z,Boston,1,1,1,1\n");
        assert!(matches!(read(&text), Err(DatasetError::Parse { .. })));
        let text = format!("{HEAD}2016-01-01T00:00:00Z,Boston,-1,1,1,1\n");
        assert!(matches!(read(&text), Err(DatasetError::Parse { .. })));
        assert!(matches!(
            read("a,b\n"),
            Err(DatasetError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn unknown_zones_are_listed() {
        let text = format!("{HEAD}2016-01-01T00:00:00Z,Springfield,1,1,1,1\n");
        let (_, rep) = read(&text).unwrap();
        assert_eq!(rep.unknown_zones, vec!["Springfield".to_string()]);
    }

    #[test]
    fn extract_projects_columns() {
        let d = synthetic_dataset(SynthKind::Ar1, 48, 3, jan1());
        let s = extract_series(&d, "ISONE CA", Variable::Price, Market::RealTime).unwrap();
        assert_eq!(s.meta().zone, "ISONE CA");
        assert_eq!(s.meta().market, Market::RealTime);
        assert_eq!(s.step(), Horizon::Hourly);
        assert_eq!(s.len(), 48);
        let raw: Vec<f64> = d.zones["ISONE CA"].iter().map(|r| r.rt_price).collect();
        assert_eq!(s.defined(), raw.as_slice());
        assert!(matches!(
            extract_series(&d, "XYZ", Variable::Price, Market::RealTime),
            Err(DatasetError::UnknownZone(_))
        ));
    }

    #[test]
    fn empty_dataset_writes_header_only() {
        let mut buf = Vec::new();
        write_dataset(&ZoneDataset::default(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{HEAD}"));
    }

    #[test]
    fn round_trip_is_lossless() {
        let d = synthetic_dataset(SynthKind::RandomWalk, 100, 9, jan1());
        let mut buf = Vec::new();
        write_dataset(&d, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('\r'));
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("2016-01-01T00:00:00Z,ISONE CA,"));
        let (back, rep) = read(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(rep.rows_read, text.lines().count() - 1);
        assert_eq!(rep.rows_per_zone.values().sum::<usize>(), rep.rows_read);
    }

    #[test]
    fn synthetic_is_deterministic_and_nonnegative_demand() {
        let a = synthetic_dataset(SynthKind::Trend, 200, 1, jan1());
        let b = synthetic_dataset(SynthKind::Trend, 200, 1, jan1());
        assert_eq!(a, b);
        assert_eq!(a.zone_names(), ZONES.to_vec());
        assert!(a
            .zones
            .values()
            .flatten()
            .all(|r| r.da_demand >= 0.0 && r.rt_demand >= 0.0));
    }
}
