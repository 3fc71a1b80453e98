//! Release loading, release triples, NDPV and min-max normalization.
//!
//! A release is one CSV file of per-file CK metrics plus a bug count. Three
//! consecutive releases `x` (oldest), `y` (newer) and `z` (most recent) form a
//! [`ReleaseTriple`]; the files that appear in all three and are defective in
//! `y` are the ones that receive plans.

use std::collections::{HashMap, HashSet};
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{Metric, N_FEATURES};

pub type FeatureVector = [f64; N_FEATURES];

/// One file in one release.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub file_name: String,
    pub metrics: FeatureVector,
    pub bug_count: u32,
}

impl MetricRecord {
    pub fn new(file_name: impl Into<String>, metrics: FeatureVector, bug_count: u32) -> Self {
        Self {
            file_name: file_name.into(),
            metrics,
            bug_count,
        }
    }

    /// Defect label: any recorded bug makes the file defective.
    pub fn is_defective(&self) -> bool {
        self.bug_count > 0
    }

    pub fn value(&self, metric: Metric) -> f64 {
        self.metrics[metric.index()]
    }
}

/// Per-feature `(min, max)` observed in a set of records.
pub type FeatureBounds = [(f64, f64); N_FEATURES];

fn bounds_of<'a>(records: impl IntoIterator<Item = &'a MetricRecord>) -> Option<FeatureBounds> {
    let mut it = records.into_iter().peekable();
    it.peek()?;
    let mut b = [(f64::INFINITY, f64::NEG_INFINITY); N_FEATURES];
    for r in it {
        for (slot, &v) in b.iter_mut().zip(r.metrics.iter()) {
            slot.0 = slot.0.min(v);
            slot.1 = slot.1.max(v);
        }
    }
    Some(b)
}

#[derive(Debug, Clone)]
pub struct Release {
    version_id: String,
    records: Vec<MetricRecord>,
    feature_bounds: Option<FeatureBounds>,
    by_name: HashMap<String, usize>,
}

impl Release {
    /// Builds a release, rejecting duplicate file names and non-finite metrics.
    pub fn new(version_id: impl Into<String>, records: Vec<MetricRecord>) -> Result<Self> {
        let mut by_name = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if let Some(j) = r.metrics.iter().position(|v| !v.is_finite()) {
                return Err(Error::Contract(format!(
                    "record `{}` has a non-finite value for {}",
                    r.file_name,
                    Metric::ALL[j]
                )));
            }
            if by_name.insert(r.file_name.clone(), i).is_some() {
                return Err(Error::Contract(format!(
                    "duplicate file name `{}` in release",
                    r.file_name
                )));
            }
        }
        Ok(Self {
            version_id: version_id.into(),
            feature_bounds: bounds_of(&records),
            records,
            by_name,
        })
    }

    pub fn version_id(&self) -> &str {
        &self.version_id
    }

    pub fn records(&self) -> &[MetricRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `None` for an empty release.
    pub fn feature_bounds(&self) -> Option<&FeatureBounds> {
        self.feature_bounds.as_ref()
    }

    pub fn get(&self, file_name: &str) -> Option<&MetricRecord> {
        self.by_name.get(file_name).map(|&i| &self.records[i])
    }

    pub fn contains(&self, file_name: &str) -> bool {
        self.by_name.contains_key(file_name)
    }

    pub fn defective_count(&self) -> usize {
        self.records.iter().filter(|r| r.is_defective()).count()
    }

    /// Values of one feature, in record order.
    pub fn column(&self, feature: usize) -> Vec<f64> {
        self.records.iter().map(|r| r.metrics[feature]).collect()
    }

    pub fn labels(&self) -> Vec<bool> {
        self.records.iter().map(MetricRecord::is_defective).collect()
    }
}

/// Loads one release CSV from disk.
pub fn load_release(path: impl AsRef<Path>, version_id: &str) -> Result<Release> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_release(file, version_id).map_err(|e| match e {
        Error::Csv { source, .. } => Error::Csv {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// Parses a release from any reader.
///
/// The header must contain `name`, the twenty metric columns and `bug`
/// (case-insensitive); other columns are ignored. Release files commonly
/// carry a project `name` column before the class `name` column, so the last
/// `name` column (or a `name.1` column, when present) identifies the file.
/// A file name seen twice keeps its first row.
pub fn read_release(reader: impl Read, version_id: &str) -> Result<Release> {
    let csv_err = |source| Error::Csv {
        path: PathBuf::new(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();

    let name_col = headers
        .iter()
        .position(|h| h == "name.1")
        .or_else(|| headers.iter().rposition(|h| h == "name"))
        .ok_or_else(|| Error::Schema {
            column: "name".into(),
        })?;
    let bug_col = headers
        .iter()
        .position(|h| h == "bug")
        .ok_or_else(|| Error::Schema {
            column: "bug".into(),
        })?;
    let mut metric_cols = [0usize; N_FEATURES];
    for m in Metric::ALL {
        metric_cols[m.index()] = headers
            .iter()
            .position(|h| h == m.name())
            .ok_or_else(|| Error::Schema {
                column: m.name().into(),
            })?;
    }

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut dropped = 0usize;
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(csv_err)?;
        let row_no = i + 1;
        let name = row.get(name_col).unwrap_or_default().to_string();
        let mut metrics = [0.0; N_FEATURES];
        for m in Metric::ALL {
            let cell = row.get(metric_cols[m.index()]).unwrap_or_default();
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row: row_no,
                column: m.name().into(),
                value: cell.into(),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row: row_no,
                    column: m.name().into(),
                    value: cell.into(),
                });
            }
            metrics[m.index()] = v;
        }
        let bug_cell = row.get(bug_col).unwrap_or_default();
        let bug_count = parse_bug_count(bug_cell).ok_or_else(|| Error::Parse {
            row: row_no,
            column: "bug".into(),
            value: bug_cell.into(),
        })?;
        if !seen.insert(name.clone()) {
            dropped += 1;
            continue;
        }
        records.push(MetricRecord::new(name, metrics, bug_count));
    }
    if dropped > 0 {
        log::warn!("release {version_id}: dropped {dropped} rows with repeated file names");
    }
    if records.is_empty() {
        log::warn!("release {version_id}: no data rows, feature bounds undefined");
    }
    Release::new(version_id, records)
}

fn parse_bug_count(cell: &str) -> Option<u32> {
    if let Ok(n) = cell.parse::<u32>() {
        return Some(n);
    }
    let v: f64 = cell.parse().ok()?;
    (v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64).then_some(v as u32)
}

/// Writes a release in the layout [`read_release`] accepts.
pub fn write_release(release: &Release, writer: impl std::io::Write) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: PathBuf::new(),
        source,
    };
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["name".to_string()];
    header.extend(Metric::ALL.iter().map(|m| m.name().to_string()));
    header.push("bug".into());
    w.write_record(&header).map_err(csv_err)?;
    for r in release.records() {
        let mut row = vec![r.file_name.clone()];
        row.extend(r.metrics.iter().map(f64::to_string));
        row.push(r.bug_count.to_string());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: PathBuf::new(),
        source,
    })
}

pub fn write_release_file(release: &Release, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_release(release, file).map_err(|e| match e {
        Error::Csv { source, .. } => Error::Csv {
            path: path.to_path_buf(),
            source,
        },
        Error::Io { source, .. } => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// Oldest (`x`), newer (`y`) and most recent (`z`) releases of one project.
#[derive(Debug, Clone)]
pub struct ReleaseTriple {
    pub oldest: Release,
    pub newer: Release,
    pub most_recent: Release,
    matched_files: Vec<String>,
}

impl ReleaseTriple {
    /// Files present in all three releases and defective in `y`, in `y` order.
    pub fn matched_files(&self) -> &[String] {
        &self.matched_files
    }

    pub fn is_empty(&self) -> bool {
        self.matched_files.is_empty()
    }

    pub fn is_matched(&self, file_name: &str) -> bool {
        self.newer.get(file_name).is_some_and(MetricRecord::is_defective)
            && self.oldest.contains(file_name)
            && self.most_recent.contains(file_name)
    }

    /// Number of defects in previous version for one matched file:
    /// `bugs(y) - bugs(z)`, positive when bugs were reduced.
    pub fn ndpv(&self, file_name: &str) -> Result<i64> {
        compute_ndpv(self, file_name)
    }

    /// Sum of NDPV over all matched files.
    pub fn total_ndpv(&self) -> i64 {
        self.matched_files
            .iter()
            .map(|f| self.ndpv(f).expect("matched file"))
            .sum()
    }
}

/// Forms a triple and its matched-file set. An empty match set is allowed
/// (with a warning) so callers can report it.
pub fn build_triple(x: Release, y: Release, z: Release) -> Result<ReleaseTriple> {
    if x.version_id() == y.version_id()
        || y.version_id() == z.version_id()
        || x.version_id() == z.version_id()
    {
        return Err(Error::Triple(format!(
            "releases must be distinct, got {} / {} / {}",
            x.version_id(),
            y.version_id(),
            z.version_id()
        )));
    }
    let matched_files: Vec<String> = y
        .records()
        .iter()
        .filter(|r| r.is_defective() && x.contains(&r.file_name) && z.contains(&r.file_name))
        .map(|r| r.file_name.clone())
        .collect();
    if matched_files.is_empty() {
        log::warn!(
            "triple {}/{}/{} has no matched defective files",
            x.version_id(),
            y.version_id(),
            z.version_id()
        );
    }
    Ok(ReleaseTriple {
        oldest: x,
        newer: y,
        most_recent: z,
        matched_files,
    })
}

pub fn compute_ndpv(triple: &ReleaseTriple, file_name: &str) -> Result<i64> {
    if !triple.is_matched(file_name) {
        return Err(Error::UnmatchedFile(file_name.to_string()));
    }
    let y = triple.newer.get(file_name).expect("matched");
    let z = triple.most_recent.get(file_name).expect("matched");
    Ok(i64::from(y.bug_count) - i64::from(z.bug_count))
}

/// Affine map of one feature onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureScale {
    pub min: f64,
    pub max: f64,
}

impl FeatureScale {
    /// Constant features (min = max) map every value to 0.
    pub fn is_constant(&self) -> bool {
        self.max <= self.min
    }

    pub fn apply(&self, v: f64) -> f64 {
        if self.is_constant() {
            return 0.0;
        }
        ((v - self.min) / (self.max - self.min)).clamp(0.0, 1.0)
    }

    pub fn invert(&self, u: f64) -> f64 {
        if self.is_constant() {
            return self.min;
        }
        self.min + u * (self.max - self.min)
    }
}

/// Min-max normalization fitted on the training and planning releases
/// (never on the validation release). Out-of-range values are clamped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationMap {
    scales: Vec<FeatureScale>,
}

impl NormalizationMap {
    pub fn fit(releases: &[&Release]) -> Result<Self> {
        let bounds = bounds_of(releases.iter().flat_map(|r| r.records().iter())).ok_or_else(
            || Error::Statistics("cannot fit normalization on empty releases".into()),
        )?;
        let scales = bounds
            .iter()
            .map(|&(min, max)| FeatureScale { min, max })
            .collect();
        Ok(Self { scales })
    }

    /// Identity-like map over `[0, 1]` for every feature.
    pub fn unit() -> Self {
        Self {
            scales: vec![FeatureScale { min: 0.0, max: 1.0 }; N_FEATURES],
        }
    }

    pub fn scale(&self, feature: usize) -> &FeatureScale {
        &self.scales[feature]
    }

    pub fn constant_features(&self) -> Vec<usize> {
        (0..N_FEATURES)
            .filter(|&f| self.scales[f].is_constant())
            .collect()
    }

    pub fn apply_value(&self, feature: usize, v: f64) -> f64 {
        self.scales[feature].apply(v)
    }

    pub fn invert_value(&self, feature: usize, u: f64) -> f64 {
        self.scales[feature].invert(u)
    }

    pub fn apply_vector(&self, v: &FeatureVector) -> FeatureVector {
        let mut out = [0.0; N_FEATURES];
        for (f, slot) in out.iter_mut().enumerate() {
            *slot = self.apply_value(f, v[f]);
        }
        out
    }
}

/// Normalizes every record of a release with a fitted map.
pub fn normalize(release: &Release, map: &NormalizationMap) -> Release {
    let records = release
        .records()
        .iter()
        .map(|r| MetricRecord {
            file_name: r.file_name.clone(),
            metrics: map.apply_vector(&r.metrics),
            bug_count: r.bug_count,
        })
        .collect();
    Release::new(release.version_id(), records).expect("normalizing preserves release invariants")
}

/// One experiment trial declared in a manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub dataset: String,
    pub oldest: PathBuf,
    pub newer: PathBuf,
    pub most_recent: PathBuf,
}

impl TrialSpec {
    /// Loads the three releases (version ids are the file stems) and forms the triple.
    pub fn load(&self) -> Result<ReleaseTriple> {
        let load = |p: &Path| {
            let id = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string());
            load_release(p, &id)
        };
        build_triple(load(&self.oldest)?, load(&self.newer)?, load(&self.most_recent)?)
    }
}

/// Parses a manifest: one `dataset: x.csv y.csv z.csv` line per trial.
/// Blank lines and `#` comments are skipped; relative paths resolve
/// against `base_dir`.
pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<Vec<TrialSpec>> {
    let mut trials = Vec::new();
    let mut names = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Manifest {
            line: line_no,
            message,
        };
        let (name, rest) = line
            .split_once(':')
            .ok_or_else(|| err("expected `dataset: x.csv y.csv z.csv`".into()))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(err("empty dataset name".into()));
        }
        let paths: Vec<&str> = rest.split_whitespace().collect();
        if paths.len() != 3 {
            return Err(err(format!("expected 3 release files, found {}", paths.len())));
        }
        if !names.insert(name.to_string()) {
            return Err(err(format!("duplicate dataset `{name}`")));
        }
        let resolve = |p: &str| {
            let p = Path::new(p);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base_dir.join(p)
            }
        };
        trials.push(TrialSpec {
            dataset: name.to_string(),
            oldest: resolve(paths[0]),
            newer: resolve(paths[1]),
            most_recent: resolve(paths[2]),
        });
    }
    Ok(trials)
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<TrialSpec>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_manifest(&text, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> String {
        let mut h = vec!["name".to_string(), "version".to_string(), "name".to_string()];
        h.extend(Metric::ALL.iter().map(|m| m.name().to_string()));
        h.push("bug".into());
        h.join(",")
    }

    fn row(name: &str, fill: f64, bug: u32) -> String {
        let mut cells = vec!["proj".to_string(), "1.0".to_string(), name.to_string()];
        cells.extend(std::iter::repeat_n(fill.to_string(), N_FEATURES));
        cells.push(bug.to_string());
        cells.join(",")
    }

    pub(crate) fn rec(name: &str, fill: f64, bug: u32) -> MetricRecord {
        MetricRecord::new(name, [fill; N_FEATURES], bug)
    }

    #[test]
    fn one_row_all_zero_metrics_is_defective() {
        let text = format!("{}\n{}\n", header(), row("a.B", 0.0, 3));
        let r = read_release(text.as_bytes(), "v1").unwrap();
        assert_eq!(r.len(), 1);
        let rec = &r.records()[0];
        assert_eq!(rec.file_name, "a.B");
        assert!(rec.is_defective());
        assert_eq!(rec.bug_count, 3);
        assert!(rec.metrics.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn empty_data_section_has_no_bounds() {
        let text = format!("{}\n", header());
        let r = read_release(text.as_bytes(), "v1").unwrap();
        assert!(r.is_empty());
        assert!(r.feature_bounds().is_none());
    }

    #[test]
    fn missing_column_names_the_column() {
        let text = header().replace(",lcom3,", ",lcomx,") + "\n";
        match read_release(text.as_bytes(), "v1") {
            Err(Error::Schema { column }) => assert_eq!(column, "lcom3"),
            other => panic!("unexpected {other:?}"),
        }
        let no_bug = header().replace(",bug", ",bugs") + "\n";
        assert!(matches!(
            read_release(no_bug.as_bytes(), "v1"),
            Err(Error::Schema { column }) if column == "bug"
        ));
    }

    #[test]
    fn non_numeric_cell_reports_row() {
        let bad = row("b", 1.0, 0).replacen(",1,", ",oops,", 1);
        let text = format!("{}\n{}\n{}\n", header(), row("a", 1.0, 0), bad);
        match read_release(text.as_bytes(), "v1") {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "wmc");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bounds_follow_records() {
        let r = Release::new("v", vec![rec("a", 1.0, 0), rec("b", 4.0, 1)]).unwrap();
        let b = r.feature_bounds().unwrap();
        assert!(b.iter().all(|&(lo, hi)| lo == 1.0 && hi == 4.0));
        assert!(Release::new("v", vec![rec("a", 1.0, 0), rec("a", 2.0, 0)]).is_err());
    }

    #[test]
    fn repeated_names_keep_first_row() {
        let text = format!("{}\n{}\n{}\n", header(), row("a", 1.0, 0), row("a", 2.0, 1));
        let r = read_release(text.as_bytes(), "v").unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.records()[0].bug_count, 0);
    }

    fn fixture() -> (Release, Release, Release) {
        let x = Release::new(
            "x",
            vec![rec("A", 1.0, 0), rec("B", 1.0, 1), rec("C", 1.0, 0), rec("D", 1.0, 0)],
        )
        .unwrap();
        let y = Release::new(
            "y",
            vec![rec("A", 2.0, 2), rec("B", 2.0, 3), rec("C", 2.0, 0), rec("E", 2.0, 5)],
        )
        .unwrap();
        let z = Release::new(
            "z",
            vec![rec("A", 3.0, 1), rec("B", 3.0, 3), rec("C", 3.0, 1), rec("E", 3.0, 0)],
        )
        .unwrap();
        (x, y, z)
    }

    #[test]
    fn triple_matches_shared_defective_names() {
        let (x, y, z) = fixture();
        let t = build_triple(x, y, z).unwrap();
        // A, B shared and defective in y; C clean in y; E missing from x.
        assert_eq!(t.matched_files(), &["A".to_string(), "B".to_string()]);
        assert!(t.matched_files().len() <= 4);
    }

    #[test]
    fn triple_without_defects_in_y_is_empty() {
        let (x, _, z) = fixture();
        let y = Release::new("y", vec![rec("A", 2.0, 0), rec("B", 2.0, 0)]).unwrap();
        let t = build_triple(x, y, z).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.total_ndpv(), 0);
    }

    #[test]
    fn triple_requires_distinct_releases() {
        let (x, y, _) = fixture();
        assert!(matches!(build_triple(x.clone(), y, x), Err(Error::Triple(_))));
    }

    #[test]
    fn ndpv_is_bug_delta() {
        let (x, y, z) = fixture();
        let t = build_triple(x.clone(), y.clone(), z.clone()).unwrap();
        assert_eq!(t.ndpv("A").unwrap(), 1);
        assert_eq!(t.ndpv("B").unwrap(), 0);
        assert!(matches!(t.ndpv("C"), Err(Error::UnmatchedFile(_))));
        assert!(matches!(t.ndpv("E"), Err(Error::UnmatchedFile(_))));

        // Swapping y and z negates NDPV (A is defective in both).
        let swapped = build_triple(x, z, y).unwrap();
        assert_eq!(swapped.ndpv("A").unwrap(), -1);
    }

    #[test]
    fn normalization_examples() {
        let s = FeatureScale { min: 0.0, max: 10.0 };
        assert_eq!(s.apply(5.0), 0.5);
        assert_eq!(s.apply(12.0), 1.0);
        assert_eq!(s.apply(-3.0), 0.0);
        let c = FeatureScale { min: 4.0, max: 4.0 };
        assert!(c.is_constant());
        assert_eq!(c.apply(4.0), 0.0);
        assert_eq!(c.apply(100.0), 0.0);
    }

    #[test]
    fn normalization_fits_on_given_releases_only() {
        let (x, y, z) = fixture();
        let map = NormalizationMap::fit(&[&x, &y]).unwrap();
        assert_eq!(map.scale(0), &FeatureScale { min: 1.0, max: 2.0 });
        let zn = normalize(&z, &map);
        assert!(zn.records().iter().all(|r| r.metrics.iter().all(|&v| v == 1.0)));
        assert!(NormalizationMap::fit(&[]).is_err());
    }

    #[test]
    fn manifest_parsing() {
        let text = "# trials\njedit: jedit-4.0.csv jedit-4.1.csv jedit-4.2.csv\n\ncamel1: /abs/c0.csv c2.csv c4.csv # note\n";
        let t = parse_manifest(text, Path::new("/data")).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].dataset, "jedit");
        assert_eq!(t[0].oldest, PathBuf::from("/data/jedit-4.0.csv"));
        assert_eq!(t[1].oldest, PathBuf::from("/abs/c0.csv"));
        assert_eq!(t[1].most_recent, PathBuf::from("/data/c4.csv"));

        assert!(matches!(
            parse_manifest("jedit a.csv b.csv c.csv", Path::new(".")),
            Err(Error::Manifest { line: 1, .. })
        ));
        assert!(parse_manifest("j: a b", Path::new(".")).is_err());
        assert!(parse_manifest("j: a b c\nj: d e f", Path::new(".")).is_err());
    }
}
