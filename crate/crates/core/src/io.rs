//! CSV and JSON result files.
//!
//! Sweep results use one row per node count under the fixed header
//! [`RESULTS_HEADER`]. Columns that do not apply to a topology (`j` for
//! `sym-knn`, `k` and `j` for `rgg`, `radius` for the rank-only kinds) are
//! left empty. Reals carry six decimals. The JSON form is an array of
//! objects with the same keys plus `degree_histogram`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::experiment::{AggregateResult, TopologyKind};

pub const RESULTS_HEADER: &str =
    "topology,k,j,n,trials,seed,connectivity_probability,mean_degree,min_degree,max_degree,radius";

pub const HISTOGRAM_HEADER: &str = "degree,proportion";

/// One result row, keyed the way the files name the columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub topology: TopologyKind,
    pub k: Option<usize>,
    pub j: Option<usize>,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub connectivity_probability: f64,
    pub mean_degree: f64,
    pub min_degree: f64,
    pub max_degree: f64,
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub degree_histogram: BTreeMap<usize, f64>,
}

impl From<&AggregateResult> for ResultRecord {
    fn from(a: &AggregateResult) -> Self {
        ResultRecord {
            topology: a.kind,
            k: a.k,
            j: a.j,
            n: a.n,
            trials: a.trials,
            seed: a.master_seed,
            connectivity_probability: a.connectivity_probability,
            mean_degree: a.mean_degree,
            min_degree: a.mean_min_degree,
            max_degree: a.mean_max_degree,
            radius: a.radius,
            degree_histogram: a.degree_histogram.clone(),
        }
    }
}

impl From<ResultRecord> for AggregateResult {
    fn from(r: ResultRecord) -> Self {
        AggregateResult {
            n: r.n,
            kind: r.topology,
            k: r.k,
            j: r.j,
            connectivity_probability: r.connectivity_probability,
            mean_degree: r.mean_degree,
            mean_min_degree: r.min_degree,
            mean_max_degree: r.max_degree,
            degree_histogram: r.degree_histogram,
            trials: r.trials,
            master_seed: r.seed,
            radius: r.radius,
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn real(v: f64) -> String {
    format!("{v:.6}")
}

/// Renders sweep results as CSV text.
pub fn results_to_csv(results: &[AggregateResult]) -> Result<String> {
    if results.is_empty() {
        return Err(invalid("no results to write"));
    }
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for a in results {
        let row = [
            a.kind.tag().to_string(),
            opt(a.k),
            opt(a.j),
            a.n.to_string(),
            a.trials.to_string(),
            a.master_seed.to_string(),
            real(a.connectivity_probability),
            real(a.mean_degree),
            real(a.mean_min_degree),
            real(a.mean_max_degree),
            opt(a.radius.map(real)),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_csv(results: &[AggregateResult], path: impl AsRef<Path>) -> Result<()> {
    let text = results_to_csv(results)?;
    fs::write(path, text)?;
    Ok(())
}

pub fn write_json(results: &[AggregateResult], path: impl AsRef<Path>) -> Result<()> {
    if results.is_empty() {
        return Err(invalid("no results to write"));
    }
    let records: Vec<ResultRecord> = results.iter().map(ResultRecord::from).collect();
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, &records)?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Parses a results CSV. Degree histograms are not part of the CSV and come
/// back empty.
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<AggregateResult>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != RESULTS_HEADER {
        return Err(invalid(format!("unexpected results header `{header}`")));
    }
    reader
        .deserialize::<ResultRecord>()
        .map(|r| Ok(r?.into()))
        .collect()
}

pub fn read_json(path: impl AsRef<Path>) -> Result<Vec<AggregateResult>> {
    let records: Vec<ResultRecord> = serde_json::from_reader(fs::File::open(path)?)?;
    Ok(records.into_iter().map(Into::into).collect())
}

/// Reads either format, chosen by the `.json` extension.
pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<AggregateResult>> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        read_json(path)
    } else {
        read_csv(path)
    }
}

/// Writes `degree,proportion` rows in ascending degree. The proportions must
/// sum to one within 1e-9.
pub fn write_histogram_csv(hist: &BTreeMap<usize, f64>, path: impl AsRef<Path>) -> Result<()> {
    if hist.is_empty() {
        return Err(invalid("empty histogram"));
    }
    let total: f64 = hist.values().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("histogram proportions sum to {total}, not 1")));
    }
    let mut out = String::from(HISTOGRAM_HEADER);
    out.push('\n');
    for (d, p) in hist {
        out.push_str(&format!("{d},{}\n", real(*p)));
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn agg(kind: TopologyKind, p: f64) -> AggregateResult {
        AggregateResult {
            n: 100,
            kind,
            k: kind.uses_k().then_some(5),
            j: kind.uses_j().then_some(3),
            connectivity_probability: p,
            mean_degree: 4.49,
            mean_min_degree: 3.0,
            mean_max_degree: 7.25,
            degree_histogram: BTreeMap::from([(3, 0.25), (4, 0.75)]),
            trials: 100,
            master_seed: 42,
            radius: kind.uses_radius().then_some(0.18172121),
        }
    }

    #[test]
    fn single_row_layout() {
        let text = results_to_csv(&[agg(TopologyKind::KjNn, 0.939)]).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], RESULTS_HEADER);
        assert_eq!(lines[1], "kj-nn,5,3,100,100,42,0.939000,4.490000,3.000000,7.250000,");
        assert!(text.ends_with('\n') && !text.contains('\r'));

        let text = results_to_csv(&[agg(TopologyKind::Rgg, 1.0), agg(TopologyKind::SymKnn, 0.5)]).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[1], "rgg,,,100,100,42,1.000000,4.490000,3.000000,7.250000,0.181721");
        assert_eq!(lines[2], "sym-knn,5,,100,100,42,0.500000,4.490000,3.000000,7.250000,");
    }

    #[test]
    fn empty_results_create_no_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        assert!(write_csv(&[], &path).is_err());
        assert!(!path.exists());
        assert!(write_json(&[], dir.path().join("out.json")).is_err());
        assert!(!dir.path().join("out.json").exists());
    }

    #[test]
    fn histogram_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.csv");
        write_histogram_csv(&BTreeMap::from([(3, 0.5), (2, 0.5)]), &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "degree,proportion\n2,0.500000\n3,0.500000\n");
        write_histogram_csv(&BTreeMap::from([(9, 1.0)]), &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "degree,proportion\n9,1.000000\n");

        let bad = dir.path().join("bad.csv");
        assert!(write_histogram_csv(&BTreeMap::from([(1, 0.5)]), &bad).is_err());
        assert!(write_histogram_csv(&BTreeMap::new(), &bad).is_err());
        assert!(!bad.exists());
    }

    #[test]
    fn json_keeps_histogram() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let rows = vec![agg(TopologyKind::KjNnRgg, 0.93), agg(TopologyKind::SymKnn, 1.0)];
        write_json(&rows, &path).unwrap();
        assert_eq!(read_results(&path).unwrap(), rows);
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v[0]["topology"], "kj-nn-rgg");
        assert_eq!(v[1]["j"], serde_json::Value::Null);
    }

    #[test]
    fn rejects_foreign_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(read_csv(&path).is_err());
    }

    fn arb_result() -> impl Strategy<Value = AggregateResult> {
        (
            proptest::sample::select(TopologyKind::ALL.to_vec()),
            2usize..5000,
            1usize..500,
            any::<u64>(),
            0.0f64..=1.0,
            0.0f64..50.0,
            0.0f64..50.0,
            0.0f64..50.0,
            0.001f64..1.5,
        )
            .prop_map(|(kind, n, trials, seed, p, mean, min, max, r)| AggregateResult {
                n,
                kind,
                k: kind.uses_k().then_some(6),
                j: kind.uses_j().then_some(5),
                connectivity_probability: p,
                mean_degree: mean,
                mean_min_degree: min,
                mean_max_degree: max,
                degree_histogram: BTreeMap::new(),
                trials,
                master_seed: seed,
                radius: kind.uses_radius().then_some(r),
            })
    }

    proptest! {
        #[test]
        fn csv_round_trip_to_six_decimals(rows in proptest::collection::vec(arb_result(), 1..8)) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("r.csv");
            write_csv(&rows, &path).unwrap();
            let back = read_csv(&path).unwrap();
            prop_assert_eq!(back.len(), rows.len());
            let close = |a: f64, b: f64| (a - b).abs() <= 5e-7 + 1e-15;
            for (a, b) in rows.iter().zip(&back) {
                prop_assert_eq!((a.kind, a.k, a.j, a.n, a.trials, a.master_seed), (b.kind, b.k, b.j, b.n, b.trials, b.master_seed));
                prop_assert!(close(a.connectivity_probability, b.connectivity_probability));
                prop_assert!(close(a.mean_degree, b.mean_degree));
                prop_assert!(close(a.mean_min_degree, b.mean_min_degree));
                prop_assert!(close(a.mean_max_degree, b.mean_max_degree));
                prop_assert_eq!(a.radius.is_some(), b.radius.is_some());
                if let (Some(x), Some(y)) = (a.radius, b.radius) {
                    prop_assert!(close(x, y));
                }
            }
        }
    }
}
