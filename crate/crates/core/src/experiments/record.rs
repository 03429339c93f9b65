use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::svg::line_chart;
use crate::error::Result;

/// How a verdict's value is compared with its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "==")]
    Equals,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Exceeds,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Relation {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Relation::Equals => value == threshold,
            Relation::AtMost => value <= threshold,
            Relation::Below => value < threshold,
            Relation::Exceeds => value > threshold,
            Relation::AtLeast => value >= threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equals => "==",
            Relation::AtMost => "<=",
            Relation::Below => "<",
            Relation::Exceeds => ">",
            Relation::AtLeast => ">=",
        }
    }
}

/// One checked claim: `value <relation> threshold`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
}

impl Verdict {
    pub fn new(name: &str, value: f64, relation: Relation, threshold: f64) -> Self {
        Verdict { name: name.to_string(), passed: relation.holds(value, threshold), value, relation, threshold }
    }
}

/// A table whose first column is the abscissa.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(columns: &[&str]) -> Self {
        Series { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }
}

/// Matrix elements an operator lost to the particle cap of one sector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub operator: String,
    pub sector: String,
    pub dimension: usize,
    pub dropped: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub scalars: BTreeMap<String, f64>,
    pub notes: BTreeMap<String, String>,
    pub series: BTreeMap<String, Series>,
    pub truncation: Vec<Truncation>,
    pub verdicts: Vec<Verdict>,
    /// Kept out of the payload so reruns are byte-identical.
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl ResultRecord {
    pub fn new(experiment: &str, config_hash: String, seed: u64) -> Self {
        ResultRecord {
            experiment: experiment.to_string(),
            config_hash,
            seed,
            scalars: BTreeMap::new(),
            notes: BTreeMap::new(),
            series: BTreeMap::new(),
            truncation: Vec::new(),
            verdicts: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn scalar(&mut self, name: &str, v: f64) {
        self.scalars.insert(name.to_string(), v);
    }

    pub fn note(&mut self, name: &str, text: impl Into<String>) {
        self.notes.insert(name.to_string(), text.into());
    }

    pub fn check(&mut self, name: &str, value: f64, relation: Relation, threshold: f64) -> bool {
        let v = Verdict::new(name, value, relation, threshold);
        let ok = v.passed;
        self.verdicts.push(v);
        ok
    }

    pub fn truncated(&mut self, operator: &str, sector: &str, dimension: usize, dropped: u64) {
        self.truncation.push(Truncation {
            operator: operator.to_string(),
            sector: sector.to_string(),
            dimension,
            dropped,
        });
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn total_dropped(&self) -> u64 {
        self.truncation.iter().map(|t| t.dropped).sum()
    }

    /// Deterministic JSON payload.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    /// Writes `<name>.json`, one `<name>_<series>.csv` per series (plus an
    /// SVG chart each when `svg` is set) and `<name>.timing.json`.
    pub fn write(&self, dir: &Path, svg: bool) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |name: String, body: &str| -> Result<()> {
            let p = dir.join(name);
            std::fs::write(&p, body)?;
            written.push(p);
            Ok(())
        };
        put(format!("{}.json", self.experiment), &self.to_json())?;
        for (name, series) in &self.series {
            put(format!("{}_{name}.csv", self.experiment), &series.to_csv())?;
            if svg {
                put(format!("{}_{name}.svg", self.experiment), &line_chart(&format!("{} {name}", self.experiment), series))?;
            }
        }
        let timing = serde_json::json!({ "experiment": self.experiment, "wall_time_s": self.wall_time_s });
        put(format!("{}.timing.json", self.experiment), &format!("{timing}\n"))?;
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Relation::Equals.holds(0.0, 0.0));
        assert!(!Relation::Equals.holds(1e-300, 0.0));
        assert!(Relation::AtMost.holds(1.0, 1.0) && !Relation::Below.holds(1.0, 1.0));
        assert!(Relation::AtLeast.holds(1.0, 1.0) && !Relation::Exceeds.holds(1.0, 1.0));
        assert!(!Relation::AtMost.holds(f64::NAN, 1.0) && !Relation::Exceeds.holds(f64::NAN, 1.0));
    }

    #[test]
    fn payload_excludes_wall_time() {
        let mut r = ResultRecord::new("demo", "00".into(), 3);
        r.check("x", 0.5, Relation::AtMost, 1.0);
        let mut s = Series::new(&["t", "y"]);
        s.push(vec![0.0, 1e-10]);
        r.series.insert("curve".into(), s);
        let a = r.to_json();
        r.wall_time_s = 12.0;
        assert_eq!(a, r.to_json());
        assert!(a.contains("\"relation\": \"<=\""));
        assert_eq!(r.series["curve"].to_csv(), "t,y\n0.0,1e-10\n");
        let back: ResultRecord = serde_json::from_str(&a).unwrap();
        assert_eq!(back.verdicts, r.verdicts);
        assert!(r.passed());
    }
}
