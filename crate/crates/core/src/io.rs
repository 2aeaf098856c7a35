//! Instance and report files, the criterion runner, and text tables.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::criteria::{
    mo_certify, range_certify, ranger_certify, reshaped_kruskal_best, Certificate, Criterion, Instance, Verdict,
};
use crate::error::{CriteriaError, PointSetError};
use crate::field::PrimeField;
use crate::gen::{GeneratedInstance, GroundTruth};
use crate::matrix::DenseMatrix;
use crate::octic::{certify_octic14, Octic14Report, ResidualFamily, SystemMode};
use crate::points::{HilbertProfile, KruskalReport, PointSet};

pub const TOOL: &str = "waring";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep only the message
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        InputError::Parse {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

fn field_error(field: impl Into<String>, message: impl ToString) -> InputError {
    InputError::Field {
        field: field.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<GroundTruth>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_params: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points_b: Option<Vec<Vec<i64>>>,
}

/// Signed integer coordinates as written by people; reduced mod `prime`
/// only when converted to an [`Instance`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub prime: u64,
    pub n: usize,
    pub degree: u32,
    pub points: Vec<Vec<i64>>,
    pub lambda: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<InstanceMetadata>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<(Self, Vec<u8>), InputError> {
        let bytes = std::fs::read(path)?;
        let text = std::str::from_utf8(&bytes).map_err(|e| field_error("file", e))?;
        Ok((Self::parse(text)?, bytes))
    }

    pub fn field(&self) -> Result<PrimeField, InputError> {
        PrimeField::new(self.prime).map_err(|e| field_error("prime", e))
    }

    pub fn point_set(&self) -> Result<PointSet, InputError> {
        let field = self.field()?;
        if self.n == 0 {
            return Err(field_error("n", "must be at least 1"));
        }
        if self.points.is_empty() {
            return Err(field_error("points", "empty point list"));
        }
        PointSet::from_signed(field, self.n, &self.points).map_err(|e| match e {
            PointSetError::ZeroPoint(i) | PointSetError::Arity { index: i, .. } => {
                field_error(format!("points[{i}]"), e)
            }
            PointSetError::Duplicate(_, j) => field_error(format!("points[{j}]"), e),
            other => field_error("points", other),
        })
    }

    pub fn to_instance(&self) -> Result<Instance, InputError> {
        let points = self.point_set()?;
        if self.degree == 0 {
            return Err(field_error("degree", "must be at least 1"));
        }
        if self.lambda.len() != self.points.len() {
            return Err(field_error(
                "lambda",
                format!("has {} entries for {} points", self.lambda.len(), self.points.len()),
            ));
        }
        let field = points.field();
        let lambda = self.lambda.iter().map(|&l| field.from_i64(l)).collect();
        Instance::new(points, self.degree, lambda).map_err(|e| field_error("lambda", e))
    }

    pub fn from_instance(inst: &Instance, metadata: Option<InstanceMetadata>) -> Self {
        let field = inst.points().field();
        let signed = |v: &[u64]| v.iter().map(|&x| field.to_signed(x)).collect::<Vec<_>>();
        InstanceFile {
            prime: field.modulus(),
            n: inst.points().n(),
            degree: inst.degree(),
            points: inst.points().points().iter().map(|p| signed(p)).collect(),
            lambda: signed(inst.lambda()),
            metadata,
        }
    }

    pub fn from_generated(g: &GeneratedInstance, generator: &str) -> Self {
        let field = g.instance.points().field();
        let wd = g.witness_data.as_ref();
        let metadata = InstanceMetadata {
            generator: Some(generator.to_string()),
            seed: Some(g.seed),
            ground_truth: Some(g.ground_truth),
            witness_params: wd.and_then(|w| w.params.clone()),
            points_b: wd.and_then(|w| w.points_b.as_ref()).map(|pts| {
                pts.iter()
                    .map(|p| p.iter().map(|&x| field.to_signed(x)).collect())
                    .collect()
            }),
        };
        Self::from_instance(&g.instance, Some(metadata))
    }

    /// Canonical text: one point per line, trailing newline. Parsing this
    /// text and writing it again reproduces it byte for byte.
    pub fn to_canonical_string(&self) -> String {
        let row = |v: &[i64]| {
            let items: Vec<String> = v.iter().map(i64::to_string).collect();
            format!("[{}]", items.join(", "))
        };
        let mut s = String::from("{\n");
        let _ = writeln!(s, "  \"prime\": {},", self.prime);
        let _ = writeln!(s, "  \"n\": {},", self.n);
        let _ = writeln!(s, "  \"degree\": {},", self.degree);
        s.push_str("  \"points\": [\n");
        for (i, p) in self.points.iter().enumerate() {
            let sep = if i + 1 < self.points.len() { "," } else { "" };
            let _ = writeln!(s, "    {}{sep}", row(p));
        }
        s.push_str("  ],\n");
        let _ = write!(s, "  \"lambda\": {}", row(&self.lambda));
        if let Some(meta) = &self.metadata {
            let meta = serde_json::to_string(meta).expect("metadata serializes");
            let _ = write!(s, ",\n  \"metadata\": {meta}");
        }
        s.push_str("\n}\n");
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriteriaSelection {
    All,
    Range,
    Ranger,
    Mo,
    Kruskal,
    Octic14,
}

impl std::str::FromStr for CriteriaSelection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "all" => CriteriaSelection::All,
            "range" => CriteriaSelection::Range,
            "ranger" => CriteriaSelection::Ranger,
            "mo" => CriteriaSelection::Mo,
            "kruskal" => CriteriaSelection::Kruskal,
            "octic14" => CriteriaSelection::Octic14,
            other => {
                return Err(format!(
                    "unknown criteria '{other}' (expected all, range, ranger, mo, kruskal or octic14)"
                ))
            }
        })
    }
}

impl CriteriaSelection {
    /// Criteria to run, cheapest first.
    pub fn criteria(self) -> Vec<Criterion> {
        match self {
            CriteriaSelection::All => vec![
                Criterion::Range,
                Criterion::Ranger,
                Criterion::Mo,
                Criterion::ReshapedKruskal,
                Criterion::Octic14,
            ],
            CriteriaSelection::Range => vec![Criterion::Range],
            CriteriaSelection::Ranger => vec![Criterion::Ranger],
            CriteriaSelection::Mo => vec![Criterion::Mo],
            CriteriaSelection::Kruskal => vec![Criterion::ReshapedKruskal],
            CriteriaSelection::Octic14 => vec![Criterion::Octic14],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub criterion: Criterion,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub certificates: Vec<Certificate>,
    pub verdict: Verdict,
    pub timings: Vec<Timing>,
}

fn refusal(criterion: Criterion, err: CriteriaError) -> Certificate {
    let mut cert = Certificate::new(criterion);
    cert.verdict = match err {
        CriteriaError::RedundancyDetected(reason) => Verdict::Degenerate { reason },
        other => Verdict::Inconclusive {
            reason: format!("not applicable: {other}"),
        },
    };
    cert
}

pub fn run_criterion(inst: &Instance, criterion: Criterion, mode: SystemMode) -> Certificate {
    let result = match criterion {
        Criterion::Range => range_certify(inst),
        Criterion::Ranger => ranger_certify(inst),
        Criterion::Mo => mo_certify(inst),
        Criterion::ReshapedKruskal => reshaped_kruskal_best(inst),
        Criterion::Octic14 => Ok(certify_octic14(inst, mode)),
    };
    result.unwrap_or_else(|e| refusal(criterion, e))
}

/// Runs the selected criteria in order and stops at the first that decides
/// identifiability either way. Without such a verdict the result is a rank
/// certificate when one was found, else `Degenerate` if any criterion
/// detected redundancy, else `Inconclusive`.
pub fn run_check(inst: &Instance, selection: CriteriaSelection, mode: SystemMode) -> CheckOutcome {
    let mut certificates = Vec::new();
    let mut timings = Vec::new();
    for criterion in selection.criteria() {
        let start = Instant::now();
        let cert = run_criterion(inst, criterion, mode);
        timings.push(Timing {
            criterion,
            millis: start.elapsed().as_secs_f64() * 1e3,
        });
        let verdict = cert.verdict.clone();
        certificates.push(cert);
        match verdict {
            Verdict::IdentifiableOfRank { .. } | Verdict::NotIdentifiable { .. } => {
                return CheckOutcome {
                    certificates,
                    verdict,
                    timings,
                }
            }
            // redundancy is a property of the input, not of the criterion
            Verdict::Degenerate { .. } if criterion != Criterion::Octic14 => {
                return CheckOutcome {
                    certificates,
                    verdict,
                    timings,
                }
            }
            _ => {}
        }
    }
    let verdict = certificates
        .iter()
        .find(|c| matches!(c.verdict, Verdict::ComputesRank { .. }))
        .or_else(|| certificates.iter().find(|c| matches!(c.verdict, Verdict::Degenerate { .. })))
        .map(|c| c.verdict.clone())
        .unwrap_or_else(|| Verdict::Inconclusive {
            reason: "no criterion certified the decomposition".into(),
        });
    CheckOutcome {
        certificates,
        verdict,
        timings,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool: String,
    pub version: String,
    pub input_digest: String,
    pub prime: u64,
    pub mode: SystemMode,
    pub criteria: CriteriaSelection,
    pub certificates: Vec<Certificate>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
    pub report_digest: String,
}

impl ReportFile {
    pub fn new(
        input: &[u8],
        inst: &Instance,
        selection: CriteriaSelection,
        mode: SystemMode,
        outcome: CheckOutcome,
        with_timings: bool,
    ) -> Self {
        let mut report = ReportFile {
            tool: TOOL.into(),
            version: VERSION.into(),
            input_digest: sha256_hex(input),
            prime: inst.points().field().modulus(),
            mode,
            criteria: selection,
            certificates: outcome.certificates,
            verdict: outcome.verdict,
            timings: None,
            report_digest: String::new(),
        };
        report.report_digest = report.digest();
        if with_timings {
            report.timings = Some(outcome.timings);
        }
        report
    }

    /// SHA-256 of the report with timings and the digest itself blanked.
    pub fn digest(&self) -> String {
        let mut stripped = self.clone();
        stripped.timings = None;
        stripped.report_digest = String::new();
        sha256_hex(serde_json::to_string(&stripped).expect("report serializes").as_bytes())
    }

    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// `h` and `Dh` rows, one column per degree.
pub fn format_hilbert_table(profile: &HilbertProfile) -> String {
    let width = profile
        .values
        .iter()
        .chain(&profile.differences)
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1)
        .max((profile.values.len().saturating_sub(1)).to_string().len());
    let row = |label: &str, vals: Vec<String>| {
        let cells: Vec<String> = vals.iter().map(|v| format!("{v:>width$}")).collect();
        format!("{label:<4} {}\n", cells.join(" "))
    };
    let mut out = row("j", (0..profile.values.len()).map(|j| j.to_string()).collect());
    out += &row("h", profile.values.iter().map(|v| v.to_string()).collect());
    out += &row("Dh", profile.differences.iter().map(|v| v.to_string()).collect());
    out
}

pub fn format_kruskal(report: &KruskalReport) -> String {
    format!(
        "k_{} = {} (subsets examined: {})\n",
        report.degree, report.rank, report.subsets_examined
    )
}

fn format_matrix(m: &DenseMatrix) -> String {
    let field = m.field();
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|r| m.row(r).iter().map(|&x| field.to_signed(x).to_string()).collect())
        .collect();
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            format!("  {}\n", cells.join(" "))
        })
        .collect()
}

/// Debug dump of the Hilbert-Burch matrix, the normalization matrix and the
/// system matrix.
pub fn format_syzygy_dump(report: &Octic14Report, fam: &ResidualFamily, normalization: &DenseMatrix) -> String {
    let hb = &fam.base;
    let mut s = String::new();
    let _ = writeln!(s, "Q = {}", hb.quartic.to_string_signed());
    for (j, q) in hb.quintics.iter().enumerate() {
        let _ = writeln!(s, "Q{} = {}", j + 1, q.to_string_signed());
    }
    s.push_str("M (5x4):\n");
    for (r, row) in hb.matrix().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|f| f.to_string_signed()).collect();
        let _ = writeln!(s, "  row {}: {}", r + 1, cells.join(" | "));
    }
    let _ = writeln!(s, "C (12x12), rank {}:", report.normalization_rank);
    s += &format_matrix(normalization);
    let _ = writeln!(
        s,
        "system ({}x12, mode {:?}), rank {}:",
        report.system_matrix.rows(),
        report.mode,
        report.system_rank
    );
    s += &format_matrix(&report.system_matrix);
    if let Some(w) = &report.witness {
        let field = hb.quartic.field();
        let a: Vec<String> = w.params.iter().map(|&x| field.to_signed(x).to_string()).collect();
        let _ = writeln!(s, "witness a = ({})", a.join(", "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "{\n  \"prime\": 31991,\n  \"n\": 2,\n  \"degree\": 3,\n  \"points\": [\n    [1, 0, 0],\n    [0, -1, 0]\n  ],\n  \"lambda\": [1, -2]\n}\n";

    #[test]
    fn canonical_round_trip() {
        let file = InstanceFile::parse(SAMPLE).unwrap();
        assert_eq!(file.to_canonical_string(), SAMPLE);
        let inst = file.to_instance().unwrap();
        assert_eq!(inst.points().points()[1], vec![0, 31990, 0]);
        assert_eq!(inst.lambda(), &[1, 31989]);
        assert_eq!(InstanceFile::from_instance(&inst, None), file);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad_arity = SAMPLE.replace("[0, -1, 0]", "[0, -1]");
        let err = InstanceFile::parse(&bad_arity).unwrap().to_instance().unwrap_err();
        assert!(err.to_string().starts_with("points[1]"), "{err}");

        let zero = SAMPLE.replace("[0, -1, 0]", "[0, 0, 0]");
        let err = InstanceFile::parse(&zero).unwrap().to_instance().unwrap_err();
        assert!(err.to_string().starts_with("points[1]"), "{err}");

        let composite = SAMPLE.replace("31991", "31993");
        let err = InstanceFile::parse(&composite).unwrap().to_instance().unwrap_err();
        assert!(err.to_string().starts_with("prime"), "{err}");

        let short = SAMPLE.replace("[1, -2]", "[1]");
        let err = InstanceFile::parse(&short).unwrap().to_instance().unwrap_err();
        assert!(err.to_string().starts_with("lambda"), "{err}");

        let err = InstanceFile::parse("{\n  \"prime\": 7,\n  \"points\": 3\n}").unwrap_err();
        assert!(matches!(err, InputError::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn hilbert_table_layout() {
        let profile = HilbertProfile::from_values(vec![1, 3, 5, 6, 6], 6);
        assert_eq!(
            format_hilbert_table(&profile),
            "j    0 1 2 3 4\nh    1 3 5 6 6\nDh   1 2 2 1 0\n"
        );
    }

    #[test]
    fn selection_parsing() {
        assert_eq!("kruskal".parse(), Ok(CriteriaSelection::Kruskal));
        assert!("nope".parse::<CriteriaSelection>().is_err());
    }
}
