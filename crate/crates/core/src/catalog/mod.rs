//! Shipped groups and the applicability scan.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::group::Group;
use crate::reduction::{preprocess_theorem_main2, CertReport, Pipeline, Step};

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub file: &'static str,
    source: &'static str,
    pub order: usize,
    pub fitting_length: usize,
    /// Whether the lower-bound theorem applies (membership in the table of
    /// groups up to order 767).
    pub applicable: bool,
    /// Small-groups index, informational only.
    pub label: Option<&'static str>,
    pub description: &'static str,
}

macro_rules! entry {
    ($name:literal, $order:expr, $d:expr, $app:expr, $label:expr, $desc:literal) => {
        CatalogEntry {
            name: $name,
            file: concat!($name, ".grp"),
            source: include_str!(concat!("../../catalog/", $name, ".grp")),
            order: $order,
            fitting_length: $d,
            applicable: $app,
            label: $label,
            description: $desc,
        }
    };
}

static ENTRIES: &[CatalogEntry] = &[
    entry!("s3", 6, 2, false, Some("[6,1]"), "S3"),
    entry!("s4", 24, 3, false, Some("[24,12]"), "S4"),
    entry!("a4", 12, 2, false, Some("[12,3]"), "A4"),
    entry!("d4", 8, 1, false, Some("[8,3]"), "D8"),
    entry!("q8", 8, 1, false, Some("[8,4]"), "Q8"),
    entry!("sl23", 24, 2, false, Some("[24,3]"), "SL(2,3)"),
    entry!("gl23", 48, 3, false, Some("[48,29]"), "GL(2,3)"),
    entry!("s3xs3", 36, 2, false, Some("[36,10]"), "S3 x S3"),
    entry!("g72", 72, 2, false, Some("[72,40]"), "(C3 x C3) : D4"),
    entry!("g168", 168, 3, true, Some("[168,43]"), "(C2 x C2 x C2) : (C7 : C3)"),
    entry!("g216", 216, 3, true, Some("[216,153]"), "((C3 x C3) : Q8) : C3"),
    entry!("g432", 432, 4, true, Some("[432,734]"), "(((C3 x C3) : Q8) : C3) : C2"),
];

pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

impl CatalogEntry {
    /// Generator file contents.
    pub fn source(&self) -> &'static str {
        self.source
    }

    /// Builds the group and checks its order and Fitting length.
    pub fn load(&self) -> Result<Group> {
        let g = Group::from_spec(&self.source.parse()?)?;
        if g.order() != self.order {
            return Err(Error::Internal(format!("{}: order {} != {}", self.name, g.order(), self.order)));
        }
        let d = g.fitting_length()?;
        if d != self.fitting_length {
            return Err(Error::Internal(format!("{}: Fitting length {d} != {}", self.name, self.fitting_length)));
        }
        Ok(g)
    }
}

/// Resolves a catalog name, `c<n>` for a cyclic group, or a path to a
/// generator file.
pub fn load_group(spec: &str) -> Result<(String, Group)> {
    if let Some(e) = lookup(spec) {
        return Ok((e.name.to_string(), e.load()?));
    }
    let lower = spec.to_ascii_lowercase();
    if let Some(n) = lower.strip_prefix('c').and_then(|s| s.parse::<usize>().ok()) {
        return Ok((lower, Group::cyclic(n)?));
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("group").to_string();
        return Ok((name, Group::from_spec(&text.parse()?)?));
    }
    input(format!("unknown group '{spec}': not a catalog name, c<n>, or a file"))
}

pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn format_factors(f: &[(usize, u32)]) -> String {
    if f.is_empty() {
        return "1".into();
    }
    f.iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    FitlAtLeast4,
    Fitl3OddPart,
    Inapplicable,
}

impl Verdict {
    pub fn applicable(self) -> bool {
        self != Verdict::Inapplicable
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::FitlAtLeast4 => "FitL>=4",
            Verdict::Fitl3OddPart => "FitL=3-odd-part",
            Verdict::Inapplicable => "inapplicable",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineSummary {
    pub steps: Vec<Step>,
    pub cert: CertReport,
}

impl From<&Pipeline> for PipelineSummary {
    fn from(p: &Pipeline) -> Self {
        PipelineSummary { steps: p.steps.clone(), cert: p.cert.report().clone() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub order: usize,
    pub fitting_length: usize,
    /// `|G/𝒰₂G|`.
    pub u2_index: usize,
    pub u2_factors: Vec<(usize, u32)>,
    pub verdict: Verdict,
    pub reason: Option<String>,
    pub sat: Option<PipelineSummary>,
    pub id: Option<PipelineSummary>,
}

pub fn scan_criteria(g: &Group) -> Result<ScanReport> {
    let upper = g.upper_fitting_series()?;
    let d = upper.len() - 1;
    let u2_index = g.order() / upper[2.min(d)].order();
    let mut report = ScanReport {
        order: g.order(),
        fitting_length: d,
        u2_index,
        u2_factors: factorize(u2_index),
        verdict: Verdict::Inapplicable,
        reason: None,
        sat: None,
        id: None,
    };
    match preprocess_theorem_main2(g) {
        Ok(m) => {
            report.verdict = if d >= 4 { Verdict::FitlAtLeast4 } else { Verdict::Fitl3OddPart };
            report.sat = Some((&m.sat).into());
            report.id = Some((&m.id).into());
        }
        Err(Error::Inapplicable(msg)) => report.reason = Some(msg),
        Err(e) => return Err(e),
    }
    Ok(report)
}

#[derive(Debug, Serialize)]
pub struct ScanRow {
    pub name: &'static str,
    pub label: Option<&'static str>,
    pub expected_applicable: bool,
    pub report: Option<ScanReport>,
    pub error: Option<String>,
}

impl ScanRow {
    /// Verdict agrees with the catalog's expectation.
    pub fn matches(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.verdict.applicable() == self.expected_applicable)
    }
}

/// Scans every entry in parallel.
pub fn scan_catalog() -> Vec<ScanRow> {
    ENTRIES
        .par_iter()
        .map(|e| {
            let res = e.load().and_then(|g| scan_criteria(&g));
            let (report, error) = match res {
                Ok(r) => (Some(r), None),
                Err(err) => (None, Some(err.to_string())),
            };
            ScanRow { name: e.name, label: e.label, expected_applicable: e.applicable, report, error }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_load() {
        for e in entries() {
            let g = e.load().unwrap();
            let lower = g.lower_fitting_series().unwrap();
            assert_eq!(lower.len() - 1, e.fitting_length, "{}", e.name);
        }
        assert!(lookup("S4").is_some());
        assert_eq!(load_group("c7").unwrap().1.order(), 7);
        assert!(load_group("nope").is_err());
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(432), vec![(2, 4), (3, 3)]);
        assert_eq!(format_factors(&factorize(168)), "2^3*3*7");
        assert_eq!(format_factors(&factorize(1)), "1");
    }

    #[test]
    fn scan_examples() {
        let s4 = scan_criteria(&lookup("s4").unwrap().load().unwrap()).unwrap();
        assert_eq!((s4.fitting_length, s4.u2_index, s4.verdict), (3, 2, Verdict::Inapplicable));
        let g168 = scan_criteria(&lookup("g168").unwrap().load().unwrap()).unwrap();
        assert_eq!((g168.fitting_length, g168.verdict), (3, Verdict::Fitl3OddPart));
        assert_eq!(g168.u2_index, 3);
        assert!(g168.sat.is_some());
        let g432 = scan_criteria(&lookup("g432").unwrap().load().unwrap()).unwrap();
        assert_eq!(g432.verdict, Verdict::FitlAtLeast4);
        let c5 = scan_criteria(&Group::cyclic(5).unwrap()).unwrap();
        assert_eq!((c5.fitting_length, c5.u2_index, c5.verdict), (1, 1, Verdict::Inapplicable));
    }

    #[test]
    fn scan_matches_table() {
        for row in scan_catalog() {
            assert!(row.matches(), "{}: {:?} {:?}", row.name, row.report, row.error);
        }
    }
}
