//! The shipped volume table: loading, structural checks and verification
//! against the pipeline.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{self, Rational};
use crate::exact::PiPoly;
use crate::genfun::Pipeline;
use crate::strata::StratumSignature;
use crate::volume::{compute_volume, Convention, Method, PoleConvention};

pub const HEADER: [&str; 6] = ["dim", "genus", "stratum", "num", "den", "pi_power"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    /// 1-based line in the source file.
    pub line: usize,
    pub dim: u32,
    pub genus: u32,
    pub stratum: StratumSignature,
    pub coefficient: Rational,
    pub pi_power: i32,
    raw: [String; 6],
}

impl TableRow {
    pub fn value(&self) -> PiPoly {
        PiPoly::monomial(self.coefficient.clone(), self.pi_power)
    }

    pub fn weight(&self) -> u32 {
        self.stratum.to_profile().weight()
    }

    /// The row as it appeared in the file.
    pub fn to_csv_line(&self) -> String {
        self.raw.join(",")
    }

    fn parse(line: usize, rec: &csv::StringRecord) -> Result<Self> {
        let err = |msg: String| Error::Table { line, msg };
        if rec.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", rec.len())));
        }
        let raw: [String; 6] = std::array::from_fn(|i| rec[i].to_string());
        let int_field = |i: usize| -> Result<i64> {
            raw[i].trim().parse().map_err(|_| err(format!("bad {} `{}`", HEADER[i], raw[i])))
        };
        let dim = int_field(0)?;
        let genus = int_field(1)?;
        let stratum = StratumSignature::parse_loose(&raw[2]).map_err(|e| err(e.to_string()))?;
        let num = rational::parse(raw[3].trim()).map_err(|_| err(format!("bad num `{}`", raw[3])))?;
        let den = rational::parse(raw[4].trim()).map_err(|_| err(format!("bad den `{}`", raw[4])))?;
        if den.is_zero() {
            return Err(err("zero denominator".into()));
        }
        let pi_power = int_field(5)? as i32;
        let inv = stratum.to_profile().invariants().map_err(|e| err(e.to_string()))?;
        if dim != inv.dim as i64 {
            return Err(err(format!("dim {dim} but {stratum} has dimension {}", inv.dim)));
        }
        if genus != inv.genus as i64 {
            return Err(err(format!("genus {genus} but {stratum} has genus {}", inv.genus)));
        }
        if pi_power != 2 * inv.g_eff as i32 {
            return Err(err(format!("pi_power {pi_power} but 2·g_eff = {}", 2 * inv.g_eff)));
        }
        Ok(Self { line, dim: dim as u32, genus: genus as u32, stratum, coefficient: num / den, pi_power, raw })
    }
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Table { line: 1, msg: e.to_string() })?;
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::Table { line: 1, msg: format!("header must be {}", HEADER.join(",")) });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Table { line, msg: e.to_string() })?;
        rows.push(TableRow::parse(line, &rec)?);
    }
    Ok(rows)
}

pub fn load_table(path: &Path) -> Result<Vec<TableRow>> {
    parse_table(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// Same stratum listed with different values.
    Conflict,
    /// Above the weight cap.
    Skip,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Conflict => "CONFLICT",
            Status::Skip => "SKIP",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RowReport {
    pub line: usize,
    pub stratum: String,
    pub weight: u32,
    pub expected: String,
    pub computed: Option<String>,
    pub status: Status,
    /// For conflicts: whether this row's value matches the computed one.
    pub matches: Option<bool>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub rows: Vec<RowReport>,
    pub counts: BTreeMap<Status, usize>,
}

impl Report {
    pub fn count(&self, s: Status) -> usize {
        self.counts.get(&s).copied().unwrap_or(0)
    }

    /// No FAIL and no ERROR rows.
    pub fn ok(&self) -> bool {
        self.count(Status::Fail) == 0 && self.count(Status::Error) == 0
    }
}

/// Rows other than SKIP, then a summary line.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.rows.iter().filter(|r| r.status != Status::Skip) {
            write!(f, "{:<8} line {:>3}  Q({})  w={}  table {}", r.status, r.line, r.stratum, r.weight, r.expected)?;
            if let Some(c) = &r.computed {
                write!(f, "  computed {c}")?;
            }
            if let Some(n) = &r.note {
                write!(f, "  [{n}]")?;
            }
            writeln!(f)?;
        }
        let summary: Vec<String> = self.counts.iter().map(|(s, n)| format!("{s} {n}")).collect();
        write!(f, "summary: {}", summary.join(", "))
    }
}

/// Checks every row with `w <= cap` against the pipeline (AEZ convention).
///
/// Strata are computed once each, in parallel under the pipeline's execution
/// mode; the report is ordered by line.
pub fn verify_table(rows: &[TableRow], cap: u32, pipe: &Pipeline, poles: PoleConvention) -> Report {
    let mut by_stratum: BTreeMap<StratumSignature, Vec<&TableRow>> = BTreeMap::new();
    for r in rows {
        by_stratum.entry(r.stratum.clone()).or_default().push(r);
    }
    let todo: Vec<&StratumSignature> =
        by_stratum.keys().filter(|s| s.to_profile().weight() <= cap).collect();
    let results = pipe.config().exec.map(&todo, |s| {
        compute_volume(pipe, s, Convention::Aez, Method::Eo, poles).map(|v| v.value())
    });
    let computed: BTreeMap<&StratumSignature, Result<PiPoly>> = todo.into_iter().zip(results).collect();

    let mut out = Vec::with_capacity(rows.len());
    for (sig, group) in &by_stratum {
        let conflict = group.iter().any(|r| r.value() != group[0].value());
        let res = computed.get(sig);
        for r in group {
            let mut rep = RowReport {
                line: r.line,
                stratum: sig.to_string(),
                weight: r.weight(),
                expected: r.value().to_string(),
                computed: None,
                status: Status::Skip,
                matches: None,
                note: None,
            };
            match res {
                None => rep.note = Some(format!("weight above cap {cap}")),
                Some(Err(e)) => {
                    rep.status = Status::Error;
                    rep.note = Some(e.to_string());
                }
                Some(Ok(v)) => {
                    rep.computed = Some(v.to_string());
                    rep.status = if *v == r.value() { Status::Pass } else { Status::Fail };
                }
            }
            if conflict {
                rep.matches = rep.computed.as_ref().map(|_| rep.status == Status::Pass);
                let others: Vec<String> = group.iter().filter(|o| o.line != r.line).map(|o| o.line.to_string()).collect();
                let prefix = format!("conflicts with line {}", others.join(", "));
                rep.note = Some(match rep.note.take() {
                    Some(n) => format!("{prefix}; {n}"),
                    None => prefix,
                });
                rep.status = Status::Conflict;
            }
            out.push(rep);
        }
    }
    out.sort_by_key(|r| r.line);
    let mut counts = BTreeMap::new();
    for r in &out {
        *counts.entry(r.status).or_insert(0) += 1;
    }
    Report { rows: out, counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    const SAMPLE: &str = "dim,genus,stratum,num,den,pi_power\n2,0,-1 -1 -1 -1,2,1,2\n4,2,5 -1,28,135,4\n";

    #[test]
    fn parse_and_round_trip() {
        let rows = parse_table(SAMPLE).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].coefficient, rat(28, 135));
        assert_eq!(rows[1].line, 3);
        let back: Vec<String> = rows.iter().map(|r| r.to_csv_line()).collect();
        assert_eq!(back, SAMPLE.lines().skip(1).collect::<Vec<_>>());
    }

    #[test]
    fn structural_rejects() {
        let bad_pi = "dim,genus,stratum,num,den,pi_power\n2,0,-1 -1 -1 -1,2,1,4\n";
        assert!(matches!(parse_table(bad_pi), Err(Error::Table { line: 2, .. })));
        let bad_dim = "dim,genus,stratum,num,den,pi_power\n3,0,-1 -1 -1 -1,2,1,2\n";
        assert!(parse_table(bad_dim).is_err());
        let bad_sig = "dim,genus,stratum,num,den,pi_power\n2,0,3 -1,2,1,2\n";
        assert!(parse_table(bad_sig).is_err());
        assert!(parse_table("a,b\n").is_err());
    }

    #[test]
    fn conflicts_and_skips() {
        let text = "dim,genus,stratum,num,den,pi_power\n2,0,-1 -1 -1 -1,2,1,2\n2,0,-1 -1 -1 -1,3,1,2\n4,2,5 -1,28,135,4\n";
        let rows = parse_table(text).unwrap();
        let pipe = Pipeline::default();
        let rep = verify_table(&rows, 2, &pipe, PoleConvention::IncludePoles);
        assert_eq!(rep.rows.iter().map(|r| r.status).collect::<Vec<_>>(), [Status::Conflict, Status::Conflict, Status::Skip]);
        assert_eq!(rep.rows[0].matches, Some(true));
        assert_eq!(rep.rows[1].matches, Some(false));
        assert!(rep.ok());
    }
}
