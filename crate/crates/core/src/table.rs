//! Group tables: one record per bidegree, ascending `l` then `k`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::Bidegree;
use crate::rings::{group_at_mode, GroupSummary, Mode, TheoryId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupRecord {
    pub theory: String,
    pub n: Option<u32>,
    pub k: i64,
    pub l: i64,
    pub free_rank: usize,
    pub z2_count: usize,
    /// Canonical monomial strings in canonical order.
    pub generators: Vec<String>,
}

impl GroupRecord {
    pub fn new(theory: TheoryId, b: Bidegree, g: &GroupSummary) -> Self {
        GroupRecord {
            theory: theory.kind.name().to_string(),
            n: theory.n,
            k: b.k,
            l: b.l,
            free_rank: g.free_rank,
            z2_count: g.z2_count,
            generators: g.generator_strings(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?}")),
        }
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("text tables are not parsed back")]
    Text,
}

/// Records for `kmin..=kmax` by `lmin..=lmax`. An empty range gives no rows.
pub fn group_table(theory: TheoryId, mode: Mode, (kmin, kmax): (i64, i64), (lmin, lmax): (i64, i64)) -> Vec<GroupRecord> {
    let mut out = Vec::new();
    for l in lmin..=lmax {
        for k in kmin..=kmax {
            let b = Bidegree::new(k, l);
            out.push(GroupRecord::new(theory, b, &group_at_mode(theory, b, mode)));
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    theory: String,
    n: Option<u32>,
    k: i64,
    l: i64,
    free_rank: usize,
    z2_count: usize,
    generators: String,
}

pub const CSV_HEADER: &str = "theory,n,k,l,free_rank,z2_count,generators";

fn type_string(r: &GroupRecord) -> String {
    GroupSummary { free_rank: r.free_rank, z2_count: r.z2_count, generators: Vec::new() }.type_string()
}

pub fn render(records: &[GroupRecord], format: Format) -> Result<String, TableError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if records.is_empty() {
                // The writer only emits a header with the first row.
                return Ok(format!("{CSV_HEADER}\n"));
            }
            for r in records {
                w.serialize(CsvRow {
                    theory: r.theory.clone(),
                    n: r.n,
                    k: r.k,
                    l: r.l,
                    free_rank: r.free_rank,
                    z2_count: r.z2_count,
                    generators: r.generators.join(";"),
                })?;
            }
            let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Text => {
            let mut s = String::new();
            for r in records {
                let gens = if r.generators.is_empty() { String::new() } else { format!(" {{{}}}", r.generators.join(", ")) };
                writeln!(s, "({}, {})  {}{}", r.k, r.l, type_string(r), gens).unwrap();
            }
            Ok(s)
        }
    }
}

pub fn parse(input: &str, format: Format) -> Result<Vec<GroupRecord>, TableError> {
    match format {
        Format::Json => Ok(serde_json::from_str(input)?),
        Format::Csv => {
            let mut r = csv::Reader::from_reader(input.as_bytes());
            let mut out = Vec::new();
            for row in r.deserialize() {
                let row: CsvRow = row?;
                out.push(GroupRecord {
                    theory: row.theory,
                    n: row.n,
                    k: row.k,
                    l: row.l,
                    free_rank: row.free_rank,
                    z2_count: row.z2_count,
                    generators: if row.generators.is_empty() {
                        Vec::new()
                    } else {
                        row.generators.split(';').map(str::to_string).collect()
                    },
                });
            }
            Ok(out)
        }
        Format::Text => Err(TableError::Text),
    }
}
