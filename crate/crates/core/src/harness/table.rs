//! Product tables: one row of invariants per factor pair.

use serde::{Deserialize, Serialize};

use crate::alter::alter_perimeter;
use crate::classify::{symmetry_type, SymTag};
use crate::error::{Error, Result};
use crate::products::hash_product_with;
use crate::symmetry::find_reversal;

use super::census::{Census, CensusEntry};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub name1: String,
    pub v1: usize,
    pub ap1: usize,
    pub name2: String,
    pub v2: usize,
    pub ap2: usize,
    pub v: usize,
    pub ap: usize,
    pub vs: u128,
    pub girth: usize,
    pub diam: usize,
    pub symtype: SymTag,
}

/// Flat CSV record; `vs` is already rendered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub name1: String,
    #[serde(rename = "V1")]
    pub v1: usize,
    #[serde(rename = "AP1")]
    pub ap1: usize,
    pub name2: String,
    #[serde(rename = "V2")]
    pub v2: usize,
    #[serde(rename = "AP2")]
    pub ap2: usize,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "AP")]
    pub ap: usize,
    pub vs: String,
    pub girth: usize,
    pub diam: usize,
    pub symtype: String,
}

/// Decimal, or `2^k` for powers of two above 64 when `pow2` is set.
pub fn render_vs(vs: u128, pow2: bool) -> String {
    if pow2 && vs > 64 && vs.is_power_of_two() {
        format!("2^{}", vs.trailing_zeros())
    } else {
        vs.to_string()
    }
}

/// Parses either rendering of `vs`.
pub fn parse_vs(s: &str) -> Option<u128> {
    match s.trim().split_once('^') {
        Some(("2", k)) => k.parse::<u32>().ok().and_then(|k| 1u128.checked_shl(k)),
        Some(_) => None,
        None => s.trim().parse().ok(),
    }
}

impl TableRow {
    pub fn to_csv_row(&self, pow2: bool) -> CsvRow {
        CsvRow {
            name1: self.name1.clone(),
            v1: self.v1,
            ap1: self.ap1,
            name2: self.name2.clone(),
            v2: self.v2,
            ap2: self.ap2,
            v: self.v,
            ap: self.ap,
            vs: render_vs(self.vs, pow2),
            girth: self.girth,
            diam: self.diam,
            symtype: self.symtype.to_string(),
        }
    }

    /// The six product columns `(V, AP, vs, girth, diam, symtype)`.
    pub fn metrics(&self) -> (usize, usize, u128, usize, usize, SymTag) {
        (self.v, self.ap, self.vs, self.girth, self.diam, self.symtype)
    }
}

pub fn table_row(e1: &CensusEntry, e2: &CensusEntry) -> Result<TableRow> {
    let (g1, g2) = (&e1.digraph, &e2.digraph);
    let hp = hash_product_with(g1, g2, true);
    let v = hp.graph.n();
    let predicted = 2 * g1.n() * g2.n() / num_integer::gcd(e1.alter_perimeter, e2.alter_perimeter);
    if v != predicted {
        return Err(Error::Internal(format!(
            "component of {} # {} has {v} vertices, the alter-perimeters predict {predicted}",
            e1.name, e2.name
        )));
    }
    let ap = alter_perimeter(&hp.oriented.digraph)?;
    let st = symmetry_type(&hp.graph)?;
    Ok(TableRow {
        name1: e1.name.clone(),
        v1: g1.n(),
        ap1: e1.alter_perimeter,
        name2: e2.name.clone(),
        v2: g2.n(),
        ap2: e2.alter_perimeter,
        v,
        ap,
        vs: st.vs,
        girth: hp.graph.girth().unwrap_or(0),
        diam: hp.graph.diameter()?,
        symtype: st.tag,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMode {
    /// distinct reversible factors
    T1,
    /// `(Δ, Δ)` for reversible `Δ`
    T2,
    /// `(Δ, Δ)` for non-reversible `Δ`
    T3,
    /// `(Δ, Δ^-1)` for non-reversible `Δ`
    T4,
}

impl std::str::FromStr for TableMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t1" => Ok(TableMode::T1),
            "t2" => Ok(TableMode::T2),
            "t3" => Ok(TableMode::T3),
            "t4" => Ok(TableMode::T4),
            _ => Err(Error::Precondition(format!("unknown table mode {s:?}"))),
        }
    }
}

/// One requested row: a single factor name for modes t2–t4, a pair for t1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairSpec {
    Single(String),
    Pair(String, String),
}

fn reversed(e: &CensusEntry) -> CensusEntry {
    CensusEntry { name: format!("{}^-1", e.name), digraph: e.digraph.reverse(), ..e.clone() }
}

pub fn run_table(census: &mut Census, specs: &[PairSpec], mode: TableMode) -> Result<Vec<TableRow>> {
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        let (e1, e2) = match (mode, spec) {
            (TableMode::T1, PairSpec::Pair(a, b)) => {
                let (e1, e2) = (census.get(a)?, census.get(b)?);
                for e in [&e1, &e2] {
                    if !find_reversal(&e.digraph).exists {
                        return Err(Error::Precondition(format!("{} is not reversible", e.name)));
                    }
                }
                (e1, e2)
            }
            (TableMode::T1, PairSpec::Single(a)) => {
                return Err(Error::Precondition(format!("mode t1 needs a pair, got {a:?}")))
            }
            (_, PairSpec::Pair(a, b)) => {
                return Err(Error::Precondition(format!("this mode takes single factors, got ({a:?}, {b:?})")))
            }
            (_, PairSpec::Single(a)) => {
                let e = census.get(a)?;
                let reversible = find_reversal(&e.digraph).exists;
                match mode {
                    TableMode::T2 if reversible => (e.clone(), e),
                    TableMode::T3 if !reversible => (e.clone(), e),
                    TableMode::T4 if !reversible => (e.clone(), reversed(&e)),
                    _ => {
                        return Err(Error::Precondition(format!(
                            "{} is {}reversible, which this mode excludes",
                            e.name,
                            if reversible { "" } else { "not " }
                        )))
                    }
                }
            }
        };
        rows.push(table_row(&e1, &e2)?);
    }
    Ok(rows)
}

pub fn write_csv<W: std::io::Write>(rows: &[TableRow], pow2: bool, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["name1", "V1", "AP1", "name2", "V2", "AP2", "V", "AP", "vs", "girth", "diam", "symtype"])
            .map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r.to_csv_row(pow2)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[TableRow], pow2: bool) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, pow2, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<CsvRow>> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(csv_err)).collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse { line: e.position().map_or(0, |p| p.line() as usize), msg: e.to_string() }
}

/// A row of the computed table that disagrees with the expected one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub row: usize,
    pub expected: Option<CsvRow>,
    pub actual: Option<CsvRow>,
}

/// Row-by-row comparison; `vs` compares numerically so either rendering matches.
pub fn compare(expected: &[CsvRow], actual: &[TableRow]) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for i in 0..expected.len().max(actual.len()) {
        let e = expected.get(i);
        let a = actual.get(i).map(|r| r.to_csv_row(false));
        let same = match (e, &a) {
            (Some(e), Some(a)) => {
                let mut e2 = e.clone();
                e2.vs = parse_vs(&e.vs).map_or(e.vs.clone(), |v| v.to_string());
                normalise(&e2) == normalise(a)
            }
            _ => false,
        };
        if !same {
            out.push(Mismatch { row: i + 1, expected: e.cloned(), actual: a });
        }
    }
    out
}

fn normalise(r: &CsvRow) -> CsvRow {
    let mut r = r.clone();
    r.name1 = super::census::normalise_name(&r.name1);
    r.name2 = super::census::normalise_name(&r.name2);
    r
}
