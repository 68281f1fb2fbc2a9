//! Census of small inputs and reproduction of product tables.

pub mod census;
pub mod table;

pub use census::{generate_atd, ingest, Census, CensusEntry, Provenance, Validation};
pub use table::{run_table, table_row, PairSpec, TableMode, TableRow};
