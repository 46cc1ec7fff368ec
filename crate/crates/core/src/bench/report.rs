use std::fmt::{self, Write};

use crate::schemes::SchemeId;

use super::{digest_pool_closed_form, positional_closed_form, MetricRow};

/// Column order of the CSV emitted by [`table_report`].
pub const CSV_HEADER: &str = "scheme,n,positional_cert_labels,positional_cert_expected,\
positional_cert_deviation,prefix_cert_labels,prefix_cert_argmax,verify_hash_invocations,\
edges_total,edges_delta,vertices_total,vertices_delta,identifier_labels,digest_pool_size,\
digest_pool_expected,digest_pool_deviation";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableReport {
    pub table: String,
    pub csv: String,
}

/// Per-scheme text table plus CSV, with deviations from the closed forms.
pub fn table_report(rows: &[MetricRow]) -> TableReport {
    assert!(!rows.is_empty(), "no rows to report");
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut table = String::new();
    let mut current: Option<&str> = None;
    for r in rows {
        let pos_expected = positional_closed_form(r.scheme_id, r.n);
        let pos_dev = r.positional_cert_labels as i64 - pos_expected;
        let pool_expected = digest_pool_closed_form(r.scheme_id, r.n);
        let pool_dev = r.digest_pool_size as i64 - pool_expected;
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.scheme,
            r.n,
            r.positional_cert_labels,
            pos_expected,
            pos_dev,
            r.prefix_cert_labels,
            r.prefix_cert_argmax,
            r.verify_hash_invocations,
            r.edges_total,
            r.edges_delta,
            r.vertices_total,
            r.vertices_delta,
            r.identifier_labels,
            r.digest_pool_size,
            pool_expected,
            pool_dev
        )
        .unwrap();
        if current != Some(r.scheme.as_str()) {
            current = Some(r.scheme.as_str());
            writeln!(table, "\n{}", r.scheme).unwrap();
            writeln!(
                table,
                "{:>6} {:>9} {:>6} {:>7} {:>7} {:>9} {:>6} {:>8} {:>6} {:>6} {:>5} {:>6}",
                "n",
                "pos-cert",
                "dev",
                "prefix",
                "verify",
                "edges",
                "+e",
                "vertices",
                "+v",
                "ident",
                "pool",
                "dev"
            )
            .unwrap();
        }
        writeln!(
            table,
            "{:>6} {:>9} {:>+6} {:>7} {:>7} {:>9} {:>6} {:>8} {:>6} {:>6} {:>5} {:>+6}",
            r.n,
            r.positional_cert_labels,
            pos_dev,
            r.prefix_cert_labels,
            r.verify_hash_invocations,
            r.edges_total,
            r.edges_delta,
            r.vertices_total,
            r.vertices_delta,
            r.identifier_labels,
            r.digest_pool_size,
            pool_dev
        )
        .unwrap();
    }
    TableReport { table, csv }
}

/// Largest positional certificate of one antimonotone generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntimonotoneRow {
    pub generation: u32,
    pub first: u64,
    pub last: u64,
    pub formula_max: usize,
    pub recursive_max: usize,
    pub closed_form: i64,
}

impl AntimonotoneRow {
    pub fn formula_deviation(&self) -> i64 {
        self.formula_max as i64 - self.closed_form
    }

    pub fn recursive_deviation(&self) -> i64 {
        self.recursive_max as i64 - self.closed_form
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntimonotoneSizes {
    pub scheme: SchemeId,
    pub rows: Vec<AntimonotoneRow>,
}

impl AntimonotoneSizes {
    /// Largest formula-graph certificate of the generation containing `n`.
    pub fn formula_max_at(&self, n: u64) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| (r.first..=r.last).contains(&n))
            .map(|r| r.formula_max)
    }

    pub fn recursive_max_at(&self, n: u64) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| (r.first..=r.last).contains(&n))
            .map(|r| r.recursive_max)
    }
}

impl fmt::Display for AntimonotoneSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} positional certificate maxima per generation",
            self.scheme
        )?;
        writeln!(
            f,
            "{:>3} {:>13} {:>8} {:>5} {:>10} {:>5} {:>7}",
            "gen", "range", "formula", "dev", "recursive", "dev", "closed"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>3} {:>13} {:>8} {:>+5} {:>10} {:>+5} {:>7}",
                r.generation,
                format!("{}..{}", r.first, r.last),
                r.formula_max,
                r.formula_deviation(),
                r.recursive_max,
                r.recursive_deviation(),
                r.closed_form
            )?;
        }
        Ok(())
    }
}
