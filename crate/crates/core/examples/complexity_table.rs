//! Measure certificate, pool and graph sizes of every scheme and write
//! the table plus a CSV.

use pfxd::bench::{measure, table_report};
use pfxd::schemes::SchemeId;

fn main() {
    let grid: Vec<u64> = (0..=9).map(|j| 1u64 << j).collect();
    let rows: Vec<_> = SchemeId::ALL
        .iter()
        .flat_map(|&id| measure(id, &grid))
        .collect();
    let report = table_report(&rows);
    print!("{}", report.table);
    let path = std::env::temp_dir().join("pfxd-table.csv");
    std::fs::write(&path, report.csv).unwrap();
    println!("\nCSV written to {}", path.display());
}
