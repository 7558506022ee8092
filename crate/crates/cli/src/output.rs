//! Text and CSV rendering of bounds reports.

use twobridge_core::volume::BoundsReport;

/// Version of the JSON documents written by every subcommand.
pub const SCHEMA_VERSION: u32 = 1;

/// CSV columns, in order.
pub const CSV_COLUMNS: [&str; 14] = [
    "word",
    "n_inner",
    "C",
    "tet_count",
    "explicit_volume",
    "lower_mult",
    "lower_additive",
    "upper_additive",
    "ishikawa_nemoto",
    "petronio_vesnin",
    "best_lower",
    "best_upper",
    "crossover",
    "certified_minimal",
];

/// Column documentation shown by `--help`.
pub const CSV_HELP: &str = "CSV columns (--csv; survey always):\n  \
word, n_inner, C, tet_count, explicit_volume, lower_mult, lower_additive, upper_additive,\n  \
ishikawa_nemoto, petronio_vesnin, best_lower, best_upper, crossover, certified_minimal\n\
Empty cells mark bounds that do not apply to the word. Survey rows follow the\n\
enumeration order: inner syllable count, then exponent tuples lexicographically.";

/// Formats an optional value with fixed decimals, blank when absent.
pub fn opt(v: Option<f64>, decimals: usize) -> String {
    v.map(|x| format!("{x:.decimals$}")).unwrap_or_default()
}

fn cells(r: &BoundsReport) -> [String; 14] {
    [
        r.word.clone(),
        r.n_inner.to_string(),
        r.c.to_string(),
        r.tet_count.to_string(),
        opt(r.explicit_volume, 10),
        opt(r.lower_mult, 4),
        opt(r.lower_additive, 4),
        r.upper_additive.map(|u| u.to_string()).unwrap_or_default(),
        r.ishikawa_nemoto.to_string(),
        format!("{:.4}", r.petronio_vesnin),
        format!("{:.4}", r.best_lower),
        r.best_upper.to_string(),
        r.crossover_flag.map(|b| b.to_string()).unwrap_or_default(),
        r.certified_minimal.to_string(),
    ]
}

/// Header plus one CSV row per report.
pub fn bounds_csv(reports: &[BoundsReport]) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for r in reports {
        out.push_str(&cells(r).join(","));
        out.push('\n');
    }
    out
}

/// Aligned columns with the same fields as the CSV.
pub fn bounds_table(reports: &[BoundsReport]) -> String {
    let rows: Vec<[String; 14]> = reports.iter().map(cells).collect();
    let mut widths: Vec<usize> = CSV_COLUMNS.iter().map(|c| c.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| -> String {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        let mut s = parts.join("  ").trim_end().to_string();
        s.push('\n');
        s
    };
    let header: Vec<String> = CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
    let mut out = line(&header);
    for row in &rows {
        out.push_str(&line(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use twobridge_core::volume::bounds_report;
    use twobridge_core::word::parse_word;

    #[test]
    fn csv_has_one_row_per_report() {
        let reports: Vec<_> = ["RLR", "RL^2R", "R^3L^2"]
            .iter()
            .map(|w| bounds_report(&parse_word(w).unwrap()).unwrap())
            .collect();
        let csv = bounds_csv(&reports);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l.split(',').count() == CSV_COLUMNS.len()));
        assert!(lines[3].starts_with("RL^2R,") || lines[3].starts_with("R^3L^2,"));
    }

    #[test]
    fn table_is_aligned() {
        let reports = vec![bounds_report(&parse_word("RLR").unwrap()).unwrap()];
        let table = bounds_table(&reports);
        assert_eq!(table.lines().count(), 2);
        assert!(table.starts_with("word"));
    }
}
