//! Convergence tables and their CSV / markdown renderings.
//!
//! A [`ConvergenceTable`] is one refinement column: rows `(N, error,
//! order)` with `order = log(e_prev/e_cur) / log(N_cur/N_prev)` (the usual
//! `log2` ratio when `N` doubles). A [`TableGroup`] lays several columns
//! side by side — varying the grading exponent or the fractional order —
//! the way convergence studies are usually typeset.
//!
//! CSV output is RFC-4180-compatible (comma-separated, LF endings) with
//! metadata carried on leading `#` comment lines; [`parse_csv`] reads that
//! dialect back. Errors print in scientific notation with four
//! significant digits, rounded half-even.

use crate::error::{Result, SforError};

/// Description of the experiment a table came from.
#[derive(Debug, Clone, PartialEq)]
pub struct TableMeta {
    pub title: String,
    /// Example label, e.g. `EX1`.
    pub example: String,
    pub alpha: f64,
    /// Scheme label, e.g. `V_FORM`.
    pub scheme: String,
    /// Formula label, e.g. `L1`.
    pub formula: String,
    /// Resolved grading exponent.
    pub r: f64,
    /// Norm label, e.g. `H1_SEMI`.
    pub norm: String,
    pub n_ref: usize,
    pub m_elems: usize,
    /// Rate predicted by the convergence theory for this configuration.
    pub theoretical_order: f64,
}

/// One refinement level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub error: f64,
    /// Observed order; `None` on the first row.
    pub order: Option<f64>,
}

/// One refinement column together with the settings that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub meta: TableMeta,
    pub rows: Vec<TableRow>,
}

/// Output dialect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

/// Scientific notation with four significant digits and a two-digit
/// signed exponent (`4.477e-02`), rounded half-even.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.3e}");
    let (mant, exp) = s.split_once('e').expect("{:e} always contains an exponent");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ("-", d),
        None => ("+", exp),
    };
    format!("{mant}e{sign}{digits:0>2}")
}

fn format_order(order: Option<f64>, blank: &str) -> String {
    match order {
        Some(o) => format!("{o:.4}"),
        None => blank.to_string(),
    }
}

fn meta_lines(meta: &TableMeta) -> String {
    format!(
        "# title: {}\n# example: {}\n# alpha: {}\n# scheme: {}\n# formula: {}\n\
         # r: {}\n# norm: {}\n# n_ref: {}\n# m_elems: {}\n# theoretical_order: {}\n",
        meta.title,
        meta.example,
        meta.alpha,
        meta.scheme,
        meta.formula,
        meta.r,
        meta.norm,
        meta.n_ref,
        meta.m_elems,
        meta.theoretical_order
    )
}

/// Renders one table.
pub fn emit(table: &ConvergenceTable, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = meta_lines(&table.meta);
            out.push_str("N,error,order\n");
            for row in &table.rows {
                out.push_str(&format!(
                    "{},{},{}\n",
                    row.n,
                    format_sci(row.error),
                    format_order(row.order, "")
                ));
            }
            out
        }
        Format::Markdown => {
            let mut out = format!("### {}\n\n", table.meta.title);
            out.push_str(&format!("| N | error ({}) | order |\n", table.meta.norm));
            out.push_str("|---:|---:|---:|\n");
            for row in &table.rows {
                out.push_str(&format!(
                    "| {} | {} | {} |\n",
                    row.n,
                    format_sci(row.error),
                    format_order(row.order, "--")
                ));
            }
            out.push_str(&format!(
                "| theoretical order | | {:.4} |\n",
                table.meta.theoretical_order
            ));
            out
        }
    }
}

fn parse_meta_value<'a>(
    map: &'a std::collections::BTreeMap<String, String>,
    key: &str,
) -> Result<&'a str> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| SforError::Config(format!("missing metadata line '# {key}: ...'")))
}

fn parse_num<T: std::str::FromStr>(text: &str, what: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| SforError::Config(format!("cannot parse {what} from '{text}'")))
}

/// Parses the CSV dialect written by [`emit`]. Round trip:
/// `emit(parse_csv(emit(t)), Csv) == emit(t, Csv)` (numbers are restored
/// to their 4-significant-digit representation).
pub fn parse_csv(text: &str) -> Result<ConvergenceTable> {
    let mut meta_map = std::collections::BTreeMap::new();
    let mut rows = Vec::new();
    let mut saw_header = false;
    for line in text.lines() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once(':') {
                meta_map.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if !saw_header {
            if line != "N,error,order" {
                return Err(SforError::Config(format!(
                    "expected header 'N,error,order', found '{line}'"
                )));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(SforError::Config(format!(
                "expected 3 fields, found '{line}'"
            )));
        }
        rows.push(TableRow {
            n: parse_num(fields[0], "N")?,
            error: parse_num(fields[1], "error")?,
            order: if fields[2].trim().is_empty() {
                None
            } else {
                Some(parse_num(fields[2], "order")?)
            },
        });
    }
    if !saw_header {
        return Err(SforError::Config("no 'N,error,order' header found".into()));
    }
    let meta = TableMeta {
        title: parse_meta_value(&meta_map, "title")?.to_string(),
        example: parse_meta_value(&meta_map, "example")?.to_string(),
        alpha: parse_num(parse_meta_value(&meta_map, "alpha")?, "alpha")?,
        scheme: parse_meta_value(&meta_map, "scheme")?.to_string(),
        formula: parse_meta_value(&meta_map, "formula")?.to_string(),
        r: parse_num(parse_meta_value(&meta_map, "r")?, "r")?,
        norm: parse_meta_value(&meta_map, "norm")?.to_string(),
        n_ref: parse_num(parse_meta_value(&meta_map, "n_ref")?, "n_ref")?,
        m_elems: parse_num(parse_meta_value(&meta_map, "m_elems")?, "m_elems")?,
        theoretical_order: parse_num(
            parse_meta_value(&meta_map, "theoretical_order")?,
            "theoretical_order",
        )?,
    };
    Ok(ConvergenceTable { meta, rows })
}

/// Several columns sharing one N-ladder, printed side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct TableGroup {
    pub title: String,
    /// Column headers distinguishing the tables (grading or order).
    pub labels: Vec<String>,
    pub tables: Vec<ConvergenceTable>,
}

impl TableGroup {
    pub fn new(title: String, labels: Vec<String>, tables: Vec<ConvergenceTable>) -> Result<Self> {
        if tables.is_empty() || labels.len() != tables.len() {
            return Err(SforError::InvalidArgument(format!(
                "group needs matching labels and tables, got {} / {}",
                labels.len(),
                tables.len()
            )));
        }
        let ns: Vec<usize> = tables[0].rows.iter().map(|r| r.n).collect();
        for t in &tables[1..] {
            let other: Vec<usize> = t.rows.iter().map(|r| r.n).collect();
            if other != ns {
                return Err(SforError::InvalidArgument(
                    "all grouped tables must share the same N column".into(),
                ));
            }
        }
        Ok(TableGroup {
            title,
            labels,
            tables,
        })
    }
}

/// Renders a group. Markdown mirrors the usual two-columns-per-variant
/// layout with a theoretical-order footer; CSV flattens the columns and
/// carries one `# column` comment line per variant.
pub fn emit_group(group: &TableGroup, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = format!("# title: {}\n", group.title);
            for (i, (label, t)) in group.labels.iter().zip(&group.tables).enumerate() {
                out.push_str(&format!(
                    "# column {}: {} | example {} | alpha {} | {} | {} | r {} | norm {} | theoretical_order {}\n",
                    i + 1,
                    label,
                    t.meta.example,
                    t.meta.alpha,
                    t.meta.scheme,
                    t.meta.formula,
                    t.meta.r,
                    t.meta.norm,
                    t.meta.theoretical_order
                ));
            }
            out.push('N');
            for i in 1..=group.tables.len() {
                out.push_str(&format!(",error{i},order{i}"));
            }
            out.push('\n');
            for (j, row0) in group.tables[0].rows.iter().enumerate() {
                out.push_str(&row0.n.to_string());
                for t in &group.tables {
                    out.push_str(&format!(
                        ",{},{}",
                        format_sci(t.rows[j].error),
                        format_order(t.rows[j].order, "")
                    ));
                }
                out.push('\n');
            }
            out
        }
        Format::Markdown => {
            let mut out = format!("### {}\n\n", group.title);
            out.push_str("| N |");
            for label in &group.labels {
                out.push_str(&format!(" error ({label}) | order |"));
            }
            out.push('\n');
            out.push_str("|---:|");
            for _ in &group.labels {
                out.push_str("---:|---:|");
            }
            out.push('\n');
            for (j, row0) in group.tables[0].rows.iter().enumerate() {
                out.push_str(&format!("| {} |", row0.n));
                for t in &group.tables {
                    out.push_str(&format!(
                        " {} | {} |",
                        format_sci(t.rows[j].error),
                        format_order(t.rows[j].order, "--")
                    ));
                }
                out.push('\n');
            }
            out.push_str("| theoretical order |");
            for t in &group.tables {
                out.push_str(&format!(" | {:.4} |", t.meta.theoretical_order));
            }
            out.push('\n');
            out
        }
    }
}
