//! Contingency tables and the algebra over them.
//!
//! A table has an ordered list of variable columns and a count per distinct
//! value tuple. Rows with count 0 are never stored. Binary operators match
//! columns by name, so operands may list the same columns in different orders.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::value::Value;

pub type Row = Vec<Value>;

/// Name of the trailing count column in serialized tables.
pub const COUNT_COLUMN: &str = "count";

#[derive(Clone)]
pub struct ContingencyTable {
    columns: Vec<String>,
    rows: HashMap<Row, u64>,
    note: String,
}

impl fmt::Debug for ContingencyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContingencyTable")
            .field("columns", &self.columns)
            .field("rows", &self.sorted_rows())
            .field("note", &self.note)
            .finish()
    }
}

/// Tables are equal when they have the same column set and, after aligning
/// columns by name, the same rows and counts. The note is ignored.
impl PartialEq for ContingencyTable {
    fn eq(&self, other: &Self) -> bool {
        if self.columns.len() != other.columns.len() || self.rows.len() != other.rows.len() {
            return false;
        }
        let Ok(perm) = permutation(&other.columns, &self.columns) else {
            return false;
        };
        other.rows.iter().all(|(row, &c)| {
            let aligned: Row = perm.iter().map(|&i| row[i].clone()).collect();
            self.rows.get(&aligned) == Some(&c)
        })
    }
}

impl Eq for ContingencyTable {}

/// For each column of `target`, its position in `source`.
fn permutation(source: &[String], target: &[String]) -> Result<Vec<usize>> {
    let mismatch = || Error::ColumnMismatch {
        left: source.to_vec(),
        right: target.to_vec(),
    };
    if source.len() != target.len() {
        return Err(mismatch());
    }
    target
        .iter()
        .map(|c| source.iter().position(|s| s == c).ok_or_else(mismatch))
        .collect()
}

fn check_unique(columns: &[String]) -> Result<()> {
    for (i, c) in columns.iter().enumerate() {
        if c == COUNT_COLUMN || columns[..i].contains(c) {
            return Err(Error::DuplicateColumn(c.clone()));
        }
    }
    Ok(())
}

fn row_strings(row: &[Value]) -> Vec<String> {
    row.iter().map(|v| v.to_string()).collect()
}

impl ContingencyTable {
    /// An empty table (no rows) over `columns`.
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Result<Self> {
        let columns: Vec<String> = columns.into_iter().map(Into::into).collect();
        check_unique(&columns)?;
        Ok(ContingencyTable {
            columns,
            rows: HashMap::new(),
            note: String::new(),
        })
    }

    /// Builds a table from rows; repeated rows are summed, zero counts dropped.
    pub fn from_rows<S, I>(columns: impl IntoIterator<Item = S>, rows: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = (Row, u64)>,
    {
        let mut t = Self::new(columns)?;
        for (row, count) in rows {
            if row.len() != t.columns.len() {
                return Err(Error::InvalidArgument(format!(
                    "row of arity {} for {} columns",
                    row.len(),
                    t.columns.len()
                )));
            }
            t.accumulate(row, count)?;
        }
        Ok(t)
    }

    /// Convenience constructor from string literals.
    pub fn from_str_rows(columns: &[&str], rows: &[(&[&str], u64)]) -> Result<Self> {
        Self::from_rows(
            columns.iter().copied(),
            rows.iter()
                .map(|(r, c)| (r.iter().map(|&v| Value::from(v)).collect(), *c)),
        )
    }

    /// A zero-column table holding `count` instantiations (empty if 0).
    pub fn unit(count: u64) -> Self {
        let mut rows = HashMap::new();
        if count > 0 {
            rows.insert(Vec::new(), count);
        }
        ContingencyTable {
            columns: Vec::new(),
            rows,
            note: String::new(),
        }
    }

    fn accumulate(&mut self, row: Row, count: u64) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let slot = self.rows.entry(row).or_insert(0);
        *slot = slot.checked_add(count).ok_or(Error::CountOverflow)?;
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.column_index(name).is_some()
    }

    /// Number of stored (non-zero) rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Sum of all counts.
    pub fn total(&self) -> u128 {
        self.rows.values().map(|&c| c as u128).sum()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Row, u64)> {
        self.rows.iter().map(|(r, &c)| (r, c))
    }

    /// Rows sorted lexicographically by value tuple.
    pub fn sorted_rows(&self) -> Vec<(Row, u64)> {
        let mut v: Vec<(Row, u64)> = self.rows.iter().map(|(r, &c)| (r.clone(), c)).collect();
        v.sort_unstable();
        v
    }

    /// Count of the row given in this table's column order (0 if absent).
    pub fn count(&self, row: &[Value]) -> u64 {
        self.rows.get(row).copied().unwrap_or(0)
    }

    /// Count of the row given as `(column, value)` pairs covering every column.
    pub fn count_of(&self, assignment: &[(&str, &str)]) -> Result<u64> {
        if assignment.len() != self.columns.len() {
            return Err(Error::InvalidArgument(format!(
                "assignment covers {} of {} columns",
                assignment.len(),
                self.columns.len()
            )));
        }
        let mut row = vec![Value::from(""); self.columns.len()];
        for (col, v) in assignment {
            let i = self
                .column_index(col)
                .ok_or_else(|| Error::UnknownVariable(col.to_string()))?;
            row[i] = Value::from(*v);
        }
        Ok(self.count(&row))
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn set_note(&mut self, note: impl Into<String>) {
        self.note = note.into();
    }

    /// Same table with columns laid out as `order` (a permutation).
    pub fn reorder<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        let target: Vec<String> = order.iter().map(|s| s.as_ref().to_string()).collect();
        let perm = permutation(&self.columns, &target)?;
        let rows = self
            .rows
            .iter()
            .map(|(r, &c)| (perm.iter().map(|&i| r[i].clone()).collect(), c))
            .collect();
        Ok(ContingencyTable {
            columns: target,
            rows,
            note: self.note.clone(),
        })
    }

    /// Serializes as CSV: one column per variable plus a trailing `count`,
    /// rows in lexicographic order.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let mut header: Vec<&str> = self.columns.iter().map(String::as_str).collect();
        header.push(COUNT_COLUMN);
        wr.write_record(&header).map_err(|e| Error::csv("<ct>", e))?;
        for (row, count) in self.sorted_rows() {
            let mut rec: Vec<String> = row_strings(&row);
            rec.push(count.to_string());
            wr.write_record(&rec).map_err(|e| Error::csv("<ct>", e))?;
        }
        wr.flush().map_err(|e| Error::io("<ct>", e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let header = rdr.headers().map_err(|e| Error::csv("<ct>", e))?.clone();
        let n = header.len();
        if n == 0 || &header[n - 1] != COUNT_COLUMN {
            return Err(Error::MalformedTable("last column must be `count`".into()));
        }
        let columns: Vec<String> = header.iter().take(n - 1).map(str::to_string).collect();
        let mut t = Self::new(columns)?;
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::csv("<ct>", e))?;
            let count: u64 = rec[n - 1]
                .parse()
                .map_err(|_| Error::MalformedTable(format!("bad count `{}`", &rec[n - 1])))?;
            if count == 0 {
                return Err(Error::MalformedTable("zero-count row".into()));
            }
            let row: Row = rec.iter().take(n - 1).map(Value::from).collect();
            if t.rows.contains_key(&row) {
                return Err(Error::MalformedTable(format!("repeated row {:?}", row_strings(&row))));
            }
            t.rows.insert(row, count);
        }
        Ok(t)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(std::io::BufReader::new(f))
    }
}

/// Right-hand side of a condition term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondValue {
    Is(Value),
    /// Don't care: filters nothing, but the column is still conditioned away.
    Any,
}

/// A conjunction of `variable = value` terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Condition {
    terms: Vec<(String, CondValue)>,
}

impl Condition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn eq(mut self, var: impl Into<String>, value: impl Into<Value>) -> Self {
        self.terms.push((var.into(), CondValue::Is(value.into())));
        self
    }

    pub fn any(mut self, var: impl Into<String>) -> Self {
        self.terms.push((var.into(), CondValue::Any));
        self
    }

    pub fn terms(&self) -> &[(String, CondValue)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|(c, _)| c.as_str())
    }

    /// Resolved `(column index, required value)` pairs; wildcards dropped.
    fn resolve(&self, ct: &ContingencyTable) -> Result<Vec<(usize, Value)>> {
        let mut out = Vec::new();
        for (col, v) in &self.terms {
            let i = ct
                .column_index(col)
                .ok_or_else(|| Error::UnknownVariable(col.clone()))?;
            if let CondValue::Is(v) = v {
                out.push((i, v.clone()));
            }
        }
        Ok(out)
    }
}

/// σ: rows satisfying `phi`, columns and counts unchanged.
pub fn select(ct: &ContingencyTable, phi: &Condition) -> Result<ContingencyTable> {
    let filters = phi.resolve(ct)?;
    let rows = ct
        .rows
        .iter()
        .filter(|(r, _)| filters.iter().all(|(i, v)| &r[*i] == v))
        .map(|(r, &c)| (r.clone(), c))
        .collect();
    Ok(ContingencyTable {
        columns: ct.columns.clone(),
        rows,
        note: ct.note.clone(),
    })
}

/// π: group by `vars`, summing counts.
pub fn project<S: AsRef<str>>(ct: &ContingencyTable, vars: &[S]) -> Result<ContingencyTable> {
    let columns: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
    check_unique(&columns)?;
    let idx = columns
        .iter()
        .map(|c| ct.column_index(c).ok_or_else(|| Error::UnknownVariable(c.clone())))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: HashMap<Row, u64> = HashMap::with_capacity(ct.rows.len());
    for (r, &c) in &ct.rows {
        let key: Row = idx.iter().map(|&i| r[i].clone()).collect();
        let slot = rows.entry(key).or_insert(0);
        *slot = slot.checked_add(c).ok_or(Error::CountOverflow)?;
    }
    Ok(ContingencyTable {
        columns,
        rows,
        note: ct.note.clone(),
    })
}

/// χ: select on `phi`, then project away every column `phi` mentions.
pub fn condition(ct: &ContingencyTable, phi: &Condition) -> Result<ContingencyTable> {
    let filters = phi.resolve(ct)?;
    let dropped: Vec<&str> = phi.columns().collect();
    let keep: Vec<usize> = (0..ct.columns.len())
        .filter(|&i| !dropped.contains(&ct.columns[i].as_str()))
        .collect();
    let mut rows: HashMap<Row, u64> = HashMap::new();
    for (r, &c) in &ct.rows {
        if !filters.iter().all(|(i, v)| &r[*i] == v) {
            continue;
        }
        let key: Row = keep.iter().map(|&i| r[i].clone()).collect();
        let slot = rows.entry(key).or_insert(0);
        *slot = slot.checked_add(c).ok_or(Error::CountOverflow)?;
    }
    Ok(ContingencyTable {
        columns: keep.iter().map(|&i| ct.columns[i].clone()).collect(),
        rows,
        note: ct.note.clone(),
    })
}

/// ×: Cartesian product of rows, counts multiplied. Column sets must be disjoint.
pub fn cross_product(a: &ContingencyTable, b: &ContingencyTable) -> Result<ContingencyTable> {
    if let Some(c) = b.columns.iter().find(|c| a.columns.contains(c)) {
        return Err(Error::DuplicateColumn(c.clone()));
    }
    let mut columns = a.columns.clone();
    columns.extend(b.columns.iter().cloned());
    let mut rows = HashMap::with_capacity(a.rows.len() * b.rows.len());
    for (ra, &ca) in &a.rows {
        for (rb, &cb) in &b.rows {
            let mut r = Vec::with_capacity(ra.len() + rb.len());
            r.extend(ra.iter().cloned());
            r.extend(rb.iter().cloned());
            rows.insert(r, ca.checked_mul(cb).ok_or(Error::CountOverflow)?);
        }
    }
    Ok(ContingencyTable {
        columns,
        rows,
        note: String::new(),
    })
}

/// +: counts of matching rows added; unmatched rows pass through.
pub fn add(a: &ContingencyTable, b: &ContingencyTable) -> Result<ContingencyTable> {
    let perm = permutation(&b.columns, &a.columns)?;
    let mut out = a.clone();
    for (r, &c) in &b.rows {
        let aligned: Row = perm.iter().map(|&i| r[i].clone()).collect();
        out.accumulate(aligned, c)?;
    }
    Ok(out)
}

/// −: defined only when every row of `b` is in `a` with at least its count.
/// Rows reaching zero are removed.
pub fn subtract(a: &ContingencyTable, b: &ContingencyTable) -> Result<ContingencyTable> {
    let perm = permutation(&b.columns, &a.columns)?;
    let mut out = a.clone();
    for (r, &take) in &b.rows {
        let aligned: Row = perm.iter().map(|&i| r[i].clone()).collect();
        match out.rows.get_mut(&aligned) {
            Some(have) if *have > take => *have -= take,
            Some(have) if *have == take => {
                out.rows.remove(&aligned);
            }
            have => {
                return Err(Error::SubtractionUndefined {
                    row: row_strings(&aligned),
                    have: have.map_or(0, |h| *h),
                    take,
                })
            }
        }
    }
    Ok(out)
}

/// Adds one constant-valued column.
pub fn extend_with_constant(
    ct: &ContingencyTable,
    column: impl Into<String>,
    value: impl Into<Value>,
) -> Result<ContingencyTable> {
    extend_with_constants(ct, &[(column.into(), value.into())])
}

/// Adds several constant-valued columns at once.
pub fn extend_with_constants(
    ct: &ContingencyTable,
    constants: &[(String, Value)],
) -> Result<ContingencyTable> {
    let mut columns = ct.columns.clone();
    for (c, _) in constants {
        if columns.contains(c) {
            return Err(Error::DuplicateColumn(c.clone()));
        }
        columns.push(c.clone());
    }
    check_unique(&columns)?;
    let rows = ct
        .rows
        .iter()
        .map(|(r, &c)| {
            let mut r = r.clone();
            r.extend(constants.iter().map(|(_, v)| v.clone()));
            (r, c)
        })
        .collect();
    Ok(ContingencyTable {
        columns,
        rows,
        note: ct.note.clone(),
    })
}

/// ∪: concatenation of two tables over the same columns with no shared row.
pub fn union_disjoint(a: &ContingencyTable, b: &ContingencyTable) -> Result<ContingencyTable> {
    let perm = permutation(&b.columns, &a.columns)?;
    let mut out = a.clone();
    out.rows.reserve(b.rows.len());
    for (r, &c) in &b.rows {
        let aligned: Row = perm.iter().map(|&i| r[i].clone()).collect();
        if out.rows.contains_key(&aligned) {
            return Err(Error::SharedRow(row_strings(&aligned)));
        }
        out.rows.insert(aligned, c);
    }
    Ok(out)
}
