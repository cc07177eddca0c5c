//! MPS reading and writing.
//!
//! Token-based: both fixed-format and free-format files parse, provided names
//! contain no embedded spaces. Section headers start in column one; data lines
//! are indented. `*` comment lines and blank lines are skipped. Numeric fields
//! use standard decimal/E notation (no Fortran `D` exponents).
//!
//! Conventions applied on read:
//! - the first `N` row is the objective; later `N` rows are free rows whose
//!   coefficients are discarded,
//! - an RHS entry on the objective row sets the objective constant to the
//!   negated value,
//! - duplicate coefficient entries are summed,
//! - variables default to `[0, +∞)`, integral ones included,
//! - an `UP` bound below zero on a variable whose lower bound was never set
//!   drops the lower bound to `-∞` (historic convention),
//! - `OBJSENSE MAX` negates the objective into minimization form and records
//!   the flip.
//!
//! The writer emits one coefficient per line, shortest-round-trip number
//! formatting, ranged rows as `G` rows plus a `RANGES` entry of `U - L`, and a
//! zero objective entry for variables that would otherwise not appear in
//! `COLUMNS`. Paths ending in `.gz` are transparently (de)compressed.

use super::{InstanceParts, MipInstance, ModelError};
use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MpsError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: unknown section '{token}'")]
    UnknownSection { line: usize, token: String },
    #[error("line {line}: section {section} out of order")]
    SectionOrder { line: usize, section: String },
    #[error("missing required section {0}")]
    MissingSection(&'static str),
    #[error("line {line}: data before any section")]
    DataBeforeSection { line: usize },
    #[error("line {line}: unknown row '{name}'")]
    UnknownRow { line: usize, name: String },
    #[error("line {line}: unknown column '{name}'")]
    UnknownColumn { line: usize, name: String },
    #[error("line {line}: duplicate row '{name}'")]
    DuplicateRow { line: usize, name: String },
    #[error("line {line}: cannot parse '{token}' as a number")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: variable '{name}' bounds cross: lower {lb} exceeds upper {ub}")]
    ColBoundCross { line: usize, name: String, lb: f64, ub: f64 },
    #[error("line {line}: row '{name}' bounds cross: lower {lb} exceeds upper {ub}")]
    RowBoundCross { line: usize, name: String, lb: f64, ub: f64 },
    #[error("line {line}: content after ENDATA")]
    AfterEndata { line: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowType {
    LessEqual,
    GreaterEqual,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    Endata,
}

#[derive(Default)]
struct Parser {
    name: String,
    maximize: bool,
    obj_row: Option<String>,
    free_rows: HashSet<String>,
    row_index: HashMap<String, usize>,
    row_names: Vec<String>,
    row_types: Vec<RowType>,
    rhs: Vec<f64>,
    rhs_set: Vec<bool>,
    range: Vec<Option<f64>>,
    row_touch_line: Vec<usize>,
    col_index: HashMap<String, usize>,
    col_names: Vec<String>,
    objective: Vec<f64>,
    obj_constant: f64,
    triplets: Vec<(usize, usize, f64)>,
    integral: Vec<bool>,
    col_lb: Vec<f64>,
    col_ub: Vec<f64>,
    lb_explicit: Vec<bool>,
    col_touch_line: Vec<usize>,
    in_integer_block: bool,
}

fn parse_number(token: &str, line: usize) -> Result<f64, MpsError> {
    token
        .parse::<f64>()
        .map_err(|_| MpsError::BadNumber { line, token: token.to_string() })
}

impl Parser {
    fn declare_col(&mut self, name: &str) -> usize {
        if let Some(&j) = self.col_index.get(name) {
            return j;
        }
        let j = self.col_names.len();
        self.col_index.insert(name.to_string(), j);
        self.col_names.push(name.to_string());
        self.objective.push(0.0);
        self.integral.push(self.in_integer_block);
        self.col_lb.push(0.0);
        self.col_ub.push(f64::INFINITY);
        self.lb_explicit.push(false);
        self.col_touch_line.push(0);
        j
    }

    fn rows_line(&mut self, tokens: &[&str], line: usize) -> Result<(), MpsError> {
        if tokens.len() != 2 {
            return Err(MpsError::Syntax {
                line,
                msg: format!("expected 'TYPE NAME' in ROWS, got {} fields", tokens.len()),
            });
        }
        let (kind, name) = (tokens[0], tokens[1]);
        if self.row_index.contains_key(name)
            || self.free_rows.contains(name)
            || self.obj_row.as_deref() == Some(name)
        {
            return Err(MpsError::DuplicateRow { line, name: name.to_string() });
        }
        match kind {
            "N" | "n" => {
                if self.obj_row.is_none() {
                    self.obj_row = Some(name.to_string());
                } else {
                    self.free_rows.insert(name.to_string());
                }
            }
            "L" | "l" | "G" | "g" | "E" | "e" => {
                let t = match kind {
                    "L" | "l" => RowType::LessEqual,
                    "G" | "g" => RowType::GreaterEqual,
                    _ => RowType::Equal,
                };
                self.row_index.insert(name.to_string(), self.row_names.len());
                self.row_names.push(name.to_string());
                self.row_types.push(t);
                self.rhs.push(0.0);
                self.rhs_set.push(false);
                self.range.push(None);
                self.row_touch_line.push(line);
            }
            other => {
                return Err(MpsError::Syntax {
                    line,
                    msg: format!("unknown row type '{other}'"),
                })
            }
        }
        Ok(())
    }

    fn is_marker_line(tokens: &[&str]) -> bool {
        tokens.iter().any(|t| *t == "'MARKER'")
    }

    fn marker_line(&mut self, tokens: &[&str], line: usize) -> Result<(), MpsError> {
        if tokens.iter().any(|t| *t == "'INTORG'") {
            self.in_integer_block = true;
            Ok(())
        } else if tokens.iter().any(|t| *t == "'INTEND'") {
            self.in_integer_block = false;
            Ok(())
        } else {
            Err(MpsError::Syntax { line, msg: "marker line is neither 'INTORG' nor 'INTEND'".into() })
        }
    }

    fn columns_line(&mut self, tokens: &[&str], line: usize) -> Result<(), MpsError> {
        if Self::is_marker_line(tokens) {
            return self.marker_line(tokens, line);
        }
        if tokens.len() != 3 && tokens.len() != 5 {
            return Err(MpsError::Syntax {
                line,
                msg: format!("expected 'COL ROW VALUE [ROW VALUE]' in COLUMNS, got {} fields", tokens.len()),
            });
        }
        let j = self.declare_col(tokens[0]);
        for pair in tokens[1..].chunks(2) {
            let (row, value) = (pair[0], parse_number(pair[1], line)?);
            if self.obj_row.as_deref() == Some(row) {
                self.objective[j] += value;
            } else if let Some(&i) = self.row_index.get(row) {
                self.triplets.push((i, j, value));
            } else if self.free_rows.contains(row) {
                // Coefficient on a free row carries no constraint; drop it.
            } else {
                return Err(MpsError::UnknownRow { line, name: row.to_string() });
            }
        }
        Ok(())
    }

    /// RHS and RANGES lines share a shape: an optional set name, then
    /// one or two `(row, value)` pairs.
    fn row_value_pairs<'a>(
        tokens: &'a [&'a str],
        line: usize,
        section: &str,
    ) -> Result<&'a [&'a str], MpsError> {
        let rest = if tokens.len() % 2 == 1 { &tokens[1..] } else { tokens };
        if rest.is_empty() || rest.len() > 4 {
            return Err(MpsError::Syntax {
                line,
                msg: format!("expected '[SET] ROW VALUE [ROW VALUE]' in {section}, got {} fields", tokens.len()),
            });
        }
        Ok(rest)
    }

    fn rhs_line(&mut self, tokens: &[&str], line: usize) -> Result<(), MpsError> {
        let pairs = Self::row_value_pairs(tokens, line, "RHS")?;
        for pair in pairs.chunks(2) {
            let (row, value) = (pair[0], parse_number(pair[1], line)?);
            if self.obj_row.as_deref() == Some(row) {
                // RHS on the objective row encodes the negated constant.
                self.obj_constant = -value;
            } else if let Some(&i) = self.row_index.get(row) {
                self.rhs[i] = value;
                self.rhs_set[i] = true;
                self.row_touch_line[i] = line;
            } else if self.free_rows.contains(row) {
                // No constraint to attach it to.
            } else {
                return Err(MpsError::UnknownRow { line, name: row.to_string() });
            }
        }
        Ok(())
    }

    fn ranges_line(&mut self, tokens: &[&str], line: usize) -> Result<(), MpsError> {
        let pairs = Self::row_value_pairs(tokens, line, "RANGES")?;
        for pair in pairs.chunks(2) {
            let (row, value) = (pair[0], parse_number(pair[1], line)?);
            if let Some(&i) = self.row_index.get(row) {
                self.range[i] = Some(value);
                self.row_touch_line[i] = line;
            } else if self.obj_row.as_deref() == Some(row) {
                return Err(MpsError::Syntax { line, msg: "RANGES entry on the objective row".into() });
            } else if self.free_rows.contains(row) {
                return Err(MpsError::Syntax { line, msg: format!("RANGES entry on free row '{row}'") });
            } else {
                return Err(MpsError::UnknownRow { line, name: row.to_string() });
            }
        }
        Ok(())
    }

    fn bounds_line(&mut self, tokens: &[&str], line: usize) -> Result<(), MpsError> {
        if tokens.len() < 2 {
            return Err(MpsError::Syntax { line, msg: "bound line too short".into() });
        }
        let kind = tokens[0].to_ascii_uppercase();
        let needs_value = matches!(kind.as_str(), "UP" | "LO" | "FX" | "LI" | "UI");
        // The bound-set name is optional; locate the column by field count.
        let (col_tok, val_tok) = if needs_value {
            match tokens.len() {
                4 => (tokens[2], Some(tokens[3])),
                3 => (tokens[1], Some(tokens[2])),
                _ => {
                    return Err(MpsError::Syntax {
                        line,
                        msg: format!("bound type {kind} expects 'SET COL VALUE'"),
                    })
                }
            }
        } else {
            match tokens.len() {
                3.. => (tokens[2], None),
                2 => (tokens[1], None),
                _ => unreachable!("len >= 2 checked above"),
            }
        };
        let j = match self.col_index.get(col_tok) {
            Some(&j) => j,
            None => return Err(MpsError::UnknownColumn { line, name: col_tok.to_string() }),
        };
        self.col_touch_line[j] = line;
        let value = match val_tok {
            Some(t) => parse_number(t, line)?,
            None => 0.0,
        };
        match kind.as_str() {
            "UP" => {
                self.col_ub[j] = value;
                if value < 0.0 && !self.lb_explicit[j] {
                    // Historic convention: a negative upper bound on a variable
                    // whose lower bound was never stated frees the lower bound.
                    self.col_lb[j] = f64::NEG_INFINITY;
                }
            }
            "LO" => {
                self.col_lb[j] = value;
                self.lb_explicit[j] = true;
            }
            "FX" => {
                self.col_lb[j] = value;
                self.col_ub[j] = value;
                self.lb_explicit[j] = true;
            }
            "FR" => {
                self.col_lb[j] = f64::NEG_INFINITY;
                self.col_ub[j] = f64::INFINITY;
                self.lb_explicit[j] = true;
            }
            "MI" => {
                self.col_lb[j] = f64::NEG_INFINITY;
                self.lb_explicit[j] = true;
            }
            "PL" => {
                self.col_ub[j] = f64::INFINITY;
            }
            "BV" => {
                self.integral[j] = true;
                self.col_lb[j] = 0.0;
                self.col_ub[j] = 1.0;
                self.lb_explicit[j] = true;
            }
            "LI" => {
                self.integral[j] = true;
                self.col_lb[j] = value;
                self.lb_explicit[j] = true;
            }
            "UI" => {
                self.integral[j] = true;
                self.col_ub[j] = value;
            }
            other => {
                return Err(MpsError::Syntax { line, msg: format!("unknown bound type '{other}'") })
            }
        }
        Ok(())
    }

    fn assemble(self) -> Result<MipInstance, MpsError> {
        let m = self.row_names.len();
        let mut row_lb = vec![0.0; m];
        let mut row_ub = vec![0.0; m];
        for i in 0..m {
            let b = self.rhs[i];
            let (lo, hi) = match self.row_types[i] {
                RowType::LessEqual => match self.range[i] {
                    Some(r) => (b - r.abs(), b),
                    None => (f64::NEG_INFINITY, b),
                },
                RowType::GreaterEqual => match self.range[i] {
                    Some(r) => (b, b + r.abs()),
                    None => (b, f64::INFINITY),
                },
                RowType::Equal => match self.range[i] {
                    Some(r) if r > 0.0 => (b, b + r),
                    Some(r) => (b + r, b),
                    None => (b, b),
                },
            };
            if lo > hi {
                return Err(MpsError::RowBoundCross {
                    line: self.row_touch_line[i],
                    name: self.row_names[i].clone(),
                    lb: lo,
                    ub: hi,
                });
            }
            row_lb[i] = lo;
            row_ub[i] = hi;
        }
        for j in 0..self.col_names.len() {
            if self.col_lb[j] > self.col_ub[j] {
                return Err(MpsError::ColBoundCross {
                    line: self.col_touch_line[j],
                    name: self.col_names[j].clone(),
                    lb: self.col_lb[j],
                    ub: self.col_ub[j],
                });
            }
        }
        let (objective, constant) = if self.maximize {
            (self.objective.iter().map(|c| -c).collect(), -self.obj_constant)
        } else {
            (self.objective, self.obj_constant)
        };
        Ok(MipInstance::from_parts(InstanceParts {
            name: self.name,
            objective,
            objective_constant: constant,
            flipped_sense: self.maximize,
            triplets: self.triplets,
            row_lb,
            row_ub,
            col_lb: self.col_lb,
            col_ub: self.col_ub,
            integral: self.integral,
            row_names: self.row_names,
            col_names: self.col_names,
        })?)
    }
}

/// Parses an MPS model from a buffered reader.
pub fn parse_mps<R: BufRead>(reader: R) -> Result<MipInstance, MpsError> {
    let mut parser = Parser::default();
    let mut section = Section::Start;
    let mut seen = Vec::new();
    let mut pending_objsense = false;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let raw = line?;
        let trimmed = raw.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('*') {
            continue;
        }
        let indented = trimmed.starts_with(' ') || trimmed.starts_with('\t');
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();

        if section == Section::Endata {
            return Err(MpsError::AfterEndata { line: line_no });
        }

        if !indented {
            // Section header.
            let head = tokens[0].to_ascii_uppercase();
            let new_section = match head.as_str() {
                "NAME" => {
                    if tokens.len() > 1 {
                        parser.name = tokens[1].to_string();
                    }
                    Section::Name
                }
                "OBJSENSE" => {
                    if tokens.len() > 1 {
                        parser.maximize = objsense_is_max(tokens[1], line_no)?;
                    } else {
                        pending_objsense = true;
                    }
                    Section::ObjSense
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::Endata,
                other => {
                    return Err(MpsError::UnknownSection { line: line_no, token: other.to_string() })
                }
            };
            if new_section != Section::Endata {
                if seen.contains(&new_section) {
                    return Err(MpsError::SectionOrder { line: line_no, section: head });
                }
                if seen.iter().any(|&s| s > new_section) {
                    return Err(MpsError::SectionOrder { line: line_no, section: head });
                }
                let predecessor = match new_section {
                    Section::Columns => Some(Section::Rows),
                    Section::Rhs => Some(Section::Columns),
                    Section::Ranges | Section::Bounds => Some(Section::Rhs),
                    _ => None,
                };
                if let Some(p) = predecessor {
                    if !seen.contains(&p) {
                        return Err(MpsError::SectionOrder { line: line_no, section: head });
                    }
                }
                seen.push(new_section);
            }
            if pending_objsense && new_section != Section::ObjSense && section == Section::ObjSense
            {
                return Err(MpsError::Syntax {
                    line: line_no,
                    msg: "OBJSENSE section has no MIN/MAX entry".into(),
                });
            }
            section = new_section;
            continue;
        }

        // Data line.
        match section {
            Section::Start | Section::Name => {
                return Err(MpsError::DataBeforeSection { line: line_no })
            }
            Section::ObjSense => {
                if !pending_objsense {
                    return Err(MpsError::Syntax {
                        line: line_no,
                        msg: "unexpected extra OBJSENSE entry".into(),
                    });
                }
                parser.maximize = objsense_is_max(tokens[0], line_no)?;
                pending_objsense = false;
            }
            Section::Rows => parser.rows_line(&tokens, line_no)?,
            Section::Columns => parser.columns_line(&tokens, line_no)?,
            Section::Rhs => parser.rhs_line(&tokens, line_no)?,
            Section::Ranges => parser.ranges_line(&tokens, line_no)?,
            Section::Bounds => parser.bounds_line(&tokens, line_no)?,
            Section::Endata => unreachable!("handled above"),
        }
    }

    for (required, label) in [
        (Section::Rows, "ROWS"),
        (Section::Columns, "COLUMNS"),
        (Section::Rhs, "RHS"),
        (Section::Bounds, "BOUNDS"),
    ] {
        if !seen.contains(&required) {
            return Err(MpsError::MissingSection(label));
        }
    }
    parser.assemble()
}

fn objsense_is_max(token: &str, line: usize) -> Result<bool, MpsError> {
    match token.to_ascii_uppercase().as_str() {
        "MAX" | "MAXIMIZE" => Ok(true),
        "MIN" | "MINIMIZE" => Ok(false),
        other => Err(MpsError::Syntax { line, msg: format!("unknown objective sense '{other}'") }),
    }
}

/// Parses an MPS model held in a string.
pub fn parse_mps_str(text: &str) -> Result<MipInstance, MpsError> {
    parse_mps(std::io::Cursor::new(text.as_bytes()))
}

/// Reads an MPS file; paths ending in `.gz` are gunzipped on the fly.
pub fn read_mps_file<P: AsRef<Path>>(path: P) -> Result<MipInstance, MpsError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("gz")) {
        parse_mps(BufReader::new(GzDecoder::new(file)))
    } else {
        parse_mps(BufReader::new(file))
    }
}

fn fmt_num(v: f64) -> String {
    // Rust's shortest-round-trip formatting: parsing the text recovers the
    // exact double, which is what the write-then-parse identity relies on.
    format!("{v}")
}

/// Serializes an instance to MPS text.
///
/// Ranged rows become `G` rows with a `RANGES` entry of `U - L`; parsing
/// recovers the upper bound as `L + (U - L)`, which is exact whenever that
/// floating-point sum is (always true for same-scale binary-fraction bounds).
/// Everything else round-trips exactly.
pub fn write_mps(instance: &MipInstance) -> String {
    let mut out = String::new();
    if instance.name().is_empty() {
        out.push_str("NAME\n");
    } else {
        out.push_str(&format!("NAME          {}\n", instance.name()));
    }
    if instance.flipped_sense() {
        out.push_str("OBJSENSE\n    MAX\n");
    }

    // In the input sense: undo the minimization flip for emission.
    let sign = if instance.flipped_sense() { -1.0 } else { 1.0 };
    let n = instance.num_vars();
    let m = instance.num_rows();
    let (row_lb, row_ub) = (instance.row_lb(), instance.row_ub());

    out.push_str("ROWS\n");
    out.push_str(" N  OBJ\n");
    for i in 0..m {
        let (lo, hi) = (row_lb[i], row_ub[i]);
        let kind = if lo == hi {
            'E'
        } else if lo.is_finite() {
            'G'
        } else {
            'L'
        };
        out.push_str(&format!(" {kind}  {}\n", instance.row_name(i)));
    }

    out.push_str("COLUMNS\n");
    let mut in_integer_block = false;
    let mut marker_count = 0usize;
    for j in 0..n {
        if instance.is_integral(j) != in_integer_block {
            marker_count += 1;
            let flag = if instance.is_integral(j) { "'INTORG'" } else { "'INTEND'" };
            out.push_str(&format!("    M{marker_count:<8} 'MARKER'   {flag}\n"));
            in_integer_block = instance.is_integral(j);
        }
        let col = instance.col_name(j);
        let cj = sign * instance.objective()[j];
        let col_entries: Vec<(usize, f64)> = instance.matrix().col(j).collect();
        if cj != 0.0 || col_entries.is_empty() {
            // The zero objective entry keeps otherwise-absent variables
            // declared (and inside the right integrality block).
            out.push_str(&format!("    {col:<9} {:<9} {}\n", "OBJ", fmt_num(cj)));
        }
        for (i, v) in col_entries {
            out.push_str(&format!("    {col:<9} {:<9} {}\n", instance.row_name(i), fmt_num(v)));
        }
    }
    if in_integer_block {
        marker_count += 1;
        out.push_str(&format!("    M{marker_count:<8} 'MARKER'   'INTEND'\n"));
    }

    out.push_str("RHS\n");
    let constant = sign * instance.objective_constant();
    if constant != 0.0 {
        out.push_str(&format!("    RHS       {:<9} {}\n", "OBJ", fmt_num(-constant)));
    }
    for i in 0..m {
        let (lo, hi) = (row_lb[i], row_ub[i]);
        let b = if lo == hi || lo.is_finite() { lo } else { hi };
        if b != 0.0 {
            out.push_str(&format!("    RHS       {:<9} {}\n", instance.row_name(i), fmt_num(b)));
        }
    }
    let ranged: Vec<usize> =
        (0..m).filter(|&i| row_lb[i] < row_ub[i] && row_lb[i].is_finite() && row_ub[i].is_finite()).collect();
    if !ranged.is_empty() {
        out.push_str("RANGES\n");
        for i in ranged {
            let r = row_ub[i] - row_lb[i];
            out.push_str(&format!("    RNG       {:<9} {}\n", instance.row_name(i), fmt_num(r)));
        }
    }

    out.push_str("BOUNDS\n");
    for j in 0..n {
        let col = instance.col_name(j);
        let (lo, hi) = (instance.col_lb()[j], instance.col_ub()[j]);
        let integral = instance.is_integral(j);
        if lo == hi {
            out.push_str(&format!(" FX BND       {col:<9} {}\n", fmt_num(lo)));
            continue;
        }
        if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            out.push_str(&format!(" FR BND       {col}\n"));
            continue;
        }
        if integral && lo == 0.0 && hi == 1.0 {
            out.push_str(&format!(" BV BND       {col}\n"));
            continue;
        }
        if lo != 0.0 {
            if lo == f64::NEG_INFINITY {
                out.push_str(&format!(" MI BND       {col}\n"));
            } else {
                let tag = if integral { "LI" } else { "LO" };
                out.push_str(&format!(" {tag} BND       {col:<9} {}\n", fmt_num(lo)));
            }
        }
        if hi.is_finite() {
            let tag = if integral { "UI" } else { "UP" };
            out.push_str(&format!(" {tag} BND       {col:<9} {}\n", fmt_num(hi)));
        }
    }
    out.push_str("ENDATA\n");
    out
}

/// Writes an instance to a file; paths ending in `.gz` are gzipped.
pub fn write_mps_file<P: AsRef<Path>>(instance: &MipInstance, path: P) -> Result<(), std::io::Error> {
    let path = path.as_ref();
    let text = write_mps(instance);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("gz")) {
        let file = std::fs::File::create(path)?;
        let mut enc = GzEncoder::new(file, flate2::Compression::default());
        enc.write_all(text.as_bytes())?;
        enc.finish()?;
        Ok(())
    } else {
        std::fs::write(path, text)
    }
}

// Keep a compile check that plain readers work too (non-buffered sources).
#[allow(dead_code)]
fn parse_from_read<R: Read>(r: R) -> Result<MipInstance, MpsError> {
    parse_mps(BufReader::new(r))
}
