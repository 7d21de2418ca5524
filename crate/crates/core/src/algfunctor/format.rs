//! Text format for an abstract algebra functor on sizes `≤ 2`:
//!
//! ```text
//! algebra <name>
//! dims <d0> <d1> <d2>
//! mul <n>        then d_n rows of d_n² rationals (column i·d+j is e_i·e_j)
//! unit <n>       then one row of d_n rationals
//! act            then a `corr` block and d_Y rows of d_X rationals
//! ```
//!
//! Only a generating set of actions is needed; the rest is completed by
//! composition and the result checked for functoriality.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::AlgebraFunctorRep;
use crate::functors::from_table;
use crate::kernel::{Matrix, Scalar, SparseVec};
use crate::relations::{enumerate_correspondences, Correspondence};
use crate::sweep::{Execution, SweepPlan};
use crate::text::{parse_header, Lines, ParseError};

/// The largest size the format covers.
pub const FORMAT_MAX_SIZE: usize = 2;

fn read_rows(lines: &mut Lines<'_>, rows: usize, cols: usize) -> Result<Vec<Vec<Scalar>>, ParseError> {
    if cols == 0 {
        return Ok(vec![Vec::new(); rows]);
    }
    (0..rows)
        .map(|r| {
            let (no, line) = lines.expect_line(&format!("matrix row {r}"))?;
            let row = line
                .split_whitespace()
                .map(|s| s.parse::<Scalar>().map_err(|e| ParseError::new(no, format!("bad rational `{s}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != cols {
                return Err(ParseError::new(no, format!("row has {} entries, expected {cols}", row.len())));
            }
            Ok(row)
        })
        .collect()
}

fn to_matrix(rows: usize, cols: usize, values: Vec<Vec<Scalar>>) -> Matrix {
    let sparse: Vec<SparseVec> = values.iter().map(|r| SparseVec::from_dense(r)).collect();
    let m = Matrix::from_sparse_rows(cols, &sparse);
    debug_assert_eq!(m.shape(), (rows, cols));
    m
}

/// Parses, completes and wraps an algebra functor. Axioms are not checked here.
pub fn parse_algebra(src: &str) -> Result<AlgebraFunctorRep, ParseError> {
    let mut lines = Lines::new(src);
    let (no, header) = lines.expect_line("`algebra <name>` header")?;
    let name = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["algebra", name] => name.to_string(),
        _ => return Err(ParseError::new(no, "expected `algebra <name>`")),
    };
    let (no, line) = lines.expect_line("`dims` line")?;
    let mut words = line.split_whitespace();
    if words.next() != Some("dims") {
        return Err(ParseError::new(no, "expected `dims <d0> ...`"));
    }
    let dims = words
        .map(|w| w.parse::<usize>().map_err(|_| ParseError::new(no, format!("bad dimension `{w}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if dims.is_empty() || dims.len() > FORMAT_MAX_SIZE + 1 {
        return Err(ParseError::new(no, format!("expected 1 to {} dimensions", FORMAT_MAX_SIZE + 1)));
    }
    let bound = dims.len() - 1;
    let mut mul: Vec<Option<Matrix>> = vec![None; bound + 1];
    let mut unit: Vec<Option<SparseVec>> = vec![None; bound + 1];
    let mut table: HashMap<Correspondence, Matrix> = HashMap::new();
    while let Some((no, line)) = lines.next_line() {
        let keyword = line.split_whitespace().next().unwrap_or("");
        match keyword {
            "mul" | "unit" => {
                let n = parse_header(no, line, keyword, 1)?[0];
                if n > bound {
                    return Err(ParseError::new(no, format!("size {n} beyond the declared dims")));
                }
                let d = dims[n];
                if keyword == "mul" {
                    let rows = read_rows(&mut lines, d, d * d)?;
                    if mul[n].replace(to_matrix(d, d * d, rows)).is_some() {
                        return Err(ParseError::new(no, format!("duplicate multiplication at size {n}")));
                    }
                } else {
                    let row = read_rows(&mut lines, usize::from(d > 0), d)?;
                    let v = row.first().map_or_else(SparseVec::new, |r| SparseVec::from_dense(r));
                    if unit[n].replace(v).is_some() {
                        return Err(ParseError::new(no, format!("duplicate unit at size {n}")));
                    }
                }
            }
            "act" => {
                let u = Correspondence::read(&mut lines)?;
                if u.source() > bound || u.target() > bound {
                    return Err(lines.error("correspondence beyond the declared dims"));
                }
                let (r, c) = (dims[u.target()], dims[u.source()]);
                let m = to_matrix(r, c, read_rows(&mut lines, r, c)?);
                if table.insert(u, m).is_some() {
                    return Err(ParseError::new(no, "duplicate action"));
                }
            }
            other => return Err(ParseError::new(no, format!("unknown section `{other}`"))),
        }
    }
    let missing = |what: &str, n: usize| ParseError::new(0, format!("missing {what} at size {n}"));
    let mul = mul
        .into_iter()
        .enumerate()
        .map(|(n, m)| m.ok_or_else(|| missing("mul", n)))
        .collect::<Result<Vec<_>, _>>()?;
    let unit = unit
        .into_iter()
        .enumerate()
        .map(|(n, u)| u.ok_or_else(|| missing("unit", n)))
        .collect::<Result<Vec<_>, _>>()?;
    complete(&mut table, &dims)?;
    let carrier = from_table(&name, dims, table).map_err(|e| ParseError::new(0, e.to_string()))?;
    carrier
        .check_functoriality(&SweepPlan::new(bound, 0, 0), Execution::Sequential)
        .map_err(|w| ParseError::new(0, format!("inconsistent actions: {w}")))?;
    AlgebraFunctorRep::new(&name, carrier, mul, unit).map_err(|e| ParseError::new(0, e.to_string()))
}

/// Adds identities and closes the table under composition.
fn complete(table: &mut HashMap<Correspondence, Matrix>, dims: &[usize]) -> Result<(), ParseError> {
    for (n, &d) in dims.iter().enumerate() {
        let id = Correspondence::identity(n);
        match table.get(&id) {
            Some(m) if !m.is_identity() => {
                return Err(ParseError::new(0, format!("identity on size {n} must act as the identity")))
            }
            Some(_) => {}
            None => {
                table.insert(id, Matrix::identity(d));
            }
        }
    }
    loop {
        let known: Vec<(Correspondence, Matrix)> = table.iter().map(|(u, m)| (u.clone(), m.clone())).collect();
        let mut grew = false;
        for (v, mv) in &known {
            for (u, mu) in &known {
                if v.source() != u.target() {
                    continue;
                }
                let w = v.compose(u).expect("composable");
                if let std::collections::hash_map::Entry::Vacant(e) = table.entry(w) {
                    e.insert(mv.mul(mu));
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    for y in 0..dims.len() {
        for x in 0..dims.len() {
            for u in enumerate_correspondences(y, x).expect("small") {
                if !table.contains_key(&u) {
                    return Err(ParseError::new(0, format!("the given actions do not generate {u:?}")));
                }
            }
        }
    }
    Ok(())
}

fn write_matrix(out: &mut String, m: &Matrix) {
    if m.cols() == 0 {
        return;
    }
    for row in m.to_dense() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
}

/// Writes every structure constant and every non-identity action.
pub fn write_algebra(a: &AlgebraFunctorRep) -> Result<String, String> {
    if a.bound() > FORMAT_MAX_SIZE {
        return Err(format!("the format covers sizes ≤ {FORMAT_MAX_SIZE}"));
    }
    let mut out = format!("algebra {}\n", a.name.replace(char::is_whitespace, "_"));
    let dims: Vec<String> = (0..=a.bound()).map(|n| a.dim(n).to_string()).collect();
    let _ = writeln!(out, "dims {}", dims.join(" "));
    for n in 0..=a.bound() {
        let _ = writeln!(out, "mul {n}");
        write_matrix(&mut out, &a.mul[n]);
        let _ = writeln!(out, "unit {n}");
        write_matrix(&mut out, &Matrix::from_sparse_rows(a.dim(n), &[a.unit[n].clone()]));
    }
    for y in 0..=a.bound() {
        for x in 0..=a.bound() {
            for u in enumerate_correspondences(y, x).expect("small") {
                if x == y && u == Correspondence::identity(x) {
                    continue;
                }
                out.push_str("act\n");
                out.push_str(&u.to_text());
                write_matrix(&mut out, &a.act(&u));
            }
        }
    }
    Ok(out)
}
