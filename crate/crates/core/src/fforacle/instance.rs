//! Plain-text instance files.
//!
//! ```text
//! # comments start with '#'
//! p 3
//! base 2 2
//! columns 3
//! row 2 0              # multidegree of each row, in order
//! row 0 2
//! term 0 1 2 2 0 0 0 0 0   # row col coeff exponents...
//! ```

use std::fmt::Write as _;

use super::forms::{MorphismMatrix, MultiForm};
use super::OracleError;

/// Exponent vector and coefficient of one monomial.
type Term = (Vec<u32>, u32);

pub fn to_text(m: &MorphismMatrix) -> String {
    let join = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    writeln!(s, "p {}", m.p).unwrap();
    writeln!(s, "base {}", join(&m.dims)).unwrap();
    writeln!(s, "columns {}", m.e()).unwrap();
    for d in &m.row_degrees {
        writeln!(s, "row {}", join(d)).unwrap();
    }
    for (i, row) in m.entries.iter().enumerate() {
        for (j, form) in row.iter().enumerate() {
            for (exp, c) in &form.terms {
                writeln!(s, "term {i} {j} {c} {}", join(exp)).unwrap();
            }
        }
    }
    s
}

pub fn from_text(text: &str) -> Result<MorphismMatrix, OracleError> {
    let mut p = None;
    let mut dims: Option<Vec<u32>> = None;
    let mut columns = None;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut terms: Vec<(usize, usize, u32, Vec<u32>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| OracleError::Parse { line, message };
        let mut words = content.split_whitespace();
        let key = words.next().unwrap_or_default();
        let nums: Vec<u32> = words
            .map(|w| w.parse::<u32>().map_err(|_| err(format!("expected a non-negative integer, found {w:?}"))))
            .collect::<Result<_, _>>()?;
        match key {
            "p" if nums.len() == 1 => p = Some(nums[0]),
            "base" if !nums.is_empty() => dims = Some(nums),
            "columns" if nums.len() == 1 => columns = Some(nums[0] as usize),
            "row" => rows.push(nums),
            "term" if nums.len() >= 3 => terms.push((nums[0] as usize, nums[1] as usize, nums[2], nums[3..].to_vec())),
            _ => return Err(err(format!("unrecognised line {content:?}"))),
        }
    }
    let missing = |what: &str| OracleError::Parse { line: 0, message: format!("missing `{what}` line") };
    let p = p.ok_or_else(|| missing("p"))?;
    let dims = dims.ok_or_else(|| missing("base"))?;
    let e = columns.ok_or_else(|| missing("columns"))?;
    let mut grouped: Vec<Vec<Vec<Term>>> = vec![vec![Vec::new(); e]; rows.len()];
    for (i, j, c, exp) in terms {
        let slot = grouped
            .get_mut(i)
            .and_then(|r| r.get_mut(j))
            .ok_or_else(|| OracleError::Malformed(format!("term at ({i}, {j}) outside a {}×{e} matrix", rows.len())))?;
        slot.push((exp, c));
    }
    let entries = grouped
        .into_iter()
        .zip(&rows)
        .map(|(row, deg)| row.into_iter().map(|t| MultiForm::new(&dims, deg, p, t)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    MorphismMatrix::new(p, &dims, rows, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let m = MorphismMatrix::random_enriques(5, &mut ChaCha8Rng::seed_from_u64(11));
        assert_eq!(from_text(&to_text(&m)).unwrap(), m);
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(from_text("p 3\nbase 2 x\n"), Err(OracleError::Parse { line: 2, .. })));
        assert!(matches!(from_text("p 3\nbase 2 2\n"), Err(OracleError::Parse { line: 0, .. })));
        let bad_degree = "p 3\nbase 2 2\ncolumns 1\nrow 2 0\nterm 0 0 1 1 0 0 1 0 0\n";
        assert!(matches!(from_text(bad_degree), Err(OracleError::Malformed(_))));
        assert!(matches!(from_text("p 4\nbase 1\ncolumns 1\nrow 1\n"), Err(OracleError::NotPrime(4))));
    }
}
