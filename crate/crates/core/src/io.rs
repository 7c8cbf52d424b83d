//! Plain-text input formats.
//!
//! - Sequence: whitespace-separated numbers; a complex entry is written
//!   `re,im`.
//! - Step function: a first line `L <level>`, then `2^L` entries in the
//!   sequence syntax.
//! - Matrix: row-major, one row per line, entries in the sequence syntax.
//!
//! Lines starting with `#` are ignored.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::CustomSystem;
use crate::rearrange::{DyadicStepFunction, Sequence};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_number(tok: &str, line: usize) -> Result<f64> {
    let x: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("not a number: {tok:?}")))?;
    if !x.is_finite() {
        return Err(parse_err(line, format!("non-finite value: {tok:?}")));
    }
    Ok(x)
}

fn parse_entry(tok: &str, line: usize) -> Result<Complex64> {
    match tok.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_number(re, line)?, parse_number(im, line)?)),
        None => Ok(Complex64::new(parse_number(tok, line)?, 0.0)),
    }
}

/// Content lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn entries<'a>(it: impl Iterator<Item = (usize, &'a str)>) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (n, l) in it {
        for tok in l.split_whitespace() {
            out.push(parse_entry(tok, n)?);
        }
    }
    Ok(out)
}

pub fn parse_sequence(text: &str) -> Result<Sequence> {
    Sequence::new(entries(lines(text))?)
}

pub fn parse_step_function(text: &str) -> Result<DyadicStepFunction> {
    let mut it = lines(text);
    let (n, header) = it.next().ok_or_else(|| parse_err(1, "empty step-function file"))?;
    let level = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["L", lv] => lv
            .parse::<u32>()
            .map_err(|_| parse_err(n, format!("bad level {lv:?}")))?,
        _ => return Err(parse_err(n, "expected header line \"L <level>\"")),
    };
    let vals = entries(it)?;
    let expected = 1usize
        .checked_shl(level)
        .ok_or_else(|| parse_err(n, format!("level {level} too large")))?;
    if vals.len() != expected {
        return Err(parse_err(
            n,
            format!("level {level} needs {expected} values, found {}", vals.len()),
        ));
    }
    DyadicStepFunction::new(level, vals)
}

/// Whether a file looks like a step function (has the `L` header).
pub fn is_step_function(text: &str) -> bool {
    lines(text).next().is_some_and(|(_, l)| l.starts_with('L'))
}

pub fn parse_matrix(text: &str) -> Result<CustomSystem> {
    let mut rows = Vec::new();
    let mut width = None;
    for (n, l) in lines(text) {
        let row = entries(std::iter::once((n, l)))?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(n, format!("row has {} entries, expected {w}", row.len())))
            }
            _ => {}
        }
        rows.extend(row);
    }
    let n = width.ok_or_else(|| parse_err(1, "empty matrix file"))?;
    CustomSystem::new(n, rows)
}

pub fn format_sequence(a: &Sequence) -> String {
    a.entries()
        .iter()
        .map(|z| {
            if z.im == 0.0 {
                format!("{}", z.re)
            } else {
                format!("{},{}", z.re, z.im)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn format_step_function(f: &DyadicStepFunction) -> String {
    let seq = Sequence::new(f.values().to_vec()).expect("finite values");
    format!("L {}\n{}\n", f.level(), format_sequence(&seq))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences() {
        let a = parse_sequence("1 2\n# comment\n 3,-1\n").unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.entries()[2], Complex64::new(3.0, -1.0));
        assert!(matches!(parse_sequence("1 x"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_sequence("1 inf").is_err());
        assert_eq!(parse_sequence(&format_sequence(&a)).unwrap(), a);
    }

    #[test]
    fn step_functions() {
        let f = parse_step_function("L 2\n0 5\n1 5\n").unwrap();
        assert_eq!(f.level(), 2);
        assert!(is_step_function("L 2\n0 5 1 5"));
        assert!(!is_step_function("1 1"));
        assert!(matches!(parse_step_function("L 2\n1 2 3"), Err(Error::Parse { .. })));
        assert!(parse_step_function("2\n1 2 3 4").is_err());
        assert_eq!(parse_step_function(&format_step_function(&f)).unwrap(), f);
    }

    #[test]
    fn matrices() {
        let m = parse_matrix("1 1\n1 -1\n").unwrap();
        assert_eq!(m.size(), 2);
        assert!(matches!(parse_matrix("1 1\n1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix("1 1\n1 1\n"), Err(Error::NotOrthonormal(_))));
    }
}
