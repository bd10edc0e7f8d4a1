//! Plain-text exchange formats.
//!
//! Matrices: a `rows cols` header, then one row per line with entries written
//! as `re+imj` and separated by single spaces.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMat;

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", z.re, sign, z.im.abs())
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad complex entry '{s}'"));
    let body = s.strip_suffix('j').ok_or_else(bad)?;
    let bytes = body.as_bytes();
    // The split is the last sign that is neither leading nor part of an exponent.
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im: f64 = body[split..]
        .trim_start_matches('+')
        .parse()
        .map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

pub fn write_matrix(m: &CMat) -> String {
    let mut s = format!("{} {}\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_complex(m[(i, j)])).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Reads one matrix from a line iterator that skips blank and `#` lines.
pub(crate) fn read_matrix_from<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<CMat> {
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing matrix header".into()))?;
    let dims = parse_usizes(header, 2)?;
    let (r, c) = (dims[0], dims[1]);
    let mut m = CMat::zeros(r, c);
    for i in 0..r {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("matrix truncated at row {i}")))?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != c {
            return Err(Error::Parse(format!(
                "row {i}: expected {c} entries, got {}",
                entries.len()
            )));
        }
        for (j, e) in entries.iter().enumerate() {
            m[(i, j)] = parse_complex(e)?;
        }
    }
    Ok(m)
}

pub fn read_matrix(text: &str) -> Result<CMat> {
    let mut lines = content_lines(text);
    let m = read_matrix_from(&mut lines)?;
    if lines.next().is_some() {
        return Err(Error::Parse("trailing data after matrix".into()));
    }
    Ok(m)
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_usizes(line: &str, count: usize) -> Result<Vec<usize>> {
    let v: Vec<usize> = line
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad header '{line}'")))
        })
        .collect::<Result<_>>()?;
    if v.len() != count {
        return Err(Error::Parse(format!(
            "header '{line}' should have {count} integers"
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn complex_round_trip() {
        for z in [
            c64(1.0, 0.0),
            c64(-0.5, -2.0),
            c64(1e-20, 3.25e17),
            c64(0.1, -1e-300),
            c64(-0.0, 0.0),
        ] {
            let s = format_complex(z);
            assert_eq!(parse_complex(&s).unwrap(), z, "{s}");
        }
        assert_eq!(format_complex(c64(1.0, -2.0)), "1-2j");
        assert!(parse_complex("1+2").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let m = CMat::from_fn(2, 3, |i, j| c64(i as f64 + 0.1, -(j as f64) / 3.0));
        let text = write_matrix(&m);
        assert!(text.starts_with("2 3\n"));
        assert_eq!(read_matrix(&text).unwrap(), m);
        assert!(read_matrix("2 2\n1+0j 0+0j\n").is_err());
    }
}
