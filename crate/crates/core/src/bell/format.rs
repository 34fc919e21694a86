//! Plain-text inequality files.
//!
//! ```text
//! # optional comments
//! m_A m_B
//! M_00 M_01 ... M_0m_B
//! ...
//! M_m_A0 ...    M_m_Am_B
//! ```

use nalgebra::DMatrix;
use std::fmt::Write;

use super::BellExpression;
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_count(line: usize, token: &str) -> Result<usize> {
    match token.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(Error::parse(
            line,
            format!("expected a positive setting count, found '{token}'"),
        )),
    }
}

pub fn parse_bell_expression(text: &str) -> Result<BellExpression> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(text.lines().count().max(1), "missing 'm_A m_B' header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 {
        return Err(Error::parse(
            header_line,
            format!("header must hold two counts, found {} tokens", tokens.len()),
        ));
    }
    let m_a = parse_count(header_line, tokens[0])?;
    let m_b = parse_count(header_line, tokens[1])?;

    let mut coeffs = DMatrix::zeros(m_a + 1, m_b + 1);
    let mut last_line = header_line;
    for mu in 0..=m_a {
        let (line, row) = lines.next().ok_or_else(|| {
            Error::parse(
                last_line + 1,
                format!("expected {} coefficient rows, found {mu}", m_a + 1),
            )
        })?;
        last_line = line;
        let values: Vec<&str> = row.split_whitespace().collect();
        if values.len() != m_b + 1 {
            return Err(Error::parse(
                line,
                format!("expected {} columns, found {}", m_b + 1, values.len()),
            ));
        }
        for (nu, token) in values.iter().enumerate() {
            let v: f64 = token
                .parse()
                .map_err(|_| Error::parse(line, format!("non-numeric token '{token}'")))?;
            if !v.is_finite() {
                return Err(Error::parse(line, format!("non-finite coefficient '{token}'")));
            }
            coeffs[(mu, nu)] = v;
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::parse(
            line,
            format!("unexpected content after {} coefficient rows", m_a + 1),
        ));
    }
    BellExpression::new(coeffs)
}

/// Writes the expression in the file format; numbers use the shortest
/// decimal that parses back to the same `f64`.
pub fn serialize_bell_expression(expr: &BellExpression) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", expr.m_a(), expr.m_b());
    for row in expr.coeffs().row_iter() {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::builtin_i3322;

    const I3322_FILE: &str = "\
# I3322 in {0,1} form
3 3
 0 -1 -2  0
 0  1  1 -1
-1  1  1  1
 0 -1  1  0
";

    #[test]
    fn zero_matrix() {
        let e = parse_bell_expression("3 3\n0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n").unwrap();
        assert_eq!((e.m_a(), e.m_b()), (3, 3));
        assert!(e.is_zero());
    }

    #[test]
    fn i3322_file_matches_builtin() {
        assert_eq!(parse_bell_expression(I3322_FILE).unwrap(), builtin_i3322());
    }

    #[test]
    fn missing_row_reports_line() {
        let err = parse_bell_expression("2 2\n0 0 0\n0 0 0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse { line: 4, message: "expected 3 coefficient rows, found 2".into() }
        );
    }

    #[test]
    fn column_mismatch_reports_line() {
        let err = parse_bell_expression("# c\n1 1\n0 0\n0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn non_numeric_token() {
        let err = parse_bell_expression("1 1\n0 x\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("'x'"));
    }

    #[test]
    fn bad_headers() {
        for text in ["", "# only\n", "3\n", "0 2\n", "a b\n", "1 2 3\n"] {
            assert!(matches!(parse_bell_expression(text), Err(Error::Parse { .. })), "{text:?}");
        }
    }

    #[test]
    fn trailing_rows_rejected() {
        let err = parse_bell_expression("1 1\n0 0\n0 0\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
    }

    #[test]
    fn serialize_is_shortest() {
        let text = serialize_bell_expression(&builtin_i3322());
        assert_eq!(text, "3 3\n0 -1 -2 0\n0 1 1 -1\n-1 1 1 1\n0 -1 1 0\n");
    }
}
