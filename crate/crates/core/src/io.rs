//! Text formats: model files and density files.
//!
//! A model file is
//!
//! ```text
//! # rownames: I R C
//! # labels: 00 01 10 11
//! # mu: 1 1 1 1
//! 3 4
//! 1 1 1 1
//! 0 0 1 1
//! 0 1 0 1
//! ```
//!
//! The three `#` headers are optional and may appear on any line; other
//! comment lines and blank lines are ignored. A density file holds one value
//! per line, either a rational (`3`, `-1/2`) or a decimal (`0.25`, `1e-3`).

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactmath::IntMatrix;
use crate::model::{ModelMatrix, StateSpace};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_ints(line_no: usize, text: &str) -> Result<Vec<BigInt>> {
    text.split_whitespace()
        .map(|tok| BigInt::from_str(tok).map_err(|_| parse_error(line_no, format!("not an integer: {tok:?}"))))
        .collect()
}

pub fn parse_model(text: &str) -> Result<ModelMatrix> {
    let mut row_names: Option<(usize, Vec<String>)> = None;
    let mut labels: Option<(usize, Vec<String>)> = None;
    let mut mu: Option<(usize, Vec<BigInt>)> = None;
    let mut dims: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(rest) = comment.strip_prefix("rownames:") {
                row_names = Some((line_no, rest.split_whitespace().map(String::from).collect()));
            } else if let Some(rest) = comment.strip_prefix("labels:") {
                labels = Some((line_no, rest.split_whitespace().map(String::from).collect()));
            } else if let Some(rest) = comment.strip_prefix("mu:") {
                mu = Some((line_no, parse_ints(line_no, rest)?));
            }
            continue;
        }
        match dims {
            None => {
                let d: Vec<&str> = line.split_whitespace().collect();
                let [m, n] = d.as_slice() else {
                    return Err(parse_error(line_no, "expected header `m n`"));
                };
                let m: usize = m
                    .parse()
                    .map_err(|_| parse_error(line_no, "row count is not a number"))?;
                let n: usize = n
                    .parse()
                    .map_err(|_| parse_error(line_no, "column count is not a number"))?;
                if m == 0 || n == 0 {
                    return Err(parse_error(line_no, "dimensions must be positive"));
                }
                dims = Some((m, n));
            }
            Some((m, n)) => {
                if rows.len() == m {
                    return Err(parse_error(line_no, format!("more than {m} matrix rows")));
                }
                let row = parse_ints(line_no, line)?;
                if row.len() != n {
                    return Err(parse_error(
                        line_no,
                        format!("expected {n} entries, found {}", row.len()),
                    ));
                }
                rows.push(row);
            }
        }
    }

    let Some((m, n)) = dims else {
        return Err(parse_error(last_line.max(1), "missing header `m n`"));
    };
    if rows.len() != m {
        return Err(parse_error(
            last_line.max(1),
            format!("expected {m} matrix rows, found {}", rows.len()),
        ));
    }
    let labels = match labels {
        Some((line, l)) => {
            if l.len() != n {
                return Err(parse_error(line, format!("expected {n} labels, found {}", l.len())));
            }
            l
        }
        None => (1..=n).map(|i| format!("x{i}")).collect(),
    };
    let mu = match mu {
        Some((line, v)) => {
            if v.len() != n {
                return Err(parse_error(
                    line,
                    format!("expected {n} measure values, found {}", v.len()),
                ));
            }
            if v.iter().any(|x| x < &BigInt::one()) {
                return Err(parse_error(line, "reference measure must be positive integers"));
            }
            v
        }
        None => vec![BigInt::one(); n],
    };
    let names = match row_names {
        Some((line, names)) => {
            if names.len() != m {
                return Err(parse_error(
                    line,
                    format!("expected {m} row names, found {}", names.len()),
                ));
            }
            Some(names)
        }
        None => None,
    };
    let states = StateSpace::new(labels, mu)?;
    ModelMatrix::new(states, IntMatrix::from_rows(rows, n), names)
}

/// Writes a model in the format read by [`parse_model`], with columns
/// right-aligned.
pub fn format_model(model: &ModelMatrix) -> String {
    let a = model.matrix();
    let width = (0..a.rows())
        .flat_map(|r| a.row(r).iter().map(|v| v.to_string().len()))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    let _ = writeln!(out, "# rownames: {}", model.row_names().join(" "));
    let _ = writeln!(out, "# labels: {}", model.states().labels().join(" "));
    if !model.states().has_unit_measure() {
        let mu: Vec<String> = model.states().mu().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "# mu: {}", mu.join(" "));
    }
    let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    for r in 0..a.rows() {
        let cells: Vec<String> = a.row(r).iter().map(|v| format!("{v:>width$}")).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

/// Values read from a density file.
#[derive(Clone, Debug, PartialEq)]
pub enum DensityValues {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

fn parse_rational(tok: &str) -> Option<BigRational> {
    match tok.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (d != BigInt::from(0)).then(|| BigRational::new(n, d))
        }
        None => BigInt::from_str(tok).ok().map(BigRational::from_integer),
    }
}

/// Parses a density file. The result is exact when every entry is an
/// integer or a fraction, floating otherwise.
pub fn parse_density(text: &str) -> Result<DensityValues> {
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        tokens.push((idx + 1, line));
    }
    let exact: Option<Vec<BigRational>> = tokens.iter().map(|(_, t)| parse_rational(t)).collect();
    if let Some(values) = exact {
        return Ok(DensityValues::Exact(values));
    }
    tokens
        .iter()
        .map(|&(line, t)| match parse_rational(t) {
            Some(r) => Ok(crate::exactmath::rational_to_f64(&r)),
            None => t
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_error(line, format!("not a number: {t:?}"))),
        })
        .collect::<Result<Vec<f64>>>()
        .map(DensityValues::Float)
}

/// `num/den`, always with an explicit denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{four_cycle, markov_chain};

    #[test]
    fn round_trip_builtin_models() {
        for m in [four_cycle(), markov_chain(3).unwrap()] {
            assert_eq!(parse_model(&format_model(&m)).unwrap(), m);
        }
    }

    #[test]
    fn parses_headers_and_measure() {
        let text = "# a model\n# mu: 1 2\n2 2\n# rownames: a b\n1 1\n0 1\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.row_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(m.states().labels(), &["x1".to_string(), "x2".to_string()]);
        assert_eq!(m.states().mu(), &[BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_model("2 3\n1 2 3\n1 x 3\n").unwrap_err();
        assert_eq!(err, parse_error(3, "not an integer: \"x\""));
        let err = parse_model("2 3\n1 2 3\n1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_model("2 3\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_model("# labels: a b\n1 3\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(parse_model("").is_err());
    }

    #[test]
    fn density_files() {
        let d = parse_density("1/2\n1/4\n\n1/4\n").unwrap();
        assert_eq!(
            d,
            DensityValues::Exact(vec![
                BigRational::new(1.into(), 2.into()),
                BigRational::new(1.into(), 4.into()),
                BigRational::new(1.into(), 4.into()),
            ])
        );
        assert_eq!(
            parse_density("0.5\n1/2\n").unwrap(),
            DensityValues::Float(vec![0.5, 0.5])
        );
        assert!(matches!(parse_density("0.5\nabc\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_density("1/0\n").is_err());
    }
}
