//! Plain-text file formats.
//!
//! - points: one point per line, whitespace-separated decimal coordinates;
//!   `#` starts a comment; the first point fixes the dimension.
//! - metric: a line with `n`, then one `i j rank` line per pair (`i < j`,
//!   0-based, ranks a permutation of `0..n(n-1)/2`).
//! - order: one 0-based vertex id per line.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use onng::{InsertionOrder, LinePointSet, PointSet, RankedMetric};

use crate::CliError;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(no, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((no + 1, line))
    })
}

/// A parsed points file, keeping the coordinate text for exact parsing.
#[derive(Clone, Debug, PartialEq)]
pub struct PointsFile {
    pub dim: usize,
    pub rows: Vec<Vec<String>>,
}

impl PointsFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut dim = None;
        for (no, line) in data_lines(text) {
            let row: Vec<String> = line.split_whitespace().map(str::to_owned).collect();
            let want = *dim.get_or_insert(row.len());
            if row.len() != want {
                return Err(CliError::Input(format!(
                    "line {no}: expected {want} coordinates, found {}",
                    row.len()
                )));
            }
            for tok in &row {
                parse_decimal(tok).map_err(|e| CliError::Input(format!("line {no}: {e}")))?;
            }
            rows.push(row);
        }
        let dim = dim.ok_or_else(|| CliError::Input("points file contains no points".into()))?;
        Ok(Self { dim, rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_point_set(&self) -> Result<PointSet, CliError> {
        let coords = self
            .rows
            .iter()
            .flatten()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| CliError::Input(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PointSet::from_flat(self.dim, coords)?)
    }

    /// Exact 1-D positions, sorted. `source[i]` is the file index of sorted
    /// vertex `i`.
    pub fn to_line(&self) -> Result<(LinePointSet, Vec<usize>), CliError> {
        if self.dim != 1 {
            return Err(CliError::Input(format!(
                "the line strategy needs 1-dimensional points, got dimension {}",
                self.dim
            )));
        }
        let coords = self
            .rows
            .iter()
            .map(|r| parse_decimal(&r[0]).map_err(CliError::Input))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinePointSet::from_unsorted(coords)?)
    }
}

/// Parses `[+-]digits[.digits][(e|E)[+-]digits]` exactly.
pub fn parse_decimal(tok: &str) -> Result<BigRational, String> {
    let bad = || format!("{tok:?} is not a decimal number");
    let (mantissa, exp) = match tok.find(['e', 'E']) {
        Some(p) => (&tok[..p], tok[p + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (tok, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if exp.unsigned_abs() > 4096 {
        return Err(format!("{tok:?}: exponent out of range"));
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits_pow(&ten, scale as u32))
    } else {
        BigRational::new(digits, num_traits_pow(&ten, scale.unsigned_abs()))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

fn num_traits_pow(base: &BigInt, exp: u32) -> BigInt {
    base.pow(exp)
}

pub fn write_points(ps: &PointSet) -> String {
    let mut out = String::new();
    for p in ps.points() {
        let row: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_line_points(ps: &LinePointSet) -> String {
    let mut out = String::new();
    for x in ps.coords() {
        // generated line sets are integral
        if x.is_integer() {
            writeln!(out, "{}", x.numer()).unwrap();
        } else {
            writeln!(out, "{}", decimal_or_fraction(x)).unwrap();
        }
    }
    out
}

fn decimal_or_fraction(x: &BigRational) -> String {
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut d = x.denom().clone();
    let mut places = 0u32;
    while (&d % &two) == BigInt::from(0) {
        d /= &two;
        places += 1;
    }
    let mut fives = 0u32;
    while (&d % &five) == BigInt::from(0) {
        d /= &five;
        fives += 1;
    }
    assert!(
        d == BigInt::from(1),
        "only terminating decimals are written"
    );
    let places = places.max(fives);
    let scaled = x * BigRational::from_integer(BigInt::from(10).pow(places));
    let digits = scaled.to_integer();
    let neg = digits < BigInt::from(0);
    let s = if neg {
        (-digits).to_string()
    } else {
        digits.to_string()
    };
    let s = format!("{s:0>width$}", width = places as usize + 1);
    let (int, frac) = s.split_at(s.len() - places as usize);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

pub fn parse_metric(text: &str) -> Result<RankedMetric, CliError> {
    let mut lines = data_lines(text);
    let (no, header) = lines
        .next()
        .ok_or_else(|| CliError::Input("metric file is empty".into()))?;
    let n: usize = header.parse().map_err(|_| {
        CliError::Input(format!(
            "line {no}: expected the vertex count, found {header:?}"
        ))
    })?;
    let mut entries = Vec::new();
    for (no, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| {
                CliError::Input(format!("line {no}: {s:?} is not a non-negative integer"))
            })
        };
        if f.len() != 3 {
            return Err(CliError::Input(format!("line {no}: expected `i j rank`")));
        }
        let rank = u32::try_from(parse(f[2])?)
            .map_err(|_| CliError::Input(format!("line {no}: rank too large")))?;
        entries.push((parse(f[0])?, parse(f[1])?, rank));
    }
    Ok(RankedMetric::from_entries(n, &entries)?)
}

pub fn write_metric(m: &RankedMetric) -> String {
    let mut out = format!("{}\n", m.n());
    for (i, j) in onng::metric::lex_pairs(m.n()) {
        writeln!(out, "{i} {j} {}", m.rank(i, j)).unwrap();
    }
    out
}

pub fn parse_order(text: &str, n: usize) -> Result<InsertionOrder, CliError> {
    let ids = data_lines(text)
        .map(|(no, line)| {
            line.parse::<usize>()
                .map_err(|_| CliError::Input(format!("line {no}: {line:?} is not a vertex id")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InsertionOrder::for_size(n, ids)?)
}

pub fn write_order(order: &InsertionOrder) -> String {
    order.as_slice().iter().map(|v| format!("{v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_decimal("0.1").unwrap(), r(1, 10));
        assert_eq!(parse_decimal("-2.50").unwrap(), r(-5, 2));
        assert_eq!(parse_decimal("3").unwrap(), r(3, 1));
        assert_eq!(parse_decimal("+.5").unwrap(), r(1, 2));
        assert_eq!(parse_decimal("1.5e2").unwrap(), r(150, 1));
        assert_eq!(parse_decimal("1E-3").unwrap(), r(1, 1000));
        assert_eq!(parse_decimal("6.103515625e-05").unwrap(), r(1, 16384));
        for bad in ["", ".", "-", "1.2.3", "abc", "1e", "0x10", "inf"] {
            assert!(parse_decimal(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn points_file_rules() {
        let p = PointsFile::parse("# header\n0 1\n\n2.5 3 # trailing\n").unwrap();
        assert_eq!(p.dim, 2);
        assert_eq!(p.len(), 2);
        assert!(PointsFile::parse("0 1\n2\n").is_err());
        assert!(PointsFile::parse("# nothing\n").is_err());
        assert!(PointsFile::parse("0 x\n").is_err());
        assert!(PointsFile::parse("0\n0\n").unwrap().to_point_set().is_err());
    }

    #[test]
    fn line_points_are_sorted_with_sources() {
        let p = PointsFile::parse("4\n0\n3\n1\n").unwrap();
        let (line, src) = p.to_line().unwrap();
        assert_eq!(src, vec![1, 3, 2, 0]);
        assert_eq!(write_line_points(&line), "0\n1\n3\n4\n");
        assert!(PointsFile::parse("0 1\n").unwrap().to_line().is_err());
    }

    #[test]
    fn fractional_line_points_are_written_as_decimals() {
        let x = BigRational::new((-3).into(), 8.into());
        assert_eq!(decimal_or_fraction(&x), "-0.375");
        assert_eq!(parse_decimal(&decimal_or_fraction(&x)).unwrap(), x);
    }

    #[test]
    fn metric_file_rules() {
        let m = parse_metric("3\n0 1 2\n0 2 0\n1 2 1\n").unwrap();
        assert_eq!(m.pair_ranks(), vec![2, 0, 1]);
        assert_eq!(parse_metric(&write_metric(&m)).unwrap(), m);
        assert!(parse_metric("3\n0 1 2\n0 2 0\n").is_err());
        assert!(parse_metric("3\n0 1 2\n0 2 2\n1 2 1\n").is_err());
        assert!(parse_metric("3\n1 0 2\n0 2 0\n1 2 1\n").is_err());
        assert!(parse_metric("x\n").is_err());
        assert!(parse_metric("").is_err());
    }

    #[test]
    fn order_file_rules() {
        let o = parse_order("2\n0\n1\n", 3).unwrap();
        assert_eq!(o.as_slice(), &[2, 0, 1]);
        assert_eq!(parse_order(&write_order(&o), 3).unwrap(), o);
        let err = parse_order("0\n0\n", 3).unwrap_err().to_string();
        assert!(
            err.contains("missing [1, 2]") && err.contains("duplicate [0]"),
            "{err}"
        );
    }
}
