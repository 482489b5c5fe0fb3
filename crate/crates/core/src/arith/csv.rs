//! `n,value` CSV for tables. Exact values render as `p/q`, integers bare.

use std::io::{self, Write};

use crate::arith::table::ArithFunc;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scalar::Scalar;

pub const HEADER: &str = "n,value";

pub fn write_table<V: Scalar, W: Write>(f: &ArithFunc<V>, mut out: W) -> io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for (n, v) in f.iter() {
        writeln!(out, "{n},{}", v.render())?;
    }
    Ok(())
}

pub fn table_to_string<V: Scalar>(f: &ArithFunc<V>) -> String {
    let mut buf = Vec::new();
    write_table(f, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("table rendering is ASCII")
}

/// Parses an exact table. The header is optional; `n` must run `1, 2, ..., N`
/// without gaps.
pub fn parse_table(text: &str) -> Result<ArithFunc<Rational>> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line == HEADER) {
            continue;
        }
        let err = |msg: String| Error::Spec(format!("line {}: {msg}", lineno + 1));
        let (n, v) = line
            .split_once(',')
            .ok_or_else(|| err(format!("expected `n,value`, got `{line}`")))?;
        let n: usize = n.trim().parse().map_err(|_| err(format!("bad index `{n}`")))?;
        if n != values.len() + 1 {
            return Err(err(format!("expected index {}, got {n}", values.len() + 1)));
        }
        let v: Rational = v.trim().parse().map_err(|e| err(format!("{e}")))?;
        values.push(v);
    }
    ArithFunc::from_values(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::multiplicative::builtins;

    #[test]
    fn renders_rationals() {
        let f = builtins::reciprocal_identity::<Rational>().tabulate(3).unwrap();
        assert_eq!(table_to_string(&f), "n,value\n1,1\n2,1/2\n3,1/3\n");
    }

    #[test]
    fn parse_roundtrip_and_gaps() {
        let f = builtins::mobius::<Rational>().tabulate(12).unwrap();
        assert_eq!(parse_table(&table_to_string(&f)).unwrap(), f);
        assert!(parse_table("1,1\n3,0\n").is_err());
        assert!(parse_table("1,x\n").is_err());
    }
}
