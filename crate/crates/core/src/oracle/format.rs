//! Oracle text format:
//!
//! ```text
//! n=2
//! 00 01
//! 01 10
//! 10 11
//! 11 00
//! ```
//!
//! One line per argument in increasing order, argument then value, bits
//! written most significant first.

use std::fmt::Write as _;

use super::{BitWord, OracleTable};
use crate::error::{Error, Result};

pub fn write_oracle(f: &OracleTable) -> String {
    let n = f.width();
    let mut out = String::with_capacity((2 * n + 2) << n);
    writeln!(out, "n={n}").unwrap();
    for x in 0..1u64 << n {
        let arg = BitWord::from_raw(x, n);
        let val = BitWord::from_raw(f.lookup(x), n);
        writeln!(out, "{arg} {val}").unwrap();
    }
    out
}

pub fn parse_oracle(text: &str) -> Result<OracleTable> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty oracle file".into() })?;
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or(Error::Parse { line: 1, message: format!("expected \"n=<int>\", got {header:?}") })?;
    super::check_width(n).map_err(|e| Error::Parse { line: 1, message: e.to_string() })?;

    let mut values = Vec::with_capacity(1 << n);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let err = |message: String| Error::Parse { line: lineno, message };
        let mut parts = line.split_whitespace();
        let (Some(arg), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(format!("expected \"<x> <f(x)>\", got {line:?}")));
        };
        let arg: BitWord = arg.parse().map_err(|e: Error| err(e.to_string()))?;
        let val: BitWord = val.parse().map_err(|e: Error| err(e.to_string()))?;
        if arg.width() != n || val.width() != n {
            return Err(err(format!("words must have width {n}")));
        }
        if arg.index() != values.len() {
            return Err(err(format!("expected argument {}, got {arg}", BitWord::from_raw(values.len() as u64, n))));
        }
        values.push(val.value());
    }
    OracleTable::from_values(n, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedSpec;
    use proptest::prelude::*;

    #[test]
    fn exact_text() {
        let f = OracleTable::from_values(2, vec![1, 2, 3, 0]).unwrap();
        assert_eq!(write_oracle(&f), "n=2\n00 01\n01 10\n10 11\n11 00\n");
    }

    #[test]
    fn rejects_out_of_order_and_short_files() {
        assert!(parse_oracle("n=1\n1 0\n0 1\n").is_err());
        assert!(matches!(parse_oracle("n=2\n00 01\n"), Err(Error::LengthMismatch { .. })));
        assert!(parse_oracle("m=1\n").is_err());
        assert!(parse_oracle("n=1\n0 10\n1 1\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trips(n in 1usize..=6, seed in any::<u64>()) {
            let f = OracleTable::sample(n, &mut SeedSpec::new(seed).rng()).unwrap();
            let text = write_oracle(&f);
            prop_assert_eq!(parse_oracle(&text).unwrap(), f.clone());
            prop_assert_eq!(write_oracle(&parse_oracle(&text).unwrap()), text);
        }
    }
}
