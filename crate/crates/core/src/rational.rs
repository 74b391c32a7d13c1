//! Text form of exact rationals: `"p/q"` or an integer string.

use num_traits::{One, Zero};
use serde::{de, Deserialize, Deserializer, Serializer};

use crate::{Error, Rational, Result};

pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = |msg: &str| Error::parse("", format!("{msg}: {text:?}"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad("bad numerator"))?;
            let q: i64 = q.trim().parse().map_err(|_| bad("bad denominator"))?;
            if q == 0 {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(p, q))
        }
        None => text.parse::<i64>().map(Rational::from_integer).map_err(|_| bad("not a rational")),
    }
}

/// Parses with the JSON path of the field attached to any error.
pub fn parse_at(text: &str, path: &str) -> Result<Rational> {
    parse(text).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(path, message),
        other => other,
    })
}

pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Bits carried by `rate` over `n` uses, when integral.
pub fn bits_at(rate: &Rational, n: u32) -> Option<usize> {
    let total = *rate * Rational::from_integer(n as i64);
    if total.is_integer() && total >= Rational::zero() {
        Some(total.to_integer() as usize)
    } else {
        None
    }
}

/// Serde adapter: rationals as strings, accepting integers on input.
pub mod text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(t) => parse(&t).map_err(de::Error::custom),
            Repr::Int(i) => Ok(Rational::from_integer(i)),
        }
    }
}

/// Serde adapter for vectors of rationals.
pub mod text_vec {
    use serde::ser::SerializeSeq;

    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter().map(|t| parse(t).map_err(de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse("3/2").unwrap(), Rational::new(3, 2));
        assert_eq!(parse("4").unwrap(), Rational::from_integer(4));
        assert_eq!(parse(" -1/3 ").unwrap(), Rational::new(-1, 3));
        assert_eq!(parse("2/4").unwrap(), Rational::new(1, 2));
    }

    #[test]
    fn rejects_zero_denominator_with_path() {
        let err = parse_at("3/0", "edges[0].capacity").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("edges[0].capacity"), "{msg}");
        assert!(msg.contains("zero denominator"), "{msg}");
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format(&Rational::new(6, 4)), "3/2");
        assert_eq!(format(&Rational::from_integer(-2)), "-2");
    }

    #[test]
    fn bit_counts() {
        assert_eq!(bits_at(&Rational::new(3, 2), 2), Some(3));
        assert_eq!(bits_at(&Rational::new(3, 2), 1), None);
        assert_eq!(bits_at(&Rational::zero(), 5), Some(0));
    }
}
