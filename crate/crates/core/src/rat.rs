//! Exact rationals for degrees, ages and exponents.

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type Rat = Rational64;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Floor as an integer.
pub fn floor(x: Rat) -> i64 {
    x.floor().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: Rat) -> Rat {
    x - x.floor()
}

pub fn to_f64(x: Rat) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub fn is_int(x: Rat) -> bool {
    x.is_integer()
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parse `"p/q"`, `"p"` or a decimal-free integer string.
pub fn parse(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then(|| Rat::new(n, d))
        }
        None => s.parse::<i64>().ok().map(Rat::from_integer),
    }
}

pub fn format(x: Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter storing rationals as `"p/q"` strings.
pub mod as_string {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let raw = RawRat::deserialize(d)?;
        raw.into_rat().ok_or_else(|| D::Error::custom("expected a rational like \"p/q\""))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRat {
        Str(String),
        Int(i64),
    }

    impl RawRat {
        pub(crate) fn into_rat(self) -> Option<Rat> {
            match self {
                RawRat::Str(s) => parse(&s),
                RawRat::Int(i) => Some(Rat::from_integer(i)),
            }
        }
    }
}

/// Serde adapter for vectors of rationals.
pub mod vec_as_string {
    use super::*;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format(*x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let raw = Vec::<as_string::RawRat>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_rat().ok_or_else(|| D::Error::custom("expected a rational like \"p/q\"")))
            .collect()
    }
}
