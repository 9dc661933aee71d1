//! Calendar quarters and the observation-index ↔ date mapping.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A calendar quarter, ordered chronologically and formatted as `YYYYQn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quarter {
    year: i32,
    q: u8,
}

impl Quarter {
    /// Panics if `q` is outside 1..=4.
    pub fn new(year: i32, q: u8) -> Self {
        assert!((1..=4).contains(&q), "quarter must be in 1..=4, got {q}");
        Quarter { year, q }
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    /// The quarter `n` steps forward (or backward for negative `n`).
    pub fn add(&self, n: i64) -> Quarter {
        let total = (self.year as i64) * 4 + (self.q as i64 - 1) + n;
        Quarter {
            year: total.div_euclid(4) as i32,
            q: (total.rem_euclid(4) + 1) as u8,
        }
    }

    pub fn next(&self) -> Quarter {
        self.add(1)
    }

    pub fn prev(&self) -> Quarter {
        self.add(-1)
    }
}

impl fmt::Display for Quarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Q{}", self.year, self.q)
    }
}

impl FromStr for Quarter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (year, q) = s
            .split_once(['Q', 'q'])
            .ok_or_else(|| format!("missing Q separator in {s:?}"))?;
        let year: i32 = year
            .parse()
            .map_err(|_| format!("bad year in {s:?}"))?;
        let q: u8 = q.parse().map_err(|_| format!("bad quarter in {s:?}"))?;
        if !(1..=4).contains(&q) {
            return Err(format!("quarter digit must be 1..4 in {s:?}"));
        }
        Ok(Quarter { year, q })
    }
}

impl Serialize for Quarter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Quarter {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Map a 1-based observation index on the level timeline to its quarter:
/// index 1 is `base` itself.
pub fn index_to_quarter(i: usize, base: Quarter) -> Quarter {
    assert!(i >= 1, "observation indices are 1-based");
    base.add(i as i64 - 1)
}
