use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A spatial mode carrying one polarization photon, e.g. `a1` or `d3`.
///
/// Labels order by alphabetic prefix first and numeric index second, so
/// `a2 < a10 < b1`. That order fixes bit positions inside a [`PureState`].
///
/// [`PureState`]: super::PureState
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ModeLabel {
    prefix: String,
    index: u32,
}

impl ModeLabel {
    pub fn new(prefix: &str, index: u32) -> Result<Self, Error> {
        if prefix.is_empty() || !prefix.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(Error::InvalidLabel(format!("{prefix}{index}")));
        }
        Ok(Self { prefix: prefix.to_owned(), index })
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn index(&self) -> u32 {
        self.index
    }
}

/// `m` labels `prefix1 .. prefix{m}`.
pub fn mode_range(prefix: &str, first: u32, count: usize) -> Vec<ModeLabel> {
    (0..count as u32)
        .map(|i| ModeLabel::new(prefix, first + i).expect("alphabetic prefix"))
        .collect()
}

impl Ord for ModeLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prefix
            .cmp(&other.prefix)
            .then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for ModeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.prefix, self.index)
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let split = s
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| Error::InvalidLabel(s.to_owned()))?;
        let (prefix, digits) = s.split_at(split);
        let index = digits
            .parse::<u32>()
            .map_err(|_| Error::InvalidLabel(s.to_owned()))?;
        Self::new(prefix, index).map_err(|_| Error::InvalidLabel(s.to_owned()))
    }
}

impl TryFrom<String> for ModeLabel {
    type Error = Error;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<ModeLabel> for String {
    fn from(value: ModeLabel) -> Self {
        value.to_string()
    }
}

/// Parses a list of labels; panics on malformed input. Test and example helper.
pub fn modes(labels: &[&str]) -> Vec<ModeLabel> {
    labels
        .iter()
        .map(|s| s.parse().unwrap_or_else(|e| panic!("{e}")))
        .collect()
}
