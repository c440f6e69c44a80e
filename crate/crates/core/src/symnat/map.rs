use std::fmt;

use serde::Serialize;

use super::SymError;

/// An eventually affine self-map of ℕ: `exceptions[x]` for `x < N`, and
/// `x ↦ a·x + b` from `N` on.
///
/// The offset may be negative as long as every tail value is a natural
/// number; colimit legs need this when a finite head collapses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SymMap {
    exceptions: Vec<u64>,
    slope: u64,
    offset: i64,
}

impl SymMap {
    pub fn new(exceptions: Vec<u64>, slope: u64, offset: i64) -> Result<Self, SymError> {
        let n = exceptions.len() as i128;
        if (slope as i128) * n + (offset as i128) < 0 {
            return Err(SymError::InvalidMap(format!(
                "tail {slope}·x + {offset} is negative at x = {n}"
            )));
        }
        Ok(SymMap {
            exceptions,
            slope,
            offset,
        })
    }

    /// Parses the `(N, a, b)` tail notation together with an explicit head.
    pub fn with_tail(exceptions: Vec<u64>, threshold: u64, slope: u64, offset: i64) -> Result<Self, SymError> {
        if exceptions.len() as u64 != threshold {
            return Err(SymError::InvalidMap(format!(
                "exceptions cover {} points but the tail starts at {threshold}",
                exceptions.len()
            )));
        }
        SymMap::new(exceptions, slope, offset)
    }

    pub fn identity() -> Self {
        SymMap {
            exceptions: Vec::new(),
            slope: 1,
            offset: 0,
        }
    }

    pub fn constant(c: u64) -> Self {
        SymMap {
            exceptions: Vec::new(),
            slope: 0,
            offset: c as i64,
        }
    }

    pub fn affine(slope: u64, offset: u64) -> Result<Self, SymError> {
        SymMap::new(Vec::new(), slope, offset as i64)
    }

    pub fn apply(&self, x: u64) -> u64 {
        match self.exceptions.get(x as usize) {
            Some(&y) => y,
            None => (self.slope as i128 * x as i128 + self.offset as i128) as u64,
        }
    }

    pub fn exceptions(&self) -> &[u64] {
        &self.exceptions
    }

    /// `(N, a, b)`.
    pub fn tail(&self) -> (u64, u64, i64) {
        (self.exceptions.len() as u64, self.slope, self.offset)
    }

    pub fn is_identity(&self) -> bool {
        self.slope == 1 && self.offset == 0 && self.exceptions.iter().enumerate().all(|(x, &y)| x as u64 == y)
    }

    /// Eventually the identity, i.e. tail `x ↦ x`.
    pub fn has_identity_tail(&self) -> bool {
        self.slope == 1 && self.offset == 0
    }

    /// Whether the map is constant on all of ℕ.
    pub fn constant_value(&self) -> Option<u64> {
        if self.slope != 0 {
            return None;
        }
        let c = self.offset as u64;
        self.exceptions.iter().all(|&y| y == c).then_some(c)
    }

    /// Largest value among the exceptions and the first tail value.
    pub fn head_bound(&self) -> u64 {
        let n = self.exceptions.len() as u64;
        self.exceptions
            .iter()
            .copied()
            .chain([self.apply(n)])
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for SymMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, a, b) = self.tail();
        if !self.exceptions.is_empty() {
            let head: Vec<String> = self
                .exceptions
                .iter()
                .enumerate()
                .map(|(x, y)| format!("{x}↦{y}"))
                .collect();
            write!(f, "{{{}}}, ", head.join(", "))?;
        }
        write!(f, "x ≥ {n} ↦ {a}x{b:+}")
    }
}
