//! Coalitions as bitmasks over a small ground set.
//!
//! Player `i` (1-based) is stored in bit `i - 1`. The integer value of a mask
//! is therefore exactly the binary code used to rank subsets in the binary
//! order, so sorting masks numerically sorts them by that order.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of players.
pub const MAX_PLAYERS: usize = 24;

/// A subset of the ground set `{1, ..., n}` encoded as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    /// Builds a subset from 1-based player labels.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        let mut bits = 0u32;
        for i in elements {
            assert!((1..=MAX_PLAYERS).contains(&i), "player {i} out of range");
            bits |= 1 << (i - 1);
        }
        Subset(bits)
    }

    pub fn singleton(i: usize) -> Self {
        Subset::from_elements([i])
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_PLAYERS).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub const fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_proper_subset_of(self, other: Subset) -> bool {
        self.is_subset_of(other) && self.0 != other.0
    }

    pub const fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub const fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub const fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub const fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> Subset {
        self.union(Subset::singleton(i))
    }

    pub fn without(self, i: usize) -> Subset {
        self.difference(Subset::singleton(i))
    }

    /// Players of the subset in increasing label order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32usize).filter(move |b| bits & (1 << b) != 0).map(|b| b + 1)
    }

    /// Every subset of `self`, including the empty set and `self`, in
    /// increasing numeric order.
    pub fn subsets(self) -> Submasks {
        Submasks {
            set: self.0,
            next: Some(0),
        }
    }

    /// Every superset of `self` inside `universe`, in increasing numeric order.
    pub fn supersets_within(self, universe: Subset) -> impl Iterator<Item = Subset> {
        let base = self;
        universe.difference(self).subsets().map(move |extra| base.union(extra))
    }

    /// Parses a comma-separated list of strictly increasing 1-based labels,
    /// e.g. `"1,3"`. The empty string is the empty set.
    pub fn parse_key(key: &str, n: usize) -> Result<Subset> {
        let trimmed = key.trim();
        if trimmed.is_empty() {
            return Ok(Subset::EMPTY);
        }
        let mut bits = 0u32;
        let mut last = 0usize;
        for piece in trimmed.split(',') {
            let piece = piece.trim();
            let i: usize = piece
                .parse()
                .map_err(|_| Error::input(format!("bad player label {piece:?} in key {key:?}")))?;
            if i < 1 || i > n {
                return Err(Error::input(format!("player {i} outside 1..={n} in key {key:?}")));
            }
            if i <= last {
                return Err(Error::input(format!(
                    "key {key:?} must list players in strictly increasing order"
                )));
            }
            last = i;
            bits |= 1 << (i - 1);
        }
        Ok(Subset(bits))
    }

    /// Comma-separated label list, the inverse of [`Subset::parse_key`].
    pub fn key(self) -> String {
        self.elements().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{{{}}}", self.key())
        }
    }
}

/// Iterator over all submasks of a mask, smallest first.
pub struct Submasks {
    set: u32,
    next: Option<u32>,
}

impl Iterator for Submasks {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        // carry-rippler step; wraps back to 0 after the full set
        let following = cur.wrapping_sub(self.set) & self.set;
        self.next = if following == 0 { None } else { Some(following) };
        Some(Subset(cur))
    }
}

/// The ground set `N = {1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::domain(format!(
                "number of players must be in 1..={MAX_PLAYERS}, got {n}"
            )));
        }
        Ok(GroundSet { n })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn full(self) -> Subset {
        Subset((((1u64) << self.n) - 1) as u32)
    }

    /// Number of subsets, `2^n`.
    pub fn size(self) -> usize {
        1 << self.n
    }

    pub fn contains(self, s: Subset) -> bool {
        s.is_subset_of(self.full())
    }

    /// All `2^n` subsets in numeric (binary) order.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        (0..self.size() as u32).map(Subset)
    }

    pub fn nonempty_subsets(self) -> impl Iterator<Item = Subset> {
        (1..self.size() as u32).map(Subset)
    }

    /// `P^k_*(N)`: nonempty subsets of at most `k` players, in binary order.
    pub fn bounded_subsets(self, k: usize) -> impl Iterator<Item = Subset> {
        self.nonempty_subsets().filter(move |s| s.len() <= k)
    }

    pub fn players(self) -> impl Iterator<Item = usize> {
        1..=self.n
    }
}

/// `N(k) = C(n,1) + ... + C(n,k)`, the number of nonempty subsets of at most
/// `k` players.
pub fn bounded_count(n: usize, k: usize) -> usize {
    (1..=k.min(n)).map(|j| binomial(n as u64, j as u64) as usize).sum()
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc = 1u64;
    for j in 0..r {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}
