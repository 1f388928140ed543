//! Integer partitions and the combinatorial quantities attached to them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// The same value indexes irreducible representations of `S_d`, conjugacy
/// classes of `S_d` (cycle types) and ramification profiles. The derived
/// `Ord` is lexicographic on the part list; [`enumerate_partitions`] returns
/// partitions of a fixed weight in descending order of it (reverse-lex).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from a list that is already weakly decreasing and
    /// strictly positive.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("parts not weakly decreasing: {parts:?}")));
        }
        Ok(Partition { parts })
    }

    /// Sorts the input descending and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The partition `(part^count)`, e.g. `(2^k)` for the brickwork profile.
    pub fn rectangle(part: usize, count: usize) -> Self {
        if part == 0 {
            return Self::empty();
        }
        Partition { parts: vec![part; count] }
    }

    /// `(1^d)`, the cycle type of the identity in `S_d`.
    pub fn identity_class(d: usize) -> Self {
        Self::rectangle(1, d)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of parts equal to `i`, for `i = 1..=largest part`; index 0 is unused.
    pub fn multiplicities(&self) -> Vec<usize> {
        let max = self.parts.first().copied().unwrap_or(0);
        let mut m = vec![0; max + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    /// Cells `(i, j)` of the Young diagram, zero-based row and column.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let max = self.parts.first().copied().unwrap_or(0);
        let parts = (0..max).map(|j| self.parts.iter().take_while(|&&p| p > j).count()).collect();
        Partition { parts }
    }

    /// Product of all hook lengths `arm + leg + 1`.
    pub fn hook_product(&self) -> BigInt {
        let conj = self.conjugate();
        let mut acc = BigInt::one();
        for (i, j) in self.cells() {
            let hook = (self.parts[i] - j - 1) + (conj.parts[j] - i - 1) + 1;
            acc *= hook;
        }
        acc
    }

    /// Dimension of the irreducible representation of `S_|λ|`, by the hook
    /// length formula.
    pub fn dimension(&self) -> BigInt {
        factorial(self.weight()) / self.hook_product()
    }

    /// `z_μ = ∏ i^{m_i} m_i!`, the order of the centralizer of a permutation
    /// of cycle type μ.
    pub fn z(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (i, &m) in self.multiplicities().iter().enumerate().skip(1) {
            acc *= BigInt::from(i).pow(m as u32) * factorial(m);
        }
        acc
    }

    /// Number of permutations of cycle type μ, `|μ|! / z_μ`.
    pub fn class_size(&self) -> BigInt {
        factorial(self.weight()) / self.z()
    }

    /// `(N)_λ = ∏_{(i,j)∈λ} (N + j − i)`.
    pub fn content_product(&self, n: i64) -> BigInt {
        let mut acc = BigInt::one();
        for (i, j) in self.cells() {
            acc *= n + j as i64 - i as i64;
        }
        acc
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the canonical comma-separated encoding; `"0"` is the empty
    /// partition. Parts must already be weakly decreasing.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<String> for Partition {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Partition> for String {
    fn from(p: Partition) -> String {
        p.to_string()
    }
}

/// Parses a `;`-separated list of partitions, e.g. `"2,1,1;4;2,2"`.
pub fn parse_profile_list(s: &str) -> Result<Vec<Partition>> {
    s.split(';').map(str::parse).collect()
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// All partitions of `d`, each exactly once, in reverse-lexicographic order.
pub fn enumerate_partitions(d: usize) -> Vec<Partition> {
    fn go(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            prefix.push(p);
            go(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}
