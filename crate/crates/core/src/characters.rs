//! Irreducible characters of symmetric groups via Murnaghan–Nakayama.

use std::collections::HashMap;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, Partition};

type Key = (Partition, Partition);

static CACHE: LazyLock<RwLock<HashMap<Key, i64>>> = LazyLock::new(Default::default);

/// Drops every memoized character value. Results never depend on cache state.
pub fn clear_character_cache() {
    CACHE.write().clear();
}

pub fn character_cache_len() -> usize {
    CACHE.read().len()
}

fn check_weights(lambda: &Partition, mu: &Partition) -> Result<()> {
    if lambda.weight() != mu.weight() {
        return Err(Error::IncompatibleWeights { left: lambda.weight(), right: mu.weight() });
    }
    Ok(())
}

/// `χ_λ(μ)` as an exact integer.
pub fn character_int(lambda: &Partition, mu: &Partition) -> Result<i64> {
    check_weights(lambda, mu)?;
    Ok(mn(lambda, mu))
}

/// `χ_λ(μ)` as an exact scalar (denominator 1).
pub fn character(lambda: &Partition, mu: &Partition) -> Result<BigRational> {
    character_int(lambda, mu).map(|c| BigRational::from_integer(c.into()))
}

/// `φ_λ(μ) = |C_μ| χ_λ(μ) / dim λ`.
pub fn normalized_character(lambda: &Partition, mu: &Partition) -> Result<BigRational> {
    let chi = character_int(lambda, mu)?;
    Ok(BigRational::new(mu.class_size() * chi, lambda.dimension()))
}

// Murnaghan–Nakayama on beta-sets: removing a border strip of length r is
// moving one bead from b to b - r onto an empty position; the strip height
// is the number of beads strictly between.
fn mn(lambda: &Partition, mu: &Partition) -> i64 {
    let Some((&r, rest)) = mu.parts().split_first() else {
        return i64::from(lambda.is_empty());
    };
    let key = (lambda.clone(), mu.clone());
    if let Some(&v) = CACHE.read().get(&key) {
        return v;
    }

    let len = lambda.length();
    let beta: Vec<usize> = lambda.parts().iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let rest = Partition::new(rest.to_vec()).expect("tail of a partition is a partition");
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        let sub = from_beta(moved);
        let v = mn(&sub, &rest);
        total += if height % 2 == 0 { v } else { -v };
    }

    CACHE.write().insert(key, total);
    total
}

fn from_beta(mut beta: Vec<usize>) -> Partition {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let len = beta.len();
    Partition::from_unsorted(beta.iter().enumerate().map(|(i, &b)| b - (len - 1 - i)).collect())
}

/// Full character table of `S_d`: rows λ and columns μ, both in
/// reverse-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub degree: usize,
    pub rows: Vec<Partition>,
    pub columns: Vec<Partition>,
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn new(degree: usize) -> Self {
        let parts = enumerate_partitions(degree);
        let values = parts.iter().map(|l| parts.iter().map(|m| mn(l, m)).collect()).collect();
        CharacterTable { degree, rows: parts.clone(), columns: parts, values }
    }

    pub fn get(&self, lambda: &Partition, mu: &Partition) -> Option<i64> {
        let i = self.rows.iter().position(|r| r == lambda)?;
        let j = self.columns.iter().position(|c| c == mu)?;
        Some(self.values[i][j])
    }

    pub fn get_exact(&self, lambda: &Partition, mu: &Partition) -> Option<BigRational> {
        self.get(lambda, mu).map(|v| BigRational::from_integer(BigInt::from(v)))
    }
}
