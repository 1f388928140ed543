//! Brute-force ground truth for Hurwitz numbers: count tuples of permutations
//! with prescribed cycle types whose product is the identity.
//!
//! Nothing here uses characters. Permutations are image arrays and compose
//! left to right, `(σ·τ)(x) = τ(σ(x))`; the counts do not depend on this
//! convention because the identity is central.

use std::fmt;

use log::warn;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{factorial, Partition};

/// Largest degree the oracle will ever enumerate.
pub const HARD_CAP: usize = 10;
/// Default enumeration cap (`|S_8| = 40320`).
pub const DEFAULT_CAP: usize = 8;

/// A permutation of `{0, …, d−1}` stored inline, `d ≤ HARD_CAP`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Perm {
    len: u8,
    image: [u8; HARD_CAP],
}

impl Perm {
    pub fn identity(d: usize) -> Self {
        assert!(d <= HARD_CAP);
        let mut image = [0u8; HARD_CAP];
        for (i, v) in image.iter_mut().enumerate().take(d) {
            *v = i as u8;
        }
        Perm { len: d as u8, image }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let d = images.len();
        if d > HARD_CAP {
            return Err(Error::DegreeTooLarge { degree: d, cap: HARD_CAP });
        }
        let mut seen = [false; HARD_CAP];
        let mut image = [0u8; HARD_CAP];
        for (i, &v) in images.iter().enumerate() {
            if v >= d || seen[v] {
                return Err(Error::InvalidArgument(format!("not a permutation: {images:?}")));
            }
            seen[v] = true;
            image[i] = v as u8;
        }
        Ok(Perm { len: d as u8, image })
    }

    /// Builds a permutation of `{0..d}` from disjoint cycles.
    pub fn from_cycles(d: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..d).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a >= d || b >= d {
                    return Err(Error::InvalidArgument(format!("cycle entry out of range in {cycle:?}")));
                }
                images[a] = b;
            }
        }
        Self::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.len as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.image[..self.len as usize]
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    /// Left-to-right product: apply `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.len, other.len);
        let mut image = [0u8; HARD_CAP];
        let n = self.len as usize;
        for (dst, &src) in image[..n].iter_mut().zip(&self.image[..n]) {
            *dst = other.image[src as usize];
        }
        Perm { len: self.len, image }
    }

    pub fn inverse(&self) -> Perm {
        let mut image = [0u8; HARD_CAP];
        for i in 0..self.len as usize {
            image[self.image[i] as usize] = i as u8;
        }
        Perm { len: self.len, image }
    }

    pub fn is_identity(&self) -> bool {
        self.images().iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    fn cycle_lengths(&self, out: &mut [u8; HARD_CAP]) -> usize {
        let mut seen = [false; HARD_CAP];
        let mut count = 0;
        for start in 0..self.len as usize {
            if seen[start] {
                continue;
            }
            let mut len = 0u8;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x] as usize;
                len += 1;
            }
            out[count] = len;
            count += 1;
        }
        out[..count].sort_unstable_by(|a, b| b.cmp(a));
        count
    }

    pub fn cycle_type(&self) -> Partition {
        let mut buf = [0u8; HARD_CAP];
        let n = self.cycle_lengths(&mut buf);
        Partition::new(buf[..n].iter().map(|&x| x as usize).collect()).expect("sorted cycle lengths")
    }

    fn has_cycle_type(&self, target: &[u8]) -> bool {
        let mut buf = [0u8; HARD_CAP];
        let n = self.cycle_lengths(&mut buf);
        &buf[..n] == target
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images())
    }
}

fn check_cap(degree: usize, cap: usize) -> Result<()> {
    if degree > cap {
        return Err(Error::DegreeTooLarge { degree, cap });
    }
    Ok(())
}

/// Brute-force enumerator with a degree cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

/// Result of a factorization count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationCount {
    /// Number of ordered solutions of `X_1 ⋯ X_m = id`.
    pub raw_count: u64,
    pub degree: usize,
}

impl FactorizationCount {
    /// The count divided by `|S_d| = d!`.
    pub fn over_factorial(&self) -> BigRational {
        BigRational::new(BigInt::from(self.raw_count), factorial(self.degree))
    }
}

impl Oracle {
    /// Caps above [`DEFAULT_CAP`] are allowed up to [`HARD_CAP`] with a warning.
    pub fn with_cap(cap: usize) -> Result<Self> {
        if cap > HARD_CAP {
            return Err(Error::DegreeTooLarge { degree: cap, cap: HARD_CAP });
        }
        if cap > DEFAULT_CAP {
            warn!("enumeration cap {cap} exceeds {DEFAULT_CAP}; runs may take a long time");
        }
        Ok(Oracle { cap })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Every permutation with cycle type `mu`, each exactly once.
    pub fn class_elements(&self, mu: &Partition) -> Result<std::vec::IntoIter<Perm>> {
        check_cap(mu.weight(), self.cap)?;
        Ok(class_elements_unchecked(mu).into_iter())
    }

    /// All fixed-point-free involutions of `{0..2k}`; there are `(2k−1)!!`.
    pub fn fixed_point_free_involutions(&self, k: usize) -> Result<std::vec::IntoIter<Perm>> {
        check_cap(2 * k, self.cap)?;
        Ok(matchings(k).into_iter())
    }

    /// Counts `(X_1, …, X_m)` with `∏ X_i = id` and `cycle_type(X_i) = profiles[i]`.
    ///
    /// All but the largest class are enumerated; the remaining factor is
    /// forced to be the inverse of the product of the others. The count is
    /// invariant under reordering the profile list, so the classes are
    /// visited smallest first.
    pub fn count_factorizations(&self, profiles: &[Partition]) -> Result<FactorizationCount> {
        let degree = common_weight(profiles)?;
        check_cap(degree, self.cap)?;
        let classes = profiles.iter().map(|mu| (mu.clone(), None)).collect();
        Ok(FactorizationCount { raw_count: count(degree, classes), degree })
    }

    /// [`Self::count_factorizations`] for the profile list
    /// `(κ, μ, (2^k), …, (2^k))` with `bricks` copies of `(2^k)`, using the
    /// matching enumerator for the brick classes.
    pub fn count_brickwork(&self, kappa: &Partition, mu: &Partition, bricks: usize) -> Result<FactorizationCount> {
        let degree = common_weight(&[kappa.clone(), mu.clone()])?;
        if degree % 2 == 1 {
            return Err(Error::OddDegree(degree));
        }
        check_cap(degree, self.cap)?;
        let k = degree / 2;
        let brick = Partition::rectangle(2, k);
        let mut classes = vec![(kappa.clone(), None), (mu.clone(), None)];
        for _ in 0..bricks {
            classes.push((brick.clone(), Some(matchings(k))));
        }
        Ok(FactorizationCount { raw_count: count(degree, classes), degree })
    }
}

fn common_weight(profiles: &[Partition]) -> Result<usize> {
    let Some(first) = profiles.first() else {
        return Err(Error::InvalidArgument("empty profile list".into()));
    };
    let d = first.weight();
    for p in profiles {
        if p.weight() != d {
            return Err(Error::IncompatibleWeights { left: d, right: p.weight() });
        }
    }
    Ok(d)
}

fn class_elements_unchecked(mu: &Partition) -> Vec<Perm> {
    // The smallest unused point always opens the next cycle, so each
    // permutation is produced once: its cycles are listed in order of their
    // minima, and the cycle opened by a point is given one length per
    // distinct remaining length.
    fn go(
        d: usize,
        remaining: &mut Vec<usize>,
        used: &mut [bool; HARD_CAP],
        image: &mut [u8; HARD_CAP],
        out: &mut Vec<Perm>,
    ) {
        let Some(start) = (0..d).find(|&i| !used[i]) else {
            out.push(Perm { len: d as u8, image: *image });
            return;
        };
        let mut distinct = remaining.clone();
        distinct.dedup();
        for len in distinct {
            let pos = remaining.iter().position(|&x| x == len).expect("present");
            remaining.remove(pos);
            used[start] = true;
            let mut cycle = vec![start];
            extend(d, len, &mut cycle, remaining, used, image, out);
            used[start] = false;
            remaining.insert(pos, len);
        }
    }

    fn extend(
        d: usize,
        len: usize,
        cycle: &mut Vec<usize>,
        remaining: &mut Vec<usize>,
        used: &mut [bool; HARD_CAP],
        image: &mut [u8; HARD_CAP],
        out: &mut Vec<Perm>,
    ) {
        if cycle.len() == len {
            for (i, &a) in cycle.iter().enumerate() {
                image[a] = cycle[(i + 1) % len] as u8;
            }
            go(d, remaining, used, image, out);
            return;
        }
        for next in 0..d {
            if used[next] {
                continue;
            }
            used[next] = true;
            cycle.push(next);
            extend(d, len, cycle, remaining, used, image, out);
            cycle.pop();
            used[next] = false;
        }
    }

    let d = mu.weight();
    let mut out = Vec::new();
    let mut remaining = mu.parts().to_vec();
    let mut image = [0u8; HARD_CAP];
    let mut used = [false; HARD_CAP];
    go(d, &mut remaining, &mut used, &mut image, &mut out);
    out
}

fn matchings(k: usize) -> Vec<Perm> {
    fn go(d: usize, used: &mut [bool; HARD_CAP], image: &mut [u8; HARD_CAP], out: &mut Vec<Perm>) {
        let Some(a) = (0..d).find(|&i| !used[i]) else {
            out.push(Perm { len: d as u8, image: *image });
            return;
        };
        used[a] = true;
        for b in a + 1..d {
            if used[b] {
                continue;
            }
            used[b] = true;
            image[a] = b as u8;
            image[b] = a as u8;
            go(d, used, image, out);
            used[b] = false;
        }
        used[a] = false;
    }
    let mut out = Vec::new();
    go(2 * k, &mut [false; HARD_CAP], &mut [0u8; HARD_CAP], &mut out);
    out
}

fn count(degree: usize, classes: Vec<(Partition, Option<Vec<Perm>>)>) -> u64 {
    let mut classes: Vec<(Partition, Option<Vec<Perm>>)> = classes;
    classes.sort_by_key(|(mu, _)| mu.class_size());
    let (target, _) = classes.pop().expect("non-empty profile list");
    let target: Vec<u8> = target.parts().iter().map(|&p| p as u8).collect();
    let lists: Vec<Vec<Perm>> =
        classes.into_iter().map(|(mu, given)| given.unwrap_or_else(|| class_elements_unchecked(&mu))).collect();

    fn walk(acc: Perm, lists: &[Vec<Perm>], target: &[u8]) -> u64 {
        match lists.split_first() {
            None => u64::from(acc.has_cycle_type(target)),
            Some((head, tail)) => head.iter().map(|x| walk(acc.then(x), tail, target)).sum(),
        }
    }

    match lists.split_first() {
        None => u64::from(Perm::identity(degree).has_cycle_type(&target)),
        Some((head, tail)) => head.par_iter().map(|x| walk(*x, tail, &target)).sum(),
    }
}
