use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest party count for which partitions are enumerated exactly.
pub const MAX_ENUMERATED_PARTIES: usize = 12;

/// A separability structure: the multiset of group sizes `k_j` with
/// `sum k_j = n`, stored non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionSpec {
    group_sizes: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(mut group_sizes: Vec<usize>) -> Result<Self> {
        if group_sizes.is_empty() {
            return Err(Error::InvalidPartition("no groups".into()));
        }
        if group_sizes.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "group sizes must be positive: {group_sizes:?}"
            )));
        }
        group_sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { group_sizes })
    }

    /// `{n}`: everything in one entangled group.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `{1, ..., 1}`: fully separable.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn n(&self) -> usize {
        self.group_sizes.iter().sum()
    }

    pub fn n_groups(&self) -> usize {
        self.group_sizes.len()
    }

    pub fn max_group(&self) -> usize {
        self.group_sizes[0]
    }

    pub fn is_full(&self) -> bool {
        self.group_sizes.len() == 1
    }

    pub fn is_fully_separable(&self) -> bool {
        self.group_sizes.iter().all(|&k| k == 1)
    }

    /// Contiguous party ranges, in group order.
    pub fn party_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.group_sizes
            .iter()
            .map(|&k| {
                let r = start..start + k;
                start += k;
                r
            })
            .collect()
    }

    /// Whether `self` can be obtained by splitting groups of `coarser`.
    pub fn refines(&self, coarser: &PartitionSpec) -> bool {
        if self.n() != coarser.n() {
            return false;
        }
        // every coarse group must be a sum of distinct fine groups
        fn assign(fine: &[usize], used: &mut [bool], targets: &[usize]) -> bool {
            let Some((&target, rest)) = targets.split_first() else {
                return used.iter().all(|&u| u);
            };
            fill(fine, used, target, 0, rest)
        }
        fn fill(fine: &[usize], used: &mut [bool], remaining: usize, from: usize, rest: &[usize]) -> bool {
            if remaining == 0 {
                return assign(fine, used, rest);
            }
            for i in from..fine.len() {
                if !used[i] && fine[i] <= remaining {
                    used[i] = true;
                    if fill(fine, used, remaining - fine[i], i + 1, rest) {
                        return true;
                    }
                    used[i] = false;
                }
            }
            false
        }
        let mut used = vec![false; self.group_sizes.len()];
        assign(&self.group_sizes, &mut used, &coarser.group_sizes)
    }

    /// Column label, e.g. `1|3`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PartitionSpec {
    /// Ascending sizes joined by `|`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.group_sizes.iter().rev().map(|k| k.to_string()).collect();
        f.write_str(&parts.join("|"))
    }
}

impl FromStr for PartitionSpec {
    type Err = Error;

    /// Comma-separated group sizes, e.g. `1,3`.
    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("cannot parse {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sizes)
    }
}

impl Serialize for PartitionSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.group_sizes.serialize(serializer)
    }
}

pub(crate) fn check_cap(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidPartition("n must be positive".into()));
    }
    if n > MAX_ENUMERATED_PARTIES {
        return Err(Error::TooManyParties {
            n,
            cap: MAX_ENUMERATED_PARTIES,
        });
    }
    Ok(())
}

/// All integer partitions of `n` in reverse lexicographic order, from `{n}`
/// down to `{1, ..., 1}`.
pub fn integer_partitions(n: usize) -> Result<Vec<PartitionSpec>> {
    check_cap(n)?;
    let mut out = Vec::new();
    let mut current = vec![n];
    loop {
        out.push(PartitionSpec {
            group_sizes: current.clone(),
        });
        let Some(pos) = current.iter().rposition(|&k| k > 1) else {
            break;
        };
        let k = current[pos] - 1;
        let mut remainder: usize = current.drain(pos..).sum();
        while remainder > 0 {
            let take = k.min(remainder);
            current.push(take);
            remainder -= take;
        }
    }
    Ok(out)
}

/// Non-trivial partitions: everything except `{n}` and `{1, ..., 1}`.
pub fn intermediate_partitions(n: usize) -> Result<Vec<PartitionSpec>> {
    Ok(integer_partitions(n)?
        .into_iter()
        .filter(|p| !p.is_full() && !p.is_fully_separable())
        .collect())
}
