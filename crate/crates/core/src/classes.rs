//! Exact conjugacy-class counts.
//!
//! Small groups are counted by enumeration; `S_n`, `A_n` and `T ≀ S_n` use
//! closed formulas, selected only through a certified [`FamilyTag`].

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FamilyTag, PermGroup};
use crate::partitions::{partition_number, tuple_partition_count};

/// Default cap on the number of elements enumerated.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountMethod {
    Enumeration,
    SymmetricFormula,
    AlternatingFormula,
    WreathSymFormula,
}

#[derive(Clone, Debug)]
pub struct ClassCountResult {
    pub count: BigUint,
    pub method: CountMethod,
    /// Number of elements enumerated (zero for formula paths).
    pub elements_visited: u64,
    /// Class sizes, for the enumeration path.
    pub class_sizes: Vec<u64>,
}

impl ClassCountResult {
    fn formula(count: BigUint, method: CountMethod) -> Self {
        Self {
            count,
            method,
            elements_visited: 0,
            class_sizes: Vec::new(),
        }
    }
}

struct DisjointSets {
    parent: Vec<u32>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Counts classes by enumerating every element and merging each with its
/// conjugates under the generators.
///
/// Elements are indexed by their rank in the stabilizer chain, so no
/// element table is stored; the union-find array is the only allocation
/// proportional to `|G|`.
pub fn class_count_enumerate(group: &PermGroup, limit: u64) -> Result<ClassCountResult> {
    let order = group.order();
    let total = match order.to_u64() {
        Some(t) if t <= limit && t <= u32::MAX as u64 => t,
        _ => return Err(Error::LimitExceeded { order, limit }),
    };
    let chain = group.chain();
    let base = chain.base();
    let conjugators: Vec<(Vec<u32>, Vec<u32>)> = group
        .generators()
        .iter()
        .filter(|s| !s.is_identity())
        .map(|s| {
            // images of base points under s⁻¹, and s itself
            let inverse = s.inverse();
            let pre: Vec<u32> = base.iter().map(|&b| inverse.images()[b]).collect();
            (pre, s.images().to_vec())
        })
        .collect();

    let mut sets = DisjointSets::new(total as usize);
    let mut scratch = vec![0u32; base.len()];
    chain.for_each_element(|rank, g| {
        let images = g.images();
        for (pre, s) in &conjugators {
            // β^{s⁻¹ g s}
            for (slot, &b) in scratch.iter_mut().zip(pre) {
                *slot = s[images[b as usize] as usize];
            }
            let other = chain
                .rank_from_base_images(&mut scratch)
                .expect("conjugate of a group element lies in the group");
            sets.union(rank as u32, other as u32);
        }
    });

    let mut sizes = vec![0u64; total as usize];
    for x in 0..total as u32 {
        let root = sets.find(x);
        sizes[root as usize] += 1;
    }
    let class_sizes: Vec<u64> = sizes.into_iter().filter(|&s| s > 0).collect();
    Ok(ClassCountResult {
        count: BigUint::from(class_sizes.len()),
        method: CountMethod::Enumeration,
        elements_visited: total,
        class_sizes,
    })
}

/// `k(A_n)`: classes of `S_n` inside `A_n`, plus one extra for each class
/// that splits (cycle types with distinct odd parts).
///
/// A cycle type λ is even iff `n − (number of parts)` is even.
pub fn class_count_alternating(n: usize) -> BigUint {
    // by_parity[s][0/1]: partitions of s with an even/odd number of parts
    let mut by_parity = vec![[BigUint::zero(), BigUint::zero()]; n + 1];
    by_parity[0][0] = BigUint::one();
    for part in 1..=n {
        for total in part..=n {
            let (even, odd) = (
                by_parity[total - part][1].clone(),
                by_parity[total - part][0].clone(),
            );
            by_parity[total][0] += even;
            by_parity[total][1] += odd;
        }
    }
    let even_classes = by_parity[n][n % 2].clone();

    let mut distinct_odd = vec![BigUint::zero(); n + 1];
    distinct_odd[0] = BigUint::one();
    for part in (1..=n).step_by(2) {
        for total in (part..=n).rev() {
            let add = distinct_odd[total - part].clone();
            distinct_odd[total] += add;
        }
    }
    let split = if n >= 2 {
        distinct_odd[n].clone()
    } else {
        BigUint::zero()
    };
    even_classes + split
}

/// `k(T ≀ S_n)` for a base group with `k_base` classes.
pub fn class_count_wreath_sym(k_base: &BigUint, n: usize) -> BigUint {
    tuple_partition_count(k_base.clone(), n)
}

/// Counts classes with the default enumeration limit.
pub fn class_count(group: &PermGroup) -> Result<ClassCountResult> {
    class_count_with_limit(group, DEFAULT_ENUMERATION_LIMIT)
}

/// Formula when the tag certifies one, otherwise enumeration under `limit`.
pub fn class_count_with_limit(group: &PermGroup, limit: u64) -> Result<ClassCountResult> {
    match group.tag() {
        FamilyTag::Symmetric(n) => Ok(ClassCountResult::formula(
            partition_number(*n),
            CountMethod::SymmetricFormula,
        )),
        FamilyTag::Alternating(n) => Ok(ClassCountResult::formula(
            class_count_alternating(*n),
            CountMethod::AlternatingFormula,
        )),
        FamilyTag::WreathSym { base, n } => {
            let k_base = class_count_with_limit(base, limit).map_err(|e| match e {
                Error::Uncountable { .. } => Error::Uncountable {
                    order: group.order(),
                },
                other => other,
            })?;
            Ok(ClassCountResult::formula(
                class_count_wreath_sym(&k_base.count, *n),
                CountMethod::WreathSymFormula,
            ))
        }
        _ => class_count_enumerate(group, limit).map_err(|e| match e {
            Error::LimitExceeded { order, .. } => Error::Uncountable { order },
            other => other,
        }),
    }
}
