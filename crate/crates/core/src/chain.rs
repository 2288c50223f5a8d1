//! Deterministic Schreier–Sims.
//!
//! A chain stores, for each base point `β_i`, the strong generators of the
//! pointwise stabilizer `G^(i)` of `β_0, …, β_{i−1}` and a transversal
//! `u_x` with `β_i^{u_x} = x` for every `x` in the `G^(i)`-orbit of `β_i`.
//! Every element factors uniquely as `g = u_{k−1} ⋯ u_1 u_0` (left to
//! right), which gives each element a mixed-radix rank with level 0 as the
//! fastest digit.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::perm::Permutation;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct Level {
    base_point: usize,
    generators: Vec<Permutation>,
    orbit: Vec<usize>,
    /// Position of each point in `orbit`, or `NONE`.
    orbit_pos: Vec<u32>,
    transversal: Vec<Option<Permutation>>,
    inverse_transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, base_point: usize, generators: Vec<Permutation>) -> Self {
        let mut level = Self {
            base_point,
            generators,
            orbit: Vec::new(),
            orbit_pos: Vec::new(),
            transversal: Vec::new(),
            inverse_transversal: Vec::new(),
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        let mut transversal: Vec<Option<Permutation>> = vec![None; degree];
        let mut orbit_pos = vec![NONE; degree];
        transversal[self.base_point] = Some(Permutation::identity(degree));
        orbit_pos[self.base_point] = 0;
        let mut orbit = vec![self.base_point];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for s in &self.generators {
                let y = s.apply(x);
                if transversal[y].is_none() {
                    let u = transversal[x].as_ref().unwrap().then(s);
                    transversal[y] = Some(u);
                    orbit_pos[y] = orbit.len() as u32;
                    orbit.push(y);
                }
            }
        }
        self.inverse_transversal = transversal
            .iter()
            .map(|t| t.as_ref().map(Permutation::inverse))
            .collect();
        self.transversal = transversal;
        self.orbit_pos = orbit_pos;
        self.orbit = orbit;
    }

    pub fn base_point(&self) -> usize {
        self.base_point
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn orbit(&self) -> &[usize] {
        &self.orbit
    }

    /// Transversal element carrying the base point to `x`.
    pub fn transversal(&self, x: usize) -> Option<&Permutation> {
        self.transversal[x].as_ref()
    }
}

/// Base and strong generating set with transversals.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
    order: BigUint,
}

impl StabilizerChain {
    /// Runs Schreier–Sims on `generators`.
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        Self::with_base_prefix(degree, generators, &[])
    }

    /// Like [`StabilizerChain::new`], but the base starts with `prefix`
    /// (kept even where the level orbit is trivial). The strong generators
    /// at level `prefix.len()` then generate the pointwise stabilizer of
    /// the prefix.
    pub fn with_base_prefix(degree: usize, generators: &[Permutation], prefix: &[usize]) -> Self {
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
            if !g.is_identity() && !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().unwrap());
            }
        }
        let mut levels: Vec<Level> = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let level_gens = gens
                    .iter()
                    .filter(|g| base[..i].iter().all(|&p| g.apply(p) == p))
                    .cloned()
                    .collect();
                Level::new(degree, b, level_gens)
            })
            .collect();

        let mut i = levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            match Self::find_failing_schreier_generator(&levels, iu) {
                None => i -= 1,
                Some((residue, j)) => {
                    if j == levels.len() {
                        let point = residue.first_moved().unwrap();
                        levels.push(Level::new(degree, point, Vec::new()));
                    }
                    for level in &mut levels[iu + 1..=j] {
                        level.generators.push(residue.clone());
                        level.rebuild_orbit(degree);
                    }
                    i = j as isize;
                }
            }
        }

        let order = levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        Self {
            degree,
            levels,
            order,
        }
    }

    /// Checks the Schreier generators of level `i`, returning the first one
    /// that does not sift through levels `i+1..`, with the level it fell out at.
    fn find_failing_schreier_generator(levels: &[Level], i: usize) -> Option<(Permutation, usize)> {
        let level = &levels[i];
        for &x in &level.orbit {
            let ux = level.transversal[x].as_ref().unwrap();
            for s in &level.generators {
                let y = s.apply(x);
                let uy_inv = level.inverse_transversal[y].as_ref().unwrap();
                let h = ux.then(s).then(uy_inv);
                if h.is_identity() {
                    continue;
                }
                let (residue, j) = sift_from(levels, h, i + 1);
                if !residue.is_identity() {
                    return Some((residue, j));
                }
            }
        }
        None
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Order as `u64` when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Strong generators of the stabilizer at `depth` (the whole group at 0).
    pub fn stabilizer_generators(&self, depth: usize) -> Vec<Permutation> {
        self.levels
            .get(depth)
            .map(|l| l.generators.clone())
            .unwrap_or_default()
    }

    /// Sifts `g`; returns the residue and the level where sifting stopped.
    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        sift_from(&self.levels, g.clone(), 0)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && {
            let (residue, j) = self.sift(g);
            j == self.levels.len() && residue.is_identity()
        }
    }

    /// Orbit sizes per level; their product is the order.
    pub fn radices(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Element with the given per-level orbit indices.
    pub fn element_from_digits(&self, digits: &[usize]) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for (level, &d) in self.levels.iter().zip(digits).rev() {
            let x = level.orbit[d];
            g = g.then(level.transversal[x].as_ref().unwrap());
        }
        g
    }

    /// Rank of a group element.
    ///
    /// Only base images are tracked, so `g` must already be known to lie in
    /// the group: a non-member agreeing with some element on the base gets
    /// that element's rank. `None` means `g` is certainly not a member.
    pub fn rank_of(&self, g: &[u32], scratch: &mut Vec<u32>) -> Option<u64> {
        scratch.clear();
        scratch.extend(self.levels.iter().map(|l| g[l.base_point]));
        self.rank_from_base_images(scratch)
    }

    /// Rank from the images of the base points (consumed as scratch space).
    pub fn rank_from_base_images(&self, images: &mut [u32]) -> Option<u64> {
        let mut rank = 0u64;
        let mut stride = 1u64;
        for (l, level) in self.levels.iter().enumerate() {
            let x = images[l] as usize;
            let pos = level.orbit_pos[x];
            if pos == NONE {
                return None;
            }
            rank += pos as u64 * stride;
            stride *= level.orbit.len() as u64;
            let inv = level.inverse_transversal[x].as_ref().unwrap();
            for img in &mut images[l + 1..] {
                *img = inv.images()[*img as usize];
            }
        }
        Some(rank)
    }

    /// Visits every element in rank order. Requires the order to fit in `u64`.
    pub fn for_each_element<F: FnMut(u64, &Permutation)>(&self, mut f: F) {
        let radices = self.radices();
        let k = radices.len();
        if k == 0 {
            f(0, &Permutation::identity(self.degree));
            return;
        }
        let total: u64 = radices.iter().map(|&r| r as u64).product();
        // prefix[l] = u_{k-1} ⋯ u_l
        let mut digits = vec![0usize; k];
        let mut prefix: Vec<Permutation> = vec![Permutation::identity(self.degree); k + 1];
        let rebuild = |prefix: &mut Vec<Permutation>, digits: &[usize], from: usize| {
            for l in (0..=from).rev() {
                let level = &self.levels[l];
                let u = level.transversal[level.orbit[digits[l]]].as_ref().unwrap();
                prefix[l] = prefix[l + 1].then(u);
            }
        };
        rebuild(&mut prefix, &digits, k - 1);
        for rank in 0..total {
            f(rank, &prefix[0]);
            // advance odometer, level 0 fastest
            let mut l = 0;
            while l < k {
                digits[l] += 1;
                if digits[l] < radices[l] {
                    break;
                }
                digits[l] = 0;
                l += 1;
            }
            if l == k {
                break;
            }
            rebuild(&mut prefix, &digits, l);
        }
    }
}

fn sift_from(levels: &[Level], mut h: Permutation, start: usize) -> (Permutation, usize) {
    for (l, level) in levels.iter().enumerate().skip(start) {
        let beta = h.apply(level.base_point);
        match &level.inverse_transversal[beta] {
            None => return (h, l),
            Some(inv) => h = h.then(inv),
        }
    }
    (h, levels.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(degree: usize, text: &str) -> Permutation {
        Permutation::parse_cycles(text, degree).unwrap()
    }

    #[test]
    fn symmetric_four() {
        let gens = [perm(4, "(1,2)"), perm(4, "(1,2,3,4)")];
        let chain = StabilizerChain::new(4, &gens);
        assert_eq!(chain.order_u64(), Some(24));
    }

    #[test]
    fn dihedral_eight() {
        let gens = [perm(4, "(1,2,3,4)"), perm(4, "(2,4)")];
        assert_eq!(StabilizerChain::new(4, &gens).order_u64(), Some(8));
    }

    #[test]
    fn identity_only() {
        let chain = StabilizerChain::new(5, &[Permutation::identity(5)]);
        assert_eq!(chain.order_u64(), Some(1));
        assert!(chain.levels().is_empty());
        assert!(chain.contains(&Permutation::identity(5)));
        assert!(!chain.contains(&perm(5, "(1,2)")));
    }

    #[test]
    fn base_prefix_is_respected() {
        let gens = [perm(4, "(1,2)"), perm(4, "(1,2,3,4)")];
        let chain = StabilizerChain::with_base_prefix(4, &gens, &[3]);
        assert_eq!(chain.base()[0], 3);
        let stab = StabilizerChain::new(4, &chain.stabilizer_generators(1));
        assert_eq!(stab.order_u64(), Some(6));
        // trivial prefix levels are kept
        let chain = StabilizerChain::with_base_prefix(4, &[perm(4, "(1,2)")], &[2, 3]);
        assert_eq!(chain.base()[..2], [2, 3]);
        assert_eq!(chain.order_u64(), Some(2));
    }

    #[test]
    fn ranks_are_a_bijection() {
        let gens = [perm(5, "(1,2,3)"), perm(5, "(3,4,5)")];
        let chain = StabilizerChain::new(5, &gens);
        assert_eq!(chain.order_u64(), Some(60));
        let mut seen = [false; 60];
        let mut scratch = Vec::new();
        chain.for_each_element(|rank, g| {
            assert_eq!(chain.rank_of(g.images(), &mut scratch), Some(rank));
            assert!(!seen[rank as usize]);
            seen[rank as usize] = true;
        });
        assert!(seen.iter().all(|&s| s));
    }
}
