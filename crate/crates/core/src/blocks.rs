//! Block systems, block actions and their kernels.

use crate::chain::StabilizerChain;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// A partition of the points into equal-size blocks.
///
/// Systems returned by [`minimal_block_systems`] are nontrivial
/// (`1 < block_size < degree`); the two trivial systems can be built
/// explicitly with [`BlockSystem::singletons`] and [`BlockSystem::whole`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSystem {
    /// Block index of each point. Blocks are numbered by their smallest point.
    assignment: Vec<usize>,
    block_size: usize,
    block_count: usize,
}

impl BlockSystem {
    /// Builds a system from a point → label map. Labels are renumbered so
    /// that blocks appear in order of their smallest point.
    pub fn from_assignment(labels: &[usize]) -> Result<Self> {
        let (assignment, sizes) = canonical_labels(labels);
        let block_size = sizes[0];
        if sizes.iter().any(|&s| s != block_size) {
            return Err(Error::ParamOutOfRange(
                "blocks of a block system must have equal size".into(),
            ));
        }
        Ok(Self {
            block_count: sizes.len(),
            assignment,
            block_size,
        })
    }

    pub fn from_blocks(degree: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; degree];
        for (i, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= degree {
                    return Err(Error::PointOutOfRange { point: x, degree });
                }
                if labels[x] != usize::MAX {
                    return Err(Error::ParamOutOfRange(format!("point {x} in two blocks")));
                }
                labels[x] = i;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::ParamOutOfRange(
                "blocks do not cover all points".into(),
            ));
        }
        Self::from_assignment(&labels)
    }

    pub fn singletons(degree: usize) -> Self {
        Self::from_assignment(&(0..degree).collect::<Vec<_>>()).expect("valid")
    }

    pub fn whole(degree: usize) -> Self {
        Self::from_assignment(&vec![0; degree]).expect("valid")
    }

    pub fn degree(&self) -> usize {
        self.assignment.len()
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.assignment[point]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn is_trivial(&self) -> bool {
        self.block_size == 1 || self.block_count == 1
    }

    /// Blocks as sorted point lists, in block-index order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        partition_blocks(&self.assignment, self.block_count)
    }

    /// True when every generator maps blocks onto blocks.
    pub fn is_invariant_under(&self, group: &PermGroup) -> bool {
        group.degree() == self.degree() && is_invariant(&self.assignment, self.block_count, group)
    }
}

/// Renumbers labels by first occurrence; returns labels and part sizes.
fn canonical_labels(labels: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut map = std::collections::HashMap::new();
    let mut sizes = Vec::new();
    let assignment = labels
        .iter()
        .map(|l| {
            let next = map.len();
            let id = *map.entry(*l).or_insert(next);
            if id == sizes.len() {
                sizes.push(0);
            }
            sizes[id] += 1;
            id
        })
        .collect();
    (assignment, sizes)
}

fn partition_blocks(assignment: &[usize], count: usize) -> Vec<Vec<usize>> {
    let mut blocks = vec![Vec::new(); count];
    for (x, &b) in assignment.iter().enumerate() {
        blocks[b].push(x);
    }
    blocks
}

fn is_invariant(assignment: &[usize], count: usize, group: &PermGroup) -> bool {
    let blocks = partition_blocks(assignment, count);
    group.generators().iter().all(|g| {
        blocks.iter().all(|block| {
            let target = assignment[g.apply(block[0])];
            block.iter().all(|&x| assignment[g.apply(x)] == target)
        })
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes; returns false if already merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Finest block system in which `0` and `beta` share a block.
fn finest_system_joining(group: &PermGroup, beta: usize) -> BlockSystem {
    let n = group.degree();
    let mut uf = UnionFind::new(n);
    let mut pending = vec![(0usize, beta)];
    uf.union(0, beta);
    while let Some((x, y)) = pending.pop() {
        for g in group.generators() {
            let (gx, gy) = (g.apply(x), g.apply(y));
            if uf.union(gx, gy) {
                pending.push((gx, gy));
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    BlockSystem::from_assignment(&labels).expect("transitive group yields equal blocks")
}

/// All minimal nontrivial block systems of a transitive group, sorted.
///
/// Each minimal system is the finest system joining `0` with some `β`, so
/// seeding with the pairs `{0, β}` finds them all. Transitivity is required.
pub fn minimal_block_systems(group: &PermGroup) -> Result<Vec<BlockSystem>> {
    let n = group.degree();
    if n < 2 || !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    let mut candidates: Vec<BlockSystem> = Vec::new();
    for beta in 1..n {
        let system = finest_system_joining(group, beta);
        if system.block_count() > 1 && !candidates.contains(&system) {
            candidates.push(system);
        }
    }
    let block_of_zero = |s: &BlockSystem| -> Vec<usize> {
        (0..n).filter(|&x| s.block_of(x) == s.block_of(0)).collect()
    };
    let mut minimal: Vec<BlockSystem> = candidates
        .iter()
        .filter(|s| {
            let mine = block_of_zero(s);
            !candidates.iter().any(|t| {
                let theirs = block_of_zero(t);
                theirs.len() < mine.len() && theirs.iter().all(|x| mine.contains(x))
            })
        })
        .cloned()
        .collect();
    minimal.sort();
    Ok(minimal)
}

pub fn is_primitive(group: &PermGroup) -> bool {
    group.degree() >= 2
        && group.is_transitive()
        && minimal_block_systems(group)
            .map(|s| s.is_empty())
            .unwrap_or(false)
}

/// A `G`-invariant partition into parts of arbitrary sizes.
fn check_partition(group: &PermGroup, assignment: &[usize]) -> Result<(Vec<usize>, usize)> {
    if assignment.len() != group.degree() {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: assignment.len(),
        });
    }
    let (labels, sizes) = canonical_labels(assignment);
    if !is_invariant(&labels, sizes.len(), group) {
        return Err(Error::NotInvariant);
    }
    Ok((labels, sizes.len()))
}

/// Action of one permutation on the parts.
fn part_permutation(g: &Permutation, labels: &[usize], count: usize) -> Permutation {
    let mut reps = vec![usize::MAX; count];
    for (x, &b) in labels.iter().enumerate() {
        if reps[b] == usize::MAX {
            reps[b] = x;
        }
    }
    let images = reps.iter().map(|&r| labels[g.apply(r)]).collect();
    Permutation::from_images(images).expect("invariant partition")
}

/// Image of `group` acting on the parts of an invariant partition.
pub fn partition_action_image(group: &PermGroup, assignment: &[usize]) -> Result<PermGroup> {
    let (labels, count) = check_partition(group, assignment)?;
    let gens: Vec<Permutation> = group
        .generators()
        .iter()
        .map(|g| part_permutation(g, &labels, count))
        .filter(|p| !p.is_identity())
        .collect();
    PermGroup::new(count, gens)
}

/// Kernel of the action on the parts of an invariant partition.
///
/// The group is extended to act on points and parts together; a chain
/// whose base starts with all part-points then has the kernel as the
/// stabilizer at depth `count`, with its Schreier generators as strong
/// generators.
pub fn partition_action_kernel(group: &PermGroup, assignment: &[usize]) -> Result<PermGroup> {
    let (labels, count) = check_partition(group, assignment)?;
    let n = group.degree();
    let extended: Vec<Permutation> = group
        .generators()
        .iter()
        .map(|g| {
            let on_parts = part_permutation(g, &labels, count);
            let mut images: Vec<usize> = g.images().iter().map(|&x| x as usize).collect();
            images.extend(on_parts.images().iter().map(|&b| n + b as usize));
            Permutation::from_images(images).expect("valid extension")
        })
        .collect();
    let prefix: Vec<usize> = (n..n + count).collect();
    let chain = StabilizerChain::with_base_prefix(n + count, &extended, &prefix);
    let kernel_gens = chain
        .stabilizer_generators(count)
        .iter()
        .map(|g| {
            let images = g.images()[..n].iter().map(|&x| x as usize).collect();
            Permutation::from_images(images).expect("restriction of kernel element")
        })
        .filter(|g| !g.is_identity())
        .collect();
    PermGroup::new(n, kernel_gens)
}

/// Induced permutation group on the blocks (degree = number of blocks).
pub fn block_action_image(group: &PermGroup, system: &BlockSystem) -> Result<PermGroup> {
    partition_action_image(group, system.assignment())
}

/// Elements of `group` fixing every block setwise.
pub fn block_action_kernel(group: &PermGroup, system: &BlockSystem) -> Result<PermGroup> {
    partition_action_kernel(group, system.assignment())
}

/// Restriction of a group that stabilizes `points` setwise to those points,
/// relabelled `0..points.len()` in the given order.
pub fn restriction_image(group: &PermGroup, points: &[usize]) -> Result<PermGroup> {
    let mut index = vec![usize::MAX; group.degree()];
    for (i, &x) in points.iter().enumerate() {
        index[x] = i;
    }
    let mut gens = Vec::new();
    for g in group.generators() {
        let images: Option<Vec<usize>> = points
            .iter()
            .map(|&x| {
                let y = index[g.apply(x)];
                (y != usize::MAX).then_some(y)
            })
            .collect();
        let images = images.ok_or(Error::NotInvariant)?;
        let p = Permutation::from_images(images)?;
        if !p.is_identity() {
            gens.push(p);
        }
    }
    PermGroup::new(points.len().max(1), gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(degree: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(
            degree,
            gens.iter()
                .map(|g| Permutation::parse_cycles(g, degree).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn symmetric_five_is_primitive() {
        let s5 = group(5, &["(1,2)", "(1,2,3,4,5)"]);
        assert!(minimal_block_systems(&s5).unwrap().is_empty());
        assert!(is_primitive(&s5));
    }

    #[test]
    fn dihedral_eight_has_one_system() {
        let d8 = group(4, &["(1,2,3,4)", "(2,4)"]);
        let systems = minimal_block_systems(&d8).unwrap();
        assert_eq!(systems.len(), 1);
        assert_eq!(systems[0].blocks(), vec![vec![0, 2], vec![1, 3]]);
        let image = block_action_image(&d8, &systems[0]).unwrap();
        assert_eq!(image.degree(), 2);
        assert_eq!(image.order_u64(), Some(2));
        let kernel = block_action_kernel(&d8, &systems[0]).unwrap();
        assert_eq!(kernel.order_u64(), Some(4));
    }

    #[test]
    fn order_eight_group_kernel_is_base() {
        // ⟨(0 1), (2 3), (0 2)(1 3)⟩ with blocks {0,1}, {2,3}
        let g = group(4, &["(1,2)", "(3,4)", "(1,3)(2,4)"]);
        let system = BlockSystem::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(system.is_invariant_under(&g));
        let kernel = block_action_kernel(&g, &system).unwrap();
        assert_eq!(kernel.order_u64(), Some(4));
        let base = group(4, &["(1,2)", "(3,4)"]);
        assert!(kernel.contains_group(&base).unwrap());
        assert!(base.contains_group(&kernel).unwrap());
    }

    #[test]
    fn whole_block_gives_trivial_image() {
        let s5 = group(5, &["(1,2)", "(1,2,3,4,5)"]);
        let image = block_action_image(&s5, &BlockSystem::whole(5)).unwrap();
        assert_eq!(image.degree(), 1);
        assert_eq!(image.order_u64(), Some(1));
        let kernel = block_action_kernel(&s5, &BlockSystem::whole(5)).unwrap();
        assert_eq!(kernel.order_u64(), Some(120));
    }

    #[test]
    fn non_invariant_partition_is_rejected() {
        let s4 = group(4, &["(1,2)", "(1,2,3,4)"]);
        let system = BlockSystem::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(matches!(
            block_action_image(&s4, &system),
            Err(Error::NotInvariant)
        ));
        assert!(matches!(
            block_action_kernel(&s4, &system),
            Err(Error::NotInvariant)
        ));
    }

    #[test]
    fn intransitive_input_is_rejected() {
        let g = group(4, &["(1,2)"]);
        assert!(matches!(
            minimal_block_systems(&g),
            Err(Error::Intransitive)
        ));
    }

    #[test]
    fn unequal_blocks_are_rejected() {
        assert!(BlockSystem::from_assignment(&[0, 0, 1]).is_err());
    }
}
