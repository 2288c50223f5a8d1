//! Permutation groups given by generators.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use rand::Rng;

use crate::chain::StabilizerChain;
use crate::error::{Error, Result};
use crate::perm::{Permutation, MAX_DEGREE};

/// Certified family label. Set only by the constructors that build the
/// family; never inferred from generators.
#[derive(Clone, Debug, Default)]
pub enum FamilyTag {
    Symmetric(usize),
    Alternating(usize),
    Cyclic(usize),
    /// Dihedral group of the given order.
    Dihedral(usize),
    /// `T ≀ S_n` with the full base `T^n`.
    WreathSym {
        base: Arc<PermGroup>,
        n: usize,
    },
    #[default]
    Untagged,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::Symmetric(n) => write!(f, "Symmetric({n})"),
            FamilyTag::Alternating(n) => write!(f, "Alternating({n})"),
            FamilyTag::Cyclic(n) => write!(f, "Cyclic({n})"),
            FamilyTag::Dihedral(n) => write!(f, "Dihedral({n})"),
            FamilyTag::WreathSym { base, n } => {
                write!(f, "WreathSym(degree {}, {n})", base.degree())
            }
            FamilyTag::Untagged => f.write_str("Untagged"),
        }
    }
}

/// A permutation group with a lazily built stabilizer chain.
///
/// The chain is built at most once behind a [`OnceLock`], so a group can be
/// shared between threads for read-only queries.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    tag: FamilyTag,
    chain: OnceLock<StabilizerChain>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .field("tag", &self.tag)
            .finish()
    }
}

impl PermGroup {
    /// Group generated by `generators`; an empty list gives the trivial group.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow { degree });
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let mut generators = generators;
        if generators.is_empty() {
            generators.push(Permutation::identity(degree));
        }
        Ok(Self {
            degree,
            generators,
            tag: FamilyTag::Untagged,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("valid degree")
    }

    pub(crate) fn with_tag(mut self, tag: FamilyTag) -> Self {
        self.tag = tag;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn tag(&self) -> &FamilyTag {
        &self.tag
    }

    pub fn chain(&self) -> &StabilizerChain {
        self.chain
            .get_or_init(|| StabilizerChain::new(self.degree, &self.generators))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order().clone()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.chain().order_u64()
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        self.check_degree(p)?;
        Ok(self.chain().contains(p))
    }

    fn check_degree(&self, p: &Permutation) -> Result<()> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(())
    }

    fn check_point(&self, point: usize) -> Result<()> {
        if point >= self.degree {
            return Err(Error::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// Orbit of `point` under the generators, sorted.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        self.check_point(point)?;
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        Ok(orbit)
    }

    /// All orbits, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !assigned[x] {
                let orbit = self.orbit(x).expect("in range");
                for &y in &orbit {
                    assigned[y] = true;
                }
                out.push(orbit);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0)
            .map(|o| o.len() == self.degree)
            .unwrap_or(false)
    }

    /// Pointwise stabilizer of `points`, from a chain whose base starts with them.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        for &p in points {
            self.check_point(p)?;
        }
        let mut prefix: Vec<usize> = Vec::with_capacity(points.len());
        for &p in points {
            if !prefix.contains(&p) {
                prefix.push(p);
            }
        }
        let chain = StabilizerChain::with_base_prefix(self.degree, &self.generators, &prefix);
        PermGroup::new(self.degree, chain.stabilizer_generators(prefix.len()))
    }

    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup> {
        self.pointwise_stabilizer(&[point])
    }

    /// True when every generator of `other` lies in `self`.
    pub fn contains_group(&self, other: &PermGroup) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when `other` is a subgroup normalized by the generators of `self`.
    pub fn normalizes(&self, other: &PermGroup) -> Result<bool> {
        for h in other.generators() {
            for g in &self.generators {
                if !other.contains(&h.conjugate_by(g))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Uniformly random element, one random transversal choice per level.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let chain = self.chain();
        let digits: Vec<usize> = chain
            .radices()
            .iter()
            .map(|&r| rng.gen_range(0..r))
            .collect();
        chain.element_from_digits(&digits)
    }

    /// Breadth-first closure of the generators. Independent of the
    /// stabilizer chain; fails once more than `limit` elements are found.
    pub fn elements_by_closure(&self, limit: usize) -> Result<Vec<Permutation>> {
        let identity = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue = VecDeque::new();
        let mut out = Vec::new();
        seen.insert(identity.clone());
        queue.push_back(identity);
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = g.then(s);
                if !seen.contains(&h) {
                    if seen.len() >= limit {
                        return Err(Error::LimitExceeded {
                            order: BigUint::from(seen.len() + 1),
                            limit: limit as u64,
                        });
                    }
                    seen.insert(h.clone());
                    queue.push_back(h);
                }
            }
            out.push(g);
        }
        Ok(out)
    }
}

/// Free-function form of [`PermGroup::orbit`].
pub fn orbit(group: &PermGroup, point: usize) -> Result<Vec<usize>> {
    group.orbit(point)
}

/// Free-function form of [`PermGroup::point_stabilizer`].
pub fn point_stabilizer(group: &PermGroup, point: usize) -> Result<PermGroup> {
    group.point_stabilizer(point)
}

/// Free-function form of [`PermGroup::contains`].
pub fn contains(group: &PermGroup, p: &Permutation) -> Result<bool> {
    group.contains(p)
}
