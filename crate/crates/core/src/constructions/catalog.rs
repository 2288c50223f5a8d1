//! Deterministic catalog of constructible groups up to a degree cap.

use super::is_prime;
use super::spec::GroupSpec;
use crate::error::Result;
use crate::group::PermGroup;
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub spec: GroupSpec,
    pub degree: usize,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<PermGroup> {
        self.spec.build()
    }

    pub fn name(&self) -> String {
        self.spec.to_string()
    }
}

fn klein_regular() -> GroupSpec {
    GroupSpec::Gens {
        degree: 4,
        perms: vec![
            Permutation::parse_cycles("(1,2)(3,4)", 4).expect("valid"),
            Permutation::parse_cycles("(1,3)(2,4)", 4).expect("valid"),
        ],
    }
}

fn atoms(max_degree: usize) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for n in 1..=max_degree {
        out.push(GroupSpec::Symmetric(n));
        out.push(GroupSpec::Alternating(n));
        out.push(GroupSpec::Cyclic(n));
    }
    out.push(GroupSpec::Dihedral(4));
    for m in 3..=max_degree {
        out.push(GroupSpec::Dihedral(2 * m));
    }
    for p in (2..=max_degree.min(97)).filter(|&p| is_prime(p)) {
        out.push(GroupSpec::AffineLine(p));
    }
    if max_degree >= 11 {
        out.push(GroupSpec::M11);
    }
    if max_degree >= 12 {
        out.push(GroupSpec::M12);
    }
    if max_degree >= 4 {
        out.push(klein_regular());
    }
    out
}

/// Every atom of degree at most `max_degree`, plus one level of `prod`,
/// `wr` and `wrprod` over atoms of degree at least 2 whose result still
/// fits. Sorted by degree, then by canonical spelling.
pub fn catalog(max_degree: usize) -> Vec<CatalogEntry> {
    let atoms = atoms(max_degree);
    let mut entries: Vec<CatalogEntry> = atoms
        .iter()
        .map(|a| CatalogEntry {
            degree: a.degree().expect("atom degree"),
            spec: a.clone(),
        })
        .collect();
    let operands: Vec<(&GroupSpec, usize)> = atoms
        .iter()
        .map(|a| (a, a.degree().expect("atom degree")))
        .filter(|&(_, d)| d >= 2)
        .collect();
    for (i, &(a, da)) in operands.iter().enumerate() {
        for (j, &(b, db)) in operands.iter().enumerate() {
            let pair = || (Box::new(a.clone()), Box::new(b.clone()));
            if i <= j && da + db <= max_degree {
                let (x, y) = pair();
                entries.push(CatalogEntry {
                    spec: GroupSpec::Product(x, y),
                    degree: da + db,
                });
            }
            if da * db <= max_degree {
                let (x, y) = pair();
                entries.push(CatalogEntry {
                    spec: GroupSpec::Wreath(x, y),
                    degree: da * db,
                });
            }
            if let Some(d) = da.checked_pow(db as u32).filter(|&d| d <= max_degree) {
                let (x, y) = pair();
                entries.push(CatalogEntry {
                    spec: GroupSpec::WreathProductAction(x, y),
                    degree: d,
                });
            }
        }
    }
    entries.sort_by_cached_key(|e| (e.degree, e.spec.to_string()));
    entries
}
