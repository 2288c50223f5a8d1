//! Named group families and product constructions.

mod catalog;
mod spec;

use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::group::{FamilyTag, PermGroup};
use crate::perm::{Permutation, MAX_DEGREE};

pub use catalog::{catalog, CatalogEntry};
pub use spec::{parse_group_spec, GroupSpec};

fn cycle_on(degree: usize, points: impl IntoIterator<Item = usize>) -> Permutation {
    let cycle: Vec<usize> = points.into_iter().collect();
    Permutation::from_cycles(degree, &[&cycle]).expect("valid cycle")
}

fn nontrivial(gens: Vec<Permutation>) -> Vec<Permutation> {
    let mut out: Vec<Permutation> = Vec::new();
    for g in gens {
        if !g.is_identity() && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// `S_n = ⟨(1,2), (1,…,n)⟩`.
pub fn symmetric(n: usize) -> Result<PermGroup> {
    check_atom_degree("S", n)?;
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(cycle_on(n, [0, 1]));
        gens.push(cycle_on(n, 0..n));
    }
    Ok(PermGroup::new(n, nontrivial(gens))?.with_tag(FamilyTag::Symmetric(n)))
}

/// `A_n = ⟨(1,2,3), c⟩` with `c = (1,…,n)` for odd `n`, `(2,…,n)` for even `n`.
pub fn alternating(n: usize) -> Result<PermGroup> {
    check_atom_degree("A", n)?;
    let mut gens = Vec::new();
    if n >= 3 {
        gens.push(cycle_on(n, [0, 1, 2]));
        if n % 2 == 1 {
            gens.push(cycle_on(n, 0..n));
        } else {
            gens.push(cycle_on(n, 1..n));
        }
    }
    Ok(PermGroup::new(n, nontrivial(gens))?.with_tag(FamilyTag::Alternating(n)))
}

/// `C_n = ⟨(1,…,n)⟩`.
pub fn cyclic(n: usize) -> Result<PermGroup> {
    check_atom_degree("C", n)?;
    let gens = if n >= 2 {
        vec![cycle_on(n, 0..n)]
    } else {
        vec![]
    };
    Ok(PermGroup::new(n, gens)?.with_tag(FamilyTag::Cyclic(n)))
}

/// Dihedral group of order `order = 2m` acting on the `m` vertices of a
/// polygon. Order 4 has no faithful action on 2 points, so it is built as
/// the Klein four-group acting regularly on 4 points.
pub fn dihedral(order: usize) -> Result<PermGroup> {
    if order < 4 || !order.is_multiple_of(2) {
        return Err(Error::ParamOutOfRange(format!(
            "D({order}): order must be even and at least 4"
        )));
    }
    let m = order / 2;
    check_atom_degree("D", m)?;
    let gens = if m == 2 {
        vec![
            cycle_on(4, [0, 1]).then(&cycle_on(4, [2, 3])),
            cycle_on(4, [0, 2]).then(&cycle_on(4, [1, 3])),
        ]
    } else {
        let reflection: Vec<usize> = (0..m).map(|x| (m - x) % m).collect();
        vec![
            cycle_on(m, 0..m),
            Permutation::from_images(reflection).expect("reflection"),
        ]
    };
    let degree = gens[0].degree();
    Ok(PermGroup::new(degree, gens)?.with_tag(FamilyTag::Dihedral(order)))
}

fn check_atom_degree(name: &str, n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::ParamOutOfRange(format!(
            "{name}({n}): degree must be in 1..=65536"
        )));
    }
    Ok(())
}

pub fn is_prime(p: usize) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Least primitive root modulo a prime.
pub fn least_primitive_root(p: usize) -> usize {
    if p == 2 {
        return 1;
    }
    let phi = p - 1;
    let factors: Vec<usize> = (2..=phi)
        .filter(|&q| phi.is_multiple_of(q) && is_prime(q))
        .collect();
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, phi / q, p) != 1))
        .expect("primitive root exists")
}

fn mod_pow(mut base: usize, mut exp: usize, modulus: usize) -> usize {
    let mut acc = 1;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// One-dimensional affine group `x ↦ ax + b` over `GF(p)`, `p ≤ 97`.
pub fn affine_line(p: usize) -> Result<PermGroup> {
    if !is_prime(p) || p > 97 {
        return Err(Error::ParamOutOfRange(format!(
            "AGL1({p}): need a prime ≤ 97"
        )));
    }
    let g = least_primitive_root(p);
    let shift = Permutation::from_images((0..p).map(|x| (x + 1) % p).collect())?;
    let scale = Permutation::from_images((0..p).map(|x| x * g % p).collect())?;
    PermGroup::new(p, nontrivial(vec![shift, scale]))
}

const M11_GENERATORS: [&str; 2] = ["(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)"];
const M12_EXTRA_GENERATOR: &str = "(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)";

/// Mathieu group `M11` (degree 11) or `M12` (degree 12); the order is
/// certified against 7920 / 95040 before returning.
pub fn mathieu(which: usize) -> Result<PermGroup> {
    let (degree, gens, expected): (usize, Vec<&str>, u64) = match which {
        11 => (11, M11_GENERATORS.to_vec(), 7920),
        12 => {
            let mut gens = M11_GENERATORS.to_vec();
            gens.push(M12_EXTRA_GENERATOR);
            (12, gens, 95040)
        }
        _ => {
            return Err(Error::ParamOutOfRange(format!(
                "M{which}: only M11 and M12 are available"
            )))
        }
    };
    let gens = gens
        .iter()
        .map(|g| Permutation::parse_cycles(g, degree))
        .collect::<Result<Vec<_>>>()?;
    let group = PermGroup::new(degree, gens)?;
    certify_order(&group, expected)?;
    Ok(group)
}

fn certify_order(group: &PermGroup, expected: u64) -> Result<()> {
    let actual = group.order();
    if actual != BigUint::from(expected) {
        return Err(Error::OrderCertification {
            expected: BigUint::from(expected),
            actual,
        });
    }
    Ok(())
}

/// `G × H` on `deg G + deg H` points, `G` on the first points.
pub fn direct_product(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    let degree = g.degree() + h.degree();
    if degree > MAX_DEGREE {
        return Err(Error::DegreeOverflow { degree });
    }
    let gens = g
        .generators()
        .iter()
        .map(|x| x.embed(0, degree))
        .chain(h.generators().iter().map(|x| x.embed(g.degree(), degree)))
        .collect();
    PermGroup::new(degree, nontrivial(gens))
}

/// Imprimitive wreath product `T ≀ P`: block `j` holds points
/// `j·d, …, j·d + d − 1` where `d = deg T`.
pub fn wreath_imprimitive(base: &PermGroup, top: &PermGroup) -> Result<PermGroup> {
    let d = base.degree();
    let m = top.degree();
    let degree = d
        .checked_mul(m)
        .filter(|&x| x <= MAX_DEGREE)
        .ok_or(Error::DegreeOverflow {
            degree: d.saturating_mul(m),
        })?;
    let mut gens = Vec::new();
    for block in 0..m {
        for t in base.generators() {
            gens.push(t.embed(block * d, degree));
        }
    }
    for p in top.generators() {
        let images = (0..degree).map(|x| p.apply(x / d) * d + x % d).collect();
        gens.push(Permutation::from_images(images)?);
    }
    let group = PermGroup::new(degree, nontrivial(gens))?;
    Ok(match top.tag() {
        FamilyTag::Symmetric(n) => group.with_tag(FamilyTag::WreathSym {
            base: Arc::new(base.clone()),
            n: *n,
        }),
        _ => group,
    })
}

/// The invariant system of base copies of a [`wreath_imprimitive`] product.
pub fn wreath_blocks(base_degree: usize, top_degree: usize) -> crate::blocks::BlockSystem {
    let labels: Vec<usize> = (0..base_degree * top_degree)
        .map(|x| x / base_degree)
        .collect();
    crate::blocks::BlockSystem::from_assignment(&labels).expect("equal blocks")
}

/// Product action of `T ≀ P` on `m^r` tuples, `m = deg T`, `r = deg P`.
/// Tuple `(x_0, …, x_{r−1})` is the point `Σ x_i m^i`.
pub fn wreath_product_action(base: &PermGroup, top: &PermGroup) -> Result<PermGroup> {
    let m = base.degree();
    let r = top.degree();
    if m < 2 {
        return Err(Error::ParamOutOfRange(
            "product action needs a base group of degree at least 2".into(),
        ));
    }
    let degree = (0..r)
        .try_fold(1usize, |acc, _| {
            acc.checked_mul(m).filter(|&x| x <= MAX_DEGREE)
        })
        .ok_or(Error::DegreeOverflow { degree: usize::MAX })?;
    let digits = |x: usize| -> Vec<usize> {
        let mut x = x;
        (0..r)
            .map(|_| {
                let d = x % m;
                x /= m;
                d
            })
            .collect()
    };
    let point = |tuple: &[usize]| tuple.iter().rev().fold(0, |acc, &d| acc * m + d);
    let mut gens = Vec::new();
    for coord in 0..r {
        for t in base.generators() {
            let images = (0..degree)
                .map(|x| {
                    let mut tuple = digits(x);
                    tuple[coord] = t.apply(tuple[coord]);
                    point(&tuple)
                })
                .collect();
            gens.push(Permutation::from_images(images)?);
        }
    }
    for p in top.generators() {
        let images = (0..degree)
            .map(|x| {
                let tuple = digits(x);
                let mut moved = vec![0; r];
                for (i, &d) in tuple.iter().enumerate() {
                    moved[p.apply(i)] = d;
                }
                point(&moved)
            })
            .collect();
        gens.push(Permutation::from_images(images)?);
    }
    PermGroup::new(degree, nontrivial(gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{block_action_image, minimal_block_systems};

    fn order(g: &PermGroup) -> u64 {
        g.order_u64().unwrap()
    }

    #[test]
    fn family_orders() {
        for n in 1..=8 {
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(order(&symmetric(n).unwrap()), fact);
            assert_eq!(order(&alternating(n).unwrap()), (fact / 2).max(1));
            assert_eq!(order(&cyclic(n).unwrap()), n as u64);
        }
        for order_2n in (4..=20).step_by(2) {
            assert_eq!(order(&dihedral(order_2n).unwrap()), order_2n as u64);
        }
        assert!(dihedral(3).is_err());
        assert!(dihedral(2).is_err());
        assert!(symmetric(0).is_err());
    }

    #[test]
    fn affine_lines() {
        for p in [2usize, 3, 5, 7, 11, 13, 97] {
            let g = affine_line(p).unwrap();
            assert_eq!(order(&g), (p * (p - 1)) as u64);
        }
        assert!(affine_line(9).is_err());
        assert!(affine_line(101).is_err());
        assert_eq!(least_primitive_root(7), 3);
        assert_eq!(least_primitive_root(23), 5);
    }

    #[test]
    fn mathieu_groups() {
        let m11 = mathieu(11).unwrap();
        assert_eq!(order(&m11), 7920);
        assert!(m11.is_transitive());
        assert_eq!(order(&m11.point_stabilizer(0).unwrap()), 720);
        assert_eq!(order(&mathieu(12).unwrap()), 95040);
        assert!(mathieu(22).is_err());
    }

    #[test]
    fn direct_products() {
        let s4 = symmetric(4).unwrap();
        let g = direct_product(&s4, &s4).unwrap();
        assert_eq!(g.degree(), 8);
        assert_eq!(order(&g), 576);
        let t = direct_product(&PermGroup::trivial(1), &s4).unwrap();
        assert_eq!(t.degree(), 5);
        assert_eq!(order(&t), 24);
    }

    #[test]
    fn imprimitive_wreath() {
        let s2 = symmetric(2).unwrap();
        let s3 = symmetric(3).unwrap();
        let w = wreath_imprimitive(&s2, &s3).unwrap();
        assert_eq!((w.degree(), order(&w)), (6, 48));
        assert!(matches!(w.tag(), FamilyTag::WreathSym { n: 3, .. }));
        let blocks = wreath_blocks(2, 3);
        assert!(blocks.is_invariant_under(&w));
        let image = block_action_image(&w, &blocks).unwrap();
        assert_eq!((image.degree(), order(&image)), (3, 6));

        let d8 = dihedral(8).unwrap();
        let c2 = cyclic(2).unwrap();
        let w = wreath_imprimitive(&d8, &c2).unwrap();
        assert_eq!((w.degree(), order(&w)), (8, 128));
        assert!(w.is_transitive());
        assert!(matches!(w.tag(), FamilyTag::Untagged));

        let s4 = symmetric(4).unwrap();
        let w = wreath_imprimitive(&s2, &s4).unwrap();
        assert!(minimal_block_systems(&w)
            .unwrap()
            .contains(&wreath_blocks(2, 4)));
    }

    #[test]
    fn product_action_wreath() {
        let s3 = symmetric(3).unwrap();
        let s2 = symmetric(2).unwrap();
        let g = wreath_product_action(&s3, &s2).unwrap();
        assert_eq!((g.degree(), order(&g)), (9, 72));
        let g = wreath_product_action(&s2, &cyclic(2).unwrap()).unwrap();
        assert_eq!((g.degree(), order(&g)), (4, 8));
        let g = wreath_product_action(&symmetric(5).unwrap(), &s2).unwrap();
        assert_eq!((g.degree(), order(&g)), (25, 28800));
        assert!(wreath_product_action(&PermGroup::trivial(1), &s2).is_err());
        assert!(wreath_product_action(&s2, &symmetric(17).unwrap()).is_err());
    }
}
