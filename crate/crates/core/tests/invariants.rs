use std::collections::HashSet;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use proptest::sample::select;

use permclass::blocks::{
    block_action_image, block_action_kernel, minimal_block_systems, BlockSystem,
};
use permclass::classes::{
    class_count_enumerate, class_count_with_limit, DEFAULT_ENUMERATION_LIMIT,
};
use permclass::constructions::{
    affine_line, alternating, catalog, cyclic, dihedral, direct_product, parse_group_spec,
    symmetric, wreath_imprimitive, wreath_product_action,
};
use permclass::partitions::{partition_number, tuple_partition_count};
use permclass::{PermGroup, Permutation};

fn small_catalog() -> &'static [String] {
    static NAMES: OnceLock<Vec<String>> = OnceLock::new();
    NAMES.get_or_init(|| {
        catalog(6)
            .into_iter()
            .filter(|e| e.build().unwrap().order() <= BigUint::from(1500u32))
            .map(|e| e.name())
            .collect()
    })
}

fn perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn untagged(g: &PermGroup) -> PermGroup {
    PermGroup::new(g.degree(), g.generators().to_vec()).unwrap()
}

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn enumerate_count(g: &PermGroup) -> u64 {
    class_count_enumerate(g, DEFAULT_ENUMERATION_LIMIT)
        .unwrap()
        .count
        .to_u64()
        .unwrap()
}

/// Every partition of `0..n` into equal blocks that the generators preserve.
fn brute_force_systems(g: &PermGroup) -> Vec<Vec<usize>> {
    let n = g.degree();
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(
        i: usize,
        used: usize,
        labels: &mut Vec<usize>,
        g: &PermGroup,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = labels.len();
        if i == n {
            let mut sizes = vec![0usize; used];
            for &l in labels.iter() {
                sizes[l] += 1;
            }
            if sizes.iter().any(|&s| s != sizes[0]) || used == 1 || used == n {
                return;
            }
            let invariant = g.generators().iter().all(|s| {
                (0..n).all(|x| {
                    (0..n).all(|y| {
                        (labels[x] == labels[y]) == (labels[s.apply(x)] == labels[s.apply(y)])
                    })
                })
            });
            if invariant {
                out.push(labels.clone());
            }
            return;
        }
        for l in 0..=used {
            labels[i] = l;
            rec(i + 1, used.max(l + 1), labels, g, out);
        }
    }
    rec(0, 0, &mut labels, g, &mut out);
    out
}

fn minimal_by_brute_force(g: &PermGroup) -> Vec<BlockSystem> {
    let systems: Vec<BlockSystem> = brute_force_systems(g)
        .iter()
        .map(|l| BlockSystem::from_assignment(l).unwrap())
        .collect();
    let block0 = |s: &BlockSystem| -> HashSet<usize> {
        (0..s.degree())
            .filter(|&x| s.block_of(x) == s.block_of(0))
            .collect()
    };
    let mut minimal: Vec<BlockSystem> = systems
        .iter()
        .filter(|s| {
            let b = block0(s);
            !systems.iter().any(|t| {
                let c = block0(t);
                c.len() < b.len() && c.is_subset(&b)
            })
        })
        .cloned()
        .collect();
    minimal.sort_by(|a, b| a.assignment().cmp(b.assignment()));
    minimal
}

#[test]
fn minimal_blocks_match_brute_force() {
    for entry in catalog(8) {
        let g = entry.build().unwrap();
        if g.degree() < 2 || !g.is_transitive() {
            continue;
        }
        let mut fast = minimal_block_systems(&g).unwrap();
        fast.sort_by(|a, b| a.assignment().cmp(b.assignment()));
        let slow = minimal_by_brute_force(&g);
        let fast: Vec<&[usize]> = fast.iter().map(|s| s.assignment()).collect();
        let slow: Vec<&[usize]> = slow.iter().map(|s| s.assignment()).collect();
        assert_eq!(fast, slow, "{}", entry.name());
    }
}

#[test]
fn family_orders() {
    for n in 1..=10 {
        assert_eq!(symmetric(n).unwrap().order(), factorial(n));
        assert_eq!(cyclic(n).unwrap().order(), BigUint::from(n));
        if n >= 2 {
            assert_eq!(alternating(n).unwrap().order() * 2u32, factorial(n));
        }
    }
    for m in 2..=12 {
        assert_eq!(dihedral(2 * m).unwrap().order(), BigUint::from(2 * m));
    }
    for p in [2, 3, 5, 7, 11, 13, 97] {
        assert_eq!(affine_line(p).unwrap().order(), BigUint::from(p * (p - 1)));
    }
    let t = dihedral(8).unwrap();
    let s = symmetric(3).unwrap();
    let expected = t.order().pow(3) * s.order();
    assert_eq!(wreath_imprimitive(&t, &s).unwrap().order(), expected);
    assert_eq!(
        wreath_product_action(&symmetric(2).unwrap(), &s)
            .unwrap()
            .order(),
        BigUint::from(48u32)
    );
}

#[test]
fn formulas_agree_with_enumeration() {
    for n in 3..=8 {
        let a = alternating(n).unwrap();
        let formula = class_count_with_limit(&a, DEFAULT_ENUMERATION_LIMIT)
            .unwrap()
            .count;
        assert_eq!(
            BigUint::from(enumerate_count(&untagged(&a))),
            formula,
            "A({n})"
        );
        let s = symmetric(n).unwrap();
        assert_eq!(
            BigUint::from(enumerate_count(&untagged(&s))),
            partition_number(n),
            "S({n})"
        );
    }
    for (base, m) in [
        ("S(2)", 4),
        ("S(3)", 3),
        ("C(3)", 3),
        ("D(8)", 2),
        ("A(4)", 2),
    ] {
        let w = parse_group_spec(&format!("wr({base},S({m}))")).unwrap();
        let formula = class_count_with_limit(&w, DEFAULT_ENUMERATION_LIMIT)
            .unwrap()
            .count;
        assert_eq!(
            BigUint::from(enumerate_count(&untagged(&w))),
            formula,
            "{base} wr S{m}"
        );
    }
}

#[test]
fn tuple_partitions_match_convolution() {
    // number of k-tuples of partitions with total size n, by direct convolution
    for k in 1..=4u32 {
        let mut series = vec![BigUint::from(0u32); 16];
        series[0] = BigUint::from(1u32);
        for _ in 0..k {
            let mut next = vec![BigUint::from(0u32); 16];
            for (i, a) in series.iter().enumerate() {
                for j in 0..16 - i {
                    next[i + j] += a * partition_number(j);
                }
            }
            series = next;
        }
        for (n, value) in series.iter().enumerate() {
            assert_eq!(&tuple_partition_count(k, n), value, "k={k} n={n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_associative(a in perm(7), b in perm(7), c in perm(7)) {
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
    }

    #[test]
    fn inverse_cancels(a in perm(9)) {
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert!(a.inverse().then(&a).is_identity());
    }

    #[test]
    fn conjugation_preserves_cycle_type(a in perm(8), b in perm(8)) {
        let lengths = |p: &Permutation| {
            let mut v: Vec<usize> = p.cycles().iter().map(Vec::len).collect();
            v.sort_unstable();
            v
        };
        prop_assert_eq!(lengths(&a), lengths(&a.conjugate_by(&b)));
        prop_assert_eq!(a.is_even(), a.conjugate_by(&b).is_even());
    }

    #[test]
    fn cycle_text_round_trips(a in perm(10)) {
        let text = a.to_string();
        prop_assert_eq!(Permutation::parse_cycles(&text, 10).unwrap(), a);
    }

    #[test]
    fn orbit_stabilizer(name in select(small_catalog()), point in 0usize..24) {
        let g = parse_group_spec(&name).unwrap();
        let x = point % g.degree();
        let orbit = g.orbit(x).unwrap();
        let stab = g.point_stabilizer(x).unwrap();
        prop_assert_eq!(g.order(), stab.order() * BigUint::from(orbit.len()));
        for s in stab.generators() {
            prop_assert_eq!(s.apply(x), x);
        }
    }

    #[test]
    fn kernel_times_image(name in select(small_catalog())) {
        let g = parse_group_spec(&name).unwrap();
        if g.degree() >= 2 && g.is_transitive() {
            for system in minimal_block_systems(&g).unwrap() {
                let image = block_action_image(&g, &system).unwrap();
                let kernel = block_action_kernel(&g, &system).unwrap();
                prop_assert_eq!(image.order() * kernel.order(), g.order());
                prop_assert!(system.is_invariant_under(&g));
            }
        }
    }

    #[test]
    fn membership_matches_closure(name in select(small_catalog()), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let g = parse_group_spec(&name).unwrap();
        let elements: HashSet<Permutation> = g.elements_by_closure(2000).unwrap().into_iter().collect();
        prop_assert_eq!(BigUint::from(elements.len()), g.order());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut points: Vec<usize> = (0..g.degree()).collect();
        for _ in 0..100 {
            points.shuffle(&mut rng);
            let p = Permutation::from_images(points.clone()).unwrap();
            prop_assert_eq!(g.contains(&p).unwrap(), elements.contains(&p));
        }
        for _ in 0..20 {
            let r = g.random_element(&mut rng);
            prop_assert!(elements.contains(&r));
        }
    }

    #[test]
    fn chain_enumeration_matches_closure(name in select(small_catalog())) {
        let g = parse_group_spec(&name).unwrap();
        let closure: HashSet<Permutation> = g.elements_by_closure(2000).unwrap().into_iter().collect();
        let mut seen = HashSet::new();
        g.chain().for_each_element(|_, e| {
            seen.insert(e.clone());
        });
        prop_assert_eq!(seen, closure);
    }

    #[test]
    fn class_count_is_multiplicative(a in select(small_catalog()), b in select(small_catalog())) {
        let g = parse_group_spec(&a).unwrap();
        let h = parse_group_spec(&b).unwrap();
        if g.degree() + h.degree() <= 10 && g.order() * h.order() <= BigUint::from(200_000u32) {
            let p = direct_product(&g, &h).unwrap();
            let k = |x: &PermGroup| class_count_with_limit(x, DEFAULT_ENUMERATION_LIMIT).unwrap().count;
            prop_assert_eq!(k(&p), k(&g) * k(&h));
        }
    }

    #[test]
    fn class_sizes_divide_order(name in select(small_catalog())) {
        let g = parse_group_spec(&name).unwrap();
        let r = class_count_enumerate(&g, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let order = g.order_u64().unwrap();
        prop_assert_eq!(r.class_sizes.iter().sum::<u64>(), order);
        prop_assert!(r.class_sizes.iter().all(|s| order.is_multiple_of(*s)));
    }
}
