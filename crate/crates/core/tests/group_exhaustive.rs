//! Brute-force oracles for the structural claims the fast paths rely on.
//! Everything here enumerates, so it stays at small `n` on purpose.

use std::collections::BTreeSet;

use jacsplit::group::closure;
use jacsplit::{Group, GroupElement, SubgroupHandle};

/// Conjugacy classes recomputed with no cleverness: the orbit of each
/// element under conjugation by every group element.
#[test]
fn conjugacy_classes_match_all_pairs_oracle() {
    for n in 1..=2u32 {
        let g = Group::new(n).unwrap();
        let all: Vec<GroupElement> = g.elements().collect();
        let mut oracle: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
        for &x in &all {
            let mut class: BTreeSet<GroupElement> = BTreeSet::new();
            for &h in &all {
                class.insert(x.conjugated_by(h));
            }
            oracle.insert(class.into_iter().collect());
        }
        let classes = g.conjugacy_classes();
        assert_eq!(classes.len(), oracle.len(), "n={n}");
        let mut total = 0u64;
        for c in &classes {
            let member = oracle
                .iter()
                .find(|cl| cl[0] == c.representative)
                .expect("representative is least, so it leads its oracle class");
            assert_eq!(member.len() as u64, c.size);
            assert!(g.order().is_multiple_of(c.size), "class size must divide |G|");
            total += c.size;
        }
        assert_eq!(total, g.order());
    }
}

#[test]
fn b_is_self_normalizing_and_self_centralizing() {
    for n in 1..=3u32 {
        let g = Group::new(n).unwrap();
        let b = g.gen_b();
        let normalizer: Vec<GroupElement> = g
            .elements()
            .filter(|&x| {
                let c = b.conjugated_by(x);
                c == b || c == b * b
            })
            .collect();
        let centralizer: Vec<GroupElement> =
            g.elements().filter(|&x| x * b == b * x).collect();
        let b_elems = g.subgroup_b().elements(&g);
        assert_eq!(normalizer, b_elems, "n={n}: N_G(B) != B");
        assert_eq!(centralizer, b_elems, "n={n}: C_G(B) != B");
    }
}

#[test]
fn order_three_elements_are_exactly_the_twisted_ones() {
    for n in 1..=3u32 {
        let g = Group::new(n).unwrap();
        let order3: Vec<GroupElement> = g.elements().filter(|x| x.order() == 3).collect();
        assert_eq!(order3.len() as u64, 2 * g.translation_count());
        assert!(order3.iter().all(|x| x.twist() != 0));
        // and they pair off into inverse pairs (x, x^2)
        for &x in &order3 {
            assert_eq!(x.inverse(), x * x);
        }
    }
}

#[test]
fn sylow_two_subgroup_is_unique() {
    for n in 1..=2u32 {
        let g = Group::new(n).unwrap();
        let subgroups = g.all_subgroups();
        let sylow: Vec<_> = subgroups
            .iter()
            .filter(|s| s.len() as u64 == g.translation_count())
            .collect();
        assert_eq!(sylow.len(), 1, "n={n}: the 2-Sylow subgroup must be unique");
        assert_eq!(sylow[0], &g.subgroup_n().elements(&g));
    }
}

#[test]
fn index_four_overgroups_of_b_count_m() {
    for n in 1..=2u32 {
        let g = Group::new(n).unwrap();
        let b_elems = g.subgroup_b().elements(&g);
        let target = (g.order() / 4) as usize;
        let found: Vec<_> = g
            .all_subgroups()
            .into_iter()
            .filter(|s| s.len() == target && b_elems.iter().all(|x| s.contains(x)))
            .collect();
        assert_eq!(found.len() as u64, g.m(), "n={n}");
    }
}

#[test]
fn m_handles_agree_with_generated_subgroups() {
    let g = Group::new(2).unwrap();
    for e in jacsplit::lattice::enumerate_lattice(&g) {
        let mut gens: Vec<GroupElement> =
            e.u.basis().iter().map(|&v| g.element(v, 0)).collect();
        gens.push(g.gen_b());
        let generated = closure(&g, &gens);
        assert_eq!(generated, e.m_sub.elements(&g), "entry {}", e.index);
        // and M ∩ N recovers U
        let translations: Vec<u32> = generated
            .iter()
            .filter(|x| x.twist() == 0)
            .map(|x| x.bits())
            .collect();
        assert_eq!(translations, e.u.elements_sorted());
    }
}

#[test]
fn double_cosets_partition_the_group() {
    for n in 1..=3u32 {
        let g = Group::new(n).unwrap();
        let b = g.subgroup_b();
        let cosets = g.double_cosets(&b, &b);
        let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
        for c in &cosets {
            for &x in &c.elements {
                assert!(seen.insert(x), "n={n}: double cosets overlap at {x}");
            }
        }
        assert_eq!(seen.len() as u64, g.order());
    }
}

#[test]
fn subgroup_handles_report_consistent_indices() {
    let g = Group::new(2).unwrap();
    let entries = jacsplit::lattice::enumerate_lattice(&g);
    let handles: Vec<(SubgroupHandle, u64)> = vec![
        (SubgroupHandle::Trivial, g.order()),
        (SubgroupHandle::FullGroup, 1),
        (g.subgroup_n(), 3),
        (g.subgroup_b(), g.translation_count()),
        (entries[0].m_sub.clone(), 4),
        (SubgroupHandle::Nsub(entries[0].l_canonical.clone()), 6),
    ];
    for (h, index) in handles {
        assert_eq!(h.index(&g), index);
        assert_eq!(h.order(&g) * index, g.order());
        assert_eq!(g.right_coset_reps(&h).len() as u64, index);
        assert_eq!(g.left_coset_reps(&h).len() as u64, index);
    }
}
