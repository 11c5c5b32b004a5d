use std::collections::BTreeSet;

use proptest::prelude::*;

use prism_core::dispersion::{
    thomason_heights, weakly_visible, Height, Visibility,
};
use prism_core::flagged::{FamilyPart, FlaggedPriestley, SymbolicSet};
use prism_core::guiding::{n_star, NStarOrder};
use prism_core::lattice::Lattice;
use prism_core::liegroups::{
    catalog, cotoral_le, dim, flagged_snapshot, has_finite_weyl, height_rep, weyl_data, GroupId,
    IdentityComponent, Snapshot,
};
use prism_core::order::{FinitePriestley, Order, PointSet};
use prism_core::rep::{count_simple_summands, IntegerAction};

fn snapshots(bounds: &[u32]) -> Vec<Snapshot> {
    catalog()
        .iter()
        .filter(|g| !matches!(g, GroupId::ToralSemidirect(_)))
        .flat_map(|g| bounds.iter().map(move |&b| flagged_snapshot(g, b).unwrap()))
        .collect()
}

fn order_strategy(max: usize) -> impl Strategy<Value = Order> {
    (0..=max).prop_flat_map(|n| {
        let slots = n * n.saturating_sub(1) / 2;
        (Just(n), proptest::collection::vec(any::<bool>(), slots), Just(()))
            .prop_map(|(n, bits, _)| {
                let pairs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
                    .zip(bits)
                    .filter_map(|(p, keep)| keep.then_some(p))
                    .collect();
                Order::from_pairs(n, &pairs).unwrap()
            })
    })
}

fn poset(order: &Order) -> FinitePriestley {
    let names = (0..order.len()).map(|i| format!("x{i}")).collect();
    FinitePriestley::from_order(names, order.clone()).unwrap()
}

proptest! {
    #[test]
    fn down_sets_form_a_lattice(order in order_strategy(8)) {
        let sets: BTreeSet<PointSet> = order.down_sets().into_iter().collect();
        for a in &sets {
            for b in &sets {
                prop_assert!(sets.contains(&a.union(b).copied().collect::<PointSet>()));
                prop_assert!(sets.contains(&a.intersection(b).copied().collect::<PointSet>()));
            }
        }
    }

    #[test]
    fn inverse_is_an_involution(order in order_strategy(8)) {
        let p = poset(&order);
        prop_assert_eq!(p.inverse().inverse(), p.clone());
        let f = FlaggedPriestley::from_finite(&p);
        prop_assert_eq!(f.inverse().inverse(), f);
    }

    #[test]
    fn spectral_round_trip(order in order_strategy(6)) {
        let p = poset(&order);
        let x = p.spectral();
        prop_assert_eq!(x.priestley().unwrap(), p.clone());
        for open in x.opens() {
            prop_assert!(p.order().is_up_set(open));
        }
    }

    #[test]
    fn thomason_points_are_minimal(order in order_strategy(8)) {
        let p = poset(&order);
        let all: PointSet = (0..p.len()).collect();
        prop_assert!(p.thomason_points().is_subset(&order.minimal_in(&all)));
    }

    #[test]
    fn heights_increase_along_the_order(order in order_strategy(8)) {
        let f = FlaggedPriestley::from_finite(&poset(&order));
        let h = thomason_heights(&f).unwrap();
        for (a, b) in order.strict_pairs() {
            prop_assert!(h.heights[f.name(a)] < h.heights[f.name(b)]);
        }
    }

    #[test]
    fn summands_invariant_under_unimodular_conjugation(
        which in 0usize..5,
        ops in proptest::collection::vec((0usize..2, 0usize..2, -2i64..=2), 0..6),
    ) {
        let a = actions()[which].clone();
        let mut p = vec![vec![1i64, 0], vec![0, 1]];
        for (i, j, c) in ops {
            if i != j {
                for k in 0..2 {
                    p[i][k] += c * p[j][k];
                }
            }
        }
        let conj = a.conjugate(&p).unwrap();
        prop_assert_eq!(count_simple_summands(&conj).unwrap(), count_simple_summands(&a).unwrap());
    }

    #[test]
    fn summands_add_over_direct_sums(x in 0usize..5, y in 0usize..3) {
        let a = actions()[x].clone();
        let b = [
            IntegerAction::trivial(1),
            IntegerAction::new(1, vec![vec![vec![-1]]]).unwrap(),
            IntegerAction::new(1, vec![vec![vec![1]], vec![vec![-1]]]).unwrap(),
        ][y].clone();
        let sum = a.direct_sum(&b);
        prop_assert_eq!(
            count_simple_summands(&sum).unwrap(),
            count_simple_summands(&a).unwrap() + count_simple_summands(&b).unwrap()
        );
    }
}

fn actions() -> Vec<IntegerAction> {
    vec![
        IntegerAction::trivial(2),
        IntegerAction::new(2, vec![vec![vec![0, 1], vec![1, 0]]]).unwrap(),
        IntegerAction::new(2, vec![vec![vec![0, -1], vec![1, -1]]]).unwrap(),
        IntegerAction::new(2, vec![vec![vec![-1, 1], vec![0, 1]], vec![vec![1, 0], vec![1, -1]]]).unwrap(),
        IntegerAction::new(2, vec![vec![vec![-1, 0], vec![0, 1]]]).unwrap(),
    ]
}

#[test]
fn cotoral_is_a_partial_order_raising_dimension() {
    for s in snapshots(&[2, 3]) {
        let keys: Vec<_> = s.keys.values().collect();
        for a in &keys {
            assert!(cotoral_le(&s.group, a, a).unwrap());
            for b in &keys {
                let ab = cotoral_le(&s.group, a, b).unwrap();
                if ab && a != b {
                    assert!(!cotoral_le(&s.group, b, a).unwrap(), "antisymmetry in {}", s.group);
                    assert!(dim(&s.group, a).unwrap() < dim(&s.group, b).unwrap());
                }
                for c in &keys {
                    if ab && cotoral_le(&s.group, b, c).unwrap() {
                        assert!(cotoral_le(&s.group, a, c).unwrap(), "transitivity in {}", s.group);
                    }
                }
            }
        }
    }
}

#[test]
fn representation_height_matches_thomason_height() {
    for s in snapshots(&[2, 3, 4]) {
        let h = thomason_heights(&s.space).unwrap();
        for (name, key) in &s.keys {
            let rep = height_rep(&s.group, key).unwrap();
            assert_eq!(h.heights[name], Height::Finite(rep), "{name} in {}@{}", s.group, s.bound);
        }
    }
}

#[test]
fn finite_weyl_iff_trivial_identity_component() {
    for s in snapshots(&[3]) {
        for key in s.keys.values() {
            let trivial = weyl_data(&s.group, key).unwrap().identity_component == IdentityComponent::Trivial;
            assert_eq!(has_finite_weyl(&s.group, key).unwrap(), trivial);
        }
    }
}

#[test]
fn rank_three_torus_heights_are_dimensions() {
    let s = flagged_snapshot(&GroupId::Torus(3), 2).unwrap();
    let h = thomason_heights(&s.space).unwrap();
    for (name, key) in &s.keys {
        assert_eq!(h.heights[name], Height::Finite(dim(&s.group, key).unwrap()));
    }
    assert!(s.keys.contains_key(&Lattice::zero(3).to_string()));
}

fn flagged_examples() -> Vec<FlaggedPriestley> {
    let mut out: Vec<FlaggedPriestley> = NStarOrder::ALL.iter().map(|o| n_star(*o)).collect();
    out.extend(NStarOrder::ALL.iter().map(|o| n_star(*o).inverse()));
    out.extend(snapshots(&[1, 2]).into_iter().map(|s| s.space));
    out
}

#[test]
fn clopen_classes_instantiate_to_clopen_down_sets() {
    for space in flagged_examples() {
        for depth in [0, 1, 3] {
            let model = space.finite_model(depth);
            for class in space.clopen_down_sets() {
                assert!(space.is_clopen(&class) && space.is_down_set(&class));
                let names = space.instantiate(&class, depth);
                let idx: PointSet = names.iter().map(|n| model.index_of(n).unwrap()).collect();
                assert!(model.order().is_down_set(&idx), "{}", space.describe(&class));
                assert!(space.is_closed(&class.complement(&space)));
            }
        }
    }
}

/// Weak visibility by trying every union of clopen down-set classes.
fn visible_by_search(space: &FlaggedPriestley, point: &str) -> bool {
    let x = space.index_of(point).unwrap();
    let up = space.up_closure_of(x);
    let classes = space.clopen_down_sets();
    classes.iter().any(|u| {
        u.concrete.contains(&x)
            && up.concrete.intersection(&u.concrete).eq([x].iter())
            && up
                .families
                .iter()
                .zip(&u.families)
                .all(|(a, b)| *a == FamilyPart::Empty || matches!(b, FamilyPart::Empty | FamilyPart::Finite))
    })
}

#[test]
fn visibility_agrees_with_exhaustive_search() {
    for space in flagged_examples().into_iter().filter(|s| s.len() <= 16) {
        for p in space.points() {
            let fast = matches!(weakly_visible(&space, p).unwrap(), Visibility::Visible(_));
            assert_eq!(fast, visible_by_search(&space, p), "{p}");
        }
    }
}

#[test]
fn symbolic_complement_is_involutive() {
    for space in flagged_examples() {
        for c in space.clopen_down_sets() {
            let back: SymbolicSet = c.complement(&space).complement(&space);
            assert_eq!(back, c);
        }
    }
}
