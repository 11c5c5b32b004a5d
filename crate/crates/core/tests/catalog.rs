use prism_core::dispersion::{
    cb_heights, gen_closure, height_of_space, is_dispersion, is_generically_noetherian, strata, thomason_heights,
    DispersionCandidate, Height,
};
use prism_core::flagged::FamilyPart;
use prism_core::liegroups::{
    burnside_rank, flagged_snapshot, symmetric3, FiniteGroup, GroupId, SubgroupKey,
};
use prism_core::order::FinitePriestley;

#[test]
fn circle_snapshot_shape() {
    let s = flagged_snapshot(&GroupId::Circle, 3).unwrap();
    assert_eq!(s.space.points(), ["C(1)", "C(2)", "C(3)", "G"]);
    assert_eq!(s.space.families().len(), 1);
    assert!(s.space.is_noetherian());
}

#[test]
fn circle_generalization_closure() {
    let s = flagged_snapshot(&GroupId::Circle, 6).unwrap();
    let g = gen_closure(&s.space, "C(6)").unwrap();
    assert_eq!(g.points(), ["C(6)", "G"]);
    assert!(g.order().lt(0, 1));
    assert!(g.is_noetherian());
}

#[test]
fn dihedral_generalization_closure() {
    let s = flagged_snapshot(&GroupId::O2, 4).unwrap();
    let g = gen_closure(&s.space, "D(6)").unwrap();
    assert_eq!(g.points(), ["D(6)"]);
    assert!(is_generically_noetherian(&s.space));
    assert!(!s.space.is_noetherian());
}

#[test]
fn o2_upper_stratum() {
    let s = flagged_snapshot(&GroupId::O2, 3).unwrap();
    let chi = DispersionCandidate::from_heights(&thomason_heights(&s.space).unwrap()).unwrap();
    let st = strata(&s.space, &chi, 1).unwrap();
    assert_eq!(s.space.names(&st.at.concrete), ["G", "SO2"]);
    assert!(st.at.families.iter().all(|f| *f == FamilyPart::Empty));
    let base = strata(&s.space, &chi, 0).unwrap();
    assert_eq!(base.at_or_above, s.space.all());
}

#[test]
fn circle_clopen_classes() {
    let s = flagged_snapshot(&GroupId::Circle, 2).unwrap();
    let classes = s.space.clopen_down_sets();
    let whole = s.space.all();
    assert!(classes.contains(&whole));
    for c in &classes {
        if c != &whole {
            assert!(!c.concrete.contains(&s.space.index_of("G").unwrap()));
            assert_eq!(c.families, vec![FamilyPart::Finite]);
        }
    }
    // Finite sets of cyclic subgroups: every subset of {C(1), C(2)}, plus the whole space.
    assert_eq!(classes.len(), 4 + 1);
}

#[test]
fn dihedral_clopen_classes() {
    let s = flagged_snapshot(&GroupId::O2, 1).unwrap();
    let dihedral = s.pieces.iter().find(|p| p.name == "dihedral").unwrap();
    let piece = s.piece_space(dihedral).unwrap();
    let mut described: Vec<String> = piece.clopen_down_sets().iter().map(|c| piece.describe(c)).collect();
    described.sort();
    assert_eq!(
        described,
        ["{D(2), G} + D:cofinite", "{D(2)} + D:finite", "{G} + D:cofinite", "{} + D:finite"]
    );
}

#[test]
fn torus_dispersions() {
    let s = flagged_snapshot(&GroupId::Torus(2), 2).unwrap();
    assert!(is_dispersion(&s.space, &s.dimension_candidate().unwrap()));
    assert!(is_dispersion(&s.space, &s.rank_candidate().unwrap()));
    assert_eq!(height_of_space(&s.space).unwrap(), Height::Finite(2));
}

#[test]
fn so3_exceptional_points_present() {
    let s = flagged_snapshot(&GroupId::SO3, 4).unwrap();
    for p in ["G", "A4", "S4", "A5", "V4"] {
        assert!(s.space.points().iter().any(|x| x == p), "{p}");
    }
    assert_eq!(s.key("V4"), Some(&SubgroupKey::Klein));
}

#[test]
fn finite_groups_are_discrete() {
    for g in [GroupId::Finite(symmetric3()), GroupId::Finite(FiniteGroup::trivial())] {
        let s = flagged_snapshot(&g, 3).unwrap();
        assert!(s.space.families().is_empty());
        assert!(s.space.order().strict_pairs().is_empty());
        let h = cb_heights(&s.space).unwrap();
        assert!(h.heights.values().all(|v| *v == Height::Finite(0)));
    }
    assert_eq!(burnside_rank(&GroupId::Finite(symmetric3())), Height::Finite(4));
    assert_eq!(burnside_rank(&GroupId::Finite(FiniteGroup::trivial())), Height::Finite(1));
    assert_eq!(burnside_rank(&GroupId::Circle), Height::Finite(1));
    assert_eq!(burnside_rank(&GroupId::O2), Height::Infinite);
}

#[test]
fn finite_group_fixture_loads() {
    let text = include_str!("../../../fixtures/s3.json");
    assert_eq!(FiniteGroup::from_json(text).unwrap(), symmetric3());
    let bad = r#"{"name":"x","classes":[{"name":"1","order":1,"weylOrder":1,"extra":0}]}"#;
    assert_eq!(FiniteGroup::from_json(bad).unwrap_err().name(), "Json");
}

#[test]
fn v_shaped_poset() {
    let v = FinitePriestley::new(&["g", "c1", "c2"], &[("c1", "g"), ("c2", "g")]).unwrap();
    // ∅, {c1}, {c2}, {c1, c2} and the whole poset.
    assert_eq!(v.down_sets().len(), 5);
    assert_eq!(v.spectral().opens().len(), 5);
}
