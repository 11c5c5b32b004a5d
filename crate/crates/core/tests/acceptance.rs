//! Acceptance suite: one line per criterion, then a single verdict.

use std::collections::BTreeSet;

use prism_core::cube::{build_decomposition, build_piece_decompositions, isomax_dim, isomax_table, EdgeKind, Subset};
use prism_core::dispersion::{
    cb_heights, check_dispersion, is_dispersible, is_generically_noetherian, thomason_heights, weakly_visible,
    Height, Visibility,
};
use prism_core::flagged::{FamilyPart, SymbolicSet};
use prism_core::guiding::{n_star, NStarOrder};
use prism_core::liegroups::{
    burnside_rank, catalog, flagged_snapshot, height_rep, phi_is_finite, rank, spectrum_is_noetherian, weyl_data,
    FiniteGroup, GroupId, Snapshot, SubgroupKey,
};
use prism_core::oracle;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const BOUNDS: [u32; 3] = [2, 3, 4];

fn snapshots() -> Vec<Snapshot> {
    let mut out = Vec::new();
    for g in catalog() {
        if matches!(g, GroupId::ToralSemidirect(_)) {
            continue;
        }
        for b in BOUNDS {
            out.push(flagged_snapshot(&g, b).expect("catalog snapshot"));
        }
    }
    out
}

fn label(s: &Snapshot) -> String {
    format!("{}@{}", s.group, s.bound)
}

fn h(v: u32) -> Option<Height> {
    Some(Height::Finite(v))
}

fn guiding_examples() -> Outcome {
    let expected = [
        (NStarOrder::Le1, true, h(1)),
        (NStarOrder::Le2, true, h(1)),
        (NStarOrder::Le3, false, None),
        (NStarOrder::Le4, false, None),
    ];
    for (o, dispersible, height) in expected {
        let space = n_star(o);
        let heights = thomason_heights(&space).map_err(|e| e.to_string())?;
        let got = is_dispersible(&space).map_err(|e| e.to_string())?;
        ensure!(got == dispersible, "{}: dispersible={got}", o.name());
        if let Some(v) = height {
            ensure!(Some(heights.max()) == Some(v), "{}: height {}", o.name(), heights.max());
        }
    }
    Ok(())
}

fn circle() -> Outcome {
    for b in BOUNDS {
        let s = flagged_snapshot(&GroupId::Circle, b).map_err(|e| e.to_string())?;
        let hts = thomason_heights(&s.space).map_err(|e| e.to_string())?;
        for n in 1..=b {
            ensure!(hts.get(&format!("C({n})")) == h(0), "C({n}) at bound {b}");
        }
        ensure!(hts.get("G") == h(1), "circle height at bound {b}");
        ensure!(hts.family("C") == h(0), "cyclic family at bound {b}");
        let d = build_decomposition(&GroupId::Circle, b).map_err(|e| e.to_string())?;
        ensure!(d.n == 1 && d.node_count() == 3, "not a 3-node cospan");
        let s0 = Subset::new(&[0]).unwrap();
        let s1 = Subset::new(&[1]).unwrap();
        ensure!(d.edges.len() == 2, "cospan has {} edges", d.edges.len());
        ensure!(d.edges[&(s0, 1)] == EdgeKind::Diagonal, "0 → 01 is not the diagonal");
        ensure!(d.edges[&(s1, 0)] == EdgeKind::Projection(0), "1 → 01 is not a projection");
        ensure!(d.nodes[&s1].factor_labels == vec!["G ↦ D(ℚ)".to_string()], "top labels");
        ensure!(d.nodes[&s0].factor_labels.len() == b as usize + 1, "bottom labels");
    }
    Ok(())
}

fn is_clopen_block(s: &Snapshot, points: &[String], families: &[String]) -> bool {
    let set = SymbolicSet {
        concrete: points.iter().map(|p| s.space.index_of(p).unwrap()).collect(),
        families: s
            .space
            .families()
            .iter()
            .map(|f| if families.contains(&f.id) { FamilyPart::All } else { FamilyPart::Empty })
            .collect(),
    };
    s.space.is_clopen(&set) && s.space.is_down_set(&set) && s.space.is_up_set(&set)
}

fn check_pieces(s: &Snapshot) -> Outcome {
    let mut seen = BTreeSet::new();
    for p in &s.pieces {
        ensure!(is_clopen_block(s, &p.points, &p.families), "{} is not a clopen block", p.name);
        for x in &p.points {
            ensure!(seen.insert(x.clone()), "{x} lies in two pieces");
        }
    }
    ensure!(seen.len() == s.space.len(), "pieces do not cover the snapshot");
    Ok(())
}

fn o2() -> Outcome {
    for b in BOUNDS {
        let s = flagged_snapshot(&GroupId::O2, b).map_err(|e| e.to_string())?;
        let hts = thomason_heights(&s.space).map_err(|e| e.to_string())?;
        for n in 1..=b {
            ensure!(hts.get(&format!("C({n})")) == h(0), "C({n})");
            ensure!(hts.get(&format!("D({})", 2 * n)) == h(0), "D({})", 2 * n);
        }
        ensure!(hts.get("SO2") == h(1) && hts.get("G") == h(1), "top stratum");
        ensure!(hts.heights.values().filter(|v| **v == Height::Finite(1)).count() == 2, "extra height-1 points");
        check_pieces(&s)?;
        let pieces = build_piece_decompositions(&GroupId::O2, b).map_err(|e| e.to_string())?;
        ensure!(pieces.len() == 2, "{} pieces", pieces.len());
        let top = Subset::new(&[1]).unwrap();
        for (name, d) in &pieces {
            ensure!(d.n == 1 && d.node_count() == 3, "{name} is not a cospan");
            let want = if name == "cyclic" { "SO2 ↦ D(ℚ[C₂])" } else { "G ↦ D(ℚ)" };
            ensure!(d.nodes[&top].factor_labels == vec![want.to_string()], "{name} top labels");
        }
    }
    Ok(())
}

fn so3() -> Outcome {
    let exceptional = ["G", "A5", "S4", "A4", "V4"];
    for b in BOUNDS {
        let s = flagged_snapshot(&GroupId::SO3, b).map_err(|e| e.to_string())?;
        let hts = thomason_heights(&s.space).map_err(|e| e.to_string())?;
        for p in exceptional {
            ensure!(hts.get(p) == h(0), "{p} at bound {b}");
            let i = s.space.index_of(p).unwrap();
            let isolated = (0..s.space.len()).all(|q| q == i || !s.space.order().le(q, i) && !s.space.order().le(i, q));
            ensure!(isolated, "{p} is not isolated");
        }
        ensure!(hts.get("SO2") == h(1) && hts.get("O2") == h(1), "SO2/O2 heights");
        check_pieces(&s)?;
        ensure!(s.pieces.len() == 7, "{} pieces", s.pieces.len());
    }
    let klein = weyl_data(&GroupId::SO3, &SubgroupKey::Klein).map_err(|e| e.to_string())?;
    ensure!(klein.component_group.order == 6, "Klein Weyl order {}", klein.component_group.order);
    Ok(())
}

fn torus2() -> Outcome {
    let t2 = GroupId::Torus(2);
    for b in BOUNDS {
        let s = flagged_snapshot(&t2, b).map_err(|e| e.to_string())?;
        let hts = thomason_heights(&s.space).map_err(|e| e.to_string())?;
        let dims = s.dimension_candidate().map_err(|e| e.to_string())?;
        for (p, d) in &dims.points {
            ensure!(hts.get(p) == h(*d), "{p}: height {:?} dim {d}", hts.get(p));
        }
        for (id, d) in &dims.families {
            ensure!(hts.family(id) == h(*d), "family {id}");
        }
        let seen: BTreeSet<u32> = dims.points.values().copied().collect();
        ensure!(seen == BTreeSet::from([0, 1, 2]), "dimensions {seen:?}");
    }
    let d = build_decomposition(&t2, 2).map_err(|e| e.to_string())?;
    ensure!(d.n == 2 && d.node_count() == 7, "not the punctured 2-cube");
    let expected = [
        (&[0][..], 0),
        (&[1], 1),
        (&[2], 2),
        (&[0, 1], 0),
        (&[0, 2], 1),
        (&[1, 2], 1),
        (&[0, 1, 2], 0),
    ];
    for (e, dim) in expected {
        let phi = Subset::new(e).unwrap();
        ensure!(d.nodes[&phi].cube_dim == dim && isomax_dim(phi) == dim, "node {phi}");
    }
    Ok(())
}

fn nsu3t() -> Outcome {
    let g = GroupId::nsu3t();
    let hr = height_rep(&g, &SubgroupKey::Full).map_err(|e| e.to_string())?;
    let r = rank(&g, &SubgroupKey::Full).map_err(|e| e.to_string())?;
    ensure!(hr == 1 && r == 2, "height {hr}, rank {r}");
    Ok(())
}

fn noetherian() -> Outcome {
    let expected = [
        (GroupId::Circle, true),
        (GroupId::Finite(FiniteGroup::trivial()), true),
        (GroupId::Torus(2), true),
        (GroupId::O2, false),
        (GroupId::SO3, false),
    ];
    for (g, want) in &expected {
        ensure!(spectrum_is_noetherian(g) == *want, "{g}");
        for b in BOUNDS {
            let s = flagged_snapshot(g, b).map_err(|e| e.to_string())?;
            ensure!(s.space.is_noetherian() == *want, "snapshot of {g} at bound {b}");
        }
    }
    for g in catalog() {
        let finite = burnside_rank(&g).is_finite();
        ensure!(finite == spectrum_is_noetherian(&g) && finite == phi_is_finite(&g), "{g}");
    }
    Ok(())
}

fn generically_noetherian() -> Outcome {
    for s in snapshots() {
        ensure!(is_generically_noetherian(&s.space), "{}", label(&s));
        if is_dispersible(&s.space).map_err(|e| e.to_string())? {
            for p in s.space.points() {
                let v = weakly_visible(&s.space, p).map_err(|e| e.to_string())?;
                ensure!(matches!(v, Visibility::Visible(_)), "{p} in {}", label(&s));
            }
        }
    }
    Ok(())
}

fn amenability() -> Outcome {
    for s in snapshots() {
        let t = thomason_heights(&s.space).map_err(|e| e.to_string())?;
        let c = cb_heights(&s.space).map_err(|e| e.to_string())?;
        ensure!(t == c, "{}", label(&s));
    }
    Ok(())
}

fn oracles() -> Outcome {
    for suite in ["isomax", "snf", "derivative", "downsets"] {
        let r = oracle::run_suite(suite).map_err(|e| e.to_string())?;
        ensure!(r.cases > 0 && r.passed(), "{}: {:?}", r.summary(), r.mismatches.first());
    }
    Ok(())
}

fn universality() -> Outcome {
    for s in snapshots() {
        let t = thomason_heights(&s.space).map_err(|e| e.to_string())?;
        for (what, chi) in [("dimension", s.dimension_candidate()), ("rank", s.rank_candidate())] {
            let chi = chi.map_err(|e| e.to_string())?;
            check_dispersion(&s.space, &chi).map_err(|v| format!("{what} on {}: {v}", label(&s)))?;
            for (p, v) in &chi.points {
                ensure!(Height::Finite(*v) >= t.heights[p], "{what} below height at {p}");
            }
            for (id, v) in &chi.families {
                ensure!(Height::Finite(*v) >= t.family_heights[id], "{what} below height at {id}");
            }
        }
    }
    Ok(())
}

fn isomax_golden() -> Outcome {
    let golden = include_str!("golden/isomax_2.txt");
    ensure!(isomax_table(2) == golden, "table differs:\n{}", isomax_table(2));
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("guiding examples", guiding_examples),
        ("circle", circle),
        ("O(2)", o2),
        ("SO(3)", so3),
        ("T²", torus2),
        ("normalizer of the maximal torus of SU(3)", nsu3t),
        ("Noetherian classification", noetherian),
        ("generically Noetherian", generically_noetherian),
        ("amenability", amenability),
        ("oracle equivalences", oracles),
        ("dispersion universality", universality),
        ("isomax table", isomax_golden),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(()) => println!("criterion {:>2} PASS  {name}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
