//! Thomason derivatives and heights, dispersion checks, strata and the
//! visibility / generic Noetherianity tests on flagged spaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{PrismError, Result};
use crate::flagged::{FamilyPart, FamilySpec, FlaggedPriestley, FlaggedSpec, MemberOrder, SymbolicSet};
use crate::order::PointSet;

/// A value in ℕ ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Height {
    Finite(u32),
    Infinite,
}

impl Height {
    pub fn succ(self) -> Height {
        match self {
            Height::Finite(h) => Height::Finite(h + 1),
            Height::Infinite => Height::Infinite,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Height::Finite(h) => Some(h),
            Height::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Height::Finite(_))
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Infinite => f.write_str("inf"),
        }
    }
}

impl From<Height> for serde_json::Value {
    fn from(h: Height) -> Self {
        match h {
            Height::Finite(v) => serde_json::Value::from(v),
            Height::Infinite => serde_json::Value::from("inf"),
        }
    }
}

/// Prefix distinguishing family entries in flat JSON maps.
pub const FAMILY_PREFIX: &str = "family:";

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeightAssignment {
    pub heights: BTreeMap<String, Height>,
    /// Common member height per family id.
    pub family_heights: BTreeMap<String, Height>,
}

impl HeightAssignment {
    pub fn get(&self, point: &str) -> Option<Height> {
        self.heights.get(point).copied()
    }

    pub fn family(&self, id: &str) -> Option<Height> {
        self.family_heights.get(id).copied()
    }

    pub fn all_finite(&self) -> bool {
        self.heights
            .values()
            .chain(self.family_heights.values())
            .all(|h| h.is_finite())
    }

    pub fn max(&self) -> Height {
        self.heights
            .values()
            .chain(self.family_heights.values())
            .copied()
            .max()
            .unwrap_or(Height::Finite(0))
    }

    /// `heights/v1`: a flat object from point name to height, `"inf"` for ∞;
    /// families appear under `family:<id>`.
    pub fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (p, h) in &self.heights {
            map.insert(p.clone(), (*h).into());
        }
        for (id, h) in &self.family_heights {
            map.insert(format!("{FAMILY_PREFIX}{id}"), (*h).into());
        }
        serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("map serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, h) in &self.heights {
            out.push_str(&format!("{p}\t{h}\n"));
        }
        for (id, h) in &self.family_heights {
            out.push_str(&format!("{FAMILY_PREFIX}{id}\t{h}\n"));
        }
        out
    }
}

/// Which points are removed by one Thomason derivative, by family index.
fn consumed_families(p: &FlaggedPriestley) -> BTreeSet<String> {
    let tp = p.thomason_points();
    p.families()
        .iter()
        .zip(&tp.families)
        .filter(|(_, part)| **part == FamilyPart::All)
        .map(|(f, _)| f.id.clone())
        .collect()
}

/// Removes all Thomason points. Families whose members were all removed no
/// longer block their limit; surviving member height hints drop by one.
pub fn thomason_derivative(p: &FlaggedPriestley) -> FlaggedPriestley {
    let tp = p.thomason_points();
    let keep: PointSet = (0..p.len()).filter(|x| !tp.concrete.contains(x)).collect();
    let consumed = consumed_families(p);
    let derived = p.restrict(&keep, |f| !consumed.contains(&f.id));
    let mut spec = derived.to_spec();
    for f in &mut spec.families {
        f.height_hint = f.height_hint.map(|h| h.saturating_sub(1));
    }
    FlaggedPriestley::from_spec(&spec).expect("derived space stays valid")
}

/// Least fixed point in ℕ ∪ {∞} of the height recursion, by chaotic
/// iteration. A value exceeding the number of nodes can only come from a
/// cycle of strict increases and is saturated to ∞.
pub fn thomason_heights(p: &FlaggedPriestley) -> Result<HeightAssignment> {
    let n = p.len();
    let fams = p.families();
    let cutoff = (n + fams.len() + 1) as u32;
    let saturate = |h: Height| match h {
        Height::Finite(v) if v > cutoff => Height::Infinite,
        other => other,
    };
    let mut hp = vec![Height::Finite(0); n];
    let mut hf: Vec<Height> = fams
        .iter()
        .map(|f| match f.member_order {
            MemberOrder::Antichain => Height::Finite(f.height_hint.unwrap_or(0)),
            _ => Height::Infinite,
        })
        .collect();
    let below: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&q| p.order().lt(q, x)).collect())
        .collect();
    loop {
        let mut changed = false;
        for (i, f) in fams.iter().enumerate() {
            if f.member_order != MemberOrder::Antichain {
                continue;
            }
            let mut v = Height::Finite(f.height_hint.unwrap_or(0));
            for &q in &f.member_gt {
                v = v.max(hp[q].succ());
            }
            let v = saturate(v);
            if v != hf[i] {
                hf[i] = v;
                changed = true;
            }
        }
        for x in 0..n {
            let mut v = Height::Finite(0);
            for &q in &below[x] {
                v = v.max(hp[q].succ());
            }
            for (i, f) in fams.iter().enumerate() {
                if f.limit == x || f.member_lt.contains(&x) {
                    v = v.max(hf[i].succ());
                }
            }
            let v = saturate(v);
            if v != hp[x] {
                hp[x] = v;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for (i, f) in fams.iter().enumerate() {
        if let Some(hint) = f.height_hint {
            let structural = f
                .member_gt
                .iter()
                .map(|&q| hp[q].succ())
                .max()
                .unwrap_or(Height::Finite(0));
            if let Height::Finite(computed) = structural {
                if computed > hint {
                    return Err(PrismError::InconsistentHint {
                        family: f.id.clone(),
                        hint,
                        computed,
                    });
                }
            }
            debug_assert!(hf[i] >= Height::Finite(hint));
        }
    }
    Ok(HeightAssignment {
        heights: (0..n).map(|x| (p.name(x).to_string(), hp[x])).collect(),
        family_heights: fams
            .iter()
            .zip(hf)
            .map(|(f, h)| (f.id.clone(), h))
            .collect(),
    })
}

/// The same space with its order forgotten: families keep their limits and
/// height hints but lose every order relation.
pub fn discrete_version(p: &FlaggedPriestley) -> FlaggedPriestley {
    let spec = p.to_spec();
    let spec = FlaggedSpec {
        points: spec.points,
        order: vec![],
        families: spec
            .families
            .into_iter()
            .map(|f| FamilySpec {
                member_order: MemberOrder::Antichain,
                member_lt: vec![],
                member_gt: vec![],
                ..f
            })
            .collect(),
    };
    FlaggedPriestley::from_spec(&spec).expect("discrete version is valid")
}

/// Cantor–Bendixson heights: Thomason heights of the discretely ordered space.
pub fn cb_heights(p: &FlaggedPriestley) -> Result<HeightAssignment> {
    thomason_heights(&discrete_version(p))
}

pub fn is_dispersible(p: &FlaggedPriestley) -> Result<bool> {
    Ok(thomason_heights(p)?.all_finite())
}

pub fn height_of_space(p: &FlaggedPriestley) -> Result<Height> {
    Ok(thomason_heights(p)?.max())
}

/// Candidate ℕ-valued function on points and families.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DispersionCandidate {
    pub points: BTreeMap<String, u32>,
    pub families: BTreeMap<String, u32>,
}

impl DispersionCandidate {
    pub fn constant(p: &FlaggedPriestley, value: u32) -> Self {
        DispersionCandidate {
            points: p.points().iter().map(|x| (x.clone(), value)).collect(),
            families: p.families().iter().map(|f| (f.id.clone(), value)).collect(),
        }
    }

    /// Candidate from a height assignment, if every height is finite.
    pub fn from_heights(h: &HeightAssignment) -> Option<Self> {
        Some(DispersionCandidate {
            points: h
                .heights
                .iter()
                .map(|(k, v)| Some((k.clone(), v.finite()?)))
                .collect::<Option<_>>()?,
            families: h
                .family_heights
                .iter()
                .map(|(k, v)| Some((k.clone(), v.finite()?)))
                .collect::<Option<_>>()?,
        })
    }

    /// Reads the flat `heights/v1`-shaped object (finite values only).
    pub fn from_json(text: &str) -> Result<Self> {
        let map: BTreeMap<String, u32> = serde_json::from_str(text)?;
        let mut c = DispersionCandidate::default();
        for (k, v) in map {
            match k.strip_prefix(FAMILY_PREFIX) {
                Some(id) => c.families.insert(id.to_string(), v),
                None => c.points.insert(k, v),
            };
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Missing(String),
    /// Strict order relation not strictly increased.
    NotIncreasing { lower: String, upper: String },
    /// A family's limit does not sit strictly above the family value.
    Accumulation { family: String, limit: String },
    /// Chain families cannot carry a single member value.
    ChainFamily(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Missing(x) => write!(f, "no value for {x}"),
            Violation::NotIncreasing { lower, upper } => write!(f, "{lower} < {upper}"),
            Violation::Accumulation { family, limit } => {
                write!(f, "family {family} accumulates at {limit}")
            }
            Violation::ChainFamily(id) => write!(f, "family {id} is a chain"),
        }
    }
}

/// Checks both dispersion axioms; returns the first violation found.
pub fn check_dispersion(p: &FlaggedPriestley, chi: &DispersionCandidate) -> std::result::Result<(), Violation> {
    let mut vp = Vec::with_capacity(p.len());
    for x in p.points() {
        vp.push(*chi.points.get(x).ok_or_else(|| Violation::Missing(x.clone()))?);
    }
    let mut vf = Vec::new();
    for f in p.families() {
        let key = format!("{FAMILY_PREFIX}{}", f.id);
        vf.push(*chi.families.get(&f.id).ok_or(Violation::Missing(key))?);
    }
    for (a, b) in p.order().strict_pairs() {
        if vp[a] >= vp[b] {
            return Err(Violation::NotIncreasing {
                lower: p.name(a).to_string(),
                upper: p.name(b).to_string(),
            });
        }
    }
    for (f, &v) in p.families().iter().zip(&vf) {
        if f.member_order != MemberOrder::Antichain {
            return Err(Violation::ChainFamily(f.id.clone()));
        }
        let member = || format!("{}#*", f.id);
        if let Some(&q) = f.member_gt.iter().find(|&&q| vp[q] >= v) {
            return Err(Violation::NotIncreasing {
                lower: p.name(q).to_string(),
                upper: member(),
            });
        }
        if let Some(&x) = f.member_lt.iter().find(|&&x| v >= vp[x]) {
            return Err(Violation::NotIncreasing {
                lower: member(),
                upper: p.name(x).to_string(),
            });
        }
    }
    for (f, &v) in p.families().iter().zip(&vf) {
        if vp[f.limit] <= v {
            return Err(Violation::Accumulation {
                family: f.id.clone(),
                limit: p.name(f.limit).to_string(),
            });
        }
    }
    Ok(())
}

pub fn is_dispersion(p: &FlaggedPriestley, chi: &DispersionCandidate) -> bool {
    check_dispersion(p, chi).is_ok()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strata {
    pub level: u32,
    /// Points of value exactly `level`.
    pub at: SymbolicSet,
    pub below: SymbolicSet,
    pub at_or_above: SymbolicSet,
}

fn value_set(p: &FlaggedPriestley, chi: &DispersionCandidate, keep: impl Fn(u32) -> bool) -> SymbolicSet {
    SymbolicSet {
        concrete: (0..p.len())
            .filter(|&x| keep(chi.points[p.name(x)]))
            .collect(),
        families: p
            .families()
            .iter()
            .map(|f| {
                if keep(chi.families[&f.id]) {
                    FamilyPart::All
                } else {
                    FamilyPart::Empty
                }
            })
            .collect(),
    }
}

/// Splits `p` at `level` and verifies the structural properties of the pieces.
pub fn strata(p: &FlaggedPriestley, chi: &DispersionCandidate, level: u32) -> Result<Strata> {
    check_dispersion(p, chi).map_err(|v| PrismError::ChecksFailed(format!("not a dispersion: {v}")))?;
    let at = value_set(p, chi, |v| v == level);
    let below = value_set(p, chi, |v| v < level);
    let at_or_above = value_set(p, chi, |v| v >= level);
    if !(p.is_down_set(&below) && p.is_open(&below)) {
        return Err(PrismError::ChecksFailed("lower part is not an open down-set".into()));
    }
    if !(p.is_up_set(&at_or_above) && p.is_closed(&at_or_above)) {
        return Err(PrismError::ChecksFailed("upper part is not a closed up-set".into()));
    }
    let fams = p.families();
    for &x in &at.concrete {
        let blocked = fams.iter().zip(&at_or_above.families).any(|(f, part)| {
            *part == FamilyPart::All && (f.limit == x || f.member_lt.contains(&x))
        }) || at_or_above.concrete.iter().any(|&q| p.order().lt(q, x));
        if blocked {
            return Err(PrismError::ChecksFailed(format!(
                "{} is not an isolated minimal point of the upper part",
                p.name(x)
            )));
        }
    }
    for (f, part) in fams.iter().zip(&at.families) {
        if *part == FamilyPart::All && f.member_gt.iter().any(|q| at_or_above.concrete.contains(q)) {
            return Err(PrismError::ChecksFailed(format!(
                "members of {} are not minimal in the upper part",
                f.id
            )));
        }
    }
    Ok(Strata {
        level,
        at,
        below,
        at_or_above,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Visibility {
    /// A clopen down-set `U` with `up(p) ∩ U = {p}`.
    Visible(SymbolicSet),
    NotVisible,
}

/// Looks for an open down-set cutting the up-closure of `point` down to the
/// point itself. The smallest clopen down-set containing the point is the
/// only candidate worth testing: any other contains it.
pub fn weakly_visible(p: &FlaggedPriestley, point: &str) -> Result<Visibility> {
    let x = p.index_of(point)?;
    let seed = SymbolicSet {
        concrete: [x].into_iter().collect(),
        families: vec![FamilyPart::Empty; p.families().len()],
    };
    let Some(u) = p.clopen_down_closure(&seed) else {
        return Ok(Visibility::NotVisible);
    };
    let up = p.up_closure_of(x);
    let concrete_ok = up.concrete.intersection(&u.concrete).eq([x].iter());
    let families_ok = up
        .families
        .iter()
        .zip(&u.families)
        .all(|(a, b)| *a == FamilyPart::Empty || *b == FamilyPart::Empty || *b == FamilyPart::Finite);
    Ok(if concrete_ok && families_ok {
        Visibility::Visible(u)
    } else {
        Visibility::NotVisible
    })
}

/// Generalization closure: everything above `point`, with the families whose
/// limit and members all lie above it.
pub fn gen_closure(p: &FlaggedPriestley, point: &str) -> Result<FlaggedPriestley> {
    let x = p.index_of(point)?;
    let keep: PointSet = (0..p.len()).filter(|&q| p.order().le(x, q)).collect();
    Ok(p.restrict(&keep, |f| f.member_gt.contains(&x)))
}

pub fn is_generically_noetherian(p: &FlaggedPriestley) -> bool {
    p.points()
        .iter()
        .all(|x| gen_closure(p, x).map(|g| g.is_noetherian()).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guiding::{n_star, NStarOrder, INFINITY};
    use crate::order::FinitePriestley;

    fn circle() -> FlaggedPriestley {
        FlaggedPriestley::from_json(
            r#"{"points":["C(1)","C(2)","C(3)","G"],
                "order":[["C(1)","G"],["C(2)","G"],["C(3)","G"]],
                "families":[{"id":"C","limit":"G","memberOrder":"antichain","memberLt":["G"]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn derivative_of_one_point_compactification() {
        let d = thomason_derivative(&n_star(NStarOrder::Le1));
        assert_eq!(d.points(), &[INFINITY.to_string()]);
        assert!(d.families().is_empty());
        let d2 = thomason_derivative(&d);
        assert!(d2.is_empty());
    }

    #[test]
    fn derivative_of_antichain_is_empty() {
        let a = FinitePriestley::antichain(&["a", "b", "c"]).unwrap();
        assert!(thomason_derivative(&FlaggedPriestley::from_finite(&a)).is_empty());
    }

    #[test]
    fn le3_is_a_fixed_point() {
        let p = n_star(NStarOrder::Le3);
        assert_eq!(thomason_derivative(&p), p);
    }

    #[test]
    fn circle_heights() {
        let h = thomason_heights(&circle()).unwrap();
        for c in ["C(1)", "C(2)", "C(3)"] {
            assert_eq!(h.get(c), Some(Height::Finite(0)));
        }
        assert_eq!(h.get("G"), Some(Height::Finite(1)));
        assert_eq!(h.family("C"), Some(Height::Finite(0)));
        assert_eq!(cb_heights(&circle()).unwrap(), h);
    }

    #[test]
    fn le4_heights_are_infinite() {
        let h = thomason_heights(&n_star(NStarOrder::Le4)).unwrap();
        assert_eq!(h.get(INFINITY), Some(Height::Infinite));
        assert_eq!(h.family("n"), Some(Height::Infinite));
        // the underlying Stone space still has Cantor–Bendixson height one
        let cb = cb_heights(&n_star(NStarOrder::Le4)).unwrap();
        assert_eq!(cb.get(INFINITY), Some(Height::Finite(1)));
    }

    #[test]
    fn le2_cb_matches_thomason() {
        let p = n_star(NStarOrder::Le2);
        assert_eq!(cb_heights(&p).unwrap(), thomason_heights(&p).unwrap());
    }

    #[test]
    fn inconsistent_hint_is_reported() {
        let p = FlaggedPriestley::from_json(
            r#"{"points":["a","b","top"],"order":[["a","b"],["b","top"]],
                "families":[{"id":"f","limit":"top","memberOrder":"antichain",
                             "memberLt":["top"],"memberGt":["b"],"heightHint":1}]}"#,
        )
        .unwrap();
        assert!(matches!(
            thomason_heights(&p),
            Err(PrismError::InconsistentHint { computed: 2, hint: 1, .. })
        ));
    }

    #[test]
    fn constant_zero_fails_on_circle() {
        let p = circle();
        let chi = DispersionCandidate::constant(&p, 0);
        assert_eq!(
            check_dispersion(&p, &chi),
            Err(Violation::NotIncreasing {
                lower: "C(1)".into(),
                upper: "G".into()
            })
        );
    }

    #[test]
    fn heights_are_a_dispersion_on_the_circle() {
        let p = circle();
        let h = thomason_heights(&p).unwrap();
        let chi = DispersionCandidate::from_heights(&h).unwrap();
        assert!(is_dispersion(&p, &chi));
        let mut bad = chi.clone();
        bad.points.insert("G".into(), 0);
        bad.points.insert("C(1)".into(), 0);
        assert!(!is_dispersion(&p, &bad));
    }

    #[test]
    fn candidate_json() {
        let c = DispersionCandidate::from_json(r#"{"a": 1, "family:f": 0}"#).unwrap();
        assert_eq!(c.points["a"], 1);
        assert_eq!(c.families["f"], 0);
    }

    #[test]
    fn circle_strata() {
        let p = circle();
        let chi = DispersionCandidate::from_heights(&thomason_heights(&p).unwrap()).unwrap();
        let s = strata(&p, &chi, 1).unwrap();
        assert_eq!(p.names(&s.at.concrete), vec!["G"]);
        assert_eq!(p.names(&s.below.concrete), vec!["C(1)", "C(2)", "C(3)"]);
        assert_eq!(s.below.families, vec![FamilyPart::All]);
        let s0 = strata(&p, &chi, 0).unwrap();
        assert_eq!(s0.at_or_above, p.all());
    }

    #[test]
    fn strata_reject_non_dispersions() {
        let p = circle();
        let chi = DispersionCandidate::constant(&p, 0);
        assert!(matches!(strata(&p, &chi, 0), Err(PrismError::ChecksFailed(_))));
    }

    #[test]
    fn visibility() {
        let p = circle();
        match weakly_visible(&p, "G").unwrap() {
            Visibility::Visible(u) => assert_eq!(u, p.all()),
            Visibility::NotVisible => panic!("circle generic point should be visible"),
        }
        assert_eq!(
            weakly_visible(&n_star(NStarOrder::Le3), INFINITY).unwrap(),
            Visibility::NotVisible
        );
    }

    #[test]
    fn generalization_closure_of_a_cyclic_point() {
        let g = gen_closure(&circle(), "C(3)").unwrap();
        assert_eq!(g.points(), &["C(3)".to_string(), "G".to_string()]);
        assert!(g.families().is_empty());
        assert!(g.is_noetherian());
        assert!(is_generically_noetherian(&circle()));
    }
}
