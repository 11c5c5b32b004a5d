//! Finitely presented countable Priestley spaces.
//!
//! A [`FlaggedPriestley`] has finitely many concrete points plus a finite set
//! of accumulation families. A family stands for an infinite sequence of
//! further points converging to its `limit` (every infinite subset of members
//! converges to it). All members of a family relate to the concrete points in
//! the same way: each member lies strictly below every point of `member_lt`
//! and strictly above every point of `member_gt`. Members of distinct
//! families are pairwise incomparable.
//!
//! Subsets are described symbolically by a concrete part and one
//! [`FamilyPart`] per family. A symbolic set is closed when every family with
//! infinitely many members inside also has its limit inside.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{PrismError, Result};
use crate::order::{FinitePriestley, Order, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MemberOrder {
    /// Pairwise incomparable members.
    Antichain,
    /// `m0 > m1 > m2 > ...`
    DescendingChain,
    /// `m0 < m1 < m2 < ...`; arises as the inverse of a descending chain.
    AscendingChain,
}

impl MemberOrder {
    pub fn reversed(self) -> Self {
        match self {
            MemberOrder::Antichain => MemberOrder::Antichain,
            MemberOrder::DescendingChain => MemberOrder::AscendingChain,
            MemberOrder::AscendingChain => MemberOrder::DescendingChain,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccumulationFamily {
    pub id: String,
    pub limit: usize,
    pub member_order: MemberOrder,
    /// Concrete points strictly above every member.
    pub member_lt: PointSet,
    /// Concrete points strictly below every member.
    pub member_gt: PointSet,
    pub samples: Vec<String>,
    pub height_hint: Option<u32>,
}

/// On-disk form, schema `flagged-priestley/v1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlaggedSpec {
    pub points: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub families: Vec<FamilySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct FamilySpec {
    pub id: String,
    pub limit: String,
    pub member_order: MemberOrder,
    #[serde(default)]
    pub member_lt: Vec<String>,
    #[serde(default)]
    pub member_gt: Vec<String>,
    #[serde(default)]
    pub samples: Vec<String>,
    #[serde(default)]
    pub height_hint: Option<u32>,
}

/// How many members of one family a symbolic set contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyPart {
    Empty,
    /// Any finite set of members (possibly none).
    Finite,
    /// Any cofinite set of members (possibly all).
    Cofinite,
    /// Every member.
    All,
}

impl FamilyPart {
    pub fn is_infinite(self) -> bool {
        matches!(self, FamilyPart::Cofinite | FamilyPart::All)
    }

    pub fn complement(self) -> Self {
        match self {
            FamilyPart::Empty => FamilyPart::All,
            FamilyPart::Finite => FamilyPart::Cofinite,
            FamilyPart::Cofinite => FamilyPart::Finite,
            FamilyPart::All => FamilyPart::Empty,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            FamilyPart::Empty => "empty",
            FamilyPart::Finite => "finite",
            FamilyPart::Cofinite => "cofinite",
            FamilyPart::All => "all",
        }
    }
}

/// A subset of a flagged space: concrete points plus one part per family
/// (indexed like [`FlaggedPriestley::families`]).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolicSet {
    pub concrete: PointSet,
    pub families: Vec<FamilyPart>,
}

impl SymbolicSet {
    pub fn complement(&self, space: &FlaggedPriestley) -> SymbolicSet {
        SymbolicSet {
            concrete: (0..space.len())
                .filter(|p| !self.concrete.contains(p))
                .collect(),
            families: self.families.iter().map(|f| f.complement()).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.concrete.is_empty() && self.families.iter().all(|f| *f == FamilyPart::Empty)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlaggedPriestley {
    points: Vec<String>,
    index: BTreeMap<String, usize>,
    order: Order,
    families: Vec<AccumulationFamily>,
}

impl FlaggedPriestley {
    pub fn from_spec(spec: &FlaggedSpec) -> Result<Self> {
        let mut points = spec.points.clone();
        points.sort();
        let mut index = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(PrismError::Duplicate(p.clone()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| PrismError::UnknownPoint(name.to_string()))
        };
        let mut pairs = spec
            .order
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;

        let mut ids = BTreeSet::new();
        let mut families = Vec::new();
        for f in &spec.families {
            if index.contains_key(&f.id) || !ids.insert(f.id.clone()) {
                return Err(PrismError::Duplicate(f.id.clone()));
            }
            let resolve = |names: &[String]| {
                names.iter().map(|n| lookup(n)).collect::<Result<PointSet>>()
            };
            families.push(AccumulationFamily {
                id: f.id.clone(),
                limit: lookup(&f.limit)?,
                member_order: f.member_order,
                member_lt: resolve(&f.member_lt)?,
                member_gt: resolve(&f.member_gt)?,
                samples: f.samples.clone(),
                height_hint: f.height_hint,
            });
        }
        families.sort_by(|a, b| a.id.cmp(&b.id));

        // Members sit between member_gt and member_lt, so transitivity forces
        // q < p for q in member_gt and p in member_lt. Close until stable.
        let n = points.len();
        let mut order = Order::from_pairs(n, &pairs)?;
        loop {
            let mut grew = false;
            for f in &mut families {
                let lt = order.up_closure(&f.member_lt);
                let gt = order.down_closure(&f.member_gt);
                grew |= lt != f.member_lt || gt != f.member_gt;
                f.member_lt = lt;
                f.member_gt = gt;
                for &q in &f.member_gt {
                    for &p in &f.member_lt {
                        if !order.le(q, p) {
                            pairs.push((q, p));
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
            order = Order::from_pairs(n, &pairs)?;
        }
        for f in &families {
            if let Some(p) = f.member_lt.intersection(&f.member_gt).next() {
                return Err(PrismError::InvalidFamily {
                    family: f.id.clone(),
                    reason: format!("point `{}` is both above and below the members", points[*p]),
                });
            }
        }
        Ok(FlaggedPriestley {
            points,
            index,
            order,
            families,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: FlaggedSpec = serde_json::from_str(text)?;
        FlaggedPriestley::from_spec(&spec)
    }

    pub fn from_finite(p: &FinitePriestley) -> Self {
        let spec = FlaggedSpec {
            points: p.points().to_vec(),
            order: p
                .order()
                .strict_pairs()
                .into_iter()
                .map(|(a, b)| (p.points()[a].clone(), p.points()[b].clone()))
                .collect(),
            families: vec![],
        };
        FlaggedPriestley::from_spec(&spec).expect("a valid poset is a valid flagged space")
    }

    /// Canonical on-disk form: covering relations only, closed member sets.
    pub fn to_spec(&self) -> FlaggedSpec {
        let name = |i: &usize| self.points[*i].clone();
        FlaggedSpec {
            points: self.points.clone(),
            order: self
                .order
                .covers()
                .into_iter()
                .map(|(a, b)| (name(&a), name(&b)))
                .collect(),
            families: self
                .families
                .iter()
                .map(|f| FamilySpec {
                    id: f.id.clone(),
                    limit: name(&f.limit),
                    member_order: f.member_order,
                    member_lt: f.member_lt.iter().map(name).collect(),
                    member_gt: f.member_gt.iter().map(name).collect(),
                    samples: f.samples.clone(),
                    height_hint: f.height_hint,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("spec serializes")
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.families.is_empty()
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn families(&self) -> &[AccumulationFamily] {
        &self.families
    }

    pub fn family(&self, id: &str) -> Option<(usize, &AccumulationFamily)> {
        self.families.iter().enumerate().find(|(_, f)| f.id == id)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| PrismError::UnknownPoint(name.to_string()))
    }

    pub fn names(&self, set: &PointSet) -> Vec<String> {
        set.iter().map(|&i| self.points[i].clone()).collect()
    }

    pub fn all(&self) -> SymbolicSet {
        SymbolicSet {
            concrete: (0..self.len()).collect(),
            families: vec![FamilyPart::All; self.families.len()],
        }
    }

    pub fn none(&self) -> SymbolicSet {
        SymbolicSet {
            concrete: PointSet::new(),
            families: vec![FamilyPart::Empty; self.families.len()],
        }
    }

    /// Reverses the order; `member_lt` and `member_gt` trade places.
    pub fn inverse(&self) -> Self {
        FlaggedPriestley {
            points: self.points.clone(),
            index: self.index.clone(),
            order: self.order.reversed(),
            families: self
                .families
                .iter()
                .map(|f| AccumulationFamily {
                    member_order: f.member_order.reversed(),
                    member_lt: f.member_gt.clone(),
                    member_gt: f.member_lt.clone(),
                    ..f.clone()
                })
                .collect(),
        }
    }

    /// Concrete `p` is minimal: nothing concrete below it and no family's
    /// members below it.
    pub fn is_minimal(&self, p: usize) -> bool {
        !(0..self.len()).any(|q| self.order.lt(q, p))
            && !self.families.iter().any(|f| f.member_lt.contains(&p))
    }

    pub fn is_limit(&self, p: usize) -> bool {
        self.families.iter().any(|f| f.limit == p)
    }

    /// Whether every member of `f` is an isolated minimal point.
    fn members_are_thomason(&self, f: &AccumulationFamily) -> bool {
        f.member_order == MemberOrder::Antichain
            && f.member_gt.is_empty()
            && f.height_hint.unwrap_or(0) == 0
    }

    /// Isolated minimal points: concrete minimal points that are not limits,
    /// plus entire families of isolated minimal members. For an ascending
    /// chain only its bottom member qualifies, reported as `Finite`.
    pub fn thomason_points(&self) -> SymbolicSet {
        let concrete = (0..self.len())
            .filter(|&p| self.is_minimal(p) && !self.is_limit(p))
            .collect();
        let families = self
            .families
            .iter()
            .map(|f| {
                if self.members_are_thomason(f) {
                    FamilyPart::All
                } else if f.member_order == MemberOrder::AscendingChain && f.member_gt.is_empty() {
                    FamilyPart::Finite
                } else {
                    FamilyPart::Empty
                }
            })
            .collect();
        SymbolicSet { concrete, families }
    }

    /// Noetherian iff every family's limit lies above its members; a family
    /// accumulating at a point it is not below yields infinitely many
    /// incomparable maximal points in a closed set.
    pub fn is_noetherian(&self) -> bool {
        self.families.iter().all(|f| f.member_lt.contains(&f.limit))
    }

    /// The subspace on `keep`; families survive when their limit is kept and
    /// `keep_family` accepts them.
    pub fn restrict<F>(&self, keep: &PointSet, keep_family: F) -> FlaggedPriestley
    where
        F: Fn(&AccumulationFamily) -> bool,
    {
        let kept: Vec<usize> = keep.iter().copied().filter(|&p| p < self.len()).collect();
        let remap: BTreeMap<usize, usize> =
            kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let points: Vec<String> = kept.iter().map(|&p| self.points[p].clone()).collect();
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let pairs: Vec<(usize, usize)> = self
            .order
            .strict_pairs()
            .into_iter()
            .filter_map(|(a, b)| Some((*remap.get(&a)?, *remap.get(&b)?)))
            .collect();
        let order = Order::from_pairs(points.len(), &pairs).expect("suborder of a partial order");
        let map_set = |s: &PointSet| s.iter().filter_map(|p| remap.get(p).copied()).collect();
        let families = self
            .families
            .iter()
            .filter(|f| remap.contains_key(&f.limit) && keep_family(f))
            .map(|f| AccumulationFamily {
                limit: remap[&f.limit],
                member_lt: map_set(&f.member_lt),
                member_gt: map_set(&f.member_gt),
                ..f.clone()
            })
            .collect();
        FlaggedPriestley {
            points,
            index,
            order,
            families,
        }
    }

    /// Connected pieces under comparability, with each family tied to its
    /// limit and to every point above or below its members.
    pub fn components(&self) -> Vec<FlaggedPriestley> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        };
        for (a, b) in self.order.strict_pairs() {
            union(&mut parent, a, b);
        }
        for f in &self.families {
            for &p in f.member_lt.iter().chain(f.member_gt.iter()) {
                union(&mut parent, f.limit, p);
            }
        }
        let mut groups: BTreeMap<usize, PointSet> = BTreeMap::new();
        for p in 0..n {
            let r = find(&mut parent, p);
            groups.entry(r).or_default().insert(p);
        }
        groups
            .values()
            .map(|g| self.restrict(g, |_| true))
            .collect()
    }

    /// Up-closure of a concrete point, including families whose members lie above it.
    pub fn up_closure_of(&self, p: usize) -> SymbolicSet {
        SymbolicSet {
            concrete: (0..self.len()).filter(|&q| self.order.le(p, q)).collect(),
            families: self
                .families
                .iter()
                .map(|f| {
                    if f.member_gt.contains(&p) {
                        FamilyPart::All
                    } else {
                        FamilyPart::Empty
                    }
                })
                .collect(),
        }
    }

    pub fn is_down_set(&self, set: &SymbolicSet) -> bool {
        if !self.order.is_down_set(&set.concrete) {
            return false;
        }
        self.families.iter().zip(&set.families).all(|(f, part)| {
            let forced_all = f.member_lt.iter().any(|p| set.concrete.contains(p));
            if forced_all && *part != FamilyPart::All {
                return false;
            }
            // Down-sets of a descending chain are empty or cofinite; of an ascending one, finite or all.
            let shape_ok = !matches!(
                (f.member_order, part),
                (MemberOrder::DescendingChain, FamilyPart::Finite)
                    | (MemberOrder::AscendingChain, FamilyPart::Cofinite)
            );
            shape_ok
                && (*part == FamilyPart::Empty
                    || f.member_gt.iter().all(|q| set.concrete.contains(q)))
        })
    }

    pub fn is_up_set(&self, set: &SymbolicSet) -> bool {
        self.is_down_set(&set.complement(self))
    }

    /// Closed iff each family met infinitely often has its limit inside.
    pub fn is_closed(&self, set: &SymbolicSet) -> bool {
        self.families
            .iter()
            .zip(&set.families)
            .all(|(f, part)| !part.is_infinite() || set.concrete.contains(&f.limit))
    }

    pub fn is_open(&self, set: &SymbolicSet) -> bool {
        self.is_closed(&set.complement(self))
    }

    pub fn is_clopen(&self, set: &SymbolicSet) -> bool {
        self.is_closed(set) && self.is_open(set)
    }

    /// The family part forced on a clopen down-set with concrete part `concrete`,
    /// or `None` if no part works.
    fn clopen_part(&self, f: &AccumulationFamily, concrete: &PointSet) -> Option<FamilyPart> {
        let forced_all = f.member_lt.iter().any(|p| concrete.contains(p));
        let members_allowed = f.member_gt.iter().all(|q| concrete.contains(q));
        if concrete.contains(&f.limit) {
            if !members_allowed {
                None
            } else if forced_all || f.member_order == MemberOrder::AscendingChain {
                Some(FamilyPart::All)
            } else {
                Some(FamilyPart::Cofinite)
            }
        } else if forced_all {
            None
        } else if !members_allowed || f.member_order == MemberOrder::DescendingChain {
            Some(FamilyPart::Empty)
        } else {
            Some(FamilyPart::Finite)
        }
    }

    /// Shape classes of clopen down-sets: one class per admissible concrete
    /// down-set, with the family parts it forces.
    pub fn clopen_down_sets(&self) -> Vec<SymbolicSet> {
        self.order
            .down_sets()
            .into_iter()
            .filter_map(|concrete| {
                let families = self
                    .families
                    .iter()
                    .map(|f| self.clopen_part(f, &concrete))
                    .collect::<Option<Vec<_>>>()?;
                Some(SymbolicSet { concrete, families })
            })
            .collect()
    }

    /// Smallest clopen down-set containing `seed`, if one exists. Every step
    /// adds only what a clopen down-set containing the current set must hold.
    pub fn clopen_down_closure(&self, seed: &SymbolicSet) -> Option<SymbolicSet> {
        let mut concrete = seed.concrete.clone();
        let mut parts = seed.families.clone();
        loop {
            let before = (concrete.clone(), parts.clone());
            concrete = self.order.down_closure(&concrete);
            for (f, part) in self.families.iter().zip(parts.iter_mut()) {
                let forced_all = f.member_lt.iter().any(|p| concrete.contains(p));
                if part.is_infinite() || forced_all || concrete.contains(&f.limit) {
                    *part = FamilyPart::All;
                }
                if *part != FamilyPart::Empty {
                    concrete.extend(f.member_gt.iter().copied());
                }
                if part.is_infinite() {
                    concrete.insert(f.limit);
                }
            }
            if (concrete.clone(), parts.clone()) == before {
                break;
            }
        }
        let set = SymbolicSet {
            concrete,
            families: parts,
        };
        (self.is_down_set(&set) && self.is_clopen(&set)).then_some(set)
    }

    /// Materializes `depth` members per family as named points `<id>#k`.
    pub fn finite_model(&self, depth: usize) -> FinitePriestley {
        let mut points = self.points.clone();
        let mut pairs: Vec<(String, String)> = self
            .order
            .strict_pairs()
            .into_iter()
            .map(|(a, b)| (self.points[a].clone(), self.points[b].clone()))
            .collect();
        for f in &self.families {
            for k in 0..depth {
                let m = member_name(&f.id, k);
                points.push(m.clone());
                for &p in &f.member_lt {
                    pairs.push((m.clone(), self.points[p].clone()));
                }
                for &q in &f.member_gt {
                    pairs.push((self.points[q].clone(), m.clone()));
                }
                if k > 0 {
                    let prev = member_name(&f.id, k - 1);
                    match f.member_order {
                        MemberOrder::Antichain => {}
                        MemberOrder::DescendingChain => pairs.push((m.clone(), prev)),
                        MemberOrder::AscendingChain => pairs.push((prev, m.clone())),
                    }
                }
            }
        }
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let pts: Vec<&str> = points.iter().map(|s| s.as_str()).collect();
        FinitePriestley::new(&pts, &refs).expect("finite model of a valid flagged space")
    }

    /// A representative of `set` in [`Self::finite_model`]: finite parts take
    /// the bottom member of a chain or the first member of an antichain,
    /// cofinite parts drop the first member.
    pub fn instantiate(&self, set: &SymbolicSet, depth: usize) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = set.concrete.iter().map(|&p| self.points[p].clone()).collect();
        for (f, part) in self.families.iter().zip(&set.families) {
            let ks: Vec<usize> = match part {
                FamilyPart::Empty => vec![],
                FamilyPart::All => (0..depth).collect(),
                FamilyPart::Finite => (0..depth.min(1)).collect(),
                FamilyPart::Cofinite => (1..depth).collect(),
            };
            out.extend(ks.into_iter().map(|k| member_name(&f.id, k)));
        }
        out
    }

    pub fn describe(&self, set: &SymbolicSet) -> String {
        let mut parts: Vec<String> = vec![format!("{{{}}}", self.names(&set.concrete).join(", "))];
        for (f, part) in self.families.iter().zip(&set.families) {
            if *part != FamilyPart::Empty {
                parts.push(format!("{}:{}", f.id, part.as_str()));
            }
        }
        parts.join(" + ")
    }
}

pub fn member_name(family: &str, k: usize) -> String {
    format!("{family}#{k}")
}

impl fmt::Display for FlaggedPriestley {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "points: {}", self.points.join(", "))?;
        for (a, b) in self.order.covers() {
            writeln!(f, "  {} < {}", self.points[a], self.points[b])?;
        }
        for fam in &self.families {
            writeln!(
                f,
                "family {} -> {} ({:?}; below [{}]; above [{}]; samples [{}]{})",
                fam.id,
                self.points[fam.limit],
                fam.member_order,
                self.names(&fam.member_lt).join(", "),
                self.names(&fam.member_gt).join(", "),
                fam.samples.join(", "),
                fam.height_hint
                    .map(|h| format!("; height {h}"))
                    .unwrap_or_default()
            )?;
        }
        Ok(())
    }
}
