//! Subgroup-space models for a small catalog of compact Lie groups.
//!
//! Each group exposes its conjugacy classes of closed subgroups as
//! [`SubgroupKey`]s, the cotoral order between them, Weyl group data, the
//! representation-theoretic height, and a finite [`Snapshot`] of its prism as
//! a [`FlaggedPriestley`] space.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;

use crate::dispersion::{DispersionCandidate, Height};
use crate::error::{PrismError, Result};
use crate::flagged::{FamilySpec, FlaggedPriestley, FlaggedSpec, MemberOrder};
use crate::lattice::Lattice;
use crate::qlinalg::{self, Subspace};
use crate::rep::{self, IntegerAction, RationalAction};

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct FiniteClass {
    pub name: String,
    pub order: u64,
    pub weyl_order: u64,
}

/// A finite group given by its conjugacy classes of subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteGroup {
    pub name: String,
    pub classes: Vec<FiniteClass>,
    #[serde(default)]
    pub inclusions: Vec<(String, String)>,
}

impl FiniteGroup {
    pub fn from_json(text: &str) -> Result<Self> {
        let g: FiniteGroup = serde_json::from_str(text)?;
        g.validate()?;
        Ok(g)
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            name: "1".into(),
            classes: vec![FiniteClass {
                name: "1".into(),
                order: 1,
                weyl_order: 1,
            }],
            inclusions: vec![],
        }
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.classes {
            if !seen.insert(c.name.as_str()) {
                return Err(PrismError::Duplicate(c.name.clone()));
            }
            if c.order == 0 || c.weyl_order == 0 {
                return Err(PrismError::InvalidArgument(format!("class {} has order 0", c.name)));
            }
        }
        if self.classes.is_empty() {
            return Err(PrismError::InvalidArgument("no subgroup classes".into()));
        }
        for (a, b) in &self.inclusions {
            for x in [a, b] {
                if !seen.contains(x.as_str()) {
                    return Err(PrismError::UnknownPoint(x.clone()));
                }
            }
        }
        Ok(())
    }
}

/// A torus extended by a finite group acting through integer matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToralSemidirect {
    pub name: String,
    pub action: IntegerAction,
    /// Words in the generator indices, each of which must multiply to the identity.
    pub relations: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SemidirectSpec {
    rank: usize,
    generators: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    relations: Vec<Vec<usize>>,
}

impl ToralSemidirect {
    pub fn new(name: &str, action: IntegerAction, relations: Vec<Vec<usize>>) -> Result<Self> {
        if action.dim() > 3 {
            return Err(PrismError::DimTooLarge(action.dim()));
        }
        let gens: Vec<_> = action.generators().iter().map(|g| qlinalg::from_int(g)).collect();
        let id = qlinalg::identity(action.dim());
        for (k, word) in relations.iter().enumerate() {
            let mut m = id.clone();
            for &i in word {
                let g = gens
                    .get(i)
                    .ok_or_else(|| PrismError::InvalidAction(format!("relation {k} uses generator {i}")))?;
                m = qlinalg::mul(&m, g);
            }
            if m != id {
                return Err(PrismError::InvalidAction(format!("relation {k} does not hold")));
            }
        }
        Ok(ToralSemidirect {
            name: name.into(),
            action,
            relations,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SemidirectSpec = serde_json::from_str(text)?;
        ToralSemidirect::new("semidirect", IntegerAction::new(spec.rank, spec.generators)?, spec.relations)
    }

    /// The normalizer of the maximal torus of SU(3): Σ₃ acting on the A₂ lattice.
    pub fn nsu3t() -> Self {
        let (s1, s2) = (0, 1);
        ToralSemidirect::new(
            "nsu3t",
            rep::a2_weyl_action(),
            vec![vec![s1, s1], vec![s2, s2], vec![s1, s2, s1, s2, s1, s2]],
        )
        .expect("Coxeter relations of A2")
    }

    pub fn rank(&self) -> usize {
        self.action.dim()
    }

    fn acts_trivially(&self) -> bool {
        let id = qlinalg::identity(self.rank());
        self.action
            .generators()
            .iter()
            .all(|g| qlinalg::from_int(g) == id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupId {
    Finite(FiniteGroup),
    Circle,
    Torus(usize),
    O2,
    SO3,
    ToralSemidirect(ToralSemidirect),
}

impl GroupId {
    pub fn torus(rank: usize) -> Result<Self> {
        if (1..=3).contains(&rank) {
            Ok(GroupId::Torus(rank))
        } else {
            Err(PrismError::InvalidArgument(format!("torus rank {rank} outside 1..=3")))
        }
    }

    pub fn nsu3t() -> Self {
        GroupId::ToralSemidirect(ToralSemidirect::nsu3t())
    }

    pub fn name(&self) -> String {
        match self {
            GroupId::Finite(g) => format!("finite:{}", g.name),
            GroupId::Circle => "circle".into(),
            GroupId::Torus(r) => format!("torus:{r}"),
            GroupId::O2 => "o2".into(),
            GroupId::SO3 => "so3".into(),
            GroupId::ToralSemidirect(s) => s.name.clone(),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A conjugacy class of closed subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupKey {
    Cyc(u32),
    /// Dihedral group of order `2n`.
    Dih(u32),
    SO2,
    O2,
    A4,
    S4,
    A5,
    /// The Klein four-group.
    Klein,
    /// The whole group.
    Full,
    /// Torus subgroup `Ann(L)`.
    Lattice(Lattice),
    /// Index into a finite group's class list.
    Class(usize),
    /// Full subgroup of a toral semidirect product with the given Lie algebra.
    Section(Subspace),
}

impl SubgroupKey {
    pub fn display(&self, g: &GroupId) -> String {
        match self {
            SubgroupKey::Cyc(n) => format!("C({n})"),
            SubgroupKey::Dih(n) => format!("D({})", 2 * n),
            SubgroupKey::SO2 => "SO2".into(),
            SubgroupKey::O2 => "O2".into(),
            SubgroupKey::A4 => "A4".into(),
            SubgroupKey::S4 => "S4".into(),
            SubgroupKey::A5 => "A5".into(),
            SubgroupKey::Klein => "V4".into(),
            SubgroupKey::Full => "G".into(),
            SubgroupKey::Lattice(l) => l.to_string(),
            SubgroupKey::Class(i) => match g {
                GroupId::Finite(fg) => fg.classes.get(*i).map_or_else(|| format!("#{i}"), |c| c.name.clone()),
                _ => format!("#{i}"),
            },
            SubgroupKey::Section(s) => {
                let rows: Vec<String> = s
                    .basis()
                    .iter()
                    .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                format!("S[{}]", rows.join("; "))
            }
        }
    }
}

fn mismatch(g: &GroupId, k: &SubgroupKey) -> PrismError {
    PrismError::KeyMismatch {
        group: g.name(),
        key: format!("{k:?}"),
    }
}

/// Checks that `k` names a subgroup class of `g` and returns its canonical form.
pub fn canonical_key(g: &GroupId, k: &SubgroupKey) -> Result<SubgroupKey> {
    use SubgroupKey as K;
    let ok = |key: SubgroupKey| Ok(key);
    match (g, k) {
        (GroupId::Circle, K::Cyc(n)) if *n >= 1 => ok(k.clone()),
        (GroupId::Circle, K::Full) => ok(K::Full),
        (GroupId::O2, K::Cyc(n) | K::Dih(n)) if *n >= 1 => ok(k.clone()),
        (GroupId::O2, K::SO2 | K::Full) => ok(k.clone()),
        // The reflection group D₂ is conjugate to C₂ inside SO(3), and D₄ is the Klein group.
        (GroupId::SO3, K::Dih(1)) => ok(K::Cyc(2)),
        (GroupId::SO3, K::Dih(2)) => ok(K::Klein),
        (GroupId::SO3, K::Cyc(n)) if *n >= 1 => ok(k.clone()),
        (GroupId::SO3, K::Dih(n)) if *n >= 3 => ok(k.clone()),
        (GroupId::SO3, K::SO2 | K::O2 | K::A4 | K::S4 | K::A5 | K::Klein | K::Full) => ok(k.clone()),
        (GroupId::Torus(r), K::Full) => ok(K::Lattice(Lattice::zero(*r))),
        (GroupId::Torus(r), K::Lattice(l)) if l.ambient() == *r => ok(k.clone()),
        (GroupId::Finite(fg), K::Class(i)) if *i < fg.classes.len() => ok(k.clone()),
        (GroupId::ToralSemidirect(_), K::Full) => ok(K::Full),
        (GroupId::ToralSemidirect(s), K::Section(ls)) if ls.ambient() == s.rank() => {
            let r = RationalAction::from(&s.action);
            if r.generators.iter().any(|m| !ls.is_invariant(m)) {
                return Err(mismatch(g, k));
            }
            if ls.dim() == s.rank() {
                ok(K::Full)
            } else {
                ok(k.clone())
            }
        }
        _ => Err(mismatch(g, k)),
    }
}

/// Dimension of the subgroup.
pub fn dim(g: &GroupId, k: &SubgroupKey) -> Result<u32> {
    use SubgroupKey as K;
    Ok(match canonical_key(g, k)? {
        K::Cyc(_) | K::Dih(_) | K::A4 | K::S4 | K::A5 | K::Klein | K::Class(_) => 0,
        K::SO2 | K::O2 => 1,
        K::Full => match g {
            GroupId::Circle | GroupId::O2 => 1,
            GroupId::SO3 => 3,
            GroupId::ToralSemidirect(s) => s.rank() as u32,
            _ => unreachable!("canonical keys"),
        },
        K::Lattice(l) => (l.ambient() - l.rank()) as u32,
        K::Section(ls) => ls.dim() as u32,
    })
}

/// Rank of a maximal torus of the subgroup.
pub fn rank(g: &GroupId, k: &SubgroupKey) -> Result<u32> {
    let k = canonical_key(g, k)?;
    if matches!(g, GroupId::SO3) && k == SubgroupKey::Full {
        return Ok(1);
    }
    dim(g, &k)
}

/// Cotoral order: `K ⪯ H` when `K` is normal in `H` with torus quotient.
pub fn cotoral_le(g: &GroupId, k: &SubgroupKey, h: &SubgroupKey) -> Result<bool> {
    use SubgroupKey as K;
    let (k, h) = (canonical_key(g, k)?, canonical_key(g, h)?);
    if k == h {
        return Ok(true);
    }
    Ok(match (g, &k, &h) {
        (GroupId::Circle, K::Cyc(_), K::Full) => true,
        (GroupId::O2 | GroupId::SO3, K::Cyc(_), K::SO2) => true,
        (GroupId::Torus(_), K::Lattice(lk), K::Lattice(lh)) => lh.is_saturated_in(lk),
        (GroupId::ToralSemidirect(_), ..) => {
            return Err(PrismError::Unsupported(
                "cotoral order between sections of a toral semidirect product".into(),
            ))
        }
        _ => false,
    })
}

/// The action of the component group of `H` on the rational first homology
/// of the identity component of the centre of its identity component, or
/// `None` when that homology vanishes.
pub fn height_action(g: &GroupId, k: &SubgroupKey) -> Result<Option<RationalAction>> {
    use SubgroupKey as K;
    let trivial = |d: usize| Some(RationalAction::from(&IntegerAction::trivial(d)));
    let sign = || Some(RationalAction::from(&IntegerAction::new(1, vec![vec![vec![-1]]]).expect("sign")));
    Ok(match (g, canonical_key(g, k)?) {
        (GroupId::Circle, K::Full) => trivial(1),
        (GroupId::O2 | GroupId::SO3, K::SO2) => trivial(1),
        (GroupId::O2, K::Full) | (GroupId::SO3, K::O2) => sign(),
        (GroupId::Torus(_), K::Lattice(l)) => {
            let d = l.ambient() - l.rank();
            if d == 0 {
                None
            } else {
                trivial(d)
            }
        }
        (GroupId::ToralSemidirect(s), K::Full) => Some(RationalAction::from(&s.action)),
        (GroupId::ToralSemidirect(s), K::Section(ls)) => {
            if ls.dim() == 0 {
                None
            } else {
                Some(RationalAction::from(&s.action).restrict(&ls)?)
            }
        }
        // Finite subgroups, and subgroups with semisimple identity component.
        _ => None,
    })
}

/// Number of simple summands of [`height_action`].
pub fn height_rep(g: &GroupId, k: &SubgroupKey) -> Result<u32> {
    match height_action(g, k)? {
        Some(a) => Ok(a.decompose()?.simple_summands() as u32),
        None => Ok(0),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityComponent {
    Trivial,
    Circle,
    Torus(usize),
    SO3,
}

impl IdentityComponent {
    fn torus(r: usize) -> Self {
        match r {
            0 => IdentityComponent::Trivial,
            1 => IdentityComponent::Circle,
            r => IdentityComponent::Torus(r),
        }
    }
}

impl fmt::Display for IdentityComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityComponent::Trivial => f.write_str("1"),
            IdentityComponent::Circle => f.write_str("SO(2)"),
            IdentityComponent::Torus(r) => write!(f, "T{}", superscript(*r as u64)),
            IdentityComponent::SO3 => f.write_str("SO(3)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGroup {
    pub name: String,
    pub order: u64,
}

impl ComponentGroup {
    fn of_order(order: u64) -> Self {
        let name = match order {
            1 => "1".to_string(),
            2 => "C₂".to_string(),
            n => format!("W{}", subscript(n)),
        };
        ComponentGroup { name, order }
    }

    fn sigma3() -> Self {
        ComponentGroup {
            name: "Σ₃".into(),
            order: 6,
        }
    }
}

/// The Weyl group `W_G(H) = N_G(H)/H` as identity component and component group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylData {
    pub identity_component: IdentityComponent,
    pub component_group: ComponentGroup,
}

pub fn weyl_data(g: &GroupId, k: &SubgroupKey) -> Result<WeylData> {
    use IdentityComponent as I;
    use SubgroupKey as K;
    let w = |identity_component, order| WeylData {
        identity_component,
        component_group: ComponentGroup::of_order(order),
    };
    Ok(match (g, canonical_key(g, k)?) {
        (GroupId::Circle, K::Cyc(_)) => w(I::Circle, 1),
        (GroupId::Circle, K::Full) => w(I::Trivial, 1),
        (GroupId::O2, K::Cyc(_)) => w(I::Circle, 2),
        (GroupId::O2, K::SO2 | K::Dih(_)) => w(I::Trivial, 2),
        (GroupId::O2, K::Full) => w(I::Trivial, 1),
        (GroupId::SO3, K::Cyc(1)) => w(I::SO3, 1),
        (GroupId::SO3, K::Cyc(_)) => w(I::Circle, 2),
        (GroupId::SO3, K::Dih(_) | K::SO2 | K::A4) => w(I::Trivial, 2),
        (GroupId::SO3, K::Klein) => WeylData {
            identity_component: I::Trivial,
            component_group: ComponentGroup::sigma3(),
        },
        (GroupId::SO3, K::O2 | K::S4 | K::A5 | K::Full) => w(I::Trivial, 1),
        // Tori are abelian, so W = T/H is a torus of dimension rank(L).
        (GroupId::Torus(_), K::Lattice(l)) => w(I::torus(l.rank()), 1),
        (GroupId::Finite(fg), K::Class(i)) => w(I::Trivial, fg.classes[i].weyl_order),
        (GroupId::ToralSemidirect(_), _) => {
            return Err(PrismError::Unsupported("Weyl data of a toral semidirect product".into()))
        }
        (_, key) => return Err(mismatch(g, &key)),
    })
}

pub fn has_finite_weyl(g: &GroupId, k: &SubgroupKey) -> Result<bool> {
    match (g, canonical_key(g, k)?) {
        (GroupId::ToralSemidirect(s), SubgroupKey::Full) => {
            rep::finite_weyl_criterion(&s.action, &Subspace::full(s.rank()))
        }
        (GroupId::ToralSemidirect(s), SubgroupKey::Section(ls)) => rep::finite_weyl_criterion(&s.action, &ls),
        _ => Ok(weyl_data(g, k)?.identity_component == IdentityComponent::Trivial),
    }
}

/// Whether only finitely many conjugacy classes have finite Weyl group, which
/// happens exactly when the component group acts trivially on the maximal torus.
pub fn phi_is_finite(g: &GroupId) -> bool {
    match g {
        GroupId::Finite(_) | GroupId::Circle | GroupId::Torus(_) => true,
        GroupId::O2 | GroupId::SO3 => false,
        GroupId::ToralSemidirect(s) => s.acts_trivially(),
    }
}

/// Rank of the rational Burnside ring: the number of conjugacy classes with
/// finite Weyl group.
pub fn burnside_rank(g: &GroupId) -> Height {
    if !phi_is_finite(g) {
        return Height::Infinite;
    }
    match g {
        GroupId::Finite(fg) => Height::Finite(fg.classes.len() as u32),
        // Only the whole torus has finite Weyl group.
        _ => Height::Finite(1),
    }
}

pub fn spectrum_is_noetherian(g: &GroupId) -> bool {
    phi_is_finite(g)
}

/// A finite presentation of the prism of a catalog group, truncated at a
/// complexity bound.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub group: GroupId,
    pub bound: u32,
    pub space: FlaggedPriestley,
    /// Subgroup key of each concrete point, by point name.
    pub keys: BTreeMap<String, SubgroupKey>,
    /// Common dimension and rank of the members of each family.
    pub family_dims: BTreeMap<String, (u32, u32)>,
    /// Clopen pieces closed upward and downward, by point names.
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub name: String,
    pub points: Vec<String>,
    pub families: Vec<String>,
}

struct Builder<'a> {
    group: &'a GroupId,
    keys: Vec<SubgroupKey>,
    families: Vec<(FamilySpec, u32, u32)>,
}

impl<'a> Builder<'a> {
    fn name(&self, k: &SubgroupKey) -> String {
        k.display(self.group)
    }

    #[allow(clippy::too_many_arguments)]
    fn family(
        &mut self,
        id: &str,
        limit: &SubgroupKey,
        member_lt: Vec<String>,
        member_gt: Vec<String>,
        samples: Vec<String>,
        hint: Option<u32>,
        dim_rank: (u32, u32),
    ) {
        let spec = FamilySpec {
            id: id.into(),
            limit: self.name(limit),
            member_order: MemberOrder::Antichain,
            member_lt,
            member_gt,
            samples,
            height_hint: hint,
        };
        self.families.push((spec, dim_rank.0, dim_rank.1));
    }

    fn build(self, bound: u32, pieces: Vec<Piece>) -> Result<Snapshot> {
        let names: Vec<String> = self.keys.iter().map(|k| self.name(k)).collect();
        let mut order = Vec::new();
        for a in &self.keys {
            for b in &self.keys {
                if a != b && cotoral_le(self.group, a, b)? {
                    order.push((self.name(a), self.name(b)));
                }
            }
        }
        let spec = FlaggedSpec {
            points: names.clone(),
            order,
            families: self.families.iter().map(|(f, ..)| f.clone()).collect(),
        };
        Ok(Snapshot {
            group: self.group.clone(),
            bound,
            space: FlaggedPriestley::from_spec(&spec)?,
            keys: names.into_iter().zip(self.keys).collect(),
            family_dims: self
                .families
                .into_iter()
                .map(|(f, d, r)| (f.id, (d, r)))
                .collect(),
            pieces,
        })
    }
}

fn samples(f: impl Fn(u32) -> String, from: u32) -> Vec<String> {
    (from..from + 3).map(f).collect()
}

/// The snapshot of `g`: all keys of complexity at most `bound`, the
/// positive-height keys, and one family per infinite accumulation.
pub fn flagged_snapshot(g: &GroupId, bound: u32) -> Result<Snapshot> {
    use SubgroupKey as K;
    if bound == 0 {
        return Err(PrismError::InvalidArgument("bound must be at least 1".into()));
    }
    let mut b = Builder {
        group: g,
        keys: vec![],
        families: vec![],
    };
    let cyc: Vec<SubgroupKey> = (1..=bound).map(K::Cyc).collect();
    let names = |keys: &[SubgroupKey]| keys.iter().map(|k| k.display(g)).collect::<Vec<_>>();
    let c_samples = samples(|n| format!("C({n})"), bound + 1);
    let pieces = match g {
        GroupId::Circle => {
            b.keys.extend(cyc.iter().cloned());
            b.keys.push(K::Full);
            b.family("C", &K::Full, vec!["G".into()], vec![], c_samples, None, (0, 0));
            vec![]
        }
        GroupId::O2 => {
            let dih: Vec<SubgroupKey> = (1..=bound).map(K::Dih).collect();
            b.keys.extend(cyc.iter().cloned());
            b.keys.push(K::SO2);
            b.keys.extend(dih.iter().cloned());
            b.keys.push(K::Full);
            b.family("C", &K::SO2, vec!["SO2".into()], vec![], c_samples, None, (0, 0));
            let d_samples = samples(|n| format!("D({})", 2 * n), bound + 1);
            b.family("D", &K::Full, vec![], vec![], d_samples, None, (0, 0));
            vec![
                piece("cyclic", [names(&cyc), vec!["SO2".into()]].concat(), &["C"]),
                piece("dihedral", [names(&dih), vec!["G".into()]].concat(), &["D"]),
            ]
        }
        GroupId::SO3 => {
            let dih: Vec<SubgroupKey> = (3..=bound).map(K::Dih).collect();
            b.keys.extend(cyc.iter().cloned());
            b.keys.extend(dih.iter().cloned());
            b.keys.extend([K::SO2, K::O2, K::A4, K::S4, K::A5, K::Klein, K::Full]);
            b.family("C", &K::SO2, vec!["SO2".into()], vec![], c_samples, None, (0, 0));
            let d_samples = samples(|n| format!("D({})", 2 * n), (bound + 1).max(3));
            b.family("D", &K::O2, vec![], vec![], d_samples, None, (0, 0));
            let mut pieces = vec![
                piece("cyclic", [names(&cyc), vec!["SO2".into()]].concat(), &["C"]),
                piece("dihedral", [names(&dih), vec!["O2".into()]].concat(), &["D"]),
            ];
            for k in [K::A4, K::S4, K::A5, K::Klein, K::Full] {
                pieces.push(piece(&k.display(g), vec![k.display(g)], &[]));
            }
            pieces
        }
        GroupId::Torus(r) => {
            let r = *r;
            b.keys = Lattice::enumerate(r, bound as i64)
                .into_iter()
                .map(K::Lattice)
                .collect();
            let trivial = K::Lattice(Lattice::full(r));
            let keys = b.keys.clone();
            for h in &keys {
                let d = dim(g, h)?;
                let above: Vec<String> = keys
                    .iter()
                    .filter(|x| cotoral_le(g, h, x).unwrap_or(false))
                    .map(|x| x.display(g))
                    .collect();
                let connected = cotoral_le(g, &trivial, h)?;
                for k in 0..d {
                    let gt = if k >= 1 && connected {
                        vec![trivial.display(g)]
                    } else {
                        vec![]
                    };
                    let id = format!("{k}@{}", h.display(g));
                    let sample = |i: u32| format!("{id}#{i}");
                    b.family(
                        &id,
                        h,
                        above.clone(),
                        gt,
                        samples(sample, 0),
                        (k >= 1).then_some(k),
                        (k, k),
                    );
                }
            }
            vec![]
        }
        GroupId::Finite(fg) => {
            b.keys = (0..fg.classes.len()).map(K::Class).collect();
            vec![]
        }
        GroupId::ToralSemidirect(_) => {
            return Err(PrismError::Unsupported(
                "subgroup enumeration for a toral semidirect product".into(),
            ))
        }
    };
    b.build(bound, pieces)
}

fn piece(name: &str, points: Vec<String>, families: &[&str]) -> Piece {
    let mut points = points;
    points.sort();
    Piece {
        name: name.into(),
        points,
        families: families.iter().map(|s| s.to_string()).collect(),
    }
}

impl Snapshot {
    pub fn key(&self, point: &str) -> Option<&SubgroupKey> {
        self.keys.get(point)
    }

    fn candidate(&self, point: impl Fn(&SubgroupKey) -> Result<u32>, fam: impl Fn((u32, u32)) -> u32) -> Result<DispersionCandidate> {
        let mut c = DispersionCandidate::default();
        for (name, k) in &self.keys {
            c.points.insert(name.clone(), point(k)?);
        }
        for (id, dr) in &self.family_dims {
            c.families.insert(id.clone(), fam(*dr));
        }
        Ok(c)
    }

    /// The dimension of subgroups as a candidate dispersion.
    pub fn dimension_candidate(&self) -> Result<DispersionCandidate> {
        self.candidate(|k| dim(&self.group, k), |(d, _)| d)
    }

    /// The rank of subgroups as a candidate dispersion.
    pub fn rank_candidate(&self) -> Result<DispersionCandidate> {
        self.candidate(|k| rank(&self.group, k), |(_, r)| r)
    }

    /// The sub-snapshot of one piece.
    pub fn piece_space(&self, piece: &Piece) -> Result<FlaggedPriestley> {
        let keep = piece
            .points
            .iter()
            .map(|p| self.space.index_of(p))
            .collect::<Result<_>>()?;
        Ok(self.space.restrict(&keep, |f| piece.families.contains(&f.id)))
    }
}

/// Label of the local factor at a point: `KEY ↦ MODEL`, where the model is
/// `D(ℚ)`, `D(ℚ[W])`, `Λ_I D(H^*(B N))` or `Λ_I D(H^*(B N)[W])` for a Weyl
/// group with identity component `N` and component group `W`.
pub fn factor_label(g: &GroupId, k: &SubgroupKey) -> Result<String> {
    let w = weyl_data(g, k)?;
    let twist = |inner: String| {
        if w.component_group.order == 1 {
            inner
        } else {
            format!("{inner}[{}]", w.component_group.name)
        }
    };
    let model = match w.identity_component {
        IdentityComponent::Trivial => format!("D({})", twist("ℚ".into())),
        n => format!("Λ_I D({})", twist(format!("H^*(B {n})"))),
    };
    Ok(format!("{} ↦ {model}", k.display(g)))
}

/// Marker label standing for the infinitely many factors of a family.
pub fn family_label(id: &str) -> String {
    format!("⋯ (family {id})")
}

/// Groups exercised by the acceptance suite.
pub fn catalog() -> Vec<GroupId> {
    vec![
        GroupId::Finite(FiniteGroup::trivial()),
        GroupId::Finite(symmetric3()),
        GroupId::Circle,
        GroupId::Torus(1),
        GroupId::Torus(2),
        GroupId::O2,
        GroupId::SO3,
        GroupId::nsu3t(),
    ]
}

/// The symmetric group on three letters with its four subgroup classes.
pub fn symmetric3() -> FiniteGroup {
    let class = |name: &str, order, weyl_order| FiniteClass {
        name: name.into(),
        order,
        weyl_order,
    };
    FiniteGroup {
        name: "S3".into(),
        classes: vec![class("1", 1, 6), class("C2", 2, 1), class("C3", 3, 2), class("S3", 6, 1)],
        inclusions: vec![
            ("1".into(), "C2".into()),
            ("1".into(), "C3".into()),
            ("C2".into(), "S3".into()),
            ("C3".into(), "S3".into()),
        ],
    }
}

fn digits(n: u64, table: &[char; 10]) -> String {
    n.to_string()
        .chars()
        .map(|c| table[c.to_digit(10).expect("digit") as usize])
        .collect()
}

fn subscript(n: u64) -> String {
    digits(n, &['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'])
}

fn superscript(n: u64) -> String {
    digits(n, &['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::thomason_heights;

    fn lat(rows: &[&[i64]]) -> SubgroupKey {
        SubgroupKey::Lattice(Lattice::span(2, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()))
    }

    #[test]
    fn cotoral_examples() {
        assert!(cotoral_le(&GroupId::Circle, &SubgroupKey::Cyc(6), &SubgroupKey::Full).unwrap());
        assert!(!cotoral_le(&GroupId::O2, &SubgroupKey::Dih(3), &SubgroupKey::Full).unwrap());
        let t2 = GroupId::Torus(2);
        assert!(!cotoral_le(&t2, &lat(&[&[1, 0]]), &lat(&[&[2, 0]])).unwrap());
        assert!(cotoral_le(&t2, &lat(&[&[1, 0], &[0, 1]]), &lat(&[&[1, 0]])).unwrap());
    }

    #[test]
    fn key_mismatch() {
        let err = cotoral_le(&GroupId::Circle, &SubgroupKey::SO2, &SubgroupKey::Full).unwrap_err();
        assert_eq!(err.name(), "KeyMismatch");
        assert!(canonical_key(&GroupId::SO3, &SubgroupKey::Dih(1)).unwrap() == SubgroupKey::Cyc(2));
    }

    #[test]
    fn heights_from_representations() {
        assert_eq!(height_rep(&GroupId::SO3, &SubgroupKey::Full).unwrap(), 0);
        assert_eq!(height_rep(&GroupId::Torus(2), &SubgroupKey::Full).unwrap(), 2);
        assert_eq!(height_rep(&GroupId::O2, &SubgroupKey::SO2).unwrap(), 1);
        assert_eq!(height_rep(&GroupId::nsu3t(), &SubgroupKey::Full).unwrap(), 1);
    }

    #[test]
    fn weyl_examples() {
        let d = weyl_data(&GroupId::O2, &SubgroupKey::Cyc(5)).unwrap();
        assert_eq!(d.identity_component, IdentityComponent::Circle);
        assert_eq!(d.component_group.order, 2);
        let d = weyl_data(&GroupId::SO3, &SubgroupKey::Cyc(1)).unwrap();
        assert_eq!(d.identity_component, IdentityComponent::SO3);
        let d = weyl_data(&GroupId::SO3, &SubgroupKey::Klein).unwrap();
        assert_eq!(d.component_group.order, 6);
        assert!(has_finite_weyl(&GroupId::O2, &SubgroupKey::Dih(4)).unwrap());
    }

    #[test]
    fn circle_snapshot() {
        let s = flagged_snapshot(&GroupId::Circle, 3).unwrap();
        assert_eq!(s.space.points(), &["C(1)", "C(2)", "C(3)", "G"]);
        assert_eq!(s.space.families().len(), 1);
        let h = thomason_heights(&s.space).unwrap();
        assert_eq!(h.get("G"), Some(Height::Finite(1)));
    }

    #[test]
    fn labels() {
        assert_eq!(
            factor_label(&GroupId::O2, &SubgroupKey::Cyc(5)).unwrap(),
            "C(5) ↦ Λ_I D(H^*(B SO(2))[C₂])"
        );
        assert_eq!(factor_label(&GroupId::SO3, &SubgroupKey::Klein).unwrap(), "V4 ↦ D(ℚ[Σ₃])");
        assert_eq!(factor_label(&GroupId::Circle, &SubgroupKey::Full).unwrap(), "G ↦ D(ℚ)");
        assert_eq!(
            factor_label(&GroupId::Torus(2), &lat(&[&[1, 0], &[0, 1]])).unwrap(),
            "L[1 0; 0 1] ↦ Λ_I D(H^*(B T²))"
        );
    }

    #[test]
    fn semidirect_validation() {
        let bad = ToralSemidirect::new("x", rep::a2_weyl_action(), vec![vec![0, 1]]);
        assert!(matches!(bad, Err(PrismError::InvalidAction(_))));
        let json = r#"{"rank":1,"generators":[[[-1]]],"relations":[[0,0]]}"#;
        let s = ToralSemidirect::from_json(json).unwrap();
        assert!(!phi_is_finite(&GroupId::ToralSemidirect(s)));
    }
}
