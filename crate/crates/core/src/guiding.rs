//! The one-point compactification of the naturals with its four guiding
//! spectral orders, as flagged spaces with a single concrete point `∞`.

use crate::flagged::{FamilySpec, FlaggedPriestley, FlaggedSpec, MemberOrder};

pub const INFINITY: &str = "∞";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NStarOrder {
    /// Equality.
    Le1,
    /// `∞` above every `n`.
    Le2,
    /// Reversed size order on the naturals with `∞` below everything.
    Le3,
    /// `∞` below every `n`; the inverse of `Le2`.
    Le4,
}

impl NStarOrder {
    pub const ALL: [NStarOrder; 4] = [
        NStarOrder::Le1,
        NStarOrder::Le2,
        NStarOrder::Le3,
        NStarOrder::Le4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NStarOrder::Le1 => "nstar-le1",
            NStarOrder::Le2 => "nstar-le2",
            NStarOrder::Le3 => "nstar-le3",
            NStarOrder::Le4 => "nstar-le4",
        }
    }
}

pub fn n_star(order: NStarOrder) -> FlaggedPriestley {
    let inf = vec![INFINITY.to_string()];
    let (member_order, member_lt, member_gt) = match order {
        NStarOrder::Le1 => (MemberOrder::Antichain, vec![], vec![]),
        NStarOrder::Le2 => (MemberOrder::Antichain, inf.clone(), vec![]),
        NStarOrder::Le3 => (MemberOrder::DescendingChain, vec![], inf.clone()),
        NStarOrder::Le4 => (MemberOrder::Antichain, vec![], inf.clone()),
    };
    let spec = FlaggedSpec {
        points: inf,
        order: vec![],
        families: vec![FamilySpec {
            id: "n".into(),
            limit: INFINITY.into(),
            member_order,
            member_lt,
            member_gt,
            samples: (0..4).map(|k| k.to_string()).collect(),
            height_hint: None,
        }],
    };
    FlaggedPriestley::from_spec(&spec).expect("guiding example is well formed")
}
