//! Finite groups acting on lattices through integer matrices, and the
//! rational representation theory needed by the height formula.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{PrismError, Result};
use crate::qlinalg::{self, QMatrix, Subspace, Q};

/// Largest multiplicative order accepted for a single generator.
pub const MAX_GENERATOR_ORDER: usize = 12;
/// Largest group accepted when closing the generators.
pub const MAX_GROUP_ORDER: usize = 2048;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerAction {
    dim: usize,
    generators: Vec<Vec<Vec<i64>>>,
}

impl IntegerAction {
    pub fn new(dim: usize, generators: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        if dim == 0 {
            return Err(PrismError::InvalidAction("dimension must be positive".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.len() != dim || g.iter().any(|r| r.len() != dim) {
                return Err(PrismError::InvalidAction(format!("generator {i} is not {dim}x{dim}")));
            }
            if integer_order(g).is_none() {
                return Err(PrismError::InvalidAction(format!(
                    "generator {i} is not of finite order at most {MAX_GENERATOR_ORDER}"
                )));
            }
        }
        Ok(IntegerAction { dim, generators })
    }

    pub fn trivial(dim: usize) -> Self {
        IntegerAction { dim, generators: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Vec<i64>>] {
        &self.generators
    }

    fn rational_generators(&self) -> Vec<QMatrix> {
        self.generators.iter().map(|g| qlinalg::from_int(g)).collect()
    }

    /// Conjugates every generator by the unimodular `p`: `g ↦ p g p⁻¹`.
    pub fn conjugate(&self, p: &[Vec<i64>]) -> Result<Self> {
        let pq = qlinalg::from_int(p);
        let pinv = qlinalg::inverse(&pq)
            .filter(qlinalg::is_integral)
            .ok_or_else(|| PrismError::InvalidAction("conjugating matrix is not unimodular".into()))?;
        let gens = self
            .rational_generators()
            .iter()
            .map(|g| qlinalg::to_int(&qlinalg::mul(&qlinalg::mul(&pq, g), &pinv)).expect("integral"))
            .collect();
        IntegerAction::new(self.dim, gens)
    }

    /// Block-diagonal sum; generators pair up by index, missing ones act trivially.
    pub fn direct_sum(&self, other: &IntegerAction) -> IntegerAction {
        let n = self.dim + other.dim;
        let k = self.generators.len().max(other.generators.len());
        let id = |d: usize| -> Vec<Vec<i64>> {
            (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect()
        };
        let gens = (0..k)
            .map(|i| {
                let a = self.generators.get(i).cloned().unwrap_or_else(|| id(self.dim));
                let b = other.generators.get(i).cloned().unwrap_or_else(|| id(other.dim));
                let mut m = vec![vec![0; n]; n];
                for r in 0..self.dim {
                    m[r][..self.dim].copy_from_slice(&a[r]);
                }
                for r in 0..other.dim {
                    m[self.dim + r][self.dim..].copy_from_slice(&b[r]);
                }
                m
            })
            .collect();
        IntegerAction { dim: n, generators: gens }
    }
}

fn integer_order(g: &[Vec<i64>]) -> Option<usize> {
    let gq = qlinalg::from_int(g);
    let id = qlinalg::identity(g.len());
    let mut p = gq.clone();
    for k in 1..=MAX_GENERATOR_ORDER {
        if p == id {
            return Some(k);
        }
        p = qlinalg::mul(&p, &gq);
    }
    None
}

/// A rational representation of a finite group, given by generator matrices.
#[derive(Clone, Debug)]
pub struct RationalAction {
    pub dim: usize,
    pub generators: Vec<QMatrix>,
}

impl From<&IntegerAction> for RationalAction {
    fn from(a: &IntegerAction) -> Self {
        RationalAction {
            dim: a.dim,
            generators: a.rational_generators(),
        }
    }
}

impl RationalAction {
    /// The action restricted to an invariant subspace.
    pub fn restrict(&self, s: &Subspace) -> Result<RationalAction> {
        for (i, g) in self.generators.iter().enumerate() {
            if !s.is_invariant(g) {
                return Err(PrismError::NotInvariant(i));
            }
        }
        Ok(RationalAction {
            dim: s.dim(),
            generators: self.generators.iter().map(|g| s.restrict(g)).collect(),
        })
    }

    /// All group elements, each with one word in the generators.
    fn closure(&self) -> Result<Vec<(QMatrix, Vec<usize>)>> {
        let id = qlinalg::identity(self.dim);
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut elems = vec![(id.clone(), vec![])];
        seen.insert(key(&id), 0);
        let mut at = 0;
        while at < elems.len() {
            let (m, w) = elems[at].clone();
            for (i, g) in self.generators.iter().enumerate() {
                let next = qlinalg::mul(g, &m);
                if let Entry::Vacant(slot) = seen.entry(key(&next)) {
                    if elems.len() >= MAX_GROUP_ORDER {
                        return Err(PrismError::InvalidAction(format!(
                            "generated group exceeds {MAX_GROUP_ORDER} elements"
                        )));
                    }
                    slot.insert(elems.len());
                    let mut w2 = w.clone();
                    w2.push(i);
                    elems.push((next, w2));
                }
            }
            at += 1;
        }
        Ok(elems)
    }

    /// Sign characters of the generated group, as one sign per generator.
    fn sign_characters(&self, elems: &[(QMatrix, Vec<usize>)]) -> Vec<Vec<i8>> {
        let k = self.generators.len();
        let index: BTreeMap<String, usize> =
            elems.iter().enumerate().map(|(i, (m, _))| (key(m), i)).collect();
        (0..1u32 << k)
            .filter_map(|mask| {
                let eps: Vec<i8> = (0..k).map(|i| if mask & (1 << i) != 0 { -1 } else { 1 }).collect();
                let value = |w: &[usize]| w.iter().fold(1i8, |acc, &i| acc * eps[i]);
                // Well defined iff g·x has value eps(g)·value(x) for every element x.
                let ok = elems.iter().all(|(m, w)| {
                    self.generators.iter().enumerate().all(|(i, g)| {
                        let j = index[&key(&qlinalg::mul(g, m))];
                        value(&elems[j].1) == eps[i] * value(w)
                    })
                });
                ok.then_some(eps)
            })
            .collect()
    }

    pub fn decompose(&self) -> Result<Decomposition> {
        if self.dim > 3 {
            return Err(PrismError::DimTooLarge(self.dim));
        }
        let elems = self.closure()?;
        let id = qlinalg::identity(self.dim);
        let mut isotypic = Vec::new();
        let mut span = Subspace::zero(self.dim);
        for eps in self.sign_characters(&elems) {
            let mut space = Subspace::full(self.dim);
            for (g, &e) in self.generators.iter().zip(&eps) {
                let shifted = qlinalg::sub(g, &qlinalg::scale(&id, &qlinalg::q(e as i64)));
                space = space.intersect(&Subspace::kernel(&shifted));
            }
            if space.dim() > 0 {
                span = span.sum(&space);
                isotypic.push((eps, space));
            }
        }
        let complement = maschke_complement(&span, &elems, self.dim);
        Ok(Decomposition { isotypic, complement })
    }
}

/// Invariant complement of the invariant subspace `s`, obtained by averaging
/// a projection onto `s` over the group.
fn maschke_complement(s: &Subspace, elems: &[(QMatrix, Vec<usize>)], n: usize) -> Subspace {
    if s.dim() == n {
        return Subspace::zero(n);
    }
    // A projection onto s: extend the basis of s by standard vectors.
    let mut basis: Vec<Vec<Q>> = s.basis().to_vec();
    for e in qlinalg::identity(n) {
        let mut trial = basis.clone();
        trial.push(e.clone());
        if qlinalg::rank(&trial) > basis.len() {
            basis = trial;
        }
    }
    let b: QMatrix = (0..n).map(|i| basis.iter().map(|v| v[i].clone()).collect()).collect();
    let binv = qlinalg::inverse(&b).expect("basis is invertible");
    let keep: QMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j && i < s.dim() { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect();
    let pi = qlinalg::mul(&qlinalg::mul(&b, &keep), &binv);
    let mut avg = vec![vec![Q::zero(); n]; n];
    for (g, _) in elems {
        let ginv = qlinalg::inverse(g).expect("group element is invertible");
        avg = qlinalg::add(&avg, &qlinalg::mul(&qlinalg::mul(g, &pi), &ginv));
    }
    let avg = qlinalg::scale(&avg, &Q::new(1.into(), (elems.len() as i64).into()));
    Subspace::kernel(&avg)
}

fn key(m: &QMatrix) -> String {
    m.iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

/// Isotypic pieces for the sign characters plus the invariant complement,
/// which for dimension at most 3 is zero or simple.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub isotypic: Vec<(Vec<i8>, Subspace)>,
    pub complement: Subspace,
}

impl Decomposition {
    pub fn simple_summands(&self) -> usize {
        let lines: usize = self.isotypic.iter().map(|(_, s)| s.dim()).sum();
        lines + usize::from(self.complement.dim() > 0)
    }
}

/// Number of simple summands of the rational representation `a ⊗ ℚ`.
pub fn count_simple_summands(a: &IntegerAction) -> Result<usize> {
    Ok(RationalAction::from(a).decompose()?.simple_summands())
}

pub fn fixed_space(a: &RationalAction) -> Subspace {
    let id = qlinalg::identity(a.dim);
    a.generators.iter().fold(Subspace::full(a.dim), |s, g| {
        s.intersect(&Subspace::kernel(&qlinalg::sub(g, &id)))
    })
}

fn check_invariant(a: &RationalAction, ls: &Subspace) -> Result<()> {
    match a.generators.iter().position(|g| !ls.is_invariant(g)) {
        Some(i) => Err(PrismError::NotInvariant(i)),
        None => Ok(()),
    }
}

/// Finite-Weyl test for the section subgroup with Lie algebra `ls`:
/// `dim(ls ∩ Vᵂ) = dim Vᵂ`.
pub fn finite_weyl_criterion(a: &IntegerAction, ls: &Subspace) -> Result<bool> {
    let r = RationalAction::from(a);
    check_invariant(&r, ls)?;
    let fixed = fixed_space(&r);
    Ok(ls.intersect(&fixed).dim() == fixed.dim())
}

/// Lie algebra directions of the normalizer: `ls + Vᵂ`.
pub fn normalizer_directions(a: &IntegerAction, ls: &Subspace) -> Result<Subspace> {
    let r = RationalAction::from(a);
    check_invariant(&r, ls)?;
    Ok(ls.sum(&fixed_space(&r)))
}

/// The symmetric group on three letters acting on the A₂ root lattice.
pub fn a2_weyl_action() -> IntegerAction {
    IntegerAction::new(2, vec![vec![vec![-1, 1], vec![0, 1]], vec![vec![1, 0], vec![1, -1]]])
        .expect("reflections of A2")
}
