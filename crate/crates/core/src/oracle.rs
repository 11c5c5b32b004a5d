//! Brute-force oracles that re-derive selected results by exhaustive search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::{isomax_dim, isomax_undercategory, punctured_cube, Subset};
use crate::dispersion::{thomason_derivative, thomason_heights, Height};
use crate::error::{PrismError, Result};
use crate::flagged::FlaggedPriestley;
use crate::guiding::{n_star, NStarOrder};
use crate::lattice::Lattice;
use crate::liegroups::{catalog, flagged_snapshot};
use crate::order::{FinitePriestley, Order, PointSet};

pub const SUITES: [&str; 5] = ["isomax", "snf", "derivative", "downsets", "chains"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub suite: String,
    pub cases: usize,
    pub mismatches: Vec<String>,
}

impl OracleReport {
    fn new(suite: &str) -> Self {
        OracleReport {
            suite: suite.into(),
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.mismatches.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn summary(&self) -> String {
        format!("{}\tcases={}\tmismatches={}", self.suite, self.cases, self.mismatches.len())
    }
}

pub fn run_suite(name: &str) -> Result<OracleReport> {
    match name {
        "isomax" => Ok(isomax(6)),
        "snf" => Ok(snf(24)),
        "derivative" => derivative(3),
        "downsets" => Ok(downsets(12, 40)),
        "chains" => Ok(chains(10, 40)),
        other => Err(PrismError::InvalidArgument(format!(
            "unknown oracle suite `{other}` (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

/// Counts supersets with equal maximum by scanning every subset of `[n]`.
pub fn isomax(max_n: u32) -> OracleReport {
    let mut r = OracleReport::new("isomax");
    for n in 0..=max_n {
        for phi in punctured_cube(n) {
            let brute: Vec<Subset> = (1u32..1 << (n + 1))
                .filter_map(|mask| Subset::new(&(0..=n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>()))
                .filter(|psi| phi.is_subset_of(*psi) && psi.top() == phi.top())
                .collect();
            let l = isomax_dim(phi);
            let mut sorted = brute.clone();
            sorted.sort();
            r.check(brute.len() == 1 << l && sorted == isomax_undercategory(phi), || {
                format!("n={n} φ={phi}: {} supersets, ℓ={l}", brute.len())
            });
        }
    }
    r
}

/// Whether `lk / lh` has torsion, by searching `(1/m)·lh ∩ lk` for a
/// point outside `lh`, for every `m` up to `max_index`.
pub fn has_torsion_brute(lh: &Lattice, lk: &Lattice, max_index: i64) -> bool {
    let basis = lh.rows();
    let k = basis.len();
    let r = lh.ambient();
    (2..=max_index).any(|m| {
        let total = (m as u64).pow(k as u32);
        (1..total).any(|code| {
            let mut c = Vec::with_capacity(k);
            let mut x = code;
            for _ in 0..k {
                c.push((x % m as u64) as i64);
                x /= m as u64;
            }
            let v: Vec<i64> = (0..r).map(|j| (0..k).map(|i| c[i] * basis[i][j]).sum()).collect();
            v.iter().all(|x| x % m == 0) && lk.contains(&v.iter().map(|x| x / m).collect::<Vec<_>>())
        })
    })
}

/// Lattice pairs `lh ⊆ lk` whose torsion subgroup has order at most `max_index`.
fn lattice_pairs(max_index: i64) -> Vec<(Lattice, Lattice)> {
    let mut small: Vec<Lattice> = Vec::new();
    for a in 1..=max_index {
        for c in 1..=max_index / a {
            for b in 0..c {
                small.push(Lattice::span(2, &[vec![a, b], vec![0, c]]));
            }
        }
    }
    for a in -6..=6i64 {
        for b in -6..=6i64 {
            if (a, b) != (0, 0) {
                small.push(Lattice::span(2, &[vec![a, b]]));
            }
        }
    }
    small.push(Lattice::zero(2));
    small.sort();
    small.dedup();
    let mut sup = Lattice::enumerate(2, 4);
    sup.extend(small.iter().filter(|l| l.rank() < 2).cloned());
    sup.sort();
    sup.dedup();
    let mut pairs = Vec::new();
    for h in &small {
        for k in &sup {
            if h.is_sublattice_of(k) {
                pairs.push((h.clone(), k.clone()));
            }
        }
    }
    let three = Lattice::enumerate(3, 1);
    for h in &three {
        for k in &three {
            if h.is_sublattice_of(k) {
                pairs.push((h.clone(), k.clone()));
            }
        }
    }
    for (a, b, c) in [(2, 3, 4), (1, 2, 12), (2, 2, 6), (1, 1, 24)] {
        let h = Lattice::span(3, &[vec![a, 0, 0], vec![0, b, 0], vec![0, 0, c]]);
        for k in &three {
            if h.is_sublattice_of(k) {
                pairs.push((h.clone(), k.clone()));
            }
        }
    }
    pairs
}

pub fn snf(max_index: i64) -> OracleReport {
    let mut r = OracleReport::new("snf");
    for (h, k) in lattice_pairs(max_index) {
        let smith = h.is_saturated_in(&k);
        let brute = !has_torsion_brute(&h, &k, max_index);
        r.check(smith == brute, || format!("{h} ⊆ {k}: smith={smith} brute={brute}"));
    }
    r
}

fn oracle_spaces() -> Result<Vec<(String, FlaggedPriestley)>> {
    let mut out: Vec<(String, FlaggedPriestley)> = NStarOrder::ALL
        .iter()
        .map(|o| (o.name().to_string(), n_star(*o)))
        .collect();
    for g in catalog() {
        for bound in 2..=4 {
            match flagged_snapshot(&g, bound) {
                Ok(s) => out.push((format!("{g}@{bound}"), s.space)),
                Err(PrismError::Unsupported(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Iterating the derivative `k` times keeps exactly the points of height ≥ k.
pub fn derivative(max_k: u32) -> Result<OracleReport> {
    let mut r = OracleReport::new("derivative");
    for (name, space) in oracle_spaces()? {
        let h = thomason_heights(&space)?;
        let mut current = space.clone();
        for k in 0..=max_k {
            let expected: Vec<&String> = h
                .heights
                .iter()
                .filter(|(_, v)| **v >= Height::Finite(k))
                .map(|(p, _)| p)
                .collect();
            let got: Vec<&String> = current.points().iter().collect();
            r.check(expected == got, || format!("{name} k={k}: {expected:?} vs {got:?}"));
            current = thomason_derivative(&current);
        }
    }
    Ok(r)
}

fn random_order(rng: &mut ChaCha8Rng, n: usize) -> Order {
    // Edges only go up a fixed linear order, so the relation is acyclic.
    let density = rng.gen_range(0.05..0.5);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    let perm = {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, rng.gen_range(0..=i));
        }
        p
    };
    let pairs: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
    Order::from_pairs(n, &pairs).expect("acyclic by construction")
}

/// Every subset tested against the down-set condition.
pub fn down_sets_brute(order: &Order) -> Vec<PointSet> {
    let n = order.len();
    let mut out: Vec<PointSet> = (0u32..1 << n)
        .filter(|&mask| {
            (0..n).all(|p| mask & (1 << p) == 0 || (0..n).all(|q| !order.le(q, p) || mask & (1 << q) != 0))
        })
        .map(|mask| (0..n).filter(|p| mask & (1 << p) != 0).collect())
        .collect();
    out.sort();
    out
}

pub fn downsets(max_n: usize, trials: usize) -> OracleReport {
    let mut r = OracleReport::new("downsets");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for n in 0..=max_n {
        for t in 0..trials {
            let order = random_order(&mut rng, n);
            r.check(order.down_sets() == down_sets_brute(&order), || format!("n={n} trial={t}"));
        }
    }
    r
}

/// Length of the longest strict chain ending at `p`, by depth-first search.
pub fn longest_chain_below(order: &Order, p: usize) -> u32 {
    (0..order.len())
        .filter(|&q| order.lt(q, p))
        .map(|q| longest_chain_below(order, q) + 1)
        .max()
        .unwrap_or(0)
}

pub fn chains(max_n: usize, trials: usize) -> OracleReport {
    let mut r = OracleReport::new("chains");
    let mut rng = ChaCha8Rng::seed_from_u64(0xc4a1);
    for n in 1..=max_n {
        for t in 0..trials {
            let order = random_order(&mut rng, n);
            let names: Vec<String> = (0..n).map(|i| format!("p{i:02}")).collect();
            let fp = FinitePriestley::from_order(names, order.clone()).expect("valid order");
            let h = thomason_heights(&FlaggedPriestley::from_finite(&fp)).expect("no hints");
            let ok = (0..n).all(|p| h.heights[&fp.points()[p]] == Height::Finite(longest_chain_below(&order, p)));
            r.check(ok, || format!("n={n} trial={t}"));
        }
    }
    r
}
