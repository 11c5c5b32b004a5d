//! Finite partial orders, finite topological spaces and the finite form of
//! the spectral/Priestley correspondence.
//!
//! On a finite set the Stone topology of a Priestley space is discrete, so a
//! finite Priestley space is nothing more than a poset. The spectral space
//! attached to it has the up-sets as opens; conversely the specialization
//! order of a finite T0 space recovers the poset.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{PrismError, Result};

pub type PointSet = BTreeSet<usize>;

/// A partial order on `0..n`, stored as a reflexive, transitive relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    le: Vec<Vec<bool>>,
}

impl Order {
    /// The discrete order (equality) on `n` points.
    pub fn discrete(n: usize) -> Self {
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        Order { le }
    }

    /// Reflexive-transitive closure of `pairs` (each `(a, b)` meaning `a <= b`).
    ///
    /// Fails with `InvalidOrder` if the closure is not antisymmetric.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut le = Order::discrete(n).le;
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(PrismError::InvalidOrder(format!(
                    "pair ({a}, {b}) out of range for {n} points"
                )));
            }
            le[a][b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if le[i][j] && le[j][i] {
                    return Err(PrismError::InvalidOrder(format!(
                        "cycle through points {i} and {j}"
                    )));
                }
            }
        }
        Ok(Order { le })
    }

    pub fn len(&self) -> usize {
        self.le.len()
    }

    pub fn is_empty(&self) -> bool {
        self.le.is_empty()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le[a][b]
    }

    pub fn reversed(&self) -> Self {
        let n = self.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.le[j][i];
            }
        }
        Order { le }
    }

    /// Strict relations `a < b`, in lexicographic index order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Covering relations of the Hasse diagram.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)))
            .collect()
    }

    pub fn down_closure(&self, set: &PointSet) -> PointSet {
        (0..self.len())
            .filter(|&q| set.iter().any(|&p| self.le(q, p)))
            .collect()
    }

    pub fn up_closure(&self, set: &PointSet) -> PointSet {
        (0..self.len())
            .filter(|&q| set.iter().any(|&p| self.le(p, q)))
            .collect()
    }

    pub fn is_down_set(&self, set: &PointSet) -> bool {
        set.iter()
            .all(|&p| (0..self.len()).all(|q| !self.le(q, p) || set.contains(&q)))
    }

    pub fn is_up_set(&self, set: &PointSet) -> bool {
        set.iter()
            .all(|&p| (0..self.len()).all(|q| !self.le(p, q) || set.contains(&q)))
    }

    /// Minimal elements of `within`.
    pub fn minimal_in(&self, within: &PointSet) -> PointSet {
        within
            .iter()
            .copied()
            .filter(|&p| !within.iter().any(|&q| self.lt(q, p)))
            .collect()
    }

    /// Points in a linear extension of the order (every point after all points below it).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = (0..self.len()).collect();
        pts.sort_by_key(|&p| ((0..self.len()).filter(|&q| self.lt(q, p)).count(), p));
        pts
    }

    /// Enumerates every down-set by extending along a linear extension: a point
    /// may be added only once everything strictly below it is present.
    pub fn down_sets(&self) -> Vec<PointSet> {
        let ext = self.linear_extension();
        let mut out = Vec::new();
        let mut current = PointSet::new();
        self.extend_down_sets(&ext, 0, &mut current, &mut out);
        out.sort();
        out
    }

    fn extend_down_sets(
        &self,
        ext: &[usize],
        at: usize,
        current: &mut PointSet,
        out: &mut Vec<PointSet>,
    ) {
        if at == ext.len() {
            out.push(current.clone());
            return;
        }
        let p = ext[at];
        self.extend_down_sets(ext, at + 1, current, out);
        let below_present = (0..self.len()).all(|q| !self.lt(q, p) || current.contains(&q));
        if below_present {
            current.insert(p);
            self.extend_down_sets(ext, at + 1, current, out);
            current.remove(&p);
        }
    }
}

fn index_points(points: &[String]) -> Result<BTreeMap<String, usize>> {
    let mut index = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        if index.insert(p.clone(), i).is_some() {
            return Err(PrismError::Duplicate(p.clone()));
        }
    }
    Ok(index)
}

/// A finite Priestley space: a finite poset with the (implicit) discrete topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePriestley {
    points: Vec<String>,
    index: BTreeMap<String, usize>,
    order: Order,
}

impl FinitePriestley {
    /// Builds a poset from named points and `(lower, upper)` relations; the
    /// relation list is transitively closed.
    pub fn new<S: AsRef<str>>(points: &[S], relations: &[(S, S)]) -> Result<Self> {
        let points: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
        let index = index_points(&points)?;
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| PrismError::UnknownPoint(name.to_string()))
        };
        let pairs = relations
            .iter()
            .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        let order = Order::from_pairs(points.len(), &pairs)?;
        Ok(FinitePriestley {
            points,
            index,
            order,
        })
    }

    pub fn from_order(points: Vec<String>, order: Order) -> Result<Self> {
        if points.len() != order.len() {
            return Err(PrismError::InvalidOrder(
                "point count does not match order size".into(),
            ));
        }
        let index = index_points(&points)?;
        Ok(FinitePriestley {
            points,
            index,
            order,
        })
    }

    pub fn antichain<S: AsRef<str>>(points: &[S]) -> Result<Self> {
        FinitePriestley::new(points, &[])
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| PrismError::UnknownPoint(name.to_string()))
    }

    pub fn le(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.order.le(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn names(&self, set: &PointSet) -> BTreeSet<String> {
        set.iter().map(|&i| self.points[i].clone()).collect()
    }

    pub fn inverse(&self) -> Self {
        FinitePriestley {
            points: self.points.clone(),
            index: self.index.clone(),
            order: self.order.reversed(),
        }
    }

    /// All down-sets: the thick-ideal lattice of a finite prism.
    pub fn down_sets(&self) -> Vec<PointSet> {
        self.order.down_sets()
    }

    /// Thomason points of a finite prism are its minimal points.
    pub fn thomason_points(&self) -> PointSet {
        self.order.minimal_in(&(0..self.len()).collect())
    }

    /// The spectral space with the open up-sets as topology.
    pub fn spectral(&self) -> FiniteTopSpace {
        let opens = self
            .order
            .reversed()
            .down_sets()
            .into_iter()
            .collect::<BTreeSet<_>>();
        FiniteTopSpace {
            points: self.points.clone(),
            opens,
        }
    }
}

/// A finite topological space given by its full list of open sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopSpace {
    points: Vec<String>,
    opens: BTreeSet<PointSet>,
}

impl FiniteTopSpace {
    pub fn new<S: AsRef<str>>(points: &[S], opens: &[Vec<S>]) -> Result<Self> {
        let points: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
        let index = index_points(&points)?;
        let mut family = BTreeSet::new();
        for open in opens {
            let set = open
                .iter()
                .map(|p| {
                    index
                        .get(p.as_ref())
                        .copied()
                        .ok_or_else(|| PrismError::UnknownPoint(p.as_ref().to_string()))
                })
                .collect::<Result<PointSet>>()?;
            family.insert(set);
        }
        let space = FiniteTopSpace {
            points,
            opens: family,
        };
        space.validate()?;
        Ok(space)
    }

    fn validate(&self) -> Result<()> {
        let full: PointSet = (0..self.points.len()).collect();
        if !self.opens.contains(&PointSet::new()) {
            return Err(PrismError::InvalidTopology("missing the empty set".into()));
        }
        if !self.opens.contains(&full) {
            return Err(PrismError::InvalidTopology("missing the whole space".into()));
        }
        for a in &self.opens {
            for b in &self.opens {
                if !self.opens.contains(&a.union(b).copied().collect()) {
                    return Err(PrismError::InvalidTopology("not closed under union".into()));
                }
                if !self.opens.contains(&a.intersection(b).copied().collect()) {
                    return Err(PrismError::InvalidTopology(
                        "not closed under intersection".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn opens(&self) -> &BTreeSet<PointSet> {
        &self.opens
    }

    /// Open sets as sorted name lists.
    pub fn open_names(&self) -> BTreeSet<BTreeSet<String>> {
        self.opens
            .iter()
            .map(|o| o.iter().map(|&i| self.points[i].clone()).collect())
            .collect()
    }

    /// Closure of a single point: the complement of the union of all opens missing it.
    pub fn closure_of(&self, x: usize) -> PointSet {
        let mut avoid = PointSet::new();
        for open in self.opens.iter().filter(|o| !o.contains(&x)) {
            avoid.extend(open.iter().copied());
        }
        (0..self.points.len()).filter(|p| !avoid.contains(p)).collect()
    }

    /// `y <= x` iff `y` lies in the closure of `{x}`.
    pub fn specialization_order(&self) -> Result<Order> {
        let n = self.points.len();
        let closures: Vec<PointSet> = (0..n).map(|x| self.closure_of(x)).collect();
        for a in 0..n {
            for b in (a + 1)..n {
                if closures[a] == closures[b] {
                    return Err(PrismError::NotT0(
                        self.points[a].clone(),
                        self.points[b].clone(),
                    ));
                }
            }
        }
        let mut pairs = Vec::new();
        for (x, cl) in closures.iter().enumerate() {
            for &y in cl {
                pairs.push((y, x));
            }
        }
        Order::from_pairs(n, &pairs)
    }

    pub fn priestley(&self) -> Result<FinitePriestley> {
        let order = self.specialization_order()?;
        FinitePriestley::from_order(self.points.clone(), order)
    }
}

pub fn specialization_order(space: &FiniteTopSpace) -> Result<Order> {
    space.specialization_order()
}

pub fn priestley_of_spectral(space: &FiniteTopSpace) -> Result<FinitePriestley> {
    space.priestley()
}

pub fn spectral_of_priestley(p: &FinitePriestley) -> FiniteTopSpace {
    p.spectral()
}
