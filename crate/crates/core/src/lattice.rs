//! Integer lattices in ℤʳ kept in row-style Hermite normal form.
//!
//! Closed subgroups of a torus Tʳ correspond to lattices L ⊆ ℤʳ by taking
//! annihilators, so every torus subgroup key is a [`Lattice`].

use std::fmt;

use num_integer::Integer;

/// A sublattice of ℤʳ given by its Hermite normal form basis: pivots are
/// positive and move strictly right, entries above a pivot lie in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lattice {
    ambient: usize,
    rows: Vec<Vec<i64>>,
}

impl Lattice {
    /// The lattice generated by `generators` (each of length `ambient`).
    pub fn span(ambient: usize, generators: &[Vec<i64>]) -> Self {
        let mut rows: Vec<Vec<i64>> = generators.to_vec();
        for r in &rows {
            assert_eq!(r.len(), ambient, "generator length mismatch");
        }
        let mut out = Vec::new();
        let mut col = 0;
        while col < ambient && !rows.is_empty() {
            // Euclid on the current column until one row holds the gcd.
            loop {
                rows.retain(|r| r.iter().any(|&x| x != 0));
                let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
                if nonzero.len() <= 1 {
                    break;
                }
                let pivot = *nonzero
                    .iter()
                    .min_by_key(|&&i| rows[i][col].abs())
                    .expect("nonempty");
                for &i in &nonzero {
                    if i != pivot {
                        let q = rows[i][col].div_euclid(rows[pivot][col]);
                        let p = rows[pivot].clone();
                        for (x, y) in rows[i].iter_mut().zip(&p) {
                            *x -= q * y;
                        }
                    }
                }
            }
            if let Some(i) = (0..rows.len()).find(|&i| rows[i][col] != 0) {
                let mut r = rows.remove(i);
                if r[col] < 0 {
                    r.iter_mut().for_each(|x| *x = -*x);
                }
                out.push((col, r));
            }
            col += 1;
        }
        // Reduce entries above each pivot.
        for k in 0..out.len() {
            let (pc, pivot_row) = out[k].clone();
            for (_, row) in out.iter_mut().take(k) {
                let q = row[pc].div_euclid(pivot_row[pc]);
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
            }
        }
        Lattice {
            ambient,
            rows: out.into_iter().map(|(_, r)| r).collect(),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Lattice { ambient, rows: vec![] }
    }

    pub fn full(ambient: usize) -> Self {
        let gens: Vec<Vec<i64>> = (0..ambient)
            .map(|i| (0..ambient).map(|j| i64::from(i == j)).collect())
            .collect();
        Lattice::span(ambient, &gens)
    }

    /// Accepts `rows` only if they already are the Hermite normal form basis.
    pub fn from_hnf(ambient: usize, rows: Vec<Vec<i64>>) -> Option<Self> {
        let l = Lattice::span(ambient, &rows);
        (l.rows == rows).then_some(l)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    fn pivot(&self, row: usize) -> usize {
        self.rows[row]
            .iter()
            .position(|&x| x != 0)
            .expect("basis rows are nonzero")
    }

    /// Integer coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (k, row) in self.rows.iter().enumerate() {
            let pc = self.pivot(k);
            if rest[..pc].iter().any(|&x| x != 0) {
                return None;
            }
            let (q, r) = rest[pc].div_rem(&row[pc]);
            if r != 0 {
                return None;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= q * y;
            }
            coords.push(q);
        }
        rest.iter().all(|&x| x == 0).then_some(coords)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    /// Matrix expressing the basis of `self` in the basis of `sup`.
    pub fn inclusion_matrix(&self, sup: &Lattice) -> Option<Vec<Vec<i64>>> {
        self.rows.iter().map(|r| sup.coordinates(r)).collect()
    }

    /// Whether `self ⊆ sup` with `sup / self` torsion-free.
    pub fn is_saturated_in(&self, sup: &Lattice) -> bool {
        match self.inclusion_matrix(sup) {
            Some(m) => smith_invariants(&m).iter().all(|&d| d == 1),
            None => false,
        }
    }

    /// All lattices in ℤʳ whose Hermite basis entries have absolute value at
    /// most `bound`, in increasing order.
    pub fn enumerate(ambient: usize, bound: i64) -> Vec<Lattice> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << ambient) {
            let pivots: Vec<usize> = (0..ambient).filter(|&c| mask & (1 << c) != 0).collect();
            let mut rows: Vec<Vec<i64>> = Vec::new();
            fill_rows(ambient, bound, &pivots, 0, &mut rows, &mut out);
        }
        out.sort();
        out.dedup();
        out
    }
}

fn fill_rows(
    ambient: usize,
    bound: i64,
    pivots: &[usize],
    k: usize,
    rows: &mut Vec<Vec<i64>>,
    out: &mut Vec<Lattice>,
) {
    if k == pivots.len() {
        if let Some(l) = Lattice::from_hnf(ambient, rows.clone()) {
            out.push(l);
        }
        return;
    }
    let pc = pivots[k];
    let free: Vec<usize> = ((pc + 1)..ambient).filter(|c| !pivots.contains(c)).collect();
    let later: Vec<usize> = pivots[k + 1..].to_vec();
    for p in 1..=bound {
        // Entries above later pivots range over [0, bound), the rest over [-bound, bound].
        let mut choices: Vec<Vec<i64>> = vec![vec![]];
        for c in (pc + 1)..ambient {
            let range: Vec<i64> = if later.contains(&c) {
                (0..bound).collect()
            } else {
                debug_assert!(free.contains(&c));
                (-bound..=bound).collect()
            };
            choices = choices
                .into_iter()
                .flat_map(|pre| {
                    range.iter().map(move |&x| {
                        let mut v = pre.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        for tail in choices {
            let mut row = vec![0; ambient];
            row[pc] = p;
            row[pc + 1..].copy_from_slice(&tail);
            rows.push(row);
            fill_rows(ambient, bound, pivots, k + 1, rows, out);
            rows.pop();
        }
    }
}

/// Invariant factors of an integer matrix (the nonzero diagonal of its Smith
/// normal form), in divisibility order.
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<i64> {
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        let mut clean = true;
        for i in (t + 1)..rows {
            let q = a[i][t].div_euclid(a[t][t]);
            if q != 0 {
                let pr = a[t].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= q * y;
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in (t + 1)..cols {
            let q = a[t][j].div_euclid(a[t][t]);
            if q != 0 {
                for r in a.iter_mut() {
                    r[j] -= q * r[t];
                }
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        let p = a[t][t];
        if let Some((i, j)) = ((t + 1)..rows)
            .flat_map(|i| ((t + 1)..cols).map(move |j| (i, j)))
            .find(|&(i, j)| a[i][j] % p != 0)
        {
            // Fold an offending row in so the next pass lowers the pivot.
            let _ = j;
            let ri = a[i].clone();
            for (x, y) in a[t].iter_mut().zip(&ri) {
                *x += y;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

impl fmt::Display for Lattice {
    /// `L[a b; 0 c]`; the zero lattice (the whole torus) prints as `G`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return f.write_str("G");
        }
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "L[{}]", rows.join("; "))
    }
}
