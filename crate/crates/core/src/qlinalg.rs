//! Exact linear algebra over ℚ for the small matrices of the height formula.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
/// Row-major rational matrix; matrices act on column vectors.
pub type QMatrix = Vec<Vec<Q>>;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn from_int(m: &[Vec<i64>]) -> QMatrix {
    m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn apply(a: &QMatrix, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn sub(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn scale(a: &QMatrix, c: &Q) -> QMatrix {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn add(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

/// Reduced row echelon form with zero rows removed.
pub fn rref(m: &QMatrix) -> QMatrix {
    let mut a: QMatrix = m.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        a[r].iter_mut().for_each(|x| *x *= &inv);
        let pr = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

pub fn rank(m: &QMatrix) -> usize {
    rref(m).len()
}

/// Basis of `{v : m v = 0}`.
pub fn nullspace(m: &QMatrix, cols: usize) -> Vec<Vec<Q>> {
    let r = rref(m);
    let pivots: Vec<usize> = r
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, if it is invertible.
pub fn inverse(m: &QMatrix) -> Option<QMatrix> {
    let n = m.len();
    let aug: QMatrix = m
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    let r = rref(&aug);
    if r.len() < n || (0..n).any(|i| r[i][i] != Q::one()) {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// A rational subspace of ℚⁿ, canonically stored as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    dim_ambient: usize,
    basis: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn span(dim_ambient: usize, vectors: &[Vec<Q>]) -> Self {
        Subspace {
            dim_ambient,
            basis: rref(&vectors.to_vec()),
        }
    }

    pub fn span_int(dim_ambient: usize, vectors: &[Vec<i64>]) -> Self {
        Subspace::span(dim_ambient, &from_int(vectors))
    }

    pub fn zero(dim_ambient: usize) -> Self {
        Subspace {
            dim_ambient,
            basis: vec![],
        }
    }

    pub fn full(dim_ambient: usize) -> Self {
        Subspace::span(dim_ambient, &identity(dim_ambient))
    }

    pub fn kernel(m: &QMatrix) -> Self {
        let n = m.first().map_or(0, |r| r.len());
        Subspace::span(n, &nullspace(m, n))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(&rows) == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.dim_ambient, &rows)
    }

    /// Intersection via the kernel of `[A^T | -B^T]`.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let (a, b) = (&self.basis, &other.basis);
        if a.is_empty() || b.is_empty() {
            return Subspace::zero(self.dim_ambient);
        }
        let m: QMatrix = (0..self.dim_ambient)
            .map(|i| {
                a.iter()
                    .map(|v| v[i].clone())
                    .chain(b.iter().map(|v| -v[i].clone()))
                    .collect()
            })
            .collect();
        let vecs: Vec<Vec<Q>> = nullspace(&m, a.len() + b.len())
            .into_iter()
            .map(|c| {
                (0..self.dim_ambient)
                    .map(|i| a.iter().zip(&c).fold(Q::zero(), |acc, (v, x)| acc + &v[i] * x))
                    .collect()
            })
            .collect();
        Subspace::span(self.dim_ambient, &vecs)
    }

    pub fn is_invariant(&self, g: &QMatrix) -> bool {
        self.basis.iter().all(|v| self.contains(&apply(g, v)))
    }

    /// Matrix of `g` restricted to this (invariant) subspace, in the stored basis.
    pub fn restrict(&self, g: &QMatrix) -> QMatrix {
        let d = self.dim();
        // Coordinates w.r.t. the RREF basis are read off at its pivot columns.
        let pivots: Vec<usize> = self
            .basis
            .iter()
            .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
            .collect();
        let images: Vec<Vec<Q>> = self.basis.iter().map(|v| apply(g, v)).collect();
        (0..d)
            .map(|i| images.iter().map(|w| w[pivots[i]].clone()).collect())
            .collect()
    }
}

pub fn is_integral(m: &QMatrix) -> bool {
    m.iter().flatten().all(|x| x.is_integer())
}

pub fn to_int(m: &QMatrix) -> Option<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    if x.is_integer() {
                        i64::try_from(x.to_integer()).ok()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

pub fn abs_max(m: &QMatrix) -> Q {
    m.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}
