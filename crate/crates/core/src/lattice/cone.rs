//! Rational polyhedral cones: exact membership, lineality and facets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::snf::integer_kernel;
use super::vector::{IntMatrix, LatticeVector};

/// Exact decision of `v ∈ cone(gens)` by phase-one simplex over the
/// rationals (Bland's rule, so it always terminates).
pub fn cone_membership(v: &[BigRational], gens: &[LatticeVector]) -> bool {
    let n = v.len();
    let m = gens.len();
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if m == 0 {
        return false;
    }
    // tableau columns: lambda_0..m, artificial_0..n, rhs
    let width = m + n + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![BigRational::zero(); width];
        for (j, g) in gens.iter().enumerate() {
            row[j] = BigRational::from_integer(g.0[i].clone());
        }
        row[m + i] = BigRational::one();
        row[width - 1] = v[i].clone();
        if v[i].is_negative() {
            for x in row.iter_mut().take(m) {
                *x = -x.clone();
            }
            row[width - 1] = -row[width - 1].clone();
        }
        t.push(row);
    }
    let mut basis: Vec<usize> = (m..m + n).collect();
    loop {
        let entering = (0..m + n).find(|&j| {
            if j >= m || basis.contains(&j) {
                return false;
            }
            let r: BigRational = (0..n).filter(|&i| basis[i] >= m).map(|i| t[i][j].clone()).sum();
            r.is_positive()
        });
        let Some(j) = entering else { break };
        let mut leave: Option<(BigRational, usize)> = None;
        for i in 0..n {
            if t[i][j].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((best, bi)) => ratio < *best || (ratio == *best && basis[i] < basis[*bi]),
                };
                if better {
                    leave = Some((ratio, i));
                }
            }
        }
        let Some((_, p)) = leave else {
            // unbounded in phase one cannot happen; the objective is bounded below by 0
            unreachable!("phase-one simplex is bounded")
        };
        let piv = t[p][j].clone();
        for x in t[p].iter_mut() {
            *x = &*x / &piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[j].is_zero() {
                let f = row[j].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        basis[p] = j;
    }
    (0..n).filter(|&i| basis[i] >= m).all(|i| t[i][width - 1].is_zero())
}

pub fn cone_membership_int(v: &LatticeVector, gens: &[LatticeVector]) -> bool {
    let q: Vec<BigRational> = v.0.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    cone_membership(&q, gens)
}

/// Indices of generators whose negatives also lie in the cone; they span the
/// lineality space.
pub fn lineality_generators(gens: &[LatticeVector]) -> Vec<usize> {
    (0..gens.len())
        .filter(|&i| !gens[i].is_zero() && cone_membership_int(&-&gens[i], gens))
        .collect()
}

pub fn is_pointed(gens: &[LatticeVector]) -> bool {
    lineality_generators(gens).is_empty()
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Facets and extreme rays of a full-dimensional pointed cone in `Z^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedCone {
    pub dim: usize,
    /// Primitive extreme rays, sorted.
    pub rays: Vec<LatticeVector>,
    /// Primitive inner facet normals, sorted.
    pub facets: Vec<LatticeVector>,
}

impl PointedCone {
    /// `gens` must span `Q^k` and generate a pointed cone.
    pub fn new(gens: &[LatticeVector], k: usize) -> Self {
        let mut dirs: Vec<LatticeVector> =
            gens.iter().filter(|g| !g.is_zero()).map(|g| g.primitive()).collect();
        dirs.sort();
        dirs.dedup();
        if k == 0 {
            return PointedCone { dim: 0, rays: vec![], facets: vec![] };
        }
        let mut facets = Vec::new();
        for combo in combinations(dirs.len(), k - 1) {
            let rows: Vec<_> = combo.iter().map(|&i| dirs[i].clone()).collect();
            let ker = integer_kernel(&IntMatrix::from_rows(&rows, k));
            if ker.len() != 1 {
                continue;
            }
            let normal = ker[0].primitive();
            let vals: Vec<BigInt> = dirs.iter().map(|d| d.dot(&normal.0)).collect();
            let oriented = if vals.iter().all(|x| !x.is_negative()) {
                normal
            } else if vals.iter().all(|x| !x.is_positive()) {
                -&normal
            } else {
                continue;
            };
            facets.push(oriented);
        }
        facets.sort();
        facets.dedup();
        let rays = if k == 1 {
            dirs.clone()
        } else {
            dirs.iter()
                .filter(|d| {
                    let on: Vec<_> =
                        facets.iter().filter(|f| d.dot(&f.0).is_zero()).cloned().collect();
                    let rank = k - integer_kernel(&IntMatrix::from_rows(&on, k)).len();
                    rank == k - 1
                })
                .cloned()
                .collect()
        };
        PointedCone { dim: k, rays, facets }
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.facets.iter().all(|f| !v.dot(&f.0).is_negative())
    }

    /// A linear form positive on every nonzero element of the cone.
    pub fn grading(&self) -> LatticeVector {
        self.facets.iter().fold(LatticeVector::zero(self.dim), |acc, f| &acc + f)
    }
}
