use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::snf::{hermite_rows, smith_normal_form};
use super::vector::{IntMatrix, LatticeVector};

/// A sublattice of `Z^n` with a fixed basis, able to compute coordinates of
/// vectors with respect to that basis.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    ambient: usize,
    rows: Vec<LatticeVector>,
    // left * B * right = diag(d) for the basis matrix B
    left: IntMatrix,
    right: IntMatrix,
    diag: Vec<BigInt>,
}

impl LatticeBasis {
    /// The lattice generated by `gens`, with its Hermite basis.
    pub fn generated_by(gens: &[LatticeVector], ambient: usize) -> Self {
        Self::from_basis(hermite_rows(gens, ambient), ambient)
    }

    /// Uses `rows` verbatim as the basis. They must be linearly independent.
    pub fn from_basis(rows: Vec<LatticeVector>, ambient: usize) -> Self {
        let b = IntMatrix::from_rows(&rows, ambient);
        let snf = smith_normal_form(&b);
        let diag = snf.invariant_factors();
        assert_eq!(diag.len(), rows.len(), "basis rows must be independent");
        LatticeBasis { ambient, rows, left: snf.left, right: snf.right, diag }
    }

    pub fn full(n: usize) -> Self {
        Self::from_basis((0..n).map(|i| LatticeVector::unit(n, i)).collect(), n)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[LatticeVector] {
        &self.rows
    }

    /// Rational coordinates `c` with `c · B = v`, if `v` lies in the span.
    pub fn rational_coords(&self, v: &LatticeVector) -> Option<Vec<BigRational>> {
        assert_eq!(v.rank(), self.ambient, "ambient rank mismatch");
        let w = self.right.apply_row(&v.0);
        let k = self.rank();
        if w.0[k..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let y: Vec<BigRational> =
            (0..k).map(|i| BigRational::new(w.0[i].clone(), self.diag[i].clone())).collect();
        // c = y · left
        let mut c = vec![BigRational::zero(); k];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (j, cj) in c.iter_mut().enumerate() {
                *cj += yi * BigRational::from_integer(self.left[(i, j)].clone());
            }
        }
        Some(c)
    }

    /// Integer coordinates, if `v` is in the lattice.
    pub fn coords(&self, v: &LatticeVector) -> Option<LatticeVector> {
        assert_eq!(v.rank(), self.ambient, "ambient rank mismatch");
        let w = self.right.apply_row(&v.0);
        let k = self.rank();
        if w.0[k..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut y = Vec::with_capacity(k);
        for i in 0..k {
            let (q, r) = w.0[i].div_rem(&self.diag[i]);
            if !r.is_zero() {
                return None;
            }
            y.push(q);
        }
        Some(self.left.apply_row(&y))
    }

    /// Coordinates of a vector in the span, scaled to the primitive integer
    /// vector on the same ray.
    pub fn ray_coords(&self, v: &LatticeVector) -> Option<LatticeVector> {
        let c = self.rational_coords(v)?;
        Some(clear_denominators(&c).primitive())
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_span(&self, v: &LatticeVector) -> bool {
        self.rational_coords(v).is_some()
    }

    /// `c · B`
    pub fn to_ambient(&self, c: &LatticeVector) -> LatticeVector {
        assert_eq!(c.rank(), self.rank(), "coordinate rank mismatch");
        let mut out = LatticeVector::zero(self.ambient);
        for (ci, row) in c.0.iter().zip(&self.rows) {
            if !ci.is_zero() {
                out = &out + &row.scale(ci);
            }
        }
        out
    }
}

/// Multiplies a rational vector by the lcm of its denominators.
pub fn clear_denominators(c: &[BigRational]) -> LatticeVector {
    let l = c.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    LatticeVector(c.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect())
}

/// True iff `v` lies in the group generated by `gens`.
pub fn lattice_membership(v: &LatticeVector, gens: &[LatticeVector]) -> bool {
    LatticeBasis::generated_by(gens, v.rank()).contains(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vector::lv;

    #[test]
    fn membership_examples() {
        assert!(lattice_membership(&lv(&[2, 1]), &[lv(&[3, 0]), lv(&[0, 3]), lv(&[1, 2])]));
        assert!(!lattice_membership(&lv(&[1, 1]), &[lv(&[3, 0]), lv(&[0, 3]), lv(&[1, 2])]));
        assert!(!lattice_membership(&lv(&[1, 0]), &[lv(&[2, 0])]));
        assert!(lattice_membership(&lv(&[0, 0]), &[lv(&[2, 0])]));
        assert!(lattice_membership(&lv(&[0, 0]), &[]));
    }

    #[test]
    fn coordinates_round_trip() {
        let b = LatticeBasis::generated_by(&[lv(&[3, 0, 1]), lv(&[1, 2, 0])], 3);
        let v = lv(&[5, 4, 1]);
        let c = b.coords(&v).unwrap();
        assert_eq!(b.to_ambient(&c), v);
        assert!(b.coords(&lv(&[1, 0, 0])).is_none());
        assert!(b.rational_coords(&lv(&[0, 0, 1])).is_none());
    }
}
