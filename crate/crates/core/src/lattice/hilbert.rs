//! Hilbert bases of pointed rational cones and saturation of lattice monoids.
//!
//! The Hilbert basis of a full-dimensional pointed cone is found among the
//! extreme rays and the lattice points of the half-open parallelepipeds
//! spanned by linearly independent ray subsets (every cone element reduces
//! into one of them by Carathéodory). Those points are enumerated as coset
//! representatives via Smith normal form, then filtered for irreducibility.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::basis::LatticeBasis;
use super::cone::{combinations, lineality_generators, PointedCone};
use super::snf::{hermite_reduce, hermite_rows, saturated_span, smith_normal_form};
use super::vector::{IntMatrix, LatticeVector};
use crate::error::{Error, Result};

/// Upper bound on the number of parallelepiped points enumerated per cone.
pub const PARALLELEPIPED_GUARD: u64 = 2_000_000;

fn parallelepiped_points(rays: &[LatticeVector], k: usize) -> Result<Vec<LatticeVector>> {
    let r = IntMatrix::from_rows(rays, k);
    let snf = smith_normal_form(&r);
    let d = snf.invariant_factors();
    if d.len() < k {
        return Ok(vec![]);
    }
    let count: BigInt = d.iter().product();
    if count > BigInt::from(PARALLELEPIPED_GUARD) {
        return Err(Error::TooLarge(format!("parallelepiped with {count} points")));
    }
    let dims: Vec<u64> = d.iter().map(|x| x.to_u64().expect("guarded")).collect();
    let total: u64 = dims.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    for idx in 0..total {
        // mixed radix digits c_i in [0, d_i)
        let mut rest = idx;
        let mut lambda = vec![BigRational::zero(); k];
        for (i, &di) in dims.iter().enumerate() {
            let ci = rest % di;
            rest /= di;
            if ci == 0 {
                continue;
            }
            let coef = BigRational::new(BigInt::from(ci), BigInt::from(di));
            for (j, l) in lambda.iter_mut().enumerate() {
                *l += &coef * BigRational::from_integer(snf.left[(i, j)].clone());
            }
        }
        // the point is frac(lambda) · rays, integral by construction
        let mut p = LatticeVector::zero(k);
        let mut acc = vec![BigRational::zero(); k];
        for (j, l) in lambda.iter().enumerate() {
            let f = l - l.floor();
            if f.is_zero() {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(&rays[j].0) {
                *a += &f * BigRational::from_integer(x.clone());
            }
        }
        for (pi, a) in p.0.iter_mut().zip(acc) {
            debug_assert!(a.is_integer());
            *pi = a.to_integer();
        }
        if !p.is_zero() {
            out.push(p);
        }
    }
    Ok(out)
}

/// Hilbert basis of the full-dimensional pointed cone generated by `gens`
/// in `Z^k`. Output is sorted lexicographically.
pub fn hilbert_basis_full(gens: &[LatticeVector], k: usize) -> Result<Vec<LatticeVector>> {
    if k == 0 {
        return Ok(vec![]);
    }
    let cone = PointedCone::new(gens, k);
    let subsets = combinations(cone.rays.len(), k);
    let chunks: Vec<Result<Vec<LatticeVector>>> = subsets
        .par_iter()
        .map(|s| {
            let rs: Vec<_> = s.iter().map(|&i| cone.rays[i].clone()).collect();
            parallelepiped_points(&rs, k)
        })
        .collect();
    let mut cand: Vec<LatticeVector> = cone.rays.clone();
    for c in chunks {
        cand.extend(c?);
    }
    cand.sort();
    cand.dedup();
    let grading = cone.grading();
    let mut by_degree: Vec<(BigInt, LatticeVector)> =
        cand.into_iter().map(|v| (v.dot(&grading.0), v)).collect();
    by_degree.sort();
    let mut basis: Vec<(BigInt, LatticeVector)> = Vec::new();
    for (deg, v) in by_degree {
        let reducible = basis
            .iter()
            .any(|(dy, y)| *dy < deg && cone.contains(&(&v - y)));
        if !reducible {
            basis.push((deg, v));
        }
    }
    let mut out: Vec<_> = basis.into_iter().map(|(_, v)| v).collect();
    out.sort();
    Ok(out)
}

/// Minimal generating set of `cone(gens) ∩ Z^n`, where the lattice is the
/// full ambient lattice intersected with the span of `gens`.
pub fn hilbert_basis(gens: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    let Some(n) = gens.first().map(|g| g.rank()) else { return Ok(vec![]) };
    let nz: Vec<_> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nz.is_empty() {
        return Ok(vec![]);
    }
    if !lineality_generators(&nz).is_empty() {
        return Err(Error::NonPointedCone);
    }
    let lattice = LatticeBasis::from_basis(saturated_span(&nz, n), n);
    let coords: Vec<_> = nz.iter().map(|g| lattice.coords(g).expect("in saturated span")).collect();
    let hb = hilbert_basis_full(&coords, lattice.rank())?;
    let mut out: Vec<_> = hb.iter().map(|c| lattice.to_ambient(c)).collect();
    out.sort();
    Ok(out)
}

/// A saturated monoid `cone ∩ Λ` split as (sharp part) ⊕ (unit lattice).
///
/// `basis` is a basis of `Λ` in ambient coordinates: the first `sharp_rank`
/// rows are a section of `Λ → Λ/units`, the remaining `unit_rank` rows are the
/// Hermite basis of the unit lattice. `sharp_gens` are written in the
/// coordinates of the first block.
#[derive(Clone, Debug)]
pub struct SplitMonoid {
    pub ambient: usize,
    pub basis: Vec<LatticeVector>,
    pub sharp_rank: usize,
    pub unit_rank: usize,
    pub sharp_gens: Vec<LatticeVector>,
}

impl SplitMonoid {
    pub fn lattice(&self) -> LatticeBasis {
        LatticeBasis::from_basis(self.basis.clone(), self.ambient)
    }

    pub fn units(&self) -> &[LatticeVector] {
        &self.basis[self.sharp_rank..]
    }

    /// Ambient image of a sharp-part coordinate vector (zero unit part).
    pub fn lift(&self, q: &LatticeVector) -> LatticeVector {
        let mut out = LatticeVector::zero(self.ambient);
        for (x, row) in q.0.iter().zip(&self.basis) {
            if !x.is_zero() {
                out = &out + &row.scale(x);
            }
        }
        out
    }

    /// Sharp generators as ambient vectors reduced modulo the unit lattice.
    pub fn canonical_lifts(&self) -> Vec<LatticeVector> {
        let mut out: Vec<_> =
            self.sharp_gens.iter().map(|q| hermite_reduce(&self.lift(q), self.units())).collect();
        out.sort();
        out
    }
}

/// Saturates the monoid generated by `gens` inside `lattice` (default: the
/// group they generate), i.e. computes `cone(gens) ∩ lattice`. The cone need
/// not be pointed.
pub fn saturate_in(gens: &[LatticeVector], lattice: Option<&LatticeBasis>, ambient: usize) -> SplitMonoid {
    try_saturate_in(gens, lattice, ambient).expect("saturation within size guard")
}

pub fn try_saturate_in(
    gens: &[LatticeVector],
    lattice: Option<&LatticeBasis>,
    ambient: usize,
) -> Result<SplitMonoid> {
    let owned;
    let lat = match lattice {
        Some(l) => l,
        None => {
            owned = LatticeBasis::generated_by(gens, ambient);
            &owned
        }
    };
    let k = lat.rank();
    let coords: Vec<LatticeVector> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| lat.ray_coords(g).expect("generator outside the lattice span"))
        .collect();
    let lin = lineality_generators(&coords);
    let units_k = if lin.is_empty() {
        vec![]
    } else {
        let rows: Vec<_> = lin.iter().map(|&i| coords[i].clone()).collect();
        saturated_span(&rows, k)
    };
    let u = units_k.len();
    let (section_k, project): (Vec<LatticeVector>, Box<dyn Fn(&LatticeVector) -> LatticeVector>) =
        if u == 0 {
            ((0..k).map(|i| LatticeVector::unit(k, i)).collect(), Box::new(|v: &LatticeVector| v.clone()))
        } else {
            let snf = smith_normal_form(&IntMatrix::from_rows(&units_k, k));
            debug_assert!(snf.invariant_factors().iter().all(|d| d.is_one()));
            let section = (u..k).map(|i| snf.right_inv.row(i)).collect();
            let right = snf.right.clone();
            (section, Box::new(move |v: &LatticeVector| LatticeVector(right.apply_row(&v.0).0[u..].to_vec())))
        };
    let proj: Vec<_> = coords.iter().map(|c| project(c)).filter(|p| !p.is_zero()).collect();
    let sharp_gens = hilbert_basis_full(&proj, k - u)?;
    let units_amb = hermite_rows(&units_k.iter().map(|c| lat.to_ambient(c)).collect::<Vec<_>>(), ambient);
    let mut basis: Vec<_> = section_k.iter().map(|c| lat.to_ambient(c)).collect();
    basis.extend(units_amb);
    Ok(SplitMonoid { ambient, basis, sharp_rank: k - u, unit_rank: u, sharp_gens })
}

/// Result of [`saturate`]: minimal generators of the sharp part (canonical
/// lifts) and a Hermite basis of the unit lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    pub monoid_gens: Vec<LatticeVector>,
    pub units: Vec<LatticeVector>,
}

pub fn saturate(gens: &[LatticeVector]) -> Saturation {
    let Some(n) = gens.first().map(|g| g.rank()) else {
        return Saturation { monoid_gens: vec![], units: vec![] };
    };
    let s = saturate_in(gens, None, n);
    Saturation { monoid_gens: s.canonical_lifts(), units: s.units().to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vector::lv;

    #[test]
    fn smooth_cone() {
        assert_eq!(hilbert_basis(&[lv(&[1, 0]), lv(&[0, 1])]).unwrap(), vec![lv(&[0, 1]), lv(&[1, 0])]);
    }

    #[test]
    fn a3_cone() {
        let hb = hilbert_basis(&[lv(&[1, 0]), lv(&[1, 3])]).unwrap();
        assert_eq!(hb, vec![lv(&[1, 0]), lv(&[1, 1]), lv(&[1, 2]), lv(&[1, 3])]);
    }

    #[test]
    fn skew_cone() {
        let hb = hilbert_basis(&[lv(&[0, 1]), lv(&[2, -1])]).unwrap();
        assert_eq!(hb, vec![lv(&[0, 1]), lv(&[1, 0]), lv(&[2, -1])]);
    }

    #[test]
    fn non_pointed_rejected() {
        assert_eq!(hilbert_basis(&[lv(&[1, 0]), lv(&[-1, 0])]), Err(Error::NonPointedCone));
    }

    #[test]
    fn saturate_examples() {
        let s = saturate(&[lv(&[2]), lv(&[3])]);
        assert_eq!(s.monoid_gens, vec![lv(&[1])]);
        assert!(s.units.is_empty());
        let s = saturate(&[lv(&[1, 0]), lv(&[0, 1])]);
        assert_eq!(s.monoid_gens, vec![lv(&[0, 1]), lv(&[1, 0])]);
        let s = saturate(&[lv(&[1, 0]), lv(&[-1, 0])]);
        assert_eq!(s.units, vec![lv(&[1, 0])]);
        assert!(s.monoid_gens.is_empty());
    }

    #[test]
    fn saturate_half_plane() {
        // upper half plane: units along x, sharp part generated by (0,1)
        let s = saturate(&[lv(&[1, 0]), lv(&[-1, 0]), lv(&[3, 1])]);
        assert_eq!(s.units, vec![lv(&[1, 0])]);
        assert_eq!(s.monoid_gens, vec![lv(&[0, 1])]);
    }

    #[test]
    fn index_three_lattice() {
        // x + y ≡ 0 mod 3 in the first quadrant
        let s = saturate(&[lv(&[3, 0]), lv(&[0, 3]), lv(&[1, 2]), lv(&[2, 1])]);
        assert_eq!(s.monoid_gens, vec![lv(&[0, 3]), lv(&[1, 2]), lv(&[2, 1]), lv(&[3, 0])]);
    }
}
