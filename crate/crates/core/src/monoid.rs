//! Sharp fs monoids inside integer lattices.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    invariant_lattice, try_saturate_in, CharacterMap, LatticeBasis, LatticeVector, PointedCone, SplitMonoid,
    Subgroup,
};

/// A sharp, fine, saturated submonoid of `Z^n`, stored by its minimal
/// generators. The group `M^gp` may be a proper sublattice.
#[derive(Clone, Debug)]
pub struct FsMonoid {
    ambient: usize,
    gens: Vec<LatticeVector>,
    lattice: LatticeBasis,
    // cone in the coordinates of `lattice`
    cone: PointedCone,
}

impl PartialEq for FsMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.gens == other.gens
    }
}

impl Eq for FsMonoid {}

impl FsMonoid {
    /// Saturation of the monoid generated by `gens` in the group they
    /// generate. Fails if the result has nontrivial units.
    pub fn new(gens: &[LatticeVector], ambient: usize) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.rank() != ambient) {
            return Err(Error::InvalidInput(format!("generator {g} has rank {} but the lattice has rank {ambient}", g.rank())));
        }
        let split = try_saturate_in(gens, None, ambient)?;
        if split.unit_rank > 0 {
            return Err(Error::NonPointedCone);
        }
        Ok(Self::from_split(&split))
    }

    /// The sharp part of a split monoid, in the coordinates of its section.
    pub fn sharp_part(split: &SplitMonoid) -> Self {
        Self::from_minimal(split.sharp_gens.clone(), split.sharp_rank)
    }

    fn from_split(split: &SplitMonoid) -> Self {
        debug_assert_eq!(split.unit_rank, 0);
        Self::from_minimal(split.canonical_lifts(), split.ambient)
    }

    /// `gens` must already be the sorted Hilbert basis of a sharp saturated monoid.
    pub(crate) fn from_minimal(gens: Vec<LatticeVector>, ambient: usize) -> Self {
        let lattice = LatticeBasis::generated_by(&gens, ambient);
        let coords: Vec<_> = gens.iter().map(|g| lattice.coords(g).expect("generator in its own group")).collect();
        let cone = PointedCone::new(&coords, lattice.rank());
        FsMonoid { ambient, gens, lattice, cone }
    }

    pub fn zero(ambient: usize) -> Self {
        Self::from_minimal(vec![], ambient)
    }

    /// `N^n` with the standard basis.
    pub fn free(n: usize) -> Self {
        let mut gens: Vec<_> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
        gens.sort();
        Self::from_minimal(gens, n)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.gens
    }

    /// Rank of `M^gp`.
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    /// Inner facet normals, in the coordinates of `M^gp`.
    pub fn facets(&self) -> &[LatticeVector] {
        &self.cone.facets
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        match self.lattice.coords(v) {
            Some(c) => self.cone.contains(&c),
            None => false,
        }
    }

    /// Whether `a` divides `b`, i.e. `b - a ∈ M`.
    pub fn divides(&self, a: &LatticeVector, b: &LatticeVector) -> Result<bool> {
        for x in [a, b] {
            if !self.contains(x) {
                return Err(Error::ElementNotInMonoid(x.to_string()));
            }
        }
        Ok(self.contains(&(b - a)))
    }

    /// A linear form on `M^gp` coordinates that is positive on `M \ {0}`.
    pub fn grading(&self) -> LatticeVector {
        self.cone.grading()
    }

    pub fn degree(&self, v: &LatticeVector) -> BigInt {
        let c = self.lattice.coords(v).expect("vector in the monoid's group");
        c.dot(&self.grading().0)
    }

    /// All faces, ordered by dimension and then by their generator lists.
    pub fn faces(&self) -> Vec<Face> {
        let k = self.rank();
        let nf = self.cone.facets.len();
        let coords: Vec<_> = self.gens.iter().map(|g| self.lattice.coords(g).unwrap()).collect();
        // a face is determined by the set of generators it contains
        let on_facet: Vec<Vec<bool>> = self
            .cone
            .facets
            .iter()
            .map(|f| coords.iter().map(|c| c.dot(&f.0).is_zero()).collect())
            .collect();
        let closure = |mask: &[bool]| -> Vec<usize> {
            (0..nf).filter(|&i| mask.iter().zip(&on_facet[i]).all(|(&m, &o)| !m || o)).collect()
        };
        let mut seen: Vec<Vec<bool>> = vec![vec![true; self.gens.len()]];
        let mut queue = vec![vec![true; self.gens.len()]];
        while let Some(mask) = queue.pop() {
            for i in 0..nf {
                let next: Vec<bool> = mask.iter().zip(&on_facet[i]).map(|(&a, &b)| a && b).collect();
                if next != mask && !seen.contains(&next) {
                    seen.push(next.clone());
                    queue.push(next);
                }
            }
        }
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|mask| {
                let gens: Vec<_> =
                    self.gens.iter().zip(&mask).filter(|(_, &m)| m).map(|(g, _)| g.clone()).collect();
                let normals = closure(&mask);
                let mut functional = normals
                    .iter()
                    .fold(LatticeVector::zero(k), |acc, &i| &acc + &self.cone.facets[i]);
                if !functional.is_zero() {
                    functional = functional.primitive();
                }
                let dim = LatticeBasis::generated_by(&gens, self.ambient).rank();
                Face { generators: gens, indicator: mask, functional, dim }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.generators).cmp(&(b.dim, &b.generators)));
        faces
    }

    /// Checks that `face` is a face of this monoid.
    pub fn check_face(&self, face: &Face) -> Result<()> {
        if face.indicator.len() != self.gens.len() {
            return Err(Error::NotAFace);
        }
        let coords: Vec<_> = self.gens.iter().map(|g| self.lattice.coords(g).unwrap()).collect();
        let f = &face.functional;
        if f.rank() != self.rank() {
            return Err(Error::NotAFace);
        }
        for (c, &m) in coords.iter().zip(&face.indicator) {
            let v = c.dot(&f.0);
            if v.is_negative() || (v.is_zero() != m) {
                return Err(Error::NotAFace);
            }
        }
        Ok(())
    }

    /// Face containing exactly the given generators, if there is one.
    pub fn face_from_generators(&self, gens: &[LatticeVector]) -> Result<Face> {
        let mut want: Vec<_> = gens.to_vec();
        want.sort();
        want.dedup();
        self.faces().into_iter().find(|f| f.generators == want).ok_or(Error::NotAFace)
    }

    /// Sharpened localization `M[-F] / F^gp` and the cospecialization map.
    pub fn localize_at_face(&self, face: &Face) -> Result<Localization> {
        self.check_face(face)?;
        let mut gens = self.gens.clone();
        gens.extend(face.generators.iter().map(|g| -g));
        let split = try_saturate_in(&gens, Some(&self.lattice), self.ambient)?;
        debug_assert_eq!(split.unit_rank, face.dim);
        let monoid = FsMonoid::sharp_part(&split);
        let lattice = split.lattice();
        Ok(Localization { monoid, split, lattice })
    }

    /// `{m ∈ M : χ(m) is trivial on H}`.
    pub fn invariant_submonoid(&self, chi: &CharacterMap, h: &Subgroup) -> Result<FsMonoid> {
        if chi.rank() != self.ambient {
            return Err(Error::InvalidInput("character map rank differs from the monoid's lattice".into()));
        }
        if h.is_trivial() || self.is_zero() {
            return Ok(self.clone());
        }
        let l0 = invariant_lattice(&self.lattice, chi, &h.generators());
        let k = BigInt::from(h.order());
        let scaled: Vec<_> = self.gens.iter().map(|g| g.scale(&k)).collect();
        let split = try_saturate_in(&scaled, Some(&l0), self.ambient)?;
        Ok(FsMonoid::from_split(&split))
    }
}

/// A face of an fs monoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    /// Monoid generators lying on the face, sorted.
    pub generators: Vec<LatticeVector>,
    /// Membership of each monoid generator, in generator order.
    pub indicator: Vec<bool>,
    /// Supporting functional in `M^gp` coordinates: nonnegative on `M`, zero
    /// exactly on the face. The sum of the facet normals through the face,
    /// made primitive.
    pub functional: LatticeVector,
    pub dim: usize,
}

impl Face {
    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn lattice(&self, ambient: usize) -> LatticeBasis {
        LatticeBasis::generated_by(&self.generators, ambient)
    }
}

/// Result of localizing at a face.
#[derive(Clone, Debug)]
pub struct Localization {
    /// The sharp monoid `M̄_{x'}`, in quotient coordinates.
    pub monoid: FsMonoid,
    pub split: SplitMonoid,
    lattice: LatticeBasis,
}

impl Localization {
    /// Cospecialization `M^gp → M^gp / F^gp` in quotient coordinates.
    pub fn cosp(&self, v: &LatticeVector) -> LatticeVector {
        let c = self.lattice.coords(v).expect("vector in M^gp");
        LatticeVector(c.0[..self.split.sharp_rank].to_vec())
    }
}

/// `v ∈ M`.
pub fn monoid_membership(v: &LatticeVector, m: &FsMonoid) -> bool {
    m.contains(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{lv, FiniteAbelianGroup};

    fn root_monoid() -> FsMonoid {
        FsMonoid::new(&[lv(&[3, 0]), lv(&[0, 3]), lv(&[1, 2]), lv(&[2, 1])], 2).unwrap()
    }

    #[test]
    fn construction_saturates() {
        let m = FsMonoid::new(&[lv(&[2]), lv(&[3])], 1).unwrap();
        assert_eq!(m.generators(), &[lv(&[1])]);
        assert_eq!(FsMonoid::new(&[lv(&[1]), lv(&[-1])], 1), Err(Error::NonPointedCone));
        let z = FsMonoid::new(&[], 2).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.faces().len(), 1);
    }

    #[test]
    fn membership_examples() {
        let m = root_monoid();
        assert!(!m.contains(&lv(&[1, 1])));
        assert!(m.contains(&lv(&[1, 2])));
        assert!(m.contains(&lv(&[0, 0])));
        assert!(!m.contains(&lv(&[-1, 4])));
    }

    #[test]
    fn divides_examples() {
        let m = root_monoid();
        assert!(m.divides(&lv(&[1, 2]), &lv(&[3, 3])).unwrap());
        assert!(m.divides(&lv(&[1, 2]), &lv(&[1, 2])).unwrap());
        let n2 = FsMonoid::free(2);
        assert!(!n2.divides(&lv(&[0, 3]), &lv(&[1, 2])).unwrap());
        assert!(matches!(m.divides(&lv(&[1, 1]), &lv(&[3, 3])), Err(Error::ElementNotInMonoid(_))));
    }

    #[test]
    fn faces_examples() {
        let n2 = FsMonoid::free(2);
        let f = n2.faces();
        assert_eq!(f.len(), 4);
        assert!(f[0].is_zero());
        assert_eq!(f[3].generators.len(), 2);
        assert_eq!(FsMonoid::free(1).faces().len(), 2);
        let m = FsMonoid::new(&[lv(&[0, 1]), lv(&[1, 1]), lv(&[2, 1])], 2).unwrap();
        assert_eq!(m.faces().len(), 4);
        for face in m.faces() {
            m.check_face(&face).unwrap();
        }
    }

    #[test]
    fn localization_examples() {
        let n2 = FsMonoid::free(2);
        let x_axis = n2.face_from_generators(&[lv(&[1, 0])]).unwrap();
        let loc = n2.localize_at_face(&x_axis).unwrap();
        assert_eq!(loc.monoid.rank(), 1);
        assert_eq!(loc.monoid.generators().len(), 1);
        assert!(loc.cosp(&lv(&[1, 0])).is_zero());
        assert!(loc.monoid.contains(&loc.cosp(&lv(&[0, 1]))));
        let zero = n2.face_from_generators(&[]).unwrap();
        assert_eq!(n2.localize_at_face(&zero).unwrap().monoid.rank(), 2);
        let full = n2.face_from_generators(&[lv(&[0, 1]), lv(&[1, 0])]).unwrap();
        assert!(n2.localize_at_face(&full).unwrap().monoid.is_zero());
    }

    #[test]
    fn invariant_submonoids() {
        let g = FiniteAbelianGroup::cyclic(2);
        let whole = Subgroup::whole(&g).unwrap();
        let n = FsMonoid::free(1);
        let chi = CharacterMap { group: g.clone(), images: vec![vec![1]] };
        assert_eq!(n.invariant_submonoid(&chi, &whole).unwrap().generators(), &[lv(&[2])]);
        assert_eq!(n.invariant_submonoid(&chi, &Subgroup::trivial(&g)).unwrap(), n);
        let chi2 = CharacterMap { group: g.clone(), images: vec![vec![1], vec![1]] };
        let inv = FsMonoid::free(2).invariant_submonoid(&chi2, &whole).unwrap();
        assert_eq!(inv.generators(), &[lv(&[0, 2]), lv(&[1, 1]), lv(&[2, 0])]);
    }
}
