//! Toroidal charts `Spec B[M ⊕ Z^u, t_1..t_n]` with diagonalizable group
//! actions, their combinatorial points and stabilizers.
//!
//! Coordinates of the extended lattice are laid out as
//! `[monomial lattice | unit lattice | t-coordinates]`. A point is the
//! distinguished point of a stratum: monomials of the face `F` and the
//! coordinates `t_i` with `i ∉ S` take the value 1, all other monomials and
//! the `t_i` with `i ∈ S` vanish.

mod coarsen;

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{CharacterMap, Element, FiniteAbelianGroup, IntMatrix, LatticeVector, Subgroup};
use crate::monoid::{Face, FsMonoid};

pub use coarsen::{
    coarse_space, coarsen_toroidal, invariant_chart, relative_stabilizer, CoarseSpace, Coarsening, InvariantChart,
};

/// A diagonalizable group acting by characters, optionally combined with
/// lattice automorphisms of the monomial lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub group: FiniteAbelianGroup,
    /// Character of every extended-lattice coordinate.
    pub chars: CharacterMap,
    /// One matrix per cyclic factor of the group, acting on row vectors of
    /// the monomial lattice. Empty for pure character actions.
    pub lattice_autos: Vec<IntMatrix>,
}

impl GroupAction {
    pub fn trivial(group: &FiniteAbelianGroup, ext_rank: usize) -> Self {
        GroupAction { group: group.clone(), chars: CharacterMap::trivial(group, ext_rank), lattice_autos: vec![] }
    }

    pub fn has_autos(&self) -> bool {
        !self.lattice_autos.is_empty()
    }

    /// `A_g = Π A_i^{g_i}`, or `None` for pure character actions.
    pub fn lattice_part(&self, g: &[u64]) -> Option<IntMatrix> {
        if self.lattice_autos.is_empty() {
            return None;
        }
        let n = self.lattice_autos[0].rows();
        let mut acc = IntMatrix::identity(n);
        for (a, &e) in self.lattice_autos.iter().zip(g) {
            for _ in 0..e {
                acc = acc.mul(a);
            }
        }
        Some(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToroidalChart {
    pub monoid: FsMonoid,
    pub unit_rank: usize,
    pub t_count: usize,
    pub action: GroupAction,
}

impl ToroidalChart {
    pub fn new(monoid: FsMonoid, unit_rank: usize, t_count: usize, action: GroupAction) -> Result<Self> {
        let chart = ToroidalChart { monoid, unit_rank, t_count, action };
        chart.validate()?;
        Ok(chart)
    }

    /// Chart with the trivial group.
    pub fn untwisted(monoid: FsMonoid, unit_rank: usize, t_count: usize) -> Self {
        let ext = monoid.ambient() + unit_rank + t_count;
        ToroidalChart { monoid, unit_rank, t_count, action: GroupAction::trivial(&FiniteAbelianGroup::trivial(), ext) }
    }

    fn validate(&self) -> Result<()> {
        let a = &self.action;
        if a.chars.rank() != self.ext_rank() {
            return Err(Error::InvalidInput(format!(
                "character map has {} rows but the extended lattice has rank {}",
                a.chars.rank(),
                self.ext_rank()
            )));
        }
        if a.chars.group != a.group {
            return Err(Error::InvalidInput("character map uses a different group".into()));
        }
        for img in &a.chars.images {
            if img.len() != a.group.orders.len() || img.iter().zip(&a.group.orders).any(|(x, q)| x >= q) {
                return Err(Error::InvalidInput("character values must be reduced residues".into()));
            }
        }
        if a.lattice_autos.is_empty() {
            return Ok(());
        }
        if a.lattice_autos.len() != a.group.orders.len() {
            return Err(Error::InvalidInput("need one lattice automorphism per cyclic factor".into()));
        }
        let n = self.monoid.ambient();
        let gens = self.monoid.generators();
        for (i, m) in a.lattice_autos.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::InvalidInput("lattice automorphism has the wrong size".into()));
            }
            let mut images: Vec<_> = gens.iter().map(|g| m.apply_row(&g.0)).collect();
            images.sort();
            if images != gens {
                return Err(Error::InvalidInput(format!("lattice automorphism {} does not preserve the monoid", i + 1)));
            }
            let mut p = IntMatrix::identity(n);
            for _ in 0..a.group.orders[i] {
                p = p.mul(m);
            }
            if p != IntMatrix::identity(n) {
                return Err(Error::InvalidInput(format!("lattice automorphism {} has the wrong order", i + 1)));
            }
            for other in &a.lattice_autos {
                if m.mul(other) != other.mul(m) {
                    return Err(Error::InvalidInput("lattice automorphisms must commute".into()));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.action.group
    }

    pub fn monomial_rank(&self) -> usize {
        self.monoid.ambient()
    }

    pub fn ext_rank(&self) -> usize {
        self.monoid.ambient() + self.unit_rank + self.t_count
    }

    pub fn unit_index(&self, j: usize) -> usize {
        self.monoid.ambient() + j
    }

    pub fn t_index(&self, i: usize) -> usize {
        self.monoid.ambient() + self.unit_rank + i
    }

    /// Pads a monomial-lattice vector to the extended lattice.
    pub fn embed_monomial(&self, m: &LatticeVector) -> LatticeVector {
        m.padded(self.unit_rank + self.t_count)
    }

    pub fn char_of(&self, v: &LatticeVector) -> Element {
        self.action.chars.apply(v)
    }

    pub fn monomial_char(&self, m: &LatticeVector) -> Element {
        self.char_of(&self.embed_monomial(m))
    }

    pub fn t_char(&self, i: usize) -> &Element {
        &self.action.chars.images[self.t_index(i)]
    }

    pub fn unit_char(&self, j: usize) -> &Element {
        &self.action.chars.images[self.unit_index(j)]
    }

    /// Generators of the extended monoid `M ⊕ Z^u ⊕ N^n`: monoid generators,
    /// both signs of every unit coordinate, and the `t`-coordinates.
    pub fn ext_generators(&self) -> Vec<LatticeVector> {
        let e = self.ext_rank();
        let mut out: Vec<_> = self.monoid.generators().iter().map(|g| self.embed_monomial(g)).collect();
        for j in 0..self.unit_rank {
            let u = LatticeVector::unit(e, self.unit_index(j));
            out.push(-&u);
            out.push(u);
        }
        out.extend((0..self.t_count).map(|i| LatticeVector::unit(e, self.t_index(i))));
        out
    }

    /// Membership in the extended monoid `M ⊕ Z^u ⊕ N^n`.
    pub fn ext_contains(&self, v: &LatticeVector) -> bool {
        let n = self.monomial_rank();
        let m = LatticeVector(v.0[..n].to_vec());
        self.monoid.contains(&m) && v.0[n + self.unit_rank..].iter().all(|x| !x.is_negative())
    }

    /// All combinatorial points: every face with every vanishing set.
    pub fn points(&self) -> Vec<ChartPoint> {
        let faces = self.monoid.faces();
        let mut out = Vec::new();
        for face in &faces {
            for mask in 0u64..(1u64 << self.t_count) {
                let vanishing = (0..self.t_count).filter(|i| mask >> i & 1 == 1).collect();
                out.push(ChartPoint { face: face.clone(), vanishing });
            }
        }
        out
    }

    /// The origin: zero face, every `t` vanishing.
    pub fn origin(&self) -> ChartPoint {
        let face = self.monoid.faces().into_iter().next().expect("the zero face exists");
        ChartPoint { face, vanishing: (0..self.t_count).collect() }
    }

    pub fn check_point(&self, p: &ChartPoint) -> Result<()> {
        self.monoid.check_face(&p.face).map_err(|_| Error::InvalidPoint("face is not a face of the chart monoid".into()))?;
        if let Some(i) = p.vanishing.iter().find(|&&i| i >= self.t_count) {
            return Err(Error::InvalidPoint(format!("t{} does not exist", i + 1)));
        }
        Ok(())
    }

    fn char_trivial(&self, g: &[u64], v: &LatticeVector) -> bool {
        self.action.group.pairing_is_trivial(&self.char_of(v), g)
    }

    fn fixes_point(&self, g: &Element, p: &ChartPoint) -> bool {
        let e = self.ext_rank();
        if let Some(a) = self.action.lattice_part(g) {
            let mut img: Vec<_> = p.face.generators.iter().map(|f| a.apply_row(&f.0)).collect();
            img.sort();
            if img != p.face.generators {
                return false;
            }
        }
        p.face.generators.iter().all(|f| self.char_trivial(g, &self.embed_monomial(f)))
            && (0..self.unit_rank).all(|j| self.char_trivial(g, &LatticeVector::unit(e, self.unit_index(j))))
            && (0..self.t_count)
                .filter(|i| !p.vanishing.contains(i))
                .all(|i| self.char_trivial(g, &LatticeVector::unit(e, self.t_index(i))))
    }

    fn fixes_stratum(&self, g: &Element, p: &ChartPoint) -> bool {
        let e = self.ext_rank();
        if let Some(a) = self.action.lattice_part(g) {
            if p.face.generators.iter().any(|f| &a.apply_row(&f.0) != f) {
                return false;
            }
        }
        (0..self.t_count).all(|i| self.char_trivial(g, &LatticeVector::unit(e, self.t_index(i))))
    }

    fn fixes_sharp_stalk(&self, g: &Element, p: &ChartPoint) -> bool {
        let Some(a) = self.action.lattice_part(g) else { return true };
        let face_lattice = p.face.lattice(self.monoid.ambient());
        self.monoid.generators().iter().all(|m| face_lattice.contains(&(&a.apply_row(&m.0) - m)))
    }

    /// `G_x`: the stabilizer of the distinguished point.
    pub fn stabilizer(&self, p: &ChartPoint) -> Result<Subgroup> {
        self.check_point(p)?;
        Subgroup::filter(&self.action.group, |g| self.fixes_point(g, p))
    }

    /// `G_η`: elements of `G_x` acting trivially on the stratum through `x`.
    pub fn generic_stabilizer(&self, p: &ChartPoint) -> Result<Subgroup> {
        self.check_point(p)?;
        Subgroup::filter(&self.action.group, |g| self.fixes_point(g, p) && self.fixes_stratum(g, p))
    }

    /// `G_{M̄_x}`: elements of `G_x` acting trivially on `M̄_x`.
    pub fn monoid_stabilizer(&self, p: &ChartPoint) -> Result<Subgroup> {
        self.check_point(p)?;
        Subgroup::filter(&self.action.group, |g| self.fixes_point(g, p) && self.fixes_sharp_stalk(g, p))
    }

    pub fn toroidal_stabilizer(&self, p: &ChartPoint) -> Result<StabilizerReport> {
        let g_x = self.stabilizer(p)?;
        let g_eta = self.generic_stabilizer(p)?;
        let g_mbar = self.monoid_stabilizer(p)?;
        let g_tor = g_eta.intersect(&g_mbar);
        let simple_at = g_x == g_mbar;
        let toroidal_at = simple_at && g_x == g_eta;
        if !g_tor.is_subgroup_of(&g_x) || (toroidal_at && !simple_at) {
            return Err(Error::InvariantViolated("stabilizer report".into()));
        }
        Ok(StabilizerReport {
            point: p.clone(),
            g_x,
            g_eta,
            g_mbar,
            g_tor,
            simple_at,
            toroidal_at,
            has_lattice_autos: self.action.has_autos(),
        })
    }

    /// Whether `G_x = G_x^tor` at every point; otherwise a witness.
    pub fn is_destackified(&self) -> Result<(bool, Option<ChartPoint>)> {
        for p in self.points() {
            let r = self.toroidal_stabilizer(&p)?;
            if r.g_x != r.g_tor {
                return Ok((false, Some(p)));
            }
        }
        Ok((true, None))
    }

    /// Moves the chosen `t`-coordinates into the monoid: `M ⊕ N^l`.
    ///
    /// Returns the new chart and the rows expressing its extended basis in
    /// the old extended coordinates.
    pub fn enlarge_structure(&self, indices: &[usize]) -> Result<(ToroidalChart, IntMatrix)> {
        let mut chosen: Vec<usize> = indices.to_vec();
        chosen.sort();
        chosen.dedup();
        if let Some(i) = chosen.iter().find(|&&i| i >= self.t_count) {
            return Err(Error::InvalidInput(format!("t{} does not exist", i + 1)));
        }
        let n = self.monoid.ambient();
        let l = chosen.len();
        let e = self.ext_rank();
        let mut order: Vec<usize> = (0..n).collect();
        order.extend(chosen.iter().map(|&i| self.t_index(i)));
        order.extend((0..self.unit_rank).map(|j| self.unit_index(j)));
        order.extend((0..self.t_count).filter(|i| !chosen.contains(i)).map(|i| self.t_index(i)));
        let rows: Vec<_> = order.iter().map(|&i| LatticeVector::unit(e, i)).collect();
        let mut gens: Vec<_> = self.monoid.generators().iter().map(|g| g.padded(l)).collect();
        gens.extend((0..l).map(|j| LatticeVector::unit(n + l, n + j)));
        gens.sort();
        let monoid = FsMonoid::new(&gens, n + l)?;
        let chars = self.action.chars.pullback(&rows);
        let autos = self
            .action
            .lattice_autos
            .iter()
            .map(|a| {
                let mut b = IntMatrix::identity(n + l);
                for r in 0..n {
                    for c in 0..n {
                        b[(r, c)] = a[(r, c)].clone();
                    }
                }
                b
            })
            .collect();
        let action = GroupAction { group: self.action.group.clone(), chars, lattice_autos: autos };
        let chart = ToroidalChart::new(monoid, self.unit_rank, self.t_count - l, action)?;
        Ok((chart, IntMatrix::from_rows(&rows, e)))
    }
}

/// `η(x)`: the generic point of the stratum through `x`.
pub fn eta_point(p: &ChartPoint) -> ChartPoint {
    ChartPoint { face: p.face.clone(), vanishing: vec![] }
}

/// A combinatorial point: a face of `M` and the set of vanishing `t`-indices
/// (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartPoint {
    pub face: Face,
    pub vanishing: Vec<usize>,
}

impl fmt::Display for ChartPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<_> = self.face.generators.iter().map(|g| g.to_string()).collect();
        let s: Vec<_> = self.vanishing.iter().map(|i| format!("t{}", i + 1)).collect();
        write!(f, "F={{{}}} S={{{}}}", gens.join(","), s.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerReport {
    pub point: ChartPoint,
    pub g_x: Subgroup,
    pub g_eta: Subgroup,
    pub g_mbar: Subgroup,
    pub g_tor: Subgroup,
    pub simple_at: bool,
    pub toroidal_at: bool,
    /// Set when lattice automorphisms act; the combinatorial stabilizer can
    /// then be larger than the stabilizer of a general point of the orbit.
    pub has_lattice_autos: bool,
}
