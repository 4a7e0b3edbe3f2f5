//! Quotients of charts by subgroups: invariant charts, the total toroidal
//! coarsening and the coarse space.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::{ChartPoint, GroupAction, StabilizerReport, ToroidalChart};
use crate::error::{Error, Result};
use crate::lattice::{
    invariant_lattice, try_saturate_in, CharacterMap, Element, FiniteAbelianGroup, IntMatrix, LatticeBasis,
    LatticeVector, Quotient, Subgroup,
};
use crate::monoid::FsMonoid;

/// The chart `W/H` with its residual action of `G/H`.
#[derive(Clone, Debug)]
pub struct InvariantChart {
    pub chart: ToroidalChart,
    /// Rows: the new extended basis written in the parent's extended coordinates.
    pub to_parent: IntMatrix,
    pub subgroup: Subgroup,
    /// `None` when `H` is trivial and the group is unchanged.
    pub quotient: Option<Quotient>,
}

impl InvariantChart {
    pub fn project(&self, g: &[u64]) -> Element {
        match &self.quotient {
            Some(q) => q.project(g),
            None => g.to_vec(),
        }
    }

    /// Image of a parent point in the invariant chart.
    pub fn image_point(&self, parent: &ToroidalChart, p: &ChartPoint) -> Result<ChartPoint> {
        let n = parent.monomial_rank();
        let lat = parent.monoid.lattice();
        let mut on_face = Vec::new();
        for g in self.chart.monoid.generators() {
            let v = self.lift_monomial(g);
            let m = LatticeVector(v.0[..n].to_vec());
            let c = lat.coords(&m).ok_or_else(|| Error::InvariantViolated("invariant monomial outside M^gp".into()))?;
            if c.dot(&p.face.functional.0).is_zero() {
                on_face.push(g.clone());
            }
        }
        let face = self.chart.monoid.face_from_generators(&on_face)?;
        Ok(ChartPoint { face, vanishing: p.vanishing.clone() })
    }

    /// Parent extended vector of a monomial of the invariant chart.
    pub fn lift_monomial(&self, m: &LatticeVector) -> LatticeVector {
        let v = self.chart.embed_monomial(m);
        self.to_parent.apply_row(&v.0)
    }
}

fn extended_lattice(chart: &ToroidalChart, with_t: bool) -> LatticeBasis {
    let n = chart.monomial_rank();
    let e = n + chart.unit_rank + if with_t { chart.t_count } else { 0 };
    let mut rows: Vec<_> = chart.monoid.lattice().rows().iter().map(|r| r.padded(e - n)).collect();
    rows.extend((n..e).map(|i| LatticeVector::unit(e, i)));
    LatticeBasis::from_basis(rows, e)
}

fn truncated_chars(chart: &ToroidalChart, len: usize) -> CharacterMap {
    CharacterMap { group: chart.action.group.clone(), images: chart.action.chars.images[..len].to_vec() }
}

fn check_autos(chart: &ToroidalChart, h: &Subgroup) -> Result<()> {
    if chart.action.has_autos() && !h.is_trivial() {
        return Err(Error::UnsupportedAction("quotients by subgroups with lattice automorphisms".into()));
    }
    Ok(())
}

/// The invariant chart under a subgroup acting trivially on the `t`-coordinates.
pub fn invariant_chart(chart: &ToroidalChart, h: &Subgroup) -> Result<InvariantChart> {
    if h.is_trivial() {
        return Ok(InvariantChart {
            chart: chart.clone(),
            to_parent: IntMatrix::identity(chart.ext_rank()),
            subgroup: h.clone(),
            quotient: None,
        });
    }
    check_autos(chart, h)?;
    let group = &chart.action.group;
    for i in 0..chart.t_count {
        if h.elements.iter().any(|g| !group.pairing_is_trivial(chart.t_char(i), g)) {
            return Err(Error::UnsupportedAction(format!("subgroup acts nontrivially on t{}", i + 1)));
        }
    }
    let n = chart.monomial_rank();
    let nu = n + chart.unit_rank;
    let e = chart.ext_rank();
    let hgens = h.generators();
    let l0 = invariant_lattice(&extended_lattice(chart, false), &truncated_chars(chart, nu), &hgens);
    let k = BigInt::from(h.order());
    let mut gens: Vec<_> = chart.monoid.generators().iter().map(|g| g.padded(chart.unit_rank).scale(&k)).collect();
    for j in n..nu {
        let u = LatticeVector::unit(nu, j).scale(&k);
        gens.push(-&u);
        gens.push(u);
    }
    let split = try_saturate_in(&gens, Some(&l0), nu)?;
    let monoid = FsMonoid::sharp_part(&split);
    let mut rows: Vec<_> = split.basis.iter().map(|b| b.padded(chart.t_count)).collect();
    rows.extend((nu..e).map(|i| LatticeVector::unit(e, i)));
    let q = Quotient::new(group, &hgens);
    let images = rows.iter().map(|r| q.character(&chart.char_of(r))).collect::<Result<Vec<_>>>()?;
    let action = GroupAction {
        group: q.quotient.clone(),
        chars: CharacterMap { group: q.quotient.clone(), images },
        lattice_autos: vec![],
    };
    let new_chart = ToroidalChart::new(monoid, split.unit_rank, chart.t_count, action)?;
    Ok(InvariantChart { chart: new_chart, to_parent: IntMatrix::from_rows(&rows, e), subgroup: h.clone(), quotient: Some(q) })
}

/// Kernel of `G_x → (G/H)_{x̄}`, after checking that `G_x` maps onto the
/// stabilizer of the image point computed in the invariant chart.
pub fn relative_stabilizer(parent: &ToroidalChart, inv: &InvariantChart, p: &ChartPoint) -> Result<Subgroup> {
    let g_x = parent.stabilizer(p)?;
    let image = inv.image_point(parent, p)?;
    let q_x = inv.chart.stabilizer(&image)?;
    let mut kernel = Vec::new();
    let mut hit = std::collections::BTreeSet::new();
    for g in &g_x.elements {
        let pg = inv.project(g);
        if !q_x.contains(&pg) {
            return Err(Error::InvariantViolated(format!("stabilizer element does not fix the image of {p}")));
        }
        if pg.iter().all(|&x| x == 0) {
            kernel.push(g.clone());
        }
        hit.insert(pg);
    }
    if hit.len() as u64 != q_x.order() {
        return Err(Error::InvariantViolated(format!("stabilizer at {p} does not surject onto the quotient stabilizer")));
    }
    Subgroup::generated_by(&g_x.group, &kernel)
}

/// The total toroidal coarsening of a chart.
#[derive(Clone, Debug)]
pub struct Coarsening {
    pub invariant: InvariantChart,
    pub reports: Vec<StabilizerReport>,
}

impl Coarsening {
    pub fn chart(&self) -> &ToroidalChart {
        &self.invariant.chart
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.invariant.subgroup
    }
}

pub fn coarsen_toroidal(chart: &ToroidalChart) -> Result<Coarsening> {
    let points = chart.points();
    let reports = points.par_iter().map(|p| chart.toroidal_stabilizer(p)).collect::<Result<Vec<_>>>()?;
    let mut h = Subgroup::trivial(&chart.action.group);
    for r in &reports {
        if !r.g_tor.is_subgroup_of(&h) {
            h = h.join(&r.g_tor)?;
        }
    }
    for r in &reports {
        if h.intersect(&r.g_x) != r.g_tor {
            return Err(Error::NoUniformToroidalSubgroup(r.point.to_string()));
        }
    }
    let invariant = invariant_chart(chart, &h)?;
    for r in &reports {
        if relative_stabilizer(chart, &invariant, &r.point)? != r.g_tor {
            return Err(Error::InvariantViolated(format!("relative stabilizer at {}", r.point)));
        }
    }
    Ok(Coarsening { invariant, reports })
}

/// Invariants of the extended monoid `M ⊕ Z^u ⊕ N^n` under the whole group,
/// in the chart's extended coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseSpace {
    pub ext_rank: usize,
    pub generators: Vec<LatticeVector>,
    pub units: Vec<LatticeVector>,
}

pub fn coarse_space(chart: &ToroidalChart) -> Result<CoarseSpace> {
    let group = &chart.action.group;
    let whole = whole_generators(group);
    if chart.action.has_autos() && !group.is_trivial() {
        return Err(Error::UnsupportedAction("coarse spaces with lattice automorphisms".into()));
    }
    let e = chart.ext_rank();
    let l0 = invariant_lattice(&extended_lattice(chart, true), &chart.action.chars, &whole);
    let k = BigInt::from(group.order());
    let gens: Vec<_> = chart.ext_generators().iter().map(|g| g.scale(&k)).collect();
    let split = try_saturate_in(&gens, Some(&l0), e)?;
    Ok(CoarseSpace { ext_rank: e, generators: split.canonical_lifts(), units: split.units().to_vec() })
}

fn whole_generators(group: &FiniteAbelianGroup) -> Vec<Element> {
    (0..group.orders.len())
        .filter(|&i| group.orders[i] > 1)
        .map(|i| {
            let mut g = group.identity();
            g[i] = 1;
            g
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lv;

    fn two_factor_chart() -> ToroidalChart {
        let g = FiniteAbelianGroup::new(vec![2, 2]);
        let chars = CharacterMap { group: g.clone(), images: vec![vec![1, 0], vec![0, 1]] };
        ToroidalChart::new(FsMonoid::free(1), 0, 1, GroupAction { group: g, chars, lattice_autos: vec![] }).unwrap()
    }

    #[test]
    fn coarsening_example() {
        let c = two_factor_chart();
        let co = coarsen_toroidal(&c).unwrap();
        assert_eq!(co.subgroup().order(), 2);
        assert_eq!(co.chart().monoid.generators(), &[lv(&[1])]);
        assert_eq!(co.invariant.lift_monomial(&lv(&[1])), lv(&[2, 0]));
        assert_eq!(co.chart().group().order(), 2);
        assert!(!co.chart().t_char(0).iter().all(|&x| x == 0));
        assert!(co.chart().monomial_char(&lv(&[1])).iter().all(|&x| x == 0));
    }

    #[test]
    fn trivial_action_unchanged() {
        let c = ToroidalChart::untwisted(FsMonoid::free(2), 0, 1);
        let co = coarsen_toroidal(&c).unwrap();
        assert_eq!(co.chart(), &c);
    }

    #[test]
    fn coarse_space_of_reflection() {
        // Z/2 acting by -1 on s and t
        let g = FiniteAbelianGroup::cyclic(2);
        let chars = CharacterMap { group: g.clone(), images: vec![vec![1], vec![1]] };
        let c = ToroidalChart::new(FsMonoid::free(1), 0, 1, GroupAction { group: g, chars, lattice_autos: vec![] })
            .unwrap();
        let cs = coarse_space(&c).unwrap();
        assert_eq!(cs.generators, vec![lv(&[0, 2]), lv(&[1, 1]), lv(&[2, 0])]);
        assert!(cs.units.is_empty());
        let (ok, witness) = c.is_destackified().unwrap();
        assert!(!ok);
        assert_eq!(witness.unwrap(), c.origin());
    }

    #[test]
    fn coarse_space_trivial_group() {
        let c = ToroidalChart::untwisted(FsMonoid::free(1), 0, 2);
        let cs = coarse_space(&c).unwrap();
        assert_eq!(cs.generators, vec![lv(&[0, 0, 1]), lv(&[0, 1, 0]), lv(&[1, 0, 0])]);
    }
}
