mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use common::{random_element, random_monoid, random_twisted_chart, rng, OracleCone};
use toroidal::blowup::{blowup_charts, BlowupChartSet, PermissibleCenter};
use toroidal::chart::{coarsen_toroidal, ToroidalChart};
use toroidal::format::{ChartDocument, IdealDocument};
use toroidal::ideal::{kummer_descend_je, kummer_descend_jtilde, KummerIdeal, MonomialIdeal};
use toroidal::lattice::{
    cone_membership_int, hilbert_basis, lattice_membership, lv, saturate, smith_normal_form, CharacterMap,
    FiniteAbelianGroup, IntMatrix, LatticeVector, Saturation, Subgroup,
};
use toroidal::monoid::FsMonoid;

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-50i64..=50, c), r))
}

/// Random generators in dimension 2 or 3 spanning a pointed full cone.
fn oracle_cone(seed: u64) -> OracleCone {
    let mut r = rng(seed);
    loop {
        let dim = r.gen_range(2..=3);
        let k = r.gen_range(dim..=dim + 2);
        let gens: Vec<Vec<i64>> = (0..k).map(|_| (0..dim).map(|_| r.gen_range(-3..=3)).collect()).collect();
        if let Some(c) = OracleCone::new(&gens) {
            return c;
        }
    }
}

fn lvs(gens: &[Vec<i64>]) -> Vec<LatticeVector> {
    gens.iter().map(|g| lv(g)).collect()
}

/// Each chart's coordinate ring as a saturated monoid in the coordinates of
/// `outer`'s source (or of the blown-up chart itself), sorted.
fn presentations(set: &BlowupChartSet, outer: Option<&IntMatrix>) -> Vec<Saturation> {
    let mut out: Vec<_> = set
        .charts
        .iter()
        .map(|bc| {
            let imgs = bc.chart.ext_generators().into_iter().map(|g| bc.to_parent.apply_row(&g.0)).map(|v| match outer {
                Some(m) => m.apply_row(&v.0),
                None => v,
            });
            saturate(&imgs.collect::<Vec<_>>())
        })
        .collect();
    out.sort_by(|a, b| (&a.monoid_gens, &a.units).cmp(&(&b.monoid_gens, &b.units)));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_reconstruction(rows in small_matrix()) {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = IntMatrix::from_i64(&refs);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.left.mul(&a).mul(&s.right), s.diag.clone());
        prop_assert_eq!(s.left.mul(&s.left_inv), IntMatrix::identity(a.rows()));
        prop_assert_eq!(s.right.mul(&s.right_inv), IntMatrix::identity(a.cols()));
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(w[0] > BigInt::zero() && (&w[1] % &w[0]).is_zero());
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j || i >= f.len() {
                    prop_assert!(s.diag[(i, j)].is_zero());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_basis_is_irredundant(seed in any::<u64>()) {
        let cone = oracle_cone(seed);
        let gens = lvs(&cone.gens);
        let hb = hilbert_basis(&gens).unwrap();
        for h in &hb {
            prop_assert!(cone_membership_int(h, &gens));
            prop_assert!(lattice_membership(h, &hb));
            // h is redundant iff h - g stays in the saturated monoid for another g
            for g in hb.iter().filter(|g| *g != h) {
                prop_assert!(!cone_membership_int(&(h - g), &gens));
            }
        }
    }

    #[test]
    fn saturate_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dim = r.gen_range(1..=3);
        let k = r.gen_range(1..=4);
        let gens: Vec<_> = (0..k).map(|_| lv(&(0..dim).map(|_| r.gen_range(-3..=3)).collect::<Vec<i64>>())).collect();
        let s = saturate(&gens);
        let mut again = s.monoid_gens.clone();
        for u in &s.units {
            again.push(u.clone());
            again.push(-u);
        }
        if again.is_empty() {
            prop_assert!(gens.iter().all(|g| g.is_zero()));
        } else {
            prop_assert_eq!(saturate(&again), s);
        }
    }

    #[test]
    fn localizations_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let m = random_monoid(&mut r, n);
        let faces = m.faces();
        let f1 = &faces[r.gen_range(0..faces.len())];
        let l1 = m.localize_at_face(f1).unwrap();
        let faces2 = l1.monoid.faces();
        let f2 = &faces2[r.gen_range(0..faces2.len())];
        let l2 = l1.monoid.localize_at_face(f2).unwrap();
        let image: BTreeSet<_> = m.generators().iter().map(|g| l2.cosp(&l1.cosp(g))).collect();
        for g in l2.monoid.generators() {
            prop_assert!(image.contains(g), "generator {} not hit", g);
        }
        // the composite kills exactly a face of M, and localizing there directly agrees
        let killed: Vec<_> = m.generators().iter().filter(|g| l2.cosp(&l1.cosp(g)).is_zero()).cloned().collect();
        let face = m.face_from_generators(&killed).unwrap();
        let direct = m.localize_at_face(&face).unwrap();
        prop_assert_eq!(direct.monoid.rank(), l2.monoid.rank());
        prop_assert_eq!(direct.monoid.generators().len(), l2.monoid.generators().len());
    }

    #[test]
    fn invariant_submonoid_doubling(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let m = random_monoid(&mut r, n);
        let q = r.gen_range(2..=5);
        let group = FiniteAbelianGroup::cyclic(q);
        let images = (0..n).map(|_| vec![r.gen_range(0..q)]).collect();
        let chi = CharacterMap { group: group.clone(), images };
        let h = if r.gen_bool(0.5) { Subgroup::whole(&group).unwrap() } else { Subgroup::generated_by(&group, &[vec![q / 2]]).unwrap() };
        let inv = m.invariant_submonoid(&chi, &h).unwrap();
        let k = BigInt::from(h.order());
        for g in inv.generators() {
            prop_assert!(m.contains(g));
            prop_assert!(h.elements.iter().all(|e| chi.is_trivial_at(e, g)));
        }
        for _ in 0..4 {
            let v = random_element(&mut r, &m);
            prop_assert!(inv.contains(&v.scale(&k)));
        }
    }

    #[test]
    fn face_count_matches_brute_force(seed in any::<u64>()) {
        let cone = oracle_cone(seed);
        let m = FsMonoid::new(&lvs(&cone.gens), cone.dim).unwrap();
        // every face is cut out by some set of facets
        let mut brute = BTreeSet::new();
        for mask in 0u32..(1 << cone.facets.len()) {
            let on: Vec<bool> = m
                .generators()
                .iter()
                .map(|g| {
                    let g = g.to_i64().unwrap();
                    (0..cone.facets.len())
                        .filter(|i| mask & (1 << i) != 0)
                        .all(|i| cone.facets[i].iter().zip(&g).map(|(a, b)| a * b).sum::<i64>() == 0)
                })
                .collect();
            brute.insert(on);
        }
        let faces = m.faces();
        let got: BTreeSet<_> = faces.iter().map(|f| f.indicator.clone()).collect();
        prop_assert_eq!(faces.len(), got.len());
        prop_assert_eq!(got, brute);
    }

    #[test]
    fn root_ideal_properties(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let m = random_monoid(&mut r, n);
        let count = r.gen_range(1..=3);
        let gens: Vec<_> = (0..count).map(|_| random_element(&mut r, &m)).collect();
        let i = MonomialIdeal::new(&m, &gens).unwrap();
        let d = r.gen_range(1..=3u64);
        prop_assert_eq!(i.root(1).unwrap(), i.clone());
        let root = i.root(d).unwrap();
        for g in root.generators() {
            prop_assert!(i.contains(&g.scale(&BigInt::from(d))));
        }
        let back = i.power(d).root(d).unwrap();
        for g in i.generators() {
            prop_assert!(back.contains(g));
        }
        let norm = i.normalize().unwrap();
        prop_assert_eq!(norm.normalize().unwrap(), norm.clone());
        for g in i.generators() {
            prop_assert!(norm.contains(g));
        }
    }

    #[test]
    fn toroidal_stabilizer_identities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_twisted_chart(&mut r);
        for p in chart.points() {
            let rep = chart.toroidal_stabilizer(&p).unwrap();
            prop_assert_eq!(&rep.g_tor, &rep.g_eta.intersect(&rep.g_mbar));
            prop_assert!(rep.g_tor.is_subgroup_of(&rep.g_x));
            if rep.toroidal_at {
                prop_assert!(rep.simple_at);
            }
        }
    }

    #[test]
    fn coarsening_is_exhaustive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_twisted_chart(&mut r);
        if let Ok(co) = coarsen_toroidal(&chart) {
            let again = coarsen_toroidal(co.chart()).unwrap();
            prop_assert!(again.subgroup().is_trivial());
            for rep in &again.reports {
                prop_assert!(rep.g_tor.is_trivial(), "toroidal inertia left at {}", rep.point);
            }
        }
    }

    #[test]
    fn chart_documents_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let chart = random_twisted_chart(&mut r);
        let doc = ChartDocument::from_chart(&chart);
        let parsed = ChartDocument::parse(&doc.print()).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.to_chart().unwrap(), chart.clone());
        let monos: Vec<_> = if chart.monoid.rank() > 0 {
            (0..r.gen_range(1..=3)).map(|_| random_element(&mut r, &chart.monoid)).collect()
        } else {
            vec![]
        };
        let ideal = IdealDocument::new(chart.t_count, r.gen_range(1..=4), monos);
        prop_assert_eq!(IdealDocument::parse(&ideal.print()).unwrap(), ideal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn descents_share_normalized_blowup(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let m = random_monoid(&mut r, n);
        let monos: Vec<_> = (0..r.gen_range(1..=3)).map(|_| random_element(&mut r, &m)).collect();
        let d = r.gen_range(1..=3u64);
        let e = d * r.gen_range(1..=2u64);
        let i = KummerIdeal::new(0, d, monos).unwrap();
        let je = kummer_descend_je(&m, &i, e).unwrap();
        let jt = kummer_descend_jtilde(&m, &i, e).unwrap();
        for g in &je.monomials {
            prop_assert!(jt.contains(g));
        }
        let chart = ToroidalChart::untwisted(m, 0, 0);
        // charts at vertices of the Newton polyhedron; the others are open in them and carry units
        let vertex_charts = |gens: Vec<LatticeVector>| -> Vec<Saturation> {
            let set = blowup_charts(&chart, &PermissibleCenter::new(0, gens)).unwrap();
            presentations(&set, None).into_iter().filter(|s| s.units.is_empty()).collect()
        };
        prop_assert_eq!(vertex_charts(je.monomials.clone()), vertex_charts(jt.generators().to_vec()));
    }

    #[test]
    fn blowup_commutes_with_enlarging(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=2);
        let m = random_monoid(&mut r, n);
        let t_count = r.gen_range(1..=2);
        let l = r.gen_range(1..=t_count);
        let monos: Vec<_> = (0..r.gen_range(0..=2)).map(|_| random_element(&mut r, &m)).collect();
        let chart = ToroidalChart::untwisted(m, 0, t_count);
        let direct = blowup_charts(&chart, &PermissibleCenter::new(l, monos.clone())).unwrap();
        let (enlarged, rows) = chart.enlarge_structure(&(0..l).collect::<Vec<_>>()).unwrap();
        let mut center: Vec<_> = monos.iter().map(|v| v.padded(l)).collect();
        center.extend((0..l).map(|i| LatticeVector::unit(n + l, n + i)));
        let after = blowup_charts(&enlarged, &PermissibleCenter::new(0, center)).unwrap();
        prop_assert_eq!(presentations(&direct, None), presentations(&after, Some(&rows)));
    }
}

#[test]
fn big_entries_survive_smith_form() {
    let big = BigInt::one() << 200usize;
    let a = IntMatrix::from_rows(&[LatticeVector(vec![big.clone(), BigInt::from(3)]), LatticeVector(vec![BigInt::from(6), big])], 2);
    let s = smith_normal_form(&a);
    assert_eq!(s.left.mul(&a).mul(&s.right), s.diag);
}
