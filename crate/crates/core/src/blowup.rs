//! Blowup charts of permissible centers, Kummer covers and Kummer blowups.
//!
//! Every chart is computed in the extended lattice of its parent and carries
//! the matrix whose rows are its own extended basis in parent coordinates.
//! Characters are transported by that matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chart::{coarse_space, invariant_chart, GroupAction, InvariantChart, ToroidalChart};
use crate::error::{Error, Result};
use crate::ideal::{kummer_descend_je, kummer_descend_jtilde, minimize, KummerIdeal, MonomialIdeal};
use crate::lattice::{
    saturate, smith_normal_form, try_saturate_in, CharacterMap, FiniteAbelianGroup, IntMatrix, LatticeBasis,
    LatticeVector, Saturation, Subgroup,
};
use crate::monoid::FsMonoid;

/// An ordinary permissible center `(t_1..t_l, m_1..m_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermissibleCenter {
    pub smooth_count: usize,
    pub monomials: Vec<LatticeVector>,
}

impl PermissibleCenter {
    pub fn new(smooth_count: usize, monomials: Vec<LatticeVector>) -> Self {
        PermissibleCenter { smooth_count, monomials }
    }

    fn validate(&self, chart: &ToroidalChart) -> Result<Vec<LatticeVector>> {
        if self.smooth_count > chart.t_count {
            return Err(Error::NotPermissible(format!(
                "center uses {} regular coordinates but the chart has {}",
                self.smooth_count, chart.t_count
            )));
        }
        if self.smooth_count == 0 && self.monomials.is_empty() {
            return Err(Error::NotPermissible("empty center".into()));
        }
        for m in &self.monomials {
            if m.rank() != chart.monomial_rank() || !chart.monoid.contains(m) {
                return Err(Error::NotPermissible(format!("{m} is not in the chart monoid")));
            }
            if m.is_zero() {
                return Err(Error::NotPermissible("the center is the unit ideal".into()));
            }
        }
        Ok(minimize(&chart.monoid, self.monomials.clone()))
    }
}

/// Which center generator a chart belongs to. `M(j)` indexes the minimized,
/// sorted list of center monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ChartLabel {
    T(usize),
    M(usize),
}

impl fmt::Display for ChartLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartLabel::T(i) => write!(f, "t{}", i + 1),
            ChartLabel::M(j) => write!(f, "m{}", j + 1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlowupChart {
    pub label: ChartLabel,
    /// The center generator `y`, in the parent's extended coordinates.
    pub label_parent: LatticeVector,
    /// `y` in this chart's extended coordinates.
    pub generator: LatticeVector,
    pub chart: ToroidalChart,
    /// Rows: this chart's extended basis in the parent's extended coordinates.
    pub to_parent: IntMatrix,
}

impl BlowupChart {
    pub fn is_t_chart(&self) -> bool {
        matches!(self.label, ChartLabel::T(_))
    }

    /// Chart coordinates of a parent extended vector in the chart's lattice.
    pub fn coords_of(&self, v: &LatticeVector) -> Option<LatticeVector> {
        LatticeBasis::from_basis(self.to_parent.row_vectors(), self.to_parent.cols()).coords(v)
    }
}

#[derive(Clone, Debug)]
pub struct BlowupChartSet {
    /// Minimized center monomials, indexed by `ChartLabel::M`.
    pub center_monomials: Vec<LatticeVector>,
    pub charts: Vec<BlowupChart>,
}

/// Charts of the (normalized) blowup of a chart along a permissible center.
pub fn blowup_charts(chart: &ToroidalChart, center: &PermissibleCenter) -> Result<BlowupChartSet> {
    let monos = center.validate(chart)?;
    if chart.action.has_autos() {
        return Err(Error::UnsupportedAction("blowups of charts with lattice automorphisms".into()));
    }
    let l = center.smooth_count;
    let mut labels: Vec<ChartLabel> = (0..l).map(ChartLabel::T).collect();
    labels.extend((0..monos.len()).map(ChartLabel::M));
    let charts = labels
        .par_iter()
        .map(|&label| one_chart(chart, l, &monos, label))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlowupChartSet { center_monomials: monos, charts: charts.into_iter().flatten().collect() })
}

fn one_chart(chart: &ToroidalChart, l: usize, monos: &[LatticeVector], label: ChartLabel) -> Result<Option<BlowupChart>> {
    let n = chart.monomial_rank();
    let nu = n + chart.unit_rank;
    let e = chart.ext_rank();
    let embed = |m: &LatticeVector| chart.embed_monomial(m);
    let y = match label {
        ChartLabel::T(i) => LatticeVector::unit(e, chart.t_index(i)),
        ChartLabel::M(j) => embed(&monos[j]),
    };
    let mut gens: Vec<LatticeVector> = chart.monoid.generators().iter().map(embed).collect();
    for j in n..nu {
        let u = LatticeVector::unit(e, j);
        gens.push(-&u);
        gens.push(u);
    }
    let mut lattice_rows: Vec<LatticeVector> = chart.monoid.lattice().rows().iter().map(embed).collect();
    lattice_rows.extend((n..nu).map(|j| LatticeVector::unit(e, j)));
    let mut t_rows = Vec::new();
    match label {
        ChartLabel::T(i) => {
            gens.push(y.clone());
            gens.extend(monos.iter().map(|m| &embed(m) - &y));
            lattice_rows.push(y.clone());
            for k in 0..chart.t_count {
                if k == i {
                    continue;
                }
                let tk = LatticeVector::unit(e, chart.t_index(k));
                t_rows.push(if k < l { &tk - &y } else { tk });
            }
        }
        ChartLabel::M(_) => {
            gens.extend(monos.iter().map(|m| &embed(m) - &y));
            for k in 0..chart.t_count {
                let tk = LatticeVector::unit(e, chart.t_index(k));
                t_rows.push(if k < l { &tk - &y } else { tk });
            }
        }
    }
    let lattice = LatticeBasis::from_basis(lattice_rows, e);
    let split = try_saturate_in(&gens, Some(&lattice), e)?;
    let mut rows = split.basis.clone();
    rows.extend(t_rows.iter().cloned());
    let basis = LatticeBasis::from_basis(rows.clone(), e);
    let generator = basis.coords(&y).ok_or_else(|| Error::InvariantViolated("label outside the chart lattice".into()))?;
    if generator.0[..split.sharp_rank].iter().all(Zero::is_zero) {
        // y is a unit: the pulled-back center is trivial on this chart
        return Ok(None);
    }
    let monoid = FsMonoid::sharp_part(&split);
    let chars = chart.action.chars.pullback(&rows);
    let action = GroupAction { group: chart.action.group.clone(), chars, lattice_autos: vec![] };
    let t_count = t_rows.len();
    let new_chart = ToroidalChart::new(monoid, split.unit_rank, t_count, action)?;
    let out = BlowupChart { label, label_parent: y, generator, chart: new_chart, to_parent: IntMatrix::from_rows(&rows, e) };
    check_chart_invariants(chart, &out)?;
    Ok(Some(out))
}

fn check_chart_invariants(parent: &ToroidalChart, c: &BlowupChart) -> Result<()> {
    let parent_rank = parent.monoid.rank();
    let rank = c.chart.monoid.rank();
    let ok = match c.label {
        ChartLabel::T(_) => c.chart.unit_rank == parent.unit_rank && rank <= parent_rank + 1,
        ChartLabel::M(_) => rank <= parent_rank,
    };
    if !ok {
        return Err(Error::InvariantViolated(format!("rank bound on the {} chart", c.label)));
    }
    // the recorded t-coordinates split off: the chart basis spans the parent's extended lattice
    let e = parent.ext_rank();
    let n = parent.monomial_rank();
    let basis = LatticeBasis::from_basis(c.to_parent.row_vectors(), e);
    let mut parent_rows: Vec<_> = parent.monoid.lattice().rows().iter().map(|r| parent.embed_monomial(r)).collect();
    parent_rows.extend((n..e).map(|i| LatticeVector::unit(e, i)));
    if c.to_parent.rows() != parent_rows.len() || !parent_rows.iter().all(|r| basis.contains(r)) {
        return Err(Error::InvariantViolated(format!("{} chart does not split off its t-coordinates", c.label)));
    }
    Ok(())
}

/// A rational lattice map `v ↦ v · rows / denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub rows: IntMatrix,
    pub denom: BigInt,
}

impl LatticeMap {
    pub fn identity(n: usize) -> Self {
        LatticeMap { rows: IntMatrix::identity(n), denom: BigInt::one() }
    }

    /// `v · rows`, the image scaled by `denom`.
    pub fn apply_scaled(&self, v: &LatticeVector) -> LatticeVector {
        self.rows.apply_row(&v.0)
    }

    /// First apply `inner` (an integral map into this map's source), then this map.
    pub fn after(&self, inner: &IntMatrix) -> LatticeMap {
        LatticeMap { rows: inner.mul(&self.rows), denom: self.denom.clone() }
    }
}

/// The Kummer cover `Y → X` adjoining `m_j^{1/d}`.
#[derive(Clone, Debug)]
pub struct KummerCover {
    /// Cover chart with the Galois action by characters.
    pub chart: ToroidalChart,
    /// Cover extended coordinates to base extended coordinates.
    pub to_base: LatticeMap,
    /// The pullback of the Kummer ideal, an ordinary center on the cover.
    pub center: PermissibleCenter,
    pub denom: u64,
}

impl KummerCover {
    pub fn galois(&self) -> &FiniteAbelianGroup {
        &self.chart.action.group
    }
}

fn require_trivial_action(chart: &ToroidalChart) -> Result<()> {
    if chart.action.has_autos() || !chart.action.chars.is_trivial() {
        return Err(Error::UnsupportedAction("Kummer covers of charts with a nontrivial action".into()));
    }
    Ok(())
}

pub fn kummer_cover(chart: &ToroidalChart, ideal: &KummerIdeal) -> Result<KummerCover> {
    require_trivial_action(chart)?;
    ideal.check(&chart.monoid)?;
    if ideal.smooth_count > chart.t_count {
        return Err(Error::NotPermissible("more regular parameters than chart coordinates".into()));
    }
    let n = chart.monomial_rank();
    let e = chart.ext_rank();
    let d = BigInt::from(ideal.denom);
    let scaled_lattice: Vec<LatticeVector> = chart.monoid.lattice().rows().iter().map(|r| r.scale(&d)).collect();
    let mut lattice_gens = scaled_lattice.clone();
    lattice_gens.extend(ideal.monomials.iter().cloned());
    let cover_lattice = LatticeBasis::generated_by(&lattice_gens, n);
    let mut gens: Vec<LatticeVector> = chart.monoid.generators().iter().map(|g| g.scale(&d)).collect();
    gens.extend(ideal.monomials.iter().cloned());
    let split = try_saturate_in(&gens, Some(&cover_lattice), n)?;
    if split.unit_rank != 0 {
        return Err(Error::InvariantViolated("Kummer cover of a sharp monoid is not sharp".into()));
    }
    let k = split.sharp_rank;
    let b = LatticeBasis::from_basis(split.basis.clone(), n);
    // Galois group: dual of M'^gp / d M^gp
    let c_rows: Vec<LatticeVector> = scaled_lattice.iter().map(|r| b.coords(r).expect("dM inside M'")).collect();
    let snf = smith_normal_form(&IntMatrix::from_rows(&c_rows, k));
    let factors = snf.invariant_factors();
    let kept: Vec<usize> = (0..factors.len()).filter(|&i| !factors[i].is_one()).collect();
    let orders: Vec<u64> = kept.iter().map(|&i| factors[i].to_u64().expect("small Galois group")).collect();
    let group = FiniteAbelianGroup::new(orders.clone());
    let class = |v: &LatticeVector| -> Vec<u64> {
        let w = snf.right.apply_row(&v.0);
        kept.iter()
            .zip(&orders)
            .map(|(&i, &q)| w.0[i].mod_floor(&BigInt::from(q)).to_u64().unwrap())
            .collect()
    };
    let mut images: Vec<Vec<u64>> = (0..k).map(|j| class(&LatticeVector::unit(k, j))).collect();
    images.extend((n..e).map(|_| group.identity()));
    for r in &c_rows {
        if class(r).iter().any(|&x| x != 0) {
            return Err(Error::InvariantViolated("Galois group acts on the base monoid".into()));
        }
    }
    let monoid = FsMonoid::sharp_part(&split);
    let ce = k + chart.unit_rank + chart.t_count;
    let action = GroupAction { group: group.clone(), chars: CharacterMap { group, images }, lattice_autos: vec![] };
    let cover = ToroidalChart::new(monoid, chart.unit_rank, chart.t_count, action)?;
    let mut rows: Vec<LatticeVector> = split.basis.iter().map(|r| r.padded(e - n)).collect();
    rows.extend((n..e).map(|i| LatticeVector::unit(e, i).scale(&d)));
    debug_assert_eq!(rows.len(), ce);
    let monos = ideal.monomials.iter().map(|m| b.coords(m).expect("m_j in M'")).collect();
    Ok(KummerCover {
        chart: cover,
        to_base: LatticeMap { rows: IntMatrix::from_rows(&rows, e), denom: d },
        center: PermissibleCenter::new(ideal.smooth_count, monos),
        denom: ideal.denom,
    })
}

/// A chart of a Kummer blowup: `[chart / (G/G_rel)]`, where `chart` is the
/// quotient of the cover's blowup chart by the relative stabilizer.
#[derive(Clone, Debug)]
pub struct StackChart {
    pub blowup: BlowupChart,
    pub invariant: InvariantChart,
    pub rel_stabilizer: Subgroup,
    pub residual_order: u64,
}

impl StackChart {
    pub fn label(&self) -> ChartLabel {
        self.blowup.label
    }

    pub fn chart(&self) -> &ToroidalChart {
        &self.invariant.chart
    }

    /// Map from this chart's extended coordinates to the base chart.
    pub fn to_base(&self, cover: &KummerCover) -> LatticeMap {
        cover.to_base.after(&self.invariant.to_parent.mul(&self.blowup.to_parent))
    }
}

#[derive(Clone, Debug)]
pub struct KummerBlowup {
    pub cover: KummerCover,
    pub charts: Vec<StackChart>,
}

fn divisors(d: u64) -> Vec<u64> {
    (1..=d).filter(|x| d % x == 0).collect()
}

/// Smallest `e | d` with `m = (d/e)·m'` for some `m' ∈ M`.
fn membership_e(monoid: &FsMonoid, m: &LatticeVector, d: u64) -> u64 {
    for e in divisors(d) {
        if let Some(q) = m.exact_div(&BigInt::from(d / e)) {
            if monoid.contains(&q) {
                return e;
            }
        }
    }
    d
}

pub fn kummer_blowup_charts(chart: &ToroidalChart, ideal: &KummerIdeal) -> Result<KummerBlowup> {
    const DIVISOR_GUARD: u64 = 1_000_000;
    if ideal.denom > DIVISOR_GUARD {
        return Err(Error::TooLarge(format!("denominator {}", ideal.denom)));
    }
    let cover = kummer_cover(chart, ideal)?;
    let set = blowup_charts(&cover.chart, &cover.center)?;
    let group = cover.galois().clone();
    let charts = set
        .charts
        .into_par_iter()
        .map(|bc| stack_chart(chart, ideal, &cover, &set.center_monomials, bc))
        .collect::<Result<Vec<_>>>()?;
    Ok(KummerBlowup { cover, charts }).map(|kb| {
        debug_assert!(kb.charts.iter().all(|c| c.rel_stabilizer.group == group));
        kb
    })
}

fn stack_chart(
    base: &ToroidalChart,
    ideal: &KummerIdeal,
    cover: &KummerCover,
    cover_monos: &[LatticeVector],
    bc: BlowupChart,
) -> Result<StackChart> {
    let c = &bc.chart;
    let group = c.action.group.clone();
    let chi_y = c.char_of(&bc.generator);
    let rel = Subgroup::filter(&group, |g| group.pairing_is_trivial(&chi_y, g))?;
    let e = group.element_order(&chi_y);
    match bc.label {
        ChartLabel::T(_) => {
            if e != 1 {
                return Err(Error::InvariantViolated("Galois group moves a regular parameter".into()));
            }
        }
        ChartLabel::M(j) => {
            // the cover monomial m_j/d back in base coordinates
            let y_base = cover.to_base.apply_scaled(&cover.chart.embed_monomial(&cover_monos[j]));
            let m = LatticeVector(y_base.0[..base.monomial_rank()].to_vec());
            let expected = membership_e(&base.monoid, &m, ideal.denom);
            if expected != e {
                return Err(Error::InvariantViolated(format!("residual order {e} differs from {expected}")));
            }
        }
    }
    if rel.order() * e != group.order() {
        return Err(Error::InvariantViolated("G/G_rel is not cyclic of order e".into()));
    }
    // the relative stabilizer acts toroidally at every point of the chart
    for p in c.points() {
        let r = c.toroidal_stabilizer(&p)?;
        if rel.intersect(&r.g_x) != rel.intersect(&r.g_tor) {
            return Err(Error::InvariantViolated(format!("relative stabilizer is not toroidal at {p}")));
        }
    }
    let invariant = invariant_chart(c, &rel)?;
    Ok(StackChart { blowup: bc, invariant, rel_stabilizer: rel, residual_order: e })
}

/// Outcome of [`verify_principalization`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalizationReport {
    pub ok: bool,
    pub witness: Option<String>,
}

/// Checks that on every chart the pullback of the Kummer ideal is generated
/// by the chart's label: every pulled-back generator is divisible by it.
pub fn verify_principalization(_chart: &ToroidalChart, ideal: &KummerIdeal, kb: &KummerBlowup) -> PrincipalizationReport {
    let cover = &kb.cover;
    let ce = cover.chart.ext_rank();
    let mut pulled: Vec<LatticeVector> =
        (0..ideal.smooth_count).map(|i| LatticeVector::unit(ce, cover.chart.t_index(i))).collect();
    pulled.extend(cover.center.monomials.iter().map(|m| cover.chart.embed_monomial(m)));
    for sc in &kb.charts {
        let bc = &sc.blowup;
        let mut has_label = false;
        for z in &pulled {
            let Some(zc) = bc.coords_of(z) else {
                return PrincipalizationReport { ok: false, witness: Some(format!("{} chart: {z} outside the chart lattice", bc.label)) };
            };
            if zc == bc.generator {
                has_label = true;
            }
            if !bc.chart.ext_contains(&(&zc - &bc.generator)) {
                return PrincipalizationReport {
                    ok: false,
                    witness: Some(format!("{} chart: generator {z} is not divisible by the label", bc.label)),
                };
            }
        }
        if !has_label {
            return PrincipalizationReport { ok: false, witness: Some(format!("{} chart: label not among the generators", bc.label)) };
        }
    }
    PrincipalizationReport { ok: true, witness: None }
}

/// Result of the coarse route: the ordinary normalized blowup along `J_e`,
/// after moving `t_1..t_l` into the monoid.
#[derive(Clone, Debug)]
pub struct CoarseBlowup {
    pub enlarged: ToroidalChart,
    /// Rows: extended basis of `enlarged` in the base's extended coordinates.
    pub enlarge_rows: IntMatrix,
    pub set: BlowupChartSet,
}

impl CoarseBlowup {
    pub fn to_base(&self, c: &BlowupChart) -> LatticeMap {
        LatticeMap { rows: c.to_parent.mul(&self.enlarge_rows), denom: BigInt::one() }
    }
}

pub fn coarse_kummer_blowup(chart: &ToroidalChart, ideal: &KummerIdeal, e: Option<u64>) -> Result<CoarseBlowup> {
    let e = e.unwrap_or(ideal.denom);
    let j = kummer_descend_je(&chart.monoid, ideal, e)?;
    let l = ideal.smooth_count;
    if l > chart.t_count {
        return Err(Error::NotPermissible("more regular parameters than chart coordinates".into()));
    }
    let (enlarged, enlarge_rows) = chart.enlarge_structure(&(0..l).collect::<Vec<_>>())?;
    let n = chart.monomial_rank();
    let eb = BigInt::from(e);
    let mut monos: Vec<LatticeVector> = j.monomials.iter().map(|m| m.padded(l)).collect();
    monos.extend((0..l).map(|i| LatticeVector::unit(n + l, n + i).scale(&eb)));
    let set = blowup_charts(&enlarged, &PermissibleCenter::new(0, monos))?;
    Ok(CoarseBlowup { enlarged, enlarge_rows, set })
}

/// A chart monoid in the base's extended coordinates, scaled by the Kummer
/// denominator so that fractional charts compare exactly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CanonicalChart {
    /// Primitive direction of the chart label in base coordinates.
    pub label_direction: LatticeVector,
    pub generators: Vec<LatticeVector>,
    pub units: Vec<LatticeVector>,
}

/// Saturates the image of `gens ∪ ±units` under `map`, rescaled from
/// `map.denom` to the common `scale`.
fn canonical(label: &LatticeVector, gens: &[LatticeVector], units: &[LatticeVector], map: &LatticeMap, scale: &BigInt) -> CanonicalChart {
    let (q, r) = scale.div_rem(&map.denom);
    assert!(r.is_zero(), "common scale must be a multiple of the denominator");
    let img = |v: &LatticeVector| map.apply_scaled(v).scale(&q);
    let mut all: Vec<_> = gens.iter().map(img).collect();
    for u in units {
        let x = img(u);
        all.push(-&x);
        all.push(x);
    }
    let Saturation { monoid_gens, units } = saturate(&all);
    CanonicalChart { label_direction: img(label).primitive(), generators: monoid_gens, units }
}

/// Coarse spaces of the Kummer blowup charts, in base coordinates scaled by `d`.
pub fn kummer_route_presentations(kb: &KummerBlowup) -> Result<Vec<CanonicalChart>> {
    let d = BigInt::from(kb.cover.denom);
    let mut out = kb
        .charts
        .iter()
        .map(|sc| {
            let cs = coarse_space(sc.chart())?;
            let map = sc.to_base(&kb.cover);
            let mut c = canonical(&LatticeVector::zero(cs.ext_rank), &cs.generators, &cs.units, &map, &d);
            let label = kb.cover.to_base.after(&sc.blowup.to_parent);
            c.label_direction = label.apply_scaled(&sc.blowup.generator).primitive();
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Charts of the coarse route, in base coordinates scaled by `d`.
pub fn coarse_route_presentations(cb: &CoarseBlowup, d: u64) -> Vec<CanonicalChart> {
    let d = BigInt::from(d);
    let mut out: Vec<_> = cb
        .set
        .charts
        .iter()
        .map(|c| {
            let ch = &c.chart;
            let e = ch.ext_rank();
            let mut gens: Vec<_> = ch.monoid.generators().iter().map(|g| ch.embed_monomial(g)).collect();
            gens.extend((0..ch.t_count).map(|i| LatticeVector::unit(e, ch.t_index(i))));
            let units: Vec<_> = (0..ch.unit_rank).map(|j| LatticeVector::unit(e, ch.unit_index(j))).collect();
            canonical(&c.generator, &gens, &units, &cb.to_base(c), &d)
        })
        .collect();
    out.sort();
    out
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `((J̃_{n!})^m)^{nor}` restricted to the closed stratum `V(K)`, where the
/// subchart ideal `K` is the complement `M \ F` of a face. The result must be
/// stable under `(n, m) → (n+1, m+1)` after rescaling.
pub fn strict_transform_coarse(
    chart: &ToroidalChart,
    subchart: &MonomialIdeal,
    ideal: &KummerIdeal,
    n: u64,
    m: u64,
) -> Result<MonomialIdeal> {
    const SHIFT_GUARD: u64 = 20_000;
    if !ideal.is_monomial() {
        return Err(Error::NonMonomialKummerIdeal);
    }
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("stabilization parameters must be positive".into()));
    }
    let monoid = &chart.monoid;
    let r = ideal.monomials.len() as u64;
    if n > 20 || (r > 0 && binomial((1..=n + 1).product::<u64>() + r - 1, r - 1) > BigInt::from(SHIFT_GUARD)) {
        return Err(Error::TooLarge(format!("J̃ for n = {n} with {r} monomials")));
    }
    let face_gens: Vec<LatticeVector> =
        monoid.generators().iter().filter(|g| !subchart.contains(g)).cloned().collect();
    let not_a_face = || Error::InvalidInput("the subchart ideal must be the complement of a face".into());
    let face = monoid.face_from_generators(&face_gens).map_err(|_| not_a_face())?;
    let face_monoid = FsMonoid::new(&face.generators, monoid.ambient())?;
    if subchart.generators().iter().any(|g| face_monoid.contains(g)) {
        return Err(not_a_face());
    }
    let compute = |n: u64, m: u64| -> Result<(MonomialIdeal, BigInt)> {
        let nf: u64 = (1..=n).product();
        let j = kummer_descend_jtilde(monoid, ideal, nf)?;
        let p = j.power(m).normalize()?;
        Ok((p.restrict_to_face(&face)?, BigInt::from(nf) * BigInt::from(m)))
    };
    let (a, sa) = compute(n, m)?;
    let (b, sb) = compute(n + 1, m + 1)?;
    let same = a.generators().iter().all(|g| b.newton_contains(&g.scale(&sb), &sa))
        && b.generators().iter().all(|g| a.newton_contains(&g.scale(&sa), &sb));
    if !same {
        return Err(Error::NotStabilized { n, m });
    }
    Ok(a)
}
