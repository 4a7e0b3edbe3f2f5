//! Finite abelian groups `⊕ Z/q_i`, their subgroups and characters.
//!
//! Characters of `G = ⊕ Z/q_i` are written in the same coordinates: `ψ`
//! pairs with `g` as `Σ ψ_i g_i / q_i mod 1`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::basis::LatticeBasis;
use super::snf::smith_normal_form;
use super::vector::{IntMatrix, LatticeVector};
use crate::error::{Error, Result};

/// Largest group order that will be enumerated element by element.
pub const GROUP_ORDER_GUARD: u64 = 100_000;

pub type Element = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteAbelianGroup {
    pub orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Self {
        assert!(orders.iter().all(|&q| q >= 1), "cyclic factors must have positive order");
        FiniteAbelianGroup { orders }
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: vec![] }
    }

    pub fn cyclic(q: u64) -> Self {
        Self::new(vec![q])
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn identity(&self) -> Element {
        vec![0; self.orders.len()]
    }

    fn exponent_lcm(&self) -> u64 {
        self.orders.iter().fold(1, |a, &q| a.lcm(&q))
    }

    pub fn reduce(&self, g: &[u64]) -> Element {
        g.iter().zip(&self.orders).map(|(x, q)| x % q).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Element {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), q)| (x + y) % q).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Element {
        a.iter().zip(&self.orders).map(|(x, q)| (q - x % q) % q).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Element {
        a.iter().zip(&self.orders).map(|(x, q)| ((*x as u128 * k as u128) % *q as u128) as u64).collect()
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.orders).fold(1, |acc, (x, q)| acc.lcm(&(q / x.gcd(q))))
    }

    /// All elements in mixed-radix order (first coordinate fastest).
    pub fn elements(&self) -> Result<Vec<Element>> {
        let n = self.order();
        if n > GROUP_ORDER_GUARD {
            return Err(Error::TooLarge(format!("group of order {n}")));
        }
        Ok((0..n)
            .map(|mut idx| {
                self.orders
                    .iter()
                    .map(|q| {
                        let d = idx % q;
                        idx /= q;
                        d
                    })
                    .collect()
            })
            .collect())
    }

    /// `⟨ψ, g⟩` as a numerator over the exponent `N` of the group.
    pub fn pairing_numerator(&self, psi: &[u64], g: &[u64]) -> (u64, u64) {
        let n = self.exponent_lcm();
        let mut s: u128 = 0;
        for ((p, x), q) in psi.iter().zip(g).zip(&self.orders) {
            s += (*p as u128) * (*x as u128) % (*q as u128) * ((n / q) as u128);
        }
        ((s % n as u128) as u64, n)
    }

    pub fn pairing_is_trivial(&self, psi: &[u64], g: &[u64]) -> bool {
        self.pairing_numerator(psi, g).0 == 0
    }
}

/// A subgroup of a finite abelian group, stored as its sorted element set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub group: FiniteAbelianGroup,
    pub elements: BTreeSet<Element>,
}

impl Subgroup {
    pub fn whole(group: &FiniteAbelianGroup) -> Result<Self> {
        Ok(Subgroup { group: group.clone(), elements: group.elements()?.into_iter().collect() })
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        Subgroup { group: group.clone(), elements: [group.identity()].into_iter().collect() }
    }

    /// Elements satisfying `pred`; `pred` must cut out a subgroup.
    pub fn filter(group: &FiniteAbelianGroup, pred: impl Fn(&Element) -> bool) -> Result<Self> {
        Ok(Subgroup { group: group.clone(), elements: group.elements()?.into_iter().filter(|g| pred(g)).collect() })
    }

    pub fn generated_by(group: &FiniteAbelianGroup, gens: &[Element]) -> Result<Self> {
        if group.order() > GROUP_ORDER_GUARD {
            return Err(Error::TooLarge(format!("group of order {}", group.order())));
        }
        let mut elements: BTreeSet<Element> = [group.identity()].into_iter().collect();
        for g in gens {
            let g = group.reduce(g);
            if elements.contains(&g) {
                continue;
            }
            let mut new = elements.clone();
            let mut mult = g.clone();
            while !elements.contains(&mult) {
                for h in &elements {
                    new.insert(group.add(h, &mult));
                }
                mult = group.add(&mult, &g);
            }
            elements = new;
        }
        Ok(Subgroup { group: group.clone(), elements })
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, g: &[u64]) -> bool {
        self.elements.contains(&self.group.reduce(g))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup { group: self.group.clone(), elements: self.elements.intersection(&other.elements).cloned().collect() }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        let gens: Vec<Element> = self.generators().into_iter().chain(other.generators()).collect();
        Subgroup::generated_by(&self.group, &gens)
    }

    /// A small generating set, chosen greedily by decreasing element order.
    pub fn generators(&self) -> Vec<Element> {
        let mut by_order: Vec<&Element> = self.elements.iter().collect();
        by_order.sort_by_key(|g| (std::cmp::Reverse(self.group.element_order(g)), (*g).clone()));
        let mut gens = Vec::new();
        let mut span: BTreeSet<Element> = [self.group.identity()].into_iter().collect();
        for g in by_order {
            if span.len() == self.elements.len() {
                break;
            }
            if !span.contains(g) {
                gens.push(g.clone());
                span = Subgroup::generated_by(&self.group, &gens).expect("guarded").elements;
            }
        }
        gens
    }

    /// Invariant factors of the subgroup as an abstract group.
    pub fn structure(&self) -> Vec<u64> {
        let gens = self.generators();
        // H ≅ Z^g / {c : c·gens ∈ ⊕ q_i Z}; compute via the relation lattice
        let rel = relation_lattice(&gens, &self.group);
        let snf = smith_normal_form(&IntMatrix::from_rows(&rel, gens.len()));
        snf.invariant_factors().iter().filter_map(|d| d.to_u64()).filter(|&d| d > 1).collect()
    }

    /// The quotient `G / self`.
    pub fn quotient(&self) -> Quotient {
        Quotient::new(&self.group, &self.generators())
    }
}

/// Relations among `gens` in `group`: integer vectors `c` with `Σ c_j g_j = 0`.
fn relation_lattice(gens: &[Element], group: &FiniteAbelianGroup) -> Vec<LatticeVector> {
    // kernel of Z^g ⊕ Z^s -> Z^s, (c, k) ↦ Σ c_j g_j + Σ k_i q_i e_i, projected to c
    let g = gens.len();
    let s = group.orders.len();
    let mut cols = IntMatrix::zeros(g + s, s);
    for (j, gen) in gens.iter().enumerate() {
        for i in 0..s {
            cols[(j, i)] = BigInt::from(gen[i]);
        }
    }
    for (i, q) in group.orders.iter().enumerate() {
        cols[(g + i, i)] = BigInt::from(*q);
    }
    // left kernel: x with x·cols = 0
    let ker = super::snf::integer_kernel(&cols.transpose());
    ker.iter().map(|v| LatticeVector(v.0[..g].to_vec())).collect()
}

/// The quotient of `G` by a subgroup `H`, with maps on elements and on
/// characters trivial on `H`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteAbelianGroup,
    pub quotient: FiniteAbelianGroup,
    // coordinates of the quotient are (g · right)_j mod a_j for j in `kept`
    right: IntMatrix,
    kept: Vec<usize>,
    sections: Vec<Element>,
}

impl Quotient {
    pub fn new(group: &FiniteAbelianGroup, h_gens: &[Element]) -> Self {
        let s = group.orders.len();
        let mut rows: Vec<LatticeVector> = h_gens.iter().map(|g| LatticeVector::from_u64(g)).collect();
        for (i, q) in group.orders.iter().enumerate() {
            let mut e = vec![0u64; s];
            e[i] = *q;
            rows.push(LatticeVector::from_u64(&e));
        }
        let snf = smith_normal_form(&IntMatrix::from_rows(&rows, s));
        let a = snf.invariant_factors();
        debug_assert_eq!(a.len(), s);
        let mut kept = Vec::new();
        let mut orders = Vec::new();
        let mut sections = Vec::new();
        for (j, aj) in a.iter().enumerate() {
            let aj = aj.to_u64().expect("group order fits in u64");
            if aj > 1 {
                kept.push(j);
                orders.push(aj);
                let row = snf.right_inv.row(j);
                sections.push(group.reduce(&row.to_u64_mod(&group.orders)));
            }
        }
        Quotient { group: group.clone(), quotient: FiniteAbelianGroup::new(orders), right: snf.right, kept, sections }
    }

    pub fn project(&self, g: &[u64]) -> Element {
        let v: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
        let w = self.right.apply_row(&v);
        self.kept
            .iter()
            .zip(&self.quotient.orders)
            .map(|(&j, &a)| w.0[j].mod_floor(&BigInt::from(a)).to_u64().unwrap())
            .collect()
    }

    /// Element of `G` mapping to the `j`-th generator of the quotient.
    pub fn section(&self, j: usize) -> &Element {
        &self.sections[j]
    }

    /// Transfers a character of `G` trivial on `H` to the quotient.
    pub fn character(&self, psi: &[u64]) -> Result<Element> {
        let mut out = Vec::with_capacity(self.sections.len());
        for (sec, &a) in self.sections.iter().zip(&self.quotient.orders) {
            let (num, n) = self.group.pairing_numerator(psi, sec);
            let scaled = num as u128 * a as u128;
            if scaled % n as u128 != 0 {
                return Err(Error::InvariantViolated("character is not trivial on the subgroup".into()));
            }
            out.push(((scaled / n as u128) % a as u128) as u64);
        }
        Ok(out)
    }
}

/// Assignment of a character value to every coordinate of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterMap {
    pub group: FiniteAbelianGroup,
    pub images: Vec<Element>,
}

impl CharacterMap {
    pub fn trivial(group: &FiniteAbelianGroup, rank: usize) -> Self {
        CharacterMap { group: group.clone(), images: vec![group.identity(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, v: &LatticeVector) -> Element {
        assert_eq!(v.rank(), self.images.len(), "character map rank mismatch");
        let s = self.group.orders.len();
        let mut acc = vec![BigInt::zero(); s];
        for (x, img) in v.0.iter().zip(&self.images) {
            if x.is_zero() {
                continue;
            }
            for i in 0..s {
                acc[i] += x * BigInt::from(img[i]);
            }
        }
        acc.iter().zip(&self.group.orders).map(|(a, q)| a.mod_floor(&BigInt::from(*q)).to_u64().unwrap()).collect()
    }

    /// Character map on a lattice whose basis vectors are the rows of `basis`
    /// written in the current coordinates.
    pub fn pullback(&self, basis: &[LatticeVector]) -> Self {
        CharacterMap { group: self.group.clone(), images: basis.iter().map(|b| self.apply(b)).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|x| x.iter().all(|&y| y == 0))
    }

    pub fn is_trivial_at(&self, g: &[u64], v: &LatticeVector) -> bool {
        self.group.pairing_is_trivial(&self.apply(v), g)
    }
}

/// Sublattice of `lattice` on which every character value pairs trivially
/// with each of `h_gens`.
pub fn invariant_lattice(lattice: &LatticeBasis, chars: &CharacterMap, h_gens: &[Element]) -> LatticeBasis {
    let k = lattice.rank();
    let group = &chars.group;
    let s = h_gens.len();
    if s == 0 || k == 0 {
        return lattice.clone();
    }
    let n = group.orders.iter().fold(1u64, |a, &q| a.lcm(&q));
    let mut m = IntMatrix::zeros(k + s, s);
    for (i, b) in lattice.rows().iter().enumerate() {
        let v = chars.apply(b);
        for (j, h) in h_gens.iter().enumerate() {
            m[(i, j)] = BigInt::from(group.pairing_numerator(&v, h).0);
        }
    }
    for j in 0..s {
        m[(k + j, j)] = BigInt::from(n);
    }
    let ker = super::snf::integer_kernel(&m.transpose());
    let rows: Vec<LatticeVector> =
        ker.iter().map(|c| lattice.to_ambient(&LatticeVector(c.0[..k].to_vec()))).collect();
    LatticeBasis::generated_by(&rows, lattice.ambient())
}

impl LatticeVector {
    pub fn from_u64(xs: &[u64]) -> Self {
        LatticeVector(xs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn to_u64_mod(&self, orders: &[u64]) -> Vec<u64> {
        self.0.iter().zip(orders).map(|(x, q)| x.mod_floor(&BigInt::from(*q)).to_u64().unwrap()).collect()
    }
}
