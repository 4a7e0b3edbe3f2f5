//! Monomial ideals of fs monoids and Kummer ideals.
//!
//! Root ideals, integral closures and the descended ideals `J̃_e` are all
//! unions of shifted cones `{m ∈ M^gp : d·m - g ∈ cone(M)}`. The minimal
//! elements of such a set are the height-one Hilbert basis elements of the
//! cone spanned by `(g, d)` and `(M, 0)` in `M^gp ⊕ Z`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{hilbert_basis_full, LatticeVector};
use crate::monoid::{Face, FsMonoid};

/// Minimal elements of `⋃ {m ∈ M^gp : d·m - g ∈ cone(M)}` over the shifts `(g, d)`.
fn shifted_cone_points(monoid: &FsMonoid, shifts: &[(LatticeVector, BigInt)]) -> Result<Vec<LatticeVector>> {
    let mut out = Vec::new();
    for s in shifts {
        out.extend(height_one_points(monoid, std::slice::from_ref(s))?);
    }
    Ok(minimize(monoid, out))
}

/// Height-one Hilbert basis elements of the cone spanned by `(M, 0)` and the
/// given `(g, d)`, as vectors of `M^gp`.
fn height_one_points(monoid: &FsMonoid, tops: &[(LatticeVector, BigInt)]) -> Result<Vec<LatticeVector>> {
    let lat = monoid.lattice();
    let k = lat.rank();
    let mut gens: Vec<LatticeVector> =
        monoid.generators().iter().map(|r| lat.coords(r).unwrap().padded(1)).collect();
    for (g, d) in tops {
        let gc = lat.coords(g).ok_or_else(|| Error::ElementNotInMonoid(g.to_string()))?;
        let mut top = gc.padded(1);
        top.0[k] = d.clone();
        gens.push(top);
    }
    Ok(hilbert_basis_full(&gens, k + 1)?
        .into_iter()
        .filter(|h| h.0[k].is_one())
        .map(|h| lat.to_ambient(&LatticeVector(h.0[..k].to_vec())))
        .collect())
}

/// Minimal generators of the ideal generated by `gens`: sorted, with every
/// element divisible by another one removed.
pub fn minimize(monoid: &FsMonoid, mut gens: Vec<LatticeVector>) -> Vec<LatticeVector> {
    gens.sort();
    gens.dedup();
    let mut by_degree: Vec<(BigInt, LatticeVector)> = gens.into_iter().map(|g| (monoid.degree(&g), g)).collect();
    by_degree.sort();
    let mut kept: Vec<LatticeVector> = Vec::new();
    for (_, g) in by_degree {
        if !kept.iter().any(|h| monoid.contains(&(&g - h))) {
            kept.push(g);
        }
    }
    kept.sort();
    kept
}

/// A monomial ideal of an fs monoid, stored by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    monoid: FsMonoid,
    gens: Vec<LatticeVector>,
}

impl MonomialIdeal {
    pub fn new(monoid: &FsMonoid, gens: &[LatticeVector]) -> Result<Self> {
        for g in gens {
            if g.rank() != monoid.ambient() || !monoid.contains(g) {
                return Err(Error::ElementNotInMonoid(g.to_string()));
            }
        }
        Ok(MonomialIdeal { monoid: monoid.clone(), gens: minimize(monoid, gens.to_vec()) })
    }

    pub fn unit(monoid: &FsMonoid) -> Self {
        MonomialIdeal { monoid: monoid.clone(), gens: vec![LatticeVector::zero(monoid.ambient())] }
    }

    pub fn monoid(&self) -> &FsMonoid {
        &self.monoid
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.gens
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.gens.iter().any(|g| self.monoid.contains(&(v - g)))
    }

    pub fn is_principal(&self) -> bool {
        self.gens.len() == 1
    }

    /// Principal after localizing and sharpening at every face.
    pub fn is_invertible(&self) -> Result<bool> {
        for face in self.monoid.faces() {
            let loc = self.monoid.localize_at_face(&face)?;
            let images: Vec<_> = self.gens.iter().map(|g| loc.cosp(g)).collect();
            if minimize(&loc.monoid, images).len() != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut sums = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                sums.push(a + b);
            }
        }
        MonomialIdeal { monoid: self.monoid.clone(), gens: minimize(&self.monoid, sums) }
    }

    pub fn power(&self, e: u64) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(&self.monoid);
        for _ in 0..e {
            acc = acc.product(self);
        }
        acc
    }

    /// `I^{[1/d]}`: monomials `m` with `d·m ∈ I`.
    pub fn root(&self, d: u64) -> Result<MonomialIdeal> {
        if d == 0 {
            return Err(Error::InvalidInput("root degree must be positive".into()));
        }
        let shifts: Vec<_> = self.gens.iter().map(|g| (g.clone(), BigInt::from(d))).collect();
        Ok(MonomialIdeal { monoid: self.monoid.clone(), gens: shifted_cone_points(&self.monoid, &shifts)? })
    }

    /// Integral closure: the lattice points of the Newton polyhedron.
    pub fn normalize(&self) -> Result<MonomialIdeal> {
        if self.gens.is_empty() {
            return Ok(self.clone());
        }
        let tops: Vec<_> = self.gens.iter().map(|g| (g.clone(), BigInt::one())).collect();
        let points = height_one_points(&self.monoid, &tops)?;
        Ok(MonomialIdeal { monoid: self.monoid.clone(), gens: minimize(&self.monoid, points) })
    }

    /// Image in the face monoid `F`, i.e. on the closed stratum `V(M \ F)`:
    /// generators off the face map to zero.
    pub fn restrict_to_face(&self, face: &Face) -> Result<MonomialIdeal> {
        let f = FsMonoid::new(&face.generators, self.monoid.ambient())?;
        let kept: Vec<_> = self.gens.iter().filter(|g| f.contains(g)).cloned().collect();
        MonomialIdeal::new(&f, &kept)
    }

    /// Whether the point `p/s` lies in the Newton polyhedron `conv(I) + cone(M)`.
    pub fn newton_contains(&self, p: &LatticeVector, s: &BigInt) -> bool {
        let lat = self.monoid.lattice();
        let k = lat.rank();
        let Some(pc) = lat.rational_coords(p) else { return false };
        let mut gens: Vec<LatticeVector> =
            self.monoid.generators().iter().map(|r| lat.coords(r).unwrap().padded(1)).collect();
        for g in &self.gens {
            let mut v = lat.coords(g).unwrap().padded(1);
            v.0[k] = BigInt::one();
            gens.push(v);
        }
        let mut target: Vec<num_rational::BigRational> = pc;
        target.push(num_rational::BigRational::from_integer(s.clone()));
        crate::lattice::cone_membership(&target, &gens)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn root_ideal(i: &MonomialIdeal, d: u64) -> Result<MonomialIdeal> {
    i.root(d)
}

pub fn normalize_ideal(i: &MonomialIdeal) -> Result<MonomialIdeal> {
    i.normalize()
}

pub fn power(i: &MonomialIdeal, e: u64) -> MonomialIdeal {
    i.power(e)
}

/// A Kummer center `(t_1..t_l, m_1^{1/d}..m_r^{1/d})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KummerIdeal {
    pub smooth_count: usize,
    pub denom: u64,
    pub monomials: Vec<LatticeVector>,
}

impl KummerIdeal {
    pub fn new(smooth_count: usize, denom: u64, monomials: Vec<LatticeVector>) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidInput("denominator must be positive".into()));
        }
        Ok(KummerIdeal { smooth_count, denom, monomials })
    }

    pub fn is_monomial(&self) -> bool {
        self.smooth_count == 0
    }

    /// Checks the monomials lie in `monoid`.
    pub fn check(&self, monoid: &FsMonoid) -> Result<()> {
        for m in &self.monomials {
            if m.rank() != monoid.ambient() || !monoid.contains(m) {
                return Err(Error::ElementNotInMonoid(m.to_string()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for KummerIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = (1..=self.smooth_count).map(|i| format!("t{i}")).collect();
        for m in &self.monomials {
            if self.denom == 1 {
                parts.push(m.to_string());
            } else {
                parts.push(format!("{m}^(1/{})", self.denom));
            }
        }
        write!(f, "({})", parts.join(", "))
    }
}

/// A generator `t^a · m^{1/d}` of a power of a Kummer ideal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct KummerTerm {
    pub t_exponents: Vec<u64>,
    pub numerator: LatticeVector,
}

/// Formal power of a Kummer ideal, keeping the denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KummerPower {
    pub denom: u64,
    pub terms: Vec<KummerTerm>,
}

pub fn kummer_power(monoid: &FsMonoid, i: &KummerIdeal, e: u64) -> Result<KummerPower> {
    i.check(monoid)?;
    let l = i.smooth_count;
    let mut base: Vec<KummerTerm> = (0..l)
        .map(|j| {
            let mut t = vec![0; l];
            t[j] = 1;
            KummerTerm { t_exponents: t, numerator: LatticeVector::zero(monoid.ambient()) }
        })
        .collect();
    base.extend(i.monomials.iter().map(|m| KummerTerm { t_exponents: vec![0; l], numerator: m.clone() }));
    let mut acc = vec![KummerTerm { t_exponents: vec![0; l], numerator: LatticeVector::zero(monoid.ambient()) }];
    for _ in 0..e {
        let mut next = Vec::new();
        for a in &acc {
            for b in &base {
                next.push(KummerTerm {
                    t_exponents: a.t_exponents.iter().zip(&b.t_exponents).map(|(x, y)| x + y).collect(),
                    numerator: &a.numerator + &b.numerator,
                });
            }
        }
        acc = minimize_terms(monoid, next);
    }
    Ok(KummerPower { denom: i.denom, terms: acc })
}

fn minimize_terms(monoid: &FsMonoid, mut terms: Vec<KummerTerm>) -> Vec<KummerTerm> {
    terms.sort();
    terms.dedup();
    let divides = |a: &KummerTerm, b: &KummerTerm| {
        a.t_exponents.iter().zip(&b.t_exponents).all(|(x, y)| x <= y) && monoid.contains(&(&b.numerator - &a.numerator))
    };
    let kept: Vec<KummerTerm> = terms
        .iter()
        .filter(|b| !terms.iter().any(|a| a != *b && divides(a, b)))
        .cloned()
        .collect();
    kept
}

/// An ordinary ideal `(t_{i}^{a_i} .., m_1 .. m_r)` on a chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdinaryIdeal {
    /// `(index, exponent)` pairs of chart coordinates.
    pub smooth: Vec<(usize, u64)>,
    pub monomials: Vec<LatticeVector>,
}

impl fmt::Display for OrdinaryIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .smooth
            .iter()
            .map(|(i, a)| if *a == 1 { format!("t{}", i + 1) } else { format!("t{}^{a}", i + 1) })
            .collect();
        parts.extend(self.monomials.iter().map(|m| m.to_string()));
        write!(f, "({})", parts.join(", "))
    }
}

/// `J_e = (t_1^e .. t_l^e, m_1^{e/d} .. m_r^{e/d})`.
pub fn kummer_descend_je(monoid: &FsMonoid, i: &KummerIdeal, e: u64) -> Result<OrdinaryIdeal> {
    i.check(monoid)?;
    if e == 0 || e % i.denom != 0 {
        return Err(Error::DenominatorMismatch { denom: i.denom, exponent: e });
    }
    let k = BigInt::from(e / i.denom);
    let monos: Vec<_> = i.monomials.iter().map(|m| m.scale(&k)).collect();
    Ok(OrdinaryIdeal { smooth: (0..i.smooth_count).map(|j| (j, e)).collect(), monomials: minimize(monoid, monos) })
}

/// Compositions of `e` into `r` nonnegative parts.
fn compositions(e: u64, r: usize) -> Vec<Vec<u64>> {
    if r == 0 {
        return if e == 0 { vec![vec![]] } else { vec![] };
    }
    if r == 1 {
        return vec![vec![e]];
    }
    let mut out = Vec::new();
    for a in 0..=e {
        for mut rest in compositions(e - a, r - 1) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// `J̃_e = I^e ∩ O_X` for a monomial Kummer ideal.
pub fn kummer_descend_jtilde(monoid: &FsMonoid, i: &KummerIdeal, e: u64) -> Result<MonomialIdeal> {
    if !i.is_monomial() {
        return Err(Error::NonMonomialKummerIdeal);
    }
    i.check(monoid)?;
    if e == 0 || e % i.denom != 0 {
        return Err(Error::DenominatorMismatch { denom: i.denom, exponent: e });
    }
    let d = BigInt::from(i.denom);
    let mut shifts = Vec::new();
    for a in compositions(e, i.monomials.len()) {
        let mut s = LatticeVector::zero(monoid.ambient());
        for (aj, m) in a.iter().zip(&i.monomials) {
            if *aj > 0 {
                s = &s + &m.scale(&BigInt::from(*aj));
            }
        }
        shifts.push((s, d.clone()));
    }
    shifts.sort();
    shifts.dedup();
    let gens = shifted_cone_points(monoid, &shifts)?;
    Ok(MonomialIdeal { monoid: monoid.clone(), gens })
}

impl MonomialIdeal {
    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lv;

    fn root_monoid() -> FsMonoid {
        FsMonoid::new(&[lv(&[3, 0]), lv(&[0, 3]), lv(&[1, 2]), lv(&[2, 1])], 2).unwrap()
    }

    #[test]
    fn root_ideal_examples() {
        let m = root_monoid();
        let i = MonomialIdeal::new(&m, &[lv(&[3, 3])]).unwrap();
        let r = i.root(3).unwrap();
        assert_eq!(r.generators(), &[lv(&[1, 2]), lv(&[2, 1])]);
        assert!(!r.is_principal());
        assert!(!r.is_invertible().unwrap());
        assert!(i.is_invertible().unwrap());
        assert_eq!(i.root(1).unwrap(), i);
        let n = FsMonoid::free(1);
        let two = MonomialIdeal::new(&n, &[lv(&[2])]).unwrap();
        assert_eq!(two.root(2).unwrap().generators(), &[lv(&[1])]);
    }

    #[test]
    fn invertibility() {
        let n2 = FsMonoid::free(2);
        let max = MonomialIdeal::new(&n2, &[lv(&[1, 0]), lv(&[0, 1])]).unwrap();
        assert!(!max.is_invertible().unwrap());
        let p = MonomialIdeal::new(&n2, &[lv(&[2, 1])]).unwrap();
        assert!(p.is_principal() && p.is_invertible().unwrap());
    }

    #[test]
    fn powers() {
        let n = FsMonoid::free(1);
        assert_eq!(MonomialIdeal::new(&n, &[lv(&[1])]).unwrap().power(2).generators(), &[lv(&[2])]);
        let n2 = FsMonoid::free(2);
        let max = MonomialIdeal::new(&n2, &[lv(&[1, 0]), lv(&[0, 1])]).unwrap();
        assert_eq!(max.power(2).generators(), &[lv(&[0, 2]), lv(&[1, 1]), lv(&[2, 0])]);
        let k = KummerIdeal::new(1, 2, vec![lv(&[1])]).unwrap();
        let p = kummer_power(&n, &k, 2).unwrap();
        let terms: Vec<_> = p.terms.iter().map(|t| (t.t_exponents.clone(), t.numerator.clone())).collect();
        assert_eq!(terms, vec![(vec![0], lv(&[2])), (vec![1], lv(&[1])), (vec![2], lv(&[0]))]);
    }

    #[test]
    fn normalization() {
        let n2 = FsMonoid::free(2);
        let i = MonomialIdeal::new(&n2, &[lv(&[2, 0]), lv(&[0, 2])]).unwrap();
        assert_eq!(i.normalize().unwrap().generators(), &[lv(&[0, 2]), lv(&[1, 1]), lv(&[2, 0])]);
        let i = MonomialIdeal::new(&n2, &[lv(&[3, 0]), lv(&[0, 3])]).unwrap();
        assert_eq!(i.normalize().unwrap().generators(), &[lv(&[0, 3]), lv(&[1, 2]), lv(&[2, 1]), lv(&[3, 0])]);
        let p = MonomialIdeal::new(&n2, &[lv(&[1, 2])]).unwrap();
        assert_eq!(p.normalize().unwrap(), p);
    }

    #[test]
    fn descents() {
        let n = FsMonoid::free(1);
        let k = KummerIdeal::new(1, 2, vec![lv(&[1])]).unwrap();
        let j = kummer_descend_je(&n, &k, 2).unwrap();
        assert_eq!(j.smooth, vec![(0, 2)]);
        assert_eq!(j.monomials, vec![lv(&[1])]);
        assert_eq!(kummer_descend_je(&n, &k, 3), Err(Error::DenominatorMismatch { denom: 2, exponent: 3 }));
        assert_eq!(kummer_descend_jtilde(&n, &k, 2), Err(Error::NonMonomialKummerIdeal));
        let k = KummerIdeal::new(0, 2, vec![lv(&[1])]).unwrap();
        assert_eq!(kummer_descend_jtilde(&n, &k, 2).unwrap().generators(), &[lv(&[1])]);
        let k = KummerIdeal::new(0, 3, vec![lv(&[1])]).unwrap();
        assert_eq!(kummer_descend_je(&n, &k, 3).unwrap().monomials, vec![lv(&[1])]);
    }

    #[test]
    fn jtilde_with_trivial_denominator_is_a_power() {
        let m = root_monoid();
        let k = KummerIdeal::new(0, 1, vec![lv(&[1, 2]), lv(&[2, 1])]).unwrap();
        let jt = kummer_descend_jtilde(&m, &k, 2).unwrap();
        let ordinary = MonomialIdeal::new(&m, &[lv(&[1, 2]), lv(&[2, 1])]).unwrap().power(2);
        assert_eq!(jt, ordinary);
    }
}
