//! Shared fixtures for the integration tests: seeded random instances and
//! brute-force oracles that do not use the library's algorithms.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toroidal::chart::{GroupAction, ToroidalChart};
use toroidal::ideal::KummerIdeal;
use toroidal::lattice::{lv, CharacterMap, FiniteAbelianGroup, LatticeVector};
use toroidal::monoid::FsMonoid;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random unimodular matrix as a product of elementary operations.
fn unimodular(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n < 2 {
        return m;
    }
    for _ in 0..r.gen_range(0..3) {
        let i = r.gen_range(0..n);
        let mut j = r.gen_range(0..n);
        while j == i {
            j = r.gen_range(0..n);
        }
        let k = r.gen_range(-1..=1);
        for c in 0..n {
            m[i][c] += k * m[j][c];
        }
    }
    m
}

/// A random sharp fs monoid of rank `n` (full in its lattice) given by
/// generators in the positive orthant, moved by a random unimodular map.
pub fn random_monoid(r: &mut ChaCha8Rng, n: usize) -> FsMonoid {
    if n == 0 {
        return FsMonoid::zero(0);
    }
    let u = unimodular(r, n);
    loop {
        let count = r.gen_range(n..=n + 2);
        let mut gens = Vec::new();
        for i in 0..count {
            let v: Vec<i64> = (0..n).map(|j| if i < n && i == j { r.gen_range(1..=2) } else if i < n { 0 } else { r.gen_range(0..=2) }).collect();
            if v.iter().any(|&x| x != 0) {
                let w: Vec<i64> = (0..n).map(|c| (0..n).map(|k| v[k] * u[k][c]).sum()).collect();
                gens.push(lv(&w));
            }
        }
        if let Ok(m) = FsMonoid::new(&gens, n) {
            if m.rank() == n {
                return m;
            }
        }
    }
}

/// A random nonzero element of the monoid.
pub fn random_element(r: &mut ChaCha8Rng, m: &FsMonoid) -> LatticeVector {
    let gens = m.generators();
    loop {
        let mut v = LatticeVector::zero(m.ambient());
        for g in gens {
            let k = r.gen_range(0..=2);
            if k > 0 {
                v = &v + &g.scale(&BigInt::from(k));
            }
        }
        if !v.is_zero() {
            return v;
        }
    }
}

/// A permissible Kummer center on an untwisted chart.
pub struct KummerInstance {
    pub chart: ToroidalChart,
    pub ideal: KummerIdeal,
}

pub fn random_kummer_instance(r: &mut ChaCha8Rng) -> KummerInstance {
    let n = r.gen_range(1..=3);
    let monoid = random_monoid(r, n);
    let t_count = r.gen_range(0..=2usize);
    let l = r.gen_range(0..=t_count);
    let count = if l == 0 { r.gen_range(1..=3) } else { r.gen_range(0..=3) };
    let monos: Vec<_> = (0..count).map(|_| random_element(r, &monoid)).collect();
    let d = r.gen_range(1..=4);
    let chart = ToroidalChart::untwisted(monoid, 0, t_count);
    let ideal = KummerIdeal::new(l, d, monos).unwrap();
    KummerInstance { chart, ideal }
}

/// A random chart with a diagonal action of `(Z/q)^k`.
pub fn random_twisted_chart(r: &mut ChaCha8Rng) -> ToroidalChart {
    let n = r.gen_range(0..=2);
    let monoid = random_monoid(r, n);
    let t_count = r.gen_range(0..=2usize);
    let unit_rank = r.gen_range(0..=1usize);
    let k = r.gen_range(1..=2);
    let orders: Vec<u64> = (0..k).map(|_| r.gen_range(2..=4)).collect();
    let group = FiniteAbelianGroup::new(orders.clone());
    let images = (0..n + unit_rank + t_count).map(|_| orders.iter().map(|&q| r.gen_range(0..q)).collect()).collect();
    let action = GroupAction { group: group.clone(), chars: CharacterMap { group, images }, lattice_autos: vec![] };
    ToroidalChart::new(monoid, unit_rank, t_count, action).unwrap()
}

/// A full-dimensional cone in dimension 2 or 3 described by facet normals
/// found by brute force over pairs of generators.
pub struct OracleCone {
    pub dim: usize,
    pub gens: Vec<Vec<i64>>,
    pub facets: Vec<Vec<i64>>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rank_of(vs: &[Vec<i64>], dim: usize) -> usize {
    // rank of small integer vectors via fraction-free elimination
    let mut rows: Vec<Vec<i128>> = vs.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let mut rank = 0;
    for c in 0..dim {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let (a, b) = (rows[rank][c], rows[i][c]);
                for k in 0..dim {
                    rows[i][k] = rows[i][k] * a - rows[rank][k] * b;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl OracleCone {
    /// `None` unless the generators span a full-dimensional pointed cone.
    pub fn new(gens: &[Vec<i64>]) -> Option<OracleCone> {
        let dim = gens.first()?.len();
        let gens: Vec<Vec<i64>> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
        if rank_of(&gens, dim) < dim {
            return None;
        }
        let mut candidates = Vec::new();
        if dim == 2 {
            for g in &gens {
                candidates.push(vec![-g[1], g[0]]);
            }
        } else {
            for a in &gens {
                for b in &gens {
                    candidates.push(vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]);
                }
            }
        }
        let mut facets: Vec<Vec<i64>> = Vec::new();
        for c in candidates {
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for n in [c.clone(), c.iter().map(|x| -x).collect::<Vec<_>>()] {
                if gens.iter().all(|g| dot(&n, g) >= 0) {
                    let g = n.iter().fold(0, |acc, &x| gcd(acc, x.abs()));
                    let n: Vec<i64> = n.iter().map(|x| x / g).collect();
                    if !facets.contains(&n) {
                        facets.push(n);
                    }
                }
            }
        }
        if rank_of(&facets, dim) < dim {
            return None;
        }
        facets.sort();
        Some(OracleCone { dim, gens, facets })
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.facets.iter().all(|f| dot(f, p) >= 0)
    }

    /// Bounding box of the zonotope `Σ [0,1]·g`, which contains every
    /// irreducible element.
    fn zonotope_box(&self) -> Vec<(i64, i64)> {
        (0..self.dim)
            .map(|c| {
                let lo = self.gens.iter().map(|g| g[c].min(0)).sum();
                let hi = self.gens.iter().map(|g| g[c].max(0)).sum();
                (lo, hi)
            })
            .collect()
    }

    pub fn hilbert_basis(&self) -> Vec<LatticeVector> {
        let pts: Vec<Vec<i64>> =
            box_range(&self.zonotope_box()).into_iter().filter(|p| p.iter().any(|&x| x != 0) && self.contains(p)).collect();
        let mut out: Vec<LatticeVector> = pts
            .iter()
            .filter(|p| {
                !pts.iter().any(|q| {
                    let d: Vec<i64> = p.iter().zip(q.iter()).map(|(a, b)| a - b).collect();
                    d.iter().any(|&x| x != 0) && self.contains(&d)
                })
            })
            .map(|p| lv(p))
            .collect();
        out.sort();
        out
    }

    /// Minimal generators of the root ideal `{m : d·m ∈ (gens)}` of the
    /// saturated monoid `cone ∩ Z^dim`.
    pub fn root_ideal(&self, ideal: &[Vec<i64>], d: i64) -> Vec<LatticeVector> {
        let z = self.zonotope_box();
        let top = ideal.iter().flat_map(|g| g.iter()).map(|x| x.abs()).max().unwrap_or(0) / d + 1;
        let bounds: Vec<(i64, i64)> = z.iter().map(|&(lo, hi)| (lo - top, hi + top)).collect();
        let in_ideal = |m: &[i64]| {
            ideal.iter().any(|g| {
                let diff: Vec<i64> = m.iter().zip(g).map(|(a, b)| d * a - b).collect();
                self.contains(&diff)
            })
        };
        let pts: Vec<Vec<i64>> = box_range(&bounds).into_iter().filter(|p| self.contains(p) && in_ideal(p)).collect();
        let mut out: Vec<LatticeVector> = pts
            .iter()
            .filter(|p| {
                !pts.iter().any(|q| {
                    let diff: Vec<i64> = p.iter().zip(q.iter()).map(|(a, b)| a - b).collect();
                    diff.iter().any(|&x| x != 0) && self.contains(&diff)
                })
            })
            .map(|p| lv(p))
            .collect();
        out.sort();
        out
    }
}

fn box_range(bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &(lo, hi) in bounds {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn examples_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

/// The golden command-line suite: a report name and the arguments after
/// the program name. Chart paths are relative to `examples/`.
pub fn golden_suite() -> Vec<(String, Vec<String>)> {
    let ex = examples_dir();
    let p = |f: &str| ex.join(f).to_string_lossy().into_owned();
    let mut cases: Vec<(String, Vec<String>)> = vec![
        ("index_three_root".into(), vec!["root-ideal".into(), p("index_three.chart"), "--ideal=(3,3)".into(), "--d=3".into()]),
        ("index_three_saturate".into(), vec!["saturate".into(), p("index_three.chart")]),
        ("half_turn_stabilizers".into(), vec!["stabilizers".into(), p("half_turn.chart")]),
        ("half_turn_line_stabilizers".into(), vec!["stabilizers".into(), p("half_turn_line.chart")]),
        ("half_turn_coarsen".into(), vec!["coarsen".into(), p("half_turn.chart")]),
        ("half_turn_line_coarsen".into(), vec!["coarsen".into(), p("half_turn_line.chart")]),
        ("half_turn_coarse_space".into(), vec!["coarse-space".into(), p("half_turn.chart")]),
        ("half_turn_destackified".into(), vec!["destackified".into(), p("half_turn.chart")]),
        ("root_plane_kummer".into(), vec!["kummer-blowup".into(), p("root_plane.chart"), "--ideal=t;pi^(1/2)".into()]),
        ("root_plane_coarse".into(), vec!["coarse-blowup".into(), p("root_plane.chart"), "--ideal=t;pi^(1/2)".into(), "--e=2".into()]),
        ("root_plane_blowup".into(), vec!["blowup".into(), p("root_plane.chart"), "--center=t;pi".into()]),
        ("root_plane_enlarge".into(), vec!["enlarge".into(), p("root_plane.chart"), "--t=t".into()]),
        ("root_line_strict".into(), vec![
            "strict-transform".into(), p("root_line.chart"), "--subchart=".into(), "--ideal=pi^(1/2)".into(), "--n=2".into(), "--m=1".into(),
        ]),
        ("root_line_d3_m1_destackified".into(), vec!["destackified".into(), p("output/root_line_d3_m1.chart")]),
        ("root_plane_m1_destackified".into(), vec!["destackified".into(), p("output/root_plane_m1.chart")]),
        ("root_plane_m1_stabilizers".into(), vec!["stabilizers".into(), p("output/root_plane_m1.chart")]),
    ];
    for d in 2..=5 {
        cases.push((format!("root_line_d{d}_kummer"), vec!["kummer-blowup".into(), p("root_line.chart"), format!("--ideal=pi^(1/{d})")]));
    }
    let json: Vec<_> = cases
        .iter()
        .map(|(n, a)| {
            let mut a = a.clone();
            a.push("--format=json".into());
            (format!("{n}.json"), a)
        })
        .collect();
    let mut out: Vec<_> = cases.into_iter().map(|(n, a)| (format!("{n}.txt"), a)).collect();
    out.extend(json);
    out
}

/// Runs the CLI in-process with a fixed thread count.
pub fn run_cli(args: &[String], threads: usize) -> toroidal::cli::Outcome {
    let mut full = vec!["toroidal".to_string(), format!("--threads={threads}")];
    full.extend(args.iter().cloned());
    toroidal::cli::run(full)
}
