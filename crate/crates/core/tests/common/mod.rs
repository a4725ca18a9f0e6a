#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use arknit_core::linalg::Mat;
use arknit_core::quiver::{Preset, Quiver, Vertex, VertexSet};
use arknit_core::rep::{Cocycle, Rep};
use arknit_core::{Budget, Field, Rat};
use proptest::test_runner::{Config, RngSeed};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

pub fn b() -> Budget {
    Budget::default()
}

pub fn rat(n: i64) -> Rat {
    Rat::from_i64(n)
}

pub fn nonzero(g: &mut ChaCha8Rng) -> Rat {
    let n = g.gen_range(1..=3);
    rat(if g.gen_bool(0.5) { n } else { -n })
}

pub fn linear(n: usize) -> (Arc<Quiver>, Vec<Vertex>) {
    let q = Quiver::linear_a(n);
    let v = (1..=n).map(|i| q.vertex(&i.to_string()).unwrap()).collect();
    (q, v)
}

pub fn interval(q: &Arc<Quiver>, v: &[Vertex], i: usize, j: usize) -> Rep<Rat> {
    Rep::thin(q, VertexSet::finite((i..=j).map(|k| v[k - 1])))
}

pub fn line_glue() -> Rep<Rat> {
    let q = Quiver::preset(Preset::Line);
    let p0 = Rep::projective(&q, Vertex::new(0)).unwrap();
    let i1 = Rep::injective(&q, Vertex::new(1)).unwrap();
    Rep::glue(&p0, &i1, Cocycle::new().with(q.arrow("1->0").unwrap(), Mat::identity(1))).unwrap()
}

/// A vertex near the origin of a preset.
pub fn near(q: &Quiver, g: &mut ChaCha8Rng) -> Vertex {
    let lane = if q.preset_kind() == Some(Preset::Ladder) { g.gen_range(0..2) } else { 0 };
    let lo = if q.contains(Vertex::new(-1)) { -3 } else { 0 };
    Vertex::on_lane(lane, g.gen_range(lo..=3))
}

/// A finite dimensional thin object on a short interval of one lane.
pub fn short_thin(q: &Arc<Quiver>, g: &mut ChaCha8Rng) -> Rep<Rat> {
    let v = near(q, g);
    let len = g.gen_range(0..3);
    Rep::thin(q, VertexSet::Range { lane: Some(v.lane), lo: Some(v.index), hi: Some(v.index + len) })
}

/// Finitely presented objects.
pub fn fp_object(q: &Arc<Quiver>, g: &mut ChaCha8Rng) -> Rep<Rat> {
    match g.gen_range(0..3) {
        0 => Rep::projective(q, near(q, g)).unwrap(),
        1 => short_thin(q, g),
        _ => Rep::direct_sum(q, vec![Rep::projective(q, near(q, g)).unwrap(), short_thin(q, g)]).unwrap(),
    }
}

/// Finitely co-presented objects.
pub fn fc_object(q: &Arc<Quiver>, g: &mut ChaCha8Rng) -> Rep<Rat> {
    match g.gen_range(0..3) {
        0 => Rep::injective(q, near(q, g)).unwrap(),
        1 => short_thin(q, g),
        _ => Rep::direct_sum(q, vec![Rep::injective(q, near(q, g)).unwrap(), short_thin(q, g)]).unwrap(),
    }
}

/// Random scalars on the arrows from the quotient's support into the sub's
/// support, within a few steps of the origin.
pub fn finite_cocycle(sub: &Rep<Rat>, quot: &Rep<Rat>, g: &mut ChaCha8Rng) -> Cocycle<Rat> {
    let q = sub.quiver();
    let verts: Vec<Vertex> = match q.vertices() {
        Some(all) => all,
        None => (0..=1u8).flat_map(|l| (-5..=5).map(move |i| Vertex::on_lane(l, i))).filter(|&v| q.contains(v)).collect(),
    };
    let mut c = Cocycle::new();
    for x in verts {
        for a in q.out_arrows(x) {
            let (r, s) = (sub.dim(a.dst).unwrap(), quot.dim(a.src).unwrap());
            if r > 0 && s > 0 && (a.dst.index - a.src.index).abs() <= 1 && a.dst.index.abs() <= 5 && g.gen_bool(0.6) {
                c = c.with(a, Mat::from_fn(r, s, |_, _| rat(g.gen_range(-2..=2))));
            }
        }
    }
    c
}

pub const INFINITE: [Preset; 4] = [Preset::Line, Preset::RayIn, Preset::RayOut, Preset::Ladder];

/// A glue of a finitely presented sub by a finitely co-presented quotient
/// along finitely many arrows, on a preset that has infinite paths.
pub fn seeded_glue(g: &mut ChaCha8Rng) -> Rep<Rat> {
    let q = Quiver::preset(INFINITE[g.gen_range(0..INFINITE.len())]);
    let sub = fp_object(&q, g);
    let quot = fc_object(&q, g);
    let c = finite_cocycle(&sub, &quot, g);
    Rep::glue(&sub, &quot, c).unwrap()
}

/// Evaluation of `m` through a change of basis at every vertex.
pub fn scrambled(m: &Rep<Rat>, g: &mut ChaCha8Rng) -> Rep<Rat> {
    let q = m.quiver();
    let verts = q.vertices().unwrap();
    let mut dims = BTreeMap::new();
    let mut base: BTreeMap<Vertex, (Mat<Rat>, Mat<Rat>)> = BTreeMap::new();
    for &v in &verts {
        let d = m.dim(v).unwrap();
        dims.insert(v, d);
        let t = loop {
            let t = Mat::from_fn(d, d, |i, j| if i == j { rat(1) } else { rat(g.gen_range(-1..=1)) });
            if t.is_invertible() {
                break t;
            }
        };
        let inv = t.inverse().unwrap();
        base.insert(v, (t, inv));
    }
    let maps = q
        .arrows()
        .unwrap()
        .into_iter()
        .map(|a| (a, base[&a.dst].0.mul(&m.arrow_map(a).unwrap()).mul(&base[&a.src].1)))
        .collect();
    Rep::explicit(q, dims, maps).unwrap()
}

/// Dimension-vector translates from path counts: with `C[v][i]` the number
/// of paths `i ⇝ v`, `Φ = -Cᵀ C⁻¹`.
pub struct Coxeter {
    order: Vec<usize>,
    c: Vec<Vec<i64>>,
}

impl Coxeter {
    pub fn new(q: &Quiver, vs: &[Vertex]) -> Self {
        let n = vs.len();
        let pos = |v: Vertex| vs.iter().position(|&w| w == v).unwrap();
        let mut indeg = vec![0usize; n];
        for &v in vs {
            for a in q.out_arrows(v) {
                indeg[pos(a.dst)] += 1;
            }
        }
        let mut order = Vec::new();
        let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(i) = ready.pop() {
            order.push(i);
            for a in q.out_arrows(vs[i]) {
                let j = pos(a.dst);
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(j);
                }
            }
        }
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &u in &order {
            for a in q.out_arrows(vs[u]) {
                let w = pos(a.dst);
                for i in 0..n {
                    c[w][i] += c[u][i];
                }
            }
        }
        Coxeter { order, c }
    }

    pub fn phi(&self, x: &[i64]) -> Vec<i64> {
        let n = x.len();
        let mut z = vec![0; n];
        for &v in &self.order {
            z[v] = x[v] - (0..n).filter(|&i| i != v).map(|i| self.c[v][i] * z[i]).sum::<i64>();
        }
        (0..n).map(|i| -(0..n).map(|v| self.c[v][i] * z[v]).sum::<i64>()).collect()
    }
}
