use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use arknit_core::quiver::{classify_subquiver, window, Path, Preset, Quiver, Vertex, VertexSet};
use proptest::prelude::*;

const PRESETS: [Preset; 5] = [Preset::RayOut, Preset::RayIn, Preset::Line, Preset::Zigzag, Preset::Ladder];

/// A random acyclic quiver on `n` vertices: arrows go from lower to higher
/// position in a shuffled order, some doubled.
fn finite_quiver(n: usize, perm: &[usize], picks: &[u8]) -> Arc<Quiver> {
    let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut arrows = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let mult = picks[k % picks.len()] % 4;
            k += 1;
            for m in 0..(mult.saturating_sub(1)) {
                arrows.push((labels[perm[i] % n].clone(), labels[perm[j] % n].clone(), format!("e{i}_{j}_{m}")));
            }
        }
    }
    let l: Vec<&str> = labels.iter().map(String::as_str).collect();
    let a: Vec<(&str, &str, &str)> = arrows.iter().map(|(s, t, x)| (s.as_str(), t.as_str(), x.as_str())).collect();
    Quiver::finite(&l, &a).unwrap()
}

fn permutation(n: usize, keys: &[u32]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| (keys[i % keys.len()], i));
    idx
}

fn strip(q: &Quiver, r: i64) -> Vec<Vertex> {
    if let Some(all) = q.vertices() {
        return all;
    }
    (0..=1u8).flat_map(|l| (-r..=r).map(move |i| Vertex::on_lane(l, i))).filter(|&v| q.contains(v)).collect()
}

struct Brute {
    finite: bool,
    top_finite: bool,
    socle_finite: bool,
    sources: BTreeSet<Vertex>,
    sinks: BTreeSet<Vertex>,
}

/// Sources, sinks and reachability of the full subquiver on `set`, read
/// on index strips of half-width 30 and 60.
fn brute(q: &Quiver, set: &VertexSet) -> Brute {
    let members = |r| -> BTreeSet<Vertex> { strip(q, r).into_iter().filter(|&v| set.contains(q, v)).collect() };
    let (small, large) = (members(30), members(60));
    let source = |v: &Vertex| q.in_arrows(*v).iter().all(|a| !set.contains(q, a.src));
    let sink = |v: &Vertex| q.out_arrows(*v).iter().all(|a| !set.contains(q, a.dst));
    let sources: BTreeSet<Vertex> = large.iter().copied().filter(source).collect();
    let sinks: BTreeSet<Vertex> = large.iter().copied().filter(sink).collect();
    let reach = |starts: &BTreeSet<Vertex>, forward: bool| -> BTreeSet<Vertex> {
        let mut seen = starts.clone();
        let mut queue: VecDeque<Vertex> = starts.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            let next: Vec<Vertex> = if forward {
                q.out_arrows(v).iter().map(|a| a.dst).collect()
            } else {
                q.in_arrows(v).iter().map(|a| a.src).collect()
            };
            for w in next {
                if large.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    };
    let finite = small == large;
    let stable = |f: &dyn Fn(&Vertex) -> bool| small.iter().filter(|v| f(v)).count() == large.iter().filter(|v| f(v)).count();
    let top_finite = finite || (stable(&source) && small.is_subset(&reach(&sources, true)));
    let socle_finite = finite || (stable(&sink) && small.is_subset(&reach(&sinks, false)));
    Brute { finite, top_finite, socle_finite, sources, sinks }
}

fn preset_set(p: Preset, kind: u8, lo: Option<i64>, hi: Option<i64>, seed: i64) -> VertexSet {
    match (p, kind % 3) {
        (Preset::Ladder, 0) => VertexSet::Range { lane: Some(0), lo, hi },
        (Preset::Ladder, 1) => VertexSet::Range { lane: Some(1), lo, hi },
        (Preset::Ladder, _) => VertexSet::Range { lane: Some(0), lo, hi }.union(&VertexSet::Range { lane: Some(1), lo: hi, hi: None }),
        (_, 2) => VertexSet::closure(&[Vertex::new(seed.abs())], seed >= 0),
        _ => VertexSet::range(lo, hi),
    }
}

fn walk(q: &Quiver, start: Vertex, choices: &[u8]) -> Path {
    let mut arrows = Vec::new();
    let mut v = start;
    for &c in choices {
        let out = q.out_arrows(v);
        if out.is_empty() {
            break;
        }
        let a = out[c as usize % out.len()];
        arrows.push(a);
        v = a.dst;
    }
    Path::new(start, arrows).unwrap()
}

fn split(p: &Path, i: usize, j: usize) -> (Path, Path, Path) {
    let piece = |from: usize, to: usize| {
        let start = if from == 0 { p.start() } else { p.arrows()[from - 1].dst };
        Path::new(start, p.arrows()[from..to].to_vec()).unwrap()
    };
    let (i, j) = (i.min(j).min(p.len()), i.max(j).min(p.len()));
    (piece(0, i), piece(i, j), piece(j, p.len()))
}

fn paths_by_first_step(q: &Quiver, x: Vertex, z: Vertex) -> BTreeSet<Path> {
    let mut out = BTreeSet::new();
    if x == z {
        out.insert(Path::trivial(x));
    }
    for a in q.out_arrows(x) {
        if a.dst == z || q.reaches(a.dst, z) {
            for p in q.paths_between(a.dst, z).unwrap().iter() {
                out.insert(Path::arrow(a).then(p).unwrap());
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn finite_subquivers_match_brute_force(
        n in 2..8usize,
        keys in prop::collection::vec(any::<u32>(), 8),
        picks in prop::collection::vec(any::<u8>(), 28),
        mask in any::<u8>(),
    ) {
        let q = finite_quiver(n, &permutation(n, &keys), &picks);
        let all = q.vertices().unwrap();
        let set = VertexSet::finite(all.iter().copied().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v));
        let c = classify_subquiver(&q, &set, 3);
        let b = brute(&q, &set);
        prop_assert!(c.finite && c.top_finite && c.socle_finite);
        prop_assert_eq!(c.sources.iter().copied().collect::<BTreeSet<_>>(), b.sources);
        prop_assert_eq!(c.sinks.iter().copied().collect::<BTreeSet<_>>(), b.sinks);
    }

    #[test]
    fn preset_subquivers_match_brute_force(
        p in 0..5usize,
        kind in any::<u8>(),
        lo in prop::option::of(-6..6i64),
        width in prop::option::of(0..8i64),
        seed in -6..6i64,
    ) {
        let q = Quiver::preset(PRESETS[p]);
        let hi = width.map(|w| lo.unwrap_or(0) + w);
        let set = preset_set(PRESETS[p], kind, lo, hi, seed);
        let c = classify_subquiver(&q, &set, 10);
        let b = brute(&q, &set);
        prop_assert_eq!(c.finite, b.finite, "{}", set.describe(Some(&q)));
        prop_assert_eq!(c.top_finite, b.top_finite, "{}", set.describe(Some(&q)));
        prop_assert_eq!(c.socle_finite, b.socle_finite, "{}", set.describe(Some(&q)));
        if b.top_finite {
            prop_assert_eq!(c.sources.iter().copied().collect::<BTreeSet<_>>(), b.sources);
        }
    }

    #[test]
    fn path_composition_is_associative(
        p in 0..6usize,
        start in 0..6i64,
        lane in 0..2u8,
        choices in prop::collection::vec(any::<u8>(), 0..10),
        i in 0..10usize,
        j in 0..10usize,
        keys in prop::collection::vec(any::<u32>(), 8),
        picks in prop::collection::vec(any::<u8>(), 28),
    ) {
        let q = if p == 5 { finite_quiver(6, &permutation(6, &keys), &picks) } else { Quiver::preset(PRESETS[p]) };
        let v = if q.is_finite() { q.vertices().unwrap()[start as usize] } else if PRESETS[p] == Preset::Ladder { Vertex::on_lane(lane, start) } else { Vertex::new(start) };
        let whole = walk(&q, v, &choices);
        let (a, b, c) = split(&whole, i, j);
        let left = a.then(&b).unwrap().then(&c).unwrap();
        let right = a.then(&b.then(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&left, &whole);
        let (x, y, z) = (whole.start(), b.start(), whole.end());
        let between = q.paths_between(x, z).unwrap();
        prop_assert!(between.contains(&whole));
        for s in q.paths_between(x, y).unwrap().iter() {
            for t in q.paths_between(y, z).unwrap().iter() {
                prop_assert!(between.contains(&s.then(t).unwrap()));
            }
        }
        prop_assert_eq!(between.iter().cloned().collect::<BTreeSet<_>>(), paths_by_first_step(&q, x, z));
    }
}

#[test]
fn path_bounds_hold_on_windows() {
    let mut finite: Vec<Arc<Quiver>> = vec![Quiver::kronecker(), Quiver::linear_a(6)];
    for s in 0..6u32 {
        let keys: Vec<u32> = (0..8).map(|k| (k * 7 + s * 13) % 11).collect();
        let picks: Vec<u8> = (0..28).map(|k| ((k as u32 * 5 + s * 3) % 7) as u8).collect();
        finite.push(finite_quiver(7, &permutation(7, &keys), &picks));
    }
    let presets: Vec<Arc<Quiver>> = PRESETS.iter().map(|&p| Quiver::preset(p)).collect();
    let mut pairs = 0;
    for q in finite.iter().chain(&presets) {
        let w = window(q, &[q.origin()], 20);
        let vs: Vec<Vertex> = w.vertices.iter().copied().take(40).collect();
        let mut most = 0;
        for &x in &vs {
            for &y in &vs {
                most = most.max(q.paths_between(x, y).unwrap().len());
                pairs += 1;
            }
        }
        match q.ray_info().path_bound {
            Some(bound) => assert!(most <= bound, "{}: {most} > {bound}", q.describe()),
            None => assert!(q.preset_kind() == Some(Preset::Ladder)),
        }
    }
    let ladder = Quiver::preset(Preset::Ladder);
    let counts: Vec<usize> = (0..6)
        .map(|n| ladder.paths_between(Vertex::on_lane(0, n), Vertex::on_lane(1, n)).unwrap().len())
        .collect();
    assert_eq!(counts, vec![1, 2, 3, 4, 5, 6]);
    assert!(pairs > 1000);
}
