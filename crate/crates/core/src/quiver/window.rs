use std::collections::{BTreeSet, VecDeque};

use crate::quiver::{Quiver, Vertex};

/// A finite convex set of vertices on which infinite objects are inspected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub vertices: BTreeSet<Vertex>,
    pub seeds: Vec<Vertex>,
    pub radius: usize,
}

impl Window {
    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Window vertices with a neighbour outside the window.
    pub fn boundary(&self, q: &Quiver) -> BTreeSet<Vertex> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| q.neighbours(v).iter().any(|w| !self.vertices.contains(w)))
            .collect()
    }

    /// Window vertices at undirected distance at least `margin` from every
    /// vertex outside the window.
    pub fn interior(&self, q: &Quiver, margin: usize) -> BTreeSet<Vertex> {
        let mut inner = self.vertices.clone();
        for _ in 0..margin {
            let bd: BTreeSet<Vertex> = inner
                .iter()
                .copied()
                .filter(|&v| q.neighbours(v).iter().any(|w| !inner.contains(w)))
                .collect();
            inner = inner.difference(&bd).copied().collect();
        }
        inner
    }
}

/// Vertices lying on a path between two members of `set`.
pub fn convex_hull(q: &Quiver, set: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
    let mut hull = set.clone();
    let mut queue: VecDeque<Vertex> = set.iter().copied().collect();
    while let Some(w) = queue.pop_front() {
        for a in q.out_arrows(w) {
            let x = a.dst;
            if !hull.contains(&x) && set.iter().any(|&y| q.reaches(x, y)) {
                hull.insert(x);
                queue.push_back(x);
            }
        }
    }
    hull
}

/// The radius-`r` window around `seeds`: the undirected ball, closed under
/// convexity, with the in-neighbours of its sinks added and closed again.
///
/// ```
/// use arknit_core::quiver::{window, Preset, Quiver, Vertex};
/// let q = Quiver::preset(Preset::Zigzag);
/// let w = window(&q, &[Vertex::new(0)], 2);
/// let got: Vec<i64> = w.vertices.iter().map(|v| v.index).collect();
/// assert_eq!(got, vec![0, 1, 2, 3]);
/// ```
pub fn window(q: &Quiver, seeds: &[Vertex], radius: usize) -> Window {
    let mut ball: BTreeSet<Vertex> = seeds.iter().copied().filter(|&v| q.contains(v)).collect();
    let mut frontier: Vec<Vertex> = ball.iter().copied().collect();
    for _ in 0..radius {
        let mut next = Vec::new();
        for v in frontier {
            for w in q.neighbours(v) {
                if ball.insert(w) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let mut hull = convex_hull(q, &ball);
    let sinks: Vec<Vertex> = hull.iter().copied().filter(|&v| q.is_sink(v)).collect();
    let mut grew = false;
    for s in sinks {
        for a in q.in_arrows(s) {
            grew |= hull.insert(a.src);
        }
    }
    if grew {
        hull = convex_hull(q, &hull);
    }
    let mut seeds: Vec<Vertex> = seeds.to_vec();
    seeds.sort();
    seeds.dedup();
    Window { vertices: hull, seeds, radius }
}

/// Convex hull of `set` together with an undirected shortest path from `v`
/// into `set` (at most `limit` vertices explored).
pub fn connect(q: &Quiver, set: &BTreeSet<Vertex>, v: Vertex, limit: usize) -> Option<BTreeSet<Vertex>> {
    let mut out = set.clone();
    if !set.contains(&v) && !set.is_empty() {
        let mut parent = std::collections::BTreeMap::new();
        parent.insert(v, v);
        let mut queue = VecDeque::from([v]);
        let mut hit = None;
        while let Some(x) = queue.pop_front() {
            if set.contains(&x) {
                hit = Some(x);
                break;
            }
            if parent.len() > limit {
                return None;
            }
            for w in q.neighbours(x) {
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(w) {
                    e.insert(x);
                    queue.push_back(w);
                }
            }
        }
        let mut x = hit?;
        while x != v {
            x = parent[&x];
            out.insert(x);
        }
    }
    out.insert(v);
    Some(convex_hull(q, &out))
}

/// Vertices of a finite set ordered so that every arrow inside the set goes
/// from an earlier to a later vertex.
pub fn topological_order(q: &Quiver, set: &BTreeSet<Vertex>) -> Vec<Vertex> {
    let mut indeg: std::collections::BTreeMap<Vertex, usize> = set
        .iter()
        .map(|&v| (v, q.in_arrows(v).iter().filter(|a| set.contains(&a.src)).count()))
        .collect();
    let mut ready: VecDeque<Vertex> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let mut out = Vec::with_capacity(set.len());
    while let Some(v) = ready.pop_front() {
        out.push(v);
        for a in q.out_arrows(v) {
            if let Some(d) = indeg.get_mut(&a.dst) {
                *d -= 1;
                if *d == 0 {
                    ready.push_back(a.dst);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Preset;

    #[test]
    fn line_window_is_an_interval() {
        let q = Quiver::preset(Preset::Line);
        let w = window(&q, &[Vertex::new(0)], 3);
        assert_eq!(w.len(), 7);
        assert_eq!(w.boundary(&q).len(), 2);
        assert_eq!(w.interior(&q, 1).len(), 5);
    }

    #[test]
    fn ladder_window_is_convex() {
        let q = Quiver::preset(Preset::Ladder);
        let w = window(&q, &[Vertex::on_lane(0, 0)], 2);
        assert_eq!(convex_hull(&q, &w.vertices), w.vertices);
    }
}
