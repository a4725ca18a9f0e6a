use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::quiver::{window, Quiver, Vertex};

/// A decidable set of vertices, described symbolically.
#[derive(Clone)]
pub enum VertexSet {
    Empty,
    All,
    Finite(BTreeSet<Vertex>),
    /// Everything reachable from the seeds.
    Successors(BTreeSet<Vertex>),
    /// Everything reaching one of the seeds.
    Predecessors(BTreeSet<Vertex>),
    /// `lo ≤ index ≤ hi` on one lane (or every lane when `lane` is `None`).
    Range { lane: Option<u8>, lo: Option<i64>, hi: Option<i64> },
    /// Closure of `seeds` inside `within` along paths that stay in `within`.
    Closure { seeds: BTreeSet<Vertex>, forward: bool, within: Box<VertexSet> },
    Union(Vec<VertexSet>),
    Intersection(Vec<VertexSet>),
    Complement(Box<VertexSet>),
    /// Membership decided by a function, with a description for reports.
    Oracle(Arc<dyn Fn(Vertex) -> bool + Send + Sync>, String),
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe(None))
    }
}

fn list(q: Option<&Quiver>, s: &BTreeSet<Vertex>) -> String {
    let names: Vec<String> = s
        .iter()
        .map(|&v| q.map_or_else(|| format!("{}:{}", v.lane, v.index), |q| q.vertex_label(v)))
        .collect();
    format!("{{{}}}", names.join(", "))
}

impl VertexSet {
    pub fn finite(vs: impl IntoIterator<Item = Vertex>) -> Self {
        VertexSet::Finite(vs.into_iter().collect())
    }

    pub fn successors_of(vs: impl IntoIterator<Item = Vertex>) -> Self {
        VertexSet::Successors(vs.into_iter().collect())
    }

    pub fn predecessors_of(vs: impl IntoIterator<Item = Vertex>) -> Self {
        VertexSet::Predecessors(vs.into_iter().collect())
    }

    /// `{ n : lo ≤ n ≤ hi }` on lane 0.
    pub fn range(lo: Option<i64>, hi: Option<i64>) -> Self {
        VertexSet::Range { lane: Some(0), lo, hi }
    }

    pub fn oracle(f: impl Fn(Vertex) -> bool + Send + Sync + 'static, name: impl Into<String>) -> Self {
        VertexSet::Oracle(Arc::new(f), name.into())
    }

    pub fn complement(&self) -> Self {
        match self {
            VertexSet::Complement(inner) => (**inner).clone(),
            VertexSet::Empty => VertexSet::All,
            VertexSet::All => VertexSet::Empty,
            other => VertexSet::Complement(Box::new(other.clone())),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        match (self, other) {
            (VertexSet::Empty, x) | (x, VertexSet::Empty) => x.clone(),
            (VertexSet::Finite(a), VertexSet::Finite(b)) => VertexSet::Finite(a.union(b).copied().collect()),
            _ => VertexSet::Union(vec![self.clone(), other.clone()]),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        match (self, other) {
            (VertexSet::All, x) | (x, VertexSet::All) => x.clone(),
            (VertexSet::Empty, _) | (_, VertexSet::Empty) => VertexSet::Empty,
            _ => VertexSet::Intersection(vec![self.clone(), other.clone()]),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn contains(&self, q: &Quiver, v: Vertex) -> bool {
        if !q.contains(v) {
            return false;
        }
        match self {
            VertexSet::Empty => false,
            VertexSet::All => true,
            VertexSet::Finite(s) => s.contains(&v),
            VertexSet::Successors(s) => s.iter().any(|&x| q.reaches(x, v)),
            VertexSet::Predecessors(s) => s.iter().any(|&x| q.reaches(v, x)),
            VertexSet::Range { lane, lo, hi } => {
                lane.is_none_or(|l| l == v.lane) && lo.is_none_or(|l| v.index >= l) && hi.is_none_or(|h| v.index <= h)
            }
            VertexSet::Closure { seeds, forward, within } => closure_contains(q, seeds, *forward, within, v),
            VertexSet::Union(parts) => parts.iter().any(|p| p.contains(q, v)),
            VertexSet::Intersection(parts) => parts.iter().all(|p| p.contains(q, v)),
            VertexSet::Complement(inner) => !inner.contains(q, v),
            VertexSet::Oracle(f, _) => f(v),
        }
    }

    /// The same set read in the opposite quiver, where successor and
    /// predecessor closures swap.
    pub fn opposite(&self) -> Self {
        match self {
            VertexSet::Successors(s) => VertexSet::Predecessors(s.clone()),
            VertexSet::Predecessors(s) => VertexSet::Successors(s.clone()),
            VertexSet::Closure { seeds, forward, within } => {
                VertexSet::Closure { seeds: seeds.clone(), forward: !forward, within: Box::new(within.opposite()) }
            }
            VertexSet::Union(p) => VertexSet::Union(p.iter().map(|x| x.opposite()).collect()),
            VertexSet::Intersection(p) => VertexSet::Intersection(p.iter().map(|x| x.opposite()).collect()),
            VertexSet::Complement(x) => VertexSet::Complement(Box::new(x.opposite())),
            other => other.clone(),
        }
    }

    /// Vertices the description is anchored at (seeds and range ends).
    pub fn anchors(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        self.collect_anchors(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_anchors(&self, out: &mut Vec<Vertex>) {
        match self {
            VertexSet::Finite(s) | VertexSet::Successors(s) | VertexSet::Predecessors(s) => out.extend(s.iter().copied()),
            VertexSet::Range { lane, lo, hi } => {
                let l = lane.unwrap_or(0);
                out.extend(lo.iter().chain(hi.iter()).map(|&i| Vertex::on_lane(l, i)));
            }
            VertexSet::Closure { seeds, within, .. } => {
                out.extend(seeds.iter().copied());
                within.collect_anchors(out);
            }
            VertexSet::Union(p) | VertexSet::Intersection(p) => p.iter().for_each(|x| x.collect_anchors(out)),
            VertexSet::Complement(x) => x.collect_anchors(out),
            VertexSet::Empty | VertexSet::All | VertexSet::Oracle(..) => {}
        }
    }

    /// Elements lying in a finite vertex collection.
    pub fn within<'a>(&'a self, q: &'a Quiver, vs: impl IntoIterator<Item = &'a Vertex> + 'a) -> BTreeSet<Vertex> {
        vs.into_iter().copied().filter(|&v| self.contains(q, v)).collect()
    }

    pub fn describe(&self, q: Option<&Quiver>) -> String {
        match self {
            VertexSet::Empty => "{}".into(),
            VertexSet::All => "all vertices".into(),
            VertexSet::Finite(s) => list(q, s),
            VertexSet::Successors(s) => format!("successors of {}", list(q, s)),
            VertexSet::Predecessors(s) => format!("predecessors of {}", list(q, s)),
            VertexSet::Range { lane, lo, hi } => {
                let l = match (q.and_then(|q| q.preset_kind()), lane) {
                    (Some(crate::quiver::Preset::Ladder), Some(0)) => "a_n".to_string(),
                    (Some(crate::quiver::Preset::Ladder), Some(1)) => "b_n".to_string(),
                    _ => "n".to_string(),
                };
                match (lo, hi) {
                    (None, None) => format!("{{{l}}}"),
                    (Some(a), None) => format!("{{{l} : n ≥ {a}}}"),
                    (None, Some(b)) => format!("{{{l} : n ≤ {b}}}"),
                    (Some(a), Some(b)) => format!("{{{l} : {a} ≤ n ≤ {b}}}"),
                }
            }
            VertexSet::Closure { seeds, forward, within } => format!(
                "{} of {} inside {}",
                if *forward { "successor closure" } else { "predecessor closure" },
                list(q, seeds),
                within.describe(q)
            ),
            VertexSet::Union(p) => p.iter().map(|x| x.describe(q)).collect::<Vec<_>>().join(" ∪ "),
            VertexSet::Intersection(p) => {
                p.iter().map(|x| format!("({})", x.describe(q))).collect::<Vec<_>>().join(" ∩ ")
            }
            VertexSet::Complement(x) => format!("complement of ({})", x.describe(q)),
            VertexSet::Oracle(_, name) => name.clone(),
        }
    }
}

fn closure_contains(q: &Quiver, seeds: &BTreeSet<Vertex>, forward: bool, within: &VertexSet, v: Vertex) -> bool {
    if !within.contains(q, v) {
        return false;
    }
    let toward = |w: Vertex| if forward { q.reaches(w, v) } else { q.reaches(v, w) };
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<Vertex> =
        seeds.iter().copied().filter(|&s| within.contains(q, s) && toward(s)).collect();
    while let Some(w) = queue.pop_front() {
        if w == v {
            return true;
        }
        if !seen.insert(w) {
            continue;
        }
        let next: Vec<Vertex> = if forward {
            q.out_arrows(w).iter().map(|a| a.dst).collect()
        } else {
            q.in_arrows(w).iter().map(|a| a.src).collect()
        };
        for x in next {
            if !seen.contains(&x) && toward(x) && within.contains(q, x) {
                queue.push_back(x);
            }
        }
    }
    false
}

impl VertexSet {
    /// Successor (`forward = true`) or predecessor closure of a finite set.
    ///
    /// ```
    /// use arknit_core::quiver::{Preset, Quiver, Vertex, VertexSet};
    /// let q = Quiver::preset(Preset::Line);
    /// let s = VertexSet::closure(&[Vertex::new(0)], true);
    /// assert!(s.contains(&q, Vertex::new(-5)));
    /// assert!(!s.contains(&q, Vertex::new(1)));
    /// ```
    pub fn closure(seeds: &[Vertex], forward: bool) -> Self {
        let s: BTreeSet<Vertex> = seeds.iter().copied().collect();
        if forward {
            VertexSet::Successors(s)
        } else {
            VertexSet::Predecessors(s)
        }
    }
}

/// Finiteness data of a full subquiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubquiverClass {
    pub top_finite: bool,
    pub socle_finite: bool,
    pub finite: bool,
    /// Sources found on the inspected window.
    pub sources: Vec<Vertex>,
    /// Sinks found on the inspected window.
    pub sinks: Vec<Vertex>,
    pub radius: usize,
}

/// Classifies the full subquiver on `set` by comparing windows of radius
/// `radius` and `2 · radius` around its anchors.
pub fn classify_subquiver(q: &Quiver, set: &VertexSet, radius: usize) -> SubquiverClass {
    let mut seeds = set.anchors();
    seeds.retain(|&v| q.contains(v));
    if seeds.is_empty() {
        seeds.push(q.origin());
    }
    let small = window(q, &seeds, radius);
    let large = window(q, &seeds, 2 * radius.max(1));
    let members = |w: &BTreeSet<Vertex>| -> BTreeSet<Vertex> { w.iter().copied().filter(|&v| set.contains(q, v)).collect() };
    let (ms, ml) = (members(&small.vertices), members(&large.vertices));
    let is_source = |v: Vertex| q.in_arrows(v).iter().all(|a| !set.contains(q, a.src));
    let is_sink = |v: Vertex| q.out_arrows(v).iter().all(|a| !set.contains(q, a.dst));
    let sources_s: Vec<Vertex> = ms.iter().copied().filter(|&v| is_source(v)).collect();
    let sources_l: Vec<Vertex> = ml.iter().copied().filter(|&v| is_source(v)).collect();
    let sinks_s: Vec<Vertex> = ms.iter().copied().filter(|&v| is_sink(v)).collect();
    let sinks_l: Vec<Vertex> = ml.iter().copied().filter(|&v| is_sink(v)).collect();
    let boundary = large.boundary(q);
    let finite = match set {
        VertexSet::Finite(_) | VertexSet::Empty => true,
        _ => q.is_finite() || (ms == ml && ml.iter().all(|v| !boundary.contains(v))),
    };
    let top_finite = finite
        || (sources_s == sources_l && ml.iter().all(|&v| sources_l.iter().any(|&s| q.reaches(s, v))));
    let socle_finite =
        finite || (sinks_s == sinks_l && ml.iter().all(|&v| sinks_l.iter().any(|&s| q.reaches(v, s))));
    SubquiverClass { top_finite, socle_finite, finite, sources: sources_l, sinks: sinks_l, radius }
}
