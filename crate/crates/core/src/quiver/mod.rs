//! Strongly locally finite quivers: finite quivers given by lists and the
//! infinite presets (rays, the line, the zigzag and the ladder).

mod path;
mod vertexset;
mod window;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;

use crate::error::{Error, Result};

pub use path::Path;
pub use vertexset::{classify_subquiver, SubquiverClass, VertexSet};
pub use window::{connect, convex_hull, topological_order, window, Window};

/// Internal vertex identifier. `lane` distinguishes the two rows of the
/// ladder and is `0` everywhere else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub lane: u8,
    pub index: i64,
}

impl Vertex {
    pub const fn new(index: i64) -> Self {
        Vertex { lane: 0, index }
    }

    pub const fn on_lane(lane: u8, index: i64) -> Self {
        Vertex { lane, index }
    }
}

/// An arrow `src → dst`; `tag` separates parallel arrows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub src: Vertex,
    pub dst: Vertex,
    pub tag: u32,
}

impl Arrow {
    pub const fn new(src: Vertex, dst: Vertex, tag: u32) -> Self {
        Arrow { src, dst, tag }
    }

    /// The same arrow read in the opposite quiver.
    pub const fn flipped(self) -> Self {
        Arrow { src: self.dst, dst: self.src, tag: self.tag }
    }
}

/// The built-in infinite quivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `0 → 1 → 2 → ...`
    RayOut,
    /// `0 ← 1 ← 2 ← ...`
    RayIn,
    /// `... ← -1 ← 0 ← 1 ← ...`
    Line,
    /// `0 ← 1 → 2 ← 3 → 4 ...`: odd vertices are sources.
    Zigzag,
    /// Two lanes `a_n` (arrows `a_{n+1} → a_n`) and `b_n` (arrows
    /// `b_n → b_{n+1}`) joined by rungs `a_n → b_n`.
    Ladder,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::RayOut => "ray_out",
            Preset::RayIn => "ray_in",
            Preset::Line => "line",
            Preset::Zigzag => "zigzag",
            Preset::Ladder => "ladder",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "ray_out" | "a_inf_out" => Preset::RayOut,
            "ray_in" | "l_inf" | "a_inf_in" => Preset::RayIn,
            "line" | "a_inf_inf" => Preset::Line,
            "zigzag" => Preset::Zigzag,
            "ladder" => Preset::Ladder,
            _ => return None,
        })
    }
}

/// Answers about infinite paths and path multiplicities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RayInfo {
    /// Contains a path `... → x_2 → x_1 → x_0`.
    pub left_infinite: bool,
    /// Contains a path `x_0 → x_1 → x_2 → ...`.
    pub right_infinite: bool,
    /// Upper bound for `|Q(x, y)|` when one exists.
    pub path_bound: Option<usize>,
}

struct FiniteData {
    labels: Vec<String>,
    arrow_labels: BTreeMap<Arrow, String>,
    out: Vec<Vec<Arrow>>,
    inc: Vec<Vec<Arrow>>,
    reach: Vec<Vec<bool>>,
    max_paths: usize,
}

enum Kind {
    Finite(Arc<FiniteData>),
    Preset(Preset),
}

/// A quiver. Immutable and shared behind an [`Arc`]; path lists are cached.
pub struct Quiver {
    kind: Kind,
    reversed: bool,
    paths: Mutex<HashMap<(Vertex, Vertex), Arc<Vec<Path>>>>,
}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quiver({})", self.describe())
    }
}

impl Quiver {
    pub fn preset(p: Preset) -> Arc<Self> {
        Arc::new(Quiver { kind: Kind::Preset(p), reversed: false, paths: Mutex::new(HashMap::new()) })
    }

    /// A finite quiver. Vertices are numbered in the order given; arrows are
    /// `(source label, target label, arrow label)`. Oriented cycles violate
    /// interval-finiteness and are rejected.
    ///
    /// ```
    /// use arknit_core::quiver::Quiver;
    /// let q = Quiver::finite(&["1", "2"], &[("1", "2", "a"), ("1", "2", "b")]).unwrap();
    /// let (x, y) = (q.vertex("1").unwrap(), q.vertex("2").unwrap());
    /// assert_eq!(q.paths_between(x, y).unwrap().len(), 2);
    /// ```
    pub fn finite(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Arc<Self>> {
        let labels: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let n = labels.len();
        let idx = |s: &str| -> Result<usize> {
            labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::Malformed(format!("unknown vertex '{s}'")))
        };
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Malformed(format!("duplicate vertex '{l}'")));
            }
        }
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut arrow_labels = BTreeMap::new();
        let mut seen_labels: Vec<&str> = Vec::new();
        for (s, t, lab) in arrows {
            let (si, ti) = (idx(s)?, idx(t)?);
            if seen_labels.contains(lab) {
                return Err(Error::Malformed(format!("duplicate arrow label '{lab}'")));
            }
            seen_labels.push(lab);
            let tag = out[si].iter().filter(|a: &&Arrow| a.dst.index == ti as i64).count() as u32;
            let a = Arrow::new(Vertex::new(si as i64), Vertex::new(ti as i64), tag);
            out[si].push(a);
            inc[ti].push(a);
            arrow_labels.insert(a, lab.to_string());
        }
        for l in out.iter_mut().chain(inc.iter_mut()) {
            l.sort();
        }
        // Transitive closure and cycle detection.
        let mut reach = vec![vec![false; n]; n];
        for (s, row) in reach.iter_mut().enumerate() {
            let mut stack = vec![s];
            row[s] = true;
            while let Some(u) = stack.pop() {
                for a in &out[u] {
                    let v = a.dst.index as usize;
                    if v == s {
                        return Err(Error::IntervalFiniteness(format!(
                            "oriented cycle through vertex '{}'",
                            labels[s]
                        )));
                    }
                    if !row[v] {
                        row[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        let data = FiniteData { labels, arrow_labels, out, inc, reach, max_paths: 0 };
        let mut q = Quiver { kind: Kind::Finite(Arc::new(data)), reversed: false, paths: Mutex::new(HashMap::new()) };
        let mut max_paths = 0;
        for x in 0..n {
            for y in 0..n {
                max_paths = max_paths.max(q.paths_between(Vertex::new(x as i64), Vertex::new(y as i64))?.len());
            }
        }
        if let Kind::Finite(d) = &mut q.kind {
            Arc::get_mut(d).expect("unshared").max_paths = max_paths;
        }
        q.paths.lock().clear();
        Ok(Arc::new(q))
    }

    /// Linearly oriented `A_n`: `1 → 2 → ... → n`.
    pub fn linear_a(n: usize) -> Arc<Self> {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let names: Vec<String> = (1..n).map(|i| format!("{}->{}", i, i + 1)).collect();
        let arrows: Vec<(&str, &str, &str)> =
            (0..n.saturating_sub(1)).map(|i| (refs[i], refs[i + 1], names[i].as_str())).collect();
        Self::finite(&refs, &arrows).expect("linear quiver is acyclic")
    }

    /// The Kronecker quiver `1 ⇉ 2`.
    pub fn kronecker() -> Arc<Self> {
        Self::finite(&["1", "2"], &[("1", "2", "a"), ("1", "2", "b")]).expect("acyclic")
    }

    /// The opposite quiver.
    pub fn opposite(&self) -> Arc<Self> {
        let kind = match &self.kind {
            Kind::Finite(d) => Kind::Finite(d.clone()),
            Kind::Preset(p) => Kind::Preset(*p),
        };
        Arc::new(Quiver { kind, reversed: !self.reversed, paths: Mutex::new(HashMap::new()) })
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn preset_kind(&self) -> Option<Preset> {
        match self.kind {
            Kind::Preset(p) => Some(p),
            Kind::Finite(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Finite(_))
    }

    /// Same underlying quiver and orientation.
    pub fn same_as(&self, other: &Quiver) -> bool {
        if self.reversed != other.reversed {
            return false;
        }
        match (&self.kind, &other.kind) {
            (Kind::Preset(a), Kind::Preset(b)) => a == b,
            (Kind::Finite(a), Kind::Finite(b)) => {
                Arc::ptr_eq(a, b) || (a.labels == b.labels && a.arrow_labels == b.arrow_labels)
            }
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        let base = match &self.kind {
            Kind::Preset(p) => p.name().to_string(),
            Kind::Finite(d) => format!("finite quiver on {} vertices", d.labels.len()),
        };
        if self.reversed {
            format!("{base} (opposite)")
        } else {
            base
        }
    }

    /// All vertices of a finite quiver.
    pub fn vertices(&self) -> Option<Vec<Vertex>> {
        match &self.kind {
            Kind::Finite(d) => Some((0..d.labels.len() as i64).map(Vertex::new).collect()),
            Kind::Preset(_) => None,
        }
    }

    /// All arrows of a finite quiver, sorted.
    pub fn arrows(&self) -> Option<Vec<Arrow>> {
        let vs = self.vertices()?;
        Some(vs.into_iter().flat_map(|v| self.out_arrows(v)).collect())
    }

    /// A canonical vertex used as default anchor.
    pub fn origin(&self) -> Vertex {
        Vertex::new(0)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match &self.kind {
            Kind::Finite(d) => v.lane == 0 && v.index >= 0 && (v.index as usize) < d.labels.len(),
            Kind::Preset(p) => match p {
                Preset::RayOut | Preset::RayIn | Preset::Zigzag => v.lane == 0 && v.index >= 0,
                Preset::Line => v.lane == 0,
                Preset::Ladder => v.lane <= 1 && v.index >= 0,
            },
        }
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!("{v:?} is not a vertex of {}", self.describe())))
        }
    }

    pub fn vertex_label(&self, v: Vertex) -> String {
        match &self.kind {
            Kind::Finite(d) => d.labels.get(v.index as usize).cloned().unwrap_or_else(|| format!("?{}", v.index)),
            Kind::Preset(Preset::Ladder) => format!("{}{}", if v.lane == 0 { 'a' } else { 'b' }, v.index),
            Kind::Preset(_) => v.index.to_string(),
        }
    }

    /// Inverse of [`Quiver::vertex_label`].
    pub fn vertex(&self, label: &str) -> Option<Vertex> {
        let v = match &self.kind {
            Kind::Finite(d) => Vertex::new(d.labels.iter().position(|l| l == label)? as i64),
            Kind::Preset(Preset::Ladder) => {
                let lane = match label.chars().next()? {
                    'a' => 0,
                    'b' => 1,
                    _ => return None,
                };
                Vertex::on_lane(lane, label[1..].parse().ok()?)
            }
            Kind::Preset(_) => Vertex::new(label.parse().ok()?),
        };
        self.contains(v).then_some(v)
    }

    pub fn arrow_label(&self, a: Arrow) -> String {
        let base = if self.reversed { a.flipped() } else { a };
        match &self.kind {
            Kind::Finite(d) => {
                let l = d.arrow_labels.get(&base).cloned().unwrap_or_else(|| "?".into());
                if self.reversed {
                    format!("{l}*")
                } else {
                    l
                }
            }
            Kind::Preset(_) => format!("{}->{}", self.vertex_label(a.src), self.vertex_label(a.dst)),
        }
    }

    /// Finds an arrow by label, or a preset arrow written `"s->t"`.
    pub fn arrow(&self, label: &str) -> Option<Arrow> {
        match &self.kind {
            Kind::Finite(d) => {
                let (l, want_rev) = match label.strip_suffix('*') {
                    Some(l) => (l, true),
                    None => (label, false),
                };
                if want_rev != self.reversed {
                    return None;
                }
                let a = d.arrow_labels.iter().find(|(_, v)| v.as_str() == l).map(|(a, _)| *a)?;
                Some(if self.reversed { a.flipped() } else { a })
            }
            Kind::Preset(_) => {
                let (s, t) = label.split_once("->")?;
                let (s, t) = (self.vertex(s.trim())?, self.vertex(t.trim())?);
                self.out_arrows(s).into_iter().find(|a| a.dst == t)
            }
        }
    }

    fn base_out(&self, v: Vertex) -> Vec<Arrow> {
        if !self.contains(v) {
            return Vec::new();
        }
        let mk = |d: Vertex| Arrow::new(v, d, 0);
        match &self.kind {
            Kind::Finite(d) => d.out[v.index as usize].clone(),
            Kind::Preset(p) => match p {
                Preset::RayOut => vec![mk(Vertex::new(v.index + 1))],
                Preset::RayIn => {
                    if v.index > 0 {
                        vec![mk(Vertex::new(v.index - 1))]
                    } else {
                        vec![]
                    }
                }
                Preset::Line => vec![mk(Vertex::new(v.index - 1))],
                Preset::Zigzag => {
                    if v.index % 2 == 1 {
                        vec![mk(Vertex::new(v.index - 1)), mk(Vertex::new(v.index + 1))]
                    } else {
                        vec![]
                    }
                }
                Preset::Ladder => {
                    if v.lane == 0 {
                        let mut out = vec![];
                        if v.index > 0 {
                            out.push(mk(Vertex::on_lane(0, v.index - 1)));
                        }
                        out.push(mk(Vertex::on_lane(1, v.index)));
                        out
                    } else {
                        vec![mk(Vertex::on_lane(1, v.index + 1))]
                    }
                }
            },
        }
    }

    fn base_in(&self, v: Vertex) -> Vec<Arrow> {
        if !self.contains(v) {
            return Vec::new();
        }
        let mk = |s: Vertex| Arrow::new(s, v, 0);
        match &self.kind {
            Kind::Finite(d) => d.inc[v.index as usize].clone(),
            Kind::Preset(p) => match p {
                Preset::RayOut => {
                    if v.index > 0 {
                        vec![mk(Vertex::new(v.index - 1))]
                    } else {
                        vec![]
                    }
                }
                Preset::RayIn | Preset::Line => vec![mk(Vertex::new(v.index + 1))],
                Preset::Zigzag => {
                    if v.index % 2 == 0 {
                        let mut out = vec![];
                        if v.index > 0 {
                            out.push(mk(Vertex::new(v.index - 1)));
                        }
                        out.push(mk(Vertex::new(v.index + 1)));
                        out
                    } else {
                        vec![]
                    }
                }
                Preset::Ladder => {
                    if v.lane == 0 {
                        vec![mk(Vertex::on_lane(0, v.index + 1))]
                    } else {
                        let mut out = vec![mk(Vertex::on_lane(0, v.index))];
                        if v.index > 0 {
                            out.push(mk(Vertex::on_lane(1, v.index - 1)));
                        }
                        out.sort();
                        out
                    }
                }
            },
        }
    }

    /// Arrows starting at `v`, sorted.
    pub fn out_arrows(&self, v: Vertex) -> Vec<Arrow> {
        if self.reversed {
            let mut a: Vec<Arrow> = self.base_in(v).into_iter().map(Arrow::flipped).collect();
            a.sort();
            a
        } else {
            self.base_out(v)
        }
    }

    /// Arrows ending at `v`, sorted.
    pub fn in_arrows(&self, v: Vertex) -> Vec<Arrow> {
        if self.reversed {
            let mut a: Vec<Arrow> = self.base_out(v).into_iter().map(Arrow::flipped).collect();
            a.sort();
            a
        } else {
            self.base_in(v)
        }
    }

    /// Vertices joined to `v` by an arrow in either direction.
    pub fn neighbours(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> =
            self.out_arrows(v).iter().map(|a| a.dst).chain(self.in_arrows(v).iter().map(|a| a.src)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_source(&self, v: Vertex) -> bool {
        self.in_arrows(v).is_empty()
    }

    pub fn is_sink(&self, v: Vertex) -> bool {
        self.out_arrows(v).is_empty()
    }

    fn base_reaches(&self, u: Vertex, v: Vertex) -> bool {
        if !self.contains(u) || !self.contains(v) {
            return false;
        }
        match &self.kind {
            Kind::Finite(d) => d.reach[u.index as usize][v.index as usize],
            Kind::Preset(p) => match p {
                Preset::RayOut => u.index <= v.index,
                Preset::RayIn | Preset::Line => u.index >= v.index,
                Preset::Zigzag => u == v || (u.index % 2 == 1 && (u.index - v.index).abs() == 1),
                Preset::Ladder => match (u.lane, v.lane) {
                    (0, 0) => v.index <= u.index,
                    (0, _) => true,
                    (_, 0) => false,
                    _ => u.index <= v.index,
                },
            },
        }
    }

    /// Whether a path `u ⇝ v` exists (the trivial path counts).
    pub fn reaches(&self, u: Vertex, v: Vertex) -> bool {
        if self.reversed {
            self.base_reaches(v, u)
        } else {
            self.base_reaches(u, v)
        }
    }

    pub fn ray_info(&self) -> RayInfo {
        let base = match &self.kind {
            Kind::Finite(d) => RayInfo { left_infinite: false, right_infinite: false, path_bound: Some(d.max_paths) },
            Kind::Preset(p) => match p {
                Preset::RayOut => RayInfo { left_infinite: false, right_infinite: true, path_bound: Some(1) },
                Preset::RayIn => RayInfo { left_infinite: true, right_infinite: false, path_bound: Some(1) },
                Preset::Line => RayInfo { left_infinite: true, right_infinite: true, path_bound: Some(1) },
                Preset::Zigzag => RayInfo { left_infinite: false, right_infinite: false, path_bound: Some(1) },
                Preset::Ladder => RayInfo { left_infinite: true, right_infinite: true, path_bound: None },
            },
        };
        if self.reversed {
            RayInfo { left_infinite: base.right_infinite, right_infinite: base.left_infinite, ..base }
        } else {
            base
        }
    }

    /// Default hop budget for path enumeration between `x` and `y`.
    fn hop_budget(&self, x: Vertex, y: Vertex) -> usize {
        match &self.kind {
            Kind::Finite(d) => d.labels.len() + 1,
            Kind::Preset(_) => 10 * ((x.index - y.index).unsigned_abs() as usize + x.index.unsigned_abs() as usize + y.index.unsigned_abs() as usize + 2),
        }
    }

    /// All paths `x ⇝ y` in lexicographic order (by arrows).
    pub fn paths_between(&self, x: Vertex, y: Vertex) -> Result<Arc<Vec<Path>>> {
        if let Some(p) = self.paths.lock().get(&(x, y)) {
            return Ok(p.clone());
        }
        let p = Arc::new(self.paths_between_with_budget(x, y, self.hop_budget(x, y))?);
        self.paths.lock().insert((x, y), p.clone());
        Ok(p)
    }

    /// Path enumeration that gives up once a path would exceed `hops` arrows.
    pub fn paths_between_with_budget(&self, x: Vertex, y: Vertex, hops: usize) -> Result<Vec<Path>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let mut out = Vec::new();
        if !self.reaches(x, y) {
            return Ok(out);
        }
        let mut current: Vec<Arrow> = Vec::new();
        self.dfs_paths(x, y, hops, &mut current, &mut out, x)?;
        out.sort();
        Ok(out)
    }

    fn dfs_paths(
        &self,
        at: Vertex,
        target: Vertex,
        hops: usize,
        current: &mut Vec<Arrow>,
        out: &mut Vec<Path>,
        start: Vertex,
    ) -> Result<()> {
        if at == target {
            out.push(Path::from_parts(start, current.clone()));
            return Ok(());
        }
        if current.len() >= hops {
            return Err(Error::IntervalFiniteness(format!(
                "more than {hops} arrows between {} and {}",
                self.vertex_label(start),
                self.vertex_label(target)
            )));
        }
        for a in self.out_arrows(at) {
            if self.reaches(a.dst, target) {
                current.push(a);
                self.dfs_paths(a.dst, target, hops, current, out, start)?;
                current.pop();
            }
        }
        Ok(())
    }

    /// Parses a path given as a start vertex label and a list of arrow labels.
    pub fn parse_path(&self, start: &str, arrows: &[&str]) -> Result<Path> {
        let s = self.vertex(start).ok_or_else(|| Error::Malformed(format!("unknown vertex '{start}'")))?;
        let arrows = arrows
            .iter()
            .map(|l| self.arrow(l).ok_or_else(|| Error::Malformed(format!("unknown arrow '{l}'"))))
            .collect::<Result<Vec<_>>>()?;
        Path::new(s, arrows)
    }

    pub fn path_label(&self, p: &Path) -> String {
        if p.arrows().is_empty() {
            format!("e_{}", self.vertex_label(p.start()))
        } else {
            p.arrows().iter().map(|a| self.arrow_label(*a)).collect::<Vec<_>>().join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_arrows_and_reachability() {
        let q = Quiver::preset(Preset::Ladder);
        let a1 = Vertex::on_lane(0, 1);
        let b2 = Vertex::on_lane(1, 2);
        assert_eq!(q.out_arrows(a1).len(), 2);
        assert!(q.reaches(a1, b2));
        assert!(!q.reaches(b2, a1));
        // a1 -> a0 -> b0 -> b1 -> b2 and a1 -> b1 -> b2
        assert_eq!(q.paths_between(a1, b2).unwrap().len(), 2);
        assert_eq!(q.vertex_label(b2), "b2");
        assert_eq!(q.vertex("a1"), Some(a1));
    }

    #[test]
    fn zigzag_orientation() {
        let q = Quiver::preset(Preset::Zigzag);
        assert!(q.is_sink(Vertex::new(0)));
        assert!(q.is_source(Vertex::new(1)));
        assert_eq!(q.paths_between(Vertex::new(3), Vertex::new(4)).unwrap().len(), 1);
        assert!(q.paths_between(Vertex::new(1), Vertex::new(3)).unwrap().is_empty());
    }

    #[test]
    fn opposite_swaps_orientation() {
        let q = Quiver::preset(Preset::RayIn);
        let op = q.opposite();
        assert!(op.reaches(Vertex::new(0), Vertex::new(3)));
        assert!(!op.reaches(Vertex::new(3), Vertex::new(0)));
        assert!(op.ray_info().right_infinite);
        assert!(!op.ray_info().left_infinite);
    }

    #[test]
    fn cycles_are_rejected() {
        let r = Quiver::finite(&["x", "y"], &[("x", "y", "a"), ("y", "x", "b")]);
        assert!(matches!(r, Err(Error::IntervalFiniteness(_))));
    }

    #[test]
    fn hop_budget_is_enforced() {
        let q = Quiver::preset(Preset::Line);
        let r = q.paths_between_with_budget(Vertex::new(10), Vertex::new(0), 5);
        assert!(matches!(r, Err(Error::IntervalFiniteness(_))));
    }

    #[test]
    fn out_of_range_vertices() {
        let q = Quiver::preset(Preset::RayOut);
        assert!(q.paths_between(Vertex::new(-1), Vertex::new(2)).is_err());
        assert!(q.vertex("-1").is_none());
    }
}
