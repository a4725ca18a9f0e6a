//! Representations given by finite data (constructor trees) and their
//! pointwise evaluation.

mod eval;
mod morphism;
mod pathmatrix;
mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;
use crate::quiver::{window, Arrow, Quiver, Vertex, VertexSet};
use crate::Budget;

pub(crate) use eval::Aux;
pub use eval::VertexSpace;
pub use morphism::Morphism;
pub use pathmatrix::{PathComb, PathMatrix, Side};
pub use solve::{hom_on_vertices, HomSolution};

/// Explicit finite-dimensional data.
#[derive(Clone, PartialEq, Eq)]
pub struct ExplicitData<F> {
    pub dims: BTreeMap<Vertex, usize>,
    pub labels: BTreeMap<Vertex, Vec<String>>,
    pub maps: BTreeMap<Arrow, Mat<F>>,
}

/// Gluing data: maps `quot(x) → sub(y)` along finitely many arrows `x → y`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Cocycle<F> {
    pub entries: BTreeMap<Arrow, Mat<F>>,
}

impl<F: Field> Cocycle<F> {
    pub fn new() -> Self {
        Cocycle { entries: BTreeMap::new() }
    }

    pub fn with(mut self, a: Arrow, m: Mat<F>) -> Self {
        self.entries.insert(a, m);
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, m) in &other.entries {
            let v = match out.entries.remove(a) {
                Some(x) => x.add(m),
                None => m.clone(),
            };
            out.entries.insert(*a, v);
        }
        out.entries.retain(|_, m| !m.is_zero());
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut entries: BTreeMap<Arrow, Mat<F>> = self.entries.iter().map(|(a, m)| (*a, m.scale(c))).collect();
        entries.retain(|_, m| !m.is_zero());
        Cocycle { entries }
    }

    /// Arrows carrying a nonzero entry.
    pub fn support(&self) -> Vec<Arrow> {
        self.entries.iter().filter(|(_, m)| !m.is_zero()).map(|(a, _)| *a).collect()
    }
}

impl<F: Field> fmt::Debug for Cocycle<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cocycle({:?})", self.entries)
    }
}

/// Constructor tree of a representation.
#[derive(Clone)]
pub enum RepNode<F: Field> {
    Zero,
    Explicit(Arc<ExplicitData<F>>),
    Proj(Vertex),
    Inj(Vertex),
    Simple(Vertex),
    /// One-dimensional on a vertex set, identity along arrows inside it.
    Thin(VertexSet),
    CokerProj(PathMatrix<F>),
    KerInj(PathMatrix<F>),
    Glue { sub: Rep<F>, quot: Rep<F>, cocycle: Cocycle<F> },
    DirectSum(Vec<Rep<F>>),
    /// Pointwise dual of a representation of the opposite quiver.
    Dual(Rep<F>),
    Restrict(Rep<F>, VertexSet),
    Kernel(Morphism<F>),
    Cokernel(Morphism<F>),
    Image(Morphism<F>),
}

pub(crate) struct RepInner<F: Field> {
    pub(crate) quiver: Arc<Quiver>,
    pub(crate) node: RepNode<F>,
    pub(crate) spaces: Mutex<BTreeMap<Vertex, Arc<VertexSpace<F>>>>,
    pub(crate) arrows: Mutex<BTreeMap<Arrow, Arc<Mat<F>>>>,
    pub(crate) finite_support: OnceLock<Option<BTreeSet<Vertex>>>,
    pub(crate) memo: Mutex<BTreeMap<&'static str, Arc<dyn std::any::Any + Send + Sync>>>,
}

/// A representation: shared, immutable, with internally synchronised
/// evaluation caches.
pub struct Rep<F: Field>(pub(crate) Arc<RepInner<F>>);

impl<F: Field> Clone for Rep<F> {
    fn clone(&self) -> Self {
        Rep(self.0.clone())
    }
}

impl<F: Field> fmt::Debug for Rep<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl<F: Field> Rep<F> {
    pub(crate) fn from_node(quiver: Arc<Quiver>, node: RepNode<F>) -> Self {
        Rep(Arc::new(RepInner {
            quiver,
            node,
            spaces: Mutex::new(BTreeMap::new()),
            arrows: Mutex::new(BTreeMap::new()),
            finite_support: OnceLock::new(),
            memo: Mutex::new(BTreeMap::new()),
        }))
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.0.quiver
    }

    pub fn node(&self) -> &RepNode<F> {
        &self.0.node
    }

    /// Same object (pointer identity).
    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn memo_get<T: Clone + Send + Sync + 'static>(&self, key: &'static str) -> Option<T> {
        self.0.memo.lock().get(key).and_then(|v| v.downcast_ref::<T>().cloned())
    }

    pub(crate) fn memo_set<T: Clone + Send + Sync + 'static>(&self, key: &'static str, value: T) {
        self.0.memo.lock().insert(key, Arc::new(value));
    }

    pub fn zero(q: &Arc<Quiver>) -> Self {
        Self::from_node(q.clone(), RepNode::Zero)
    }

    /// The indecomposable projective `P_a`, with `P_a(x)` spanned by paths `a ⇝ x`.
    pub fn projective(q: &Arc<Quiver>, a: Vertex) -> Result<Self> {
        q.check_vertex(a)?;
        Ok(Self::from_node(q.clone(), RepNode::Proj(a)))
    }

    /// The indecomposable injective `I_a`, with `I_a(x)` spanned by paths `x ⇝ a`.
    pub fn injective(q: &Arc<Quiver>, a: Vertex) -> Result<Self> {
        q.check_vertex(a)?;
        Ok(Self::from_node(q.clone(), RepNode::Inj(a)))
    }

    pub fn simple(q: &Arc<Quiver>, a: Vertex) -> Result<Self> {
        q.check_vertex(a)?;
        Ok(Self::from_node(q.clone(), RepNode::Simple(a)))
    }

    /// One-dimensional at every vertex of `s`, identity maps inside `s`.
    pub fn thin(q: &Arc<Quiver>, s: VertexSet) -> Self {
        Self::from_node(q.clone(), RepNode::Thin(s))
    }

    /// Explicit finite-dimensional representation. Arrows not listed act by
    /// zero; every listed map must have shape `dim(dst) × dim(src)`.
    pub fn explicit(
        q: &Arc<Quiver>,
        dims: BTreeMap<Vertex, usize>,
        maps: BTreeMap<Arrow, Mat<F>>,
    ) -> Result<Self> {
        Self::explicit_labeled(q, dims, BTreeMap::new(), maps)
    }

    pub fn explicit_labeled(
        q: &Arc<Quiver>,
        mut dims: BTreeMap<Vertex, usize>,
        labels: BTreeMap<Vertex, Vec<String>>,
        maps: BTreeMap<Arrow, Mat<F>>,
    ) -> Result<Self> {
        dims.retain(|_, d| *d > 0);
        for &v in dims.keys() {
            q.check_vertex(v)?;
        }
        for (v, l) in &labels {
            if l.len() != dims.get(v).copied().unwrap_or(0) {
                return Err(Error::DimensionMismatch(format!("wrong number of basis labels at {}", q.vertex_label(*v))));
            }
        }
        let mut kept = BTreeMap::new();
        for (a, m) in maps {
            if !q.out_arrows(a.src).contains(&a) {
                return Err(Error::Malformed(format!("{a:?} is not an arrow of {}", q.describe())));
            }
            let (ds, dt) = (dims.get(&a.src).copied().unwrap_or(0), dims.get(&a.dst).copied().unwrap_or(0));
            if m.shape() != (dt, ds) {
                return Err(Error::DimensionMismatch(format!(
                    "map on {} has shape {:?}, expected ({dt}, {ds})",
                    q.arrow_label(a),
                    m.shape()
                )));
            }
            if !m.is_zero() {
                kept.insert(a, m);
            }
        }
        Ok(Self::from_node(q.clone(), RepNode::Explicit(Arc::new(ExplicitData { dims, labels, maps: kept }))))
    }

    /// Cokernel of a path matrix between sums of projectives.
    pub fn coker_proj(q: &Arc<Quiver>, pm: PathMatrix<F>) -> Result<Self> {
        if pm.side() != Side::Projective {
            return Err(Error::Malformed("coker_proj needs a projective path matrix".into()));
        }
        for v in pm.domain().iter().chain(pm.codomain()) {
            q.check_vertex(*v)?;
        }
        Ok(Self::from_node(q.clone(), RepNode::CokerProj(pm)))
    }

    /// Kernel of a path matrix between sums of injectives.
    pub fn ker_inj(q: &Arc<Quiver>, pm: PathMatrix<F>) -> Result<Self> {
        if pm.side() != Side::Injective {
            return Err(Error::Malformed("ker_inj needs an injective path matrix".into()));
        }
        for v in pm.domain().iter().chain(pm.codomain()) {
            q.check_vertex(*v)?;
        }
        Ok(Self::from_node(q.clone(), RepNode::KerInj(pm)))
    }

    /// The extension of `quot` by `sub` glued along `cocycle`; arrow maps are
    /// `[[sub(α), c_α], [0, quot(α)]]`.
    pub fn glue(sub: &Rep<F>, quot: &Rep<F>, cocycle: Cocycle<F>) -> Result<Self> {
        if !sub.quiver().same_as(quot.quiver()) {
            return Err(Error::Malformed("glued objects live on different quivers".into()));
        }
        let q = sub.quiver();
        for (a, m) in &cocycle.entries {
            if !q.out_arrows(a.src).contains(a) {
                return Err(Error::Malformed(format!("{a:?} is not an arrow")));
            }
            let want = (sub.dim(a.dst)?, quot.dim(a.src)?);
            if m.shape() != want {
                return Err(Error::DimensionMismatch(format!(
                    "cocycle entry on {} has shape {:?}, expected {:?}",
                    q.arrow_label(*a),
                    m.shape(),
                    want
                )));
            }
        }
        let mut cocycle = cocycle;
        cocycle.entries.retain(|_, m| !m.is_zero());
        Ok(Self::from_node(q.clone(), RepNode::Glue { sub: sub.clone(), quot: quot.clone(), cocycle }))
    }

    pub fn direct_sum(q: &Arc<Quiver>, parts: Vec<Rep<F>>) -> Result<Self> {
        if parts.iter().any(|p| !p.quiver().same_as(q)) {
            return Err(Error::Malformed("summands live on different quivers".into()));
        }
        Ok(match parts.len() {
            1 => parts.into_iter().next().unwrap(),
            _ => Self::from_node(q.clone(), RepNode::DirectSum(parts)),
        })
    }

    /// Pointwise dual, a representation of the opposite quiver.
    pub fn dual(&self) -> Self {
        if let RepNode::Dual(inner) = self.node() {
            return inner.clone();
        }
        if let Some(w) = self.memo_get::<std::sync::Weak<RepInner<F>>>("dual") {
            if let Some(inner) = w.upgrade() {
                return Rep(inner);
            }
        }
        let d = Self::from_node(self.quiver().opposite(), RepNode::Dual(self.clone()));
        self.memo_set("dual", Arc::downgrade(&d.0));
        d
    }

    /// `M_Ω`: equal to `M` on `Ω`, zero elsewhere.
    pub fn restrict(&self, omega: VertexSet) -> Self {
        match omega {
            VertexSet::All => self.clone(),
            VertexSet::Empty => Self::zero(self.quiver()),
            omega => Self::from_node(self.quiver().clone(), RepNode::Restrict(self.clone(), omega)),
        }
    }

    pub fn kernel(f: &Morphism<F>) -> Self {
        Self::from_node(f.domain().quiver().clone(), RepNode::Kernel(f.clone()))
    }

    pub fn cokernel(f: &Morphism<F>) -> Self {
        Self::from_node(f.domain().quiver().clone(), RepNode::Cokernel(f.clone()))
    }

    pub fn image(f: &Morphism<F>) -> Self {
        Self::from_node(f.domain().quiver().clone(), RepNode::Image(f.clone()))
    }

    pub fn is_zero_node(&self) -> bool {
        matches!(self.node(), RepNode::Zero)
    }

    /// Parts of a direct sum node (the object itself otherwise).
    pub fn summands(&self) -> Vec<Rep<F>> {
        match self.node() {
            RepNode::DirectSum(p) => p.clone(),
            _ => vec![self.clone()],
        }
    }

    /// Short human-readable description of the constructor tree.
    pub fn describe(&self) -> String {
        let q = self.quiver();
        let l = |v: &Vertex| q.vertex_label(*v);
        match self.node() {
            RepNode::Zero => "0".into(),
            RepNode::Explicit(d) => {
                let dims: Vec<String> = d.dims.iter().map(|(v, n)| format!("{}:{n}", l(v))).collect();
                format!("explicit[{}]", dims.join(","))
            }
            RepNode::Proj(a) => format!("P_{}", l(a)),
            RepNode::Inj(a) => format!("I_{}", l(a)),
            RepNode::Simple(a) => format!("S_{}", l(a)),
            RepNode::Thin(s) => format!("thin{}", s.describe(Some(q))),
            RepNode::CokerProj(pm) => format!(
                "coker({} -> {})",
                sum_label("P", pm.domain(), q),
                sum_label("P", pm.codomain(), q)
            ),
            RepNode::KerInj(pm) => format!(
                "ker({} -> {})",
                sum_label("I", pm.domain(), q),
                sum_label("I", pm.codomain(), q)
            ),
            RepNode::Glue { sub, quot, cocycle } => {
                format!("glue({}, {}, {} arrows)", sub.describe(), quot.describe(), cocycle.entries.len())
            }
            RepNode::DirectSum(p) => p.iter().map(|x| x.describe()).collect::<Vec<_>>().join(" ⊕ "),
            RepNode::Dual(m) => format!("D({})", m.describe()),
            RepNode::Restrict(m, s) => format!("{}|{}", m.describe(), s.describe(Some(q))),
            RepNode::Kernel(f) => format!("ker({} -> {})", f.domain().describe(), f.codomain().describe()),
            RepNode::Cokernel(f) => format!("coker({} -> {})", f.domain().describe(), f.codomain().describe()),
            RepNode::Image(f) => format!("im({} -> {})", f.domain().describe(), f.codomain().describe()),
        }
    }

    /// Over-approximation of the support, read off the constructor tree.
    pub fn support_descriptor(&self) -> VertexSet {
        match self.node() {
            RepNode::Zero => VertexSet::Empty,
            RepNode::Explicit(d) => VertexSet::finite(d.dims.keys().copied()),
            RepNode::Proj(a) => VertexSet::successors_of([*a]),
            RepNode::Inj(a) => VertexSet::predecessors_of([*a]),
            RepNode::Simple(a) => VertexSet::finite([*a]),
            RepNode::Thin(s) => s.clone(),
            RepNode::CokerProj(pm) => VertexSet::successors_of(pm.codomain().iter().copied()),
            RepNode::KerInj(pm) => VertexSet::predecessors_of(pm.domain().iter().copied()),
            RepNode::Glue { sub, quot, .. } => sub.support_descriptor().union(&quot.support_descriptor()),
            RepNode::DirectSum(p) => p.iter().fold(VertexSet::Empty, |acc, x| acc.union(&x.support_descriptor())),
            RepNode::Dual(m) => m.support_descriptor().opposite(),
            RepNode::Restrict(m, s) => m.support_descriptor().intersection(s),
            RepNode::Kernel(f) => f.domain().support_descriptor(),
            RepNode::Cokernel(f) | RepNode::Image(f) => f.codomain().support_descriptor(),
        }
    }

    /// Vertices where the finite data of the constructor tree lives.
    pub fn anchors(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        self.collect_anchors(&mut out);
        out.retain(|&v| self.quiver().contains(v));
        out.sort();
        out.dedup();
        if out.is_empty() {
            out.push(self.quiver().origin());
        }
        out
    }

    fn collect_anchors(&self, out: &mut Vec<Vertex>) {
        match self.node() {
            RepNode::Zero => {}
            RepNode::Explicit(d) => out.extend(d.dims.keys().copied()),
            RepNode::Proj(a) | RepNode::Inj(a) | RepNode::Simple(a) => out.push(*a),
            RepNode::Thin(s) => out.extend(s.anchors()),
            RepNode::CokerProj(pm) | RepNode::KerInj(pm) => {
                out.extend(pm.domain().iter().chain(pm.codomain()).copied())
            }
            RepNode::Glue { sub, quot, cocycle } => {
                sub.collect_anchors(out);
                quot.collect_anchors(out);
                for a in cocycle.entries.keys() {
                    out.push(a.src);
                    out.push(a.dst);
                }
            }
            RepNode::DirectSum(p) => p.iter().for_each(|x| x.collect_anchors(out)),
            RepNode::Dual(m) => m.collect_anchors(out),
            RepNode::Restrict(m, s) => {
                m.collect_anchors(out);
                out.extend(s.anchors());
            }
            RepNode::Kernel(f) | RepNode::Cokernel(f) | RepNode::Image(f) => {
                f.domain().collect_anchors(out);
                f.codomain().collect_anchors(out);
                out.extend(f.anchor_hint());
            }
        }
    }

    /// Dimension at `v` (zero outside the quiver).
    pub fn dim(&self, v: Vertex) -> Result<usize> {
        if !self.quiver().contains(v) {
            return Ok(0);
        }
        Ok(self.space(v)?.dim)
    }

    /// Dimension vector on a list of vertices.
    pub fn dims_on<'a>(&self, vs: impl IntoIterator<Item = &'a Vertex>) -> Result<Vec<usize>> {
        vs.into_iter().map(|&v| self.dim(v)).collect()
    }

    /// Exact support inside a finite vertex set.
    pub fn support_in(&self, vs: &BTreeSet<Vertex>) -> Result<BTreeSet<Vertex>> {
        let mut out = BTreeSet::new();
        for &v in vs {
            if self.dim(v)? > 0 {
                out.insert(v);
            }
        }
        Ok(out)
    }

    /// Support on a window together with the symbolic tail.
    pub fn support(&self, w: &crate::quiver::Window) -> Result<(BTreeSet<Vertex>, VertexSet)> {
        Ok((self.support_in(&w.vertices)?, self.support_descriptor()))
    }

    /// The exact support when it is finite, certified by two windows.
    pub fn finite_support(&self, budget: &Budget) -> Result<Option<BTreeSet<Vertex>>> {
        if let Some(s) = self.0.finite_support.get() {
            return Ok(s.clone());
        }
        let s = self.compute_finite_support(budget)?;
        let _ = self.0.finite_support.set(s.clone());
        Ok(s)
    }

    fn compute_finite_support(&self, budget: &Budget) -> Result<Option<BTreeSet<Vertex>>> {
        let q = self.quiver().clone();
        if let Some(all) = q.vertices() {
            return Ok(Some(self.support_in(&all.into_iter().collect())?));
        }
        match self.support_descriptor() {
            VertexSet::Empty => return Ok(Some(BTreeSet::new())),
            VertexSet::Finite(s) => return Ok(Some(self.support_in(&s)?)),
            _ => {}
        }
        let anchors = self.anchors();
        let small = window(&q, &anchors, budget.radius);
        let large = window(&q, &anchors, budget.radius + budget.step);
        let s_small = self.support_in(&small.vertices)?;
        let boundary = large.boundary(&q);
        let mut s_large = BTreeSet::new();
        for &v in &large.vertices {
            if s_small.contains(&v) || (!small.vertices.contains(&v) && self.dim(v)? > 0) {
                s_large.insert(v);
            }
        }
        if s_small == s_large && s_large.iter().all(|v| !boundary.contains(v)) {
            Ok(Some(s_small))
        } else {
            Ok(None)
        }
    }

    /// True if the support is certified finite.
    pub fn is_finite_dimensional(&self, budget: &Budget) -> Result<bool> {
        Ok(self.finite_support(budget)?.is_some())
    }

    /// Total dimension when finite.
    pub fn total_dim(&self, budget: &Budget) -> Result<Option<usize>> {
        match self.finite_support(budget)? {
            None => Ok(None),
            Some(s) => Ok(Some(s.iter().map(|&v| self.dim(v)).sum::<Result<usize>>()?)),
        }
    }

    /// Linear map `M(p)` along a path.
    pub fn path_map(&self, p: &crate::quiver::Path) -> Result<Mat<F>> {
        let mut m = Mat::identity(self.dim(p.start())?);
        for a in p.arrows() {
            m = self.arrow_map(*a)?.mul(&m);
        }
        Ok(m)
    }
}

fn sum_label(letter: &str, vs: &[Vertex], q: &Quiver) -> String {
    if vs.is_empty() {
        return "0".into();
    }
    vs.iter().map(|v| format!("{letter}_{}", q.vertex_label(*v))).collect::<Vec<_>>().join("+")
}
