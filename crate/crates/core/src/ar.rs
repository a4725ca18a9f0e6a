//! Auslander-Reiten translates, almost split sequences, knitting and the
//! shape of the resulting components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::{decompose, end_algebra, ext_space, hom_space, iso_test, IsoWitness, Ses};
use crate::linalg::{Mat, Subspace};
use crate::present::{fc_search, fp_search};
use crate::quiver::{window, Path, Quiver, Vertex};
use crate::rep::{Cocycle, Morphism, PathComb, PathMatrix, Rep, Side};
use crate::Budget;

pub use crate::present::{min_inj_copresentation, min_proj_presentation, Presentation};

/// `τX`: the kernel of the Nakayama image of the minimal projective
/// presentation of `X`.
///
/// ```
/// use arknit_core::{ar::tau, hom::iso_test, quiver::Quiver, rep::Rep, Budget, Rat};
/// let q = Quiver::linear_a(3);
/// let s2 = Rep::<Rat>::simple(&q, q.vertex("2").unwrap()).unwrap();
/// let s3 = Rep::<Rat>::simple(&q, q.vertex("3").unwrap()).unwrap();
/// let t = tau(&s2, &Budget::default()).unwrap();
/// assert!(iso_test(&t, &s3, &Budget::default()).unwrap().is_iso());
/// ```
pub fn tau<F: Field>(x: &Rep<F>, budget: &Budget) -> Result<Rep<F>> {
    let p = min_proj_presentation(x, budget)?;
    if p.first().is_empty() {
        return Err(Error::TauUndefined(format!("{} is projective", x.describe())));
    }
    Rep::ker_inj(x.quiver(), p.pm.nakayama())
}

/// `τ⁻W`: the cokernel of the Nakayama image of the minimal injective
/// copresentation of `W`.
pub fn tau_inv<F: Field>(w: &Rep<F>, budget: &Budget) -> Result<Rep<F>> {
    let p = min_inj_copresentation(w, budget)?;
    if p.first().is_empty() {
        return Err(Error::TauUndefined(format!("{} is injective", w.describe())));
    }
    Rep::coker_proj(w.quiver(), p.pm.nakayama())
}

/// `ν` on path matrices: the same entries read on the other side.
pub fn nakayama<F: Field>(pm: &PathMatrix<F>) -> PathMatrix<F> {
    pm.nakayama()
}

/// Pulls a cocycle `X → Y[1]` back along an endomorphism of `X`.
fn pull_back<F: Field>(c: &Cocycle<F>, f: &Morphism<F>) -> Result<Cocycle<F>> {
    let mut out = Cocycle::new();
    for (a, m) in &c.entries {
        out = out.with(*a, m.mul(&f.at(a.src)?));
    }
    Ok(out)
}

/// Coefficients of a class generating the socle of `Ext(X, τX)` as a
/// module over `End(X)`.
fn socle_class<F: Field>(x: &Rep<F>, e: &crate::hom::ExtSpace<F>, budget: &Budget) -> Result<Vec<F>> {
    let n = e.dim();
    let end = end_algebra(x, budget)?;
    if !end.is_local {
        return Err(Error::NotIndecomposable(x.describe()));
    }
    let mut blocks = Vec::new();
    for r in &end.radical {
        let f = end.hom.element(r)?;
        let cols = e.classes.iter().map(|c| e.coords(&pull_back(c, &f)?)).collect::<Result<Vec<_>>>()?;
        blocks.push(Mat::from_columns(n, &cols));
    }
    let stacked = if blocks.is_empty() { Mat::zeros(0, n) } else { Mat::vstack(&blocks.iter().collect::<Vec<_>>(), n) };
    let k = stacked.kernel();
    if k.cols() == 0 {
        return Err(Error::Uncertified(format!("Ext({}, tau) has no socle class", x.describe())));
    }
    Ok(k.column(0))
}

/// `0 → τX → E → X → 0` for an indecomposable, finitely presented,
/// non-projective `X`.
///
/// ```
/// use arknit_core::{ar::almost_split_sequence, quiver::Quiver, rep::Rep, Budget, Rat};
/// let q = Quiver::linear_a(3);
/// let s2 = Rep::<Rat>::simple(&q, q.vertex("2").unwrap()).unwrap();
/// let s = almost_split_sequence(&s2, &Budget::default()).unwrap();
/// let dims: Vec<usize> = ["1", "2", "3"].iter().map(|l| s.middle.dim(q.vertex(l).unwrap()).unwrap()).collect();
/// assert_eq!(dims, vec![0, 1, 1]);
/// ```
pub fn almost_split_sequence<F: Field>(x: &Rep<F>, budget: &Budget) -> Result<Ses<F>> {
    let t = tau(x, budget)?;
    let e = ext_space(x, &t, budget)?;
    if e.dim() == 0 {
        return Err(Error::Uncertified(format!("Ext({}, tau) vanishes", x.describe())));
    }
    let coeffs = socle_class(x, &e, budget)?;
    e.ses(&coeffs)
}

/// `0 → W → E → τ⁻W → 0` for an indecomposable, finitely co-presented,
/// non-injective `W`.
pub fn almost_split_sequence_from<F: Field>(w: &Rep<F>, budget: &Budget) -> Result<Ses<F>> {
    let x = tau_inv(w, budget)?;
    let e = ext_space(&x, w, budget)?;
    if e.dim() == 0 {
        return Err(Error::Uncertified(format!("Ext(tau^-1, {}) vanishes", w.describe())));
    }
    let coeffs = socle_class(&x, &e, budget)?;
    e.ses(&coeffs)
}

/// The single top of a projective indecomposable, read off its presentation.
fn projective_vertex<F: Field>(p: &Rep<F>, budget: &Budget) -> Result<Option<Vertex>> {
    Ok(match fp_search(p, budget)? {
        Some(pr) if pr.first().is_empty() && pr.zeroth().len() == 1 => Some(pr.zeroth()[0]),
        _ => None,
    })
}

fn injective_vertex<F: Field>(i: &Rep<F>, budget: &Budget) -> Result<Option<Vertex>> {
    Ok(match fc_search(i, budget)? {
        Some(pr) if pr.first().is_empty() && pr.zeroth().len() == 1 => Some(pr.zeroth()[0]),
        _ => None,
    })
}

fn arrow_matrix<F: Field>(side: Side, a: Vertex, others: &[(Vertex, Path)]) -> Result<PathMatrix<F>> {
    let vs: Vec<Vertex> = others.iter().map(|o| o.0).collect();
    let row: Vec<PathComb<F>> = others.iter().map(|o| PathComb::path(o.1.clone())).collect();
    match side {
        Side::Projective => PathMatrix::new(side, vs, vec![a], vec![row]),
        Side::Injective => PathMatrix::new(side, vec![a], vs, row.into_iter().map(|e| vec![e]).collect()),
    }
}

/// The inclusion `rad P_a = ⊕_{a→b} P_b → P`.
///
/// ```
/// use arknit_core::{ar::minimal_right_almost_split_into, quiver::Quiver, rep::Rep, Budget, Rat};
/// let q = Quiver::kronecker();
/// let p1 = Rep::<Rat>::projective(&q, q.vertex("1").unwrap()).unwrap();
/// let f = minimal_right_almost_split_into(&p1, &Budget::default()).unwrap();
/// assert_eq!(f.domain().dim(q.vertex("2").unwrap()).unwrap(), 2);
/// ```
pub fn minimal_right_almost_split_into<F: Field>(p: &Rep<F>, budget: &Budget) -> Result<Morphism<F>> {
    let q = p.quiver();
    let a = projective_vertex(p, budget)?
        .ok_or_else(|| Error::Malformed(format!("{} is not an indecomposable projective", p.describe())))?;
    let outs: Vec<(Vertex, Path)> = q.out_arrows(a).into_iter().map(|x| (x.dst, Path::arrow(x))).collect();
    let f = Morphism::from_path_matrix(q, &arrow_matrix(Side::Projective, a, &outs)?)?;
    let pa = Rep::projective(q, a)?;
    let iso = match iso_test(&pa, p, budget)? {
        IsoWitness::Isomorphic { forward, .. } => forward,
        _ => return Err(Error::Uncertified(format!("{} not identified with P_{}", p.describe(), q.vertex_label(a)))),
    };
    let f = Morphism::combination(f.domain(), &pa, vec![(F::one(), f.clone())])?;
    f.then(&iso)
}

/// The projection `I → I_a / soc = ⊕_{b→a} I_b`.
pub fn minimal_left_almost_split_from<F: Field>(i: &Rep<F>, budget: &Budget) -> Result<Morphism<F>> {
    let q = i.quiver();
    let a = injective_vertex(i, budget)?
        .ok_or_else(|| Error::Malformed(format!("{} is not an indecomposable injective", i.describe())))?;
    let ins: Vec<(Vertex, Path)> = q.in_arrows(a).into_iter().map(|x| (x.src, Path::arrow(x))).collect();
    let f = Morphism::from_path_matrix(q, &arrow_matrix(Side::Injective, a, &ins)?)?;
    let ia = Rep::injective(q, a)?;
    let iso = match iso_test(i, &ia, budget)? {
        IsoWitness::Isomorphic { forward, .. } => forward,
        _ => return Err(Error::Uncertified(format!("{} not identified with I_{}", i.describe(), q.vertex_label(a)))),
    };
    let f = Morphism::combination(&ia, f.codomain(), vec![(F::one(), f.clone())])?;
    iso.then(&f)
}

/// One named check of [`verify_almost_split`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Outcome of [`verify_almost_split`], one entry per check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlmostSplitReport {
    pub checks: Vec<Check>,
    pub battery: Vec<String>,
}

impl AlmostSplitReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    fn push(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check { name: name.into(), passed });
    }
}

/// Radical morphisms `L → X` between indecomposables, as a list spanning
/// them.
fn radical_maps<F: Field>(l: &Rep<F>, x: &Rep<F>, budget: &Budget) -> Result<Vec<Morphism<F>>> {
    let h = hom_space(l, x, budget)?;
    if h.dim() == 0 {
        return Ok(Vec::new());
    }
    match iso_test(l, x, budget)? {
        IsoWitness::Isomorphic { forward, .. } => {
            let end = end_algebra(x, budget)?;
            end.radical.iter().map(|r| forward.then(&end.hom.element(r)?)).collect()
        }
        _ => Ok(h.basis.clone()),
    }
}

fn spans_all<F: Field>(
    h: &crate::hom::HomSpace<F>,
    through: &[Morphism<F>],
    wanted: &[Morphism<F>],
) -> Result<bool> {
    let n = h.dim();
    let cols = through.iter().map(|g| h.coords(g)).collect::<Result<Vec<_>>>()?;
    let span = Subspace::span(&Mat::from_columns(n, &cols));
    for w in wanted {
        if !span.contains(&h.coords(w)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that `s` is almost split against the given battery: exactness,
/// non-splitness, indecomposable ends, lifting of radical maps into the
/// quotient and factoring of radical maps out of the sub.
pub fn verify_almost_split<F: Field>(s: &Ses<F>, battery: &[Rep<F>], budget: &Budget) -> Result<AlmostSplitReport> {
    let mut report = AlmostSplitReport::default();
    let q = s.middle.quiver();
    let verts = window(q, &s.anchors(), budget.radius).vertices;
    report.push("exact", s.is_exact_on(&verts)?);
    report.push("non-split", !s.is_split(budget)?);
    report.push("sub indecomposable", end_algebra(&s.sub, budget)?.is_local);
    report.push("quotient indecomposable", end_algebra(&s.quot, budget)?.is_local);
    for l in battery {
        report.battery.push(l.describe());
        let into = radical_maps(l, &s.quot, budget)?;
        let lifts = if into.is_empty() {
            true
        } else {
            let target = hom_space(l, &s.quot, budget)?;
            let through = hom_space(l, &s.middle, budget)?
                .basis
                .iter()
                .map(|h| h.then(&s.projection))
                .collect::<Result<Vec<_>>>()?;
            spans_all(&target, &through, &into)?
        };
        report.push(format!("radical maps {} -> quotient lift", l.describe()), lifts);
        let out = radical_maps(&s.sub, l, budget)?;
        let factors = if out.is_empty() {
            true
        } else {
            let target = hom_space(&s.sub, l, budget)?;
            let through = hom_space(&s.middle, l, budget)?
                .basis
                .iter()
                .map(|h| s.inclusion.then(h))
                .collect::<Result<Vec<_>>>()?;
            spans_all(&target, &through, &out)?
        };
        report.push(format!("radical maps sub -> {} factor", l.describe()), factors);
    }
    Ok(report)
}

/// Whether the category has left and/or right almost split sequences,
/// decided by the infinite paths of the quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArKind {
    Left,
    Right,
    Both,
    Neither,
}

impl ArKind {
    pub fn name(self) -> &'static str {
        match self {
            ArKind::Left => "left",
            ArKind::Right => "right",
            ArKind::Both => "both",
            ArKind::Neither => "neither",
        }
    }
}

/// Left exactly when there is no right-infinite path, right exactly when
/// there is no left-infinite path.
///
/// ```
/// use arknit_core::{ar::{ar_category_kind, ArKind}, quiver::{Preset, Quiver}};
/// assert_eq!(ar_category_kind(&Quiver::preset(Preset::Zigzag)), ArKind::Both);
/// assert_eq!(ar_category_kind(&Quiver::preset(Preset::Line)), ArKind::Neither);
/// ```
pub fn ar_category_kind(q: &Quiver) -> ArKind {
    let info = q.ray_info();
    match (info.right_infinite, info.left_infinite) {
        (false, false) => ArKind::Both,
        (false, true) => ArKind::Left,
        (true, false) => ArKind::Right,
        (true, true) => ArKind::Neither,
    }
}

/// A non-projective finitely presented indecomposable whose translate is
/// infinite dimensional.
pub fn is_pseudo_projective<F: Field>(x: &Rep<F>, budget: &Budget) -> Result<bool> {
    match tau(x, budget) {
        Ok(t) => Ok(t.finite_support(budget)?.is_none()),
        Err(Error::TauUndefined(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Replaces `m` by an explicit, presented or copresented form when one is
/// available.
pub fn canonical_form<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Rep<F>> {
    let q = m.quiver();
    if let Some(s) = m.finite_support(budget)? {
        let dims: BTreeMap<Vertex, usize> = s.iter().map(|&v| Ok((v, m.dim(v)?))).collect::<Result<_>>()?;
        let mut maps = BTreeMap::new();
        for &v in &s {
            for a in q.out_arrows(v) {
                if s.contains(&a.dst) {
                    maps.insert(a, m.arrow_map(a)?);
                }
            }
        }
        return Rep::explicit(q, dims, maps);
    }
    if let Some(p) = fp_search(m, budget)? {
        return p.presented();
    }
    if let Some(p) = fc_search(m, budget)? {
        return p.presented();
    }
    Ok(m.clone())
}

/// Membership data of a component vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VertexClass {
    pub fp: bool,
    pub fc: bool,
    pub projective: bool,
    pub injective: bool,
}

impl VertexClass {
    pub fn fd(&self) -> bool {
        self.fp && self.fc
    }

    pub fn doubly_infinite(&self) -> bool {
        !self.fp && !self.fc
    }

    pub fn tag(&self) -> &'static str {
        match (self.projective, self.injective, self.fp, self.fc) {
            (true, true, _, _) => "PI",
            (true, false, _, _) => "P",
            (false, true, _, _) => "I",
            (_, _, true, true) => "fd",
            (_, _, true, false) => "fp",
            (_, _, false, true) => "fc",
            _ => "dinf",
        }
    }
}

#[derive(Clone)]
pub struct ArVertex<F: Field> {
    pub rep: Rep<F>,
    pub class: VertexClass,
    pub depth: usize,
    /// Not expanded within the budget.
    pub open: bool,
    /// Nonzero dimensions on the snapshot window.
    pub snapshot: String,
}

impl<F: Field> fmt::Debug for ArVertex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] depth {}", self.snapshot, self.class.tag(), self.depth)
    }
}

/// An irreducible map `src → dst` with its valuation: the multiplicity of
/// `src` in the middle term ending at `dst`, and of `dst` in the middle term
/// starting at `src`, when computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArArrow {
    pub src: usize,
    pub dst: usize,
    pub into_dst: Option<usize>,
    pub out_of_src: Option<usize>,
}

impl ArArrow {
    pub fn multiplicity(&self) -> usize {
        self.into_dst.or(self.out_of_src).unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        match (self.into_dst, self.out_of_src) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnitOptions {
    pub depth: usize,
    /// Run [`verify_almost_split`] on every sequence used.
    pub verify: bool,
    pub budget: Budget,
}

impl Default for KnitOptions {
    fn default() -> Self {
        KnitOptions { depth: 6, verify: true, budget: Budget::default() }
    }
}

/// A piece of the Auslander-Reiten quiver around a seed.
#[derive(Clone)]
pub struct ArComponent<F: Field> {
    pub quiver: Arc<Quiver>,
    pub vertices: Vec<ArVertex<F>>,
    pub arrows: Vec<ArArrow>,
    /// `X ↦ τX` on vertex indices.
    pub tau: BTreeMap<usize, usize>,
    /// Verification reports keyed by the quotient vertex of the sequence.
    pub reports: BTreeMap<usize, AlmostSplitReport>,
    pub options: KnitOptions,
    snapshot_window: BTreeSet<Vertex>,
}

impl<F: Field> fmt::Debug for ArComponent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArComponent")
            .field("vertices", &self.vertices)
            .field("arrows", &self.arrows)
            .field("tau", &self.tau)
            .finish()
    }
}

impl<F: Field> ArComponent<F> {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn arrow(&self, src: usize, dst: usize) -> Option<&ArArrow> {
        self.arrows.iter().find(|a| a.src == src && a.dst == dst)
    }

    /// Index of the vertex isomorphic to `m`.
    pub fn find(&self, m: &Rep<F>) -> Result<Option<usize>> {
        let fp = fingerprint(m, &self.snapshot_window)?;
        for (i, v) in self.vertices.iter().enumerate() {
            if fingerprint(&v.rep, &self.snapshot_window)? == fp && iso_test(&v.rep, m, &self.options.budget)?.is_iso() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Every arrow starts at an fc vertex or ends at an fp vertex.
    pub fn taxonomy_holds(&self) -> bool {
        self.arrows.iter().all(|a| self.vertices[a.src].class.fc || self.vertices[a.dst].class.fp)
    }

    pub fn valuations_symmetric(&self) -> bool {
        self.arrows.iter().all(ArArrow::is_symmetric)
    }

    pub fn all_reports_pass(&self) -> bool {
        self.reports.values().all(AlmostSplitReport::passed)
    }

    fn add_vertex(&mut self, rep: Rep<F>, depth: usize) -> Result<usize> {
        let budget = self.options.budget;
        let rep = canonical_form(&rep, &budget)?;
        let pres = fp_search(&rep, &budget)?;
        let copres = fc_search(&rep, &budget)?;
        let class = VertexClass {
            fp: pres.is_some(),
            fc: copres.is_some(),
            projective: pres.as_ref().is_some_and(|p| p.first().is_empty()),
            injective: copres.as_ref().is_some_and(|p| p.first().is_empty()),
        };
        let snapshot = snapshot(&rep, &self.snapshot_window)?;
        self.vertices.push(ArVertex { rep, class, depth, open: true, snapshot });
        Ok(self.vertices.len() - 1)
    }

    fn record(&mut self, src: usize, dst: usize, into_dst: Option<usize>, out_of_src: Option<usize>) {
        if let Some(a) = self.arrows.iter_mut().find(|a| a.src == src && a.dst == dst) {
            a.into_dst = a.into_dst.or(into_dst);
            a.out_of_src = a.out_of_src.or(out_of_src);
        } else {
            self.arrows.push(ArArrow { src, dst, into_dst, out_of_src });
        }
    }
}

fn fingerprint<F: Field>(m: &Rep<F>, w: &BTreeSet<Vertex>) -> Result<Vec<usize>> {
    m.dims_on(w)
}

/// Nonzero dimensions on `w` as `label:dim`, with `...` when the support
/// reaches the edge of the window.
pub fn snapshot<F: Field>(m: &Rep<F>, w: &BTreeSet<Vertex>) -> Result<String> {
    let q = m.quiver();
    let mut parts = Vec::new();
    let mut edge = false;
    for &v in w {
        let d = m.dim(v)?;
        if d > 0 {
            parts.push(format!("{}:{}", q.vertex_label(v), d));
            edge |= q.neighbours(v).iter().any(|x| !w.contains(x));
        }
    }
    if edge {
        parts.push("...".into());
    }
    Ok(parts.join(" "))
}

enum Found<F: Field> {
    Summands(Vec<(Rep<F>, usize)>),
    None,
}

fn middle_summands<F: Field>(s: &Ses<F>, budget: &Budget) -> Result<Found<F>> {
    Ok(Found::Summands(decompose(&s.middle, budget)?.into_iter().map(|d| (d.rep, d.multiplicity)).collect()))
}

fn battery_for<F: Field>(c: &ArComponent<F>, s: &Ses<F>) -> Result<Vec<Rep<F>>> {
    let q = &c.quiver;
    let mut out: Vec<Rep<F>> = c.vertices.iter().map(|v| v.rep.clone()).collect();
    let anchors = s.anchors();
    let verts: Vec<Vertex> = match q.vertices() {
        Some(all) => all,
        None => window(q, &anchors, 1).vertices.into_iter().collect(),
    };
    for v in verts {
        out.push(Rep::projective(q, v)?);
        out.push(Rep::injective(q, v)?);
    }
    Ok(out)
}

/// Knits the component of `seed` breadth-first by arrow distance, applying
/// `τ`, `τ⁻`, radicals of projectives and socle quotients of injectives.
///
/// ```
/// use arknit_core::{ar::{knit, KnitOptions}, quiver::Quiver, rep::Rep, Rat};
/// let q = Quiver::linear_a(3);
/// let p3 = Rep::<Rat>::projective(&q, q.vertex("3").unwrap()).unwrap();
/// let c = knit(&p3, &KnitOptions::default()).unwrap();
/// assert_eq!(c.len(), 6);
/// assert!(c.all_reports_pass() && c.taxonomy_holds());
/// ```
pub fn knit<F: Field>(seed: &Rep<F>, opts: &KnitOptions) -> Result<ArComponent<F>> {
    let q = seed.quiver().clone();
    let budget = opts.budget;
    let snapshot_window = match q.vertices() {
        Some(all) => all.into_iter().collect(),
        None => window(&q, &seed.anchors(), budget.radius + 2 * opts.depth).vertices,
    };
    let mut c = ArComponent {
        quiver: q.clone(),
        vertices: Vec::new(),
        arrows: Vec::new(),
        tau: BTreeMap::new(),
        reports: BTreeMap::new(),
        options: *opts,
        snapshot_window,
    };
    c.add_vertex(seed.clone(), 0)?;
    let mut done: BTreeSet<usize> = BTreeSet::new();
    loop {
        let next = (0..c.vertices.len())
            .filter(|i| !done.contains(i) && c.vertices[*i].depth < opts.depth)
            .min_by_key(|&i| (c.vertices[i].depth, i));
        let Some(i) = next else { break };
        done.insert(i);
        expand(&mut c, i)?;
    }
    Ok(c)
}

/// Finds or adds `m` at `depth`, keeping the smaller depth on a hit.
/// Returns `None` when `m` is new and lies beyond the budget.
fn locate<F: Field>(c: &mut ArComponent<F>, m: &Rep<F>, depth: usize) -> Result<Option<usize>> {
    if let Some(j) = c.find(m)? {
        if depth < c.vertices[j].depth {
            c.vertices[j].depth = depth;
        }
        return Ok(Some(j));
    }
    if depth > c.options.depth {
        return Ok(None);
    }
    Ok(Some(c.add_vertex(m.clone(), depth)?))
}

fn expand<F: Field>(c: &mut ArComponent<F>, i: usize) -> Result<()> {
    let budget = c.options.budget;
    let x = c.vertices[i].rep.clone();
    let class = c.vertices[i].class;
    let d = c.vertices[i].depth;
    let q = c.quiver.clone();
    let mut complete = true;
    let incoming: Found<F> = if class.projective {
        let a = projective_vertex(&x, &budget)?.ok_or_else(|| Error::Uncertified("projective without a top".into()))?;
        let mut count: BTreeMap<Vertex, usize> = BTreeMap::new();
        for arr in q.out_arrows(a) {
            *count.entry(arr.dst).or_default() += 1;
        }
        Found::Summands(count.into_iter().map(|(b, m)| Ok((Rep::projective(&q, b)?, m))).collect::<Result<_>>()?)
    } else if class.fp {
        let s = almost_split_sequence(&x, &budget)?;
        if c.options.verify {
            let battery = battery_for(c, &s)?;
            let report = verify_almost_split(&s, &battery, &budget)?;
            c.reports.insert(i, report);
        }
        match locate(c, &s.sub, d + 2)? {
            Some(t) => {
                c.tau.insert(i, t);
            }
            None => complete = false,
        }
        middle_summands(&s, &budget)?
    } else {
        Found::None
    };
    if let Found::Summands(list) = incoming {
        for (y, m) in list {
            match locate(c, &y, d + 1)? {
                Some(j) => c.record(j, i, Some(m), None),
                None => complete = false,
            }
        }
    }
    let outgoing: Found<F> = if class.injective {
        let a = injective_vertex(&x, &budget)?.ok_or_else(|| Error::Uncertified("injective without a socle".into()))?;
        let mut count: BTreeMap<Vertex, usize> = BTreeMap::new();
        for arr in q.in_arrows(a) {
            *count.entry(arr.src).or_default() += 1;
        }
        Found::Summands(count.into_iter().map(|(b, m)| Ok((Rep::injective(&q, b)?, m))).collect::<Result<_>>()?)
    } else if class.fc {
        let s = almost_split_sequence_from(&x, &budget)?;
        let target = locate(c, &s.quot, d + 2)?;
        match target {
            Some(t) => {
                c.tau.insert(t, i);
                if c.options.verify && !c.reports.contains_key(&t) {
                    let battery = battery_for(c, &s)?;
                    let report = verify_almost_split(&s, &battery, &budget)?;
                    c.reports.insert(t, report);
                }
            }
            None => complete = false,
        }
        middle_summands(&s, &budget)?
    } else {
        Found::None
    };
    if let Found::Summands(list) = outgoing {
        for (y, m) in list {
            match locate(c, &y, d + 1)? {
                Some(j) => c.record(i, j, None, Some(m)),
                None => complete = false,
            }
        }
    }
    c.vertices[i].open = !complete;
    Ok(())
}

/// Shape tags for a knitted component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    /// Contains every indecomposable projective and injective it meets and
    /// closes up within the budget.
    Finite,
    PreprojectiveNQop,
    PreinjectiveNminusQop,
    ZAinfinity,
    NAinfinity,
    NminusAinfinity,
    Wing,
    TrivialSingleton,
    Inconclusive,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Finite => "Finite",
            Shape::PreprojectiveNQop => "Preprojective-NQop",
            Shape::PreinjectiveNminusQop => "Preinjective-NminusQop",
            Shape::ZAinfinity => "ZAinfinity",
            Shape::NAinfinity => "NAinfinity",
            Shape::NminusAinfinity => "NminusAinfinity",
            Shape::Wing => "Wing",
            Shape::TrivialSingleton => "TrivialSingleton",
            Shape::Inconclusive => "Inconclusive",
        }
    }
}

/// A shape tag together with the facts it was read from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeHypothesis {
    pub shape: Shape,
    pub certificate: String,
}

/// Reads a shape off the payload classes and the τ-orbits of a component.
pub fn classify_component<F: Field>(c: &ArComponent<F>) -> ShapeHypothesis {
    let n = c.vertices.len();
    let proj = c.vertices.iter().filter(|v| v.class.projective).count();
    let inj = c.vertices.iter().filter(|v| v.class.injective).count();
    let dinf = c.vertices.iter().filter(|v| v.class.doubly_infinite()).count();
    let plus_only = c.vertices.iter().filter(|v| v.class.fp && !v.class.fc).count();
    let minus_only = c.vertices.iter().filter(|v| v.class.fc && !v.class.fp).count();
    let open = c.vertices.iter().filter(|v| v.open).count();
    let certificate = format!(
        "{n} vertices, {} arrows, {proj} projective, {inj} injective, {plus_only} fp-only, {minus_only} fc-only, {dinf} doubly-infinite, {open} open, depth {}",
        c.arrows.len(),
        c.options.depth
    );
    let shape = if n == 1 && c.arrows.is_empty() && open == 0 {
        Shape::TrivialSingleton
    } else if dinf > 0 {
        Shape::Wing
    } else if open == 0 && proj > 0 && inj > 0 {
        Shape::Finite
    } else if proj > 0 && inj == 0 {
        Shape::PreprojectiveNQop
    } else if inj > 0 && proj == 0 {
        Shape::PreinjectiveNminusQop
    } else if proj == 0 && inj == 0 && plus_only > 0 && minus_only == 0 {
        Shape::NminusAinfinity
    } else if proj == 0 && inj == 0 && minus_only > 0 && plus_only == 0 {
        Shape::NAinfinity
    } else if proj == 0 && inj == 0 && plus_only == 0 && minus_only == 0 && tau_orbits_stable(c) {
        Shape::ZAinfinity
    } else {
        Shape::Inconclusive
    };
    ShapeHypothesis { shape, certificate }
}

/// Every expanded vertex with a translate keeps it inside the component.
fn tau_orbits_stable<F: Field>(c: &ArComponent<F>) -> bool {
    c.vertices.iter().enumerate().all(|(i, v)| v.open || !v.class.fp || c.tau.contains_key(&i))
}
