//! Membership in the classes fd, fp, fc and rrep, together with the
//! structural splittings of finite extensions.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::{is_finite_extension, FiniteExtension, Ses};
use crate::present::{fc_search, fp_search, Presentation};
use crate::quiver::{window, Arrow, Quiver, Vertex, VertexSet};
use crate::rep::{Morphism, Rep, RepNode};
use crate::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Fd,
    Fp,
    Fc,
    Rrep,
    NotInRrep,
    Unknown,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Fd => "fd",
            Verdict::Fp => "fp",
            Verdict::Fc => "fc",
            Verdict::Rrep => "rrep",
            Verdict::NotInRrep => "notInRrep",
            Verdict::Unknown => "unknown",
        }
    }

    /// Fd, fp and fc objects all lie in rrep.
    pub fn in_rrep(self) -> bool {
        matches!(self, Verdict::Fd | Verdict::Fp | Verdict::Fc | Verdict::Rrep)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Data backing a membership verdict.
#[derive(Clone)]
pub enum Evidence<F: Field> {
    FiniteSupport(BTreeSet<Vertex>),
    Presentation(Presentation<F>),
    Copresentation(Presentation<F>),
    StandardExt(StandardExt<F>),
    /// The quiver has no infinite path, so fp and fc objects are finite
    /// dimensional, while the support keeps producing sources and sinks.
    /// `growth` lists `(radius, sources, sinks)`.
    NoInfinitePaths { sources: Vec<Vertex>, sinks: Vec<Vertex>, growth: Vec<(usize, usize, usize)> },
    /// A sequence with finitely presented sub and finitely co-presented
    /// quotient whose gluing arrows keep growing with the window.
    InfiniteGluing { omega: VertexSet, ses: Ses<F>, report: FiniteExtension },
    Inconclusive { radius: usize },
}

impl<F: Field> fmt::Debug for Evidence<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::FiniteSupport(s) => write!(f, "finite support of {} vertices", s.len()),
            Evidence::Presentation(p) => write!(f, "presentation {:?} -> {:?}", p.first(), p.zeroth()),
            Evidence::Copresentation(p) => write!(f, "copresentation {:?} -> {:?}", p.zeroth(), p.first()),
            Evidence::StandardExt(s) => write!(f, "standard extension over {:?}", s.omega),
            Evidence::NoInfinitePaths { growth, .. } => write!(f, "sources and sinks without bound: {growth:?}"),
            Evidence::InfiniteGluing { report, .. } => write!(f, "gluing arrows without bound: {:?}", report.growth),
            Evidence::Inconclusive { radius } => write!(f, "inconclusive up to radius {radius}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Membership<F: Field> {
    pub verdict: Verdict,
    pub evidence: Evidence<F>,
    pub budget: Budget,
}

impl<F: Field> Membership<F> {
    /// One line describing the verdict and what it rests on.
    pub fn summary(&self, q: &Quiver) -> String {
        let label = |vs: &[Vertex]| vs.iter().map(|&v| q.vertex_label(v)).collect::<Vec<_>>().join(",");
        let detail = match &self.evidence {
            Evidence::FiniteSupport(s) => format!("support {{{}}}", label(&s.iter().copied().collect::<Vec<_>>())),
            Evidence::Presentation(p) => format!("P1 at [{}], P0 at [{}]", label(p.first()), label(p.zeroth())),
            Evidence::Copresentation(p) => format!("I0 at [{}], I1 at [{}]", label(p.zeroth()), label(p.first())),
            Evidence::StandardExt(s) => {
                format!("sub on successors of [{}], {} gluing arrows", label(&s.omega.anchors()), s.report.witness.len())
            }
            Evidence::NoInfinitePaths { sources, sinks, .. } => {
                format!("infinitely many sources [{}, ...] and sinks [{}, ...]", label(sources), label(sinks))
            }
            Evidence::InfiniteGluing { report, .. } => {
                let arrows: Vec<String> = report.witness.iter().map(|a| q.arrow_label(*a)).collect();
                format!("nonzero gluing arrows [{}, ...] growing {:?}", arrows.join(","), report.growth)
            }
            Evidence::Inconclusive { radius } => format!("inconclusive up to radius {radius}"),
        };
        format!("{}: {}", self.verdict, detail)
    }

    /// Re-checks the evidence by evaluating `m` on two windows of different
    /// radii.
    pub fn recheck(&self, m: &Rep<F>) -> Result<bool> {
        let q = m.quiver();
        let anchors = m.anchors();
        let (r0, r1) = (self.budget.radius, self.budget.radius + 2 * self.budget.step);
        let windows = [window(q, &anchors, r0).vertices, window(q, &anchors, r1).vertices];
        match &self.evidence {
            Evidence::FiniteSupport(s) => {
                for w in &windows {
                    if &m.support_in(w)? != s || s.iter().any(|v| !w.contains(v)) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Evidence::Presentation(p) | Evidence::Copresentation(p) => {
                let presented = p.presented()?;
                for w in &windows {
                    if presented.dims_on(w)? != m.dims_on(w)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Evidence::StandardExt(s) => {
                for w in &windows {
                    if !s.ses.is_exact_on(w)? {
                        return Ok(false);
                    }
                }
                Ok(is_finite_extension(&s.ses, &self.budget)?.finite)
            }
            Evidence::NoInfinitePaths { .. } => {
                let info = q.ray_info();
                if info.left_infinite || info.right_infinite {
                    return Ok(false);
                }
                let a = support_ends(m, &windows[0])?;
                let b = support_ends(m, &windows[1])?;
                Ok(b.0.len() > a.0.len() && b.1.len() > a.1.len())
            }
            Evidence::InfiniteGluing { ses, .. } => {
                for w in &windows {
                    if !ses.is_exact_on(w)? {
                        return Ok(false);
                    }
                }
                let wide = Budget::new(r0, r1 - r0, r1);
                let r = is_finite_extension(ses, &wide)?;
                Ok(!r.finite && r.growth.windows(2).all(|g| g[1].1 > g[0].1))
            }
            Evidence::Inconclusive { .. } => Ok(self.verdict == Verdict::Unknown),
        }
    }
}

/// Sources and sinks of the support of `m` lying strictly inside `verts`.
fn support_ends<F: Field>(m: &Rep<F>, verts: &BTreeSet<Vertex>) -> Result<(Vec<Vertex>, Vec<Vertex>)> {
    let q = m.quiver();
    let supp = m.support_in(verts)?;
    let interior = |v: Vertex| q.neighbours(v).iter().all(|w| verts.contains(w));
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    for &v in &supp {
        if !interior(v) {
            continue;
        }
        if q.in_arrows(v).iter().all(|a| !supp.contains(&a.src)) {
            sources.push(v);
        }
        if q.out_arrows(v).iter().all(|a| !supp.contains(&a.dst)) {
            sinks.push(v);
        }
    }
    Ok((sources, sinks))
}

/// The canonical sequence `0 → M_Ω → M → M/M_Ω → 0` for a successor-closed
/// `Ω` with finitely presented sub and finitely co-presented quotient.
#[derive(Clone)]
pub struct StandardExt<F: Field> {
    pub omega: VertexSet,
    pub ses: Ses<F>,
    pub sub_presentation: Option<Presentation<F>>,
    pub quot_copresentation: Option<Presentation<F>>,
    pub report: FiniteExtension,
}

impl<F: Field> fmt::Debug for StandardExt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StandardExt {{ omega: {:?}, ses: {:?} }}", self.omega, self.ses)
    }
}

enum Candidate<F: Field> {
    Finite(StandardExt<F>),
    Infinite(StandardExt<F>),
    Neither,
}

fn try_split<F: Field>(m: &Rep<F>, omega: VertexSet, budget: &Budget) -> Result<Candidate<F>> {
    let sub = m.restrict(omega.clone());
    let quot = m.restrict(omega.complement());
    let Some(sub_p) = fp_search(&sub, budget)? else {
        return Ok(Candidate::Neither);
    };
    let Some(quot_p) = fc_search(&quot, budget)? else {
        return Ok(Candidate::Neither);
    };
    let ses = Ses::from_maps(Morphism::restrict_in(&sub)?, Morphism::restrict_out(&quot)?)?;
    let report = is_finite_extension(&ses, budget)?;
    let s = StandardExt { omega, ses, sub_presentation: Some(sub_p), quot_copresentation: Some(quot_p), report };
    Ok(judge(s))
}

/// Finite when the counts stabilise; infinite only when they grew across at
/// least two windows.
fn judge<F: Field>(s: StandardExt<F>) -> Candidate<F> {
    let g = &s.report.growth;
    if s.report.finite {
        Candidate::Finite(s)
    } else if g.len() >= 2 && g.windows(2).all(|w| w[1].1 > w[0].1) {
        Candidate::Infinite(s)
    } else {
        Candidate::Neither
    }
}

fn glued_split<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Option<Candidate<F>>> {
    let RepNode::Glue { sub, quot, .. } = m.node() else {
        return Ok(None);
    };
    let Some(sp) = fp_search(sub, budget)? else {
        return Ok(None);
    };
    let Some(qp) = fc_search(quot, budget)? else {
        return Ok(None);
    };
    let ses = Ses::from_glued(m)?;
    let report = is_finite_extension(&ses, budget)?;
    let s = StandardExt {
        omega: sub.support_descriptor(),
        ses,
        sub_presentation: Some(sp),
        quot_copresentation: Some(qp),
        report,
    };
    Ok(Some(judge(s)))
}

/// Successor closures `Succ(t)` tried as `Ω`, nearest to the anchors first.
fn closure_candidates<F: Field>(m: &Rep<F>) -> Result<Vec<VertexSet>> {
    let q = m.quiver();
    let anchors = m.anchors();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in 0..=2 {
        for v in window(q, &anchors, r).vertices {
            if seen.insert(v) && m.dim(v)? > 0 {
                out.push(VertexSet::successors_of([v]));
            }
        }
    }
    Ok(out)
}

fn search_standard_ext<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<(Option<StandardExt<F>>, Option<StandardExt<F>>)> {
    let mut infinite = None;
    match glued_split(m, budget)? {
        Some(Candidate::Finite(s)) => return Ok((Some(s), None)),
        Some(Candidate::Infinite(s)) => infinite = Some(s),
        _ => {}
    }
    for omega in closure_candidates(m)? {
        match try_split(m, omega, budget)? {
            Candidate::Finite(s) => return Ok((Some(s), infinite)),
            Candidate::Infinite(s) => {
                if infinite.is_none() {
                    infinite = Some(s);
                }
            }
            Candidate::Neither => {}
        }
    }
    Ok((None, infinite))
}

/// Writes `m` as a finite extension of a finitely co-presented quotient by a
/// finitely presented sub supported on a successor-closed `Ω`.
///
/// ```
/// use arknit_core::{quiver::{Preset, Quiver, Vertex, VertexSet}, rep::Rep, structure::standard_ext, Budget, Rat};
/// let q = Quiver::preset(Preset::Line);
/// let m = Rep::<Rat>::thin(&q, VertexSet::All);
/// let s = standard_ext(&m, &Budget::default()).unwrap();
/// assert!(s.omega.contains(&q, Vertex::new(0)) && !s.omega.contains(&q, Vertex::new(1)));
/// ```
pub fn standard_ext<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<StandardExt<F>> {
    let q = m.quiver();
    if let Some(p) = fp_search(m, budget)? {
        let zero = Rep::zero(q);
        let ses = Ses::from_maps(Morphism::identity(m), Morphism::zero(m, &zero)?)?;
        let report = is_finite_extension(&ses, budget)?;
        return Ok(StandardExt { omega: m.support_descriptor(), ses, sub_presentation: Some(p), quot_copresentation: None, report });
    }
    if let Some(p) = fc_search(m, budget)? {
        let zero = Rep::zero(q);
        let ses = Ses::from_maps(Morphism::zero(&zero, m)?, Morphism::identity(m))?;
        let report = is_finite_extension(&ses, budget)?;
        return Ok(StandardExt { omega: VertexSet::Empty, ses, sub_presentation: None, quot_copresentation: Some(p), report });
    }
    match search_standard_ext(m, budget)? {
        (Some(s), _) => Ok(s),
        _ => Err(Error::BudgetExhausted(format!(
            "no standard extension of {} found up to radius {}",
            m.describe(),
            budget.max_radius
        ))),
    }
}

/// Decides membership of `m` in fd, fp, fc or rrep, or finds a witness that
/// it lies outside rrep.
///
/// ```
/// use arknit_core::{quiver::{Preset, Quiver, VertexSet}, rep::Rep, structure::{classify_membership, Verdict}, Budget, Rat};
/// let q = Quiver::preset(Preset::Zigzag);
/// let m = Rep::<Rat>::thin(&q, VertexSet::All);
/// let c = classify_membership(&m, &Budget::default()).unwrap();
/// assert_eq!(c.verdict, Verdict::NotInRrep);
/// assert!(c.recheck(&m).unwrap());
/// ```
pub fn classify_membership<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Membership<F>> {
    let q = m.quiver();
    let done = |verdict, evidence| Ok(Membership { verdict, evidence, budget: *budget });
    if let Some(s) = m.finite_support(budget)? {
        return done(Verdict::Fd, Evidence::FiniteSupport(s));
    }
    if let Some(p) = fp_search(m, budget)? {
        return done(Verdict::Fp, Evidence::Presentation(p));
    }
    if let Some(p) = fc_search(m, budget)? {
        return done(Verdict::Fc, Evidence::Copresentation(p));
    }
    let info = q.ray_info();
    if !info.left_infinite && !info.right_infinite {
        let anchors = m.anchors();
        let mut growth = Vec::new();
        let mut last = (Vec::new(), Vec::new());
        for r in [budget.radius, budget.radius + budget.step] {
            let ends = support_ends(m, &window(q, &anchors, r).vertices)?;
            growth.push((r, ends.0.len(), ends.1.len()));
            last = ends;
        }
        if growth[1].1 > growth[0].1 && growth[1].2 > growth[0].2 {
            return done(Verdict::NotInRrep, Evidence::NoInfinitePaths { sources: last.0, sinks: last.1, growth });
        }
    }
    match search_standard_ext(m, budget)? {
        (Some(s), _) => done(Verdict::Rrep, Evidence::StandardExt(s)),
        (None, Some(s)) => done(Verdict::NotInRrep, Evidence::InfiniteGluing { omega: s.omega, ses: s.ses, report: s.report }),
        (None, None) => done(Verdict::Unknown, Evidence::Inconclusive { radius: budget.max_radius }),
    }
}

/// Kernel of a morphism between rrep objects, certified to lie in rrep.
pub fn kernel<F: Field>(f: &Morphism<F>, budget: &Budget) -> Result<Rep<F>> {
    certified(Rep::kernel(f), budget)
}

/// Cokernel of a morphism between rrep objects, certified to lie in rrep.
pub fn cokernel<F: Field>(f: &Morphism<F>, budget: &Budget) -> Result<Rep<F>> {
    certified(Rep::cokernel(f), budget)
}

fn certified<F: Field>(k: Rep<F>, budget: &Budget) -> Result<Rep<F>> {
    let c = classify_membership(&k, budget)?;
    if c.verdict.in_rrep() {
        Ok(k)
    } else {
        Err(Error::BudgetExhausted(format!(
            "{} not certified in rrep ({}); enlarge the window beyond radius {}",
            k.describe(),
            c.verdict,
            budget.max_radius
        )))
    }
}

/// Vertices of `supp(m)` lying on a path from a top of `m` to one of
/// `targets` or to a relation of the presentation. The set is finite and
/// predecessor-closed inside the support.
fn head_region<F: Field>(m: &Rep<F>, p: &Presentation<F>, targets: &[Vertex]) -> Result<BTreeSet<Vertex>> {
    let q = m.quiver();
    let mut ends: BTreeSet<Vertex> = p.zeroth().iter().chain(p.first()).copied().collect();
    ends.extend(targets.iter().copied().filter(|&t| q.contains(t)));
    let mut region = BTreeSet::new();
    for &c in p.zeroth() {
        for &t in &ends {
            for path in q.paths_between(c, t)?.iter() {
                region.insert(path.start());
                region.extend(path.arrows().iter().map(|a| a.dst));
            }
        }
    }
    let mut out = BTreeSet::new();
    for v in region {
        if m.dim(v)? > 0 {
            out.insert(v);
        }
    }
    Ok(out)
}

/// `0 → M_Ω → M → M/M_Ω → 0` with `M_Ω` projective and `M/M_Ω` finite
/// dimensional.
#[derive(Clone)]
pub struct TailSplit<F: Field> {
    pub omega: VertexSet,
    /// The finite complement of `Ω` inside the support.
    pub head_region: BTreeSet<Vertex>,
    pub tail: Rep<F>,
    pub head: Rep<F>,
    /// Tops of the tail: it is the sum of the `P_x` for these `x`.
    pub tail_tops: Vec<Vertex>,
}

impl<F: Field> fmt::Debug for TailSplit<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TailSplit {{ head_region: {:?}, tail_tops: {:?} }}", self.head_region, self.tail_tops)
    }
}

fn projective_tops<F: Field>(tail: &Rep<F>, budget: &Budget) -> Result<Vec<Vertex>> {
    if tail.finite_support(budget)?.is_some_and(|s| s.is_empty()) {
        return Ok(Vec::new());
    }
    match fp_search(tail, budget)? {
        Some(p) if p.first().is_empty() => Ok(p.zeroth().to_vec()),
        _ => Err(Error::Uncertified(format!("{} is not certified projective", tail.describe()))),
    }
}

fn split_off<F: Field>(m: &Rep<F>, region: BTreeSet<Vertex>, budget: &Budget) -> Result<TailSplit<F>> {
    let omega = m.support_descriptor().minus(&VertexSet::finite(region.iter().copied()));
    let tail = m.restrict(omega.clone());
    let head = m.restrict(VertexSet::finite(region.iter().copied()));
    let tail_tops = projective_tops(&tail, budget)?;
    Ok(TailSplit { omega, head_region: region, tail, head, tail_tops })
}

/// Splits a finitely presented `m` into a projective tail on a co-finite
/// successor-closed `Ω` and a nonzero finite dimensional head.
///
/// ```
/// use arknit_core::{quiver::{Preset, Quiver, Vertex}, rep::Rep, structure::tail_split, Budget, Rat};
/// let q = Quiver::preset(Preset::Line);
/// let p0 = Rep::<Rat>::projective(&q, Vertex::new(0)).unwrap();
/// let t = tail_split(&p0, &Budget::default()).unwrap();
/// assert_eq!(t.tail_tops, vec![Vertex::new(-1)]);
/// assert_eq!(t.head_region.len(), 1);
/// ```
pub fn tail_split<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<TailSplit<F>> {
    tail_split_towards(m, &[], budget)
}

/// Same as [`tail_split`], keeping the given vertices in the head.
pub fn tail_split_towards<F: Field>(m: &Rep<F>, keep: &[Vertex], budget: &Budget) -> Result<TailSplit<F>> {
    if let Some(s) = m.finite_support(budget)? {
        let tail = Rep::zero(m.quiver());
        return Ok(TailSplit { omega: VertexSet::Empty, head_region: s, tail, head: m.clone(), tail_tops: Vec::new() });
    }
    let p = fp_search(m, budget)?
        .ok_or_else(|| Error::BudgetExhausted(format!("{} is not certified finitely presented", m.describe())))?;
    split_off(m, head_region(m, &p, keep)?, budget)
}

impl<F: Field> TailSplit<F> {
    /// Moves the tops of the tail that are sources of `Ω` into the head:
    /// one co-finite successor-closed step further inside the support.
    pub fn shrink(&self, m: &Rep<F>, budget: &Budget) -> Result<TailSplit<F>> {
        let q = m.quiver();
        let mut region = self.head_region.clone();
        for &x in &self.tail_tops {
            let source = q.in_arrows(x).iter().all(|a| !self.omega.contains(q, a.src) || m.dim(a.src).unwrap_or(0) == 0);
            if source {
                region.insert(x);
            }
        }
        split_off(m, region, budget)
    }
}

/// `supp(M) = Σ_P ⊔ Ω ⊔ Σ_I` with `M_{Σ_P}` projective, `M_{Σ_I}` injective
/// and `Ω` finite.
#[derive(Clone)]
pub struct PfiDecomposition<F: Field> {
    pub sigma_p: VertexSet,
    pub sigma_i: VertexSet,
    pub omega_core: BTreeSet<Vertex>,
    pub proj_part: Rep<F>,
    pub core_part: Rep<F>,
    pub inj_part: Rep<F>,
    pub proj_tops: Vec<Vertex>,
    pub inj_socles: Vec<Vertex>,
}

impl<F: Field> fmt::Debug for PfiDecomposition<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Pfi {{ core: {:?}, proj_tops: {:?}, inj_socles: {:?} }}",
            self.omega_core, self.proj_tops, self.inj_socles
        )
    }
}

/// Splits `m` in rrep into a projective part, a finite core and an injective
/// part.
///
/// ```
/// use arknit_core::{quiver::{Preset, Quiver, Vertex, VertexSet}, rep::Rep, structure::pfi_decompose, Budget, Rat};
/// let q = Quiver::preset(Preset::Line);
/// let m = Rep::<Rat>::thin(&q, VertexSet::All);
/// let d = pfi_decompose(&m, &Budget::default()).unwrap();
/// assert_eq!(d.omega_core, [Vertex::new(0), Vertex::new(1)].into());
/// assert_eq!((d.proj_tops.clone(), d.inj_socles.clone()), (vec![Vertex::new(-1)], vec![Vertex::new(2)]));
/// ```
pub fn pfi_decompose<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<PfiDecomposition<F>> {
    let q = m.quiver();
    if let Some(s) = m.finite_support(budget)? {
        return Ok(PfiDecomposition {
            sigma_p: VertexSet::Empty,
            sigma_i: VertexSet::Empty,
            omega_core: s,
            proj_part: Rep::zero(q),
            core_part: m.clone(),
            inj_part: Rep::zero(q),
            proj_tops: Vec::new(),
            inj_socles: Vec::new(),
        });
    }
    let se = standard_ext(m, budget)?;
    let gluing = &se.report.witness;
    let to_sub: Vec<Vertex> = gluing.iter().map(|a| a.dst).collect();
    let from_quot: Vec<Vertex> = gluing.iter().map(|a| a.src).collect();
    let (sub_region, proj_tops) = match &se.sub_presentation {
        Some(_) if se.ses.sub.finite_support(budget)?.is_none() => {
            let t = tail_split_towards(&se.ses.sub, &to_sub, budget)?;
            (t.head_region, t.tail_tops)
        }
        _ => (se.ses.sub.finite_support(budget)?.unwrap_or_default(), Vec::new()),
    };
    let (quot_region, inj_socles) = match &se.quot_copresentation {
        Some(_) if se.ses.quot.finite_support(budget)?.is_none() => {
            let t = tail_split_towards(&se.ses.quot.dual(), &from_quot, budget)?;
            (t.head_region, t.tail_tops)
        }
        _ => (se.ses.quot.finite_support(budget)?.unwrap_or_default(), Vec::new()),
    };
    let core: BTreeSet<Vertex> = sub_region.union(&quot_region).copied().collect();
    let core_set = VertexSet::finite(core.iter().copied());
    let supp = m.support_descriptor();
    let sigma_p = if proj_tops.is_empty() { VertexSet::Empty } else { se.omega.intersection(&supp).minus(&core_set) };
    let sigma_i =
        if inj_socles.is_empty() { VertexSet::Empty } else { se.omega.complement().intersection(&supp).minus(&core_set) };
    Ok(PfiDecomposition {
        proj_part: m.restrict(sigma_p.clone()),
        inj_part: m.restrict(sigma_i.clone()),
        core_part: m.restrict(core_set),
        sigma_p,
        sigma_i,
        omega_core: core,
        proj_tops,
        inj_socles,
    })
}

impl<F: Field> PfiDecomposition<F> {
    /// Re-verifies the defining properties on a window of the given radius:
    /// the three parts cover `m`, the outer parts are projective and
    /// injective, and no supporting arrow runs from `Σ_I` to `Σ_P`.
    pub fn verify(&self, m: &Rep<F>, radius: usize, budget: &Budget) -> Result<bool> {
        let q = m.quiver();
        let verts = window(q, &m.anchors(), radius).vertices;
        for &v in &verts {
            if self.proj_part.dim(v)? + self.core_part.dim(v)? + self.inj_part.dim(v)? != m.dim(v)? {
                return Ok(false);
            }
            for a in q.out_arrows(v) {
                if self.sigma_i.contains(q, a.src) && self.sigma_p.contains(q, a.dst) && !m.arrow_map(a)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        if !self.proj_tops.is_empty() && projective_tops(&self.proj_part, budget)? != self.proj_tops {
            return Ok(false);
        }
        if !self.inj_socles.is_empty() && projective_tops(&self.inj_part.dual(), budget)? != self.inj_socles {
            return Ok(false);
        }
        Ok(!self.omega_core.is_empty())
    }

    /// Removes the tops of the projective part from `Σ_P`.
    pub fn shrink_projective(&self, m: &Rep<F>, budget: &Budget) -> Result<PfiDecomposition<F>> {
        let mut core = self.omega_core.clone();
        core.extend(self.proj_tops.iter().copied());
        let removed = VertexSet::finite(self.proj_tops.iter().copied());
        let sigma_p = self.sigma_p.minus(&removed);
        let proj_part = m.restrict(sigma_p.clone());
        let proj_tops = projective_tops(&proj_part, budget)?;
        Ok(PfiDecomposition {
            core_part: m.restrict(VertexSet::finite(core.iter().copied())),
            omega_core: core,
            sigma_p,
            proj_part,
            proj_tops,
            ..self.clone()
        })
    }

    /// Both the projective and the injective part are nonzero.
    pub fn is_doubly_infinite(&self) -> bool {
        !self.proj_tops.is_empty() && !self.inj_socles.is_empty()
    }
}

/// Neither finitely presented nor finitely co-presented: the PFI
/// decomposition has a projective and an injective part.
pub fn is_doubly_infinite<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<bool> {
    Ok(pfi_decompose(m, budget)?.is_doubly_infinite())
}

/// Arrows of `q` with both ends in `verts` on which `m` is nonzero.
pub fn supporting_arrows<F: Field>(m: &Rep<F>, verts: &BTreeSet<Vertex>) -> Result<Vec<Arrow>> {
    let q = m.quiver();
    let mut out = Vec::new();
    for &v in verts {
        for a in q.out_arrows(v) {
            if verts.contains(&a.dst) && !m.arrow_map(a)?.is_zero() {
                out.push(a);
            }
        }
    }
    Ok(out)
}
