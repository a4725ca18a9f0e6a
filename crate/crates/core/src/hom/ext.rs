use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::relation_matrix;
use crate::linalg::{Mat, Quotient};
use crate::present::fp_search;
use crate::quiver::{window, Arrow, Vertex};
use crate::rep::{Cocycle, Morphism, Rep, RepNode};
use crate::Budget;

/// `0 → sub → middle → quot → 0`.
#[derive(Clone)]
pub struct Ses<F: Field> {
    pub sub: Rep<F>,
    pub middle: Rep<F>,
    pub quot: Rep<F>,
    pub inclusion: Morphism<F>,
    pub projection: Morphism<F>,
    /// Gluing data when the middle term is a glued extension.
    pub cocycle: Option<Cocycle<F>>,
}

impl<F: Field> fmt::Debug for Ses<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0 -> {} -> {} -> {} -> 0", self.sub.describe(), self.middle.describe(), self.quot.describe())
    }
}

impl<F: Field> Ses<F> {
    /// The canonical sequence of a glued extension.
    pub fn glue(sub: &Rep<F>, quot: &Rep<F>, cocycle: Cocycle<F>) -> Result<Self> {
        let middle = Rep::glue(sub, quot, cocycle.clone())?;
        Ok(Ses {
            sub: sub.clone(),
            quot: quot.clone(),
            inclusion: Morphism::glue_in(&middle)?,
            projection: Morphism::glue_out(&middle)?,
            middle,
            cocycle: Some(cocycle),
        })
    }

    /// A sequence given by its two maps.
    pub fn from_maps(inclusion: Morphism<F>, projection: Morphism<F>) -> Result<Self> {
        if !inclusion.codomain().ptr_eq(projection.domain()) {
            return Err(Error::Malformed("inclusion and projection do not share the middle term".into()));
        }
        Ok(Ses {
            sub: inclusion.domain().clone(),
            middle: inclusion.codomain().clone(),
            quot: projection.codomain().clone(),
            inclusion,
            projection,
            cocycle: None,
        })
    }

    /// Checks exactness at all three terms on the given vertices.
    pub fn is_exact_on<'a>(&self, vs: impl IntoIterator<Item = &'a Vertex>) -> Result<bool> {
        for &v in vs {
            let i = self.inclusion.at(v)?;
            let p = self.projection.at(v)?;
            if i.rank() != i.cols() || p.rank() != p.rows() || !p.mul(&i).is_zero() {
                return Ok(false);
            }
            if self.middle.dim(v)? != i.cols() + p.rows() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Vertices carrying data of the three terms.
    pub fn anchors(&self) -> Vec<Vertex> {
        let mut a = self.sub.anchors();
        a.extend(self.quot.anchors());
        a.extend(self.middle.anchors());
        if let Some(c) = &self.cocycle {
            for arrow in c.entries.keys() {
                a.push(arrow.src);
                a.push(arrow.dst);
            }
        }
        a.sort();
        a.dedup();
        a
    }

    /// The class of this sequence is zero.
    pub fn is_split(&self, budget: &Budget) -> Result<bool> {
        let c = self
            .cocycle
            .as_ref()
            .ok_or_else(|| Error::Malformed("splitting test needs gluing data".into()))?;
        is_coboundary(&self.quot, &self.sub, c, budget)
    }
}

/// Cochains of the two-term complex computing `Hom` and `Ext` between `X`
/// and `Y` on a finite vertex set.
struct Complex<F> {
    arrows: Vec<(Arrow, usize, usize, usize)>,
    d: Mat<F>,
}

impl<F: Field> Complex<F> {
    fn new(x: &Rep<F>, y: &Rep<F>, verts: &BTreeSet<Vertex>) -> Result<Self> {
        let q = x.quiver();
        let mut vblocks = BTreeMap::new();
        let mut n0 = 0;
        for &v in verts {
            let (r, c) = (y.dim(v)?, x.dim(v)?);
            if r * c > 0 {
                vblocks.insert(v, (n0, r, c));
                n0 += r * c;
            }
        }
        let mut arrows = Vec::new();
        let mut n1 = 0;
        for &v in verts {
            if x.dim(v)? == 0 {
                continue;
            }
            for a in q.out_arrows(v) {
                if !verts.contains(&a.dst) {
                    continue;
                }
                let (r, c) = (y.dim(a.dst)?, x.dim(v)?);
                if r > 0 {
                    arrows.push((a, n1, r, c));
                    n1 += r * c;
                }
            }
        }
        let mut d = Mat::<F>::zeros(n1, n0);
        for &(a, off, r, c) in &arrows {
            let ya = y.arrow_map(a)?;
            let xa = x.arrow_map(a)?;
            // Y(α) f_x contributes entry (i, k) ← Σ_l Y(α)[i][l] f_x[l][k].
            if let Some(&(o, fr, fc)) = vblocks.get(&a.src) {
                for i in 0..r {
                    for k in 0..c {
                        for l in 0..fr {
                            let w = ya.get(i, l);
                            if !w.is_zero() {
                                let col = o + l * fc + k;
                                let cur = d.get(off + i * c + k, col).clone();
                                d.set(off + i * c + k, col, cur + w.clone());
                            }
                        }
                    }
                }
            }
            // − f_y X(α) contributes entry (i, k) ← Σ_l f_y[i][l] X(α)[l][k].
            if let Some(&(o, _, fc)) = vblocks.get(&a.dst) {
                for i in 0..r {
                    for k in 0..c {
                        for l in 0..fc {
                            let w = xa.get(l, k);
                            if !w.is_zero() {
                                let col = o + i * fc + l;
                                let cur = d.get(off + i * c + k, col).clone();
                                d.set(off + i * c + k, col, cur - w.clone());
                            }
                        }
                    }
                }
            }
        }
        Ok(Complex { arrows, d })
    }

    fn len(&self) -> usize {
        self.d.rows()
    }

    fn vectorize(&self, c: &Cocycle<F>) -> Option<Vec<F>> {
        let mut v = vec![F::zero(); self.len()];
        for &(a, off, _, _) in &self.arrows {
            if let Some(m) = c.entries.get(&a) {
                for (k, x) in m.vectorize().into_iter().enumerate() {
                    v[off + k] = x;
                }
            }
        }
        let outside = c.entries.iter().filter(|(a, m)| !m.is_zero() && !self.arrows.iter().any(|t| t.0 == **a)).count();
        (outside == 0).then_some(v)
    }

    fn cocycle(&self, v: &[F]) -> Cocycle<F> {
        let mut entries = BTreeMap::new();
        for &(a, off, r, c) in &self.arrows {
            let m = Mat::from_vector(r, c, &v[off..off + r * c]);
            if !m.is_zero() {
                entries.insert(a, m);
            }
        }
        Cocycle { entries }
    }
}

/// A basis of `Ext(X, Y)` by arrow cocycles modulo coboundaries.
#[derive(Clone)]
pub struct ExtSpace<F: Field> {
    pub quot: Rep<F>,
    pub sub: Rep<F>,
    pub classes: Vec<Cocycle<F>>,
    /// Vertices of the complex.
    pub window: BTreeSet<Vertex>,
    /// The dimension could not be cross-checked by a presentation.
    pub window_relative: bool,
    complex: Complex<F>,
    quotient: Quotient<F>,
}

impl<F: Field> Clone for Complex<F> {
    fn clone(&self) -> Self {
        Complex { arrows: self.arrows.clone(), d: self.d.clone() }
    }
}

impl<F: Field> fmt::Debug for ExtSpace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({}, {}) dim {}", self.quot.describe(), self.sub.describe(), self.dim())
    }
}

impl<F: Field> ExtSpace<F> {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    /// Coordinates of the class of `c`.
    pub fn coords(&self, c: &Cocycle<F>) -> Result<Vec<F>> {
        let v = self
            .complex
            .vectorize(c)
            .ok_or_else(|| Error::Uncertified("cocycle is supported outside the computed window".into()))?;
        Ok(self.quotient.projection().apply(&v))
    }

    /// `Σ a_k c_k`.
    pub fn element(&self, coeffs: &[F]) -> Cocycle<F> {
        let mut v = vec![F::zero(); self.complex.len()];
        for (a, &k) in coeffs.iter().zip(self.quotient.complement()) {
            v[k] = v[k].clone() + a.clone();
        }
        self.complex.cocycle(&v)
    }

    /// The sequence glued from a class.
    pub fn ses(&self, coeffs: &[F]) -> Result<Ses<F>> {
        Ses::glue(&self.sub, &self.quot, self.element(coeffs))
    }
}

fn exact_ext_dim<F: Field>(x: &Rep<F>, y: &Rep<F>, budget: &Budget) -> Result<Option<usize>> {
    if let Some(p) = fp_search(x, budget)? {
        let (m, _) = relation_matrix(&p, y)?;
        return Ok(Some(m.rows() - m.rank()));
    }
    let (dy, dx) = (y.dual(), x.dual());
    if let Some(p) = fp_search(&dy, budget)? {
        let (m, _) = relation_matrix(&p, &dx)?;
        return Ok(Some(m.rows() - m.rank()));
    }
    Ok(None)
}

fn finite_complex_vertices<F: Field>(x: &Rep<F>, y: &Rep<F>, budget: &Budget) -> Result<Option<BTreeSet<Vertex>>> {
    let q = x.quiver();
    if let Some(s) = x.finite_support(budget)? {
        let mut v = s.clone();
        for &a in &s {
            v.extend(q.out_arrows(a).into_iter().map(|a| a.dst));
        }
        return Ok(Some(v));
    }
    if let Some(t) = y.finite_support(budget)? {
        let mut v = t.clone();
        for &a in &t {
            v.extend(q.in_arrows(a).into_iter().map(|a| a.src));
        }
        return Ok(Some(v));
    }
    Ok(None)
}

fn build<F: Field>(x: &Rep<F>, y: &Rep<F>, verts: BTreeSet<Vertex>, window_relative: bool) -> Result<ExtSpace<F>> {
    let complex = Complex::new(x, y, &verts)?;
    let quotient = Quotient::by_span(&complex.d);
    let classes = quotient
        .complement()
        .iter()
        .map(|&k| {
            let mut v = vec![F::zero(); complex.len()];
            v[k] = F::one();
            complex.cocycle(&v)
        })
        .collect();
    Ok(ExtSpace { quot: x.clone(), sub: y.clone(), classes, window: verts, window_relative, complex, quotient })
}

/// `Ext(X, Y)`: classes of extensions `0 → Y → E → X → 0`.
pub fn ext_space<F: Field>(x: &Rep<F>, y: &Rep<F>, budget: &Budget) -> Result<ExtSpace<F>> {
    if !x.quiver().same_as(y.quiver()) {
        return Err(Error::Malformed("Ext between representations of different quivers".into()));
    }
    if let Some(verts) = finite_complex_vertices(x, y, budget)? {
        return build(x, y, verts, false);
    }
    let exact = exact_ext_dim(x, y, budget)?;
    let q = x.quiver();
    let mut anchors = x.anchors();
    anchors.extend(y.anchors());
    let mut previous: Option<usize> = None;
    for r in budget.radii() {
        let verts = window(q, &anchors, r).vertices;
        let e = build(x, y, verts, exact.is_none())?;
        match exact {
            Some(d) if e.dim() == d => return Ok(e),
            None if previous == Some(e.dim()) => return Ok(e),
            _ => previous = Some(e.dim()),
        }
    }
    Err(Error::BudgetExhausted(format!(
        "Ext({}, {}) did not stabilise up to radius {}",
        x.describe(),
        y.describe(),
        budget.max_radius
    )))
}

fn is_coboundary<F: Field>(x: &Rep<F>, y: &Rep<F>, c: &Cocycle<F>, budget: &Budget) -> Result<bool> {
    let e = ext_space(x, y, budget)?;
    match e.coords(c) {
        Ok(v) => Ok(v.iter().all(|a| a.is_zero())),
        Err(_) => {
            let mut anchors: Vec<Vertex> = c.entries.keys().flat_map(|a| [a.src, a.dst]).collect();
            anchors.extend(e.window.iter().copied());
            let verts = window(x.quiver(), &anchors, 1).vertices;
            let big = build(x, y, verts, true)?;
            Ok(big.coords(c)?.iter().all(|a| a.is_zero()))
        }
    }
}

/// Result of the finite-extension test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteExtension {
    pub finite: bool,
    /// Arrows `x → y` with `x ∈ supp(quot)`, `y ∈ supp(sub)` and nonzero
    /// middle map, in the largest window examined.
    pub witness: Vec<Arrow>,
    /// `(radius, number of such arrows)` for each window examined.
    pub growth: Vec<(usize, usize)>,
    /// Same test phrased with arrows supporting the middle but neither end.
    pub definitional: bool,
}

fn nonzero_arrows<F: Field>(s: &Ses<F>, verts: &BTreeSet<Vertex>) -> Result<(Vec<Arrow>, Vec<Arrow>)> {
    let q = s.middle.quiver();
    let mut lemma = Vec::new();
    let mut defn = Vec::new();
    for &x in verts {
        for a in q.out_arrows(x) {
            if !verts.contains(&a.dst) || s.middle.arrow_map(a)?.is_zero() {
                continue;
            }
            if s.quot.dim(a.src)? > 0 && s.sub.dim(a.dst)? > 0 {
                lemma.push(a);
            }
            if s.sub.arrow_map(a)?.is_zero() && s.quot.arrow_map(a)?.is_zero() {
                defn.push(a);
            }
        }
    }
    Ok((lemma, defn))
}

/// Decides whether the middle term is supported, beyond the arrows of its
/// ends, on only finitely many arrows. Counts are compared on windows of
/// growing radius: stable counts certify finiteness, counts that grow at
/// every step up to the budget witness an infinite family.
pub fn is_finite_extension<F: Field>(s: &Ses<F>, budget: &Budget) -> Result<FiniteExtension> {
    let q = s.middle.quiver();
    let anchors = s.anchors();
    let mut growth = Vec::new();
    let mut last: Option<(usize, usize, Vec<Arrow>)> = None;
    let mut finite = false;
    let mut definitional = false;
    let mut witness = Vec::new();
    for r in budget.radii() {
        let verts = window(q, &anchors, r).vertices;
        let (lemma, defn) = nonzero_arrows(s, &verts)?;
        growth.push((r, lemma.len()));
        if let Some((l, d, _)) = &last {
            if *l == lemma.len() && !finite {
                finite = true;
                definitional = *d == defn.len();
                witness = lemma.clone();
                break;
            }
        }
        witness = lemma.clone();
        last = Some((lemma.len(), defn.len(), lemma));
        if q.is_finite() {
            finite = true;
            definitional = true;
            break;
        }
    }
    if !finite {
        if let Some((_, _, w)) = last {
            witness = w;
        }
    }
    Ok(FiniteExtension { finite, witness, growth, definitional })
}

/// Cocycle-level sum of two extensions with the same ends.
pub fn baer_sum<F: Field>(s1: &Ses<F>, s2: &Ses<F>) -> Result<Ses<F>> {
    let same = |a: &Rep<F>, b: &Rep<F>| a.ptr_eq(b) || a.describe() == b.describe();
    if !same(&s1.sub, &s2.sub) || !same(&s1.quot, &s2.quot) {
        return Err(Error::Malformed("Baer sum of extensions with different ends".into()));
    }
    let (Some(c1), Some(c2)) = (&s1.cocycle, &s2.cocycle) else {
        return Err(Error::Malformed("Baer sum needs gluing data".into()));
    };
    Ses::glue(&s1.sub, &s1.quot, c1.add(c2))
}

impl<F: Field> Ses<F> {
    /// `-s`: the same sequence with negated gluing data.
    pub fn negate(&self) -> Result<Self> {
        let c = self.cocycle.as_ref().ok_or_else(|| Error::Malformed("negation needs gluing data".into()))?;
        Ses::glue(&self.sub, &self.quot, c.scale(&-F::one()))
    }

    /// Gluing data read off a middle term built by [`Rep::glue`].
    pub fn from_glued(middle: &Rep<F>) -> Result<Self> {
        match middle.node() {
            RepNode::Glue { sub, quot, cocycle } => Ok(Ses {
                sub: sub.clone(),
                quot: quot.clone(),
                inclusion: Morphism::glue_in(middle)?,
                projection: Morphism::glue_out(middle)?,
                middle: middle.clone(),
                cocycle: Some(cocycle.clone()),
            }),
            _ => Err(Error::Malformed("not a glued representation".into())),
        }
    }
}
