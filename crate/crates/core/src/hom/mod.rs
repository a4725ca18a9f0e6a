//! Hom spaces, endomorphism algebras, Ext and short exact sequences.

mod algebra;
mod ext;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;
use crate::present::{fc_search, fp_search, Presentation};
use crate::quiver::{window, Vertex};
use crate::rep::{hom_on_vertices, Morphism, Rep};
use crate::Budget;

pub use algebra::{decompose, end_algebra, is_radical, iso_test, EndAlgebra, IsoWitness, Summand};
pub use ext::{baer_sum, ext_space, is_finite_extension, ExtSpace, FiniteExtension, Ses};

/// How a Hom space was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HomRoute {
    /// One of the two objects has finite support.
    Finite,
    /// Generator images subject to the relations of a presentation of the domain.
    Presentation,
    /// Cogenerator functionals subject to the relations of a copresentation of the codomain.
    Copresentation,
    /// Compatible families on a window, certified by a larger window.
    Window,
}

impl HomRoute {
    pub fn name(self) -> &'static str {
        match self {
            HomRoute::Finite => "finite",
            HomRoute::Presentation => "presentation",
            HomRoute::Copresentation => "copresentation",
            HomRoute::Window => "window",
        }
    }
}

/// A basis of `Hom(M, N)` with the vertices on which morphisms are determined.
#[derive(Clone)]
pub struct HomSpace<F: Field> {
    pub domain: Rep<F>,
    pub codomain: Rep<F>,
    pub route: HomRoute,
    pub basis: Vec<Morphism<F>>,
    /// Restriction to these vertices is injective on the Hom space.
    pub determining: BTreeSet<Vertex>,
    /// Radii of the windows used by the certificate (zero for exact routes).
    pub radii: (usize, usize),
    vectors: Mat<F>,
}

impl<F: Field> fmt::Debug for HomSpace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom({:?}, {:?}) dim {} via {}", self.domain, self.codomain, self.dim(), self.route.name())
    }
}

impl<F: Field> HomSpace<F> {
    fn new(
        domain: &Rep<F>,
        codomain: &Rep<F>,
        route: HomRoute,
        basis: Vec<Morphism<F>>,
        determining: BTreeSet<Vertex>,
        radii: (usize, usize),
    ) -> Result<Self> {
        let mut hs = HomSpace {
            domain: domain.clone(),
            codomain: codomain.clone(),
            route,
            basis: Vec::new(),
            determining,
            radii,
            vectors: Mat::zeros(0, 0),
        };
        let cols = basis.iter().map(|f| hs.vectorize(f)).collect::<Result<Vec<_>>>()?;
        hs.vectors = Mat::from_columns(hs.vector_len()?, &cols);
        hs.basis = basis;
        Ok(hs)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn vector_len(&self) -> Result<usize> {
        let mut n = 0;
        for &v in &self.determining {
            n += self.domain.dim(v)? * self.codomain.dim(v)?;
        }
        Ok(n)
    }

    /// Concatenated matrices of `f` on the determining vertices.
    pub fn vectorize(&self, f: &Morphism<F>) -> Result<Vec<F>> {
        let mut out = Vec::new();
        for &v in &self.determining {
            out.extend(f.at(v)?.vectorize());
        }
        Ok(out)
    }

    /// Coordinates of `f` in the basis.
    pub fn coords(&self, f: &Morphism<F>) -> Result<Vec<F>> {
        self.coords_of_vector(&self.vectorize(f)?)
    }

    pub(crate) fn coords_of_vector(&self, v: &[F]) -> Result<Vec<F>> {
        if self.dim() == 0 {
            return if v.iter().all(|x| x.is_zero()) {
                Ok(Vec::new())
            } else {
                Err(Error::NotAMorphism("morphism is not in the Hom space".into()))
            };
        }
        self.vectors.solve(v).ok_or_else(|| Error::NotAMorphism("morphism is not in the Hom space".into()))
    }

    /// `Σ c_i b_i`.
    pub fn element(&self, coeffs: &[F]) -> Result<Morphism<F>> {
        let terms = coeffs.iter().cloned().zip(self.basis.iter().cloned()).collect();
        Morphism::combination(&self.domain, &self.codomain, terms)
    }

    /// True if `f` vanishes on the determining vertices (hence everywhere).
    pub fn is_zero(&self, f: &Morphism<F>) -> Result<bool> {
        f.vanishes_on(&self.determining)
    }

    /// Re-checks that every basis element commutes with all arrows on the
    /// determining set enlarged by `ring` steps.
    pub fn verify(&self, ring: usize) -> Result<bool> {
        let q = self.domain.quiver();
        let seeds: Vec<Vertex> = self.determining.iter().copied().collect();
        if seeds.is_empty() {
            return Ok(true);
        }
        let w = window(q, &seeds, ring);
        for f in &self.basis {
            for &x in &w.vertices {
                for a in q.out_arrows(x) {
                    if !w.contains(a.dst) {
                        continue;
                    }
                    let lhs = self.codomain.arrow_map(a)?.mul(&f.at(x)?);
                    let rhs = f.at(a.dst)?.mul(&self.domain.arrow_map(a)?);
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// `Hom(M, N)`, choosing the cheapest applicable route.
pub fn hom_space<F: Field>(m: &Rep<F>, n: &Rep<F>, budget: &Budget) -> Result<HomSpace<F>> {
    if !m.quiver().same_as(n.quiver()) {
        return Err(Error::Malformed("Hom between representations of different quivers".into()));
    }
    if let Some(s) = m.finite_support(budget)? {
        return hom_finite(m, n, &s);
    }
    if let Some(t) = n.finite_support(budget)? {
        return hom_finite(m, n, &t);
    }
    if let Some(p) = fp_search(m, budget)? {
        return hom_presentation(m, n, &p);
    }
    if let Some(c) = fc_search(n, budget)? {
        return hom_copresentation(m, n, &c, budget);
    }
    hom_window(m, n, budget)
}

/// `Hom(M, N)` along a prescribed route.
pub fn hom_space_via<F: Field>(m: &Rep<F>, n: &Rep<F>, route: HomRoute, budget: &Budget) -> Result<HomSpace<F>> {
    match route {
        HomRoute::Finite => {
            let s = match m.finite_support(budget)? {
                Some(s) => s,
                None => n
                    .finite_support(budget)?
                    .ok_or_else(|| Error::HomMayBeInfinite("neither support is finite".into()))?,
            };
            hom_finite(m, n, &s)
        }
        HomRoute::Presentation => {
            let p = fp_search(m, budget)?
                .ok_or_else(|| Error::HomMayBeInfinite("domain is not finitely presented".into()))?;
            hom_presentation(m, n, &p)
        }
        HomRoute::Copresentation => {
            let c = fc_search(n, budget)?
                .ok_or_else(|| Error::HomMayBeInfinite("codomain is not finitely co-presented".into()))?;
            hom_copresentation(m, n, &c, budget)
        }
        HomRoute::Window => hom_window(m, n, budget),
    }
}

fn hom_finite<F: Field>(m: &Rep<F>, n: &Rep<F>, s: &BTreeSet<Vertex>) -> Result<HomSpace<F>> {
    let q = m.quiver();
    let mut verts = s.clone();
    for &v in s {
        verts.extend(q.neighbours(v));
    }
    let sol = hom_on_vertices(m, n, &verts, &BTreeMap::new())?
        .ok_or_else(|| Error::Malformed("homogeneous system is inconsistent".into()))?;
    let basis = sol
        .kernel
        .into_iter()
        .map(|mut maps| {
            maps.retain(|v, x| s.contains(v) && !x.is_zero());
            Morphism::explicit(m, n, maps)
        })
        .collect::<Result<Vec<_>>>()?;
    HomSpace::new(m, n, HomRoute::Finite, basis, s.clone(), (0, 0))
}

/// The map `⊕ N(c_j) → ⊕ N(d_i)` induced by the relations of a projective
/// presentation: its kernel is `Hom(M, N)` and its cokernel `Ext(M, N)`.
pub(crate) fn relation_matrix<F: Field>(p: &Presentation<F>, n: &Rep<F>) -> Result<(Mat<F>, Vec<usize>)> {
    let cs = p.zeroth();
    let mut offs = Vec::with_capacity(cs.len());
    let mut total = 0;
    for &c in cs {
        offs.push(total);
        total += n.dim(c)?;
    }
    let mut blocks: Vec<Mat<F>> = Vec::new();
    for (i, &d) in p.first().iter().enumerate() {
        let mut rel = Mat::zeros(n.dim(d)?, total);
        for (j, _) in cs.iter().enumerate() {
            for (path, a) in p.pm.entry(j, i).terms() {
                let np = n.path_map(path)?.scale(a);
                let mut shifted = Mat::zeros(rel.rows(), total);
                shifted.paste(0, offs[j], &np);
                rel = rel.add(&shifted);
            }
        }
        blocks.push(rel);
    }
    let refs: Vec<&Mat<F>> = blocks.iter().collect();
    Ok((Mat::vstack(&refs, total), offs))
}

fn hom_presentation<F: Field>(m: &Rep<F>, n: &Rep<F>, p: &Presentation<F>) -> Result<HomSpace<F>> {
    let cs = p.zeroth().to_vec();
    let (system, offs) = relation_matrix(p, n)?;
    let kern = system.kernel();
    let mut basis = Vec::new();
    for k in 0..kern.cols() {
        let y = kern.column(k);
        let images = cs
            .iter()
            .enumerate()
            .map(|(j, &c)| -> Result<Vec<F>> { Ok(y[offs[j]..offs[j] + n.dim(c)?].to_vec()) })
            .collect::<Result<Vec<_>>>()?;
        basis.push(Morphism::from_generators(m, n, p.gens.clone(), images)?);
    }
    HomSpace::new(m, n, HomRoute::Presentation, basis, cs.into_iter().collect(), p.radii)
}

fn hom_copresentation<F: Field>(m: &Rep<F>, n: &Rep<F>, c: &Presentation<F>, budget: &Budget) -> Result<HomSpace<F>> {
    let (dm, dn) = (m.dual(), n.dual());
    let dp = fp_search(&dn, budget)?.ok_or_else(|| Error::HomMayBeInfinite("dual is not finitely presented".into()))?;
    let dual_space = hom_presentation(&dn, &dm, &dp)?;
    let basis: Vec<Morphism<F>> = dual_space.basis.iter().map(|g| g.dual()).collect();
    HomSpace::new(m, n, HomRoute::Copresentation, basis, c.zeroth().iter().copied().collect(), c.radii)
}

fn hom_window<F: Field>(m: &Rep<F>, n: &Rep<F>, budget: &Budget) -> Result<HomSpace<F>> {
    let q = m.quiver();
    let mut anchors = m.anchors();
    anchors.extend(n.anchors());
    anchors.sort();
    anchors.dedup();
    for r in budget.radii() {
        let small = window(q, &anchors, r);
        let large = window(q, &anchors, r + budget.step);
        let none = BTreeMap::new();
        let (Some(ss), Some(sl)) =
            (hom_on_vertices(m, n, &small.vertices, &none)?, hom_on_vertices(m, n, &large.vertices, &none)?)
        else {
            return Err(Error::Malformed("homogeneous system is inconsistent".into()));
        };
        if ss.dim() != sl.dim() {
            continue;
        }
        // The restriction from the large window to the small one must be injective.
        let cols: Vec<Vec<F>> = sl
            .kernel
            .iter()
            .map(|k| small.vertices.iter().flat_map(|v| k[v].vectorize()).collect())
            .collect();
        let len: usize = small.vertices.iter().map(|v| sl.kernel.first().map_or(0, |k| k[v].rows() * k[v].cols())).sum();
        if !cols.is_empty() && Mat::from_columns(len, &cols).rank() != cols.len() {
            continue;
        }
        let basis = sl
            .kernel
            .into_iter()
            .map(|maps| Morphism::from_window(m, n, maps, *budget))
            .collect::<Result<Vec<_>>>()?;
        return HomSpace::new(m, n, HomRoute::Window, basis, large.vertices.clone(), (r, r + budget.step));
    }
    Err(Error::HomMayBeInfinite(format!(
        "Hom({}, {}) did not stabilise up to radius {}",
        m.describe(),
        n.describe(),
        budget.max_radius
    )))
}
