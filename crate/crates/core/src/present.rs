//! Minimal projective presentations and minimal injective copresentations.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Mat, Quotient, Subspace};
use crate::quiver::{topological_order, window, Vertex};
use crate::rep::{Morphism, PathComb, PathMatrix, Rep, Side};
use crate::Budget;

/// `0 → ⊕P_{d_i} → ⊕P_{c_j} → M → 0` (projective side) or
/// `0 → M → ⊕I_{c_j} → ⊕I_{d_i} → 0` (injective side).
#[derive(Clone)]
pub struct Presentation<F: Field> {
    pub object: Rep<F>,
    pub pm: PathMatrix<F>,
    /// Generators `g_j ∈ M(c_j)` (projective side) or cogenerating
    /// functionals on `M(c_j)` (injective side), one per `c_j`.
    pub gens: Vec<(Vertex, Vec<F>)>,
    /// Radii of the two windows on which the presentation was certified.
    pub radii: (usize, usize),
}

impl<F: Field> Presentation<F> {
    pub fn side(&self) -> Side {
        self.pm.side()
    }

    /// The summands of the middle term: `c_j` for `P0` (or `I0`).
    pub fn zeroth(&self) -> &[Vertex] {
        match self.side() {
            Side::Projective => self.pm.codomain(),
            Side::Injective => self.pm.domain(),
        }
    }

    /// The summands of the outer term: `d_i` for `P1` (or `I1`).
    pub fn first(&self) -> &[Vertex] {
        match self.side() {
            Side::Projective => self.pm.domain(),
            Side::Injective => self.pm.codomain(),
        }
    }

    /// No entry of the path matrix contains a trivial path.
    pub fn is_minimal(&self) -> bool {
        !self.pm.has_unit_entry()
    }

    /// `coker pm` (projective side) or `ker pm` (injective side).
    pub fn presented(&self) -> Result<Rep<F>> {
        let q = self.object.quiver();
        match self.side() {
            Side::Projective => Rep::coker_proj(q, self.pm.clone()),
            Side::Injective => Rep::ker_inj(q, self.pm.clone()),
        }
    }

    /// The comparison isomorphism `coker pm → M` (projective side) or
    /// `M → ker pm` (injective side).
    pub fn comparison(&self) -> Result<Morphism<F>> {
        let q = self.object.quiver();
        let presented = self.presented()?;
        let unit = |j: usize, c: Vertex| -> Result<Vec<F>> {
            // Coordinates of the trivial path of summand j inside the sum at c.
            let mut off = 0;
            for &x in &self.zeroth()[..j] {
                off += PathMatrix::<F>::summand_basis(self.side(), q, x, c)?.len();
            }
            let total: usize = self
                .zeroth()
                .iter()
                .map(|&x| PathMatrix::<F>::summand_basis(self.side(), q, x, c).map(|b| b.len()))
                .sum::<Result<usize>>()?;
            let mut e = vec![F::zero(); total];
            e[off] = F::one();
            Ok(e)
        };
        let mut pres = Vec::new();
        for (j, &(c, _)) in self.gens.iter().enumerate() {
            pres.push((c, unit(j, c)?));
        }
        let obj: Vec<Vec<F>> = self.gens.iter().map(|(_, g)| g.clone()).collect();
        match self.side() {
            Side::Projective => {
                let gens = pres
                    .into_iter()
                    .map(|(c, e)| -> Result<(Vertex, Vec<F>)> {
                        let proj = coker_projection(&presented, c)?;
                        Ok((c, proj.apply(&e)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Morphism::from_generators(&presented, &self.object, gens, obj)
            }
            Side::Injective => {
                let cogens = pres
                    .into_iter()
                    .map(|(c, e)| -> Result<(Vertex, Vec<F>)> {
                        let basis = kernel_basis(&presented, c)?;
                        let row = Mat::from_rows(vec![e], basis.rows())?.mul(&basis);
                        Ok((c, row.row(0).to_vec()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Morphism::to_cogenerators(&self.object, &presented, cogens, obj)
            }
        }
    }
}

fn coker_projection<F: Field>(m: &Rep<F>, v: Vertex) -> Result<Mat<F>> {
    let sp = m.evaluate(v)?;
    match &sp.aux {
        crate::rep::Aux::Quot { quot, .. } => Ok(quot.projection().clone()),
        _ => Err(Error::Malformed("not a cokernel of projectives".into())),
    }
}

fn kernel_basis<F: Field>(m: &Rep<F>, v: Vertex) -> Result<Mat<F>> {
    let sp = m.evaluate(v)?;
    match &sp.aux {
        crate::rep::Aux::Kern { sub, .. } => Ok(sub.basis().clone()),
        _ => Err(Error::Malformed("not a kernel of injectives".into())),
    }
}

type Stored<F> = (Budget, Option<(PathMatrix<F>, Vec<(Vertex, Vec<F>)>, (usize, usize))>);

fn recall<F: Field>(m: &Rep<F>, key: &'static str, budget: &Budget) -> Option<Option<Presentation<F>>> {
    let (b, data) = m.memo_get::<Stored<F>>(key)?;
    (b == *budget).then(|| data.map(|(pm, gens, radii)| Presentation { object: m.clone(), pm, gens, radii }))
}

fn remember<F: Field>(m: &Rep<F>, key: &'static str, budget: &Budget, p: &Option<Presentation<F>>) {
    let data = p.as_ref().map(|p| (p.pm.clone(), p.gens.clone(), p.radii));
    m.memo_set::<Stored<F>>(key, (*budget, data));
}

/// Generators of `top M` at each vertex of `verts` (standard basis vectors
/// outside the pivots of the radical).
pub fn top_generators<F: Field>(m: &Rep<F>, verts: &BTreeSet<Vertex>) -> Result<BTreeMap<Vertex, Vec<Vec<F>>>> {
    let q = m.quiver();
    let mut out = BTreeMap::new();
    for &v in verts {
        let d = m.dim(v)?;
        if d == 0 {
            continue;
        }
        let mut blocks = Vec::new();
        for a in q.in_arrows(v) {
            if m.dim(a.src)? > 0 {
                blocks.push(m.arrow_map(a)?);
            }
        }
        let refs: Vec<&Mat<F>> = blocks.iter().collect();
        let rad = Subspace::span(&Mat::hstack(&refs, d));
        let quot = Quotient::new(rad);
        if quot.dim() > 0 {
            let gens = quot
                .complement()
                .iter()
                .map(|&k| (0..d).map(|i| if i == k { F::one() } else { F::zero() }).collect())
                .collect();
            out.insert(v, gens);
        }
    }
    Ok(out)
}

/// True if the listed generators span `M` at every vertex of the convex set
/// `verts`, using only paths inside `verts`.
fn generates_on<F: Field>(m: &Rep<F>, verts: &BTreeSet<Vertex>, gens: &BTreeMap<Vertex, Vec<Vec<F>>>) -> Result<bool> {
    let q = m.quiver();
    let mut span: BTreeMap<Vertex, Mat<F>> = BTreeMap::new();
    for v in topological_order(q, verts) {
        let d = m.dim(v)?;
        let mut cols: Vec<Vec<F>> = gens.get(&v).cloned().unwrap_or_default();
        for a in q.in_arrows(v) {
            if let Some(s) = span.get(&a.src) {
                cols.extend(m.arrow_map(a)?.mul(s).columns());
            }
        }
        let s = Mat::from_columns(d, &cols);
        let s = if s.cols() > 0 { s.image() } else { s };
        if s.cols() != d {
            return Ok(false);
        }
        span.insert(v, s);
    }
    Ok(true)
}

fn sum_of_projectives<F: Field>(m: &Rep<F>, vs: &[Vertex]) -> Result<Rep<F>> {
    let q = m.quiver();
    if vs.is_empty() {
        return Ok(Rep::zero(q));
    }
    let parts = vs.iter().map(|&v| Rep::projective(q, v)).collect::<Result<Vec<_>>>()?;
    Rep::direct_sum(q, parts)
}

/// Searches for a minimal projective presentation, certified on two windows
/// around the anchors of `m`. Returns `None` when no radius within the
/// budget certifies one.
pub fn fp_search<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Option<Presentation<F>>> {
    if let Some(p) = recall(m, "fp", budget) {
        return Ok(p);
    }
    let p = fp_search_uncached(m, budget)?;
    remember(m, "fp", budget, &p);
    Ok(p)
}

fn fp_search_uncached<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Option<Presentation<F>>> {
    let q = m.quiver().clone();
    let anchors = m.anchors();
    for r in budget.radii() {
        let small = window(&q, &anchors, r);
        let large = window(&q, &anchors, r + budget.step);
        let tops = top_generators(m, &large.vertices)?;
        if tops.keys().any(|v| !small.contains(*v)) {
            continue;
        }
        if !generates_on(m, &large.vertices, &tops)? {
            continue;
        }
        let mut gens: Vec<(Vertex, Vec<F>)> = Vec::new();
        for (v, gs) in &tops {
            gens.extend(gs.iter().map(|g| (*v, g.clone())));
        }
        let cs: Vec<Vertex> = gens.iter().map(|g| g.0).collect();
        let p0 = sum_of_projectives(m, &cs)?;
        let units = cs
            .iter()
            .enumerate()
            .map(|(j, &c)| -> Result<Vec<F>> {
                let mut off = 0;
                for &x in &cs[..j] {
                    off += q.paths_between(x, c)?.len();
                }
                let mut e = vec![F::zero(); p0.dim(c)?];
                e[off] = F::one();
                Ok(e)
            })
            .collect::<Result<Vec<_>>>()?;
        let images: Vec<Vec<F>> = gens.iter().map(|g| g.1.clone()).collect();
        let pi = Morphism::from_generators(&p0, m, cs.iter().copied().zip(units).collect(), images)?;
        let k = Rep::kernel(&pi);
        let ktops = top_generators(&k, &large.vertices)?;
        if ktops.keys().any(|v| !small.contains(*v)) {
            continue;
        }
        let mut ds = Vec::new();
        let mut columns: Vec<Vec<PathComb<F>>> = Vec::new();
        for (&d, gs) in &ktops {
            let basis = match &k.evaluate(d)?.aux {
                crate::rep::Aux::Sub(s) => s.basis().clone(),
                _ => unreachable!("kernel node"),
            };
            for g in gs {
                let amb = basis.apply(g);
                let mut col = Vec::new();
                let mut off = 0;
                for &c in &cs {
                    let paths = q.paths_between(c, d)?;
                    let comb =
                        PathComb::from_terms(paths.iter().enumerate().map(|(i, p)| (p.clone(), amb[off + i].clone())));
                    off += paths.len();
                    col.push(comb);
                }
                ds.push(d);
                columns.push(col);
            }
        }
        let entries: Vec<Vec<PathComb<F>>> =
            (0..cs.len()).map(|j| columns.iter().map(|col| col[j].clone()).collect()).collect();
        let pm = PathMatrix::new(Side::Projective, ds, cs, entries)?;
        let pres = Presentation { object: m.clone(), pm, gens, radii: (r, r + budget.step) };
        let presented = pres.presented()?;
        let mut exact = true;
        for &v in &large.vertices {
            if presented.dim(v)? != m.dim(v)? {
                exact = false;
                break;
            }
        }
        if exact {
            return Ok(Some(pres));
        }
    }
    Ok(None)
}

/// Searches for a minimal injective copresentation by presenting the dual.
pub fn fc_search<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Option<Presentation<F>>> {
    if let Some(p) = recall(m, "fc", budget) {
        return Ok(p);
    }
    let p = match fp_search(&m.dual(), budget)? {
        None => None,
        Some(dp) => {
            let pm = &dp.pm;
            let entries: Vec<Vec<PathComb<F>>> = (0..pm.domain().len())
                .map(|i| (0..pm.codomain().len()).map(|j| pm.entry(j, i).opposite()).collect())
                .collect();
            let ipm = PathMatrix::new(Side::Injective, pm.codomain().to_vec(), pm.domain().to_vec(), entries)?;
            Some(Presentation { object: m.clone(), pm: ipm, gens: dp.gens.clone(), radii: dp.radii })
        }
    };
    remember(m, "fc", budget, &p);
    Ok(p)
}

/// The minimal projective presentation of a finitely presented object.
pub fn min_proj_presentation<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Presentation<F>> {
    fp_search(m, budget)?.ok_or_else(|| {
        Error::BudgetExhausted(format!("no finite projective presentation of {} up to radius {}", m.describe(), budget.max_radius))
    })
}

/// The minimal injective copresentation of a finitely co-presented object.
pub fn min_inj_copresentation<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Presentation<F>> {
    fc_search(m, budget)?.ok_or_else(|| {
        Error::BudgetExhausted(format!("no finite injective copresentation of {} up to radius {}", m.describe(), budget.max_radius))
    })
}
