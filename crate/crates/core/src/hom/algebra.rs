use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::{hom_space, HomSpace};
use crate::linalg::{Mat, Poly, Subspace};
use crate::quiver::{window, Vertex};
use crate::rep::{Morphism, Rep, RepNode};
use crate::Budget;

/// `End(M)` with structure constants in the basis of its Hom space.
#[derive(Clone, Debug)]
pub struct EndAlgebra<F: Field> {
    pub hom: HomSpace<F>,
    /// `table[i][j]` holds the coordinates of `b_i ∘ b_j`.
    pub table: Vec<Vec<Vec<F>>>,
    pub unit: Vec<F>,
    /// Basis of the Jacobson radical, in coordinates.
    pub radical: Vec<Vec<F>>,
    pub is_local: bool,
}

impl<F: Field> EndAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn object(&self) -> &Rep<F> {
        &self.hom.domain
    }

    /// Coordinates of `a · b` (first `b`, then `a`).
    pub fn mul(&self, a: &[F], b: &[F]) -> Vec<F> {
        let n = self.dim();
        let mut out = vec![F::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai.clone() * bj.clone();
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = out[k].clone() + c.clone() * t.clone();
                    }
                }
            }
        }
        out
    }

    fn axpy(a: &[F], c: &F, b: &[F]) -> Vec<F> {
        a.iter().zip(b).map(|(x, y)| x.clone() + c.clone() * y.clone()).collect()
    }

    pub fn is_nilpotent(&self, a: &[F]) -> bool {
        let mut p = a.to_vec();
        for _ in 0..=self.dim() {
            if p.iter().all(|x| x.is_zero()) {
                return true;
            }
            p = self.mul(a, &p);
        }
        p.iter().all(|x| x.is_zero())
    }

    /// True if `a` lies in the radical.
    pub fn in_radical(&self, a: &[F]) -> bool {
        if a.iter().all(|x| x.is_zero()) {
            return true;
        }
        if self.radical.is_empty() {
            return false;
        }
        Mat::from_columns(self.dim(), &self.radical).solve(a).is_some()
    }

    /// `(a b) c == a (b c)` for all basis triples.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        let e = |i: usize| {
            let mut v = vec![F::zero(); n];
            v[i] = F::one();
            v
        };
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.mul(&self.mul(&e(i), &e(j)), &e(k)) == self.mul(&e(i), &self.mul(&e(j), &e(k)))))
        })
    }

    /// Basis of `e A e`.
    fn corner(&self, e: &[F]) -> Vec<Vec<F>> {
        let n = self.dim();
        let cols: Vec<Vec<F>> = (0..n)
            .map(|i| {
                let mut b = vec![F::zero(); n];
                b[i] = F::one();
                self.mul(e, &self.mul(&b, e))
            })
            .collect();
        if cols.is_empty() {
            return cols;
        }
        Mat::from_columns(n, &cols).image().columns()
    }

    /// Basis of `f A e`.
    fn between(&self, f: &[F], e: &[F]) -> Vec<Vec<F>> {
        let n = self.dim();
        let cols: Vec<Vec<F>> = (0..n)
            .map(|i| {
                let mut b = vec![F::zero(); n];
                b[i] = F::one();
                self.mul(f, &self.mul(&b, e))
            })
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        if cols.is_empty() {
            return cols;
        }
        Mat::from_columns(n, &cols).image().columns()
    }

    /// Minimal polynomial of `a` inside the corner algebra with unit `e`.
    pub fn min_poly(&self, a: &[F], e: &[F]) -> Poly<F> {
        let n = self.dim();
        let mut powers = vec![e.to_vec()];
        loop {
            let next = self.mul(a, powers.last().unwrap());
            if let Some(c) = Mat::from_columns(n, &powers).solve(&next) {
                let mut coeffs: Vec<F> = c.into_iter().map(|x| -x).collect();
                coeffs.push(F::one());
                return Poly::new(coeffs);
            }
            powers.push(next);
            if powers.len() > n + 1 {
                unreachable!("powers of an element span at most the algebra");
            }
        }
    }

    fn eval_poly(&self, p: &Poly<F>, a: &[F], e: &[F]) -> Vec<F> {
        let mut acc = vec![F::zero(); self.dim()];
        for c in p.coeffs().iter().rev() {
            acc = Self::axpy(&self.mul(a, &acc), c, e);
        }
        acc
    }

    /// Inverse of a unit `a` of the corner with unit `e`.
    pub fn corner_inverse(&self, a: &[F], e: &[F]) -> Option<Vec<F>> {
        let p = self.min_poly(a, e);
        let c0 = p.coeffs()[0].clone();
        let c0inv = c0.inverse()?;
        // p(a) = 0 gives a · q(a) = -c0 e with q(t) = (p(t) - c0) / t.
        let q = Poly::new(p.coeffs()[1..].to_vec());
        let qa = self.eval_poly(&q, a, e);
        Some(qa.into_iter().map(|x| -(x * c0inv.clone())).collect())
    }

    /// Primitive orthogonal idempotents summing to `e`, found by splitting
    /// minimal polynomials of basis elements and small combinations.
    pub fn primitive_idempotents(&self, e: &[F]) -> Vec<Vec<F>> {
        let basis = self.corner(e);
        if basis.len() <= 1 {
            return vec![e.to_vec()];
        }
        for cand in candidates(&basis) {
            let p = self.min_poly(&cand, e);
            if let Some((_, h, v)) = split(&p) {
                let f = self.eval_poly(&v.mul(&h), &cand, e);
                let g: Vec<F> = e.iter().zip(&f).map(|(a, b)| a.clone() - b.clone()).collect();
                let mut out = self.primitive_idempotents(&f);
                out.extend(self.primitive_idempotents(&g));
                return out;
            }
        }
        vec![e.to_vec()]
    }

    /// `e A e / rad` is one-dimensional.
    fn corner_is_split_local(&self, e: &[F]) -> bool {
        let n = self.dim();
        let corner = self.corner(e);
        if corner.is_empty() {
            return false;
        }
        let c = Subspace::span(&Mat::from_columns(n, &corner));
        let r = if self.radical.is_empty() {
            Subspace::zero(n)
        } else {
            Subspace::span(&Mat::from_columns(n, &self.radical))
        };
        c.dim() - c.intersection(&r).dim() == 1
    }

    /// Some basis pair `x ∈ f A e`, `y ∈ e A f` has `y x` invertible in `e A e`.
    fn idempotents_equivalent(&self, e: &[F], f: &[F]) -> bool {
        let xs = self.between(f, e);
        let ys = self.between(e, f);
        xs.iter().any(|x| ys.iter().any(|y| !self.is_nilpotent(&self.mul(y, x))))
    }
}

fn candidates<F: Field>(basis: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = basis[0].len();
    let comb = |coeffs: &[F]| -> Vec<F> {
        let mut v = vec![F::zero(); n];
        for (c, b) in coeffs.iter().zip(basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x = x.clone() + c.clone() * y.clone();
            }
        }
        v
    };
    let k = basis.len();
    let mut out: Vec<Vec<F>> = basis.to_vec();
    for i in 0..k {
        for j in i + 1..k {
            for c in [1, 2, -1, 3] {
                let mut co = vec![F::zero(); k];
                co[i] = F::one();
                co[j] = F::from_i64(c);
                out.push(comb(&co));
            }
        }
    }
    for base in [2i64, 3, 5, 7] {
        let co: Vec<F> = (0..k).map(|i| F::from_i64(base.pow((i % 8) as u32) + i as i64)).collect();
        out.push(comb(&co));
    }
    out
}

/// A factorisation `p = g h` into coprime non-constant factors together with
/// `v` such that `u g + v h = 1`.
fn split<F: Field>(p: &Poly<F>) -> Option<(Poly<F>, Poly<F>, Poly<F>)> {
    let deg = p.degree()?;
    if deg < 2 {
        return None;
    }
    let try_factor = |g: Poly<F>| -> Option<(Poly<F>, Poly<F>, Poly<F>)> {
        let (h, r) = p.divrem(&g);
        if !r.is_zero() || h.degree()? == 0 || g.degree()? == 0 {
            return None;
        }
        let (d, _u, v) = g.xgcd(&h);
        (d.degree() == Some(0)).then_some((g, h, v))
    };
    for r in p.roots() {
        let lin = Poly::linear(r.clone());
        let mut g = lin.clone();
        loop {
            let next = g.mul(&lin);
            let (_, rem) = p.divrem(&next);
            if !rem.is_zero() {
                break;
            }
            g = next;
        }
        if let Some(s) = try_factor(g) {
            return Some(s);
        }
    }
    let sqf = p.squarefree();
    if sqf.len() >= 2 {
        let (f, m) = &sqf[0];
        let mut g = Poly::one();
        for _ in 0..*m {
            g = g.mul(f);
        }
        return try_factor(g);
    }
    None
}

/// Computes `End(M)` with its structure constants and radical.
pub fn end_algebra<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<EndAlgebra<F>> {
    let hom = hom_space(m, m, budget)?;
    let n = hom.dim();
    let verts: Vec<Vertex> = hom.determining.iter().copied().collect();
    let mats: Vec<Vec<Mat<F>>> = hom
        .basis
        .iter()
        .map(|b| verts.iter().map(|&v| b.at(v)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let v: Vec<F> = (0..verts.len()).flat_map(|k| mats[i][k].mul(&mats[j][k]).vectorize()).collect();
            table[i][j] = hom.coords_of_vector(&v)?;
        }
    }
    let unit = hom.coords(&Morphism::identity(m))?;
    let mut alg = EndAlgebra { hom, table, unit, radical: Vec::new(), is_local: false };
    alg.radical = radical(&alg);
    let unit = alg.unit.clone();
    alg.is_local = n > 0 && alg.primitive_idempotents(&unit).len() == 1;
    Ok(alg)
}

/// Kernel of the trace form `(a, b) ↦ tr(L_{ab})`, which is the radical in
/// characteristic zero or above the dimension. Otherwise the kernel is only
/// accepted when it is a nilpotent ideal, and shrunk to its nilpotent
/// elements spanned by basis vectors otherwise.
fn radical<F: Field>(alg: &EndAlgebra<F>) -> Vec<Vec<F>> {
    let n = alg.dim();
    if n == 0 {
        return Vec::new();
    }
    let traces: Vec<F> =
        (0..n).map(|k| (0..n).fold(F::zero(), |acc, j| acc + alg.table[k][j][j].clone())).collect();
    let gram = Mat::from_fn(n, n, |i, j| {
        alg.table[i][j].iter().zip(&traces).fold(F::zero(), |acc, (c, t)| acc + c.clone() * t.clone())
    });
    let kern = gram.kernel().columns();
    let p = F::characteristic();
    if p == 0 || p as usize > n {
        return kern;
    }
    let nilpotent_ideal = kern.iter().all(|a| alg.is_nilpotent(a))
        && kern.iter().all(|a| {
            (0..n).all(|i| {
                let mut b = vec![F::zero(); n];
                b[i] = F::one();
                let s = Mat::from_columns(n, &kern);
                s.solve(&alg.mul(a, &b)).is_some() && s.solve(&alg.mul(&b, a)).is_some()
            })
        });
    if nilpotent_ideal {
        kern
    } else {
        kern.into_iter().filter(|a| alg.is_nilpotent(a)).collect()
    }
}

/// An indecomposable summand of a decomposition.
#[derive(Clone, Debug)]
pub struct Summand<F: Field> {
    pub rep: Rep<F>,
    pub multiplicity: usize,
    /// No idempotent was found but the endomorphism ring is not known to be local.
    pub residual: bool,
}

fn fingerprint<F: Field>(r: &Rep<F>, verts: &BTreeSet<Vertex>) -> Result<Vec<usize>> {
    r.dims_on(verts)
}

/// Krull-Schmidt decomposition into indecomposables with multiplicities.
pub fn decompose<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Vec<Summand<F>>> {
    let q = m.quiver();
    let verts = window(q, &m.anchors(), budget.radius).vertices;
    let mut out = decompose_raw(m, budget)?;
    let mut keyed = Vec::with_capacity(out.len());
    for s in out.drain(..) {
        keyed.push((fingerprint(&s.rep, &verts)?, s.rep.describe(), s));
    }
    keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    Ok(keyed.into_iter().map(|k| k.2).collect())
}

fn decompose_raw<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Vec<Summand<F>>> {
    if let Some(s) = m.finite_support(budget)? {
        if s.is_empty() {
            return Ok(Vec::new());
        }
    }
    if let RepNode::DirectSum(parts) = m.node() {
        let mut acc: Vec<Summand<F>> = Vec::new();
        for p in parts {
            for s in decompose_raw(p, budget)? {
                merge(&mut acc, s, budget)?;
            }
        }
        return Ok(acc);
    }
    if let RepNode::Glue { sub, quot, cocycle } = m.node() {
        if cocycle.entries.values().all(|c| c.is_zero()) {
            let mut acc = decompose_raw(sub, budget)?;
            for s in decompose_raw(quot, budget)? {
                merge(&mut acc, s, budget)?;
            }
            return Ok(acc);
        }
    }
    let alg = end_algebra(m, budget)?;
    if alg.dim() == 0 {
        return Ok(Vec::new());
    }
    let prims = alg.primitive_idempotents(&alg.unit);
    if prims.len() == 1 {
        return Ok(vec![Summand { rep: m.clone(), multiplicity: 1, residual: !alg.corner_is_split_local(&alg.unit) && !is_division(&alg) }]);
    }
    let mut groups: Vec<(Vec<F>, usize)> = Vec::new();
    for f in prims {
        match groups.iter_mut().find(|(g, _)| alg.idempotents_equivalent(g, &f)) {
            Some(g) => g.1 += 1,
            None => groups.push((f, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(f, mult)| {
            let e = alg.hom.element(&f)?;
            let residual = !alg.corner_is_split_local(&f);
            Ok(Summand { rep: Rep::image(&e), multiplicity: mult, residual })
        })
        .collect()
}

/// Every nonzero element is invertible (checked on the basis and the search
/// candidates): the endomorphism ring is a division algebra.
fn is_division<F: Field>(alg: &EndAlgebra<F>) -> bool {
    alg.radical.is_empty() && {
        let basis = alg.corner(&alg.unit);
        candidates(&basis).iter().all(|c| alg.min_poly(c, &alg.unit).coeffs().first().is_some_and(|x| !x.is_zero()))
    }
}

fn merge<F: Field>(acc: &mut Vec<Summand<F>>, s: Summand<F>, budget: &Budget) -> Result<()> {
    for t in acc.iter_mut() {
        if iso_indecomposable(&t.rep, &s.rep, budget)?.is_some() {
            t.multiplicity += s.multiplicity;
            return Ok(());
        }
    }
    acc.push(s);
    Ok(())
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug)]
pub enum IsoWitness<F: Field> {
    Isomorphic { forward: Morphism<F>, backward: Morphism<F> },
    DimensionMismatch { vertex: Vertex, dims: (usize, usize) },
    /// Every candidate fails to be invertible.
    NotIsomorphic(String),
}

impl<F: Field> IsoWitness<F> {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoWitness::Isomorphic { .. })
    }
}

fn dimension_witness<F: Field>(m: &Rep<F>, n: &Rep<F>, budget: &Budget) -> Result<Option<(Vertex, (usize, usize))>> {
    let mut anchors = m.anchors();
    anchors.extend(n.anchors());
    let w = window(m.quiver(), &anchors, budget.radius);
    for &v in &w.vertices {
        let (a, b) = (m.dim(v)?, n.dim(v)?);
        if a != b {
            return Ok(Some((v, (a, b))));
        }
    }
    Ok(None)
}

/// Isomorphism between indecomposables: some `y ∘ x` is a unit of `End(M)`.
fn iso_indecomposable<F: Field>(m: &Rep<F>, n: &Rep<F>, budget: &Budget) -> Result<Option<(Morphism<F>, Morphism<F>)>> {
    if m.ptr_eq(n) {
        return Ok(Some((Morphism::identity(m), Morphism::identity(m))));
    }
    if dimension_witness(m, n, budget)?.is_some() {
        return Ok(None);
    }
    let mn = hom_space(m, n, budget)?;
    if mn.dim() == 0 {
        return Ok(None);
    }
    let nm = hom_space(n, m, budget)?;
    if nm.dim() == 0 {
        return Ok(None);
    }
    let end = end_algebra(m, budget)?;
    for x in &mn.basis {
        for y in &nm.basis {
            let u = end.hom.coords(&x.then(y)?)?;
            if end.is_nilpotent(&u) {
                continue;
            }
            let Some(uinv) = end.corner_inverse(&u, &end.unit) else { continue };
            let uinv = end.hom.element(&uinv)?;
            let back = y.then(&uinv)?;
            let ends = end_algebra(n, budget)?;
            if ends.hom.coords(&back.then(x)?)? == ends.unit {
                return Ok(Some((x.clone(), back)));
            }
        }
    }
    Ok(None)
}

/// Decides whether `M ≅ N`, returning mutually inverse morphisms when so.
pub fn iso_test<F: Field>(m: &Rep<F>, n: &Rep<F>, budget: &Budget) -> Result<IsoWitness<F>> {
    if m.ptr_eq(n) {
        return Ok(IsoWitness::Isomorphic { forward: Morphism::identity(m), backward: Morphism::identity(m) });
    }
    if let Some((vertex, dims)) = dimension_witness(m, n, budget)? {
        return Ok(IsoWitness::DimensionMismatch { vertex, dims });
    }
    let end = end_algebra(m, budget)?;
    if end.is_local {
        return Ok(match iso_indecomposable(m, n, budget)? {
            Some((forward, backward)) => IsoWitness::Isomorphic { forward, backward },
            None => IsoWitness::NotIsomorphic("no composite through the codomain is a unit of End".into()),
        });
    }
    let mn = hom_space(m, n, budget)?;
    let nm = hom_space(n, m, budget)?;
    let endn = end_algebra(n, budget)?;
    if mn.dim() != nm.dim() || end.dim() != endn.dim() {
        return Ok(IsoWitness::NotIsomorphic(format!(
            "dim Hom(M,N) = {}, dim Hom(N,M) = {}, dim End M = {}, dim End N = {}",
            mn.dim(),
            nm.dim(),
            end.dim(),
            endn.dim()
        )));
    }
    for coeffs in generic_coefficients::<F>(mn.dim()) {
        let f = mn.element(&coeffs)?;
        if let Some(g) = two_sided_inverse(&f, &nm, &end, &endn)? {
            return Ok(IsoWitness::Isomorphic { forward: f, backward: g });
        }
    }
    let (dm, dn) = (decompose(m, budget)?, decompose(n, budget)?);
    let mut unmatched: Vec<Summand<F>> = dn.clone();
    for s in &dm {
        let pos = unmatched.iter().position(|t| {
            t.multiplicity == s.multiplicity && iso_indecomposable(&s.rep, &t.rep, budget).ok().flatten().is_some()
        });
        match pos {
            Some(i) => {
                unmatched.remove(i);
            }
            None => {
                return Ok(IsoWitness::NotIsomorphic(format!(
                    "summand {} with multiplicity {} has no partner",
                    s.rep.describe(),
                    s.multiplicity
                )))
            }
        }
    }
    if !unmatched.is_empty() {
        return Ok(IsoWitness::NotIsomorphic("summand counts differ".into()));
    }
    Err(Error::Uncertified("matching decompositions but no isomorphism found among generic candidates".into()))
}

fn generic_coefficients<F: Field>(n: usize) -> Vec<Vec<F>> {
    let mut out = Vec::new();
    for base in [1i64, 2, 3, 5, 7, 11] {
        out.push((0..n).map(|i| F::from_i64(base.pow((i % 6) as u32) + i as i64)).collect());
    }
    out
}

/// Solves `g ∘ f = 1` and `f ∘ g = 1` for `g` in the given Hom space.
fn two_sided_inverse<F: Field>(
    f: &Morphism<F>,
    back: &HomSpace<F>,
    endm: &EndAlgebra<F>,
    endn: &EndAlgebra<F>,
) -> Result<Option<Morphism<F>>> {
    let k = back.dim();
    let mut cols = Vec::with_capacity(k);
    for g in &back.basis {
        let mut c = endm.hom.coords(&f.then(g)?)?;
        c.extend(endn.hom.coords(&g.then(f)?)?);
        cols.push(c);
    }
    let mut rhs = endm.unit.clone();
    rhs.extend(endn.unit.clone());
    let sys = Mat::from_columns(rhs.len(), &cols);
    match sys.solve(&rhs) {
        Some(x) => Ok(Some(back.element(&x)?)),
        None => Ok(None),
    }
}

/// `f: M → N` lies in the radical: `g ∘ f ∈ rad End(M)` for every `g: N → M`.
pub fn is_radical<F: Field>(f: &Morphism<F>, budget: &Budget) -> Result<bool> {
    let (m, n) = (f.domain(), f.codomain());
    let end = end_algebra(m, budget)?;
    let back = hom_space(n, m, budget)?;
    for g in &back.basis {
        let c = end.hom.coords(&f.then(g)?)?;
        if !end.in_radical(&c) {
            return Ok(false);
        }
    }
    Ok(true)
}
