use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;
use crate::quiver::{Path, Quiver, Vertex};

/// A finite linear combination of paths with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PathComb<F> {
    terms: BTreeMap<Path, F>,
}

impl<F: Field> PathComb<F> {
    pub fn zero() -> Self {
        PathComb { terms: BTreeMap::new() }
    }

    pub fn path(p: Path) -> Self {
        Self::term(p, F::one())
    }

    pub fn term(p: Path, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(p, c);
        }
        PathComb { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Path, F)>) -> Self {
        let mut out = Self::zero();
        for (p, c) in terms {
            out.add_term(p, c);
        }
        out
    }

    fn add_term(&mut self, p: Path, c: F) {
        let v = self.terms.remove(&p).map_or(c.clone(), |x| x + c);
        if !v.is_zero() {
            self.terms.insert(p, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, x)| (p.clone(), x.clone() * c.clone())))
    }

    /// `self` followed by `next` (bilinear extension of path concatenation).
    pub fn then(&self, next: &Self) -> Self {
        let mut out = Self::zero();
        for (p, a) in &self.terms {
            for (q, b) in &next.terms {
                if let Some(pq) = p.then(q) {
                    out.add_term(pq, a.clone() * b.clone());
                }
            }
        }
        out
    }

    /// Coefficient of the trivial path, if present.
    pub fn unit_part(&self) -> Option<&F> {
        self.terms.iter().find(|(p, _)| p.is_trivial()).map(|(_, c)| c)
    }

    pub fn opposite(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, c)| (p.opposite(), c.clone())))
    }
}

impl<F: Field> fmt::Debug for PathComb<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("{c}·{:?}", p.arrows())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Whether a path matrix maps between sums of projectives or of injectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Projective,
    Injective,
}

/// A morphism `⊕_i X_{d_i} → ⊕_j X_{c_j}` (`X` = `P` or `I`), where entry
/// `[j][i]` is a combination of paths `c_j ⇝ d_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PathMatrix<F> {
    side: Side,
    domain: Vec<Vertex>,
    codomain: Vec<Vertex>,
    entries: Vec<Vec<PathComb<F>>>,
}

impl<F: Field> fmt::Debug for PathMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PathMatrix({:?}, {:?} -> {:?}, {:?})", self.side, self.domain, self.codomain, self.entries)
    }
}

impl<F: Field> PathMatrix<F> {
    pub fn new(side: Side, domain: Vec<Vertex>, codomain: Vec<Vertex>, entries: Vec<Vec<PathComb<F>>>) -> Result<Self> {
        if entries.len() != codomain.len() || entries.iter().any(|r| r.len() != domain.len()) {
            return Err(Error::DimensionMismatch(format!(
                "path matrix needs {} rows of {} entries",
                codomain.len(),
                domain.len()
            )));
        }
        for (j, row) in entries.iter().enumerate() {
            for (i, e) in row.iter().enumerate() {
                for (p, _) in e.terms() {
                    if p.start() != codomain[j] || p.end() != domain[i] {
                        return Err(Error::Malformed(format!(
                            "entry [{j}][{i}] must run from {:?} to {:?}",
                            codomain[j], domain[i]
                        )));
                    }
                }
            }
        }
        Ok(PathMatrix { side, domain, codomain, entries })
    }

    pub fn zero(side: Side, domain: Vec<Vertex>, codomain: Vec<Vertex>) -> Self {
        let entries = vec![vec![PathComb::zero(); domain.len()]; codomain.len()];
        PathMatrix { side, domain, codomain, entries }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn domain(&self) -> &[Vertex] {
        &self.domain
    }

    pub fn codomain(&self) -> &[Vertex] {
        &self.codomain
    }

    pub fn entry(&self, j: usize, i: usize) -> &PathComb<F> {
        &self.entries[j][i]
    }

    pub fn entries(&self) -> &[Vec<PathComb<F>>] {
        &self.entries
    }

    /// The same entries read on the other side.
    pub fn nakayama(&self) -> Self {
        let side = match self.side {
            Side::Projective => Side::Injective,
            Side::Injective => Side::Projective,
        };
        PathMatrix { side, ..self.clone() }
    }

    /// True if some entry contains a trivial path with nonzero coefficient.
    pub fn has_unit_entry(&self) -> bool {
        self.entries.iter().flatten().any(|e| e.unit_part().is_some())
    }

    /// Basis of `X_x(v)`: paths `x ⇝ v` (projective) or `v ⇝ x` (injective).
    pub fn summand_basis(side: Side, q: &Quiver, x: Vertex, v: Vertex) -> Result<std::sync::Arc<Vec<Path>>> {
        match side {
            Side::Projective => q.paths_between(x, v),
            Side::Injective => q.paths_between(v, x),
        }
    }

    /// Dimensions of the summands at `v`.
    pub fn bases_at(side: Side, q: &Quiver, summands: &[Vertex], v: Vertex) -> Result<Vec<std::sync::Arc<Vec<Path>>>> {
        summands.iter().map(|&x| Self::summand_basis(side, q, x, v)).collect()
    }

    /// The linear map at vertex `v`.
    pub fn eval(&self, q: &Quiver, v: Vertex) -> Result<Mat<F>> {
        let dom = Self::bases_at(self.side, q, &self.domain, v)?;
        let cod = Self::bases_at(self.side, q, &self.codomain, v)?;
        let rows: usize = cod.iter().map(|b| b.len()).sum();
        let cols: usize = dom.iter().map(|b| b.len()).sum();
        let mut m = Mat::<F>::zeros(rows, cols);
        let mut col = 0;
        for (i, dbasis) in dom.iter().enumerate() {
            for p in dbasis.iter() {
                let mut row0 = 0;
                for (j, cbasis) in cod.iter().enumerate() {
                    for (path, c) in self.entries[j][i].terms() {
                        let target = match self.side {
                            Side::Projective => path.then(p),
                            Side::Injective => p.strip_suffix(path),
                        };
                        if let Some(t) = target {
                            let r = cbasis.binary_search(&t).expect("path lies in the summand basis");
                            let old = m.get(row0 + r, col).clone();
                            m.set(row0 + r, col, old + c.clone());
                        }
                    }
                    row0 += cbasis.len();
                }
                col += 1;
            }
        }
        Ok(m)
    }

    /// Composite `self ∘ first` where `first: ⊕X_{e} → ⊕X_{d}` (same side).
    pub fn compose_after(&self, first: &Self) -> Result<Self> {
        if self.side != first.side || self.domain != first.codomain {
            return Err(Error::DimensionMismatch("path matrices do not compose".into()));
        }
        let mut entries = vec![vec![PathComb::zero(); first.domain.len()]; self.codomain.len()];
        for (j, row) in entries.iter_mut().enumerate() {
            for (e, slot) in row.iter_mut().enumerate() {
                let mut acc = PathComb::zero();
                for i in 0..self.domain.len() {
                    // Projective: P_e → P_d → P_c gives q (c⇝d) then q' (d⇝e).
                    // Injective: the same concatenation c⇝d⇝e.
                    acc = acc.add(&self.entries[j][i].then(&first.entries[i][e]));
                }
                *slot = acc;
            }
        }
        Ok(PathMatrix { side: self.side, domain: first.domain.clone(), codomain: self.codomain.clone(), entries })
    }
}
