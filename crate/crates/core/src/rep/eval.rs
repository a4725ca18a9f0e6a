use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Mat, Quotient, Subspace};
use crate::quiver::{Arrow, Path, Vertex};
use crate::rep::{PathMatrix, Rep, RepNode, Side};

/// The value of a representation at a vertex, with the data needed to
/// evaluate arrow maps in the canonical basis.
pub struct VertexSpace<F> {
    pub dim: usize,
    pub(crate) aux: Aux<F>,
}

pub(crate) enum Aux<F> {
    Plain,
    Paths(Arc<Vec<Path>>),
    Quot { bases: Vec<Arc<Vec<Path>>>, quot: Quotient<F> },
    Kern { bases: Vec<Arc<Vec<Path>>>, sub: Subspace<F> },
    Sub(Subspace<F>),
    QuotOf(Quotient<F>),
}

/// Block-diagonal map of a sum of projectives (or injectives) along an arrow.
fn summand_arrow_map<F: Field>(side: Side, from: &[Arc<Vec<Path>>], to: &[Arc<Vec<Path>>], a: Arrow) -> Mat<F> {
    let rows: usize = to.iter().map(|b| b.len()).sum();
    let cols: usize = from.iter().map(|b| b.len()).sum();
    let mut m = Mat::zeros(rows, cols);
    let step = Path::arrow(a);
    let (mut r0, mut c0) = (0, 0);
    for (fb, tb) in from.iter().zip(to) {
        for (c, p) in fb.iter().enumerate() {
            let image = match side {
                Side::Projective => p.then(&step),
                Side::Injective => p.strip_prefix(&step),
            };
            if let Some(t) = image {
                if let Ok(r) = tb.binary_search(&t) {
                    m.set(r0 + r, c0 + c, F::one());
                }
            }
        }
        r0 += tb.len();
        c0 += fb.len();
    }
    m
}

impl<F: Field> Rep<F> {
    /// The space at `v`; errors if `v` is not a vertex.
    pub fn evaluate(&self, v: Vertex) -> Result<Arc<VertexSpace<F>>> {
        self.quiver().check_vertex(v)?;
        self.space(v)
    }

    /// Basis labels at `v`.
    pub fn basis_labels(&self, v: Vertex) -> Result<Vec<String>> {
        self.quiver().check_vertex(v)?;
        let q = self.quiver();
        let sp = self.space(v)?;
        Ok(match (&sp.aux, self.node()) {
            (Aux::Paths(p), _) => p.iter().map(|p| q.path_label(p)).collect(),
            (_, RepNode::Explicit(d)) => d
                .labels
                .get(&v)
                .cloned()
                .unwrap_or_else(|| (0..sp.dim).map(|i| format!("x{i}")).collect()),
            (Aux::Quot { bases, quot }, _) => {
                let all: Vec<String> = bases.iter().flat_map(|b| b.iter().map(|p| q.path_label(p))).collect();
                quot.complement().iter().map(|&k| format!("[{}]", all[k])).collect()
            }
            (_, RepNode::Glue { sub, quot, .. }) => {
                let mut l = sub.basis_labels(v)?;
                l.extend(quot.basis_labels(v)?.into_iter().map(|s| format!("{s}'")));
                l
            }
            (_, RepNode::DirectSum(parts)) => {
                let mut l = Vec::new();
                for (i, p) in parts.iter().enumerate() {
                    l.extend(p.basis_labels(v)?.into_iter().map(|s| format!("{i}.{s}")));
                }
                l
            }
            (_, RepNode::Dual(m)) => m.basis_labels(v)?.into_iter().map(|s| format!("{s}*")).collect(),
            (_, RepNode::Restrict(m, _)) if sp.dim > 0 => m.basis_labels(v)?,
            _ => (0..sp.dim).map(|i| format!("e{i}")).collect(),
        })
    }

    pub(crate) fn space(&self, v: Vertex) -> Result<Arc<VertexSpace<F>>> {
        if let Some(s) = self.0.spaces.lock().get(&v) {
            return Ok(s.clone());
        }
        let s = Arc::new(self.compute_space(v)?);
        self.0.spaces.lock().insert(v, s.clone());
        Ok(s)
    }

    fn compute_space(&self, v: Vertex) -> Result<VertexSpace<F>> {
        let q = self.quiver();
        let plain = |dim| VertexSpace { dim, aux: Aux::Plain };
        if !q.contains(v) {
            return Ok(plain(0));
        }
        Ok(match self.node() {
            RepNode::Zero => plain(0),
            RepNode::Explicit(d) => plain(d.dims.get(&v).copied().unwrap_or(0)),
            RepNode::Proj(a) => {
                let p = q.paths_between(*a, v)?;
                VertexSpace { dim: p.len(), aux: Aux::Paths(p) }
            }
            RepNode::Inj(a) => {
                let p = q.paths_between(v, *a)?;
                VertexSpace { dim: p.len(), aux: Aux::Paths(p) }
            }
            RepNode::Simple(a) => plain(usize::from(*a == v)),
            RepNode::Thin(s) => plain(usize::from(s.contains(q, v))),
            RepNode::CokerProj(pm) => {
                let bases = PathMatrix::<F>::bases_at(Side::Projective, q, pm.codomain(), v)?;
                let quot = Quotient::by_span(&pm.eval(q, v)?);
                VertexSpace { dim: quot.dim(), aux: Aux::Quot { bases, quot } }
            }
            RepNode::KerInj(pm) => {
                let bases = PathMatrix::<F>::bases_at(Side::Injective, q, pm.domain(), v)?;
                let sub = Subspace::kernel_of(&pm.eval(q, v)?);
                VertexSpace { dim: sub.dim(), aux: Aux::Kern { bases, sub } }
            }
            RepNode::Glue { sub, quot, .. } => plain(sub.dim(v)? + quot.dim(v)?),
            RepNode::DirectSum(parts) => plain(parts.iter().map(|p| p.dim(v)).sum::<Result<usize>>()?),
            RepNode::Dual(m) => plain(m.dim(v)?),
            RepNode::Restrict(m, s) => plain(if s.contains(q, v) { m.dim(v)? } else { 0 }),
            RepNode::Kernel(f) => {
                let sub = Subspace::kernel_of(&f.at(v)?);
                VertexSpace { dim: sub.dim(), aux: Aux::Sub(sub) }
            }
            RepNode::Image(f) => {
                let sub = Subspace::span(&f.at(v)?);
                VertexSpace { dim: sub.dim(), aux: Aux::Sub(sub) }
            }
            RepNode::Cokernel(f) => {
                let quot = Quotient::by_span(&f.at(v)?);
                VertexSpace { dim: quot.dim(), aux: Aux::QuotOf(quot) }
            }
        })
    }

    /// The map `M(α)`; errors if `α` is not an arrow of the quiver.
    pub fn evaluate_arrow(&self, a: Arrow) -> Result<Arc<Mat<F>>> {
        if !self.quiver().out_arrows(a.src).contains(&a) {
            return Err(Error::OutOfRange(format!("{a:?} is not an arrow of {}", self.quiver().describe())));
        }
        self.arrow_arc(a)
    }

    /// `M(α)` as an owned matrix (no arrow validation).
    pub fn arrow_map(&self, a: Arrow) -> Result<Mat<F>> {
        Ok((*self.arrow_arc(a)?).clone())
    }

    pub(crate) fn arrow_arc(&self, a: Arrow) -> Result<Arc<Mat<F>>> {
        if let Some(m) = self.0.arrows.lock().get(&a) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.compute_arrow(a)?);
        self.0.arrows.lock().insert(a, m.clone());
        Ok(m)
    }

    fn compute_arrow(&self, a: Arrow) -> Result<Mat<F>> {
        let (x, y) = (a.src, a.dst);
        let sx = self.space(x)?;
        let sy = self.space(y)?;
        let zero = || Mat::zeros(sy.dim, sx.dim);
        if sx.dim == 0 || sy.dim == 0 {
            return Ok(zero());
        }
        let q = self.quiver();
        Ok(match self.node() {
            RepNode::Zero | RepNode::Simple(_) => zero(),
            RepNode::Explicit(d) => d.maps.get(&a).cloned().unwrap_or_else(zero),
            RepNode::Thin(_) => Mat::identity(1),
            RepNode::Proj(_) | RepNode::Inj(_) => {
                let side = if matches!(self.node(), RepNode::Proj(_)) { Side::Projective } else { Side::Injective };
                match (&sx.aux, &sy.aux) {
                    (Aux::Paths(px), Aux::Paths(py)) => summand_arrow_map(side, &[px.clone()], &[py.clone()], a),
                    _ => unreachable!("path spaces"),
                }
            }
            RepNode::CokerProj(_) => match (&sx.aux, &sy.aux) {
                (Aux::Quot { bases: bx, quot: qx }, Aux::Quot { bases: by, quot: qy }) => {
                    let b = summand_arrow_map(Side::Projective, bx, by, a);
                    qy.induced(qx, &b)
                }
                _ => unreachable!("quotient spaces"),
            },
            RepNode::KerInj(_) => match (&sx.aux, &sy.aux) {
                (Aux::Kern { bases: bx, sub: ux }, Aux::Kern { bases: by, sub: uy }) => {
                    let b = summand_arrow_map(Side::Injective, bx, by, a);
                    uy.coord_map().mul(&b).mul(ux.basis())
                }
                _ => unreachable!("kernel spaces"),
            },
            RepNode::Glue { sub, quot, cocycle } => {
                let (lx, ly) = (sub.dim(x)?, sub.dim(y)?);
                let mut m = zero();
                m.paste(0, 0, &sub.arrow_map(a)?);
                m.paste(ly, lx, &quot.arrow_map(a)?);
                if let Some(c) = cocycle.entries.get(&a) {
                    m.paste(0, lx, c);
                }
                m
            }
            RepNode::DirectSum(parts) => {
                let blocks: Vec<Mat<F>> = parts.iter().map(|p| p.arrow_map(a)).collect::<Result<_>>()?;
                Mat::block_diag(&blocks.iter().collect::<Vec<_>>())
            }
            RepNode::Dual(m) => m.arrow_map(a.flipped())?.transpose(),
            RepNode::Restrict(m, s) => {
                if s.contains(q, x) && s.contains(q, y) {
                    m.arrow_map(a)?
                } else {
                    zero()
                }
            }
            RepNode::Kernel(f) => match (&sx.aux, &sy.aux) {
                (Aux::Sub(ux), Aux::Sub(uy)) => uy.coord_map().mul(&f.domain().arrow_map(a)?).mul(ux.basis()),
                _ => unreachable!("kernel spaces"),
            },
            RepNode::Image(f) => match (&sx.aux, &sy.aux) {
                (Aux::Sub(ux), Aux::Sub(uy)) => uy.coord_map().mul(&f.codomain().arrow_map(a)?).mul(ux.basis()),
                _ => unreachable!("image spaces"),
            },
            RepNode::Cokernel(f) => match (&sx.aux, &sy.aux) {
                (Aux::QuotOf(qx), Aux::QuotOf(qy)) => qy.induced(qx, &f.codomain().arrow_map(a)?),
                _ => unreachable!("cokernel spaces"),
            },
        })
    }
}
