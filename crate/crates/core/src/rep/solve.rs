use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::field::Field;
use crate::linalg::Mat;
use crate::quiver::Vertex;
use crate::rep::Rep;

/// Families `(f_x)` on a finite vertex set commuting with every arrow between
/// two of its vertices: one particular solution plus a basis of the
/// homogeneous solutions.
#[derive(Clone)]
pub struct HomSolution<F> {
    pub vertices: BTreeSet<Vertex>,
    pub particular: BTreeMap<Vertex, Mat<F>>,
    pub kernel: Vec<BTreeMap<Vertex, Mat<F>>>,
}

impl<F: Field> HomSolution<F> {
    pub fn dim(&self) -> usize {
        self.kernel.len()
    }
}

/// Solves `N(α) f_x = f_y M(α)` for all arrows `α: x → y` inside
/// `vertices ∪ fixed`, with the values on `fixed` prescribed. Returns `None`
/// when the prescribed values admit no extension.
pub fn hom_on_vertices<F: Field>(
    dom: &Rep<F>,
    cod: &Rep<F>,
    vertices: &BTreeSet<Vertex>,
    fixed: &BTreeMap<Vertex, Mat<F>>,
) -> Result<Option<HomSolution<F>>> {
    let q = dom.quiver().clone();
    let all: BTreeSet<Vertex> = vertices.iter().chain(fixed.keys()).copied().collect();
    let mut shape = BTreeMap::new();
    for &v in &all {
        shape.insert(v, (cod.dim(v)?, dom.dim(v)?));
    }
    let mut offset = BTreeMap::new();
    let mut n = 0;
    for &v in vertices {
        if fixed.contains_key(&v) {
            continue;
        }
        let (r, c) = shape[&v];
        if r * c > 0 {
            offset.insert(v, n);
            n += r * c;
        }
    }
    let mut rows: Vec<(BTreeMap<usize, F>, F)> = Vec::new();
    for &x in &all {
        for a in q.out_arrows(x) {
            let y = a.dst;
            if !all.contains(&y) || !(offset.contains_key(&x) || offset.contains_key(&y)) {
                continue;
            }
            let (ny, my) = shape[&y];
            let (nx, mx) = shape[&x];
            if ny == 0 || mx == 0 {
                continue;
            }
            let na = cod.arrow_arc(a)?;
            let ma = dom.arrow_arc(a)?;
            for r in 0..ny {
                for c in 0..mx {
                    let mut coeffs: BTreeMap<usize, F> = BTreeMap::new();
                    let mut rhs = F::zero();
                    // + Σ_k N(α)[r][k] f_x[k][c]
                    for k in 0..nx {
                        let w = na.get(r, k);
                        if w.is_zero() {
                            continue;
                        }
                        if let Some(&o) = offset.get(&x) {
                            let e = coeffs.entry(o + k * mx + c).or_insert_with(F::zero);
                            *e = e.clone() + w.clone();
                        } else if let Some(fx) = fixed.get(&x) {
                            rhs = rhs - w.clone() * fx.get(k, c).clone();
                        }
                    }
                    // − Σ_k f_y[r][k] M(α)[k][c]
                    for k in 0..my {
                        let w = ma.get(k, c);
                        if w.is_zero() {
                            continue;
                        }
                        if let Some(&o) = offset.get(&y) {
                            let e = coeffs.entry(o + r * my + k).or_insert_with(F::zero);
                            *e = e.clone() - w.clone();
                        } else if let Some(fy) = fixed.get(&y) {
                            rhs = rhs + fy.get(r, k).clone() * w.clone();
                        }
                    }
                    coeffs.retain(|_, v| !v.is_zero());
                    if coeffs.is_empty() {
                        if !rhs.is_zero() {
                            return Ok(None);
                        }
                        continue;
                    }
                    rows.push((coeffs, rhs));
                }
            }
        }
    }
    let mut a = Mat::zeros(rows.len(), n + 1);
    for (i, (coeffs, rhs)) in rows.iter().enumerate() {
        for (j, v) in coeffs {
            a.set(i, *j, v.clone());
        }
        a.set(i, n, rhs.clone());
    }
    let rref = a.rref();
    if rref.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![F::zero(); n];
    for (i, &p) in rref.pivots.iter().enumerate() {
        x[p] = rref.reduced.get(i, n).clone();
    }
    let coeff = rref.reduced.block(0, 0, rref.reduced.rows(), n);
    let kern = rref_kernel(&coeff, &rref.pivots, n);
    let unpack = |vec: &[F], with_fixed: bool| -> BTreeMap<Vertex, Mat<F>> {
        let mut out = BTreeMap::new();
        for &v in &all {
            let (r, c) = shape[&v];
            let m = match (offset.get(&v), fixed.get(&v)) {
                (Some(&o), _) => Mat::from_vector(r, c, &vec[o..o + r * c]),
                (None, Some(f)) if with_fixed => f.clone(),
                _ => Mat::zeros(r, c),
            };
            out.insert(v, m);
        }
        out
    };
    let particular = unpack(&x, true);
    let kernel = kern.iter().map(|k| unpack(k, false)).collect();
    Ok(Some(HomSolution { vertices: all, particular, kernel }))
}

/// Kernel vectors of a matrix already in reduced row echelon form.
fn rref_kernel<F: Field>(reduced: &Mat<F>, pivots: &[usize], n: usize) -> Vec<Vec<F>> {
    let piv: BTreeSet<usize> = pivots.iter().copied().collect();
    let mut out = Vec::new();
    for f in (0..n).filter(|c| !piv.contains(c)) {
        let mut v = vec![F::zero(); n];
        v[f] = F::one();
        for (i, &p) in pivots.iter().enumerate() {
            let c = reduced.get(i, f);
            if !c.is_zero() {
                v[p] = -c.clone();
            }
        }
        out.push(v);
    }
    out
}
