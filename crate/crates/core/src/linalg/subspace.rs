use crate::field::Field;
use crate::linalg::Mat;

/// A subspace `U ⊆ F^n` in normal form.
///
/// The basis vectors `b_0, ..., b_{k-1}` (columns of `basis`) satisfy
/// `b_i[pivots[j]] = δ_ij`, so coordinates of a vector of `U` are read off
/// at the pivot positions.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Mat<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// Span of the columns of `gens` (an `n × m` matrix).
    pub fn span(gens: &Mat<F>) -> Self {
        let n = gens.rows();
        let r = gens.transpose().rref();
        let k = r.pivots.len();
        let basis = Mat::from_fn(n, k, |i, j| r.reduced.get(j, i).clone());
        Subspace { ambient: n, basis, pivots: r.pivots }
    }

    /// Null space of `a`, basis in free-variable form.
    pub fn kernel_of(a: &Mat<F>) -> Self {
        let basis = a.kernel();
        let pivots = a.kernel_free_columns();
        Subspace { ambient: a.cols(), basis, pivots }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: Mat::identity(n), pivots: (0..n).collect() }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: Mat::zeros(n, 0), pivots: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Inclusion `F^k → F^n`.
    pub fn basis(&self) -> &Mat<F> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let c = self.coords_unchecked(v);
        self.basis.apply(&c) == v
    }

    fn coords_unchecked(&self, v: &[F]) -> Vec<F> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    /// Coordinates of `v` in the normal basis, `None` if `v ∉ U`.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        let c = self.coords_unchecked(v);
        (self.basis.apply(&c) == v).then_some(c)
    }

    /// Matrix `k × n` sending a vector of `U` to its coordinates (valid only
    /// on `U`).
    pub fn coord_map(&self) -> Mat<F> {
        Mat::from_fn(self.dim(), self.ambient, |i, j| if self.pivots[i] == j { F::one() } else { F::zero() })
    }

    /// Coordinates of the columns of `m`, which must lie in `U`.
    pub fn coords_of_columns(&self, m: &Mat<F>) -> Option<Mat<F>> {
        let c = self.coord_map().mul(m);
        (self.basis.mul(&c) == *m).then_some(c)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.columns().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        Subspace::span(&Mat::hstack(&[&self.basis, &other.basis], self.ambient))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let m = Mat::hstack(&[&self.basis, &other.basis.neg()], self.ambient);
        let k = m.kernel();
        let left = k.block(0, 0, self.dim(), k.cols());
        Subspace::span(&self.basis.mul(&left))
    }
}

/// Quotient `F^n / U` with a canonical complement: the standard basis
/// vectors at positions outside the pivots of `U`.
#[derive(Clone, PartialEq, Eq)]
pub struct Quotient<F> {
    sub: Subspace<F>,
    complement: Vec<usize>,
    projection: Mat<F>,
}

impl<F: Field> Quotient<F> {
    pub fn new(sub: Subspace<F>) -> Self {
        let n = sub.ambient();
        let complement: Vec<usize> = (0..n).filter(|i| !sub.pivots.contains(i)).collect();
        // π(v) = (v - Σ_j v[p_j] b_j) restricted to the complement indices.
        let mut projection = Mat::zeros(complement.len(), n);
        for (r, &k) in complement.iter().enumerate() {
            projection.set(r, k, F::one());
            for (j, &p) in sub.pivots.iter().enumerate() {
                let b = sub.basis.get(k, j);
                if !b.is_zero() {
                    projection.set(r, p, -b.clone());
                }
            }
        }
        Quotient { sub, complement, projection }
    }

    /// Quotient of `F^n` by the column space of `gens`.
    pub fn by_span(gens: &Mat<F>) -> Self {
        Self::new(Subspace::span(gens))
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient()
    }

    pub fn sub(&self) -> &Subspace<F> {
        &self.sub
    }

    /// Ambient indices whose images form the quotient basis.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// `F^n → F^n/U`.
    pub fn projection(&self) -> &Mat<F> {
        &self.projection
    }

    /// Section `F^n/U → F^n` onto the complement.
    pub fn section(&self) -> Mat<F> {
        Mat::from_fn(self.ambient(), self.dim(), |i, j| if self.complement[j] == i { F::one() } else { F::zero() })
    }

    /// Induced map `F^m/U' → F^n/U` from `a: F^m → F^n`, given the source
    /// quotient.
    pub fn induced(&self, source: &Quotient<F>, a: &Mat<F>) -> Mat<F> {
        self.projection.mul(a).mul(&source.section())
    }
}

impl<F: Field> std::fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of {}, {:?})", self.dim(), self.ambient, self.basis)
    }
}

impl<F: Field> std::fmt::Debug for Quotient<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Quotient(dim {} of {}, complement {:?})", self.dim(), self.ambient(), self.complement)
    }
}
