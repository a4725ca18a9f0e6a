use std::fmt;

use crate::field::Field;
use crate::linalg::Mat;

/// Univariate polynomial, coefficients stored lowest degree first and
/// trimmed so that the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![F::one()] }
    }

    /// The monomial `t`.
    pub fn x() -> Self {
        Poly { coeffs: vec![F::zero(), F::one()] }
    }

    /// `t - a`.
    pub fn linear(a: F) -> Self {
        Poly { coeffs: vec![-a, F::one()] }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.inverse().expect("nonzero leading coefficient");
                Poly::new(self.coeffs.iter().map(|c| c.clone() * inv.clone()).collect())
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(F::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(F::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().unwrap().inverse().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![F::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap().clone() * lead_inv.clone();
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[k + i] = r[k + i].clone() - c.clone() * dc.clone();
                }
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) && r.len() > dd {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, u, v)` with `u·self + v·other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.inverse().unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Evaluates at a square matrix (Horner).
    pub fn eval_mat(&self, m: &Mat<F>) -> Mat<F> {
        let n = m.rows();
        let mut acc = Mat::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&Mat::identity(n).scale(c));
        }
        acc
    }

    /// Squarefree factorisation (Yun). Returns `(factor, multiplicity)`
    /// pairs of monic pairwise coprime factors. In positive characteristic
    /// p-th power factors may be missing from the output.
    pub fn squarefree(&self) -> Vec<(Self, usize)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let d = f.derivative();
        if d.is_zero() {
            return vec![(f, 1)];
        }
        let mut out = Vec::new();
        let a0 = f.gcd(&d);
        let (mut b, _) = f.divrem(&a0);
        let (c, _) = d.divrem(&a0);
        let mut dd = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&dd);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            let (nb, _) = b.divrem(&a);
            let (nc, _) = dd.divrem(&a);
            b = nb;
            dd = nc.sub(&b.derivative());
            i += 1;
            if i > self.coeffs.len() + 1 {
                break;
            }
        }
        out
    }

    /// Roots in the field, without multiplicity.
    pub fn roots(&self) -> Vec<F> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out: Vec<F> = F::root_candidates(&self.coeffs)
            .into_iter()
            .filter(|r| self.eval(r).is_zero())
            .collect();
        out.dedup();
        out
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rat, F5};

    fn p(c: &[i64]) -> Poly<Rat> {
        Poly::new(c.iter().map(|&x| Rat::from_i64(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // t^2 - 1
        let b = p(&[-1, 1]); // t - 1
        let (q, r) = a.divrem(&b);
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[1, 1])), p(&[1, 1]));
        let (g, u, v) = a.xgcd(&p(&[2, 1]));
        assert_eq!(g, Poly::one());
        assert_eq!(u.mul(&a).add(&v.mul(&p(&[2, 1]))), g);
    }

    #[test]
    fn squarefree_multiplicities() {
        // (t - 1)^2 (t + 2)
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        let sf = f.squarefree();
        assert_eq!(sf, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
        let mut roots = f.roots();
        roots.sort();
        assert_eq!(roots, vec![Rat::from_i64(-2), Rat::from_i64(1)]);
    }

    #[test]
    fn roots_in_prime_field() {
        let f: Poly<F5> = Poly::new(vec![F5::from_i64(1), F5::from_i64(0), F5::from_i64(1)]);
        // t^2 + 1 = (t - 2)(t - 3) over F5
        assert_eq!(f.roots(), vec![F5::from_i64(2), F5::from_i64(3)]);
    }

    #[test]
    fn matrix_evaluation() {
        let m = Mat::<Rat>::from_i64(&[&[1, 1], &[0, 1]]);
        let mp = m.min_poly();
        assert_eq!(mp, p(&[1, -2, 1]));
        assert!(mp.eval_mat(&m).is_zero());
    }
}
