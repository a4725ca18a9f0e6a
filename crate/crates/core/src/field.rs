//! Exact scalar fields.
//!
//! Every computation in the crate is generic over [`Field`]. Two families are
//! provided: the rationals ([`num_rational::BigRational`]) and prime fields
//! [`Fp<P>`] with a compile-time modulus.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// A commutative field with exact arithmetic.
pub trait Field:
    Num + Clone + fmt::Debug + fmt::Display + Neg<Output = Self> + Hash + Eq + Send + Sync + 'static
{
    /// Characteristic of the field (`0` for the rationals).
    fn characteristic() -> u64;

    /// Short name used in reports and JSON files, e.g. `"Q"` or `"F5"`.
    fn name() -> String;

    fn from_i64(n: i64) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// Parses `"3"`, `"-1/2"` (rationals) or a residue (prime fields).
    fn parse_scalar(s: &str) -> Option<Self>;

    /// Finite list of candidates containing every root in the field of the
    /// polynomial with the given coefficients (lowest degree first).
    fn root_candidates(coeffs: &[Self]) -> Vec<Self>;

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Field for BigRational {
    fn characteristic() -> u64 {
        0
    }

    fn name() -> String {
        "Q".to_string()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).ok()?;
                let d = BigInt::from_str(d.trim()).ok()?;
                if d.is_zero() {
                    None
                } else {
                    Some(BigRational::new(n, d))
                }
            }
            None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        }
    }

    fn root_candidates(coeffs: &[Self]) -> Vec<Self> {
        rational_root_candidates(coeffs)
    }
}

/// Rational root test: clear denominators, then every root is `±p/q` with
/// `p | a_0` and `q | a_n`.
fn rational_root_candidates(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut c: Vec<BigRational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // strip factors of t: zero is a root.
    let shift = c.iter().take_while(|x| x.is_zero()).count();
    if shift > 0 {
        out.push(BigRational::zero());
        c.drain(..shift);
    }
    if c.len() <= 1 {
        return out;
    }
    let lcm = c
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    let (Some(p_divs), Some(q_divs)) = (small_divisors(&a0), small_divisors(&an)) else {
        return out;
    };
    for p in &p_divs {
        for q in &q_divs {
            for sign in [1i64, -1] {
                let r = BigRational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.to_u64()?;
    if n > 1 << 40 {
        return None;
    }
    let mut ds = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            ds.push(d);
            if d * d != n {
                ds.push(n / d);
            }
        }
        d += 1;
    }
    ds.sort_unstable();
    Some(ds)
}

/// The prime field with `P` elements. `P` must be prime.
///
/// ```
/// use arknit_core::field::{Field, Fp};
/// let x = Fp::<5>::from_i64(3);
/// assert_eq!(x.inverse(), Some(Fp::<5>::from_i64(2)));
/// ```
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(n: u64) -> Self {
        Fp(n % P)
    }

    pub fn residue(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in a prime field")
    }
}

impl<const P: u64> Rem for Fp<P> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "remainder by zero in a prime field");
        Fp(0)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Num for Fp<P> {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let v = i128::from_str_radix(s, radix)?;
        Ok(Fp(v.rem_euclid(P as i128) as u64))
    }
}

impl<const P: u64> Field for Fp<P> {
    fn characteristic() -> u64 {
        P
    }

    fn name() -> String {
        format!("F{P}")
    }

    fn from_i64(n: i64) -> Self {
        Fp((n as i128).rem_euclid(P as i128) as u64)
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = Self::parse_scalar(n)?;
                let d = Self::parse_scalar(d)?;
                d.inverse().map(|d| n * d)
            }
            None => s.parse::<i128>().ok().map(|v| Fp(v.rem_euclid(P as i128) as u64)),
        }
    }

    fn root_candidates(_coeffs: &[Self]) -> Vec<Self> {
        if P <= 4096 {
            (0..P).map(Fp).collect()
        } else {
            Vec::new()
        }
    }
}

/// Converts a small integer into any field.
pub fn scalar<F: Field>(n: i64) -> F {
    F::from_i64(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        type F7 = Fp<7>;
        let a = F7::from_i64(3);
        let b = F7::from_i64(5);
        assert_eq!(a + b, F7::from_i64(1));
        assert_eq!(a - b, F7::from_i64(5));
        assert_eq!(a * b, F7::from_i64(1));
        assert_eq!(-a, F7::from_i64(4));
        assert_eq!(a / b, F7::from_i64(2));
        assert_eq!(F7::parse_scalar("1/2"), Some(F7::from_i64(4)));
        assert_eq!(F7::from_i64(-1), F7::from_i64(6));
    }

    #[test]
    fn rational_parsing() {
        let x = BigRational::parse_scalar("-3/6").unwrap();
        assert_eq!(x, BigRational::new((-1).into(), 2.into()));
        assert!(BigRational::parse_scalar("1/0").is_none());
        assert_eq!(format!("{x}"), "-1/2");
    }

    #[test]
    fn rational_roots_include_actual_roots() {
        // 2t^2 - 3t + 1 = (2t - 1)(t - 1)
        let c: Vec<BigRational> = [1, -3, 2].iter().map(|&n| BigRational::from_i64(n)).collect();
        let cands = BigRational::root_candidates(&c);
        assert!(cands.contains(&BigRational::new(1.into(), 2.into())));
        assert!(cands.contains(&BigRational::from_i64(1)));
    }
}
