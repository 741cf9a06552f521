//! Exact arithmetic in cyclotomic fields.
//!
//! An element of Q(ζ_n) is stored over the Zumbroich basis of its smallest
//! cyclotomic field, so that equality of values is equality of structures.
//! Every constructor and operation returns the canonical form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero")]
    DivisionByZero,
}

/// A cyclotomic field, identified by its conductor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloField {
    conductor: u64,
}

impl CycloField {
    /// Q(ζ_n); conductors 2 mod 4 are replaced by the equal smaller field.
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let c = if n % 4 == 2 { n / 2 } else { n };
        CycloField { conductor: c }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn rationals() -> Self {
        CycloField { conductor: 1 }
    }

    pub fn join(&self, other: &CycloField) -> CycloField {
        CycloField::new(self.conductor.lcm(&other.conductor))
    }
}

/// Exact element of a cyclotomic field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclo {
    n: u64,
    coeffs: BTreeMap<u64, BigRational>,
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = (a as i64).extended_gcd(&(m as i64));
    assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m as i64) as u64
}

/// Rewrites `v` (indexed by exponents mod n) over the Zumbroich basis.
fn zumbroich_reduce(n: u64, v: &mut [BigRational]) {
    for (p, nu) in factorize(n) {
        let q = p.pow(nu);
        let eq = inv_mod((n / q) % q, q);
        let top = q / p;
        let step = n / p;
        for k in 0..n {
            if v[k as usize].is_zero() {
                continue;
            }
            let digit = ((k % q) * eq % q) / top;
            if p == 2 {
                if digit == 1 {
                    let c = std::mem::take(&mut v[k as usize]);
                    let j = ((k + n - step) % n) as usize;
                    v[j] -= c;
                }
            } else if digit == 0 {
                let c = std::mem::take(&mut v[k as usize]);
                for a in 1..p {
                    let j = ((k + a * step) % n) as usize;
                    v[j] -= &c;
                }
            }
        }
    }
}

fn support(v: &[BigRational]) -> impl Iterator<Item = u64> + '_ {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, _)| k as u64)
}

/// One descent step to a proper subfield, if the element lives there.
fn descend(n: u64, v: &[BigRational]) -> Option<(u64, Vec<BigRational>)> {
    for (p, nu) in factorize(n) {
        let shrink = if p == 2 {
            match nu {
                0 | 1 => None,
                2 => Some(4),
                _ => Some(2),
            }
        } else if nu >= 2 {
            Some(p)
        } else {
            None
        };
        if let Some(f) = shrink {
            if support(v).all(|k| k % f == 0) {
                let m = n / f;
                let mut w = vec![BigRational::zero(); m as usize];
                for k in support(v) {
                    w[(k / f) as usize] = v[k as usize].clone();
                }
                return Some((m, w));
            }
            continue;
        }
        if p == 2 {
            continue;
        }
        // p exactly divides n: test membership in Q(ζ_{n/p})
        let m = n / p;
        let ep = inv_mod(m % p, p);
        let mut bases: BTreeMap<u64, BigRational> = BTreeMap::new();
        let mut ok = true;
        for k in support(v) {
            let c = (k % p) * ep % p;
            let b = (k + n - (c * m) % n) % n;
            if bases.contains_key(&b) {
                continue;
            }
            let val = v[k as usize].clone();
            for a in 1..p {
                if v[((b + a * m) % n) as usize] != val {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
            bases.insert(b, val);
        }
        if ok {
            let mut w = vec![BigRational::zero(); m as usize];
            for (b, val) in bases {
                w[(b / p) as usize] -= val;
            }
            zumbroich_reduce(m, &mut w);
            return Some((m, w));
        }
    }
    None
}

impl Cyclo {
    fn from_dense(n: u64, mut v: Vec<BigRational>) -> Cyclo {
        zumbroich_reduce(n, &mut v);
        let (mut n, mut v) = (n, v);
        while let Some((m, w)) = descend(n, &v) {
            n = m;
            v = w;
            zumbroich_reduce(n, &mut v);
        }
        let coeffs: BTreeMap<u64, BigRational> = v
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u64, c))
            .collect();
        if coeffs.is_empty() {
            return Cyclo::zero();
        }
        Cyclo { n, coeffs }
    }

    fn dense(&self, big: u64) -> Vec<BigRational> {
        let f = big / self.n;
        let mut v = vec![BigRational::zero(); big as usize];
        for (k, c) in &self.coeffs {
            v[(k * f) as usize] = c.clone();
        }
        v
    }

    pub fn zero() -> Cyclo {
        Cyclo { n: 1, coeffs: BTreeMap::new() }
    }

    pub fn one() -> Cyclo {
        Cyclo::from_rational(BigRational::one())
    }

    pub fn from_int(a: i64) -> Cyclo {
        Cyclo::from_rational(BigRational::from_integer(BigInt::from(a)))
    }

    pub fn from_frac(p: i64, q: i64) -> Cyclo {
        Cyclo::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(r: BigRational) -> Cyclo {
        if r.is_zero() {
            return Cyclo::zero();
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, r);
        Cyclo { n: 1, coeffs }
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u64, k: i64) -> Cyclo {
        assert!(n >= 1, "root of unity of order 0");
        let (n, k) = if n % 4 == 2 { (2 * n, 2 * k) } else { (n, k) };
        let mut v = vec![BigRational::zero(); n as usize];
        v[k.rem_euclid(n as i64) as usize] = BigRational::one();
        Cyclo::from_dense(n, v)
    }

    /// exp(2πi·r) for a rational r.
    pub fn exp2pii(r: &BigRational) -> Cyclo {
        let d = r.denom().to_u64().expect("denominator too large");
        let num = r.numer().mod_floor(&BigInt::from(d)).to_i64().unwrap();
        Cyclo::root_of_unity(d, num)
    }

    /// The square root of an integer d given by a Gauss sum: positive real
    /// for d > 0 and i·sqrt(|d|) for d < 0.
    pub fn sqrt(d: i64) -> Cyclo {
        if d == 0 {
            return Cyclo::zero();
        }
        let mut out = Cyclo::one();
        if d < 0 {
            out = Cyclo::root_of_unity(4, 1);
        }
        for (p, e) in factorize(d.unsigned_abs()) {
            out = out * Cyclo::from_int(p.pow(e / 2) as i64);
            if e % 2 == 0 {
                continue;
            }
            let s = if p == 2 {
                Cyclo::root_of_unity(8, 1) - Cyclo::root_of_unity(8, 3)
            } else {
                // Gauss sum: sqrt(p) for p = 1 mod 4, i*sqrt(p) for p = 3 mod 4
                let mut g = Cyclo::zero();
                for a in 1..p {
                    let leg = if (1..p).any(|x| x * x % p == a) { 1 } else { -1 };
                    g = g + Cyclo::from_int(leg) * Cyclo::root_of_unity(p, a as i64);
                }
                if p % 4 == 3 {
                    g * Cyclo::root_of_unity(4, 3)
                } else {
                    g
                }
            };
            out = out * s;
        }
        out
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn field(&self) -> CycloField {
        CycloField::new(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Cyclo::one()
    }

    /// Pairs (k, c) meaning c·ζ_n^k over the canonical basis.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.n != 1 {
            return None;
        }
        Some(self.coeffs.get(&0).cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    /// True when all canonical coefficients are integers; the Zumbroich
    /// basis is an integral basis, so this is the algebraic-integer test.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn conj(&self) -> Cyclo {
        self.galois(-1)
    }

    /// The Galois automorphism ζ ↦ ζ^j (j prime to the conductor).
    pub fn galois(&self, j: i64) -> Cyclo {
        let n = self.n;
        if n == 1 {
            return self.clone();
        }
        let j = j.rem_euclid(n as i64) as u64;
        assert_eq!(j.gcd(&n), 1, "not a Galois automorphism");
        let mut v = vec![BigRational::zero(); n as usize];
        for (k, c) in &self.coeffs {
            v[(k * j % n) as usize] += c;
        }
        Cyclo::from_dense(n, v)
    }

    pub fn inv(&self) -> Result<Cyclo, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Cyclo::from_rational(r.recip()));
        }
        let n = self.n;
        let mut others = Cyclo::one();
        for j in 2..n {
            if j.gcd(&n) == 1 {
                others = others * self.galois(j as i64);
            }
        }
        let norm = (self * &others).as_rational().expect("norm is rational");
        Ok(others * Cyclo::from_rational(norm.recip()))
    }

    pub fn checked_div(&self, other: &Cyclo) -> Result<Cyclo, CycloError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Cyclo {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclo::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// If the element is a root of unity, returns (d, k) with value ζ_d^k,
    /// d the exact multiplicative order and 0 ≤ k < d.
    pub fn root_of_unity_exponent(&self) -> Option<(u64, u64)> {
        if self.is_zero() {
            return None;
        }
        let m = if self.n % 2 == 0 { self.n } else { 2 * self.n };
        for k in 0..m {
            if Cyclo::root_of_unity(m, k as i64) == *self {
                let g = k.gcd(&m);
                let d = m / g.max(1);
                let d = if k == 0 { 1 } else { d };
                return Some((d, if k == 0 { 0 } else { k / g }));
            }
        }
        None
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.root_of_unity_exponent().is_some()
    }

    /// |z|², which is totally real but in general not rational.
    pub fn norm_sq(&self) -> Cyclo {
        self * &self.conj()
    }

    /// Sign of a rational element, None otherwise.
    pub fn rational_sign(&self) -> Option<i32> {
        self.as_rational().map(|r| {
            if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }
        })
    }

    fn binop(&self, other: &Cyclo, f: impl Fn(&mut BigRational, &BigRational)) -> Cyclo {
        let big = self.n.lcm(&other.n);
        let mut v = self.dense(big);
        let fac = big / other.n;
        for (k, c) in &other.coeffs {
            f(&mut v[(k * fac) as usize], c);
        }
        Cyclo::from_dense(big, v)
    }

    fn mul_impl(&self, other: &Cyclo) -> Cyclo {
        if self.is_zero() || other.is_zero() {
            return Cyclo::zero();
        }
        if let Some(r) = other.as_rational() {
            let coeffs = self.coeffs.iter().map(|(k, c)| (*k, c * &r)).collect();
            return Cyclo { n: self.n, coeffs };
        }
        if let Some(r) = self.as_rational() {
            let coeffs = other.coeffs.iter().map(|(k, c)| (*k, c * &r)).collect();
            return Cyclo { n: other.n, coeffs };
        }
        let big = self.n.lcm(&other.n);
        let (fa, fb) = (big / self.n, big / other.n);
        let mut v = vec![BigRational::zero(); big as usize];
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                v[((ka * fa + kb * fb) % big) as usize] += ca * cb;
            }
        }
        Cyclo::from_dense(big, v)
    }
}

impl Default for Cyclo {
    fn default() -> Self {
        Cyclo::zero()
    }
}

impl From<i64> for Cyclo {
    fn from(a: i64) -> Self {
        Cyclo::from_int(a)
    }
}

impl From<BigRational> for Cyclo {
    fn from(r: BigRational) -> Self {
        Cyclo::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Cyclo> for &'a Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &'a Cyclo) -> Cyclo {
                let f: fn(&Cyclo, &Cyclo) -> Cyclo = $body;
                f(self, rhs)
            }
        }
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &'a Cyclo) -> Cyclo {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Cyclo> for &'a Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.binop(b, |x, y| *x += y));
forward_binop!(Sub, sub, |a, b| a.binop(b, |x, y| *x -= y));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));
forward_binop!(Div, div, |a, b| a.checked_div(b).expect("division by zero"));

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &Cyclo) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Cyclo> for Cyclo {
    fn mul_assign(&mut self, rhs: &Cyclo) {
        *self = &*self * rhs;
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.coeffs {
            let body = if *k == 0 || self.n == 1 {
                format!("{}", c.abs())
            } else {
                format!("{}*E({},{})", c.abs(), self.n, k)
            };
            if c.is_negative() {
                write!(f, "-{body}")?;
            } else if first {
                write!(f, "{body}")?;
            } else {
                write!(f, "+{body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u64, k: i64) -> Cyclo {
        Cyclo::root_of_unity(n, k)
    }

    #[test]
    fn vanishing_sums() {
        assert_eq!(e(1, 0), Cyclo::one());
        assert_eq!(e(3, 1) + e(3, 2), Cyclo::from_int(-1));
        for n in [5u64, 7, 8, 9, 12, 15, 16, 20, 36] {
            let mut s = Cyclo::zero();
            for k in 0..n {
                s = s + e(n, k as i64);
            }
            assert!(s.is_zero(), "sum of {n}-th roots");
        }
    }

    #[test]
    fn conductor_is_minimal() {
        assert_eq!(e(6, 2), e(3, 1));
        assert_eq!(e(6, 2).conductor(), 3);
        assert_eq!(e(12, 3), e(4, 1));
        assert_eq!(e(10, 5), Cyclo::from_int(-1));
        assert_eq!(e(6, 1).conductor(), 3);
        assert_eq!((e(5, 1) + e(5, 4)).conductor(), 5);
        assert_eq!((e(12, 1) + e(12, 11)).conductor(), 12);
        assert_eq!(Cyclo::sqrt(3).conductor(), 12);
        assert_eq!(Cyclo::sqrt(-3).conductor(), 3);
    }

    #[test]
    fn sqrt_squares() {
        for d in [-7i64, -3, -2, -1, 2, 3, 5, 6, 12, -24, 45] {
            let s = Cyclo::sqrt(d);
            assert_eq!(&s * &s, Cyclo::from_int(d), "sqrt({d})");
        }
        assert_eq!(e(3, 1) - e(3, 2), Cyclo::sqrt(-3));
    }

    #[test]
    fn conjugation_and_inverse() {
        assert_eq!(e(3, 1).conj(), e(3, 2));
        assert_eq!(Cyclo::sqrt(-3).conj(), -Cyclo::sqrt(-3));
        assert_eq!(Cyclo::from_frac(5, 7).conj(), Cyclo::from_frac(5, 7));
        let a = Cyclo::one() - e(3, 2);
        assert_eq!(a.inv().unwrap(), (Cyclo::one() - e(3, 1)) * Cyclo::from_frac(1, 3));
        assert_eq!(Cyclo::zero().inv(), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn products() {
        assert_eq!((Cyclo::one() - e(3, 1)) * (Cyclo::one() - e(3, 2)), Cyclo::from_int(3));
        assert_eq!(e(4, 1) * e(4, 1), Cyclo::from_int(-1));
        let r = (e(5, 1) + e(5, 4)) * (e(5, 2) + e(5, 3));
        assert_eq!(r.as_rational(), Some(BigRational::from_integer((-1).into())));
        assert_eq!((e(3, 1) + e(3, 2) + Cyclo::one()).as_rational(), Some(BigRational::zero()));
        assert_eq!(e(3, 1).as_rational(), None);
    }

    #[test]
    fn root_of_unity_recognition() {
        assert_eq!(e(12, 7).root_of_unity_exponent(), Some((12, 7)));
        assert_eq!(Cyclo::from_int(-1).root_of_unity_exponent(), Some((2, 1)));
        assert_eq!((-e(3, 2)).root_of_unity_exponent(), Some((6, 1)));
        assert_eq!(Cyclo::from_int(2).root_of_unity_exponent(), None);
    }

    #[test]
    fn display() {
        assert_eq!(format!("{}", Cyclo::sqrt(-3)), "1*E(3,1)-1*E(3,2)");
        assert_eq!(format!("{}", Cyclo::one() + e(4, 1)), "1+1*E(4,1)");
        assert_eq!(format!("{}", Cyclo::from_frac(-2, 6)), "-1/3");
        assert_eq!(format!("{}", Cyclo::zero()), "0");
    }
}
