//! Laurent polynomials over cyclotomic fields, fractional-exponent monomials
//! and the splitting of cyclotomic polynomials over abelian number fields.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cyclotomic::{Cyclo, CycloField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("zero substituted into a negative power")]
    ZeroInNegativePower,
    #[error("the zero polynomial has no valuation or degree")]
    ZeroPolynomial,
}

/// A Laurent polynomial in x with cyclotomic coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Cyclo>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Cyclo::one())
    }

    pub fn x() -> Self {
        LaurentPoly::monomial(Cyclo::one(), 1)
    }

    pub fn constant(c: Cyclo) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    pub fn monomial(c: Cyclo, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    /// Builds Σ c_i x^i from coefficients listed by increasing exponent.
    pub fn from_coeffs(coeffs: Vec<Cyclo>) -> Self {
        LaurentPoly::from_terms(coeffs.into_iter().enumerate().map(|(i, c)| (i as i64, c)))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i64, Cyclo)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in it {
            p.add_term(e, &c);
        }
        p
    }

    /// x − c.
    pub fn linear(c: &Cyclo) -> Self {
        LaurentPoly::from_terms([(1, Cyclo::one()), (0, -c)])
    }

    /// x^n − 1.
    pub fn x_pow_minus_one(n: i64) -> Self {
        LaurentPoly::from_terms([(n, Cyclo::one()), (0, Cyclo::from_int(-1))])
    }

    /// The rational cyclotomic polynomial Φ_d.
    pub fn cyclotomic(d: u64) -> Self {
        let mut p = LaurentPoly::x_pow_minus_one(d as i64);
        for e in 1..d {
            if d % e == 0 {
                p = p.div_exact(&LaurentPoly::cyclotomic(e)).expect("Φ_e divides x^d-1");
            }
        }
        p
    }

    fn add_term(&mut self, e: i64, c: &Cyclo) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.get(&e) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if s.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Cyclo)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Cyclo {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn val_deg(&self) -> Result<(i64, i64), LaurentError> {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(a), Some(b)) => Ok((*a, *b)),
            _ => Err(LaurentError::ZeroPolynomial),
        }
    }

    pub fn valuation(&self) -> i64 {
        self.val_deg().expect("valuation of zero").0
    }

    pub fn degree(&self) -> i64 {
        self.val_deg().expect("degree of zero").1
    }

    pub fn leading_coeff(&self) -> Cyclo {
        self.terms.values().next_back().cloned().unwrap_or_default()
    }

    pub fn lowest_coeff(&self) -> Cyclo {
        self.terms.values().next().cloned().unwrap_or_default()
    }

    /// Single-term polynomial, returned as (coefficient, exponent).
    pub fn as_monomial(&self) -> Option<(Cyclo, i64)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), *e))
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return Some(Cyclo::zero());
        }
        match self.as_monomial() {
            Some((c, 0)) => Some(c),
            _ => None,
        }
    }

    /// Smallest cyclotomic field containing all coefficients.
    pub fn field(&self) -> CycloField {
        self.terms
            .values()
            .fold(CycloField::rationals(), |f, c| f.join(&c.field()))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Cyclo) -> Cyclo) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// P*: complex conjugation applied to the coefficients.
    pub fn conj(&self) -> Self {
        self.map_coeffs(Cyclo::conj)
    }

    /// P(x)^∨ = P(1/x)*.
    pub fn vee(&self) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (-e, c.conj())))
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        self.map_coeffs(|a| a * c)
    }

    /// x^k · P.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// P(c·x).
    pub fn subs_scale(&self, c: &Cyclo) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, a)| (*e, a * &c.pow(*e))))
    }

    /// P(x^k) for k ≠ 0.
    pub fn subs_power(&self, k: i64) -> Self {
        assert!(k != 0);
        LaurentPoly::from_terms(self.terms.iter().map(|(e, a)| (e * k, a.clone())))
    }

    pub fn evaluate(&self, z: &Cyclo) -> Result<Cyclo, LaurentError> {
        if z.is_zero() {
            if self.terms.keys().any(|e| *e < 0) {
                return Err(LaurentError::ZeroInNegativePower);
            }
            return Ok(self.coeff(0));
        }
        let mut acc = Cyclo::zero();
        for (e, c) in &self.terms {
            acc = acc + c * &z.pow(*e);
        }
        Ok(acc)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient and remainder of ordinary polynomials (no negative powers).
    pub fn div_rem(&self, d: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly), LaurentError> {
        if d.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        let (dv, dd) = d.val_deg()?;
        assert!(dv >= 0, "div_rem needs a polynomial divisor");
        let lc_inv = d.leading_coeff().inv().expect("nonzero leading coefficient");
        let mut r = self.clone();
        let mut q = LaurentPoly::zero();
        while let Ok((_, rd)) = r.val_deg() {
            if rd < dd {
                break;
            }
            let c = &r.leading_coeff() * &lc_inv;
            let t = LaurentPoly::monomial(c, rd - dd);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Ok((q, r))
    }

    /// Exact quotient in the Laurent ring, or `NotDivisible`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if d.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let (a, b) = (self.valuation(), d.valuation());
        let (q, r) = self.shift(-a).div_rem(&d.shift(-b))?;
        if !r.is_zero() {
            return Err(LaurentError::NotDivisible);
        }
        Ok(q.shift(a - b))
    }

    pub fn divides(&self, p: &LaurentPoly) -> bool {
        p.div_exact(self).is_ok()
    }

    /// Remainder modulo a monic polynomial with nonzero constant term; x is
    /// a unit modulo such a polynomial, so Laurent inputs are accepted.
    pub fn mod_reduce(&self, phi: &LaurentPoly) -> LaurentPoly {
        let c0 = phi.coeff(0);
        assert!(!c0.is_zero() && phi.valuation() == 0, "modulus must have nonzero constant term");
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let v = self.valuation();
        let mut p = self.shift(-v.min(0));
        if v < 0 {
            // x^{-1} = -(phi - c0)/(x c0) mod phi
            let a = (phi - &LaurentPoly::constant(c0.clone())).shift(-1);
            let xinv = a.scale(&-c0.inv().unwrap());
            for _ in 0..(-v) {
                p = (&p * &xinv).div_rem(phi).unwrap().1;
            }
        }
        p.div_rem(phi).unwrap().1
    }

    /// Number of times (x − c) divides P.
    pub fn multiplicity_at(&self, c: &Cyclo) -> usize {
        let lin = LaurentPoly::linear(c);
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            match p.div_exact(&lin) {
                Ok(q) if !c.is_zero() => {
                    p = q;
                    m += 1;
                }
                _ => break,
            }
        }
        m
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.map_coeffs(|c| -c)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Coefficient as it appears inside a polynomial: rationals bare, other
/// values parenthesized.
pub(crate) fn coeff_text(c: &Cyclo) -> (bool, String) {
    match c.as_rational() {
        Some(r) => (r.is_negative(), format!("{}", r.abs())),
        None => (false, format!("({c})")),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let (neg, body) = coeff_text(c);
            let sign = match (neg, i) {
                (true, _) => "-",
                (false, 0) => "",
                (false, _) => "+",
            };
            if *e == 0 {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sign}{body}*x^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// λ·x^ν with λ a root of unity (or any cyclotomic scalar) and ν rational.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FracExpMonomial {
    pub scalar: Cyclo,
    pub exp: BigRational,
}

impl FracExpMonomial {
    pub fn new(scalar: Cyclo, exp: BigRational) -> Self {
        FracExpMonomial { scalar, exp }
    }

    pub fn one() -> Self {
        FracExpMonomial::new(Cyclo::one(), BigRational::zero())
    }

    pub fn scalar(c: Cyclo) -> Self {
        FracExpMonomial::new(c, BigRational::zero())
    }

    /// The x-exponent reduced into [0, 1).
    pub fn mod_integral(&self) -> Self {
        let e = &self.exp - self.exp.floor();
        FracExpMonomial::new(self.scalar.clone(), e)
    }

    pub fn mul(&self, o: &FracExpMonomial) -> Self {
        FracExpMonomial::new(&self.scalar * &o.scalar, &self.exp + &o.exp)
    }

    pub fn powi(&self, k: i64) -> Self {
        FracExpMonomial::new(self.scalar.pow(k), &self.exp * BigRational::from_integer(k.into()))
    }

    /// As an element of the Laurent ring, when the exponent is integral.
    pub fn to_poly(&self) -> Option<LaurentPoly> {
        if !self.exp.is_integer() {
            return None;
        }
        let e: i64 = self.exp.to_integer().try_into().ok()?;
        Some(LaurentPoly::monomial(self.scalar.clone(), e))
    }
}

/// Fr grammar: `z` or `z*x^{p/q}`.
impl fmt::Display for FracExpMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.scalar.as_rational() {
            Some(_) => format!("{}", self.scalar),
            None => format!("({})", self.scalar),
        };
        if self.exp.is_zero() {
            write!(f, "{}", self.scalar)
        } else {
            write!(f, "{s}*x^{{{}}}", self.exp)
        }
    }
}

impl fmt::Debug for FracExpMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An abelian number field: the fixed field of a subgroup H of (Z/N)^×
/// acting on Q(ζ_N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianField {
    conductor: u64,
    fixing: BTreeSet<u64>,
}

fn units(n: u64) -> impl Iterator<Item = u64> {
    (0..n.max(1)).filter(move |k| k.gcd(&n) == 1 || n == 1)
}

impl AbelianField {
    pub fn cyclotomic(n: u64) -> Self {
        let n = CycloField::new(n).conductor();
        AbelianField { conductor: n, fixing: [1 % n].into_iter().collect() }
    }

    pub fn rationals() -> Self {
        AbelianField::cyclotomic(1)
    }

    /// The smallest abelian field containing the given elements.
    pub fn generated_by(elts: &[Cyclo]) -> Self {
        let n = elts.iter().fold(CycloField::rationals(), |f, z| f.join(&z.field())).conductor();
        let fixing = units(n)
            .filter(|k| elts.iter().all(|z| z.galois(*k as i64) == *z))
            .collect();
        AbelianField { conductor: n, fixing }
    }

    pub fn quadratic(d: i64) -> Self {
        AbelianField::generated_by(&[Cyclo::sqrt(d)])
    }

    pub fn compositum(&self, other: &AbelianField) -> Self {
        let m = self.conductor.lcm(&other.conductor);
        let fixing = units(m)
            .filter(|k| {
                self.fixing.contains(&(k % self.conductor)) && other.fixing.contains(&(k % other.conductor))
            })
            .collect();
        AbelianField { conductor: m, fixing }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        units(self.conductor).count() / self.fixing.len()
    }

    /// Galois group of Q(ζ_m)/K as residues mod lcm(m, conductor).
    pub fn fixing_mod(&self, m: u64) -> Vec<u64> {
        let m = m.lcm(&self.conductor);
        units(m).filter(|k| self.fixing.contains(&(k % self.conductor))).collect()
    }

    pub fn contains(&self, z: &Cyclo) -> bool {
        self.fixing_mod(z.conductor()).iter().all(|k| z.galois(*k as i64) == *z)
    }

    pub fn contains_poly(&self, p: &LaurentPoly) -> bool {
        p.terms().all(|(_, c)| self.contains(c))
    }

    pub fn contains_field(&self, other: &AbelianField) -> bool {
        // K ⊇ L iff Gal(/K) ⊆ Gal(/L)
        let m = self.conductor.lcm(&other.conductor);
        self.fixing_mod(m).iter().all(|k| other.fixing.contains(&(k % other.conductor)))
    }
}

/// A monic irreducible factor over K of some x^d − 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCycloPoly {
    pub poly: LaurentPoly,
    pub root_order: u64,
    /// Exponents a with ζ_d^a a root.
    pub roots: Vec<u64>,
}

/// The K-irreducible factors of Φ_d, sorted by canonical text.
pub fn k_cyclotomic_factors(d: u64, k: &AbelianField) -> Vec<KCycloPoly> {
    let gal = k.fixing_mod(d);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in units(d) {
        if seen.contains(&a) {
            continue;
        }
        let orbit: BTreeSet<u64> = gal.iter().map(|g| (a * g) % d.max(1)).collect();
        seen.extend(orbit.iter().copied());
        let mut poly = LaurentPoly::one();
        for b in &orbit {
            poly = &poly * &LaurentPoly::linear(&Cyclo::root_of_unity(d, *b as i64));
        }
        out.push(KCycloPoly { poly, root_order: d, roots: orbit.into_iter().collect() });
    }
    out.sort_by_key(|f| f.poly.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u64, k: i64) -> Cyclo {
        Cyclo::root_of_unity(n, k)
    }

    fn c(a: i64) -> Cyclo {
        Cyclo::from_int(a)
    }

    #[test]
    fn vee_examples() {
        let p = LaurentPoly::linear(&e(3, 1));
        assert_eq!(p.vee(), LaurentPoly::from_terms([(-1, c(1)), (0, -e(3, 2))]));
        assert_eq!(LaurentPoly::one().vee(), LaurentPoly::one());
        let q = LaurentPoly::x() * LaurentPoly::x_pow_minus_one(3);
        assert_eq!(q.vee(), LaurentPoly::from_terms([(-4, c(1)), (-1, c(-1))]));
        assert_eq!(q.vee().vee(), q);
    }

    #[test]
    fn evaluation() {
        assert!(LaurentPoly::x_pow_minus_one(3).evaluate(&e(3, 1)).unwrap().is_zero());
        let p = LaurentPoly::from_coeffs(vec![c(1), e(3, 2), e(3, 1)]);
        assert_eq!(p.evaluate(&e(3, 1)).unwrap(), c(3));
        let q = LaurentPoly::from_terms([(-1, c(1))]);
        assert_eq!(q.evaluate(&Cyclo::zero()), Err(LaurentError::ZeroInNegativePower));
    }

    #[test]
    fn exact_division() {
        let p = LaurentPoly::x_pow_minus_one(3);
        let q = p.div_exact(&LaurentPoly::linear(&e(3, 2))).unwrap();
        assert_eq!(q, LaurentPoly::linear(&c(1)) * LaurentPoly::linear(&e(3, 1)));
        assert_eq!(p.div_exact(&LaurentPoly::one()).unwrap(), p);
        let r = LaurentPoly::from_coeffs(vec![c(1), c(0), c(1)]);
        assert_eq!(r.div_exact(&LaurentPoly::linear(&c(1))), Err(LaurentError::NotDivisible));
    }

    #[test]
    fn valuation_and_degree() {
        let p = LaurentPoly::x() * LaurentPoly::linear(&e(3, 2)).scale(&(c(1) - e(3, 2)).inv().unwrap());
        assert_eq!(p.val_deg(), Ok((1, 2)));
        assert_eq!(LaurentPoly::constant(c(5)).val_deg(), Ok((0, 0)));
        assert_eq!(LaurentPoly::from_terms([(-2, c(1)), (3, c(1))]).val_deg(), Ok((-2, 3)));
        assert_eq!(LaurentPoly::zero().val_deg(), Err(LaurentError::ZeroPolynomial));
    }

    #[test]
    fn reduction() {
        let r = LaurentPoly::from_coeffs(vec![c(1), c(0), c(1)]);
        assert!(r.mod_reduce(&LaurentPoly::linear(&e(4, 1))).is_zero());
        assert_eq!(LaurentPoly::monomial(c(1), 3).mod_reduce(&LaurentPoly::cyclotomic(3)), LaurentPoly::one());
        let s = LaurentPoly::from_coeffs(vec![c(1), c(1), c(1)]);
        assert!(s.mod_reduce(&LaurentPoly::linear(&e(3, 1))).is_zero());
        let feg = LaurentPoly::from_coeffs(vec![c(1), e(3, 2), e(3, 1)]);
        assert_eq!(feg.mod_reduce(&LaurentPoly::linear(&e(3, 1))), LaurentPoly::constant(c(3)));
        let inv = LaurentPoly::monomial(c(1), -1).mod_reduce(&LaurentPoly::linear(&e(3, 1)));
        assert_eq!(inv, LaurentPoly::constant(e(3, 2)));
    }

    #[test]
    fn factors_multiply_to_phi() {
        let fields = [
            AbelianField::cyclotomic(4),
            AbelianField::cyclotomic(3),
            AbelianField::quadratic(3),
            AbelianField::quadratic(5),
            AbelianField::quadratic(-2),
            AbelianField::quadratic(5).compositum(&AbelianField::cyclotomic(3)),
        ];
        for k in &fields {
            for d in 1..=42u64 {
                let fs = k_cyclotomic_factors(d, k);
                let prod = fs.iter().fold(LaurentPoly::one(), |p, f| &p * &f.poly);
                assert_eq!(prod, LaurentPoly::cyclotomic(d));
                for f in &fs {
                    assert!(k.contains_poly(&f.poly));
                }
            }
        }
        let f = k_cyclotomic_factors(12, &AbelianField::quadratic(3));
        let s3 = Cyclo::sqrt(3);
        let want = LaurentPoly::from_coeffs(vec![c(1), -s3, c(1)]);
        assert!(f.iter().any(|g| g.poly == want));
    }
}
