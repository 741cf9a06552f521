//! Cyclic Hecke algebras and their spetsial cyclotomic specializations.
//!
//! A specialized parameter ζ_e^j·(ζ⁻¹x)^{m_j} is handled as a monomial in
//! an auxiliary variable v with v^h = ζ⁻¹x, h = |ZW|, so every computation
//! stays in integer exponents until results are reported in x.

use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclotomic::Cyclo;
use crate::laurent::{AbelianField, FracExpMonomial, LaurentPoly};
use crate::reflection::{CentralizerData, ReflectionCoset};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeckeError {
    #[error("parameters {0} and {1} coincide")]
    RepeatedParameter(usize, usize),
    #[error("parameter {0} vanishes")]
    ZeroParameter(usize),
    #[error("Schur element of character {0} is not a Laurent polynomial in x")]
    FractionalSchur(usize),
    #[error("centralizer is not cyclic")]
    NotCyclic,
    #[error("malformed parameter list: {0}")]
    BadParameters(String),
}

/// Schur elements S_i = Π_{j≠i} (u_j − u_i)/u_j for numeric parameters.
pub fn schur_numeric(u: &[Cyclo]) -> Result<Vec<Cyclo>, HeckeError> {
    for (i, a) in u.iter().enumerate() {
        if a.is_zero() {
            return Err(HeckeError::ZeroParameter(i));
        }
        if let Some(j) = u[..i].iter().position(|b| b == a) {
            return Err(HeckeError::RepeatedParameter(j, i));
        }
    }
    Ok((0..u.len())
        .map(|i| {
            (0..u.len())
                .filter(|&j| j != i)
                .fold(Cyclo::one(), |s, j| s * ((&u[j] - &u[i]) * u[j].inv().unwrap()))
        })
        .collect())
}

/// Schur elements for monomial parameters c_j·v^{n_j}; results are Laurent
/// polynomials in v.
pub fn schur_monomial(u: &[(Cyclo, i64)]) -> Result<Vec<LaurentPoly>, HeckeError> {
    for (i, a) in u.iter().enumerate() {
        if a.0.is_zero() {
            return Err(HeckeError::ZeroParameter(i));
        }
        if let Some(j) = u[..i].iter().position(|b| b == a) {
            return Err(HeckeError::RepeatedParameter(j, i));
        }
    }
    let mono = |p: &(Cyclo, i64)| LaurentPoly::monomial(p.0.clone(), p.1);
    Ok((0..u.len())
        .map(|i| {
            (0..u.len()).filter(|&j| j != i).fold(LaurentPoly::one(), |s, j| {
                let num = &mono(&u[j]) - &mono(&u[i]);
                let inv = LaurentPoly::monomial(u[j].0.inv().unwrap(), -u[j].1);
                &(&s * &num) * &inv
            })
        })
        .collect())
}

/// Generic cyclic parameters given as monomials in x (fractional exponents
/// allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicHeckeParams {
    pub params: Vec<FracExpMonomial>,
}

impl CyclicHeckeParams {
    /// Common denominator of the exponents.
    pub fn denominator(&self) -> u64 {
        self.params.iter().fold(1u64, |l, p| l.lcm(&p.exp.denom().to_u64().unwrap()))
    }

    /// Schur elements as Laurent polynomials in v = x^{1/h}, with h returned.
    pub fn schur_v(&self) -> Result<(u64, Vec<LaurentPoly>), HeckeError> {
        let h = self.denominator();
        let u: Vec<(Cyclo, i64)> = self
            .params
            .iter()
            .map(|p| (p.scalar.clone(), (&p.exp * BigRational::from_integer(h.into())).to_integer().to_i64().unwrap()))
            .collect();
        Ok((h, schur_monomial(&u)?))
    }

    /// Schur elements in x; fails when some element has fractional exponents.
    pub fn schur(&self) -> Result<Vec<LaurentPoly>, HeckeError> {
        let (h, s) = self.schur_v()?;
        s.iter()
            .enumerate()
            .map(|(i, p)| compress(p, h, &Cyclo::one()).ok_or(HeckeError::FractionalSchur(i)))
            .collect()
    }
}

/// Rewrites Σ c_k v^k with v^h = ζ⁻¹x as a polynomial in x, when every
/// exponent is a multiple of h.
pub fn compress(p: &LaurentPoly, h: u64, zeta: &Cyclo) -> Option<LaurentPoly> {
    let h = h as i64;
    let zi = zeta.inv().unwrap();
    let mut terms = Vec::new();
    for (k, c) in p.terms() {
        if k % h != 0 {
            return None;
        }
        let q = k / h;
        terms.push((q, c * &zi.pow(q)));
    }
    Some(LaurentPoly::from_terms(terms))
}

/// P(x) ↦ P(ζ·v^h).
pub fn expand(p: &LaurentPoly, h: u64, zeta: &Cyclo) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().map(|(k, c)| (k * h as i64, c * &zeta.pow(k))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Compact,
    Noncompact,
}

/// Parameter data for one orbit of hyperplanes of W(wφ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitParams {
    pub e: usize,
    /// m_j, with ζ_{I,j} = ζ_e^j.
    pub m: Vec<BigRational>,
    pub e_wi: usize,
    pub n_ref_wi: usize,
    pub n_hyp_wi: usize,
}

impl OrbitParams {
    /// m_I = e_{W_I}/e_I.
    pub fn m_i(&self) -> BigRational {
        BigRational::new((self.e_wi as i64).into(), (self.e as i64).into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpetsialAlgebraSpec {
    /// Label of W(wφ), e.g. `Z_4` or `G_4`.
    pub label: String,
    pub rank: usize,
    pub zeta: Cyclo,
    pub d: u64,
    pub a: u64,
    /// h = |ZW|, with v^h = ζ⁻¹x.
    pub h: u64,
    pub orbits: Vec<OrbitParams>,
    pub variant: Variant,
    pub n_ref: usize,
    pub n_hyp: usize,
}

/// (d, a) with ζ = exp(2πi a/d), 0 ≤ a < d.
pub fn root_data(zeta: &Cyclo) -> (u64, u64) {
    let (d, k) = zeta.root_of_unity_exponent().expect("root of unity");
    (d, k % d.max(1))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl SpetsialAlgebraSpec {
    /// A spec for a cyclic W(wφ) of order e with a single orbit and
    /// W_I = W.
    pub fn cyclic(g: &ReflectionCoset, zeta: &Cyclo, m: Vec<BigRational>, variant: Variant) -> Self {
        let (d, a) = root_data(zeta);
        let e = m.len();
        SpetsialAlgebraSpec {
            label: format!("Z_{e}"),
            rank: 1,
            zeta: zeta.clone(),
            d,
            a,
            h: g.center_scalars().len() as u64,
            orbits: vec![OrbitParams { e, m, e_wi: g.e_w(), n_ref_wi: g.n_ref(), n_hyp_wi: g.n_hyp() }],
            variant,
            n_ref: g.n_ref(),
            n_hyp: g.n_hyp(),
        }
    }

    /// Spec attached to a regular centralizer; `ms` lists m for each orbit.
    pub fn for_centralizer(
        g: &ReflectionCoset,
        cd: &CentralizerData,
        zeta: &Cyclo,
        ms: Vec<Vec<BigRational>>,
        variant: Variant,
    ) -> Result<Self, HeckeError> {
        if ms.len() != cd.orbits.len() {
            return Err(HeckeError::BadParameters("one parameter list per hyperplane orbit".into()));
        }
        let (d, a) = root_data(zeta);
        let orbits = cd
            .orbits
            .iter()
            .zip(ms)
            .map(|(o, m)| {
                if m.len() != o.e_i {
                    return Err(HeckeError::BadParameters(format!("expected {} parameters", o.e_i)));
                }
                Ok(OrbitParams { e: o.e_i, m, e_wi: o.e_wi, n_ref_wi: o.n_ref_wi, n_hyp_wi: o.n_hyp_wi })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let label = if cd.is_cyclic() { format!("Z_{}", cd.coset.order()) } else { cd.coset.name().to_string() };
        Ok(SpetsialAlgebraSpec {
            label,
            rank: cd.coset.rank(),
            zeta: zeta.clone(),
            d,
            a,
            h: g.center_scalars().len() as u64,
            orbits,
            variant,
            n_ref: g.n_ref(),
            n_hyp: g.n_hyp(),
        })
    }

    /// H_W: the 1-cyclotomic algebra of W with P_I = (t − x)(t^{e−1} + … + 1),
    /// or its noncompactification.
    pub fn h_w(g: &ReflectionCoset, variant: Variant) -> Self {
        let orbits: Vec<OrbitParams> = g
            .hyperplane_orbits()
            .iter()
            .map(|o| {
                let mut m = vec![BigRational::zero(); o.e_h];
                m[0] = BigRational::one();
                OrbitParams { e: o.e_h, m, e_wi: o.e_h, n_ref_wi: o.e_h - 1, n_hyp_wi: 1 }
            })
            .collect();
        let label = if g.rank() == 1 { format!("Z_{}", g.order()) } else { g.name().to_string() };
        let spec = SpetsialAlgebraSpec {
            label,
            rank: g.rank(),
            zeta: Cyclo::one(),
            d: 1,
            a: 0,
            h: g.center_scalars().len() as u64,
            orbits,
            variant: Variant::Compact,
            n_ref: g.n_ref(),
            n_hyp: g.n_hyp(),
        };
        match variant {
            Variant::Compact => spec,
            Variant::Noncompact => spec.switch_variant(),
        }
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank == 1 && self.orbits.len() == 1
    }

    pub fn e(&self) -> usize {
        self.orbits[0].e
    }

    pub fn m(&self) -> &[BigRational] {
        &self.orbits[0].m
    }

    /// exp(2πi·q·a/d): the value ζ^q for a rational power q.
    pub fn zeta_pow(&self, q: &BigRational) -> Cyclo {
        let a = BigRational::new((self.a as i64).into(), (self.d as i64).into());
        Cyclo::exp2pii(&(a * q))
    }

    /// Parameters of an orbit as monomials c·v^n.
    pub fn v_params(&self, orbit: usize) -> Vec<(Cyclo, i64)> {
        let o = &self.orbits[orbit];
        o.m.iter()
            .enumerate()
            .map(|(j, m)| {
                let n = m * rat(self.h as i64);
                (Cyclo::root_of_unity(o.e as u64, j as i64), n.to_integer().to_i64().unwrap())
            })
            .collect()
    }

    /// Parameters of an orbit as monomials in x: ζ_e^j·ζ^{−m_j}·x^{m_j}.
    pub fn x_params(&self, orbit: usize) -> Vec<FracExpMonomial> {
        let o = &self.orbits[orbit];
        o.m.iter()
            .enumerate()
            .map(|(j, m)| {
                let s = Cyclo::root_of_unity(o.e as u64, j as i64) * self.zeta_pow(&-m);
                FracExpMonomial::new(s, m.clone())
            })
            .collect()
    }

    /// Coefficients in v of P_I(t) = Σ c_k t^k, indexed by k.
    pub fn p_coeffs(&self, orbit: usize) -> Vec<LaurentPoly> {
        let mut coeffs = vec![LaurentPoly::one()];
        for (c, n) in self.v_params(orbit) {
            let root = LaurentPoly::monomial(c, n);
            let mut next = vec![LaurentPoly::zero(); coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] = &next[k + 1] + a;
                next[k] = &next[k] - &(a * &root);
            }
            coeffs = next;
        }
        coeffs
    }

    /// Schur elements in v (cyclic specs only).
    pub fn schur_v(&self) -> Result<Vec<LaurentPoly>, HeckeError> {
        if !self.is_cyclic() {
            return Err(HeckeError::NotCyclic);
        }
        schur_monomial(&self.v_params(0))
    }

    /// Schur elements in x.
    pub fn schur(&self) -> Result<Vec<LaurentPoly>, HeckeError> {
        self.schur_v()?
            .iter()
            .enumerate()
            .map(|(i, s)| compress(s, self.h, &self.zeta).ok_or(HeckeError::FractionalSchur(i)))
            .collect()
    }

    /// Swaps compact and noncompact type via P ↦ P^{[m_I, ζ]}.
    pub fn switch_variant(&self) -> Self {
        let mut out = self.clone();
        out.variant = match self.variant {
            Variant::Compact => Variant::Noncompact,
            Variant::Noncompact => Variant::Compact,
        };
        for o in &mut out.orbits {
            let mi = o.m_i();
            let e = o.e;
            let old = o.m.clone();
            for (j, mj) in old.iter().enumerate() {
                o.m[(e - j) % e] = &mi - mj;
            }
        }
        out
    }

    pub fn compactify(&self) -> Self {
        match self.variant {
            Variant::Compact => self.clone(),
            Variant::Noncompact => self.switch_variant(),
        }
    }

    pub fn noncompactify(&self) -> Self {
        match self.variant {
            Variant::Noncompact => self.clone(),
            Variant::Compact => self.switch_variant(),
        }
    }

    /// The spec at εwφ: P_I(t, x) ↦ P_I(t, ε⁻¹x), i.e. ζ ↦ εζ.
    pub fn ennola_twist(&self, eps: &Cyclo) -> Self {
        let mut out = self.clone();
        out.zeta = eps * &self.zeta;
        let (d, a) = root_data(&out.zeta);
        out.d = d;
        out.a = a;
        out
    }

    /// τ(π) = (−1)^{N^ref}·Π u_{I,j}, over the orbit representatives.
    pub fn tau_pi(&self, orbit_sizes: &[usize]) -> FracExpMonomial {
        let mut t = FracExpMonomial::scalar(if self.n_ref % 2 == 0 { Cyclo::one() } else { Cyclo::from_int(-1) });
        for (o, size) in orbit_sizes.iter().enumerate() {
            for p in self.x_params(o) {
                t = t.mul(&p.powi(*size as i64));
            }
        }
        t
    }

    /// σ_χ = valuation + degree of S_χ.
    pub fn sigma(&self, chi: usize) -> Result<i64, HeckeError> {
        let s = &self.schur()?[chi];
        let (v, d) = s.val_deg().map_err(|_| HeckeError::FractionalSchur(chi))?;
        Ok(v + d)
    }

    /// (ω_χ(π), σ_χ, δ_χ).
    pub fn omega_sigma_delta(&self, chi: usize) -> Result<(FracExpMonomial, i64, i64), HeckeError> {
        let sigma = self.sigma(chi)?;
        let n = match self.variant {
            Variant::Compact => self.n_hyp,
            Variant::Noncompact => self.n_ref,
        } as i64;
        let k = rat(n + sigma);
        let omega = FracExpMonomial::new(self.zeta_pow(&-&k), k);
        Ok((omega, sigma, self.n_ref as i64 - sigma))
    }

    /// Fr(ρ_χ) for the character χ_j of a cyclic spec, given δ_ρ = a_ρ + A_ρ
    /// of its degree: ζ^j·(ζ⁻¹x)^{−δ_ρ·a/d}, exponent taken mod 1.
    pub fn frobenius(&self, chi: usize, delta_rho: i64) -> Result<FracExpMonomial, HeckeError> {
        if !self.is_cyclic() {
            return Err(HeckeError::NotCyclic);
        }
        let ad = BigRational::new((self.a as i64).into(), (self.d as i64).into());
        let q = rat(delta_rho) * &ad;
        let omega = self.zeta_pow(&rat(chi as i64));
        let f = FracExpMonomial::new(omega * self.zeta_pow(&q), -q);
        Ok(f.mod_integral())
    }

    /// Display in the usual table notation, e.g. `H_{Z_4}(ix^3,i,ix,-i)`.
    pub fn notation(&self) -> String {
        let mut parts = Vec::new();
        for o in 0..self.orbits.len() {
            let ps: Vec<String> = self.x_params(o).iter().map(monomial_name).collect();
            parts.push(ps.join(","));
        }
        format!("H_{{{}}}({})", self.label, parts.join(";"))
    }
}

impl fmt::Display for SpetsialAlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.notation())
    }
}

/// Conventional name of a root of unity: `1`, `-1`, `i`, `-i`, `zeta3^2`,
/// `-zeta3`, `zeta8^3`; other numbers fall back to the E(n,k) grammar.
pub fn root_name(z: &Cyclo) -> String {
    let Some((n, k)) = z.root_of_unity_exponent() else {
        return format!("({z})");
    };
    let pw = |m: u64, j: u64| if j == 1 { format!("zeta{m}") } else { format!("zeta{m}^{j}") };
    match n {
        1 => "1".into(),
        2 => "-1".into(),
        4 => if k == 1 { "i".into() } else { "-i".into() },
        _ if n % 2 == 1 => pw(n, k),
        _ if n % 4 == 2 => {
            let m = n / 2;
            let j = ((k + m) % n) / 2;
            format!("-{}", pw(m, j))
        }
        _ => pw(n, k),
    }
}

/// Table-style monomial: scalar name juxtaposed with x, e.g. `-zeta3^2x`,
/// `ix^3`, `x^{1/2}`.
pub fn monomial_name(p: &FracExpMonomial) -> String {
    let s = root_name(&p.scalar);
    if p.exp.is_zero() {
        return s;
    }
    let prefix = match s.as_str() {
        "1" => String::new(),
        "-1" => "-".into(),
        _ => s,
    };
    let e = if p.exp.is_one() {
        String::new()
    } else if p.exp.is_integer() {
        format!("^{}", p.exp)
    } else {
        format!("^{{{}}}", p.exp)
    };
    format!("{prefix}x{e}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct ConditionReport {
    pub items: Vec<ConditionResult>,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&ConditionResult> {
        self.items.iter().filter(|c| !c.pass).collect()
    }

    fn push(&mut self, name: &'static str, pass: bool, detail: impl Into<String>) {
        self.items.push(ConditionResult { name, pass, detail: detail.into() });
    }
}

fn is_polynomial(p: &LaurentPoly) -> bool {
    p.is_zero() || p.valuation() >= 0
}

/// Evaluates the conditions of a spetsial cyclotomic algebra. `feg` is
/// Feg(R_{wφ}); `field` is K_{W(wφ)}.
pub fn check_spetsial(spec: &SpetsialAlgebraSpec, feg: Option<&LaurentPoly>, field: &AbelianField) -> ConditionReport {
    let mut r = ConditionReport::default();
    for (oi, o) in spec.orbits.iter().enumerate() {
        let coeffs = spec.p_coeffs(oi);
        let in_x: Vec<Option<LaurentPoly>> = coeffs.iter().map(|c| compress(c, spec.h, &spec.zeta)).collect();
        let ca1 = in_x.iter().all(|c| c.as_ref().is_some_and(|p| field.contains_poly(p) && is_polynomial(p)));
        r.push("CA1", ca1, format!("orbit {oi}: coefficients of P_I in K[x]"));
        // at x = ζ every v-monomial becomes a root of unity
        let at_zeta: Vec<Cyclo> = match in_x.iter().cloned().collect::<Option<Vec<_>>>() {
            Some(ps) => ps.iter().map(|p| p.evaluate(&spec.zeta).unwrap()).collect(),
            None => coeffs.iter().map(|p| p.evaluate(&Cyclo::one()).unwrap()).collect(),
        };
        let mut want = vec![Cyclo::zero(); o.e + 1];
        want[0] = Cyclo::from_int(-1);
        want[o.e] = Cyclo::one();
        r.push("CA2", at_zeta == want, format!("orbit {oi}: P_I(t, ζ) = t^{} - 1", o.e));
        let total: BigRational = o.m.iter().sum();
        let nonneg = o.m.iter().all(|m| !m.is_negative());
        match spec.variant {
            Variant::Compact => {
                let mi = o.m_i();
                let ok = o.m[0] == mi && o.m[1..].iter().all(|m| *m < mi) && nonneg;
                r.push("CS1", ok, format!("orbit {oi}: unique highest root (ζ^-1 x)^{mi}"));
                r.push("CS3", total == rat(o.n_hyp_wi as i64), format!("orbit {oi}: Σm = {total}, N^hyp_WI = {}", o.n_hyp_wi));
            }
            Variant::Noncompact => {
                let ok = o.m[0].is_zero() && o.m[1..].iter().all(|m| m.is_positive());
                r.push("NCS1", ok, format!("orbit {oi}: 1 is the only root of degree 0"));
                r.push("NCS3", total == rat(o.n_ref_wi as i64), format!("orbit {oi}: Σm = {total}, N^ref_WI = {}", o.n_ref_wi));
            }
        }
    }
    if !spec.is_cyclic() {
        r.notes.push("cyclic reduction only: global Schur conditions need the algebra of a non-cyclic group".into());
        return r;
    }
    let schur = match spec.schur() {
        Ok(s) => s,
        Err(e) => {
            r.push("SC1", false, e.to_string());
            return r;
        }
    };
    let sc1 = schur.iter().all(|s| s.terms().all(|(_, c)| c.is_integral()));
    r.push("SC1", sc1, "Schur elements in Z_K[x, x^-1]");
    let maximal: Vec<usize> = (0..schur.len())
        .filter(|&i| schur.iter().all(|s| s.divides(&schur[i])))
        .collect();
    r.push("SC2", maximal.len() == 1, format!("divisibility-maximal characters {maximal:?}"));
    if let Some(f) = feg {
        let bad: Vec<usize> = (0..schur.len()).filter(|&i| !schur[i].divides(f)).collect();
        r.push("SC3", bad.is_empty(), format!("Schur elements not dividing Feg(R): {bad:?}"));
    }
    if spec.orbits[0].m.iter().filter(|m| !m.is_integer()).count() > 1 {
        let mut ms: Vec<&BigRational> = spec.orbits[0].m.iter().filter(|m| !m.is_integer()).collect();
        ms.sort();
        ms.dedup();
        if ms.len() < spec.orbits[0].m.iter().filter(|m| !m.is_integer()).count() {
            r.notes.push("repeated fractional m: Galois pairing of parameters is not unique".into());
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u64, k: i64) -> Cyclo {
        Cyclo::root_of_unity(n, k)
    }

    fn r(n: i64) -> BigRational {
        rat(n)
    }

    #[test]
    fn generic_three_parameters() {
        let (a, b, c) = (Cyclo::from_int(2), Cyclo::from_frac(-1, 3), Cyclo::from_int(5));
        let s = schur_numeric(&[a.clone(), b.clone(), c.clone()]).unwrap();
        assert_eq!(s[0], (&b - &a) * (&c - &a) * (&b * &c).inv().unwrap());
        assert_eq!(schur_numeric(&[a.clone(), a]), Err(HeckeError::RepeatedParameter(0, 1)));
    }

    #[test]
    fn two_parameters() {
        let p = CyclicHeckeParams { params: vec![FracExpMonomial::new(Cyclo::one(), r(1)), FracExpMonomial::scalar(Cyclo::from_int(-1))] };
        let s = p.schur().unwrap();
        assert_eq!(s[0], LaurentPoly::from_coeffs(vec![Cyclo::one(), Cyclo::one()]));
    }

    #[test]
    fn z3_principal() {
        let g = ReflectionCoset::builtin("Z3").unwrap();
        let spec = SpetsialAlgebraSpec::h_w(&g, Variant::Compact);
        let s = spec.schur().unwrap();
        assert_eq!(s[0], LaurentPoly::from_coeffs(vec![Cyclo::one(), Cyclo::one(), Cyclo::one()]));
        let (om, sigma, _) = spec.omega_sigma_delta(0).unwrap();
        assert_eq!(sigma, 2);
        assert_eq!(om, FracExpMonomial::new(Cyclo::one(), r(3)));
        let (om1, sigma1, _) = spec.omega_sigma_delta(1).unwrap();
        assert_eq!(sigma1, -1);
        assert_eq!(om1, FracExpMonomial::one());
        assert_eq!(spec.tau_pi(&[1]), FracExpMonomial::new(Cyclo::one(), r(1)));
        let rep = check_spetsial(&spec, None, &AbelianField::cyclotomic(3));
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn noncompact_h_w() {
        let g = ReflectionCoset::builtin("Z3").unwrap();
        let nc = SpetsialAlgebraSpec::h_w(&g, Variant::Noncompact);
        assert_eq!(nc.m(), &[r(0), r(1), r(1)]);
        assert_eq!(nc.switch_variant(), SpetsialAlgebraSpec::h_w(&g, Variant::Compact));
        let rep = check_spetsial(&nc, None, &AbelianField::cyclotomic(3));
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn names() {
        assert_eq!(root_name(&e(6, 1)), "-zeta3^2");
        assert_eq!(root_name(&e(6, 5)), "-zeta3");
        assert_eq!(root_name(&e(4, 3)), "-i");
        assert_eq!(monomial_name(&FracExpMonomial::new(e(4, 1), r(3))), "ix^3");
        assert_eq!(monomial_name(&FracExpMonomial::new(Cyclo::one(), BigRational::new(1.into(), 2.into()))), "x^{1/2}");
    }
}
