//! Order polynomials, fake degrees, uniform class functions and the Sylow
//! congruences.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cyclotomic::Cyclo;
use crate::laurent::{k_cyclotomic_factors, AbelianField, LaurentPoly};
use crate::reflection::{CharacterTable, Mat, ReflectionCoset, DEFAULT_ORDER_BOUND};

#[derive(Debug, Error)]
pub enum OrdersError {
    #[error("subcoset is not contained in W")]
    NotASubcoset,
    #[error("{0} does not divide the Poincaré polynomial")]
    NotADivisor(String),
    #[error("quotient is not a polynomial")]
    NotDivisible,
    #[error(transparent)]
    Reflection(#[from] crate::reflection::ReflectionError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderPolynomials {
    pub poincare: LaurentPoly,
    pub order_nc: LaurentPoly,
    pub order_c: LaurentPoly,
}

fn degree_product(g: &ReflectionCoset) -> (LaurentPoly, Cyclo) {
    let d = g.degrees().expect("degree data");
    let mut prod = LaurentPoly::one();
    let mut zeta = Cyclo::one();
    for (di, z) in &d.degrees {
        prod = &prod * &LaurentPoly::from_terms([(*di as i64, Cyclo::one()), (0, -z)]);
        zeta = zeta * z;
    }
    (prod, zeta)
}

pub fn order_polys(g: &ReflectionCoset) -> OrderPolynomials {
    let (prod, zeta) = degree_product(g);
    let delta = g.discriminant_twist();
    let order_c = prod.shift(g.n_hyp() as i64).scale(&delta.conj());
    let zc = zeta.conj();
    let order_nc = prod.shift(g.n_ref() as i64).scale(&(&zc * &zc));
    OrderPolynomials { poincare: g.poincare(), order_nc, order_c }
}

/// (det′(φ̄), det′∨(φ̄), Δ(φ̄)).
pub fn det_character_values(g: &ReflectionCoset) -> (Cyclo, Cyclo, Cyclo) {
    let (_, zeta) = degree_product(g);
    let delta = g.discriminant_twist();
    (&delta * &zeta.conj(), zeta, delta)
}

/// |T_{wφ}|_c = det(x − wφ).
pub fn torus_order(g: &ReflectionCoset, class: usize) -> LaurentPoly {
    g.class_rep(class).char_poly()
}

/// Feg(R_{wφ}) = P*/det(1 − wφx)*.
pub fn fake_degree_torus(g: &ReflectionCoset, class: usize) -> LaurentPoly {
    let den = g.class_rep(class).det_one_minus_x().conj();
    g.poincare().conj().div_exact(&den).expect("torus Poincaré polynomial divides P")
}

/// Feg(θ) = (1/|W|) Σ_w θ(wφ)·Feg(R_{wφ}).
pub fn fake_degree_char(g: &ReflectionCoset, table: &CharacterTable, theta: usize) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for (c, cl) in g.classes().iter().enumerate() {
        let v = &table.values[theta][c];
        if v.is_zero() {
            continue;
        }
        let k = v * &Cyclo::from_int(cl.size as i64);
        acc = &acc + &fake_degree_torus(g, c).scale(&k);
    }
    acc.scale(&Cyclo::from_frac(1, g.order() as i64))
}

pub fn fake_degrees(g: &ReflectionCoset, table: &CharacterTable) -> Vec<LaurentPoly> {
    let tori: Vec<LaurentPoly> = (0..g.classes().len()).map(|c| fake_degree_torus(g, c)).collect();
    let n = Cyclo::from_frac(1, g.order() as i64);
    table
        .values
        .iter()
        .map(|row| {
            let mut acc = LaurentPoly::zero();
            for (c, cl) in g.classes().iter().enumerate() {
                if !row[c].is_zero() {
                    acc = &acc + &tori[c].scale(&(&row[c] * &Cyclo::from_int(cl.size as i64)));
                }
            }
            acc.scale(&n)
        })
        .collect()
}

/// A class function on Wφ, one value per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformClassFunction {
    pub values: Vec<Cyclo>,
}

impl UniformClassFunction {
    pub fn from_character(table: &CharacterTable, i: usize) -> Self {
        UniformClassFunction { values: table.values[i].clone() }
    }

    pub fn trivial(g: &ReflectionCoset) -> Self {
        UniformClassFunction { values: vec![Cyclo::one(); g.classes().len()] }
    }

    /// Characteristic function of a class.
    pub fn ch(g: &ReflectionCoset, class: usize) -> Self {
        let mut values = vec![Cyclo::zero(); g.classes().len()];
        values[class] = Cyclo::one();
        UniformClassFunction { values }
    }

    /// R_{wφ} = Ind from the torus T_{wφ} of the trivial function.
    pub fn r_w(g: &ReflectionCoset, class: usize) -> Self {
        let t = Subcoset::torus(g, class);
        induce(g, &t, &SubcosetFunction { values: vec![Cyclo::one()] }).unwrap()
    }

    /// ⟨f, h⟩ = (1/|W|) Σ f(wφ) h(wφ)*.
    pub fn scalar_product(&self, g: &ReflectionCoset, o: &Self) -> Cyclo {
        let mut s = Cyclo::zero();
        for (c, cl) in g.classes().iter().enumerate() {
            s = s + Cyclo::from_int(cl.size as i64) * &self.values[c] * o.values[c].conj();
        }
        s * Cyclo::from_frac(1, g.order() as i64)
    }

    /// Feg of a class function: extend Feg linearly through the R_{wφ}.
    pub fn fake_degree(&self, g: &ReflectionCoset) -> LaurentPoly {
        let table = CharacterTable { names: vec![], values: vec![self.values.clone()], provenance: crate::reflection::Provenance::Computed };
        fake_degree_char(g, &table, 0)
    }
}

/// A subcoset W_L·wφ of Wφ with W_L a subgroup of W.
#[derive(Debug, Clone)]
pub struct Subcoset {
    /// Element indices of W_L; the identity comes first.
    pub subgroup: Vec<usize>,
    /// Element index of w.
    pub twist: usize,
}

impl Subcoset {
    pub fn torus(g: &ReflectionCoset, class: usize) -> Self {
        Subcoset { subgroup: vec![g.index_of(&Mat::identity(g.rank())).unwrap()], twist: g.classes()[class].rep }
    }

    pub fn new(g: &ReflectionCoset, mut subgroup: Vec<usize>, twist: usize) -> Result<Self, OrdersError> {
        let id = g.index_of(&Mat::identity(g.rank())).unwrap();
        let set: BTreeSet<usize> = subgroup.iter().copied().collect();
        if !set.contains(&id) {
            return Err(OrdersError::NotASubcoset);
        }
        for &a in &subgroup {
            for &b in &subgroup {
                let p = g.element(a).mul(g.element(b));
                if !g.index_of(&p).is_some_and(|j| set.contains(&j)) {
                    return Err(OrdersError::NotASubcoset);
                }
            }
        }
        subgroup.sort_by_key(|&i| i != id);
        Ok(Subcoset { subgroup, twist })
    }

    /// Matrix of the element W_L[i]·wφ.
    pub fn element(&self, g: &ReflectionCoset, i: usize) -> Mat {
        g.element(self.subgroup[i]).mul(&g.coset_element(self.twist))
    }

    pub fn order(&self) -> usize {
        self.subgroup.len()
    }

    /// (V, W_L·wφ) as a reflection coset in its own right.
    pub fn as_coset(&self, g: &ReflectionCoset) -> Result<ReflectionCoset, OrdersError> {
        let gens: Vec<Mat> = self.subgroup.iter().map(|&i| g.element(i).clone()).collect();
        let names: Vec<char> = (0..gens.len()).map(|i| char::from_u32(0x100 + i as u32).unwrap()).collect();
        Ok(ReflectionCoset::from_generators(
            &format!("L<{}>", g.name()),
            gens,
            names,
            Some(g.coset_element(self.twist)),
            DEFAULT_ORDER_BOUND,
        )?)
    }
}

/// A function on the elements of a subcoset, indexed like `subgroup`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcosetFunction {
    pub values: Vec<Cyclo>,
}

impl SubcosetFunction {
    pub fn scalar_product(&self, o: &Self) -> Cyclo {
        let n = Cyclo::from_frac(1, self.values.len() as i64);
        self.values.iter().zip(&o.values).fold(Cyclo::zero(), |s, (a, b)| s + a * b.conj()) * n
    }
}

/// (Ind f)(yφ) = (1/|W_L|) Σ_{v ∈ W, v·yφ·v⁻¹ ∈ W_L wφ} f(v·yφ·v⁻¹).
pub fn induce(g: &ReflectionCoset, l: &Subcoset, f: &SubcosetFunction) -> Result<UniformClassFunction, OrdersError> {
    let lw = g.coset_element(l.twist);
    let lwinv = lw.inverse().unwrap();
    let pos: std::collections::HashMap<usize, usize> = l.subgroup.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let inv: Vec<Mat> = g.elements().iter().map(|v| v.inverse().unwrap()).collect();
    let mut values = Vec::new();
    for c in 0..g.classes().len() {
        let y = g.class_rep(c);
        let mut s = Cyclo::zero();
        for (v, vi) in g.elements().iter().zip(&inv) {
            let z = v.mul(&y).mul(vi);
            let u = z.mul(&lwinv);
            let Some(j) = g.index_of(&u) else { return Err(OrdersError::NotASubcoset) };
            if let Some(&i) = pos.get(&j) {
                s = s + &f.values[i];
            }
        }
        values.push(s * Cyclo::from_frac(1, l.order() as i64));
    }
    Ok(UniformClassFunction { values })
}

pub fn restrict(g: &ReflectionCoset, l: &Subcoset, f: &UniformClassFunction) -> SubcosetFunction {
    let values = (0..l.order())
        .map(|i| {
            let m = l.element(g, i);
            let phinv = g.phi().inverse().unwrap();
            let w = g.index_of(&m.mul(&phinv)).expect("subcoset element lies in Wφ");
            f.values[g.class_of(w)].clone()
        })
        .collect();
    SubcosetFunction { values }
}

#[derive(Debug, Clone)]
pub struct SylowReport {
    pub phi: LaurentPoly,
    /// Multiplicity of Φ in P_𝔾 and the dimension of the Sylow Φ-torus.
    pub multiplicity: usize,
    pub torus_dim: usize,
    pub relative_order: usize,
    pub remainder_c: LaurentPoly,
    pub remainder_nc: LaurentPoly,
}

impl SylowReport {
    pub fn ok(&self) -> bool {
        self.remainder_c == LaurentPoly::one() && self.remainder_nc == LaurentPoly::one()
    }
}

/// Reduces |𝔾|/(|W_𝔾(L)|·|𝕃|) modulo Φ in both normalizations.
pub fn sylow_congruence_check(g: &ReflectionCoset, phi: &LaurentPoly) -> Result<SylowReport, OrdersError> {
    let p = g.poincare();
    let mult = p.multiplicity_of(phi);
    if mult == 0 {
        return Err(OrdersError::NotADivisor(phi.to_string()));
    }
    let syl = g.sylow_subcoset(phi);
    let l = Subcoset::new(g, syl.wl.clone(), syl.w0)?.as_coset(g)?;
    let go = order_polys(g);
    let lo = order_polys(&l);
    let rel = Cyclo::from_int(syl.relative_order as i64);
    let q = |a: &LaurentPoly, b: &LaurentPoly| -> Result<LaurentPoly, OrdersError> {
        a.div_exact(&b.scale(&rel)).map_err(|_| OrdersError::NotDivisible)
    };
    let qc = q(&go.order_c, &lo.order_c)?;
    let qnc = q(&go.order_nc, &lo.order_nc)?;
    Ok(SylowReport {
        phi: phi.clone(),
        multiplicity: mult,
        torus_dim: syl.s_basis.cols,
        relative_order: syl.relative_order,
        remainder_c: qc.mod_reduce(phi),
        remainder_nc: qnc.mod_reduce(phi),
    })
}

/// The K_W-cyclotomic factors of P_𝔾.
pub fn poincare_divisors(g: &ReflectionCoset) -> Vec<LaurentPoly> {
    let k = AbelianField::cyclotomic(g.field().conductor());
    let p = g.poincare();
    let top = p.degree().max(1) as u64;
    let mut out = Vec::new();
    for d in 1..=top {
        for f in k_cyclotomic_factors(d, &k) {
            if p.multiplicity_of(&f.poly) > 0 {
                out.push(f.poly);
            }
        }
    }
    out
}

pub fn sylow_suite(g: &ReflectionCoset) -> Result<Vec<SylowReport>, OrdersError> {
    poincare_divisors(g).iter().map(|phi| sylow_congruence_check(g, phi)).collect()
}

trait Multiplicity {
    fn multiplicity_of(&self, f: &LaurentPoly) -> usize;
}

impl Multiplicity for LaurentPoly {
    fn multiplicity_of(&self, f: &LaurentPoly) -> usize {
        let mut k = 0;
        let mut p = self.clone();
        while let Ok(q) = p.div_exact(f) {
            k += 1;
            p = q;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u64, k: i64) -> Cyclo {
        Cyclo::root_of_unity(n, k)
    }

    #[test]
    fn z3_torus_fake_degree() {
        let g = ReflectionCoset::builtin("Z3").unwrap();
        let c = (0..3).find(|&c| g.class_rep(c) == Mat::diag(&[e(3, 1)])).unwrap();
        let f = fake_degree_torus(&g, c);
        assert_eq!(f, LaurentPoly::from_coeffs(vec![Cyclo::one(), e(3, 2), e(3, 1)]));
        assert_eq!(f.evaluate(&e(3, 1)).unwrap(), Cyclo::from_int(3));
        assert_eq!(torus_order(&g, c), LaurentPoly::linear(&e(3, 1)));
    }

    #[test]
    fn z3_orders() {
        let g = ReflectionCoset::builtin("Z3").unwrap();
        let o = order_polys(&g);
        let want = LaurentPoly::from_terms([(4, Cyclo::one()), (1, Cyclo::from_int(-1))]);
        assert_eq!(o.order_c, want);
        assert_eq!(o.order_nc, LaurentPoly::from_terms([(5, Cyclo::one()), (2, Cyclo::from_int(-1))]));
        assert_eq!(det_character_values(&g), (Cyclo::one(), Cyclo::one(), Cyclo::one()));
    }

    #[test]
    fn twist_inside_w_is_split() {
        let g = ReflectionCoset::from_generators(
            "Z3",
            vec![Mat::diag(&[e(3, 1)])],
            vec!['s'],
            Some(Mat::diag(&[e(3, 1)])),
            100,
        )
        .unwrap();
        assert!(g.is_split());
        assert_eq!(det_character_values(&g), (Cyclo::one(), Cyclo::one(), Cyclo::one()));
    }
}
