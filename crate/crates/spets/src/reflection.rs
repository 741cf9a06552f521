//! Reflection cosets given by cyclotomic matrices: enumeration, classes,
//! hyperplanes, invariant degrees, regular elements, centralizers, Sylow
//! subcosets and character tables.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use num_rational::BigRational;
use thiserror::Error;

use crate::cyclotomic::{Cyclo, CycloField};
use crate::laurent::LaurentPoly;

#[derive(Debug, Error)]
pub enum ReflectionError {
    #[error("group closure exceeded {0} elements")]
    OrderBound(usize),
    #[error("generator {0} does not have finite order")]
    InfiniteOrder(usize),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("element is not {0}-regular")]
    NotRegular(String),
    #[error("the Poincaré polynomial did not factor into degrees")]
    Degrees,
    #[error("character table: {0}")]
    CharTable(String),
}

/// Dense matrix over cyclotomic numbers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<Cyclo>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, a: Vec<Cyclo>) -> Self {
        assert_eq!(a.len(), rows * cols);
        Mat { rows, cols, a }
    }

    pub fn from_rows(rows: Vec<Vec<Cyclo>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Mat::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat::new(rows, cols, vec![Cyclo::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Mat::diag(&vec![Cyclo::one(); n])
    }

    pub fn scalar(n: usize, c: &Cyclo) -> Self {
        Mat::diag(&vec![c.clone(); n])
    }

    pub fn diag(d: &[Cyclo]) -> Self {
        let n = d.len();
        let mut m = Mat::zero(n, n);
        for (i, c) in d.iter().enumerate() {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Cyclo) {
        self.a[i * self.cols + j] = c;
    }

    pub fn row(&self, i: usize) -> Vec<Cyclo> {
        self.a[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.rows)
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows);
        let mut m = Mat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        m.a[idx] = &m.a[idx] + &(a * b);
                    }
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat::new(self.rows, self.cols, self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        Mat::new(self.rows, self.cols, self.a.iter().zip(&o.a).map(|(x, y)| x - y).collect())
    }

    pub fn scale(&self, c: &Cyclo) -> Mat {
        Mat::new(self.rows, self.cols, self.a.iter().map(|x| x * c).collect())
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn conj(&self) -> Mat {
        Mat::new(self.rows, self.cols, self.a.iter().map(Cyclo::conj).collect())
    }

    pub fn trace(&self) -> Cyclo {
        (0..self.rows.min(self.cols)).fold(Cyclo::zero(), |s, i| s + self.get(i, i))
    }

    pub fn hstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows);
        let mut rows = Vec::new();
        for i in 0..self.rows {
            let mut r = self.row(i);
            r.extend(o.row(i));
            rows.push(r);
        }
        Mat::new(self.rows, self.cols + o.cols, rows.into_iter().flatten().collect())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.a.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(r, c).inv().unwrap();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {v : M v = 0}, as the columns of the result.
    pub fn nullspace(&self) -> Mat {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut out = Mat::zero(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, Cyclo::one());
            for (i, &p) in piv.iter().enumerate() {
                out.set(p, k, -r.get(i, f));
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<Mat> {
        let n = self.rows;
        let (r, piv) = self.hstack(&Mat::identity(n)).rref();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(m)
    }

    pub fn det(&self) -> Cyclo {
        let n = self.rows;
        let mut m = self.clone();
        let mut d = Cyclo::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Cyclo::zero();
            };
            if p != c {
                for j in 0..n {
                    m.a.swap(c * n + j, p * n + j);
                }
                d = -d;
            }
            let piv = m.get(c, c).clone();
            d = &d * &piv;
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        d
    }

    /// det(1 − x·M) via Newton's identities.
    pub fn det_one_minus_x(&self) -> LaurentPoly {
        let n = self.rows;
        let mut p = Vec::new();
        let mut pw = Mat::identity(n);
        for _ in 0..n {
            pw = pw.mul(self);
            p.push(pw.trace());
        }
        let mut e = vec![Cyclo::one()];
        for k in 1..=n {
            let mut s = Cyclo::zero();
            for i in 1..=k {
                let t = &e[k - i] * &p[i - 1];
                s = if i % 2 == 1 { s + t } else { s - t };
            }
            e.push(s * Cyclo::from_frac(1, k as i64));
        }
        LaurentPoly::from_terms(e.into_iter().enumerate().map(|(k, c)| {
            (k as i64, if k % 2 == 1 { -c } else { c })
        }))
    }

    /// det(x − M).
    pub fn char_poly(&self) -> LaurentPoly {
        let n = self.rows as i64;
        LaurentPoly::from_terms(self.det_one_minus_x().terms().map(|(k, c)| (n - k, c.clone())))
    }

    /// P(M) for an ordinary polynomial P.
    pub fn eval_poly(&self, p: &LaurentPoly) -> Mat {
        let n = self.rows;
        let mut acc = Mat::zero(n, n);
        let mut pw = Mat::identity(n);
        let mut k = 0;
        for (e, c) in p.terms() {
            assert!(e >= 0, "matrix polynomial with negative exponent");
            while k < e {
                pw = pw.mul(self);
                k += 1;
            }
            acc = acc.add(&pw.scale(c));
        }
        acc
    }

    pub fn order(&self) -> Option<u64> {
        let id = Mat::identity(self.rows);
        let mut m = self.clone();
        for k in 1..=1000u64 {
            if m == id {
                return Some(k);
            }
            m = m.mul(self);
        }
        None
    }

    pub fn field(&self) -> CycloField {
        self.a.iter().fold(CycloField::rationals(), |f, c| f.join(&c.field()))
    }

    pub fn entries(&self) -> &[Cyclo] {
        &self.a
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Matrix of v restricted to the invariant subspace spanned by the columns
/// of `basis`: v·B = B·M.
pub fn restrict(v: &Mat, basis: &Mat) -> Mat {
    let (_, rows) = basis.transpose().rref();
    let a = basis.cols;
    let vb = v.mul(basis);
    let mut bp = Mat::zero(a, a);
    let mut vp = Mat::zero(a, a);
    for (i, &r) in rows.iter().enumerate() {
        for j in 0..a {
            bp.set(i, j, basis.get(r, j).clone());
            vp.set(i, j, vb.get(r, j).clone());
        }
    }
    bp.inverse().expect("basis has full rank").mul(&vp)
}

#[derive(Debug, Clone)]
pub struct ClassInfo {
    /// Index of the representative in the coset element list.
    pub rep: usize,
    pub size: usize,
    pub word: String,
    pub order: u64,
    /// Eigenvalue multiset as exponents k/order of exp(2πi k/order).
    pub eigen: Vec<BigRational>,
}

#[derive(Debug, Clone)]
pub struct HyperplaneOrbitData {
    pub size: usize,
    pub e_h: usize,
    /// A linear form whose kernel is a representative hyperplane.
    pub alpha: Vec<Cyclo>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeData {
    /// Pairs (d_i, ζ_i), sorted by degree.
    pub degrees: Vec<(u64, Cyclo)>,
}

impl DegreeData {
    pub fn is_split(&self) -> bool {
        self.degrees.iter().all(|(_, z)| z.is_one())
    }
}

#[derive(Debug, Clone)]
pub struct RegularElementData {
    pub class: usize,
    pub zeta: Cyclo,
    pub d: u64,
    pub eigenspace_dim: usize,
    pub a: usize,
}

struct Hyperplanes {
    /// Normalized linear form of each reflecting hyperplane.
    forms: Vec<Vec<Cyclo>>,
    /// Reflections (element indices) fixing each hyperplane.
    refl: Vec<Vec<usize>>,
    orbits: Vec<HyperplaneOrbitData>,
}

/// A reflection coset (V, Wφ) with enumerated elements.
pub struct ReflectionCoset {
    name: String,
    rank: usize,
    gens: Vec<Mat>,
    gen_names: Vec<char>,
    phi: Mat,
    /// Elements of W.
    elements: Vec<Mat>,
    words: Vec<String>,
    index: HashMap<Mat, usize>,
    classes: OnceLock<(Vec<ClassInfo>, Vec<usize>)>,
    hyper: OnceLock<Hyperplanes>,
    degrees: OnceLock<Result<DegreeData, String>>,
    split_poincare: OnceLock<LaurentPoly>,
}

fn normalize_form(v: &[Cyclo]) -> Vec<Cyclo> {
    let lead = v.iter().find(|c| !c.is_zero()).expect("nonzero form").inv().unwrap();
    v.iter().map(|c| c * &lead).collect()
}

pub const DEFAULT_ORDER_BOUND: usize = 100_000;

impl ReflectionCoset {
    /// Closure of the generators; `phi` defaults to the identity.
    pub fn from_generators(
        name: &str,
        gens: Vec<Mat>,
        gen_names: Vec<char>,
        phi: Option<Mat>,
        bound: usize,
    ) -> Result<Self, ReflectionError> {
        assert!(!gens.is_empty(), "no generators");
        let rank = gens[0].rows;
        for (i, g) in gens.iter().enumerate() {
            if g.order().is_none() {
                return Err(ReflectionError::InfiniteOrder(i));
            }
        }
        let id = Mat::identity(rank);
        let mut elements = vec![id.clone()];
        let mut words = vec![String::new()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (g, gm) in gens.iter().enumerate() {
                let p = elements[i].mul(gm);
                if index.contains_key(&p) {
                    continue;
                }
                if elements.len() >= bound {
                    return Err(ReflectionError::OrderBound(bound));
                }
                index.insert(p.clone(), elements.len());
                let mut w = words[i].clone();
                w.push(gen_names[g]);
                words.push(w);
                elements.push(p);
                queue.push_back(elements.len() - 1);
            }
        }
        // a twist lying in W gives the same coset as the identity
        let phi = phi.filter(|m| !index.contains_key(m)).unwrap_or_else(|| Mat::identity(rank));
        Ok(ReflectionCoset {
            name: name.to_string(),
            rank,
            gens,
            gen_names,
            phi,
            elements,
            words,
            index,
            classes: OnceLock::new(),
            hyper: OnceLock::new(),
            degrees: OnceLock::new(),
            split_poincare: OnceLock::new(),
        })
    }

    /// Builtins: `Z<e>`, `G(m,p,n)`, `G4`.
    pub fn builtin(name: &str) -> Result<Self, ReflectionError> {
        let bad = || ReflectionError::UnknownGroup(name.to_string());
        let t = name.trim();
        let e = |n: u64, k: i64| Cyclo::root_of_unity(n, k);
        if let Some(rest) = t.strip_prefix('Z') {
            let n: u64 = rest.trim_start_matches('_').parse().map_err(|_| bad())?;
            if n == 0 || n > 64 {
                return Err(bad());
            }
            return ReflectionCoset::from_generators(
                &format!("Z{n}"),
                vec![Mat::diag(&[e(n, 1)])],
                vec!['s'],
                None,
                DEFAULT_ORDER_BOUND,
            );
        }
        if t == "G4" {
            // two order-3 reflections over Z[ζ3] satisfying sts = tst
            let w = e(3, 1);
            let w2 = e(3, 2);
            let s = Mat::from_rows(vec![vec![Cyclo::zero(), w2.clone()], vec![-&w2, -&w2]]);
            let tt = Mat::from_rows(vec![vec![w.clone(), Cyclo::zero()], vec![-&w, Cyclo::one()]]);
            return ReflectionCoset::from_generators("G4", vec![s, tt], vec!['s', 't'], None, DEFAULT_ORDER_BOUND);
        }
        let params: Vec<u64> = if t == "G312" {
            vec![3, 1, 2]
        } else {
            let inner = t.strip_prefix("G(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            inner.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        let [m, p, n] = params[..] else { return Err(bad()) };
        if m == 0 || p == 0 || n == 0 || m % p != 0 {
            return Err(bad());
        }
        let n = n as usize;
        let mut gens = Vec::new();
        let mut names = Vec::new();
        if p < m {
            let mut d = vec![Cyclo::one(); n];
            d[0] = e(m, p as i64);
            gens.push(Mat::diag(&d));
            names.push('t');
        }
        if p > 1 && n >= 2 {
            let mut s = Mat::identity(n);
            s.set(0, 0, Cyclo::zero());
            s.set(1, 1, Cyclo::zero());
            s.set(0, 1, e(m, -1));
            s.set(1, 0, e(m, 1));
            gens.push(s);
            names.push('u');
        }
        let letters = ['s', 'r', 'q', 'p', 'o', 'n', 'm', 'l', 'k'];
        for i in 0..n.saturating_sub(1) {
            let mut s = Mat::identity(n);
            s.set(i, i, Cyclo::zero());
            s.set(i + 1, i + 1, Cyclo::zero());
            s.set(i, i + 1, Cyclo::one());
            s.set(i + 1, i, Cyclo::one());
            gens.push(s);
            names.push(*letters.get(i).ok_or_else(bad)?);
        }
        if gens.is_empty() {
            return Err(bad());
        }
        let label = if (m, p, n) == (3, 1, 2) { "G312".to_string() } else { format!("G({m},{p},{n})") };
        ReflectionCoset::from_generators(&label, gens, names, None, DEFAULT_ORDER_BOUND)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn gens(&self) -> &[Mat] {
        &self.gens
    }

    pub fn gen_names(&self) -> &[char] {
        &self.gen_names
    }

    pub fn phi(&self) -> &Mat {
        &self.phi
    }

    pub fn is_split(&self) -> bool {
        self.phi.is_identity()
    }

    pub fn element(&self, i: usize) -> &Mat {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    /// The coset element w_i·φ.
    pub fn coset_element(&self, i: usize) -> Mat {
        self.elements[i].mul(&self.phi)
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn word(&self, i: usize) -> &str {
        &self.words[i]
    }

    /// Evaluates a word in the generator names; "1" or "" is the identity.
    pub fn eval_word(&self, w: &str) -> Option<usize> {
        let mut m = Mat::identity(self.rank);
        for ch in w.chars().filter(|c| *c != '1') {
            let g = self.gen_names.iter().position(|c| *c == ch)?;
            m = m.mul(&self.gens[g]);
        }
        self.index_of(&m)
    }

    pub fn field(&self) -> CycloField {
        self.gens.iter().fold(self.phi.field(), |f, g| f.join(&g.field()))
    }

    fn eigen_exponents(m: &Mat, order: u64) -> Vec<BigRational> {
        let n = m.rows;
        let mut out = Vec::new();
        for k in 0..order {
            let z = Cyclo::root_of_unity(order, k as i64);
            let dim = n - m.sub(&Mat::scalar(n, &z)).rank();
            for _ in 0..dim {
                out.push(BigRational::new((k as i64).into(), (order as i64).into()));
            }
        }
        out
    }

    fn compute_classes(&self) -> (Vec<ClassInfo>, Vec<usize>) {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        let ginv: Vec<Mat> = self.gens.iter().map(|g| g.inverse().unwrap()).collect();
        let phinv = self.phi.inverse().expect("invertible twist");
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = raw.len();
            let mut members = vec![start];
            class_of[start] = c;
            let mut q = VecDeque::from([start]);
            while let Some(i) = q.pop_front() {
                let x = self.coset_element(i);
                for (g, gi) in self.gens.iter().zip(&ginv) {
                    let y = g.mul(&x).mul(gi).mul(&phinv);
                    let j = self.index[&y];
                    if class_of[j] == usize::MAX {
                        class_of[j] = c;
                        members.push(j);
                        q.push_back(j);
                    }
                }
            }
            raw.push(members);
        }
        let mut infos: Vec<(ClassInfo, Vec<usize>)> = raw
            .into_iter()
            .map(|members| {
                let rep = *members
                    .iter()
                    .min_by(|a, b| (self.words[**a].len(), &self.words[**a]).cmp(&(self.words[**b].len(), &self.words[**b])))
                    .unwrap();
                let m = self.coset_element(rep);
                let order = m.order().expect("finite order");
                let eigen = ReflectionCoset::eigen_exponents(&m, order);
                let word = if self.words[rep].is_empty() { "1".to_string() } else { self.words[rep].clone() };
                (ClassInfo { rep, size: members.len(), word, order, eigen }, members)
            })
            .collect();
        infos.sort_by(|(a, _), (b, _)| {
            let ka = (a.size, a.word != "1", format!("{:?}", a.eigen), a.word.len(), a.word.clone());
            let kb = (b.size, b.word != "1", format!("{:?}", b.eigen), b.word.len(), b.word.clone());
            ka.cmp(&kb)
        });
        let mut class_of = vec![0; n];
        for (c, (_, members)) in infos.iter().enumerate() {
            for &m in members {
                class_of[m] = c;
            }
        }
        (infos.into_iter().map(|(c, _)| c).collect(), class_of)
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes.get_or_init(|| self.compute_classes()).0
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.classes.get_or_init(|| self.compute_classes()).1[element]
    }

    pub fn class_rep(&self, c: usize) -> Mat {
        self.coset_element(self.classes()[c].rep)
    }

    fn compute_hyperplanes(&self) -> Hyperplanes {
        let r = self.rank;
        let id = Mat::identity(r);
        let mut forms: Vec<Vec<Cyclo>> = Vec::new();
        let mut refl: Vec<Vec<usize>> = Vec::new();
        let mut lookup: HashMap<Vec<Cyclo>, usize> = HashMap::new();
        for (i, w) in self.elements.iter().enumerate() {
            let d = w.sub(&id);
            if d.rank() != 1 {
                continue;
            }
            let row = (0..r).map(|k| d.row(k)).find(|x| x.iter().any(|c| !c.is_zero())).unwrap();
            let f = normalize_form(&row);
            let h = *lookup.entry(f.clone()).or_insert_with(|| {
                forms.push(f);
                refl.push(Vec::new());
                forms.len() - 1
            });
            refl[h].push(i);
        }
        // W acts on forms by α ↦ α·w^{-1}
        let mut orbit_of = vec![usize::MAX; forms.len()];
        let mut orbits = Vec::new();
        let ginv: Vec<Mat> = self.gens.iter().map(|g| g.inverse().unwrap()).collect();
        for h in 0..forms.len() {
            if orbit_of[h] != usize::MAX {
                continue;
            }
            let o = orbits.len();
            orbit_of[h] = o;
            let mut size = 1;
            let mut q = VecDeque::from([h]);
            while let Some(k) = q.pop_front() {
                let row = Mat::new(1, r, forms[k].clone());
                for gi in &ginv {
                    let img = normalize_form(row.mul(gi).entries());
                    let j = lookup[&img];
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = o;
                        size += 1;
                        q.push_back(j);
                    }
                }
            }
            orbits.push(HyperplaneOrbitData { size, e_h: refl[h].len() + 1, alpha: forms[h].clone() });
        }
        Hyperplanes { forms, refl, orbits }
    }

    fn hyper(&self) -> &Hyperplanes {
        self.hyper.get_or_init(|| self.compute_hyperplanes())
    }

    pub fn hyperplane_orbits(&self) -> &[HyperplaneOrbitData] {
        &self.hyper().orbits
    }

    pub fn hyperplane_forms(&self) -> &[Vec<Cyclo>] {
        &self.hyper().forms
    }

    /// Reflections (element indices) with the given hyperplane.
    pub fn reflections_of(&self, h: usize) -> &[usize] {
        &self.hyper().refl[h]
    }

    pub fn n_ref(&self) -> usize {
        self.hyper().refl.iter().map(|r| r.len()).sum()
    }

    pub fn n_hyp(&self) -> usize {
        self.hyper().forms.len()
    }

    pub fn e_w(&self) -> usize {
        self.n_ref() + self.n_hyp()
    }

    /// Δ_W(φ̄): the scalar by which φ acts on the discriminant Π α_H^{e_H}.
    pub fn discriminant_twist(&self) -> Cyclo {
        let r = self.rank;
        let phinv = self.phi.inverse().unwrap();
        let hy = self.hyper();
        let mut out = Cyclo::one();
        for (f, refl) in hy.forms.iter().zip(&hy.refl) {
            let img = Mat::new(1, r, f.clone()).mul(&phinv);
            let c = img.entries().iter().find(|c| !c.is_zero()).unwrap().clone();
            out = out * c.pow(refl.len() as i64 + 1);
        }
        out
    }

    /// Scalar matrices in W, as (element index, scalar).
    pub fn center_scalars(&self) -> Vec<(usize, Cyclo)> {
        let r = self.rank;
        self.elements
            .iter()
            .enumerate()
            .filter_map(|(i, m)| {
                let c = m.get(0, 0).clone();
                (*m == Mat::scalar(r, &c)).then_some((i, c))
            })
            .collect()
    }

    /// Power series of (1/|W|) Σ 1/det(1 − wφx) up to x^`len-1`.
    fn molien_series(&self, phi: &Mat, len: usize) -> Vec<Cyclo> {
        let mut acc = vec![Cyclo::zero(); len];
        let classes = self.classes();
        let use_classes = *phi == self.phi;
        let items: Vec<(Mat, usize)> = if use_classes {
            classes.iter().map(|c| (self.coset_element(c.rep), c.size)).collect()
        } else {
            self.elements.iter().map(|w| (w.mul(phi), 1)).collect()
        };
        for (m, mult) in items {
            let den = m.det_one_minus_x();
            let inv = series_inverse(&den, len);
            let k = Cyclo::from_int(mult as i64);
            for (a, b) in acc.iter_mut().zip(inv) {
                *a = &*a + &(&b * &k);
            }
        }
        let f = Cyclo::from_frac(1, self.order() as i64);
        acc.into_iter().map(|c| c * &f).collect()
    }

    fn poincare_for(&self, phi: &Mat) -> Result<LaurentPoly, ReflectionError> {
        let top = self.n_ref() + self.rank;
        let len = 2 * top + 2;
        let ser = self.molien_series(phi, len);
        let inv = series_inverse(&LaurentPoly::from_coeffs(ser), len);
        if inv[top + 1..].iter().any(|c| !c.is_zero()) {
            return Err(ReflectionError::Degrees);
        }
        Ok(LaurentPoly::from_coeffs(inv[..=top].to_vec()))
    }

    /// P_𝔾(x) = 1 / ((1/|W|) Σ 1/det(1 − wφx)).
    pub fn poincare(&self) -> LaurentPoly {
        let d = self.degrees().expect("degree data");
        d.degrees.iter().fold(LaurentPoly::one(), |p, (di, z)| {
            &p * &LaurentPoly::from_terms([(0, Cyclo::one()), (*di as i64, -z)])
        })
    }

    fn split_poincare(&self) -> &LaurentPoly {
        self.split_poincare.get_or_init(|| {
            self.poincare_for(&Mat::identity(self.rank)).expect("Poincaré polynomial of W")
        })
    }

    fn compute_degrees(&self) -> Result<DegreeData, ReflectionError> {
        // split degrees by peeling off (1 − x^k) at the lowest term
        let mut p = self.split_poincare().clone();
        let mut split = Vec::new();
        while p.degree() > 0 {
            let (k, _) = p.terms().find(|(e, _)| *e > 0).unwrap();
            let f = LaurentPoly::from_terms([(0, Cyclo::one()), (k, Cyclo::from_int(-1))]);
            p = p.div_exact(&f).map_err(|_| ReflectionError::Degrees)?;
            split.push(k as u64);
        }
        if split.len() != self.rank || !p.is_one_poly() {
            return Err(ReflectionError::Degrees);
        }
        split.sort();
        if self.is_split() {
            return Ok(DegreeData { degrees: split.into_iter().map(|d| (d, Cyclo::one())).collect() });
        }
        let target = self.poincare_for(&self.phi)?;
        let ord = self.phi.order().ok_or(ReflectionError::Degrees)?;
        let m = ord.lcm(&2);
        fn dfs(
            target: &LaurentPoly,
            degs: &[u64],
            m: u64,
            acc: &mut Vec<(u64, Cyclo)>,
        ) -> bool {
            if degs.is_empty() {
                return target.is_one_poly();
            }
            for k in 0..m {
                let z = Cyclo::root_of_unity(m, k as i64);
                let f = LaurentPoly::from_terms([(0, Cyclo::one()), (degs[0] as i64, -&z)]);
                if let Ok(q) = target.div_exact(&f) {
                    acc.push((degs[0], z));
                    if dfs(&q, &degs[1..], m, acc) {
                        return true;
                    }
                    acc.pop();
                }
            }
            false
        }
        let mut acc = Vec::new();
        if dfs(&target, &split, m, &mut acc) {
            Ok(DegreeData { degrees: acc })
        } else {
            Err(ReflectionError::Degrees)
        }
    }

    pub fn degrees(&self) -> Result<&DegreeData, ReflectionError> {
        self.degrees
            .get_or_init(|| self.compute_degrees().map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|_| ReflectionError::Degrees)
    }

    /// Classes whose ζ-eigenspace has maximal dimension and avoids every
    /// reflecting hyperplane.
    pub fn regular_classes(&self, zeta: &Cyclo) -> Vec<RegularElementData> {
        let (d, _) = zeta.root_of_unity_exponent().expect("ζ must be a root of unity");
        let r = self.rank;
        let dims: Vec<usize> = (0..self.classes().len())
            .map(|c| r - self.class_rep(c).sub(&Mat::scalar(r, zeta)).rank())
            .collect();
        let a = dims.iter().copied().max().unwrap_or(0);
        if a == 0 {
            return Vec::new();
        }
        let forms = self.hyperplane_forms();
        (0..dims.len())
            .filter(|&c| dims[c] == a)
            .filter(|&c| {
                let e = self.class_rep(c).sub(&Mat::scalar(r, zeta)).nullspace();
                forms.iter().all(|f| {
                    let row = Mat::new(1, r, f.clone()).mul(&e);
                    row.entries().iter().any(|x| !x.is_zero())
                })
            })
            .map(|c| RegularElementData { class: c, zeta: zeta.clone(), d, eigenspace_dim: a, a })
            .collect()
    }

    /// Indices of the elements centralizing the coset element `x`.
    pub fn centralizer_of(&self, x: &Mat) -> Vec<usize> {
        let phinv = self.phi.inverse().unwrap();
        (0..self.order())
            .filter(|&i| {
                let v = &self.elements[i];
                // v (wφ) v^{-1} = wφ  ⇔  v·wφ = wφ·φ^{-1} v φ
                v.mul(x) == x.mul(&phinv).mul(v).mul(&self.phi)
            })
            .collect()
    }

    /// Elements of W fixing every column of `basis`.
    pub fn pointwise_fixator(&self, basis: &Mat) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.elements[i].mul(basis) == *basis).collect()
    }

    /// Elements of W mapping the column span of `basis` to itself.
    pub fn setwise_stabilizer(&self, basis: &Mat) -> Vec<usize> {
        let k = basis.rank();
        (0..self.order())
            .filter(|&i| basis.hstack(&self.elements[i].mul(basis)).rank() == k)
            .collect()
    }

    /// N^ref and N^hyp of the reflection subgroup formed by `subgroup`.
    pub fn subgroup_reflection_counts(&self, subgroup: &[usize]) -> (usize, usize) {
        let set: BTreeSet<usize> = subgroup.iter().copied().collect();
        let mut nref = 0;
        let mut nhyp = 0;
        for h in 0..self.n_hyp() {
            let k = self.reflections_of(h).iter().filter(|i| set.contains(i)).count();
            nref += k;
            if k > 0 {
                nhyp += 1;
            }
        }
        (nref, nhyp)
    }

    /// The centralizer W(wφ) acting on V(wφ, ζ), with orbit data.
    pub fn centralizer_coset(&self, class: usize, zeta: &Cyclo) -> Result<CentralizerData, ReflectionError> {
        if !self.regular_classes(zeta).iter().any(|r| r.class == class) {
            return Err(ReflectionError::NotRegular(zeta.to_string()));
        }
        let r = self.rank;
        let w = self.class_rep(class);
        let basis = w.sub(&Mat::scalar(r, zeta)).nullspace();
        let cent = self.centralizer_of(&w);
        let mut mats: Vec<Mat> = cent.iter().map(|&i| restrict(&self.elements[i], &basis)).collect();
        mats.sort();
        mats.dedup();
        let gens: Vec<Mat> = mats.iter().filter(|m| !m.is_identity()).cloned().collect();
        let names: Vec<char> = (0..gens.len()).map(|i| char::from_u32(0x3b1 + i as u32).unwrap_or('?')).collect();
        let (gens, names) = if gens.is_empty() {
            (vec![Mat::identity(basis.cols)], vec!['1'])
        } else {
            (gens, names)
        };
        let sub = ReflectionCoset::from_generators(
            &format!("{}({})", self.name, zeta),
            gens,
            names,
            None,
            DEFAULT_ORDER_BOUND,
        )?;
        let mut orbits = Vec::new();
        for o in sub.hyperplane_orbits() {
            // the hyperplane of V(wφ) as a subspace of V
            let alpha = Mat::new(1, basis.cols, o.alpha.clone());
            let inner = alpha.nullspace();
            let i_space = basis.mul(&inner);
            let wi = if i_space.cols == 0 { (0..self.order()).collect() } else { self.pointwise_fixator(&i_space) };
            let (nref, nhyp) = self.subgroup_reflection_counts(&wi);
            orbits.push(CentralOrbit { e_i: o.e_h, size: o.size, e_wi: nref + nhyp, n_ref_wi: nref, n_hyp_wi: nhyp });
        }
        Ok(CentralizerData { coset: sub, basis, centralizer: cent, orbits })
    }

    /// Φ-Sylow data for a polynomial Φ dividing P_𝔾.
    pub fn sylow_subcoset(&self, phi_poly: &LaurentPoly) -> SylowData {
        let deg = phi_poly.degree() as usize;
        let r = self.rank;
        let mut best = (0usize, 0usize);
        for c in 0..self.classes().len() {
            let m = self.class_rep(c);
            let k = r - m.eval_poly(phi_poly).rank();
            if k > best.0 {
                best = (k, c);
            }
        }
        let (k, c) = best;
        let w0 = self.classes()[c].rep;
        let x = self.coset_element(w0);
        let s_basis = x.eval_poly(phi_poly).nullspace();
        let wl = if k == 0 { (0..self.order()).collect() } else { self.pointwise_fixator(&s_basis) };
        let wl_set: BTreeSet<usize> = wl.iter().copied().collect();
        let xinv = x.inverse().unwrap();
        let norm: Vec<usize> = (0..self.order())
            .filter(|&i| {
                let v = &self.elements[i];
                if k > 0 && s_basis.hstack(&v.mul(&s_basis)).rank() != k {
                    return false;
                }
                let c = v.mul(&x).mul(&v.inverse().unwrap()).mul(&xinv);
                self.index.get(&c).is_some_and(|j| wl_set.contains(j))
            })
            .collect();
        SylowData { a: k / deg.max(1), w0, s_basis, relative_order: norm.len() / wl.len(), wl, normalizer: norm }
    }

    /// Character table computed from homomorphisms; abelian groups only.
    pub fn abelian_character_table(&self) -> Result<CharacterTable, ReflectionError> {
        let n = self.order();
        if self.classes().len() != n {
            return Err(ReflectionError::CharTable("group is not abelian".into()));
        }
        let orders: Vec<u64> = self.gens.iter().map(|g| g.order().unwrap()).collect();
        let mut chars: Vec<Vec<Cyclo>> = Vec::new();
        let total: u64 = orders.iter().product();
        for code in 0..total {
            let mut exps = Vec::new();
            let mut rest = code;
            for o in &orders {
                exps.push(rest % o);
                rest /= o;
            }
            // value on each element via its word; then check multiplicativity
            let vals: Vec<Cyclo> = (0..n)
                .map(|i| {
                    self.words[i].chars().fold(Cyclo::one(), |acc, ch| {
                        let g = self.gen_names.iter().position(|c| *c == ch).unwrap();
                        acc * Cyclo::root_of_unity(orders[g], exps[g] as i64)
                    })
                })
                .collect();
            let ok = (0..n).all(|i| {
                self.gens.iter().enumerate().all(|(g, gm)| {
                    let j = self.index[&self.elements[i].mul(gm)];
                    vals[j] == &vals[i] * &Cyclo::root_of_unity(orders[g], exps[g] as i64)
                })
            });
            if ok {
                let by_class: Vec<Cyclo> =
                    (0..n).map(|c| vals[self.classes()[c].rep].clone()).collect();
                chars.push(by_class);
            }
        }
        let names = if self.gens.len() == 1 {
            // order characters by the exponent j of s ↦ ζ^j
            let e = orders[0];
            let s_class = self.class_of(self.eval_word(&self.gen_names[0].to_string()).unwrap());
            let mut keyed: Vec<(u64, Vec<Cyclo>)> = chars
                .into_iter()
                .map(|ch| {
                    let z = ch[s_class].root_of_unity_exponent().unwrap();
                    let j = if z.0 == 1 { 0 } else { z.1 * (e / z.0) };
                    (j, ch)
                })
                .collect();
            keyed.sort_by_key(|(j, _)| *j);
            chars = keyed.iter().map(|(_, c)| c.clone()).collect();
            keyed.iter().map(|(j, _)| format!("chi{j}")).collect()
        } else {
            (0..chars.len()).map(|i| format!("chi{i}")).collect()
        };
        let t = CharacterTable { names, values: chars, provenance: Provenance::Computed };
        t.check_orthogonality(self)?;
        Ok(t)
    }
}

trait IsOne {
    fn is_one_poly(&self) -> bool;
}

impl IsOne for LaurentPoly {
    fn is_one_poly(&self) -> bool {
        *self == LaurentPoly::one()
    }
}

/// Inverse of a power series with invertible constant term, to `len` terms.
pub fn series_inverse(p: &LaurentPoly, len: usize) -> Vec<Cyclo> {
    let c: Vec<Cyclo> = (0..len as i64).map(|k| p.coeff(k)).collect();
    let c0inv = c[0].inv().expect("invertible constant term");
    let mut out: Vec<Cyclo> = Vec::with_capacity(len);
    for k in 0..len {
        let mut s = if k == 0 { Cyclo::one() } else { Cyclo::zero() };
        for j in 1..=k {
            if !c[j].is_zero() {
                s = s - &c[j] * &out[k - j];
            }
        }
        out.push(s * &c0inv);
    }
    out
}

#[derive(Debug, Clone)]
pub struct CentralOrbit {
    pub e_i: usize,
    pub size: usize,
    pub e_wi: usize,
    pub n_ref_wi: usize,
    pub n_hyp_wi: usize,
}

impl CentralOrbit {
    /// m_I = e_{W_I}/e_I.
    pub fn m_i(&self) -> BigRational {
        BigRational::new((self.e_wi as i64).into(), (self.e_i as i64).into())
    }
}

pub struct CentralizerData {
    pub coset: ReflectionCoset,
    pub basis: Mat,
    pub centralizer: Vec<usize>,
    pub orbits: Vec<CentralOrbit>,
}

impl CentralizerData {
    pub fn is_cyclic(&self) -> bool {
        self.coset.rank() == 1
    }
}

#[derive(Debug, Clone)]
pub struct SylowData {
    pub a: usize,
    pub w0: usize,
    pub s_basis: Mat,
    pub wl: Vec<usize>,
    pub normalizer: Vec<usize>,
    pub relative_order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Ingested,
}

/// Irreducible characters as class functions, in the class order of the
/// group they were built for.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub names: Vec<String>,
    pub values: Vec<Vec<Cyclo>>,
    pub provenance: Provenance,
}

impl CharacterTable {
    pub fn degree(&self, i: usize) -> Cyclo {
        self.values[i][0].clone()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn check_orthogonality(&self, g: &ReflectionCoset) -> Result<(), ReflectionError> {
        let classes = g.classes();
        let n = Cyclo::from_int(g.order() as i64);
        if self.values.len() != classes.len() {
            return Err(ReflectionError::CharTable("number of characters differs from number of classes".into()));
        }
        for (i, a) in self.values.iter().enumerate() {
            for (j, b) in self.values.iter().enumerate() {
                let mut s = Cyclo::zero();
                for (c, cl) in classes.iter().enumerate() {
                    s = s + Cyclo::from_int(cl.size as i64) * &a[c] * b[c].conj();
                }
                let want = if i == j { n.clone() } else { Cyclo::zero() };
                if s != want {
                    return Err(ReflectionError::CharTable(format!(
                        "row orthogonality fails for {} and {}",
                        self.names[i], self.names[j]
                    )));
                }
            }
        }
        for c in 0..classes.len() {
            for d in 0..classes.len() {
                let mut s = Cyclo::zero();
                for row in &self.values {
                    s = s + &row[c] * row[d].conj();
                }
                let want = if c == d {
                    Cyclo::from_frac(g.order() as i64, classes[c].size as i64)
                } else {
                    Cyclo::zero()
                };
                if s != want {
                    return Err(ReflectionError::CharTable("column orthogonality fails".into()));
                }
            }
        }
        Ok(())
    }

    /// Values θ(wφ) on the class containing element `i`.
    pub fn value_at(&self, g: &ReflectionCoset, theta: usize, element: usize) -> Cyclo {
        self.values[theta][g.class_of(element)].clone()
    }
}

/// Matrix text helper used by diagnostics.
pub fn eigen_text(c: &ClassInfo) -> String {
    let v: Vec<String> = c.eigen.iter().map(|r| r.to_string()).collect();
    v.join(",")
}

/// Counts per order of the class representatives; handy for reports.
pub fn class_order_histogram(g: &ReflectionCoset) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for c in g.classes() {
        *h.entry(c.order).or_insert(0) += c.size;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_three() {
        let g = ReflectionCoset::builtin("Z3").unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.n_ref(), 2);
        assert_eq!(g.n_hyp(), 1);
        assert_eq!(g.poincare(), LaurentPoly::from_terms([(0, Cyclo::one()), (3, Cyclo::from_int(-1))]));
    }

    #[test]
    fn g4_basics() {
        let g = ReflectionCoset::builtin("G4").unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.n_ref(), 8);
        assert_eq!(g.n_hyp(), 4);
        let d: Vec<u64> = g.degrees().unwrap().degrees.iter().map(|x| x.0).collect();
        assert_eq!(d, vec![4, 6]);
        assert_eq!(g.classes().len(), 7);
        assert_eq!(g.center_scalars().len(), 2);
    }

    #[test]
    fn g312_basics() {
        let g = ReflectionCoset::builtin("G(3,1,2)").unwrap();
        assert_eq!(g.order(), 18);
        assert_eq!(g.classes().len(), 9);
        assert_eq!(g.n_ref(), 7);
        assert_eq!(g.n_hyp(), 5);
        let d: Vec<u64> = g.degrees().unwrap().degrees.iter().map(|x| x.0).collect();
        assert_eq!(d, vec![3, 6]);
    }

    #[test]
    fn newton_char_poly() {
        let m = Mat::diag(&[Cyclo::root_of_unity(3, 1), Cyclo::one()]);
        let want = LaurentPoly::linear(&Cyclo::root_of_unity(3, 1)) * LaurentPoly::linear(&Cyclo::one());
        assert_eq!(m.char_poly(), want);
    }
}
