//! Text formats: polynomial expressions, K-cyclotomic labels, character
//! tables, Schur element data and unipotent character tables, with exact
//! emission, diffing and the spetsial classification.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::cyclotomic::Cyclo;
use crate::laurent::{AbelianField, FracExpMonomial, LaurentPoly};
use crate::orders::order_polys;
use crate::reflection::{CharacterTable, Provenance, ReflectionCoset};
use crate::uch::{GroupData, Marker, UchError, UchTable, UnipotentCharacter};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Uch(#[from] UchError),
}

impl DataError {
    fn at(line: usize, col: usize, msg: impl Into<String>) -> Self {
        DataError::Parse { line, col, msg: msg.into() }
    }
}

/// Reference data directory: `$SPETS_DATA` or the one shipped with the crate.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("SPETS_DATA") {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")),
    }
}

pub fn read_data(rel: &str) -> Result<String, DataError> {
    read_file(&data_dir().join(rel))
}

pub fn read_file(path: &Path) -> Result<String, DataError> {
    std::fs::read_to_string(path).map_err(|source| DataError::Io { path: path.display().to_string(), source })
}

// ---------------------------------------------------------------------------
// expressions

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>, (usize, String)> {
    let b: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = b[st..i].iter().collect();
            out.push((Tok::Num(t.parse().map_err(|_| (st, "integer too large".to_string()))?), st));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == '_') {
                i += 1;
            }
            let mut t: String = b[st..i].iter().collect();
            if t.starts_with("Phi") {
                // primes or a parenthesized index belong to the label
                if i < b.len() && b[i] == '\'' {
                    while i < b.len() && b[i] == '\'' {
                        t.push('\'');
                        i += 1;
                    }
                } else if i < b.len() && b[i] == '(' {
                    let close = b[i..].iter().position(|&c| c == ')').map(|k| i + k);
                    if let Some(j) = close {
                        if b[i + 1..j].iter().all(|c| c.is_ascii_digit()) && j > i + 1 {
                            t.extend(&b[i..=j]);
                            i = j + 1;
                        }
                    }
                }
            }
            out.push((Tok::Ident(t), st));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err((i, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// Named K-cyclotomic polynomials, `Phi3'`, `Phi12(5)`, …
#[derive(Debug, Clone, Default)]
pub struct PhiLabels {
    pub sections: Vec<LabelSection>,
    by_label: HashMap<String, LaurentPoly>,
}

#[derive(Debug, Clone)]
pub struct LabelSection {
    pub title: String,
    pub field: AbelianField,
    /// (label, d, polynomial) in file order.
    pub entries: Vec<(String, u64, LaurentPoly)>,
}

impl PhiLabels {
    pub fn get(&self, label: &str) -> Option<&LaurentPoly> {
        self.by_label.get(label)
    }

    /// The label of a polynomial, if it has one.
    pub fn label_of(&self, p: &LaurentPoly) -> Option<&str> {
        self.sections.iter().flat_map(|s| &s.entries).find(|e| e.2 == *p).map(|e| e.0.as_str())
    }

    /// Format: `field <title> | <generator expressions>` followed by
    /// `<label> = <polynomial>` lines.
    pub fn parse(text: &str) -> Result<PhiLabels, DataError> {
        let mut out = PhiLabels::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('%') {
                continue;
            }
            if let Some(rest) = l.strip_prefix("field ") {
                let (title, gens) = rest.split_once('|').ok_or_else(|| DataError::at(line, 1, "expected `|`"))?;
                let gens = gens
                    .split(',')
                    .map(|g| parse_cyclo(g.trim()).map_err(|e| e.at_line(line)))
                    .collect::<Result<Vec<_>, _>>()?;
                out.sections.push(LabelSection {
                    title: title.trim().to_string(),
                    field: AbelianField::generated_by(&gens),
                    entries: Vec::new(),
                });
                continue;
            }
            let (label, poly) = l.split_once('=').ok_or_else(|| DataError::at(line, 1, "expected `=`"))?;
            let label = label.trim().to_string();
            let d = label_order(&label).ok_or_else(|| DataError::at(line, 1, format!("bad label {label}")))?;
            let p = parse_poly(poly.trim(), None).map_err(|e| e.at_line(line))?;
            let sec = out.sections.last_mut().ok_or_else(|| DataError::at(line, 1, "entry before any field"))?;
            if out.by_label.insert(label.clone(), p.clone()).is_some() {
                return Err(DataError::at(line, 1, format!("duplicate label {label}")));
            }
            sec.entries.push((label, d, p));
        }
        Ok(out)
    }

    pub fn shipped() -> Result<&'static PhiLabels, DataError> {
        static L: OnceLock<Result<PhiLabels, String>> = OnceLock::new();
        L.get_or_init(|| read_data("cyclotomic_labels.txt").and_then(|t| PhiLabels::parse(&t)).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| DataError::Invalid(e.clone()))
    }
}

/// d from a label `Phi<d>…`.
fn label_order(label: &str) -> Option<u64> {
    let rest = label.strip_prefix("Phi")?;
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    digits.parse().ok()
}

#[derive(Debug, Clone)]
pub struct ExprError {
    pub col: usize,
    pub msg: String,
}

impl ExprError {
    fn at_line(self, line: usize) -> DataError {
        DataError::at(line, self.col + 1, self.msg)
    }
}

impl std::error::Error for ExprError {}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.col + 1, self.msg)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    labels: Option<&'a PhiLabels>,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        let col = self.toks.get(self.pos).map_or(self.end, |t| t.1);
        Err(ExprError { col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn int(&mut self) -> Result<i64, ExprError> {
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => self.err("expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = divide(&acc, &d).map_err(|msg| ExprError { col: self.toks[at].1, msg })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPoly, ExprError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = if self.eat('(') {
                let e = self.int()?;
                self.expect(')')?;
                e
            } else {
                self.int()?
            };
            return power(&base, e).map_err(|msg| ExprError { col: self.toks[self.pos - 1].1, msg });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<LaurentPoly, ExprError> {
        let Some(t) = self.peek().cloned() else { return self.err("unexpected end of expression") };
        self.pos += 1;
        let c = |z: Cyclo| Ok(LaurentPoly::constant(z));
        match t {
            Tok::Num(n) => c(Cyclo::from_int(n)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op(o) => {
                self.pos -= 1;
                self.err(format!("unexpected `{o}`"))
            }
            Tok::Ident(id) => match id.as_str() {
                "x" | "q" => Ok(LaurentPoly::x()),
                "i" => c(Cyclo::root_of_unity(4, 1)),
                "E" => {
                    self.expect('(')?;
                    let n = self.int()?;
                    let k = if self.eat(',') { self.int()? } else { 1 };
                    self.expect(')')?;
                    if n <= 0 {
                        self.pos -= 1;
                        return self.err("E(n,k) needs n > 0");
                    }
                    c(Cyclo::root_of_unity(n as u64, k))
                }
                "sqrt" => {
                    self.expect('(')?;
                    let d = self.int()?;
                    self.expect(')')?;
                    c(Cyclo::sqrt(d))
                }
                _ => {
                    if let Some(n) = id.strip_prefix("zeta").and_then(|r| r.parse::<u64>().ok()).filter(|n| *n > 0) {
                        return c(Cyclo::root_of_unity(n, 1));
                    }
                    if let Some(rest) = id.strip_prefix("Phi") {
                        if let Ok(d) = rest.parse::<u64>() {
                            if d > 0 {
                                return Ok(LaurentPoly::cyclotomic(d));
                            }
                        }
                        if let Some(p) = self.labels.and_then(|l| l.get(&id)) {
                            return Ok(p.clone());
                        }
                    }
                    self.pos -= 1;
                    self.err(format!("unknown name {id}"))
                }
            },
        }
    }
}

fn divide(a: &LaurentPoly, d: &LaurentPoly) -> Result<LaurentPoly, String> {
    if d.is_zero() {
        return Err("division by zero".into());
    }
    if let Some((c, e)) = d.as_monomial() {
        return Ok(a.scale(&c.inv().map_err(|e| e.to_string())?).shift(-e));
    }
    a.div_exact(d).map_err(|_| format!("division by {d} is not exact"))
}

fn power(b: &LaurentPoly, e: i64) -> Result<LaurentPoly, String> {
    if e >= 0 {
        return Ok(b.pow(e as u32));
    }
    match b.as_monomial() {
        Some((c, k)) => Ok(LaurentPoly::monomial(c.inv().map_err(|e| e.to_string())?.pow(-e), k * e)),
        None => Err("negative power of a non-monomial".into()),
    }
}

/// Parses `+ - * / ^`, parentheses, integers, `x` (or `q`), `i`, `zetaN`,
/// `E(n,k)`, `sqrt(d)`, `Phi<d>` and K-cyclotomic labels. Divisions must
/// be exact.
pub fn parse_poly(s: &str, labels: Option<&PhiLabels>) -> Result<LaurentPoly, ExprError> {
    let toks = lex(s).map_err(|(col, msg)| ExprError { col, msg })?;
    let mut p = Parser { toks, pos: 0, end: s.chars().count(), labels };
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Expression that must be a constant.
pub fn parse_cyclo(s: &str) -> Result<Cyclo, ExprError> {
    let p = parse_poly(s, None)?;
    match p.as_monomial() {
        _ if p.is_zero() => Ok(Cyclo::zero()),
        Some((c, 0)) => Ok(c),
        _ => Err(ExprError { col: 0, msg: format!("{s} is not a constant") }),
    }
}

/// `c*x^{p/q}`, `c*x^k` or any monomial expression; the exponent is kept.
pub fn parse_frac_monomial(s: &str) -> Result<FracExpMonomial, ExprError> {
    let s = s.trim();
    if let Some(body) = s.strip_suffix('}') {
        if let Some((z, e)) = body.rsplit_once("x^{") {
            let z = z.trim_end();
            let z = if z.is_empty() { "1" } else { z.strip_suffix('*').unwrap_or(z) };
            let exp = parse_rational(e).ok_or_else(|| ExprError { col: s.len() - e.len() - 1, msg: "bad exponent".into() })?;
            return Ok(FracExpMonomial::new(parse_cyclo(z)?, exp));
        }
    }
    let p = parse_poly(s, None)?;
    match p.as_monomial() {
        Some((c, k)) => Ok(FracExpMonomial::new(c, BigRational::from_integer(k.into()))),
        None => Err(ExprError { col: 0, msg: format!("{s} is not a monomial") }),
    }
}

/// Fr grammar: `z` or `z*x^{p/q}`, exponent reduced mod 1.
pub fn parse_fr(s: &str) -> Result<FracExpMonomial, ExprError> {
    Ok(parse_frac_monomial(s)?.mod_integral())
}

/// Splits at commas outside parentheses.
pub fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: i64 = q.trim().parse().ok()?;
            let p: i64 = p.trim().parse().ok()?;
            (q != 0).then(|| BigRational::new(p.into(), q.into()))
        }
        None => Some(BigRational::from_integer(s.parse::<i64>().ok()?.into())),
    }
}

/// Fr as emitted: `z`, or `(z)*x^{p/q}`.
pub fn fr_text(f: &FracExpMonomial) -> String {
    if f.exp.is_zero() {
        f.scalar.to_string()
    } else {
        format!("({})*x^{{{}}}", f.scalar, f.exp)
    }
}

// ---------------------------------------------------------------------------
// character tables

/// `group`, `gens`, `classes <words>`, `sizes`, then `char <name> <values>`;
/// values are placed in the class order of `g`.
pub fn parse_chartab(text: &str, g: &ReflectionCoset) -> Result<CharacterTable, DataError> {
    let mut cols: Option<Vec<usize>> = None;
    let mut names = Vec::new();
    let mut values = Vec::new();
    let nclass = g.classes().len();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let mut it = raw.split_whitespace();
        match it.next() {
            None => {}
            Some("group") => {
                let name = it.next().unwrap_or("");
                if name != g.name() {
                    return Err(DataError::at(line, 7, format!("table for {name}, group is {}", g.name())));
                }
            }
            Some("gens" | "sizes") => {}
            Some("classes") => {
                let mut c = Vec::new();
                for w in it {
                    let w = if w == "1" { "" } else { w };
                    let e = g.eval_word(w).ok_or_else(|| DataError::at(line, 1, format!("bad word {w}")))?;
                    c.push(g.class_of(e));
                }
                if c.len() != nclass || c.iter().collect::<BTreeSet<_>>().len() != nclass {
                    return Err(DataError::at(line, 1, "class words do not hit every class once"));
                }
                cols = Some(c);
            }
            Some("char") => {
                let c = cols.as_ref().ok_or_else(|| DataError::at(line, 1, "char before classes"))?;
                let name = it.next().ok_or_else(|| DataError::at(line, 6, "missing name"))?;
                let vals: Vec<&str> = it.collect();
                if vals.len() != c.len() {
                    return Err(DataError::at(line, 1, "wrong number of values"));
                }
                let mut row = vec![Cyclo::zero(); nclass];
                for (k, v) in vals.iter().enumerate() {
                    row[c[k]] = parse_cyclo(v).map_err(|e| e.at_line(line))?;
                }
                names.push(name.to_string());
                values.push(row);
            }
            Some(k) => return Err(DataError::at(line, 1, format!("unknown keyword {k}"))),
        }
    }
    let t = CharacterTable { names, values, provenance: Provenance::Ingested };
    t.check_orthogonality(g).map_err(|e| DataError::Invalid(e.to_string()))?;
    Ok(t)
}

// ---------------------------------------------------------------------------
// Schur element data

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurData {
    pub group: String,
    pub schur: Vec<(String, LaurentPoly)>,
    pub blocks: Vec<Vec<String>>,
}

impl SchurData {
    pub fn parse(text: &str) -> Result<SchurData, DataError> {
        let mut d = SchurData { group: String::new(), schur: Vec::new(), blocks: Vec::new() };
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let mut it = raw.split_whitespace();
            match it.next() {
                None => {}
                Some(k) if k.starts_with('%') => {}
                Some("group") => d.group = it.next().unwrap_or("").to_string(),
                Some("schur") => {
                    let name = it.next().ok_or_else(|| DataError::at(line, 7, "missing name"))?;
                    let body: String = it.collect();
                    let p = parse_poly(&body, None).map_err(|e| e.at_line(line))?;
                    d.schur.push((name.to_string(), p));
                }
                Some("block") => d.blocks.push(it.map(String::from).collect()),
                Some(k) => return Err(DataError::at(line, 1, format!("unknown keyword {k}"))),
            }
        }
        Ok(d)
    }

    pub fn emit(&self) -> String {
        let mut s = format!("group {}\n", self.group);
        for (n, p) in &self.schur {
            let _ = writeln!(s, "schur {n} {p}");
        }
        for b in &self.blocks {
            let _ = writeln!(s, "block {}", b.join(" "));
        }
        s
    }
}

// ---------------------------------------------------------------------------
// unipotent character tables

/// Header `group`, `field`, optional `order`; then `family k` lines, each
/// followed by rows `marker | name | degree | fr [| symbol]`. Lines starting
/// with `%` are comments. A missing order is computed from the group.
pub fn parse_uch(text: &str) -> Result<UchTable, DataError> {
    let labels = PhiLabels::shipped().ok();
    let mut group = None;
    let mut field = None;
    let mut order = None;
    let mut family = 0usize;
    let mut chars = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('%') {
            continue;
        }
        if !l.contains('|') {
            let (k, v) = l.split_once(' ').unwrap_or((l, ""));
            let v = v.trim();
            match k {
                "group" => group = Some(v.to_string()),
                "field" => field = Some(v.parse::<u64>().map_err(|_| DataError::at(line, 7, "bad conductor"))?),
                "order" => order = Some(parse_poly(v, labels).map_err(|e| e.at_line(line))?),
                "family" => family = v.parse().map_err(|_| DataError::at(line, 8, "bad family number"))?,
                _ => return Err(DataError::at(line, 1, format!("unknown keyword {k}"))),
            }
            continue;
        }
        if family == 0 {
            return Err(DataError::at(line, 1, "row before any family line"));
        }
        let cells: Vec<&str> = l.split('|').map(str::trim).collect();
        if !(4..=5).contains(&cells.len()) {
            return Err(DataError::at(line, 1, "expected 4 or 5 cells"));
        }
        let col = |k: usize| raw.find(cells[k]).unwrap_or(0);
        let marker = Marker::parse(cells[0]).ok_or_else(|| DataError::at(line, 1, "marker must be *, # or -"))?;
        let degree = parse_poly(cells[2], labels).map_err(|e| DataError::at(line, col(2) + e.col + 1, e.msg))?;
        if degree.is_zero() {
            return Err(DataError::at(line, col(2) + 1, "zero degree"));
        }
        let fr = parse_fr(cells[3]).map_err(|e| DataError::at(line, col(3) + e.col + 1, e.msg))?;
        chars.push(UnipotentCharacter {
            name: cells[1].to_string(),
            degree,
            fr,
            family,
            marker,
            principal: None,
            series: String::new(),
            sign_resolved: true,
            symbol: cells.get(4).map(|s| s.to_string()),
        });
    }
    let group = group.ok_or_else(|| DataError::at(1, 1, "missing group line"))?;
    if chars.is_empty() {
        return Err(DataError::Invalid(format!("table for {group} has no characters")));
    }
    let order = match order {
        Some(o) => o,
        None => order_polys(&resolve_group(&group)?).order_c,
    };
    let field = match field {
        Some(f) => f,
        None => resolve_group(&group)?.field().conductor(),
    };
    let mut t = UchTable { group, field, order, chars };
    t.canonicalize();
    Ok(t)
}

/// Canonical text; `parse_uch(emit_uch(t))` gives `t` back and emission of
/// a parsed canonical file reproduces it byte for byte.
pub fn emit_uch(t: &UchTable) -> String {
    let mut s = format!("group {}\nfield {}\norder {}\n", t.group, t.field, t.order);
    let mut fam = 0;
    for c in &t.chars {
        if c.family != fam {
            fam = c.family;
            let _ = writeln!(s, "family {fam}");
        }
        let _ = write!(s, "{} | {} | {} | {}", c.marker.symbol(), c.name, c.degree, fr_text(&c.fr));
        if let Some(sym) = &c.symbol {
            let _ = write!(s, " | {sym}");
        }
        s.push('\n');
    }
    s
}

/// Human-oriented rendering with K-cyclotomic factorizations.
pub fn render_uch(t: &UchTable) -> String {
    let labels = PhiLabels::shipped().ok();
    let mut s = format!("{}: {} unipotent characters, {} families\n", t.group, t.chars.len(), t.families().len());
    let mut fam = 0;
    for c in &t.chars {
        if c.family != fam {
            fam = c.family;
            let _ = writeln!(s, "-- family {fam}");
        }
        let _ = writeln!(
            s,
            "{} {:<14} {:<50} {}",
            c.marker.symbol(),
            c.name,
            factored(&c.degree, labels, t.field),
            fr_text(&c.fr)
        );
    }
    s
}

/// c·x^a·ΠΦ… with Φ_d over Q and labelled factors over the field.
pub fn factored(p: &LaurentPoly, labels: Option<&PhiLabels>, conductor: u64) -> String {
    let k = AbelianField::cyclotomic(conductor);
    let v = p.valuation();
    let mut rest = p.shift(-v);
    let mut parts = Vec::new();
    let deg = rest.degree();
    for d in 1..=(4 * deg.max(1) as u64 + 4) {
        if rest.degree() == 0 {
            break;
        }
        let phi = LaurentPoly::cyclotomic(d);
        let mut m = 0;
        while let Ok(q) = rest.div_exact(&phi) {
            rest = q;
            m += 1;
        }
        if m > 0 {
            parts.push(power_text(&format!("Phi{d}"), m));
        }
        for f in crate::laurent::k_cyclotomic_factors(d, &k) {
            if f.poly == phi {
                continue;
            }
            let mut m = 0;
            while let Ok(q) = rest.div_exact(&f.poly) {
                rest = q;
                m += 1;
            }
            if m > 0 {
                let name = labels.and_then(|l| l.label_of(&f.poly)).map_or_else(|| format!("({})", f.poly), String::from);
                parts.push(power_text(&name, m));
            }
        }
    }
    if rest.degree() != 0 {
        return p.to_string();
    }
    let c = rest.leading_coeff();
    let mut s = if c.is_one() { String::new() } else { format!("({c})") };
    if v != 0 {
        s.push_str(&power_text("x", v));
    }
    for part in parts {
        s.push_str(&part);
    }
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

fn power_text(b: &str, m: i64) -> String {
    if m == 1 {
        b.to_string()
    } else {
        format!("{b}^{m}")
    }
}

// ---------------------------------------------------------------------------
// diffs

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffKind {
    /// In the reference, not in the table.
    Missing,
    /// In the table, not in the reference.
    Extra,
    Rename { reference: String },
    SignOnly,
    FrMismatch { reference: String },
    FamilyMismatch,
    MarkerMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEntry {
    pub name: String,
    pub kind: DiffKind,
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DiffKind::Missing => write!(f, "missing   {}", self.name),
            DiffKind::Extra => write!(f, "extra     {}", self.name),
            DiffKind::Rename { reference } => write!(f, "rename    {} -> {reference}", self.name),
            DiffKind::SignOnly => write!(f, "sign-only {}", self.name),
            DiffKind::FrMismatch { reference } => write!(f, "fr        {} (reference {reference})", self.name),
            DiffKind::FamilyMismatch => write!(f, "family    {}", self.name),
            DiffKind::MarkerMismatch => write!(f, "marker    {}", self.name),
        }
    }
}

/// Structured comparison of `table` against `reference`. Rows match on
/// degree and Fr; a degree match up to sign is exact for rows whose sign is
/// a convention and a `SignOnly` entry otherwise.
pub fn diff_tables(table: &UchTable, reference: &UchTable) -> Vec<DiffEntry> {
    let mut out = Vec::new();
    let mut used = vec![false; reference.chars.len()];
    let mut pair: Vec<Option<usize>> = vec![None; table.chars.len()];
    // exact degree and Fr first, then up to sign, then degree alone
    for pass in 0..3 {
        for (i, c) in table.chars.iter().enumerate() {
            if pair[i].is_some() {
                continue;
            }
            let neg = -&c.degree;
            let hit = reference.chars.iter().enumerate().position(|(j, r)| {
                !used[j]
                    && match pass {
                        0 => r.degree == c.degree && r.fr == c.fr,
                        1 => r.degree == neg && r.fr == c.fr,
                        _ => r.degree == c.degree || r.degree == neg,
                    }
            });
            if let Some(j) = hit {
                used[j] = true;
                pair[i] = Some(j);
            }
        }
    }
    for (i, c) in table.chars.iter().enumerate() {
        let Some(j) = pair[i] else {
            out.push(DiffEntry { name: c.name.clone(), kind: DiffKind::Extra });
            continue;
        };
        let r = &reference.chars[j];
        if r.name != c.name {
            out.push(DiffEntry { name: c.name.clone(), kind: DiffKind::Rename { reference: r.name.clone() } });
        }
        if r.degree != c.degree && c.sign_resolved && r.sign_resolved {
            out.push(DiffEntry { name: c.name.clone(), kind: DiffKind::SignOnly });
        }
        if r.fr != c.fr {
            out.push(DiffEntry { name: c.name.clone(), kind: DiffKind::FrMismatch { reference: fr_text(&r.fr) } });
        }
        if r.marker != c.marker {
            out.push(DiffEntry { name: c.name.clone(), kind: DiffKind::MarkerMismatch });
        }
    }
    for (j, r) in reference.chars.iter().enumerate() {
        if !used[j] {
            out.push(DiffEntry { name: r.name.clone(), kind: DiffKind::Missing });
        }
    }
    // families: matched rows must induce a bijection of families
    let mut fwd: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut back: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (i, p) in pair.iter().enumerate() {
        if let Some(j) = p {
            fwd.entry(table.chars[i].family).or_default().insert(reference.chars[*j].family);
            back.entry(reference.chars[*j].family).or_default().insert(table.chars[i].family);
        }
    }
    for (i, p) in pair.iter().enumerate() {
        if let Some(j) = p {
            let f = table.chars[i].family;
            let g = reference.chars[*j].family;
            if fwd[&f].len() > 1 || back[&g].len() > 1 {
                out.push(DiffEntry { name: table.chars[i].name.clone(), kind: DiffKind::FamilyMismatch });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// groups

/// Builtin reflection coset by name (`Z<e>`, `G4`, `G312`, `G(m,p,n)`).
pub fn resolve_group(name: &str) -> Result<ReflectionCoset, DataError> {
    ReflectionCoset::builtin(&canonical_group_name(name)).map_err(|e| DataError::Invalid(e.to_string()))
}

/// `G(3,1,2)` and `G_{3,1,2}` are spelled `G312`; `Z_3` is `Z3`.
pub fn canonical_group_name(name: &str) -> String {
    let t: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix("G(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix("G_{").and_then(|r| r.strip_suffix('}')));
    if inner == Some("3,1,2") {
        return "G312".into();
    }
    if let Some(r) = t.strip_prefix("Z_") {
        return format!("Z{r}");
    }
    t
}

/// Group data for the construction: computed for cyclic groups, ingested
/// character table and Schur elements otherwise.
pub fn load_group_data(name: &str) -> Result<GroupData, DataError> {
    let name = canonical_group_name(name);
    if let Some(e) = name.strip_prefix('Z').and_then(|r| r.parse::<u64>().ok()) {
        return Ok(GroupData::cyclic(e)?);
    }
    let g = resolve_group(&name)?;
    let chars = parse_chartab(&read_data(&format!("chartab/{name}.tbl"))?, &g)?;
    let sd = SchurData::parse(&read_data(&format!("schur/{name}.sch"))?)?;
    let mut schur = Vec::new();
    for n in &chars.names {
        let p = sd
            .schur
            .iter()
            .find(|(m, _)| m == n)
            .ok_or_else(|| DataError::Invalid(format!("no Schur element for {n}")))?;
        schur.push(p.1.clone());
    }
    Ok(GroupData::new(g, chars, schur, sd.blocks)?)
}

/// Schur elements S_θ = Feg(R_1)/Deg(ρ_θ) read off the principal rows of a
/// reference table (rows named by Irr(W)), with the Rouquier blocks as the
/// traces of its families on the principal series.
pub fn schur_data_from_reference(
    g: &ReflectionCoset,
    chars: &CharacterTable,
    reference: &UchTable,
) -> Result<SchurData, DataError> {
    let feg = crate::orders::fake_degree_torus(g, g.class_of(0));
    let mut schur = Vec::new();
    let mut blocks: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for n in &chars.names {
        let r = reference
            .chars
            .iter()
            .find(|c| &c.name == n)
            .ok_or_else(|| DataError::Invalid(format!("reference has no row {n}")))?;
        let s = feg.div_exact(&r.degree).map_err(|_| DataError::Invalid(format!("Deg {n} does not divide Feg(R_1)")))?;
        schur.push((n.clone(), s));
        blocks.entry(r.family).or_default().push(n.clone());
    }
    Ok(SchurData { group: g.name().to_string(), schur, blocks: blocks.into_values().collect() })
}

/// The shipped reference table of a group, if any.
pub fn load_reference(name: &str) -> Result<UchTable, DataError> {
    parse_uch(&read_data(&format!("uch/{}.uch", canonical_group_name(name)))?)
}

/// Irreducible spetsial groups: G(d,1,r), G(e,e,r), the well-generated
/// exceptional groups generated by involutive reflections, and G4, G6, G8,
/// G14, G25, G26, G32. Accepts `Z<d>`, `G<i>`, `G(m,p,n)`, `G312`.
pub fn is_spetsial(name: &str) -> Result<bool, DataError> {
    let t = canonical_group_name(name);
    let bad = || DataError::Invalid(format!("cannot identify group {name:?}"));
    if let Some(d) = t.strip_prefix('Z').and_then(|r| r.parse::<u64>().ok()) {
        return if d >= 1 { Ok(true) } else { Err(bad()) };
    }
    let imprimitive = |m: u64, p: u64, n: u64| -> Result<bool, DataError> {
        if m == 0 || p == 0 || n == 0 || m % p != 0 {
            return Err(bad());
        }
        Ok(p == 1 || (p == m && n >= 2))
    };
    if t == "G312" {
        return imprimitive(3, 1, 2);
    }
    if let Some(inner) = t.strip_prefix("G(").and_then(|r| r.strip_suffix(')')) {
        let v: Vec<u64> = inner.split(',').map(|x| x.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let [m, p, n] = v[..] else { return Err(bad()) };
        return imprimitive(m, p, n);
    }
    let i: u64 = t.strip_prefix('G').and_then(|r| r.parse().ok()).ok_or_else(bad)?;
    if !(4..=37).contains(&i) {
        return Err(bad());
    }
    const TRUE_REFLECTION_WELL_GENERATED: [u64; 11] = [23, 24, 27, 28, 29, 30, 33, 34, 35, 36, 37];
    const EXTRA: [u64; 7] = [4, 6, 8, 14, 25, 26, 32];
    Ok(TRUE_REFLECTION_WELL_GENERATED.contains(&i) || EXTRA.contains(&i))
}

/// Parses a field given as a conductor `n` (for Q(ζ_n)) or a comma list of
/// generator expressions such as `sqrt(5),zeta3`.
pub fn parse_field(s: &str) -> Result<AbelianField, ExprError> {
    if let Ok(n) = s.trim().parse::<u64>() {
        if n > 0 {
            return Ok(AbelianField::cyclotomic(n));
        }
    }
    let gens = split_top(s).iter().map(|g| parse_cyclo(g)).collect::<Result<Vec<_>, _>>()?;
    Ok(AbelianField::generated_by(&gens))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u64, k: i64) -> Cyclo {
        Cyclo::root_of_unity(n, k)
    }

    #[test]
    fn expressions() {
        let x = LaurentPoly::x();
        assert_eq!(parse_poly("x^2-1", None).unwrap(), &(&x * &x) - &LaurentPoly::one());
        assert_eq!(parse_poly("(x^3-1)/(x-1)", None).unwrap(), LaurentPoly::cyclotomic(3));
        assert_eq!(parse_poly("Phi6*Phi3", None).unwrap(), parse_poly("x^4+x^2+1", None).unwrap());
        assert_eq!(parse_poly("x^-2*x^(2)", None).unwrap(), LaurentPoly::one());
        assert_eq!(parse_cyclo("E(3,2)+E(3)+1").unwrap(), Cyclo::zero());
        assert_eq!(parse_cyclo("zeta3^2").unwrap(), e(3, 2));
        assert_eq!(parse_cyclo("sqrt(-3)").unwrap(), e(3, 1) - e(3, 2));
        assert_eq!(parse_cyclo("-i*i").unwrap(), Cyclo::one());
        assert!(parse_poly("x/(x+1)", None).is_err());
        assert!(parse_poly("", None).is_err());
        let err = parse_poly("x+*2", None).unwrap_err();
        assert_eq!(err.col, 2);
    }

    #[test]
    fn display_reparses() {
        for s in ["(3-sqrt(-3))/6*x*(x-zeta3)", "x^-1+E(5,2)*x^3", "-1/2*x^4*Phi2^2"] {
            let p = parse_poly(s, None).unwrap();
            assert_eq!(parse_poly(&p.to_string(), None).unwrap(), p, "{s} -> {p}");
        }
    }

    #[test]
    fn frobenius_grammar() {
        let f = parse_fr("E(8,3)*x^{1/2}").unwrap();
        assert_eq!(f.scalar, e(8, 3));
        assert_eq!(f.exp, BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_fr(&fr_text(&f)).unwrap(), f);
        assert_eq!(parse_fr("-i").unwrap(), FracExpMonomial::scalar(e(4, 3)));
        assert_eq!(parse_fr("x^{3/2}").unwrap().exp, BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn spetsial_list() {
        for (g, want) in [("G4", true), ("G(3,1,2)", true), ("Z5", true), ("G5", false), ("G12", false), ("G28", true)] {
            assert_eq!(is_spetsial(g).unwrap(), want, "{g}");
        }
        assert!(!is_spetsial("G(4,2,2)").unwrap());
        assert!(is_spetsial("H7").is_err());
    }

    #[test]
    fn empty_table_is_an_error() {
        assert!(parse_uch("group Z3\nfield 3\n").is_err());
    }
}
