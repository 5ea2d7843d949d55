//! Sparse multivariate polynomials over `R`, exact evaluation over `K`, and the
//! decidable structural predicates (homogeneity, additive translation invariance).

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{Domain, Element, FieldElement, RingError};
pub use parse::{parse_poly, parse_poly_with_vars, ParsedPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomials live in different rings or variable counts")]
    Incompatible,
    #[error("empty system of equations")]
    EmptySystem,
    #[error("exponent tuple has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    BadVariable { index: usize, nvars: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

pub type Exponents = Vec<u32>;

/// A polynomial in `nvars` positional variables with coefficients in `R`.
///
/// Terms are keyed by exponent tuple; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    domain: Domain,
    nvars: usize,
    terms: BTreeMap<Exponents, Element>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.domain, self)
    }
}

impl MultiPoly {
    pub fn zero(domain: &Domain, nvars: usize) -> Self {
        Self { domain: domain.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(domain: &Domain, nvars: usize, c: Element) -> Self {
        let mut p = Self::zero(domain, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(domain: &Domain, nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable {index} out of range");
        let mut e = vec![0; nvars];
        e[index] = 1;
        let mut p = Self::zero(domain, nvars);
        p.add_term(e, domain.one());
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging repeats.
    pub fn from_terms(
        domain: &Domain,
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponents, Element)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(domain, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::ExponentLength { expected: nvars, got: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: Element) {
        if self.domain.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = self.domain.add(existing, &c);
                if self.domain.is_zero(&sum) {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Element)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> Option<&Element> {
        self.terms.get(e)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.domain == other.domain && self.nvars == other.nvars,
            "incompatible polynomials: {}[{}] vs {}[{}]",
            self.domain,
            self.nvars,
            other.domain,
            other.nvars
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), self.domain.neg(c))).collect();
        Self { domain: self.domain.clone(), nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(&self.domain, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, self.domain.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Element) -> Self {
        let mut out = Self::zero(&self.domain, self.nvars);
        for (e, coef) in &self.terms {
            out.add_term(e.clone(), self.domain.mul(coef, c));
        }
        out
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = Self::constant(&self.domain, self.nvars, self.domain.one());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Composition: variable `i` is replaced by `images[i]`. All images must share
    /// the same domain and variable count, which becomes the result's.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::ArityMismatch { expected: self.nvars, got: images.len() });
        }
        let target = match images.first() {
            Some(first) => first.nvars,
            None => 0,
        };
        if images.iter().any(|im| im.nvars != target || im.domain != self.domain) {
            return Err(PolyError::Incompatible);
        }
        let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.nvars);
        for (i, image) in images.iter().enumerate() {
            let max = self.degree_in(i);
            let mut row = vec![MultiPoly::constant(&self.domain, target, self.domain.one())];
            for k in 1..=max as usize {
                row.push(row[k - 1].mul(image));
            }
            powers.push(row);
        }
        let mut out = MultiPoly::zero(&self.domain, target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(&self.domain, target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `mapping[i]`.
    pub fn relabel(&self, nvars: usize, mapping: &[usize]) -> Result<MultiPoly, PolyError> {
        if mapping.len() != self.nvars {
            return Err(PolyError::ArityMismatch { expected: self.nvars, got: mapping.len() });
        }
        if let Some(&index) = mapping.iter().find(|&&m| m >= nvars) {
            return Err(PolyError::BadVariable { index, nvars });
        }
        let mut out = MultiPoly::zero(&self.domain, nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[mapping[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Exact value at a point of `K^nvars`.
    ///
    /// Evaluates `p * prod(den_i^D_i)` in `R` (with `D_i` the degree in variable
    /// `i`) and divides once at the end.
    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        let dom = &self.domain;
        let max_deg: Vec<u32> = (0..self.nvars).map(|i| self.degree_in(i)).collect();
        let num_pows: Vec<Vec<Element>> =
            point.iter().zip(&max_deg).map(|(x, &d)| power_table(dom, x.num(), d)).collect();
        let den_pows: Vec<Vec<Element>> =
            point.iter().zip(&max_deg).map(|(x, &d)| power_table(dom, x.den(), d)).collect();
        let mut total = dom.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if max_deg[i] == 0 {
                    continue;
                }
                term = dom.mul(&term, &num_pows[i][k as usize]);
                term = dom.mul(&term, &den_pows[i][(max_deg[i] - k) as usize]);
            }
            total = dom.add(&total, &term);
        }
        let mut den = dom.one();
        for (i, &d) in max_deg.iter().enumerate() {
            den = dom.mul(&den, &den_pows[i][d as usize]);
        }
        Ok(dom.frac(total, den)?)
    }

    /// Exact value at a point of `R^nvars`.
    pub fn eval_integral(&self, point: &[Element]) -> Result<Element, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        let terms: Vec<(&[u32], &Element)> = self.terms.iter().map(|(e, c)| (e.as_slice(), c)).collect();
        Ok(horner(&self.domain, &terms, 0, point))
    }

    /// `Some(d)` if every term has total degree `d`. The zero polynomial reports `Some(0)`.
    pub fn is_homogeneous(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = match degrees.next() {
            None => return Some(0),
            Some(d) => d,
        };
        degrees.all(|d| d == first).then_some(first)
    }

    /// Whether `p(x_1 + r, ..., x_n + r) - p(x_1, ..., x_n)` vanishes identically in `R[x, r]`.
    pub fn is_translation_invariant(&self) -> bool {
        let n = self.nvars;
        let shift = MultiPoly::var(&self.domain, n + 1, n);
        let images: Vec<MultiPoly> =
            (0..n).map(|i| MultiPoly::var(&self.domain, n + 1, i).add(&shift)).collect();
        let shifted = self.substitute(&images).expect("images match arity");
        let lifted = self.relabel(n + 1, &(0..n).collect::<Vec<_>>()).expect("valid mapping");
        shifted == lifted
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(e, c)| TermRecord { coefficient: self.domain.format(c), exponents: e.clone() })
            .collect()
    }

    pub fn from_records(domain: &Domain, nvars: usize, records: &[TermRecord]) -> Result<Self, PolyError> {
        let terms = records
            .iter()
            .map(|r| Ok((r.exponents.clone(), domain.parse_element(&r.coefficient)?)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Self::from_terms(domain, nvars, terms)
    }

    /// Renders with the given variable names (defaults to `x1, x2, ...` via `Display`).
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let (negative, coef) = match c {
                Element::Int(n) if n.sign() == num_bigint::Sign::Minus => (true, self.domain.format(&self.domain.neg(c))),
                _ => (false, self.domain.format(c)),
            };
            let coef = if coef.contains('+') { format!("({coef})") } else { coef };
            let body = match (mono.is_empty(), coef.as_str()) {
                (true, _) => coef,
                (false, "1") => mono.join("*"),
                (false, _) => format!("{}*{}", coef, mono.join("*")),
            };
            match (idx, negative) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Self::default_names(self.nvars)))
    }
}

/// Nested Horner evaluation of lexicographically sorted terms, starting at
/// variable `var`; every multiplication is by a single coordinate.
fn horner(dom: &Domain, terms: &[(&[u32], &Element)], var: usize, point: &[Element]) -> Element {
    if terms.is_empty() {
        return dom.zero();
    }
    if var == point.len() {
        return terms.iter().fold(dom.zero(), |acc, (_, c)| dom.add(&acc, c));
    }
    let mut acc = dom.zero();
    let mut end = terms.len();
    let mut current = terms[end - 1].0[var];
    while end > 0 {
        let k = terms[end - 1].0[var];
        let start = terms[..end].iter().rposition(|(e, _)| e[var] != k).map_or(0, |i| i + 1);
        for _ in k..current {
            acc = dom.mul(&acc, &point[var]);
        }
        acc = dom.add(&acc, &horner(dom, &terms[start..end], var + 1, point));
        current = k;
        end = start;
    }
    for _ in 0..current {
        acc = dom.mul(&acc, &point[var]);
    }
    acc
}

pub(crate) fn power_table(dom: &Domain, x: &Element, max: u32) -> Vec<Element> {
    let mut row = Vec::with_capacity(max as usize + 1);
    row.push(dom.one());
    for k in 1..=max as usize {
        row.push(dom.mul(&row[k - 1], x));
    }
    row
}

/// A random polynomial in `nvars` variables with up to `max_terms` terms of total
/// degree at most `max_deg`. Coefficients are integers in `[-bound, bound]`;
/// over `F_q[t]` they are `a + b*t` with `a, b` drawn that way.
pub fn random_poly<G: rand::Rng + ?Sized>(
    dom: &Domain,
    rng: &mut G,
    nvars: usize,
    max_deg: u32,
    bound: i64,
    max_terms: usize,
) -> MultiPoly {
    let mut p = MultiPoly::zero(dom, nvars);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let total = rng.gen_range(0..=max_deg);
        let mut e = vec![0u32; nvars];
        if nvars > 0 {
            for _ in 0..total {
                e[rng.gen_range(0..nvars)] += 1;
            }
        }
        let mut c = dom.from_i64(rng.gen_range(-bound..=bound));
        if let Some(t) = dom.indeterminate() {
            c = dom.add(&c, &dom.mul(&t, &dom.from_i64(rng.gen_range(-bound..=bound))));
        }
        p.add_term(e, c);
    }
    p
}

/// One serialized term: `{ "coefficient": "...", "exponents": [...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coefficient: String,
    pub exponents: Vec<u32>,
}

/// Collapses a system `p_1 = ... = p_m = 0` into one polynomial with the same
/// roots in `K^n`, folding `(a, b) -> a^2 f(b / a)` with `f` rootless in `K`:
/// `w^2 + 1` over `Q`, `w^2 - t` over `F_q(t)` for odd `q`, `w^2 + w + t` in
/// characteristic 2.
pub fn combine_system(ps: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
    let (first, rest) = ps.split_first().ok_or(PolyError::EmptySystem)?;
    if rest.iter().any(|p| p.domain != first.domain || p.nvars != first.nvars) {
        return Err(PolyError::Incompatible);
    }
    let dom = first.domain.clone();
    let n = first.nvars;
    Ok(rest.iter().fold(first.clone(), |a, b| {
        let (a2, b2) = (a.mul(&a), b.mul(b));
        match dom.gf() {
            None => b2.add(&a2),
            Some(gf) => {
                let t = MultiPoly::constant(&dom, n, dom.indeterminate().unwrap());
                if gf.characteristic() == 2 {
                    b2.add(&a.mul(b)).add(&t.mul(&a2))
                } else {
                    b2.sub(&t.mul(&a2))
                }
            }
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Domain {
        Domain::integers()
    }

    fn poly(dom: &Domain, s: &str) -> MultiPoly {
        parse_poly(dom, s).unwrap().poly
    }

    fn ints(dom: &Domain, xs: &[i64]) -> Vec<FieldElement> {
        xs.iter().map(|&x| dom.embed(&dom.from_i64(x))).collect()
    }

    #[test]
    fn eval_examples() {
        let d = z();
        assert!(d.frac_is_zero(&poly(&d, "x+y-z").eval(&ints(&d, &[1, 2, 3])).unwrap()));
        let v = poly(&d, "x^2-2").eval(&[d.parse_frac("3/2").unwrap()]).unwrap();
        assert_eq!(v, d.parse_frac("1/4").unwrap());
        let ap = poly(&d, "(x1-2*x2+x3)^2");
        assert!(d.frac_is_zero(&ap.eval(&ints(&d, &[1, 3, 5])).unwrap()));
        assert_eq!(
            poly(&d, "x+y").eval(&ints(&d, &[1])),
            Err(PolyError::ArityMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn homogeneity_examples() {
        let d = z();
        assert_eq!(poly(&d, "x^2*y + y^3").is_homogeneous(), Some(3));
        assert_eq!(poly(&d, "x^2 + y").is_homogeneous(), None);
        assert_eq!(poly(&d, "(z1-z2)^2 - 2*z3^2").is_homogeneous(), Some(2));
    }

    #[test]
    fn translation_invariance_examples() {
        let d = z();
        assert!(poly(&d, "(x-y)^2").is_translation_invariant());
        assert!(!poly(&d, "x+y-z").is_translation_invariant());
        assert!(poly(&d, "x+y-2*z").is_translation_invariant());
        // char 2: x + y is invariant since 2r = 0
        let g2 = Domain::poly_over_gf(2).unwrap();
        assert!(poly(&g2, "x+y").is_translation_invariant());
        assert!(!poly(&g2, "x+y+z").is_translation_invariant());
    }

    #[test]
    fn combine_over_integers() {
        let d = z();
        let ps = [poly(&d, "x-y+0*z"), poly(&d, "x+y-z")];
        let got = combine_system(&ps).unwrap();
        assert_eq!(got, poly(&d, "(x-y)^2 + (x+y-z)^2"));
    }

    #[test]
    fn combine_over_gf3_and_gf2() {
        let g3 = Domain::poly_over_gf(3).unwrap();
        let (p1, p2) = (poly(&g3, "x+y"), poly(&g3, "x*y-1"));
        let got = combine_system(&[p1.clone(), p2.clone()]).unwrap();
        let t = MultiPoly::constant(&g3, 2, g3.indeterminate().unwrap());
        assert_eq!(got, p2.mul(&p2).sub(&t.mul(&p1).mul(&p1)));

        let g2 = Domain::poly_over_gf(2).unwrap();
        let (p1, p2) = (poly(&g2, "x+y"), poly(&g2, "x*y+1"));
        let got = combine_system(&[p1.clone(), p2.clone()]).unwrap();
        let t = MultiPoly::constant(&g2, 2, g2.indeterminate().unwrap());
        assert_eq!(got, p2.mul(&p2).add(&p1.mul(&p2)).add(&t.mul(&p1).mul(&p1)));
    }

    #[test]
    fn combine_errors() {
        assert_eq!(combine_system(&[]), Err(PolyError::EmptySystem));
        let g2 = Domain::poly_over_gf(2).unwrap();
        let a = poly(&z(), "x+y");
        let b = poly(&g2, "x+y");
        assert_eq!(combine_system(&[a.clone(), b]), Err(PolyError::Incompatible));
        assert_eq!(combine_system(&[a, poly(&z(), "x")]), Err(PolyError::Incompatible));
    }

    #[test]
    fn records_round_trip() {
        let g3 = Domain::poly_over_gf(3).unwrap();
        let p = poly(&g3, "(t+1)*x^2 - t*y + 2");
        let back = MultiPoly::from_records(&g3, 2, &p.to_records()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn display_parses_back() {
        let d = z();
        let p = poly(&d, "-3*x1^2*x2 + x3 - 7 + x1");
        let reparsed = parse_poly_with_vars(&d, &p.to_string(), &MultiPoly::default_names(3)).unwrap();
        assert_eq!(reparsed, p);
        let g3 = Domain::poly_over_gf(3).unwrap();
        let p = poly(&g3, "(t+1)*x1^2 + 2*t*x2");
        let reparsed = parse_poly_with_vars(&g3, &p.to_string(), &MultiPoly::default_names(2)).unwrap();
        assert_eq!(reparsed, p);
    }
}
