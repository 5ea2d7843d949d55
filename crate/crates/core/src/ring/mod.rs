//! Exact arithmetic over the supported Euclidean domains `Z` and `F_q[t]`.
//!
//! A [`Domain`] is the arithmetic context; [`Element`] values carry no domain
//! of their own and are always stored in canonical form, so equality is
//! syntactic. Passing an element of one domain to the other is a programming
//! error and panics.

mod field;
pub mod gf;
pub mod gfpoly;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::expr::{self, Expr, ParseError};
pub use field::FieldElement;
pub use gf::GaloisField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} exceeds the supported maximum")]
    FieldTooLarge(u32),
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("unknown domain `{0}` (expected `Z` or `GF(q)[t]`)")]
    UnknownDomain(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Syntax(String),
}

/// The ring `R`: either the integers or `F_q[t]`.
#[derive(Clone, PartialEq, Eq)]
pub enum Domain {
    Integers,
    PolyOverGf(Arc<GaloisField>),
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Integers => write!(f, "Z"),
            Domain::PolyOverGf(gf) => write!(f, "GF({})[t]", gf.order()),
        }
    }
}

/// An element of `R` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Int(BigInt),
    /// Little-endian coefficient codes over `F_q`, no trailing zeros.
    Poly(Vec<u32>),
}

impl Element {
    pub fn int(n: i64) -> Self {
        Element::Int(BigInt::from(n))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Element::Int(n) => Some(n),
            Element::Poly(_) => None,
        }
    }
}

/// The four exact ring operations exposed as a single entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    ExactDiv,
}

/// Multiplicity of an irreducible in an element. `degenerate` marks the
/// zero argument, for which the multiplicity is reported as 0 by convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Valuation {
    pub multiplicity: u64,
    pub degenerate: bool,
}

impl Domain {
    pub fn integers() -> Self {
        Domain::Integers
    }

    pub fn poly_over_gf(q: u32) -> Result<Self, RingError> {
        Ok(Domain::PolyOverGf(Arc::new(GaloisField::new(q)?)))
    }

    /// Parses `Z` or `GF(q)[t]` (also accepts `F_q[t]` and `Fq[t]`).
    pub fn parse(text: &str) -> Result<Self, RingError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if matches!(compact.as_str(), "Z" | "ZZ" | "z") {
            return Ok(Domain::Integers);
        }
        let inner = compact
            .strip_prefix("GF(")
            .and_then(|s| s.strip_suffix(")[t]"))
            .or_else(|| compact.strip_prefix("F_").and_then(|s| s.strip_suffix("[t]")))
            .or_else(|| compact.strip_prefix('F').and_then(|s| s.strip_suffix("[t]")));
        match inner.and_then(|q| q.parse::<u32>().ok()) {
            Some(q) => Domain::poly_over_gf(q),
            None => Err(RingError::UnknownDomain(text.to_string())),
        }
    }

    pub fn gf(&self) -> Option<&GaloisField> {
        match self {
            Domain::Integers => None,
            Domain::PolyOverGf(gf) => Some(gf),
        }
    }

    /// Identifier of the enumeration bijection `N -> R`, stamped into certificates.
    pub fn enumeration_scheme(&self) -> &'static str {
        match self {
            Domain::Integers => "zigzag-v1",
            Domain::PolyOverGf(_) => "base-q-digits-v1",
        }
    }

    pub fn zero(&self) -> Element {
        match self {
            Domain::Integers => Element::Int(BigInt::zero()),
            Domain::PolyOverGf(_) => Element::Poly(Vec::new()),
        }
    }

    pub fn one(&self) -> Element {
        match self {
            Domain::Integers => Element::Int(BigInt::one()),
            Domain::PolyOverGf(_) => Element::Poly(vec![1]),
        }
    }

    /// The indeterminate `t` of `F_q[t]`; `None` over `Z`.
    pub fn indeterminate(&self) -> Option<Element> {
        self.gf().map(|_| Element::Poly(vec![0, 1]))
    }

    /// Image of an integer under the canonical map `Z -> R`.
    pub fn from_i64(&self, n: i64) -> Element {
        match self {
            Domain::Integers => Element::int(n),
            Domain::PolyOverGf(gf) => Element::Poly(gfpoly::trim(vec![gf.from_i64(n)])),
        }
    }

    pub fn is_zero(&self, a: &Element) -> bool {
        match a {
            Element::Int(n) => n.is_zero(),
            Element::Poly(c) => c.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Element) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (Domain::Integers, Element::Int(x), Element::Int(y)) => Element::Int(x + y),
            (Domain::PolyOverGf(gf), Element::Poly(x), Element::Poly(y)) => Element::Poly(gfpoly::add(gf, x, y)),
            _ => mismatch(),
        }
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (Domain::Integers, Element::Int(x), Element::Int(y)) => Element::Int(x - y),
            (Domain::PolyOverGf(gf), Element::Poly(x), Element::Poly(y)) => Element::Poly(gfpoly::sub(gf, x, y)),
            _ => mismatch(),
        }
    }

    pub fn neg(&self, a: &Element) -> Element {
        match (self, a) {
            (Domain::Integers, Element::Int(x)) => Element::Int(-x),
            (Domain::PolyOverGf(gf), Element::Poly(x)) => Element::Poly(gfpoly::neg(gf, x)),
            _ => mismatch(),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (Domain::Integers, Element::Int(x), Element::Int(y)) => Element::Int(x * y),
            (Domain::PolyOverGf(gf), Element::Poly(x), Element::Poly(y)) => Element::Poly(gfpoly::mul(gf, x, y)),
            _ => mismatch(),
        }
    }

    pub fn pow(&self, a: &Element, mut exp: u32) -> Element {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Euclidean division with remainder. Over `Z` the remainder is nonnegative.
    pub fn div_rem(&self, a: &Element, b: &Element) -> Result<(Element, Element), RingError> {
        if self.is_zero(b) {
            return Err(RingError::DivisionByZero);
        }
        Ok(match (self, a, b) {
            (Domain::Integers, Element::Int(x), Element::Int(y)) => {
                let (q, r) = x.div_mod_floor(y);
                if r.is_negative() {
                    (Element::Int(q + 1), Element::Int(r - y))
                } else {
                    (Element::Int(q), Element::Int(r))
                }
            }
            (Domain::PolyOverGf(gf), Element::Poly(x), Element::Poly(y)) => {
                let (q, r) = gfpoly::divrem(gf, x, y);
                (Element::Poly(q), Element::Poly(r))
            }
            _ => mismatch(),
        })
    }

    pub fn exact_div(&self, a: &Element, b: &Element) -> Result<Element, RingError> {
        let (q, r) = self.div_rem(a, b)?;
        if !self.is_zero(&r) {
            return Err(RingError::NotDivisible { dividend: self.format(a), divisor: self.format(b) });
        }
        Ok(q)
    }

    pub fn arith(&self, op: ArithOp, a: &Element, b: &Element) -> Result<Element, RingError> {
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::ExactDiv => self.exact_div(a, b),
        }
    }

    pub fn divides(&self, d: &Element, a: &Element) -> bool {
        !self.is_zero(d) && self.div_rem(a, d).map(|(_, r)| self.is_zero(&r)).unwrap_or(false)
    }

    /// Canonical gcd: nonnegative over `Z`, monic over `F_q[t]`.
    pub fn gcd(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (Domain::Integers, Element::Int(x), Element::Int(y)) => Element::Int(x.gcd(y)),
            (Domain::PolyOverGf(gf), Element::Poly(x), Element::Poly(y)) => Element::Poly(gfpoly::gcd(gf, x, y)),
            _ => mismatch(),
        }
    }

    /// The unit `u` with `a / u` canonical (positive, or monic). One for zero.
    pub fn unit_part(&self, a: &Element) -> Element {
        match (self, a) {
            (Domain::Integers, Element::Int(x)) => Element::int(if x.is_negative() { -1 } else { 1 }),
            (Domain::PolyOverGf(_), Element::Poly(x)) => Element::Poly(vec![*x.last().unwrap_or(&1)]),
            _ => mismatch(),
        }
    }

    pub fn is_unit(&self, a: &Element) -> bool {
        match a {
            Element::Int(x) => x.abs().is_one(),
            Element::Poly(c) => c.len() == 1,
        }
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self, u: &Element) -> Element {
        match (self, u) {
            (Domain::Integers, Element::Int(_)) => u.clone(),
            (Domain::PolyOverGf(gf), Element::Poly(c)) => {
                assert_eq!(c.len(), 1, "not a unit");
                Element::Poly(vec![gf.inv(c[0]).unwrap()])
            }
            _ => mismatch(),
        }
    }

    /// Total order used for "size": absolute value over `Z`, degree over `F_q[t]`.
    pub fn norm_cmp(&self, a: &Element, b: &Element) -> Ordering {
        match (a, b) {
            (Element::Int(x), Element::Int(y)) => x.abs().cmp(&y.abs()),
            (Element::Poly(x), Element::Poly(y)) => x.len().cmp(&y.len()),
            _ => mismatch(),
        }
    }

    /// The enumeration bijection `N -> R`: `0, 1, -1, 2, -2, ...` over `Z`;
    /// the base-`q` digits of `index` as coefficients over `F_q[t]`.
    pub fn enum_element(&self, index: u64) -> Element {
        match self {
            Domain::Integers => {
                let half = index.div_ceil(2) as i128;
                let v = if index % 2 == 1 { half } else { -half };
                Element::Int(BigInt::from(v))
            }
            Domain::PolyOverGf(gf) => {
                let q = gf.order() as u64;
                let mut n = index;
                let mut coeffs = Vec::new();
                while n > 0 {
                    coeffs.push((n % q) as u32);
                    n /= q;
                }
                Element::Poly(coeffs)
            }
        }
    }

    /// Inverse of [`Domain::enum_element`]; `None` if the index overflows `u64`.
    pub fn enum_index(&self, a: &Element) -> Option<u64> {
        match (self, a) {
            (Domain::Integers, Element::Int(x)) => {
                let m = x.abs().to_u64()?;
                let base = m.checked_mul(2)?;
                Some(if x.is_positive() { base - 1 } else { base })
            }
            (Domain::PolyOverGf(gf), Element::Poly(c)) => {
                let q = gf.order() as u64;
                c.iter().rev().try_fold(0u64, |acc, &d| acc.checked_mul(q)?.checked_add(d as u64))
            }
            _ => mismatch(),
        }
    }

    /// Irreducibility: `|x|` prime over `Z`; Ben-Or's test over `F_q[t]`.
    pub fn is_irreducible(&self, a: &Element) -> bool {
        match (self, a) {
            (Domain::Integers, Element::Int(x)) => is_prime(&x.magnitude().clone()),
            (Domain::PolyOverGf(gf), Element::Poly(c)) => gfpoly::is_irreducible(gf, c),
            _ => mismatch(),
        }
    }

    /// Multiplicity of the irreducible `prime` in `x`.
    pub fn ord_at(&self, x: &Element, prime: &Element) -> Result<Valuation, RingError> {
        if !self.is_irreducible(prime) {
            return Err(RingError::NotIrreducible(self.format(prime)));
        }
        if self.is_zero(x) {
            return Ok(Valuation { multiplicity: 0, degenerate: true });
        }
        let mut count = 0;
        let mut rest = x.clone();
        loop {
            let (q, r) = self.div_rem(&rest, prime)?;
            if !self.is_zero(&r) {
                break;
            }
            rest = q;
            count += 1;
        }
        Ok(Valuation { multiplicity: count, degenerate: false })
    }

    pub fn format(&self, a: &Element) -> String {
        match (self, a) {
            (Domain::Integers, Element::Int(x)) => x.to_string(),
            (Domain::PolyOverGf(_), Element::Poly(c)) => format_gf_poly(c),
            _ => mismatch(),
        }
    }

    /// Parses an element: a decimal integer over `Z`, or an expression in `t`
    /// such as `t^3+2*t+1` over `F_q[t]`. Integer literals over `F_q[t]` are
    /// field-element codes (reduced mod `q` when `q` is prime).
    pub fn parse_element(&self, text: &str) -> Result<Element, RingError> {
        let tree = expr::parse(text)?;
        self.eval_constant_expr(&tree, text)
    }

    /// Evaluates an expression whose only identifier may be the ring's `t`.
    pub(crate) fn eval_constant_expr(&self, tree: &Expr, text: &str) -> Result<Element, RingError> {
        Ok(match tree {
            Expr::Int(n) => self.literal(n, text)?,
            Expr::Ident { name, column } => match self.indeterminate() {
                Some(t) if name == "t" => t,
                _ => {
                    return Err(RingError::Parse(ParseError {
                        column: *column,
                        message: format!("unexpected identifier `{name}` in a constant"),
                        input: text.to_string(),
                    }))
                }
            },
            Expr::Neg(a) => self.neg(&self.eval_constant_expr(a, text)?),
            Expr::Add(a, b) => self.add(&self.eval_constant_expr(a, text)?, &self.eval_constant_expr(b, text)?),
            Expr::Sub(a, b) => self.sub(&self.eval_constant_expr(a, text)?, &self.eval_constant_expr(b, text)?),
            Expr::Mul(a, b) => self.mul(&self.eval_constant_expr(a, text)?, &self.eval_constant_expr(b, text)?),
            Expr::Pow(a, e) => self.pow(&self.eval_constant_expr(a, text)?, *e),
        })
    }

    pub(crate) fn literal(&self, n: &BigUint, text: &str) -> Result<Element, RingError> {
        match self {
            Domain::Integers => Ok(Element::Int(BigInt::from_biguint(Sign::Plus, n.clone()))),
            Domain::PolyOverGf(gf) => {
                let q = BigUint::from(gf.order());
                let code = if gf.is_prime() {
                    n % &q
                } else if *n < q {
                    n.clone()
                } else {
                    return Err(RingError::Syntax(format!(
                        "literal {n} is not a field element code below {} in `{text}`",
                        gf.order()
                    )));
                };
                Ok(Element::Poly(gfpoly::trim(vec![code.to_u32().unwrap()])))
            }
        }
    }
}

fn mismatch() -> ! {
    panic!("element does not belong to this domain")
}

fn format_gf_poly(c: &[u32]) -> String {
    if c.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, &coef) in c.iter().enumerate().rev() {
        if coef == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        parts.push(match (coef, i) {
            (_, 0) => coef.to_string(),
            (1, _) => mono,
            _ => format!("{coef}*{mono}"),
        });
    }
    parts.join("+")
}

/// Deterministic Miller-Rabin for `u64`, trial division fallback beyond.
pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(n) => is_prime_u64(n),
        None => {
            let mut d = BigUint::from(2u32);
            while &d * &d <= *n {
                if (n % &d).is_zero() {
                    return false;
                }
                d += 1u32;
            }
            true
        }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}


#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Domain {
        Domain::poly_over_gf(q).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let z = Domain::integers();
        assert_eq!(z.enum_element(0), Element::int(0));
        assert_eq!(z.enum_element(2), Element::int(-1));
        assert_eq!(z.enum_element(3), Element::int(2));
        let g2 = gf(2);
        assert_eq!(g2.enum_element(5), g2.parse_element("t^2+1").unwrap());
        assert_eq!(g2.enum_element(0), g2.zero());
    }

    #[test]
    fn enumeration_is_injective_and_inverted() {
        for dom in [Domain::integers(), gf(2), gf(3), gf(4)] {
            let mut seen = std::collections::HashSet::new();
            for i in 0..10_000u64 {
                let e = dom.enum_element(i);
                assert_eq!(dom.enum_index(&e), Some(i));
                assert!(seen.insert(e), "{dom} repeats at {i}");
            }
        }
    }

    #[test]
    fn arith_examples() {
        let z = Domain::integers();
        assert_eq!(z.arith(ArithOp::Mul, &Element::int(-3), &Element::int(7)).unwrap(), Element::int(-21));
        let g2 = gf(2);
        let p = |s: &str| g2.parse_element(s).unwrap();
        assert_eq!(g2.arith(ArithOp::Add, &p("t+1"), &p("t")).unwrap(), p("1"));
        let g3 = gf(3);
        let p3 = |s: &str| g3.parse_element(s).unwrap();
        assert_eq!(g3.arith(ArithOp::Mul, &p3("t+1"), &p3("t+2")).unwrap(), p3("t^2+2"));
    }

    #[test]
    fn exact_division_errors() {
        let z = Domain::integers();
        assert!(matches!(
            z.arith(ArithOp::ExactDiv, &Element::int(7), &Element::int(2)),
            Err(RingError::NotDivisible { .. })
        ));
        assert_eq!(
            z.arith(ArithOp::ExactDiv, &Element::int(7), &Element::int(0)),
            Err(RingError::DivisionByZero)
        );
        assert_eq!(z.exact_div(&Element::int(-21), &Element::int(7)).unwrap(), Element::int(-3));
        let g3 = gf(3);
        let p = |s: &str| g3.parse_element(s).unwrap();
        assert_eq!(g3.exact_div(&p("t^2+2"), &p("t+1")).unwrap(), p("t+2"));
        assert!(g3.exact_div(&p("t^2+1"), &p("t+1")).is_err());
    }

    #[test]
    fn ord_at_examples() {
        let z = Domain::integers();
        let v = z.ord_at(&Element::int(12), &Element::int(2)).unwrap();
        assert_eq!(v, Valuation { multiplicity: 2, degenerate: false });
        let v = z.ord_at(&Element::int(0), &Element::int(3)).unwrap();
        assert_eq!(v, Valuation { multiplicity: 0, degenerate: true });
        assert!(matches!(z.ord_at(&Element::int(12), &Element::int(4)), Err(RingError::NotIrreducible(_))));
        let g2 = gf(2);
        let p = |s: &str| g2.parse_element(s).unwrap();
        assert_eq!(g2.ord_at(&p("t^3+t^2"), &p("t")).unwrap().multiplicity, 2);
        assert!(g2.ord_at(&p("t^3"), &p("t^2+1")).is_err());
    }

    #[test]
    fn element_syntax_round_trip() {
        let g3 = gf(3);
        let e = g3.parse_element("t^3+2*t+1").unwrap();
        assert_eq!(e, Element::Poly(vec![1, 2, 0, 1]));
        assert_eq!(g3.format(&e), "t^3+2*t+1");
        assert_eq!(g3.parse_element("-1").unwrap(), Element::Poly(vec![2]));
        assert_eq!(g3.parse_element("5").unwrap(), Element::Poly(vec![2]));
        let g4 = gf(4);
        assert!(g4.parse_element("4").is_err());
        assert!(Domain::integers().parse_element("t").is_err());
        assert_eq!(Domain::integers().parse_element(" -42 ").unwrap(), Element::int(-42));
    }

    #[test]
    fn domain_syntax() {
        assert_eq!(Domain::parse("Z").unwrap(), Domain::Integers);
        assert_eq!(Domain::parse("GF(9)[t]").unwrap().to_string(), "GF(9)[t]");
        assert_eq!(Domain::parse("F_2[t]").unwrap(), gf(2));
        assert!(Domain::parse("GF(6)[t]").is_err());
        assert!(Domain::parse("Q").is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(3_215_031_751));
    }
}
