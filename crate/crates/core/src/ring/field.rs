//! The fraction field `K = Frac(R)`.

use super::{Domain, Element, RingError};

/// A reduced fraction with canonical denominator (positive over `Z`, monic over `F_q[t]`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    num: Element,
    den: Element,
}

impl FieldElement {
    pub fn num(&self) -> &Element {
        &self.num
    }

    pub fn den(&self) -> &Element {
        &self.den
    }
}

impl Domain {
    /// Reduces `num / den` to canonical form.
    pub fn frac(&self, num: Element, den: Element) -> Result<FieldElement, RingError> {
        if self.is_zero(&den) {
            return Err(RingError::DivisionByZero);
        }
        if self.is_zero(&num) {
            return Ok(FieldElement { num, den: self.one() });
        }
        let g = self.gcd(&num, &den);
        let (mut num, mut den) = (self.exact_div(&num, &g)?, self.exact_div(&den, &g)?);
        let u = self.unit_part(&den);
        if !self.is_one(&u) {
            let inv = self.unit_inverse(&u);
            num = self.mul(&num, &inv);
            den = self.mul(&den, &inv);
        }
        Ok(FieldElement { num, den })
    }

    pub fn embed(&self, a: &Element) -> FieldElement {
        FieldElement { num: a.clone(), den: self.one() }
    }

    pub fn frac_zero(&self) -> FieldElement {
        self.embed(&self.zero())
    }

    pub fn frac_one(&self) -> FieldElement {
        self.embed(&self.one())
    }

    pub fn frac_is_zero(&self, a: &FieldElement) -> bool {
        self.is_zero(&a.num)
    }

    /// The element of `R` if the denominator is one.
    pub fn frac_to_integral(&self, a: &FieldElement) -> Option<Element> {
        self.is_one(&a.den).then(|| a.num.clone())
    }

    pub fn frac_add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        if a.den == b.den {
            return self.frac(self.add(&a.num, &b.num), a.den.clone()).expect("nonzero denominator");
        }
        let num = self.add(&self.mul(&a.num, &b.den), &self.mul(&b.num, &a.den));
        self.frac(num, self.mul(&a.den, &b.den)).expect("nonzero denominator")
    }

    pub fn frac_neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { num: self.neg(&a.num), den: a.den.clone() }
    }

    pub fn frac_sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.frac_add(a, &self.frac_neg(b))
    }

    pub fn frac_mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.frac(self.mul(&a.num, &b.num), self.mul(&a.den, &b.den)).expect("nonzero denominator")
    }

    pub fn frac_inv(&self, a: &FieldElement) -> Result<FieldElement, RingError> {
        self.frac(a.den.clone(), a.num.clone())
    }

    pub fn frac_div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, RingError> {
        Ok(self.frac_mul(a, &self.frac_inv(b)?))
    }

    pub fn frac_pow(&self, a: &FieldElement, e: u32) -> FieldElement {
        FieldElement { num: self.pow(&a.num, e), den: self.pow(&a.den, e) }
    }

    /// `ord_prime(a) = ord_prime(num) - ord_prime(den)`; zero maps to 0 (degenerate).
    pub fn frac_ord_at(&self, a: &FieldElement, prime: &Element) -> Result<(i64, bool), RingError> {
        let n = self.ord_at(&a.num, prime)?;
        if n.degenerate {
            return Ok((0, true));
        }
        let d = self.ord_at(&a.den, prime)?;
        Ok((n.multiplicity as i64 - d.multiplicity as i64, false))
    }

    pub fn format_frac(&self, a: &FieldElement) -> String {
        if self.is_one(&a.den) {
            return self.format(&a.num);
        }
        let wrap = |e: &Element| {
            let s = self.format(e);
            if s.contains('+') || (s.contains('-') && !s.starts_with('-')) || (matches!(e, Element::Poly(_)) && s.contains('*')) {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&a.num), wrap(&a.den))
    }

    /// Parses `a` or `a/b` where each side is an element in the ring syntax.
    pub fn parse_frac(&self, text: &str) -> Result<FieldElement, RingError> {
        let mut depth = 0i32;
        let mut split = None;
        for (i, c) in text.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    if split.is_some() {
                        return Err(RingError::Syntax(format!("more than one `/` in `{text}`")));
                    }
                    split = Some(i);
                }
                _ => {}
            }
        }
        match split {
            None => Ok(self.embed(&self.parse_element(text)?)),
            Some(i) => {
                let num = self.parse_element(&text[..i])?;
                let den = self.parse_element(&text[i + 1..])?;
                self.frac(num, den)
            }
        }
    }
}
