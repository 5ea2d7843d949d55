//! Explicit finite colorings of `R \ {0}` used to refute partition regularity:
//! base-`p` digit colorings of `Z` and `ord` residue colorings.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::poly::MultiPoly;
use crate::ring::{is_prime, Domain, Element, RingError};
use crate::window::{enumerate_roots, Window, WindowError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("bad coloring `{0}` (expected basep:P[:lsd|:msd][:signed] or ordmod:PRIME:M)")]
    BadSpec(String),
    #[error("digit colorings need a prime base, got {0}")]
    NotPrime(String),
    #[error("digit colorings are defined over Z only")]
    DigitsNeedIntegers,
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("0 has no color")]
    ZeroHasNoColor,
    #[error("coloring is over {coloring} but the polynomial is over {poly}")]
    DomainMismatch { coloring: String, poly: String },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Window(#[from] WindowError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DigitOrder {
    /// The last nonzero digit, i.e. `(x / p^ord_p(x)) mod p`.
    LeastSignificant,
    /// The leading digit.
    MostSignificant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Colors `1..p`; with `signed`, negative numbers get `p..2p-1`.
    DigitBaseP { base: u64, order: DigitOrder, signed: bool },
    /// Colors `0..modulus` by `ord_prime(x) mod modulus`.
    OrdMod { prime: Element, modulus: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringSpec {
    domain: Domain,
    family: Family,
}

impl ColoringSpec {
    pub fn digits(base: u64, order: DigitOrder, signed: bool) -> Result<Self, ColoringError> {
        if !is_prime(&BigUint::from(base)) {
            return Err(ColoringError::NotPrime(base.to_string()));
        }
        Ok(Self { domain: Domain::integers(), family: Family::DigitBaseP { base, order, signed } })
    }

    pub fn ord_mod(domain: &Domain, prime: Element, modulus: u64) -> Result<Self, ColoringError> {
        if modulus == 0 {
            return Err(ColoringError::ZeroModulus);
        }
        if !domain.is_irreducible(&prime) {
            return Err(ColoringError::NotIrreducible(domain.format(&prime)));
        }
        Ok(Self { domain: domain.clone(), family: Family::OrdMod { prime, modulus } })
    }

    /// `basep:3`, `basep:3:msd`, `basep:3:lsd:signed`, `ordmod:t:4`, `ordmod:t+1:2`.
    pub fn parse(domain: &Domain, text: &str) -> Result<Self, ColoringError> {
        let bad = || ColoringError::BadSpec(text.to_string());
        let parts: Vec<&str> = text.trim().split(':').map(str::trim).collect();
        match parts.as_slice() {
            ["basep", base, flags @ ..] => {
                if *domain != Domain::Integers {
                    return Err(ColoringError::DigitsNeedIntegers);
                }
                let base: u64 = base.parse().map_err(|_| bad())?;
                let mut order = DigitOrder::LeastSignificant;
                let mut signed = false;
                for flag in flags {
                    match *flag {
                        "lsd" => order = DigitOrder::LeastSignificant,
                        "msd" => order = DigitOrder::MostSignificant,
                        "signed" => signed = true,
                        _ => return Err(bad()),
                    }
                }
                Self::digits(base, order, signed)
            }
            ["ordmod", prime, modulus] => {
                let prime = domain.parse_element(prime)?;
                let modulus: u64 = modulus.parse().map_err(|_| bad())?;
                Self::ord_mod(domain, prime, modulus)
            }
            _ => Err(bad()),
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Number of colors in use; colors are `0..palette_size()` for ord colorings
    /// and `1..=palette_size()` for digit colorings.
    pub fn palette_size(&self) -> usize {
        match &self.family {
            Family::DigitBaseP { base, signed, .. } => (*base as usize - 1) * if *signed { 2 } else { 1 },
            Family::OrdMod { modulus, .. } => *modulus as usize,
        }
    }

    pub fn color_of(&self, x: &Element) -> Result<u64, ColoringError> {
        if self.domain.is_zero(x) {
            return Err(ColoringError::ZeroHasNoColor);
        }
        match &self.family {
            Family::DigitBaseP { base, order, signed } => {
                let Element::Int(v) = x else {
                    return Err(ColoringError::DigitsNeedIntegers);
                };
                let p = BigUint::from(*base);
                let mut m = v.magnitude().clone();
                let digit = match order {
                    DigitOrder::LeastSignificant => {
                        while m.is_multiple_of(&p) {
                            m /= &p;
                        }
                        &m % &p
                    }
                    DigitOrder::MostSignificant => {
                        while m >= p {
                            m /= &p;
                        }
                        m
                    }
                };
                let digit = digit.to_u64().expect("digit below base");
                let negative = v.sign() == num_bigint::Sign::Minus;
                Ok(if *signed && negative { digit + base - 1 } else { digit })
            }
            Family::OrdMod { prime, modulus } => {
                let ord = self.domain.ord_at(x, prime)?.multiplicity;
                Ok(ord % modulus)
            }
        }
    }
}

impl fmt::Display for ColoringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::DigitBaseP { base, order, signed } => {
                write!(f, "basep:{base}")?;
                if *order == DigitOrder::MostSignificant {
                    write!(f, ":msd")?;
                }
                if *signed {
                    write!(f, ":signed")?;
                }
                Ok(())
            }
            Family::OrdMod { prime, modulus } => write!(f, "ordmod:{}:{modulus}", self.domain.format(prime)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScanResult {
    /// No root in the window is monochromatic; evidence only.
    Clean,
    /// The least monochromatic root, as window indices.
    MonochromaticRoot(Vec<usize>),
}

/// Looks for a root of `p` inside `w` whose coordinates all share a color.
pub fn refutation_scan(
    p: &MultiPoly,
    spec: &ColoringSpec,
    w: &Window,
    injective: bool,
) -> Result<ScanResult, ColoringError> {
    if p.domain() != spec.domain() {
        return Err(ColoringError::DomainMismatch { coloring: spec.domain().to_string(), poly: p.domain().to_string() });
    }
    let colors = w.elements().iter().map(|x| spec.color_of(x)).collect::<Result<Vec<_>, _>>()?;
    let h = enumerate_roots(p, w, injective)?;
    Ok(match h.tuples.into_iter().find(|t| t.iter().all(|&i| colors[i] == colors[t[0]])) {
        Some(t) => ScanResult::MonochromaticRoot(t),
        None => ScanResult::Clean,
    })
}

/// Restricts `spec` to `w`, renumbering colors by first appearance.
pub fn coloring_on_window(spec: &ColoringSpec, w: &Window) -> Result<Vec<usize>, ColoringError> {
    let mut seen: Vec<u64> = Vec::new();
    w.elements()
        .iter()
        .map(|x| {
            let c = spec.color_of(x)?;
            Ok(match seen.iter().position(|&s| s == c) {
                Some(i) => i,
                None => {
                    seen.push(c);
                    seen.len() - 1
                }
            })
        })
        .collect()
}
