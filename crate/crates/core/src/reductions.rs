//! Computable polynomial transformations: shifting every variable into a sum,
//! quotient and difference-quotient homogenization, and ratio/difference gates.
//!
//! Each substitution `x_i -> N_i / D_i` is cleared by multiplying through with
//! `prod D_i^deg(p)`, always the full degree of `p` even when less would do.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::poly::{MultiPoly, PolyError};
use crate::ring::{Domain, Element, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("variable index {index} out of range for {nvars} variables")]
    BadIndex { index: usize, nvars: usize },
    #[error("unknown transform `{0}` (expected shift, q3, dq4, gate:mul or gate:add, optionally gate:MODE:VAR)")]
    UnknownTransform(String),
    #[error("substitution needs {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateMode {
    /// `x_i -> y1 / y2`, cleared by `y2^deg`.
    Multiplicative,
    /// `x_i -> y1 - y2`, nothing to clear.
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Shift,
    Quotient3,
    DiffQuotient4,
    /// Gate on the variable with this 0-based index.
    Gate { mode: GateMode, var: usize },
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Shift => f.write_str("shift"),
            Transform::Quotient3 => f.write_str("q3"),
            Transform::DiffQuotient4 => f.write_str("dq4"),
            Transform::Gate { mode, var } => {
                let m = match mode {
                    GateMode::Multiplicative => "mul",
                    GateMode::Additive => "add",
                };
                if *var == 0 {
                    write!(f, "gate:{m}")
                } else {
                    write!(f, "gate:{m}:{}", var + 1)
                }
            }
        }
    }
}

impl FromStr for Transform {
    type Err = ReductionError;

    /// `gate:mul` gates the first variable; `gate:mul:2` the second.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ReductionError::UnknownTransform(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        Ok(match parts.as_slice() {
            ["shift"] => Transform::Shift,
            ["q3"] => Transform::Quotient3,
            ["dq4"] => Transform::DiffQuotient4,
            ["gate", mode, rest @ ..] => {
                let mode = match *mode {
                    "mul" => GateMode::Multiplicative,
                    "add" => GateMode::Additive,
                    _ => return Err(bad()),
                };
                let var = match rest {
                    [] => 0,
                    [v] => v.parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(bad)? - 1,
                    _ => return Err(bad()),
                };
                Transform::Gate { mode, var }
            }
            _ => return Err(bad()),
        })
    }
}

/// Replaces `x_i` by `N_i / D_i` and multiplies by `prod D_i^exponent`, giving
/// `sum c * prod N_i^e_i * D_i^(exponent - e_i)`. Needs `exponent >= deg_i(p)`
/// for every `i`. All images share one ring and variable count.
pub fn clear_substitution(
    p: &MultiPoly,
    images: &[(MultiPoly, MultiPoly)],
    exponent: u32,
) -> Result<MultiPoly, ReductionError> {
    if images.len() != p.nvars() {
        return Err(ReductionError::ImageCount { expected: p.nvars(), got: images.len() });
    }
    let target = images.first().map_or(0, |(n, _)| n.nvars());
    if images.iter().any(|(n, d)| n.nvars() != target || d.nvars() != target || n.domain() != p.domain() || d.domain() != p.domain()) {
        return Err(PolyError::Incompatible.into());
    }
    let dom = p.domain();
    let one = MultiPoly::constant(dom, target, dom.one());
    let powers = |base: &MultiPoly| {
        let mut row = vec![one.clone()];
        for k in 1..=exponent as usize {
            row.push(row[k - 1].mul(base));
        }
        row
    };
    let num_pows: Vec<Vec<MultiPoly>> = images.iter().map(|(n, _)| powers(n)).collect();
    let den_pows: Vec<Vec<MultiPoly>> = images.iter().map(|(_, d)| powers(d)).collect();
    let mut out = MultiPoly::zero(dom, target);
    for (e, c) in p.terms() {
        let mut term = MultiPoly::constant(dom, target, c.clone());
        for (i, &k) in e.iter().enumerate() {
            assert!(k <= exponent, "clearing exponent below the degree in a variable");
            term = term.mul(&num_pows[i][k as usize]).mul(&den_pows[i][(exponent - k) as usize]);
        }
        out = out.add(&term);
    }
    Ok(out)
}

fn var(dom: &Domain, n: usize, i: usize) -> MultiPoly {
    MultiPoly::var(dom, n, i)
}

fn degree(p: &MultiPoly) -> u32 {
    p.degree().unwrap_or(0)
}

/// `p(y_1 + z_1, ..., y_n + z_n)` in variables `y_1..y_n, z_1..z_n`.
pub fn htp_shift(p: &MultiPoly) -> MultiPoly {
    let n = p.nvars();
    let dom = p.domain();
    let images: Vec<MultiPoly> = (0..n).map(|i| var(dom, 2 * n, i).add(&var(dom, 2 * n, n + i))).collect();
    p.substitute(&images).expect("images match arity")
}

/// `p((z_1 - z_2)/z_3, (z_4 - z_5)/z_6, ...) * (z_3 z_6 ...)^deg(p)`.
pub fn quotient3_homogenize(p: &MultiPoly) -> MultiPoly {
    let k = p.nvars();
    let dom = p.domain();
    let m = 3 * k;
    let images: Vec<(MultiPoly, MultiPoly)> =
        (0..k).map(|i| (var(dom, m, 3 * i).sub(&var(dom, m, 3 * i + 1)), var(dom, m, 3 * i + 2))).collect();
    clear_substitution(p, &images, degree(p)).expect("images are well formed")
}

/// `p((z_1 - z_2)/(z_3 - z_4), ...) * ((z_3 - z_4) ...)^deg(p)`: homogeneous
/// and translation invariant by construction.
pub fn diffquotient4_homogenize(p: &MultiPoly) -> MultiPoly {
    let k = p.nvars();
    let dom = p.domain();
    let m = 4 * k;
    let images: Vec<(MultiPoly, MultiPoly)> = (0..k)
        .map(|i| {
            let v = |j| var(dom, m, 4 * i + j);
            (v(0).sub(&v(1)), v(2).sub(&v(3)))
        })
        .collect();
    clear_substitution(p, &images, degree(p)).expect("images are well formed")
}

/// Replaces variable `index` by two new adjacent variables `y1, y2` (at
/// positions `index` and `index + 1`) through `y1 / y2` or `y1 - y2`.
pub fn ratio_gate(p: &MultiPoly, mode: GateMode, index: usize) -> Result<MultiPoly, ReductionError> {
    let n = p.nvars();
    if index >= n {
        return Err(ReductionError::BadIndex { index, nvars: n });
    }
    let dom = p.domain();
    let m = n + 1;
    let one = MultiPoly::constant(dom, m, dom.one());
    let images: Vec<(MultiPoly, MultiPoly)> = (0..n)
        .map(|i| match i.cmp(&index) {
            std::cmp::Ordering::Less => (var(dom, m, i), one.clone()),
            std::cmp::Ordering::Greater => (var(dom, m, i + 1), one.clone()),
            std::cmp::Ordering::Equal => match mode {
                GateMode::Multiplicative => (var(dom, m, i), var(dom, m, i + 1)),
                GateMode::Additive => (var(dom, m, i).sub(&var(dom, m, i + 1)), one.clone()),
            },
        })
        .collect();
    clear_substitution(p, &images, degree(p))
}

pub fn apply(p: &MultiPoly, transform: Transform) -> Result<MultiPoly, ReductionError> {
    Ok(match transform {
        Transform::Shift => htp_shift(p),
        Transform::Quotient3 => quotient3_homogenize(p),
        Transform::DiffQuotient4 => diffquotient4_homogenize(p),
        Transform::Gate { mode, var } => ratio_gate(p, mode, var)?,
    })
}

/// Variable names for the output of `transform` given the input's names.
pub fn output_names(transform: Transform, names: &[String]) -> Vec<String> {
    let n = names.len();
    let zs = |count: usize| (1..=count).map(|i| format!("z{i}")).collect::<Vec<_>>();
    match transform {
        Transform::Shift => (1..=n).map(|i| format!("y{i}")).chain(zs(n)).collect(),
        Transform::Quotient3 => zs(3 * n),
        Transform::DiffQuotient4 => zs(4 * n),
        Transform::Gate { var, .. } => {
            let mut out: Vec<String> = names.to_vec();
            let taken = |k: usize| names.iter().any(|x| *x == format!("y{k}"));
            let k = (1..).find(|&k| !taken(k) && !taken(k + 1)).expect("finitely many names");
            out.splice(var..=var, [format!("y{k}"), format!("y{}", k + 1)]);
            out
        }
    }
}

/// Arguments at which to evaluate the input, and the clearing factor, for one
/// point of the output's variables; `None` when a denominator vanishes there.
fn numeric_preimage(
    dom: &Domain,
    transform: Transform,
    n: usize,
    exponent: u32,
    z: &[Element],
) -> Option<(Vec<FieldElement>, FieldElement)> {
    let mut clear = dom.frac_one();
    let args = match transform {
        Transform::Shift => (0..n).map(|i| dom.embed(&dom.add(&z[i], &z[n + i]))).collect(),
        Transform::Quotient3 => {
            let mut args = Vec::new();
            for i in 0..n {
                let den = &z[3 * i + 2];
                args.push(dom.frac(dom.sub(&z[3 * i], &z[3 * i + 1]), den.clone()).ok()?);
                clear = dom.frac_mul(&clear, &dom.embed(&dom.pow(den, exponent)));
            }
            args
        }
        Transform::DiffQuotient4 => {
            let mut args = Vec::new();
            for i in 0..n {
                let den = dom.sub(&z[4 * i + 2], &z[4 * i + 3]);
                args.push(dom.frac(dom.sub(&z[4 * i], &z[4 * i + 1]), den.clone()).ok()?);
                clear = dom.frac_mul(&clear, &dom.embed(&dom.pow(&den, exponent)));
            }
            args
        }
        Transform::Gate { mode, var } => {
            let mut args: Vec<FieldElement> = Vec::new();
            for i in 0..n {
                let x = match i.cmp(&var) {
                    std::cmp::Ordering::Less => dom.embed(&z[i]),
                    std::cmp::Ordering::Greater => dom.embed(&z[i + 1]),
                    std::cmp::Ordering::Equal => match mode {
                        GateMode::Multiplicative => {
                            clear = dom.embed(&dom.pow(&z[i + 1], exponent));
                            dom.frac(z[i].clone(), z[i + 1].clone()).ok()?
                        }
                        GateMode::Additive => dom.embed(&dom.sub(&z[i], &z[i + 1])),
                    },
                };
                args.push(x);
            }
            args
        }
    };
    Some((args, clear))
}

/// A random nonzero element: `+-1..=+-50` over `Z`, degree at most 3 over `F_q[t]`.
pub fn sample_nonzero<G: Rng + ?Sized>(dom: &Domain, rng: &mut G) -> Element {
    let limit = match dom.gf() {
        None => 100,
        Some(gf) => (gf.order() as u64).pow(4) - 1,
    };
    dom.enum_element(rng.gen_range(1..=limit))
}

/// Checks `output(z) = p(preimage(z)) * clearing(z)` exactly at `samples`
/// random points with nonzero coordinates (points where a denominator
/// vanishes are redrawn).
pub fn check_identity<G: Rng + ?Sized>(
    input: &MultiPoly,
    output: &MultiPoly,
    transform: Transform,
    samples: usize,
    rng: &mut G,
) -> Result<bool, ReductionError> {
    let dom = input.domain();
    let exponent = degree(input);
    let mut done = 0;
    let mut attempts = 0;
    while done < samples {
        attempts += 1;
        if attempts > 100 * samples.max(1) {
            return Ok(false);
        }
        let z: Vec<Element> = (0..output.nvars()).map(|_| sample_nonzero(dom, rng)).collect();
        let Some((args, clear)) = numeric_preimage(dom, transform, input.nvars(), exponent, &z) else {
            continue;
        };
        let lhs = dom.embed(&output.eval_integral(&z)?);
        let rhs = dom.frac_mul(&input.eval(&args)?, &clear);
        if lhs != rhs {
            return Ok(false);
        }
        done += 1;
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Property {
    Homogeneous(u32),
    TranslationInvariant,
    /// The defining evaluation identity held at this many random points.
    IdentityChecked(usize),
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Homogeneous(d) => write!(f, "homogeneous(degree {d})"),
            Property::TranslationInvariant => f.write_str("translation-invariant"),
            Property::IdentityChecked(n) => write!(f, "identity-checked({n} samples)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub input: MultiPoly,
    pub output: MultiPoly,
    pub transform: Transform,
    pub properties: Vec<Property>,
}

/// Applies `transform` and records every property that holds for the output.
pub fn reduce(p: &MultiPoly, transform: Transform, samples: usize, seed: u64) -> Result<ReductionReport, ReductionError> {
    let output = apply(p, transform)?;
    let mut properties = Vec::new();
    if let Some(d) = output.is_homogeneous() {
        properties.push(Property::Homogeneous(d));
    }
    if output.is_translation_invariant() {
        properties.push(Property::TranslationInvariant);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if samples > 0 && check_identity(p, &output, transform, samples, &mut rng)? {
        properties.push(Property::IdentityChecked(samples));
    }
    Ok(ReductionReport { input: p.clone(), output, transform, properties })
}

/// Re-derives the output and re-checks every listed property.
pub fn verify_report(report: &ReductionReport, seed: u64) -> Result<bool, ReductionError> {
    if apply(&report.input, report.transform)? != report.output {
        return Ok(false);
    }
    for prop in &report.properties {
        let ok = match prop {
            Property::Homogeneous(d) => report.output.is_homogeneous() == Some(*d),
            Property::TranslationInvariant => report.output.is_translation_invariant(),
            Property::IdentityChecked(n) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                check_identity(&report.input, &report.output, report.transform, *n, &mut rng)?
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
