//! Finite windows of `R \ {0}` and the engines that certify or refute
//! partition and density properties on them.
//!
//! By the compactness principle, an equation is `ℓ`-partition regular over
//! `R \ {0}` iff some finite window already forces a monochromatic root under
//! every `ℓ`-coloring, so a [`WindowCertificate`] with verdict
//! [`Verdict::PartitionCertified`] is a proof. A colorable window is only
//! evidence: larger windows may still certify.

mod certify;
pub mod coloring;
pub mod density;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{power_table, MultiPoly, PolyError};
use crate::ring::{Domain, Element, RingError};
pub use certify::{
    check_window_l_pr, density_window_check, disjoint_solutions, semidecide_l_pr, DensityMode, Parameter,
    SemiDecision, Verdict, WindowCertificate, TOOL_VERSION,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("polynomial is over {poly} but the window is over {window}")]
    DomainMismatch { poly: String, window: String },
    #[error("the window contains 0")]
    ContainsZero,
    #[error("the window lists {0} twice")]
    Duplicate(String),
    #[error("need at least one color")]
    NoColors,
    #[error("density must lie in (0, 1], got {0}")]
    BadDensity(String),
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("bad window `{0}` (expected a..b, prefix:N, deg:D or a comma list)")]
    BadSpec(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Where a window's elements came from; recorded in certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// The first `k` nonzero elements of the enumeration bijection.
    EnumerationPrefix(usize),
    ExplicitList,
    /// `[a, b] \ {0}` over `Z`.
    IntegerInterval(BigInt, BigInt),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::EnumerationPrefix(k) => write!(f, "prefix:{k}"),
            Provenance::ExplicitList => write!(f, "list"),
            Provenance::IntegerInterval(a, b) => write!(f, "{a}..{b}"),
        }
    }
}

/// A finite ordered set of nonzero elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    domain: Domain,
    elements: Vec<Element>,
    provenance: Provenance,
}

impl Window {
    pub fn prefix(domain: &Domain, k: usize) -> Self {
        let elements = (1..=k as u64).map(|i| domain.enum_element(i)).collect();
        Self { domain: domain.clone(), elements, provenance: Provenance::EnumerationPrefix(k) }
    }

    pub fn interval(a: i64, b: i64) -> Self {
        Self::interval_big(BigInt::from(a), BigInt::from(b))
    }

    pub fn interval_big(a: BigInt, b: BigInt) -> Self {
        let mut elements = Vec::new();
        let mut x = a.clone();
        while x <= b {
            if !x.is_zero() {
                elements.push(Element::Int(x.clone()));
            }
            x += 1;
        }
        Self { domain: Domain::Integers, elements, provenance: Provenance::IntegerInterval(a, b) }
    }

    pub fn explicit(domain: &Domain, elements: Vec<Element>) -> Result<Self, WindowError> {
        let mut seen = BTreeSet::new();
        for e in &elements {
            if domain.is_zero(e) {
                return Err(WindowError::ContainsZero);
            }
            if !seen.insert(e) {
                return Err(WindowError::Duplicate(domain.format(e)));
            }
        }
        Ok(Self { domain: domain.clone(), elements, provenance: Provenance::ExplicitList })
    }

    /// `a..b` (integers), `prefix:N`, `deg:D` (nonzero elements of `F_q[t]` of
    /// degree at most `D`, itself an enumeration prefix) or `e1,e2,...`.
    pub fn parse(domain: &Domain, spec: &str) -> Result<Self, WindowError> {
        let spec = spec.trim();
        let bad = || WindowError::BadSpec(spec.to_string());
        if let Some(n) = spec.strip_prefix("prefix:") {
            return Ok(Self::prefix(domain, n.trim().parse().map_err(|_| bad())?));
        }
        if let Some(d) = spec.strip_prefix("deg:") {
            let gf = domain.gf().ok_or_else(bad)?;
            let d: u32 = d.trim().parse().map_err(|_| bad())?;
            let size = (gf.order() as usize).checked_pow(d + 1).ok_or_else(bad)? - 1;
            return Ok(Self::prefix(domain, size));
        }
        if let Some((a, b)) = spec.split_once("..") {
            if *domain != Domain::Integers {
                return Err(bad());
            }
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            return Ok(Self::interval_big(a, b));
        }
        let elements = spec.split(',').map(|e| domain.parse_element(e.trim())).collect::<Result<Vec<_>, _>>()?;
        Self::explicit(domain, elements)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The first `k` elements, as a window of its own.
    pub fn truncate(&self, k: usize) -> Self {
        let provenance = match self.provenance {
            Provenance::EnumerationPrefix(_) => Provenance::EnumerationPrefix(k),
            _ => Provenance::ExplicitList,
        };
        Self { domain: self.domain.clone(), elements: self.elements[..k.min(self.len())].to_vec(), provenance }
    }

    pub fn format_element(&self, i: usize) -> String {
        self.domain.format(&self.elements[i])
    }

    pub fn format_tuple(&self, tuple: &[usize]) -> String {
        let parts: Vec<String> = tuple.iter().map(|&i| self.format_element(i)).collect();
        format!("({})", parts.join(", "))
    }
}

/// Roots of `p` inside a window, as index tuples, plus their distinct value sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootHypergraph {
    pub window: Window,
    pub tuples: Vec<Vec<usize>>,
    /// Sorted, deduplicated index sets, in lexicographic order.
    pub edges: Vec<Vec<usize>>,
    pub injective: bool,
}

impl RootHypergraph {
    fn from_tuples(window: Window, tuples: Vec<Vec<usize>>, injective: bool) -> Self {
        let edges: BTreeSet<Vec<usize>> = tuples.iter().map(|t| value_set(t)).collect();
        Self { window, tuples, edges: edges.into_iter().collect(), injective }
    }

    /// The hypergraph of the window's first `k` elements (identical to a fresh scan).
    pub fn restrict_to_prefix(&self, k: usize) -> Self {
        let tuples = self.tuples.iter().filter(|t| t.iter().all(|&i| i < k)).cloned().collect();
        Self::from_tuples(self.window.truncate(k), tuples, self.injective)
    }

    pub fn has_singleton_edge(&self) -> bool {
        self.edges.iter().any(|e| e.len() == 1)
    }
}

pub(crate) fn value_set(tuple: &[usize]) -> Vec<usize> {
    let mut s = tuple.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

pub(crate) fn check_domains(p: &MultiPoly, w: &Window) -> Result<(), WindowError> {
    if p.domain() != w.domain() {
        return Err(WindowError::DomainMismatch { poly: p.domain().to_string(), window: w.domain().to_string() });
    }
    Ok(())
}

/// All tuples of `w^nvars` at which `p` vanishes, in lexicographic order of
/// index tuples; with `injective`, only tuples with pairwise distinct entries.
pub fn enumerate_roots(p: &MultiPoly, w: &Window, injective: bool) -> Result<RootHypergraph, WindowError> {
    check_domains(p, w)?;
    let dom = p.domain();
    let n = p.nvars();
    let max_deg = (0..n).map(|i| p.degree_in(i)).max().unwrap_or(0);
    let powers: Vec<Vec<Element>> = w.elements.iter().map(|x| power_table(dom, x, max_deg)).collect();
    let terms: Vec<(&Vec<u32>, &Element)> = p.terms().collect();
    let mut tuples = Vec::new();
    if w.is_empty() || n == 0 {
        return Ok(RootHypergraph::from_tuples(w.clone(), tuples, injective));
    }
    let mut idx = vec![0usize; n];
    loop {
        let distinct = !injective || {
            let mut s = idx.clone();
            s.sort_unstable();
            s.windows(2).all(|p| p[0] != p[1])
        };
        if distinct {
            let mut total = dom.zero();
            for (e, c) in &terms {
                let mut term = (*c).clone();
                for (var, &k) in e.iter().enumerate() {
                    if k > 0 {
                        term = dom.mul(&term, &powers[idx[var]][k as usize]);
                    }
                }
                total = dom.add(&total, &term);
            }
            if dom.is_zero(&total) {
                tuples.push(idx.clone());
            }
        }
        // odometer, last coordinate fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(RootHypergraph::from_tuples(w.clone(), tuples, injective));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < w.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
