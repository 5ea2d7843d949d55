use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coloring::least_proper_coloring;
use super::density::max_edge_free_subset;
use super::{check_domains, enumerate_roots, value_set, RootHypergraph, Window, WindowError};
use crate::poly::MultiPoly;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMode {
    Additive,
    Multiplicative,
}

impl fmt::Display for DensityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityMode::Additive => "add",
            DensityMode::Multiplicative => "mul",
        })
    }
}

impl FromStr for DensityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "add" | "additive" => Ok(DensityMode::Additive),
            "mul" | "multiplicative" => Ok(DensityMode::Multiplicative),
            _ => Err(format!("unknown density mode `{s}` (expected add or mul)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parameter {
    Colors(usize),
    Density { delta: BigRational, mode: DensityMode },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every coloring of the window has a monochromatic root.
    PartitionCertified,
    /// Color of each window position (the lexicographically least proper coloring).
    PartitionColorable(Vec<usize>),
    /// No subset of size `>= delta * |w|` avoids the roots; `best` is a maximum avoider.
    DensityCertified { best: Vec<usize> },
    /// A maximum root-free subset of window positions, of size `>= delta * |w|`.
    DensityAvoider(Vec<usize>),
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::PartitionCertified => "PartitionCertified",
            Verdict::PartitionColorable(_) => "PartitionColorable",
            Verdict::DensityCertified { .. } => "DensityCertified",
            Verdict::DensityAvoider(_) => "DensityAvoider",
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::PartitionCertified | Verdict::DensityCertified { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowCertificate {
    pub window: Window,
    pub injective: bool,
    pub parameter: Parameter,
    pub verdict: Verdict,
    /// Root tuples found in the window, as index tuples.
    pub roots: Vec<Vec<usize>>,
    /// False when a density verdict lacks the structural property that lets it
    /// speak about the whole ring.
    pub transferable: bool,
    pub scheme: &'static str,
    pub tool_version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemiDecision {
    Certified(WindowCertificate),
    /// Inconclusive; carries the largest window found colorable, if any.
    Exhausted(Option<WindowCertificate>),
}

fn partition_certificate(h: RootHypergraph, colors: usize) -> WindowCertificate {
    let verdict = match least_proper_coloring(h.window.len(), &h.edges, colors) {
        Some(c) => Verdict::PartitionColorable(c),
        None => Verdict::PartitionCertified,
    };
    let scheme = h.window.domain().enumeration_scheme();
    WindowCertificate {
        window: h.window,
        injective: h.injective,
        parameter: Parameter::Colors(colors),
        verdict,
        roots: h.tuples,
        transferable: true,
        scheme,
        tool_version: TOOL_VERSION,
    }
}

/// Decides whether every `colors`-coloring of `w` has a monochromatic root of `p`.
pub fn check_window_l_pr(
    p: &MultiPoly,
    w: &Window,
    colors: usize,
    injective: bool,
) -> Result<WindowCertificate, WindowError> {
    if colors == 0 {
        return Err(WindowError::NoColors);
    }
    let h = enumerate_roots(p, w, injective)?;
    Ok(partition_certificate(h, colors))
}

/// Checks the enumeration prefixes of size `1..=budget` in turn and stops at
/// the first one that certifies.
pub fn semidecide_l_pr(
    p: &MultiPoly,
    colors: usize,
    injective: bool,
    budget: usize,
) -> Result<SemiDecision, WindowError> {
    if colors == 0 {
        return Err(WindowError::NoColors);
    }
    if budget == 0 {
        return Err(WindowError::ZeroBudget);
    }
    let full = enumerate_roots(p, &Window::prefix(p.domain(), budget), injective)?;
    let mut last = None;
    for k in 1..=budget {
        let cert = partition_certificate(full.restrict_to_prefix(k), colors);
        if cert.verdict.is_certified() {
            return Ok(SemiDecision::Certified(cert));
        }
        last = Some(cert);
    }
    Ok(SemiDecision::Exhausted(last))
}

/// Whether every subset of `w` of size at least `delta * |w|` contains a root of `p`.
pub fn density_window_check(
    p: &MultiPoly,
    w: &Window,
    delta: &BigRational,
    mode: DensityMode,
    injective: bool,
) -> Result<WindowCertificate, WindowError> {
    if *delta <= BigRational::zero() || *delta > BigRational::one() {
        return Err(WindowError::BadDensity(delta.to_string()));
    }
    let h = enumerate_roots(p, w, injective)?;
    let best = max_edge_free_subset(w.len(), &h.edges);
    let threshold = delta * BigRational::from_integer(BigInt::from(w.len()));
    let verdict = if BigRational::from_integer(BigInt::from(best.len())) < threshold {
        Verdict::DensityCertified { best }
    } else {
        Verdict::DensityAvoider(best)
    };
    let transferable = match mode {
        DensityMode::Additive => p.is_translation_invariant(),
        DensityMode::Multiplicative => p.is_homogeneous().is_some(),
    };
    Ok(WindowCertificate {
        window: h.window,
        injective,
        parameter: Parameter::Density { delta: delta.clone(), mode },
        verdict,
        roots: h.tuples,
        transferable,
        scheme: w.domain().enumeration_scheme(),
        tool_version: TOOL_VERSION,
    })
}

/// `count` root tuples in `w` whose value sets are pairwise disjoint, or `None`.
///
/// Searches over distinct value sets in lexicographic order, each represented
/// by its first root tuple.
pub fn disjoint_solutions(
    p: &MultiPoly,
    w: &Window,
    count: usize,
    injective: bool,
) -> Result<Option<Vec<Vec<usize>>>, WindowError> {
    check_domains(p, w)?;
    let h = enumerate_roots(p, w, injective)?;
    let reps: Vec<&Vec<usize>> = h
        .edges
        .iter()
        .map(|e| h.tuples.iter().find(|t| value_set(t) == *e).expect("every edge comes from a tuple"))
        .collect();
    let mut used = vec![false; w.len()];
    let mut picked = Vec::new();
    fn dfs(
        edges: &[Vec<usize>],
        start: usize,
        count: usize,
        used: &mut [bool],
        picked: &mut Vec<usize>,
    ) -> bool {
        if picked.len() == count {
            return true;
        }
        for k in start..edges.len() {
            if edges.len() - k < count - picked.len() {
                break;
            }
            if edges[k].iter().any(|&v| used[v]) {
                continue;
            }
            for &v in &edges[k] {
                used[v] = true;
            }
            picked.push(k);
            if dfs(edges, k + 1, count, used, picked) {
                return true;
            }
            picked.pop();
            for &v in &edges[k] {
                used[v] = false;
            }
        }
        false
    }
    Ok(dfs(&h.edges, 0, count, &mut used, &mut picked).then(|| picked.iter().map(|&k| reps[k].clone()).collect()))
}
