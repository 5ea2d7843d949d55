//! The versioned JSON certificate format, and re-verification of certificates.
//!
//! Every outcome is a pure function of the recorded problem and parameters, so
//! a certificate is valid iff its payload passes the direct checks (witness
//! sums, monochromatic-edge scan, avoider edge check) and matches the
//! canonical payload re-derived from the same inputs.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use parreg::coloring_families::{refutation_scan, ColoringSpec, ScanResult};
use parreg::linear_rado::{columns_condition_with_limit, verify_witness, ColumnsWitness, LinearSystem};
use parreg::poly::{parse_poly, MultiPoly, TermRecord};
use parreg::reductions::{reduce, verify_report, ReductionReport, Transform};
use parreg::ring::{Domain, Element};
use parreg::window::coloring::monochromatic_edge;
use parreg::window::density::contains_edge;
use parreg::window::{
    check_window_l_pr, density_window_check, disjoint_solutions, enumerate_roots, semidecide_l_pr, DensityMode,
    Provenance, SemiDecision, Verdict, Window, WindowCertificate,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub variables: Vec<String>,
    pub terms: Vec<TermRecord>,
}

impl PolyRecord {
    pub fn new(p: &MultiPoly, variables: Vec<String>) -> Self {
        Self { variables, terms: p.to_records() }
    }

    pub fn to_poly(&self, domain: &Domain) -> Result<MultiPoly, CliError> {
        Ok(MultiPoly::from_records(domain, self.variables.len(), &self.terms)?)
    }

    pub fn display(&self, domain: &Domain) -> String {
        match self.to_poly(domain) {
            Ok(p) => p.display_with(&self.variables),
            Err(_) => "<unreadable>".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowRecord {
    /// `a..b`, `prefix:N` or `list`.
    pub generator: String,
    pub elements: Vec<String>,
}

impl WindowRecord {
    pub fn new(w: &Window) -> Self {
        Self { generator: w.provenance().to_string(), elements: (0..w.len()).map(|i| w.format_element(i)).collect() }
    }
}

/// Inputs other than the polynomial or matrix. Absent fields do not apply.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default)]
    pub injective: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_columns: Option<usize>,
}

/// Verdict and payload. Window positions and colors are 0-based; matrix
/// columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Outcome {
    ColumnsWitness {
        cells: Vec<Vec<usize>>,
        /// One list per cell after the first of `[column, coefficient]` pairs.
        combinations: Vec<Vec<(usize, String)>>,
    },
    NoColumnsWitness,
    PartitionCertified {
        window: WindowRecord,
        roots: Vec<Vec<usize>>,
    },
    PartitionColorable {
        window: WindowRecord,
        coloring: Vec<usize>,
    },
    Exhausted {
        budget: usize,
        last_window: Option<WindowRecord>,
        last_coloring: Option<Vec<usize>>,
    },
    DensityCertified {
        window: WindowRecord,
        max_avoider: Vec<usize>,
        transferable: bool,
    },
    DensityAvoider {
        window: WindowRecord,
        avoider: Vec<usize>,
        transferable: bool,
    },
    MonochromaticRoot {
        window: WindowRecord,
        root: Vec<usize>,
        colors: Vec<u64>,
    },
    Clean {
        window: WindowRecord,
    },
    Roots {
        window: WindowRecord,
        roots: Vec<Vec<usize>>,
    },
    DisjointSolutions {
        window: WindowRecord,
        solutions: Option<Vec<Vec<usize>>>,
    },
    Reduction {
        output: PolyRecord,
        properties: Vec<String>,
    },
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::ColumnsWitness { .. } => "ColumnsWitness",
            Outcome::NoColumnsWitness => "NoColumnsWitness",
            Outcome::PartitionCertified { .. } => "PartitionCertified",
            Outcome::PartitionColorable { .. } => "PartitionColorable",
            Outcome::Exhausted { .. } => "Exhausted",
            Outcome::DensityCertified { .. } => "DensityCertified",
            Outcome::DensityAvoider { .. } => "DensityAvoider",
            Outcome::MonochromaticRoot { .. } => "MonochromaticRoot",
            Outcome::Clean { .. } => "Clean",
            Outcome::Roots { .. } => "Roots",
            Outcome::DisjointSolutions { .. } => "DisjointSolutions",
            Outcome::Reduction { .. } => "Reduction",
        }
    }

    /// Exhausted searches and clean scans are evidence, not verdicts.
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Outcome::Exhausted { .. } | Outcome::Clean { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub tool_version: String,
    /// The arguments that produced this file.
    pub command: Vec<String>,
    pub operation: String,
    pub domain: String,
    pub enumeration_scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<PolyRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    pub parameters: Parameters,
    pub result: Outcome,
    /// Wall-clock time; not part of the deterministic content.
    pub elapsed_ms: u64,
}

/// The problem a certificate is about, reconstructed from its records.
pub struct Problem {
    pub domain: Domain,
    pub poly: Option<(MultiPoly, Vec<String>)>,
    pub matrix: Option<LinearSystem>,
}

impl Problem {
    pub fn from_file(file: &CertificateFile) -> Result<Self, CliError> {
        let domain = Domain::parse(&file.domain)?;
        let poly = match &file.polynomial {
            Some(rec) => Some((rec.to_poly(&domain)?, rec.variables.clone())),
            None => None,
        };
        let matrix = match &file.matrix {
            Some(rows) => {
                let entries = rows
                    .iter()
                    .map(|r| r.iter().map(|e| domain.parse_element(e)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Some(LinearSystem::new(&domain, entries)?)
            }
            None => None,
        };
        Ok(Self { domain, poly, matrix })
    }

    fn poly(&self) -> Result<&MultiPoly, CliError> {
        self.poly.as_ref().map(|(p, _)| p).ok_or_else(|| CliError::Usage("a polynomial is required".into()))
    }

    fn matrix(&self) -> Result<&LinearSystem, CliError> {
        self.matrix.as_ref().ok_or_else(|| CliError::Usage("a matrix is required".into()))
    }
}

pub fn parse_poly_text(domain: &Domain, text: &str) -> Result<(MultiPoly, Vec<String>), CliError> {
    let parsed = parse_poly(domain, text)?;
    Ok((parsed.poly, parsed.names))
}

/// Accepts `p/q`, an integer, or a finite decimal such as `0.6`.
pub fn parse_ratio(text: &str) -> Result<BigRational, CliError> {
    let t = text.trim();
    let bad = || CliError::BadDelta(text.to_string());
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: num_bigint::BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
        let scale = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRational::new(digits, scale));
    }
    t.parse::<BigRational>().map_err(|_| bad())
}

fn required<T: Clone>(v: &Option<T>, name: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Usage(format!("missing parameter `{name}`")))
}

fn window_of(problem: &Problem, params: &Parameters) -> Result<Window, CliError> {
    Ok(Window::parse(&problem.domain, &required(&params.window, "window")?)?)
}

fn partition_outcome(cert: &WindowCertificate) -> Outcome {
    let window = WindowRecord::new(&cert.window);
    match &cert.verdict {
        Verdict::PartitionColorable(c) => Outcome::PartitionColorable { window, coloring: c.clone() },
        _ => Outcome::PartitionCertified { window, roots: cert.roots.clone() },
    }
}

fn witness_record(dom: &Domain, w: &ColumnsWitness) -> Outcome {
    Outcome::ColumnsWitness {
        cells: w.cells.iter().map(|c| c.iter().map(|j| j + 1).collect()).collect(),
        combinations: w
            .combos
            .iter()
            .map(|m| m.iter().map(|(j, f)| (j + 1, dom.format_frac(f))).collect())
            .collect(),
    }
}

fn report_properties(r: &ReductionReport) -> Vec<String> {
    r.properties.iter().map(|p| p.to_string()).collect()
}

/// Runs the engine named by `operation` on the recorded inputs.
pub fn derive_outcome(operation: &str, problem: &Problem, params: &Parameters) -> Result<Outcome, CliError> {
    let dom = &problem.domain;
    Ok(match operation {
        "linear" => {
            let limit = params.max_columns.unwrap_or(parreg::linear_rado::DEFAULT_MAX_COLUMNS);
            match columns_condition_with_limit(problem.matrix()?, limit)? {
                Some(w) => witness_record(dom, &w),
                None => Outcome::NoColumnsWitness,
            }
        }
        "search" => {
            let colors = required(&params.colors, "colors")?;
            let budget = required(&params.budget, "budget")?;
            match semidecide_l_pr(problem.poly()?, colors, params.injective, budget)? {
                SemiDecision::Certified(cert) => partition_outcome(&cert),
                SemiDecision::Exhausted(last) => Outcome::Exhausted {
                    budget,
                    last_window: last.as_ref().map(|c| WindowRecord::new(&c.window)),
                    last_coloring: last.and_then(|c| match c.verdict {
                        Verdict::PartitionColorable(col) => Some(col),
                        _ => None,
                    }),
                },
            }
        }
        "window" => {
            let colors = required(&params.colors, "colors")?;
            let w = window_of(problem, params)?;
            partition_outcome(&check_window_l_pr(problem.poly()?, &w, colors, params.injective)?)
        }
        "density" => {
            let delta = parse_ratio(&required(&params.delta, "delta")?)?;
            let mode: DensityMode = required(&params.mode, "mode")?.parse().map_err(CliError::Usage)?;
            let w = window_of(problem, params)?;
            let cert = density_window_check(problem.poly()?, &w, &delta, mode, params.injective)?;
            let window = WindowRecord::new(&cert.window);
            match cert.verdict {
                Verdict::DensityCertified { best } => {
                    Outcome::DensityCertified { window, max_avoider: best, transferable: cert.transferable }
                }
                Verdict::DensityAvoider(best) => {
                    Outcome::DensityAvoider { window, avoider: best, transferable: cert.transferable }
                }
                _ => unreachable!("density checks give density verdicts"),
            }
        }
        "roots" => {
            let w = window_of(problem, params)?;
            let window = WindowRecord::new(&w);
            match params.count {
                Some(count) => Outcome::DisjointSolutions {
                    window,
                    solutions: disjoint_solutions(problem.poly()?, &w, count, params.injective)?,
                },
                None => Outcome::Roots { window, roots: enumerate_roots(problem.poly()?, &w, params.injective)?.tuples },
            }
        }
        "refute" => {
            let spec = ColoringSpec::parse(dom, &required(&params.coloring, "coloring")?)?;
            let w = window_of(problem, params)?;
            let window = WindowRecord::new(&w);
            match refutation_scan(problem.poly()?, &spec, &w, params.injective)? {
                ScanResult::Clean => Outcome::Clean { window },
                ScanResult::MonochromaticRoot(root) => {
                    let colors =
                        root.iter().map(|&i| spec.color_of(&w.elements()[i])).collect::<Result<Vec<_>, _>>()?;
                    Outcome::MonochromaticRoot { window, root, colors }
                }
            }
        }
        "reduce" => {
            let transform: Transform = required(&params.transform, "transform")?.parse()?;
            let (p, names) = problem.poly.as_ref().ok_or_else(|| CliError::Usage("a polynomial is required".into()))?;
            let report = reduce(p, transform, params.samples.unwrap_or(0), params.seed.unwrap_or(0))?;
            let output_names = parreg::reductions::output_names(transform, names);
            Outcome::Reduction { output: PolyRecord::new(&report.output, output_names), properties: report_properties(&report) }
        }
        other => return Err(CliError::Usage(format!("unknown operation `{other}`"))),
    })
}

/// Rebuilds the window a payload refers to and checks it against the record.
fn load_window(dom: &Domain, rec: &WindowRecord) -> Result<Window, String> {
    let w = if rec.generator == Provenance::ExplicitList.to_string() {
        let elements = rec
            .elements
            .iter()
            .map(|e| dom.parse_element(e))
            .collect::<Result<Vec<Element>, _>>()
            .map_err(|e| e.to_string())?;
        Window::explicit(dom, elements).map_err(|e| e.to_string())?
    } else {
        Window::parse(dom, &rec.generator).map_err(|e| e.to_string())?
    };
    if WindowRecord::new(&w) != *rec {
        return Err("window elements do not match their generator".into());
    }
    Ok(w)
}

fn in_range(indices: &[usize], len: usize) -> Result<(), String> {
    match indices.iter().find(|&&i| i >= len) {
        Some(i) => Err(format!("index {i} outside the window")),
        None => Ok(()),
    }
}

/// Direct checks of a payload that need no search.
fn check_payload(file: &CertificateFile, problem: &Problem) -> Result<(), String> {
    let dom = &problem.domain;
    let params = &file.parameters;
    let poly = || problem.poly.as_ref().map(|(p, _)| p).ok_or_else(|| "missing polynomial".to_string());
    match &file.result {
        Outcome::ColumnsWitness { cells, combinations } => {
            let a = problem.matrix.as_ref().ok_or("missing matrix")?;
            let to_zero = |j: &usize| j.checked_sub(1).ok_or_else(|| "columns are 1-based".to_string());
            let cells = cells
                .iter()
                .map(|c| c.iter().map(to_zero).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let combos = combinations
                .iter()
                .map(|m| {
                    let map = m
                        .iter()
                        .map(|(j, f)| Ok((to_zero(j)?, dom.parse_frac(f).map_err(|e| e.to_string())?)))
                        .collect::<Result<BTreeMap<_, _>, String>>()?;
                    if map.len() == m.len() {
                        Ok(map)
                    } else {
                        Err("a combination repeats a column".to_string())
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            match verify_witness(a, &ColumnsWitness { cells, combos }) {
                Ok(true) => Ok(()),
                Ok(false) => Err("a cell sum does not match its combination".into()),
                Err(e) => Err(format!("malformed witness: {e}")),
            }
        }
        Outcome::PartitionColorable { window, coloring } => {
            let w = load_window(dom, window)?;
            let colors = params.colors.ok_or("missing color count")?;
            if coloring.len() != w.len() {
                return Err("coloring length differs from the window size".into());
            }
            if let Some(c) = coloring.iter().find(|&&c| c >= colors) {
                return Err(format!("color {c} exceeds the palette"));
            }
            let h = enumerate_roots(poly()?, &w, params.injective).map_err(|e| e.to_string())?;
            match monochromatic_edge(&h.edges, coloring) {
                Some(e) => Err(format!("monochromatic root on positions {e:?}")),
                None => Ok(()),
            }
        }
        Outcome::PartitionCertified { window, roots } => {
            let w = load_window(dom, window)?;
            check_roots(poly()?, &w, roots, params.injective)
        }
        Outcome::Roots { window, roots } => {
            let w = load_window(dom, window)?;
            check_roots(poly()?, &w, roots, params.injective)
        }
        Outcome::DisjointSolutions { window, solutions } => {
            let w = load_window(dom, window)?;
            if let Some(sols) = solutions {
                check_roots(poly()?, &w, sols, params.injective)?;
                let mut used = vec![false; w.len()];
                for s in sols {
                    let mut vals = s.clone();
                    vals.sort_unstable();
                    vals.dedup();
                    for v in vals {
                        if std::mem::replace(&mut used[v], true) {
                            return Err("solutions share a value".into());
                        }
                    }
                }
            }
            Ok(())
        }
        Outcome::DensityAvoider { window, avoider, .. } | Outcome::DensityCertified { window, max_avoider: avoider, .. } => {
            let w = load_window(dom, window)?;
            in_range(avoider, w.len())?;
            if avoider.windows(2).any(|p| p[0] >= p[1]) {
                return Err("avoider is not a strictly increasing index list".into());
            }
            let h = enumerate_roots(poly()?, &w, params.injective).map_err(|e| e.to_string())?;
            if contains_edge(&h.edges, avoider) {
                return Err("the avoiding set contains a root".into());
            }
            let delta = parse_ratio(params.delta.as_deref().ok_or("missing delta")?).map_err(|e| e.to_string())?;
            if delta <= BigRational::zero() || delta > BigRational::one() {
                return Err("delta outside (0, 1]".into());
            }
            let size = BigRational::from_integer(avoider.len().into());
            let threshold = delta * BigRational::from_integer(w.len().into());
            let certified = matches!(file.result, Outcome::DensityCertified { .. });
            if certified != (size < threshold) {
                return Err("verdict disagrees with the avoider size".into());
            }
            Ok(())
        }
        Outcome::MonochromaticRoot { window, root, colors } => {
            let w = load_window(dom, window)?;
            check_roots(poly()?, &w, std::slice::from_ref(root), params.injective)?;
            let spec = ColoringSpec::parse(dom, params.coloring.as_deref().ok_or("missing coloring")?)
                .map_err(|e| e.to_string())?;
            let actual = root.iter().map(|&i| spec.color_of(&w.elements()[i])).collect::<Result<Vec<_>, _>>();
            if actual.as_ref().map_err(|e| e.to_string())? != colors || colors.windows(2).any(|c| c[0] != c[1]) {
                return Err("root is not monochromatic".into());
            }
            Ok(())
        }
        Outcome::Clean { window } => load_window(dom, window).map(|_| ()),
        Outcome::Exhausted { last_window, last_coloring, .. } => {
            if let (Some(window), Some(coloring)) = (last_window, last_coloring) {
                let w = load_window(dom, window)?;
                if coloring.len() != w.len() {
                    return Err("coloring length differs from the window size".into());
                }
                let h = enumerate_roots(poly()?, &w, params.injective).map_err(|e| e.to_string())?;
                if monochromatic_edge(&h.edges, coloring).is_some() {
                    return Err("last coloring has a monochromatic root".into());
                }
            }
            Ok(())
        }
        Outcome::NoColumnsWitness => Ok(()),
        Outcome::Reduction { output, .. } => {
            let (p, _) = problem.poly.as_ref().ok_or("missing polynomial")?;
            let out = output.to_poly(dom).map_err(|e| e.to_string())?;
            let transform: Transform = params
                .transform
                .as_deref()
                .ok_or("missing transform")?
                .parse()
                .map_err(|e: parreg::reductions::ReductionError| e.to_string())?;
            let report = ReductionReport { input: p.clone(), output: out, transform, properties: Vec::new() };
            match verify_report(&report, params.seed.unwrap_or(0)) {
                Ok(true) => Ok(()),
                Ok(false) => Err("output is not the transform of the input".into()),
                Err(e) => Err(e.to_string()),
            }
        }
    }
}

fn check_roots(p: &MultiPoly, w: &Window, roots: &[Vec<usize>], injective: bool) -> Result<(), String> {
    let dom = p.domain();
    for r in roots {
        in_range(r, w.len())?;
        if r.len() != p.nvars() {
            return Err("root tuple has the wrong length".into());
        }
        if injective {
            let mut s = r.clone();
            s.sort_unstable();
            if s.windows(2).any(|x| x[0] == x[1]) {
                return Err("root repeats a value in injective mode".into());
            }
        }
        let point: Vec<Element> = r.iter().map(|&i| w.elements()[i].clone()).collect();
        let v = p.eval_integral(&point).map_err(|e| e.to_string())?;
        if !dom.is_zero(&v) {
            return Err(format!("{} is not a root", w.format_tuple(r)));
        }
    }
    Ok(())
}

/// `Ok(None)` when the certificate is valid, `Ok(Some(reason))` when it is not.
/// Unsupported schema versions are errors.
pub fn diagnose_certificate(file: &CertificateFile) -> Result<Option<String>, CliError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(CliError::Schema(file.schema_version));
    }
    let problem = match Problem::from_file(file) {
        Ok(p) => p,
        Err(e) => return Ok(Some(format!("unreadable problem: {e}"))),
    };
    if problem.domain.enumeration_scheme() != file.enumeration_scheme {
        return Ok(Some(format!("unknown enumeration scheme `{}`", file.enumeration_scheme)));
    }
    if let Err(reason) = check_payload(file, &problem) {
        return Ok(Some(reason));
    }
    match derive_outcome(&file.operation, &problem, &file.parameters) {
        Ok(canonical) if canonical == file.result => Ok(None),
        Ok(_) => Ok(Some("payload differs from the canonical result".into())),
        Err(e) => Ok(Some(format!("cannot re-derive the result: {e}"))),
    }
}

pub fn verify_certificate(file: &CertificateFile) -> Result<bool, CliError> {
    Ok(diagnose_certificate(file)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        let r = |s: &str| parse_ratio(s).unwrap();
        assert_eq!(r("0.6"), r("3/5"));
        assert_eq!(r("5/9"), BigRational::new(5.into(), 9.into()));
        assert_eq!(r("1"), r("1.000"));
        for bad in ["", "0.", "1/0", "abc", "0.6x"] {
            assert!(parse_ratio(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn poly_record_round_trip() {
        for (dom, text) in [(Domain::integers(), "x1^2-4*x1*x2+3"), (Domain::poly_over_gf(3).unwrap(), "t*x+y^2-1")] {
            let (p, names) = parse_poly_text(&dom, text).unwrap();
            let rec = PolyRecord::new(&p, names);
            let back: PolyRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
            assert_eq!(back.to_poly(&dom).unwrap(), p);
        }
    }

    #[test]
    fn outcome_kinds() {
        let w = WindowRecord { generator: "list".into(), elements: vec!["1".into()] };
        assert!(Outcome::Clean { window: w.clone() }.is_inconclusive());
        assert!(!Outcome::PartitionCertified { window: w, roots: vec![] }.is_inconclusive());
        assert_eq!(Outcome::NoColumnsWitness.kind(), "NoColumnsWitness");
    }
}
