//! Acceptance suite: one check per criterion, each printing a PASS/FAIL line.
//! Runs without the test harness so the lines always appear.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use parreg::coloring_families::{refutation_scan, ColoringSpec, ScanResult};
use parreg::linear_rado::{columns_condition, verify_witness, LinearSystem};
use parreg::poly::{parse_poly, random_poly, MultiPoly};
use parreg::reductions::{check_identity, diffquotient4_homogenize, quotient3_homogenize, Transform};
use parreg::ring::{Domain, Element};
use parreg::window::density::contains_edge;
use parreg::window::{
    check_window_l_pr, density_window_check, semidecide_l_pr, DensityMode, SemiDecision, Verdict,
    Window,
};
use parreg_cli::certificate::{verify_certificate, CertificateFile, Outcome, Parameters};
use parreg_cli::execute;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SCHUR_LIMIT: Duration = Duration::from_secs(1);
const AP_LIMIT: Duration = Duration::from_secs(5);
const NON_REGULAR_LIMIT: Duration = Duration::from_secs(1);
const DENSITY_LIMIT: Duration = Duration::from_secs(1);
const CHAR2_LIMIT: Duration = Duration::from_secs(1);
const RANDOM_POLYS: usize = 100;
const IDENTITY_SAMPLES: usize = 1000;

/// Operation, domain, polynomial, matrix, parameters.
type Run = (&'static str, &'static str, Option<&'static str>, Option<&'static str>, Parameters);
type Criterion = (u32, &'static str, fn() -> Result<String, String>, Option<Duration>);

fn poly(dom: &Domain, s: &str) -> MultiPoly {
    parse_poly(dom, s).unwrap().poly
}

fn z() -> Domain {
    Domain::integers()
}

/// Root value sets of `p` in `w`, found by evaluating every tuple directly.
fn oracle_edges(p: &MultiPoly, w: &Window, injective: bool) -> Vec<Vec<usize>> {
    let n = w.len();
    let k = p.nvars();
    let mut edges = Vec::new();
    let mut idx = vec![0usize; k];
    if n == 0 {
        return edges;
    }
    loop {
        let mut set = idx.clone();
        set.sort_unstable();
        set.dedup();
        if !injective || set.len() == k {
            let point: Vec<Element> = idx.iter().map(|&i| w.elements()[i].clone()).collect();
            if p.domain().is_zero(&p.eval_integral(&point).unwrap()) && !edges.contains(&set) {
                edges.push(set);
            }
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return edges;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// The lexicographically least coloring with no monochromatic edge, by
/// walking all `colors^n` colorings in order.
fn oracle_coloring(n: usize, edges: &[Vec<usize>], colors: usize) -> Option<Vec<usize>> {
    let mut c = vec![0usize; n];
    loop {
        if edges.iter().all(|e| e.iter().any(|&v| c[v] != c[e[0]])) {
            return Some(c);
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            c[pos] += 1;
            if c[pos] < colors {
                break;
            }
            c[pos] = 0;
        }
    }
}

fn report(n: u32, name: &str, result: Result<String, String>, elapsed: Duration, limit: Option<Duration>) -> bool {
    let timed_out = limit.is_some_and(|l| elapsed > l);
    let (status, detail) = match (&result, timed_out) {
        (Ok(d), false) => ("PASS", d.clone()),
        (Ok(d), true) => ("FAIL", format!("{d}; took {elapsed:?}, limit {:?}", limit.unwrap())),
        (Err(e), _) => ("FAIL", e.clone()),
    };
    println!("criterion {n} [{status}] {name}: {detail} ({elapsed:.2?})");
    status == "PASS"
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn schur_pipeline() -> Result<String, String> {
    let d = z();
    let a = LinearSystem::parse(&d, "1 1 -1").unwrap();
    let w = columns_condition(&a).unwrap().ok_or("no columns witness for [1, 1, -1]")?;
    ensure(verify_witness(&a, &w).unwrap(), "witness does not verify")?;
    let p = poly(&d, "x+y-z");
    let SemiDecision::Certified(cert) = semidecide_l_pr(&p, 2, false, 10).unwrap() else {
        return Err("no certificate within the first 10 elements".into());
    };
    for (hi, colorable) in [(4, true), (5, false)] {
        let win = Window::interval(1, hi);
        let oracle = oracle_coloring(win.len(), &oracle_edges(&p, &win, false), 2);
        ensure(oracle.is_some() == colorable, format!("oracle disagrees on [1..{hi}]"))?;
        let got = check_window_l_pr(&p, &win, 2, false).unwrap().verdict;
        let expected = match oracle {
            Some(c) => Verdict::PartitionColorable(c),
            None => Verdict::PartitionCertified,
        };
        ensure(got == expected, format!("engine disagrees with the oracle on [1..{hi}]"))?;
    }
    Ok(format!("witness {:?}, certified at {} elements, [1..4] colorable, [1..5] not", w.cells, cert.window.len()))
}

fn three_ap() -> Result<String, String> {
    let d = z();
    let a = LinearSystem::parse(&d, "1 -2 1").unwrap();
    let w = columns_condition(&a).unwrap().ok_or("no columns witness for [1, -2, 1]")?;
    ensure(verify_witness(&a, &w).unwrap(), "witness does not verify")?;
    let p = poly(&d, "(x1-2*x2+x3)^2");
    for (hi, colorable) in [(8, true), (9, false)] {
        let win = Window::interval(1, hi);
        let oracle = oracle_coloring(win.len(), &oracle_edges(&p, &win, true), 2);
        ensure(oracle.is_some() == colorable, format!("oracle disagrees on [1..{hi}]"))?;
        let got = check_window_l_pr(&p, &win, 2, true).unwrap().verdict;
        let expected = match oracle {
            Some(c) => Verdict::PartitionColorable(c),
            None => Verdict::PartitionCertified,
        };
        ensure(got == expected, format!("engine disagrees with the oracle on [1..{hi}]"))?;
    }
    Ok("[1..8] colorable, [1..9] certified, both matching 2^n enumeration".into())
}

fn non_regular() -> Result<String, String> {
    let d = z();
    let a = LinearSystem::parse(&d, "1 -2").unwrap();
    ensure(columns_condition(&a).unwrap().is_none(), "unexpected witness for [1, -2]")?;
    let spec = ColoringSpec::parse(&d, "basep:3").unwrap();
    let w = Window::interval(1, 200);
    let scan = refutation_scan(&poly(&d, "x-2*y"), &spec, &w, false).unwrap();
    ensure(scan == ScanResult::Clean, format!("scan found {scan:?}"))?;
    // last nonzero base-3 digit of 2y is the other nonzero digit than that of y
    let digit = |mut v: u64| {
        while v.is_multiple_of(3) {
            v /= 3;
        }
        v % 3
    };
    ensure((1..=100).all(|y| digit(2 * y) != digit(y)), "analytic digit argument fails")?;
    Ok("no columns witness; base-3 scan of [1..200] clean".into())
}

fn reduction_structure() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut checked = 0;
    for dom in [z(), Domain::poly_over_gf(3).unwrap()] {
        for _ in 0..RANDOM_POLYS {
            let k = rng.gen_range(1..=3);
            let p = loop {
                let p = random_poly(&dom, &mut rng, k, 3, 5, 4);
                if !p.is_zero() {
                    break p;
                }
            };
            let deg = p.degree().unwrap();
            let q3 = quotient3_homogenize(&p);
            ensure(q3.is_homogeneous() == Some(k as u32 * deg), format!("q3 of {p} over {dom} not homogeneous of degree {}", k as u32 * deg))?;
            let dq4 = diffquotient4_homogenize(&p);
            ensure(dq4.is_homogeneous() == Some(k as u32 * deg), format!("dq4 of {p} over {dom} not homogeneous"))?;
            ensure(dq4.is_translation_invariant(), format!("dq4 of {p} over {dom} not translation invariant"))?;
            for (t, out) in [(Transform::Quotient3, &q3), (Transform::DiffQuotient4, &dq4)] {
                ensure(
                    check_identity(&p, out, t, IDENTITY_SAMPLES, &mut rng).unwrap(),
                    format!("{t} identity fails for {p} over {dom}"),
                )?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} polynomials, {IDENTITY_SAMPLES} samples per transform, zero failures"))
}

fn density_window() -> Result<String, String> {
    let p = poly(&z(), "(x1-2*x2+x3)^2");
    let w = Window::interval(1, 9);
    let edges = oracle_edges(&p, &w, true);
    let oracle_max = (0u32..1 << 9)
        .filter(|m| !contains_edge(&edges, &(0..9).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
        .map(u32::count_ones)
        .max()
        .unwrap();
    ensure(oracle_max == 5, format!("oracle maximum is {oracle_max}"))?;
    let c = density_window_check(&p, &w, &"3/5".parse::<BigRational>().unwrap(), DensityMode::Additive, true).unwrap();
    let Verdict::DensityCertified { best } = &c.verdict else {
        return Err(format!("delta 0.6 gave {:?}", c.verdict));
    };
    ensure(best.len() == 5, "maximum avoider size differs from 5")?;
    let c = density_window_check(&p, &w, &"5/9".parse::<BigRational>().unwrap(), DensityMode::Additive, true).unwrap();
    let Verdict::DensityAvoider(avoider) = &c.verdict else {
        return Err(format!("delta 5/9 gave {:?}", c.verdict));
    };
    ensure(avoider.len() == 5 && !contains_edge(&edges, avoider), "bad avoider for delta 5/9")?;
    Ok(format!("maximum 3-AP-free subset of [1..9] has 5 elements; avoider {avoider:?}"))
}

fn char2() -> Result<String, String> {
    let g2 = Domain::poly_over_gf(2).unwrap();
    let a = LinearSystem::parse(&g2, "1 1 -1").unwrap();
    let w = columns_condition(&a).unwrap().ok_or("no witness over F_2[t]")?;
    ensure(w.cells[0] == vec![0, 1], format!("first cell is {:?}", w.cells[0]))?;
    ensure(verify_witness(&a, &w).unwrap(), "witness does not verify")?;
    let SemiDecision::Certified(cert) = semidecide_l_pr(&poly(&g2, "x+y-z"), 1, false, 8).unwrap() else {
        return Err("no certificate within budget 8".into());
    };
    Ok(format!("first cell {{1, 2}}; certified at {} elements", cert.window.len()))
}

fn fixture_certificates() -> Vec<CertificateFile> {
    let p = |colors: Option<usize>, window: Option<&str>, injective: bool| Parameters {
        colors,
        window: window.map(String::from),
        injective,
        ..Default::default()
    };
    let mut runs: Vec<Run> = vec![
        ("linear", "Z", None, Some("1 1 -1"), Parameters::default()),
        ("linear", "Z", None, Some("1 -2 1"), Parameters::default()),
        ("linear", "Z", None, Some("1 2 -3 4; 0 1 1 -2"), Parameters::default()),
        ("linear", "Z", None, Some("1 -2"), Parameters::default()),
        ("linear", "GF(2)[t]", None, Some("1 1 -1"), Parameters::default()),
        ("linear", "GF(3)[t]", None, Some("t, -t, 1, -1"), Parameters::default()),
        ("search", "Z", Some("x+y-z"), None, Parameters { colors: Some(2), budget: Some(12), ..Default::default() }),
        ("search", "Z", Some("x-2*y"), None, Parameters { colors: Some(2), budget: Some(14), ..Default::default() }),
        ("search", "GF(2)[t]", Some("x+y-z"), None, Parameters { colors: Some(1), budget: Some(8), ..Default::default() }),
        ("window", "Z", Some("x+y-z"), None, p(Some(2), Some("1..4"), false)),
        ("window", "Z", Some("x+y-z"), None, p(Some(3), Some("1..9"), false)),
        ("window", "Z", Some("(x1-2*x2+x3)^2"), None, p(Some(2), Some("1..8"), true)),
        ("window", "Z", Some("(x1-2*x2+x3)^2"), None, p(Some(2), Some("1..9"), true)),
        ("window", "Z", Some("x-2*y"), None, p(Some(2), Some("prefix:12"), false)),
        ("window", "GF(3)[t]", Some("x+y-z"), None, p(Some(2), Some("deg:1"), false)),
        ("refute", "Z", Some("x-2*y"), None, Parameters { coloring: Some("basep:3".into()), ..p(None, Some("1..60"), false) }),
        ("refute", "Z", Some("x+y-z"), None, Parameters { coloring: Some("basep:3".into()), ..p(None, Some("1..10"), false) }),
        ("refute", "GF(2)[t]", Some("x+y-z"), None, Parameters { coloring: Some("ordmod:t:2".into()), ..p(None, Some("deg:2"), false) }),
        ("roots", "Z", Some("x+y-z"), None, p(None, Some("1..6"), false)),
        ("roots", "Z", Some("x+y-z"), None, Parameters { count: Some(2), ..p(None, Some("1..20"), false) }),
        ("roots", "Z", Some("(x1-2*x2+x3)^2"), None, Parameters { count: Some(3), ..p(None, Some("1..15"), true) }),
        ("reduce", "Z", Some("x1*x2-1"), None, Parameters { transform: Some("q3".into()), samples: Some(50), ..Default::default() }),
        ("reduce", "GF(3)[t]", Some("x^2-t"), None, Parameters { transform: Some("dq4".into()), samples: Some(50), ..Default::default() }),
    ];
    for delta in ["3/5", "5/9", "0.5"] {
        runs.push((
            "density",
            "Z",
            Some("(x1-2*x2+x3)^2"),
            None,
            Parameters { delta: Some(delta.into()), mode: Some("add".into()), ..p(None, Some("1..9"), true) },
        ));
    }
    runs.into_iter()
        .map(|(op, dom, poly, matrix, params)| execute(op, dom, poly, matrix, params, &[op.to_string()]).unwrap())
        .collect()
}

/// Single-point corruptions of a certificate's payload.
fn mutations(file: &CertificateFile) -> Vec<CertificateFile> {
    let mut out = Vec::new();
    let mut push = |result: Outcome| {
        let mut m = file.clone();
        m.result = result;
        out.push(m);
    };
    match &file.result {
        Outcome::PartitionColorable { window, coloring } => {
            let colors = file.parameters.colors.unwrap();
            for i in 0..coloring.len() {
                for c in (0..colors).filter(|&c| c != coloring[i]) {
                    let mut col = coloring.clone();
                    col[i] = c;
                    push(Outcome::PartitionColorable { window: window.clone(), coloring: col });
                }
            }
        }
        Outcome::Exhausted { budget, last_window, last_coloring: Some(coloring) } => {
            let colors = file.parameters.colors.unwrap();
            for i in 0..coloring.len() {
                for c in (0..colors).filter(|&c| c != coloring[i]) {
                    let mut col = coloring.clone();
                    col[i] = c;
                    push(Outcome::Exhausted { budget: *budget, last_window: last_window.clone(), last_coloring: Some(col) });
                }
            }
        }
        Outcome::ColumnsWitness { cells, combinations } => {
            for j in 0..combinations.len() {
                for k in 0..combinations[j].len() {
                    let mut combos = combinations.clone();
                    combos[j].remove(k);
                    push(Outcome::ColumnsWitness { cells: cells.clone(), combinations: combos });
                }
            }
        }
        Outcome::DensityAvoider { window, avoider, transferable } => {
            for i in 0..avoider.len() {
                let mut a = avoider.clone();
                a.remove(i);
                push(Outcome::DensityAvoider { window: window.clone(), avoider: a, transferable: *transferable });
            }
        }
        Outcome::PartitionCertified { window, roots } => {
            let mut r = roots.clone();
            r.pop();
            push(Outcome::PartitionCertified { window: window.clone(), roots: r });
            push(Outcome::PartitionColorable { window: window.clone(), coloring: vec![0; window.elements.len()] });
        }
        Outcome::MonochromaticRoot { window, root, colors } => {
            let mut r = root.clone();
            r[0] = (r[0] + 1) % window.elements.len();
            push(Outcome::MonochromaticRoot { window: window.clone(), root: r, colors: colors.clone() });
        }
        _ => {}
    }
    out
}

fn certificate_integrity() -> Result<String, String> {
    let files = fixture_certificates();
    let mut emitted = 0;
    for f in &files {
        let text = serde_json::to_string_pretty(f).unwrap();
        let back: CertificateFile = serde_json::from_str(&text).unwrap();
        ensure(back == *f, format!("{} certificate does not round-trip", f.operation))?;
        ensure(verify_certificate(&back).unwrap(), format!("{} {} certificate rejected", f.operation, f.result.kind()))?;
        emitted += 1;
    }
    let (mut tried, mut rejected) = (0, 0);
    for f in &files {
        for m in mutations(f) {
            tried += 1;
            if !verify_certificate(&m).unwrap() {
                rejected += 1;
            }
        }
    }
    ensure(tried > 0 && rejected == tried, format!("{rejected}/{tried} mutations rejected"))?;
    Ok(format!("{emitted}/{emitted} certificates verify; {rejected}/{tried} mutations rejected"))
}

fn oracle_equivalence() -> Result<String, String> {
    let g2 = Domain::poly_over_gf(2).unwrap();
    let g3 = Domain::poly_over_gf(3).unwrap();
    let fixtures: Vec<(Domain, &str, bool)> = vec![
        (z(), "x+y-z", false),
        (z(), "x+y-z", true),
        (z(), "x-2*y", false),
        (z(), "(x1-2*x2+x3)^2", true),
        (z(), "x+y-3*z", false),
        (z(), "x+2*y-3*z", false),
        (z(), "x+y-2*z", false),
        (z(), "x^2+y^2-z^2", false),
        (z(), "x*y-z", false),
        (g2.clone(), "x+y+z", false),
        (g3.clone(), "x+y-z", false),
        (g3.clone(), "x-t*y", false),
    ];
    let mut cases = 0;
    for (dom, text, injective) in &fixtures {
        let p = poly(dom, text);
        for size in [3, 6, 9, 12] {
            let mut windows = vec![Window::prefix(dom, size)];
            if *dom == Domain::Integers {
                windows.push(Window::interval(1, size as i64));
            }
            for w in &windows {
                let edges = oracle_edges(&p, w, *injective);
                for colors in 1..=3 {
                    let expected = match oracle_coloring(w.len(), &edges, colors) {
                        Some(c) => Verdict::PartitionColorable(c),
                        None => Verdict::PartitionCertified,
                    };
                    let got = check_window_l_pr(&p, w, colors, *injective).unwrap().verdict;
                    ensure(
                        got == expected,
                        format!("{text} over {dom} on {} with {colors} colors: {got:?} vs {expected:?}", w.provenance()),
                    )?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} cases, zero discrepancies"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "Schur pipeline", schur_pipeline, Some(SCHUR_LIMIT)),
        (2, "3-term progressions", three_ap, Some(AP_LIMIT)),
        (3, "non-regular x = 2y", non_regular, Some(NON_REGULAR_LIMIT)),
        (4, "reduction structure", reduction_structure, None),
        (5, "density window", density_window, Some(DENSITY_LIMIT)),
        (6, "characteristic 2", char2, Some(CHAR2_LIMIT)),
        (7, "certificate integrity", certificate_integrity, None),
        (8, "coloring engine vs exhaustive enumeration", oracle_equivalence, None),
    ];
    let mut failed = Vec::new();
    for (n, name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        if !report(n, name, result, start.elapsed(), limit) {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
