use std::cmp::Ordering;

use super::{MultiPoly, PolyError};
use crate::expr::{self, Expr, ParseError};
use crate::ring::{Domain, RingError};

/// A parsed polynomial together with the variable names, in positional order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedPoly {
    pub poly: MultiPoly,
    pub names: Vec<String>,
}

/// Orders `x2` before `x10`: alphabetic prefix first, then the numeric suffix.
fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, digits) = s.split_at(cut);
        (head, digits.parse().ok())
    }
    split(a).cmp(&split(b)).then_with(|| a.cmp(b))
}

/// Parses a polynomial; variables are every identifier other than the ring's
/// `t` (over `F_q[t]`), ordered naturally (`x1 < x2 < x10`, `x < y < z`).
pub fn parse_poly(domain: &Domain, text: &str) -> Result<ParsedPoly, PolyError> {
    let tree = expr::parse(text).map_err(RingError::from)?;
    let mut names: Vec<String> = tree
        .identifiers()
        .into_iter()
        .filter(|n| !(domain.indeterminate().is_some() && n == "t"))
        .collect();
    names.sort_by(|a, b| natural_cmp(a, b));
    if names.is_empty() {
        return Err(PolyError::Ring(RingError::Syntax(format!("`{text}` has no variables"))));
    }
    let poly = build(domain, &tree, &names, text)?;
    Ok(ParsedPoly { poly, names })
}

/// Parses with a fixed variable list; identifiers outside it are rejected.
pub fn parse_poly_with_vars(domain: &Domain, text: &str, names: &[String]) -> Result<MultiPoly, PolyError> {
    let tree = expr::parse(text).map_err(RingError::from)?;
    build(domain, &tree, names, text)
}

fn build(domain: &Domain, tree: &Expr, names: &[String], text: &str) -> Result<MultiPoly, PolyError> {
    let n = names.len();
    Ok(match tree {
        Expr::Int(v) => MultiPoly::constant(domain, n, domain.literal(v, text)?),
        Expr::Ident { name, column } => match names.iter().position(|x| x == name) {
            Some(i) => MultiPoly::var(domain, n, i),
            None if domain.indeterminate().is_some() && name == "t" => {
                MultiPoly::constant(domain, n, domain.indeterminate().unwrap())
            }
            None => {
                return Err(PolyError::Ring(RingError::Parse(ParseError {
                    column: *column,
                    message: format!("unknown variable `{name}`"),
                    input: text.to_string(),
                })))
            }
        },
        Expr::Neg(a) => build(domain, a, names, text)?.neg(),
        Expr::Add(a, b) => build(domain, a, names, text)?.add(&build(domain, b, names, text)?),
        Expr::Sub(a, b) => build(domain, a, names, text)?.sub(&build(domain, b, names, text)?),
        Expr::Mul(a, b) => build(domain, a, names, text)?.mul(&build(domain, b, names, text)?),
        Expr::Pow(a, e) => build(domain, a, names, text)?.pow(*e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Element;

    #[test]
    fn natural_variable_order() {
        let d = Domain::integers();
        let parsed = parse_poly(&d, "x10 + x2 - x1").unwrap();
        assert_eq!(parsed.names, vec!["x1", "x2", "x10"]);
        let parsed = parse_poly(&d, "z - y + x").unwrap();
        assert_eq!(parsed.names, vec!["x", "y", "z"]);
    }

    #[test]
    fn t_is_a_constant_over_function_fields() {
        let g2 = Domain::poly_over_gf(2).unwrap();
        let parsed = parse_poly(&g2, "x + t*y").unwrap();
        assert_eq!(parsed.names, vec!["x", "y"]);
        assert_eq!(parsed.poly.coefficient(&[0, 1]), Some(&Element::Poly(vec![0, 1])));
        let parsed = parse_poly(&Domain::integers(), "x + t").unwrap();
        assert_eq!(parsed.names, vec!["t", "x"]);
    }

    #[test]
    fn errors_are_located() {
        let d = Domain::integers();
        let err = parse_poly(&d, "x + (y").unwrap_err();
        assert!(err.to_string().contains("column 7"), "{err}");
        let err = parse_poly_with_vars(&d, "x + w", &["x".to_string()]).unwrap_err();
        assert!(err.to_string().contains("column 5"), "{err}");
        assert!(parse_poly(&d, "3 + 4").is_err());
    }
}
