//! Fraction-free (Bareiss) elimination over a Euclidean domain, with answers in `K`.

use crate::ring::{Domain, Element, FieldElement};

/// Row echelon form computed without leaving `R`.
///
/// Every entry after step `r` is an `(r+1)`-minor of the input, so the division
/// by the previous pivot is always exact.
pub struct Echelon {
    pub rows: Vec<Vec<Element>>,
    /// `(row, column)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

pub fn bareiss(dom: &Domain, mut m: Vec<Vec<Element>>, ncols: usize) -> Echelon {
    let nrows = m.len();
    let mut prev = dom.one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !dom.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let a = dom.mul(&m[r][c], &m[i][j]);
                let b = dom.mul(&m[i][c], &m[r][j]);
                m[i][j] = dom.exact_div(&dom.sub(&a, &b), &prev).expect("Bareiss division is exact");
            }
            m[i][c] = dom.zero();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    Echelon { rows: m, pivots }
}

pub fn rank(dom: &Domain, m: Vec<Vec<Element>>, ncols: usize) -> usize {
    bareiss(dom, m, ncols).pivots.len()
}

/// Finds coefficients `lambda` in `K` with `sum_i lambda_i * columns[i] = target`,
/// or `None` if `target` is outside the `K`-span. Free coefficients are set to 0.
pub fn solve_in_span(dom: &Domain, columns: &[Vec<Element>], target: &[Element]) -> Option<Vec<FieldElement>> {
    let k = columns.len();
    let m = target.len();
    let matrix: Vec<Vec<Element>> = (0..m)
        .map(|i| columns.iter().map(|col| col[i].clone()).chain(std::iter::once(target[i].clone())).collect())
        .collect();
    let ech = bareiss(dom, matrix, k + 1);
    if ech.pivots.iter().any(|&(_, c)| c == k) {
        return None;
    }
    let mut sol = vec![dom.frac_zero(); k];
    for &(r, c) in ech.pivots.iter().rev() {
        let row = &ech.rows[r];
        let mut rhs = dom.embed(&row[k]);
        for j in c + 1..k {
            if !dom.is_zero(&row[j]) {
                rhs = dom.frac_sub(&rhs, &dom.frac_mul(&dom.embed(&row[j]), &sol[j]));
            }
        }
        sol[c] = dom.frac_div(&rhs, &dom.embed(&row[c])).expect("pivot is nonzero");
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(xs: &[i64]) -> Vec<Element> {
        xs.iter().map(|&x| Element::int(x)).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let z = Domain::integers();
        let m = vec![col(&[1, 2, 3]), col(&[2, 4, 6]), col(&[1, 0, 1])];
        assert_eq!(rank(&z, m, 3), 2);
    }

    #[test]
    fn span_membership_and_solution() {
        let z = Domain::integers();
        let cols = vec![col(&[2, 0]), col(&[1, 3])];
        let sol = solve_in_span(&z, &cols, &col(&[5, 3])).unwrap();
        // 2*l0 + l1 = 5, 3*l1 = 3
        assert_eq!(sol, vec![z.embed(&Element::int(2)), z.embed(&Element::int(1))]);
        let cols = vec![col(&[1, 2])];
        assert!(solve_in_span(&z, &cols, &col(&[1, 3])).is_none());
        let sol = solve_in_span(&z, &[col(&[3, 6])], &col(&[1, 2])).unwrap();
        assert_eq!(sol, vec![z.parse_frac("1/3").unwrap()]);
    }

    #[test]
    fn zero_target_always_in_span() {
        let z = Domain::integers();
        assert_eq!(solve_in_span(&z, &[], &col(&[0, 0])), Some(vec![]));
        assert_eq!(solve_in_span(&z, &[], &col(&[0, 1])), None);
    }
}
