//! Dense univariate polynomials over `F_q`, the ring `F_q[t]`.

use crate::ring::gf::GaloisField;

/// Little-endian coefficient codes; empty iff zero, last entry nonzero otherwise.
pub type Coeffs = Vec<u32>;

pub fn trim(mut a: Coeffs) -> Coeffs {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add(f: &GaloisField, a: &[u32], b: &[u32]) -> Coeffs {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn neg(f: &GaloisField, a: &[u32]) -> Coeffs {
    a.iter().map(|&c| f.neg(c)).collect()
}

pub fn sub(f: &GaloisField, a: &[u32], b: &[u32]) -> Coeffs {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn mul(f: &GaloisField, a: &[u32], b: &[u32]) -> Coeffs {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if f.is_prime() {
        // accumulate unreduced products, reducing only when the sum could overflow
        let p = f.characteristic() as u64;
        let limit = u64::MAX - (p - 1) * (p - 1);
        let mut acc = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let slot = &mut acc[i + j];
                if *slot > limit {
                    *slot %= p;
                }
                *slot += x as u64 * y as u64;
            }
        }
        return trim(acc.into_iter().map(|v| (v % p) as u32).collect());
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

pub fn scale(f: &GaloisField, a: &[u32], c: u32) -> Coeffs {
    trim(a.iter().map(|&x| f.mul(x, c)).collect())
}

/// Euclidean division; `b` must be nonzero.
pub fn divrem(f: &GaloisField, a: &[u32], b: &[u32]) -> (Coeffs, Coeffs) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("leading coefficient is nonzero");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quot = vec![0u32; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = f.mul(r[top], lead_inv);
        let shift = top - db;
        quot[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = f.sub(r[shift + j], f.mul(c, bj));
        }
        r = trim(r);
    }
    (trim(quot), r)
}

/// Monic gcd (zero iff both inputs are zero).
pub fn gcd(f: &GaloisField, a: &[u32], b: &[u32]) -> Coeffs {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn monic(f: &GaloisField, a: &[u32]) -> Coeffs {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => scale(f, a, f.inv(lead).unwrap()),
    }
}

pub fn rem(f: &GaloisField, a: &[u32], m: &[u32]) -> Coeffs {
    divrem(f, a, m).1
}

/// `base^(q^e) mod m` by repeated `q`-th powering.
fn frobenius_iter(f: &GaloisField, base: &[u32], e: u32, m: &[u32]) -> Coeffs {
    let mut x = rem(f, base, m);
    for _ in 0..e {
        x = pow_mod(f, &x, f.order() as u64, m);
    }
    x
}

pub fn pow_mod(f: &GaloisField, base: &[u32], mut exp: u64, m: &[u32]) -> Coeffs {
    let mut acc = rem(f, &[1], m);
    let mut b = rem(f, base, m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        exp >>= 1;
    }
    acc
}

/// Ben-Or irreducibility test: `g` of degree `d >= 1` is irreducible iff
/// `gcd(g, t^(q^i) - t) = 1` for every `1 <= i <= d/2`.
pub fn is_irreducible(f: &GaloisField, g: &[u32]) -> bool {
    let d = match degree(g) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    let t = [0, 1];
    let mut power = rem(f, &t, g);
    for _ in 1..=d / 2 {
        power = frobenius_iter(f, &power, 1, g);
        let diff = sub(f, &power, &t);
        if gcd(f, g, &diff).len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf3_product_example() {
        let f = GaloisField::new(3).unwrap();
        // (t+1)(t+2) = t^2 + 2
        assert_eq!(mul(&f, &[1, 1], &[2, 1]), vec![2, 0, 1]);
    }

    #[test]
    fn char_two_cancellation() {
        let f = GaloisField::new(2).unwrap();
        assert_eq!(add(&f, &[1, 1], &[0, 1]), vec![1]);
        assert_eq!(add(&f, &[0, 1], &[0, 1]), Vec::<u32>::new());
    }

    #[test]
    fn division_identity() {
        let f = GaloisField::new(5).unwrap();
        let a = vec![3, 0, 4, 1, 2];
        let b = vec![1, 2, 3];
        let (qt, r) = divrem(&f, &a, &b);
        assert!(r.len() < b.len());
        assert_eq!(add(&f, &mul(&f, &qt, &b), &r), a);
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        let f = GaloisField::new(2).unwrap();
        // all polynomials of degree 1..=6 over F_2
        for code in 2u32..128 {
            let g: Vec<u32> = trim((0..7).map(|i| (code >> i) & 1).collect());
            let d = degree(&g).unwrap();
            let by_trial = (2u32..code).all(|h| {
                let h: Vec<u32> = trim((0..7).map(|i| (h >> i) & 1).collect());
                let dh = degree(&h).unwrap();
                dh == 0 || dh >= d || !rem(&f, &g, &h).is_empty()
            });
            assert_eq!(is_irreducible(&f, &g), by_trial, "{g:?}");
        }
    }
}
