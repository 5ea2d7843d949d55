//! Finite fields `F_q`, `q = p^k`.
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the code
//! are the coefficients (low to high) of a polynomial in the generator `a`,
//! reduced modulo a fixed monic irreducible of degree `k` over `F_p`. For prime
//! `q` the code is simply the residue.
//!
//! The modulus is the lexicographically least monic irreducible of degree `k`
//! (comparing coefficient vectors from the top down), so a field is fully
//! determined by `q`.

use std::fmt;

use crate::ring::RingError;

/// Largest supported field order. Keeps the log/exp tables small.
pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Clone)]
pub struct GaloisField {
    q: u32,
    p: u32,
    k: u32,
    /// Monic irreducible over `F_p`, coefficients low to high, length `k + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` and `log[g^i] = i` for a primitive element `g`; empty for prime `q`.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for GaloisField {}

/// Returns `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl GaloisField {
    pub fn new(q: u32) -> Result<Self, RingError> {
        let (p, k) = prime_power(q).ok_or(RingError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(RingError::FieldTooLarge(q));
        }
        if k == 1 {
            return Ok(Self { q, p, k, modulus: vec![0, 1], exp: Vec::new(), log: Vec::new() });
        }
        let modulus = least_irreducible(p, k);
        let mut field = Self { q, p, k, modulus, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime(&self) -> bool {
        self.k == 1
    }

    fn digits(&self, mut code: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            out.push(code % self.p);
            code /= self.p;
        }
        out
    }

    fn pack_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let idx = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[idx as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.k == 1 {
            return Some(pow_mod(a as u64, (self.p - 2) as u64, self.p as u64) as u32);
        }
        let idx = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        Some(self.exp[idx as usize])
    }

    /// Image of an integer under `Z -> F_q`.
    pub fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Multiplication of digit vectors modulo the field modulus; only used to build tables.
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let k = self.k as usize;
        let mut prod = vec![0u32; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for top in (k..2 * k).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus.iter().enumerate() {
                let idx = top - k + j;
                prod[idx] = (prod[idx] + self.p * self.p - c * m % self.p) % self.p;
            }
        }
        self.pack_digits(&prod[..k])
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        for g in 2..self.q {
            let mut exp = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            let mut primitive = true;
            for i in 0..order {
                if i > 0 && x == 1 {
                    primitive = false;
                    break;
                }
                exp.push(x);
                x = self.mul_slow(x, g);
            }
            if primitive && x == 1 {
                let mut log = vec![0u32; self.q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Reduce `a` modulo `b` over `F_p`, both low-to-high, `b` monic.
fn rem_prime(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p * p - c * bj % p) % p;
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn monic_of_degree(p: u32, d: u32, index: u32) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(d as usize + 1);
    let mut n = index;
    for _ in 0..d {
        coeffs.push(n % p);
        n /= p;
    }
    coeffs.push(1);
    coeffs
}

fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    // Lex order from the top coefficient down: iterate the high digits slowest.
    let count = p.pow(k);
    let mut candidates: Vec<Vec<u32>> = (0..count).map(|i| monic_of_degree(p, k, i)).collect();
    candidates.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    candidates
        .into_iter()
        .find(|f| {
            f[0] != 0
                && (1..=k / 2).all(|d| {
                    (0..p.pow(d)).all(|i| !rem_prime(f, &monic_of_degree(p, d, i), p).is_empty())
                })
        })
        .expect("irreducible polynomials exist in every degree")
}
