//! Finite fields GF(p^m) of order at most 128.
//!
//! Elements are encoded as integers 0..q whose base-p digits are the
//! coefficients of a polynomial over GF(p); arithmetic is modulo a fixed
//! irreducible polynomial from a hardcoded catalog (Conway polynomials), so
//! the representation is reproducible across runs.

use crate::error::{Error, Result};

/// Irreducible polynomial catalog for the non-prime orders we support.
/// Entry: (q, p, m, coefficients of x^0..x^{m-1}; leading coefficient 1 implicit).
const IRREDUCIBLE: &[(u64, u64, u32, &[u64])] = &[
    (4, 2, 2, &[1, 1]),           // x^2 + x + 1
    (8, 2, 3, &[1, 1, 0]),        // x^3 + x + 1
    (9, 3, 2, &[2, 2]),           // x^2 + 2x + 2
    (16, 2, 4, &[1, 1, 0, 0]),    // x^4 + x + 1
    (25, 5, 2, &[2, 4]),          // x^2 + 4x + 2
    (27, 3, 3, &[1, 2, 0]),       // x^3 + 2x + 1
    (32, 2, 5, &[1, 0, 1, 0, 0]), // x^5 + x^2 + 1
    (49, 7, 2, &[3, 6]),          // x^2 + 6x + 3
    (64, 2, 6, &[1, 1, 0, 1, 1, 0]), // x^6 + x^4 + x^3 + x + 1
    (81, 3, 4, &[2, 0, 0, 2]),    // x^4 + 2x^3 + 2
    (121, 11, 2, &[2, 7]),        // x^2 + 7x + 2
    (128, 2, 7, &[1, 1, 0, 0, 0, 0, 0]), // x^7 + x + 1
];

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// A finite field of order `q = p^m`, `q <= 128`, with precomputed tables.
#[derive(Debug, Clone)]
pub struct FiniteField {
    q: u64,
    p: u64,
    m: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl FiniteField {
    /// Builds GF(q). Errors unless q is a prime <= 128 or an order in the
    /// irreducible-polynomial catalog.
    pub fn new(q: u64) -> Result<Self> {
        if q > 128 || q < 2 {
            return Err(Error::UnsupportedFieldOrder(q));
        }
        let (p, m, poly): (u64, u32, Vec<u64>) = if is_prime(q) {
            (q, 1, vec![])
        } else if let Some(&(_, p, m, coeffs)) = IRREDUCIBLE.iter().find(|e| e.0 == q) {
            (p, m, coeffs.to_vec())
        } else {
            return Err(Error::UnsupportedFieldOrder(q));
        };

        let digits = |mut v: u64| -> Vec<u64> {
            let mut d = vec![0; m as usize];
            for slot in d.iter_mut() {
                *slot = v % p;
                v /= p;
            }
            d
        };
        let undigits = |d: &[u64]| -> u64 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum) as u8;

                // polynomial product, reduced by the catalog polynomial
                let mut prod = vec![0u64; 2 * m as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for i in (m as usize..prod.len()).rev() {
                    let c = prod[i];
                    if c != 0 {
                        prod[i] = 0;
                        for (j, &pc) in poly.iter().enumerate() {
                            let idx = i - m as usize + j;
                            prod[idx] = (prod[idx] + c * (p - pc % p)) % p;
                        }
                    }
                }
                mul[(a * q + b) as usize] = undigits(&prod[..m as usize]) as u8;
            }
        }
        Ok(Self { q, p, m, add, mul })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.m
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.add[(a * self.q + b) as usize] as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.mul[(a * self.q + b) as usize] as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (0..self.q).find(|&b| self.mul(a, b) == 1)
    }

    /// Full table audit of the field axioms. Used by tests and by callers
    /// that load untrusted orders.
    pub fn audit(&self) -> Result<()> {
        let q = self.q;
        let fail = |msg: String| Err(Error::BadDesignParams(msg));
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return fail(format!("identity axiom fails at {a}"));
            }
            if a != 0 && self.inv(a).is_none() {
                return fail(format!("{a} has no multiplicative inverse"));
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return fail(format!("commutativity fails at ({a},{b})"));
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                    {
                        return fail(format!("associativity fails at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Orders accepted by [`FiniteField::new`].
pub fn supported_orders() -> Vec<u64> {
    (2..=128)
        .filter(|&q| is_prime(q) || IRREDUCIBLE.iter().any(|e| e.0 == q))
        .collect()
}
