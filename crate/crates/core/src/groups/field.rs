//! Small finite fields by lookup table.
//!
//! Prime fields use residues. The prime powers 4, 8, 9, 16, 25 and 27 use
//! fixed irreducible polynomials; an element is the integer whose base-p
//! digits are its polynomial coefficients, lowest degree first.

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Field {
    q: usize,
    p: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// Monic irreducible polynomial for GF(p^k), coefficients of x^0..x^{k-1}.
fn modulus(q: u64) -> Option<(u64, Vec<u64>)> {
    Some(match q {
        4 => (2, vec![1, 1]),        // x^2 + x + 1
        8 => (2, vec![1, 1, 0]),     // x^3 + x + 1
        16 => (2, vec![1, 1, 0, 0]), // x^4 + x + 1
        9 => (3, vec![1, 0]),        // x^2 + 1
        25 => (5, vec![2, 0]),       // x^2 + 2
        27 => (3, vec![1, 2, 0]),    // x^3 + 2x + 1
        _ => return None,
    })
}

pub const SUPPORTED_PRIME_POWERS: [u64; 6] = [4, 8, 9, 16, 25, 27];

/// Fields larger than this are rejected; PGL(2, q) has q^3 - q elements.
pub const MAX_FIELD: u64 = 256;

impl Field {
    pub fn new(q: u64) -> Result<Self> {
        let bad = |why: &str| Error::construction(format!("GF({q})"), why);
        if q < 2 {
            return Err(bad("field order must be at least 2"));
        }
        if q > MAX_FIELD {
            return Err(bad("field order above the supported table size"));
        }
        if is_prime(q) {
            let n = q as usize;
            return Ok(Field::from_ops(n, n, |a, b| (a + b) % n, |a, b| a * b % n));
        }
        let (p, poly) = modulus(q).ok_or_else(|| {
            if factorize(q).len() == 1 {
                bad("prime power without a built-in irreducible polynomial")
            } else {
                bad("not a prime power")
            }
        })?;
        let (p, k) = (p as usize, poly.len());
        let digits = |mut a: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = a % p;
                    a /= p;
                    d
                })
                .collect()
        };
        let pack = |v: &[usize]| v.iter().rev().fold(0usize, |acc, &d| acc * p + d);
        let add = |a: usize, b: usize| {
            let (x, y) = (digits(a), digits(b));
            pack(
                &x.iter()
                    .zip(&y)
                    .map(|(u, v)| (u + v) % p)
                    .collect::<Vec<_>>(),
            )
        };
        let mul = |a: usize, b: usize| {
            let (x, y) = (digits(a), digits(b));
            let mut prod = vec![0usize; 2 * k - 1];
            for (i, u) in x.iter().enumerate() {
                for (j, v) in y.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + u * v) % p;
                }
            }
            // reduce with x^k = -(poly)
            for deg in (k..prod.len()).rev() {
                let c = prod[deg];
                if c == 0 {
                    continue;
                }
                prod[deg] = 0;
                for (i, &m) in poly.iter().enumerate() {
                    let sub = c * m as usize % p;
                    prod[deg - k + i] = (prod[deg - k + i] + p - sub) % p;
                }
            }
            pack(&prod[..k])
        };
        Ok(Field::from_ops(q as usize, p, add, mul))
    }

    fn from_ops(
        q: usize,
        p: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut f = Field {
            q,
            p,
            add: vec![0; q * q],
            mul: vec![0; q * q],
            neg: vec![0; q],
            inv: vec![0; q],
        };
        for a in 0..q {
            for b in 0..q {
                f.add[a * q + b] = add(a, b) as u16;
                f.mul[a * q + b] = mul(a, b) as u16;
            }
        }
        for a in 0..q {
            f.neg[a] = (0..q).find(|&b| f.add[a * q + b] == 0).unwrap() as u16;
            if a != 0 {
                f.inv[a] = (1..q).find(|&b| f.mul[a * q + b] == 1).unwrap_or(0) as u16;
            }
        }
        f
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b] as usize)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.inv[a] as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field(q: u64) {
        let f = Field::new(q).unwrap();
        let n = f.order();
        for a in 0..n {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "GF({q}) inverse of {a}");
            }
            for b in 0..n {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..n {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        // the multiplicative group is cyclic of order q - 1
        let has_generator = (1..n).any(|g| {
            let mut x = 1;
            (1..n).all(|i| {
                x = f.mul(x, g);
                x != 1 || i == n - 1
            })
        });
        assert!(has_generator, "GF({q})* not cyclic");
    }

    #[test]
    fn tables_are_fields() {
        for q in [2, 3, 5, 7, 11, 4, 8, 9, 16, 25, 27] {
            check_field(q);
        }
    }

    #[test]
    fn rejects_unsupported() {
        assert!(Field::new(6).is_err());
        assert!(Field::new(32).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(49).is_err());
    }
}
