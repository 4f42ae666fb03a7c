//! Number-theoretic primitives shared by the structural formulas.
//!
//! Everything here works on `u64` with checked arithmetic; the groups we
//! handle are small enough that 64 bits never become the bottleneck, but an
//! overflow is reported instead of wrapping.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

pub fn checked_product<I: IntoIterator<Item = u64>>(it: I, what: &'static str) -> Result<u64> {
    it.into_iter()
        .try_fold(1u64, |acc, x| acc.checked_mul(x))
        .ok_or(Error::Overflow(what))
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing order of the prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Exponent of 2 in `n` (`n > 0`).
pub fn two_adic_valuation(n: u64) -> u32 {
    debug_assert!(n > 0);
    n.trailing_zeros()
}

pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("euler_phi(0) is undefined"));
    }
    Ok(factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1)))
}

/// Multiplicative order of `t` modulo `d`.
pub fn mult_order(t: u64, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::domain("mult_order: modulus must be positive"));
    }
    if t == 0 {
        return Err(Error::domain("mult_order: t must be positive"));
    }
    if d == 1 {
        return Ok(1);
    }
    if gcd(t, d) != 1 {
        return Err(Error::domain(format!(
            "mult_order: gcd({t}, {d}) != 1, so {t} is not a unit mod {d}"
        )));
    }
    // The order divides phi(d); strip prime factors while t^(k/p) stays 1.
    let phi = euler_phi(d)?;
    let mut k = phi;
    for (p, _) in factorize(phi) {
        while k % p == 0 && pow_mod(t, k / p, d) == 1 {
            k /= p;
        }
    }
    Ok(k)
}

/// Split `n = nu * omega` where `omega` is the largest divisor of `n`
/// coprime to `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NuOmegaSplit {
    pub nu: u64,
    pub omega: u64,
}

pub fn nu_omega_split(n: u64, t: u64) -> Result<NuOmegaSplit> {
    if n == 0 || t == 0 {
        return Err(Error::domain("nu_omega_split needs n >= 1 and t >= 1"));
    }
    let mut omega = n;
    let mut nu = 1u64;
    loop {
        let g = gcd(omega, t);
        if g == 1 {
            break;
        }
        omega /= g;
        nu *= g;
    }
    Ok(NuOmegaSplit { nu, omega })
}

/// A non-increasing sequence of positive integers, compared up to trailing
/// ones. Stored with trailing ones stripped; the all-ones sequence is `(1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Sequence(Vec<u64>);

impl Sequence {
    pub fn new(terms: impl Into<Vec<u64>>) -> Result<Self> {
        let mut terms = terms.into();
        if terms.contains(&0) {
            return Err(Error::domain("sequence terms must be positive"));
        }
        if terms.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!(
                "sequence {terms:?} is not non-increasing"
            )));
        }
        while terms.len() > 1 && terms.last() == Some(&1) {
            terms.pop();
        }
        if terms.is_empty() {
            terms.push(1);
        }
        Ok(Sequence(terms))
    }

    pub fn one() -> Self {
        Sequence(vec![1])
    }

    pub fn terms(&self) -> &[u64] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    /// Number of terms after stripping trailing ones; zero for `(1)`.
    pub fn depth(&self) -> usize {
        if self.is_one() {
            0
        } else {
            self.0.len()
        }
    }

    pub fn term_product(&self) -> Result<u64> {
        checked_product(self.0.iter().copied(), "sequence product")
    }

    /// Coordinatewise product, padding the shorter sequence with ones.
    pub fn product(&self, other: &Sequence) -> Result<Sequence> {
        let len = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.0.get(i).copied().unwrap_or(1);
            let b = other.0.get(i).copied().unwrap_or(1);
            out.push(
                a.checked_mul(b)
                    .ok_or(Error::Overflow("sequence product"))?,
            );
        }
        if out.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invariant(format!(
                "product of {self} and {other} is not non-increasing"
            )));
        }
        Sequence::new(out)
    }
}

impl TryFrom<Vec<u64>> for Sequence {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Sequence::new(v)
    }
}

impl From<Sequence> for Vec<u64> {
    fn from(s: Sequence) -> Self {
        s.0
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence{self}")
    }
}

/// The iterated gcd of `n` relative to `t`.
pub fn iterated_gcd(n: u64, t: u64) -> Result<Sequence> {
    if n == 0 || t == 0 {
        return Err(Error::domain("iterated_gcd needs n >= 1 and t >= 1"));
    }
    let mut terms = Vec::new();
    let mut rest = n;
    loop {
        let g = gcd(t, rest);
        if g == 1 {
            break;
        }
        terms.push(g);
        rest /= g;
    }
    Sequence::new(terms)
}

pub fn sequence_product(u: &Sequence, v: &Sequence) -> Result<Sequence> {
    u.product(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn phi_by_loop(n: u64) -> u64 {
        (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64
    }

    fn order_by_loop(t: u64, d: u64) -> u64 {
        let mut x = t % d;
        let mut k = 1;
        while x != 1 % d {
            x = x * (t % d) % d;
            k += 1;
        }
        k
    }

    #[test]
    fn euler_phi_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(phi_by_loop(12), 4);
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert_eq!(phi_by_loop(91), 72);
        assert_eq!(euler_phi(91).unwrap(), 72);
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(14, 1).unwrap(), 1);
        assert_eq!(order_by_loop(14, 3), 2);
        assert_eq!(mult_order(14, 3).unwrap(), 2);
        assert_eq!(order_by_loop(2, 5), 4);
        assert_eq!(mult_order(2, 5).unwrap(), 4);
        assert!(mult_order(2, 4).is_err());
        assert!(mult_order(0, 5).is_err());
    }

    #[test]
    fn split_examples() {
        assert_eq!(
            nu_omega_split(6, 14).unwrap(),
            NuOmegaSplit { nu: 2, omega: 3 }
        );
        assert_eq!(
            nu_omega_split(12, 14).unwrap(),
            NuOmegaSplit { nu: 4, omega: 3 }
        );
        assert_eq!(
            nu_omega_split(7, 3).unwrap(),
            NuOmegaSplit { nu: 1, omega: 7 }
        );
        assert!(nu_omega_split(7, 0).is_err());
    }

    #[test]
    fn iterated_gcd_examples() {
        assert_eq!(iterated_gcd(2, 14).unwrap().terms(), &[2]);
        assert_eq!(iterated_gcd(4, 14).unwrap().terms(), &[2, 2]);
        // by hand: gcd(4,8)=4, gcd(4,2)=2, gcd(4,1)=1
        assert_eq!(iterated_gcd(8, 4).unwrap().terms(), &[4, 2]);
        assert!(iterated_gcd(9, 2).unwrap().is_one());
    }

    #[test]
    fn sequence_product_examples() {
        let s = |v: &[u64]| Sequence::new(v.to_vec()).unwrap();
        assert_eq!(s(&[2]).product(&s(&[2, 2])).unwrap(), s(&[4, 2]));
        assert_eq!(s(&[1]).product(&s(&[3])).unwrap(), s(&[3]));
        assert_eq!(s(&[2, 2]).product(&s(&[2, 2])).unwrap(), s(&[4, 4]));
        assert!(Sequence::new(vec![1, 3]).is_err());
        let longer = s(&[2, 2]).product(&s(&[4, 4, 4])).unwrap();
        assert_eq!(longer, s(&[8, 8, 4]));
        assert_eq!(s(&[2, 2, 2]).product(&s(&[5])).unwrap(), s(&[10, 2, 2]));
        assert!(s(&[1 << 40]).product(&s(&[1 << 40])).is_err());
    }

    #[test]
    fn trailing_ones_are_ignored() {
        assert_eq!(
            Sequence::new(vec![4, 2, 1, 1]).unwrap(),
            Sequence::new(vec![4, 2]).unwrap()
        );
        assert_eq!(Sequence::new(vec![1, 1]).unwrap(), Sequence::one());
        assert_eq!(Sequence::new(Vec::new()).unwrap(), Sequence::one());
    }

    #[test]
    fn divisors_and_factorize() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_prime(97) && !is_prime(91) && !is_prime(1));
    }

    proptest! {
        #[test]
        fn gcd_sequence_multiplies_to_nu(n in 1u64..5000, t in 1u64..200) {
            let seq = iterated_gcd(n, t).unwrap();
            let split = nu_omega_split(n, t).unwrap();
            prop_assert_eq!(seq.term_product().unwrap(), split.nu);
            prop_assert_eq!(split.nu * split.omega, n);
            prop_assert_eq!(gcd(split.omega, t), 1);
            prop_assert_eq!(iterated_gcd(split.nu, t).unwrap(), seq);
        }

        #[test]
        fn order_divides_phi(t in 1u64..500, d in 1u64..500) {
            prop_assume!(gcd(t, d) == 1);
            let k = mult_order(t, d).unwrap();
            prop_assert_eq!(euler_phi(d).unwrap() % k, 0);
            prop_assert_eq!(k, order_by_loop(t, d));
        }

        #[test]
        fn product_is_a_commutative_monoid(a in 1u64..400, b in 1u64..400, c in 1u64..400, t in 2u64..30) {
            let (x, y, z) = (iterated_gcd(a, t).unwrap(), iterated_gcd(b, t).unwrap(), iterated_gcd(c, t).unwrap());
            prop_assert_eq!(x.product(&y).unwrap(), y.product(&x).unwrap());
            prop_assert_eq!(
                x.product(&y).unwrap().product(&z).unwrap(),
                x.product(&y.product(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(x.product(&Sequence::one()).unwrap(), x);
        }
    }
}
