//! Concrete groups with dense element indices.

use std::collections::HashMap;

use super::field::Field;
use super::FiniteGroup;
use crate::arith::{checked_product, factorize, gcd, pow_mod};
use crate::error::{Error, Result};

/// Largest group this crate will enumerate.
pub const MAX_ORDER: u64 = 1 << 24;

pub(crate) fn check_size(what: &str, size: u64) -> Result<()> {
    if size > MAX_ORDER {
        return Err(Error::TooLarge {
            what: what.to_string(),
            size,
            cap: MAX_ORDER,
        });
    }
    Ok(())
}

/// `Z_n` under addition.
#[derive(Clone, Debug)]
pub struct Cyclic {
    n: usize,
}

impl Cyclic {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::construction(
                "cyclic group",
                "order must be positive",
            ));
        }
        check_size("cyclic group", n)?;
        Ok(Cyclic { n: n as usize })
    }
}

impl FiniteGroup for Cyclic {
    fn order(&self) -> usize {
        self.n
    }
    fn identity(&self) -> usize {
        0
    }
    fn multiply(&self, a: usize, b: usize) -> usize {
        (a + b) % self.n
    }
    fn label(&self, g: usize) -> String {
        g.to_string()
    }
    fn name(&self) -> String {
        format!("C{}", self.n)
    }
}

/// `Z_r1 x ... x Z_rk`, elements in mixed radix (first factor fastest).
#[derive(Clone, Debug)]
pub struct Abelian {
    rs: Vec<usize>,
    order: usize,
}

impl Abelian {
    pub fn new(rs: &[u64]) -> Result<Self> {
        if rs.contains(&0) {
            return Err(Error::construction(
                "abelian group",
                "factor orders must be positive",
            ));
        }
        let order = checked_product(rs.iter().copied(), "abelian group order")?;
        check_size("abelian group", order)?;
        Ok(Abelian {
            rs: rs.iter().map(|&r| r as usize).collect(),
            order: order as usize,
        })
    }

    fn coords(&self, mut g: usize) -> Vec<usize> {
        self.rs
            .iter()
            .map(|&r| {
                let c = g % r;
                g /= r;
                c
            })
            .collect()
    }
}

impl FiniteGroup for Abelian {
    fn order(&self) -> usize {
        self.order
    }
    fn identity(&self) -> usize {
        0
    }
    fn multiply(&self, mut a: usize, mut b: usize) -> usize {
        let mut out = 0;
        let mut stride = 1;
        for &r in &self.rs {
            out += ((a % r + b % r) % r) * stride;
            a /= r;
            b /= r;
            stride *= r;
        }
        out
    }
    fn label(&self, g: usize) -> String {
        let c: Vec<String> = self.coords(g).iter().map(|x| x.to_string()).collect();
        format!("({})", c.join(","))
    }
    fn name(&self) -> String {
        let f: Vec<String> = self.rs.iter().map(|r| format!("C{r}")).collect();
        f.join(" x ")
    }
}

/// The unit group `(Z/nZ)*`, elements in increasing residue order.
#[derive(Clone, Debug)]
pub struct UnitsMod {
    n: u64,
    units: Vec<u64>,
    index: Vec<u32>,
}

impl UnitsMod {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::construction(
                "unit group",
                "modulus must be positive",
            ));
        }
        check_size("unit group modulus", n)?;
        let units: Vec<u64> = (0..n).filter(|&x| gcd(x, n) == 1).collect();
        // gcd(0, 1) = 1, so the trivial ring has the single unit 0
        let mut index = vec![u32::MAX; n as usize];
        for (i, &u) in units.iter().enumerate() {
            index[u as usize] = i as u32;
        }
        Ok(UnitsMod { n, units, index })
    }

    /// Orders of cyclic factors whose product is this group.
    pub fn cyclic_factors(n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for (p, k) in factorize(n) {
            if p == 2 {
                match k {
                    1 => {}
                    2 => out.push(2),
                    _ => {
                        out.push(2);
                        out.push(1 << (k - 2));
                    }
                }
            } else {
                out.push(p.pow(k - 1) * (p - 1));
            }
        }
        out
    }

    pub fn residue(&self, g: usize) -> u64 {
        self.units[g]
    }
}

impl FiniteGroup for UnitsMod {
    fn order(&self) -> usize {
        self.units.len()
    }
    fn identity(&self) -> usize {
        self.index[(1 % self.n) as usize] as usize
    }
    fn multiply(&self, a: usize, b: usize) -> usize {
        let r = self.units[a] * self.units[b] % self.n;
        self.index[r as usize] as usize
    }
    fn label(&self, g: usize) -> String {
        self.units[g].to_string()
    }
    fn name(&self) -> String {
        format!("(Z/{}Z)*", self.n)
    }
}

/// `C_n x|_s C_m = <b, a | b^n = a^m = 1, a b a^-1 = b^s>`. The element
/// `b^i a^j` has index `i + n j`.
#[derive(Clone, Debug)]
pub struct Semidirect {
    n: usize,
    m: usize,
    s: u64,
    s_pow: Vec<usize>,
    name: String,
}

impl Semidirect {
    pub fn new(n: u64, m: u64, s: u64) -> Result<Self> {
        let what = format!("C{n} x|_{s} C{m}");
        if n == 0 || m == 0 {
            return Err(Error::construction(what, "n and m must be positive"));
        }
        if gcd(s % n, n) != 1 {
            return Err(Error::construction(what, "s must be a unit modulo n"));
        }
        if pow_mod(s, m, n) != 1 % n {
            return Err(Error::construction(what, "s^m must be 1 modulo n"));
        }
        check_size(
            "semidirect product",
            n.checked_mul(m).ok_or(Error::Overflow("group order"))?,
        )?;
        let s_pow = (0..m).map(|j| pow_mod(s, j, n) as usize).collect();
        Ok(Semidirect {
            n: n as usize,
            m: m as usize,
            s,
            s_pow,
            name: what,
        })
    }

    /// The dihedral group of order `2n`, as `C_n x|_{n-1} C_2`.
    pub fn dihedral(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::construction(format!("D{}", 2 * n), "needs n >= 2"));
        }
        let mut g = Semidirect::new(n, 2, n - 1)?;
        g.name = format!("D{}", 2 * n);
        Ok(g)
    }

    pub fn params(&self) -> (u64, u64, u64) {
        (self.n as u64, self.m as u64, self.s)
    }

    pub fn element(&self, i: usize, j: usize) -> usize {
        i % self.n + self.n * (j % self.m)
    }
}

impl FiniteGroup for Semidirect {
    fn order(&self) -> usize {
        self.n * self.m
    }
    fn identity(&self) -> usize {
        0
    }
    fn multiply(&self, x: usize, y: usize) -> usize {
        let (i, j) = (x % self.n, x / self.n);
        let (i0, j0) = (y % self.n, y / self.n);
        let bi = (i + i0 * self.s_pow[j]) % self.n;
        bi + self.n * ((j + j0) % self.m)
    }
    fn label(&self, g: usize) -> String {
        format!("b^{} a^{}", g % self.n, g / self.n)
    }
    fn name(&self) -> String {
        self.name.clone()
    }
}

/// `Q_4n = <a, b | a^2n = 1, a^n = b^2, b a b^-1 = a^-1>`. The element
/// `a^i b^j` (`j` in {0, 1}) has index `i + 2n j`.
#[derive(Clone, Debug)]
pub struct Quaternion {
    n: usize,
}

impl Quaternion {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::construction(format!("Q{}", 4 * n), "needs n >= 2"));
        }
        check_size("quaternion group", n.saturating_mul(4))?;
        Ok(Quaternion { n: n as usize })
    }

    pub fn n(&self) -> u64 {
        self.n as u64
    }

    pub fn a_pow(&self, i: usize) -> usize {
        i % (2 * self.n)
    }

    pub fn b(&self) -> usize {
        2 * self.n
    }
}

impl FiniteGroup for Quaternion {
    fn order(&self) -> usize {
        4 * self.n
    }
    fn identity(&self) -> usize {
        0
    }
    fn multiply(&self, x: usize, y: usize) -> usize {
        let m = 2 * self.n;
        let (i, j) = (x % m, x / m);
        let (k, l) = (y % m, y / m);
        // b^j a^k = a^{(-1)^j k} b^j, and b^2 = a^n
        let k = if j == 1 { (m - k) % m } else { k };
        let mut e = i + k;
        if j + l == 2 {
            e += self.n;
        }
        e % m + m * ((j + l) % 2)
    }
    fn label(&self, g: usize) -> String {
        let m = 2 * self.n;
        format!("a^{} b^{}", g % m, g / m)
    }
    fn name(&self) -> String {
        format!("Q{}", 4 * self.n)
    }
}

/// `PGL(2, q)`: invertible 2x2 matrices over GF(q) modulo scalars, each
/// class represented by the matrix whose first nonzero entry (row-major) is 1.
#[derive(Clone, Debug)]
pub struct Pgl2 {
    field: Field,
    q: u64,
    elements: Vec<[u16; 4]>,
    index: HashMap<[u16; 4], u32>,
}

impl Pgl2 {
    pub fn new(q: u64) -> Result<Self> {
        let field = Field::new(q).map_err(|e| match e {
            Error::Construction { reason, .. } => {
                Error::construction(format!("PGL(2,{q})"), reason)
            }
            other => other,
        })?;
        let n = field.order();
        let mut elements = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let m = [a, b, c, d];
                        let first = m.iter().copied().find(|&x| x != 0);
                        if first != Some(1) {
                            continue;
                        }
                        if field.sub(field.mul(a, d), field.mul(b, c)) != 0 {
                            elements.push(m.map(|x| x as u16));
                        }
                    }
                }
            }
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i as u32))
            .collect();
        Ok(Pgl2 {
            field,
            q,
            elements,
            index,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn matrix(&self, g: usize) -> [usize; 4] {
        self.elements[g].map(|x| x as usize)
    }

    /// Index of the class of an invertible matrix.
    pub fn class_of(&self, m: [usize; 4]) -> Option<usize> {
        let f = &self.field;
        let lead = m.iter().copied().find(|&x| x != 0)?;
        let s = f.inv(lead)?;
        let key = m.map(|x| f.mul(x, s) as u16);
        self.index.get(&key).map(|&i| i as usize)
    }
}

impl FiniteGroup for Pgl2 {
    fn order(&self) -> usize {
        self.elements.len()
    }
    fn identity(&self) -> usize {
        self.class_of([1, 0, 0, 1]).expect("identity is invertible")
    }
    fn multiply(&self, x: usize, y: usize) -> usize {
        let f = &self.field;
        let [a, b, c, d] = self.matrix(x);
        let [e, g, h, k] = self.matrix(y);
        let m = [
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        ];
        self.class_of(m)
            .expect("product of invertible matrices is invertible")
    }
    fn label(&self, g: usize) -> String {
        let [a, b, c, d] = self.matrix(g);
        format!("[{a} {b}; {c} {d}]")
    }
    fn name(&self) -> String {
        format!("PGL(2,{})", self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{check_axioms, power};

    #[test]
    fn orders() {
        assert_eq!(Quaternion::new(6).unwrap().order(), 24);
        assert_eq!(Semidirect::new(65, 4, 8).unwrap().order(), 260);
        assert_eq!(Pgl2::new(5).unwrap().order(), 120);
        assert_eq!(Pgl2::new(4).unwrap().order(), 60);
        assert_eq!(Pgl2::new(9).unwrap().order(), 720);
        assert_eq!(UnitsMod::new(91).unwrap().order(), 72);
        assert_eq!(Abelian::new(&[6, 12]).unwrap().order(), 72);
        assert_eq!(Semidirect::dihedral(6).unwrap().order(), 12);
    }

    #[test]
    fn construction_errors() {
        assert!(Semidirect::new(65, 4, 2).is_err());
        assert!(Semidirect::new(6, 2, 2).is_err());
        assert!(Quaternion::new(1).is_err());
        assert!(Pgl2::new(6).is_err());
        assert!(Cyclic::new(0).is_err());
        assert!(matches!(Cyclic::new(1 << 30), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn presentations_hold() {
        let q = Quaternion::new(6).unwrap();
        assert_eq!(power(&q, q.b(), 2), q.a_pow(6));
        let (a, b) = (q.a_pow(1), q.b());
        let binv = power(&q, b, 3);
        assert_eq!(q.multiply(q.multiply(b, a), binv), q.a_pow(11));

        let g = Semidirect::new(65, 4, 8).unwrap();
        let (b, a) = (g.element(1, 0), g.element(0, 1));
        let ainv = power(&g, a, 3);
        assert_eq!(g.multiply(g.multiply(a, b), ainv), g.element(8, 0));
        assert_eq!(power(&Cyclic::new(6).unwrap(), 1, 14), 2);
    }

    #[test]
    fn axioms() {
        let groups: Vec<Box<dyn FiniteGroup>> = vec![
            Box::new(Cyclic::new(12).unwrap()),
            Box::new(Abelian::new(&[2, 4, 3]).unwrap()),
            Box::new(UnitsMod::new(91).unwrap()),
            Box::new(Semidirect::new(7, 3, 2).unwrap()),
            Box::new(Semidirect::dihedral(5).unwrap()),
            Box::new(Quaternion::new(3).unwrap()),
            Box::new(Pgl2::new(4).unwrap()),
            Box::new(Pgl2::new(5).unwrap()),
            Box::new(Pgl2::new(9).unwrap()),
        ];
        for g in &groups {
            check_axioms(g.as_ref(), 7).unwrap_or_else(|e| panic!("{}: {e}", g.name()));
        }
    }

    #[test]
    fn units_factorization() {
        assert_eq!(UnitsMod::cyclic_factors(91), vec![6, 12]);
        assert_eq!(UnitsMod::cyclic_factors(32), vec![2, 8]);
        assert_eq!(UnitsMod::cyclic_factors(2), Vec::<u64>::new());
        assert_eq!(UnitsMod::new(1).unwrap().order(), 1);
    }
}
