//! Finite fields GF(p^a) of order at most 64.
//!
//! Elements are stored by index: the residue polynomial of degree below `a`
//! is read as a base-`p` number, constant coefficient least significant.
//! That index is the canonical ordering used to lay out items and pools.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 64;

/// Conway polynomials for the supported non-prime orders, coefficients
/// listed from the constant term up to the (monic) leading term.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A prime power `q = p^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u32,
    a: u32,
    q: u32,
}

impl PrimePower {
    pub fn new(p: u32, a: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::UnsupportedField(p as u64));
        }
        if a == 0 {
            return Err(Error::domain("prime power exponent must be at least 1"));
        }
        let q = p.checked_pow(a).ok_or(Error::UnsupportedField(u64::MAX))?;
        Ok(Self { p, a, q })
    }

    /// Factors `q` as `p^a`, failing if it is not a prime power.
    pub fn from_order(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::UnsupportedField(q as u64));
        }
        let p = (2..=q).find(|&d| q.is_multiple_of(d)).unwrap();
        let mut rest = q;
        let mut a = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            a += 1;
        }
        if rest != 1 {
            return Err(Error::UnsupportedField(q as u64));
        }
        Self::new(p, a)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.a)
        }
    }
}

/// True if `q` is an order [`Field::new`] accepts.
pub fn is_supported_order(q: u32) -> bool {
    match PrimePower::from_order(q) {
        Ok(pp) if q <= MAX_ORDER => pp.a == 1 || conway_modulus(pp.p, pp.a).is_some(),
        _ => false,
    }
}

fn conway_modulus(p: u32, a: u32) -> Option<&'static [u32]> {
    CONWAY
        .iter()
        .find(|(cp, ca, _)| *cp == p && *ca == a)
        .map(|(_, _, coeffs)| *coeffs)
}

/// A field element, identified by its canonical index in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// GF(p^a) with lookup tables for addition and multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    order: PrimePower,
    modulus: Vec<u32>,
    add_table: Vec<u8>,
    mul_table: Vec<u8>,
}

impl Field {
    /// Builds the field of the given order using the built-in Conway
    /// polynomial (or `x` for prime fields).
    pub fn new(order: PrimePower) -> Result<Self> {
        if order.q > MAX_ORDER {
            return Err(Error::UnsupportedField(order.q as u64));
        }
        let modulus = if order.a == 1 {
            vec![0, 1]
        } else {
            conway_modulus(order.p, order.a)
                .ok_or(Error::UnsupportedField(order.q as u64))?
                .to_vec()
        };
        Ok(Self::build(order, modulus))
    }

    /// Shorthand for `Field::new(PrimePower::from_order(q)?)`.
    pub fn with_order(q: u32) -> Result<Self> {
        Self::new(PrimePower::from_order(q).map_err(|_| Error::UnsupportedField(q as u64))?)
    }

    /// Builds the quotient ring `F_p[x] / modulus` without checking that the
    /// modulus is irreducible. Use [`verify_field`] to check the result.
    pub fn with_modulus(order: PrimePower, modulus: Vec<u32>) -> Result<Self> {
        if order.q > MAX_ORDER {
            return Err(Error::UnsupportedField(order.q as u64));
        }
        if modulus.len() != order.a as usize + 1 || *modulus.last().unwrap() != 1 {
            return Err(Error::domain(format!(
                "modulus must be monic of degree {}",
                order.a
            )));
        }
        if modulus.iter().any(|&c| c >= order.p) {
            return Err(Error::domain("modulus coefficients must lie in F_p"));
        }
        Ok(Self::build(order, modulus))
    }

    fn build(order: PrimePower, modulus: Vec<u32>) -> Self {
        let q = order.q as usize;
        let mut field = Self {
            order,
            modulus,
            add_table: vec![0; q * q],
            mul_table: vec![0; q * q],
        };
        for x in 0..order.q {
            for y in 0..order.q {
                let (s, m) = if order.a == 1 {
                    ((x + y) % order.p, (x * y) % order.p)
                } else {
                    (field.add_digits(x, y), field.mul_polynomials(x, y))
                };
                field.add_table[x as usize * q + y as usize] = s as u8;
                field.mul_table[x as usize * q + y as usize] = m as u8;
            }
        }
        field
    }

    pub fn order(&self) -> PrimePower {
        self.order
    }

    pub fn q(&self) -> u32 {
        self.order.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elem(&self, index: u32) -> Result<FieldElem> {
        if index < self.order.q {
            Ok(FieldElem(index))
        } else {
            Err(Error::domain(format!(
                "element index {index} out of range for GF({})",
                self.order.q
            )))
        }
    }

    /// All elements in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order.q).map(FieldElem)
    }

    /// Base-`p` digits of the element's index, constant coefficient first.
    pub fn coefficients(&self, x: FieldElem) -> Vec<u32> {
        let p = self.order.p;
        let mut v = x.0;
        (0..self.order.a)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    /// Inverse of [`coefficients`](Self::coefficients): evaluates the
    /// coefficient vector at `p` over the integers.
    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() > self.order.a as usize || coeffs.iter().any(|&c| c >= self.order.p) {
            return Err(Error::domain(
                "coefficient vector does not describe a field element",
            ));
        }
        let index = coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.order.p + c);
        Ok(FieldElem(index))
    }

    fn check(&self, x: FieldElem) -> Result<()> {
        self.elem(x.0).map(|_| ())
    }

    pub fn add(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(FieldElem(self.add_table[self.slot(x, y)] as u32))
    }

    pub fn mul(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(FieldElem(self.mul_table[self.slot(x, y)] as u32))
    }

    pub fn neg(&self, x: FieldElem) -> Result<FieldElem> {
        self.check(x)?;
        let p = self.order.p;
        let digits: Vec<u32> = self.coefficients(x).into_iter().map(|d| (p - d) % p).collect();
        self.from_coefficients(&digits)
    }

    pub fn sub(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem> {
        self.add(x, self.neg(y)?)
    }

    /// Multiplicative inverse; `None` for zero (or a zero divisor when the
    /// modulus is reducible).
    pub fn inv(&self, x: FieldElem) -> Result<Option<FieldElem>> {
        self.check(x)?;
        Ok(self.elements().find(|&y| self.mul_table[self.slot(x, y)] == 1))
    }

    fn slot(&self, x: FieldElem, y: FieldElem) -> usize {
        x.0 as usize * self.order.q as usize + y.0 as usize
    }

    fn add_digits(&self, x: u32, y: u32) -> u32 {
        let p = self.order.p;
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.order.a {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        out
    }

    /// Multiplication by schoolbook polynomial product followed by reduction
    /// modulo the field modulus. Works for every `a`, including the prime
    /// case where the modulus is `x`.
    pub fn mul_polynomials(&self, x: u32, y: u32) -> u32 {
        let p = self.order.p;
        let a = self.order.a as usize;
        let xs = self.coefficients(FieldElem(x));
        let ys = self.coefficients(FieldElem(y));
        let mut prod = vec![0u32; 2 * a - 1];
        for (i, &xi) in xs.iter().enumerate() {
            for (j, &yj) in ys.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % p;
            }
        }
        let rem = poly_rem(&prod, &self.modulus, p);
        rem.iter().take(a).rev().fold(0u32, |acc, &c| acc * p + c)
    }
}

/// Remainder of `num` modulo the monic polynomial `den` over F_p.
/// Result has length `den.len() - 1`.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let deg = den.len() - 1;
    let mut r = num.to_vec();
    if r.len() < den.len() {
        r.resize(deg, 0);
        return r;
    }
    for top in (deg..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (k, &d) in den.iter().enumerate() {
            let idx = top - deg + k;
            r[idx] = (r[idx] + p - (c * d) % p) % p;
        }
    }
    r.truncate(deg);
    r
}

/// Brute-force irreducibility test: a monic polynomial of degree `a` over
/// F_p is irreducible iff no monic polynomial of degree `1..=a/2` divides it.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let a = modulus.len() - 1;
    for d in 1..=a / 2 {
        // Enumerate monic polynomials of degree d by their lower coefficients.
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            if poly_rem(modulus, &cand, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Outcome of an exhaustive check of the field axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldReport {
    pub order: PrimePower,
    pub irreducible: bool,
    pub additive_group: bool,
    pub multiplicative_group: bool,
    pub distributive: bool,
    pub failures: Vec<String>,
}

impl FieldReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks irreducibility of the modulus and all field axioms by exhaustion.
pub fn verify_field(f: &Field) -> FieldReport {
    let q = f.q();
    let mut failures = Vec::new();
    let p = f.order.p;
    let irreducible = f.modulus.len() == 2 || is_irreducible(&f.modulus, p);
    if !irreducible {
        failures.push(format!("modulus {:?} is reducible over F_{p}", f.modulus));
    }
    let add = |x: u32, y: u32| f.add_table[(x * q + y) as usize] as u32;
    let mul = |x: u32, y: u32| f.mul_table[(x * q + y) as usize] as u32;

    let mut additive_group = true;
    let mut multiplicative_group = true;
    let mut distributive = true;
    for x in 0..q {
        if add(x, 0) != x {
            additive_group = false;
            failures.push(format!("{x} + 0 != {x}"));
        }
        if !(0..q).any(|y| add(x, y) == 0) {
            additive_group = false;
            failures.push(format!("{x} has no additive inverse"));
        }
        if mul(x, 1) != x {
            multiplicative_group = false;
            failures.push(format!("{x} * 1 != {x}"));
        }
        if x != 0 && !(1..q).any(|y| mul(x, y) == 1) {
            multiplicative_group = false;
            failures.push(format!("{x} has no multiplicative inverse"));
        }
        for y in 0..q {
            if add(x, y) != add(y, x) {
                additive_group = false;
                failures.push(format!("{x} + {y} is not commutative"));
            }
            if mul(x, y) != mul(y, x) {
                multiplicative_group = false;
                failures.push(format!("{x} * {y} is not commutative"));
            }
            for z in 0..q {
                if add(add(x, y), z) != add(x, add(y, z)) {
                    additive_group = false;
                    failures.push(format!("addition not associative at ({x}, {y}, {z})"));
                }
                if mul(mul(x, y), z) != mul(x, mul(y, z)) {
                    multiplicative_group = false;
                    failures.push(format!("multiplication not associative at ({x}, {y}, {z})"));
                }
                if mul(x, add(y, z)) != add(mul(x, y), mul(x, z)) {
                    distributive = false;
                    failures.push(format!("distributivity fails at ({x}, {y}, {z})"));
                }
            }
        }
    }
    FieldReport {
        order: f.order,
        irreducible,
        additive_group,
        multiplicative_group,
        distributive,
        failures,
    }
}
