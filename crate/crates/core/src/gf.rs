//! Arithmetic in a prime field F_q and its extensions F_{q^m}.
//!
//! An element is a coefficient vector over F_q in the basis 1, w, ..., w^(m-1),
//! where w is the class of x modulo the user-supplied modulus. The vector is
//! packed into a `u32` as base-q digits (digit i is the coefficient of w^i), so
//! the constants 0..q of the prime field keep their own value as code and embed
//! into every extension without conversion.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Shared handle to an immutable field description.
pub type Field = Arc<FieldSpec>;

/// Element of some F_{q^m}, packed as base-q coefficient digits.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Element with the given packed code. The caller guarantees `code < q^m`.
    pub const fn from_code(code: u32) -> Self {
        FieldElement(code)
    }

    pub const fn code(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const MUL_TABLE_MAX: u32 = 256;
const INV_TABLE_MAX: u32 = 1 << 16;
const LOG_TABLE_MAX: u32 = 1 << 20;
const MAX_ORDER: u64 = 1 << 31;

/// F_{q^m} presented as F_q[x]/(modulus).
pub struct FieldSpec {
    q: u32,
    m: usize,
    modulus: Vec<u32>,
    primitive: bool,
    order: u32,
    powers: Vec<u32>,
    mul_table: Option<Vec<u32>>,
    inv_table: OnceLock<Vec<u32>>,
    log_table: OnceLock<Vec<u32>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("q", &self.q)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Conway polynomials, ascending coefficients. Verified primitive by the tests.
fn builtin_modulus(q: u32, m: usize) -> Option<&'static [u32]> {
    let table: &[(u32, usize, &[u32])] = &[
        (2, 1, &[1, 1]),
        (2, 2, &[1, 1, 1]),
        (2, 3, &[1, 1, 0, 1]),
        (2, 4, &[1, 1, 0, 0, 1]),
        (2, 5, &[1, 0, 1, 0, 0, 1]),
        (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
        (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
        (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
        (3, 1, &[1, 1]),
        (3, 2, &[2, 2, 1]),
        (3, 3, &[1, 2, 0, 1]),
        (3, 4, &[2, 0, 0, 2, 1]),
        (3, 5, &[1, 2, 0, 0, 0, 1]),
        (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
        (5, 1, &[3, 1]),
        (5, 2, &[2, 4, 1]),
        (5, 3, &[3, 3, 0, 1]),
        (5, 4, &[2, 4, 4, 0, 1]),
    ];
    table
        .iter()
        .find(|(tq, tm, _)| *tq == q && *tm == m)
        .map(|(_, _, c)| *c)
}

/// Default modulus for F_{q^m}: the built-in Conway polynomial when one is
/// tabulated, otherwise the lexicographically smallest primitive polynomial.
pub fn default_modulus(q: u32, m: usize) -> Result<Vec<u32>> {
    if !is_prime(q) {
        return Err(Error::NonPrimeBase(q));
    }
    if let Some(c) = builtin_modulus(q, m) {
        return Ok(c.to_vec());
    }
    let order = checked_order(q, m)?;
    // Enumerate monic polynomials by their lower coefficients, constant term nonzero.
    for low in 0..order {
        if low % q == 0 {
            continue;
        }
        let mut coeffs = digits_of(low, q, m);
        coeffs.push(1);
        if let Ok(spec) = FieldSpec::new(q, m, &coeffs) {
            if spec.is_primitive() {
                return Ok(coeffs);
            }
        }
    }
    Err(Error::ReducibleModulus(q))
}

fn checked_order(q: u32, m: usize) -> Result<u32> {
    let mut order: u64 = 1;
    for _ in 0..m {
        order *= q as u64;
        if order > MAX_ORDER {
            return Err(Error::FieldTooLarge { q, m });
        }
    }
    Ok(order as u32)
}

fn digits_of(mut code: u32, q: u32, m: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(code % q);
        code /= q;
    }
    out
}

/// The prime field F_q with its default degree-1 modulus, cached per q.
pub fn prime_field(q: u32) -> Result<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Field>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&q) {
        return Ok(f.clone());
    }
    let field = FieldSpec::new(q, 1, &default_modulus(q, 1)?)?;
    cache.lock().unwrap().insert(q, field.clone());
    Ok(field)
}

// Polynomials over F_q as ascending coefficient vectors. Used only for the
// irreducibility test, before any FieldSpec exists.
mod fq_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u32, q: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = q as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % q as u64;
            }
            b = b * b % q as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], f: &[u32], q: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], q) as u64;
        while r.len() > df {
            let top = r.len() - 1;
            let c = (r[top] as u64 * lead_inv % q as u64) as u32;
            let shift = top - df;
            for (i, &fi) in f.iter().enumerate() {
                let sub = (c as u64 * fi as u64 % q as u64) as u32;
                r[shift + i] = (r[shift + i] + q - sub) % q;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], f: &[u32], q: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut p = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                p[i + j] = ((p[i + j] as u64 + x as u64 * y as u64) % q as u64) as u32;
            }
        }
        rem(&p, f, q)
    }

    pub fn powmod(a: &[u32], mut e: u64, f: &[u32], q: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut base = rem(a, f, q);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &base, f, q);
            }
            base = mulmod(&base, &base, f, q);
            e >>= 1;
        }
        rem(&result, f, q)
    }

    pub fn sub(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut r: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + q - y) % q
            })
            .collect();
        trim(&mut r);
        r
    }

    pub fn gcd(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, q);
            x = y;
            y = r;
        }
        x
    }

    /// x^(q^j) mod f
    pub fn frobenius_power(j: usize, f: &[u32], q: u32) -> Vec<u32> {
        let mut h = rem(&[0, 1], f, q);
        for _ in 0..j {
            h = powmod(&h, q as u64, f, q);
        }
        h
    }

    /// Rabin's test for a monic polynomial of degree m.
    pub fn is_irreducible(f: &[u32], q: u32) -> bool {
        let m = f.len() - 1;
        let x = rem(&[0, 1], f, q);
        if frobenius_power(m, f, q) != x {
            return false;
        }
        for p in super::prime_factors(m as u64) {
            let h = frobenius_power(m / p as usize, f, q);
            let g = gcd(f, &sub(&h, &x, q), q);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl FieldSpec {
    /// Builds F_{q^m} = F_q[x]/(modulus), with `modulus` given as `m + 1`
    /// ascending coefficients.
    pub fn new(q: u32, m: usize, modulus: &[u32]) -> Result<Field> {
        if !is_prime(q) {
            return Err(Error::NonPrimeBase(q));
        }
        if m == 0 {
            return Err(Error::DegreeMismatch { expected: 1, got: 0 });
        }
        let mut trimmed = modulus.to_vec();
        fq_poly::trim(&mut trimmed);
        if trimmed.len() != m + 1 || modulus.len() != m + 1 {
            return Err(Error::DegreeMismatch {
                expected: m,
                got: trimmed.len().saturating_sub(1),
            });
        }
        if let Some(&bad) = modulus.iter().find(|&&c| c >= q) {
            return Err(Error::BadCoefficient { value: bad, q });
        }
        if modulus[m] != 1 {
            return Err(Error::NotMonic);
        }
        let order = checked_order(q, m)?;
        if !fq_poly::is_irreducible(modulus, q) {
            return Err(Error::ReducibleModulus(q));
        }
        let powers = (0..=m).map(|i| q.wrapping_pow(i as u32)).collect();
        let mut spec = FieldSpec {
            q,
            m,
            modulus: modulus.to_vec(),
            primitive: false,
            order,
            powers,
            mul_table: None,
            inv_table: OnceLock::new(),
            log_table: OnceLock::new(),
        };
        if order <= MUL_TABLE_MAX {
            let mut table = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in a..order {
                    let p = spec.mul_slow(a, b);
                    table[(a * order + b) as usize] = p;
                    table[(b * order + a) as usize] = p;
                }
            }
            spec.mul_table = Some(table);
        }
        spec.primitive = spec.compute_primitive();
        Ok(Arc::new(spec))
    }

    /// F_{q^m} with [`default_modulus`].
    pub fn with_default_modulus(q: u32, m: usize) -> Result<Field> {
        FieldSpec::new(q, m, &default_modulus(q, m)?)
    }

    fn compute_primitive(&self) -> bool {
        let group = self.order as u64 - 1;
        let g = self.generator();
        if g.is_zero() {
            return false;
        }
        prime_factors(group)
            .into_iter()
            .all(|p| self.pow(g, group / p) != FieldElement::ONE)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// Number of elements, q^m.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// The class w of x modulo the modulus.
    pub fn generator(&self) -> FieldElement {
        if self.m >= 2 {
            FieldElement(self.q)
        } else {
            FieldElement((self.q - self.modulus[0]) % self.q)
        }
    }

    /// Embeds the prime-field constant `c mod q`.
    pub fn constant(&self, c: u32) -> FieldElement {
        FieldElement(c % self.q)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        digits_of(a.0, self.q, self.m)
    }

    /// Coefficient of w^i in `a`.
    pub fn coeff(&self, a: FieldElement, i: usize) -> u32 {
        (a.0 / self.powers[i]) % self.q
    }

    pub fn element_from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.m {
            return Err(Error::SpecMismatch);
        }
        let mut code = 0u32;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.q {
                return Err(Error::BadCoefficient { value: c, q: self.q });
            }
            code += c * self.powers[i];
        }
        Ok(FieldElement(code))
    }

    /// Checks that `a` is a valid code for this field.
    pub fn check(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 < self.order {
            Ok(a)
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.q == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.m == 1 {
            return FieldElement((a.0 + b.0) % self.q);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        for i in 0..self.m {
            let d = (x % self.q + y % self.q) % self.q;
            out += d * self.powers[i];
            x /= self.q;
            y /= self.q;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.q == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        for i in 0..self.m {
            let d = (self.q - x % self.q) % self.q;
            out += d * self.powers[i];
            x /= self.q;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(t) = &self.mul_table {
            return FieldElement(t[(a.0 * self.order + b.0) as usize]);
        }
        FieldElement(self.mul_slow(a.0, b.0))
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.m == 1 {
            return ((a as u64 * b as u64) % self.q as u64) as u32;
        }
        if self.q == 2 {
            let mut prod: u64 = 0;
            for i in 0..self.m {
                if (b >> i) & 1 == 1 {
                    prod ^= (a as u64) << i;
                }
            }
            let low_mask: u64 = self
                .modulus
                .iter()
                .take(self.m)
                .enumerate()
                .fold(0, |acc, (i, &c)| acc | ((c as u64) << i));
            for d in (self.m..2 * self.m - 1).rev() {
                if (prod >> d) & 1 == 1 {
                    prod ^= 1u64 << d;
                    prod ^= low_mask << (d - self.m);
                }
            }
            return prod as u32;
        }
        let q = self.q as u64;
        let da = digits_of(a, self.q, self.m);
        let db = digits_of(b, self.q, self.m);
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % q;
            }
        }
        for d in (self.m..2 * self.m - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..self.m {
                let s = c * self.modulus[i] as u64 % q;
                prod[d - self.m + i] = (prod[d - self.m + i] + q - s) % q;
            }
        }
        prod.iter()
            .take(self.m)
            .enumerate()
            .map(|(i, &c)| c as u32 * self.powers[i])
            .sum()
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut result = FieldElement::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInversion);
        }
        if self.order <= INV_TABLE_MAX {
            let table = self.inv_table.get_or_init(|| {
                let mut t = vec![0u32; self.order as usize];
                for x in 1..self.order {
                    if t[x as usize] == 0 {
                        let y = self.pow(FieldElement(x), self.order as u64 - 2).0;
                        t[x as usize] = y;
                        t[y as usize] = x;
                    }
                }
                t
            });
            return Ok(FieldElement(table[a.0 as usize]));
        }
        Ok(self.pow(a, self.order as u64 - 2))
    }

    /// Discrete logarithm to base w, available for primitive moduli of
    /// moderate size.
    pub fn log(&self, a: FieldElement) -> Option<u64> {
        if !self.primitive || a.is_zero() || self.order > LOG_TABLE_MAX {
            return None;
        }
        let table = self.log_table.get_or_init(|| {
            let mut t = vec![0u32; self.order as usize];
            let g = self.generator();
            let mut x = FieldElement::ONE;
            for e in 0..self.order - 1 {
                t[x.0 as usize] = e;
                x = self.mul(x, g);
            }
            t
        });
        Some(table[a.0 as usize] as u64)
    }

    /// Parses "0", "1", a decimal prime-field constant, "w", "w^e", or a sum
    /// of those joined by '+', e.g. "w^103+1".
    pub fn parse_element(&self, token: &str) -> Result<FieldElement> {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::BadToken(token.to_string()));
        }
        let mut acc = FieldElement::ZERO;
        for part in token.split('+') {
            let part = part.trim();
            let value = if let Some(rest) = part.strip_prefix('w').or_else(|| part.strip_prefix('ω')) {
                let e: u64 = if rest.is_empty() {
                    1
                } else {
                    let exp = rest
                        .strip_prefix('^')
                        .ok_or_else(|| Error::BadToken(token.to_string()))?;
                    let exp = exp.trim_start_matches('{').trim_end_matches('}');
                    exp.parse().map_err(|_| Error::BadToken(token.to_string()))?
                };
                if !self.primitive {
                    return Err(Error::NonPrimitiveExponentiation);
                }
                self.pow(self.generator(), e % (self.order as u64 - 1))
            } else {
                let c: u32 = part.parse().map_err(|_| Error::BadToken(token.to_string()))?;
                if c >= self.q {
                    return Err(Error::BadToken(token.to_string()));
                }
                FieldElement(c)
            };
            acc = self.add(acc, value);
        }
        Ok(acc)
    }

    /// Human-readable token: "0", "1", "w^e" when a logarithm is available,
    /// otherwise the coefficient vector.
    pub fn format_element(&self, a: FieldElement) -> String {
        if a.0 < self.q {
            return a.0.to_string();
        }
        match self.log(a) {
            Some(e) => format!("w^{e}"),
            None => format!("{:?}", self.coeffs(a)),
        }
    }
}
