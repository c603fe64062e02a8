//! Sparse bivariate integer polynomials and monomial substitutions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Polynomial in x, y with arbitrary-precision integer coefficients.
/// Terms are keyed by the exponent pair (i, j) of x^i y^j; zero coefficients
/// are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, 1)
    }

    pub fn monomial(i: u32, j: u32, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c.into());
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Terms in ascending (i, j) order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn scale(&self, c: &BigInt) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// Multiplies by x^a y^b.
    pub fn shift(&self, a: u32, b: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), v)| ((i + a, j + b), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut out = BiPoly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, x0: &BigInt, y0: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(x0.clone(), i as usize) * num_traits::pow(y0.clone(), j as usize))
            .sum()
    }

    pub fn eval_i64(&self, x0: i64, y0: i64) -> BigInt {
        self.eval(&BigInt::from(x0), &BigInt::from(y0))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(i, j, c)| json!({"i": i, "j": j, "c": c.to_string()}))
            .collect();
        json!({"terms": terms, "pretty": self.pretty()})
    }

    pub fn from_json(value: &Value) -> Result<BiPoly> {
        let bad = || Error::BadPolynomial(value.to_string());
        let terms = value.get("terms").and_then(Value::as_array).ok_or_else(bad)?;
        let mut p = BiPoly::zero();
        for t in terms {
            let i = t.get("i").and_then(Value::as_u64).ok_or_else(bad)? as u32;
            let j = t.get("j").and_then(Value::as_u64).ok_or_else(bad)? as u32;
            let c = match t.get("c") {
                Some(Value::String(s)) => s.parse::<BigInt>().map_err(|_| bad())?,
                Some(Value::Number(n)) => n.as_i64().map(BigInt::from).ok_or_else(bad)?,
                _ => return Err(bad()),
            };
            p.add_term(i, j, c);
        }
        Ok(p)
    }

    /// Terms ordered by descending x-degree, then descending y-degree, e.g.
    /// `x^3 + 31x^2 + 3xy + 155x + y^2 + 31y + 152`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_str(i, j);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                }
                out.push_str(&mono);
            }
        }
        out
    }

    /// Parses the `pretty` format. Coefficients may be written with or
    /// without `*`, and `x^1`, `x1` style exponents are both accepted.
    pub fn parse(text: &str) -> Result<BiPoly> {
        let bad = || Error::BadPolynomial(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut p = BiPoly::zero();
        while pos < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            } else if pos != 0 {
                return Err(bad());
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let coeff = if pos > start {
                s[start..pos].parse::<BigInt>().map_err(|_| bad())?
            } else {
                BigInt::one()
            };
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
            }
            let (mut i, mut j) = (0u32, 0u32);
            let mut saw_var = false;
            while pos < bytes.len() && (bytes[pos] == b'x' || bytes[pos] == b'y') {
                let var = bytes[pos];
                pos += 1;
                let mut e = 1u32;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let es = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    e = s[es..pos].parse().map_err(|_| bad())?;
                }
                if var == b'x' {
                    i += e;
                } else {
                    j += e;
                }
                saw_var = true;
                if pos < bytes.len() && bytes[pos] == b'*' {
                    pos += 1;
                }
            }
            if !saw_var && pos == start {
                return Err(bad());
            }
            p.add_term(i, j, sign * coeff);
        }
        Ok(p)
    }
}

fn monomial_str(i: u32, j: u32) -> String {
    let var = |name: &str, e: u32| match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    };
    format!("{}{}", var("x", i), var("y", j))
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl AddAssign<&BiPoly> for BiPoly {
    fn add_assign(&mut self, rhs: &BiPoly) {
        for (&(i, j), c) in &rhs.terms {
            self.add_term(i, j, c.clone());
        }
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(mut self, rhs: BiPoly) -> BiPoly {
        self += &rhs;
        self
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&k, v)| (k, -v)).collect(),
        }
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        &self - &rhs
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            for (&(a, b), d) in &rhs.terms {
                out.add_term(i + a, j + b, c * d);
            }
        }
        out
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for BiPoly {
    fn sum<I: Iterator<Item = BiPoly>>(iter: I) -> BiPoly {
        iter.fold(BiPoly::zero(), |acc, p| acc + p)
    }
}

/// What a substitution does with an exponent pair outside its support.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Outside {
    /// The pair maps to 0.
    Zero,
    /// Applying the family to such a pair is an error.
    Error,
}

type Generator = Arc<dyn Fn(u32, u32) -> BiPoly + Send + Sync>;
type Support = Arc<dyn Fn(u32, u32) -> bool + Send + Sync>;

#[derive(Clone)]
enum Rule {
    Table(BTreeMap<(u32, u32), BiPoly>),
    Generator { support: Support, image: Generator },
}

/// A family (u_{i,j}) defining the Z-linear map x^i y^j ↦ u_{i,j}.
#[derive(Clone)]
pub struct SubstFamily {
    name: String,
    rule: Rule,
    outside: Outside,
}

impl fmt::Debug for SubstFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubstFamily")
            .field("name", &self.name)
            .field("outside", &self.outside)
            .finish()
    }
}

impl SubstFamily {
    pub fn identity() -> Self {
        SubstFamily::generator("identity", |_, _| true, |i, j| BiPoly::monomial(i, j, 1), Outside::Error)
    }

    /// A closed-form family, defined on pairs accepted by `support`.
    pub fn generator(
        name: &str,
        support: impl Fn(u32, u32) -> bool + Send + Sync + 'static,
        image: impl Fn(u32, u32) -> BiPoly + Send + Sync + 'static,
        outside: Outside,
    ) -> Self {
        SubstFamily {
            name: name.to_string(),
            rule: Rule::Generator {
                support: Arc::new(support),
                image: Arc::new(image),
            },
            outside,
        }
    }

    /// An explicit family; its support is the set of keys.
    pub fn table(name: &str, entries: BTreeMap<(u32, u32), BiPoly>, outside: Outside) -> Self {
        SubstFamily {
            name: name.to_string(),
            rule: Rule::Table(entries),
            outside,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn in_support(&self, i: u32, j: u32) -> bool {
        match &self.rule {
            Rule::Table(t) => t.contains_key(&(i, j)),
            Rule::Generator { support, .. } => support(i, j),
        }
    }

    /// u_{i,j}, or `None` outside the support.
    pub fn image(&self, i: u32, j: u32) -> Option<BiPoly> {
        match &self.rule {
            Rule::Table(t) => t.get(&(i, j)).cloned(),
            Rule::Generator { support, image } => support(i, j).then(|| image(i, j)),
        }
    }

    /// Ω_U(f) = Σ f_{i,j} u_{i,j}.
    pub fn apply(&self, f: &BiPoly) -> Result<BiPoly> {
        let mut out = BiPoly::zero();
        for (i, j, c) in f.terms() {
            match self.image(i, j) {
                Some(u) => out += &u.scale(c),
                None if self.outside == Outside::Zero => {}
                None => return Err(Error::UnsupportedExponent(i, j)),
            }
        }
        Ok(out)
    }
}

/// Ω_U(f).
pub fn omega(f: &BiPoly, family: &SubstFamily) -> Result<BiPoly> {
    family.apply(f)
}
