//! The subspace lattice of F_q^n.
//!
//! Subspaces are identified by their reduced row echelon basis. The lattice
//! order used for every indexed object in this crate is: ascending dimension,
//! then the basis rows compared one after another, each row read as the integer
//! `sum_j x_j q^j`. For points of F_2^2 this lists e1, e2, e1+e2.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gf::prime_field;
use crate::linalg::Mat;

pub const DEFAULT_LATTICE_BUDGET: u128 = 1_000_000;
const MEMBER_BITSET_MAX: u64 = 1 << 14;

/// A subspace of F_q^n in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceId {
    q: u32,
    n: usize,
    dim: usize,
    entries: Vec<u8>,
}

impl SubspaceId {
    pub fn zero(q: u32, n: usize) -> Self {
        SubspaceId {
            q,
            n,
            dim: 0,
            entries: Vec::new(),
        }
    }

    pub fn full(q: u32, n: usize) -> Self {
        let mut entries = vec![0u8; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        SubspaceId { q, n, dim: n, entries }
    }

    /// Row space of the given vectors (entries reduced mod q).
    pub fn span(q: u32, n: usize, rows: &[Vec<u32>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::AmbientMismatch);
        }
        let field = prime_field(q)?;
        let reduced: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&x| x % q).collect()).collect();
        let m = Mat::from_codes(&field, n, &reduced)?;
        Ok(SubspaceId::from_mat(&m))
    }

    /// Row space of a prime-field matrix.
    pub fn from_mat(m: &Mat) -> Self {
        let r = m.rref();
        let n = m.cols();
        let entries = (0..r.rank)
            .flat_map(|i| r.reduced.row(i).iter().map(|x| x.code() as u8).collect::<Vec<_>>())
            .collect();
        SubspaceId {
            q: m.field().q(),
            n,
            dim: r.rank,
            entries,
        }
    }

    /// Wraps rows already in canonical form.
    fn from_canonical(q: u32, n: usize, dim: usize, entries: Vec<u8>) -> Self {
        SubspaceId { q, n, dim, entries }
    }

    pub fn from_json(q: u32, n: usize, value: &Value) -> Result<Self> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::BadToken("subspace must be an array of rows".into()))?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::BadToken("row must be an array".into()))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .filter(|&x| x < q as u64)
                            .map(|x| x as u32)
                            .ok_or_else(|| Error::BadToken(x.to_string()))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SubspaceId::span(q, n, &rows)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows()
                .map(|r| Value::Array(r.iter().map(|&x| Value::from(x)).collect()))
                .collect(),
        )
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.chunks(self.n.max(1)).take(self.dim)
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        self.rows().map(|r| r.iter().map(|&x| x as u32).collect()).collect()
    }

    pub fn to_mat(&self) -> Mat {
        let field = prime_field(self.q).expect("prime q");
        Mat::from_codes(&field, self.n, &self.row_vecs()).expect("consistent shape")
    }

    fn row_key(&self, row: &[u8]) -> u64 {
        row.iter()
            .rev()
            .fold(0u64, |acc, &x| acc * self.q as u64 + x as u64)
    }

    fn pivot(row: &[u8]) -> usize {
        row.iter().position(|&x| x != 0).expect("canonical rows are nonzero")
    }

    /// Membership test by reduction against the canonical basis.
    pub fn contains_vector(&self, v: &[u32]) -> bool {
        let q = self.q;
        let mut w: Vec<u32> = v.iter().map(|&x| x % q).collect();
        for row in self.rows() {
            let p = Self::pivot(row);
            let c = w[p];
            if c != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = (*x + q - (c * r as u32) % q) % q;
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// `self ≤ other`.
    pub fn leq(&self, other: &SubspaceId) -> bool {
        self.dim <= other.dim
            && self
                .rows()
                .all(|r| other.contains_vector(&r.iter().map(|&x| x as u32).collect::<Vec<_>>()))
    }

    fn check_ambient(&self, other: &SubspaceId) -> Result<()> {
        if self.q != other.q || self.n != other.n {
            Err(Error::AmbientMismatch)
        } else {
            Ok(())
        }
    }

    pub fn sum(&self, other: &SubspaceId) -> Result<SubspaceId> {
        self.check_ambient(other)?;
        let mut rows = self.row_vecs();
        rows.extend(other.row_vecs());
        SubspaceId::span(self.q, self.n, &rows)
    }

    /// Orthogonal complement under the standard dot product.
    pub fn perp(&self) -> SubspaceId {
        if self.dim == 0 {
            return SubspaceId::full(self.q, self.n);
        }
        SubspaceId::from_mat(&self.to_mat().null_space())
    }

    pub fn intersection(&self, other: &SubspaceId) -> Result<SubspaceId> {
        Ok(self.perp().sum(&other.perp())?.perp())
    }

    /// Every vector of the subspace, encoded as `sum_j x_j q^j`.
    pub fn vector_codes(&self) -> Vec<u64> {
        let q = self.q as u64;
        let mut out = vec![0u64];
        for row in self.rows() {
            let key = self.row_key(row);
            let mut next = Vec::with_capacity(out.len() * q as usize);
            for c in 0..q {
                for &v in &out {
                    next.push(add_codes(v, mul_code(key, c, q, self.n), q, self.n));
                }
            }
            out = next;
        }
        out.sort_unstable();
        out
    }
}

fn add_codes(a: u64, b: u64, q: u64, n: usize) -> u64 {
    if q == 2 {
        return a ^ b;
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..n {
        out += ((a % q + b % q) % q) * place;
        a /= q;
        b /= q;
        place *= q;
    }
    out
}

fn mul_code(a: u64, c: u64, q: u64, n: usize) -> u64 {
    let mut a = a;
    let mut out = 0;
    let mut place = 1;
    for _ in 0..n {
        out += ((a % q) * c % q) * place;
        a /= q;
        place *= q;
    }
    out
}

impl PartialOrd for SubspaceId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SubspaceId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.n, self.dim)
            .cmp(&(other.q, other.n, other.dim))
            .then_with(|| {
                self.rows()
                    .map(|r| self.row_key(r))
                    .cmp(other.rows().map(|r| other.row_key(r)))
            })
    }
}

/// `(V + W, V ∩ W, V ≤ W)`.
pub fn join_meet(v: &SubspaceId, w: &SubspaceId) -> Result<(SubspaceId, SubspaceId, bool)> {
    v.check_ambient(w)?;
    Ok((v.sum(w)?, v.intersection(w)?, v.leq(w)))
}

/// Number of k-dimensional subspaces of an n-dimensional space over a field
/// of size `q`; zero outside 0 ≤ k ≤ n.
pub fn gaussian_binomial(n: i64, k: i64, q: u64) -> BigInt {
    gaussian_binomial_big(n, k, &BigInt::from(q))
}

/// [`gaussian_binomial`] for a field size that may not fit a machine word.
pub fn gaussian_binomial_big(n: i64, k: i64, q: &BigInt) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= num_traits::pow(q.clone(), (n - i) as usize) - 1;
        den *= num_traits::pow(q.clone(), (i + 1) as usize) - 1;
    }
    num / den
}

/// Number of subspaces of F_q^n.
pub fn lattice_size(q: u32, n: usize) -> BigInt {
    (0..=n as i64).map(|k| gaussian_binomial(n as i64, k, q as u64)).sum()
}

/// `(-1)^d q^C(d,2)`: the Möbius value of an interval of length d.
pub fn mobius_interval(q: u32, d: usize) -> BigInt {
    let v = num_traits::pow(BigInt::from(q), d * d.saturating_sub(1) / 2);
    if d % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Möbius function μ(W, V) of the subspace lattice.
pub fn mobius(w: &SubspaceId, v: &SubspaceId) -> BigInt {
    if w.q != v.q || w.n != v.n || !w.leq(v) {
        return BigInt::zero();
    }
    mobius_interval(v.q, v.dim - w.dim)
}

/// All pivot column sets of k-row echelon matrices with n columns.
pub fn pivot_patterns(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// Free positions (row, col) of an echelon form with the given pivots.
pub fn free_positions(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for c in p + 1..n {
            if !pivots.contains(&c) {
                out.push((i, c));
            }
        }
    }
    out
}

/// Calls `visit` with every reduced echelon matrix (flattened, entries are
/// element codes below `order`) having the given pivot columns. Code 1 is the
/// field's unit.
pub fn for_each_rref<F: FnMut(&[u32])>(order: u32, n: usize, pivots: &[usize], mut visit: F) {
    let k = pivots.len();
    let free = free_positions(n, pivots);
    let mut m = vec![0u32; k * n];
    for (i, &p) in pivots.iter().enumerate() {
        m[i * n + p] = 1;
    }
    let mut counter = vec![0u32; free.len()];
    loop {
        visit(&m);
        let mut pos = 0;
        loop {
            if pos == free.len() {
                return;
            }
            counter[pos] += 1;
            let (i, c) = free[pos];
            if counter[pos] == order {
                counter[pos] = 0;
                m[i * n + c] = 0;
                pos += 1;
            } else {
                m[i * n + c] = counter[pos];
                break;
            }
        }
    }
}

/// Process-wide cache of enumerated lattices, keyed by (q, n).
pub fn shared_lattice(q: u32, n: usize, budget: u128) -> Result<Arc<LatticeIndex>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<LatticeIndex>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(l) = cache.lock().unwrap().get(&(q, n)) {
        return Ok(l.clone());
    }
    let l = Arc::new(LatticeIndex::enumerate(q, n, budget)?);
    cache.lock().unwrap().entry((q, n)).or_insert(l.clone());
    Ok(l)
}

/// The full subspace lattice of F_q^n in the frozen order.
#[derive(Debug)]
pub struct LatticeIndex {
    q: u32,
    n: usize,
    subspaces: Vec<SubspaceId>,
    position: HashMap<SubspaceId, usize>,
    dim_start: Vec<usize>,
    members: Option<Vec<FixedBitSet>>,
    perp: OnceLock<Vec<usize>>,
}

impl LatticeIndex {
    pub fn enumerate(q: u32, n: usize, budget: u128) -> Result<Self> {
        prime_field(q)?;
        let size = lattice_size(q, n);
        let needed: u128 = u128::try_from(&size).unwrap_or(u128::MAX);
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: "lattice",
                needed,
                budget,
            });
        }
        let patterns: Vec<Vec<usize>> = (0..=n).flat_map(|k| pivot_patterns(n, k)).collect();
        let build = |pivots: &Vec<usize>| {
            let mut out = Vec::new();
            for_each_rref(q, n, pivots, |m| {
                out.push(SubspaceId::from_canonical(
                    q,
                    n,
                    pivots.len(),
                    m.iter().map(|&x| x as u8).collect(),
                ))
            });
            out
        };
        #[cfg(feature = "parallel")]
        let mut subspaces: Vec<SubspaceId> = {
            use rayon::prelude::*;
            patterns.par_iter().flat_map_iter(build).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let mut subspaces: Vec<SubspaceId> = patterns.iter().flat_map(build).collect();
        subspaces.sort();
        let position = subspaces
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut dim_start = vec![0usize; n + 2];
        for s in &subspaces {
            dim_start[s.dim + 1] += 1;
        }
        for d in 1..n + 2 {
            dim_start[d] += dim_start[d - 1];
        }
        let space = (q as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        let members = (space <= MEMBER_BITSET_MAX).then(|| {
            subspaces
                .iter()
                .map(|s| {
                    let mut b = FixedBitSet::with_capacity(space as usize);
                    for v in s.vector_codes() {
                        b.insert(v as usize);
                    }
                    b
                })
                .collect()
        });
        Ok(LatticeIndex {
            q,
            n,
            subspaces,
            position,
            dim_start,
            members,
            perp: OnceLock::new(),
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn get(&self, i: usize) -> &SubspaceId {
        &self.subspaces[i]
    }

    pub fn subspaces(&self) -> &[SubspaceId] {
        &self.subspaces
    }

    pub fn index_of(&self, s: &SubspaceId) -> Option<usize> {
        self.position.get(s).copied()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.subspaces[i].dim
    }

    /// Indices of the subspaces of dimension d.
    pub fn of_dim(&self, d: usize) -> std::ops::Range<usize> {
        self.dim_start[d]..self.dim_start[d + 1]
    }

    pub fn dim_profile(&self) -> Vec<usize> {
        (0..=self.n).map(|d| self.of_dim(d).len()).collect()
    }

    /// `subspace i ≤ subspace j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        if self.dim(i) > self.dim(j) {
            return false;
        }
        match &self.members {
            Some(m) => m[i].is_subset(&m[j]),
            None => self.subspaces[i].leq(&self.subspaces[j]),
        }
    }

    /// Index of the orthogonal complement of subspace i.
    pub fn perp_index(&self, i: usize) -> usize {
        self.perp.get_or_init(|| {
            self.subspaces
                .iter()
                .map(|s| self.position[&s.perp()])
                .collect()
        })[i]
    }

    pub fn mobius(&self, w: usize, v: usize) -> BigInt {
        if self.leq(w, v) {
            mobius_interval(self.q, self.dim(v) - self.dim(w))
        } else {
            BigInt::zero()
        }
    }
}
