//! Rank-metric codes over F_{q^m}: supports, higher weight and support
//! distributions, and the integer matrices relating them to the q-matroid.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::lattice::{for_each_rref, gaussian_binomial, gaussian_binomial_big, pivot_patterns, SubspaceId};
use crate::linalg::{psi_expand, Mat};
use crate::poly::{BiPoly, Outside, SubstFamily};
use crate::qmatroid::{signed_qpow, QMatroid, WhitneyTable};

pub const DEFAULT_SUBCODE_BUDGET: u128 = 10_000_000;

/// Support of a vector: the row space of its Ψ-expansion.
pub fn support(v: &[FieldElement], field: &Field) -> SubspaceId {
    SubspaceId::from_mat(&psi_expand(v, field))
}

/// Rank weight: dimension of the support.
pub fn rank_weight(v: &[FieldElement], field: &Field) -> usize {
    psi_expand(v, field).rank()
}

/// Support of the span of `vectors`, as the sum of the individual supports.
pub fn support_space(vectors: &[Vec<FieldElement>], field: &Field, n: usize) -> Result<SubspaceId> {
    let base = crate::gf::prime_field(field.q())?;
    let mut rows = Vec::with_capacity(vectors.len() * field.m());
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!("vector of length {}, expected {n}", v.len())));
        }
        rows.extend(psi_expand(v, field).row_vecs());
    }
    Ok(SubspaceId::from_mat(&Mat::from_rows(&base, n, rows)?))
}

/// A code rowsp(G) with G of full row rank.
#[derive(Clone, Debug)]
pub struct RankMetricCode {
    g: Mat,
}

impl RankMetricCode {
    pub fn new(g: Mat) -> Result<Self> {
        let rank = g.rank();
        if rank != g.rows() {
            return Err(Error::DependentRows { rank, rows: g.rows() });
        }
        Ok(RankMetricCode { g })
    }

    pub fn generator(&self) -> &Mat {
        &self.g
    }

    pub fn field(&self) -> &Field {
        self.g.field()
    }

    pub fn q(&self) -> u32 {
        self.field().q()
    }

    pub fn m(&self) -> usize {
        self.field().m()
    }

    pub fn n(&self) -> usize {
        self.g.cols()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn qmatroid(&self) -> Result<QMatroid> {
        QMatroid::represented(self.g.clone())
    }

    /// q^m as a big integer.
    pub fn qm(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.q()), self.m())
    }

    /// Calls `visit` with a basis (coefficient matrix times G) of every t-dimensional subcode.
    pub fn for_each_subcode<F: FnMut(Vec<Vec<FieldElement>>)>(&self, t: usize, budget: u128, mut visit: F) -> Result<()> {
        let k = self.k();
        let count = gaussian_binomial_big(k as i64, t as i64, &self.qm());
        let needed = u128::try_from(&count).unwrap_or(u128::MAX);
        if needed > budget {
            return Err(Error::BudgetExceeded { what: "subcode enumeration", needed, budget });
        }
        let field = self.field().clone();
        let order = field.order();
        for pivots in pivot_patterns(k, t) {
            for_each_rref(order, k, &pivots, |coeffs| {
                let basis = (0..t)
                    .map(|r| {
                        (0..self.n())
                            .map(|j| {
                                (0..k).fold(FieldElement::ZERO, |acc, i| {
                                    let c = FieldElement::from_code(coeffs[r * k + i]);
                                    if c.is_zero() {
                                        acc
                                    } else {
                                        field.add(acc, field.mul(c, self.g.get(i, j)))
                                    }
                                })
                            })
                            .collect()
                    })
                    .collect();
                visit(basis);
            });
        }
        Ok(())
    }

    /// Supports of all t-dimensional subcodes, counted per subspace.
    pub fn support_counts(&self, t: usize, budget: u128) -> Result<HashMap<SubspaceId, u64>> {
        let mut bases = Vec::new();
        self.for_each_subcode(t, budget, |b| bases.push(b))?;
        let field = self.field();
        let n = self.n();
        let supp = |b: &Vec<Vec<FieldElement>>| support_space(b, field, n).expect("rows have length n");
        #[cfg(feature = "parallel")]
        let supports: Vec<SubspaceId> = {
            use rayon::prelude::*;
            bases.par_iter().map(supp).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let supports: Vec<SubspaceId> = bases.iter().map(supp).collect();
        let mut counts = HashMap::new();
        for s in supports {
            *counts.entry(s).or_insert(0u64) += 1;
        }
        Ok(counts)
    }

    /// A^{(t)} and S^{(t)} for t = 0..=t_max.
    pub fn higher_distributions(&self, t_max: usize, budget: u128) -> Result<HigherDistributions> {
        let n = self.n();
        let t_max = t_max.min(self.k());
        let mut a = vec![vec![BigInt::zero(); t_max + 1]; n + 1];
        let mut s = Vec::with_capacity(t_max + 1);
        for t in 0..=t_max {
            let counts = self.support_counts(t, budget)?;
            for (v, c) in &counts {
                a[v.dim()][t] += *c;
            }
            s.push(counts);
        }
        Ok(HigherDistributions { n, k: self.k(), a, s })
    }

    /// W_C = x^n + (q^m − 1) Σ_{i>0} A_i^{(1)} x^{n−i} y^i.
    pub fn weight_enumerator(&self, budget: u128) -> Result<BiPoly> {
        let n = self.n() as u32;
        if self.k() == 0 {
            return Ok(BiPoly::monomial(n, 0, 1));
        }
        let d = self.higher_distributions(1, budget)?;
        let mut w = BiPoly::monomial(n, 0, 1);
        let unit = self.qm() - 1;
        for i in 1..=n {
            w.add_term(n - i, i, &unit * &d.a[i as usize][1]);
        }
        Ok(w)
    }
}

/// Higher weight distributions A_i^{(t)} and support distributions A_V^{(t)}.
#[derive(Clone, Debug)]
pub struct HigherDistributions {
    n: usize,
    k: usize,
    a: Vec<Vec<BigInt>>,
    s: Vec<HashMap<SubspaceId, u64>>,
}

impl HigherDistributions {
    pub fn t_max(&self) -> usize {
        self.s.len() - 1
    }

    /// A_i^{(t)}.
    pub fn a(&self, i: usize, t: usize) -> &BigInt {
        &self.a[i][t]
    }

    /// The (n+1)×(t_max+1) matrix of A_i^{(t)}.
    pub fn a_matrix(&self) -> IntMat {
        IntMat::from_rows(self.a.clone())
    }

    /// A_V^{(t)}.
    pub fn support_count(&self, v: &SubspaceId, t: usize) -> u64 {
        self.s[t].get(v).copied().unwrap_or(0)
    }

    pub fn supports(&self, t: usize) -> &HashMap<SubspaceId, u64> {
        &self.s[t]
    }

    /// W^{(t)} = Σ_i A_i^{(t)} x^{n−i} y^i.
    pub fn enumerator(&self, t: usize) -> BiPoly {
        let n = self.n as u32;
        let mut p = BiPoly::zero();
        for i in 0..=n {
            p.add_term(n - i, i, self.a[i as usize][t].clone());
        }
        p
    }

    pub fn enumerators(&self) -> Vec<BiPoly> {
        (0..=self.t_max()).map(|t| self.enumerator(t)).collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Dense integer matrix with exact entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(12) {
            let row: Vec<String> = (0..self.cols.min(12)).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        let data = (0..rows * cols).map(|x| f(x / cols.max(1), x % cols.max(1))).collect();
        IntMat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        IntMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        IntMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Product; zero entries of the left factor are skipped, which keeps the
    /// sparse lattice matrices cheap.
    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// First (row, col) where the two matrices differ; shape mismatch reports (0, 0).
    pub fn first_difference(&self, other: &IntMat) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0));
        }
        (0..self.rows * self.cols)
            .find(|&x| self.data[x] != other.data[x])
            .map(|x| (x / self.cols, x % self.cols))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|r| serde_json::Value::Array(self.row(r).iter().map(|x| serde_json::Value::String(x.to_string())).collect()))
                .collect(),
        )
    }
}

fn product(factors: &[&IntMat]) -> Result<IntMat> {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

/// P, M, F, Q, N, D, K and their inverses for a q-matroid and an extension degree m.
/// Lattice-indexed rows and columns follow the frozen subspace order.
#[derive(Clone, Debug)]
pub struct InvariantMatrices {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub p: IntMat,
    pub mob: IntMat,
    pub mob_inv: IntMat,
    pub f: IntMat,
    pub f_inv: IntMat,
    pub qmat: IntMat,
    pub q_inv: IntMat,
    pub nmat: IntMat,
    pub d: IntMat,
    pub kmat: IntMat,
    whitney: WhitneyTable,
}

/// Outcome of one matrix identity.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub first_discrepancy: Option<(usize, usize)>,
}

impl IdentityCheck {
    fn compare(name: &str, lhs: &IntMat, rhs: &IntMat) -> Self {
        let diff = lhs.first_difference(rhs);
        IdentityCheck { name: name.to_string(), holds: diff.is_none(), first_discrepancy: diff }
    }
}

/// Turns the first failed check into an error.
pub fn require_all(checks: &[IdentityCheck]) -> Result<()> {
    match checks.iter().find(|c| !c.holds) {
        None => Ok(()),
        Some(c) => {
            let (row, col) = c.first_discrepancy.unwrap_or((0, 0));
            Err(Error::IdentityViolation { name: c.name.clone(), row, col })
        }
    }
}

fn signed(e: usize, v: BigInt) -> BigInt {
    if e % 2 == 1 {
        -v
    } else {
        v
    }
}

impl InvariantMatrices {
    pub fn build(mq: &QMatroid, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InconsistentParameters("extension degree must be at least 1".into()));
        }
        let lattice = mq.lattice()?;
        let ranks = mq.rank_vector()?;
        let (q, n, k) = (mq.q(), mq.n(), mq.k());
        let len = lattice.len();
        let qm = num_traits::pow(BigInt::from(q), m);
        let q64 = q as u64;

        let mut p = IntMat::zeros(len, len);
        let mut mob = IntMat::zeros(len, len);
        let mut mob_inv = IntMat::zeros(len, len);
        let mut d = IntMat::zeros(n + 1, len);
        let mut kmat = IntMat::zeros(len, k + 1);
        for v in 0..len {
            p.set(lattice.perp_index(v), v, BigInt::one());
            d.set(lattice.dim(v), v, BigInt::one());
            kmat.set(v, k - ranks[v], BigInt::one());
            for w in 0..=lattice.dim(v) {
                for wi in lattice.of_dim(w) {
                    if lattice.leq(wi, v) {
                        mob.set(v, wi, lattice.mobius(wi, v));
                        mob_inv.set(v, wi, BigInt::one());
                    }
                }
            }
        }
        let f = IntMat::from_fn(n + 1, n + 1, |i, j| {
            if i < j {
                return BigInt::zero();
            }
            signed_qpow((i - j) as i64, q64) * gaussian_binomial((n - j) as i64, (i - j) as i64, q64)
        });
        let f_inv = IntMat::from_fn(n + 1, n + 1, |i, j| {
            if i < j {
                BigInt::zero()
            } else {
                gaussian_binomial((n - j) as i64, (i - j) as i64, q64)
            }
        });
        let qmat = IntMat::from_fn(k + 1, k + 1, |a, b| gaussian_binomial_big(a as i64, b as i64, &qm));
        let q_inv = IntMat::from_fn(k + 1, k + 1, |a, b| {
            if a < b {
                return BigInt::zero();
            }
            let e = a - b;
            signed(e, num_traits::pow(qm.clone(), e * e.saturating_sub(1) / 2))
                * gaussian_binomial_big(a as i64, b as i64, &qm)
        });
        let whitney = mq.whitney()?;
        let nmat = IntMat::from_fn(k + 1, n + 1, |i, j| whitney.nu_or_zero(i as i64, (n - k + i) as i64 - j as i64));
        Ok(InvariantMatrices { q, m, n, k, p, mob, mob_inv, f, f_inv, qmat, q_inv, nmat, d, kmat, whitney })
    }

    /// S = MPKQ, the support distributions predicted by the rank function.
    pub fn s_predicted(&self) -> Result<IntMat> {
        product(&[&self.mob, &self.p, &self.kmat, &self.qmat])
    }

    /// A = FNᵀQ.
    pub fn a_predicted(&self) -> Result<IntMat> {
        product(&[&self.f, &self.nmat.transpose(), &self.qmat])
    }

    /// Identities that involve only the q-matroid.
    pub fn structural_checks(&self) -> Result<Vec<IdentityCheck>> {
        let len = self.p.rows();
        let nt = self.nmat.transpose();
        let mut out = vec![
            IdentityCheck::compare("P^2 = I", &self.p.mul(&self.p)?, &IntMat::identity(len)),
            IdentityCheck::compare("M M^-1 = I", &self.mob.mul(&self.mob_inv)?, &IntMat::identity(len)),
            IdentityCheck::compare("Q Q^-1 = I", &self.qmat.mul(&self.q_inv)?, &IntMat::identity(self.k + 1)),
            IdentityCheck::compare("F F^-1 = I", &self.f.mul(&self.f_inv)?, &IntMat::identity(self.n + 1)),
            IdentityCheck::compare("DPK = N^T", &product(&[&self.d, &self.p, &self.kmat])?, &nt),
            IdentityCheck::compare("FD = DM", &self.f.mul(&self.d)?, &self.d.mul(&self.mob)?),
            IdentityCheck::compare("D MPKQ = F N^T Q", &self.d.mul(&self.s_predicted()?)?, &self.a_predicted()?),
        ];
        // u Nᵀ vᵀ with u = (x^i), v = (y^{n−j+i−k}); negative y-exponents must carry zero coefficients.
        let mut r = BiPoly::zero();
        let mut bad = None;
        for i in 0..=self.k {
            for j in 0..=self.n {
                let c = self.nmat.get(i, j);
                let e = self.n as i64 - j as i64 + i as i64 - self.k as i64;
                if e < 0 {
                    if !c.is_zero() && bad.is_none() {
                        bad = Some((i, j));
                    }
                } else {
                    r.add_term(i as u32, e as u32, c.clone());
                }
            }
        }
        let holds = bad.is_none() && r == self.whitney.poly();
        out.push(IdentityCheck {
            name: "u N^T v^T = R".into(),
            holds,
            first_discrepancy: if holds { None } else { Some(bad.unwrap_or((0, 0))) },
        });
        Ok(out)
    }

    /// Identities against enumerated distributions (which must cover t = 0..=k).
    pub fn distribution_checks(&self, dist: &HigherDistributions, lattice_order: &[SubspaceId]) -> Result<Vec<IdentityCheck>> {
        if dist.t_max() != self.k {
            return Err(Error::InconsistentParameters("distributions must cover every t up to k".into()));
        }
        let s = IntMat::from_fn(lattice_order.len(), self.k + 1, |v, t| BigInt::from(dist.support_count(&lattice_order[v], t)));
        let a = dist.a_matrix();
        Ok(vec![
            IdentityCheck::compare("S = MPKQ", &s, &self.s_predicted()?),
            IdentityCheck::compare("K = P M^-1 S Q^-1", &self.kmat, &product(&[&self.p, &self.mob_inv, &s, &self.q_inv])?),
            IdentityCheck::compare("A = F N^T Q", &a, &self.a_predicted()?),
            IdentityCheck::compare("N^T = F^-1 A Q^-1", &self.nmat.transpose(), &product(&[&self.f_inv, &a, &self.q_inv])?),
            IdentityCheck::compare("A = DS", &a, &self.d.mul(&s)?),
        ])
    }
}

/// Builds the matrices for a code, enumerates all its subcodes and checks every identity.
pub fn verify_higher_identities(code: &RankMetricCode, budget: u128) -> Result<Vec<IdentityCheck>> {
    let mq = code.qmatroid()?;
    let mats = InvariantMatrices::build(&mq, code.m())?;
    let dist = code.higher_distributions(code.k(), budget)?;
    let lattice = mq.lattice()?;
    let mut checks = mats.structural_checks()?;
    checks.extend(mats.distribution_checks(&dist, lattice.subspaces())?);
    Ok(checks)
}

/// A_V^{(t)} = Σ_{W≤V} μ(W,V) [k − ρ(W^⊥), t]_{q^m}, computed from the rank function alone.
pub fn support_distribution_formula(mq: &QMatroid, m: usize, v: &SubspaceId, t: usize) -> Result<BigInt> {
    let lattice = mq.lattice()?;
    let ranks = mq.rank_vector()?;
    let vi = lattice.index_of(v).ok_or(Error::AmbientMismatch)?;
    let qm = num_traits::pow(BigInt::from(mq.q()), m);
    let mut total = BigInt::zero();
    for w in 0..lattice.len() {
        if lattice.dim(w) <= lattice.dim(vi) && lattice.leq(w, vi) {
            let r = ranks[lattice.perp_index(w)];
            total += lattice.mobius(w, vi) * gaussian_binomial_big((mq.k() - r) as i64, t as i64, &qm);
        }
    }
    Ok(total)
}

/// True iff the formula reproduces every enumerated A_V^{(t)}.
pub fn support_distribution_formula_check(code: &RankMetricCode, dist: &HigherDistributions, t: usize) -> Result<bool> {
    let mq = code.qmatroid()?;
    let lattice = mq.lattice()?;
    for v in lattice.subspaces() {
        if support_distribution_formula(&mq, code.m(), v, t)? != BigInt::from(dist.support_count(v, t)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The family u^{(t)}_{a,c} = Σ_i (−1)^e q^C(e,2) [k−a+c, n−i]_q [a,t]_{q^m} x^{n−i} y^i,
/// e = i−n+k−a+c, supported on 0 ≤ a ≤ k, 0 ≤ c ≤ n−k and zero elsewhere.
pub fn weight_enum_family(q: u32, m: u32, k: usize, n: usize, t: usize) -> SubstFamily {
    let qm = num_traits::pow(BigInt::from(q), m as usize);
    SubstFamily::generator(
        &format!("weight-enum-{t}"),
        move |a, c| a as usize <= k && c as usize <= n - k,
        move |a, c| {
            let (a, c) = (a as i64, c as i64);
            let (ki, ni) = (k as i64, n as i64);
            let ga = gaussian_binomial_big(a, t as i64, &qm);
            let mut p = BiPoly::zero();
            if ga.is_zero() {
                return p;
            }
            for i in 0..=ni {
                let e = i - ni + ki - a + c;
                let g = gaussian_binomial(ki - a + c, ni - i, q as u64);
                if e >= 0 && !g.is_zero() {
                    p.add_term((ni - i) as u32, i as u32, signed_qpow(e, q as u64) * g * &ga);
                }
            }
            p
        },
        Outside::Zero,
    )
}

/// The family û^{(t)}_{n−j,j} = Σ_{a≤t,c} (−1)^{t−a} q^{m·C(t−a,2)} [t,a]_{q^m} [n−j, k+c−a]_q x^a y^c,
/// supported on exponent pairs of total degree n.
pub fn whitney_family(q: u32, m: u32, k: usize, n: usize, t: usize) -> SubstFamily {
    let qm = num_traits::pow(BigInt::from(q), m as usize);
    SubstFamily::generator(
        &format!("whitney-from-enum-{t}"),
        move |i, j| (i + j) as usize == n,
        move |_, j| {
            let mut p = BiPoly::zero();
            for a in 0..=t.min(k) {
                let e = t - a;
                let coef = signed(e, num_traits::pow(qm.clone(), e * e.saturating_sub(1) / 2))
                    * gaussian_binomial_big(t as i64, a as i64, &qm);
                for c in 0..=(n - k) {
                    let g = gaussian_binomial((n - j as usize) as i64, (k + c - a) as i64, q as u64);
                    if !g.is_zero() {
                        p.add_term(a as u32, c as u32, &coef * g);
                    }
                }
            }
            p
        },
        Outside::Zero,
    )
}

/// W^{(t)} = Ω_{U^{(t)}}(R).
pub fn weight_enums_from_whitney(w: &WhitneyTable, m: u32, t: usize) -> Result<BiPoly> {
    if t > w.k() {
        return Err(Error::InconsistentParameters(format!("t = {t} exceeds k = {}", w.k())));
    }
    weight_enum_family(w.q(), m, w.k(), w.n(), t).apply(&w.poly())
}

/// R = Σ_t Ω_{Û^{(t)}}(W^{(t)}), given W^{(0)}, …, W^{(k)}.
pub fn whitney_from_weight_enums(enums: &[BiPoly], q: u32, m: u32, k: usize, n: usize) -> Result<WhitneyTable> {
    if k > n || enums.len() != k + 1 {
        return Err(Error::InconsistentParameters(format!(
            "need {} enumerators for k = {k}, n = {n}, got {}",
            k + 1,
            enums.len()
        )));
    }
    let mut r = BiPoly::zero();
    for (t, e) in enums.iter().enumerate() {
        if let Some((i, j, _)) = e.terms().find(|(i, j, _)| (i + j) as usize != n) {
            return Err(Error::MalformedEnumerator(format!("monomial x^{i}y^{j} is not of degree {n}")));
        }
        r += &whitney_family(q, m, k, n, t).apply(e)?;
    }
    WhitneyTable::from_poly(&r, q, k, n)
}

/// A^{(t)} column vectors predicted by the weight-coefficient formula, as an (n+1)×(k+1) matrix.
pub fn weight_matrix_from_whitney(w: &WhitneyTable, m: u32) -> IntMat {
    IntMat::from_fn(w.n() + 1, w.k() + 1, |i, t| w.weight_coefficient(m, i, t))
}

/// Sparse view of S keyed by subspace, sorted for stable output.
pub fn sorted_supports(dist: &HigherDistributions, t: usize) -> BTreeMap<SubspaceId, u64> {
    dist.supports(t).iter().map(|(k, v)| (k.clone(), *v)).collect()
}
