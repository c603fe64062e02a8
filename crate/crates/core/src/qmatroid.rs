//! q-matroids: rank oracles, Whitney functions, characteristic and Tutte
//! polynomials, closure and flats.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gf::{prime_field, FieldElement};
use crate::lattice::{
    gaussian_binomial, gaussian_binomial_big, mobius_interval, shared_lattice, LatticeIndex, SubspaceId,
    DEFAULT_LATTICE_BUDGET,
};
use crate::linalg::{psi_expand, rank_product, Mat};
use crate::poly::{BiPoly, Outside, SubstFamily};

pub const DEFAULT_EXTENSION_CAP: u32 = 64;

/// How ranks are obtained.
#[derive(Clone, Debug)]
pub enum Oracle {
    /// ρ(V) = rk(G Yᵀ) for a basis Y of V.
    Represented(Mat),
    /// ρ(V) = min(k, dim V).
    Uniform,
    /// ρ(V) = k - 1 on spread members, min(k, dim V) elsewhere.
    Spread(Vec<SubspaceId>),
    /// Rank 2: ρ(V) = 1 for nonzero V inside a member, 2 for V not inside any member.
    MixedSpread(Vec<SubspaceId>),
    /// Explicit ranks for every subspace.
    Table(Arc<HashMap<SubspaceId, usize>>),
}

impl Oracle {
    pub fn kind(&self) -> &'static str {
        match self {
            Oracle::Represented(_) => "represented",
            Oracle::Uniform => "uniform",
            Oracle::Spread(_) => "spread",
            Oracle::MixedSpread(_) => "mixed_spread",
            Oracle::Table(_) => "table",
        }
    }
}

pub struct QMatroid {
    q: u32,
    n: usize,
    k: usize,
    oracle: Oracle,
    lattice_budget: u128,
    memo: RwLock<HashMap<SubspaceId, usize>>,
    ranks: OnceLock<Arc<Vec<usize>>>,
}

impl Clone for QMatroid {
    fn clone(&self) -> Self {
        QMatroid {
            q: self.q,
            n: self.n,
            k: self.k,
            oracle: self.oracle.clone(),
            lattice_budget: self.lattice_budget,
            memo: RwLock::new(HashMap::new()),
            ranks: self.ranks.clone(),
        }
    }
}

impl fmt::Debug for QMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QMatroid")
            .field("q", &self.q)
            .field("n", &self.n)
            .field("k", &self.k)
            .field("kind", &self.oracle.kind())
            .finish()
    }
}

/// Checks that the nonzero vectors of `members` partition F_q^n \ {0}.
pub(crate) fn check_partition(q: u32, n: usize, members: &[SubspaceId]) -> Result<()> {
    let total = (q as u64).pow(n as u32) - 1;
    let mut seen = HashSet::new();
    for (idx, m) in members.iter().enumerate() {
        if m.q() != q || m.n() != n {
            return Err(Error::AmbientMismatch);
        }
        if m.dim() == 0 {
            return Err(Error::InvalidSpread(format!("member {idx} is the zero space")));
        }
        for v in m.vector_codes().into_iter().filter(|&v| v != 0) {
            if !seen.insert(v) {
                return Err(Error::InvalidSpread(format!(
                    "member {idx} meets an earlier member nontrivially"
                )));
            }
        }
    }
    if seen.len() as u64 != total {
        return Err(Error::InvalidSpread(format!(
            "members cover {} of the {total} nonzero vectors",
            seen.len()
        )));
    }
    Ok(())
}

impl QMatroid {
    fn build(q: u32, n: usize, k: usize, oracle: Oracle) -> Self {
        QMatroid {
            q,
            n,
            k,
            oracle,
            lattice_budget: DEFAULT_LATTICE_BUDGET,
            memo: RwLock::new(HashMap::new()),
            ranks: OnceLock::new(),
        }
    }

    /// The q-matroid of the row space of G over F_{q^m}; its rank is rk(G).
    pub fn represented(g: Mat) -> Result<Self> {
        let q = g.field().q();
        let n = g.cols();
        let k = g.rank();
        Ok(QMatroid::build(q, n, k, Oracle::Represented(g)))
    }

    pub fn uniform(q: u32, k: usize, n: usize) -> Result<Self> {
        prime_field(q)?;
        if k > n {
            return Err(Error::InconsistentParameters(format!("rank {k} exceeds n = {n}")));
        }
        Ok(QMatroid::build(q, n, k, Oracle::Uniform))
    }

    /// Spread q-matroid of a k-spread, 2 ≤ k < n.
    pub fn spread(q: u32, n: usize, members: Vec<SubspaceId>) -> Result<Self> {
        prime_field(q)?;
        let k = members.first().map(|m| m.dim()).ok_or_else(|| Error::InvalidSpread("no members".into()))?;
        if members.iter().any(|m| m.dim() != k) {
            return Err(Error::InvalidSpread("members of different dimensions".into()));
        }
        if k < 2 || k >= n {
            return Err(Error::InvalidSpread(format!("member dimension {k} must satisfy 2 <= k < n = {n}")));
        }
        if !n.is_multiple_of(k) {
            return Err(Error::NonDividing { k, n });
        }
        check_partition(q, n, &members)?;
        let mut members = members;
        members.sort();
        Ok(QMatroid::build(q, n, k, Oracle::Spread(members)))
    }

    /// Rank-2 q-matroid whose proper nontrivial flats are the members of a mixed spread.
    pub fn mixed_spread(q: u32, n: usize, members: Vec<SubspaceId>) -> Result<Self> {
        prime_field(q)?;
        if members.len() < 2 {
            return Err(Error::InvalidSpread("a mixed spread needs at least two members".into()));
        }
        check_partition(q, n, &members)?;
        let mut members = members;
        members.sort();
        Ok(QMatroid::build(q, n, 2, Oracle::MixedSpread(members)))
    }

    /// Explicit rank table; every subspace must be present and the axioms are checked exhaustively.
    pub fn from_table(q: u32, n: usize, ranks: HashMap<SubspaceId, usize>) -> Result<Self> {
        let lattice = shared_lattice(q, n, DEFAULT_LATTICE_BUDGET)?;
        let mut vec = Vec::with_capacity(lattice.len());
        for s in lattice.subspaces() {
            let r = ranks.get(s).ok_or_else(|| {
                Error::InconsistentParameters(format!("rank table misses subspace {:?}", s.row_vecs()))
            })?;
            vec.push(*r);
        }
        if ranks.len() != lattice.len() {
            return Err(Error::InconsistentParameters("rank table has foreign entries".into()));
        }
        let k = vec[lattice.len() - 1];
        let m = QMatroid::build(q, n, k, Oracle::Table(Arc::new(ranks)));
        let _ = m.ranks.set(Arc::new(vec));
        m.check_axioms_exhaustive()?;
        Ok(m)
    }

    /// Table oracle built from an arbitrary rank function, checked like [`QMatroid::from_table`].
    pub fn from_rank_fn(q: u32, n: usize, f: impl Fn(&SubspaceId) -> usize) -> Result<Self> {
        let lattice = shared_lattice(q, n, DEFAULT_LATTICE_BUDGET)?;
        let ranks = lattice.subspaces().iter().map(|s| (s.clone(), f(s))).collect();
        QMatroid::from_table(q, n, ranks)
    }

    /// Image under the ambient automorphism v ↦ v·alpha, as a table oracle.
    pub fn transported(&self, alpha: &Mat) -> Result<QMatroid> {
        if alpha.rows() != self.n || alpha.cols() != self.n || alpha.field().q() != self.q || alpha.field().m() != 1 {
            return Err(Error::DimensionMismatch("ambient map must be n x n over F_q".into()));
        }
        if alpha.rank() != self.n {
            return Err(Error::InconsistentParameters("ambient map is not invertible".into()));
        }
        let lattice = self.lattice()?;
        let ranks = self.rank_vector()?;
        let mut table = HashMap::with_capacity(lattice.len());
        let mut vec = vec![0usize; lattice.len()];
        for (i, s) in lattice.subspaces().iter().enumerate() {
            let image = if s.dim() == 0 {
                s.clone()
            } else {
                SubspaceId::from_mat(&s.to_mat().mul(alpha)?)
            };
            vec[lattice.index_of(&image).expect("image lies in the lattice")] = ranks[i];
            table.insert(image, ranks[i]);
        }
        let m = QMatroid::build(self.q, self.n, self.k, Oracle::Table(Arc::new(table)));
        let _ = m.ranks.set(Arc::new(vec));
        Ok(m)
    }

    pub fn with_lattice_budget(mut self, budget: u128) -> Self {
        self.lattice_budget = budget;
        self
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the full space.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn lattice(&self) -> Result<Arc<LatticeIndex>> {
        shared_lattice(self.q, self.n, self.lattice_budget)
    }

    pub fn rank(&self, v: &SubspaceId) -> Result<usize> {
        if v.q() != self.q || v.n() != self.n {
            return Err(Error::AmbientMismatch);
        }
        if let Some(&r) = self.memo.read().unwrap().get(v) {
            return Ok(r);
        }
        let r = match &self.oracle {
            Oracle::Represented(g) => rank_product(g, &v.to_mat())?,
            Oracle::Uniform => v.dim().min(self.k),
            Oracle::Spread(members) => {
                if members.binary_search(v).is_ok() {
                    self.k - 1
                } else {
                    v.dim().min(self.k)
                }
            }
            Oracle::MixedSpread(members) => {
                if v.dim() == 0 {
                    0
                } else if members.iter().any(|m| v.leq(m)) {
                    1
                } else {
                    2
                }
            }
            Oracle::Table(t) => *t.get(v).ok_or(Error::AmbientMismatch)?,
        };
        if matches!(self.oracle, Oracle::Represented(_)) {
            self.memo.write().unwrap().insert(v.clone(), r);
        }
        Ok(r)
    }

    /// Ranks of all subspaces, indexed by the lattice order.
    pub fn rank_vector(&self) -> Result<Arc<Vec<usize>>> {
        if let Some(r) = self.ranks.get() {
            return Ok(r.clone());
        }
        let lattice = self.lattice()?;
        #[cfg(feature = "parallel")]
        let ranks: Result<Vec<usize>> = {
            use rayon::prelude::*;
            lattice.subspaces().par_iter().map(|s| self.rank(s)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let ranks: Result<Vec<usize>> = lattice.subspaces().iter().map(|s| self.rank(s)).collect();
        let ranks = Arc::new(ranks?);
        Ok(self.ranks.get_or_init(|| ranks).clone())
    }

    /// ρ(V) from the F_q-dimension of the shortened code {M ∈ C̃ : rowsp(M) ≤ V^⊥},
    /// where C̃ is the F_q-space of m×n matrices Ψ(c), c ∈ C.
    pub fn rank_via_shortening(&self, v: &SubspaceId) -> Result<usize> {
        let Oracle::Represented(g) = &self.oracle else {
            return Err(Error::NotRepresented);
        };
        if v.q() != self.q || v.n() != self.n {
            return Err(Error::AmbientMismatch);
        }
        if v.dim() == 0 {
            return Ok(0);
        }
        let field = g.field();
        let m = field.m();
        let base = prime_field(self.q)?;
        let yt = v.to_mat().transpose();
        // Each basis matrix of C̃ is mapped to the flattened product Ψ(ω^s g_r) Yᵀ;
        // the rank of the resulting map is dim C̃ - dim C̃(V^⊥).
        let d = v.dim();
        let mut rows = Vec::new();
        for r in 0..g.rows() {
            for s in 0..m {
                let ws = field.pow(field.generator(), s as u64);
                let scaled: Vec<FieldElement> = g.row(r).iter().map(|&x| field.mul(ws, x)).collect();
                let psi = psi_expand(&scaled, field);
                let prod = psi.mul(&yt)?;
                rows.push((0..m).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| prod.get(i, j)).collect());
            }
        }
        let rank = Mat::from_rows(&base, m * d, rows)?.rank();
        if rank % m != 0 {
            return Err(Error::NonIntegerRank { numerator: rank, m });
        }
        Ok(rank / m)
    }

    /// Checks boundedness, monotonicity and submodularity on the given index pairs.
    pub fn check_axioms_on_pairs(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<()> {
        let lattice = self.lattice()?;
        let ranks = self.rank_vector()?;
        for (i, &r) in ranks.iter().enumerate() {
            if r > lattice.dim(i) {
                return Err(Error::AxiomViolation {
                    axiom: "R1",
                    detail: format!("rank {r} exceeds dimension of subspace #{i}"),
                });
            }
        }
        for (i, j) in pairs {
            let (v, w) = (lattice.get(i), lattice.get(j));
            if lattice.leq(i, j) && ranks[i] > ranks[j] {
                return Err(Error::AxiomViolation {
                    axiom: "R2",
                    detail: format!("subspace #{i} <= #{j} but rank drops"),
                });
            }
            let s = lattice.index_of(&v.sum(w)?).expect("sum is in the lattice");
            let m = lattice.index_of(&v.intersection(w)?).expect("meet is in the lattice");
            if ranks[s] + ranks[m] > ranks[i] + ranks[j] {
                return Err(Error::AxiomViolation {
                    axiom: "R3",
                    detail: format!("submodularity fails for subspaces #{i}, #{j}"),
                });
            }
        }
        Ok(())
    }

    pub fn check_axioms_exhaustive(&self) -> Result<()> {
        let len = self.lattice()?.len();
        self.check_axioms_on_pairs((0..len).flat_map(|i| (i..len).map(move |j| (i, j))))?;
        self.check_axioms_on_pairs((0..len).flat_map(|i| (0..i).map(move |j| (i, j))))
    }

    pub fn whitney(&self) -> Result<WhitneyTable> {
        let lattice = self.lattice()?;
        let ranks = self.rank_vector()?;
        let mut nu = vec![vec![BigInt::zero(); self.n - self.k + 1]; self.k + 1];
        for (i, &r) in ranks.iter().enumerate() {
            let d = lattice.dim(i);
            if r > self.k || d < r || d - r > self.n - self.k {
                return Err(Error::AxiomViolation {
                    axiom: "R2",
                    detail: format!("subspace #{i} has rank {r} and dimension {d} outside the Whitney range"),
                });
            }
            nu[self.k - r][d - r] += 1;
        }
        WhitneyTable::new(self.q, self.k, self.n, nu)
    }

    /// χ = Σ_V μ(0, V) x^{k - ρ(V)}.
    pub fn char_poly_direct(&self) -> Result<BiPoly> {
        let lattice = self.lattice()?;
        let ranks = self.rank_vector()?;
        let mut out = BiPoly::zero();
        for (i, &r) in ranks.iter().enumerate() {
            out.add_term((self.k - r) as u32, 0, mobius_interval(self.q, lattice.dim(i)));
        }
        Ok(out)
    }

    /// cl(V): V plus every point whose adjunction keeps the rank.
    pub fn closure(&self, v: &SubspaceId) -> Result<SubspaceId> {
        let lattice = self.lattice()?;
        let r = self.rank(v)?;
        let mut cl = v.clone();
        for p in lattice.of_dim(1) {
            let point = lattice.get(p);
            if point.leq(v) {
                continue;
            }
            if self.rank(&v.sum(point)?)? == r {
                cl = cl.sum(point)?;
            }
        }
        Ok(cl)
    }

    /// Lattice indices of all flats: subspaces every upper cover of which has larger rank.
    pub fn flats(&self) -> Result<Vec<usize>> {
        let lattice = self.lattice()?;
        let ranks = self.rank_vector()?;
        let is_flat = |i: usize| {
            let d = lattice.dim(i);
            d == self.n || lattice.of_dim(d + 1).filter(|&j| lattice.leq(i, j)).all(|j| ranks[j] > ranks[i])
        };
        #[cfg(feature = "parallel")]
        let flats = {
            use rayon::prelude::*;
            (0..lattice.len()).into_par_iter().filter(|&i| is_flat(i)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let flats = (0..lattice.len()).filter(|&i| is_flat(i)).collect();
        Ok(flats)
    }
}

/// The coefficient table ν_{i,j} of a Whitney function Σ ν_{i,j} x^i y^j,
/// with 0 ≤ i ≤ k and 0 ≤ j ≤ n - k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhitneyTable {
    q: u32,
    k: usize,
    n: usize,
    nu: Vec<Vec<BigInt>>,
}

fn sign_qpow(e: i64, q: &BigInt) -> BigInt {
    if e < 0 {
        return BigInt::zero();
    }
    let v = num_traits::pow(q.clone(), (e * (e - 1) / 2) as usize);
    if e % 2 == 1 {
        -v
    } else {
        v
    }
}

/// (−1)^e q^C(e,2) for e ≥ 0, with q given as a machine integer.
pub fn signed_qpow(e: i64, q: u64) -> BigInt {
    sign_qpow(e, &BigInt::from(q))
}

impl WhitneyTable {
    pub fn new(q: u32, k: usize, n: usize, nu: Vec<Vec<BigInt>>) -> Result<Self> {
        if k > n || nu.len() != k + 1 || nu.iter().any(|r| r.len() != n - k + 1) {
            return Err(Error::InconsistentParameters(format!(
                "Whitney table must be {} x {}",
                k + 1,
                n.saturating_sub(k) + 1
            )));
        }
        Ok(WhitneyTable { q, k, n, nu })
    }

    /// Reads ν from a polynomial; every monomial must satisfy i ≤ k, j ≤ n - k.
    pub fn from_poly(poly: &BiPoly, q: u32, k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InconsistentParameters(format!("rank {k} exceeds n = {n}")));
        }
        let mut nu = vec![vec![BigInt::zero(); n - k + 1]; k + 1];
        for (i, j, c) in poly.terms() {
            if i as usize > k || j as usize > n - k {
                return Err(Error::InconsistentParameters(format!(
                    "monomial x^{i}y^{j} out of range for k = {k}, n = {n}"
                )));
            }
            nu[i as usize][j as usize] = c.clone();
        }
        Ok(WhitneyTable { q, k, n, nu })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self, i: usize, j: usize) -> &BigInt {
        &self.nu[i][j]
    }

    /// ν_{i,j}, zero outside the table.
    pub fn nu_or_zero(&self, i: i64, j: i64) -> BigInt {
        if i < 0 || j < 0 || i as usize > self.k || j as usize > self.n - self.k {
            BigInt::zero()
        } else {
            self.nu[i as usize][j as usize].clone()
        }
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.nu
    }

    pub fn nu_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.nu[i][j]
    }

    pub fn poly(&self) -> BiPoly {
        let mut p = BiPoly::zero();
        for (i, row) in self.nu.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                p.add_term(i as u32, j as u32, c.clone());
            }
        }
        p
    }

    /// R(1, 1), the number of subspaces for a genuine Whitney function.
    pub fn total(&self) -> BigInt {
        self.nu.iter().flatten().sum()
    }

    /// χ = (−1)^k Ω_G(R) with g_{i,j} = q^C(k+j−i, 2) (−x)^i (−1)^j.
    pub fn char_poly(&self) -> Result<BiPoly> {
        let chi = charpoly_family(self.q, self.k).apply(&self.poly())?;
        Ok(if self.k % 2 == 1 { -chi } else { chi })
    }

    /// T = Ω_B(R).
    pub fn tutte(&self) -> Result<BiPoly> {
        tutte_families(self.q).1.apply(&self.poly())
    }

    /// The value of the weight-coefficient formula
    /// Σ_{a,c} (−1)^e q^C(e,2) [k−a+c, n−i]_q [a, t]_{q^m} ν_{a,c}, e = i−n+k−a+c.
    /// For a representable table this is A_i^{(t)} of any representing code over F_{q^m}.
    pub fn weight_coefficient(&self, m: u32, i: usize, t: usize) -> BigInt {
        let q = BigInt::from(self.q);
        let qm = num_traits::pow(q.clone(), m as usize);
        let (n, k) = (self.n as i64, self.k as i64);
        let mut total = BigInt::zero();
        for a in 0..=k {
            let ga = gaussian_binomial_big(a, t as i64, &qm);
            if ga.is_zero() {
                continue;
            }
            for c in 0..=(n - k) {
                let nu = &self.nu[a as usize][c as usize];
                if nu.is_zero() {
                    continue;
                }
                let gb = gaussian_binomial_big(k - a + c, n - i as i64, &q);
                if gb.is_zero() {
                    continue;
                }
                total += sign_qpow(i as i64 - n + k - a + c, &q) * gb * &ga * nu;
            }
        }
        total
    }

    /// Left-hand sides of the identity Σ_{a,c} ν_{a,c} (−1)^e q^C(e,2) [k+c−a, ℓ]_q,
    /// e = k+c−a−ℓ, for ℓ = 0..=n. A Whitney function gives δ_{ℓ,n}.
    pub fn delta_identity_values(&self) -> Vec<BigInt> {
        let q = BigInt::from(self.q);
        let (n, k) = (self.n as i64, self.k as i64);
        (0..=n)
            .map(|l| {
                let mut s = BigInt::zero();
                for a in 0..=k {
                    for c in 0..=(n - k) {
                        let nu = &self.nu[a as usize][c as usize];
                        if nu.is_zero() {
                            continue;
                        }
                        let g = gaussian_binomial_big(k + c - a, l, &q);
                        if !g.is_zero() {
                            s += nu * sign_qpow(k + c - a - l, &q) * g;
                        }
                    }
                }
                s
            })
            .collect()
    }

    pub fn whitney_delta_identity(&self) -> bool {
        let n = self.n;
        self.delta_identity_values()
            .iter()
            .enumerate()
            .all(|(l, v)| if l == n { v.is_one() } else { v.is_zero() })
    }

    /// Smallest m ≥ 1 for which every weight coefficient is non-negative.
    pub fn min_extension_degree(&self, cap: u32) -> Result<u32> {
        (1..=cap)
            .find(|&m| {
                (0..=self.n).all(|i| (0..=self.k).all(|t| !self.weight_coefficient(m, i, t).is_negative()))
            })
            .ok_or(Error::CapExceeded(cap))
    }
}

/// The family g_{i,j} = q^C(k+j−i, 2) (−x)^i (−1)^j, defined for i ≤ k.
pub fn charpoly_family(q: u32, k: usize) -> SubstFamily {
    SubstFamily::generator(
        "charpoly",
        move |i, _| i as usize <= k,
        move |i, j| {
            let e = (k as i64 + j as i64 - i as i64) as usize;
            let c = num_traits::pow(BigInt::from(q), e * e.saturating_sub(1) / 2);
            let sign = if (i + j) % 2 == 1 { -c } else { c };
            BiPoly::monomial(i, 0, sign)
        },
        Outside::Error,
    )
}

/// α(i,j;a,b) = [i,a]_q [j,b]_q q^{(i−a)(j−b)}.
pub fn tutte_alpha(q: u32, i: u32, j: u32, a: u32, b: u32) -> BigInt {
    if a > i || b > j {
        return BigInt::zero();
    }
    let q64 = q as u64;
    gaussian_binomial(i as i64, a as i64, q64)
        * gaussian_binomial(j as i64, b as i64, q64)
        * num_traits::pow(BigInt::from(q), ((i - a) * (j - b)) as usize)
}

/// β(i,j;a,b) = (−1)^{(i−a)+(j−b)} [i,a]_q [j,b]_q q^C(|d|,2) (1 + q^|d| − q^max(i−a, j−b)),
/// d = (i−a) − (j−b).
pub fn tutte_beta(q: u32, i: u32, j: u32, a: u32, b: u32) -> BigInt {
    if a > i || b > j {
        return BigInt::zero();
    }
    let (s, t) = (i - a, j - b);
    let d = (s as i64 - t as i64).unsigned_abs() as usize;
    let qb = BigInt::from(q);
    let bracket = BigInt::one() + num_traits::pow(qb.clone(), d) - num_traits::pow(qb.clone(), s.max(t) as usize);
    let q64 = q as u64;
    let v = gaussian_binomial(i as i64, a as i64, q64)
        * gaussian_binomial(j as i64, b as i64, q64)
        * num_traits::pow(qb, d * d.saturating_sub(1) / 2)
        * bracket;
    if (s + t) % 2 == 1 {
        -v
    } else {
        v
    }
}

/// The mutually inverse families (A, B) with A_{i,j} = Σ α(i,j;a,b) x^a y^b and
/// B_{i,j} = Σ β(i,j;a,b) x^a y^b.
pub fn tutte_families(q: u32) -> (SubstFamily, SubstFamily) {
    let build = |f: fn(u32, u32, u32, u32, u32) -> BigInt| {
        move |i: u32, j: u32| {
            let mut p = BiPoly::zero();
            for a in 0..=i {
                for b in 0..=j {
                    p.add_term(a, b, f(q, i, j, a, b));
                }
            }
            p
        }
    };
    (
        SubstFamily::generator("tutte-A", |_, _| true, build(tutte_alpha), Outside::Error),
        SubstFamily::generator("tutte-B", |_, _| true, build(tutte_beta), Outside::Error),
    )
}
