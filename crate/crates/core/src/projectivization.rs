//! Projectivization: classical matroids on projective points, the γ counts,
//! the simplex matrix, and transfer of Whitney functions and weight
//! enumerators between a q-matroid (or rank-metric code) and its projectivization.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf::{prime_field, FieldElement};
use crate::lattice::{gaussian_binomial, SubspaceId, DEFAULT_LATTICE_BUDGET};
use crate::linalg::Mat;
use crate::poly::{BiPoly, Outside, SubstFamily};
use crate::qmatroid::{signed_qpow, QMatroid, WhitneyTable};
use crate::rmcode::RankMetricCode;

/// Largest ground set for which [`ClassicalMatroid::whitney`] enumerates subsets.
pub const MAX_BRUTE_FORCE_GROUND: usize = 22;

/// ⟨n⟩_q = (q^n − 1)/(q − 1).
pub fn proj_size(n: usize, q: u32) -> BigInt {
    (num_traits::pow(BigInt::from(q), n) - 1) / (q - 1)
}

fn proj_size_u32(n: usize, q: u32) -> Result<u32> {
    proj_size(n, q).to_u32().ok_or(Error::BudgetExceeded {
        what: "projective points",
        needed: u128::MAX,
        budget: u32::MAX as u128,
    })
}

fn binomial_big(n: &BigInt, k: usize) -> BigInt {
    if n < &BigInt::from(k) {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Memoized γ_i^r(r): the number of i-sets of projective points of F_q^r that span F_q^r.
#[derive(Debug, Default)]
pub struct GammaTable {
    q: u32,
    memo: Mutex<HashMap<(usize, usize), BigInt>>,
}

impl GammaTable {
    pub fn new(q: u32) -> Self {
        GammaTable { q, memo: Mutex::new(HashMap::new()) }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// γ_i^r(r) = Σ_j [r,j]_q (−1)^j q^C(j,2) C(⟨r−j⟩_q, i).
    pub fn spanning(&self, i: usize, r: usize) -> BigInt {
        if let Some(v) = self.memo.lock().unwrap().get(&(i, r)) {
            return v.clone();
        }
        let q = self.q;
        let v = if i < r || BigInt::from(i) > proj_size(r, q) {
            BigInt::zero()
        } else {
            (0..=r)
                .map(|j| {
                    gaussian_binomial(r as i64, j as i64, q as u64)
                        * signed_qpow(j as i64, q as u64)
                        * binomial_big(&proj_size(r - j, q), i)
                })
                .sum()
        };
        self.memo.lock().unwrap().insert((i, r), v.clone());
        v
    }

    /// γ_i^r(n) = [n,r]_q γ_i^r(r): i-sets of points of F_q^n spanning an r-space.
    pub fn gamma(&self, i: usize, r: usize, n: usize) -> BigInt {
        gaussian_binomial(n as i64, r as i64, self.q as u64) * self.spanning(i, r)
    }
}

/// γ_i^r(n) with a fresh table.
pub fn gamma(i: usize, r: usize, n: usize, q: u32) -> BigInt {
    GammaTable::new(q).gamma(i, r, n)
}

/// Canonical representatives of the projective points of F_q^n in lattice order.
pub fn projective_points(n: usize, q: u32) -> Result<Vec<SubspaceId>> {
    let count = proj_size(n, q);
    let needed = u128::try_from(&count).unwrap_or(u128::MAX);
    if needed > DEFAULT_LATTICE_BUDGET {
        return Err(Error::BudgetExceeded { what: "projective points", needed, budget: DEFAULT_LATTICE_BUDGET });
    }
    let mut pts = Vec::with_capacity(needed as usize);
    for pivot in 0..n {
        crate::lattice::for_each_rref(q, n, &[pivot], |row| {
            pts.push(SubspaceId::span(q, n, &[row.to_vec()]).expect("row of length n"));
        });
    }
    pts.sort();
    Ok(pts)
}

/// S(n): one column per projective point of F_q^n.
pub fn simplex_matrix(n: usize, q: u32) -> Result<Mat> {
    let pts = projective_points(n, q)?;
    let field = prime_field(q)?;
    let mut s = Mat::zeros(&field, n, pts.len());
    for (j, p) in pts.iter().enumerate() {
        let row = &p.row_vecs()[0];
        for i in 0..n {
            s.set(i, j, FieldElement::from_code(row[i]));
        }
    }
    Ok(s)
}

/// Ĝ = G·S(n).
pub fn projectivize_code(code: &RankMetricCode) -> Result<Mat> {
    let s = simplex_matrix(code.n(), code.q())?.lift(code.field())?;
    code.generator().mul(&s)
}

/// φ(V) = {j : v_j ∉ V^⊥}, 0-based in the projective point order.
pub fn phi_map(v: &SubspaceId) -> Result<Vec<usize>> {
    let perp = v.perp();
    Ok(projective_points(v.n(), v.q())?
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.leq(&perp))
        .map(|(j, _)| j)
        .collect())
}

#[derive(Clone, Debug)]
pub enum ClassicalOracle {
    /// r(A) = rank of the columns of the matrix indexed by A.
    Vector(Mat),
    /// r(A) = ρ(⟨A⟩) on the projective points of the q-matroid's ground space.
    Projectivized { qmatroid: Arc<QMatroid>, points: Vec<SubspaceId> },
}

/// A matroid on {0, …, N−1}.
#[derive(Clone, Debug)]
pub struct ClassicalMatroid {
    ground: usize,
    rank: usize,
    oracle: ClassicalOracle,
}

impl ClassicalMatroid {
    pub fn vector(m: Mat) -> Self {
        ClassicalMatroid { ground: m.cols(), rank: m.rank(), oracle: ClassicalOracle::Vector(m) }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn rank_full(&self) -> usize {
        self.rank
    }

    pub fn oracle(&self) -> &ClassicalOracle {
        &self.oracle
    }

    pub fn rank(&self, subset: &[usize]) -> Result<usize> {
        if let Some(&bad) = subset.iter().find(|&&i| i >= self.ground) {
            return Err(Error::DimensionMismatch(format!("element {bad} outside ground set of size {}", self.ground)));
        }
        if subset.is_empty() {
            return Ok(0);
        }
        match &self.oracle {
            ClassicalOracle::Vector(m) => {
                let rows = (0..m.rows()).map(|r| subset.iter().map(|&c| m.get(r, c)).collect()).collect();
                Ok(Mat::from_rows(m.field(), subset.len(), rows)?.rank())
            }
            ClassicalOracle::Projectivized { qmatroid, points } => {
                let rows: Vec<Vec<u32>> = subset.iter().map(|&i| points[i].row_vecs().remove(0)).collect();
                qmatroid.rank(&SubspaceId::span(qmatroid.q(), qmatroid.n(), &rows)?)
            }
        }
    }

    fn rank_mask(&self, mask: u64) -> Result<usize> {
        let subset: Vec<usize> = (0..self.ground).filter(|i| mask >> i & 1 == 1).collect();
        self.rank(&subset)
    }

    /// R(x, y) = Σ_A x^{K − r(A)} y^{|A| − r(A)} by enumeration of all subsets.
    pub fn whitney(&self) -> Result<BiPoly> {
        if self.ground > MAX_BRUTE_FORCE_GROUND {
            return Err(Error::BudgetExceeded {
                what: "classical subsets",
                needed: 1u128 << self.ground,
                budget: 1u128 << MAX_BRUTE_FORCE_GROUND,
            });
        }
        let k = self.rank;
        let term = |mask: u64| -> Result<(u32, u32)> {
            let r = self.rank_mask(mask)?;
            Ok(((k - r) as u32, mask.count_ones() - r as u32))
        };
        let total = 1u64 << self.ground;
        #[cfg(feature = "parallel")]
        let exps: Result<Vec<(u32, u32)>> = {
            use rayon::prelude::*;
            (0..total).into_par_iter().map(term).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let exps: Result<Vec<(u32, u32)>> = (0..total).map(term).collect();
        let mut counts: HashMap<(u32, u32), u64> = HashMap::new();
        for e in exps? {
            *counts.entry(e).or_insert(0) += 1;
        }
        let mut r = BiPoly::zero();
        for ((i, j), c) in counts {
            r.add_term(i, j, BigInt::from(c));
        }
        Ok(r)
    }
}

/// P M: the matroid on projective points with r(A) = ρ(⟨A⟩).
pub fn projectivize_qmatroid(m: &QMatroid) -> Result<ClassicalMatroid> {
    let points = projective_points(m.n(), m.q())?;
    Ok(ClassicalMatroid {
        ground: points.len(),
        rank: m.k(),
        oracle: ClassicalOracle::Projectivized { qmatroid: Arc::new(m.clone()), points },
    })
}

/// g_{i,j} = x^i Σ_{ℓ=r}^{⟨r⟩_q} γ_ℓ^r(r) y^{ℓ+i−k}, r = j+k−i, on 0 ≤ i ≤ k.
pub fn projectivization_family(q: u32, k: usize) -> SubstFamily {
    let table = Arc::new(GammaTable::new(q));
    SubstFamily::generator(
        "projectivize",
        move |i, _| i as usize <= k,
        move |i, j| {
            let r = j as usize + k - i as usize;
            let top = proj_size(r, q).to_usize().expect("projective size fits in usize");
            let mut p = BiPoly::zero();
            for l in r..=top {
                p.add_term(i, (l + i as usize - k) as u32, table.spanning(l, r));
            }
            p
        },
        Outside::Error,
    )
}

/// R_{PM} = Ω_G(R_M).
pub fn whitney_projectivize(w: &WhitneyTable) -> Result<BiPoly> {
    projectivization_family(w.q(), w.k()).apply(&w.poly())
}

/// Solves the lower-triangular block ℓ = 0..=n−k of
/// μ_{i,ℓ} = Σ_j ν_{i,j} γ_{ℓ+k−i}^{j+k−i}(j+k−i), ignoring every other coefficient.
pub fn deprojectivize_lower(r_pm: &BiPoly, q: u32, k: usize, n: usize) -> Result<WhitneyTable> {
    if k > n {
        return Err(Error::InconsistentParameters(format!("rank {k} exceeds n = {n}")));
    }
    let g = GammaTable::new(q);
    let mut nu = vec![vec![BigInt::zero(); n - k + 1]; k + 1];
    for (i, row) in nu.iter_mut().enumerate() {
        for l in 0..=(n - k) {
            let mut rhs = r_pm.coeff(i as u32, l as u32);
            for (j, val) in row.iter().enumerate().take(l) {
                rhs -= val * g.spanning(l + k - i, j + k - i);
            }
            let diag = g.spanning(l + k - i, l + k - i);
            let (quot, rem) = rhs.div_rem(&diag);
            if !rem.is_zero() {
                return Err(Error::NotInImage(format!(
                    "coefficient of x^{i}y^{l} is not divisible by γ = {diag}"
                )));
            }
            row[l] = quot;
        }
    }
    WhitneyTable::new(q, k, n, nu)
}

/// R_M from R_{PM}; every coefficient outside the solved block is verified.
pub fn whitney_deprojectivize(r_pm: &BiPoly, q: u32, k: usize, n: usize) -> Result<WhitneyTable> {
    let w = deprojectivize_lower(r_pm, q, k, n)?;
    let back = whitney_projectivize(&w)?;
    if &back != r_pm {
        let diff = &back - r_pm;
        let (i, j, _) = diff.terms().next().expect("nonzero difference");
        return Err(Error::NotInImage(format!("coefficient of x^{i}y^{j} does not match")));
    }
    Ok(w)
}

fn exponent_table(n: usize, q: u32) -> Result<Vec<u32>> {
    (0..=n).map(|a| proj_size_u32(a, q)).collect()
}

/// x^{n−i} y^i ↦ x^{⟨n−i⟩_q} y^{⟨n⟩_q − ⟨n−i⟩_q}.
pub fn hamming_from_rank_enum(w: &BiPoly, n: usize, q: u32) -> Result<BiPoly> {
    let sizes = exponent_table(n, q)?;
    let mut out = BiPoly::zero();
    for (a, i, c) in w.terms() {
        if (a + i) as usize != n {
            return Err(Error::MalformedEnumerator(format!("monomial x^{a}y^{i} is not of degree {n}")));
        }
        out.add_term(sizes[a as usize], sizes[n] - sizes[a as usize], c.clone());
    }
    Ok(out)
}

/// Inverse of [`hamming_from_rank_enum`].
pub fn rank_from_hamming_enum(w: &BiPoly, n: usize, q: u32) -> Result<BiPoly> {
    let sizes = exponent_table(n, q)?;
    let mut out = BiPoly::zero();
    for (x, y, c) in w.terms() {
        let a = sizes
            .iter()
            .position(|&s| s == x)
            .filter(|&a| sizes[n] - sizes[a] == y)
            .ok_or_else(|| Error::MalformedEnumerator(format!("monomial x^{x}y^{y} is not of the form x^<a> y^(<n>-<a>)")))?;
        out.add_term(a as u32, (n - a) as u32, c.clone());
    }
    Ok(out)
}

/// Exponent pairs used by the transfer: (i, ⟨n−i⟩_q, ⟨n⟩_q − ⟨n−i⟩_q).
pub fn exponent_mapping(n: usize, q: u32) -> Result<Vec<(usize, u32, u32)>> {
    let sizes = exponent_table(n, q)?;
    Ok((0..=n).map(|i| (i, sizes[n - i], sizes[n] - sizes[n - i])).collect())
}

/// Hamming support of the span of `basis`: coordinates where some row is nonzero.
pub fn hamming_support(basis: &[Vec<FieldElement>]) -> Vec<usize> {
    let len = basis.first().map_or(0, |r| r.len());
    (0..len).filter(|&j| basis.iter().any(|r| !r[j].is_zero())).collect()
}

/// Σ over t-dimensional subcodes D of x^{N − |supp_H(D)|} y^{|supp_H(D)|}.
pub fn hamming_enumerator(gen: &Mat, t: usize, budget: u128) -> Result<BiPoly> {
    let code = RankMetricCode::new(gen.clone())?;
    let big_n = gen.cols() as u32;
    let mut counts: HashMap<u32, u64> = HashMap::new();
    code.for_each_subcode(t, budget, |basis| {
        *counts.entry(hamming_support(&basis).len() as u32).or_insert(0) += 1;
    })?;
    let mut p = BiPoly::zero();
    for (w, c) in counts {
        p.add_term(big_n - w, w, BigInt::from(c));
    }
    Ok(p)
}
