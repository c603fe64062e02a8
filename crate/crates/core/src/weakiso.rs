//! Lattices of flats, weak isomorphism, dr-bijections, and spread constructions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::lattice::{for_each_rref, shared_lattice, SubspaceId, DEFAULT_LATTICE_BUDGET};
use crate::qmatroid::QMatroid;

pub const DEFAULT_SEARCH_NODES: u64 = 10_000_000;

/// The flats of a q-matroid with their labels, cover relation, and join/meet tables.
#[derive(Clone, Debug)]
pub struct FlatLattice {
    flats: Vec<SubspaceId>,
    dims: Vec<usize>,
    ranks: Vec<usize>,
    leq: Vec<Vec<bool>>,
    covers: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
}

impl FlatLattice {
    pub fn new(m: &QMatroid) -> Result<Self> {
        let lattice = m.lattice()?;
        let all_ranks = m.rank_vector()?;
        let mut idx = m.flats()?;
        // Sort by rank, then by the lattice order.
        idx.sort_by_key(|&i| (all_ranks[i], i));
        let flats: Vec<SubspaceId> = idx.iter().map(|&i| lattice.get(i).clone()).collect();
        let dims: Vec<usize> = idx.iter().map(|&i| lattice.dim(i)).collect();
        let ranks: Vec<usize> = idx.iter().map(|&i| all_ranks[i]).collect();
        let len = flats.len();
        let leq: Vec<Vec<bool>> = (0..len).map(|a| (0..len).map(|b| lattice.leq(idx[a], idx[b])).collect()).collect();
        let covers = (0..len)
            .map(|a| (0..len).filter(|&b| leq[a][b] && ranks[b] == ranks[a] + 1).collect())
            .collect();
        let pick = |a: usize, b: usize, upper: bool| -> usize {
            let cands = (0..len).filter(|&c| if upper { leq[a][c] && leq[b][c] } else { leq[c][a] && leq[c][b] });
            if upper {
                cands.min_by_key(|&c| ranks[c]).expect("top is an upper bound")
            } else {
                cands.max_by_key(|&c| ranks[c]).expect("bottom is a lower bound")
            }
        };
        let join = (0..len).map(|a| (0..len).map(|b| pick(a, b, true)).collect()).collect();
        let meet = (0..len).map(|a| (0..len).map(|b| pick(a, b, false)).collect()).collect();
        Ok(FlatLattice { flats, dims, ranks, leq, covers, join, meet })
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flat(&self, i: usize) -> &SubspaceId {
        &self.flats[i]
    }

    pub fn flats(&self) -> &[SubspaceId] {
        &self.flats
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Flats covering flat `a`.
    pub fn covers(&self, a: usize) -> &[usize] {
        &self.covers[a]
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.covers[a].contains(&b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    /// Hasse edges (lower, upper).
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|a| self.covers[a].iter().map(move |&b| (a, b))).collect()
    }

    fn covered_by_count(&self, b: usize) -> usize {
        (0..self.len()).filter(|&a| self.is_cover(a, b)).count()
    }

    fn signature(&self, a: usize, with_dim: bool) -> (usize, usize, usize, usize) {
        (self.ranks[a], if with_dim { self.dims[a] } else { 0 }, self.covers[a].len(), self.covered_by_count(a))
    }

    /// Number of flats per (dim, rank).
    pub fn dr_table(&self) -> BTreeMap<(usize, usize), u64> {
        let mut t = BTreeMap::new();
        for i in 0..self.len() {
            *t.entry((self.dims[i], self.ranks[i])).or_insert(0) += 1;
        }
        t
    }
}

/// Backtracking search for a lattice isomorphism `a ↦ map[a]`, optionally dimension-preserving.
pub fn lattice_isomorphism(l1: &FlatLattice, l2: &FlatLattice, with_dim: bool, node_budget: u64) -> Result<Option<Vec<usize>>> {
    let len = l1.len();
    if len != l2.len() {
        return Ok(None);
    }
    let sig1: Vec<_> = (0..len).map(|a| l1.signature(a, with_dim)).collect();
    let sig2: Vec<_> = (0..len).map(|b| l2.signature(b, with_dim)).collect();
    let mut s1 = sig1.clone();
    let mut s2 = sig2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Ok(None);
    }
    let mut map = vec![usize::MAX; len];
    let mut used = vec![false; len];
    let mut nodes = 0u64;
    // Flats are stored in rank order, so assigning in index order proceeds rank by rank.
    fn go(
        a: usize,
        l1: &FlatLattice,
        l2: &FlatLattice,
        sig1: &[(usize, usize, usize, usize)],
        sig2: &[(usize, usize, usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        if a == l1.len() {
            return Ok(true);
        }
        for b in 0..l2.len() {
            if used[b] || sig1[a] != sig2[b] {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::BudgetExceeded { what: "isomorphism search nodes", needed: *nodes as u128, budget: budget as u128 });
            }
            let consistent = (0..a).all(|x| {
                let y = map[x];
                l1.is_cover(x, a) == l2.is_cover(y, b) && l1.is_cover(a, x) == l2.is_cover(b, y)
            });
            if !consistent {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if go(a + 1, l1, l2, sig1, sig2, map, used, nodes, budget)? {
                return Ok(true);
            }
            used[b] = false;
            map[a] = usize::MAX;
        }
        Ok(false)
    }
    if go(0, l1, l2, &sig1, &sig2, &mut map, &mut used, &mut nodes, node_budget)? {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

/// Checks that `map` preserves rank, covers, joins, meets and (optionally) dimension.
pub fn verify_mapping(l1: &FlatLattice, l2: &FlatLattice, map: &[usize], with_dim: bool) -> bool {
    let len = l1.len();
    if map.len() != len || l2.len() != len {
        return false;
    }
    let mut seen = vec![false; len];
    for &b in map {
        if b >= len || seen[b] {
            return false;
        }
        seen[b] = true;
    }
    (0..len).all(|a| l1.rank(a) == l2.rank(map[a]) && (!with_dim || l1.dim(a) == l2.dim(map[a])))
        && (0..len).all(|a| {
            (0..len).all(|c| {
                l1.is_cover(a, c) == l2.is_cover(map[a], map[c])
                    && map[l1.join(a, c)] == l2.join(map[a], map[c])
                    && map[l1.meet(a, c)] == l2.meet(map[a], map[c])
            })
        })
}

/// A dimension-preserving isomorphism of the lattices of flats, as (flat of M1, flat of M2) pairs.
pub fn weak_isomorphic(m1: &QMatroid, m2: &QMatroid, node_budget: u64) -> Result<Option<Vec<(usize, usize)>>> {
    if m1.q() != m2.q() || m1.n() != m2.n() {
        return Ok(None);
    }
    let l1 = FlatLattice::new(m1)?;
    let l2 = FlatLattice::new(m2)?;
    Ok(lattice_isomorphism(&l1, &l2, true, node_budget)?.map(|m| m.into_iter().enumerate().collect()))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrScope {
    FullLattice,
    FlatsOnly,
}

/// Count tables of (dim, rank) pairs for two q-matroids.
#[derive(Clone, Debug, Serialize)]
pub struct DrReport {
    pub exists: bool,
    pub table1: Vec<((usize, usize), u64)>,
    pub table2: Vec<((usize, usize), u64)>,
    /// First (dim, rank) cell where the tables differ.
    pub first_difference: Option<(usize, usize)>,
}

fn full_dr_table(m: &QMatroid) -> Result<BTreeMap<(usize, usize), u64>> {
    let lattice = m.lattice()?;
    let ranks = m.rank_vector()?;
    let mut t = BTreeMap::new();
    for (i, &r) in ranks.iter().enumerate() {
        *t.entry((lattice.dim(i), r)).or_insert(0) += 1;
    }
    Ok(t)
}

/// A dimension- and rank-preserving bijection exists iff the count tables agree.
pub fn dr_bijection(m1: &QMatroid, m2: &QMatroid, scope: DrScope) -> Result<DrReport> {
    let (t1, t2) = match scope {
        DrScope::FullLattice => (full_dr_table(m1)?, full_dr_table(m2)?),
        DrScope::FlatsOnly => (FlatLattice::new(m1)?.dr_table(), FlatLattice::new(m2)?.dr_table()),
    };
    let first_difference = t1
        .keys()
        .chain(t2.keys())
        .filter(|k| t1.get(k) != t2.get(k))
        .min()
        .copied();
    Ok(DrReport {
        exists: m1.n() == m2.n() && first_difference.is_none(),
        table1: t1.into_iter().collect(),
        table2: t2.into_iter().collect(),
        first_difference,
    })
}

pub fn dr_bijection_exists(m1: &QMatroid, m2: &QMatroid, scope: DrScope) -> Result<bool> {
    Ok(dr_bijection(m1, m2, scope)?.exists)
}

/// Desarguesian k-spread of F_q^n: the F_{q^k}-lines of F_{q^k}^{n/k}, with each
/// F_{q^k} coordinate expanded in the basis 1, w, …, w^{k−1}.
pub fn construct_spread(q: u32, n: usize, k: usize) -> Result<Vec<SubspaceId>> {
    if k == 0 || n == 0 || !n.is_multiple_of(k) {
        return Err(Error::NonDividing { k, n });
    }
    let f = FieldSpec::with_default_modulus(q, k)?;
    let blocks = n / k;
    let mut members = Vec::new();
    for pivot in 0..blocks {
        for_each_rref(f.order(), blocks, &[pivot], |v| {
            let rows: Vec<Vec<u32>> = (0..k)
                .map(|s| {
                    let ws = f.pow(f.generator(), s as u64);
                    v.iter()
                        .flat_map(|&x| {
                            let y = f.mul(ws, FieldElement::from_code(x));
                            (0..k).map(move |i| (y, i))
                        })
                        .map(|(y, i)| f.coeff(y, i))
                        .collect()
                })
                .collect();
            members.push(SubspaceId::span(q, n, &rows).expect("rows of length n"));
        });
    }
    members.sort();
    crate::qmatroid::check_partition(q, n, &members)?;
    Ok(members)
}

/// Replaces the regulus through three members of a 2-spread of F_q^4 by its opposite regulus.
pub fn switch_regulus(spread: &[SubspaceId]) -> Result<Vec<SubspaceId>> {
    let first = spread.first().ok_or_else(|| Error::InvalidSpread("empty spread".into()))?;
    let (q, n) = (first.q(), first.n());
    if n != 4 || spread.iter().any(|s| s.dim() != 2) || spread.len() < 3 {
        return Err(Error::InvalidSpread("regulus switching needs a 2-spread of F_q^4".into()));
    }
    let lattice = shared_lattice(q, n, DEFAULT_LATTICE_BUDGET)?;
    let lines: Vec<&SubspaceId> = lattice.of_dim(2).map(|i| lattice.get(i)).collect();
    let meets = |a: &SubspaceId, b: &SubspaceId| a.intersection(b).map(|x| x.dim() == 1).unwrap_or(false);
    let (a, b, c) = (&spread[0], &spread[1], &spread[2]);
    let transversals: Vec<SubspaceId> = lines.iter().filter(|l| meets(l, a) && meets(l, b) && meets(l, c)).map(|l| (*l).clone()).collect();
    let regulus: Vec<&SubspaceId> = spread.iter().filter(|s| transversals.iter().all(|t| meets(s, t))).collect();
    if transversals.len() != q as usize + 1 || regulus.len() != q as usize + 1 {
        return Err(Error::InvalidSpread("the three members do not determine a regulus inside the spread".into()));
    }
    let mut out: Vec<SubspaceId> = spread.iter().filter(|s| !regulus.contains(s)).cloned().collect();
    out.extend(transversals);
    out.sort();
    crate::qmatroid::check_partition(q, n, &out)?;
    Ok(out)
}

/// The two mixed spreads of F_2^6 of size 15, together with the 3-spread they are built from.
#[derive(Clone, Debug)]
pub struct MixedSpreadPair {
    pub spread: Vec<SubspaceId>,
    pub first: Vec<SubspaceId>,
    pub second: Vec<SubspaceId>,
}

pub fn mixed_spread_examples() -> Result<MixedSpreadPair> {
    let sp = |rows: &[[u32; 6]]| SubspaceId::span(2, 6, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let v1 = sp(&[[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]])?;
    let v2 = sp(&[[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]])?;
    let v3 = sp(&[[1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0], [0, 0, 1, 0, 0, 1]])?;
    let spread = construct_spread(2, 6, 3)?;
    for v in [&v1, &v2, &v3] {
        if !spread.contains(v) {
            return Err(Error::InvalidSpread("3-spread does not extend V1, V2, V3".into()));
        }
    }
    let rest: Vec<SubspaceId> = spread.iter().filter(|s| ![&v1, &v2, &v3].contains(s)).cloned().collect();

    let mut first: Vec<SubspaceId> = v1
        .vector_codes()
        .into_iter()
        .filter(|&c| c != 0)
        .map(|c| {
            let row: Vec<u32> = (0..6).map(|j| ((c >> j) & 1) as u32).collect();
            SubspaceId::span(2, 6, &[row])
        })
        .collect::<Result<_>>()?;
    first.push(v2.clone());
    first.push(v3.clone());
    first.extend(rest.iter().cloned());

    let mut second = vec![
        sp(&[[1, 0, 1, 0, 0, 0]])?,
        sp(&[[0, 0, 0, 1, 0, 1]])?,
        sp(&[[1, 0, 1, 1, 0, 1]])?,
        sp(&[[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]])?,
        sp(&[[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0]])?,
        sp(&[[0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1]])?,
        sp(&[[1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0]])?,
        sp(&[[0, 1, 1, 0, 0, 0], [0, 0, 0, 0, 1, 1]])?,
        sp(&[[1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1]])?,
    ];
    second.extend(rest);
    first.sort();
    second.sort();
    crate::qmatroid::check_partition(2, 6, &first)?;
    crate::qmatroid::check_partition(2, 6, &second)?;
    Ok(MixedSpreadPair { spread, first, second })
}
