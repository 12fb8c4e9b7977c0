//! Subsets with prescribed Hilbert functions and resolutions.

use std::collections::HashSet;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::koszul::KoszulComplex;
use crate::points::{HilbertTable, PointSet};
use crate::poly::binomial;
use crate::predictor::{check_subset_size, subset_rank_prediction};

fn as_labels<S: Serializer>(v: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| i + 1))
}

fn as_label<S: Serializer>(v: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(*v as u64 + 1)
}

/// `rank μ_{s,X}` for `s = 0..=max_s`.
pub fn mu_ranks(x: &PointSet, max_s: usize) -> Vec<usize> {
    let kc = KoszulComplex::new(x, max_s + 1);
    (0..=max_s).map(|s| kc.rank(1, s)).collect()
}

/// Smallest `t` with `h_X(t) = |X|`.
pub fn critical_degree(x: &PointSet) -> usize {
    x.hilbert().stabilization
}

/// Minimal generators of `I(X)` in degree `t`: `dim I_t - rank μ_{t-1}`.
pub fn min_gens(x: &PointSet, t: usize) -> Result<usize> {
    if t == 0 {
        return Err(Error::Precondition(
            "generator degree must be at least 1".into(),
        ));
    }
    let kc = KoszulComplex::new(x, t);
    Ok(kc.ideal_dim(t) - kc.rank(1, t - 1))
}

/// Adds points of `x` one at a time so that every prefix has the truncated
/// Hilbert function: at each step take the least degree where the current
/// ideal is still larger than `I(X)` and add the first point outside the base
/// locus there. Starts from the point `start`.
pub fn greedy_order(x: &PointSet, start: usize) -> Vec<usize> {
    let hx = x.hilbert();
    let mut order = vec![start];
    let mut chosen = vec![false; x.len()];
    chosen[start] = true;
    while order.len() < x.len() {
        let y = x.subset(&order);
        let t = (0..)
            .find(|&t| y.hilbert_value(t) < hx.value(t))
            .expect("a proper subset imposes fewer conditions in high degree");
        let forms = y.ideal_basis(t).forms();
        let next = (0..x.len())
            .find(|&i| !chosen[i] && forms.iter().any(|f| f.eval(x.field(), x.point(i)) != 0))
            .expect("I(Y)_t differs from I(X)_t, so some point of X is off its base locus");
        chosen[next] = true;
        order.push(next);
    }
    order
}

/// A subset of `e` points with Hilbert function `min{h_X, e}`, as indices.
pub fn greedy_truncated_subset(x: &PointSet, e: usize) -> Result<Vec<usize>> {
    check_subset_size(x.len(), e)?;
    let mut order = greedy_order(x, 0);
    order.truncate(e);
    Ok(order)
}

/// True when every prefix of `order` has the truncated Hilbert function.
pub fn has_truncated_prefixes(x: &PointSet, order: &[usize]) -> bool {
    let hx = x.hilbert();
    (1..=order.len()).all(|k| x.subset(&order[..k]).hilbert() == hx.truncated(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseLabel {
    pub l: usize,
    pub gens_at_lplus1: usize,
    pub case: u8,
}

pub fn classify_case(x: &PointSet) -> Result<CaseLabel> {
    if x.n() != 2 {
        return Err(Error::NotPlane(x.n()));
    }
    let l = critical_degree(x);
    let gens = min_gens(x, l + 1)?;
    Ok(CaseLabel {
        l,
        gens_at_lplus1: gens,
        case: gens.min(3) as u8 + 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub s: usize,
    pub predicted: usize,
    pub actual: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    #[serde(serialize_with = "as_label")]
    pub removed: usize,
    pub size: usize,
    pub checks: Vec<RankCheck>,
}

/// Single-point removals from `X` down to `m` points, each verified against
/// its predecessor, plus a direct check of the final subset against `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetChain {
    pub d: usize,
    pub m: usize,
    pub steps: Vec<ChainStep>,
    #[serde(serialize_with = "as_labels")]
    pub subset: Vec<usize>,
    pub final_checks: Vec<RankCheck>,
    pub explored: usize,
}

/// Evidence that no removal order worked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Falsification {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub prime: u32,
    pub points: Vec<Vec<u32>>,
    pub explored: usize,
}

/// Checks `Z` against an ambient `W` with Hilbert table `hw` and μ-ranks
/// `mu_w` (indexed by `s`): truncated Hilbert function and the predicted rank
/// of `μ_{s,Z}` for `1 <= s <= l_W + 1`.
fn verify_against(z: &PointSet, hw: &HilbertTable, mu_w: &[usize]) -> Option<Vec<RankCheck>> {
    let m = z.len();
    if z.hilbert() != hw.truncated(m) {
        return None;
    }
    let top = hw.stabilization + 1;
    let mu_z = mu_ranks(z, top);
    let mut checks = Vec::with_capacity(top);
    for s in 1..=top {
        let predicted = subset_rank_prediction(hw, mu_w[s], m, s);
        if mu_z[s] != predicted {
            return None;
        }
        checks.push(RankCheck {
            s,
            predicted,
            actual: mu_z[s],
        });
    }
    Some(checks)
}

struct Search<'a> {
    x: &'a PointSet,
    m: usize,
    hx: HilbertTable,
    mu_x: Vec<usize>,
    dead: HashSet<Vec<usize>>,
    explored: usize,
}

impl Search<'_> {
    fn descend(&mut self, current: &[usize], steps: &mut Vec<ChainStep>) -> Option<Vec<RankCheck>> {
        let w = self.x.subset(current);
        if current.len() == self.m {
            return verify_against(&w, &self.hx, &self.mu_x);
        }
        let hw = w.hilbert();
        let mu_w = mu_ranks(&w, hw.stabilization + 1);
        for pos in 0..current.len() {
            let mut next = current.to_vec();
            let removed = next.remove(pos);
            if self.dead.contains(&next) {
                continue;
            }
            self.explored += 1;
            let Some(checks) = verify_against(&self.x.subset(&next), &hw, &mu_w) else {
                self.dead.insert(next);
                continue;
            };
            steps.push(ChainStep {
                removed,
                size: next.len(),
                checks,
            });
            if let Some(done) = self.descend(&next, steps) {
                return Some(done);
            }
            steps.pop();
            self.dead.insert(next);
        }
        None
    }
}

/// Depth-first search for a chain of single-point removals realizing the
/// subset resolution prediction for an `m`-subset of a plane configuration.
/// Removals are tried in file order; failed subsets are remembered.
pub fn find_subset(x: &PointSet, m: usize) -> Result<SubsetChain> {
    if x.n() != 2 {
        return Err(Error::NotPlane(x.n()));
    }
    check_subset_size(x.len(), m)?;
    let hx = x.hilbert();
    let mu_x = mu_ranks(x, hx.stabilization + 1);
    let mut search = Search {
        x,
        m,
        hx,
        mu_x,
        dead: HashSet::new(),
        explored: 0,
    };
    let all: Vec<usize> = (0..x.len()).collect();
    let mut steps = Vec::new();
    match search.descend(&all, &mut steps) {
        Some(final_checks) => {
            let mut subset = all;
            for step in &steps {
                subset.retain(|&i| i != step.removed);
            }
            Ok(SubsetChain {
                d: x.len(),
                m,
                steps,
                subset,
                final_checks,
                explored: search.explored,
            })
        }
        None => Err(Error::Falsified(Box::new(Falsification {
            n: x.n(),
            d: x.len(),
            m,
            prime: x.field().prime(),
            points: x.points().to_vec(),
            explored: search.explored,
        }))),
    }
}

pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetRecord {
    #[serde(serialize_with = "as_labels")]
    pub subset: Vec<usize>,
    pub truncated: bool,
    /// `rank μ_{s,Z}` for `s = 1..=l_X + 1`.
    pub mu_ranks: Vec<usize>,
    /// Minimal generators of `I(Z)` in degree `l_X + 1`.
    pub gens_at_lplus1: usize,
    /// Whether the ranks equal the plane prediction (absent off the plane).
    pub achieves_prediction: Option<bool>,
}

/// All `m`-subsets of `0..d` in lexicographic order.
pub fn combinations(d: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut c: Vec<usize> = (0..m).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..m).rev().find(|&i| c[i] < d - m + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..m {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Every `m`-subset of `X` with its multiplication ranks, in lexicographic
/// order of indices.
pub fn enumerate_subsets(x: &PointSet, m: usize, budget: u128) -> Result<Vec<SubsetRecord>> {
    check_subset_size(x.len(), m)?;
    let candidates = binomial(x.len(), m) as u128;
    if candidates > budget {
        return Err(Error::BudgetExceeded { candidates, budget });
    }
    let hx = x.hilbert();
    let top = hx.stabilization + 1;
    let mu_x = mu_ranks(x, top);
    let plane = x.n() == 2;
    let records = crate::par_map(combinations(x.len(), m), |subset| {
        let z = x.subset(&subset);
        let kc = KoszulComplex::new(&z, top + 1);
        let ranks: Vec<usize> = (1..=top).map(|s| kc.rank(1, s)).collect();
        let gens = kc.ideal_dim(top) - kc.rank(1, top - 1);
        let achieves = plane.then(|| {
            ranks
                .iter()
                .zip(1..)
                .all(|(&r, s)| r == subset_rank_prediction(&hx, mu_x[s], m, s))
        });
        SubsetRecord {
            truncated: z.hilbert() == hx.truncated(m),
            subset,
            mu_ranks: ranks,
            gens_at_lplus1: gens,
            achieves_prediction: achieves,
        }
    });
    Ok(records)
}
