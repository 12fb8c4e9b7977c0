//! Predicted resolutions of subsets.
//!
//! For a subset `Y` of `e` points with truncated Hilbert function the maps
//! `e_{p,q}` of the Koszul complex of `I(Y)` are assigned the largest rank
//! allowed by two constraints: the kernel of `e_{i+1,q}` contains the kernel of
//! the corresponding differential `d_{i+1,q}` of `I(X)`, and its image lies in
//! the kernel of the previous map. Along the anti-diagonal `p + q = N` ranks
//! are filled from `i = 0` upward, starting from the zero map `e_{0,N}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::koszul::{graded_betti, BettiTable, KoszulComplex};
use crate::points::{HilbertTable, PointSet};
use crate::poly::{binomial, dim_forms};

/// Truncated Hilbert function `min{h_X(t), e}`.
pub fn truncated_hf(x: &PointSet, e: usize) -> Result<HilbertTable> {
    check_subset_size(x.len(), e)?;
    Ok(x.hilbert().truncated(e))
}

pub(crate) fn check_subset_size(d: usize, e: usize) -> Result<()> {
    if e == 0 || e >= d {
        return Err(Error::Precondition(format!(
            "subset size must satisfy 1 <= e < {d}, got {e}"
        )));
    }
    Ok(())
}

/// Which bound fixed a predicted rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// `e_{0,N}`, or a map out of a zero space.
    ZeroMap,
    /// `dim Λ^{i+1} S_1 ⊗ I(Y)_q - dim ker d_{i+1,q}` was smaller.
    KernelContainment,
    /// `dim ker e_{i,N-i}` was smaller.
    ImageInKernel,
    /// Both bounds coincide.
    Both,
}

#[derive(Debug, Clone, Serialize)]
pub struct GuessRankTable {
    pub n: usize,
    pub e: usize,
    pub twists: Vec<usize>,
    #[serde(serialize_with = "serialize_pairs")]
    pub ranks: BTreeMap<(usize, usize), usize>,
    #[serde(serialize_with = "serialize_pairs")]
    pub kernel_dims: BTreeMap<(usize, usize), usize>,
    #[serde(serialize_with = "serialize_pairs")]
    pub binding: BTreeMap<(usize, usize), Binding>,
    pub derived_betti: BettiTable,
}

fn serialize_pairs<S, V>(
    map: &BTreeMap<(usize, usize), V>,
    s: S,
) -> std::result::Result<S::Ok, S::Error>
where
    S: serde::Serializer,
    V: Serialize,
{
    #[derive(Serialize)]
    struct Item<'a, V> {
        p: usize,
        q: usize,
        value: &'a V,
    }
    s.collect_seq(map.iter().map(|(&(p, q), value)| Item { p, q, value }))
}

impl GuessRankTable {
    pub fn rank(&self, p: usize, q: usize) -> usize {
        self.ranks.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn kernel_dim(&self, p: usize, q: usize) -> usize {
        self.kernel_dims.get(&(p, q)).copied().unwrap_or(0)
    }
}

/// Supplies `dim ker d_{p,q}` for the differentials of `I(X)`.
pub trait KernelSource {
    fn kernel_dims(&self, pairs: &BTreeSet<(usize, usize)>) -> BTreeMap<(usize, usize), usize>;
}

impl KernelSource for KoszulComplex {
    fn kernel_dims(&self, pairs: &BTreeSet<(usize, usize)>) -> BTreeMap<(usize, usize), usize> {
        let ranks = self.ranks(pairs);
        pairs
            .iter()
            .map(|&(p, q)| ((p, q), self.source_dim(p, q) - ranks[&(p, q)]))
            .collect()
    }
}

/// Precomputed kernel dimensions.
impl KernelSource for BTreeMap<(usize, usize), usize> {
    fn kernel_dims(&self, pairs: &BTreeSet<(usize, usize)>) -> BTreeMap<(usize, usize), usize> {
        pairs.iter().map(|k| (*k, self[k])).collect()
    }
}

/// Kernel dimensions recovered from a complete Betti table and the Hilbert
/// function: `ker d_{p,q} = β_{p,p+q} + rank d_{p+1,q-1}`, recursing up to
/// `p = n + 1` where the differential is injective.
pub struct BettiKernels<'a> {
    pub betti: &'a BettiTable,
    pub hilbert: &'a HilbertTable,
}

impl BettiKernels<'_> {
    fn chain_dim(&self, p: usize, q: usize) -> usize {
        let n = self.betti.n;
        binomial(n + 1, p) * self.hilbert.ideal_dim(n, q)
    }

    pub fn kernel_dim(&self, p: usize, q: usize) -> usize {
        let n = self.betti.n;
        if p > n + 1 || self.chain_dim(p, q) == 0 {
            return 0;
        }
        if p == 0 {
            return self.chain_dim(0, q);
        }
        let incoming = if q == 0 || p + 1 > n + 1 {
            0
        } else {
            self.chain_dim(p + 1, q - 1) - self.kernel_dim(p + 1, q - 1)
        };
        self.betti.get(p, p + q) + incoming
    }
}

impl KernelSource for BettiKernels<'_> {
    fn kernel_dims(&self, pairs: &BTreeSet<(usize, usize)>) -> BTreeMap<(usize, usize), usize> {
        assert!(
            self.betti.window.is_none(),
            "kernel recovery needs a complete Betti table"
        );
        pairs
            .iter()
            .map(|&(p, q)| ((p, q), self.kernel_dim(p, q)))
            .collect()
    }
}

/// Default anti-diagonals for a subset with Hilbert function `hy`.
pub fn default_twists(n: usize, hy: &HilbertTable) -> Vec<usize> {
    let init = hy.initial_degree(n);
    let reg = hy.stabilization + 1;
    (init..=reg + n).collect()
}

/// The differentials `d_{i+1, N-i-1}` of `I(X)` consulted along the given
/// anti-diagonals.
pub fn spots(n: usize, twists: &[usize]) -> BTreeSet<(usize, usize)> {
    let mut pairs = BTreeSet::new();
    for &big_n in twists {
        for i in 0..=n {
            if i < big_n {
                pairs.insert((i + 1, big_n - i - 1));
            }
        }
    }
    pairs
}

/// The guessed ranks of `e_{p,q}` for a subset of `e` points of `X`, given the
/// kernel dimensions of the differentials of `I(X)`.
pub fn guess_ranks_with(
    source: &impl KernelSource,
    n: usize,
    hx: &HilbertTable,
    e: usize,
    twists: Option<&[usize]>,
) -> Result<GuessRankTable> {
    check_subset_size(hx.degree, e)?;
    let hy = hx.truncated(e);
    let twists: Vec<usize> = match twists {
        Some(t) => t.to_vec(),
        None => default_twists(n, &hy),
    };
    let x_kernels = source.kernel_dims(&spots(n, &twists));
    let chain_y = |p: usize, q: usize| binomial(n + 1, p) * hy.ideal_dim(n, q);
    let mut ranks = BTreeMap::new();
    let mut kernel_dims = BTreeMap::new();
    let mut binding = BTreeMap::new();
    for &big_n in &twists {
        ranks.insert((0, big_n), 0);
        kernel_dims.insert((0, big_n), chain_y(0, big_n));
        binding.insert((0, big_n), Binding::ZeroMap);
        for i in 0..=n {
            if i + 1 > big_n {
                break;
            }
            let q = big_n - i - 1;
            let src = chain_y(i + 1, q);
            let ker_prev = kernel_dims[&(i, big_n - i)];
            let (rank, why) = if src == 0 {
                (0, Binding::ZeroMap)
            } else {
                let bound_i = src - x_kernels[&(i + 1, q)];
                let bound_ii = ker_prev;
                match bound_i.cmp(&bound_ii) {
                    std::cmp::Ordering::Less => (bound_i, Binding::KernelContainment),
                    std::cmp::Ordering::Greater => (bound_ii, Binding::ImageInKernel),
                    std::cmp::Ordering::Equal => (bound_i, Binding::Both),
                }
            };
            ranks.insert((i + 1, q), rank);
            kernel_dims.insert((i + 1, q), src - rank);
            binding.insert((i + 1, q), why);
        }
    }
    let mut betti = BTreeMap::new();
    for &big_n in &twists {
        for p in 0..=n.min(big_n) {
            let q = big_n - p;
            let ker = kernel_dims.get(&(p, q)).copied().unwrap_or(0);
            let incoming = if q == 0 {
                0
            } else {
                ranks.get(&(p + 1, q - 1)).copied().unwrap_or(0)
            };
            if ker > incoming {
                betti.insert((p, big_n), ker - incoming);
            }
        }
    }
    Ok(GuessRankTable {
        n,
        e,
        twists: twists.clone(),
        ranks,
        kernel_dims,
        binding,
        derived_betti: BettiTable {
            n,
            d: e,
            entries: betti,
            window: Some(twists),
        },
    })
}

/// Guessed ranks for a subset of `e` points of `X`. With explicit twists the
/// needed differentials of `I(X)` are computed directly; otherwise they are
/// recovered from the complete Betti table of `X`.
pub fn guess_ranks(x: &PointSet, e: usize, twists: Option<&[usize]>) -> Result<GuessRankTable> {
    check_subset_size(x.len(), e)?;
    let hx = x.hilbert();
    match twists {
        Some(t) => {
            let max_twist = t.iter().copied().max().unwrap_or(0);
            let kc = KoszulComplex::new(x, max_twist.max(1));
            guess_ranks_with(&kc, x.n(), &hx, e, Some(t))
        }
        None => {
            let betti = graded_betti(x);
            let source = BettiKernels {
                betti: &betti,
                hilbert: &hx,
            };
            guess_ranks_with(&source, x.n(), &hx, e, None)
        }
    }
}

/// `min{dim I(Z)_{s+1}, rank μ_{s,X} + dim S_1 ⊗ I(Z)_s - dim S_1 ⊗ I(X)_s}` for
/// a subset `Z` of `m` points with truncated Hilbert function.
pub fn subset_rank_prediction(hx: &HilbertTable, mu_x: usize, m: usize, s: usize) -> usize {
    let hz = hx.truncated(m);
    let iz_next = hz.ideal_dim(2, s + 1);
    let gain = 3 * hz.ideal_dim(2, s) - 3 * hx.ideal_dim(2, s);
    iz_next.min(mu_x + gain)
}

/// The rank of `μ_{s,Z}` that the subset resolution theorem asserts is
/// achieved by some `m`-subset `Z` of `X` in the plane.
pub fn predicted_subset_rank(x: &PointSet, m: usize, s: usize) -> Result<usize> {
    if x.n() != 2 {
        return Err(Error::NotPlane(x.n()));
    }
    check_subset_size(x.len(), m)?;
    let mu_x = crate::koszul::mu_rank(x, s);
    Ok(subset_rank_prediction(&x.hilbert(), mu_x, m, s))
}

/// Generic Hilbert function `min{C(n + t, n), d}`.
pub fn generic_hilbert(n: usize, d: usize) -> HilbertTable {
    let mut values = Vec::new();
    let mut t = 0;
    loop {
        let h = dim_forms(n, t).min(d);
        values.push(h);
        if h == d {
            break;
        }
        t += 1;
    }
    HilbertTable::from_values(values, d)
}

/// Betti table of `d` general points of P^2 assuming `μ_s` has maximal rank in
/// every degree; `I` then has the two-term resolution with
/// `β_{0,s+1} = dim I_{s+1} - rank μ_s` and
/// `β_{1,s+1} = dim ker μ_s - (3 dim I_{s-1} - dim I_{s-2})`.
pub fn mrc_predicted_betti(n: usize, d: usize) -> Result<BettiTable> {
    if n != 2 {
        return Err(Error::NotPlane(n));
    }
    if d == 0 {
        return Err(Error::Precondition("need at least one point".into()));
    }
    let h = generic_hilbert(2, d);
    let i = |t: isize| if t < 0 { 0 } else { h.ideal_dim(2, t as usize) };
    let mut entries = BTreeMap::new();
    for s in 0..=(h.stabilization + 2) as isize {
        let mu = i(s + 1).min(3 * i(s));
        let gens = i(s + 1) - mu;
        let syz = (3 * i(s) - mu) - (3 * i(s - 1) - i(s - 2));
        entries.insert((0, (s + 1) as usize), gens);
        entries.insert((1, (s + 1) as usize), syz);
    }
    Ok(BettiTable::from_entries(2, d, entries))
}

/// The table the minimal resolution conjecture assigns to `d` general points
/// of P^n: the Euler characteristic of each twist, forced by the generic
/// Hilbert function, placed in a single homological degree. A conjecture,
/// false in general (11 points of P^6).
pub fn mrc_conjectured_betti(n: usize, d: usize) -> Result<BettiTable> {
    if d == 0 {
        return Err(Error::Precondition("need at least one point".into()));
    }
    let h = generic_hilbert(n, d);
    let init = h.initial_degree(n);
    let reg = h.stabilization + 1;
    let mut euler: Vec<i64> = Vec::new();
    for t in 0..=reg + n {
        let known: i64 = euler
            .iter()
            .enumerate()
            .map(|(j, &c)| c * binomial(n + t - j, n) as i64)
            .sum();
        euler.push(h.ideal_dim(n, t) as i64 - known);
    }
    let mut entries = BTreeMap::new();
    for (j, &c) in euler.iter().enumerate() {
        if c == 0 {
            continue;
        }
        // row `init` holds p = j - init, row `init + 1` holds p = j - init - 1
        let place = [j.checked_sub(init), j.checked_sub(init + 1)]
            .into_iter()
            .zip([init, init + 1])
            .filter_map(|(p, row)| p.map(|p| (p, row)))
            .find(|&(p, row)| row <= reg && p < n && (if p % 2 == 0 { c > 0 } else { c < 0 }));
        let (p, _) = place.ok_or_else(|| {
            Error::Precondition(format!(
                "Euler characteristic {c} at twist {j} has no admissible slot"
            ))
        })?;
        entries.insert((p, j), c.unsigned_abs() as usize);
    }
    Ok(BettiTable::from_entries(n, d, entries))
}

/// One compared spot of a prediction report.
#[derive(Debug, Clone, Serialize)]
pub struct PredictionEntry {
    pub p: usize,
    pub twist: usize,
    pub predicted: usize,
    pub actual: usize,
    pub matches: bool,
    /// Constraint that fixed the rank of the incoming map `e_{p+1, twist-p-1}`.
    pub binding: Option<Binding>,
}

/// Predicted versus actual Betti numbers of a concrete subset.
#[derive(Debug, Clone, Serialize)]
pub struct PredictionReport {
    pub n: usize,
    pub d: usize,
    pub e: usize,
    /// 1-based labels of the subset's points in the ambient set.
    pub subset_labels: Vec<usize>,
    pub twists: Vec<usize>,
    pub entries: Vec<PredictionEntry>,
    pub all_match: bool,
    pub generators_match: bool,
    pub top_degree_match: bool,
    pub status: String,
}

pub fn compare(
    guess: &GuessRankTable,
    actual: &BettiTable,
    d: usize,
    subset: &[usize],
) -> PredictionReport {
    let n = guess.n;
    let mut entries = Vec::new();
    for &twist in &guess.twists {
        for p in 0..n {
            if p > twist {
                break;
            }
            let predicted = guess.derived_betti.get(p, twist);
            let got = actual.get(p, twist);
            if predicted == 0 && got == 0 {
                continue;
            }
            let q = twist - p;
            let binding = if q == 0 {
                None
            } else {
                guess.binding.get(&(p + 1, q - 1)).copied()
            };
            entries.push(PredictionEntry {
                p,
                twist,
                predicted,
                actual: got,
                matches: predicted == got,
                binding,
            });
        }
    }
    let matches_where =
        |pred: &dyn Fn(usize) -> bool| entries.iter().filter(|e| pred(e.p)).all(|e| e.matches);
    PredictionReport {
        n,
        d,
        e: guess.e,
        subset_labels: subset.iter().map(|i| i + 1).collect(),
        twists: guess.twists.clone(),
        all_match: matches_where(&|_| true),
        generators_match: matches_where(&|p| p == 0),
        top_degree_match: matches_where(&|p| p + 1 == n),
        status: if n == 2 {
            "theorem".to_string()
        } else {
            "prediction, not theorem".to_string()
        },
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::five_point_configuration;
    use crate::field::FieldSpec;
    use crate::points::random_points;

    #[test]
    fn truncation_examples() {
        let x = five_point_configuration(FieldSpec::default());
        assert_eq!(truncated_hf(&x, 4).unwrap().values, vec![1, 3, 4, 4]);
        assert!(truncated_hf(&x, 5).is_err());
        assert!(truncated_hf(&x, 0).is_err());
    }

    #[test]
    fn subset_rank_on_five_points() {
        let x = five_point_configuration(FieldSpec::default());
        assert_eq!(predicted_subset_rank(&x, 4, 2).unwrap(), 6);
        let y = random_points(3, 5, FieldSpec::default(), 1).unwrap().points;
        assert!(matches!(
            predicted_subset_rank(&y, 4, 2),
            Err(Error::NotPlane(3))
        ));
    }

    #[test]
    fn mrc_plane_examples() {
        let b5 = mrc_predicted_betti(2, 5).unwrap();
        assert_eq!(
            b5.entries,
            BTreeMap::from([((0, 2), 1), ((0, 3), 2), ((1, 4), 2)])
        );
        let b3 = mrc_predicted_betti(2, 3).unwrap();
        assert_eq!(b3.entries, BTreeMap::from([((0, 2), 3), ((1, 3), 2)]));
        for k in 1..6 {
            let d = binomial(k + 2, 2);
            let b = mrc_predicted_betti(2, d).unwrap();
            assert_eq!(
                b.entries,
                BTreeMap::from([((0, k + 1), k + 2), ((1, k + 2), k + 1)])
            );
        }
        assert!(mrc_predicted_betti(3, 5).is_err());
    }

    #[test]
    fn mrc_routes_agree_in_the_plane() {
        for d in 1..40 {
            assert_eq!(
                mrc_predicted_betti(2, d).unwrap().entries,
                mrc_conjectured_betti(2, d).unwrap().entries,
                "d = {d}"
            );
        }
    }

    #[test]
    fn mrc_tables_in_p6() {
        let eleven = mrc_conjectured_betti(6, 11).unwrap();
        let expect11 = [
            ((0, 2), 17),
            ((1, 3), 46),
            ((2, 4), 45),
            ((3, 5), 4),
            ((3, 6), 25),
            ((4, 7), 18),
            ((5, 8), 4),
        ];
        assert_eq!(eleven.entries, BTreeMap::from(expect11));
        let twentytwo = mrc_conjectured_betti(6, 22).unwrap();
        let expect22 = [
            ((0, 2), 6),
            ((0, 3), 20),
            ((1, 4), 120),
            ((2, 5), 216),
            ((3, 6), 190),
            ((4, 7), 84),
            ((5, 8), 15),
        ];
        assert_eq!(twentytwo.entries, BTreeMap::from(expect22));
    }

    #[test]
    fn betti_kernels_match_direct_kernels() {
        let f = FieldSpec::default();
        for (n, d, seed) in [(2, 7, 1), (3, 9, 2), (2, 10, 3)] {
            let x = random_points(n, d, f, seed).unwrap().points;
            let hx = x.hilbert();
            let betti = graded_betti(&x);
            let derived = BettiKernels {
                betti: &betti,
                hilbert: &hx,
            };
            let kc = KoszulComplex::new(&x, hx.stabilization + 4);
            let mut pairs = BTreeSet::new();
            for p in 0..=n + 1 {
                for q in 0..=hx.stabilization + 3 {
                    pairs.insert((p, q));
                }
            }
            let direct: BTreeMap<_, _> = pairs
                .iter()
                .map(|&(p, q)| ((p, q), kc.kernel_dim(p, q)))
                .collect();
            assert_eq!(derived.kernel_dims(&pairs), direct, "n = {n}, d = {d}");
        }
    }

    #[test]
    fn guess_zero_map_start() {
        let x = five_point_configuration(FieldSpec::default());
        let g = guess_ranks(&x, 4, None).unwrap();
        for &t in &g.twists {
            assert_eq!(g.rank(0, t), 0);
            assert_eq!(g.binding[&(0, t)], Binding::ZeroMap);
        }
    }
}
