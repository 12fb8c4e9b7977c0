//! Koszul differentials `d_{p,q}: Λ^p S_1 ⊗ I_q -> Λ^{p-1} S_1 ⊗ I_{q+1}` and
//! graded Betti numbers `β_{p,p+q} = dim ker d_{p,q} - rank d_{p+1,q-1}`.
//!
//! Both sides of every differential are written in the fixed bases
//! `WedgeBasis ⊗ GradedBasis`, with row and column indices in lexicographic
//! product order `(tuple, ideal basis element)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::field::Matrix;
use crate::points::{GradedBasis, HilbertTable, PointSet};
use crate::poly::{binomial, monomial_index, MonomialBasis};

/// Strictly increasing `p`-tuples from `{0..n}` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeBasis {
    pub n: usize,
    pub p: usize,
    pub tuples: Vec<Vec<usize>>,
}

impl WedgeBasis {
    pub fn new(n: usize, p: usize) -> Self {
        let mut tuples = Vec::with_capacity(binomial(n + 1, p));
        let mut current = Vec::with_capacity(p);
        combos(n + 1, p, 0, &mut current, &mut tuples);
        WedgeBasis { n, p, tuples }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        self.tuples
            .binary_search_by(|t| t.as_slice().cmp(tuple))
            .expect("tuple belongs to the basis")
    }
}

fn combos(m: usize, p: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == p {
        out.push(current.clone());
        return;
    }
    for i in start..m {
        current.push(i);
        combos(m, p, i + 1, current, out);
        current.pop();
    }
}

/// One differential with its rank data.
#[derive(Debug, Clone)]
pub struct KoszulSlice {
    pub p: usize,
    pub q: usize,
    pub matrix: Matrix,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
}

/// The Koszul complex of `I(X)` truncated at a maximal ideal degree. Holds
/// the ideal bases of every degree up to `max_degree`.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    points: PointSet,
    hilbert: HilbertTable,
    bases: Vec<GradedBasis>,
}

impl KoszulComplex {
    /// Prepares differentials `d_{p,q}` for every `q < max_degree`.
    pub fn new(x: &PointSet, max_degree: usize) -> Self {
        let bases = crate::par_map((0..=max_degree).collect(), |t| x.ideal_basis(t));
        KoszulComplex {
            points: x.clone(),
            hilbert: x.hilbert(),
            bases,
        }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn hilbert(&self) -> &HilbertTable {
        &self.hilbert
    }

    pub fn max_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn ideal_dim(&self, q: usize) -> usize {
        self.hilbert.ideal_dim(self.points.n(), q)
    }

    /// `dim Λ^p S_1 ⊗ I_q`.
    pub fn chain_dim(&self, p: usize, q: usize) -> usize {
        binomial(self.points.n() + 1, p) * self.ideal_dim(q)
    }

    pub fn source_dim(&self, p: usize, q: usize) -> usize {
        self.chain_dim(p, q)
    }

    pub fn target_dim(&self, p: usize, q: usize) -> usize {
        if p == 0 {
            0
        } else {
            self.chain_dim(p - 1, q + 1)
        }
    }

    /// Matrix of `d_{p,q}` (rows: target, columns: source). `d_{0,q}` is the
    /// zero map to the zero space.
    pub fn matrix(&self, p: usize, q: usize) -> Matrix {
        let field = self.points.field();
        let n = self.points.n();
        let (src, tgt) = (self.source_dim(p, q), self.target_dim(p, q));
        let mut m = Matrix::zeros(field, tgt, src);
        if p == 0 || src == 0 || tgt == 0 {
            return m;
        }
        assert!(
            q < self.max_degree(),
            "ideal basis of degree {} not prepared",
            q + 1
        );
        let from = &self.bases[q];
        let to = &self.bases[q + 1];
        let images = variable_images(n, from, to);
        let (dim_from, dim_to) = (from.len(), to.len());
        let src_wedges = WedgeBasis::new(n, p);
        let tgt_wedges = WedgeBasis::new(n, p - 1);
        let mut face = Vec::with_capacity(p);
        for (ti, tuple) in src_wedges.tuples.iter().enumerate() {
            for k in 0..p {
                // sign (-1)^{p-i} with i = k + 1
                let negative = (p - (k + 1)) % 2 == 1;
                face.clear();
                face.extend(
                    tuple
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, &v)| v),
                );
                let row_block = tgt_wedges.index_of(&face) * dim_to;
                let var = tuple[k];
                for a in 0..dim_from {
                    let col = ti * dim_from + a;
                    for (b, &c) in images[a][var].iter().enumerate() {
                        if c != 0 {
                            let v = if negative { field.neg(c) } else { c };
                            let cur = m.get(row_block + b, col);
                            m.set(row_block + b, col, field.add(cur, v));
                        }
                    }
                }
            }
        }
        m
    }

    pub fn rank(&self, p: usize, q: usize) -> usize {
        if p == 0 || self.source_dim(p, q) == 0 || self.target_dim(p, q) == 0 {
            return 0;
        }
        self.matrix(p, q).rank()
    }

    pub fn kernel_dim(&self, p: usize, q: usize) -> usize {
        self.source_dim(p, q) - self.rank(p, q)
    }

    pub fn slice(&self, p: usize, q: usize) -> KoszulSlice {
        let matrix = self.matrix(p, q);
        let rank = matrix.rank();
        let source_dim = self.source_dim(p, q);
        KoszulSlice {
            p,
            q,
            source_dim,
            target_dim: self.target_dim(p, q),
            rank,
            kernel_dim: source_dim - rank,
            matrix,
        }
    }

    /// Ranks of several differentials, computed concurrently.
    pub fn ranks(&self, pairs: &BTreeSet<(usize, usize)>) -> BTreeMap<(usize, usize), usize> {
        let list: Vec<(usize, usize)> = pairs.iter().copied().collect();
        // largest matrices first so they do not trail at the end
        let mut order = list.clone();
        order.sort_by_key(|&(p, q)| {
            std::cmp::Reverse(self.source_dim(p, q) * self.target_dim(p, q))
        });
        let ranks = crate::par_map(order.clone(), |(p, q)| self.rank(p, q));
        order.into_iter().zip(ranks).collect()
    }

    /// Betti numbers for the given twists (all twists when `None`), using
    /// rows `q` between the initial degree and the regularity.
    pub fn betti(&self, twists: Option<&[usize]>) -> BettiTable {
        let n = self.points.n();
        let init = self.hilbert.initial_degree(n);
        let reg = self.hilbert.stabilization + 1;
        let wanted: Vec<usize> = match twists {
            Some(t) => t.to_vec(),
            None => (init..=reg + n).collect(),
        };
        let mut spots = Vec::new();
        for &j in &wanted {
            for p in 0..=n {
                if j >= p && (init..=reg).contains(&(j - p)) {
                    spots.push((p, j - p));
                }
            }
        }
        let mut needed = BTreeSet::new();
        for &(p, q) in &spots {
            if p >= 1 {
                needed.insert((p, q));
            }
            if q >= 1 && q > init {
                needed.insert((p + 1, q - 1));
            }
        }
        assert!(
            needed.iter().all(|&(_, q)| q < self.max_degree()),
            "complex prepared only through degree {}",
            self.max_degree()
        );
        let ranks = self.ranks(&needed);
        let rank = |p, q| ranks.get(&(p, q)).copied().unwrap_or(0);
        let mut entries = BTreeMap::new();
        for &(p, q) in &spots {
            let ker = self.source_dim(p, q) - rank(p, q);
            let beta = ker - rank(p + 1, q.wrapping_sub(1));
            if beta > 0 {
                entries.insert((p, p + q), beta);
            }
        }
        BettiTable {
            n,
            d: self.points.len(),
            entries,
            window: twists.map(<[usize]>::to_vec),
        }
    }
}

/// `images[a][i]`: coordinates of `x_i * f_a` in the basis of `I_{q+1}`.
fn variable_images(n: usize, from: &GradedBasis, to: &GradedBasis) -> Vec<Vec<Vec<u32>>> {
    let src_monos = MonomialBasis::new(n, from.degree);
    let mut coord_of = vec![usize::MAX; crate::poly::dim_forms(n, to.degree)];
    for (pos, &c) in to.coordinate_cols.iter().enumerate() {
        coord_of[c] = pos;
    }
    let mut exps = vec![0u32; n + 1];
    from.vectors
        .iter()
        .map(|f| {
            (0..=n)
                .map(|var| {
                    let mut img = vec![0u32; to.len()];
                    for (j, &c) in f.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        exps.copy_from_slice(src_monos.monomial(j));
                        exps[var] += 1;
                        let pos = coord_of[monomial_index(n, &exps)];
                        if pos != usize::MAX {
                            img[pos] = c;
                        }
                    }
                    img
                })
                .collect()
        })
        .collect()
}

/// Graded Betti numbers `β_{p,j}` of `I(X)`, nonzero entries only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub n: usize,
    pub d: usize,
    pub entries: BTreeMap<(usize, usize), usize>,
    /// Twists covered when the table is partial; `None` for a complete table.
    pub window: Option<Vec<usize>>,
}

impl BettiTable {
    pub fn get(&self, p: usize, twist: usize) -> usize {
        self.entries.get(&(p, twist)).copied().unwrap_or(0)
    }

    pub fn from_entries(
        n: usize,
        d: usize,
        entries: impl IntoIterator<Item = ((usize, usize), usize)>,
    ) -> Self {
        BettiTable {
            n,
            d,
            entries: entries.into_iter().filter(|&(_, b)| b > 0).collect(),
            window: None,
        }
    }

    /// `Σ_p (-1)^p Σ_j β_{p,j} C(n + t - j, n)`; equals `dim I_t` for a
    /// complete table.
    pub fn alternating_ideal_dim(&self, t: usize) -> i64 {
        self.entries
            .iter()
            .filter(|(&(_, j), _)| j <= t)
            .map(|(&(p, j), &b)| {
                let term = (b * binomial(self.n + t - j, self.n)) as i64;
                if p % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    /// Sum of `β_{p,j}` over twists.
    pub fn total(&self, p: usize) -> usize {
        self.entries
            .iter()
            .filter(|(&(q, _), _)| q == p)
            .map(|(_, &b)| b)
            .sum()
    }

    /// Twists with multiplicity in homological degree `p`, descending.
    pub fn twists(&self, p: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (&(q, j), &b) in self.entries.iter().rev() {
            if q == p {
                out.extend(std::iter::repeat_n(j, b));
            }
        }
        out
    }

    /// Betti diagram: rows are `j - p`, columns are `p`, zeros shown as `.`.
    pub fn diagram(&self) -> String {
        if self.entries.is_empty() {
            return "(zero ideal table)\n".to_string();
        }
        let max_p = self.entries.keys().map(|&(p, _)| p).max().unwrap();
        let rows: BTreeSet<usize> = self.entries.keys().map(|&(p, j)| j - p).collect();
        let cell = |p: usize, r: usize| match self.get(p, p + r) {
            0 => ".".to_string(),
            b => b.to_string(),
        };
        let width = self
            .entries
            .values()
            .map(|b| b.to_string().len())
            .chain((0..=max_p).map(|p| self.total(p).to_string().len()))
            .max()
            .unwrap()
            .max(2);
        let mut out = String::new();
        let _ = write!(out, "{:>7}", "");
        for p in 0..=max_p {
            let _ = write!(out, " {:>width$}", p);
        }
        out.push('\n');
        let _ = write!(out, "{:>7}", "total:");
        for p in 0..=max_p {
            let _ = write!(out, " {:>width$}", self.total(p));
        }
        out.push('\n');
        for &r in &rows {
            let _ = write!(out, "{:>7}", format!("{r}:"));
            for p in 0..=max_p {
                let _ = write!(out, " {:>width$}", cell(p, r));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize)]
struct BettiEntry {
    p: usize,
    twist: usize,
    beta: usize,
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<BettiEntry> = self
            .entries
            .iter()
            .map(|(&(p, twist), &beta)| BettiEntry { p, twist, beta })
            .collect();
        let mut st = s.serialize_struct("BettiTable", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("window", &self.window)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Degree bound needed to compute the full table of `X`.
pub fn full_table_degree(h: &HilbertTable) -> usize {
    h.stabilization + 2
}

/// The differential `d_{p,q}` of `X` with its rank.
pub fn koszul_differential(x: &PointSet, p: usize, q: usize) -> KoszulSlice {
    KoszulComplex::new(x, q + 1).slice(p, q)
}

/// Complete graded Betti table of `I(X)`.
pub fn graded_betti(x: &PointSet) -> BettiTable {
    let h = x.hilbert();
    KoszulComplex::new(x, full_table_degree(&h)).betti(None)
}

/// Betti numbers of `I(X)` in the given twists only.
pub fn betti_window(x: &PointSet, twists: &[usize]) -> BettiTable {
    let max_twist = twists.iter().copied().max().unwrap_or(0);
    let h = x.hilbert();
    let degree = (max_twist + 1).min(full_table_degree(&h));
    KoszulComplex::new(x, degree).betti(Some(twists))
}

/// Rank of `μ_s: S_1 ⊗ I_s -> I_{s+1}`, which is `d_{1,s}`.
pub fn mu_rank(x: &PointSet, s: usize) -> usize {
    KoszulComplex::new(x, s + 1).rank(1, s)
}
