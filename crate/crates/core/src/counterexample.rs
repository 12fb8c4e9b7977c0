//! Eleven of twenty-two general points in P^6.
//!
//! The subset prediction for 11 points taken from 22 general points agrees
//! with the minimal resolution conjecture and fails in the twist 5 column,
//! where the actual resolution has an extra `S(-5)` in two adjacent steps.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::field::FieldSpec;
use crate::koszul::{graded_betti, BettiTable, KoszulComplex};
use crate::points::{is_generic, random_points, PointSet};
use crate::predictor::{
    guess_ranks_with, mrc_conjectured_betti, spots, BettiKernels, Binding, GuessRankTable,
    KernelSource,
};

const N: usize = 6;
const BIG: usize = 22;
const SMALL: usize = 11;
const TWIST: usize = 5;

/// The differentials in the twist 5 column, as `(p, q)`, in the order of the
/// complex `0 -> Λ^3 ⊗ I_2 -> Λ^2 ⊗ I_3 -> Λ^1 ⊗ I_4 -> I_5 -> 0`.
const COLUMN: [(usize, usize); 3] = [(3, 2), (2, 3), (1, 4)];

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub quantity: String,
    pub computed: Vec<usize>,
    /// The value stated for characteristic zero.
    pub reference: Vec<usize>,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FullTables {
    pub betti22: BettiTable,
    pub betti11: BettiTable,
    pub predicted11: BettiTable,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub seed: u64,
    pub prime: u32,
    pub retries: u32,
    pub subset_generic: bool,
    pub dims22: Vec<usize>,
    pub ranks22: Vec<usize>,
    pub beta25_22: usize,
    pub dims11: Vec<usize>,
    pub predicted_ranks11: Vec<usize>,
    pub bindings11: Vec<Binding>,
    pub actual_ranks11: Vec<usize>,
    /// `(β_{2,5}, β_{3,5})` of the 11 points.
    pub predicted_betti11: [usize; 2],
    pub actual_betti11: [usize; 2],
    pub mrc_betti11: [usize; 2],
    pub prediction_equals_mrc: bool,
    pub mismatch: bool,
    pub verdicts: Vec<Verdict>,
    pub full: Option<FullTables>,
}

struct Column {
    dims: Vec<usize>,
    ranks: Vec<usize>,
    kernels: BTreeMap<(usize, usize), usize>,
}

fn column(x: &PointSet) -> Column {
    let kc = KoszulComplex::new(x, TWIST);
    let kernels = kc.kernel_dims(&spots(N, &[TWIST]));
    let rank = |(p, q): (usize, usize)| kc.source_dim(p, q) - kernels[&(p, q)];
    let mut dims: Vec<usize> = COLUMN.iter().map(|&(p, q)| kc.chain_dim(p, q)).collect();
    dims.push(kc.chain_dim(0, TWIST));
    Column {
        dims,
        ranks: COLUMN.iter().map(|&pq| rank(pq)).collect(),
        kernels,
    }
}

impl Column {
    fn rank(&self, p: usize, q: usize) -> usize {
        COLUMN
            .iter()
            .position(|&pq| pq == (p, q))
            .map_or(0, |i| self.ranks[i])
    }

    /// `β_{p,5} = dim ker d_{p,5-p} - rank d_{p+1,4-p}` for `p >= 1`.
    fn beta(&self, p: usize) -> usize {
        self.kernels[&(p, TWIST - p)] - self.rank(p + 1, TWIST - p - 1)
    }
}

fn verdict(quantity: &str, computed: Vec<usize>, reference: Vec<usize>) -> Verdict {
    Verdict {
        quantity: quantity.to_string(),
        agrees: computed == reference,
        computed,
        reference,
    }
}

/// Samples 22 certified-generic points of P^6, takes the first 11 as the
/// subset and compares the predicted twist 5 column with the actual one.
/// With `full`, the complete Betti tables are computed as well.
pub fn run_counterexample(seed: u64, field: FieldSpec, full: bool) -> Result<CounterexampleReport> {
    let sample = random_points(N, BIG, field, seed)?;
    let x = sample.points;
    let indices: Vec<usize> = (0..SMALL).collect();
    let y = x.subset(&indices);
    let hx = x.hilbert();

    let big = column(&x);
    let guess = guess_ranks_with(&big.kernels, N, &hx, SMALL, Some(&[TWIST]))?;
    let small = column(&y);
    let predicted_ranks: Vec<usize> = COLUMN.iter().map(|&(p, q)| guess.rank(p, q)).collect();
    let bindings = COLUMN.iter().map(|pq| guess.binding[pq]).collect();
    let predicted = [
        guess.derived_betti.get(2, TWIST),
        guess.derived_betti.get(3, TWIST),
    ];
    let actual = [small.beta(2), small.beta(3)];
    let mrc = mrc_conjectured_betti(N, SMALL)?;
    let mrc_pair = [mrc.get(2, TWIST), mrc.get(3, TWIST)];

    let verdicts = vec![
        verdict("dims22", big.dims.clone(), vec![210, 1302, 1316, 440]),
        verdict("ranks22", big.ranks.clone(), vec![210, 876, 440]),
        verdict("beta25_22", vec![big.beta(2)], vec![216]),
        verdict("dims11", small.dims.clone(), vec![595, 1533, 1393, 451]),
        verdict(
            "predicted_ranks11",
            predicted_ranks.clone(),
            vec![591, 942, 451],
        ),
        verdict("predicted_betti11", predicted.to_vec(), vec![0, 4]),
        verdict("actual_betti11", actual.to_vec(), vec![1, 5]),
    ];

    let full = if full {
        Some(full_tables(&x, &y)?)
    } else {
        None
    };

    Ok(CounterexampleReport {
        seed,
        prime: field.prime(),
        retries: sample.retries,
        subset_generic: is_generic(&y),
        beta25_22: big.beta(2),
        dims22: big.dims,
        ranks22: big.ranks,
        dims11: small.dims,
        predicted_ranks11: predicted_ranks,
        bindings11: bindings,
        actual_ranks11: small.ranks,
        predicted_betti11: predicted,
        actual_betti11: actual,
        mrc_betti11: mrc_pair,
        prediction_equals_mrc: predicted == mrc_pair,
        mismatch: predicted != actual,
        verdicts,
        full,
    })
}

fn full_tables(x: &PointSet, y: &PointSet) -> Result<FullTables> {
    let betti22 = graded_betti(x);
    let hx = x.hilbert();
    let source = BettiKernels {
        betti: &betti22,
        hilbert: &hx,
    };
    let guess: GuessRankTable = guess_ranks_with(&source, N, &hx, y.len(), None)?;
    let mut predicted11 = guess.derived_betti;
    predicted11.window = None;
    Ok(FullTables {
        betti11: graded_betti(y),
        betti22,
        predicted11,
    })
}

impl CounterexampleReport {
    pub fn to_text(&self) -> String {
        let arrows = |v: &[usize]| {
            let inner: Vec<String> = v.iter().map(ToString::to_string).collect();
            format!("0 -> {} -> 0", inner.join(" -> "))
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "seed {}, p = {}, resamples {}",
            self.seed, self.prime, self.retries
        );
        let _ = writeln!(out, "22 general points of P^6, twist 5 column:");
        let _ = writeln!(out, "  {}", arrows(&self.dims22));
        let _ = writeln!(
            out,
            "  rank d_3,2 = {}   rank d_2,3 = {}   rank d_1,4 = {}",
            self.ranks22[0], self.ranks22[1], self.ranks22[2]
        );
        let _ = writeln!(out, "  beta_2,5 = {}", self.beta25_22);
        let _ = writeln!(out, "11 of them (generic: {}):", self.subset_generic);
        let _ = writeln!(out, "  {}", arrows(&self.dims11));
        let _ = writeln!(out, "  map      predicted  actual  bound");
        for (i, (p, q)) in COLUMN.iter().enumerate().rev() {
            let _ = writeln!(
                out,
                "  e_{p},{q}   {:>9}  {:>6}  {:?}",
                self.predicted_ranks11[i], self.actual_ranks11[i], self.bindings11[i]
            );
        }
        let _ = writeln!(
            out,
            "  (beta_2,5, beta_3,5): predicted ({}, {}), actual ({}, {}), mrc ({}, {})",
            self.predicted_betti11[0],
            self.predicted_betti11[1],
            self.actual_betti11[0],
            self.actual_betti11[1],
            self.mrc_betti11[0],
            self.mrc_betti11[1]
        );
        let _ = writeln!(
            out,
            "  prediction {}",
            if self.mismatch { "fails" } else { "holds" }
        );
        let _ = writeln!(out, "reference values:");
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "  {:<18} {:?} vs {:?}  {}",
                v.quantity,
                v.computed,
                v.reference,
                if v.agrees { "agree" } else { "DIFFER" }
            );
        }
        if let Some(full) = &self.full {
            let _ = writeln!(out, "betti table, 22 points:\n{}", full.betti22.diagram());
            let _ = writeln!(out, "betti table, 11 points:\n{}", full.betti11.diagram());
            let _ = writeln!(
                out,
                "predicted table, 11 points:\n{}",
                full.predicted11.diagram()
            );
        }
        out
    }
}
