//! Finite point sets in P^n, their Hilbert functions and graded ideal pieces.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Matrix};
use crate::poly::{dim_forms, eval_monomial, MonomialBasis, PolyVec};

/// Retry bound for generic sampling.
pub const MAX_SAMPLE_RETRIES: u32 = 64;

/// Distinct points of P^n over GF(p), each normalized so that its first
/// nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    n: usize,
    field: FieldSpec,
    points: Vec<Vec<u32>>,
}

/// On-disk form: `{"prime": 31991, "projective_dim": 2, "points": [[0,0,1], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSetFile {
    pub prime: u64,
    pub projective_dim: usize,
    pub points: Vec<Vec<i64>>,
}

impl PointSet {
    pub fn new(field: FieldSpec, n: usize, coords: &[Vec<i64>]) -> Result<Self> {
        if n < 1 {
            return Err(Error::Precondition(
                "projective dimension must be >= 1".into(),
            ));
        }
        let mut points: Vec<Vec<u32>> = Vec::with_capacity(coords.len());
        for (index, c) in coords.iter().enumerate() {
            if c.len() != n + 1 {
                return Err(Error::WrongArity {
                    index,
                    expected: n + 1,
                    found: c.len(),
                });
            }
            let reduced: Vec<u32> = c.iter().map(|&x| field.reduce(x)).collect();
            let normalized = normalize(field, &reduced).ok_or(Error::ZeroPoint { index })?;
            if let Some(first) = points.iter().position(|q| *q == normalized) {
                return Err(Error::DuplicatePoint { index, first });
            }
            points.push(normalized);
        }
        Ok(PointSet { n, field, points })
    }

    pub fn from_file(file: &PointSetFile) -> Result<Self> {
        let field = FieldSpec::new(file.prime)?;
        PointSet::new(field, file.projective_dim, &file.points)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PointSetFile = serde_json::from_str(text)?;
        PointSet::from_file(&file)
    }

    pub fn to_file(&self) -> PointSetFile {
        PointSetFile {
            prime: self.field.prime() as u64,
            projective_dim: self.n,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|&x| x as i64).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[u32] {
        &self.points[i]
    }

    /// The sub-configuration at the given positions, in the given order.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            n: self.n,
            field: self.field,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    pub fn without(&self, index: usize) -> PointSet {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != index).collect();
        self.subset(&keep)
    }

    /// Entry `(i, j)` is the `j`-th degree-`t` monomial evaluated at point `i`.
    pub fn evaluation_matrix(&self, t: usize) -> Matrix {
        let basis = MonomialBasis::new(self.n, t);
        let mut m = Matrix::zeros(self.field, self.len(), basis.len());
        for (i, p) in self.points.iter().enumerate() {
            for (j, mono) in basis.monomials().iter().enumerate() {
                m.set(i, j, eval_monomial(self.field, mono, p));
            }
        }
        m
    }

    /// `h_X(t)`, the number of conditions imposed on forms of degree `t`.
    pub fn hilbert_value(&self, t: usize) -> usize {
        if self.is_empty() {
            return 0;
        }
        if t == 0 {
            return 1;
        }
        self.evaluation_matrix(t).rank()
    }

    /// Hilbert function through stabilization + 1.
    pub fn hilbert(&self) -> HilbertTable {
        let d = self.len();
        let mut values = Vec::new();
        let mut t = 0;
        loop {
            let h = self.hilbert_value(t);
            values.push(h);
            if h == d {
                values.push(d);
                break;
            }
            t += 1;
        }
        HilbertTable::from_values(values, d)
    }

    /// Basis of `I(X)_t`, the kernel of the degree-`t` evaluation map.
    pub fn ideal_basis(&self, t: usize) -> GradedBasis {
        let ech = self.evaluation_matrix(t).rref();
        GradedBasis::from_echelon(self.n, t, &ech, self.field)
    }

    /// True if the form vanishes at every point.
    pub fn vanishes_on(&self, f: &PolyVec) -> bool {
        self.points.iter().all(|p| f.eval(self.field, p) == 0)
    }
}

/// Normalizes so the first nonzero coordinate is 1; `None` for the zero vector.
pub fn normalize(field: FieldSpec, coords: &[u32]) -> Option<Vec<u32>> {
    let lead = *coords.iter().find(|&&x| x != 0)?;
    let inv = field.inv(lead);
    Some(coords.iter().map(|&x| field.mul(x, inv)).collect())
}

/// Hilbert function values and first differences through stabilization + 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertTable {
    pub values: Vec<usize>,
    pub deltas: Vec<usize>,
    pub degree: usize,
    pub stabilization: usize,
}

impl HilbertTable {
    /// Builds the table from values `h(0), h(1), ...` that reach `degree`.
    pub fn from_values(mut values: Vec<usize>, degree: usize) -> Self {
        let stabilization = values
            .iter()
            .position(|&h| h == degree)
            .expect("Hilbert function must reach the degree");
        values.truncate(stabilization + 2);
        while values.len() < stabilization + 2 {
            values.push(degree);
        }
        let deltas = values
            .iter()
            .enumerate()
            .map(|(t, &h)| if t == 0 { h } else { h - values[t - 1] })
            .collect();
        HilbertTable {
            values,
            deltas,
            degree,
            stabilization,
        }
    }

    pub fn value(&self, t: usize) -> usize {
        self.values.get(t).copied().unwrap_or(self.degree)
    }

    pub fn delta(&self, t: usize) -> usize {
        self.deltas.get(t).copied().unwrap_or(0)
    }

    /// `dim I_t = C(n + t, n) - h(t)`.
    pub fn ideal_dim(&self, n: usize, t: usize) -> usize {
        dim_forms(n, t) - self.value(t)
    }

    /// Smallest `t` with `I_t != 0`.
    pub fn initial_degree(&self, n: usize) -> usize {
        (0..).find(|&t| self.ideal_dim(n, t) > 0).unwrap()
    }

    /// `min{h(t), e}` for every `t`.
    pub fn truncated(&self, e: usize) -> HilbertTable {
        let mut values: Vec<usize> = Vec::new();
        let mut t = 0;
        loop {
            let h = self.value(t).min(e);
            values.push(h);
            if h == e {
                break;
            }
            t += 1;
        }
        HilbertTable::from_values(values, e)
    }
}

/// A basis of a graded piece `I_t` of an ideal, as coefficient vectors in
/// `MonomialBasis(n, t)`. Each member has a 1 at its coordinate column and 0
/// at the other members' coordinate columns, so reading a vector of `I_t` at
/// `coordinate_cols` yields its coordinates in this basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    pub n: usize,
    pub degree: usize,
    pub vectors: Vec<Vec<u32>>,
    pub coordinate_cols: Vec<usize>,
}

impl GradedBasis {
    pub fn from_echelon(
        n: usize,
        degree: usize,
        ech: &crate::field::Echelon,
        field: FieldSpec,
    ) -> Self {
        GradedBasis {
            n,
            degree,
            vectors: ech.kernel_basis(field),
            coordinate_cols: ech.free_columns(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn forms(&self) -> Vec<PolyVec> {
        self.vectors
            .iter()
            .map(|v| PolyVec::from_coeffs(self.n, self.degree, v.clone()))
            .collect()
    }

    /// Coordinates of a member of the span.
    pub fn coordinates(&self, v: &[u32]) -> Vec<u32> {
        self.coordinate_cols.iter().map(|&c| v[c]).collect()
    }
}

/// Seeded sampler: `ChaCha8Rng::seed_from_u64(seed)`, one coordinate per
/// `next_u64() % p`, points drawn in order and normalized.
pub fn sample_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A point set drawn from the seeded generator together with how many
/// samples were rejected before it.
#[derive(Debug, Clone)]
pub struct Sample {
    pub points: PointSet,
    pub retries: u32,
}

/// `d` random points of P^n certified to have the maximal Hilbert function
/// `h(t) = min{C(n + t, n), d}`.
pub fn random_points(n: usize, d: usize, field: FieldSpec, seed: u64) -> Result<Sample> {
    if d == 0 {
        return Err(Error::Precondition("need at least one point".into()));
    }
    let mut rng = sample_rng(seed);
    for retries in 0..MAX_SAMPLE_RETRIES {
        let Some(points) = draw_points(&mut rng, n, d, field) else {
            continue;
        };
        if is_generic(&points) {
            return Ok(Sample { points, retries });
        }
    }
    Err(Error::GenericityFailed {
        n,
        d,
        prime: field.prime(),
        retries: MAX_SAMPLE_RETRIES,
    })
}

fn draw_points(rng: &mut ChaCha8Rng, n: usize, d: usize, field: FieldSpec) -> Option<PointSet> {
    let p = field.prime() as u64;
    let coords: Vec<Vec<i64>> = (0..d)
        .map(|_| (0..=n).map(|_| (rng.next_u64() % p) as i64).collect())
        .collect();
    PointSet::new(field, n, &coords).ok()
}

/// A member of `I(X)_t` with coefficients drawn from `rng`, or `None` when
/// `I(X)_t = 0`.
pub fn random_ideal_member(x: &PointSet, t: usize, rng: &mut impl RngCore) -> Option<PolyVec> {
    let field = x.field();
    let forms = x.ideal_basis(t).forms();
    if forms.is_empty() {
        return None;
    }
    let p = field.prime() as u64;
    Some(forms.iter().fold(PolyVec::zero(x.n(), t), |acc, f| {
        acc.add(field, &f.scale(field, (rng.next_u64() % p) as u32))
    }))
}

/// Exact check that `h(t) = min{C(n + t, n), d}` for every `t`.
pub fn is_generic(x: &PointSet) -> bool {
    let d = x.len();
    let mut t = 0;
    loop {
        let expected = dim_forms(x.n(), t).min(d);
        if x.hilbert_value(t) != expected {
            return false;
        }
        if expected == d {
            return true;
        }
        t += 1;
    }
}
