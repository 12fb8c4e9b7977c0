//! Graded pieces `S_t` of `k[x_0, ..., x_n]` with an explicit monomial basis.
//!
//! Monomials of one degree are ordered graded-lexicographically with
//! `x_0 > x_1 > ... > x_n`: exponent vectors in decreasing lexicographic order,
//! so `x_0^t` has index 0 and `x_n^t` the last index. Every matrix, kernel
//! basis and golden file in the crate uses this order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Matrix};

/// `C(m, k)`, zero when `k > m`.
pub fn binomial(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// `dim S_t = C(n + t, n)` for the ring in `n + 1` variables.
pub fn dim_forms(n: usize, t: usize) -> usize {
    binomial(n + t, n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    degree: usize,
    monomials: Vec<Vec<u32>>,
}

impl MonomialBasis {
    pub fn new(n: usize, degree: usize) -> Self {
        assert!(n >= 1, "projective dimension must be at least 1");
        let mut monomials = Vec::with_capacity(dim_forms(n, degree));
        let mut current = vec![0u32; n + 1];
        fill(&mut monomials, &mut current, 0, degree as u32);
        MonomialBasis {
            n,
            degree,
            monomials,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    /// Position of an exponent vector of this degree in the basis.
    pub fn index_of(&self, exps: &[u32]) -> usize {
        monomial_index(self.n, exps)
    }
}

fn fill(out: &mut Vec<Vec<u32>>, current: &mut [u32], var: usize, remaining: u32) {
    if var + 1 == current.len() {
        current[var] = remaining;
        out.push(current.to_vec());
        return;
    }
    for e in (0..=remaining).rev() {
        current[var] = e;
        fill(out, current, var + 1, remaining - e);
    }
    current[var] = 0;
}

/// Rank of `exps` among monomials of the same degree: for each variable,
/// count the monomials that agree on the earlier exponents and have a larger
/// exponent here.
pub fn monomial_index(n: usize, exps: &[u32]) -> usize {
    debug_assert_eq!(exps.len(), n + 1);
    let mut remaining: usize = exps.iter().map(|&e| e as usize).sum();
    let mut idx = 0;
    for (i, &e) in exps.iter().enumerate().take(n) {
        let e = e as usize;
        if remaining > e {
            idx += binomial(remaining - e - 1 + n - i, n - i);
        }
        remaining -= e;
    }
    idx
}

/// A homogeneous form stored by its coefficients in `MonomialBasis(n, degree)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyVec {
    pub n: usize,
    pub degree: usize,
    pub coeffs: Vec<u32>,
}

impl PolyVec {
    pub fn zero(n: usize, degree: usize) -> Self {
        PolyVec {
            n,
            degree,
            coeffs: vec![0; dim_forms(n, degree)],
        }
    }

    pub fn from_coeffs(n: usize, degree: usize, coeffs: Vec<u32>) -> Self {
        assert_eq!(coeffs.len(), dim_forms(n, degree));
        PolyVec { n, degree, coeffs }
    }

    pub fn monomial(n: usize, exps: &[u32]) -> Self {
        let degree = exps.iter().sum::<u32>() as usize;
        let mut f = PolyVec::zero(n, degree);
        f.coeffs[monomial_index(n, exps)] = 1;
        f
    }

    /// The variable `x_i` as a linear form.
    pub fn variable(n: usize, i: usize) -> Self {
        let mut f = PolyVec::zero(n, 1);
        f.coeffs[i] = 1;
        f
    }

    /// The linear form `sum c_i x_i`.
    pub fn linear(field: FieldSpec, coeffs: &[i64]) -> Self {
        let n = coeffs.len() - 1;
        PolyVec::from_coeffs(n, 1, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, field: FieldSpec, c: u32) -> PolyVec {
        PolyVec {
            coeffs: self.coeffs.iter().map(|&a| field.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, field: FieldSpec, other: &PolyVec) -> PolyVec {
        assert_eq!((self.n, self.degree), (other.n, other.degree));
        PolyVec {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
            ..self.clone()
        }
    }

    /// Rescales so the first nonzero coefficient (in basis order) is 1.
    pub fn monic(&self, field: FieldSpec) -> PolyVec {
        match self.coeffs.iter().find(|&&c| c != 0) {
            Some(&lead) => self.scale(field, field.inv(lead)),
            None => self.clone(),
        }
    }

    pub fn eval(&self, field: FieldSpec, point: &[u32]) -> u32 {
        let basis = MonomialBasis::new(self.n, self.degree);
        self.coeffs
            .iter()
            .zip(basis.monomials())
            .filter(|(&c, _)| c != 0)
            .fold(0, |acc, (&c, m)| {
                field.add(acc, field.mul(c, eval_monomial(field, m, point)))
            })
    }
}

pub fn eval_monomial(field: FieldSpec, exps: &[u32], point: &[u32]) -> u32 {
    exps.iter()
        .zip(point)
        .fold(1, |acc, (&e, &x)| field.mul(acc, field.pow(x, e as u64)))
}

/// Coefficients of `l * f` in degree `t + 1`.
pub fn mult_by_linear(field: FieldSpec, f: &PolyVec, l: &PolyVec) -> PolyVec {
    assert_eq!(l.degree, 1, "second factor must be linear");
    mul(field, f, l)
}

/// Product of two forms.
pub fn mul(field: FieldSpec, f: &PolyVec, g: &PolyVec) -> PolyVec {
    assert_eq!(f.n, g.n);
    let n = f.n;
    let bf = MonomialBasis::new(n, f.degree);
    let bg = MonomialBasis::new(n, g.degree);
    let mut out = PolyVec::zero(n, f.degree + g.degree);
    let mut exps = vec![0u32; n + 1];
    for (i, &a) in f.coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.coeffs.iter().enumerate() {
            if b == 0 {
                continue;
            }
            for (k, e) in exps.iter_mut().enumerate() {
                *e = bf.monomial(i)[k] + bg.monomial(j)[k];
            }
            let idx = monomial_index(n, &exps);
            out.coeffs[idx] = field.add(out.coeffs[idx], field.mul(a, b));
        }
    }
    out
}

/// Matrix of `g -> f * g` from `S_t` to `S_{t + deg f}`.
pub fn multiplication_matrix(field: FieldSpec, f: &PolyVec, t: usize) -> Matrix {
    let n = f.n;
    let src = MonomialBasis::new(n, t);
    let out_dim = dim_forms(n, t + f.degree);
    let columns: Vec<Vec<u32>> = src
        .monomials()
        .iter()
        .map(|m| mul(field, f, &PolyVec::monomial(n, m)).coeffs)
        .collect();
    Matrix::from_columns(field, out_dim, &columns)
}

/// Degree of `gcd(f, g)`: the largest `k` for which `u f = v g` has a nonzero
/// solution with `deg u = deg g - k`, `deg v = deg f - k`.
fn gcd_degree_and_cofactor(field: FieldSpec, f: &PolyVec, g: &PolyVec) -> (usize, PolyVec) {
    let n = f.n;
    for k in (1..=f.degree.min(g.degree)).rev() {
        let mu = multiplication_matrix(field, f, g.degree - k);
        let mv = multiplication_matrix(field, g, f.degree - k);
        let rows = mu.rows();
        let mut m = Matrix::zeros(field, rows, mu.cols() + mv.cols());
        for i in 0..rows {
            for j in 0..mu.cols() {
                m.set(i, j, mu.get(i, j));
            }
            for j in 0..mv.cols() {
                m.set(i, mu.cols() + j, field.neg(mv.get(i, j)));
            }
        }
        if let Some(w) = m.kernel_basis().into_iter().next() {
            // v = f / gcd up to a scalar
            let v = PolyVec::from_coeffs(n, f.degree - k, w[mu.cols()..].to_vec());
            return (k, v);
        }
    }
    (0, f.clone())
}

/// Exact quotient `f / q`, or `None` if `q` does not divide `f`.
pub fn divide(field: FieldSpec, f: &PolyVec, q: &PolyVec) -> Option<PolyVec> {
    if q.degree > f.degree || q.is_zero() {
        return None;
    }
    let t = f.degree - q.degree;
    let m = multiplication_matrix(field, q, t);
    m.solve(&f.coeffs).map(|c| PolyVec::from_coeffs(f.n, t, c))
}

/// Monic greatest common divisor of two forms. `gcd(0, g) = g`.
pub fn gcd(field: FieldSpec, f: &PolyVec, g: &PolyVec) -> PolyVec {
    if f.is_zero() {
        return g.monic(field);
    }
    if g.is_zero() {
        return f.monic(field);
    }
    let (k, cofactor) = gcd_degree_and_cofactor(field, f, g);
    if k == 0 {
        let mut one = PolyVec::zero(f.n, 0);
        one.coeffs[0] = 1;
        return one;
    }
    divide(field, f, &cofactor)
        .expect("cofactor divides f")
        .monic(field)
}

/// Monic gcd of a family of forms; errors on an empty family.
pub fn gcd_all(field: FieldSpec, forms: &[PolyVec]) -> Result<PolyVec> {
    let (first, rest) = forms
        .split_first()
        .ok_or_else(|| Error::Precondition("gcd of an empty family".into()))?;
    let mut acc = first.monic(field);
    for f in rest {
        if acc.degree == 0 {
            break;
        }
        acc = gcd(field, &acc, f);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn basis_sizes_and_order() {
        let b = MonomialBasis::new(2, 1);
        assert_eq!(
            b.monomials(),
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
        assert_eq!(MonomialBasis::new(2, 2).len(), 6);
        assert_eq!(MonomialBasis::new(6, 5).len(), 462);
        assert_eq!(MonomialBasis::new(3, 0).len(), 1);
        let b2 = MonomialBasis::new(2, 2);
        assert_eq!(b2.monomial(0), &[2, 0, 0]);
        assert_eq!(b2.monomial(1), &[1, 1, 0]);
        assert_eq!(b2.monomial(5), &[0, 0, 2]);
    }

    #[test]
    fn index_inverts_enumeration() {
        for n in 1..5 {
            for t in 0..6 {
                let b = MonomialBasis::new(n, t);
                assert_eq!(b.len(), dim_forms(n, t));
                for (i, m) in b.monomials().iter().enumerate() {
                    assert_eq!(b.index_of(m), i);
                }
            }
        }
    }

    #[test]
    fn linear_multiplication_examples() {
        let f = gf(5);
        let x0 = PolyVec::variable(2, 0);
        let x1 = PolyVec::variable(2, 1);
        assert_eq!(
            mult_by_linear(f, &x0, &x1),
            PolyVec::monomial(2, &[1, 1, 0])
        );
        assert!(mult_by_linear(f, &PolyVec::zero(2, 1), &x1).is_zero());
        let sum = x0.add(f, &x1);
        let prod = mult_by_linear(f, &sum, &x0);
        let expect = PolyVec::monomial(2, &[2, 0, 0]).add(f, &PolyVec::monomial(2, &[1, 1, 0]));
        assert_eq!(prod, expect);
    }

    #[test]
    fn gcd_of_products_of_lines() {
        let f = gf(31991);
        let l1 = PolyVec::linear(f, &[1, 2, 3]);
        let l2 = PolyVec::linear(f, &[0, 1, -1]);
        let l3 = PolyVec::linear(f, &[5, 0, 1]);
        let a = mul(f, &mul(f, &l1, &l2), &l3);
        let b = mul(f, &mul(f, &l1, &l2), &l1);
        let g = gcd(f, &a, &b);
        assert_eq!(g, mul(f, &l1, &l2).monic(f));
        let c = mul(f, &l3, &l3);
        assert_eq!(gcd(f, &b, &c).degree, 0);
        assert_eq!(divide(f, &a, &l3).unwrap(), mul(f, &l1, &l2));
        assert!(divide(f, &c, &l1).is_none());
    }

    fn arb_form(n: usize, degree: usize) -> impl Strategy<Value = PolyVec> {
        prop::collection::vec(0u32..31991, dim_forms(n, degree))
            .prop_map(move |c| PolyVec::from_coeffs(n, degree, c))
    }

    proptest! {
        #[test]
        fn linear_multiplication_commutes(f in arb_form(3, 2), l in arb_form(3, 1), m in arb_form(3, 1)) {
            let k = gf(31991);
            let a = mult_by_linear(k, &mult_by_linear(k, &f, &l), &m);
            let b = mult_by_linear(k, &mult_by_linear(k, &f, &m), &l);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn evaluation_is_multiplicative(f in arb_form(2, 3), l in arb_form(2, 1),
                                        pt in prop::collection::vec(0u32..31991, 3)) {
            let k = gf(31991);
            let lhs = mult_by_linear(k, &f, &l).eval(k, &pt);
            let rhs = k.mul(l.eval(k, &pt), f.eval(k, &pt));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
