//! Linkage of plane point sets by complete intersections.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Echelon, Matrix};
use crate::koszul::BettiTable;
use crate::points::{GradedBasis, PointSet};
use crate::poly::{dim_forms, gcd, gcd_all, mul, multiplication_matrix, MonomialBasis, PolyVec};

/// First difference of the Hilbert function of a complete intersection of
/// type `(a, b)`, through its socle degree `a + b - 2`.
pub fn ci_delta(a: usize, b: usize) -> Vec<usize> {
    let top = a + b - 2;
    (0..=top)
        .map(|t| (t + 1).min(a).min(b).min(top + 1 - t))
        .collect()
}

/// First difference of the residual of `X` in a complete intersection of type
/// `(a, b)`: `Δh_D(t) = Δh_CI(a+b-2-t) - Δh_X(a+b-2-t)`.
pub fn link_hf(delta_x: &[usize], a: usize, b: usize) -> Result<Vec<usize>> {
    if a == 0 || b == 0 {
        return Err(Error::Precondition(
            "complete intersection degrees must be positive".into(),
        ));
    }
    let ci = ci_delta(a, b);
    let len = ci.len();
    if let Some(t) = (len..delta_x.len()).find(|&t| delta_x[t] != 0) {
        return Err(Error::NotLinkable(format!(
            "Δh_X({t}) = {} lies beyond the socle degree {}",
            delta_x[t],
            len - 1
        )));
    }
    let x = |t: usize| delta_x.get(t).copied().unwrap_or(0);
    if let Some(t) = (0..len).find(|&t| x(t) > ci[t]) {
        return Err(Error::NotLinkable(format!(
            "Δh_X({t}) = {} exceeds Δh_CI({t}) = {}",
            x(t),
            ci[t]
        )));
    }
    Ok((0..len).map(|t| ci[len - 1 - t] - x(len - 1 - t)).collect())
}

/// Row-reduced basis of `(H, K)_u`.
fn ci_piece(h: &PolyVec, k: &PolyVec, u: usize, field: crate::FieldSpec) -> Echelon {
    let dim = dim_forms(2, u);
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for f in [h, k] {
        if f.degree <= u {
            let m = multiplication_matrix(field, f, u - f.degree);
            rows.extend(m.transpose().entries().chunks(dim).map(<[u32]>::to_vec));
        }
    }
    Matrix::from_rows(field, dim, &rows).rref()
}

fn check_ci(h: &PolyVec, k: &PolyVec, x: &PointSet) -> Result<()> {
    if x.n() != 2 || h.n != 2 || k.n != 2 {
        return Err(Error::NotPlane(x.n().max(h.n).max(k.n)));
    }
    if h.is_zero() || k.is_zero() {
        return Err(Error::NotRegularSequence(0));
    }
    if !x.vanishes_on(h) || !x.vanishes_on(k) {
        return Err(Error::NotLinkable(
            "the forms must vanish on every point".into(),
        ));
    }
    let g = gcd(x.field(), h, k);
    if g.degree > 0 {
        return Err(Error::NotRegularSequence(g.degree));
    }
    Ok(())
}

/// Basis of `I(D)_t` for `I(D) = (H, K) : I(X)`, computed as the forms `g`
/// of degree `t` with `g I(X)_s ⊆ (H, K)_{t+s}` for `s` up to the
/// regularity of `X`.
pub fn colon_basis(h: &PolyVec, k: &PolyVec, x: &PointSet, t: usize) -> Result<GradedBasis> {
    check_ci(h, k, x)?;
    Ok(colon_piece(h, k, x, t))
}

fn colon_piece(h: &PolyVec, k: &PolyVec, x: &PointSet, t: usize) -> GradedBasis {
    let field = x.field();
    let hx = x.hilbert();
    let src = MonomialBasis::new(2, t);
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for s in hx.initial_degree(2)..=hx.stabilization + 1 {
        let ci = ci_piece(h, k, t + s, field);
        let target = dim_forms(2, t + s);
        for f in x.ideal_basis(s).forms() {
            let mut block = vec![vec![0u32; src.len()]; target];
            for (j, mono) in src.monomials().iter().enumerate() {
                let mut v = mul(field, &f, &PolyVec::monomial(2, mono)).coeffs;
                ci.normal_form(field, &mut v);
                for (i, &c) in v.iter().enumerate() {
                    block[i][j] = c;
                }
            }
            rows.extend(block.into_iter().filter(|r| r.iter().any(|&c| c != 0)));
        }
    }
    let ech = Matrix::from_rows(field, src.len(), &rows).rref();
    GradedBasis::from_echelon(2, t, &ech, field)
}

/// First difference of the Hilbert function of the residual, read off the
/// colon ideal in degrees `0..=deg H + deg K - 2`.
pub fn residual_delta(h: &PolyVec, k: &PolyVec, x: &PointSet) -> Result<Vec<usize>> {
    check_ci(h, k, x)?;
    let top = h.degree + k.degree - 2;
    let values: Vec<usize> = (0..=top)
        .map(|t| dim_forms(2, t) - colon_piece(h, k, x, t).len())
        .collect();
    Ok((0..=top)
        .map(|t| {
            if t == 0 {
                values[0]
            } else {
                values[t] - values[t - 1]
            }
        })
        .collect())
}

/// Entry degrees `u_ij = max{0, m_i - d_j}` of a Hilbert-Burch matrix, with
/// syzygy twists `m` and generator twists `d` both descending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeMatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<Vec<usize>>,
}

impl DegreeMatrix {
    pub fn to_text(&self) -> String {
        let width = self
            .entries
            .iter()
            .flatten()
            .chain(&self.cols)
            .chain(&self.rows)
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        let mut out = format!("{:>width$} |", "");
        for c in &self.cols {
            out += &format!(" {c:>width$}");
        }
        out.push('\n');
        out += &"-".repeat(width + 2 + self.cols.len() * (width + 1));
        out.push('\n');
        for (m, row) in self.rows.iter().zip(&self.entries) {
            out += &format!("{m:>width$} |");
            for u in row {
                out += &format!(" {u:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn degree_matrix(betti: &BettiTable) -> Result<DegreeMatrix> {
    if betti.n != 2 {
        return Err(Error::NotPlane(betti.n));
    }
    if betti.window.is_some() {
        return Err(Error::MalformedBetti("a complete table is required".into()));
    }
    if let Some(&(p, _)) = betti.entries.keys().find(|(p, _)| *p > 1) {
        return Err(Error::MalformedBetti(format!(
            "homological degree {p} in a plane table"
        )));
    }
    let d = betti.twists(0);
    let m = betti.twists(1);
    if d.len() != m.len() + 1 {
        return Err(Error::MalformedBetti(format!(
            "{} generators and {} syzygies",
            d.len(),
            m.len()
        )));
    }
    let entries = m
        .iter()
        .map(|&mi| d.iter().map(|&dj| mi.saturating_sub(dj)).collect())
        .collect();
    Ok(DegreeMatrix {
        rows: m,
        cols: d,
        entries,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BaseLocus {
    pub gcd_degree: usize,
    pub factor: Option<PolyVec>,
}

/// Degree of the gcd of `I(X)_l`; positive exactly when the base locus of
/// the linear system contains a curve.
pub fn base_locus_gcd(x: &PointSet, l: usize) -> Result<BaseLocus> {
    if x.n() != 2 {
        return Err(Error::NotPlane(x.n()));
    }
    let forms = x.ideal_basis(l).forms();
    if forms.is_empty() {
        return Err(Error::Precondition(format!("I(X)_{l} is zero")));
    }
    let g = gcd_all(x.field(), &forms)?;
    Ok(BaseLocus {
        gcd_degree: g.degree,
        factor: (g.degree > 0).then_some(g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::{
        five_point_configuration, line_grid, line_plus_general, special_plane_points,
    };
    use crate::field::FieldSpec;
    use crate::koszul::graded_betti;
    use crate::points::{random_ideal_member, random_points, sample_rng};
    use crate::search::classify_case;
    use rand_chacha::rand_core::RngCore;

    fn gf() -> FieldSpec {
        FieldSpec::default()
    }

    #[test]
    fn ci_deltas() {
        assert_eq!(ci_delta(2, 2), vec![1, 2, 1]);
        assert_eq!(ci_delta(2, 3), vec![1, 2, 2, 1]);
        assert_eq!(ci_delta(3, 5), vec![1, 2, 3, 3, 3, 2, 1]);
        for a in 1..6 {
            for b in 1..6 {
                assert_eq!(ci_delta(a, b).iter().sum::<usize>(), a * b);
            }
        }
    }

    #[test]
    fn link_examples() {
        assert_eq!(link_hf(&[1, 2, 0], 2, 2).unwrap(), vec![1, 0, 0]);
        assert_eq!(link_hf(&[1, 2, 2], 2, 3).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(link_hf(&[1, 2, 1], 2, 2).unwrap(), vec![0, 0, 0]);
        assert!(matches!(
            link_hf(&[1, 2, 3], 2, 2),
            Err(Error::NotLinkable(_))
        ));
        assert!(matches!(
            link_hf(&[1, 1, 1, 1], 2, 2),
            Err(Error::NotLinkable(_))
        ));
    }

    #[test]
    fn double_linkage() {
        for a in 1..=4 {
            for b in 1..=4 {
                let ci = ci_delta(a, b);
                let mut rng = sample_rng((a * 10 + b) as u64);
                for _ in 0..20 {
                    // an O-sequence-shaped difference below the CI one
                    let dx: Vec<usize> = ci
                        .iter()
                        .map(|&c| (rng.next_u64() % (c as u64 + 1)) as usize)
                        .collect();
                    let d = link_hf(&dx, a, b).unwrap();
                    assert_eq!(d.iter().sum::<usize>() + dx.iter().sum::<usize>(), a * b);
                    assert_eq!(link_hf(&d, a, b).unwrap(), dx);
                }
            }
        }
    }

    #[test]
    fn colon_agrees_with_link_and_complement() {
        for a in 1..=4 {
            for b in 1..=4 {
                let grid = line_grid(gf(), a, b, (a * 7 + b) as u64);
                let total = a * b;
                let mut rng = sample_rng((a * 31 + b) as u64);
                for trial in 0..4 {
                    let keep: Vec<usize> = match trial {
                        0 => (0..total).collect(),
                        _ => (0..total)
                            .filter(|_| !rng.next_u64().is_multiple_of(3))
                            .collect(),
                    };
                    if keep.is_empty() {
                        continue;
                    }
                    let rest: Vec<usize> = (0..total).filter(|i| !keep.contains(i)).collect();
                    let x = grid.points.subset(&keep);
                    let dx = x.hilbert().deltas;
                    let expected = link_hf(&dx, a, b).unwrap();
                    let colon = residual_delta(&grid.first, &grid.second, &x).unwrap();
                    assert_eq!(colon, expected, "a = {a}, b = {b}, keep = {keep:?}");
                    let complement: Vec<usize> = if rest.is_empty() {
                        vec![0; a + b - 1]
                    } else {
                        let h = grid.points.subset(&rest).hilbert();
                        (0..a + b - 1).map(|t| h.delta(t)).collect()
                    };
                    assert_eq!(complement, expected);
                }
            }
        }
    }

    #[test]
    fn colon_examples() {
        let grid = line_grid(gf(), 2, 2, 4);
        let x = grid.points.subset(&[0, 1, 2]);
        assert_eq!(
            colon_basis(&grid.first, &grid.second, &x, 1).unwrap().len(),
            2
        );
        let all = grid.points.clone();
        for t in 0..4 {
            assert_eq!(
                colon_basis(&grid.first, &grid.second, &all, t)
                    .unwrap()
                    .len(),
                dim_forms(2, t)
            );
        }
        let h2 = mul(gf(), &grid.first, &PolyVec::variable(2, 0));
        assert!(matches!(
            colon_basis(&grid.first, &h2, &x, 1),
            Err(Error::NotRegularSequence(2))
        ));
        let off = PolyVec::variable(2, 0);
        if !x.vanishes_on(&off) {
            assert!(matches!(
                colon_basis(&grid.first, &off, &x, 1),
                Err(Error::NotLinkable(_))
            ));
        }
    }

    #[test]
    fn degree_matrices() {
        let four = random_points(2, 4, gf(), 3).unwrap().points;
        let dm = degree_matrix(&graded_betti(&four)).unwrap();
        assert_eq!(dm.entries, vec![vec![2, 2]]);
        let five = five_point_configuration(gf());
        let dm = degree_matrix(&graded_betti(&five)).unwrap();
        assert_eq!(
            (dm.rows.clone(), dm.cols.clone()),
            (vec![4, 4], vec![3, 3, 2])
        );
        assert_eq!(dm.entries, vec![vec![1, 1, 2], vec![1, 1, 2]]);
        assert!(dm.to_text().contains("4 |"));
        let p3 = random_points(3, 4, gf(), 3).unwrap().points;
        assert!(degree_matrix(&graded_betti(&p3)).is_err());
        let bad = BettiTable::from_entries(2, 3, [((0, 2), 3), ((1, 3), 1)]);
        assert!(matches!(degree_matrix(&bad), Err(Error::MalformedBetti(_))));
    }

    #[test]
    fn generators_in_top_degree_give_unit_corner() {
        for seed in 0..30 {
            let x = special_plane_points(gf(), 4 + seed as usize % 7, seed);
            let label = classify_case(&x).unwrap();
            if label.gens_at_lplus1 == 0 {
                continue;
            }
            let dm = degree_matrix(&graded_betti(&x)).unwrap();
            assert_eq!(dm.entries[0][0], 1, "seed {seed}");
        }
    }

    #[test]
    fn base_locus_examples() {
        let five = five_point_configuration(gf());
        let bl = base_locus_gcd(&five, 2).unwrap();
        assert_eq!(bl.gcd_degree, 2);
        let conic = five.ideal_basis(2).forms()[0].monic(gf());
        assert_eq!(bl.factor.unwrap(), conic);
        let generic = random_points(2, 7, gf(), 9).unwrap().points;
        assert_eq!(base_locus_gcd(&generic, 3).unwrap().gcd_degree, 0);
        let (x, line) = line_plus_general(gf(), 4, 4, 2);
        let bl = base_locus_gcd(&x, 3).unwrap();
        assert_eq!(bl.gcd_degree, 1);
        assert_eq!(bl.factor.unwrap(), line.monic(gf()));
    }

    /// Instances with a common factor `F` of degree `k` in `I(X)_l`.
    fn split_instances() -> Vec<(PointSet, usize, usize, Vec<usize>)> {
        let mut out = Vec::new();
        let five = five_point_configuration(gf());
        out.push((five, 2, 2, vec![0, 1, 2, 3, 4]));
        for (on, off, l, seed) in [(4, 4, 3, 1), (5, 6, 4, 2), (4, 4, 3, 7)] {
            let (x, _) = line_plus_general(gf(), on, off, seed);
            out.push((x, 1, l, (0..on).collect()));
        }
        out
    }

    #[test]
    fn split_by_common_factor() {
        for (x, k, l, on_f) in split_instances() {
            let hx = x.hilbert();
            assert_eq!(hx.stabilization, l);
            let bl = base_locus_gcd(&x, l).unwrap();
            assert_eq!(bl.gcd_degree, k);
            let f = bl.factor.unwrap();
            let on: Vec<usize> = (0..x.len())
                .filter(|&i| f.eval(gf(), x.point(i)) == 0)
                .collect();
            assert_eq!(on, on_f);
            assert_eq!(on.len(), if k == 2 { 2 * l + 1 } else { l + 1 });
            let off: Vec<usize> = (0..x.len()).filter(|i| !on.contains(i)).collect();
            let x2 = x.subset(&off);
            let h2 = if off.is_empty() {
                None
            } else {
                Some(x2.hilbert())
            };
            for t in k..=l {
                let lhs = h2.as_ref().map_or(0, |h| h.delta(t - k)) as i64;
                assert_eq!(lhs, hx.delta(t) as i64 - k as i64, "t = {t}");
            }
        }
    }

    #[test]
    fn residual_below_smaller_degree() {
        let mut checked = 0;
        // 13 general points are in case 3 with l = 4
        let generic = (0..3).map(|seed| random_points(2, 13, gf(), seed).unwrap().points);
        let special = (0..60).map(|seed| special_plane_points(gf(), 6 + seed as usize % 5, seed));
        for (seed, x) in generic.chain(special).enumerate() {
            let seed = seed as u64;
            let label = classify_case(&x).unwrap();
            if label.case != 3 {
                continue;
            }
            let l = label.l;
            if base_locus_gcd(&x, l).unwrap().gcd_degree > 0 {
                continue;
            }
            let mut rng = sample_rng(seed);
            let mut combo = |deg: usize| random_ideal_member(&x, deg, &mut rng).unwrap();
            for b in 1..=l {
                for a in b..=l {
                    if x.hilbert().ideal_dim(2, b) == 0 {
                        continue;
                    }
                    let (h, k) = (combo(a), combo(b));
                    if h.is_zero() || k.is_zero() || gcd(gf(), &h, &k).degree > 0 {
                        continue;
                    }
                    let dd = residual_delta(&h, &k, &x).unwrap();
                    assert_eq!(dd, link_hf(&x.hilbert().deltas, a, b).unwrap());
                    assert!(
                        dd.iter().all(|&v| v < b),
                        "seed {seed}: {dd:?} with deg K = {b}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }
}
