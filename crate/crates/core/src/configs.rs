//! Named and seeded configurations of points in the plane.

use rand_chacha::rand_core::RngCore;

use crate::field::FieldSpec;
use crate::points::{normalize, sample_rng, PointSet};
use crate::poly::{mul, PolyVec};

/// Five points with 1, 2, 3 on the line `x_0 = 0` and 3, 4, 5 on the line
/// `x_1 = x_2`. Labels 1..5 correspond to indices 0..4.
pub fn five_point_configuration(field: FieldSpec) -> PointSet {
    PointSet::new(
        field,
        2,
        &[
            vec![0, 0, 1],
            vec![0, 1, 0],
            vec![0, 1, 1],
            vec![1, 1, 1],
            vec![1, 2, 2],
        ],
    )
    .expect("fixed configuration is valid")
}

/// Point of intersection of two lines of P^2 (cross product), normalized.
pub fn meet(field: FieldSpec, a: &PolyVec, b: &PolyVec) -> Option<Vec<u32>> {
    let (u, v) = (&a.coeffs, &b.coeffs);
    let c = |i: usize, j: usize| field.sub(field.mul(u[i], v[j]), field.mul(u[j], v[i]));
    normalize(field, &[c(1, 2), c(2, 0), c(0, 1)])
}

/// Random line `a x_0 + b x_1 + c x_2`.
pub(crate) fn random_line(rng: &mut impl RngCore, field: FieldSpec) -> PolyVec {
    loop {
        let p = field.prime() as u64;
        let coeffs: Vec<u32> = (0..3).map(|_| (rng.next_u64() % p) as u32).collect();
        if coeffs.iter().any(|&c| c != 0) {
            return PolyVec::from_coeffs(2, 1, coeffs);
        }
    }
}

/// A random point on the line `l`.
pub(crate) fn point_on_line(rng: &mut impl RngCore, field: FieldSpec, l: &PolyVec) -> Vec<u32> {
    loop {
        let other = random_line(rng, field);
        if let Some(pt) = meet(field, l, &other) {
            return pt;
        }
    }
}

pub(crate) fn random_point(rng: &mut impl RngCore, field: FieldSpec) -> Vec<u32> {
    let p = field.prime() as u64;
    loop {
        let c: Vec<u32> = (0..3).map(|_| (rng.next_u64() % p) as u32).collect();
        if let Some(pt) = normalize(field, &c) {
            return pt;
        }
    }
}

/// `d` points in P^2 with deliberate collinearities: `d` points split over
/// one to three random lines (at least three per line when possible), the
/// remainder random. Deterministic in `seed`.
pub fn special_plane_points(field: FieldSpec, d: usize, seed: u64) -> PointSet {
    let mut rng = sample_rng(seed ^ 0x005e_ed0f_11e5);
    let lines = 1 + (rng.next_u64() % 3) as usize;
    let mut pts: Vec<Vec<u32>> = Vec::new();
    let mut budget = d;
    for _ in 0..lines {
        if budget < 3 {
            break;
        }
        let on_line = 3 + (rng.next_u64() % (budget - 2) as u64) as usize;
        let l = random_line(&mut rng, field);
        let mut placed = 0;
        while placed < on_line {
            let pt = point_on_line(&mut rng, field, &l);
            if !pts.contains(&pt) {
                pts.push(pt);
                placed += 1;
            }
        }
        budget -= on_line;
    }
    while pts.len() < d {
        let pt = random_point(&mut rng, field);
        if !pts.contains(&pt) {
            pts.push(pt);
        }
    }
    let coords: Vec<Vec<i64>> = pts
        .iter()
        .map(|p| p.iter().map(|&x| x as i64).collect())
        .collect();
    PointSet::new(field, 2, &coords).expect("distinct by construction")
}

/// `on_line` random points of one random line followed by `off_line` random
/// points off it. Returns the configuration and the line.
pub fn line_plus_general(
    field: FieldSpec,
    on_line: usize,
    off_line: usize,
    seed: u64,
) -> (PointSet, PolyVec) {
    let mut rng = sample_rng(seed);
    let l = random_line(&mut rng, field);
    let mut pts: Vec<Vec<u32>> = Vec::new();
    while pts.len() < on_line {
        let pt = point_on_line(&mut rng, field, &l);
        if !pts.contains(&pt) {
            pts.push(pt);
        }
    }
    while pts.len() < on_line + off_line {
        let pt = random_point(&mut rng, field);
        if l.eval(field, &pt) != 0 && !pts.contains(&pt) {
            pts.push(pt);
        }
    }
    let coords: Vec<Vec<i64>> = pts
        .iter()
        .map(|p| p.iter().map(|&x| x as i64).collect())
        .collect();
    (
        PointSet::new(field, 2, &coords).expect("distinct by construction"),
        l,
    )
}

/// Two pencils of random lines: the `a * b` pairwise intersection points
/// (row-major: line `i` of the first family meets line `j` of the second at
/// index `i * b + j`), together with the two products of lines that cut them
/// out as a complete intersection.
#[derive(Debug, Clone)]
pub struct LineGrid {
    pub points: PointSet,
    pub first: PolyVec,
    pub second: PolyVec,
}

pub fn line_grid(field: FieldSpec, a: usize, b: usize, seed: u64) -> LineGrid {
    let mut rng = sample_rng(seed);
    'retry: loop {
        let fam1: Vec<PolyVec> = (0..a).map(|_| random_line(&mut rng, field)).collect();
        let fam2: Vec<PolyVec> = (0..b).map(|_| random_line(&mut rng, field)).collect();
        let mut pts: Vec<Vec<u32>> = Vec::new();
        for l in &fam1 {
            for m in &fam2 {
                match meet(field, l, m) {
                    Some(pt) if !pts.contains(&pt) => pts.push(pt),
                    _ => continue 'retry,
                }
            }
        }
        let product = |fam: &[PolyVec]| {
            fam.iter()
                .skip(1)
                .fold(fam[0].clone(), |acc, l| mul(field, &acc, l))
        };
        let coords: Vec<Vec<i64>> = pts
            .iter()
            .map(|p| p.iter().map(|&x| x as i64).collect())
            .collect();
        return LineGrid {
            points: PointSet::new(field, 2, &coords).expect("distinct"),
            first: product(&fam1),
            second: product(&fam2),
        };
    }
}
