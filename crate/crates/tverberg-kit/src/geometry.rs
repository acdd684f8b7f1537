//! Exact-rational geometry: point configurations realizing affine maps,
//! convex-hull intersection decided by rational linear feasibility, and
//! the exhaustive Tverberg-partition searcher.

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{
    admissible_assignment, enumerate_symm_deleted_join, ComplexFamily, VertexSet,
};
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `m` points with exact rational coordinates in `d` dimensions; point `i`
/// is the image of vertex label `i+1` under the affine map.
#[derive(Clone, Debug)]
pub struct PointConfiguration {
    pub d: usize,
    pub points: Vec<Vec<Rational>>,
}

impl PointConfiguration {
    pub fn new(d: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::InvalidInput("point with wrong dimension".into()));
        }
        Ok(PointConfiguration { d, points })
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, label: u32) -> &[Rational] {
        &self.points[(label - 1) as usize]
    }

    /// Seeded random configuration with bounded numerators and denominators.
    pub fn random(seed: u64, m: usize, d: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..m)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let num: i64 = rng.gen_range(-999..=999);
                        let den: i64 = rng.gen_range(1..=32);
                        BigRational::new(BigInt::from(num), BigInt::from(den))
                    })
                    .collect()
            })
            .collect();
        PointConfiguration { d, points }
    }
}

/// Phase-1 simplex over exact rationals with Bland's anti-cycling rule.
/// Finds `x >= 0` with `A x = b`, or reports infeasibility.
fn solve_feasibility(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let n = if rows == 0 { 0 } else { a[0].len() };
    if rows == 0 {
        return Some(Vec::new());
    }
    // canonical tableau with artificial basis; flip rows so rhs >= 0
    let total = n + rows;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    let mut rhs: Vec<Rational> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = b[i].is_negative();
        let mut row: Vec<Rational> = Vec::with_capacity(total);
        for j in 0..n {
            row.push(if flip { -&a[i][j] } else { a[i][j].clone() });
        }
        for j in 0..rows {
            row.push(if j == i { Rational::one() } else { Rational::zero() });
        }
        t.push(row);
        rhs.push(if flip { -&b[i] } else { b[i].clone() });
    }
    let mut basis: Vec<usize> = (n..total).collect();
    let is_artificial = |j: usize| j >= n;
    loop {
        // reduced cost r_j = c_j - sum_i c_{basis[i]} t[i][j], c = 1 on artificials
        let mut entering = None;
        for j in 0..total {
            let mut r = if is_artificial(j) { Rational::one() } else { Rational::zero() };
            for i in 0..rows {
                if is_artificial(basis[i]) {
                    r -= &t[i][j];
                }
            }
            if r.is_negative() {
                entering = Some(j); // Bland: first improving index
                break;
            }
        }
        let Some(enter) = entering else { break };
        // ratio test, Bland tie-break on basis index
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &rhs[i] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave?; // unbounded cannot happen in phase 1
        // pivot
        let pivot = t[leave][enter].clone();
        for j in 0..total {
            t[leave][j] /= &pivot;
        }
        rhs[leave] /= &pivot;
        for i in 0..rows {
            if i != leave && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..total {
                    let delta = &t[leave][j] * &f;
                    t[i][j] -= delta;
                }
                let delta = &rhs[leave] * &f;
                rhs[i] -= delta;
            }
        }
        basis[leave] = enter;
    }
    // feasible iff no artificial carries positive value
    let mut x = vec![Rational::zero(); n];
    for i in 0..rows {
        if is_artificial(basis[i]) {
            if !rhs[i].is_zero() {
                return None;
            }
        } else {
            x[basis[i]] = rhs[i].clone();
        }
    }
    Some(x)
}

/// Decides `∩ conv(f(Δ_i)) ≠ ∅` exactly. Returns a common point and the
/// per-face barycentric weights when the hulls intersect.
pub fn hulls_intersect(
    config: &PointConfiguration,
    faces: &[VertexSet],
) -> Option<(Vec<Rational>, Vec<Vec<(u32, Rational)>>)> {
    if faces.iter().any(|f| f.is_empty()) {
        return None;
    }
    let d = config.d;
    let vars: Vec<Vec<u32>> = faces.iter().map(|f| f.to_labels()).collect();
    let offsets: Vec<usize> = vars
        .iter()
        .scan(0usize, |acc, v| {
            let o = *acc;
            *acc += v.len();
            Some(o)
        })
        .collect();
    let n: usize = vars.iter().map(|v| v.len()).sum();
    let rows = faces.len() + d * (faces.len() - 1);
    let mut a = vec![vec![Rational::zero(); n]; rows];
    let mut b = vec![Rational::zero(); rows];
    // normalization: weights of each face sum to one
    for (i, v) in vars.iter().enumerate() {
        for (k, _) in v.iter().enumerate() {
            a[i][offsets[i] + k] = Rational::one();
        }
        b[i] = Rational::one();
    }
    // equal images: face 0 against face i, coordinate t
    for i in 1..faces.len() {
        for t in 0..d {
            let row = faces.len() + (i - 1) * d + t;
            for (k, &label) in vars[0].iter().enumerate() {
                a[row][offsets[0] + k] = config.point(label)[t].clone();
            }
            for (k, &label) in vars[i].iter().enumerate() {
                a[row][offsets[i] + k] = -config.point(label)[t].clone();
            }
        }
    }
    let x = solve_feasibility(&a, &b)?;
    let mut point = vec![Rational::zero(); d];
    for (k, &label) in vars[0].iter().enumerate() {
        for t in 0..d {
            point[t] += &x[offsets[0] + k] * &config.point(label)[t];
        }
    }
    let weights = vars
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.iter().enumerate().map(|(k, &l)| (l, x[offsets[i] + k].clone())).collect()
        })
        .collect();
    Some((point, weights))
}

/// `r` disjoint faces with `Δ_i ∈ K_i`, a common rational point of their
/// images, and the weights certifying it.
#[derive(Clone, Debug)]
pub struct TverbergWitness {
    /// `faces[i] ∈ K_i`.
    pub faces: Vec<VertexSet>,
    pub point: Vec<Rational>,
    pub weights: Vec<Vec<(u32, Rational)>>,
}

/// Exhaustive search over cells of the join with all parts nonempty, in
/// deterministic enumeration order; membership is assigned by the
/// admissibility matching (identity first). `Ok(None)` is a reportable
/// outcome, not an error.
pub fn search_tverberg(
    config: &PointConfiguration,
    fam: &ComplexFamily,
    cap: u64,
) -> Result<Option<TverbergWitness>> {
    if config.num_points() != fam.ground_size() as usize {
        return Err(Error::InvalidInput(format!(
            "configuration has {} points but the family ground set is [{}]",
            config.num_points(),
            fam.ground_size()
        )));
    }
    let r = fam.r();
    let cells = enumerate_symm_deleted_join(fam, cap)?;
    for cell in &cells {
        if (0..r).any(|j| cell.part(j).is_empty()) {
            continue;
        }
        let identity_ok = (0..r).all(|i| fam.member(i).contains(cell.part(i)));
        let part_of: Vec<usize> = if identity_ok {
            (0..r).collect()
        } else {
            match admissible_assignment(cell, fam) {
                Some(a) => a,
                None => continue,
            }
        };
        let parts: Vec<VertexSet> = (0..r).map(|j| cell.part(j)).collect();
        if let Some((point, weights)) = hulls_intersect(config, &parts) {
            let faces = part_of.iter().map(|&j| cell.part(j)).collect();
            let weights = part_of.iter().map(|&j| weights[j].clone()).collect();
            return Ok(Some(TverbergWitness { faces, point, weights }));
        }
    }
    Ok(None)
}

/// Exact re-verification: disjointness, memberships, nonnegative weights
/// summing to one, and the convex combinations reproducing the point.
pub fn verify_witness(
    config: &PointConfiguration,
    fam: &ComplexFamily,
    w: &TverbergWitness,
) -> std::result::Result<(), String> {
    if w.faces.len() != fam.r() {
        return Err("wrong number of faces".into());
    }
    for i in 0..w.faces.len() {
        if w.faces[i].is_empty() {
            return Err(format!("face {} is empty", i + 1));
        }
        if !fam.member(i).contains(w.faces[i]) {
            return Err(format!("face {} not in K_{}", w.faces[i], i + 1));
        }
        for j in i + 1..w.faces.len() {
            if !w.faces[i].is_disjoint(w.faces[j]) {
                return Err(format!("faces {} and {} intersect", i + 1, j + 1));
            }
        }
    }
    for (i, wl) in w.weights.iter().enumerate() {
        let mut total = Rational::zero();
        let mut image = vec![Rational::zero(); config.d];
        for (label, weight) in wl {
            if weight.is_negative() {
                return Err(format!("negative weight on vertex {label}"));
            }
            if !w.faces[i].contains(*label) {
                return Err(format!("weight on vertex {label} outside face {}", i + 1));
            }
            total += weight;
            for t in 0..config.d {
                image[t] += weight * &config.point(*label)[t];
            }
        }
        if !total.is_one() {
            return Err(format!("weights of face {} sum to {total}", i + 1));
        }
        if image != w.point {
            return Err(format!("face {} image misses the common point", i + 1));
        }
    }
    Ok(())
}
