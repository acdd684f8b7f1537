//! Independent homology oracle: builds the simplicial chain complex of
//! `SymmDelJoin(𝒦)` and computes reduced Betti numbers by exact rank
//! computation, over the rationals or a prime field. No floating point
//! anywhere.

use std::collections::HashMap;

use num::{BigRational, Signed, Zero};

use crate::complex::{enumerate_symm_deleted_join, ComplexFamily, LabeledPartition};
use crate::error::{Error, Result};

/// Exact field arithmetic used by the rank computation.
pub trait Field {
    type Elem: Clone + PartialEq;
    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

/// The field with `p` elements, `p` a small prime.
pub struct PrimeField {
    pub p: u64,
}

impl Field for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat: a^(p-2) mod p
        let mut base = *a;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

/// Exact rational arithmetic.
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_i64(&self, x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// Sparse integer matrix as columns of `(row, coefficient)`.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    /// Exact rank over the given field by sparse Gaussian elimination with
    /// a sparsest-pivot heuristic.
    pub fn rank<F: Field>(&self, field: &F) -> usize {
        // row-major working copy
        let mut rows: Vec<HashMap<usize, F::Elem>> = vec![HashMap::new(); self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                let e = field.from_i64(v);
                if !field.is_zero(&e) {
                    rows[r].insert(c, e);
                }
            }
        }
        let mut col_count: Vec<usize> = vec![0; self.num_cols()];
        for row in &rows {
            for &c in row.keys() {
                col_count[c] += 1;
            }
        }
        let mut active: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();
        let mut rank = 0;
        loop {
            // pick the pivot with the smallest Markowitz-style cost
            let mut best: Option<(usize, usize, usize)> = None; // (cost, row, col)
            for (ri, row) in rows.iter().enumerate() {
                if !active[ri] || row.is_empty() {
                    continue;
                }
                for &c in row.keys() {
                    let cost = (row.len() - 1) * (col_count[c].saturating_sub(1));
                    if best.map_or(true, |(bc, _, _)| cost < bc) {
                        best = Some((cost, ri, c));
                    }
                }
                if best.map_or(false, |(bc, _, _)| bc == 0) {
                    break;
                }
            }
            let Some((_, prow, pcol)) = best else { break };
            rank += 1;
            active[prow] = false;
            let pivot_row: Vec<(usize, F::Elem)> =
                rows[prow].iter().map(|(&c, v)| (c, v.clone())).collect();
            for &(c, _) in &pivot_row {
                col_count[c] -= 1;
            }
            let pivot_val = rows[prow].get(&pcol).unwrap().clone();
            let pivot_inv = field.inv(&pivot_val);
            for ri in 0..rows.len() {
                if !active[ri] {
                    continue;
                }
                let Some(factor) = rows[ri].get(&pcol).cloned() else { continue };
                let scale = field.neg(&field.mul(&factor, &pivot_inv));
                for (c, pv) in &pivot_row {
                    let add = field.mul(pv, &scale);
                    let entry = rows[ri].remove(c);
                    let newv = match entry {
                        Some(old) => {
                            col_count[*c] -= 1;
                            field.add(&old, &add)
                        }
                        None => add,
                    };
                    if !field.is_zero(&newv) {
                        rows[ri].insert(*c, newv);
                        col_count[*c] += 1;
                    }
                }
                debug_assert!(!rows[ri].contains_key(&pcol));
            }
            rows[prow].clear();
        }
        rank
    }
}

/// Chain complex of the join with integer boundary matrices. `boundary[q]`
/// maps `q`-cells to `(q-1)`-cells; the augmentation `∂_0` is implicit.
pub struct ChainComplex {
    pub cells_by_dim: Vec<Vec<LabeledPartition>>,
    pub boundary: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn top_dim(&self) -> i64 {
        self.cells_by_dim.len() as i64 - 1
    }

    pub fn cell_count(&self, q: usize) -> usize {
        self.cells_by_dim.get(q).map(|v| v.len()).unwrap_or(0)
    }

    pub fn total_cells(&self) -> usize {
        self.cells_by_dim.iter().map(|v| v.len()).sum()
    }

    /// `Σ (-1)^q c_q` over cells (unreduced).
    pub fn euler_characteristic(&self) -> i64 {
        self.cells_by_dim
            .iter()
            .enumerate()
            .map(|(q, cells)| if q % 2 == 0 { cells.len() as i64 } else { -(cells.len() as i64) })
            .sum()
    }

    /// Verifies `∂_{q-1} ∘ ∂_q = 0` exactly, over the integers.
    pub fn boundary_squared_is_zero(&self) -> bool {
        for q in 1..self.boundary.len() {
            let lower = &self.boundary[q - 1];
            let upper = &self.boundary[q];
            for col in &upper.cols {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(mid, sign) in col {
                    for &(row, s2) in &lower.cols[mid] {
                        *acc.entry(row).or_insert(0) += sign * s2;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return false;
                }
            }
        }
        true
    }
}

/// Boundary of a join cell: signed sum of single-vertex deletions, sign
/// fixed by the position of the deleted vertex in the concatenation
/// `A_1 < A_2 < .. < A_r` with each part label-sorted.
fn boundary_terms(cell: &LabeledPartition) -> Vec<(LabeledPartition, i64)> {
    let mut out = Vec::new();
    let mut position = 0i64;
    for j in 0..cell.num_parts() {
        for v in cell.part(j).iter() {
            let sign = if position % 2 == 0 { 1 } else { -1 };
            out.push((cell.with_vertex_removed(j, v), sign));
            position += 1;
        }
    }
    out
}

pub fn build_chain_complex(fam: &ComplexFamily, cap: u64) -> Result<ChainComplex> {
    let cells = enumerate_symm_deleted_join(fam, cap)?;
    let top = cells.iter().map(|c| c.dim()).max().unwrap_or(-1);
    if top < 0 {
        return Ok(ChainComplex { cells_by_dim: Vec::new(), boundary: Vec::new() });
    }
    let mut cells_by_dim: Vec<Vec<LabeledPartition>> = vec![Vec::new(); (top + 1) as usize];
    for c in cells {
        cells_by_dim[c.dim() as usize].push(c);
    }
    let index_by_dim: Vec<HashMap<u64, usize>> = cells_by_dim
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, c)| (c.code(), i)).collect())
        .collect();
    let mut boundary = Vec::with_capacity(cells_by_dim.len());
    // ∂_0 is the (implicit) augmentation; store an empty placeholder
    boundary.push(SparseMatrix { rows: 0, cols: vec![Vec::new(); cells_by_dim[0].len()] });
    for q in 1..cells_by_dim.len() {
        let rows = cells_by_dim[q - 1].len();
        let mut cols = Vec::with_capacity(cells_by_dim[q].len());
        for cell in &cells_by_dim[q] {
            let mut col = Vec::new();
            for (face, sign) in boundary_terms(cell) {
                // faces of a cell are always cells of the join
                let row = *index_by_dim[q - 1]
                    .get(&face.code())
                    .ok_or_else(|| Error::InvalidInput(format!("face {face} missing from enumeration")))?;
                col.push((row, sign));
            }
            cols.push(col);
        }
        boundary.push(SparseMatrix { rows, cols });
    }
    Ok(ChainComplex { cells_by_dim, boundary })
}

#[derive(Clone, Debug)]
pub struct BettiTable {
    /// Reduced Betti numbers by dimension.
    pub reduced: Vec<usize>,
    pub coefficients: String,
}

/// Reduced Betti numbers via ranks of the boundary maps, with the
/// augmentation map accounting for `H̃_0`.
pub fn reduced_homology_ranks<F: Field>(cc: &ChainComplex, field: &F, tag: &str) -> BettiTable {
    let top = cc.cells_by_dim.len();
    if top == 0 {
        return BettiTable { reduced: Vec::new(), coefficients: tag.into() };
    }
    // rank of ∂_q for q = 0 .. top; ∂_0 = augmentation (all-ones row)
    let mut ranks = vec![0usize; top + 1];
    ranks[0] = if cc.cells_by_dim[0].is_empty() { 0 } else { 1 };
    for q in 1..top {
        ranks[q] = cc.boundary[q].rank(field);
    }
    let reduced = (0..top)
        .map(|q| {
            let c_q = cc.cells_by_dim[q].len();
            c_q - ranks[q] - if q + 1 < top { ranks[q + 1] } else { 0 }
        })
        .collect();
    BettiTable { reduced, coefficients: tag.into() }
}

#[derive(Clone, Debug)]
pub struct ConnectivityVerdict {
    pub through_dim: i64,
    pub pass: bool,
    pub rational: Vec<usize>,
    pub mod_p: Vec<usize>,
    pub p: u64,
}

/// PASS iff reduced homology vanishes through `through_dim` over the
/// rationals and over GF(p). Homology vanishing is necessary, not
/// sufficient, for topological connectivity; this verdict is meant to be
/// paired with the Morse certificate.
pub fn verify_connectivity_bound(
    fam: &ComplexFamily,
    p: u64,
    through_dim: i64,
    cap: u64,
) -> Result<ConnectivityVerdict> {
    let cc = build_chain_complex(fam, cap)?;
    if !cc.boundary_squared_is_zero() {
        return Err(Error::InvalidInput("boundary squared is nonzero".into()));
    }
    let rational = reduced_homology_ranks(&cc, &Rationals, "rational").reduced;
    let mod_p = reduced_homology_ranks(&cc, &PrimeField { p }, &format!("mod-{p}")).reduced;
    let pass = (0..=through_dim).all(|q| {
        let q = q as usize;
        rational.get(q).copied().unwrap_or(0) == 0 && mod_p.get(q).copied().unwrap_or(0) == 0
    });
    Ok(ConnectivityVerdict { through_dim, pass, rational, mod_p, p })
}

/// Rational and mod-p tables disagree only in the presence of torsion;
/// surfaced, never hidden.
pub fn coefficient_disagreements(rational: &[usize], mod_p: &[usize]) -> Vec<usize> {
    (0..rational.len().max(mod_p.len()))
        .filter(|&q| rational.get(q).copied().unwrap_or(0) != mod_p.get(q).copied().unwrap_or(0))
        .collect()
}

/// Small helper used by tests: the sign of a rational.
pub fn rational_is_nonnegative(x: &BigRational) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{ComplexFamily, SimplicialComplex, VertexSet};
    use crate::families::make_bct_family;

    const CAP: u64 = 1 << 26;

    fn betti_q(fam: &ComplexFamily) -> Vec<usize> {
        let cc = build_chain_complex(fam, CAP).unwrap();
        assert!(cc.boundary_squared_is_zero());
        reduced_homology_ranks(&cc, &Rationals, "rational").reduced
    }

    #[test]
    fn full_simplex_is_acyclic() {
        let k = SimplicialComplex::full_simplex(3).unwrap();
        let fam = ComplexFamily::new(vec![k]).unwrap();
        let b = betti_q(&fam);
        assert!(b.iter().all(|&x| x == 0), "{b:?}");
    }

    #[test]
    fn two_points() {
        // r=2 on m=1: two 0-cells, reduced H_0 has rank 1
        let k = SimplicialComplex::full_simplex(1).unwrap();
        let fam = ComplexFamily::new(vec![k.clone(), k]).unwrap();
        let cc = build_chain_complex(&fam, CAP).unwrap();
        assert_eq!(cc.cell_count(0), 2);
        assert_eq!(cc.top_dim(), 0);
        let b = reduced_homology_ranks(&cc, &Rationals, "rational").reduced;
        assert_eq!(b, vec![1]);
    }

    #[test]
    fn boundary_of_simplex_is_a_sphere() {
        // r=1, K = ∂Δ_[4]: rank 1 in dimension 2, zero elsewhere
        let m = 4;
        let k = SimplicialComplex::full_simplex(m).unwrap().skeleton(2);
        let fam = ComplexFamily::new(vec![k]).unwrap();
        let b = betti_q(&fam);
        assert_eq!(b, vec![0, 0, 1]);
        let cc = build_chain_complex(&fam, CAP).unwrap();
        let b2 = reduced_homology_ranks(&cc, &PrimeField { p: 2 }, "mod-2").reduced;
        assert_eq!(b2, vec![0, 0, 1]);
    }

    #[test]
    fn circle_has_first_betti_one() {
        // boundary of a triangle
        let k = SimplicialComplex::full_simplex(3).unwrap().skeleton(1);
        let fam = ComplexFamily::new(vec![k]).unwrap();
        assert_eq!(betti_q(&fam), vec![0, 1]);
    }

    #[test]
    fn bct_main_instance_vanishes_through_dim_one() {
        let (_, _, fam) = make_bct_family(2, 1, 1).unwrap();
        let verdict = verify_connectivity_bound(&fam, 2, 1, CAP).unwrap();
        assert!(verdict.pass, "{verdict:?}");
        assert!(coefficient_disagreements(&verdict.rational, &verdict.mod_p).is_empty());
    }

    #[test]
    fn euler_characteristic_matches_betti_alternating_sum() {
        let (_, _, fam) = make_bct_family(2, 1, 1).unwrap();
        let cc = build_chain_complex(&fam, CAP).unwrap();
        let b = reduced_homology_ranks(&cc, &Rationals, "rational").reduced;
        // unreduced: b_0 = reduced_0 + 1
        let mut chi_b = 1i64;
        for (q, &rank) in b.iter().enumerate() {
            chi_b += if q % 2 == 0 { rank as i64 } else { -(rank as i64) };
        }
        assert_eq!(cc.euler_characteristic(), chi_b);
    }

    #[test]
    fn rank_of_known_matrices() {
        let mat = SparseMatrix {
            rows: 3,
            cols: vec![
                vec![(0, 1), (1, 2)],
                vec![(0, 2), (1, 4)],
                vec![(2, 5)],
            ],
        };
        assert_eq!(mat.rank(&Rationals), 2);
        assert_eq!(mat.rank(&PrimeField { p: 3 }), 2);
        // the second column is dependent over Q but the pair (1,2),(2,4)
        // degenerates differently mod 2
        assert_eq!(mat.rank(&PrimeField { p: 2 }), 2);
        let zero = SparseMatrix { rows: 4, cols: vec![Vec::new(); 3] };
        assert_eq!(zero.rank(&Rationals), 0);
    }

    #[test]
    fn join_cells_respect_sign_convention() {
        // a 2-cell with parts {2},{1,3}: positions in the concatenation
        // (2 | 1, 3) give signs +, -, +
        let cell = LabeledPartition::new(
            4,
            vec![VertexSet::from_labels(&[2]), VertexSet::from_labels(&[1, 3])],
        )
        .unwrap();
        let terms = boundary_terms(&cell);
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[0].1, 1);
        assert_eq!(terms[1].1, -1);
        assert_eq!(terms[2].1, 1);
    }
}
