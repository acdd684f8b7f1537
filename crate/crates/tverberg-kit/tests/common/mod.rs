//! Independent reference implementations used only by integration tests:
//! a naive matcher for the Morse procedure (ordered-set representation,
//! factorial admissibility, no indexing tricks) and a no-filter Tverberg
//! oracle. Written against the definitions, not against the library code.

use std::collections::{BTreeSet, HashSet};

use tverberg_kit::complex::{ComplexFamily, VertexSet};
use tverberg_kit::geometry::{hulls_intersect, PointConfiguration};

pub type RefCell_ = Vec<BTreeSet<u32>>;

/// Faces of a member complex as plain sorted-set collections.
pub fn reference_faces(fam: &ComplexFamily, i: usize) -> HashSet<BTreeSet<u32>> {
    fam.member(i)
        .faces()
        .map(|f| f.to_labels().into_iter().collect())
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Admissibility by trying all r! permutations.
pub fn reference_admissible(cell: &RefCell_, members: &[HashSet<BTreeSet<u32>>]) -> bool {
    let r = cell.len();
    permutations(r)
        .into_iter()
        .any(|perm| (0..r).all(|i| members[i].contains(&cell[perm[i]])))
}

/// All admissible cells (at least one vertex placed), enumerated by direct
/// assignment of every vertex to a part or to the remainder.
pub fn reference_cells(m: u32, members: &[HashSet<BTreeSet<u32>>]) -> Vec<RefCell_> {
    let r = members.len();
    let mut out = Vec::new();
    let mut cell: RefCell_ = vec![BTreeSet::new(); r];
    fn go(
        v: u32,
        m: u32,
        r: usize,
        cell: &mut RefCell_,
        members: &[HashSet<BTreeSet<u32>>],
        out: &mut Vec<RefCell_>,
    ) {
        if v > m {
            if cell.iter().any(|p| !p.is_empty()) && reference_admissible(cell, members) {
                out.push(cell.clone());
            }
            return;
        }
        for j in 0..r {
            cell[j].insert(v);
            go(v + 1, m, r, cell, members, out);
            cell[j].remove(&v);
        }
        go(v + 1, m, r, cell, members, out);
    }
    go(1, m, r, &mut cell, members, &mut out);
    out
}

/// A matched pair in the reference representation, with its 1-based step.
pub type RefPair = (RefCell_, RefCell_, (u32, u32));

/// The matching procedure, written naively: at step (j, i) each unmatched
/// cell computes its pivot min(((A_j ∪ B) \ [1, a_{j-1}^i]) ∩ C_i) and is
/// matched with the toggle partner when that partner is an admissible,
/// still-unmatched cell. The toggle fixes every A_q ∪ B, so pairing is
/// order-independent within a step.
pub fn reference_matching(
    m: u32,
    classes: &[BTreeSet<u32>],
    members: &[HashSet<BTreeSet<u32>>],
) -> (Vec<RefPair>, Vec<RefCell_>) {
    let r = members.len();
    let cells = reference_cells(m, members);
    let ground: BTreeSet<u32> = (1..=m).collect();
    let remainder = |cell: &RefCell_| -> BTreeSet<u32> {
        let used: BTreeSet<u32> = cell.iter().flatten().copied().collect();
        ground.difference(&used).copied().collect()
    };
    // pivot a_j^i, or None when ill-defined (cascades from earlier parts):
    // a_q^i = min((A_q ∪ B) ∩ C_i ∩ (a_{q-1}^i, ∞)) for q = 1, .., j
    let pivot = |cell: &RefCell_, j: usize, i: usize| -> Option<u32> {
        let b = remainder(cell);
        let mut prev = 0u32;
        for q in 0..=j {
            prev = cell[q]
                .union(&b)
                .copied()
                .filter(|v| classes[i].contains(v) && *v > prev)
                .min()?;
        }
        Some(prev)
    };
    let mut matched = vec![false; cells.len()];
    let mut pairs = Vec::new();
    for j in 0..r {
        for i in 0..classes.len() {
            for idx in 0..cells.len() {
                if matched[idx] {
                    continue;
                }
                let Some(a) = pivot(&cells[idx], j, i) else { continue };
                let mut partner = cells[idx].clone();
                let lower_is_self = !cells[idx][j].contains(&a);
                if lower_is_self {
                    partner[j].insert(a);
                } else {
                    partner[j].remove(&a);
                }
                if partner.iter().all(|p| p.is_empty()) {
                    continue;
                }
                let Some(pidx) = cells.iter().position(|c| *c == partner) else {
                    continue; // not admissible
                };
                if matched[pidx] {
                    continue;
                }
                matched[idx] = true;
                matched[pidx] = true;
                let (lower, upper) = if lower_is_self {
                    (cells[idx].clone(), partner)
                } else {
                    (partner, cells[idx].clone())
                };
                pairs.push((lower, upper, (j as u32 + 1, i as u32 + 1)));
            }
        }
    }
    let critical = cells
        .iter()
        .zip(&matched)
        .filter(|(_, &m)| !m)
        .map(|(c, _)| c.clone())
        .collect();
    (pairs, critical)
}

/// No-filter Tverberg oracle: enumerate every partition with all parts
/// nonempty, test hull intersection first, and only then check that the
/// parts can be assigned to the complexes (all r! permutations). Returns
/// whether any qualifying partition exists.
pub fn reference_tverberg_exists(config: &PointConfiguration, fam: &ComplexFamily) -> bool {
    let m = fam.ground_size();
    let r = fam.r();
    let members: Vec<HashSet<BTreeSet<u32>>> =
        (0..r).map(|i| reference_faces(fam, i)).collect();
    let mut cell: RefCell_ = vec![BTreeSet::new(); r];
    fn go(
        v: u32,
        m: u32,
        cell: &mut RefCell_,
        config: &PointConfiguration,
        members: &[HashSet<BTreeSet<u32>>],
    ) -> bool {
        let r = cell.len();
        if v > m {
            if cell.iter().any(|p| p.is_empty()) {
                return false;
            }
            let faces: Vec<VertexSet> = cell
                .iter()
                .map(|p| VertexSet::from_labels(&p.iter().copied().collect::<Vec<_>>()))
                .collect();
            return hulls_intersect(config, &faces).is_some()
                && reference_admissible(cell, members);
        }
        for j in 0..r {
            cell[j].insert(v);
            if go(v + 1, m, cell, config, members) {
                cell[j].remove(&v);
                return true;
            }
            cell[j].remove(&v);
        }
        go(v + 1, m, cell, config, members)
    }
    go(1, m, &mut cell, config, &members)
}
