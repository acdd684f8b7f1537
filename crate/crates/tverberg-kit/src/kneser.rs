//! The r-partite Kneser graph of missing top faces, the clique criterion,
//! and the consistency report tying it to the unavoidability deciders.

use serde::Serialize;

use crate::complex::{rainbow_complex, Coloring, ComplexFamily, SimplicialComplex, VertexSet};
use crate::error::{Error, Result};
use crate::unavoidability;

/// Vertices are pairs `(i, A)` with `A` a missing `(k+1)`-set of `K_i`
/// (complement taken inside `Δ^{(k)}`, or `ColΔ^{(k)}` in the rainbow
/// setting); edges join disjoint sets with distinct complex indices.
#[derive(Clone, Debug)]
pub struct KneserGraph {
    vertices: Vec<(usize, VertexSet)>,
}

impl KneserGraph {
    pub fn vertices(&self) -> &[(usize, VertexSet)] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        let (iu, au) = self.vertices[u];
        let (iv, av) = self.vertices[v];
        iu != iv && au.is_disjoint(av)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Branch and bound over the r-partition: a clique takes at most one
    /// vertex per complex index, so search extends one part at a time.
    pub fn find_clique(&self, q: usize) -> Option<Vec<usize>> {
        if q == 0 {
            return Some(Vec::new());
        }
        let r = self.vertices.iter().map(|&(i, _)| i + 1).max().unwrap_or(0);
        let mut by_part: Vec<Vec<usize>> = vec![Vec::new(); r];
        for (idx, &(i, _)) in self.vertices.iter().enumerate() {
            by_part[i].push(idx);
        }
        let mut chosen = Vec::new();
        self.extend(&by_part, 0, q, &mut chosen)
    }

    fn extend(
        &self,
        by_part: &[Vec<usize>],
        part: usize,
        q: usize,
        chosen: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if chosen.len() == q {
            return Some(chosen.clone());
        }
        if part >= by_part.len() || chosen.len() + (by_part.len() - part) < q {
            return None;
        }
        for &v in &by_part[part] {
            if chosen.iter().all(|&u| self.adjacent(u, v)) {
                chosen.push(v);
                if let Some(c) = self.extend(by_part, part + 1, q, chosen) {
                    return Some(c);
                }
                chosen.pop();
            }
        }
        // skip this part entirely
        self.extend(by_part, part + 1, q, chosen)
    }
}

/// Builds `Γ(𝒦)`. Each `K_i` must be `(m,k)`-balanced, or rainbow balanced
/// when a coloring is supplied.
pub fn build_gamma(
    fam: &ComplexFamily,
    k: u32,
    coloring: Option<&Coloring>,
) -> Result<KneserGraph> {
    let m = fam.ground_size();
    let ambient = match coloring {
        Some(c) => rainbow_complex(c, k as i32),
        None => SimplicialComplex::full_simplex(m)?.skeleton(k as i32),
    };
    let mut vertices = Vec::new();
    for (i, ki) in fam.members().iter().enumerate() {
        let balanced = match coloring {
            Some(c) => ki.is_rainbow_balanced(c, k),
            None => ki.is_balanced(k),
        };
        if !balanced {
            let worst = ki.faces().map(|f| f.len()).max().unwrap_or(0);
            return Err(Error::Precondition(format!(
                "K_{} is not (m,k){}-balanced for k={k} (max face size {worst})",
                i + 1,
                if coloring.is_some() { "-rainbow" } else { "" },
            )));
        }
        for f in ambient.faces() {
            if f.len() == k + 1 && !ki.contains(f) {
                vertices.push((i, f));
            }
        }
    }
    Ok(KneserGraph { vertices })
}

#[derive(Clone, Debug, Serialize)]
pub struct PropositionReport {
    pub r: usize,
    pub s: u32,
    pub rainbow: bool,
    pub unavoidable: bool,
    pub clique_size_checked: usize,
    pub clique: Option<Vec<(usize, Vec<u32>)>>,
    /// False only when a verdict pair contradicts the proposition (or, in
    /// the rainbow setting, its converse).
    pub consistent: bool,
}

/// Checks the clique criterion against the unavoidability decider:
/// unavoidable families must have no `(r-s+1)`-clique, and in the
/// rainbow-balanced setting no-clique families must be unavoidable.
pub fn check_proposition(
    fam: &ComplexFamily,
    k: u32,
    s: u32,
    coloring: Option<&Coloring>,
    cap: u64,
) -> Result<PropositionReport> {
    let gamma = build_gamma(fam, k, coloring)?;
    let q = fam.r() - s as usize + 1;
    let clique = gamma.find_clique(q);
    let unavoidable = match coloring {
        Some(c) => unavoidability::is_rs_rainbow_unavoidable(fam, c, s, cap)?.is_none(),
        None => unavoidability::is_collectively_rs_unavoidable(fam, s, cap)?.is_none(),
    };
    let mut consistent = !(unavoidable && clique.is_some());
    if coloring.is_some() && clique.is_none() && !unavoidable {
        consistent = false; // converse holds in the rainbow-balanced setting
    }
    Ok(PropositionReport {
        r: fam.r(),
        s,
        rainbow: coloring.is_some(),
        unavoidable,
        clique_size_checked: q,
        clique: clique.map(|c| {
            c.iter().map(|&v| (gamma.vertices[v].0 + 1, gamma.vertices[v].1.to_labels())).collect()
        }),
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 1 << 24;

    #[test]
    fn full_skeleta_give_empty_graph() {
        let m = 5;
        let k = 1;
        let top = SimplicialComplex::full_simplex(m).unwrap().skeleton(k as i32);
        let fam = ComplexFamily::new(vec![top.clone(), top]).unwrap();
        let g = build_gamma(&fam, k, None).unwrap();
        assert_eq!(g.num_vertices(), 0);
        assert!(g.find_clique(1).is_none());
    }

    #[test]
    fn identical_missing_sets_never_adjacent() {
        // r=2, k=0, m=3, both complexes missing {3}
        let faces = [VertexSet::from_labels(&[1]), VertexSet::from_labels(&[2])];
        let k = SimplicialComplex::from_maximal_faces(3, &faces).unwrap();
        let fam = ComplexFamily::new(vec![k.clone(), k]).unwrap();
        let g = build_gamma(&fam, 0, None).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert!(g.edges().is_empty());
        assert!(g.find_clique(1).is_some());
        assert!(g.find_clique(2).is_none());
    }

    #[test]
    fn disjoint_missing_sets_give_an_edge() {
        let m = 3;
        let k1 = SimplicialComplex::from_maximal_faces(
            m,
            &[VertexSet::from_labels(&[2]), VertexSet::from_labels(&[3])],
        )
        .unwrap();
        let k2 = SimplicialComplex::from_maximal_faces(
            m,
            &[VertexSet::from_labels(&[1]), VertexSet::from_labels(&[3])],
        )
        .unwrap();
        let fam = ComplexFamily::new(vec![k1, k2]).unwrap();
        let g = build_gamma(&fam, 0, None).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.edges().len(), 1);
        let clique = g.find_clique(2).unwrap();
        assert_eq!(clique.len(), 2);
    }

    #[test]
    fn unbalanced_member_rejected() {
        let m = 4;
        let big = SimplicialComplex::full_simplex(m).unwrap();
        let fam = ComplexFamily::new(vec![big.clone(), big]).unwrap();
        assert!(build_gamma(&fam, 0, None).is_err());
    }

    #[test]
    fn clique_finder_matches_brute_force() {
        // soundness and completeness against subset enumeration
        let m = 6;
        let k = 1;
        let full = SimplicialComplex::full_simplex(m).unwrap();
        for variant in 0..4u32 {
            let mut k1 = full.skeleton(0);
            let mut k2 = full.skeleton(0);
            let mut x = variant.wrapping_mul(0x9e3779b9).wrapping_add(7);
            for _ in 0..8 {
                x = x.wrapping_mul(1664525).wrapping_add(1013904223);
                let a = 1 + (x >> 8) % m;
                let b = 1 + (x >> 16) % m;
                if a != b {
                    let e = VertexSet::from_labels(&[a, b]);
                    if x & 1 == 0 {
                        k1.insert_face_closed(e);
                    } else {
                        k2.insert_face_closed(e);
                    }
                }
            }
            let fam = ComplexFamily::new(vec![k1, k2]).unwrap();
            let g = build_gamma(&fam, k, None).unwrap();
            for q in 1..=2usize {
                let found = g.find_clique(q);
                if let Some(c) = &found {
                    assert_eq!(c.len(), q);
                    for i in 0..q {
                        for j in i + 1..q {
                            assert!(g.adjacent(c[i], c[j]));
                        }
                    }
                }
                // brute force over all q-subsets
                let n = g.num_vertices();
                let mut exists = false;
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() as usize != q {
                        continue;
                    }
                    let verts: Vec<usize> =
                        (0..n).filter(|&i| (mask >> i) & 1 == 1).collect();
                    if verts.iter().enumerate().all(|(a, &u)| {
                        verts[a + 1..].iter().all(|&v| g.adjacent(u, v))
                    }) {
                        exists = true;
                        break;
                    }
                }
                assert_eq!(found.is_some(), exists);
            }
        }
    }

    #[test]
    fn enlarging_members_removes_vertices() {
        let c = Coloring::contiguous_blocks(2, 1).unwrap();
        let small = rainbow_complex(&c, 0);
        let big = rainbow_complex(&c, 1);
        let fam_small = ComplexFamily::new(vec![small, big.clone()]).unwrap();
        let fam_big = ComplexFamily::new(vec![big.clone(), big]).unwrap();
        let g_small = build_gamma(&fam_small, 1, Some(&c)).unwrap();
        let g_big = build_gamma(&fam_big, 1, Some(&c)).unwrap();
        assert!(g_big.num_vertices() < g_small.num_vertices());
        assert_eq!(g_big.num_vertices(), 0);
    }

    #[test]
    fn proposition_consistency_on_remark_family() {
        // balanced non-rainbow: empty graph but not unavoidable; the
        // converse direction is only enforced in the rainbow setting
        let (r, s, k) = (2usize, 1u32, 0u32);
        let m = (k + 2) * (r as u32 - s + 1) + 1;
        let kc = SimplicialComplex::full_simplex(m).unwrap().skeleton(k as i32);
        let fam = ComplexFamily::new(vec![kc.clone(), kc]).unwrap();
        let rep = check_proposition(&fam, k, s, None, CAP).unwrap();
        assert!(!rep.unavoidable);
        assert!(rep.clique.is_none());
        assert!(rep.consistent);
    }
}
