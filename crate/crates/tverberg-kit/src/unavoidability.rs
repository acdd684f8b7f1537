//! Brute-force deciders for the unavoidability notions, with witness
//! extraction.
//!
//! Quantification is over ordered tuples `(A_1, .., A_r)` of pairwise
//! disjoint sets in `[m]`; empty sets are allowed. Enumeration is
//! deterministic: tuples ordered by total size `Σ|A_i|` ascending, then
//! lexicographically by the assignment vector (vertices in label order,
//! slots ordered part 1, .., part r, B). The returned witness is the first
//! violation in that order, which gives minimal-support witnesses such as
//! the counterexample shapes of the literature.

use serde::Serialize;

use crate::complex::{Coloring, ComplexFamily, SimplicialComplex, VertexSet};
use crate::error::{Error, Result};

/// A tuple violating an unavoidability property, with the per-coordinate
/// membership flags that were counted.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub parts: Vec<Vec<u32>>,
    pub member: Vec<bool>,
}

impl Witness {
    pub fn part_sets(&self) -> Vec<VertexSet> {
        self.parts.iter().map(|p| VertexSet::from_labels(p)).collect()
    }
}

struct Search<'a, F: Fn(usize, VertexSet) -> bool> {
    member: F,
    r: usize,
    m: u32,
    s: u32,
    rainbow: Option<&'a Coloring>,
    census: bool,
    violations: u64,
    first: Option<Witness>,
}

impl<'a, F: Fn(usize, VertexSet) -> bool> Search<'a, F> {
    fn leaf(&mut self, parts: &[VertexSet]) -> bool {
        let member: Vec<bool> = (0..self.r).map(|i| (self.member)(i, parts[i])).collect();
        let hits = member.iter().filter(|&&b| b).count() as u32;
        if hits < self.s {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(Witness {
                    parts: parts.iter().map(|p| p.to_labels()).collect(),
                    member,
                });
            }
            return !self.census; // stop unless a full census was requested
        }
        false
    }

    // assign vertices v..m, with `left` part-slots still to fill
    fn dfs(&mut self, v: u32, left: u32, parts: &mut [VertexSet]) -> bool {
        if v > self.m {
            debug_assert_eq!(left, 0);
            return self.leaf(parts);
        }
        let remaining = self.m - v + 1;
        if left > remaining {
            return false;
        }
        if left > 0 {
            for j in 0..self.r {
                let grown = parts[j].insert(v);
                if let Some(c) = self.rainbow {
                    if !c.is_rainbow(grown) {
                        continue;
                    }
                }
                parts[j] = grown;
                let stop = self.dfs(v + 1, left - 1, parts);
                parts[j] = parts[j].remove(v);
                if stop {
                    return true;
                }
            }
        }
        if remaining > left {
            return self.dfs(v + 1, left, parts); // v stays out (goes to B)
        }
        false
    }

    fn run(&mut self) {
        let mut parts = vec![VertexSet::EMPTY; self.r];
        for t in 0..=self.m {
            if self.dfs(1, t, &mut parts) {
                return;
            }
        }
    }
}

fn check_cap(r: usize, m: u32, cap: u64) -> Result<()> {
    match ((r + 1) as u64).checked_pow(m) {
        Some(states) if states <= cap => Ok(()),
        _ => Err(Error::ResourceLimit(format!(
            "(r+1)^m = {}^{m} exceeds cap {cap}",
            r + 1
        ))),
    }
}

fn decide<F: Fn(usize, VertexSet) -> bool>(
    member: F,
    r: usize,
    m: u32,
    s: u32,
    rainbow: Option<&Coloring>,
    cap: u64,
    census: bool,
) -> Result<(Option<Witness>, u64)> {
    if s == 0 || s as usize > r {
        return Err(Error::InvalidInput(format!("need 0 < s <= r, got s={s}, r={r}")));
    }
    check_cap(r, m, cap)?;
    let mut search =
        Search { member, r, m, s, rainbow, census, violations: 0, first: None };
    search.run();
    Ok((search.first, search.violations))
}

/// Collective `r`-unavoidability of a single complex: some coordinate of
/// every disjoint tuple lies in `K`. Returns `None` when the property
/// holds, else the first witness.
pub fn is_r_unavoidable(k: &SimplicialComplex, r: usize, cap: u64) -> Result<Option<Witness>> {
    is_rs_unavoidable_single(k, r, 1, cap)
}

/// Single-complex `(r,s)`-unavoidability: at least `s` coordinates in `K`.
pub fn is_rs_unavoidable_single(
    k: &SimplicialComplex,
    r: usize,
    s: u32,
    cap: u64,
) -> Result<Option<Witness>> {
    decide(|_, a| k.contains(a), r, k.ground_size(), s, None, cap, false).map(|(w, _)| w)
}

/// Collective `(r,s)`-unavoidability of an ordered family: at least `s`
/// coordinates `i` with `A_i ∈ K_i`.
pub fn is_collectively_rs_unavoidable(
    fam: &ComplexFamily,
    s: u32,
    cap: u64,
) -> Result<Option<Witness>> {
    decide(
        |i, a| fam.member(i).contains(a),
        fam.r(),
        fam.ground_size(),
        s,
        None,
        cap,
        false,
    )
    .map(|(w, _)| w)
}

/// `(r,s)`-rainbow unavoidability: quantified over ordered partitions of
/// `[m]` whose parts are all rainbow. Every `K_i` must itself be rainbow.
pub fn is_rs_rainbow_unavoidable(
    fam: &ComplexFamily,
    coloring: &Coloring,
    s: u32,
    cap: u64,
) -> Result<Option<Witness>> {
    for (i, k) in fam.members().iter().enumerate() {
        if !k.faces().all(|f| coloring.is_rainbow(f)) {
            return Err(Error::Precondition(format!(
                "K_{} contains a non-rainbow face",
                i + 1
            )));
        }
    }
    decide(
        |i, a| fam.member(i).contains(a),
        fam.r(),
        fam.ground_size(),
        s,
        Some(coloring),
        cap,
        false,
    )
    .map(|(w, _)| w)
}

/// Full census: the number of violating tuples (0 means the property holds).
pub fn violation_census(
    fam: &ComplexFamily,
    s: u32,
    coloring: Option<&Coloring>,
    cap: u64,
) -> Result<u64> {
    decide(
        |i, a| fam.member(i).contains(a),
        fam.r(),
        fam.ground_size(),
        s,
        coloring,
        cap,
        true,
    )
    .map(|(_, n)| n)
}
