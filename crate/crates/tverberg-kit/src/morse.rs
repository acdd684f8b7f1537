//! The matching procedure on `SymmDelJoin(𝒦)` and the machine checks for
//! everything the construction promises: vector-field validity, acyclicity
//! (direct cycle search and the lexicographic pivot argument), the critical
//! cell census, and the resulting connectivity certificate.
//!
//! The procedure runs in `r` big steps of `k+1` small steps. At step
//! `(j,i)` each still-unmatched cell gets the pivot
//! `a_j^i = min(((A_j ∪ B) \ [1, a_{j-1}^i]) ∩ C_i)` (no subtraction when
//! `j = 1`) and is matched with the cell obtained by toggling the pivot
//! between `A_j` and `B`, whenever that partner is admissible and still
//! unmatched. Toggling the pivot does not change any `A_q ∪ B`, so a cell
//! and its partner always agree on the entire pivot sequence.

use std::collections::HashMap;

use crate::complex::{
    enumerate_symm_deleted_join, is_admissible, admissible_assignment, Coloring, ComplexFamily,
    LabeledPartition, VertexSet,
};
use crate::error::{Error, Result};
use crate::unavoidability;

/// One entry of the pivot sequence; `IllDefined` compares greater than any
/// label, matching the `a = ∞` convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PiEntry {
    Label(u32),
    IllDefined,
}

/// The full pivot sequence `Π(α) = (a_1^1, .., a_1^{k+1}, a_2^1, .., a_r^{k+1})`
/// of a cell, in step-processing order (part-major). Depends only on the
/// cell, the coloring, and the global vertex order.
pub fn pi_sequence(cell: &LabeledPartition, coloring: &Coloring) -> Vec<PiEntry> {
    let r = cell.num_parts();
    let colors = coloring.num_colors();
    let b = cell.remainder();
    let mut pi = Vec::with_capacity(r * colors);
    for j in 0..r {
        let pool_base = cell.part(j).union(b);
        for i in 0..colors {
            let mut pool = pool_base.intersection(coloring.class(i));
            if j > 0 {
                match pi[(j - 1) * colors + i] {
                    PiEntry::Label(prev) => {
                        pool = pool.difference(VertexSet::interval_to(prev));
                    }
                    PiEntry::IllDefined => {
                        pi.push(PiEntry::IllDefined);
                        continue;
                    }
                }
            }
            pi.push(match pool.min_label() {
                Some(l) => PiEntry::Label(l),
                None => PiEntry::IllDefined,
            });
        }
    }
    pi
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPair {
    /// The cell with the pivot in `B`.
    pub lower: LabeledPartition,
    /// The cell with the pivot in `A_j`; one dimension higher.
    pub upper: LabeledPartition,
    /// 1-based `(j, i)`: big step (part) and small step (color).
    pub step: (u32, u32),
}

#[derive(Clone, Debug, Default)]
pub struct DiscreteVectorField {
    pub pairs: Vec<MatchedPair>,
    pub critical: Vec<LabeledPartition>,
}

/// Where a cell ended up, per the trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellFate {
    Matched { step: (u32, u32) },
    Critical,
}

pub struct MorseRun {
    pub field: DiscreteVectorField,
    pub cells: Vec<LabeledPartition>,
    /// Pivot sequences, parallel to `cells`.
    pub pi: Vec<Vec<PiEntry>>,
    pub fate: Vec<CellFate>,
    /// Ill-defined pivots encountered at big step `r` (type-3 skips), as
    /// `(cell index, step)`.
    pub type3: Vec<(usize, (u32, u32))>,
    pub warnings: Vec<String>,
}

/// Runs the matching procedure. Preconditions (rainbow balancedness,
/// `|C_i| = 2r-1`, `(r,s)`-rainbow unavoidability) are checked; with
/// `force` they degrade to warnings so that negative controls can run.
pub fn run_matching(
    fam: &ComplexFamily,
    coloring: &Coloring,
    k: u32,
    s: u32,
    force: bool,
    cap: u64,
) -> Result<MorseRun> {
    let r = fam.r();
    let mut warnings = Vec::new();
    let mut precondition = |msg: String| -> Result<()> {
        if force {
            warnings.push(msg);
            Ok(())
        } else {
            Err(Error::Precondition(msg))
        }
    };
    if coloring.num_colors() != (k + 1) as usize {
        return Err(Error::Precondition(format!(
            "coloring has {} classes, expected k+1 = {}",
            coloring.num_colors(),
            k + 1
        )));
    }
    for (i, c) in coloring.classes().iter().enumerate() {
        if c.len() as usize != 2 * r - 1 {
            precondition(format!("|C_{}| = {} != 2r-1 = {}", i + 1, c.len(), 2 * r - 1))?;
        }
    }
    for (i, ki) in fam.members().iter().enumerate() {
        if !ki.is_rainbow_balanced(coloring, k) {
            precondition(format!("K_{} is not (m,k)-rainbow balanced", i + 1))?;
        }
    }
    match unavoidability::is_rs_rainbow_unavoidable(fam, coloring, s, cap) {
        Ok(None) => {}
        Ok(Some(_)) => {
            precondition(format!("family is not (r,{s})-rainbow unavoidable"))?;
        }
        Err(e) => precondition(format!("unavoidability check failed: {e}"))?,
    }

    let cells = enumerate_symm_deleted_join(fam, cap)?;
    let index: HashMap<u64, usize> = cells.iter().enumerate().map(|(i, c)| (c.code(), i)).collect();
    let pi: Vec<Vec<PiEntry>> = cells.iter().map(|c| pi_sequence(c, coloring)).collect();

    let colors = (k + 1) as usize;
    let mut matched: Vec<Option<(usize, (u32, u32))>> = vec![None; cells.len()];
    let mut pairs = Vec::new();
    let mut type3 = Vec::new();
    for j in 0..r {
        for i in 0..colors {
            let step = (j as u32 + 1, i as u32 + 1);
            for idx in 0..cells.len() {
                if matched[idx].is_some() {
                    continue;
                }
                let pivot = match pi[idx][j * colors + i] {
                    PiEntry::Label(a) => a,
                    PiEntry::IllDefined => {
                        if j + 1 < r && !force {
                            return Err(Error::Precondition(format!(
                                "pivot a_{}^{} ill-defined for cell {} before big step r",
                                j + 1,
                                i + 1,
                                cells[idx]
                            )));
                        }
                        type3.push((idx, step));
                        continue;
                    }
                };
                let cell = &cells[idx];
                let partner = if cell.part(j).contains(pivot) {
                    let down = cell.with_vertex_removed(j, pivot);
                    if !down.is_cell() {
                        continue; // the would-be partner is the empty partition
                    }
                    down
                } else {
                    debug_assert!(cell.remainder().contains(pivot));
                    cell.with_vertex_in_part(j, pivot)
                };
                let Some(&pidx) = index.get(&partner.code()) else {
                    continue; // partner not admissible
                };
                if matched[pidx].is_some() {
                    continue;
                }
                matched[idx] = Some((pidx, step));
                matched[pidx] = Some((idx, step));
                let (lower, upper) = if cell.remainder().contains(pivot) {
                    (cells[idx].clone(), partner)
                } else {
                    (partner, cells[idx].clone())
                };
                pairs.push(MatchedPair { lower, upper, step });
            }
        }
    }

    let mut critical = Vec::new();
    let mut fate = Vec::with_capacity(cells.len());
    for (idx, cell) in cells.iter().enumerate() {
        match matched[idx] {
            Some((_, step)) => fate.push(CellFate::Matched { step }),
            None => {
                critical.push(cell.clone());
                fate.push(CellFate::Critical);
            }
        }
    }
    Ok(MorseRun {
        field: DiscreteVectorField { pairs, critical },
        cells,
        pi,
        fate,
        type3,
        warnings,
    })
}

/// All facets of a cell in the join: one vertex moved from one part into
/// `B`, keeping at least one vertex overall.
pub fn facets(cell: &LabeledPartition) -> Vec<(usize, u32, LabeledPartition)> {
    let mut out = Vec::new();
    for j in 0..cell.num_parts() {
        for v in cell.part(j).iter() {
            let f = cell.with_vertex_removed(j, v);
            if f.is_cell() {
                out.push((j, v, f));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct FieldReport {
    pub violations: Vec<String>,
}

impl FieldReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-checks the three vector-field invariants against a fresh cell
/// enumeration: facet-pairing, at most one pair per cell, and exact
/// coverage of the join by pairs plus criticals.
pub fn verify_vector_field(
    field: &DiscreteVectorField,
    fam: &ComplexFamily,
    cap: u64,
) -> Result<FieldReport> {
    let mut report = FieldReport::default();
    let cells = enumerate_symm_deleted_join(fam, cap)?;
    let mut seen: HashMap<u64, u32> = HashMap::new();
    for pair in &field.pairs {
        for cell in [&pair.lower, &pair.upper] {
            if !cell.is_cell() || !is_admissible(cell, fam) {
                report.violations.push(format!("{cell} in a pair is not a cell of the join"));
            }
            *seen.entry(cell.code()).or_insert(0) += 1;
        }
        if pair.upper.dim() != pair.lower.dim() + 1 {
            report
                .violations
                .push(format!("pair ({}, {}) does not step dimension by one", pair.lower, pair.upper));
        }
        let is_facet = pair.lower.is_face_of(&pair.upper);
        if !is_facet || pair.upper.dim() != pair.lower.dim() + 1 {
            report
                .violations
                .push(format!("{} is not a facet of {}", pair.lower, pair.upper));
        }
    }
    for cell in &field.critical {
        *seen.entry(cell.code()).or_insert(0) += 1;
    }
    for (code, count) in &seen {
        if *count > 1 {
            let cell = cells.iter().find(|c| c.code() == *code);
            report.violations.push(format!(
                "cell {} appears {count} times in the field",
                cell.map(|c| c.to_string()).unwrap_or_else(|| format!("#{code}"))
            ));
        }
    }
    for cell in &cells {
        if !seen.contains_key(&cell.code()) {
            report.violations.push(format!("cell {cell} is covered by neither pairs nor criticals"));
        }
    }
    Ok(report)
}

/// Searches for a closed gradient path by depth-first search on the pair
/// graph: pair `p -> q` whenever `q`'s lower cell is a facet of `p`'s upper
/// cell other than `p`'s own lower cell.
pub fn verify_acyclic(field: &DiscreteVectorField) -> Option<Vec<LabeledPartition>> {
    let lower_index: HashMap<u64, usize> =
        field.pairs.iter().enumerate().map(|(i, p)| (p.lower.code(), i)).collect();
    let succs: Vec<Vec<usize>> = field
        .pairs
        .iter()
        .map(|p| {
            facets(&p.upper)
                .into_iter()
                .filter(|(_, _, f)| *f != p.lower)
                .filter_map(|(_, _, f)| lower_index.get(&f.code()).copied())
                .collect()
        })
        .collect();
    // iterative three-color DFS
    let n = field.pairs.len();
    let mut color = vec![0u8; n]; // 0 white, 1 gray, 2 black
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        color[start] = 1;
        let mut path = vec![start];
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < succs[node].len() {
                let child = succs[node][*next];
                *next += 1;
                match color[child] {
                    0 => {
                        color[child] = 1;
                        stack.push((child, 0));
                        path.push(child);
                    }
                    1 => {
                        // found a closed path: report alternating cells
                        let pos = path.iter().position(|&p| p == child).unwrap();
                        let mut cycle = Vec::new();
                        for &p in &path[pos..] {
                            cycle.push(field.pairs[p].lower.clone());
                            cycle.push(field.pairs[p].upper.clone());
                        }
                        cycle.push(field.pairs[child].lower.clone());
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                color[node] = 2;
                stack.pop();
                path.pop();
            }
        }
    }
    None
}

#[derive(Clone, Debug, Default)]
pub struct PiReport {
    /// Non-decreasing gradient-path steps, as `(from lower cell, to lower cell)`.
    pub violations: Vec<(LabeledPartition, LabeledPartition)>,
    pub edges_checked: u64,
}

impl PiReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The lexicographic argument: along every realized gradient-path edge
/// `α_t -> α_{t+1}` (the next cell matched upward in a different pair),
/// the pair `(Π, matching step)` must strictly decrease. The matching step
/// is the tie-breaker: removing an earlier color of the same part leaves
/// `Π` unchanged but lands on a cell matched at a strictly earlier step.
pub fn verify_pi_monotone(field: &DiscreteVectorField, coloring: &Coloring) -> PiReport {
    let lower_index: HashMap<u64, usize> =
        field.pairs.iter().enumerate().map(|(i, p)| (p.lower.code(), i)).collect();
    let mut report = PiReport::default();
    for pair in &field.pairs {
        let pi_from = pi_sequence(&pair.lower, coloring);
        for (_, _, facet) in facets(&pair.upper) {
            if facet == pair.lower {
                continue;
            }
            let Some(&next) = lower_index.get(&facet.code()) else { continue };
            report.edges_checked += 1;
            let pi_to = pi_sequence(&facet, coloring);
            if pi_to > pi_from || (pi_to == pi_from && field.pairs[next].step >= pair.step) {
                report.violations.push((pair.lower.clone(), facet));
            }
        }
    }
    report
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub zero_dim_critical: Vec<LabeledPartition>,
    /// Critical cells of positive dimension with fewer than `rk+s` vertices.
    pub too_small: Vec<LabeledPartition>,
    /// Critical cells of positive dimension that are proper faces of some
    /// other cell.
    pub non_maximal: Vec<LabeledPartition>,
    /// Diagnostic: whether the identity assignment `A_i ∈ K_i` happens to
    /// be admissible for each critical cell.
    pub identity_admissible: Vec<(LabeledPartition, bool)>,
    pub min_vertices: u32,
}

impl CensusReport {
    pub fn ok(&self) -> bool {
        self.zero_dim_critical.len() == 1 && self.too_small.is_empty() && self.non_maximal.is_empty()
    }
}

/// Census of unmatched cells: exactly one of dimension 0, all others with
/// at least `rk+s` vertices and maximal in the join.
pub fn verify_critical_census(
    field: &DiscreteVectorField,
    fam: &ComplexFamily,
    min_vertices: u32,
) -> CensusReport {
    let mut report = CensusReport {
        zero_dim_critical: Vec::new(),
        too_small: Vec::new(),
        non_maximal: Vec::new(),
        identity_admissible: Vec::new(),
        min_vertices,
    };
    for cell in &field.critical {
        let identity = (0..fam.r()).all(|i| fam.member(i).contains(cell.part(i)));
        report.identity_admissible.push((cell.clone(), identity));
        if cell.dim() == 0 {
            report.zero_dim_critical.push(cell.clone());
            continue;
        }
        if cell.total_size() < min_vertices {
            report.too_small.push(cell.clone());
        }
        let extendable = cell.remainder().iter().any(|v| {
            (0..cell.num_parts()).any(|j| is_admissible(&cell.with_vertex_in_part(j, v), fam))
        });
        if extendable {
            report.non_maximal.push(cell.clone());
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The field certifies `(level)`-connectivity of the join.
    Certified { level: i64 },
    Uncertified { reason: String },
}

/// Turns the checks into the connectivity certificate: a valid acyclic
/// field whose census passes certifies `(rk+s-2)`-connectivity.
pub fn connectivity_certificate(
    field_report: &FieldReport,
    cycle: &Option<Vec<LabeledPartition>>,
    census: &CensusReport,
    rk_plus_s: u32,
) -> Verdict {
    if !field_report.ok() {
        return Verdict::Uncertified { reason: format!("vector field invalid: {}", field_report.violations[0]) };
    }
    if cycle.is_some() {
        return Verdict::Uncertified { reason: "closed gradient path found".into() };
    }
    if !census.ok() {
        return Verdict::Uncertified {
            reason: format!(
                "critical census fails: {} zero-cells, {} too small, {} non-maximal",
                census.zero_dim_critical.len(),
                census.too_small.len(),
                census.non_maximal.len()
            ),
        };
    }
    Verdict::Certified { level: rk_plus_s as i64 - 2 }
}

/// Convenience wrapper: extracts, for each critical cell, an assignment of
/// parts to complexes if one exists (diagnostics for reports).
pub fn critical_assignments(
    field: &DiscreteVectorField,
    fam: &ComplexFamily,
) -> Vec<(LabeledPartition, Option<Vec<usize>>)> {
    field
        .critical
        .iter()
        .map(|c| (c.clone(), admissible_assignment(c, fam)))
        .collect()
}
