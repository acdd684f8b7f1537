//! Ground-level combinatorics: vertex sets on a labeled ground set `[m]`,
//! colorings, simplicial complexes stored as explicit face sets, labeled
//! partitions (the cells of a symmetrized deleted join), and admissibility.
//!
//! Vertex labels are the integers `1..=m` with the usual total order. Sets
//! are bitmasks with label `v` at bit `v - 1`; everything is desk-scale,
//! `m <= 24`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_GROUND: u32 = 24;

pub type Label = u32;

/// A subset of the labeled ground set `[m]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_mask(mask: u32) -> Self {
        VertexSet(mask)
    }

    pub fn singleton(label: Label) -> Self {
        debug_assert!(label >= 1);
        VertexSet(1 << (label - 1))
    }

    pub fn from_labels(labels: &[Label]) -> Self {
        let mut mask = 0u32;
        for &l in labels {
            debug_assert!((1..=MAX_GROUND).contains(&l));
            mask |= 1 << (l - 1);
        }
        VertexSet(mask)
    }

    /// All of `[m]`.
    pub fn full(m: u32) -> Self {
        VertexSet(if m == 0 { 0 } else { (1u32 << m) - 1 })
    }

    /// The interval `[1, label]` of all labels `<= label`.
    pub fn interval_to(label: Label) -> Self {
        VertexSet((1u32 << label) - 1)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: Label) -> bool {
        label >= 1 && (self.0 >> (label - 1)) & 1 == 1
    }

    pub fn insert(self, label: Label) -> Self {
        VertexSet(self.0 | (1 << (label - 1)))
    }

    pub fn remove(self, label: Label) -> Self {
        VertexSet(self.0 & !(1 << (label - 1)))
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min_label(self) -> Option<Label> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() + 1)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Label> {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let l = mask.trailing_zeros() + 1;
                mask &= mask - 1;
                Some(l)
            }
        })
    }

    pub fn to_labels(self) -> Vec<Label> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, l) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A partition of `[m]` into color classes `C_1 .. C_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    m: u32,
    classes: Vec<VertexSet>,
}

impl Coloring {
    pub fn new(m: u32, classes: Vec<VertexSet>) -> Result<Self> {
        if m > MAX_GROUND {
            return Err(Error::InvalidInput(format!("ground size {m} exceeds {MAX_GROUND}")));
        }
        let mut seen = VertexSet::EMPTY;
        for (i, &c) in classes.iter().enumerate() {
            if !seen.is_disjoint(c) {
                return Err(Error::InvalidInput(format!("color class {} overlaps earlier ones", i + 1)));
            }
            seen = seen.union(c);
        }
        if seen != VertexSet::full(m) {
            return Err(Error::InvalidInput("color classes do not cover [m]".into()));
        }
        Ok(Coloring { m, classes })
    }

    /// The standard coloring with `k+1` contiguous blocks of size `2r-1`:
    /// `C_i = {(i-1)(2r-1)+1, .., i(2r-1)}`.
    pub fn contiguous_blocks(r: u32, k: u32) -> Result<Self> {
        let block = 2 * r - 1;
        let m = block * (k + 1);
        let classes = (0..=k)
            .map(|i| {
                VertexSet::from_labels(&(i * block + 1..=(i + 1) * block).collect::<Vec<_>>())
            })
            .collect();
        Coloring::new(m, classes)
    }

    pub fn ground_size(&self) -> u32 {
        self.m
    }

    pub fn num_colors(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, i: usize) -> VertexSet {
        self.classes[i]
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn color_of(&self, label: Label) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(label))
            .expect("label outside ground set")
    }

    /// `|V ∩ C_i| <= 1` for every color class.
    pub fn is_rainbow(&self, set: VertexSet) -> bool {
        self.classes.iter().all(|c| c.intersection(set).len() <= 1)
    }
}

/// A hereditary family of vertex sets on `[m]`, stored as the explicit set
/// of all faces (one bit per subset of `[m]`).
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    m: u32,
    words: Vec<u64>,
    count: u64,
}

impl SimplicialComplex {
    fn blank(m: u32) -> Result<Self> {
        if m > MAX_GROUND {
            return Err(Error::InvalidInput(format!("ground size {m} exceeds {MAX_GROUND}")));
        }
        let nbits = 1usize << m;
        Ok(SimplicialComplex { m, words: vec![0u64; nbits.div_ceil(64)], count: 0 })
    }

    /// The complex whose only face is the empty set.
    pub fn empty_face_only(m: u32) -> Result<Self> {
        let mut c = Self::blank(m)?;
        c.insert_mask(0);
        Ok(c)
    }

    /// The full simplex `Δ_[m] = 2^{[m]}`.
    pub fn full_simplex(m: u32) -> Result<Self> {
        let mut c = Self::blank(m)?;
        for mask in 0..(1u32 << m) {
            c.insert_mask(mask);
        }
        Ok(c)
    }

    /// Hereditary closure of the given maximal faces.
    pub fn from_maximal_faces(m: u32, maximal: &[VertexSet]) -> Result<Self> {
        let mut c = Self::empty_face_only(m)?;
        for f in maximal {
            if !f.is_subset_of(VertexSet::full(m)) {
                return Err(Error::InvalidInput(format!("face {f} has labels outside [1,{m}]")));
            }
            c.insert_face_closed(*f);
        }
        Ok(c)
    }

    /// Builds from an explicit face list; fails unless the list is hereditary.
    pub fn from_faces(m: u32, faces: &[VertexSet]) -> Result<Self> {
        let mut c = Self::blank(m)?;
        for f in faces {
            c.insert_mask(f.mask());
        }
        for f in faces {
            for l in f.iter() {
                if !c.contains(f.remove(l)) {
                    return Err(Error::InvalidInput(format!(
                        "face set is not hereditary: {} present but {} missing",
                        f,
                        f.remove(l)
                    )));
                }
            }
        }
        Ok(c)
    }

    fn insert_mask(&mut self, mask: u32) {
        let i = mask as usize;
        if self.words[i / 64] >> (i % 64) & 1 == 0 {
            self.words[i / 64] |= 1 << (i % 64);
            self.count += 1;
        }
    }

    /// Inserts a face together with all its subsets.
    pub fn insert_face_closed(&mut self, face: VertexSet) {
        // iterate all submasks of face.mask()
        let top = face.mask();
        let mut sub = top;
        loop {
            self.insert_mask(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & top;
        }
    }

    pub fn ground_size(&self) -> u32 {
        self.m
    }

    pub fn contains(&self, face: VertexSet) -> bool {
        let i = face.mask() as usize;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn face_count(&self) -> u64 {
        self.count
    }

    pub fn is_void(&self) -> bool {
        self.count == 0
    }

    pub fn faces(&self) -> impl Iterator<Item = VertexSet> + '_ {
        (0..(1u32 << self.m)).filter(|&mask| self.contains(VertexSet::from_mask(mask))).map(VertexSet::from_mask)
    }

    /// `max |F| - 1` over faces; -1 when only the empty face is present.
    pub fn dim(&self) -> i32 {
        self.faces().map(|f| f.len() as i32 - 1).max().unwrap_or(-1)
    }

    /// Faces that are not proper subsets of any other face.
    pub fn maximal_faces(&self) -> Vec<VertexSet> {
        self.faces()
            .filter(|&f| {
                (1..=self.m).all(|l| f.contains(l) || !self.contains(f.insert(l)))
            })
            .collect()
    }

    /// `{F ∈ K : dim F <= d}`, i.e. `|F| <= d+1`. `d = -1` keeps only the
    /// empty face.
    pub fn skeleton(&self, d: i32) -> SimplicialComplex {
        let cap = (d + 1).max(0) as u32;
        let mut out = Self::blank(self.m).expect("same ground");
        for f in self.faces() {
            if f.len() <= cap {
                out.insert_mask(f.mask());
            }
        }
        out
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.faces().all(|f| other.contains(f))
    }

    /// `Δ_[m]^{(k-1)} ⊆ K ⊆ Δ_[m]^{(k)}`: every set of size `<= k` is a face
    /// and no face has more than `k+1` vertices.
    pub fn is_balanced(&self, k: u32) -> bool {
        if self.is_void() {
            return false;
        }
        for mask in 0..(1u32 << self.m) {
            let f = VertexSet::from_mask(mask);
            if f.len() <= k && !self.contains(f) {
                return false;
            }
            if f.len() > k + 1 && self.contains(f) {
                return false;
            }
        }
        true
    }

    /// `ColΔ_[m]^{(k-1)} ⊆ K ⊆ ColΔ_[m]^{(k)}`: every face is rainbow, every
    /// rainbow set of size `<= k` is a face, and no face exceeds `k+1`
    /// vertices.
    pub fn is_rainbow_balanced(&self, coloring: &Coloring, k: u32) -> bool {
        if self.is_void() || coloring.ground_size() != self.m {
            return false;
        }
        for mask in 0..(1u32 << self.m) {
            let f = VertexSet::from_mask(mask);
            let present = self.contains(f);
            if present && (!coloring.is_rainbow(f) || f.len() > k + 1) {
                return false;
            }
            if !present && coloring.is_rainbow(f) && f.len() <= k {
                return false;
            }
        }
        true
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex(m={}, {} faces, maximal: ", self.m, self.count)?;
        let mut maximal = self.maximal_faces();
        maximal.sort();
        for (n, face) in maximal.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "{face}")?;
        }
        write!(f, ")")
    }
}

/// `ColΔ_[m]^{(dim_cap)}`: all rainbow sets of size `<= dim_cap + 1`.
pub fn rainbow_complex(coloring: &Coloring, dim_cap: i32) -> SimplicialComplex {
    let m = coloring.ground_size();
    let cap = (dim_cap + 1).max(0) as u32;
    let mut out = SimplicialComplex::blank(m).expect("valid coloring ground");
    for mask in 0..(1u32 << m) {
        let f = VertexSet::from_mask(mask);
        if f.len() <= cap && coloring.is_rainbow(f) {
            out.insert_mask(mask);
        }
    }
    out
}

/// Theorem-level parameter bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub r: u32,
    pub d: u32,
    pub k: u32,
    pub s: u32,
    pub m: u32,
}

impl Parameters {
    pub fn n(&self) -> u32 {
        self.m - 1
    }

    /// Smallest `(p, nu)` with `r = p^nu`, when `r` is a prime power.
    pub fn prime_power(r: u32) -> Option<(u32, u32)> {
        if r < 2 {
            return None;
        }
        let mut n = r;
        let mut p = 0;
        for q in 2..=n {
            if n % q == 0 {
                p = q;
                break;
            }
        }
        let mut nu = 0;
        while n % p == 0 {
            n /= p;
            nu += 1;
        }
        if n == 1 {
            Some((p, nu))
        } else {
            None
        }
    }

    fn basic(&self) -> Result<()> {
        if self.d < 1 || self.s == 0 || self.s > self.r || self.r < 2 {
            return Err(Error::InvalidInput(format!(
                "need r >= 2, d >= 1, 0 < s <= r; got r={}, d={}, s={}",
                self.r, self.d, self.s
            )));
        }
        Ok(())
    }

    /// `r(k-1) + s = (r-1)d` and `m = (2r-1)(k+1)`.
    pub fn validate_ctcruc(&self) -> Result<()> {
        self.basic()?;
        let lhs = self.r as i64 * (self.k as i64 - 1) + self.s as i64;
        let rhs = (self.r as i64 - 1) * self.d as i64;
        if lhs != rhs {
            return Err(Error::InvalidInput(format!(
                "identity r(k-1)+s = (r-1)d fails: {lhs} != {rhs}"
            )));
        }
        let m = (2 * self.r - 1) * (self.k + 1);
        if self.m != m {
            return Err(Error::InvalidInput(format!(
                "identity m = (2r-1)(k+1) fails: {} != {m}",
                self.m
            )));
        }
        Ok(())
    }

    /// `N = (r-1)(d+2) - s + 1`.
    pub fn validate_ttrsu(&self) -> Result<()> {
        self.basic()?;
        let n = (self.r as i64 - 1) * (self.d as i64 + 2) - self.s as i64 + 1;
        if self.n() as i64 != n {
            return Err(Error::InvalidInput(format!(
                "identity N = (r-1)(d+2)-s+1 fails: {} != {n}",
                self.n()
            )));
        }
        Ok(())
    }

    pub fn validate_prime_power(&self) -> Result<(u32, u32)> {
        Self::prime_power(self.r)
            .ok_or_else(|| Error::InvalidInput(format!("r = {} is not a prime power", self.r)))
    }
}

/// An ordered tuple `(A_1, .., A_r, B)` partitioning `[m]`; `B` is implicit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledPartition {
    m: u32,
    parts: Vec<VertexSet>,
}

impl LabeledPartition {
    pub fn new(m: u32, parts: Vec<VertexSet>) -> Result<Self> {
        let mut seen = VertexSet::EMPTY;
        for (i, &p) in parts.iter().enumerate() {
            if !p.is_subset_of(VertexSet::full(m)) {
                return Err(Error::InvalidInput(format!("part {} outside [1,{m}]", i + 1)));
            }
            if !seen.is_disjoint(p) {
                return Err(Error::InvalidInput(format!("part {} overlaps earlier parts", i + 1)));
            }
            seen = seen.union(p);
        }
        Ok(LabeledPartition { m, parts })
    }

    pub fn ground_size(&self) -> u32 {
        self.m
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, j: usize) -> VertexSet {
        self.parts[j]
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn remainder(&self) -> VertexSet {
        let mut used = VertexSet::EMPTY;
        for &p in &self.parts {
            used = used.union(p);
        }
        VertexSet::full(self.m).difference(used)
    }

    pub fn total_size(&self) -> u32 {
        self.parts.iter().map(|p| p.len()).sum()
    }

    /// Cell dimension `Σ|A_i| - 1`; the all-empty partition (dimension -1)
    /// is not a cell of the join.
    pub fn dim(&self) -> i64 {
        self.total_size() as i64 - 1
    }

    pub fn is_cell(&self) -> bool {
        self.total_size() >= 1
    }

    /// Moves one vertex of `B` into part `j`.
    pub fn with_vertex_in_part(&self, j: usize, label: Label) -> Self {
        debug_assert!(self.remainder().contains(label));
        let mut parts = self.parts.clone();
        parts[j] = parts[j].insert(label);
        LabeledPartition { m: self.m, parts }
    }

    /// Moves one vertex of part `j` into `B`.
    pub fn with_vertex_removed(&self, j: usize, label: Label) -> Self {
        debug_assert!(self.parts[j].contains(label));
        let mut parts = self.parts.clone();
        parts[j] = parts[j].remove(label);
        LabeledPartition { m: self.m, parts }
    }

    /// Base-`r+1` encoding: digit of vertex `v` is its part index, or `r`
    /// when `v ∈ B`. Vertex 1 is the most significant digit, so encoding
    /// order matches assignment-vector lexicographic order.
    pub fn code(&self) -> u64 {
        let r = self.parts.len() as u64;
        let mut code = 0u64;
        for v in 1..=self.m {
            let digit = self
                .parts
                .iter()
                .position(|p| p.contains(v))
                .map(|j| j as u64)
                .unwrap_or(r);
            code = code * (r + 1) + digit;
        }
        code
    }

    /// True iff `self` is a face of `other` in the join: `A_i ⊆ A'_i` for
    /// every part.
    pub fn is_face_of(&self, other: &LabeledPartition) -> bool {
        self.m == other.m
            && self.parts.len() == other.parts.len()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| a.is_subset_of(*b))
    }
}

impl fmt::Debug for LabeledPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for p in &self.parts {
            write!(f, "{p}, ")?;
        }
        write!(f, "B={})", self.remainder())
    }
}

impl fmt::Display for LabeledPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An ordered family `⟨K_1, .., K_r⟩` on a common ground set.
#[derive(Clone, Debug)]
pub struct ComplexFamily {
    members: Vec<SimplicialComplex>,
}

impl ComplexFamily {
    pub fn new(members: Vec<SimplicialComplex>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput("family must have at least one member".into()));
        }
        let m = members[0].ground_size();
        if members.iter().any(|k| k.ground_size() != m) {
            return Err(Error::InvalidInput("family members have different ground sets".into()));
        }
        Ok(ComplexFamily { members })
    }

    pub fn r(&self) -> usize {
        self.members.len()
    }

    pub fn ground_size(&self) -> u32 {
        self.members[0].ground_size()
    }

    pub fn member(&self, i: usize) -> &SimplicialComplex {
        &self.members[i]
    }

    pub fn members(&self) -> &[SimplicialComplex] {
        &self.members
    }
}

/// Perfect-matching feasibility on the `r x r` membership relation
/// `ok[i][j] = (A_j ∈ K_i)`, by augmenting paths. Returns, for each complex
/// index `i`, the part index assigned to it.
pub fn admissible_assignment(pi: &LabeledPartition, fam: &ComplexFamily) -> Option<Vec<usize>> {
    let r = fam.r();
    if pi.num_parts() != r || pi.ground_size() != fam.ground_size() {
        return None;
    }
    let ok: Vec<Vec<bool>> =
        (0..r).map(|i| (0..r).map(|j| fam.member(i).contains(pi.part(j))).collect()).collect();
    // part_of[i] = part matched to complex i; complex_of[j] = complex matched to part j
    let mut complex_of = vec![usize::MAX; r];
    fn augment(i: usize, ok: &[Vec<bool>], complex_of: &mut [usize], visited: &mut [bool]) -> bool {
        for j in 0..ok.len() {
            if ok[i][j] && !visited[j] {
                visited[j] = true;
                if complex_of[j] == usize::MAX
                    || augment(complex_of[j], ok, complex_of, visited)
                {
                    complex_of[j] = i;
                    return true;
                }
            }
        }
        false
    }
    for i in 0..r {
        let mut visited = vec![false; r];
        if !augment(i, &ok, &mut complex_of, &mut visited) {
            return None;
        }
    }
    let mut part_of = vec![usize::MAX; r];
    for (j, &i) in complex_of.iter().enumerate() {
        part_of[i] = j;
    }
    Some(part_of)
}

/// A partition is admissible iff some permutation `π` has `A_{π(i)} ∈ K_i`
/// for all `i`, i.e. it is a cell of `SymmDelJoin(𝒦)`.
pub fn is_admissible(pi: &LabeledPartition, fam: &ComplexFamily) -> bool {
    admissible_assignment(pi, fam).is_some()
}

/// Enumerates every admissible labeled partition with `Σ|A_i| >= 1`, each
/// exactly once, in lexicographic order of the assignment vector (vertices
/// in label order; slot order part 1, .., part r, then B).
pub fn enumerate_symm_deleted_join(
    fam: &ComplexFamily,
    cap: u64,
) -> Result<Vec<LabeledPartition>> {
    let m = fam.ground_size();
    let r = fam.r();
    let states = ((r + 1) as u64).checked_pow(m).filter(|&s| s <= cap);
    if states.is_none() {
        return Err(Error::ResourceLimit(format!(
            "(r+1)^m = {}^{} exceeds cap {}",
            r + 1,
            m,
            cap
        )));
    }
    let mut out = Vec::new();
    let mut parts = vec![VertexSet::EMPTY; r];
    fn dfs(
        v: u32,
        m: u32,
        parts: &mut Vec<VertexSet>,
        fam: &ComplexFamily,
        out: &mut Vec<LabeledPartition>,
    ) {
        if v > m {
            let lp = LabeledPartition { m, parts: parts.clone() };
            if lp.is_cell() && is_admissible(&lp, fam) {
                out.push(lp);
            }
            return;
        }
        for j in 0..parts.len() {
            let grown = parts[j].insert(v);
            // supersets of a universal non-face can never become admissible
            if fam.members().iter().any(|k| k.contains(grown)) {
                parts[j] = grown;
                dfs(v + 1, m, parts, fam, out);
                parts[j] = parts[j].remove(v);
            }
        }
        dfs(v + 1, m, parts, fam, out); // v goes to B
    }
    dfs(1, m, &mut parts, fam, &mut out);
    Ok(out)
}
