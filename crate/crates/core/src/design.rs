//! Core types for e-star systems and the exact validity oracles.
//!
//! An e-star is a copy of the complete bipartite graph K_{1,e}: one root
//! vertex joined to `e` pendant vertices. An e-star system of order `n`
//! is a set of e-stars whose edge sets partition the edge set of `K_n`;
//! such a system exists iff `n >= 2e` and `e` divides `n(n-1)/2`.
//!
//! Everything here is exact integer arithmetic over an explicit edge
//! table; there is no tolerance anywhere. [`verify_system`] and
//! [`verify_colouring`] accept arbitrary input and report the first
//! defect they find, so they can double as oracles for the search and
//! construction modules.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// 1-based vertex identifier, as used by the external text formats.
pub type Vertex = u32;

/// Parameter errors shared by the admissibility and bound functions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("star size e must be at least 3, got {0}")]
    StarSizeTooSmall(u32),
    #[error("no {e}-star system of order {n} exists (need n >= 2e and e | n(n-1)/2)")]
    Inadmissible { n: u32, e: u32 },
}

/// Number of edges of the complete graph `K_n`.
pub fn complete_edge_count(n: u32) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Does an e-star system of order `n` exist?
///
/// True iff `n >= 2e` and `e` divides `n(n-1)/2`. Star sizes below 3 are
/// rejected: a 1-star is an edge and a 2-star a path, so neither is in scope.
pub fn is_admissible(n: u32, e: u32) -> Result<bool, DesignError> {
    if e < 3 {
        return Err(DesignError::StarSizeTooSmall(e));
    }
    Ok(n as u64 >= 2 * e as u64 && complete_edge_count(n).is_multiple_of(e as u64))
}

/// Number of blocks of an e-star system of order `n`, i.e. `n(n-1)/2e`.
pub fn block_count(n: u32, e: u32) -> Result<u64, DesignError> {
    if !is_admissible(n, e)? {
        return Err(DesignError::Inadmissible { n, e });
    }
    Ok(complete_edge_count(n) / e as u64)
}

/// The trivial lower bound `L(n,e)` on the block-chromatic number of any
/// e-star system of order `n`.
///
/// A colour class holds at most `floor(n/(e+1))` mutually disjoint blocks,
/// so at least `ceil(block_count / floor(n/(e+1)))` colours are needed.
/// Computed in integer arithmetic only.
pub fn lower_bound(n: u32, e: u32) -> Result<u64, DesignError> {
    let blocks = block_count(n, e)?;
    let class_cap = n as u64 / (e as u64 + 1);
    debug_assert!(class_cap >= 1);
    Ok(blocks.div_ceil(class_cap))
}

/// An undirected edge of `K_n`, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Canonicalises the endpoint order. Panics on a loop.
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        assert_ne!(a, b, "loop edge ({a},{a})");
        if a < b { Edge { u: a, v: b } } else { Edge { u: b, v: a } }
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }

    /// Position of this edge in the canonical edge list of `K_n`:
    /// (1,2),(1,3),...,(1,n),(2,3),...,(n-1,n).
    pub fn index(self, n: u32) -> usize {
        debug_assert!(self.u >= 1 && self.v <= n);
        let (u, v, n) = (self.u as u64, self.v as u64, n as u64);
        let before_u = (u - 1) * n - u * (u - 1) / 2;
        (before_u + v - u - 1) as usize
    }

    /// Inverse of [`Edge::index`].
    pub fn from_index(n: u32, mut idx: usize) -> Edge {
        for u in 1..n {
            let row = (n - u) as usize;
            if idx < row {
                return Edge::new(u, u + 1 + idx as u32);
            }
            idx -= row;
        }
        panic!("edge index out of range for K_{n}");
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// One block of a system: a root plus `e` pendants.
///
/// The pendant list keeps insertion order so constructions can refer to
/// "first half"/"second half" positions, but two stars are equal iff they
/// have the same root and the same pendant *set*. No invariants are
/// enforced on construction; [`verify_system`] reports malformed blocks.
#[derive(Debug, Clone)]
pub struct Star {
    pub root: Vertex,
    pub pendants: Vec<Vertex>,
}

impl Star {
    pub fn new(root: Vertex, pendants: impl Into<Vec<Vertex>>) -> Star {
        Star { root, pendants: pendants.into() }
    }

    /// Root plus pendants, in storage order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(self.root).chain(self.pendants.iter().copied())
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.root == v || self.pendants.contains(&v)
    }

    /// A vertex shared with `other`, if any.
    pub fn shared_vertex(&self, other: &Star) -> Option<Vertex> {
        self.vertices().find(|&v| other.contains(v))
    }

    /// The `e` canonical edges `{root, pendant}`, in pendant order.
    ///
    /// Only meaningful on well-formed blocks (panics if a pendant equals
    /// the root).
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.pendants.iter().map(|&p| Edge::new(self.root, p))
    }

    /// Order-insensitive identity: root plus sorted pendants.
    pub fn key(&self) -> (Vertex, Vec<Vertex>) {
        let mut p = self.pendants.clone();
        p.sort_unstable();
        (self.root, p)
    }

    /// Image under a vertex relabelling given as a map on 1..=n.
    pub fn relabel(&self, image: impl Fn(Vertex) -> Vertex) -> Star {
        Star {
            root: image(self.root),
            pendants: self.pendants.iter().map(|&p| image(p)).collect(),
        }
    }
}

impl PartialEq for Star {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Star {}

impl PartialOrd for Star {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Star {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl std::hash::Hash for Star {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Display for Star {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.root)?;
        for p in &self.pendants {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

/// A claimed e-star system: order, star size and a block list.
///
/// Blocks are stored in input order; indices into that order are the
/// stable block identity used by colourings. Whether the blocks actually
/// decompose `K_n` is checked by [`verify_system`], not by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSystem {
    pub n: u32,
    pub e: u32,
    pub blocks: Vec<Star>,
}

impl StarSystem {
    pub fn new(n: u32, e: u32, blocks: Vec<Star>) -> StarSystem {
        StarSystem { n, e, blocks }
    }

    /// Image under a vertex relabelling; block order is preserved.
    pub fn relabel(&self, image: impl Fn(Vertex) -> Vertex + Copy) -> StarSystem {
        StarSystem {
            n: self.n,
            e: self.e,
            blocks: self.blocks.iter().map(|b| b.relabel(image)).collect(),
        }
    }

    /// Order-insensitive fingerprint of the block set, for set comparison
    /// and duplicate suppression.
    pub fn sorted_key(&self) -> Vec<(Vertex, Vec<Vertex>)> {
        let mut keys: Vec<_> = self.blocks.iter().map(Star::key).collect();
        keys.sort_unstable();
        keys
    }
}

/// One colour class: a label plus the indices of its member blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourClass {
    pub label: String,
    pub members: BTreeSet<usize>,
}

/// A system together with a partition of its blocks into colour classes.
///
/// Class list order is presentational only: two colourings are equal iff
/// the systems are equal and they have the same set of labelled classes.
#[derive(Debug, Clone)]
pub struct ColouredStarSystem {
    pub system: StarSystem,
    pub classes: Vec<ColourClass>,
}

impl ColouredStarSystem {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    fn sorted_classes(&self) -> Vec<&ColourClass> {
        let mut cs: Vec<_> = self.classes.iter().collect();
        cs.sort_by(|a, b| a.label.cmp(&b.label));
        cs
    }
}

impl PartialEq for ColouredStarSystem {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system && self.sorted_classes() == other.sorted_classes()
    }
}

impl Eq for ColouredStarSystem {}

/// First defect found while checking a claimed system, in block order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemDefect {
    #[error("block {index} [{block}] has {found} pendants, expected {expected}")]
    WrongPendantCount { index: usize, block: String, found: usize, expected: u32 },
    #[error("block {index} [{block}] uses vertex {vertex}, outside 1..={n}")]
    VertexOutOfRange { index: usize, block: String, vertex: Vertex, n: u32 },
    #[error("block {index} [{block}] has its root among the pendants")]
    RootAmongPendants { index: usize, block: String },
    #[error("block {index} [{block}] repeats pendant {vertex}")]
    RepeatedPendant { index: usize, block: String, vertex: Vertex },
    #[error("edge {edge} is covered by both block {first} and block {second}")]
    DuplicateEdge { edge: Edge, first: usize, second: usize },
    #[error("edge {edge} is not covered by any block")]
    MissingEdge { edge: Edge },
}

/// Checks that `sys.blocks` decomposes the edge set of `K_n` exactly once.
///
/// Accepts arbitrary input. Reports the first malformed block, else the
/// first duplicated edge (in block order), else the first missing edge
/// (in canonical edge order).
pub fn verify_system(sys: &StarSystem) -> Result<(), SystemDefect> {
    for (index, block) in sys.blocks.iter().enumerate() {
        check_block(sys, index, block)?;
    }

    let total = complete_edge_count(sys.n) as usize;
    let mut covered_by: Vec<Option<usize>> = vec![None; total];
    for (index, block) in sys.blocks.iter().enumerate() {
        for edge in block.edges() {
            let slot = &mut covered_by[edge.index(sys.n)];
            match *slot {
                Some(first) => {
                    return Err(SystemDefect::DuplicateEdge { edge, first, second: index });
                }
                None => *slot = Some(index),
            }
        }
    }
    if let Some(idx) = covered_by.iter().position(Option::is_none) {
        return Err(SystemDefect::MissingEdge { edge: Edge::from_index(sys.n, idx) });
    }
    Ok(())
}

fn check_block(sys: &StarSystem, index: usize, block: &Star) -> Result<(), SystemDefect> {
    let name = || block.to_string();
    if block.pendants.len() != sys.e as usize {
        return Err(SystemDefect::WrongPendantCount {
            index,
            block: name(),
            found: block.pendants.len(),
            expected: sys.e,
        });
    }
    for v in block.vertices() {
        if v < 1 || v > sys.n {
            return Err(SystemDefect::VertexOutOfRange { index, block: name(), vertex: v, n: sys.n });
        }
    }
    if block.pendants.contains(&block.root) {
        return Err(SystemDefect::RootAmongPendants { index, block: name() });
    }
    for (i, &p) in block.pendants.iter().enumerate() {
        if block.pendants[..i].contains(&p) {
            return Err(SystemDefect::RepeatedPendant { index, block: name(), vertex: p });
        }
    }
    Ok(())
}

/// First defect found while checking a claimed block-colouring.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColouringDefect {
    #[error("underlying system is invalid: {0}")]
    System(#[from] SystemDefect),
    #[error("class label {label:?} appears more than once")]
    DuplicateLabel { label: String },
    #[error("class {label:?} lists block index {index}, but there are only {blocks} blocks")]
    MemberOutOfRange { label: String, index: usize, blocks: usize },
    #[error("block {index} belongs to both class {first:?} and class {second:?}")]
    BlockInTwoClasses { index: usize, first: String, second: String },
    #[error("block {index} belongs to no class")]
    UncolouredBlock { index: usize },
    #[error("class {label:?}: blocks {first} and {second} share vertex {vertex}")]
    BlocksIntersect { label: String, first: usize, second: usize, vertex: Vertex },
}

/// Checks a block-colouring: the system must verify, the classes must
/// partition the block list, and the blocks inside each class must be
/// pairwise vertex-disjoint.
pub fn verify_colouring(col: &ColouredStarSystem) -> Result<(), ColouringDefect> {
    verify_system(&col.system)?;

    let blocks = col.system.blocks.len();
    let mut owner: Vec<Option<&str>> = vec![None; blocks];
    let mut seen_labels = BTreeSet::new();
    for class in &col.classes {
        if !seen_labels.insert(class.label.as_str()) {
            return Err(ColouringDefect::DuplicateLabel { label: class.label.clone() });
        }
        for &index in &class.members {
            if index >= blocks {
                return Err(ColouringDefect::MemberOutOfRange {
                    label: class.label.clone(),
                    index,
                    blocks,
                });
            }
            if let Some(first) = owner[index] {
                return Err(ColouringDefect::BlockInTwoClasses {
                    index,
                    first: first.to_string(),
                    second: class.label.clone(),
                });
            }
            owner[index] = Some(&class.label);
        }
    }
    if let Some(index) = owner.iter().position(Option::is_none) {
        return Err(ColouringDefect::UncolouredBlock { index });
    }

    for class in &col.classes {
        let members: Vec<usize> = class.members.iter().copied().collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                let (first, second) = (&col.system.blocks[a], &col.system.blocks[b]);
                if let Some(vertex) = first.shared_vertex(second) {
                    return Err(ColouringDefect::BlocksIntersect {
                        label: class.label.clone(),
                        first: a,
                        second: b,
                        vertex,
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(root: Vertex, pendants: &[Vertex]) -> Star {
        Star::new(root, pendants.to_vec())
    }

    #[test]
    fn admissibility_matches_divisibility_and_size() {
        assert_eq!(is_admissible(6, 3), Ok(true));
        assert_eq!(is_admissible(8, 3), Ok(false)); // 28 not divisible by 3
        assert_eq!(is_admissible(4, 3), Ok(false)); // 4 < 2e even though 3 | 6
        assert_eq!(is_admissible(9, 3), Ok(true));
        assert_eq!(is_admissible(16, 4), Ok(true));
        assert!(is_admissible(10, 2).is_err());
    }

    #[test]
    fn block_counts() {
        assert_eq!(block_count(9, 3), Ok(12));
        assert_eq!(block_count(12, 3), Ok(22));
        assert_eq!(block_count(13, 3), Ok(26));
        assert_eq!(
            block_count(8, 3),
            Err(DesignError::Inadmissible { n: 8, e: 3 })
        );
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(lower_bound(9, 3), Ok(6));
        assert_eq!(lower_bound(10, 3), Ok(8));
        assert_eq!(lower_bound(15, 3), Ok(12));
        assert_eq!(lower_bound(16, 3), Ok(10));
    }

    #[test]
    fn edge_count_times_e_equals_blocks() {
        for e in 3..=6u32 {
            for n in 2 * e..=120 {
                if is_admissible(n, e).unwrap() {
                    assert_eq!(block_count(n, e).unwrap() * e as u64, complete_edge_count(n));
                }
            }
        }
    }

    #[test]
    fn edge_index_round_trips() {
        let n = 11;
        for idx in 0..complete_edge_count(n) as usize {
            let edge = Edge::from_index(n, idx);
            assert_eq!(edge.index(n), idx);
        }
    }

    #[test]
    fn star_edges_are_canonical() {
        let edges: Vec<_> = s(5, &[2, 3, 4]).edges().collect();
        assert_eq!(edges, vec![Edge::new(2, 5), Edge::new(3, 5), Edge::new(4, 5)]);
        let edges: Vec<_> = s(2, &[1, 3, 6]).edges().collect();
        assert_eq!(edges, vec![Edge::new(1, 2), Edge::new(2, 3), Edge::new(2, 6)]);
    }

    #[test]
    fn star_equality_ignores_pendant_order() {
        assert_eq!(s(1, &[3, 5, 6]), s(1, &[6, 3, 5]));
        assert_ne!(s(1, &[3, 5, 6]), s(2, &[3, 5, 6]));
        assert_ne!(s(1, &[3, 5, 6]), s(1, &[3, 5, 7]));
    }

    fn valid_s3_6() -> StarSystem {
        StarSystem::new(
            6,
            3,
            vec![
                s(1, &[3, 5, 6]),
                s(2, &[1, 3, 6]),
                s(4, &[1, 2, 3]),
                s(5, &[2, 3, 4]),
                s(6, &[3, 4, 5]),
            ],
        )
    }

    #[test]
    fn verify_accepts_a_valid_system() {
        assert_eq!(verify_system(&valid_s3_6()), Ok(()));
    }

    #[test]
    fn verify_reports_duplicate_then_missing() {
        let mut sys = valid_s3_6();
        // Swapping pendant 6 for 4 duplicates (1,4) and leaves (1,6) uncovered.
        sys.blocks[0] = s(1, &[3, 5, 4]);
        match verify_system(&sys) {
            Err(SystemDefect::DuplicateEdge { edge, first, second }) => {
                assert_eq!(edge, Edge::new(1, 4));
                assert_eq!((first, second), (0, 2));
            }
            other => panic!("expected duplicate edge, got {other:?}"),
        }
        sys.blocks.remove(2);
        // Without the duplicating block the first hole is (1,6).
        match verify_system(&sys) {
            Err(SystemDefect::MissingEdge { edge }) => assert_eq!(edge, Edge::new(1, 6)),
            other => panic!("expected missing edge, got {other:?}"),
        }
    }

    #[test]
    fn verify_reports_malformed_blocks() {
        let mut sys = valid_s3_6();
        sys.blocks[1] = s(2, &[1, 3]);
        assert!(matches!(
            verify_system(&sys),
            Err(SystemDefect::WrongPendantCount { index: 1, found: 2, .. })
        ));
        sys.blocks[1] = s(2, &[1, 3, 7]);
        assert!(matches!(
            verify_system(&sys),
            Err(SystemDefect::VertexOutOfRange { vertex: 7, .. })
        ));
        sys.blocks[1] = s(2, &[1, 3, 2]);
        assert!(matches!(
            verify_system(&sys),
            Err(SystemDefect::RootAmongPendants { index: 1, .. })
        ));
        sys.blocks[1] = s(2, &[1, 3, 3]);
        assert!(matches!(
            verify_system(&sys),
            Err(SystemDefect::RepeatedPendant { vertex: 3, .. })
        ));
    }

    #[test]
    fn verify_is_permutation_invariant() {
        let sys = valid_s3_6();
        let perm = [4u32, 6, 1, 3, 2, 5];
        let relabelled = sys.relabel(|v| perm[v as usize - 1]);
        assert_eq!(verify_system(&relabelled), Ok(()));
    }

    fn singleton_colouring(sys: StarSystem) -> ColouredStarSystem {
        let classes = (0..sys.blocks.len())
            .map(|i| ColourClass { label: format!("B{}", i + 1), members: BTreeSet::from([i]) })
            .collect();
        ColouredStarSystem { system: sys, classes }
    }

    #[test]
    fn singleton_classes_are_always_a_valid_colouring() {
        assert_eq!(verify_colouring(&singleton_colouring(valid_s3_6())), Ok(()));
    }

    #[test]
    fn colouring_defects_are_reported() {
        let mut col = singleton_colouring(valid_s3_6());
        // Blocks 0 and 1 share vertices 1, 3 and 6.
        col.classes[0].members.insert(1);
        col.classes.remove(1);
        match verify_colouring(&col) {
            Err(ColouringDefect::BlocksIntersect { first: 0, second: 1, vertex, .. }) => {
                assert!([1, 3, 6].contains(&vertex));
            }
            other => panic!("expected intersecting blocks, got {other:?}"),
        }

        let mut col = singleton_colouring(valid_s3_6());
        col.classes[4].members = BTreeSet::from([3]);
        assert!(matches!(
            verify_colouring(&col),
            Err(ColouringDefect::BlockInTwoClasses { index: 3, .. })
        ));

        let mut col = singleton_colouring(valid_s3_6());
        col.classes.pop();
        assert!(matches!(
            verify_colouring(&col),
            Err(ColouringDefect::UncolouredBlock { index: 4 })
        ));

        let mut col = singleton_colouring(valid_s3_6());
        col.classes[2].label = "B1".into();
        assert!(matches!(
            verify_colouring(&col),
            Err(ColouringDefect::DuplicateLabel { .. })
        ));
    }
}
