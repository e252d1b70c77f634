//! Enumeration and sampling of star systems of small order.
//!
//! The search space is the compatibility graph: one vertex per candidate
//! star, adjacent iff edge-disjoint, whose maximum cliques (of size
//! `block_count`) are exactly the systems. Rather than running a clique
//! search, the mutual-exclusivity structure is exploited directly as an
//! exact cover: columns are the edges of `K_n`, rows the candidate
//! stars, and dancing links with fewest-candidates column selection
//! enumerates the same solution set far faster.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::design::{DesignError, Edge, Star, StarSystem, Vertex, is_admissible};
use crate::exact_cover::{Dlx, Flow};
use crate::graph::SimpleGraph;

/// All `n * C(n-1, e)` candidate e-stars on `1..=n`, in canonical order:
/// root ascending, then pendant sets in colexicographic order.
pub fn all_stars(n: u32, e: u32) -> Vec<Star> {
    let mut stars = Vec::new();
    for root in 1..=n {
        let pool: Vec<Vertex> = (1..=n).filter(|&v| v != root).collect();
        colex_subsets(&pool, e as usize, &mut |pendants| {
            stars.push(Star::new(root, pendants.to_vec()));
        });
    }
    stars
}

/// Visits the e-subsets of `pool` in colex order: sets compared by their
/// largest element first, so every subset of a prefix comes before any
/// set reaching further into the pool. Elements are chosen largest
/// first, then reported ascending.
fn colex_subsets(pool: &[Vertex], e: usize, visit: &mut impl FnMut(&[Vertex])) {
    fn rec(
        pool: &[Vertex],
        remaining: usize,
        chosen: &mut Vec<Vertex>,
        visit: &mut impl FnMut(&[Vertex]),
    ) {
        if remaining == 0 {
            let set: Vec<Vertex> = chosen.iter().rev().copied().collect();
            visit(&set);
            return;
        }
        for i in (remaining - 1)..pool.len() {
            chosen.push(pool[i]);
            rec(&pool[..i], remaining - 1, chosen, visit);
            chosen.pop();
        }
    }
    rec(pool, e, &mut Vec::with_capacity(e), visit);
}

/// The compatibility graph: every candidate star as a vertex, adjacency
/// iff edge-disjoint, plus the star table and reverse lookup.
pub struct CompatibilityGraph {
    pub graph: SimpleGraph,
    pub stars: Vec<Star>,
    index: HashMap<Star, usize>,
}

impl CompatibilityGraph {
    pub fn vertex_of(&self, star: &Star) -> Option<usize> {
        self.index.get(star).copied()
    }
}

/// Builds the compatibility graph on all e-stars of `K_n`.
pub fn compatibility_graph(n: u32, e: u32) -> CompatibilityGraph {
    assert!(n as u64 >= 2 * e as u64, "need n >= 2e");
    let stars = all_stars(n, e);
    let words = (complete_edges(n)).div_ceil(64);
    let masks: Vec<Vec<u64>> = stars
        .iter()
        .map(|s| {
            let mut mask = vec![0u64; words];
            for edge in s.edges() {
                let i = edge.index(n);
                mask[i / 64] |= 1 << (i % 64);
            }
            mask
        })
        .collect();
    let mut graph = SimpleGraph::new(stars.len());
    for i in 0..stars.len() {
        for j in i + 1..stars.len() {
            let disjoint = masks[i].iter().zip(&masks[j]).all(|(a, b)| a & b == 0);
            if disjoint {
                graph.add_edge(i, j);
            }
        }
    }
    let index = stars.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    CompatibilityGraph { graph, stars, index }
}

fn complete_edges(n: u32) -> usize {
    crate::design::complete_edge_count(n) as usize
}

fn star_columns(n: u32, star: &Star) -> Vec<usize> {
    star.edges().map(|edge| edge.index(n)).collect()
}

fn build_matrix(n: u32, stars: &[Star]) -> Dlx {
    let rows: Vec<Vec<usize>> = stars.iter().map(|s| star_columns(n, s)).collect();
    Dlx::new(complete_edges(n), &rows)
}

/// Streams every labelled system of order `n` (not up to isomorphism)
/// through `visit`, in an order determined by `seed`; the emitted set is
/// seed-independent. Returns the number of systems visited.
pub fn visit_systems(
    n: u32,
    e: u32,
    seed: u64,
    mut visit: impl FnMut(StarSystem) -> Flow,
) -> Result<u64, DesignError> {
    if !is_admissible(n, e)? {
        return Err(DesignError::Inadmissible { n, e });
    }
    let stars = all_stars(n, e);
    let mut dlx = build_matrix(n, &stars);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = 0;
    dlx.search(Some(&mut rng), &mut |rows| {
        count += 1;
        let blocks = rows.iter().map(|&r| stars[r as usize].clone()).collect();
        visit(StarSystem::new(n, e, blocks))
    });
    Ok(count)
}

/// Same stream as [`visit_systems`] but restricted to systems containing
/// the fixed block `{1; 2, ..., e+1}`, in deterministic matrix order.
/// Every isomorphism class of systems has members with that block, so
/// this restriction still reaches every class.
pub fn visit_systems_with_fixed_block(
    n: u32,
    e: u32,
    mut visit: impl FnMut(StarSystem) -> Flow,
) -> Result<u64, DesignError> {
    if !is_admissible(n, e)? {
        return Err(DesignError::Inadmissible { n, e });
    }
    let stars = all_stars(n, e);
    debug_assert_eq!(stars[0], Star::new(1, (2..=e + 1).collect::<Vec<_>>()));
    let mut dlx = build_matrix(n, &stars);
    dlx.preplace_row(0);
    let mut count = 0;
    dlx.search(None, &mut |rows| {
        count += 1;
        let blocks = std::iter::once(stars[0].clone())
            .chain(rows.iter().map(|&r| stars[r as usize].clone()))
            .collect();
        visit(StarSystem::new(n, e, blocks))
    });
    Ok(count)
}

/// Collects labelled systems; exhaustive when `limit` is None.
pub fn enumerate_systems(
    n: u32,
    e: u32,
    limit: Option<u64>,
    seed: u64,
) -> Result<Vec<StarSystem>, DesignError> {
    let mut out = Vec::new();
    visit_systems(n, e, seed, |sys| {
        out.push(sys);
        match limit {
            Some(k) if out.len() as u64 >= k => Flow::Stop,
            _ => Flow::Continue,
        }
    })?;
    Ok(out)
}

/// One system drawn by randomized exact-cover descent: per step a
/// uniformly random candidate of the tightest edge, restarting on dead
/// ends. Deterministic per seed. This is heuristic sampling: the
/// distribution over systems is *not* claimed uniform.
pub fn sample_system(n: u32, e: u32, seed: u64) -> Result<StarSystem, DesignError> {
    if !is_admissible(n, e)? {
        return Err(DesignError::Inadmissible { n, e });
    }
    let stars = all_stars(n, e);
    let mut dlx = build_matrix(n, &stars);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(rows) = dlx.random_descent(&mut rng) {
            let blocks = rows.iter().map(|&r| stars[r as usize].clone()).collect();
            return Ok(StarSystem::new(n, e, blocks));
        }
    }
}

/// A permutation of `1..=n` in image form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("images must be a bijection of 1..={n}, got {got:?}")]
    NotABijection { n: u32, got: Vec<Vertex> },
    #[error("cannot parse cycle notation: {0}")]
    BadCycles(String),
    #[error("cycle entry {entry} outside 1..={n}")]
    EntryOutOfRange { entry: Vertex, n: u32 },
    #[error("vertex {0} appears in two cycles")]
    RepeatedEntry(Vertex),
}

impl Permutation {
    /// From the image list: `image[i]` is where vertex `i+1` goes.
    pub fn new(image: Vec<Vertex>) -> Result<Permutation, PermutationError> {
        let n = image.len() as u32;
        let mut seen = vec![false; image.len()];
        for &v in &image {
            if v < 1 || v > n || std::mem::replace(&mut seen[v as usize - 1], true) {
                return Err(PermutationError::NotABijection { n, got: image });
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: u32) -> Permutation {
        Permutation { image: (1..=n).collect() }
    }

    /// Parses disjoint cycle notation over `1..=n`, e.g. `(1,2,3)(4,5)`.
    /// Vertices not mentioned are fixed.
    pub fn parse_cycles(text: &str, n: u32) -> Result<Permutation, PermutationError> {
        let mut image: Vec<Vertex> = (1..=n).collect();
        let mut moved = vec![false; n as usize];
        let body = text.trim();
        if !body.starts_with('(') || !body.ends_with(')') {
            return Err(PermutationError::BadCycles(text.to_string()));
        }
        for cycle in body[1..body.len() - 1].split(")(") {
            let entries: Vec<Vertex> = cycle
                .split([',', ' '])
                .filter(|t| !t.is_empty())
                .map(|t| t.trim().parse().map_err(|_| PermutationError::BadCycles(text.into())))
                .collect::<Result<_, _>>()?;
            for &v in &entries {
                if v < 1 || v > n {
                    return Err(PermutationError::EntryOutOfRange { entry: v, n });
                }
                if std::mem::replace(&mut moved[v as usize - 1], true) {
                    return Err(PermutationError::RepeatedEntry(v));
                }
            }
            for (i, &v) in entries.iter().enumerate() {
                image[v as usize - 1] = entries[(i + 1) % entries.len()];
            }
        }
        Permutation::new(image)
    }

    pub fn degree(&self) -> u32 {
        self.image.len() as u32
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v == i as Vertex + 1)
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.image[v as usize - 1]
    }

    pub fn apply_star(&self, star: &Star) -> Star {
        star.relabel(|v| self.apply(v))
    }

    /// Does the permutation fix the block set of `sys`?
    pub fn fixes(&self, sys: &StarSystem) -> bool {
        let image = sys.relabel(|v| self.apply(v));
        image.sorted_key() == sys.sorted_key()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantSearchError {
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Permutation(#[from] PermutationError),
    #[error("permutation degree {got} does not match order {n}")]
    DegreeMismatch { got: u32, n: u32 },
    #[error("the identity fixes everything; use plain enumeration instead")]
    IdentityAutomorphism,
}

/// Enumerates exactly the systems whose block set is fixed by
/// `automorphism` (blocks map to blocks, roots to roots), via exact
/// cover over star orbits against edge orbits under the generated
/// cyclic group.
pub fn enumerate_invariant_systems(
    n: u32,
    e: u32,
    automorphism: &Permutation,
) -> Result<Vec<StarSystem>, InvariantSearchError> {
    if automorphism.degree() != n {
        return Err(InvariantSearchError::DegreeMismatch { got: automorphism.degree(), n });
    }
    if automorphism.is_identity() {
        return Err(InvariantSearchError::IdentityAutomorphism);
    }
    if !is_admissible(n, e)? {
        return Err(DesignError::Inadmissible { n, e }.into());
    }

    // Edge orbits under the cyclic group generated by the automorphism.
    let edge_total = complete_edges(n);
    let mut edge_orbit = vec![usize::MAX; edge_total];
    let mut orbit_count = 0;
    for start in 0..edge_total {
        if edge_orbit[start] != usize::MAX {
            continue;
        }
        let mut idx = start;
        loop {
            edge_orbit[idx] = orbit_count;
            let (u, v) = Edge::from_index(n, idx).endpoints();
            idx = Edge::new(automorphism.apply(u), automorphism.apply(v)).index(n);
            if idx == start {
                break;
            }
        }
        orbit_count += 1;
    }

    // Star orbits; usable only if the member stars are pairwise
    // edge-disjoint, in which case they cover whole edge orbits.
    let stars = all_stars(n, e);
    let star_index: HashMap<Star, usize> =
        stars.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut claimed = vec![false; stars.len()];
    let mut orbit_blocks: Vec<Vec<Star>> = Vec::new();
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for start in 0..stars.len() {
        if claimed[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut current = stars[start].clone();
        loop {
            claimed[star_index[&current]] = true;
            members.push(current.clone());
            current = automorphism.apply_star(&current);
            if star_index[&current] == start {
                break;
            }
        }
        let mut edge_seen = vec![false; edge_total];
        let mut orbits_covered = std::collections::BTreeSet::new();
        let mut disjoint = true;
        for star in &members {
            for edge in star.edges() {
                let idx = edge.index(n);
                if std::mem::replace(&mut edge_seen[idx], true) {
                    disjoint = false;
                    break;
                }
                orbits_covered.insert(edge_orbit[idx]);
            }
            if !disjoint {
                break;
            }
        }
        if disjoint {
            rows.push(orbits_covered.into_iter().collect());
            orbit_blocks.push(members);
        }
    }

    let mut dlx = Dlx::new(orbit_count, &rows);
    let mut out = Vec::new();
    dlx.search(None, &mut |solution| {
        let blocks: Vec<Star> = solution
            .iter()
            .flat_map(|&r| orbit_blocks[r as usize].iter().cloned())
            .collect();
        out.push(StarSystem::new(n, e, blocks));
        Flow::Continue
    });
    Ok(out)
}
