//! Block-intersection graphs and exact block-chromatic numbers.
//!
//! The block-intersection graph of a system has one vertex per block,
//! two blocks being adjacent iff they share a vertex of `K_n`. Proper
//! vertex colourings of that graph are exactly the block-colourings of
//! the system, so the block-chromatic number (chromatic index) of a
//! system is the chromatic number of its block-intersection graph.
//!
//! Chromatic numbers are computed exactly by branch and bound over the
//! colour count `k`: a DSATUR-style backtracking search decides
//! `k`-colourability for `k` rising from a clique lower bound towards a
//! greedy upper bound. The search is deterministic; with a time budget
//! it degrades to a `[lower, upper]` bracket instead of failing.

use std::time::{Duration, Instant};

use crate::design::{ColourClass, ColouredStarSystem, StarSystem, SystemDefect, verify_system};
use crate::graph::SimpleGraph;

/// A proper colouring witness: `colour_of[v]` in `0..num_colours`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphColouring {
    pub colour_of: Vec<u32>,
    pub num_colours: u32,
}

impl GraphColouring {
    /// True iff every vertex is coloured in range and no edge is monochromatic.
    pub fn is_proper(&self, g: &SimpleGraph) -> bool {
        self.colour_of.len() == g.vertex_count()
            && self.colour_of.iter().all(|&c| c < self.num_colours)
            && g.edges().all(|(u, v)| self.colour_of[u] != self.colour_of[v])
    }

    pub fn distinct_colours(&self) -> u32 {
        let mut seen = vec![false; self.num_colours as usize];
        for &c in &self.colour_of {
            seen[c as usize] = true;
        }
        seen.iter().filter(|&&s| s).count() as u32
    }
}

/// Builds the block-intersection graph of a verified system.
///
/// Vertex `i` is block `i` (in block order); vertices are adjacent iff
/// the blocks intersect, i.e. share at least one vertex of `K_n`, so a
/// proper colouring of the result is exactly a block-colouring of `sys`.
/// Invalid systems are rejected with the verifier's defect.
pub fn block_intersection_graph(sys: &StarSystem) -> Result<SimpleGraph, SystemDefect> {
    verify_system(sys)?;
    let mut g = SimpleGraph::new(sys.blocks.len());
    for (i, a) in sys.blocks.iter().enumerate() {
        for (j, b) in sys.blocks.iter().enumerate().skip(i + 1) {
            if a.shared_vertex(b).is_some() {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Proper colouring by smallest available colour along `order`, which
/// must be a permutation of the vertices. Deterministic given the order.
pub fn greedy_colouring(g: &SimpleGraph, order: &[usize]) -> GraphColouring {
    let n = g.vertex_count();
    debug_assert_eq!(order.len(), n);
    debug_assert!({
        let mut seen = vec![false; n];
        order.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }, "order must be a permutation of 0..n");

    let mut colour_of = vec![u32::MAX; n];
    let mut num_colours = 0;
    let mut used = Vec::new();
    for &v in order {
        used.clear();
        used.resize(num_colours as usize + 1, false);
        for u in g.neighbours(v) {
            let c = colour_of[u];
            if c != u32::MAX {
                used[c as usize] = true;
            }
        }
        let c = used.iter().position(|&b| !b).unwrap() as u32;
        colour_of[v] = c;
        num_colours = num_colours.max(c + 1);
    }
    GraphColouring { colour_of, num_colours }
}

/// Degeneracy order: repeatedly peel a minimum-degree vertex (lowest
/// index on ties) and return the reverse of the peel order, a good seed
/// order for greedy colouring.
pub fn degeneracy_order(g: &SimpleGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut peel = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        alive[v] = false;
        peel.push(v);
        for u in g.neighbours(v) {
            if alive[u] {
                deg[u] -= 1;
            }
        }
    }
    peel.reverse();
    peel
}

/// Size of a clique found by greedy growth from every vertex plus a
/// swap-improvement pass. Always at most the true clique number, and
/// deterministic. Returns 0 for the empty graph.
pub fn max_clique_lower_bound(g: &SimpleGraph) -> u32 {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    let words = g.row(0).len();
    let mut best: Vec<usize> = vec![0];

    let mut cand = vec![0u64; words];
    for seed in 0..n {
        let mut clique = vec![seed];
        cand.copy_from_slice(g.row(seed));
        loop {
            // Most candidate-neighbours first, lowest index on ties.
            let mut pick = None;
            let mut pick_score = 0usize;
            for v in iter_bits(&cand) {
                let score = and_popcount(&cand, g.row(v));
                if pick.is_none() || score > pick_score {
                    pick = Some(v);
                    pick_score = score;
                }
            }
            match pick {
                Some(v) => {
                    clique.push(v);
                    and_assign(&mut cand, g.row(v));
                }
                None => break,
            }
        }
        improve_clique(g, &mut clique);
        if clique.len() > best.len() {
            best = clique;
        }
    }
    debug_assert!(is_clique(g, &best));
    best.len() as u32
}

/// One-out/two-in exchange until fixpoint: drop a member if two common
/// neighbours of the rest are themselves adjacent.
fn improve_clique(g: &SimpleGraph, clique: &mut Vec<usize>) {
    let words = g.row(0).len();
    loop {
        let mut improved = false;
        'members: for i in 0..clique.len() {
            let mut common = vec![!0u64; words];
            clear_tail(&mut common, g.vertex_count());
            for (j, &u) in clique.iter().enumerate() {
                if j != i {
                    and_assign(&mut common, g.row(u));
                }
            }
            for &u in clique.iter() {
                clear_bit(&mut common, u);
            }
            let outside: Vec<usize> = iter_bits(&common).collect();
            for (a, &u) in outside.iter().enumerate() {
                for &v in &outside[a + 1..] {
                    if g.has_edge(u, v) {
                        clique.swap_remove(i);
                        clique.push(u);
                        clique.push(v);
                        improved = true;
                        break 'members;
                    }
                }
            }
        }
        if !improved {
            return;
        }
    }
}

fn is_clique(g: &SimpleGraph, vs: &[usize]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        std::iter::successors(Some(w), |&w| Some(w & w.wrapping_sub(1)))
            .take_while(|&w| w != 0)
            .map(move |w| wi * 64 + w.trailing_zeros() as usize)
    })
}

fn and_popcount(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

fn and_assign(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x &= y;
    }
}

fn clear_bit(words: &mut [u64], i: usize) {
    words[i / 64] &= !(1 << (i % 64));
}

fn clear_tail(words: &mut [u64], n: usize) {
    for i in n..words.len() * 64 {
        clear_bit(words, i);
    }
}

/// Result of an exact chromatic-number computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChiOutcome {
    /// `chi` is the chromatic number and `witness` a proper chi-colouring.
    Exact { chi: u32, witness: GraphColouring },
    /// The budget ran out; the chromatic number lies in `[lower, upper]`
    /// and `best` is a proper `upper`-colouring.
    Timeout { lower: u32, upper: u32, best: GraphColouring },
}

impl ChiOutcome {
    /// The exact value, if the run completed.
    pub fn exact(&self) -> Option<u32> {
        match self {
            ChiOutcome::Exact { chi, .. } => Some(*chi),
            ChiOutcome::Timeout { .. } => None,
        }
    }

    pub fn witness(&self) -> &GraphColouring {
        match self {
            ChiOutcome::Exact { witness, .. } => witness,
            ChiOutcome::Timeout { best, .. } => best,
        }
    }
}

/// Exact chromatic number by branch and bound over `k`.
///
/// Seeds with a greedy upper bound (degeneracy order) and a clique lower
/// bound, then decides `k`-colourability for each `k` from the lower
/// bound upwards with a DSATUR-style backtracking search: the next
/// vertex is the uncoloured one with the most distinctly-coloured
/// neighbours (ties by degree, then lowest index), and colour symmetry
/// is broken by never skipping past the first unused colour. With a
/// budget, an unfinished run returns the current bracket instead.
pub fn exact_chromatic_number(g: &SimpleGraph, budget: Option<Duration>) -> ChiOutcome {
    let n = g.vertex_count();
    if n == 0 {
        let empty = GraphColouring { colour_of: vec![], num_colours: 0 };
        return ChiOutcome::Exact { chi: 0, witness: empty };
    }
    let deadline = budget.map(|b| Instant::now() + b);

    let order = degeneracy_order(g);
    let greedy = greedy_colouring(g, &order);
    let upper = greedy.num_colours;
    let lower = max_clique_lower_bound(g).max(1);
    debug_assert!(lower <= upper);

    for k in lower..upper {
        match k_colourable(g, k, deadline) {
            KSearch::Sat(witness) => return ChiOutcome::Exact { chi: k, witness },
            KSearch::Unsat => {}
            KSearch::OutOfTime => {
                return ChiOutcome::Timeout { lower: k, upper, best: greedy };
            }
        }
    }
    ChiOutcome::Exact { chi: upper, witness: greedy }
}

enum KSearch {
    Sat(GraphColouring),
    Unsat,
    OutOfTime,
}

struct KSolver<'g> {
    g: &'g SimpleGraph,
    k: u32,
    colour: Vec<u32>, // u32::MAX = uncoloured
    /// counts[v * k + c] = coloured neighbours of v with colour c.
    counts: Vec<u32>,
    /// Distinct colours seen among each vertex's coloured neighbours.
    saturation: Vec<u32>,
    degree: Vec<usize>,
    uncoloured: usize,
    deadline: Option<Instant>,
    nodes: u64,
}

fn k_colourable(g: &SimpleGraph, k: u32, deadline: Option<Instant>) -> KSearch {
    if let Some(deadline) = deadline
        && Instant::now() >= deadline
    {
        return KSearch::OutOfTime;
    }
    let n = g.vertex_count();
    let mut solver = KSolver {
        g,
        k,
        colour: vec![u32::MAX; n],
        counts: vec![0; n * k as usize],
        saturation: vec![0; n],
        degree: (0..n).map(|v| g.degree(v)).collect(),
        uncoloured: n,
        deadline,
        nodes: 0,
    };
    match solver.search(0) {
        Verdict::Sat => KSearch::Sat(GraphColouring { colour_of: solver.colour, num_colours: k }),
        Verdict::Unsat => KSearch::Unsat,
        Verdict::OutOfTime => KSearch::OutOfTime,
    }
}

enum Verdict {
    Sat,
    Unsat,
    OutOfTime,
}

impl KSolver<'_> {
    fn search(&mut self, used: u32) -> Verdict {
        if self.uncoloured == 0 {
            return Verdict::Sat;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024)
            && let Some(deadline) = self.deadline
            && Instant::now() >= deadline
        {
            return Verdict::OutOfTime;
        }

        let v = self.select();
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            if self.counts[v * self.k as usize + c as usize] == 0 {
                self.assign(v, c);
                match self.search(used.max(c + 1)) {
                    Verdict::Unsat => self.unassign(v, c),
                    done => return done,
                }
            }
        }
        Verdict::Unsat
    }

    /// Max saturation, then max degree, then lowest index.
    fn select(&self) -> usize {
        let mut best = usize::MAX;
        let mut best_key = (0u32, 0usize);
        for v in 0..self.colour.len() {
            if self.colour[v] == u32::MAX {
                let key = (self.saturation[v], self.degree[v]);
                if best == usize::MAX || key > best_key {
                    best = v;
                    best_key = key;
                }
            }
        }
        best
    }

    fn assign(&mut self, v: usize, c: u32) {
        self.colour[v] = c;
        self.uncoloured -= 1;
        let k = self.k as usize;
        for u in self.g.neighbours(v) {
            if self.colour[u] == u32::MAX {
                let slot = &mut self.counts[u * k + c as usize];
                if *slot == 0 {
                    self.saturation[u] += 1;
                }
                *slot += 1;
            }
        }
    }

    fn unassign(&mut self, v: usize, c: u32) {
        self.colour[v] = u32::MAX;
        self.uncoloured += 1;
        let k = self.k as usize;
        for u in self.g.neighbours(v) {
            if self.colour[u] == u32::MAX && u != v {
                let slot = &mut self.counts[u * k + c as usize];
                *slot -= 1;
                if *slot == 0 {
                    self.saturation[u] -= 1;
                }
            }
        }
    }
}

/// Exact block-chromatic number of a verified system: the chromatic
/// number of its block-intersection graph.
pub fn chromatic_index(sys: &StarSystem, budget: Option<Duration>) -> Result<ChiOutcome, SystemDefect> {
    let big = block_intersection_graph(sys)?;
    Ok(exact_chromatic_number(&big, budget))
}

/// Converts a proper colouring of the block-intersection graph into a
/// coloured system with classes `C1..Ck`, numbered by colour id.
pub fn classes_from_colouring(sys: &StarSystem, colouring: &GraphColouring) -> ColouredStarSystem {
    let mut classes: Vec<ColourClass> = (0..colouring.num_colours)
        .map(|c| ColourClass { label: format!("C{}", c + 1), members: Default::default() })
        .collect();
    for (block, &c) in colouring.colour_of.iter().enumerate() {
        classes[c as usize].members.insert(block);
    }
    classes.retain(|c| !c.members.is_empty());
    ColouredStarSystem { system: sys.clone(), classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{Star, verify_colouring};

    fn cycle(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::new(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n);
        }
        g
    }

    fn petersen() -> SimpleGraph {
        let mut g = cycle(5);
        let mut h = SimpleGraph::new(10);
        for (u, v) in g.edges() {
            h.add_edge(u, v);
        }
        for v in 0..5 {
            h.add_edge(v, v + 5);
            h.add_edge(v + 5, (v + 2) % 5 + 5);
        }
        g = h;
        g
    }

    #[test]
    fn greedy_extremes() {
        let edgeless = SimpleGraph::new(5);
        let order: Vec<usize> = (0..5).collect();
        assert_eq!(greedy_colouring(&edgeless, &order).num_colours, 1);

        let k12 = SimpleGraph::complete(12);
        let order: Vec<usize> = (0..12).rev().collect();
        let col = greedy_colouring(&k12, &order);
        assert_eq!(col.num_colours, 12);
        assert!(col.is_proper(&k12));
    }

    #[test]
    fn clique_bound_extremes() {
        assert_eq!(max_clique_lower_bound(&SimpleGraph::complete(12)), 12);
        assert_eq!(max_clique_lower_bound(&SimpleGraph::new(7)), 1);
        assert_eq!(max_clique_lower_bound(&SimpleGraph::new(0)), 0);
        assert_eq!(max_clique_lower_bound(&petersen()), 2);
    }

    #[test]
    fn chromatic_number_of_known_graphs() {
        assert_eq!(exact_chromatic_number(&cycle(5), None).exact(), Some(3));
        assert_eq!(exact_chromatic_number(&cycle(6), None).exact(), Some(2));
        assert_eq!(exact_chromatic_number(&petersen(), None).exact(), Some(3));
        assert_eq!(exact_chromatic_number(&SimpleGraph::complete(12), None).exact(), Some(12));
        assert_eq!(exact_chromatic_number(&SimpleGraph::new(5), None).exact(), Some(1));
        assert_eq!(exact_chromatic_number(&SimpleGraph::new(0), None).exact(), Some(0));
    }

    #[test]
    fn witness_is_proper_and_tight() {
        let g = petersen();
        match exact_chromatic_number(&g, None) {
            ChiOutcome::Exact { chi, witness } => {
                assert!(witness.is_proper(&g));
                assert_eq!(witness.distinct_colours(), chi);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_budget_times_out_with_a_bracket() {
        // Petersen has clique bound 2 and greedy bound >= 3, so the k=2
        // search runs and is cut off immediately.
        let g = petersen();
        match exact_chromatic_number(&g, Some(Duration::ZERO)) {
            ChiOutcome::Timeout { lower, upper, best } => {
                assert!(lower <= 3 && 3 <= upper);
                assert!(best.is_proper(&g));
            }
            ChiOutcome::Exact { .. } => panic!("expected a timeout"),
        }
    }

    /// Tries every assignment with at most `k` colours, vertex by vertex.
    /// Deliberately heuristic-free; used to cross-check the solver.
    fn brute_force_chi(g: &SimpleGraph) -> u32 {
        fn extend(g: &SimpleGraph, k: u32, colour: &mut Vec<u32>) -> bool {
            let v = colour.len();
            if v == g.vertex_count() {
                return true;
            }
            for c in 0..k {
                if (0..v).all(|u| !g.has_edge(u, v) || colour[u] != c) {
                    colour.push(c);
                    if extend(g, k, colour) {
                        return true;
                    }
                    colour.pop();
                }
            }
            false
        }
        if g.vertex_count() == 0 {
            return 0;
        }
        (1..).find(|&k| extend(g, k, &mut Vec::new())).unwrap()
    }

    #[test]
    fn solver_matches_brute_force_on_small_graphs() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for round in 0..60 {
            let n = 1 + round % 8;
            let p = 0.15 + 0.1 * (round % 8) as f64;
            let mut g = SimpleGraph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        g.add_edge(u, v);
                    }
                }
            }
            assert_eq!(
                exact_chromatic_number(&g, None).exact(),
                Some(brute_force_chi(&g)),
                "disagreement on round {round}"
            );
        }
    }

    #[test]
    fn big_of_a_small_order_system_is_complete() {
        // Below order 2(e+1) no two blocks can be disjoint.
        let sys = StarSystem::new(
            6,
            3,
            vec![
                Star::new(1, vec![3, 5, 6]),
                Star::new(2, vec![1, 3, 6]),
                Star::new(4, vec![1, 2, 3]),
                Star::new(5, vec![2, 3, 4]),
                Star::new(6, vec![3, 4, 5]),
            ],
        );
        let big = block_intersection_graph(&sys).unwrap();
        assert!(big.is_complete());
        let outcome = chromatic_index(&sys, None).unwrap();
        assert_eq!(outcome.exact(), Some(5));
        let coloured = classes_from_colouring(&sys, outcome.witness());
        assert_eq!(verify_colouring(&coloured), Ok(()));
    }

    #[test]
    fn big_rejects_invalid_systems() {
        let sys = StarSystem::new(6, 3, vec![Star::new(1, vec![2, 3, 4])]);
        assert!(block_intersection_graph(&sys).is_err());
    }

    #[test]
    fn big_of_the_all_intersecting_system_is_complete() {
        let sys = crate::samples::s3_9_twelve_chromatic();
        let big = block_intersection_graph(&sys).unwrap();
        assert!(big.is_complete());
        assert_eq!(max_clique_lower_bound(&big), 12);
    }

    #[test]
    fn big_of_the_eight_chromatic_system_has_the_expected_disjoint_pairs() {
        let coloured = crate::samples::s3_9_eight_chromatic();
        let big = block_intersection_graph(&coloured.system).unwrap();
        // The two-block colour classes are exactly pairs of disjoint blocks.
        for (a, b) in [(1, 11), (2, 9), (5, 6), (7, 10)] {
            assert!(!big.has_edge(a, b), "blocks {a} and {b} should be disjoint");
        }
        let greedy = greedy_colouring(&big, &degeneracy_order(&big));
        assert!(greedy.is_proper(&big));
        assert!((8..=12).contains(&greedy.num_colours));
    }
}
