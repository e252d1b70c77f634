//! Canonical forms of star systems and isomorph-free enumeration.
//!
//! The canonical form of a system is the lexicographically least value
//! of its sorted block list over all `n!` vertex relabellings, blocks
//! compared as (root, sorted pendants). It is computed by pruned
//! backtracking, not literal enumeration: the least encoding must begin
//! with the block `(1; 2..e+1)`, so the search roots are (block, pendant
//! order) pairs mapped onto labels `1..=e+1`, and partial label
//! assignments are cut against the best complete encoding through an
//! optimistic lower bound.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::design::{DesignError, Star, StarSystem, Vertex, block_count};
use crate::exact_cover::Flow;
use crate::search::visit_systems_with_fixed_block;

/// Packed block key: big-endian bytes (root, p1, ..., pe) with pendants
/// ascending, so integer order is exactly lexicographic block order.
type BlockKey = u64;

const UNASSIGNED: u8 = 0;

/// The canonical encoding (sorted packed block keys) of a system's
/// isomorphism class: equal iff the systems are isomorphic.
///
/// Blocks must be well-formed with vertices in `1..=n`, `n <= 255` and
/// `e <= 7`.
pub fn canonical_key(sys: &StarSystem) -> Vec<BlockKey> {
    assert!(sys.n <= 255, "canonicalisation needs n <= 255");
    assert!(sys.e >= 1 && sys.e <= 7, "canonicalisation needs e <= 7");
    if sys.blocks.is_empty() {
        return Vec::new();
    }
    for block in &sys.blocks {
        assert!(
            block.pendants.len() == sys.e as usize
                && block.vertices().all(|v| v >= 1 && v <= sys.n)
                && !block.pendants.contains(&block.root)
                && (1..block.pendants.len())
                    .all(|i| !block.pendants[..i].contains(&block.pendants[i])),
            "canonicalisation needs well-formed blocks, got [{block}]"
        );
    }
    Canonicaliser::new(sys).run()
}

/// The canonical representative: the least relabelling of `sys`, blocks
/// sorted. Idempotent, and equal across isomorphic systems.
pub fn canonical_form(sys: &StarSystem) -> StarSystem {
    let key = canonical_key(sys);
    StarSystem::new(sys.n, sys.e, decode_blocks(sys.e, &key))
}

fn decode_blocks(e: u32, key: &[BlockKey]) -> Vec<Star> {
    key.iter()
        .map(|&k| {
            let root = ((k >> (8 * e)) & 0xff) as Vertex;
            let pendants: Vec<Vertex> =
                (0..e).rev().map(|slot| ((k >> (8 * slot)) & 0xff) as Vertex).collect();
            Star::new(root, pendants)
        })
        .collect()
}

/// Most blocks a system may have for canonicalisation (bounds live in
/// fixed arrays on the stack).
const MAX_BLOCKS: usize = 32;

/// A sorted optimistic encoding, fixed-size so candidate orderings stay
/// allocation-free.
#[derive(Clone, Copy)]
struct Bound {
    keys: [BlockKey; MAX_BLOCKS],
}

struct Canonicaliser<'s> {
    blocks: &'s [Star],
    e: usize,
    block_len: usize,
    /// Vertices that occur in some block, ascending.
    used: Vec<Vertex>,
    /// New label per old vertex id (0 = unassigned).
    label: Vec<u8>,
    best: Option<Bound>,
}

impl<'s> Canonicaliser<'s> {
    fn new(sys: &'s StarSystem) -> Canonicaliser<'s> {
        assert!(sys.blocks.len() <= MAX_BLOCKS, "canonicalisation supports at most {MAX_BLOCKS} blocks");
        let mut used: Vec<Vertex> = sys.blocks.iter().flat_map(|b| b.vertices()).collect();
        used.sort_unstable();
        used.dedup();
        Canonicaliser {
            blocks: &sys.blocks,
            e: sys.e as usize,
            block_len: sys.blocks.len(),
            used,
            label: vec![UNASSIGNED; sys.n as usize + 1],
            best: None,
        }
    }

    /// Root candidates are explored cheapest-bound-first so the first
    /// full descent tends to land on the minimum and later branches die
    /// on the tie test.
    fn run(mut self) -> Vec<BlockKey> {
        // When same-root blocks never share a pendant (true of any
        // duplicate-free system), their label-1 images are forced to the
        // contiguous prefix (1,{2,3,4}), (1,{5,6,7}), ..., so a root of
        // maximum degree always yields a strictly smaller encoding than
        // a lower-degree one: only its blocks can open the minimum. With
        // shared pendants that forcing argument fails, so fall back to
        // every block as a candidate.
        let mut roots_at = vec![0u32; self.label.len()];
        for block in self.blocks {
            roots_at[block.root as usize] += 1;
        }
        let max_roots = if self.same_root_pendants_disjoint() {
            *roots_at.iter().max().unwrap()
        } else {
            0 // disables the filter: no degree reaches it exclusively
        };

        let mut roots: Vec<(Bound, usize, Vec<usize>)> = Vec::new();
        let mut perm: Vec<usize> = (0..self.e).collect();
        for bi in 0..self.blocks.len() {
            let block = &self.blocks[bi];
            if max_roots > 0 && roots_at[block.root as usize] != max_roots {
                continue;
            }
            let (root, pendants) = (block.root, block.pendants.clone());
            permutations(&mut perm, &mut |order| {
                self.label[root as usize] = 1;
                for (slot, &pi) in order.iter().enumerate() {
                    self.label[pendants[pi] as usize] = slot as u8 + 2;
                }
                roots.push((self.optimistic(self.e + 1), bi, order.to_vec()));
                self.label[root as usize] = UNASSIGNED;
                for &p in &pendants {
                    self.label[p as usize] = UNASSIGNED;
                }
            });
        }
        roots.sort_by(|a, b| a.0.keys[..self.block_len].cmp(&b.0.keys[..self.block_len]));
        for (bound, bi, order) in roots {
            if self.beaten(&bound) {
                continue;
            }
            let block = &self.blocks[bi];
            let (root, pendants) = (block.root, block.pendants.clone());
            self.label[root as usize] = 1;
            for (slot, &pi) in order.iter().enumerate() {
                self.label[pendants[pi] as usize] = slot as u8 + 2;
            }
            self.descend(self.e + 1, bound);
            self.label[root as usize] = UNASSIGNED;
            for &p in &pendants {
                self.label[p as usize] = UNASSIGNED;
            }
        }
        let best = self.best.expect("at least one complete assignment");
        best.keys[..self.block_len].to_vec()
    }

    fn same_root_pendants_disjoint(&self) -> bool {
        for (i, a) in self.blocks.iter().enumerate() {
            for b in &self.blocks[i + 1..] {
                if a.root == b.root && a.pendants.iter().any(|p| b.pendants.contains(p)) {
                    return false;
                }
            }
        }
        true
    }

    fn beaten(&self, bound: &Bound) -> bool {
        match &self.best {
            // Ties cannot improve on the incumbent.
            Some(best) => bound.keys[..self.block_len] >= best.keys[..self.block_len],
            None => false,
        }
    }

    /// `bound` is the optimistic encoding of the current assignment,
    /// already known to beat the incumbent.
    fn descend(&mut self, assigned: usize, bound: Bound) {
        if assigned == self.used.len() {
            // No unassigned vertices left: the bound is exact.
            self.best = Some(bound);
            return;
        }
        let next = assigned as u8 + 1;
        for i in 0..self.used.len() {
            let v = self.used[i] as usize;
            if self.label[v] == UNASSIGNED {
                self.label[v] = next;
                let child = self.optimistic(assigned + 1);
                if !self.beaten(&child) {
                    self.descend(assigned + 1, child);
                }
                self.label[v] = UNASSIGNED;
            }
        }
    }

    /// Sorted block keys under the partial assignment, each block priced
    /// at its cheapest possible completion: an unassigned root costs the
    /// next label, and the block's unassigned pendants (distinct
    /// vertices, so distinct labels) cost the next label, next+1, and
    /// so on. Component-wise minimal per block, hence a lexicographic
    /// lower bound on the final sorted encoding.
    fn optimistic(&self, assigned: usize) -> Bound {
        let floor = assigned as u64 + 1;
        let mut keys = [BlockKey::MAX; MAX_BLOCKS];
        let mut pendants = [0u64; 8];
        for (slot, block) in self.blocks.iter().enumerate() {
            let root = match self.label[block.root as usize] {
                UNASSIGNED => floor,
                l => l as u64,
            };
            let mut known = 0;
            for &p in &block.pendants {
                let l = self.label[p as usize];
                if l != UNASSIGNED {
                    pendants[known] = l as u64;
                    known += 1;
                }
            }
            pendants[..known].sort_unstable();
            let mut key = root;
            for &p in &pendants[..known] {
                key = key << 8 | p;
            }
            let unknown_start = if root == floor { floor + 1 } else { floor };
            for step in 0..(self.e - known) as u64 {
                key = key << 8 | (unknown_start + step);
            }
            keys[slot] = key;
        }
        keys[..self.block_len].sort_unstable();
        Bound { keys }
    }
}

/// Heap's algorithm; visits every arrangement of `items` exactly once.
fn permutations(items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    fn heap(k: usize, items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            visit(items);
            return;
        }
        for i in 0..k {
            heap(k - 1, items, visit);
            if i < k - 1 {
                if k.is_multiple_of(2) {
                    items.swap(i, k - 1);
                } else {
                    items.swap(0, k - 1);
                }
            }
        }
    }
    let n = items.len();
    heap(n, items, visit);
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("{blocks} blocks is past the classification guard of {cap}")]
    TooManyBlocks { blocks: u64, cap: u64 },
}

/// Isomorph-free enumeration output; `complete` is false when the
/// budget ran out first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitEnumeration {
    pub representatives: Vec<StarSystem>,
    pub complete: bool,
    /// Labelled systems generated along the way.
    pub systems_scanned: u64,
}

const ORBIT_BLOCK_CAP: u64 = 16;

/// One representative per isomorphism class of systems of order `n`:
/// generate and canonicalise with a seen-set, representatives selected
/// by minimal canonical form and returned in encoding order.
///
/// Generation is restricted to systems containing the block
/// `(1; 2..e+1)`; every class has such members, so every class is
/// reached at a fraction of the labelled enumeration cost. Guarded to
/// small orders (at most 16 blocks). With a budget, exhaustion returns
/// the partial representative list flagged incomplete.
pub fn orbit_representatives(
    n: u32,
    e: u32,
    budget: Option<Duration>,
) -> Result<OrbitEnumeration, OrbitError> {
    let blocks = block_count(n, e)?;
    if blocks > ORBIT_BLOCK_CAP {
        return Err(OrbitError::TooManyBlocks { blocks, cap: ORBIT_BLOCK_CAP });
    }
    let deadline = budget.map(|b| Instant::now() + b);
    let mut seen: HashSet<Vec<BlockKey>> = HashSet::new();
    let mut complete = true;
    let mut scanned = 0;
    visit_systems_with_fixed_block(n, e, |sys| {
        scanned += 1;
        seen.insert(canonical_key(&sys));
        if scanned % 512 == 0
            && let Some(deadline) = deadline
            && Instant::now() >= deadline
        {
            complete = false;
            return Flow::Stop;
        }
        Flow::Continue
    })
    .map_err(OrbitError::Design)?;

    Ok(finish_orbits(n, e, seen, complete, scanned))
}

/// [`orbit_representatives`] with the canonicalisation work spread over
/// worker threads fed by one enumerator thread. The representative set
/// is schedule-independent; on budget exhaustion the partial set is not.
pub fn orbit_representatives_parallel(
    n: u32,
    e: u32,
    budget: Option<Duration>,
    workers: usize,
) -> Result<OrbitEnumeration, OrbitError> {
    if workers <= 1 {
        return orbit_representatives(n, e, budget);
    }
    let blocks = block_count(n, e)?;
    if blocks > ORBIT_BLOCK_CAP {
        return Err(OrbitError::TooManyBlocks { blocks, cap: ORBIT_BLOCK_CAP });
    }
    let deadline = budget.map(|b| Instant::now() + b);
    let seen = std::sync::Mutex::new(HashSet::new());
    let (sender, receiver) = std::sync::mpsc::sync_channel::<Vec<StarSystem>>(workers * 4);
    let receiver = std::sync::Mutex::new(receiver);

    const BATCH: usize = 256;
    let mut complete = true;
    let mut scanned = 0u64;
    let result: Result<u64, DesignError> = std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut local: Vec<Vec<BlockKey>> = Vec::with_capacity(BATCH);
                loop {
                    let batch = match receiver.lock().unwrap().recv() {
                        Ok(batch) => batch,
                        Err(_) => break,
                    };
                    local.clear();
                    local.extend(batch.iter().map(canonical_key));
                    local.sort_unstable();
                    local.dedup();
                    let mut seen = seen.lock().unwrap();
                    for key in local.drain(..) {
                        seen.insert(key);
                    }
                }
            });
        }
        let mut batch = Vec::with_capacity(BATCH);
        let streamed = visit_systems_with_fixed_block(n, e, |sys| {
            scanned += 1;
            batch.push(sys);
            if batch.len() == BATCH {
                if sender.send(std::mem::replace(&mut batch, Vec::with_capacity(BATCH))).is_err() {
                    return Flow::Stop;
                }
                if let Some(deadline) = deadline
                    && Instant::now() >= deadline
                {
                    complete = false;
                    return Flow::Stop;
                }
            }
            Flow::Continue
        });
        if !batch.is_empty() {
            let _ = sender.send(batch);
        }
        drop(sender);
        streamed
    });
    result.map_err(OrbitError::Design)?;
    let seen = seen.into_inner().unwrap();
    Ok(finish_orbits(n, e, seen, complete, scanned))
}

fn finish_orbits(
    n: u32,
    e: u32,
    seen: HashSet<Vec<BlockKey>>,
    complete: bool,
    scanned: u64,
) -> OrbitEnumeration {
    let mut keys: Vec<Vec<BlockKey>> = seen.into_iter().collect();
    keys.sort();
    let representatives = keys
        .into_iter()
        .map(|key| StarSystem::new(n, e, decode_blocks(e, &key)))
        .collect();
    OrbitEnumeration { representatives, complete, systems_scanned: scanned }
}
