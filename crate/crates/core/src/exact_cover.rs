//! Dancing-links exact cover, the search kernel behind system
//! enumeration and sampling.
//!
//! Columns are the edges of `K_n`, rows are candidate stars, and a
//! solution, a set of rows covering every column exactly once, is a
//! star system. Column selection is fewest-candidates-first with ties
//! to the lowest column index, which keeps runs bit-reproducible; an
//! optional RNG shuffles the candidate order within the chosen column,
//! permuting the branching without changing the solution set.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

const HEAD: u32 = 0;
const NONE: u32 = u32::MAX;

/// Tells the search whether to keep enumerating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

pub struct Dlx {
    left: Vec<u32>,
    right: Vec<u32>,
    up: Vec<u32>,
    down: Vec<u32>,
    /// Column header index for body nodes, NONE for head/headers.
    col_of: Vec<u32>,
    /// Row id for body nodes, NONE for head/headers.
    row_of: Vec<u32>,
    /// Live candidate count per column, indexed by column id.
    size: Vec<u32>,
    /// First body node of each row, for pre-placing rows.
    row_start: Vec<u32>,
}

impl Dlx {
    /// Builds the matrix; `rows[r]` lists the column ids covered by row `r`.
    pub fn new(columns: usize, rows: &[Vec<usize>]) -> Dlx {
        let nodes = 1 + columns + rows.iter().map(Vec::len).sum::<usize>();
        let mut dlx = Dlx {
            left: Vec::with_capacity(nodes),
            right: Vec::with_capacity(nodes),
            up: Vec::with_capacity(nodes),
            down: Vec::with_capacity(nodes),
            col_of: Vec::with_capacity(nodes),
            row_of: Vec::with_capacity(nodes),
            size: vec![0; columns],
            row_start: Vec::with_capacity(rows.len()),
        };
        // Head and column headers form a circular row list.
        for i in 0..=columns as u32 {
            dlx.left.push(if i == 0 { columns as u32 } else { i - 1 });
            dlx.right.push(if i == columns as u32 { 0 } else { i + 1 });
            dlx.up.push(i);
            dlx.down.push(i);
            dlx.col_of.push(NONE);
            dlx.row_of.push(NONE);
        }
        for (r, cols) in rows.iter().enumerate() {
            let mut first = NONE;
            for &c in cols {
                debug_assert!(c < columns);
                let header = 1 + c as u32;
                let node = dlx.left.len() as u32;
                // Insert above the header (bottom of the column).
                let bottom = dlx.up[header as usize];
                dlx.up.push(bottom);
                dlx.down.push(header);
                dlx.down[bottom as usize] = node;
                dlx.up[header as usize] = node;
                dlx.col_of.push(header);
                dlx.row_of.push(r as u32);
                dlx.size[c] += 1;
                if first == NONE {
                    first = node;
                    dlx.left.push(node);
                    dlx.right.push(node);
                } else {
                    let prev = dlx.left[first as usize];
                    dlx.left.push(prev);
                    dlx.right.push(first);
                    dlx.right[prev as usize] = node;
                    dlx.left[first as usize] = node;
                }
            }
            dlx.row_start.push(first);
        }
        dlx
    }

    fn cover(&mut self, header: u32) {
        let (l, r) = (self.left[header as usize], self.right[header as usize]);
        self.right[l as usize] = r;
        self.left[r as usize] = l;
        let mut i = self.down[header as usize];
        while i != header {
            let mut j = self.right[i as usize];
            while j != i {
                let (u, d) = (self.up[j as usize], self.down[j as usize]);
                self.down[u as usize] = d;
                self.up[d as usize] = u;
                self.size[self.col_of[j as usize] as usize - 1] -= 1;
                j = self.right[j as usize];
            }
            i = self.down[i as usize];
        }
    }

    fn uncover(&mut self, header: u32) {
        let mut i = self.up[header as usize];
        while i != header {
            let mut j = self.left[i as usize];
            while j != i {
                self.size[self.col_of[j as usize] as usize - 1] += 1;
                self.down[self.up[j as usize] as usize] = j;
                self.up[self.down[j as usize] as usize] = j;
                j = self.left[j as usize];
            }
            i = self.up[i as usize];
        }
        let (l, r) = (self.left[header as usize], self.right[header as usize]);
        self.right[l as usize] = header;
        self.left[r as usize] = header;
    }

    /// Covers everything a chosen row touches (its own column included).
    fn place(&mut self, node: u32) {
        self.cover(self.col_of[node as usize]);
        let mut j = self.right[node as usize];
        while j != node {
            self.cover(self.col_of[j as usize]);
            j = self.right[j as usize];
        }
    }

    fn unplace(&mut self, node: u32) {
        let mut j = self.left[node as usize];
        while j != node {
            self.uncover(self.col_of[j as usize]);
            j = self.left[j as usize];
        }
        self.uncover(self.col_of[node as usize]);
    }

    /// Fewest live candidates, lowest column index on ties. NONE when
    /// the matrix is empty (a solution).
    fn choose_column(&self) -> u32 {
        let mut best = NONE;
        let mut best_size = u32::MAX;
        let mut h = self.right[HEAD as usize];
        while h != HEAD {
            let size = self.size[h as usize - 1];
            if size < best_size {
                best = h;
                best_size = size;
                if size == 0 {
                    break;
                }
            }
            h = self.right[h as usize];
        }
        best
    }

    /// Permanently places `row` into the partial solution. The caller is
    /// responsible for reporting it alongside search results.
    ///
    /// Panics if the row conflicts with previous placements.
    pub fn preplace_row(&mut self, row: usize) {
        let node = self.row_start[row];
        let mut j = node;
        loop {
            let header = self.col_of[j as usize];
            assert!(self.alive(header), "pre-placed row {row} conflicts");
            j = self.right[j as usize];
            if j == node {
                break;
            }
        }
        self.place(node);
    }

    fn alive(&self, header: u32) -> bool {
        let mut h = self.right[HEAD as usize];
        while h != HEAD {
            if h == header {
                return true;
            }
            h = self.right[h as usize];
        }
        false
    }

    /// Enumerates exact covers, invoking `on_solution` with the row ids
    /// of each. An RNG, if given, shuffles candidate order per branch.
    /// Returns false if the callback stopped the search.
    pub fn search(
        &mut self,
        mut rng: Option<&mut ChaCha8Rng>,
        on_solution: &mut impl FnMut(&[u32]) -> Flow,
    ) -> bool {
        let mut partial = Vec::new();
        self.search_rec(&mut rng, &mut partial, on_solution)
    }

    fn search_rec(
        &mut self,
        rng: &mut Option<&mut ChaCha8Rng>,
        partial: &mut Vec<u32>,
        on_solution: &mut impl FnMut(&[u32]) -> Flow,
    ) -> bool {
        let column = self.choose_column();
        if column == NONE {
            return on_solution(partial) == Flow::Continue;
        }
        if self.size[column as usize - 1] == 0 {
            return true;
        }
        let mut candidates = Vec::with_capacity(self.size[column as usize - 1] as usize);
        let mut i = self.down[column as usize];
        while i != column {
            candidates.push(i);
            i = self.down[i as usize];
        }
        if let Some(rng) = rng {
            candidates.shuffle(rng);
        }
        for node in candidates {
            self.place(node);
            partial.push(self.row_of[node as usize]);
            let keep_going = self.search_rec(rng, partial, on_solution);
            partial.pop();
            self.unplace(node);
            if !keep_going {
                return false;
            }
        }
        true
    }

    /// One randomized greedy descent: repeatedly place a uniformly random
    /// candidate of the tightest column, with no backtracking. Returns
    /// the covering row set on success, or None on a dead end. The
    /// matrix is restored either way.
    pub fn random_descent(&mut self, rng: &mut ChaCha8Rng) -> Option<Vec<u32>> {
        let mut placed = Vec::new();
        let solved = loop {
            let column = self.choose_column();
            if column == NONE {
                break true;
            }
            let count = self.size[column as usize - 1];
            if count == 0 {
                break false;
            }
            let mut pick = rng.random_range(0..count);
            let mut node = self.down[column as usize];
            while pick > 0 {
                node = self.down[node as usize];
                pick -= 1;
            }
            self.place(node);
            placed.push(node);
        };
        let rows = solved.then(|| placed.iter().map(|&n| self.row_of[n as usize]).collect());
        for &node in placed.iter().rev() {
            self.unplace(node);
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect_all(dlx: &mut Dlx) -> Vec<Vec<u32>> {
        let mut sols = Vec::new();
        dlx.search(None, &mut |rows| {
            let mut rows = rows.to_vec();
            rows.sort_unstable();
            sols.push(rows);
            Flow::Continue
        });
        sols.sort();
        sols
    }

    #[test]
    fn knuth_example_has_one_solution() {
        let rows = vec![
            vec![2, 4, 5],
            vec![0, 3, 6],
            vec![1, 2, 5],
            vec![0, 3],
            vec![1, 6],
            vec![3, 4, 6],
        ];
        let mut dlx = Dlx::new(7, &rows);
        assert_eq!(collect_all(&mut dlx), vec![vec![0, 3, 4]]);
    }

    #[test]
    fn counts_all_solutions_and_restores_state() {
        let rows = vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 1, 2]];
        let mut dlx = Dlx::new(3, &rows);
        let first = collect_all(&mut dlx);
        assert_eq!(first.len(), 4); // {0,1,2}, {0,4}, {2,3}, {5}
        // The matrix dances back to its initial state.
        assert_eq!(collect_all(&mut dlx), first);
    }

    #[test]
    fn shuffled_search_finds_the_same_solution_set() {
        let rows = vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 1, 2]];
        let mut dlx = Dlx::new(3, &rows);
        let plain = collect_all(&mut dlx);
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sols = Vec::new();
            dlx.search(Some(&mut rng), &mut |rows| {
                let mut rows = rows.to_vec();
                rows.sort_unstable();
                sols.push(rows);
                Flow::Continue
            });
            sols.sort();
            assert_eq!(sols, plain);
        }
    }

    #[test]
    fn stop_flow_cuts_enumeration() {
        let rows = vec![vec![0], vec![1], vec![0, 1]];
        let mut dlx = Dlx::new(2, &rows);
        let mut count = 0;
        dlx.search(None, &mut |_| {
            count += 1;
            Flow::Stop
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn preplacing_a_row_restricts_solutions() {
        let rows = vec![vec![0], vec![1], vec![0, 1]];
        let mut dlx = Dlx::new(2, &rows);
        dlx.preplace_row(0);
        let sols = collect_all(&mut dlx);
        assert_eq!(sols, vec![vec![1]]); // row 0 is implicit
    }

    #[test]
    fn random_descent_restores_and_eventually_solves() {
        let rows = vec![vec![0], vec![1], vec![0, 1]];
        let mut dlx = Dlx::new(2, &rows);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen_solution = false;
        for _ in 0..20 {
            if let Some(mut sol) = dlx.random_descent(&mut rng) {
                sol.sort_unstable();
                assert!(sol == vec![0, 1] || sol == vec![2]);
                seen_solution = true;
            }
        }
        assert!(seen_solution);
        assert_eq!(collect_all(&mut dlx).len(), 2);
    }
}
