//! Chromatic-index censuses over streams of systems.
//!
//! Runs the exact solver on each system and tallies a histogram of
//! chromatic indices; systems that hit the per-system budget are counted
//! separately as timeouts rather than failing the run. Reports carry a
//! fixed machine-readable JSON schema plus a plain-text two-column table.

use std::collections::BTreeMap;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::colouring::{ChiOutcome, chromatic_index};
use crate::design::StarSystem;

/// Chromatic-index histogram over a batch of systems.
///
/// `total` counts the systems with an exact chromatic index (the
/// histogram sums to it); budget-exhausted systems land in `timeouts`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub schema: u32,
    pub n: u32,
    pub e: u32,
    pub mode: String,
    pub histogram: BTreeMap<u32, u64>,
    pub total: u64,
    pub timeouts: u64,
    pub seed: u64,
    pub runtime_seconds: f64,
}

/// Census parameters; `mode` and `seed` are metadata describing where
/// the input stream came from.
#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub budget_per_system: Option<Duration>,
    pub threads: usize,
    pub mode: String,
    pub seed: u64,
}

impl Default for CensusOptions {
    fn default() -> CensusOptions {
        CensusOptions { budget_per_system: None, threads: 1, mode: "enumerate".into(), seed: 0 }
    }
}

/// Determines the chromatic index of every system in the batch.
///
/// Invalid systems panic: censuses run over enumerator or file input
/// that has already passed verification. The histogram is a bag, so the
/// report is identical no matter how work is spread over threads.
pub fn census(n: u32, e: u32, systems: Vec<StarSystem>, options: &CensusOptions) -> CensusReport {
    let start = Instant::now();
    let mut histogram = BTreeMap::new();
    let mut timeouts = 0;

    let tally = |histogram: &mut BTreeMap<u32, u64>, timeouts: &mut u64, sys: &StarSystem| {
        let outcome = chromatic_index(sys, options.budget_per_system)
            .expect("census input must be valid systems");
        match outcome {
            ChiOutcome::Exact { chi, .. } => *histogram.entry(chi).or_insert(0) += 1,
            ChiOutcome::Timeout { .. } => *timeouts += 1,
        }
    };

    if options.threads <= 1 || systems.len() <= 1 {
        for sys in &systems {
            tally(&mut histogram, &mut timeouts, sys);
        }
    } else {
        let next = Mutex::new(0usize);
        let merged = Mutex::new((BTreeMap::new(), 0u64));
        std::thread::scope(|scope| {
            for _ in 0..options.threads.min(systems.len()) {
                scope.spawn(|| {
                    let mut local_hist = BTreeMap::new();
                    let mut local_timeouts = 0;
                    loop {
                        let i = {
                            let mut next = next.lock().unwrap();
                            let i = *next;
                            *next += 1;
                            i
                        };
                        let Some(sys) = systems.get(i) else { break };
                        tally(&mut local_hist, &mut local_timeouts, sys);
                    }
                    let mut merged = merged.lock().unwrap();
                    for (chi, count) in local_hist {
                        *merged.0.entry(chi).or_insert(0) += count;
                    }
                    merged.1 += local_timeouts;
                });
            }
        });
        (histogram, timeouts) = merged.into_inner().unwrap();
    }

    let total = histogram.values().sum();
    CensusReport {
        schema: 1,
        n,
        e,
        mode: options.mode.clone(),
        histogram,
        total,
        timeouts,
        seed: options.seed,
        runtime_seconds: start.elapsed().as_secs_f64(),
    }
}

impl CensusReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Two-column table: chromatic index against system count.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str("chromatic index    # systems\n");
        for (chi, count) in &self.histogram {
            out.push_str(&format!("{chi:>15}    {count:>9}\n"));
        }
        out.push_str(&format!("{:>15}    {:>9}\n", "total", self.total));
        if self.timeouts > 0 {
            out.push_str(&format!("{:>15}    {:>9}\n", "timeouts", self.timeouts));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::enumerate_systems;

    #[test]
    fn empty_stream_gives_an_empty_report() {
        let report = census(9, 3, vec![], &CensusOptions::default());
        assert_eq!(report.total, 0);
        assert_eq!(report.timeouts, 0);
        assert!(report.histogram.is_empty());
    }

    #[test]
    fn histogram_sums_to_total_and_json_is_stable() {
        let systems = enumerate_systems(9, 3, Some(8), 5).unwrap();
        let report = census(9, 3, systems, &CensusOptions::default());
        assert_eq!(report.total, 8);
        assert_eq!(report.histogram.values().sum::<u64>(), report.total);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["n"], 9);
        assert_eq!(json["total"], 8);
    }

    #[test]
    fn threaded_census_matches_single_threaded() {
        let systems = enumerate_systems(9, 3, Some(12), 1).unwrap();
        let single = census(9, 3, systems.clone(), &CensusOptions::default());
        let threaded = census(
            9,
            3,
            systems,
            &CensusOptions { threads: 4, ..CensusOptions::default() },
        );
        assert_eq!(single.histogram, threaded.histogram);
        assert_eq!(single.timeouts, threaded.timeouts);
    }

    #[test]
    fn exhausted_budgets_are_counted_as_timeouts() {
        // With a zero budget the solver cannot run whenever its clique
        // and greedy bounds disagree. Order-9 intersection graphs are
        // usually tight, order-12 ones rarely are.
        use crate::colouring::{block_intersection_graph, degeneracy_order, greedy_colouring,
                               max_clique_lower_bound};
        let mut gapped = Vec::new();
        for seed in 0..50 {
            let sys = crate::search::sample_system(12, 3, seed).unwrap();
            let big = block_intersection_graph(&sys).unwrap();
            let lb = max_clique_lower_bound(&big);
            let ub = greedy_colouring(&big, &degeneracy_order(&big)).num_colours;
            if lb < ub {
                gapped.push(sys);
                if gapped.len() == 3 {
                    break;
                }
            }
        }
        assert_eq!(gapped.len(), 3, "no bound-gap systems found");
        let options = CensusOptions {
            budget_per_system: Some(Duration::from_secs(0)),
            ..CensusOptions::default()
        };
        let report = census(12, 3, gapped, &options);
        assert_eq!(report.timeouts, 3);
        assert_eq!(report.total, 0);
    }

    #[test]
    fn table_lists_counts() {
        let systems = enumerate_systems(6, 3, Some(3), 0).unwrap();
        let report = census(6, 3, systems, &CensusOptions::default());
        let table = report.table();
        assert!(table.contains("chromatic index"));
        assert!(table.contains("5"));
        assert!(table.contains("total"));
    }
}
