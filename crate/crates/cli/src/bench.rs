//! Timed benchmark runner with seeded inputs, checksum verification,
//! and JSON/CSV report writers.
//!
//! Every (algorithm, size, seed) cell runs one discarded warm-up plus
//! `reps` timed runs on a monotonic clock; the record keeps the median
//! wall time and the FNV-1a checksum of the result, so identical seeds
//! reproduce identical checksums regardless of timing.

use crate::formats::{checksum_profile, checksum_vector, checksum_window};
use knap_core::{
    bounded_range_conv, classic_dp, knapsack_small_sizes, knapsack_via_conv, naive_conv, ExtVal,
    KnapsackInstance, MaxPlusVec, SolverConfig, SplitMix64,
};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchAlgo {
    NaiveConv,
    BoundedConv,
    ClassicDp,
    ViaConv,
    SmallSizes,
}

impl BenchAlgo {
    pub fn parse(s: &str) -> Option<BenchAlgo> {
        Some(match s {
            "naive-conv" => BenchAlgo::NaiveConv,
            "bounded-conv" => BenchAlgo::BoundedConv,
            "classic-dp" => BenchAlgo::ClassicDp,
            "via-conv" => BenchAlgo::ViaConv,
            "small-sizes" => BenchAlgo::SmallSizes,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            BenchAlgo::NaiveConv => "naive-conv",
            BenchAlgo::BoundedConv => "bounded-conv",
            BenchAlgo::ClassicDp => "classic-dp",
            BenchAlgo::ViaConv => "via-conv",
            BenchAlgo::SmallSizes => "small-sizes",
        }
    }

    fn is_conv(self) -> bool {
        matches!(self, BenchAlgo::NaiveConv | BenchAlgo::BoundedConv)
    }
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub algorithms: Vec<BenchAlgo>,
    /// Vector length for convolution algorithms, capacity for solvers.
    pub sizes: Vec<u64>,
    pub seeds: Vec<u64>,
    pub e_max: u64,
    pub reps: usize,
    /// Cross-check results against the quadratic oracle where feasible
    /// (sizes up to 2^10).
    pub verify: bool,
}

#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub algorithm: &'static str,
    pub n: u64,
    pub e_max: Option<u64>,
    pub t: Option<u64>,
    pub seed: u64,
    pub wall_nanos: u128,
    pub result_checksum: u64,
}

#[derive(Debug)]
pub enum BenchError {
    /// Oracle cross-check failed: algorithm, n, seed.
    VerifyMismatch(&'static str, u64, u64),
    Core(knap_core::Error),
    BadSpec(String),
}

impl std::fmt::Display for BenchError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchError::VerifyMismatch(algo, n, seed) => {
                write!(f, "verification mismatch: {algo} at n={n} seed={seed}")
            }
            BenchError::Core(e) => write!(f, "{e}"),
            BenchError::BadSpec(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<knap_core::Error> for BenchError {
    fn from(e: knap_core::Error) -> Self {
        BenchError::Core(e)
    }
}

const VERIFY_LIMIT: u64 = 1 << 10;

fn random_vector(len: u64, e_max: u64, rng: &mut SplitMix64) -> MaxPlusVec {
    MaxPlusVec::new(
        (0..len)
            .map(|_| ExtVal::Finite(rng.next_below(e_max + 1) as i64))
            .collect(),
    )
    .expect("len >= 1")
}

fn random_items(n: u64, size_cap: u64, v_max: u64, rng: &mut SplitMix64) -> Vec<(u64, u64)> {
    (0..n)
        .map(|_| (rng.next_range(1, size_cap.max(1)), rng.next_below(v_max + 1)))
        .collect()
}

fn median(mut nanos: Vec<u128>) -> u128 {
    nanos.sort_unstable();
    nanos[nanos.len() / 2]
}

pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRecord>, BenchError> {
    if spec.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::BadSpec(
            "size ladder must be strictly increasing".into(),
        ));
    }
    if spec.sizes.is_empty() || spec.seeds.is_empty() || spec.algorithms.is_empty() {
        return Err(BenchError::BadSpec(
            "need at least one algorithm, size, and seed".into(),
        ));
    }
    if spec.reps == 0 {
        return Err(BenchError::BadSpec("reps must be >= 1".into()));
    }
    let mut records = Vec::new();
    for &algo in &spec.algorithms {
        for &n in &spec.sizes {
            for &seed in &spec.seeds {
                records.push(run_cell(spec, algo, n, seed)?);
            }
        }
    }
    Ok(records)
}

fn run_cell(
    spec: &BenchSpec,
    algo: BenchAlgo,
    n: u64,
    seed: u64,
) -> Result<BenchRecord, BenchError> {
    if algo.is_conv() {
        let mut rng = SplitMix64::derive(seed, &[0xC0, n]);
        let a = random_vector(n.max(1), spec.e_max, &mut rng);
        let b = random_vector(n.max(1), spec.e_max, &mut rng);
        let run = || -> Result<MaxPlusVec, knap_core::Error> {
            match algo {
                BenchAlgo::NaiveConv => naive_conv(&a, &b),
                BenchAlgo::BoundedConv => bounded_range_conv(&a, &b, spec.e_max),
                _ => unreachable!(),
            }
        };
        let mut result = run()?; // warm-up
        let mut times = Vec::with_capacity(spec.reps);
        for _ in 0..spec.reps {
            let start = Instant::now();
            result = run()?;
            times.push(start.elapsed().as_nanos());
        }
        let checksum = checksum_vector(&result);
        if spec.verify && n <= VERIFY_LIMIT {
            let want = checksum_vector(&naive_conv(&a, &b)?);
            if want != checksum {
                return Err(BenchError::VerifyMismatch(algo.name(), n, seed));
            }
        }
        Ok(BenchRecord {
            algorithm: algo.name(),
            n,
            e_max: Some(spec.e_max),
            t: None,
            seed,
            wall_nanos: median(times),
            result_checksum: checksum,
        })
    } else {
        // Solver cells: the ladder size doubles as the capacity, with
        // half as many items. Value-bounded algorithms draw sizes up to
        // the capacity; the size-bounded solver draws sizes up to 8.
        let t = n;
        let items_n = (t / 2).max(1);
        let mut rng = SplitMix64::derive(seed, &[0x5E, n]);
        let size_cap = match algo {
            BenchAlgo::SmallSizes => 8,
            _ => t,
        };
        let items = random_items(items_n, size_cap, spec.e_max.clamp(1, 8), &mut rng);
        let cfg = SolverConfig::seeded(SplitMix64::derive(seed, &[0x5F, n]).next_u64());
        enum Outcome {
            Profile(knap_core::SolutionProfile),
            Value(u64, knap_core::WindowedProfile),
        }
        let run = || -> Result<Outcome, knap_core::Error> {
            Ok(match algo {
                BenchAlgo::ClassicDp => {
                    Outcome::Profile(classic_dp(&KnapsackInstance::zero_one(t, &items)?)?)
                }
                BenchAlgo::ViaConv => Outcome::Profile(knapsack_via_conv(t, &items, &cfg)?),
                BenchAlgo::SmallSizes => {
                    let (v, w) = knapsack_small_sizes(t, &items, &cfg)?;
                    Outcome::Value(v, w)
                }
                _ => unreachable!(),
            })
        };
        let mut result = run()?; // warm-up
        let mut times = Vec::with_capacity(spec.reps);
        for _ in 0..spec.reps {
            let start = Instant::now();
            result = run()?;
            times.push(start.elapsed().as_nanos());
        }
        let checksum = match &result {
            Outcome::Profile(p) => checksum_profile(p),
            Outcome::Value(v, w) => checksum_window(*v, w),
        };
        if spec.verify && n <= VERIFY_LIMIT {
            let oracle = classic_dp(&KnapsackInstance::zero_one(t, &items)?)?;
            let ok = match &result {
                Outcome::Profile(p) => p == &oracle,
                Outcome::Value(v, _) => *v == oracle.optimum(),
            };
            if !ok {
                return Err(BenchError::VerifyMismatch(algo.name(), n, seed));
            }
        }
        Ok(BenchRecord {
            algorithm: algo.name(),
            n,
            e_max: None,
            t: Some(t),
            seed,
            wall_nanos: median(times),
            result_checksum: checksum,
        })
    }
}

// ---------------------------------------------------------------------------
// Report writers
// ---------------------------------------------------------------------------

fn json_opt(v: Option<u64>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "null".into(),
    }
}

/// Flat JSON array of records; the checksum is emitted as a decimal
/// string since it does not fit the float-exact integer range.
pub fn report_json(records: &[BenchRecord]) -> String {
    let mut out = String::from("[\n");
    for (i, r) in records.iter().enumerate() {
        out.push_str(&format!(
            "  {{\"algorithm\": \"{}\", \"n\": {}, \"e_max\": {}, \"t\": {}, \"seed\": {}, \"wall_nanos\": {}, \"result_checksum\": \"{}\"}}{}\n",
            r.algorithm,
            r.n,
            json_opt(r.e_max),
            json_opt(r.t),
            r.seed,
            r.wall_nanos,
            r.result_checksum,
            if i + 1 == records.len() { "" } else { "," },
        ));
    }
    out.push_str("]\n");
    out
}

pub fn report_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("algorithm,n,e_max,t,seed,wall_nanos,result_checksum\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.algorithm,
            r.n,
            r.e_max.map(|v| v.to_string()).unwrap_or_default(),
            r.t.map(|v| v.to_string()).unwrap_or_default(),
            r.seed,
            r.wall_nanos,
            r.result_checksum,
        ));
    }
    out
}

/// Deterministic per-record summary for stdout: timing excluded so a
/// fixed seed reproduces byte-identical output.
pub fn report_summary(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format!(
            "{} n={} seed={} checksum={}\n",
            r.algorithm, r.n, r.seed, r.result_checksum
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_counts_and_checksum_stability() {
        let spec = BenchSpec {
            algorithms: vec![BenchAlgo::NaiveConv, BenchAlgo::BoundedConv],
            sizes: vec![16, 32],
            seeds: vec![1, 2, 3],
            e_max: 4,
            reps: 3,
            verify: true,
        };
        let a = run_bench(&spec).unwrap();
        assert_eq!(a.len(), 2 * 2 * 3);
        let b = run_bench(&spec).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.result_checksum, y.result_checksum);
        }
        // Identical inputs give identical results across algorithms.
        for r in a.iter().filter(|r| r.algorithm == "naive-conv") {
            let twin = a
                .iter()
                .find(|x| x.algorithm == "bounded-conv" && x.n == r.n && x.seed == r.seed)
                .unwrap();
            assert_eq!(r.result_checksum, twin.result_checksum);
        }
    }

    #[test]
    fn ladder_must_increase() {
        let spec = BenchSpec {
            algorithms: vec![BenchAlgo::NaiveConv],
            sizes: vec![32, 16],
            seeds: vec![1],
            e_max: 4,
            reps: 1,
            verify: false,
        };
        assert!(matches!(run_bench(&spec), Err(BenchError::BadSpec(_))));
    }

    #[test]
    fn solver_cells_verify_against_dp() {
        let spec = BenchSpec {
            algorithms: vec![BenchAlgo::ClassicDp, BenchAlgo::ViaConv, BenchAlgo::SmallSizes],
            sizes: vec![24, 48],
            seeds: vec![5],
            e_max: 4,
            reps: 1,
            verify: true,
        };
        let records = run_bench(&spec).unwrap();
        assert_eq!(records.len(), 6);
        assert!(records.iter().all(|r| r.t == Some(r.n)));
    }

    #[test]
    fn report_formats() {
        let records = vec![BenchRecord {
            algorithm: "naive-conv",
            n: 8,
            e_max: Some(4),
            t: None,
            seed: 1,
            wall_nanos: 123,
            result_checksum: u64::MAX,
        }];
        let json = report_json(&records);
        assert!(json.contains("\"result_checksum\": \"18446744073709551615\""));
        assert!(json.contains("\"t\": null"));
        let csv = report_csv(&records);
        assert!(csv.starts_with("algorithm,n,"));
        assert!(csv.contains("naive-conv,8,4,,1,123,18446744073709551615"));
        let summary = report_summary(&records);
        assert_eq!(summary, "naive-conv n=8 seed=1 checksum=18446744073709551615\n");
    }
}

