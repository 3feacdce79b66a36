//! Seeded Monte Carlo harness: repeated runs of a randomized algorithm on one
//! instance, a CSV row per trial, and a Wilson score interval for the rate.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alloc::{all_true, allocate_ub1, allocate_ub2, verify_sufficient, Ub1Config, Ub2Config};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational;
use crate::two_group::random_allocation_search;

pub const CSV_HEADER: [&str; 5] = ["trial", "seed", "success", "failed_condition", "ms"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Algorithm {
    Ub1 { c1: u64 },
    Ub2 { c2: u64, retries: u32 },
    /// Uniform allocations until one is exactly MMS^p or `budget` samples are spent.
    RandomSearch { p: usize, budget: u64 },
}

impl Algorithm {
    pub fn tag(&self) -> &'static str {
        match self {
            Algorithm::Ub1 { .. } => "ub1",
            Algorithm::Ub2 { .. } => "ub2",
            Algorithm::RandomSearch { .. } => "random-search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationSpec {
    pub algorithm: Algorithm,
    pub trials: u64,
    pub base_seed: u64,
    /// Record wall time per trial; off by default so the CSV is reproducible.
    pub timing: bool,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvRow {
    pub trial: u64,
    pub seed: u64,
    pub success: bool,
    /// Empty on success.
    pub failed_condition: String,
    pub ms: Option<u128>,
}

#[derive(Debug)]
pub struct Simulation {
    /// Rows sorted by trial; on error, every trial before the failing one.
    pub rows: Vec<CsvRow>,
    pub error: Option<(u64, Error)>,
}

impl Simulation {
    pub fn successes(&self) -> u64 {
        self.rows.iter().filter(|r| r.success).count() as u64
    }

    pub fn rate(&self) -> f64 {
        if self.rows.is_empty() {
            0.0
        } else {
            self.successes() as f64 / self.rows.len() as f64
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        wilson_interval(self.successes(), self.rows.len() as u64)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER).map_err(csv_error)?;
        for r in &self.rows {
            let ms = r.ms.map(|m| m.to_string()).unwrap_or_default();
            w.write_record([r.trial.to_string(), r.seed.to_string(), r.success.to_string(), r.failed_condition.clone(), ms])
                .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory succeeds");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn summary(&self) -> String {
        let (lo, hi) = self.interval();
        format!(
            "trials={} successes={} rate={:.4} wilson95=[{:.4},{:.4}]",
            self.rows.len(),
            self.successes(),
            self.rate(),
            lo,
            hi
        )
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

/// Wilson score interval at 95% confidence; `(0, 1)` for zero trials.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Independent uniform integer utilities in `[lo, hi]`, drawn agent by agent.
pub fn uniform_instance(sizes: &[usize], m: usize, lo: u64, hi: u64, seed: u64) -> Result<Instance> {
    if lo > hi || hi > i64::MAX as u64 {
        return Err(Error::Config(format!("bad utility range [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = sizes
        .iter()
        .map(|&n| (0..n).map(|_| (0..m).map(|_| rational::from_int(rng.gen_range(lo..=hi) as i64)).collect()).collect())
        .collect();
    Instance::new(m, groups)
}

/// Two singleton groups, 2000 items, utilities uniform in `[0, 1000]`.
pub fn benchmark_instance(seed: u64) -> Instance {
    uniform_instance(&[1, 1], 2000, 0, 1000, seed).expect("benchmark parameters are valid")
}

/// One trial. ub1 and ub2 successes are re-checked with `verify_sufficient`.
pub fn run_trial(inst: &Instance, algorithm: &Algorithm, seed: u64) -> Result<(bool, String)> {
    let report = match algorithm {
        Algorithm::Ub1 { c1 } => allocate_ub1(inst, &Ub1Config::new(seed).with_c1(*c1))?,
        Algorithm::Ub2 { c2, retries } => {
            let mut config = Ub2Config::new(seed).with_c2(*c2);
            config.retries = *retries;
            allocate_ub2(inst, &config)?
        }
        Algorithm::RandomSearch { p, budget } => {
            let out = random_allocation_search(inst, *p, *budget, seed)?;
            let found = out.allocation.is_some();
            return Ok((found, if found { String::new() } else { "BUDGET".into() }));
        }
    };
    if let Some(alloc) = &report.allocation {
        if !all_true(&verify_sufficient(inst, alloc, &report.thresholds)?) {
            return Ok((false, "VERIFY".into()));
        }
    }
    Ok((report.success, report.failed_condition.map(|f| f.tag().to_string()).unwrap_or_default()))
}

pub fn simulate(inst: &Instance, spec: &SimulationSpec) -> Result<Simulation> {
    if spec.trials == 0 {
        return Err(Error::Config("trial count must be at least 1".into()));
    }
    let run = || -> Vec<(u64, Result<CsvRow>)> {
        (0..spec.trials)
            .into_par_iter()
            .map(|trial| {
                let seed = spec.base_seed.wrapping_add(trial);
                let start = Instant::now();
                let row = run_trial(inst, &spec.algorithm, seed).map(|(success, failed_condition)| CsvRow {
                    trial,
                    seed,
                    success,
                    failed_condition,
                    ms: spec.timing.then(|| start.elapsed().as_millis()),
                });
                (trial, row)
            })
            .collect()
    };
    let results = match spec.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(run),
        None => run(),
    };
    let mut rows = Vec::with_capacity(results.len());
    for (trial, row) in results {
        match row {
            Ok(row) => rows.push(row),
            Err(e) => return Ok(Simulation { rows, error: Some((trial, e)) }),
        }
    }
    Ok(Simulation { rows, error: None })
}
