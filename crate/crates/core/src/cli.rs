//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::adversarial::{
    self, build_designs, equal_two_group_params, footnote_instance, identical_items_instance, lb1_params, lb2_params,
    lb2_symbolic, lb3_params, lb3_symbolic, DesignMethod, GenericLbParams, Generated, GroupMode,
};
use crate::alloc::{
    all_true, allocate_ub1, allocate_ub2, p_ub1, p_ub2, verify_exact, verify_sufficient, Thresholds, Ub1Config, Ub2Config,
};
use crate::covering::{greedy_design, min_design_exhaustive, trivial_design, CoveringDesign};
use crate::error::{Error, Result};
use crate::instance::{AgentId, Allocation, Bundle, Instance};
use crate::mms::{exact_mms, lpt_mms};
use crate::oracle::{exists_mms_allocation, min_feasible, OracleBudget};
use crate::rational;
use crate::sim::{simulate, uniform_instance, Algorithm, SimulationSpec};
use crate::two_group::{corollary_p, exact_allocation_fraction, random_allocation_search, two_group_p};

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "groupmms", version, about = "Maximin-share fair division for groups of agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a randomized allocation algorithm.
    Allocate(AllocateArgs),
    /// Check an allocation against exact MMS^p or against a report's thresholds.
    Verify(VerifyArgs),
    /// One agent's maximin share.
    Mms(MmsArgs),
    /// Evaluate a bound formula.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Build a covering design.
    Design(DesignArgs),
    /// Generate an instance.
    Gen(GenArgs),
    /// Exhaustive feasibility oracle.
    Oracle(OracleArgs),
    /// Sample uniform two-way allocations until one is MMS^p.
    Search(SearchArgs),
    /// Exact fraction of two-group allocations that are MMS^p.
    Fraction(FractionArgs),
    /// Monte Carlo success rate of a randomized algorithm.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Algo {
    Ub1,
    Ub2,
}

#[derive(Args, Debug)]
struct AllocateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    c1: Option<u64>,
    #[arg(long)]
    c2: Option<u64>,
    #[arg(long)]
    retries: Option<u32>,
    /// Use exact MMS values as thresholds (m <= 16).
    #[arg(long)]
    exact_thresholds: bool,
    /// Print every closed bag to stderr.
    #[arg(long)]
    trace_bags: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Allocation document; checked against exact MMS^p.
    #[arg(long, requires = "p", conflicts_with = "report")]
    allocation: Option<PathBuf>,
    #[arg(long)]
    p: Option<usize>,
    /// Report from `allocate`; checked against 4/3 of its thresholds.
    #[arg(long, required_unless_present = "allocation")]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MmsArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Agent as `group,agent`, 1-based.
    #[arg(long)]
    agent: String,
    #[arg(long)]
    p: usize,
    /// Exhaustive search (the default).
    #[arg(long, conflicts_with = "lpt")]
    exact: bool,
    /// LPT lower bound instead of the exact value.
    #[arg(long)]
    lpt: bool,
    /// Print the value together with a witness partition.
    #[arg(long)]
    witness: bool,
}

#[derive(Subcommand, Debug)]
enum BoundCommand {
    /// Smallest p guaranteed for two groups.
    TwoGroup(PairArgs),
    /// 1 + ceil(log2(n1 + n2)).
    Corollary(PairArgs),
    /// p used by the first randomized algorithm.
    Ub1 {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 80)]
        c1: u64,
    },
    /// p used by the second randomized algorithm.
    Ub2 {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 320_000)]
        c2: u64,
    },
    /// Balanced lower-bound parameters.
    Lb1 {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
    },
    /// Unbalanced lower-bound parameters from log2(n_i + 1) values.
    Lb2 {
        #[arg(long, value_delimiter = ',', required = true)]
        log_sizes: Vec<f64>,
    },
    /// One-huge-group lower-bound parameters from log2(n_1 + 1).
    Lb3 {
        #[arg(long)]
        log_n1: f64,
        #[arg(long)]
        g: usize,
    },
    /// Lower bound for two equal groups of n agents.
    Equal2 {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    n1: u64,
    #[arg(long)]
    n2: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Trivial,
    Greedy,
    Exhaustive,
}

impl From<Method> for DesignMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Trivial => DesignMethod::Trivial,
            Method::Greedy => DesignMethod::Greedy,
            Method::Exhaustive => DesignMethod::Exhaustive,
        }
    }
}

#[derive(Args, Debug)]
struct DesignArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    s: usize,
    /// Defaults to `s` for the trivial method.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, value_enum, default_value = "greedy")]
    method: Method,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Generic,
    Lb1,
    Lb2,
    Lb3,
    Identical,
    Footnote,
    Equal2,
    Uniform,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Identical,
    Covering,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    t: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<u64>,
    #[arg(long, value_delimiter = ',', value_enum)]
    modes: Vec<Mode>,
    /// Group count (identical, lb3).
    #[arg(long)]
    g: Option<usize>,
    /// Group size (equal2) or n_1 (lb3).
    #[arg(long)]
    n: Option<u64>,
    /// Design document for each covering group, in group order.
    #[arg(long)]
    design: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "greedy")]
    method: Method,
    #[arg(long, default_value_t = adversarial::DEFAULT_MAX_AGENTS)]
    max_agents: usize,
    /// Write the certificate here.
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Run the oracle and mark the certificate checked.
    #[arg(long)]
    check: bool,
    /// Utility range for the uniform family.
    #[arg(long, default_value_t = 0)]
    min: u64,
    #[arg(long, default_value_t = 1000)]
    max: u64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "target")]
struct OracleTarget {
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    min_p: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    target: OracleTarget,
    /// Search nodes allowed per top-level branch.
    #[arg(long, default_value_t = 100_000_000)]
    max_nodes: u64,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug)]
struct FractionArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    p: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SimAlgo {
    Ub1,
    Ub2,
    RandomSearch,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    algo: SimAlgo,
    /// Instance file; otherwise a uniform instance from --sizes/--m/--min/--max.
    #[arg(long, conflicts_with_all = ["sizes", "m"])]
    instance: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', required_unless_present = "instance")]
    sizes: Vec<usize>,
    #[arg(long, required_unless_present = "instance")]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    min: u64,
    #[arg(long, default_value_t = 1000)]
    max: u64,
    /// Seed for the generated instance; defaults to --seed.
    #[arg(long)]
    instance_seed: Option<u64>,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = 80)]
    c1: u64,
    #[arg(long, default_value_t = 320_000)]
    c2: u64,
    #[arg(long, default_value_t = 10)]
    retries: u32,
    /// Target p for random-search.
    #[arg(long, required_if_eq("algo", "random-search"))]
    p: Option<usize>,
    /// Samples per random-search trial.
    #[arg(long, default_value_t = 1000)]
    budget: u64,
    /// Fill the ms column with wall time (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("groupmms")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = Output::default();
    match dispatch(cli.command, &mut out) {
        Ok(()) => CliOutput { code: 0, stdout: out.stdout, stderr: out.stderr },
        Err(e) => {
            out.stderr.push_str(&format!("error: {e}\n"));
            CliOutput { code: 1, stdout: out.stdout, stderr: out.stderr }
        }
    }
}

#[derive(Default)]
struct Output {
    stdout: String,
    stderr: String,
}

impl Output {
    fn line(&mut self, text: impl AsRef<str>) {
        self.stdout.push_str(text.as_ref());
        if !text.as_ref().ends_with('\n') {
            self.stdout.push('\n');
        }
    }

    fn note(&mut self, text: impl AsRef<str>) {
        self.stderr.push_str(text.as_ref());
        self.stderr.push('\n');
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_instance(path: &Path) -> Result<Instance> {
    Instance::from_document(&read(path)?)
}

fn dispatch(command: Command, out: &mut Output) -> Result<()> {
    match command {
        Command::Allocate(a) => allocate(a, out),
        Command::Verify(a) => verify_cmd(a, out),
        Command::Mms(a) => mms(a, out),
        Command::Bound(b) => bound(b, out),
        Command::Design(a) => design(a, out),
        Command::Gen(a) => gen(a, out),
        Command::Oracle(a) => oracle(a, out),
        Command::Search(a) => search(a, out),
        Command::Fraction(a) => {
            let inst = load_instance(&a.instance)?;
            out.line(rational::format(&exact_allocation_fraction(&inst, a.p)?));
            Ok(())
        }
        Command::Simulate(a) => simulate_cmd(a, out),
    }
}

fn allocate(a: AllocateArgs, out: &mut Output) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let report = match a.algo {
        Algo::Ub1 => {
            let mut config = Ub1Config::new(a.seed);
            config.c1 = a.c1.unwrap_or(config.c1);
            config.exact_thresholds = a.exact_thresholds;
            allocate_ub1(&inst, &config)?
        }
        Algo::Ub2 => {
            let mut config = Ub2Config::new(a.seed);
            config.c2 = a.c2.unwrap_or(config.c2);
            config.retries = a.retries.unwrap_or(config.retries);
            config.exact_thresholds = a.exact_thresholds;
            allocate_ub2(&inst, &config)?
        }
    };
    if a.trace_bags {
        for (id, bag) in &report.bags {
            out.note(format!("bag {id}: {:?}", bag.one_based()));
        }
    }
    out.line(report.to_document());
    Ok(())
}

/// Allocation and thresholds of a report produced by `allocate`.
fn parse_report(text: &str) -> Result<(Option<Allocation>, Thresholds)> {
    #[derive(serde::Deserialize)]
    struct Doc {
        allocation: Option<Vec<Vec<usize>>>,
        thresholds: Vec<Vec<String>>,
    }
    let doc: Doc = serde_json::from_str(text).map_err(crate::instance::json_error)?;
    let allocation = doc.allocation.map(|bundles| {
        Allocation::new(bundles.into_iter().map(|b| Bundle::from_items(b.into_iter().map(|i| i.wrapping_sub(1)))).collect())
    });
    let thresholds = doc
        .thresholds
        .iter()
        .map(|g| {
            g.iter()
                .map(|t| rational::parse(t).map_err(|message| Error::Parse { context: "thresholds".into(), message }))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((allocation, thresholds))
}

fn verify_cmd(a: VerifyArgs, out: &mut Output) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let rows = match (&a.allocation, &a.report) {
        (Some(path), _) => {
            let alloc = Allocation::from_document(&read(path)?)?;
            verify_exact(&inst, &alloc, a.p.expect("clap requires p"))?
        }
        (None, Some(path)) => {
            let (alloc, thresholds) = parse_report(&read(path)?)?;
            let alloc = alloc.ok_or_else(|| Error::Config("report has no allocation".into()))?;
            verify_sufficient(&inst, &alloc, &thresholds)?
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    for (g, group) in rows.iter().enumerate() {
        for (i, ok) in group.iter().enumerate() {
            out.line(format!("{} {}", AgentId::new(g, i), if *ok { "ok" } else { "FAIL" }));
        }
    }
    out.line(if all_true(&rows) { "VALID" } else { "INVALID" });
    Ok(())
}

fn mms(a: MmsArgs, out: &mut Output) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let id = AgentId::parse_one_based(&a.agent)?;
    let values = inst.try_utilities(id)?;
    let all = Bundle::all(inst.m());
    let result = if a.lpt { lpt_mms(values, a.p, &all)? } else { exact_mms(values, a.p, &all)? };
    if a.witness {
        out.line(result.to_document());
    } else {
        out.line(rational::format(&result.value));
    }
    Ok(())
}

fn bound(b: BoundCommand, out: &mut Output) -> Result<()> {
    match b {
        BoundCommand::TwoGroup(PairArgs { n1, n2 }) => out.line(two_group_p(n1, n2)?.p.to_string()),
        BoundCommand::Corollary(PairArgs { n1, n2 }) => out.line(corollary_p(n1, n2)?.to_string()),
        BoundCommand::Ub1 { sizes, c1 } => out.line(p_ub1(&sizes, c1)?.to_string()),
        BoundCommand::Ub2 { sizes, c2 } => out.line(p_ub2(&sizes, c2)?.to_string()),
        BoundCommand::Lb1 { sizes } => out.line(params_line(&lb1_params(&sizes)?)),
        BoundCommand::Lb2 { log_sizes } => out.line(lb2_symbolic(&log_sizes)?.to_string()),
        BoundCommand::Lb3 { log_n1, g } => out.line(lb3_symbolic(log_n1, g)?.to_string()),
        BoundCommand::Equal2 { n } => {
            let params = equal_two_group_params(n)?;
            out.line(format!("{} {}", params.p + 1, params_line(&params)));
        }
    }
    Ok(())
}

fn params_line(p: &GenericLbParams) -> String {
    let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    format!("p={} m={} t=[{}]", p.p, p.m, join(&p.t))
}

fn design(a: DesignArgs, out: &mut Output) -> Result<()> {
    let d = match a.method {
        Method::Trivial => {
            let d = trivial_design(a.m, a.s)?;
            match a.t {
                Some(t) => d.with_t(t)?,
                None => d,
            }
        }
        Method::Greedy => greedy_design(a.m, a.s, require(a.t, "t")?)?,
        Method::Exhaustive => min_design_exhaustive(a.m, a.s, require(a.t, "t")?)?,
    };
    out.line(d.to_document());
    Ok(())
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("missing --{flag}")))
}

fn gen(a: GenArgs, out: &mut Output) -> Result<()> {
    let method = DesignMethod::from(a.method);
    let materialize = |params: GenericLbParams| -> Result<Generated> {
        let designs = build_designs(&params, method)?;
        adversarial::generic_instance_capped(&params, &designs, a.max_agents)
    };
    let as_usize = |v: &[u64]| v.iter().map(|&n| n as usize).collect::<Vec<_>>();
    // Ok carries a certificate; plain instances come back as Err
    let generated: std::result::Result<Generated, Instance> = match a.family {
        Family::Footnote => Err(footnote_instance()),
        Family::Uniform => {
            let seed = require(a.seed, "seed")?;
            let m = require(a.m, "m")?;
            if a.sizes.is_empty() {
                return Err(Error::Config("missing --sizes".into()));
            }
            Err(uniform_instance(&as_usize(&a.sizes), m, a.min, a.max, seed)?)
        }
        Family::Identical => Ok(identical_items_instance(require(a.g, "g")?)?),
        Family::Equal2 => Ok(materialize(equal_two_group_params(require(a.n, "n")?)?)?),
        Family::Lb1 => Ok(materialize(lb1_params(&a.sizes)?)?),
        Family::Lb2 => Ok(materialize(lb2_params(&a.sizes)?)?),
        Family::Lb3 => Ok(materialize(lb3_params(require(a.n, "n")?, require(a.g, "g")?)?)?),
        Family::Generic => {
            let g = a.sizes.len();
            let modes = if a.modes.is_empty() { vec![Mode::Covering; g] } else { a.modes.clone() };
            let params = GenericLbParams {
                m: require(a.m, "m")?,
                p: require(a.p, "p")?,
                t: a.t.clone(),
                sizes: as_usize(&a.sizes),
                modes: modes
                    .iter()
                    .map(|m| match m {
                        Mode::Identical => GroupMode::Identical,
                        Mode::Covering => GroupMode::Covering,
                    })
                    .collect(),
            };
            if a.design.is_empty() {
                Ok(materialize(params)?)
            } else {
                let mut files = a.design.iter();
                let designs = params
                    .modes
                    .iter()
                    .map(|mode| match mode {
                        GroupMode::Identical => Ok(None),
                        GroupMode::Covering => {
                            let path = files.next().ok_or_else(|| Error::DesignInvalid("fewer --design files than covering groups".into()))?;
                            CoveringDesign::from_document(&read(path)?).map(Some)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(adversarial::generic_instance_capped(&params, &designs, a.max_agents)?)
            }
        }
    };
    match generated {
        Err(instance) => out.line(instance.to_document()),
        Ok(mut g) => {
            if a.check {
                g.certificate.check(&g.instance, &OracleBudget::default())?;
            }
            out.line(g.instance.to_document());
            let cert = g.certificate.to_document();
            match &a.cert {
                Some(path) => fs::write(path, cert)?,
                None => out.note(cert.trim_end()),
            }
        }
    }
    Ok(())
}

fn oracle(a: OracleArgs, out: &mut Output) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let budget = OracleBudget { max_allocations: a.max_nodes, ..OracleBudget::default() };
    if a.target.min_p {
        let r = min_feasible(&inst, &budget)?;
        out.line(r.p.to_string());
        out.line(r.allocation.to_document());
        out.note(format!("nodes={}", r.nodes));
    } else {
        let p = a.target.p.expect("clap requires p or min-p");
        let r = exists_mms_allocation(&inst, p, &budget)?;
        match r.allocation {
            Some(alloc) => out.line(alloc.to_document()),
            None => out.line("INFEASIBLE"),
        }
        out.note(format!("nodes={}", r.nodes));
    }
    Ok(())
}

fn search(a: SearchArgs, out: &mut Output) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let r = random_allocation_search(&inst, a.p, a.trials, a.seed)?;
    match r.allocation {
        Some(alloc) => out.line(alloc.to_document()),
        None => out.line("NOT_FOUND"),
    }
    out.note(format!("trials={}", r.trials));
    Ok(())
}

fn simulate_cmd(a: SimulateArgs, out: &mut Output) -> Result<()> {
    let inst = match &a.instance {
        Some(path) => load_instance(path)?,
        None => uniform_instance(&a.sizes, a.m.expect("clap requires m"), a.min, a.max, a.instance_seed.unwrap_or(a.seed))?,
    };
    let algorithm = match a.algo {
        SimAlgo::Ub1 => Algorithm::Ub1 { c1: a.c1 },
        SimAlgo::Ub2 => Algorithm::Ub2 { c2: a.c2, retries: a.retries },
        SimAlgo::RandomSearch => Algorithm::RandomSearch { p: a.p.expect("clap requires p"), budget: a.budget },
    };
    let spec = SimulationSpec { algorithm, trials: a.trials, base_seed: a.seed, timing: a.timing, jobs: a.jobs };
    let sim = simulate(&inst, &spec)?;
    match &a.csv {
        Some(path) => sim.write_csv(fs::File::create(path)?)?,
        None => out.line(sim.to_csv()),
    }
    out.note(format!("{} {}", spec.algorithm.tag(), sim.summary()));
    match sim.error {
        Some((trial, e)) => Err(Error::Config(format!("trial {trial} aborted: {e}"))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_seed_is_a_usage_error() {
        let out = run(["search", "--instance", "x.json", "--p", "2", "--trials", "3"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("--seed"));
    }

    #[test]
    fn two_group_bound() {
        let out = run(["bound", "two-group", "--n1", "5", "--n2", "5"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "4\n"));
    }

    #[test]
    fn domain_errors_exit_one() {
        let out = run(["bound", "equal2", "--n", "3"]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("TRIVIAL_REGIME"));
    }

    #[test]
    fn design_document() {
        let out = run(["design", "--m", "5", "--s", "3", "--t", "2", "--method", "exhaustive"]);
        assert_eq!(out.code, 0);
        assert_eq!(CoveringDesign::from_document(&out.stdout).unwrap().len(), 4);
    }
}
