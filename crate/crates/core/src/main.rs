use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use advinj::harness::{
    self, resolve_output, Adversary, ExperimentConfig, ExperimentReport, GainMode, GuessMode, MatchMode, MatchingKind,
    Problem, SubmodKind,
};
use advinj::matching::write_edge_stream;
use advinj::recurrence::{self, Ratio64};
use advinj::stream::write_instance;

/// Experiments with streaming algorithms under adversarial injections.
///
/// Settings come from an optional TOML config (`--config`); command-line
/// flags override it. Relative output paths are placed under
/// $ADVINJ_OUT_DIR when it is set.
#[derive(Parser)]
#[command(name = "advinj", version)]
struct Cli {
    /// TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Submodular maximization experiments.
    Submod {
        #[command(subcommand)]
        action: SubmodAction,
    },
    /// Streaming matching experiments.
    Matching {
        #[command(subcommand)]
        action: MatchingAction,
    },
    /// Recurrence diagonal, optionally with exact certification.
    Recurrence(RecurrenceArgs),
    /// Emit a generated instance file.
    Gen {
        #[command(subcommand)]
        what: GenWhat,
    },
    /// Run the axiom and greedy-robustness suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances per family.
        #[arg(long, default_value_t = 50)]
        instances: usize,
    },
}

#[derive(Subcommand)]
enum SubmodAction {
    Run(SubmodRun),
}

#[derive(Subcommand)]
enum MatchingAction {
    Run(MatchingRun),
}

#[derive(Args, Default)]
struct Common {
    /// Instance file; otherwise a generator is used.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Generated instances.
    #[arg(long)]
    trials: Option<usize>,
    /// Sampled permutations per instance.
    #[arg(long)]
    perms: Option<usize>,
    /// Enumerate all permutations of the good set.
    #[arg(long)]
    all_perms: bool,
    /// none, front, back, spread, random or block:<slot>.
    #[arg(long)]
    adversary: Option<Adversary>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary path.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    generator: GeneratorFlags,
}

#[derive(Args, Default)]
struct GeneratorFlags {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    universe: Option<usize>,
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    block: Option<usize>,
    #[arg(long)]
    side: Option<usize>,
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    fraction: Option<f64>,
    #[arg(long)]
    hubs: Option<usize>,
}

#[derive(Args)]
struct SubmodRun {
    #[command(flatten)]
    common: Common,
    /// four-rectangles, random-coverage or decoy-front.
    #[arg(long, value_parser = kebab::<SubmodKind>)]
    kind: Option<SubmodKind>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// exact or bucketed.
    #[arg(long, value_parser = kebab::<GainMode>)]
    mode: Option<GainMode>,
    /// known or auto.
    #[arg(long, value_parser = kebab::<GuessMode>)]
    guess: Option<GuessMode>,
}

#[derive(Args)]
struct MatchingRun {
    #[command(flatten)]
    common: Common,
    /// random-bipartite, planted or greedy-trap.
    #[arg(long, value_parser = kebab::<MatchingKind>)]
    kind: Option<MatchingKind>,
    /// greedy, match or guessed.
    #[arg(long, value_parser = kebab::<MatchMode>)]
    mode: Option<MatchMode>,
    /// known or auto.
    #[arg(long, value_parser = kebab::<GuessMode>)]
    mstar: Option<GuessMode>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta_guess: Option<f64>,
    /// Solve exactly when the optimum is small enough.
    #[arg(long)]
    store_small_graphs: bool,
}

#[derive(Args)]
struct RecurrenceArgs {
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    kmax: Option<usize>,
    /// Write k, R(k,k), argmin_tag_at_diag rows here.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Certify R(k,k) ≥ bound exactly for every k up to this value.
    #[arg(long)]
    certify: Option<usize>,
    #[arg(long)]
    bound: Option<f64>,
}

#[derive(Subcommand)]
enum GenWhat {
    Submod {
        #[arg(long, value_parser = kebab::<SubmodKind>)]
        kind: Option<SubmodKind>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        adversary: Option<Adversary>,
        #[command(flatten)]
        generator: GeneratorFlags,
        #[arg(long)]
        out: PathBuf,
    },
    Matching {
        #[arg(long, value_parser = kebab::<MatchingKind>)]
        kind: Option<MatchingKind>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        adversary: Option<Adversary>,
        #[command(flatten)]
        generator: GeneratorFlags,
        /// Write the realized stream for this permutation seed as plain
        /// `u v` lines instead of the instance format.
        #[arg(long)]
        realize: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn kebab<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|e| e.to_string())
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn load_config(path: Option<&Path>) -> anyhow::Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(ExperimentConfig::default()),
    }
}

fn apply_generator(cfg: &mut ExperimentConfig, g: GeneratorFlags) {
    let p = &mut cfg.generator;
    set(&mut p.n, g.n);
    set(&mut p.universe, g.universe);
    set(&mut p.density, g.density);
    set(&mut p.block, g.block);
    set(&mut p.side, g.side);
    set(&mut p.edges, g.edges);
    set(&mut p.size, g.size);
    set(&mut p.fraction, g.fraction);
    set(&mut p.hubs, g.hubs);
}

fn apply_common(cfg: &mut ExperimentConfig, c: Common) {
    if c.instance.is_some() {
        cfg.instance = c.instance;
    }
    set(&mut cfg.seed, c.seed);
    set(&mut cfg.trials, c.trials);
    set(&mut cfg.perms, c.perms);
    cfg.all_perms |= c.all_perms;
    set(&mut cfg.adversary, c.adversary);
    if c.out.is_some() {
        cfg.out = c.out;
    }
    if c.summary.is_some() {
        cfg.summary = c.summary;
    }
    apply_generator(cfg, c.generator);
}

fn finish(cfg: &ExperimentConfig, report: &ExperimentReport) -> anyhow::Result<ExitCode> {
    let written = harness::write_report(cfg, report)?;
    println!("{}", serde_json::to_string_pretty(&report.summary)?);
    if let Some(p) = written {
        eprintln!("wrote {}", p.display());
    }
    Ok(if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let mut cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Submod {
            action: SubmodAction::Run(a),
        } => {
            cfg.problem = Problem::Submod;
            apply_common(&mut cfg, a.common);
            set(&mut cfg.submod.kind, a.kind);
            set(&mut cfg.submod.k, a.k);
            set(&mut cfg.submod.delta, a.delta);
            set(&mut cfg.submod.mode, a.mode);
            set(&mut cfg.submod.guess, a.guess);
            let report = harness::run_experiment(&cfg)?;
            finish(&cfg, &report)
        }
        Command::Matching {
            action: MatchingAction::Run(a),
        } => {
            cfg.problem = Problem::Matching;
            apply_common(&mut cfg, a.common);
            let m = &mut cfg.matching;
            set(&mut m.kind, a.kind);
            set(&mut m.mode, a.mode);
            set(&mut m.mstar, a.mstar);
            set(&mut m.epsilon, a.epsilon);
            set(&mut m.delta_guess, a.delta_guess);
            m.store_small_graphs |= a.store_small_graphs;
            let report = harness::run_experiment(&cfg)?;
            finish(&cfg, &report)
        }
        Command::Recurrence(a) => recurrence_cmd(&mut cfg, a),
        Command::Gen { what } => gen_cmd(&mut cfg, what),
        Command::Verify { seed, instances } => {
            let results = harness::verify_suite(seed, instances)?;
            let mut ok = true;
            for r in &results {
                println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                ok &= r.passed;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}

fn recurrence_cmd(cfg: &mut ExperimentConfig, a: RecurrenceArgs) -> anyhow::Result<ExitCode> {
    let p = &mut cfg.recurrence;
    set(&mut p.t, a.t);
    set(&mut p.k_max, a.kmax);
    set(&mut p.bound, a.bound);
    if a.certify.is_some() {
        p.certify = a.certify;
    }
    let p = p.clone();
    let mut code = ExitCode::SUCCESS;
    if let Some(k_max) = p.certify {
        let bound = Ratio64::from_decimal(p.bound)?;
        let c = recurrence::certify_exact(Ratio64::from_decimal(p.t)?, k_max, bound)?;
        println!(
            "certify t={} k<= {k_max} bound={}: {} (min {:.12} at k={}, {} violations)",
            p.t,
            p.bound,
            if c.holds() { "holds" } else { "VIOLATED" },
            c.min_value,
            c.argmin_k,
            c.violations.len()
        );
        if !c.holds() {
            code = ExitCode::from(2);
        }
    }
    if a.emit.is_some() || p.certify.is_none() {
        cfg.problem = Problem::Recurrence;
        cfg.recurrence.certify = None;
        cfg.out = a.emit;
        let report = harness::run_experiment(cfg)?;
        if let advinj::harness::Records::Recurrence(rows) = &report.records {
            if let Some(min) = rows.iter().min_by(|x, y| x.value.total_cmp(&y.value)) {
                println!("min R(k,k) over k<={}: {:.12} at k={}", p.k_max, min.value, min.k);
            }
        }
        if let Some(path) = harness::write_report(cfg, &report)? {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(code)
}

fn gen_cmd(cfg: &mut ExperimentConfig, what: GenWhat) -> anyhow::Result<ExitCode> {
    match what {
        GenWhat::Submod {
            kind,
            k,
            seed,
            adversary,
            generator,
            out,
        } => {
            set(&mut cfg.submod.kind, kind);
            set(&mut cfg.submod.k, k);
            set(&mut cfg.seed, seed);
            set(&mut cfg.adversary, adversary);
            apply_generator(cfg, generator);
            let mut params = cfg.generator.clone();
            params.k = cfg.submod.k;
            let inst = harness::generate_submod_instance(cfg.submod.kind, &params, cfg.adversary, cfg.seed)?;
            let path = resolve_output(&out);
            let mut buf = Vec::new();
            write_instance(&mut buf, &inst.split, &inst.plan)?;
            std::fs::write(&path, buf).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {} (opt {})", path.display(), inst.opt.value);
        }
        GenWhat::Matching {
            kind,
            seed,
            adversary,
            generator,
            realize,
            out,
        } => {
            set(&mut cfg.matching.kind, kind);
            set(&mut cfg.seed, seed);
            set(&mut cfg.adversary, adversary);
            apply_generator(cfg, generator);
            let inst = harness::generate_matching_instance(cfg.matching.kind, &cfg.generator, cfg.adversary, cfg.seed)?;
            let path = resolve_output(&out);
            let mut buf = Vec::new();
            match realize {
                Some(s) => write_edge_stream(&mut buf, &inst.stream(s)?)?,
                None => write_instance(&mut buf, &inst.split, &inst.plan)?,
            }
            std::fs::write(&path, buf).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {} (maximum matching {})", path.display(), inst.opt_size);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn kebab_values_parse() {
        assert_eq!(kebab::<GainMode>("bucketed").unwrap(), GainMode::Bucketed);
        assert_eq!(kebab::<MatchMode>("guessed").unwrap(), MatchMode::Guessed);
        assert!(kebab::<GuessMode>("maybe").is_err());
    }
}
