use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use subshift::langtools::{factors_oracle, member_language, member_shift_language};
use subshift::transforms::{cobham_normalize, higher_block, primitive_conjugate};
use subshift::Morphism;
use subshift_cli::{
    analyze, decide_property, decision_exit_code, fixed_points_report, render_report, words_of, Config, Property,
    Stage,
};

/// Decision procedures for substitution shifts of possibly erasing morphisms.
#[derive(Parser)]
#[command(name = "subshift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Step cap of the decomposition search.
    #[arg(long, global = true, default_value_t = subshift::decide::DEFAULT_DECOMPOSITION_STEPS)]
    cap_steps: usize,
    /// Half-width of the windows printed around the origin of points.
    #[arg(long, global = true, default_value_t = 16)]
    cap_window: usize,
    /// Largest power of the morphism searched for fixed points.
    #[arg(long, global = true)]
    power_bound: Option<usize>,
    /// Stages to skip (comma separated).
    #[arg(long, global = true, value_enum, value_delimiter = ',')]
    skip: Vec<Stage>,
    /// Record the time spent in each stage.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every analysis and print a report.
    Analyze { path: PathBuf },
    /// Decide one property.
    Decide {
        #[arg(value_enum)]
        property: Property,
        path: PathBuf,
    },
    /// Test whether a word is in the language of the morphism (or of its shift).
    Member {
        path: PathBuf,
        word: String,
        #[arg(long)]
        shift: bool,
    },
    /// List the factors of length n.
    Factors {
        path: PathBuf,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Enumerate the orbits of two-sided fixed points of powers of the morphism.
    FixedPoints {
        path: PathBuf,
        /// Largest power searched.
        #[arg(long)]
        power: Option<usize>,
    },
    /// Higher block presentation on blocks of length k.
    Block {
        path: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Normalize φ(τ^ω(seed)) to a non-erasing morphism and a letter-to-letter map.
    Normalize {
        path: PathBuf,
        /// File with φ; the identity when absent.
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(long)]
        seed: String,
    },
    /// A primitive morphism presenting the shift of a minimal morphism.
    Primitive { path: PathBuf },
}

fn read_morphism(path: &Path) -> Result<Morphism> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Morphism::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

#[derive(Serialize)]
struct MemberOutput {
    word: String,
    shift: bool,
    member: bool,
}

#[derive(Serialize)]
struct FactorsOutput {
    n: usize,
    factors: Vec<String>,
}

#[derive(Serialize)]
struct BlockOutput {
    k: usize,
    blocks: Vec<String>,
    morphism: String,
}

#[derive(Serialize)]
struct NormalizeOutput {
    m: usize,
    n: usize,
    seed: String,
    gamma: String,
    zeta: String,
    theta: String,
}

#[derive(Serialize)]
struct PrimitiveOutput {
    tau: String,
    phi: String,
}

fn run(cli: Cli) -> Result<i32> {
    let c = &cli.common;
    let cfg = Config {
        skip: c.skip.clone(),
        cap_steps: c.cap_steps,
        cap_window: c.cap_window,
        power_bound: c.power_bound,
        timings: c.timings,
    };
    let json = c.json;
    match cli.command {
        Command::Analyze { path } => {
            let m = read_morphism(&path)?;
            let report = analyze(&m, &cfg)?;
            emit(json, &report, || render_report(&report))?;
            Ok(report.exit_code())
        }
        Command::Decide { property, path } => {
            let m = read_morphism(&path)?;
            let d = decide_property(&m, property, &cfg);
            emit(json, &d, || {
                let mut s = d.status.label().to_string();
                if let Some(n) = &d.note {
                    s.push_str(&format!(" [{n}]"));
                }
                s.push('\n');
                s
            })?;
            Ok(decision_exit_code(&d))
        }
        Command::Member { path, word, shift } => {
            let m = read_morphism(&path)?;
            let w = m.alphabet().parse_word(&word)?;
            let member = if shift { member_shift_language(&m, &w)? } else { member_language(&m, &w)? };
            let out = MemberOutput { word, shift, member };
            emit(json, &out, || format!("{member}\n"))?;
            Ok(0)
        }
        Command::Factors { path, n } => {
            let m = read_morphism(&path)?;
            let factors = words_of(&m, factors_oracle(&m, n)?);
            let out = FactorsOutput { n, factors };
            emit(json, &out, || out.factors.iter().map(|f| format!("{f}\n")).collect())?;
            Ok(0)
        }
        Command::FixedPoints { path, power } => {
            let m = read_morphism(&path)?;
            let r = fixed_points_report(&m, power.or(cfg.power_bound), cfg.cap_window);
            emit(json, &r, || {
                let mut s = String::new();
                for p in &r.points {
                    let period = p.period.map_or("aperiodic".to_string(), |q| format!("period {q}"));
                    s.push_str(&format!("power {}: {}  ({period})\n  {}\n", p.power, p.text, p.window));
                }
                if let Some(n) = &r.note {
                    s.push_str(&format!("[{n}]\n"));
                }
                s
            })?;
            Ok(if r.status == subshift_cli::Status::True { 0 } else { 1 })
        }
        Command::Block { path, k } => {
            let m = read_morphism(&path)?;
            let b = higher_block(&m, k)?;
            let out = BlockOutput { k, blocks: words_of(&m, b.blocks.clone()), morphism: b.sigma_k.to_text() };
            emit(json, &out, || out.morphism.clone())?;
            Ok(0)
        }
        Command::Normalize { path, phi, seed } => {
            let tau = read_morphism(&path)?;
            let phi = match phi {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    Morphism::parse_general(&text)?
                }
                None => Morphism::identity(tau.alphabet().clone()),
            };
            let s = tau.alphabet().parse_word(&seed)?;
            let n = cobham_normalize(&tau, &phi, &s)?;
            let out = NormalizeOutput {
                m: n.m,
                n: n.n,
                seed: n.zeta.alphabet().render(&n.seed),
                gamma: n.gamma.to_text(),
                zeta: n.zeta.to_text(),
                theta: n.theta.to_text(),
            };
            emit(json, &out, || {
                format!(
                    "m = {}, n = {}, seed {}\ngamma:\n{}zeta:\n{}theta:\n{}",
                    out.m, out.n, out.seed, out.gamma, out.zeta, out.theta
                )
            })?;
            Ok(0)
        }
        Command::Primitive { path } => {
            let m = read_morphism(&path)?;
            let (tau, phi) = primitive_conjugate(&m)?;
            let out = PrimitiveOutput { tau: tau.to_text(), phi: phi.to_text() };
            emit(json, &out, || format!("tau:\n{}phi:\n{}", out.tau, out.phi))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
