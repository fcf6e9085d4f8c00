//! Report assembly and subcommand logic for the `subshift` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use subshift::decide::{self, Decision, Verdict, Witness};
use subshift::graph::Analysis;
use subshift::points::{self, FixedPointDescriptor, FixedShape, QuasiFixedDescriptor, QuasiShape};
use subshift::{langtools, Error, Morphism, Word};

pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of one stage of the analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    True,
    False,
    HypothesisNotMet,
    Skipped,
    CapExceeded,
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::True => "true",
            Status::False => "false",
            Status::HypothesisNotMet => "hypothesis-not-met",
            Status::Skipped => "skipped",
            Status::CapExceeded => "cap-exceeded",
            Status::Error => "error",
        }
    }

    fn of_bool(b: bool) -> Self {
        if b {
            Status::True
        } else {
            Status::False
        }
    }

    fn of_error(e: &Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Status::CapExceeded,
            _ => Status::Error,
        }
    }

    fn failed(self) -> bool {
        matches!(self, Status::CapExceeded | Status::Error)
    }
}

/// Stages that `--skip` can turn off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Stage {
    Languages,
    Aperiodic,
    Periodic,
    FullyRecognizable,
    Irreducible,
    Minimal,
    Elementary,
    FixedPoints,
    QuasiFixedPoints,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub skip: Vec<Stage>,
    /// Step cap of the decomposition search.
    pub cap_steps: usize,
    /// Half-width of the windows printed for points.
    pub cap_window: usize,
    /// Largest power searched for fixed points; `None` uses the library default.
    pub power_bound: Option<usize>,
    pub timings: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            skip: Vec::new(),
            cap_steps: decide::DEFAULT_DECOMPOSITION_STEPS,
            cap_window: 16,
            power_bound: None,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleEcho {
    pub letter: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismEcho {
    pub alphabet: Vec<String>,
    pub rules: Vec<RuleEcho>,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LetterReport {
    pub letter: String,
    pub erasable: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mex: Option<usize>,
    pub growing: bool,
    pub types: Vec<String>,
    pub in_shift_language: bool,
}

/// A point of the shift: the descriptor in letter indices (alphabet order),
/// a readable form and a window around the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub power: usize,
    pub text: String,
    pub window: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub period: Option<usize>,
    pub descriptor: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessReport {
    PeriodicPoint { word: String, power: usize },
    NonPeriodicPoint { point: PointReport },
    Letters { letters: Vec<String> },
    Decomposition { blocks: Vec<String>, alpha: String, beta: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl DecisionReport {
    fn bare(status: Status, note: Option<String>) -> Self {
        DecisionReport { status, witness: None, note }
    }

    fn error(e: &Error) -> Self {
        DecisionReport::bare(Status::of_error(e), Some(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decisions {
    pub aperiodic: DecisionReport,
    pub periodic: DecisionReport,
    pub fully_recognizable: DecisionReport,
    pub irreducible: DecisionReport,
    pub minimal: DecisionReport,
    pub elementary: DecisionReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointsReport {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub power_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub period_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub closure_certified: Option<bool>,
    pub points: Vec<PointReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl PointsReport {
    fn bare(status: Status, note: Option<String>) -> Self {
        PointsReport { status, power_bound: None, period_bound: None, closure_certified: None, points: Vec::new(), note }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub morphism: MorphismEcho,
    pub letters: Vec<LetterReport>,
    pub shift_nonempty: bool,
    pub languages_equal: DecisionReport,
    pub decisions: Decisions,
    pub fixed_points: PointsReport,
    pub quasi_fixed_points: PointsReport,
    /// Milliseconds per stage; only present with `--timings`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl AnalysisReport {
    fn statuses(&self) -> Vec<Status> {
        let d = &self.decisions;
        vec![
            self.languages_equal.status,
            d.aperiodic.status,
            d.periodic.status,
            d.fully_recognizable.status,
            d.irreducible.status,
            d.minimal.status,
            d.elementary.status,
            self.fixed_points.status,
            self.quasi_fixed_points.status,
        ]
    }

    /// 1 if a stage failed, 2 if a decision did not apply, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        let s = self.statuses();
        if s.iter().any(|x| x.failed()) {
            1
        } else if s.contains(&Status::HypothesisNotMet) {
            2
        } else {
            0
        }
    }
}

pub fn render_word(m: &Morphism, w: &[usize]) -> String {
    m.alphabet().render(w)
}

fn periodic_text(m: &Morphism, w: &[usize]) -> String {
    format!("({})", render_word(m, w))
}

pub fn fixed_text(m: &Morphism, d: &FixedPointDescriptor) -> String {
    let r = |w: &[usize]| render_word(m, w);
    let seed = if d.power == 1 { "σ".to_string() } else { format!("(σ^{})", d.power) };
    match &d.shape {
        FixedShape::EventuallyPeriodic { point } => format!(
            "^ω{} {}·{} {}^ω",
            periodic_text(m, &point.left_period),
            r(&point.center[..point.origin]),
            r(&point.center[point.origin..]),
            periodic_text(m, &point.right_period)
        ),
        FixedShape::LeftPeriodicRightSeed { left_period, left_tail, right_seed } => format!(
            "^ω{} {}·{seed}^ω({})",
            periodic_text(m, left_period),
            r(left_tail),
            r(right_seed)
        ),
        FixedShape::LeftSeedRightPeriodic { left_seed, right_head, right_period } => format!(
            "{seed}^ω̃({})·{} {}^ω",
            r(left_seed),
            r(right_head),
            periodic_text(m, right_period)
        ),
        FixedShape::TwoSeed { left, right } => format!("{seed}^ω̃({})·{seed}^ω({})", r(left), r(right)),
    }
}

pub fn quasi_text(m: &Morphism, d: &QuasiFixedDescriptor) -> String {
    let r = |w: &[usize]| render_word(m, w);
    match &d.shape {
        QuasiShape::Fixed { fixed } => fixed_text(m, fixed),
        QuasiShape::Bilateral { letter, left, right } => {
            let s = if d.power == 1 { "σ".to_string() } else { format!("σ^{}", d.power) };
            format!("⋯ {s}({u}) {u}·{a} {v} {s}({v}) ⋯", u = r(left), a = r(&[*letter]), v = r(right))
        }
        QuasiShape::Rotating { left, right } => format!("({}·{})^∞", r(left), r(right)),
    }
}

fn window_text(m: &Morphism, x: &[usize], left: usize) -> String {
    format!("{}·{}", render_word(m, &x[..left]), render_word(m, &x[left..]))
}

fn fixed_report(m: &Morphism, d: &FixedPointDescriptor, window: usize, bound: Option<usize>) -> Result<PointReport, Error> {
    let x = points::expand(m, d, window, window)?;
    let period = match bound {
        Some(b) => points::descriptor_period(m, d, b)?,
        None => None,
    };
    Ok(PointReport {
        power: d.power,
        text: fixed_text(m, d),
        window: window_text(m, &x, window),
        period,
        descriptor: serde_json::to_value(d).expect("descriptors serialize"),
    })
}

fn quasi_report(m: &Morphism, d: &QuasiFixedDescriptor, window: usize, bound: Option<usize>) -> Result<PointReport, Error> {
    let x = points::expand_quasi(m, d, window, window)?;
    let period = match bound {
        Some(b) => points::quasi_period(m, d, b)?,
        None => None,
    };
    Ok(PointReport {
        power: d.power,
        text: quasi_text(m, d),
        window: window_text(m, &x, window),
        period,
        descriptor: serde_json::to_value(d).expect("descriptors serialize"),
    })
}

fn witness_report(m: &Morphism, w: &Witness, window: usize) -> Result<WitnessReport, Error> {
    Ok(match w {
        Witness::PeriodicPoint { word, power } => WitnessReport::PeriodicPoint { word: render_word(m, word), power: *power },
        Witness::NonPeriodicPoint { point } => WitnessReport::NonPeriodicPoint { point: quasi_report(m, point, window, None)? },
        Witness::Letters { letters } => {
            WitnessReport::Letters { letters: letters.iter().map(|&a| m.alphabet().token(a).to_string()).collect() }
        }
    })
}

pub fn decision_report(m: &Morphism, d: Result<Decision, Error>, window: usize) -> DecisionReport {
    let d = match d {
        Ok(d) => d,
        Err(e) => return DecisionReport::error(&e),
    };
    let status = match d.verdict {
        Verdict::True => Status::True,
        Verdict::False => Status::False,
        Verdict::HypothesisNotMet => Status::HypothesisNotMet,
    };
    let witness = match d.witness.as_ref().map(|w| witness_report(m, w, window)).transpose() {
        Ok(w) => w,
        Err(e) => return DecisionReport::error(&e),
    };
    DecisionReport { status, witness, note: d.note }
}

pub fn elementary_report(m: &Morphism, cap_steps: usize) -> DecisionReport {
    match decide::decomposition_capped(m, cap_steps) {
        Ok(None) => DecisionReport::bare(Status::True, None),
        Ok(Some(d)) => DecisionReport {
            status: Status::False,
            witness: Some(WitnessReport::Decomposition {
                blocks: d.block_set.iter().map(|u| render_word(m, u)).collect(),
                alpha: d.alpha.to_text(),
                beta: d.beta.to_text(),
            }),
            note: None,
        },
        Err(e) => DecisionReport::error(&e),
    }
}

/// The period bound used to classify points: the bound of the elementary
/// argument raised to the lengths of the growing periodic orbits.
fn point_bound(m: &Morphism) -> Result<usize, Error> {
    let mut b = decide::period_bound(m)?.bound;
    for (w, _) in decide::growing_periodic_orbits(m)? {
        b = b.max(w.len());
    }
    Ok(b)
}

pub fn fixed_points_report(m: &Morphism, power_bound: Option<usize>, window: usize) -> PointsReport {
    let run = || -> Result<PointsReport, Error> {
        let bound = point_bound(m)?;
        let f = points::enumerate_fixed_orbits(m, power_bound)?;
        let points = f.descriptors.iter().map(|d| fixed_report(m, d, window, Some(bound))).collect::<Result<_, _>>()?;
        Ok(PointsReport {
            status: Status::True,
            power_bound: Some(f.k_max),
            period_bound: Some(bound),
            closure_certified: Some(f.closure_certified),
            points,
            note: (f.omitted > 0).then(|| format!("{} orbits omitted", f.omitted)),
        })
    };
    run().unwrap_or_else(|e| PointsReport::bare(Status::of_error(&e), Some(e.to_string())))
}

pub fn quasi_fixed_points_report(m: &Morphism, power_bound: Option<usize>, window: usize) -> PointsReport {
    let run = || -> Result<PointsReport, Error> {
        let bound = point_bound(m)?;
        let q = points::enumerate_quasi_fixed_orbits(m, power_bound)?;
        let points = q.iter().map(|d| quasi_report(m, d, window, Some(bound))).collect::<Result<_, _>>()?;
        Ok(PointsReport {
            status: Status::True,
            power_bound,
            period_bound: Some(bound),
            closure_certified: None,
            points,
            note: None,
        })
    };
    run().unwrap_or_else(|e| PointsReport::bare(Status::of_error(&e), Some(e.to_string())))
}

/// Runs every stage not skipped by `cfg`.
pub fn analyze(m: &Morphism, cfg: &Config) -> Result<AnalysisReport, Error> {
    let mut timings = BTreeMap::new();
    let mut timed = |name: &str, f: &mut dyn FnMut()| {
        let t = Instant::now();
        f();
        timings.insert(name.to_string(), t.elapsed().as_secs_f64() * 1000.0);
    };
    let skipped = |s: Stage| cfg.skip.contains(&s);
    let skip_report = || DecisionReport::bare(Status::Skipped, None);
    let w = cfg.cap_window;

    let mut analysis = None;
    timed("classification", &mut || analysis = Some(Analysis::new(m)));
    let an = analysis.expect("stage ran")?;
    let c = &an.classes;
    let letters = (0..m.card())
        .map(|a| LetterReport {
            letter: m.alphabet().token(a).to_string(),
            erasable: c.erasable[a],
            mex: c.mex[a],
            growing: c.growing[a],
            types: c.shift_types[a].iter().map(|t| t.label().to_string()).collect(),
            in_shift_language: c.in_shift_language[a],
        })
        .collect();
    let shift_nonempty = c.in_shift_language.iter().any(|&b| b);

    let mut languages_equal = skip_report();
    if !skipped(Stage::Languages) {
        timed("languages", &mut || {
            languages_equal = match langtools::languages_equal(m) {
                Ok(b) => DecisionReport::bare(Status::of_bool(b), None),
                Err(e) => DecisionReport::error(&e),
            }
        });
    }
    let mut decide_stage = |stage: Stage, name: &str, f: &dyn Fn() -> Result<Decision, Error>| {
        let mut out = skip_report();
        if !skipped(stage) {
            timed(name, &mut || out = decision_report(m, f(), w));
        }
        out
    };
    let aperiodic = decide_stage(Stage::Aperiodic, "aperiodic", &|| decide::is_aperiodic(m));
    let periodic = decide_stage(Stage::Periodic, "periodic", &|| decide::is_periodic_shift_with(m, cfg.power_bound));
    let fully_recognizable =
        decide_stage(Stage::FullyRecognizable, "fully-recognizable", &|| decide::is_fully_recognizable(m));
    let irreducible = decide_stage(Stage::Irreducible, "irreducible", &|| decide::is_irreducible(m));
    let minimal = decide_stage(Stage::Minimal, "minimal", &|| decide::is_minimal(m));
    let mut elementary = skip_report();
    if !skipped(Stage::Elementary) {
        timed("elementary", &mut || elementary = elementary_report(m, cfg.cap_steps));
    }
    let mut fixed_points = PointsReport::bare(Status::Skipped, None);
    if !skipped(Stage::FixedPoints) {
        timed("fixed-points", &mut || fixed_points = fixed_points_report(m, cfg.power_bound, w));
    }
    let mut quasi_fixed_points = PointsReport::bare(Status::Skipped, None);
    if !skipped(Stage::QuasiFixedPoints) {
        timed("quasi-fixed-points", &mut || quasi_fixed_points = quasi_fixed_points_report(m, cfg.power_bound, w));
    }

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        morphism: MorphismEcho {
            alphabet: m.alphabet().tokens().to_vec(),
            rules: (0..m.card())
                .map(|a| RuleEcho { letter: m.alphabet().token(a).to_string(), image: render_word(m, m.image(a)) })
                .collect(),
            size: m.size(),
        },
        letters,
        shift_nonempty,
        languages_equal,
        decisions: Decisions { aperiodic, periodic, fully_recognizable, irreducible, minimal, elementary },
        fixed_points,
        quasi_fixed_points,
        timings: cfg.timings.then_some(timings),
    })
}

fn decision_line(out: &mut String, name: &str, d: &DecisionReport) {
    let _ = write!(out, "{name}: {}", d.status.label());
    match &d.witness {
        Some(WitnessReport::PeriodicPoint { word, power }) => {
            let _ = write!(out, " (periodic point ({word})^∞, power {power})");
        }
        Some(WitnessReport::NonPeriodicPoint { point }) => {
            let _ = write!(out, " (non-periodic point {})", point.text);
        }
        Some(WitnessReport::Letters { letters }) => {
            let list = if letters.is_empty() { "none".to_string() } else { letters.join(" ") };
            let _ = write!(out, " (candidate letters: {list})");
        }
        Some(WitnessReport::Decomposition { blocks, .. }) => {
            let _ = write!(out, " (blocks: {})", blocks.join(" "));
        }
        None => {}
    }
    if let Some(n) = &d.note {
        let _ = write!(out, " [{n}]");
    }
    out.push('\n');
}

fn points_lines(out: &mut String, name: &str, p: &PointsReport) {
    let _ = write!(out, "{name}: {}", p.status.label());
    if let Some(k) = p.power_bound {
        let _ = write!(out, ", powers up to {k}");
    }
    if let Some(c) = p.closure_certified {
        let _ = write!(out, ", closure {}", if c { "certified" } else { "not certified" });
    }
    if let Some(n) = &p.note {
        let _ = write!(out, " [{n}]");
    }
    out.push('\n');
    for x in &p.points {
        let period = x.period.map_or("aperiodic".to_string(), |q| format!("period {q}"));
        let _ = writeln!(out, "  power {}: {}  ({period})", x.power, x.text);
        let _ = writeln!(out, "    {}", x.window);
    }
}

pub fn render_report(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let rules: Vec<String> = r.morphism.rules.iter().map(|x| format!("{} -> {}", x.letter, x.image)).collect();
    let _ = writeln!(out, "morphism: {} (size {})", rules.join(", "), r.morphism.size);
    out.push_str("letters:\n");
    for l in &r.letters {
        let mut flags = Vec::new();
        flags.push(if l.growing { "growing".to_string() } else { "non-growing".to_string() });
        if let Some(e) = l.mex {
            flags.push(format!("erasable (mex {e})"));
        }
        let types = if l.types.is_empty() { "-".to_string() } else { l.types.join(",") };
        flags.push(format!("types {types}"));
        if !l.in_shift_language {
            flags.push("not in the shift".to_string());
        }
        let _ = writeln!(out, "  {}: {}", l.letter, flags.join(", "));
    }
    let _ = writeln!(out, "shift nonempty: {}", r.shift_nonempty);
    decision_line(&mut out, "languages equal", &r.languages_equal);
    let d = &r.decisions;
    decision_line(&mut out, "aperiodic", &d.aperiodic);
    decision_line(&mut out, "periodic", &d.periodic);
    decision_line(&mut out, "fully recognizable", &d.fully_recognizable);
    decision_line(&mut out, "irreducible", &d.irreducible);
    decision_line(&mut out, "minimal", &d.minimal);
    decision_line(&mut out, "elementary", &d.elementary);
    points_lines(&mut out, "fixed points", &r.fixed_points);
    points_lines(&mut out, "quasi-fixed points", &r.quasi_fixed_points);
    if let Some(t) = &r.timings {
        out.push_str("timings (ms):\n");
        for (k, v) in t {
            let _ = writeln!(out, "  {k}: {v:.3}");
        }
    }
    out
}

/// Properties accepted by `decide`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Property {
    Aperiodic,
    Periodic,
    FullyRecognizable,
    Irreducible,
    Minimal,
    Elementary,
}

pub fn decide_property(m: &Morphism, p: Property, cfg: &Config) -> DecisionReport {
    let w = cfg.cap_window;
    match p {
        Property::Aperiodic => decision_report(m, decide::is_aperiodic(m), w),
        Property::Periodic => decision_report(m, decide::is_periodic_shift_with(m, cfg.power_bound), w),
        Property::FullyRecognizable => decision_report(m, decide::is_fully_recognizable(m), w),
        Property::Irreducible => decision_report(m, decide::is_irreducible(m), w),
        Property::Minimal => decision_report(m, decide::is_minimal(m), w),
        Property::Elementary => elementary_report(m, cfg.cap_steps),
    }
}

/// Exit code of a single decision: 1 on failure, 2 when the hypothesis is not met.
pub fn decision_exit_code(d: &DecisionReport) -> i32 {
    match d.status {
        Status::CapExceeded | Status::Error => 1,
        Status::HypothesisNotMet => 2,
        _ => 0,
    }
}

pub fn words_of(m: &Morphism, ws: impl IntoIterator<Item = Word>) -> Vec<String> {
    ws.into_iter().map(|w| render_word(m, &w)).collect()
}
