//! Languages of a morphism: transition monoids over factor automata, the
//! decision procedures for `L(σ)` and `L(X(σ))`, and brute-force factor sets.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Analysis, MorphismGraph, SccKind};
use crate::morphism::Morphism;
use crate::word::{Letter, Word};

/// A complete deterministic automaton on states `0..states`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternAutomaton {
    pub states: usize,
    /// `delta[q][a]`.
    pub delta: Vec<Vec<usize>>,
    pub initial: usize,
    pub accepting: Vec<bool>,
}

impl PatternAutomaton {
    /// Recognizes `A* u A*`; state `q` is the length of the longest prefix of
    /// `u` read so far, and `|u|` is absorbing.
    pub fn factor(card: usize, u: &[Letter]) -> Self {
        let n = u.len();
        let mut fail = vec![0usize; n + 1];
        let mut k = 0;
        for i in 1..n {
            while k > 0 && u[i] != u[k] {
                k = fail[k];
            }
            if u[i] == u[k] {
                k += 1;
            }
            fail[i + 1] = k;
        }
        let mut delta = vec![vec![0usize; card]; n + 1];
        for q in 0..=n {
            for a in 0..card {
                delta[q][a] = if q == n {
                    n
                } else if u[q] == a {
                    q + 1
                } else if q == 0 {
                    0
                } else {
                    delta[fail[q]][a]
                };
            }
        }
        let mut accepting = vec![false; n + 1];
        accepting[n] = true;
        PatternAutomaton { states: n + 1, delta, initial: 0, accepting }
    }

    /// Recognizes `(A∖{x})*`: state 1 is a rejecting sink.
    pub fn avoiding(card: usize, x: Letter) -> Self {
        let delta = vec![(0..card).map(|a| usize::from(a == x)).collect(), vec![1; card]];
        PatternAutomaton { states: 2, delta, initial: 0, accepting: vec![true, false] }
    }

    pub fn run(&self, w: &[Letter]) -> usize {
        w.iter().fold(self.initial, |q, &a| self.delta[q][a])
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.accepting[self.run(w)]
    }
}

/// A transformation of automaton states: `t[q]` is the state reached from `q`.
pub type Transformation = Vec<usize>;

/// The eventually periodic sequence `ψ_n(a)` of transformations of `σ^n(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidTrace {
    /// `relations[n][a] = ψ_n(a)` for `n < preperiod + period`.
    pub relations: Vec<Vec<Transformation>>,
    pub preperiod: usize,
    pub period: usize,
}

pub const DEFAULT_TRACE_STEPS: usize = 1_000_000;

impl MonoidTrace {
    pub fn compute(m: &Morphism, aut: &PatternAutomaton, max_steps: usize) -> Result<Self> {
        m.require_endo()?;
        if aut.delta.first().is_some_and(|r| r.len() != m.card()) {
            return Err(Error::AlphabetMismatch("automaton alphabet differs from the morphism".into()));
        }
        let q = aut.states;
        let mut cur: Vec<Transformation> =
            (0..m.card()).map(|a| (0..q).map(|s| aut.delta[s][a]).collect()).collect();
        let mut relations = Vec::new();
        let mut seen: HashMap<Vec<Transformation>, usize> = HashMap::new();
        for step in 0..=max_steps {
            if let Some(&first) = seen.get(&cur) {
                return Ok(MonoidTrace { relations, preperiod: first, period: step - first });
            }
            seen.insert(cur.clone(), step);
            let next = (0..m.card())
                .map(|a| {
                    let mut t: Transformation = (0..q).collect();
                    for &b in m.image(a) {
                        for s in t.iter_mut() {
                            *s = cur[b][*s];
                        }
                    }
                    t
                })
                .collect();
            relations.push(std::mem::replace(&mut cur, next));
        }
        Err(Error::cap("monoid trace steps", max_steps))
    }

    /// `ψ_n(a)` for any `n`, using periodicity.
    pub fn at(&self, n: usize, a: Letter) -> &Transformation {
        let idx = if n < self.preperiod + self.period {
            n
        } else {
            self.preperiod + (n - self.preperiod) % self.period
        };
        &self.relations[idx][a]
    }

    /// `ψ_n(a)` as a boolean relation matrix.
    pub fn matrix(&self, n: usize, a: Letter) -> Vec<Vec<bool>> {
        let t = self.at(n, a);
        (0..t.len()).map(|p| (0..t.len()).map(|q| t[p] == q).collect()).collect()
    }

    /// Indices `n` with `n ≤ preperiod + period`.
    pub fn horizon(&self) -> usize {
        self.preperiod + self.period
    }
}

/// `ψ_n` for the factor automaton of `u`.
pub fn monoid_trace(m: &Morphism, aut: &PatternAutomaton) -> Result<MonoidTrace> {
    MonoidTrace::compute(m, aut, DEFAULT_TRACE_STEPS)
}

fn factor_hits(m: &Morphism, u: &[Letter], only_periodic: bool) -> Result<bool> {
    if u.is_empty() {
        return Ok(true);
    }
    if !m.alphabet().contains_word(u) {
        return Err(Error::LetterOutOfRange(u.iter().copied().max().unwrap_or(0)));
    }
    let aut = PatternAutomaton::factor(m.card(), u);
    let tr = monoid_trace(m, &aut)?;
    let lo = if only_periodic { tr.preperiod } else { 0 };
    Ok((lo..=tr.horizon()).any(|k| (0..m.card()).any(|a| tr.at(k, a)[aut.initial] == u.len())))
}

/// `u ∈ L(σ)`: `u` is a factor of some `σ^k(a)`.
pub fn member_language(m: &Morphism, u: &[Letter]) -> Result<bool> {
    factor_hits(m, u, false)
}

/// `u` is a factor of some `σ^n(a)` for infinitely many `n`.
pub fn infinitely_often_factor(m: &Morphism, u: &[Letter]) -> Result<bool> {
    factor_hits(m, u, true)
}

/// True when `L(σ) ∩ (A∖{avoid})*` is infinite.
///
/// The state at level `k` records which `σ^k(c)` avoid `avoid` and the words
/// `σ^k(c)` of the non-growing letters; it is eventually periodic in `k`. In
/// the periodic regime the set is infinite iff the image of some growing
/// letter avoids `avoid`, or the longest avoiding suffix (or prefix) of
/// `σ^k(c)` grows along a cycle of the chain sending `c` to the last (first)
/// letter of `σ(c)` whose image does not avoid `avoid`.
pub fn intersect_finite(m: &Morphism, avoid: Letter) -> Result<bool> {
    let an = Analysis::new(m)?;
    if avoid >= m.card() {
        return Err(Error::LetterOutOfRange(avoid));
    }
    let n = m.card();
    let growing = &an.classes.growing;
    let step = |(avoids, words): &AvoidState| -> AvoidState {
        let next_avoids = (0..n).map(|c| m.image(c).iter().all(|&x| avoids[x])).collect();
        let next_words = (0..n)
            .map(|c| if growing[c] { Vec::new() } else { m.image(c).iter().flat_map(|&x| words[x].iter().copied()).collect() })
            .collect();
        (next_avoids, next_words)
    };
    let mut state: AvoidState = (
        (0..n).map(|c| c != avoid).collect(),
        (0..n).map(|c| if growing[c] { Vec::new() } else { vec![c] }).collect(),
    );
    let mut seen: HashMap<AvoidState, usize> = HashMap::new();
    let mut states: Vec<AvoidState> = Vec::new();
    let start = loop {
        if let Some(&k) = seen.get(&state) {
            break k;
        }
        if states.len() >= AVOID_STATE_CAP {
            return Err(Error::cap("avoiding-language states", AVOID_STATE_CAP));
        }
        seen.insert(state.clone(), states.len());
        states.push(state.clone());
        state = step(&state);
    };
    let cycle = &states[start..];
    if cycle.iter().any(|(avoids, _)| (0..n).any(|c| growing[c] && avoids[c])) {
        return Ok(true);
    }
    Ok(chain_grows(m, cycle, true) || chain_grows(m, cycle, false))
}

const AVOID_STATE_CAP: usize = 100_000;

/// Whether `σ^k(c)` avoids the letter, and `σ^k(c)` for non-growing `c`.
type AvoidState = (Vec<bool>, Vec<Word>);

/// Whether the longest avoiding suffix (`from_right`) or prefix of `σ^k(c)`
/// is unbounded, given the states of one period. Node `(c, r)` stands for
/// `c` at a level of residue `r`; it points to the letter whose image carries
/// on the avoiding run one level down, weighted by the fully avoiding images
/// in between.
fn chain_grows(m: &Morphism, cycle: &[AvoidState], from_right: bool) -> bool {
    let n = m.card();
    let p = cycle.len();
    let mut next: Vec<Option<(usize, usize)>> = vec![None; n * p];
    for (r, (avoids, words)) in cycle.iter().enumerate() {
        for c in 0..n {
            let img = m.image(c);
            let mut weight = 0;
            let mut target = None;
            for i in 0..img.len() {
                let x = if from_right { img[img.len() - 1 - i] } else { img[i] };
                if avoids[x] {
                    weight += words[x].len();
                } else {
                    target = Some(x);
                    break;
                }
            }
            if let Some(d) = target {
                next[c * p + (r + 1) % p] = Some((d * p + r, weight));
            }
        }
    }
    let mut color = vec![0u8; n * p];
    for s in 0..n * p {
        let mut path = Vec::new();
        let mut v = Some(s);
        while let Some(x) = v {
            if color[x] != 0 {
                break;
            }
            color[x] = 1;
            path.push(x);
            v = next[x].map(|(u, _)| u);
        }
        if let Some(x) = v.filter(|&x| color[x] == 1) {
            let (mut y, mut total) = (x, 0);
            loop {
                let (u, w) = next[y].expect("cycle node has a successor");
                total += w;
                y = u;
                if y == x {
                    break;
                }
            }
            if total > 0 {
                return true;
            }
        }
        for x in path {
            color[x] = 2;
        }
    }
    false
}

/// Constants `N`, `M`, `r` and `K = (N+M)r` bounding the extensions needed
/// to decide membership in the language of the shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftLanguageConstants {
    pub n: u64,
    pub m: u64,
    pub r: u64,
    pub k: u64,
}

/// `N` and `M` are maxima of `|σ^j(a)|` over `0 ≤ j ≤ i+p` for non-growing
/// (resp. erasable) `a`; erasable letters count in both. `r` is the maximum
/// of `Σ_a |σ^j(a)|` over `0 ≤ j ≤ Card(A)²`.
pub fn shift_language_constants(m: &Morphism) -> Result<ShiftLanguageConstants> {
    let an = Analysis::new(m)?;
    constants_of(&an)
}

pub(crate) fn constants_of(an: &Analysis) -> Result<ShiftLanguageConstants> {
    let m = &an.morphism;
    let card = m.card();
    let horizon = an.stab.i + an.stab.p;
    let mut n_max = 0u64;
    let mut m_max = 0u64;
    for a in an.classes.non_growing_letters() {
        let mut w = vec![a];
        for _ in 0..=horizon {
            n_max = n_max.max(w.len() as u64);
            if an.classes.erasable[a] {
                m_max = m_max.max(w.len() as u64);
            }
            w = m.img(&w);
        }
    }
    let overflow = || Error::cap("shift-language constant r", usize::MAX);
    let mut lens = vec![1u64; card];
    let mut r = card as u64;
    for _ in 0..card * card {
        let mut next = vec![0u64; card];
        for (a, slot) in next.iter_mut().enumerate() {
            for &b in m.image(a) {
                *slot = slot.checked_add(lens[b]).ok_or_else(overflow)?;
            }
        }
        lens = next;
        let total = lens.iter().try_fold(0u64, |s, &x| s.checked_add(x)).ok_or_else(overflow)?;
        r = r.max(total);
    }
    let k = (n_max + m_max).checked_mul(r).ok_or_else(overflow)?;
    Ok(ShiftLanguageConstants { n: n_max, m: m_max, r, k })
}

pub const DEFAULT_SHIFT_CAP: usize = 1_000_000;

/// `u ∈ L(X(σ))`, capped at [`DEFAULT_SHIFT_CAP`] candidate extensions.
pub fn member_shift_language(m: &Morphism, u: &[Letter]) -> Result<bool> {
    member_shift_language_capped(m, u, DEFAULT_SHIFT_CAP)
}

/// Searches the two-sided extensions `w u z` with `|w| = |z| = K` that are
/// factors of `σ^n(a)` for infinitely many `n`, one letter on each side per
/// round; a round with no survivor ends the search.
pub fn member_shift_language_capped(m: &Morphism, u: &[Letter], cap: usize) -> Result<bool> {
    let an = Analysis::new(m)?;
    if !m.alphabet().contains_word(u) {
        return Err(Error::LetterOutOfRange(u.iter().copied().max().unwrap_or(0)));
    }
    if u.len() == 1 {
        return Ok(an.classes.in_shift_language[u[0]]);
    }
    if u.is_empty() {
        return Ok(an.classes.in_shift_language.iter().any(|&b| b));
    }
    if !infinitely_often_factor(m, u)? {
        return Ok(false);
    }
    let k = constants_of(&an)?.k;
    let mut level: BTreeSet<Word> = BTreeSet::from([u.to_vec()]);
    let mut checked = 0usize;
    let mut memo: HashMap<Word, bool> = HashMap::new();
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for w in &level {
            for c in 0..m.card() {
                for d in 0..m.card() {
                    let mut x = Vec::with_capacity(w.len() + 2);
                    x.push(c);
                    x.extend_from_slice(w);
                    x.push(d);
                    if let Some(&ok) = memo.get(&x) {
                        if ok {
                            next.insert(x);
                        }
                        continue;
                    }
                    checked += 1;
                    if checked > cap {
                        return Err(Error::cap(format!("shift-language candidates (K = {k})"), cap));
                    }
                    let ok = infinitely_often_factor(m, &x)?;
                    memo.insert(x.clone(), ok);
                    if ok {
                        next.insert(x);
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok(false);
        }
        level = next;
    }
    Ok(true)
}

/// `L(σ) = L(X(σ))`: every letter is in the language of the shift.
pub fn languages_equal(m: &Morphism) -> Result<bool> {
    let an = Analysis::new(m)?;
    Ok(an.classes.in_shift_language.iter().all(|&b| b))
}

/// Bounded summary of a word for factors of length `≤ n`: short words are
/// kept whole, long ones by their length-`n` borders. Interior factors are
/// recorded when a summary is built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Abstraction {
    Full(Word),
    Long { prefix: Word, suffix: Word },
}

/// Records the length-`n` factors of `w`, or `w` itself when shorter.
fn windows_into(w: &[Letter], n: usize, out: &mut BTreeSet<Word>) {
    if w.len() < n {
        if !w.is_empty() {
            out.insert(w.to_vec());
        }
        return;
    }
    for x in w.windows(n) {
        out.insert(x.to_vec());
    }
}

impl Abstraction {
    fn prefix(&self) -> &[Letter] {
        match self {
            Abstraction::Full(w) => w,
            Abstraction::Long { prefix, .. } => prefix,
        }
    }

    fn suffix(&self) -> &[Letter] {
        match self {
            Abstraction::Full(w) => w,
            Abstraction::Long { suffix, .. } => suffix,
        }
    }

    fn concat(&self, other: &Abstraction, n: usize, out: &mut BTreeSet<Word>) -> Abstraction {
        match (self, other) {
            (Abstraction::Full(x), _) if x.is_empty() => return other.clone(),
            (_, Abstraction::Full(y)) if y.is_empty() => return self.clone(),
            _ => {}
        }
        windows_into(&crate::word::concat(self.suffix(), other.prefix()), n, out);
        if let (Abstraction::Full(x), Abstraction::Full(y)) = (self, other) {
            let w = crate::word::concat(x, y);
            if w.len() < 2 * n {
                return Abstraction::Full(w);
            }
            return Abstraction::Long { prefix: w[..n].to_vec(), suffix: w[w.len() - n..].to_vec() };
        }
        let pre = crate::word::concat(self.prefix(), other.prefix());
        let suf = crate::word::concat(self.suffix(), other.suffix());
        Abstraction::Long { prefix: pre[..n].to_vec(), suffix: suf[suf.len() - n..].to_vec() }
    }
}

pub const DEFAULT_ORACLE_CAP: usize = 16;
const ORACLE_LEVELS: usize = 1_000_000;

/// All factors of length `1..=n` of the words `σ^k(a)`.
///
/// The summaries of `σ^k(a)` for all letters are iterated until the tuple
/// repeats (found by Brent's cycle detection), after which no new factor can
/// appear.
fn factors_upto(m: &Morphism, n: usize) -> Result<BTreeSet<Word>> {
    m.require_endo()?;
    let mut out = BTreeSet::new();
    if n == 0 {
        return Ok(out);
    }
    let empty = Abstraction::Full(Vec::new());
    let step = |cur: &[Abstraction], out: &mut BTreeSet<Word>| -> Vec<Abstraction> {
        (0..m.card()).map(|a| m.image(a).iter().fold(empty.clone(), |acc, &b| acc.concat(&cur[b], n, out))).collect()
    };
    let mut cur: Vec<Abstraction> = (0..m.card()).map(|a| Abstraction::Full(vec![a])).collect();
    for x in &cur {
        windows_into(x.prefix(), n, &mut out);
    }
    let mut saved = cur.clone();
    let (mut power, mut lam) = (1, 0);
    let mut levels = 0;
    loop {
        cur = step(&cur, &mut out);
        lam += 1;
        levels += 1;
        if cur == saved {
            break;
        }
        if levels >= ORACLE_LEVELS {
            return Err(Error::cap("factor oracle levels", ORACLE_LEVELS));
        }
        if lam == power {
            saved = cur.clone();
            power *= 2;
            lam = 0;
        }
    }
    // Each factor of length `l < n` is a prefix or suffix of one of length `l + 1`.
    let mut by_len: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); n + 1];
    for w in out {
        by_len[w.len()].insert(w);
    }
    for l in (2..=n).rev() {
        let shorter: Vec<Word> = by_len[l].iter().flat_map(|w| [w[..l - 1].to_vec(), w[1..].to_vec()]).collect();
        by_len[l - 1].extend(shorter);
    }
    Ok(by_len.into_iter().flatten().collect())
}

/// `L_n(σ)` by exhaustive iteration, for `n ≤ DEFAULT_ORACLE_CAP`.
pub fn factors_oracle(m: &Morphism, n: usize) -> Result<BTreeSet<Word>> {
    factors_oracle_capped(m, n, DEFAULT_ORACLE_CAP)
}

pub fn factors_oracle_capped(m: &Morphism, n: usize, cap: usize) -> Result<BTreeSet<Word>> {
    if n > cap {
        return Err(Error::cap("factor length", cap));
    }
    if n == 0 {
        return Ok(BTreeSet::from([Vec::new()]));
    }
    Ok(factors_upto(m, n)?.into_iter().filter(|w| w.len() == n).collect())
}

/// Every factor of `L(σ)` of length at most `max_len`.
#[derive(Clone, Debug)]
pub struct FactorIndex {
    pub max_len: usize,
    factors: HashSet<Word>,
}

impl FactorIndex {
    pub fn new(m: &Morphism, max_len: usize) -> Result<Self> {
        let factors = factors_upto(m, max_len)?.into_iter().collect();
        Ok(FactorIndex { max_len, factors })
    }

    /// Membership for `|w| ≤ max_len`; longer words are reported absent.
    pub fn contains(&self, w: &[Letter]) -> bool {
        w.is_empty() || self.factors.contains(w)
    }

    pub fn of_length(&self, n: usize) -> Vec<Word> {
        let mut v: Vec<Word> = self.factors.iter().filter(|w| w.len() == n).cloned().collect();
        v.sort();
        v
    }
}

/// True when `σ` has a component that is a cycle; used by callers to select
/// fast paths.
pub fn has_cycle_component(g: &MorphismGraph) -> bool {
    g.scc_kind.contains(&SccKind::Cycle)
}
