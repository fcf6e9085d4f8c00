//! The multigraph `G(σ)`, its strongly connected components, and the
//! classification of letters (erasable, growing, and membership in the
//! language of the shift).

use std::collections::{HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SccKind {
    /// One vertex, no loop.
    Trivial,
    /// Every vertex has exactly one edge inside the component.
    Cycle,
    Expanding,
}

/// `G(σ)` with `M(σ)`, components, periods and reachability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismGraph {
    /// `matrix[a][b] = |σ(a)|_b`.
    pub matrix: Vec<Vec<usize>>,
    /// Component of each letter; components are numbered by their least letter.
    pub scc_of: Vec<usize>,
    /// Letters of each component, increasing.
    pub sccs: Vec<Vec<Letter>>,
    pub scc_kind: Vec<SccKind>,
    /// gcd of cycle lengths, absent for trivial components.
    pub scc_period: Vec<Option<usize>>,
    /// `reach[a][b]`: a path from `a` to `b` exists (reflexive).
    pub reach: Vec<Vec<bool>>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        a / gcd(a, b) * b
    }
}

impl MorphismGraph {
    pub fn build(m: &Morphism) -> Result<Self> {
        m.require_endo()?;
        let n = m.card();
        let mut matrix = vec![vec![0usize; n]; n];
        for a in 0..n {
            for &b in m.image(a) {
                matrix[a][b] += 1;
            }
        }
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for a in 0..n {
            for b in 0..n {
                if matrix[a][b] > 0 {
                    g.add_edge(nodes[a], nodes[b], ());
                }
            }
        }
        let mut sccs: Vec<Vec<Letter>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut v: Vec<Letter> = c.into_iter().map(|x| x.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        sccs.sort();
        let mut scc_of = vec![0; n];
        for (i, c) in sccs.iter().enumerate() {
            for &a in c {
                scc_of[a] = i;
            }
        }
        let mut scc_kind = Vec::with_capacity(sccs.len());
        let mut scc_period = Vec::with_capacity(sccs.len());
        for (i, c) in sccs.iter().enumerate() {
            let inside = |a: Letter| -> usize { c.iter().map(|&b| matrix[a][b]).sum() };
            let kind = if c.len() == 1 && matrix[c[0]][c[0]] == 0 {
                SccKind::Trivial
            } else if c.iter().all(|&a| inside(a) == 1) {
                SccKind::Cycle
            } else {
                SccKind::Expanding
            };
            scc_kind.push(kind);
            scc_period.push(if kind == SccKind::Trivial {
                None
            } else {
                Some(component_period(&matrix, &scc_of, i, c))
            });
        }
        let mut reach = vec![vec![false; n]; n];
        for (a, row) in reach.iter_mut().enumerate() {
            let mut queue = VecDeque::from([a]);
            row[a] = true;
            while let Some(x) = queue.pop_front() {
                for y in 0..n {
                    if matrix[x][y] > 0 && !row[y] {
                        row[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(MorphismGraph { matrix, scc_of, sccs, scc_kind, scc_period, reach })
    }

    pub fn card(&self) -> usize {
        self.matrix.len()
    }

    pub fn kind_of(&self, a: Letter) -> SccKind {
        self.scc_kind[self.scc_of[a]]
    }

    pub fn is_nontrivial(&self, scc: usize) -> bool {
        self.scc_kind[scc] != SccKind::Trivial
    }

    /// True when some letter of component `s` reaches some letter of component `t`.
    pub fn scc_reaches(&self, s: usize, t: usize) -> bool {
        self.reach[self.sccs[s][0]][self.sccs[t][0]]
    }

    /// Letters reachable from some letter of component `s`.
    pub fn reachable_from_scc(&self, s: usize) -> Vec<bool> {
        let r = self.sccs[s][0];
        self.reach[r].clone()
    }

    /// Least common multiple of the periods of non-trivial components.
    pub fn period_lcm(&self) -> usize {
        self.scc_period.iter().flatten().fold(1, |acc, &p| lcm(acc, p))
    }
}

fn component_period(matrix: &[Vec<usize>], scc_of: &[usize], id: usize, c: &[Letter]) -> usize {
    let n = matrix.len();
    let mut level = vec![usize::MAX; n];
    level[c[0]] = 0;
    let mut queue = VecDeque::from([c[0]]);
    let mut g = 0;
    while let Some(x) = queue.pop_front() {
        for y in 0..n {
            if matrix[x][y] == 0 || scc_of[y] != id {
                continue;
            }
            if level[y] == usize::MAX {
                level[y] = level[x] + 1;
                queue.push_back(y);
            } else {
                g = gcd(g, (level[x] + 1).abs_diff(level[y]));
            }
        }
    }
    g.max(1)
}

/// Membership types of a letter in the language of the shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ShiftType {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2'")]
    TwoPrime,
    #[serde(rename = "2''")]
    TwoSecond,
    #[serde(rename = "3")]
    Three,
}

impl ShiftType {
    pub fn label(self) -> &'static str {
        match self {
            ShiftType::One => "1",
            ShiftType::TwoPrime => "2'",
            ShiftType::TwoSecond => "2''",
            ShiftType::Three => "3",
        }
    }
}

/// Witness for a type-2' component: `σ^k(a) = u b v` and `σ^p(b) = w b z`
/// with (`u` growing or `w` non-erasable) and (`v` growing or `z` non-erasable).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeTwoWitness {
    /// Letter in a trivial component.
    pub source: Letter,
    /// Letter of the cycle component.
    pub cycle_letter: Letter,
    pub k: usize,
    pub p: usize,
    /// Position of the chosen occurrence of `cycle_letter` in `σ^k(source)`.
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LetterClassification {
    pub erasable: Vec<bool>,
    /// Mortality exponent of erasable letters.
    pub mex: Vec<Option<usize>>,
    pub growing: Vec<bool>,
    pub shift_types: Vec<Vec<ShiftType>>,
    pub in_shift_language: Vec<bool>,
    pub type_two_witnesses: Vec<TypeTwoWitness>,
}

impl LetterClassification {
    pub fn compute(m: &Morphism, g: &MorphismGraph) -> Self {
        let n = m.card();
        let mex = mortality(m);
        let erasable: Vec<bool> = mex.iter().map(Option::is_some).collect();
        let growing = growing_letters(g);
        let mut types = vec![Vec::new(); n];
        let mark = |types: &mut Vec<Vec<ShiftType>>, from: &[bool], t: ShiftType| {
            for (a, &r) in from.iter().enumerate() {
                if r && !types[a].contains(&t) {
                    types[a].push(t);
                }
            }
        };
        let nscc = g.sccs.len();
        for s in 0..nscc {
            match g.scc_kind[s] {
                SccKind::Expanding => mark(&mut types, &g.reachable_from_scc(s), ShiftType::One),
                SccKind::Cycle => {
                    let sides = cycle_sides(m, g, &mex, s);
                    if sides.iter().any(|&(_, w, z)| w && z) {
                        mark(&mut types, &g.reachable_from_scc(s), ShiftType::TwoSecond);
                    }
                }
                SccKind::Trivial => {}
            }
            if g.scc_kind[s] != SccKind::Trivial {
                let below_cycle = (0..nscc)
                    .any(|c| c != s && g.scc_kind[c] == SccKind::Cycle && g.scc_reaches(c, s));
                if below_cycle {
                    mark(&mut types, &g.reachable_from_scc(s), ShiftType::Three);
                }
            }
        }
        let witnesses = type_two_prime(m, g, &mex, &growing);
        for w in &witnesses {
            mark(&mut types, &g.reachable_from_scc(g.scc_of[w.cycle_letter]), ShiftType::TwoPrime);
        }
        for t in types.iter_mut() {
            t.sort();
        }
        let in_shift_language = types.iter().map(|t| !t.is_empty()).collect();
        LetterClassification {
            erasable,
            mex,
            growing,
            shift_types: types,
            in_shift_language,
            type_two_witnesses: witnesses,
        }
    }

    pub fn is_erasable_word(&self, w: &[Letter]) -> bool {
        w.iter().all(|&a| self.erasable[a])
    }

    pub fn is_growing_word(&self, w: &[Letter]) -> bool {
        w.iter().any(|&a| self.growing[a])
    }

    /// `mex(w)`: least `n` with `σ^n(w) = ε`, for erasable `w`.
    pub fn mex_word(&self, w: &[Letter]) -> Option<usize> {
        w.iter().try_fold(0, |acc, &a| self.mex[a].map(|x| acc.max(x)))
    }

    /// `mex(σ)`: the largest mortality exponent (0 when nothing is erasable).
    pub fn mex_morphism(&self) -> usize {
        self.mex.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn growing_letters(&self) -> Vec<Letter> {
        (0..self.growing.len()).filter(|&a| self.growing[a]).collect()
    }

    pub fn non_growing_letters(&self) -> Vec<Letter> {
        (0..self.growing.len()).filter(|&a| !self.growing[a]).collect()
    }
}

/// Mortality exponents by fixpoint: `mex(a) = 1 + max mex(σ(a))`.
fn mortality(m: &Morphism) -> Vec<Option<usize>> {
    let n = m.card();
    let mut mex: Vec<Option<usize>> = vec![None; n];
    loop {
        let mut changed = false;
        for a in 0..n {
            if mex[a].is_some() {
                continue;
            }
            if let Some(x) = m.image(a).iter().try_fold(0, |acc, &b| mex[b].map(|v| acc.max(v))) {
                mex[a] = Some(x + 1);
                changed = true;
            }
        }
        if !changed {
            return mex;
        }
    }
}

fn growing_letters(g: &MorphismGraph) -> Vec<bool> {
    let nscc = g.sccs.len();
    let seed: Vec<bool> = (0..nscc)
        .map(|s| {
            g.scc_kind[s] == SccKind::Expanding
                || (g.is_nontrivial(s) && (0..nscc).any(|t| t != s && g.is_nontrivial(t) && g.scc_reaches(s, t)))
        })
        .collect();
    (0..g.card())
        .map(|a| (0..nscc).any(|s| seed[s] && g.reach[a][g.sccs[s][0]]))
        .collect()
}

/// For each letter `b` of a cycle component of length `ℓ`, with
/// `σ^ℓ(b) = w b z`: `(b, w non-erasable, z non-erasable)`.
fn cycle_sides(m: &Morphism, g: &MorphismGraph, mex: &[Option<usize>], s: usize) -> Vec<(Letter, bool, bool)> {
    let len = g.sccs[s].len();
    let survives = |x: &[Letter]| x.iter().any(|&y| mex[y].is_none());
    g.sccs[s]
        .iter()
        .map(|&b| {
            let (mut left, mut right) = (false, false);
            let mut c = b;
            for _ in 0..len {
                let img = m.image(c);
                let pos = img.iter().position(|&y| g.scc_of[y] == s).expect("cycle successor");
                left |= survives(&img[..pos]);
                right |= survives(&img[pos + 1..]);
                c = img[pos];
            }
            (b, left, right)
        })
        .collect()
}

/// Exact search for type-2' components over states `(letter, left growing, right growing)`.
fn type_two_prime(
    m: &Morphism,
    g: &MorphismGraph,
    mex: &[Option<usize>],
    growing: &[bool],
) -> Vec<TypeTwoWitness> {
    let n = m.card();
    let mut sides: HashMap<Letter, (bool, bool, usize)> = HashMap::new();
    for s in 0..g.sccs.len() {
        if g.scc_kind[s] == SccKind::Cycle {
            for (b, w, z) in cycle_sides(m, g, mex, s) {
                sides.insert(b, (w, z, g.sccs[s].len()));
            }
        }
    }
    let mut found: HashMap<usize, TypeTwoWitness> = HashMap::new();
    for a in 0..n {
        if g.scc_kind[g.scc_of[a]] != SccKind::Trivial {
            continue;
        }
        // state index: letter * 4 + left * 2 + right; value: (depth, parent state, position in parent image)
        let mut seen: Vec<Option<(usize, usize, usize)>> = vec![None; 4 * n];
        let mut queue = VecDeque::new();
        let start = 4 * a;
        seen[start] = Some((0, usize::MAX, 0));
        queue.push_back(start);
        while let Some(st) = queue.pop_front() {
            let (x, fl, fr) = (st / 4, st & 2 != 0, st & 1 != 0);
            let depth = seen[st].unwrap().0;
            let img = m.image(x);
            for (i, &y) in img.iter().enumerate() {
                let l = fl || img[..i].iter().any(|&c| growing[c]);
                let r = fr || img[i + 1..].iter().any(|&c| growing[c]);
                let ns = 4 * y + 2 * l as usize + r as usize;
                if seen[ns].is_some() {
                    continue;
                }
                seen[ns] = Some((depth + 1, st, i));
                queue.push_back(ns);
                if let Some(&(w, z, p)) = sides.get(&y) {
                    let scc = g.scc_of[y];
                    if (l || w) && (r || z) && !found.contains_key(&scc) {
                        let position = occurrence_position(m, &seen, ns);
                        found.insert(scc, TypeTwoWitness { source: a, cycle_letter: y, k: depth + 1, p, position });
                    }
                }
            }
        }
    }
    let mut v: Vec<TypeTwoWitness> = found.into_values().collect();
    v.sort_by_key(|w| g.scc_of[w.cycle_letter]);
    v
}

/// Position in `σ^k(a)` of the occurrence reached by the BFS path ending at `st`.
fn occurrence_position(m: &Morphism, seen: &[Option<(usize, usize, usize)>], st: usize) -> usize {
    let mut path = Vec::new();
    let mut cur = st;
    while let Some((_, parent, i)) = seen[cur] {
        if parent == usize::MAX {
            break;
        }
        path.push((parent / 4, i));
        cur = parent;
    }
    path.reverse();
    let k = path.len();
    let table = m.length_table(k);
    let mut pos: u64 = 0;
    for (level, &(x, i)) in path.iter().enumerate() {
        let rem = k - level - 1;
        for &c in &m.image(x)[..i] {
            pos = pos.saturating_add(table[rem][c]);
        }
    }
    usize::try_from(pos).unwrap_or(usize::MAX)
}

/// `(i, p)` with `σ^i(a) = σ^{i+p}(a)` for all non-growing `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationConstants {
    pub i: usize,
    pub p: usize,
}

impl StabilizationConstants {
    /// The least pair, found by iterating the images of the non-growing letters.
    pub fn compute(m: &Morphism, c: &LetterClassification, max_steps: usize) -> Result<Self> {
        let letters = c.non_growing_letters();
        if letters.is_empty() {
            return Ok(StabilizationConstants { i: 0, p: 1 });
        }
        let mut cur: Vec<Word> = letters.iter().map(|&a| vec![a]).collect();
        let mut seen: HashMap<Vec<Word>, usize> = HashMap::new();
        for step in 0..=max_steps {
            if let Some(&first) = seen.get(&cur) {
                return Ok(StabilizationConstants { i: first, p: step - first });
            }
            seen.insert(cur.clone(), step);
            cur = cur.iter().map(|w| m.img(w)).collect();
        }
        Err(Error::cap("stabilization steps", max_steps))
    }
}

pub const DEFAULT_STABILIZATION_STEPS: usize = 100_000;

/// Graph, classification and stabilization constants of one endomorphism.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub morphism: Morphism,
    pub graph: MorphismGraph,
    pub classes: LetterClassification,
    pub stab: StabilizationConstants,
}

impl Analysis {
    pub fn new(m: &Morphism) -> Result<Self> {
        let graph = MorphismGraph::build(m)?;
        let classes = LetterClassification::compute(m, &graph);
        let stab = StabilizationConstants::compute(m, &classes, DEFAULT_STABILIZATION_STEPS)?;
        Ok(Analysis { morphism: m.clone(), graph, classes, stab })
    }

    pub fn card(&self) -> usize {
        self.morphism.card()
    }

    pub fn growing(&self, a: Letter) -> bool {
        self.classes.growing[a]
    }
}

pub fn build_graph(m: &Morphism) -> Result<MorphismGraph> {
    MorphismGraph::build(m)
}

pub fn classify_letters(m: &Morphism) -> Result<LetterClassification> {
    Ok(LetterClassification::compute(m, &MorphismGraph::build(m)?))
}

pub fn stabilization_constants(m: &Morphism) -> Result<StabilizationConstants> {
    let c = classify_letters(m)?;
    StabilizationConstants::compute(m, &c, DEFAULT_STABILIZATION_STEPS)
}

/// True when some letter belongs to the language of the shift, i.e. the shift is non-empty.
pub fn shift_nonempty(m: &Morphism) -> Result<bool> {
    Ok(classify_letters(m)?.in_shift_language.iter().any(|&b| b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ShiftType::*;

    fn parse(s: &str) -> Morphism {
        Morphism::parse(s).unwrap()
    }

    fn types(m: &Morphism) -> Vec<Vec<ShiftType>> {
        classify_letters(m).unwrap().shift_types
    }

    #[test]
    fn fibonacci_graph() {
        let g = build_graph(&parse("a -> ab\nb -> a")).unwrap();
        assert_eq!(g.matrix, vec![vec![1, 1], vec![1, 0]]);
        assert_eq!(g.sccs, vec![vec![0, 1]]);
        assert_eq!(g.scc_kind, vec![SccKind::Expanding]);
        assert_eq!(g.scc_period, vec![Some(1)]);
    }

    #[test]
    fn cycle_and_trivial_components() {
        let g = build_graph(&parse("a -> a")).unwrap();
        assert_eq!(g.scc_kind, vec![SccKind::Cycle]);
        assert_eq!(g.scc_period, vec![Some(1)]);
        let g = build_graph(&parse("a -> bab\nb -> cd\nc -> c\nd -> d")).unwrap();
        assert_eq!(g.scc_kind, vec![SccKind::Cycle, SccKind::Trivial, SccKind::Cycle, SccKind::Cycle]);
        assert_eq!(g.scc_period[1], None);
        let g = build_graph(&parse("a -> b\nb -> c\nc -> a")).unwrap();
        assert_eq!(g.scc_period, vec![Some(3)]);
    }

    #[test]
    fn type_examples() {
        let m = parse("a -> ab\nb -> bc\nc -> cc");
        assert_eq!(types(&m), vec![vec![], vec![Three], vec![One, Three]]);
        let m = parse("e -> cbd\nc -> cc\nd -> dd\nb -> ba\na ->");
        assert_eq!(types(&m), vec![vec![], vec![One], vec![One], vec![TwoPrime], vec![TwoPrime]]);
        let tau = parse("e -> bcd\nc -> cc\nd -> dd\nb -> ba\na ->");
        let tt = types(&tau);
        assert!(tt[3].is_empty() && tt[4].is_empty());
        assert_eq!(build_graph(&m).unwrap().matrix, build_graph(&tau).unwrap().matrix);
        let m = parse("a -> bac\nb -> b\nc -> c");
        let t = types(&m);
        assert!(t.iter().all(|x| x.contains(&TwoSecond)));
    }

    #[test]
    fn growing_and_erasable() {
        let c = classify_letters(&parse("a -> baab\nb ->")).unwrap();
        assert_eq!(c.growing, vec![true, false]);
        assert_eq!(c.mex, vec![None, Some(1)]);
        let c = classify_letters(&parse("a -> bc\nb -> c\nc ->")).unwrap();
        assert_eq!(c.mex, vec![Some(3), Some(2), Some(1)]);
        assert_eq!(c.mex_morphism(), 3);
        let c = classify_letters(&parse("a -> abb\nb -> b")).unwrap();
        assert_eq!(c.growing, vec![true, false]);
    }

    #[test]
    fn stabilization_examples() {
        let s = stabilization_constants(&parse("a -> abb\nb -> b")).unwrap();
        assert_eq!((s.i, s.p), (0, 1));
        let s = stabilization_constants(&parse("a -> baab\nb ->")).unwrap();
        assert_eq!((s.i, s.p), (1, 1));
        let s = stabilization_constants(&parse("e -> cbd\nc -> cc\nd -> dd\nb -> ba\na ->")).unwrap();
        assert_eq!((s.i, s.p), (1, 1));
        let s = stabilization_constants(&parse("a -> b\nb -> a")).unwrap();
        assert_eq!((s.i, s.p), (0, 2));
    }

    #[test]
    fn nonempty_shift() {
        assert!(shift_nonempty(&parse("a -> ab\nb -> a")).unwrap());
        assert!(!shift_nonempty(&parse("a -> a")).unwrap());
        assert!(shift_nonempty(&parse("a -> abb\nb -> b")).unwrap());
    }
}
