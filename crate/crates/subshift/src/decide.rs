//! Decisions on the shift `X(σ)`: elementary decompositions, bounds on the
//! periods of periodic points, aperiodicity, periodicity, full
//! recognizability, irreducibility and minimality.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Analysis, SccKind};
use crate::langtools::{self, member_language, FactorIndex};
use crate::linalg::{self, Q};
use crate::morphism::Morphism;
use crate::points::{self, QuasiFixedDescriptor};
use crate::word::{block_token, is_primitive, least_conjugate, periodic_orbit_key, Alphabet, Letter, Word};

/// Steps allowed in the factorization search for decompositions.
pub const DEFAULT_DECOMPOSITION_STEPS: usize = 1_000_000;
const VERTEX_CAP: usize = 1_000_000;
const EIGENVALUE_CAP: u64 = 1_000_000;

fn rational_str<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn rational_vec<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// A non-negative left eigenvector `z` of `M(σ)^power` for the integer eigenvalue `eigenvalue`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenPair {
    pub power: usize,
    pub eigenvalue: u64,
    #[serde(serialize_with = "rational_vec")]
    pub vector: Vec<Q>,
}

/// Bound on the least period of periodic points of the shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodBound {
    /// Largest ratio of non-growing to growing weight over the recorded eigenvectors.
    #[serde(serialize_with = "rational_str")]
    pub rho: Q,
    /// `⌈(2ρ+1)(Card(A)+1)⌉`, raised to the periods of the non-growing orbits.
    pub bound: usize,
    pub eigen_data: Vec<EigenPair>,
}

/// `σ = α∘β` through a smaller alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub beta: Morphism,
    pub alpha: Morphism,
    pub block_set: Vec<Word>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    True,
    False,
    HypothesisNotMet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// The point `w^∞`; `σ^power` permutes the orbits of a cycle containing it.
    PeriodicPoint { word: Word, power: usize },
    /// An admissible quasi-fixed point that is not periodic.
    NonPeriodicPoint { point: QuasiFixedDescriptor },
    /// Letters that are the only candidates for the property, none of which qualifies.
    Letters { letters: Vec<Letter> },
}

/// Outcome of a decision, with a witness for negative answers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Decision {
    fn yes() -> Self {
        Decision { verdict: Verdict::True, witness: None, note: None }
    }

    fn no(w: Witness) -> Self {
        Decision { verdict: Verdict::False, witness: Some(w), note: None }
    }

    fn not_met(reason: &str) -> Self {
        Decision { verdict: Verdict::HypothesisNotMet, witness: None, note: Some(reason.into()) }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_true(&self) -> bool {
        self.verdict == Verdict::True
    }
}

struct Search<'a> {
    images: &'a [Word],
    size: usize,
    steps: usize,
    cap: usize,
    blocks: Vec<Word>,
    factorization: Vec<Vec<usize>>,
    best: Option<(Vec<Word>, Vec<Vec<Word>>)>,
}

impl Search<'_> {
    fn run(&mut self, img: usize, pos: usize) -> Result<()> {
        self.steps += 1;
        if self.steps > self.cap {
            return Err(Error::cap("decomposition search steps", self.cap));
        }
        if img == self.images.len() {
            let mut set = self.blocks.clone();
            set.sort();
            if self.best.as_ref().is_none_or(|(b, _)| set < *b) {
                let fact = self
                    .factorization
                    .iter()
                    .map(|f| f.iter().map(|&i| self.blocks[i].clone()).collect())
                    .collect();
                self.best = Some((set, fact));
            }
            return Ok(());
        }
        let w = &self.images[img];
        if pos == w.len() {
            return self.run(img + 1, 0);
        }
        for i in 0..self.blocks.len() {
            if w[pos..].starts_with(&self.blocks[i]) {
                let len = self.blocks[i].len();
                self.factorization[img].push(i);
                self.run(img, pos + len)?;
                self.factorization[img].pop();
            }
        }
        if self.blocks.len() < self.size {
            for end in pos + 1..=w.len() {
                let piece = w[pos..end].to_vec();
                if self.blocks.contains(&piece) {
                    continue;
                }
                self.blocks.push(piece);
                self.factorization[img].push(self.blocks.len() - 1);
                self.run(img, end)?;
                self.factorization[img].pop();
                self.blocks.pop();
            }
        }
        Ok(())
    }
}

/// A decomposition `σ = α∘β` with the fewest blocks, the least block set
/// among those; `None` when `σ` is elementary.
pub fn elementary_decomposition(m: &Morphism) -> Result<Option<Decomposition>> {
    decomposition_capped(m, DEFAULT_DECOMPOSITION_STEPS)
}

pub fn decomposition_capped(m: &Morphism, cap: usize) -> Result<Option<Decomposition>> {
    m.require_endo()?;
    let n = m.card();
    for size in 0..n {
        let mut s = Search {
            images: m.images(),
            size,
            steps: 0,
            cap,
            blocks: Vec::new(),
            factorization: vec![Vec::new(); n],
            best: None,
        };
        s.run(0, 0)?;
        let Some((set, fact)) = s.best else { continue };
        let tokens: Vec<String> = set.iter().map(|u| block_token(m.alphabet(), u)).collect();
        let b = Alphabet::new(tokens)?;
        let index: BTreeMap<&Word, Letter> = set.iter().enumerate().map(|(i, u)| (u, i)).collect();
        let beta_images = fact.iter().map(|f: &Vec<Word>| f.iter().map(|u| index[u]).collect()).collect();
        let beta = Morphism::new(m.alphabet().clone(), b.clone(), beta_images)?;
        let alpha = Morphism::new(b, m.alphabet().clone(), set.clone())?;
        return Ok(Some(Decomposition { beta, alpha, block_set: set }));
    }
    Ok(None)
}

pub fn is_elementary(m: &Morphism) -> Result<bool> {
    Ok(elementary_decomposition(m)?.is_none())
}

/// Bound on the least period of periodic points containing growing letters
/// of an elementary morphism, raised to the periods of the non-growing orbits.
pub fn period_bound(m: &Morphism) -> Result<PeriodBound> {
    period_bound_of(&Analysis::new(m)?)
}

pub(crate) fn period_bound_of(an: &Analysis) -> Result<PeriodBound> {
    let n = an.card();
    let growing = &an.classes.growing;
    let base: Vec<Vec<BigInt>> =
        an.graph.matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut powers = vec![base.clone()];
    for _ in 1..n {
        let next = linalg::int_matrix_mul(powers.last().unwrap(), &base);
        powers.push(next);
    }
    let mut subsets: BTreeSet<Vec<Letter>> = BTreeSet::new();
    for a in an.classes.growing_letters() {
        subsets.insert((0..n).filter(|&b| an.graph.reach[a][b]).collect());
    }
    let mut eigen: BTreeMap<(usize, u64, Vec<Q>), Q> = BTreeMap::new();
    for s in &subsets {
        for (pi, p) in powers.iter().enumerate() {
            let sub: Vec<Vec<Q>> =
                s.iter().map(|&i| s.iter().map(|&j| Q::from_integer(p[i][j].clone())).collect()).collect();
            let max_row = s
                .iter()
                .map(|&i| s.iter().fold(BigInt::zero(), |acc, &j| acc + &p[i][j]))
                .max()
                .unwrap_or_default();
            let top = max_row.to_u64().filter(|&x| x <= EIGENVALUE_CAP).ok_or_else(|| {
                Error::cap("integer eigenvalue candidates", EIGENVALUE_CAP as usize)
            })?;
            let cp = linalg::char_poly(&sub);
            for ev in 2..=top {
                if !linalg::eval_poly(&cp, &linalg::q(ev as i64)).is_zero() {
                    continue;
                }
                // z^T P = ev z^T  <=>  (P^T - ev I) z = 0
                let k = s.len();
                let a: Vec<Vec<Q>> = (0..k)
                    .map(|i| {
                        (0..k)
                            .map(|j| {
                                let mut x = sub[j][i].clone();
                                if i == j {
                                    x -= linalg::q(ev as i64);
                                }
                                x
                            })
                            .collect()
                    })
                    .collect();
                let basis = linalg::nullspace(&a, k);
                let num: Vec<bool> = s.iter().map(|&b| !growing[b]).collect();
                let den: Vec<bool> = s.iter().map(|&b| growing[b]).collect();
                if let Some((r, z)) = linalg::maximize_ratio(&basis, &num, &den, VERTEX_CAP)? {
                    let mut full = vec![Q::zero(); n];
                    for (i, &b) in s.iter().enumerate() {
                        full[b] = z[i].clone();
                    }
                    eigen.insert((pi + 1, ev, full), r);
                }
            }
        }
    }
    let rho = eigen.values().max().cloned().unwrap_or_else(Q::zero);
    let factor = (linalg::q(2) * &rho + linalg::q(1)) * linalg::q(n as i64 + 1);
    let ceil = factor.ceil().to_integer();
    let mut bound = ceil.to_usize().ok_or_else(|| Error::cap("period bound", usize::MAX))?;
    for p in points::non_growing_orbits_of(an)? {
        bound = bound.max(p.left_period.len()).max(p.right_period.len());
    }
    let eigen_data = eigen.into_keys().map(|(power, eigenvalue, vector)| EigenPair { power, eigenvalue, vector }).collect();
    Ok(PeriodBound { rho, bound, eigen_data })
}

/// Bound used to test fixed points for periodicity: the period bound raised
/// to the periods of the growing periodic orbits.
pub(crate) fn point_period_bound(an: &Analysis) -> Result<usize> {
    let mut b = period_bound_of(an)?.bound;
    for (w, _) in growing_orbits_of(an)? {
        b = b.max(w.len());
    }
    Ok(b)
}

/// Periodic orbits `w^∞` of `X(σ)` containing a growing letter that `σ`
/// permutes, as (least conjugate of the primitive period, cycle length).
pub fn growing_periodic_orbits(m: &Morphism) -> Result<Vec<(Word, usize)>> {
    growing_orbits_of(&Analysis::new(m)?)
}

/// Terminates since each `β∘α` has a strictly smaller alphabet.
fn growing_orbits_of(an: &Analysis) -> Result<Vec<(Word, usize)>> {
    let m = &an.morphism;
    if !an.classes.growing.iter().any(|&g| g) {
        return Ok(Vec::new());
    }
    let mut candidates: BTreeSet<Word> = BTreeSet::new();
    match elementary_decomposition(m)? {
        Some(dec) => {
            let inner = Morphism::compose(&dec.beta, &dec.alpha)?;
            debug_assert!(inner.card() < m.card());
            let sub = growing_orbits_of(&Analysis::new(&inner)?)?;
            for (w, _) in sub {
                let x = dec.alpha.img(&w);
                if !x.is_empty() {
                    let key = periodic_orbit_key(&x);
                    if member_language(m, &crate::word::repeat(&key, 2))? {
                        candidates.insert(key);
                    }
                }
            }
        }
        None => {
            let bound = period_bound_of(an)?.bound;
            let index = FactorIndex::new(m, 2 * bound)?;
            for q in 1..=bound {
                for f in index.of_length(2 * q) {
                    if f[..q] == f[q..] && is_primitive(&f[..q]) {
                        candidates.insert(least_conjugate(&f[..q]));
                    }
                }
            }
        }
    }
    candidates.retain(|w| an.classes.is_growing_word(w));
    let next = |w: &Word| -> Option<Word> {
        let x = m.img(w);
        (!x.is_empty()).then(|| periodic_orbit_key(&x)).filter(|k| candidates.contains(k))
    };
    let mut out = Vec::new();
    for w in &candidates {
        let mut cur = w.clone();
        for k in 1..=candidates.len() {
            match next(&cur) {
                Some(x) if x == *w => {
                    out.push((w.clone(), k));
                    break;
                }
                Some(x) => cur = x,
                None => break,
            }
        }
    }
    Ok(out)
}

fn non_growing_witness(an: &Analysis) -> Result<Option<Witness>> {
    for p in points::non_growing_orbits_of(an)? {
        if let Some(q) = p.period() {
            let w = p.orbit_canonical().left_period;
            debug_assert_eq!(w.len(), q);
            let mut cur = w.clone();
            let mut power = 0;
            for k in 1..=10_000 {
                cur = periodic_orbit_key(&an.morphism.img(&cur));
                if cur == w {
                    power = k;
                    break;
                }
            }
            return Ok(Some(Witness::PeriodicPoint { word: w, power }));
        }
    }
    Ok(None)
}

/// `X(σ)` contains no periodic point.
pub fn is_aperiodic(m: &Morphism) -> Result<Decision> {
    let an = Analysis::new(m)?;
    if !an.classes.in_shift_language.iter().any(|&b| b) {
        return Ok(Decision::yes().with_note("empty shift"));
    }
    if let Some((w, k)) = growing_orbits_of(&an)?.into_iter().next() {
        return Ok(Decision::no(Witness::PeriodicPoint { word: w, power: k }));
    }
    Ok(match non_growing_witness(&an)? {
        Some(w) => Decision::no(w),
        None => Decision::yes(),
    })
}

/// Every point of `X(σ)` is periodic.
pub fn is_periodic_shift(m: &Morphism) -> Result<Decision> {
    is_periodic_shift_with(m, None)
}

pub fn is_periodic_shift_with(m: &Morphism, k_max: Option<usize>) -> Result<Decision> {
    let an = Analysis::new(m)?;
    if !an.classes.in_shift_language.iter().any(|&b| b) {
        return Ok(Decision::not_met("empty shift"));
    }
    let bound = point_period_bound(&an)?;
    for d in points::quasi_orbits_of(&an, k_max, bound)? {
        if points::quasi_period(m, &d, bound)?.is_none() {
            return Ok(Decision::no(Witness::NonPeriodicPoint { point: d }));
        }
    }
    Ok(Decision::yes())
}

/// `σ` is fully recognizable in `X(σ)`: every periodic point is made of non-growing letters.
pub fn is_fully_recognizable(m: &Morphism) -> Result<Decision> {
    let an = Analysis::new(m)?;
    Ok(match growing_orbits_of(&an)?.into_iter().next() {
        Some((w, k)) => Decision::no(Witness::PeriodicPoint { word: w, power: k }),
        None => Decision::yes(),
    })
}

/// Irreducibility of `X(σ)`, decided when `L(σ) = L(X(σ))`.
pub fn is_irreducible(m: &Morphism) -> Result<Decision> {
    let an = Analysis::new(m)?;
    if !an.classes.in_shift_language.iter().all(|&b| b) {
        return Ok(Decision::not_met("L(σ) differs from the language of the shift"));
    }
    let g = &an.graph;
    let candidates: Vec<Letter> = (0..an.card())
        .filter(|&a| g.kind_of(a) == SccKind::Expanding && g.scc_period[g.scc_of[a]] == Some(1))
        .collect();
    if candidates.iter().any(|&a| g.reach[a].iter().all(|&b| b)) {
        return Ok(Decision::yes());
    }
    Ok(Decision::no(Witness::Letters { letters: candidates }))
}

/// Minimality of `X(σ)`, decided when `L(σ) = L(X(σ))`.
pub fn is_minimal(m: &Morphism) -> Result<Decision> {
    let an = Analysis::new(m)?;
    if !an.classes.in_shift_language.iter().all(|&b| b) {
        return Ok(Decision::not_met("L(σ) differs from the language of the shift"));
    }
    let g = &an.graph;
    let growing = an.classes.growing_letters();
    for &a in &growing {
        if g.reach[a].iter().all(|&b| b) && !langtools::intersect_finite(m, a)? {
            return Ok(Decision::yes());
        }
    }
    Ok(Decision::no(Witness::Letters { letters: growing }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Morphism {
        Morphism::parse(s).unwrap()
    }

    fn w(m: &Morphism, s: &str) -> Word {
        m.alphabet().parse_word(s).unwrap()
    }

    #[test]
    fn decompositions() {
        assert!(is_elementary(&parse("a -> a\nb -> baab")).unwrap());
        assert!(is_elementary(&parse("a -> a")).unwrap());
        let m = parse("a -> ab\nb -> ac\nc -> ac");
        let d = elementary_decomposition(&m).unwrap().unwrap();
        assert_eq!(d.block_set, vec![w(&m, "ab"), w(&m, "ac")]);
        let comp = Morphism::compose(&d.alpha, &d.beta).unwrap();
        assert_eq!(comp.images(), m.images());
        assert!(d.alpha.card() < m.card());
    }

    #[test]
    fn bounds_cover_known_periods() {
        let m = parse("a -> ab\nb -> ac\nc -> ac");
        let pb = period_bound(&m).unwrap();
        assert!(pb.bound >= 4);
        let m = parse("a -> a\nb -> bab");
        let pb = period_bound(&m).unwrap();
        assert!(pb.bound >= 2);
        for e in &pb.eigen_data {
            let an = Analysis::new(&m).unwrap();
            let n = an.card();
            for b in 0..n {
                let mut s = Q::zero();
                let mut mk = vec![vec![0u64; n]; n];
                for i in 0..n {
                    mk[i][i] = 1;
                }
                for _ in 0..e.power {
                    mk = (0..n)
                        .map(|i| (0..n).map(|j| (0..n).map(|l| mk[i][l] * an.graph.matrix[l][j] as u64).sum()).collect())
                        .collect();
                }
                for c in 0..n {
                    s += &e.vector[c] * linalg::q(mk[c][b] as i64);
                }
                assert_eq!(s, &e.vector[b] * linalg::q(e.eigenvalue as i64));
            }
        }
        let fib = period_bound(&parse("a -> ab\nb -> a")).unwrap();
        assert_eq!(fib.bound, 3);
    }

    #[test]
    fn growing_orbits() {
        let m = parse("a -> ab\nb -> ac\nc -> ac");
        assert_eq!(growing_periodic_orbits(&m).unwrap(), vec![(w(&m, "abac"), 1)]);
        let m = parse("a -> a\nb -> bab");
        assert_eq!(growing_periodic_orbits(&m).unwrap(), vec![(w(&m, "ab"), 1)]);
        assert!(growing_periodic_orbits(&parse("a -> ab\nb -> a")).unwrap().is_empty());
    }

    #[test]
    fn decisions() {
        let fib = parse("a -> ab\nb -> a");
        assert!(is_aperiodic(&fib).unwrap().is_true());
        assert!(is_minimal(&fib).unwrap().is_true());
        assert!(is_irreducible(&fib).unwrap().is_true());
        assert!(is_fully_recognizable(&fib).unwrap().is_true());
        assert_eq!(is_periodic_shift(&fib).unwrap().verdict, Verdict::False);
        let tm = parse("a -> ab\nb -> ba");
        assert!(is_aperiodic(&tm).unwrap().is_true());
        let m = parse("a -> a\nb -> bab");
        assert!(is_periodic_shift(&m).unwrap().is_true());
        assert!(is_minimal(&m).unwrap().is_true());
        let fr = is_fully_recognizable(&m).unwrap();
        assert_eq!(fr.witness, Some(Witness::PeriodicPoint { word: w(&m, "ab"), power: 1 }));
        let m = parse("a -> abb\nb -> b");
        assert!(is_periodic_shift(&m).unwrap().is_true());
        assert!(is_fully_recognizable(&m).unwrap().is_true());
        let ap = is_aperiodic(&m).unwrap();
        assert_eq!(ap.witness, Some(Witness::PeriodicPoint { word: w(&m, "b"), power: 1 }));
        assert_eq!(is_irreducible(&parse("a -> ab\nb -> b")).unwrap().verdict, Verdict::HypothesisNotMet);
        assert!(is_minimal(&parse("0 -> 0010\n1 -> 1")).unwrap().is_true());
        assert_eq!(is_minimal(&parse("a -> ab\nb -> bc\nc -> cc")).unwrap().verdict, Verdict::HypothesisNotMet);
    }
}
