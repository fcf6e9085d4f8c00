//! Constructions that change the presentation of a shift: higher block
//! presentations, power stabilization, normalization of morphic sequences,
//! return words and primitive conjugates.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::decide;
use crate::error::{Error, Result};
use crate::graph::{Analysis, MorphismGraph};
use crate::langtools::factors_oracle;
use crate::morphism::{Morphism, MAX_IMAGE_LEN};
use crate::points::{self, FixedPointDescriptor, FixedShape};
use crate::word::{block_token, occurrences, Alphabet, Letter, Word};

/// The `k`-th higher block presentation `σ_k` of `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSystem {
    pub k: usize,
    /// `L_k(σ)` in increasing order; block `i` is the letter `i` of `σ_k`.
    pub blocks: Vec<Word>,
    pub sigma_k: Morphism,
    /// `π_k`: a block to its first letter.
    pub projection: Morphism,
}

impl BlockSystem {
    pub fn block_alphabet(&self) -> &Alphabet {
        self.sigma_k.alphabet()
    }

    /// `f_k`: the letter naming a block.
    pub fn encode(&self, u: &[Letter]) -> Option<Letter> {
        self.blocks.binary_search_by(|b| b.as_slice().cmp(u)).ok()
    }

    /// The word of sliding `k`-blocks of `w`, `None` if one is not in `L_k(σ)`.
    pub fn sliding(&self, w: &[Letter]) -> Option<Word> {
        if w.len() < self.k {
            return Some(Vec::new());
        }
        w.windows(self.k).map(|b| self.encode(b)).collect()
    }
}

/// `σ_k` on the blocks of length `k` of `L(σ)`.
pub fn higher_block(m: &Morphism, k: usize) -> Result<BlockSystem> {
    m.require_endo()?;
    if !m.is_non_erasing() {
        return Err(Error::Precondition("higher block presentations need a non-erasing morphism".into()));
    }
    if k == 0 {
        return Err(Error::Precondition("block length must be positive".into()));
    }
    let blocks: Vec<Word> = factors_oracle(m, k)?.into_iter().collect();
    if blocks.is_empty() {
        return Err(Error::Precondition(format!("no factor of length {k}")));
    }
    let tokens: Vec<String> = blocks.iter().map(|u| block_token(m.alphabet(), u)).collect();
    let alphabet = Alphabet::new(tokens)?;
    let index: BTreeMap<&Word, Letter> = blocks.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let mut images = Vec::new();
    for u in &blocks {
        let img = m.img(u);
        let first = m.image(u[0]).len();
        let mut out = Vec::new();
        for i in 0..first {
            let b = &img[i..i + k];
            out.push(*index.get(&b.to_vec()).ok_or_else(|| Error::Internal("block outside L_k".into()))?);
        }
        images.push(out);
    }
    let sigma_k = Morphism::endo(alphabet.clone(), images)?;
    let projection = Morphism::new(alphabet, m.alphabet().clone(), blocks.iter().map(|u| vec![u[0]]).collect())?;
    Ok(BlockSystem { k, blocks, sigma_k, projection })
}

/// `τ` over `A ∪ A×{1..p-1}` with `τ(a) = σ(a)`, `τ(a,1) = a`,
/// `τ(a,i) = (a,i-1)`, where `p` is the lcm of the component periods.
pub fn power_stabilize(m: &Morphism) -> Result<Morphism> {
    let g = MorphismGraph::build(m)?;
    let p = g.period_lcm().max(1);
    let n = m.card();
    let mut tokens: Vec<String> = m.alphabet().tokens().to_vec();
    for a in 0..n {
        for i in 1..p {
            tokens.push(format!("({},{})", m.alphabet().token(a), i));
        }
    }
    let alphabet = Alphabet::new(tokens)?;
    let extra = |a: Letter, i: usize| n + a * (p - 1) + (i - 1);
    let mut images: Vec<Word> = m.images().to_vec();
    for a in 0..n {
        for i in 1..p {
            images.push(if i == 1 { vec![a] } else { vec![extra(a, i - 1)] });
        }
    }
    Morphism::endo(alphabet, images)
}

/// `(ζ, θ)` with `θ∘γ = φ∘τ^m` and `ζ∘γ = γ∘τ^n`, `ζ` non-erasing and
/// `θ` letter-to-letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normalization {
    pub gamma: Morphism,
    pub zeta: Morphism,
    pub theta: Morphism,
    pub m: usize,
    pub n: usize,
    /// The trimmed seed `u`, ending with its first growing letter.
    pub source_seed: Word,
    /// `v = γ(u)`; `ζ` is right-prolongable on `v`.
    pub seed: Word,
}

/// Largest `m` and `n` tried by [`cobham_normalize`].
pub const DEFAULT_NORMALIZATION_CAP: usize = 64;

/// `|σ^n(a)|_b` is unbounded.
fn unbounded_count(g: &MorphismGraph, a: Letter, b: Letter) -> bool {
    (0..g.sccs.len()).any(|s| {
        let rep = g.sccs[s][0];
        g.is_nontrivial(s)
            && g.reach[a][rep]
            && g.reach[rep][b]
            && (g.scc_kind[s] == crate::graph::SccKind::Expanding
                || (0..g.sccs.len()).any(|t| {
                    t != s && g.is_nontrivial(t) && g.reach[rep][g.sccs[t][0]] && g.reach[g.sccs[t][0]][b]
                }))
    })
}

/// Splits `w` into `parts` non-empty factors whose lengths differ by at most
/// one, longer ones first.
fn balanced_split(w: &[Letter], parts: usize) -> Vec<Word> {
    let q = w.len() / parts;
    let r = w.len() % parts;
    let mut out = Vec::with_capacity(parts);
    let mut pos = 0;
    for i in 0..parts {
        let len = q + usize::from(i < r);
        out.push(w[pos..pos + len].to_vec());
        pos += len;
    }
    out
}

pub fn cobham_normalize(tau: &Morphism, phi: &Morphism, seed: &[Letter]) -> Result<Normalization> {
    cobham_normalize_capped(tau, phi, seed, DEFAULT_NORMALIZATION_CAP)
}

pub fn cobham_normalize_capped(tau: &Morphism, phi: &Morphism, seed: &[Letter], cap: usize) -> Result<Normalization> {
    tau.require_endo()?;
    if phi.source() != tau.alphabet() {
        return Err(Error::AlphabetMismatch("φ must be defined on the alphabet of τ".into()));
    }
    let an = Analysis::new(tau)?;
    let image = tau.img(seed);
    if seed.is_empty() || !image.starts_with(seed) || !an.classes.is_growing_word(seed) {
        return Err(Error::Precondition("τ is not right-prolongable on the seed".into()));
    }
    let i = seed.iter().position(|&a| an.growing(a)).unwrap();
    let u = seed[..=i].to_vec();
    let a = seed[i];
    let infinite = (0..tau.card()).any(|b| !phi.image(b).is_empty() && unbounded_count(&an.graph, a, b));
    if !infinite {
        return Err(Error::Precondition("φ(τ^ω(u)) is finite".into()));
    }
    // ell[j][b] = |φ∘τ^j(b)|
    let nb = tau.card();
    let mut ell: Vec<Vec<u64>> = vec![(0..nb).map(|b| phi.image(b).len() as u64).collect()];
    for _ in 0..2 * cap {
        let prev = ell.last().unwrap();
        let next = (0..nb).map(|b| tau.image(b).iter().fold(0u64, |s, &c| s.saturating_add(prev[c]))).collect();
        ell.push(next);
    }
    let mut found = None;
    'search: for m in 0..=cap {
        for n in 1..=cap {
            let (x, y) = (&ell[m], &ell[m + n]);
            if (0..nb).all(|b| x[b] <= y[b]) && x[a] < y[a] {
                found = Some((m, n));
                break 'search;
            }
        }
    }
    let (m, n) = found.ok_or_else(|| Error::cap("normalization exponents", cap))?;
    let tau_m = tau.power(m)?;
    let phi_m: Vec<Word> =
        (0..nb).map(|b| phi.apply_capped(&tau_m.apply_capped(&[b], MAX_IMAGE_LEN)?, MAX_IMAGE_LEN)).collect::<Result<_>>()?;
    let mut tokens = Vec::new();
    let mut theta_images = Vec::new();
    let mut first = vec![0; nb];
    for b in 0..nb {
        first[b] = tokens.len();
        for p in 0..phi_m[b].len() {
            tokens.push(format!("{}.{}", tau.alphabet().token(b), p + 1));
            theta_images.push(vec![phi_m[b][p]]);
        }
    }
    let c_alpha = Alphabet::new(tokens)?;
    let gamma_images: Vec<Word> = (0..nb).map(|b| (first[b]..first[b] + phi_m[b].len()).collect()).collect();
    let gamma = Morphism::new(tau.alphabet().clone(), c_alpha.clone(), gamma_images)?;
    let tau_n = tau.power(n)?;
    let mut zeta_images = Vec::new();
    for b in 0..nb {
        if phi_m[b].is_empty() {
            continue;
        }
        let w = gamma.apply_capped(&tau_n.apply_capped(&[b], MAX_IMAGE_LEN)?, MAX_IMAGE_LEN)?;
        zeta_images.extend(balanced_split(&w, phi_m[b].len()));
    }
    let zeta = Morphism::endo(c_alpha.clone(), zeta_images)?;
    let theta = Morphism::new(c_alpha, phi.target().clone(), theta_images)?;
    let v = gamma.img(&u);
    Ok(Normalization { gamma, zeta, theta, m, n, source_seed: u, seed: v })
}

/// Return words to `r·ℓ` in a two-sided fixed point `x` of `σ^power` with
/// `x[-|r|, |ℓ|) = rℓ`, and the induced morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReturnWordSystem {
    pub anchor: (Word, Word),
    pub power: usize,
    pub fixed_point: FixedPointDescriptor,
    /// `U`; return word `i` is coded by letter `i`.
    pub return_words: Vec<Word>,
    /// `φ: B → A`, a letter to its return word.
    pub coding: Morphism,
    /// `τ` with `φ∘τ = σ^power∘φ`.
    pub tau: Morphism,
}

const WINDOW_CAP: usize = 1 << 20;

fn require_minimal(m: &Morphism) -> Result<()> {
    if !decide::is_minimal(m)?.is_true() {
        return Err(Error::Precondition("the shift is not known to be minimal".into()));
    }
    Ok(())
}

/// Cut points `c` of `w` with `rℓ` occurring across `c` in `r·w·ℓ`.
fn cuts(w: &[Letter], r: &[Letter], l: &[Letter]) -> Vec<usize> {
    let mut x = r.to_vec();
    x.extend_from_slice(w);
    x.extend_from_slice(l);
    let mut rl = r.to_vec();
    rl.extend_from_slice(l);
    occurrences(&x, &rl)
}

pub fn return_words(m: &Morphism, r: &[Letter], l: &[Letter]) -> Result<ReturnWordSystem> {
    require_minimal(m)?;
    if r.is_empty() && l.is_empty() {
        return Err(Error::Precondition("the anchor r·ℓ must be non-empty".into()));
    }
    let fixed = points::enumerate_fixed_orbits(m, None)?;
    let mut chosen = None;
    for d in &fixed.descriptors {
        if points::expand(m, d, r.len(), l.len())? == crate::word::concat(r, l) {
            chosen = Some(d.clone());
            break;
        }
    }
    let d = chosen.ok_or_else(|| Error::Precondition("no fixed point has r·ℓ at its origin".into()))?;
    return_words_at(m, r, l, &d)
}

fn return_words_at(m: &Morphism, r: &[Letter], l: &[Letter], d: &FixedPointDescriptor) -> Result<ReturnWordSystem> {
    let rl = crate::word::concat(r, l);
    let mut len = 64;
    let (u0, um1) = loop {
        let x = points::expand(m, d, r.len(), len)?;
        let next = occurrences(&x, &rl).into_iter().find(|&i| i >= 1);
        let y = points::expand(m, d, len, l.len())?;
        let prev = occurrences(&y, &rl).into_iter().rfind(|&i| i + r.len() < len);
        if let (Some(i), Some(j)) = (next, prev) {
            break (x[r.len()..r.len() + i].to_vec(), y[j + r.len()..len].to_vec());
        }
        len *= 2;
        if len > WINDOW_CAP {
            return Err(Error::cap("return word window", WINDOW_CAP));
        }
    };
    let pk = m.power(d.power)?;
    let mut words: Vec<Word> = Vec::new();
    let mut index: BTreeMap<Word, Letter> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for u in [u0, um1] {
        if !index.contains_key(&u) {
            index.insert(u.clone(), words.len());
            words.push(u.clone());
            queue.push_back(u);
        }
    }
    let mut images: BTreeMap<Letter, Word> = BTreeMap::new();
    while let Some(u) = queue.pop_front() {
        let w = pk.apply_capped(&u, MAX_IMAGE_LEN)?;
        let cs = cuts(&w, r, l);
        if w.is_empty() || cs.first() != Some(&0) || cs.last() != Some(&w.len()) {
            return Err(Error::Internal("image of a return word is not a product of return words".into()));
        }
        let mut coded = Vec::new();
        for pair in cs.windows(2) {
            let piece = w[pair[0]..pair[1]].to_vec();
            let id = match index.get(&piece) {
                Some(&i) => i,
                None => {
                    index.insert(piece.clone(), words.len());
                    words.push(piece.clone());
                    queue.push_back(piece);
                    words.len() - 1
                }
            };
            coded.push(id);
        }
        images.insert(index[&u], coded);
    }
    let tokens: Vec<String> = (0..words.len())
        .map(|i| if words.len() <= 26 { ((b'A' + i as u8) as char).to_string() } else { format!("R{i}") })
        .collect();
    let b = Alphabet::new(tokens)?;
    let coding = Morphism::new(b.clone(), m.alphabet().clone(), words.clone())?;
    let tau = Morphism::endo(b, (0..words.len()).map(|i| images[&i].clone()).collect())?;
    Ok(ReturnWordSystem {
        anchor: (r.to_vec(), l.to_vec()),
        power: d.power,
        fixed_point: d.clone(),
        return_words: words,
        coding,
        tau,
    })
}

/// Some power of `M(σ)` is positive (checked up to the Wielandt exponent).
pub fn is_primitive_morphism(m: &Morphism) -> bool {
    let n = m.card();
    if n == 0 {
        return false;
    }
    let base: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| m.image(a).contains(&b)).collect()).collect();
    let mut cur = base.clone();
    for _ in 0..(n - 1) * (n - 1) + 1 {
        if cur.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        cur = (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| cur[i][k] && base[k][j])).collect()).collect();
    }
    false
}

/// A primitive `τ` and `φ` with `X(σ)` the shift closure of `φ(X(τ))`.
pub fn primitive_conjugate(m: &Morphism) -> Result<(Morphism, Morphism)> {
    require_minimal(m)?;
    if decide::is_periodic_shift(m)?.is_true() {
        let w = match decide::growing_periodic_orbits(m)?.into_iter().next() {
            Some((w, _)) => w,
            None => points::non_growing_orbits(m)?
                .into_iter()
                .find_map(|p| p.period().map(|_| p.orbit_canonical().left_period))
                .ok_or_else(|| Error::Internal("periodic shift without periodic point".into()))?,
        };
        let mut letters: Vec<Letter> = w.clone();
        letters.sort();
        letters.dedup();
        let b = Alphabet::new(letters.iter().map(|&a| m.alphabet().token(a).to_string()))?;
        let recoded: Word = w.iter().map(|a| letters.binary_search(a).unwrap()).collect();
        let tau = Morphism::endo(b.clone(), vec![recoded; letters.len()])?;
        let phi = Morphism::new(b, m.alphabet().clone(), letters.iter().map(|&a| vec![a]).collect())?;
        return Ok((tau, phi));
    }
    let fixed = points::enumerate_fixed_orbits(m, None)?;
    let d = fixed
        .descriptors
        .iter()
        .find(|d| matches!(d.shape, FixedShape::TwoSeed { .. }))
        .ok_or_else(|| Error::Internal("minimal aperiodic shift without a two-seed fixed point".into()))?;
    for (i, j) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (4, 4)] {
        let x = points::expand(m, d, i, j)?;
        let sys = return_words_at(m, &x[..i], &x[i..], d)?;
        if is_primitive_morphism(&sys.tau) {
            return Ok((sys.tau, sys.coding));
        }
    }
    Err(Error::Internal("no primitive return-word morphism found".into()))
}

/// `(ζ, θ)` with `ζ` primitive and `θ` letter-to-letter for a primitive `σ`
/// and a circular `φ`.
pub fn rauzy_refine(sigma: &Morphism, phi: &Morphism) -> Result<(Morphism, Morphism)> {
    sigma.require_endo()?;
    if !is_primitive_morphism(sigma) {
        return Err(Error::Precondition("σ must be primitive".into()));
    }
    if !phi.is_non_erasing() || phi.source() != sigma.alphabet() {
        return Err(Error::Precondition("φ must be non-erasing and defined on the alphabet of σ".into()));
    }
    let nb = sigma.card();
    if nb == 1 && sigma.image(0).len() == 1 {
        return Err(Error::Precondition("trivial morphism".into()));
    }
    let mut s = 1;
    let power = loop {
        let p = sigma.power(s)?;
        if (0..nb).all(|b| p.image(b).len() >= phi.image(b).len()) {
            break p;
        }
        s += 1;
        if s > DEFAULT_NORMALIZATION_CAP {
            return Err(Error::cap("Rauzy power", DEFAULT_NORMALIZATION_CAP));
        }
    };
    let mut tokens = Vec::new();
    let mut theta_images = Vec::new();
    let mut first = vec![0; nb];
    for b in 0..nb {
        first[b] = tokens.len();
        for (p, &c) in phi.image(b).iter().enumerate() {
            tokens.push(format!("{}.{}", sigma.alphabet().token(b), p + 1));
            theta_images.push(vec![c]);
        }
    }
    let c_alpha = Alphabet::new(tokens)?;
    let gamma = Morphism::new(
        sigma.alphabet().clone(),
        c_alpha.clone(),
        (0..nb).map(|b| (first[b]..first[b] + phi.image(b).len()).collect()).collect(),
    )?;
    let mut zeta_images = Vec::new();
    for b in 0..nb {
        let img = power.image(b);
        let k = phi.image(b).len();
        for p in 0..k {
            let part = if p + 1 < k { &img[p..p + 1] } else { &img[p..] };
            zeta_images.push(gamma.img(part));
        }
    }
    let zeta = Morphism::endo(c_alpha.clone(), zeta_images)?;
    let theta = Morphism::new(c_alpha, phi.target().clone(), theta_images)?;
    Ok((zeta, theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Morphism {
        Morphism::parse(s).unwrap()
    }

    #[test]
    fn fibonacci_blocks() {
        let m = parse("a -> ab\nb -> a");
        let bs = higher_block(&m, 2).unwrap();
        assert_eq!(bs.sigma_k.to_text(), "<aa> -> <ab> <ba>\n<ab> -> <ab> <ba>\n<ba> -> <aa>\n");
        let one = higher_block(&m, 1).unwrap();
        assert_eq!(one.sigma_k.images(), m.images());
        assert!(higher_block(&parse("a -> baab\nb ->"), 2).is_err());
    }

    #[test]
    fn stabilized_powers() {
        let fib = parse("a -> ab\nb -> a");
        assert_eq!(power_stabilize(&fib).unwrap(), fib);
        let swap = power_stabilize(&parse("a -> b\nb -> a")).unwrap();
        assert_eq!(swap.card(), 4);
        assert_eq!(swap.alphabet().tokens(), &["a", "b", "(a,1)", "(b,1)"]);
        assert_eq!(swap.image(2), &[0]);
    }

    #[test]
    fn normalization_example() {
        let tau = parse("a -> abc\nb -> ac\nc ->");
        let id = Morphism::identity(tau.alphabet().clone());
        let n = cobham_normalize(&tau, &id, &[0]).unwrap();
        assert_eq!((n.m, n.n), (1, 1));
        assert_eq!(n.zeta.to_text(), "a.1 -> a.1 a.2\na.2 -> a.3 b.1\na.3 -> b.2\nb.1 -> a.1 a.2\nb.2 -> a.3\n");
        assert_eq!(n.theta.to_text(), "a.1 -> a\na.2 -> b\na.3 -> c\nb.1 -> a\nb.2 -> c\n");
    }

    #[test]
    fn fibonacci_return_words() {
        let m = parse("a -> ab\nb -> a");
        let sys = return_words(&m, &[0], &[0]).unwrap();
        assert_eq!(sys.return_words.len(), 2);
        let lhs = Morphism::compose(&sys.coding, &sys.tau).unwrap();
        let rhs = Morphism::compose(&m.power(sys.power).unwrap(), &sys.coding).unwrap();
        assert_eq!(lhs.images(), rhs.images());
        let (tau, _) = primitive_conjugate(&m).unwrap();
        assert!(is_primitive_morphism(&tau));
        let (tau, phi) = primitive_conjugate(&parse("a -> a\nb -> bab")).unwrap();
        assert_eq!(tau.images(), &[vec![0, 1], vec![0, 1]]);
        assert_eq!(phi.images(), &[vec![0], vec![1]]);
    }
}
