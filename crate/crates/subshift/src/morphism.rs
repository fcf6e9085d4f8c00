//! Morphisms of free monoids: parsing, application, composition, powers and
//! derivation trees.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

/// Longest image a power or iterate may produce before it is reported as an error.
pub const MAX_IMAGE_LEN: usize = 10_000_000;

/// A morphism `σ: B* → A*` given by the images of the letters of `B`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Word>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism {{ {} }}", self.to_text().trim_end().replace('\n', ", "))
    }
}

impl Morphism {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} images for {} letters",
                images.len(),
                source.len()
            )));
        }
        for w in &images {
            if let Some(&b) = w.iter().find(|&&b| b >= target.len()) {
                return Err(Error::LetterOutOfRange(b));
            }
        }
        Ok(Morphism { source, target, images })
    }

    /// An endomorphism of `alphabet`.
    pub fn endo(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        Morphism::new(alphabet.clone(), alphabet, images)
    }

    /// Endomorphism over single-character letters from `(letter, image)` pairs.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        let text: String = pairs.iter().map(|(a, w)| format!("{a} -> {w}\n")).collect();
        Morphism::parse(&text)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let images = alphabet.letters().map(|a| vec![a]).collect();
        Morphism { source: alphabet.clone(), target: alphabet, images }
    }

    /// Parses an endomorphism in the rule-per-line format.
    pub fn parse(text: &str) -> Result<Self> {
        let rules = split_rules(text)?;
        let alphabet = Alphabet::new(rules.iter().map(|r| r.lhs.clone())).map_err(|e| match e {
            Error::DuplicateLetter { letter, .. } => {
                let line = rules.iter().filter(|r| r.lhs == letter).nth(1).map(|r| r.line).unwrap_or(0);
                Error::DuplicateLetter { line, letter }
            }
            other => other,
        })?;
        let mut images = Vec::with_capacity(rules.len());
        for r in &rules {
            let tokens = tokenize_image(&r.rhs, |t| alphabet.letter(t).is_some());
            let mut w = Vec::with_capacity(tokens.len());
            for t in tokens {
                match alphabet.letter(&t) {
                    Some(b) => w.push(b),
                    None => return Err(Error::UndeclaredLetter { line: r.line, letter: t }),
                }
            }
            images.push(w);
        }
        Morphism::endo(alphabet, images)
    }

    /// Parses a morphism between two alphabets: the source is read from the
    /// left-hand sides, the target from the images in order of first appearance.
    pub fn parse_general(text: &str) -> Result<Self> {
        let rules = split_rules(text)?;
        let source = Alphabet::new(rules.iter().map(|r| r.lhs.clone()))?;
        let mut target_tokens: Vec<String> = Vec::new();
        let mut images = Vec::with_capacity(rules.len());
        for r in &rules {
            let tokens = tokenize_image(&r.rhs, |_| false);
            let mut w = Vec::with_capacity(tokens.len());
            for t in tokens {
                let idx = match target_tokens.iter().position(|x| *x == t) {
                    Some(i) => i,
                    None => {
                        target_tokens.push(t);
                        target_tokens.len() - 1
                    }
                };
                w.push(idx);
            }
            images.push(w);
        }
        Morphism::new(source, Alphabet::new(target_tokens)?, images)
    }

    /// Serializes in the rule-per-line format; `parse` inverts it.
    pub fn to_text(&self) -> String {
        let multi = !self.source.is_single_char() || !self.target.is_single_char();
        let mut out = String::new();
        for a in self.source.letters() {
            let img = &self.images[a];
            let rhs = if multi {
                img.iter().map(|&b| self.target.token(b)).collect::<Vec<_>>().join(" ")
            } else {
                self.target.render(img)
            };
            if rhs.is_empty() {
                out.push_str(&format!("{} ->\n", self.source.token(a)));
            } else {
                out.push_str(&format!("{} -> {}\n", self.source.token(a), rhs));
            }
        }
        out
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    /// The alphabet of an endomorphism.
    pub fn alphabet(&self) -> &Alphabet {
        &self.source
    }

    pub fn image(&self, a: Letter) -> &[Letter] {
        &self.images[a]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn card(&self) -> usize {
        self.source.len()
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub(crate) fn require_endo(&self) -> Result<()> {
        if self.is_endomorphism() {
            Ok(())
        } else {
            Err(Error::NotEndomorphism)
        }
    }

    /// `|σ| = Σ_a |σ(a)|`.
    pub fn total_length(&self) -> usize {
        self.images.iter().map(Vec::len).sum()
    }

    /// `|σ| + Card(A)`.
    pub fn size(&self) -> usize {
        self.total_length() + self.card()
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_non_erasing(&self) -> bool {
        self.images.iter().all(|w| !w.is_empty())
    }

    /// Renders a word over the target alphabet.
    pub fn render(&self, w: &[Letter]) -> String {
        self.target.render(w)
    }

    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        self.apply_capped(w, MAX_IMAGE_LEN)
    }

    pub fn apply_capped(&self, w: &[Letter], cap: usize) -> Result<Word> {
        let mut len = 0usize;
        for &a in w {
            let img = self.images.get(a).ok_or(Error::LetterOutOfRange(a))?;
            len += img.len();
            if len > cap {
                return Err(Error::cap("image length", cap));
            }
        }
        let mut out = Vec::with_capacity(len);
        for &a in w {
            out.extend_from_slice(&self.images[a]);
        }
        Ok(out)
    }

    /// Image of a word known to be over the source alphabet.
    pub(crate) fn img(&self, w: &[Letter]) -> Word {
        let mut out = Vec::new();
        for &a in w {
            out.extend_from_slice(&self.images[a]);
        }
        out
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism> {
        if inner.target != outer.source {
            return Err(Error::AlphabetMismatch("inner target differs from outer source".into()));
        }
        let images = inner
            .images
            .iter()
            .map(|w| outer.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(inner.source.clone(), outer.target.clone(), images)
    }

    /// `σ^n` by binary exponentiation.
    pub fn power(&self, n: usize) -> Result<Morphism> {
        self.require_endo()?;
        let mut result = Morphism::identity(self.source.clone());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = Morphism::compose(&base, &result)?;
            }
            e >>= 1;
            if e > 0 {
                base = Morphism::compose(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// `σ^n(w)` with a length cap on every intermediate word.
    pub fn iterate(&self, w: &[Letter], n: usize, cap: usize) -> Result<Word> {
        self.require_endo()?;
        let mut cur = w.to_vec();
        for _ in 0..n {
            cur = self.apply_capped(&cur, cap)?;
        }
        Ok(cur)
    }

    /// Table `t[j][a] = |σ^j(a)|` for `j ≤ n`, saturating.
    pub fn length_table(&self, n: usize) -> Vec<Vec<u64>> {
        let mut t = vec![vec![1u64; self.card()]];
        for j in 1..=n {
            let prev = &t[j - 1];
            let row = self
                .images
                .iter()
                .map(|w| w.iter().fold(0u64, |s, &b| s.saturating_add(prev[b])))
                .collect();
            t.push(row);
        }
        t
    }

    /// First `len` letters of `σ^k(w)` (all of it if shorter), without
    /// expanding the rest of the word.
    pub fn prefix_of_power(&self, w: &[Letter], k: usize, len: usize) -> Word {
        let table = self.length_table(k);
        let mut out = Vec::with_capacity(len);
        for &a in w {
            if out.len() >= len {
                break;
            }
            self.push_prefix(a, k, len, &table, &mut out);
        }
        out
    }

    fn push_prefix(&self, a: Letter, k: usize, len: usize, table: &[Vec<u64>], out: &mut Word) {
        if out.len() >= len || table[k][a] == 0 {
            return;
        }
        if k == 0 {
            out.push(a);
            return;
        }
        if (out.len() as u64).saturating_add(table[k][a]) <= len as u64 && table[k][a] <= 4096 {
            let mut cur = vec![a];
            for _ in 0..k {
                cur = self.img(&cur);
            }
            out.extend_from_slice(&cur);
            return;
        }
        for &b in &self.images[a] {
            if out.len() >= len {
                return;
            }
            self.push_prefix(b, k - 1, len, table, out);
        }
    }

    /// Last `len` letters of `σ^k(w)` (all of it if shorter).
    pub fn suffix_of_power(&self, w: &[Letter], k: usize, len: usize) -> Word {
        let rev = self.reversed();
        let rw: Word = w.iter().rev().copied().collect();
        let mut s = rev.prefix_of_power(&rw, k, len);
        s.reverse();
        s
    }

    /// The morphism `a ↦ reverse(σ(a))`.
    pub fn reversed(&self) -> Morphism {
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.iter().map(|w| w.iter().rev().copied().collect()).collect(),
        }
    }

    /// The derivation tree `T_σ(a, n)`.
    pub fn derivation_tree(&self, a: Letter, n: usize) -> Result<DerivationTree> {
        self.require_endo()?;
        if a >= self.card() {
            return Err(Error::LetterOutOfRange(a));
        }
        Ok(self.tree(a, n))
    }

    fn tree(&self, a: Letter, n: usize) -> DerivationTree {
        let children = if n == 0 {
            Vec::new()
        } else {
            self.images[a].iter().map(|&b| self.tree(b, n - 1)).collect()
        };
        DerivationTree { label: a, depth: n, children }
    }
}

/// A node of a derivation tree; `depth` counts the levels below the node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTree {
    pub label: Letter,
    pub depth: usize,
    pub children: Vec<DerivationTree>,
}

impl DerivationTree {
    /// Labels of the nodes at the bottom level, left to right.
    pub fn frontier(&self) -> Word {
        let mut out = Vec::new();
        self.collect_frontier(&mut out);
        out
    }

    fn collect_frontier(&self, out: &mut Word) {
        if self.depth == 0 {
            out.push(self.label);
        } else {
            for c in &self.children {
                c.collect_frontier(out);
            }
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::node_count).sum::<usize>()
    }
}

struct Rule {
    line: usize,
    lhs: String,
    rhs: String,
}

fn split_rules(text: &str) -> Result<Vec<Rule>> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (lhs, rhs) = content
            .split_once("->")
            .ok_or_else(|| Error::Syntax { line, message: "expected `<letter> -> <image>`".into() })?;
        let lhs = lhs.trim();
        if lhs.is_empty() || lhs.chars().any(char::is_whitespace) {
            return Err(Error::Syntax { line, message: format!("invalid letter `{lhs}`") });
        }
        if rhs.contains("->") {
            return Err(Error::Syntax { line, message: "more than one `->`".into() });
        }
        rules.push(Rule { line, lhs: lhs.to_string(), rhs: rhs.trim().to_string() });
    }
    if rules.is_empty() {
        return Err(Error::Syntax { line: 0, message: "no rules".into() });
    }
    Ok(rules)
}

fn tokenize_image(rhs: &str, is_token: impl Fn(&str) -> bool) -> Vec<String> {
    if rhs.is_empty() {
        Vec::new()
    } else if rhs.split_whitespace().count() > 1 || is_token(rhs) {
        rhs.split_whitespace().map(str::to_string).collect()
    } else {
        rhs.chars().map(|c| c.to_string()).collect()
    }
}
