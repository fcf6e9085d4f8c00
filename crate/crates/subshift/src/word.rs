//! Alphabets, words and the combinatorics of finite words.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter is an index into its alphabet.
pub type Letter = usize;

/// A finite word, stored as letter indices.
pub type Word = Vec<Letter>;

/// A finite ordered set of distinct letter tokens.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    tokens: Vec<String>,
    index: HashMap<String, Letter>,
}

impl From<Vec<String>> for Alphabet {
    fn from(tokens: Vec<String>) -> Self {
        let index = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Alphabet { tokens, index }
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.tokens
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.tokens).finish()
    }
}

impl Alphabet {
    /// Builds an alphabet, rejecting repeated or malformed tokens.
    pub fn new<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Result<Self> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() || t.chars().any(|c| c.is_whitespace() || c == '#') {
                return Err(Error::Syntax { line: 0, message: format!("invalid letter token `{t}`") });
            }
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::DuplicateLetter { line: 0, letter: t.clone() });
            }
        }
        Ok(Alphabet { tokens, index })
    }

    /// Single-character letters taken from a string, e.g. `"abc"`.
    pub fn from_chars(s: &str) -> Result<Self> {
        Alphabet::new(s.chars().map(|c| c.to_string()))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, a: Letter) -> &str {
        &self.tokens[a]
    }

    pub fn letter(&self, token: &str) -> Option<Letter> {
        self.index.get(token).copied()
    }

    pub fn letters(&self) -> std::ops::Range<Letter> {
        0..self.tokens.len()
    }

    /// True when every token is a single character.
    pub fn is_single_char(&self) -> bool {
        self.tokens.iter().all(|t| t.chars().count() == 1)
    }

    pub fn contains_word(&self, w: &[Letter]) -> bool {
        w.iter().all(|&a| a < self.len())
    }

    /// Renders a word: concatenated when all tokens are single characters,
    /// space-separated otherwise. The empty word renders as `""`.
    pub fn render(&self, w: &[Letter]) -> String {
        let sep = if self.is_single_char() { "" } else { " " };
        w.iter().map(|&a| self.tokens[a].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Parses a word written as in [`Alphabet::render`].
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Vec::new());
        }
        if s.split_whitespace().count() > 1 {
            return s
                .split_whitespace()
                .map(|t| self.letter(t).ok_or_else(|| Error::UnknownLetter(t.to_string())))
                .collect();
        }
        if let Some(a) = self.letter(s) {
            return Ok(vec![a]);
        }
        s.chars()
            .map(|c| {
                let t = c.to_string();
                self.letter(&t).ok_or(Error::UnknownLetter(t))
            })
            .collect()
    }
}

/// Token `<w>` naming a word as a letter of a new alphabet. Tokens of
/// multi-character alphabets are joined with `.`.
pub fn block_token(alphabet: &Alphabet, w: &[Letter]) -> String {
    let sep = if alphabet.is_single_char() { "" } else { "." };
    format!("<{}>", w.iter().map(|&a| alphabet.token(a)).collect::<Vec<_>>().join(sep))
}

/// Length of the shortest period of `w` (the border-based period).
pub fn smallest_period(w: &[Letter]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

/// The primitive root of a non-empty word; `ε` for `ε`.
pub fn primitive_root(w: &[Letter]) -> &[Letter] {
    let p = smallest_period(w);
    if p > 0 && w.len().is_multiple_of(p) {
        &w[..p]
    } else {
        w
    }
}

pub fn is_primitive(w: &[Letter]) -> bool {
    !w.is_empty() && primitive_root(w).len() == w.len()
}

/// Rotation `w[k..] w[..k]`.
pub fn rotate(w: &[Letter], k: usize) -> Word {
    if w.is_empty() {
        return Vec::new();
    }
    let k = k % w.len();
    let mut r = w[k..].to_vec();
    r.extend_from_slice(&w[..k]);
    r
}

/// Index of the lexicographically least rotation.
pub fn least_rotation_index(w: &[Letter]) -> usize {
    (0..w.len().max(1)).min_by(|&i, &j| rotate(w, i).cmp(&rotate(w, j))).unwrap_or(0)
}

pub fn least_conjugate(w: &[Letter]) -> Word {
    rotate(w, least_rotation_index(w))
}

/// Least conjugate of the primitive root: a canonical name for the orbit of `w^∞`.
pub fn periodic_orbit_key(w: &[Letter]) -> Word {
    least_conjugate(primitive_root(w))
}

/// `Some(n)` when `x = w^n` with `n ≥ 1`.
pub fn power_exponent(x: &[Letter], w: &[Letter]) -> Option<usize> {
    if w.is_empty() || x.is_empty() || !x.len().is_multiple_of(w.len()) {
        return None;
    }
    if x.chunks(w.len()).all(|c| c == w) {
        Some(x.len() / w.len())
    } else {
        None
    }
}

/// True when `x` is a power of some conjugate of `w`.
pub fn is_power_of_conjugate(x: &[Letter], w: &[Letter]) -> bool {
    if w.is_empty() || x.is_empty() {
        return false;
    }
    (0..w.len()).any(|k| power_exponent(x, &rotate(w, k)).is_some())
}

/// Start positions of occurrences of `u` in `w`.
pub fn occurrences(w: &[Letter], u: &[Letter]) -> Vec<usize> {
    if u.len() > w.len() {
        return Vec::new();
    }
    (0..=w.len() - u.len()).filter(|&i| &w[i..i + u.len()] == u).collect()
}

pub fn is_factor(w: &[Letter], u: &[Letter]) -> bool {
    u.is_empty() || w.windows(u.len()).any(|x| x == u)
}

/// `w^n`.
pub fn repeat(w: &[Letter], n: usize) -> Word {
    let mut r = Vec::with_capacity(w.len() * n);
    for _ in 0..n {
        r.extend_from_slice(w);
    }
    r
}

/// Concatenation of two words.
pub fn concat(a: &[Letter], b: &[Letter]) -> Word {
    let mut r = Vec::with_capacity(a.len() + b.len());
    r.extend_from_slice(a);
    r.extend_from_slice(b);
    r
}

/// True when `w` is a Lyndon word (primitive and strictly least among its rotations).
pub fn is_lyndon(w: &[Letter]) -> bool {
    is_primitive(w) && (1..w.len()).all(|k| rotate(w, k).as_slice() > w)
}
