//! Finite descriptions of infinite points: eventually periodic points, fixed
//! points of powers of `σ` given by seeds, quasi-fixed points, and the orbits
//! of points made of non-growing letters.
//!
//! Fixed points are enumerated exactly. With `τ = σ^K` for a suitable `K`,
//! every fixed point of every power of `σ` is a fixed point of `τ`, and the
//! non-growing stretches between consecutive growing letters of the words
//! `σ^n(c)` evolve under `τ` as `T ↦ U·T·V` for words `U`, `V` depending only
//! on the surrounding growing letters. The fixed points are read off from the
//! finitely many such stretch families.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{lcm, Analysis, SccKind};
use crate::morphism::Morphism;
use crate::word::{
    least_conjugate, periodic_orbit_key, power_exponent, primitive_root, rotate, smallest_period, Letter, Word,
};

/// `^ω u · t` with `u` primitive and least among its conjugates and `t` as
/// short as possible.
pub fn canon_left(u: &[Letter], t: &[Letter]) -> (Word, Word) {
    let mut r = primitive_root(u).to_vec();
    let mut start = 0;
    while start < t.len() && t[start] == r[0] {
        r = rotate(&r, 1);
        start += 1;
    }
    let u0 = least_conjugate(&r);
    let j = (0..u0.len()).find(|&j| rotate(&u0, j) == r).unwrap_or(0);
    let mut tail = u0[..j].to_vec();
    tail.extend_from_slice(&t[start..]);
    (u0, tail)
}

/// `h · v^ω` with `v` primitive and least among its conjugates and `h` as
/// short as possible.
pub fn canon_right(h: &[Letter], v: &[Letter]) -> (Word, Word) {
    let mut r = primitive_root(v).to_vec();
    let mut end = h.len();
    while end > 0 && h[end - 1] == r[r.len() - 1] {
        r = rotate(&r, r.len() - 1);
        end -= 1;
    }
    let v0 = least_conjugate(&r);
    let j = (0..v0.len()).find(|&j| rotate(&v0, j) == r).unwrap_or(0);
    let mut head = h[..end].to_vec();
    if j > 0 {
        head.extend_from_slice(&v0[j..]);
    }
    (head, v0)
}

/// The two-sided point `^ω u · w v^ω`, where the origin sits at index
/// `origin` of the center `w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EpPoint {
    pub left_period: Word,
    pub center: Word,
    pub right_period: Word,
    pub origin: usize,
}

impl EpPoint {
    pub fn new(left_period: Word, center: Word, right_period: Word, origin: usize) -> Result<Self> {
        if left_period.is_empty() || right_period.is_empty() || origin > center.len() {
            return Err(Error::Precondition("periods must be non-empty and the origin inside the center".into()));
        }
        Ok(EpPoint { left_period, center, right_period, origin })
    }

    /// `w^∞` with the origin at the start of the least conjugate of the primitive root of `w`.
    pub fn periodic(w: &[Letter]) -> Self {
        let key = periodic_orbit_key(w);
        EpPoint { left_period: key.clone(), center: Vec::new(), right_period: key, origin: 0 }
    }

    /// The same point (origin included) in canonical form.
    pub fn normalized(&self) -> Self {
        let (u0, tl) = canon_left(&self.left_period, &self.center[..self.origin]);
        let (hr, v0) = canon_right(&self.center[self.origin..], &self.right_period);
        let origin = tl.len();
        let mut center = tl;
        center.extend(hr);
        EpPoint { left_period: u0, center, right_period: v0, origin }
    }

    /// A canonical representative of the orbit: periodic points become
    /// [`EpPoint::periodic`], others put the origin where the right periodic
    /// tail starts.
    pub fn orbit_canonical(&self) -> Self {
        let n = self.normalized();
        let (u, c, v) = (&n.left_period, &n.center, &n.right_period);
        let a = (u.len() + v.len()) / u.len() + 2;
        let mut s = crate::word::repeat(u, a);
        s.extend_from_slice(c);
        s.extend_from_slice(v);
        s.extend_from_slice(v);
        let base = a * u.len();
        let p = v.len();
        let mut j = base + c.len();
        while j > 0 && s[j - 1] == s[j - 1 + p] {
            j -= 1;
        }
        if j + u.len() + v.len() <= base {
            return EpPoint::periodic(v);
        }
        let k = (j / u.len()).min(a);
        EpPoint {
            left_period: u.clone(),
            center: s[k * u.len()..j].to_vec(),
            right_period: s[j..j + p].to_vec(),
            origin: j - k * u.len(),
        }
        .normalized()
    }

    pub fn is_periodic(&self) -> bool {
        let c = self.orbit_canonical();
        c.center.is_empty() && c.left_period == c.right_period
    }

    /// Least period of the point, when periodic.
    pub fn period(&self) -> Option<usize> {
        let c = self.orbit_canonical();
        (c.center.is_empty() && c.left_period == c.right_period).then_some(c.left_period.len())
    }

    /// `x[-left, right)`.
    pub fn window(&self, left: usize, right: usize) -> Word {
        let mut l = Vec::new();
        let copies = left / self.left_period.len() + 1;
        for _ in 0..copies {
            l.extend_from_slice(&self.left_period);
        }
        l.extend_from_slice(&self.center[..self.origin]);
        let mut out = l[l.len() - left..].to_vec();
        let mut r = self.center[self.origin..].to_vec();
        while r.len() < right {
            r.extend_from_slice(&self.right_period);
        }
        out.extend_from_slice(&r[..right]);
        out
    }

    /// `σ^k` of the point, origin included.
    pub fn apply(&self, m: &Morphism, k: usize) -> Result<EpPoint> {
        let pk = m.power(k)?;
        let u = pk.img(&self.left_period);
        let v = pk.img(&self.right_period);
        if u.is_empty() || v.is_empty() {
            return Err(Error::Precondition("periodic parts are erased".into()));
        }
        let origin = pk.img(&self.center[..self.origin]).len();
        Ok(EpPoint { left_period: u, center: pk.img(&self.center), right_period: v, origin })
    }
}

/// The four shapes of two-sided fixed points of `σ^power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum FixedShape {
    /// `^ω u · w v^ω`.
    EventuallyPeriodic { point: EpPoint },
    /// `^ω u t · σ^ω(seed)`.
    LeftPeriodicRightSeed { left_period: Word, left_tail: Word, right_seed: Word },
    /// `σ^ω̃(seed) · h v^ω`.
    LeftSeedRightPeriodic { left_seed: Word, right_head: Word, right_period: Word },
    /// `σ^ω̃(left) · σ^ω(right)`.
    TwoSeed { left: Word, right: Word },
}

/// A two-sided fixed point of `σ^power`, in canonical form. Seeds are
/// prolongable for `σ^power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FixedPointDescriptor {
    pub power: usize,
    #[serde(flatten)]
    pub shape: FixedShape,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum QuasiShape {
    /// A shift of a fixed point.
    Fixed { fixed: FixedPointDescriptor },
    /// `··· σ^{2k}(u) σ^k(u) u · a v σ^k(v) ···` where `σ^k(a) = u a v`.
    Bilateral { letter: Letter, left: Word, right: Word },
    /// `(uv)^∞` with `σ^k(uv) = vu`.
    Rotating { left: Word, right: Word },
}

/// A point `x` of the shift with `σ^power(x)` in the orbit of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuasiFixedDescriptor {
    pub power: usize,
    #[serde(flatten)]
    pub shape: QuasiShape,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum LeftEnd {
    Growing(Letter),
    Periodic(Word),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum RightEnd {
    Growing(Letter),
    Periodic(Word),
}

/// A point given by its ends and the non-growing middle between them. A
/// growing end `d` stands for the part of a fixed point up to and including `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Core {
    left: LeftEnd,
    middle: Word,
    origin: usize,
    right: RightEnd,
}

/// Exact normal form of a [`Core`]: equal forms denote equal points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum NormCore {
    Gg(Letter, Word, usize, Letter),
    /// Left period, tail before the growing letter, distance from origin to it, letter.
    Pg(Word, Word, usize, Letter),
    /// Letter, distance from it to the origin, head after it, right period.
    Gp(Letter, usize, Word, Word),
    Pp(EpPoint),
}

impl Core {
    fn normalize(&self) -> NormCore {
        match (&self.left, &self.right) {
            (LeftEnd::Growing(d), RightEnd::Growing(e)) => NormCore::Gg(*d, self.middle.clone(), self.origin, *e),
            (LeftEnd::Periodic(u), RightEnd::Growing(e)) => {
                let (u0, t) = canon_left(u, &self.middle);
                NormCore::Pg(u0, t, self.middle.len() - self.origin, *e)
            }
            (LeftEnd::Growing(d), RightEnd::Periodic(v)) => {
                let (h, v0) = canon_right(&self.middle, v);
                NormCore::Gp(*d, self.origin, h, v0)
            }
            (LeftEnd::Periodic(u), RightEnd::Periodic(v)) => NormCore::Pp(
                EpPoint { left_period: u.clone(), center: self.middle.clone(), right_period: v.clone(), origin: self.origin }
                    .normalized(),
            ),
        }
    }

    fn to_shape(&self) -> FixedShape {
        let (lm, rm) = self.middle.split_at(self.origin);
        match (&self.left, &self.right) {
            (LeftEnd::Growing(d), RightEnd::Growing(e)) => {
                let mut left = vec![*d];
                left.extend_from_slice(lm);
                let mut right = rm.to_vec();
                right.push(*e);
                FixedShape::TwoSeed { left, right }
            }
            (LeftEnd::Periodic(u), RightEnd::Growing(e)) => {
                let (left_period, left_tail) = canon_left(u, lm);
                let mut right_seed = rm.to_vec();
                right_seed.push(*e);
                FixedShape::LeftPeriodicRightSeed { left_period, left_tail, right_seed }
            }
            (LeftEnd::Growing(d), RightEnd::Periodic(v)) => {
                let mut left_seed = vec![*d];
                left_seed.extend_from_slice(lm);
                let (right_head, right_period) = canon_right(rm, v);
                FixedShape::LeftSeedRightPeriodic { left_seed, right_head, right_period }
            }
            (LeftEnd::Periodic(u), RightEnd::Periodic(v)) => FixedShape::EventuallyPeriodic {
                point: EpPoint { left_period: u.clone(), center: self.middle.clone(), right_period: v.clone(), origin: self.origin }
                    .normalized(),
            },
        }
    }

    fn from_shape(shape: &FixedShape, growing: &[bool]) -> Result<Core> {
        let last_growing = |w: &[Letter]| w.iter().rposition(|&a| growing[a]);
        let first_growing = |w: &[Letter]| w.iter().position(|&a| growing[a]);
        let bad = || Error::Precondition("seed without a growing letter".into());
        Ok(match shape {
            FixedShape::TwoSeed { left, right } => {
                let i = last_growing(left).ok_or_else(bad)?;
                let j = first_growing(right).ok_or_else(bad)?;
                let mut middle = left[i + 1..].to_vec();
                middle.extend_from_slice(&right[..j]);
                Core {
                    left: LeftEnd::Growing(left[i]),
                    middle,
                    origin: left.len() - i - 1,
                    right: RightEnd::Growing(right[j]),
                }
            }
            FixedShape::LeftPeriodicRightSeed { left_period, left_tail, right_seed } => {
                let j = first_growing(right_seed).ok_or_else(bad)?;
                let mut middle = left_tail.clone();
                middle.extend_from_slice(&right_seed[..j]);
                Core {
                    left: LeftEnd::Periodic(left_period.clone()),
                    middle,
                    origin: left_tail.len(),
                    right: RightEnd::Growing(right_seed[j]),
                }
            }
            FixedShape::LeftSeedRightPeriodic { left_seed, right_head, right_period } => {
                let i = last_growing(left_seed).ok_or_else(bad)?;
                let mut middle = left_seed[i + 1..].to_vec();
                middle.extend_from_slice(right_head);
                Core {
                    left: LeftEnd::Growing(left_seed[i]),
                    middle,
                    origin: left_seed.len() - i - 1,
                    right: RightEnd::Periodic(right_period.clone()),
                }
            }
            FixedShape::EventuallyPeriodic { point } => Core {
                left: LeftEnd::Periodic(point.left_period.clone()),
                middle: point.center.clone(),
                origin: point.origin,
                right: RightEnd::Periodic(point.right_period.clone()),
            },
        })
    }
}

/// A stretch family: the normalized stretch evolves as `T ↦ U·T·V` under `τ`
/// between the `τ`-stable ends `d` and `e` (`None` for a word boundary).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Family {
    d: Option<Letter>,
    u: Word,
    t: Word,
    v: Word,
    e: Option<Letter>,
}

type Triple = (Option<Letter>, Word, Option<Letter>);

const EXPANSION_ROUNDS: usize = 100_000;

/// Contexts of growing letters under `σ` and under `τ = σ^K`.
pub(crate) struct Engine<'a> {
    pub an: &'a Analysis,
    /// The exponent `K` of `τ`.
    pub k: usize,
    lam: Vec<Letter>,
    r: Vec<Word>,
    fst: Vec<Letter>,
    l: Vec<Word>,
    lam_t: Vec<Letter>,
    r_t: Vec<Word>,
    fst_t: Vec<Letter>,
    l_t: Vec<Word>,
    u_t: Vec<Word>,
    v_t: Vec<Word>,
    tau_ng: Vec<Word>,
}

fn cycle_lengths(f: &[Letter], domain: &[Letter]) -> Vec<usize> {
    let mut out = Vec::new();
    for &a in domain {
        let mut x = a;
        for _ in 0..f.len() {
            x = f[x];
        }
        let mut len = 1;
        let mut y = f[x];
        while y != x {
            y = f[y];
            len += 1;
        }
        out.push(len);
    }
    out
}

impl<'a> Engine<'a> {
    pub fn new(an: &'a Analysis) -> Result<Self> {
        let m = &an.morphism;
        let n = m.card();
        let growing = &an.classes.growing;
        let mut lam = vec![usize::MAX; n];
        let mut fst = vec![usize::MAX; n];
        let mut r = vec![Vec::new(); n];
        let mut l = vec![Vec::new(); n];
        let glist = an.classes.growing_letters();
        for &a in &glist {
            let img = m.image(a);
            let i = img.iter().rposition(|&b| growing[b]).ok_or_else(|| Error::Internal("growing image".into()))?;
            let j = img.iter().position(|&b| growing[b]).unwrap();
            lam[a] = img[i];
            r[a] = img[i + 1..].to_vec();
            fst[a] = img[j];
            l[a] = img[..j].to_vec();
        }
        let mut period = an.stab.p;
        for c in cycle_lengths(&lam, &glist).into_iter().chain(cycle_lengths(&fst, &glist)) {
            period = lcm(period, c);
        }
        let need = an.stab.i.max(n).max(1);
        let k = need.div_ceil(period) * period;
        let mut eng = Engine {
            an,
            k,
            lam,
            r,
            fst,
            l,
            lam_t: vec![usize::MAX; n],
            r_t: vec![Vec::new(); n],
            fst_t: vec![usize::MAX; n],
            l_t: vec![Vec::new(); n],
            u_t: vec![Vec::new(); n],
            v_t: vec![Vec::new(); n],
            tau_ng: vec![Vec::new(); n],
        };
        for a in an.classes.non_growing_letters() {
            let mut w = vec![a];
            for _ in 0..k {
                w = m.img(&w);
            }
            eng.tau_ng[a] = w;
        }
        for &a in &glist {
            let (d, rr) = eng.ctx_right(a, k);
            let (e, ll) = eng.ctx_left(a, k);
            eng.lam_t[a] = d;
            eng.fst_t[a] = e;
            eng.r_t[a] = rr;
            eng.l_t[a] = ll;
        }
        for &a in &glist {
            eng.u_t[a] = eng.tau(&eng.r_t[a]);
            eng.v_t[a] = eng.tau(&eng.l_t[a]);
        }
        Ok(eng)
    }

    fn m(&self) -> &Morphism {
        &self.an.morphism
    }

    fn growing(&self, a: Letter) -> bool {
        self.an.classes.growing[a]
    }

    /// `τ` on a non-growing word.
    pub fn tau(&self, w: &[Letter]) -> Word {
        w.iter().flat_map(|&a| self.tau_ng[a].iter().copied()).collect()
    }

    /// `σ^n` on a non-growing word.
    fn sigma_ng(&self, w: &[Letter], n: usize) -> Word {
        let mut cur = w.to_vec();
        for _ in 0..n {
            cur = self.m().img(&cur);
        }
        cur
    }

    /// Last growing letter of `σ^n(d)` and the non-growing suffix after it.
    fn ctx_right(&self, d: Letter, n: usize) -> (Letter, Word) {
        let mut cur = d;
        let mut ctx: Word = Vec::new();
        for _ in 0..n {
            let mut next = self.r[cur].clone();
            next.extend(self.m().img(&ctx));
            ctx = next;
            cur = self.lam[cur];
        }
        (cur, ctx)
    }

    /// First growing letter of `σ^n(e)` and the non-growing prefix before it.
    fn ctx_left(&self, e: Letter, n: usize) -> (Letter, Word) {
        let mut cur = e;
        let mut ctx: Word = Vec::new();
        for _ in 0..n {
            let mut next = self.m().img(&ctx);
            next.extend_from_slice(&self.l[cur]);
            ctx = next;
            cur = self.fst[cur];
        }
        (cur, ctx)
    }

    /// Stretch triples of the words `σ^n(c)` for `n ≤ K`.
    fn births(&self) -> BTreeSet<Triple> {
        let m = self.m();
        let mut level: BTreeSet<Triple> = BTreeSet::new();
        for c in 0..m.card() {
            if self.growing(c) {
                level.insert((None, Vec::new(), Some(c)));
                level.insert((Some(c), Vec::new(), None));
            }
        }
        let mut all = level.clone();
        for _ in 0..self.k {
            let mut next = BTreeSet::new();
            let mut ends = BTreeSet::new();
            for (d, s, e) in &level {
                let mut gap = d.map(|x| self.r[x].clone()).unwrap_or_default();
                gap.extend(m.img(s));
                if let Some(x) = e {
                    gap.extend_from_slice(&self.l[*x]);
                }
                next.insert((d.map(|x| self.lam[x]), gap, e.map(|x| self.fst[x])));
                ends.extend(d.iter().chain(e.iter()).copied());
            }
            for g in ends {
                let img = m.image(g);
                let pos: Vec<usize> = (0..img.len()).filter(|&i| self.growing(img[i])).collect();
                for w in pos.windows(2) {
                    next.insert((Some(img[w[0]]), img[w[0] + 1..w[1]].to_vec(), Some(img[w[1]])));
                }
            }
            all.extend(next.iter().cloned());
            level = next;
        }
        all
    }

    fn families(&self) -> BTreeSet<Family> {
        let mut out = BTreeSet::new();
        for (d, s, e) in self.births() {
            let d1 = d.map(|x| self.lam_t[x]);
            let e1 = e.map(|x| self.fst_t[x]);
            let mut t = d.map(|x| self.u_t[x].clone()).unwrap_or_default();
            t.extend(self.tau(&s));
            if let Some(x) = e {
                t.extend_from_slice(&self.v_t[x]);
            }
            let u = d1.map(|x| self.u_t[x].clone()).unwrap_or_default();
            let v = e1.map(|x| self.v_t[x].clone()).unwrap_or_default();
            out.insert(Family { d: d1, u, t, v, e: e1 });
        }
        out
    }

    /// Cores of all `τ`-fixed points, and the non-growing orbits.
    fn fixed_cores(&self) -> (Vec<Core>, Vec<Core>) {
        let mut fixed = BTreeSet::new();
        let mut nongrowing = BTreeSet::new();
        for f in self.families() {
            let periodic = |w: &Word| Core {
                left: LeftEnd::Periodic(w.clone()),
                middle: Vec::new(),
                origin: 0,
                right: RightEnd::Periodic(w.clone()),
            };
            if !f.u.is_empty() {
                nongrowing.insert(periodic(&f.u));
            }
            if !f.v.is_empty() {
                nongrowing.insert(periodic(&f.v));
            }
            let (Some(d), Some(e)) = (f.d, f.e) else { continue };
            let core = match (f.u.is_empty(), f.v.is_empty()) {
                (true, true) => {
                    let mut middle = self.r_t[d].clone();
                    middle.extend_from_slice(&f.t);
                    let origin = middle.len();
                    middle.extend_from_slice(&self.l_t[e]);
                    Core { left: LeftEnd::Growing(d), middle, origin, right: RightEnd::Growing(e) }
                }
                (false, true) => {
                    let mut middle = f.t.clone();
                    middle.extend_from_slice(&self.l_t[e]);
                    Core { left: LeftEnd::Periodic(f.u.clone()), middle, origin: f.t.len(), right: RightEnd::Growing(e) }
                }
                (true, false) => {
                    let mut middle = self.r_t[d].clone();
                    let origin = middle.len();
                    middle.extend_from_slice(&f.t);
                    Core { left: LeftEnd::Growing(d), middle, origin, right: RightEnd::Periodic(f.v.clone()) }
                }
                (false, false) => {
                    let c = Core {
                        left: LeftEnd::Periodic(f.u.clone()),
                        middle: f.t.clone(),
                        origin: 0,
                        right: RightEnd::Periodic(f.v.clone()),
                    };
                    nongrowing.insert(c.clone());
                    c
                }
            };
            fixed.insert(core);
        }
        fixed.extend(nongrowing.iter().cloned());
        (fixed.into_iter().collect(), nongrowing.into_iter().collect())
    }

    /// `σ^k` of a core, origin tracked exactly.
    fn apply_core(&self, c: &Core, k: usize) -> Core {
        let (left, rk) = match &c.left {
            LeftEnd::Growing(d) => {
                let (d2, rk) = self.ctx_right(*d, k);
                (LeftEnd::Growing(d2), rk)
            }
            LeftEnd::Periodic(u) => (LeftEnd::Periodic(self.sigma_ng(u, k)), Vec::new()),
        };
        let (right, lk) = match &c.right {
            RightEnd::Growing(e) => {
                let (e2, lk) = self.ctx_left(*e, k);
                (RightEnd::Growing(e2), lk)
            }
            RightEnd::Periodic(v) => (RightEnd::Periodic(self.sigma_ng(v, k)), Vec::new()),
        };
        let origin = rk.len() + self.sigma_ng(&c.middle[..c.origin], k).len();
        let mut middle = rk;
        middle.extend(self.sigma_ng(&c.middle, k));
        middle.extend(lk);
        Core { left, middle, origin, right }
    }

    /// Moves the origin of a `τ`-fixed core to the canonical place of its orbit.
    fn canonical(&self, c: &Core) -> Result<Core> {
        let mut c = c.clone();
        match (&c.left, &c.right) {
            (LeftEnd::Growing(_), RightEnd::Growing(e)) => {
                let l = &self.l_t[*e];
                if !c.middle.ends_with(l) {
                    return Err(Error::Internal("fixed point without its right context".into()));
                }
                c.origin = c.middle.len() - l.len();
            }
            (LeftEnd::Periodic(u), RightEnd::Growing(e)) => {
                let need = self.l_t[*e].len();
                while c.middle.len() < need {
                    let mut m2 = u.clone();
                    m2.extend_from_slice(&c.middle);
                    c.middle = m2;
                }
                c.origin = c.middle.len() - need;
            }
            (LeftEnd::Growing(d), RightEnd::Periodic(v)) => {
                let need = self.r_t[*d].len();
                while c.middle.len() < need {
                    c.middle.extend_from_slice(v);
                }
                c.origin = need;
            }
            (LeftEnd::Periodic(_), RightEnd::Periodic(_)) => {}
        }
        Ok(c)
    }

    /// Descriptor of a fixed core; eventually periodic points are moved to
    /// their orbit-canonical origin when that keeps them fixed.
    fn shape_of(&self, c: &Core, power: usize) -> FixedShape {
        if let (LeftEnd::Periodic(u), RightEnd::Periodic(v)) = (&c.left, &c.right) {
            let p = EpPoint { left_period: u.clone(), center: c.middle.clone(), right_period: v.clone(), origin: c.origin }
                .orbit_canonical();
            let moved = Core {
                left: LeftEnd::Periodic(p.left_period.clone()),
                middle: p.center.clone(),
                origin: p.origin,
                right: RightEnd::Periodic(p.right_period.clone()),
            };
            if self.apply_core(&moved, power).normalize() == moved.normalize() {
                return FixedShape::EventuallyPeriodic { point: p };
            }
        }
        c.to_shape()
    }

    /// Least divisor `k` of `K` with `σ^k` fixing the core.
    fn power_of(&self, c: &Core) -> usize {
        let target = c.normalize();
        (1..=self.k)
            .filter(|k| self.k.is_multiple_of(*k))
            .find(|&k| self.apply_core(c, k).normalize() == target)
            .unwrap_or(self.k)
    }
}

/// `x[-left, right)` for a core fixed by `σ^power`.
fn expand_core(m: &Morphism, c: &Core, power: usize, left: usize, right: usize) -> Result<Word> {
    let (lm, rm) = c.middle.split_at(c.origin);
    let mut lw = match &c.left {
        LeftEnd::Growing(d) => {
            let mut seed = vec![*d];
            seed.extend_from_slice(lm);
            seed_suffix(m, &seed, power, left)?
        }
        LeftEnd::Periodic(u) => {
            let mut w = crate::word::repeat(u, left / u.len() + 1);
            w.extend_from_slice(lm);
            w
        }
    };
    let rw = match &c.right {
        RightEnd::Growing(e) => {
            let mut seed = rm.to_vec();
            seed.push(*e);
            seed_prefix(m, &seed, power, right)?
        }
        RightEnd::Periodic(v) => {
            let mut w = rm.to_vec();
            while w.len() < right {
                w.extend_from_slice(v);
            }
            w
        }
    };
    if lw.len() < left || rw.len() < right {
        return Err(Error::Internal("seed does not prolong".into()));
    }
    let mut out = lw.split_off(lw.len() - left);
    out.extend_from_slice(&rw[..right]);
    Ok(out)
}

/// Least `n`, a multiple of `power`, with `|σ^n(seed)| ≥ len`.
fn depth_for(m: &Morphism, seed: &[Letter], power: usize, len: usize) -> Result<usize> {
    let mut lv = vec![1u64; m.card()];
    let total = |lv: &[u64]| seed.iter().fold(0u64, |s, &a| s.saturating_add(lv[a]));
    let mut depth = 0;
    for _ in 0..EXPANSION_ROUNDS {
        if total(&lv) >= len as u64 {
            return Ok(depth);
        }
        for _ in 0..power {
            lv = (0..m.card()).map(|a| m.image(a).iter().fold(0u64, |s, &b| s.saturating_add(lv[b]))).collect();
        }
        depth += power;
    }
    Err(Error::cap("seed expansion rounds", EXPANSION_ROUNDS))
}

fn seed_prefix(m: &Morphism, seed: &[Letter], power: usize, len: usize) -> Result<Word> {
    let depth = depth_for(m, seed, power, len)?;
    Ok(m.prefix_of_power(seed, depth, len))
}

fn seed_suffix(m: &Morphism, seed: &[Letter], power: usize, len: usize) -> Result<Word> {
    let depth = depth_for(m, seed, power, len)?;
    Ok(m.suffix_of_power(seed, depth, len))
}

/// Least period word of a fixed point, if it is at most `bound` (exact for
/// shapes with a periodic side).
fn core_period(m: &Morphism, c: &Core, power: usize, bound: usize) -> Result<Option<Word>> {
    let pk = m.power(power)?;
    let certify = |w: &[Letter]| power_exponent(&pk.img(w), w).is_some();
    match (&c.left, &c.right) {
        (LeftEnd::Periodic(u), RightEnd::Periodic(v)) => {
            let p = EpPoint { left_period: u.clone(), center: c.middle.clone(), right_period: v.clone(), origin: c.origin };
            let oc = p.orbit_canonical();
            Ok((oc.center.is_empty() && oc.left_period == oc.right_period).then_some(oc.left_period))
        }
        (LeftEnd::Periodic(u), RightEnd::Growing(_)) => {
            let q = primitive_root(u).len();
            let x = expand_core(m, c, power, 0, q.max(c.middle.len() - c.origin + 1))?;
            let w = x[..q].to_vec();
            let (u0, t) = canon_left(u, &c.middle[..c.origin]);
            let same_left = canon_left(&w, &[]) == (u0, t);
            let periodic_right = (0..x.len()).all(|i| x[i] == w[i % q]);
            Ok((same_left && periodic_right && certify(&w)).then_some(w))
        }
        (LeftEnd::Growing(_), RightEnd::Periodic(v)) => {
            let q = primitive_root(v).len();
            let x = expand_core(m, c, power, q.max(c.origin + 1), q)?;
            let split = x.len() - q;
            let w = x[split..].to_vec();
            let (h, v0) = canon_right(&c.middle[c.origin..], v);
            let same_right = canon_right(&[], &w) == (h, v0);
            let periodic_left = (0..split).all(|i| x[split - 1 - i] == w[q - 1 - (i % q)]);
            Ok((same_right && periodic_left && certify(&w)).then_some(w))
        }
        (LeftEnd::Growing(_), RightEnd::Growing(_)) => {
            let half = 2 * bound + c.middle.len() + 2;
            let x = expand_core(m, c, power, half, half)?;
            let q = smallest_period(&x);
            if q > bound {
                return Ok(None);
            }
            let w = x[half..half + q].to_vec();
            Ok(certify(&w).then_some(w))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum OrbitKey {
    Periodic(Word),
    Point(NormCore),
}

/// Result of [`enumerate_fixed_orbits`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedOrbits {
    pub descriptors: Vec<FixedPointDescriptor>,
    pub k_max: usize,
    /// The exponent `K` with every fixed point of a power of `σ` fixed by `σ^K`.
    pub stable_power: usize,
    /// `σ` maps the set of orbits of all fixed points into itself.
    pub closure_certified: bool,
    /// Orbits left out because their least power exceeds `k_max`.
    pub omitted: usize,
}

/// `lcm(1..Card(A)) · min(mex(σ)!, 720) · p`.
pub fn default_k_max(an: &Analysis) -> usize {
    let n = an.card();
    let l = (1..=n.max(1)).fold(1usize, lcm);
    let mex = an.classes.mex_morphism();
    let mut f = 1usize;
    for i in 1..=mex {
        f = f.saturating_mul(i);
        if f > 720 {
            f = 720;
            break;
        }
    }
    l.saturating_mul(f).saturating_mul(an.stab.p)
}

/// Enumerates the orbits of admissible two-sided fixed points of the powers
/// `σ^k`, `k ≤ k_max`, one canonical descriptor per orbit.
pub fn enumerate_fixed_orbits(m: &Morphism, k_max: Option<usize>) -> Result<FixedOrbits> {
    let an = Analysis::new(m)?;
    let bound = crate::decide::point_period_bound(&an)?;
    fixed_orbits_of(&an, k_max, bound)
}

pub(crate) fn fixed_orbits_of(an: &Analysis, k_max: Option<usize>, bound: usize) -> Result<FixedOrbits> {
    let k_max = k_max.unwrap_or_else(|| default_k_max(an));
    let m = &an.morphism;
    if !an.classes.in_shift_language.iter().any(|&b| b) {
        return Ok(FixedOrbits { descriptors: Vec::new(), k_max, stable_power: 1, closure_certified: true, omitted: 0 });
    }
    let eng = Engine::new(an)?;
    let (cores, _) = eng.fixed_cores();
    let mut by_orbit: BTreeMap<OrbitKey, (usize, Core)> = BTreeMap::new();
    for c in cores {
        let c = eng.canonical(&c)?;
        let power = eng.power_of(&c);
        let key = orbit_key(&eng, &c, power, bound)?;
        let entry = by_orbit.entry(key).or_insert((power, c.clone()));
        if (power, &c) < (entry.0, &entry.1) {
            *entry = (power, c);
        }
    }
    let keys: HashSet<OrbitKey> = by_orbit.keys().cloned().collect();
    let mut closure_certified = true;
    for (key, (power, c)) in &by_orbit {
        let image = eng.canonical(&eng.apply_core(c, 1))?;
        let image_key = match key {
            OrbitKey::Periodic(w) => OrbitKey::Periodic(periodic_orbit_key(&m.img(w))),
            OrbitKey::Point(_) => orbit_key(&eng, &image, *power, bound)?,
        };
        if !keys.contains(&image_key) {
            closure_certified = false;
        }
    }
    let mut descriptors: Vec<FixedPointDescriptor> = by_orbit
        .values()
        .filter(|(p, _)| *p <= k_max)
        .map(|(p, c)| FixedPointDescriptor { power: *p, shape: eng.shape_of(c, *p) })
        .collect();
    descriptors.sort();
    let omitted = by_orbit.len() - descriptors.len();
    Ok(FixedOrbits { descriptors, k_max, stable_power: eng.k, closure_certified, omitted })
}

fn orbit_key(eng: &Engine, c: &Core, power: usize, bound: usize) -> Result<OrbitKey> {
    if let Some(w) = core_period(eng.m(), c, power, bound)? {
        return Ok(OrbitKey::Periodic(periodic_orbit_key(&w)));
    }
    Ok(match c.normalize() {
        NormCore::Pp(p) => OrbitKey::Point(NormCore::Pp(p.orbit_canonical())),
        other => OrbitKey::Point(other),
    })
}

/// Orbits of the points of the shift made of non-growing letters, in
/// orbit-canonical form.
pub fn non_growing_orbits(m: &Morphism) -> Result<Vec<EpPoint>> {
    non_growing_orbits_of(&Analysis::new(m)?)
}

pub(crate) fn non_growing_orbits_of(an: &Analysis) -> Result<Vec<EpPoint>> {
    Ok(non_growing_representatives(an)?.into_iter().map(|(c, _)| c).collect())
}

/// Orbit-canonical non-growing points with a `τ`-fixed representative.
fn non_growing_representatives(an: &Analysis) -> Result<Vec<(EpPoint, EpPoint)>> {
    if an.classes.growing.iter().all(|&g| !g) {
        return Ok(Vec::new());
    }
    let eng = Engine::new(an)?;
    let (_, cores) = eng.fixed_cores();
    let mut out: BTreeMap<EpPoint, EpPoint> = BTreeMap::new();
    for c in cores {
        if let (LeftEnd::Periodic(u), RightEnd::Periodic(v)) = (&c.left, &c.right) {
            let p = EpPoint { left_period: u.clone(), center: c.middle.clone(), right_period: v.clone(), origin: c.origin };
            out.entry(p.orbit_canonical()).or_insert(p);
        }
    }
    Ok(out.into_iter().collect())
}

/// Quasi-fixed orbits of the powers `σ^k`, `k ≤ k_max`.
pub fn enumerate_quasi_fixed_orbits(m: &Morphism, k_max: Option<usize>) -> Result<Vec<QuasiFixedDescriptor>> {
    let an = Analysis::new(m)?;
    let bound = crate::decide::point_period_bound(&an)?;
    quasi_orbits_of(&an, k_max, bound)
}

pub(crate) fn quasi_orbits_of(an: &Analysis, k_max: Option<usize>, bound: usize) -> Result<Vec<QuasiFixedDescriptor>> {
    let fixed = fixed_orbits_of(an, k_max, bound)?;
    let k_max = fixed.k_max;
    let m = &an.morphism;
    let mut out: Vec<QuasiFixedDescriptor> = fixed
        .descriptors
        .into_iter()
        .map(|d| QuasiFixedDescriptor { power: d.power, shape: QuasiShape::Fixed { fixed: d } })
        .collect();
    let g = &an.graph;
    for (s, c) in g.sccs.iter().enumerate() {
        if g.scc_kind[s] != SccKind::Cycle || c.len() > k_max {
            continue;
        }
        for &a in c {
            let img = m.iterate(&[a], c.len(), crate::morphism::MAX_IMAGE_LEN)?;
            let pos = img.iter().position(|&b| b == a).ok_or_else(|| Error::Internal("cycle letter".into()))?;
            let (left, right) = (img[..pos].to_vec(), img[pos + 1..].to_vec());
            if !an.classes.is_erasable_word(&left) && !an.classes.is_erasable_word(&right) {
                out.push(QuasiFixedDescriptor { power: c.len(), shape: QuasiShape::Bilateral { letter: a, left, right } });
            }
        }
    }
    if an.classes.growing.iter().any(|&b| b) {
        let eng = Engine::new(an)?;
        for (canon, rep) in non_growing_representatives(an)? {
            if canon.center.is_empty() && canon.left_period == canon.right_period {
                let r = primitive_root(&rep.left_period).to_vec();
                for k in 1..=eng.k.min(k_max) {
                    let s = eng.sigma_ng(&r, k);
                    if s.len() != r.len() {
                        break;
                    }
                    if let Some(j) = (0..r.len()).find(|&j| rotate(&r, j) == s) {
                        if j != 0 {
                            out.push(QuasiFixedDescriptor {
                                power: k,
                                shape: QuasiShape::Rotating { left: r[..j].to_vec(), right: r[j..].to_vec() },
                            });
                        }
                        break;
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `x[-left, right)` of a fixed point.
pub fn expand(m: &Morphism, d: &FixedPointDescriptor, left: usize, right: usize) -> Result<Word> {
    let an = Analysis::new(m)?;
    let c = Core::from_shape(&d.shape, &an.classes.growing)?;
    expand_core(m, &c, d.power, left, right)
}

/// `x[-left, right)` of a quasi-fixed point.
pub fn expand_quasi(m: &Morphism, d: &QuasiFixedDescriptor, left: usize, right: usize) -> Result<Word> {
    match &d.shape {
        QuasiShape::Fixed { fixed } => expand(m, fixed, left, right),
        QuasiShape::Rotating { left: u, right: v } => {
            let mut w = u.clone();
            w.extend_from_slice(v);
            Ok(EpPoint { left_period: w.clone(), center: Vec::new(), right_period: w, origin: 0 }.window(left, right))
        }
        QuasiShape::Bilateral { letter, left: u, right: v } => {
            let mut r = vec![*letter];
            let mut j = 0;
            while r.len() < right {
                if j > EXPANSION_ROUNDS {
                    return Err(Error::cap("bilateral expansion rounds", EXPANSION_ROUNDS));
                }
                r.extend(m.prefix_of_power(v, j * d.power, right - r.len()));
                j += 1;
            }
            let mut l: Word = Vec::new();
            let mut j = 0;
            while l.len() < left {
                if j > EXPANSION_ROUNDS {
                    return Err(Error::cap("bilateral expansion rounds", EXPANSION_ROUNDS));
                }
                let mut piece = m.suffix_of_power(u, j * d.power, left - l.len());
                piece.extend(l);
                l = piece;
                j += 1;
            }
            let mut out = l[l.len() - left..].to_vec();
            out.extend_from_slice(&r[..right]);
            Ok(out)
        }
    }
}

/// Least period of a fixed point if it is periodic with period at most
/// `bound` (shapes with a periodic side are decided without the bound).
pub fn descriptor_period(m: &Morphism, d: &FixedPointDescriptor, bound: usize) -> Result<Option<usize>> {
    let an = Analysis::new(m)?;
    let c = Core::from_shape(&d.shape, &an.classes.growing)?;
    Ok(core_period(m, &c, d.power, bound)?.map(|w| w.len()))
}

/// Least period of a quasi-fixed point if it is periodic with period at most `bound`.
pub fn quasi_period(m: &Morphism, d: &QuasiFixedDescriptor, bound: usize) -> Result<Option<usize>> {
    match &d.shape {
        QuasiShape::Fixed { fixed } => descriptor_period(m, fixed, bound),
        QuasiShape::Rotating { left, right } => Ok(Some(primitive_root(&crate::word::concat(left, right)).len())),
        QuasiShape::Bilateral { letter, left: u, right: v } => {
            let half = 2 * bound + 2;
            let x = expand_quasi(m, d, half, half)?;
            let q = smallest_period(&x);
            if q > bound {
                return Ok(None);
            }
            let w = x[half..half + q].to_vec();
            if x[half - q..half] != w[..] || w[0] != *letter {
                return Ok(None);
            }
            let pk = m.power(d.power)?;
            let sw = pk.img(&w);
            if sw.is_empty() {
                return Ok(None);
            }
            let right_ok = canon_right(&[], &sw) == canon_right(u, &w);
            let left_ok = canon_left(&sw, u) == canon_left(&w, &[]);
            let _ = v;
            Ok((right_ok && left_ok).then_some(q))
        }
    }
}

/// The letters `a` with `σ(a) = u a v`, `u`, `v` erasable, and the words
/// `σ^{Card(A)}(a)` for those letters. Every such word is fixed by `σ`.
pub fn finite_fixed_points(m: &Morphism) -> Result<(Vec<Letter>, Vec<Word>)> {
    let an = Analysis::new(m)?;
    let mut letters = Vec::new();
    let mut words = BTreeSet::new();
    for a in 0..m.card() {
        let img = m.image(a);
        let ok = img.iter().enumerate().any(|(i, &b)| {
            b == a && an.classes.is_erasable_word(&img[..i]) && an.classes.is_erasable_word(&img[i + 1..])
        });
        if ok {
            letters.push(a);
            words.insert(m.iterate(&[a], m.card(), crate::morphism::MAX_IMAGE_LEN)?);
        }
    }
    Ok((letters, words.into_iter().collect()))
}

/// The finite set of words over erasable letters in `L(σ)` (the empty word included).
pub fn erasable_words(m: &Morphism) -> Result<Vec<Word>> {
    let an = Analysis::new(m)?;
    let erasable: Vec<Letter> = (0..m.card()).filter(|&a| an.classes.erasable[a]).collect();
    let mut out = vec![Vec::new()];
    let mut level: Vec<Word> = vec![Vec::new()];
    let cap = 64 * m.size();
    for _ in 0..cap {
        let mut next = Vec::new();
        for w in &level {
            for &a in &erasable {
                let mut x = w.clone();
                x.push(a);
                if crate::langtools::member_language(m, &x)? {
                    next.push(x);
                }
            }
        }
        if next.is_empty() {
            out.sort();
            return Ok(out);
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    Err(Error::cap("erasable word length", cap))
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
    fn canonical_eventually_periodic() {
        assert_eq!(canon_left(&[1, 0], &[1, 2]), (vec![0, 1], vec![2]));
        assert_eq!(canon_left(&[1, 0], &[0, 2]), (vec![0, 1], vec![0, 0, 2]));
        assert_eq!(canon_left(&[0, 1], &[0, 1, 2]), (vec![0, 1], vec![2]));
        assert_eq!(canon_right(&[2, 0, 1], &[0, 1]), (vec![2], vec![0, 1]));
        let p = EpPoint::new(vec![1, 0], vec![1], vec![0, 1], 1).unwrap();
        assert!(p.is_periodic());
        assert_eq!(p.period(), Some(2));
        assert_eq!(p.orbit_canonical(), EpPoint::periodic(&[0, 1]));
        assert!(!EpPoint::new(vec![1, 0], vec![], vec![0, 1], 0).unwrap().is_periodic());
        let q = EpPoint::new(vec![1], vec![0], vec![2], 1).unwrap();
        let shifted = EpPoint::new(vec![1], vec![1, 0, 2, 2], vec![2], 3).unwrap();
        assert_eq!(q.orbit_canonical(), shifted.orbit_canonical());
        assert!(!q.is_periodic());
        assert_eq!(q.window(3, 2), vec![1, 1, 0, 2, 2]);
    }

    #[test]
    fn fibonacci_fixed_points() {
        let m = parse("a -> ab\nb -> a");
        let f = enumerate_fixed_orbits(&m, None).unwrap();
        assert!(f.closure_certified);
        assert_eq!(
            f.descriptors,
            vec![
                FixedPointDescriptor { power: 2, shape: FixedShape::TwoSeed { left: vec![0], right: vec![0] } },
                FixedPointDescriptor { power: 2, shape: FixedShape::TwoSeed { left: vec![1], right: vec![0] } },
            ]
        );
        assert_eq!(expand(&m, &f.descriptors[0], 0, 8).unwrap(), w(&m, "abaababa"));
        assert_eq!(descriptor_period(&m, &f.descriptors[0], 20).unwrap(), None);
    }

    #[test]
    fn baab_fixed_point() {
        let m = parse("a -> baab\nb ->");
        let f = enumerate_fixed_orbits(&m, None).unwrap();
        assert_eq!(f.descriptors.len(), 1);
        let d = &f.descriptors[0];
        assert_eq!(d.power, 1);
        assert_eq!(d.shape, FixedShape::TwoSeed { left: w(&m, "ab"), right: w(&m, "ba") });
        assert_eq!(expand(&m, d, 0, 8).unwrap(), w(&m, "baabbaab"));
        assert_eq!(descriptor_period(&m, d, 10).unwrap(), Some(4));
    }

    #[test]
    fn non_growing_examples() {
        let m = parse("a -> abb\nb -> b");
        assert_eq!(non_growing_orbits(&m).unwrap(), vec![EpPoint::periodic(&[1])]);
        assert!(non_growing_orbits(&parse("a -> ab\nb -> a")).unwrap().is_empty());
        let m = parse("a -> bac\nb -> b\nc -> c");
        assert_eq!(non_growing_orbits(&m).unwrap(), vec![EpPoint::periodic(&[1]), EpPoint::periodic(&[2])]);
    }

    #[test]
    fn two_seed_examples() {
        let m = parse("a -> a\nb -> baabab");
        let f = enumerate_fixed_orbits(&m, None).unwrap();
        let seeds: Vec<FixedShape> = f.descriptors.iter().map(|d| d.shape.clone()).collect();
        assert!(seeds.contains(&FixedShape::TwoSeed { left: w(&m, "ba"), right: w(&m, "b") }));
        assert!(seeds.contains(&FixedShape::TwoSeed { left: w(&m, "baa"), right: w(&m, "b") }));
        let m = parse("a -> ab\nb -> ac\nc -> ac");
        let f = enumerate_fixed_orbits(&m, None).unwrap();
        let periods: Vec<Option<usize>> =
            f.descriptors.iter().map(|d| descriptor_period(&m, d, 8).unwrap()).collect();
        assert!(periods.contains(&Some(4)));
    }

    #[test]
    fn infinite_family_collapses() {
        let m = parse("a -> bc\nb -> bd\nc -> ec\nd -> d\ne -> e");
        let f = enumerate_fixed_orbits(&m, None).unwrap();
        let shapes: Vec<FixedShape> = f.descriptors.iter().map(|d| d.shape.clone()).collect();
        assert_eq!(
            shapes,
            vec![
                FixedShape::EventuallyPeriodic { point: EpPoint::periodic(&[3]) },
                FixedShape::EventuallyPeriodic {
                    point: EpPoint { left_period: vec![3], center: vec![], right_period: vec![4], origin: 0 }
                },
                FixedShape::EventuallyPeriodic { point: EpPoint::periodic(&[4]) },
            ]
        );
    }

    #[test]
    fn quasi_examples() {
        let m = parse("a -> bab\nb -> b");
        let q = enumerate_quasi_fixed_orbits(&m, None).unwrap();
        assert!(q.iter().any(|d| d.shape == QuasiShape::Bilateral { letter: 0, left: vec![1], right: vec![1] }));
        let bil = q.iter().find(|d| matches!(d.shape, QuasiShape::Bilateral { .. })).unwrap();
        assert_eq!(expand_quasi(&m, bil, 3, 3).unwrap(), w(&m, "bbbabb"));
        assert_eq!(quasi_period(&m, bil, 10).unwrap(), None);
        let fib = parse("a -> ab\nb -> a");
        let q = enumerate_quasi_fixed_orbits(&fib, None).unwrap();
        assert!(q.iter().all(|d| matches!(d.shape, QuasiShape::Fixed { .. })));
        let m = parse("a -> a\nb -> bab");
        let q = enumerate_quasi_fixed_orbits(&m, None).unwrap();
        assert!(q.iter().any(|d| quasi_period(&m, d, 10).unwrap() == Some(2)));
    }

    #[test]
    fn finite_fixed_and_erasable() {
        let (a, f) = finite_fixed_points(&parse("a -> a\nb -> bab")).unwrap();
        assert_eq!((a, f), (vec![0], vec![vec![0]]));
        let (a, f) = finite_fixed_points(&parse("a -> baab\nb ->")).unwrap();
        assert_eq!((a, f), (vec![], vec![]));
        let (a, _) = finite_fixed_points(&parse("a -> ab\nb -> a")).unwrap();
        assert!(a.is_empty());
        let m = parse("a -> baab\nb ->");
        assert_eq!(erasable_words(&m).unwrap(), vec![vec![], vec![1], vec![1, 1]]);
        assert_eq!(erasable_words(&parse("a -> ab\nb -> a")).unwrap(), vec![Vec::<Letter>::new()]);
        let m = parse("e -> cbd\nc -> cc\nd -> dd\nb -> ba\na ->");
        assert_eq!(erasable_words(&m).unwrap(), vec![vec![], w(&m, "a")]);
    }
}
