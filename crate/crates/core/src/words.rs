//! Free-group words over an indexed generator alphabet.
//!
//! Words are flat sequences of signed letters. Two reduction modes exist:
//! plain free reduction, and involutive reduction where every generator is
//! treated as its own inverse (all cactus generators are involutions).

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("left-normed commutator needs at least two entries, got {0}")]
    CommutatorArity(usize),
    #[error("cannot parse word {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("invalid interval [{p},{q}]: need 1 <= p < q")]
    Interval { p: u32, q: u32 },
}

/// A generator index.
///
/// For minimal cactus presentations `Gen(i)` stands for the generator
/// reversing the interval `[1, i]`, with `2 <= i <= n`; index 1 is the
/// identity and is erased by the maps that produce it. Standard
/// presentations pack the interval `[p, q]` with [`Gen::interval`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gen(pub u32);

impl Gen {
    /// Packs `[p, q]` (1-based, `p < q`) into an index that does not depend on `n`:
    /// `[1,2] -> 1`, `[1,3] -> 2`, `[2,3] -> 3`, `[1,4] -> 4`, ...
    pub fn interval(p: u32, q: u32) -> Result<Gen, WordError> {
        if p < 1 || p >= q {
            return Err(WordError::Interval { p, q });
        }
        Ok(Gen((q - 1) * (q - 2) / 2 + p))
    }

    /// Inverse of [`Gen::interval`].
    pub fn as_interval(self) -> (u32, u32) {
        let k = self.0;
        assert!(k >= 1, "generator index 0 is not an interval");
        let mut q = 2;
        while (q - 1) * q / 2 < k {
            q += 1;
        }
        (k - (q - 1) * (q - 2) / 2, q)
    }
}

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Letter {
        Letter { gen: Gen(gen), inverse }
    }

    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// Cancel `x x^-1` and `x^-1 x`.
    Free,
    /// Every generator is an involution: cancel any two adjacent letters on
    /// the same generator, and forget signs.
    Involutive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    /// Single positive letter.
    pub fn gen(index: u32) -> Word {
        Word(vec![Letter::new(index, false)])
    }

    /// Positive word from a list of generator indices.
    pub fn from_gens<I: IntoIterator<Item = u32>>(gens: I) -> Word {
        Word(gens.into_iter().map(|g| Letter::new(g, false)).collect())
    }

    /// Word from `(index, sign)` pairs; any negative sign means inverse.
    pub fn from_signed<I: IntoIterator<Item = (u32, i32)>>(pairs: I) -> Word {
        Word(pairs.into_iter().map(|(g, s)| Letter::new(g, s < 0)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut out = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            out.extend_from_slice(&self.0);
        }
        Word(out)
    }

    /// Largest generator index occurring in the word.
    pub fn max_gen(&self) -> Option<Gen> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Replaces every letter by a word (inverse letters by the inverse word).
    pub fn substitute<F: FnMut(Gen) -> Word>(&self, mut image: F) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            let w = image(l.gen);
            if l.inverse {
                out.extend(w.0.iter().rev().map(|x| x.inv()));
            } else {
                out.extend_from_slice(&w.0);
            }
        }
        Word(out)
    }

    pub fn free_reduce(&self, mode: Reduction) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            let l = match mode {
                Reduction::Free => l,
                Reduction::Involutive => Letter { gen: l.gen, inverse: false },
            };
            match stack.last() {
                Some(&top) if cancels(top, l, mode) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word(stack)
    }

    /// `(x1, -1)`-style exponent sums indexed by generator.
    pub fn exponent_sum(&self, gen: Gen) -> i64 {
        self.0
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| i64::from(l.sign()))
            .sum()
    }

    /// Display with interval letters `x[p,q]` instead of `g<i>`.
    pub fn display_intervals(&self) -> impl fmt::Display + '_ {
        WordDisplay { word: self, style: LetterStyle::Interval }
    }
}

fn cancels(a: Letter, b: Letter, mode: Reduction) -> bool {
    a.gen == b.gen
        && match mode {
            Reduction::Free => a.inverse != b.inverse,
            Reduction::Involutive => true,
        }
}

impl Mul for &Word {
    type Output = Word;

    /// Concatenation followed by free reduction.
    fn mul(self, rhs: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&rhs.0);
        Word(v).free_reduce(Reduction::Free)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

/// `[x, y] = x^-1 y^-1 x y`, freely reduced.
pub fn commutator(x: &Word, y: &Word) -> Word {
    let mut v = x.inverse().0;
    v.extend(y.inverse().0);
    v.extend_from_slice(&x.0);
    v.extend_from_slice(&y.0);
    Word(v).free_reduce(Reduction::Free)
}

/// `[g1, g2, ..., gk] = [[g1, ..., g(k-1)], gk]`.
pub fn left_normed_commutator(entries: &[Word]) -> Result<Word, WordError> {
    if entries.len() < 2 {
        return Err(WordError::CommutatorArity(entries.len()));
    }
    let mut acc = commutator(&entries[0], &entries[1]);
    for w in &entries[2..] {
        acc = commutator(&acc, w);
    }
    Ok(acc)
}

/// Canonical representative of a relator up to cyclic rotation and
/// inversion, over the involutive alphabet.
///
/// The word is involutively reduced, cyclically reduced, and the least
/// rotation of either it or its reverse is returned (all letters positive).
/// Squares of generators reduce to the empty word.
pub fn cyclic_canonical(w: &Word) -> Word {
    let mut v = w.free_reduce(Reduction::Involutive).0;
    let (mut lo, mut hi) = (0usize, v.len());
    while hi - lo >= 2 && v[lo].gen == v[hi - 1].gen {
        lo += 1;
        hi -= 1;
    }
    v = v[lo..hi].to_vec();
    if v.is_empty() {
        return Word(v);
    }
    let mut best = least_rotation(&v);
    v.reverse();
    let rev = least_rotation(&v);
    if rev < best {
        best = rev;
    }
    Word(best)
}

fn least_rotation(v: &[Letter]) -> Vec<Letter> {
    let n = v.len();
    let mut best: Option<Vec<Letter>> = None;
    for s in 0..n {
        let rot: Vec<Letter> = v[s..].iter().chain(&v[..s]).copied().collect();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap_or_default()
}

/// Bracket tree of a basic commutator; leaves are generator numbers `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommutatorTree {
    Gen(u32),
    Comm(Box<CommutatorTree>, Box<CommutatorTree>),
}

impl CommutatorTree {
    pub fn weight(&self) -> usize {
        match self {
            CommutatorTree::Gen(_) => 1,
            CommutatorTree::Comm(a, b) => a.weight() + b.weight(),
        }
    }

    pub fn to_word(&self) -> Word {
        match self {
            CommutatorTree::Gen(i) => Word::gen(*i),
            CommutatorTree::Comm(a, b) => commutator(&a.to_word(), &b.to_word()),
        }
    }
}

impl fmt::Display for CommutatorTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommutatorTree::Gen(i) => write!(f, "x{i}"),
            CommutatorTree::Comm(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// Basic commutators of weight `weight` over `k` ordered generators
/// `x1 < x2 < ... < xk`, as bracket trees.
///
/// Lower weights precede higher ones; within a weight the order is
/// lexicographic in the positions of the two entries.
pub fn basic_commutator_trees(k: u32, weight: usize) -> Vec<CommutatorTree> {
    if k == 0 || weight == 0 {
        return Vec::new();
    }
    // Global list in the basic order: (weight, children, tree).
    struct Node {
        weight: usize,
        right_child: Option<usize>,
        tree: CommutatorTree,
    }
    let mut all: Vec<Node> = (1..=k)
        .map(|i| Node { weight: 1, right_child: None, tree: CommutatorTree::Gen(i) })
        .collect();
    let mut start_of = vec![0usize, 0usize];
    for w in 2..=weight {
        start_of.push(all.len());
        let mut fresh = Vec::new();
        for i in 0..all.len() {
            for j in 0..i {
                if all[i].weight + all[j].weight != w {
                    continue;
                }
                if let Some(t) = all[i].right_child {
                    if j < t {
                        continue;
                    }
                }
                fresh.push((i, j));
            }
        }
        fresh.sort_unstable();
        for (i, j) in fresh {
            let tree = CommutatorTree::Comm(Box::new(all[i].tree.clone()), Box::new(all[j].tree.clone()));
            all.push(Node { weight: w, right_child: Some(j), tree });
        }
    }
    all.into_iter().filter(|n| n.weight == weight).map(|n| n.tree).collect()
}

/// Basic commutators expanded to words over generators `1..=k`.
pub fn hall_basic_commutators(k: u32, weight: usize) -> Vec<Word> {
    basic_commutator_trees(k, weight).iter().map(CommutatorTree::to_word).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LetterStyle {
    Indexed,
    Interval,
}

struct WordDisplay<'a> {
    word: &'a Word,
    style: LetterStyle,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = &self.word.0;
        if letters.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let mut j = i + 1;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            let l = letters[i];
            match self.style {
                LetterStyle::Indexed => write!(f, "g{}", l.gen.0)?,
                LetterStyle::Interval => {
                    let (p, q) = l.gen.as_interval();
                    write!(f, "x[{p},{q}]")?
                }
            }
            let run = (j - i) as i64;
            let e = if l.inverse { -run } else { run };
            if e != 1 {
                write!(f, "^{e}")?;
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    /// `g4*g2^2*g4^-1`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        WordDisplay { word: self, style: LetterStyle::Indexed }.fmt(f)
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Accepts `*`-separated factors `g<i>`, `x[p,q]` or `1`, each optionally
    /// raised to a nonzero integer power `^e`.
    fn from_str(s: &str) -> Result<Word, WordError> {
        let err = |reason: &str| WordError::Parse { input: s.to_string(), reason: reason.to_string() };
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(err("empty input"));
        }
        let mut letters = Vec::new();
        for factor in trimmed.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => {
                    let e: i64 = e.trim().parse().map_err(|_| err("bad exponent"))?;
                    if e == 0 {
                        return Err(err("zero exponent"));
                    }
                    (b.trim(), e)
                }
                None => (factor, 1),
            };
            if base == "1" {
                continue;
            }
            let gen = if let Some(rest) = base.strip_prefix('g') {
                let i: u32 = rest.parse().map_err(|_| err("bad generator index"))?;
                Gen(i)
            } else if let Some(rest) = base.strip_prefix("x[") {
                let inner = rest.strip_suffix(']').ok_or_else(|| err("unterminated interval"))?;
                let (p, q) = inner.split_once(',').ok_or_else(|| err("interval needs p,q"))?;
                let p: u32 = p.trim().parse().map_err(|_| err("bad interval start"))?;
                let q: u32 = q.trim().parse().map_err(|_| err("bad interval end"))?;
                Gen::interval(p, q)?
            } else {
                return Err(err("unknown letter"));
            };
            let l = Letter { gen, inverse: exp < 0 };
            for _ in 0..exp.unsigned_abs() {
                letters.push(l);
            }
        }
        Ok(Word(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn free_cancellation() {
        assert_eq!(w("g1*g1^-1*g2").free_reduce(Reduction::Free), w("g2"));
        assert_eq!(w("g4*g4*g3").free_reduce(Reduction::Involutive), w("g3"));
        assert_eq!(w("g4*g4*g3").free_reduce(Reduction::Free), w("g4^2*g3"));
    }

    #[test]
    fn erase_then_reduce() {
        let erased = w("g4*g2*g4*g2").substitute(|g| if g.0 == 2 { Word::identity() } else { Word::gen(g.0) });
        assert!(erased.free_reduce(Reduction::Involutive).is_empty());
    }

    #[test]
    fn commutator_examples() {
        let (a, b, c) = (Word::gen(1), Word::gen(2), Word::gen(3));
        assert_eq!(left_normed_commutator(&[a.clone(), b.clone()]).unwrap(), w("g1^-1*g2^-1*g1*g2"));
        assert!(left_normed_commutator(&[a.clone(), a.clone()]).unwrap().is_empty());
        let abc = left_normed_commutator(&[a.clone(), b.clone(), c]).unwrap();
        // (a^-1 b^-1 a b)^-1 c^-1 (a^-1 b^-1 a b) c
        assert_eq!(abc, w("g2^-1*g1^-1*g2*g1*g3^-1*g1^-1*g2^-1*g1*g2*g3"));
        assert_eq!(abc.len(), 10);
        assert_eq!(left_normed_commutator(&[a]), Err(WordError::CommutatorArity(1)));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(cyclic_canonical(&w("g1*g2*g1*g2")), cyclic_canonical(&w("g2*g1*g2*g1")));
        let x = |p, q| Word::from_letters(vec![Letter { gen: Gen::interval(p, q).unwrap(), inverse: false }]);
        let r1 = &(&x(1, 3) * &x(1, 2)) * &(&x(1, 3).inverse() * &x(2, 3).inverse());
        let r2 = &(&x(1, 3) * &x(2, 3)) * &(&x(1, 3).inverse() * &x(1, 2).inverse());
        assert_ne!(r1, r2);
        assert_eq!(cyclic_canonical(&r1), cyclic_canonical(&r2));
        assert_eq!(cyclic_canonical(&w("g1^2")), cyclic_canonical(&w("g1^2")));
        assert!(cyclic_canonical(&w("g1^2")).is_empty());
    }

    #[test]
    fn interval_packing() {
        let mut k = 1;
        for q in 2..20 {
            for p in 1..q {
                let g = Gen::interval(p, q).unwrap();
                assert_eq!(g.0, k);
                assert_eq!(g.as_interval(), (p, q));
                k += 1;
            }
        }
        assert!(Gen::interval(3, 3).is_err());
    }

    #[test]
    fn basic_commutator_examples() {
        let t = basic_commutator_trees(2, 2);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].to_string(), "[x2,x1]");
        let t: Vec<String> = basic_commutator_trees(2, 3).iter().map(|t| t.to_string()).collect();
        assert_eq!(t, ["[[x2,x1],x1]", "[[x2,x1],x2]"]);
        assert_eq!(hall_basic_commutators(3, 2).len(), 3);
        assert_eq!(hall_basic_commutators(2, 3)[0], left_normed_commutator(&[Word::gen(2), Word::gen(1), Word::gen(1)]).unwrap());
    }

    #[test]
    fn text_round_trip() {
        for s in ["g4*g2*g4^-1", "1", "g2^2*g3^-3", "x[1,2]*x[2,3]^-1"] {
            let parsed = w(s);
            let printed = if s.starts_with('x') { parsed.display_intervals().to_string() } else { parsed.to_string() };
            assert_eq!(printed, s);
        }
        assert!("h3".parse::<Word>().is_err());
        assert!("g3^0".parse::<Word>().is_err());
        assert!("x[3,2]".parse::<Word>().is_err());
    }
}
