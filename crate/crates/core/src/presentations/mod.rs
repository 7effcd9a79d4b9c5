//! Finite presentations of cactus groups and their quotients.
//!
//! Builders exist for the interval (standard) presentation, the minimal
//! presentation on the `n - 1` generators `g2..gn`, the presentation of the
//! class-2 quotient, and for class-`c` truncation of any presentation.
//! All cactus generators are involutions, so non-square relators of those
//! families are stored in [`cyclic_canonical`] form (positive letters, least
//! rotation of the word or its reverse) and deduplicated on that form.

mod format;
mod smith;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use format::{count_reports_csv, PresentationJson};
pub use smith::{abelianization, exponent_matrix, smith_normal_form, AbelianInvariants, IntMatrix, SmithForm};

use crate::words::{cyclic_canonical, left_normed_commutator, Gen, Reduction, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("invalid order n = {n}: need n >= {min}")]
    Order { n: u32, min: u32 },
    #[error("relator {relator} uses generator g{gen} outside the alphabet")]
    UnknownGenerator { relator: String, gen: u32 },
    #[error("closed form for n = {0} is not an integer")]
    NonIntegral(u32),
    #[error("cannot parse presentation: {0}")]
    Parse(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Which generator indices a presentation uses and how they print.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `g2, ..., gn`.
    Minimal { n: u32 },
    /// `x[p,q]` for `1 <= p < q <= n`, packed with [`Gen::interval`].
    Intervals { n: u32 },
    /// `g1, ..., g<count>`.
    Indexed { count: u32 },
}

impl Alphabet {
    pub fn gens(&self) -> Vec<Gen> {
        match *self {
            Alphabet::Minimal { n } => (2..=n).map(Gen).collect(),
            Alphabet::Intervals { n } => (1..=n * n.saturating_sub(1) / 2).map(Gen).collect(),
            Alphabet::Indexed { count } => (1..=count).map(Gen).collect(),
        }
    }

    pub fn ngens(&self) -> usize {
        match *self {
            Alphabet::Minimal { n } => n.saturating_sub(1) as usize,
            Alphabet::Intervals { n } => (n * n.saturating_sub(1) / 2) as usize,
            Alphabet::Indexed { count } => count as usize,
        }
    }

    /// Column position of a generator, `0..ngens`.
    pub fn slot(&self, g: Gen) -> Option<usize> {
        let (lo, count) = match *self {
            Alphabet::Minimal { .. } => (2, self.ngens()),
            _ => (1, self.ngens()),
        };
        let i = g.0.checked_sub(lo)? as usize;
        (i < count).then_some(i)
    }

    pub fn format_gen(&self, g: Gen) -> String {
        match self {
            Alphabet::Intervals { .. } => {
                let (p, q) = g.as_interval();
                format!("x[{p},{q}]")
            }
            _ => format!("g{}", g.0),
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        match self {
            Alphabet::Intervals { .. } => w.display_intervals().to_string(),
            _ => w.to_string(),
        }
    }
}

/// Where a presentation came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Standard(u32),
    Minimal(u32),
    ThmD(u32),
    Truncated { base: Box<Family>, class: u32 },
    /// Hand-written or parsed presentation on `g1..gk`.
    Custom(u32),
}

impl Family {
    pub fn alphabet(&self) -> Alphabet {
        match self {
            Family::Standard(n) => Alphabet::Intervals { n: *n },
            Family::Minimal(n) | Family::ThmD(n) => Alphabet::Minimal { n: *n },
            Family::Truncated { base, .. } => base.alphabet(),
            Family::Custom(k) => Alphabet::Indexed { count: *k },
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Standard(n) => write!(f, "standard({n})"),
            Family::Minimal(n) => write!(f, "minimal({n})"),
            Family::ThmD(n) => write!(f, "thmD({n})"),
            Family::Truncated { base, class } => write!(f, "truncated({base},{class})"),
            Family::Custom(k) => write!(f, "custom({k})"),
        }
    }
}

impl FromStr for Family {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Family, PresentationError> {
        let bad = || PresentationError::Parse(format!("unknown family {s:?}"));
        let s = s.trim();
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        Ok(match head {
            "standard" => Family::Standard(num(inner)?),
            "minimal" => Family::Minimal(num(inner)?),
            "thmD" => Family::ThmD(num(inner)?),
            "custom" => Family::Custom(num(inner)?),
            "truncated" => {
                let (base, class) = inner.rsplit_once(',').ok_or_else(bad)?;
                Family::Truncated { base: Box::new(base.parse()?), class: num(class)? }
            }
            _ => return Err(bad()),
        })
    }
}

/// Provenance of a relator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelatorLabel {
    Square,
    Disjoint,
    Nested,
    Rel5,
    Rel6,
    Commuting,
    Triple,
    Equalizer,
    Truncation,
    Given,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    family: Family,
    relators: Vec<Word>,
    labels: Vec<RelatorLabel>,
}

impl Presentation {
    /// Presentation on `g1..g<count>` with relators taken as given (freely
    /// reduced, empty ones dropped).
    pub fn custom(count: u32, relators: Vec<Word>) -> Result<Presentation, PresentationError> {
        let mut p = Presentation::empty(Family::Custom(count));
        for r in relators {
            let r = r.free_reduce(Reduction::Free);
            if !r.is_empty() {
                p.check_letters(&r)?;
                p.relators.push(r);
                p.labels.push(RelatorLabel::Given);
            }
        }
        Ok(p)
    }

    pub(crate) fn from_parts(
        family: Family,
        relators: Vec<Word>,
        labels: Vec<RelatorLabel>,
    ) -> Result<Presentation, PresentationError> {
        let p = Presentation { alphabet: family.alphabet(), family, relators, labels };
        for r in &p.relators {
            p.check_letters(r)?;
        }
        Ok(p)
    }

    fn empty(family: Family) -> Presentation {
        Presentation { alphabet: family.alphabet(), family, relators: Vec::new(), labels: Vec::new() }
    }

    fn check_letters(&self, r: &Word) -> Result<(), PresentationError> {
        for l in r.letters() {
            if self.alphabet.slot(l.gen).is_none() {
                return Err(PresentationError::UnknownGenerator {
                    relator: self.alphabet.format_word(r),
                    gen: l.gen.0,
                });
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn gens(&self) -> Vec<Gen> {
        self.alphabet.gens()
    }

    pub fn ngens(&self) -> usize {
        self.alphabet.ngens()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn labels(&self) -> &[RelatorLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relators.is_empty()
    }

    /// True when every generator has its square among the relators.
    pub fn is_involutive(&self) -> bool {
        let squares: HashSet<Gen> = self
            .relators
            .iter()
            .filter(|r| r.len() == 2 && r.letters()[0] == r.letters()[1])
            .map(|r| r.letters()[0].gen)
            .collect();
        self.gens().iter().all(|g| squares.contains(g))
    }

    /// Relators carrying a given label.
    pub fn relators_labelled(&self, label: RelatorLabel) -> impl Iterator<Item = &Word> {
        self.relators.iter().zip(&self.labels).filter(move |(_, l)| **l == label).map(|(r, _)| r)
    }
}

/// Accumulates relators of an involutive family: squares verbatim, all
/// others canonicalised and deduplicated.
struct InvolutiveBuilder {
    pres: Presentation,
    seen: HashSet<Word>,
}

impl InvolutiveBuilder {
    fn new(family: Family) -> InvolutiveBuilder {
        let mut b = InvolutiveBuilder { pres: Presentation::empty(family), seen: HashSet::new() };
        for g in b.pres.gens() {
            b.pres.relators.push(Word::from_gens([g.0, g.0]));
            b.pres.labels.push(RelatorLabel::Square);
        }
        b
    }

    fn from_presentation(p: &Presentation, family: Family) -> InvolutiveBuilder {
        let mut b = InvolutiveBuilder { pres: Presentation::empty(family), seen: HashSet::new() };
        for (r, l) in p.relators.iter().zip(&p.labels) {
            b.pres.relators.push(r.clone());
            b.pres.labels.push(*l);
            if *l != RelatorLabel::Square {
                b.seen.insert(cyclic_canonical(r));
            }
        }
        b
    }

    fn push(&mut self, w: &Word, label: RelatorLabel) {
        let c = cyclic_canonical(w);
        if !c.is_empty() && self.seen.insert(c.clone()) {
            self.pres.relators.push(c);
            self.pres.labels.push(label);
        }
    }

    fn finish(self) -> Presentation {
        self.pres
    }
}

fn interval(p: u32, q: u32) -> Word {
    Word::gen(Gen::interval(p, q).expect("p < q").0)
}

/// Interval presentation: generators `x[p,q]`, squares, commutation of
/// disjoint intervals, and the nested relations
/// `x[p,q] x[r,s] x[p,q]^-1 x[p+q-s,p+q-r]^-1` for `[r,s]` strictly inside
/// `[p,q]` (mirror pairs collapse under canonical deduplication).
pub fn standard_cactus(n: u32) -> Result<Presentation, PresentationError> {
    if n < 2 {
        return Err(PresentationError::Order { n, min: 2 });
    }
    let mut b = InvolutiveBuilder::new(Family::Standard(n));
    let intervals: Vec<(u32, u32)> = (2..=n).flat_map(|q| (1..q).map(move |p| (p, q))).collect();
    for (a, &(p, q)) in intervals.iter().enumerate() {
        for &(r, s) in &intervals[a + 1..] {
            if q < r || s < p {
                let rel = crate::words::commutator(&interval(p, q), &interval(r, s));
                b.push(&rel, RelatorLabel::Disjoint);
            }
        }
    }
    for &(p, q) in &intervals {
        for &(r, s) in &intervals {
            if (r, s) != (p, q) && p <= r && s <= q {
                let outer = interval(p, q);
                let rel = Word::from_letters(
                    [
                        outer.letters(),
                        interval(r, s).letters(),
                        outer.inverse().letters(),
                        interval(p + q - s, p + q - r).inverse().letters(),
                    ]
                    .concat(),
                );
                b.push(&rel, RelatorLabel::Nested);
            }
        }
    }
    Ok(b.finish())
}

/// Minimal presentation on `g2..gn`: squares,
/// `(gk gi gk gj)^2` for `4 <= i+j <= k <= n`, `2 <= i <= j`, and
/// `gk g(i+j) gj g(i+j) = g(k-i) gj g(k-i) gk` for `3 <= i+j < k <= n`,
/// `i >= 1`, `j >= 2`, `i+j <= k-i`.
pub fn minimal_cactus(n: u32) -> Result<Presentation, PresentationError> {
    if n < 2 {
        return Err(PresentationError::Order { n, min: 2 });
    }
    let mut b = InvolutiveBuilder::new(Family::Minimal(n));
    for k in 4..=n {
        for i in 2..=k {
            for j in i..=k - i {
                b.push(&Word::from_gens([k, i, k, j]).pow(2), RelatorLabel::Rel5);
            }
        }
    }
    for k in 4..=n {
        for i in 1..k {
            for j in 2..k {
                if i + j >= 3 && i + j < k && i + j <= k - i {
                    let lhs = Word::from_gens([k, i + j, j, i + j]);
                    let rhs = Word::from_gens([k - i, j, k - i, k]);
                    b.push(&(&lhs * &rhs.inverse()), RelatorLabel::Rel6);
                }
            }
        }
    }
    Ok(b.finish())
}

/// Presentation of the class-2 quotient on `g2..gn`: squares;
/// `[gi,gj]` when `min(i,j) < floor((n+1)/2)` or `i = j (mod 2)`; every
/// triple commutator `[gi,gj,gk]`; and `[gi,gj] [gi,gk]^-1` for
/// `2 <= i <= j,k <= n` with `k = j (mod 2)`.
pub fn thmd_quotient(n: u32) -> Result<Presentation, PresentationError> {
    if n < 3 {
        return Err(PresentationError::Order { n, min: 3 });
    }
    let pivot = n.div_ceil(2);
    let g = Word::gen;
    let mut b = InvolutiveBuilder::new(Family::ThmD(n));
    for i in 2..=n {
        for j in i + 1..=n {
            if i < pivot || (j - i) % 2 == 0 {
                b.push(&crate::words::commutator(&g(i), &g(j)), RelatorLabel::Commuting);
            }
        }
    }
    for i in 2..=n {
        for j in 2..=n {
            for k in 2..=n {
                b.push(&left_normed_commutator(&[g(i), g(j), g(k)])?, RelatorLabel::Triple);
            }
        }
    }
    for i in 2..=n {
        for j in i..=n {
            for k in i..=n {
                if j != k && (k + j) % 2 == 0 {
                    let lhs = crate::words::commutator(&g(i), &g(j));
                    let rhs = crate::words::commutator(&g(i), &g(k));
                    b.push(&(&lhs * &rhs.inverse()), RelatorLabel::Equalizer);
                }
            }
        }
    }
    Ok(b.finish())
}

/// Adds every left-normed commutator of weight `class + 1` in the
/// generators, presenting the largest quotient of nilpotency class at most
/// `class`. Tuples whose first two entries agree are freely trivial and
/// skipped.
pub fn class_truncate(p: &Presentation, class: u32) -> Result<Presentation, PresentationError> {
    let family = Family::Truncated { base: Box::new(p.family.clone()), class };
    let gens: Vec<Word> = p.gens().into_iter().map(|g| Word::gen(g.0)).collect();
    let weight = class as usize + 1;
    let involutive = p.is_involutive();
    let mut out = InvolutiveBuilder::from_presentation(p, family);
    let mut seen_plain: HashSet<Word> = p.relators.iter().cloned().collect();
    let k = gens.len();
    if k == 0 {
        return Ok(out.finish());
    }
    let mut idx = vec![0usize; weight];
    loop {
        if idx[0] != idx[1] {
            let entries: Vec<Word> = idx.iter().map(|&i| gens[i].clone()).collect();
            let rel = left_normed_commutator(&entries)?;
            if involutive {
                out.push(&rel, RelatorLabel::Truncation);
            } else if !rel.is_empty() && seen_plain.insert(rel.clone()) {
                out.pres.relators.push(rel);
                out.pres.labels.push(RelatorLabel::Truncation);
            }
        }
        // odometer
        let mut pos = weight;
        loop {
            if pos == 0 {
                return Ok(out.finish());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `x[p,q] = g_q g_(q-p+1) g_q`, with `x[1,q] = g_q`.
pub fn pq_to_min(p: u32, q: u32) -> Result<Word, PresentationError> {
    if p < 1 || p >= q {
        return Err(WordError::Interval { p, q }.into());
    }
    if p == 1 {
        return Ok(Word::gen(q));
    }
    let letters: Vec<u32> = [q, q - p + 1, q].into_iter().filter(|&i| i != 1).collect();
    Ok(Word::from_gens(letters))
}

/// Rewrites a word over interval letters into the minimal generators.
pub fn translate_to_minimal(w: &Word) -> Word {
    w.substitute(|g| {
        let (p, q) = g.as_interval();
        pq_to_min(p, q).expect("packed intervals have p < q")
    })
}

/// Closed-form generator and relator counts next to enumerated ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: u32,
    pub standard_gens: u64,
    pub standard_relators: u64,
    pub minimal_gens: u64,
    pub minimal_relators: u64,
    pub enumerated_standard_gens: u64,
    pub enumerated_standard_relators: u64,
    pub enumerated_minimal_gens: u64,
    pub enumerated_minimal_relators: u64,
}

impl CountReport {
    pub fn agrees(&self) -> bool {
        self.standard_gens == self.enumerated_standard_gens
            && self.standard_relators == self.enumerated_standard_relators
            && self.minimal_gens == self.enumerated_minimal_gens
            && self.minimal_relators == self.enumerated_minimal_relators
    }
}

/// `(G_n, R_n, G~_n, R~_n)` from the closed forms.
pub fn closed_form_counts(n: u32) -> Result<(u64, u64, u64, u64), PresentationError> {
    let m = i128::from(n);
    let sign = if n.is_multiple_of(2) { 3 } else { -3 };
    let r_num = 6 * m.pow(4) - 16 * m.pow(3) + 48 * m * m - 32 * m - 3 + sign;
    let rt_num = 4 * m.pow(3) - 18 * m * m + 44 * m - 27 + sign;
    if r_num % 96 != 0 || rt_num % 24 != 0 {
        return Err(PresentationError::NonIntegral(n));
    }
    let g = m * (m - 1) / 2;
    Ok((g as u64, (r_num / 96) as u64, (m - 1) as u64, (rt_num / 24) as u64))
}

pub fn counts_closed_form(n: u32) -> Result<CountReport, PresentationError> {
    let (g, r, gt, rt) = closed_form_counts(n)?;
    let std = standard_cactus(n)?;
    let min = minimal_cactus(n)?;
    Ok(CountReport {
        n,
        standard_gens: g,
        standard_relators: r,
        minimal_gens: gt,
        minimal_relators: rt,
        enumerated_standard_gens: std.ngens() as u64,
        enumerated_standard_relators: std.len() as u64,
        enumerated_minimal_gens: min.ngens() as u64,
        enumerated_minimal_relators: min.len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn standard_small_orders() {
        let p2 = standard_cactus(2).unwrap();
        assert_eq!((p2.ngens(), p2.len()), (1, 1));
        assert_eq!(p2.relators()[0], w("x[1,2]^2"));
        let p3 = standard_cactus(3).unwrap();
        assert_eq!((p3.ngens(), p3.len()), (3, 4));
        let p4 = standard_cactus(4).unwrap();
        assert_eq!((p4.ngens(), p4.len()), (6, 12));
        assert_eq!(p4.relators_labelled(RelatorLabel::Square).count(), 6);
        assert_eq!(p4.relators_labelled(RelatorLabel::Disjoint).count(), 1);
        assert_eq!(p4.relators_labelled(RelatorLabel::Nested).count(), 5);
        assert!(matches!(standard_cactus(1), Err(PresentationError::Order { .. })));
    }

    #[test]
    fn minimal_small_orders() {
        let p3 = minimal_cactus(3).unwrap();
        assert_eq!(p3.relators(), &[w("g2^2"), w("g3^2")]);
        let p4 = minimal_cactus(4).unwrap();
        let expected: HashSet<Word> = ["g2^2", "g3^2", "g4^2"]
            .iter()
            .map(|s| w(s))
            .chain(["g4*g2*g4*g2*g4*g2*g4*g2", "g4*g3*g2*g3*g4*g3*g2*g3"].iter().map(|s| cyclic_canonical(&w(s))))
            .collect();
        assert_eq!(p4.relators().iter().cloned().collect::<HashSet<_>>(), expected);
        let p5 = minimal_cactus(5).unwrap();
        assert_eq!(p5.len(), 10);
        assert_eq!(p5.relators_labelled(RelatorLabel::Rel5).count(), 3);
        assert_eq!(p5.relators_labelled(RelatorLabel::Rel6).count(), 3);
        assert!(minimal_cactus(1).is_err());
    }

    #[test]
    fn relators_are_canonical_and_distinct() {
        for p in [standard_cactus(6).unwrap(), minimal_cactus(7).unwrap(), thmd_quotient(6).unwrap()] {
            let mut keys = HashSet::new();
            for (r, l) in p.relators().iter().zip(p.labels()) {
                if *l == RelatorLabel::Square {
                    assert!(keys.insert(r.clone()));
                } else {
                    assert_eq!(&cyclic_canonical(r), r);
                    assert!(keys.insert(r.clone()));
                }
                for letter in r.letters() {
                    assert!(p.alphabet().slot(letter.gen).is_some());
                }
            }
        }
    }

    #[test]
    fn truncation_shape() {
        let p = class_truncate(&minimal_cactus(3).unwrap(), 1).unwrap();
        assert_eq!(p.family().to_string(), "truncated(minimal(3),1)");
        // [g2,g3] and [g3,g2] share a canonical form.
        assert_eq!(p.relators_labelled(RelatorLabel::Truncation).count(), 1);
        let custom = Presentation::custom(2, vec![w("g1^2"), w("g2^3")]).unwrap();
        assert!(!custom.is_involutive());
        let t = class_truncate(&custom, 1).unwrap();
        assert_eq!(t.relators_labelled(RelatorLabel::Truncation).count(), 2);
        assert!(thmd_quotient(2).is_err());
    }

    #[test]
    fn generator_translation() {
        assert_eq!(pq_to_min(1, 4).unwrap(), w("g4"));
        assert_eq!(pq_to_min(2, 3).unwrap(), w("g3*g2*g3"));
        assert_eq!(pq_to_min(3, 4).unwrap(), w("g4*g2*g4"));
        assert!(pq_to_min(4, 4).is_err());
        assert_eq!(translate_to_minimal(&w("x[1,3]*x[2,3]")), w("g3*g3*g2*g3"));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_counts(4).unwrap(), (6, 12, 3, 5));
        assert_eq!(closed_form_counts(5).unwrap(), (10, 29, 4, 10));
        assert_eq!(closed_form_counts(6).unwrap(), (15, 61, 5, 19));
        assert!(counts_closed_form(4).unwrap().agrees());
    }

    #[test]
    fn family_text_round_trip() {
        for f in [
            Family::Standard(5),
            Family::ThmD(4),
            Family::Truncated { base: Box::new(Family::Minimal(4)), class: 3 },
            Family::Custom(2),
        ] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
    }
}
