//! Homomorphisms from cactus presentations into concrete groups, with exact
//! relator checks, surjectivity tests and homomorphism counting.

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::groups::{
    sym_generator, CayleyTable, DihedralElem, DihedralOrder, FiniteGroupTable, FreeProdKind, FreeProdZ2Elem,
    GroupError, Perm, RelatorSearch,
};
use crate::permstruct::schreier_sims;
use crate::presentations::{minimal_cactus, standard_cactus, Presentation, PresentationError, RelatorLabel};
use crate::words::{cyclic_canonical, Gen, Reduction, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("{images} images for {gens} generators")]
    ImageCount { gens: usize, images: usize },
    #[error("image {0} does not belong to the target group")]
    WrongTarget(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("search exceeded its budget of {0} nodes")]
    Budget(u64),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// Codomain of a [`GroupHom`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetGroup {
    Symmetric(u32),
    /// `D_m`, or `Z2 * Z2` for [`DihedralOrder::Infinite`].
    Dihedral(DihedralOrder),
    /// `(Z2 * Z2) x Z2` with central `a` and free `b`, `c`.
    FreeProdTimesZ2,
    Finite(FiniteGroupTable),
}

impl fmt::Display for TargetGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetGroup::Symmetric(n) => write!(f, "S{n}"),
            TargetGroup::Dihedral(d) => write!(f, "{d}"),
            TargetGroup::FreeProdTimesZ2 => f.write_str("(Z2*Z2)xZ2"),
            TargetGroup::Finite(t) => write!(f, "finite group of order {}", t.order()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Perm(Perm),
    Dihedral(DihedralElem),
    FreeProd(FreeProdZ2Elem),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Perm(p) => write!(f, "{p}"),
            Element::Dihedral(d) => write!(f, "{d}"),
            Element::FreeProd(x) => write!(f, "{x}"),
        }
    }
}

impl TargetGroup {
    pub fn identity(&self) -> Element {
        match self {
            TargetGroup::Symmetric(n) => Element::Perm(Perm::identity(*n as usize)),
            TargetGroup::Dihedral(d) => Element::Dihedral(DihedralElem::identity(*d)),
            TargetGroup::FreeProdTimesZ2 => Element::FreeProd(FreeProdZ2Elem::identity(FreeProdKind::TimesZ2)),
            TargetGroup::Finite(t) => Element::Perm(Perm::identity(t.degree())),
        }
    }

    fn owns(&self, x: &Element) -> bool {
        match (self, x) {
            (TargetGroup::Symmetric(n), Element::Perm(p)) => p.degree() == *n as usize,
            (TargetGroup::Dihedral(d), Element::Dihedral(e)) => e.order_param() == *d,
            (TargetGroup::FreeProdTimesZ2, Element::FreeProd(e)) => e.kind() == FreeProdKind::TimesZ2,
            (TargetGroup::Finite(t), Element::Perm(p)) => p.degree() == t.degree(),
            _ => false,
        }
    }

    fn mul(&self, x: &Element, y: &Element) -> Element {
        match (x, y) {
            (Element::Perm(p), Element::Perm(q)) => Element::Perm(p.mul(q)),
            (Element::Dihedral(p), Element::Dihedral(q)) => Element::Dihedral(p.mul(q).expect("same dihedral group")),
            (Element::FreeProd(p), Element::FreeProd(q)) => Element::FreeProd(p.mul(q).expect("same free product")),
            _ => unreachable!("images are validated against the target"),
        }
    }

    fn inverse(&self, x: &Element) -> Element {
        match x {
            Element::Perm(p) => Element::Perm(p.inverse()),
            Element::Dihedral(d) => Element::Dihedral(d.inverse()),
            Element::FreeProd(e) => Element::FreeProd(e.inverse()),
        }
    }

    pub fn is_identity(x: &Element) -> bool {
        match x {
            Element::Perm(p) => p.is_identity(),
            Element::Dihedral(d) => d.is_identity(),
            Element::FreeProd(e) => e.is_identity(),
        }
    }
}

/// Images of the source generators in a target group.
#[derive(Clone, Debug)]
pub struct GroupHom {
    name: String,
    source: Presentation,
    target: TargetGroup,
    images: Vec<Element>,
    checked: bool,
}

impl GroupHom {
    pub fn new(name: &str, source: Presentation, target: TargetGroup, images: Vec<Element>) -> Result<GroupHom, HomError> {
        if images.len() != source.ngens() {
            return Err(HomError::ImageCount { gens: source.ngens(), images: images.len() });
        }
        if let Some(bad) = images.iter().find(|x| !target.owns(x)) {
            return Err(HomError::WrongTarget(bad.to_string()));
        }
        Ok(GroupHom { name: name.to_string(), source, target, images, checked: false })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &TargetGroup {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Set once [`hom_check`] has passed.
    pub fn is_checked(&self) -> bool {
        self.checked
    }

    pub fn image_of_gen(&self, g: Gen) -> Option<&Element> {
        self.source.alphabet().slot(g).map(|s| &self.images[s])
    }

    /// Image of a word over the source alphabet.
    pub fn image_of(&self, w: &Word) -> Element {
        w.letters().iter().fold(self.target.identity(), |acc, l| {
            let x = self.image_of_gen(l.gen).expect("word over the source alphabet");
            if l.inverse {
                self.target.mul(&acc, &self.target.inverse(x))
            } else {
                self.target.mul(&acc, x)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub relator: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub map: String,
    pub n: Option<u32>,
    pub passed: bool,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    fn new(map: &str, n: Option<u32>, failures: Vec<Failure>) -> CheckReport {
        CheckReport { map: map.to_string(), n, passed: failures.is_empty(), failures }
    }
}

/// Evaluates every relator; marks `h` checked when all map to the identity.
pub fn hom_check(h: &mut GroupHom) -> CheckReport {
    let alphabet = h.source.alphabet().clone();
    let failures: Vec<Failure> = h
        .source
        .relators()
        .iter()
        .filter_map(|r| {
            let img = h.image_of(r);
            (!TargetGroup::is_identity(&img)).then(|| Failure { relator: alphabet.format_word(r), image: img.to_string() })
        })
        .collect();
    h.checked = failures.is_empty();
    let n = match h.source.family().alphabet() {
        crate::presentations::Alphabet::Minimal { n } | crate::presentations::Alphabet::Intervals { n } => Some(n),
        crate::presentations::Alphabet::Indexed { .. } => None,
    };
    CheckReport::new(&h.name, n, failures)
}

/// Which presentation a map is defined on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Standard,
    Minimal,
}

/// `J_n -> S_n`: interval generators to interval reversals.
pub fn pi(n: u32, source: Source) -> Result<GroupHom, HomError> {
    let (p, images) = match source {
        Source::Minimal => {
            let p = minimal_cactus(n)?;
            let images = (2..=n).map(|i| sym_generator(n, 1, i).map(Element::Perm)).collect::<Result<_, _>>()?;
            (p, images)
        }
        Source::Standard => {
            let p = standard_cactus(n)?;
            let images = p
                .gens()
                .into_iter()
                .map(|g| {
                    let (a, b) = g.as_interval();
                    sym_generator(n, a, b).map(Element::Perm)
                })
                .collect::<Result<_, _>>()?;
            (p, images)
        }
    };
    GroupHom::new("pi", p, TargetGroup::Symmetric(n), images)
}

fn default_pivot(n: u32) -> u32 {
    n.div_ceil(2)
}

/// `J_n -> D_4`: `g_i` is trivial below the pivot `ceil(n/2)`, and `a` or
/// `b` by parity above it.
pub fn phi_d4(n: u32) -> Result<GroupHom, HomError> {
    if n < 3 {
        return Err(HomError::Param(format!("phi-d4 needs n >= 3, got {n}")));
    }
    let d4 = DihedralOrder::Finite(4);
    let pivot = default_pivot(n);
    let images = (2..=n)
        .map(|i| {
            Element::Dihedral(if i < pivot {
                DihedralElem::identity(d4)
            } else if i % 2 == 0 {
                DihedralElem::a(d4)
            } else {
                DihedralElem::b(d4)
            })
        })
        .collect();
    GroupHom::new("phi-d4", minimal_cactus(n)?, TargetGroup::Dihedral(d4), images)
}

/// `J_m -> D_8`: `g_pivot -> a`, `g_i -> b` for `i > pivot` of the other
/// parity, everything else trivial. Only a homomorphism when `m` is not
/// 2 mod 4.
pub fn psi_d8(m: u32, pivot: Option<u32>) -> Result<GroupHom, HomError> {
    if m < 3 {
        return Err(HomError::Param(format!("psi-d8 needs m >= 3, got {m}")));
    }
    let pivot = pivot.unwrap_or_else(|| default_pivot(m));
    if !(2..=m).contains(&pivot) {
        return Err(HomError::Param(format!("pivot {pivot} outside 2..={m}")));
    }
    let d8 = DihedralOrder::Finite(8);
    let images = (2..=m)
        .map(|i| {
            Element::Dihedral(if i == pivot {
                DihedralElem::a(d8)
            } else if i > pivot && (i - pivot) % 2 == 1 {
                DihedralElem::b(d8)
            } else {
                DihedralElem::identity(d8)
            })
        })
        .collect();
    GroupHom::new("psi-d8", minimal_cactus(m)?, TargetGroup::Dihedral(d8), images)
}

/// Smallest pivot for [`phi_inf`] that works for every `n`. It equals
/// `ceil(n/2)` for odd `n`. For even `n` the pivot `n/2` breaks the
/// relator `(g_n g_(n/2))^4`: both images are reflections, so their
/// product is a nontrivial translation.
pub fn phi_inf_pivot(n: u32) -> u32 {
    n / 2 + 1
}

/// `J_n -> Z2 * Z2`: `g_i -> a (ab)^(n-i)` from the pivot on, trivial below.
pub fn phi_inf(n: u32, pivot: Option<u32>) -> Result<GroupHom, HomError> {
    if n < 3 {
        return Err(HomError::Param(format!("phi-inf needs n >= 3, got {n}")));
    }
    let pivot = pivot.unwrap_or_else(|| phi_inf_pivot(n));
    if !(2..=n).contains(&pivot) {
        return Err(HomError::Param(format!("pivot {pivot} outside 2..={n}")));
    }
    let inf = DihedralOrder::Infinite;
    let images = (2..=n)
        .map(|i| {
            Element::Dihedral(if i >= pivot {
                DihedralElem::reflection(inf, i64::from(n - i))
            } else {
                DihedralElem::identity(inf)
            })
        })
        .collect();
    GroupHom::new("phi-inf", minimal_cactus(n)?, TargetGroup::Dihedral(inf), images)
}

/// `J_4 -> (Z2 * Z2) x Z2` with `g2 -> a` (central), `g3 -> b`, `g4 -> c`.
pub fn theta() -> Result<GroupHom, HomError> {
    let letter = |c: &str| Element::FreeProd(crate::groups::freeprod_reduce(c, FreeProdKind::TimesZ2).expect("literal"));
    GroupHom::new(
        "theta",
        minimal_cactus(4)?,
        TargetGroup::FreeProdTimesZ2,
        vec![letter("a"), letter("b"), letter("c")],
    )
}

/// A map between presentations given by generator images.
#[derive(Clone, Debug)]
pub struct WordMap {
    pub source: Presentation,
    pub target: Presentation,
    images: Vec<Word>,
}

impl WordMap {
    pub fn image_of_gen(&self, g: Gen) -> &Word {
        &self.images[self.source.alphabet().slot(g).expect("source generator")]
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(|g| self.image_of_gen(g).clone()).free_reduce(Reduction::Involutive)
    }
}

/// `J_n -> J_4`, the composite of the maps forgetting the first strand:
/// `g_i -> 1` for `i <= n - 3`, otherwise `g_(i-n+4)`.
pub fn lambda(n: u32) -> Result<WordMap, HomError> {
    if n < 4 {
        return Err(HomError::Param(format!("lambda needs n >= 4, got {n}")));
    }
    let images = (2..=n).map(|i| if i + 3 <= n { Word::identity() } else { Word::gen(i + 4 - n) }).collect();
    Ok(WordMap { source: minimal_cactus(n)?, target: minimal_cactus(4)?, images })
}

/// `theta . lambda : J_n -> (Z2 * Z2) x Z2`.
pub fn theta_lambda(n: u32) -> Result<GroupHom, HomError> {
    let l = lambda(n)?;
    let t = theta()?;
    let images = l.source.gens().into_iter().map(|g| t.image_of(l.image_of_gen(g))).collect();
    GroupHom::new("theta-lambda", l.source.clone(), TargetGroup::FreeProdTimesZ2, images)
}

/// `phi_inf` followed by reduction `Z2 * Z2 -> D_m`, checked.
pub fn dihedral_factorization(n: u32, m: u64) -> Result<GroupHom, HomError> {
    if m < 1 {
        return Err(HomError::Param("m must be at least 1".into()));
    }
    let inf = phi_inf(n, None)?;
    let images = inf
        .images
        .iter()
        .map(|x| match x {
            Element::Dihedral(d) => Element::Dihedral(d.reduce_mod(m)),
            _ => unreachable!("phi-inf lands in Z2 * Z2"),
        })
        .collect();
    let mut h = GroupHom::new("dihedral", inf.source, TargetGroup::Dihedral(DihedralOrder::Finite(m)), images)?;
    hom_check(&mut h);
    Ok(h)
}

/// Syntactic check that the map `g_2 -> 1, g_i -> g_(i-1)` sends every
/// relator of `minimal_cactus(n)` to the empty word or to a relator of
/// `minimal_cactus(n - 1)` up to rotation and inversion.
pub fn qn_consequence_check(n: u32) -> Result<CheckReport, HomError> {
    if n < 4 {
        return Err(HomError::Param(format!("qn needs n >= 4, got {n}")));
    }
    let source = minimal_cactus(n)?;
    let target = minimal_cactus(n - 1)?;
    let known: HashSet<Word> = target
        .relators()
        .iter()
        .zip(target.labels())
        .filter(|(_, l)| **l != RelatorLabel::Square)
        .map(|(r, _)| cyclic_canonical(r))
        .collect();
    let failures = source
        .relators()
        .iter()
        .filter_map(|r| {
            let img = r
                .substitute(|g| if g.0 > 2 { Word::gen(g.0 - 1) } else { Word::identity() })
                .free_reduce(Reduction::Involutive);
            let ok = cyclic_canonical(&img).is_empty() || known.contains(&cyclic_canonical(&img));
            (!ok).then(|| Failure { relator: r.to_string(), image: img.to_string() })
        })
        .collect();
    Ok(CheckReport::new("qn", Some(n), failures))
}

/// Whether a homomorphism is onto; `None` when no decision rule applies.
pub fn surjectivity_check(h: &GroupHom) -> Option<bool> {
    match &h.target {
        TargetGroup::Symmetric(n) => {
            let order = (1..=u64::from(*n)).product::<u64>();
            Some(image_order(h) == order)
        }
        TargetGroup::Finite(t) => Some(image_order(h) == t.order()),
        TargetGroup::Dihedral(d) => Some(dihedral_onto(*d, &h.images)),
        TargetGroup::FreeProdTimesZ2 => {
            let parity = |x: &Element| match x {
                Element::FreeProd(e) => {
                    let count = |c| e.letters().iter().filter(|&&l| l == c).count() % 2;
                    [e.central_flag() == Some(true), count('b') == 1, count('c') == 1]
                }
                _ => unreachable!("validated target"),
            };
            // Onto forces the images to span the abelianisation Z2^3.
            let mut rows: Vec<u8> = h.images.iter().map(parity).map(|p| p.iter().enumerate().fold(0, |acc, (i, &b)| acc | (u8::from(b) << i))).collect();
            if gf2_rank(&mut rows) < 3 {
                return Some(false);
            }
            let wanted = ["a", "b", "c"].map(|s| Element::FreeProd(crate::groups::freeprod_reduce(s, FreeProdKind::TimesZ2).expect("literal")));
            wanted.iter().all(|w| h.images.contains(w)).then_some(true)
        }
    }
}

fn gf2_rank(rows: &mut [u8]) -> usize {
    let mut rank = 0;
    for bit in 0..8 {
        if let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) {
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && rows[i] >> bit & 1 == 1 {
                    rows[i] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank
}

fn image_order(h: &GroupHom) -> u64 {
    let perms: Vec<Perm> = h
        .images
        .iter()
        .map(|x| match x {
            Element::Perm(p) => p.clone(),
            _ => unreachable!("permutation target"),
        })
        .collect();
    let degree = match &h.target {
        TargetGroup::Symmetric(n) => *n as usize,
        TargetGroup::Finite(t) => t.degree(),
        _ => unreachable!("permutation target"),
    };
    schreier_sims(degree, &perms).order()
}

/// Images `a (ab)^k` (offsets `k`) and rotations `(ab)^j` generate the whole
/// dihedral group iff there is a reflection and the rotation subgroup they
/// produce, generated by offset differences and the `j`, is everything.
fn dihedral_onto(order: DihedralOrder, images: &[Element]) -> bool {
    let mut offsets = Vec::new();
    let mut g: u64 = match order {
        DihedralOrder::Finite(m) => m,
        DihedralOrder::Infinite => 0,
    };
    for x in images {
        if let Element::Dihedral(d) = x {
            if d.is_reflection() {
                offsets.push(d.shift());
            } else {
                g = num_integer::gcd(g, d.shift().unsigned_abs());
            }
        }
    }
    let Some(&first) = offsets.first() else { return false };
    for k in &offsets[1..] {
        g = num_integer::gcd(g, (k - first).unsigned_abs());
    }
    g == 1
}

/// Default node budget for [`hom_count`].
pub const HOM_COUNT_BUDGET: u64 = 50_000_000;

/// Number of homomorphisms from the group of `p` to `target`, counted by
/// depth-first search over generator images; top-level branches run in
/// parallel.
pub fn hom_count(p: &Presentation, target: &FiniteGroupTable, surjective_only: bool, budget: u64) -> Result<u64, HomError> {
    let table = CayleyTable::new(target, target.order() as usize)?;
    let search = RelatorSearch::new(p, &table);
    if search.ngens() == 0 {
        return Ok(u64::from(!surjective_only || table.order() == 1));
    }
    let spent = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let total: u64 = (0..table.order() as u32)
        .into_par_iter()
        .map(|first| {
            let mut prefix = vec![first];
            if !search.consistent(&prefix) {
                return 0;
            }
            let mut local_budget = budget.saturating_sub(spent.load(Ordering::Relaxed));
            let start = local_budget;
            let mut count = 0u64;
            let flow = search.run(&mut prefix, &mut local_budget, &mut |images| {
                if !surjective_only || table.generated_order(images) == table.order() {
                    count += 1;
                }
                ControlFlow::Continue(())
            });
            if spent.fetch_add(start - local_budget, Ordering::Relaxed) + (start - local_budget) > budget || flow.is_break() {
                exhausted.store(true, Ordering::Relaxed);
            }
            count
        })
        .sum();
    if exhausted.load(Ordering::Relaxed) {
        return Err(HomError::Budget(budget));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_images() {
        let h = pi(4, Source::Minimal).unwrap();
        assert_eq!(h.image_of_gen(Gen(4)).unwrap().to_string(), "(1 4)(2 3)");
        for n in 2..=7 {
            for s in [Source::Minimal, Source::Standard] {
                let mut h = pi(n, s).unwrap();
                assert!(hom_check(&mut h).passed, "n={n} {s:?}");
                assert!(h.is_checked());
                assert_eq!(surjectivity_check(&h), Some(true));
            }
        }
    }

    #[test]
    fn phi_d4_images() {
        let h = phi_d4(7).unwrap();
        let img = |i| h.image_of_gen(Gen(i)).unwrap().to_string();
        assert_eq!([img(2), img(3)], ["a^0*(ab)^0", "a^0*(ab)^0"]);
        assert_eq!([img(4), img(6)], ["a^1*(ab)^0", "a^1*(ab)^0"]);
        assert_eq!([img(5), img(7)], ["a^1*(ab)^1", "a^1*(ab)^1"]);
        for n in 3..=8 {
            let mut h = phi_d4(n).unwrap();
            assert!(hom_check(&mut h).passed);
            assert_eq!(surjectivity_check(&h), Some(true));
        }
    }

    #[test]
    fn psi_d8_mod_four() {
        for m in 3..=10 {
            let mut h = psi_d8(m, None).unwrap();
            let r = hom_check(&mut h);
            assert_eq!(r.passed, m % 4 != 2, "m={m}: {:?}", r.failures);
        }
        let mut h = psi_d8(6, Some(3)).unwrap();
        let r = hom_check(&mut h);
        assert!(r.failures.iter().any(|f| f.relator.contains("g6") && f.relator.contains("g3")));
    }

    #[test]
    fn phi_inf_images() {
        let h = phi_inf(6, None).unwrap();
        let inf = DihedralOrder::Infinite;
        assert_eq!(h.image_of_gen(Gen(6)), Some(&Element::Dihedral(DihedralElem::a(inf))));
        assert_eq!(h.image_of_gen(Gen(5)), Some(&Element::Dihedral(DihedralElem::b(inf))));
        assert_eq!(surjectivity_check(&h), Some(true));
    }

    #[test]
    fn phi_inf_pivot_parity() {
        for n in 3..=10 {
            let mut h = phi_inf(n, None).unwrap();
            assert!(hom_check(&mut h).passed, "n={n}");
            let mut lower = phi_inf(n, Some(n.div_ceil(2))).unwrap();
            let r = hom_check(&mut lower);
            assert_eq!(r.passed, n % 2 == 1, "n={n}");
            if n % 2 == 0 {
                let g = |i: u32| format!("g{i}*");
                assert!(r.failures.iter().any(|f| f.relator.contains(&g(n)) && f.relator.contains(&g(n / 2))));
            }
        }
    }

    #[test]
    fn theta_and_lambda() {
        let mut t = theta().unwrap();
        assert!(hom_check(&mut t).passed);
        assert_eq!(surjectivity_check(&t), Some(true));
        let l = lambda(6).unwrap();
        assert!(l.image_of_gen(Gen(3)).is_empty());
        assert_eq!(l.image_of_gen(Gen(6)), &Word::gen(4));
        for r in l.source.relators() {
            let img = l.apply(r);
            let canon = cyclic_canonical(&img);
            assert!(canon.is_empty() || l.target.relators().iter().any(|t| cyclic_canonical(t) == canon), "{r}");
        }
        let mut tl = theta_lambda(6).unwrap();
        assert!(hom_check(&mut tl).passed);
    }

    #[test]
    fn qn_small() {
        for n in 4..=7 {
            assert!(qn_consequence_check(n).unwrap().passed);
        }
    }

    #[test]
    fn surjectivity_rules() {
        let h = dihedral_factorization(5, 7).unwrap();
        assert!(h.is_checked());
        assert_eq!(surjectivity_check(&h), Some(true));
        let z2 = FiniteGroupTable::cyclic(2);
        let p = minimal_cactus(3).unwrap();
        let trivial = GroupHom::new("one", p, TargetGroup::Finite(z2.clone()), vec![Element::Perm(Perm::identity(2)); 2]).unwrap();
        assert_eq!(surjectivity_check(&trivial), Some(false));
        assert!(!dihedral_onto(DihedralOrder::Infinite, &[Element::Dihedral(DihedralElem::a(DihedralOrder::Infinite))]));
    }

    #[test]
    fn counts() {
        let z2 = FiniteGroupTable::cyclic(2);
        let p = minimal_cactus(3).unwrap();
        assert_eq!(hom_count(&p, &z2, false, HOM_COUNT_BUDGET).unwrap(), 4);
        assert_eq!(hom_count(&p, &z2, true, HOM_COUNT_BUDGET).unwrap(), 3);
        let d4 = FiniteGroupTable::dihedral(4);
        let a = hom_count(&standard_cactus(4).unwrap(), &d4, false, HOM_COUNT_BUDGET).unwrap();
        let b = hom_count(&minimal_cactus(4).unwrap(), &d4, false, HOM_COUNT_BUDGET).unwrap();
        assert_eq!(a, b);
        assert!(matches!(hom_count(&minimal_cactus(5).unwrap(), &d4, false, 10), Err(HomError::Budget(10))));
    }

    #[test]
    fn wrong_images_rejected() {
        let p = minimal_cactus(3).unwrap();
        assert!(matches!(
            GroupHom::new("x", p.clone(), TargetGroup::Symmetric(3), vec![]),
            Err(HomError::ImageCount { gens: 2, images: 0 })
        ));
        let d = Element::Dihedral(DihedralElem::a(DihedralOrder::Finite(4)));
        assert!(GroupHom::new("x", p, TargetGroup::Symmetric(3), vec![d.clone(), d]).is_err());
    }
}
