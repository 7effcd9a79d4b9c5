//! Order, membership, normal closures and lower central series of finite
//! permutation groups, plus presentation-versus-group isomorphism search.
//!
//! The stabiliser chain stores Schreier vectors rather than explicit
//! transversals, so memory stays linear in the degree per level. Regular
//! groups (the coset action of a finite presentation on itself) are detected
//! up front and get a one-level chain; their subgroups are semiregular, which
//! makes order and membership a single orbit computation.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::cosets::{todd_coxeter, CosetTable, EnumConfig, EnumError, Status};
use crate::groups::{CayleyTable, FiniteGroupTable, Perm, RelatorSearch};
use crate::presentations::Presentation;

const NONE: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error("layer {k} of the lower central series is not elementary abelian")]
    NonElementary { k: usize },
    #[error("layer {k} has index {index}, not a power of 2")]
    NotTwoPower { k: usize, index: u64 },
    #[error("series has no term {k} (it stabilised after {len} terms)")]
    NoSuchTerm { k: usize, len: usize },
    #[error("group of order {0} is too large for isomorphism search")]
    TooLarge(u64),
}

#[derive(Clone, Debug)]
struct Level {
    point: u32,
    /// Indices into the strong generators that fix all earlier base points.
    gens: Vec<usize>,
    /// `label[x]`: strong generator that first reached `x`, `ROOT` for the
    /// base point, `NONE` outside the orbit.
    label: Vec<u32>,
    orbit: Vec<u32>,
}

/// Base and strong generating set.
#[derive(Clone, Debug)]
pub struct Bsgs {
    degree: usize,
    strong: Vec<Perm>,
    strong_inv: Vec<Perm>,
    levels: Vec<Level>,
    /// Every nonidentity element moves every point, so a single orbit
    /// determines the group.
    semiregular: bool,
}

impl Bsgs {
    fn empty(degree: usize) -> Bsgs {
        Bsgs { degree, strong: Vec::new(), strong_inv: Vec::new(), levels: Vec::new(), semiregular: true }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn is_semiregular(&self) -> bool {
        self.semiregular
    }

    /// Product of the transversal sizes.
    pub fn order(&self) -> u64 {
        self.levels
            .iter()
            .try_fold(1u64, |acc, l| acc.checked_mul(l.orbit.len() as u64))
            .expect("group order exceeds u64")
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (residue, _) = self.sift(p.clone(), 0);
        residue.is_identity()
    }

    /// Strips `p` through the levels from `from`; returns the residue and
    /// the level where stripping stopped.
    fn sift(&self, mut p: Perm, from: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let mut x = p.apply(level.point);
            if level.label[x as usize] == NONE {
                return (p, l);
            }
            while x != level.point {
                let j = level.label[x as usize] as usize;
                p = p.mul(&self.strong_inv[j]);
                x = self.strong_inv[j].apply(x);
            }
        }
        let end = self.levels.len();
        (p, end)
    }

    /// Coset representative mapping the base point of `level` to `x`.
    fn transversal(&self, level: usize, x: u32) -> Perm {
        let lv = &self.levels[level];
        let mut path = Vec::new();
        let mut y = x;
        while y != lv.point {
            let j = lv.label[y as usize] as usize;
            path.push(j);
            y = self.strong_inv[j].apply(y);
        }
        let mut u = Perm::identity(self.degree);
        for &j in path.iter().rev() {
            u = u.mul(&self.strong[j]);
        }
        u
    }

    fn rebuild_orbit(&mut self, level: usize) {
        let lv = &mut self.levels[level];
        lv.label.clear();
        lv.label.resize(self.degree, NONE);
        lv.label[lv.point as usize] = ROOT;
        lv.orbit.clear();
        lv.orbit.push(lv.point);
        let mut i = 0;
        while i < lv.orbit.len() {
            let x = lv.orbit[i];
            for &j in &lv.gens {
                let y = self.strong[j].apply(x);
                if lv.label[y as usize] == NONE {
                    lv.label[y as usize] = j as u32;
                    lv.orbit.push(y);
                }
            }
            i += 1;
        }
    }

    fn push_strong(&mut self, p: Perm) -> usize {
        self.strong_inv.push(p.inverse());
        self.strong.push(p);
        self.strong.len() - 1
    }

    fn push_level(&mut self, point: u32) {
        self.levels.push(Level { point, gens: Vec::new(), label: Vec::new(), orbit: Vec::new() });
    }
}

/// Deterministic Schreier–Sims; base points are smallest moved points.
pub fn schreier_sims(degree: usize, gens: &[Perm]) -> Bsgs {
    let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    if gens.is_empty() {
        return Bsgs::empty(degree);
    }
    if let Some(b) = regular_chain(degree, &gens) {
        return b;
    }
    schreier_sims_generic(degree, &gens)
}

/// Schreier–Sims without the regular shortcut.
pub fn schreier_sims_generic(degree: usize, gens: &[Perm]) -> Bsgs {
    let mut b = Bsgs::empty(degree);
    b.semiregular = false;
    for g in gens.iter().filter(|g| !g.is_identity()) {
        let base = b.base();
        if base.iter().all(|&x| g.apply(x) == x) {
            b.push_level(g.first_moved_point().expect("nonidentity"));
        }
        let id = b.push_strong(g.clone());
        // Level 0 holds every generator.
        b.levels[0].gens.push(id);
        for l in 1..b.levels.len() {
            if b.levels[..l].iter().all(|lv| g.apply(lv.point) == lv.point) {
                b.levels[l].gens.push(id);
            }
        }
    }
    if b.levels.is_empty() {
        return Bsgs::empty(degree);
    }
    for l in 0..b.levels.len() {
        b.rebuild_orbit(l);
    }
    let mut i = b.levels.len() as isize - 1;
    while i >= 0 {
        match nontrivial_schreier_residue(&b, i as usize) {
            None => i -= 1,
            Some((h, j)) => {
                if j == b.levels.len() {
                    b.push_level(h.first_moved_point().expect("residue is nontrivial"));
                }
                let id = b.push_strong(h);
                for l in (i as usize + 1)..=j {
                    b.levels[l].gens.push(id);
                    b.rebuild_orbit(l);
                }
                i = j as isize;
            }
        }
    }
    b.semiregular = b.levels.len() == 1 && b.levels[0].orbit.len() == degree;
    b
}

fn nontrivial_schreier_residue(b: &Bsgs, i: usize) -> Option<(Perm, usize)> {
    let lv = &b.levels[i];
    for &x in &lv.orbit {
        let ux = b.transversal(i, x);
        for &j in &lv.gens {
            let y = b.strong[j].apply(x);
            if lv.label[y as usize] as usize == j && y != lv.point && b.strong_inv[j].apply(y) == x {
                // Tree edge: the Schreier generator is trivial.
                continue;
            }
            let g = ux.mul(&b.strong[j]).mul(&b.transversal(i, y).inverse());
            if g.is_identity() {
                continue;
            }
            let (h, stop) = b.sift(g, i + 1);
            if !h.is_identity() {
                return Some((h, stop));
            }
        }
    }
    None
}

/// One-level chain when `gens` generate a regular group: the group is
/// transitive and its centraliser in the symmetric group is transitive too.
fn regular_chain(degree: usize, gens: &[Perm]) -> Option<Bsgs> {
    let mut b = Bsgs::empty(degree);
    b.push_level(0);
    for g in gens {
        let id = b.push_strong(g.clone());
        b.levels[0].gens.push(id);
    }
    b.rebuild_orbit(0);
    if b.levels[0].orbit.len() != degree {
        return None;
    }
    let mut central: Vec<Perm> = Vec::new();
    let mut in_orbit = vec![false; degree];
    in_orbit[0] = true;
    let mut orbit = vec![0u32];
    while orbit.len() < degree {
        let y = (0..degree as u32).find(|&y| !in_orbit[y as usize]).expect("orbit incomplete");
        let phi = centralising_map(&b.levels[0], &b.strong, y)?;
        central.push(phi);
        let mut i = 0;
        while i < orbit.len() {
            for c in &central {
                let z = c.apply(orbit[i]);
                if !in_orbit[z as usize] {
                    in_orbit[z as usize] = true;
                    orbit.push(z);
                }
            }
            i += 1;
        }
    }
    Some(b)
}

/// The permutation commuting with every generator and sending the base
/// point to `y`, if one exists.
fn centralising_map(level: &Level, gens: &[Perm], y: u32) -> Option<Perm> {
    let degree = level.label.len();
    let mut phi = vec![NONE; degree];
    phi[level.point as usize] = y;
    for &x in &level.orbit {
        let fx = phi[x as usize];
        for g in gens {
            let (gx, gfx) = (g.apply(x) as usize, g.apply(fx));
            if phi[gx] == NONE {
                phi[gx] = gfx;
            } else if phi[gx] != gfx {
                return None;
            }
        }
    }
    Perm::from_images(phi).ok()
}

/// Subgroup of a semiregular group, grown one generator at a time.
struct SemiregularBuilder {
    degree: usize,
    gens: Vec<Perm>,
    in_orbit: Vec<bool>,
    orbit: Vec<u32>,
}

impl SemiregularBuilder {
    fn new(degree: usize) -> SemiregularBuilder {
        let mut in_orbit = vec![false; degree];
        if degree > 0 {
            in_orbit[0] = true;
        }
        SemiregularBuilder { degree, gens: Vec::new(), in_orbit, orbit: vec![0] }
    }

    /// Valid only for elements of the ambient semiregular group.
    fn contains(&self, p: &Perm) -> bool {
        self.in_orbit[p.apply(0) as usize]
    }

    fn add(&mut self, p: Perm) -> bool {
        if self.contains(&p) {
            return false;
        }
        self.gens.push(p);
        let mut i = 0;
        while i < self.orbit.len() {
            for g in &self.gens {
                let z = g.apply(self.orbit[i]);
                if !self.in_orbit[z as usize] {
                    self.in_orbit[z as usize] = true;
                    self.orbit.push(z);
                }
            }
            i += 1;
        }
        true
    }

    fn finish(self) -> Bsgs {
        if self.gens.is_empty() {
            return Bsgs::empty(self.degree);
        }
        let mut b = Bsgs::empty(self.degree);
        b.push_level(0);
        for g in self.gens {
            let id = b.push_strong(g);
            b.levels[0].gens.push(id);
        }
        b.rebuild_orbit(0);
        b
    }
}

/// Smallest normal subgroup of `g` containing `seeds` (assumed in `g`).
pub fn normal_closure(g: &Bsgs, seeds: &[Perm]) -> Bsgs {
    if g.semiregular {
        let mut h = SemiregularBuilder::new(g.degree);
        for s in seeds {
            h.add(s.clone());
        }
        let mut i = 0;
        while i < h.gens.len() {
            let x = h.gens[i].clone();
            for (s, s_inv) in g.strong.iter().zip(&g.strong_inv) {
                h.add(s_inv.mul(&x).mul(s));
            }
            i += 1;
        }
        return h.finish();
    }
    let mut gens: Vec<Perm> = seeds.iter().filter(|p| !p.is_identity()).cloned().collect();
    let mut h = schreier_sims_generic(g.degree, &gens);
    let mut i = 0;
    while i < gens.len() {
        let x = gens[i].clone();
        for (s, s_inv) in g.strong.iter().zip(&g.strong_inv) {
            let c = s_inv.mul(&x).mul(s);
            if !h.contains(&c) {
                gens.push(c);
                h = schreier_sims_generic(g.degree, &gens);
            }
        }
        i += 1;
    }
    h
}

/// `[h, k]` for generators `h` of `h_group` and `k` of `g`, closed normally in `g`.
pub fn commutator_subgroup(g: &Bsgs, h_group: &Bsgs) -> Bsgs {
    let seeds: Vec<Perm> = h_group
        .strong
        .iter()
        .flat_map(|h| g.strong.iter().map(move |k| h.commutator(k)))
        .filter(|c| !c.is_identity())
        .collect();
    normal_closure(g, &seeds)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcsReport {
    /// `|Γ_1|, |Γ_2|, ...`, ending at the first repeated or trivial term.
    pub orders: Vec<u64>,
    /// `r_i` with `|Γ_i| / |Γ_{i+1}| = 2^{r_i}`; `None` when not a power of 2.
    pub ranks: Vec<Option<u32>>,
    /// Whether `Γ_i / Γ_{i+1}` has exponent 2.
    pub elementary: Vec<bool>,
    /// The series reached the trivial group.
    pub nilpotent: bool,
}

fn two_rank(index: u64) -> Option<u32> {
    index.is_power_of_two().then(|| index.trailing_zeros())
}

/// Terms `Γ_1 = G, Γ_{k+1} = [Γ_k, G]` until the series stabilises, at most
/// `max_terms` of them when given.
pub fn lcs_terms(g: &Bsgs, max_terms: Option<usize>) -> Vec<Bsgs> {
    let mut terms = vec![g.clone()];
    loop {
        if max_terms.is_some_and(|m| terms.len() >= m) {
            break;
        }
        let last = terms.last().expect("nonempty");
        if last.is_trivial() {
            break;
        }
        let next = commutator_subgroup(g, last);
        if next.order() == last.order() {
            break;
        }
        terms.push(next);
    }
    terms
}

pub fn lower_central_series(g: &Bsgs) -> LcsReport {
    report_from_terms(&lcs_terms(g, None))
}

fn report_from_terms(terms: &[Bsgs]) -> LcsReport {
    let orders: Vec<u64> = terms.iter().map(Bsgs::order).collect();
    let mut ranks = Vec::new();
    let mut elementary = Vec::new();
    for w in terms.windows(2) {
        ranks.push(two_rank(w[0].order() / w[1].order()));
        elementary.push(w[0].strong.iter().all(|x| w[1].contains(&x.mul(x))));
    }
    let nilpotent = terms.last().is_some_and(Bsgs::is_trivial);
    LcsReport { orders, ranks, elementary, nilpotent }
}

/// Rank of the elementary abelian layer `Γ_k / Γ_{k+1}` (1-based `k`).
pub fn layer_rank(g: &Bsgs, k: usize) -> Result<u32, PermError> {
    assert!(k >= 1, "layers are numbered from 1");
    let terms = lcs_terms(g, Some(k + 1));
    let (upper, lower) = match terms.len() {
        len if len > k => (&terms[k - 1], terms[k].clone()),
        // Γ_k = Γ_{k+1}: the layer is trivial.
        len if len == k => return Ok(0),
        len => return Err(PermError::NoSuchTerm { k, len }),
    };
    if !upper.strong.iter().all(|x| lower.contains(&x.mul(x))) {
        return Err(PermError::NonElementary { k });
    }
    let index = upper.order() / lower.order();
    two_rank(index).ok_or(PermError::NotTwoPower { k, index })
}

/// BSGS of the group presented by `p` acting regularly on itself.
pub fn regular_bsgs(p: &Presentation, cfg: &EnumConfig) -> Result<(CosetTable, Bsgs), EnumError> {
    let t = todd_coxeter(p, &[], cfg)?;
    if t.status() == Status::Capped {
        return Err(EnumError::Capped { max_cosets: cfg.max_cosets, stats: t.stats() });
    }
    let gens: Vec<Perm> = (0..t.ngens()).map(|s| Perm::from_images(t.action(s).to_vec()).expect("complete table")).collect();
    let b = schreier_sims(t.index(), &gens);
    Ok((t, b))
}

/// Largest group order the isomorphism search accepts.
pub const ISO_MAX_ORDER: u64 = 4096;

/// Generator images in `h` defining an isomorphism from the group of `p`,
/// or `None` when there is none.
///
/// The orders are compared first; then images are chosen generator by
/// generator, pruning whenever a relator whose generators are all assigned
/// fails, and a full assignment is accepted when it generates `h`.
pub fn isomorphic(p: &Presentation, h: &FiniteGroupTable, cfg: &EnumConfig) -> Result<Option<Vec<Perm>>, PermError> {
    let (table, _) = regular_bsgs(p, cfg)?;
    if table.index() as u64 != h.order() {
        return Ok(None);
    }
    if h.order() > ISO_MAX_ORDER {
        return Err(PermError::TooLarge(h.order()));
    }
    let cayley = CayleyTable::new(h, h.order() as usize).map_err(|_| PermError::TooLarge(h.order()))?;
    let search = RelatorSearch::new(p, &cayley);
    let mut found = None;
    let mut budget = u64::MAX;
    let _ = search.run(&mut Vec::new(), &mut budget, &mut |images| {
        if cayley.generated_order(images) == cayley.order() {
            found = Some(images.iter().map(|&i| cayley.element(i).clone()).collect());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found)
}

/// Checks that `images` of the presentation generators define a bijective
/// homomorphism from the group enumerated in `table` (trivial subgroup).
pub fn verify_isomorphism(table: &CosetTable, images: &[Perm]) -> bool {
    if !table.is_complete() || images.len() != table.ngens() || images.is_empty() {
        return images.is_empty() && table.index() == 1;
    }
    let degree = images[0].degree();
    let mut f: Vec<Option<Perm>> = vec![None; table.index()];
    f[0] = Some(Perm::identity(degree));
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        let fc = f[c].clone().expect("visited");
        for (s, img) in images.iter().enumerate() {
            let d = table.action(s)[c] as usize;
            let fd = fc.mul(img);
            match &f[d] {
                None => {
                    f[d] = Some(fd);
                    queue.push_back(d);
                }
                Some(existing) if *existing != fd => return false,
                Some(_) => {}
            }
        }
    }
    let mut seen: Vec<Perm> = f.into_iter().map(|x| x.expect("table is connected")).collect();
    seen.sort();
    seen.dedup();
    seen.len() == table.index()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{closure, sym_generator, wreath_group};
    use crate::presentations::{class_truncate, minimal_cactus, thmd_quotient};

    fn regular(p: &Presentation) -> Bsgs {
        regular_bsgs(p, &EnumConfig::default()).unwrap().1
    }

    #[test]
    fn small_orders() {
        let s = |p, q| sym_generator(4, p, q).unwrap();
        assert_eq!(schreier_sims(4, &[s(1, 2), s(1, 3), s(1, 4)]).order(), 24);
        assert_eq!(schreier_sims(4, &[s(1, 2)]).order(), 2);
        assert_eq!(schreier_sims(4, &[]).order(), 1);
        assert_eq!(schreier_sims(8, wreath_group().gens()).order(), 32);
        let s7: Vec<Perm> = vec![sym_generator(7, 1, 2).unwrap(), Perm::parse_cycles("(1 2 3 4 5 6 7)", 7).unwrap()];
        assert_eq!(schreier_sims(7, &s7).order(), 5040);
    }

    #[test]
    fn membership() {
        let w = schreier_sims(8, wreath_group().gens());
        for e in closure(8, wreath_group().gens(), 64).unwrap() {
            assert!(w.contains(&e));
        }
        assert!(!w.contains(&Perm::parse_cycles("(1 2)", 8).unwrap()));
        assert_eq!(w.transversal_sizes().iter().product::<usize>(), 32);
    }

    #[test]
    fn regular_shortcut_matches_generic() {
        let d = FiniteGroupTable::dihedral(12);
        let fast = schreier_sims(d.degree(), d.gens());
        let slow = schreier_sims_generic(d.degree(), d.gens());
        assert!(fast.is_semiregular());
        assert_eq!(fast.order(), 24);
        assert_eq!(slow.order(), 24);
        // Transitive but not regular.
        let s5 = FiniteGroupTable::symmetric(5);
        assert!(!schreier_sims(5, s5.gens()).is_semiregular());
    }

    #[test]
    fn dihedral_series() {
        let d4 = FiniteGroupTable::dihedral(4);
        let b = schreier_sims(d4.degree(), d4.gens());
        assert_eq!(lower_central_series(&b).orders, vec![8, 2, 1]);
        let d8 = FiniteGroupTable::dihedral(8);
        let r = lower_central_series(&schreier_sims(d8.degree(), d8.gens()));
        assert_eq!(r.orders, vec![16, 4, 2, 1]);
        assert!(r.nilpotent && r.elementary.iter().all(|&e| e));
        // S3 is not nilpotent: the series stops at A3.
        let s3 = FiniteGroupTable::symmetric(3);
        let r = lower_central_series(&schreier_sims(3, s3.gens()));
        assert_eq!(r.orders, vec![6, 3]);
        assert!(!r.nilpotent);
    }

    #[test]
    fn d4_commutator_is_rotation_square() {
        let d4 = FiniteGroupTable::dihedral(4);
        let b = schreier_sims(d4.degree(), d4.gens());
        let ab = d4.gens()[0].mul(&d4.gens()[1]);
        let n = normal_closure(&b, &[ab.mul(&ab)]);
        assert_eq!(n.order(), 2);
        assert!(normal_closure(&b, &[Perm::identity(8)]).is_trivial());
    }

    #[test]
    fn wreath_series() {
        let b = schreier_sims(8, wreath_group().gens());
        let r = lower_central_series(&b);
        assert_eq!(r.orders, vec![32, 4, 1]);
        assert_eq!(r.ranks, vec![Some(3), Some(2)]);
    }

    #[test]
    fn normal_closure_matches_conjugate_closure() {
        let w = wreath_group();
        let b = schreier_sims(8, w.gens());
        let elems = closure(8, w.gens(), 64).unwrap();
        let seed = w.gens()[0].clone();
        let mut brute: Vec<Perm> = elems.iter().map(|g| seed.conjugate(g)).collect();
        brute.sort();
        brute.dedup();
        let expected = closure(8, &brute, 64).unwrap().len() as u64;
        assert_eq!(normal_closure(&b, &[seed]).order(), expected);
    }

    #[test]
    fn layer_ranks_of_small_quotients() {
        let b = regular(&thmd_quotient(4).unwrap());
        assert_eq!(layer_rank(&b, 1).unwrap(), 3);
        assert_eq!(layer_rank(&b, 2).unwrap(), 2);
        assert_eq!(layer_rank(&b, 3).unwrap(), 0);
        let q = regular(&class_truncate(&minimal_cactus(4).unwrap(), 3).unwrap());
        assert_eq!(q.order(), 256);
        assert_eq!(layer_rank(&q, 3).unwrap(), 3);
    }

    #[test]
    fn cyclic_layer_is_not_elementary() {
        let z4 = FiniteGroupTable::cyclic(4);
        let b = schreier_sims(4, z4.gens());
        assert_eq!(layer_rank(&b, 1), Err(PermError::NonElementary { k: 1 }));
    }

    #[test]
    fn isomorphism_search() {
        let cfg = EnumConfig::default();
        let p = thmd_quotient(4).unwrap();
        let images = isomorphic(&p, &wreath_group(), &cfg).unwrap().expect("witness");
        let (t, _) = regular_bsgs(&p, &cfg).unwrap();
        assert!(verify_isomorphism(&t, &images));
        let klein: Presentation = "< g1,g2 | g1^2, g2^2, g1*g2*g1^-1*g2^-1 >".parse().unwrap();
        assert_eq!(isomorphic(&klein, &FiniteGroupTable::cyclic(4), &cfg).unwrap(), None);
        assert!(isomorphic(&klein, &FiniteGroupTable::cyclic(2).direct_product(&FiniteGroupTable::cyclic(2)), &cfg)
            .unwrap()
            .is_some());
        assert_eq!(isomorphic(&klein, &FiniteGroupTable::cyclic(8), &cfg).unwrap(), None);
    }
}
