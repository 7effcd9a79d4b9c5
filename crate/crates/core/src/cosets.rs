//! Todd–Coxeter coset enumeration.
//!
//! Two strategies share one table representation:
//!
//! * HLT: process live cosets in order, scanning every relator from each and
//!   defining cosets as needed, then filling the row. When the table is full
//!   a lookahead pass scans all relators without defining anything to
//!   surface coincidences, and dead rows are compacted away.
//! * Felsch: always define the first undefined entry, then chase all
//!   deductions through every relator rotation before defining again.
//!
//! Every generator gets separate forward and inverse columns. Coincidences
//! are processed with a union-find queue that keeps the smaller coset.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::presentations::Presentation;
use crate::words::{Gen, Word};

const NONE: u32 = u32::MAX;

/// Default cap on table rows when `CACTUS_MAX_COSETS` is unset.
pub const DEFAULT_MAX_COSETS: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("enumeration capped at {max_cosets} cosets ({stats})")]
    Capped { max_cosets: usize, stats: EnumStats },
    #[error("subgroup generator uses g{0}, which is not a generator of the presentation")]
    UnknownGenerator(u32),
    #[error("unknown strategy {0:?}")]
    Strategy(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Hlt,
    Felsch,
}

impl FromStr for Strategy {
    type Err = EnumError;

    fn from_str(s: &str) -> Result<Strategy, EnumError> {
        match s.to_ascii_lowercase().as_str() {
            "hlt" => Ok(Strategy::Hlt),
            "felsch" => Ok(Strategy::Felsch),
            _ => Err(EnumError::Strategy(s.to_string())),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Hlt => "hlt",
            Strategy::Felsch => "felsch",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnumConfig {
    /// Largest number of table rows (live and not yet reclaimed) ever held.
    pub max_cosets: usize,
    pub strategy: Strategy,
    /// Compact when this fraction of rows is dead.
    pub compaction_threshold: f64,
}

impl EnumConfig {
    pub fn with_strategy(strategy: Strategy) -> EnumConfig {
        EnumConfig { strategy, ..EnumConfig::default() }
    }

    pub fn with_max_cosets(mut self, max_cosets: usize) -> EnumConfig {
        self.max_cosets = max_cosets.max(1);
        self
    }
}

impl Default for EnumConfig {
    /// HLT; the cap honours `CACTUS_MAX_COSETS`.
    fn default() -> EnumConfig {
        let max_cosets = std::env::var("CACTUS_MAX_COSETS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&m| m >= 1)
            .unwrap_or(DEFAULT_MAX_COSETS);
        EnumConfig { max_cosets, strategy: Strategy::Hlt, compaction_threshold: 0.5 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumStats {
    pub live: usize,
    /// Cosets ever defined, including coset 1.
    pub defined: usize,
    /// Cosets killed by coincidences.
    pub deleted: usize,
    /// Peak number of live cosets.
    pub max_live: usize,
}

impl fmt::Display for EnumStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "live {}, defined {}, deleted {}, max live {}", self.live, self.defined, self.deleted, self.max_live)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Complete,
    Capped,
}

/// Result of an enumeration. Coset 0 (printed as 1) is the subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    gens: Vec<Gen>,
    subgroup: Vec<Word>,
    index: usize,
    forward: Vec<Vec<u32>>,
    backward: Vec<Vec<u32>>,
    status: Status,
    stats: EnumStats,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn stats(&self) -> EnumStats {
        self.stats
    }

    pub fn subgroup(&self) -> &[Word] {
        &self.subgroup
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    /// Coset action of the generator in `slot` (empty when capped).
    pub fn action(&self, slot: usize) -> &[u32] {
        &self.forward[slot]
    }

    pub fn inverse_action(&self, slot: usize) -> &[u32] {
        &self.backward[slot]
    }

    /// `coset * w`, or `None` if the word leaves the alphabet.
    pub fn apply_word(&self, coset: u32, w: &Word) -> Option<u32> {
        let mut c = coset;
        for l in w.letters() {
            let s = self.gens.iter().position(|g| *g == l.gen)?;
            c = if l.inverse { self.backward[s][c as usize] } else { self.forward[s][c as usize] };
        }
        Some(c)
    }

    /// Rows are cosets (1-based), columns the generator actions.
    pub fn to_csv(&self, names: &[String]) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["coset".to_string()];
        header.extend(names.iter().cloned());
        w.write_record(&header).expect("in-memory csv");
        for c in 0..self.index {
            let mut row = vec![(c + 1).to_string()];
            row.extend(self.forward.iter().map(|col| (col[c] + 1).to_string()));
            w.write_record(&row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup_gens`.
///
/// Running out of room yields a table with [`Status::Capped`] and the
/// counters at the point of failure; a capped table has no actions.
pub fn todd_coxeter(p: &Presentation, subgroup_gens: &[Word], cfg: &EnumConfig) -> Result<CosetTable, EnumError> {
    let gens = p.gens();
    let to_cols = |w: &Word| -> Result<Vec<usize>, EnumError> {
        w.letters()
            .iter()
            .map(|l| {
                let s = p.alphabet().slot(l.gen).ok_or(EnumError::UnknownGenerator(l.gen.0))?;
                Ok(2 * s + usize::from(l.inverse))
            })
            .collect()
    };
    let mut relators: Vec<Vec<usize>> = p.relators().iter().map(to_cols).collect::<Result<_, _>>()?;
    relators.retain(|r| !r.is_empty());
    relators.sort_by_key(Vec::len);
    let subgroup: Vec<Vec<usize>> = subgroup_gens.iter().map(to_cols).collect::<Result<_, _>>()?;

    let mut e = Enumerator::new(gens.len(), relators, cfg);
    let outcome = match cfg.strategy {
        Strategy::Hlt => e.run_hlt(&subgroup),
        Strategy::Felsch => e.run_felsch(&subgroup),
    };
    let stats = e.stats();
    let status = match outcome {
        Ok(()) => Status::Complete,
        Err(Full) => Status::Capped,
    };
    let (forward, backward) = if status == Status::Complete { e.export() } else { (Vec::new(), Vec::new()) };
    Ok(CosetTable {
        gens,
        subgroup: subgroup_gens.to_vec(),
        index: stats.live,
        forward,
        backward,
        status,
        stats,
    })
}

/// Order of the presented group, by enumerating over the trivial subgroup.
pub fn group_order(p: &Presentation, cfg: &EnumConfig) -> Result<u64, EnumError> {
    let t = todd_coxeter(p, &[], cfg)?;
    match t.status {
        Status::Complete => Ok(t.index as u64),
        Status::Capped => Err(EnumError::Capped { max_cosets: cfg.max_cosets, stats: t.stats }),
    }
}

/// Raised internally when no row can be allocated.
struct Full;

struct Enumerator {
    ncols: usize,
    relators: Vec<Vec<usize>>,
    /// `rotations[col]`: every rotation of every relator and relator inverse
    /// that starts with `col`.
    rotations: Vec<Vec<Vec<usize>>>,
    table: Vec<u32>,
    parent: Vec<u32>,
    rows: usize,
    live: usize,
    queue: Vec<u32>,
    deductions: Vec<(u32, usize)>,
    track_deductions: bool,
    cursor: usize,
    cap: usize,
    compaction_threshold: f64,
    defined: usize,
    deleted: usize,
    max_live: usize,
}

#[inline]
fn inv(col: usize) -> usize {
    col ^ 1
}

impl Enumerator {
    fn new(ngens: usize, relators: Vec<Vec<usize>>, cfg: &EnumConfig) -> Enumerator {
        let ncols = 2 * ngens;
        let mut e = Enumerator {
            ncols,
            relators,
            rotations: Vec::new(),
            table: vec![NONE; ncols.max(1)],
            parent: vec![0],
            rows: 1,
            live: 1,
            queue: Vec::new(),
            deductions: Vec::new(),
            track_deductions: false,
            cursor: 0,
            cap: cfg.max_cosets.max(1),
            compaction_threshold: cfg.compaction_threshold,
            defined: 1,
            deleted: 0,
            max_live: 1,
        };
        if ncols == 0 {
            e.table.clear();
        }
        e
    }

    fn stats(&self) -> EnumStats {
        EnumStats { live: self.live, defined: self.defined, deleted: self.deleted, max_live: self.max_live }
    }

    #[inline]
    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.ncols + col]
    }

    #[inline]
    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.ncols + col] = d;
    }

    #[inline]
    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn define(&mut self, c: u32, col: usize) -> Result<u32, Full> {
        if self.rows >= self.cap {
            return Err(Full);
        }
        let d = self.rows as u32;
        self.rows += 1;
        self.table.extend(std::iter::repeat_n(NONE, self.ncols));
        self.parent.push(d);
        self.live += 1;
        self.defined += 1;
        self.max_live = self.max_live.max(self.live);
        self.set(c, col, d);
        self.set(d, inv(col), c);
        if self.track_deductions {
            self.deductions.push((c, col));
        }
        Ok(d)
    }

    fn merge(&mut self, k: u32, l: u32) {
        let a = self.rep(k);
        let b = self.rep(l);
        if a != b {
            let (keep, kill) = if a < b { (a, b) } else { (b, a) };
            self.parent[kill as usize] = keep;
            self.queue.push(kill);
            self.live -= 1;
            self.deleted += 1;
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut qi = 0;
        while qi < self.queue.len() {
            let g = self.queue[qi];
            qi += 1;
            for x in 0..self.ncols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                self.set(d, inv(x), NONE);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mx = self.get(mu, x);
                if mx != NONE {
                    self.merge(nu, mx);
                    continue;
                }
                let nx = self.get(nu, inv(x));
                if nx != NONE {
                    self.merge(mu, nx);
                } else {
                    self.set(mu, x, nu);
                    self.set(nu, inv(x), mu);
                    if self.track_deductions {
                        self.deductions.push((mu, x));
                    }
                }
            }
        }
        self.queue.clear();
    }

    /// Scans `w` from `c`, closing the cycle by a deduction or coincidence
    /// when possible. With `fill`, missing entries are defined.
    fn scan(&mut self, c: u32, w: &[usize], fill: bool) -> Result<(), Full> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len());
        loop {
            while i < j {
                let n = self.get(f, w[i]);
                if n == NONE {
                    break;
                }
                f = n;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let n = self.get(b, inv(w[j - 1]));
                if n == NONE {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, inv(w[i]), f);
                if self.track_deductions {
                    self.deductions.push((f, w[i]));
                }
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    /// Renumbers live rows in order and drops dead ones.
    fn compact(&mut self) {
        debug_assert!(self.queue.is_empty());
        if self.live == self.rows {
            return;
        }
        let mut new_index = vec![NONE; self.rows];
        let mut next = 0u32;
        for (c, slot) in new_index.iter_mut().enumerate() {
            if self.is_live(c) {
                *slot = next;
                next += 1;
            }
        }
        let mut cursor = self.cursor;
        while cursor < self.rows && !self.is_live(cursor) {
            cursor += 1;
        }
        let new_cursor = if cursor < self.rows { new_index[cursor] as usize } else { next as usize };
        let mut table = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..self.rows {
            if new_index[c] == NONE {
                continue;
            }
            for x in 0..self.ncols {
                let d = self.table[c * self.ncols + x];
                table.push(if d == NONE { NONE } else { new_index[d as usize] });
            }
        }
        self.deductions.retain(|(c, _)| new_index[*c as usize] != NONE);
        for (c, _) in &mut self.deductions {
            *c = new_index[*c as usize];
        }
        self.table = table;
        self.rows = next as usize;
        self.parent = (0..next).collect();
        self.cursor = new_cursor;
    }

    fn maybe_compact(&mut self) {
        let dead = self.rows - self.live;
        if dead > 0 && dead as f64 >= self.compaction_threshold * self.rows as f64 {
            self.compact();
        }
    }

    /// Scans every relator from every live coset without defining.
    fn lookahead(&mut self) {
        let relators = std::mem::take(&mut self.relators);
        for c in 0..self.rows {
            for r in &relators {
                if !self.is_live(c) {
                    break;
                }
                let _ = self.scan(c as u32, r, false);
            }
        }
        self.relators = relators;
    }

    /// Makes room for `needed` fresh rows, or reports the table full.
    fn reserve(&mut self, needed: usize) -> Result<(), Full> {
        if self.rows + needed <= self.cap {
            return Ok(());
        }
        self.compact();
        if self.rows + needed <= self.cap {
            return Ok(());
        }
        self.lookahead();
        self.compact();
        if self.rows + needed <= self.cap || (needed > 0 && self.rows < self.cap && self.live == self.rows) {
            // A partial reservation still lets HLT make progress one row at a time.
            if self.rows + needed <= self.cap {
                return Ok(());
            }
        }
        Err(Full)
    }

    fn run_hlt(&mut self, subgroup: &[Vec<usize>]) -> Result<(), Full> {
        for w in subgroup {
            self.reserve(w.len())?;
            self.scan(0, w, true)?;
        }
        self.cursor = 0;
        while self.cursor < self.rows {
            let c = self.cursor;
            if self.is_live(c) {
                for k in 0..self.relators.len() {
                    let need = self.relators[k].len();
                    self.reserve(need)?;
                    let c = self.cursor;
                    if !self.is_live(c) {
                        break;
                    }
                    let r = std::mem::take(&mut self.relators[k]);
                    let res = self.scan(c as u32, &r, true);
                    self.relators[k] = r;
                    res?;
                }
                let c = self.cursor;
                if self.is_live(c) {
                    for x in 0..self.ncols {
                        if self.get(c as u32, x) == NONE {
                            self.reserve(1)?;
                            let c = self.cursor;
                            self.define(c as u32, x)?;
                        }
                    }
                }
            }
            self.cursor += 1;
            self.maybe_compact();
        }
        self.compact();
        Ok(())
    }

    fn build_rotations(&mut self) {
        let mut rotations: Vec<Vec<Vec<usize>>> = vec![Vec::new(); self.ncols];
        let mut seen = std::collections::HashSet::new();
        for r in &self.relators {
            let rinv: Vec<usize> = r.iter().rev().map(|&x| inv(x)).collect();
            for w in [r, &rinv] {
                for s in 0..w.len() {
                    let rot: Vec<usize> = w[s..].iter().chain(&w[..s]).copied().collect();
                    if seen.insert(rot.clone()) {
                        rotations[rot[0]].push(rot);
                    }
                }
            }
        }
        self.rotations = rotations;
    }

    fn process_deductions(&mut self) {
        let rotations = std::mem::take(&mut self.rotations);
        while let Some((c, x)) = self.deductions.pop() {
            if !self.is_live(c as usize) {
                continue;
            }
            for w in &rotations[x] {
                if !self.is_live(c as usize) {
                    break;
                }
                let _ = self.scan(c, w, false);
            }
            let c = self.rep(c);
            let d = self.get(c, x);
            if d == NONE {
                continue;
            }
            let d = self.rep(d);
            for w in &rotations[inv(x)] {
                if !self.is_live(d as usize) {
                    break;
                }
                let _ = self.scan(d, w, false);
            }
        }
        self.rotations = rotations;
    }

    fn run_felsch(&mut self, subgroup: &[Vec<usize>]) -> Result<(), Full> {
        self.build_rotations();
        self.track_deductions = true;
        for w in subgroup {
            self.reserve(w.len())?;
            self.scan(0, w, true)?;
            self.process_deductions();
        }
        // Every relator must hold at coset 0 even before it is reached.
        self.process_deductions();
        self.cursor = 0;
        loop {
            while self.cursor < self.rows
                && (!self.is_live(self.cursor) || (0..self.ncols).all(|x| self.get(self.cursor as u32, x) != NONE))
            {
                self.cursor += 1;
            }
            if self.cursor >= self.rows {
                break;
            }
            let c = self.cursor as u32;
            let x = (0..self.ncols).find(|&x| self.get(c, x) == NONE).expect("row has a gap");
            if self.rows >= self.cap {
                self.compact();
                if self.rows >= self.cap {
                    return Err(Full);
                }
            }
            let c = self.cursor as u32;
            self.define(c, x)?;
            self.process_deductions();
            self.maybe_compact();
        }
        self.compact();
        // Felsch only closes relators through deductions; confirm at the end.
        for c in 0..self.rows {
            for k in 0..self.relators.len() {
                let r = std::mem::take(&mut self.relators[k]);
                let _ = self.scan(c as u32, &r, false);
                self.relators[k] = r;
            }
        }
        debug_assert_eq!(self.live, self.rows);
        Ok(())
    }

    fn export(&self) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
        let ngens = self.ncols / 2;
        let mut fwd = vec![Vec::with_capacity(self.rows); ngens];
        let mut bwd = vec![Vec::with_capacity(self.rows); ngens];
        for c in 0..self.rows {
            for s in 0..ngens {
                fwd[s].push(self.table[c * self.ncols + 2 * s]);
                bwd[s].push(self.table[c * self.ncols + 2 * s + 1]);
            }
        }
        (fwd, bwd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{class_truncate, minimal_cactus, thmd_quotient};

    fn custom(k: u32, rels: &[&str]) -> Presentation {
        Presentation::custom(k, rels.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    fn both(p: &Presentation) -> (u64, u64) {
        let h = group_order(p, &EnumConfig::with_strategy(Strategy::Hlt)).unwrap();
        let f = group_order(p, &EnumConfig::with_strategy(Strategy::Felsch)).unwrap();
        (h, f)
    }

    #[test]
    fn tiny_groups() {
        assert_eq!(both(&custom(1, &["g1^2"])), (2, 2));
        assert_eq!(both(&custom(2, &["g1^2", "g2^2", "g1*g2*g1*g2*g1*g2*g1*g2"])), (8, 8));
        assert_eq!(both(&custom(0, &[])), (1, 1));
        // <a, b | a^3, b^2, (ab)^2> = S3
        assert_eq!(both(&custom(2, &["g1^3", "g2^2", "g1*g2*g1*g2"])), (6, 6));
        // <a, b | a^2, b^3, (ab)^5> = A5
        assert_eq!(both(&custom(2, &["g1^2", "g2^3", "g1*g2*g1*g2*g1*g2*g1*g2*g1*g2"])), (60, 60));
    }

    #[test]
    fn collapse_to_trivial() {
        // <a, b | a b a^-1 b^-2, b a b^-1 a^-2> is trivial.
        assert_eq!(both(&custom(2, &["g1*g2*g1^-1*g2^-2", "g2*g1*g2^-1*g1^-2"])), (1, 1));
    }

    #[test]
    fn tables_are_closed_permutations() {
        let p = thmd_quotient(4).unwrap();
        for strategy in [Strategy::Hlt, Strategy::Felsch] {
            let t = todd_coxeter(&p, &[], &EnumConfig::with_strategy(strategy)).unwrap();
            assert_eq!(t.index(), 32);
            for s in 0..t.ngens() {
                for c in 0..t.index() {
                    let d = t.action(s)[c];
                    assert_eq!(t.inverse_action(s)[d as usize], c as u32);
                }
            }
            for r in p.relators() {
                for c in 0..t.index() as u32 {
                    assert_eq!(t.apply_word(c, r), Some(c));
                }
            }
        }
    }

    #[test]
    fn subgroup_index() {
        let p = thmd_quotient(4).unwrap();
        for strategy in [Strategy::Hlt, Strategy::Felsch] {
            let t = todd_coxeter(&p, &[Word::gen(2)], &EnumConfig::with_strategy(strategy)).unwrap();
            assert_eq!(t.index(), 16);
            assert_eq!(t.apply_word(0, &Word::gen(2)), Some(0));
        }
        assert_eq!(
            todd_coxeter(&p, &[Word::gen(9)], &EnumConfig::default()),
            Err(EnumError::UnknownGenerator(9))
        );
    }

    #[test]
    fn cap_is_reported() {
        let p = class_truncate(&minimal_cactus(4).unwrap(), 2).unwrap();
        for strategy in [Strategy::Hlt, Strategy::Felsch] {
            let cfg = EnumConfig::with_strategy(strategy).with_max_cosets(10);
            let t = todd_coxeter(&p, &[], &cfg).unwrap();
            assert_eq!(t.status(), Status::Capped);
            assert!(matches!(group_order(&p, &cfg), Err(EnumError::Capped { max_cosets: 10, .. })));
        }
    }

    #[test]
    fn deterministic() {
        let p = class_truncate(&minimal_cactus(4).unwrap(), 2).unwrap();
        let cfg = EnumConfig::default();
        assert_eq!(todd_coxeter(&p, &[], &cfg).unwrap(), todd_coxeter(&p, &[], &cfg).unwrap());
    }

    #[test]
    fn csv_dump() {
        let t = todd_coxeter(&custom(1, &["g1^2"]), &[], &EnumConfig::default()).unwrap();
        assert_eq!(t.to_csv(&["g1".into()]), "coset,g1\n1,2\n2,1\n");
    }
}
