use std::collections::{HashMap, VecDeque};
use std::ops::ControlFlow;

use super::{FiniteGroupTable, GroupError, Perm};
use crate::presentations::Presentation;

/// Multiplication table of a small finite group; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    elements: Vec<Perm>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl CayleyTable {
    pub fn new(group: &FiniteGroupTable, cap: usize) -> Result<CayleyTable, GroupError> {
        let elements = group.elements(cap)?;
        let index: HashMap<&Perm, u32> = elements.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                mul[i * n + j] = index[&a.mul(b)];
            }
        }
        let mut inv = vec![0u32; n];
        for (i, e) in elements.iter().enumerate() {
            inv[i] = index[&e.inverse()];
        }
        Ok(CayleyTable { elements, mul, inv })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: u32) -> &Perm {
        &self.elements[i as usize]
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[x as usize * self.elements.len() + y as usize]
    }

    #[inline]
    pub fn inv(&self, x: u32) -> u32 {
        self.inv[x as usize]
    }

    /// Size of the subgroup generated by `gens`.
    pub fn generated_order(&self, gens: &[u32]) -> usize {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0u32]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count
    }
}

/// Depth-first search over generator images in a [`CayleyTable`] that
/// satisfy every relator. Each relator is tested as soon as all of its
/// generators have images.
pub struct RelatorSearch<'a> {
    table: &'a CayleyTable,
    /// `checks[s]`: relators, as (slot, inverse) letters, whose largest slot is `s`.
    checks: Vec<Vec<Vec<(usize, bool)>>>,
}

impl<'a> RelatorSearch<'a> {
    pub fn new(p: &Presentation, table: &'a CayleyTable) -> RelatorSearch<'a> {
        let mut checks = vec![Vec::new(); p.ngens()];
        for r in p.relators() {
            let letters: Vec<(usize, bool)> = r
                .letters()
                .iter()
                .map(|l| (p.alphabet().slot(l.gen).expect("relator over the presentation alphabet"), l.inverse))
                .collect();
            if let Some(last) = letters.iter().map(|(s, _)| *s).max() {
                checks[last].push(letters);
            }
        }
        RelatorSearch { table, checks }
    }

    pub fn ngens(&self) -> usize {
        self.checks.len()
    }

    fn eval(&self, images: &[u32], w: &[(usize, bool)]) -> u32 {
        w.iter().fold(0u32, |acc, &(s, inverse)| {
            let x = if inverse { self.table.inv(images[s]) } else { images[s] };
            self.table.mul(acc, x)
        })
    }

    /// Whether the newest image in `images` keeps every decided relator trivial.
    pub fn consistent(&self, images: &[u32]) -> bool {
        let slot = images.len() - 1;
        self.checks[slot].iter().all(|r| self.eval(images, r) == 0)
    }

    /// Visits every full assignment extending `prefix`; `visit` may stop
    /// the search. `budget` counts visited nodes and stops at zero.
    pub fn run<F>(&self, prefix: &mut Vec<u32>, budget: &mut u64, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        if prefix.len() == self.ngens() {
            return visit(prefix);
        }
        for candidate in 0..self.table.order() as u32 {
            if *budget == 0 {
                return ControlFlow::Break(());
            }
            *budget -= 1;
            prefix.push(candidate);
            if self.consistent(prefix) {
                self.run(prefix, budget, visit)?;
            }
            prefix.pop();
        }
        ControlFlow::Continue(())
    }
}
