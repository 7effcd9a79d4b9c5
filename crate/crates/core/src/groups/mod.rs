//! Concrete groups with decidable equality: permutation groups, finite and
//! infinite dihedral groups, and `(Z2 * Z2) x Z2`.

mod cayley;
mod dihedral;
mod perm;

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

pub use cayley::{CayleyTable, RelatorSearch};
pub use dihedral::{freeprod_reduce, DihedralElem, DihedralOrder, FreeProdKind, FreeProdZ2Elem};
pub use perm::{sym_generator, Perm};

use crate::cosets::CosetTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("images do not form a bijection")]
    NotBijection,
    #[error("point {point} outside 1..={degree}")]
    PointOutOfRange { point: u32, degree: usize },
    #[error("interval [{p},{q}] invalid on {n} points")]
    Interval { n: u32, p: u32, q: u32 },
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("mismatched groups: {0}")]
    Mismatch(String),
    #[error("unknown letter {0:?}")]
    UnknownLetter(char),
    #[error("coset table is not complete")]
    IncompleteTable,
    #[error("coset table is relative to a nontrivial subgroup")]
    NontrivialSubgroup,
    #[error("generators of degree {found} in a group of degree {expected}")]
    Degree { expected: usize, found: usize },
    #[error("regular representation is not transitive: orbit {orbit} of {degree}")]
    NotTransitive { orbit: usize, degree: usize },
    #[error("element enumeration exceeded {0} elements")]
    TooLarge(usize),
}

/// A finite permutation group given by generators, with its order.
///
/// `regular` is set when the group acts regularly (order equals degree and
/// the action is transitive), as for the output of
/// [`regular_representation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    degree: usize,
    order: u64,
    gens: Vec<Perm>,
    regular: bool,
}

impl FiniteGroupTable {
    /// Group generated by `gens` on `degree` points; the order comes from
    /// Schreier–Sims.
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<FiniteGroupTable, GroupError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(GroupError::Degree { expected: degree, found: g.degree() });
            }
        }
        let order = crate::permstruct::schreier_sims(degree, &gens).order();
        let regular = order == degree as u64 && orbit_size(degree, &gens, 0) == degree;
        Ok(FiniteGroupTable { degree, order, gens, regular })
    }

    /// Group acting regularly on `degree` points; validated by transitivity.
    pub fn from_regular(degree: usize, gens: Vec<Perm>) -> Result<FiniteGroupTable, GroupError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(GroupError::Degree { expected: degree, found: g.degree() });
            }
        }
        let orbit = orbit_size(degree, &gens, 0);
        if orbit != degree {
            return Err(GroupError::NotTransitive { orbit, degree });
        }
        Ok(FiniteGroupTable { degree, order: degree as u64, gens, regular: true })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    /// All elements, breadth first from the identity by right multiplication
    /// with generators.
    pub fn elements(&self, cap: usize) -> Result<Vec<Perm>, GroupError> {
        closure(self.degree, &self.gens, cap)
    }

    /// `self x other` acting on disjoint point sets.
    pub fn direct_product(&self, other: &FiniteGroupTable) -> FiniteGroupTable {
        let total = self.degree + other.degree;
        let gens = self
            .gens
            .iter()
            .map(|g| g.shifted(0, total))
            .chain(other.gens.iter().map(|g| g.shifted(self.degree, total)))
            .collect();
        FiniteGroupTable { degree: total, order: self.order * other.order, gens, regular: false }
    }

    pub fn cyclic(n: usize) -> FiniteGroupTable {
        let images = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        FiniteGroupTable::from_regular(n, vec![Perm::from_images_unchecked(images)]).expect("cycle is transitive")
    }

    /// `S_n` generated by a transposition and an n-cycle.
    pub fn symmetric(n: usize) -> FiniteGroupTable {
        if n < 2 {
            return FiniteGroupTable { degree: n, order: 1, gens: Vec::new(), regular: n == 1 };
        }
        let t = Perm::from_cycles(n, &[&[1, 2]]).expect("valid");
        let cycle: Vec<u32> = (1..=n as u32).collect();
        let c = Perm::from_cycles(n, &[&cycle]).expect("valid");
        FiniteGroupTable::new(n, vec![t, c]).expect("same degree")
    }

    /// Regular representation of `D_m` (order `2m`) with generators `a`, `b`.
    pub fn dihedral(m: u64) -> FiniteGroupTable {
        let d = DihedralOrder::Finite(m);
        let index = |x: &DihedralElem| (u64::from(x.is_reflection()) * m + x.shift() as u64) as u32;
        let elems: Vec<DihedralElem> = (0..2 * m)
            .map(|i| DihedralElem::new(d, i >= m, (i % m) as i64))
            .collect();
        let right = |g: DihedralElem| {
            Perm::from_images_unchecked(elems.iter().map(|x| index(&x.mul(&g).expect("same group"))).collect())
        };
        let gens = vec![right(DihedralElem::a(d)), right(DihedralElem::b(d))];
        FiniteGroupTable::from_regular(2 * m as usize, gens).expect("a and b generate D_m")
    }

    /// Regular representation of the quaternion group `Q8` with generators `i`, `j`.
    pub fn quaternion() -> FiniteGroupTable {
        // Elements (sign, unit) with unit 0..4 = 1, i, j, k; index = 4*sign + unit.
        let unit_mul = |x: usize, y: usize| -> (bool, usize) {
            const T: [[(bool, usize); 4]; 4] = [
                [(false, 0), (false, 1), (false, 2), (false, 3)],
                [(false, 1), (true, 0), (false, 3), (true, 2)],
                [(false, 2), (true, 3), (true, 0), (false, 1)],
                [(false, 3), (false, 2), (true, 1), (true, 0)],
            ];
            T[x][y]
        };
        let right = |g: usize| {
            let images = (0..8)
                .map(|e| {
                    let (s, u) = (e / 4 == 1, e % 4);
                    let (s2, u2) = unit_mul(u, g);
                    (4 * usize::from(s ^ s2) + u2) as u32
                })
                .collect();
            Perm::from_images_unchecked(images)
        };
        FiniteGroupTable::from_regular(8, vec![right(1), right(2)]).expect("i and j generate Q8")
    }
}

fn orbit_size(degree: usize, gens: &[Perm], start: u32) -> usize {
    if degree == 0 {
        return 0;
    }
    let mut seen = vec![false; degree];
    seen[start as usize] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count
}

/// Breadth-first element enumeration; errors once more than `cap` elements appear.
pub fn closure(degree: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>, GroupError> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = out[i].mul(g);
            if seen.insert(y.clone()) {
                if out.len() >= cap {
                    return Err(GroupError::TooLarge(cap));
                }
                out.push(y);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// `Z2^2 wr Z2` on 8 points: base `<(1 2)(3 4), (1 3)(2 4)>` and
/// `<(5 6)(7 8), (5 7)(6 8)>`, top `(1 5)(2 6)(3 7)(4 8)`.
pub fn wreath_group() -> FiniteGroupTable {
    let p = |s: &str| Perm::parse_cycles(s, 8).expect("literal");
    let gens = vec![p("(1 2)(3 4)"), p("(1 3)(2 4)"), p("(5 6)(7 8)"), p("(5 7)(6 8)"), p("(1 5)(2 6)(3 7)(4 8)")];
    FiniteGroupTable::new(8, gens).expect("degree 8")
}

/// Each presentation generator acting on the cosets of the trivial subgroup.
pub fn regular_representation(table: &CosetTable) -> Result<FiniteGroupTable, GroupError> {
    if !table.is_complete() {
        return Err(GroupError::IncompleteTable);
    }
    if !table.subgroup().is_empty() {
        return Err(GroupError::NontrivialSubgroup);
    }
    let gens = (0..table.ngens()).map(|s| Perm::from_images_unchecked(table.action(s).to_vec())).collect();
    FiniteGroupTable::from_regular(table.index(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wreath_order_by_closure() {
        let w = wreath_group();
        assert_eq!(w.order(), 32);
        assert_eq!(w.elements(1000).unwrap().len(), 4 * 4 * 2);
        assert!(!w.is_regular());
    }

    #[test]
    fn small_named_groups() {
        assert_eq!(FiniteGroupTable::dihedral(4).order(), 8);
        assert_eq!(FiniteGroupTable::dihedral(4).elements(100).unwrap().len(), 8);
        assert_eq!(FiniteGroupTable::dihedral(1).elements(100).unwrap().len(), 2);
        assert_eq!(FiniteGroupTable::quaternion().elements(100).unwrap().len(), 8);
        assert_eq!(FiniteGroupTable::symmetric(4).order(), 24);
        let z2z2 = FiniteGroupTable::cyclic(2).direct_product(&FiniteGroupTable::cyclic(2));
        assert_eq!(z2z2.elements(10).unwrap().len(), 4);
        assert!(closure(8, wreath_group().gens(), 10).is_err());
    }

    #[test]
    fn quaternion_has_one_involution() {
        let inv = FiniteGroupTable::quaternion()
            .elements(8)
            .unwrap()
            .into_iter()
            .filter(|g| g.order() == 2)
            .count();
        assert_eq!(inv, 1);
    }

    #[test]
    fn regular_needs_transitivity() {
        let t = Perm::parse_cycles("(1 2)", 4).unwrap();
        assert!(matches!(FiniteGroupTable::from_regular(4, vec![t]), Err(GroupError::NotTransitive { .. })));
    }
}
