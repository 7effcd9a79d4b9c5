use std::fmt;
use std::str::FromStr;

use super::GroupError;

/// `D_m = <a, b | a^2, b^2, (ab)^m>` of order `2m`, or the infinite
/// dihedral group `Z2 * Z2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DihedralOrder {
    Finite(u64),
    Infinite,
}

impl fmt::Display for DihedralOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DihedralOrder::Finite(m) => write!(f, "D{m}"),
            DihedralOrder::Infinite => f.write_str("Z2*Z2"),
        }
    }
}

/// Normal form `a^e (ab)^k`, `e in {0, 1}`; `k` is reduced mod `m` in the
/// finite case. Here `b = a (ab)`, and `(ab)^k a = a (ab)^-k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DihedralElem {
    order: DihedralOrder,
    reflection: bool,
    shift: i64,
}

impl DihedralElem {
    pub fn new(order: DihedralOrder, reflection: bool, shift: i64) -> DihedralElem {
        let shift = match order {
            DihedralOrder::Finite(m) => {
                assert!(m >= 1, "D_0 is not a group");
                shift.rem_euclid(m as i64)
            }
            DihedralOrder::Infinite => shift,
        };
        DihedralElem { order, reflection, shift }
    }

    pub fn identity(order: DihedralOrder) -> DihedralElem {
        DihedralElem::new(order, false, 0)
    }

    pub fn a(order: DihedralOrder) -> DihedralElem {
        DihedralElem::new(order, true, 0)
    }

    pub fn b(order: DihedralOrder) -> DihedralElem {
        DihedralElem::new(order, true, 1)
    }

    /// `(ab)^k`.
    pub fn rotation(order: DihedralOrder, k: i64) -> DihedralElem {
        DihedralElem::new(order, false, k)
    }

    /// `a (ab)^k`.
    pub fn reflection(order: DihedralOrder, k: i64) -> DihedralElem {
        DihedralElem::new(order, true, k)
    }

    pub fn order_param(&self) -> DihedralOrder {
        self.order
    }

    pub fn is_reflection(&self) -> bool {
        self.reflection
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_identity(&self) -> bool {
        !self.reflection && self.shift == 0
    }

    pub fn mul(&self, other: &DihedralElem) -> Result<DihedralElem, GroupError> {
        if self.order != other.order {
            return Err(GroupError::Mismatch(format!("{} vs {}", self.order, other.order)));
        }
        let k = if other.reflection { -self.shift } else { self.shift };
        Ok(DihedralElem::new(self.order, self.reflection ^ other.reflection, k + other.shift))
    }

    pub fn inverse(&self) -> DihedralElem {
        if self.reflection {
            *self
        } else {
            DihedralElem::new(self.order, false, -self.shift)
        }
    }

    /// Reduction `Z2 * Z2 -> D_m`.
    pub fn reduce_mod(&self, m: u64) -> DihedralElem {
        DihedralElem::new(DihedralOrder::Finite(m), self.reflection, self.shift)
    }

    /// Element order; `None` for infinite order.
    pub fn element_order(&self) -> Option<u64> {
        if self.reflection {
            return Some(2);
        }
        match self.order {
            _ if self.shift == 0 => Some(1),
            DihedralOrder::Finite(m) => Some(m / num_integer::gcd(m, self.shift as u64)),
            DihedralOrder::Infinite => None,
        }
    }
}

impl fmt::Display for DihedralElem {
    /// `a^e*(ab)^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^{}*(ab)^{}", u8::from(self.reflection), self.shift)
    }
}

impl DihedralElem {
    /// Parses the `a^e*(ab)^k` form for a given group.
    pub fn parse(s: &str, order: DihedralOrder) -> Result<DihedralElem, GroupError> {
        let bad = || GroupError::Parse(s.to_string());
        let (e, k) = s.trim().split_once('*').ok_or_else(bad)?;
        let e = e.strip_prefix("a^").ok_or_else(bad)?;
        let k = k.strip_prefix("(ab)^").ok_or_else(bad)?;
        let e: u8 = e.parse().map_err(|_| bad())?;
        let k: i64 = k.parse().map_err(|_| bad())?;
        if e > 1 {
            return Err(bad());
        }
        Ok(DihedralElem::new(order, e == 1, k))
    }
}

/// Which free product normal form a [`FreeProdZ2Elem`] lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FreeProdKind {
    /// `Z2 * Z2 = <a, b | a^2, b^2>`.
    Infinite,
    /// `(Z2 * Z2) x Z2 = <a, b, c | a^2, b^2, c^2, ab = ba, ac = ca>`, with
    /// `a` central and `b`, `c` free.
    TimesZ2,
}

/// Alternating word in the free letters plus, for [`FreeProdKind::TimesZ2`],
/// the exponent of the central `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeProdZ2Elem {
    letters: Vec<char>,
    central: Option<bool>,
}

impl FreeProdZ2Elem {
    pub fn identity(kind: FreeProdKind) -> FreeProdZ2Elem {
        FreeProdZ2Elem {
            letters: Vec::new(),
            central: match kind {
                FreeProdKind::Infinite => None,
                FreeProdKind::TimesZ2 => Some(false),
            },
        }
    }

    pub fn kind(&self) -> FreeProdKind {
        if self.central.is_some() {
            FreeProdKind::TimesZ2
        } else {
            FreeProdKind::Infinite
        }
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn central_flag(&self) -> Option<bool> {
        self.central
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty() && self.central != Some(true)
    }

    fn push(&mut self, c: char) {
        if self.letters.last() == Some(&c) {
            self.letters.pop();
        } else {
            self.letters.push(c);
        }
    }

    pub fn mul(&self, other: &FreeProdZ2Elem) -> Result<FreeProdZ2Elem, GroupError> {
        if self.kind() != other.kind() {
            return Err(GroupError::Mismatch("free product kinds differ".into()));
        }
        let mut out = self.clone();
        for &c in &other.letters {
            out.push(c);
        }
        out.central = match (self.central, other.central) {
            (Some(x), Some(y)) => Some(x ^ y),
            _ => None,
        };
        Ok(out)
    }

    pub fn inverse(&self) -> FreeProdZ2Elem {
        FreeProdZ2Elem { letters: self.letters.iter().rev().copied().collect(), central: self.central }
    }
}

/// Normal form of a word over `{a, b}` (infinite dihedral) or `{a, b, c}`
/// (with `a` central).
pub fn freeprod_reduce(word: &str, kind: FreeProdKind) -> Result<FreeProdZ2Elem, GroupError> {
    let mut out = FreeProdZ2Elem::identity(kind);
    for c in word.chars().filter(|c| !c.is_whitespace() && *c != '*') {
        match (kind, c) {
            (FreeProdKind::Infinite, 'a' | 'b') | (FreeProdKind::TimesZ2, 'b' | 'c') => out.push(c),
            (FreeProdKind::TimesZ2, 'a') => out.central = out.central.map(|f| !f),
            _ => return Err(GroupError::UnknownLetter(c)),
        }
    }
    Ok(out)
}

impl fmt::Display for FreeProdZ2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.central == Some(true) {
            parts.push("a".into());
        }
        parts.extend(self.letters.iter().map(|c| c.to_string()));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl FromStr for DihedralOrder {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<DihedralOrder, GroupError> {
        match s.trim() {
            "inf" | "infinite" | "Z2*Z2" => Ok(DihedralOrder::Infinite),
            t => t
                .trim_start_matches('D')
                .parse::<u64>()
                .ok()
                .filter(|m| *m >= 1)
                .map(DihedralOrder::Finite)
                .ok_or_else(|| GroupError::Parse(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D4: DihedralOrder = DihedralOrder::Finite(4);
    const INF: DihedralOrder = DihedralOrder::Infinite;

    #[test]
    fn basic_products() {
        let a = DihedralElem::a(D4);
        assert!(a.mul(&a).unwrap().is_identity());
        let r2 = DihedralElem::rotation(D4, 2);
        assert!(r2.mul(&r2).unwrap().is_identity());
        let ab = DihedralElem::a(INF).mul(&DihedralElem::b(INF)).unwrap();
        assert_eq!(ab, DihedralElem::rotation(INF, 1));
        assert_eq!(DihedralElem::a(INF).mul(&DihedralElem::reflection(INF, 1)).unwrap(), ab);
        assert_eq!(ab.element_order(), None);
        assert!(DihedralElem::a(D4).mul(&DihedralElem::a(INF)).is_err());
    }

    #[test]
    fn rotation_order_is_m() {
        for m in 1..=64u64 {
            let d = DihedralOrder::Finite(m);
            let r = DihedralElem::a(d).mul(&DihedralElem::b(d)).unwrap();
            let mut acc = DihedralElem::identity(d);
            for k in 1..=m {
                acc = acc.mul(&r).unwrap();
                assert_eq!(acc.is_identity(), k == m, "m={m} k={k}");
            }
        }
        let r = DihedralElem::rotation(INF, 1);
        let mut acc = DihedralElem::identity(INF);
        for _ in 0..1024 {
            acc = acc.mul(&r).unwrap();
            assert!(!acc.is_identity());
        }
    }

    #[test]
    fn free_product_forms() {
        assert_eq!(freeprod_reduce("abab", FreeProdKind::Infinite).unwrap().letters(), &['a', 'b', 'a', 'b']);
        assert!(freeprod_reduce("aabb", FreeProdKind::Infinite).unwrap().is_identity());
        let g = freeprod_reduce("abac", FreeProdKind::TimesZ2).unwrap();
        assert_eq!(g.letters(), &['b', 'c']);
        assert_eq!(g.central_flag(), Some(false));
        assert_eq!(g.to_string(), "b*c");
        assert!(freeprod_reduce("cacacaca", FreeProdKind::TimesZ2).unwrap().is_identity());
        assert!(matches!(freeprod_reduce("abc", FreeProdKind::Infinite), Err(GroupError::UnknownLetter('c'))));
    }

    #[test]
    fn display_and_parse() {
        let x = DihedralElem::reflection(INF, -3);
        assert_eq!(x.to_string(), "a^1*(ab)^-3");
        assert_eq!(DihedralElem::parse(&x.to_string(), INF).unwrap(), x);
        assert_eq!("D8".parse::<DihedralOrder>().unwrap(), DihedralOrder::Finite(8));
    }
}
