use std::fmt;

use super::GroupError;

/// Permutation of `{1, ..., d}`, stored 0-based.
///
/// Products act on the right: `(p * q)(i) = q(p(i))`, so words are evaluated
/// left to right, matching the right action of coset tables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm { images: (0..degree as u32).collect() }
    }

    /// 0-based images; must be a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Perm, GroupError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || seen[x] {
                return Err(GroupError::NotBijection);
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Perm {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm { images }
    }

    /// Builds a permutation from 1-based disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Perm, GroupError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x == 0 || y == 0 || x as usize > degree || y as usize > degree {
                    return Err(GroupError::PointOutOfRange { point: x.max(y), degree });
                }
                if touched[x as usize - 1] {
                    return Err(GroupError::NotBijection);
                }
                touched[x as usize - 1] = true;
                images[x as usize - 1] = y - 1;
            }
        }
        Perm::from_images(images)
    }

    /// Parses cycle notation such as `(1 4)(2 3)` or `()`; commas between
    /// points are accepted.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm, GroupError> {
        let bad = || GroupError::Parse(s.to_string());
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let inner_end = rest.find(')').ok_or_else(bad)?;
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let body = &inner[..inner_end - 1];
            let pts = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            if !pts.is_empty() {
                cycles.push(pts);
            }
            rest = rest[inner_end + 1..].trim_start();
        }
        let refs: Vec<&[u32]> = cycles.iter().map(Vec::as_slice).collect();
        Perm::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn mul(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `self^-1 * other^-1 * self * other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    /// `g^-1 * self * g`.
    pub fn conjugate(&self, g: &Perm) -> Perm {
        g.inverse().mul(self).mul(g)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved_point(&self) -> Option<u32> {
        self.images.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i as u32)
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut l = 1u64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            l = num_integer::lcm(l, len);
        }
        l
    }

    /// Same permutation on `offset + degree` points, acting on the upper block.
    pub fn shifted(&self, offset: usize, total: usize) -> Perm {
        let mut images: Vec<u32> = (0..total as u32).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[offset + i] = offset as u32 + x;
        }
        Perm { images }
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            any = true;
            f.write_str("(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{}", x + 1)?;
                x = self.images[x] as usize;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

/// Interval-reversing involution `i -> p + q - i` on `[p, q]`, identity elsewhere.
pub fn sym_generator(n: u32, p: u32, q: u32) -> Result<Perm, GroupError> {
    if p < 1 || p >= q || q > n {
        return Err(GroupError::Interval { n, p, q });
    }
    let images = (1..=n).map(|i| if (p..=q).contains(&i) { p + q - i - 1 } else { i - 1 }).collect();
    Ok(Perm::from_images_unchecked(images))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_reversals() {
        assert_eq!(sym_generator(4, 1, 4).unwrap().to_string(), "(1 4)(2 3)");
        assert_eq!(sym_generator(4, 2, 3).unwrap().to_string(), "(2 3)");
        assert_eq!(sym_generator(5, 1, 2).unwrap().to_string(), "(1 2)");
        assert!(sym_generator(4, 2, 5).is_err());
        assert!(sym_generator(4, 3, 3).is_err());
    }

    #[test]
    fn cycle_notation_round_trip() {
        for s in ["(1 4)(2 3)", "()", "(1 2 3 5)"] {
            assert_eq!(Perm::parse_cycles(s, 6).unwrap().to_string(), s);
        }
        assert_eq!(Perm::parse_cycles("(1,2)(3,4)", 4).unwrap().to_string(), "(1 2)(3 4)");
        assert!(Perm::parse_cycles("(1 7)", 4).is_err());
        assert!(Perm::parse_cycles("(1 2)(2 3)", 4).is_err());
    }

    #[test]
    fn right_action_product() {
        let a = Perm::parse_cycles("(1 2)", 3).unwrap();
        let b = Perm::parse_cycles("(2 3)", 3).unwrap();
        // 1 -> 2 under a, then 2 -> 3 under b.
        assert_eq!(a.mul(&b).apply(0), 2);
        assert_eq!(a.mul(&b).order(), 3);
        assert!(a.mul(&b).mul(&a.mul(&b).inverse()).is_identity());
        assert_eq!(a.mul(&b).pow(3), Perm::identity(3));
    }
}
