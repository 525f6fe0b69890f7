use std::fmt;

use crate::error::{invalid, Result};

/// A subset of `[n]`; bit `i - 1` is set iff element `i` belongs to the subset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const WIDTH: usize = 32;
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// `[n]` itself.
    pub fn full(n: usize) -> SubsetMask {
        debug_assert!(n <= Self::WIDTH);
        SubsetMask(((1u64 << n) - 1) as u32)
    }

    /// Builds a mask from 1-indexed elements.
    pub fn from_elements(elements: impl IntoIterator<Item = usize>) -> Result<SubsetMask> {
        let mut bits = 0u32;
        for e in elements {
            if e == 0 || e > Self::WIDTH {
                return Err(invalid(format!("element {e} outside 1..={}", Self::WIDTH)));
            }
            bits |= 1 << (e - 1);
        }
        Ok(SubsetMask(bits))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_within(self, n: usize) -> bool {
        n >= Self::WIDTH || self.0 >> n == 0
    }

    /// Membership of the 1-indexed element `e`.
    pub fn contains(self, e: usize) -> bool {
        (1..=Self::WIDTH).contains(&e) && self.0 >> (e - 1) & 1 == 1
    }

    pub(crate) fn contains_bit(self, bit: u32) -> bool {
        self.0 >> bit & 1 == 1
    }

    pub(crate) fn with_bit(self, bit: u32) -> SubsetMask {
        SubsetMask(self.0 | 1 << bit)
    }

    pub(crate) fn without_bit(self, bit: u32) -> SubsetMask {
        SubsetMask(self.0 & !(1 << bit))
    }

    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    pub fn difference(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Bit positions (0-based) in increasing order.
    pub(crate) fn iter_bits(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(b)
            }
        })
    }

    /// Elements (1-based) in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        self.iter_bits().map(|b| b as usize + 1)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// All `k`-subsets of `[n]` in increasing mask (colex) order.
pub fn k_subsets(n: usize, k: usize) -> Vec<SubsetMask> {
    assert!(n <= SubsetMask::WIDTH, "ground set too large");
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![SubsetMask::EMPTY];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut v: u64 = (1u64 << k) - 1;
    while v < limit {
        out.push(SubsetMask(v as u32));
        // Gosper's hack: next integer with the same popcount.
        let t = v | (v - 1);
        v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// A bijection of `[n]`, stored as the image of each element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// `images[i - 1]` is the image of element `i`.
    pub fn new(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        if n > SubsetMask::WIDTH {
            return Err(invalid(format!("permutation of {n} elements is too wide")));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(invalid(format!("{images:?} is not a permutation of [{n}]")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// The transposition of `a` and `b`.
    pub fn swap(n: usize, a: usize, b: usize) -> Result<Permutation> {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(invalid(format!("swap({a},{b}) outside [{n}]")));
        }
        let mut p = Permutation::identity(n);
        p.images.swap(a - 1, b - 1);
        Ok(p)
    }

    /// Every permutation of `[n]`, in lexicographic order of image vectors.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation {
                images: cur.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of the 1-indexed element `e`.
    pub fn image(&self, e: usize) -> usize {
        self.images[e - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x - 1]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// Image of a subset.
    pub fn apply(&self, s: SubsetMask) -> SubsetMask {
        let mut out = 0u32;
        for b in s.iter_bits() {
            out |= 1 << (self.images[b as usize] - 1);
        }
        SubsetMask(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_subsets_counts_and_order() {
        assert_eq!(k_subsets(4, 2).len(), 6);
        assert_eq!(k_subsets(7, 3).len(), 35);
        assert_eq!(k_subsets(3, 0), vec![SubsetMask::EMPTY]);
        assert!(k_subsets(2, 3).is_empty());
        let s = k_subsets(5, 2);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(k_subsets(32, 32), vec![SubsetMask(u32::MAX)]);
    }

    #[test]
    fn display_is_one_indexed() {
        let s = SubsetMask::from_elements([1, 3]).unwrap();
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(s.0, 0b101);
        assert!(SubsetMask::from_elements([0]).is_err());
    }

    #[test]
    fn permutation_algebra() {
        let p = Permutation::new(vec![2, 3, 1]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(0).len(), 1);
    }
}
