//! Sequences over a semigroup, stored as multiplicity vectors.

use std::fmt;

use crate::cayley::ElementId;

/// A finite multiset of elements: `counts[a]` copies of element `a`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    counts: Vec<usize>,
}

impl Sequence {
    pub fn empty(order: usize) -> Self {
        Sequence {
            counts: vec![0; order],
        }
    }

    pub fn from_counts(counts: Vec<usize>) -> Self {
        Sequence { counts }
    }

    pub fn from_terms(order: usize, terms: &[ElementId]) -> Self {
        let mut counts = vec![0; order];
        for &a in terms {
            counts[a] += 1;
        }
        Sequence { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, a: ElementId) -> usize {
        self.counts[a]
    }

    /// Size of the underlying semigroup.
    pub fn order(&self) -> usize {
        self.counts.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Terms in non-decreasing id order.
    pub fn terms(&self) -> Vec<ElementId> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(a, &c)| std::iter::repeat_n(a, c))
            .collect()
    }

    pub fn push(&mut self, a: ElementId) {
        self.counts[a] += 1;
    }

    pub fn pop(&mut self, a: ElementId) {
        assert!(self.counts[a] > 0, "element {a} is not in the sequence");
        self.counts[a] -= 1;
    }

    /// `self | other`: every multiplicity is at most the one in `other`.
    pub fn divides(&self, other: &Sequence) -> bool {
        self.counts.len() == other.counts.len()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// `self · other`.
    pub fn concat(&self, other: &Sequence) -> Sequence {
        Sequence {
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Every sub-multiset, including the empty one and `self`.
    pub fn sub_multisets(&self) -> SubMultisets<'_> {
        SubMultisets {
            bound: &self.counts,
            current: Some(vec![0; self.counts.len()]),
        }
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `{a:2, c:1}`-style rendering by element id.
impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (a, &c) in self.counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{a}:{c}")?;
        }
        f.write_str("}")
    }
}

/// Odometer over all `x` with `0 ≤ x ≤ bound` componentwise.
pub struct SubMultisets<'a> {
    bound: &'a [usize],
    current: Option<Vec<usize>>,
}

impl Iterator for SubMultisets<'_> {
    type Item = Sequence;

    fn next(&mut self) -> Option<Sequence> {
        let current = self.current.as_mut()?;
        let out = Sequence::from_counts(current.clone());
        let mut i = 0;
        loop {
            if i == current.len() {
                self.current = None;
                break;
            }
            if current[i] < self.bound[i] {
                current[i] += 1;
                break;
            }
            current[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// All multisets of exactly `len` terms over `order` elements, in reverse
/// lexicographic order of their multiplicity vectors (`{0:len}` first).
pub struct Multisets {
    order: usize,
    current: Option<Vec<usize>>,
}

impl Multisets {
    pub fn new(order: usize, len: usize) -> Self {
        assert!(order > 0);
        let mut first = vec![0; order];
        first[0] = len;
        Multisets {
            order,
            current: Some(first),
        }
    }
}

impl Iterator for Multisets {
    type Item = Sequence;

    fn next(&mut self) -> Option<Sequence> {
        let current = self.current.as_mut()?;
        let out = Sequence::from_counts(current.clone());
        // move one unit from the last nonzero slot before the tail rightwards,
        // then sweep the tail back next to it
        let last = self.order - 1;
        let tail = current[last];
        current[last] = 0;
        match (0..last).rev().find(|&i| current[i] > 0) {
            Some(i) => {
                current[i] -= 1;
                current[i + 1] = tail + 1;
            }
            None => self.current = None,
        }
        Some(out)
    }
}

/// `C(len + order − 1, order − 1)`, the number of multisets of a given length.
pub fn multiset_count(order: usize, len: usize) -> u128 {
    let (n, k) = ((len + order - 1) as u128, (order - 1) as u128);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}
