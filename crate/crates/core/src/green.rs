//! Green's preorder and congruence, partitions and quotient semigroups.

use thiserror::Error;

use crate::cayley::{ElementId, Semigroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreenError {
    #[error("partition is not a congruence: [{a}] + [{b}] is not well defined")]
    CongruenceViolation { a: ElementId, b: ElementId },
}

/// Labeled equivalence classes over `0..n`.
///
/// Classes are sorted internally and ordered by their least element, so two
/// partitions of the same relation always compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<ElementId>>,
}

impl Partition {
    /// Builds the partition induced by an equivalence relation.
    pub fn from_relation(n: usize, mut related: impl FnMut(ElementId, ElementId) -> bool) -> Self {
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<ElementId>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut class = vec![a];
            class_of[a] = id;
            for (b, slot) in class_of.iter_mut().enumerate().skip(a + 1) {
                if *slot == usize::MAX && related(a, b) {
                    *slot = id;
                    class.push(b);
                }
            }
            classes.push(class);
        }
        Partition { class_of, classes }
    }

    /// Builds a partition from arbitrary class labels.
    pub fn from_labels<L: Eq>(labels: &[L]) -> Self {
        Self::from_relation(labels.len(), |a, b| labels[a] == labels[b])
    }

    pub fn class_of(&self, a: ElementId) -> usize {
        self.class_of[a]
    }

    pub fn class(&self, index: usize) -> &[ElementId] {
        &self.classes[index]
    }

    pub fn classes(&self) -> &[Vec<ElementId>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }
}

/// A surjective homomorphism onto a quotient semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMap {
    pub target: Semigroup,
    pub projection: Vec<ElementId>,
}

impl QuotientMap {
    pub fn project(&self, a: ElementId) -> ElementId {
        self.projection[a]
    }

    /// Checks `π(a + b) = π(a) + π(b)` on every pair.
    pub fn is_homomorphism(&self, source: &Semigroup) -> bool {
        source.elements().all(|a| {
            source.elements().all(|b| {
                self.projection[source.add(a, b)]
                    == self.target.add(self.projection[a], self.projection[b])
            })
        })
    }
}

/// Quotient by a partition, with target ids equal to class indices. Every
/// pair of elements is checked for well-definedness.
pub fn quotient_by(s: &Semigroup, partition: &Partition) -> Result<QuotientMap, GreenError> {
    let labels: Vec<usize> = s.elements().map(|a| partition.class_of(a)).collect();
    quotient_by_labels(s, &labels, partition.len())
}

/// Quotient where element `a` maps to `labels[a] < count`. Every label must
/// be used.
pub fn quotient_by_labels(
    s: &Semigroup,
    labels: &[ElementId],
    count: usize,
) -> Result<QuotientMap, GreenError> {
    let mut table = vec![usize::MAX; count * count];
    for a in s.elements() {
        for b in s.elements() {
            let slot = &mut table[labels[a] * count + labels[b]];
            let sum = labels[s.add(a, b)];
            if *slot == usize::MAX {
                *slot = sum;
            } else if *slot != sum {
                return Err(GreenError::CongruenceViolation { a, b });
            }
        }
    }
    assert!(
        table.iter().all(|&v| v != usize::MAX),
        "every quotient label must be hit"
    );
    let target = Semigroup::from_flat(count, table)
        .expect("quotient of a semigroup by a congruence is a semigroup");
    Ok(QuotientMap {
        target,
        projection: labels.to_vec(),
    })
}

/// `a ≤_H b`: `a = b` or `a = b + t` for some `t ∈ S`.
pub fn green_leq(s: &Semigroup, a: ElementId, b: ElementId) -> bool {
    a == b || s.elements().any(|t| s.add(b, t) == a)
}

/// Strict order: `a ≤_H b` but not `b ≤_H a`.
pub fn green_lt(s: &Semigroup, a: ElementId, b: ElementId) -> bool {
    green_leq(s, a, b) && !green_leq(s, b, a)
}

/// H-classes: mutual `≤_H`.
pub fn green_classes(s: &Semigroup) -> Partition {
    let n = s.order();
    let leq: Vec<bool> = (0..n * n).map(|p| green_leq(s, p / n, p % n)).collect();
    Partition::from_relation(n, |a, b| leq[a * n + b] && leq[b * n + a])
}

/// `S/H`, with each class labeled by its least element's rank.
pub fn quotient_green(s: &Semigroup) -> Result<QuotientMap, GreenError> {
    quotient_by(s, &green_classes(s))
}

/// All subgroups trivial, i.e. exponent 1.
pub fn is_group_free(s: &Semigroup) -> bool {
    s.exponent() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::fixtures::*;

    #[test]
    fn green_preorder_examples() {
        let n = n2();
        assert!(green_leq(&n, 1, 0));
        assert!(!green_leq(&n, 0, 1));
        assert!(green_leq(&c2(), 0, 1));
        assert!(green_lt(&n, 1, 0));
    }

    #[test]
    fn green_class_examples() {
        assert_eq!(green_classes(&c3()).classes(), &[vec![0, 1, 2]]);
        assert_eq!(green_classes(&n2()).classes(), &[vec![0], vec![1]]);
        assert_eq!(green_classes(&e3()).classes(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn green_quotients() {
        let q = quotient_green(&c3()).unwrap();
        assert_eq!(q.target, z1());
        assert_eq!(q.projection, vec![0, 0, 0]);

        let q = quotient_green(&n2()).unwrap();
        assert_eq!(q.target, n2());

        // {G, ∞}: G is the identity class, ∞ the zero class
        let q = quotient_green(&e3()).unwrap();
        assert_eq!(q.target, sl2());
        assert!(q.is_homomorphism(&e3()));
        assert!(is_group_free(&q.target));
    }

    #[test]
    fn group_free_examples() {
        assert!(is_group_free(&n2()));
        assert!(is_group_free(&sl2()));
        assert!(!is_group_free(&e3()));
    }

    #[test]
    fn non_congruence_is_rejected() {
        // {0}, {1, 2} in C3 does not respect addition
        let p = Partition::from_labels(&[0, 1, 1]);
        assert!(matches!(
            quotient_by(&c3(), &p),
            Err(GreenError::CongruenceViolation { .. })
        ));
    }

    #[test]
    fn partition_bookkeeping() {
        let p = Partition::from_labels(&['b', 'a', 'b', 'c']);
        assert_eq!(p.classes(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(p.class_of(2), 0);
        assert_eq!(p.len(), 3);
        assert!(!p.is_discrete());
        assert!(Partition::from_labels(&[1, 2, 3]).is_discrete());
    }
}
