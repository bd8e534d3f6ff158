//! Zero-sum invariants: `σ`, reducibility, the Davenport constants `d(S)` and
//! `D(S)`, `κ(S)` and the Erdős–Ginzburg–Ziv type constant `E(S)`.
//!
//! Sums are tracked in `S⁰` so the empty sum always has a representative.
//! When `S` has no identity that representative is the adjoined element and
//! never equals the sum of a nonempty sequence, which is exactly the rule
//! that the empty subsequence only counts in monoids.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cayley::{ElementId, Semigroup};
use crate::sequence::{Multisets, Sequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroSumError {
    #[error("sequence is empty")]
    EmptyInput,
    #[error("cannot remove {gap} terms from a sequence of length {len}")]
    GapTooLarge { gap: usize, len: usize },
    #[error("semigroup has no identity element")]
    NotAMonoid,
    #[error("sequence {0} was expected to have no balanced subsequence")]
    WitnessRejected(Sequence),
}

/// Result of the `E(S)` search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EgzValue {
    Exact(usize),
    /// No length up to and including the cap works.
    CapExceeded(usize),
}

impl EgzValue {
    pub fn exact(self) -> Option<usize> {
        match self {
            EgzValue::Exact(v) => Some(v),
            EgzValue::CapExceeded(_) => None,
        }
    }
}

/// The extremal sequence certifying `E(S) ≥ D(S) + κ(S) − 1` in a monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidLowerBound {
    pub bound: usize,
    pub witness: Sequence,
}

/// Cayley table of `S⁰` plus the id of its identity.
struct Adjoined {
    order: usize,
    size: usize,
    identity: ElementId,
    table: Vec<ElementId>,
}

impl Adjoined {
    fn new(s: &Semigroup) -> Self {
        let s0 = s.adjoin_identity();
        Adjoined {
            order: s.order(),
            size: s0.order(),
            identity: s.identity_in_adjoined(),
            table: s0.table().to_vec(),
        }
    }

    #[inline]
    fn add(&self, a: ElementId, b: ElementId) -> ElementId {
        self.table[a * self.size + b]
    }

    fn sum(&self, seq: &Sequence) -> ElementId {
        let mut x = self.identity;
        for (a, &c) in seq.counts().iter().enumerate() {
            for _ in 0..c {
                x = self.add(x, a);
            }
        }
        x
    }

    /// Some proper sub-multiset has the same sum.
    fn is_reducible(&self, seq: &Sequence) -> bool {
        // sums of proper sub-multisets of the prefix processed so far
        let mut strict = vec![false; self.size];
        let mut next = vec![false; self.size];
        let mut full = self.identity;
        for (a, &c) in seq.counts().iter().enumerate().filter(|(_, &c)| c > 0) {
            next.fill(false);
            for r in (0..self.size).filter(|&r| strict[r]) {
                let mut x = r;
                for _ in 0..=c {
                    next[x] = true;
                    x = self.add(x, a);
                }
            }
            let mut x = full;
            for _ in 0..c {
                next[x] = true;
                x = self.add(x, a);
            }
            full = x;
            std::mem::swap(&mut strict, &mut next);
        }
        strict[full]
    }

    /// Some sub-multiset with exactly `gap` fewer terms has the same sum.
    fn has_balanced(&self, seq: &Sequence, gap: usize) -> bool {
        let width = self.size;
        // layer c: sums of kept terms after removing c terms so far
        let mut layers = vec![false; (gap + 1) * width];
        let mut next = vec![false; (gap + 1) * width];
        layers[self.identity] = true;
        for (a, &m) in seq.counts().iter().enumerate().filter(|(_, &m)| m > 0) {
            next.fill(false);
            for removed in 0..=gap {
                for r in (0..width).filter(|&r| layers[removed * width + r]) {
                    // keep k copies: sum r + k·a, removed + (m − k)
                    let mut x = r;
                    for k in 0..=m {
                        let total = removed + (m - k);
                        if total <= gap {
                            next[total * width + x] = true;
                        }
                        x = self.add(x, a);
                    }
                }
            }
            std::mem::swap(&mut layers, &mut next);
        }
        layers[gap * width + self.sum(seq)]
    }
}

/// `σ(seq)`; `None` for the empty sequence over a semigroup without identity.
pub fn sigma(s: &Semigroup, seq: &Sequence) -> Option<ElementId> {
    let mut terms = seq.terms().into_iter();
    match terms.next() {
        Some(first) => Some(terms.fold(first, |x, a| s.add(x, a))),
        None => s.identity(),
    }
}

pub fn is_reducible(s: &Semigroup, seq: &Sequence) -> Result<bool, ZeroSumError> {
    if seq.is_empty() {
        return Err(ZeroSumError::EmptyInput);
    }
    Ok(Adjoined::new(s).is_reducible(seq))
}

/// Every irreducible sequence, found by depth-first extension in
/// non-decreasing element order. Sub-multisets of irreducible sequences are
/// irreducible, so reducible branches are cut.
pub fn enumerate_irreducible(s: &Semigroup) -> Vec<Sequence> {
    let ctx = Adjoined::new(s);
    let mut out = Vec::new();
    let mut current = Sequence::empty(s.order());
    extend_irreducible(&ctx, &mut current, 0, &mut out);
    out
}

fn extend_irreducible(
    ctx: &Adjoined,
    current: &mut Sequence,
    from: ElementId,
    out: &mut Vec<Sequence>,
) {
    for a in from..ctx.order {
        current.push(a);
        if !ctx.is_reducible(current) {
            out.push(current.clone());
            extend_irreducible(ctx, current, a, out);
        }
        current.pop(a);
    }
}

/// `D(S)`: one more than the longest irreducible sequence.
pub fn davenport(s: &Semigroup) -> usize {
    1 + enumerate_irreducible(s)
        .iter()
        .map(Sequence::len)
        .max()
        .unwrap_or(0)
}

/// `d(S)`, by brute force and without the irreducible enumeration: for each
/// length, the largest minimal size of an equal-sum sub-multiset. Stops at the
/// first length where every sequence has a strictly shorter one.
pub fn small_davenport(s: &Semigroup) -> usize {
    let mut best = 0;
    for len in 1.. {
        let mut all_shorter = true;
        for seq in Multisets::new(s.order(), len) {
            let target = sigma(s, &seq);
            let shortest = seq
                .sub_multisets()
                .filter(|b| sigma(s, b) == target)
                .map(|b| b.len())
                .min()
                .expect("the sequence itself always qualifies");
            best = best.max(shortest);
            all_shorter &= shortest < len;
        }
        if all_shorter {
            break;
        }
    }
    best
}

/// `κ(S) = ⌈|S| / exp(S)⌉ · exp(S)`.
pub fn kappa(s: &Semigroup) -> usize {
    let exp = s.exponent();
    s.order().div_ceil(exp) * exp
}

/// Is there a sub-multiset `B` with `|seq| − |B| = gap` and `σ(B) = σ(seq)`?
pub fn balanced_subsequence_exists(
    s: &Semigroup,
    seq: &Sequence,
    gap: usize,
) -> Result<bool, ZeroSumError> {
    if seq.is_empty() {
        return Err(ZeroSumError::EmptyInput);
    }
    if gap > seq.len() {
        return Err(ZeroSumError::GapTooLarge {
            gap,
            len: seq.len(),
        });
    }
    Ok(Adjoined::new(s).has_balanced(seq, gap))
}

/// First multiset of length `len` (in enumeration order) without a balanced
/// subsequence for `gap`, or `None` when every one has one.
pub fn first_unbalanced(s: &Semigroup, len: usize, gap: usize) -> Option<Sequence> {
    if len < gap {
        return Multisets::new(s.order(), len).next();
    }
    let ctx = Adjoined::new(s);
    let candidates: Vec<Sequence> = Multisets::new(s.order(), len).collect();
    candidates
        .into_par_iter()
        .find_first(|seq| !ctx.has_balanced(seq, gap))
}

/// Smallest `ℓ` such that every sequence of length `ℓ` has a subsequence of
/// length `ℓ − κ(S)` with the same sum. The search starts at `κ(S)`, or at
/// `D(S) + κ(S) − 1` for monoids, and relies on the property holding for all
/// lengths above the first one where it holds.
pub fn egz_constant(s: &Semigroup, cap: usize) -> EgzValue {
    let k = kappa(s);
    let start = if s.is_monoid() {
        davenport(s) + k - 1
    } else {
        k
    };
    egz_search(s, k, start, cap)
}

pub(crate) fn egz_search(s: &Semigroup, kappa: usize, start: usize, cap: usize) -> EgzValue {
    (start.max(kappa)..=cap)
        .find(|&len| first_unbalanced(s, len, kappa).is_none())
        .map_or(EgzValue::CapExceeded(cap), EgzValue::Exact)
}

/// Builds a longest irreducible sequence padded with `κ(S) − 1` copies of the
/// identity, checks that it has no balanced subsequence, and returns
/// `D(S) + κ(S) − 1` with that witness.
pub fn egz_lower_bound_monoid(s: &Semigroup) -> Result<MonoidLowerBound, ZeroSumError> {
    let identity = s.identity().ok_or(ZeroSumError::NotAMonoid)?;
    let longest = enumerate_irreducible(s)
        .into_iter()
        .max_by_key(Sequence::len)
        .unwrap_or_else(|| Sequence::empty(s.order()));
    monoid_lower_bound_from(s, identity, longest)
}

pub(crate) fn monoid_lower_bound_from(
    s: &Semigroup,
    identity: ElementId,
    longest_irreducible: Sequence,
) -> Result<MonoidLowerBound, ZeroSumError> {
    let k = kappa(s);
    let d = longest_irreducible.len() + 1;
    let mut witness = longest_irreducible;
    for _ in 1..k {
        witness.push(identity);
    }
    let fails = witness.len() < k || !Adjoined::new(s).has_balanced(&witness, k);
    if !fails {
        return Err(ZeroSumError::WitnessRejected(witness));
    }
    Ok(MonoidLowerBound {
        bound: d + k - 1,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::fixtures::*;

    fn seq(order: usize, terms: &[ElementId]) -> Sequence {
        Sequence::from_terms(order, terms)
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&c2(), &seq(2, &[1, 1])), Some(0));
        assert_eq!(sigma(&n2(), &seq(2, &[0, 0, 0])), Some(1));
        assert_eq!(sigma(&n2(), &Sequence::empty(2)), None);
        assert_eq!(sigma(&sl2(), &Sequence::empty(2)), Some(0));
    }

    #[test]
    fn reducibility_examples() {
        assert_eq!(is_reducible(&c2(), &seq(2, &[1, 1])), Ok(true));
        assert_eq!(is_reducible(&n2(), &seq(2, &[0, 0])), Ok(false));
        assert_eq!(is_reducible(&m3(), &seq(3, &[0, 0, 0])), Ok(false));
        assert_eq!(
            is_reducible(&n2(), &Sequence::empty(2)),
            Err(ZeroSumError::EmptyInput)
        );
        // the identity alone reduces to the empty sequence
        assert_eq!(is_reducible(&z1(), &seq(1, &[0])), Ok(true));
        // ∞ alone in a non-monoid is irreducible
        assert_eq!(is_reducible(&n2(), &seq(2, &[1])), Ok(false));
    }

    #[test]
    fn irreducible_enumeration() {
        assert!(enumerate_irreducible(&z1()).is_empty());
        assert_eq!(
            enumerate_irreducible(&n2()),
            vec![seq(2, &[0]), seq(2, &[0, 0]), seq(2, &[1])]
        );
        assert_eq!(enumerate_irreducible(&c2()), vec![seq(2, &[1])]);
    }

    #[test]
    fn davenport_examples() {
        assert_eq!(davenport(&n2()), 3);
        assert_eq!(davenport(&e3()), 2);
        assert_eq!(davenport(&z1()), 1);
        for n in 1..=6 {
            assert_eq!(davenport(&Semigroup::cyclic(n)), n);
        }
    }

    #[test]
    fn small_davenport_examples() {
        assert_eq!(small_davenport(&n2()), 2);
        assert_eq!(small_davenport(&z1()), 0);
        assert_eq!(small_davenport(&sl2()), 1);
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&e3()), 4);
        assert_eq!(kappa(&m3()), 4);
        assert_eq!(kappa(&c3()), 3);
        assert_eq!(kappa(&n2()), 2);
        assert_eq!(kappa(&c2().product(&c2())), 4);
    }

    #[test]
    fn balanced_subsequence_examples() {
        let n = n2();
        assert_eq!(
            balanced_subsequence_exists(&n, &seq(2, &[0, 0, 0, 0]), 2),
            Ok(true)
        );
        assert_eq!(
            balanced_subsequence_exists(&n, &seq(2, &[0, 0, 0]), 2),
            Ok(false)
        );
        assert_eq!(
            balanced_subsequence_exists(&c2(), &seq(2, &[1, 1, 0]), 2),
            Ok(true)
        );
        assert_eq!(
            balanced_subsequence_exists(&n, &seq(2, &[0]), 2),
            Err(ZeroSumError::GapTooLarge { gap: 2, len: 1 })
        );
        // removing everything needs an identity
        assert_eq!(
            balanced_subsequence_exists(&n, &seq(2, &[1, 1]), 2),
            Ok(false)
        );
        assert_eq!(
            balanced_subsequence_exists(&c2(), &seq(2, &[1, 1]), 2),
            Ok(true)
        );
    }

    #[test]
    fn egz_examples() {
        assert_eq!(egz_constant(&c2(), 10), EgzValue::Exact(3));
        assert_eq!(egz_constant(&n2(), 10), EgzValue::Exact(4));
        assert_eq!(egz_constant(&sl2(), 10), EgzValue::Exact(3));
        assert_eq!(egz_constant(&c3(), 10), EgzValue::Exact(5));
        assert_eq!(egz_constant(&e3(), 10), EgzValue::Exact(5));
        assert_eq!(egz_constant(&n2(), 3), EgzValue::CapExceeded(3));
    }

    #[test]
    fn monoid_lower_bounds() {
        let lb = egz_lower_bound_monoid(&sl2()).unwrap();
        assert_eq!(lb.bound, 3);
        assert_eq!(lb.witness, seq(2, &[1, 0]));

        let lb = egz_lower_bound_monoid(&e3()).unwrap();
        assert_eq!(lb.bound, 5);
        assert_eq!(lb.witness.count(0), 3);
        assert_eq!(lb.witness.len(), 4);

        let lb = egz_lower_bound_monoid(&z1()).unwrap();
        assert_eq!(lb.bound, 1);
        assert!(lb.witness.is_empty());

        assert_eq!(egz_lower_bound_monoid(&n2()), Err(ZeroSumError::NotAMonoid));
    }
}
